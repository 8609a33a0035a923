//! Propositional event algebra: formulas over atomic events, contexts that
//! fix the declared atoms and their logical relations, constituent
//! enumeration, and conditional events `E|H`.
//!
//! Logical relations among events are expressed as explicit constraint
//! formulas asserted to be logical truths. Equivalence and satisfiability are
//! decided by exhaustive enumeration of constituents; the context caps the
//! number of atoms so this stays a desk-scale operation.

use std::fmt;

use thiserror::Error;

/// Upper bound on declared atoms; exhaustive enumeration is 2^k.
pub const MAX_ATOMS: usize = 16;

pub type AtomId = usize;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(AtomId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn negated(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    /// Material implication, sugar for `!self | other`.
    pub fn implies(self, other: Formula) -> Formula {
        self.negated().or(other)
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(id) => assignment[*id],
            Formula::Not(f) => !f.eval(assignment),
            Formula::And(a, b) => a.eval(assignment) && b.eval(assignment),
            Formula::Or(a, b) => a.eval(assignment) || b.eval(assignment),
        }
    }

    fn max_atom(&self) -> Option<AtomId> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom(id) => Some(*id),
            Formula::Not(f) => f.max_atom(),
            Formula::And(a, b) | Formula::Or(a, b) => a.max_atom().max(b.max_atom()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 0,
            Formula::And(..) => 1,
            _ => 2,
        }
    }
}

/// One total truth assignment over a context's atoms that satisfies every
/// context constraint — an atom of the finite algebra generated by the
/// declared events.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Constituent {
    values: Vec<bool>,
}

impl Constituent {
    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn satisfies(&self, formula: &Formula) -> bool {
        formula.eval(&self.values)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EventError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("too many atoms: {0} (limit {MAX_ATOMS})")]
    TooManyAtoms(usize),
    #[error("context constraints are unsatisfiable")]
    InconsistentContext,
    #[error("conditioning event is logically impossible")]
    ImpossibleAntecedent,
    #[error("family must contain at least one conditional event")]
    EmptyFamily,
    #[error("formula mentions atom index {0}, outside the context")]
    AtomOutOfRange(AtomId),
}

/// The declared atomic events plus the constraint formulas asserted to be
/// logical truths. Immutable once built; construction checks consistency.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EventContext {
    atoms: Vec<String>,
    constraints: Vec<Formula>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "TRUE" && name != "FALSE"
}

impl EventContext {
    pub fn new<S: Into<String>>(
        atoms: Vec<S>,
        constraints: Vec<Formula>,
    ) -> Result<Self, EventError> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(EventError::TooManyAtoms(atoms.len()));
        }
        for (i, name) in atoms.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(EventError::InvalidIdentifier(name.clone()));
            }
            if atoms[..i].contains(name) {
                return Err(EventError::DuplicateAtom(name.clone()));
            }
        }
        for c in &constraints {
            if let Some(id) = c.max_atom() {
                if id >= atoms.len() {
                    return Err(EventError::AtomOutOfRange(id));
                }
            }
        }
        let ctx = EventContext { atoms, constraints };
        if ctx.constituents().is_empty() {
            return Err(EventError::InconsistentContext);
        }
        Ok(ctx)
    }

    pub fn unconstrained<S: Into<String>>(atoms: Vec<S>) -> Result<Self, EventError> {
        EventContext::new(atoms, Vec::new())
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atoms
    }

    pub fn constraints(&self) -> &[Formula] {
        &self.constraints
    }

    pub fn atom(&self, name: &str) -> Result<Formula, EventError> {
        self.atoms
            .iter()
            .position(|a| a == name)
            .map(Formula::Atom)
            .ok_or_else(|| EventError::Undeclared(name.to_string()))
    }

    /// All satisfying assignments of the conjoined constraints, in
    /// lexicographic order over the declaration order (false before true).
    pub fn constituents(&self) -> Vec<Constituent> {
        let k = self.atoms.len();
        let mut out = Vec::new();
        for index in 0u64..(1u64 << k) {
            let values: Vec<bool> = (0..k).map(|j| index >> (k - 1 - j) & 1 == 1).collect();
            if self.constraints.iter().all(|c| c.eval(&values)) {
                out.push(Constituent { values });
            }
        }
        out
    }

    pub fn satisfiable(&self, formula: &Formula) -> bool {
        self.constituents().iter().any(|c| c.satisfies(formula))
    }

    /// True iff the two formulas agree on every constituent.
    pub fn equivalent(&self, f: &Formula, g: &Formula) -> bool {
        self.constituents()
            .iter()
            .all(|c| c.satisfies(f) == c.satisfies(g))
    }

    pub fn parse(&self, text: &str) -> Result<Formula, EventError> {
        Parser::new(text, self).parse()
    }

    pub fn display(&self, formula: &Formula) -> String {
        let mut out = String::new();
        self.write_formula(formula, &mut out);
        out
    }

    fn write_formula(&self, formula: &Formula, out: &mut String) {
        match formula {
            Formula::True => out.push_str("TRUE"),
            Formula::False => out.push_str("FALSE"),
            Formula::Atom(id) => out.push_str(&self.atoms[*id]),
            Formula::Not(f) => {
                out.push('!');
                self.write_child(f, 2, out);
            }
            Formula::And(a, b) => {
                self.write_child(a, 1, out);
                out.push_str(" & ");
                self.write_child(b, 1, out);
            }
            Formula::Or(a, b) => {
                self.write_child(a, 0, out);
                out.push_str(" | ");
                self.write_child(b, 0, out);
            }
        }
    }

    fn write_child(&self, child: &Formula, parent_prec: u8, out: &mut String) {
        if child.precedence() < parent_prec {
            out.push('(');
            self.write_formula(child, out);
            out.push(')');
        } else {
            self.write_formula(child, out);
        }
    }
}

/// Recursive-descent parser for the ASCII grammar: `!` > `&` > `|`,
/// identifiers `[A-Za-z][A-Za-z0-9_]*`, `TRUE`, `FALSE`, parentheses.
struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ctx: &'a EventContext,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, ctx: &'a EventContext) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            ctx,
        }
    }

    fn parse(mut self) -> Result<Formula, EventError> {
        let f = self.or_expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(f)
    }

    fn err(&self, message: &str) -> EventError {
        EventError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn or_expr(&mut self) -> Result<Formula, EventError> {
        let mut left = self.and_expr()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let right = self.and_expr()?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Formula, EventError> {
        let mut left = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let right = self.unary()?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, EventError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(self.unary()?.negated())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric()
                        || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match name {
                    "TRUE" => Ok(Formula::True),
                    "FALSE" => Ok(Formula::False),
                    _ => self.ctx.atom(name),
                }
            }
            Some(_) => Err(self.err("expected `!`, `(`, identifier, TRUE or FALSE")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Conditional event `consequent | antecedent`: true when both hold, false
/// when the antecedent holds without the consequent, void when the
/// antecedent fails. The antecedent must be possible under the context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionalEvent {
    consequent: Formula,
    antecedent: Formula,
}

impl ConditionalEvent {
    pub fn new(
        ctx: &EventContext,
        consequent: Formula,
        antecedent: Formula,
    ) -> Result<Self, EventError> {
        for f in [&consequent, &antecedent] {
            if let Some(id) = f.max_atom() {
                if id >= ctx.atom_count() {
                    return Err(EventError::AtomOutOfRange(id));
                }
            }
        }
        if !ctx.satisfiable(&antecedent) {
            return Err(EventError::ImpossibleAntecedent);
        }
        Ok(ConditionalEvent {
            consequent,
            antecedent,
        })
    }

    pub fn consequent(&self) -> &Formula {
        &self.consequent
    }

    pub fn antecedent(&self) -> &Formula {
        &self.antecedent
    }

    /// The complementary event `!consequent | antecedent`.
    pub fn complement(&self, ctx: &EventContext) -> Result<Self, EventError> {
        ConditionalEvent::new(
            ctx,
            self.consequent.clone().negated(),
            self.antecedent.clone(),
        )
    }
}

impl fmt::Display for ConditionalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} | {:?}", self.consequent, self.antecedent)
    }
}

/// A finite ordered sequence of conditional events over one shared context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Family {
    context: EventContext,
    events: Vec<ConditionalEvent>,
}

impl Family {
    pub fn new(context: EventContext, events: Vec<ConditionalEvent>) -> Result<Self, EventError> {
        if events.is_empty() {
            return Err(EventError::EmptyFamily);
        }
        for e in &events {
            for f in [&e.consequent, &e.antecedent] {
                if let Some(id) = f.max_atom() {
                    if id >= context.atom_count() {
                        return Err(EventError::AtomOutOfRange(id));
                    }
                }
            }
            if !context.satisfiable(&e.antecedent) {
                return Err(EventError::ImpossibleAntecedent);
            }
        }
        Ok(Family { context, events })
    }

    pub fn context(&self) -> &EventContext {
        &self.context
    }

    pub fn events(&self) -> &[ConditionalEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Disjunction of all antecedents; the domain on which gains are read.
    pub fn conditioning_disjunction(&self) -> Formula {
        let mut it = self.events.iter();
        let first = it.next().expect("family is nonempty").antecedent.clone();
        it.fold(first, |acc, e| acc.or(e.antecedent.clone()))
    }
}

/// How a single conditional event is constrained by the context.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConditionalKind {
    /// Antecedent compatible with both the consequent and its negation:
    /// every probability value in `[0,1]` is coherent.
    Contingent,
    /// Antecedent entails the consequent: only 1 is coherent.
    Entailed,
    /// Antecedent excludes the consequent: only 0 is coherent.
    Incompatible,
}

/// Classifies `E|H` by the relation between `E & H` and `H` under the
/// context constraints.
pub fn classify_conditional(ctx: &EventContext, ce: &ConditionalEvent) -> ConditionalKind {
    let conj = ce.consequent().clone().and(ce.antecedent().clone());
    if ctx.equivalent(&conj, &Formula::False) {
        ConditionalKind::Incompatible
    } else if ctx.equivalent(&conj, ce.antecedent()) {
        ConditionalKind::Entailed
    } else {
        ConditionalKind::Contingent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_ps() -> EventContext {
        EventContext::unconstrained(vec!["P", "S"]).unwrap()
    }

    #[test]
    fn parses_conjunction() {
        let ctx = ctx_ps();
        let f = ctx.parse("P & S").unwrap();
        assert_eq!(f, Formula::Atom(0).and(Formula::Atom(1)));
    }

    #[test]
    fn parses_negated_disjunction() {
        let ctx = ctx_ps();
        let f = ctx.parse("!(P | S)").unwrap();
        assert_eq!(f, Formula::Atom(0).or(Formula::Atom(1)).negated());
    }

    #[test]
    fn undeclared_identifier_is_an_error() {
        let ctx = ctx_ps();
        assert_eq!(
            ctx.parse("P & Q"),
            Err(EventError::Undeclared("Q".to_string()))
        );
    }

    #[test]
    fn precedence_not_over_and_over_or() {
        let ctx = ctx_ps();
        let f = ctx.parse("!P & S | P").unwrap();
        let expected = Formula::Atom(0)
            .negated()
            .and(Formula::Atom(1))
            .or(Formula::Atom(0));
        assert_eq!(f, expected);
    }

    #[test]
    fn print_parse_round_trip_is_structural() {
        let ctx = ctx_ps();
        for text in ["P & S", "!(P | S)", "P | S & !P", "TRUE & (FALSE | P)"] {
            let f = ctx.parse(text).unwrap();
            let printed = ctx.display(&f);
            assert_eq!(ctx.parse(&printed).unwrap(), f, "round-trip of `{text}`");
        }
    }

    #[test]
    fn unconstrained_two_atoms_have_four_constituents() {
        assert_eq!(ctx_ps().constituents().len(), 4);
    }

    #[test]
    fn constraint_removes_constituents() {
        // "S implies P" rules out !P & S.
        let base = ctx_ps();
        let s_implies_p = base.parse("!S | P").unwrap();
        let ctx = EventContext::new(vec!["P", "S"], vec![s_implies_p]).unwrap();
        let cs = ctx.constituents();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| !(c.values()[1] && !c.values()[0])));
    }

    #[test]
    fn contradictory_constraint_is_rejected() {
        let base = EventContext::unconstrained(vec!["E"]).unwrap();
        let e = base.atom("E").unwrap();
        let contradiction = e.clone().and(e.negated());
        assert_eq!(
            EventContext::new(vec!["E"], vec![contradiction]),
            Err(EventError::InconsistentContext)
        );
    }

    #[test]
    fn constituent_order_is_lexicographic() {
        let cs = ctx_ps().constituents();
        let as_bits: Vec<Vec<bool>> = cs.iter().map(|c| c.values().to_vec()).collect();
        assert_eq!(
            as_bits,
            vec![
                vec![false, false],
                vec![false, true],
                vec![true, false],
                vec![true, true],
            ]
        );
    }

    #[test]
    fn equivalence_under_constraint() {
        let base = ctx_ps();
        let s_implies_p = base.parse("!S | P").unwrap();
        let ctx = EventContext::new(vec!["P", "S"], vec![s_implies_p]).unwrap();
        let ps = ctx.parse("P & S").unwrap();
        let s = ctx.parse("S").unwrap();
        assert!(ctx.equivalent(&ps, &s));
    }

    #[test]
    fn non_equivalence_without_constraint() {
        let ctx = ctx_ps();
        let ps = ctx.parse("P & S").unwrap();
        assert!(!ctx.equivalent(&ps, &Formula::False));
    }

    #[test]
    fn de_morgan_identity() {
        let ctx = ctx_ps();
        let lhs = ctx.parse("!(P | S)").unwrap();
        let rhs = ctx.parse("!P & !S").unwrap();
        assert!(ctx.equivalent(&lhs, &rhs));
    }

    #[test]
    fn impossible_antecedent_rejected() {
        let ctx = EventContext::unconstrained(vec!["E"]).unwrap();
        let e = ctx.atom("E").unwrap();
        let err = ConditionalEvent::new(&ctx, e.clone(), e.clone().and(e.negated()));
        assert_eq!(err, Err(EventError::ImpossibleAntecedent));
    }

    #[test]
    fn classification_three_cases() {
        let free = ctx_ps();
        let p = free.atom("P").unwrap();
        let s = free.atom("S").unwrap();
        let ce = ConditionalEvent::new(&free, p.clone(), s.clone()).unwrap();
        assert_eq!(
            classify_conditional(&free, &ce),
            ConditionalKind::Contingent
        );

        let entail =
            EventContext::new(vec!["P", "S"], vec![free.parse("!S | P").unwrap()]).unwrap();
        let ce2 = ConditionalEvent::new(&entail, p.clone(), s.clone()).unwrap();
        assert_eq!(
            classify_conditional(&entail, &ce2),
            ConditionalKind::Entailed
        );

        let ctx_e = EventContext::unconstrained(vec!["E"]).unwrap();
        let e = ctx_e.atom("E").unwrap();
        let ce3 = ConditionalEvent::new(&ctx_e, e.clone(), e.negated()).unwrap();
        assert_eq!(
            classify_conditional(&ctx_e, &ce3),
            ConditionalKind::Incompatible
        );
    }

    #[test]
    fn adding_a_constraint_never_adds_constituents() {
        let base = EventContext::unconstrained(vec!["A", "B", "C"]).unwrap();
        let candidates = [
            base.parse("A | B").unwrap(),
            base.parse("!A & C").unwrap(),
            base.parse("A").unwrap(),
            base.parse("TRUE").unwrap(),
        ];
        let mut constraints = Vec::new();
        let mut last = base.constituents().len();
        assert_eq!(last, 8);
        for c in candidates {
            constraints.push(c);
            if let Ok(ctx) = EventContext::new(vec!["A", "B", "C"], constraints.clone()) {
                let count = ctx.constituents().len();
                assert!(count <= last && count >= 1);
                last = count;
            }
        }
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert!(EventContext::unconstrained(vec!["TRUE"]).is_err());
        assert!(EventContext::unconstrained(vec!["1bad"]).is_err());
        assert!(EventContext::unconstrained(vec!["P", "P"]).is_err());
    }
}
