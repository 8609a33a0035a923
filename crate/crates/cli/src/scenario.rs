//! The line-oriented scenario language and its runner.
//!
//! A scenario declares one event context (atoms, optional constraints or an
//! `independent` assertion), then names events, families, regions and
//! sentences, and finally runs queries in order. Declarations must precede
//! use; the context is frozen once the first event is declared. Query lines
//! may state an expected verdict; the process exit code reports whether all
//! stated expectations were met.
//!
//! ```text
//! atoms P S
//! independent
//! event c1 = P | S
//! family F = [c1]
//! region RA = box [3/4, 1]
//! sentence A = (F, RA)
//! query acceptable A expect true
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use opposition_core::{
    basic_hexagon, basic_square, check_coherence, compute_pi, cross_threshold, de_morgan_square,
    degenerate_report, find_dutch_book, g_coherent_witness, hexagon_relations, mean_hexagon,
    mean_tripartition, no_cube_check, parse_rational, rat, verify_hexagon, verify_square,
    verify_square_minimal, Cell, ConditionalEvent, Constituent, EventContext, Family, Formula,
    Interval, LinearConstraint, PiBackend, PointAssessment, Rational, Region, Sentence, Threshold,
    Truth,
};

use crate::dot::{hexagon_dot, square_dot};
use crate::report::{DotArtifact, QueryReport, Report};

#[derive(Debug)]
pub struct ScenarioError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ScenarioError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError {
        line,
        message: message.into(),
    })
}

// ---------------------------------------------------------------------------
// Parsed scenario
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum QueryKind {
    Acceptable(Sentence),
    Equivalent(Sentence, Sentence),
    Contrary(Sentence, Sentence),
    Subcontrary(Sentence, Sentence),
    Contradictory(Sentence, Sentence),
    /// Is the second sentence a subaltern of the first?
    Subaltern(Sentence, Sentence),
    Coherent(Arc<Family>, PointAssessment),
    DutchBook(Arc<Family>, PointAssessment),
    GCoherent(Arc<Family>, Region),
    PiEmpty(Arc<Family>, Region),
    CoherentSet(Arc<Family>),
    VerifySquare(Box<[Sentence; 4]>),
    VerifySquareMinimal(Box<[Sentence; 4]>),
    VerifyHexagon(Box<[Sentence; 6]>),
    HexagonRelations(Box<[Sentence; 6]>),
    BasicSquare(Threshold, Arc<Family>),
    BasicHexagon(Threshold, Arc<Family>),
    DegenerateReport(Threshold, Arc<Family>),
    CrossThreshold(Threshold, Threshold, Arc<Family>),
    MeanTripartition(usize, Threshold),
    MeanHexagon(usize, Threshold, Arc<Family>),
    DeMorgan(EventContext, Formula, Formula),
    NoCube,
}

#[derive(Debug)]
pub struct Query {
    pub line: usize,
    pub text: String,
    pub kind: QueryKind,
    pub expect: Option<Truth>,
}

#[derive(Debug)]
pub struct Scenario {
    pub backend: PiBackend,
    pub queries: Vec<Query>,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct ParseState {
    atoms: Vec<String>,
    constraints: Vec<Formula>,
    independent_asserted: bool,
    context: Option<EventContext>,
    events: BTreeMap<String, ConditionalEvent>,
    families: BTreeMap<String, Arc<Family>>,
    regions: BTreeMap<String, Region>,
    sentences: BTreeMap<String, Sentence>,
    backend: Option<PiBackend>,
    queries: Vec<Query>,
}

impl ParseState {
    fn new() -> ParseState {
        ParseState {
            atoms: Vec::new(),
            constraints: Vec::new(),
            independent_asserted: false,
            context: None,
            events: BTreeMap::new(),
            families: BTreeMap::new(),
            regions: BTreeMap::new(),
            sentences: BTreeMap::new(),
            backend: None,
            queries: Vec::new(),
        }
    }

    fn context(&mut self, line: usize) -> Result<&EventContext, ScenarioError> {
        if self.context.is_none() {
            if self.atoms.is_empty() {
                return err(line, "no atoms declared");
            }
            let ctx =
                EventContext::new(self.atoms.clone(), self.constraints.clone()).map_err(|e| {
                    ScenarioError {
                        line,
                        message: e.to_string(),
                    }
                })?;
            self.context = Some(ctx);
        }
        Ok(self.context.as_ref().unwrap())
    }

    fn sentence(&self, line: usize, name: &str) -> Result<Sentence, ScenarioError> {
        self.sentences
            .get(name)
            .cloned()
            .ok_or_else(|| ScenarioError {
                line,
                message: format!("undeclared sentence `{name}`"),
            })
    }

    fn family(&self, line: usize, name: &str) -> Result<Arc<Family>, ScenarioError> {
        self.families
            .get(name)
            .cloned()
            .ok_or_else(|| ScenarioError {
                line,
                message: format!("undeclared family `{name}`"),
            })
    }

    fn region(&self, line: usize, name: &str) -> Result<Region, ScenarioError> {
        self.regions
            .get(name)
            .cloned()
            .ok_or_else(|| ScenarioError {
                line,
                message: format!("undeclared region `{name}`"),
            })
    }

    fn event_family(&mut self, line: usize, name: &str) -> Result<Arc<Family>, ScenarioError> {
        let event = self
            .events
            .get(name)
            .cloned()
            .ok_or_else(|| ScenarioError {
                line,
                message: format!("undeclared event `{name}`"),
            })?;
        let ctx = self.context(line)?.clone();
        Family::new(ctx, vec![event])
            .map(Arc::new)
            .map_err(|e| ScenarioError {
                line,
                message: e.to_string(),
            })
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || "_()/".contains(c))
}

fn threshold(line: usize, token: &str) -> Result<Threshold, ScenarioError> {
    let value = parse_rational(token).map_err(|m| ScenarioError { line, message: m })?;
    Threshold::new(value).map_err(|e| ScenarioError {
        line,
        message: e.to_string(),
    })
}

fn expect_clause(line: usize, tokens: &mut Vec<&str>) -> Result<Option<Truth>, ScenarioError> {
    if tokens.len() >= 2 && tokens[tokens.len() - 2] == "expect" {
        let value = match tokens[tokens.len() - 1] {
            "true" => Truth::True,
            "false" => Truth::False,
            "unknown" => Truth::Unknown,
            other => return err(line, format!("invalid expectation `{other}`")),
        };
        tokens.truncate(tokens.len() - 2);
        Ok(Some(value))
    } else {
        Ok(None)
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut state = ParseState::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (keyword, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (trimmed, ""),
        };
        match keyword {
            "atoms" => {
                if state.context.is_some() {
                    return err(line, "context is already in use; declare atoms first");
                }
                for name in rest.split_whitespace() {
                    state.atoms.push(name.to_string());
                }
                if state.atoms.is_empty() {
                    return err(line, "atoms line declares no atoms");
                }
            }
            "constraint" => {
                if state.context.is_some() {
                    return err(line, "context is already in use; declare constraints first");
                }
                if state.independent_asserted {
                    return err(
                        line,
                        "`independent` was asserted; constraints are not allowed",
                    );
                }
                let probe = EventContext::new(state.atoms.clone(), Vec::new()).map_err(|e| {
                    ScenarioError {
                        line,
                        message: e.to_string(),
                    }
                })?;
                let formula = probe.parse(rest).map_err(|e| ScenarioError {
                    line,
                    message: e.to_string(),
                })?;
                state.constraints.push(formula);
            }
            "independent" => {
                if !state.constraints.is_empty() {
                    return err(
                        line,
                        "constraints were declared; `independent` does not hold",
                    );
                }
                state.independent_asserted = true;
            }
            "event" => {
                let (name, def) = split_binding(line, rest)?;
                let Some(split) = top_level_bar(def) else {
                    return err(line, "event definition needs `consequent | antecedent`");
                };
                let (consequent_text, antecedent_text) = def.split_at(split);
                let antecedent_text = &antecedent_text[1..];
                let ctx = state.context(line)?;
                let consequent = ctx.parse(consequent_text).map_err(|e| ScenarioError {
                    line,
                    message: e.to_string(),
                })?;
                let antecedent = ctx.parse(antecedent_text).map_err(|e| ScenarioError {
                    line,
                    message: e.to_string(),
                })?;
                let event = ConditionalEvent::new(ctx, consequent, antecedent).map_err(|e| {
                    ScenarioError {
                        line,
                        message: e.to_string(),
                    }
                })?;
                declare(line, &mut state.events, name, event)?;
            }
            "family" => {
                let (name, def) = split_binding(line, rest)?;
                let inner = def
                    .strip_prefix('[')
                    .and_then(|d| d.strip_suffix(']'))
                    .ok_or_else(|| ScenarioError {
                        line,
                        message: "family definition needs `[event, ...]`".to_string(),
                    })?;
                let mut events = Vec::new();
                for item in inner.split(',') {
                    let item = item.trim();
                    if item.is_empty() {
                        return err(line, "family member name is empty");
                    }
                    events.push(
                        state
                            .events
                            .get(item)
                            .cloned()
                            .ok_or_else(|| ScenarioError {
                                line,
                                message: format!("undeclared event `{item}`"),
                            })?,
                    );
                }
                let ctx = state.context(line)?.clone();
                let family = Family::new(ctx, events).map_err(|e| ScenarioError {
                    line,
                    message: e.to_string(),
                })?;
                declare(line, &mut state.families, name, Arc::new(family))?;
            }
            "region" => {
                let (name, def) = split_binding(line, rest)?;
                let region = parse_region_expr(line, def, &state.regions)?;
                declare(line, &mut state.regions, name, region)?;
            }
            "sentence" => {
                let (name, def) = split_binding(line, rest)?;
                let inner = def
                    .strip_prefix('(')
                    .and_then(|d| d.strip_suffix(')'))
                    .ok_or_else(|| ScenarioError {
                        line,
                        message: "sentence definition needs `(family, region)`".to_string(),
                    })?;
                let Some((fam_name, region_name)) = inner.split_once(',') else {
                    return err(line, "sentence definition needs `(family, region)`");
                };
                let family = state.family(line, fam_name.trim())?;
                let region = state.region(line, region_name.trim())?;
                let sentence =
                    Sentence::labeled(family, region, name.clone()).map_err(|e| ScenarioError {
                        line,
                        message: e.to_string(),
                    })?;
                declare(line, &mut state.sentences, name, sentence)?;
            }
            "quantified" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [fam_name, x_token] = tokens.as_slice() else {
                    return err(line, "usage: quantified <family> <threshold>");
                };
                let family = state.family(line, fam_name)?;
                let x = threshold(line, x_token)?;
                let hexagon = basic_hexagon(&x, &family).map_err(|e| ScenarioError {
                    line,
                    message: e.to_string(),
                })?;
                for sentence in hexagon.hexagon.sentences() {
                    let label = sentence.label().expect("quantified sentences are labeled");
                    declare(
                        line,
                        &mut state.sentences,
                        label.to_string(),
                        sentence.clone(),
                    )?;
                }
            }
            "backend" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let backend = match tokens.as_slice() {
                    ["exact"] => PiBackend::Exact,
                    ["lp"] => PiBackend::LambdaLp,
                    ["grid"] => PiBackend::grid(rat(1, 10)).unwrap(),
                    ["grid", step] => {
                        let step =
                            parse_rational(step).map_err(|m| ScenarioError { line, message: m })?;
                        PiBackend::grid(step).map_err(|e| ScenarioError {
                            line,
                            message: e.to_string(),
                        })?
                    }
                    _ => return err(line, "usage: backend exact|lp|grid [step]"),
                };
                state.backend = Some(backend);
            }
            "query" => {
                let query = parse_query(line, rest, &mut state)?;
                state.queries.push(query);
            }
            other => return err(line, format!("unknown declaration `{other}`")),
        }
    }
    Ok(Scenario {
        backend: state.backend.unwrap_or(PiBackend::Exact),
        queries: state.queries,
    })
}

fn declare<T>(
    line: usize,
    map: &mut BTreeMap<String, T>,
    name: String,
    value: T,
) -> Result<(), ScenarioError> {
    if !valid_name(&name) {
        return err(line, format!("invalid name `{name}`"));
    }
    if map.contains_key(&name) {
        return err(line, format!("`{name}` is already declared"));
    }
    map.insert(name, value);
    Ok(())
}

fn split_binding(line: usize, rest: &str) -> Result<(String, &str), ScenarioError> {
    let Some((name, def)) = rest.split_once('=') else {
        return err(line, "expected `<name> = <definition>`");
    };
    Ok((name.trim().to_string(), def.trim()))
}

/// Byte offset of the first `|` outside parentheses, if any.
fn top_level_bar(text: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_assessment(
    line: usize,
    family: &Arc<Family>,
    tokens: &[&str],
) -> Result<PointAssessment, ScenarioError> {
    if tokens.len() != family.len() {
        return err(
            line,
            format!(
                "expected {} probability values, got {}",
                family.len(),
                tokens.len()
            ),
        );
    }
    let mut values = Vec::with_capacity(tokens.len());
    for t in tokens {
        values.push(parse_rational(t).map_err(|m| ScenarioError { line, message: m })?);
    }
    PointAssessment::new(values).map_err(|e| ScenarioError {
        line,
        message: e.to_string(),
    })
}

fn parse_query(line: usize, rest: &str, state: &mut ParseState) -> Result<Query, ScenarioError> {
    let mut tokens: Vec<&str> = rest.split_whitespace().collect();
    let expect = expect_clause(line, &mut tokens)?;
    let text = tokens.join(" ");
    let Some((&kind_token, args)) = tokens.split_first() else {
        return err(line, "empty query");
    };
    let two_sentences = |state: &ParseState| -> Result<(Sentence, Sentence), ScenarioError> {
        let [a, b] = args else {
            return err(line, format!("usage: query {kind_token} <s1> <s2>"));
        };
        let first = state.sentence(line, a)?;
        let second = state.sentence(line, b)?;
        if !first.same_family(&second) {
            return err(line, format!("`{a}` and `{b}` are over different families"));
        }
        Ok((first, second))
    };
    let quad = |state: &ParseState| -> Result<Box<[Sentence; 4]>, ScenarioError> {
        let [a, b, c, d] = args else {
            return err(
                line,
                format!("usage: query {kind_token} <s1> <s2> <s3> <s4>"),
            );
        };
        Ok(Box::new([
            state.sentence(line, a)?,
            state.sentence(line, b)?,
            state.sentence(line, c)?,
            state.sentence(line, d)?,
        ]))
    };
    let six = |state: &ParseState| -> Result<Box<[Sentence; 6]>, ScenarioError> {
        let [a, b, c, d, e, f] = args else {
            return err(line, format!("usage: query {kind_token} <s1> ... <s6>"));
        };
        Ok(Box::new([
            state.sentence(line, a)?,
            state.sentence(line, b)?,
            state.sentence(line, c)?,
            state.sentence(line, d)?,
            state.sentence(line, e)?,
            state.sentence(line, f)?,
        ]))
    };

    let kind = match kind_token {
        "acceptable" => {
            let [name] = args else {
                return err(line, "usage: query acceptable <sentence>");
            };
            QueryKind::Acceptable(state.sentence(line, name)?)
        }
        "equivalent" => {
            let (a, b) = two_sentences(state)?;
            QueryKind::Equivalent(a, b)
        }
        "contrary" => {
            let (a, b) = two_sentences(state)?;
            QueryKind::Contrary(a, b)
        }
        "subcontrary" => {
            let (a, b) = two_sentences(state)?;
            QueryKind::Subcontrary(a, b)
        }
        "contradictory" => {
            let (a, b) = two_sentences(state)?;
            QueryKind::Contradictory(a, b)
        }
        "subaltern" => {
            let (a, b) = two_sentences(state)?;
            QueryKind::Subaltern(a, b)
        }
        "coherent" | "dutch_book" => {
            let Some((&fam_name, values)) = args.split_first() else {
                return err(line, format!("usage: query {kind_token} <family> <p1> ..."));
            };
            let family = state.family(line, fam_name)?;
            let assessment = parse_assessment(line, &family, values)?;
            if kind_token == "coherent" {
                QueryKind::Coherent(family, assessment)
            } else {
                QueryKind::DutchBook(family, assessment)
            }
        }
        "g_coherent" | "pi_empty" => {
            let [fam_name, region_name] = args else {
                return err(line, format!("usage: query {kind_token} <family> <region>"));
            };
            let family = state.family(line, fam_name)?;
            let region = state.region(line, region_name)?;
            if region.dim() != family.len() {
                return err(
                    line,
                    format!(
                        "region dimension {} does not match family size {}",
                        region.dim(),
                        family.len()
                    ),
                );
            }
            if kind_token == "g_coherent" {
                QueryKind::GCoherent(family, region)
            } else {
                QueryKind::PiEmpty(family, region)
            }
        }
        "coherent_set" => {
            let [fam_name] = args else {
                return err(line, "usage: query coherent_set <family>");
            };
            QueryKind::CoherentSet(state.family(line, fam_name)?)
        }
        "verify_square" => QueryKind::VerifySquare(quad(state)?),
        "verify_square_minimal" => QueryKind::VerifySquareMinimal(quad(state)?),
        "verify_hexagon" => QueryKind::VerifyHexagon(six(state)?),
        "hexagon_relations" => QueryKind::HexagonRelations(six(state)?),
        "basic_square" | "basic_hexagon" | "degenerate_report" => {
            let [x_token, event_name] = args else {
                return err(
                    line,
                    format!("usage: query {kind_token} <threshold> <event>"),
                );
            };
            let x = threshold(line, x_token)?;
            let family = state.event_family(line, event_name)?;
            match kind_token {
                "basic_square" => QueryKind::BasicSquare(x, family),
                "basic_hexagon" => QueryKind::BasicHexagon(x, family),
                _ => QueryKind::DegenerateReport(x, family),
            }
        }
        "cross_threshold" => {
            let [x1_token, x2_token, event_name] = args else {
                return err(line, "usage: query cross_threshold <x1> <x2> <event>");
            };
            let x1 = threshold(line, x1_token)?;
            let x2 = threshold(line, x2_token)?;
            if x2.value() >= x1.value() {
                return err(line, "cross_threshold needs x2 < x1");
            }
            QueryKind::CrossThreshold(x1, x2, state.event_family(line, event_name)?)
        }
        "mean_tripartition" | "mean_hexagon" => {
            let (n_token, x_token, fam_name) = match (kind_token, args) {
                ("mean_tripartition", [n, x]) => (*n, *x, None),
                ("mean_hexagon", [n, x, f]) => (*n, *x, Some(*f)),
                _ => {
                    return err(
                        line,
                        format!(
                            "usage: query {kind_token} <n> <threshold>{}",
                            if kind_token == "mean_hexagon" {
                                " <family>"
                            } else {
                                ""
                            }
                        ),
                    )
                }
            };
            let n: usize = n_token.parse().map_err(|_| ScenarioError {
                line,
                message: format!("invalid count `{n_token}`"),
            })?;
            if n == 0 {
                return err(line, "the event count must be at least 1");
            }
            let x = threshold(line, x_token)?;
            match fam_name {
                None => QueryKind::MeanTripartition(n, x),
                Some(f) => {
                    let family = state.family(line, f)?;
                    if family.len() != n {
                        return err(
                            line,
                            format!("family has {} events, expected {n}", family.len()),
                        );
                    }
                    QueryKind::MeanHexagon(n, x, family)
                }
            }
        }
        "de_morgan" => {
            let [subject, predicate] = args else {
                return err(
                    line,
                    "usage: query de_morgan <subject-formula> <predicate-formula>",
                );
            };
            let ctx = state.context(line)?.clone();
            let subject = ctx.parse(subject).map_err(|e| ScenarioError {
                line,
                message: e.to_string(),
            })?;
            let predicate = ctx.parse(predicate).map_err(|e| ScenarioError {
                line,
                message: e.to_string(),
            })?;
            QueryKind::DeMorgan(ctx, subject, predicate)
        }
        "no_cube" => {
            if !args.is_empty() {
                return err(line, "usage: query no_cube");
            }
            QueryKind::NoCube
        }
        other => return err(line, format!("unknown query `{other}`")),
    };
    Ok(Query {
        line,
        text,
        kind,
        expect,
    })
}

// ---------------------------------------------------------------------------
// Region expressions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Name(String),
    Number(Rational),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Tilde,
    And,
    Or,
    Plus,
    Minus,
    Star,
    Rel(&'static str),
}

fn lex_region(line: usize, text: &str) -> Result<Vec<Token>, ScenarioError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'[' => {
                out.push(Token::LBracket);
                i += 1;
            }
            b']' => {
                out.push(Token::RBracket);
                i += 1;
            }
            b'(' => {
                out.push(Token::LParen);
                i += 1;
            }
            b')' => {
                out.push(Token::RParen);
                i += 1;
            }
            b',' => {
                out.push(Token::Comma);
                i += 1;
            }
            b'~' => {
                out.push(Token::Tilde);
                i += 1;
            }
            b'+' => {
                out.push(Token::Plus);
                i += 1;
            }
            b'-' => {
                out.push(Token::Minus);
                i += 1;
            }
            b'*' => {
                out.push(Token::Star);
                i += 1;
            }
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                out.push(Token::And);
                i += 2;
            }
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                out.push(Token::Or);
                i += 2;
            }
            b'>' | b'<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push(Token::Rel(if b == b'>' { ">=" } else { "<=" }));
                    i += 2;
                } else {
                    out.push(Token::Rel(if b == b'>' { ">" } else { "<" }));
                    i += 1;
                }
            }
            b'=' => {
                out.push(Token::Rel("="));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len()
                    && bytes[i] == b'/'
                    && bytes.get(i + 1).is_some_and(|c| c.is_ascii_digit())
                {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = std::str::from_utf8(&bytes[start..i]).unwrap();
                let value = parse_rational(text).map_err(|m| ScenarioError { line, message: m })?;
                out.push(Token::Number(value));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token::Name(
                    std::str::from_utf8(&bytes[start..i]).unwrap().to_string(),
                ));
            }
            other => {
                return err(line, format!("unexpected character `{}`", other as char));
            }
        }
    }
    Ok(out)
}

struct RegionParser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    line: usize,
    named: &'a BTreeMap<String, Region>,
}

impl<'a> RegionParser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ScenarioError> {
        err(self.line, message)
    }

    fn expr(&mut self) -> Result<Region, ScenarioError> {
        let mut left = self.term()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let right = self.term()?;
            left = self.combine(left, right, false)?;
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Region, ScenarioError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let right = self.unary()?;
            left = self.combine(left, right, true)?;
        }
        Ok(left)
    }

    fn combine(&self, left: Region, right: Region, meet: bool) -> Result<Region, ScenarioError> {
        let op = if meet {
            Region::intersect
        } else {
            Region::union
        };
        op(&left, &right).map_err(|e| ScenarioError {
            line: self.line,
            message: e.to_string(),
        })
    }

    fn unary(&mut self) -> Result<Region, ScenarioError> {
        if self.peek() == Some(&Token::Tilde) {
            self.pos += 1;
            return Ok(self.unary()?.complement());
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Region, ScenarioError> {
        match self.next() {
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Token::RParen) {
                    return self.fail("expected `)`");
                }
                Ok(inner)
            }
            Some(Token::Name(name)) if name == "box" => self.box_region(),
            Some(Token::Name(name)) if name == "halfspace" => self.halfspace(),
            Some(Token::Name(name)) => {
                self.named.get(&name).cloned().ok_or_else(|| ScenarioError {
                    line: self.line,
                    message: format!("undeclared region `{name}`"),
                })
            }
            other => self.fail(format!("unexpected token {other:?} in region expression")),
        }
    }

    fn box_region(&mut self) -> Result<Region, ScenarioError> {
        let mut intervals = vec![self.interval()?];
        while matches!(self.peek(), Some(Token::Name(n)) if n == "x") {
            self.pos += 1;
            intervals.push(self.interval()?);
        }
        Ok(Region::box_region(&intervals))
    }

    fn interval(&mut self) -> Result<Interval, ScenarioError> {
        let lower_closed = match self.next() {
            Some(Token::LBracket) => true,
            Some(Token::RBracket) => false,
            _ => return self.fail("expected `[` or `]` to open an interval"),
        };
        let lower = self.rational()?;
        if self.next() != Some(Token::Comma) {
            return self.fail("expected `,` in interval");
        }
        let upper = self.rational()?;
        let upper_closed = match self.next() {
            Some(Token::RBracket) => true,
            Some(Token::LBracket) => false,
            _ => return self.fail("expected `]` or `[` to close an interval"),
        };
        Interval::new(lower, lower_closed, upper, upper_closed).map_err(|e| ScenarioError {
            line: self.line,
            message: e.to_string(),
        })
    }

    fn rational(&mut self) -> Result<Rational, ScenarioError> {
        let negative = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Token::Number(v)) => Ok(if negative { -v } else { v }),
            _ => self.fail("expected a rational number"),
        }
    }

    fn halfspace(&mut self) -> Result<Region, ScenarioError> {
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        let mut dim = 0usize;
        loop {
            let negative = match self.peek() {
                Some(Token::Minus) => {
                    self.pos += 1;
                    true
                }
                Some(Token::Plus) => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            // coefficient: `(r)*`, `r*`, or implicit 1
            let coefficient = match self.peek() {
                Some(Token::LParen) => {
                    self.pos += 1;
                    let value = self.rational()?;
                    if self.next() != Some(Token::RParen) {
                        return self.fail("expected `)` after coefficient");
                    }
                    if self.next() != Some(Token::Star) {
                        return self.fail("expected `*` after coefficient");
                    }
                    value
                }
                Some(Token::Number(_)) => {
                    let value = self.rational()?;
                    if self.next() != Some(Token::Star) {
                        return self.fail("expected `*` after coefficient");
                    }
                    value
                }
                _ => rat(1, 1),
            };
            let coefficient = if negative { -coefficient } else { coefficient };
            let index = match self.next() {
                Some(Token::Name(v)) => {
                    let Some(num) = v.strip_prefix('p').and_then(|d| d.parse::<usize>().ok())
                    else {
                        return self.fail(format!("expected a variable `p<k>`, got `{v}`"));
                    };
                    if num == 0 {
                        return self.fail("variables are numbered from p1");
                    }
                    num - 1
                }
                other => return self.fail(format!("expected a variable, got {other:?}")),
            };
            dim = dim.max(index + 1);
            terms.push((index, coefficient));
            match self.peek() {
                Some(Token::Plus) | Some(Token::Minus) => continue,
                _ => break,
            }
        }
        let rel = match self.next() {
            Some(Token::Rel(r)) => r,
            other => return self.fail(format!("expected a relation, got {other:?}")),
        };
        let bound = self.rational()?;
        let constraint = match rel {
            "<=" => LinearConstraint::le(terms, bound),
            "<" => LinearConstraint::lt(terms, bound),
            ">=" => LinearConstraint::ge(terms, bound),
            ">" => LinearConstraint::gt(terms, bound),
            "=" => LinearConstraint::eq(terms, bound),
            _ => unreachable!(),
        };
        let cell = Cell::new(dim, vec![constraint]).map_err(|e| ScenarioError {
            line: self.line,
            message: e.to_string(),
        })?;
        Region::from_cells(dim, vec![cell]).map_err(|e| ScenarioError {
            line: self.line,
            message: e.to_string(),
        })
    }
}

fn parse_region_expr(
    line: usize,
    text: &str,
    named: &BTreeMap<String, Region>,
) -> Result<Region, ScenarioError> {
    let tokens = lex_region(line, text)?;
    let mut parser = RegionParser {
        tokens,
        pos: 0,
        line,
        named,
    };
    let region = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return err(line, "trailing input in region expression");
    }
    Ok(region)
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

fn format_point(point: &[Rational]) -> String {
    let parts: Vec<String> = point.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn format_constituent(family: &Family, constituent: &Constituent) -> String {
    let names = family.context().atom_names();
    let parts: Vec<String> = names
        .iter()
        .zip(constituent.values())
        .map(|(n, v)| format!("{n}={}", if *v { "T" } else { "F" }))
        .collect();
    parts.join(",")
}

struct QueryOutcome {
    verdict: Truth,
    witnesses: Vec<String>,
    notes: Vec<String>,
    dot: Option<DotArtifact>,
}

impl QueryOutcome {
    fn plain(verdict: Truth) -> QueryOutcome {
        QueryOutcome {
            verdict,
            witnesses: Vec::new(),
            notes: Vec::new(),
            dot: None,
        }
    }
}

fn run_error(query_index: usize, line: usize, e: impl fmt::Display) -> ScenarioError {
    ScenarioError {
        line,
        message: format!("query {query_index}: {e}"),
    }
}

/// The t-coherent part of `region` is empty; counterexample reported when
/// it is not.
fn emptiness(
    family: &Arc<Family>,
    region: &Region,
    backend: &PiBackend,
) -> Result<(Truth, Option<Vec<Rational>>), opposition_core::CoherenceError> {
    let (occupied, witness) = g_coherent_witness(family, region, backend)?;
    Ok((occupied.negate(), witness))
}

fn relation_outcome(verdict: Truth, counterexample: Option<Vec<Rational>>) -> QueryOutcome {
    let mut outcome = QueryOutcome::plain(verdict);
    if let Some(point) = counterexample {
        outcome
            .witnesses
            .push(format!("counterexample {}", format_point(&point)));
    }
    outcome
}

fn square_labels(sentences: &[Sentence]) -> Vec<String> {
    sentences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.label()
                .map(str::to_string)
                .unwrap_or_else(|| format!("s{}", i + 1))
        })
        .collect()
}

fn run_query(
    index: usize,
    query: &Query,
    backend: &PiBackend,
) -> Result<QueryOutcome, ScenarioError> {
    let line = query.line;
    let fail = |e: &dyn fmt::Display| run_error(index, line, e);
    match &query.kind {
        QueryKind::Acceptable(s) => {
            let (verdict, witness) =
                g_coherent_witness(s.family(), s.region(), backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(verdict);
            if let Some(point) = witness {
                outcome
                    .witnesses
                    .push(format!("coherent point {}", format_point(&point)));
            }
            Ok(outcome)
        }
        QueryKind::Equivalent(a, b) => {
            let verdict = opposition_core::equivalent(a, b, backend).map_err(|e| fail(&e))?;
            Ok(QueryOutcome::plain(verdict))
        }
        QueryKind::Contrary(a, b) => {
            let meet = a.region().intersect(b.region()).map_err(|e| fail(&e))?;
            let (verdict, w) = emptiness(a.family(), &meet, backend).map_err(|e| fail(&e))?;
            Ok(relation_outcome(verdict, w))
        }
        QueryKind::Subcontrary(a, b) => {
            let meet = a
                .region()
                .complement()
                .intersect(&b.region().complement())
                .map_err(|e| fail(&e))?;
            let (verdict, w) = emptiness(a.family(), &meet, backend).map_err(|e| fail(&e))?;
            Ok(relation_outcome(verdict, w))
        }
        QueryKind::Contradictory(a, b) => {
            let meet = a.region().intersect(b.region()).map_err(|e| fail(&e))?;
            let (contrary, w1) = emptiness(a.family(), &meet, backend).map_err(|e| fail(&e))?;
            let co_meet = a
                .region()
                .complement()
                .intersect(&b.region().complement())
                .map_err(|e| fail(&e))?;
            let (subcontrary, w2) =
                emptiness(a.family(), &co_meet, backend).map_err(|e| fail(&e))?;
            Ok(relation_outcome(contrary.and(subcontrary), w1.or(w2)))
        }
        QueryKind::Subaltern(a, b) => {
            let difference = a
                .region()
                .intersect(&b.region().complement())
                .map_err(|e| fail(&e))?;
            let (verdict, w) = emptiness(a.family(), &difference, backend).map_err(|e| fail(&e))?;
            Ok(relation_outcome(verdict, w))
        }
        QueryKind::Coherent(family, assessment) => {
            let coherent = check_coherence(family, assessment).map_err(|e| fail(&e))?;
            Ok(QueryOutcome::plain(Truth::from_bool(coherent)))
        }
        QueryKind::DutchBook(family, assessment) => {
            let book = find_dutch_book(family, assessment).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(Truth::from_bool(book.is_some()));
            if let Some(book) = book {
                let events: Vec<String> =
                    book.indices.iter().map(|i| format!("{}", i + 1)).collect();
                let stakes: Vec<String> = book.stakes.iter().map(|s| s.to_string()).collect();
                outcome.witnesses.push(format!(
                    "stakes ({}) on events [{}]",
                    stakes.join(", "),
                    events.join(", ")
                ));
                for (constituent, gain) in &book.gains {
                    outcome.notes.push(format!(
                        "gain {gain} at {}",
                        format_constituent(family, constituent)
                    ));
                }
            }
            Ok(outcome)
        }
        QueryKind::GCoherent(family, region) => {
            let (verdict, witness) =
                g_coherent_witness(family, region, backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(verdict);
            if let Some(point) = witness {
                outcome
                    .witnesses
                    .push(format!("coherent point {}", format_point(&point)));
            }
            Ok(outcome)
        }
        QueryKind::PiEmpty(family, region) => {
            let (verdict, witness) = emptiness(family, region, backend).map_err(|e| fail(&e))?;
            Ok(relation_outcome(verdict, witness))
        }
        QueryKind::CoherentSet(family) => match compute_pi(family) {
            Some(region) => {
                let mut outcome = QueryOutcome::plain(Truth::True);
                outcome.notes.push(format!("coherent set: {region}"));
                Ok(outcome)
            }
            None => {
                let mut outcome = QueryOutcome::plain(Truth::Unknown);
                outcome
                    .notes
                    .push("no certified closed form for this family".to_string());
                Ok(outcome)
            }
        },
        QueryKind::VerifySquare(quad) => {
            let verdict = verify_square(quad, backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(verdict.overall());
            for check in &verdict.conditions {
                outcome
                    .notes
                    .push(format!("{}: {}", check.label, check.holds));
            }
            if let Some(failure) = verdict.first_failure() {
                if let Some(point) = &failure.witness {
                    outcome
                        .witnesses
                        .push(format!("counterexample {}", format_point(point)));
                }
            }
            let degenerate: Vec<String> = verdict
                .degenerate
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_true())
                .map(|(i, _)| format!("s{}", i + 1))
                .collect();
            if !degenerate.is_empty() {
                outcome.notes.push(format!(
                    "degenerate: empty coherent part for {}",
                    degenerate.join(", ")
                ));
            }
            if outcome.verdict == Truth::True {
                let labels: [String; 4] = square_labels(quad.as_slice()).try_into().unwrap();
                outcome.dot = Some(DotArtifact {
                    kind: "square",
                    source: square_dot(&query.text, &labels),
                });
            }
            Ok(outcome)
        }
        QueryKind::VerifySquareMinimal(quad) => {
            let verdict = verify_square_minimal(quad, backend).map_err(|e| fail(&e))?;
            Ok(QueryOutcome::plain(verdict))
        }
        QueryKind::VerifyHexagon(six) => {
            let verdict = verify_hexagon(six, backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(verdict.overall());
            for check in &verdict.square.conditions {
                outcome
                    .notes
                    .push(format!("{}: {}", check.label, check.holds));
            }
            outcome.notes.push(format!(
                "top is the disjunction (regions): {}",
                verdict.top_is_disjunction
            ));
            outcome.notes.push(format!(
                "bottom is the conjunction (regions): {}",
                verdict.bottom_is_conjunction
            ));
            outcome
                .notes
                .push(format!("up to t-coherence: {}", verdict.overall_up_to_t()));
            if outcome.verdict == Truth::True {
                let labels: [String; 6] = square_labels(six.as_slice()).try_into().unwrap();
                outcome.dot = Some(DotArtifact {
                    kind: "hexagon",
                    source: hexagon_dot(&query.text, &labels),
                });
            }
            Ok(outcome)
        }
        QueryKind::HexagonRelations(six) => {
            let verdict = verify_hexagon(six, backend).map_err(|e| fail(&e))?;
            if verdict.overall() == Truth::False {
                let mut outcome = QueryOutcome::plain(Truth::False);
                outcome
                    .notes
                    .push("the six sentences do not form a hexagon".to_string());
                return Ok(outcome);
            }
            let hexagon =
                opposition_core::Hexagon::verified(*six.clone(), backend).map_err(|e| fail(&e))?;
            let relations = hexagon_relations(&hexagon, backend).map_err(|e| fail(&e))?;
            let mut all = Truth::True;
            let mut outcome = QueryOutcome::plain(Truth::True);
            for r in &relations {
                all = all.and(r.holds);
                outcome.notes.push(format!("{}: {}", r.label, r.holds));
            }
            outcome.verdict = all;
            Ok(outcome)
        }
        QueryKind::BasicSquare(x, family) => {
            let square = basic_square(x, family).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(Truth::True);
            for s in square.square.sentences() {
                outcome
                    .notes
                    .push(format!("{}: {}", s.label().unwrap_or("?"), s.region()));
            }
            let labels: [String; 4] = square_labels(square.square.sentences().as_slice())
                .try_into()
                .unwrap();
            outcome.dot = Some(DotArtifact {
                kind: "square",
                source: square_dot(&query.text, &labels),
            });
            Ok(outcome)
        }
        QueryKind::BasicHexagon(x, family) => {
            let hexagon = basic_hexagon(x, family).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(Truth::True);
            for s in hexagon.hexagon.sentences() {
                outcome
                    .notes
                    .push(format!("{}: {}", s.label().unwrap_or("?"), s.region()));
            }
            let labels: [String; 6] = square_labels(hexagon.hexagon.sentences().as_slice())
                .try_into()
                .unwrap();
            outcome.dot = Some(DotArtifact {
                kind: "hexagon",
                source: hexagon_dot(&query.text, &labels),
            });
            Ok(outcome)
        }
        QueryKind::DegenerateReport(x, family) => {
            let report = degenerate_report(x, family, backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(Truth::True);
            outcome
                .notes
                .push(format!("classification: {:?}", report.kind));
            for (label, shape) in ["A", "E", "I", "O"].iter().zip(report.shapes.iter()) {
                outcome
                    .notes
                    .push(format!("coherent part of {label}({x}): {shape}"));
            }
            outcome.notes.push(format!(
                "contrary pair contradictory: {}",
                report.contrary_became_contradictory
            ));
            outcome.notes.push(format!(
                "subcontrary pair contradictory: {}",
                report.subcontrary_became_contradictory
            ));
            outcome.notes.push(format!(
                "subalternations symmetric: {}, {}",
                report.subalternation_symmetric[0], report.subalternation_symmetric[1]
            ));
            for note in &report.scale_notes {
                outcome.notes.push(format!("note: {note}"));
            }
            Ok(outcome)
        }
        QueryKind::CrossThreshold(x1, x2, family) => {
            let report = cross_threshold(x1, x2, family, backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(report.all_hold());
            for (label, verdict) in &report.checks {
                outcome.notes.push(format!("{label}: {verdict}"));
            }
            Ok(outcome)
        }
        QueryKind::MeanTripartition(n, x) => {
            let tri = mean_tripartition(*n, x).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(Truth::True);
            for (name, part) in ["B1", "B2", "B3"].iter().zip(tri.parts()) {
                outcome.notes.push(format!("{name}: {part}"));
            }
            Ok(outcome)
        }
        QueryKind::MeanHexagon(n, x, family) => {
            let hexagon = mean_hexagon(*n, x, family, backend).map_err(|e| fail(&e))?;
            let verdict = verify_hexagon(hexagon.sentences(), backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(verdict.overall());
            for s in hexagon.sentences() {
                outcome
                    .notes
                    .push(format!("{}: {}", s.label().unwrap_or("?"), s.region()));
            }
            if outcome.verdict == Truth::True {
                let labels: [String; 6] = square_labels(hexagon.sentences().as_slice())
                    .try_into()
                    .unwrap();
                outcome.dot = Some(DotArtifact {
                    kind: "hexagon",
                    source: hexagon_dot(&query.text, &labels),
                });
            }
            Ok(outcome)
        }
        QueryKind::DeMorgan(ctx, subject, predicate) => {
            let square = de_morgan_square(ctx, subject, predicate).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(Truth::True);
            for s in square.square.sentences() {
                outcome
                    .notes
                    .push(format!("{}: {}", s.label().unwrap_or("?"), s.region()));
            }
            let labels: [String; 4] = square_labels(square.square.sentences().as_slice())
                .try_into()
                .unwrap();
            outcome.dot = Some(DotArtifact {
                kind: "square",
                source: square_dot(&query.text, &labels),
            });
            Ok(outcome)
        }
        QueryKind::NoCube => {
            let report = no_cube_check(backend).map_err(|e| fail(&e))?;
            let mut outcome = QueryOutcome::plain(report.cube_free());
            for pair in &report.pairs {
                let broken = pair
                    .relations
                    .iter()
                    .filter(|r| r.holds == Truth::False)
                    .count();
                let witness = pair
                    .relations
                    .iter()
                    .find_map(|r| r.witness.as_ref())
                    .map(|p| format_point(p))
                    .unwrap_or_else(|| "-".to_string());
                outcome.notes.push(format!(
                    "{} vs {}: {broken}/{} relations fail, witness {witness}",
                    pair.left,
                    pair.right,
                    pair.relations.len()
                ));
            }
            Ok(outcome)
        }
    }
}

pub fn run_scenario(
    scenario: &Scenario,
    scenario_name: &str,
    backend_override: Option<PiBackend>,
) -> Result<Report, ScenarioError> {
    let backend = backend_override.unwrap_or_else(|| scenario.backend.clone());
    let backend_name = match &backend {
        PiBackend::Exact => "exact".to_string(),
        PiBackend::LambdaLp => "lp".to_string(),
        PiBackend::Grid { step } => format!("grid {step}"),
    };
    let mut reports = Vec::with_capacity(scenario.queries.len());
    for (i, query) in scenario.queries.iter().enumerate() {
        let index = i + 1;
        let outcome = run_query(index, query, &backend)?;
        let ok = query.expect.map(|e| e == outcome.verdict).unwrap_or(true);
        reports.push(QueryReport {
            index,
            line: query.line,
            query: query.text.clone(),
            verdict: outcome.verdict.to_string(),
            expect: query.expect.map(|e| e.to_string()),
            ok,
            witnesses: outcome.witnesses,
            notes: outcome.notes,
            dot: outcome.dot,
        });
    }
    Ok(Report::new(
        scenario_name.to_string(),
        backend_name,
        reports,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_reference_scenario() {
        let text = "\
atoms P S
independent
event c1 = P | S
family F = [c1]
region RA = box [3/4, 1]
sentence A = (F, RA)
query acceptable A expect true
";
        let scenario = parse_scenario(text).unwrap();
        assert_eq!(scenario.queries.len(), 1);
        let report = run_scenario(&scenario, "inline", None).unwrap();
        assert!(report.all_expectations_met());
        assert_eq!(report.queries[0].verdict, "true");
    }

    #[test]
    fn region_expressions_cover_the_syntax() {
        let named = BTreeMap::new();
        let r = parse_region_expr(1, "box [0, 1/2] x ]1/4, 3/4]", &named).unwrap();
        assert_eq!(r.dim(), 2);
        let h = parse_region_expr(1, "halfspace (1/2)*p1 + (1/2)*p2 >= 3/4", &named).unwrap();
        assert_eq!(h.dim(), 2);
        let combined = parse_region_expr(1, "~(box [0, 1/4] \\/ box [3/4, 1])", &named).unwrap();
        assert!(combined
            .equal(&Region::segment(
                Interval::new(rat(1, 4), false, rat(3, 4), false).unwrap()
            ))
            .unwrap());
    }

    #[test]
    fn undeclared_names_are_parse_errors() {
        let text = "\
atoms P S
event c1 = P | S
family F = [c1]
query acceptable A expect true
";
        let e = parse_scenario(text).unwrap_err();
        assert!(e.message.contains("undeclared sentence"));
        assert_eq!(e.line, 4);
    }

    #[test]
    fn quantified_binds_six_sentences() {
        let text = "\
atoms P S
event c1 = P | S
family F = [c1]
quantified F 3/4
query verify_square A(3/4) E(3/4) I(3/4) O(3/4) expect true
query verify_hexagon A(3/4) E(3/4) I(3/4) O(3/4) U(3/4) Y(3/4) expect true
query contrary A(3/4) E(3/4) expect true
";
        let scenario = parse_scenario(text).unwrap();
        let report = run_scenario(&scenario, "inline", None).unwrap();
        assert!(report.all_expectations_met(), "{}", report.render_text());
    }

    #[test]
    fn grid_backend_reports_unknown() {
        let text = "\
atoms P S
event c1 = P | S
family F = [c1]
region EMPTYISH = box ]1/2, 1/2[
query g_coherent F EMPTYISH expect unknown
";
        // ]1/2,1/2[ is rejected as malformed; use a thin open interval
        // around an off-grid point instead.
        let text = text.replace("]1/2, 1/2[", "]2/5, 3/5[ /\\ ~box [1/2, 1/2]");
        let scenario = parse_scenario(&text).unwrap();
        let report = run_scenario(
            &scenario,
            "inline",
            Some(PiBackend::grid(rat(1, 2)).unwrap()),
        )
        .unwrap();
        assert_eq!(report.queries[0].verdict, "unknown");
        assert!(report.all_expectations_met());
    }

    #[test]
    fn failed_expectation_is_reported() {
        let text = "\
atoms E
event c = E | !E
family F = [c]
region ONE = box [1, 1]
sentence S1 = (F, ONE)
query acceptable S1 expect true
";
        let scenario = parse_scenario(text).unwrap();
        let report = run_scenario(&scenario, "inline", None).unwrap();
        assert!(!report.all_expectations_met());
        assert_eq!(report.queries[0].verdict, "false");
    }

    #[test]
    fn dimension_mismatch_is_a_parse_error() {
        let text = "\
atoms P S
event c1 = P | S
family F = [c1]
region R2 = box [0, 1] x [0, 1]
query g_coherent F R2
";
        let e = parse_scenario(text).unwrap_err();
        assert!(e.message.contains("dimension"));
    }

    #[test]
    fn relations_across_families_are_semantic_errors() {
        let text = "\
atoms P S
event c1 = P | S
event c2 = S | P
family F1 = [c1]
family F2 = [c2]
region R = box [0, 1/2]
sentence S1 = (F1, R)
sentence S2 = (F2, R)
query contrary S1 S2 expect true
";
        let e = parse_scenario(text).unwrap_err();
        assert_eq!(e.line, 9);
        assert!(e.message.contains("different families"));
    }

    #[test]
    fn de_morgan_with_sure_subject_fails_at_run() {
        let text = "\
atoms P S
constraint S
event c1 = P | S
query de_morgan S P
";
        let scenario = parse_scenario(text).unwrap();
        let e = run_scenario(&scenario, "inline", None).unwrap_err();
        assert!(e.message.contains("impossible"), "{}", e.message);
    }
}
