//! The decision kernel: coherence of precise assessments, g-coherence of
//! set-valued assessments, and the predicates on t-coherent parts that the
//! opposition relations reduce to.
//!
//! A precise assessment is coherent when no finite combination of bets on the
//! assessed conditional events has uniformly positive (or uniformly negative)
//! gain across the conditioning disjunction. [`check_coherence`] decides this
//! with the standard constituent-mass formulation: nonnegative masses over
//! the constituents of the conditioning disjunction, one equation per event,
//! and a recursion on the events whose conditioning mass is zero in every
//! solution. [`find_dutch_book`] is the independent oracle: it searches
//! stakes directly, one LP per nonempty subfamily, and must report a book
//! exactly when `check_coherence` rejects.
//!
//! Three interchangeable backends answer g-coherence questions:
//!
//! - `Exact` intersects the region with a closed form of the coherent set,
//!   available for the single-event cases, complementary pairs and families
//!   of logically independent events; it refuses anything it cannot certify.
//! - `LambdaLp` runs the constituent-mass recursion with the region's cell
//!   constraints linearized over conditioning masses. Only box cells (one
//!   coordinate per constraint) are supported. Strict constraints use the
//!   uniform-slack scheme and bind only at recursion levels where the event
//!   has positive conditioning mass; how strictness should interact with
//!   zero-mass levels has no exact treatment here, so where the `Exact`
//!   backend applies it is authoritative.
//! - `Grid` scans lattice points and can only confirm, never refute:
//!   its negative answer is `Unknown`.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::events::{classify_conditional, ConditionalKind};
use crate::events::{ConditionalEvent, Constituent, EventContext, Family};
use crate::lp::{maximize, LpOutcome, LpProblem, LpRelation};
use crate::rational::{rat, Rational};
use crate::regions::{Cell, Interval, LinearConstraint, Region, RegionError, Relation};

/// Subfamily enumeration in the stake-searching oracle is exponential; keep
/// it a desk-scale device.
pub const DUTCH_BOOK_MAX_EVENTS: usize = 6;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoherenceError {
    #[error("assessment length {got} does not match family size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("probability value {0} lies outside [0,1]")]
    ValueOutOfRange(String),
    #[error("family of {size} events exceeds the stake-search bound {bound}")]
    FamilyTooLarge { size: usize, bound: usize },
    #[error("a cell constraint couples several coordinates; the mass-LP backend supports box cells only")]
    UnsupportedCell,
    #[error("no certified closed form for the coherent set of this family")]
    UncertifiedPi,
    #[error("grid step must be 1/m for an integer m >= 2")]
    InvalidGridStep,
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Three-valued verdict; `Unknown` arises only from the grid backend.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    pub fn is_false(self) -> bool {
        self == Truth::False
    }

    pub fn negate(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }
}

impl std::fmt::Display for Truth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

/// A precise probability assessment, one value in `[0,1]` per event.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointAssessment {
    values: Vec<Rational>,
}

impl PointAssessment {
    pub fn new(values: Vec<Rational>) -> Result<Self, CoherenceError> {
        for v in &values {
            if v.is_negative() || *v > Rational::one() {
                return Err(CoherenceError::ValueOutOfRange(v.to_string()));
            }
        }
        Ok(PointAssessment { values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Backend selection for g-coherence queries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PiBackend {
    /// Intersect with a certified closed form of the coherent set; refuses
    /// families it cannot certify.
    Exact,
    /// Constituent-mass LP recursion over the region's cells.
    LambdaLp,
    /// Semi-decision scanning lattice points with the given step.
    Grid { step: Rational },
}

impl PiBackend {
    /// Grid backend with step `1/m`, `2 <= m <= 1_000_000`.
    pub fn grid(step: Rational) -> Result<PiBackend, CoherenceError> {
        if !step.numer().is_one()
            || step.denom() < &num_bigint::BigInt::from(2)
            || step.denom() > &num_bigint::BigInt::from(1_000_000)
        {
            return Err(CoherenceError::InvalidGridStep);
        }
        Ok(PiBackend::Grid { step })
    }
}

/// A witness of incoherence: stakes on a subfamily whose gain is strictly
/// one-signed across that subfamily's conditioning disjunction.
#[derive(Clone, Debug)]
pub struct DutchBook {
    /// Indices of the booked subfamily within the original family.
    pub indices: Vec<usize>,
    /// One stake per booked index.
    pub stakes: Vec<Rational>,
    /// Gain value on each constituent of the subfamily's conditioning
    /// disjunction; all strictly positive or all strictly negative.
    pub gains: Vec<(Constituent, Rational)>,
}

// ---------------------------------------------------------------------------
// Gains
// ---------------------------------------------------------------------------

fn constituent_gain(
    events: &[ConditionalEvent],
    values: &[Rational],
    stakes: &[Rational],
    constituent: &Constituent,
) -> Rational {
    let mut gain = Rational::zero();
    for ((event, p), stake) in events.iter().zip(values).zip(stakes) {
        if constituent.satisfies(event.antecedent()) {
            let indicator = if constituent.satisfies(event.consequent()) {
                Rational::one()
            } else {
                Rational::zero()
            };
            gain += stake * (indicator - p);
        }
    }
    gain
}

/// The random gain `sum_i s_i H_i (E_i - p_i)` on every constituent of the
/// conditioning disjunction, in constituent order.
pub fn gain_values(
    family: &Family,
    assessment: &PointAssessment,
    stakes: &[Rational],
) -> Result<Vec<(Constituent, Rational)>, CoherenceError> {
    if assessment.len() != family.len() {
        return Err(CoherenceError::LengthMismatch {
            expected: family.len(),
            got: assessment.len(),
        });
    }
    if stakes.len() != family.len() {
        return Err(CoherenceError::LengthMismatch {
            expected: family.len(),
            got: stakes.len(),
        });
    }
    let events = family.events();
    let out = family
        .context()
        .constituents()
        .into_iter()
        .filter(|c| events.iter().any(|e| c.satisfies(e.antecedent())))
        .map(|c| {
            let g = constituent_gain(events, assessment.values(), stakes, &c);
            (c, g)
        })
        .collect();
    Ok(out)
}

// ---------------------------------------------------------------------------
// The constituent-mass system
// ---------------------------------------------------------------------------

/// Constituents of the conditioning disjunction of `events`, with indicator
/// rows for each event's antecedent and consequent-antecedent conjunction.
struct MassSystem {
    constituents: Vec<Constituent>,
    /// `antecedent[i][h]` is 1 when constituent `h` satisfies `H_i`.
    antecedent: Vec<Vec<bool>>,
    /// `conjunction[i][h]` is 1 when constituent `h` satisfies `E_i & H_i`.
    conjunction: Vec<Vec<bool>>,
}

impl MassSystem {
    fn new(ctx: &EventContext, events: &[ConditionalEvent]) -> MassSystem {
        let constituents: Vec<Constituent> = ctx
            .constituents()
            .into_iter()
            .filter(|c| events.iter().any(|e| c.satisfies(e.antecedent())))
            .collect();
        let antecedent = events
            .iter()
            .map(|e| {
                constituents
                    .iter()
                    .map(|c| c.satisfies(e.antecedent()))
                    .collect()
            })
            .collect();
        let conjunction = events
            .iter()
            .map(|e| {
                constituents
                    .iter()
                    .map(|c| c.satisfies(e.antecedent()) && c.satisfies(e.consequent()))
                    .collect()
            })
            .collect();
        MassSystem {
            constituents,
            antecedent,
            conjunction,
        }
    }

    fn len(&self) -> usize {
        self.constituents.len()
    }

    fn indicator_row(flags: &[bool], total_vars: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); total_vars];
        for (h, &f) in flags.iter().enumerate() {
            if f {
                row[h] = Rational::one();
            }
        }
        row
    }

    /// Normalization row `sum lambda = 1` over `total_vars` columns.
    fn mass_one_row(&self, total_vars: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); total_vars];
        for entry in row.iter_mut().take(self.len()) {
            *entry = Rational::one();
        }
        row
    }
}

/// Indices whose conditioning mass is zero in every solution of `base`,
/// detected by maximizing each mass.
fn zero_layer(system: &MassSystem, base: &LpProblem) -> Vec<usize> {
    let mut zeros = Vec::new();
    for i in 0..system.antecedent.len() {
        let mut lp = base.clone();
        lp.objective = MassSystem::indicator_row(&system.antecedent[i], lp.num_vars);
        match maximize(&lp) {
            LpOutcome::Optimal { value, .. } => {
                if value.is_zero() {
                    zeros.push(i);
                }
            }
            LpOutcome::Infeasible => unreachable!("base system was feasible"),
            LpOutcome::Unbounded => unreachable!("masses are bounded"),
        }
    }
    zeros
}

// ---------------------------------------------------------------------------
// Precise coherence
// ---------------------------------------------------------------------------

fn coherent_rec(ctx: &EventContext, events: &[ConditionalEvent], values: &[Rational]) -> bool {
    let system = MassSystem::new(ctx, events);
    let vars = system.len();
    let mut lp = LpProblem::new(vars);
    lp.constrain(system.mass_one_row(vars), LpRelation::Eq, Rational::one());
    for (i, value) in values.iter().enumerate() {
        let conj = MassSystem::indicator_row(&system.conjunction[i], vars);
        let ante = MassSystem::indicator_row(&system.antecedent[i], vars);
        let row: Vec<Rational> = conj
            .iter()
            .zip(&ante)
            .map(|(c, a)| c - &(a * value))
            .collect();
        lp.constrain(row, LpRelation::Eq, Rational::zero());
    }
    if !maximize(&lp).is_feasible() {
        return false;
    }
    let zeros = zero_layer(&system, &lp);
    if zeros.is_empty() {
        return true;
    }
    debug_assert!(zeros.len() < events.len());
    let sub_events: Vec<ConditionalEvent> = zeros.iter().map(|&i| events[i].clone()).collect();
    let sub_values: Vec<Rational> = zeros.iter().map(|&i| values[i].clone()).collect();
    coherent_rec(ctx, &sub_events, &sub_values)
}

/// Decides coherence of a precise assessment on the family.
pub fn check_coherence(
    family: &Family,
    assessment: &PointAssessment,
) -> Result<bool, CoherenceError> {
    if assessment.len() != family.len() {
        return Err(CoherenceError::LengthMismatch {
            expected: family.len(),
            got: assessment.len(),
        });
    }
    Ok(coherent_rec(
        family.context(),
        family.events(),
        assessment.values(),
    ))
}

// ---------------------------------------------------------------------------
// The stake-searching oracle
// ---------------------------------------------------------------------------

/// Searches every nonempty subfamily for stakes with strictly one-signed
/// gain. Returns `None` exactly when the assessment is coherent; this is the
/// independent cross-check for [`check_coherence`].
pub fn find_dutch_book(
    family: &Family,
    assessment: &PointAssessment,
) -> Result<Option<DutchBook>, CoherenceError> {
    let n = family.len();
    if assessment.len() != n {
        return Err(CoherenceError::LengthMismatch {
            expected: n,
            got: assessment.len(),
        });
    }
    if n > DUTCH_BOOK_MAX_EVENTS {
        return Err(CoherenceError::FamilyTooLarge {
            size: n,
            bound: DUTCH_BOOK_MAX_EVENTS,
        });
    }
    let all_events = family.events();
    let all_values = assessment.values();

    for mask in 1u32..(1u32 << n) {
        let indices: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let events: Vec<ConditionalEvent> =
            indices.iter().map(|&i| all_events[i].clone()).collect();
        let values: Vec<Rational> = indices.iter().map(|&i| all_values[i].clone()).collect();
        let k = indices.len();

        let system = MassSystem::new(family.context(), &events);
        // Gain coefficient of event j on constituent h.
        let gain_coef = |j: usize, h: usize| -> Rational {
            if !system.antecedent[j][h] {
                return Rational::zero();
            }
            let indicator = if system.conjunction[j][h] {
                Rational::one()
            } else {
                Rational::zero()
            };
            indicator - &values[j]
        };

        // Stakes are shifted, u_j = s_j + 1 in [0,2], so all variables stay
        // nonnegative; t >= 0 is the minimum gain (zero stakes give zero
        // gain, so the optimum is never negative). Maximize t; a positive
        // optimum is a book. One-signedness is symmetric under negating
        // stakes, so searching the positive side is complete.
        let mut lp = LpProblem::new(k + 1);
        lp.objective[k] = Rational::one();
        for j in 0..k {
            let mut row = vec![Rational::zero(); k + 1];
            row[j] = Rational::one();
            lp.constrain(row, LpRelation::Le, rat(2, 1));
        }
        for h in 0..system.len() {
            let mut row = vec![Rational::zero(); k + 1];
            let mut rhs = Rational::zero();
            for (j, entry) in row.iter_mut().take(k).enumerate() {
                let g = gain_coef(j, h);
                *entry = g.clone();
                rhs += g;
            }
            row[k] = -Rational::one();
            lp.constrain(row, LpRelation::Ge, rhs);
        }
        match maximize(&lp) {
            LpOutcome::Optimal { value, point } if value.is_positive() => {
                let stakes: Vec<Rational> = (0..k).map(|j| &point[j] - &Rational::one()).collect();
                let gains: Vec<(Constituent, Rational)> = (0..system.len())
                    .map(|h| {
                        let mut g = Rational::zero();
                        for (j, stake) in stakes.iter().enumerate() {
                            g += stake * &gain_coef(j, h);
                        }
                        (system.constituents[h].clone(), g)
                    })
                    .collect();
                debug_assert!(gains.iter().all(|(_, g)| g.is_positive()));
                return Ok(Some(DutchBook {
                    indices,
                    stakes,
                    gains,
                }));
            }
            LpOutcome::Optimal { .. } => {}
            LpOutcome::Infeasible => unreachable!("zero stakes are feasible"),
            LpOutcome::Unbounded => unreachable!("stakes and gains are bounded"),
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Certified coherent sets
// ---------------------------------------------------------------------------

fn point_region(value: Rational) -> Region {
    Region::segment(Interval::point(value).expect("0 and 1 are inside the cube"))
}

fn pair_point_region(a: Rational, b: Rational) -> Region {
    Region::box_region(&[
        Interval::point(a).expect("valid point"),
        Interval::point(b).expect("valid point"),
    ])
}

/// All sign patterns of `formulas` realized by some constituent; logical
/// independence means every pattern occurs.
fn logically_independent(ctx: &EventContext, formulas: &[&crate::events::Formula]) -> bool {
    let k = formulas.len();
    if k >= 24 {
        return false;
    }
    let mut seen = vec![false; 1usize << k];
    let mut count = 0usize;
    for c in ctx.constituents() {
        let mut pattern = 0usize;
        for (bit, f) in formulas.iter().enumerate() {
            if c.satisfies(f) {
                pattern |= 1 << bit;
            }
        }
        if !seen[pattern] {
            seen[pattern] = true;
            count += 1;
        }
    }
    count == 1usize << k
}

/// A region certified to equal the set of all coherent precise assessments,
/// in the cases where a closed form is known:
///
/// - a single event, via its three-way classification;
/// - a complementary pair `(E|H, !E|H)`, where coherence forces the values
///   to sum to 1;
/// - the contrary-diagonal pair `(E|H, !E|!H)` with `E`, `H` logically
///   independent, where the coherent set is the whole square;
/// - logically independent events, where it is the whole cube.
///
/// Returns `None` when no certificate applies.
pub fn compute_pi(family: &Family) -> Option<Region> {
    let ctx = family.context();
    let events = family.events();
    let n = events.len();

    if n == 1 {
        return Some(match classify_conditional(ctx, &events[0]) {
            ConditionalKind::Contingent => Region::full(1),
            ConditionalKind::Entailed => point_region(Rational::one()),
            ConditionalKind::Incompatible => point_region(Rational::zero()),
        });
    }

    if n == 2 {
        let (first, second) = (&events[0], &events[1]);
        let negated_consequent = first.consequent().clone().negated();
        if ctx.equivalent(second.consequent(), &negated_consequent) {
            if ctx.equivalent(first.antecedent(), second.antecedent()) {
                // Complementary pair: p + q = 1, further pinned in the
                // degenerate single-event cases.
                return Some(match classify_conditional(ctx, first) {
                    ConditionalKind::Contingent => {
                        let line = LinearConstraint::eq(
                            vec![(0, Rational::one()), (1, Rational::one())],
                            Rational::one(),
                        );
                        let cell = Cell::new(2, vec![line]).expect("valid cell");
                        Region::from_cells(2, vec![cell]).expect("valid region")
                    }
                    ConditionalKind::Entailed => {
                        pair_point_region(Rational::one(), Rational::zero())
                    }
                    ConditionalKind::Incompatible => {
                        pair_point_region(Rational::zero(), Rational::one())
                    }
                });
            }
            let negated_antecedent = first.antecedent().clone().negated();
            if ctx.equivalent(second.antecedent(), &negated_antecedent)
                && logically_independent(ctx, &[first.consequent(), first.antecedent()])
            {
                return Some(Region::full(2));
            }
        }
    }

    let mut formulas = Vec::with_capacity(2 * n);
    for e in events {
        formulas.push(e.consequent());
        formulas.push(e.antecedent());
    }
    if logically_independent(ctx, &formulas) {
        return Some(Region::full(n));
    }
    None
}

// ---------------------------------------------------------------------------
// g-coherence backends
// ---------------------------------------------------------------------------

/// One box constraint of a cell, attached to a single event index:
/// `coef * p_i (relation) bound`.
struct CoordConstraint {
    coef: Rational,
    relation: Relation,
    bound: Rational,
}

fn cell_coordinate_constraints(
    cell: &Cell,
    n: usize,
) -> Result<Vec<Vec<CoordConstraint>>, CoherenceError> {
    let mut per_event: Vec<Vec<CoordConstraint>> = (0..n).map(|_| Vec::new()).collect();
    for c in cell.constraints() {
        match c.single_coordinate() {
            Some(i) => {
                let coef = c.coeffs().next().expect("nonempty").1.clone();
                per_event[i].push(CoordConstraint {
                    coef,
                    relation: c.relation(),
                    bound: c.bound().clone(),
                });
            }
            None => {
                if c.coeffs().next().is_some() {
                    return Err(CoherenceError::UnsupportedCell);
                }
                // Constant constraint: decide it outright.
                let holds = match c.relation() {
                    Relation::Eq => c.bound().is_zero(),
                    Relation::Le => !c.bound().is_negative(),
                    Relation::Lt => c.bound().is_positive(),
                };
                if !holds {
                    // The cell is empty; signal with an unsatisfiable box.
                    per_event[0].push(CoordConstraint {
                        coef: Rational::zero(),
                        relation: Relation::Lt,
                        bound: Rational::zero(),
                    });
                }
            }
        }
    }
    Ok(per_event)
}

/// The mass-LP recursion for one box cell. Returns a witness assessment
/// inside the cell when the restriction is g-coherent, `None` otherwise.
fn lambda_cell(
    ctx: &EventContext,
    events: &[ConditionalEvent],
    constraints: &[Vec<CoordConstraint>],
) -> Option<Vec<Rational>> {
    let n = events.len();
    let system = MassSystem::new(ctx, events);
    let lambdas = system.len();

    // Base system: masses plus the non-strict relaxation of every cell
    // constraint, linearized as coef * mass(E_i H_i) (rel) bound * mass(H_i).
    let mut base = LpProblem::new(lambdas);
    base.constrain(
        system.mass_one_row(lambdas),
        LpRelation::Eq,
        Rational::one(),
    );
    let linearized_row = |i: usize, cc: &CoordConstraint, vars: usize| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); vars];
        for (h, entry) in row.iter_mut().take(lambdas).enumerate() {
            let mut v = Rational::zero();
            if system.conjunction[i][h] {
                v += &cc.coef;
            }
            if system.antecedent[i][h] {
                v -= &cc.bound;
            }
            *entry = v;
        }
        row
    };
    for (i, ccs) in constraints.iter().enumerate() {
        for cc in ccs {
            let rel = match cc.relation {
                Relation::Eq => LpRelation::Eq,
                Relation::Le | Relation::Lt => LpRelation::Le,
            };
            base.constrain(linearized_row(i, cc, lambdas), rel, Rational::zero());
        }
    }
    if !maximize(&base).is_feasible() {
        return None;
    }

    let zeros = zero_layer(&system, &base);
    let in_zero_layer = |i: usize| zeros.contains(&i);

    // Strictness at this level, for events with positive mass available:
    // one uniform slack on each strict row, maximized.
    let strict_targets: Vec<(usize, &CoordConstraint)> = constraints
        .iter()
        .enumerate()
        .filter(|(i, _)| !in_zero_layer(*i))
        .flat_map(|(i, ccs)| {
            ccs.iter()
                .filter(|cc| cc.relation == Relation::Lt)
                .map(move |cc| (i, cc))
        })
        .collect();

    // Solutions used to assemble a witness with positive mass everywhere
    // outside the zero layer: the strict-slack optimum (or any base point)
    // mixed with one mass-maximizing solution per event.
    let mut mix_points: Vec<Vec<Rational>> = Vec::new();

    if strict_targets.is_empty() {
        let mut lp = base.clone();
        lp.objective = vec![Rational::zero(); lambdas];
        match maximize(&lp) {
            LpOutcome::Optimal { point, .. } => mix_points.push(point),
            _ => unreachable!("base system was feasible"),
        }
    } else {
        let mut lp = LpProblem::new(lambdas + 1);
        lp.objective[lambdas] = Rational::one();
        let widen = |mut row: Vec<Rational>, eps: Rational| {
            row.push(eps);
            row
        };
        for c in &base.constraints {
            lp.constraints.push(crate::lp::LpConstraint::new(
                widen(c.coeffs.clone(), Rational::zero()),
                c.relation,
                c.rhs.clone(),
            ));
        }
        let mut eps_bound = vec![Rational::zero(); lambdas + 1];
        eps_bound[lambdas] = Rational::one();
        lp.constrain(eps_bound, LpRelation::Le, Rational::one());
        for (i, cc) in &strict_targets {
            let row = widen(linearized_row(*i, cc, lambdas), Rational::one());
            lp.constrain(row, LpRelation::Le, Rational::zero());
        }
        match maximize(&lp) {
            LpOutcome::Optimal { value, mut point } if value.is_positive() => {
                point.truncate(lambdas);
                mix_points.push(point);
            }
            _ => return None,
        }
    }

    for i in 0..n {
        if in_zero_layer(i) {
            continue;
        }
        let mut lp = base.clone();
        lp.objective = MassSystem::indicator_row(&system.antecedent[i], lambdas);
        match maximize(&lp) {
            LpOutcome::Optimal { point, .. } => mix_points.push(point),
            _ => unreachable!("base system was feasible"),
        }
    }

    // Convex average; linear constraints survive, strict margins and the
    // positive masses survive with smaller magnitude.
    let count = rat(mix_points.len() as i64, 1);
    let mixed: Vec<Rational> = (0..lambdas)
        .map(|h| {
            let mut sum = Rational::zero();
            for p in &mix_points {
                sum += &p[h];
            }
            sum / &count
        })
        .collect();

    let mass_of = |flags: &[bool]| -> Rational {
        let mut sum = Rational::zero();
        for (h, &f) in flags.iter().enumerate() {
            if f {
                sum += &mixed[h];
            }
        }
        sum
    };

    let mut witness: Vec<Option<Rational>> = vec![None; n];
    for (i, slot) in witness.iter_mut().enumerate() {
        if in_zero_layer(i) {
            continue;
        }
        let mass = mass_of(&system.antecedent[i]);
        debug_assert!(mass.is_positive());
        let conj = mass_of(&system.conjunction[i]);
        *slot = Some(conj / mass);
    }

    if !zeros.is_empty() {
        debug_assert!(zeros.len() < n);
        let sub_events: Vec<ConditionalEvent> = zeros.iter().map(|&i| events[i].clone()).collect();
        let sub_constraints: Vec<Vec<CoordConstraint>> = zeros
            .iter()
            .map(|&i| {
                constraints[i]
                    .iter()
                    .map(|cc| CoordConstraint {
                        coef: cc.coef.clone(),
                        relation: cc.relation,
                        bound: cc.bound.clone(),
                    })
                    .collect()
            })
            .collect();
        let sub = lambda_cell(ctx, &sub_events, &sub_constraints)?;
        for (slot, value) in zeros.iter().zip(sub) {
            witness[*slot] = Some(value);
        }
    }

    Some(
        witness
            .into_iter()
            .map(|v| v.expect("all coordinates assigned"))
            .collect(),
    )
}

fn grid_points(dim: usize, denom: &num_bigint::BigInt) -> Vec<Vec<Rational>> {
    let m: u64 = denom.try_into().expect("grid step denominator fits u64");
    let mut out = Vec::new();
    let mut idx = vec![0u64; dim];
    loop {
        out.push(
            idx.iter()
                .map(|&k| Rational::new(k.into(), denom.clone()))
                .collect::<Vec<Rational>>(),
        );
        let mut c = dim;
        while c > 0 {
            if idx[c - 1] < m {
                idx[c - 1] += 1;
                break;
            }
            idx[c - 1] = 0;
            c -= 1;
        }
        if c == 0 {
            return out;
        }
    }
}

/// Decides whether the region contains a coherent precise assessment, and
/// reports a witness when the backend can produce one.
pub fn g_coherent_witness(
    family: &Family,
    region: &Region,
    backend: &PiBackend,
) -> Result<(Truth, Option<Vec<Rational>>), CoherenceError> {
    if region.dim() != family.len() {
        return Err(RegionError::DimensionMismatch(region.dim(), family.len()).into());
    }
    match backend {
        PiBackend::Exact => {
            let pi = compute_pi(family).ok_or(CoherenceError::UncertifiedPi)?;
            match pi.intersect(region)?.find_point() {
                Some(p) => Ok((Truth::True, Some(p))),
                None => Ok((Truth::False, None)),
            }
        }
        PiBackend::LambdaLp => {
            for cell in region.cells() {
                let constraints = cell_coordinate_constraints(cell, family.len())?;
                if let Some(w) = lambda_cell(family.context(), family.events(), &constraints) {
                    return Ok((Truth::True, Some(w)));
                }
            }
            Ok((Truth::False, None))
        }
        PiBackend::Grid { step } => {
            for p in grid_points(family.len(), step.denom()) {
                if region.contains_point(&p)? {
                    let assessment = PointAssessment::new(p.clone())?;
                    if check_coherence(family, &assessment)? {
                        return Ok((Truth::True, Some(p)));
                    }
                }
            }
            Ok((Truth::Unknown, None))
        }
    }
}

/// Whether the region contains at least one coherent precise assessment.
pub fn g_coherent(
    family: &Family,
    region: &Region,
    backend: &PiBackend,
) -> Result<Truth, CoherenceError> {
    Ok(g_coherent_witness(family, region, backend)?.0)
}

/// Whether the t-coherent part of the region is empty; the negation of
/// [`g_coherent`].
pub fn pi_is_empty(
    family: &Family,
    region: &Region,
    backend: &PiBackend,
) -> Result<Truth, CoherenceError> {
    Ok(g_coherent(family, region, backend)?.negate())
}

/// Whether the t-coherent part of `r1` is contained in that of `r2`.
pub fn pi_subset(
    family: &Family,
    r1: &Region,
    r2: &Region,
    backend: &PiBackend,
) -> Result<Truth, CoherenceError> {
    let difference = r1.intersect(&r2.complement())?;
    pi_is_empty(family, &difference, backend)
}

/// Whether `r1` and `r2` have the same t-coherent part.
pub fn pi_equal(
    family: &Family,
    r1: &Region,
    r2: &Region,
    backend: &PiBackend,
) -> Result<Truth, CoherenceError> {
    Ok(pi_subset(family, r1, r2, backend)?.and(pi_subset(family, r2, r1, backend)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{EventContext, Family, Formula};
    use crate::rational::{rat, rint};

    fn single_event(ctx: &EventContext, e: &str, h: &str) -> Family {
        let ce = ConditionalEvent::new(ctx, ctx.parse(e).unwrap(), ctx.parse(h).unwrap()).unwrap();
        Family::new(ctx.clone(), vec![ce]).unwrap()
    }

    fn complementary_pair() -> Family {
        let ctx = EventContext::unconstrained(vec!["E", "H"]).unwrap();
        let e = ctx.atom("E").unwrap();
        let h = ctx.atom("H").unwrap();
        let first = ConditionalEvent::new(&ctx, e.clone(), h.clone()).unwrap();
        let second = ConditionalEvent::new(&ctx, e.negated(), h).unwrap();
        Family::new(ctx, vec![first, second]).unwrap()
    }

    fn point(values: Vec<Rational>) -> PointAssessment {
        PointAssessment::new(values).unwrap()
    }

    #[test]
    fn gains_for_single_event() {
        let ctx = EventContext::unconstrained(vec!["E", "H"]).unwrap();
        let fam = single_event(&ctx, "E", "H");
        let gains = gain_values(&fam, &point(vec![rat(1, 2)]), &[rint(1)]).unwrap();
        // Constituents of H: (E,H) in lexicographic order over (E,H) values:
        // FT, TT. Gains -1/2 and 1/2.
        assert_eq!(gains.len(), 2);
        assert_eq!(gains[0].1, rat(-1, 2));
        assert_eq!(gains[1].1, rat(1, 2));
    }

    #[test]
    fn zero_stakes_give_zero_gains() {
        let fam = complementary_pair();
        let gains = gain_values(
            &fam,
            &point(vec![rat(3, 10), rat(6, 10)]),
            &[rint(0), rint(0)],
        )
        .unwrap();
        assert!(gains.iter().all(|(_, g)| g.is_zero()));
    }

    #[test]
    fn negative_unit_stakes_book_an_incoherent_pair() {
        // G = -(E - 3/10) - (!E - 6/10) = -1/10 on every H-constituent.
        let fam = complementary_pair();
        let gains = gain_values(
            &fam,
            &point(vec![rat(3, 10), rat(6, 10)]),
            &[rint(-1), rint(-1)],
        )
        .unwrap();
        assert_eq!(gains.len(), 2);
        assert!(gains.iter().all(|(_, g)| *g == rat(-1, 10)));
    }

    #[test]
    fn complementary_pair_coherence_is_the_sum_law() {
        let fam = complementary_pair();
        assert!(check_coherence(&fam, &point(vec![rat(3, 10), rat(7, 10)])).unwrap());
        assert!(!check_coherence(&fam, &point(vec![rat(3, 10), rat(6, 10)])).unwrap());
    }

    #[test]
    fn conditional_on_own_negation_rejects_one() {
        let ctx = EventContext::unconstrained(vec!["E"]).unwrap();
        let fam = single_event(&ctx, "E", "!E");
        assert!(!check_coherence(&fam, &point(vec![rint(1)])).unwrap());
        assert!(check_coherence(&fam, &point(vec![rint(0)])).unwrap());
    }

    #[test]
    fn contingent_single_event_accepts_midpoint() {
        let ctx = EventContext::unconstrained(vec!["P", "S"]).unwrap();
        let fam = single_event(&ctx, "P", "S");
        assert!(check_coherence(&fam, &point(vec![rat(1, 2)])).unwrap());
    }

    #[test]
    fn dutch_book_matches_coherence_on_examples() {
        let fam = complementary_pair();
        let incoherent = point(vec![rat(3, 10), rat(6, 10)]);
        let book = find_dutch_book(&fam, &incoherent)
            .unwrap()
            .expect("book exists");
        assert!(book.gains.iter().all(|(_, g)| g.is_positive()));
        // Re-evaluate the reported stakes independently.
        let mut full_stakes = vec![Rational::zero(); fam.len()];
        for (slot, stake) in book.indices.iter().zip(&book.stakes) {
            full_stakes[*slot] = stake.clone();
        }
        let sub_events: Vec<ConditionalEvent> = book
            .indices
            .iter()
            .map(|&i| fam.events()[i].clone())
            .collect();
        let sub_family = Family::new(fam.context().clone(), sub_events).unwrap();
        let sub_values = point(
            book.indices
                .iter()
                .map(|&i| incoherent.values()[i].clone())
                .collect(),
        );
        let gains = gain_values(&sub_family, &sub_values, &book.stakes).unwrap();
        assert!(gains.iter().all(|(_, g)| g.is_positive()));

        let coherent = point(vec![rat(3, 10), rat(7, 10)]);
        assert!(find_dutch_book(&fam, &coherent).unwrap().is_none());
    }

    #[test]
    fn dutch_book_for_conditional_on_own_negation() {
        let ctx = EventContext::unconstrained(vec!["E"]).unwrap();
        let fam = single_event(&ctx, "E", "!E");
        let book = find_dutch_book(&fam, &point(vec![rint(1)]))
            .unwrap()
            .expect("book");
        assert_eq!(book.indices, vec![0]);
        assert_eq!(book.gains.len(), 1);
        assert!(book.gains[0].1.is_positive());
    }

    #[test]
    fn zero_conditioning_mass_defers_to_the_recursion() {
        // With p(H) = 0 the value of E|H is settled one level deeper: any
        // value is coherent without constraints, but under "H implies E"
        // only 1 survives.
        let free = EventContext::unconstrained(vec!["H", "E"]).unwrap();
        let two_layer = |ctx: &EventContext| -> Family {
            let h = ctx.atom("H").unwrap();
            let e = ctx.atom("E").unwrap();
            let first = ConditionalEvent::new(ctx, h, Formula::True).unwrap();
            let second =
                ConditionalEvent::new(ctx, e, ctx.atom("H").unwrap()).unwrap();
            Family::new(ctx.clone(), vec![first, second]).unwrap()
        };

        let fam = two_layer(&free);
        for n in 0..=4i64 {
            let assessment = point(vec![rint(0), rat(n, 4)]);
            assert!(check_coherence(&fam, &assessment).unwrap(), "p2 = {n}/4");
            assert!(find_dutch_book(&fam, &assessment).unwrap().is_none());
        }

        let entail =
            EventContext::new(vec!["H", "E"], vec![free.parse("!H | E").unwrap()]).unwrap();
        let fam2 = two_layer(&entail);
        assert!(check_coherence(&fam2, &point(vec![rint(0), rint(1)])).unwrap());
        let assessment = point(vec![rint(0), rat(1, 2)]);
        assert!(!check_coherence(&fam2, &assessment).unwrap());
        assert!(find_dutch_book(&fam2, &assessment).unwrap().is_some());
    }

    #[test]
    fn mass_lp_handles_zero_layers_in_regions() {
        // Same two-layer family, set-valued: pinning p(H) to 0 pushes the
        // constraint on p(E|H) into the recursed level.
        let free = EventContext::unconstrained(vec!["H", "E"]).unwrap();
        let entail =
            EventContext::new(vec!["H", "E"], vec![free.parse("!H | E").unwrap()]).unwrap();
        let h = entail.atom("H").unwrap();
        let e = entail.atom("E").unwrap();
        let first = ConditionalEvent::new(&entail, h, Formula::True).unwrap();
        let second = ConditionalEvent::new(&entail, e, entail.atom("H").unwrap()).unwrap();
        let fam = Family::new(entail, vec![first, second]).unwrap();

        let zero = Interval::point(Rational::zero()).unwrap();
        let high = Region::box_region(&[
            zero.clone(),
            Interval::closed(rat(3, 4), rint(1)).unwrap(),
        ]);
        let (verdict, witness) = g_coherent_witness(&fam, &high, &PiBackend::LambdaLp).unwrap();
        assert_eq!(verdict, Truth::True);
        let w = witness.unwrap();
        assert!(high.contains_point(&w).unwrap());
        assert!(check_coherence(&fam, &PointAssessment::new(w).unwrap()).unwrap());

        let low = Region::box_region(&[zero, Interval::closed(rint(0), rat(1, 2)).unwrap()]);
        assert_eq!(g_coherent(&fam, &low, &PiBackend::LambdaLp).unwrap(), Truth::False);

        // This family has no certified closed form; the grid confirms the
        // positive case and stays silent on the negative one.
        assert!(matches!(
            g_coherent(&fam, &high, &PiBackend::Exact),
            Err(CoherenceError::UncertifiedPi)
        ));
        let grid = PiBackend::grid(rat(1, 4)).unwrap();
        assert_eq!(g_coherent(&fam, &high, &grid).unwrap(), Truth::True);
        assert_eq!(g_coherent(&fam, &low, &grid).unwrap(), Truth::Unknown);
    }

    #[test]
    fn oracle_bound_is_enforced() {
        let ctx = EventContext::unconstrained(vec!["A", "B", "C", "D"]).unwrap();
        let mut events = Vec::new();
        for name in ["A", "B", "C", "D"] {
            let f = ctx.atom(name).unwrap();
            events.push(ConditionalEvent::new(&ctx, f, Formula::True).unwrap());
            events.push(
                ConditionalEvent::new(&ctx, ctx.atom(name).unwrap().negated(), Formula::True)
                    .unwrap(),
            );
        }
        let fam = Family::new(ctx, events).unwrap();
        let values = point(vec![rat(1, 2); 8]);
        assert!(matches!(
            find_dutch_book(&fam, &values),
            Err(CoherenceError::FamilyTooLarge { .. })
        ));
    }

    #[test]
    fn pi_for_single_event_three_cases() {
        let free = EventContext::unconstrained(vec!["P", "S"]).unwrap();
        let fam = single_event(&free, "P", "S");
        assert!(compute_pi(&fam).unwrap().equal(&Region::full(1)).unwrap());

        let entail =
            EventContext::new(vec!["P", "S"], vec![free.parse("!S | P").unwrap()]).unwrap();
        let fam2 = single_event(&entail, "P", "S");
        assert!(compute_pi(&fam2)
            .unwrap()
            .equal(&point_region(rint(1)))
            .unwrap());

        let exclude =
            EventContext::new(vec!["P", "S"], vec![free.parse("!S | !P").unwrap()]).unwrap();
        let fam3 = single_event(&exclude, "P", "S");
        assert!(compute_pi(&fam3)
            .unwrap()
            .equal(&point_region(rint(0)))
            .unwrap());
    }

    #[test]
    fn pi_for_complementary_pair_is_the_sum_line() {
        let fam = complementary_pair();
        let pi = compute_pi(&fam).unwrap();
        assert!(pi.contains_point(&[rat(1, 4), rat(3, 4)]).unwrap());
        assert!(!pi.contains_point(&[rat(1, 4), rat(1, 4)]).unwrap());
    }

    #[test]
    fn pi_for_independent_pair_is_the_square() {
        let ctx = EventContext::unconstrained(vec!["P1", "S1", "P2", "S2"]).unwrap();
        let e1 =
            ConditionalEvent::new(&ctx, ctx.atom("P1").unwrap(), ctx.atom("S1").unwrap()).unwrap();
        let e2 =
            ConditionalEvent::new(&ctx, ctx.atom("P2").unwrap(), ctx.atom("S2").unwrap()).unwrap();
        let fam = Family::new(ctx, vec![e1, e2]).unwrap();
        assert!(compute_pi(&fam).unwrap().equal(&Region::full(2)).unwrap());
    }

    #[test]
    fn pi_for_contrary_diagonal_pair_is_the_square() {
        let ctx = EventContext::unconstrained(vec!["P", "S"]).unwrap();
        let p = ctx.atom("P").unwrap();
        let s = ctx.atom("S").unwrap();
        let e1 = ConditionalEvent::new(&ctx, p.clone(), s.clone()).unwrap();
        let e2 = ConditionalEvent::new(&ctx, p.negated(), s.negated()).unwrap();
        let fam = Family::new(ctx, vec![e1, e2]).unwrap();
        assert!(compute_pi(&fam).unwrap().equal(&Region::full(2)).unwrap());
    }

    #[test]
    fn pi_unknown_for_entangled_pair() {
        let ctx = EventContext::unconstrained(vec!["E", "H"]).unwrap();
        let e = ctx.atom("E").unwrap();
        let h = ctx.atom("H").unwrap();
        let first = ConditionalEvent::new(&ctx, e.clone(), h.clone()).unwrap();
        let fam = Family::new(ctx, vec![first.clone(), first]).unwrap();
        assert!(compute_pi(&fam).is_none());
    }

    #[test]
    fn exact_backend_on_boxes() {
        let ctx = EventContext::unconstrained(vec!["P", "S"]).unwrap();
        let fam = single_event(&ctx, "P", "S");
        let high = Region::segment(Interval::closed(rat(7, 10), rint(1)).unwrap());
        assert_eq!(
            g_coherent(&fam, &high, &PiBackend::Exact).unwrap(),
            Truth::True
        );
        assert_eq!(
            g_coherent(&fam, &Region::empty(1), &PiBackend::Exact).unwrap(),
            Truth::False
        );
    }

    #[test]
    fn backends_agree_on_the_pair_boxes() {
        let fam = complementary_pair();
        let hit = Region::box_region(&[
            Interval::closed(rat(1, 5), rat(2, 5)).unwrap(),
            Interval::closed(rat(7, 10), rat(9, 10)).unwrap(),
        ]);
        let miss = Region::box_region(&[
            Interval::closed(rint(0), rat(3, 10)).unwrap(),
            Interval::closed(rint(0), rat(3, 10)).unwrap(),
        ]);
        for backend in [PiBackend::Exact, PiBackend::LambdaLp] {
            assert_eq!(
                g_coherent(&fam, &hit, &backend).unwrap(),
                Truth::True,
                "{backend:?}"
            );
            assert_eq!(
                g_coherent(&fam, &miss, &backend).unwrap(),
                Truth::False,
                "{backend:?}"
            );
        }
        let grid = PiBackend::grid(rat(1, 20)).unwrap();
        let (verdict, witness) = g_coherent_witness(&fam, &hit, &grid).unwrap();
        assert_eq!(verdict, Truth::True);
        let w = witness.unwrap();
        assert!(hit.contains_point(&w).unwrap());
        assert!(check_coherence(&fam, &PointAssessment::new(w).unwrap()).unwrap());
        assert_eq!(g_coherent(&fam, &miss, &grid).unwrap(), Truth::Unknown);
    }

    #[test]
    fn lambda_witness_is_coherent_and_inside() {
        let fam = complementary_pair();
        let region = Region::box_region(&[
            Interval::new(rat(1, 5), false, rat(2, 5), true).unwrap(),
            Interval::closed(rat(1, 2), rint(1)).unwrap(),
        ]);
        let (verdict, witness) = g_coherent_witness(&fam, &region, &PiBackend::LambdaLp).unwrap();
        assert_eq!(verdict, Truth::True);
        let w = witness.unwrap();
        assert!(region.contains_point(&w).unwrap());
        assert!(check_coherence(&fam, &PointAssessment::new(w).unwrap()).unwrap());
    }

    #[test]
    fn lambda_rejects_coupled_constraints() {
        let fam = complementary_pair();
        let mean = Region::from_cells(
            2,
            vec![Cell::new(
                2,
                vec![LinearConstraint::ge(
                    vec![(0, rat(1, 2)), (1, rat(1, 2))],
                    rat(3, 4),
                )],
            )
            .unwrap()],
        )
        .unwrap();
        assert!(matches!(
            g_coherent(&fam, &mean, &PiBackend::LambdaLp),
            Err(CoherenceError::UnsupportedCell)
        ));
    }

    #[test]
    fn exact_backend_refuses_uncertified_families() {
        let ctx = EventContext::unconstrained(vec!["E", "H"]).unwrap();
        let e = ctx.atom("E").unwrap();
        let h = ctx.atom("H").unwrap();
        let ce = ConditionalEvent::new(&ctx, e.clone(), h.clone()).unwrap();
        let fam = Family::new(ctx, vec![ce.clone(), ce]).unwrap();
        assert!(matches!(
            g_coherent(&fam, &Region::full(2), &PiBackend::Exact),
            Err(CoherenceError::UncertifiedPi)
        ));
    }

    #[test]
    fn pi_predicates_on_degenerate_context() {
        // Under "S implies P" both [3/4,1] and [1/2,1] have coherent part {1}.
        let free = EventContext::unconstrained(vec!["P", "S"]).unwrap();
        let entail =
            EventContext::new(vec!["P", "S"], vec![free.parse("!S | P").unwrap()]).unwrap();
        let fam = single_event(&entail, "P", "S");
        let a = Region::segment(Interval::closed(rat(3, 4), rint(1)).unwrap());
        let b = Region::segment(Interval::closed(rat(1, 2), rint(1)).unwrap());
        assert_eq!(
            pi_equal(&fam, &a, &b, &PiBackend::Exact).unwrap(),
            Truth::True
        );

        // Independent events separate [0,1[ from [0,1] at the point 1.
        let fam2 = single_event(&free, "P", "S");
        let below = Region::segment(Interval::new(rint(0), true, rint(1), false).unwrap());
        let full = Region::full(1);
        assert_eq!(
            pi_equal(&fam2, &below, &full, &PiBackend::Exact).unwrap(),
            Truth::False
        );
        assert_eq!(
            pi_subset(&fam2, &below, &full, &PiBackend::Exact).unwrap(),
            Truth::True
        );
    }

    #[test]
    fn pi_emptiness_examples() {
        let ctx = EventContext::unconstrained(vec!["E"]).unwrap();
        let fam = single_event(&ctx, "E", "!E");
        let one = point_region(rint(1));
        assert_eq!(
            pi_is_empty(&fam, &one, &PiBackend::Exact).unwrap(),
            Truth::True
        );

        let ctx2 = EventContext::unconstrained(vec!["E", "H"]).unwrap();
        let fam2 = single_event(&ctx2, "E", "H");
        assert_eq!(
            pi_is_empty(&fam2, &Region::full(1), &PiBackend::Exact).unwrap(),
            Truth::False
        );
    }

    #[test]
    fn invalid_grid_steps_are_rejected() {
        assert!(PiBackend::grid(rat(1, 10)).is_ok());
        assert!(
            PiBackend::grid(rat(2, 10)).is_ok(),
            "2/10 canonicalizes to 1/5"
        );
        assert!(PiBackend::grid(rat(2, 5)).is_err());
        assert!(PiBackend::grid(rint(1)).is_err());
    }

    #[test]
    fn assessment_values_validated() {
        assert!(PointAssessment::new(vec![rat(3, 2)]).is_err());
        assert!(PointAssessment::new(vec![rat(-1, 2)]).is_err());
    }
}
