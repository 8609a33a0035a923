//! Exact set algebra for subsets of the unit cube `[0,1]^n`.
//!
//! A [`Region`] is a finite union of [`Cell`]s; a cell is a conjunction of
//! rational linear constraints, each strict (`<`), non-strict (`<=`) or an
//! equation. The cube bounds `0 <= p_i <= 1` are implicit in every cell, so
//! complements are always taken relative to `[0,1]^n`.
//!
//! Emptiness of a cell is decided by one exact LP: every strict constraint
//! receives the same slack variable `eps`, and the cell is nonempty iff the
//! LP maximizing `eps` is feasible with a positive optimum (for finitely many
//! rational constraints, a point satisfying all strict constraints exists iff
//! a uniform positive slack does). There is no canonical form for regions;
//! equality is always semantic, via double inclusion.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lp::{maximize, LpOutcome, LpProblem, LpRelation};
use crate::rational::Rational;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("malformed interval: {0}")]
    MalformedInterval(String),
    #[error("coordinate index {index} outside dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("point coordinate {0} lies outside [0,1]")]
    PointOutsideCube(String),
}

/// Relation of a linear constraint `sum a_i p_i (rel) b`. `Ge`/`Gt` inputs
/// are normalized to `Le`/`Lt` by negating both sides.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearConstraint {
    coeffs: BTreeMap<usize, Rational>,
    relation: Relation,
    bound: Rational,
}

impl LinearConstraint {
    fn build(coeffs: Vec<(usize, Rational)>, relation: Relation, bound: Rational) -> Self {
        let mut map = BTreeMap::new();
        for (index, coef) in coeffs {
            if coef.is_zero() {
                continue;
            }
            let entry = map.entry(index).or_insert_with(Rational::zero);
            *entry = &*entry + &coef;
            if entry.is_zero() {
                map.remove(&index);
            }
        }
        LinearConstraint {
            coeffs: map,
            relation,
            bound,
        }
        .scaled()
    }

    /// Scales so the leading nonzero coefficient is +1 or -1; keeps
    /// syntactically equal constraints deduplicable.
    fn scaled(mut self) -> Self {
        if let Some(first) = self.coeffs.values().next() {
            let scale = first.abs().recip();
            if !scale.is_one() {
                for v in self.coeffs.values_mut() {
                    *v = &*v * &scale;
                }
                self.bound = &self.bound * &scale;
            }
        }
        self
    }

    pub fn le(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::build(coeffs, Relation::Le, bound)
    }

    pub fn lt(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::build(coeffs, Relation::Lt, bound)
    }

    pub fn eq(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::build(coeffs, Relation::Eq, bound)
    }

    pub fn ge(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::le(negate_coeffs(coeffs), -bound)
    }

    pub fn gt(coeffs: Vec<(usize, Rational)>, bound: Rational) -> Self {
        Self::lt(negate_coeffs(coeffs), -bound)
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_strict(&self) -> bool {
        self.relation == Relation::Lt
    }

    /// When the constraint mentions exactly one coordinate, its index.
    pub fn single_coordinate(&self) -> Option<usize> {
        if self.coeffs.len() == 1 {
            self.coeffs.keys().next().copied()
        } else {
            None
        }
    }

    pub fn max_coordinate(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn eval(&self, point: &[Rational]) -> bool {
        let mut lhs = Rational::zero();
        for (i, a) in &self.coeffs {
            lhs += a * &point[*i];
        }
        match self.relation {
            Relation::Eq => lhs == self.bound,
            Relation::Le => lhs <= self.bound,
            Relation::Lt => lhs < self.bound,
        }
    }

    /// The constraints whose union is the negation of this one.
    fn negations(&self) -> Vec<LinearConstraint> {
        let coeffs: Vec<(usize, Rational)> =
            self.coeffs.iter().map(|(k, v)| (*k, v.clone())).collect();
        match self.relation {
            // not (lhs <= b)  is  lhs > b
            Relation::Le => vec![LinearConstraint::gt(coeffs, self.bound.clone())],
            // not (lhs < b)  is  lhs >= b
            Relation::Lt => vec![LinearConstraint::ge(coeffs, self.bound.clone())],
            Relation::Eq => vec![
                LinearConstraint::lt(coeffs.clone(), self.bound.clone()),
                LinearConstraint::gt(coeffs, self.bound.clone()),
            ],
        }
    }
}

/// A single convex cell: the conjunction of its constraints, intersected
/// with the implicit unit cube.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cell {
    dim: usize,
    constraints: Vec<LinearConstraint>,
}

impl Cell {
    pub fn new(dim: usize, constraints: Vec<LinearConstraint>) -> Result<Self, RegionError> {
        for c in &constraints {
            if let Some(max) = c.max_coordinate() {
                if max >= dim {
                    return Err(RegionError::CoordinateOutOfRange { index: max, dim });
                }
            }
        }
        let mut cell = Cell {
            dim,
            constraints: Vec::new(),
        };
        for c in constraints {
            cell.push(c);
        }
        Ok(cell)
    }

    pub fn universe(dim: usize) -> Self {
        Cell {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    fn push(&mut self, c: LinearConstraint) {
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
    }

    fn conjoin(&self, other: &Cell) -> Cell {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for c in &other.constraints {
            out.push(c.clone());
        }
        out
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.eval(point))
    }

    /// Feasibility LP: variables `p_0..p_{dim-1}` and the uniform strict
    /// slack `eps`, each in `[0,1]`; maximize `eps`.
    fn slack_lp(&self) -> LpProblem {
        let n = self.dim;
        let mut lp = LpProblem::new(n + 1);
        lp.objective[n] = Rational::one();
        for i in 0..n {
            let mut row = vec![Rational::zero(); n + 1];
            row[i] = Rational::one();
            lp.constrain(row, LpRelation::Le, Rational::one());
        }
        let mut eps_row = vec![Rational::zero(); n + 1];
        eps_row[n] = Rational::one();
        lp.constrain(eps_row, LpRelation::Le, Rational::one());
        for c in &self.constraints {
            let mut row = vec![Rational::zero(); n + 1];
            for (i, a) in &c.coeffs {
                row[*i] = a.clone();
            }
            let rel = match c.relation {
                Relation::Eq => LpRelation::Eq,
                Relation::Le => LpRelation::Le,
                Relation::Lt => {
                    row[n] = Rational::one();
                    LpRelation::Le
                }
            };
            lp.constrain(row, rel, c.bound.clone());
        }
        lp
    }

    pub fn is_empty(&self) -> bool {
        self.find_point().is_none()
    }

    /// A witness point inside the cell (and the cube), if any.
    pub fn find_point(&self) -> Option<Vec<Rational>> {
        match maximize(&self.slack_lp()) {
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("slack LP is bounded"),
            LpOutcome::Optimal { value, mut point } => {
                let has_strict = self.constraints.iter().any(|c| c.is_strict());
                if has_strict && value.is_zero() {
                    None
                } else {
                    point.truncate(self.dim);
                    Some(point)
                }
            }
        }
    }

    /// The complement of this cell as a union of single-constraint cells.
    fn complement_region(&self) -> Region {
        let mut cells = Vec::new();
        for c in &self.constraints {
            for neg in c.negations() {
                cells.push(Cell {
                    dim: self.dim,
                    constraints: vec![neg],
                });
            }
        }
        Region {
            dim: self.dim,
            cells,
        }
    }

    /// Drops constraints implied by the rest of the cell; keeps semantics.
    fn without_redundancies(mut self) -> Cell {
        let mut i = 0;
        while i < self.constraints.len() {
            let candidate = self.constraints[i].clone();
            let mut rest = self.clone();
            rest.constraints.remove(i);
            let redundant = candidate.negations().into_iter().all(|neg| {
                let mut probe = rest.clone();
                probe.push(neg);
                probe.is_empty()
            });
            if redundant {
                self.constraints.remove(i);
            } else {
                i += 1;
            }
        }
        self
    }

    /// True iff this cell is contained in `other` (both within the cube).
    fn subset_of(&self, other: &Cell) -> bool {
        other.constraints.iter().all(|c| {
            c.negations().into_iter().all(|neg| {
                let mut probe = self.clone();
                probe.push(neg);
                probe.is_empty()
            })
        })
    }
}

/// One axis interval of a box, with independently open or closed endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    pub lower: Rational,
    pub lower_closed: bool,
    pub upper: Rational,
    pub upper_closed: bool,
}

impl Interval {
    pub fn new(
        lower: Rational,
        lower_closed: bool,
        upper: Rational,
        upper_closed: bool,
    ) -> Result<Self, RegionError> {
        let zero = Rational::zero();
        let one = Rational::one();
        if lower < zero || upper > one || lower > upper {
            return Err(RegionError::MalformedInterval(format!(
                "[{lower}, {upper}] must satisfy 0 <= lower <= upper <= 1"
            )));
        }
        if lower == upper && !(lower_closed && upper_closed) {
            return Err(RegionError::MalformedInterval(format!(
                "degenerate interval at {lower} must be closed on both ends"
            )));
        }
        Ok(Interval {
            lower,
            lower_closed,
            upper,
            upper_closed,
        })
    }

    pub fn closed(lower: Rational, upper: Rational) -> Result<Self, RegionError> {
        Interval::new(lower, true, upper, true)
    }

    pub fn point(value: Rational) -> Result<Self, RegionError> {
        Interval::new(value.clone(), true, value, true)
    }

    fn constraints(&self, coord: usize) -> Vec<LinearConstraint> {
        let mut out = Vec::new();
        let var = vec![(coord, Rational::one())];
        if self.lower_closed {
            out.push(LinearConstraint::ge(var.clone(), self.lower.clone()));
        } else {
            out.push(LinearConstraint::gt(var.clone(), self.lower.clone()));
        }
        if self.upper_closed {
            out.push(LinearConstraint::le(var, self.upper.clone()));
        } else {
            out.push(LinearConstraint::lt(var, self.upper.clone()));
        }
        out
    }
}

/// A finite union of cells; the empty union is the empty set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Region {
    dim: usize,
    cells: Vec<Cell>,
}

impl Region {
    pub fn empty(dim: usize) -> Self {
        Region {
            dim,
            cells: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Region {
            dim,
            cells: vec![Cell::universe(dim)],
        }
    }

    pub fn from_cells(dim: usize, cells: Vec<Cell>) -> Result<Self, RegionError> {
        for c in &cells {
            if c.dim != dim {
                return Err(RegionError::DimensionMismatch(c.dim, dim));
            }
        }
        Ok(Region { dim, cells })
    }

    /// Axis-aligned box, one interval per coordinate.
    pub fn box_region(intervals: &[Interval]) -> Self {
        let dim = intervals.len();
        let mut constraints = Vec::new();
        for (i, interval) in intervals.iter().enumerate() {
            constraints.extend(interval.constraints(i));
        }
        let mut cell = Cell {
            dim,
            constraints: Vec::new(),
        };
        for c in constraints {
            cell.push(c);
        }
        Region {
            dim,
            cells: vec![cell],
        }
    }

    /// Convenience for one-dimensional interval regions.
    pub fn segment(interval: Interval) -> Self {
        Region::box_region(&[interval])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn check_dim(&self, other: &Region) -> Result<(), RegionError> {
        if self.dim != other.dim {
            return Err(RegionError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn union(&self, other: &Region) -> Result<Region, RegionError> {
        self.check_dim(other)?;
        let mut cells = self.cells.clone();
        for c in &other.cells {
            if !cells.contains(c) {
                cells.push(c.clone());
            }
        }
        Ok(Region {
            dim: self.dim,
            cells,
        })
    }

    pub fn intersect(&self, other: &Region) -> Result<Region, RegionError> {
        self.check_dim(other)?;
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let c = a.conjoin(b);
                if !cells.contains(&c) {
                    cells.push(c);
                }
            }
        }
        Ok(Region {
            dim: self.dim,
            cells,
        })
    }

    /// Semantic complement relative to `[0,1]^n`, by De Morgan expansion of
    /// the cell complements. Intermediate products are pruned and reduced so
    /// the expansion stays small.
    pub fn complement(&self) -> Region {
        let mut acc = Region::full(self.dim);
        for cell in &self.cells {
            let negated = cell.complement_region();
            let mut next = Vec::new();
            for a in &acc.cells {
                for b in &negated.cells {
                    let c = a.conjoin(b);
                    if !next.contains(&c) && !c.is_empty() {
                        next.push(c);
                    }
                }
            }
            acc = Region {
                dim: self.dim,
                cells: next,
            };
        }
        acc.reduced()
    }

    /// Removes empty cells, redundant constraints and cells subsumed by
    /// another cell. Purely an economy measure; the set is unchanged.
    fn reduced(self) -> Region {
        let mut cells: Vec<Cell> = Vec::new();
        for cell in self.cells {
            if cell.is_empty() {
                continue;
            }
            let slim = cell.without_redundancies();
            if !cells.contains(&slim) {
                cells.push(slim);
            }
        }
        let mut i = 0;
        while i < cells.len() {
            let mut drop = false;
            for j in 0..cells.len() {
                if i != j && cells[i].subset_of(&cells[j]) {
                    // Of two mutually subsuming cells keep the later one.
                    if !(j > i && cells[j].subset_of(&cells[i])) {
                        drop = true;
                        break;
                    }
                }
            }
            if drop {
                cells.remove(i);
            } else {
                i += 1;
            }
        }
        Region {
            dim: self.dim,
            cells,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    /// A witness point of the region, if nonempty; deterministic.
    pub fn find_point(&self) -> Option<Vec<Rational>> {
        self.cells.iter().find_map(|c| c.find_point())
    }

    pub fn contains_point(&self, point: &[Rational]) -> Result<bool, RegionError> {
        if point.len() != self.dim {
            return Err(RegionError::DimensionMismatch(point.len(), self.dim));
        }
        for v in point {
            if v.is_negative() || *v > Rational::one() {
                return Err(RegionError::PointOutsideCube(v.to_string()));
            }
        }
        Ok(self.cells.iter().any(|c| c.contains(point)))
    }

    pub fn subset(&self, other: &Region) -> Result<bool, RegionError> {
        self.check_dim(other)?;
        Ok(self.intersect(&other.complement())?.is_empty())
    }

    pub fn equal(&self, other: &Region) -> Result<bool, RegionError> {
        Ok(self.subset(other)? && other.subset(self)?)
    }
}

fn negate_coeffs(coeffs: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    coeffs.into_iter().map(|(i, a)| (i, -a)).collect()
}

impl std::fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (pos, (i, a)) in self.coeffs.iter().enumerate() {
            if pos == 0 {
                if *a == -Rational::one() {
                    write!(f, "-")?;
                } else if !a.is_one() {
                    write!(f, "({a})*")?;
                }
            } else if a.is_negative() {
                let mag = a.abs();
                if mag.is_one() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " - ({mag})*")?;
                }
            } else if a.is_one() {
                write!(f, " + ")?;
            } else {
                write!(f, " + ({a})*")?;
            }
            write!(f, "p{}", i + 1)?;
        }
        let rel = match self.relation {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
        };
        write!(f, " {rel} {}", self.bound)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.constraints.is_empty() {
            return write!(f, "{{cube}}");
        }
        write!(f, "{{")?;
        for (pos, c) in self.constraints.iter().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "(empty)");
        }
        for (pos, c) in self.cells.iter().enumerate() {
            if pos > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
