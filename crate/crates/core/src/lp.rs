//! Exact linear programming over rationals.
//!
//! A dense two-phase primal simplex with Bland's pivoting rule. Bland's rule
//! never cycles, so together with exact rational arithmetic every solve
//! terminates with an exact verdict. Pivot choices are index-ordered, which
//! makes returned optima (and hence every witness point reported by this
//! crate) deterministic.
//!
//! The solver maximizes. Variables are nonnegative by default; a variable
//! flagged free is split internally into a difference of two nonnegative
//! columns.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LpRelation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LpConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: LpRelation,
    pub rhs: Rational,
}

impl LpConstraint {
    pub fn new(coeffs: Vec<Rational>, relation: LpRelation, rhs: Rational) -> Self {
        LpConstraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Objective coefficients, maximized.
    pub objective: Vec<Rational>,
    pub constraints: Vec<LpConstraint>,
    /// Per-variable flag; `false` means the variable is constrained to be >= 0.
    pub free: Vec<bool>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: LpRelation, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.constraints
            .push(LpConstraint::new(coeffs, relation, rhs));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    /// `rows[i]` holds the coefficients of structural columns followed by the
    /// right-hand side in the last position.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> &Rational {
        &self.rows[row][self.cols]
    }

    fn pivot(&mut self, pivot_row: usize, pivot_col: usize) {
        let inv = self.rows[pivot_row][pivot_col].recip();
        for entry in self.rows[pivot_row].iter_mut() {
            *entry = &*entry * &inv;
        }
        for r in 0..self.rows.len() {
            if r == pivot_row {
                continue;
            }
            let factor = self.rows[r][pivot_col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..=self.cols {
                let delta = &factor * &self.rows[pivot_row][c];
                self.rows[r][c] = &self.rows[r][c] - &delta;
            }
        }
        self.basis[pivot_row] = pivot_col;
    }

    /// Runs simplex iterations maximizing `costs` (one entry per column).
    /// Columns listed in `banned` are never entered. Returns the objective
    /// value, or `None` when the problem is unbounded above.
    fn optimize(&mut self, costs: &[Rational], banned: &[bool]) -> Option<Rational> {
        loop {
            // Reduced costs: r_j = c_j - c_B . column_j, recomputed from
            // scratch each iteration. Bland: enter the lowest-index column
            // with positive reduced cost.
            let mut entering = None;
            'cols: for j in 0..self.cols {
                if banned[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = costs[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !costs[b].is_zero() {
                        reduced -= &costs[b] * &self.rows[i][j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(col) = entering else {
                let mut value = Rational::zero();
                for (i, &b) in self.basis.iter().enumerate() {
                    value += &costs[b] * self.rhs(i);
                }
                return Some(value);
            };

            // Ratio test; Bland tie-break on the smallest basis variable.
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let pivot_entry = &self.rows[i][col];
                if !pivot_entry.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / pivot_entry;
                match &leaving {
                    None => leaving = Some((i, ratio)),
                    Some((best_row, best_ratio)) => {
                        if ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return None; // unbounded in this direction
            };
            self.pivot(row, col);
        }
    }
}

/// Solves `maximize objective . x` subject to the problem's constraints.
pub fn maximize(problem: &LpProblem) -> LpOutcome {
    let n = problem.num_vars;
    debug_assert_eq!(problem.objective.len(), n);
    debug_assert_eq!(problem.free.len(), n);

    // Split free variables x = x+ - x-.
    let mut col_of_var = Vec::with_capacity(n);
    let mut neg_col_of_var = Vec::with_capacity(n);
    let mut structural = 0usize;
    for &is_free in &problem.free {
        col_of_var.push(structural);
        structural += 1;
        if is_free {
            neg_col_of_var.push(Some(structural));
            structural += 1;
        } else {
            neg_col_of_var.push(None);
        }
    }

    let m = problem.constraints.len();
    let mut slack_cols = 0usize;
    let mut artificial_rows = Vec::new();
    for (i, c) in problem.constraints.iter().enumerate() {
        // Orient so the rhs is nonnegative, then classify.
        let flip = c.rhs.is_negative();
        let rel = match (c.relation, flip) {
            (LpRelation::Eq, _) => LpRelation::Eq,
            (LpRelation::Le, false) | (LpRelation::Ge, true) => LpRelation::Le,
            (LpRelation::Ge, false) | (LpRelation::Le, true) => LpRelation::Ge,
        };
        match rel {
            LpRelation::Le => slack_cols += 1,
            LpRelation::Ge => {
                slack_cols += 1;
                artificial_rows.push(i);
            }
            LpRelation::Eq => artificial_rows.push(i),
        }
    }
    let total_cols = structural + slack_cols + artificial_rows.len();

    let mut rows = vec![vec![Rational::zero(); total_cols + 1]; m];
    let mut basis = vec![usize::MAX; m];
    let mut next_slack = structural;
    let mut next_artificial = structural + slack_cols;
    let mut is_artificial = vec![false; total_cols];

    for (i, c) in problem.constraints.iter().enumerate() {
        let flip = c.rhs.is_negative();
        let sign = if flip {
            -Rational::one()
        } else {
            Rational::one()
        };
        for v in 0..n {
            let coef = &c.coeffs[v] * &sign;
            if coef.is_zero() {
                continue;
            }
            rows[i][col_of_var[v]] = coef.clone();
            if let Some(neg) = neg_col_of_var[v] {
                rows[i][neg] = -coef;
            }
        }
        rows[i][total_cols] = &c.rhs * &sign;
        let rel = match (c.relation, flip) {
            (LpRelation::Eq, _) => LpRelation::Eq,
            (LpRelation::Le, false) | (LpRelation::Ge, true) => LpRelation::Le,
            (LpRelation::Ge, false) | (LpRelation::Le, true) => LpRelation::Ge,
        };
        match rel {
            LpRelation::Le => {
                rows[i][next_slack] = Rational::one();
                basis[i] = next_slack;
                next_slack += 1;
            }
            LpRelation::Ge => {
                rows[i][next_slack] = -Rational::one();
                next_slack += 1;
                rows[i][next_artificial] = Rational::one();
                is_artificial[next_artificial] = true;
                basis[i] = next_artificial;
                next_artificial += 1;
            }
            LpRelation::Eq => {
                rows[i][next_artificial] = Rational::one();
                is_artificial[next_artificial] = true;
                basis[i] = next_artificial;
                next_artificial += 1;
            }
        }
    }

    let mut tableau = Tableau {
        rows,
        basis,
        cols: total_cols,
    };
    let no_ban = vec![false; total_cols];

    // Phase 1: drive artificial variables to zero.
    if !artificial_rows.is_empty() {
        let mut phase1 = vec![Rational::zero(); total_cols];
        for (j, flag) in is_artificial.iter().enumerate() {
            if *flag {
                phase1[j] = -Rational::one();
            }
        }
        let value = tableau
            .optimize(&phase1, &no_ban)
            .expect("phase 1 objective is bounded");
        if value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // Pivot any artificial still in the basis out of it, or drop its row
        // if the row became redundant.
        let mut r = 0;
        while r < tableau.rows.len() {
            if is_artificial[tableau.basis[r]] {
                let pivot_col =
                    (0..total_cols).find(|&j| !is_artificial[j] && !tableau.rows[r][j].is_zero());
                match pivot_col {
                    Some(j) => tableau.pivot(r, j),
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: the real objective, artificial columns banned.
    let mut costs = vec![Rational::zero(); total_cols];
    for v in 0..n {
        costs[col_of_var[v]] = problem.objective[v].clone();
        if let Some(neg) = neg_col_of_var[v] {
            costs[neg] = -problem.objective[v].clone();
        }
    }
    let Some(value) = tableau.optimize(&costs, &is_artificial) else {
        return LpOutcome::Unbounded;
    };

    let mut solution = vec![Rational::zero(); total_cols];
    for (i, &b) in tableau.basis.iter().enumerate() {
        solution[b] = tableau.rhs(i).clone();
    }
    let mut point = Vec::with_capacity(n);
    for v in 0..n {
        let mut x = solution[col_of_var[v]].clone();
        if let Some(neg) = neg_col_of_var[v] {
            x -= &solution[neg];
        }
        point.push(x);
    }
    LpOutcome::Optimal { value, point }
}
