//! Dense two-phase primal simplex over exact rationals.
//!
//! Entering variables are chosen by the largest reduced cost (Dantzig's
//! rule). After a run of degenerate pivots the solver switches permanently
//! to Bland's smallest-index rule, which cannot cycle, so every solve
//! terminates. Row updates skip zero entries; the constraint matrices of the
//! oracle are mostly zeros and stay that way.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Sense of a linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `Σ_j coeffs[j] · x_j  (≤ | = | ≥)  rhs`, with sparse coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to `constraints` and `x ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

/// Result of [`lp_solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Objective value at `x`.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }

    /// `true` iff `x` satisfies every constraint and `x ≥ 0`, exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(Signed::is_negative) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = c.coeffs.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &x[*j]);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row `z_j − c_j` for a maximization; last entry is `−z`.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
    bland: bool,
    degenerate_run: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        let width = self.width();
        let mut nonzero = Vec::new();
        for j in 0..=width {
            if !self.rows[pr][j].is_zero() {
                self.rows[pr][j] *= &inv;
                nonzero.push(j);
            }
        }
        let prow = self.rows[pr].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[pc].is_zero() {
                return;
            }
            let factor = row[pc].clone();
            for &j in &nonzero {
                row[j] -= &factor * &prow[j];
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[pr] = pc;
    }

    fn entering(&self) -> Option<usize> {
        let candidates = (0..self.width()).filter(|&j| self.allowed[j] && self.cost[j].is_negative());
        if self.bland {
            candidates.min()
        } else {
            // Most negative reduced cost; ties go to the smallest index.
            candidates.fold(None, |best: Option<usize>, j| match best {
                Some(b) if self.cost[b] <= self.cost[j] => Some(b),
                _ => Some(j),
            })
        }
    }

    fn leaving(&self, pc: usize) -> Option<usize> {
        let width = self.width();
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !row[pc].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[pc];
            let better = match &best {
                None => true,
                Some((b, best_ratio)) => {
                    ratio < *best_ratio || (ratio == *best_ratio && self.basis[r] < self.basis[*b])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn step(&mut self) -> Step {
        let Some(pc) = self.entering() else {
            return Step::Optimal;
        };
        let Some(pr) = self.leaving(pc) else {
            return Step::Unbounded;
        };
        let width = self.width();
        if self.rows[pr][width].is_zero() {
            self.degenerate_run += 1;
            if self.degenerate_run >= DEGENERATE_STREAK {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
        }
        self.pivot(pr, pc);
        Step::Pivoted
    }

    fn run(&mut self) -> Step {
        loop {
            match self.step() {
                Step::Pivoted => continue,
                done => return done,
            }
        }
    }

    /// Installs `objective` (indexed by column) as the cost row, priced out
    /// against the current basis.
    fn set_objective(&mut self, objective: &[Rational]) {
        let width = self.width();
        let mut cost: Vec<Rational> = (0..=width)
            .map(|j| objective.get(j).map_or_else(Rational::zero, |c| -c))
            .collect();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let factor = cost[b].clone();
            for (j, entry) in self.rows[r].iter().enumerate() {
                if !entry.is_zero() {
                    cost[j] -= &factor * entry;
                }
            }
        }
        self.cost = cost;
        self.degenerate_run = 0;
    }
}

type Row = (Vec<(usize, Rational)>, Relation, Rational);

/// Solves `lp` exactly.
pub fn lp_solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars;
    let m = lp.constraints.len();

    // Orient rows so every right-hand side is nonnegative.
    let oriented: Vec<Row> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                let coeffs = c.coeffs.iter().map(|(j, a)| (*j, -a)).collect();
                (coeffs, flipped, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let slack_count = oriented.iter().filter(|(_, rel, _)| *rel != Relation::Eq).count();
    let artificial_count = oriented.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();
    let width = n + slack_count + artificial_count;
    let first_artificial = n + slack_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_artificial) = (n, first_artificial);
    for (coeffs, relation, rhs) in oriented {
        let mut row = vec![Rational::zero(); width + 1];
        for (j, a) in coeffs {
            row[j] += a;
        }
        row[width] = rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        cost: vec![Rational::zero(); width + 1],
        basis,
        allowed: vec![true; width],
        bland: false,
        degenerate_run: 0,
    };

    if artificial_count > 0 {
        // Phase 1: maximize −Σ artificials.
        let phase1: Vec<Rational> = (0..width)
            .map(|j| if j >= first_artificial { -Rational::one() } else { Rational::zero() })
            .collect();
        tableau.set_objective(&phase1);
        tableau.run();
        if !tableau.cost[width].is_zero() {
            return LpOutcome::Infeasible;
        }
        drive_out_artificials(&mut tableau, first_artificial);
        for j in first_artificial..width {
            tableau.allowed[j] = false;
        }
        tableau.bland = false;
    }

    let mut objective = lp.objective.clone();
    objective.resize(width, Rational::zero());
    tableau.set_objective(&objective);
    match tableau.run() {
        Step::Unbounded => LpOutcome::Unbounded,
        _ => {
            let mut x = vec![Rational::zero(); n];
            for (r, &b) in tableau.basis.iter().enumerate() {
                if b < n {
                    x[b] = tableau.rows[r][width].clone();
                }
            }
            let value = lp.evaluate(&x);
            LpOutcome::Optimal { value, x }
        }
    }
}

/// Removes artificial variables that are still basic (at level zero) after
/// phase 1, dropping rows that turn out to be redundant.
fn drive_out_artificials(tableau: &mut Tableau, first_artificial: usize) {
    let mut r = 0;
    while r < tableau.rows.len() {
        if tableau.basis[r] < first_artificial {
            r += 1;
            continue;
        }
        let pc = (0..first_artificial).find(|&j| !tableau.rows[r][j].is_zero());
        match pc {
            Some(pc) => {
                tableau.pivot(r, pc);
                r += 1;
            }
            None => {
                tableau.rows.remove(r);
                tableau.basis.remove(r);
            }
        }
    }
}
