//! Exact tightness oracle.
//!
//! Maximizes the CHSH combination over every deterministic locally causal
//! model whose measurement-dependence measures obey given limits. A hidden
//! variable only matters through its four outcomes, so any model is
//! equivalent to a distribution over the 16 [`StrategyAtom`]s for each joint
//! setting. The search is therefore a linear program in 64 probabilities
//! plus auxiliary variables for the L1 distance limits, solved exactly.

mod signs;
pub mod simplex;

use num_traits::{One, Zero};
use serde::Serialize;

pub use signs::{check_sign_conditions, SignReport};
pub use simplex::{lp_solve, Constraint, LinearProgram, LpOutcome, Relation};

use crate::bounds::{check_param_feasible, ModelParams};
use crate::error::{check_range, Error, Result};
use crate::model::{ConditionalTable, HiddenVariableModel, JointSetting, OutcomeTable, SettingsDistribution, Variant};
use crate::scalar::Rational;

/// A deterministic strategy `(A(x), A(x'), B(y), B(y'))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyAtom {
    pub index: usize,
    pub signs: [i32; 4],
}

impl StrategyAtom {
    /// Atom `k`: bit 3 of `k` flips `A(x)`, bit 0 flips `B(y')`.
    pub fn new(index: usize) -> Self {
        assert!(index < 16, "strategy index {index} out of range");
        let signs = std::array::from_fn(|j| if index >> (3 - j) & 1 == 1 { -1 } else { 1 });
        StrategyAtom { index, signs }
    }

    /// `A(u) B(v)` for a joint setting.
    pub fn product(&self, js: JointSetting) -> i32 {
        self.signs[js.alice.index()] * self.signs[2 + js.bob.index()]
    }

    /// The atom with both of Bob's outcomes negated.
    pub fn flip_bob(&self) -> StrategyAtom {
        StrategyAtom::new(self.index ^ 0b0011)
    }
}

/// All 16 atoms in index order.
pub fn canonical_strategies() -> Vec<StrategyAtom> {
    (0..16).map(StrategyAtom::new).collect()
}

/// One of the four distances constrained by the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DistancePair {
    /// `M1[v]`: `(x,v)` against `(x',v)`.
    Alice(Variant),
    /// `M2[u]`: `(u,y)` against `(u,y')`.
    Bob(Variant),
}

impl DistancePair {
    pub const ALL: [DistancePair; 4] = [
        DistancePair::Alice(Variant::Unprimed),
        DistancePair::Alice(Variant::Primed),
        DistancePair::Bob(Variant::Unprimed),
        DistancePair::Bob(Variant::Primed),
    ];

    pub fn settings(self) -> (JointSetting, JointSetting) {
        match self {
            DistancePair::Alice(v) => (
                JointSetting::new(Variant::Unprimed, v),
                JointSetting::new(Variant::Primed, v),
            ),
            DistancePair::Bob(u) => (
                JointSetting::new(u, Variant::Unprimed),
                JointSetting::new(u, Variant::Primed),
            ),
        }
    }
}

const ATOMS: usize = 16;
const P_VARS: usize = 4 * ATOMS;

fn p_var(js: JointSetting, k: usize) -> usize {
    js.index() * ATOMS + k
}

fn t_var(pair: usize, k: usize) -> usize {
    P_VARS + pair * ATOMS + k
}

/// LP maximizing `orientation · (E_xy + E_xy' + E_x'y − E_x'y')` subject to
/// each distance in [`DistancePair::ALL`] being at most the matching entry of
/// `limits`.
///
/// Because both distributions are normalized, `Σ|a − b| = 2 Σ (a − b)⁺`, so
/// a limit `D` becomes `t_k ≥ a_k − b_k`, `t_k ≥ 0`, `Σ t_k ≤ D/2`.
pub fn chsh_lp(limits: &[Rational; 4], orientation: i32) -> LinearProgram {
    let atoms = canonical_strategies();
    let mut lp = LinearProgram::new(P_VARS + 4 * ATOMS);
    for js in JointSetting::ALL {
        let sign = js.chsh_sign() as i32 * orientation;
        for atom in &atoms {
            lp.objective[p_var(js, atom.index)] = Rational::from_integer((sign * atom.product(js)).into());
        }
        let row = (0..ATOMS).map(|k| (p_var(js, k), Rational::one())).collect();
        lp.add(row, Relation::Eq, Rational::one());
    }
    let half = Rational::new(1.into(), 2.into());
    for (pair_index, pair) in DistancePair::ALL.iter().enumerate() {
        let (a, b) = pair.settings();
        for k in 0..ATOMS {
            lp.add(
                vec![
                    (p_var(a, k), Rational::one()),
                    (p_var(b, k), -Rational::one()),
                    (t_var(pair_index, k), -Rational::one()),
                ],
                Relation::Le,
                Rational::zero(),
            );
        }
        let row = (0..ATOMS).map(|k| (t_var(pair_index, k), Rational::one())).collect();
        lp.add(row, Relation::Le, &limits[pair_index] * &half);
    }
    lp
}

/// Which distance of each party carries the `M̂` limit in a four-parameter
/// branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    /// `v` with `M1[v] ≤ M̂1`.
    pub alice: Variant,
    /// `u` with `M2[u] ≤ M̂2`.
    pub bob: Variant,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch { alice: Variant::Unprimed, bob: Variant::Unprimed },
        Branch { alice: Variant::Unprimed, bob: Variant::Primed },
        Branch { alice: Variant::Primed, bob: Variant::Unprimed },
        Branch { alice: Variant::Primed, bob: Variant::Primed },
    ];

    fn limits(self, params: &ModelParams<Rational>) -> [Rational; 4] {
        let pick = |on_hat: bool, full: &Rational, hat: &Rational| if on_hat { hat.clone() } else { full.clone() };
        [
            pick(self.alice == Variant::Unprimed, &params.m1, params.mhat1()),
            pick(self.alice == Variant::Primed, &params.m1, params.mhat1()),
            pick(self.bob == Variant::Unprimed, &params.m2, params.mhat2()),
            pick(self.bob == Variant::Primed, &params.m2, params.mhat2()),
        ]
    }
}

/// Maximum CHSH value found by the oracle, with a model attaining it.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub s_max: Rational,
    /// 16-valued model (one λ per atom) with `chsh_s = s_max`.
    pub witness: HiddenVariableModel<Rational>,
    /// Branches attaining the maximum (four-parameter problems only).
    pub branches: Vec<Branch>,
    /// Optimum of every branch LP, in [`Branch::ALL`] order.
    pub branch_values: Vec<Rational>,
}

fn witness_model(x: &[Rational], label: String) -> HiddenVariableModel<Rational> {
    let rows: Vec<[i32; 4]> = canonical_strategies().iter().map(|a| a.signs).collect();
    let columns = std::array::from_fn(|s| x[s * ATOMS..(s + 1) * ATOMS].to_vec());
    HiddenVariableModel::new(
        OutcomeTable::from_rows(&rows),
        ConditionalTable::new(columns),
        SettingsDistribution::uniform(),
        label,
    )
}

fn solve_limits(limits: &[Rational; 4], orientation: i32) -> Result<(Rational, Vec<Rational>)> {
    match lp_solve(&chsh_lp(limits, orientation)) {
        LpOutcome::Optimal { value, x } => Ok((value, x)),
        // Uniform columns satisfy every limit and S is bounded by 4, so
        // neither status can occur for in-range limits.
        other => Err(Error::Region(format!("oracle LP ended with {other:?}"))),
    }
}

fn check_unit(name: &'static str, value: &Rational) -> Result<()> {
    check_range(name, value, &Rational::zero(), &Rational::from_integer(2.into()))
}

/// Largest `S` over all models with `M1 ≤ m1` and `M2 ≤ m2`.
pub fn max_s_two_param(m1: &Rational, m2: &Rational) -> Result<OracleResult> {
    check_unit("M1", m1)?;
    check_unit("M2", m2)?;
    let limits = [m1.clone(), m1.clone(), m2.clone(), m2.clone()];
    let (s_max, x) = solve_limits(&limits, 1)?;
    let label = format!("oracle witness (M1={m1}, M2={m2})");
    Ok(OracleResult {
        witness: witness_model(&x, label),
        s_max,
        branches: Vec::new(),
        branch_values: Vec::new(),
    })
}

/// Largest `S` over all models with `M1 ≤ m1`, `M2 ≤ m2`, `M̂1 ≤ m̂1`,
/// `M̂2 ≤ m̂2`. The `M̂` limits bound a minimum of two distances, which is
/// not convex; the feasible set is the union of four branches, one per
/// choice of which distance is small, each solved as its own LP.
pub fn max_s_four_param(params: &ModelParams<Rational>) -> Result<OracleResult> {
    check_param_feasible(params).into_result()?;
    let mut solved: Vec<([Rational; 4], Rational, Vec<Rational>)> = Vec::new();
    let mut branch_values = Vec::with_capacity(4);
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for branch in Branch::ALL {
        let limits = branch.limits(params);
        // Branches with identical limits (M̂i = Mi) share one LP.
        let (value, x) = match solved.iter().find(|(l, _, _)| *l == limits) {
            Some((_, v, x)) => (v.clone(), x.clone()),
            None => {
                let (v, x) = solve_limits(&limits, 1)?;
                solved.push((limits, v.clone(), x.clone()));
                (v, x)
            }
        };
        if !matches!(&best, Some((b, _)) if value <= *b) {
            best = Some((value.clone(), x));
        }
        branch_values.push(value);
    }
    let (s_max, x) = best.expect("four branches");
    let branches = Branch::ALL
        .iter()
        .zip(&branch_values)
        .filter(|(_, v)| **v == s_max)
        .map(|(b, _)| *b)
        .collect();
    let label = format!(
        "oracle witness (M1={}, M2={}, M̂1={}, M̂2={})",
        params.m1,
        params.m2,
        params.mhat1(),
        params.mhat2()
    );
    Ok(OracleResult {
        s_max,
        witness: witness_model(&x, label),
        branches,
        branch_values,
    })
}

/// Maximum of the CHSH combination taken with the given orientation, for
/// checking that dropping the absolute value loses nothing.
pub fn max_signed(limits: &[Rational; 4], orientation: i32) -> Result<Rational> {
    for (name, value) in ["limit"; 4].iter().zip(limits) {
        check_unit(name, value)?;
    }
    solve_limits(limits, orientation).map(|(v, _)| v)
}
