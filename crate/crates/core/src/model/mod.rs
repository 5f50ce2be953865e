//! Finite deterministic hidden-variable models of the two-setting,
//! two-outcome CHSH scenario.
//!
//! A model assigns each hidden-variable value λ (indexed `0..n`) a fixed
//! outcome `±1` for each of Alice's settings `x, x'` and Bob's settings
//! `y, y'`, a conditional distribution `p(λ|u,v)` for every joint setting,
//! and a distribution `p(u,v)` over the joint settings themselves.

mod json;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub use json::{load_model, load_model_str, save_model, AnyModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Party {
    Alice,
    Bob,
}

/// Which of an observer's two settings: `x`/`y` or `x'`/`y'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    Unprimed,
    Primed,
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::Unprimed, Variant::Primed];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn other(self) -> Variant {
        match self {
            Variant::Unprimed => Variant::Primed,
            Variant::Primed => Variant::Unprimed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SettingLabel {
    pub party: Party,
    pub variant: Variant,
}

impl SettingLabel {
    pub const X: SettingLabel = SettingLabel::new(Party::Alice, Variant::Unprimed);
    pub const X_PRIME: SettingLabel = SettingLabel::new(Party::Alice, Variant::Primed);
    pub const Y: SettingLabel = SettingLabel::new(Party::Bob, Variant::Unprimed);
    pub const Y_PRIME: SettingLabel = SettingLabel::new(Party::Bob, Variant::Primed);

    pub const fn new(party: Party, variant: Variant) -> Self {
        SettingLabel { party, variant }
    }

    pub fn name(self) -> &'static str {
        match (self.party, self.variant) {
            (Party::Alice, Variant::Unprimed) => "x",
            (Party::Alice, Variant::Primed) => "x'",
            (Party::Bob, Variant::Unprimed) => "y",
            (Party::Bob, Variant::Primed) => "y'",
        }
    }
}

impl fmt::Display for SettingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A joint setting `(u, v)`: Alice's choice and Bob's choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JointSetting {
    pub alice: Variant,
    pub bob: Variant,
}

impl JointSetting {
    pub const XY: JointSetting = JointSetting::new(Variant::Unprimed, Variant::Unprimed);
    pub const XY_PRIME: JointSetting = JointSetting::new(Variant::Unprimed, Variant::Primed);
    pub const X_PRIME_Y: JointSetting = JointSetting::new(Variant::Primed, Variant::Unprimed);
    pub const X_PRIME_Y_PRIME: JointSetting = JointSetting::new(Variant::Primed, Variant::Primed);

    /// Column order used throughout: `(x,y), (x,y'), (x',y), (x',y')`.
    pub const ALL: [JointSetting; 4] = [
        JointSetting::XY,
        JointSetting::XY_PRIME,
        JointSetting::X_PRIME_Y,
        JointSetting::X_PRIME_Y_PRIME,
    ];

    pub const fn new(alice: Variant, bob: Variant) -> Self {
        JointSetting { alice, bob }
    }

    pub fn index(self) -> usize {
        2 * self.alice.index() + self.bob.index()
    }

    pub fn from_index(index: usize) -> JointSetting {
        JointSetting::ALL[index]
    }

    pub fn label(self) -> &'static str {
        ["x,y", "x,y'", "x',y", "x',y'"][self.index()]
    }

    /// Sign of this correlator in the CHSH combination.
    pub fn chsh_sign(self) -> i64 {
        if self == JointSetting::X_PRIME_Y_PRIME {
            -1
        } else {
            1
        }
    }

    /// The setting after exchanging the roles of Alice and Bob.
    pub fn swapped(self) -> JointSetting {
        JointSetting::new(self.bob, self.alice)
    }
}

impl fmt::Display for JointSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Deterministic outcome functions `A(u, λ)` and `B(v, λ)`.
///
/// Entries are stored as read so that [`validate_model`] can report
/// anything other than `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeTable {
    pub(crate) lambda_count: usize,
    pub(crate) alice: [Vec<i32>; 2],
    pub(crate) bob: [Vec<i32>; 2],
}

impl OutcomeTable {
    /// Builds a table from `A(x,·), A(x',·), B(y,·), B(y',·)`.
    pub fn new(a_x: Vec<i32>, a_x_prime: Vec<i32>, b_y: Vec<i32>, b_y_prime: Vec<i32>) -> Self {
        OutcomeTable {
            lambda_count: a_x.len(),
            alice: [a_x, a_x_prime],
            bob: [b_y, b_y_prime],
        }
    }

    /// Builds a table from rows `(A(x), A(x'), B(y), B(y'))`, one per λ.
    pub fn from_rows(rows: &[[i32; 4]]) -> Self {
        let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
        OutcomeTable::new(col(0), col(1), col(2), col(3))
    }

    pub fn lambda_count(&self) -> usize {
        self.lambda_count
    }

    pub fn alice(&self, variant: Variant) -> &[i32] {
        &self.alice[variant.index()]
    }

    pub fn bob(&self, variant: Variant) -> &[i32] {
        &self.bob[variant.index()]
    }

    pub fn get(&self, setting: SettingLabel, lambda: usize) -> i32 {
        match setting.party {
            Party::Alice => self.alice[setting.variant.index()][lambda],
            Party::Bob => self.bob[setting.variant.index()][lambda],
        }
    }

    /// `A(u, λ) · B(v, λ)`.
    pub fn product(&self, js: JointSetting, lambda: usize) -> i32 {
        self.alice[js.alice.index()][lambda] * self.bob[js.bob.index()][lambda]
    }

    /// Row `(A(x), A(x'), B(y), B(y'))` for one λ.
    pub fn row(&self, lambda: usize) -> [i32; 4] {
        [
            self.alice[0][lambda],
            self.alice[1][lambda],
            self.bob[0][lambda],
            self.bob[1][lambda],
        ]
    }
}

/// Conditional probabilities `p(λ|u,v)`, one column per joint setting.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalTable<T> {
    pub(crate) columns: [Vec<T>; 4],
}

impl<T: Scalar> ConditionalTable<T> {
    /// Columns in [`JointSetting::ALL`] order.
    pub fn new(columns: [Vec<T>; 4]) -> Self {
        ConditionalTable { columns }
    }

    /// Builds the table from rows `(p(λ|x,y), p(λ|x,y'), p(λ|x',y), p(λ|x',y'))`.
    pub fn from_rows(rows: Vec<[T; 4]>) -> Self {
        let mut columns: [Vec<T>; 4] = Default::default();
        for row in rows {
            for (col, value) in columns.iter_mut().zip(row) {
                col.push(value);
            }
        }
        ConditionalTable { columns }
    }

    pub fn column(&self, js: JointSetting) -> &[T] {
        &self.columns[js.index()]
    }

    pub fn get(&self, js: JointSetting, lambda: usize) -> &T {
        &self.columns[js.index()][lambda]
    }

    pub fn lambda_count(&self) -> usize {
        self.columns[0].len()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ConditionalTable<U> {
        ConditionalTable {
            columns: std::array::from_fn(|j| self.columns[j].iter().map(&f).collect()),
        }
    }
}

/// Distribution `p(u,v)` of the joint settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SettingsDistribution<T> {
    pub(crate) q: [T; 4],
}

impl<T: Scalar> SettingsDistribution<T> {
    pub fn new(q: [T; 4]) -> Self {
        SettingsDistribution { q }
    }

    pub fn uniform() -> Self {
        SettingsDistribution {
            q: std::array::from_fn(|_| T::from_ratio(1, 4)),
        }
    }

    pub fn get(&self, js: JointSetting) -> &T {
        &self.q[js.index()]
    }

    pub fn is_uniform(&self) -> bool {
        self.q.iter().all(|q| *q == T::from_ratio(1, 4))
    }
}

impl<T: Scalar> Default for SettingsDistribution<T> {
    fn default() -> Self {
        Self::uniform()
    }
}

/// A finite deterministic locally causal hidden-variable model.
#[derive(Clone, Debug, PartialEq)]
pub struct HiddenVariableModel<T> {
    pub(crate) outcomes: OutcomeTable,
    pub(crate) cond: ConditionalTable<T>,
    pub(crate) settings: SettingsDistribution<T>,
    pub(crate) label: String,
}

impl<T: Scalar> HiddenVariableModel<T> {
    /// Assembles a model. No checks are made here; see [`validate_model`].
    pub fn new(
        outcomes: OutcomeTable,
        cond: ConditionalTable<T>,
        settings: SettingsDistribution<T>,
        label: impl Into<String>,
    ) -> Self {
        HiddenVariableModel {
            outcomes,
            cond,
            settings,
            label: label.into(),
        }
    }

    pub fn outcomes(&self) -> &OutcomeTable {
        &self.outcomes
    }

    pub fn cond(&self) -> &ConditionalTable<T> {
        &self.cond
    }

    pub fn settings(&self) -> &SettingsDistribution<T> {
        &self.settings
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lambda_count(&self) -> usize {
        self.outcomes.lambda_count
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_settings(mut self, settings: SettingsDistribution<T>) -> Self {
        self.settings = settings;
        self
    }

    /// Same outcome and conditional-probability tables (labels and
    /// settings distributions are ignored).
    pub fn same_tables(&self, other: &Self) -> bool {
        self.outcomes == other.outcomes && self.cond == other.cond
    }

    pub fn to_float(&self) -> HiddenVariableModel<f64> {
        HiddenVariableModel {
            outcomes: self.outcomes.clone(),
            cond: self.cond.map(|p| p.to_f64()),
            settings: SettingsDistribution::new(std::array::from_fn(|j| self.settings.q[j].to_f64())),
            label: self.label.clone(),
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = validate_model(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidModel(report))
        }
    }
}

impl HiddenVariableModel<Rational> {
    pub fn into_any(self) -> AnyModel {
        AnyModel::Exact(self)
    }
}

impl HiddenVariableModel<f64> {
    pub fn into_any(self) -> AnyModel {
        AnyModel::Float(self)
    }
}

/// One broken model invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    EmptyModel,
    DimensionMismatch {
        table: String,
        expected: usize,
        found: usize,
    },
    NonSignOutcome {
        setting: String,
        lambda: usize,
        value: i32,
    },
    NegativeProbability {
        setting: String,
        lambda: usize,
        value: f64,
    },
    ProbabilityAboveOne {
        setting: String,
        lambda: usize,
        value: f64,
    },
    ColumnNotNormalized {
        setting: String,
        sum: f64,
    },
    NegativeSettingProbability {
        setting: String,
        value: f64,
    },
    SettingsNotNormalized {
        sum: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyModel => write!(f, "lambda_count must be positive"),
            Violation::DimensionMismatch {
                table,
                expected,
                found,
            } => write!(f, "{table} has {found} entries, expected {expected}"),
            Violation::NonSignOutcome {
                setting,
                lambda,
                value,
            } => write!(f, "outcome for {setting} at lambda {lambda} is {value}, not +1/-1"),
            Violation::NegativeProbability {
                setting,
                lambda,
                value,
            } => write!(f, "p(lambda_{lambda}|{setting}) = {value} is negative"),
            Violation::ProbabilityAboveOne {
                setting,
                lambda,
                value,
            } => write!(f, "p(lambda_{lambda}|{setting}) = {value} exceeds 1"),
            Violation::ColumnNotNormalized { setting, sum } => {
                write!(f, "column {setting} sums to {sum}")
            }
            Violation::NegativeSettingProbability { setting, value } => {
                write!(f, "p({setting}) = {value} is negative")
            }
            Violation::SettingsNotNormalized { sum } => {
                write!(f, "settings distribution sums to {sum}")
            }
        }
    }
}

/// Result of [`validate_model`]: empty iff the model is valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural and probabilistic invariant of a model.
pub fn validate_model<T: Scalar>(model: &HiddenVariableModel<T>) -> ValidationReport {
    let mut violations = Vec::new();
    let n = model.outcomes.lambda_count;
    if n == 0 {
        violations.push(Violation::EmptyModel);
    }

    let outcome_tables = [
        (SettingLabel::X, &model.outcomes.alice[0]),
        (SettingLabel::X_PRIME, &model.outcomes.alice[1]),
        (SettingLabel::Y, &model.outcomes.bob[0]),
        (SettingLabel::Y_PRIME, &model.outcomes.bob[1]),
    ];
    for (setting, values) in outcome_tables {
        if values.len() != n {
            violations.push(Violation::DimensionMismatch {
                table: format!("outcomes {setting}"),
                expected: n,
                found: values.len(),
            });
        }
        for (lambda, &value) in values.iter().enumerate() {
            if value != 1 && value != -1 {
                violations.push(Violation::NonSignOutcome {
                    setting: setting.name().to_string(),
                    lambda,
                    value,
                });
            }
        }
    }

    let zero = T::zero();
    let one = T::one();
    let guard = T::negativity_guard();
    let sum_tol = T::sum_tolerance();
    for js in JointSetting::ALL {
        let column = model.cond.column(js);
        if column.len() != n {
            violations.push(Violation::DimensionMismatch {
                table: format!("cond_probs {js}"),
                expected: n,
                found: column.len(),
            });
        }
        for (lambda, p) in column.iter().enumerate() {
            if *p < zero.clone() - guard.clone() {
                violations.push(Violation::NegativeProbability {
                    setting: js.label().to_string(),
                    lambda,
                    value: p.to_f64(),
                });
            }
            if *p > one.clone() + sum_tol.clone() {
                violations.push(Violation::ProbabilityAboveOne {
                    setting: js.label().to_string(),
                    lambda,
                    value: p.to_f64(),
                });
            }
        }
        let sum = column.iter().fold(T::zero(), |acc, p| acc + p.clone());
        if (sum.clone() - one.clone()).abs() > sum_tol {
            violations.push(Violation::ColumnNotNormalized {
                setting: js.label().to_string(),
                sum: sum.to_f64(),
            });
        }
    }

    let mut total = T::zero();
    for js in JointSetting::ALL {
        let q = model.settings.get(js);
        if *q < zero.clone() - guard.clone() {
            violations.push(Violation::NegativeSettingProbability {
                setting: js.label().to_string(),
                value: q.to_f64(),
            });
        }
        total = total + q.clone();
    }
    if (total.clone() - one).abs() > sum_tol {
        violations.push(Violation::SettingsNotNormalized {
            sum: total.to_f64(),
        });
    }

    ValidationReport { violations }
}

/// Marginal `p(λ) = Σ_{u,v} p(u,v) p(λ|u,v)`.
pub fn marginal_lambda<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<Vec<T>> {
    model.ensure_valid()?;
    let n = model.lambda_count();
    let mut marginal = vec![T::zero(); n];
    for js in JointSetting::ALL {
        let q = model.settings.get(js);
        for (m, p) in marginal.iter_mut().zip(model.cond.column(js)) {
            *m = m.clone() + q.clone() * p.clone();
        }
    }
    Ok(marginal)
}

/// Exchanges the roles of Alice and Bob (`x↔y`, `x'↔y'`, `A↔B`).
///
/// The result has `M1` and `M2` (and their minimum counterparts) exchanged
/// and the same CHSH value.
pub fn swap_parties<T: Scalar>(model: &HiddenVariableModel<T>) -> HiddenVariableModel<T> {
    let outcomes = OutcomeTable {
        lambda_count: model.outcomes.lambda_count,
        alice: model.outcomes.bob.clone(),
        bob: model.outcomes.alice.clone(),
    };
    let columns = std::array::from_fn(|j| {
        let js = JointSetting::from_index(j).swapped();
        model.cond.columns[js.index()].clone()
    });
    let q = std::array::from_fn(|j| {
        let js = JointSetting::from_index(j).swapped();
        model.settings.q[js.index()].clone()
    });
    HiddenVariableModel {
        outcomes,
        cond: ConditionalTable { columns },
        settings: SettingsDistribution { q },
        label: model.label.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn independent_model() -> HiddenVariableModel<Rational> {
        let column = vec![r(1, 2), r(1, 3), r(1, 6)];
        HiddenVariableModel::new(
            OutcomeTable::from_rows(&[[1, 1, 1, 1], [1, -1, 1, -1], [-1, -1, 1, 1]]),
            ConditionalTable::new(std::array::from_fn(|_| column.clone())),
            SettingsDistribution::uniform(),
            "independent",
        )
    }

    #[test]
    fn joint_setting_indexing() {
        for (i, js) in JointSetting::ALL.iter().enumerate() {
            assert_eq!(js.index(), i);
            assert_eq!(js.swapped().swapped(), *js);
        }
        assert_eq!(JointSetting::XY_PRIME.swapped(), JointSetting::X_PRIME_Y);
        assert_eq!(JointSetting::X_PRIME_Y_PRIME.label(), "x',y'");
    }

    #[test]
    fn valid_model_has_empty_report() {
        assert!(validate_model(&independent_model()).is_valid());
    }

    #[test]
    fn unnormalized_column_is_named() {
        let mut m = independent_model();
        m.cond.columns[JointSetting::X_PRIME_Y.index()] = vec![r(1, 2), r(3, 10), r(1, 10)];
        let report = validate_model(&m);
        assert_eq!(
            report.violations,
            vec![Violation::ColumnNotNormalized {
                setting: "x',y".into(),
                sum: 0.9
            }]
        );
    }

    #[test]
    fn non_sign_outcome_is_flagged() {
        let mut m = independent_model();
        m.outcomes.alice[0][0] = 0;
        let report = validate_model(&m);
        assert_eq!(
            report.violations,
            vec![Violation::NonSignOutcome {
                setting: "x".into(),
                lambda: 0,
                value: 0
            }]
        );
    }

    #[test]
    fn negative_entries_and_dimension_mismatch() {
        let mut m = independent_model();
        m.cond.columns[0] = vec![r(3, 2), r(-1, 2)];
        let report = validate_model(&m);
        assert!(report.violations.contains(&Violation::DimensionMismatch {
            table: "cond_probs x,y".into(),
            expected: 3,
            found: 2
        }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NegativeProbability { lambda: 1, .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ProbabilityAboveOne { lambda: 0, .. })));
    }

    #[test]
    fn float_rounding_guard() {
        let m = independent_model().to_float();
        let mut shifted = m.clone();
        shifted.cond.columns[0] = vec![0.5 + 1e-16, 0.5, -1e-16];
        assert!(validate_model(&shifted).is_valid());
        shifted.cond.columns[0] = vec![0.5 + 1e-9, 0.5, -1e-9];
        assert!(!validate_model(&shifted).is_valid());
    }

    #[test]
    fn settings_must_be_a_distribution() {
        let m = independent_model().with_settings(SettingsDistribution::new([r(1, 2), r(1, 2), r(1, 2), r(-1, 4)]));
        let report = validate_model(&m);
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn marginal_of_independent_model_is_its_column() {
        let m = independent_model();
        assert_eq!(marginal_lambda(&m).unwrap(), vec![r(1, 2), r(1, 3), r(1, 6)]);
    }

    #[test]
    fn marginal_rejects_invalid_model() {
        let mut m = independent_model();
        m.outcomes.bob[1][2] = 2;
        assert!(matches!(marginal_lambda(&m), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn marginal_respects_nonuniform_settings() {
        let m = HiddenVariableModel::new(
            OutcomeTable::from_rows(&[[1, 1, 1, 1], [1, 1, 1, 1]]),
            ConditionalTable::new([
                vec![r(1, 1), r(0, 1)],
                vec![r(0, 1), r(1, 1)],
                vec![r(1, 1), r(0, 1)],
                vec![r(0, 1), r(1, 1)],
            ]),
            SettingsDistribution::new([r(1, 2), r(1, 6), r(1, 6), r(1, 6)]),
            "",
        );
        assert_eq!(marginal_lambda(&m).unwrap(), vec![r(2, 3), r(1, 3)]);
    }

    #[test]
    fn swap_is_an_involution() {
        let mut m = independent_model();
        m.cond.columns[1] = vec![r(1, 1), r(0, 1), r(0, 1)];
        m.settings = SettingsDistribution::new([r(1, 10), r(2, 10), r(3, 10), r(4, 10)]);
        let s = swap_parties(&m);
        assert_ne!(s, m);
        assert_eq!(s.cond.column(JointSetting::X_PRIME_Y), m.cond.column(JointSetting::XY_PRIME));
        assert_eq!(s.settings.get(JointSetting::X_PRIME_Y), &r(2, 10));
        assert_eq!(s.outcomes.alice(Variant::Primed), m.outcomes.bob(Variant::Primed));
        assert_eq!(swap_parties(&s), m);
    }
}
