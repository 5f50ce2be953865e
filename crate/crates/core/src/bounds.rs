//! Relaxed CHSH bounds under measurement dependence, and the constraints a
//! parameter tuple `(M1, M2, M̂1, M̂2)` must satisfy to be realizable.
//!
//! Arguments are rejected, never clamped, when they fall outside `[0, 2]`.

use std::fmt;

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::measures::DependenceReport;
use crate::scalar::{le_tol, max_of, min_of, Scalar};

fn check_unit<T: Scalar>(name: &'static str, value: &T) -> Result<()> {
    check_range(name, value, &T::zero(), &T::from_int(2))
}

/// Largest CHSH violation `min{M1 + M2 + min{M1, M2}, 2}` allowed by the
/// two one-sided measures.
pub fn v_g<T: Scalar>(m1: &T, m2: &T) -> Result<T> {
    check_unit("M1", m1)?;
    check_unit("M2", m2)?;
    let raw = m1.clone() + m2.clone() + min_of(m1, m2);
    Ok(min_of(&raw, &T::from_int(2)))
}

/// `2 + v_g(M1, M2)`.
pub fn bound_two_param<T: Scalar>(m1: &T, m2: &T) -> Result<T> {
    Ok(T::from_int(2) + v_g(m1, m2)?)
}

/// Bound in terms of the overall measure `M` alone: `2 + min{3M, 2}`.
pub fn bound_hall<T: Scalar>(m: &T) -> Result<T> {
    check_unit("M", m)?;
    let three_m = T::from_int(3) * m.clone();
    Ok(T::from_int(2) + min_of(&three_m, &T::from_int(2)))
}

/// Bound when only one observer's freedom is reduced: `2 + M1`.
pub fn bound_banik<T: Scalar>(m1: &T) -> Result<T> {
    check_unit("M1", m1)?;
    Ok(T::from_int(2) + m1.clone())
}

/// Requested measurement-dependence parameters. Missing `M̂` values stand
/// for `M̂i = Mi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelParams<T> {
    pub m1: T,
    pub m2: T,
    pub mhat1: Option<T>,
    pub mhat2: Option<T>,
}

impl<T: Scalar> ModelParams<T> {
    pub fn two(m1: T, m2: T) -> Self {
        ModelParams {
            m1,
            m2,
            mhat1: None,
            mhat2: None,
        }
    }

    pub fn four(m1: T, m2: T, mhat1: T, mhat2: T) -> Self {
        ModelParams {
            m1,
            m2,
            mhat1: Some(mhat1),
            mhat2: Some(mhat2),
        }
    }

    /// Effective `M̂1`.
    pub fn mhat1(&self) -> &T {
        self.mhat1.as_ref().unwrap_or(&self.m1)
    }

    /// Effective `M̂2`.
    pub fn mhat2(&self) -> &T {
        self.mhat2.as_ref().unwrap_or(&self.m2)
    }

    /// `true` when both `M̂` values equal their `M` counterparts.
    pub fn is_two_param(&self) -> bool {
        self.mhat1() == &self.m1 && self.mhat2() == &self.m2
    }

    /// Exchanges the roles of the two observers.
    pub fn swapped(&self) -> Self {
        ModelParams::four(
            self.m2.clone(),
            self.m1.clone(),
            self.mhat2().clone(),
            self.mhat1().clone(),
        )
    }

    pub fn to_f64(&self) -> ModelParams<f64> {
        ModelParams {
            m1: self.m1.to_f64(),
            m2: self.m2.to_f64(),
            mhat1: self.mhat1.as_ref().map(Scalar::to_f64),
            mhat2: self.mhat2.as_ref().map(Scalar::to_f64),
        }
    }
}

/// One broken feasibility constraint, with the numbers that broke it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum ConstraintViolation {
    /// A parameter lies outside `[0, 2]`.
    Range { name: &'static str, value: f64 },
    /// `M̂i > Mi`.
    HatExceedsFull { party: u8, mhat: f64, m: f64 },
    /// `Mi − M̂i > Mj + M̂j`.
    Triangle { party: u8, lhs: f64, rhs: f64 },
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintViolation::Range { name, value } => {
                write!(f, "{name} = {value} must lie in [0, 2]")
            }
            ConstraintViolation::HatExceedsFull { party, mhat, m } => {
                write!(f, "M̂{party} ≤ M{party} violated ({mhat} > {m})")
            }
            ConstraintViolation::Triangle { party, lhs, rhs } => {
                let other = 3 - party;
                write!(
                    f,
                    "M{party} − M̂{party} ≤ M{other} + M̂{other} violated ({lhs} > {rhs})"
                )
            }
        }
    }
}

/// Feasibility verdict for a [`ModelParams`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Feasibility {
    pub violations: Vec<ConstraintViolation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts an infeasible verdict into an error.
    pub fn into_result(self) -> Result<()> {
        if self.is_feasible() {
            Ok(())
        } else {
            Err(Error::Infeasible(self))
        }
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("feasible");
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

/// Checks `0 ≤ M̂i ≤ Mi ≤ 2` and the two triangle relations
/// `M1 − M̂1 ≤ M2 + M̂2`, `M2 − M̂2 ≤ M1 + M̂1`.
pub fn check_param_feasible<T: Scalar>(params: &ModelParams<T>) -> Feasibility {
    let mut violations = Vec::new();
    let named = [
        ("M1", &params.m1),
        ("M2", &params.m2),
        ("M̂1", params.mhat1()),
        ("M̂2", params.mhat2()),
    ];
    let (zero, two) = (T::zero(), T::from_int(2));
    for (name, value) in named {
        if !(le_tol(&zero, value) && le_tol(value, &two)) {
            violations.push(ConstraintViolation::Range {
                name,
                value: value.to_f64(),
            });
        }
    }
    let pairs = [
        (1u8, &params.m1, params.mhat1(), &params.m2, params.mhat2()),
        (2u8, &params.m2, params.mhat2(), &params.m1, params.mhat1()),
    ];
    for (party, m, mhat, _, _) in pairs {
        if !le_tol(mhat, m) {
            violations.push(ConstraintViolation::HatExceedsFull {
                party,
                mhat: mhat.to_f64(),
                m: m.to_f64(),
            });
        }
    }
    for (party, m, mhat, m_other, mhat_other) in pairs {
        let lhs = m.clone() - mhat.clone();
        let rhs = m_other.clone() + mhat_other.clone();
        if !le_tol(&lhs, &rhs) {
            violations.push(ConstraintViolation::Triangle {
                party,
                lhs: lhs.to_f64(),
                rhs: rhs.to_f64(),
            });
        }
    }
    Feasibility { violations }
}

/// `2 + min{M̂1 + M̂2 + min{M1, M2}, 2}` for feasible parameters.
pub fn bound_four_param<T: Scalar>(params: &ModelParams<T>) -> Result<T> {
    check_param_feasible(params).into_result()?;
    let raw = params.mhat1().clone() + params.mhat2().clone() + min_of(&params.m1, &params.m2);
    Ok(T::from_int(2) + min_of(&raw, &T::from_int(2)))
}

/// `max{M1, M2} ≤ M ≤ min{M1 + M2, 2}`.
pub fn check_inequality_chain<T: Scalar>(report: &DependenceReport<T>) -> bool {
    let lower = max_of(&report.m1, &report.m2);
    let upper = min_of(&(report.m1.clone() + report.m2.clone()), &T::from_int(2));
    le_tol(&lower, &report.m) && le_tol(&report.m, &upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    const V_T: f64 = 2.0 * (std::f64::consts::SQRT_2 - 1.0);

    #[test]
    fn v_g_examples() {
        assert_abs_diff_eq!(v_g(&(V_T / 3.0), &(V_T / 3.0)).unwrap(), V_T, epsilon = 1e-15);
        assert_abs_diff_eq!(v_g(&V_T, &0.0).unwrap(), V_T);
        assert_eq!(v_g(&0.0, &0.0).unwrap(), 0.0);
        assert!(v_g(&2.1, &0.0).is_err());
        assert!(v_g(&0.0, &-0.01).is_err());
    }

    #[test]
    fn two_param_examples() {
        assert_eq!(bound_two_param(&r(2, 1), &r(2, 1)).unwrap(), r(4, 1));
        assert_eq!(bound_two_param(&r(1, 1), &r(1, 2)).unwrap(), r(4, 1));
        assert_eq!(bound_two_param(&r(1, 2), &r(1, 5)).unwrap(), r(29, 10));
        let t = V_T / 3.0;
        assert_abs_diff_eq!(bound_two_param(&t, &t).unwrap(), 2.0 * std::f64::consts::SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn hall_and_banik_examples() {
        let tsirelson = 2.0 * std::f64::consts::SQRT_2;
        assert_abs_diff_eq!(bound_hall(&(V_T / 3.0)).unwrap(), tsirelson, epsilon = 1e-15);
        assert_abs_diff_eq!(bound_banik(&V_T).unwrap(), tsirelson, epsilon = 1e-15);
        assert_eq!(bound_hall(&r(2, 1)).unwrap(), r(4, 1));
        assert!(bound_banik(&r(3, 1)).is_err());
    }

    #[test]
    fn four_param_examples() {
        let p = ModelParams::four(r(1, 1), r(1, 1), r(1, 5), r(1, 5));
        assert_eq!(bound_four_param(&p).unwrap(), r(17, 5));
        let p = ModelParams::four(r(1, 2), r(1, 5), r(1, 2), r(1, 5));
        assert_eq!(bound_four_param(&p).unwrap(), r(29, 10));
        for z in [0.0, 0.05, 0.1, V_T / 6.0, V_T / 3.0] {
            let big = V_T / 3.0 + 2.0 * z;
            let small = V_T / 3.0 - z;
            let p = ModelParams::four(big, big, small, small);
            assert_abs_diff_eq!(bound_four_param(&p).unwrap(), 2.0 + V_T, epsilon = 1e-14);
        }
        let bad = ModelParams::four(r(2, 1), r(0, 1), r(0, 1), r(0, 1));
        assert!(matches!(bound_four_param(&bad), Err(Error::Infeasible(_))));
    }

    #[test]
    fn feasibility_examples() {
        let verdict = check_param_feasible(&ModelParams::four(r(2, 1), r(0, 1), r(0, 1), r(0, 1)));
        assert_eq!(
            verdict.violations,
            vec![ConstraintViolation::Triangle {
                party: 1,
                lhs: 2.0,
                rhs: 0.0
            }]
        );
        assert!(verdict.to_string().contains("M1 − M̂1 ≤ M2 + M̂2"));

        assert!(check_param_feasible(&ModelParams::four(r(1, 1), r(1, 1), r(1, 1), r(1, 1))).is_feasible());

        let verdict = check_param_feasible(&ModelParams::four(0.5, 0.2, 0.6, 0.2));
        assert_eq!(
            verdict.violations,
            vec![ConstraintViolation::HatExceedsFull {
                party: 1,
                mhat: 0.6,
                m: 0.5
            }]
        );

        let verdict = check_param_feasible(&ModelParams::two(2.5, 0.0));
        assert!(matches!(verdict.violations[0], ConstraintViolation::Range { name: "M1", .. }));
    }

    #[test]
    fn chain_examples() {
        assert!(check_inequality_chain(&DependenceReport::synthetic(1.0, 1.0, 2.0)));
        assert!(!check_inequality_chain(&DependenceReport::synthetic(1.0, 0.0, 0.5)));
        assert!(!check_inequality_chain(&DependenceReport::synthetic(r(1, 2), r(1, 5), r(4, 5))));
        assert!(check_inequality_chain(&DependenceReport::synthetic(r(1, 2), r(1, 5), r(1, 2))));
    }

    #[test]
    fn reductions_on_grid() {
        for k in 0..=10 {
            let m = r(k, 5);
            assert_eq!(bound_two_param(&m, &m).unwrap(), bound_hall(&m).unwrap());
            assert_eq!(bound_two_param(&m, &r(0, 1)).unwrap(), bound_banik(&m).unwrap());
        }
    }

    fn unit() -> impl Strategy<Value = f64> {
        0.0..=2.0f64
    }

    proptest! {
        #[test]
        fn v_g_symmetric_and_monotone(a in unit(), b in unit(), da in 0.0..0.5f64) {
            prop_assert_eq!(v_g(&a, &b).unwrap(), v_g(&b, &a).unwrap());
            let a2 = (a + da).min(2.0);
            prop_assert!(v_g(&a2, &b).unwrap() >= v_g(&a, &b).unwrap());
            prop_assert!(v_g(&b, &a2).unwrap() >= v_g(&b, &a).unwrap());
        }

        #[test]
        fn bounds_in_range(a in unit(), b in unit()) {
            for s in [bound_two_param(&a, &b).unwrap(), bound_hall(&a).unwrap(), bound_banik(&a).unwrap()] {
                prop_assert!((2.0..=4.0).contains(&s));
            }
        }

        #[test]
        fn hall_banik_reductions(m in unit()) {
            prop_assert_eq!(bound_two_param(&m, &m).unwrap(), bound_hall(&m).unwrap());
            prop_assert_eq!(bound_two_param(&m, &0.0).unwrap(), bound_banik(&m).unwrap());
        }

        #[test]
        fn four_param_below_two_param(
            m1 in unit(), m2 in unit(), f1 in 0.0..=1.0f64, f2 in 0.0..=1.0f64,
        ) {
            let p = ModelParams::four(m1, m2, m1 * f1, m2 * f2);
            if check_param_feasible(&p).is_feasible() {
                let four = bound_four_param(&p).unwrap();
                prop_assert!(four <= bound_two_param(&m1, &m2).unwrap());
                prop_assert!((2.0..=4.0).contains(&four));
            }
            let full = ModelParams::two(m1, m2);
            prop_assert_eq!(bound_four_param(&full).unwrap(), bound_two_param(&m1, &m2).unwrap());
        }
    }
}
