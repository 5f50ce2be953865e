//! Mutual information between the hidden variable and the joint setting.
//!
//! [`mutual_information`] computes
//! `I = Σ q(u,v) p(λ|u,v) log₂[p(λ|u,v) / p(λ)]` directly from any model.
//! The remaining functions are closed forms for specific model families
//! (uniform settings), each paired with a direct-computation counterpart so
//! the two can be checked against each other.

use serde::Serialize;

use crate::bounds::ModelParams;
use crate::constructors::{banik_model, four_param_model, interp_model, two_param_model};
use crate::error::{check_range, Error, Result};
use crate::model::{marginal_lambda, HiddenVariableModel, JointSetting};
use crate::scalar::Scalar;
use crate::search::scan_then_refine;

/// Tsirelson violation `2(√2 − 1)`.
pub const V_T: f64 = 2.0 * (std::f64::consts::SQRT_2 - 1.0);

/// Grid size and tolerance of the minimizations.
pub const SCAN_POINTS: usize = 200;
pub const SEARCH_TOL: f64 = 1e-10;

const REGION_TOL: f64 = 1e-12;

/// One point of an information curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfoCurvePoint {
    pub v: f64,
    pub i: f64,
    /// `M2` at the minimum, for minimized curves.
    pub argmin_m2: Option<f64>,
}

impl InfoCurvePoint {
    /// `M1 = V − 2M2` at the minimum.
    pub fn argmin_m1(&self) -> Option<f64> {
        self.argmin_m2.map(|m2| self.v - 2.0 * m2)
    }
}

/// `h(x) = x log₂ x`, with `h(0) = 0`.
pub fn entropy_term(x: f64) -> Result<f64> {
    check_range("x", &x, &0.0, &f64::INFINITY)?;
    Ok(h(x))
}

/// `h` for arguments known to be nonnegative up to rounding.
fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Mutual information in bits, using the model's settings distribution.
pub fn mutual_information<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<f64> {
    let marginal: Vec<f64> = marginal_lambda(model)?.iter().map(Scalar::to_f64).collect();
    let mut total = 0.0;
    for js in JointSetting::ALL {
        let q = model.settings().get(js).to_f64();
        for (p, p_lambda) in model.cond().column(js).iter().zip(&marginal) {
            let p = p.to_f64();
            if p > 0.0 && q > 0.0 {
                total += q * p * (p / p_lambda).log2();
            }
        }
    }
    Ok(total.max(0.0))
}

fn check_v(v: f64) -> Result<()> {
    check_range("V", &v, &0.0, &2.0)
}

/// Region `0 ≤ M2 ≤ M1`, `M1 + 2M2 ≤ 2` where the two-parameter and
/// interpolating models have `S < 4` (up to the boundary).
fn check_low_region(m1: f64, m2: f64) -> Result<()> {
    check_range("M1", &m1, &0.0, &2.0)?;
    check_range("M2", &m2, &0.0, &2.0)?;
    if m2 > m1 + REGION_TOL {
        return Err(Error::Region(format!("requires M1 ≥ M2, got M1 = {m1}, M2 = {m2}")));
    }
    if m1 + 2.0 * m2 > 2.0 + REGION_TOL {
        return Err(Error::Region(format!(
            "requires M1 + 2M2 ≤ 2, got M1 + 2M2 = {}",
            m1 + 2.0 * m2
        )));
    }
    Ok(())
}

fn check_slice(v: f64, m2: f64) -> Result<()> {
    check_v(v)?;
    check_range("M2", &m2, &0.0, &(v / 3.0))
}

/// Two-parameter model: `¼{2h(1 + M1/2) + h(1 − M1/2 + M2) + h(1 − M1/2 − M2)}`.
pub fn i_g(m1: f64, m2: f64) -> Result<f64> {
    check_low_region(m1, m2)?;
    let a = 1.0 - m1 / 2.0;
    Ok((2.0 * h(1.0 + m1 / 2.0) + h(a + m2) + h(a - m2)) / 4.0)
}

/// [`i_g`] along the line `M1 = V − 2M2`, for `M2 ∈ [0, V/3]`.
pub fn i_g_slice(v: f64, m2: f64) -> Result<f64> {
    check_slice(v, m2)?;
    i_g(v - 2.0 * m2, m2)
}

/// Minimum of [`i_g_slice`] over `M2`: `¼{3h(1 + V/6) + h(1 − V/2)}`, reached
/// at `M1 = M2 = V/3`.
pub fn i_g_min(v: f64) -> Result<InfoCurvePoint> {
    check_v(v)?;
    let i = (3.0 * h(1.0 + v / 6.0) + h(1.0 - v / 2.0)) / 4.0;
    Ok(InfoCurvePoint {
        v,
        i,
        argmin_m2: Some(v / 3.0),
    })
}

/// Numerical minimization of [`i_g_slice`], for checking [`i_g_min`].
pub fn i_g_min_numeric(v: f64) -> Result<InfoCurvePoint> {
    check_v(v)?;
    let f = |m2: f64| i_g_slice(v, m2.clamp(0.0, v / 3.0)).expect("M2 within slice");
    let min = scan_then_refine(f, 0.0, v / 3.0, SCAN_POINTS, SEARCH_TOL);
    Ok(InfoCurvePoint {
        v,
        i: min.value,
        argmin_m2: Some(min.x),
    })
}

/// Two-parameter model information computed from the model itself.
pub fn i_g_direct(m1: f64, m2: f64) -> Result<f64> {
    check_low_region(m1, m2)?;
    mutual_information(&two_param_model(&m1, &m2)?)
}

/// Symmetric model: `(V/2) log₂(4/3)`.
pub fn i_hall(v: f64) -> Result<f64> {
    check_v(v)?;
    Ok(v / 2.0 * (4.0f64 / 3.0).log2())
}

/// One-sided model, computed directly from `banik_model(V/2)`.
pub fn i_banik(v: f64) -> Result<f64> {
    check_v(v)?;
    mutual_information(&banik_model(&(v / 2.0))?)
}

/// Closed form `¼{6 + h(2 − V) − h(4 − V)}` for [`i_banik`].
///
/// Verification status: agrees with the direct computation to 1e-12 over
/// `V ∈ [0, 2]`. A variant with coefficient 2 on `h(2 − V)` is sometimes
/// quoted; it gives 0.3135 at `V_T` instead of the correct 0.2466.
pub fn i_banik_closed_form(v: f64) -> Result<f64> {
    check_v(v)?;
    Ok((6.0 + h(2.0 - v) - h(4.0 - v)) / 4.0)
}

/// Interpolating model in its low-violation region (closed form).
pub fn i_interp(m1: f64, m2: f64) -> Result<f64> {
    check_low_region(m1, m2)?;
    let sum = 2.0 * h((2.0 - 3.0 * m2) / 2.0) + 2.0 * h((2.0 - m1 - 2.0 * m2) / 2.0)
        - 4.0 * h((2.0 * m1 + m2) / 8.0)
        - 4.0 * h((4.0 - m1 - 5.0 * m2) / 4.0)
        + 2.0 * h(m1 / 2.0)
        + h(m2 / 2.0)
        + 4.5 * m2 * (4.0f64 / 3.0).log2();
    Ok(sum / 4.0)
}

/// Interpolating model information computed from the model itself.
pub fn i_interp_direct(m1: f64, m2: f64) -> Result<f64> {
    check_low_region(m1, m2)?;
    mutual_information(&interp_model(&m1, &m2)?)
}

/// Closed form of the interpolating model along `M1 = V − 2M2`.
pub fn i_interp_slice_closed_form(v: f64, m2: f64) -> Result<f64> {
    check_slice(v, m2)?;
    let sum = 2.0 * h((v - 2.0 * m2) / 2.0) + h(m2 / 2.0) + 4.5 * m2 * (4.0f64 / 3.0).log2()
        - 4.0 * h((2.0 * v - 3.0 * m2) / 8.0)
        - 4.0 * h((4.0 - v - 3.0 * m2) / 4.0)
        + 2.0 * h((2.0 - 3.0 * m2) / 2.0)
        + 2.0 * h((2.0 - v) / 2.0);
    Ok(sum / 4.0)
}

/// Interpolating model along `M1 = V − 2M2`, computed directly.
pub fn i_interp_slice(v: f64, m2: f64) -> Result<f64> {
    check_slice(v, m2)?;
    i_interp_direct(v - 2.0 * m2, m2)
}

/// Minimum over `M2 ∈ [0, V/3]` of [`i_interp_slice`], by a grid scan
/// refined with golden-section search.
pub fn i_interp_min(v: f64) -> Result<InfoCurvePoint> {
    check_v(v)?;
    let f = |m2: f64| i_interp_slice(v, m2.clamp(0.0, v / 3.0)).expect("M2 within slice");
    let min = scan_then_refine(f, 0.0, v / 3.0, SCAN_POINTS, SEARCH_TOL);
    Ok(InfoCurvePoint {
        v,
        i: min.value,
        argmin_m2: Some(min.x),
    })
}

fn check_z(z: f64) -> Result<()> {
    check_range("z", &z, &0.0, &(V_T / 3.0))
}

/// Parameters `M1 = M2 = V_T/3 + 2z`, `M̂1 = M̂2 = V_T/3 − z` of the
/// four-parameter family with `S = 2 + V_T`.
pub fn four_param_family(z: f64) -> ModelParams<f64> {
    let big = V_T / 3.0 + 2.0 * z;
    let small = (V_T / 3.0 - z).max(0.0);
    ModelParams::four(big, big, small, small)
}

/// Four-parameter family information (closed form).
pub fn i_four(z: f64) -> Result<f64> {
    check_z(z)?;
    let s2 = std::f64::consts::SQRT_2;
    Ok(1.0 + 1.5 * z + h((2.0 - s2) / 4.0) + 2.0 * h((2.0 + s2 - 6.0 * z) / 12.0)
        + h((2.0 + s2 + 12.0 * z) / 12.0)
        - 2.0 * h((2.0 - 3.0 * z) / 8.0)
        - h(1.0 + 3.0 * z) / 4.0)
}

/// Four-parameter family information computed from the model itself.
pub fn i_four_direct(z: f64) -> Result<f64> {
    check_z(z)?;
    mutual_information(&four_param_model(&four_param_family(z))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::hall_model;
    use crate::model::{ConditionalTable, OutcomeTable, SettingsDistribution};
    use crate::scalar::Rational;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_term_examples() {
        assert_eq!(entropy_term(0.0).unwrap(), 0.0);
        assert_eq!(entropy_term(1.0).unwrap(), 0.0);
        assert_eq!(entropy_term(2.0).unwrap(), 2.0);
        assert!(entropy_term(-0.5).is_err());
    }

    #[test]
    fn tsirelson_values() {
        let direct = mutual_information(&two_param_model(&(V_T / 3.0), &(V_T / 3.0)).unwrap()).unwrap();
        assert_abs_diff_eq!(direct, 0.0462738, epsilon = 1e-6);
        assert_abs_diff_eq!(i_g(V_T / 3.0, V_T / 3.0).unwrap(), 0.0462738, epsilon = 1e-6);
        assert_abs_diff_eq!(i_g_min(V_T).unwrap().i, 0.0462738, epsilon = 1e-6);
        assert_abs_diff_eq!(i_hall(V_T).unwrap(), 0.172, epsilon = 5e-4);
        assert_abs_diff_eq!(i_banik(V_T).unwrap(), 0.247, epsilon = 5e-4);
        assert_abs_diff_eq!(i_four(0.0).unwrap(), i_g_min(V_T).unwrap().i, epsilon = 1e-9);
        assert_abs_diff_eq!(i_four(V_T / 3.0).unwrap(), 0.1423, epsilon = 5e-4);
    }

    #[test]
    fn banik_coefficient_resolution() {
        let printed = |v: f64| (6.0 + 2.0 * h(2.0 - v) - h(4.0 - v)) / 4.0;
        assert_abs_diff_eq!(printed(V_T), 0.3135, epsilon = 1e-4);
        assert!((printed(V_T) - i_banik(V_T).unwrap()).abs() > 0.05);
        for k in 0..=40 {
            let v = k as f64 * 0.05;
            assert_abs_diff_eq!(i_banik_closed_form(v).unwrap(), i_banik(v).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn independent_model_has_zero_information() {
        let col = vec![Rational::from_ratio(1, 3), Rational::from_ratio(2, 3)];
        let m = HiddenVariableModel::new(
            OutcomeTable::from_rows(&[[1, 1, 1, 1], [-1, 1, -1, 1]]),
            ConditionalTable::new(std::array::from_fn(|_| col.clone())),
            SettingsDistribution::uniform(),
            "",
        );
        assert_eq!(mutual_information(&m).unwrap(), 0.0);
        assert_eq!(i_g(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(i_g_min(0.0).unwrap().i, 0.0);
        assert_eq!(i_hall(0.0).unwrap(), 0.0);
    }

    #[test]
    fn non_uniform_settings_are_respected() {
        // With all weight on one setting there is nothing to learn.
        let m = two_param_model(&0.5, &0.2)
            .unwrap()
            .with_settings(SettingsDistribution::new([1.0, 0.0, 0.0, 0.0]));
        assert_eq!(mutual_information(&m).unwrap(), 0.0);
    }

    #[test]
    fn region_errors() {
        assert!(matches!(i_g(0.2, 0.5), Err(Error::Region(_))));
        assert!(matches!(i_g(1.5, 0.5), Err(Error::Region(_))));
        assert!(matches!(i_interp(1.5, 0.5), Err(Error::Region(_))));
        assert!(i_hall(2.5).is_err());
        assert!(i_four(0.3).is_err());
        assert!(i_g_slice(1.0, 0.5).is_err());
    }

    #[test]
    fn i_g_min_matches_numeric_minimum() {
        for k in 0..=40 {
            let v = k as f64 * 0.05;
            let closed = i_g_min(v).unwrap();
            let numeric = i_g_min_numeric(v).unwrap();
            assert_abs_diff_eq!(closed.i, numeric.i, epsilon = 1e-9);
            if v > 0.1 {
                assert_abs_diff_eq!(numeric.argmin_m2.unwrap(), v / 3.0, epsilon = 1e-6);
            }
        }
        let at_two = i_g_min(2.0).unwrap().i;
        assert_abs_diff_eq!(at_two, 0.75 * h(4.0 / 3.0), epsilon = 1e-15);
    }

    #[test]
    fn interp_reductions() {
        for k in 0..=10 {
            let p = k as f64 / 30.0;
            assert_abs_diff_eq!(i_interp(2.0 * p, 2.0 * p).unwrap(), i_hall(6.0 * p).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(
                mutual_information(&hall_model(&p).unwrap()).unwrap(),
                i_hall(6.0 * p).unwrap(),
                epsilon = 1e-12
            );
        }
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            assert_abs_diff_eq!(i_interp(2.0 * p, 0.0).unwrap(), i_banik(2.0 * p).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn interp_minimum_at_tsirelson() {
        let point = i_interp_min(V_T).unwrap();
        assert_abs_diff_eq!(point.argmin_m2.unwrap(), 0.2063, epsilon = 5e-4);
        assert_abs_diff_eq!(point.argmin_m1().unwrap(), 0.4158, epsilon = 1e-3);
        assert_abs_diff_eq!(point.i, 0.1616, epsilon = 5e-4);
    }

    #[test]
    fn i_four_is_monotone() {
        let mut prev = i_four(0.0).unwrap();
        let n = 100;
        for k in 1..=n {
            let z = V_T / 3.0 * k as f64 / n as f64;
            let next = i_four(z).unwrap();
            assert!(next >= prev - 1e-15, "z = {z}");
            prev = next;
        }
        assert!(i_four(0.1).unwrap() < i_four(0.2).unwrap());
    }
}
