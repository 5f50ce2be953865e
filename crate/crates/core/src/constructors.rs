//! Explicit models that saturate the relaxed CHSH bounds.
//!
//! Every constructor is generic over [`Scalar`]: rational parameters give
//! exact rational tables. Tables are written for `M1 ≥ M2`; the opposite
//! case is produced by building the model for the exchanged parameters and
//! applying [`swap_parties`].
//!
//! Hidden-variable rows use the outcome table
//!
//! ```text
//!        A(x)  A(x')  B(y)  B(y')
//! λ1      +1    +1    +1    +1
//! λ2      +1    −1    +1    +1
//! λ3      +1    +1    +1    −1
//! λ4      +1    −1    −1    +1
//! λ5      +1    +1    +1    +1     (interpolating model only)
//! ```
//!
//! The outcome constants that the construction leaves free are fixed to +1.

use serde::Serialize;

use crate::bounds::{check_param_feasible, ModelParams};
use crate::error::{check_range, Result};
use crate::model::{swap_parties, ConditionalTable, HiddenVariableModel, OutcomeTable, SettingsDistribution};
use crate::scalar::{max_of, min_of, Scalar};

/// Outcome rows of the four-valued models.
pub const FOUR_LAMBDA_OUTCOMES: [[i32; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, 1], [1, 1, 1, -1], [1, -1, -1, 1]];

/// Outcome rows of the interpolating model.
pub const FIVE_LAMBDA_OUTCOMES: [[i32; 4]; 5] =
    [[1, 1, 1, 1], [1, -1, 1, 1], [1, 1, 1, -1], [1, -1, -1, 1], [1, 1, 1, 1]];

fn c<T: Scalar>(n: i64, d: i64) -> T {
    T::from_ratio(n, d)
}

fn check_unit<T: Scalar>(name: &'static str, value: &T) -> Result<()> {
    check_range(name, value, &T::zero(), &T::from_int(2))
}

fn build<T: Scalar>(outcomes: &[[i32; 4]], rows: Vec<[T; 4]>, label: String) -> HiddenVariableModel<T> {
    HiddenVariableModel::new(
        OutcomeTable::from_rows(outcomes),
        ConditionalTable::from_rows(rows),
        SettingsDistribution::uniform(),
        label,
    )
}

/// Coefficients of the two-parameter model (for `M1 ≥ M2`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoParamCoefficients<T> {
    pub p1: T,
    pub p2: T,
    pub p3: T,
}

impl<T: Scalar> TwoParamCoefficients<T> {
    /// `p1 = M1/2`, `p2 = M2/2`, and `p3 = (M1 + 2M2 − 2)/4` once
    /// `M1 + 2M2` exceeds 2 (zero before).
    pub fn new(m1: &T, m2: &T) -> Self {
        let excess = m1.clone() + c::<T>(2, 1) * m2.clone() - c(2, 1);
        TwoParamCoefficients {
            p1: m1.clone() / c(2, 1),
            p2: m2.clone() / c(2, 1),
            p3: max_of(&T::zero(), &(excess / c(4, 1))),
        }
    }

    /// Rows `λ1..λ4` of the conditional table, columns `xy, xy', x'y, x'y'`.
    pub fn rows(&self) -> Vec<[T; 4]> {
        let TwoParamCoefficients { p1, p2, p3 } = self.clone();
        let one = T::one();
        let two = c::<T>(2, 1);
        let four = c::<T>(4, 1);
        let a = (one.clone() + p1.clone() + two.clone() * p3.clone()) / four.clone();
        let b = (one.clone() + p1.clone() - two.clone() * p3.clone()) / four.clone();
        let d = p2 - p3;
        let e = (one.clone() - p1.clone() + two.clone() * d.clone()) / four.clone();
        let f = (one - p1 - two * d) / four;
        vec![
            [a.clone(), b.clone(), e.clone(), f.clone()],
            [b.clone(), a.clone(), f.clone(), e.clone()],
            [e.clone(), f.clone(), a.clone(), b.clone()],
            [f, e, b, a],
        ]
    }
}

/// Model saturating `S = 2 + min{M1 + M2 + min{M1, M2}, 2}`.
pub fn two_param_model<T: Scalar>(m1: &T, m2: &T) -> Result<HiddenVariableModel<T>> {
    check_unit("M1", m1)?;
    check_unit("M2", m2)?;
    let label = format!("two-param(M1={m1}, M2={m2})");
    if m1 < m2 {
        return Ok(swap_parties(&two_param_model(m2, m1)?).with_label(label));
    }
    let rows = TwoParamCoefficients::new(m1, m2).rows();
    Ok(build(&FOUR_LAMBDA_OUTCOMES, rows, label))
}

/// Coefficients of the four-parameter model (for `M1 ≥ M2`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourParamCoefficients<T> {
    pub q1: T,
    pub q2: T,
    pub q3: T,
    pub q4: T,
    /// `M2 + M̂1 + M̂2 − 2`; the corrections `q3`, `q4` switch on when it is positive.
    pub r: T,
    /// `M1 + M2 + M̂2 − 2`.
    pub rbar: T,
}

impl<T: Scalar> FourParamCoefficients<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        let (m1, m2) = (&params.m1, &params.m2);
        let (h1, h2) = (params.mhat1(), params.mhat2());
        let two = c::<T>(2, 1);
        let q1 = (two.clone() - m2.clone() - h1.clone() - h2.clone()) / c(8, 1);
        let q2 = min_of(&(m1.clone() - h1.clone()), m2);
        let r = m2.clone() + h1.clone() + h2.clone() - two.clone();
        let rbar = m1.clone() + m2.clone() + h2.clone() - two.clone();
        let (q3, q4) = if r > T::zero() {
            let q3 = r.clone() / c(8, 1);
            let q4 = (-two.clone() - h1.clone() - h2.clone()
                + min_of(&(m1.clone() + h2.clone()), &two)
                + max_of(&(m2.clone() + h1.clone()), &two)
                - q2.clone())
                / c(4, 1);
            (q3, q4)
        } else {
            (T::zero(), T::zero())
        };
        FourParamCoefficients { q1, q2, q3, q4, r, rbar }
    }

    /// Rows `λ1..λ4`, columns `xy, xy', x'y, x'y'`.
    pub fn rows(&self, params: &ModelParams<T>) -> Vec<[T; 4]> {
        let (m1, m2) = (params.m1.clone(), params.m2.clone());
        let (h1, h2) = (params.mhat1().clone(), params.mhat2().clone());
        let FourParamCoefficients { q1, q2, q3, q4, .. } = self.clone();
        let (two, three, four) = (c::<T>(2, 1), c::<T>(3, 1), c::<T>(4, 1));

        let base = |x: T| q1.clone() + x;
        let s = m2.clone() + h1.clone();
        let mut rows = vec![
            [
                base((s.clone() + q2.clone()) / four.clone()),
                base((s.clone() - q2.clone()) / four.clone()),
                base((-m1.clone() + h1.clone() + h2.clone() + q2.clone()) / two.clone()),
                q1.clone(),
            ],
            {
                let v = base((-m2.clone() + h1.clone() + two.clone() * h2.clone() + q2.clone()) / four.clone());
                [v.clone(), v, q1.clone(), base(h2.clone() / two.clone())]
            },
            [
                base((m2.clone() - q2.clone()) / two.clone()),
                q1.clone(),
                base((two.clone() * m1 + m2.clone() - h1 - three * q2.clone()) / four.clone()),
                base((s.clone() - q2.clone()) / four.clone()),
            ],
            [
                q1.clone(),
                base(m2 / two.clone()),
                base((s.clone() + q2.clone()) / four.clone()),
                base((s + q2) / four),
            ],
        ];

        if q3 != T::zero() || q4 != T::zero() {
            let a = q3.clone();
            let b = -q3.clone() - q4.clone();
            let d = -q3.clone() + q4.clone();
            let corrections = [
                [a.clone(), b.clone(), d.clone(), a.clone()],
                [d.clone(), q3.clone() + two.clone() * q4.clone(), q3.clone(), d.clone()],
                [b.clone(), q3.clone(), q3.clone() - two * q4, b.clone()],
                [a.clone(), b, d, a],
            ];
            for (row, corr) in rows.iter_mut().zip(corrections) {
                for (entry, delta) in row.iter_mut().zip(corr) {
                    *entry = entry.clone() + delta;
                }
            }
        }
        rows
    }
}

/// Model with `M1[y] = M1`, `M1[y'] = M̂1`, `M2[x] = M2`, `M2[x'] = M̂2`
/// saturating `S = 2 + min{M̂1 + M̂2 + min{M1, M2}, 2}`.
pub fn four_param_model<T: Scalar>(params: &ModelParams<T>) -> Result<HiddenVariableModel<T>> {
    check_param_feasible(params).into_result()?;
    let label = format!(
        "four-param(M1={}, M2={}, M̂1={}, M̂2={})",
        params.m1,
        params.m2,
        params.mhat1(),
        params.mhat2()
    );
    if params.m1 < params.m2 {
        return Ok(swap_parties(&four_param_model(&params.swapped())?).with_label(label));
    }
    let rows = FourParamCoefficients::new(params).rows(params);
    Ok(build(&FOUR_LAMBDA_OUTCOMES, rows, label))
}

/// Sub-region of the `(M1, M2)` square (with `M1 ≥ M2`) that selects the
/// interpolating-model table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InterpRegion {
    /// `M1 + 2M2 ≤ 2`; `S < 4` except on the boundary.
    Yellow,
    /// `M1 + 2M2 ≥ 2` and `M2 ≤ 2/3`.
    Red,
    /// `M2 ≥ 2/3`.
    Blue,
}

impl InterpRegion {
    /// Region of `(M1, M2)` after ordering the pair so the first is larger.
    /// Shared boundaries resolve to yellow, then red.
    pub fn classify<T: Scalar>(m1: &T, m2: &T) -> InterpRegion {
        let (hi, lo) = if m1 >= m2 { (m1, m2) } else { (m2, m1) };
        if hi.clone() + c::<T>(2, 1) * lo.clone() <= c(2, 1) {
            InterpRegion::Yellow
        } else if lo <= &c(2, 3) {
            InterpRegion::Red
        } else {
            InterpRegion::Blue
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InterpRegion::Yellow => "yellow",
            InterpRegion::Red => "red",
            InterpRegion::Blue => "blue",
        }
    }
}

/// Yellow-region table as a function of `p1 = M1/2`, `p2 = M2/2`. It is
/// affine in `p2`, which is what makes the model a mixture of the
/// `p2 = p1` and `p2 = 0` members.
pub fn interp_yellow_rows<T: Scalar>(p1: &T, p2: &T) -> Vec<[T; 4]> {
    let (p1, p2) = (p1.clone(), p2.clone());
    let z = T::zero();
    let three_p2 = c::<T>(3, 1) * p2.clone();
    let rest = T::one() - p1.clone() - c::<T>(2, 1) * p2.clone();
    vec![
        [p2.clone(), p2.clone(), p2.clone(), z.clone()],
        [p2.clone(), p2.clone(), z.clone(), p2.clone()],
        [p2.clone(), z.clone(), p1.clone(), p1],
        [z, p2.clone(), p2.clone(), p2],
        [
            T::one() - three_p2.clone(),
            T::one() - three_p2,
            rest.clone(),
            rest,
        ],
    ]
}

fn interp_red_rows<T: Scalar>(p1: &T, p2: &T) -> Vec<[T; 4]> {
    let (p1, p2) = (p1.clone(), p2.clone());
    let z = T::zero();
    let h = (T::one() - p1.clone()) / c(2, 1);
    let rest = T::one() - c::<T>(3, 1) * p2.clone();
    vec![
        [p2.clone(), p2.clone(), h.clone(), z.clone()],
        [p2.clone(), p2.clone(), z.clone(), h.clone()],
        [p2.clone(), z.clone(), h.clone(), h],
        [z.clone(), p2, p1.clone(), p1],
        [rest.clone(), rest, z.clone(), z],
    ]
}

fn interp_blue_rows<T: Scalar>(m1: &T, m2: &T) -> Vec<[T; 4]> {
    let (two, four) = (c::<T>(2, 1), c::<T>(4, 1));
    let p1 = (two.clone() - m2.clone()) / four.clone() + (m1.clone() - m2.clone()) / c(12, 1);
    let p2 = (m1.clone() - m2.clone()) / c(6, 1);
    let excess = m1.clone() - four * m2.clone() + two.clone();
    let p3 = max_of(&T::zero(), &(excess / c(8, 1)));
    let h = (T::one() - p1.clone()) / two.clone();
    let z = T::zero();
    let (two_p2, three_p3) = (two.clone() * p2.clone(), c::<T>(3, 1) * p3.clone());
    let h_plus = h.clone() + p2.clone() - p3.clone();
    vec![
        [
            p1.clone() - two_p2.clone(),
            h.clone() - two_p2.clone() + p3.clone(),
            h_plus.clone(),
            z.clone(),
        ],
        [
            h.clone() + c::<T>(4, 1) * p2.clone() - p3.clone(),
            p1.clone() + p2.clone(),
            z.clone(),
            h_plus.clone(),
        ],
        [
            h.clone() - two_p2.clone() + p3.clone(),
            z.clone(),
            p1.clone() - two_p2.clone() + two * p3.clone(),
            h - two_p2 + three_p3,
        ],
        [z.clone(), h_plus.clone(), h_plus, p1 + p2 - c::<T>(2, 1) * p3],
        [z.clone(), z.clone(), z.clone(), z],
    ]
}

/// Five-valued model interpolating between the symmetric (`M1 = M2`) and
/// one-sided (`M2 = 0`) saturating models; it saturates the two-parameter
/// bound everywhere in the square.
pub fn interp_model<T: Scalar>(m1: &T, m2: &T) -> Result<HiddenVariableModel<T>> {
    check_unit("M1", m1)?;
    check_unit("M2", m2)?;
    let region = InterpRegion::classify(m1, m2);
    let label = format!("interp(M1={m1}, M2={m2}, region={})", region.name());
    if m1 < m2 {
        return Ok(swap_parties(&interp_model(m2, m1)?).with_label(label));
    }
    let half = c::<T>(1, 2);
    let (p1, p2) = (m1.clone() * half.clone(), m2.clone() * half);
    let rows = match region {
        InterpRegion::Yellow => interp_yellow_rows(&p1, &p2),
        InterpRegion::Red => interp_red_rows(&p1, &p2),
        InterpRegion::Blue => interp_blue_rows(m1, m2),
    };
    Ok(build(&FIVE_LAMBDA_OUTCOMES, rows, label))
}

/// Symmetric member `M1 = M2 = 2p`, for `p ∈ [0, 1/3]`.
pub fn hall_model<T: Scalar>(p: &T) -> Result<HiddenVariableModel<T>> {
    check_range("p", p, &T::zero(), &c(1, 3))?;
    let m = c::<T>(2, 1) * p.clone();
    Ok(interp_model(&m, &m)?.with_label(format!("hall(p={p})")))
}

/// One-sided member `M1 = 2p`, `M2 = 0`, for `p ∈ [0, 1]`.
pub fn banik_model<T: Scalar>(p: &T) -> Result<HiddenVariableModel<T>> {
    check_range("p", p, &T::zero(), &T::one())?;
    let m = c::<T>(2, 1) * p.clone();
    Ok(interp_model(&m, &T::zero())?.with_label(format!("banik(p={p})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{bound_four_param, bound_two_param};
    use crate::measures::{chsh_s, measurement_dependence};
    use crate::model::{marginal_lambda, validate_model};
    use crate::scalar::Rational;
    use approx::assert_abs_diff_eq;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    const V_T: f64 = 2.0 * (std::f64::consts::SQRT_2 - 1.0);
    const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

    fn grid(step_den: i64) -> Vec<Rational> {
        (0..=2 * step_den).map(|k| r(k, step_den)).collect()
    }

    #[test]
    fn two_param_tsirelson() {
        let t = V_T / 3.0;
        let m = two_param_model(&t, &t).unwrap();
        assert!(validate_model(&m).is_valid());
        assert_abs_diff_eq!(chsh_s(&m).unwrap(), TSIRELSON, epsilon = 1e-12);
        // Each column is a permutation of (1+m)/4 three times and (1−3m)/4.
        let mm = V_T / 6.0;
        for col in &m.cond.columns {
            let mut sorted = col.clone();
            sorted.sort_by(f64::total_cmp);
            assert_abs_diff_eq!(sorted[0], (1.0 - 3.0 * mm) / 4.0, epsilon = 1e-15);
            for v in &sorted[1..] {
                assert_abs_diff_eq!(*v, (1.0 + mm) / 4.0, epsilon = 1e-15);
            }
        }
        for p in marginal_lambda(&m).unwrap() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_param_corners() {
        let m = two_param_model(&r(0, 1), &r(0, 1)).unwrap();
        assert!(m.cond.columns.iter().flatten().all(|p| *p == r(1, 4)));
        assert_eq!(chsh_s(&m).unwrap(), r(2, 1));

        let coeffs = TwoParamCoefficients::new(&r(2, 1), &r(2, 1));
        assert_eq!(coeffs.p3, r(1, 1));
        let m = two_param_model(&r(2, 1), &r(2, 1)).unwrap();
        assert!(validate_model(&m).is_valid());
        assert_eq!(chsh_s(&m).unwrap(), r(4, 1));
    }

    #[test]
    fn two_param_measures_and_swap() {
        let m = two_param_model(&r(1, 2), &r(1, 5)).unwrap();
        let rep = measurement_dependence(&m).unwrap();
        assert_eq!((rep.m1.clone(), rep.m2.clone(), rep.m.clone()), (r(1, 2), r(1, 5), r(1, 2)));
        assert_eq!((rep.mhat1, rep.mhat2), (r(1, 2), r(1, 5)));

        let swapped = two_param_model(&r(1, 5), &r(1, 2)).unwrap();
        let rep = measurement_dependence(&swapped).unwrap();
        assert_eq!((rep.m1, rep.m2), (r(1, 5), r(1, 2)));
        assert_eq!(chsh_s(&swapped).unwrap(), r(29, 10));
    }

    #[test]
    fn two_param_grid_round_trip() {
        for m1 in grid(10) {
            for m2 in grid(10) {
                let m = two_param_model(&m1, &m2).unwrap();
                assert!(validate_model(&m).is_valid(), "({m1}, {m2})");
                let rep = measurement_dependence(&m).unwrap();
                assert_eq!(rep.m1, m1);
                assert_eq!(rep.m2, m2);
                assert_eq!(rep.m, if m1 > m2 { m1.clone() } else { m2.clone() });
                assert_eq!(chsh_s(&m).unwrap(), bound_two_param(&m1, &m2).unwrap());
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(two_param_model(&2.5, &0.0).is_err());
        assert!(interp_model(&0.0, &-0.5).is_err());
        assert!(hall_model(&r(1, 2)).is_err());
        assert!(banik_model(&r(3, 2)).is_err());
        let err = four_param_model(&ModelParams::four(r(2, 1), r(0, 1), r(0, 1), r(0, 1))).unwrap_err();
        assert_eq!(err.kind(), "infeasible");
    }

    fn four_grid(step_den: i64) -> Vec<ModelParams<Rational>> {
        let g = grid(step_den);
        let mut out = Vec::new();
        for m1 in &g {
            for m2 in &g {
                for h1 in g.iter().filter(|h| *h <= m1) {
                    for h2 in g.iter().filter(|h| *h <= m2) {
                        let p = ModelParams::four(m1.clone(), m2.clone(), h1.clone(), h2.clone());
                        if check_param_feasible(&p).is_feasible() {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn four_param_examples() {
        let p = ModelParams::four(r(1, 2), r(1, 5), r(1, 2), r(1, 5));
        assert!(four_param_model(&p).unwrap().same_tables(&two_param_model(&r(1, 2), &r(1, 5)).unwrap()));

        let p = ModelParams::four(r(1, 1), r(4, 5), r(1, 2), r(2, 5));
        let rep = measurement_dependence(&four_param_model(&p).unwrap()).unwrap();
        assert_eq!(rep.m1_given, [r(1, 1), r(1, 2)]);
        assert_eq!(rep.m2_given, [r(4, 5), r(2, 5)]);

        let p = ModelParams::four(r(2, 1), r(2, 1), r(2, 1), r(2, 1));
        assert_eq!(FourParamCoefficients::new(&p).q3, r(1, 2));
        assert_eq!(chsh_s(&four_param_model(&p).unwrap()).unwrap(), r(4, 1));

        let p = ModelParams::four(r(1, 1), r(1, 1), r(1, 1), r(1, 1));
        assert_eq!(chsh_s(&four_param_model(&p).unwrap()).unwrap(), r(4, 1));

        let z = 0.1;
        let big = V_T / 3.0 + 2.0 * z;
        let small = V_T / 3.0 - z;
        let m = four_param_model(&ModelParams::four(big, big, small, small)).unwrap();
        assert!(validate_model(&m).is_valid());
        assert_abs_diff_eq!(chsh_s(&m).unwrap(), 2.0 + V_T, epsilon = 1e-12);
    }

    #[test]
    fn four_param_grid_round_trip() {
        let points = four_grid(5);
        assert!(points.len() > 1000);
        for p in points {
            let m = four_param_model(&p).unwrap();
            assert!(validate_model(&m).is_valid(), "{p:?}");
            let rep = measurement_dependence(&m).unwrap();
            assert_eq!(rep.m1_given, [p.m1.clone(), p.mhat1().clone()], "{p:?}");
            assert_eq!(rep.m2_given, [p.m2.clone(), p.mhat2().clone()], "{p:?}");
            assert_eq!(chsh_s(&m).unwrap(), bound_four_param(&p).unwrap(), "{p:?}");
        }
    }

    #[test]
    fn four_param_reduces_to_two_param() {
        for m1 in grid(5) {
            for m2 in grid(5) {
                let four = four_param_model(&ModelParams::two(m1.clone(), m2.clone())).unwrap();
                assert!(four.same_tables(&two_param_model(&m1, &m2).unwrap()), "({m1}, {m2})");
            }
        }
    }

    #[test]
    fn corrections_vanish_on_boundary() {
        // M2 + M̂1 + M̂2 = 2 on each of these points.
        for (m1, m2, h1, h2) in [(10, 10, 0, 0), (6, 4, 4, 2), (8, 6, 2, 2), (10, 6, 4, 0)] {
            let p = ModelParams::four(r(m1, 5), r(m2, 5), r(h1, 5), r(h2, 5));
            let k = FourParamCoefficients::new(&p);
            assert_eq!(k.r, r(0, 1));
            assert_eq!((k.q3, k.q4), (r(0, 1), r(0, 1)));
        }
        // The correction formulas themselves are continuous there: at R = 0
        // the unclipped q4 already evaluates to zero.
        for (m1, m2, h1, h2) in [(6, 4, 4, 2), (8, 6, 2, 2)] {
            let (m1, m2, h1, h2) = (r(m1, 5), r(m2, 5), r(h1, 5), r(h2, 5));
            let two = r(2, 1);
            let q2 = min_of(&(m1.clone() - h1.clone()), &m2);
            let q4 = -two.clone() - h1.clone() - h2.clone()
                + min_of(&(m1 + h2), &two)
                + max_of(&(m2 + h1), &two)
                - q2;
            assert_eq!(q4, r(0, 1));
        }
    }

    #[test]
    fn interp_grid_saturates() {
        for m1 in grid(10) {
            for m2 in grid(10) {
                let m = interp_model(&m1, &m2).unwrap();
                assert!(validate_model(&m).is_valid(), "({m1}, {m2})");
                let rep = measurement_dependence(&m).unwrap();
                assert_eq!((rep.m1, rep.m2), (m1.clone(), m2.clone()));
                assert_eq!(chsh_s(&m).unwrap(), bound_two_param(&m1, &m2).unwrap());
            }
        }
    }

    fn boundary_models(rows: [Vec<[Rational; 4]>; 2], m1: &Rational, m2: &Rational) {
        for rows in rows {
            let m = build(&FIVE_LAMBDA_OUTCOMES, rows, String::new());
            assert!(validate_model(&m).is_valid(), "({m1}, {m2})");
            let rep = measurement_dependence(&m).unwrap();
            assert_eq!((&rep.m1, &rep.m2), (m1, m2));
            assert_eq!(chsh_s(&m).unwrap(), r(4, 1));
        }
    }

    #[test]
    fn interp_regions_agree_on_boundaries() {
        // Yellow/red boundary M1 + 2M2 = 2, M2 ≤ 2/3. The two tables put the
        // x'y and x'y' mass of λ3 and λ4 in opposite rows, so they coincide
        // only at the corner M1 = M2 = 2/3; both realize the same (M1, M2, S).
        for k in 0..=20 {
            let m2 = r(k, 30);
            let m1 = r(2, 1) - r(2, 1) * m2.clone();
            let (p1, p2) = (m1.clone() / r(2, 1), m2.clone() / r(2, 1));
            let (yellow, red) = (interp_yellow_rows(&p1, &p2), interp_red_rows(&p1, &p2));
            assert_eq!(yellow == red, k == 20, "M2 = {m2}");
            boundary_models([yellow, red], &m1, &m2);
        }
        // Red/blue boundary M2 = 2/3 with M1 ≥ 2/3; again equal only at the corner.
        for k in 0..=20 {
            let m2 = r(2, 3);
            let m1 = r(2, 3) + r(k, 15);
            let (p1, p2) = (m1.clone() / r(2, 1), m2.clone() / r(2, 1));
            let (red, blue) = (interp_red_rows(&p1, &p2), interp_blue_rows(&m1, &m2));
            assert_eq!(red == blue, k == 0, "M1 = {m1}");
            boundary_models([red, blue], &m1, &m2);
        }
    }

    #[test]
    fn interp_diagonal_blue_matches_symmetric_table() {
        for k in 10..=30 {
            let m = r(k, 15);
            let rows = interp_blue_rows(&m, &m);
            let p1 = (r(2, 1) - m.clone()) / r(4, 1);
            let h = (r(1, 1) - p1.clone()) / r(2, 1);
            let z = r(0, 1);
            assert_eq!(
                rows,
                vec![
                    [p1.clone(), h.clone(), h.clone(), z.clone()],
                    [h.clone(), p1.clone(), z.clone(), h.clone()],
                    [h.clone(), z.clone(), p1.clone(), h.clone()],
                    [z.clone(), h.clone(), h, p1],
                    [z.clone(), z.clone(), z.clone(), z],
                ]
            );
        }
    }

    #[test]
    fn hall_and_banik_limits() {
        for k in 0..=10 {
            let p = r(k, 30);
            let twice = r(2, 1) * p.clone();
            assert!(hall_model(&p).unwrap().same_tables(&interp_model(&twice, &twice).unwrap()));
        }
        for k in 0..=10 {
            let p = r(k, 10);
            let twice = r(2, 1) * p.clone();
            assert!(banik_model(&p).unwrap().same_tables(&interp_model(&twice, &r(0, 1)).unwrap()));
        }

        let m = hall_model(&(V_T / 6.0)).unwrap();
        assert_abs_diff_eq!(chsh_s(&m).unwrap(), TSIRELSON, epsilon = 1e-12);
        let rep = measurement_dependence(&m).unwrap();
        assert_abs_diff_eq!(rep.m1, V_T / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.m2, V_T / 3.0, epsilon = 1e-15);

        let m = banik_model(&(std::f64::consts::SQRT_2 - 1.0)).unwrap();
        assert_abs_diff_eq!(chsh_s(&m).unwrap(), TSIRELSON, epsilon = 1e-12);
        let rep = measurement_dependence(&m).unwrap();
        assert_abs_diff_eq!(rep.m1, V_T, epsilon = 1e-15);
        assert_eq!(rep.m2, 0.0);
        let marginal = marginal_lambda(&m).unwrap();
        let expected = [0.0, 0.0, (std::f64::consts::SQRT_2 - 1.0) / 2.0, 0.0, 1.0 - (std::f64::consts::SQRT_2 - 1.0) / 2.0];
        for (a, b) in marginal.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }

        let m = banik_model(&r(0, 1)).unwrap();
        assert_eq!(chsh_s(&m).unwrap(), r(2, 1));
        assert_eq!(marginal_lambda(&m).unwrap(), vec![r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(1, 1)]);
    }

    #[test]
    fn yellow_table_is_a_mixture() {
        for a in 0..=20 {
            for b in 1..=a {
                let (m1, m2) = (r(a, 10), r(b, 10));
                if m1.clone() + r(2, 1) * m2.clone() > r(2, 1) {
                    continue;
                }
                let (p1, p2) = (m1 / r(2, 1), m2 / r(2, 1));
                let w = p2.clone() / p1.clone();
                let table = interp_yellow_rows(&p1, &p2);
                let symmetric = interp_yellow_rows(&p1, &p1);
                let one_sided = interp_yellow_rows(&p1, &r(0, 1));
                for i in 0..5 {
                    for j in 0..4 {
                        let mix = w.clone() * symmetric[i][j].clone()
                            + (r(1, 1) - w.clone()) * one_sided[i][j].clone();
                        assert_eq!(table[i][j], mix);
                    }
                }
            }
        }
    }

    #[test]
    fn region_classification() {
        assert_eq!(InterpRegion::classify(&r(1, 1), &r(1, 2)), InterpRegion::Yellow);
        assert_eq!(InterpRegion::classify(&r(3, 2), &r(1, 2)), InterpRegion::Red);
        assert_eq!(InterpRegion::classify(&r(1, 1), &r(4, 5)), InterpRegion::Blue);
        assert_eq!(InterpRegion::classify(&r(4, 5), &r(1, 1)), InterpRegion::Blue);
        assert_eq!(InterpRegion::classify(&r(2, 1), &r(2, 3)), InterpRegion::Red);
    }
}
