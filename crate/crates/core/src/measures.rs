//! CHSH correlations and measurement-dependence measures.
//!
//! All distances are variational (L1) distances between the hidden-variable
//! distributions of two joint settings. For two settings per observer:
//!
//! * `M1[v]` compares `(x,v)` with `(x',v)`: how well λ reveals Alice's
//!   setting while Bob's is held at `v`.
//! * `M2[u]` compares `(u,y)` with `(u,y')`.
//! * `M1 = max_v M1[v]`, `M̂1 = min_v M1[v]`, and likewise for Bob.
//! * `M` is the largest distance between any two joint settings.

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::model::{HiddenVariableModel, JointSetting, Variant};
use crate::scalar::{max_of, min_of, Scalar};

/// Every measurement-dependence measure of a model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceReport<T> {
    pub m1: T,
    pub m2: T,
    pub m: T,
    pub mhat1: T,
    pub mhat2: T,
    /// `M1[y]`, `M1[y']`.
    pub m1_given: [T; 2],
    /// `M2[x]`, `M2[x']`.
    pub m2_given: [T; 2],
    /// Overall freedom of choice `1 − M/2`.
    pub f: T,
    pub f1: T,
    pub f2: T,
}

impl<T: Scalar> DependenceReport<T> {
    /// Builds a report from the four one-sided distances and `M`.
    pub fn from_parts(m1_given: [T; 2], m2_given: [T; 2], m: T) -> Self {
        let m1 = max_of(&m1_given[0], &m1_given[1]);
        let mhat1 = min_of(&m1_given[0], &m1_given[1]);
        let m2 = max_of(&m2_given[0], &m2_given[1]);
        let mhat2 = min_of(&m2_given[0], &m2_given[1]);
        let freedom = |d: &T| T::one() - d.clone() / T::from_int(2);
        DependenceReport {
            f: freedom(&m),
            f1: freedom(&m1),
            f2: freedom(&m2),
            m1,
            m2,
            m,
            mhat1,
            mhat2,
            m1_given,
            m2_given,
        }
    }

    /// Report with only the headline values set (`M1[·]` equal to `M1` and
    /// so on); used for synthetic checks of the inequality chain.
    pub fn synthetic(m1: T, m2: T, m: T) -> Self {
        Self::from_parts([m1.clone(), m1], [m2.clone(), m2], m)
    }

    pub fn to_f64(&self) -> DependenceReport<f64> {
        DependenceReport {
            m1: self.m1.to_f64(),
            m2: self.m2.to_f64(),
            m: self.m.to_f64(),
            mhat1: self.mhat1.to_f64(),
            mhat2: self.mhat2.to_f64(),
            m1_given: [self.m1_given[0].to_f64(), self.m1_given[1].to_f64()],
            m2_given: [self.m2_given[0].to_f64(), self.m2_given[1].to_f64()],
            f: self.f.to_f64(),
            f1: self.f1.to_f64(),
            f2: self.f2.to_f64(),
        }
    }
}

/// `Σ_i |p_i − q_i|`.
pub fn variational_distance<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    Ok(p.iter()
        .zip(q)
        .fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs()))
}

/// Best success probability for telling two distributions at distance `d`
/// apart from a single sample: `½(1 + d/2)`.
pub fn distinguish_probability<T: Scalar>(d: &T) -> Result<T> {
    check_range("D", d, &T::zero(), &T::from_int(2))?;
    let half = T::from_ratio(1, 2);
    Ok(half.clone() * (T::one() + d.clone() * half))
}

/// Correlator `⟨ab⟩_{uv} = Σ_λ p(λ|u,v) A(u,λ) B(v,λ)`.
pub fn correlation<T: Scalar>(model: &HiddenVariableModel<T>, js: JointSetting) -> Result<T> {
    model.ensure_valid()?;
    Ok(correlation_unchecked(model, js))
}

fn correlation_unchecked<T: Scalar>(model: &HiddenVariableModel<T>, js: JointSetting) -> T {
    model
        .cond()
        .column(js)
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, p)| {
            if model.outcomes().product(js, i) > 0 {
                acc + p.clone()
            } else {
                acc - p.clone()
            }
        })
}

/// The CHSH combination `⟨ab⟩_{xy} + ⟨ab⟩_{xy'} + ⟨ab⟩_{x'y} − ⟨ab⟩_{x'y'}`
/// without the absolute value.
pub fn chsh_signed<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<T> {
    model.ensure_valid()?;
    Ok(JointSetting::ALL.iter().fold(T::zero(), |acc, &js| {
        let e = correlation_unchecked(model, js);
        if js.chsh_sign() > 0 {
            acc + e
        } else {
            acc - e
        }
    }))
}

/// CHSH parameter `S`.
pub fn chsh_s<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<T> {
    chsh_signed(model).map(|s| s.abs())
}

fn distance<T: Scalar>(model: &HiddenVariableModel<T>, a: JointSetting, b: JointSetting) -> T {
    let cond = model.cond();
    variational_distance(cond.column(a), cond.column(b)).expect("validated columns have equal length")
}

/// `M1[v]`: distance between `(x,v)` and `(x',v)`.
pub fn m1_given<T: Scalar>(model: &HiddenVariableModel<T>, bob: Variant) -> Result<T> {
    model.ensure_valid()?;
    Ok(distance(
        model,
        JointSetting::new(Variant::Unprimed, bob),
        JointSetting::new(Variant::Primed, bob),
    ))
}

/// `M2[u]`: distance between `(u,y)` and `(u,y')`.
pub fn m2_given<T: Scalar>(model: &HiddenVariableModel<T>, alice: Variant) -> Result<T> {
    model.ensure_valid()?;
    Ok(distance(
        model,
        JointSetting::new(alice, Variant::Unprimed),
        JointSetting::new(alice, Variant::Primed),
    ))
}

/// All measurement-dependence measures in one pass.
pub fn measurement_dependence<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<DependenceReport<T>> {
    model.ensure_valid()?;
    let m1_given = Variant::BOTH.map(|v| {
        distance(
            model,
            JointSetting::new(Variant::Unprimed, v),
            JointSetting::new(Variant::Primed, v),
        )
    });
    let m2_given = Variant::BOTH.map(|u| {
        distance(
            model,
            JointSetting::new(u, Variant::Unprimed),
            JointSetting::new(u, Variant::Primed),
        )
    });
    let diagonal = distance(model, JointSetting::XY, JointSetting::X_PRIME_Y_PRIME);
    let anti_diagonal = distance(model, JointSetting::XY_PRIME, JointSetting::X_PRIME_Y);
    let m = [&m1_given[1], &m2_given[0], &m2_given[1], &diagonal, &anti_diagonal]
        .into_iter()
        .fold(m1_given[0].clone(), |acc, d| max_of(&acc, d));
    Ok(DependenceReport::from_parts(m1_given, m2_given, m))
}
