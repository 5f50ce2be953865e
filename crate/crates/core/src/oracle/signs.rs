//! Sign pattern of the four-parameter model below the correction threshold.
//!
//! With `M2 + M̂1 + M̂2 ≤ 2` the table differences have fixed signs:
//!
//! | difference                   | ≥ 0       | ≤ 0     |
//! |------------------------------|-----------|---------|
//! | `p(λ|x,y) − p(λ|x,y')`       | λ1 λ2 λ3  | λ4      |
//! | `p(λ|x',y) − p(λ|x',y')`     | λ1 λ3 λ4  | λ2      |
//! | `p(λ|x,y') − p(λ|x',y')`     | λ1 λ2     | λ3 λ4   |
//!
//! These are what let every absolute value in the distance measures be
//! resolved linearly.

use serde::Serialize;

use crate::constructors::FOUR_LAMBDA_OUTCOMES;
use crate::error::{Error, Result};
use crate::model::{HiddenVariableModel, JointSetting};
use crate::scalar::Scalar;

/// `(minuend, subtrahend, sign per λ)`; `+1` means the difference is ≥ 0.
const FAMILIES: [(JointSetting, JointSetting, [i8; 4]); 3] = [
    (JointSetting::XY, JointSetting::XY_PRIME, [1, 1, 1, -1]),
    (JointSetting::X_PRIME_Y, JointSetting::X_PRIME_Y_PRIME, [1, -1, 1, 1]),
    (JointSetting::XY_PRIME, JointSetting::X_PRIME_Y_PRIME, [1, 1, -1, -1]),
];

/// A difference with the wrong sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignFailure {
    /// 1, 2 or 3, in the order of the table above.
    pub family: usize,
    /// 0-based λ index.
    pub lambda: usize,
    pub difference: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SignReport {
    pub failures: Vec<SignFailure>,
}

impl SignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the sign pattern on a four-valued model with the standard outcome
/// table (each row may be negated as a whole).
pub fn check_sign_conditions<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<SignReport> {
    model.ensure_valid()?;
    if model.lambda_count() != 4 {
        return Err(Error::WrongFamily(format!(
            "expected 4 hidden-variable values, found {}",
            model.lambda_count()
        )));
    }
    for (i, expected) in FOUR_LAMBDA_OUTCOMES.iter().enumerate() {
        let row = model.outcomes().row(i);
        let flipped = expected.map(|s| -s);
        if row != *expected && row != flipped {
            return Err(Error::WrongFamily(format!(
                "outcome row λ{} is {row:?}, not ±{expected:?}",
                i + 1
            )));
        }
    }
    let cond = model.cond();
    let guard = T::compare_tolerance();
    let mut failures = Vec::new();
    for (f, (a, b, signs)) in FAMILIES.iter().enumerate() {
        for (lambda, &sign) in signs.iter().enumerate() {
            let diff = cond.get(*a, lambda).clone() - cond.get(*b, lambda).clone();
            let ok = if sign > 0 { diff >= -guard.clone() } else { diff <= guard.clone() };
            if !ok {
                failures.push(SignFailure {
                    family: f + 1,
                    lambda,
                    difference: diff.to_f64(),
                });
            }
        }
    }
    Ok(SignReport { failures })
}
