//! Fixed inputs shared by the benchmarks.

use measdep_core::{ModelParams, Rational, Scalar};

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// An interior four-parameter point where all four branch LPs differ.
pub fn four_param_point() -> ModelParams<Rational> {
    ModelParams::four(frac(6, 5), frac(4, 5), frac(2, 5), frac(2, 5))
}
