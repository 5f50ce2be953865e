//! Seeded random models for property and soundness checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{ConditionalTable, HiddenVariableModel, OutcomeTable, SettingsDistribution};
use crate::scalar::{Rational, Scalar};

/// Largest integer weight drawn per entry before normalization.
const MAX_WEIGHT: i64 = 12;

/// Deterministic generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A valid model with `lambda_count` values, random outcome signs and
/// exact rational conditional tables. Roughly a quarter of the entries are
/// zero, so sparse and boundary cases are well represented.
pub fn random_model<R: Rng>(rng: &mut R, lambda_count: usize) -> HiddenVariableModel<Rational> {
    assert!(lambda_count > 0);
    let rows: Vec<[i32; 4]> = (0..lambda_count)
        .map(|_| std::array::from_fn(|_| if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    let columns = std::array::from_fn(|_| random_distribution(rng, lambda_count));
    HiddenVariableModel::new(
        OutcomeTable::from_rows(&rows),
        ConditionalTable::new(columns),
        SettingsDistribution::uniform(),
        "random",
    )
}

fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    loop {
        let weights: Vec<i64> = (0..n)
            .map(|_| if rng.gen_bool(0.25) { 0 } else { rng.gen_range(1..=MAX_WEIGHT) })
            .collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            return weights.iter().map(|&w| Rational::from_ratio(w, total)).collect();
        }
    }
}

/// `count` models drawn from one seed, in a reproducible order.
pub fn random_models(seed: u64, count: usize, lambda_count: usize) -> Vec<HiddenVariableModel<Rational>> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| random_model(&mut rng, lambda_count)).collect()
}
