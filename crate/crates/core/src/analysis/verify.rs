//! Combined check of one odometer: tree model against interval map on seeded
//! random orbits, and classification against the oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify, crosscheck_bound, oracle_crosscheck, CrosscheckOutcome};
use crate::correspondence::{conjugacy_check, ConjugacyOutcome};
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::interval_maps::RotatedOdometer;
use crate::perm::Permutation;

/// Starting points are 0 plus `samples` uniform dyadics of level <= 20.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub steps: usize,
    pub depth: usize,
    /// Oracle level; defaults to `N + 2`.
    pub level: Option<u32>,
    /// Oracle bound; defaults to [`crosscheck_bound`].
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    #[serde(rename = "N")]
    pub n: u32,
    pub pi: Permutation,
    pub seed: u64,
    pub points: usize,
    pub steps: usize,
    pub depth: usize,
    pub conjugacy: ConjugacyOutcome,
    pub oracle: CrosscheckOutcome,
    pub passed: bool,
}

pub fn verify_odometer(od: &RotatedOdometer, opts: &VerifyOptions) -> Result<VerifySummary> {
    let report = classify(od)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Dyadic> = std::iter::once(Dyadic::zero())
        .chain((0..opts.samples).map(|_| Dyadic::random(&mut rng, 20)))
        .collect();
    let mut conjugacy = ConjugacyOutcome::Pass;
    for x in &starts {
        let outcome = conjugacy_check(od, x, opts.steps, opts.depth)?;
        if !outcome.passed() {
            conjugacy = outcome;
            break;
        }
    }
    let level = opts.level.unwrap_or(od.n() + 2);
    let bound = opts.bound.unwrap_or_else(|| crosscheck_bound(&report));
    let oracle = oracle_crosscheck(od, &report, level, bound)?;
    Ok(VerifySummary {
        n: od.n(),
        pi: od.pi().clone(),
        seed: opts.seed,
        points: starts.len(),
        steps: opts.steps,
        depth: opts.depth,
        passed: conjugacy.passed() && oracle.passed(),
        conjugacy,
        oracle,
    })
}
