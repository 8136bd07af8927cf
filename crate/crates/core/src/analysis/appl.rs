//! From a finite-depth automorphism `g` of the binary tree to the rotated
//! odometer realizing `a ∘ g`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify, crosscheck_bound, odometer_automorphism, oracle_crosscheck};
use super::{ClassificationReport, CrosscheckOutcome};
use crate::correspondence::{conjugacy_check_with, ConjugacyOutcome, Counterexample};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval_maps::RotatedOdometer;
use crate::perm::Permutation;
use crate::tree::{OrderBound, TreeAutomorphism, MAX_TABLE_BITS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplOptions {
    /// Random starting points for the orbit comparison (0 is always added).
    pub samples: usize,
    pub steps: usize,
    pub depth: usize,
    pub seed: u64,
    /// Levels below `m` inspected for the order evidence.
    pub order_levels: usize,
}

impl Default for ApplOptions {
    fn default() -> Self {
        ApplOptions {
            samples: 16,
            steps: 64,
            depth: 12,
            seed: 7,
            order_levels: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplResult {
    pub m: usize,
    pub pi: Permutation,
    pub report: ClassificationReport,
    /// `graft(a, m) ∘ graft(g, m)` equals the tree model of `F_π`.
    pub grafted_model_matches: bool,
    /// `graft(a ∘ g, m)` equals the tree model of `F_π`.
    pub binary_model_matches: bool,
    pub sampled_points: usize,
    pub seed: u64,
    pub counterexample: Option<Counterexample>,
    pub oracle: CrosscheckOutcome,
    pub periods_powers_of_two: bool,
    pub order_depth: usize,
    pub order_evidence: OrderBound,
    pub infinite_order: bool,
    pub passed: bool,
}

/// Builds `F_π` for `π = κ_m ∘ g|_{V_m} ∘ κ_m⁻¹` and checks it against the
/// tree automorphism `a ∘ g`.
pub fn theorem_appl_pipeline(g: &TreeAutomorphism, opts: &ApplOptions) -> Result<ApplResult> {
    if g.root_alphabet() != 2 {
        return Err(Error::AlphabetMismatch {
            left: 2,
            right: g.root_alphabet(),
        });
    }
    let m = g.finite_depth().ok_or(Error::NotFiniteDepth)?.max(1);
    let (pi, _) = g.level_permutation(m)?;
    let od = RotatedOdometer::new(m as u32, pi.clone())?;
    let mut report = classify(&od)?;
    let model = odometer_automorphism(&od)?;

    let a = TreeAutomorphism::adding_machine();
    let grafted = a.graft(m as u32)?.compose(&g.graft(m as u32)?)?;
    let a_g = a.compose(g)?;
    let grafted_model_matches = grafted == model;
    let binary_model_matches = a_g.graft(m as u32)? == model;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Dyadic> = std::iter::once(Dyadic::zero())
        .chain((0..opts.samples).map(|_| Dyadic::random(&mut rng, 20)))
        .collect();
    let mut counterexample = None;
    for x in &starts {
        if let ConjugacyOutcome::Counterexample(c) =
            conjugacy_check_with(&grafted, &od, x, opts.steps, opts.depth)?
        {
            counterexample = Some(c);
            break;
        }
    }

    let level = (m as u32 + 2).max(6);
    let oracle = oracle_crosscheck(&od, &report, level, crosscheck_bound(&report))?;
    let periods_powers_of_two = report.periods_are_powers_of_two();

    // The cylinder of 0 always lies in the minimal part, where a ∘ g acts as
    // an adding machine; its level orders must keep doubling.
    let order_depth = (m + opts.order_levels).min(MAX_TABLE_BITS);
    let order_evidence = a_g.order_probe(order_depth)?;
    let infinite_order = report.minimal.cylinders.contains(&0)
        && matches!(order_evidence, OrderBound::AtLeast(k) if k >= 1 << (order_depth - m));

    let passed = grafted_model_matches
        && binary_model_matches
        && counterexample.is_none()
        && oracle.passed()
        && periods_powers_of_two
        && infinite_order;
    report.verified = passed;
    Ok(ApplResult {
        m,
        pi,
        report,
        grafted_model_matches,
        binary_model_matches,
        sampled_points: starts.len(),
        seed: opts.seed,
        counterexample,
        oracle,
        periods_powers_of_two,
        order_depth,
        order_evidence,
        infinite_order,
        passed,
    })
}

/// All automorphisms of the binary tree acting only on the first `m`
/// letters, one per choice of swap at each of the `2^m - 1` inner vertices.
pub fn enumerate_level_automorphisms(m: usize) -> Result<Vec<TreeAutomorphism>> {
    if !(1..=4).contains(&m) {
        return Err(Error::parse(
            "m",
            format!("depth {m} outside 1..=4 for exhaustive listing"),
        ));
    }
    let inner = (1usize << m) - 1;
    (0..1u64 << inner)
        .map(|mask| {
            let table: Vec<usize> = (0..1usize << m)
                .map(|w| {
                    (0..m).fold(0, |img, j| {
                        let prefix = w >> (m - j);
                        let swap = (mask >> ((1 << j) - 1 + prefix)) & 1;
                        let bit = (w >> (m - 1 - j)) & 1;
                        (img << 1) | (bit ^ swap as usize)
                    })
                })
                .collect();
            TreeAutomorphism::finite_depth_from_table(m, &table)
        })
        .collect()
}
