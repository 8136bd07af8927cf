//! Classification of every rotation `π` of a given `N`, or of a seeded sample.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, ClassificationReport};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval_maps::{check_depth, RotatedOdometer};
use crate::perm::Permutation;

/// Largest `N` for which every permutation is enumerated.
pub const MAX_EXHAUSTIVE_N: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRow {
    pub pi: Permutation,
    pub is_minimal: bool,
    #[serde(rename = "S_size")]
    pub s_size: usize,
    pub periods: Vec<u64>,
    pub minimal_measure: Dyadic,
    pub periodic_measure: Dyadic,
}

impl From<&ClassificationReport> for EnumerationRow {
    fn from(r: &ClassificationReport) -> Self {
        EnumerationRow {
            pi: r.pi.clone(),
            is_minimal: r.is_minimal,
            s_size: r.minimal.s_size,
            periods: r.periods(),
            minimal_measure: r.minimal.measure.clone(),
            periodic_measure: r.periodic_measure(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTable {
    #[serde(rename = "N")]
    pub n: u32,
    pub mode: EnumerationMode,
    pub rows: Vec<EnumerationRow>,
    pub minimal_count: usize,
    /// Number of rows per value of `|S|`.
    pub s_size_counts: BTreeMap<usize, usize>,
}

/// Rows are sorted by the image table of `π`, so output is stable.
pub fn enumerate_all(n: u32, mode: EnumerationMode) -> Result<EnumerationTable> {
    check_depth(n)?;
    let q = 1usize << n;
    let mut perms: Vec<Vec<usize>> = match mode {
        EnumerationMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::ExhaustiveRefused(n));
            }
            (0..q).permutations(q).collect()
        }
        EnumerationMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let mut images: Vec<usize> = (0..q).collect();
                    images.shuffle(&mut rng);
                    images
                })
                .collect()
        }
    };
    perms.sort_unstable();
    let rows = perms
        .into_par_iter()
        .map(|images| {
            let od = RotatedOdometer::new(n, Permutation::from_images(images)?)?;
            Ok(EnumerationRow::from(&classify(&od)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut s_size_counts = BTreeMap::new();
    for row in &rows {
        *s_size_counts.entry(row.s_size).or_insert(0) += 1;
    }
    Ok(EnumerationTable {
        n,
        mode,
        minimal_count: rows.iter().filter(|r| r.is_minimal).count(),
        rows,
        s_size_counts,
    })
}
