//! The von Neumann-Kakutani map, the finite exchange `R_π` of `2^N` equal
//! intervals, their composition `F_π = vnk ∘ R_π`, and a brute-force
//! periodicity oracle on top of them.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::{Displacement, Dyadic, DyadicInterval, MAX_INTERVAL_LEVEL};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest supported `N` (the finite exchange has `2^N` pieces).
pub const MAX_N: u32 = 16;

pub(crate) fn check_depth(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::BadDepth { got: n, max: MAX_N })
    } else {
        Ok(())
    }
}

/// The von Neumann-Kakutani map: `x ↦ x - (1 - 3·2^-n)` on
/// `[1 - 2^(1-n), 1 - 2^-n)`.
pub fn vnk(x: &Dyadic) -> Result<Dyadic> {
    // Branch n is one more than the number of leading 1 digits; on that branch
    // x + 3·2^-n lies in [1, 2), so reducing mod 1 is the same as subtracting 1.
    let branch = x.leading_ones()? + 1;
    Ok(x.add_mod1(&Displacement::new(3, branch)))
}

/// Inverse of [`vnk`] on `(0, 1)`. Branch `n` has image `[2^-n, 2^(1-n))`.
pub fn vnk_inverse(y: &Dyadic) -> Result<Dyadic> {
    if y.is_zero() {
        return Err(Error::NoPreimage);
    }
    let branch = y.leading_zeros()? + 1;
    Ok(y.add_mod1(&Displacement::new(-3, branch)))
}

/// Outcome of a bounded search for the least period of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PeriodStatus {
    Period(u64),
    NoneWithin(u64),
}

impl PeriodStatus {
    pub fn period(self) -> Option<u64> {
        match self {
            PeriodStatus::Period(k) => Some(k),
            PeriodStatus::NoneWithin(_) => None,
        }
    }
}

impl std::fmt::Display for PeriodStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PeriodStatus::Period(k) => write!(f, "period {k}"),
            PeriodStatus::NoneWithin(b) => write!(f, "no return within {b}"),
        }
    }
}

/// Default step bound for the oracle: `2·max(2^N, predicted period)`.
pub fn default_oracle_bound(n: u32, predicted_period: Option<u64>) -> u64 {
    2 * (1u64 << n).max(predicted_period.unwrap_or(0))
}

/// A rotated odometer `F_π = vnk ∘ R_π` with `q = 2^N` exchanged intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotatedOdometer {
    n: u32,
    pi: Permutation,
}

impl RotatedOdometer {
    pub fn new(n: u32, pi: Permutation) -> Result<Self> {
        check_depth(n)?;
        if pi.len() != 1usize << n {
            return Err(Error::InvalidPermutation(format!(
                "N = {n} needs a permutation of {} symbols, got {}",
                1usize << n,
                pi.len()
            )));
        }
        Ok(RotatedOdometer { n, pi })
    }

    /// `F_π` with `π` the identity, i.e. the von Neumann-Kakutani map itself.
    pub fn unrotated(n: u32) -> Result<Self> {
        check_depth(n)?;
        Self::new(n, Permutation::identity(1 << n))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> usize {
        1 << self.n
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    /// `R_π`: translate the level-`N` piece `p` onto piece `π(p)`.
    pub fn apply_rotation(&self, x: &Dyadic) -> Result<Dyadic> {
        let p = x.level_symbol(self.n)? as usize;
        let shift = self.pi.apply(p) as i64 - p as i64;
        if shift == 0 {
            return Ok(x.clone());
        }
        Ok(x.add_mod1(&Displacement::new(shift, self.n)))
    }

    /// `F_π(x) = vnk(R_π(x))`.
    pub fn apply(&self, x: &Dyadic) -> Result<Dyadic> {
        vnk(&self.apply_rotation(x)?)
    }

    /// `x, F(x), ..., F^steps(x)`.
    pub fn orbit(&self, x: &Dyadic, steps: usize) -> Result<Vec<Dyadic>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(x.clone());
        for _ in 0..steps {
            let next = self.apply(out.last().expect("orbit is non-empty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Least `k <= bound` with `F^k(x) = x`.
    pub fn detect_period(&self, x: &Dyadic, bound: u64) -> Result<PeriodStatus> {
        let mut y = x.clone();
        for k in 1..=bound {
            y = self.apply(&y)?;
            if y == *x {
                return Ok(PeriodStatus::Period(k));
            }
        }
        Ok(PeriodStatus::NoneWithin(bound))
    }

    /// Period status of the midpoint of every level-`level` interval.
    pub fn periodic_intervals_oracle(
        &self,
        level: u32,
        bound: u64,
    ) -> Result<Vec<(DyadicInterval, PeriodStatus)>> {
        if level < self.n {
            return Err(Error::parse(
                "oracle level",
                format!("level {level} is coarser than N = {}", self.n),
            ));
        }
        let intervals: Vec<DyadicInterval> = DyadicInterval::all(level)?.collect();
        intervals
            .into_par_iter()
            .map(|iv| Ok((iv, self.detect_period(&iv.midpoint(), bound)?)))
            .collect()
    }

    /// Breakpoints of `vnk` up to level `up_to` together with those of `R_π`.
    pub fn discontinuity_points(&self, up_to: u32) -> BTreeSet<Dyadic> {
        // (-2^-k) mod 1 = 1 - 2^-k, and 0 for k = 0.
        let vnk_cuts = (0..=up_to).map(|k| Dyadic::zero().add_mod1(&Displacement::new(-1, k)));
        let rot_cuts = (1..self.q() as u64)
            .map(|p| Dyadic::new(p, self.n).expect("p < 2^N"));
        vnk_cuts.chain(rot_cuts).collect()
    }

    /// The permutation of level-`level` intervals induced by `F_π`, for
    /// `level >= N`, with an exact endpoint check on every piece.
    ///
    /// Every piece is translated onto its image except the one that `R_π`
    /// sends onto the last interval `M_level`, which `vnk` maps onto the
    /// first interval `L_level` by a non-translation.
    pub fn induced_level_permutation(&self, level: u32) -> Result<Permutation> {
        if level < self.n || level > MAX_INTERVAL_LEVEL {
            return Err(Error::parse(
                "level",
                format!("need {} <= level <= {MAX_INTERVAL_LEVEL}, got {level}", self.n),
            ));
        }
        let last = (1u64 << level) - 1;
        let half = Displacement::new(1, level + 1);
        let images = DyadicInterval::all(level)?
            .map(|iv| {
                let left = iv.left();
                let rotated = self.apply_rotation(&left)?;
                let r_iv = DyadicInterval::containing(&rotated, level)?;
                if rotated != r_iv.left() {
                    return Err(Error::ExchangeViolation(format!(
                        "R_pi does not translate {iv} onto a level-{level} interval"
                    )));
                }
                let image_left = vnk(&rotated)?;
                let image_mid = self.apply(&iv.midpoint())?;
                let target = DyadicInterval::containing(&image_mid, level)?;
                if r_iv.index() == last {
                    if target.index() != 0 || !target.contains(&image_left) {
                        return Err(Error::ExchangeViolation(format!(
                            "{iv} is not mapped into the first interval"
                        )));
                    }
                } else if image_left != target.left()
                    || image_mid != target.left().add_mod1(&half)
                {
                    return Err(Error::ExchangeViolation(format!(
                        "{iv} is not translated onto {target}"
                    )));
                }
                Ok(target.index() as usize)
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}
