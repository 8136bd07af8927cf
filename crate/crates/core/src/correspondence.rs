//! The coding `φ` of `[0,1)` by boundary paths of `T_N`.
//!
//! The first letter of `φ(x)` is the level-`N` interval index of `x`; letter
//! `j >= 2` is the binary digit of `x` at position `N + j - 1`. A dyadic cut
//! point `x > 0` also has a left copy `x⁻`, coded by the expansion ending in
//! `1`s. Those eventually-one tails are the only boundary points without an
//! interval preimage.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::analysis::odometer_automorphism;
use crate::dyadic::{Displacement, Dyadic, DyadicInterval};
use crate::error::{Error, Result};
use crate::interval_maps::{check_depth, RotatedOdometer};
use crate::tree::{BoundaryPoint, TreeAutomorphism, Vertex};

/// Which expansion of a dyadic cut point to encode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The point itself, coded with a `0` tail.
    Upper,
    /// The doubled point `x⁻`, coded with a `1` tail.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedPoint {
    pub point: BoundaryPoint,
    pub has_interval_preimage: bool,
}

pub fn encode_point(x: &Dyadic, n: u32, side: Side) -> Result<EncodedPoint> {
    check_depth(n)?;
    let (y, last, tail) = match side {
        Side::Upper => {
            if x.is_one() {
                return Err(Error::PointIsOne);
            }
            (x.clone(), x.exponent().max(n), 0)
        }
        Side::Lower => {
            if x.is_zero() {
                return Err(Error::NoDoubledPoint);
            }
            // x⁻ = 0.d_1 ... d_E 111..., with y = x - 2^-E.
            let e = x.exponent().max(n);
            (x.add_mod1(&Displacement::new(-1, e)), e, 1)
        }
    };
    let first = y.level_symbol(n)? as usize;
    let pre = (n + 1..=last)
        .map(|k| y.binary_digit(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedPoint {
        point: BoundaryPoint::new(first, pre, vec![tail])?,
        has_interval_preimage: side == Side::Upper,
    })
}

fn bits_value(bits: &[u8]) -> BigInt {
    bits.iter()
        .fold(BigInt::from(0), |acc, &b| (acc << 1) + BigInt::from(b))
}

/// The real number coded by `b`, and whether `b` has an interval preimage.
pub fn decode_point(b: &BoundaryPoint, n: u32) -> Result<(BigRational, bool)> {
    check_depth(n)?;
    if b.first() >= 1 << n {
        return Err(Error::AlphabetMismatch {
            left: 1 << n,
            right: b.first() + 1,
        });
    }
    let pre = b.preperiod();
    let period = b.period();
    let pow2 = |k: usize| BigInt::one() << k;
    // u.(v)^∞ = (U + V / (2^P - 1)) / 2^L
    let tail = BigRational::from_integer(bits_value(pre))
        + BigRational::new(bits_value(period), pow2(period.len()) - 1);
    let value = BigRational::new(BigInt::from(b.first()), pow2(n as usize))
        + tail / BigRational::from_integer(pow2(n as usize + pre.len()));
    Ok((value, !b.is_eventually_one()))
}

/// [`decode_point`] restricted to points of the interval, returned as a
/// dyadic when the value is one.
pub fn decode_dyadic(b: &BoundaryPoint, n: u32) -> Result<Option<Dyadic>> {
    let (value, preimage) = decode_point(b, n)?;
    if !preimage {
        return Ok(None);
    }
    let denom = value.denom().magnitude().clone();
    if denom.count_ones() != 1 {
        return Ok(None);
    }
    let exponent = denom.bits() as u32 - 1;
    Dyadic::new(value.numer().magnitude().clone(), exponent).map(Some)
}

/// The interval of points whose coding starts with `v`.
pub fn vertex_interval(v: &Vertex, n: u32) -> Result<DyadicInterval> {
    check_depth(n)?;
    if v.first() >= 1 << n {
        return Err(Error::AlphabetMismatch {
            left: 1 << n,
            right: v.first() + 1,
        });
    }
    DyadicInterval::new(n + v.level() as u32 - 1, v.index() as u64)
}

/// Bernoulli mass `2^-(N + level - 1)` of the cylinder of `v`.
pub fn cylinder_mass(v: &Vertex, n: u32) -> Dyadic {
    Dyadic::pow2_inv(n + v.level() as u32 - 1)
}

/// `2^-r` with `r` the length of the common prefix; `0` for equal points.
pub fn boundary_distance(b1: &BoundaryPoint, b2: &BoundaryPoint) -> Dyadic {
    match b1.common_prefix_len(b2) {
        None => Dyadic::zero(),
        Some(r) => Dyadic::pow2_inv(r as u32),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub start: Dyadic,
    pub step: usize,
    pub interval_side: BoundaryPoint,
    pub tree_side: BoundaryPoint,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjugacyOutcome {
    Pass,
    Counterexample(Counterexample),
}

impl ConjugacyOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConjugacyOutcome::Pass)
    }
}

/// Checks that `φ(F^k(x))` and `F̃^k(φ(x))` share their first `depth`
/// letters for `k = 0, ..., steps`, with `F̃` the tree model of `od`.
pub fn conjugacy_check(
    od: &RotatedOdometer,
    x: &Dyadic,
    steps: usize,
    depth: usize,
) -> Result<ConjugacyOutcome> {
    conjugacy_check_with(&odometer_automorphism(od)?, od, x, steps, depth)
}

/// [`conjugacy_check`] against an explicitly given tree model.
pub fn conjugacy_check_with(
    model: &TreeAutomorphism,
    od: &RotatedOdometer,
    x: &Dyadic,
    steps: usize,
    depth: usize,
) -> Result<ConjugacyOutcome> {
    let n = od.n();
    let mut point = x.clone();
    let mut coded = encode_point(x, n, Side::Upper)?.point;
    for step in 0..=steps {
        if step > 0 {
            point = od.apply(&point)?;
            coded = model.apply_boundary(&coded)?;
        }
        if depth == 0 {
            continue;
        }
        let direct = encode_point(&point, n, Side::Upper)?.point;
        if direct.prefix(depth) != coded.prefix(depth) {
            return Ok(ConjugacyOutcome::Counterexample(Counterexample {
                start: x.clone(),
                step,
                interval_side: direct,
                tree_side: coded,
                depth,
            }));
        }
    }
    Ok(ConjugacyOutcome::Pass)
}
