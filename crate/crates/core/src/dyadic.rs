//! Exact dyadic rationals `p / 2^n` in `[0, 1]`.
//!
//! Every interval map in this crate acts on [`Dyadic`] values. Numerators are
//! arbitrary precision because orbit iteration keeps growing the exponent on
//! the aperiodic part. Intervals are half-open `[p 2^-n, (p+1) 2^-n)`, so a
//! cut-point belongs to the interval on its right.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest level for which a [`DyadicInterval`] index fits a `u64`.
pub const MAX_INTERVAL_LEVEL: u32 = 62;

/// A normalized dyadic rational `numerator / 2^exponent` with value in `[0, 1]`.
///
/// The numerator is odd unless the exponent is zero, so the representation of
/// each value is unique and derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

/// A signed dyadic displacement `numerator / 2^exponent`, used as the
/// translation amount of an interval exchange piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Displacement {
    numerator: BigInt,
    exponent: u32,
}

impl Displacement {
    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        Displacement {
            numerator: numerator.into(),
            exponent,
        }
    }
}

impl Dyadic {
    /// Builds the normalized form of `numerator / 2^exponent`.
    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Result<Self> {
        let numerator = numerator.into();
        if numerator > BigUint::one() << exponent {
            return Err(Error::OutOfRange {
                numerator: numerator.to_string(),
                exponent,
            });
        }
        Ok(Self::normalized(numerator, exponent))
    }

    fn normalized(mut numerator: BigUint, mut exponent: u32) -> Self {
        if numerator.is_zero() {
            return Dyadic {
                numerator,
                exponent: 0,
            };
        }
        let tz = numerator.trailing_zeros().unwrap_or(0).min(exponent as u64) as u32;
        if tz > 0 {
            numerator >>= tz;
            exponent -= tz;
        }
        Dyadic {
            numerator,
            exponent,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }

    /// `2^-k`.
    pub fn pow2_inv(k: u32) -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: k,
        }
    }

    /// Uniform sample from the points `k 2^-level`, `0 <= k < 2^level`.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, level: u32) -> Dyadic {
        assert!(level <= MAX_INTERVAL_LEVEL);
        Self::normalized(BigUint::from(rng.gen_range(0..1u64 << level)), level)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.numerator.is_one()
    }

    fn require_below_one(&self) -> Result<()> {
        if self.is_one() {
            Err(Error::PointIsOne)
        } else {
            Ok(())
        }
    }

    /// `(self + t) mod 1`, computed exactly.
    pub fn add_mod1(&self, t: &Displacement) -> Dyadic {
        let e = self.exponent.max(t.exponent);
        let a = BigInt::from_biguint(Sign::Plus, self.numerator.clone()) << (e - self.exponent);
        let b = &t.numerator << (e - t.exponent);
        let modulus = BigInt::one() << e;
        let sum = (a + b).mod_floor(&modulus);
        let (_, mag) = sum.into_parts();
        Self::normalized(mag, e)
    }

    /// `floor(2^n x)`: the index of the level-`n` interval containing `x`.
    pub fn level_index(&self, n: u32) -> Result<BigUint> {
        self.require_below_one()?;
        Ok(if n >= self.exponent {
            &self.numerator << (n - self.exponent)
        } else {
            &self.numerator >> (self.exponent - n)
        })
    }

    /// [`Dyadic::level_index`] for levels whose index fits a machine word.
    pub fn level_symbol(&self, n: u32) -> Result<u64> {
        if n > MAX_INTERVAL_LEVEL {
            return Err(Error::LevelTooDeep(n));
        }
        Ok(self
            .level_index(n)?
            .to_u64()
            .expect("level <= 62 index fits in u64"))
    }

    /// The `k`-th digit (`k >= 1`) of the terminating binary expansion.
    pub fn binary_digit(&self, k: u32) -> Result<u8> {
        assert!(k >= 1, "binary digits are numbered from 1");
        self.require_below_one()?;
        Ok(self.digit_unchecked(k))
    }

    fn digit_unchecked(&self, k: u32) -> u8 {
        if k > self.exponent {
            0
        } else {
            self.numerator.bit((self.exponent - k) as u64) as u8
        }
    }

    /// Number of leading `1` digits of the terminating expansion of `x < 1`.
    pub fn leading_ones(&self) -> Result<u32> {
        self.require_below_one()?;
        Ok((1..=self.exponent)
            .take_while(|&k| self.digit_unchecked(k) == 1)
            .count() as u32)
    }

    /// Number of leading `0` digits of `x` in `(0, 1)`.
    pub fn leading_zeros(&self) -> Result<u32> {
        self.require_below_one()?;
        if self.is_zero() {
            return Err(Error::NoPreimage);
        }
        Ok(self.exponent - self.numerator.bits() as u32)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, self.numerator.clone()),
            BigInt::one() << self.exponent,
        )
    }

    /// Exact decimal expansion, e.g. `0.625` for `5/2^3`.
    pub fn to_decimal_string(&self) -> String {
        if self.exponent == 0 {
            return self.numerator.to_string();
        }
        let scaled = &self.numerator * BigUint::from(5u32).pow(self.exponent);
        let digits = scaled.to_string();
        let width = self.exponent as usize;
        format!("0.{digits:0>width$}")
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `p/2^n`, `p/q` with `q` a power of two, or a bare `0` / `1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |detail: &str| Error::parse("dyadic", format!("{s:?}: {detail}"));
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((n, d)) => (n.trim(), Some(d.trim())),
        };
        let numerator: BigUint = num.parse().map_err(|_| bad("bad numerator"))?;
        let exponent = match den {
            None => 0,
            Some(d) => {
                if let Some(e) = d.strip_prefix("2^") {
                    e.parse::<u32>().map_err(|_| bad("bad exponent"))?
                } else {
                    let q: BigUint = d.parse().map_err(|_| bad("bad denominator"))?;
                    if q.is_zero() || q.count_ones() != 1 {
                        return Err(bad("denominator is not a power of two"));
                    }
                    q.trailing_zeros().unwrap_or(0) as u32
                }
            }
        };
        Dyadic::new(numerator, exponent)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The half-open interval `[index 2^-level, (index+1) 2^-level)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    level: u32,
    index: u64,
}

impl DyadicInterval {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level > MAX_INTERVAL_LEVEL {
            return Err(Error::LevelTooDeep(level));
        }
        if index >= 1u64 << level {
            return Err(Error::parse(
                "interval",
                format!("index {index} out of range at level {level}"),
            ));
        }
        Ok(DyadicInterval { level, index })
    }

    /// The level-`level` interval containing `x`.
    pub fn containing(x: &Dyadic, level: u32) -> Result<Self> {
        let index = x.level_symbol(level)?;
        Ok(DyadicInterval { level, index })
    }

    /// All `2^level` intervals of a level, left to right.
    pub fn all(level: u32) -> Result<impl Iterator<Item = DyadicInterval>> {
        if level > MAX_INTERVAL_LEVEL {
            return Err(Error::LevelTooDeep(level));
        }
        Ok((0..1u64 << level).map(move |index| DyadicInterval { level, index }))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn left(&self) -> Dyadic {
        Dyadic::normalized(BigUint::from(self.index), self.level)
    }

    pub fn right(&self) -> Dyadic {
        Dyadic::normalized(BigUint::from(self.index + 1), self.level)
    }

    /// `(2p+1) / 2^(level+1)`, an interior point.
    pub fn midpoint(&self) -> Dyadic {
        Dyadic::normalized(BigUint::from(2 * self.index + 1), self.level + 1)
    }

    pub fn length(&self) -> Dyadic {
        Dyadic::pow2_inv(self.level)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        *x >= self.left() && *x < self.right()
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left(), self.right())
    }
}
