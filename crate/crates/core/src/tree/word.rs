//! Vertices and eventually periodic boundary points of the grafted tree `T_N`.
//!
//! The first letter of a word ranges over `A_N = {0, ..., 2^N - 1}`; every
//! later letter is a bit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().find(|&&b| b > 1) {
        Some(b) => Err(Error::parse("word", format!("letter {b} is not a bit"))),
        None => Ok(()),
    }
}

/// A vertex `w_1 w_2 ... w_i` of `T_N`, at level `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    first: usize,
    rest: Vec<u8>,
}

impl Vertex {
    pub fn new(first: usize, rest: Vec<u8>) -> Result<Self> {
        check_bits(&rest)?;
        Ok(Vertex { first, rest })
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn rest(&self) -> &[u8] {
        &self.rest
    }

    pub fn level(&self) -> usize {
        1 + self.rest.len()
    }

    pub fn child(&self, bit: u8) -> Vertex {
        assert!(bit <= 1);
        let mut rest = self.rest.clone();
        rest.push(bit);
        Vertex {
            first: self.first,
            rest,
        }
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        self.first == other.first && other.rest.starts_with(&self.rest)
    }

    /// Lexicographic index among the `2^(N+level-1)` vertices of the level.
    pub fn index(&self) -> usize {
        self.rest
            .iter()
            .fold(self.first, |acc, &b| (acc << 1) | b as usize)
    }

    /// Inverse of [`Vertex::index`].
    pub fn from_index(level: usize, index: usize) -> Vertex {
        assert!(level >= 1);
        let tail = level - 1;
        let rest = (0..tail)
            .rev()
            .map(|k| ((index >> k) & 1) as u8)
            .collect();
        Vertex {
            first: index >> tail,
            rest,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.first)?;
        if !self.rest.is_empty() {
            f.write_str("·")?;
            for b in &self.rest {
                write!(f, "{b}")?;
            }
        }
        Ok(())
    }
}

/// An eventually periodic path `first · pre · period^∞` in `∂T_N`, kept in
/// canonical form: the period is primitive and the binary preperiod is as
/// short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    first: usize,
    pre: Vec<u8>,
    period: Vec<u8>,
}

impl BoundaryPoint {
    pub fn new(first: usize, pre: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        check_bits(&pre)?;
        check_bits(&period)?;
        if period.is_empty() {
            return Err(Error::parse("boundary point", "empty period"));
        }
        let mut point = BoundaryPoint { first, pre, period };
        point.canonicalize();
        Ok(point)
    }

    /// `first · bit^∞`.
    pub fn constant_tail(first: usize, bit: u8) -> Self {
        BoundaryPoint {
            first,
            pre: Vec::new(),
            period: vec![bit],
        }
    }

    fn canonicalize(&mut self) {
        let p = self.period.len();
        if let Some(d) = (1..p).find(|&d| {
            p.is_multiple_of(d) && (d..p).all(|i| self.period[i] == self.period[i - d])
        }) {
            self.period.truncate(d);
        }
        while let Some(&last) = self.pre.last() {
            if Some(&last) != self.period.last() {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Letter `i` of the path, with the `A_N` letter at `i = 0`.
    pub fn letter(&self, i: usize) -> usize {
        if i == 0 {
            return self.first;
        }
        let j = i - 1;
        if j < self.pre.len() {
            self.pre[j] as usize
        } else {
            self.period[(j - self.pre.len()) % self.period.len()] as usize
        }
    }

    /// The level-`level` vertex on this path.
    pub fn prefix(&self, level: usize) -> Vertex {
        assert!(level >= 1);
        Vertex {
            first: self.first,
            rest: (1..level).map(|i| self.letter(i) as u8).collect(),
        }
    }

    /// True for tails `...1111...`, the images of doubled points.
    pub fn is_eventually_one(&self) -> bool {
        self.period == [1]
    }

    /// True for tails `...0000...`, the images of dyadic rationals.
    pub fn is_eventually_zero(&self) -> bool {
        self.period == [0]
    }

    /// Length of the longest common prefix, or `None` if the points are equal.
    pub fn common_prefix_len(&self, other: &BoundaryPoint) -> Option<usize> {
        if self == other {
            return None;
        }
        // Two distinct eventually periodic words differ before
        // max(preperiods) + lcm(periods) letters.
        let lcm = num_integer::lcm(self.period.len(), other.period.len());
        let horizon = 1 + self.pre.len().max(other.pre.len()) + lcm;
        (0..horizon).find(|&i| self.letter(i) != other.letter(i))
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·", self.first)?;
        for b in &self.pre {
            write!(f, "{b}")?;
        }
        f.write_str("(")?;
        for b in &self.period {
            write!(f, "{b}")?;
        }
        f.write_str(")^∞")
    }
}

fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::parse("boundary point", format!("{c:?} is not a bit"))),
        })
        .collect()
}

impl FromStr for BoundaryPoint {
    type Err = Error;

    /// Parses `w1·u(v)^∞`; `w1·u c^∞` is read as the single-bit period `c`.
    /// `.` may stand for `·`, and `^inf` for `^∞`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |detail: &str| Error::parse("boundary point", format!("{s:?}: {detail}"));
        let (first, tail) = s
            .split_once('·')
            .or_else(|| s.split_once('.'))
            .ok_or_else(|| bad("missing '·' after the first letter"))?;
        let first: usize = first.trim().parse().map_err(|_| bad("bad first letter"))?;
        let tail = tail.trim();
        let tail = tail
            .strip_suffix("^∞")
            .or_else(|| tail.strip_suffix("^inf"))
            .ok_or_else(|| bad("missing '^∞'"))?;
        let (pre, period) = if let Some(body) = tail.strip_suffix(')') {
            let open = body.rfind('(').ok_or_else(|| bad("unbalanced ')'"))?;
            (parse_bits(&body[..open])?, parse_bits(&body[open + 1..])?)
        } else {
            let bits = parse_bits(tail)?;
            let (last, pre) = bits.split_last().ok_or_else(|| bad("empty tail"))?;
            (pre.to_vec(), vec![*last])
        };
        BoundaryPoint::new(first, pre, period)
    }
}

impl serde::Serialize for BoundaryPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for BoundaryPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
