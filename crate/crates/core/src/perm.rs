//! Permutations of a finite alphabet `{0, ..., q-1}` and their cycles.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection of `{0, ..., q-1}`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

/// Cycles of a permutation. Each cycle starts at its smallest symbol and
/// lists symbols in application order; cycles are sorted by first symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let q = images.len();
        if q == 0 {
            return Err(Error::InvalidPermutation("empty image table".into()));
        }
        let mut seen = vec![false; q];
        for (i, &img) in images.iter().enumerate() {
            if img >= q {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} of {i} is outside 0..{q}"
                )));
            }
            if std::mem::replace(&mut seen[img], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{img} is the image of two symbols"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(q: usize) -> Self {
        Permutation {
            images: (0..q).collect(),
        }
    }

    /// Builds a permutation of `{0, ..., q-1}` from disjoint cycles; symbols
    /// not mentioned are fixed.
    pub fn from_cycles(q: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..q).collect();
        let mut used = vec![false; q];
        for cycle in cycles {
            for (j, &s) in cycle.iter().enumerate() {
                if s >= q {
                    return Err(Error::InvalidPermutation(format!(
                        "symbol {s} is outside 0..{q}"
                    )));
                }
                if std::mem::replace(&mut used[s], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "symbol {s} appears in more than one cycle position"
                    )));
                }
                images[s] = cycle[(j + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses comma-separated images (`"3,1,2,0"`) or cycle notation
    /// (`"(0 3)"`, `"(0)(1 3 2)"`). Cycle notation needs the alphabet size.
    pub fn parse(text: &str, q: Option<usize>) -> Result<Self> {
        let text = text.trim();
        let bad = |detail: String| Error::parse("permutation", format!("{text:?}: {detail}"));
        if text.starts_with('(') {
            let q = q.ok_or_else(|| bad("cycle notation needs the alphabet size".into()))?;
            let mut cycles = Vec::new();
            let mut rest = text;
            while !rest.is_empty() {
                let body = rest
                    .strip_prefix('(')
                    .ok_or_else(|| bad("expected '('".into()))?;
                let end = body.find(')').ok_or_else(|| bad("unclosed '('".into()))?;
                let cycle = body[..end]
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad(format!("bad symbol {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
                rest = body[end + 1..].trim_start();
            }
            Self::from_cycles(q, &cycles)
        } else {
            let images = text
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| bad(format!("bad image {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let perm = Self::from_images(images)?;
            if let Some(q) = q {
                if perm.len() != q {
                    return Err(bad(format!("expected {q} images, got {}", perm.len())));
                }
            }
            Ok(perm)
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Result<Permutation> {
        if self.len() != first.len() {
            return Err(Error::AlphabetMismatch {
                left: self.len(),
                right: first.len(),
            });
        }
        Ok(Permutation {
            images: first.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn cycles(&self) -> CycleDecomposition {
        let mut seen = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                cycle.push(s);
                s = self.images[s];
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    /// True when the permutation is a single cycle through every symbol.
    pub fn is_transitive(&self) -> bool {
        let mut s = self.images[0];
        let mut steps = 1;
        while s != 0 {
            s = self.images[s];
            steps += 1;
        }
        steps == self.len()
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .lengths()
            .fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }

    pub fn cycle_notation(&self) -> String {
        self.cycles().to_string()
    }

    pub fn image_notation(&self) -> String {
        self.images
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]", self.image_notation())
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationRepr {
    images: Vec<usize>,
    cycles: String,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PermutationRepr {
            images: self.images.clone(),
            cycles: self.cycle_notation(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PermutationRepr::deserialize(deserializer)?;
        let perm = Permutation::from_images(repr.images).map_err(serde::de::Error::custom)?;
        let from_cycles = Permutation::parse(&repr.cycles, Some(perm.len()))
            .map_err(serde::de::Error::custom)?;
        if from_cycles != perm {
            return Err(serde::de::Error::custom(
                "permutation images and cycles disagree",
            ));
        }
        Ok(perm)
    }
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycles.iter().map(Vec::len)
    }

    pub fn cycle_of(&self, symbol: usize) -> Option<&[usize]> {
        self.cycles
            .iter()
            .find(|c| c.contains(&symbol))
            .map(Vec::as_slice)
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            f.write_str("(")?;
            for (j, s) in cycle.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_both_notations() {
        let a = Permutation::parse("3,1,2,0", None).unwrap();
        let b = Permutation::parse("(0 3)", Some(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.cycle_notation(), "(0 3)(1)(2)");
        assert_eq!(b.image_notation(), "3,1,2,0");
        assert_eq!(Permutation::parse("()", Some(2)).unwrap(), Permutation::identity(2));
        assert_eq!(
            Permutation::parse("(0)(3,2,1)", Some(4)).unwrap().images(),
            &[0, 3, 1, 2]
        );
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Permutation::parse("0,0", None).is_err());
        assert!(Permutation::parse("0,2", None).is_err());
        assert!(Permutation::parse("(0 4)", Some(4)).is_err());
        assert!(Permutation::parse("(0 1)(1 2)", Some(4)).is_err());
        assert!(Permutation::parse("(0 1", Some(4)).is_err());
        assert!(Permutation::parse("1,0", Some(4)).is_err());
        assert!(Permutation::parse("(0 1)", None).is_err());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // tau_2 = (0 2 1 3), pi = (0 3); pi first gives (0)(1 3 2).
        let tau = Permutation::from_cycles(4, &[vec![0, 2, 1, 3]]).unwrap();
        let pi = Permutation::from_cycles(4, &[vec![0, 3]]).unwrap();
        let prod = tau.compose(&pi).unwrap();
        assert_eq!(prod.cycle_notation(), "(0)(1 3 2)");
        assert_eq!(prod, Permutation::from_cycles(4, &[vec![3, 2, 1]]).unwrap());
    }

    #[test]
    fn cycles_follow_application_order() {
        let p = Permutation::from_images(vec![2, 3, 1, 0]).unwrap();
        assert_eq!(p.cycles().cycles(), &[vec![0, 2, 1, 3]]);
        assert!(p.is_transitive());
        assert_eq!(p.order(), 4);
        assert_eq!(p.inverse().compose(&p).unwrap(), Permutation::identity(4));
        assert!(!Permutation::identity(2).is_transitive());
    }

    #[test]
    fn serde_keeps_both_forms() {
        let p = Permutation::parse("(0 3)", Some(4)).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"images":[3,1,2,0],"cycles":"(0 3)(1)(2)"}"#);
        let back: Permutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
