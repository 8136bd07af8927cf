//! Classification of rotated odometers into a minimal adding-machine part and
//! finitely many periodic intervals.
//!
//! The tree model of `F_π` is `(a, 1, ..., 1) τ_N π`. The carry section sits
//! at position 0, so the cycle of the root product through 0 carries an
//! adding machine on `S × {0,1}^ℕ` with `|S|` the cycle length, while every
//! other cycle has trivial sections and is periodic with period its length.

mod appl;
mod enumerate;
mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use appl::{enumerate_level_automorphisms, theorem_appl_pipeline, ApplOptions, ApplResult};
pub use enumerate::{enumerate_all, EnumerationMode, EnumerationRow, EnumerationTable};
pub use verify::{verify_odometer, VerifyOptions, VerifySummary};

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::error::{Error, Result};
use crate::interval_maps::{PeriodStatus, RotatedOdometer};
use crate::perm::Permutation;
use crate::tree::{tau_n, TreeAutomorphism};

/// `F̃_π = A ∘ R`, the tree automorphism conjugate to `F_π`.
pub fn odometer_automorphism(od: &RotatedOdometer) -> Result<TreeAutomorphism> {
    TreeAutomorphism::builtin_adding_machine(od.n())?
        .compose(&TreeAutomorphism::rotation(od.pi())?)
}

/// `τ_N ∘ π`, with `π` applied first.
pub fn root_product(od: &RotatedOdometer) -> Result<Permutation> {
    tau_n(od.n())?.compose(od.pi())
}

/// A half-open interval `[left, right)` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub left: Dyadic,
    pub right: Dyadic,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left, self.right)
    }
}

/// Level-`n` cylinders of `symbols`, merged into maximal runs.
fn spans(n: u32, symbols: &[usize]) -> Result<Vec<Span>> {
    let mut sorted = symbols.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[j] + 1 {
            j += 1;
        }
        out.push(Span {
            left: Dyadic::new(sorted[i], n)?,
            right: Dyadic::new(sorted[j] + 1, n)?,
        });
        i = j + 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPart {
    /// The cycle through 0, in application order.
    pub cylinders: Vec<usize>,
    pub measure: Dyadic,
    #[serde(rename = "S_size")]
    pub s_size: usize,
    pub intervals: Vec<Span>,
    /// Mass of each level-`N` cylinder under Lebesgue measure normalized on
    /// the minimal part.
    pub normalized_cylinder_mass: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPart {
    pub symbols: Vec<usize>,
    pub period: u64,
    pub intervals: Vec<Span>,
    pub measure: Dyadic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub pi: Permutation,
    pub root_product: Permutation,
    pub cycles: Vec<Vec<usize>>,
    pub minimal: MinimalPart,
    pub periodic: Vec<PeriodicPart>,
    pub is_minimal: bool,
    /// `log2` of the longest period when it is a power of two.
    pub n0: Option<u32>,
    pub verified: bool,
}

impl ClassificationReport {
    /// Period predicted for points of the level-`N` cylinder `symbol`, or
    /// `None` on the minimal part.
    pub fn predicted_period(&self, symbol: usize) -> Option<u64> {
        self.periodic
            .iter()
            .find(|p| p.symbols.contains(&symbol))
            .map(|p| p.period)
    }

    /// Sorted multiset of periods.
    pub fn periods(&self) -> Vec<u64> {
        let mut periods: Vec<u64> = self.periodic.iter().map(|p| p.period).collect();
        periods.sort_unstable();
        periods
    }

    pub fn max_period(&self) -> Option<u64> {
        self.periodic.iter().map(|p| p.period).max()
    }

    pub fn periodic_measure(&self) -> Dyadic {
        let symbols: usize = self.periodic.iter().map(|p| p.symbols.len()).sum();
        Dyadic::new(symbols, self.n).expect("at most 2^N symbols")
    }

    /// Exact sum of all reported measures.
    pub fn total_measure(&self) -> BigRational {
        self.periodic
            .iter()
            .map(|p| p.measure.to_rational())
            .fold(self.minimal.measure.to_rational(), |acc, m| acc + m)
    }

    pub fn periods_are_powers_of_two(&self) -> bool {
        self.periodic.iter().all(|p| p.period.is_power_of_two())
    }
}

pub fn classify(od: &RotatedOdometer) -> Result<ClassificationReport> {
    let n = od.n();
    let root = root_product(od)?;
    let cycles = root.cycles().cycles().to_vec();
    let (zero_cycle, others): (Vec<_>, Vec<_>) = cycles.iter().partition(|c| c.contains(&0));
    let c = zero_cycle[0].clone();
    let minimal = MinimalPart {
        measure: Dyadic::new(c.len(), n)?,
        s_size: c.len(),
        intervals: spans(n, &c)?,
        normalized_cylinder_mass: BigRational::new(BigInt::from(1), BigInt::from(c.len()))
            .to_string(),
        cylinders: c,
    };
    let periodic = others
        .into_iter()
        .map(|c| {
            Ok(PeriodicPart {
                symbols: c.clone(),
                period: c.len() as u64,
                intervals: spans(n, c)?,
                measure: Dyadic::new(c.len(), n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n0 = periodic
        .iter()
        .map(|p| p.period)
        .max()
        .filter(|p| p.is_power_of_two())
        .map(|p| p.trailing_zeros());
    Ok(ClassificationReport {
        n,
        pi: od.pi().clone(),
        root_product: root,
        is_minimal: periodic.is_empty(),
        cycles,
        minimal,
        periodic,
        n0,
        verified: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrosscheckOutcome {
    Pass {
        level: u32,
        bound: u64,
        intervals: usize,
    },
    Mismatch {
        interval: DyadicInterval,
        predicted: PeriodStatus,
        observed: PeriodStatus,
    },
}

impl CrosscheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CrosscheckOutcome::Pass { .. })
    }
}

/// Default oracle bound: four times the larger of `2^N` and the longest
/// predicted period.
pub fn crosscheck_bound(report: &ClassificationReport) -> u64 {
    4 * report.max_period().unwrap_or(1).max(1 << report.n)
}

/// Compares the verdicts of `report` with brute-force period detection at
/// the midpoint of every level-`level` interval.
pub fn oracle_crosscheck(
    od: &RotatedOdometer,
    report: &ClassificationReport,
    level: u32,
    bound: u64,
) -> Result<CrosscheckOutcome> {
    let needed = 4 * report.max_period().unwrap_or(0);
    if bound < needed {
        return Err(Error::argument(
            "bound",
            format!("oracle bound {bound} is below 4 x the longest period ({needed})"),
        ));
    }
    let shift = level.checked_sub(od.n()).ok_or_else(|| {
        Error::argument("level", format!("level {level} is coarser than N = {}", od.n()))
    })?;
    let observed = od.periodic_intervals_oracle(level, bound)?;
    for (interval, seen) in &observed {
        let symbol = (interval.index() >> shift) as usize;
        let predicted = match report.predicted_period(symbol) {
            Some(p) => PeriodStatus::Period(p),
            None => PeriodStatus::NoneWithin(bound),
        };
        if predicted != *seen {
            return Ok(CrosscheckOutcome::Mismatch {
                interval: *interval,
                predicted,
                observed: *seen,
            });
        }
    }
    Ok(CrosscheckOutcome::Pass {
        level,
        bound,
        intervals: observed.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn od(n: u32, pi: &str) -> RotatedOdometer {
        RotatedOdometer::new(n, Permutation::parse(pi, Some(1 << n)).unwrap()).unwrap()
    }

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn period_three_fixture() {
        let od = od(2, "(0 3)");
        let r = classify(&od).unwrap();
        assert_eq!(r.minimal.cylinders, vec![0]);
        assert_eq!(r.minimal.s_size, 1);
        assert_eq!(r.minimal.measure, d("1/4"));
        assert_eq!(r.minimal.intervals, vec![Span { left: d("0"), right: d("1/4") }]);
        assert_eq!(r.periodic.len(), 1);
        assert_eq!(r.periodic[0].period, 3);
        assert_eq!(r.periodic[0].symbols, vec![1, 3, 2]);
        assert_eq!(r.periodic[0].intervals, vec![Span { left: d("1/4"), right: d("1") }]);
        assert_eq!(r.periodic[0].measure, d("3/4"));
        assert!(!r.is_minimal);
        assert_eq!(r.n0, None);
        assert!(oracle_crosscheck(&od, &r, 6, 64).unwrap().passed());
    }

    #[test]
    fn identity_is_minimal() {
        for n in 1..=4 {
            let od = RotatedOdometer::unrotated(n).unwrap();
            let r = classify(&od).unwrap();
            assert!(r.is_minimal);
            assert_eq!(r.minimal.s_size, 1 << n);
            assert_eq!(r.minimal.measure, Dyadic::one());
            assert!(r.periodic.is_empty());
            assert_eq!(odometer_automorphism(&od).unwrap(), TreeAutomorphism::builtin_adding_machine(n).unwrap());
        }
        let od = RotatedOdometer::unrotated(2).unwrap();
        assert!(oracle_crosscheck(&od, &classify(&od).unwrap(), 6, 256).unwrap().passed());
    }

    #[test]
    fn swap_on_one_letter() {
        let od = od(1, "(0 1)");
        let r = classify(&od).unwrap();
        assert!(r.root_product.is_identity());
        assert_eq!(r.minimal.intervals, vec![Span { left: d("0"), right: d("1/2") }]);
        assert_eq!(r.periodic[0].period, 1);
        assert_eq!(r.periodic[0].intervals, vec![Span { left: d("1/2"), right: d("1") }]);
        assert_eq!(r.n0, Some(0));
        assert!(oracle_crosscheck(&od, &r, 2, 16).unwrap().passed());
        let g = odometer_automorphism(&od).unwrap();
        assert!(g.root_perm().is_identity());
        assert_eq!(g.tuple()[0], TreeAutomorphism::adding_machine());
    }

    #[test]
    fn corrupted_report_is_caught() {
        let od = od(2, "(0 3)");
        let mut r = classify(&od).unwrap();
        r.periodic[0].period = 2;
        match oracle_crosscheck(&od, &r, 6, 64).unwrap() {
            CrosscheckOutcome::Mismatch { interval, predicted, observed } => {
                assert_eq!(interval, DyadicInterval::new(6, 16).unwrap());
                assert_eq!(predicted, PeriodStatus::Period(2));
                assert_eq!(observed, PeriodStatus::Period(3));
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
        assert!(oracle_crosscheck(&od, &classify(&od).unwrap(), 6, 11).is_err());
        assert!(oracle_crosscheck(&od, &classify(&od).unwrap(), 1, 64).is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = classify(&od(3, "(0 5 2)(1 7)")).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"S_size\""));
        assert!(json.contains("\"N\":3"));
        let back: ClassificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
