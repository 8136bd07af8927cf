//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use odometer_core::analysis::{
    classify, crosscheck_bound, enumerate_all, enumerate_level_automorphisms,
    odometer_automorphism, oracle_crosscheck, theorem_appl_pipeline, ApplOptions,
    ClassificationReport, EnumerationMode,
};
use odometer_core::correspondence::{conjugacy_check, decode_point, encode_point, Side};
use odometer_core::{
    tau_n, BoundaryPoint, Dyadic, OrderBound, Permutation, RotatedOdometer, TreeAutomorphism,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn bp(s: &str) -> BoundaryPoint {
    s.parse().unwrap()
}

fn od(n: u32, pi: &str) -> RotatedOdometer {
    RotatedOdometer::new(n, Permutation::parse(pi, Some(1 << n)).unwrap()).unwrap()
}

fn random_odometer(rng: &mut ChaCha8Rng, n: u32) -> RotatedOdometer {
    let mut images: Vec<usize> = (0..1 << n).collect();
    images.shuffle(rng);
    RotatedOdometer::new(n, Permutation::from_images(images).unwrap()).unwrap()
}

/// Ten seeded random rotations for each of N = 1, 2, 3.
fn tested_odometers() -> Vec<RotatedOdometer> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (1..=3)
        .flat_map(|n| (0..10).map(move |_| n))
        .map(|n| random_odometer(&mut rng, n))
        .collect()
}

fn crosscheck(od: &RotatedOdometer, report: &ClassificationReport, level: u32) -> Check {
    let outcome = oracle_crosscheck(od, report, level, crosscheck_bound(report))
        .map_err(|e| e.to_string())?;
    ensure!(outcome.passed(), "π = {}: {outcome:?}", od.pi());
    Ok(())
}

fn period_three_fixture() -> Check {
    let od = od(2, "(0 3)");
    let r = classify(&od).map_err(|e| e.to_string())?;
    ensure!(r.minimal.cylinders == [0] && r.minimal.s_size == 1, "minimal part {:?}", r.minimal);
    ensure!(r.minimal.measure == d("1/4"), "minimal measure {}", r.minimal.measure);
    ensure!(
        r.minimal.intervals.len() == 1
            && r.minimal.intervals[0].left == d("0")
            && r.minimal.intervals[0].right == d("1/4"),
        "minimal intervals {:?}",
        r.minimal.intervals
    );
    ensure!(r.periodic.len() == 1, "periodic parts {:?}", r.periodic);
    let p = &r.periodic[0];
    ensure!(p.period == 3 && p.measure == d("3/4"), "periodic part {p:?}");
    ensure!(
        p.intervals.len() == 1 && p.intervals[0].left == d("1/4") && p.intervals[0].right == d("1"),
        "periodic intervals {:?}",
        p.intervals
    );
    let outcome = oracle_crosscheck(&od, &r, 6, 64).map_err(|e| e.to_string())?;
    ensure!(outcome.passed(), "oracle at K=6, bound 64: {outcome:?}");
    let orbit = od.orbit(&d("1/2"), 3).map_err(|e| e.to_string())?;
    ensure!(
        orbit == [d("1/2"), d("1/4"), d("3/4"), d("1/2")],
        "orbit of 1/2: {orbit:?}"
    );
    Ok(())
}

fn wreath_fixture() -> Check {
    let g = odometer_automorphism(&od(2, "(0 3)")).map_err(|e| e.to_string())?;
    let expected_root = Permutation::from_cycles(4, &[vec![1, 3, 2]]).unwrap();
    ensure!(g.root_perm() == &expected_root, "root {}", g.root_perm());
    let a = TreeAutomorphism::adding_machine();
    let id = TreeAutomorphism::identity(1).unwrap();
    ensure!(
        g.tuple() == [a, id.clone(), id.clone(), id],
        "tuple {:?}",
        g.tuple()
    );
    Ok(())
}

fn adding_machine_facts() -> Check {
    let a = TreeAutomorphism::adding_machine();
    for (x, y) in [("1·(1)^∞", "0·(0)^∞"), ("1·(0)^∞", "0·1(0)^∞"), ("0·(0)^∞", "1·(0)^∞")] {
        let image = a.apply_boundary(&bp(x)).map_err(|e| e.to_string())?;
        ensure!(image == bp(y), "a({x}) = {image}, expected {y}");
    }
    let tau = tau_n(2).map_err(|e| e.to_string())?;
    ensure!(
        tau == Permutation::from_cycles(4, &[vec![0, 2, 1, 3]]).unwrap(),
        "τ_2 = {tau}"
    );
    for n in 1..=3 {
        let big_a = TreeAutomorphism::builtin_adding_machine(n).map_err(|e| e.to_string())?;
        for level in 1..=12 {
            let (perm, cycles) = big_a.level_permutation(level).map_err(|e| e.to_string())?;
            ensure!(
                cycles.len() == 1 && perm.is_transitive(),
                "N = {n}, level {level}: {} cycles",
                cycles.len()
            );
        }
    }
    Ok(())
}

fn dihedral_fixture() -> Check {
    let file = |initial: &str| {
        format!(
            r#"{{"initial": "{initial}", "states": {{
                "a1": {{"alphabet": 2, "perm": [1, 0], "sections": ["id", "id"]}},
                "a2": {{"alphabet": 2, "perm": [0, 1], "sections": ["a1", "a2"]}}
            }}}}"#
        )
    };
    let a1 = TreeAutomorphism::parse_automaton(&file("a1")).map_err(|e| e.to_string())?;
    let a2 = TreeAutomorphism::parse_automaton(&file("a2")).map_err(|e| e.to_string())?;
    let sigma = TreeAutomorphism::sigma();
    let h = a1.compose(&a2).map_err(|e| e.to_string())?;
    let h_sigma = h.compose(&sigma).map_err(|e| e.to_string())?;
    ensure!(!h_sigma.is_identity(), "h∘σ is the identity");
    ensure!(h_sigma.power(2).is_identity(), "(h∘σ)^2 is not the identity");
    let probe = h.order_probe(10).map_err(|e| e.to_string())?;
    ensure!(probe == OrderBound::AtLeast(1024), "order_probe(h, 10) = {probe:?}");
    Ok(())
}

fn conjugacy_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut jobs: Vec<(RotatedOdometer, Dyadic)> = Vec::new();
    for od in tested_odometers() {
        for _ in 0..100 {
            let level = rng.gen_range(0..=20);
            jobs.push((od.clone(), Dyadic::random(&mut rng, level)));
        }
    }
    ensure!(jobs.len() == 3000, "{} jobs", jobs.len());
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(od, x)| match conjugacy_check(od, x, 500, 16) {
            Ok(outcome) if outcome.passed() => None,
            other => Some(format!("N = {}, π = {}, x = {x}: {other:?}", od.n(), od.pi())),
        })
        .collect();
    ensure!(failures.is_empty(), "{} counterexamples, first: {}", failures.len(), failures[0]);
    Ok(())
}

fn measure_invariance() -> Check {
    let mut ods = tested_odometers();
    ods.push(od(2, "(0 3)"));
    ods.push(od(1, "(0 1)"));
    for od in &ods {
        for level in od.n()..=12 {
            let perm = od
                .induced_level_permutation(level)
                .map_err(|e| format!("N = {}, π = {}, K = {level}: {e}", od.n(), od.pi()))?;
            ensure!(perm.len() == 1 << level, "K = {level}: {} intervals", perm.len());
        }
    }
    Ok(())
}

fn appl_suite() -> Check {
    let mut family = enumerate_level_automorphisms(1).map_err(|e| e.to_string())?;
    family.extend(enumerate_level_automorphisms(2).map_err(|e| e.to_string())?);
    let mut depth_three = enumerate_level_automorphisms(3).map_err(|e| e.to_string())?;
    depth_three.shuffle(&mut ChaCha8Rng::seed_from_u64(3));
    family.extend(depth_three.into_iter().take(20));
    ensure!(family.len() == 30, "{} automorphisms", family.len());
    let opts = ApplOptions::default();
    for g in &family {
        let r = theorem_appl_pipeline(g, &opts).map_err(|e| e.to_string())?;
        ensure!(r.passed, "pipeline failed for π = {}: {r:?}", r.pi);
        ensure!(
            r.report.periods().iter().all(|p| p.is_power_of_two()),
            "π = {}: periods {:?}",
            r.pi,
            r.report.periods()
        );
        ensure!(r.report.minimal.cylinders.contains(&0), "π = {}: cylinder 0 not minimal", r.pi);
    }
    let witness = classify(&od(2, "(0 3)")).map_err(|e| e.to_string())?;
    ensure!(
        !witness.periods_are_powers_of_two(),
        "period-3 fixture has periods {:?}",
        witness.periods()
    );
    Ok(())
}

fn enumeration() -> Check {
    let t = enumerate_all(2, EnumerationMode::Exhaustive).map_err(|e| e.to_string())?;
    ensure!(t.rows.len() == 24, "{} rows for N = 2", t.rows.len());
    for row in &t.rows {
        let od = RotatedOdometer::new(2, row.pi.clone()).unwrap();
        let r = classify(&od).map_err(|e| e.to_string())?;
        ensure!(r.total_measure().is_one(), "π = {}: measures sum to {}", row.pi, r.total_measure());
        crosscheck(&od, &r, 6)?;
    }
    let t = enumerate_all(3, EnumerationMode::Exhaustive).map_err(|e| e.to_string())?;
    ensure!(t.rows.len() == 40320, "{} rows for N = 3", t.rows.len());
    let one = BigRational::one();
    for row in &t.rows {
        let total = row.minimal_measure.to_rational() + row.periodic_measure.to_rational();
        ensure!(total == one, "π = {}: measures sum to {total}", row.pi);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let picks: Vec<_> = t.rows.choose_multiple(&mut rng, 100).collect();
    picks.par_iter().try_for_each(|row| {
        let od = RotatedOdometer::new(3, row.pi.clone()).unwrap();
        let r = classify(&od).map_err(|e| e.to_string())?;
        crosscheck(&od, &r, 6)
    })
}

fn round_trips() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let level = rng.gen_range(0..=40);
        let x = Dyadic::random(&mut rng, level);
        let e = encode_point(&x, n, Side::Upper).map_err(|e| e.to_string())?;
        let back = decode_point(&e.point, n).map_err(|e| e.to_string())?;
        ensure!(back == (x.to_rational(), true), "N = {n}, x = {x}: decoded {back:?}");
        if !x.is_zero() {
            let e = encode_point(&x, n, Side::Lower).map_err(|e| e.to_string())?;
            let back = decode_point(&e.point, n).map_err(|e| e.to_string())?;
            ensure!(back == (x.to_rational(), false), "N = {n}, x = {x}⁻: decoded {back:?}");
        }
    }

    let mut automata = vec![
        TreeAutomorphism::adding_machine(),
        TreeAutomorphism::sigma(),
        TreeAutomorphism::identity(3).unwrap(),
        odometer_automorphism(&od(2, "(0 3)")).unwrap(),
    ];
    automata.extend(enumerate_level_automorphisms(3).unwrap().into_iter().step_by(9));
    for g in tested_odometers().iter().map(odometer_automorphism) {
        automata.push(g.unwrap());
    }
    for g in &automata {
        let json = g.to_json();
        let back = TreeAutomorphism::parse_automaton(&json).map_err(|e| e.to_string())?;
        ensure!(&back == g && back.to_json() == json, "automaton did not round trip:\n{json}");
    }

    let mut reports: Vec<ClassificationReport> = tested_odometers()
        .iter()
        .map(|od| classify(od).unwrap())
        .collect();
    reports.push(classify(&od(2, "(0 3)")).unwrap());
    for r in &reports {
        let json = serde_json::to_string_pretty(r).unwrap();
        let back: ClassificationReport = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        ensure!(&back == r, "report did not round trip:\n{json}");
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 9] = [
        ("period-3 fixture", period_three_fixture),
        ("wreath fixture", wreath_fixture),
        ("adding-machine unit facts", adding_machine_facts),
        ("dihedral fixture", dihedral_fixture),
        ("conjugacy suite", conjugacy_suite),
        ("measure/permutation invariance", measure_invariance),
        ("finite-depth realization suite", appl_suite),
        ("exhaustive enumeration", enumeration),
        ("round trips", round_trips),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
