//! Plain-text rendering. Dyadics are shown as decimals next to `p/2^n`.

use std::fmt::{Display, Write};

use odometer_core::analysis::{
    ApplResult, ClassificationReport, CrosscheckOutcome, EnumerationTable, Span, VerifySummary,
};
use odometer_core::correspondence::ConjugacyOutcome;
use odometer_core::{BoundaryPoint, Dyadic, OrderBound, RotatedOdometer, TreeAutomorphism};

fn dy(d: &Dyadic) -> String {
    if d.exponent() == 0 {
        d.to_string()
    } else {
        format!("{} = {}", d.to_decimal_string(), d)
    }
}

fn span(s: &Span) -> String {
    format!(
        "[{}, {}) = {}",
        s.left.to_decimal_string(),
        s.right.to_decimal_string(),
        s
    )
}

fn cycle(c: &[usize]) -> String {
    let inner: Vec<String> = c.iter().map(|s| s.to_string()).collect();
    format!("({})", inner.join(" "))
}

fn oracle_line(out: &mut String, oracle: &CrosscheckOutcome) {
    match oracle {
        CrosscheckOutcome::Pass {
            level,
            bound,
            intervals,
        } => writeln!(
            out,
            "oracle: pass ({intervals} intervals of level {level}, bound {bound})"
        ),
        CrosscheckOutcome::Mismatch {
            interval,
            predicted,
            observed,
        } => writeln!(
            out,
            "oracle: MISMATCH on {interval}: predicted {predicted}, observed {observed}"
        ),
    }
    .unwrap();
}

pub fn report(r: &ClassificationReport, oracle: Option<&CrosscheckOutcome>) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "N = {}, π = {}", r.n, r.pi).unwrap();
    writeln!(w, "root product τ_N∘π = {}", r.root_product).unwrap();
    writeln!(
        w,
        "minimal part: cylinders {}, |S| = {}, measure {}",
        cycle(&r.minimal.cylinders),
        r.minimal.s_size,
        dy(&r.minimal.measure)
    )
    .unwrap();
    for s in &r.minimal.intervals {
        writeln!(w, "  {}", span(s)).unwrap();
    }
    if r.periodic.is_empty() {
        writeln!(w, "no periodic part: F_π is minimal").unwrap();
    }
    for p in &r.periodic {
        writeln!(
            w,
            "periodic part: period {} on cylinders {}, measure {}",
            p.period,
            cycle(&p.symbols),
            dy(&p.measure)
        )
        .unwrap();
        for s in &p.intervals {
            writeln!(w, "  {}", span(s)).unwrap();
        }
    }
    if let Some(n0) = r.n0 {
        writeln!(w, "longest period 2^{n0}").unwrap();
    }
    if let Some(o) = oracle {
        oracle_line(w, o);
    }
    out
}

pub fn orbit(od: &RotatedOdometer, points: &[Dyadic]) -> String {
    let mut out = format!("N = {}, π = {}\n", od.n(), od.pi());
    for (k, x) in points.iter().enumerate() {
        writeln!(out, "{k:>4}  {}", dy(x)).unwrap();
    }
    out
}

pub fn boundary_orbit(points: &[BoundaryPoint]) -> String {
    let mut out = String::new();
    for (k, b) in points.iter().enumerate() {
        writeln!(out, "{k:>4}  {b}").unwrap();
    }
    out
}

pub fn verify(s: &VerifySummary) -> String {
    let mut out = format!(
        "N = {}, π = {}, seed {}: {} starting points, {} steps, depth {}\n",
        s.n, s.pi, s.seed, s.points, s.steps, s.depth
    );
    match &s.conjugacy {
        ConjugacyOutcome::Pass => writeln!(out, "conjugacy: pass").unwrap(),
        ConjugacyOutcome::Counterexample(c) => writeln!(
            out,
            "conjugacy: COUNTEREXAMPLE from {} at step {}: interval side {}, tree side {}",
            c.start, c.step, c.interval_side, c.tree_side
        )
        .unwrap(),
    }
    oracle_line(&mut out, &s.oracle);
    writeln!(out, "{}", if s.passed { "PASS" } else { "FAIL" }).unwrap();
    out
}

fn list(items: &[impl Display]) -> String {
    let items: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    format!("[{}]", items.join(", "))
}

pub fn enumeration(t: &EnumerationTable) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<width$}  {:<8} {:>4}  {:<12} λ(I_per)",
        "π",
        "minimal",
        "|S|",
        "periods",
        width = 3 * (1 << t.n)
    )
    .unwrap();
    for row in &t.rows {
        writeln!(
            out,
            "{:<width$}  {:<8} {:>4}  {:<12} {}",
            row.pi.image_notation(),
            if row.is_minimal { "yes" } else { "no" },
            row.s_size,
            list(&row.periods),
            dy(&row.periodic_measure),
            width = 3 * (1 << t.n)
        )
        .unwrap();
    }
    writeln!(
        out,
        "{} rows, {} minimal; |S| counts: {:?}",
        t.rows.len(),
        t.minimal_count,
        t.s_size_counts
    )
    .unwrap();
    out
}

pub fn automaton(g: &TreeAutomorphism) -> String {
    let tuple: Vec<String> = g
        .tuple()
        .iter()
        .map(|s| s.to_file().initial)
        .collect();
    format!(
        "root permutation {}\ntuple ({})\n{}",
        g.root_perm(),
        tuple.join(", "),
        g.to_json()
    )
}

pub fn appl(r: &ApplResult) -> String {
    let mut out = format!("m = {}, π = {}\n", r.m, r.pi);
    out.push_str(&report(&r.report, Some(&r.oracle)));
    let yes = |b: bool| if b { "yes" } else { "NO" };
    writeln!(out, "tree model graft(a)∘graft(g) matches: {}", yes(r.grafted_model_matches)).unwrap();
    writeln!(out, "tree model graft(a∘g) matches: {}", yes(r.binary_model_matches)).unwrap();
    match &r.counterexample {
        None => writeln!(
            out,
            "orbit comparison: pass ({} points, seed {})",
            r.sampled_points, r.seed
        ),
        Some(c) => writeln!(
            out,
            "orbit comparison: COUNTEREXAMPLE from {} at step {}",
            c.start, c.step
        ),
    }
    .unwrap();
    writeln!(out, "periods are powers of 2: {}", yes(r.periods_powers_of_two)).unwrap();
    let evidence = match r.order_evidence {
        OrderBound::Finite(k) => format!("finite order {k}"),
        OrderBound::AtLeast(k) => format!("order at least {k} at level {}", r.order_depth),
    };
    writeln!(out, "a∘g: {evidence}; infinite order: {}", yes(r.infinite_order)).unwrap();
    writeln!(out, "{}", if r.passed { "PASS" } else { "FAIL" }).unwrap();
    out
}

pub fn decoded(b: &BoundaryPoint, value: &impl Display, dyadic: Option<&Dyadic>, preimage: bool) -> String {
    let mut out = format!("{b} codes {value}");
    if let Some(d) = dyadic {
        write!(out, " ({})", dy(d)).unwrap();
    }
    if !preimage {
        out.push_str(", a doubled point with no preimage in [0,1)");
    }
    out.push('\n');
    out
}
