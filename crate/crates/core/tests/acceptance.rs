//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invround::fractional::config_lp::{solve_config_lp, solve_config_lp_capped};
use invround::fractional::lovasz_cp::solve_lovasz;
use invround::fractional::paths::{fps_cost, fps_from_sets, InstanceMetric};
use invround::gen::{generate, random_oracle, GenKind, GenParams, WindowStyle};
use invround::model::{set_of, set_solution_value, CostOracle, CoverInstance, FractionalSetSolution, Problem};
use invround::num::{self, Rational};
use invround::oracle::{brute_force_capped, ratio_report};
use invround::pipeline::{solve, PartKind, SolveOptions, SolveOutput};
use invround::reduce::{split_left_right, sparsify, well_separated_groups};
use invround::round_irp::{default_k, round_irp, IrpOptions};
use invround::round_sjrp::lovasz::{find_supported_theta, lovasz_value, top_set};
use invround::{verify, Error};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ tag)
}

/// log2 log2 T as a real, with T floored at 4.
fn loglog_real(t: usize) -> f64 {
    (t.max(4) as f64).log2().log2()
}

fn pick_style(r: &mut ChaCha8Rng) -> WindowStyle {
    if r.gen_bool(0.5) {
        WindowStyle::LeftAligned
    } else {
        WindowStyle::Arbitrary
    }
}

/// A feasible fractional solution: each window gets unit coverage spread
/// over 1–3 random days, each set holding its item plus random others.
fn random_y(ci: &CoverInstance, r: &mut ChaCha8Rng) -> FractionalSetSolution {
    let mut y = FractionalSetSolution::new();
    for w in &ci.windows {
        let k = r.gen_range(1..=3i64);
        for _ in 0..k {
            let day = r.gen_range(w.start..=w.end);
            let mut items = vec![w.item];
            items.extend((0..ci.n_items).filter(|_| r.gen_bool(0.3)));
            y.add(day, set_of(&items), num::ratio(1, k));
        }
    }
    y
}

// ---------------------------------------------------------------------------
// 1, 2, 9: feasibility sweep, rounding bound, termination
// ---------------------------------------------------------------------------

struct Sweep {
    sjrp_runs: usize,
    sjrp_clean: usize,
    irp_runs: usize,
    irp_clean: usize,
    irp_terminated: usize,
    bound_checks: usize,
    bound_violations: Vec<String>,
    failures: Vec<String>,
    seconds: f64,
}

fn sweep() -> Sweep {
    let start = Instant::now();
    let mut s = Sweep {
        sjrp_runs: 0,
        sjrp_clean: 0,
        irp_runs: 0,
        irp_clean: 0,
        irp_terminated: 0,
        bound_checks: 0,
        bound_violations: Vec::new(),
        failures: Vec::new(),
        seconds: 0.0,
    };
    let mut r = rng(1);
    for i in 0..2000u64 {
        let irp = i >= 1000;
        let kind = if irp { GenKind::Irp } else { GenKind::SUBMODULAR[i as usize % 4] };
        let n = r.gen_range(1..=if irp { 12 } else { 16 });
        let horizon = if r.gen_bool(0.5) { 4 } else { 16 };
        let p = GenParams { kind, n, horizon, seed: i, style: pick_style(&mut r) };
        let ci = generate(&p).expect("generator");
        let problem = Problem::Cover(ci);
        let res = solve(&problem, &SolveOptions { seed: i, ..Default::default() });
        if irp {
            s.irp_runs += 1;
        } else {
            s.sjrp_runs += 1;
        }
        let label = format!("{} n={n} T={horizon} seed={i} {:?}", kind.name(), p.style);
        let out = match res {
            Ok(o) => o,
            Err(e) => {
                if irp && !matches!(e, Error::NonTermination { .. }) {
                    s.irp_terminated += 1;
                }
                s.failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        if irp {
            s.irp_terminated += 1;
        }
        match verify::verify(&problem, &out.solution) {
            Ok(rep) if rep.is_clean() => {
                if irp {
                    s.irp_clean += 1
                } else {
                    s.sjrp_clean += 1
                }
            }
            Ok(rep) => s.failures.push(format!("{label}: {}", rep.violations.join("; "))),
            Err(e) => s.failures.push(format!("{label}: {e}")),
        }
        if !irp {
            check_bounds(&out, &label, &mut s);
        }
    }
    s.seconds = start.elapsed().as_secs_f64();
    s
}

fn check_bounds(out: &SolveOutput, label: &str, s: &mut Sweep) {
    for part in out.solution.parts.iter().filter(|p| p.kind == PartKind::Piece) {
        s.bound_checks += 1;
        match (&part.cost, &part.bound) {
            (Some(c), Some(b)) if c <= b => {}
            (Some(c), Some(b)) => s
                .bound_violations
                .push(format!("{label}: cost {} > bound {}", num::format(c), num::format(b))),
            _ => s.bound_violations.push(format!("{label}: piece without cost/bound")),
        }
    }
}

fn criterion_1(s: &Sweep) -> Outcome {
    let ok = s.sjrp_clean == s.sjrp_runs && s.irp_clean == s.irp_runs && s.seconds < 600.0;
    let mut d = format!(
        "sjrp {}/{} clean, irp {}/{} clean, {:.1}s",
        s.sjrp_clean, s.sjrp_runs, s.irp_clean, s.irp_runs, s.seconds
    );
    if let Some(f) = s.failures.first() {
        d.push_str(&format!("; first failure: {f}"));
    }
    outcome(ok, d)
}

fn criterion_2(s: &Sweep) -> Outcome {
    let mut d = format!("{} rounding runs, {} over bound", s.bound_checks, s.bound_violations.len());
    if let Some(f) = s.bound_violations.first() {
        d.push_str(&format!("; first: {f}"));
    }
    outcome(s.bound_violations.is_empty() && s.bound_checks > 0 && s.sjrp_clean == s.sjrp_runs, d)
}

fn criterion_9(s: &Sweep) -> Outcome {
    let rate = s.irp_terminated as f64 / s.irp_runs as f64;
    outcome(rate >= 0.99, format!("{}/{} runs within the iteration cap ({rate:.3})", s.irp_terminated, s.irp_runs))
}

// ---------------------------------------------------------------------------
// 3: concentration dichotomy
// ---------------------------------------------------------------------------

/// Modular oracle with weights B^i on levels x_i = 1 − i·δ, δ = α/(32·s):
/// level-set costs grow geometrically as θ falls, the regime where no level
/// set is supported.
fn steep_case(r: &mut ChaCha8Rng, j: u32) -> (CoverInstance, Vec<Rational>) {
    let s = r.gen_range(1..=2i64);
    let steps = 32 * s * (1 << j);
    let n = steps as usize;
    let base = num::int(1i64 << r.gen_range(1..=40));
    let mut w = Rational::one();
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        weights.push(w.clone());
        w *= &base;
    }
    let oracle = CostOracle::ModularWithBase { base: Rational::zero(), weights };
    let x = (0..steps).map(|i| Rational::one() - num::ratio(i, steps)).collect();
    (CoverInstance::new(n, 4, vec![], oracle).unwrap(), x)
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let (mut supported, mut concentrated, mut nonempty_top) = (0, 0, 0);
    let mut violations = Vec::new();
    for i in 0..500 {
        // α = 2^-j keeps 2^{1/α} an exact integer.
        let j = r.gen_range(0..=3u32);
        let (ci, x) = if i % 2 == 0 {
            steep_case(&mut r, j.min(1))
        } else {
            let kind = GenKind::SUBMODULAR[(i / 2) % 4];
            let n = r.gen_range(1..=8);
            let ci = CoverInstance::new(n, 4, vec![], random_oracle(kind, n, &mut r)).unwrap();
            let denom = [4i64, 8, 16, 64][r.gen_range(0..4)];
            let x = (0..n)
                .map(|_| if r.gen_bool(0.3) { Rational::one() } else { num::ratio(r.gen_range(0..=denom), denom) })
                .collect();
            (ci, x)
        };
        let j = if i % 2 == 0 { j.min(1) } else { j };
        let alpha = num::ratio(1, 1 << j);
        let theta = find_supported_theta(&ci, &x, &(&alpha / num::int(32))).unwrap();
        if theta.is_some() {
            supported += 1;
            continue;
        }
        concentrated += 1;
        let top = top_set(&x);
        if !top.is_empty() {
            nonempty_top += 1;
        }
        let lhs = num::int(1i64 << (1u32 << j)) * ci.cost_of(&top).unwrap();
        let rhs = lovasz_value(&ci, &x).unwrap();
        if lhs > rhs {
            violations.push(format!("case {i}: {} > {}", num::format(&lhs), num::format(&rhs)));
        }
    }
    let mut d = format!(
        "500 triples: {supported} with a supported level, {concentrated} without \
         ({nonempty_top} with nonempty L_1), {} violations",
        violations.len()
    );
    if let Some(f) = violations.first() {
        d.push_str(&format!("; first: {f}"));
    }
    outcome(violations.is_empty(), d)
}

// ---------------------------------------------------------------------------
// 4: reduction constants
// ---------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut bad = Vec::new();

    let mut split_cases = 0;
    while split_cases < 300 {
        let kind = GenKind::ALL[split_cases % 5];
        let n = r.gen_range(1..=5);
        let horizon = [8, 16][r.gen_range(0..2)];
        let p = GenParams { kind, n, horizon, seed: 4000 + split_cases as u64, style: WindowStyle::Arbitrary };
        let ci = generate(&p).unwrap();
        let lp = solve_config_lp(&ci).unwrap();
        let (left, right) = split_left_right(&ci, &lp.y).unwrap();
        let mut combined = Rational::zero();
        for piece in [&left, &right] {
            if !piece.instance.windows.is_empty() {
                combined += solve_config_lp(&piece.instance).unwrap().value;
            }
        }
        if combined > num::int(4) * &lp.value {
            bad.push(format!("split case {split_cases}: {} > 4 × {}", num::format(&combined), num::format(&lp.value)));
        }
        split_cases += 1;
    }

    for case in 0..300 {
        let kind = GenKind::ALL[case % 5];
        let n = r.gen_range(1..=5);
        let horizon = [8, 16][r.gen_range(0..2)];
        let p = GenParams { kind, n, horizon, seed: 5000 + case as u64, style: pick_style(&mut r) };
        let ci = generate(&p).unwrap();
        let y = if case % 2 == 0 { solve_config_lp(&ci).unwrap().y } else { random_y(&ci, &mut r) };
        let before = set_solution_value(&y, &ci).unwrap();
        let sparse = sparsify(&y, &ci).unwrap();
        let after = set_solution_value(&sparse, &ci).unwrap();
        if after > num::int(2) * &before {
            bad.push(format!("sparsify case {case}: {} > 2 × {}", num::format(&after), num::format(&before)));
        }
        if sparse.check_feasible(&ci).is_err() {
            bad.push(format!("sparsify case {case}: result infeasible"));
        }
    }

    for case in 0..300 {
        let kind = GenKind::SUBMODULAR[case % 4];
        let n = r.gen_range(1..=10);
        let ci = CoverInstance::new(n, 4, vec![], random_oracle(kind, n, &mut r)).unwrap();
        let groups = well_separated_groups(&ci).unwrap();
        for _ in 0..8 {
            let s: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
            let whole = ci.cost_of(&s).unwrap();
            let mut parts = Rational::zero();
            for g in &groups {
                let sub: Vec<usize> = s.iter().copied().filter(|v| g.contains(v)).collect();
                parts += ci.cost_of(&sub).unwrap();
            }
            if parts > num::int(3) * &whole {
                bad.push(format!("well-separated case {case}: {} > 3 × {}", num::format(&parts), num::format(&whole)));
            }
        }
    }
    let mut d = format!("split 300, sparsify 300, well-separated 300 cases; {} violations", bad.len());
    if let Some(f) = bad.first() {
        d.push_str(&format!("; first: {f}"));
    }
    outcome(bad.is_empty(), d)
}

// ---------------------------------------------------------------------------
// 5: exhaustive ratios
// ---------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    for kind in GenKind::ALL {
        let mut max_opt: f64 = 0.0;
        let mut max_lp: f64 = 0.0;
        let mut gaps = 0;
        for seed in 0..200u64 {
            let n = r.gen_range(1..=6);
            let horizon = r.gen_range(1..=8);
            let p = GenParams { kind, n, horizon, seed: 50_000 + seed, style: pick_style(&mut r) };
            let ci = generate(&p).unwrap();
            let out = match solve(&Problem::Cover(ci.clone()), &SolveOptions { seed, ..Default::default() }) {
                Ok(o) => o,
                Err(e) => {
                    bad.push(format!("{} seed {seed}: {e}", kind.name()));
                    continue;
                }
            };
            let (_, opt) = brute_force_capped(&ci, u64::MAX).unwrap();
            let alg = &out.solution.cost;
            let lp = &out.solution.lp_value;
            let rep = ratio_report(alg, Some(&opt), lp);
            if !(lp <= &opt && &opt <= alg) {
                bad.push(format!(
                    "{} seed {seed}: lp {} opt {} alg {}",
                    kind.name(),
                    num::format(lp),
                    num::format(&opt),
                    num::format(alg)
                ));
                continue;
            }
            if lp < &opt {
                gaps += 1;
            }
            let ll = loglog_real(horizon);
            if let Some(x) = rep.alg_over_opt {
                max_opt = max_opt.max(x);
            }
            if let Some(x) = rep.alg_over_lp {
                max_lp = max_lp.max(x);
            }
            if kind == GenKind::Irp {
                let k = out.solution.parts.iter().filter_map(|p| p.k).max().unwrap_or(default_k(horizon));
                let limit = 8.0 * k as f64 * ll;
                if rep.alg_over_lp.is_some_and(|x| x > limit) {
                    bad.push(format!("irp seed {seed}: ALG/LP {:?} > {limit}", rep.alg_over_lp));
                }
            } else {
                let limit = 32.0 * ll + 1.0;
                if rep.alg_over_opt.is_some_and(|x| x > limit) {
                    bad.push(format!("{} seed {seed}: ALG/OPT {:?} > {limit}", kind.name(), rep.alg_over_opt));
                }
            }
        }
        lines.push(format!(
            "{} max ALG/OPT {max_opt:.4} max ALG/LP {max_lp:.4} ({gaps} with LP < OPT)",
            kind.name()
        ));
    }
    let mut d = format!("{}; {} violations", lines.join(", "), bad.len());
    if let Some(f) = bad.first() {
        d.push_str(&format!("; first: {f}"));
    }
    outcome(bad.is_empty(), d)
}

// ---------------------------------------------------------------------------
// 6: redundancy rate
// ---------------------------------------------------------------------------

/// Fine-grained fractional solution: each window's unit of coverage is split
/// into 8–40 equal pieces on random days, so sampling stays probabilistic.
fn fine_y(ci: &CoverInstance, r: &mut ChaCha8Rng) -> FractionalSetSolution {
    let mut y = FractionalSetSolution::new();
    for w in &ci.windows {
        let k = r.gen_range(8..=40i64);
        for _ in 0..k {
            let day = r.gen_range(w.start..=w.end);
            let mut items = vec![w.item];
            items.extend((0..ci.n_items).filter(|_| r.gen_bool(0.2)));
            y.add(day, set_of(&items), num::ratio(1, k));
        }
    }
    y
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let (mut iterations, mut edges, mut redundant) = (0usize, 0u64, 0u64);
    let mut instances = 0u64;
    while iterations < 2000 {
        let n = r.gen_range(3..=10);
        let horizon = [16, 256][r.gen_range(0..2)];
        let p = GenParams { kind: GenKind::Irp, n, horizon, seed: 60_000 + instances, style: WindowStyle::LeftAligned };
        instances += 1;
        let ci = generate(&p).unwrap();
        if !ci.nice {
            continue;
        }
        let fps = fps_from_sets(&fine_y(&ci, &mut r), &ci).unwrap();
        let out = round_irp(&ci, &fps, &IrpOptions { seed: instances, ..Default::default() }).unwrap();
        for it in out.iterations.iter().filter(|it| it.edges > 0) {
            iterations += 1;
            edges += it.edges as u64;
            redundant += it.fully_redundant as u64;
        }
    }
    let rate = redundant as f64 / edges as f64;
    outcome(
        rate >= 0.70,
        format!("{iterations} iterations over {instances} instances, {redundant}/{edges} path edges fully redundant ({rate:.3})"),
    )
}

// ---------------------------------------------------------------------------
// 7: Lovász program against the configuration LP
// ---------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for case in 0..100u64 {
        let kind = GenKind::SUBMODULAR[case as usize % 4];
        let n = r.gen_range(1..=6);
        let horizon = [4, 8, 16][r.gen_range(0..3)];
        let p = GenParams { kind, n, horizon, seed: 70_000 + case, style: pick_style(&mut r) };
        let ci = generate(&p).unwrap();
        let cfg = num::to_f64(&solve_config_lp_capped(&ci, 12).unwrap().value);
        let lov = num::to_f64(&solve_lovasz(&ci).unwrap().value);
        let rel = (lov - cfg).abs() / cfg.abs().max(1e-12);
        worst = worst.max(rel);
        if rel > 1e-6 {
            bad.push(format!("case {case}: lovász {lov} config {cfg}"));
        }
    }
    let mut d = format!("100 instances, worst relative gap {worst:.2e}");
    if let Some(f) = bad.first() {
        d.push_str(&format!("; first: {f}"));
    }
    outcome(bad.is_empty(), d)
}

// ---------------------------------------------------------------------------
// 8: path solution from set solution
// ---------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for case in 0..300u64 {
        let n = r.gen_range(1..=8);
        let horizon = [4, 16][r.gen_range(0..2)];
        let p = GenParams { kind: GenKind::Irp, n, horizon, seed: 80_000 + case, style: pick_style(&mut r) };
        let ci = generate(&p).unwrap();
        let y = if case % 2 == 0 { solve_config_lp(&ci).unwrap().y } else { random_y(&ci, &mut r) };
        let value = set_solution_value(&y, &ci).unwrap();
        let fps = fps_from_sets(&y, &ci).unwrap();
        let m = InstanceMetric::from_instance(&ci).unwrap();
        let cost = fps_cost(&fps, &m);
        if !value.is_zero() {
            worst = worst.max(num::to_f64(&(&cost / &value)));
        }
        if cost > num::int(2) * &value {
            bad.push(format!("case {case}: {} > 2 × {}", num::format(&cost), num::format(&value)));
        }
    }
    let mut d = format!("300 cases, worst cost ratio {worst:.4}");
    if let Some(f) = bad.first() {
        d.push_str(&format!("; first: {f}"));
    }
    outcome(bad.is_empty(), d)
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let s = sweep();
    results.push(("1 feasibility sweep", criterion_1(&s)));
    results.push(("2 submodular rounding bound", criterion_2(&s)));
    results.push(("3 concentration dichotomy", criterion_3()));
    results.push(("4 reduction constants", criterion_4()));
    results.push(("5 exhaustive ratios", criterion_5()));
    results.push(("6 redundancy rate", criterion_6()));
    results.push(("7 relaxation equivalence", criterion_7()));
    results.push(("8 path solution cost", criterion_8()));
    results.push(("9 termination", criterion_9(&s)));
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
