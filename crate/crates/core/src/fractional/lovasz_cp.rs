//! The Lovász-extension convex program: minimize Σ_t f̂(x^t) subject to unit
//! coverage of every window.
//!
//! A projected subgradient phase (one window per item) gives a warm start; a
//! Kelley cutting-plane phase over greedy base-polytope vertices then closes
//! the gap to the requested relative tolerance. The result is rationalized on
//! a dyadic grid and repaired so every window constraint holds exactly.

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};
use num_traits::{One, Zero};

use super::vector::FractionalVectorSolution;
use crate::error::{Error, Result};
use crate::model::{CoverInstance, ItemId};
use crate::num::{self, Rational};

#[derive(Clone, Debug)]
pub struct LovaszOptions {
    /// Relative optimality tolerance of the cutting-plane phase.
    pub tolerance: f64,
    /// Subgradient iterations; `None` means 10·N·T.
    pub subgradient_iterations: Option<usize>,
    pub max_rounds: usize,
}

impl Default for LovaszOptions {
    fn default() -> Self {
        LovaszOptions { tolerance: 1e-8, subgradient_iterations: None, max_rounds: 5000 }
    }
}

#[derive(Clone, Debug)]
pub struct LovaszSolution {
    pub x: FractionalVectorSolution,
    /// Σ_t f̂(x^t), exact.
    pub value: Rational,
    /// Lower bound from the final cutting-plane master problem.
    pub lower_bound: f64,
    pub rounds: usize,
}

struct Layout {
    /// days[v]: sorted days on which item v has a variable.
    days: Vec<Vec<usize>>,
    /// items[t-1]: items with a variable on day t.
    items: Vec<Vec<ItemId>>,
    single_window: bool,
}

fn layout(ci: &CoverInstance) -> Layout {
    let mut days = vec![Vec::new(); ci.n_items];
    let mut count = vec![0usize; ci.n_items];
    for w in &ci.windows {
        count[w.item] += 1;
        days[w.item].extend(w.start..=w.end);
    }
    for d in days.iter_mut() {
        d.sort_unstable();
        d.dedup();
    }
    let mut items = vec![Vec::new(); ci.horizon];
    for (v, ds) in days.iter().enumerate() {
        for &t in ds {
            items[t - 1].push(v);
        }
    }
    Layout { days, items, single_window: count.iter().all(|&c| c <= 1) }
}

/// Greedy vertex of the base polytope for the order of `x` on `items`,
/// together with f̂ at that point.
fn greedy(ci: &CoverInstance, items: &[ItemId], x: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| x[b].partial_cmp(&x[a]).unwrap().then(a.cmp(&b)));
    let mut s = vec![0.0; items.len()];
    let mut prefix: Vec<ItemId> = Vec::with_capacity(items.len());
    let mut prev = 0.0;
    let mut value = 0.0;
    for &k in &order {
        prefix.push(items[k]);
        let cur = ci.cost_f64(&prefix);
        s[k] = cur - prev;
        value += s[k] * x[k];
        prev = cur;
    }
    (s, value)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut tau = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
}

/// x as per-day vectors aligned with `layout.items`.
type DayVecs = Vec<Vec<f64>>;

fn objective(ci: &CoverInstance, lay: &Layout, x: &DayVecs) -> f64 {
    (0..ci.horizon).map(|i| greedy(ci, &lay.items[i], &x[i]).1).sum()
}

fn pos(lay: &Layout, t: usize, v: ItemId) -> usize {
    lay.items[t - 1].binary_search(&v).expect("variable exists")
}

fn subgradient(ci: &CoverInstance, lay: &Layout, iters: usize) -> DayVecs {
    let mut x: DayVecs = lay.items.iter().map(|it| vec![0.0; it.len()]).collect();
    for (v, ds) in lay.days.iter().enumerate() {
        for &t in ds {
            x[t - 1][pos(lay, t, v)] = 1.0 / ds.len() as f64;
        }
    }
    let mut best = x.clone();
    let mut best_val = objective(ci, lay, &x);
    for k in 1..=iters {
        let grads: Vec<Vec<f64>> = (0..ci.horizon).map(|i| greedy(ci, &lay.items[i], &x[i]).0).collect();
        let gmax = grads.iter().flatten().fold(0f64, |m, g| m.max(g.abs()));
        if gmax == 0.0 {
            break;
        }
        let step = 0.5 / (gmax * (k as f64).sqrt());
        for (v, ds) in lay.days.iter().enumerate() {
            if ds.is_empty() {
                continue;
            }
            let mut z: Vec<f64> = ds
                .iter()
                .map(|&t| {
                    let p = pos(lay, t, v);
                    x[t - 1][p] - step * grads[t - 1][p]
                })
                .collect();
            project_simplex(&mut z);
            for (&t, zi) in ds.iter().zip(z) {
                let p = pos(lay, t, v);
                x[t - 1][p] = zi;
            }
        }
        let val = objective(ci, lay, &x);
        if val < best_val {
            best_val = val;
            best = x.clone();
        }
    }
    best
}

pub fn solve_lovasz(ci: &CoverInstance) -> Result<LovaszSolution> {
    solve_lovasz_with(ci, &LovaszOptions::default())
}

pub fn solve_lovasz_with(ci: &CoverInstance, opts: &LovaszOptions) -> Result<LovaszSolution> {
    if !ci.oracle.is_submodular() {
        return Err(Error::UnsupportedOracle(format!(
            "the Lovász program needs a submodular oracle, got {}",
            ci.oracle.kind_name()
        )));
    }
    let lay = layout(ci);
    let horizon = ci.horizon;
    let iters = opts.subgradient_iterations.unwrap_or(10 * ci.n_items * horizon);
    let warm = if lay.single_window && iters > 0 { Some(subgradient(ci, &lay, iters)) } else { None };

    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let xv: Vec<Vec<Variable>> =
        lay.items.iter().map(|it| it.iter().map(|_| pb.add_var(0.0, (0.0, 1.0))).collect()).collect();
    let zv: Vec<Option<Variable>> =
        lay.items.iter().map(|it| (!it.is_empty()).then(|| pb.add_var(1.0, (0.0, f64::INFINITY)))).collect();
    for w in &ci.windows {
        let expr: LinearExpr = (w.start..=w.end).map(|t| (xv[t - 1][pos(&lay, t, w.item)], 1.0)).collect();
        let op = if lay.single_window { ComparisonOp::Eq } else { ComparisonOp::Ge };
        pb.add_constraint(expr, op, 1.0);
    }
    let cut = |t: usize, s: &[f64]| -> LinearExpr {
        let mut e = LinearExpr::empty();
        e.add(zv[t - 1].unwrap(), 1.0);
        for (k, &sk) in s.iter().enumerate() {
            if sk != 0.0 {
                e.add(xv[t - 1][k], -sk);
            }
        }
        e
    };
    let mut seeds: Vec<DayVecs> = Vec::new();
    if let Some(w) = &warm {
        seeds.push(w.clone());
    }
    seeds.push(lay.items.iter().map(|it| vec![1.0; it.len()]).collect());
    for x in &seeds {
        for t in 1..=horizon {
            if zv[t - 1].is_some() {
                let (s, _) = greedy(ci, &lay.items[t - 1], &x[t - 1]);
                pb.add_constraint(cut(t, &s), ComparisonOp::Ge, 0.0);
            }
        }
    }
    let mut sol = pb.solve().map_err(|e| Error::Solver(format!("cutting-plane master: {e}")))?;
    let mut best: Option<(f64, DayVecs)> = warm.map(|w| (objective(ci, &lay, &w), w));
    let mut lower = sol.objective();
    let mut rounds = 0;
    while rounds < opts.max_rounds {
        rounds += 1;
        let x: DayVecs = xv.iter().map(|row| row.iter().map(|&v| sol.var_value(v).clamp(0.0, 1.0)).collect()).collect();
        lower = sol.objective();
        let mut upper = 0.0;
        let mut cuts = Vec::new();
        for t in 1..=horizon {
            let Some(z) = zv[t - 1] else { continue };
            let (s, val) = greedy(ci, &lay.items[t - 1], &x[t - 1]);
            upper += val;
            if val > sol.var_value(z) + 1e-12 * (1.0 + val.abs()) {
                cuts.push((t, s));
            }
        }
        if best.as_ref().is_none_or(|(b, _)| upper < *b) {
            best = Some((upper, x));
        }
        let ub = best.as_ref().unwrap().0;
        if ub - lower <= opts.tolerance * ub.abs().max(1e-12) || cuts.is_empty() {
            break;
        }
        for (t, s) in cuts {
            sol = sol
                .add_constraint(cut(t, &s), ComparisonOp::Ge, 0.0)
                .map_err(|e| Error::Solver(format!("cutting-plane cut: {e}")))?;
        }
    }
    let (_, xbest) = best.expect("at least one round");
    let x = rationalize(ci, &lay, &xbest);
    let value = x.value(ci)?;
    Ok(LovaszSolution { x, value, lower_bound: lower, rounds })
}

/// Snaps to the 2^-32 grid and repairs each window to mass exactly one
/// (one window per item) or at least one (several windows).
fn rationalize(ci: &CoverInstance, lay: &Layout, x: &DayVecs) -> FractionalVectorSolution {
    let mut out = FractionalVectorSolution::zeros(ci.horizon, ci.n_items);
    for t in 1..=ci.horizon {
        for (k, &v) in lay.items[t - 1].iter().enumerate() {
            out.x[t - 1][v] = num::from_f64_grid(x[t - 1][k].clamp(0.0, 1.0), 32);
        }
    }
    for w in &ci.windows {
        let mass = out.window_mass(w.item, w.start, w.end);
        let deficit = Rational::one() - &mass;
        if deficit.is_zero() || (!lay.single_window && deficit < Rational::zero()) {
            continue;
        }
        // Largest entry absorbs the residual.
        let tmax = (w.start..=w.end).max_by(|&a, &b| out.x[a - 1][w.item].cmp(&out.x[b - 1][w.item])).unwrap();
        let cell = &mut out.x[tmax - 1][w.item];
        *cell += deficit;
        if *cell > Rational::one() {
            *cell = Rational::one();
        }
        if *cell < Rational::zero() {
            *cell = Rational::zero();
        }
    }
    out
}
