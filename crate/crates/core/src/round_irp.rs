//! Randomized iterative rounding of fractional path solutions for Steiner
//! tree over time.
//!
//! Each iteration samples paths into the day trees, shortcuts every path to
//! the nodes whose reap phase contains its day, doubles the weights, deletes
//! fully redundant edges and moves the resulting subpaths to earlier days on
//! which their heads are already connected.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{infeasible, malformed, Error, Result};
use crate::fractional::{FractionalPathSolution, InstanceMetric, WeightedPath};
use crate::intervals::{interval_level, log2_ceil, log2_exact, loglog};
use crate::model::{check_feasible, schedule_cost, CoverInstance, Day, ItemId, Schedule};
use crate::num::{self, serde_q, Rational};
use crate::rng::{substream, STREAM_SAMPLING};

/// Sow phase [a_v, m_v] and reap phase [m_v, b_v] of every item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SowReap {
    pub a: Vec<Day>,
    pub m: Vec<Day>,
    pub b: Vec<Day>,
}

impl SowReap {
    pub fn in_sow(&self, v: ItemId, t: Day) -> bool {
        self.a[v] <= t && t <= self.m[v]
    }

    pub fn in_reap(&self, v: ItemId, t: Day) -> bool {
        self.m[v] <= t && t <= self.b[v]
    }
}

/// Items lying in a day tree during their sow phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerminationState {
    pub germinated: Vec<bool>,
}

fn window_of(ci: &CoverInstance) -> Result<Vec<(Day, Day)>> {
    let mut w = vec![None; ci.n_items];
    for win in &ci.windows {
        if w[win.item].replace((win.start, win.end)).is_some() {
            return malformed("path rounding needs one window per item");
        }
    }
    w.into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::Malformed(format!("item {v} has no window"))))
        .collect()
}

/// Connectivity table mass[v][t-1]; assumes every path head lies in its tree.
fn mass_table(fps: &FractionalPathSolution, n: usize) -> Vec<Vec<Rational>> {
    let horizon = fps.horizon();
    let mut mass = vec![vec![Rational::zero(); horizon]; n];
    for t in 1..=horizon {
        let tree = &fps.trees[t - 1];
        for v in 0..n {
            if tree.contains(v) {
                mass[v][t - 1] = Rational::one();
            }
        }
        for p in &fps.paths[t - 1] {
            let mut seen: Vec<usize> = p.nodes.iter().copied().filter(|&u| u < n && !tree.contains(u)).collect();
            seen.sort_unstable();
            seen.dedup();
            for u in seen {
                mass[u][t - 1] += &p.weight;
            }
        }
    }
    mass
}

/// m_v is the latest day with at least half a unit of connectivity from m_v
/// to the end of v's window.
pub fn sow_reap(fps: &FractionalPathSolution, ci: &CoverInstance) -> Result<SowReap> {
    let win = window_of(ci)?;
    let mass = mass_table(fps, ci.n_items);
    let half = num::half();
    let mut sr = SowReap { a: Vec::new(), m: Vec::new(), b: Vec::new() };
    for (v, &(a, b)) in win.iter().enumerate() {
        let total: Rational = (a..=b).map(|t| &mass[v][t - 1]).sum();
        if total < Rational::one() {
            return infeasible(format!("item {v} has connectivity {} < 1", num::format(&total)));
        }
        let mut tail = Rational::zero();
        let mut m = a;
        for t in (a..=b).rev() {
            tail += &mass[v][t - 1];
            if tail >= half {
                m = t;
                break;
            }
        }
        sr.a.push(a);
        sr.m.push(m);
        sr.b.push(b);
    }
    Ok(sr)
}

/// Smallest integer K with exp(−K·loglogT/2) ≤ 1/(8·logT).
pub fn default_k(horizon: usize) -> u32 {
    let logt = f64::from(log2_ceil(horizon).max(1));
    let ll = f64::from(loglog(horizon));
    (1..).find(|&k| (-(f64::from(k)) * ll / 2.0).exp() <= 1.0 / (8.0 * logt)).unwrap()
}

/// Includes each path independently with probability min(1, scale·w) and
/// adds the included ones to the day tree. Returns (count, added cost).
pub fn sample_step(
    fps: &mut FractionalPathSolution,
    m: &InstanceMetric,
    scale: &Rational,
    seed: u64,
    iteration: usize,
) -> (usize, Rational) {
    let mut count = 0;
    let mut added = Rational::zero();
    for t in 1..=fps.horizon() {
        let mut rng = substream(seed, STREAM_SAMPLING, ((iteration as u64) << 32) | t as u64);
        let (trees, paths) = (&mut fps.trees, &fps.paths);
        for p in &paths[t - 1] {
            let prob = (scale * &p.weight).min(Rational::one());
            let u: f64 = rng.gen();
            if prob.is_one() || u < num::to_f64(&prob) {
                count += 1;
                added += trees[t - 1].add_path(&p.nodes, m);
            }
        }
    }
    (count, added)
}

pub fn germination(fps: &FractionalPathSolution, sr: &SowReap) -> GerminationState {
    let germinated = (0..sr.m.len())
        .map(|v| (sr.a[v]..=sr.m[v]).any(|t| fps.trees[t - 1].contains(v)))
        .collect();
    GerminationState { germinated }
}

/// Shortcuts every path on day t past the non-head nodes whose reap phase
/// misses t, then doubles all weights.
pub fn reap_restrict(fps: &mut FractionalPathSolution, sr: &SowReap) {
    let n = sr.m.len();
    for t in 1..=fps.horizon() {
        for p in fps.paths[t - 1].iter_mut() {
            let head = p.head();
            let last = p.nodes.len() - 1;
            let nodes: Vec<usize> = p
                .nodes
                .iter()
                .enumerate()
                .filter(|&(i, &u)| i == last || u >= n || sr.in_reap(u, t))
                .map(|(_, &u)| u)
                .collect();
            debug_assert_eq!(*nodes.last().unwrap(), head);
            p.nodes = nodes;
            p.weight *= num::int(2);
        }
    }
}

/// Edges of `nodes` (edge k joins nodes[k] and nodes[k+1]) that are
/// i-redundant for every level i in 0..=max_level. One sweep from the tail,
/// keeping the last node seen at or below each level.
pub fn redundancy(nodes: &[usize], levels: &[u32], germ: &GerminationState, max_level: u32) -> Vec<bool> {
    let lv = |u: usize| levels.get(u).copied().unwrap_or(0);
    let ok = |u: usize| germ.germinated.get(u).copied().unwrap_or(true);
    let mut last: Vec<Option<usize>> = vec![None; max_level as usize + 1];
    let mut out = Vec::with_capacity(nodes.len().saturating_sub(1));
    for k in 0..nodes.len().saturating_sub(1) {
        let u = nodes[k];
        for slot in last.iter_mut().skip(lv(u) as usize) {
            *slot = Some(u);
        }
        out.push(last.iter().all(|x| x.is_none_or(ok)));
    }
    out
}

/// Splits every path at its fully redundant edges. The piece holding the
/// original head stays; every other piece moves to the latest day t' ≤ t in
/// its head's window on which the head lies in the tree. Returns
/// (edges, fully redundant edges, removed cost).
pub fn split_shift(
    fps: &mut FractionalPathSolution,
    m: &InstanceMetric,
    germ: &GerminationState,
    levels: &[u32],
    windows: &[(Day, Day)],
    max_level: u32,
) -> (usize, usize, Rational) {
    let horizon = fps.horizon();
    let mut moved: Vec<Vec<WeightedPath>> = vec![Vec::new(); horizon];
    let (mut edges, mut redundant) = (0usize, 0usize);
    let mut removed = Rational::zero();
    for t in 1..=horizon {
        for p in std::mem::take(&mut fps.paths[t - 1]) {
            let red = redundancy(&p.nodes, levels, germ, max_level);
            edges += red.len();
            let mut pieces = vec![vec![p.nodes[0]]];
            for (k, &r) in red.iter().enumerate() {
                if r {
                    redundant += 1;
                    removed += &p.weight * m.d(p.nodes[k], p.nodes[k + 1]);
                    pieces.push(Vec::new());
                }
                pieces.last_mut().unwrap().push(p.nodes[k + 1]);
            }
            let last = pieces.len() - 1;
            for (j, piece) in pieces.into_iter().enumerate() {
                if piece.len() < 2 {
                    continue;
                }
                if j == last {
                    moved[t - 1].push(WeightedPath { nodes: piece, weight: p.weight.clone() });
                    continue;
                }
                let v = *piece.last().unwrap();
                assert!(
                    piece.iter().all(|&u| levels[v] <= levels[u]),
                    "split head {v} does not have minimal level on its piece"
                );
                let (a, _) = windows[v];
                let day = (a..=t).rev().find(|&s| fps.trees[s - 1].contains(v));
                let day = day.unwrap_or_else(|| panic!("split head {v} is not connected on any day ≤ {t}"));
                moved[day - 1].push(WeightedPath { nodes: piece, weight: p.weight.clone() });
            }
        }
    }
    fps.paths = moved;
    (edges, redundant, removed)
}

/// Items lying in a tree on some day of their window.
fn done_items(fps: &FractionalPathSolution, windows: &[(Day, Day)]) -> Vec<bool> {
    windows.iter().enumerate().map(|(v, &(a, b))| (a..=b).any(|t| fps.trees[t - 1].contains(v))).collect()
}

/// Drops connected items from paths, removes single-node paths, merges
/// repeated paths and caps weights at one.
fn tidy(fps: &mut FractionalPathSolution, done: &[bool]) {
    let n = done.len();
    for ps in fps.paths.iter_mut() {
        let mut merged: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for p in ps.drain(..) {
            let last = p.nodes.len() - 1;
            let nodes: Vec<usize> =
                p.nodes.iter().enumerate().filter(|&(i, &u)| i == last || u >= n || !done[u]).map(|(_, &u)| u).collect();
            if nodes.len() >= 2 {
                *merged.entry(nodes).or_insert_with(Rational::zero) += p.weight;
            }
        }
        *ps = merged
            .into_iter()
            .map(|(nodes, w)| WeightedPath { nodes, weight: w.min(Rational::one()) })
            .collect();
    }
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct IrpOptions {
    /// Sampling constant; `None` applies [`default_k`].
    pub k: Option<u32>,
    pub seed: u64,
    /// Iteration cap; `None` means 64·log2(N+1).
    pub max_iterations: Option<usize>,
}


/// Per-iteration record.
#[derive(Clone, Debug, Serialize)]
pub struct IrpIteration {
    pub iteration: usize,
    pub sampled_paths: usize,
    #[serde(with = "serde_q")]
    pub added_tree_cost: Rational,
    #[serde(with = "serde_q")]
    pub removed_edge_cost: Rational,
    #[serde(with = "serde_q")]
    pub remaining_fractional_cost: Rational,
    pub edges: usize,
    pub fully_redundant: usize,
}

#[derive(Clone, Debug)]
pub struct IrpOutcome {
    pub schedule: Schedule,
    pub cost: Rational,
    pub tree_cost: Rational,
    pub k: u32,
    pub initial_fractional_cost: Rational,
    pub iterations: Vec<IrpIteration>,
}

impl IrpOutcome {
    pub fn trace_lines(&self) -> Vec<serde_json::Value> {
        self.iterations
            .iter()
            .map(|it| {
                let mut v = serde_json::to_value(it).unwrap();
                v["event"] = "irp-iteration".into();
                v
            })
            .collect()
    }
}

pub fn iteration_cap(n: usize) -> usize {
    (64.0 * ((n + 1) as f64).log2()).ceil() as usize
}

pub fn round_irp(ci: &CoverInstance, fps: &FractionalPathSolution, opts: &IrpOptions) -> Result<IrpOutcome> {
    if !ci.nice || !ci.satisfies_nice() {
        return malformed("the rounding needs a nice instance");
    }
    let m = InstanceMetric::from_instance(ci)?;
    if fps.horizon() != ci.horizon || fps.root != m.root {
        return malformed("path solution does not match the instance");
    }
    if !fps.heads_in_trees() {
        return malformed("a path head lies outside its day tree");
    }
    if let Some(w) = fps.deficient(ci).first() {
        return infeasible(format!("item {} has connectivity below 1 in its window", w.item));
    }
    let windows = window_of(ci)?;
    let levels: Vec<u32> = ci.windows.iter().fold(vec![0; ci.n_items], |mut l, w| {
        l[w.item] = interval_level(w.interval());
        l
    });
    let max_level = log2_exact(ci.horizon);
    let k = opts.k.unwrap_or_else(|| default_k(ci.horizon));
    let scale = num::int(i64::from(k) * i64::from(loglog(ci.horizon)));
    let cap = opts.max_iterations.unwrap_or_else(|| iteration_cap(ci.n_items));

    let mut fps = fps.clone();
    let mut done = done_items(&fps, &windows);
    tidy(&mut fps, &done);
    let initial_fractional_cost = fps.fractional_cost(&m);
    let mut iterations = Vec::new();
    while done.iter().any(|d| !d) {
        let it = iterations.len() + 1;
        if it > cap {
            let trace = iterations.iter().map(|r| serde_json::to_value(r).unwrap()).collect();
            return Err(Error::NonTermination { iterations: cap, trace });
        }
        let sr = sow_reap(&fps, ci)?;
        let (sampled_paths, added_tree_cost) = sample_step(&mut fps, &m, &scale, opts.seed, it);
        let germ = germination(&fps, &sr);
        done = done_items(&fps, &windows);
        reap_restrict(&mut fps, &sr);
        let mass = mass_table(&fps, ci.n_items);
        for v in (0..ci.n_items).filter(|&v| !done[v]) {
            let reap: Rational = (sr.m[v]..=sr.b[v]).map(|t| &mass[v][t - 1]).sum();
            assert!(reap >= Rational::one(), "item {v} lost connectivity in the reap restriction");
        }
        let (edges, fully_redundant, removed_edge_cost) =
            split_shift(&mut fps, &m, &germ, &levels, &windows, max_level);
        tidy(&mut fps, &done);
        let missing = fps.deficient(ci);
        assert!(missing.is_empty(), "split and shift broke connectivity: {missing:?}");
        iterations.push(IrpIteration {
            iteration: it,
            sampled_paths,
            added_tree_cost,
            removed_edge_cost,
            remaining_fractional_cost: fps.fractional_cost(&m),
            edges,
            fully_redundant,
        });
    }
    let mut schedule = Schedule::new();
    for (i, tree) in fps.trees.iter().enumerate() {
        schedule.add_set(i + 1, tree.nodes.iter().copied().filter(|&u| u != m.root));
    }
    schedule.prune();
    let missed = check_feasible(ci, &schedule);
    assert!(missed.is_empty(), "rounding left windows uncovered: {missed:?}");
    let cost = schedule_cost(ci, &schedule)?;
    let tree_cost = fps.tree_cost(&m);
    Ok(IrpOutcome { schedule, cost, tree_cost, k, initial_fractional_cost, iterations })
}
