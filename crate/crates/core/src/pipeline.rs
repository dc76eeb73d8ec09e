//! End-to-end solve: fractional relaxation, reductions to nice instances,
//! rounding of every piece and recombination.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fractional::{
    config_lp, fps_cost, fps_from_sets, normalize_windows, solve_inventory_lp, solve_lovasz, x_to_y, y_to_x,
    InstanceMetric,
};
use crate::model::{check_feasible, schedule_cost, CostOracle, CoverInstance, FractionalSetSolution, Problem, Schedule};
use crate::num::{self, serde_q, Rational};
use crate::reduce::{self, Lineage, Piece};
use crate::round_irp::{self, IrpOptions};
use crate::round_sjrp::{self, SjrpOptions};
use crate::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Sjrp,
    Irp,
    Auto,
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sjrp" => Ok(Algorithm::Sjrp),
            "irp" => Ok(Algorithm::Irp),
            "auto" => Ok(Algorithm::Auto),
            _ => Err(Error::Usage(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpChoice {
    Config,
    Lovasz,
    /// Configuration LP up to the size cap, the Lovász program beyond it.
    Auto,
}

impl FromStr for LpChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "config" => Ok(LpChoice::Config),
            "lovasz" => Ok(LpChoice::Lovasz),
            "auto" => Ok(LpChoice::Auto),
            _ => Err(Error::Usage(format!("unknown relaxation {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub lp: LpChoice,
    pub seed: u64,
    pub k: Option<u32>,
    pub alpha: Option<Rational>,
    pub lp_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: Algorithm::Auto,
            lp: LpChoice::Auto,
            seed: 0,
            k: None,
            alpha: None,
            lp_cap: config_lp::DEFAULT_LP_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartKind {
    Piece,
    Reset,
}

/// One contribution to the final schedule, in its own days and items.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub kind: PartKind,
    pub lineage: Lineage,
    pub schedule: Schedule,
    #[serde(default, with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub cost: Option<Rational>,
    /// Σ f̂(x) for the submodular rounding, the path-solution cost for the
    /// routing rounding.
    #[serde(default, with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub fractional: Option<Rational>,
    /// (32·log log T + 1) × Σ f̂(x) for the submodular rounding.
    #[serde(default, with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub bound: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

impl Part {
    fn reset(schedule: Schedule, lineage: Lineage) -> Part {
        Part {
            kind: PartKind::Reset,
            lineage,
            schedule,
            cost: None,
            fractional: None,
            bound: None,
            iterations: None,
            k: None,
        }
    }
}

/// Solution file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub algorithm: String,
    pub lp: String,
    pub seed: u64,
    pub schedule: Schedule,
    /// Objective: ordering cost, plus holding cost for inventory instances.
    #[serde(with = "serde_q")]
    pub cost: Rational,
    #[serde(default, with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub ordering_cost: Option<Rational>,
    #[serde(default, with = "serde_q::option", skip_serializing_if = "Option::is_none")]
    pub holding_cost: Option<Rational>,
    #[serde(with = "serde_q")]
    pub lp_value: Rational,
    pub alg_over_lp: Option<f64>,
    #[serde(default)]
    pub parts: Vec<Part>,
}

impl SolutionFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("solution file: {e}")))
    }
}

/// A nice instance handed to a rounding algorithm.
#[derive(Clone, Debug)]
pub struct SolvedPiece {
    pub piece: Piece,
    pub part: Part,
}

#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub solution: SolutionFile,
    pub trace: Vec<Value>,
    /// The cover instance the reductions started from.
    pub root: CoverInstance,
    pub root_y: FractionalSetSolution,
    pub pieces: Vec<SolvedPiece>,
}

fn resolve_algorithm(oracle: &CostOracle, a: Algorithm) -> Result<Algorithm> {
    let metric = matches!(oracle, CostOracle::MetricSteiner { .. });
    match (a, metric) {
        (Algorithm::Auto, true) | (Algorithm::Irp, true) => Ok(Algorithm::Irp),
        (Algorithm::Auto, false) | (Algorithm::Sjrp, false) => Ok(Algorithm::Sjrp),
        (Algorithm::Sjrp, true) => Err(Error::Usage("sjrp needs a submodular oracle; this one is metric-steiner".into())),
        (Algorithm::Irp, false) => {
            Err(Error::Usage(format!("irp needs a metric-steiner oracle, got {}", oracle.kind_name())))
        }
    }
}

/// Fractional solution of the cover relaxation: (y, value, relaxation name).
pub fn relax(ci: &CoverInstance, opts: &SolveOptions) -> Result<(FractionalSetSolution, Rational, &'static str)> {
    let use_config = match opts.lp {
        LpChoice::Config => true,
        LpChoice::Lovasz => false,
        LpChoice::Auto => ci.n_items <= opts.lp_cap || !ci.oracle.is_submodular(),
    };
    if use_config {
        let sol = config_lp::solve_config_lp_capped(ci, opts.lp_cap)?;
        Ok((sol.y, sol.value, "config"))
    } else {
        let sol = solve_lovasz(ci)?;
        Ok((x_to_y(&sol.x), sol.value, "lovasz"))
    }
}

fn child(parent: &Piece, p: Piece) -> Result<Piece> {
    let lineage = p.lineage.then(&parent.lineage)?;
    Ok(Piece { lineage, ..p })
}

/// Left-aligned pieces of `p`: itself, or its left part and mirrored right part.
fn align(p: Piece, trace: &mut Vec<Value>) -> Result<Vec<Piece>> {
    if p.instance.windows.is_empty() {
        return Ok(Vec::new());
    }
    if reduce::is_left_aligned(&p.instance) {
        return Ok(vec![p]);
    }
    let (l, r) = reduce::split_left_right(&p.instance, &p.y)?;
    let m = reduce::mirror(&r.instance, &r.y)?;
    trace.push(json!({
        "event": "split-left-right",
        "horizon": p.instance.horizon,
        "left_windows": l.instance.windows.len(),
        "right_windows": r.instance.windows.len(),
        "mirrored_horizon": m.instance.horizon,
    }));
    let m = child(&r, m)?;
    let mut out = Vec::new();
    for q in [l, m] {
        if !q.instance.windows.is_empty() {
            out.push(child(&p, q)?);
        }
    }
    Ok(out)
}

/// Reduces a cover instance with a feasible fractional solution to nice
/// pieces plus reset orders, each with lineage to `ci`.
pub fn reduce_to_nice(
    ci: &CoverInstance,
    y: &FractionalSetSolution,
    trace: &mut Vec<Value>,
) -> Result<(Vec<Piece>, Vec<Part>)> {
    let root = Piece::root(ci.clone(), y.clone());
    let mut resets = Vec::new();
    let mut left = Vec::new();
    for p in align(root, trace)? {
        let n = p.instance.n_items;
        if p.instance.horizon > n * n {
            let hb = reduce::bound_time_horizon(&p.instance, &p.y)?;
            trace.push(json!({
                "event": "bound-time-horizon",
                "horizon": p.instance.horizon,
                "n_items": n,
                "chunks": hb.pieces.len(),
                "chunk_horizons": hb.pieces.iter().map(|c| c.instance.horizon).collect::<Vec<_>>(),
                "reset_days": hb.resets.sets.len(),
            }));
            if !hb.resets.sets.is_empty() {
                resets.push(Part::reset(hb.resets.clone(), p.lineage.clone()));
            }
            for c in hb.pieces {
                let c = child(&p, c)?;
                left.extend(align(c, trace)?);
            }
        } else {
            left.push(p);
        }
    }
    let mut nice = Vec::new();
    for p in left {
        let q = reduce::nicify_piece(&p.instance, &p.y)?;
        trace.push(json!({
            "event": "nicify",
            "n_items": q.instance.n_items,
            "horizon": q.instance.horizon,
        }));
        nice.push(child(&p, q)?);
    }
    Ok((nice, resets))
}

fn piece_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn round_piece(p: &Piece, alg: Algorithm, opts: &SolveOptions, index: usize) -> Result<(Part, Vec<Value>)> {
    let ci = &p.instance;
    match alg {
        Algorithm::Sjrp => {
            let mut x = y_to_x(&p.y, ci.horizon, ci.n_items);
            normalize_windows(&mut x, ci);
            let out = round_sjrp::round_sjrp_with(ci, &x, &SjrpOptions { alpha: opts.alpha.clone() })?;
            let part = Part {
                kind: PartKind::Piece,
                lineage: p.lineage.clone(),
                schedule: out.schedule.clone(),
                cost: Some(out.cost.clone()),
                fractional: Some(out.initial_value.clone()),
                bound: Some(out.bound.clone()),
                iterations: None,
                k: None,
            };
            Ok((part, out.trace_lines()))
        }
        Algorithm::Irp => {
            let fps = fps_from_sets(&p.y, ci)?;
            let m = InstanceMetric::from_instance(ci)?;
            let io = IrpOptions { k: opts.k, seed: piece_seed(opts.seed, index), max_iterations: None };
            let out = round_irp::round_irp(ci, &fps, &io)?;
            let part = Part {
                kind: PartKind::Piece,
                lineage: p.lineage.clone(),
                schedule: out.schedule.clone(),
                cost: Some(out.cost.clone()),
                fractional: Some(fps_cost(&fps, &m)),
                bound: None,
                iterations: Some(out.iterations.len()),
                k: Some(out.k),
            };
            Ok((part, out.trace_lines()))
        }
        Algorithm::Auto => unreachable!(),
    }
}

pub fn solve(problem: &Problem, opts: &SolveOptions) -> Result<SolveOutput> {
    let alg = resolve_algorithm(problem.oracle(), opts.algorithm)?;
    if alg == Algorithm::Sjrp && !problem.oracle().is_submodular() {
        return Err(Error::Usage("sjrp needs a submodular oracle".into()));
    }
    let mut trace = Vec::new();
    let (ci, y, lp_value, lp_name) = match problem {
        Problem::Cover(ci) => {
            let (y, value, name) = relax(ci, opts)?;
            (ci.clone(), y, value, name)
        }
        Problem::Inventory(inv) => {
            if inv.n_items > opts.lp_cap {
                return Err(Error::Capacity(format!(
                    "inventory relaxation enumerates 2^{} sets; the cap is {} items",
                    inv.n_items, opts.lp_cap
                )));
            }
            let sol = solve_inventory_lp(inv)?;
            let (ci, y) = reduce::median_windows(inv, &sol.x, &sol.y)?;
            trace.push(json!({ "event": "median-windows", "windows": ci.windows.len() }));
            (ci, y, sol.value, "inventory")
        }
    };
    trace.push(json!({ "event": "relaxation", "lp": lp_name, "value": num::format(&lp_value) }));

    let (nice, resets) = reduce_to_nice(&ci, &y, &mut trace)?;
    let rounded: Vec<(Part, Vec<Value>)> =
        nice.par_iter().enumerate().map(|(i, p)| round_piece(p, alg, opts, i)).collect::<Result<_>>()?;
    let mut parts = Vec::new();
    let mut pieces = Vec::new();
    for (p, (part, lines)) in nice.into_iter().zip(rounded) {
        trace.extend(lines);
        pieces.push(SolvedPiece { piece: p, part: part.clone() });
        parts.push(part);
    }
    parts.extend(resets);
    let schedule = reduce::recombine(&parts.iter().map(|p| (p.schedule.clone(), p.lineage.clone())).collect::<Vec<_>>())?;
    let missed = check_feasible(&ci, &schedule);
    if !missed.is_empty() {
        return Err(Error::Infeasible(format!("recombined schedule misses windows {missed:?}")));
    }
    let (cost, ordering_cost, holding_cost) = match problem {
        Problem::Cover(_) => (schedule_cost(&ci, &schedule)?, None, None),
        Problem::Inventory(inv) => {
            let (o, h) = verify::inventory_cost(inv, &schedule)?;
            (&o + &h, Some(o), Some(h))
        }
    };
    let alg_over_lp = (lp_value != num::zero()).then(|| num::to_f64(&(&cost / &lp_value)));
    trace.push(json!({
        "event": "done",
        "pieces": pieces.len(),
        "cost": num::format(&cost),
        "lp_value": num::format(&lp_value),
    }));
    let solution = SolutionFile {
        algorithm: match alg {
            Algorithm::Sjrp => "sjrp",
            _ => "irp",
        }
        .into(),
        lp: lp_name.into(),
        seed: opts.seed,
        schedule,
        cost,
        ordering_cost,
        holding_cost,
        lp_value,
        alg_over_lp,
        parts,
    };
    Ok(SolveOutput { solution, trace, root: ci, root_y: y, pieces })
}
