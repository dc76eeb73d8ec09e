//! Benchmark suites: ratios and runtimes over generated instances.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gen::{generate, GenKind, GenParams, WindowStyle};
use crate::model::Problem;
use crate::num;
use crate::oracle::{assignment_count, brute_force_opt, DEFAULT_ENUMERATION_CAP};
use crate::pipeline::{solve, SolveOptions};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub kind: String,
    pub n: usize,
    pub horizon: usize,
    #[serde(default = "one")]
    pub repetitions: usize,
    /// A seed count or an explicit list; `Count(k)` means `seed_start..seed_start + k`.
    #[serde(default)]
    pub seeds: Seeds,
    #[serde(default)]
    pub seed_start: u64,
    #[serde(default = "left_aligned")]
    pub window_style: String,
}

fn one() -> usize {
    1
}

fn left_aligned() -> String {
    "left-aligned".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    Count(u64),
    List(Vec<u64>),
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::Count(1)
    }
}

impl SuiteEntry {
    /// Every (repetition, seed) pair; repetitions re-run the same seed.
    pub fn runs(&self) -> Vec<u64> {
        let seeds: Vec<u64> = match &self.seeds {
            Seeds::Count(k) => (self.seed_start..self.seed_start + k).collect(),
            Seeds::List(v) => v.clone(),
        };
        (0..self.repetitions.max(1)).flat_map(|_| seeds.iter().copied()).collect()
    }
}

/// Read from either `{"entries": [...]}` or a bare array of entries.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(from = "SuiteForm")]
pub struct Suite {
    pub entries: Vec<SuiteEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SuiteForm {
    Object { entries: Vec<SuiteEntry> },
    List(Vec<SuiteEntry>),
}

impl From<SuiteForm> for Suite {
    fn from(f: SuiteForm) -> Self {
        match f {
            SuiteForm::Object { entries } | SuiteForm::List(entries) => Suite { entries },
        }
    }
}

/// Every generator kind at N ∈ {4, 8}, T ∈ {4, 16}, 100 seeds each.
pub fn default_suite() -> Suite {
    let mut entries = Vec::new();
    for kind in GenKind::ALL {
        for n in [4, 8] {
            for horizon in [4, 16] {
                entries.push(SuiteEntry {
                    kind: kind.name().into(),
                    n,
                    horizon,
                    repetitions: 1,
                    seeds: Seeds::Count(100),
                    seed_start: 0,
                    window_style: left_aligned(),
                });
            }
        }
    }
    Suite { entries }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub kind: String,
    pub n: usize,
    pub horizon: usize,
    pub window_style: String,
    pub runs: usize,
    pub failures: usize,
    /// Runs where the exact optimum was computed.
    pub opt_runs: usize,
    pub mean_alg_over_opt: Option<f64>,
    pub max_alg_over_opt: Option<f64>,
    pub mean_alg_over_lp: Option<f64>,
    pub max_alg_over_lp: Option<f64>,
    pub mean_ms: f64,
    pub max_ms: f64,
}

struct Run {
    alg_opt: Option<f64>,
    alg_lp: Option<f64>,
    ms: f64,
}

fn run_one(kind: GenKind, style: WindowStyle, n: usize, horizon: usize, seed: u64) -> Result<Run> {
    let ci = generate(&GenParams { kind, n, horizon, seed, style })?;
    let start = Instant::now();
    let out = solve(&Problem::Cover(ci.clone()), &SolveOptions { seed, ..Default::default() })?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let alg = &out.solution.cost;
    let alg_opt = if assignment_count(&ci) <= DEFAULT_ENUMERATION_CAP && ci.n_items <= 12 {
        let (_, opt) = brute_force_opt(&ci)?;
        (opt != num::zero()).then(|| num::to_f64(&(alg / &opt)))
    } else {
        None
    };
    Ok(Run { alg_opt, alg_lp: out.solution.alg_over_lp, ms })
}

fn stats(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (Some(mean), Some(xs.iter().cloned().fold(f64::MIN, f64::max)))
}

pub fn run_suite(suite: &Suite) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for e in &suite.entries {
        let kind: GenKind = e.kind.parse()?;
        let style: WindowStyle = e.window_style.parse()?;
        let seeds = e.runs();
        let runs: Vec<Result<Run>> = seeds.par_iter().map(|&s| run_one(kind, style, e.n, e.horizon, s)).collect();
        let ok: Vec<&Run> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
        let opt: Vec<f64> = ok.iter().filter_map(|r| r.alg_opt).collect();
        let lp: Vec<f64> = ok.iter().filter_map(|r| r.alg_lp).collect();
        let ms: Vec<f64> = ok.iter().map(|r| r.ms).collect();
        let (mean_alg_over_opt, max_alg_over_opt) = stats(&opt);
        let (mean_alg_over_lp, max_alg_over_lp) = stats(&lp);
        let (mean_ms, max_ms) = stats(&ms);
        rows.push(BenchRow {
            kind: e.kind.clone(),
            n: e.n,
            horizon: e.horizon,
            window_style: e.window_style.clone(),
            runs: runs.len(),
            failures: runs.len() - ok.len(),
            opt_runs: opt.len(),
            mean_alg_over_opt,
            max_alg_over_opt,
            mean_alg_over_lp,
            max_alg_over_lp,
            mean_ms: mean_ms.unwrap_or(0.0),
            max_ms: max_ms.unwrap_or(0.0),
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:.4}"));
    let mut out = String::from(
        "kind,n,horizon,window_style,runs,failures,opt_runs,mean_alg_over_opt,max_alg_over_opt,\
         mean_alg_over_lp,max_alg_over_lp,mean_ms,max_ms\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.2},{:.2}\n",
            r.kind,
            r.n,
            r.horizon,
            r.window_style,
            r.runs,
            r.failures,
            r.opt_runs,
            opt(r.mean_alg_over_opt),
            opt(r.max_alg_over_opt),
            opt(r.mean_alg_over_lp),
            opt(r.max_alg_over_lp),
            r.mean_ms,
            r.max_ms
        ));
    }
    out
}
