//! Rounding for submodular cover over time: repeated extraction of
//! α-supported level sets, top-level-set orders, and dyadic merging of days.

pub mod lovasz;

use num_traits::Zero;
use serde::Serialize;

pub use lovasz::{
    find_supported_level, find_supported_theta, is_supported, level_set, lovasz_value, top_set, truncate,
    SupportedLevel,
};

use crate::error::{malformed, Result};
use crate::fractional::FractionalVectorSolution;
use crate::intervals::{log2_exact, loglog};
use crate::model::{check_feasible, schedule_cost, CoverInstance, Schedule};
use crate::num::{self, serde_q, Rational};

/// Moves x^{t+2^{i-1}+1} onto x^{t+1} for every t ∈ {k·2^i}.
pub fn merge_step(xs: &mut FractionalVectorSolution, i: u32) {
    assert!(i >= 1, "merge iterations start at 1");
    let horizon = xs.horizon();
    let stride = 1usize << i;
    let half = stride / 2;
    let mut t = 0;
    while t < horizon {
        let src = t + half + 1;
        if src <= horizon {
            let width = xs.x[src - 1].len();
            let moved = std::mem::replace(&mut xs.x[src - 1], vec![Rational::zero(); width]);
            for (a, b) in xs.x[t].iter_mut().zip(moved) {
                *a += b;
            }
        }
        t += stride;
    }
}

#[derive(Clone, Debug, Default)]
pub struct SjrpOptions {
    /// Override of α; the support threshold is α/32. Defaults to 1/log log T.
    pub alpha: Option<Rational>,
}

/// One extraction of a supported level set.
#[derive(Clone, Debug, Serialize)]
pub struct Extraction {
    pub iteration: usize,
    pub day: usize,
    #[serde(with = "serde_q")]
    pub theta: Rational,
    #[serde(with = "serde_q")]
    pub set_cost: Rational,
    #[serde(with = "serde_q")]
    pub decrease: Rational,
}

#[derive(Clone, Debug)]
pub struct SjrpOutcome {
    pub schedule: Schedule,
    pub cost: Rational,
    /// Σ_t f̂(x^t) of the input.
    pub initial_value: Rational,
    /// (32·log log T + 1) × initial value.
    pub bound: Rational,
    pub extractions: Vec<Extraction>,
    /// Potential Σ_t f̂(x^t) after each pass.
    pub potentials: Vec<Rational>,
}

impl SjrpOutcome {
    pub fn trace_lines(&self) -> Vec<serde_json::Value> {
        self.extractions
            .iter()
            .map(|e| {
                let mut v = serde_json::to_value(e).unwrap();
                v["event"] = "sjrp-extraction".into();
                v
            })
            .collect()
    }
}

pub fn round_sjrp(ci: &CoverInstance, x: &FractionalVectorSolution) -> Result<Schedule> {
    Ok(round_sjrp_with(ci, x, &SjrpOptions::default())?.schedule)
}

/// Runs log T merge passes plus a final pass. Each pass first extracts
/// supported level sets on every day until none remains, then orders the
/// top level set L_1 of what is left.
pub fn round_sjrp_with(ci: &CoverInstance, x: &FractionalVectorSolution, opts: &SjrpOptions) -> Result<SjrpOutcome> {
    if !ci.nice || !ci.satisfies_nice() {
        return malformed("the rounding needs a nice instance");
    }
    x.check_feasible(ci)?;
    let horizon = ci.horizon;
    let logt = log2_exact(horizon) as usize;
    let ll = loglog(horizon) as i64;
    let alpha = opts.alpha.clone().unwrap_or_else(|| num::ratio(1, ll));
    let threshold = &alpha / num::int(32);
    let initial_value = x.value(ci)?;
    let bound = num::int(32 * ll + 1) * &initial_value;

    let mut xs = x.clone();
    let mut schedule = Schedule::new();
    let mut extractions = Vec::new();
    let mut potentials = Vec::new();
    for pass in 1..=logt + 1 {
        for t in 1..=horizon {
            let row = xs.day_mut(t);
            let mut count = 0usize;
            while let Some(lv) = find_supported_level(ci, row, &threshold)? {
                count += 1;
                assert!(count <= ci.n_items, "extraction loop exceeded N rounds");
                schedule.add_set(t, lv.set.iter().copied());
                *row = truncate(row, &lv.floor);
                extractions.push(Extraction {
                    iteration: pass,
                    day: t,
                    theta: lv.theta,
                    set_cost: lv.set_cost,
                    decrease: lv.decrease,
                });
            }
            schedule.add_set(t, top_set(row));
        }
        let before = xs.value(ci)?;
        if pass <= logt {
            merge_step(&mut xs, pass as u32);
            let after = xs.value(ci)?;
            assert!(after <= before, "merging increased the Lovász potential");
            potentials.push(after);
        } else {
            potentials.push(before);
        }
    }
    schedule.prune();
    let missed = check_feasible(ci, &schedule);
    assert!(missed.is_empty(), "rounding left windows uncovered: {missed:?}");
    let cost = schedule_cost(ci, &schedule)?;
    if opts.alpha.is_none() {
        assert!(cost <= bound, "rounding cost exceeds (32·log log T + 1) × Σ f̂");
    }
    Ok(SjrpOutcome { schedule, cost, initial_value, bound, extractions, potentials })
}
