//! Exact optima by exhaustive search, and ratio reports.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CoverInstance, Schedule};
use crate::num::{self, serde_q, Rational};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

pub fn brute_force_opt(ci: &CoverInstance) -> Result<(Schedule, Rational)> {
    brute_force_capped(ci, DEFAULT_ENUMERATION_CAP)
}

/// Number of (window → serving day) assignments, saturating.
pub fn assignment_count(ci: &CoverInstance) -> u64 {
    ci.windows.iter().fold(1u64, |acc, w| acc.saturating_mul(w.len() as u64))
}

/// Optimum of Σ_t f(S_t) over feasible schedules.
///
/// Dynamic program over days whose state is the set of open windows already
/// served; each day orders a subset of the items that still have an open
/// unserved window. Day sets are priced by g(A) = min_{U ⊇ A} f(U), which is
/// f itself for monotone oracles; the schedule reports the minimizing U.
pub fn brute_force_capped(ci: &CoverInstance, cap: u64) -> Result<(Schedule, Rational)> {
    let count = assignment_count(ci);
    if count > cap {
        return Err(Error::Capacity(format!("{count} assignments exceed the enumeration cap {cap}")));
    }
    let n = ci.n_items;
    if n > 20 || ci.windows.len() > 64 {
        return Err(Error::Capacity(format!("{n} items / {} windows are too many to enumerate", ci.windows.len())));
    }
    let full = 1usize << n;
    let mut g: Vec<Rational> = Vec::with_capacity(full);
    for mask in 0..full {
        let items: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        g.push(ci.cost_of(&items)?);
    }
    let mut arg: Vec<usize> = (0..full).collect();
    for mask in (0..full).rev() {
        for v in 0..n {
            let sup = mask | 1 << v;
            if sup != mask && g[sup] < g[mask] {
                g[mask] = g[sup].clone();
                arg[mask] = arg[sup];
            }
        }
    }

    let ws = &ci.windows;
    // layers[t]: state → (cost, previous state, ordered mask).
    let mut layers: Vec<HashMap<u64, (Rational, u64, usize)>> = Vec::with_capacity(ci.horizon + 1);
    layers.push([(0u64, (Rational::zero(), 0u64, 0usize))].into_iter().collect());
    for t in 1..=ci.horizon {
        let open: Vec<usize> = (0..ws.len()).filter(|&i| ws[i].contains(t)).collect();
        let ending: u64 = open.iter().filter(|&&i| ws[i].end == t).fold(0, |m, &i| m | 1 << i);
        let mut next: HashMap<u64, (Rational, u64, usize)> = HashMap::new();
        for (&state, (cost, _, _)) in &layers[t - 1] {
            let wanted: usize =
                open.iter().filter(|&&i| state >> i & 1 == 0).fold(0, |m, &i| m | 1 << ws[i].item);
            // Every subset of `wanted`, including the empty one.
            let mut a = wanted;
            loop {
                let served = open.iter().filter(|&&i| a >> ws[i].item & 1 == 1).fold(state, |m, &i| m | 1 << i);
                if served & ending == ending {
                    let key = served & !ending;
                    let c = cost + &g[a];
                    match next.get(&key) {
                        Some((best, _, _)) if *best <= c => {}
                        _ => {
                            next.insert(key, (c, state, a));
                        }
                    }
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & wanted;
            }
        }
        layers.push(next);
    }
    let Some((cost, _, _)) = layers[ci.horizon].get(&0).cloned() else {
        return Err(Error::Infeasible("no feasible schedule".into()));
    };
    let mut schedule = Schedule::new();
    let mut state = 0u64;
    for t in (1..=ci.horizon).rev() {
        let (_, prev, a) = layers[t][&state].clone();
        let u = arg[a];
        schedule.add_set(t, (0..n).filter(|&v| u >> v & 1 == 1));
        state = prev;
    }
    schedule.prune();
    Ok((schedule, cost))
}

/// ALG/OPT, ALG/LP and the relaxation sanity flag.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    #[serde(with = "serde_q")]
    pub alg: Rational,
    #[serde(with = "serde_q::option")]
    pub opt: Option<Rational>,
    #[serde(with = "serde_q")]
    pub lp: Rational,
    pub alg_over_opt: Option<f64>,
    pub alg_over_lp: Option<f64>,
    /// LP ≤ OPT, or true when OPT is absent.
    pub lp_le_opt: bool,
    /// The LP value exceeds the optimum: the relaxation or the solver is wrong.
    pub sanity_flag: bool,
}

fn ratio(a: &Rational, b: &Rational) -> Option<f64> {
    (!b.is_zero()).then(|| num::to_f64(&(a / b)))
}

pub fn ratio_report(alg: &Rational, opt: Option<&Rational>, lp: &Rational) -> RatioReport {
    let lp_le_opt = opt.is_none_or(|o| lp <= o);
    RatioReport {
        alg: alg.clone(),
        opt: opt.cloned(),
        lp: lp.clone(),
        alg_over_opt: opt.and_then(|o| ratio(alg, o)),
        alg_over_lp: ratio(alg, lp),
        lp_le_opt,
        sanity_flag: !lp_le_opt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{schedule_cost, CostOracle, DemandWindow};

    #[test]
    fn rank_one_two_items() {
        let o = CostOracle::CardinalityConcave { steps: vec![num::int(0), num::int(1), num::int(1)] };
        let ci = CoverInstance::new(2, 2, vec![DemandWindow::new(0, 1, 2), DemandWindow::new(1, 2, 2)], o).unwrap();
        let (s, c) = brute_force_opt(&ci).unwrap();
        assert_eq!(c, num::int(1));
        assert!(s.contains(2, 0) && s.contains(2, 1));
    }

    #[test]
    fn modular_base_zero_is_sum() {
        let o = CostOracle::ModularWithBase { base: num::int(0), weights: vec![num::int(2), num::int(3)] };
        let ci = CoverInstance::new(2, 3, vec![DemandWindow::new(0, 1, 3), DemandWindow::new(1, 2, 2)], o).unwrap();
        assert_eq!(brute_force_opt(&ci).unwrap().1, num::int(5));
    }

    #[test]
    fn single_item() {
        let o = CostOracle::ModularWithBase { base: num::int(1), weights: vec![num::int(2)] };
        let ci = CoverInstance::new(1, 4, vec![DemandWindow::new(0, 2, 4)], o).unwrap();
        let (s, c) = brute_force_opt(&ci).unwrap();
        assert_eq!(c, num::int(3));
        assert_eq!(schedule_cost(&ci, &s).unwrap(), c);
    }

    #[test]
    fn cap_is_enforced() {
        let o = CostOracle::ModularWithBase { base: num::int(1), weights: vec![num::int(1); 3] };
        let ci = CoverInstance::new(3, 8, (0..3).map(|v| DemandWindow::new(v, 1, 8)).collect(), o).unwrap();
        assert!(matches!(brute_force_capped(&ci, 100), Err(Error::Capacity(_))));
    }

    #[test]
    fn ratio_examples() {
        let r = ratio_report(&num::int(2), Some(&num::int(1)), &num::int(1));
        assert_eq!(r.alg_over_opt, Some(2.0));
        let r = ratio_report(&num::int(3), Some(&num::int(3)), &num::int(1));
        assert_eq!(r.alg_over_opt, Some(1.0));
        let r = ratio_report(&num::int(3), Some(&num::int(2)), &num::int(5));
        assert!(r.sanity_flag);
    }
}
