//! Independent re-check of a solution against its instance.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_feasible, schedule_cost, Day, InventoryInstance, ItemId, Problem, Schedule};
use crate::num::{self, serde_q, Rational};
use crate::pipeline::SolutionFile;
use crate::reduce;

/// Latest order day s ≤ t of item v.
fn serving_day(s: &Schedule, v: ItemId, t: Day) -> Option<Day> {
    s.sets.range(..=t).rev().find(|(_, set)| set.contains(&v)).map(|(&d, _)| d)
}

/// Positive demands with no order of their item on or before their day.
pub fn inventory_unserved(inv: &InventoryInstance, s: &Schedule) -> Vec<(ItemId, Day)> {
    inv.positive_demands().filter(|&(v, t, _)| serving_day(s, v, t).is_none()).map(|(v, t, _)| (v, t)).collect()
}

/// (ordering cost, holding cost); each demand is served by the latest order
/// at or before its day. Unserved demands add no holding cost.
pub fn inventory_cost(inv: &InventoryInstance, s: &Schedule) -> Result<(Rational, Rational)> {
    let mut ordering = Rational::zero();
    for set in s.sets.values() {
        let items: Vec<usize> = set.iter().copied().collect();
        ordering += inv.oracle.eval(&items)?;
    }
    let mut holding = Rational::zero();
    for (v, t, d) in inv.positive_demands() {
        if let Some(sd) = serving_day(s, v, t) {
            holding += d * inv.holding_cost(v, sd, t);
        }
    }
    Ok((ordering, holding))
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub violations: Vec<String>,
    #[serde(with = "serde_q")]
    pub recomputed_cost: Rational,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_range(s: &Schedule, n: usize, horizon: usize, what: &str) -> Result<()> {
    for (&d, set) in &s.sets {
        if d < 1 || d > horizon {
            return Err(Error::Usage(format!("{what} orders on day {d}, outside the horizon {horizon}")));
        }
        if let Some(&v) = set.iter().find(|&&v| v >= n) {
            return Err(Error::Usage(format!("{what} orders item {v}; the instance has {n} items")));
        }
    }
    Ok(())
}

fn compare(violations: &mut Vec<String>, field: &str, reported: &Rational, actual: &Rational) {
    if reported != actual {
        violations.push(format!(
            "{field} reported as {} but recomputes to {}",
            num::format(reported),
            num::format(actual)
        ));
    }
}

pub fn verify(problem: &Problem, sol: &SolutionFile) -> Result<VerifyReport> {
    let (n, horizon) = match problem {
        Problem::Cover(ci) => (ci.n_items, ci.horizon),
        Problem::Inventory(inv) => (inv.n_items, inv.horizon),
    };
    check_range(&sol.schedule, n, horizon, "the schedule")?;
    let mut violations = Vec::new();
    let recomputed_cost = match problem {
        Problem::Cover(ci) => {
            for w in check_feasible(ci, &sol.schedule) {
                violations.push(format!("window {}:[{}, {}] is not served", w.item, w.start, w.end));
            }
            let c = schedule_cost(ci, &sol.schedule)?;
            compare(&mut violations, "cost", &sol.cost, &c);
            c
        }
        Problem::Inventory(inv) => {
            for (v, t) in inventory_unserved(inv, &sol.schedule) {
                violations.push(format!("demand of item {v} on day {t} is not served"));
            }
            let (o, h) = inventory_cost(inv, &sol.schedule)?;
            if let Some(r) = &sol.ordering_cost {
                compare(&mut violations, "ordering cost", r, &o);
            }
            if let Some(r) = &sol.holding_cost {
                compare(&mut violations, "holding cost", r, &h);
            }
            let c = &o + &h;
            compare(&mut violations, "cost", &sol.cost, &c);
            c
        }
    };
    if !sol.parts.is_empty() {
        let mut bad_lineage = false;
        for (i, p) in sol.parts.iter().enumerate() {
            let days_ok = p.lineage.days.iter().flatten().all(|&d| d >= 1 && d <= horizon);
            let items_ok = p.lineage.items.iter().all(|&v| v < n);
            if !days_ok || !items_ok {
                violations.push(format!("part {i} maps outside the instance"));
                bad_lineage = true;
            }
        }
        if !bad_lineage {
            let subs: Vec<_> = sol.parts.iter().map(|p| (p.schedule.clone(), p.lineage.clone())).collect();
            match reduce::recombine(&subs) {
                Ok(u) if u == sol.schedule => {}
                Ok(_) => violations.push("schedule differs from the recombined parts".into()),
                Err(e) => violations.push(format!("parts do not recombine: {e}")),
            }
        }
    }
    Ok(VerifyReport { violations, recomputed_cost })
}
