//! Integral schedules and fractional set solutions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::instance::{CoverInstance, DemandWindow};
use super::{Day, ItemId, ItemSet};
use crate::error::{malformed, Result};
use crate::num::{serde_q, Rational};
use num_traits::{Signed, Zero};

/// Per-day item sets S_t. Days with empty sets may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    pub sets: BTreeMap<Day, ItemSet>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    pub fn add(&mut self, day: Day, item: ItemId) {
        self.sets.entry(day).or_default().insert(item);
    }

    pub fn add_set(&mut self, day: Day, items: impl IntoIterator<Item = ItemId>) {
        let e = self.sets.entry(day).or_default();
        e.extend(items);
    }

    pub fn contains(&self, day: Day, item: ItemId) -> bool {
        self.sets.get(&day).is_some_and(|s| s.contains(&item))
    }

    /// Daywise union.
    pub fn union(&self, other: &Schedule) -> Schedule {
        let mut out = self.clone();
        for (&d, s) in &other.sets {
            out.add_set(d, s.iter().copied());
        }
        out
    }

    /// Drops days whose set is empty.
    pub fn prune(&mut self) {
        self.sets.retain(|_, s| !s.is_empty());
    }

    pub fn is_subset_of(&self, other: &Schedule) -> bool {
        self.sets
            .iter()
            .all(|(d, s)| s.is_empty() || other.sets.get(d).is_some_and(|o| s.is_subset(o)))
    }
}

/// Σ_t f(S_t).
pub fn schedule_cost(ci: &CoverInstance, sched: &Schedule) -> Result<Rational> {
    let mut total = Rational::zero();
    for s in sched.sets.values() {
        total += ci.cost(s)?;
    }
    Ok(total)
}

/// Windows not served by the schedule.
pub fn check_feasible(ci: &CoverInstance, sched: &Schedule) -> Vec<DemandWindow> {
    ci.windows
        .iter()
        .filter(|w| !(w.start..=w.end).any(|d| sched.contains(d, w.item)))
        .copied()
        .collect()
}

/// Per-day weighted set system y_t^S.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FractionalSetSolution {
    pub entries: BTreeMap<Day, Vec<(ItemSet, Rational)>>,
}

impl FractionalSetSolution {
    pub fn new() -> Self {
        FractionalSetSolution::default()
    }

    /// Adds weight to (day, set), merging with an existing entry. Empty sets
    /// and zero weights are skipped.
    pub fn add(&mut self, day: Day, set: ItemSet, w: Rational) {
        if set.is_empty() || w.is_zero() {
            return;
        }
        let e = self.entries.entry(day).or_default();
        match e.iter_mut().find(|(s, _)| *s == set) {
            Some((_, x)) => *x += w,
            None => e.push((set, w)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Day, &ItemSet, &Rational)> {
        self.entries.iter().flat_map(|(&d, v)| v.iter().map(move |(s, w)| (d, s, w)))
    }

    pub fn day_mass(&self, day: Day) -> Rational {
        self.entries.get(&day).map_or_else(Rational::zero, |v| v.iter().map(|(_, w)| w).sum())
    }

    pub fn scaled(&self, k: &Rational) -> FractionalSetSolution {
        let mut out = FractionalSetSolution::new();
        for (d, s, w) in self.iter() {
            out.add(d, s.clone(), w * k);
        }
        out
    }

    /// Coverage Σ_{t∈[s,t]} Σ_{S∋v} y_t^S of one window.
    pub fn coverage(&self, w: &DemandWindow) -> Rational {
        self.entries
            .range(w.start..=w.end)
            .flat_map(|(_, v)| v.iter())
            .filter(|(s, _)| s.contains(&w.item))
            .map(|(_, x)| x)
            .sum()
    }

    /// Windows with coverage below one.
    pub fn uncovered(&self, ci: &CoverInstance) -> Vec<DemandWindow> {
        let one = Rational::from_integer(1.into());
        ci.windows.iter().filter(|w| self.coverage(w) < one).copied().collect()
    }

    pub fn check_feasible(&self, ci: &CoverInstance) -> Result<()> {
        match self.uncovered(ci).first() {
            None => Ok(()),
            Some(w) => crate::error::infeasible(format!(
                "window {}:[{}, {}] has fractional coverage below 1",
                w.item, w.start, w.end
            )),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fractional solution serializes")
    }
}

/// Σ_t Σ_S f(S) y_t^S.
pub fn set_solution_value(y: &FractionalSetSolution, ci: &CoverInstance) -> Result<Rational> {
    let mut total = Rational::zero();
    for (_, s, w) in y.iter() {
        if w.is_negative() {
            return malformed("negative weight in fractional solution");
        }
        total += ci.cost(s)? * w;
    }
    Ok(total)
}

#[derive(Serialize, Deserialize)]
struct WireEntry {
    set: ItemSet,
    #[serde(with = "serde_q")]
    weight: Rational,
}

impl Serialize for FractionalSetSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire: BTreeMap<Day, Vec<WireEntry>> = self
            .entries
            .iter()
            .map(|(&d, v)| {
                (d, v.iter().map(|(set, w)| WireEntry { set: set.clone(), weight: w.clone() }).collect())
            })
            .collect();
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FractionalSetSolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = BTreeMap::<Day, Vec<WireEntry>>::deserialize(d)?;
        let mut out = FractionalSetSolution::new();
        for (day, v) in wire {
            for e in v {
                if e.weight.is_negative() {
                    return Err(serde::de::Error::custom("negative weight"));
                }
                out.add(day, e.set, e.weight);
            }
        }
        Ok(out)
    }
}
