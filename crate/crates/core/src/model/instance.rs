//! Instances: cover-over-time and full inventory instances, plus their JSON form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::oracle::{CostOracle, FastOracle};
use super::{Day, ItemId, ItemSet};
use crate::error::{malformed, Error, Result};
use crate::intervals::{self, AlignedKind, Interval};
use crate::num::{serde_q::Q, Rational};
use num_traits::Signed;

/// Item `item` must be ordered on some day of `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize, usize)", into = "(usize, usize, usize)")]
pub struct DemandWindow {
    pub item: ItemId,
    pub start: Day,
    pub end: Day,
}

impl From<(usize, usize, usize)> for DemandWindow {
    fn from((item, start, end): (usize, usize, usize)) -> Self {
        DemandWindow { item, start, end }
    }
}

impl From<DemandWindow> for (usize, usize, usize) {
    fn from(w: DemandWindow) -> Self {
        (w.item, w.start, w.end)
    }
}

impl DemandWindow {
    pub fn new(item: ItemId, start: Day, end: Day) -> Self {
        DemandWindow { item, start, end }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.start, self.end)
    }

    pub fn contains(&self, day: Day) -> bool {
        self.start <= day && day <= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Subadditive cover over time.
///
/// `oracle_items`, when present, maps each instance item to the oracle's
/// ground item; reductions use it for item copies and item groups.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    pub n_items: usize,
    pub horizon: usize,
    pub windows: Vec<DemandWindow>,
    pub oracle: CostOracle,
    pub nice: bool,
    pub oracle_items: Option<Vec<usize>>,
    fast: FastOracle,
}

impl PartialEq for CoverInstance {
    fn eq(&self, o: &Self) -> bool {
        self.n_items == o.n_items
            && self.horizon == o.horizon
            && self.windows == o.windows
            && self.oracle == o.oracle
            && self.nice == o.nice
            && self.oracle_items == o.oracle_items
    }
}

impl CoverInstance {
    pub fn new(n_items: usize, horizon: usize, windows: Vec<DemandWindow>, oracle: CostOracle) -> Result<Self> {
        Self::build(n_items, horizon, windows, oracle, None, false)
    }

    pub fn build(
        n_items: usize,
        horizon: usize,
        windows: Vec<DemandWindow>,
        oracle: CostOracle,
        oracle_items: Option<Vec<usize>>,
        nice: bool,
    ) -> Result<Self> {
        oracle.validate()?;
        for w in &windows {
            if w.item >= n_items {
                return malformed(format!("window item {} out of range", w.item));
            }
            if w.start < 1 || w.start > w.end || w.end > horizon {
                return malformed(format!("window [{}, {}] outside horizon {horizon}", w.start, w.end));
            }
        }
        let g = oracle.ground_size();
        match &oracle_items {
            Some(map) => {
                if map.len() != n_items || map.iter().any(|&o| o >= g) {
                    return malformed("oracle item map does not match the oracle");
                }
            }
            None => {
                if n_items > g {
                    return malformed(format!("{n_items} items but the oracle covers {g}"));
                }
            }
        }
        let fast = FastOracle::new(&oracle);
        let ci = CoverInstance { n_items, horizon, windows, oracle, nice, oracle_items, fast };
        if nice && !ci.satisfies_nice() {
            return malformed("instance is flagged nice but is not");
        }
        Ok(ci)
    }

    /// Left aligned, one window per item, horizon of the form 2^(2^k).
    pub fn satisfies_nice(&self) -> bool {
        let ivs: Vec<Interval> = self.windows.iter().map(|w| w.interval()).collect();
        let aligned = matches!(
            intervals::aligned_kind(&ivs),
            AlignedKind::Left | AlignedKind::Laminar | AlignedKind::BothTrivially
        );
        let mut count = vec![0usize; self.n_items];
        for w in &self.windows {
            count[w.item] += 1;
        }
        aligned && count.iter().all(|&c| c == 1) && intervals::is_tower(self.horizon)
    }

    pub fn oracle_item(&self, v: ItemId) -> usize {
        self.oracle_items.as_ref().map_or(v, |m| m[v])
    }

    pub fn map_to_oracle(&self, items: impl IntoIterator<Item = ItemId>) -> Vec<usize> {
        items.into_iter().map(|v| self.oracle_item(v)).collect()
    }

    /// f(S) for a set of instance items.
    pub fn cost(&self, set: &ItemSet) -> Result<Rational> {
        if let Some(&bad) = set.iter().find(|&&v| v >= self.n_items) {
            return Err(Error::Malformed(format!("item {bad} out of range")));
        }
        self.oracle.eval(&self.map_to_oracle(set.iter().copied()))
    }

    pub fn cost_of(&self, items: &[ItemId]) -> Result<Rational> {
        if let Some(&bad) = items.iter().find(|&&v| v >= self.n_items) {
            return Err(Error::Malformed(format!("item {bad} out of range")));
        }
        self.oracle.eval(&self.map_to_oracle(items.iter().copied()))
    }

    /// Floating-point f(S) for instance items.
    pub fn cost_f64(&self, items: &[ItemId]) -> f64 {
        self.fast.eval(&self.map_to_oracle(items.iter().copied()))
    }

    pub fn windows_of(&self, v: ItemId) -> impl Iterator<Item = &DemandWindow> {
        self.windows.iter().filter(move |w| w.item == v)
    }

    /// Days lying in at least one window.
    pub fn active_days(&self) -> Vec<Day> {
        let mut mark = vec![false; self.horizon + 1];
        for w in &self.windows {
            for d in w.start..=w.end {
                mark[d] = true;
            }
        }
        (1..=self.horizon).filter(|&d| mark[d]).collect()
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n_items: self.n_items,
            horizon: self.horizon,
            windows: self.windows.clone(),
            oracle: self.oracle.clone(),
            nice: self.nice,
            oracle_items: self.oracle_items.clone(),
            demands: None,
            holding: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }
}

/// Full inventory instance with demand quantities and holding costs.
#[derive(Clone, Debug, PartialEq)]
pub struct InventoryInstance {
    pub n_items: usize,
    pub horizon: usize,
    pub demands: BTreeMap<(ItemId, Day), Rational>,
    pub holding: BTreeMap<(ItemId, Day, Day), Rational>,
    pub oracle: CostOracle,
}

impl InventoryInstance {
    pub fn new(
        n_items: usize,
        horizon: usize,
        demands: BTreeMap<(ItemId, Day), Rational>,
        holding: BTreeMap<(ItemId, Day, Day), Rational>,
        oracle: CostOracle,
    ) -> Result<Self> {
        oracle.validate()?;
        if n_items > oracle.ground_size() {
            return malformed("more items than the oracle covers");
        }
        for (&(v, t), d) in &demands {
            if v >= n_items || t < 1 || t > horizon {
                return malformed(format!("demand ({v}, {t}) out of range"));
            }
            if d.is_negative() {
                return malformed("negative demand");
            }
        }
        for (&(v, s, t), h) in &holding {
            if v >= n_items || s < 1 || s > t || t > horizon {
                return malformed(format!("holding ({v}, {s}, {t}) out of range"));
            }
            if h.is_negative() {
                return malformed("negative holding cost");
            }
        }
        Ok(InventoryInstance { n_items, horizon, demands, holding, oracle })
    }

    /// h^v_{st}; missing entries are zero.
    pub fn holding_cost(&self, v: ItemId, s: Day, t: Day) -> Rational {
        self.holding.get(&(v, s, t)).cloned().unwrap_or_default()
    }

    /// Demands with positive quantity.
    pub fn positive_demands(&self) -> impl Iterator<Item = (ItemId, Day, &Rational)> {
        self.demands.iter().filter(|(_, d)| d.is_positive()).map(|(&(v, t), d)| (v, t, d))
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n_items: self.n_items,
            horizon: self.horizon,
            windows: Vec::new(),
            oracle: self.oracle.clone(),
            nice: false,
            oracle_items: None,
            demands: Some(self.demands.iter().map(|(&(v, t), d)| (v, t, Q(d.clone()))).collect()),
            holding: Some(self.holding.iter().map(|(&(v, s, t), h)| (v, s, t, Q(h.clone()))).collect()),
        }
    }
}

/// On-disk instance format shared by both problem kinds.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n_items: usize,
    pub horizon: usize,
    #[serde(default)]
    pub windows: Vec<DemandWindow>,
    pub oracle: CostOracle,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nice: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_items: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demands: Option<Vec<(usize, usize, Q)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holding: Option<Vec<(usize, usize, usize, Q)>>,
}

/// Either problem kind, as read from an instance file.
#[derive(Clone, Debug)]
pub enum Problem {
    Cover(CoverInstance),
    Inventory(InventoryInstance),
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Problem> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        file.into_problem()
    }

    pub fn oracle(&self) -> &CostOracle {
        match self {
            Problem::Cover(c) => &c.oracle,
            Problem::Inventory(i) => &i.oracle,
        }
    }

    pub fn to_json(&self) -> String {
        let f = match self {
            Problem::Cover(c) => c.to_file(),
            Problem::Inventory(i) => i.to_file(),
        };
        serde_json::to_string_pretty(&f).expect("instance serializes")
    }
}

impl InstanceFile {
    pub fn into_problem(self) -> Result<Problem> {
        if self.demands.is_some() || self.holding.is_some() {
            if !self.windows.is_empty() {
                return malformed("an instance has either windows or demands, not both");
            }
            let mut demands = BTreeMap::new();
            for (v, t, q) in self.demands.unwrap_or_default() {
                if demands.insert((v, t), q.0).is_some() {
                    return malformed(format!("duplicate demand ({v}, {t})"));
                }
            }
            let mut holding = BTreeMap::new();
            for (v, s, t, q) in self.holding.unwrap_or_default() {
                if holding.insert((v, s, t), q.0).is_some() {
                    return malformed(format!("duplicate holding entry ({v}, {s}, {t})"));
                }
            }
            return Ok(Problem::Inventory(InventoryInstance::new(
                self.n_items,
                self.horizon,
                demands,
                holding,
                self.oracle,
            )?));
        }
        Ok(Problem::Cover(CoverInstance::build(
            self.n_items,
            self.horizon,
            self.windows,
            self.oracle,
            self.oracle_items,
            self.nice,
        )?))
    }
}

impl Serialize for CoverInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoverInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match InstanceFile::deserialize(d)?.into_problem() {
            Ok(Problem::Cover(c)) => Ok(c),
            Ok(Problem::Inventory(_)) => Err(D::Error::custom("expected a cover instance")),
            Err(e) => Err(D::Error::custom(e.to_string())),
        }
    }
}
