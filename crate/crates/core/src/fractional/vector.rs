//! Vector-form fractional solutions and the chain conversions.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{infeasible, Result};
use crate::model::{CoverInstance, Day, FractionalSetSolution, ItemId, SetFn};
use crate::num::{serde_q::Q, Rational};
use crate::round_sjrp::lovasz_value;

/// x^t_v for every day t (rows, day t at index t−1) and item v.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalVectorSolution {
    pub x: Vec<Vec<Rational>>,
}

impl FractionalVectorSolution {
    pub fn zeros(horizon: usize, n: usize) -> Self {
        FractionalVectorSolution { x: vec![vec![Rational::zero(); n]; horizon] }
    }

    pub fn horizon(&self) -> usize {
        self.x.len()
    }

    pub fn day(&self, t: Day) -> &[Rational] {
        &self.x[t - 1]
    }

    pub fn day_mut(&mut self, t: Day) -> &mut Vec<Rational> {
        &mut self.x[t - 1]
    }

    /// Σ_{t∈[s,e]} x^t_v.
    pub fn window_mass(&self, v: ItemId, s: Day, e: Day) -> Rational {
        (s..=e).map(|t| &self.x[t - 1][v]).sum()
    }

    /// Σ_t f̂(x^t).
    pub fn value<F: SetFn + ?Sized>(&self, f: &F) -> Result<Rational> {
        let mut total = Rational::zero();
        for row in &self.x {
            total += lovasz_value(f, row)?;
        }
        Ok(total)
    }

    /// Checks entries in [0, 1] and window coverage ≥ 1.
    pub fn check_feasible(&self, ci: &CoverInstance) -> Result<()> {
        if self.x.len() != ci.horizon || self.x.iter().any(|r| r.len() != ci.n_items) {
            return infeasible("vector solution has the wrong shape");
        }
        if self.x.iter().flatten().any(|v| v.is_negative() || v > &Rational::one()) {
            return infeasible("vector solution entry outside [0, 1]");
        }
        for w in &ci.windows {
            if self.window_mass(w.item, w.start, w.end) < Rational::one() {
                return infeasible(format!("window {}:[{}, {}] has mass below 1", w.item, w.start, w.end));
            }
        }
        Ok(())
    }
}

impl Serialize for FractionalVectorSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut wire: BTreeMap<Day, BTreeMap<ItemId, Q>> = BTreeMap::new();
        for (i, row) in self.x.iter().enumerate() {
            let m: BTreeMap<ItemId, Q> =
                row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(v, q)| (v, Q(q.clone()))).collect();
            if !m.is_empty() {
                wire.insert(i + 1, m);
            }
        }
        #[derive(Serialize)]
        struct Wire<'a> {
            horizon: usize,
            n_items: usize,
            x: &'a BTreeMap<Day, BTreeMap<ItemId, Q>>,
        }
        let n = self.x.first().map_or(0, |r| r.len());
        Wire { horizon: self.x.len(), n_items: n, x: &wire }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FractionalVectorSolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Wire {
            horizon: usize,
            n_items: usize,
            x: BTreeMap<Day, BTreeMap<ItemId, Q>>,
        }
        let w = Wire::deserialize(d)?;
        let mut out = FractionalVectorSolution::zeros(w.horizon, w.n_items);
        for (t, row) in w.x {
            for (v, q) in row {
                if t < 1 || t > w.horizon || v >= w.n_items {
                    return Err(D::Error::custom("entry out of range"));
                }
                out.x[t - 1][v] = q.0;
            }
        }
        Ok(out)
    }
}

/// x^t_v = Σ_{S∋v} y_t^S.
pub fn y_to_x(y: &FractionalSetSolution, horizon: usize, n: usize) -> FractionalVectorSolution {
    let mut out = FractionalVectorSolution::zeros(horizon, n);
    for (t, s, w) in y.iter() {
        for &v in s {
            out.x[t - 1][v] += w;
        }
    }
    out
}

/// Chain of level sets of each x^t, weighted by consecutive threshold gaps.
pub fn x_to_y(x: &FractionalVectorSolution) -> FractionalSetSolution {
    let mut y = FractionalSetSolution::new();
    for (i, row) in x.x.iter().enumerate() {
        let mut vals: Vec<&Rational> = row.iter().filter(|v| v.is_positive()).collect();
        vals.sort_by(|a, b| b.cmp(a));
        vals.dedup();
        for (j, theta) in vals.iter().enumerate() {
            let next = vals.get(j + 1).map_or_else(Rational::zero, |v| (*v).clone());
            let set = (0..row.len()).filter(|&v| &row[v] >= *theta).collect();
            y.add(i + 1, set, *theta - next);
        }
    }
    y
}

/// Zeroes mass outside an item's windows and trims each window's mass down
/// to exactly one, latest days first. Meant for one window per item.
pub fn normalize_windows(x: &mut FractionalVectorSolution, ci: &CoverInstance) {
    for v in 0..ci.n_items {
        for t in 1..=x.horizon() {
            if !ci.windows_of(v).any(|w| w.contains(t)) {
                x.x[t - 1][v] = Rational::zero();
            }
        }
    }
    for w in &ci.windows {
        let mut excess = x.window_mass(w.item, w.start, w.end) - Rational::one();
        let mut t = w.end;
        while excess.is_positive() && t >= w.start {
            let cell = &mut x.x[t - 1][w.item];
            let cut = if *cell < excess { cell.clone() } else { excess.clone() };
            *cell -= &cut;
            excess -= cut;
            t -= 1;
        }
    }
    // Entries above one (possible when y over-covers) are capped.
    for row in x.x.iter_mut() {
        for v in row.iter_mut() {
            if *v > Rational::one() {
                *v = Rational::one();
            }
        }
    }
}
