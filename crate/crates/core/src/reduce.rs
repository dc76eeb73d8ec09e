//! Constructive reductions between cover instances.
//!
//! Every derived instance carries a [`Lineage`] mapping its days and items
//! back to the instance it came from, so schedules for sub-instances can be
//! translated and merged.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{infeasible, malformed, Result};
use crate::intervals::{self, AlignedKind, Interval};
use crate::model::{CoverInstance, Day, DemandWindow, FractionalSetSolution, InventoryInstance, ItemId, ItemSet, Schedule};
use crate::num::{self, Rational};

/// Maps local days and items of a derived instance to its origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lineage {
    /// `days[t-1]` is the origin day of local day `t`; `None` for padding.
    pub days: Vec<Option<Day>>,
    /// `items[v]` is the origin item of local item `v`.
    pub items: Vec<ItemId>,
}

impl Lineage {
    pub fn identity(ci: &CoverInstance) -> Self {
        Lineage { days: (1..=ci.horizon).map(Some).collect(), items: (0..ci.n_items).collect() }
    }

    /// Composes `self` (local → middle) with `outer` (middle → origin).
    pub fn then(&self, outer: &Lineage) -> Result<Lineage> {
        let days = self
            .days
            .iter()
            .map(|d| match d {
                None => Ok(None),
                Some(d) if *d >= 1 && *d <= outer.days.len() => Ok(outer.days[d - 1]),
                Some(d) => malformed(format!("lineage day {d} outside the outer horizon")),
            })
            .collect::<Result<_>>()?;
        let items = self
            .items
            .iter()
            .map(|&v| outer.items.get(v).copied().ok_or(()))
            .collect::<std::result::Result<_, _>>()
            .or_else(|_| malformed("lineage item outside the outer instance"))?;
        Ok(Lineage { days, items })
    }

    /// Rewrites a local schedule in origin days and items. Orders on padding
    /// days are dropped; they serve no window.
    pub fn translate(&self, s: &Schedule) -> Result<Schedule> {
        let mut out = Schedule::new();
        for (&d, set) in &s.sets {
            if d < 1 || d > self.days.len() {
                return malformed(format!("schedule day {d} outside the mapped horizon"));
            }
            let Some(od) = self.days[d - 1] else { continue };
            for &v in set {
                match self.items.get(v) {
                    Some(&ov) => out.add(od, ov),
                    None => return malformed(format!("schedule item {v} has no mapping")),
                }
            }
        }
        out.prune();
        Ok(out)
    }
}

/// A derived instance with its fractional solution and lineage.
#[derive(Clone, Debug)]
pub struct Piece {
    pub instance: CoverInstance,
    pub y: FractionalSetSolution,
    pub lineage: Lineage,
}

impl Piece {
    pub fn root(ci: CoverInstance, y: FractionalSetSolution) -> Piece {
        let lineage = Lineage::identity(&ci);
        Piece { instance: ci, y, lineage }
    }
}

/// Builds the instance over `items` (parent ids, in local order) with local
/// windows; oracle items are inherited from the parent.
fn derive(parent: &CoverInstance, items: &[ItemId], horizon: usize, windows: Vec<DemandWindow>) -> Result<CoverInstance> {
    let identity = parent.oracle_items.is_none() && items.iter().enumerate().all(|(i, &v)| i == v);
    let map = (!identity).then(|| items.iter().map(|&v| parent.oracle_item(v)).collect());
    let mut windows = windows;
    windows.sort();
    windows.dedup();
    CoverInstance::build(items.len(), horizon, windows, parent.oracle.clone(), map, false)
}

/// Re-indexes `y`: each entry moves to `day(t)` and each item to `item(v)`.
fn remap_y(
    y: &FractionalSetSolution,
    day: impl Fn(Day) -> Option<Day>,
    item: impl Fn(ItemId) -> Vec<ItemId>,
) -> FractionalSetSolution {
    let mut out = FractionalSetSolution::new();
    for (t, s, w) in y.iter() {
        if let Some(nt) = day(t) {
            let set: ItemSet = s.iter().flat_map(|&v| item(v)).collect();
            out.add(nt, set, w.clone());
        }
    }
    out
}

fn aligned_left(ci: &CoverInstance) -> bool {
    let ivs: Vec<Interval> = ci.windows.iter().map(|w| w.interval()).collect();
    matches!(
        intervals::aligned_kind(&ivs),
        AlignedKind::Left | AlignedKind::Laminar | AlignedKind::BothTrivially
    )
}

pub fn is_left_aligned(ci: &CoverInstance) -> bool {
    aligned_left(ci)
}

/// Largest s with Σ_{r≥s} x̂_{rt} ≥ 1/2, per positive demand (v, t).
pub fn median_windows(
    inv: &InventoryInstance,
    xhat: &BTreeMap<(ItemId, Day, Day), Rational>,
    yhat: &FractionalSetSolution,
) -> Result<(CoverInstance, FractionalSetSolution)> {
    let half = num::half();
    let mut windows = Vec::new();
    for (v, t, _) in inv.positive_demands() {
        let total: Rational = (1..=t).filter_map(|s| xhat.get(&(v, s, t))).sum();
        if total < Rational::one() {
            return infeasible(format!("demand ({v}, {t}) is assigned {} < 1", num::format(&total)));
        }
        let mut tail = Rational::zero();
        let mut start = 1;
        for s in (1..=t).rev() {
            if let Some(x) = xhat.get(&(v, s, t)) {
                tail += x;
            }
            if tail >= half {
                start = s;
                break;
            }
        }
        windows.push(DemandWindow::new(v, start, t));
    }
    windows.sort();
    windows.dedup();
    let ci = CoverInstance::new(inv.n_items, inv.horizon, windows, inv.oracle.clone())?;
    Ok((ci, yhat.scaled(&num::int(2))))
}

/// Splits every window into its right-aligned part R and left-aligned part L
/// and keeps the part that carries at least half of its coverage. Returns
/// (left, right) pieces, each with solution 2y.
pub fn split_left_right(ci: &CoverInstance, y: &FractionalSetSolution) -> Result<(Piece, Piece)> {
    y.check_feasible(ci)?;
    let half = num::half();
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for w in &ci.windows {
        let (r, l) = intervals::split_lr(w.interval());
        let r = r.expect("right part is never empty");
        match l {
            Some(l) if y.coverage(&DemandWindow::new(w.item, l.start, l.end)) >= half => {
                left.push(DemandWindow::new(w.item, l.start, l.end))
            }
            _ => right.push(DemandWindow::new(w.item, r.start, r.end)),
        }
    }
    let items: Vec<ItemId> = (0..ci.n_items).collect();
    let y2 = y.scaled(&num::int(2));
    let lci = derive(ci, &items, ci.horizon, left)?;
    let rci = derive(ci, &items, ci.horizon, right)?;
    Ok((
        Piece { lineage: Lineage::identity(&lci), instance: lci, y: y2.clone() },
        Piece { lineage: Lineage::identity(&rci), instance: rci, y: y2 },
    ))
}

/// Reverses time on the next power of two: t ↦ T_m + 1 − t. Turns a
/// right-aligned family into a left-aligned one.
pub fn mirror(ci: &CoverInstance, y: &FractionalSetSolution) -> Result<Piece> {
    let tm = ci.horizon.next_power_of_two();
    let flip = |t: Day| tm + 1 - t;
    let windows = ci.windows.iter().map(|w| DemandWindow::new(w.item, flip(w.end), flip(w.start))).collect();
    let items: Vec<ItemId> = (0..ci.n_items).collect();
    let mci = derive(ci, &items, tm, windows)?;
    let my = remap_y(y, |t| Some(flip(t)), |v| vec![v]);
    let days = (1..=tm).map(|t| (flip(t) <= ci.horizon).then(|| flip(t))).collect();
    Ok(Piece { instance: mci, y: my, lineage: Lineage { days, items } })
}

/// Groups items by descending singleton cost so that within each group the
/// smallest singleton cost is at least the largest over the group size.
pub fn well_separated_groups(ci: &CoverInstance) -> Result<Vec<Vec<ItemId>>> {
    let single: Vec<Rational> = (0..ci.n_items).map(|v| ci.cost_of(&[v])).collect::<Result<_>>()?;
    let mut groups = Vec::new();
    let mut rest: Vec<ItemId> = (0..ci.n_items).collect();
    while !rest.is_empty() {
        let mu = rest.iter().map(|&v| &single[v]).max().unwrap().clone();
        let cut = mu / num::int(rest.len() as i64);
        let (keep, moved): (Vec<ItemId>, Vec<ItemId>) = rest.iter().partition(|&&v| single[v] >= cut);
        groups.push(keep);
        rest = moved;
    }
    Ok(groups)
}

/// One instance per well-separated group, windows untouched.
pub fn well_separated_partition(ci: &CoverInstance) -> Result<Vec<(CoverInstance, Lineage)>> {
    well_separated_groups(ci)?
        .into_iter()
        .map(|items| {
            let pos: BTreeMap<ItemId, usize> = items.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let windows = ci
                .windows
                .iter()
                .filter_map(|w| pos.get(&w.item).map(|&i| DemandWindow::new(i, w.start, w.end)))
                .collect();
            let gci = derive(ci, &items, ci.horizon, windows)?;
            let lin = Lineage { days: (1..=ci.horizon).map(Some).collect(), items };
            Ok((gci, lin))
        })
        .collect()
}

/// Restricts `y` to the items of `lin` (local ids), dropping emptied sets.
pub fn restrict_y(y: &FractionalSetSolution, lin: &Lineage) -> FractionalSetSolution {
    let pos: BTreeMap<ItemId, usize> = lin.items.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    remap_y(y, Some, |v| pos.get(&v).map(|&i| vec![i]).unwrap_or_default())
}

/// Makes every day's mass either zero or at least one, at most doubling the
/// cost. A run of days starting at a fractional day ℓ and ending at the first
/// m where the run's mass reaches one has its whole coverage copied to ℓ and
/// m. A trailing run that never reaches one is moved onto the last earlier
/// day with positive mass.
pub fn sparsify(y: &FractionalSetSolution, ci: &CoverInstance) -> Result<FractionalSetSolution> {
    y.check_feasible(ci)?;
    let horizon = ci.horizon;
    let one = Rational::one();
    let mass: Vec<Rational> = (0..=horizon).map(|t| y.day_mass(t)).collect();
    let bad = |m: &Rational| m.is_positive() && *m < one;
    let mut out = y.clone();
    let gather = |lo: Day, hi: Day| -> Vec<(ItemSet, Rational)> {
        let mut acc = FractionalSetSolution::new();
        for (t, s, w) in y.iter() {
            if lo <= t && t <= hi {
                acc.add(0, s.clone(), w.clone());
            }
        }
        acc.entries.remove(&0).unwrap_or_default()
    };
    let mut k = 0;
    while let Some(l) = (k + 1..=horizon).find(|&t| bad(&mass[t])) {
        let mut run = Rational::zero();
        let mut end = None;
        for t in l..=horizon {
            run += &mass[t];
            if run >= one {
                end = Some(t);
                break;
            }
        }
        match end {
            Some(m) => {
                let combined = gather(l, m);
                for t in l..=m {
                    out.entries.remove(&t);
                }
                out.entries.insert(l, combined.clone());
                out.entries.insert(m, combined);
                k = m;
            }
            None => {
                let moved = gather(l, horizon);
                for t in l..=horizon {
                    out.entries.remove(&t);
                }
                let p = out.entries.range(..l).rev().find(|(_, v)| !v.is_empty()).map(|(&d, _)| d);
                if let Some(p) = p {
                    for (s, w) in moved {
                        out.add(p, s, w);
                    }
                }
                break;
            }
        }
    }
    out.entries.retain(|_, v| !v.is_empty());
    Ok(out)
}

/// Output of [`bound_time_horizon`].
#[derive(Clone, Debug)]
pub struct HorizonBound {
    /// Chunk instances, each with horizon at most N², lineage to the input.
    pub pieces: Vec<Piece>,
    /// Full-group orders at every N²-th surviving day, in input days/items.
    pub resets: Schedule,
}

/// Cuts a left-aligned instance into instances of horizon at most N².
///
/// Per well-separated group: sparsify, drop zero-mass days, order the whole
/// group at every N²-th surviving day and keep, between consecutive resets,
/// the windows that avoid every reset day.
pub fn bound_time_horizon(ci: &CoverInstance, y: &FractionalSetSolution) -> Result<HorizonBound> {
    if !aligned_left(ci) {
        return malformed("horizon bounding needs a left-aligned instance");
    }
    y.check_feasible(ci)?;
    let n = ci.n_items;
    let b = n * n;
    if ci.horizon <= b {
        return Ok(HorizonBound { pieces: vec![Piece::root(ci.clone(), y.clone())], resets: Schedule::new() });
    }
    let mut pieces = Vec::new();
    let mut resets = Schedule::new();
    for (gci, glin) in well_separated_partition(ci)? {
        if gci.windows.is_empty() {
            continue;
        }
        let gy = sparsify(&restrict_y(y, &glin), &gci)?;
        // Surviving days, 1-based compressed index → group day.
        let alive: Vec<Day> = (1..=gci.horizon).filter(|&t| gy.day_mass(t).is_positive()).collect();
        let rank: BTreeMap<Day, usize> = alive.iter().enumerate().map(|(i, &d)| (d, i + 1)).collect();
        let tc = alive.len();
        let reset_days: BTreeSet<usize> = (1..).map(|q| q * b).take_while(|&d| d < tc).collect();
        for &r in &reset_days {
            resets.add_set(alive[r - 1], glin.items.iter().copied());
        }
        // Compressed windows.
        let mut cw = Vec::new();
        for w in &gci.windows {
            let lo = rank.range(w.start..=w.end).next().map(|(_, &i)| i);
            let hi = rank.range(w.start..=w.end).next_back().map(|(_, &i)| i);
            match (lo, hi) {
                (Some(lo), Some(hi)) => cw.push(DemandWindow::new(w.item, lo, hi)),
                _ => return infeasible("window without surviving days after sparsification"),
            }
        }
        let mut bounds = Vec::new();
        let mut lo = 1;
        for &r in &reset_days {
            if lo < r {
                bounds.push((lo, r - 1));
            }
            lo = r + 1;
        }
        if lo <= tc {
            bounds.push((lo, tc));
        }
        for (lo, hi) in bounds {
            let inside: Vec<&DemandWindow> = cw.iter().filter(|w| lo <= w.start && w.end <= hi).collect();
            if inside.is_empty() {
                continue;
            }
            let items: Vec<ItemId> = inside.iter().map(|w| w.item).collect::<BTreeSet<_>>().into_iter().collect();
            let pos: BTreeMap<ItemId, usize> = items.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let windows = inside.iter().map(|w| DemandWindow::new(pos[&w.item], w.start - lo + 1, w.end - lo + 1)).collect();
            let chunk = derive(&gci, &items, hi - lo + 1, windows)?;
            let cy = remap_y(
                &gy,
                |t| rank.get(&t).filter(|&&c| lo <= c && c <= hi).map(|&c| c - lo + 1),
                |v| pos.get(&v).map(|&i| vec![i]).unwrap_or_default(),
            );
            let local = Lineage { days: (lo..=hi).map(|c| Some(alive[c - 1])).collect(), items };
            let lineage = local.then(&glin)?;
            pieces.push(Piece { instance: chunk, y: cy, lineage });
        }
    }
    resets.prune();
    Ok(HorizonBound { pieces, resets })
}

/// One item copy per window and the horizon rounded up to 2^(2^k).
pub fn nicify(ci: &CoverInstance) -> Result<(CoverInstance, Lineage)> {
    if !aligned_left(ci) {
        return malformed("nicify needs a left-aligned instance");
    }
    let mut ws = ci.windows.clone();
    ws.sort();
    ws.dedup();
    let horizon = intervals::next_tower(ci.horizon);
    let items: Vec<ItemId> = ws.iter().map(|w| w.item).collect();
    let windows = ws.iter().enumerate().map(|(i, w)| DemandWindow::new(i, w.start, w.end)).collect();
    let map = items.iter().map(|&v| ci.oracle_item(v)).collect();
    let nci = CoverInstance::build(items.len(), horizon, windows, ci.oracle.clone(), Some(map), true)?;
    let days = (1..=horizon).map(|t| (t <= ci.horizon).then_some(t)).collect();
    Ok((nci, Lineage { days, items }))
}

/// [`nicify`] carrying the fractional solution: each set is replaced by all
/// copies of its items.
pub fn nicify_piece(ci: &CoverInstance, y: &FractionalSetSolution) -> Result<Piece> {
    let (nci, lin) = nicify(ci)?;
    let mut copies: BTreeMap<ItemId, Vec<ItemId>> = BTreeMap::new();
    for (c, &v) in lin.items.iter().enumerate() {
        copies.entry(v).or_default().push(c);
    }
    let ny = remap_y(y, Some, |v| copies.get(&v).cloned().unwrap_or_default());
    Ok(Piece { instance: nci, y: ny, lineage: lin })
}

/// Daywise union of translated sub-schedules.
pub fn recombine(subs: &[(Schedule, Lineage)]) -> Result<Schedule> {
    let mut out = Schedule::new();
    for (s, lin) in subs {
        out = out.union(&lin.translate(s)?);
    }
    out.prune();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CostOracle, FractionalSetSolution};

    fn modular(n: usize) -> CostOracle {
        CostOracle::ModularWithBase { base: num::int(1), weights: vec![num::int(1); n] }
    }

    fn set(v: &[usize]) -> ItemSet {
        v.iter().copied().collect()
    }

    #[test]
    fn median_examples() {
        let mut demands = BTreeMap::new();
        demands.insert((0, 4), num::int(1));
        let inv = InventoryInstance::new(1, 4, demands, BTreeMap::new(), modular(1)).unwrap();
        let q = num::ratio(1, 4);
        let xhat: BTreeMap<_, _> = (1..=4).map(|s| ((0, s, 4), q.clone())).collect();
        let (ci, _) = median_windows(&inv, &xhat, &FractionalSetSolution::new()).unwrap();
        assert_eq!(ci.windows, vec![DemandWindow::new(0, 3, 4)]);

        let xhat: BTreeMap<_, _> = [((0, 4, 4), num::one())].into_iter().collect();
        let (ci, _) = median_windows(&inv, &xhat, &FractionalSetSolution::new()).unwrap();
        assert_eq!(ci.windows, vec![DemandWindow::new(0, 4, 4)]);

        let xhat: BTreeMap<_, _> = [((0, 1, 4), num::half())].into_iter().collect();
        assert!(median_windows(&inv, &xhat, &FractionalSetSolution::new()).is_err());
    }

    #[test]
    fn median_tie_keeps_later_day() {
        let mut demands = BTreeMap::new();
        demands.insert((0, 2), num::int(1));
        let inv = InventoryInstance::new(1, 2, demands, BTreeMap::new(), modular(1)).unwrap();
        let xhat: BTreeMap<_, _> = [((0, 1, 2), num::half()), ((0, 2, 2), num::half())].into_iter().collect();
        let (ci, _) = median_windows(&inv, &xhat, &FractionalSetSolution::new()).unwrap();
        assert_eq!(ci.windows, vec![DemandWindow::new(0, 2, 2)]);
    }

    #[test]
    fn split_examples() {
        let ci = CoverInstance::new(
            3,
            8,
            vec![DemandWindow::new(0, 3, 6), DemandWindow::new(1, 1, 4), DemandWindow::new(2, 7, 7)],
            modular(3),
        )
        .unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(5, set(&[0]), num::one());
        y.add(2, set(&[1]), num::one());
        y.add(7, set(&[2]), num::one());
        let (l, r) = split_left_right(&ci, &y).unwrap();
        assert_eq!(l.instance.windows, vec![DemandWindow::new(0, 5, 6)]);
        assert_eq!(r.instance.windows, vec![DemandWindow::new(1, 1, 4), DemandWindow::new(2, 7, 7)]);
        assert!(l.y.check_feasible(&l.instance).is_ok());
        assert!(r.y.check_feasible(&r.instance).is_ok());
    }

    #[test]
    fn mirror_makes_right_aligned_left_aligned() {
        let ci = CoverInstance::new(2, 6, vec![DemandWindow::new(0, 3, 4), DemandWindow::new(1, 5, 6)], modular(2))
            .unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(4, set(&[0]), num::one());
        y.add(5, set(&[1]), num::one());
        let p = mirror(&ci, &y).unwrap();
        assert_eq!(p.instance.horizon, 8);
        assert!(is_left_aligned(&p.instance));
        assert!(p.y.check_feasible(&p.instance).is_ok());
        assert_eq!(p.lineage.days[0], None);
        assert_eq!(p.lineage.days[7], Some(1));
    }

    #[test]
    fn well_separated_examples() {
        let o = CostOracle::ModularWithBase {
            base: num::int(0),
            weights: [8, 4, 2, 1].iter().map(|&w| num::int(w)).collect(),
        };
        let ci = CoverInstance::new(4, 4, vec![], o).unwrap();
        assert_eq!(well_separated_groups(&ci).unwrap(), vec![vec![0, 1, 2], vec![3]]);

        let o = CostOracle::ModularWithBase { base: num::int(0), weights: vec![num::int(100), num::int(1)] };
        let ci = CoverInstance::new(2, 4, vec![], o).unwrap();
        assert_eq!(well_separated_groups(&ci).unwrap(), vec![vec![0], vec![1]]);

        let ci = CoverInstance::new(3, 4, vec![], modular(3)).unwrap();
        assert_eq!(well_separated_groups(&ci).unwrap().len(), 1);
    }

    #[test]
    fn sparsify_examples() {
        // Unit mass per day stays.
        let ci = CoverInstance::new(1, 4, vec![DemandWindow::new(0, 1, 2)], modular(1)).unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(1, set(&[0]), num::one());
        y.add(2, set(&[0]), num::one());
        assert_eq!(sparsify(&y, &ci).unwrap(), y);

        // Trailing bad day moves back.
        let ci = CoverInstance::new(1, 4, vec![DemandWindow::new(0, 2, 3)], modular(1)).unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(2, set(&[0]), num::one());
        y.add(3, set(&[0]), num::ratio(2, 5));
        let s = sparsify(&y, &ci).unwrap();
        assert_eq!(s.day_mass(2), num::ratio(7, 5));
        assert!(s.day_mass(3).is_zero());

        // Run ℓ..m copied to both ends.
        let ci = CoverInstance::new(1, 4, vec![DemandWindow::new(0, 1, 3)], modular(1)).unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(1, set(&[0]), num::ratio(2, 5));
        y.add(2, set(&[0]), num::ratio(7, 10));
        let s = sparsify(&y, &ci).unwrap();
        assert_eq!(s.day_mass(1), num::ratio(11, 10));
        assert_eq!(s.day_mass(2), num::ratio(11, 10));
        assert!(s.check_feasible(&ci).is_ok());
    }

    #[test]
    fn horizon_examples() {
        // Compressed to the active days.
        let ci = CoverInstance::new(2, 16, vec![DemandWindow::new(0, 1, 1), DemandWindow::new(1, 9, 9)], modular(2))
            .unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(1, set(&[0]), num::one());
        y.add(9, set(&[1]), num::one());
        let hb = bound_time_horizon(&ci, &y).unwrap();
        assert_eq!(hb.pieces.len(), 1);
        assert_eq!(hb.pieces[0].instance.horizon, 2);
        assert_eq!(hb.pieces[0].lineage.days, vec![Some(1), Some(9)]);
        assert!(hb.resets.sets.is_empty());

        // N = 1: resets everywhere but the last surviving day.
        let ci = CoverInstance::new(1, 4, vec![DemandWindow::new(0, 1, 2), DemandWindow::new(0, 3, 4)], modular(1))
            .unwrap();
        let mut y = FractionalSetSolution::new();
        y.add(2, set(&[0]), num::one());
        y.add(4, set(&[0]), num::one());
        let hb = bound_time_horizon(&ci, &y).unwrap();
        assert!(hb.pieces.iter().all(|p| p.instance.horizon == 1));
        assert!(hb.resets.contains(2, 0));
    }

    #[test]
    fn nicify_examples() {
        let ci = CoverInstance::new(1, 10, vec![DemandWindow::new(0, 1, 2), DemandWindow::new(0, 5, 6)], modular(1))
            .unwrap();
        let (n, lin) = nicify(&ci).unwrap();
        assert_eq!(n.n_items, 2);
        assert_eq!(n.horizon, 16);
        assert!(n.satisfies_nice());
        assert_eq!(lin.items, vec![0, 0]);
        let ci = CoverInstance::new(1, 16, vec![DemandWindow::new(0, 1, 2)], modular(1)).unwrap();
        assert_eq!(nicify(&ci).unwrap().0.horizon, 16);
    }

    #[test]
    fn recombine_examples() {
        let ci = CoverInstance::new(2, 4, vec![DemandWindow::new(0, 1, 2), DemandWindow::new(1, 3, 4)], modular(2))
            .unwrap();
        let mut s = Schedule::new();
        s.add(1, 0);
        s.add(3, 1);
        let id = Lineage::identity(&ci);
        assert_eq!(recombine(&[(s.clone(), id.clone())]).unwrap(), s);
        let bad = Lineage { days: vec![Some(1)], items: vec![0] };
        assert!(recombine(&[(s, bad)]).is_err());
    }
}
