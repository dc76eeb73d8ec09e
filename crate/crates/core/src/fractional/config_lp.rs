//! Configuration LP solved exactly by column generation over all item subsets.
//!
//! Every nonempty subset is priced each round (first in floating point, then
//! exactly once the float pass finds nothing), so the final basis is optimal
//! over the full set of 2^N − 1 columns per day.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{Certificate, RowKind, Simplex, Status};
use crate::model::{CoverInstance, Day, FractionalSetSolution, InventoryInstance, ItemId, ItemSet};
use crate::num::{self, Rational};

pub const DEFAULT_LP_CAP: usize = 12;
const COLUMNS_PER_DAY: usize = 4;

#[derive(Clone, Debug)]
pub struct ConfigLpSolution {
    pub y: FractionalSetSolution,
    pub value: Rational,
    /// Basis audit over the generated columns.
    pub certificate: Certificate,
    /// The final exact pricing pass found no column with negative reduced cost.
    pub pricing_exact: bool,
    pub columns: usize,
}

impl ConfigLpSolution {
    pub fn is_certified(&self) -> bool {
        self.pricing_exact && self.certificate.is_optimal()
    }
}

/// Exact and floating-point values of f on every subset mask.
pub(crate) struct SubsetTable {
    pub exact: Vec<Rational>,
    pub approx: Vec<f64>,
}

impl SubsetTable {
    pub fn new(n: usize, f: impl Fn(&[ItemId]) -> Result<Rational>) -> Result<Self> {
        let size = 1usize << n;
        let mut exact = Vec::with_capacity(size);
        let mut approx = Vec::with_capacity(size);
        for mask in 0..size {
            let q = f(&mask_items(mask))?;
            approx.push(num::to_f64(&q));
            exact.push(q);
        }
        Ok(SubsetTable { exact, approx })
    }
}

pub(crate) fn mask_items(mask: usize) -> Vec<ItemId> {
    (0..usize::BITS as usize).filter(|&v| mask >> v & 1 == 1).collect()
}

pub(crate) fn mask_set(mask: usize) -> ItemSet {
    mask_items(mask).into_iter().collect()
}

/// Masks with negative reduced cost f(S) − Σ_{v∈S} p_v, most negative first.
fn price(table: &SubsetTable, p_exact: &[Rational], exact: bool, keep: usize) -> Vec<usize> {
    let n = p_exact.len();
    let size = 1usize << n;
    let mut found: Vec<(f64, usize)> = Vec::new();
    if exact {
        let mut sums = vec![Rational::zero(); size];
        let mut neg: Vec<(Rational, usize)> = Vec::new();
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = &sums[mask & (mask - 1)] + &p_exact[low];
            let rc = &table.exact[mask] - &sums[mask];
            if rc.is_negative() {
                neg.push((rc, mask));
            }
        }
        neg.sort();
        return neg.into_iter().take(keep).map(|(_, m)| m).collect();
    }
    let p: Vec<f64> = p_exact.iter().map(num::to_f64).collect();
    let mut sums = vec![0f64; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + p[low];
        let rc = table.approx[mask] - sums[mask];
        if rc < -1e-9 * (1.0 + table.approx[mask].abs()) {
            found.push((rc, mask));
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // Confirm exactly before handing back.
    found
        .into_iter()
        .filter(|&(_, mask)| {
            let s: Rational = mask_items(mask).iter().map(|&v| &p_exact[v]).sum();
            (&table.exact[mask] - s).is_negative()
        })
        .take(keep)
        .map(|(_, m)| m)
        .collect()
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Capacity(format!(
            "configuration LP enumerates 2^{n} subsets; the cap is N ≤ {cap} (use the Lovász solver)"
        )));
    }
    Ok(())
}

pub fn solve_config_lp(ci: &CoverInstance) -> Result<ConfigLpSolution> {
    solve_config_lp_capped(ci, DEFAULT_LP_CAP)
}

pub fn solve_config_lp_capped(ci: &CoverInstance, cap: usize) -> Result<ConfigLpSolution> {
    let n = ci.n_items;
    check_cap(n, cap)?;
    let rows: Vec<(RowKind, Rational)> = ci.windows.iter().map(|_| (RowKind::Ge, num::one())).collect();
    if rows.is_empty() {
        return Ok(ConfigLpSolution {
            y: FractionalSetSolution::new(),
            value: Rational::zero(),
            certificate: Certificate {
                primal_feasible: true,
                dual_feasible: true,
                complementary: true,
                objectives_equal: true,
            },
            pricing_exact: true,
            columns: 0,
        });
    }
    let table = SubsetTable::new(n, |s| ci.cost_of(s))?;
    // rows_at[t][v]: windows of v containing t.
    let days = ci.active_days();
    let mut rows_at: BTreeMap<Day, Vec<Vec<usize>>> = BTreeMap::new();
    for &t in &days {
        rows_at.insert(t, vec![Vec::new(); n]);
    }
    for (r, w) in ci.windows.iter().enumerate() {
        for t in w.start..=w.end {
            rows_at.get_mut(&t).unwrap()[w.item].push(r);
        }
    }
    let mut lp = Simplex::new(rows);
    let mut cols: HashMap<(Day, usize), usize> = HashMap::new();
    let mut col_key: Vec<(Day, usize)> = Vec::new();
    let mut add = |lp: &mut Simplex, t: Day, mask: usize| {
        if cols.contains_key(&(t, mask)) {
            return false;
        }
        let entries: Vec<(usize, Rational)> =
            mask_items(mask).iter().flat_map(|&v| rows_at[&t][v].iter().map(|&r| (r, num::one()))).collect();
        let j = lp.add_column(table.exact[mask].clone(), entries);
        cols.insert((t, mask), j);
        col_key.push((t, mask));
        true
    };
    for w in &ci.windows {
        add(&mut lp, w.start, 1 << w.item);
    }
    let mut exact_pass = false;
    loop {
        match lp.solve()? {
            Status::Optimal => {}
            s => return Err(Error::Solver(format!("configuration LP ended {s:?}"))),
        }
        let pi = lp.duals();
        let mut added = false;
        for &t in &days {
            let p: Vec<Rational> = (0..n).map(|v| rows_at[&t][v].iter().map(|&r| &pi[r]).sum()).collect();
            for mask in price(&table, &p, exact_pass, COLUMNS_PER_DAY) {
                added |= add(&mut lp, t, mask);
            }
        }
        if added {
            exact_pass = false;
            continue;
        }
        if exact_pass {
            break;
        }
        exact_pass = true;
    }
    let x = lp.primal();
    let mut y = FractionalSetSolution::new();
    for (j, val) in x.iter().enumerate() {
        if val.is_positive() {
            let (t, mask) = col_key[j];
            y.add(t, mask_set(mask), val.clone());
        }
    }
    Ok(ConfigLpSolution {
        y,
        value: lp.objective(),
        certificate: lp.certify(),
        pricing_exact: true,
        columns: lp.n_cols(),
    })
}

/// Optimal solution of the inventory LP: assignment weights x̂^v_{st},
/// ordering weights ŷ and the objective value.
#[derive(Clone, Debug)]
pub struct InventoryLpSolution {
    pub x: BTreeMap<(ItemId, Day, Day), Rational>,
    pub y: FractionalSetSolution,
    pub value: Rational,
    pub certificate: Certificate,
}

pub fn solve_inventory_lp(inv: &InventoryInstance) -> Result<InventoryLpSolution> {
    solve_inventory_lp_capped(inv, DEFAULT_LP_CAP)
}

pub fn solve_inventory_lp_capped(inv: &InventoryInstance, cap: usize) -> Result<InventoryLpSolution> {
    let n = inv.n_items;
    check_cap(n, cap)?;
    let demands: Vec<(ItemId, Day, Rational)> = inv.positive_demands().map(|(v, t, d)| (v, t, d.clone())).collect();
    let mut rows = Vec::new();
    let mut eq_row = HashMap::new();
    let mut link_row: HashMap<(ItemId, Day, Day), usize> = HashMap::new();
    for &(v, t, _) in &demands {
        eq_row.insert((v, t), rows.len());
        rows.push((RowKind::Eq, num::one()));
        for s in 1..=t {
            link_row.insert((v, s, t), rows.len());
            rows.push((RowKind::Le, Rational::zero()));
        }
    }
    let table = SubsetTable::new(n, |s| inv.oracle.eval(s))?;
    let mut lp = Simplex::new(rows);
    let mut x_key = Vec::new();
    for (v, t, d) in &demands {
        for s in 1..=*t {
            let cost = d * inv.holding_cost(*v, s, *t);
            let j = lp.add_column(cost, vec![(eq_row[&(*v, *t)], num::one()), (link_row[&(*v, s, *t)], num::one())]);
            x_key.push((j, (*v, s, *t)));
        }
    }
    let mut y_cols: HashMap<(Day, usize), usize> = HashMap::new();
    let mut y_key: HashMap<usize, (Day, usize)> = HashMap::new();
    // link rows of item v at order day s
    let mut links_at: HashMap<(ItemId, Day), Vec<usize>> = HashMap::new();
    for (&(v, s, _), &r) in &link_row {
        links_at.entry((v, s)).or_default().push(r);
    }
    let mut add_y = |lp: &mut Simplex, s: Day, mask: usize| {
        if y_cols.contains_key(&(s, mask)) {
            return false;
        }
        let entries: Vec<(usize, Rational)> = mask_items(mask)
            .iter()
            .flat_map(|&v| links_at.get(&(v, s)).into_iter().flatten().map(|&r| (r, -num::one())))
            .collect();
        let j = lp.add_column(table.exact[mask].clone(), entries);
        y_cols.insert((s, mask), j);
        y_key.insert(j, (s, mask));
        true
    };
    for &(v, t, _) in &demands {
        add_y(&mut lp, t, 1 << v);
    }
    let mut exact_pass = false;
    loop {
        match lp.solve()? {
            Status::Optimal => {}
            s => return Err(Error::Solver(format!("inventory LP ended {s:?}"))),
        }
        let pi = lp.duals();
        let mut added = false;
        for s in 1..=inv.horizon {
            let p: Vec<Rational> = (0..n)
                .map(|v| links_at.get(&(v, s)).into_iter().flatten().map(|&r| -&pi[r]).sum())
                .collect();
            if p.iter().all(|q| q.is_zero()) {
                continue;
            }
            for mask in price(&table, &p, exact_pass, COLUMNS_PER_DAY) {
                added |= add_y(&mut lp, s, mask);
            }
        }
        if added {
            exact_pass = false;
            continue;
        }
        if exact_pass {
            break;
        }
        exact_pass = true;
    }
    let vals = lp.primal();
    let mut x = BTreeMap::new();
    for (j, key) in x_key {
        if vals[j].is_positive() {
            x.insert(key, vals[j].clone());
        }
    }
    let mut y = FractionalSetSolution::new();
    for (j, val) in vals.iter().enumerate() {
        if let Some(&(s, mask)) = y_key.get(&j) {
            if val.is_positive() {
                y.add(s, mask_set(mask), val.clone());
            }
        }
    }
    Ok(InventoryLpSolution { x, y, value: lp.objective(), certificate: lp.certify() })
}
