//! Lovász extension, level sets, truncation and α-supported level sets.

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::model::{ItemId, ItemSet, SetFn};
use crate::num::Rational;

/// Distinct positive values of `x` in decreasing order, with the level set
/// and its cost at each value.
struct Levels {
    values: Vec<Rational>,
    sets: Vec<Vec<ItemId>>,
    costs: Vec<Rational>,
}

fn levels<F: SetFn + ?Sized>(f: &F, x: &[Rational]) -> Result<Levels> {
    let mut order: Vec<usize> = (0..x.len()).filter(|&v| x[v].is_positive()).collect();
    order.sort_by(|&a, &b| x[b].cmp(&x[a]).then(a.cmp(&b)));
    let mut values = Vec::new();
    let mut sets = Vec::new();
    let mut costs = Vec::new();
    let mut cur: Vec<ItemId> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let val = x[order[i]].clone();
        while i < order.len() && x[order[i]] == val {
            cur.push(order[i]);
            i += 1;
        }
        let mut s = cur.clone();
        s.sort_unstable();
        costs.push(f.value(&s)?);
        sets.push(s);
        values.push(val);
    }
    Ok(Levels { values, sets, costs })
}

/// f̂(x) = ∫₀¹ f(L_θ(x)) dθ, computed exactly over the breakpoints.
pub fn lovasz_value<F: SetFn + ?Sized>(f: &F, x: &[Rational]) -> Result<Rational> {
    let lv = levels(f, x)?;
    let k = lv.values.len();
    let mut total = Rational::zero();
    for j in 0..k {
        let next = if j + 1 < k { lv.values[j + 1].clone() } else { Rational::zero() };
        total += (&lv.values[j] - next) * &lv.costs[j];
    }
    Ok(total)
}

/// L_θ(x) = {v : x_v ≥ θ}.
pub fn level_set(x: &[Rational], theta: &Rational) -> ItemSet {
    (0..x.len()).filter(|&v| &x[v] >= theta).collect()
}

/// Entrywise min(x_v, θ).
pub fn truncate(x: &[Rational], theta: &Rational) -> Vec<Rational> {
    x.iter().map(|v| if v > theta { theta.clone() } else { v.clone() }).collect()
}

/// An α-supported level set located by [`find_supported_level`].
#[derive(Clone, Debug, PartialEq)]
pub struct SupportedLevel {
    /// Largest θ in the set's level interval satisfying the support inequality.
    pub theta: Rational,
    /// Next breakpoint below the set's level interval (0 at the bottom).
    pub floor: Rational,
    pub set: Vec<ItemId>,
    pub set_cost: Rational,
    /// f̂(x) − f̂(x | floor).
    pub decrease: Rational,
}

/// Searches θ ∈ (0, 1] for a level set with f̂(x) − f̂(x|θ) ≥ α·f(L_θ(x)).
///
/// On the level interval (θ_{j+1}, θ_j] of the j-th level set the gap grows
/// linearly as θ decreases, so each interval is decided exactly. Returns the
/// qualifying level set with the smallest θ.
pub fn find_supported_level<F: SetFn + ?Sized>(
    f: &F,
    x: &[Rational],
    alpha: &Rational,
) -> Result<Option<SupportedLevel>> {
    let lv = levels(f, x)?;
    let k = lv.values.len();
    // gap[j] = f̂(x) − f̂(x | θ_j)
    let mut gap = vec![Rational::zero(); k + 1];
    for j in 0..k {
        let next = if j + 1 < k { lv.values[j + 1].clone() } else { Rational::zero() };
        gap[j + 1] = &gap[j] + (&lv.values[j] - next) * &lv.costs[j];
    }
    for j in (0..k).rev() {
        let top = &lv.values[j];
        let floor = if j + 1 < k { lv.values[j + 1].clone() } else { Rational::zero() };
        let need = alpha * &lv.costs[j];
        let theta = if gap[j] >= need {
            Some(top.clone())
        } else {
            // f > 0 here, since gap ≥ 0.
            let t = top - (&need - &gap[j]) / &lv.costs[j];
            if t > floor {
                Some(t)
            } else {
                None
            }
        };
        if let Some(theta) = theta {
            return Ok(Some(SupportedLevel {
                theta,
                floor,
                set: lv.sets[j].clone(),
                set_cost: lv.costs[j].clone(),
                decrease: gap[j + 1].clone(),
            }));
        }
    }
    Ok(None)
}

/// θ of [`find_supported_level`], or `None`.
pub fn find_supported_theta<F: SetFn + ?Sized>(f: &F, x: &[Rational], alpha: &Rational) -> Result<Option<Rational>> {
    Ok(find_supported_level(f, x, alpha)?.map(|s| s.theta))
}

/// Checks whether L_θ(x) is α-supported at the given θ.
pub fn is_supported<F: SetFn + ?Sized>(f: &F, x: &[Rational], theta: &Rational, alpha: &Rational) -> Result<bool> {
    let l: Vec<ItemId> = level_set(x, theta).into_iter().collect();
    let gap = lovasz_value(f, x)? - lovasz_value(f, &truncate(x, theta))?;
    Ok(gap >= alpha * f.value(&l)?)
}

/// L_1(x) as an item list.
pub fn top_set(x: &[Rational]) -> Vec<ItemId> {
    (0..x.len()).filter(|&v| x[v] >= Rational::one()).collect()
}
