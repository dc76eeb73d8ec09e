//! Cost oracle families.

use serde::{Deserialize, Serialize};

use crate::error::{malformed, Error, Result};
use crate::num::{self, serde_q, Rational};
use num_traits::{Signed, Zero};

/// A weighted subset of the oracle's ground set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedSet {
    #[serde(with = "serde_q")]
    pub weight: Rational,
    pub members: Vec<usize>,
}

/// Monotone subadditive set function with f(∅) = 0.
///
/// `MetricSteiner` evaluates the minimum spanning tree on the terminals
/// plus the root; the other four kinds are submodular.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CostOracle {
    /// f(S) = base + Σ_{v∈S} w_v for nonempty S.
    ModularWithBase {
        #[serde(with = "serde_q")]
        base: Rational,
        #[serde(with = "serde_q::vec")]
        weights: Vec<Rational>,
    },
    /// f(S) = g(|S|) with g concave, g(0) = 0; `steps[j]` is g(j).
    CardinalityConcave {
        #[serde(with = "serde_q::vec")]
        steps: Vec<Rational>,
    },
    /// f(S) = total weight of the sets that meet S.
    Coverage { n_items: usize, sets: Vec<WeightedSet> },
    /// Coverage where the sets form a laminar family.
    Laminar { n_items: usize, sets: Vec<WeightedSet> },
    /// Terminal MST over the points of S plus the root.
    /// `points[v]` is the row of item v in `distances`.
    MetricSteiner {
        points: Vec<usize>,
        root: usize,
        #[serde(with = "serde_q::vec_vec")]
        distances: Vec<Vec<Rational>>,
    },
}

impl CostOracle {
    pub fn kind_name(&self) -> &'static str {
        match self {
            CostOracle::ModularWithBase { .. } => "modular-with-base",
            CostOracle::CardinalityConcave { .. } => "cardinality-concave",
            CostOracle::Coverage { .. } => "coverage",
            CostOracle::Laminar { .. } => "laminar",
            CostOracle::MetricSteiner { .. } => "metric-steiner",
        }
    }

    pub fn is_submodular(&self) -> bool {
        !matches!(self, CostOracle::MetricSteiner { .. })
    }

    /// Number of ground items the oracle is defined on.
    pub fn ground_size(&self) -> usize {
        match self {
            CostOracle::ModularWithBase { weights, .. } => weights.len(),
            CostOracle::CardinalityConcave { steps } => steps.len().saturating_sub(1),
            CostOracle::Coverage { n_items, .. } | CostOracle::Laminar { n_items, .. } => *n_items,
            CostOracle::MetricSteiner { points, .. } => points.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CostOracle::ModularWithBase { base, weights } => {
                if base.is_negative() || weights.iter().any(|w| w.is_negative()) {
                    return malformed("modular oracle has a negative weight");
                }
            }
            CostOracle::CardinalityConcave { steps } => {
                if steps.is_empty() || !steps[0].is_zero() {
                    return malformed("cardinality oracle needs g(0) = 0");
                }
                for j in 1..steps.len() {
                    if steps[j] < steps[j - 1] {
                        return malformed("cardinality steps must be nondecreasing");
                    }
                    if j >= 2 && &steps[j] - &steps[j - 1] > &steps[j - 1] - &steps[j - 2] {
                        return malformed("cardinality steps must be concave");
                    }
                }
            }
            CostOracle::Coverage { n_items, sets } | CostOracle::Laminar { n_items, sets } => {
                for s in sets {
                    if s.weight.is_negative() {
                        return malformed("coverage set with negative weight");
                    }
                    if s.members.iter().any(|&m| m >= *n_items) {
                        return malformed("coverage set member out of range");
                    }
                }
                if let CostOracle::Laminar { .. } = self {
                    check_laminar(sets)?;
                }
            }
            CostOracle::MetricSteiner { points, root, distances } => {
                validate_metric(distances)?;
                let m = distances.len();
                if *root >= m || points.iter().any(|&p| p >= m) {
                    return malformed("metric point index out of range");
                }
            }
        }
        Ok(())
    }

    /// f(S) for S given as ground-item indices; duplicates are ignored.
    pub fn eval(&self, items: &[usize]) -> Result<Rational> {
        let n = self.ground_size();
        if let Some(&bad) = items.iter().find(|&&v| v >= n) {
            return Err(Error::Malformed(format!("item {bad} out of range for oracle of size {n}")));
        }
        let mut s: Vec<usize> = items.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Ok(Rational::zero());
        }
        Ok(match self {
            CostOracle::ModularWithBase { base, weights } => {
                s.iter().fold(base.clone(), |acc, &v| acc + &weights[v])
            }
            CostOracle::CardinalityConcave { steps } => steps[s.len()].clone(),
            CostOracle::Coverage { sets, .. } | CostOracle::Laminar { sets, .. } => sets
                .iter()
                .filter(|set| set.members.iter().any(|m| s.binary_search(m).is_ok()))
                .fold(Rational::zero(), |acc, set| acc + &set.weight),
            CostOracle::MetricSteiner { points, root, distances } => {
                let pts: Vec<usize> = s.iter().map(|&v| points[v]).collect();
                steiner_cost(distances, *root, &pts)
            }
        })
    }
}

fn check_laminar(sets: &[WeightedSet]) -> Result<()> {
    let norm: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            let mut m = s.members.clone();
            m.sort_unstable();
            m.dedup();
            m
        })
        .collect();
    for (i, a) in norm.iter().enumerate() {
        for b in &norm[i + 1..] {
            let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
            if common != 0 && common != a.len() && common != b.len() {
                return malformed("laminar oracle sets cross");
            }
        }
    }
    Ok(())
}

/// Checks squareness, symmetry, nonnegativity, zero diagonal and the
/// triangle inequality.
pub fn validate_metric(d: &[Vec<Rational>]) -> Result<()> {
    let m = d.len();
    if d.iter().any(|row| row.len() != m) {
        return malformed("distance matrix is not square");
    }
    for i in 0..m {
        if !d[i][i].is_zero() {
            return malformed("distance matrix has a nonzero diagonal");
        }
        for j in 0..m {
            if d[i][j].is_negative() {
                return malformed("distance matrix has a negative entry");
            }
            if d[i][j] != d[j][i] {
                return malformed("distance matrix is asymmetric");
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if &d[i][k] + &d[k][j] < d[i][j] {
                    return malformed("distance matrix violates the triangle inequality");
                }
            }
        }
    }
    Ok(())
}

/// Minimum spanning tree cost over `terminals ∪ {root}` (Prim).
pub fn steiner_cost(distances: &[Vec<Rational>], root: usize, terminals: &[usize]) -> Rational {
    let mut pts = vec![root];
    for &p in terminals {
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    mst(distances, &pts).0
}

/// Prim's algorithm over the listed points. Returns the cost and the tree
/// edges as pairs of positions in `pts` (child, parent).
pub fn mst(distances: &[Vec<Rational>], pts: &[usize]) -> (Rational, Vec<(usize, usize)>) {
    let k = pts.len();
    let mut total = Rational::zero();
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    if k <= 1 {
        return (total, edges);
    }
    let mut in_tree = vec![false; k];
    let mut best: Vec<Option<(Rational, usize)>> = vec![None; k];
    in_tree[0] = true;
    for j in 1..k {
        best[j] = Some((distances[pts[0]][pts[j]].clone(), 0));
    }
    for _ in 1..k {
        let mut pick: Option<usize> = None;
        for j in 0..k {
            if in_tree[j] {
                continue;
            }
            if let Some((d, _)) = &best[j] {
                if pick.is_none_or(|p| d < &best[p].as_ref().unwrap().0) {
                    pick = Some(j);
                }
            }
        }
        let j = pick.expect("complete graph");
        let (d, parent) = best[j].take().unwrap();
        total += &d;
        edges.push((j, parent));
        in_tree[j] = true;
        for i in 0..k {
            if !in_tree[i] {
                let nd = &distances[pts[j]][pts[i]];
                if best[i].as_ref().is_none_or(|(b, _)| nd < b) {
                    best[i] = Some((nd.clone(), j));
                }
            }
        }
    }
    (total, edges)
}

/// Floating-point copy of an oracle for the randomized and iterative fast paths.
#[derive(Clone, Debug)]
pub struct FastOracle {
    kind: FastKind,
}

#[derive(Clone, Debug)]
enum FastKind {
    Modular { base: f64, weights: Vec<f64> },
    Cardinality { steps: Vec<f64> },
    Coverage { sets: Vec<(f64, Vec<usize>)> },
    Steiner { points: Vec<usize>, root: usize, d: Vec<Vec<f64>> },
}

impl FastOracle {
    pub fn new(o: &CostOracle) -> Self {
        let f = |v: &Vec<Rational>| v.iter().map(num::to_f64).collect::<Vec<_>>();
        let kind = match o {
            CostOracle::ModularWithBase { base, weights } => {
                FastKind::Modular { base: num::to_f64(base), weights: f(weights) }
            }
            CostOracle::CardinalityConcave { steps } => FastKind::Cardinality { steps: f(steps) },
            CostOracle::Coverage { sets, .. } | CostOracle::Laminar { sets, .. } => FastKind::Coverage {
                sets: sets.iter().map(|s| (num::to_f64(&s.weight), s.members.clone())).collect(),
            },
            CostOracle::MetricSteiner { points, root, distances } => FastKind::Steiner {
                points: points.clone(),
                root: *root,
                d: distances.iter().map(f).collect(),
            },
        };
        FastOracle { kind }
    }

    /// f(S) in floating point.
    pub fn eval(&self, items: &[usize]) -> f64 {
        if items.is_empty() {
            return 0.0;
        }
        match &self.kind {
            FastKind::Modular { base, weights } => {
                let mut seen = items.to_vec();
                seen.sort_unstable();
                seen.dedup();
                base + seen.iter().map(|&v| weights[v]).sum::<f64>()
            }
            FastKind::Cardinality { steps } => {
                let mut seen = items.to_vec();
                seen.sort_unstable();
                seen.dedup();
                steps[seen.len()]
            }
            FastKind::Coverage { sets } => {
                let mut s = items.to_vec();
                s.sort_unstable();
                sets.iter()
                    .filter(|(_, m)| m.iter().any(|x| s.binary_search(x).is_ok()))
                    .map(|(w, _)| w)
                    .sum()
            }
            FastKind::Steiner { points, root, d } => {
                let mut pts = vec![*root];
                for &v in items {
                    if !pts.contains(&points[v]) {
                        pts.push(points[v]);
                    }
                }
                let k = pts.len();
                let mut in_tree = vec![false; k];
                let mut best = vec![f64::INFINITY; k];
                best[0] = 0.0;
                let mut total = 0.0;
                for _ in 0..k {
                    let mut j = usize::MAX;
                    for i in 0..k {
                        if !in_tree[i] && (j == usize::MAX || best[i] < best[j]) {
                            j = i;
                        }
                    }
                    in_tree[j] = true;
                    total += best[j];
                    for i in 0..k {
                        if !in_tree[i] {
                            best[i] = best[i].min(d[pts[j]][pts[i]]);
                        }
                    }
                }
                total
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};

    fn line() -> Vec<Vec<Rational>> {
        (0..3).map(|i: i64| (0..3).map(|j: i64| int((i - j).abs())).collect()).collect()
    }

    #[test]
    fn modular_example() {
        let o = CostOracle::ModularWithBase { base: int(2), weights: vec![int(1), int(3)] };
        assert_eq!(o.eval(&[0, 1]).unwrap(), int(6));
        assert_eq!(o.eval(&[]).unwrap(), int(0));
        assert!(o.eval(&[2]).is_err());
    }

    #[test]
    fn cardinality_example() {
        let o = CostOracle::CardinalityConcave { steps: vec![int(0), int(1), ratio(3, 2)] };
        o.validate().unwrap();
        assert_eq!(o.eval(&[0, 1]).unwrap(), ratio(3, 2));
    }

    #[test]
    fn steiner_examples() {
        let d = line();
        assert_eq!(steiner_cost(&d, 0, &[1, 2]), int(2));
        assert_eq!(steiner_cost(&d, 0, &[]), int(0));
        let d5 = vec![vec![int(0), int(5)], vec![int(5), int(0)]];
        assert_eq!(steiner_cost(&d5, 0, &[1]), int(5));
    }

    #[test]
    fn metric_validation() {
        let mut d = line();
        d[0][1] = int(4);
        assert!(validate_metric(&d).is_err());
        let mut d = line();
        d[0][2] = int(-1);
        d[2][0] = int(-1);
        assert!(validate_metric(&d).is_err());
        let mut d = line();
        d[0][2] = int(3);
        d[2][0] = int(3);
        assert!(validate_metric(&d).is_err());
    }

    #[test]
    fn laminar_rejects_crossing_sets() {
        let o = CostOracle::Laminar {
            n_items: 3,
            sets: vec![
                WeightedSet { weight: int(1), members: vec![0, 1] },
                WeightedSet { weight: int(1), members: vec![1, 2] },
            ],
        };
        assert!(o.validate().is_err());
    }

    #[test]
    fn fast_path_agrees() {
        let o = CostOracle::Coverage {
            n_items: 3,
            sets: vec![
                WeightedSet { weight: ratio(1, 2), members: vec![0, 1] },
                WeightedSet { weight: int(2), members: vec![2] },
            ],
        };
        let f = FastOracle::new(&o);
        for s in [vec![], vec![0], vec![0, 1], vec![1, 2]] {
            assert_eq!(f.eval(&s), num::to_f64(&o.eval(&s).unwrap()));
        }
        let st = CostOracle::MetricSteiner { points: vec![1, 2], root: 0, distances: line() };
        assert_eq!(FastOracle::new(&st).eval(&[0, 1]), 2.0);
    }
}
