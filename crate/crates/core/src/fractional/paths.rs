//! Fractional path solutions: per-day rooted trees plus weighted directed
//! paths whose heads lie in the day's tree.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::oracle::mst;
use crate::model::{CostOracle, CoverInstance, DemandWindow, FractionalSetSolution, ItemId};
use crate::num::{serde_q, Rational};

/// Distances between instance items and the root; the root is node `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceMetric {
    pub root: usize,
    pub dist: Vec<Vec<Rational>>,
}

impl InstanceMetric {
    pub fn from_instance(ci: &CoverInstance) -> Result<Self> {
        let CostOracle::MetricSteiner { points, root, distances } = &ci.oracle else {
            return Err(Error::UnsupportedOracle(format!(
                "path solutions need a metric-steiner oracle, got {}",
                ci.oracle.kind_name()
            )));
        };
        let n = ci.n_items;
        let pt: Vec<usize> = (0..n).map(|v| points[ci.oracle_item(v)]).chain(std::iter::once(*root)).collect();
        let dist = pt.iter().map(|&a| pt.iter().map(|&b| distances[a][b].clone()).collect()).collect();
        Ok(InstanceMetric { root: n, dist })
    }

    pub fn d(&self, a: usize, b: usize) -> &Rational {
        &self.dist[a][b]
    }

    pub fn path_cost(&self, nodes: &[usize]) -> Rational {
        nodes.windows(2).map(|e| self.d(e[0], e[1])).sum()
    }
}

/// Tree on a subset of nodes; always contains the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayTree {
    pub nodes: BTreeSet<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl DayTree {
    pub fn bare(root: usize) -> Self {
        DayTree { nodes: std::iter::once(root).collect(), edges: Vec::new() }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.contains(&v)
    }

    pub fn cost(&self, m: &InstanceMetric) -> Rational {
        self.edges.iter().map(|&(a, b)| m.d(a, b)).sum()
    }

    /// Spanning tree of the union with a path whose head is in the tree.
    /// Returns the added cost.
    pub fn add_path(&mut self, path: &[usize], m: &InstanceMetric) -> Rational {
        let head = *path.last().expect("nonempty path");
        assert!(self.contains(head), "path head must lie in the tree");
        let mut added = Rational::zero();
        // Walk from the head towards the tail; each new node hangs off its successor.
        for k in (0..path.len().saturating_sub(1)).rev() {
            let (u, next) = (path[k], path[k + 1]);
            if !self.nodes.contains(&u) {
                self.nodes.insert(u);
                self.edges.push((u, next));
                added += m.d(u, next);
            }
        }
        added
    }
}

/// Directed path, tail first and head last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPath {
    pub nodes: Vec<usize>,
    #[serde(with = "serde_q")]
    pub weight: Rational,
}

impl WeightedPath {
    pub fn head(&self) -> usize {
        *self.nodes.last().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPathSolution {
    pub root: usize,
    /// trees[t-1]
    pub trees: Vec<DayTree>,
    /// paths[t-1]
    pub paths: Vec<Vec<WeightedPath>>,
}

impl FractionalPathSolution {
    pub fn bare(horizon: usize, root: usize) -> Self {
        FractionalPathSolution {
            root,
            trees: vec![DayTree::bare(root); horizon],
            paths: vec![Vec::new(); horizon],
        }
    }

    pub fn horizon(&self) -> usize {
        self.trees.len()
    }

    /// Σ_t Σ_P w_t(P) c(P).
    pub fn fractional_cost(&self, m: &InstanceMetric) -> Rational {
        self.paths.iter().flatten().map(|p| &p.weight * m.path_cost(&p.nodes)).sum()
    }

    pub fn tree_cost(&self, m: &InstanceMetric) -> Rational {
        self.trees.iter().map(|t| t.cost(m)).sum()
    }

    /// Connectivity of item v on day t: 1 if v is in the tree, else the
    /// weight of paths with a directed subpath from v into the tree.
    pub fn day_mass(&self, v: ItemId, t: usize) -> Rational {
        let tree = &self.trees[t - 1];
        if tree.contains(v) {
            return Rational::one();
        }
        self.paths[t - 1]
            .iter()
            .filter(|p| match p.nodes.iter().position(|&u| u == v) {
                Some(i) => p.nodes[i..].iter().any(|&u| tree.contains(u)),
                None => false,
            })
            .map(|p| &p.weight)
            .sum()
    }

    /// Σ_{t∈w} connectivity of the window's item.
    pub fn window_mass(&self, w: &DemandWindow) -> Rational {
        (w.start..=w.end).map(|t| self.day_mass(w.item, t)).sum()
    }

    /// Windows whose connectivity is below one.
    pub fn deficient(&self, ci: &CoverInstance) -> Vec<DemandWindow> {
        ci.windows.iter().filter(|w| self.window_mass(w) < Rational::one()).copied().collect()
    }

    /// Whether every path head lies in its day's tree.
    pub fn heads_in_trees(&self) -> bool {
        self.paths
            .iter()
            .zip(&self.trees)
            .all(|(ps, tr)| ps.iter().all(|p| tr.contains(p.head())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("path solution serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    horizon: usize,
    root: usize,
    trees: BTreeMap<usize, DayTree>,
    paths: BTreeMap<usize, Vec<WeightedPath>>,
}

impl Serialize for FractionalPathSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let trees = self
            .trees
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.edges.is_empty())
            .map(|(i, t)| (i + 1, t.clone()))
            .collect();
        let paths = self
            .paths
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, p)| (i + 1, p.clone()))
            .collect();
        Wire { horizon: self.horizon(), root: self.root, trees, paths }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FractionalPathSolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let mut out = FractionalPathSolution::bare(w.horizon, w.root);
        for (t, tree) in w.trees {
            if t < 1 || t > w.horizon {
                return Err(D::Error::custom("tree day out of range"));
            }
            out.trees[t - 1] = tree;
        }
        for (t, ps) in w.paths {
            if t < 1 || t > w.horizon {
                return Err(D::Error::custom("path day out of range"));
            }
            if ps.iter().any(|p| p.nodes.is_empty() || p.weight.is_negative()) {
                return Err(D::Error::custom("empty path or negative weight"));
            }
            out.paths[t - 1] = ps;
        }
        Ok(out)
    }
}

/// Directed path to the root through every node of `set`, of cost at most
/// twice the spanning tree on `set ∪ {root}`: the reversed preorder of that
/// tree, shortcut, followed by the root.
pub fn shortcut_path(m: &InstanceMetric, set: &[usize]) -> Vec<usize> {
    let mut pts = vec![m.root];
    pts.extend(set.iter().copied().filter(|&v| v != m.root));
    let (_, edges) = mst(&m.dist, &pts);
    let mut children = vec![Vec::new(); pts.len()];
    for (c, p) in edges {
        children[p].push(c);
    }
    for ch in children.iter_mut() {
        ch.sort_by_key(|&i| pts[i]);
    }
    let mut order = Vec::with_capacity(pts.len());
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        order.push(pts[i]);
        for &c in children[i].iter().rev() {
            stack.push(c);
        }
    }
    let mut path: Vec<usize> = order[1..].iter().rev().copied().collect();
    path.push(m.root);
    path
}

/// Bare-root trees and one shortcut path per (day, set) of `y`.
pub fn fps_from_sets(y: &FractionalSetSolution, ci: &CoverInstance) -> Result<FractionalPathSolution> {
    let m = InstanceMetric::from_instance(ci)?;
    let mut fps = FractionalPathSolution::bare(ci.horizon, m.root);
    for (t, set, w) in y.iter() {
        if t < 1 || t > ci.horizon {
            return Err(Error::Malformed(format!("set solution day {t} outside the horizon")));
        }
        let items: Vec<usize> = set.iter().copied().collect();
        fps.paths[t - 1].push(WeightedPath { nodes: shortcut_path(&m, &items), weight: w.clone() });
    }
    Ok(fps)
}

/// Σ_t Σ_P w_t(P) c(P) + Σ_t c(T_t).
pub fn fps_cost(fps: &FractionalPathSolution, m: &InstanceMetric) -> Rational {
    fps.fractional_cost(m) + fps.tree_cost(m)
}
