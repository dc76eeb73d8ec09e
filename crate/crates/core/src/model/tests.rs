use proptest::prelude::*;

use super::*;
use crate::num::{self, Rational};

fn q(s: &str) -> Rational {
    num::parse(s).unwrap()
}

fn modular(base: i64, w: &[i64]) -> CostOracle {
    CostOracle::ModularWithBase { base: num::int(base), weights: w.iter().map(|&x| num::int(x)).collect() }
}

fn line(points: &[i64]) -> Vec<Vec<Rational>> {
    points.iter().map(|&a| points.iter().map(|&b| num::int((a - b).abs())).collect()).collect()
}

/// Cheapest spanning tree by trying every edge subset of the complete graph.
fn spanning_tree_by_subsets(d: &[Vec<Rational>], pts: &[usize]) -> Rational {
    let k = pts.len();
    let edges: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << edges.len() {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let mut comp: Vec<usize> = (0..k).collect();
        let mut cost = num::int(0);
        for (e, &(i, j)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let (ci, cj) = (comp[i], comp[j]);
                comp.iter_mut().filter(|c| **c == cj).for_each(|c| *c = ci);
                cost += &d[pts[i]][pts[j]];
            }
        }
        if comp.iter().all(|&c| c == comp[0]) && best.as_ref().is_none_or(|b| cost < *b) {
            best = Some(cost);
        }
    }
    best.unwrap()
}

#[test]
fn oracle_eval_examples() {
    assert_eq!(modular(2, &[1, 3]).eval(&[0, 1]).unwrap(), num::int(6));
    let card = CostOracle::CardinalityConcave { steps: vec![q("0"), q("1"), q("1.5")] };
    assert_eq!(card.eval(&[0, 1]).unwrap(), q("1.5"));
    let cov = CostOracle::Coverage { n_items: 2, sets: vec![WeightedSet { weight: q("2"), members: vec![0, 1] }] };
    for o in [modular(2, &[1, 3]), card, cov] {
        assert_eq!(o.eval(&[]).unwrap(), num::int(0));
    }
}

#[test]
fn steiner_examples() {
    let d = line(&[0, 1, 2]);
    assert_eq!(steiner_cost(&d, 0, &[1, 2]), num::int(2));
    assert_eq!(steiner_cost(&d, 0, &[1, 2]), spanning_tree_by_subsets(&d, &[0, 1, 2]));
    assert_eq!(steiner_cost(&d, 0, &[]), num::int(0));
    let d = line(&[0, 5]);
    assert_eq!(steiner_cost(&d, 0, &[1]), num::int(5));
}

#[test]
fn schedule_cost_examples() {
    let ci = CoverInstance::new(1, 2, vec![], modular(0, &[1])).unwrap();
    assert_eq!(schedule_cost(&ci, &Schedule::new()).unwrap(), num::int(0));
    let mut s = Schedule::new();
    s.add(1, 0);
    assert_eq!(schedule_cost(&ci, &s).unwrap(), num::int(1));
    s.add(2, 0);
    assert_eq!(schedule_cost(&ci, &s).unwrap(), num::int(2));
}

#[test]
fn check_feasible_examples() {
    let w = DemandWindow::new(0, 1, 2);
    let ci = CoverInstance::new(1, 3, vec![w], modular(0, &[1])).unwrap();
    let mut s = Schedule::new();
    s.add(2, 0);
    assert!(check_feasible(&ci, &s).is_empty());
    let mut s = Schedule::new();
    s.add(3, 0);
    assert_eq!(check_feasible(&ci, &s), vec![w]);
    let ci = CoverInstance::new(1, 3, vec![], modular(0, &[1])).unwrap();
    assert!(check_feasible(&ci, &Schedule::new()).is_empty());
}

#[test]
fn set_solution_value_examples() {
    let ci = CoverInstance::new(2, 2, vec![], modular(1, &[1, 1])).unwrap();
    assert_eq!(set_solution_value(&FractionalSetSolution::new(), &ci).unwrap(), num::int(0));
    let mut y = FractionalSetSolution::new();
    y.add(1, set_of(&[0]), q("0.5"));
    assert_eq!(set_solution_value(&y, &ci).unwrap(), num::int(1));
    let mut y = FractionalSetSolution::new();
    y.add(1, set_of(&[0, 1]), num::int(1));
    y.add(2, set_of(&[0, 1]), num::int(1));
    assert_eq!(set_solution_value(&y, &ci).unwrap(), num::int(6));
}

#[test]
fn rejects_bad_oracles() {
    let convex = CostOracle::CardinalityConcave { steps: vec![q("0"), q("1"), q("3")] };
    assert!(convex.validate().is_err());
    let crossing = CostOracle::Laminar {
        n_items: 3,
        sets: vec![
            WeightedSet { weight: q("1"), members: vec![0, 1] },
            WeightedSet { weight: q("1"), members: vec![1, 2] },
        ],
    };
    assert!(crossing.validate().is_err());
    let mut d = line(&[0, 1, 2]);
    d[0][2] = num::int(5);
    d[2][0] = num::int(5);
    assert!(oracle::validate_metric(&d).is_err());
}

#[test]
fn steiner_is_not_monotone() {
    // Root and two terminals on a triangle of side 2; a centre at distance 1
    // from all three makes the larger terminal set cheaper.
    let d: Vec<Vec<Rational>> = [[0, 2, 2, 1], [2, 0, 2, 1], [2, 2, 0, 1], [1, 1, 1, 0]]
        .iter()
        .map(|r| r.iter().map(|&x| num::int(x)).collect())
        .collect();
    assert!(oracle::validate_metric(&d).is_ok());
    assert_eq!(steiner_cost(&d, 0, &[1, 2]), num::int(4));
    assert_eq!(steiner_cost(&d, 0, &[1, 2, 3]), num::int(3));
}

/// L1 distances between integer points in the plane.
fn manhattan(pts: &[(i64, i64)]) -> Vec<Vec<Rational>> {
    pts.iter().map(|a| pts.iter().map(|b| num::int((a.0 - b.0).abs() + (a.1 - b.1).abs())).collect()).collect()
}

fn arb_oracle() -> impl Strategy<Value = CostOracle> {
    let modular = (0i64..5, prop::collection::vec(0i64..6, 1..6)).prop_map(|(b, w)| {
        CostOracle::ModularWithBase { base: num::int(b), weights: w.into_iter().map(num::int).collect() }
    });
    // Concave steps from decreasing increments.
    let card = prop::collection::vec(0i64..5, 1..6).prop_map(|mut inc| {
        inc.sort_unstable_by(|a, b| b.cmp(a));
        let mut steps = vec![num::int(0)];
        for d in inc {
            let last = steps.last().unwrap().clone();
            steps.push(last + num::int(d));
        }
        CostOracle::CardinalityConcave { steps }
    });
    let cover = (1usize..6)
        .prop_flat_map(|n| {
            (Just(n), prop::collection::vec((1i64..5, prop::collection::vec(0..n, 1..4)), 1..5))
        })
        .prop_map(|(n, sets)| CostOracle::Coverage {
            n_items: n,
            sets: sets.into_iter().map(|(w, members)| WeightedSet { weight: num::int(w), members }).collect(),
        });
    prop_oneof![modular, card, cover]
}

fn arb_steiner() -> impl Strategy<Value = CostOracle> {
    prop::collection::vec(0i64..20, 2..7).prop_map(|pts| CostOracle::MetricSteiner {
        points: (1..pts.len()).collect(),
        root: 0,
        distances: line(&pts),
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

proptest! {
    #[test]
    fn submodular_oracles_are_monotone_and_submodular(o in arb_oracle()) {
        prop_assert!(o.validate().is_ok());
        let n = o.ground_size();
        for a in subsets(n) {
            let fa = o.eval(&a).unwrap();
            for v in (0..n).filter(|v| !a.contains(v)) {
                let mut av = a.clone();
                av.push(v);
                let gain_a = o.eval(&av).unwrap() - &fa;
                prop_assert!(gain_a >= num::int(0));
                for u in (0..n).filter(|&u| u != v && !a.contains(&u)) {
                    let mut b = a.clone();
                    b.push(u);
                    let mut bv = b.clone();
                    bv.push(v);
                    let gain_b = o.eval(&bv).unwrap() - o.eval(&b).unwrap();
                    prop_assert!(gain_b <= gain_a);
                }
            }
        }
    }

    #[test]
    fn oracles_are_subadditive(o in prop_oneof![arb_oracle(), arb_steiner()]) {
        let n = o.ground_size();
        for a in subsets(n) {
            for b in subsets(n) {
                let mut u = a.clone();
                u.extend(&b);
                let lhs = o.eval(&u).unwrap();
                prop_assert!(lhs <= o.eval(&a).unwrap() + o.eval(&b).unwrap());
            }
        }
    }

    #[test]
    fn steiner_is_monotone_within_factor_two(pts in prop::collection::vec((0i64..10, 0i64..10), 2..7)) {
        let d = manhattan(&pts);
        let n = pts.len() - 1;
        let terms = |s: &[usize]| s.iter().map(|&v| v + 1).collect::<Vec<_>>();
        for b in subsets(n) {
            let fb = steiner_cost(&d, 0, &terms(&b));
            for a in subsets(b.len()) {
                let a: Vec<usize> = a.iter().map(|&i| b[i]).collect();
                prop_assert!(steiner_cost(&d, 0, &terms(&a)) <= num::int(2) * &fb);
            }
        }
    }

    #[test]
    fn steiner_matches_subset_enumeration(pts in prop::collection::vec(0i64..30, 2..6)) {
        let d = line(&pts);
        let all: Vec<usize> = (0..pts.len()).collect();
        prop_assert_eq!(steiner_cost(&d, 0, &all[1..]), spanning_tree_by_subsets(&d, &all));
    }
}
