//! Seeded instance generators.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::intervals;
use crate::model::{CostOracle, CoverInstance, DemandWindow, InventoryInstance, WeightedSet};
use crate::num::{self, Rational};
use crate::rng::{substream, STREAM_GENERATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Irp,
    SjrpModular,
    SjrpCardinality,
    SjrpCoverage,
    SjrpLaminar,
}

impl GenKind {
    pub const ALL: [GenKind; 5] =
        [GenKind::Irp, GenKind::SjrpModular, GenKind::SjrpCardinality, GenKind::SjrpCoverage, GenKind::SjrpLaminar];
    pub const SUBMODULAR: [GenKind; 4] =
        [GenKind::SjrpModular, GenKind::SjrpCardinality, GenKind::SjrpCoverage, GenKind::SjrpLaminar];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Irp => "irp",
            GenKind::SjrpModular => "sjrp-modular",
            GenKind::SjrpCardinality => "sjrp-cardinality",
            GenKind::SjrpCoverage => "sjrp-coverage",
            GenKind::SjrpLaminar => "sjrp-laminar",
        }
    }
}

impl FromStr for GenKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown instance kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowStyle {
    /// Prefixes of dyadic blocks, one window per item.
    LeftAligned,
    /// Uniform random windows, one or two per item.
    Arbitrary,
}

impl WindowStyle {
    pub fn name(self) -> &'static str {
        match self {
            WindowStyle::LeftAligned => "left-aligned",
            WindowStyle::Arbitrary => "arbitrary",
        }
    }
}

impl FromStr for WindowStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left-aligned" => Ok(WindowStyle::LeftAligned),
            "arbitrary" => Ok(WindowStyle::Arbitrary),
            _ => Err(Error::Usage(format!("unknown window style {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub kind: GenKind,
    pub n: usize,
    pub horizon: usize,
    pub seed: u64,
    pub style: WindowStyle,
}

/// Decimal value on the 0.5 grid in [lo/2, hi/2].
fn halves(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    num::ratio(rng.gen_range(lo..=hi), 2)
}

pub fn random_oracle(kind: GenKind, n: usize, rng: &mut ChaCha8Rng) -> CostOracle {
    match kind {
        GenKind::SjrpModular => CostOracle::ModularWithBase {
            base: halves(rng, 0, 40),
            weights: (0..n).map(|_| halves(rng, 1, 20)).collect(),
        },
        GenKind::SjrpCardinality => {
            let mut inc: Vec<Rational> = (0..n).map(|_| halves(rng, 0, 20)).collect();
            inc.sort_by(|a, b| b.cmp(a));
            if let Some(first) = inc.first_mut() {
                *first += num::one();
            }
            let mut steps = vec![num::zero()];
            for d in inc {
                let next = steps.last().unwrap() + d;
                steps.push(next);
            }
            CostOracle::CardinalityConcave { steps }
        }
        GenKind::SjrpCoverage => {
            let m = rng.gen_range(n.max(1)..=2 * n.max(1));
            let mut sets: Vec<WeightedSet> = (0..m)
                .map(|_| {
                    let mut members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
                    if members.is_empty() && n > 0 {
                        members.push(rng.gen_range(0..n));
                    }
                    WeightedSet { weight: halves(rng, 1, 20), members }
                })
                .collect();
            // Every item is covered by something, so singleton costs are positive.
            for v in 0..n {
                if !sets.iter().any(|s| s.members.contains(&v)) {
                    let k = rng.gen_range(0..sets.len());
                    sets[k].members.push(v);
                    sets[k].members.sort_unstable();
                }
            }
            CostOracle::Coverage { n_items: n, sets }
        }
        GenKind::SjrpLaminar => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let mut sets = Vec::new();
            let mut stack = vec![(0usize, n)];
            let mut first = true;
            while let Some((lo, hi)) = stack.pop() {
                if hi <= lo {
                    continue;
                }
                if first || rng.gen_bool(0.7) {
                    let mut members = perm[lo..hi].to_vec();
                    members.sort_unstable();
                    sets.push(WeightedSet { weight: halves(rng, 1, 20), members });
                }
                first = false;
                if hi - lo > 1 {
                    let cut = rng.gen_range(lo + 1..hi);
                    stack.push((lo, cut));
                    stack.push((cut, hi));
                }
            }
            CostOracle::Laminar { n_items: n, sets }
        }
        GenKind::Irp => {
            let pts: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
            CostOracle::MetricSteiner {
                points: (1..=n).collect(),
                root: 0,
                distances: euclidean_metric(&pts),
            }
        }
    }
}

/// Euclidean distances rounded to the 1e-6 grid, closed under shortest paths
/// so the triangle inequality holds exactly.
pub fn euclidean_metric(pts: &[(f64, f64)]) -> Vec<Vec<Rational>> {
    let k = pts.len();
    let mut d: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
                    ((dx * dx + dy * dy).sqrt() * 1e6).round() as i64
                })
                .collect()
        })
        .collect();
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d.iter().map(|row| row.iter().map(|&x| num::ratio(x, 1_000_000)).collect()).collect()
}

fn left_aligned_window(rng: &mut ChaCha8Rng, item: usize, horizon: usize) -> DemandWindow {
    let max_level = usize::BITS - 1 - horizon.leading_zeros();
    let j = rng.gen_range(0..=max_level);
    let size = 1usize << j;
    let blocks = horizon / size;
    let k = rng.gen_range(0..blocks);
    let len = rng.gen_range(1..=size);
    DemandWindow::new(item, k * size + 1, k * size + len)
}

fn arbitrary_window(rng: &mut ChaCha8Rng, item: usize, horizon: usize) -> DemandWindow {
    let s = rng.gen_range(1..=horizon);
    let t = rng.gen_range(s..=horizon);
    DemandWindow::new(item, s, t)
}

fn check(p: &GenParams) -> Result<()> {
    if p.n == 0 || p.horizon == 0 {
        return Err(Error::Usage("n and horizon must be at least 1".into()));
    }
    if p.n > 64 {
        return Err(Error::Usage("n is limited to 64".into()));
    }
    Ok(())
}

pub fn generate(p: &GenParams) -> Result<CoverInstance> {
    check(p)?;
    let mut rng = substream(p.seed, STREAM_GENERATION, 0);
    let oracle = random_oracle(p.kind, p.n, &mut rng);
    let mut windows = Vec::new();
    for v in 0..p.n {
        match p.style {
            WindowStyle::LeftAligned => windows.push(left_aligned_window(&mut rng, v, p.horizon)),
            WindowStyle::Arbitrary => {
                windows.push(arbitrary_window(&mut rng, v, p.horizon));
                if rng.gen_bool(0.3) {
                    windows.push(arbitrary_window(&mut rng, v, p.horizon));
                }
            }
        }
    }
    windows.sort();
    windows.dedup();
    let mut ci = CoverInstance::new(p.n, p.horizon, windows, oracle)?;
    ci.nice = ci.satisfies_nice() && p.style == WindowStyle::LeftAligned;
    Ok(ci)
}

/// Inventory instance with random demands on a few days per item and
/// holding cost rate·(t − s).
pub fn generate_inventory(p: &GenParams) -> Result<InventoryInstance> {
    check(p)?;
    let mut rng = substream(p.seed, STREAM_GENERATION, 1);
    let oracle = random_oracle(p.kind, p.n, &mut rng);
    let mut demands = BTreeMap::new();
    let mut holding = BTreeMap::new();
    for v in 0..p.n {
        let rate = num::ratio(rng.gen_range(1..=8), 4);
        let k = rng.gen_range(1..=p.horizon.min(3));
        for _ in 0..k {
            let t = rng.gen_range(1..=p.horizon);
            demands.insert((v, t), num::int(rng.gen_range(1..=5)));
        }
        for t in 1..=p.horizon {
            if demands.contains_key(&(v, t)) {
                for s in 1..t {
                    holding.insert((v, s, t), &rate * num::int((t - s) as i64));
                }
            }
        }
    }
    InventoryInstance::new(p.n, p.horizon, demands, holding, oracle)
}

/// Whether a generated horizon can be nice.
pub fn is_tower(t: usize) -> bool {
    intervals::is_tower(t)
}
