//! Invariants of the reductions on random instances.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invround::gen::{generate, GenKind, GenParams, WindowStyle};
use invround::model::{check_feasible, set_of, set_solution_value, CoverInstance, FractionalSetSolution, Schedule};
use invround::num;
use invround::reduce::{
    bound_time_horizon, is_left_aligned, mirror, nicify, nicify_piece, recombine, sparsify, split_left_right,
    well_separated_groups, Lineage,
};

fn instance(r: &mut ChaCha8Rng, seed: u64, n_max: usize, horizons: &[usize], style: WindowStyle) -> CoverInstance {
    let p = GenParams {
        kind: GenKind::ALL[r.gen_range(0..GenKind::ALL.len())],
        n: r.gen_range(1..=n_max),
        horizon: horizons[r.gen_range(0..horizons.len())],
        seed,
        style,
    };
    generate(&p).unwrap()
}

/// Unit coverage per window split over 1–4 random days.
fn random_y(ci: &CoverInstance, r: &mut ChaCha8Rng) -> FractionalSetSolution {
    let mut y = FractionalSetSolution::new();
    for w in &ci.windows {
        let k = r.gen_range(1..=4i64);
        for _ in 0..k {
            let mut items = vec![w.item];
            items.extend((0..ci.n_items).filter(|_| r.gen_bool(0.25)));
            y.add(r.gen_range(w.start..=w.end), set_of(&items), num::ratio(1, k));
        }
    }
    y
}

/// Orders each window's item at the window's last day.
fn ends_schedule(ci: &CoverInstance) -> Schedule {
    let mut s = Schedule::new();
    for w in &ci.windows {
        s.add(w.end, w.item);
    }
    s
}

#[test]
fn split_keeps_doubled_solution_feasible() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..500 {
        let ci = instance(&mut r, seed, 8, &[4, 16, 256], WindowStyle::Arbitrary);
        let y = random_y(&ci, &mut r);
        let (left, right) = split_left_right(&ci, &y).unwrap();
        assert!(left.y.check_feasible(&left.instance).is_ok(), "seed {seed}: left");
        assert!(right.y.check_feasible(&right.instance).is_ok(), "seed {seed}: right");
        assert!(is_left_aligned(&left.instance), "seed {seed}");
        let m = mirror(&right.instance, &right.y).unwrap();
        assert!(is_left_aligned(&m.instance), "seed {seed}: mirrored right part");
        assert!(m.y.check_feasible(&m.instance).is_ok(), "seed {seed}: mirrored y");

        // A schedule for both parts serves the original instance.
        let ls = ends_schedule(&left.instance);
        let rs = m.lineage.translate(&ends_schedule(&m.instance)).unwrap();
        let joined = recombine(&[(ls, left.lineage.clone()), (rs, right.lineage.clone())]).unwrap();
        assert!(check_feasible(&ci, &joined).is_empty(), "seed {seed}: recombined");
    }
}

#[test]
fn sparsify_is_exact() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for seed in 0..500 {
        let ci = instance(&mut r, 10_000 + seed, 8, &[4, 16, 64], WindowStyle::LeftAligned);
        let y = random_y(&ci, &mut r);
        let s = sparsify(&y, &ci).unwrap();
        assert!(s.check_feasible(&ci).is_ok(), "seed {seed}");
        let (before, after) = (set_solution_value(&y, &ci).unwrap(), set_solution_value(&s, &ci).unwrap());
        assert!(after <= num::int(2) * before, "seed {seed}");
        for t in 1..=ci.horizon {
            let m = s.day_mass(t);
            assert!(!m.is_positive() || m >= num::int(1), "seed {seed}: day {t} mass {}", num::format(&m));
        }
    }
}

#[test]
fn well_separated_groups_partition_items() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..300 {
        let ci = instance(&mut r, 20_000 + seed, 12, &[4], WindowStyle::Arbitrary);
        let groups = well_separated_groups(&ci).unwrap();
        let mut all: Vec<usize> = groups.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..ci.n_items).collect::<Vec<_>>(), "seed {seed}");
        for g in &groups {
            let single: Vec<_> = g.iter().map(|&v| ci.cost_of(&[v]).unwrap()).collect();
            let hi = single.iter().max().unwrap();
            let lo = single.iter().min().unwrap();
            assert!(lo * num::int(ci.n_items as i64) >= *hi, "seed {seed}: group {g:?}");
        }
    }
}

#[test]
fn horizon_bound_translates_back() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let mut cut = 0;
    for seed in 0..300 {
        let ci = instance(&mut r, 30_000 + seed, 5, &[64, 256], WindowStyle::LeftAligned);
        let y = random_y(&ci, &mut r);
        let hb = bound_time_horizon(&ci, &y).unwrap();
        let cap = ci.n_items * ci.n_items;
        let mut subs = vec![(hb.resets.clone(), Lineage::identity(&ci))];
        for p in &hb.pieces {
            assert!(p.instance.horizon <= cap, "seed {seed}: piece horizon {}", p.instance.horizon);
            assert!(p.y.check_feasible(&p.instance).is_ok(), "seed {seed}: piece y");
            subs.push((ends_schedule(&p.instance), p.lineage.clone()));
        }
        if hb.pieces.len() > 1 || !hb.resets.sets.is_empty() {
            cut += 1;
        }
        let s = recombine(&subs).unwrap();
        assert!(check_feasible(&ci, &s).is_empty(), "seed {seed}: translated schedule");
    }
    assert!(cut > 0, "no instance was cut");
}

#[test]
fn nicify_output_is_nice() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..300 {
        let ci = instance(&mut r, 40_000 + seed, 8, &[3, 4, 9, 16, 20], WindowStyle::LeftAligned);
        let (nci, lin) = nicify(&ci).unwrap();
        assert!(nci.satisfies_nice(), "seed {seed}");
        assert!(nci.horizon >= ci.horizon);
        let s = lin.translate(&ends_schedule(&nci)).unwrap();
        assert!(check_feasible(&ci, &s).is_empty(), "seed {seed}");
        let piece = nicify_piece(&ci, &random_y(&ci, &mut r)).unwrap();
        assert!(piece.y.check_feasible(&piece.instance).is_ok(), "seed {seed}: carried y");
    }
}

#[test]
fn lineage_composition() {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..100 {
        let ci = instance(&mut r, 50_000 + seed, 6, &[5, 12], WindowStyle::LeftAligned);
        let (nci, lin) = nicify(&ci).unwrap();
        let id = Lineage::identity(&ci);
        let composed = lin.then(&id).unwrap();
        assert_eq!(composed, lin);
        let s = ends_schedule(&nci);
        assert_eq!(composed.translate(&s).unwrap(), lin.translate(&s).unwrap());
        assert!(Lineage::identity(&nci).then(&lin).unwrap() == lin);
    }
}
