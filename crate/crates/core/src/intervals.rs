//! Dyadic intervals over 1-based days.
//!
//! The dyadic family is `[k·2^i + 1, (k+1)·2^i]` for integers `k, i ≥ 0`.

use serde::{Deserialize, Serialize};

/// Closed day interval `[start, end]` with `1 ≤ start ≤ end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(1 <= start && start <= end, "invalid interval [{start}, {end}]");
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, day: usize) -> bool {
        self.start <= day && day <= self.end
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.start <= o.start && o.end <= self.end
    }
}

/// Classification of an interval family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignedKind {
    Left,
    Right,
    /// Both left and right aligned.
    Laminar,
    Neither,
    /// Empty family.
    BothTrivially,
}

/// Smallest dyadic interval containing `iv`.
pub fn minimal_dyadic(iv: Interval) -> Interval {
    let i = interval_level(iv);
    let k = (iv.start - 1) >> i;
    Interval::new((k << i) + 1, (k + 1) << i)
}

/// Level of the minimal dyadic interval containing `iv`.
pub fn interval_level(iv: Interval) -> u32 {
    let (a, b) = (iv.start - 1, iv.end - 1);
    usize::BITS - (a ^ b).leading_zeros()
}

pub fn is_left_aligned(iv: Interval) -> bool {
    minimal_dyadic(iv).start == iv.start
}

pub fn is_right_aligned(iv: Interval) -> bool {
    minimal_dyadic(iv).end == iv.end
}

pub fn aligned_kind(family: &[Interval]) -> AlignedKind {
    if family.is_empty() {
        return AlignedKind::BothTrivially;
    }
    let left = family.iter().all(|&iv| is_left_aligned(iv));
    let right = family.iter().all(|&iv| is_right_aligned(iv));
    match (left, right) {
        (true, true) => AlignedKind::Laminar,
        (true, false) => AlignedKind::Left,
        (false, true) => AlignedKind::Right,
        (false, false) => AlignedKind::Neither,
    }
}

/// Splits `[s, t]` at the multiple `k·2^i ∈ [s, t]` with `i` maximal into
/// `R = [s, k·2^i]` and `L = [k·2^i + 1, t]` (empty when `k·2^i = t`).
pub fn split_lr(iv: Interval) -> (Option<Interval>, Option<Interval>) {
    let m = split_point(iv);
    let r = Some(Interval::new(iv.start, m));
    let l = if m == iv.end { None } else { Some(Interval::new(m + 1, iv.end)) };
    (r, l)
}

/// The multiple of the largest power of two inside `iv`.
pub fn split_point(iv: Interval) -> usize {
    let i = usize::BITS - 1 - ((iv.start - 1) ^ iv.end).leading_zeros();
    (iv.end >> i) << i
}

/// Whether `t = 2^(2^k)` for some `k ≥ 0`.
pub fn is_tower(t: usize) -> bool {
    let mut v = 2usize;
    loop {
        if v == t {
            return true;
        }
        if v > t {
            return false;
        }
        v = match v.checked_mul(v) {
            Some(x) => x,
            None => return false,
        };
    }
}

/// Least `2^(2^k) ≥ t`.
pub fn next_tower(t: usize) -> usize {
    let mut v = 2usize;
    while v < t {
        v = v.checked_mul(v).expect("horizon too large");
    }
    v
}

/// `log2(t)` for a power of two.
pub fn log2_exact(t: usize) -> u32 {
    debug_assert!(t.is_power_of_two());
    t.trailing_zeros()
}

/// ⌈log2 t⌉, with 0 for t ≤ 1.
pub fn log2_ceil(t: usize) -> u32 {
    t.max(1).next_power_of_two().trailing_zeros()
}

/// `log log T`, exact for tower-shaped T, rounded up otherwise; T ≤ 4 gives 1.
pub fn loglog(t: usize) -> u32 {
    log2_ceil(log2_ceil(t) as usize).max(1)
}
