//! Revised primal simplex over exact rationals.
//!
//! Minimizes `c·x` subject to row constraints and `x ≥ 0`. Columns may be
//! added between solves; the current basis stays primal feasible, so a
//! re-solve continues in phase 2. Entering columns are picked by the most
//! negative reduced cost, switching to Bland's rule after a run of
//! degenerate pivots.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Var {
    Col(usize),
    Slack(usize),
    Art(usize),
}

#[derive(Clone, Debug)]
struct Column {
    cost: Rational,
    /// Entries in normalized row signs.
    entries: Vec<(usize, Rational)>,
}

/// Outcome of an independent optimality audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub primal_feasible: bool,
    pub dual_feasible: bool,
    pub complementary: bool,
    pub objectives_equal: bool,
}

impl Certificate {
    pub fn is_optimal(&self) -> bool {
        self.primal_feasible && self.dual_feasible && self.complementary && self.objectives_equal
    }
}

#[derive(Clone, Debug)]
pub struct Simplex {
    kinds: Vec<RowKind>,
    rhs: Vec<Rational>,
    negated: Vec<bool>,
    cols: Vec<Column>,
    binv: Vec<Vec<Rational>>,
    basis: Vec<Var>,
    xb: Vec<Rational>,
    feasible_basis: bool,
    pub pivots: usize,
}

const DEGENERATE_STREAK: usize = 50;

impl Simplex {
    pub fn new(rows: Vec<(RowKind, Rational)>) -> Self {
        let m = rows.len();
        let mut kinds = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut negated = Vec::with_capacity(m);
        for (k, b) in rows {
            if b.is_negative() {
                kinds.push(match k {
                    RowKind::Le => RowKind::Ge,
                    RowKind::Ge => RowKind::Le,
                    RowKind::Eq => RowKind::Eq,
                });
                rhs.push(-b);
                negated.push(true);
            } else {
                kinds.push(k);
                rhs.push(b);
                negated.push(false);
            }
        }
        let basis = (0..m).map(|i| if kinds[i] == RowKind::Le { Var::Slack(i) } else { Var::Art(i) }).collect();
        let binv = (0..m)
            .map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let xb = rhs.clone();
        Simplex { kinds, rhs, negated, cols: Vec::new(), binv, basis, xb, feasible_basis: false, pivots: 0 }
    }

    pub fn n_rows(&self) -> usize {
        self.kinds.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Adds a structural column given in the caller's row signs.
    pub fn add_column(&mut self, cost: Rational, entries: Vec<(usize, Rational)>) -> usize {
        let entries = entries
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| if self.negated[i] { (i, -a) } else { (i, a) })
            .collect();
        self.cols.push(Column { cost, entries });
        self.cols.len() - 1
    }

    fn column(&self, v: Var) -> Vec<(usize, Rational)> {
        match v {
            Var::Col(j) => self.cols[j].entries.clone(),
            Var::Slack(i) => {
                let s = if self.kinds[i] == RowKind::Le { Rational::one() } else { -Rational::one() };
                vec![(i, s)]
            }
            Var::Art(i) => vec![(i, Rational::one())],
        }
    }

    fn cost(&self, v: Var, phase1: bool) -> Rational {
        match (v, phase1) {
            (Var::Art(_), true) => Rational::one(),
            (Var::Col(j), false) => self.cols[j].cost.clone(),
            _ => Rational::zero(),
        }
    }

    fn duals_internal(&self, phase1: bool) -> Vec<Rational> {
        let m = self.n_rows();
        let cb: Vec<Rational> = self.basis.iter().map(|&v| self.cost(v, phase1)).collect();
        (0..m)
            .map(|j| {
                let mut s = Rational::zero();
                for i in 0..m {
                    if !cb[i].is_zero() && !self.binv[i][j].is_zero() {
                        s += &cb[i] * &self.binv[i][j];
                    }
                }
                s
            })
            .collect()
    }

    fn candidates(&self) -> Vec<Var> {
        let m = self.n_rows();
        let mut vars: Vec<Var> = (0..self.cols.len()).map(Var::Col).collect();
        vars.extend((0..m).filter(|&i| self.kinds[i] != RowKind::Eq).map(Var::Slack));
        let inbasis: std::collections::HashSet<Var> = self.basis.iter().copied().collect();
        vars.retain(|v| !inbasis.contains(v));
        vars
    }

    fn ftran(&self, col: &[(usize, Rational)]) -> Vec<Rational> {
        let m = self.n_rows();
        (0..m)
            .map(|i| {
                let mut s = Rational::zero();
                for (r, a) in col {
                    if !self.binv[i][*r].is_zero() {
                        s += &self.binv[i][*r] * a;
                    }
                }
                s
            })
            .collect()
    }

    fn pivot(&mut self, r: usize, entering: Var, u: &[Rational]) {
        let m = self.n_rows();
        let p = u[r].clone();
        for x in self.binv[r].iter_mut() {
            *x /= &p;
        }
        self.xb[r] /= &p;
        let prow = self.binv[r].clone();
        let px = self.xb[r].clone();
        for i in 0..m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = &u[i];
            for (x, y) in self.binv[i].iter_mut().zip(prow.iter()) {
                if !y.is_zero() {
                    *x -= f * y;
                }
            }
            self.xb[i] -= f * &px;
        }
        self.basis[r] = entering;
        self.pivots += 1;
    }

    fn run(&mut self, phase1: bool) -> Result<Status> {
        let mut streak = 0usize;
        let limit = 200_000usize;
        for _ in 0..limit {
            let pi = self.duals_internal(phase1);
            let bland = streak >= DEGENERATE_STREAK;
            let mut best: Option<(Var, Rational)> = None;
            for v in self.candidates() {
                let col = self.column(v);
                let mut d = self.cost(v, phase1);
                for (i, a) in &col {
                    d -= &pi[*i] * a;
                }
                if d.is_negative() {
                    if bland {
                        best = Some((v, d));
                        break;
                    }
                    if best.as_ref().is_none_or(|(_, b)| d < *b) {
                        best = Some((v, d));
                    }
                }
            }
            let Some((entering, _)) = best else {
                return Ok(Status::Optimal);
            };
            let u = self.ftran(&self.column(entering));
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.n_rows() {
                // A zero-level artificial must leave before it could move.
                if !phase1 && matches!(self.basis[i], Var::Art(_)) && !u[i].is_zero() {
                    leave = Some((i, Rational::zero()));
                    break;
                }
                if u[i].is_positive() {
                    let ratio = &self.xb[i] / &u[i];
                    let better = match &leave {
                        None => true,
                        Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(Status::Unbounded);
            };
            if ratio.is_zero() {
                streak += 1;
            } else {
                streak = 0;
            }
            self.pivot(r, entering, &u);
        }
        Err(Error::Solver("simplex iteration limit reached".into()))
    }

    /// Solves from the current basis.
    pub fn solve(&mut self) -> Result<Status> {
        if !self.feasible_basis {
            if self.basis.iter().any(|v| matches!(v, Var::Art(_))) {
                let st = self.run(true)?;
                debug_assert_eq!(st, Status::Optimal);
                let infeas: Rational = self
                    .basis
                    .iter()
                    .zip(&self.xb)
                    .filter(|(v, _)| matches!(v, Var::Art(_)))
                    .map(|(_, x)| x.clone())
                    .sum();
                if infeas.is_positive() {
                    return Ok(Status::Infeasible);
                }
                self.drive_out_artificials();
            }
            self.feasible_basis = true;
        }
        self.run(false)
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.n_rows() {
            if !matches!(self.basis[r], Var::Art(_)) {
                continue;
            }
            for v in self.candidates() {
                let u = self.ftran(&self.column(v));
                if !u[r].is_zero() {
                    self.pivot(r, v, &u);
                    break;
                }
            }
        }
    }

    /// Values of the structural columns.
    pub fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols.len()];
        for (v, val) in self.basis.iter().zip(&self.xb) {
            if let Var::Col(j) = v {
                x[*j] = val.clone();
            }
        }
        x
    }

    pub fn objective(&self) -> Rational {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter_map(|(v, x)| match v {
                Var::Col(j) => Some(&self.cols[*j].cost * x),
                _ => None,
            })
            .sum()
    }

    /// Row duals in the caller's row signs.
    pub fn duals(&self) -> Vec<Rational> {
        self.duals_internal(false)
            .into_iter()
            .zip(&self.negated)
            .map(|(p, &n)| if n { -p } else { p })
            .collect()
    }

    /// Audits optimality of the current basis from scratch: primal
    /// feasibility, dual sign and reduced-cost feasibility, complementary
    /// slackness and equal objectives.
    pub fn certify(&self) -> Certificate {
        let x = self.primal();
        let pi = self.duals();
        let m = self.n_rows();
        let sign = |i: usize| if self.negated[i] { -Rational::one() } else { Rational::one() };
        let mut act = vec![Rational::zero(); m];
        for (j, c) in self.cols.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, a) in &c.entries {
                act[*i] += a * &sign(*i) * &x[j];
            }
        }
        let orig_kind = |i: usize| match (self.kinds[i], self.negated[i]) {
            (k, false) => k,
            (RowKind::Le, true) => RowKind::Ge,
            (RowKind::Ge, true) => RowKind::Le,
            (RowKind::Eq, true) => RowKind::Eq,
        };
        let orig_rhs = |i: usize| &self.rhs[i] * &sign(i);
        let mut primal_feasible = x.iter().all(|v| !v.is_negative());
        let mut dual_feasible = true;
        let mut complementary = true;
        for i in 0..m {
            let b = orig_rhs(i);
            match orig_kind(i) {
                RowKind::Le => {
                    primal_feasible &= act[i] <= b;
                    dual_feasible &= !pi[i].is_positive();
                }
                RowKind::Ge => {
                    primal_feasible &= act[i] >= b;
                    dual_feasible &= !pi[i].is_negative();
                }
                RowKind::Eq => primal_feasible &= act[i] == b,
            }
            if !pi[i].is_zero() && act[i] != b {
                complementary = false;
            }
        }
        for (j, c) in self.cols.iter().enumerate() {
            let mut d = c.cost.clone();
            for (i, a) in &c.entries {
                d -= &pi[*i] * a * &sign(*i);
            }
            if d.is_negative() {
                dual_feasible = false;
            }
            if x[j].is_positive() && !d.is_zero() {
                complementary = false;
            }
        }
        let dual_obj: Rational = (0..m).map(|i| &pi[i] * orig_rhs(i)).sum();
        Certificate { primal_feasible, dual_feasible, complementary, objectives_equal: dual_obj == self.objective() }
    }
}
