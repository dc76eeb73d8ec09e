//! Instance and solution data model, cost oracles, feasibility and cost evaluation.

pub mod instance;
pub mod oracle;
pub mod solution;

use std::collections::BTreeSet;

/// 0-based item index.
pub type ItemId = usize;
/// 1-based day index.
pub type Day = usize;
pub type ItemSet = BTreeSet<ItemId>;

pub use instance::{CoverInstance, DemandWindow, InstanceFile, InventoryInstance, Problem};
pub use oracle::{steiner_cost, CostOracle, FastOracle, WeightedSet};
pub use solution::{check_feasible, schedule_cost, set_solution_value, FractionalSetSolution, Schedule};

/// A set function over items `0..n`.
pub trait SetFn {
    fn n(&self) -> usize;
    fn value(&self, items: &[ItemId]) -> crate::error::Result<crate::num::Rational>;
}

impl SetFn for CostOracle {
    fn n(&self) -> usize {
        self.ground_size()
    }
    fn value(&self, items: &[ItemId]) -> crate::error::Result<crate::num::Rational> {
        self.eval(items)
    }
}

impl SetFn for CoverInstance {
    fn n(&self) -> usize {
        self.n_items
    }
    fn value(&self, items: &[ItemId]) -> crate::error::Result<crate::num::Rational> {
        self.cost_of(items)
    }
}

/// Builds an item set from indices.
pub fn set_of(items: &[ItemId]) -> ItemSet {
    items.iter().copied().collect()
}

/// Evaluates f(S) directly on an oracle.
pub fn oracle_eval(oracle: &CostOracle, s: &ItemSet) -> crate::error::Result<crate::num::Rational> {
    oracle.eval(&s.iter().copied().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests;
