//! Fractional solutions: the configuration LP, the Lovász program, the
//! set/vector conversions and fractional path solutions.

pub mod config_lp;
pub mod lovasz_cp;
pub mod paths;
pub mod vector;

pub use config_lp::{solve_config_lp, solve_inventory_lp, ConfigLpSolution, InventoryLpSolution, DEFAULT_LP_CAP};
pub use lovasz_cp::{solve_lovasz, solve_lovasz_with, LovaszOptions, LovaszSolution};
pub use paths::{
    fps_cost, fps_from_sets, DayTree, FractionalPathSolution, InstanceMetric, WeightedPath,
};
pub use vector::{normalize_windows, x_to_y, y_to_x, FractionalVectorSolution};
