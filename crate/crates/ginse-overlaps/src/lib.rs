//! Monte Carlo estimators, per-sample identity suites, cross-layer
//! validation campaigns and file output for the quaternionic Ginibre
//! overlap computations in the `ginse` crate.

pub mod config;
pub mod estimate;
pub mod grid;
pub mod output;
pub mod suites;

pub use estimate::{
    estimate_density_mc, estimate_diag_mc, estimate_diag_mc_with_chain, estimate_offdiag_mc,
    DensitySource, DiagRoute, EstimateMeta, EstimateRow, EstimateTable, OffdiagEstKind,
};
pub use grid::{merge_shards, BinGrid, ShardAccum};
pub use suites::{validate_all, CheckResult, SuiteResult, ValidationReport};
