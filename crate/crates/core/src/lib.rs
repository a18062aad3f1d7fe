//! Certified bounds on the joint spectral radius of finite sets of
//! nonnegative matrices.
//!
//! The pipeline: build a [`MatrixSet`] of exact [`Scalar`] matrices,
//! enumerate products into a [`NormTable`], then read enclosures of ρ(Σ)
//! off it with the functions in [`bounds`]. [`growth`] classifies the
//! strongly connected components and estimates the polynomial order `r` in
//! `‖Σⁿ‖ ≍ nʳ ρ(Σ)ⁿ`.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod growth;
pub mod interval;
pub mod matrix;
pub mod norms;
pub mod perron;
pub mod scalar;

pub use bounds::{
    all_intervals, best_bounds, blondel_nesterov_bounds, connected_bounds, intersect_intervals, main_bounds, p_m,
    p_tilde, pm_table, traditional_bounds, BestBounds, BoundInterval, Method, PmTable,
};
pub use error::{JsrError, Result};
pub use graph::{
    build_graph, distances, scc, witness_product, Condensation, DependencyGraph, DistanceTable, WitnessProduct,
};
pub use growth::{
    classify, component_lambda_bounds, growth_exponent, refine_lambda, verify_growth, ComponentClassification,
    GrowthOrder, GrowthPoint, GrowthReport, DEFAULT_MAX_REL_WIDTH, MAX_AUTO_DEPTH, MIN_DEPTH,
};
pub use interval::{nth_root_enclosure, Enclosure, ROOT_REL_TOL};
pub use matrix::{set_constants, Matrix, MatrixSet, SetConstants};
pub use norms::{
    entry_range_check, maximal_elements, norm_table, norm_table_partial, EntryRangeReport, EnumOptions, Frontier,
    NormTable, ProductEnumerator, PruneMode, DEFAULT_BUDGET,
};
pub use perron::{perron_root, spectral_radius, PerronEnclosure, DEFAULT_REL_TOL};
pub use scalar::{Entry, Rounding, Scalar};
