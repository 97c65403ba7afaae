//! Additive combinatorics over `F_2^n`: sumsets, triangles, subspaces,
//! linear-invariant patterns, small-bias densities and correlation with
//! low-degree polynomials.

pub mod bias;
pub mod pattern;
pub mod poly;
pub mod quadratic;
pub mod set;
pub mod subspace;
pub mod triangle;

pub use bias::{density_bias, fooling_error, fooling_error_dnf, Density};
pub use pattern::{freeness_check, freeness_tester_estimate, Freeness, PatternSystem, RateEstimate};
pub use poly::{correlation, f2_degree, max_correlation_low_degree, Correlation, F2Poly};
pub use quadratic::{quadratic_span_min_terms, QuadraticSpan};
pub use set::{doubling, iterated_sumset, sumset, F2Set};
pub use subspace::{
    greedy_cover, largest_subspace, subspace_in_set, AffineSubspace, SearchMode, SubspaceHit,
};
pub use triangle::{
    triangle_count, triangle_density, triangle_density_with, triangle_removal_distance,
    Degeneracy, Removal, RemovalMode,
};
