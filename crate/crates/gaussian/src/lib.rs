//! Monte Carlo laboratory for Gaussian space: correlated pairs, joint
//! probabilities of candidate regions, partition stability, and the
//! Bernoulli and Gaussian widths of vector sets.
//!
//! Every estimate is a pure function of its inputs and seed. Sample `k`
//! comes from a ChaCha stream addressed by `k / CHUNK`, so results are
//! bit-identical for any number of worker threads.

pub mod estimate;
pub mod lab;
pub mod normal;
pub mod region;

pub use estimate::{correlated_pairs, CorrelatedPairs, McEstimate, Normals, CHUNK, CSV_HEADER};
pub use lab::{
    bernoulli_width_exact, bernoulli_width_mc, check_partition, gaussian_width, joint_prob,
    joint_prob_symmetrized, partition_stability, widths, Width, Widths,
};
pub use normal::{ball_radius, chi_cdf, inverse_normal_cdf, normal_cdf};
pub use region::GaussianRegion;
