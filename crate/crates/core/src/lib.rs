//! Exact Fourier-analytic and combinatorial measurements of functions on
//! the Boolean hypercube `{-1,1}^n`.
//!
//! Tables are indexed so that bit `i` of the index is coordinate `x_i`,
//! bit value 1 meaning `x_i = -1`. Logical TRUE is `-1`.

pub mod constructors;
pub mod error;
pub mod function;
pub mod noise;
pub mod sensitivity;
pub mod spectrum;
pub mod stats;
pub mod structure;

pub use constructors::{
    and_f, dictator, full_parity, inner_product, majority, mod3, or_f, parity, Dnf, Term,
};
pub use error::{Error, Result};
pub use function::{check_arity, BooleanFunction, RealFunction, MAX_ARITY};
pub use noise::{
    convolution_tail, erasure_norm, multilinear_eval, nicd_agreement, noise_operator,
    noise_profile, stability, stability_exact, tail_mass, NoisePoint,
};
pub use sensitivity::{block_sensitivity, sensitivity_stats, SensitivityStats};
pub use spectrum::{inverse_wht, wht, wht_real, RealSpectrum, Spectrum};
pub use stats::{fourier_stats, FourierStats};
pub use structure::{
    count_strict_local_minima, is_monotone, junta_distance, spectral_concentration,
    Concentration, JuntaFit,
};
