//! Numerical bench for the linear estimates: mixed angular norms, the
//! Littlewood–Paley bank, the model operator `A`, kernel bounds, the Knapp
//! scaling and empirical Strichartz ratios.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod empirical;
pub mod kernel;
pub mod knapp;
pub mod littlewood_paley;
pub mod norms;
pub mod operator;

pub use empirical::{
    angular_sobolev_check, angular_sobolev_ratio, band_duhamel, band_limit, check_inhomogeneous_indices,
    christ_kiselev_check, empirical_homogeneous_ratio, empirical_homogeneous_ratios,
    empirical_inhomogeneous_ratio, empirical_inhomogeneous_ratios, random_localized_field, random_packets,
    AngularSobolevReport, BandSource, ChristKiselevReport, EnsembleSpec, RatioReport, ResolutionMax,
};
pub use kernel::{
    claim_integral, fit_decay_order, fit_kernel_constants, kernel_bound_check, kernel_envelope,
    AlphaTransform, KernelBoundReport, KernelConstants, KernelRegime,
};
pub use knapp::{knapp_experiment, knapp_point, theory_slope, KnappConfig, KnappPoint, KnappReport};
pub use littlewood_paley::{
    bump, low_pass, lp_decompose, lp_project, smooth_step, square_function_constants,
    square_function_ratios, LittlewoodPaleyBank, SquareFunctionConstants,
};
pub use norms::{hdot_norm, mixed_norm, mixed_norm_complex, slice_norm, time_norm, MixedNormSpec, SobolevNorm};
pub use operator::{
    angular_coefficients, angular_coefficients_complex, apply_a, apply_a_complex, AngularCoefficients,
    ModelAmplitude, PolarFrequencySpec,
};

/// Deterministic generator for ensemble member `member`.
pub(crate) fn member_rng(seed: u64, member: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(member.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}
