//! Numerical laboratory for random walks on explicit groups.
//!
//! The crate builds random walks with finitely supported laws on a small zoo
//! of groups (ℤ^d, free groups, the discrete Heisenberg group, finite cyclic
//! groups, and a grid-discretized affine group), estimates their convergence
//! parameter R, constructs the associated exponential φ, R-invariant measure
//! ν = φ⁻¹π and twisted walk ṽ = Rφv, and verifies the resulting ratio
//! limits numerically: pointwise and integrated ratios, translation
//! covariance, exceptional sets of density zero, and the modular-function
//! obstruction on the non-unimodular affine group.
//!
//! Module map:
//!
//! - [`group`] — the group zoo: arithmetic, Haar weights, modular function;
//! - [`measure`] — weighted-atom measures/functions, convolution, the
//!   transition operator and renormalized power iteration;
//! - [`spectral`] — Laplace-transform minimization, log-fit R estimation,
//!   ν and the twisted walk;
//! - [`harness`] — ratio series against predicted limits, exceptional-set
//!   density profiles, feasibility witnesses;
//! - [`grid`] — quadrature engine for the affine group: right-Haar sums,
//!   modular-function oracle, and the modular-ratio series.

pub mod error;
pub mod grid;
pub mod group;
pub mod harness;
pub mod measure;
pub mod spectral;

pub use error::{Error, Result};
pub use group::{Element, GridAffineSpec, GroupSpace};
pub use measure::{
    apply_p, convolve, integrate, integrate_scaled, iterate_p,
    radial_return_probabilities, PowerIteration, Role, WeightedSupport,
};
pub use spectral::{
    build_nu, estimate_r_logfit, fit_exponential, laplace, modular_r, nu_integral,
    twist, verify_similarity, ExponentialSpec, SpectralMethod, SpectralResult,
};
