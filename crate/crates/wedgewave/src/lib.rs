//! Symmetric wedge waves in an isotropic elastic wedge whose interior angle is
//! close to π.
//!
//! The crate computes the Rayleigh baseline, the pencil coefficient `b`, the
//! matching constant `c_v⁺`, the eigenvalue correction `Λ¹` and the speed
//! deficit `ϑ(σ)` in `c_w² = c_R²(1 − ε²ϑ)`, each along two independent paths,
//! and checks the resulting law against a finite-element eigensolver on the
//! truncated wedge cross-section.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod expsum;
pub mod material;
pub mod pencil;
pub mod rayleigh_mode;
pub mod report;
pub mod wedge_fem;

pub use error::{Error, Result};
pub use expsum::ExpSum;
pub use material::{from_poisson, make_material, solve_rayleigh, IsotropicMaterial, RayleighSolution};
