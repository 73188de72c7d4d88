//! Matching constants and the two-term law for the wedge-wave eigenvalue.

use crate::error::{Error, Result};
use crate::material::{from_poisson, solve_rayleigh, RayleighSolution};
use crate::pencil::{compute_b_closed, compute_b_quadrature};
use crate::rayleigh_mode::{build_uR, build_vR, norm_U0_sq, norm_U0_sq_exact, stress, ModeField};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    Fem,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Quadrature => "quadrature",
            Provenance::Fem => "fem",
        }
    }
}

/// How traction data is transferred across the cut x1 = 0 when the two halves
/// of the wedge are unfolded onto a half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpModel {
    /// Jumps [w₁] = 2u₂^R e₁, [σ_n1] = 2σ_n2[u^R]; the frame rotation of the
    /// traction vectors is neglected.
    Transmission,
    /// Same, plus the O(ε) term from rotating the tractions of the two halves
    /// by ±α: [σ_n1] = 2σ_n2[u^R] − 2δ_n2 σ_11[u^R].
    RotatedFrames,
}

/// ∫ Σ_n σ_n1[a] conj(b_n) − a_n conj(σ_n1[b]) along x1 = const.
pub fn flux(a: &ModeField, b: &ModeField, x1: f64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for n in 1..=3 {
        let s = &stress(a, n, 1, x1) * &b.component_at(n, x1).conj();
        let t = &a.component_at(n, x1) * &stress(b, n, 1, x1).conj();
        acc += (&s - &t).integrate_halfline()?;
    }
    Ok(acc)
}

/// Pairing of the jump data generated by u^R with a test field at x1 = 0
/// (common factor 2 dropped).
pub fn jump_pairing(u: &ModeField, test: &ModeField, model: JumpModel) -> Result<C64> {
    let mut s = crate::expsum::ExpSum::zero();
    for n in 1..=3 {
        s = &s + &(&stress(u, n, 2, 0.0) * &test.component_at(n, 0.0).conj());
    }
    s = &s - &(&u.component_at(2, 0.0) * &stress(test, 1, 1, 0.0).conj());
    if model == JumpModel::RotatedFrames {
        s = &s - &(&stress(u, 1, 1, 0.0) * &test.component_at(2, 0.0).conj());
    }
    s.integrate_halfline()
}

/// Green's-formula ratio: jump data tested against `test`, over the flux of
/// the growing partner against `test`.
pub fn green_ratio(sol: &RayleighSolution, k: f64, test: &ModeField, partner: &ModeField, model: JumpModel) -> Result<C64> {
    let u = build_uR(sol, k);
    let num = jump_pairing(&u, test, model)?;
    let den = flux(partner, test, 0.0)?;
    if den.norm() < 1e-14 {
        return Err(Error::DegenerateDenominator { value: den.norm(), poisson: sol.material.poisson() });
    }
    Ok(num / den)
}

pub fn compute_cv_plus(sol: &RayleighSolution, k: f64) -> Result<C64> {
    green_ratio(sol, k, &build_uR(sol, k), &build_vR(sol, k), JumpModel::Transmission)
}

pub fn compute_cu_plus(sol: &RayleighSolution, k: f64) -> Result<C64> {
    green_ratio(sol, k, &build_vR(sol, k), &build_uR(sol, k), JumpModel::Transmission)
}

/// c_v⁺ with the traction jump corrected for the rotation of the two half-frames.
pub fn compute_cv_plus_rotated(sol: &RayleighSolution, k: f64) -> Result<C64> {
    green_ratio(sol, k, &build_uR(sol, k), &build_vR(sol, k), JumpModel::RotatedFrames)
}

/// −k(1−B)^{1/2}(4−B)(2−B)²(8(1−B)²+B²(2−B)) / (2B(8(1−B)+B²)(8(1−B)²+B²(3−2B))).
pub fn compute_cv_plus_closed(sol: &RayleighSolution, k: f64) -> f64 {
    let b = sol.b;
    let q = 1.0 - b;
    -k * q.sqrt() * (4.0 - b) * (2.0 - b).powi(2) * (8.0 * q * q + b * b * (2.0 - b))
        / (2.0 * b * (8.0 * q + b * b) * (8.0 * q * q + b * b * (3.0 - 2.0 * b)))
}

/// Λ¹ = |b| (c_v⁺)² / ‖U⁰‖², all from closed forms.
pub fn compute_lambda1(sol: &RayleighSolution, k: f64) -> f64 {
    let cv = compute_cv_plus_closed(sol, k);
    compute_b_closed(sol, k).abs() * cv * cv / norm_U0_sq(sol, k)
}

/// Λ¹ from the exactly integrated b, c_v⁺ and ‖U⁰‖².
pub fn compute_lambda1_quadrature(sol: &RayleighSolution, k: f64) -> Result<f64> {
    let cv = compute_cv_plus(sol, k)?.re;
    Ok(compute_b_quadrature(sol, k)?.re.abs() * cv * cv / norm_U0_sq_exact(sol, k)?)
}

/// Λ¹ under [`JumpModel::RotatedFrames`].
pub fn compute_lambda1_rotated(sol: &RayleighSolution, k: f64) -> Result<f64> {
    let cv = compute_cv_plus_rotated(sol, k)?.re;
    Ok(compute_b_closed(sol, k).abs() * cv * cv / norm_U0_sq(sol, k))
}

/// ϑ = Λ¹/ω_R², evaluated in the canonical normalization k = 1, μ = 1.
pub fn compute_theta(sol: &RayleighSolution) -> Result<f64> {
    let canon = solve_rayleigh(&from_poisson(sol.material.poisson(), 1.0)?)?;
    Ok(compute_lambda1(&canon, 1.0) / canon.omega_r_sq(1.0))
}

/// c_R²(1 − ε²ϑ), the two-term law without remainder.
pub fn wedge_speed_sq(sol: &RayleighSolution, eps: f64) -> Result<f64> {
    if eps > 0.3 {
        log::warn!("eps = {eps} is outside the small-angle regime of the two-term law");
    }
    Ok(sol.c_r * sol.c_r * (1.0 - eps * eps * compute_theta(sol)?))
}

/// Leading-order decay rate √((ω_R² − ω²)‖U⁰‖²/|b|) of the outer waves.
pub fn predicted_decay_rate(sol: &RayleighSolution, k: f64, omega_sq: f64) -> Result<f64> {
    let cutoff = sol.omega_r_sq(k);
    if !(omega_sq < cutoff) {
        return Err(Error::AboveCutoff { omega_sq, cutoff });
    }
    Ok(((cutoff - omega_sq) * norm_U0_sq(sol, k) / compute_b_closed(sol, k).abs()).sqrt())
}

/// Small-angle parameter: ε = tan α, or α itself in radians mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleMode {
    #[default]
    Tan,
    Radians,
}

impl AngleMode {
    /// Converts a user-supplied value to ε = tan α.
    pub fn to_eps(self, value: f64) -> f64 {
        match self {
            AngleMode::Tan => value,
            AngleMode::Radians => value.tan(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub b: f64,
    pub cv_plus: f64,
    pub cu_plus: f64,
    pub xi1: f64,
    pub lambda1: f64,
    pub theta: f64,
    pub norm_u0_sq: f64,
    pub k: f64,
    pub provenance: Provenance,
}

/// All coefficients along one computational path. `Fem` is not a valid path here.
pub fn coefficients(sol: &RayleighSolution, k: f64, path: Provenance) -> Result<AsymptoticCoefficients> {
    let (b, cv, norm) = match path {
        Provenance::ClosedForm => (compute_b_closed(sol, k), compute_cv_plus_closed(sol, k), norm_U0_sq(sol, k)),
        Provenance::Quadrature => (
            compute_b_quadrature(sol, k)?.re,
            compute_cv_plus(sol, k)?.re,
            norm_U0_sq_exact(sol, k)?,
        ),
        Provenance::Fem => {
            return Err(Error::ConstraintViolation("coefficients have no finite-element path".into()))
        }
    };
    let lambda1 = b.abs() * cv * cv / norm;
    Ok(AsymptoticCoefficients {
        b,
        cv_plus: cv,
        cu_plus: compute_cu_plus(sol, k)?.re,
        xi1: -cv,
        lambda1,
        theta: lambda1 / sol.omega_r_sq(k),
        norm_u0_sq: norm,
        k,
        provenance: path,
    })
}
