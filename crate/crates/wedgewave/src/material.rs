//! Isotropic material and the Rayleigh speed.
//!
//! Density is fixed to one throughout, so moduli and squared speeds share units.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicMaterial {
    lambda: f64,
    mu: f64,
}

impl IsotropicMaterial {
    pub const RHO: f64 = 1.0;

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn rho(&self) -> f64 {
        Self::RHO
    }
    pub fn poisson(&self) -> f64 {
        self.lambda / (2.0 * (self.lambda + self.mu))
    }
    pub fn c_t(&self) -> f64 {
        self.mu.sqrt()
    }
    pub fn c_l(&self) -> f64 {
        (self.lambda + 2.0 * self.mu).sqrt()
    }
    /// λ + 2μ, the P-wave modulus.
    pub fn p_modulus(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    /// Same Poisson ratio, moduli multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        make_material(s * self.lambda, s * self.mu)
    }
}

pub fn make_material(lambda: f64, mu: f64) -> Result<IsotropicMaterial> {
    if !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::ConstraintViolation(format!(
            "moduli must be finite (lambda = {lambda}, mu = {mu})"
        )));
    }
    if !(mu > 0.0) {
        return Err(Error::ConstraintViolation(format!("mu > 0 violated (mu = {mu})")));
    }
    if !(lambda + 2.0 / 3.0 * mu > 0.0) {
        return Err(Error::ConstraintViolation(format!(
            "lambda + (2/3) mu > 0 violated (lambda = {lambda}, mu = {mu})"
        )));
    }
    Ok(IsotropicMaterial { lambda, mu })
}

pub fn from_poisson(poisson: f64, mu: f64) -> Result<IsotropicMaterial> {
    if !(poisson > -1.0 && poisson < 0.5) {
        return Err(Error::ConstraintViolation(format!(
            "poisson in (-1, 1/2) violated (poisson = {poisson})"
        )));
    }
    make_material(2.0 * mu * poisson / (1.0 - 2.0 * poisson), mu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighSolution {
    pub material: IsotropicMaterial,
    pub c_r: f64,
    /// c_R² / c_t² = 1 − κ_t².
    pub b: f64,
    pub kappa_t: f64,
    pub kappa_l: f64,
}

impl RayleighSolution {
    /// ω_R² = c_R² k².
    pub fn omega_r_sq(&self, k: f64) -> f64 {
        self.c_r * self.c_r * k * k
    }
}

/// R(c) = (2 − c²/c_t²)² − 4 √(1 − c²/c_l²) √(1 − c²/c_t²).
pub fn rayleigh_function(mat: &IsotropicMaterial, c: f64) -> f64 {
    let xt = c * c / mat.mu();
    let xl = c * c / mat.p_modulus();
    // c = c_t can round to xt slightly above 1
    (2.0 - xt).powi(2) - 4.0 * (1.0 - xl).max(0.0).sqrt() * (1.0 - xt).max(0.0).sqrt()
}

fn rayleigh_derivative(mat: &IsotropicMaterial, c: f64) -> f64 {
    let (mu, p) = (mat.mu(), mat.p_modulus());
    let xt = c * c / mu;
    let xl = c * c / p;
    let (st, sl) = ((1.0 - xt).sqrt(), (1.0 - xl).sqrt());
    // d/dc of each factor, with dx/dc = 2c/modulus
    -2.0 * (2.0 - xt) * 2.0 * c / mu + 4.0 * (c / p * st / sl + c / mu * sl / st)
}

pub fn solve_rayleigh(mat: &IsotropicMaterial) -> Result<RayleighSolution> {
    let ct = mat.c_t();
    // R vanishes at c = 0 with negative slope in c², so start just off zero.
    let mut lo = 1e-3 * ct;
    let mut hi = ct;
    let (flo, fhi) = (rayleigh_function(mat, lo), rayleigh_function(mat, hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::RootBracketFailure { poisson: mat.poisson() });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rayleigh_function(mat, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut c = 0.5 * (lo + hi);
    for _ in 0..2 {
        let d = rayleigh_derivative(mat, c);
        if d != 0.0 {
            let next = c - rayleigh_function(mat, c) / d;
            if next > 0.0 && next < ct {
                c = next;
            }
        }
    }
    let b = c * c / mat.mu();
    Ok(RayleighSolution {
        material: *mat,
        c_r: c,
        b,
        kappa_t: (1.0 - b).sqrt(),
        kappa_l: (1.0 - c * c / mat.p_modulus()).sqrt(),
    })
}

/// Relative residual of 16 − 24B + 8B² − B³ = 16 (c_t² − c_R²)/c_l².
pub fn check_rayleigh_identity(sol: &RayleighSolution) -> f64 {
    let b = sol.b;
    let m = &sol.material;
    let lhs = 16.0 - 24.0 * b + 8.0 * b * b - b * b * b;
    let rhs = 16.0 * (m.mu() - sol.c_r * sol.c_r) / m.p_modulus();
    (lhs - rhs).abs() / rhs.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_materials() {
        let m = make_material(1.0, 1.0).unwrap();
        assert_eq!(m.poisson(), 0.25);
        assert!((m.c_l() - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(make_material(0.0, 1.0).unwrap().poisson(), 0.0);
        assert!(matches!(make_material(1.0, 0.0), Err(Error::ConstraintViolation(s)) if s.contains("mu > 0")));
        assert!(make_material(-1.0, 1.0).is_err());
        assert_eq!(from_poisson(0.25, 1.0).unwrap().lambda(), 1.0);
        assert_eq!(from_poisson(0.0, 2.0).unwrap().lambda(), 0.0);
        assert!(from_poisson(0.5, 1.0).is_err());
        assert!(from_poisson(-1.0, 1.0).is_err());
    }

    #[test]
    fn known_rayleigh_ratios() {
        let s = solve_rayleigh(&make_material(1.0, 1.0).unwrap()).unwrap();
        assert!((s.c_r - 0.919402).abs() < 1e-6);
        // Poisson solid: B is the root 2 − 2/√3 of the reduced cubic.
        assert!((s.b - (2.0 - 2.0 / 3f64.sqrt())).abs() < 1e-14);
        let s = solve_rayleigh(&make_material(0.0, 1.0).unwrap()).unwrap();
        assert!((s.c_r - 0.874032).abs() < 1e-6);
    }

    #[test]
    fn bracket_survives_rounding_at_shear_speed() {
        // c_t²/μ rounds above 1 for this μ
        let s = solve_rayleigh(&from_poisson(0.0, 207.49334605349057).unwrap()).unwrap();
        assert!((s.c_r / s.material.c_t() - 0.874032).abs() < 1e-6);
    }
}
