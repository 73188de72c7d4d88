//! The pencil ξ ↦ (L(ξ,∂₂,ik), N(ξ,∂₂,ik)) obtained from the elasticity system
//! by the substitution ∂₁ → ξ, ∂₃ → ik, and everything computed from it.
//!
//! L acts as A2·∂₂² + A1·∂₂ + A0 on half-line fields, N as B1·∂₂ + B0 at x2 = 0
//! (traction with the outward normal −e₂). Both are quadratic polynomials in ξ;
//! [`PencilPolynomial`] keeps the ξ-coefficients so derivatives in ξ are exact.

pub mod halfline;

pub use halfline::{
    count_eigenvalues_near_zero, form_lower_bound, min_singular_scan, near_kernel_on_real_axis,
    strip_samples, GalerkinPencil, HalfLineGrid, StripScanReport,
};

use crate::error::Result;
use crate::expsum::ExpSum;
use crate::material::{IsotropicMaterial, RayleighSolution};
use crate::rayleigh_mode::profile;
use num_complex::Complex64 as C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub type Mat3 = [[C64; 3]; 3];

fn zero3() -> Mat3 {
    [[ZERO; 3]; 3]
}

fn add_scaled(a: &Mat3, b: &Mat3, s: C64) -> Mat3 {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += s * b[i][j];
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilOperator {
    pub a0: Mat3,
    pub a1: Mat3,
    pub a2: Mat3,
    pub b0: Mat3,
    pub b1: Mat3,
    pub xi: C64,
    pub k: f64,
}

impl PencilOperator {
    /// Apply L to a field given by its three component profiles.
    pub fn apply_interior(&self, u: &[ExpSum; 3]) -> [ExpSum; 3] {
        apply_l(&[self.a0, self.a1, self.a2], u)
    }

    /// Apply N at x2 = 0.
    pub fn apply_boundary(&self, u: &[ExpSum; 3]) -> [C64; 3] {
        apply_n(&[self.b0, self.b1], u)
    }
}

fn apply_l(a: &[Mat3; 3], u: &[ExpSum; 3]) -> [ExpSum; 3] {
    let d1: Vec<ExpSum> = u.iter().map(|s| s.derivative()).collect();
    let d2: Vec<ExpSum> = d1.iter().map(|s| s.derivative()).collect();
    let derivs = [u.to_vec(), d1, d2];
    std::array::from_fn(|n| {
        let mut acc = ExpSum::zero();
        for (order, m) in a.iter().enumerate() {
            for j in 0..3 {
                if m[n][j] != ZERO {
                    acc = &acc + &derivs[order][j].scale(m[n][j]);
                }
            }
        }
        acc
    })
}

fn apply_n(b: &[Mat3; 2], u: &[ExpSum; 3]) -> [C64; 3] {
    let v0: Vec<C64> = u.iter().map(|s| s.eval(0.0)).collect();
    let v1: Vec<C64> = u.iter().map(|s| s.derivative().eval(0.0)).collect();
    std::array::from_fn(|n| (0..3).map(|j| b[0][n][j] * v0[j] + b[1][n][j] * v1[j]).sum())
}

/// ξ-coefficients of the pencil: `l[p][d]` multiplies ξ^p ∂₂^d, `n[p][d]` likewise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilPolynomial {
    pub l: [[Mat3; 3]; 3],
    pub n: [[Mat3; 2]; 3],
    pub k: f64,
}

impl PencilPolynomial {
    pub fn new(mat: &IsotropicMaterial, k: f64) -> Self {
        let (la, mu) = (mat.lambda(), mat.mu());
        let p = la + 2.0 * mu;
        let c = |x: f64| C64::new(x, 0.0);
        let mut l = [[zero3(); 3]; 3];
        let mut n = [[zero3(); 2]; 3];
        // ∂² terms
        l[0][2][0][0] = c(-mu);
        l[0][2][1][1] = c(-p);
        l[0][2][2][2] = c(-mu);
        // ∂ terms
        l[1][1][0][1] = c(-(la + mu));
        l[1][1][1][0] = c(-(la + mu));
        l[0][1][1][2] = -(la + mu) * I * k;
        l[0][1][2][1] = -(la + mu) * I * k;
        // zeroth-order terms
        l[0][0][0][0] = c(mu * k * k);
        l[0][0][1][1] = c(mu * k * k);
        l[0][0][2][2] = c(p * k * k);
        l[1][0][0][2] = -(la + mu) * I * k;
        l[1][0][2][0] = -(la + mu) * I * k;
        l[2][0][0][0] = c(-p);
        l[2][0][1][1] = c(-mu);
        l[2][0][2][2] = c(-mu);
        // traction
        n[0][1][0][0] = c(-mu);
        n[0][1][1][1] = c(-p);
        n[0][1][2][2] = c(-mu);
        n[1][0][0][1] = c(-mu);
        n[1][0][1][0] = c(-la);
        n[0][0][1][2] = -la * I * k;
        n[0][0][2][1] = -mu * I * k;
        Self { l, n, k }
    }

    /// The `order`-th ξ-derivative of the pencil, evaluated at ξ.
    pub fn derivative_at(&self, xi: C64, order: usize) -> PencilOperator {
        let mut a = [zero3(); 3];
        let mut b = [zero3(); 2];
        for p in order..3 {
            // d^order/dξ^order ξ^p = p!/(p-order)! ξ^{p-order}
            let fall: f64 = ((p - order + 1)..=p).map(|v| v as f64).product();
            let w = fall * xi.powi((p - order) as i32);
            for d in 0..3 {
                a[d] = add_scaled(&a[d], &self.l[p][d], w);
            }
            for d in 0..2 {
                b[d] = add_scaled(&b[d], &self.n[p][d], w);
            }
        }
        PencilOperator { a0: a[0], a1: a[1], a2: a[2], b0: b[0], b1: b[1], xi, k: self.k }
    }
}

pub fn assemble_pencil(mat: &IsotropicMaterial, xi: C64, k: f64) -> PencilOperator {
    assert!(k > 0.0, "wavenumber must be positive");
    PencilPolynomial::new(mat, k).derivative_at(xi, 0)
}

/// Rotation by arctan(η/k) in the x1Ox3 plane, taking (η, k) to (0, √(k²+η²)).
pub fn rotation_x1x3(eta: f64, k: f64) -> Mat3 {
    let r = eta.hypot(k);
    let (c, s) = (k / r, eta / r);
    let mut m = zero3();
    m[0][0] = C64::new(c, 0.0);
    m[0][2] = C64::new(-s, 0.0);
    m[2][0] = C64::new(s, 0.0);
    m[2][2] = C64::new(c, 0.0);
    m[1][1] = C64::new(1.0, 0.0);
    m
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|l| a[i][l] * b[l][j]).sum()))
}

pub fn mat3_transpose(a: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

fn u_profile(sol: &RayleighSolution, k: f64) -> [ExpSum; 3] {
    let (u2, u3) = profile(sol, k);
    [ExpSum::zero(), u2, u3]
}

/// ŵ¹ = (−ik⁻¹u₃^R, 0, 0).
pub fn jordan_vector(sol: &RayleighSolution, k: f64) -> [ExpSum; 3] {
    let (_, u3) = profile(sol, k);
    [u3.scale(-I / k), ExpSum::zero(), ExpSum::zero()]
}

fn residual_size(interior: &[ExpSum; 3], boundary: &[C64; 3]) -> f64 {
    let i = interior.iter().map(|s| s.max_abs_coeff()).fold(0.0, f64::max);
    let b = boundary.iter().map(|z| z.norm()).fold(0.0, f64::max);
    i + b
}

fn minus_omega_sq(u: &[ExpSum; 3], omega_sq: f64) -> [ExpSum; 3] {
    std::array::from_fn(|j| u[j].scale_re(-omega_sq))
}

fn sum3(a: &[ExpSum; 3], b: &[ExpSum; 3]) -> [ExpSum; 3] {
    std::array::from_fn(|j| &a[j] + &b[j])
}

/// Size of (L(0) − ω²)u and N(0)u(0) for an arbitrary profile and ω².
pub fn eigen_defect(mat: &IsotropicMaterial, k: f64, u: &[ExpSum; 3], omega_sq: f64) -> f64 {
    let op = assemble_pencil(mat, ZERO, k);
    let interior = sum3(&op.apply_interior(u), &minus_omega_sq(u, omega_sq));
    residual_size(&interior, &op.apply_boundary(u))
}

/// Exact residual of the ξ = 0 eigenproblem for u^R.
pub fn residual_eigenpair(sol: &RayleighSolution, k: f64) -> f64 {
    eigen_defect(&sol.material, k, &u_profile(sol, k), sol.omega_r_sq(k))
}

/// Residual of the Jordan-chain equations
/// (L(0) − ω_R²)w + ∂_ξL(0)u^R = 0, N(0)w(0) + ∂_ξN(0)u^R(0) = 0.
pub fn residual_jordan_with(sol: &RayleighSolution, k: f64, w: &[ExpSum; 3]) -> f64 {
    let poly = PencilPolynomial::new(&sol.material, k);
    let (p0, p1) = (poly.derivative_at(ZERO, 0), poly.derivative_at(ZERO, 1));
    let u = u_profile(sol, k);
    let interior = sum3(
        &sum3(&p0.apply_interior(w), &minus_omega_sq(w, sol.omega_r_sq(k))),
        &p1.apply_interior(&u),
    );
    let (bw, bu) = (p0.apply_boundary(w), p1.apply_boundary(&u));
    residual_size(&interior, &std::array::from_fn(|j| bw[j] + bu[j]))
}

pub fn residual_jordan(sol: &RayleighSolution, k: f64) -> f64 {
    residual_jordan_with(sol, k, &jordan_vector(sol, k))
}

/// b from the boundary term plus the half-line integral, both exact:
/// −λ/(ik)·u₃(0)ū₂(0) + ∫ [i(λ+μ)k⁻¹u₃'ū₂ − (λ+2μ)|u₃|² − μ|u₂|²].
pub fn compute_b_quadrature(sol: &RayleighSolution, k: f64) -> Result<C64> {
    let (la, mu) = (sol.material.lambda(), sol.material.mu());
    let (u2, u3) = profile(sol, k);
    let (c2, c3) = (u2.conj(), u3.conj());
    let boundary = -(la / (I * k)) * u3.eval(0.0) * c2.eval(0.0);
    let integrand = &(&(&u3.derivative() * &c2).scale(I * (la + mu) / k)
        - &(&u3 * &c3).scale_re(la + 2.0 * mu))
        - &(&u2 * &c2).scale_re(mu);
    Ok(boundary + integrand.integrate_halfline()?)
}

/// −(λ+2μ)B³(16−24B+8B²−B³)((1−B)²(7−2B)+1) / (128k(1−B)^{5/2}(2−B)²).
pub fn compute_b_closed(sol: &RayleighSolution, k: f64) -> f64 {
    let b = sol.b;
    let p = sol.material.p_modulus();
    -p * b.powi(3) * (16.0 - 24.0 * b + 8.0 * b * b - b.powi(3)) * ((1.0 - b).powi(2) * (7.0 - 2.0 * b) + 1.0)
        / (128.0 * k * (1.0 - b).powf(2.5) * (2.0 - b).powi(2))
}

/// Solvability functional of the third equation of the chain, built directly
/// from the ξ-derivatives of the pencil: with right-hand sides
/// F = −∂_ξL ŵ¹ − ½∂²_ξL u^R and G = −∂_ξN ŵ¹ − ½∂²_ξN u^R, it is
/// ∫F·ū^R + G·ū^R(0). Green's formula makes it vanish for a solvable problem;
/// it evaluates to −b, so a third chain vector cannot exist.
pub fn chain_obstruction(sol: &RayleighSolution, k: f64) -> Result<C64> {
    let poly = PencilPolynomial::new(&sol.material, k);
    let (p1, p2) = (poly.derivative_at(ZERO, 1), poly.derivative_at(ZERO, 2));
    let u = u_profile(sol, k);
    let w = jordan_vector(sol, k);
    let (lw, lu) = (p1.apply_interior(&w), p2.apply_interior(&u));
    let (nw, nu) = (p1.apply_boundary(&w), p2.apply_boundary(&u));
    let mut acc = ZERO;
    for j in 0..3 {
        let f = -&(&lw[j] + &lu[j].scale_re(0.5));
        acc += (&f * &u[j].conj()).integrate_halfline()?;
        acc += -(nw[j] + 0.5 * nu[j]) * u[j].eval(0.0).conj();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{from_poisson, make_material, solve_rayleigh};

    fn close(a: &Mat3, b: &Mat3, tol: f64) -> bool {
        (0..3).all(|i| (0..3).all(|j| (a[i][j] - b[i][j]).norm() <= tol))
    }

    #[test]
    fn displayed_entries() {
        let m = make_material(1.3, 0.7).unwrap();
        let (la, mu) = (1.3, 0.7);
        let (xi, k) = (C64::new(0.3, -0.2), 1.7);
        let op = assemble_pencil(&m, xi, k);
        assert!((op.a0[0][0] - (mu * k * k - (la + 2.0 * mu) * xi * xi)).norm() < 1e-14);
        assert!((op.a1[0][1] + (la + mu) * xi).norm() < 1e-14);
        assert!((op.a0[0][2] + (la + mu) * I * xi * k).norm() < 1e-14);
        assert!((op.b0[1][0] + la * xi).norm() < 1e-14);
        assert_eq!(op.b1[1][1], C64::new(-(la + 2.0 * mu), 0.0));
        assert!((op.b0[1][2] + la * I * k).norm() < 1e-14);

        let z = assemble_pencil(&m, ZERO, k);
        assert_eq!(z.a0[0][2], ZERO);
        assert_eq!(z.a0[2][0], ZERO);
        assert_eq!(z.a0[2][2], C64::new((la + 2.0 * mu) * k * k, 0.0));
        assert_eq!(z.a2[2][2], C64::new(-mu, 0.0));
    }

    #[test]
    fn rotation_similarity_on_imaginary_axis() {
        let m = make_material(1.0, 1.0).unwrap();
        for (eta, k) in [(1.0, 1.0), (0.4, 2.0), (3.0, 0.5)] {
            let lhs = assemble_pencil(&m, C64::new(0.0, eta), k);
            let rhs = assemble_pencil(&m, ZERO, eta.hypot(k));
            let r = rotation_x1x3(eta, k);
            let rt = mat3_transpose(&r);
            let conj = |a: &Mat3| mat3_mul(&rt, &mat3_mul(a, &r));
            assert!(close(&lhs.a0, &conj(&rhs.a0), 1e-13));
            assert!(close(&lhs.a1, &conj(&rhs.a1), 1e-13));
            assert!(close(&lhs.a2, &conj(&rhs.a2), 1e-13));
            assert!(close(&lhs.b0, &conj(&rhs.b0), 1e-13));
            assert!(close(&lhs.b1, &conj(&rhs.b1), 1e-13));
        }
    }

    #[test]
    fn jordan_needs_the_associated_vector() {
        let s = solve_rayleigh(&from_poisson(0.25, 1.0).unwrap()).unwrap();
        let zero: [ExpSum; 3] = Default::default();
        assert!(residual_jordan(&s, 1.0) < 1e-11);
        assert!(residual_jordan_with(&s, 1.0, &zero) > 1e-2);
    }
}
