//! The Rayleigh mode u^R, the linearly growing companion v^R, and their
//! stresses, all as exact exponential sums in the depth variable x2.

use crate::error::Result;
use crate::expsum::ExpSum;
use crate::material::RayleighSolution;
use num_complex::Complex64 as C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// a(x2) + x1·b(x2).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffineField {
    pub a: ExpSum,
    pub b: ExpSum,
}

impl AffineField {
    pub fn constant_in_x1(a: ExpSum) -> Self {
        Self { a, b: ExpSum::zero() }
    }

    pub fn at_x1(&self, x1: f64) -> ExpSum {
        if x1 == 0.0 {
            self.a.clone()
        } else {
            &self.a + &self.b.scale_re(x1)
        }
    }

    pub fn eval(&self, x1: f64, x2: f64) -> C64 {
        self.a.eval(x2) + x1 * self.b.eval(x2)
    }

    /// ∂_axis with ∂₃ → ik. `axis` is 1-based.
    pub fn partial(&self, axis: usize, k: f64) -> Self {
        match axis {
            1 => Self::constant_in_x1(self.b.clone()),
            2 => Self { a: self.a.derivative(), b: self.b.derivative() },
            3 => Self { a: self.a.scale(I * k), b: self.b.scale(I * k) },
            _ => panic!("axis must be 1, 2 or 3 (got {axis})"),
        }
    }
}

/// Displacement field e^{ikx3}·(component_j(x1, x2)).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField {
    pub components: [AffineField; 3],
    pub k: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl ModeField {
    /// Component `j` (1-based) restricted to the line x1 = const.
    pub fn component_at(&self, j: usize, x1: f64) -> ExpSum {
        self.components[j - 1].at_x1(x1)
    }

    pub fn eval(&self, x1: f64, x2: f64) -> [C64; 3] {
        [0, 1, 2].map(|j| self.components[j].eval(x1, x2))
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut out = self.clone();
        for c in out.components.iter_mut() {
            c.a = c.a.scale(z);
            c.b = c.b.scale(z);
        }
        out
    }
}

/// u₂^R and u₃^R with amplitude A = 1.
pub fn profile(sol: &RayleighSolution, k: f64) -> (ExpSum, ExpSum) {
    let (kl, kt) = (sol.kappa_l, sol.kappa_t);
    let d = 1.0 + kt * kt;
    let (rl, rt) = (k * kl, k * kt);
    let u2 = &ExpSum::exp(I * kl, rl) + &ExpSum::exp(-I * kl * 2.0 / d, rt);
    let u3 = &ExpSum::exp(C64::new(1.0, 0.0), rl) + &ExpSum::exp(C64::new(-2.0 * kl * kt / d, 0.0), rt);
    (u2, u3)
}

#[allow(non_snake_case)]
pub fn build_uR(sol: &RayleighSolution, k: f64) -> ModeField {
    assert!(k > 0.0, "wavenumber must be positive");
    let (u2, u3) = profile(sol, k);
    ModeField {
        components: [
            AffineField::default(),
            AffineField::constant_in_x1(u2),
            AffineField::constant_in_x1(u3),
        ],
        k,
        lambda: sol.material.lambda(),
        mu: sol.material.mu(),
    }
}

/// v^R = (−ik⁻¹u₃^R, x1·u₂^R, x1·u₃^R).
#[allow(non_snake_case)]
pub fn build_vR(sol: &RayleighSolution, k: f64) -> ModeField {
    assert!(k > 0.0, "wavenumber must be positive");
    let (u2, u3) = profile(sol, k);
    ModeField {
        components: [
            AffineField::constant_in_x1(u3.scale(-I / k)),
            AffineField { a: ExpSum::zero(), b: u2 },
            AffineField { a: ExpSum::zero(), b: u3 },
        ],
        k,
        lambda: sol.material.lambda(),
        mu: sol.material.mu(),
    }
}

/// σ_nm[field] on the line x1 = `at_x1` (indices 1-based).
pub fn stress(field: &ModeField, n: usize, m: usize, at_x1: f64) -> ExpSum {
    assert!((1..=3).contains(&n) && (1..=3).contains(&m), "stress indices are 1..=3");
    let grad = |j: usize, l: usize| field.components[j - 1].partial(l, field.k).at_x1(at_x1);
    let mut s = (&grad(n, m) + &grad(m, n)).scale_re(field.mu);
    if n == m {
        let div = &(&grad(1, 1) + &grad(2, 2)) + &grad(3, 3);
        s = &s + &div.scale_re(field.lambda);
    }
    s
}

/// ∫₀^∞ |u^R|² dx2 by exact integration.
#[allow(non_snake_case)]
pub fn norm_U0_sq_exact(sol: &RayleighSolution, k: f64) -> Result<f64> {
    let (u2, u3) = profile(sol, k);
    let s = &(&u2 * &u2.conj()) + &(&u3 * &u3.conj());
    Ok(s.integrate_halfline()?.re)
}

/// Closed form B²((1−B)²(7−2B)+1) / (8k(1−B)^{3/2}(2−B)²).
#[allow(non_snake_case)]
pub fn norm_U0_sq(sol: &RayleighSolution, k: f64) -> f64 {
    let b = sol.b;
    b * b * ((1.0 - b).powi(2) * (7.0 - 2.0 * b) + 1.0) / (8.0 * k * (1.0 - b).powf(1.5) * (2.0 - b).powi(2))
}
