//! Independent numerical-quadrature oracle for the exactly integrated
//! coefficients: profiles written out by hand, composite 5-point
//! Gauss–Legendre on [0, X] with X = 40/(k·min(κ_t, κ_l)).

use num_complex::Complex64 as C64;
use wedgewave::pencil::{compute_b_closed, compute_b_quadrature};
use wedgewave::rayleigh_mode::{norm_U0_sq, norm_U0_sq_exact};
use wedgewave::{from_poisson, solve_rayleigh, RayleighSolution};

const I: C64 = C64 { re: 0.0, im: 1.0 };

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664_0, 0.236_926_885_056_189_1),
];

fn gauss(f: impl Fn(f64) -> C64, x_max: f64, panels: usize) -> C64 {
    let h = x_max / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (t, w) in GL5 {
            acc += f(mid + 0.5 * h * t) * (0.5 * h * w);
        }
    }
    acc
}

struct Profile {
    kl: f64,
    kt: f64,
    k: f64,
}

impl Profile {
    fn new(sol: &RayleighSolution, k: f64) -> Self {
        Self { kl: sol.kappa_l, kt: sol.kappa_t, k }
    }
    fn c(&self) -> f64 {
        2.0 / (1.0 + self.kt * self.kt)
    }
    fn u2(&self, x: f64) -> C64 {
        I * self.kl * ((-self.k * self.kl * x).exp() - self.c() * (-self.k * self.kt * x).exp())
    }
    fn u3(&self, x: f64) -> C64 {
        C64::new((-self.k * self.kl * x).exp() - self.c() * self.kl * self.kt * (-self.k * self.kt * x).exp(), 0.0)
    }
    fn du3(&self, x: f64) -> C64 {
        let k = self.k;
        C64::new(
            -k * self.kl * (-k * self.kl * x).exp() + self.c() * self.kl * self.kt * k * self.kt * (-k * self.kt * x).exp(),
            0.0,
        )
    }
    fn x_max(&self) -> f64 {
        40.0 / (self.k * self.kt.min(self.kl))
    }
}

fn b_oracle(sol: &RayleighSolution, k: f64) -> C64 {
    let (la, mu) = (sol.material.lambda(), sol.material.mu());
    let p = Profile::new(sol, k);
    let boundary = -(la / (I * k)) * p.u3(0.0) * p.u2(0.0).conj();
    let integral = gauss(
        |x| {
            I * (la + mu) / k * p.du3(x) * p.u2(x).conj()
                - (la + 2.0 * mu) * p.u3(x).norm_sqr()
                - mu * p.u2(x).norm_sqr()
        },
        p.x_max(),
        4000,
    );
    boundary + integral
}

fn norm_oracle(sol: &RayleighSolution, k: f64) -> f64 {
    let p = Profile::new(sol, k);
    gauss(|x| C64::new(p.u2(x).norm_sqr() + p.u3(x).norm_sqr(), 0.0), p.x_max(), 4000).re
}

#[test]
fn b_matches_quadrature_oracle() {
    for s in [-0.9, -0.5, 0.0, 0.25, 0.4, 0.49] {
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        for k in [1.0, 3.0] {
            let oracle = b_oracle(&sol, k);
            let exact = compute_b_quadrature(&sol, k).unwrap();
            let closed = compute_b_closed(&sol, k);
            assert!((oracle - exact).norm() < 1e-10 * closed.abs(), "sigma {s}, k {k}: {oracle} vs {exact}");
            assert!((oracle.re - closed).abs() < 1e-10 * closed.abs());
            assert!(oracle.im.abs() < 1e-12 && oracle.re < 0.0);
        }
    }
}

#[test]
fn b_scales_like_inverse_k() {
    let sol = solve_rayleigh(&from_poisson(0.25, 1.0).unwrap()).unwrap();
    let ratio = b_oracle(&sol, 2.0).re / b_oracle(&sol, 1.0).re;
    assert!((ratio - 0.5).abs() < 1e-12);
    let exact = compute_b_quadrature(&sol, 2.0).unwrap().re / compute_b_quadrature(&sol, 1.0).unwrap().re;
    assert!((exact - 0.5).abs() < 1e-12);
}

#[test]
fn mode_norm_matches_quadrature_oracle() {
    for s in [-0.5, 0.0, 0.25, 0.4] {
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let oracle = norm_oracle(&sol, 1.0);
        assert!((oracle / norm_U0_sq(&sol, 1.0) - 1.0).abs() < 1e-11);
        assert!((oracle / norm_U0_sq_exact(&sol, 1.0).unwrap() - 1.0).abs() < 1e-11);
    }
}

#[test]
fn b_equals_minus_cutoff_speed_times_norm() {
    // Green's identity for the Rayleigh mode: b = −c_R²‖U⁰‖² (unit density, k = 1)
    for s in [-0.9, -0.5, 0.0, 0.25, 0.4] {
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let lhs = compute_b_closed(&sol, 1.0);
        let rhs = -sol.c_r * sol.c_r * norm_oracle(&sol, 1.0);
        assert!((lhs / rhs - 1.0).abs() < 1e-11, "sigma {s}: {lhs} vs {rhs}");
    }
}
