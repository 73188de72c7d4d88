//! Invariants checked on random inputs.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use wedgewave::asymptotics::{compute_lambda1, compute_theta, flux, green_ratio, JumpModel};
use wedgewave::expsum::Term;
use wedgewave::pencil::{
    assemble_pencil, compute_b_closed, eigen_defect, mat3_mul, mat3_transpose, residual_eigenpair, rotation_x1x3,
};
use wedgewave::rayleigh_mode::{build_uR, build_vR, norm_U0_sq, profile};
use wedgewave::wedge_fem::assembly::element_matrices;
use wedgewave::wedge_fem::{build_mesh, WedgeMeshSpec};
use wedgewave::{from_poisson, make_material, solve_rayleigh, ExpSum};

fn poisson() -> impl Strategy<Value = f64> {
    -0.98f64..0.49
}

fn expsum() -> impl Strategy<Value = ExpSum> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, 0u32..3, 0.2f64..3.0), 1..5).prop_map(|ts| {
        ExpSum::from_terms(ts.into_iter().map(|(re, im, power, rate)| Term { coeff: C64::new(re, im), power, rate }).collect())
    })
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moduli_scaling_keeps_speed_ratio_and_scales_b(s in poisson(), scale in 1e-3f64..1e3) {
        let a = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let b = solve_rayleigh(&from_poisson(s, scale).unwrap()).unwrap();
        prop_assert!((a.b - b.b).abs() < 1e-12);
        prop_assert!((b.c_r / b.material.c_t() - a.c_r).abs() < 1e-12);
        let (ba, bb) = (compute_b_closed(&a, 1.0), compute_b_closed(&b, 1.0));
        prop_assert!((bb / (scale * ba) - 1.0).abs() < 1e-11);
        prop_assert!((compute_theta(&a).unwrap() / compute_theta(&b).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lambda1_is_quadratic_in_k(s in poisson(), k in 0.1f64..10.0) {
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let ratio = compute_lambda1(&sol, k) / (k * k * compute_lambda1(&sol, 1.0));
        prop_assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expsum_algebra_matches_pointwise(a in expsum(), b in expsum(), x in 0.0f64..5.0) {
        prop_assert!(close((&a + &b).eval(x), a.eval(x) + b.eval(x), 1e-12));
        prop_assert!(close((&a - &b).eval(x), a.eval(x) - b.eval(x), 1e-12));
        prop_assert!(close((&a * &b).eval(x), a.eval(x) * b.eval(x), 1e-12));
        prop_assert!(close(a.conj().eval(x), a.eval(x).conj(), 1e-14));
    }

    #[test]
    fn expsum_derivative_matches_difference_quotient(a in expsum(), x in 0.5f64..4.0) {
        let h = 1e-5;
        let fd = (a.eval(x + h) - a.eval(x - h)) / (2.0 * h);
        prop_assert!(close(a.derivative().eval(x), fd, 1e-7));
    }

    #[test]
    fn expsum_integral_is_additive_and_nonnegative_for_squares(a in expsum(), b in expsum()) {
        let sum = (&a + &b).integrate_halfline().unwrap();
        let parts = a.integrate_halfline().unwrap() + b.integrate_halfline().unwrap();
        prop_assert!(close(sum, parts, 1e-12));
        let sq = (&a * &a.conj()).integrate_halfline().unwrap();
        prop_assert!(sq.re >= -1e-12 && sq.im.abs() < 1e-12 * (1.0 + sq.re));
    }

    #[test]
    fn mode_defect_ignores_global_phase(s in poisson(), k in 0.2f64..5.0, phi in 0.0f64..6.3, amp in 0.1f64..10.0) {
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let (u2, u3) = profile(&sol, k);
        let z = C64::from_polar(amp, phi);
        let u = [ExpSum::zero(), u2.scale(z), u3.scale(z)];
        let d = eigen_defect(&sol.material, k, &u, sol.omega_r_sq(k));
        prop_assert!(d <= 1e-11 * amp.max(1.0) * k.max(1.0).powi(2));
        prop_assert!(residual_eigenpair(&sol, k) < 1e-11 * k.max(1.0).powi(2));
    }

    #[test]
    fn green_ratio_ignores_test_field_amplitude_and_phase(s in poisson(), phi in 0.0f64..6.3, amp in 0.1f64..10.0) {
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let (u, v) = (build_uR(&sol, 1.0), build_vR(&sol, 1.0));
        let z = C64::from_polar(amp, phi);
        let base = green_ratio(&sol, 1.0, &u, &v, JumpModel::Transmission).unwrap();
        let scaled = green_ratio(&sol, 1.0, &u.scale(z), &v, JumpModel::Transmission).unwrap();
        prop_assert!(close(scaled, base, 1e-12));
        // flux is sesquilinear
        let f = flux(&v.scale(z), &u.scale(z), 0.0).unwrap();
        prop_assert!(close(f, flux(&v, &u, 0.0).unwrap() * amp * amp, 1e-12));
    }

    #[test]
    fn lambda1_ignores_mode_amplitude(s in poisson(), amp in 0.1f64..10.0) {
        // b and ‖U⁰‖² are both quadratic in the amplitude; c_v⁺ does not depend on it
        let sol = solve_rayleigh(&from_poisson(s, 1.0).unwrap()).unwrap();
        let cv = wedgewave::asymptotics::compute_cv_plus_closed(&sol, 1.0);
        let l = (amp * amp * compute_b_closed(&sol, 1.0)).abs() * cv * cv / (amp * amp * norm_U0_sq(&sol, 1.0));
        prop_assert!((l / compute_lambda1(&sol, 1.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn pencil_is_linear_in_moduli(sigma in poisson(), mu in 0.1f64..5.0, s in 1e-2f64..1e2, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let xi = C64::new(re, im);
        let lambda = from_poisson(sigma, mu).unwrap().lambda();
        let a = assemble_pencil(&make_material(lambda, mu).unwrap(), xi, 1.3);
        let b = assemble_pencil(&make_material(s * lambda, s * mu).unwrap(), xi, 1.3);
        for (ma, mb) in [(a.a0, b.a0), (a.a1, b.a1), (a.a2, b.a2), (a.b0, b.b0), (a.b1, b.b1)] {
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((mb[i][j] - ma[i][j] * s).norm() <= 1e-12 * s * (1.0 + ma[i][j].norm()));
                }
            }
        }
    }

    #[test]
    fn pencil_rotation_similarity(s in poisson(), eta in -5.0f64..5.0, k in 0.2f64..5.0) {
        let mat = from_poisson(s, 1.0).unwrap();
        let l = assemble_pencil(&mat, C64::new(0.0, eta), k);
        let l0 = assemble_pencil(&mat, C64::new(0.0, 0.0), eta.hypot(k));
        let r = rotation_x1x3(eta, k);
        let rt = mat3_transpose(&r);
        for (a, b) in [(l.a0, l0.a0), (l.a1, l0.a1), (l.a2, l0.a2)] {
            let sim = mat3_mul(&rt, &mat3_mul(&b, &r));
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((a[i][j] - sim[i][j]).norm() < 1e-12 * (1.0 + k * k + eta * eta));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn element_matrices_are_symmetric_and_semidefinite(s in poisson(), k in 0.2f64..3.0, eps in 0.05f64..0.3) {
        let mat = from_poisson(s, 1.0).unwrap();
        let spec = WedgeMeshSpec { tip_zone: 1.0, ..WedgeMeshSpec::new(eps, 3.0, 0.5, 1.0) };
        let mesh = build_mesh(&spec).unwrap();
        for e in mesh.elements.iter().step_by(7) {
            let (ke, me) = element_matrices(&mesh, e, &mat, k).unwrap();
            let nd = 3 * e.len();
            let scale = ke.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for r in 0..nd {
                for c in 0..nd {
                    prop_assert!((ke[r * nd + c] - ke[c * nd + r]).abs() <= 1e-12 * scale);
                    prop_assert!((me[r * nd + c] - me[c * nd + r]).abs() <= 1e-15);
                }
            }
            // energy of a few fixed vectors
            for seed in 1..4u64 {
                let v: Vec<f64> = (0..nd).map(|i| (((i as u64 + 1) * seed * 2654435761) % 1000) as f64 / 500.0 - 1.0).collect();
                let quad = |m: &[f64]| -> f64 { (0..nd).map(|r| (0..nd).map(|c| v[r] * m[r * nd + c] * v[c]).sum::<f64>()).sum() };
                prop_assert!(quad(&ke) >= -1e-12 * scale);
                prop_assert!(quad(&me) > 0.0);
            }
        }
    }
}
