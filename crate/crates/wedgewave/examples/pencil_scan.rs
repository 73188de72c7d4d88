//! Discretized pencil on the half-line: strip scan, coercivity floor, the
//! real-axis near-kernel below the cutoff, and eigenvalues near ξ = 0.
//!
//!     cargo run --release --example pencil_scan

use wedgewave::asymptotics::predicted_decay_rate;
use wedgewave::pencil::{
    count_eigenvalues_near_zero, form_lower_bound, min_singular_scan, near_kernel_on_real_axis, strip_samples,
    HalfLineGrid,
};
use wedgewave::{from_poisson, solve_rayleigh};

fn main() -> wedgewave::Result<()> {
    let (sigma, k) = (0.25, 1.0);
    let mat = from_poisson(sigma, 1.0)?;
    let sol = solve_rayleigh(&mat)?;
    let grid = HalfLineGrid::uniform(2000, 30.0 / (k * sol.kappa_t), 3)?;

    let beta = 0.1 * k * sol.kappa_t;
    let scan = min_singular_scan(&mat, k, &grid, &strip_samples(beta, k))?;
    for (xi, s) in scan.samples.iter().zip(&scan.sigma_min) {
        println!("xi = {:+.4}{:+.4}i  sigma_min = {s:.3e}", xi.re, xi.im);
    }
    println!("flagged clusters: {:?}, single cluster at 0: {}", scan.clusters, scan.single_cluster_at_origin());

    for m in [0.0, 1.0, 2.0] {
        let eta = m * k;
        let low = form_lower_bound(&mat, k, eta, &grid)?;
        println!("eta = {eta}: form minimum {low:.8}, c_R^2 (k^2 + eta^2) = {:.8}", sol.c_r.powi(2) * (k * k + eta * eta));
    }

    for delta in [1e-3, 1e-4] {
        let w2 = sol.omega_r_sq(k) * (1.0 - delta);
        let found = near_kernel_on_real_axis(&mat, k, &grid, w2, 0.5 * k)?;
        println!("delta = {delta:e}: near-kernel at {found:.8}, predicted {:.8}", predicted_decay_rate(&sol, k, w2)?);
    }

    let small = HalfLineGrid::uniform(40, grid.x_max(), 3)?;
    let near = count_eigenvalues_near_zero(&mat, k, &small, sol.omega_r_sq(k) * (1.0 - 1e-4), beta)?;
    println!("eigenvalues with |xi| < beta at delta = 1e-4: {near:?}");
    Ok(())
}
