//! Rayleigh speed and decay constants across the admissible Poisson range.
//!
//!     cargo run --release --example rayleigh_speed

use wedgewave::material::{check_rayleigh_identity, rayleigh_function};
use wedgewave::{from_poisson, make_material, solve_rayleigh};

fn main() -> wedgewave::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>10} {:>10} {:>10}", "sigma", "c_R/c_t", "B", "kappa_t", "kappa_l", "residual");
    for i in 0..=10 {
        let sigma = -0.99 + 1.489 * i as f64 / 10.0;
        let sol = solve_rayleigh(&from_poisson(sigma, 1.0)?)?;
        println!(
            "{sigma:8.4} {:12.9} {:12.9} {:10.6} {:10.6} {:10.2e}",
            sol.c_r,
            sol.b,
            sol.kappa_t,
            sol.kappa_l,
            rayleigh_function(&sol.material, sol.c_r).abs().max(check_rayleigh_identity(&sol))
        );
    }
    // Lamé input; the speed scales with √μ
    let sol = solve_rayleigh(&make_material(2.0, 4.0)?)?;
    println!("lambda = 2, mu = 4: c_R = {:.12} (c_R/c_t = {:.12})", sol.c_r, sol.c_r / sol.material.c_t());
    Ok(())
}
