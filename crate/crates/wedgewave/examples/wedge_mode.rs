//! One finite-element solve of the symmetric mode trapped at the wedge tip.
//!
//!     cargo run --release --example wedge_mode [eps] [radius] [h]

use wedgewave::asymptotics::compute_lambda1;
use wedgewave::wedge_fem::{build_mesh, default_radius, solve_wedge_mode, WedgeMeshSpec};
use wedgewave::{from_poisson, solve_rayleigh};

fn main() -> wedgewave::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let (sigma, k) = (0.25, 1.0);
    let mat = from_poisson(sigma, 1.0)?;
    let eps = args.next().unwrap_or(0.2);
    let radius = match args.next() {
        Some(r) => r,
        None => default_radius(&mat, k, eps)?,
    };
    let h = args.next().unwrap_or(0.1);
    let spec = WedgeMeshSpec::new(eps, radius, h, k);
    let mesh = build_mesh(&spec)?;
    println!("mesh: {} nodes, {} quadratic triangles, area {:.3}", mesh.n_nodes(), mesh.elements.len(), mesh.area());

    let r = solve_wedge_mode(&mat, k, &spec)?;
    let lambda1 = compute_lambda1(&solve_rayleigh(&mat)?, k);
    println!("dof {}, residual {:.1e}", r.dof, r.residual);
    println!("omega_hat^2 = {:.10}  cutoff = {:.10}  next = {:.10}", r.omega_hat_sq, r.cutoff, r.second_sq);
    println!("gap/eps^2 = {:.6}  (Lambda1 = {lambda1:.6})", r.lambda_estimate);
    println!("localization = {:.4}, trapped = {}", r.localization, r.trapped);
    if let Err(e) = r.check() {
        println!("gate: {e}");
    }
    Ok(())
}
