//! The mode calculus behind the asymptotic law: Rayleigh profile, pencil
//! residuals, b, c_v⁺, Λ¹ and ϑ by the closed forms and by exact integration.
//!
//!     cargo run --release --example coefficients [poisson] [k]

use wedgewave::asymptotics::{coefficients, compute_lambda1_rotated, Provenance};
use wedgewave::pencil::{chain_obstruction, residual_eigenpair, residual_jordan};
use wedgewave::rayleigh_mode::profile;
use wedgewave::{from_poisson, solve_rayleigh};

fn main() -> wedgewave::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let sigma = args.next().unwrap_or(0.25);
    let k = args.next().unwrap_or(1.0);
    let sol = solve_rayleigh(&from_poisson(sigma, 1.0)?)?;

    let (u2, u3) = profile(&sol, k);
    println!("profile at x2 = 0: u2 = {:.6}, u3 = {:.6}", u2.eval(0.0), u3.eval(0.0));
    println!("eigenpair residual  {:.2e}", residual_eigenpair(&sol, k));
    println!("Jordan residual     {:.2e}", residual_jordan(&sol, k));
    println!("chain obstruction   {:.15}", chain_obstruction(&sol, k)?.re);

    for path in [Provenance::ClosedForm, Provenance::Quadrature] {
        let c = coefficients(&sol, k, path)?;
        println!(
            "{:>12}: b = {:.15}  c_v+ = {:.15}  c_u+ = {:.1e}  Lambda1 = {:.15}  theta = {:.15}",
            path.as_str(),
            c.b,
            c.cv_plus,
            c.cu_plus,
            c.lambda1,
            c.theta
        );
    }
    println!("Lambda1 with rotated-frame face matching: {:.15}", compute_lambda1_rotated(&sol, k)?);
    Ok(())
}
