//! Gap versus ε and the fitted slope Λ̂, compared with the predicted Λ¹.
//! Takes a few minutes in release mode.
//!
//!     cargo run --release --example epsilon_sweep

use wedgewave::from_poisson;
use wedgewave::wedge_fem::{sweep_epsilon, WedgeMeshSpec};

fn main() -> wedgewave::Result<()> {
    let k = 1.0;
    let mat = from_poisson(0.25, 1.0)?;
    let template = WedgeMeshSpec::new(0.1, 1.0, 0.1, k);
    let rep = sweep_epsilon(&mat, k, &[0.10, 0.15, 0.20, 0.25], &template, None)?;
    for run in &rep.runs {
        match run {
            Ok(r) => println!(
                "eps {:.2}  R {:7.2}  dof {:7}  gap/eps^2 {:.6}  localization {:.4}  trapped {}",
                r.eps, r.spec.radius, r.dof, r.lambda_estimate, r.localization, r.trapped
            ),
            Err(e) => println!("run failed: {e}"),
        }
    }
    println!("Lambda1 = {:.6}", rep.lambda1);
    for (name, fit) in [("trapped runs", &rep.fit), ("below cutoff", &rep.fit_below_cutoff)] {
        match fit {
            Ok(f) => println!("fit over {name}: Lambda_hat = {:.6} (ratio {:.3}, rms {:.1e})", f.lambda_hat, f.lambda_hat / rep.lambda1, f.rms),
            Err(e) => println!("fit over {name}: {e}"),
        }
    }
    Ok(())
}
