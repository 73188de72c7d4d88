//! ϑ(σ), the speed-deficit coefficient in c² ≈ c_R²(1 − ε²ϑ), as CSV.
//!
//!     cargo run --release --example theta_table > theta.csv

use wedgewave::cli::theta_records;
use wedgewave::report::to_csv;

fn main() -> wedgewave::Result<()> {
    let sigmas: Vec<f64> = (0..50).map(|i| -0.9 + 1.39 * i as f64 / 49.0).collect();
    print!("{}", to_csv(&theta_records(&sigmas)?));
    Ok(())
}
