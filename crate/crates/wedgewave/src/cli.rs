//! Batch front end. `run` parses argv, executes one subcommand and returns
//! the process exit code: 0 success, 1 domain error (error name on stderr),
//! 2 usage error.

use crate::asymptotics::{
    coefficients, compute_lambda1_rotated, compute_theta, AngleMode, AsymptoticCoefficients, Provenance,
};
use crate::error::{Error, Result};
use crate::material::{check_rayleigh_identity, from_poisson, make_material, rayleigh_function, solve_rayleigh};
use crate::material::IsotropicMaterial;
use crate::pencil::{form_lower_bound, min_singular_scan, strip_samples, HalfLineGrid};
use crate::report::{obj, to_csv, Json, Record};
use crate::wedge_fem::{default_radius, solve_wedge_mode, sweep_epsilon, GapFit, WedgeEigenResult, WedgeMeshSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;

/// Largest relative disagreement accepted between the closed-form and
/// exactly integrated coefficient paths.
pub const PATH_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "wedgewave", version, about = "Wedge-wave asymptotics and finite-element checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct MaterialArgs {
    /// Poisson ratio (shear modulus 1).
    #[arg(long, allow_hyphen_values = true)]
    pub poisson: Option<f64>,
    /// Lamé constants λ and μ.
    #[arg(long, num_args = 2, value_names = ["L", "M"], allow_hyphen_values = true)]
    pub lame: Option<Vec<f64>>,
}

impl MaterialArgs {
    pub fn material(&self) -> Result<IsotropicMaterial> {
        match (&self.poisson, &self.lame) {
            (Some(s), _) => from_poisson(*s, 1.0),
            (None, Some(l)) => make_material(l[0], l[1]),
            (None, None) => Err(Error::ConstraintViolation("no material given".into())),
        }
    }

    fn to_json(&self) -> Json {
        match (&self.poisson, &self.lame) {
            (Some(s), _) => obj([("poisson", (*s).into())]),
            (None, Some(l)) => obj([("lambda", l[0].into()), ("mu", l[1].into())]),
            _ => Json::Null,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PoissonArg {
    /// Poisson ratio (shear modulus 1).
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub poisson: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AngleArg {
    Tan,
    Radians,
}

impl From<AngleArg> for AngleMode {
    fn from(a: AngleArg) -> Self {
        match a {
            AngleArg::Tan => AngleMode::Tan,
            AngleArg::Radians => AngleMode::Radians,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rayleigh speed and decay constants.
    Rayleigh {
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
    },
    /// b, c_v⁺, ξ¹, Λ¹ and ϑ along both computational paths.
    Coeffs {
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
    },
    /// ϑ(σ) on an inclusive grid LO:HI:N.
    ThetaTable {
        #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
        sigma_grid: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Minimal singular values of the discretized pencil over the strip.
    PencilScan {
        #[command(flatten)]
        material: PoissonArg,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Strip half-width; default 0.1 k κ_t.
        #[arg(long)]
        beta: Option<f64>,
        /// Number of half-line elements.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        /// Truncation length; default 30/(k κ_t).
        #[arg(long)]
        xmax: Option<f64>,
    },
    /// Lowest symmetric mode of the truncated wedge cross-section.
    WedgeSolve {
        #[command(flatten)]
        material: PoissonArg,
        #[arg(long, allow_hyphen_values = true)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// Default max(8/(ε ξ¹ k), 40/k).
        #[arg(long)]
        radius: Option<f64>,
        /// Tip-zone element size; default 0.1/k.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long, value_enum, default_value_t = AngleArg::Tan)]
        angle_mode: AngleArg,
    },
    /// Wedge solves over several ε and the fitted gap slope.
    Sweep {
        #[command(flatten)]
        material: PoissonArg,
        #[arg(long, value_delimiter = ',', required = true)]
        eps_list: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = AngleArg::Tan)]
        angle_mode: AngleArg,
    },
}

/// Output of one subcommand: text for stdout (or `out`) plus an optional
/// domain error raised after the record was produced.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub out: Option<std::path::PathBuf>,
    pub late_error: Option<Error>,
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let written = match &outcome.out {
                Some(p) => std::fs::write(p, &outcome.text).map_err(|e| e.to_string()),
                None => std::io::stdout().write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return 1;
            }
            match outcome.late_error {
                Some(e) => {
                    eprintln!("{e}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    let plain = |r: Record| Outcome { text: r.to_json().to_pretty(), out: None, late_error: None };
    match cmd {
        Command::Rayleigh { material, k } => Ok(plain(rayleigh_record(material, *k)?)),
        Command::Coeffs { material, k } => Ok(plain(coeffs_record(material, *k)?)),
        Command::ThetaTable { sigma_grid, format } => {
            let rows = theta_records(&parse_grid(sigma_grid)?)?;
            let text = match format {
                Format::Csv => to_csv(&rows),
                Format::Json => Json::Arr(rows.iter().map(Record::to_json).collect()).to_pretty(),
            };
            Ok(Outcome { text, out: None, late_error: None })
        }
        Command::PencilScan { material, k, beta, grid, xmax } => {
            Ok(plain(pencil_scan_record(material.poisson, *k, *beta, *grid, *xmax)?))
        }
        Command::WedgeSolve { material, eps, k, radius, h, order, angle_mode } => {
            let eps = AngleMode::from(*angle_mode).to_eps(*eps);
            let (record, late_error) = wedge_solve_record(material.poisson, eps, *k, *radius, *h, *order as usize)?;
            Ok(Outcome { text: record.to_json().to_pretty(), out: None, late_error })
        }
        Command::Sweep { material, eps_list, k, out, angle_mode } => {
            let mode = AngleMode::from(*angle_mode);
            let eps: Vec<f64> = eps_list.iter().map(|&e| mode.to_eps(e)).collect();
            let record = sweep_record(material.poisson, &eps, *k)?;
            Ok(Outcome { text: record.to_json().to_pretty(), out: out.clone(), late_error: None })
        }
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(format!("k must be positive (got {k})")))
    }
}

/// `LO:HI:N`, N ≥ 1 points including both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::ConstraintViolation(format!("sigma grid must read LO:HI:N (got {s:?})"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !(hi >= lo) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

pub fn rayleigh_record(material: &MaterialArgs, k: f64) -> Result<Record> {
    check_k(k)?;
    let mat = material.material()?;
    let sol = solve_rayleigh(&mat)?;
    Ok(Record {
        inputs: obj([("material", material.to_json()), ("k", k.into())]),
        value: obj([
            ("lambda", mat.lambda().into()),
            ("mu", mat.mu().into()),
            ("poisson", mat.poisson().into()),
            ("c_t", mat.c_t().into()),
            ("c_l", mat.c_l().into()),
            ("c_r", sol.c_r.into()),
            ("c_r_over_c_t", (sol.c_r / mat.c_t()).into()),
            ("B", sol.b.into()),
            ("kappa_t", sol.kappa_t.into()),
            ("kappa_l", sol.kappa_l.into()),
            ("omega_r_sq", sol.omega_r_sq(k).into()),
            ("rayleigh_residual", rayleigh_function(&mat, sol.c_r).abs().into()),
            ("cubic_identity_residual", check_rayleigh_identity(&sol).into()),
        ]),
        provenance: Provenance::ClosedForm.as_str(),
        tolerances: obj([("rayleigh_residual", 1e-12.into()), ("cubic_identity_residual", 1e-12.into())]),
        paper_anchor: "Rayleigh equation (2 - B)^2 = 4 sqrt(1 - B c_t^2/c_l^2) sqrt(1 - B), B = c_R^2/c_t^2".into(),
    })
}

fn coeff_json(c: &AsymptoticCoefficients) -> Json {
    obj([
        ("provenance", c.provenance.as_str().into()),
        ("b", c.b.into()),
        ("cv_plus", c.cv_plus.into()),
        ("cu_plus", c.cu_plus.into()),
        ("xi1", c.xi1.into()),
        ("norm_u0_sq", c.norm_u0_sq.into()),
        ("lambda1", c.lambda1.into()),
        ("theta", c.theta.into()),
    ])
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn coeffs_record(material: &MaterialArgs, k: f64) -> Result<Record> {
    check_k(k)?;
    let sol = solve_rayleigh(&material.material()?)?;
    let closed = coefficients(&sol, k, Provenance::ClosedForm)?;
    let quad = coefficients(&sol, k, Provenance::Quadrature)?;
    let disagreement = [
        rel(closed.b, quad.b),
        rel(closed.cv_plus, quad.cv_plus),
        rel(closed.norm_u0_sq, quad.norm_u0_sq),
        rel(closed.lambda1, quad.lambda1),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Record {
        inputs: obj([("material", material.to_json()), ("k", k.into())]),
        value: obj([
            ("closed_form", coeff_json(&closed)),
            ("quadrature", coeff_json(&quad)),
            ("relative_disagreement", disagreement.into()),
            // Λ¹ with the face tractions matched in rotated frames; see README
            ("lambda1_rotated_frames", compute_lambda1_rotated(&sol, k)?.into()),
        ]),
        provenance: Provenance::ClosedForm.as_str(),
        tolerances: obj([("relative_disagreement", PATH_TOLERANCE.into())]),
        paper_anchor: "eigenvalue correction Lambda1 = |b| (c_v+)^2 / ||U0||^2".into(),
    })
}

pub fn theta_records(sigmas: &[f64]) -> Result<Vec<Record>> {
    sigmas
        .iter()
        .map(|&s| {
            let sol = solve_rayleigh(&from_poisson(s, 1.0)?)?;
            let c = coefficients(&sol, 1.0, Provenance::ClosedForm)?;
            Ok(Record {
                inputs: obj([("poisson", s.into())]),
                value: obj([
                    ("B", sol.b.into()),
                    ("c_r_over_c_t", sol.c_r.into()),
                    ("b", c.b.into()),
                    ("cv_plus", c.cv_plus.into()),
                    ("lambda1", c.lambda1.into()),
                    ("theta", compute_theta(&sol)?.into()),
                ]),
                provenance: Provenance::ClosedForm.as_str(),
                tolerances: obj([("theta_min", 0.0.into())]),
                paper_anchor: "speed deficit c^2 = c_R^2 (1 - eps^2 theta(sigma))".into(),
            })
        })
        .collect()
}

pub fn pencil_scan_record(poisson: f64, k: f64, beta: Option<f64>, n: usize, xmax: Option<f64>) -> Result<Record> {
    check_k(k)?;
    let mat = from_poisson(poisson, 1.0)?;
    let sol = solve_rayleigh(&mat)?;
    let xmax = xmax.unwrap_or(30.0 / (k * sol.kappa_t));
    let grid = HalfLineGrid::uniform(n, xmax, 3)?;
    let beta = beta.unwrap_or(0.1 * k * sol.kappa_t);
    let samples = strip_samples(beta, k);
    let scan = min_singular_scan(&mat, k, &grid, &samples)?;
    let rows: Vec<Json> = (0..samples.len())
        .map(|i| {
            obj([
                ("re", samples[i].re.into()),
                ("im", samples[i].im.into()),
                ("sigma_min", scan.sigma_min[i].into()),
                ("flagged", scan.flagged.contains(&i).into()),
            ])
        })
        .collect();
    let mut bounds = Vec::new();
    for m in [0.0, 1.0, 2.0] {
        let eta = m * k;
        let found = form_lower_bound(&mat, k, eta, &grid)?;
        let floor = sol.c_r * sol.c_r * (k * k + eta * eta);
        bounds.push(obj([("eta", eta.into()), ("minimum", found.into()), ("ratio_to_floor", (found / floor).into())]));
    }
    Ok(Record {
        inputs: obj([
            ("poisson", poisson.into()),
            ("k", k.into()),
            ("beta", beta.into()),
            ("grid", n.into()),
            ("xmax", xmax.into()),
        ]),
        value: obj([
            ("omega_sq", scan.omega_sq.into()),
            ("median", scan.median.into()),
            ("threshold", scan.threshold().into()),
            ("samples", Json::Arr(rows)),
            ("clusters", Json::Arr(scan.clusters.iter().map(|c| c.clone().into()).collect())),
            ("single_cluster_at_origin", scan.single_cluster_at_origin().into()),
            ("form_lower_bound", Json::Arr(bounds)),
        ]),
        provenance: Provenance::Quadrature.as_str(),
        tolerances: obj([("flag_relative_to_median", scan.threshold_rel.into()), ("form_ratio_min", 0.98.into())]),
        paper_anchor: "spectrum of the Fourier-Laplace pencil in the strip: only xi = 0".into(),
    })
}

fn wedge_json(r: &WedgeEigenResult) -> Json {
    obj([
        ("eps", r.eps.into()),
        ("radius", r.spec.radius.into()),
        ("h", r.spec.h.into()),
        ("order", r.spec.order.into()),
        ("nodes", r.n_nodes.into()),
        ("elements", r.n_elements.into()),
        ("dof", r.dof.into()),
        ("omega_hat_sq", r.omega_hat_sq.into()),
        ("second_sq", r.second_sq.into()),
        ("cutoff", r.cutoff.into()),
        ("gap", r.gap.into()),
        ("gap_over_eps_sq", r.lambda_estimate.into()),
        ("localization", r.localization.into()),
        ("residual", r.residual.into()),
        ("below_cutoff", r.below_cutoff.into()),
        ("trapped", r.trapped.into()),
    ])
}

fn wedge_spec(mat: &IsotropicMaterial, eps: f64, k: f64, radius: Option<f64>, h: Option<f64>, order: usize) -> Result<WedgeMeshSpec> {
    check_k(k)?;
    if !(eps > 0.0 && eps <= 0.3) {
        return Err(Error::ConstraintViolation(format!("eps must lie in (0, 0.3] (got {eps})")));
    }
    let h = h.unwrap_or(0.1 / k);
    if h * k > 0.2 {
        return Err(Error::ConstraintViolation(format!("h k = {} exceeds 0.2", h * k)));
    }
    let radius = match radius {
        Some(r) => r,
        None => default_radius(mat, k, eps)?,
    };
    Ok(WedgeMeshSpec { order, ..WedgeMeshSpec::new(eps, radius, h, k) })
}

/// The record is produced even when the mode fails the trapping gates; the
/// gate failure is returned alongside it.
pub fn wedge_solve_record(
    poisson: f64,
    eps: f64,
    k: f64,
    radius: Option<f64>,
    h: Option<f64>,
    order: usize,
) -> Result<(Record, Option<Error>)> {
    let mat = from_poisson(poisson, 1.0)?;
    let spec = wedge_spec(&mat, eps, k, radius, h, order)?;
    let res = solve_wedge_mode(&mat, k, &spec)?;
    let lambda1 = coefficients(&solve_rayleigh(&mat)?, k, Provenance::ClosedForm)?.lambda1;
    let record = Record {
        inputs: obj([("poisson", poisson.into()), ("eps", eps.into()), ("k", k.into())]),
        value: obj([("run", wedge_json(&res)), ("lambda1", lambda1.into())]),
        provenance: Provenance::Fem.as_str(),
        tolerances: obj([("eigen_residual", crate::wedge_fem::EIGEN_TOL.into()), ("localization_min", 0.99.into())]),
        paper_anchor: "trapped symmetric mode below the Rayleigh cutoff, gap ~ eps^2 Lambda1".into(),
    };
    Ok((record, res.check().err()))
}

fn fit_json(f: &std::result::Result<GapFit, Error>) -> Json {
    match f {
        Ok(f) => obj([
            ("lambda_hat", f.lambda_hat.into()),
            ("nuisance", f.nuisance.into()),
            ("rms", f.rms.into()),
            ("residuals", f.residuals.clone().into()),
        ]),
        Err(e) => obj([("error", e.name().into())]),
    }
}

pub fn sweep_record(poisson: f64, eps_list: &[f64], k: f64) -> Result<Record> {
    let mat = from_poisson(poisson, 1.0)?;
    check_k(k)?;
    let template = WedgeMeshSpec::new(0.1, 1.0, 0.1 / k, k);
    let rep = sweep_epsilon(&mat, k, eps_list, &template, None)?;
    let runs: Vec<Json> = rep
        .runs
        .iter()
        .map(|r| match r {
            Ok(r) => wedge_json(r),
            Err(e) => obj([("error", e.name().into())]),
        })
        .collect();
    Ok(Record {
        inputs: obj([("poisson", poisson.into()), ("eps_list", eps_list.to_vec().into()), ("k", k.into())]),
        value: obj([
            ("lambda1", rep.lambda1.into()),
            ("runs", Json::Arr(runs)),
            ("fit", fit_json(&rep.fit)),
            ("fit_with_nuisance", fit_json(&rep.fit_with_nuisance)),
            ("fit_below_cutoff", fit_json(&rep.fit_below_cutoff)),
            ("relative_deviation", rep.deviation().map_or(Json::Null, Json::Num)),
        ]),
        provenance: Provenance::Fem.as_str(),
        tolerances: obj([("relative_deviation", 0.15.into()), ("localization_min", 0.99.into())]),
        paper_anchor: "gap c_R^2 k^2 - omega^2 = eps^2 Lambda1 + O(eps^(5/2))".into(),
    })
}
