//! Finite-element check of the wedge-wave law on the truncated cross-section.

pub mod assembly;
pub mod eigen;
pub mod mesh;

pub use assembly::{assemble, assemble_complex_dense, DofMap, SymPencil};
pub use eigen::{solve_smallest, EigenPair};
pub use mesh::{build_mesh, Mesh, WedgeMeshSpec};

use crate::asymptotics::compute_cv_plus_closed;
use crate::error::{Error, Result};
use crate::material::{solve_rayleigh, IsotropicMaterial};

/// Relative residual requested from the eigensolver.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeEigenResult {
    pub eps: f64,
    pub spec: WedgeMeshSpec,
    pub n_nodes: usize,
    pub n_elements: usize,
    pub dof: usize,
    pub omega_hat_sq: f64,
    /// Second eigenvalue, for the cutoff-cluster diagnostic.
    pub second_sq: f64,
    /// c_R²k².
    pub cutoff: f64,
    pub gap: f64,
    pub lambda_estimate: f64,
    pub localization: f64,
    pub residual: f64,
    pub below_cutoff: bool,
    pub trapped: bool,
}

impl WedgeEigenResult {
    /// `NotTrapped` or `TruncationSuspect` for results that fail the gates.
    pub fn check(&self) -> Result<()> {
        if !self.below_cutoff {
            return Err(Error::NotTrapped { omega_hat_sq: self.omega_hat_sq, cutoff: self.cutoff });
        }
        if self.localization <= 0.99 {
            return Err(Error::TruncationSuspect { localization: self.localization, radius: self.spec.radius });
        }
        Ok(())
    }
}

/// M-weighted fraction of the vector's energy in elements whose centroid has r < R/2.
pub fn localization_metric(x: &[f64], mesh: &Mesh, dofs: &DofMap) -> f64 {
    let nodal = dofs.expand(x);
    let half = 0.5 * mesh.spec.radius;
    let (mut inside, mut total) = (0.0, 0.0);
    // the element mass matrix does not depend on material or k
    let unit = crate::material::make_material(0.0, 1.0).expect("valid");
    for e in &mesh.elements {
        let (_, me) = assembly::element_matrices(mesh, e, &unit, 1.0).expect("mesh already validated");
        let nd = 3 * e.len();
        let v: Vec<f64> = e.iter().flat_map(|&a| nodal[a]).collect();
        let mut s = 0.0;
        for r in 0..nd {
            for c in 0..nd {
                s += v[r] * me[r * nd + c] * v[c];
            }
        }
        let cx = (0..3).map(|i| mesh.nodes[e[i]][0]).sum::<f64>() / 3.0;
        let cy = (0..3).map(|i| mesh.nodes[e[i]][1]).sum::<f64>() / 3.0;
        total += s;
        if cx.hypot(cy) < half {
            inside += s;
        }
    }
    if total > 0.0 {
        inside / total
    } else {
        0.0
    }
}

/// Mesh, assemble and solve without applying the trapping gates.
pub fn solve_wedge_mode(mat: &IsotropicMaterial, k: f64, spec: &WedgeMeshSpec) -> Result<WedgeEigenResult> {
    let sol = solve_rayleigh(mat)?;
    let mesh = build_mesh(spec)?;
    let (pencil, dofs) = assemble(&mesh, mat, k)?;
    let pairs = solve_smallest(&pencil, 2, EIGEN_TOL)?;
    let cutoff = sol.omega_r_sq(k);
    let omega_hat_sq = pairs[0].value;
    let localization = localization_metric(&pairs[0].vector, &mesh, &dofs);
    let below_cutoff = omega_hat_sq < cutoff * (1.0 - 10.0 * EIGEN_TOL);
    let gap = cutoff - omega_hat_sq;
    Ok(WedgeEigenResult {
        eps: spec.eps,
        spec: *spec,
        n_nodes: mesh.n_nodes(),
        n_elements: mesh.elements.len(),
        dof: pencil.n,
        omega_hat_sq,
        second_sq: pairs[1].value,
        cutoff,
        gap,
        lambda_estimate: gap / (spec.eps * spec.eps),
        localization,
        residual: pairs[0].residual,
        below_cutoff,
        trapped: below_cutoff && localization > 0.99,
    })
}

/// Domain radius max(8/(εξ¹), 40/k).
pub fn default_radius(mat: &IsotropicMaterial, k: f64, eps: f64) -> Result<f64> {
    let xi1 = -compute_cv_plus_closed(&solve_rayleigh(mat)?, 1.0);
    Ok((8.0 / (eps * xi1 * k)).max(40.0 / k))
}

/// The lowest symmetric mode, subject to the trapping and localization gates.
pub fn find_wedge_mode(mat: &IsotropicMaterial, k: f64, spec: &WedgeMeshSpec) -> Result<WedgeEigenResult> {
    if !(spec.eps > 0.0 && spec.eps <= 0.3) {
        return Err(Error::ConstraintViolation(format!("eps must lie in (0, 0.3] (got {})", spec.eps)));
    }
    if spec.h * k > 0.2 {
        return Err(Error::ConstraintViolation(format!("h k = {} exceeds 0.2", spec.h * k)));
    }
    let res = solve_wedge_mode(mat, k, spec)?;
    let xi1 = -compute_cv_plus_closed(&solve_rayleigh(mat)?, 1.0);
    if spec.radius * k * spec.eps * xi1 < 8.0 {
        return Err(Error::TruncationSuspect { localization: res.localization, radius: spec.radius });
    }
    res.check()?;
    Ok(res)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapFit {
    pub lambda_hat: f64,
    /// Coefficient of the ε^{5/2} term (zero for the pure ε² fit).
    pub nuisance: f64,
    pub residuals: Vec<f64>,
    pub rms: f64,
}

/// Least squares gap ≈ Λ ε² (+ c ε^{5/2} when `with_nuisance`).
pub fn fit_gap(eps: &[f64], gap: &[f64], with_nuisance: bool) -> Result<GapFit> {
    let need = if with_nuisance { 3 } else { 1 };
    if eps.len() < need.max(3) {
        return Err(Error::InsufficientData(format!("gap fit needs at least 3 points (got {})", eps.len())));
    }
    let f1: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let f2: Vec<f64> = eps.iter().map(|e| e.powf(2.5)).collect();
    let (lambda_hat, nuisance) = if with_nuisance {
        let (a11, a12, a22) = (dot(&f1, &f1), dot(&f1, &f2), dot(&f2, &f2));
        let (b1, b2) = (dot(&f1, gap), dot(&f2, gap));
        let det = a11 * a22 - a12 * a12;
        ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det)
    } else {
        (dot(&f1, gap) / dot(&f1, &f1), 0.0)
    };
    let residuals: Vec<f64> = (0..eps.len()).map(|i| gap[i] - lambda_hat * f1[i] - nuisance * f2[i]).collect();
    let rms = (dot(&residuals, &residuals) / eps.len() as f64).sqrt();
    Ok(GapFit { lambda_hat, nuisance, residuals, rms })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub runs: Vec<std::result::Result<WedgeEigenResult, Error>>,
    pub lambda1: f64,
    /// Fits over trapped runs; `Err` when fewer than three are trapped.
    pub fit: std::result::Result<GapFit, Error>,
    pub fit_with_nuisance: std::result::Result<GapFit, Error>,
    /// Fit over every run that is below the cutoff, ignoring localization.
    pub fit_below_cutoff: std::result::Result<GapFit, Error>,
}

impl SweepReport {
    pub fn deviation(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.lambda_hat / self.lambda1 - 1.0)
    }
}

/// Solve for every ε with `template` (its eps and radius are replaced; the
/// radius follows [`default_radius`] unless `fixed_radius` is given).
pub fn sweep_epsilon(
    mat: &IsotropicMaterial,
    k: f64,
    eps_list: &[f64],
    template: &WedgeMeshSpec,
    fixed_radius: Option<f64>,
) -> Result<SweepReport> {
    if eps_list.len() < 3 || eps_list.iter().any(|&e| !(e > 0.0 && e <= 0.3)) {
        return Err(Error::ConstraintViolation("sweep needs at least 3 eps values in (0, 0.3]".into()));
    }
    let sol = solve_rayleigh(mat)?;
    let lambda1 = crate::asymptotics::compute_lambda1(&sol, k);
    let mut runs = Vec::new();
    for &eps in eps_list {
        let radius = match fixed_radius {
            Some(r) => r,
            None => default_radius(mat, k, eps)?,
        };
        let spec = WedgeMeshSpec { eps, radius, ..*template };
        log::info!("sweep: eps = {eps}, R = {radius}");
        runs.push(solve_wedge_mode(mat, k, &spec));
    }
    let pick = |keep: &dyn Fn(&WedgeEigenResult) -> bool| -> (Vec<f64>, Vec<f64>) {
        runs.iter().flatten().filter(|r| keep(r)).map(|r| (r.eps, r.gap)).unzip()
    };
    let (e_t, g_t) = pick(&|r| r.trapped);
    let (e_b, g_b) = pick(&|r| r.below_cutoff);
    Ok(SweepReport {
        lambda1,
        fit: fit_gap(&e_t, &g_t, false),
        fit_with_nuisance: fit_gap(&e_t, &g_t, true),
        fit_below_cutoff: fit_gap(&e_b, &g_b, false),
        runs,
    })
}
