//! Galerkin discretization of the pencil on a truncated half-line.
//!
//! Unknowns are real profiles (U1, U2, W3) with the physical third component
//! i·W3; then K(ξ) = K0 + ξK1 + ξ²K2 has real coefficient matrices, K1 is
//! antisymmetric and K0, K2 are symmetric. Traction-free is the natural
//! condition at x2 = 0; all components vanish at x2 = X_max.

use crate::error::{Error, Result};
use crate::material::{solve_rayleigh, IsotropicMaterial};
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{c64, Mat};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineGrid {
    nodes: Vec<f64>,
    order: usize,
}

impl HalfLineGrid {
    /// `n` equal elements of polynomial degree `order` (2 or 3) on [0, x_max].
    pub fn uniform(n: usize, x_max: f64, order: usize) -> Result<Self> {
        Self::from_nodes((0..=n).map(|i| x_max * i as f64 / n as f64).collect(), order)
    }

    pub fn from_nodes(nodes: Vec<f64>, order: usize) -> Result<Self> {
        if nodes.len() < 9 {
            return Err(Error::ConstraintViolation(format!("half-line grid needs N >= 8 (got {})", nodes.len().saturating_sub(1))));
        }
        if nodes[0] != 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::ConstraintViolation("grid nodes must increase from 0".into()));
        }
        if !(1..=3).contains(&order) {
            return Err(Error::ConstraintViolation(format!("element order must be 1..=3 (got {order})")));
        }
        Ok(Self { nodes, order })
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }
    pub fn x_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Each element split in two.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len());
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.x_max());
        Self { nodes, order: self.order }
    }

    /// Truncation must leave at least e^{-20} of the slowest decaying part.
    pub fn check_truncation(&self, mat: &IsotropicMaterial, k: f64) -> Result<()> {
        let kt = solve_rayleigh(mat)?.kappa_t;
        if self.x_max() * k * kt < 20.0 {
            return Err(Error::GridTooCoarse(format!(
                "X_max k kappa_t = {:.3} < 20",
                self.x_max() * k * kt
            )));
        }
        Ok(())
    }
}

/// Lagrange basis on equispaced nodes of [0,1]: values and t-derivatives.
fn lagrange(order: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let nodes: Vec<f64> = (0..=order).map(|i| i as f64 / order as f64).collect();
    let mut val = vec![0.0; order + 1];
    let mut der = vec![0.0; order + 1];
    for i in 0..=order {
        let denom: f64 = (0..=order).filter(|&j| j != i).map(|j| nodes[i] - nodes[j]).product();
        val[i] = (0..=order).filter(|&j| j != i).map(|j| t - nodes[j]).product::<f64>() / denom;
        der[i] = (0..=order)
            .filter(|&m| m != i)
            .map(|m| (0..=order).filter(|&j| j != i && j != m).map(|j| t - nodes[j]).product::<f64>())
            .sum::<f64>()
            / denom;
    }
    (val, der)
}

const GAUSS5: [(f64, f64); 5] = [
    (0.046910077030668, 0.118463442528095),
    (0.230765344947158, 0.239314335249683),
    (0.5, 0.284444444444444),
    (0.769234655052842, 0.239314335249683),
    (0.953089922969332, 0.118463442528095),
];

/// Coefficient matrices of the discretized pencil and the mass matrix.
#[derive(Debug, Clone)]
pub struct GalerkinPencil {
    /// k0, k1, k2, m as triplet lists over the free unknowns.
    parts: [Vec<Triplet<usize, usize, f64>>; 4],
    pub n: usize,
    pub grid: HalfLineGrid,
    pub k: f64,
}

impl GalerkinPencil {
    pub fn new(mat: &IsotropicMaterial, k: f64, grid: &HalfLineGrid) -> Self {
        let (la, mu) = (mat.lambda(), mat.mu());
        let p = la + 2.0 * mu;
        let ord = grid.order;
        let n_nodes = grid.n_elements() * ord + 1;
        let n = 3 * (n_nodes - 1);
        let quad: Vec<(f64, Vec<f64>, Vec<f64>)> = GAUSS5
            .iter()
            .map(|&(t, w)| {
                let (v, d) = lagrange(ord, t);
                (w, v, d)
            })
            .collect();
        let mut parts: [Vec<Triplet<usize, usize, f64>>; 4] = Default::default();
        let nl = ord + 1;
        for (e, win) in grid.nodes.windows(2).enumerate() {
            let h = win[1] - win[0];
            // q[a][b][i][j] = ∫ (∂^a φ_i)(∂^b φ_j)
            let mut q = vec![vec![vec![vec![0.0; nl]; nl]; 2]; 2];
            for (w, v, d) in &quad {
                let dphys: Vec<f64> = d.iter().map(|x| x / h).collect();
                let f = [v, &dphys];
                for a in 0..2 {
                    for b in 0..2 {
                        for i in 0..nl {
                            for j in 0..nl {
                                q[a][b][i][j] += w * h * f[a][i] * f[b][j];
                            }
                        }
                    }
                }
            }
            // (part, test comp, trial comp, test deriv, trial deriv, coefficient)
            let terms: [(usize, usize, usize, usize, usize, f64); 22] = [
                (0, 0, 0, 0, 0, mu * k * k),
                (0, 0, 0, 1, 1, mu),
                (0, 1, 1, 1, 1, p),
                (0, 1, 1, 0, 0, mu * k * k),
                (0, 2, 2, 0, 0, p * k * k),
                (0, 2, 2, 1, 1, mu),
                (0, 1, 2, 1, 0, -la * k),
                (0, 1, 2, 0, 1, mu * k),
                (0, 2, 1, 0, 1, -la * k),
                (0, 2, 1, 1, 0, mu * k),
                (1, 1, 0, 1, 0, la),
                (1, 1, 0, 0, 1, -mu),
                (1, 0, 1, 0, 1, -la),
                (1, 0, 1, 1, 0, mu),
                (1, 2, 0, 0, 0, -(la + mu) * k),
                (1, 0, 2, 0, 0, (la + mu) * k),
                (2, 0, 0, 0, 0, -p),
                (2, 1, 1, 0, 0, -mu),
                (2, 2, 2, 0, 0, -mu),
                (3, 0, 0, 0, 0, 1.0),
                (3, 1, 1, 0, 0, 1.0),
                (3, 2, 2, 0, 0, 1.0),
            ];
            for &(part, ci, cj, a, b, coef) in &terms {
                for i in 0..nl {
                    let gi = 3 * (e * ord + i) + ci;
                    if gi >= n {
                        continue;
                    }
                    for j in 0..nl {
                        let gj = 3 * (e * ord + j) + cj;
                        if gj >= n {
                            continue;
                        }
                        parts[part].push(Triplet::new(gi, gj, coef * q[a][b][i][j]));
                    }
                }
            }
        }
        Self { parts, n, grid: grid.clone(), k }
    }

    /// K0 + ξK1 + ξ²K2 − ω²M.
    pub fn matrix(&self, xi: C64, omega_sq: f64) -> SparseColMat<usize, c64> {
        let w = [C64::new(1.0, 0.0), xi, xi * xi, C64::new(-omega_sq, 0.0)];
        let trip: Vec<Triplet<usize, usize, c64>> = self
            .parts
            .iter()
            .zip(w)
            .flat_map(|(p, s)| p.iter().map(move |t| Triplet::new(t.row, t.col, s * t.val)))
            .collect();
        SparseColMat::try_new_from_triplets(self.n, self.n, &trip).expect("valid triplets")
    }

    pub fn mass(&self) -> SparseColMat<usize, c64> {
        let trip: Vec<_> = self.parts[3].iter().map(|t| Triplet::new(t.row, t.col, C64::new(t.val, 0.0))).collect();
        SparseColMat::try_new_from_triplets(self.n, self.n, &trip).expect("valid triplets")
    }

    pub fn dense_part(&self, part: usize) -> Mat<f64> {
        let mut m = Mat::<f64>::zeros(self.n, self.n);
        for t in &self.parts[part] {
            m[(t.row, t.col)] += t.val;
        }
        m
    }

    /// Minimal singular value of K(ξ) − ω²M measured in the mass norm.
    pub fn min_singular(&self, xi: C64, omega_sq: f64) -> f64 {
        let a = self.matrix(xi, omega_sq);
        let m = self.mass();
        let lu = match a.sp_lu() {
            Ok(lu) => lu,
            Err(_) => return 0.0,
        };
        let mut x = start_vector(self.n);
        normalize_m(&m, &mut x);
        let mut rho_old = 0.0;
        for _ in 0..500 {
            // y = A⁻¹ M A⁻ᴴ M x
            let mut y = spmv(&m, &x);
            lu.solve_adjoint_in_place(y.as_mut());
            let mut y = spmv(&m, &y);
            lu.solve_in_place(y.as_mut());
            let mx = spmv(&m, &x);
            let rho = dot(&mx, &y).re;
            if !rho.is_finite() || rho <= 0.0 {
                return 0.0;
            }
            x = y;
            normalize_m(&m, &mut x);
            if (rho - rho_old).abs() <= 1e-12 * rho {
                return 1.0 / rho.sqrt();
            }
            rho_old = rho;
        }
        1.0 / rho_old.sqrt()
    }

    /// Smallest eigenvalue of the Hermitian pencil (K(iη), M) by inverse iteration.
    pub fn smallest_form_eigenvalue(&self, eta: f64) -> Result<f64> {
        let a = self.matrix(C64::new(0.0, eta), 0.0);
        let m = self.mass();
        let lu = a.sp_lu().map_err(|e| Error::NoConvergence(format!("pencil factorization failed: {e:?}")))?;
        let mut x = start_vector(self.n);
        normalize_m(&m, &mut x);
        let mut theta_old = f64::INFINITY;
        for _ in 0..3000 {
            let mut y = spmv(&m, &x);
            lu.solve_in_place(y.as_mut());
            normalize_m(&m, &mut y);
            let ay = spmv(&a, &y);
            let theta = dot(&y, &ay).re;
            x = y;
            if (theta - theta_old).abs() <= 1e-13 * theta.abs() {
                return Ok(theta);
            }
            theta_old = theta;
        }
        Err(Error::NoConvergence(format!("inverse iteration at eta = {eta} did not settle")))
    }
}

fn start_vector(n: usize) -> Mat<c64> {
    // deterministic, no special structure
    Mat::from_fn(n, 1, |i, _| C64::new((0.37 * i as f64 + 0.1).sin() + 1.1, (0.61 * i as f64).cos()))
}

pub(crate) fn spmv(a: &SparseColMat<usize, c64>, x: &Mat<c64>) -> Mat<c64> {
    let mut y = Mat::<c64>::zeros(a.nrows(), 1);
    let (cp, ri, v) = (a.symbolic().col_ptr(), a.symbolic().row_idx(), a.val());
    for j in 0..a.ncols() {
        let xj = x[(j, 0)];
        for p in cp[j]..cp[j + 1] {
            y[(ri[p], 0)] += v[p] * xj;
        }
    }
    y
}

fn dot(a: &Mat<c64>, b: &Mat<c64>) -> C64 {
    (0..a.nrows()).map(|i| a[(i, 0)].conj() * b[(i, 0)]).sum()
}

fn normalize_m(m: &SparseColMat<usize, c64>, x: &mut Mat<c64>) {
    let nrm = dot(x, &spmv(m, x)).re.sqrt();
    for i in 0..x.nrows() {
        x[(i, 0)] /= nrm;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripScanReport {
    pub beta: f64,
    pub omega_sq: f64,
    pub samples: Vec<C64>,
    pub sigma_min: Vec<f64>,
    pub median: f64,
    /// Samples with σ_min below `threshold_rel · median` are flagged.
    pub threshold_rel: f64,
    pub flagged: Vec<usize>,
    /// Flagged samples grouped by single linkage at distance β.
    pub clusters: Vec<Vec<usize>>,
}

impl StripScanReport {
    pub fn threshold(&self) -> f64 {
        self.threshold_rel * self.median
    }

    /// True if the flags form one cluster that contains ξ = 0.
    pub fn single_cluster_at_origin(&self) -> bool {
        self.clusters.len() == 1 && self.clusters[0].iter().any(|&i| self.samples[i].norm() <= 1e-12)
    }
}

/// Σ_β sample set: real parts {−β/2, 0, β/2} times imaginary parts
/// {0, ±0.5k, ±k, ±2k, ±5k}.
pub fn strip_samples(beta: f64, k: f64) -> Vec<C64> {
    let mut out = Vec::new();
    for re in [-0.5 * beta, 0.0, 0.5 * beta] {
        for im in [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0] {
            out.push(C64::new(re, im * k));
        }
    }
    out
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn raw_scan(pencil: &GalerkinPencil, xi_samples: &[C64], omega_sq: f64) -> Vec<f64> {
    xi_samples.iter().map(|&xi| pencil.min_singular(xi, omega_sq)).collect()
}

/// Minimal singular values of the discretized (L(ξ) − ω_R², N(ξ)) over the
/// samples, with near-kernel flags. Non-flagged values are re-computed on the
/// refined grid; a change above 10% is reported as `GridTooCoarse`.
pub fn min_singular_scan(
    mat: &IsotropicMaterial,
    k: f64,
    grid: &HalfLineGrid,
    xi_samples: &[C64],
) -> Result<StripScanReport> {
    let sol = solve_rayleigh(mat)?;
    grid.check_truncation(mat, k)?;
    let beta = 0.1 * k * sol.kappa_t;
    let omega_sq = sol.omega_r_sq(k);
    let pencil = GalerkinPencil::new(mat, k, grid);
    let sigma_min = raw_scan(&pencil, xi_samples, omega_sq);
    let med = median(&sigma_min);
    let threshold_rel = 1e-6;
    let flagged: Vec<usize> = (0..sigma_min.len()).filter(|&i| sigma_min[i] < threshold_rel * med).collect();

    let fine = GalerkinPencil::new(mat, k, &grid.refined());
    let keep: Vec<usize> = (0..xi_samples.len()).filter(|i| !flagged.contains(i)).collect();
    let again = raw_scan(&fine, &keep.iter().map(|&i| xi_samples[i]).collect::<Vec<_>>(), omega_sq);
    for (&i, v) in keep.iter().zip(again) {
        if (v - sigma_min[i]).abs() > 0.1 * sigma_min[i] {
            return Err(Error::GridTooCoarse(format!(
                "sigma_min at xi = {} moved from {} to {} under refinement",
                xi_samples[i], sigma_min[i], v
            )));
        }
    }

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &flagged {
        let near: Vec<usize> = (0..clusters.len())
            .filter(|&c| clusters[c].iter().any(|&j| (xi_samples[i] - xi_samples[j]).norm() <= beta))
            .collect();
        let mut merged = vec![i];
        for &c in near.iter().rev() {
            merged.extend(clusters.remove(c));
        }
        merged.sort_unstable();
        clusters.push(merged);
    }
    Ok(StripScanReport {
        beta,
        omega_sq,
        samples: xi_samples.to_vec(),
        sigma_min,
        median: med,
        threshold_rel,
        flagged,
        clusters,
    })
}

/// Minimum over the discretized space of 𝔞(iη, ik; u, u)/‖u‖².
pub fn form_lower_bound(mat: &IsotropicMaterial, k: f64, eta: f64, grid: &HalfLineGrid) -> Result<f64> {
    grid.check_truncation(mat, k)?;
    let coarse = GalerkinPencil::new(mat, k, grid).smallest_form_eigenvalue(eta)?;
    let fine = GalerkinPencil::new(mat, k, &grid.refined()).smallest_form_eigenvalue(eta)?;
    if (coarse - fine).abs() > 0.1 * fine.abs() {
        return Err(Error::GridTooCoarse(format!("form minimum moved from {coarse} to {fine} under refinement")));
    }
    Ok(fine)
}

/// Position of the minimum of σ_min(ξ) for real ξ ∈ (0, xi_max], at frequency ω².
pub fn near_kernel_on_real_axis(
    mat: &IsotropicMaterial,
    k: f64,
    grid: &HalfLineGrid,
    omega_sq: f64,
    xi_max: f64,
) -> Result<f64> {
    grid.check_truncation(mat, k)?;
    let pencil = GalerkinPencil::new(mat, k, grid);
    let f = |x: f64| pencil.min_singular(C64::new(x, 0.0), omega_sq);
    // coarse bracket, then golden section
    let n = 40;
    let xs: Vec<f64> = (1..=n).map(|i| xi_max * i as f64 / n as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let imin = (0..n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let (mut a, mut b) = (if imin == 0 { 0.0 } else { xs[imin - 1] }, xs[(imin + 1).min(n - 1)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-9 * xi_max {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    Ok(0.5 * (a + b))
}

/// Eigenvalues of the discretized quadratic pencil with |ξ| < radius, via the
/// companion linearization [[0, I], [−K2⁻¹K0', −K2⁻¹K1]] (dense; keep grids small).
pub fn count_eigenvalues_near_zero(
    mat: &IsotropicMaterial,
    k: f64,
    grid: &HalfLineGrid,
    omega_sq: f64,
    radius: f64,
) -> Result<Vec<C64>> {
    let p = GalerkinPencil::new(mat, k, grid);
    let n = p.n;
    let mut k0 = p.dense_part(0);
    let mass = p.dense_part(3);
    for j in 0..n {
        for i in 0..n {
            k0[(i, j)] -= omega_sq * mass[(i, j)];
        }
    }
    let k1 = p.dense_part(1);
    let k2 = p.dense_part(2);
    let lu = k2.partial_piv_lu();
    let a = lu.solve(&k0);
    let b = lu.solve(&k1);
    let mut comp = Mat::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        comp[(i, n + i)] = 1.0;
        for j in 0..n {
            comp[(n + i, j)] = -a[(i, j)];
            comp[(n + i, n + j)] = -b[(i, j)];
        }
    }
    let ev = comp
        .eigenvalues()
        .map_err(|e| Error::NoConvergence(format!("companion eigenvalues: {e:?}")))?;
    let mut near: Vec<C64> = ev.into_iter().filter(|z| z.norm() < radius).collect();
    near.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(near)
}
