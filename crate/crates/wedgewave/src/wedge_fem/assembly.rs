//! Stiffness and mass for time-harmonic waves e^{i(kx3 − ωt)} on the wedge
//! cross-section, in real unknowns (u1, u2, w3) with u3 = i·w3.
//!
//! Energy density:
//! λ(∂1u1 + ∂2u2 − k w3)² + 2μ[(∂1u1)² + (∂2u2)² + k²w3²]
//!   + μ[(∂2u1 + ∂1u2)² + (k u1 + ∂1 w3)² + (k u2 + ∂2 w3)²].

use super::mesh::{Mesh, TAG_ARC, TAG_SYMMETRY};
use crate::error::{Error, Result};
use crate::material::IsotropicMaterial;
use faer::{c64, Mat};
use num_complex::Complex64 as C64;

/// K and M restricted to free unknowns, sharing one lower-triangular CSC pattern.
#[derive(Debug, Clone)]
pub struct SymPencil {
    pub n: usize,
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
    pub k: Vec<f64>,
    pub m: Vec<f64>,
}

impl SymPencil {
    /// From dense symmetric matrices (lower triangles are read).
    pub fn from_dense(k: &[Vec<f64>], m: &[Vec<f64>]) -> Self {
        let n = k.len();
        let (mut col_ptr, mut row_idx, mut kv, mut mv) = (vec![0], vec![], vec![], vec![]);
        for j in 0..n {
            for i in j..n {
                if k[i][j] != 0.0 || m[i][j] != 0.0 || i == j {
                    row_idx.push(i);
                    kv.push(k[i][j]);
                    mv.push(m[i][j]);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Self { n, col_ptr, row_idx, k: kv, m: mv }
    }

    /// y = A x for the symmetric matrix whose lower triangle is `vals`.
    pub fn sym_mul(&self, vals: &[f64], x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for j in 0..self.n {
            let xj = x[j];
            let mut acc = 0.0;
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                let i = self.row_idx[p];
                let a = vals[p];
                y[i] += a * xj;
                if i != j {
                    acc += a * x[i];
                }
            }
            y[j] += acc;
        }
        y
    }

    pub fn mul_k(&self, x: &[f64]) -> Vec<f64> {
        self.sym_mul(&self.k, x)
    }

    pub fn mul_m(&self, x: &[f64]) -> Vec<f64> {
        self.sym_mul(&self.m, x)
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }
}

/// Map from (node, component) to free-unknown index.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub index: Vec<[Option<usize>; 3]>,
    pub n_free: usize,
}

impl DofMap {
    /// Arc: all components fixed. Symmetry line: u1 fixed.
    pub fn new(mesh: &Mesh) -> Self {
        let mut n_free = 0;
        let index = mesh
            .tags
            .iter()
            .map(|&t| {
                let mut d = [None; 3];
                for (c, slot) in d.iter_mut().enumerate() {
                    let fixed = t & TAG_ARC != 0 || (c == 0 && t & TAG_SYMMETRY != 0);
                    if !fixed {
                        *slot = Some(n_free);
                        n_free += 1;
                    }
                }
                d
            })
            .collect();
        Self { index, n_free }
    }

    /// Nodal values (with zeros on fixed unknowns) from a free vector.
    pub fn expand(&self, x: &[f64]) -> Vec<[f64; 3]> {
        self.index.iter().map(|d| d.map(|i| i.map_or(0.0, |i| x[i]))).collect()
    }
}

// Degree-4 rule on the reference triangle (barycentric a, b, c; weight sums to 1).
const QUAD6: [(f64, f64, f64); 6] = [
    (0.816847572980459, 0.091576213509771, 0.109951743655322),
    (0.091576213509771, 0.816847572980459, 0.109951743655322),
    (0.091576213509771, 0.091576213509771, 0.109951743655322),
    (0.108103018168070, 0.445948490915965, 0.223381589678011),
    (0.445948490915965, 0.108103018168070, 0.223381589678011),
    (0.445948490915965, 0.445948490915965, 0.223381589678011),
];

/// Shape functions and barycentric-coordinate derivatives at (l1, l2, l3).
fn shape(order: usize, l: [f64; 3]) -> (Vec<f64>, Vec<[f64; 3]>) {
    if order == 1 {
        return (
            l.to_vec(),
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        );
    }
    let mut v = Vec::with_capacity(6);
    let mut d = Vec::with_capacity(6);
    for i in 0..3 {
        v.push(l[i] * (2.0 * l[i] - 1.0));
        let mut g = [0.0; 3];
        g[i] = 4.0 * l[i] - 1.0;
        d.push(g);
    }
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        v.push(4.0 * l[a] * l[b]);
        let mut g = [0.0; 3];
        g[a] = 4.0 * l[b];
        g[b] = 4.0 * l[a];
        d.push(g);
    }
    (v, d)
}

/// Quadrature data of one element: (weight·area, shape values, physical gradients).
fn element_quadrature(mesh: &Mesh, e: &[usize]) -> Result<Vec<(f64, Vec<f64>, Vec<[f64; 2]>)>> {
    let p = |i: usize| mesh.nodes[e[i]];
    let (p0, p1, p2) = (p(0), p(1), p(2));
    let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if !(det > 0.0) {
        return Err(Error::AssemblyFailure(format!("element {e:?} has non-positive area")));
    }
    let area = 0.5 * det;
    // ∇λ_i for the affine map
    let gl = [
        [(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det],
        [(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det],
        [(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det],
    ];
    Ok(QUAD6
        .iter()
        .map(|&(a, b, w)| {
            let (v, d) = shape(mesh.order, [a, b, 1.0 - a - b]);
            let g = d
                .iter()
                .map(|dl| {
                    [
                        dl[0] * gl[0][0] + dl[1] * gl[1][0] + dl[2] * gl[2][0],
                        dl[0] * gl[0][1] + dl[1] * gl[1][1] + dl[2] * gl[2][1],
                    ]
                })
                .collect();
            (w * area, v, g)
        })
        .collect())
}

/// Dense element stiffness and mass over (node-major, component-minor) unknowns.
pub fn element_matrices(mesh: &Mesh, e: &[usize], mat: &IsotropicMaterial, k: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (la, mu) = (mat.lambda(), mat.mu());
    let nl = e.len();
    let nd = 3 * nl;
    let mut ke = vec![0.0; nd * nd];
    let mut me = vec![0.0; nd * nd];
    let d = |a: usize, b: usize| -> f64 {
        let mut v = if a < 3 && b < 3 { la } else { 0.0 };
        if a == b {
            v += if a < 3 { 2.0 * mu } else { mu };
        }
        v
    };
    for (w, v, g) in element_quadrature(mesh, e)? {
        // strain rows: e11, e22, e33, γ12, γ13', γ23'
        let mut b = vec![[0.0; 6]; nd];
        for i in 0..nl {
            let (phi, gx, gy) = (v[i], g[i][0], g[i][1]);
            b[3 * i] = [gx, 0.0, 0.0, gy, k * phi, 0.0];
            b[3 * i + 1] = [0.0, gy, 0.0, gx, 0.0, k * phi];
            b[3 * i + 2] = [0.0, 0.0, -k * phi, 0.0, gx, gy];
        }
        for r in 0..nd {
            let db: [f64; 6] = std::array::from_fn(|a| (0..6).map(|c| d(a, c) * b[r][c]).sum());
            for c in 0..nd {
                ke[r * nd + c] += w * (0..6).map(|a| db[a] * b[c][a]).sum::<f64>();
            }
        }
        for i in 0..nl {
            for j in 0..nl {
                let mij = w * v[i] * v[j];
                for comp in 0..3 {
                    me[(3 * i + comp) * nd + 3 * j + comp] += mij;
                }
            }
        }
    }
    Ok((ke, me))
}

pub fn assemble(mesh: &Mesh, mat: &IsotropicMaterial, k: f64) -> Result<(SymPencil, DofMap)> {
    let dofs = DofMap::new(mesh);
    let n = dofs.n_free;
    // lower-triangular pattern from node adjacency
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); mesh.n_nodes()];
    for e in &mesh.elements {
        for &a in e {
            adj[a].extend_from_slice(e);
        }
    }
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, nb) in adj.iter_mut().enumerate() {
        nb.sort_unstable();
        nb.dedup();
        for ca in dofs.index[a].iter().flatten() {
            for &b in nb.iter() {
                for rb in dofs.index[b].iter().flatten() {
                    if rb >= ca {
                        cols[*ca].push(*rb);
                    }
                }
            }
        }
    }
    drop(adj);
    let mut col_ptr = Vec::with_capacity(n + 1);
    col_ptr.push(0);
    let mut row_idx = Vec::new();
    for c in cols.iter_mut() {
        c.sort_unstable();
        c.dedup();
        row_idx.extend_from_slice(c);
        col_ptr.push(row_idx.len());
    }
    drop(cols);
    let mut kv = vec![0.0; row_idx.len()];
    let mut mv = vec![0.0; row_idx.len()];
    for e in &mesh.elements {
        let (ke, me) = element_matrices(mesh, e, mat, k)?;
        let nd = 3 * e.len();
        let g: Vec<Option<usize>> = e.iter().flat_map(|&a| dofs.index[a]).collect();
        for c in 0..nd {
            let Some(gc) = g[c] else { continue };
            let rows = &row_idx[col_ptr[gc]..col_ptr[gc + 1]];
            for r in 0..nd {
                let Some(gr) = g[r] else { continue };
                if gr < gc {
                    continue;
                }
                let p = col_ptr[gc] + rows.binary_search(&gr).expect("pattern covers element");
                kv[p] += ke[r * nd + c];
                mv[p] += me[r * nd + c];
            }
        }
    }
    for j in 0..n {
        let diag = col_ptr[j];
        if !(mv[diag] > 0.0) {
            return Err(Error::AssemblyFailure(format!("mass diagonal {j} is not positive")));
        }
    }
    Ok((SymPencil { n, col_ptr, row_idx, k: kv, m: mv }, dofs))
}

/// Dense Hermitian K and M with the third component kept complex (no
/// substitution u3 = i·w3); for cross-checks on small meshes.
pub fn assemble_complex_dense(mesh: &Mesh, mat: &IsotropicMaterial, k: f64) -> Result<(Mat<c64>, Mat<c64>, DofMap)> {
    let dofs = DofMap::new(mesh);
    let n = dofs.n_free;
    let (la, mu) = (mat.lambda(), mat.mu());
    let mut km = Mat::<c64>::zeros(n, n);
    let mut mm = Mat::<c64>::zeros(n, n);
    let ik = C64::new(0.0, k);
    let zero = C64::new(0.0, 0.0);
    for e in &mesh.elements {
        let g: Vec<Option<usize>> = e.iter().flat_map(|&a| dofs.index[a]).collect();
        for (w, v, gr) in element_quadrature(mesh, e)? {
            // strain rows for (u1, u2, u3) with ∂3 → ik: e11, e22, e33, γ12, γ13, γ23
            let mut b: Vec<[C64; 6]> = Vec::with_capacity(g.len());
            for i in 0..e.len() {
                let (phi, gx, gy) = (C64::new(v[i], 0.0), C64::new(gr[i][0], 0.0), C64::new(gr[i][1], 0.0));
                b.push([gx, zero, zero, gy, ik * phi, zero]);
                b.push([zero, gy, zero, gx, zero, ik * phi]);
                b.push([zero, zero, ik * phi, zero, gx, gy]);
            }
            for r in 0..b.len() {
                let Some(gr_) = g[r] else { continue };
                for c in 0..b.len() {
                    let Some(gc) = g[c] else { continue };
                    let div = |x: &[C64; 6]| x[0] + x[1] + x[2];
                    let mut s = la * div(&b[c]) * div(&b[r]).conj();
                    for a in 0..6 {
                        let f = if a < 3 { 2.0 * mu } else { mu };
                        s += f * b[c][a] * b[r][a].conj();
                    }
                    km[(gr_, gc)] += w * s;
                    if r % 3 == c % 3 {
                        mm[(gr_, gc)] += C64::new(w * v[r / 3] * v[c / 3], 0.0);
                    }
                }
            }
        }
    }
    Ok((km, mm, dofs))
}
