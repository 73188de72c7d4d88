//! Smallest eigenpairs of K x = θ M x (K symmetric, M SPD) by shift-invert
//! Lanczos with full reorthogonalization.
//!
//! Every shift σ is certified to lie below the spectrum by a successful
//! Cholesky factorization of K − σM. After each Lanczos round the shift moves
//! most of the way toward the smallest Ritz value (an upper bound for θ₁), so
//! the wanted eigenvalues separate from the rest and convergence accelerates.

use super::assembly::SymPencil;
use crate::error::{Error, Result};
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, SymbolicLlt};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Mat, Side};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// M-normalized.
    pub vector: Vec<f64>,
    /// ‖Kv − θMv‖ / ‖Mv‖.
    pub residual: f64,
}

struct Shifted {
    llt: Llt<usize, f64>,
}

fn factor(p: &SymPencil, sym: &SymbolicLlt<usize>, sigma: f64) -> Option<Shifted> {
    let vals: Vec<f64> = p.k.iter().zip(&p.m).map(|(k, m)| k - sigma * m).collect();
    let s = SymbolicSparseColMatRef::new_checked(p.n, p.n, &p.col_ptr, None, &p.row_idx);
    let a = SparseColMatRef::new(s, &vals);
    Llt::try_new_with_symbolic(sym.clone(), a, Side::Lower).ok().map(|llt| Shifted { llt })
}

impl Shifted {
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        self.llt.solve_in_place(b.as_mut());
        (0..rhs.len()).map(|i| b[(i, 0)]).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn start_vector(n: usize) -> Vec<f64> {
    // fixed linear congruential sequence: runs are reproducible
    let mut s: u64 = 0x2545_f491_4f6c_dd1d;
    (0..n)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect()
}

fn ritz_residual(p: &SymPencil, theta: f64, x: &[f64]) -> f64 {
    let kx = p.mul_k(x);
    let mx = p.mul_m(x);
    let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - theta * b).collect();
    norm(&r) / norm(&mx)
}

/// One Lanczos run for (K − σM)⁻¹M from `start`; returns Ritz pairs sorted by θ.
fn lanczos(p: &SymPencil, op: &Shifted, sigma: f64, start: &[f64], steps: usize) -> Vec<(f64, Vec<f64>)> {
    let n = p.n;
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut mq: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut v = start.to_vec();
    let mut mv = p.mul_m(&v);
    let nrm = dot(&v, &mv).sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    mv.iter_mut().for_each(|x| *x /= nrm);
    for j in 0..steps.min(n) {
        let mut w = op.solve(&mv);
        q.push(v);
        mq.push(mv);
        let a = dot(&mq[j], &w);
        alpha.push(a);
        for _ in 0..2 {
            for i in 0..=j {
                let c = dot(&mq[i], &w);
                w.iter_mut().zip(&q[i]).for_each(|(x, y)| *x -= c * y);
            }
        }
        let mw = p.mul_m(&w);
        let b = dot(&w, &mw).max(0.0).sqrt();
        if j + 1 == steps.min(n) || b <= 1e-14 * a.abs() {
            break;
        }
        beta.push(b);
        v = w.iter().map(|x| x / b).collect();
        mv = mw.iter().map(|x| x / b).collect();
    }
    let m = alpha.len();
    let t = Mat::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let eig = t.self_adjoint_eigen(Side::Lower).expect("tridiagonal eigenproblem");
    let (s, u) = (eig.S(), eig.U());
    let mut out: Vec<(f64, Vec<f64>)> = (0..m)
        .filter(|&i| s[i] > 0.0)
        .map(|i| {
            let mut x = vec![0.0; n];
            for (l, ql) in q.iter().enumerate() {
                let c = u[(l, i)];
                x.iter_mut().zip(ql).for_each(|(a, b)| *a += c * b);
            }
            (sigma + 1.0 / s[i], x)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// The `count` smallest eigenpairs with ‖Kv − θMv‖/‖Mv‖ ≤ `tol`, ascending.
pub fn solve_smallest(p: &SymPencil, count: usize, tol: f64) -> Result<Vec<EigenPair>> {
    if count == 0 || count > p.n {
        return Err(Error::ConstraintViolation(format!("cannot extract {count} eigenpairs of an order-{} pencil", p.n)));
    }
    let s = SymbolicSparseColMatRef::new_checked(p.n, p.n, &p.col_ptr, None, &p.row_idx);
    let sym = SymbolicLlt::try_new(s, Side::Lower).map_err(|e| Error::NoConvergence(format!("symbolic factorization: {e:?}")))?;

    // initial shift: zero if K is positive definite, otherwise step down
    let mut sigma = 0.0;
    let scale = p.k.iter().fold(0.0f64, |a, b| a.max(b.abs())) / p.m.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut op = factor(p, &sym, sigma);
    let mut down = 1e-8 * scale;
    while op.is_none() {
        sigma -= down;
        down *= 10.0;
        if down > 1e12 * scale {
            return Err(Error::NoConvergence("no positive definite shift found".into()));
        }
        op = factor(p, &sym, sigma);
    }
    let mut op = op.unwrap();
    let steps = (2 * count + 28).min(p.n);
    let mut start = start_vector(p.n);
    let mut history = Vec::new();
    for round in 0..20 {
        let ritz = lanczos(p, &op, sigma, &start, steps);
        if ritz.len() < count {
            if ritz.len() == p.n.min(steps) {
                return Err(Error::NoConvergence(format!("only {} Ritz pairs available", ritz.len())));
            }
        }
        let res: Vec<f64> = ritz.iter().take(count).map(|(t, x)| ritz_residual(p, *t, x)).collect();
        history.push(format!("round {round}: shift {sigma:.6e}, theta1 {:.12e}, residual {:.2e}", ritz[0].0, res[0]));
        if res.len() == count && res.iter().all(|&r| r <= tol) {
            return Ok(ritz
                .into_iter()
                .take(count)
                .zip(res)
                .map(|((value, mut vector), residual)| {
                    let nrm = dot(&vector, &p.mul_m(&vector)).sqrt();
                    vector.iter_mut().for_each(|x| *x /= nrm);
                    EigenPair { value, vector, residual }
                })
                .collect());
        }
        // restart from the sum of the wanted Ritz vectors
        start = vec![0.0; p.n];
        for (_, x) in ritz.iter().take(count) {
            start.iter_mut().zip(x).for_each(|(a, b)| *a += b);
        }
        // move the shift toward θ₁ while keeping K − σM positive definite
        let target = ritz[0].0;
        let mut frac = 0.9;
        loop {
            let trial = sigma + frac * (target - sigma);
            if let Some(f) = factor(p, &sym, trial) {
                sigma = trial;
                op = f;
                break;
            }
            frac *= 0.5;
            if frac < 1e-3 {
                break;
            }
        }
    }
    Err(Error::NoConvergence(history.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pair() {
        let k = vec![vec![1.0, 0.0], vec![0.0, 4.0]];
        let m = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let p = SymPencil::from_dense(&k, &m);
        let ev = solve_smallest(&p, 2, 1e-12).unwrap();
        assert!((ev[0].value - 1.0).abs() < 1e-12 && (ev[1].value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_chain() {
        // 1D Dirichlet Laplacian, eigenvalues 2 − 2cos(jπ/(n+1))
        let n: usize = 200;
        let k: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2.0 } else if i.abs_diff(j) == 1 { -1.0 } else { 0.0 }).collect())
            .collect();
        let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let ev = solve_smallest(&SymPencil::from_dense(&k, &m), 3, 1e-10).unwrap();
        for (j, e) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * (((j + 1) as f64) * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((e.value - want).abs() < 1e-10 * want.max(1e-3), "{} vs {}", e.value, want);
            assert!(e.residual <= 1e-10);
        }
    }
}
