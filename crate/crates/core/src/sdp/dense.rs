//! Small dense real helpers for the solver. Matrices are row-major `n × n`.

use crate::qcore::eigen::{cholesky, sym_eigenvalues};

pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for r in 0..n {
        let orow = &mut out[r * n..(r + 1) * n];
        for k in 0..n {
            let a_rk = a[r * n + k];
            if a_rk == 0.0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += a_rk * bv;
            }
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn symmetrize(a: &mut [f64], n: usize) {
    for r in 0..n {
        for c in r + 1..n {
            let v = 0.5 * (a[r * n + c] + a[c * n + r]);
            a[r * n + c] = v;
            a[c * n + r] = v;
        }
    }
}

pub fn identity(n: usize, scale: f64) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = scale;
    }
    m
}

/// Solve `L x = b` in place (lower triangular, row-major).
fn forward(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solve `Lᵀ x = b` in place.
fn backward(l: &[f64], n: usize, b: &mut [f64]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solve `A x = b` given the Cholesky factor of `A`.
pub fn chol_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    forward(l, n, &mut x);
    backward(l, n, &mut x);
    x
}

/// Inverse of an SPD matrix from its Cholesky factor.
pub fn chol_inverse(l: &[f64], n: usize) -> Vec<f64> {
    let mut inv = vec![0.0; n * n];
    let mut e = vec![0.0; n];
    for c in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[c] = 1.0;
        let col = chol_solve(l, n, &e);
        for r in 0..n {
            inv[r * n + c] = col[r];
        }
    }
    symmetrize(&mut inv, n);
    inv
}

/// Largest `α ≤ cap` with `X + α ΔX ⪰ 0`, given the Cholesky factor of `X`.
pub fn max_step(lx: &[f64], dx: &[f64], n: usize, cap: f64) -> f64 {
    // B = L⁻¹ ΔX L⁻ᵀ
    let mut w = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for c in 0..n {
        for r in 0..n {
            col[r] = dx[r * n + c];
        }
        forward(lx, n, &mut col);
        for r in 0..n {
            w[r * n + c] = col[r];
        }
    }
    // B = (L⁻¹ Wᵀ)ᵀ ; rows of W are columns of Wᵀ
    let mut b = vec![0.0; n * n];
    for r in 0..n {
        col.copy_from_slice(&w[r * n..(r + 1) * n]);
        forward(lx, n, &mut col);
        for c in 0..n {
            b[c * n + r] = col[c];
        }
    }
    symmetrize(&mut b, n);
    let lo = sym_eigenvalues(&b, n)[0];
    if lo >= 0.0 {
        cap
    } else {
        (-1.0 / lo).min(cap)
    }
}

pub fn min_eig(a: &[f64], n: usize) -> f64 {
    sym_eigenvalues(a, n)[0]
}

/// Cholesky with a small diagonal shift as a fallback for nearly singular
/// Schur complements.
pub fn robust_cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    if let Some(l) = cholesky(a, n) {
        return Some(l);
    }
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 1e-14 * scale;
    for _ in 0..8 {
        let mut b = a.to_vec();
        for i in 0..n {
            b[i * n + i] += shift;
        }
        if let Some(l) = cholesky(&b, n) {
            return Some(l);
        }
        shift *= 100.0;
    }
    None
}
