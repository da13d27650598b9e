//! Dense symmetric / Hermitian eigensolver: Householder tridiagonalization
//! followed by the implicit QL iteration (the classic EISPACK pair).
//!
//! Hermitian matrices are handled through the real embedding
//! `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input with every
//! eigenvalue doubled.

use super::matrix::{ComplexMatrix, C64};

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub n: usize,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `j` (entries `vectors[k * n + j]`) is the eigenvector of `values[j]`.
    pub vectors: Vec<f64>,
}

/// Eigenvalues and eigenvectors of the symmetric matrix `a` (row-major, `n × n`).
/// Only the lower triangle is read.
pub fn sym_eigen(a: &[f64], n: usize) -> SymEigen {
    let (values, vectors) = decompose(a, n, true);
    SymEigen { n, values, vectors }
}

/// Ascending eigenvalues of the symmetric matrix `a`.
pub fn sym_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    decompose(a, n, false).0
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_real(0.0) {
        let re: Vec<f64> = m.data().iter().map(|z| z.re).collect();
        return sym_eigenvalues(&re, m.dim());
    }
    let all = sym_eigenvalues(&real_embedding(m), 2 * m.dim());
    all.iter().step_by(2).copied().collect()
}

/// Ascending eigenvalues with orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, Vec<Vec<C64>>) {
    let n = m.dim();
    if m.is_real(0.0) {
        let re: Vec<f64> = m.data().iter().map(|z| z.re).collect();
        let e = sym_eigen(&re, n);
        let vecs = (0..n).map(|j| (0..n).map(|k| C64::new(e.vectors[k * n + j], 0.0)).collect()).collect();
        return (e.values, vecs);
    }
    // Each eigenvalue appears twice in the embedding, paired as (u, v) and
    // (-v, u). Gram-Schmidt over the complex candidates picks one of each pair.
    let e = sym_eigen(&real_embedding(m), 2 * n);
    let nn = 2 * n;
    let mut values = Vec::with_capacity(n);
    let mut vecs: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..nn {
        let mut cand: Vec<C64> = (0..n).map(|k| C64::new(e.vectors[k * nn + j], e.vectors[(k + n) * nn + j])).collect();
        for v in &vecs {
            let ov: C64 = v.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
            for (c, a) in cand.iter_mut().zip(v) {
                *c -= ov * a;
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            for c in cand.iter_mut() {
                *c /= norm;
            }
            values.push(e.values[j]);
            vecs.push(cand);
            if vecs.len() == n {
                break;
            }
        }
    }
    (values, vecs)
}

/// `[[Re, -Im], [Im, Re]]`
pub fn real_embedding(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let nn = 2 * n;
    let mut out = vec![0.0; nn * nn];
    for r in 0..n {
        for c in 0..n {
            let z = m[(r, c)];
            out[r * nn + c] = z.re;
            out[(r + n) * nn + c + n] = z.re;
            out[r * nn + c + n] = -z.im;
            out[(r + n) * nn + c] = z.im;
        }
    }
    out
}

fn decompose(a: &[f64], n: usize, want_vectors: bool) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n, "matrix is not {n}x{n}");
    if n == 0 {
        return (vec![], vec![]);
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            v[i * n + j] = a[i * n + j];
            v[j * n + i] = a[i * n + j];
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e, want_vectors);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = if want_vectors {
        let mut out = vec![0.0; n * n];
        for (newj, &oldj) in order.iter().enumerate() {
            for k in 0..n {
                out[k * n + newj] = v[k * n + oldj];
            }
        }
        out
    } else {
        Vec::new()
    };
    (values, vectors)
}

fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let ix = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[ix(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[ix(i - 1, j)];
                v[ix(i, j)] = 0.0;
                v[ix(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[ix(j, i)] = f;
                g = e[j] + v[ix(j, j)] * f;
                for k in j + 1..i {
                    g += v[ix(k, j)] * d[k];
                    e[k] += v[ix(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[ix(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[ix(i - 1, j)];
                v[ix(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[ix(n - 1, i)] = v[ix(i, i)];
        v[ix(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[ix(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[ix(k, i + 1)] * v[ix(k, j)];
                }
                for k in 0..=i {
                    v[ix(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[ix(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[ix(n - 1, j)];
        v[ix(n - 1, j)] = 0.0;
    }
    v[ix(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                assert!(iter < 300, "QL iteration failed to converge");
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if want_vectors {
                        for k in 0..n {
                            let hk = v[k * n + i + 1];
                            v[k * n + i + 1] = s * v[k * n + i] + c * hk;
                            v[k * n + i] = c * v[k * n + i] - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Cholesky factor `L` (row-major, lower) of a symmetric positive definite
/// matrix. Returns `None` when a pivot is not strictly positive.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut s = a[j * n + j];
        for k in 0..j {
            s -= l[j * n + k] * l[j * n + k];
        }
        if !(s > 0.0) {
            return None;
        }
        let djj = s.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_spectrum() {
        let a = [3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        assert_eq!(sym_eigenvalues(&a, 3), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn reconstructs_symmetric_matrix() {
        let n = 6;
        let a: Vec<f64> = (0..n * n)
            .map(|k| {
                let (r, c) = (k / n, k % n);
                ((r.min(c) * 7 + r.max(c) * 3) % 11) as f64 - 5.0
            })
            .collect();
        let e = sym_eigen(&a, n);
        for r in 0..n {
            for c in 0..n {
                let s: f64 = (0..n).map(|j| e.vectors[r * n + j] * e.values[j] * e.vectors[c * n + j]).sum();
                assert!((s - a[r * n + c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_pauli_y() {
        let y = ComplexMatrix::from_vec(vec![C64::new(0., 0.), C64::new(0., -1.), C64::new(0., 1.), C64::new(0., 0.)]);
        let ev = hermitian_eigenvalues(&y);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        let (vals, vecs) = hermitian_eigen(&y);
        for (lam, v) in vals.iter().zip(&vecs) {
            let yv = y.apply(v);
            for (a, b) in yv.iter().zip(v) {
                assert!((a - b * lam).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = [4.0, 2.0, 2.0, 3.0];
        let l = cholesky(&a, 2).unwrap();
        assert!((l[0] * l[0] - 4.0).abs() < 1e-14);
        assert!((l[2] * l[0] - 2.0).abs() < 1e-14);
        assert!((l[2] * l[2] + l[3] * l[3] - 3.0).abs() < 1e-14);
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }
}
