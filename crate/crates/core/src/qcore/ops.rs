//! Index-level register operations on raw matrices. Qubit position `q` of an
//! `n`-qubit register corresponds to bit `n - 1 - q` of the basis index.

use super::matrix::{ComplexMatrix, C64, ZERO};

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// For each value of the sub-register formed by `positions` (in order), the
/// corresponding bit pattern in the full index.
fn scatter_table(n: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|v| {
            let mut full = 0;
            for (idx, &q) in positions.iter().enumerate() {
                if v & (1 << (k - 1 - idx)) != 0 {
                    full |= bit(n, q);
                }
            }
            full
        })
        .collect()
}

fn complement(n: usize, positions: &[usize]) -> Vec<usize> {
    (0..n).filter(|q| !positions.contains(q)).collect()
}

/// Trace out the qubits at `drop`.
pub fn partial_trace(m: &ComplexMatrix, n: usize, drop: &[usize]) -> ComplexMatrix {
    let keep = complement(n, drop);
    let kt = scatter_table(n, &keep);
    let dt = scatter_table(n, drop);
    let dim = m.dim();
    let data = m.data();
    ComplexMatrix::from_fn(kt.len(), |i, j| {
        let (ri, cj) = (kt[i], kt[j]);
        dt.iter().map(|&t| data[(ri | t) * dim + (cj | t)]).sum()
    })
}

/// Transpose the indices of the qubits at `positions`.
pub fn partial_transpose(m: &ComplexMatrix, n: usize, positions: &[usize]) -> ComplexMatrix {
    let mask: usize = positions.iter().map(|&q| bit(n, q)).sum();
    let dim = m.dim();
    ComplexMatrix::from_fn(dim, |r, c| {
        let swap = (r ^ c) & mask;
        m[(r ^ swap, c ^ swap)]
    })
}

/// `(U on qubit q) M (U on qubit q)†` for a 2×2 `u`.
pub fn conjugate_local(m: &ComplexMatrix, n: usize, q: usize, u: &ComplexMatrix) -> ComplexMatrix {
    let b = bit(n, q);
    let dim = m.dim();
    let ud = u.adjoint();
    // left multiply
    let mut tmp = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        if r & b != 0 {
            continue;
        }
        let (r0, r1) = (r, r | b);
        for c in 0..dim {
            let (a0, a1) = (m[(r0, c)], m[(r1, c)]);
            tmp[(r0, c)] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            tmp[(r1, c)] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
    }
    let mut out = ComplexMatrix::zeros(dim);
    for c in 0..dim {
        if c & b != 0 {
            continue;
        }
        let (c0, c1) = (c, c | b);
        for r in 0..dim {
            let (a0, a1) = (tmp[(r, c0)], tmp[(r, c1)]);
            out[(r, c0)] = a0 * ud[(0, 0)] + a1 * ud[(1, 0)];
            out[(r, c1)] = a0 * ud[(0, 1)] + a1 * ud[(1, 1)];
        }
    }
    out
}

/// `⟨ψ|_{q1 q2} M |ψ⟩_{q1 q2}`: project the pair onto the (unnormalized)
/// two-qubit vector `psi` and remove it. `psi[2 a + b]` is the amplitude with
/// qubit `q1` in `a` and `q2` in `b`.
pub fn project_pair(m: &ComplexMatrix, n: usize, q1: usize, q2: usize, psi: &[C64; 4]) -> ComplexMatrix {
    let pair = [q1, q2];
    let keep = complement(n, &pair);
    let kt = scatter_table(n, &keep);
    let pt = scatter_table(n, &pair);
    let dim = m.dim();
    let data = m.data();
    let amps: Vec<(usize, C64)> =
        pt.iter().zip(psi.iter()).filter(|(_, a)| **a != ZERO).map(|(&b, &a)| (b, a)).collect();
    ComplexMatrix::from_fn(kt.len(), |i, j| {
        let mut acc = ZERO;
        for &(ba, aa) in &amps {
            let row = (kt[i] | ba) * dim;
            let mut inner = ZERO;
            for &(bb, ab) in &amps {
                inner += data[row + (kt[j] | bb)] * ab;
            }
            acc += aa.conj() * inner;
        }
        acc
    })
}

/// Reorder qubits: output qubit `k` is input qubit `perm[k]`.
pub fn permute_qubits(m: &ComplexMatrix, n: usize, perm: &[usize]) -> ComplexMatrix {
    assert_eq!(perm.len(), n);
    let dim = m.dim();
    let map: Vec<usize> = (0..dim)
        .map(|out| {
            let mut inp = 0;
            for (k, &src) in perm.iter().enumerate() {
                if out & bit(n, k) != 0 {
                    inp |= bit(n, src);
                }
            }
            inp
        })
        .collect();
    ComplexMatrix::from_fn(dim, |r, c| m[(map[r], map[c])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::ONE;

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::diag(&[0.25, 0.75]);
        let b = ComplexMatrix::from_fn(2, |r, c| {
            if r == c {
                C64::new(0.5, 0.0)
            } else {
                C64::new(0.1, 0.2 * (r as f64 - c as f64))
            }
        });
        let ab = a.kron(&b);
        assert!(partial_trace(&ab, 2, &[1]).max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, 2, &[0]).max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn permute_swaps_kron_factors() {
        let a = ComplexMatrix::diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_fn(2, |r, c| C64::new((r + 2 * c) as f64, 1.0));
        let p = permute_qubits(&a.kron(&b), 2, &[1, 0]);
        assert!(p.max_abs_diff(&b.kron(&a)) < 1e-15);
    }

    #[test]
    fn project_pair_on_product_basis() {
        // |0><0| ⊗ |1><1| ⊗ |1><1| projected on qubits (0,1) with |01>
        let z0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let z1 = ComplexMatrix::diag(&[0.0, 1.0]);
        let m = z0.kron(&z1).kron(&z1);
        let psi = [ZERO, ONE, ZERO, ZERO];
        let out = project_pair(&m, 3, 0, 1, &psi);
        assert!(out.max_abs_diff(&z1) < 1e-15);
    }
}
