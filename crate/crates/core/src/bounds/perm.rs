//! Register permutations of four qubits `(B1, A1, A2, B2)` and the operators
//! `M_τ` that implement them. Their span is the commutant of `U^{⊗4}`.

use crate::qcore::{ComplexMatrix, C64};

pub const B1: usize = 0;
pub const A1: usize = 1;
pub const A2: usize = 2;
pub const B2: usize = 3;
pub const REGISTER_NAMES: [&str; 4] = ["B1", "A1", "A2", "B2"];

/// Permutation `i ↦ map[i]` of the four registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub [usize; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn transposition(a: usize, b: usize) -> Perm {
        let mut m = [0, 1, 2, 3];
        m.swap(a, b);
        Perm(m)
    }

    /// `(self ∘ other)(i) = self(other(i))`
    pub fn compose(self, other: Perm) -> Perm {
        Perm(other.0.map(|i| self.0[i]))
    }

    pub fn inverse(self) -> Perm {
        let mut inv = [0; 4];
        for (i, &t) in self.0.iter().enumerate() {
            inv[t] = i;
        }
        Perm(inv)
    }

    /// Cycle lengths in descending order, e.g. `[2, 1, 1]`.
    pub fn cycle_type(self) -> Vec<usize> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4 {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// `Tr M_τ = 2^{#cycles}`, exact.
    pub fn trace(self) -> u32 {
        1 << self.cycle_type().len()
    }

    /// All 24 permutations in lexicographic order of their images.
    pub fn all() -> Vec<Perm> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let m = [a, b, c, d];
                        let mut seen = [false; 4];
                        if m.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                            out.push(Perm(m));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn index(self) -> usize {
        Perm::all().iter().position(|&p| p == self).expect("valid permutation")
    }

    /// Cycle notation over register names, e.g. `(B1 B2)(A1 A2)`.
    pub fn name(self) -> String {
        let mut seen = [false; 4];
        let mut out = String::new();
        for start in 0..4 {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(REGISTER_NAMES[i]);
                i = self.0[i];
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }
}

#[derive(Debug, Clone)]
pub struct PermutationOperator {
    pub tau: Perm,
    /// `M_τ |k_0 k_1 k_2 k_3⟩ = |k'⟩` with `k'_{τ(i)} = k_i`.
    pub matrix: ComplexMatrix,
}

/// The 16 × 16 matrix of `M_τ`. Register `q` is bit `3 − q` of the index.
pub fn permutation_matrix(tau: Perm) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(16);
    for k in 0..16usize {
        let mut out = 0usize;
        for i in 0..4 {
            let bit = (k >> (3 - i)) & 1;
            out |= bit << (3 - tau.0[i]);
        }
        m.data_mut()[out * 16 + k] = C64::new(1.0, 0.0);
    }
    m
}

/// All 24 operators together with the exact trace table.
pub fn build_permutation_algebra() -> (Vec<PermutationOperator>, Vec<u32>) {
    let perms = Perm::all();
    let ops = perms.iter().map(|&tau| PermutationOperator { tau, matrix: permutation_matrix(tau) }).collect();
    let traces = perms.iter().map(|p| p.trace()).collect();
    (ops, traces)
}

/// Linear combination `Σ c_π M_π` kept symbolically.
#[derive(Debug, Clone, Default)]
pub struct PermCombination {
    pub terms: Vec<(f64, Perm)>,
}

impl PermCombination {
    pub fn new(terms: Vec<(f64, Perm)>) -> Self {
        Self { terms }
    }

    /// `(I − M_{(ab)})/2`, the projector onto the antisymmetric state of a pair.
    pub fn singlet(a: usize, b: usize) -> Self {
        Self::new(vec![(0.5, Perm::IDENTITY), (-0.5, Perm::transposition(a, b))])
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for &(c1, p1) in &self.terms {
            for &(c2, p2) in &other.terms {
                terms.push((c1 * c2, p1.compose(p2)));
            }
        }
        Self { terms }
    }

    /// `Tr[O M_τ]` for every τ (in [`Perm::all`] order) from the trace table alone.
    pub fn trace_vector(&self) -> Vec<f64> {
        Perm::all()
            .into_iter()
            .map(|tau| self.terms.iter().map(|&(c, p)| c * p.compose(tau).trace() as f64).sum())
            .collect()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        self.terms.iter().fold(ComplexMatrix::zeros(16), |acc, &(c, p)| &acc + &permutation_matrix(p).scale(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_table_by_cycle_type() {
        let (ops, traces) = build_permutation_algebra();
        assert_eq!(ops.len(), 24);
        for (op, &t) in ops.iter().zip(&traces) {
            let expect = match op.tau.cycle_type().as_slice() {
                [1, 1, 1, 1] => 16,
                [2, 1, 1] => 8,
                [2, 2] => 4,
                [3, 1] => 4,
                [4] => 2,
                other => panic!("cycle type {other:?}"),
            };
            assert_eq!(t, expect);
            let direct = op.matrix.trace();
            assert_eq!(direct.re, expect as f64);
            assert_eq!(direct.im, 0.0);
        }
        assert_eq!(Perm::transposition(A1, A2).trace(), 8);
        assert_eq!(Perm([1, 2, 3, 0]).trace(), 2);
    }

    #[test]
    fn composition_is_matrix_product() {
        let (ops, _) = build_permutation_algebra();
        for a in &ops {
            for b in &ops {
                let prod = a.matrix.matmul(&b.matrix);
                assert_eq!(prod.max_abs_diff(&permutation_matrix(a.tau.compose(b.tau))), 0.0);
            }
            assert_eq!(a.matrix.transpose().max_abs_diff(&permutation_matrix(a.tau.inverse())), 0.0);
        }
    }

    #[test]
    fn trace_vector_matches_matrices() {
        let o = PermCombination::singlet(B1, B2).product(&PermCombination::singlet(A1, A2));
        let m = o.matrix();
        for (tau, v) in Perm::all().into_iter().zip(o.trace_vector()) {
            assert!((m.trace_product(&permutation_matrix(tau)).re - v).abs() < 1e-12);
        }
    }

    #[test]
    fn names() {
        assert_eq!(Perm::transposition(B1, B2).name(), "(B1 B2)");
        assert_eq!(Perm::IDENTITY.name(), "()");
    }
}
