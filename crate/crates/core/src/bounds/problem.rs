//! The PPT relaxation of the worst-case swap over noise states.
//!
//! With `ρ_i = p|Ψ00⟩⟨Ψ00| + (1 − p)σ_i`, the noise product `σ1 ⊗ σ2` on
//! `(B1, A1, A2, B2)` is relaxed to a joint state `σ` with `σ ⪰ 0`,
//! `σ^Γ ⪰ 0` (partial transpose on `A2 B2`) and
//!
//! ```text
//! Tr[Ψ_{B1A1} σ] = Tr[Ψ_{A2B2} σ] = F̃,   Tr[Ψ_{A1A2} σ] = δ̃,   Tr σ = 1,
//! ```
//!
//! optimizing `Tr[Ψ_{B1B2} ⊗ Ψ_{A1A2} σ]`. Applying `XZ` to `B1` and `A2`
//! turns every `Ψ00` above into the singlet `(I − SWAP)/2`, so all data is
//! invariant under `U^{⊗4}` and `σ` may be restricted to the span of the
//! register permutations.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::eigen::hermitian_eigen;
use crate::qcore::ops::partial_transpose;
use crate::qcore::{psi00, ComplexMatrix, C64};
use crate::sdp::{AffineBlock, SdpProblem};

use super::perm::{permutation_matrix, Perm, PermCombination, A1, A2, B1, B2};

/// Below this `F̃` the noise marginals are treated as orthogonal to `Ψ00`
/// and the problem is restricted to the corresponding face.
pub const FACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Min,
    Max,
}

/// Which Hermitian generators span the invariant operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermitianBasis {
    /// `A_τ = (M_τ + M_τᵀ)/2` and `B_τ = i(M_τ − M_τᵀ)/2`.
    Full,
    /// `A_τ` only. Every datum is real, so `(σ + σ̄)/2` is feasible whenever
    /// `σ` is and has the same value; the optimum is attained on real `σ`.
    Real,
}

/// `F̃ = (F − p)/(1 − p)`
pub fn f_tilde(p: f64, f: f64) -> f64 {
    (f - p) / (1.0 - p)
}

/// `δ̃ = (4δ − 2p + p²)/(4(1 − p)²)`
pub fn delta_tilde(p: f64, delta: f64) -> f64 {
    (4.0 * delta - 2.0 * p + p * p) / (4.0 * (1.0 - p) * (1.0 - p))
}

/// Inverse of [`delta_tilde`]: `δ = p/2 − p²/4 + (1 − p)² δ̃`.
pub fn delta_of(p: f64, dt: f64) -> f64 {
    0.5 * p - 0.25 * p * p + (1.0 - p) * (1.0 - p) * dt
}

/// `F' = (F p/2 − p²/4 + (1 − p)² H)/δ`
pub fn fidelity_of(p: f64, f: f64, delta: f64, h: f64) -> f64 {
    (0.5 * f * p - 0.25 * p * p + (1.0 - p) * (1.0 - p) * h) / delta
}

pub(crate) fn check_pf(p: f64, f: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain(format!("p = {p} and F = {f} must lie in [0, 1]")));
    }
    if p > f + 1e-12 {
        return Err(Error::Domain(format!("p = {p} exceeds F = {f}")));
    }
    Ok(())
}

/// A fixed set of Hermitian generators with everything the builders need.
#[derive(Debug)]
pub struct Family {
    pub labels: Vec<String>,
    pub gens: Vec<ComplexMatrix>,
    pub pt: Vec<ComplexMatrix>,
    /// Generators and their transposes compressed to the `F̃ = 0` face.
    face_gens: Vec<ComplexMatrix>,
    face_pt: Vec<ComplexMatrix>,
    /// Rows forcing `σ` onto the face.
    face_eqs: Vec<Vec<f64>>,
    /// `Tr[O G_k]` for the objective, `Ψ_{A1A2}`, `Ψ_{B1A1}`, `Ψ_{A2B2}`, `I`.
    pub obj: Vec<f64>,
    pub v: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub x: Vec<f64>,
}

impl Family {
    pub fn n_vars(&self) -> usize {
        self.gens.len()
    }

    /// `Σ x_k G_k`
    pub fn operator(&self, x: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(16);
        for (g, &xk) in self.gens.iter().zip(x) {
            for (a, b) in m.data_mut().iter_mut().zip(g.data()) {
                *a += b * xk;
            }
        }
        m
    }
}

/// What the relaxed problem optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `Tr[Ψ_{B1B2} Ψ_{A1A2} σ]` at fixed `δ̃`.
    Fidelity(Sense),
    /// `Tr[Ψ_{A1A2} σ]`, with no `δ̃` constraint.
    SwapProbability(Sense),
}

impl Family {
    pub fn problem(&self, target: Target, ft: f64, dt: Option<f64>) -> SdpProblem {
        let n = self.n_vars();
        let signed = |v: &[f64], s: Sense| match s {
            Sense::Min => v.to_vec(),
            Sense::Max => v.iter().map(|c| -c).collect(),
        };
        let objective = match target {
            Target::Fidelity(s) => signed(&self.obj, s),
            Target::SwapProbability(s) => signed(&self.v, s),
        };
        let mut equalities = vec![(self.w1.clone(), ft), (self.w2.clone(), ft), (self.x.clone(), 1.0)];
        if let (Target::Fidelity(_), Some(dt)) = (target, dt) {
            equalities.push((self.v.clone(), dt));
        }
        let on_face = ft <= FACE_TOL;
        let (g, gp) = if on_face {
            equalities.extend(self.face_eqs.iter().map(|r| (r.clone(), 0.0)));
            (&self.face_gens, &self.face_pt)
        } else {
            (&self.gens, &self.pt)
        };
        let d = g[0].dim();
        SdpProblem {
            n_vars: n,
            objective,
            equalities,
            psd_blocks: vec![
                AffineBlock { constant: ComplexMatrix::zeros(d), coeffs: g.clone() },
                AffineBlock { constant: ComplexMatrix::zeros(d), coeffs: gp.clone() },
            ],
        }
    }
}

/// `|ψ⟩⟨ψ|` on registers `(a, b)` tensored with the identity elsewhere.
pub fn pair_projector(psi: &[C64; 4], a: usize, b: usize) -> ComplexMatrix {
    let bit = |k: usize, q: usize| (k >> (3 - q)) & 1;
    ComplexMatrix::from_fn(16, |r, c| {
        let rest_equal = (0..4).filter(|&q| q != a && q != b).all(|q| bit(r, q) == bit(c, q));
        if !rest_equal {
            return C64::new(0.0, 0.0);
        }
        psi[2 * bit(r, a) + bit(r, b)] * psi[2 * bit(c, a) + bit(c, b)].conj()
    })
}

fn pt_a2b2(m: &ComplexMatrix) -> ComplexMatrix {
    partial_transpose(m, 4, &[A2, B2])
}

/// Pivoted Gram-Schmidt (rank-revealing QR on the vectorized generators);
/// returns the indices of a maximal independent subset in pivot order.
fn independent_subset(cands: &[ComplexMatrix]) -> Vec<usize> {
    let vecs: Vec<Vec<f64>> = cands.iter().map(|m| m.data().iter().flat_map(|z| [z.re, z.im]).collect()).collect();
    let scale = vecs.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>()).fold(0.0, f64::max).sqrt();
    let mut resid = vecs.clone();
    let mut chosen: Vec<usize> = Vec::new();
    loop {
        let (best, norm) = resid
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(i, v)| (i, v.iter().map(|x| x * x).sum::<f64>().sqrt()))
            .fold((usize::MAX, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if best == usize::MAX || norm <= 1e-9 * scale {
            break;
        }
        chosen.push(best);
        let q: Vec<f64> = resid[best].iter().map(|x| x / norm).collect();
        for (i, v) in resid.iter_mut().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let ov: f64 = v.iter().zip(&q).map(|(a, b)| a * b).sum();
            for (a, b) in v.iter_mut().zip(&q) {
                *a -= ov * b;
            }
        }
    }
    chosen
}

/// Orthonormal basis of the range of the face projector, as columns.
fn face_basis(proj: &ComplexMatrix) -> Vec<Vec<C64>> {
    let (vals, vecs) = hermitian_eigen(proj);
    vals.iter().zip(vecs).filter(|(v, _)| **v > 0.5).map(|(_, v)| v).collect()
}

fn compress(m: &ComplexMatrix, basis: &[Vec<C64>]) -> ComplexMatrix {
    let k = basis.len();
    ComplexMatrix::from_fn(k, |a, b| {
        let mb = m.apply(&basis[b]);
        basis[a].iter().zip(&mb).map(|(x, y)| x.conj() * y).sum()
    })
}

fn finish_family(
    labels: Vec<String>,
    gens: Vec<ComplexMatrix>,
    coeff: impl Fn(&ComplexMatrix, usize) -> [f64; 5],
    pair_left: &ComplexMatrix,
    pair_right: &ComplexMatrix,
) -> Family {
    let pt: Vec<ComplexMatrix> = gens.iter().map(pt_a2b2).collect();
    let id = ComplexMatrix::identity(16);
    let face_proj = (&id - pair_left).matmul(&(&id - pair_right));
    let basis = face_basis(&face_proj);
    let face_gens = gens.iter().map(|g| compress(g, &basis)).collect();
    let face_pt = pt.iter().map(|g| compress(g, &basis)).collect();
    // (I − P) σ = 0, entry by entry
    let off: Vec<ComplexMatrix> = gens.iter().map(|g| (&id - &face_proj).matmul(g)).collect();
    let mut face_eqs = Vec::new();
    for e in 0..256 {
        for part in 0..2 {
            let row: Vec<f64> = off.iter().map(|m| if part == 0 { m.data()[e].re } else { m.data()[e].im }).collect();
            if row.iter().any(|v| v.abs() > 1e-14) {
                face_eqs.push(row);
            }
        }
    }
    let mut cols = [vec![], vec![], vec![], vec![], vec![]];
    for (k, g) in gens.iter().enumerate() {
        for (col, v) in cols.iter_mut().zip(coeff(g, k)) {
            col.push(v);
        }
    }
    let [obj, v, w1, w2, x] = cols;
    Family { labels, gens, pt, face_gens, face_pt, face_eqs, obj, v, w1, w2, x }
}

/// Trace vectors of the five operators of the rotated problem, indexed by
/// [`Perm::all`], from the permutation trace table only.
#[derive(Debug, Clone)]
pub struct TraceCoefficients {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub x: Vec<f64>,
}

pub fn trace_coefficients() -> TraceCoefficients {
    let obj = PermCombination::singlet(B1, B2).product(&PermCombination::singlet(A1, A2));
    TraceCoefficients {
        u: obj.trace_vector(),
        v: PermCombination::singlet(A1, A2).trace_vector(),
        w1: PermCombination::singlet(B1, A1).trace_vector(),
        w2: PermCombination::singlet(A2, B2).trace_vector(),
        x: PermCombination::new(vec![(1.0, Perm::IDENTITY)]).trace_vector(),
    }
}

fn build_symmetrized(basis: HermitianBasis) -> Family {
    let perms = Perm::all();
    let mut cands = Vec::new();
    // (perm index, imaginary part?)
    let mut origin = Vec::new();
    for (i, &tau) in perms.iter().enumerate() {
        let m = permutation_matrix(tau);
        cands.push((&m + &m.transpose()).scale(0.5));
        origin.push((i, false));
    }
    if basis == HermitianBasis::Full {
        for (i, &tau) in perms.iter().enumerate() {
            let m = permutation_matrix(tau);
            cands.push((&m - &m.transpose()).scale_c(C64::new(0.0, 0.5)));
            origin.push((i, true));
        }
    }
    let keep = independent_subset(&cands);
    let tc = trace_coefficients();
    let labels = keep
        .iter()
        .map(|&k| {
            let (i, imag) = origin[k];
            format!("{}{}", if imag { "B" } else { "A" }, perms[i].name())
        })
        .collect();
    let gens: Vec<ComplexMatrix> = keep.iter().map(|&k| cands[k].clone()).collect();
    let inv: Vec<usize> = perms.iter().map(|p| p.inverse().index()).collect();
    let kept_origin: Vec<(usize, bool)> = keep.iter().map(|&k| origin[k]).collect();
    let sym = |vec: &[f64], i: usize| 0.5 * (vec[i] + vec[inv[i]]);
    let singlet = |a, b| PermCombination::singlet(a, b).matrix();
    finish_family(
        labels,
        gens,
        |_, k| {
            let (i, imag) = kept_origin[k];
            if imag {
                // Tr[O B_τ] = i(Tr[O M_τ] − Tr[O M_τ⁻¹])/2 vanishes for real symmetric O
                [0.0; 5]
            } else {
                [sym(&tc.u, i), sym(&tc.v, i), sym(&tc.w1, i), sym(&tc.w2, i), sym(&tc.x, i)]
            }
        },
        &singlet(B1, A1),
        &singlet(A2, B2),
    )
}

fn build_unsymmetrized(basis: HermitianBasis) -> Family {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut labels = Vec::new();
    let mut gens = Vec::new();
    for r in 0..16 {
        for c in r..16 {
            let mut m = ComplexMatrix::zeros(16);
            if r == c {
                m.data_mut()[r * 16 + r] = C64::new(1.0, 0.0);
            } else {
                m.data_mut()[r * 16 + c] = C64::new(s, 0.0);
                m.data_mut()[c * 16 + r] = C64::new(s, 0.0);
            }
            labels.push(format!("re[{r},{c}]"));
            gens.push(m);
        }
    }
    if basis == HermitianBasis::Full {
        for r in 0..16 {
            for c in r + 1..16 {
                let mut m = ComplexMatrix::zeros(16);
                m.data_mut()[r * 16 + c] = C64::new(0.0, -s);
                m.data_mut()[c * 16 + r] = C64::new(0.0, s);
                labels.push(format!("im[{r},{c}]"));
                gens.push(m);
            }
        }
    }
    let phi = psi00();
    let proj = |a, b| pair_projector(&phi, a, b);
    let ops =
        [proj(B1, B2).matmul(&proj(A1, A2)), proj(A1, A2), proj(B1, A1), proj(A2, B2), ComplexMatrix::identity(16)];
    finish_family(labels, gens, |g, _| ops.clone().map(|o| o.trace_product(g).re), &proj(B1, A1), &proj(A2, B2))
}

/// Invariant generators (after the local rotation), built once.
pub fn symmetrized_family(basis: HermitianBasis) -> &'static Family {
    static FULL: OnceLock<Family> = OnceLock::new();
    static REAL: OnceLock<Family> = OnceLock::new();
    match basis {
        HermitianBasis::Full => FULL.get_or_init(|| build_symmetrized(basis)),
        HermitianBasis::Real => REAL.get_or_init(|| build_symmetrized(basis)),
    }
}

/// All Hermitian 16 × 16 matrices (256 parameters, or the 136 real ones),
/// in the original frame.
pub fn unsymmetrized_family(basis: HermitianBasis) -> &'static Family {
    static FULL: OnceLock<Family> = OnceLock::new();
    static REAL: OnceLock<Family> = OnceLock::new();
    match basis {
        HermitianBasis::Full => FULL.get_or_init(|| build_unsymmetrized(basis)),
        HermitianBasis::Real => REAL.get_or_init(|| build_unsymmetrized(basis)),
    }
}

/// The reduced problem at one `(p, F, δ)`.
#[derive(Debug, Clone)]
pub struct SymmetrizedProblem {
    pub p: f64,
    pub f: f64,
    pub delta: f64,
    pub f_tilde: f64,
    pub delta_tilde: f64,
    pub sense: Sense,
    pub basis: HermitianBasis,
    /// Trace vectors indexed by the 24 permutations.
    pub coefficients: TraceCoefficients,
}

impl SymmetrizedProblem {
    pub fn new(p: f64, f: f64, delta: f64, sense: Sense, basis: HermitianBasis) -> Result<Self> {
        check_pf(p, f)?;
        if p >= 1.0 {
            return Err(Error::Domain("p = 1 leaves no noise to optimize over".into()));
        }
        let ft = f_tilde(p, f).clamp(0.0, 1.0);
        let dt = delta_tilde(p, delta);
        if !(-1e-12..=1.0 + 1e-12).contains(&dt) {
            return Err(Error::Domain(format!("δ = {delta} maps to δ̃ = {dt} outside [0, 1]")));
        }
        Ok(Self {
            p,
            f,
            delta,
            f_tilde: ft,
            delta_tilde: dt.clamp(0.0, 1.0),
            sense,
            basis,
            coefficients: trace_coefficients(),
        })
    }

    pub fn family(&self) -> &'static Family {
        symmetrized_family(self.basis)
    }

    pub fn to_sdp(&self) -> SdpProblem {
        self.family().problem(Target::Fidelity(self.sense), self.f_tilde, Some(self.delta_tilde))
    }
}

/// The symmetry-reduced problem in the `A_τ`/`B_τ` basis.
pub fn build_symmetrized_sdp(p: f64, f: f64, delta: f64, sense: Sense) -> Result<SdpProblem> {
    Ok(SymmetrizedProblem::new(p, f, delta, sense, HermitianBasis::Full)?.to_sdp())
}

/// The same problem over all Hermitian `σ`, without symmetry reduction.
pub fn build_unsymmetrized_sdp(p: f64, f: f64, delta: f64, sense: Sense, basis: HermitianBasis) -> Result<SdpProblem> {
    let sp = SymmetrizedProblem::new(p, f, delta, sense, basis)?;
    Ok(unsymmetrized_family(basis).problem(Target::Fidelity(sense), sp.f_tilde, Some(sp.delta_tilde)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{bell_vector, PauliLabel};

    #[test]
    fn invariant_span_has_dimension_fourteen() {
        assert_eq!(symmetrized_family(HermitianBasis::Full).n_vars(), 14);
        assert!(symmetrized_family(HermitianBasis::Real).n_vars() <= 14);
    }

    #[test]
    fn rotation_maps_psi00_to_singlet() {
        let singlet = bell_vector(PauliLabel::XZ);
        for (a, b) in [(B1, A1), (A2, B2), (A1, A2), (B1, B2)] {
            let direct = pair_projector(&singlet, a, b);
            assert!(direct.max_abs_diff(&PermCombination::singlet(a, b).matrix()) < 1e-12);
        }
        // XZ on exactly one register of a pair turns Φ⁺ into the singlet
        let w = PauliLabel::XZ.matrix();
        let phi = psi00();
        let rotated: Vec<C64> = (0..4).map(|k| (0..2).map(|x| w[(k >> 1, x)] * phi[2 * x + (k & 1)]).sum()).collect();
        let ov: C64 = rotated.iter().zip(&singlet).map(|(a, b)| a * b.conj()).sum();
        assert!((ov.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_coefficients_match_direct_traces() {
        let fam = symmetrized_family(HermitianBasis::Full);
        let s = |a, b| PermCombination::singlet(a, b).matrix();
        let ops = [s(B1, B2).matmul(&s(A1, A2)), s(A1, A2), s(B1, A1), s(A2, B2), ComplexMatrix::identity(16)];
        for (k, g) in fam.gens.iter().enumerate() {
            let table = [fam.obj[k], fam.v[k], fam.w1[k], fam.w2[k], fam.x[k]];
            for (o, t) in ops.iter().zip(table) {
                assert!((o.trace_product(g).re - t).abs() < 1e-12);
            }
        }
    }
}
