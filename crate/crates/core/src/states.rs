//! Named two-qubit states, Bell-diagonal and Werner twirls, and the
//! `p|Ψ00⟩⟨Ψ00| + (1 − p)σ` decomposition machinery.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::density::check_density;
use crate::qcore::eigen::hermitian_eigenvalues;
use crate::qcore::{bell_projector, bell_vector, psi00, ComplexMatrix, DensityOperator, PauliLabel, RegisterSet, C64};

/// Coefficients `(λ00, λ01, λ10, λ11)` of a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalCoeffs {
    pub lambda: [f64; 4],
}

impl BellDiagonalCoeffs {
    pub fn new(lambda: [f64; 4]) -> Result<Self> {
        if lambda.iter().any(|&l| l < -1e-12 || !l.is_finite()) {
            return Err(Error::Domain(format!("Bell-diagonal coefficients must be non-negative, got {lambda:?}")));
        }
        let s: f64 = lambda.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("Bell-diagonal coefficients sum to {s}, not 1")));
        }
        Ok(Self { lambda })
    }

    pub fn perfect() -> Self {
        Self { lambda: [1.0, 0.0, 0.0, 0.0] }
    }

    pub fn werner(f: f64) -> Self {
        let t = (1.0 - f) / 3.0;
        Self { lambda: [f, t, t, t] }
    }

    pub fn fidelity(&self) -> f64 {
        self.lambda[0]
    }

    pub fn get(&self, label: PauliLabel) -> f64 {
        self.lambda[label.index()]
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        for (k, &l) in self.lambda.iter().enumerate() {
            if l != 0.0 {
                m = &m + &bell_projector(PauliLabel::from_index(k)).scale(l);
            }
        }
        m
    }

    /// `Σ λ_ij |Ψ_ij⟩⟨Ψ_ij|`
    pub fn reconstruct(&self) -> DensityOperator {
        DensityOperator::from_trusted(self.matrix(), RegisterSet::anonymous(2))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.lambda.iter().zip(&other.lambda).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Werner state `w|Ψ00⟩⟨Ψ00| + (1 − w) I/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerState {
    pub fidelity: f64,
    /// `(4F − 1)/3`
    pub w: f64,
}

impl WernerState {
    pub fn new(fidelity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::Domain(format!("Werner fidelity must lie in [0, 1], got {fidelity}")));
        }
        Ok(Self { fidelity, w: (4.0 * fidelity - 1.0) / 3.0 })
    }

    pub fn coeffs(&self) -> BellDiagonalCoeffs {
        BellDiagonalCoeffs::werner(self.fidelity)
    }

    pub fn reconstruct(&self) -> DensityOperator {
        let m = &bell_projector(PauliLabel::I).scale(self.w)
            + &ComplexMatrix::identity(4).scale((1.0 - self.fidelity) / 3.0);
        DensityOperator::from_trusted(m, RegisterSet::anonymous(2))
    }
}

fn require_two_qubit(rho: &DensityOperator) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: 4, got: rho.dim() });
    }
    Ok(())
}

/// `λ_ij = ⟨Ψ_ij|ρ|Ψ_ij⟩`.
pub fn bd_twirl(rho: &DensityOperator) -> Result<BellDiagonalCoeffs> {
    require_two_qubit(rho)?;
    Ok(bd_coeffs_of(rho.matrix()))
}

/// Bell-basis diagonal of a 4×4 matrix, without validation.
pub fn bd_coeffs_of(m: &ComplexMatrix) -> BellDiagonalCoeffs {
    let mut lambda = [0.0; 4];
    for (k, l) in lambda.iter_mut().enumerate() {
        *l = m.expectation(&bell_vector(PauliLabel::from_index(k))).re;
    }
    BellDiagonalCoeffs { lambda }
}

/// The twirled state itself.
pub fn bd_twirl_operator(rho: &DensityOperator) -> Result<DensityOperator> {
    Ok(bd_twirl(rho)?.reconstruct())
}

/// Analytic Werner twirl: keeps only the fidelity.
pub fn werner_twirl(rho: &DensityOperator) -> Result<WernerState> {
    require_two_qubit(rho)?;
    WernerState::new(rho.fidelity_to_pure(&psi00())?)
}

/// JSON-describable named states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedState {
    Werner {
        #[serde(rename = "F")]
        f: f64,
    },
    RState {
        p: f64,
    },
    SState {
        p: f64,
    },
    Theta {
        theta: f64,
    },
    Opt {
        p: f64,
        #[serde(rename = "F")]
        f: f64,
    },
    Bd {
        lambda: [f64; 4],
    },
    /// Row-major `[re, im]` pairs.
    Matrix {
        entries: Vec<[f64; 2]>,
    },
}

fn in_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in [0, 1], got {x}")))
    }
}

fn basis_projector(k: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(k, k)] = C64::new(1.0, 0.0);
    m
}

/// Build the density operator a descriptor names.
pub fn make_named(kind: &NamedState) -> Result<DensityOperator> {
    let p00 = bell_projector(PauliLabel::I);
    let m = match *kind {
        NamedState::Werner { f } => {
            if !(0.25..=1.0).contains(&f) {
                return Err(Error::Domain(format!("werner requires 1/4 <= F <= 1, got F = {f}")));
            }
            return Ok(WernerState::new(f)?.reconstruct());
        }
        NamedState::RState { p } => {
            in_unit("p", p)?;
            &p00.scale(p) + &basis_projector(0b01).scale(1.0 - p)
        }
        NamedState::SState { p } => {
            in_unit("p", p)?;
            &p00.scale(p) + &basis_projector(0b11).scale(1.0 - p)
        }
        NamedState::Theta { theta } => {
            if !theta.is_finite() {
                return Err(Error::Domain("theta must be finite".into()));
            }
            ComplexMatrix::projector(&theta_vector(theta))
        }
        NamedState::Opt { p, f } => return opt_state(p, f),
        NamedState::Bd { lambda } => return Ok(BellDiagonalCoeffs::new(lambda)?.reconstruct()),
        NamedState::Matrix { ref entries } => {
            if entries.len() != 16 {
                return Err(Error::Domain(format!("matrix descriptor needs 16 entries, got {}", entries.len())));
            }
            let m = ComplexMatrix::from_vec(entries.iter().map(|&[re, im]| C64::new(re, im)).collect());
            return DensityOperator::two_qubit(m);
        }
    };
    Ok(DensityOperator::from_trusted(m, RegisterSet::anonymous(2)))
}

/// `cos θ|00⟩ + sin θ|11⟩`
pub fn theta_vector(theta: f64) -> [C64; 4] {
    let z = C64::new(0.0, 0.0);
    [C64::new(theta.cos(), 0.0), z, z, C64::new(theta.sin(), 0.0)]
}

/// `p|Ψ00⟩⟨Ψ00| + (1 − p)|ψ⟩⟨ψ|` with `|ψ⟩ = √F̃|Ψ00⟩ + √(1−F̃)|Ψ11⟩` and
/// `F̃ = (F − p)/(1 − p)`: the state saturating the upper swap bound.
pub fn opt_state(p: f64, f: f64) -> Result<DensityOperator> {
    in_unit("p", p)?;
    in_unit("F", f)?;
    if p > f {
        return Err(Error::Domain(format!("opt requires p <= F, got p = {p}, F = {f}")));
    }
    if p >= 1.0 {
        return Ok(DensityOperator::from_trusted(bell_projector(PauliLabel::I), RegisterSet::anonymous(2)));
    }
    let ft = (f - p) / (1.0 - p);
    let a = bell_vector(PauliLabel::I);
    let b = bell_vector(PauliLabel::XZ);
    let psi: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x * ft.sqrt() + y * (1.0 - ft).sqrt()).collect();
    let m = &bell_projector(PauliLabel::I).scale(p) + &ComplexMatrix::projector(&psi).scale(1.0 - p);
    Ok(DensityOperator::from_trusted(m, RegisterSet::anonymous(2)))
}

/// Largest `q` with `ρ − q|Ψ00⟩⟨Ψ00| ⪰ 0`, by bisection on the minimum eigenvalue.
pub fn max_p(rho: &DensityOperator) -> Result<f64> {
    require_two_qubit(rho)?;
    let p00 = bell_projector(PauliLabel::I);
    let f = rho.fidelity_to_pure(&psi00())?;
    let ok = |q: f64| hermitian_eigenvalues(&(rho.matrix() - &p00.scale(q)))[0] >= -1e-12;
    if ok(f) {
        return Ok(f);
    }
    let (mut lo, mut hi) = (0.0, f);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `ρ = p|Ψ00⟩⟨Ψ00| + (1 − p)σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyDecomposition {
    pub p: f64,
    /// `⟨Ψ00|ρ|Ψ00⟩`
    pub fidelity: f64,
    pub sigma: DensityOperator,
}

impl NoisyDecomposition {
    /// `⟨Ψ00|σ|Ψ00⟩`
    pub fn sigma_fidelity(&self) -> f64 {
        self.sigma.matrix().expectation(&psi00()).re
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &bell_projector(PauliLabel::I).scale(self.p) + &self.sigma.matrix().scale(1.0 - self.p)
    }

    /// Build from the noise component directly.
    pub fn from_sigma(p: f64, sigma: DensityOperator) -> Result<Self> {
        in_unit("p", p)?;
        if sigma.dim() != 4 {
            return Err(Error::Dimension { expected: 4, got: sigma.dim() });
        }
        let ft = sigma.matrix().expectation(&psi00()).re;
        Ok(Self { p, fidelity: p + (1.0 - p) * ft, sigma })
    }
}

pub fn decompose(rho: &DensityOperator, p: f64) -> Result<NoisyDecomposition> {
    require_two_qubit(rho)?;
    in_unit("p", p)?;
    let f = rho.fidelity_to_pure(&psi00())?;
    if p >= 1.0 {
        if rho.matrix().max_abs_diff(&bell_projector(PauliLabel::I)) > 1e-10 {
            return Err(Error::InfeasibleDecomposition { p, max_p: max_p(rho)? });
        }
        let sigma = DensityOperator::from_trusted(ComplexMatrix::identity(4).scale(0.25), RegisterSet::anonymous(2));
        return Ok(NoisyDecomposition { p, fidelity: f, sigma });
    }
    let mp = max_p(rho)?;
    if p > mp + 1e-9 {
        return Err(Error::InfeasibleDecomposition { p, max_p: mp });
    }
    let m = (rho.matrix() - &bell_projector(PauliLabel::I).scale(p)).scale(1.0 / (1.0 - p));
    check_density(&m, 4)?;
    Ok(NoisyDecomposition { p, fidelity: f, sigma: DensityOperator::from_trusted(m, RegisterSet::anonymous(2)) })
}

/// Seeded random state generators used by tests, sweeps and the self-test.
pub mod random {
    use super::*;

    fn gaussian_c<R: Rng>(rng: &mut R) -> C64 {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    /// `G G† / Tr` for a `dim × rank` complex Ginibre `G`; rank 4 on two
    /// qubits is the reduction of a Haar-random pure state on four qubits.
    pub fn ginibre(rng: &mut impl Rng, dim: usize, rank: usize) -> ComplexMatrix {
        let g: Vec<C64> = (0..dim * rank).map(|_| gaussian_c(rng)).collect();
        let mut m =
            ComplexMatrix::from_fn(dim, |r, c| (0..rank).map(|k| g[r * rank + k] * g[c * rank + k].conj()).sum());
        let tr = m.trace().re;
        m = m.scale(1.0 / tr);
        m.hermitian_part()
    }

    pub fn density(rng: &mut impl Rng) -> DensityOperator {
        let rank = rng.gen_range(1..=4);
        DensityOperator::from_trusted(ginibre(rng, 4, rank), RegisterSet::anonymous(2))
    }

    pub fn full_rank_density(rng: &mut impl Rng) -> DensityOperator {
        DensityOperator::from_trusted(ginibre(rng, 4, 4), RegisterSet::anonymous(2))
    }

    pub fn pure_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_c(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / n).collect()
    }

    /// Uniform on the simplex, with occasional exact zeros.
    pub fn bd_coeffs(rng: &mut impl Rng) -> BellDiagonalCoeffs {
        let mut l = [0.0; 4];
        for x in l.iter_mut() {
            let e: f64 = -rng.gen::<f64>().max(1e-300).ln();
            *x = if rng.gen_bool(0.1) { 0.0 } else { e };
        }
        let s: f64 = l.iter().sum();
        if s == 0.0 {
            return BellDiagonalCoeffs::perfect();
        }
        BellDiagonalCoeffs { lambda: l.map(|x| x / s) }
    }

    /// Bell-diagonal with fidelity at least `1 − eps`.
    pub fn bd_near_perfect(rng: &mut impl Rng, eps: f64) -> BellDiagonalCoeffs {
        let tail = eps * rng.gen::<f64>();
        let w = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        let s: f64 = w.iter().sum::<f64>().max(1e-300);
        BellDiagonalCoeffs { lambda: [1.0 - tail, tail * w[0] / s, tail * w[1] / s, tail * w[2] / s] }
    }

    /// Haar-random 2×2 unitary.
    pub fn unitary2(rng: &mut impl Rng) -> ComplexMatrix {
        let v = pure_vector(rng, 4);
        // SU(2) from a unit quaternion, times a phase
        let (a, b) = (C64::new(v[0].re, v[1].re), C64::new(v[2].re, v[3].re));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        let phase = C64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU);
        ComplexMatrix::from_vec(vec![a * phase, -b.conj() * phase, b * phase, a.conj() * phase])
    }

    /// A random state with exact fidelity `target` to `|Ψ00⟩`: a generic state
    /// mixed either toward `|Ψ00⟩` or toward a state orthogonal to it.
    pub fn density_with_fidelity(rng: &mut impl Rng, target: f64) -> DensityOperator {
        let p00 = bell_projector(PauliLabel::I);
        let omega = density(rng).into_matrix();
        let f = omega.expectation(&psi00()).re;
        let m = if (f - target).abs() < 1e-15 {
            omega
        } else if f < target {
            let t = (target - f) / (1.0 - f);
            &p00.scale(t) + &omega.scale(1.0 - t)
        } else {
            // random state supported on the orthogonal complement of Ψ00
            let rank = rng.gen_range(1..=3);
            let g = ginibre(rng, 3, rank);
            let basis: Vec<[C64; 4]> =
                [PauliLabel::Z, PauliLabel::X, PauliLabel::XZ].iter().map(|&l| bell_vector(l)).collect();
            let tau = ComplexMatrix::from_fn(4, |r, c| {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..3 {
                    for b in 0..3 {
                        acc += basis[a][r] * g[(a, b)] * basis[b][c].conj();
                    }
                }
                acc
            });
            let t = target / f;
            &omega.scale(t) + &tau.scale(1.0 - t)
        };
        DensityOperator::from_trusted(m.hermitian_part(), RegisterSet::anonymous(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn theta_twirl_puts_the_tail_on_psi01() {
        let theta = PI / 6.0;
        let rho = make_named(&NamedState::Theta { theta }).unwrap();
        let c = bd_twirl(&rho).unwrap();
        let f = (theta - PI / 4.0).cos().powi(2);
        let expect = [f, 1.0 - f, 0.0, 0.0];
        for (a, b) in c.lambda.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{:?}", c.lambda);
        }
    }

    #[test]
    fn opt_state_twirl() {
        let rho = opt_state(0.5, 0.95).unwrap();
        let c = bd_twirl(&rho).unwrap();
        assert!((c.lambda[0] - 0.95).abs() < 1e-12 && (c.lambda[3] - 0.05).abs() < 1e-12);
        let d = decompose(&rho, 0.5).unwrap();
        assert!((d.sigma_fidelity() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn descriptor_json() {
        let s: NamedState = serde_json::from_str(r#"{"kind":"r_state","p":0.9}"#).unwrap();
        assert_eq!(s, NamedState::RState { p: 0.9 });
        let s: NamedState = serde_json::from_str(r#"{"kind":"opt","p":0.5,"F":0.95}"#).unwrap();
        assert_eq!(s, NamedState::Opt { p: 0.5, f: 0.95 });
    }

    #[test]
    fn r_state_decomposes_to_basis_state() {
        let rho = make_named(&NamedState::RState { p: 0.7 }).unwrap();
        assert!((max_p(&rho).unwrap() - 0.7).abs() < 1e-9);
        let d = decompose(&rho, 0.7).unwrap();
        assert!(d.sigma.matrix().max_abs_diff(&basis_projector(1)) < 1e-9);
    }

    #[test]
    fn out_of_range_parameters_name_the_constraint() {
        let e = make_named(&NamedState::Opt { p: 0.9, f: 0.8 }).unwrap_err();
        assert!(e.to_string().contains("p <= F"));
        let e = make_named(&NamedState::Werner { f: 0.1 }).unwrap_err();
        assert!(e.to_string().contains("1/4"));
    }
}
