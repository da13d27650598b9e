//! Dense semidefinite programming for small problems.
//!
//! Problems have the shape
//!
//! ```text
//! minimize cᵀx  s.t.  aₖᵀx = bₖ,  G₀ + Σ xᵢ Gᵢ ⪰ 0 (per block)
//! ```
//!
//! Equalities are eliminated through a null-space parameterization
//! `x = x₀ + N z`, redundant directions of the block map are dropped, and the
//! remaining LMI is solved as the dual of a standard-form SDP by an
//! infeasible-start primal-dual path-following method (HKM direction,
//! Mehrotra predictor-corrector, scaled identity start). Complex blocks are
//! embedded as real symmetric blocks of twice the size.

mod dense;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::eigen::{hermitian_eigenvalues, real_embedding, sym_eigen};
use crate::qcore::ComplexMatrix;

use dense::*;

pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;
/// Largest accepted block dimension.
pub const MAX_BLOCK_DIM: usize = 64;
pub const MAX_VARS: usize = 512;

/// `x ↦ constant + Σ xᵢ coeffs[i]`, required to be PSD.
#[derive(Debug, Clone)]
pub struct AffineBlock {
    pub constant: ComplexMatrix,
    pub coeffs: Vec<ComplexMatrix>,
}

impl AffineBlock {
    pub fn eval(&self, x: &[f64]) -> ComplexMatrix {
        let mut m = self.constant.clone();
        for (g, &xi) in self.coeffs.iter().zip(x) {
            if xi != 0.0 {
                for (a, b) in m.data_mut().iter_mut().zip(g.data()) {
                    *a += b * xi;
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub n_vars: usize,
    /// Minimized.
    pub objective: Vec<f64>,
    /// `(a, b)` meaning `aᵀx = b`.
    pub equalities: Vec<(Vec<f64>, f64)>,
    pub psd_blocks: Vec<AffineBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Debug, Clone, Serialize)]
pub struct SdpSolution {
    pub x: Vec<f64>,
    pub objective_value: f64,
    /// Lower bound on the optimum certified by the dual iterate.
    pub dual_value: f64,
    pub status: SdpStatus,
    pub duality_gap: f64,
    pub max_equality_residual: f64,
    pub min_block_eigenvalue: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iterations: DEFAULT_MAX_ITERATIONS }
    }
}

impl SdpProblem {
    pub fn validate(&self) -> Result<()> {
        let n = self.n_vars;
        if n > MAX_VARS {
            return Err(Error::Domain(format!("{n} variables exceed the limit {MAX_VARS}")));
        }
        if self.objective.len() != n {
            return Err(Error::Dimension { expected: n, got: self.objective.len() });
        }
        for (a, _) in &self.equalities {
            if a.len() != n {
                return Err(Error::Dimension { expected: n, got: a.len() });
            }
        }
        for b in &self.psd_blocks {
            let d = b.constant.dim();
            if d > MAX_BLOCK_DIM {
                return Err(Error::Domain(format!("block dimension {d} exceeds {MAX_BLOCK_DIM}")));
            }
            if b.coeffs.len() != n {
                return Err(Error::Dimension { expected: n, got: b.coeffs.len() });
            }
            for g in std::iter::once(&b.constant).chain(&b.coeffs) {
                if g.dim() != d {
                    return Err(Error::Dimension { expected: d, got: g.dim() });
                }
                let defect = g.hermiticity_defect();
                if defect > 1e-10 {
                    return Err(Error::NotHermitian(defect));
                }
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    pub fn max_equality_residual(&self, x: &[f64]) -> f64 {
        self.equalities.iter().map(|(a, b)| (dot(a, x) - b).abs()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue over all blocks at `x` (`+∞` without blocks).
    pub fn min_block_eigenvalue(&self, x: &[f64]) -> f64 {
        self.psd_blocks
            .iter()
            .map(|b| hermitian_eigenvalues(&b.eval(x).hermitian_part())[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Solve with the default iteration cap.
pub fn solve(p: &SdpProblem, tol: f64) -> Result<SdpSolution> {
    solve_with(p, SolverOptions { tol, ..Default::default() })
}

pub fn solve_with(p: &SdpProblem, opts: SolverOptions) -> Result<SdpSolution> {
    p.validate()?;
    if !(1e-10..=1e-4).contains(&opts.tol) {
        return Err(Error::Domain(format!("tolerance {} outside [1e-10, 1e-4]", opts.tol)));
    }
    let reduced = match reduce(p) {
        Reduction::Infeasible(x) => return Ok(finish(p, x, f64::NAN, SdpStatus::Infeasible, f64::NAN, 0)),
        Reduction::Unbounded(x) => return Ok(finish(p, x, f64::NEG_INFINITY, SdpStatus::Infeasible, f64::NAN, 0)),
        Reduction::Ok(r) => r,
    };
    if reduced.m == 0 {
        let x = reduced.x0.clone();
        let feasible = reduced.blocks.iter().all(|b| min_eig(&b.c, b.n) >= -1e-9);
        let status = if feasible { SdpStatus::Optimal } else { SdpStatus::Infeasible };
        let obj = p.objective_at(&x);
        return Ok(finish(p, x, obj, status, 0.0, 0));
    }
    let ipm = interior_point(&reduced, opts);
    let x = reduced.lift(&ipm.y);
    let dual_value = reduced.c0 - ipm.primal_std;
    Ok(finish(p, x, dual_value, ipm.status, ipm.gap, ipm.iterations))
}

fn finish(p: &SdpProblem, x: Vec<f64>, dual_value: f64, status: SdpStatus, gap: f64, iterations: usize) -> SdpSolution {
    SdpSolution {
        objective_value: p.objective_at(&x),
        dual_value,
        status,
        duality_gap: gap,
        max_equality_residual: p.max_equality_residual(&x),
        min_block_eigenvalue: p.min_block_eigenvalue(&x),
        iterations,
        x,
    }
}

/// Independent re-check of a reported optimum.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub passed: bool,
    pub max_equality_residual: f64,
    pub min_block_eigenvalue: f64,
    pub objective: f64,
    pub problems: Vec<String>,
}

/// Recomputes residuals, block spectra and the objective from `s.x` and
/// compares them against ten times the optimality tolerances. The objective
/// must also lie within that slack of the dual bound.
pub fn check_certificate(p: &SdpProblem, s: &SdpSolution) -> CertificateReport {
    let slack = 10.0;
    let mut problems = Vec::new();
    if s.status != SdpStatus::Optimal {
        problems.push(format!("status is {:?}", s.status));
    }
    let residual = p.max_equality_residual(&s.x);
    let min_eig = p.min_block_eigenvalue(&s.x);
    let objective = p.objective_at(&s.x);
    if residual > slack * 1e-8 {
        problems.push(format!("equality residual {residual:.3e}"));
    }
    if min_eig < -slack * 1e-8 {
        problems.push(format!("block eigenvalue {min_eig:.3e}"));
    }
    let scale = 1.0f64.max(objective.abs());
    if (objective - s.objective_value).abs() > slack * 1e-7 * scale {
        problems.push(format!("objective {objective} differs from reported {}", s.objective_value));
    }
    if !(objective - s.dual_value <= slack * 1e-7 * scale) {
        problems.push(format!("objective {objective} exceeds the dual bound {}", s.dual_value));
    }
    CertificateReport {
        passed: problems.is_empty(),
        max_equality_residual: residual,
        min_block_eigenvalue: min_eig,
        objective,
        problems,
    }
}

// ---------------------------------------------------------------------------
// reduction to   max bᵀy  s.t.  C − Σ yⱼ Aⱼ ⪰ 0

struct RealBlock {
    n: usize,
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
}

struct Reduced {
    m: usize,
    blocks: Vec<RealBlock>,
    b: Vec<f64>,
    c0: f64,
    x0: Vec<f64>,
    /// `x = x0 + lift · y`, stored column by column.
    lift_cols: Vec<Vec<f64>>,
}

impl Reduced {
    fn lift(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.x0.clone();
        for (col, &yj) in self.lift_cols.iter().zip(y) {
            axpy(&mut x, yj, col);
        }
        x
    }
}

enum Reduction {
    Ok(Reduced),
    Infeasible(Vec<f64>),
    Unbounded(Vec<f64>),
}

fn to_real(m: &ComplexMatrix, embed: bool) -> Vec<f64> {
    if embed {
        real_embedding(m)
    } else {
        m.data().iter().map(|z| z.re).collect()
    }
}

/// Orthonormal bases of the range and null space of a symmetric PSD Gram
/// matrix, with the range eigenvalues.
fn split_gram(g: &[f64], n: usize, rel: f64) -> (Vec<(f64, Vec<f64>)>, Vec<Vec<f64>>) {
    let e = sym_eigen(g, n);
    let top = e.values.last().copied().unwrap_or(0.0).max(0.0);
    let mut range = Vec::new();
    let mut null = Vec::new();
    for j in 0..n {
        let v: Vec<f64> = (0..n).map(|k| e.vectors[k * n + j]).collect();
        if top > 0.0 && e.values[j] > rel * top {
            range.push((e.values[j], v));
        } else {
            null.push(v);
        }
    }
    (range, null)
}

fn reduce(p: &SdpProblem) -> Reduction {
    let n = p.n_vars;
    // equalities: x0 = A⁺ b, null space of A
    let (x0, null_basis) = if p.equalities.is_empty() {
        (
            vec![0.0; n],
            (0..n).map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect::<Vec<Vec<f64>>>(),
        )
    } else {
        let mut gram = vec![0.0; n * n];
        let mut atb = vec![0.0; n];
        for (a, b) in &p.equalities {
            for r in 0..n {
                atb[r] += a[r] * b;
                for c in 0..n {
                    gram[r * n + c] += a[r] * a[c];
                }
            }
        }
        let (range, null) = split_gram(&gram, n, 1e-12);
        let mut x0 = vec![0.0; n];
        for (lam, v) in &range {
            axpy(&mut x0, dot(v, &atb) / lam, v);
        }
        let bnorm = p.equalities.iter().map(|(_, b)| b * b).sum::<f64>().sqrt();
        let resid = p.max_equality_residual(&x0);
        if resid > 1e-9 * (1.0 + bnorm) {
            return Reduction::Infeasible(x0);
        }
        (x0, null)
    };

    let embed: Vec<bool> =
        p.psd_blocks.iter().map(|b| std::iter::once(&b.constant).chain(&b.coeffs).any(|g| !g.is_real(0.0))).collect();
    let raw: Vec<(usize, Vec<f64>, Vec<Vec<f64>>)> = p
        .psd_blocks
        .iter()
        .zip(&embed)
        .map(|(b, &e)| {
            let d = if e { 2 * b.constant.dim() } else { b.constant.dim() };
            let mut c = to_real(&b.constant, e);
            let gs: Vec<Vec<f64>> = b.coeffs.iter().map(|g| to_real(g, e)).collect();
            for (g, &xi) in gs.iter().zip(&x0) {
                if xi != 0.0 {
                    axpy(&mut c, xi, g);
                }
            }
            // block map restricted to the null space
            let gz: Vec<Vec<f64>> = null_basis
                .iter()
                .map(|v| {
                    let mut acc = vec![0.0; d * d];
                    for (g, &vi) in gs.iter().zip(v) {
                        if vi != 0.0 {
                            axpy(&mut acc, vi, g);
                        }
                    }
                    acc
                })
                .collect();
            (d, c, gz)
        })
        .collect();

    // drop directions that do not move any block
    let r = null_basis.len();
    let mut k = vec![0.0; r * r];
    for (_, _, gz) in &raw {
        for i in 0..r {
            for j in 0..=i {
                let v = dot(&gz[i], &gz[j]);
                k[i * r + j] += v;
                if i != j {
                    k[j * r + i] += v;
                }
            }
        }
    }
    let cz: Vec<f64> = null_basis.iter().map(|v| dot(v, &p.objective)).collect();
    let (range, flat) = split_gram(&k, r, 1e-12);
    let cnorm = norm(&p.objective);
    for w in &flat {
        if dot(w, &cz).abs() > 1e-10 * (1.0 + cnorm) {
            return Reduction::Unbounded(x0);
        }
    }

    // new variables yⱼ with ⟨Aᵢ, Aⱼ⟩ = δᵢⱼ
    let m = range.len();
    let mut lift_cols = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (lam, w) in &range {
        let s = 1.0 / lam.sqrt();
        let mut col = vec![0.0; n];
        for (v, &wi) in null_basis.iter().zip(w) {
            axpy(&mut col, wi * s, v);
        }
        // cᵀx = c0 − bᵀy
        b.push(-dot(&p.objective, &col));
        lift_cols.push(col);
    }
    let blocks = raw
        .into_iter()
        .map(|(d, c, gz)| {
            let a = range
                .iter()
                .map(|(lam, w)| {
                    let s = -1.0 / lam.sqrt();
                    let mut acc = vec![0.0; d * d];
                    for (g, &wi) in gz.iter().zip(w) {
                        axpy(&mut acc, wi * s, g);
                    }
                    acc
                })
                .collect();
            RealBlock { n: d, c, a }
        })
        .collect();
    let c0 = dot(&p.objective, &x0);
    Reduction::Ok(Reduced { m, blocks, b, c0, x0, lift_cols })
}

// ---------------------------------------------------------------------------
// interior point

struct IpmResult {
    y: Vec<f64>,
    /// ⟨C, X⟩ at exit.
    primal_std: f64,
    gap: f64,
    status: SdpStatus,
    iterations: usize,
}

/// 𝒜(Z)ᵢ = Σ_blocks ⟨Aᵢ, Z⟩
fn op_a(blocks: &[RealBlock], z: &[Vec<f64>], m: usize) -> Vec<f64> {
    (0..m).map(|i| blocks.iter().zip(z).map(|(bl, zb)| dot(&bl.a[i], zb)).sum()).collect()
}

/// 𝒜*(y) per block.
fn op_at(blocks: &[RealBlock], y: &[f64]) -> Vec<Vec<f64>> {
    blocks
        .iter()
        .map(|bl| {
            let mut acc = vec![0.0; bl.n * bl.n];
            for (a, &yi) in bl.a.iter().zip(y) {
                axpy(&mut acc, yi, a);
            }
            acc
        })
        .collect()
}

fn inner(x: &[Vec<f64>], s: &[Vec<f64>]) -> f64 {
    x.iter().zip(s).map(|(a, b)| dot(a, b)).sum()
}

fn block_norm(x: &[Vec<f64>]) -> f64 {
    inner(x, x).sqrt()
}

/// `𝒜(X) = b` is only met to this accuracy on degenerate problems; it
/// affects the dual bound, not the feasibility of the returned `x`.
const PRIMAL_FEASIBILITY_FLOOR: f64 = 1e-8;
const STALL_ITERATIONS: usize = 8;

struct Best {
    score: f64,
    y: Vec<f64>,
    pobj: f64,
    gap: f64,
    pinf: f64,
    it: usize,
}

fn interior_point(r: &Reduced, opts: SolverOptions) -> IpmResult {
    let m = r.m;
    let blocks = &r.blocks;
    let ntot: usize = blocks.iter().map(|b| b.n).sum();
    let sqrt_n = (ntot as f64).sqrt();
    let bnorm = norm(&r.b);
    let cnorm = blocks.iter().map(|b| dot(&b.c, &b.c)).sum::<f64>().sqrt();

    // scaled identity start
    let mut xi: f64 = 10.0f64.max(sqrt_n);
    let mut eta: f64 = 10.0f64.max(sqrt_n).max(cnorm);
    for (j, &bj) in r.b.iter().enumerate() {
        let an = blocks.iter().map(|bl| dot(&bl.a[j], &bl.a[j])).sum::<f64>().sqrt();
        xi = xi.max(sqrt_n * (1.0 + bj.abs()) / (1.0 + an));
        eta = eta.max(an);
    }
    let mut x: Vec<Vec<f64>> = blocks.iter().map(|b| identity(b.n, xi)).collect();
    let mut s: Vec<Vec<f64>> = blocks.iter().map(|b| identity(b.n, eta)).collect();
    let mut y = vec![0.0; m];

    let gamma = 0.98;
    let mut status = SdpStatus::MaxIterations;
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    let mut pobj = inner(&blocks.iter().map(|b| b.c.clone()).collect::<Vec<_>>(), &x);
    let mut best: Option<Best> = None;

    for it in 0..opts.max_iterations {
        iterations = it;
        let cmat: Vec<&Vec<f64>> = blocks.iter().map(|b| &b.c).collect();
        pobj = cmat.iter().zip(&x).map(|(c, xb)| dot(c, xb)).sum();
        let dobj = dot(&r.b, &y);
        let ax = op_a(blocks, &x, m);
        let rp: Vec<f64> = r.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let aty = op_at(blocks, &y);
        let rd: Vec<Vec<f64>> = blocks
            .iter()
            .zip(&aty)
            .zip(&s)
            .map(|((bl, at), sb)| bl.c.iter().zip(at).zip(sb).map(|((c, a), s)| c - a - s).collect())
            .collect();
        let xs = inner(&x, &s);
        let mu = xs / ntot as f64;
        gap = (pobj - dobj).abs();
        let pinf = norm(&rp) / (1.0 + bnorm);
        let dinf = block_norm(&rd) / (1.0 + cnorm);
        let gap_tol = opts.tol * 1.0f64.max(dobj.abs());
        let ptol = opts.tol.max(PRIMAL_FEASIBILITY_FLOOR);
        if dinf <= 1e-10 {
            let score = (gap / gap_tol).max(pinf / ptol);
            if best.as_ref().is_none_or(|b| score < b.score) {
                best = Some(Best { score, y: y.clone(), pobj, gap, pinf, it });
            }
        }
        if gap <= gap_tol && pinf <= ptol && dinf <= 1e-10 {
            status = SdpStatus::Optimal;
            break;
        }
        // near the boundary the iterates stop improving well before the
        // iteration cap
        if best.as_ref().is_some_and(|b| it > b.it + STALL_ITERATIONS) {
            break;
        }

        // certificates of infeasibility from diverging iterates
        if pobj < 0.0 && norm(&ax) / -pobj < 1e-9 && block_norm(&x) > 1e6 {
            status = SdpStatus::Infeasible;
            break;
        }
        if dobj > 0.0 && norm(&y) > 1e6 {
            let worst = blocks
                .iter()
                .zip(&aty)
                .map(|(bl, at)| -min_eig(&at.iter().map(|v| -v).collect::<Vec<_>>(), bl.n))
                .fold(f64::NEG_INFINITY, f64::max);
            if worst.max(0.0) / dobj < 1e-9 {
                status = SdpStatus::Infeasible;
                break;
            }
        }
        if block_norm(&x) > 1e14 || norm(&y) > 1e14 {
            status = SdpStatus::Infeasible;
            break;
        }

        let lx: Option<Vec<Vec<f64>>> = blocks.iter().zip(&x).map(|(b, xb)| cholesky_opt(xb, b.n)).collect();
        let ls: Option<Vec<Vec<f64>>> = blocks.iter().zip(&s).map(|(b, sb)| cholesky_opt(sb, b.n)).collect();
        let (Some(lx), Some(ls)) = (lx, ls) else { break };
        let sinv: Vec<Vec<f64>> = blocks.iter().zip(&ls).map(|(b, l)| chol_inverse(l, b.n)).collect();

        // Schur complement Mᵢⱼ = Σ ⟨Aᵢ, X Aⱼ S⁻¹⟩
        let mut schur = vec![0.0; m * m];
        for (bi, bl) in blocks.iter().enumerate() {
            let n = bl.n;
            for j in 0..m {
                let t = matmul(&matmul(&x[bi], &bl.a[j], n), &sinv[bi], n);
                for i in 0..=j {
                    schur[i * m + j] += dot(&bl.a[i], &t);
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                schur[i * m + j] = schur[j * m + i];
            }
        }
        let Some(lm) = robust_cholesky(&schur, m) else { break };

        let xrds: Vec<Vec<f64>> =
            blocks.iter().enumerate().map(|(bi, bl)| matmul(&matmul(&x[bi], &rd[bi], bl.n), &sinv[bi], bl.n)).collect();
        let a_xrds = op_a(blocks, &xrds, m);
        let a_sinv = op_a(blocks, &sinv, m);

        let direction = |sigma_mu: f64, extra: Option<&[Vec<f64>]>| {
            let mut rhs: Vec<f64> = (0..m).map(|i| r.b[i] - sigma_mu * a_sinv[i] + a_xrds[i]).collect();
            if let Some(e) = extra {
                let ae = op_a(blocks, e, m);
                axpy(&mut rhs, 1.0, &ae);
            }
            let dy = chol_solve(&lm, m, &rhs);
            let atdy = op_at(blocks, &dy);
            let ds: Vec<Vec<f64>> =
                rd.iter().zip(&atdy).map(|(rdb, a)| rdb.iter().zip(a).map(|(p, q)| p - q).collect()).collect();
            let dx: Vec<Vec<f64>> = blocks
                .iter()
                .enumerate()
                .map(|(bi, bl)| {
                    let n = bl.n;
                    let mut d = matmul(&matmul(&x[bi], &ds[bi], n), &sinv[bi], n);
                    for v in d.iter_mut() {
                        *v = -*v;
                    }
                    axpy(&mut d, sigma_mu, &sinv[bi]);
                    axpy(&mut d, -1.0, &x[bi]);
                    if let Some(e) = extra {
                        axpy(&mut d, -1.0, &e[bi]);
                    }
                    symmetrize(&mut d, n);
                    d
                })
                .collect();
            (dx, dy, ds)
        };
        let steps = |dx: &[Vec<f64>], ds: &[Vec<f64>], factor: f64| {
            let ap = blocks
                .iter()
                .enumerate()
                .map(|(bi, b)| max_step(&lx[bi], &dx[bi], b.n, f64::INFINITY))
                .fold(f64::INFINITY, f64::min);
            let ad = blocks
                .iter()
                .enumerate()
                .map(|(bi, b)| max_step(&ls[bi], &ds[bi], b.n, f64::INFINITY))
                .fold(f64::INFINITY, f64::min);
            ((factor * ap).min(1.0), (factor * ad).min(1.0))
        };

        // predictor
        let (dxa, _, dsa) = direction(0.0, None);
        let (ap, ad) = steps(&dxa, &dsa, 1.0);
        let xa: Vec<Vec<f64>> =
            x.iter().zip(&dxa).map(|(xb, d)| xb.iter().zip(d).map(|(p, q)| p + ap * q).collect()).collect();
        let sa: Vec<Vec<f64>> =
            s.iter().zip(&dsa).map(|(sb, d)| sb.iter().zip(d).map(|(p, q)| p + ad * q).collect()).collect();
        let mu_aff = inner(&xa, &sa) / ntot as f64;
        let sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powi(3) } else { 0.0 };

        // corrector
        let second: Vec<Vec<f64>> = blocks
            .iter()
            .enumerate()
            .map(|(bi, bl)| matmul(&matmul(&dxa[bi], &dsa[bi], bl.n), &sinv[bi], bl.n))
            .collect();
        let (dx, dy, ds) = direction(sigma * mu, Some(&second));
        let (ap, ad) = steps(&dx, &ds, gamma);
        for (xb, d) in x.iter_mut().zip(&dx) {
            axpy(xb, ap, d);
        }
        for (sb, d) in s.iter_mut().zip(&ds) {
            axpy(sb, ad, d);
        }
        axpy(&mut y, ad, &dy);
        iterations = it + 1;
    }
    if status == SdpStatus::MaxIterations {
        // accept the best iterate if it is within a decade of the tolerances
        if let Some(b) = best.filter(|b| b.score <= 10.0 && b.gap <= 1e-7 && b.pinf <= 1e-7) {
            return IpmResult { y: b.y, primal_std: b.pobj, gap: b.gap, status: SdpStatus::Optimal, iterations };
        }
    }
    IpmResult { y, primal_std: pobj, gap, status, iterations }
}

fn cholesky_opt(a: &[f64], n: usize) -> Option<Vec<f64>> {
    crate::qcore::eigen::cholesky(a, n)
}
