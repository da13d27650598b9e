//! One-dimensional optimization of the relaxed swap fidelity over the swap
//! probability `δ`, and the rate–fidelity curves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sdp::{solve, SdpSolution, SdpStatus};

use super::problem::{
    check_pf, delta_of, delta_tilde, f_tilde, fidelity_of, symmetrized_family, Family, HermitianBasis, Sense, Target,
};

#[derive(Debug, Clone, Copy)]
pub struct CurveOptions {
    pub basis: HermitianBasis,
    pub solver_tol: f64,
    pub grid_points: usize,
    /// Width of the final golden-section bracket in `δ`.
    pub delta_tol: f64,
    /// Relative inset of the `δ̃` endpoints, where the feasible set has no
    /// interior and the solver needs a little room.
    pub endpoint_inset: f64,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self { basis: HermitianBasis::Real, solver_tol: 1e-9, grid_points: 100, delta_tol: 1e-6, endpoint_inset: 1e-6 }
    }
}

/// `true` when `F̃ = 1` (or `p = 1`): the noise is pinned to `Ψ00` and every
/// quantity is known in closed form, `δ = 1/4` and `F' = 1`.
fn pinned(p: f64, f: f64) -> bool {
    p >= 1.0 - 1e-12 || f_tilde(p, f) >= 1.0 - 1e-12
}

pub(crate) fn solve_target(
    fam: &Family,
    target: Target,
    ft: f64,
    dt: Option<f64>,
    tol: f64,
) -> Result<(f64, SdpSolution)> {
    let prob = fam.problem(target, ft.clamp(0.0, 1.0), dt);
    let sol = solve(&prob, tol)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Solver(format!(
            "{target:?} at F̃ = {ft}, δ̃ = {dt:?}: status {:?} after {} iterations",
            sol.status, sol.iterations
        )));
    }
    let value = match target {
        Target::Fidelity(Sense::Max) | Target::SwapProbability(Sense::Max) => -sol.objective_value,
        _ => sol.objective_value,
    };
    Ok((value, sol))
}

/// Feasible `δ̃` interval of the relaxation.
fn tilde_region(p: f64, f: f64, opts: &CurveOptions) -> Result<(f64, f64)> {
    let fam = symmetrized_family(opts.basis);
    let ft = f_tilde(p, f);
    let lo = solve_target(fam, Target::SwapProbability(Sense::Min), ft, None, opts.solver_tol)?.0;
    let hi = solve_target(fam, Target::SwapProbability(Sense::Max), ft, None, opts.solver_tol)?.0;
    Ok((lo.max(0.0), hi.min(1.0)))
}

/// `[δ_min, δ_max]`: the range of swap probabilities of outcome `Ψ00`
/// compatible with `(p, F)` under the PPT relaxation.
pub fn delta_region(p: f64, f: f64) -> Result<(f64, f64)> {
    delta_region_with(p, f, &CurveOptions::default())
}

pub fn delta_region_with(p: f64, f: f64, opts: &CurveOptions) -> Result<(f64, f64)> {
    check_pf(p, f)?;
    if pinned(p, f) {
        return Ok((0.25, 0.25));
    }
    let (lo, hi) = tilde_region(p, f, opts).map_err(|e| Error::Solver(format!("delta_region({p}, {f}): {e}")))?;
    Ok((delta_of(p, lo), delta_of(p, hi)))
}

/// Relaxed optimum of the postselected fidelity at swap probability `δ`.
pub fn relaxed_fidelity(p: f64, f: f64, delta: f64, sense: Sense, opts: &CurveOptions) -> Result<f64> {
    check_pf(p, f)?;
    if pinned(p, f) {
        return Ok(1.0);
    }
    let fam = symmetrized_family(opts.basis);
    let (h, _) =
        solve_target(fam, Target::Fidelity(sense), f_tilde(p, f), Some(delta_tilde(p, delta)), opts.solver_tol)?;
    Ok(fidelity_of(p, f, delta, h))
}

/// Evaluation points in `δ̃`, pulled inside the region by the inset.
struct Region {
    lo: f64,
    hi: f64,
}

impl Region {
    fn new(lo: f64, hi: f64, inset: f64) -> Self {
        let pad = inset * (hi - lo).max(1e-3);
        if hi - lo <= 2.0 * pad {
            let mid = 0.5 * (lo + hi);
            return Self { lo: mid, hi: mid };
        }
        Self { lo: lo + pad, hi: hi - pad }
    }

    fn grid(&self, n: usize) -> Vec<f64> {
        if n <= 1 || self.hi == self.lo {
            return vec![self.lo];
        }
        (0..n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Minimizes `g` over a grid and refines the best cell by golden section.
fn grid_then_golden(grid: &[f64], tol: f64, mut g: impl FnMut(f64) -> Result<Option<f64>>) -> Result<(f64, f64)> {
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        values.push(g(x)?);
    }
    let (best_i, best) = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, b)) if b <= v => acc,
            _ => Some((i, v)),
        })
        .ok_or_else(|| Error::Solver("no feasible evaluation point".into()))?;
    let mut best = (best, grid[best_i]);
    if grid.len() < 3 {
        return Ok(best);
    }
    let mut a = grid[best_i.saturating_sub(1)];
    let mut b = grid[(best_i + 1).min(grid.len() - 1)];
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = g(c)?.unwrap_or(f64::INFINITY);
    let mut fd = g(d)?.unwrap_or(f64::INFINITY);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c)?.unwrap_or(f64::INFINITY);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d)?.unwrap_or(f64::INFINITY);
        }
    }
    for (v, x) in [(fc, c), (fd, d)] {
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Outer optimization over `δ` for either sense; returns `(value, δ*)`.
fn optimize_over_delta(p: f64, f: f64, sense: Sense, opts: &CurveOptions) -> Result<(f64, f64)> {
    check_pf(p, f)?;
    if pinned(p, f) {
        return Ok((1.0, 0.25));
    }
    let fam = symmetrized_family(opts.basis);
    let ft = f_tilde(p, f);
    let (lo, hi) = tilde_region(p, f, opts)?;
    let region = Region::new(lo, hi, opts.endpoint_inset);
    let sign = if sense == Sense::Min { 1.0 } else { -1.0 };
    // optimize in δ̃ (an affine image of δ); δ-tolerance converts by (1 − p)²
    let scale = (1.0 - p) * (1.0 - p);
    let eval = |dt: f64| -> Result<Option<f64>> {
        let delta = delta_of(p, dt);
        if delta <= 1e-12 {
            return Ok(None);
        }
        let (h, _) = solve_target(fam, Target::Fidelity(sense), ft, Some(dt), opts.solver_tol)
            .map_err(|e| Error::Solver(format!("({p}, {f}) at δ = {delta}: {e}")))?;
        Ok(Some(sign * fidelity_of(p, f, delta, h)))
    };
    let (v, dt) = grid_then_golden(&region.grid(opts.grid_points), opts.delta_tol / scale, eval)?;
    Ok((sign * v, delta_of(p, dt)))
}

/// SDP lower bound on the postselected swap fidelity and its minimizing `δ`.
pub fn f_min_sdp(p: f64, f: f64) -> Result<(f64, f64)> {
    f_min_sdp_with(p, f, &CurveOptions::default())
}

pub fn f_min_sdp_with(p: f64, f: f64, opts: &CurveOptions) -> Result<(f64, f64)> {
    optimize_over_delta(p, f, Sense::Min, opts)
}

/// Max-sense analog of [`f_min_sdp`]; returns `(value, δ*)`.
pub fn f_max_sdp(p: f64, f: f64) -> Result<(f64, f64)> {
    f_max_sdp_with(p, f, &CurveOptions::default())
}

pub fn f_max_sdp_with(p: f64, f: f64, opts: &CurveOptions) -> Result<(f64, f64)> {
    optimize_over_delta(p, f, Sense::Max, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub delta: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Lower and upper relaxed fidelity on a uniform grid of the feasible `δ`
/// range, endpoints included (up to the inset).
pub fn fidelity_vs_delta(p: f64, f: f64, n_points: usize) -> Result<Vec<CurvePoint>> {
    fidelity_vs_delta_with(p, f, n_points, &CurveOptions::default())
}

pub fn fidelity_vs_delta_with(p: f64, f: f64, n_points: usize, opts: &CurveOptions) -> Result<Vec<CurvePoint>> {
    check_pf(p, f)?;
    if n_points == 0 {
        return Err(Error::Domain("n_points must be positive".into()));
    }
    if pinned(p, f) {
        return Ok(vec![CurvePoint { delta: 0.25, lower: 1.0, upper: 1.0 }]);
    }
    let fam = symmetrized_family(opts.basis);
    let ft = f_tilde(p, f);
    let (lo, hi) = tilde_region(p, f, opts)?;
    let region = Region::new(lo, hi, opts.endpoint_inset);
    let mut out = Vec::with_capacity(n_points);
    for dt in region.grid(n_points) {
        let delta = delta_of(p, dt);
        if delta <= 1e-12 {
            continue;
        }
        let h_lo = solve_target(fam, Target::Fidelity(Sense::Min), ft, Some(dt), opts.solver_tol)?.0;
        let h_hi = solve_target(fam, Target::Fidelity(Sense::Max), ft, Some(dt), opts.solver_tol)?.0;
        out.push(CurvePoint { delta, lower: fidelity_of(p, f, delta, h_lo), upper: fidelity_of(p, f, delta, h_hi) });
    }
    Ok(out)
}
