//! Parameter sweeps producing one row of bounds per `(p, F)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{psi00, PauliLabel};
use crate::states::opt_state;
use crate::swap::postselected_swap;

use super::curves::{f_min_sdp_with, CurveOptions};
use super::{f_max, f_min_analytic};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSweepRow {
    pub p: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub f_max: f64,
    pub f_min_analytic: f64,
    pub f_min_sdp: f64,
    pub delta_star: f64,
    /// Bell-diagonal region `[F², F² + (1 − F)²]`.
    pub bd_lower: f64,
    pub bd_upper: f64,
    /// `F² + (1 − F)²/3`
    pub f_werner: f64,
    /// Lowest outcome fidelity of `ρ_opt(p, F)⊗²`, an achievable witness
    /// above the true minimum.
    pub psi_min_outcome: f64,
}

impl BoundSweepRow {
    pub const CSV_HEADER: &'static str =
        "p,F,f_max,f_min_analytic,f_min_sdp,delta_star,bd_lower,bd_upper,f_werner,psi_min_outcome";

    pub fn values(&self) -> [f64; 10] {
        [
            self.p,
            self.f,
            self.f_max,
            self.f_min_analytic,
            self.f_min_sdp,
            self.delta_star,
            self.bd_lower,
            self.bd_upper,
            self.f_werner,
            self.psi_min_outcome,
        ]
    }

    /// Violations of
    /// `f_min_analytic ≤ f_min_sdp ≤ bd_lower ≤ f_werner ≤ bd_upper ≤ f_max`
    /// and `f_min_sdp ≤ psi_min_outcome ≤ f_max`.
    pub fn ordering_violations(&self, slack: f64) -> Vec<String> {
        let chain = [
            ("f_min_analytic", self.f_min_analytic),
            ("f_min_sdp", self.f_min_sdp),
            ("bd_lower", self.bd_lower),
            ("f_werner", self.f_werner),
            ("bd_upper", self.bd_upper),
            ("f_max", self.f_max),
        ];
        let mut out: Vec<String> = chain
            .windows(2)
            .filter(|w| w[0].1 > w[1].1 + slack)
            .map(|w| format!("{} = {} > {} = {}", w[0].0, w[0].1, w[1].0, w[1].1))
            .collect();
        if self.psi_min_outcome < self.f_min_sdp - slack || self.psi_min_outcome > self.f_max + slack {
            out.push(format!("psi_min_outcome = {} outside [f_min_sdp, f_max]", self.psi_min_outcome));
        }
        out
    }
}

fn psi_min_outcome(p: f64, f: f64) -> Result<f64> {
    let rho = opt_state(p, f)?;
    let mut worst = f64::INFINITY;
    for l in PauliLabel::ALL {
        let o = postselected_swap(&rho, &rho, l)?;
        if let Some(s) = &o.state {
            worst = worst.min(s.fidelity_to_pure(&psi00())?);
        }
    }
    Ok(worst)
}

pub fn bound_row(p: f64, f: f64) -> Result<BoundSweepRow> {
    bound_row_with(p, f, &CurveOptions::default())
}

pub fn bound_row_with(p: f64, f: f64, opts: &CurveOptions) -> Result<BoundSweepRow> {
    let (f_min_sdp, delta_star) = f_min_sdp_with(p, f, opts)?;
    let g = 1.0 - f;
    Ok(BoundSweepRow {
        p,
        f,
        f_max: f_max(p, f)?,
        f_min_analytic: f_min_analytic(p, f)?,
        f_min_sdp,
        delta_star,
        bd_lower: f * f,
        bd_upper: f * f + g * g,
        f_werner: f * f + g * g / 3.0,
        psi_min_outcome: psi_min_outcome(p, f)?,
    })
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Domain("a sweep needs at least one step".into()));
    }
    if hi < lo {
        return Err(Error::Domain(format!("empty range [{lo}, {hi}]")));
    }
    Ok(if steps == 1 { vec![lo] } else { (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect() })
}

/// Fixed `F`, `p` uniform on `[0, F]`.
pub fn sweep_p(f: f64, steps: usize, opts: &CurveOptions) -> Result<Vec<BoundSweepRow>> {
    let ps = grid(0.0, f, steps)?;
    ps.par_iter().map(|&p| bound_row_with(p.min(f), f, opts)).collect()
}

/// Fixed `p`, `F` uniform on `[f_lo, f_hi]`.
pub fn sweep_f(p: f64, f_lo: f64, f_hi: f64, steps: usize, opts: &CurveOptions) -> Result<Vec<BoundSweepRow>> {
    let fs = grid(f_lo, f_hi, steps)?;
    fs.par_iter().map(|&f| bound_row_with(p, f, opts)).collect()
}
