//! Numerical verification suites shared by `bellchain selftest` and the
//! acceptance tests. Each suite reports named residuals next to the limit
//! they must stay under; sizes are parameters so the CLI can run small
//! versions quickly.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    build_unsymmetrized_sdp, delta_region, f_max, f_max_sdp, f_min_sdp, f_min_sdp_with, fidelity_vs_delta,
    relaxed_fidelity, sweep_f, sweep_p, BoundSweepRow, CurveOptions, HermitianBasis, Sense, SymmetrizedProblem,
};
use crate::chain::{
    bd_chain, builtin_protocol, chain_fidelity_bounds, perfect_links_check, random_protocol, run_chain_nonpostselected,
    validate_protocol, werner_chain_fidelity, BuiltinProtocol, Syndrome,
};
use crate::error::Result;
use crate::qcore::{psi00, ComplexMatrix, DensityOperator, PauliLabel};
use crate::qkd::{binary_entropy, chain_skf, SkfMode};
use crate::sdp::{check_certificate, solve};
use crate::states::{bd_coeffs_of, bd_twirl, make_named, opt_state, random, BellDiagonalCoeffs, NamedState};
use crate::swap::{bd_swap, postselected_swap, swap_stats_raw};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit }
    }

    /// NaN fails.
    pub fn passed(&self) -> bool {
        self.value <= self.limit
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), checks: vec![], notes: vec![], seconds: 0.0 }
    }

    fn check(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.checks.push(Check::new(name, value, limit));
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }
}

fn timed(name: &str, body: impl FnOnce(&mut SuiteReport) -> Result<()>) -> SuiteReport {
    let t = Instant::now();
    let mut r = SuiteReport::new(name);
    if let Err(e) = body(&mut r) {
        r.notes.push(format!("error: {e}"));
        r.check("error", f64::INFINITY, 0.0);
    }
    r.seconds = t.elapsed().as_secs_f64();
    r
}

/// Independent generator for each suite so that sizes and suite order do not
/// shift each other's samples.
pub fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bell-diagonal with `λ00 ≥ ½`, by rejection.
fn bd_above_half(rng: &mut impl Rng) -> BellDiagonalCoeffs {
    loop {
        let c = random::bd_coeffs(rng);
        if c.fidelity() >= 0.5 {
            return c;
        }
    }
}

fn fidelity(rho: &DensityOperator) -> Result<f64> {
    rho.fidelity_to_pure(&psi00())
}

/// Closed-form Bell-diagonal swap against the full postselected swap.
pub fn bd_swap_exactness(seed: u64, pairs: usize) -> SuiteReport {
    timed("bd_swap_exactness", |r| {
        let mut rng = suite_rng(seed, 1);
        let (mut coeff_err, mut prob_err) = (0.0f64, 0.0f64);
        for _ in 0..pairs {
            let (l, m) = (random::bd_coeffs(&mut rng), random::bd_coeffs(&mut rng));
            let expect = bd_swap(&l, &m);
            let (r1, r2) = (l.reconstruct(), m.reconstruct());
            for label in PauliLabel::ALL {
                let o = postselected_swap(&r1, &r2, label)?;
                prob_err = prob_err.max((o.probability - 0.25).abs());
                let state = o.state.expect("Bell-diagonal outcomes have probability 1/4");
                coeff_err = coeff_err.max(bd_coeffs_of(state.matrix()).max_abs_diff(&expect));
                coeff_err = coeff_err.max(state.matrix().max_abs_diff(&expect.matrix()));
            }
        }
        r.check("max |λ' − bd_swap|", coeff_err, 1e-12);
        r.check("max |p_ij − 1/4|", prob_err, 1e-12);
        Ok(())
    })
}

/// Twirl of the syndrome-averaged chain output against the Bell-diagonal fold
/// of the twirled links, for random links and random valid protocols.
pub fn chain_equivalence(seed: u64, ns: &[usize], tuples: usize, protocols: usize) -> SuiteReport {
    timed("chain_equivalence", |r| {
        let mut rng = suite_rng(seed, 2);
        let mut worst = 0.0f64;
        let mut invalid = 0usize;
        for &n in ns {
            for t in 0..tuples {
                let links: Vec<DensityOperator> = (0..n).map(|_| random::density(&mut rng)).collect();
                let twirled = links.iter().map(bd_twirl).collect::<Result<Vec<_>>>()?;
                let expect = bd_chain(&twirled);
                for _ in 0..protocols {
                    let p = random_protocol(&mut rng, n);
                    // full validation simulates perfect links on 2N qubits; the
                    // residual condition alone is cheap
                    let ok = if t == 0 {
                        validate_protocol(&p).is_valid()
                    } else {
                        Syndrome::all(n).all(|s| p.residual(&s).is_identity())
                    };
                    if !ok {
                        invalid += 1;
                    }
                    let out = run_chain_nonpostselected(&links, &p)?;
                    worst = worst.max(bd_twirl(&out)?.max_abs_diff(&expect));
                }
            }
        }
        r.check("max ‖B(Λ_P(ρ)) − bd_chain‖_max", worst, 1e-10);
        r.check("invalid random protocols", invalid as f64, 0.0);
        Ok(())
    })
}

/// `opt(p, F)⊗²` reaches `1 − 2p(1 − F)` at outcome `Z` on a `steps × steps`
/// grid with `p ≤ F`.
pub fn saturation(steps: usize) -> SuiteReport {
    timed("fmax_saturation", |r| {
        let mut worst = 0.0f64;
        for i in 0..steps {
            let f = (i + 1) as f64 / steps as f64;
            for j in 0..steps {
                let p = if steps == 1 { f } else { (f * j as f64 / (steps - 1) as f64).min(f) };
                let rho = opt_state(p, f)?;
                let m = rho.matrix();
                let (_, fz) = swap_stats_raw(m, m, PauliLabel::Z);
                worst = worst.max((fz - f_max(p, f)?).abs());
            }
        }
        r.check("max |F'_Z − (1 − 2p(1−F))|", worst, 1e-10);
        Ok(())
    })
}

/// Product lower bound and parity upper bound on random Bell-diagonal chains
/// with `F_k ≥ ½`, plus equality for matched rank-two chains.
pub fn chain_bounds(seed: u64, chains: usize) -> SuiteReport {
    timed("chain_bounds", |r| {
        let mut rng = suite_rng(seed, 3);
        let protocol: Vec<_> =
            (2..=5).map(|n| builtin_protocol(BuiltinProtocol::Sequential, n)).collect::<Result<_>>()?;
        let (mut below, mut above, mut tight) = (0.0f64, 0.0f64, 0.0f64);
        // smallest F' − ΠF_k seen for N > 2, recorded only
        let mut closest = f64::INFINITY;
        for _ in 0..chains {
            let n = rng.gen_range(2..=5);
            let coeffs: Vec<BellDiagonalCoeffs> = (0..n).map(|_| bd_above_half(&mut rng)).collect();
            let links: Vec<DensityOperator> = coeffs.iter().map(BellDiagonalCoeffs::reconstruct).collect();
            let fids: Vec<f64> = coeffs.iter().map(BellDiagonalCoeffs::fidelity).collect();
            let f = fidelity(&run_chain_nonpostselected(&links, &protocol[n - 2])?)?;
            let (lo, hi) = chain_fidelity_bounds(&fids)?;
            below = below.max(lo - f);
            if n > 2 {
                closest = closest.min(f - lo);
            }
            above = above.max(f - hi);

            let matched: Vec<DensityOperator> =
                fids.iter().map(|&fk| BellDiagonalCoeffs { lambda: [fk, 1.0 - fk, 0.0, 0.0] }.reconstruct()).collect();
            let fm = fidelity(&run_chain_nonpostselected(&matched, &protocol[n - 2])?)?;
            tight = tight.max((fm - hi).abs());
        }
        r.check("max (ΠF_k − F')", below, 1e-10);
        r.check("max (F' − upper)", above, 1e-10);
        r.check("max |F'_rank2 − upper|", tight, 1e-12);
        r.notes.push(format!("min F' − ΠF_k over N > 2: {closest:.3e}"));
        Ok(())
    })
}

/// `|F' − F'_W| ≤ 2·C(N,2)·ε²` for random near-perfect links.
pub fn werner_accuracy(seed: u64, chains: usize, eps: f64) -> SuiteReport {
    timed("werner_accuracy", |r| {
        let mut rng = suite_rng(seed, 4);
        let mut ratio = 0.0f64;
        for _ in 0..chains {
            let n = rng.gen_range(2..=5);
            let infid: Vec<f64> = (0..n).map(|_| eps * rng.gen::<f64>()).collect();
            let links: Vec<DensityOperator> =
                infid.iter().map(|&e| random::density_with_fidelity(&mut rng, 1.0 - e)).collect();
            let p = random_protocol(&mut rng, n);
            let fids = links.iter().map(fidelity).collect::<Result<Vec<_>>>()?;
            let f = fidelity(&run_chain_nonpostselected(&links, &p)?)?;
            let e = infid.iter().cloned().fold(0.0, f64::max);
            let bound = (n * (n - 1)) as f64 * e * e;
            let err = (f - werner_chain_fidelity(&fids)).abs();
            if bound > 0.0 {
                ratio = ratio.max(err / bound);
            } else if err > 1e-12 {
                ratio = f64::INFINITY;
            }
        }
        r.check("max |F' − F'_W| / (2·C(N,2)·ε²)", ratio, 1.0);
        Ok(())
    })
}

/// Built-in and random protocols validate, and (up to four links, where the
/// full tensor is cheap) map perfect links to `Ψ00`.
pub fn protocols(seed: u64) -> SuiteReport {
    timed("protocols", |r| {
        let mut rng = suite_rng(seed, 5);
        let mut bad = 0usize;
        for n in 2..=5 {
            for kind in [BuiltinProtocol::Sequential, BuiltinProtocol::CorrectAtEnd] {
                let p = builtin_protocol(kind, n)?;
                if !validate_protocol(&p).is_valid() || (n <= 4 && !perfect_links_check(&p)) {
                    bad += 1;
                }
            }
            for _ in 0..4 {
                let p = random_protocol(&mut rng, n);
                if !validate_protocol(&p).is_valid() || (n <= 4 && !perfect_links_check(&p)) {
                    bad += 1;
                }
            }
        }
        r.check("protocols failing validation", bad as f64, 0.0);
        Ok(())
    })
}

/// Key-rate curves for the opt link and the r-state link over `n ∈ [2, n_max]`.
pub fn qkd_reproduction(n_max: usize) -> SuiteReport {
    timed("qkd_reproduction", |r| {
        let opt = make_named(&NamedState::Opt { p: 0.5, f: 0.95 })?;
        let rs = make_named(&NamedState::RState { p: 0.95 })?;
        let (mut closed, mut post_gap, mut rs_gap) = (0.0f64, 0.0f64, 0.0f64);
        for n in 2..=n_max {
            let np = chain_skf(&opt, n, SkfMode::Nonpostselected)?;
            let expect = 1.0 - binary_entropy(0.5 - 0.5 * 0.9f64.powi(n as i32));
            closed = closed.max((np - expect).abs());
            post_gap = post_gap.max(np - chain_skf(&opt, n, SkfMode::Postselected)?);
            let rp = chain_skf(&rs, n, SkfMode::Postselected)?;
            rs_gap = rs_gap.max((rp - chain_skf(&rs, n, SkfMode::BdApprox)?).abs());
        }
        let w3 = chain_skf(&opt, 3, SkfMode::WernerApprox)?;
        let w4 = chain_skf(&opt, 4, SkfMode::WernerApprox)?;
        r.check("max |SKF_np − (1 − h(½ − ½·0.9ⁿ))|", closed, 1e-9);
        r.check("max (SKF_np − SKF_post)", post_gap, 0.0);
        r.check("SKF_Werner(n=3) not positive", if w3 > 0.0 { 0.0 } else { 1.0 }, 0.0);
        r.check("|SKF_Werner(n=4)|", w4.abs(), 0.0);
        r.check("r-state max |SKF_post − SKF_bd|", rs_gap, 0.01);
        Ok(())
    })
}

/// Certificates of the symmetrized SDP at a few `(p, F, δ)`.
pub fn sdp_certificates(points: &[(f64, f64)]) -> SuiteReport {
    timed("sdp_certificates", |r| {
        let mut failed = 0usize;
        for &(p, f) in points {
            let (lo, hi) = delta_region(p, f)?;
            for delta in [lo + 0.3 * (hi - lo), lo + 0.7 * (hi - lo)] {
                for sense in [Sense::Min, Sense::Max] {
                    let prob = SymmetrizedProblem::new(p, f, delta, sense, HermitianBasis::Real)?.to_sdp();
                    let sol = solve(&prob, 1e-9)?;
                    let cert = check_certificate(&prob, &sol);
                    if !cert.passed {
                        failed += 1;
                        r.notes.push(format!("({p}, {f}, {delta}, {sense:?}): {}", cert.problems.join("; ")));
                    }
                }
            }
        }
        r.check("failed certificates", failed as f64, 0.0);
        Ok(())
    })
}

/// Symmetry-reduced optimum against the problem over all Hermitian `σ`, on
/// `p_values × f_values ×` interior `δ` fractions.
pub fn symmetry_reduction(p_fracs: &[f64], f_values: &[f64], delta_fracs: &[f64]) -> SuiteReport {
    timed("symmetrized_vs_unsymmetrized", |r| {
        let mut cases = vec![];
        for &f in f_values {
            for &pf in p_fracs {
                let p = pf * f;
                let (lo, hi) = delta_region(p, f)?;
                for &df in delta_fracs {
                    for sense in [Sense::Min, Sense::Max] {
                        cases.push((p, f, lo + df * (hi - lo), sense));
                    }
                }
            }
        }
        let deltas = cases
            .par_iter()
            .map(|&(p, f, delta, sense)| -> Result<f64> {
                let sym = relaxed_fidelity(p, f, delta, sense, &CurveOptions::default())?;
                let prob = build_unsymmetrized_sdp(p, f, delta, sense, HermitianBasis::Full)?;
                let sol = solve(&prob, 1e-9)?;
                let h = if sense == Sense::Max { -sol.objective_value } else { sol.objective_value };
                let full = crate::bounds::fidelity_of(p, f, delta, h);
                Ok((sym - full).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        r.check("max |F'_sym − F'_full|", deltas.iter().cloned().fold(0.0, f64::max), 1e-6);
        r.notes.push(format!("{} problems", deltas.len()));
        Ok(())
    })
}

/// `f_max_sdp` against `1 − 2p(1 − F)` with `p = F·k/steps`, `k = 1..=steps`.
pub fn sdp_tightness(f_values: &[f64], steps: usize) -> SuiteReport {
    timed("sdp_upper_tightness", |r| {
        let grid: Vec<(f64, f64)> = f_values
            .iter()
            .flat_map(|&f| (1..=steps).map(move |k| ((f * k as f64 / steps as f64).min(f), f)))
            .collect();
        let out = grid
            .par_iter()
            .map(|&(p, f)| -> Result<(f64, f64)> {
                let (v, d) = f_max_sdp(p, f)?;
                Ok(((v - f_max(p, f)?).abs(), (d - 0.25).abs()))
            })
            .collect::<Result<Vec<_>>>()?;
        r.check("max |f_max_sdp − f_max|", out.iter().map(|x| x.0).fold(0.0, f64::max), 1e-5);
        r.check("max |δ* − 1/4|", out.iter().map(|x| x.1).fold(0.0, f64::max), 1e-4);
        Ok(())
    })
}

/// Rate–fidelity curve endpoints at `p = 0`.
pub fn rate_fidelity_endpoints(f_values: &[f64], n_points: usize) -> SuiteReport {
    timed("rate_fidelity_endpoints", |r| {
        let (mut flat, mut ends) = (0.0f64, 0.0f64);
        for &f in f_values {
            let curve = fidelity_vs_delta(0.0, f, n_points)?;
            for c in curve.iter().filter(|c| c.delta <= 0.25) {
                flat = flat.max((c.upper - 1.0).abs());
            }
            for c in [curve.first(), curve.last()].into_iter().flatten() {
                ends = ends.max((c.upper - c.lower).abs());
            }
        }
        r.check("max |upper − 1| for δ ≤ 1/4", flat, 1e-5);
        r.check("max |upper − lower| at the endpoints", ends, 1e-4);
        Ok(())
    })
}

/// Sampled decompositions `ρ_i = pΨ00 + (1 − p)σ_i` with `F(σ_i) = F̃` land
/// inside `[f_min_sdp, f_max]` at outcome `Ψ00`.
pub fn monte_carlo_sandwich(seed: u64, f_values: &[f64], p_steps: usize, samples: usize) -> SuiteReport {
    timed("monte_carlo_sandwich", |r| {
        let grid: Vec<(usize, f64, f64)> = f_values
            .iter()
            .flat_map(|&f| (0..p_steps).map(move |k| (f * k as f64 / p_steps as f64, f)))
            .enumerate()
            .map(|(i, (p, f))| (i, p, f))
            .collect();
        let out = grid
            .par_iter()
            .map(|&(i, p, f)| -> Result<(f64, f64)> {
                let mut rng = suite_rng(seed, 100 + i as u64);
                let (lo, _) = f_min_sdp(p, f)?;
                let hi = f_max(p, f)?;
                let ft = (f - p) / (1.0 - p);
                let psi = ComplexMatrix::projector(&psi00()).scale(p);
                let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
                for _ in 0..samples {
                    let s1 = random::density_with_fidelity(&mut rng, ft).into_matrix();
                    let s2 = random::density_with_fidelity(&mut rng, ft).into_matrix();
                    let r1 = &psi + &s1.scale(1.0 - p);
                    let r2 = &psi + &s2.scale(1.0 - p);
                    let (prob, fid) = swap_stats_raw(&r1, &r2, PauliLabel::I);
                    if prob > 1e-12 {
                        below = below.max(lo - fid);
                        above = above.max(fid - hi);
                    }
                }
                Ok((below, above))
            })
            .collect::<Result<Vec<_>>>()?;
        r.check("max (f_min_sdp − F'_00)", out.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max), 1e-6);
        r.check("max (F'_00 − f_max)", out.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max), 1e-9);
        Ok(())
    })
}

/// Largest ordering violation of a set of sweep rows (0 when none), and the
/// Werner value inside the Bell-diagonal region.
pub fn ordering_excess(rows: &[BoundSweepRow]) -> f64 {
    let mut worst = 0.0f64;
    for row in rows {
        let chain = [row.f_min_analytic, row.f_min_sdp, row.bd_lower, row.f_werner, row.bd_upper, row.f_max];
        for w in chain.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
    }
    worst
}

/// Fixed-`F` sweeps over `p` and the `p = 0` sweep over `F ∈ [0.5, 1]`.
pub fn bound_ordering(f_values: &[f64], p_steps: usize, f_steps: usize, opts: &CurveOptions) -> SuiteReport {
    timed("bound_ordering", |r| {
        let mut rows = vec![];
        for &f in f_values {
            rows.extend(sweep_p(f, p_steps, opts)?);
        }
        rows.extend(sweep_f(0.0, 0.5, 1.0, f_steps, opts)?);
        let bad = rows.iter().filter(|row| !row.ordering_violations(1e-6).is_empty()).count();
        r.check("max ordering excess", ordering_excess(&rows), 1e-6);
        r.check("rows with violations", bad as f64, 0.0);
        r.notes.push(format!("{} rows", rows.len()));
        Ok(())
    })
}

/// `f_min_sdp` never exceeds the value of an explicit pair of states.
pub fn lower_bound_witness(points: &[(f64, f64)]) -> SuiteReport {
    timed("lower_bound_witness", |r| {
        let mut worst = f64::NEG_INFINITY;
        for &(p, f) in points {
            let (lo, _) = f_min_sdp_with(p, f, &CurveOptions::default())?;
            let rho = opt_state(p, f)?;
            for label in PauliLabel::ALL {
                if let Some(fid) = postselected_swap(&rho, &rho, label)?.fidelity {
                    worst = worst.max(lo - fid);
                }
            }
        }
        r.check("max (f_min_sdp − witness)", worst, 1e-6);
        Ok(())
    })
}

/// The default `selftest` set: every suite at reduced sizes.
pub fn quick_suites(seed: u64) -> Vec<SuiteReport> {
    let pf = [(0.0, 0.8), (0.3, 0.9), (0.5, 0.75)];
    vec![
        bd_swap_exactness(seed, 50),
        chain_equivalence(seed, &[3, 4], 5, 3),
        saturation(10),
        chain_bounds(seed, 100),
        werner_accuracy(seed, 100, 0.01),
        protocols(seed),
        qkd_reproduction(14),
        sdp_certificates(&pf),
        symmetry_reduction(&[0.0, 0.5], &[0.8], &[0.5]),
        sdp_tightness(&[0.7, 0.9], 2),
        rate_fidelity_endpoints(&[0.75], 11),
        monte_carlo_sandwich(seed, &[0.8], 2, 500),
        lower_bound_witness(&pf),
        bound_ordering(&[0.75], 5, 5, &CurveOptions::default()),
    ]
}

/// Sizes used by the acceptance tests.
pub fn full_suites(seed: u64) -> Vec<SuiteReport> {
    let fs5 = [0.55, 0.65, 0.75, 0.85, 0.95];
    vec![
        bd_swap_exactness(seed, 200),
        chain_equivalence(seed, &[3, 4], 50, 10),
        saturation(20),
        bound_ordering(&[0.75, 0.9], 100, 100, &CurveOptions::default()),
        sdp_tightness(&fs5, 5),
        rate_fidelity_endpoints(&[0.6, 0.75, 0.95], 41),
        monte_carlo_sandwich(seed, &[0.6, 0.7, 0.8, 0.9, 0.95], 5, 10_000),
        qkd_reproduction(14),
        chain_bounds(seed, 500),
        werner_accuracy(seed, 500, 0.01),
    ]
}
