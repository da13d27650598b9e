//! Bounds layer against frozen goldens, the unsymmetrized problem, and its own
//! structural invariants.

use bellchain::bounds::{
    bound_row, delta_region, f_max, f_max_sdp, f_min_analytic, f_min_sdp, fidelity_vs_delta, symmetrized_family,
    CurveOptions, HermitianBasis, Sense, SymmetrizedProblem,
};
use bellchain::qcore::ComplexMatrix;
use bellchain::sdp::{check_certificate, solve, SdpStatus};
use bellchain::states::random;
use bellchain::verify;
use rand::SeedableRng;

const GOLDEN_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

fn read_csv(name: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(format!("{GOLDEN_DIR}/{name}")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn sweep_goldens() {
    for name in ["bounds_fix_f_0.75.csv", "bounds_fix_f_0.9.csv", "bounds_fix_p_0.csv"] {
        let (header, rows) = read_csv(name);
        assert_eq!(header.join(","), bellchain::bounds::BoundSweepRow::CSV_HEADER);
        for g in rows {
            let row = bound_row(g[0], g[1]).unwrap();
            let v = row.values();
            assert!(row.ordering_violations(1e-6).is_empty(), "{row:?}");
            for (k, col) in header.iter().enumerate() {
                let tol = match col.as_str() {
                    "f_min_sdp" => 1e-6,
                    // δ* is only determined where the minimum is not flat
                    "delta_star" if g[4] < 1e-6 => continue,
                    "delta_star" => 1e-3,
                    _ => 1e-10,
                };
                assert!(
                    (v[k] - g[k]).abs() <= tol,
                    "{name} p = {} F = {}: {col} {} vs golden {}",
                    g[0],
                    g[1],
                    v[k],
                    g[k]
                );
            }
        }
    }
}

#[test]
fn point_values() {
    let cases =
        [(0.0, 0.8, 0.3223057649), (0.3, 0.9, 0.6589186723), (0.0, 0.6, 0.0370878306), (0.0, 0.95, 0.7754243022)];
    for (p, f, expect) in cases {
        let (v, _) = f_min_sdp(p, f).unwrap();
        assert!((v - expect).abs() < 1e-6, "f_min_sdp({p}, {f}) = {v}");
    }
    let regions = [((0.0, 0.8), (0.09, 0.41)), ((0.5, 0.75), (0.1875, 0.3125)), ((0.3, 0.9), (0.19, 0.31))];
    for ((p, f), (lo, hi)) in regions {
        let (a, b) = delta_region(p, f).unwrap();
        assert!((a - lo).abs() < 1e-6 && (b - hi).abs() < 1e-6, "delta_region({p}, {f}) = ({a}, {b})");
    }
}

#[test]
fn degenerate_and_quarter() {
    assert_eq!(delta_region(1.0, 1.0).unwrap(), (0.25, 0.25));
    assert_eq!(f_min_sdp(0.4, 1.0).unwrap(), (1.0, 0.25));
    for (p, f) in [(0.0, 0.6), (0.2, 0.7), (0.5, 0.9), (0.75, 0.75)] {
        let (lo, hi) = delta_region(p, f).unwrap();
        assert!(lo <= 0.25 + 1e-9 && 0.25 <= hi + 1e-9, "({p}, {f}): [{lo}, {hi}]");
    }
    let (lo, hi) = delta_region(0.0, 0.8).unwrap();
    let (_, d) = f_min_sdp(0.0, 0.8).unwrap();
    assert!(lo <= d && d <= hi);
}

#[test]
fn upper_sdp_matches_closed_form() {
    let (v, d) = f_max_sdp(0.5, 0.75).unwrap();
    assert!((v - 0.75).abs() < 1e-5 && (d - 0.25).abs() < 1e-4, "({v}, {d})");
    for f in [0.6, 0.75, 0.9] {
        let (v, _) = f_max_sdp(f, f).unwrap();
        assert!((v - (f * f + (1.0 - f) * (1.0 - f))).abs() < 1e-5);
        assert!((v - f_max(f, f).unwrap()).abs() < 1e-5);
    }
}

#[test]
fn diagonal_sandwich() {
    for f in [0.6, 0.75, 0.9] {
        let (v, _) = f_min_sdp(f, f).unwrap();
        assert!(v <= f * f + (1.0 - f) * (1.0 - f) + 1e-9);
        assert!(v >= f_min_analytic(f, f).unwrap() - 1e-9);
    }
}

#[test]
fn lower_curve_reaches_one_at_delta_min() {
    for f in [0.75, 0.95] {
        let c = fidelity_vs_delta(0.0, f, 5).unwrap();
        assert!((c[0].lower - 1.0).abs() < 1e-4, "F = {f}: {:?}", c[0]);
        // the witness that swaps to unit fidelity with probability 1/4
        let quarter = bellchain::bounds::relaxed_fidelity(0.0, f, 0.25, Sense::Max, &CurveOptions::default()).unwrap();
        assert!((quarter - 1.0).abs() < 1e-6);
    }
}

#[test]
fn symmetrized_matches_unsymmetrized_on_spot_grid() {
    let r = verify::symmetry_reduction(&[0.0, 0.4, 0.8], &[0.7, 0.8, 0.9], &[0.25, 0.5, 0.75]);
    assert!(r.passed(), "{r:?}");
}

fn random_unitary4(rng: &mut impl rand::Rng) -> ComplexMatrix {
    let u = random::unitary2(rng);
    u.kron(&u).kron(&u).kron(&u)
}

#[test]
fn optima_are_invariant_and_certified() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let us: Vec<ComplexMatrix> = (0..20).map(|_| random_unitary4(&mut rng)).collect();
    let points = [(0.0, 0.8), (0.3, 0.9), (0.5, 0.75), (0.75, 0.75)];
    for (p, f) in points {
        let (lo, hi) = delta_region(p, f).unwrap();
        for delta in [lo + 0.2 * (hi - lo), 0.25, lo + 0.8 * (hi - lo)] {
            for sense in [Sense::Min, Sense::Max] {
                for basis in [HermitianBasis::Full, HermitianBasis::Real] {
                    let sp = SymmetrizedProblem::new(p, f, delta, sense, basis).unwrap();
                    let prob = sp.to_sdp();
                    let sol = solve(&prob, 1e-9).unwrap();
                    assert_eq!(sol.status, SdpStatus::Optimal);
                    let cert = check_certificate(&prob, &sol);
                    assert!(cert.passed, "({p}, {f}, {delta}, {sense:?}, {basis:?}): {:?}", cert.problems);
                    let sigma = symmetrized_family(basis).operator(&sol.x);
                    for u in &us {
                        let comm = &u.matmul(&sigma) - &sigma.matmul(u);
                        assert!(comm.max_abs() < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn variable_counts() {
    assert_eq!(symmetrized_family(HermitianBasis::Full).n_vars(), 14);
    assert_eq!(symmetrized_family(HermitianBasis::Real).n_vars(), 10);
    assert!(symmetrized_family(HermitianBasis::Full).n_vars() <= 48);
}
