//! Property tests, one section per module. Random objects are drawn from a
//! seeded generator so that a failing case shrinks to a reproducible seed.

use bellchain::qcore::{bell_vector, psi00, ComplexMatrix, DensityOperator, PauliLabel, RegisterSet, C64};
use bellchain::states::random;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn assert_density(rho: &ComplexMatrix) {
    assert!(rho.hermiticity_defect() < 1e-10, "not Hermitian");
    assert!((rho.trace().re - 1.0).abs() < 1e-10, "trace {}", rho.trace().re);
    let min = bellchain::qcore::min_eigenvalue(rho).unwrap();
    assert!(min > -1e-9, "min eigenvalue {min}");
}

mod qcore {
    use super::*;
    use bellchain::qcore::ops::partial_transpose;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn flip_flop(entries in prop::array::uniform8(-1.0f64..1.0)) {
            let m = ComplexMatrix::from_vec((0..4).map(|k| C64::new(entries[2 * k], entries[2 * k + 1])).collect());
            let id = ComplexMatrix::identity(2);
            let lhs = m.kron(&id).apply(&psi00());
            let rhs = id.kron(&m.transpose()).apply(&psi00());
            for (a, b) in lhs.iter().zip(&rhs) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn partial_trace_undoes_tensor(seed in any::<u64>()) {
            let mut r = rng(seed);
            let a = random::density(&mut r).relabel(RegisterSet::new(&["a1", "a2"]).unwrap()).unwrap();
            let b = random::density(&mut r).relabel(RegisterSet::new(&["b1", "b2"]).unwrap()).unwrap();
            let ab = a.tensor(&b).unwrap();
            prop_assert!(ab.partial_trace(&["b1", "b2"]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-12);
            prop_assert!(ab.partial_trace(&["a1", "a2"]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-12);
        }

        #[test]
        fn partial_transpose_is_an_involution(seed in any::<u64>(), q in 0usize..2) {
            let rho = random::density(&mut rng(seed)).into_matrix();
            let twice = partial_transpose(&partial_transpose(&rho, 2, &[q]), 2, &[q]);
            prop_assert_eq!(twice.max_abs_diff(&rho), 0.0);
        }

        #[test]
        fn pauli_product_up_to_phase(a in 0usize..4, b in 0usize..4) {
            let (pa, pb) = (PauliLabel::from_index(a), PauliLabel::from_index(b));
            let prod = pa.matrix().matmul(&pb.matrix());
            let expect = pa.mul(pb).matrix();
            // prod = phase · expect with |phase| = 1
            let phase = prod.trace_product(&expect.adjoint()) / C64::new(2.0, 0.0);
            prop_assert!((phase.norm() - 1.0).abs() < 1e-12);
            prop_assert!(prod.max_abs_diff(&expect.scale_c(phase)) < 1e-12);
        }
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        for a in PauliLabel::ALL {
            for b in PauliLabel::ALL {
                let (va, vb) = (bell_vector(a), bell_vector(b));
                let ip: C64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }
}

mod states {
    use super::*;
    use bellchain::states::{bd_twirl, decompose, max_p, werner_twirl, BellDiagonalCoeffs, WernerState};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn twirl_is_idempotent(seed in any::<u64>()) {
            let rho = random::density(&mut rng(seed));
            let once = bd_twirl(&rho).unwrap();
            let twice = bd_twirl(&once.reconstruct()).unwrap();
            prop_assert!(twice.max_abs_diff(&once) < 1e-12);
        }

        #[test]
        fn twirls_preserve_fidelity(seed in any::<u64>()) {
            let rho = random::density(&mut rng(seed));
            let f = rho.fidelity_to_pure(&psi00()).unwrap();
            prop_assert!((bd_twirl(&rho).unwrap().fidelity() - f).abs() < 1e-12);
            let w = werner_twirl(&rho).unwrap();
            prop_assert!((w.reconstruct().fidelity_to_pure(&psi00()).unwrap() - f).abs() < 1e-12);
        }

        #[test]
        fn werner_coefficients(f in 0.0f64..=1.0) {
            let c = bd_twirl(&WernerState::new(f).unwrap().reconstruct()).unwrap();
            let g = (1.0 - f) / 3.0;
            let expect = BellDiagonalCoeffs { lambda: [f, g, g, g] };
            prop_assert!(c.max_abs_diff(&expect) < 1e-12);
        }

        #[test]
        fn max_p_below_fidelity_and_decomposable(seed in any::<u64>()) {
            let rho = random::density(&mut rng(seed));
            let mp = max_p(&rho).unwrap();
            prop_assert!(mp <= rho.fidelity_to_pure(&psi00()).unwrap() + 1e-12);
            if mp < 1.0 {
                let d = decompose(&rho, mp).unwrap();
                prop_assert!(d.reconstruct().max_abs_diff(rho.matrix()) < 1e-9);
                assert_density(d.sigma.matrix());
            }
        }

        #[test]
        fn exact_fidelity_sampler(seed in any::<u64>(), target in 0.0f64..=1.0) {
            let rho = random::density_with_fidelity(&mut rng(seed), target);
            assert_density(rho.matrix());
            prop_assert!((rho.fidelity_to_pure(&psi00()).unwrap() - target).abs() < 1e-12);
        }
    }
}

mod swap {
    use super::*;
    use bellchain::states::{bd_twirl, max_p};
    use bellchain::swap::{
        all_outcomes, bd_swap, nonpostselected_swap, relabel_partner, swap_lower_bound, swap_stats_raw,
        swap_upper_bound,
    };

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn outcomes_are_states_and_sum_to_one(seed in any::<u64>()) {
            let mut r = rng(seed);
            let (a, b) = (random::density(&mut r), random::density(&mut r));
            let outs = all_outcomes(&a, &b).unwrap();
            let total: f64 = outs.iter().map(|o| o.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for o in outs.iter().filter_map(|o| o.state.as_ref()) {
                assert_density(o.matrix());
            }
        }

        #[test]
        fn twirl_commutes_with_averaged_swap(seed in any::<u64>()) {
            let mut r = rng(seed);
            let (a, b) = (random::density(&mut r), random::density(&mut r));
            let lhs = bd_twirl(&nonpostselected_swap(&a, &b).unwrap()).unwrap();
            let rhs = bd_swap(&bd_twirl(&a).unwrap(), &bd_twirl(&b).unwrap());
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn bell_diagonal_outcomes_are_identical(seed in any::<u64>()) {
            let mut r = rng(seed);
            let (l, m) = (random::bd_coeffs(&mut r), random::bd_coeffs(&mut r));
            let outs = all_outcomes(&l.reconstruct(), &m.reconstruct()).unwrap();
            let first = outs[0].state.as_ref().unwrap().matrix().clone();
            for o in &outs {
                prop_assert!((o.probability - 0.25).abs() < 1e-12);
                prop_assert!(o.state.as_ref().unwrap().matrix().max_abs_diff(&first) < 1e-12);
            }
        }

        #[test]
        fn relabeling_moves_any_outcome_to_psi00(seed in any::<u64>(), k in 0usize..4) {
            let mut r = rng(seed);
            let (a, b) = (random::density(&mut r).into_matrix(), random::density(&mut r).into_matrix());
            let label = PauliLabel::from_index(k);
            let (p_ij, f_ij) = swap_stats_raw(&a, &b, label);
            let (p_00, f_00) = swap_stats_raw(&a, &relabel_partner(&b, label), PauliLabel::I);
            prop_assert!((p_ij - p_00).abs() < 1e-12);
            if p_ij > 1e-9 {
                prop_assert!((f_ij - f_00).abs() < 1e-9);
            }
        }

        #[test]
        fn general_swap_bounds(seed in any::<u64>()) {
            let mut r = rng(seed);
            let (a, b) = (random::density(&mut r), random::density(&mut r));
            let (f1, f2) = (a.fidelity_to_pure(&psi00()).unwrap(), b.fidelity_to_pure(&psi00()).unwrap());
            let (p1, p2) = (max_p(&a).unwrap(), max_p(&b).unwrap());
            let hi = swap_upper_bound(p1, f1, p2, f2);
            let lo = swap_lower_bound(p1, f1, p2, f2);
            for o in all_outcomes(&a, &b).unwrap() {
                if let Some(f) = o.fidelity {
                    prop_assert!(f <= hi + 1e-9, "{f} > {hi}");
                    prop_assert!(f >= lo - 1e-9, "{f} < {lo}");
                }
            }
        }
    }
}

mod chain {
    use super::*;
    use bellchain::chain::sim::{chain_unnormalized, chain_unnormalized_full};
    use bellchain::chain::{
        bd_chain, chain_fidelity_bounds, random_protocol, run_chain_nonpostselected, run_chain_postselected,
        werner_chain_fidelity, Syndrome,
    };
    use bellchain::states::BellDiagonalCoeffs;
    use rand::Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn syndromes_sum_to_one(seed in any::<u64>(), n in 2usize..=4) {
            let mut r = rng(seed);
            let links: Vec<DensityOperator> = (0..n).map(|_| random::density(&mut r)).collect();
            let p = random_protocol(&mut r, n);
            let total: f64 = Syndrome::all(n).map(|s| run_chain_postselected(&links, &p, &s).unwrap().1).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
        }

        #[test]
        fn contraction_matches_full_tensor(seed in any::<u64>()) {
            let mut r = rng(seed);
            let links: Vec<ComplexMatrix> = (0..3).map(|_| random::density(&mut r).into_matrix()).collect();
            let refs: Vec<&ComplexMatrix> = links.iter().collect();
            let p = random_protocol(&mut r, 3);
            let s = Syndrome::from_index(3, r.gen_range(0..16));
            prop_assert!(chain_unnormalized(&refs, &p, &s).max_abs_diff(&chain_unnormalized_full(&refs, &p, &s)) < 1e-12);
        }

        #[test]
        fn bell_diagonal_chains_ignore_syndrome_and_protocol(seed in any::<u64>()) {
            let mut r = rng(seed);
            let coeffs: Vec<BellDiagonalCoeffs> = (0..3).map(|_| random::bd_coeffs(&mut r)).collect();
            let links: Vec<DensityOperator> = coeffs.iter().map(|c| c.reconstruct()).collect();
            let expect = bd_chain(&coeffs).matrix();
            for _ in 0..3 {
                let p = random_protocol(&mut r, 3);
                for s in Syndrome::all(3) {
                    let (state, prob) = run_chain_postselected(&links, &p, &s).unwrap();
                    prop_assert!((prob - 1.0 / 16.0).abs() < 1e-12);
                    prop_assert!(state.unwrap().matrix().max_abs_diff(&expect) < 1e-10);
                }
            }
        }

        #[test]
        fn werner_error_within_bound_gap(seed in any::<u64>(), n in 2usize..=4) {
            let mut r = rng(seed);
            let links: Vec<DensityOperator> =
                (0..n).map(|_| { let f = r.gen_range(0.5..1.0); random::density_with_fidelity(&mut r, f) }).collect();
            let fids: Vec<f64> = links.iter().map(|l| l.fidelity_to_pure(&psi00()).unwrap()).collect();
            let p = random_protocol(&mut r, n);
            let f = run_chain_nonpostselected(&links, &p).unwrap().fidelity_to_pure(&psi00()).unwrap();
            let (lo, hi) = chain_fidelity_bounds(&fids).unwrap();
            prop_assert!((f - werner_chain_fidelity(&fids)).abs() <= hi - lo + 1e-12);
        }

        #[test]
        fn bd_chain_is_order_free(seed in any::<u64>()) {
            let mut r = rng(seed);
            let mut coeffs: Vec<BellDiagonalCoeffs> = (0..4).map(|_| random::bd_coeffs(&mut r)).collect();
            let a = bd_chain(&coeffs);
            coeffs.reverse();
            prop_assert!(a.max_abs_diff(&bd_chain(&coeffs)) < 1e-14);
        }
    }
}

mod qkd {
    use super::*;
    use bellchain::qkd::{binary_entropy, chain_skf, qber, werner_chain_skf, SkfMode};
    use bellchain::states::WernerState;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn postselection_never_hurts(seed in any::<u64>(), n in 2usize..=6) {
            let link = random::density_with_fidelity(&mut rng(seed), 0.9);
            let post = chain_skf(&link, n, SkfMode::Postselected).unwrap();
            let avg = chain_skf(&link, n, SkfMode::Nonpostselected).unwrap();
            prop_assert!(post >= avg - 1e-12, "{post} < {avg}");
        }

        #[test]
        fn qber_from_bell_coefficients(seed in any::<u64>()) {
            let c = random::bd_coeffs(&mut rng(seed));
            let q = qber(&c.reconstruct()).unwrap();
            let l = c.lambda;
            prop_assert!((q.qx - (l[1] + l[3])).abs() < 1e-12);
            prop_assert!((q.qy - (l[2] + l[1])).abs() < 1e-12);
            prop_assert!((q.qz - (l[2] + l[3])).abs() < 1e-12);
        }

        #[test]
        fn werner_closed_form(f in 0.5f64..1.0, n in 2usize..=10) {
            let link = WernerState::new(f).unwrap().reconstruct();
            let w = (4.0 * f - 1.0) / 3.0;
            let expect = (1.0 - 2.0 * binary_entropy(0.5 - 0.5 * w.powi(n as i32))).max(0.0);
            prop_assert!((chain_skf(&link, n, SkfMode::WernerApprox).unwrap() - expect).abs() < 1e-12);
            prop_assert!((werner_chain_skf(f, n) - expect).abs() < 1e-12);
        }

        #[test]
        fn entropy_is_symmetric(x in 0.0f64..=1.0) {
            let h = binary_entropy(x);
            prop_assert!((0.0..=1.0).contains(&h));
            prop_assert!((h - binary_entropy(1.0 - x)).abs() < 1e-12);
        }
    }
}

mod sdp {
    use super::*;
    use bellchain::qcore::eigen::hermitian_eigenvalues;
    use bellchain::sdp::{check_certificate, solve, AffineBlock, SdpProblem, SdpStatus};

    /// Real coordinates of a `d × d` Hermitian matrix.
    fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
        let mut out = vec![];
        for r in 0..d {
            for c in r..d {
                let mut m = ComplexMatrix::zeros(d);
                m[(r, c)] = C64::new(1.0, 0.0);
                m[(c, r)] = C64::new(1.0, 0.0);
                out.push(m);
                if r != c {
                    let mut m = ComplexMatrix::zeros(d);
                    m[(r, c)] = C64::new(0.0, -1.0);
                    m[(c, r)] = C64::new(0.0, 1.0);
                    out.push(m);
                }
            }
        }
        out
    }

    /// `min Tr[Cσ]` over density matrices.
    fn ground_state_problem(c: &ComplexMatrix) -> SdpProblem {
        let d = c.dim();
        let basis = hermitian_basis(d);
        let objective = basis.iter().map(|g| c.trace_product(g).re).collect();
        let trace = basis.iter().map(|g| g.trace().re).collect();
        SdpProblem {
            n_vars: basis.len(),
            objective,
            equalities: vec![(trace, 1.0)],
            psd_blocks: vec![AffineBlock { constant: ComplexMatrix::zeros(d), coeffs: basis }],
        }
    }

    fn random_hermitian(seed: u64, d: usize) -> ComplexMatrix {
        let g = random::ginibre(&mut rng(seed), d, d);
        let h = random::ginibre(&mut rng(seed ^ 0x9e37), d, d);
        (&g - &h).scale(d as f64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ground_state_energy(seed in any::<u64>(), d in 2usize..=4) {
            let c = random_hermitian(seed, d);
            let prob = ground_state_problem(&c);
            let sol = solve(&prob, 1e-9).unwrap();
            prop_assert_eq!(sol.status, SdpStatus::Optimal);
            let min = hermitian_eigenvalues(&c)[0];
            prop_assert!((sol.objective_value - min).abs() < 1e-7, "{} vs {min}", sol.objective_value);
            prop_assert!(sol.objective_value >= sol.dual_value - 1e-7);
            prop_assert!(check_certificate(&prob, &sol).passed);
        }

        #[test]
        fn deterministic(seed in any::<u64>()) {
            let prob = ground_state_problem(&random_hermitian(seed, 3));
            let (a, b) = (solve(&prob, 1e-8).unwrap(), solve(&prob, 1e-8).unwrap());
            prop_assert_eq!(a.iterations, b.iterations);
            prop_assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
        }

        #[test]
        fn extra_equality_never_lowers_the_minimum(seed in any::<u64>(), v in 0.0f64..1.0) {
            let c = random_hermitian(seed, 3);
            let mut prob = ground_state_problem(&c);
            let base = solve(&prob, 1e-8).unwrap().objective_value;
            // fix the (0, 0) population, which stays feasible for v in [0, 1]
            let pop: Vec<f64> = hermitian_basis(3).iter().map(|g| g[(0, 0)].re).collect();
            prob.equalities.push((pop, v));
            let sol = solve(&prob, 1e-8).unwrap();
            prop_assert_eq!(sol.status, SdpStatus::Optimal);
            prop_assert!(sol.objective_value >= base - 1e-8);
        }
    }
}

mod bounds {
    use super::*;
    use bellchain::bounds::{delta_of, delta_tilde, f_max, f_min_analytic, f_tilde};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn delta_maps_invert(p in 0.0f64..0.99, dt in 0.0f64..=1.0) {
            let d = delta_of(p, dt);
            prop_assert!((delta_tilde(p, d) - dt).abs() < 1e-9);
        }

        #[test]
        fn closed_forms_ordered(f in 0.0f64..=1.0, t in 0.0f64..=1.0) {
            let p = f * t;
            let lo = f_min_analytic(p, f).unwrap();
            let hi = f_max(p, f).unwrap();
            prop_assert!(lo <= f * f + 1e-12);
            prop_assert!(f * f + (1.0 - f) * (1.0 - f) <= hi + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f_tilde(p, f)) || p >= 1.0);
        }

        #[test]
        fn opt_state_sandwich(f in 0.3f64..1.0, t in 0.0f64..=1.0, seed in any::<u64>()) {
            // F'_00 of two random decompositions at (p, F) never beats f_max
            let p = (f * t).min(0.99);
            let mut r = rng(seed);
            let ft = (f - p) / (1.0 - p);
            let psi = ComplexMatrix::projector(&psi00()).scale(p);
            let s1 = random::density_with_fidelity(&mut r, ft).into_matrix();
            let s2 = random::density_with_fidelity(&mut r, ft).into_matrix();
            let (prob, fid) = bellchain::swap::swap_stats_raw(
                &(&psi + &s1.scale(1.0 - p)),
                &(&psi + &s2.scale(1.0 - p)),
                PauliLabel::I,
            );
            if prob > 1e-9 {
                prop_assert!(fid <= f_max(p, f).unwrap() + 1e-9);
                prop_assert!(fid >= f_min_analytic(p, f).unwrap() - 1e-9);
            }
        }
    }
}
