//! The dense SDP solver on its own: the largest eigenvalue of a matrix as
//! `min t  s.t.  t·I − A ⪰ 0`.

use bellchain::qcore::{ComplexMatrix, C64};
use bellchain::sdp::{check_certificate, solve, AffineBlock, SdpProblem};

fn main() -> bellchain::Result<()> {
    let a =
        ComplexMatrix::from_vec(vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0)]);
    let prob = SdpProblem {
        n_vars: 1,
        objective: vec![1.0],
        equalities: vec![],
        psd_blocks: vec![AffineBlock { constant: a.scale(-1.0), coeffs: vec![ComplexMatrix::identity(2)] }],
    };
    let sol = solve(&prob, 1e-9)?;
    println!(
        "t* = {:.10} ({:?}, {} iterations, gap {:.1e})",
        sol.objective_value, sol.status, sol.iterations, sol.duality_gap
    );
    println!("exact  {:.10}", 0.5 + 13f64.sqrt() / 2.0);
    let cert = check_certificate(&prob, &sol);
    println!("certificate passed: {}", cert.passed);
    Ok(())
}
