//! The two cases of the scaling property for a dyadic factor `J`:
//! a refinement either adds a new cycle direction or refines an existing
//! cycle, with coordinates related by the projection matrix.
//!
//! Run: `cargo run --example scaling_property`

use pattern_fft::lattice::{scaling_case, ScalingCase};
use pattern_fft::IntMatrix;

fn main() {
    // Case 1: the new points leave the span of the old basis.
    let n = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
    let j = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
    let report = scaling_case(&j, &n).unwrap();
    assert_eq!(report.case, ScalingCase::NewDirection);
    println!(
        "J = diag(1,2) on N = diag(2,1): new direction, d_M = {} = d_N + 1 = {}",
        report.d_m,
        report.d_n + 1
    );
    if let Some((axis, multiplier, cycle)) = report.new_axis {
        println!("  axis {axis} spans the new cycle: N⁻¹z_1 ≡ {multiplier}·x_{axis}, ε = {cycle}");
    }

    // Case 2: the same axis is refined, coordinates scale by ε_d^J.
    let n = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
    let j = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
    let report = scaling_case(&j, &n).unwrap();
    assert_eq!(report.case, ScalingCase::RefinedCycle);
    let (lambda, mu) = report.coords.unwrap();
    println!(
        "J = diag(2,1) on N = diag(2,1): refined cycle, d_M = d_N = {}; λ = {:?}, μ = {:?} with λ = Pμ/{}",
        report.d_m, lambda, mu, report.j_cycle
    );
}
