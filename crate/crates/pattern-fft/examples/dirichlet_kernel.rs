//! The Dirichlet kernel: orthonormal translates and the two-scale filter.
//!
//! Run: `cargo run --release --example dirichlet_kernel`

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use pattern_fft::dirichlet::{
    boundary_count, dirichlet_spectrum, scaling_filter, translate_cross_row, wavelet_spectrum,
};
use pattern_fft::{inverse_rational, IntMatrix, PatternBasis};

fn main() {
    let m_mat = IntMatrix::from_i64_rows(&[&[8, 0], &[0, 8]]);
    let m = Arc::new(PatternBasis::new(&m_mat).unwrap());
    let phi = dirichlet_spectrum(&m);
    println!(
        "φ_M spectrum: {} coefficients on the closed parallelepiped",
        phi.support_len()
    );
    println!("c_0 = {:.6}", phi.value(&[0, 0]).re);
    let k = [BigInt::from(4), BigInt::from(0)];
    println!(
        "r((4,0)) = {} boundary hyperplanes",
        boundary_count(&k, &m)
    );

    // Orthonormality of the translates: the correlation row is a delta.
    let gamma = translate_cross_row(&phi, &phi, &m);
    let worst = gamma[1..]
        .iter()
        .map(|v| v.norm())
        .fold((gamma[0] - Complex64::new(1.0, 0.0)).norm(), f64::max);
    println!("Gram deviation from identity: {worst:.2e}");

    // A dyadic coarsening and its scaling filter.
    let j_mat = IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]]);
    let n_mat = inverse_rational(&j_mat)
        .unwrap()
        .mul_int(&m_mat)
        .to_int()
        .unwrap();
    let n = Arc::new(PatternBasis::new(&n_mat).unwrap());
    let ahat = scaling_filter(&m, &n).unwrap();
    println!("â_0 = {:.6} (= √2)", ahat.values()[0].re);

    // The wavelet completes the split V_M = V_N^φ ⊕ V_N^ψ.
    let j = Arc::new(PatternBasis::new(&j_mat).unwrap());
    let psi = wavelet_spectrum(&m, &n, &j).unwrap();
    let phi_n = dirichlet_spectrum(&n);
    println!("‖ψ_N‖ = {:.12}", psi.norm());
    println!("⟨ψ_N, φ_N⟩ = {:.2e}", psi.inner(&phi_n).norm());
}
