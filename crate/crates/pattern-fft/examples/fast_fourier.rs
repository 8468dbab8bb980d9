//! The fast Fourier transform on a pattern vs the dense oracle.
//!
//! Run: `cargo run --release --example fast_fourier`

use std::sync::Arc;

use num_complex::Complex64;
use pattern_fft::fft::{
    assert_kronecker_structure, dft_naive, fft_pattern, ifft_pattern, Domain, FourierPlan,
    LatticeArray, DEFAULT_DENSE_LIMIT,
};
use pattern_fft::{IntMatrix, PatternBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let m = IntMatrix::from_i64_rows(&[&[14, 1], &[-6, 10]]);
    let basis = Arc::new(PatternBasis::new(&m).unwrap());
    println!(
        "M has {} pattern points, cycles {:?}",
        basis.det_abs(),
        basis.cycle_lengths()
    );

    // Under the basis orderings the Fourier matrix is a pure Kronecker
    // product of cyclic DFTs — no rearrangement.
    assert!(assert_kronecker_structure(&basis, DEFAULT_DENSE_LIMIT).unwrap());
    println!("ℱ(M) = ⊗ ℱ_ε verified entrywise");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let values: Vec<Complex64> = (0..basis.det_abs() as usize)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = LatticeArray::new(basis.clone(), Domain::Spatial, values).unwrap();

    let plan = FourierPlan::new(basis.clone());
    let fast = fft_pattern(&a, &plan).unwrap();
    let dense = dft_naive(&a, DEFAULT_DENSE_LIMIT).unwrap();
    let err: f64 = fast
        .values()
        .iter()
        .zip(dense.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / dense.norm();
    println!("fast vs dense oracle: relative ℓ² error {err:.2e}");

    println!(
        "Parseval: ‖â‖ − ‖a‖ = {:.2e}",
        (fast.norm() - a.norm()).abs()
    );

    let round = ifft_pattern(&fast, &plan).unwrap();
    let err: f64 = round
        .values()
        .iter()
        .zip(a.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / a.norm();
    println!("inverse round-trip error {err:.2e}");
}
