//! Patterns, generating groups, and the bases that order them.
//!
//! Run: `cargo run --example pattern_bases`

use num_bigint::BigInt;
use num_rational::BigRational;
use pattern_fft::lattice::Window;
use pattern_fft::{IntMatrix, PatternBasis};

fn main() {
    let m = IntMatrix::from_i64_rows(&[&[4, -3], &[4, 5]]);
    let basis = PatternBasis::new(&m).unwrap();

    println!("pattern dimension d_M = {}", basis.pattern_dim());
    println!("cycle lengths = {:?}", basis.cycle_lengths());
    for (j, y) in basis.pattern_vectors().iter().enumerate() {
        let coords: Vec<String> = y.iter().map(|c| c.to_string()).collect();
        println!("y_{} = ({})", j + 1, coords.join(", "));
    }
    for (j, h) in basis.generator_vectors().iter().enumerate() {
        let coords: Vec<String> = h.iter().map(|c| c.to_string()).collect();
        println!("h_{} = ({})", j + 1, coords.join(", "));
    }

    // Biorthogonality: h_jᵀ y_i = δ_ij/ε — exact rational arithmetic.
    for (j, h) in basis.generator_vectors().iter().enumerate() {
        for (i, y) in basis.pattern_vectors().iter().enumerate() {
            let pairing: BigRational = h
                .iter()
                .zip(y)
                .map(|(a, b)| BigRational::from(a.clone()) * b)
                .collect::<Vec<_>>()
                .into_iter()
                .sum();
            println!("⟨h_{}, y_{}⟩ = {}", j + 1, i + 1, pairing);
        }
    }

    // The first few pattern points in λ-order, and the index round-trip.
    let points = basis.enumerate_pattern(Window::ZeroOne);
    for (flat, p) in points.iter().take(5).enumerate() {
        let coords: Vec<String> = p.value.iter().map(|c| c.to_string()).collect();
        let idx = basis.point_to_index(&p.value).unwrap();
        println!("λ = {:?} ↦ ({})", idx, coords.join(", "));
        assert_eq!(basis.flat_index(&idx), flat);
    }

    // The generating group lives on integer vectors inside Mᵀ[-1/2,1/2)².
    let generators = basis.enumerate_generators();
    println!("first generators: {:?}", &generators[..4.min(generators.len())]);
    let class = basis.generator_to_index(&[BigInt::from(7), BigInt::from(-3)]);
    println!("class of (7, -3) in 𝒢(Mᵀ): μ = {class:?}");
}
