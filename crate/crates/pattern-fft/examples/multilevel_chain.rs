//! A dyadic pyramid: chained quincunx decompositions down to two points.
//!
//! Run: `cargo run --release --example multilevel_chain`

use std::sync::Arc;

use num_complex::Complex64;
use pattern_fft::dirichlet::filter_bank_from_dirichlet;
use pattern_fft::fft::{Domain, LatticeArray};
use pattern_fft::wavelet::multilevel;
use pattern_fft::{inverse_rational, IntMatrix, PatternBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    // 64×64 torus grid; halving by the quincunx rotation at every level
    // keeps the factor integral indefinitely.
    let j_mat = IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]]);
    let mut current = IntMatrix::from_i64_rows(&[&[64, 0], &[0, 64]]);
    let levels = 11; // |det M| = 2^12 → |det N| = 2 after 11 levels

    let mut chain = Vec::new();
    for _ in 0..levels {
        let n_mat = inverse_rational(&j_mat)
            .unwrap()
            .mul_int(&current)
            .to_int()
            .unwrap();
        let m = Arc::new(PatternBasis::new(&current).unwrap());
        let j = Arc::new(PatternBasis::new(&j_mat).unwrap());
        let n = Arc::new(PatternBasis::new(&n_mat).unwrap());
        chain.push(filter_bank_from_dirichlet(&m, &n, &j).unwrap());
        current = n_mat;
    }

    let top = chain[0].m_basis().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let values: Vec<Complex64> = (0..top.det_abs() as usize)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = LatticeArray::new(top.clone(), Domain::Spatial, values).unwrap();

    let decomposition = multilevel(&a, &chain).unwrap();
    for (level, branches) in decomposition.details.iter().enumerate() {
        let energy: f64 = branches.iter().map(|b| b.norm().powi(2)).sum();
        println!(
            "level {:2}: {} wavelet coefficients, energy {:.6}",
            level + 1,
            branches.iter().map(|b| b.len()).sum::<usize>(),
            energy
        );
    }
    println!(
        "approximation: {} coefficients, energy {:.6}",
        decomposition.approximation.len(),
        decomposition.approximation.norm().powi(2)
    );
    let defect = (decomposition.energy() - a.norm().powi(2)).abs() / a.norm().powi(2);
    println!("total energy defect across {levels} levels: {defect:.2e}");
}
