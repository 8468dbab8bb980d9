//! One level of the periodic wavelet transform: decompose, reconstruct,
//! and keep every bit of energy.
//!
//! Run: `cargo run --release --example wavelet_roundtrip`

use std::sync::Arc;

use num_complex::Complex64;
use pattern_fft::dirichlet::filter_bank_from_dirichlet;
use pattern_fft::fft::{Domain, LatticeArray};
use pattern_fft::wavelet::{full_analysis, full_synthesis};
use pattern_fft::{inverse_rational, IntMatrix, PatternBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let m_mat = IntMatrix::from_i64_rows(&[&[16, 0], &[0, 16]]);
    let m = Arc::new(PatternBasis::new(&m_mat).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let values: Vec<Complex64> = (0..m.det_abs() as usize)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = LatticeArray::new(m.clone(), Domain::Spatial, values).unwrap();

    // All three dyadic factors: the two axis splits and the quincunx.
    for (name, rows) in [
        ("J_x", [[2i64, 0], [0, 1]]),
        ("J_y", [[1, 0], [0, 2]]),
        ("J_d", [[1, -1], [1, 1]]),
    ] {
        let j_mat = IntMatrix::from_i64_rows(&[&rows[0], &rows[1]]);
        let n_mat = inverse_rational(&j_mat)
            .unwrap()
            .mul_int(&m_mat)
            .to_int()
            .unwrap();
        let j = Arc::new(PatternBasis::new(&j_mat).unwrap());
        let n = Arc::new(PatternBasis::new(&n_mat).unwrap());
        let bank = filter_bank_from_dirichlet(&m, &n, &j).unwrap();

        let d = full_analysis(&a, &bank).unwrap();
        let back = full_synthesis(&d, &bank).unwrap();
        let recon: f64 = back
            .values()
            .iter()
            .zip(a.values())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / a.norm();
        let total = a.norm().powi(2);
        println!(
            "{name}: low-pass {:.4} + wavelet {:.4} of the energy, energy defect {:.1e}, reconstruction {recon:.1e}",
            d.branches[0].norm().powi(2) / total,
            d.branches[1].norm().powi(2) / total,
            (d.energy() - total).abs() / total,
        );
    }
}
