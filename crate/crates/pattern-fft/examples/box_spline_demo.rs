//! The figure pipeline: sample a centered box spline, move to the
//! orthonormal Dirichlet basis, split off one wavelet space, render it.
//!
//! Run: `cargo run --release --example box_spline_demo`
//! Writes PGM images next to the current directory under `boxspline-out/`.

use std::path::Path;
use std::sync::Arc;

use pattern_fft::boxspline::{sample_on_pattern, DirectionSet};
use pattern_fft::dirichlet::{
    dirichlet_spectrum, filter_bank_from_dirichlet, samples_to_translate_coeffs,
    translate_coeffs_to_samples,
};
use pattern_fft::fft::{Domain, LatticeArray};
use pattern_fft::io::{magnitude_pgm, write_atomic};
use pattern_fft::lattice::Window;
use pattern_fft::wavelet::{full_analysis, full_synthesis, WaveletCoefficients};
use pattern_fft::{inverse_rational, IntMatrix, PatternBasis};

fn main() {
    let m_mat = IntMatrix::from_i64_rows(&[&[64, 0], &[0, 64]]);
    let m = Arc::new(PatternBasis::new(&m_mat).unwrap());

    // Piecewise linear test function sampled at 2πy, y ∈ 𝒫(M) ∩ [-1/2,1/2)².
    let ds = DirectionSet::xi();
    let samples = sample_on_pattern(&ds, &m, Window::Centered);

    // Change of basis from point samples into the orthonormal translates.
    let spectrum = dirichlet_spectrum(&m);
    let coeffs = samples_to_translate_coeffs(&samples, &spectrum).unwrap();

    let out = Path::new("boxspline-out");
    write_atomic(&out.join("input.pgm"), &magnitude_pgm(&samples)).unwrap();

    for (name, rows) in [
        ("x", [[2i64, 0], [0, 1]]),
        ("y", [[1, 0], [0, 2]]),
        ("d", [[1, -1], [1, 1]]),
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
        let d = full_analysis(&coeffs, &bank).unwrap();

        // Synthesize the wavelet part alone and sample it on the grid.
        let zero = LatticeArray::zeros(n.clone(), Domain::Spatial);
        let only_wavelet = WaveletCoefficients {
            branches: vec![zero, d.branches[1].clone()],
        };
        let f_w = full_synthesis(&only_wavelet, &bank).unwrap();
        let f_w_samples = translate_coeffs_to_samples(&f_w, &spectrum).unwrap();
        write_atomic(
            &out.join(format!("f_w_{name}.pgm")),
            &magnitude_pgm(&f_w_samples),
        )
        .unwrap();

        let total = coeffs.norm().powi(2);
        println!(
            "J_{name}: wavelet space holds {:.5} of the energy",
            d.branches[1].norm().powi(2) / total
        );
    }
    println!("wrote boxspline-out/input.pgm and boxspline-out/f_w_{{x,y,d}}.pgm");
}
