//! Timing the transform across sizes and shapes of the pattern normal form
//! `M = [[l, i], [0, k]]`: the two-cycle shapes parallelize; the scaling
//! stays m·log m either way.
//!
//! Run: `cargo run --release --example bench_scaling`

use pattern_fft::cli::{bench_shape, normal_form_matrix};

fn main() {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    println!("m,i,cycles,serial_seconds,parallel_seconds,speedup");
    for p in [14u32, 16, 18] {
        let m = 1u64 << p;
        let k = 1u64 << p.div_ceil(2);
        let l = m / k;
        for i in [0u64, 1, 2] {
            let matrix = normal_form_matrix(l, i, k);
            let (cycles, serial, parallel) = bench_shape(&matrix, 5, 1, threads).unwrap();
            let cycle_text = cycles
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join("x");
            println!(
                "{m},{i},{cycle_text},{serial:.6},{parallel:.6},{:.2}",
                serial / parallel
            );
        }
    }
}
