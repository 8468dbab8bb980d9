//! Smith normal form of an integer matrix: `M = Q·E·R` with unimodular
//! `Q`, `R` and the divisibility chain on the diagonal of `E`.
//!
//! Run: `cargo run --example smith_normal_form`

use pattern_fft::{determinant, smith_normal_form, IntMatrix};

fn main() {
    // The 32-point showcase matrix: a sheared and rotated planar lattice.
    let m = IntMatrix::from_i64_rows(&[&[4, -3], &[4, 5]]);
    println!("M =\n{m}");
    println!("det M = {}", determinant(&m));

    let snf = smith_normal_form(&m).unwrap();
    let divisors: Vec<String> = snf.e.iter().map(|e| e.to_string()).collect();
    println!("E = diag({})", divisors.join(", "));
    println!("Q =\n{}", snf.q);
    println!("R =\n{}", snf.r);

    // The factorization is exact and the factors are unimodular.
    assert_eq!(snf.q.mul(&snf.diagonal_matrix()).mul(&snf.r), m);
    println!("Q·E·R = M           exact");
    println!(
        "|det Q| = {}, |det R| = {}",
        determinant(&snf.q),
        determinant(&snf.r)
    );

    // Both groups generated by M are the cyclic group of order 32: the
    // elementary divisors say so without enumerating anything.
    println!(
        "pattern group ≅ C_{}",
        divisors.last().unwrap()
    );
}
