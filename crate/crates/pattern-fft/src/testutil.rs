//! Shared helpers for unit tests.

use num_bigint::BigInt;
use rand::Rng;

use crate::intlinalg::{determinant, IntMatrix};
use num_traits::{Signed, Zero};

pub fn random_regular(rng: &mut impl Rng, dim: usize, bound: i64) -> IntMatrix {
    loop {
        let rows: Vec<Vec<BigInt>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        let m = IntMatrix::from_rows(rows).unwrap();
        if !determinant(&m).is_zero() {
            return m;
        }
    }
}

/// Regular matrix with `0 < |det| ≤ max_det`, by rejection.
pub fn random_regular_bounded(
    rng: &mut impl Rng,
    dim: usize,
    bound: i64,
    max_det: u64,
) -> IntMatrix {
    use num_traits::ToPrimitive;
    loop {
        let m = random_regular(rng, dim, bound);
        if let Some(det) = determinant(&m).abs().to_u64() {
            if det <= max_det {
                return m;
            }
        }
    }
}

/// Product of a few elementary shears, swaps and sign flips.
pub fn random_unimodular(rng: &mut impl Rng, dim: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..8 {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        while j == i {
            j = rng.gen_range(0..dim);
        }
        match rng.gen_range(0..3) {
            0 => {
                let t = rng.gen_range(-3i64..=3);
                for c in 0..dim {
                    rows[i][c] += t * rows[j][c];
                }
            }
            1 => rows.swap(i, j),
            _ => {
                for c in 0..dim {
                    rows[i][c] = -rows[i][c];
                }
            }
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IntMatrix::from_i64_rows(&refs)
}
