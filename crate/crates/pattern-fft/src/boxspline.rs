//! Centered bivariate box splines as sampled test functions.
//!
//! A box spline over a direction set `Ξ = (ξ_1 … ξ_s)` is evaluated with the
//! de Boor recurrence on the number of directions,
//!
//! ```text
//!   (s-2)·B_Ξ(x) = Σ_i t_i·B_{Ξ∖ξ_i}(x) + (1-t_i)·B_{Ξ∖ξ_i}(x-ξ_i),
//! ```
//!
//! with `t` the least-norm solution of `Ξt = x` and the base case the
//! half-open parallelepiped indicator of two independent directions divided
//! by their determinant. The centered variant shifts by half the direction
//! sum. Values on the mesh lines themselves are half-open-convention
//! artifacts of measure zero.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{Domain, LatticeArray};
use crate::lattice::{PatternBasis, Window};

/// `s ≥ 2` planar directions, the first two linearly independent.
#[derive(Debug, Clone)]
pub struct DirectionSet {
    directions: Vec<[f64; 2]>,
}

impl DirectionSet {
    pub fn new(directions: Vec<[f64; 2]>) -> Result<Self> {
        if directions.len() < 2 {
            return Err(Error::DegenerateDirections);
        }
        let det = directions[0][0] * directions[1][1] - directions[0][1] * directions[1][0];
        if det.abs() < 1e-12 {
            return Err(Error::DegenerateDirections);
        }
        Ok(Self { directions })
    }

    /// The piecewise linear demo spline: directions `(π,0), (0,π), (π/8,π/8)`.
    pub fn xi() -> Self {
        use std::f64::consts::PI;
        Self::new(vec![[PI, 0.0], [0.0, PI], [PI / 8.0, PI / 8.0]]).unwrap()
    }

    /// The piecewise cubic demo spline:
    /// `(π,0), (0,π), (π/8,0), (0,π/8), (π/8,π/8)`.
    pub fn psi() -> Self {
        use std::f64::consts::PI;
        Self::new(vec![
            [PI, 0.0],
            [0.0, PI],
            [PI / 8.0, 0.0],
            [0.0, PI / 8.0],
            [PI / 8.0, PI / 8.0],
        ])
        .unwrap()
    }

    pub fn directions(&self) -> &[[f64; 2]] {
        &self.directions
    }

    /// Half the direction sum; the centered spline peaks near the origin.
    pub fn center(&self) -> [f64; 2] {
        let mut c = [0.0, 0.0];
        for d in &self.directions {
            c[0] += d[0] / 2.0;
            c[1] += d[1] / 2.0;
        }
        c
    }

    /// Kills everything at `‖x‖_∞` beyond this radius.
    pub fn support_radius(&self) -> f64 {
        self.directions
            .iter()
            .map(|d| d[0].abs().max(d[1].abs()))
            .sum::<f64>()
            / 2.0
            + 1e-9
    }
}

/// Value of the centered box spline at `x`.
pub fn eval_box_spline(ds: &DirectionSet, x: [f64; 2]) -> f64 {
    let center = ds.center();
    let shifted = [x[0] + center[0], x[1] + center[1]];
    let all = (1u32 << ds.directions.len()) - 1;
    let mut memo = HashMap::new();
    eval_rec(ds, all, shifted, &mut memo)
}

fn eval_rec(
    ds: &DirectionSet,
    mask: u32,
    x: [f64; 2],
    memo: &mut HashMap<(u32, u64, u64), f64>,
) -> f64 {
    let key = (mask, x[0].to_bits(), x[1].to_bits());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let members: Vec<usize> = (0..ds.directions.len())
        .filter(|i| mask & (1 << i) != 0)
        .collect();
    let value = if members.len() == 2 {
        parallelepiped_indicator(
            ds.directions[members[0]],
            ds.directions[members[1]],
            x,
        )
    } else {
        // Least-norm t with Ξt = x via the 2×2 Gram of the active rows.
        let g: [f64; 3] = members.iter().fold([0.0; 3], |mut acc, &i| {
            let d = ds.directions[i];
            acc[0] += d[0] * d[0];
            acc[1] += d[0] * d[1];
            acc[2] += d[1] * d[1];
            acc
        });
        let det = g[0] * g[2] - g[1] * g[1];
        if det.abs() < 1e-12 {
            // All remaining directions collinear: zero almost everywhere.
            0.0
        } else {
            let u = [
                (g[2] * x[0] - g[1] * x[1]) / det,
                (-g[1] * x[0] + g[0] * x[1]) / det,
            ];
            let mut acc = 0.0;
            for &i in &members {
                let d = ds.directions[i];
                let t_i = d[0] * u[0] + d[1] * u[1];
                let sub = mask & !(1 << i);
                acc += t_i * eval_rec(ds, sub, x, memo);
                acc += (1.0 - t_i) * eval_rec(ds, sub, [x[0] - d[0], x[1] - d[1]], memo);
            }
            acc / (members.len() as f64 - 2.0)
        }
    };
    memo.insert(key, value);
    value
}

/// Indicator of `{t_1ξ_a + t_2ξ_b : t ∈ [0,1)²}` divided by `|det|`.
fn parallelepiped_indicator(a: [f64; 2], b: [f64; 2], x: [f64; 2]) -> f64 {
    let det = a[0] * b[1] - a[1] * b[0];
    if det.abs() < 1e-12 {
        return 0.0;
    }
    let t1 = (b[1] * x[0] - b[0] * x[1]) / det;
    let t2 = (-a[1] * x[0] + a[0] * x[1]) / det;
    if (0.0..1.0).contains(&t1) && (0.0..1.0).contains(&t2) {
        1.0 / det.abs()
    } else {
        0.0
    }
}

/// Samples the centered spline at the points `2πy`, `y ∈ 𝒫(M)`, in λ-order.
pub fn sample_on_pattern(
    ds: &DirectionSet,
    basis: &Arc<PatternBasis>,
    window: Window,
) -> LatticeArray {
    let tau = 2.0 * std::f64::consts::PI;
    let values: Vec<Complex64> = basis
        .enumerate_pattern(window)
        .iter()
        .map(|p| {
            let coords = p.to_f64();
            let v = eval_box_spline(ds, [tau * coords[0], tau * coords[1]]);
            Complex64::new(v, 0.0)
        })
        .collect();
    LatticeArray::new(basis.clone(), Domain::Spatial, values).unwrap()
}
