//! The Fourier transform on `𝒫(M)`.
//!
//! Under the basis orderings of [`crate::lattice`] the Fourier matrix
//! `ℱ(M) = m^{-1/2}(e^{-2πi hᵀy})` is the Kronecker product
//! `ℱ_{ε_{d-d_M+1}} ⊗ … ⊗ ℱ_{ε_d}` of cyclic DFTs, with no row or column
//! rearrangement. The fast path exploits exactly that: split off the last
//! axis (size `ε_d`), run `m/ε_d` one-dimensional FFTs on contiguous blocks,
//! then transform the remaining axes for each fixed last index. Both steps
//! operate on disjoint partitions of the data, so they may run in parallel
//! with results independent of the schedule.
//!
//! The dense matrix (`fourier_matrix`, `dft_naive`) stays available below a
//! configurable size limit as the oracle for the fast path.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::PatternBasis;

/// Default guard for dense-matrix construction (`O(m²)` memory).
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

/// Whether an array is indexed by `𝒫(M)` (spatial) or `𝒢(Mᵀ)` (frequency).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Spatial,
    Frequency,
}

/// Complex values addressed by multi-indices in lexicographic order
/// (row-major over the cycle lengths, last index fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeArray {
    basis: Arc<PatternBasis>,
    domain: Domain,
    values: Vec<Complex64>,
}

impl LatticeArray {
    pub fn new(basis: Arc<PatternBasis>, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        let expected = basis.det_abs() as usize;
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(Self {
            basis,
            domain,
            values,
        })
    }

    pub fn zeros(basis: Arc<PatternBasis>, domain: Domain) -> Self {
        let len = basis.det_abs() as usize;
        Self {
            basis,
            domain,
            values: vec![Complex64::zero(); len],
        }
    }

    pub fn basis(&self) -> &Arc<PatternBasis> {
        &self.basis
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, idx: &[u64]) -> Complex64 {
        self.values[self.basis.flat_index(idx)]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// How the blockwise/interleaved sub-transforms are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Reusable plan: one 1D kernel per distinct cycle length, unitary overall.
#[derive(Debug, Clone)]
pub struct FourierPlan {
    basis: Arc<PatternBasis>,
    kernels: Vec<Arc<Fft1d>>,
}

impl FourierPlan {
    pub fn new(basis: Arc<PatternBasis>) -> Self {
        let mut cache: HashMap<u64, Arc<Fft1d>> = HashMap::new();
        let kernels = basis
            .cycle_lengths()
            .iter()
            .map(|&len| {
                cache
                    .entry(len)
                    .or_insert_with(|| Arc::new(Fft1d::new(len as usize)))
                    .clone()
            })
            .collect();
        Self { basis, kernels }
    }

    pub fn basis(&self) -> &Arc<PatternBasis> {
        &self.basis
    }

    fn check(&self, a: &LatticeArray) -> Result<()> {
        if a.basis.as_ref() != self.basis.as_ref() {
            return Err(Error::ShapeMismatch {
                expected: self.basis.det_abs() as usize,
                got: a.len(),
            });
        }
        Ok(())
    }
}

/// Fast forward transform `â = ℱ(M)a`, parallel over the disjoint
/// block/stride partitions.
pub fn fft_pattern(a: &LatticeArray, plan: &FourierPlan) -> Result<LatticeArray> {
    fft_pattern_with(a, plan, Execution::Parallel)
}

pub fn fft_pattern_with(
    a: &LatticeArray,
    plan: &FourierPlan,
    exec: Execution,
) -> Result<LatticeArray> {
    plan.check(a)?;
    let mut values = a.values.clone();
    transform(&mut values, plan, exec);
    Ok(LatticeArray {
        basis: plan.basis.clone(),
        domain: Domain::Frequency,
        values,
    })
}

/// Inverse transform, the conjugate of the unitary forward path.
pub fn ifft_pattern(ahat: &LatticeArray, plan: &FourierPlan) -> Result<LatticeArray> {
    ifft_pattern_with(ahat, plan, Execution::Parallel)
}

pub fn ifft_pattern_with(
    ahat: &LatticeArray,
    plan: &FourierPlan,
    exec: Execution,
) -> Result<LatticeArray> {
    plan.check(ahat)?;
    let mut values: Vec<Complex64> = ahat.values.iter().map(|v| v.conj()).collect();
    transform(&mut values, plan, exec);
    for v in &mut values {
        *v = v.conj();
    }
    Ok(LatticeArray {
        basis: plan.basis.clone(),
        domain: Domain::Spatial,
        values,
    })
}

fn transform(values: &mut [Complex64], plan: &FourierPlan, exec: Execution) {
    let shape: Vec<usize> = plan
        .basis
        .cycle_lengths()
        .iter()
        .map(|&l| l as usize)
        .collect();
    transform_axes(values, &shape, &plan.kernels, exec);
    let scale = 1.0 / (values.len() as f64).sqrt();
    match exec {
        Execution::Serial => values.iter_mut().for_each(|v| *v *= scale),
        Execution::Parallel => values.par_iter_mut().for_each(|v| *v *= scale),
    }
}

/// The Kronecker split: 1D FFTs along the last axis on contiguous blocks,
/// then the remaining axes for each fixed last index (made contiguous via a
/// transpose). Unnormalized; the caller applies the single 1/√m factor.
fn transform_axes(
    values: &mut [Complex64],
    shape: &[usize],
    kernels: &[Arc<Fft1d>],
    exec: Execution,
) {
    match shape.len() {
        0 => {}
        1 => kernels[0].forward(values),
        _ => {
            let last = *shape.last().unwrap();
            let rest = values.len() / last;
            let kernel = kernels.last().unwrap();
            match exec {
                Execution::Serial => values
                    .chunks_exact_mut(last)
                    .for_each(|block| kernel.forward(block)),
                Execution::Parallel => values
                    .par_chunks_exact_mut(last)
                    .for_each(|block| kernel.forward(block)),
            }

            let mut scratch = vec![Complex64::zero(); values.len()];
            transpose(values, &mut scratch, rest, last, exec);
            let sub_shape = &shape[..shape.len() - 1];
            let sub_kernels = &kernels[..kernels.len() - 1];
            match exec {
                Execution::Serial => scratch
                    .chunks_exact_mut(rest)
                    .for_each(|row| transform_axes(row, sub_shape, sub_kernels, exec)),
                Execution::Parallel => scratch
                    .par_chunks_exact_mut(rest)
                    .for_each(|row| transform_axes(row, sub_shape, sub_kernels, exec)),
            }
            transpose(&scratch, values, last, rest, exec);
        }
    }
}

/// Transpose of a rows×cols row-major matrix into dst (cols×rows), in
/// square tiles so both source reads and destination writes stay within a
/// handful of cache lines per tile. Parallelism splits dst into disjoint
/// band of output rows (= source column ranges).
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize, exec: Execution) {
    const TILE: usize = 32;
    let band = |(band_idx, out_band): (usize, &mut [Complex64])| {
        let c0 = band_idx * TILE;
        let band_width = out_band.len() / rows; // columns of src in this band
        for r0 in (0..rows).step_by(TILE) {
            let r_end = (r0 + TILE).min(rows);
            for j in 0..band_width {
                let out_row = &mut out_band[j * rows..(j + 1) * rows];
                for r in r0..r_end {
                    out_row[r] = src[r * cols + c0 + j];
                }
            }
        }
    };
    // Chunk dst by TILE output rows (= TILE source columns).
    match exec {
        Execution::Serial => dst
            .chunks_mut(TILE * rows)
            .enumerate()
            .for_each(band),
        Execution::Parallel => dst
            .par_chunks_mut(TILE * rows)
            .enumerate()
            .for_each(band),
    }
}

/// Dense `ℱ(M)`: entry `(μ, λ) = m^{-1/2}·exp(-2πi h_μᵀ y_λ)` with the
/// enumerated orderings. Phases come from exact rational `hᵀy` reduced
/// modulo 1.
pub fn fourier_matrix(basis: &PatternBasis, dense_limit: usize) -> Result<Vec<Vec<Complex64>>> {
    let m = basis.det_abs() as usize;
    if m > dense_limit {
        return Err(Error::TooLarge {
            m,
            limit: dense_limit,
        });
    }
    let points = basis.enumerate_pattern(crate::lattice::Window::ZeroOne);
    let generators = basis.enumerate_generators();
    // Integer phase arithmetic: write y = num/den, then
    // hᵀy mod 1 = (Σ h_i·num_i mod den)/den exactly.
    let scaled_points: Vec<(Vec<BigInt>, BigInt)> = points
        .iter()
        .map(|y| {
            let den = y
                .value
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let nums = y
                .value
                .iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect();
            (nums, den)
        })
        .collect();
    let scale = 1.0 / (m as f64).sqrt();
    let matrix = generators
        .iter()
        .map(|h| {
            scaled_points
                .iter()
                .map(|(nums, den)| {
                    let dot: BigInt = h.iter().zip(nums).map(|(hi, ni)| hi * ni).sum();
                    let frac = dot.mod_floor(den).to_f64().unwrap() / den.to_f64().unwrap();
                    Complex64::from_polar(scale, -2.0 * std::f64::consts::PI * frac)
                })
                .collect()
        })
        .collect();
    Ok(matrix)
}

/// `exp(-2πi t)` for rational `t`, reduced mod 1 before going to floating
/// point.
pub(crate) fn unit_phase(t: &BigRational) -> Complex64 {
    let frac = t - t.floor();
    let angle = -2.0 * std::f64::consts::PI * frac.to_f64().unwrap();
    Complex64::from_polar(1.0, angle)
}

/// Dense-matrix transform; the oracle for [`fft_pattern`].
pub fn dft_naive(a: &LatticeArray, dense_limit: usize) -> Result<LatticeArray> {
    let matrix = fourier_matrix(&a.basis, dense_limit)?;
    let values = matrix
        .iter()
        .map(|row| row.iter().zip(&a.values).map(|(m, v)| m * v).sum())
        .collect();
    Ok(LatticeArray {
        basis: a.basis.clone(),
        domain: Domain::Frequency,
        values,
    })
}

/// Checks `ℱ(M) = ℱ_{ε_{d-d_M+1}} ⊗ … ⊗ ℱ_{ε_d}` entrywise to 1e-12.
pub fn assert_kronecker_structure(basis: &PatternBasis, dense_limit: usize) -> Result<bool> {
    let dense = fourier_matrix(basis, dense_limit)?;
    let kron = kronecker_reference(basis);
    let m = basis.det_abs() as usize;
    for r in 0..m {
        for c in 0..m {
            if (dense[r][c] - kron[r][c]).norm() > 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Kronecker product of the cyclic DFT matrices of the cycle lengths.
pub fn kronecker_reference(basis: &PatternBasis) -> Vec<Vec<Complex64>> {
    let mut acc = vec![vec![Complex64::new(1.0, 0.0)]];
    for &eps in basis.cycle_lengths() {
        let f = cyclic_dft_matrix(eps as usize);
        let rows = acc.len() * f.len();
        let mut next = vec![vec![Complex64::zero(); rows]; rows];
        for (ar, arow) in acc.iter().enumerate() {
            for (ac, aval) in arow.iter().enumerate() {
                for (fr, frow) in f.iter().enumerate() {
                    for (fc, fval) in frow.iter().enumerate() {
                        next[ar * f.len() + fr][ac * f.len() + fc] = aval * fval;
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

/// Unitary `ℱ_ε = ε^{-1/2}(e^{-2πi hg/ε})`.
pub fn cyclic_dft_matrix(eps: usize) -> Vec<Vec<Complex64>> {
    let scale = 1.0 / (eps as f64).sqrt();
    (0..eps)
        .map(|h| {
            (0..eps)
                .map(|g| {
                    let angle = -2.0 * std::f64::consts::PI * ((h * g) % eps) as f64 / eps as f64;
                    Complex64::from_polar(scale, angle)
                })
                .collect()
        })
        .collect()
}

/// Unitary 1D DFT of any length (planned per call; reuse [`Fft1d`] for bulk
/// work).
pub fn fft_1d(v: &[Complex64]) -> Vec<Complex64> {
    let kernel = Fft1d::new(v.len());
    let mut data = v.to_vec();
    kernel.forward(&mut data);
    let scale = 1.0 / (v.len() as f64).sqrt();
    for x in &mut data {
        *x *= scale;
    }
    data
}

/// Group convolution over `(𝒫(M), +)` in λ-coordinates (componentwise index
/// addition modulo the cycle lengths).
pub fn group_convolution(a: &LatticeArray, b: &LatticeArray) -> Result<LatticeArray> {
    if a.basis.as_ref() != b.basis.as_ref() {
        return Err(Error::ShapeMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let basis = &a.basis;
    let m = a.len();
    let mut out = vec![Complex64::zero(); m];
    for (flat_l, out_v) in out.iter_mut().enumerate() {
        let lambda = basis.multi_index(flat_l);
        let mut acc = Complex64::zero();
        for flat_k in 0..m {
            let kappa = basis.multi_index(flat_k);
            // λ − κ mod cycle lengths
            let diff: Vec<u64> = basis
                .cycle_lengths()
                .iter()
                .zip(lambda.iter().zip(&kappa))
                .map(|(&len, (&l, &k))| (l + len - k) % len)
                .collect();
            acc += a.values[flat_k] * b.values[basis.flat_index(&diff)];
        }
        *out_v = acc;
    }
    Ok(LatticeArray {
        basis: a.basis.clone(),
        domain: a.domain,
        values: out,
    })
}

/// One-dimensional unnormalized forward DFT kernel of a fixed size.
///
/// Power-of-two lengths run an in-place radix-2 pass; other smooth lengths
/// use recursive mixed-radix splitting by the smallest prime factor; lengths
/// with a prime factor above 61 fall back to Bluestein's chirp-z embedding
/// in a power-of-two convolution.
#[derive(Debug)]
pub struct Fft1d {
    n: usize,
    strategy: Strategy,
}

#[derive(Debug)]
enum Strategy {
    Identity,
    Radix2 {
        twiddles: Vec<Complex64>,
        bitrev: Vec<u32>,
    },
    MixedRadix {
        twiddles: Vec<Complex64>,
    },
    Bluestein {
        chirp: Vec<Complex64>,
        bhat: Vec<Complex64>,
        pad: usize,
        inner: Box<Fft1d>,
    },
}

const MAX_DIRECT_PRIME: usize = 61;

impl Fft1d {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let strategy = if n == 1 {
            Strategy::Identity
        } else if n.is_power_of_two() {
            Strategy::Radix2 {
                twiddles: forward_twiddles(n, n / 2),
                bitrev: bitrev_table(n),
            }
        } else if largest_prime_factor(n) <= MAX_DIRECT_PRIME {
            Strategy::MixedRadix {
                twiddles: forward_twiddles(n, n),
            }
        } else {
            // Bluestein: X_k = c_k·((x·c) ⊛ conj(c))_k with c_t = e^{-πit²/n}.
            let pad = (2 * n - 1).next_power_of_two();
            let chirp: Vec<Complex64> = (0..n)
                .map(|t| {
                    let sq = ((t as u128 * t as u128) % (2 * n as u128)) as f64;
                    Complex64::from_polar(1.0, -std::f64::consts::PI * sq / n as f64)
                })
                .collect();
            let inner = Box::new(Fft1d::new(pad));
            let mut b = vec![Complex64::zero(); pad];
            for t in 0..n {
                b[t] = chirp[t].conj();
                if t > 0 {
                    b[pad - t] = chirp[t].conj();
                }
            }
            inner.forward(&mut b);
            Strategy::Bluestein {
                chirp,
                bhat: b,
                pad,
                inner,
            }
        };
        Self { n, strategy }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// In-place unnormalized forward DFT (`X_k = Σ_t x_t e^{-2πikt/n}`).
    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n);
        match &self.strategy {
            Strategy::Identity => {}
            Strategy::Radix2 { twiddles, bitrev } => {
                for (i, &r) in bitrev.iter().enumerate() {
                    let r = r as usize;
                    if r > i {
                        data.swap(i, r);
                    }
                }
                let n = self.n;
                let mut len = 2;
                while len <= n {
                    let half = len / 2;
                    let step = n / len;
                    for start in (0..n).step_by(len) {
                        for k in 0..half {
                            let w = twiddles[k * step];
                            let u = data[start + k];
                            let v = data[start + k + half] * w;
                            data[start + k] = u + v;
                            data[start + k + half] = u - v;
                        }
                    }
                    len <<= 1;
                }
            }
            Strategy::MixedRadix { twiddles } => {
                let src = data.to_vec();
                mixed_radix_rec(&src, 0, 1, self.n, 1, data, twiddles);
            }
            Strategy::Bluestein {
                chirp,
                bhat,
                pad,
                inner,
            } => {
                let mut a = vec![Complex64::zero(); *pad];
                for t in 0..self.n {
                    a[t] = data[t] * chirp[t];
                }
                inner.forward(&mut a);
                // Pointwise product, then inverse FFT as conj∘forward∘conj.
                for (x, b) in a.iter_mut().zip(bhat) {
                    *x = (*x * b).conj();
                }
                inner.forward(&mut a);
                let scale = 1.0 / *pad as f64;
                for k in 0..self.n {
                    data[k] = a[k].conj() * scale * chirp[k];
                }
            }
        }
    }
}

/// `e^{-2πi t/n}` for `t < count`.
fn forward_twiddles(n: usize, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|t| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * t as f64 / n as f64))
        .collect()
}

fn bitrev_table(n: usize) -> Vec<u32> {
    let bits = n.trailing_zeros();
    if bits == 0 {
        return vec![0];
    }
    (0..n as u32)
        .map(|i| i.reverse_bits() >> (32 - bits))
        .collect()
}

fn largest_prime_factor(mut n: usize) -> usize {
    let mut largest = 1;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            largest = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        largest = n;
    }
    largest
}

fn smallest_prime_factor(n: usize) -> usize {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 1;
    }
    n
}

/// Recursive decimation-in-time over the smallest prime factor. `src` is
/// read at `offset + t·stride`; `out` receives the transform contiguously.
/// `ratio = table_len / n` indexes the shared twiddle table.
fn mixed_radix_rec(
    src: &[Complex64],
    offset: usize,
    stride: usize,
    n: usize,
    ratio: usize,
    out: &mut [Complex64],
    twiddles: &[Complex64],
) {
    if n == 1 {
        out[0] = src[offset];
        return;
    }
    let r = smallest_prime_factor(n);
    let q = n / r;
    for j in 0..r {
        mixed_radix_rec(
            src,
            offset + j * stride,
            stride * r,
            q,
            ratio * r,
            &mut out[j * q..(j + 1) * q],
            twiddles,
        );
    }
    let table_len = twiddles.len();
    let mut column = vec![Complex64::zero(); r];
    for k in 0..q {
        for (j, slot) in column.iter_mut().enumerate() {
            *slot = out[j * q + k] * twiddles[(j * k * ratio) % table_len];
        }
        for c in 0..r {
            let mut acc = Complex64::zero();
            for (j, v) in column.iter().enumerate() {
                acc += v * twiddles[(j * c * q * ratio) % table_len];
            }
            out[c * q + k] = acc;
        }
    }
}
