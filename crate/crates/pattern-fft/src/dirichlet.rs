//! The Dirichlet kernel `φ_M`, its scaling filter, and the wavelet `ψ_N`.
//!
//! The kernel is given by its Fourier coefficients
//! `c_k(φ_M) = m^{-1/2}·2^{-r(k)/2}` on the closed parallelepiped
//! `Mᵀ[-1/2, 1/2]^d`, where `r(k)` counts the boundary hyperplanes through
//! the class representative of `k`. The halved boundary weights make the
//! squared coefficients sum to `1/m` on every frequency class, which is
//! exactly orthonormality of the pattern translates `T(y)φ_M`.
//!
//! For `M = J·N` with `|det J| = 2`, `φ_N ∈ V_M^{φ_M}` with the real filter
//! `â_h = 2^{(1 + r_M(h) - r_N(h))/2}` on the support of `φ_N`, and the
//! wavelet `ψ_N` completes the split `V_M^{φ_M} = V_N^{φ_N} ⊕ V_N^{ψ_N}`.
//! The two filters feed [`crate::wavelet::FilterBank`] as they are: each
//! frequency coset carries squared filter mass `|det J|`, which is the
//! unit-isometry convention of the analysis step.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fft::{fft_pattern, ifft_pattern, unit_phase, Domain, FourierPlan, LatticeArray};
use crate::intlinalg::inverse_rational;
use crate::lattice::{PatternBasis, Window};
use crate::wavelet::FilterBank;

/// Fourier coefficients of a kernel, indexed by integer frequencies.
#[derive(Debug, Clone)]
pub struct KernelSpectrum {
    basis: Arc<PatternBasis>,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl KernelSpectrum {
    pub fn basis(&self) -> &Arc<PatternBasis> {
        &self.basis
    }

    /// Support in deterministic (lexicographic) order.
    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.coeffs.keys()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn value(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, Complex64> {
        &self.coeffs
    }

    /// `‖·‖` of the coefficient sequence (= L² norm by Parseval).
    pub fn norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨f, g⟩ = Σ_k c_k(f)·conj(c_k(g))`.
    pub fn inner(&self, other: &KernelSpectrum) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c * other.value(k).conj())
            .sum()
    }

    /// Sums `c_k` over each frequency class of `𝒢(Mᵀ)`: the symbol that
    /// divides point samples in the interpolatory change of basis.
    pub fn class_sums(&self) -> Vec<Complex64> {
        let m = self.basis.det_abs() as usize;
        let mut out = vec![Complex64::zero(); m];
        for (k, c) in &self.coeffs {
            let ints: Vec<BigInt> = k.iter().map(|&v| BigInt::from(v)).collect();
            let idx = self.basis.generator_to_index(&ints);
            out[self.basis.flat_index(&idx)] += c;
        }
        out
    }
}

/// `r(k)`: how many coordinates of `M⁻ᵀh` sit on the boundary `±1/2`, with
/// `h` the representative of `k` in `Mᵀ[-1/2, 1/2)^d`. Exact rational test.
pub fn boundary_count(k: &[BigInt], basis: &PatternBasis) -> usize {
    let h = basis.reduce_generator(k);
    let rational: Vec<BigRational> = h.iter().map(|v| BigRational::from(v.clone())).collect();
    let coords = basis.mt_inverse().mul_vec(&rational);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    coords.iter().filter(|c| c.abs() == half).count()
}

/// Enumerates `c_k(φ_M) = m^{-1/2}·2^{-r(k)/2}` on the closed support
/// `M⁻ᵀk ∈ [-1/2, 1/2]^d`.
pub fn dirichlet_spectrum(basis: &Arc<PatternBasis>) -> KernelSpectrum {
    let scale = 1.0 / (basis.det_abs() as f64).sqrt();
    let mut coeffs = BTreeMap::new();
    for k in closed_support(basis) {
        let ints: Vec<BigInt> = k.iter().map(|&v| BigInt::from(v)).collect();
        let r = boundary_count(&ints, basis);
        let value = scale * 2f64.powf(-(r as f64) / 2.0);
        coeffs.insert(k, Complex64::new(value, 0.0));
    }
    KernelSpectrum {
        basis: basis.clone(),
        coeffs,
    }
}

/// Integer points of the closed parallelepiped `Mᵀ[-1/2, 1/2]^d`, in
/// lexicographic order.
fn closed_support(basis: &PatternBasis) -> Vec<Vec<i64>> {
    let d = basis.dim();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    // k = Mᵀc with c in the cube, so |k_i| ≤ Σ_j |M_{ji}| / 2.
    let bounds: Vec<i64> = (0..d)
        .map(|i| {
            let sum: BigInt = (0..d).map(|j| basis.matrix().at(j, i).abs()).sum();
            (sum.to_i64().unwrap() + 1) / 2
        })
        .collect();
    let mut out = Vec::new();
    let mut k = vec![0i64; d];
    scan_box(&bounds, 0, &mut k, &mut |k| {
        let rational: Vec<BigRational> = k.iter().map(|&v| BigRational::from(BigInt::from(v))).collect();
        let coords = basis.mt_inverse().mul_vec(&rational);
        if coords.iter().all(|c| c.abs() <= half) {
            out.push(k.to_vec());
        }
    });
    out
}

fn scan_box(bounds: &[i64], axis: usize, k: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    if axis == bounds.len() {
        visit(k);
        return;
    }
    for v in -bounds[axis]..=bounds[axis] {
        k[axis] = v;
        scan_box(bounds, axis + 1, k, visit);
    }
}

/// Checks `M = J·N` with `|det J| = 2` and returns the cofactor `J`.
fn dyadic_cofactor(m_basis: &PatternBasis, n_basis: &PatternBasis) -> Result<crate::intlinalg::IntMatrix> {
    if m_basis.dim() != n_basis.dim() {
        return Err(Error::BadFactorization);
    }
    let quotient = m_basis
        .matrix()
        .to_rational()
        .mul(&inverse_rational(n_basis.matrix())?);
    if !quotient.is_integral() {
        return Err(Error::BadFactorization);
    }
    let j = quotient.to_int()?;
    if m_basis.det_abs() != 2 * n_basis.det_abs() {
        return Err(Error::BadFactorization);
    }
    Ok(j)
}

/// The scaling filter `â` on `𝒢(Mᵀ)` linking `c_k(φ_N) = â_{[k]}·c_k(φ_M)`:
/// `â_h = 2^{(1 + r_M(h) - r_N(h))/2}` where `N⁻ᵀh` stays in the closed
/// cube, else 0. Requires `M = J·N` with `|det J| = 2`.
pub fn scaling_filter(
    m_basis: &Arc<PatternBasis>,
    n_basis: &Arc<PatternBasis>,
) -> Result<LatticeArray> {
    dyadic_cofactor(m_basis, n_basis)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let n_inv_t = n_basis.mt_inverse();
    let values: Vec<Complex64> = m_basis
        .enumerate_generators()
        .iter()
        .map(|h| {
            let rational: Vec<BigRational> =
                h.iter().map(|v| BigRational::from(v.clone())).collect();
            let coords = n_inv_t.mul_vec(&rational);
            if coords.iter().all(|c| c.abs() <= half) {
                let r_m = boundary_count(h, m_basis);
                let r_n = boundary_count(h, n_basis);
                let exponent = (1.0 + r_m as f64 - r_n as f64) / 2.0;
                Complex64::new(2f64.powf(exponent), 0.0)
            } else {
                Complex64::zero()
            }
        })
        .collect();
    LatticeArray::new(m_basis.clone(), Domain::Frequency, values)
}

/// The unique nonzero pattern point and generator of a `|det J| = 2`
/// factor, taken from the centered windows.
fn dyadic_pair(j_basis: &PatternBasis) -> Result<(Vec<BigRational>, Vec<BigInt>)> {
    if j_basis.det_abs() != 2 {
        return Err(Error::BadFactorization);
    }
    let y = j_basis.enumerate_pattern(Window::Centered)[1].value.clone();
    let g = j_basis.enumerate_generators()[1].clone();
    Ok((y, g))
}

/// Fourier coefficients of the wavelet `ψ_N`:
/// `c_k(ψ) = c_k(φ_M)·â_{[k + Nᵀg]}·e^{-2πi kᵀN⁻¹y}` on the support of
/// `φ_M`, with `y ∈ 𝒫(J)\{0}`, `g ∈ 𝒢(Jᵀ)\{0}`.
pub fn wavelet_spectrum(
    m_basis: &Arc<PatternBasis>,
    n_basis: &Arc<PatternBasis>,
    j_basis: &Arc<PatternBasis>,
) -> Result<KernelSpectrum> {
    let j = dyadic_cofactor(m_basis, n_basis)?;
    if j != *j_basis.matrix() {
        return Err(Error::BadFactorization);
    }
    let (y, g) = dyadic_pair(j_basis)?;
    let ahat = scaling_filter(m_basis, n_basis)?;
    let phi = dirichlet_spectrum(m_basis);
    let n_t_g = n_basis.matrix().transpose().mul_vec(&g);
    let n_inv = inverse_rational(n_basis.matrix())?;
    let n_inv_y = n_inv.mul_vec(&y);

    let mut coeffs = BTreeMap::new();
    for (k, c_phi) in phi.coeffs() {
        let ints: Vec<BigInt> = k.iter().map(|&v| BigInt::from(v)).collect();
        let shifted: Vec<BigInt> = ints.iter().zip(&n_t_g).map(|(a, b)| a + b).collect();
        let idx = m_basis.generator_to_index(&shifted);
        let a_val = ahat.values()[m_basis.flat_index(&idx)];
        if a_val.norm_sqr() == 0.0 {
            continue;
        }
        // Exact rational kᵀN⁻¹y reduced mod 1 before exponentiation.
        let pairing: BigRational = ints
            .iter()
            .zip(&n_inv_y)
            .map(|(ki, yi)| BigRational::from(ki.clone()) * yi)
            .sum();
        coeffs.insert(k.clone(), c_phi * a_val * unit_phase(&pairing));
    }
    Ok(KernelSpectrum {
        basis: m_basis.clone(),
        coeffs,
    })
}

/// Builds the two-branch filter bank of the split
/// `V_M^{φ_M} = V_N^{φ_N} ⊕ V_N^{ψ_N}`: branch 0 the scaling filter,
/// branch 1 the wavelet filter `â_{[h + Nᵀg]}·e^{-2πi hᵀN⁻¹y}`.
pub fn filter_bank_from_dirichlet(
    m_basis: &Arc<PatternBasis>,
    n_basis: &Arc<PatternBasis>,
    j_basis: &Arc<PatternBasis>,
) -> Result<FilterBank> {
    let j = dyadic_cofactor(m_basis, n_basis)?;
    if j != *j_basis.matrix() {
        return Err(Error::BadFactorization);
    }
    let (y, g) = dyadic_pair(j_basis)?;
    let ahat = scaling_filter(m_basis, n_basis)?;
    let n_t_g = n_basis.matrix().transpose().mul_vec(&g);
    let n_inv = inverse_rational(n_basis.matrix())?;
    let n_inv_y = n_inv.mul_vec(&y);

    let wavelet_values: Vec<Complex64> = m_basis
        .enumerate_generators()
        .iter()
        .map(|h| {
            let shifted: Vec<BigInt> = h.iter().zip(&n_t_g).map(|(a, b)| a + b).collect();
            let idx = m_basis.generator_to_index(&shifted);
            let a_val = ahat.values()[m_basis.flat_index(&idx)];
            let pairing: BigRational = h
                .iter()
                .zip(&n_inv_y)
                .map(|(hi, yi)| BigRational::from(hi.clone()) * yi)
                .sum();
            a_val * unit_phase(&pairing)
        })
        .collect();
    let what = LatticeArray::new(m_basis.clone(), Domain::Frequency, wavelet_values)?;
    FilterBank::new(
        m_basis.clone(),
        n_basis.clone(),
        j_basis.clone(),
        vec![ahat, what],
    )
}

/// Change of basis from point samples `s_x = f(2πx)` to coefficients in the
/// orthonormal translates: `â_h = ŝ_h / (m·Φ̂_h)` with the class sums
/// `Φ̂_h = Σ_{k≡h} c_k(φ)`, then `a = ℱ(M)⁻¹â`.
pub fn samples_to_translate_coeffs(
    s: &LatticeArray,
    spectrum: &KernelSpectrum,
) -> Result<LatticeArray> {
    if s.basis().as_ref() != spectrum.basis().as_ref() {
        return Err(Error::ShapeMismatch {
            expected: spectrum.basis().det_abs() as usize,
            got: s.len(),
        });
    }
    let symbol = spectrum.class_sums();
    if symbol.iter().any(|v| v.norm_sqr() == 0.0) {
        return Err(Error::NonInvertibleKernel);
    }
    let plan = FourierPlan::new(s.basis().clone());
    let shat = fft_pattern(s, &plan)?;
    let m = s.len() as f64;
    let values: Vec<Complex64> = shat
        .values()
        .iter()
        .zip(&symbol)
        .map(|(sh, phi)| sh / (m * phi))
        .collect();
    let ahat = LatticeArray::new(s.basis().clone(), Domain::Frequency, values)?;
    ifft_pattern(&ahat, &plan)
}

/// Inverse of [`samples_to_translate_coeffs`]: point samples
/// `s_x = Σ_y a_y (T(y)φ)(2πx)` of the represented function at the pattern
/// points, via `ŝ_h = m·Φ̂_h·â_h`.
pub fn translate_coeffs_to_samples(
    a: &LatticeArray,
    spectrum: &KernelSpectrum,
) -> Result<LatticeArray> {
    if a.basis().as_ref() != spectrum.basis().as_ref() {
        return Err(Error::ShapeMismatch {
            expected: spectrum.basis().det_abs() as usize,
            got: a.len(),
        });
    }
    let symbol = spectrum.class_sums();
    let plan = FourierPlan::new(a.basis().clone());
    let ahat = fft_pattern(a, &plan)?;
    let m = a.len() as f64;
    let values: Vec<Complex64> = ahat
        .values()
        .iter()
        .zip(&symbol)
        .map(|(ah, phi)| ah * phi * m)
        .collect();
    let shat = LatticeArray::new(a.basis().clone(), Domain::Frequency, values)?;
    ifft_pattern(&shat, &plan)
}

/// Evaluates `Σ_y a_y (T(y)φ)(2πx)` at a pattern point `x` from the kernel
/// spectrum: test-friendly direct synthesis.
pub fn evaluate_translates(
    coeffs: &LatticeArray,
    spectrum: &KernelSpectrum,
    x: &[BigRational],
) -> Complex64 {
    let basis = coeffs.basis();
    let points = basis.enumerate_pattern(Window::ZeroOne);
    let mut total = Complex64::zero();
    for (flat, y) in points.iter().enumerate() {
        let a = coeffs.values()[flat];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        // (T(y)φ)(2πx) = Σ_k c_k(φ) e^{2πi kᵀ(x−y)}
        let mut translate = Complex64::zero();
        for (k, c) in spectrum.coeffs() {
            let pairing: BigRational = k
                .iter()
                .zip(x.iter().zip(&y.value))
                .map(|(&ki, (xi, yi))| BigRational::from(BigInt::from(ki)) * (xi - yi))
                .sum();
            translate += c * unit_phase(&pairing).conj();
        }
        total += a * translate;
    }
    total
}

/// Correlation row `γ[p] = Σ_k c_k(f)·conj(c_k(g))·e^{-2πi kᵀp}` over the
/// translate pattern; the Gram of `{T(u)f}` vs `{T(v)g}` is
/// `G[u,v] = γ[u ⊖ v]`, so orthonormality is `γ = δ`.
pub fn translate_cross_row(
    f: &KernelSpectrum,
    g: &KernelSpectrum,
    translates: &PatternBasis,
) -> Vec<Complex64> {
    translates
        .enumerate_pattern(Window::ZeroOne)
        .iter()
        .map(|p| {
            f.coeffs()
                .iter()
                .map(|(k, cf)| {
                    let cg = g.value(k);
                    if cg.norm_sqr() == 0.0 && cf.norm_sqr() == 0.0 {
                        return Complex64::zero();
                    }
                    let pairing: BigRational = k
                        .iter()
                        .zip(&p.value)
                        .map(|(&ki, pi)| BigRational::from(BigInt::from(ki)) * pi)
                        .sum();
                    cf * cg.conj() * unit_phase(&pairing)
                })
                .sum()
        })
        .collect()
}
