//! One level of the fast periodic wavelet transform, and multilevel chains.
//!
//! A factorization `M = J·N` splits the translation-invariant space over
//! `𝒫(M)` into `|det J|` subspaces over the coarser pattern `𝒫(N)`. In
//! frequency, every `h ∈ 𝒢(Nᵀ)` (addressed by `μ ∈ 𝔼_N`) owns the coset
//! `{h + Nᵀl : l ∈ 𝒢(Jᵀ)}` inside `𝒢(Mᵀ)`, reached as `λ = Pμ ⊕ λ_l` with
//! the generator-side projection `P` and the coset offsets `λ_l`. One
//! analysis step is, per branch `b` and coarse frequency `μ`:
//!
//! ```text
//!   d̂_b[μ] = |det J|^{-1/2} Σ_l conj(b̂_b[Pμ ⊕ λ_l]) · â[Pμ ⊕ λ_l]
//! ```
//!
//! Synthesis is the exact adjoint (no conjugate on `b̂`), so
//! reconstruct ∘ decompose is the identity whenever the translates of the
//! branch generators are orthonormal. Branch 0 belongs to `l = 0` and is the
//! low-pass slot for filter banks built by [`crate::dirichlet`].

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{
    fft_pattern_with, ifft_pattern_with, Domain, Execution, FourierPlan, LatticeArray,
};
use crate::lattice::{self, MultiIndex, PatternBasis};

/// Frequency-domain filters for one decomposition level `M = J·N`, plus the
/// precomputed coset addressing between `𝔼_N × 𝒢(Jᵀ)` and `𝔼_M`.
#[derive(Debug, Clone)]
pub struct FilterBank {
    m_basis: Arc<PatternBasis>,
    n_basis: Arc<PatternBasis>,
    j_basis: Arc<PatternBasis>,
    bhat: Vec<LatticeArray>,
    coset_offsets: Vec<MultiIndex>,
    /// Flat position in `𝔼_M` of `(μ, l)`, row-major in `μ`.
    positions: Vec<usize>,
    /// Inverse of `positions`: for each flat `λ`, the pair `(μ, l)`.
    owners: Vec<(u32, u32)>,
    m_plan: FourierPlan,
    n_plan: FourierPlan,
}

impl FilterBank {
    /// Validates `M = J·N`, the branch count `|det J|`, and that the coset
    /// addressing `(μ, l) ↦ Pμ ⊕ λ_l` is a bijection onto `𝔼_M`.
    pub fn new(
        m_basis: Arc<PatternBasis>,
        n_basis: Arc<PatternBasis>,
        j_basis: Arc<PatternBasis>,
        bhat: Vec<LatticeArray>,
    ) -> Result<Self> {
        if j_basis.dim() != n_basis.dim()
            || m_basis.dim() != n_basis.dim()
            || j_basis.matrix().mul(n_basis.matrix()) != *m_basis.matrix()
        {
            return Err(Error::BadFactorization);
        }
        let branches = j_basis.det_abs() as usize;
        if bhat.len() != branches {
            return Err(Error::ShapeMismatch {
                expected: branches,
                got: bhat.len(),
            });
        }
        for filter in &bhat {
            if filter.basis().as_ref() != m_basis.as_ref() {
                return Err(Error::ShapeMismatch {
                    expected: m_basis.det_abs() as usize,
                    got: filter.len(),
                });
            }
        }
        let offsets = coset_offsets(&j_basis, &n_basis, &m_basis)?;
        let projection = lattice::generator_projection_matrix(&n_basis, &m_basis)?;

        let n = n_basis.det_abs() as usize;
        let m = m_basis.det_abs() as usize;
        let mut positions = vec![0usize; n * branches];
        let mut owners = vec![(u32::MAX, u32::MAX); m];
        for mu_flat in 0..n {
            let mu = n_basis.multi_index(mu_flat);
            let lambda = lattice::apply_projection(&projection, &mu, &m_basis);
            for (l, offset) in offsets.iter().enumerate() {
                let target = m_basis.add_indices(&lambda, offset);
                let flat = m_basis.flat_index(&target);
                if owners[flat] != (u32::MAX, u32::MAX) {
                    return Err(Error::BadFactorization);
                }
                owners[flat] = (mu_flat as u32, l as u32);
                positions[mu_flat * branches + l] = flat;
            }
        }
        Ok(Self {
            m_plan: FourierPlan::new(m_basis.clone()),
            n_plan: FourierPlan::new(n_basis.clone()),
            m_basis,
            n_basis,
            j_basis,
            bhat,
            coset_offsets: offsets,
            positions,
            owners,
        })
    }

    pub fn m_basis(&self) -> &Arc<PatternBasis> {
        &self.m_basis
    }

    pub fn n_basis(&self) -> &Arc<PatternBasis> {
        &self.n_basis
    }

    pub fn j_basis(&self) -> &Arc<PatternBasis> {
        &self.j_basis
    }

    pub fn branch_count(&self) -> usize {
        self.bhat.len()
    }

    pub fn filters(&self) -> &[LatticeArray] {
        &self.bhat
    }

    pub fn coset_offsets(&self) -> &[MultiIndex] {
        &self.coset_offsets
    }

    pub fn m_plan(&self) -> &FourierPlan {
        &self.m_plan
    }

    pub fn n_plan(&self) -> &FourierPlan {
        &self.n_plan
    }
}

/// Per-branch coefficient arrays over `𝒫(N)` (spatial) or `𝒢(Nᵀ)`
/// (frequency).
#[derive(Debug, Clone)]
pub struct WaveletCoefficients {
    pub branches: Vec<LatticeArray>,
}

impl WaveletCoefficients {
    /// `Σ_b ‖d_b‖²`.
    pub fn energy(&self) -> f64 {
        self.branches.iter().map(|b| b.norm().powi(2)).sum()
    }
}

/// Coordinates `λ_l ∈ 𝔼_M` of `Nᵀl` for every `l ∈ 𝒢(Jᵀ)` in the μ-order of
/// `j_basis`. The offset of `l = 0` is `0` and offsets are pairwise
/// distinct.
pub fn coset_offsets(
    j_basis: &PatternBasis,
    n_basis: &PatternBasis,
    m_basis: &PatternBasis,
) -> Result<Vec<MultiIndex>> {
    if j_basis.dim() != n_basis.dim()
        || m_basis.dim() != n_basis.dim()
        || j_basis.matrix().mul(n_basis.matrix()) != *m_basis.matrix()
    {
        return Err(Error::BadFactorization);
    }
    let n_t = n_basis.matrix().transpose();
    let offsets: Vec<MultiIndex> = j_basis
        .enumerate_generators()
        .iter()
        .map(|l| m_basis.generator_to_index(&n_t.mul_vec(l)))
        .collect();
    for a in 0..offsets.len() {
        for b in a + 1..offsets.len() {
            if offsets[a] == offsets[b] {
                return Err(Error::BadFactorization);
            }
        }
    }
    Ok(offsets)
}

/// Frequency-domain analysis: one decomposition level.
pub fn decompose_step(ahat: &LatticeArray, fb: &FilterBank) -> Result<WaveletCoefficients> {
    if ahat.basis().as_ref() != fb.m_basis.as_ref() {
        return Err(Error::ShapeMismatch {
            expected: fb.m_basis.det_abs() as usize,
            got: ahat.len(),
        });
    }
    debug_assert_eq!(ahat.domain(), Domain::Frequency);
    let branches = fb.branch_count();
    let n = fb.n_basis.det_abs() as usize;
    let scale = 1.0 / (branches as f64).sqrt();
    let out: Vec<LatticeArray> = (0..branches)
        .map(|b| {
            let filter = fb.bhat[b].values();
            let values: Vec<Complex64> = (0..n)
                .into_par_iter()
                .map(|mu| {
                    let mut acc = Complex64::zero();
                    for l in 0..branches {
                        let pos = fb.positions[mu * branches + l];
                        acc += filter[pos].conj() * ahat.values()[pos];
                    }
                    acc * scale
                })
                .collect();
            LatticeArray::new(fb.n_basis.clone(), Domain::Frequency, values).unwrap()
        })
        .collect();
    Ok(WaveletCoefficients { branches: out })
}

/// Frequency-domain synthesis, the exact adjoint of [`decompose_step`].
pub fn reconstruct_step(d: &WaveletCoefficients, fb: &FilterBank) -> Result<LatticeArray> {
    let branches = fb.branch_count();
    if d.branches.len() != branches {
        return Err(Error::ShapeMismatch {
            expected: branches,
            got: d.branches.len(),
        });
    }
    for branch in &d.branches {
        if branch.basis().as_ref() != fb.n_basis.as_ref() {
            return Err(Error::ShapeMismatch {
                expected: fb.n_basis.det_abs() as usize,
                got: branch.len(),
            });
        }
    }
    let m = fb.m_basis.det_abs() as usize;
    let scale = 1.0 / (branches as f64).sqrt();
    let values: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|pos| {
            let (mu, _) = fb.owners[pos];
            let mut acc = Complex64::zero();
            for (b, branch) in d.branches.iter().enumerate() {
                acc += fb.bhat[b].values()[pos] * branch.values()[mu as usize];
            }
            acc * scale
        })
        .collect();
    LatticeArray::new(fb.m_basis.clone(), Domain::Frequency, values)
}

/// Spatial-in, spatial-out analysis: `ℱ(M)`, filter, then one inverse
/// `ℱ(N)` per branch.
pub fn full_analysis(a: &LatticeArray, fb: &FilterBank) -> Result<WaveletCoefficients> {
    full_analysis_with(a, fb, Execution::Parallel)
}

pub fn full_analysis_with(
    a: &LatticeArray,
    fb: &FilterBank,
    exec: Execution,
) -> Result<WaveletCoefficients> {
    let ahat = fft_pattern_with(a, &fb.m_plan, exec)?;
    let d = decompose_step(&ahat, fb)?;
    let branches = d
        .branches
        .iter()
        .map(|branch| ifft_pattern_with(branch, &fb.n_plan, exec))
        .collect::<Result<_>>()?;
    Ok(WaveletCoefficients { branches })
}

/// Inverse of [`full_analysis`].
pub fn full_synthesis(d: &WaveletCoefficients, fb: &FilterBank) -> Result<LatticeArray> {
    full_synthesis_with(d, fb, Execution::Parallel)
}

pub fn full_synthesis_with(
    d: &WaveletCoefficients,
    fb: &FilterBank,
    exec: Execution,
) -> Result<LatticeArray> {
    let freq = WaveletCoefficients {
        branches: d
            .branches
            .iter()
            .map(|branch| fft_pattern_with(branch, &fb.n_plan, exec))
            .collect::<Result<_>>()?,
    };
    let ahat = reconstruct_step(&freq, fb)?;
    ifft_pattern_with(&ahat, &fb.m_plan, exec)
}

/// A multilevel decomposition: per level the detail branches (spatial,
/// branches 1..), and the final low-pass approximation.
#[derive(Debug, Clone)]
pub struct MultilevelDecomposition {
    pub details: Vec<Vec<LatticeArray>>,
    pub approximation: LatticeArray,
}

impl MultilevelDecomposition {
    pub fn energy(&self) -> f64 {
        let detail: f64 = self
            .details
            .iter()
            .flatten()
            .map(|d| d.norm().powi(2))
            .sum();
        detail + self.approximation.norm().powi(2)
    }
}

/// Chains decomposition levels on the low-pass branch: one forward
/// transform up front, then filtering stays in frequency; each emitted
/// branch is inverse-transformed once.
pub fn multilevel(a: &LatticeArray, chain: &[FilterBank]) -> Result<MultilevelDecomposition> {
    let Some(first) = chain.first() else {
        return Err(Error::BadFactorization);
    };
    if a.basis().as_ref() != first.m_basis.as_ref() {
        return Err(Error::ShapeMismatch {
            expected: first.m_basis.det_abs() as usize,
            got: a.len(),
        });
    }
    for pair in chain.windows(2) {
        if pair[1].m_basis.as_ref() != pair[0].n_basis.as_ref() {
            return Err(Error::BadFactorization);
        }
    }
    let mut ahat = fft_pattern_with(a, &first.m_plan, Execution::Parallel)?;
    let mut details = Vec::with_capacity(chain.len());
    for fb in chain {
        let mut d = decompose_step(&ahat, fb)?;
        let low = d.branches.remove(0);
        let spatial = d
            .branches
            .iter()
            .map(|branch| ifft_pattern_with(branch, &fb.n_plan, Execution::Parallel))
            .collect::<Result<_>>()?;
        details.push(spatial);
        ahat = low;
    }
    let last = chain.last().unwrap();
    let approximation = ifft_pattern_with(&ahat, &last.n_plan, Execution::Parallel)?;
    Ok(MultilevelDecomposition {
        details,
        approximation,
    })
}
