//! Patterns, generating groups, their bases and orderings.
//!
//! For a regular `M ∈ ℤ^{d×d}` the pattern `𝒫(M)` is a complete set of
//! representatives of `Λ(M) = M⁻¹ℤ^d` modulo `ℤ^d`, a finite abelian group
//! of order `m = |det M|`. With the Smith normal form `M = Q·E·R`, the
//! vectors
//!
//! ```text
//!   y_j = R⁻¹ e_{d-d_M+j} / ε_{d-d_M+j}      (pattern basis)
//!   h_j = Rᵀ e_{d-d_M+j}                     (basis of 𝒢(Mᵀ))
//! ```
//!
//! span the pattern and its dual group, are biorthogonal
//! (`h_jᵀ y_i = δ_ij / ε_{d-d_M+i}`), and give both groups the lexicographic
//! multi-index ordering over `𝔼_M = ∏ {0, …, ε-1}` under which the Fourier
//! matrix becomes a pure Kronecker product. All coordinate arithmetic here is
//! exact rational; floating point only enters in the transform modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{
    determinant, inverse_rational, smith_normal_form, IntMatrix, RationalMatrix,
    SmithDecomposition,
};

/// Multi-index `λ ∈ 𝔼_M`; one coordinate per cycle of length > 1.
pub type MultiIndex = Vec<u64>;

/// Window of congruence-class representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    /// `[0, 1)^d`
    #[default]
    ZeroOne,
    /// `[-1/2, 1/2)^d`
    Centered,
}

impl Window {
    /// Reduces a scalar into the window by an integer shift. The boundary
    /// value +1/2 of the centered window maps down to -1/2 (half-open).
    pub fn reduce(&self, x: &BigRational) -> BigRational {
        match self {
            Window::ZeroOne => x - x.floor(),
            Window::Centered => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let shifted = x + &half;
                shifted.clone() - shifted.floor() - half
            }
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        match self {
            Window::ZeroOne => !x.is_negative() && *x < BigRational::one(),
            Window::Centered => *x >= -&half && *x < half,
        }
    }
}

/// A point of `𝒫(M)`: a rational vector reduced into its window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPoint {
    pub value: Vec<BigRational>,
    pub home: Window,
}

impl PatternPoint {
    pub fn to_f64(&self) -> Vec<f64> {
        self.value.iter().map(|v| v.to_f64().unwrap()).collect()
    }
}

/// Basis data for `𝒫(M)` and `𝒢(Mᵀ)` derived from one Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternBasis {
    matrix: IntMatrix,
    transpose: IntMatrix,
    snf: SmithDecomposition,
    m_inverse: RationalMatrix,
    mt_inverse: RationalMatrix,
    r_inverse: RationalMatrix,
    d_m: usize,
    cycle_lengths: Vec<u64>,
    pattern_vectors: Vec<Vec<BigRational>>,
    generator_vectors: Vec<Vec<BigInt>>,
    m: u64,
}

/// Builds the basis with the crate's deterministic Smith normal form.
pub fn build_basis(matrix: &IntMatrix) -> Result<PatternBasis> {
    PatternBasis::new(matrix)
}

impl PatternBasis {
    pub fn new(matrix: &IntMatrix) -> Result<Self> {
        let snf = smith_normal_form(matrix)?;
        Self::with_snf(matrix, snf)
    }

    /// Builds the basis from a caller-supplied decomposition, e.g. to match
    /// a published choice of `Q` and `R`. The elementary divisors are unique
    /// but `Q`, `R` (and with them the basis vectors) are not.
    pub fn with_snf(matrix: &IntMatrix, snf: SmithDecomposition) -> Result<Self> {
        let d = matrix.dim();
        if snf.q.mul(&snf.diagonal_matrix()).mul(&snf.r) != *matrix
            || determinant(&snf.q).abs() != BigInt::one()
            || determinant(&snf.r).abs() != BigInt::one()
        {
            return Err(Error::Parse("not a Smith decomposition of the matrix".into()));
        }
        for (i, eps) in snf.e.iter().enumerate() {
            if *eps < BigInt::one()
                || (i + 1 < snf.e.len() && !(&snf.e[i + 1] % eps).is_zero())
            {
                return Err(Error::Parse(
                    "elementary divisors must be positive and form a divisibility chain".into(),
                ));
            }
        }
        let det = determinant(matrix);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let m = det
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Unsupported("determinant exceeds u64".into()))?;

        let d_m = snf.e.iter().filter(|e| **e > BigInt::one()).count();
        let cycle_lengths: Vec<u64> = snf.e[d - d_m..]
            .iter()
            .map(|e| {
                e.to_u64()
                    .ok_or_else(|| Error::Unsupported("cycle length exceeds u64".into()))
            })
            .collect::<Result<_>>()?;

        let r_inverse = inverse_rational(&snf.r)?;
        let mut pattern_vectors = Vec::with_capacity(d_m);
        let mut generator_vectors = Vec::with_capacity(d_m);
        let r_t = snf.r.transpose();
        for j in 0..d_m {
            let axis = d - d_m + j;
            let eps = &snf.e[axis];
            // y_j = R⁻¹ e_axis / ε_axis
            let y: Vec<BigRational> = (0..d)
                .map(|i| r_inverse.at(i, axis) / BigRational::from(eps.clone()))
                .collect();
            // h_j = Rᵀ e_axis
            let h: Vec<BigInt> = (0..d).map(|i| r_t.at(i, axis).clone()).collect();
            pattern_vectors.push(y);
            generator_vectors.push(h);
        }

        Ok(Self {
            transpose: matrix.transpose(),
            m_inverse: inverse_rational(matrix)?,
            mt_inverse: inverse_rational(&matrix.transpose())?,
            matrix: matrix.clone(),
            snf,
            r_inverse,
            d_m,
            cycle_lengths,
            pattern_vectors,
            generator_vectors,
            m,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn snf(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Number of cycles of length > 1 (the dimension of the pattern).
    pub fn pattern_dim(&self) -> usize {
        self.d_m
    }

    /// The cycle lengths `(ε_{d-d_M+1}, …, ε_d)`, the shape of `𝔼_M`.
    pub fn cycle_lengths(&self) -> &[u64] {
        &self.cycle_lengths
    }

    /// `m = |det M|`, the number of pattern points.
    pub fn det_abs(&self) -> u64 {
        self.m
    }

    pub fn pattern_vectors(&self) -> &[Vec<BigRational>] {
        &self.pattern_vectors
    }

    pub fn generator_vectors(&self) -> &[Vec<BigInt>] {
        &self.generator_vectors
    }

    pub fn m_inverse(&self) -> &RationalMatrix {
        &self.m_inverse
    }

    /// `M⁻ᵀ`, the coordinate map of the generator parallelepiped.
    pub fn mt_inverse(&self) -> &RationalMatrix {
        &self.mt_inverse
    }

    /// Row-major flat position of a multi-index over the cycle lengths.
    pub fn flat_index(&self, idx: &[u64]) -> usize {
        debug_assert_eq!(idx.len(), self.d_m);
        let mut flat = 0usize;
        for (i, &len) in self.cycle_lengths.iter().enumerate() {
            debug_assert!(idx[i] < len);
            flat = flat * len as usize + idx[i] as usize;
        }
        flat
    }

    pub fn multi_index(&self, mut flat: usize) -> MultiIndex {
        let mut idx = vec![0u64; self.d_m];
        for (i, &len) in self.cycle_lengths.iter().enumerate().rev() {
            idx[i] = (flat % len as usize) as u64;
            flat /= len as usize;
        }
        idx
    }

    /// All multi-indices of `𝔼_M` in lexicographic (row-major) order.
    pub fn indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.m as usize).map(|flat| self.multi_index(flat))
    }

    /// Componentwise addition modulo the cycle lengths.
    pub fn add_indices(&self, a: &[u64], b: &[u64]) -> MultiIndex {
        self.cycle_lengths
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&len, (&x, &y))| (x + y) % len)
            .collect()
    }

    /// Reduces a lattice point into the window. Errors when `M·x ∉ ℤ^d`.
    pub fn modulo_pattern(&self, x: &[BigRational], window: Window) -> Result<PatternPoint> {
        let image = self.matrix.mul_rational_vec(x);
        if !image.iter().all(|v| v.is_integer()) {
            return Err(Error::NotInLattice);
        }
        Ok(PatternPoint {
            value: x.iter().map(|c| window.reduce(c)).collect(),
            home: window,
        })
    }

    /// The pattern in lexicographic λ-order: the point at `λ` is
    /// `Σ_j λ_j y_j` reduced into the window.
    pub fn enumerate_pattern(&self, window: Window) -> Vec<PatternPoint> {
        self.indices()
            .map(|idx| {
                let coords = self.combine_pattern_vectors(&idx);
                PatternPoint {
                    value: coords.iter().map(|c| window.reduce(c)).collect(),
                    home: window,
                }
            })
            .collect()
    }

    /// `Σ_j λ_j y_j` without reduction.
    pub fn combine_pattern_vectors(&self, idx: &[u64]) -> Vec<BigRational> {
        let d = self.dim();
        let mut coords = vec![BigRational::zero(); d];
        for (j, &lambda) in idx.iter().enumerate() {
            let factor = BigRational::from(BigInt::from(lambda));
            for (i, coord) in coords.iter_mut().enumerate() {
                *coord += &factor * &self.pattern_vectors[j][i];
            }
        }
        coords
    }

    /// `𝒢(Mᵀ)` in lexicographic μ-order, representatives taken from the
    /// half-open parallelepiped `Mᵀ[-1/2, 1/2)^d`.
    pub fn enumerate_generators(&self) -> Vec<Vec<BigInt>> {
        self.indices()
            .map(|idx| {
                let mut sum = vec![BigInt::zero(); self.dim()];
                for (j, &mu) in idx.iter().enumerate() {
                    let factor = BigInt::from(mu);
                    for (i, s) in sum.iter_mut().enumerate() {
                        *s += &factor * &self.generator_vectors[j][i];
                    }
                }
                self.reduce_generator(&sum)
            })
            .collect()
    }

    /// Reduces an integer vector into `Mᵀ[-1/2, 1/2)^d` within its class
    /// modulo `Mᵀℤ^d`.
    pub fn reduce_generator(&self, k: &[BigInt]) -> Vec<BigInt> {
        let rational: Vec<BigRational> = k.iter().map(|v| BigRational::from(v.clone())).collect();
        let coords = self.mt_inverse.mul_vec(&rational);
        let reduced: Vec<BigRational> = coords.iter().map(|c| Window::Centered.reduce(c)).collect();
        let back = self.transpose.to_rational().mul_vec(&reduced);
        back.into_iter()
            .map(|v| {
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    /// Coordinates of a lattice point: `λ_j = ε_j (R·x)_{d-d_M+j} mod ε_j`.
    pub fn point_to_index(&self, x: &[BigRational]) -> Result<MultiIndex> {
        let d = self.dim();
        let rx = self.snf.r.to_rational().mul_vec(x);
        let mut idx = vec![0u64; self.d_m];
        for i in 0..d {
            let scaled = BigRational::from(self.snf.e[i].clone()) * &rx[i];
            if !scaled.is_integer() {
                return Err(Error::NotInPattern);
            }
            if i >= d - self.d_m {
                let j = i - (d - self.d_m);
                let eps = BigInt::from(self.cycle_lengths[j]);
                let residue = scaled.to_integer().mod_floor(&eps);
                idx[j] = residue.to_u64().unwrap();
            }
        }
        Ok(idx)
    }

    /// Coordinates of the class of any `k ∈ ℤ^d` in `𝒢(Mᵀ)`:
    /// `μ_j = ε_j (kᵀ y_j) mod ε_j`, exact via biorthogonality.
    pub fn generator_to_index(&self, k: &[BigInt]) -> MultiIndex {
        (0..self.d_m)
            .map(|j| {
                let eps = BigInt::from(self.cycle_lengths[j]);
                let pairing: BigRational = k
                    .iter()
                    .zip(&self.pattern_vectors[j])
                    .map(|(ki, yi)| BigRational::from(ki.clone()) * yi)
                    .sum();
                let scaled = BigRational::from(eps.clone()) * pairing;
                debug_assert!(scaled.is_integer());
                scaled.to_integer().mod_floor(&eps).to_u64().unwrap()
            })
            .collect()
    }
}

/// Splits `y ∈ 𝒫(M)` for `M = J·N` into the unique pair with
/// `y ≡ x + N⁻¹z (mod ℤ^d)`, `x ∈ 𝒫(N)`, `z ∈ 𝒫(J)`.
pub fn split_point(
    y: &PatternPoint,
    m: &IntMatrix,
    j: &IntMatrix,
    n: &IntMatrix,
) -> Result<(PatternPoint, PatternPoint)> {
    if j.dim() != n.dim() || m.dim() != n.dim() || j.mul(n) != *m {
        return Err(Error::BadFactorization);
    }
    let window = y.home;
    // N·y lies on Λ(J); its class there is z.
    let ny = n.mul_rational_vec(&y.value);
    let j_image = j.mul_rational_vec(&ny);
    if !j_image.iter().all(|v| v.is_integer()) {
        return Err(Error::NotInLattice);
    }
    let z: Vec<BigRational> = ny.iter().map(|c| window.reduce(c)).collect();
    // x = y − N⁻¹z reduced into 𝒫(N).
    let n_inv = inverse_rational(n)?;
    let n_inv_z = n_inv.mul_vec(&z);
    let x: Vec<BigRational> = y
        .value
        .iter()
        .zip(&n_inv_z)
        .map(|(a, b)| window.reduce(&(a - b)))
        .collect();
    Ok((
        PatternPoint {
            value: x,
            home: window,
        },
        PatternPoint {
            value: z,
            home: window,
        },
    ))
}

/// The matrix `P ∈ ℕ_0^{d_M×d_N}` whose columns are the `𝔼_M`-coordinates of
/// the pattern basis vectors of `N`; coordinates of `w ∈ 𝒫(N)` transform as
/// `λ = P·μ mod` cycle lengths. Requires `𝒫(N) ⊆ 𝒫(M)`, i.e. `M·N⁻¹ ∈ ℤ^{d×d}`.
pub fn projection_matrix(n_basis: &PatternBasis, m_basis: &PatternBasis) -> Result<Vec<Vec<u64>>> {
    check_subpattern(n_basis, m_basis)?;
    let mut columns = Vec::with_capacity(n_basis.pattern_dim());
    for y in n_basis.pattern_vectors() {
        columns.push(m_basis.point_to_index(y)?);
    }
    Ok(transpose_columns(&columns, m_basis.pattern_dim()))
}

/// Generator-side analogue of [`projection_matrix`]: columns are the
/// `𝔼_M`-coordinates of the `𝒢(Nᵀ)` basis vectors as classes in `𝒢(Mᵀ)`.
/// For `μ ∈ 𝔼_N`, `P·μ mod` cycle lengths addresses a member of the coset
/// `h_μ + Nᵀ𝒢(Jᵀ)` that the frequency `h_μ ∈ 𝒢(Nᵀ)` occupies in `𝒢(Mᵀ)`.
pub fn generator_projection_matrix(
    n_basis: &PatternBasis,
    m_basis: &PatternBasis,
) -> Result<Vec<Vec<u64>>> {
    check_subpattern(n_basis, m_basis)?;
    let mut columns = Vec::with_capacity(n_basis.pattern_dim());
    for h in n_basis.generator_vectors() {
        columns.push(m_basis.generator_to_index(h));
    }
    Ok(transpose_columns(&columns, m_basis.pattern_dim()))
}

fn check_subpattern(n_basis: &PatternBasis, m_basis: &PatternBasis) -> Result<()> {
    if n_basis.dim() != m_basis.dim() {
        return Err(Error::NotASubpattern);
    }
    let quotient = m_basis
        .matrix()
        .to_rational()
        .mul(&inverse_rational(n_basis.matrix())?);
    if !quotient.is_integral() {
        return Err(Error::NotASubpattern);
    }
    Ok(())
}

fn transpose_columns(columns: &[Vec<u64>], rows: usize) -> Vec<Vec<u64>> {
    (0..rows)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect()
}

/// Applies `P` to a multi-index and reduces modulo the cycle lengths of the
/// target basis.
pub fn apply_projection(p: &[Vec<u64>], mu: &[u64], target: &PatternBasis) -> MultiIndex {
    p.iter()
        .zip(target.cycle_lengths())
        .map(|(row, &len)| {
            let s: u128 = row.iter().zip(mu).map(|(&a, &b)| a as u128 * b as u128).sum();
            (s % len as u128) as u64
        })
        .collect()
}

/// Which of the two cases of the scaling property a factorization falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingCase {
    /// `N⁻¹z_1` leaves the rational span of the `N`-basis: the pattern gains
    /// an axis, `d_M = d_N + 1`.
    NewDirection,
    /// `N⁻¹z_1` stays in the span: `d_M = d_N` and one cycle is refined,
    /// `λ = P·μ / ε_d^J`.
    RefinedCycle,
}

/// Report of the scaling property for a factorization `M = J·N` with `d_J = 1`.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub case: ScalingCase,
    pub d_m: usize,
    pub d_n: usize,
    pub j_cycle: u64,
    /// Case 1: (axis index `l`, multiplier λ, cycle `ε_l^M = ε_d^J`), when
    /// the deterministic basis is adapted to the split. The canonical basis
    /// need not be (the new cycle can sit diagonally across axes); then the
    /// direct-sum structure 𝒫(M) = 𝒫(N) ⊕ ⟨N⁻¹z_1⟩ is verified by
    /// enumeration instead and no axis is reported.
    pub new_axis: Option<(usize, u64, u64)>,
    /// Case 2: (`λ ∈ 𝔼_M` of `N⁻¹z_1`, `μ ∈ 𝔼_N` of `ε_d^J·N⁻¹z_1`).
    pub coords: Option<(MultiIndex, MultiIndex)>,
}

/// Classifies and verifies the scaling property of `M = J·N` with `d_J = 1`.
///
/// Factors with more than one nontrivial cycle are rejected: their basis
/// vectors split into the two cases one by one, and the coordinate
/// bookkeeping that matters in practice is already covered by
/// [`projection_matrix`]. The single-cycle case also requires the new
/// cycle length to share a factor with the coarse cycles — a cycle coprime
/// to all of them merges into an existing invariant factor instead of
/// adding a dimension, and that situation is reported as an error.
pub fn scaling_case(j: &IntMatrix, n: &IntMatrix) -> Result<ScalingReport> {
    if j.dim() != n.dim() {
        return Err(Error::BadFactorization);
    }
    let m = j.mul(n);
    let j_basis = PatternBasis::new(j)?;
    let n_basis = PatternBasis::new(n)?;
    let m_basis = PatternBasis::new(&m)?;
    if j_basis.pattern_dim() != 1 {
        return Err(Error::Unsupported(format!(
            "scaling property needs d_J = 1, got {}",
            j_basis.pattern_dim()
        )));
    }
    let j_cycle = j_basis.cycle_lengths()[0];
    let z1 = &j_basis.pattern_vectors()[0];
    let n_inv = inverse_rational(n)?;
    let v = n_inv.mul_vec(z1); // N⁻¹z_1 ∈ 𝒫(M)

    let in_span = in_rational_span_mod_z(&v, n_basis.pattern_vectors(), n.dim());
    let d_m = m_basis.pattern_dim();
    let d_n = n_basis.pattern_dim();

    if in_span {
        if d_m != d_n {
            return Err(Error::Unsupported(format!(
                "scaling case 2 expected d_M = d_N, got {d_m} vs {d_n}"
            )));
        }
        let lambda = m_basis.point_to_index(&v)?;
        let scaled: Vec<BigRational> = v
            .iter()
            .map(|c| BigRational::from(BigInt::from(j_cycle)) * c)
            .collect();
        let mu = n_basis.point_to_index(&scaled)?;
        // λ = P·μ / ε_d^J as pattern coordinates: ε_d^J·λ_l ≡ (Pμ)_l mod ε_l^M.
        let p = projection_matrix(&n_basis, &m_basis)?;
        for (l, row) in p.iter().enumerate() {
            let pm: u128 = row.iter().zip(&mu).map(|(&a, &b)| a as u128 * b as u128).sum();
            let len = m_basis.cycle_lengths()[l] as u128;
            if pm % len != (j_cycle as u128 * lambda[l] as u128) % len {
                return Err(Error::Unsupported(
                    "scaling case 2 coordinate identity violated".into(),
                ));
            }
        }
        Ok(ScalingReport {
            case: ScalingCase::RefinedCycle,
            d_m,
            d_n,
            j_cycle,
            new_axis: None,
            coords: Some((lambda, mu)),
        })
    } else {
        if d_m != d_n + 1 {
            // Happens when ε_d^J is coprime to a cycle of N, so the new
            // cycle merges into an existing invariant factor.
            return Err(Error::Unsupported(format!(
                "scaling case 1 expected d_M = d_N + 1, got {d_m} vs {d_n} \
                 (the J-cycle merges with a coprime cycle of N)"
            )));
        }
        // Adapted-basis form: some x_l with ε_l^M = ε_d^J spans the new
        // cycle, N⁻¹z_1 ≡ λ·x_l with 0 < λ < ε_d^J.
        let target = m_basis.modulo_pattern(&v, Window::ZeroOne)?;
        let mut found = None;
        'axes: for (l, x_l) in m_basis.pattern_vectors().iter().enumerate() {
            if m_basis.cycle_lengths()[l] != j_cycle {
                continue;
            }
            for t in 1..j_cycle {
                let candidate: Vec<BigRational> = x_l
                    .iter()
                    .map(|c| BigRational::from(BigInt::from(t)) * c)
                    .collect();
                if m_basis.modulo_pattern(&candidate, Window::ZeroOne)? == target {
                    found = Some((l, t, j_cycle));
                    break 'axes;
                }
            }
        }
        if found.is_none() {
            // The deterministic basis is not adapted to the split; verify
            // the split itself: (w, θ) ↦ w + θ·N⁻¹z_1 reaches every pattern
            // point exactly once.
            verify_split_structure(&m_basis, &n_basis, &v, j_cycle)?;
        }
        Ok(ScalingReport {
            case: ScalingCase::NewDirection,
            d_m,
            d_n,
            j_cycle,
            new_axis: found,
            coords: None,
        })
    }
}

/// Enumeration check that `𝒫(M) = 𝒫(N) ⊕ ⟨v⟩` with `⟨v⟩` of order `cycle`.
fn verify_split_structure(
    m_basis: &PatternBasis,
    n_basis: &PatternBasis,
    v: &[BigRational],
    cycle: u64,
) -> Result<()> {
    let m = m_basis.det_abs();
    if m > 4096 {
        return Err(Error::Unsupported(
            "pattern too large to verify the split structure by enumeration".into(),
        ));
    }
    let mut seen = vec![false; m as usize];
    for w in n_basis.enumerate_pattern(Window::ZeroOne) {
        for theta in 0..cycle {
            let point: Vec<BigRational> = w
                .value
                .iter()
                .zip(v)
                .map(|(wi, vi)| wi + BigRational::from(BigInt::from(theta)) * vi)
                .collect();
            let idx = m_basis.point_to_index(&point)?;
            let flat = m_basis.flat_index(&idx);
            if seen[flat] {
                return Err(Error::Unsupported(
                    "scaling case 1: split decomposition is not unique".into(),
                ));
            }
            seen[flat] = true;
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "scaling case 1: split decomposition does not cover the pattern".into(),
        ))
    }
}

/// Decides `v ∈ span_ℚ{basis} + ℤ^d` by exact rational/integer arithmetic.
fn in_rational_span_mod_z(v: &[BigRational], basis: &[Vec<BigRational>], dim: usize) -> bool {
    let r = basis.len();
    if r == dim {
        return true;
    }
    if r == 0 {
        return v.iter().all(|c| c.is_integer());
    }
    // Left annihilator of the d×r basis matrix: rows g with g·Y = 0.
    let g = left_annihilator(basis, dim);
    // v ∈ span + ℤ^d  ⇔  G·v ∈ G·ℤ^d.
    let u: Vec<BigRational> = g
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(gi, vi)| BigRational::from(gi.clone()) * vi)
                .sum()
        })
        .collect();
    if !u.iter().all(|c| c.is_integer()) {
        return false;
    }
    let u: Vec<BigInt> = u.into_iter().map(|c| c.to_integer()).collect();
    in_image_lattice(&g, &u)
}

/// Primitive integer rows spanning the left null space of the d×r matrix
/// whose columns are `basis`.
fn left_annihilator(basis: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigInt>> {
    let r = basis.len();
    // Solve Yᵀf = 0 by Gaussian elimination on the r×d matrix Yᵀ.
    let mut a: Vec<Vec<BigRational>> = (0..r)
        .map(|k| (0..dim).map(|i| basis[k][i].clone()).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        if row == r {
            break;
        }
        let Some(p) = (row..r).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pivot = a[row][col].clone();
        for x in &mut a[row] {
            *x = &*x / &pivot;
        }
        for i in 0..r {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in 0..dim {
                    let sub = &f * &a[row][c];
                    a[i][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    // Free columns parameterize the null space.
    let mut rows = Vec::new();
    for free in (0..dim).filter(|c| !pivot_cols.contains(c)) {
        let mut f = vec![BigRational::zero(); dim];
        f[free] = BigRational::one();
        for (rr, &pc) in pivot_cols.iter().enumerate() {
            f[pc] = -a[rr][free].clone();
        }
        // Scale to a primitive integer vector.
        let lcm = f.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut int_row: Vec<BigInt> = f
            .iter()
            .map(|x| (x * BigRational::from(lcm.clone())).to_integer())
            .collect();
        let gcd = int_row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !gcd.is_zero() && gcd != BigInt::one() {
            for x in &mut int_row {
                *x = &*x / &gcd;
            }
        }
        rows.push(int_row);
    }
    rows
}

/// Membership of `u` in the lattice `G·ℤ^d` (G has full row rank).
fn in_image_lattice(g: &[Vec<BigInt>], u: &[BigInt]) -> bool {
    let rows = g.len();
    let cols = g[0].len();
    // Column reduction to a triangular basis of the image.
    let mut a: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| (0..rows).map(|i| g[i][j].clone()).collect())
        .collect();
    for i in 0..rows {
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for (j, col) in a.iter().enumerate().skip(i) {
                if col[i].is_zero() {
                    continue;
                }
                let mag = col[i].abs();
                if best.as_ref().map_or(true, |(_, b)| mag < *b) {
                    best = Some((j, mag));
                }
            }
            let Some((bj, _)) = best else {
                return false; // rank defect; cannot happen for full-rank G
            };
            a.swap(i, bj);
            let mut clean = true;
            for j in i + 1..cols {
                if a[j][i].is_zero() {
                    continue;
                }
                let q = &a[j][i] / &a[i][i];
                if !q.is_zero() {
                    for rr in 0..rows {
                        let sub = &q * &a[i][rr];
                        a[j][rr] -= sub;
                    }
                }
                if !a[j][i].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    // Forward substitution: solve the triangular system over ℚ.
    let mut residue: Vec<BigRational> = u.iter().map(|x| BigRational::from(x.clone())).collect();
    for i in 0..rows {
        let t = BigRational::from(a[i][i].clone());
        let c = &residue[i] / &t;
        if !c.is_integer() {
            return false;
        }
        for rr in 0..rows {
            let sub = &c * BigRational::from(a[i][rr].clone());
            residue[rr] -= sub;
        }
    }
    residue.iter().all(|x| x.is_zero())
}
