//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with the measured quantity next to its pinned bound.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pattern_fft::cli::{named_factor, normal_form_matrix};
use pattern_fft::dirichlet;
use pattern_fft::fft::{
    assert_kronecker_structure, cyclic_dft_matrix, dft_naive, fft_pattern, fft_pattern_with,
    fourier_matrix, ifft_pattern, Domain, Execution, FourierPlan, LatticeArray,
};
use pattern_fft::intlinalg::{determinant, inverse_rational, smith_normal_form, IntMatrix, SmithDecomposition};
use pattern_fft::lattice::{
    apply_projection, generator_projection_matrix, scaling_case, PatternBasis, ScalingCase, Window,
};
use pattern_fft::wavelet::{self, coset_offsets, WaveletCoefficients};
use pattern_fft::{boxspline, io};

// Criteria run one at a time: several are timing-sensitive and the box
// may have few cores.
static GATE: Mutex<()> = Mutex::new(());

fn serialized() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn report(criterion: u32, name: &str, pass: bool, details: &str) {
    println!(
        "criterion {criterion:2} [{}] {name}: {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {details}");
}

fn showcase_matrix() -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[4, -3], &[4, 5]])
}

/// The Smith factors printed for the 32-point showcase. Their product is
/// [[3,-4],[5,4]]; only that matrix is consistent with the published basis
/// vector y_1 = (3/8, 1/32).
fn showcase_snf() -> SmithDecomposition {
    SmithDecomposition {
        q: IntMatrix::from_i64_rows(&[&[3, 1], &[5, 2]]),
        e: vec![BigInt::one(), BigInt::from(32)],
        r: IntMatrix::from_i64_rows(&[&[1, -12], &[0, 1]]),
    }
}

fn random_regular(rng: &mut impl Rng, dim: usize, bound: i64) -> IntMatrix {
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

fn random_regular_bounded(rng: &mut impl Rng, dim: usize, bound: i64, max_det: u64) -> IntMatrix {
    loop {
        let m = random_regular(rng, dim, bound);
        if let Some(det) = determinant(&m).abs().to_u64() {
            if det <= max_det {
                return m;
            }
        }
    }
}

fn random_unimodular(rng: &mut impl Rng, dim: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..6 {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        while j == i {
            j = rng.gen_range(0..dim);
        }
        match rng.gen_range(0..3) {
            0 => {
                let t = rng.gen_range(-2i64..=2);
                for c in 0..dim {
                    rows[i][c] += t * rows[j][c];
                }
            }
            1 => rows.swap(i, j),
            _ => (0..dim).for_each(|c| rows[i][c] = -rows[i][c]),
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IntMatrix::from_i64_rows(&refs)
}

fn random_values(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den.max(1e-300)).sqrt()
}

fn shared(m: &IntMatrix) -> Arc<PatternBasis> {
    Arc::new(PatternBasis::new(m).unwrap())
}

#[test]
fn criterion_01_snf_correctness() {
    let _gate = serialized();
    let started = Instant::now();
    let snf = smith_normal_form(&showcase_matrix()).unwrap();
    let showcase_ok = snf.e == vec![BigInt::one(), BigInt::from(32)];

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ok = showcase_ok;
    for i in 0..1000 {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let m = random_regular(&mut rng, dim, 20);
        let snf = smith_normal_form(&m).unwrap();
        ok &= snf.q.mul(&snf.diagonal_matrix()).mul(&snf.r) == m;
        ok &= determinant(&snf.q).abs() == BigInt::one();
        ok &= determinant(&snf.r).abs() == BigInt::one();
        let mut product = BigInt::one();
        for j in 0..snf.e.len() {
            ok &= snf.e[j] >= BigInt::one();
            if j + 1 < snf.e.len() {
                ok &= (&snf.e[j + 1] % &snf.e[j]).is_zero();
            }
            product *= &snf.e[j];
        }
        ok &= product == determinant(&m).abs();
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        1,
        "Smith normal form",
        ok && elapsed < 10.0,
        &format!("E = diag(1,32) {showcase_ok}; 1000 random matrices exact; {elapsed:.2}s < 10s"),
    );
}

#[test]
fn criterion_02_basis_biorthogonality() {
    let _gate = serialized();
    let started = Instant::now();
    // Pinned basis vector, validated against the printed Smith factors
    // (their product [[3,-4],[5,4]] is the matrix they decompose).
    let snf = showcase_snf();
    let matrix = snf.q.mul(&snf.diagonal_matrix()).mul(&snf.r);
    let basis = PatternBasis::with_snf(&matrix, snf).unwrap();
    let expect = vec![
        BigRational::new(BigInt::from(3), BigInt::from(8)),
        BigRational::new(BigInt::from(1), BigInt::from(32)),
    ];
    let y_ok = basis.pattern_vectors()[0] == expect
        && basis.generator_vectors()[0] == vec![BigInt::zero(), BigInt::one()];

    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut bi_ok = true;
    for i in 0..500 {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let m = random_regular(&mut rng, dim, 10);
        let basis = PatternBasis::new(&m).unwrap();
        for (j, h) in basis.generator_vectors().iter().enumerate() {
            for (i2, y) in basis.pattern_vectors().iter().enumerate() {
                let pairing: BigRational = h
                    .iter()
                    .zip(y)
                    .map(|(a, b)| BigRational::from(a.clone()) * b)
                    .sum();
                let expected = if i2 == j {
                    BigRational::new(BigInt::one(), BigInt::from(basis.cycle_lengths()[i2]))
                } else {
                    BigRational::zero()
                };
                bi_ok &= pairing == expected;
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        2,
        "pattern basis and biorthogonality",
        y_ok && bi_ok && elapsed < 10.0,
        &format!("y_1 = (3/8, 1/32) {y_ok}; hᵀy = δ/ε on 500 matrices {bi_ok}; {elapsed:.2}s < 10s"),
    );
}

#[test]
fn criterion_03_kronecker_structure() {
    let _gate = serialized();
    let started = Instant::now();
    let mut ok = true;

    // The showcase pattern is one 32-cycle: its Fourier matrix must be ℱ_32.
    let basis = shared(&showcase_matrix());
    let dense = fourier_matrix(&basis, 4096).unwrap();
    let f32ref = cyclic_dft_matrix(32);
    let mut max_dev: f64 = 0.0;
    for r in 0..32 {
        for c in 0..32 {
            max_dev = max_dev.max((dense[r][c] - f32ref[r][c]).norm());
        }
    }
    ok &= max_dev <= 1e-12;

    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..50 {
        let m = random_regular_bounded(&mut rng, 2, 9, 256);
        ok &= assert_kronecker_structure(&shared(&m), 4096).unwrap();
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        3,
        "Kronecker factorization of the Fourier matrix",
        ok && elapsed < 60.0,
        &format!("showcase deviation {max_dev:.2e} ≤ 1e-12; 50 random matrices ≤ 1e-12; {elapsed:.1}s < 60s"),
    );
}

#[test]
fn criterion_04_05_fft_oracle_and_parseval() {
    let _gate = serialized();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst_oracle: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for i in 0..200 {
        let dim = if i % 3 == 0 { 3 } else { 2 };
        let m = random_regular_bounded(&mut rng, dim, 10, 512);
        let basis = shared(&m);
        let plan = FourierPlan::new(basis.clone());
        let a = LatticeArray::new(
            basis.clone(),
            Domain::Spatial,
            random_values(&mut rng, basis.det_abs() as usize),
        )
        .unwrap();
        let fast = fft_pattern(&a, &plan).unwrap();
        let slow = dft_naive(&a, 4096).unwrap();
        worst_oracle = worst_oracle.max(rel_l2(fast.values(), slow.values()));
        worst_parseval = worst_parseval.max((fast.norm() - a.norm()).abs() / a.norm());
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        4,
        "fast transform vs dense oracle",
        worst_oracle <= 1e-10 && elapsed < 60.0,
        &format!("worst relative ℓ² error {worst_oracle:.2e} ≤ 1e-10 over 200 pairs; {elapsed:.1}s < 60s"),
    );
    report(
        5,
        "Parseval / unitarity",
        worst_parseval <= 1e-10,
        &format!("worst relative norm deviation {worst_parseval:.2e} ≤ 1e-10"),
    );
}

#[test]
fn criterion_06_complexity_scaling_and_speedup() {
    let _gate = serialized();
    let started = Instant::now();

    // Parallel speedup with ≥ 4 threads at m = 2^20 (two-cycle shape),
    // measured as medians of interleaved serial/parallel pairs.
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(4);
    let speed_basis = shared(&normal_form_matrix(1 << 10, 0, 1 << 10));
    let speed_plan = FourierPlan::new(speed_basis.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let speed_input = LatticeArray::new(
        speed_basis.clone(),
        Domain::Spatial,
        random_values(&mut rng, speed_basis.det_abs() as usize),
    )
    .unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let _ = fft_pattern_with(&speed_input, &speed_plan, Execution::Serial).unwrap();
    let _ = pool.install(|| fft_pattern_with(&speed_input, &speed_plan, Execution::Parallel).unwrap());
    let mut serial_samples = Vec::new();
    let mut parallel_samples = Vec::new();
    for _ in 0..12 {
        let t = Instant::now();
        std::hint::black_box(fft_pattern_with(&speed_input, &speed_plan, Execution::Serial).unwrap());
        serial_samples.push(t.elapsed().as_secs_f64());
        let t = Instant::now();
        std::hint::black_box(
            pool.install(|| fft_pattern_with(&speed_input, &speed_plan, Execution::Parallel).unwrap()),
        );
        parallel_samples.push(t.elapsed().as_secs_f64());
    }
    let median = |v: &mut Vec<f64>| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    let speedup = median(&mut serial_samples) / median(&mut parallel_samples);
    drop(pool);

    // Serial seconds per transform for m = 2^12..2^20, both normal forms:
    // i = 0 (two cycles) and i = 1 (a single m-cycle). Noise on a shared
    // box is strictly additive, so the minimum over repetitions estimates
    // the true cost.
    let mut slopes = Vec::new();
    for shape in [0u64, 1] {
        let mut points = Vec::new();
        for p in 12..=20u32 {
            let m = 1u64 << p;
            let k = 1u64 << p.div_ceil(2);
            let l = m / k;
            let reps = ((1u64 << 22) / m).clamp(5, 256) as usize;
            let basis = shared(&normal_form_matrix(l, shape, k));
            let plan = FourierPlan::new(basis.clone());
            let input = LatticeArray::new(
                basis.clone(),
                Domain::Spatial,
                random_values(&mut rng, basis.det_abs() as usize),
            )
            .unwrap();
            let _ = fft_pattern_with(&input, &plan, Execution::Serial).unwrap();
            let mut best = f64::INFINITY;
            for _ in 0..reps {
                let t = Instant::now();
                std::hint::black_box(
                    fft_pattern_with(&input, &plan, Execution::Serial).unwrap(),
                );
                best = best.min(t.elapsed().as_secs_f64());
            }
            points.push((m as f64, best));
        }
        // Least squares on log(T / log m) vs log m.
        let xs: Vec<f64> = points.iter().map(|(m, _)| m.ln()).collect();
        let ys: Vec<f64> = points.iter().map(|(m, t)| (t / m.ln()).ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        slopes.push(sxy / sxx);
    }
    let slopes_ok = slopes.iter().all(|s| (0.95..=1.25).contains(s));
    let elapsed = started.elapsed().as_secs_f64();
    report(
        6,
        "O(m log m) scaling and parallel speedup",
        slopes_ok && speedup >= 1.2 && elapsed < 300.0,
        &format!(
            "log–log slopes {:.3} (i=0), {:.3} (i=1) in [0.95, 1.25]; speedup {speedup:.2} ≥ 1.2 with {threads} threads; {elapsed:.1}s < 300s",
            slopes[0], slopes[1]
        ),
    );
}

#[test]
fn criterion_07_dirichlet_orthonormality() {
    let _gate = serialized();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = random_regular_bounded(&mut rng, 2, 6, 64);
        let basis = shared(&m);
        let spec = dirichlet::dirichlet_spectrum(&basis);
        // Gram row: γ = δ ⇔ the translates are orthonormal.
        let gamma = dirichlet::translate_cross_row(&spec, &spec, &basis);
        worst = worst.max((gamma[0] - Complex64::new(1.0, 0.0)).norm());
        for v in &gamma[1..] {
            worst = worst.max(v.norm());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        7,
        "Dirichlet translate orthonormality",
        worst <= 1e-10 && elapsed < 60.0,
        &format!("worst Gram deviation {worst:.2e} ≤ 1e-10 over 50 matrices; {elapsed:.1}s < 60s"),
    );
}

#[test]
fn criterion_08_two_scale_identity() {
    let _gate = serialized();
    let started = Instant::now();
    let m_mat = IntMatrix::from_i64_rows(&[&[8, 0], &[0, 8]]);
    let m = shared(&m_mat);
    let phi_m = dirichlet::dirichlet_spectrum(&m);
    let mut worst: f64 = 0.0;
    for name in ["x", "y", "d"] {
        let j_mat = named_factor(name).unwrap();
        let n_mat = inverse_rational(&j_mat).unwrap().mul_int(&m_mat).to_int().unwrap();
        let n = shared(&n_mat);
        let ahat = dirichlet::scaling_filter(&m, &n).unwrap();
        let phi_n = dirichlet::dirichlet_spectrum(&n);
        for (k, c_n) in phi_n.coeffs() {
            let ints: Vec<BigInt> = k.iter().map(|&v| BigInt::from(v)).collect();
            let idx = m.generator_to_index(&ints);
            let rhs = ahat.values()[m.flat_index(&idx)] * phi_m.value(k);
            worst = worst.max((c_n - rhs).norm());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        8,
        "two-scale coefficient identity",
        worst <= 1e-12 && elapsed < 10.0,
        &format!("worst |c_k(φ_N) − â·c_k(φ_M)| = {worst:.2e} ≤ 1e-12 on all three factors; {elapsed:.1}s < 10s"),
    );
}

#[test]
fn criterion_09_perfect_reconstruction() {
    let _gate = serialized();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);

    // (M, J, N) cases: diag(16,16) with all three factors, and the showcase
    // factorization M = [[4,-3],[4,5]] = [[1,-1],[1,1]]·[[4,1],[0,4]].
    let mut cases = Vec::new();
    let m16 = IntMatrix::from_i64_rows(&[&[16, 0], &[0, 16]]);
    for name in ["x", "y", "d"] {
        let j = named_factor(name).unwrap();
        let n = inverse_rational(&j).unwrap().mul_int(&m16).to_int().unwrap();
        cases.push((m16.clone(), j, n));
    }
    cases.push((
        showcase_matrix(),
        IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]]),
        IntMatrix::from_i64_rows(&[&[4, 1], &[0, 4]]),
    ));

    let mut worst_recon: f64 = 0.0;
    let mut worst_energy: f64 = 0.0;
    for (m_mat, j_mat, n_mat) in &cases {
        let m = shared(m_mat);
        let j = shared(j_mat);
        let n = shared(n_mat);
        let bank = dirichlet::filter_bank_from_dirichlet(&m, &n, &j).unwrap();
        for _ in 0..25 {
            let a = LatticeArray::new(
                m.clone(),
                Domain::Spatial,
                random_values(&mut rng, m.det_abs() as usize),
            )
            .unwrap();
            let d = wavelet::full_analysis(&a, &bank).unwrap();
            let back = wavelet::full_synthesis(&d, &bank).unwrap();
            worst_recon = worst_recon.max(rel_l2(back.values(), a.values()));
            let split = (a.norm().powi(2) - d.energy()).abs() / a.norm().powi(2);
            worst_energy = worst_energy.max(split);
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        9,
        "perfect reconstruction and energy split",
        worst_recon <= 1e-9 && worst_energy <= 1e-9 && elapsed < 60.0,
        &format!("worst reconstruction {worst_recon:.2e} ≤ 1e-9; worst energy defect {worst_energy:.2e} ≤ 1e-9 over 100 inputs; {elapsed:.1}s < 60s"),
    );
}

#[test]
fn criterion_10_dense_operator_equivalence() {
    let _gate = serialized();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut cases = Vec::new();
    for name in ["x", "y", "d"] {
        let m_mat = IntMatrix::from_i64_rows(&[&[16, 0], &[0, 16]]);
        let j = named_factor(name).unwrap();
        let n = inverse_rational(&j).unwrap().mul_int(&m_mat).to_int().unwrap();
        cases.push((m_mat, j, n));
    }
    cases.push((
        showcase_matrix(),
        IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]]),
        IntMatrix::from_i64_rows(&[&[4, 1], &[0, 4]]),
    ));
    cases.push((
        IntMatrix::from_i64_rows(&[&[8, 0], &[0, 8]]),
        IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]]),
        IntMatrix::from_i64_rows(&[&[4, 4], &[-4, 4]]),
    ));

    let mut worst: f64 = 0.0;
    for (m_mat, j_mat, n_mat) in &cases {
        let m = shared(m_mat);
        let j = shared(j_mat);
        let n = shared(n_mat);
        let bank = dirichlet::filter_bank_from_dirichlet(&m, &n, &j).unwrap();
        let m_size = m.det_abs() as usize;
        let n_size = n.det_abs() as usize;

        // Dense analysis operator per branch: √(n/m)·A with
        // A[μ, Pμ⊕λ_l] = conj(b̂[Pμ⊕λ_l]) (the module folds the constant
        // into |det J|^{-1/2}, the same number).
        let projection = generator_projection_matrix(&n, &m).unwrap();
        let offsets = coset_offsets(&j, &n, &m).unwrap();
        let scale = (n_size as f64 / m_size as f64).sqrt();
        let dense_branch = |branch: usize, ahat: &LatticeArray| -> Vec<Complex64> {
            (0..n_size)
                .map(|mu_flat| {
                    let mu = n.multi_index(mu_flat);
                    let lambda = apply_projection(&projection, &mu, &m);
                    let mut acc = Complex64::zero();
                    for offset in &offsets {
                        let pos = m.flat_index(&m.add_indices(&lambda, offset));
                        acc += bank.filters()[branch].values()[pos].conj() * ahat.values()[pos];
                    }
                    acc * scale
                })
                .collect()
        };

        for _ in 0..10 {
            let a = LatticeArray::new(
                m.clone(),
                Domain::Spatial,
                random_values(&mut rng, m_size),
            )
            .unwrap();
            // Dense path: dense ℱ(M), explicit A per branch, dense ℱ(N)⁻¹.
            let ahat = dft_naive(&a, 4096).unwrap();
            let fast = wavelet::full_analysis(&a, &bank).unwrap();
            let n_plan = FourierPlan::new(n.clone());
            for branch in 0..2 {
                let dense_freq = LatticeArray::new(
                    n.clone(),
                    Domain::Frequency,
                    dense_branch(branch, &ahat),
                )
                .unwrap();
                let dense_spatial = ifft_pattern(&dense_freq, &n_plan).unwrap();
                worst =
                    worst.max(rel_l2(fast.branches[branch].values(), dense_spatial.values()));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        10,
        "fast decomposition equals the dense operator",
        worst <= 1e-10 && elapsed < 60.0,
        &format!("worst relative deviation {worst:.2e} ≤ 1e-10; {elapsed:.1}s < 60s"),
    );
}

#[test]
fn criterion_11_scaling_property() {
    let _gate = serialized();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(111);

    // 20 constructed pairs per case: diagonal seeds, optionally conjugated
    // by unimodular factors (N → N·U preserves the case; J → V·J preserves
    // the patterns entirely).
    let mut case1 = Vec::new();
    let mut case2 = Vec::new();
    for t in 0..20u64 {
        // Case 1 needs ε_d^J to divide the N-cycle, otherwise the new cycle
        // merges with it and the dimension cannot grow.
        let p = 2 + (t % 2) as i64;
        let k = p * (1 + (t % 8) as i64);
        let n1 = IntMatrix::from_i64_rows(&[&[k, 0], &[0, 1]]);
        let j1 = IntMatrix::from_i64_rows(&[&[1, 0], &[0, p]]);
        let n2 = IntMatrix::from_i64_rows(&[&[k, 0], &[0, 1]]);
        let j2 = IntMatrix::from_i64_rows(&[&[p, 0], &[0, 1]]);
        if t < 10 {
            case1.push((j1, n1));
            case2.push((j2, n2));
        } else {
            let u = random_unimodular(&mut rng, 2);
            let v = random_unimodular(&mut rng, 2);
            case1.push((v.mul(&j1), n1.mul(&u)));
            case2.push((v.mul(&j2), n2.mul(&u)));
        }
    }

    let mut ok = true;
    let mut checked = 0;
    for (expected, pairs) in [(ScalingCase::NewDirection, &case1), (ScalingCase::RefinedCycle, &case2)] {
        for (j, n) in pairs {
            let m = j.mul(n);
            let report = scaling_case(j, n).unwrap();
            ok &= report.case == expected;

            // Brute-force verification on enumerated patterns.
            let m_basis = PatternBasis::new(&m).unwrap();
            let n_basis = PatternBasis::new(n).unwrap();
            let j_basis = PatternBasis::new(j).unwrap();
            let z1 = &j_basis.pattern_vectors()[0];
            let v = inverse_rational(n).unwrap().mul_vec(z1);
            let v_mod = m_basis.modulo_pattern(&v, Window::ZeroOne).unwrap();
            // Cycle length of z_1 by repeated addition.
            let mut cycle = 1u64;
            let mut acc = z1.clone();
            while !acc.iter().all(|c| c.is_integer()) {
                acc = acc.iter().zip(z1).map(|(a, b)| a + b).collect();
                cycle += 1;
            }
            ok &= cycle == report.j_cycle;

            match expected {
                ScalingCase::NewDirection => {
                    ok &= report.d_m == report.d_n + 1
                        && m_basis.pattern_dim() == n_basis.pattern_dim() + 1;
                    // Brute-force the direct sum: every pattern point is
                    // reached exactly once as w + θ·v, w ∈ 𝒫(N), θ < ε_d^J.
                    let m_points = m_basis.enumerate_pattern(Window::ZeroOne);
                    let mut seen = vec![false; m_points.len()];
                    for w in n_basis.enumerate_pattern(Window::ZeroOne) {
                        for theta in 0..report.j_cycle {
                            let point: Vec<BigRational> = w
                                .value
                                .iter()
                                .zip(&v)
                                .map(|(wi, vi)| {
                                    wi + BigRational::from(BigInt::from(theta)) * vi
                                })
                                .collect();
                            let reduced =
                                m_basis.modulo_pattern(&point, Window::ZeroOne).unwrap();
                            let flat = m_points.iter().position(|p| *p == reduced).unwrap();
                            ok &= !seen[flat];
                            seen[flat] = true;
                        }
                    }
                    ok &= seen.iter().all(|&s| s);
                    // When the basis is adapted, the reported axis must
                    // really span the new cycle with the right length.
                    if let Some((l, t, eps)) = report.new_axis {
                        ok &= eps == report.j_cycle
                            && m_basis.cycle_lengths()[l] == report.j_cycle;
                        let candidate: Vec<BigRational> = m_basis.pattern_vectors()[l]
                            .iter()
                            .map(|c| BigRational::from(BigInt::from(t)) * c)
                            .collect();
                        ok &= m_basis.modulo_pattern(&candidate, Window::ZeroOne).unwrap()
                            == v_mod;
                    }
                }
                ScalingCase::RefinedCycle => {
                    ok &= report.d_m == report.d_n
                        && m_basis.pattern_dim() == n_basis.pattern_dim();
                    let (lambda, mu) = report.coords.clone().unwrap();
                    // Brute-force P: locate each N-basis vector among the
                    // enumerated pattern points of M.
                    let m_points = m_basis.enumerate_pattern(Window::ZeroOne);
                    let mut p_cols = Vec::new();
                    for y in n_basis.pattern_vectors() {
                        let y_mod = m_basis.modulo_pattern(y, Window::ZeroOne).unwrap();
                        let flat = m_points.iter().position(|p| *p == y_mod).unwrap();
                        p_cols.push(m_basis.multi_index(flat));
                    }
                    // λ = Pμ/ε_d^J as coordinates: ε·λ_l ≡ (Pμ)_l mod ε_l.
                    for l in 0..m_basis.pattern_dim() {
                        let pm: u64 = p_cols.iter().zip(&mu).map(|(col, &mv)| col[l] * mv).sum();
                        let len = m_basis.cycle_lengths()[l];
                        ok &= pm % len == (report.j_cycle * lambda[l]) % len;
                    }
                    // And the coordinates really address v and ε·v.
                    ok &= m_points[m_basis.flat_index(&lambda)] == v_mod;
                    let scaled: Vec<BigRational> = v
                        .iter()
                        .map(|c| BigRational::from(BigInt::from(report.j_cycle)) * c)
                        .collect();
                    let scaled_mod = n_basis.modulo_pattern(&scaled, Window::ZeroOne).unwrap();
                    let n_points = n_basis.enumerate_pattern(Window::ZeroOne);
                    ok &= n_points[n_basis.flat_index(&mu)] == scaled_mod;
                }
            }
            checked += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        11,
        "multivariate scaling property",
        ok && checked == 40 && elapsed < 30.0,
        &format!("{checked} factorizations verified by brute force; {elapsed:.1}s < 30s"),
    );
}

#[test]
fn criterion_12_box_spline_demo() {
    let _gate = serialized();
    let started = Instant::now();
    let m_mat = IntMatrix::from_i64_rows(&[&[128, 0], &[0, 128]]);
    let m = shared(&m_mat);
    let ds = boxspline::DirectionSet::xi();
    let samples = boxspline::sample_on_pattern(&ds, &m, Window::Centered);
    let spectrum = dirichlet::dirichlet_spectrum(&m);
    let coeffs = dirichlet::samples_to_translate_coeffs(&samples, &spectrum).unwrap();

    let out_dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("boxspline-demo");
    let mut energies = Vec::new();
    let mut worst_recon: f64 = 0.0;
    for name in ["x", "y", "d"] {
        let j_mat = named_factor(name).unwrap();
        let n_mat = inverse_rational(&j_mat).unwrap().mul_int(&m_mat).to_int().unwrap();
        let j = shared(&j_mat);
        let n = shared(&n_mat);
        let bank = dirichlet::filter_bank_from_dirichlet(&m, &n, &j).unwrap();
        let d = wavelet::full_analysis(&coeffs, &bank).unwrap();

        // f = f_V + f_W at the coefficient level.
        let zero = LatticeArray::zeros(n.clone(), Domain::Spatial);
        let f_v = wavelet::full_synthesis(
            &WaveletCoefficients {
                branches: vec![d.branches[0].clone(), zero.clone()],
            },
            &bank,
        )
        .unwrap();
        let f_w = wavelet::full_synthesis(
            &WaveletCoefficients {
                branches: vec![zero, d.branches[1].clone()],
            },
            &bank,
        )
        .unwrap();
        let recombined: Vec<Complex64> = f_v
            .values()
            .iter()
            .zip(f_w.values())
            .map(|(a, b)| a + b)
            .collect();
        worst_recon = worst_recon.max(rel_l2(&recombined, coeffs.values()));
        energies.push(d.branches[1].norm().powi(2) / coeffs.norm().powi(2));

        // Qualitative directional plot.
        let f_w_samples = dirichlet::translate_coeffs_to_samples(&f_w, &spectrum).unwrap();
        io::write_atomic(
            &out_dir.join(format!("f_w_{name}.pgm")),
            &io::magnitude_pgm(&f_w_samples),
        )
        .unwrap();
    }
    let pgms_exist = ["x", "y", "d"]
        .iter()
        .all(|n| out_dir.join(format!("f_w_{n}.pgm")).exists());

    // Pairwise energy separation as specified. The x/y pair is exactly
    // equal by the coordinate-swap symmetry of B_Ξ and diag M, so this
    // clause cannot hold; it is asserted literally and left red (see the
    // project notes on criterion 12).
    let mut separated = true;
    for a in 0..3 {
        for b in a + 1..3 {
            let rel = (energies[a] - energies[b]).abs() / energies[a].max(energies[b]);
            separated &= rel > 1e-3;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report(
        12,
        "box-spline demo separation and reconstruction",
        worst_recon <= 1e-9 && separated && pgms_exist && elapsed < 300.0,
        &format!(
            "reconstruction {worst_recon:.2e} ≤ 1e-9; branch energies x/y/d = {:.6e}/{:.6e}/{:.6e}, pairwise-separated(1e-3) = {separated} (the x/y pair is exactly equal: the test spline, the matrix and the kernel construction are all invariant under coordinate swap, which maps the x-split onto the y-split); PGMs written = {pgms_exist}; {elapsed:.1}s < 300s",
            energies[0], energies[1], energies[2]
        ),
    );
}

#[test]
fn criterion_13_seventeen_level_feasibility() {
    let _gate = serialized();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    let j_mat = named_factor("d").unwrap();
    let mut current = IntMatrix::from_i64_rows(&[&[512, 0], &[0, 512]]);
    let mut chain = Vec::new();
    for _ in 0..17 {
        let n_mat = inverse_rational(&j_mat).unwrap().mul_int(&current).to_int().unwrap();
        let m = shared(&current);
        let j = shared(&j_mat);
        let n = shared(&n_mat);
        chain.push(dirichlet::filter_bank_from_dirichlet(&m, &n, &j).unwrap());
        current = n_mat;
    }
    let top = chain[0].m_basis().clone();
    let a = LatticeArray::new(
        top.clone(),
        Domain::Spatial,
        random_values(&mut rng, top.det_abs() as usize),
    )
    .unwrap();
    let decomposition = wavelet::multilevel(&a, &chain).unwrap();
    let energy_defect = (decomposition.energy() - a.norm().powi(2)).abs() / a.norm().powi(2);
    let last_size = decomposition.approximation.len();
    let elapsed = started.elapsed().as_secs_f64();
    report(
        13,
        "17-level dyadic chain",
        decomposition.details.len() == 17
            && last_size == 2
            && energy_defect <= 1e-8
            && elapsed < 600.0,
        &format!(
            "17 levels down to |det N| = {last_size}; energy defect {energy_defect:.2e} ≤ 1e-8; {elapsed:.1}s < 600s"
        ),
    );
}

// Determinism of the parallel contract: serial and parallel schedules agree
// to 1e-12 (bitwise for a fixed schedule is covered by the seeded rerun).
#[test]
fn parallel_schedule_determinism() {
    let _gate = serialized();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let m = normal_form_matrix(64, 4, 64);
    let basis = shared(&m);
    let plan = FourierPlan::new(basis.clone());
    let a = LatticeArray::new(
        basis.clone(),
        Domain::Spatial,
        random_values(&mut rng, basis.det_abs() as usize),
    )
    .unwrap();
    let serial = fft_pattern_with(&a, &plan, Execution::Serial).unwrap();
    let parallel = fft_pattern_with(&a, &plan, Execution::Parallel).unwrap();
    let rerun = fft_pattern_with(&a, &plan, Execution::Parallel).unwrap();
    assert_eq!(parallel.values(), rerun.values());
    let worst = serial
        .values()
        .iter()
        .zip(parallel.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-12);
}
