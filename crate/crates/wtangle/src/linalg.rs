//! Dense complex matrix algebra over qubit registers: eigendecompositions,
//! tensor products, partial trace and partial transpose.
//!
//! Qubit 0 is the leftmost tensor factor, so in a basis index the bit of
//! qubit q is `(index >> (n - 1 - q)) & 1`.

use ndarray::Array2;
use ndarray_linalg::{Eig, Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
pub type CMat = Array2<Complex64>;

/// Default numerical tolerance where the caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on the qubit count for full 2^n-dimensional operations.
pub const DEFAULT_CAP: usize = 12;

pub fn pauli_y() -> CMat {
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    ndarray::array![[z, -i], [i, z]]
}

/// Tensor (Kronecker) product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    ndarray::linalg::kron(a, b)
}

/// A set of qubit labels within an n-qubit register, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitIndexSet {
    n: usize,
    members: Vec<usize>,
}

impl QubitIndexSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        for (k, &q) in members.iter().enumerate() {
            if q >= n {
                return Err(Error::IndexError { index: q, n });
            }
            if k > 0 && members[k - 1] == q {
                return Err(Error::IndexError { index: q, n });
            }
        }
        Ok(QubitIndexSet { n, members })
    }

    pub fn single(n: usize, q: usize) -> Result<Self> {
        Self::new(n, [q])
    }

    pub fn pair(n: usize, s: usize, r: usize) -> Result<Self> {
        if s == r {
            return Err(Error::IndexError { index: r, n });
        }
        Self::new(n, [s, r])
    }

    /// The qubits of the register not in this set.
    pub fn complement(&self) -> QubitIndexSet {
        let members = (0..self.n).filter(|q| !self.members.contains(q)).collect();
        QubitIndexSet { n: self.n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Spreads the bits of `v` onto the qubit positions `qs` of an n-qubit index;
/// qs[0] holds the most significant bit of `v`, matching ket reading order.
fn scatter(v: usize, qs: &[usize], n: usize) -> usize {
    let mut full = 0usize;
    for (k, &q) in qs.iter().enumerate() {
        let bit = (v >> (qs.len() - 1 - k)) & 1;
        full |= bit << (n - 1 - q);
    }
    full
}

fn hermiticity_deviation(m: &CMat) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn trace(m: &CMat) -> Complex64 {
    m.diag().sum()
}

fn ensure_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn ensure_pow2_dim(m: &CMat) -> Result<usize> {
    let dim = ensure_square(m)?;
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotDensityLike {
            reason: format!("dimension {dim} is not a power of two >= 2"),
        });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat, tol: f64) -> Result<Vec<f64>> {
    ensure_square(m)?;
    let dev = hermiticity_deviation(m);
    if dev.is_nan() || dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol,
        });
    }
    let (w, _) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Backend(e.to_string()))?;
    Ok(w.to_vec())
}

/// The four descending square roots of the eigenvalues of
/// rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y), the spin-flip spectrum
/// that feeds the two-qubit concurrence.
///
/// Eigenvalues of the product are real nonnegative in exact arithmetic;
/// values within `tol` of the real axis / zero are clamped before the root.
pub fn concurrence_spectrum(rho: &CMat, tol: f64) -> Result<[f64; 4]> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::NotDensityLike {
            reason: format!(
                "expected a 4x4 two-qubit matrix, got {}x{}",
                rho.nrows(),
                rho.ncols()
            ),
        });
    }
    let dev = hermiticity_deviation(rho);
    if dev.is_nan() || dev > tol {
        return Err(Error::NotDensityLike {
            reason: format!("not Hermitian within {tol:e}, deviation {dev:e}"),
        });
    }
    let tr = trace(rho);
    if !((tr.re - 1.0).abs() <= tol && tr.im.abs() <= tol) {
        return Err(Error::NotDensityLike {
            reason: format!("trace must be 1 within {tol:e}, got {tr}"),
        });
    }

    let s = kron(&pauli_y(), &pauli_y());
    let rho_tilde = s.dot(&rho.map(|z| z.conj())).dot(&s);
    let r = rho.dot(&rho_tilde);
    let (ev, _) = r.eig().map_err(|e| Error::Backend(e.to_string()))?;

    // Rank-deficient products are the norm here (any reduction of a pure or
    // single-excitation state), and their zero eigenvalues come back from the
    // solver as O(eps * ||R||) noise. Taking the square root would amplify
    // that to ~1e-8 per root, so eigenvalues below the noise floor are
    // treated as the exact zeros they are.
    let noise_floor = 1e-12
        * r.iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(f64::EPSILON);
    let mut roots = [0.0f64; 4];
    for (k, lambda) in ev.iter().enumerate() {
        if lambda.im.abs() > tol || lambda.re < -tol {
            return Err(Error::NumericalInstability { value: *lambda });
        }
        roots[k] = if lambda.re <= noise_floor {
            0.0
        } else {
            lambda.re.sqrt()
        };
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(roots)
}

/// Traces out every qubit not in `keep`; the result is ordered by the kept
/// qubits' original left-to-right order.
pub fn partial_trace(rho: &CMat, n: usize, keep: &QubitIndexSet) -> Result<CMat> {
    let dim = ensure_square(rho)?;
    if n > 60 || dim != 1usize << n {
        return Err(Error::DimensionMismatch {
            expected: 1usize.checked_shl(n as u32).unwrap_or(0),
            got: dim,
        });
    }
    if keep.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: keep.n(),
        });
    }
    let traced = keep.complement();
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let keep_pos: Vec<usize> = (0..dk).map(|i| scatter(i, keep.members(), n)).collect();
    let tr_pos: Vec<usize> = (0..dt).map(|t| scatter(t, traced.members(), n)).collect();

    let mut out = CMat::zeros((dk, dk));
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..dt {
                acc += rho[(keep_pos[i] | tr_pos[t], keep_pos[j] | tr_pos[t])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Transposes the designated qubits: an exact entry permutation, involutive
/// and conjugation-free.
pub fn partial_transpose(rho: &CMat, n: usize, transpose_set: &QubitIndexSet) -> Result<CMat> {
    let dim = ensure_square(rho)?;
    if n > 60 || dim != 1usize << n {
        return Err(Error::DimensionMismatch {
            expected: 1usize.checked_shl(n as u32).unwrap_or(0),
            got: dim,
        });
    }
    if transpose_set.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: transpose_set.n(),
        });
    }
    let mut mask = 0usize;
    for &q in transpose_set.members() {
        mask |= 1 << (n - 1 - q);
    }

    let mut out = CMat::zeros((dim, dim));
    for row in 0..dim {
        for col in 0..dim {
            // Swap the masked bits between the row and column indices.
            let r2 = (row & !mask) | (col & mask);
            let c2 = (col & !mask) | (row & mask);
            out[(r2, c2)] = rho[(row, col)];
        }
    }
    Ok(out)
}

/// A validated density matrix over n qubits: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
    n: usize,
}

impl DensityMatrix {
    /// Full validation; cost includes an eigendecomposition, so intended for
    /// modest dimensions.
    pub fn new(mat: CMat, tol: f64) -> Result<Self> {
        let n = ensure_pow2_dim(&mat)?;
        let dev = hermiticity_deviation(&mat);
        if dev.is_nan() || dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol,
            });
        }
        let tr = trace(&mat);
        if !((tr.re - 1.0).abs() <= tol && tr.im.abs() <= tol) {
            return Err(Error::NotDensityLike {
                reason: format!("trace must be 1 within {tol:e}, got {tr}"),
            });
        }
        let eigs = hermitian_eigenvalues(&mat, tol)?;
        let min = eigs[0];
        if min < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(DensityMatrix { mat, n })
    }

    /// Constructor for matrices valid by construction (embeddings, pure-state
    /// projectors); skips the eigendecomposition.
    pub(crate) fn new_unchecked(mat: CMat, n: usize) -> Self {
        debug_assert_eq!(mat.nrows(), 1usize << n);
        DensityMatrix { mat, n }
    }

    /// Projector onto a pure state given its 2^n amplitudes.
    pub fn from_pure(amplitudes: &[Complex64], tol: f64) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotDensityLike {
                reason: format!("amplitude count {dim} is not a power of two >= 2"),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol {
            return Err(Error::NormViolation { norm_sq, tol });
        }
        let n = dim.trailing_zeros() as usize;
        let mut mat = CMat::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Ok(DensityMatrix { mat, n })
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// trace(rho^2), real part.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0f64;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                // tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
                acc += self.mat[(i, j)].norm_sqr();
            }
        }
        acc
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cr(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// The 4x4 pair reduction of the uniform n-qubit single-excitation state:
    /// diag block ((n-2)/n, 1/n, 1/n, 0) plus the 1/n coherence between the
    /// two singly-excited components.
    fn uniform_pair_reduction(n: usize) -> CMat {
        let nn = n as f64;
        let mut m = CMat::zeros((4, 4));
        m[(0, 0)] = cr((nn - 2.0) / nn);
        m[(1, 1)] = cr(1.0 / nn);
        m[(2, 2)] = cr(1.0 / nn);
        m[(1, 2)] = cr(1.0 / nn);
        m[(2, 1)] = cr(1.0 / nn);
        m
    }

    #[test]
    fn identity_eigenvalues() {
        let m = CMat::eye(2);
        let w = hermitian_eigenvalues(&m, 1e-9).unwrap();
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let w = hermitian_eigenvalues(&pauli_y(), 1e-9).unwrap();
        assert_abs_diff_eq!(w[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_pair_reduction_spectrum() {
        let w = hermitian_eigenvalues(&uniform_pair_reduction(3), 1e-9).unwrap();
        let expect = [0.0, 0.0, 1.0 / 3.0, 2.0 / 3.0];
        for (got, want) in w.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = array![[cr(0.0), cr(1.0)], [cr(0.0), cr(0.0)]];
        assert!(matches!(
            hermitian_eigenvalues(&m, 1e-9),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn non_square_rejected() {
        let m = CMat::zeros((2, 3));
        assert!(matches!(
            hermitian_eigenvalues(&m, 1e-9),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn kron_identities() {
        let i2 = CMat::eye(2);
        assert_eq!(kron(&i2, &i2), CMat::eye(4));

        let yy = kron(&pauli_y(), &pauli_y());
        let mut expect = CMat::zeros((4, 4));
        expect[(0, 3)] = cr(-1.0);
        expect[(1, 2)] = cr(1.0);
        expect[(2, 1)] = cr(1.0);
        expect[(3, 0)] = cr(-1.0);
        assert_eq!(yy, expect);

        let p0 = array![[cr(1.0), cr(0.0)], [cr(0.0), cr(0.0)]];
        let p1 = array![[cr(0.0), cr(0.0)], [cr(0.0), cr(1.0)]];
        let mut diag = CMat::zeros((4, 4));
        diag[(1, 1)] = cr(1.0);
        assert_eq!(kron(&p0, &p1), diag);
    }

    #[test]
    fn concurrence_spectrum_maximally_mixed() {
        let rho = CMat::eye(4).map(|z| z * 0.25);
        let s = concurrence_spectrum(&rho, 1e-9).unwrap();
        for v in s {
            assert_abs_diff_eq!(v, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn concurrence_spectrum_product_projector() {
        let mut rho = CMat::zeros((4, 4));
        rho[(0, 0)] = cr(1.0);
        let s = concurrence_spectrum(&rho, 1e-9).unwrap();
        for v in s {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn concurrence_spectrum_bell_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [cr(0.0), cr(h), cr(h), cr(0.0)];
        let rho = DensityMatrix::from_pure(&amps, 1e-9).unwrap();
        let s = concurrence_spectrum(rho.mat(), 1e-9).unwrap();
        assert_abs_diff_eq!(s[0], 1.0, epsilon = 1e-9);
        for v in &s[1..] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let p0 = array![[cr(1.0), cr(0.0)], [cr(0.0), cr(0.0)]];
        let p1 = array![[cr(0.0), cr(0.0)], [cr(0.0), cr(1.0)]];
        let rho = kron(&p0, &p1);
        let keep = QubitIndexSet::single(2, 0).unwrap();
        let red = partial_trace(&rho, 2, &keep).unwrap();
        assert_eq!(red, p0);
    }

    #[test]
    fn partial_trace_of_uniform_three_qubit_state() {
        // Uniform single-excitation state over 3 qubits, traced down to the
        // last two qubits.
        let third = cr(1.0 / 3.0);
        let mut rho = CMat::zeros((8, 8));
        for &i in &[1usize, 2, 4] {
            for &j in &[1usize, 2, 4] {
                rho[(i, j)] = third;
            }
        }
        let keep = QubitIndexSet::new(3, [1, 2]).unwrap();
        let red = partial_trace(&rho, 3, &keep).unwrap();
        let expect = uniform_pair_reduction(3);
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!((red[(i, j)] - expect[(i, j)]).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_two_step_composition() {
        let h = (0.5f64).sqrt();
        let amps = [
            cr(0.0),
            c(h, 0.0),
            c(0.0, h),
            cr(0.0),
            cr(0.0),
            cr(0.0),
            cr(0.0),
            cr(0.0),
        ];
        let rho = DensityMatrix::from_pure(&amps, 1e-9).unwrap();
        let keep01 = QubitIndexSet::new(3, [0, 1]).unwrap();
        let step1 = partial_trace(rho.mat(), 3, &keep01).unwrap();
        let keep0_of2 = QubitIndexSet::single(2, 0).unwrap();
        let two_step = partial_trace(&step1, 2, &keep0_of2).unwrap();
        let direct = partial_trace(rho.mat(), 3, &QubitIndexSet::single(3, 0).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (two_step[(i, j)] - direct[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn partial_transpose_product_state_stays_psd() {
        let p = array![[cr(0.75), c(0.1, 0.2)], [c(0.1, -0.2), cr(0.25)]];
        let q = array![[cr(0.5), c(0.0, 0.3)], [c(0.0, -0.3), cr(0.5)]];
        let rho = kron(&p, &q);
        let t = QubitIndexSet::single(2, 1).unwrap();
        let pt = partial_transpose(&rho, 2, &t).unwrap();
        let expect = kron(&p, &q.t().to_owned());
        assert_eq!(pt, expect);
        let min = hermitian_eigenvalues(&pt, 1e-9).unwrap()[0];
        assert!(min >= -1e-12);
    }

    #[test]
    fn partial_transpose_bell_pair_min_eigenvalue() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [cr(0.0), cr(h), cr(h), cr(0.0)];
        let rho = DensityMatrix::from_pure(&amps, 1e-9).unwrap();
        let t = QubitIndexSet::single(2, 1).unwrap();
        let pt = partial_transpose(rho.mat(), 2, &t).unwrap();
        let w = hermitian_eigenvalues(&pt, 1e-9).unwrap();
        assert_abs_diff_eq!(w[0], -0.5, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_uniform_pair_min_eigenvalue() {
        let rho = uniform_pair_reduction(3);
        let t = QubitIndexSet::single(2, 1).unwrap();
        let pt = partial_transpose(&rho, 2, &t).unwrap();
        let w = hermitian_eigenvalues(&pt, 1e-9).unwrap();
        assert_abs_diff_eq!(w[0], (1.0 - 5.0f64.sqrt()) / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_is_exact_involution() {
        let mut rho = CMat::zeros((8, 8));
        for i in 0..8 {
            for j in 0..8 {
                rho[(i, j)] = c((i * 8 + j) as f64, (i as f64) - (j as f64));
            }
        }
        let t = QubitIndexSet::new(3, [0, 2]).unwrap();
        let once = partial_transpose(&rho, 3, &t).unwrap();
        let twice = partial_transpose(&once, 3, &t).unwrap();
        assert_eq!(rho, twice);
    }

    #[test]
    fn qubit_index_set_rejects_bad_input() {
        assert!(matches!(
            QubitIndexSet::new(3, [0, 3]),
            Err(Error::IndexError { index: 3, n: 3 })
        ));
        assert!(matches!(
            QubitIndexSet::new(3, [1, 1]),
            Err(Error::IndexError { .. })
        ));
        assert!(matches!(
            QubitIndexSet::pair(3, 2, 2),
            Err(Error::IndexError { .. })
        ));
    }

    #[test]
    fn complement_partitions_register() {
        let s = QubitIndexSet::new(5, [1, 3]).unwrap();
        assert_eq!(s.complement().members(), &[0, 2, 4]);
    }

    #[test]
    fn density_matrix_validation() {
        let rho = CMat::eye(4).map(|z| z * 0.25);
        let dm = DensityMatrix::new(rho, 1e-9).unwrap();
        assert_eq!(dm.n(), 2);
        assert!(!dm.is_pure(1e-9));
        assert_abs_diff_eq!(dm.purity(), 0.25, epsilon = 1e-12);

        let bad = CMat::eye(4).map(|z| z * 0.5);
        assert!(DensityMatrix::new(bad, 1e-9).is_err());

        let mut neg = CMat::zeros((2, 2));
        neg[(0, 0)] = cr(1.5);
        neg[(1, 1)] = cr(-0.5);
        assert!(matches!(
            DensityMatrix::new(neg, 1e-9),
            Err(Error::NotPositive { .. })
        ));
    }

    fn random_hermitian(dim: usize, seed: u64) -> CMat {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMat::zeros((dim, dim));
        for i in 0..dim {
            m[(i, i)] = cr(rng.gen_range(-1.0..1.0));
            for j in (i + 1)..dim {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn eigenvalue_sum_matches_trace(seed in any::<u64>(), dim in 1usize..=16) {
            let m = random_hermitian(dim, seed);
            let w = hermitian_eigenvalues(&m, 1e-9).unwrap();
            let tr: f64 = m.diag().iter().map(|z| z.re).sum();
            let sum: f64 = w.iter().sum();
            prop_assert!((sum - tr).abs() <= dim as f64 * 1e-9);
            prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        }

        #[test]
        fn trace_and_transpose_commute_on_disjoint_sets(seed in any::<u64>()) {
            // Transpose qubit 2, keep qubits {0, 1}: disjoint, so the order
            // of the two maps must not matter.
            let g = random_hermitian(8, seed);
            let tr: f64 = g.diag().iter().map(|z| z.re).sum();
            let rho = g.map(|z| z / cr(tr.max(1.0)));
            let t = QubitIndexSet::single(3, 2).unwrap();
            let keep = QubitIndexSet::new(3, [0, 1]).unwrap();

            let a = partial_trace(&partial_transpose(&rho, 3, &t).unwrap(), 3, &keep).unwrap();
            let b = partial_trace(&rho, 3, &keep).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((a[(i, j)] - b[(i, j)]).norm() <= 1e-12);
                }
            }
        }

        #[test]
        fn rank_one_projectors_have_single_spin_flip_root(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut amps = [cr(0.0); 4];
            let mut norm = 0.0;
            for a in amps.iter_mut() {
                *a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                norm += a.norm_sqr();
            }
            for a in amps.iter_mut() {
                *a /= cr(norm.sqrt());
            }
            let rho = DensityMatrix::from_pure(&amps, 1e-9).unwrap();
            let s = concurrence_spectrum(rho.mat(), 1e-9).unwrap();
            for v in &s[1..] {
                prop_assert!(*v <= 1e-9, "secondary spin-flip roots should vanish, got {v}");
            }
        }
    }
}
