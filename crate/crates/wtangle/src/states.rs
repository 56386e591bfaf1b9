//! W-class states in the compact vacuum-plus-single-excitation representation,
//! with embeddings into the full 2^n space and direct two-qubit reductions.
//!
//! The compact form is an (n+1)x(n+1) density matrix over the basis
//! {|0...0>, e_1, ..., e_n} where e_j (slot j, 0-indexed here) is the basis
//! state whose single 1 sits on qubit n-1-j; slot 0 is |0...01>. A state is
//! the triple (A, X, B): vacuum population A, vacuum-excitation coherences
//! X_j = <0...0|rho|e_j>, and the excitation block B_ij = <e_i|rho|e_j>.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat, DensityMatrix, QubitIndexSet, DEFAULT_CAP};

/// Hermiticity bound on the excitation block B.
pub const B_HERMITICITY_TOL: f64 = 1e-10;
/// Bound on |A + tr(B) - 1|.
pub const TRACE_TOL: f64 = 1e-10;
/// Minimum-eigenvalue floor for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;

/// Symmetric W-class pure state: amplitude `a` on the vacuum and equal unit
/// amplitudes on every single-excitation ket, jointly normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricWState {
    n: usize,
    a: Complex64,
}

impl SymmetricWState {
    pub fn new(n: usize, a: Complex64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidQubitCount { n, min: 3 });
        }
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::InvalidConfig {
                reason: "symmetric amplitude must be finite".into(),
            });
        }
        Ok(SymmetricWState { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn to_subspace(&self) -> WSubspaceState {
        let d = self.a.norm_sqr() + self.n as f64;
        let mut b = CMat::zeros((self.n, self.n));
        b.fill(Complex64::new(1.0 / d, 0.0));
        let x = vec![self.a / d; self.n];
        WSubspaceState {
            n: self.n,
            a: self.a.norm_sqr() / d,
            x,
            b,
        }
    }
}

/// Asymmetric W-class pure state: unit-norm coefficients k_1..k_n on the n
/// single-excitation kets, nothing on the vacuum. k_1 multiplies |0...01>.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricWState {
    n: usize,
    k: Vec<Complex64>,
}

impl AsymmetricWState {
    pub fn new(n: usize, k: Vec<Complex64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidQubitCount { n, min: 3 });
        }
        if k.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: k.len(),
            });
        }
        let norm_sq: f64 = k.iter().map(|z| z.norm_sqr()).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev.is_nan() || dev > 1e-10 {
            return Err(Error::NormViolation {
                norm_sq,
                tol: 1e-10,
            });
        }
        Ok(AsymmetricWState { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &[Complex64] {
        &self.k
    }

    pub fn to_subspace(&self) -> WSubspaceState {
        let mut b = CMat::zeros((self.n, self.n));
        for i in 0..self.n {
            for j in 0..self.n {
                b[(i, j)] = self.k[i] * self.k[j].conj();
            }
        }
        WSubspaceState {
            n: self.n,
            a: 0.0,
            x: vec![Complex64::new(0.0, 0.0); self.n],
            b,
        }
    }
}

/// Mixed (or pure) state confined to the vacuum-plus-single-excitation
/// subspace, stored as the (A, X, B) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct WSubspaceState {
    n: usize,
    a: f64,
    x: Vec<Complex64>,
    b: CMat,
}

#[derive(Serialize, Deserialize)]
struct WSubspaceStateRaw {
    n: usize,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "X")]
    x: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    b: Vec<Vec<[f64; 2]>>,
}

impl WSubspaceState {
    /// Fully validated constructor: B Hermitian, A + tr(B) = 1, assembled
    /// matrix PSD.
    pub fn new(n: usize, a: f64, x: Vec<Complex64>, b: CMat) -> Result<Self> {
        let state = Self::new_unchecked(n, a, x, b)?;
        state.validate()?;
        Ok(state)
    }

    /// Shape and finiteness checks only. Intended for diagnostics on data
    /// that may violate positivity (e.g. feeding `check_positivity`).
    pub fn new_unchecked(n: usize, a: f64, x: Vec<Complex64>, b: CMat) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidQubitCount { n, min: 2 });
        }
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if b.nrows() != n { b.nrows() } else { b.ncols() },
            });
        }
        let finite = a.is_finite()
            && x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && b.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::NotDensityLike {
                reason: "entries must be finite".into(),
            });
        }
        Ok(WSubspaceState { n, a, x, b })
    }

    fn validate(&self) -> Result<()> {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self.b[(i, j)] - self.b[(j, i)].conj()).norm());
            }
        }
        if dev > B_HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: B_HERMITICITY_TOL,
            });
        }
        let tr = self.a + self.b.diag().iter().map(|z| z.re).sum::<f64>();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityLike {
                reason: format!("A + tr(B) must be 1 within {TRACE_TOL:e}, got {tr}"),
            });
        }
        let eigs = hermitian_eigenvalues(&self.assemble(), B_HERMITICITY_TOL.max(dev))?;
        if eigs[0] < -PSD_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: eigs[0],
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn x(&self) -> &[Complex64] {
        &self.x
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    /// Slot of the excitation ket that flips qubit `q`.
    pub fn slot_of_qubit(&self, q: usize) -> usize {
        self.n - 1 - q
    }

    /// Qubit flipped by the excitation ket of slot `j`.
    pub fn qubit_of_slot(&self, j: usize) -> usize {
        self.n - 1 - j
    }

    /// The (n+1)x(n+1) density matrix over {|0...0>, e_1, ..., e_n}.
    pub fn assemble(&self) -> CMat {
        let n = self.n;
        let mut m = CMat::zeros((n + 1, n + 1));
        m[(0, 0)] = Complex64::new(self.a, 0.0);
        for j in 0..n {
            m[(0, 1 + j)] = self.x[j];
            m[(1 + j, 0)] = self.x[j].conj();
            for i in 0..n {
                m[(1 + i, 1 + j)] = self.b[(i, j)];
            }
        }
        m
    }

    /// trace(rho^2); 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        let a2 = self.a * self.a;
        let x2: f64 = self.x.iter().map(|z| z.norm_sqr()).sum();
        let b2: f64 = self.b.iter().map(|z| z.norm_sqr()).sum();
        a2 + 2.0 * x2 + b2
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }

    /// Embeds into the full 2^n space; every index outside the subspace is zero.
    pub fn to_full(&self, cap: usize) -> Result<DensityMatrix> {
        let cap = if cap == 0 { DEFAULT_CAP } else { cap };
        if self.n > cap {
            return Err(Error::CapExceeded { n: self.n, cap });
        }
        let dim = 1usize << self.n;
        let mut m = CMat::zeros((dim, dim));
        m[(0, 0)] = Complex64::new(self.a, 0.0);
        for j in 0..self.n {
            let ej = 1usize << j;
            m[(0, ej)] = self.x[j];
            m[(ej, 0)] = self.x[j].conj();
            for i in 0..self.n {
                m[(1usize << i, ej)] = self.b[(i, j)];
            }
        }
        Ok(DensityMatrix::new_unchecked(m, self.n))
    }

    /// Two-qubit reduction over (s, r) computed directly from the compact
    /// representation; basis order is (s-bit, r-bit) in the argument order.
    pub fn reduce_pair(&self, s: usize, r: usize) -> Result<BipartiteReduction> {
        if s >= self.n {
            return Err(Error::IndexError {
                index: s,
                n: self.n,
            });
        }
        if r >= self.n || r == s {
            return Err(Error::IndexError {
                index: r,
                n: self.n,
            });
        }
        let js = self.slot_of_qubit(s);
        let jr = self.slot_of_qubit(r);
        let mut rest = self.a;
        for m in 0..self.n {
            if m != js && m != jr {
                rest += self.b[(m, m)].re;
            }
        }
        let mut rho = CMat::zeros((4, 4));
        rho[(0, 0)] = Complex64::new(rest, 0.0);
        rho[(0, 1)] = self.x[jr];
        rho[(0, 2)] = self.x[js];
        rho[(1, 0)] = self.x[jr].conj();
        rho[(2, 0)] = self.x[js].conj();
        rho[(1, 1)] = self.b[(jr, jr)];
        rho[(2, 2)] = self.b[(js, js)];
        rho[(1, 2)] = self.b[(jr, js)];
        rho[(2, 1)] = self.b[(js, jr)];
        Ok(BipartiteReduction { s, r, rho })
    }

    /// Zeroes every excitation-excitation coherence B_ij (i != j), keeping A,
    /// X and diag(B). Fails with NotPositive when the result is no longer a
    /// density matrix, i.e. the input is outside the zero-coherence class.
    pub fn zero_coherences(&self) -> Result<WSubspaceState> {
        let mut b = CMat::zeros((self.n, self.n));
        for i in 0..self.n {
            b[(i, i)] = Complex64::new(self.b[(i, i)].re, 0.0);
        }
        WSubspaceState::new(self.n, self.a, self.x.clone(), b)
    }

    pub fn to_json(&self) -> String {
        let raw = WSubspaceStateRaw {
            n: self.n,
            a: self.a,
            x: self.x.iter().map(|z| [z.re, z.im]).collect(),
            b: (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| [self.b[(i, j)].re, self.b[(i, j)].im])
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    /// Parses and fully validates.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: WSubspaceStateRaw = serde_json::from_str(s)?;
        let n = raw.n;
        if raw.b.len() != n || raw.b.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: raw
                    .b
                    .iter()
                    .map(|r| r.len())
                    .chain([raw.b.len()])
                    .find(|&l| l != n)
                    .unwrap_or(n),
            });
        }
        let x: Vec<Complex64> = raw
            .x
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let mut b = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = Complex64::new(raw.b[i][j][0], raw.b[i][j][1]);
            }
        }
        WSubspaceState::new(n, raw.a, x, b)
    }
}

/// Convenience wrapper over `SymmetricWState::to_subspace`.
pub fn build_symmetric(n: usize, a: Complex64) -> Result<WSubspaceState> {
    Ok(SymmetricWState::new(n, a)?.to_subspace())
}

///// Convenience wrapper over `AsymmetricWState::to_subspace`.
pub fn build_asymmetric(n: usize, k: Vec<Complex64>) -> Result<WSubspaceState> {
    Ok(AsymmetricWState::new(n, k)?.to_subspace())
}

/// A 4x4 two-qubit reduction; the |11> row and column are structurally zero
/// because the parent state never holds two excitations.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteReduction {
    s: usize,
    r: usize,
    rho: CMat,
}

impl BipartiteReduction {
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rho(&self) -> &CMat {
        &self.rho
    }
}

/// Full-space partial trace down to the pair (s, r), in the same basis order
/// as `reduce_pair(s, r)`. Oracle route for cross-checking the compact path.
pub fn reduce_pair_via_full(
    state: &WSubspaceState,
    s: usize,
    r: usize,
    cap: usize,
) -> Result<CMat> {
    let full = state.to_full(cap)?;
    let keep = QubitIndexSet::pair(state.n(), s, r)?;
    let reduced = crate::linalg::partial_trace(full.mat(), state.n(), &keep)?;
    if s < r {
        Ok(reduced)
    } else {
        // partial_trace orders kept qubits ascending; swap the two factors to
        // match the (s, r) argument order.
        let mut swapped = CMat::zeros((4, 4));
        let perm = [0usize, 2, 1, 3];
        for i in 0..4 {
            for j in 0..4 {
                swapped[(i, j)] = reduced[(perm[i], perm[j])];
            }
        }
        Ok(swapped)
    }
}
