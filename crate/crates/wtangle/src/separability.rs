//! Constructive separability: when every excitation-excitation coherence
//! vanishes, the state splits into the vacuum projector plus one product
//! state per excitation mode. `certify` builds that decomposition and
//! measures how exactly it reproduces the input; `audit_theorem` stress-tests
//! the construction against randomly drawn zero-coherence states.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, QubitIndexSet};
use crate::measures::{compact_pivot_det, concurrence, negativity};
use crate::sampling::{derive_seed, sample_state, SamplerConfig, SamplerKind};
use crate::states::WSubspaceState;

/// Weight clamp: an ensemble weight this far below zero is rounding noise.
const WEIGHT_CLAMP: f64 = 1e-9;
/// Slack used by the positivity feasibility diagnostic.
const FEASIBILITY_SLACK: f64 = 1e-9;

/// One member of the separating ensemble. Both variants are product states
/// over the qubit register: the vacuum outright, and a superposition of the
/// vacuum with a single excitation, which factorizes across all qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProductVector {
    Vacuum,
    TwoTerm {
        /// Excitation slot index (0-based; slot j excites qubit n-1-j).
        excitation: usize,
        /// Amplitude on the all-zeros ket, as (re, im).
        vacuum_amp: (f64, f64),
        /// Amplitude on the single-excitation ket, as (re, im).
        exc_amp: (f64, f64),
    },
}

impl ProductVector {
    /// The vector as a subspace state projector.
    pub fn to_state(&self, n: usize) -> Result<WSubspaceState> {
        match *self {
            ProductVector::Vacuum => WSubspaceState::new(
                n,
                1.0,
                vec![Complex64::new(0.0, 0.0); n],
                CMat::zeros((n, n)),
            ),
            ProductVector::TwoTerm {
                excitation,
                vacuum_amp,
                exc_amp,
            } => {
                if excitation >= n {
                    return Err(Error::IndexError {
                        index: excitation,
                        n,
                    });
                }
                let alpha = Complex64::new(vacuum_amp.0, vacuum_amp.1);
                let beta = Complex64::new(exc_amp.0, exc_amp.1);
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                x[excitation] = alpha * beta.conj();
                let mut b = CMat::zeros((n, n));
                b[(excitation, excitation)] = Complex64::new(beta.norm_sqr(), 0.0);
                WSubspaceState::new(n, alpha.norm_sqr(), x, b)
            }
        }
    }
}

/// Explicit ensemble decomposition into product states, with the entrywise
/// residual of the reconstruction against the input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparabilityCertificate {
    pub n: usize,
    /// Ensemble weights; index 0 is the vacuum, index i+1 covers slot i.
    pub weights: Vec<f64>,
    /// Parallel to `weights`.
    pub vectors: Vec<ProductVector>,
    /// Max entrywise deviation between the reconstruction and the input.
    pub residual: f64,
    /// Largest off-diagonal |B| seen in the input before certifying.
    pub max_coherence: f64,
}

impl SeparabilityCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<SeparabilityCertificate> {
        let cert: SeparabilityCertificate = serde_json::from_str(s)?;
        if cert.weights.len() != cert.n + 1 || cert.vectors.len() != cert.n + 1 {
            return Err(Error::LengthMismatch {
                expected: cert.n + 1,
                got: cert.weights.len().min(cert.vectors.len()),
            });
        }
        Ok(cert)
    }

    /// Rebuild the mixture the certificate describes, as a subspace state.
    pub fn reconstruct(&self) -> Result<WSubspaceState> {
        let n = self.n;
        let mut a = 0.0;
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        let mut b = CMat::zeros((n, n));
        for (w, v) in self.weights.iter().zip(self.vectors.iter()) {
            let s = v.to_state(n)?;
            a += w * s.a();
            for i in 0..n {
                x[i] += Complex64::new(*w, 0.0) * s.x()[i];
                for j in 0..n {
                    b[(i, j)] += Complex64::new(*w, 0.0) * s.b()[(i, j)];
                }
            }
        }
        WSubspaceState::new(n, a, x, b)
    }
}

/// Largest off-diagonal |B| entry together with the qubit pair it couples.
fn max_offdiagonal_coherence(state: &WSubspaceState) -> (f64, usize, usize) {
    let n = state.n();
    let mut best = (0.0f64, 0usize, 1usize.min(n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let m = state.b()[(i, j)].norm();
            if m > best.0 {
                let (qa, qb) = (state.qubit_of_slot(i), state.qubit_of_slot(j));
                best = (m, qa.min(qb), qa.max(qb));
            }
        }
    }
    best
}

/// Build the explicit product decomposition of a zero-coherence state.
///
/// Requires every off-diagonal B entry to sit below `coherence_tol`. Each
/// excitation mode i with occupation b_i > 0 becomes the normalized vector
/// (X_i / sqrt(b_i)) |0..0> + sqrt(b_i) |e_i> with weight b_i + |X_i|^2/b_i;
/// the vacuum absorbs the leftover weight. Positivity of the input makes
/// every weight nonnegative; violations beyond tolerance are errors, not
/// silently repaired.
pub fn certify(state: &WSubspaceState, coherence_tol: f64) -> Result<SeparabilityCertificate> {
    let n = state.n();
    let (max_coherence, qs, qr) = max_offdiagonal_coherence(state);
    if max_coherence > coherence_tol {
        return Err(Error::CoherencesNotZero {
            s: qs,
            r: qr,
            magnitude: max_coherence,
        });
    }

    let mut weights = vec![0.0f64; n + 1];
    let mut vectors = vec![ProductVector::Vacuum; n + 1];
    let mut transferred = 0.0f64; // sum of |X_i|^2 / b_i pulled out of A
    for i in 0..n {
        let b_i = state.b()[(i, i)].re;
        let x_i = state.x()[i];
        let x_abs = x_i.norm();
        if b_i <= coherence_tol && x_abs > coherence_tol.sqrt() {
            // A PSD state cannot couple the vacuum to an unoccupied mode:
            // |X_i|^2 <= A * B_ii.
            return Err(Error::SylvesterViolation { i, x_abs });
        }
        if b_i > 0.0 {
            let q_i = x_i.norm_sqr() / b_i;
            let p_i = b_i + q_i;
            transferred += q_i;
            let sqrt_p = p_i.sqrt();
            let alpha = x_i / (b_i.sqrt() * sqrt_p);
            let beta = b_i.sqrt() / sqrt_p;
            weights[i + 1] = p_i;
            vectors[i + 1] = ProductVector::TwoTerm {
                excitation: i,
                vacuum_amp: (alpha.re, alpha.im),
                exc_amp: (beta, 0.0),
            };
        } else {
            // Unoccupied mode: weight zero, placeholder unit vector.
            weights[i + 1] = 0.0;
            vectors[i + 1] = ProductVector::TwoTerm {
                excitation: i,
                vacuum_amp: (0.0, 0.0),
                exc_amp: (1.0, 0.0),
            };
        }
    }

    let mut p0 = state.a() - transferred;
    if p0 < -WEIGHT_CLAMP {
        return Err(Error::NegativeWeight { p0 });
    }
    p0 = p0.max(0.0);
    weights[0] = p0;

    let cert = SeparabilityCertificate {
        n,
        weights,
        vectors,
        residual: 0.0,
        max_coherence,
    };
    let rebuilt = cert.reconstruct()?;
    let mut residual = (rebuilt.a() - state.a()).abs();
    for i in 0..n {
        residual = residual.max((rebuilt.x()[i] - state.x()[i]).norm());
        for j in 0..n {
            residual = residual.max((rebuilt.b()[(i, j)] - state.b()[(i, j)]).norm());
        }
    }
    Ok(SeparabilityCertificate { residual, ..cert })
}

/// Positivity diagnostics computed in closed form from the arrow part
/// (A, X, diag B) of the state; off-diagonal B entries are ignored.
#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    /// det of the arrow matrix: A prod b_i - sum_i |X_i|^2 prod_{j!=i} b_j.
    pub determinant: f64,
    /// The 2x2 principal minors A b_i - |X_i|^2, one per slot.
    pub minors: Vec<f64>,
    /// Whether the certifying weights exist within a small slack:
    /// nonnegative occupations and sum_i |X_i|^2/b_i <= A.
    pub feasible: bool,
}

pub fn check_positivity(state: &WSubspaceState) -> PositivityReport {
    let n = state.n();
    let a = state.a();
    let b: Vec<f64> = (0..n).map(|i| state.b()[(i, i)].re).collect();
    let x2: Vec<f64> = (0..n).map(|i| state.x()[i].norm_sqr()).collect();

    let prod_all: f64 = b.iter().product();
    let mut determinant = a * prod_all;
    for (i, &xi2) in x2.iter().enumerate() {
        let mut prod_others = 1.0;
        for (j, bj) in b.iter().enumerate() {
            if j != i {
                prod_others *= bj;
            }
        }
        determinant -= xi2 * prod_others;
    }

    let minors: Vec<f64> = (0..n).map(|i| a * b[i] - x2[i]).collect();

    let s = FEASIBILITY_SLACK;
    let mut feasible = a >= -s && b.iter().all(|&bi| bi >= -s);
    if feasible {
        let mut load = 0.0;
        for i in 0..n {
            if b[i] <= s {
                if x2[i] > s {
                    feasible = false;
                    break;
                }
            } else {
                load += x2[i] / b[i];
            }
        }
        feasible = feasible && load <= a + s;
    }

    PositivityReport {
        determinant,
        minors,
        feasible,
    }
}

/// One audited sample that violated a check, with enough context to replay.
#[derive(Debug, Clone, Serialize)]
pub struct AuditFailure {
    pub n: usize,
    pub sample_index: usize,
    pub seed: u64,
    pub check: String,
    pub value: f64,
    pub state_json: String,
}

/// Aggregate outcome of the randomized audit.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub ns: Vec<usize>,
    pub samples_per_n: usize,
    pub total: usize,
    pub passed: usize,
    pub max_residual: f64,
    pub max_input_pair_concurrence: f64,
    pub max_input_pair_negativity: f64,
    pub max_vector_violation: f64,
    /// First few failing samples (normally empty).
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

struct SampleOutcome {
    residual: f64,
    input_c: f64,
    input_n: f64,
    vector_v: f64,
    failures: Vec<AuditFailure>,
}

const MAX_RECORDED_FAILURES: usize = 32;

fn audit_one(n: usize, sample_index: usize, seed: u64, tol: f64) -> SampleOutcome {
    let mut out = SampleOutcome {
        residual: 0.0,
        input_c: 0.0,
        input_n: 0.0,
        vector_v: 0.0,
        failures: Vec::new(),
    };
    let state = match sample_state(&SamplerConfig {
        kind: SamplerKind::MixedZeroCoherence,
        n,
        seed,
    }) {
        Ok(s) => s,
        Err(e) => {
            out.failures.push(AuditFailure {
                n,
                sample_index,
                seed,
                check: format!("sampler: {e}"),
                value: f64::NAN,
                state_json: String::new(),
            });
            return out;
        }
    };
    let state_json = state.to_json();
    let fail = |check: String, value: f64, failures: &mut Vec<AuditFailure>| {
        failures.push(AuditFailure {
            n,
            sample_index,
            seed,
            check,
            value,
            state_json: state_json.clone(),
        });
    };

    // The construction must exist and reproduce the state entrywise.
    let cert = match certify(&state, tol) {
        Ok(c) => c,
        Err(e) => {
            let msg = format!("certify: {e}");
            fail(msg, f64::NAN, &mut out.failures);
            return out;
        }
    };
    out.residual = cert.residual;
    if cert.residual > tol {
        fail("residual".into(), cert.residual, &mut out.failures);
    }

    // The input itself must carry no pair entanglement.
    for s in 0..n {
        for r in (s + 1)..n {
            let red = match state.reduce_pair(s, r) {
                Ok(r) => r,
                Err(e) => {
                    fail(format!("reduce_pair: {e}"), f64::NAN, &mut out.failures);
                    continue;
                }
            };
            match concurrence(red.rho(), tol) {
                Ok(c) => {
                    out.input_c = out.input_c.max(c);
                    if c > tol {
                        fail(format!("input concurrence ({s},{r})"), c, &mut out.failures);
                    }
                }
                Err(e) => fail(
                    format!("input concurrence: {e}"),
                    f64::NAN,
                    &mut out.failures,
                ),
            }
            match QubitIndexSet::single(2, 1).and_then(|cut| negativity(red.rho(), 2, &cut, tol)) {
                Ok(v) => {
                    out.input_n = out.input_n.max(v);
                    if v > tol {
                        fail(format!("input negativity ({s},{r})"), v, &mut out.failures);
                    }
                }
                Err(e) => fail(
                    format!("input negativity: {e}"),
                    f64::NAN,
                    &mut out.failures,
                ),
            }
        }
    }

    // Every ensemble member with weight must itself be product: no pair
    // entanglement and no single-qubit mixing.
    for (w, vec) in cert.weights.iter().zip(cert.vectors.iter()) {
        if *w == 0.0 {
            continue;
        }
        let vs = match vec.to_state(n) {
            Ok(s) => s,
            Err(e) => {
                fail(format!("vector state: {e}"), f64::NAN, &mut out.failures);
                continue;
            }
        };
        for q in 0..n {
            let d = compact_pivot_det(&vs, q).abs();
            out.vector_v = out.vector_v.max(d);
            if d > 1e-12 {
                fail(format!("vector pivot det q={q}"), d, &mut out.failures);
            }
        }
        for s in 0..n {
            for r in (s + 1)..n {
                let red = match vs.reduce_pair(s, r) {
                    Ok(r) => r,
                    Err(e) => {
                        fail(
                            format!("vector reduce_pair: {e}"),
                            f64::NAN,
                            &mut out.failures,
                        );
                        continue;
                    }
                };
                match concurrence(red.rho(), tol) {
                    Ok(c) => {
                        out.vector_v = out.vector_v.max(c);
                        if c > 1e-12 {
                            fail(
                                format!("vector concurrence ({s},{r})"),
                                c,
                                &mut out.failures,
                            );
                        }
                    }
                    Err(e) => fail(
                        format!("vector concurrence: {e}"),
                        f64::NAN,
                        &mut out.failures,
                    ),
                }
                match QubitIndexSet::single(2, 1)
                    .and_then(|cut| negativity(red.rho(), 2, &cut, tol))
                {
                    Ok(v) => {
                        out.vector_v = out.vector_v.max(v);
                        if v > 1e-12 {
                            fail(format!("vector negativity ({s},{r})"), v, &mut out.failures);
                        }
                    }
                    Err(e) => fail(
                        format!("vector negativity: {e}"),
                        f64::NAN,
                        &mut out.failures,
                    ),
                }
            }
        }
    }

    out
}

/// Randomized stress test of the zero-coherence separability construction.
///
/// Draws `samples_per_n` zero-coherence states for each n, certifies each,
/// and checks the certificate and the absence of pair entanglement. Sample
/// seeds derive from `master_seed` by position, so reruns and thread counts
/// do not change what gets drawn.
pub fn audit_theorem(
    ns: &[usize],
    samples_per_n: usize,
    master_seed: u64,
    tol: f64,
) -> Result<AuditReport> {
    if ns.is_empty() || samples_per_n == 0 {
        return Err(Error::EmptySequence);
    }
    let jobs: Vec<(usize, usize, u64)> = ns
        .iter()
        .enumerate()
        .flat_map(|(ni, &n)| {
            (0..samples_per_n).map(move |i| {
                let global = (ni * samples_per_n + i) as u64;
                (n, i, derive_seed(master_seed, global))
            })
        })
        .collect();

    let outcomes: Vec<SampleOutcome> = jobs
        .par_iter()
        .map(|&(n, i, seed)| audit_one(n, i, seed, tol))
        .collect();

    let mut report = AuditReport {
        ns: ns.to_vec(),
        samples_per_n,
        total: outcomes.len(),
        passed: 0,
        max_residual: 0.0,
        max_input_pair_concurrence: 0.0,
        max_input_pair_negativity: 0.0,
        max_vector_violation: 0.0,
        failures: Vec::new(),
    };
    for o in outcomes {
        report.max_residual = report.max_residual.max(o.residual);
        report.max_input_pair_concurrence = report.max_input_pair_concurrence.max(o.input_c);
        report.max_input_pair_negativity = report.max_input_pair_negativity.max(o.input_n);
        report.max_vector_violation = report.max_vector_violation.max(o.vector_v);
        if o.failures.is_empty() {
            report.passed += 1;
        } else if report.failures.len() < MAX_RECORDED_FAILURES {
            report.failures.extend(
                o.failures
                    .into_iter()
                    .take(MAX_RECORDED_FAILURES - report.failures.len()),
            );
        }
    }
    Ok(report)
}
