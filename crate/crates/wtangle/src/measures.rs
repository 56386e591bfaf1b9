//! Entanglement quantities: pairwise concurrence and negativity, one-tangle,
//! three-tangle, pi-tangle, and the aggregate sums over pairs and pivots with
//! their analytic closed forms for the uniform single-excitation state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    concurrence_spectrum, hermitian_eigenvalues, partial_trace, partial_transpose, CMat,
    DensityMatrix, QubitIndexSet,
};
use crate::states::WSubspaceState;

/// Z preset normalizing the three-qubit families to a maximum of 1.
pub const Z_THREE_QUBIT: f64 = 0.75;
/// Z preset normalizing the pair sum 2(n-1)/n toward 1 at large n.
pub const Z_LARGE_N_TWO_TANGLE: f64 = 0.5;
/// Z preset normalizing the pivot sum of pi-tangles toward 1 at large n.
pub const Z_LARGE_N_PI: f64 = 0.25;

fn ensure_z(z: f64) -> Result<()> {
    if z <= 0.0 || !z.is_finite() {
        return Err(Error::InvalidZ { z });
    }
    Ok(())
}

/// Small negatives from floating-point subtraction are reported as zero;
/// anything beyond the tolerance is left alone so real sign errors surface.
fn clamp_difference(v: f64, tol: f64) -> f64 {
    if v < 0.0 && v >= -tol {
        0.0
    } else {
        v
    }
}

/// Two-qubit concurrence max{0, l1 - l2 - l3 - l4} from the spin-flip spectrum.
pub fn concurrence(rho_pair: &CMat, tol: f64) -> Result<f64> {
    let s = concurrence_spectrum(rho_pair, tol)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Twice the absolute sum of negative partial-transpose eigenvalues.
pub fn negativity(rho: &CMat, n: usize, partition: &QubitIndexSet, tol: f64) -> Result<f64> {
    if partition.is_empty() || partition.len() >= n {
        return Err(Error::InvalidConfig {
            reason: "negativity partition must be a nonempty proper subset of the register".into(),
        });
    }
    let pt = partial_transpose(rho, n, partition)?;
    let w = hermitian_eigenvalues(&pt, tol)?;
    Ok(2.0 * w.iter().filter(|&&l| l < 0.0).map(|l| -l).sum::<f64>())
}

/// Squared pivot-versus-rest concurrence of a pure state: 4 det of the
/// pivot's single-qubit reduction.
pub fn one_tangle(rho: &DensityMatrix, pivot: usize, tol: f64) -> Result<f64> {
    if !rho.is_pure(tol) {
        return Err(Error::NotPure {
            purity: rho.purity(),
            tol,
        });
    }
    let keep = QubitIndexSet::single(rho.n(), pivot)?;
    let r = partial_trace(rho.mat(), rho.n(), &keep)?;
    let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
    Ok(4.0 * clamp_difference(det.re, tol))
}

/// det of the pivot's single-qubit reduction, read off the compact form:
/// the diagonal entry B_qq against everything else on the diagonal.
pub(crate) fn compact_pivot_det(state: &WSubspaceState, pivot: usize) -> f64 {
    let j = state.slot_of_qubit(pivot);
    let bqq = state.b()[(j, j)].re;
    bqq * (1.0 - bqq) - state.x()[j].norm_sqr()
}

/// Residual three-qubit entanglement: the pivot's one-tangle minus its two
/// squared pair concurrences.
pub fn three_tangle(rho: &DensityMatrix, tol: f64) -> Result<f64> {
    if rho.n() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            got: rho.n(),
        });
    }
    let ot = one_tangle(rho, 0, tol)?;
    let mut acc = ot;
    for j in [1usize, 2] {
        let keep = QubitIndexSet::new(3, [0, j])?;
        let red = partial_trace(rho.mat(), 3, &keep)?;
        let c = concurrence(&red, tol)?;
        acc -= c * c;
    }
    Ok(clamp_difference(acc, tol))
}

/// Pi-tangle via full-space partial transposes: squared pivot|rest negativity
/// minus the squared pair negativities with every other qubit.
pub fn pi_tangle_full(rho: &DensityMatrix, pivot: usize, tol: f64) -> Result<f64> {
    let n = rho.n();
    let cut = QubitIndexSet::single(n, pivot)?;
    let np = negativity(rho.mat(), n, &cut, tol)?;
    let mut acc = np * np;
    for j in 0..n {
        if j == pivot {
            continue;
        }
        let keep = QubitIndexSet::pair(n, pivot, j)?;
        let red = partial_trace(rho.mat(), n, &keep)?;
        let npj = negativity(&red, 2, &QubitIndexSet::single(2, 1)?, tol)?;
        acc -= npj * npj;
    }
    Ok(clamp_difference(acc, tol))
}

/// Pi-tangle from the compact representation without any 2^n object. The
/// pivot|rest negativity of a pure state equals its pivot concurrence
/// 2 sqrt(det), and pair negativities come from the 4x4 reductions.
pub fn pi_tangle_compact(state: &WSubspaceState, pivot: usize, tol: f64) -> Result<f64> {
    if !state.is_pure(tol) {
        return Err(Error::NotPure {
            purity: state.purity(),
            tol,
        });
    }
    if pivot >= state.n() {
        return Err(Error::IndexError {
            index: pivot,
            n: state.n(),
        });
    }
    let mut acc = 4.0 * clamp_difference(compact_pivot_det(state, pivot), tol);
    for q in 0..state.n() {
        if q == pivot {
            continue;
        }
        let red = state.reduce_pair(pivot, q)?;
        let npq = negativity(red.rho(), 2, &QubitIndexSet::single(2, 1)?, tol)?;
        acc -= npq * npq;
    }
    Ok(clamp_difference(acc, tol))
}

/// Pi-tangle for any subspace state: compact path for pure states, full-space
/// path (subject to `cap`) otherwise.
pub fn pi_tangle_subspace(
    state: &WSubspaceState,
    pivot: usize,
    tol: f64,
    cap: usize,
) -> Result<f64> {
    if state.is_pure(tol) {
        pi_tangle_compact(state, pivot, tol)
    } else {
        pi_tangle_full(&state.to_full(cap)?, pivot, tol)
    }
}

/// Z times the sum of squared pair concurrences, pairs reduced compactly.
pub fn sum_two_tangles_subspace(state: &WSubspaceState, z: f64, tol: f64) -> Result<f64> {
    ensure_z(z)?;
    let n = state.n();
    let mut acc = 0.0;
    for s in 0..n {
        for r in (s + 1)..n {
            let c = concurrence(state.reduce_pair(s, r)?.rho(), tol)?;
            acc += c * c;
        }
    }
    Ok(z * acc)
}

/// Z times the sum of squared pair concurrences of a full-space state.
pub fn sum_two_tangles_full(rho: &DensityMatrix, z: f64, tol: f64) -> Result<f64> {
    ensure_z(z)?;
    let n = rho.n();
    let mut acc = 0.0;
    for s in 0..n {
        for r in (s + 1)..n {
            let keep = QubitIndexSet::pair(n, s, r)?;
            let red = partial_trace(rho.mat(), n, &keep)?;
            let c = concurrence(&red, tol)?;
            acc += c * c;
        }
    }
    Ok(z * acc)
}

/// The excitation-coherence form of the pair sum, 4 sum_{s<r} |B_sr|^2.
/// Upper bound on the unnormalized sum of squared concurrences; exact when
/// every pair takes the positive branch of the concurrence.
pub fn sum_two_tangles_coherence_bound(state: &WSubspaceState) -> f64 {
    let n = state.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += state.b()[(i, j)].norm_sqr();
        }
    }
    4.0 * acc
}

/// Z times the sum of pi-tangles over all pivots (compact/pure path).
pub fn sum_pi_tangles_subspace(
    state: &WSubspaceState,
    z: f64,
    tol: f64,
    cap: usize,
) -> Result<f64> {
    ensure_z(z)?;
    let mut acc = 0.0;
    for q in 0..state.n() {
        acc += pi_tangle_subspace(state, q, tol, cap)?;
    }
    Ok(z * acc)
}

/// Z times the sum of pi-tangles over all pivots of a full-space state.
pub fn sum_pi_tangles_full(rho: &DensityMatrix, z: f64, tol: f64) -> Result<f64> {
    ensure_z(z)?;
    let mut acc = 0.0;
    for q in 0..rho.n() {
        acc += pi_tangle_full(rho, q, tol)?;
    }
    Ok(z * acc)
}

fn ensure_n(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidQubitCount { n, min: 3 });
    }
    Ok(n as f64)
}

/// Unnormalized pair sum for the uniform single-excitation state: 2(n-1)/n.
pub fn closed_form_sum_two_tangles(n: usize) -> Result<f64> {
    let nn = ensure_n(n)?;
    Ok(2.0 * (nn - 1.0) / nn)
}

/// Pair negativity of the uniform single-excitation state,
/// (sqrt((n-2)^2 + 4) - (n-2))/n, in a cancellation-free form.
pub fn closed_form_pair_negativity(n: usize) -> Result<f64> {
    let nn = ensure_n(n)?;
    let m = nn - 2.0;
    let delta = 4.0 / ((m * m + 4.0).sqrt() + m);
    Ok(delta / nn)
}

/// Squared pivot|rest concurrence of the uniform single-excitation state.
pub fn closed_form_one_tangle(n: usize) -> Result<f64> {
    let nn = ensure_n(n)?;
    Ok(4.0 * (nn - 1.0) / (nn * nn))
}

/// Per-pivot pi-tangle of the uniform single-excitation state.
pub fn closed_form_pi_tangle(n: usize) -> Result<f64> {
    let nn = ensure_n(n)?;
    let npair = closed_form_pair_negativity(n)?;
    Ok(closed_form_one_tangle(n)? - (nn - 1.0) * npair * npair)
}

/// Unnormalized pivot sum of pi-tangles of the uniform single-excitation state.
pub fn closed_form_sum_pi(n: usize) -> Result<f64> {
    Ok(n as f64 * closed_form_pi_tangle(n)?)
}

/// True when the tail (last quarter, at least one element) of the measure
/// sequence, ordered by n, stays at or above the threshold. A desk-scale
/// stand-in for "does not vanish as n grows".
pub fn large_n_condition_check(values: &[(usize, f64)], threshold: f64) -> Result<bool> {
    if values.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut sorted: Vec<(usize, f64)> = values.to_vec();
    sorted.sort_by_key(|&(n, _)| n);
    let tail = sorted.len().div_euclid(4).max(1);
    Ok(sorted[sorted.len() - tail..]
        .iter()
        .all(|&(_, v)| v >= threshold))
}

/// Pairwise concurrence and negativity for one unordered pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairMeasures {
    pub s: usize,
    pub r: usize,
    pub concurrence: f64,
    pub negativity: f64,
}

/// Per-pivot quantities; one_tangle only exists for pure states, pi_tangle is
/// absent when a mixed state is too large for the full-space route.
#[derive(Debug, Clone, Serialize)]
pub struct PivotMeasures {
    pub pivot: usize,
    pub one_tangle: Option<f64>,
    pub pi_tangle: Option<f64>,
}

/// Everything the measure pipeline knows about one state.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub n: usize,
    pub z_two: f64,
    pub z_pi: f64,
    pub pairs: Vec<PairMeasures>,
    pub pivots: Vec<PivotMeasures>,
    pub sum_two_tangles: f64,
    pub sum_pi_tangles: Option<f64>,
}

impl MeasureReport {
    /// Symmetric pair lookup.
    pub fn pair(&self, s: usize, r: usize) -> Option<&PairMeasures> {
        let (lo, hi) = (s.min(r), s.max(r));
        self.pairs.iter().find(|p| p.s == lo && p.r == hi)
    }

    pub fn from_subspace(
        state: &WSubspaceState,
        z_two: f64,
        z_pi: f64,
        tol: f64,
        cap: usize,
    ) -> Result<MeasureReport> {
        ensure_z(z_two)?;
        ensure_z(z_pi)?;
        let n = state.n();
        let pure = state.is_pure(tol);

        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        let mut csum = 0.0;
        for s in 0..n {
            for r in (s + 1)..n {
                let red = state.reduce_pair(s, r)?;
                let c = concurrence(red.rho(), tol)?;
                let neg = negativity(red.rho(), 2, &QubitIndexSet::single(2, 1)?, tol)?;
                csum += c * c;
                pairs.push(PairMeasures {
                    s,
                    r,
                    concurrence: c,
                    negativity: neg,
                });
            }
        }

        let full = if !pure && n <= cap {
            Some(state.to_full(cap)?)
        } else {
            None
        };
        let mut pivots = Vec::with_capacity(n);
        let mut pi_sum = Some(0.0f64);
        for q in 0..n {
            let one = if pure {
                Some(4.0 * clamp_difference(compact_pivot_det(state, q), tol))
            } else {
                None
            };
            let pi = if pure {
                Some(pi_tangle_compact(state, q, tol)?)
            } else if let Some(f) = &full {
                Some(pi_tangle_full(f, q, tol)?)
            } else {
                None
            };
            pi_sum = match (pi_sum, pi) {
                (Some(acc), Some(v)) => Some(acc + v),
                _ => None,
            };
            pivots.push(PivotMeasures {
                pivot: q,
                one_tangle: one,
                pi_tangle: pi,
            });
        }

        Ok(MeasureReport {
            n,
            z_two,
            z_pi,
            pairs,
            pivots,
            sum_two_tangles: z_two * csum,
            sum_pi_tangles: pi_sum.map(|s| z_pi * s),
        })
    }

    pub fn from_full(
        rho: &DensityMatrix,
        z_two: f64,
        z_pi: f64,
        tol: f64,
    ) -> Result<MeasureReport> {
        ensure_z(z_two)?;
        ensure_z(z_pi)?;
        let n = rho.n();
        let pure = rho.is_pure(tol);

        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        let mut csum = 0.0;
        for s in 0..n {
            for r in (s + 1)..n {
                let keep = QubitIndexSet::pair(n, s, r)?;
                let red = partial_trace(rho.mat(), n, &keep)?;
                let c = concurrence(&red, tol)?;
                let neg = negativity(&red, 2, &QubitIndexSet::single(2, 1)?, tol)?;
                csum += c * c;
                pairs.push(PairMeasures {
                    s,
                    r,
                    concurrence: c,
                    negativity: neg,
                });
            }
        }

        let mut pivots = Vec::with_capacity(n);
        let mut pi_sum = 0.0;
        for q in 0..n {
            let one = if pure {
                Some(one_tangle(rho, q, tol)?)
            } else {
                None
            };
            let pi = pi_tangle_full(rho, q, tol)?;
            pi_sum += pi;
            pivots.push(PivotMeasures {
                pivot: q,
                one_tangle: one,
                pi_tangle: Some(pi),
            });
        }

        Ok(MeasureReport {
            n,
            z_two,
            z_pi,
            pairs,
            pivots,
            sum_two_tangles: z_two * csum,
            sum_pi_tangles: Some(z_pi * pi_sum),
        })
    }
}
