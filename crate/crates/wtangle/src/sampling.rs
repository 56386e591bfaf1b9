//! Deterministic samplers for the single-excitation family, random local
//! unitaries, and a dephasing channel. Every sampler is a pure function of
//! its seed so any drawn state can be replayed exactly.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, CMat, DensityMatrix};
use crate::states::{build_asymmetric, build_symmetric, WSubspaceState};

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream-stable per-item seed: mixing is position-based, so item k gets the
/// same seed no matter how work is split across threads.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix(master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Families the sampler can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    /// Permutation-symmetric pure state, vacuum amplitude drawn from a disk.
    PureSymmetric,
    /// Pure single-excitation state with independent complex amplitudes.
    PureAsymmetric,
    /// Trace-normalized Ginibre draw on the full (n+1)-dimensional sector.
    MixedGeneral,
    /// Mixture of vacuum and single-mode product states: excitation
    /// coherences are exactly zero by construction.
    MixedZeroCoherence,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub n: usize,
    pub seed: u64,
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform draw from the closed disk of the given radius.
fn disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen_range(0.0..1.0f64).sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

pub fn sample_state(config: &SamplerConfig) -> Result<WSubspaceState> {
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match config.kind {
        SamplerKind::PureSymmetric => build_symmetric(n, disk(&mut rng, 2.0)),
        SamplerKind::PureAsymmetric => {
            let mut k: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
            let norm = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                // Probability-zero draw; fall back to a basis vector.
                k[0] = Complex64::new(1.0, 0.0);
            } else {
                for z in k.iter_mut() {
                    *z /= norm;
                }
            }
            build_asymmetric(n, k)
        }
        SamplerKind::MixedGeneral => {
            let d = n + 1;
            let g = Array2::from_shape_fn((d, d), |_| complex_normal(&mut rng));
            let mut rho = g.dot(&g.mapv(|z| z.conj()).reversed_axes());
            let tr: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
            rho.mapv_inplace(|z| z / tr);
            let a = rho[(0, 0)].re;
            let x: Vec<Complex64> = (1..d).map(|j| rho[(0, j)]).collect();
            let b = rho.slice(ndarray::s![1.., 1..]).to_owned();
            WSubspaceState::new(n, a, x, b)
        }
        SamplerKind::MixedZeroCoherence => {
            let mut p: Vec<f64> = (0..=n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = p.iter().sum();
            for w in p.iter_mut() {
                *w /= total;
            }
            let mu: Vec<Complex64> = (0..n).map(|_| disk(&mut rng, 1.0)).collect();
            let mut a = p[0];
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            let mut b = CMat::zeros((n, n));
            for i in 0..n {
                let vac_sq = 1.0 - mu[i].norm_sqr();
                a += p[i + 1] * vac_sq;
                x[i] = Complex64::new(p[i + 1] * vac_sq.max(0.0).sqrt(), 0.0) * mu[i].conj();
                b[(i, i)] = Complex64::new(p[i + 1] * mu[i].norm_sqr(), 0.0);
            }
            WSubspaceState::new(n, a, x, b)
        }
    }
}

/// Haar-distributed 2x2 unitary: QR of a Ginibre draw with the R diagonal
/// phases absorbed into Q.
fn haar_unitary2(rng: &mut ChaCha8Rng) -> CMat {
    loop {
        let a = complex_normal(rng);
        let b = complex_normal(rng);
        let n1 = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n1 < 1e-12 {
            continue;
        }
        let q1 = [a / n1, b / n1];
        let c = complex_normal(rng);
        let d = complex_normal(rng);
        // Gram-Schmidt the second column against the first.
        let overlap = q1[0].conj() * c + q1[1].conj() * d;
        let v = [c - overlap * q1[0], d - overlap * q1[1]];
        let n2 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n2 < 1e-12 {
            continue;
        }
        let q2 = [v[0] / n2, v[1] / n2];
        let mut u = CMat::zeros((2, 2));
        u[(0, 0)] = q1[0];
        u[(1, 0)] = q1[1];
        u[(0, 1)] = q2[0];
        u[(1, 1)] = q2[1];
        // Random diagonal phases keep the distribution Haar rather than
        // quotiented by the positive-diagonal convention.
        let p0 = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let p1 = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        u[(0, 0)] *= p0;
        u[(1, 0)] *= p0;
        u[(0, 1)] *= p1;
        u[(1, 1)] *= p1;
        return u;
    }
}

/// One independent Haar 2x2 unitary per qubit.
pub fn sample_local_unitary(n: usize, seed: u64) -> Vec<CMat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| haar_unitary2(&mut rng)).collect()
}

pub fn identity_local_unitaries(n: usize) -> Vec<CMat> {
    (0..n).map(|_| CMat::eye(2)).collect()
}

fn check_unitary2(u: &CMat) -> Result<()> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: u.nrows().max(u.ncols()),
        });
    }
    let udag = u.mapv(|z| z.conj()).reversed_axes();
    let prod = udag.dot(u);
    let eye = CMat::eye(2);
    let dev = prod
        .iter()
        .zip(eye.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    if dev > 1e-9 {
        return Err(Error::InvalidConfig {
            reason: format!("local operator is not unitary (deviation {dev:.2e})"),
        });
    }
    Ok(())
}

/// Conjugate by a tensor product of single-qubit unitaries, qubit 0 leftmost.
pub fn apply_local_unitaries(rho: &DensityMatrix, us: &[CMat]) -> Result<DensityMatrix> {
    if us.len() != rho.n() {
        return Err(Error::LengthMismatch {
            expected: rho.n(),
            got: us.len(),
        });
    }
    for u in us {
        check_unitary2(u)?;
    }
    let mut big = CMat::eye(1);
    for u in us {
        big = kron(&big, u);
    }
    let bigdag = big.mapv(|z| z.conj()).reversed_axes();
    let out = big.dot(rho.mat()).dot(&bigdag);
    DensityMatrix::new(out, 1e-8)
}

/// Scale every excitation coherence (off-diagonal B and the vacuum row X)
/// by 1 - strength. Strength 1 lands exactly in the zero-coherence family.
pub fn dephase(state: &WSubspaceState, strength: f64) -> Result<WSubspaceState> {
    if !(0.0..=1.0).contains(&strength) || !strength.is_finite() {
        return Err(Error::StrengthOutOfRange { strength });
    }
    let factor = Complex64::new(1.0 - strength, 0.0);
    let n = state.n();
    let x: Vec<Complex64> = state.x().iter().map(|&v| v * factor).collect();
    let mut b = state.b().clone();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b[(i, j)] *= factor;
            }
        }
    }
    WSubspaceState::new(n, state.a(), x, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(kind: SamplerKind, n: usize, seed: u64) -> SamplerConfig {
        SamplerConfig { kind, n, seed }
    }

    #[test]
    fn derived_seeds_are_deterministic_and_spread() {
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
        assert_ne!(derive_seed(7, 3), derive_seed(7, 4));
        assert_ne!(derive_seed(7, 3), derive_seed(8, 3));
        assert_ne!(derive_seed(0, 0), derive_seed(0, 1));
    }

    #[test]
    fn samplers_replay_exactly() {
        for kind in [
            SamplerKind::PureSymmetric,
            SamplerKind::PureAsymmetric,
            SamplerKind::MixedGeneral,
            SamplerKind::MixedZeroCoherence,
        ] {
            let a = sample_state(&cfg(kind, 4, 42)).unwrap();
            let b = sample_state(&cfg(kind, 4, 42)).unwrap();
            assert_eq!(a.a(), b.a());
            assert_eq!(a.x(), b.x());
            assert_eq!(a.b(), b.b());
            let c = sample_state(&cfg(kind, 4, 43)).unwrap();
            assert_ne!(a.b(), c.b(), "different seeds should differ for {kind:?}");
        }
    }

    #[test]
    fn pure_kinds_are_pure() {
        for kind in [SamplerKind::PureSymmetric, SamplerKind::PureAsymmetric] {
            for seed in 0..20 {
                let s = sample_state(&cfg(kind, 5, seed)).unwrap();
                assert!(
                    s.is_pure(1e-9),
                    "{kind:?} seed {seed} purity {}",
                    s.purity()
                );
            }
        }
    }

    #[test]
    fn mixed_general_is_generically_mixed() {
        let s = sample_state(&cfg(SamplerKind::MixedGeneral, 4, 1)).unwrap();
        assert!(s.purity() < 0.999);
    }

    #[test]
    fn zero_coherence_kind_has_exactly_zero_coherences() {
        for seed in 0..50 {
            let s = sample_state(&cfg(SamplerKind::MixedZeroCoherence, 6, seed)).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    if i != j {
                        assert_eq!(s.b()[(i, j)], Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn local_unitaries_are_unitary_and_seeded() {
        let us = sample_local_unitary(3, 9);
        assert_eq!(us.len(), 3);
        for u in &us {
            check_unitary2(u).unwrap();
        }
        let again = sample_local_unitary(3, 9);
        assert_eq!(us[0], again[0]);
        let other = sample_local_unitary(3, 10);
        assert_ne!(us[0], other[0]);
    }

    #[test]
    fn identity_unitaries_fix_the_state() {
        let s = sample_state(&cfg(SamplerKind::MixedGeneral, 3, 5)).unwrap();
        let rho = s.to_full(12).unwrap();
        let out = apply_local_unitaries(&rho, &identity_local_unitaries(3)).unwrap();
        let dev = out
            .mat()
            .iter()
            .zip(rho.mat().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(dev <= 1e-14);
    }

    #[test]
    fn conjugation_preserves_purity() {
        let s = sample_state(&cfg(SamplerKind::PureAsymmetric, 3, 11)).unwrap();
        let rho = s.to_full(12).unwrap();
        let out = apply_local_unitaries(&rho, &sample_local_unitary(3, 12)).unwrap();
        assert_abs_diff_eq!(out.purity(), rho.purity(), epsilon = 1e-10);
        assert!(out.is_pure(1e-9));
    }

    #[test]
    fn apply_rejects_wrong_count_and_non_unitary() {
        let s = sample_state(&cfg(SamplerKind::MixedGeneral, 3, 5)).unwrap();
        let rho = s.to_full(12).unwrap();
        assert!(apply_local_unitaries(&rho, &identity_local_unitaries(2)).is_err());
        let mut bad = identity_local_unitaries(3);
        bad[1][(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(apply_local_unitaries(&rho, &bad).is_err());
    }

    #[test]
    fn dephase_scales_coherences() {
        let s = sample_state(&cfg(SamplerKind::MixedGeneral, 4, 3)).unwrap();
        let half = dephase(&s, 0.5).unwrap();
        assert_abs_diff_eq!(
            half.b()[(0, 1)].norm(),
            s.b()[(0, 1)].norm() * 0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(half.x()[2].norm(), s.x()[2].norm() * 0.5, epsilon = 1e-15);
        assert_eq!(half.b()[(0, 0)], s.b()[(0, 0)]);
        assert_eq!(half.a(), s.a());

        let zero = dephase(&s, 0.0).unwrap();
        assert_eq!(zero.b(), s.b());

        let full = dephase(&s, 1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(full.b()[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
            assert_eq!(full.x()[i], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn dephase_rejects_out_of_range() {
        let s = sample_state(&cfg(SamplerKind::MixedGeneral, 3, 3)).unwrap();
        assert!(matches!(
            dephase(&s, -0.1),
            Err(Error::StrengthOutOfRange { .. })
        ));
        assert!(matches!(
            dephase(&s, 1.5),
            Err(Error::StrengthOutOfRange { .. })
        ));
        assert!(matches!(
            dephase(&s, f64::NAN),
            Err(Error::StrengthOutOfRange { .. })
        ));
    }

    #[test]
    fn sampler_config_round_trips_through_json() {
        let c = cfg(SamplerKind::MixedZeroCoherence, 5, 77);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("mixed-zero-coherence"));
        let back: SamplerConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back.kind, SamplerKind::MixedZeroCoherence);
        assert_eq!(back.n, 5);
        assert_eq!(back.seed, 77);
    }
}
