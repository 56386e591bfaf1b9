//! Entanglement accounting for n-qubit states confined to the span of the
//! vacuum and the single-excitation kets (the W family and its mixtures).
//!
//! States live in a compact (n+1)-dimensional representation — vacuum weight
//! `A`, vacuum-excitation coherences `X`, excitation block `B` — so pairwise
//! quantities never touch a 2^n object. The crate computes:
//!
//! - pairwise concurrence and negativity from 4x4 two-qubit reductions,
//! - one-, three-, and pi-tangles, with full-space routes for cross-checks,
//! - the normalized sums of squared pair concurrences and of pi-tangles,
//!   with closed forms for the uniform state,
//! - explicit product-state decompositions ([`separability::certify`]) for
//!   states whose excitation-excitation coherences vanish, plus a seeded
//!   randomized audit of that construction,
//! - deterministic samplers, local-unitary conjugation, a dephasing channel,
//!   and CSV parameter sweeps.
//!
//! Qubit 0 is the leftmost tensor factor everywhere; excitation slot j
//! addresses qubit n-1-j. All randomness is seed-derived and replayable.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod sampling;
pub mod separability;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{CMat, DensityMatrix, QubitIndexSet, DEFAULT_CAP, DEFAULT_TOL};
pub use measures::{
    closed_form_one_tangle, closed_form_pair_negativity, closed_form_pi_tangle, closed_form_sum_pi,
    closed_form_sum_two_tangles, concurrence, large_n_condition_check, negativity, one_tangle,
    pi_tangle_compact, pi_tangle_full, pi_tangle_subspace, sum_pi_tangles_full,
    sum_pi_tangles_subspace, sum_two_tangles_full, sum_two_tangles_subspace, three_tangle,
    MeasureReport, Z_LARGE_N_PI, Z_LARGE_N_TWO_TANGLE, Z_THREE_QUBIT,
};
pub use sampling::{
    apply_local_unitaries, dephase, derive_seed, identity_local_unitaries, sample_local_unitary,
    sample_state, SamplerConfig, SamplerKind,
};
pub use separability::{
    audit_theorem, certify, check_positivity, AuditReport, PositivityReport, ProductVector,
    SeparabilityCertificate,
};
pub use states::{
    build_asymmetric, build_symmetric, AsymmetricWState, BipartiteReduction, SymmetricWState,
    WSubspaceState,
};
pub use sweep::{
    dephase_scan, fig1_grid, fig2_n_scan, DephaseConfig, Fig1Config, Fig2Config, SweepTable,
};
