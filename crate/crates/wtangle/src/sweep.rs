//! Parameter sweeps rendered as CSV tables: the two-amplitude landscape of
//! the normalized pair sum, the n-scan of pi-tangle against the normalized
//! sums, and entanglement decay under dephasing.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{
    pi_tangle_compact, sum_pi_tangles_subspace, sum_two_tangles_subspace, Z_LARGE_N_PI,
    Z_LARGE_N_TWO_TANGLE,
};
use crate::sampling::{dephase, sample_state, SamplerConfig, SamplerKind};
use crate::states::{build_asymmetric, build_symmetric};

/// A rectangular table of f64 cells with named columns. Rendering is
/// deliberately canonical — fixed scientific notation, 17 significant
/// digits — so the same data always produces byte-identical files.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Canonical cell rendering: round-trippable scientific notation.
pub fn format_cell(v: f64) -> String {
    format!("{v:.16e}")
}

impl SweepTable {
    fn new(columns: &[&str]) -> Self {
        SweepTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&format_cell(*v));
                first = false;
            }
            out.push('\n');
        }
        out
    }

    /// Render fully in memory, then write with a single call so a failure
    /// never leaves a half-written table behind the success path.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let body = self.to_csv();
        std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Minimal gnuplot companion for the CSV, heat map for 3-column grids
    /// and line series otherwise.
    pub fn gnuplot(&self, csv_name: &str, grid: bool) -> String {
        let mut s = String::new();
        s.push_str(&format!("# companion plot script for {csv_name}\n"));
        s.push_str("set datafile separator \",\"\n");
        s.push_str("set key autotitle columnhead\n");
        if grid && self.columns.len() == 3 {
            s.push_str(&format!(
                "set view map\nsplot '{csv_name}' using 1:2:3 with points pointtype 5 palette\n"
            ));
        } else {
            s.push_str(&format!(
                "plot for [i=2:{}] '{csv_name}' using 1:i with lines\n",
                self.columns.len()
            ));
        }
        s
    }
}

/// Landscape of the normalized pair sum over the three-qubit family with
/// real amplitudes (k1, k2, sqrt(1 - k1^2 - k2^2)).
#[derive(Debug, Clone)]
pub struct Fig1Config {
    /// Points per axis over [0, 1], endpoints included.
    pub grid: usize,
    /// Normalization applied to the pair sum.
    pub z: f64,
    pub tol: f64,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Fig1Config {
            grid: 201,
            z: crate::measures::Z_THREE_QUBIT,
            tol: crate::linalg::DEFAULT_TOL,
        }
    }
}

pub fn fig1_grid(config: &Fig1Config) -> Result<SweepTable> {
    if config.grid < 2 {
        return Err(Error::InvalidConfig {
            reason: "grid needs at least 2 points per axis".into(),
        });
    }
    let m = config.grid;
    let step = 1.0 / (m - 1) as f64;
    let mut table = SweepTable::new(&["k1", "k2", "sum_two_tangles"]);
    for i in 0..m {
        let k1 = i as f64 * step;
        for j in 0..m {
            let k2 = j as f64 * step;
            let rem = 1.0 - k1 * k1 - k2 * k2;
            if rem < -1e-12 {
                continue; // outside the admissible disk
            }
            let k3 = rem.max(0.0).sqrt();
            let state = build_asymmetric(
                3,
                vec![
                    Complex64::new(k1, 0.0),
                    Complex64::new(k2, 0.0),
                    Complex64::new(k3, 0.0),
                ],
            )?;
            let s = sum_two_tangles_subspace(&state, config.z, config.tol)?;
            table.push(vec![k1, k2, s]);
        }
    }
    Ok(table)
}

/// Scan of the uniform state over n: per-pivot pi-tangle next to the two
/// normalized sums, everything computed through the compact pipeline.
#[derive(Debug, Clone)]
pub struct Fig2Config {
    pub n_min: usize,
    pub n_max: usize,
    pub tol: f64,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Fig2Config {
            n_min: 3,
            n_max: 100,
            tol: crate::linalg::DEFAULT_TOL,
        }
    }
}

pub fn fig2_n_scan(config: &Fig2Config) -> Result<SweepTable> {
    if config.n_min < 3 || config.n_max < config.n_min {
        return Err(Error::InvalidConfig {
            reason: format!(
                "n range [{}, {}] must satisfy 3 <= n_min <= n_max",
                config.n_min, config.n_max
            ),
        });
    }
    let mut table = SweepTable::new(&[
        "n",
        "pi_tangle",
        "sum_two_tangles_normalized",
        "sum_pi_normalized",
    ]);
    for n in config.n_min..=config.n_max {
        let state = build_symmetric(n, Complex64::new(0.0, 0.0))?;
        let pi = pi_tangle_compact(&state, 0, config.tol)?;
        let sum_two = sum_two_tangles_subspace(&state, Z_LARGE_N_TWO_TANGLE, config.tol)?;
        // All pivots are equivalent by symmetry, but sum over them anyway:
        // the scan exercises the pipeline, not the symmetry argument.
        let sum_pi = sum_pi_tangles_subspace(&state, Z_LARGE_N_PI, config.tol, n)?;
        table.push(vec![n as f64, pi, sum_two, sum_pi]);
    }
    Ok(table)
}

/// Entanglement decay of one sampled state under increasing dephasing.
#[derive(Debug, Clone)]
pub struct DephaseConfig {
    pub n: usize,
    pub kind: SamplerKind,
    pub seed: u64,
    /// Number of strength values over [0, 1], endpoints included.
    pub steps: usize,
    pub z_two: f64,
    pub z_pi: f64,
    pub tol: f64,
    /// Full-space cap for the mixed-state pi route.
    pub cap: usize,
}

impl Default for DephaseConfig {
    fn default() -> Self {
        DephaseConfig {
            n: 4,
            kind: SamplerKind::PureSymmetric,
            seed: 0,
            steps: 11,
            z_two: 1.0,
            z_pi: 1.0,
            tol: crate::linalg::DEFAULT_TOL,
            cap: crate::linalg::DEFAULT_CAP,
        }
    }
}

pub fn dephase_scan(config: &DephaseConfig) -> Result<SweepTable> {
    if config.steps < 2 {
        return Err(Error::InvalidConfig {
            reason: "dephasing scan needs at least 2 steps".into(),
        });
    }
    let base = sample_state(&SamplerConfig {
        kind: config.kind,
        n: config.n,
        seed: config.seed,
    })?;
    let mut table = SweepTable::new(&["strength", "sum_two_tangles", "sum_pi"]);
    let step = 1.0 / (config.steps - 1) as f64;
    for i in 0..config.steps {
        // Land exactly on 1.0 at the last step.
        let strength = if i + 1 == config.steps {
            1.0
        } else {
            i as f64 * step
        };
        let state = dephase(&base, strength)?;
        let sum_two = sum_two_tangles_subspace(&state, config.z_two, config.tol)?;
        let sum_pi = sum_pi_tangles_subspace(&state, config.z_pi, config.tol, config.cap)?;
        table.push(vec![strength, sum_two, sum_pi]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{closed_form_pi_tangle, closed_form_sum_pi, closed_form_sum_two_tangles};
    use approx::assert_abs_diff_eq;

    #[test]
    fn csv_rendering_is_canonical() {
        let mut t = SweepTable::new(&["a", "b"]);
        t.push(vec![0.0, 1.0 / 3.0]);
        let csv = t.to_csv();
        assert_eq!(csv, "a,b\n0.0000000000000000e0,3.3333333333333331e-1\n");
        assert_eq!(csv, t.to_csv());
    }

    #[test]
    fn csv_files_are_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = Fig1Config {
            grid: 11,
            ..Fig1Config::default()
        };
        let t = fig1_grid(&cfg).unwrap();
        let p1 = dir.path().join("a.csv");
        let p2 = dir.path().join("b.csv");
        t.write_csv(&p1).unwrap();
        fig1_grid(&cfg).unwrap().write_csv(&p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn fig1_covers_the_admissible_disk() {
        let cfg = Fig1Config {
            grid: 21,
            ..Fig1Config::default()
        };
        let t = fig1_grid(&cfg).unwrap();
        assert_eq!(t.columns, vec!["k1", "k2", "sum_two_tangles"]);
        // Axis corners stay in, the (1,1) corner is excluded.
        assert!(t.rows.iter().any(|r| r[0] == 1.0 && r[1] == 0.0));
        assert!(t.rows.iter().any(|r| r[0] == 0.0 && r[1] == 1.0));
        assert!(!t.rows.iter().any(|r| r[0] == 1.0 && r[1] == 1.0));
        for r in &t.rows {
            assert!(r[0] * r[0] + r[1] * r[1] <= 1.0 + 1e-12);
            assert!(
                (0.0..=1.0 + 1e-9).contains(&r[2]),
                "value {} out of range",
                r[2]
            );
        }
        // Normalized pair sum peaks near the uniform point.
        let max = t.rows.iter().map(|r| r[2]).fold(0.0f64, f64::max);
        assert!(max > 0.99, "grid max {max}");
    }

    #[test]
    fn fig2_matches_closed_forms() {
        let cfg = Fig2Config {
            n_min: 3,
            n_max: 12,
            tol: 1e-9,
        };
        let t = fig2_n_scan(&cfg).unwrap();
        assert_eq!(t.rows.len(), 10);
        for row in &t.rows {
            let n = row[0] as usize;
            assert_abs_diff_eq!(row[1], closed_form_pi_tangle(n).unwrap(), epsilon = 1e-10);
            assert_abs_diff_eq!(
                row[2],
                Z_LARGE_N_TWO_TANGLE * closed_form_sum_two_tangles(n).unwrap(),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                row[3],
                Z_LARGE_N_PI * closed_form_sum_pi(n).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn fig2_rejects_bad_ranges() {
        assert!(fig2_n_scan(&Fig2Config {
            n_min: 2,
            n_max: 5,
            tol: 1e-9
        })
        .is_err());
        assert!(fig2_n_scan(&Fig2Config {
            n_min: 5,
            n_max: 4,
            tol: 1e-9
        })
        .is_err());
    }

    #[test]
    fn dephasing_drains_the_pair_sum() {
        let cfg = DephaseConfig {
            n: 4,
            seed: 3,
            steps: 6,
            ..DephaseConfig::default()
        };
        let t = dephase_scan(&cfg).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert_eq!(t.rows[0][0], 0.0);
        assert_eq!(t.rows[5][0], 1.0);
        // Pair entanglement decays monotonically and dies at full strength.
        for w in t.rows.windows(2) {
            assert!(w[1][1] <= w[0][1] + 1e-9);
        }
        assert!(t.rows[5][1] <= 1e-9, "residual pair sum {}", t.rows[5][1]);
        assert!(t.rows[5][2] <= 1e-9, "residual pi sum {}", t.rows[5][2]);
        assert!(t.rows[0][1] > 0.1);
    }

    #[test]
    fn gnuplot_stub_references_the_csv() {
        let t = fig2_n_scan(&Fig2Config {
            n_min: 3,
            n_max: 4,
            tol: 1e-9,
        })
        .unwrap();
        let gp = t.gnuplot("scan.csv", false);
        assert!(gp.contains("scan.csv"));
        assert!(gp.contains("plot"));
        let grid = SweepTable::new(&["k1", "k2", "v"]).gnuplot("g.csv", true);
        assert!(grid.contains("splot"));
    }
}
