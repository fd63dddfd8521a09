//! Time-series containers and their CSV serialization. Natural-unit
//! internals never leak: every column is SI (or dimensionless) and the
//! unit is part of the header name.

use std::io::Write;

use crate::error::Result;
use crate::gaussian::CovarianceState;
use crate::units;

/// One sampled point of the entanglement diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t_s: f64,
    pub log_negativity: f64,
    pub entropy: f64,
    pub skewness: f64,
    /// Leading Schmidt coefficients (may be empty for analytic runs).
    pub lambdas: Vec<f64>,
}

/// Time series of entanglement measures and non-Gaussianity diagnostics.
#[derive(Debug, Clone, Default)]
pub struct EntanglementTrace {
    pub rows: Vec<TraceRow>,
    /// Number of λ columns to emit.
    pub lambda_count: usize,
}

impl EntanglementTrace {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        write!(w, "t_s,log_negativity,entropy,skewness")?;
        for k in 1..=self.lambda_count {
            write!(w, ",lambda_{k}")?;
        }
        writeln!(w)?;
        for row in &self.rows {
            write!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e}",
                row.t_s, row.log_negativity, row.entropy, row.skewness
            )?;
            for k in 0..self.lambda_count {
                write!(w, ",{:.17e}", row.lambdas.get(k).copied().unwrap_or(0.0))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// One sampled point of the covariance dynamics, in SI units.
/// `mean_r`/`mean_p` are the relative-coordinate first moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub t_s: f64,
    pub sigma00_m2: f64,
    pub sigma02_m2: f64,
    pub sigma11_si: f64,
    pub sigma13_si: f64,
    pub sigma01_js: f64,
    pub sigma03_js: f64,
    pub mean_r_m: f64,
    pub mean_p_si: f64,
}

impl MomentRow {
    pub fn from_covariance(cov: &CovarianceState) -> Self {
        let var_to_si = 1.0e-24; // pm^2 -> m^2
        let p2_to_si = {
            let k = units::momentum_to_si(1.0);
            k * k
        };
        let xp_to_si = units::length_to_m(1.0) * units::momentum_to_si(1.0);
        let first = cov.first_moments();
        Self {
            t_s: cov.time_s(),
            sigma00_m2: cov.element(0, 0) * var_to_si,
            sigma02_m2: cov.element(0, 2) * var_to_si,
            sigma11_si: cov.element(1, 1) * p2_to_si,
            sigma13_si: cov.element(1, 3) * p2_to_si,
            sigma01_js: cov.element(0, 1) * xp_to_si,
            sigma03_js: cov.element(0, 3) * xp_to_si,
            mean_r_m: units::length_to_m(first[2] - first[0]),
            mean_p_si: units::momentum_to_si(0.5 * (first[3] - first[1])),
        }
    }
}

/// Covariance time series.
#[derive(Debug, Clone, Default)]
pub struct MomentTrace {
    pub rows: Vec<MomentRow>,
}

impl MomentTrace {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(
            w,
            "t_s,sigma00_m2,sigma02_m2,sigma11_kg2m2ps2,sigma13_kg2m2ps2,sigma01_Js,sigma03_Js,mean_r_m,mean_p_kgmps"
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                r.t_s,
                r.sigma00_m2,
                r.sigma02_m2,
                r.sigma11_si,
                r.sigma13_si,
                r.sigma01_js,
                r.sigma03_js,
                r.mean_r_m,
                r.mean_p_si
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, Separation};
    use crate::gaussian::{covariance_lab, reduced_moments_quadratic};

    #[test]
    fn trace_csv_layout_and_determinism() {
        let trace = EntanglementTrace {
            rows: vec![
                TraceRow {
                    t_s: 0.0,
                    log_negativity: 0.0,
                    entropy: 0.0,
                    skewness: 0.0,
                    lambdas: vec![1.0],
                },
                TraceRow {
                    t_s: 0.5,
                    log_negativity: 1.25e-4,
                    entropy: 3.5e-7,
                    skewness: -2e-9,
                    lambdas: vec![0.9999, 1e-4],
                },
            ],
            lambda_count: 2,
        };
        let mut a = Vec::new();
        trace.write_csv(&mut a).unwrap();
        let text = String::from_utf8(a.clone()).unwrap();
        assert!(text.starts_with("t_s,log_negativity,entropy,skewness,lambda_1,lambda_2\n"));
        assert_eq!(text.lines().count(), 3);
        // Missing λ entries are padded with zeros.
        assert!(text.lines().nth(1).unwrap().ends_with(",0.00000000000000000e0"));
        let mut b = Vec::new();
        trace.write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn moment_row_converts_to_si() {
        let cfg = ExperimentConfig::new(1e-16, Separation::Absolute(8e-9), 3e-10, 0.0, 1.0, 2)
            .unwrap()
            .with_p0_multiple(1.5);
        let t = 0.4;
        let cov = covariance_lab(&cfg, t);
        let row = MomentRow::from_covariance(&cov);
        // σ00 at t = 0.4 should be close to σ² in m² (weak coupling).
        assert!(row.sigma00_m2 > 0.0 && row.sigma00_m2 < 1e-17);
        let rel = reduced_moments_quadratic(&cfg, t);
        let expect_r = units::length_to_m(rel.mean_x);
        assert!((row.mean_r_m - expect_r).abs() <= 1e-12 * expect_r.abs());
        let expect_p = units::momentum_to_si(rel.mean_p);
        assert!((row.mean_p_si - expect_p).abs() <= 1e-12 * expect_p.abs());
        let mut out = Vec::new();
        MomentTrace { rows: vec![row] }.write_csv(&mut out).unwrap();
        assert_eq!(out.iter().filter(|&&c| c == b'\n').count(), 2);
    }
}
