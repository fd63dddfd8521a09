//! Entanglement quantifiers from two-mode covariance matrices:
//! logarithmic negativity, Gaussian entanglement entropy, and the
//! weak-coupling closed-form approximation used as a cross-check.

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::gaussian::CovarianceState;
use crate::units::HBAR_C;

/// Relative tolerance for uncertainty-principle violations before a
/// covariance matrix is rejected as non-physical. Quadrature covariances
/// of pure states sit exactly on the bound, so this must exceed their
/// finite-difference noise.
pub const PHYSICALITY_REL_TOL: f64 = 1e-6;

/// Exchange-asymmetry level below which the factored (cancellation-safe)
/// spectrum on the symmetrized matrix is used.
const SYMMETRY_SWITCH: f64 = 1e-9;

/// Symplectic spectrum of the partially transposed covariance matrix.
#[derive(Debug, Clone, Copy)]
pub struct SymplecticSpectrum {
    /// Smaller PT symplectic eigenvalue ν̃₋ (units of ℏc)
    pub nu_minus: f64,
    /// Larger PT symplectic eigenvalue ν̃₊
    pub nu_plus: f64,
    /// Σ̃(σ) = Det α + Det β − 2 Det γ
    pub sigma_tilde: f64,
    /// Det σ
    pub det_sigma: f64,
}

fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    // Cofactor expansion over 2x2 minors of the first two rows.
    let minor = |c0: usize, c1: usize| m[0][c0] * m[1][c1] - m[0][c1] * m[1][c0];
    let cominor = |c0: usize, c1: usize| m[2][c0] * m[3][c1] - m[2][c1] * m[3][c0];
    minor(0, 1) * cominor(2, 3) - minor(0, 2) * cominor(1, 3) + minor(0, 3) * cominor(1, 2)
        + minor(1, 2) * cominor(0, 3)
        - minor(1, 3) * cominor(0, 2)
        + minor(2, 3) * cominor(0, 1)
}

struct SpectrumParts {
    nu_minus_sq: f64,
    nu_plus_sq: f64,
    sigma_tilde: f64,
    det_sigma: f64,
    /// Plain (non-transposed) minimum symplectic eigenvalue squared, for
    /// the uncertainty check.
    nu_minus_plain_sq: f64,
}

/// Spectrum of an exchange-symmetric state via the factored discriminant.
///
/// With a = Det α, g = Det γ and c = tr(α·adj γ), the PT discriminant
/// Σ̃² − 4 Det σ equals 4(c² − 4ag) exactly, which avoids subtracting two
/// near-equal (ℏ/2)⁴-scale quantities in the weak-coupling regime where
/// E ~ 10⁻⁴ lives. Purity of the COM and relative subsystems makes c
/// vanish identically for the states this toolkit produces.
fn spectrum_symmetric(cov: &CovarianceState) -> Result<SpectrumParts> {
    let alpha = cov.alpha();
    let gamma = cov.gamma();
    let a = det2(&alpha);
    let g = det2(&gamma);
    let c = alpha[0][0] * gamma[1][1] + alpha[1][1] * gamma[0][0]
        - alpha[0][1] * (gamma[0][1] + gamma[1][0]);

    let det_sigma = (a + g + c) * (a + g - c);
    let sigma_tilde = 2.0 * (a - g);
    let scale = (a.abs() + g.abs() + c.abs()).powi(2).max(f64::MIN_POSITIVE);
    let mut disc = c * c - 4.0 * a * g;
    if disc < 0.0 {
        if disc < -1e-12 * scale {
            return Err(Error::NonPhysicalCovariance(format!(
                "negative PT discriminant: {disc:e} at scale {scale:e}"
            )));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let nu_plus_sq = (a - g) + root;
    if !(nu_plus_sq > 0.0) {
        return Err(Error::NonPhysicalCovariance("non-positive PT spectrum".into()));
    }
    let nu_minus_sq = det_sigma / nu_plus_sq;
    // Plain spectrum: ν±² = (a + g) ± |c|.
    let nu_minus_plain_sq = (a + g) - c.abs();
    Ok(SpectrumParts { nu_minus_sq, nu_plus_sq, sigma_tilde, det_sigma, nu_minus_plain_sq })
}

/// Spectrum of a general two-mode covariance matrix (direct discriminant).
fn spectrum_general(cov: &CovarianceState) -> Result<SpectrumParts> {
    let a = det2(&cov.alpha());
    let b = det2(&cov.beta());
    let g = det2(&cov.gamma());
    let det_sigma = det4(cov.matrix());
    let sigma_tilde = a + b - 2.0 * g;
    let scale = sigma_tilde * sigma_tilde + 4.0 * det_sigma.abs();
    let mut disc = sigma_tilde * sigma_tilde - 4.0 * det_sigma;
    if disc < 0.0 {
        if disc < -1e-12 * scale {
            return Err(Error::NonPhysicalCovariance(format!(
                "negative PT discriminant: {disc:e} at scale {scale:e}"
            )));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let nu_plus_sq = 0.5 * (sigma_tilde + root);
    if !(nu_plus_sq > 0.0) {
        return Err(Error::NonPhysicalCovariance("non-positive PT spectrum".into()));
    }
    let nu_minus_sq = det_sigma / nu_plus_sq;

    let sigma_plain = a + b + 2.0 * g;
    let disc_plain = (sigma_plain * sigma_plain - 4.0 * det_sigma).max(0.0);
    let nu_minus_plain_sq = 0.5 * (sigma_plain - disc_plain.sqrt());
    Ok(SpectrumParts { nu_minus_sq, nu_plus_sq, sigma_tilde, det_sigma, nu_minus_plain_sq })
}

fn spectrum_parts(cov: &CovarianceState) -> Result<SpectrumParts> {
    // Basic positivity first: diagonal entries are variances.
    for j in 0..4 {
        if !(cov.element(j, j) > 0.0) {
            return Err(Error::NonPhysicalCovariance(format!(
                "non-positive variance at index {j}: {:e}",
                cov.element(j, j)
            )));
        }
    }
    let parts = if cov.exchange_asymmetry() < SYMMETRY_SWITCH {
        spectrum_symmetric(&cov.symmetrized())?
    } else {
        spectrum_general(cov)?
    };
    // Uncertainty relation: the plain minimum symplectic eigenvalue must
    // not drop below ℏ/2 beyond tolerance.
    let q2 = 0.25 * HBAR_C * HBAR_C;
    if parts.nu_minus_plain_sq < q2 * (1.0 - 2.0 * PHYSICALITY_REL_TOL) {
        return Err(Error::NonPhysicalCovariance(format!(
            "uncertainty violation: nu_min^2 / (hbar/2)^2 = {:.12}",
            parts.nu_minus_plain_sq / q2
        )));
    }
    Ok(parts)
}

impl SymplecticSpectrum {
    /// PT symplectic spectrum of a covariance state, with physicality
    /// checks. Errors instead of silently returning zero entanglement.
    pub fn from_covariance(cov: &CovarianceState) -> Result<Self> {
        let p = spectrum_parts(cov)?;
        Ok(Self {
            nu_minus: p.nu_minus_sq.max(0.0).sqrt(),
            nu_plus: p.nu_plus_sq.sqrt(),
            sigma_tilde: p.sigma_tilde,
            det_sigma: p.det_sigma,
        })
    }
}

/// Logarithmic negativity E = max[0, −log₂(ν̃₋ / (ℏ/2))].
///
/// For covariance matrices of non-Gaussian pure states this is the
/// Gaussian-extracted negativity computed from the exact second moments,
/// not the exact negativity of the state.
pub fn log_negativity(cov: &CovarianceState) -> Result<f64> {
    let p = spectrum_parts(cov)?;
    let q2 = 0.25 * HBAR_C * HBAR_C;
    // δ = ν̃₋²/(ℏ/2)² − 1, assembled to keep the ~1e-4 signal well above
    // rounding: ν̃₋² = Det σ / ν̃₊².
    let delta = (p.det_sigma - q2 * p.nu_plus_sq) / (q2 * p.nu_plus_sq);
    let e = -0.5 * delta.ln_1p() / std::f64::consts::LN_2;
    Ok(e.max(0.0))
}

/// Gaussian entropy function
/// f(x) = (x + ½)log₂(x + ½) − (x − ½)log₂(x − ½), with f(½) = 0 by
/// continuity.
pub fn entropy_f(x: f64) -> f64 {
    entropy_f_from_delta(x - 0.5)
}

/// f(½ + δ) for δ ≥ 0; the precision-carrying form.
fn entropy_f_from_delta(delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let ln2 = std::f64::consts::LN_2;
    (1.0 + delta) * delta.ln_1p() / ln2 - delta * delta.log2()
}

/// Entanglement entropy of a pure two-mode Gaussian state from the local
/// block: S = f(√Det α / ℏ).
pub fn gaussian_entropy(cov: &CovarianceState) -> Result<f64> {
    let p = spectrum_parts(cov)?;
    let q2 = 0.25 * HBAR_C * HBAR_C;
    // Global purity gate: Det σ = (ℏ/2)⁴ for the pure states in scope.
    let purity = p.det_sigma / (q2 * q2);
    if (purity - 1.0).abs() > 1e-4 {
        return Err(Error::NonPhysicalCovariance(format!(
            "gaussian_entropy needs a pure state: Det(sigma)/(hbar/2)^4 = {purity:.8}"
        )));
    }
    let a = det2(&cov.alpha());
    // u = Det α/ℏ² − ¼ ≥ 0; δ = x − ½ computed from u to avoid the
    // x ≈ ½ cancellation (S ~ 1e-7 states).
    let u = a / (HBAR_C * HBAR_C) - 0.25;
    if u < -PHYSICALITY_REL_TOL {
        return Err(Error::NonPhysicalCovariance(format!(
            "local mode below vacuum: Det(alpha)/hbar^2 - 1/4 = {u:e}"
        )));
    }
    let u = u.max(0.0);
    let x = (0.25 + u).sqrt();
    Ok(entropy_f_from_delta(u / (x + 0.5)))
}

/// Weak-coupling approximation to the logarithmic negativity, valid for
/// ω ≪ ω₀ and ωt ≪ 1:
/// E ≈ −log₂ √(1 + 2Ω⁶t⁶ − 2Ω³t³√(1 + Ω⁶t⁶)) = asinh(Ω³t³)/ln 2
/// with Ω³ = ω₀ω²/6. Callers are responsible for checking the regime.
pub fn approx_log_negativity(cfg: &ExperimentConfig, t_s: f64) -> f64 {
    let omega_cubed = cfg.omega0() * cfg.omega() * cfg.omega() / 6.0;
    let y = omega_cubed * t_s * t_s * t_s;
    y.asinh() / std::f64::consts::LN_2
}
