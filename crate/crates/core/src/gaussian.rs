//! Exact analytic evolution of first and second moments for the
//! center-of-mass (free particle) and the reduced mass (quadratic
//! potential), assembled into the LAB-frame covariance matrix.
//!
//! All quantities are in natural units (pm, keV, natural time ct in pm)
//! with ℏ = ℏc; public entry points take times in seconds and convert.

use num_complex::Complex64 as C64;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::units::{self, HBAR_C};

/// sinh(x) - x, evaluated without cancellation for small |x|.
///
/// The covariance elements σ₀₂ and σ₀₃ contain differences like
/// ω₀²t² - (ω₀²/ω²)sinh²(ωt) whose leading parts cancel exactly in the
/// ω → 0 limit; they are rewritten in terms of this residual.
pub(crate) fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() >= 0.5 {
        return x.sinh() - x;
    }
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = term;
    let mut k = 1usize;
    while term.abs() > f64::EPSILON * sum.abs() && k < 30 {
        k += 1;
        term *= x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
        sum += term;
    }
    sum
}

/// sinh²(x) - x² = (sinh x - x)(sinh x + x), cancellation-free.
pub(crate) fn sinh_sq_minus_x_sq(x: f64) -> f64 {
    sinh_minus_x(x) * (x.sinh() + x)
}

/// First and second moments of a single 1-D mode in natural units.
///
/// `cov_xp` is the symmetrized covariance ½⟨{x,p}⟩ − ⟨x⟩⟨p⟩ in units of
/// ℏc (pm·keV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    /// ⟨x⟩ (pm)
    pub mean_x: f64,
    /// ⟨p⟩ (keV)
    pub mean_p: f64,
    /// Δx² (pm²)
    pub var_x: f64,
    /// Δp² (keV²)
    pub var_p: f64,
    /// ½⟨{x,p}⟩ − ⟨x⟩⟨p⟩ (pm·keV)
    pub cov_xp: f64,
}

impl MomentSet {
    /// Raw second moment ⟨x²⟩.
    pub fn raw_x2(&self) -> f64 {
        self.var_x + self.mean_x * self.mean_x
    }

    /// Raw second moment ⟨p²⟩ (contains p₀² for the reduced mass).
    pub fn raw_p2(&self) -> f64 {
        self.var_p + self.mean_p * self.mean_p
    }

    /// Raw symmetrized moment ⟨{x,p}⟩.
    pub fn raw_xp_sym(&self) -> f64 {
        2.0 * (self.cov_xp + self.mean_x * self.mean_p)
    }

    /// Δx²Δp² − Cov² − (ℏ/2)², zero for pure Gaussian evolution.
    pub fn heisenberg_excess(&self) -> f64 {
        self.var_x * self.var_p - self.cov_xp * self.cov_xp - 0.25 * HBAR_C * HBAR_C
    }
}

/// COM moments: free expansion of a Gaussian of width σ/√2.
///
/// ΔR² = ½σ²(1 + ω₀²t²), ΔP² = ℏ²/2σ², Cov(R,P) = ½ℏω₀t; means stay zero
/// for equal and opposite initial momenta.
pub fn com_moments(cfg: &ExperimentConfig, t_s: f64) -> MomentSet {
    drifting_com_moments(cfg, 0.0, t_s)
}

/// COM moments for a uniformly drifting center of mass with total momentum
/// `p_total_si` (kg·m/s). Centered moments are identical to the stationary
/// case; only the means move: ⟨R⟩ = P t / 2m, ⟨P⟩ = P.
pub fn drifting_com_moments(cfg: &ExperimentConfig, p_total_si: f64, t_s: f64) -> MomentSet {
    let n = cfg.natural();
    let t = units::time_to_pm(t_s);
    let u = n.omega0_nat * t;
    let s2 = n.sigma_pm * n.sigma_pm;
    let p_total = units::momentum_to_kev(p_total_si);
    MomentSet {
        mean_x: p_total * t / (2.0 * n.m_kev),
        mean_p: p_total,
        var_x: 0.5 * s2 * (1.0 + u * u),
        var_p: 0.5 * HBAR_C * HBAR_C / s2,
        cov_xp: 0.5 * HBAR_C * u,
    }
}

/// Reduced-mass moments under the quadratic (N = 2) truncation of the
/// central potential; exact hyperbolic closed forms, used regardless of
/// the configured expansion order.
pub fn reduced_moments_quadratic(cfg: &ExperimentConfig, t_s: f64) -> MomentSet {
    let n = cfg.natural();
    let x = n.omega_nat * units::time_to_pm(t_s);
    let (sh, ch) = (x.sinh(), x.cosh());
    let beta = n.omega0_nat / n.omega_nat;
    let s2 = n.sigma_pm * n.sigma_pm;
    MomentSet {
        mean_x: 0.5 * n.l_pm * (1.0 - ch) - 2.0 * n.p0_kev / (n.m_kev * n.omega_nat) * sh,
        mean_p: -n.p0_kev * ch - 0.25 * n.m_kev * n.omega_nat * n.l_pm * sh,
        var_x: 2.0 * s2 * (ch * ch + beta * beta * sh * sh),
        var_p: HBAR_C * HBAR_C / (8.0 * s2) * (ch * ch + sh * sh / (beta * beta)),
        cov_xp: 0.25 * HBAR_C * (beta + 1.0 / beta) * (2.0 * x).sinh(),
    }
}

/// Two-mode covariance matrix over (x_A, p_A, x_B, p_B) plus first
/// moments, in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    elements: [[f64; 4]; 4],
    first_moments: [f64; 4],
    time_s: f64,
}

impl CovarianceState {
    /// Build from the six independent elements of the exchange-symmetric
    /// problem: σ₂₂ = σ₀₀, σ₃₃ = σ₁₁, σ₂₃ = σ₀₁, σ₁₂ = σ₀₃.
    pub fn from_symmetric_elements(
        s00: f64,
        s01: f64,
        s02: f64,
        s03: f64,
        s11: f64,
        s13: f64,
        first_moments: [f64; 4],
        time_s: f64,
    ) -> Self {
        let elements = [
            [s00, s01, s02, s03],
            [s01, s11, s03, s13],
            [s02, s03, s00, s01],
            [s03, s13, s01, s11],
        ];
        Self { elements, first_moments, time_s }
    }

    pub fn from_matrix(elements: [[f64; 4]; 4], first_moments: [f64; 4], time_s: f64) -> Self {
        Self { elements, first_moments, time_s }
    }

    pub fn element(&self, j: usize, k: usize) -> f64 {
        self.elements[j][k]
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.elements
    }

    pub fn first_moments(&self) -> [f64; 4] {
        self.first_moments
    }

    pub fn time_s(&self) -> f64 {
        self.time_s
    }

    /// Local block α for mode A.
    pub fn alpha(&self) -> [[f64; 2]; 2] {
        [[self.elements[0][0], self.elements[0][1]], [self.elements[1][0], self.elements[1][1]]]
    }

    /// Local block β for mode B.
    pub fn beta(&self) -> [[f64; 2]; 2] {
        [[self.elements[2][2], self.elements[2][3]], [self.elements[3][2], self.elements[3][3]]]
    }

    /// Intermodal block γ (rows A, columns B).
    pub fn gamma(&self) -> [[f64; 2]; 2] {
        [[self.elements[0][2], self.elements[0][3]], [self.elements[1][2], self.elements[1][3]]]
    }

    /// Largest relative deviation from the exchange-symmetry equalities.
    pub fn exchange_asymmetry(&self) -> f64 {
        let e = &self.elements;
        let scale = e[0][0].abs().max(e[1][1].abs()).max(HBAR_C);
        let pairs = [
            (e[2][2], e[0][0]),
            (e[3][3], e[1][1]),
            (e[2][3], e[0][1]),
            (e[1][2], e[0][3]),
        ];
        let mut worst: f64 = 0.0;
        for (a, b) in pairs {
            let denom = a.abs().max(b.abs()).max(1e-30 * scale);
            worst = worst.max((a - b).abs() / denom);
        }
        worst
    }

    /// Projection onto the exchange-symmetric manifold (averages the
    /// paired elements). Used by the entanglement measures to apply the
    /// cancellation-safe factored spectrum on quadrature covariances.
    pub fn symmetrized(&self) -> Self {
        let e = &self.elements;
        let s00 = 0.5 * (e[0][0] + e[2][2]);
        let s11 = 0.5 * (e[1][1] + e[3][3]);
        let s01 = 0.5 * (e[0][1] + e[2][3]);
        let s02 = e[0][2];
        let s03 = 0.5 * (e[0][3] + e[1][2]);
        let s13 = e[1][3];
        Self::from_symmetric_elements(s00, s01, s02, s03, s11, s13, self.first_moments, self.time_s)
    }
}

/// LAB-frame covariance at time `t_s` for the quadratic truncation,
/// assembled directly from the exact closed forms. The matrix is
/// independent of p₀ by construction; the first moments are not.
pub fn covariance_lab(cfg: &ExperimentConfig, t_s: f64) -> CovarianceState {
    let n = cfg.natural();
    let t = units::time_to_pm(t_s);
    let x = n.omega_nat * t;
    let u = n.omega0_nat * t;
    let sh = x.sinh();
    let sh2 = (2.0 * x).sinh();
    let beta = n.omega0_nat / n.omega_nat;
    let s2 = n.sigma_pm * n.sigma_pm;

    let s00 = 0.5 * s2 * (2.0 + u * u + (1.0 + beta * beta) * sh * sh);
    // u² - (1+β²)sh² = -(sh² + β²(sh² - x²)); the residual sh² - x² is
    // evaluated cancellation-free.
    let s02 = -0.5 * s2 * (sh * sh + beta * beta * sinh_sq_minus_x_sq(x));
    let s11 = HBAR_C * HBAR_C / (8.0 * s2) * (2.0 + (1.0 + 1.0 / (beta * beta)) * sh * sh);
    let s13 = -HBAR_C * HBAR_C / (8.0 * s2) * (1.0 + 1.0 / (beta * beta)) * sh * sh;
    let s01 = 0.125 * HBAR_C * (2.0 * u + (beta + 1.0 / beta) * sh2);
    // 2u - (β + 1/β)sh2 = -(β(sh2 - 2x) + sh2/β)
    let s03 = -0.125 * HBAR_C * (beta * sinh_minus_x(2.0 * x) + sh2 / beta);

    let rel = reduced_moments_quadratic(cfg, t_s);
    let first = [
        -0.5 * rel.mean_x,
        -rel.mean_p,
        0.5 * rel.mean_x,
        rel.mean_p,
    ];
    CovarianceState::from_symmetric_elements(s00, s01, s02, s03, s11, s13, first, t_s)
}

/// Product-state assembly of the LAB covariance from COM and relative
/// moments of a product state Ψ = φ(R)ψ(r); exact for any expansion order
/// because R and r are uncorrelated. This is also the route the numeric
/// pipeline takes: numeric ψ moments plus analytic COM moments.
pub fn covariance_from_moments(com: &MomentSet, rel: &MomentSet, time_s: f64) -> CovarianceState {
    let s00 = com.var_x + 0.25 * rel.var_x;
    let s02 = com.var_x - 0.25 * rel.var_x;
    let s11 = 0.25 * com.var_p + rel.var_p;
    let s13 = 0.25 * com.var_p - rel.var_p;
    let s01 = 0.5 * com.cov_xp + 0.5 * rel.cov_xp;
    let s03 = 0.5 * com.cov_xp - 0.5 * rel.cov_xp;
    let first = [
        com.mean_x - 0.5 * rel.mean_x,
        0.5 * com.mean_p - rel.mean_p,
        com.mean_x + 0.5 * rel.mean_x,
        0.5 * com.mean_p + rel.mean_p,
    ];
    CovarianceState::from_symmetric_elements(s00, s01, s02, s03, s11, s13, first, time_s)
}

/// Closed-form COM wave packet (free Gaussian, optionally drifting with
/// total momentum P): the analytic factor of the two-body wave function.
#[derive(Debug, Clone, Copy)]
pub struct ComWavepacket {
    /// Single-particle spread σ (pm); the COM density has width σ/√2.
    pub sigma_pm: f64,
    /// ω₀ (pm⁻¹)
    pub omega0_nat: f64,
    /// Total momentum P (keV)
    pub p_total_kev: f64,
    /// Total mass 2m (keV)
    pub total_mass_kev: f64,
}

impl ComWavepacket {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        let n = cfg.natural();
        Self {
            sigma_pm: n.sigma_pm,
            omega0_nat: n.omega0_nat,
            p_total_kev: 0.0,
            total_mass_kev: 2.0 * n.m_kev,
        }
    }

    pub fn with_total_momentum(mut self, p_total_kev: f64) -> Self {
        self.p_total_kev = p_total_kev;
        self
    }

    /// φ(R, t) in natural units (amplitude in pm^(-1/2), t in pm).
    pub fn eval(&self, r_pm: f64, t_pm: f64) -> C64 {
        let tau = C64::new(1.0, self.omega0_nat * t_pm);
        let s2 = self.sigma_pm * self.sigma_pm;
        let norm = (C64::new(self.sigma_pm * std::f64::consts::PI.sqrt(), 0.0) * tau)
            .sqrt()
            .inv();
        let v = self.p_total_kev / self.total_mass_kev;
        let rr = r_pm - v * t_pm;
        let envelope = (-rr * rr / (2.0 * s2 * tau)).exp();
        let boost_phase = C64::new(
            0.0,
            (self.p_total_kev * rr + 0.5 * self.p_total_kev * v * t_pm) / HBAR_C,
        )
        .exp();
        norm * envelope * boost_phase
    }
}

/// Creates a validation error if the moment set violates positivity or
/// the Heisenberg bound beyond `rel_tol`.
pub fn check_moments_physical(m: &MomentSet, rel_tol: f64) -> Result<()> {
    if !(m.var_x > 0.0) || !(m.var_p > 0.0) {
        return Err(Error::NonPhysicalCovariance(format!(
            "non-positive variances: var_x = {:e}, var_p = {:e}",
            m.var_x, m.var_p
        )));
    }
    let floor = 0.25 * HBAR_C * HBAR_C;
    if m.heisenberg_excess() < -rel_tol * floor {
        return Err(Error::NonPhysicalCovariance(format!(
            "Heisenberg violation: excess = {:e} (hbar/2)^2",
            m.heisenberg_excess() / floor
        )));
    }
    Ok(())
}
