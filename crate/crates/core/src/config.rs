//! Validated experiment configurations.
//!
//! A configuration describes two identical spheres of mass `m`, centers a
//! distance `L` apart, each released from the ground state of a harmonic
//! trap with position spread σ and pushed with equal and opposite momentum
//! p₀ along the line joining the centers (p₀ > 0 = toward each other).

use crate::error::{Error, Result};
use crate::units;

/// Radius of a homogeneous sphere of mass `m_kg` and density `rho_si`
/// (kg/m³): (3m / 4πρ)^(1/3).
pub fn radius_from_mass(m_kg: f64, rho_si: f64) -> Result<f64> {
    if !(m_kg > 0.0) || !(rho_si > 0.0) {
        return Err(Error::Domain(format!(
            "radius_from_mass needs m > 0 and rho > 0, got m = {m_kg:e}, rho = {rho_si:e}"
        )));
    }
    Ok((3.0 * m_kg / (4.0 * std::f64::consts::PI * rho_si)).cbrt())
}

/// How the center separation is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    /// Center-to-center distance in meters.
    Absolute(f64),
    /// Multiple of the sphere radius derived from mass and density.
    RadiusMultiple { multiple: f64, rho_si: f64 },
}

/// Immutable, validated experiment configuration. Everything derived
/// (radius, ω, ω₀) is computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    mass_kg: f64,
    separation_m: f64,
    sigma_m: f64,
    p0_si: f64,
    t_max_s: f64,
    order: u32,
    material_radius_m: Option<f64>,
    omega_si: f64,
    omega0_si: f64,
}

impl ExperimentConfig {
    pub fn new(
        mass_kg: f64,
        separation: Separation,
        sigma_m: f64,
        p0_si: f64,
        t_max_s: f64,
        order: u32,
    ) -> Result<Self> {
        if !(mass_kg > 0.0) {
            return Err(Error::InvalidConfig(format!("mass must be > 0, got {mass_kg:e}")));
        }
        if !(sigma_m > 0.0) {
            return Err(Error::InvalidConfig(format!("sigma must be > 0, got {sigma_m:e}")));
        }
        if !(t_max_s >= 0.0) {
            return Err(Error::InvalidConfig(format!("t_max must be >= 0, got {t_max_s:e}")));
        }
        if order < 1 {
            return Err(Error::InvalidConfig("expansion order N must be >= 1".into()));
        }
        if !p0_si.is_finite() {
            return Err(Error::InvalidConfig(format!("p0 must be finite, got {p0_si:e}")));
        }

        let (separation_m, material_radius_m) = match separation {
            Separation::Absolute(l) => (l, None),
            Separation::RadiusMultiple { multiple, rho_si } => {
                let r = radius_from_mass(mass_kg, rho_si)?;
                (multiple * r, Some(r))
            }
        };
        if !(separation_m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "separation must be > 0, got {separation_m:e}"
            )));
        }
        if let Some(r) = material_radius_m {
            if separation_m <= 2.0 * r {
                return Err(Error::InvalidConfig(format!(
                    "spheres overlap: L = {separation_m:e} m <= 2 r = {:e} m",
                    2.0 * r
                )));
            }
        }

        let omega_si = (4.0 * units::G_SI * mass_kg / separation_m.powi(3)).sqrt();
        let omega0_si = units::HBAR_SI / (2.0 * mass_kg * sigma_m * sigma_m);
        debug_assert!(omega_si > 0.0 && omega0_si > 0.0);

        Ok(Self {
            mass_kg,
            separation_m,
            sigma_m,
            p0_si,
            t_max_s,
            order,
            material_radius_m,
            omega_si,
            omega0_si,
        })
    }

    /// Same configuration with p₀ given as a multiple of the figure-legend
    /// rate unit: p₀ = multiple · 6.18082292e-3 s⁻¹ · m · L.
    pub fn with_p0_multiple(mut self, multiple: f64) -> Self {
        self.p0_si = multiple * units::P0_RATE_UNIT * self.mass_kg * self.separation_m;
        self
    }

    pub fn with_p0_absolute(mut self, p0_si: f64) -> Self {
        self.p0_si = p0_si;
        self
    }

    pub fn with_order(mut self, order: u32) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidConfig("expansion order N must be >= 1".into()));
        }
        self.order = order;
        Ok(self)
    }

    pub fn with_t_max(mut self, t_max_s: f64) -> Result<Self> {
        if !(t_max_s >= 0.0) {
            return Err(Error::InvalidConfig(format!("t_max must be >= 0, got {t_max_s:e}")));
        }
        self.t_max_s = t_max_s;
        Ok(self)
    }

    pub fn mass_kg(&self) -> f64 {
        self.mass_kg
    }

    pub fn separation_m(&self) -> f64 {
        self.separation_m
    }

    pub fn sigma_m(&self) -> f64 {
        self.sigma_m
    }

    pub fn p0_si(&self) -> f64 {
        self.p0_si
    }

    /// p₀/mL expressed in multiples of the figure-legend rate unit.
    pub fn p0_multiple(&self) -> f64 {
        self.p0_si / (self.mass_kg * self.separation_m * units::P0_RATE_UNIT)
    }

    pub fn t_max_s(&self) -> f64 {
        self.t_max_s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn material_radius_m(&self) -> Option<f64> {
        self.material_radius_m
    }

    /// ω = √(4Gm/L³) (s⁻¹), cached at construction.
    pub fn omega(&self) -> f64 {
        self.omega_si
    }

    /// ω₀ = ℏ/2mσ², the trap frequency whose ground state has spread σ
    /// (s⁻¹), cached at construction.
    pub fn omega0(&self) -> f64 {
        self.omega0_si
    }

    /// Natural-unit view used by the physics modules.
    pub fn natural(&self) -> NaturalParams {
        NaturalParams {
            m_kev: units::mass_to_kev(self.mass_kg),
            l_pm: units::length_to_pm(self.separation_m),
            sigma_pm: units::length_to_pm(self.sigma_m),
            p0_kev: units::momentum_to_kev(self.p0_si),
            t_max_pm: units::time_to_pm(self.t_max_s),
            omega_nat: units::frequency_to_inv_pm(self.omega_si),
            omega0_nat: units::frequency_to_inv_pm(self.omega0_si),
            order: self.order,
        }
    }
}

/// (ω, ω₀) in s⁻¹ for a configuration.
pub fn characteristic_frequencies(cfg: &ExperimentConfig) -> (f64, f64) {
    (cfg.omega(), cfg.omega0())
}

/// Configuration scalars in natural units (pm / keV / natural time in pm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalParams {
    /// Rest energy mc² (keV)
    pub m_kev: f64,
    /// Center separation L (pm)
    pub l_pm: f64,
    /// Single-particle spread σ (pm)
    pub sigma_pm: f64,
    /// Initial momentum magnitude p₀c (keV); sign: + = toward each other
    pub p0_kev: f64,
    /// Evolution horizon ct_max (pm)
    pub t_max_pm: f64,
    /// ω (pm⁻¹)
    pub omega_nat: f64,
    /// ω₀ (pm⁻¹)
    pub omega0_nat: f64,
    /// Expansion order N
    pub order: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn radius_unit_sphere() {
        // m = 4π/3 g at 1 g/cm³ is a sphere of radius 1 cm.
        let m = 4.0 * std::f64::consts::PI / 3.0 * 1e-3;
        let r = radius_from_mass(m, 1000.0).unwrap();
        assert!(rel(r, 0.01) < 1e-14);
    }

    #[test]
    fn radius_quarter_picogram_osmium_regression() {
        // Frozen from an independent evaluation of (3m/4πρ)^(1/3).
        let r = radius_from_mass(0.25e-15, units::RHO_OSMIUM_SI).unwrap();
        assert!(rel(r, 1.382493189900212e-7) < 1e-12);
    }

    #[test]
    fn radius_hundred_microgram_osmium() {
        // 100 µg osmium sphere has radius ~0.1 mm.
        let r = radius_from_mass(100.0e-9, units::RHO_OSMIUM_SI).unwrap();
        assert!(rel(r, 1.0e-4) < 0.05);
    }

    #[test]
    fn radius_rejects_non_positive() {
        assert!(radius_from_mass(0.0, 1.0).is_err());
        assert!(radius_from_mass(1.0, -2.0).is_err());
    }

    fn reference_config() -> ExperimentConfig {
        ExperimentConfig::new(
            0.25e-15,
            Separation::RadiusMultiple { multiple: 2.5, rho_si: units::RHO_OSMIUM_SI },
            2.5e-9,
            0.0,
            5.0,
            2,
        )
        .unwrap()
    }

    #[test]
    fn omega_scales_as_l_to_minus_three_halves() {
        let base = ExperimentConfig::new(1e-16, Separation::Absolute(1e-8), 1e-10, 0.0, 1.0, 2)
            .unwrap();
        let doubled = ExperimentConfig::new(1e-16, Separation::Absolute(2e-8), 1e-10, 0.0, 1.0, 2)
            .unwrap();
        assert!(rel(doubled.omega() / base.omega(), 2.0_f64.powf(-1.5)) < 1e-12);
    }

    #[test]
    fn reference_frequency_ratio_near_25() {
        let cfg = reference_config();
        let (omega, omega0) = characteristic_frequencies(&cfg);
        let ratio = omega0 / omega;
        assert!((ratio - 25.0).abs() / 25.0 < 0.10, "omega0/omega = {ratio}");
    }

    #[test]
    fn omega_one_picogram_regression() {
        // Frozen from an independent evaluation of sqrt(4Gm/L^3) with
        // m = 1 pg osmium and L = 2.1 radii.
        let cfg = ExperimentConfig::new(
            1e-15,
            Separation::RadiusMultiple { multiple: 2.1, rho_si: units::RHO_OSMIUM_SI },
            5e-9,
            0.0,
            5.0,
            2,
        )
        .unwrap();
        assert!(rel(cfg.omega(), 1.6515031969508293e-3) < 1e-12);
    }

    #[test]
    fn frequencies_invariant_under_unit_system() {
        let cfg = reference_config();
        let nat = cfg.natural();
        // Natural-unit route: omega_nat^2 = 4 G_nat m_kev / L^3.
        let omega_nat = (4.0 * units::G_NAT * nat.m_kev / nat.l_pm.powi(3)).sqrt();
        assert!(rel(units::frequency_to_si(omega_nat), cfg.omega()) < 1e-10);
        let omega0_nat = units::HBAR_C / (2.0 * nat.m_kev * nat.sigma_pm * nat.sigma_pm);
        assert!(rel(units::frequency_to_si(omega0_nat), cfg.omega0()) < 1e-10);
        // The cached natural view agrees too.
        assert!(rel(nat.omega_nat, omega_nat) < 1e-12);
        assert!(rel(nat.omega0_nat, omega0_nat) < 1e-12);
    }

    #[test]
    fn rejects_invalid_configs() {
        let sep = Separation::Absolute(1e-8);
        assert!(ExperimentConfig::new(-1.0, sep, 1e-10, 0.0, 1.0, 2).is_err());
        assert!(ExperimentConfig::new(1e-16, sep, 0.0, 0.0, 1.0, 2).is_err());
        assert!(ExperimentConfig::new(1e-16, sep, 1e-10, 0.0, -1.0, 2).is_err());
        assert!(ExperimentConfig::new(1e-16, sep, 1e-10, 0.0, 1.0, 0).is_err());
        assert!(ExperimentConfig::new(1e-16, Separation::Absolute(-1e-8), 1e-10, 0.0, 1.0, 2)
            .is_err());
        // Overlapping spheres: L = 1.5 radii.
        assert!(ExperimentConfig::new(
            0.25e-15,
            Separation::RadiusMultiple { multiple: 1.5, rho_si: units::RHO_OSMIUM_SI },
            2.5e-9,
            0.0,
            1.0,
            2,
        )
        .is_err());
    }

    #[test]
    fn p0_multiple_round_trips() {
        let cfg = reference_config().with_p0_multiple(3.5);
        assert!(rel(cfg.p0_multiple(), 3.5) < 1e-12);
        let p0 = 3.5 * units::P0_RATE_UNIT * cfg.mass_kg() * cfg.separation_m();
        assert!(rel(cfg.p0_si(), p0) < 1e-12);
    }
}
