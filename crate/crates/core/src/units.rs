//! Physical constants and natural-unit conversions.
//!
//! All physics modules work internally in natural units with c = 1:
//! lengths in pm, energies in keV, masses as rest energies mc² in keV,
//! momenta as pc in keV, and times as ct in pm. In this system a single
//! constant ℏc = 197.3269804 keV·pm plays the role of ℏ everywhere.
//! SI values enter only at the configuration boundary and leave only at
//! the CSV/output boundary.

/// ℏc (keV·pm). Identical numerically to the MeV·fm value.
pub const HBAR_C: f64 = 197.326_980_4;

/// Speed of light (m/s, exact).
pub const C_M_PER_S: f64 = 2.997_924_58e8;

/// Speed of light (pm/s); converts seconds to natural time.
pub const C_PM_PER_S: f64 = C_M_PER_S * 1.0e12;

/// Elementary charge (C, exact).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Joules per keV (exact).
pub const KEV_TO_J: f64 = E_CHARGE * 1.0e3;

/// Fine-structure constant (CODATA 2018).
pub const ALPHA: f64 = 7.297_352_569_3e-3;

/// Newtonian gravitational constant (m³ kg⁻¹ s⁻², CODATA 2018).
pub const G_SI: f64 = 6.674_30e-11;

/// Density of osmium (kg/m³); 22.5872 g/cm³.
pub const RHO_OSMIUM_SI: f64 = 2.258_72e4;

/// ℏ (J·s), derived from ℏc so the two representations cannot drift.
pub const HBAR_SI: f64 = HBAR_C * KEV_TO_J * 1.0e-12 / C_M_PER_S;

/// G expressed in natural units (pm/keV): G_nat·(mc²)²/L is an energy in
/// keV when mc² is in keV and L in pm.
pub const G_NAT: f64 = G_SI * 1.0e12 * KEV_TO_J / (C_M_PER_S * C_M_PER_S * C_M_PER_S * C_M_PER_S);

/// Figure-legend unit for p₀/mL: momenta are quoted as multiples of this
/// rate (s⁻¹), so scenario files can say `p0_multiple = 3.5`.
pub const P0_RATE_UNIT: f64 = 6.180_822_92e-3;

/// Bundle of the physical constants used by the toolkit.
///
/// `c` is carried in SI (m/s); in the internal natural-unit system it is 1
/// by construction and never appears explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ℏc (keV·pm)
    pub hbar_c: f64,
    /// Gravitational constant (m³ kg⁻¹ s⁻²)
    pub g: f64,
    /// Fine-structure constant
    pub alpha: f64,
    /// Elementary charge (C)
    pub e: f64,
    /// Speed of light (m/s); = 1 in natural units
    pub c: f64,
    /// Osmium density (kg/m³)
    pub rho_osmium: f64,
}

impl PhysicalConstants {
    pub const fn codata2018() -> Self {
        Self {
            hbar_c: HBAR_C,
            g: G_SI,
            alpha: ALPHA,
            e: E_CHARGE,
            c: C_M_PER_S,
            rho_osmium: RHO_OSMIUM_SI,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

// --- SI -> natural ---

/// Mass in kg to rest energy mc² in keV.
pub fn mass_to_kev(m_kg: f64) -> f64 {
    m_kg * C_M_PER_S * C_M_PER_S / KEV_TO_J
}

/// Length in m to pm.
pub fn length_to_pm(l_m: f64) -> f64 {
    l_m * 1.0e12
}

/// Momentum in kg·m/s to pc in keV.
pub fn momentum_to_kev(p_si: f64) -> f64 {
    p_si * C_M_PER_S / KEV_TO_J
}

/// Time in s to ct in pm.
pub fn time_to_pm(t_s: f64) -> f64 {
    t_s * C_PM_PER_S
}

/// Angular frequency in s⁻¹ to pm⁻¹.
pub fn frequency_to_inv_pm(omega_si: f64) -> f64 {
    omega_si / C_PM_PER_S
}

/// Energy in J to keV.
pub fn energy_to_kev(e_j: f64) -> f64 {
    e_j / KEV_TO_J
}

// --- natural -> SI ---

pub fn mass_to_kg(m_kev: f64) -> f64 {
    m_kev * KEV_TO_J / (C_M_PER_S * C_M_PER_S)
}

pub fn length_to_m(l_pm: f64) -> f64 {
    l_pm * 1.0e-12
}

pub fn momentum_to_si(p_kev: f64) -> f64 {
    p_kev * KEV_TO_J / C_M_PER_S
}

pub fn time_to_s(t_pm: f64) -> f64 {
    t_pm / C_PM_PER_S
}

pub fn frequency_to_si(omega_nat: f64) -> f64 {
    omega_nat * C_PM_PER_S
}

pub fn energy_to_j(e_kev: f64) -> f64 {
    e_kev * KEV_TO_J
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn hbar_c_matches_stated_digits() {
        assert_eq!(HBAR_C, 197.3269804);
        let c = PhysicalConstants::codata2018();
        assert_eq!(c.hbar_c, 197.3269804);
        assert_eq!(c.rho_osmium, 22587.2);
    }

    #[test]
    fn hbar_si_consistent_with_codata() {
        // CODATA 2018: ℏ = 1.054571817e-34 J·s (derived from exact h)
        assert!(rel(HBAR_SI, 1.054571817e-34) < 1e-9);
    }

    #[test]
    fn conversions_round_trip() {
        let cases = [1.0e-16_f64, 2.5e-9, 3.3, 7.7e5];
        for &v in &cases {
            assert!(rel(mass_to_kg(mass_to_kev(v)), v) < 1e-12);
            assert!(rel(length_to_m(length_to_pm(v)), v) < 1e-12);
            assert!(rel(momentum_to_si(momentum_to_kev(v)), v) < 1e-12);
            assert!(rel(time_to_s(time_to_pm(v)), v) < 1e-12);
            assert!(rel(frequency_to_si(frequency_to_inv_pm(v)), v) < 1e-12);
            assert!(rel(energy_to_j(energy_to_kev(v)), v) < 1e-12);
        }
    }

    #[test]
    fn g_nat_reproduces_si_energy() {
        // Gravitational energy of two 0.25 pg masses at 345.6 nm, both ways.
        let m_kg = 2.5e-16;
        let l_m = 3.456e-7;
        let e_si = G_SI * m_kg * m_kg / l_m; // J
        let e_nat = G_NAT * mass_to_kev(m_kg).powi(2) / length_to_pm(l_m); // keV
        assert!(rel(energy_to_kev(e_si), e_nat) < 1e-12);
    }
}
