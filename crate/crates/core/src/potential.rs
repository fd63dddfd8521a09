//! Central-interaction catalog: reduces a central force or potential to
//! the pair (ω², ε₃-rate) that drives the Gaussian engine and the
//! correction models, and expands the exact potential in powers of the
//! displacement-to-separation ratio for the wave-packet propagator.
//!
//! Interactions are attractive with the convention V < 0; the reduction
//! rules are: expand V in r, compare the r² coefficient with −mω²/4; or,
//! when only the force is known, expand F and compare the r coefficient
//! with mω²/2.

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::units::{self, HBAR_C};

/// binom(a, k) for nonnegative integer arguments, exact in f64 for the
/// orders used here.
fn binom(a: u64, k: u64) -> f64 {
    let mut out = 1.0;
    for i in 1..=k {
        out *= (a - k + i) as f64 / i as f64;
    }
    out
}

/// Functional form of an interaction in natural units.
#[derive(Debug, Clone, PartialEq)]
pub enum InteractionForm {
    /// V(r) = −C/(X + r)^j, C in keV·pmʲ, X in pm.
    Potential { c_nat: f64, x_pm: f64, j: u32 },
    /// F(r) = −C/(X + r)^j, C in keV·pm^(j−1), X in pm.
    Force { c_nat: f64, x_pm: f64, j: u32 },
    /// Sum of component interactions, each expanded about r = 0.
    Composite(Vec<CentralInteraction>),
}

/// A central interaction reduced to the parameters that characterize the
/// Gaussian covariance dynamics (ω²) and the cubic-order entanglement
/// amplification (ε₃(t) = rate·t, weak-field form).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralInteraction {
    label: String,
    form: InteractionForm,
    omega_sq: f64,
    epsilon3_rate: f64,
}

impl CentralInteraction {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> &InteractionForm {
        &self.form
    }

    /// ω² (s⁻²).
    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    /// ω (s⁻¹).
    pub fn omega(&self) -> f64 {
        self.omega_sq.sqrt()
    }

    /// Coefficient k of ε₃(t) = k·t (s⁻¹), valid for weak interactions
    /// where the packet follows the free trajectory.
    pub fn epsilon3_rate(&self) -> f64 {
        self.epsilon3_rate
    }

    /// Exact potential at displacement `r_pm`, in keV. For force-defined
    /// interactions the antiderivative with the gauge noted in
    /// `taylor_coefficient` is used.
    pub fn exact_potential(&self, r_pm: f64) -> f64 {
        match &self.form {
            InteractionForm::Potential { c_nat, x_pm, j } => {
                -c_nat / (x_pm + r_pm).powi(*j as i32)
            }
            InteractionForm::Force { c_nat, x_pm, j } => {
                if *j == 1 {
                    c_nat * (x_pm + r_pm).ln()
                } else {
                    -c_nat / ((*j as f64 - 1.0) * (x_pm + r_pm).powi(*j as i32 - 1))
                }
            }
            InteractionForm::Composite(parts) => {
                parts.iter().map(|p| p.exact_potential(r_pm)).sum()
            }
        }
    }

    /// Exact force −dV/dr at displacement `r_pm`, in keV/pm.
    pub fn exact_force(&self, r_pm: f64) -> f64 {
        match &self.form {
            InteractionForm::Potential { c_nat, x_pm, j } => {
                -(*j as f64) * c_nat / (x_pm + r_pm).powi(*j as i32 + 1)
            }
            InteractionForm::Force { c_nat, x_pm, j } => -c_nat / (x_pm + r_pm).powi(*j as i32),
            InteractionForm::Composite(parts) => parts.iter().map(|p| p.exact_force(r_pm)).sum(),
        }
    }

    /// Taylor coefficient c_n of the exact potential about r = 0
    /// (keV·pm⁻ⁿ). For force-defined interactions with j = 1 the constant
    /// term uses the gauge V(0) = C·ln X.
    pub fn taylor_coefficient(&self, n: u32) -> f64 {
        match &self.form {
            InteractionForm::Potential { c_nat, x_pm, j } => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                -c_nat * sign * binom((*j as u64) + (n as u64) - 1, n as u64)
                    / x_pm.powi(*j as i32 + n as i32)
            }
            InteractionForm::Force { c_nat, x_pm, j } => {
                if n == 0 {
                    return if *j == 1 {
                        c_nat * x_pm.ln()
                    } else {
                        -c_nat / ((*j as f64 - 1.0) * x_pm.powi(*j as i32 - 1))
                    };
                }
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                c_nat * sign * binom((*j as u64) + (n as u64) - 2, (n as u64) - 1)
                    / (n as f64 * x_pm.powi(*j as i32 + n as i32 - 1))
            }
            InteractionForm::Composite(parts) => {
                parts.iter().map(|p| p.taylor_coefficient(n)).sum()
            }
        }
    }

    fn reference_separation_pm(&self) -> f64 {
        match &self.form {
            InteractionForm::Potential { x_pm, .. } | InteractionForm::Force { x_pm, .. } => *x_pm,
            InteractionForm::Composite(parts) => parts
                .iter()
                .map(|p| p.reference_separation_pm())
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Newtonian gravity between the two spheres:
/// ω² = 4Gm/L³, ε₃(t) = 6p₀t/mL.
pub fn gravity_interaction(cfg: &ExperimentConfig) -> CentralInteraction {
    let n = cfg.natural();
    let omega_sq = 4.0 * units::G_SI * cfg.mass_kg() / cfg.separation_m().powi(3);
    let rate = 6.0 * cfg.p0_si() / (cfg.mass_kg() * cfg.separation_m());
    CentralInteraction {
        label: "gravity".into(),
        form: InteractionForm::Potential { c_nat: units::G_NAT * n.m_kev * n.m_kev, x_pm: n.l_pm, j: 1 },
        omega_sq,
        epsilon3_rate: rate,
    }
}

/// Coulomb attraction between charges q₁, q₂ (C) embedded in the masses,
/// in the attractive convention q₁q₂ > 0:
/// ω² = 4q₁q₂αℏc/(e²mL³), ε₃(t) = 6p₀t/mL.
pub fn coulomb_interaction(q1: f64, q2: f64, cfg: &ExperimentConfig) -> Result<CentralInteraction> {
    if q1 == 0.0 || q2 == 0.0 {
        return Err(Error::DegenerateInteraction("zero charge gives no Coulomb force".into()));
    }
    if q1 * q2 < 0.0 {
        return Err(Error::Domain(
            "repulsive Coulomb configuration: the epsilon3 machinery covers attractive forces only"
                .into(),
        ));
    }
    let n = cfg.natural();
    let charge_ratio = q1 * q2 / (units::E_CHARGE * units::E_CHARGE);
    let hbar_c_si = units::HBAR_SI * units::C_M_PER_S;
    let omega_sq = 4.0 * charge_ratio * units::ALPHA * hbar_c_si
        / (cfg.mass_kg() * cfg.separation_m().powi(3));
    let rate = 6.0 * cfg.p0_si() / (cfg.mass_kg() * cfg.separation_m());
    Ok(CentralInteraction {
        label: "coulomb".into(),
        form: InteractionForm::Potential {
            c_nat: charge_ratio * units::ALPHA * HBAR_C,
            x_pm: n.l_pm,
            j: 1,
        },
        omega_sq,
        epsilon3_rate: rate,
    })
}

/// Casimir attraction between the sphere surfaces under the proximity
/// force approximation, expanded about the surface gap X = L − 2R₀:
/// ω² = π³ℏcR₀/(120m(L−2R₀)⁴), ε₃(t) = 8p₀t/(m(L−2R₀)).
pub fn casimir_interaction(r0_m: f64, cfg: &ExperimentConfig) -> Result<CentralInteraction> {
    if !(r0_m > 0.0) {
        return Err(Error::Domain(format!("Casimir radius must be > 0, got {r0_m:e}")));
    }
    let gap_m = cfg.separation_m() - 2.0 * r0_m;
    if gap_m <= 0.0 {
        return Err(Error::Domain(format!(
            "spheres in contact: L = {:e} m <= 2 R0 = {:e} m",
            cfg.separation_m(),
            2.0 * r0_m
        )));
    }
    let pi3 = std::f64::consts::PI.powi(3);
    let hbar_c_si = units::HBAR_SI * units::C_M_PER_S;
    let omega_sq = pi3 * hbar_c_si * r0_m / (120.0 * cfg.mass_kg() * gap_m.powi(4));
    let rate = 8.0 * cfg.p0_si() / (cfg.mass_kg() * gap_m);
    Ok(CentralInteraction {
        label: "casimir".into(),
        form: InteractionForm::Potential {
            c_nat: pi3 * HBAR_C * units::length_to_pm(r0_m) / 1440.0,
            x_pm: units::length_to_pm(gap_m),
            j: 2,
        },
        omega_sq,
        epsilon3_rate: rate,
    })
}

/// Arbitrary attractive power-law interaction.
///
/// Potential branch (`from_force = false`): V = −C/(X+r)ʲ with C in J·mʲ,
/// giving ω² = 2j(j+1)C/(mX^(j+2)) and ε₃ = 2(j+2)p₀t/mX.
/// Force branch (`from_force = true`): F = −C/(X+r)ʲ with C in N·mʲ,
/// giving ω² = 2jC/(mX^(j+1)) and ε₃ = 2(j+1)p₀t/mX.
pub fn generic_power_interaction(
    c_si: f64,
    x_m: f64,
    j: u32,
    from_force: bool,
    cfg: &ExperimentConfig,
) -> Result<CentralInteraction> {
    if j == 0 {
        return Err(Error::DegenerateInteraction(
            "j = 0 gives a constant potential with no force".into(),
        ));
    }
    if !(c_si > 0.0) || !(x_m > 0.0) {
        return Err(Error::Domain(format!(
            "power-law interaction needs C > 0 and X > 0, got C = {c_si:e}, X = {x_m:e}"
        )));
    }
    let m = cfg.mass_kg();
    let jf = j as f64;
    let (omega_sq, rate, form, label) = if from_force {
        // C [N·mʲ] = [J·m^(j-1)] -> keV·pm^(j-1)
        let c_nat = c_si / units::KEV_TO_J * 1.0e12_f64.powi(j as i32 - 1);
        (
            2.0 * jf * c_si / (m * x_m.powi(j as i32 + 1)),
            2.0 * (jf + 1.0) * cfg.p0_si() / (m * x_m),
            InteractionForm::Force { c_nat, x_pm: units::length_to_pm(x_m), j },
            "power_force",
        )
    } else {
        // C [J·mʲ] -> keV·pmʲ
        let c_nat = c_si / units::KEV_TO_J * 1.0e12_f64.powi(j as i32);
        (
            2.0 * jf * (jf + 1.0) * c_si / (m * x_m.powi(j as i32 + 2)),
            2.0 * (jf + 2.0) * cfg.p0_si() / (m * x_m),
            InteractionForm::Potential { c_nat, x_pm: units::length_to_pm(x_m), j },
            "power_potential",
        )
    };
    Ok(CentralInteraction { label: label.into(), form, omega_sq, epsilon3_rate: rate })
}

/// Combine simultaneous central interactions: ω² adds in quadrature
/// (Pythagoras-like), and the effective ε₃ rate is the ω²-weighted mean.
pub fn compose(interactions: Vec<CentralInteraction>) -> Result<CentralInteraction> {
    if interactions.is_empty() {
        return Err(Error::DegenerateInteraction("compose needs at least one interaction".into()));
    }
    if interactions.len() == 1 {
        return Ok(interactions.into_iter().next().unwrap());
    }
    let omega_sq: f64 = interactions.iter().map(|i| i.omega_sq).sum();
    let rate = interactions.iter().map(|i| i.omega_sq * i.epsilon3_rate).sum::<f64>() / omega_sq;
    let label = format!(
        "composite({})",
        interactions.iter().map(|i| i.label.as_str()).collect::<Vec<_>>().join("+")
    );
    Ok(CentralInteraction {
        label,
        form: InteractionForm::Composite(interactions),
        omega_sq,
        epsilon3_rate: rate,
    })
}

/// Truncated Taylor expansion of a central potential about r = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedPotential {
    coefficients: Vec<f64>,
    order: u32,
    reference_separation_pm: f64,
    drop_constant: bool,
}

impl ExpandedPotential {
    /// Expansion from explicit coefficients c_0..c_N (keV·pm⁻ⁿ); also the
    /// route for expanding potentials outside the attractive catalog.
    pub fn from_coefficients(
        coefficients: Vec<f64>,
        reference_separation_pm: f64,
        drop_constant: bool,
    ) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::Domain("expansion order must be at least 1".into()));
        }
        Ok(Self {
            order: coefficients.len() as u32 - 1,
            coefficients,
            reference_separation_pm,
            drop_constant,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn reference_separation_pm(&self) -> f64 {
        self.reference_separation_pm
    }

    pub fn drop_constant(&self) -> bool {
        self.drop_constant
    }

    /// c_n, independent of the drop_constant flag.
    pub fn coefficient(&self, n: u32) -> f64 {
        self.coefficients.get(n as usize).copied().unwrap_or(0.0)
    }

    /// V(r) truncated at the stored order (keV); the constant term is
    /// omitted when `drop_constant` so the propagator spends its floating
    /// point budget on the dynamically relevant terms.
    pub fn eval(&self, r_pm: f64) -> f64 {
        let mut acc = 0.0;
        for n in (1..self.coefficients.len()).rev() {
            acc = (acc + self.coefficients[n]) * r_pm;
        }
        if self.drop_constant {
            acc
        } else {
            acc + self.coefficients[0]
        }
    }

    /// Truncated force −V′(r) (keV/pm).
    pub fn force(&self, r_pm: f64) -> f64 {
        let mut acc = 0.0;
        for n in (2..self.coefficients.len()).rev() {
            acc = (acc + n as f64 * self.coefficients[n]) * r_pm;
        }
        -(acc + if self.coefficients.len() > 1 { self.coefficients[1] } else { 0.0 })
    }

    /// Truncated force gradient F′(r) = −V″(r) (keV/pm²).
    pub fn force_gradient(&self, r_pm: f64) -> f64 {
        let mut acc = 0.0;
        for n in (3..self.coefficients.len()).rev() {
            acc = (acc + (n * (n - 1)) as f64 * self.coefficients[n]) * r_pm;
        }
        let c2 = if self.coefficients.len() > 2 { self.coefficients[2] } else { 0.0 };
        -(acc + 2.0 * c2)
    }
}

/// Expand an interaction to order `order` about r = 0.
pub fn expand(
    interaction: &CentralInteraction,
    order: u32,
    drop_constant: bool,
) -> Result<ExpandedPotential> {
    if order < 1 {
        return Err(Error::Domain("expansion order must be at least 1".into()));
    }
    let coefficients = (0..=order).map(|n| interaction.taylor_coefficient(n)).collect();
    Ok(ExpandedPotential {
        coefficients,
        order,
        reference_separation_pm: interaction.reference_separation_pm(),
        drop_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, Separation};
    use crate::units::RHO_OSMIUM_SI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn reference_cfg(p0_multiple: f64) -> ExperimentConfig {
        ExperimentConfig::new(
            0.25e-15,
            Separation::RadiusMultiple { multiple: 2.5, rho_si: RHO_OSMIUM_SI },
            2.5e-9,
            0.0,
            5.0,
            2,
        )
        .unwrap()
        .with_p0_multiple(p0_multiple)
    }

    #[test]
    fn gravity_matches_config_omega_and_rate() {
        let cfg = reference_cfg(3.5);
        let g = gravity_interaction(&cfg);
        assert!(rel(g.omega_sq(), cfg.omega() * cfg.omega()) < 1e-12);
        let rate = 6.0 * cfg.p0_si() / (cfg.mass_kg() * cfg.separation_m());
        assert!(rel(g.epsilon3_rate(), rate) < 1e-12);
        // Rate sign flips with p₀.
        let g_neg = gravity_interaction(&reference_cfg(-3.5));
        assert_eq!(g_neg.epsilon3_rate(), -g.epsilon3_rate());
        // ω₀/ω ≈ 25 for this configuration.
        assert!((cfg.omega0() / g.omega() - 25.0).abs() / 25.0 < 0.10);
    }

    #[test]
    fn gravity_omega_sq_regression() {
        // Frozen independent arithmetic for m = 0.25 pg, L = 2.5 radii.
        let g = gravity_interaction(&reference_cfg(0.0));
        assert!(rel(g.omega_sq(), 1.616578117064891e-6) < 1e-10);
    }

    #[test]
    fn coulomb_reduces_like_gravity() {
        let cfg = reference_cfg(1.0);
        // Choose charges so q1 q2 α ℏc / e² = G m² numerically.
        let hbar_c_si = units::HBAR_SI * units::C_M_PER_S;
        let q_sq = units::G_SI * cfg.mass_kg() * cfg.mass_kg() * units::E_CHARGE
            * units::E_CHARGE
            / (units::ALPHA * hbar_c_si);
        let q = q_sq.sqrt();
        let c = coulomb_interaction(q, q, &cfg).unwrap();
        let g = gravity_interaction(&cfg);
        assert!(rel(c.omega_sq(), g.omega_sq()) < 1e-12);
        // ε₃ rate is 6p₀/mL regardless of charges.
        assert!(rel(c.epsilon3_rate(), g.epsilon3_rate()) < 1e-12);
        let c2 = coulomb_interaction(2.0 * q, 2.0 * q, &cfg).unwrap();
        assert!(rel(c2.omega_sq(), 4.0 * c.omega_sq()) < 1e-12);
        assert!(rel(c2.epsilon3_rate(), c.epsilon3_rate()) < 1e-12);
    }

    #[test]
    fn coulomb_rejects_zero_and_repulsive() {
        let cfg = reference_cfg(0.0);
        assert!(matches!(
            coulomb_interaction(0.0, 1e-18, &cfg),
            Err(Error::DegenerateInteraction(_))
        ));
        assert!(coulomb_interaction(1e-18, -1e-18, &cfg).is_err());
    }

    #[test]
    fn casimir_quartic_gap_law() {
        let cfg = ExperimentConfig::new(1e-10, Separation::Absolute(4e-4), 2.5e-9, 0.0, 1.0, 2)
            .unwrap();
        let r0 = 1e-4;
        let a = casimir_interaction(r0, &cfg).unwrap();
        // Halving the gap: L' - 2R0 = (L - 2R0)/2.
        let gap = cfg.separation_m() - 2.0 * r0;
        let cfg2 = ExperimentConfig::new(
            1e-10,
            Separation::Absolute(2.0 * r0 + 0.5 * gap),
            2.5e-9,
            0.0,
            1.0,
            2,
        )
        .unwrap();
        let b = casimir_interaction(r0, &cfg2).unwrap();
        assert!(rel(b.omega_sq(), 16.0 * a.omega_sq()) < 1e-12);
        // ε₃ uses the surface gap, not the center distance.
        let cfg_p = cfg.clone().with_p0_absolute(1e-30);
        let c = casimir_interaction(r0, &cfg_p).unwrap();
        assert!(rel(c.epsilon3_rate(), 8.0 * 1e-30 / (cfg.mass_kg() * gap)) < 1e-12);
    }

    #[test]
    fn casimir_contact_is_an_error() {
        let cfg =
            ExperimentConfig::new(1e-10, Separation::Absolute(2e-4), 2.5e-9, 0.0, 1.0, 2).unwrap();
        assert!(casimir_interaction(1e-4, &cfg).is_err());
    }

    #[test]
    fn casimir_omega_sq_regression() {
        // Frozen independent arithmetic: reference geometry, R0 = sphere
        // radius, gap = 0.5 radius.
        let cfg = reference_cfg(0.0);
        let c = casimir_interaction(cfg.material_radius_m().unwrap(), &cfg).unwrap();
        assert!(rel(c.omega_sq(), 1.9785918131e11) < 1e-8);
    }

    #[test]
    fn power_law_specializations_reproduce_gravity() {
        let cfg = reference_cfg(2.0);
        let g = gravity_interaction(&cfg);
        let c_grav = units::G_SI * cfg.mass_kg() * cfg.mass_kg();
        // Potential branch, j = 1.
        let p = generic_power_interaction(c_grav, cfg.separation_m(), 1, false, &cfg).unwrap();
        assert!(rel(p.omega_sq(), g.omega_sq()) < 1e-12);
        assert!(rel(p.epsilon3_rate(), g.epsilon3_rate()) < 1e-12);
        // Force branch, j = 2 (Newton's force law).
        let f = generic_power_interaction(c_grav, cfg.separation_m(), 2, true, &cfg).unwrap();
        assert!(rel(f.omega_sq(), g.omega_sq()) < 1e-12);
        assert!(rel(f.epsilon3_rate(), g.epsilon3_rate()) < 1e-12);
    }

    #[test]
    fn power_law_rejects_degenerate_inputs() {
        let cfg = reference_cfg(0.0);
        assert!(matches!(
            generic_power_interaction(1e-30, 1e-7, 0, false, &cfg),
            Err(Error::DegenerateInteraction(_))
        ));
        assert!(generic_power_interaction(-1e-30, 1e-7, 1, false, &cfg).is_err());
        assert!(generic_power_interaction(1e-30, 0.0, 1, true, &cfg).is_err());
    }

    #[test]
    fn power_law_coefficients_match_series_reduction() {
        // Both branches cross-checked by coefficient comparison: the r²
        // coefficient of V against −mω²/4, and the r coefficient of F
        // against mω²/2.
        let cfg = reference_cfg(0.0);
        let n = cfg.natural();
        for &(j, from_force) in &[(1u32, false), (3, false), (2, true), (4, true)] {
            let x_m = 3.0 * cfg.separation_m();
            let c_si = 2.5e-32;
            let int = generic_power_interaction(c_si, x_m, j, from_force, &cfg).unwrap();
            let omega_nat_sq =
                int.omega_sq() / (units::C_PM_PER_S * units::C_PM_PER_S);
            let exp = expand(&int, 3, false).unwrap();
            // V: c₂ = −mω²/4 in natural units.
            assert!(
                rel(exp.coefficient(2), -0.25 * n.m_kev * omega_nat_sq) < 1e-10,
                "j = {j}, force = {from_force}"
            );
            // F: coefficient of r in −V′ expansion is −2c₂ = mω²/2.
            assert!(rel(-2.0 * exp.coefficient(2), 0.5 * n.m_kev * omega_nat_sq) < 1e-10);
        }
    }

    #[test]
    fn compose_identity_and_doubling() {
        let cfg = reference_cfg(1.5);
        let g = gravity_interaction(&cfg);
        let single = compose(vec![g.clone()]).unwrap();
        assert_eq!(single.omega_sq(), g.omega_sq());
        assert_eq!(single.epsilon3_rate(), g.epsilon3_rate());
        let double = compose(vec![g.clone(), g.clone()]).unwrap();
        assert!(rel(double.omega_sq(), 2.0 * g.omega_sq()) < 1e-12);
        assert!(rel(double.epsilon3_rate(), g.epsilon3_rate()) < 1e-12);
        assert!(compose(vec![]).is_err());
    }

    #[test]
    fn compose_gravity_casimir_regression() {
        // Frozen independent arithmetic for the reference geometry with
        // p₀ multiple 1: Casimir dominates ω² by 17 orders, so the
        // weighted ε₃ rate collapses onto the Casimir rate.
        let cfg = reference_cfg(1.0);
        let g = gravity_interaction(&cfg);
        let c = casimir_interaction(cfg.material_radius_m().unwrap(), &cfg).unwrap();
        let both = compose(vec![g, c]).unwrap();
        assert!(rel(both.omega_sq(), 1.9785918131e11) < 1e-8);
        assert!(rel(both.epsilon3_rate(), 0.2472329168) < 1e-8);
    }

    #[test]
    fn gravity_expansion_matches_eq7_pattern() {
        let cfg = reference_cfg(0.0);
        let n = cfg.natural();
        let g = gravity_interaction(&cfg);
        let exp = expand(&g, 5, false).unwrap();
        let omega_nat_sq = 4.0 * units::G_NAT * n.m_kev / n.l_pm.powi(3);
        for k in 0..=5u32 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let expect = -0.25 * n.m_kev * omega_nat_sq * sign * n.l_pm.powf(2.0 - k as f64);
            assert!(rel(exp.coefficient(k), expect) < 1e-12, "c_{k}");
        }
        // c₂ = −Gm²/L³ and c₃ = +Gm²/L⁴.
        let a = units::G_NAT * n.m_kev * n.m_kev;
        assert!(rel(exp.coefficient(2), -a / n.l_pm.powi(3)) < 1e-12);
        assert!(rel(exp.coefficient(3), a / n.l_pm.powi(4)) < 1e-12);
        // Constant term: V(0) = −Gm²/L exactly when kept.
        assert!(rel(exp.eval(0.0), -a / n.l_pm) < 1e-12);
        // Dropped constant: V(0) = 0.
        let dropped = expand(&g, 5, true).unwrap();
        assert_eq!(dropped.eval(0.0), 0.0);
        assert_eq!(dropped.coefficient(0), exp.coefficient(0));
    }

    #[test]
    fn force_gradient_identities() {
        // F₂′ = mω²/2 and F₃′(r) = (1 − 3r/L)·mω²/2 from the expansions.
        let cfg = reference_cfg(0.0);
        let n = cfg.natural();
        let g = gravity_interaction(&cfg);
        let omega_nat_sq = g.omega_sq() / (units::C_PM_PER_S * units::C_PM_PER_S);
        let f2 = 0.5 * n.m_kev * omega_nat_sq;
        let exp2 = expand(&g, 2, true).unwrap();
        for &r in &[0.0, -0.05 * n.l_pm, 0.08 * n.l_pm] {
            assert!(rel(exp2.force_gradient(r), f2) < 1e-10);
        }
        let exp3 = expand(&g, 3, true).unwrap();
        for &r in &[-0.06 * n.l_pm, 0.0, 0.09 * n.l_pm] {
            let expect = (1.0 - 3.0 * r / n.l_pm) * f2;
            assert!(rel(exp3.force_gradient(r), expect) < 1e-10);
        }
    }

    #[test]
    fn truncation_error_scales_with_order() {
        // |expansion(r) − V(r)| = O((r/L)^{N+1}) on r ∈ [−L/10, L/10]:
        // log-log slope fit within 5%.
        let cfg = reference_cfg(0.0);
        let n = cfg.natural();
        let g = gravity_interaction(&cfg);
        for order in [2u32, 3, 4] {
            let exp = expand(&g, order, false).unwrap();
            let radii = [0.1, 0.05, 0.025, 0.0125];
            let errs: Vec<f64> = radii
                .iter()
                .map(|&f| {
                    let r = f * n.l_pm;
                    (exp.eval(r) - g.exact_potential(r))
                        .abs()
                        .max((exp.eval(-r) - g.exact_potential(-r)).abs())
                })
                .collect();
            // Least-squares slope of ln err vs ln r.
            let xs: Vec<f64> = radii.iter().map(|&f| (f * n.l_pm).ln()).collect();
            let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
            let xm = xs.iter().sum::<f64>() / xs.len() as f64;
            let ym = ys.iter().sum::<f64>() / ys.len() as f64;
            let slope = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| (x - xm) * (y - ym))
                .sum::<f64>()
                / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
            let expect = (order + 1) as f64;
            assert!(
                (slope - expect).abs() / expect < 0.05,
                "order {order}: slope {slope}"
            );
        }
    }

    #[test]
    fn casimir_coefficients_match_finite_differences() {
        // Derivatives of the exact potential at r = 0 via central
        // differences, against the closed binomial coefficients.
        let cfg = reference_cfg(0.0);
        let c = casimir_interaction(cfg.material_radius_m().unwrap(), &cfg).unwrap();
        let exp = expand(&c, 3, false).unwrap();
        let x = match c.form() {
            InteractionForm::Potential { x_pm, .. } => *x_pm,
            _ => unreachable!(),
        };
        let h = 1e-4 * x;
        let v = |r: f64| c.exact_potential(r);
        let d1 = (v(h) - v(-h)) / (2.0 * h);
        let d2 = (v(h) - 2.0 * v(0.0) + v(-h)) / (h * h);
        let d3 = (v(2.0 * h) - 2.0 * v(h) + 2.0 * v(-h) - v(-2.0 * h)) / (2.0 * h * h * h);
        assert!(rel(exp.coefficient(0), v(0.0)) < 1e-12);
        assert!(rel(exp.coefficient(1), d1) < 1e-6);
        assert!(rel(exp.coefficient(2), d2 / 2.0) < 1e-6);
        assert!(rel(exp.coefficient(3), d3 / 6.0) < 1e-4);
    }

    #[test]
    fn force_branch_expansion_consistent_with_its_force() {
        // The expansion of a force-defined interaction must reproduce the
        // force series: compare −V′ of the expansion with the exact force.
        let cfg = reference_cfg(0.0);
        let int = generic_power_interaction(3e-33, 2e-7, 3, true, &cfg).unwrap();
        let exp = expand(&int, 6, true).unwrap();
        let x_pm = 2e5;
        for &r in &[-0.02 * x_pm, 0.01 * x_pm] {
            assert!(rel(exp.force(r), int.exact_force(r)) < 1e-6);
        }
    }
}
