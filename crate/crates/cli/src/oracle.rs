//! `centforce oracle <which>`: prints the independently computed
//! reference values that the test suite freezes, so they can be audited
//! or regenerated from the command line.

use anyhow::{bail, Result};
use centforce::config::{radius_from_mass, ExperimentConfig, Separation};
use centforce::corrections::{epsilon4, epsilon_n};
use centforce::entanglement::{approx_log_negativity, gaussian_entropy, log_negativity};
use centforce::gaussian::covariance_lab;
use centforce::potential::{casimir_interaction, compose, gravity_interaction};
use centforce::units;

fn reference_config(p0_multiple: f64) -> ExperimentConfig {
    ExperimentConfig::new(
        0.25e-15,
        Separation::RadiusMultiple { multiple: 2.5, rho_si: units::RHO_OSMIUM_SI },
        2.5e-9,
        0.0,
        5.0,
        2,
    )
    .expect("reference configuration is valid")
    .with_p0_multiple(p0_multiple)
}

pub fn run(which: &str) -> Result<()> {
    match which {
        "radius" => {
            println!("unit sphere (4*pi/3 g @ 1 g/cm^3): {:.12e} m", radius_from_mass(4.0 * std::f64::consts::PI / 3.0 * 1e-3, 1000.0)?);
            println!("0.25 pg osmium:                    {:.12e} m", radius_from_mass(0.25e-15, units::RHO_OSMIUM_SI)?);
            println!("1 pg osmium:                       {:.12e} m", radius_from_mass(1e-15, units::RHO_OSMIUM_SI)?);
            println!("100 ug osmium:                     {:.12e} m", radius_from_mass(100e-9, units::RHO_OSMIUM_SI)?);
        }
        "frequencies" => {
            let cfg = reference_config(0.0);
            println!("reference configuration (0.25 pg, L = 2.5 r, sigma = 2.5 nm):");
            println!("  omega  = {:.12e} s^-1", cfg.omega());
            println!("  omega0 = {:.12e} s^-1", cfg.omega0());
            println!("  omega0/omega = {:.6}", cfg.omega0() / cfg.omega());
            let cfg21 = ExperimentConfig::new(
                1e-15,
                Separation::RadiusMultiple { multiple: 2.1, rho_si: units::RHO_OSMIUM_SI },
                5e-9,
                0.0,
                5.0,
                2,
            )?;
            println!("1 pg at L = 2.1 r:");
            println!("  omega  = {:.12e} s^-1", cfg21.omega());
        }
        "headline" => {
            let cfg = reference_config(0.0);
            for t in [4.0, 5.0] {
                let cov = covariance_lab(&cfg, t);
                println!(
                    "t = {t} s: E = {:.8e}, S = {:.8e}, E_approx(out of regime) = {:.8e}",
                    log_negativity(&cov)?,
                    gaussian_entropy(&cov)?,
                    approx_log_negativity(&cfg, t)
                );
            }
        }
        "epsilon" => {
            let cfg = reference_config(3.5).with_order(6)?;
            let g = gravity_interaction(&cfg);
            println!("epsilon3 rate (multiple 3.5): {:.12e} s^-1", g.epsilon3_rate());
            println!("epsilon4(5 s):                {:.12e}", epsilon4(&cfg, 5.0));
            for n in 3..=6 {
                println!("epsilon_{n}(5 s):              {:.12e}", epsilon_n(&cfg, n, 5.0)?);
            }
        }
        "interactions" => {
            let cfg = reference_config(1.0);
            let g = gravity_interaction(&cfg);
            let c = casimir_interaction(cfg.material_radius_m().unwrap(), &cfg)?;
            println!("gravity: omega^2 = {:.12e} s^-2, eps3 rate = {:.12e} s^-1", g.omega_sq(), g.epsilon3_rate());
            println!("casimir: omega^2 = {:.12e} s^-2, eps3 rate = {:.12e} s^-1", c.omega_sq(), c.epsilon3_rate());
            let both = compose(vec![g, c])?;
            println!("composite: omega^2 = {:.12e} s^-2, eps3 rate = {:.12e} s^-1", both.omega_sq(), both.epsilon3_rate());
        }
        other => bail!(
            "unknown oracle `{other}` (expected radius, frequencies, headline, epsilon, interactions)"
        ),
    }
    Ok(())
}
