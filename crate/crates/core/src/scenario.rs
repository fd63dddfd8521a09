//! Scenario files: a flat `key = value` text format (one pair per line,
//! `#` starts a comment) describing one experiment run.
//!
//! Grammar (all keys lowercase, values parsed as numbers, booleans, or
//! bare words; unknown keys are rejected):
//!
//! ```text
//! mass = 2.5e-16                  # kg (required)
//! separation_mode = radius_multiple  # or: absolute (default)
//! separation = 2.5                # radius multiple, or meters (required)
//! density = 22587.2               # kg/m^3 (radius_multiple mode; default osmium)
//! sigma = 2.5e-9                  # m (required)
//! p0_multiple = 3.5               # in units of 6.18082292e-3 s^-1 * m * L
//! p0_absolute = 1.0e-26           # kg m/s (alternative to p0_multiple)
//! order = 2                       # expansion order N (required)
//! t_max = 5.0                     # s (required)
//! dt = 5e-6                       # s (default 5e-6)
//! grid_spacing = 1e-13            # m (default 1e-13)
//! sample_interval = 0.5           # s (default t_max, i.e. first and last)
//! pipeline = analytic             # analytic | numeric | both (default analytic)
//! interaction = gravity           # gravity | coulomb | casimir |
//!                                 # power_potential | power_force | composite
//! charge_1 = 1.6e-19              # C (coulomb)
//! charge_2 = 1.6e-19              # C (coulomb)
//! casimir_radius = 1e-4           # m (casimir; defaults to the material radius)
//! power_c = 1e-30                 # J m^j (potential) or N m^j (force)
//! power_x = 1e-7                  # m
//! power_j = 2                     # integer >= 1
//! composite_kinds = gravity, casimir
//! schmidt = true                  # numeric pipeline: Schmidt entropy per snapshot
//! bipartite_sigmas = 7.5          # COM window half-width in spreads
//! bipartite_points_per_width = 4  # sampling density of the bipartite grid
//! lambda_count = 4                # leading Schmidt coefficients in the trace CSV
//! out_dir = out/run1              # output directory
//! deterministic = true            # recorded in the manifest; runs are
//!                                 # deterministic by construction
//! ```

use std::collections::BTreeMap;

use crate::config::{ExperimentConfig, Separation};
use crate::error::{Error, Result};
use crate::potential::{
    casimir_interaction, compose, coulomb_interaction, generic_power_interaction,
    gravity_interaction, CentralInteraction,
};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Analytic,
    Numeric,
    Both,
}

impl Pipeline {
    pub fn as_str(&self) -> &'static str {
        match self {
            Pipeline::Analytic => "analytic",
            Pipeline::Numeric => "numeric",
            Pipeline::Both => "both",
        }
    }
}

/// Interaction selection, resolved against a configuration at build time.
#[derive(Debug, Clone, PartialEq)]
pub enum InteractionSpec {
    Gravity,
    Coulomb { q1: f64, q2: f64 },
    Casimir { r0_m: f64 },
    PowerPotential { c_si: f64, x_m: f64, j: u32 },
    PowerForce { c_si: f64, x_m: f64, j: u32 },
    Composite(Vec<InteractionSpec>),
}

impl InteractionSpec {
    pub fn build(&self, cfg: &ExperimentConfig) -> Result<CentralInteraction> {
        match self {
            InteractionSpec::Gravity => Ok(gravity_interaction(cfg)),
            InteractionSpec::Coulomb { q1, q2 } => coulomb_interaction(*q1, *q2, cfg),
            InteractionSpec::Casimir { r0_m } => casimir_interaction(*r0_m, cfg),
            InteractionSpec::PowerPotential { c_si, x_m, j } => {
                generic_power_interaction(*c_si, *x_m, *j, false, cfg)
            }
            InteractionSpec::PowerForce { c_si, x_m, j } => {
                generic_power_interaction(*c_si, *x_m, *j, true, cfg)
            }
            InteractionSpec::Composite(parts) => {
                let built: Result<Vec<_>> = parts.iter().map(|p| p.build(cfg)).collect();
                compose(built?)
            }
        }
    }

    pub fn kind_name(&self) -> String {
        match self {
            InteractionSpec::Gravity => "gravity".into(),
            InteractionSpec::Coulomb { .. } => "coulomb".into(),
            InteractionSpec::Casimir { .. } => "casimir".into(),
            InteractionSpec::PowerPotential { .. } => "power_potential".into(),
            InteractionSpec::PowerForce { .. } => "power_force".into(),
            InteractionSpec::Composite(parts) => format!(
                "composite({})",
                parts.iter().map(|p| p.kind_name()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// A parsed, validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ExperimentConfig,
    pub interaction: InteractionSpec,
    pub pipeline: Pipeline,
    pub dt_s: f64,
    pub grid_spacing_m: f64,
    pub sample_interval_s: f64,
    pub schmidt: bool,
    pub bipartite_sigmas: f64,
    pub bipartite_points_per_width: f64,
    pub lambda_count: usize,
    pub out_dir: String,
    pub deterministic: bool,
}

impl Scenario {
    /// Invariants beyond per-field parsing: the analytic engine is only
    /// valid for the quadratic truncation; numeric runs need N >= 2 to
    /// generate entanglement at all.
    pub fn validate(&self) -> Result<()> {
        match self.pipeline {
            Pipeline::Analytic => {
                if self.config.order() != 2 {
                    return Err(Error::InvalidConfig(format!(
                        "pipeline = analytic requires order = 2, got {}",
                        self.config.order()
                    )));
                }
            }
            Pipeline::Numeric | Pipeline::Both => {
                if self.config.order() < 2 {
                    return Err(Error::InvalidConfig(format!(
                        "numeric pipelines require order >= 2, got {}",
                        self.config.order()
                    )));
                }
            }
        }
        if !(self.dt_s > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0, got {:e}", self.dt_s)));
        }
        if !(self.grid_spacing_m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "grid_spacing must be > 0, got {:e}",
                self.grid_spacing_m
            )));
        }
        if !(self.sample_interval_s > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sample_interval must be > 0, got {:e}",
                self.sample_interval_s
            )));
        }
        Ok(())
    }

    /// Resolved key/value view for run manifests: every parameter the run
    /// will actually use, in deterministic order.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let cfg = &self.config;
        m.insert("mass_kg".into(), format!("{:e}", cfg.mass_kg()));
        m.insert("separation_m".into(), format!("{:e}", cfg.separation_m()));
        if let Some(r) = cfg.material_radius_m() {
            m.insert("material_radius_m".into(), format!("{r:e}"));
        }
        m.insert("sigma_m".into(), format!("{:e}", cfg.sigma_m()));
        m.insert("p0_kgms".into(), format!("{:e}", cfg.p0_si()));
        m.insert("p0_multiple".into(), format!("{:e}", cfg.p0_multiple()));
        m.insert("t_max_s".into(), format!("{:e}", cfg.t_max_s()));
        m.insert("order".into(), cfg.order().to_string());
        m.insert("omega_si".into(), format!("{:e}", cfg.omega()));
        m.insert("omega0_si".into(), format!("{:e}", cfg.omega0()));
        m.insert("interaction".into(), self.interaction.kind_name());
        m.insert("pipeline".into(), self.pipeline.as_str().into());
        m.insert("dt_s".into(), format!("{:e}", self.dt_s));
        m.insert("grid_spacing_m".into(), format!("{:e}", self.grid_spacing_m));
        m.insert("sample_interval_s".into(), format!("{:e}", self.sample_interval_s));
        m.insert("schmidt".into(), self.schmidt.to_string());
        m.insert("bipartite_sigmas".into(), format!("{:e}", self.bipartite_sigmas));
        m.insert(
            "bipartite_points_per_width".into(),
            format!("{:e}", self.bipartite_points_per_width),
        );
        m.insert("lambda_count".into(), self.lambda_count.to_string());
        m.insert("deterministic".into(), self.deterministic.to_string());
        m
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::ScenarioParse {
        line,
        msg: format!("key `{key}`: expected a number, got `{value}`"),
    })
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::ScenarioParse {
            line,
            msg: format!("key `{key}`: expected true/false, got `{value}`"),
        }),
    }
}

fn simple_interaction(
    kind: &str,
    kv: &BTreeMap<String, (String, usize)>,
    line: usize,
) -> Result<InteractionSpec> {
    let get_num = |key: &str| -> Result<f64> {
        let (v, l) = kv.get(key).ok_or_else(|| Error::ScenarioParse {
            line,
            msg: format!("interaction `{kind}` needs key `{key}`"),
        })?;
        parse_f64(key, v, *l)
    };
    match kind {
        "gravity" => Ok(InteractionSpec::Gravity),
        "coulomb" => Ok(InteractionSpec::Coulomb { q1: get_num("charge_1")?, q2: get_num("charge_2")? }),
        "casimir" => {
            // Defaults to the material radius when the separation was
            // given as a radius multiple.
            let r0 = match kv.get("casimir_radius") {
                Some((v, l)) => parse_f64("casimir_radius", v, *l)?,
                None => f64::NAN, // resolved against the config later
            };
            Ok(InteractionSpec::Casimir { r0_m: r0 })
        }
        "power_potential" | "power_force" => {
            let c = get_num("power_c")?;
            let x = get_num("power_x")?;
            let j = get_num("power_j")? as u32;
            if kind == "power_potential" {
                Ok(InteractionSpec::PowerPotential { c_si: c, x_m: x, j })
            } else {
                Ok(InteractionSpec::PowerForce { c_si: c, x_m: x, j })
            }
        }
        other => Err(Error::ScenarioParse {
            line,
            msg: format!(
                "unknown interaction `{other}` (expected gravity, coulomb, casimir, \
                 power_potential, power_force, or composite)"
            ),
        }),
    }
}

/// Parse a scenario from text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    const KNOWN: &[&str] = &[
        "mass",
        "separation_mode",
        "separation",
        "density",
        "sigma",
        "p0_multiple",
        "p0_absolute",
        "order",
        "t_max",
        "dt",
        "grid_spacing",
        "sample_interval",
        "pipeline",
        "interaction",
        "charge_1",
        "charge_2",
        "casimir_radius",
        "power_c",
        "power_x",
        "power_j",
        "composite_kinds",
        "schmidt",
        "bipartite_sigmas",
        "bipartite_points_per_width",
        "lambda_count",
        "out_dir",
        "deterministic",
    ];

    let mut kv: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ScenarioParse {
            line: line_no,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim().to_lowercase();
        let value = value.trim().to_string();
        if !KNOWN.contains(&key.as_str()) {
            return Err(Error::ScenarioParse { line: line_no, msg: format!("unknown key `{key}`") });
        }
        if kv.insert(key.clone(), (value, line_no)).is_some() {
            return Err(Error::ScenarioParse {
                line: line_no,
                msg: format!("duplicate key `{key}`"),
            });
        }
    }

    let require = |key: &str| -> Result<(String, usize)> {
        kv.get(key).cloned().ok_or_else(|| Error::ScenarioParse {
            line: 0,
            msg: format!("missing required key `{key}`"),
        })
    };
    let num = |key: &str| -> Result<f64> {
        let (v, l) = require(key)?;
        parse_f64(key, &v, l)
    };
    let num_or = |key: &str, default: f64| -> Result<f64> {
        match kv.get(key) {
            Some((v, l)) => parse_f64(key, v, *l),
            None => Ok(default),
        }
    };

    let mass = num("mass")?;
    let sigma = num("sigma")?;
    let t_max = num("t_max")?;
    let order = num("order")? as u32;
    let separation_value = num("separation")?;
    let density = num_or("density", units::RHO_OSMIUM_SI)?;
    let separation = match kv.get("separation_mode").map(|(v, _)| v.as_str()) {
        None | Some("absolute") => Separation::Absolute(separation_value),
        Some("radius_multiple") => {
            Separation::RadiusMultiple { multiple: separation_value, rho_si: density }
        }
        Some(other) => {
            let l = kv.get("separation_mode").unwrap().1;
            return Err(Error::ScenarioParse {
                line: l,
                msg: format!("separation_mode must be absolute or radius_multiple, got `{other}`"),
            });
        }
    };

    let mut config = ExperimentConfig::new(mass, separation, sigma, 0.0, t_max, order)?;
    match (kv.get("p0_multiple"), kv.get("p0_absolute")) {
        (Some((v, l)), None) => {
            config = config.with_p0_multiple(parse_f64("p0_multiple", v, *l)?);
        }
        (None, Some((v, l))) => {
            config = config.with_p0_absolute(parse_f64("p0_absolute", v, *l)?);
        }
        (None, None) => {}
        (Some(_), Some((_, l))) => {
            return Err(Error::ScenarioParse {
                line: *l,
                msg: "give either p0_multiple or p0_absolute, not both".into(),
            });
        }
    }

    let pipeline = match kv.get("pipeline").map(|(v, _)| v.as_str()) {
        None | Some("analytic") => Pipeline::Analytic,
        Some("numeric") => Pipeline::Numeric,
        Some("both") => Pipeline::Both,
        Some(other) => {
            let l = kv.get("pipeline").unwrap().1;
            return Err(Error::ScenarioParse {
                line: l,
                msg: format!("pipeline must be analytic, numeric, or both, got `{other}`"),
            });
        }
    };

    let interaction = match kv.get("interaction").map(|(v, l)| (v.as_str(), *l)) {
        None => InteractionSpec::Gravity,
        Some(("composite", l)) => {
            let (kinds, kl) = require("composite_kinds").map_err(|_| Error::ScenarioParse {
                line: l,
                msg: "interaction = composite needs composite_kinds".into(),
            })?;
            let parts: Result<Vec<_>> = kinds
                .split(',')
                .map(|k| simple_interaction(k.trim(), &kv, kl))
                .collect();
            InteractionSpec::Composite(parts?)
        }
        Some((kind, l)) => simple_interaction(kind, &kv, l)?,
    };
    // Resolve the defaulted Casimir radius against the config.
    let interaction = resolve_casimir_radius(interaction, &config)?;

    let scenario = Scenario {
        dt_s: num_or("dt", 5e-6)?,
        grid_spacing_m: num_or("grid_spacing", 1e-13)?,
        sample_interval_s: num_or("sample_interval", if t_max > 0.0 { t_max } else { 1.0 })?,
        schmidt: match kv.get("schmidt") {
            Some((v, l)) => parse_bool("schmidt", v, *l)?,
            None => true,
        },
        bipartite_sigmas: num_or("bipartite_sigmas", 7.5)?,
        bipartite_points_per_width: num_or("bipartite_points_per_width", 4.0)?,
        lambda_count: num_or("lambda_count", 4.0)? as usize,
        out_dir: kv.get("out_dir").map(|(v, _)| v.clone()).unwrap_or_else(|| "out".into()),
        deterministic: match kv.get("deterministic") {
            Some((v, l)) => parse_bool("deterministic", v, *l)?,
            None => true,
        },
        config,
        interaction,
        pipeline,
    };
    scenario.validate()?;
    Ok(scenario)
}

fn resolve_casimir_radius(
    spec: InteractionSpec,
    cfg: &ExperimentConfig,
) -> Result<InteractionSpec> {
    Ok(match spec {
        InteractionSpec::Casimir { r0_m } if r0_m.is_nan() => {
            let r = cfg.material_radius_m().ok_or_else(|| {
                Error::InvalidConfig(
                    "casimir_radius is required unless separation_mode = radius_multiple".into(),
                )
            })?;
            InteractionSpec::Casimir { r0_m: r }
        }
        InteractionSpec::Composite(parts) => InteractionSpec::Composite(
            parts
                .into_iter()
                .map(|p| resolve_casimir_radius(p, cfg))
                .collect::<Result<Vec<_>>>()?,
        ),
        other => other,
    })
}
