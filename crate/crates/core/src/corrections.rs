//! Closed-form predictors for momentum-driven entanglement amplification
//! (ε₃, ε₄ and the general ε_n ladder) and the momentum-witness
//! diagnostic.
//!
//! The ε_n corrections quantify the ratio of average force gradients
//! ⟨F_N′⟩/F₂′ = 1 + Σ ε_n(t) under two weak-field approximations: the
//! packet center follows the free trajectory r_cl = −2p₀t/m, and the
//! spread follows the free expansion Δr₀² = 2σ²(1 + ω₀²t²).

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::potential::CentralInteraction;

/// Γ((m+1)/2) for even m ≥ 0, by the half-integer recurrence from
/// Γ(½) = √π. Only these arguments occur in the ε_n sum.
fn gamma_half_odd_over_two(m_even: u32) -> f64 {
    debug_assert!(m_even % 2 == 0);
    let mut g = std::f64::consts::PI.sqrt();
    let mut z = 0.5;
    for _ in 0..(m_even / 2) {
        g *= z;
        z += 1.0;
    }
    g
}

fn binom(a: u64, k: u64) -> f64 {
    let mut out = 1.0;
    for i in 1..=k {
        out *= (a - k + i) as f64 / i as f64;
    }
    out
}

/// Classical free-drift center of the relative packet, r_cl = −2p₀t/m (m).
pub fn classical_drift(cfg: &ExperimentConfig, t_s: f64) -> f64 {
    -2.0 * cfg.p0_si() * t_s / cfg.mass_kg()
}

/// Free-expansion spread of the relative packet, Δr₀² = 2σ²(1+ω₀²t²) (m²).
pub fn free_spread_sq(cfg: &ExperimentConfig, t_s: f64) -> f64 {
    let u = cfg.omega0() * t_s;
    2.0 * cfg.sigma_m() * cfg.sigma_m() * (1.0 + u * u)
}

/// Cubic correction ε₃(t) = rate·t for a weak interaction; for gravity the
/// rate is 6p₀/mL.
pub fn epsilon3(interaction: &CentralInteraction, t_s: f64) -> f64 {
    interaction.epsilon3_rate() * t_s
}

/// Strong-coupling form ε₃ = −3⟨r̂⟩/L, for callers with an analytic or
/// numeric ⟨r̂⟩ when the free-drift approximation is not trusted.
pub fn epsilon3_from_mean_r(mean_r_m: f64, separation_m: f64) -> f64 {
    -3.0 * mean_r_m / separation_m
}

/// n-th order correction for gravity-like (inverse-square) interactions:
///
/// ε_n(t) = (−1)ⁿ n(n−1) / (2√π L^(n−2)) ·
///          Σ_{m even, 0..n−2} C(n−2,m) r_cl^(n−m−2) (√2 Δr₀)^m Γ((m+1)/2)
pub fn epsilon_n(cfg: &ExperimentConfig, n: u32, t_s: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("epsilon_n is defined for n >= 3, got {n}")));
    }
    let l = cfg.separation_m();
    let r_cl = classical_drift(cfg, t_s);
    let spread = free_spread_sq(cfg, t_s).sqrt() * 2.0_f64.sqrt();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let nf = n as f64;
    let prefactor =
        sign * nf * (nf - 1.0) / (2.0 * std::f64::consts::PI.sqrt() * l.powi(n as i32 - 2));
    let mut sum = 0.0;
    let mut m = 0u32;
    while m <= n - 2 {
        sum += binom((n - 2) as u64, m as u64)
            * r_cl.powi((n - m - 2) as i32)
            * spread.powi(m as i32)
            * gamma_half_odd_over_two(m);
        m += 2;
    }
    Ok(prefactor * sum)
}

/// Quartic correction in closed form:
/// ε₄(t) = 24 p₀²t²/m²L² + 12 (σ²/L²)(1 + ω₀²t²).
pub fn epsilon4(cfg: &ExperimentConfig, t_s: f64) -> f64 {
    let l = cfg.separation_m();
    let drift = cfg.p0_si() * t_s / cfg.mass_kg();
    let u = cfg.omega0() * t_s;
    24.0 * drift * drift / (l * l)
        + 12.0 * cfg.sigma_m() * cfg.sigma_m() / (l * l) * (1.0 + u * u)
}

/// Entropy amplification: S = (1 + Σ_{n=3}^{N} ε_n(t)) · S(p₀ = 0).
pub fn predict_entropy_amplification(
    cfg: &ExperimentConfig,
    order: u32,
    t_s: f64,
    s0: f64,
) -> Result<f64> {
    let mut factor = 1.0;
    for n in 3..=order {
        factor += epsilon_n(cfg, n, t_s)?;
    }
    Ok(factor * s0)
}

/// Negativity amplification for the cubic truncation:
/// E = (1 + ½ε₃(t)) · E(p₀ = 0). The ½ is part of the fit and marks the
/// departure from the bare force-gradient conversion factor. Defined for
/// the gravitational ε₃ = 6p₀t/mL only; no quartic E-formula exists.
pub fn predict_negativity_amplification(cfg: &ExperimentConfig, t_s: f64, e0: f64) -> f64 {
    let eps3 = 6.0 * cfg.p0_si() * t_s / (cfg.mass_kg() * cfg.separation_m());
    (1.0 + 0.5 * eps3) * e0
}

/// The ε_n ladder of a configuration as functions of time, n = 3..=N.
///
/// Assumptions baked into the closed forms: weak field (the packet
/// center follows the free trajectory) and free-expansion spread; both
/// are gravity-like (inverse-square) specific for n >= 4.
#[derive(Debug, Clone)]
pub struct CorrectionSeries {
    cfg: ExperimentConfig,
    order: u32,
}

impl CorrectionSeries {
    pub fn new(cfg: ExperimentConfig, order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain(format!(
                "correction series needs order >= 2, got {order}"
            )));
        }
        Ok(Self { cfg, order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// [ε₃(t), ..., ε_N(t)]; empty for N = 2.
    pub fn epsilons(&self, t_s: f64) -> Vec<f64> {
        (3..=self.order)
            .map(|n| epsilon_n(&self.cfg, n, t_s).expect("n >= 3 by construction"))
            .collect()
    }

    /// 1 + Σ ε_n(t), the entropy amplification factor.
    pub fn entropy_factor(&self, t_s: f64) -> f64 {
        1.0 + self.epsilons(t_s).iter().sum::<f64>()
    }

    /// 1 + ½ε₃(t), the negativity amplification factor (cubic regime).
    pub fn negativity_factor(&self, t_s: f64) -> f64 {
        predict_negativity_amplification(&self.cfg, t_s, 1.0)
    }

    /// CSV: t, eps_3..eps_N, entropy and negativity amplification
    /// factors, and the momentum witness where defined (blank in the
    /// stencil-trimmed end rows and across ⟨p⟩ zero crossings).
    /// `p_trace` must be sampled exactly at `times`.
    pub fn write_csv<W: std::io::Write>(
        &self,
        w: &mut W,
        times: &[f64],
        p_trace: Option<&[f64]>,
    ) -> Result<()> {
        write!(w, "t_s")?;
        for n in 3..=self.order {
            write!(w, ",eps_{n}")?;
        }
        writeln!(w, ",entropy_amplification,negativity_amplification,witness_ratio_si")?;

        let witness: Vec<Option<f64>> = match p_trace {
            Some(p) if p.len() >= 5 && times.len() >= 2 => {
                let dt = times[1] - times[0];
                let points = momentum_witness(times[0], dt, p)?;
                // Re-align: two trimmed samples at each end.
                let mut full = vec![None; times.len()];
                for (k, point) in points.iter().enumerate() {
                    full[k + 2] = point.ratio;
                }
                full
            }
            _ => vec![None; times.len()],
        };

        for (i, &t) in times.iter().enumerate() {
            write!(w, "{t:.17e}")?;
            for eps in self.epsilons(t) {
                write!(w, ",{eps:.17e}")?;
            }
            write!(w, ",{:.17e},{:.17e}", self.entropy_factor(t), self.negativity_factor(t))?;
            match witness[i] {
                Some(r) => writeln!(w, ",{r:.17e}")?,
                None => writeln!(w, ",")?,
            }
        }
        Ok(())
    }
}

/// One point of the momentum-witness trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessPoint {
    pub t_s: f64,
    /// d²⟨p⟩/dt² ÷ ⟨p⟩ (s⁻²), or None where ⟨p⟩ crosses zero and the
    /// ratio is undefined.
    pub ratio: Option<f64>,
}

/// Momentum witness d²⟨p⟩/dt² ÷ ⟨p⟩ from a uniformly sampled ⟨p⟩ trace.
///
/// Constant (= ω²) for quadratic dynamics; any time dependence reveals
/// third-order coupling. Second derivatives use the five-point central
/// stencil, so two samples are trimmed from each end.
pub fn momentum_witness(t0_s: f64, dt_s: f64, p: &[f64]) -> Result<Vec<WitnessPoint>> {
    if dt_s <= 0.0 {
        return Err(Error::Domain(format!("witness needs dt > 0, got {dt_s:e}")));
    }
    if p.len() < 5 {
        return Err(Error::Domain(format!(
            "witness needs at least 5 samples, got {}",
            p.len()
        )));
    }
    let p_scale = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let gap_floor = 1e-8 * p_scale;
    let mut out = Vec::with_capacity(p.len() - 4);
    for i in 2..p.len() - 2 {
        let t = t0_s + i as f64 * dt_s;
        if p[i].abs() <= gap_floor {
            out.push(WitnessPoint { t_s: t, ratio: None });
            continue;
        }
        let d2 =
            (-p[i - 2] + 16.0 * p[i - 1] - 30.0 * p[i] + 16.0 * p[i + 1] - p[i + 2])
                / (12.0 * dt_s * dt_s);
        out.push(WitnessPoint { t_s: t, ratio: Some(d2 / p[i]) });
    }
    Ok(out)
}
