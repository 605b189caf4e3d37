//! Two-pole transfer function of a filament circuit.
//!
//! `T(s) = (1/LC) / (s² + s R/L + 1/LC)`. In the overdamped regime both poles
//! are real and negative, and at the quoted component values they are about
//! fourteen decades apart, so the small pole is recovered from the pole
//! product rather than from the textbook quadratic formula.
//!
//! The angular frequency `omega` is in rad/s everywhere in this module; sweeps
//! take hertz and convert.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require, ModelError, Result};
use crate::monomer_circuit::FilamentCircuit;

/// Real poles of an overdamped circuit, `p1 < p2 < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poles {
    /// Large-magnitude pole.
    pub p1: f64,
    /// Small-magnitude pole, `≈ -1/(RC)` when heavily overdamped.
    pub p2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    /// `atan((1/LC) / ((ω - p1)(ω - p2)))` with real ω, evaluated as printed.
    Literal,
    /// Phase of `T(jω)`: `-atan(ω/|p1|) - atan(ω/|p2|)`.
    #[default]
    Standard,
}

impl std::str::FromStr for PhaseMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Self::Literal),
            "standard" => Ok(Self::Standard),
            other => Err(format!(
                "unknown phase mode `{other}` (expected literal|standard)"
            )),
        }
    }
}

impl std::fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::Standard => "standard",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayMethod {
    ClosedForm,
    /// Central difference of the phase with the given step in rad/s, or the
    /// default step `1e-4 · max(|p2|, ω)` when `None`.
    FiniteDifference(Option<f64>),
}

/// One sample of the channel response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponsePoint {
    pub freq_hz: f64,
    pub omega: f64,
    pub atten_db: f64,
    pub phase_deg: f64,
    pub delay_s: f64,
}

/// Both real roots of `s² + s R/L + 1/(LC)`.
pub fn compute_poles(c: &FilamentCircuit) -> Result<Poles> {
    c.check_overdamped()?;
    let half = c.r_eq / (2.0 * c.l_eq);
    let natural_sq = 1.0 / (c.l_eq * c.c_eq);
    // sqrt((R/2L)^2 - 1/LC) written relative to R/2L so the square never overflows
    let root = half * (1.0 - natural_sq / half / half).sqrt();
    let p1 = -(half + root);
    let p2 = natural_sq / p1;
    if !(p1 < p2 && p2 < 0.0) {
        let (damping_sq, natural_sq) = c.damping_terms();
        return Err(ModelError::NotOverdamped {
            damping_sq,
            natural_sq,
        });
    }
    Ok(Poles { p1, p2 })
}

/// Gain in dB: `20 log10(1/LC) - 20 log10 √(ω²+p1²) - 20 log10 √(ω²+p2²)`.
///
/// Each term stays in the log domain; at ω = 0 the three cancel to 0 dB.
pub fn attenuation_db(c: &FilamentCircuit, omega: f64) -> Result<f64> {
    let poles = compute_poles(c)?;
    Ok(attenuation_with_poles(c, &poles, omega))
}

fn attenuation_with_poles(c: &FilamentCircuit, poles: &Poles, omega: f64) -> f64 {
    -20.0 * (c.l_eq.log10() + c.c_eq.log10())
        - 20.0 * omega.hypot(poles.p1).log10()
        - 20.0 * omega.hypot(poles.p2).log10()
}

pub fn phase_deg(c: &FilamentCircuit, omega: f64, mode: PhaseMode) -> Result<f64> {
    let poles = compute_poles(c)?;
    Ok(phase_rad(c, &poles, omega, mode).to_degrees())
}

fn phase_rad(c: &FilamentCircuit, poles: &Poles, omega: f64, mode: PhaseMode) -> f64 {
    match mode {
        PhaseMode::Literal => {
            let natural_sq = 1.0 / (c.l_eq * c.c_eq);
            (natural_sq / (omega - poles.p1) / (omega - poles.p2)).atan()
        }
        PhaseMode::Standard => -(omega / -poles.p1).atan() - (omega / -poles.p2).atan(),
    }
}

/// Group delay `-dφ/dω` in seconds.
pub fn group_delay_s(
    c: &FilamentCircuit,
    omega: f64,
    mode: PhaseMode,
    method: DelayMethod,
) -> Result<f64> {
    let poles = compute_poles(c)?;
    delay_with_poles(c, &poles, omega, mode, method)
}

fn delay_with_poles(
    c: &FilamentCircuit,
    poles: &Poles,
    omega: f64,
    mode: PhaseMode,
    method: DelayMethod,
) -> Result<f64> {
    match method {
        DelayMethod::ClosedForm => match mode {
            PhaseMode::Standard => {
                let a = -poles.p1;
                let b = -poles.p2;
                Ok(a / (omega * omega + a * a) + b / (omega * omega + b * b))
            }
            PhaseMode::Literal => Err(ModelError::UnsupportedCombination),
        },
        DelayMethod::FiniteDifference(step) => {
            let h = match step {
                Some(h) => {
                    require("fd_step", h, h > 0.0, "> 0")?;
                    h
                }
                None => default_fd_step(poles, omega),
            };
            let lo = phase_rad(c, poles, omega - h, mode);
            let hi = phase_rad(c, poles, omega + h, mode);
            Ok((lo - hi) / (2.0 * h))
        }
    }
}

pub fn default_fd_step(poles: &Poles, omega: f64) -> f64 {
    1e-4 * (-poles.p2).max(omega.abs())
}

/// Group delay at DC of the standard phase: `1/|p1| + 1/|p2|`.
pub fn dc_group_delay_s(c: &FilamentCircuit) -> Result<f64> {
    group_delay_s(c, 0.0, PhaseMode::Standard, DelayMethod::ClosedForm)
}

/// Uniform inclusive grid of `n_points` frequencies in hertz.
pub fn frequency_grid(f_start_hz: f64, f_stop_hz: f64, n_points: usize) -> Result<Vec<f64>> {
    require("f_start_hz", f_start_hz, f_start_hz >= 0.0, ">= 0")?;
    require(
        "f_stop_hz",
        f_stop_hz,
        f_stop_hz > f_start_hz,
        "> f_start_hz",
    )?;
    if n_points < 2 {
        return Err(ModelError::ParameterDomain {
            name: "n_points",
            value: n_points as f64,
            requirement: ">= 2",
        });
    }
    let span = f_stop_hz - f_start_hz;
    let last = (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            if i == n_points - 1 {
                f_stop_hz
            } else {
                f_start_hz + i as f64 * span / last
            }
        })
        .collect())
}

/// Attenuation, phase and delay over a frequency grid.
///
/// Standard mode uses the closed-form delay; literal mode differentiates its
/// phase numerically with the default step.
pub fn sweep(
    c: &FilamentCircuit,
    f_start_hz: f64,
    f_stop_hz: f64,
    n_points: usize,
    mode: PhaseMode,
) -> Result<Vec<ResponsePoint>> {
    let poles = compute_poles(c)?;
    let method = match mode {
        PhaseMode::Standard => DelayMethod::ClosedForm,
        PhaseMode::Literal => DelayMethod::FiniteDifference(None),
    };
    frequency_grid(f_start_hz, f_stop_hz, n_points)?
        .into_iter()
        .map(|freq_hz| {
            let omega = 2.0 * PI * freq_hz;
            Ok(ResponsePoint {
                freq_hz,
                omega,
                atten_db: attenuation_with_poles(c, &poles, omega),
                phase_deg: phase_rad(c, &poles, omega, mode).to_degrees(),
                delay_s: delay_with_poles(c, &poles, omega, mode, method)?,
            })
        })
        .collect()
}
