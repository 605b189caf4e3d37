//! Charge propagation velocity along a filament and the resulting throughput.
//!
//! The velocity decays from `β/α · (1 + 4Ω²/24)` at `t = 0` towards the plateau
//! `β/α` as the pulse term `dη/dτ` dies out. Throughput counts one bit per
//! elementary charge in flight on one micrometre of filament.

use serde::{Deserialize, Serialize};

use crate::error::{require, Result};
use crate::monomer_circuit::FilamentCircuit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransportParams {
    /// Input-voltage factor.
    #[serde(rename = "Omega")]
    pub omega: f64,
    /// `6 R1 / R`, longitudinal ionic resistance ratio.
    pub mu1: f64,
    /// `24 R2 / R`, radial ionic resistance ratio.
    pub mu2: f64,
    /// Velocity timescale in seconds. Fitted; see [`literal_alpha`].
    #[serde(rename = "alpha_s")]
    pub alpha: f64,
    /// Twice the monomer length, in metres.
    #[serde(rename = "beta_m")]
    pub beta: f64,
    /// Elementary charges carried per monomer.
    pub charge_per_monomer: f64,
    pub monomers_per_um: f64,
    /// Velocity is forced to zero from this time on.
    #[serde(with = "crate::serde_opt")]
    pub t_stop_s: Option<f64>,
}

impl Default for TransportParams {
    fn default() -> Self {
        Self {
            omega: 2.3810,
            mu1: 10.0,
            mu2: 1.0,
            alpha: 7.0e-7,
            beta: 1.08e-8,
            charge_per_monomer: 4.0,
            monomers_per_um: 370.0,
            t_stop_s: Some(60e-6),
        }
    }
}

impl TransportParams {
    pub fn validate(&self) -> Result<()> {
        require("Omega", self.omega, self.omega > 0.0, "> 0")?;
        require("mu1", self.mu1, self.mu1 >= 0.0, ">= 0")?;
        require("mu2", self.mu2, self.mu2 > 0.0, "> 0")?;
        require("alpha_s", self.alpha, self.alpha > 0.0, "> 0")?;
        require("beta_m", self.beta, self.beta > 0.0, "> 0")?;
        require(
            "charge_per_monomer",
            self.charge_per_monomer,
            self.charge_per_monomer > 0.0,
            "> 0",
        )?;
        require(
            "monomers_per_um",
            self.monomers_per_um,
            self.monomers_per_um > 0.0,
            "> 0",
        )?;
        if let Some(t) = self.t_stop_s {
            require("t_stop_s", t, t > 0.0, "> 0")?;
        }
        Ok(())
    }

    fn decay_rate(&self) -> f64 {
        4.0 * self.mu2 / 3.0
    }

    fn saturation(&self) -> f64 {
        4.0 * self.mu1 * self.omega * self.omega / (5.0 * self.mu2)
    }

    /// Time after which the pulse term no longer changes the velocity at
    /// double precision.
    fn knee_s(&self) -> f64 {
        let amplitude = 4.0 * self.omega * self.omega / 24.0;
        let tau = (amplitude / 1e-18).ln().max(0.0) / self.decay_rate();
        tau * 24.0 * self.alpha
    }
}

/// The literal timescale `R/L + CR` of the filament circuit.
///
/// The two terms have units 1/s and s, and at the quoted component values the
/// result gives velocities orders of magnitude away from the measured
/// 0.03 m/s. Provided for comparison only; the default `alpha_s` is fitted.
pub fn literal_alpha(c: &FilamentCircuit) -> f64 {
    c.r_eq / c.l_eq + c.c_eq * c.r_eq
}

/// `dη/dτ = 4Ω² e^{-4τμ2/3} / (1 + (4μ1Ω²/5μ2)(1 - e^{-4τμ2/3}))`.
pub fn eta_prime(tau: f64, p: &TransportParams) -> f64 {
    let decay = (-p.decay_rate() * tau).exp();
    4.0 * p.omega * p.omega * decay / (1.0 + p.saturation() * (1.0 - decay))
}

/// Velocity of charge propagation in m/s at time `t` seconds.
pub fn velocity(t: f64, p: &TransportParams) -> f64 {
    if p.t_stop_s.is_some_and(|stop| t >= stop) {
        return 0.0;
    }
    let tau = t / (24.0 * p.alpha);
    p.beta / p.alpha * (1.0 + eta_prime(tau, p) / 24.0)
}

/// Long-time velocity `β/α` (ignores any stop time).
pub fn plateau_velocity(p: &TransportParams) -> f64 {
    p.beta / p.alpha
}

/// In-flight charge capacity in bits for a filament of `length_um`.
pub fn charge_capacity(length_um: f64, p: &TransportParams) -> f64 {
    p.charge_per_monomer * p.monomers_per_um * length_um
}

/// Maximum throughput in bit/s: velocity in µm/s times the capacity of 1 µm.
pub fn max_throughput(t: f64, p: &TransportParams) -> f64 {
    velocity(t, p) * 1e6 * charge_capacity(1.0, p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputPoint {
    pub t_s: f64,
    pub v_m_s: f64,
    pub throughput_bps: f64,
}

/// Throughput curve on an inclusive uniform time grid.
pub fn throughput_curve(
    t_start_s: f64,
    t_stop_s: f64,
    n_points: usize,
    p: &TransportParams,
) -> Result<Vec<ThroughputPoint>> {
    p.validate()?;
    require("t_start_s", t_start_s, t_start_s >= 0.0, ">= 0")?;
    require("t_end_s", t_stop_s, t_stop_s > t_start_s, "> t_start_s")?;
    require("n_points", n_points as f64, n_points >= 2, ">= 2")?;
    let last = (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            let t_s = if i == n_points - 1 {
                t_stop_s
            } else {
                t_start_s + i as f64 * (t_stop_s - t_start_s) / last
            };
            let v_m_s = velocity(t_s, p);
            ThroughputPoint {
                t_s,
                v_m_s,
                throughput_bps: v_m_s * 1e6 * charge_capacity(1.0, p),
            }
        })
        .collect())
}

/// Outcome of pushing a message through one filament.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transmission {
    /// Time in seconds to deliver every bit.
    Delivered(f64),
    /// The velocity stops before the whole message gets through.
    NotDeliverable { capacity_bits: f64 },
}

impl Transmission {
    pub fn seconds(self) -> Option<f64> {
        match self {
            Self::Delivered(t) => Some(t),
            Self::NotDeliverable { .. } => None,
        }
    }
}

const REL_TOL: f64 = 1e-6;

/// Smallest `T` with `∫₀ᵀ max_throughput(t) dt >= message_bits`.
pub fn transmission_time(message_bits: u64, p: &TransportParams) -> Result<Transmission> {
    p.validate()?;
    require(
        "message_bits",
        message_bits as f64,
        message_bits >= 1,
        ">= 1",
    )?;
    let bits = message_bits as f64;
    let integrator = ThroughputIntegral::new(p);

    let mut hi = bits / (plateau_velocity(p) * 1e6 * charge_capacity(1.0, p));
    if let Some(stop) = p.t_stop_s {
        let capacity_bits = integrator.up_to(stop);
        if capacity_bits < bits {
            return Ok(Transmission::NotDeliverable { capacity_bits });
        }
        hi = hi.min(stop);
    }
    let mut lo = bits / max_throughput(0.0, p);
    if integrator.up_to(lo) >= bits {
        return Ok(Transmission::Delivered(lo));
    }

    // Newton on F(T) = ∫₀ᵀ TM - bits, F' = TM(T) > 0, kept inside [lo, hi].
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = integrator.up_to(t) - bits;
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = max_throughput(t, p);
        let mut next = if slope > 0.0 { t - f / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-12 * t || hi - lo <= 1e-12 * hi {
            t = next;
            break;
        }
        t = next;
    }
    Ok(Transmission::Delivered(t))
}

/// Adaptive Simpson integration of the throughput curve with the constant
/// plateau past the knee integrated in closed form.
struct ThroughputIntegral<'a> {
    p: &'a TransportParams,
    knee: f64,
    plateau_bps: f64,
}

impl<'a> ThroughputIntegral<'a> {
    fn new(p: &'a TransportParams) -> Self {
        Self {
            p,
            knee: p.knee_s(),
            plateau_bps: plateau_velocity(p) * 1e6 * charge_capacity(1.0, p),
        }
    }

    fn up_to(&self, t: f64) -> f64 {
        let end = match self.p.t_stop_s {
            Some(stop) => t.min(stop),
            None => t,
        };
        if end <= 0.0 {
            return 0.0;
        }
        let curved_end = end.min(self.knee);
        let tail = (end - curved_end) * self.plateau_bps;
        self.simpson(0.0, curved_end) + tail
    }

    fn simpson(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let f = |t: f64| max_throughput(t, self.p);
        let (fa, fb) = (f(a), f(b));
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        // absolute target relative to a crude magnitude of the integral
        let eps = REL_TOL * 1e-4 * whole.abs().max(f64::MIN_POSITIVE);
        self.refine(a, b, fa, fm, fb, whole, eps, 48)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = max_throughput(lm, self.p);
        let frm = max_throughput(rm, self.p);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        self.refine(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + self.refine(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
}
