//! Uniformly accelerated atom: scenario parameters, hyperbolic trajectory,
//! Doppler-shifted mode frequency and the decaying coupling.
//!
//! Everything is dimensionless: frequencies in units of the acceleration
//! frequency `α = a/c`, times in `1/α`, lengths in `c/α`, with `ħ = k_B = c = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical inputs of one scenario, in α-units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioParams {
    /// Atomic transition frequency ω/α.
    #[cfg_attr(feature = "serde", serde(rename = "w"))]
    pub omega: f64,
    /// Cavity mode frequency ν/α.
    #[cfg_attr(feature = "serde", serde(rename = "f"))]
    pub nu: f64,
    /// Atom–field coupling g/α at the moment acceleration starts.
    #[cfg_attr(feature = "serde", serde(rename = "g_over_alpha"))]
    pub coupling: f64,
    /// Atomic injection rate r/α.
    #[cfg_attr(feature = "serde", serde(rename = "r_over_alpha"))]
    pub injection_rate: f64,
    /// Proper flight time αT through the cavity.
    #[cfg_attr(feature = "serde", serde(rename = "aT"))]
    pub flight_time: f64,
    /// Proper time ατᵢ at which the atom enters the cavity.
    #[cfg_attr(feature = "serde", serde(rename = "ati", default))]
    pub entry_time: f64,
    /// Laboratory time at which the acceleration starts, in 1/α.
    #[cfg_attr(feature = "serde", serde(default))]
    pub t0: f64,
}

impl ScenarioParams {
    pub fn new(omega: f64, nu: f64, flight_time: f64) -> Self {
        ScenarioParams {
            omega,
            nu,
            coupling: 1.0,
            injection_rate: 1.0,
            flight_time,
            entry_time: 0.0,
            t0: 0.0,
        }
    }

    pub fn with_coupling(mut self, g: f64) -> Self {
        self.coupling = g;
        self
    }

    pub fn with_rate(mut self, r: f64) -> Self {
        self.injection_rate = r;
        self
    }

    pub fn with_entry_time(mut self, ati: f64) -> Self {
        self.entry_time = ati;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, value: f64, ok: bool| {
            if ok && !value.is_nan() {
                Ok(())
            } else {
                Err(Error::ParameterOutOfRange { name, value })
            }
        };
        check("w", self.omega, self.omega > 0.0 && self.omega.is_finite())?;
        check("f", self.nu, self.nu > 0.0 && self.nu.is_finite())?;
        check("aT", self.flight_time, self.flight_time >= 0.0)?;
        check(
            "g_over_alpha",
            self.coupling,
            self.coupling >= 0.0 && self.coupling.is_finite(),
        )?;
        check(
            "r_over_alpha",
            self.injection_rate,
            self.injection_rate >= 0.0 && self.injection_rate.is_finite(),
        )?;
        check("ati", self.entry_time, self.entry_time.is_finite())?;
        check("t0", self.t0, self.t0.is_finite())
    }

    /// `(τᵢ, τᵢ + T)`
    pub fn window(&self) -> (f64, f64) {
        (self.entry_time, self.entry_time + self.flight_time)
    }

    /// Upper bound on the phase rate of every amplitude integrand at `tau`.
    pub fn phase_rate_bound(&self, tau: f64) -> f64 {
        self.omega + self.nu * (-tau).exp()
    }
}

/// A point on the hyperbolic world line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub t: f64,
    pub z: f64,
    pub v_over_c: f64,
}

const SERIES_CROSSOVER: f64 = 1e-4;

/// `t = t₀ + sinh τ`, `z = cosh τ − 1`, `v = tanh τ`.
pub fn trajectory(params: &ScenarioParams, tau: f64) -> TrajectoryPoint {
    let (sinh, cosh_m1, tanh) = if tau.abs() < SERIES_CROSSOVER {
        let t2 = tau * tau;
        (
            tau * (1.0 + t2 / 6.0 * (1.0 + t2 / 20.0)),
            0.5 * t2 * (1.0 + t2 / 12.0 * (1.0 + t2 / 30.0)),
            tau * (1.0 - t2 / 3.0 * (1.0 - 0.4 * t2)),
        )
    } else {
        (tau.sinh(), tau.cosh() - 1.0, tau.tanh())
    };
    TrajectoryPoint {
        tau,
        t: params.t0 + sinh,
        z: cosh_m1,
        v_over_c: tanh,
    }
}

/// Mode frequency seen by the atom, `ν e^{-ατ}`.
pub fn doppler_frequency(params: &ScenarioParams, tau: f64) -> f64 {
    params.nu * (-tau).exp()
}

/// Coupling in the atom frame, `g e^{-ατ}`.
pub fn coupling(params: &ScenarioParams, tau: f64) -> f64 {
    params.coupling * (-tau).exp()
}

/// Exponent `i(ν/α)e^{-ατ} ± iωτ − ατ` of the amplitude integrands;
/// `sign_omega = +1` is absorption, `-1` emission.
pub fn phase_exponent(params: &ScenarioParams, tau: f64, sign_omega: f64) -> Complex64 {
    Complex64::new(-tau, params.nu * (-tau).exp() + sign_omega * params.omega * tau)
}

/// Proper time at which the Doppler-shifted mode crosses the atomic
/// frequency, found by Newton iteration on `ω − ν e^{-ατ}`.
///
/// Exists only when `ν > ω`.
pub fn resonance_time(params: &ScenarioParams) -> Option<f64> {
    if params.nu <= params.omega {
        return None;
    }
    // concave increasing residual: Newton from τ = 0 approaches the root from below
    let mut tau = 0.0f64;
    for _ in 0..200 {
        let shifted = params.nu * (-tau).exp();
        let step = (params.omega - shifted) / shifted;
        tau -= step;
        if step.abs() <= 1e-15 * tau.abs().max(1.0) {
            break;
        }
    }
    Some(tau)
}
