//! JSON run configuration and its resolution into core types.

use std::path::Path;

use accelrad_core::amplitudes::{EdgeMode, InjectionMode, InjectionSchedule, Method, RateSet, ReedParams};
use accelrad_core::complex::ComplexScalar as Complex64;
use accelrad_core::kinematics::ScenarioParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::table::Format;

/// Upper bound on sweep grid size.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Amplitudes,
    Thermal,
    Squeezed,
    Reed,
    UnruhCompare,
    Oracle,
    Sweep,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Amplitudes => "amplitudes",
            ScenarioKind::Thermal => "thermal",
            ScenarioKind::Squeezed => "squeezed",
            ScenarioKind::Reed => "reed",
            ScenarioKind::UnruhCompare => "unruh-compare",
            ScenarioKind::Oracle => "oracle",
            ScenarioKind::Sweep => "sweep",
        }
    }
}

/// Physical inputs in α-units. `aT` absent means an unbounded flight.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsInput {
    pub w: Option<f64>,
    pub f: Option<f64>,
    pub g_over_alpha: Option<f64>,
    pub r_over_alpha: Option<f64>,
    #[serde(rename = "aT")]
    pub a_t: Option<f64>,
    pub ati: Option<f64>,
    pub t0: Option<f64>,
}

/// Laboratory inputs: rates in s⁻¹, angular frequencies in rad/s, times in s.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiInput {
    pub alpha: f64,
    pub omega: Option<f64>,
    pub nu: Option<f64>,
    pub g: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "T")]
    pub flight_time: Option<f64>,
    pub t_i: Option<f64>,
    pub t0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleInput {
    #[serde(default = "random_mode")]
    pub mode: InjectionMode,
    #[serde(default)]
    pub t_phi: f64,
}

fn random_mode() -> InjectionMode {
    InjectionMode::Random
}

impl Default for ScheduleInput {
    fn default() -> Self {
        ScheduleInput {
            mode: InjectionMode::Random,
            t_phi: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// Fock truncation; chosen from R₂/R₁ when absent.
    pub nmax: Option<usize>,
    pub dt_max: f64,
    pub tail_tol: f64,
    pub method: Method,
    pub edge_mode: EdgeMode,
    /// Evolve from vacuum for this long instead of solving for the steady state.
    pub evolve_time: Option<f64>,
    /// Cavity loss κ/α added to the absorption channel.
    pub loss: f64,
    /// Truncation of the joint atom–field space in the oracle scenario.
    pub oracle_nmax: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            nmax: None,
            dt_max: 0.01,
            tail_tol: 1e-8,
            method: Method::ClosedForm,
            edge_mode: EdgeMode::Full,
            evolve_time: None,
            loss: 0.0,
            oracle_nmax: 4,
        }
    }
}

/// Explicit master-equation coefficients, bypassing the amplitude calculation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesInput {
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "S1", default)]
    pub s1: [f64; 2],
    #[serde(rename = "S2", default)]
    pub s2: [f64; 2],
    #[serde(default)]
    pub delta: f64,
}

impl RatesInput {
    pub fn to_rate_set(self) -> RateSet {
        RateSet {
            absorption: self.r1,
            emission: self.r2,
            squeeze_1: Complex64::new(self.s1[0], self.s1[1]),
            squeeze_2: Complex64::new(self.s2[0], self.s2[1]),
            frequency_shift: self.delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "linear")]
    pub spacing: Spacing,
}

fn linear() -> Spacing {
    Spacing::Linear
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let s = k as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * s,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * s).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepInput {
    pub scenario: ScenarioKind,
    pub axes: Vec<Axis>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputInput {
    pub path: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub params: ParamsInput,
    #[serde(default)]
    pub si: Option<SiInput>,
    #[serde(default)]
    pub schedule: ScheduleInput,
    #[serde(default)]
    pub reed: Option<ReedParams>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub rates: Option<RatesInput>,
    #[serde(default)]
    pub sweep: Option<SweepInput>,
    #[serde(default)]
    pub output: OutputInput,
}

/// Names accepted as sweep axes.
pub const AXIS_NAMES: [&str; 7] = ["w", "f", "g_over_alpha", "r_over_alpha", "aT", "ati", "t0"];

pub fn set_param(p: &mut ScenarioParams, name: &str, value: f64) -> CliResult<()> {
    match name {
        "w" => p.omega = value,
        "f" => p.nu = value,
        "g_over_alpha" => p.coupling = value,
        "r_over_alpha" => p.injection_rate = value,
        "aT" => p.flight_time = value,
        "ati" => p.entry_time = value,
        "t0" => p.t0 = value,
        _ => return Err(CliError::Validation(format!("unknown sweep axis '{name}'"))),
    }
    Ok(())
}

/// Everything a scenario needs, in α-units.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub kind: ScenarioKind,
    pub params: ScenarioParams,
    pub schedule: InjectionSchedule,
    pub reed: Option<ReedParams>,
    pub numerics: Numerics,
    pub rates: Option<RateSet>,
    pub si: Option<SiInput>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Scenario actually evaluated per row.
    pub fn row_kind(&self) -> CliResult<ScenarioKind> {
        match (self.scenario, &self.sweep) {
            (ScenarioKind::Sweep, Some(s)) if s.scenario != ScenarioKind::Sweep => Ok(s.scenario),
            (ScenarioKind::Sweep, Some(_)) => Err(CliError::Validation("a sweep cannot sweep a sweep".into())),
            (ScenarioKind::Sweep, None) => Err(CliError::Validation("scenario 'sweep' needs a 'sweep' block".into())),
            (kind, _) => Ok(kind),
        }
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        let kind = self.row_kind()?;
        let p = &self.params;
        let mut params = ScenarioParams {
            omega: p.w.unwrap_or(f64::NAN),
            nu: p.f.unwrap_or(f64::NAN),
            coupling: p.g_over_alpha.unwrap_or(1.0),
            injection_rate: p.r_over_alpha.unwrap_or(1.0),
            flight_time: p.a_t.unwrap_or(f64::INFINITY),
            entry_time: p.ati.unwrap_or(0.0),
            t0: p.t0.unwrap_or(0.0),
        };
        if let Some(si) = &self.si {
            if !(si.alpha > 0.0 && si.alpha.is_finite()) {
                return Err(CliError::Validation(format!(
                    "si.alpha must be positive, got {}",
                    si.alpha
                )));
            }
            let a = si.alpha;
            if let Some(x) = si.omega {
                params.omega = x / a;
            }
            if let Some(x) = si.nu {
                params.nu = x / a;
            }
            if let Some(x) = si.g {
                params.coupling = x / a;
            }
            if let Some(x) = si.r {
                params.injection_rate = x / a;
            }
            if let Some(x) = si.flight_time {
                params.flight_time = x * a;
            }
            if let Some(x) = si.t_i {
                params.entry_time = x * a;
            }
            if let Some(x) = si.t0 {
                params.t0 = x * a;
            }
        }
        // explicit rates make the field scenarios independent of w and f
        let rates_only = self.rates.is_some() && matches!(kind, ScenarioKind::Thermal | ScenarioKind::Squeezed);
        if params.omega.is_nan() && !rates_only {
            return Err(CliError::Validation("missing w (params.w or si.omega)".into()));
        }
        if params.nu.is_nan() && kind != ScenarioKind::UnruhCompare && !rates_only {
            return Err(CliError::Validation("missing f (params.f or si.nu)".into()));
        }
        let schedule = match self.schedule.mode {
            InjectionMode::Random => InjectionSchedule::random(),
            InjectionMode::Regular => InjectionSchedule::regular(self.schedule.t_phi, params.nu),
        };
        if kind == ScenarioKind::Reed && self.reed.is_none() {
            return Err(CliError::Validation("scenario 'reed' needs a 'reed' block".into()));
        }
        let n = &self.numerics;
        if !(n.dt_max > 0.0) || !(n.tail_tol > 0.0) || !(n.loss >= 0.0) {
            return Err(CliError::Validation(
                "numerics: dt_max and tail_tol must be positive, loss non-negative".into(),
            ));
        }
        if let Some(t) = n.evolve_time {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Validation(format!(
                    "numerics.evolve_time must be finite and non-negative, got {t}"
                )));
            }
        }
        if let Some(s) = &self.sweep {
            let mut points: usize = 1;
            for axis in &s.axes {
                if !AXIS_NAMES.contains(&axis.name.as_str()) {
                    return Err(CliError::Validation(format!(
                        "unknown sweep axis '{}'; expected one of {}",
                        axis.name,
                        AXIS_NAMES.join(", ")
                    )));
                }
                if axis.count == 0 {
                    return Err(CliError::Validation(format!(
                        "sweep axis '{}' has an empty range",
                        axis.name
                    )));
                }
                if !(axis.start.is_finite() && axis.stop.is_finite()) {
                    return Err(CliError::Validation(format!(
                        "sweep axis '{}' has a non-finite bound",
                        axis.name
                    )));
                }
                if axis.spacing == Spacing::Log && !(axis.start > 0.0 && axis.stop > 0.0) {
                    return Err(CliError::Validation(format!(
                        "log axis '{}' needs positive bounds",
                        axis.name
                    )));
                }
                points = points.saturating_mul(axis.count);
            }
            if points > MAX_GRID_POINTS {
                return Err(CliError::Validation(format!(
                    "sweep has {points} points, limit is {MAX_GRID_POINTS}"
                )));
            }
        }
        Ok(Resolved {
            kind,
            params,
            schedule,
            reed: self.reed,
            numerics: n.clone(),
            rates: self.rates.map(RatesInput::to_rate_set),
            si: self.si.clone(),
        })
    }
}
