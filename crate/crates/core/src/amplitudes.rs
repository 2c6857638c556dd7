//! Absorption and emission amplitudes, coarse-grained rates, squeezing
//! coefficients and the vibrating-reed rates.
//!
//! With `τ` in units of `1/α` the absorption amplitude is
//!
//! ```text
//! I₁ = ∫_{τᵢ}^{τᵢ+T} exp[i f e^{-τ} + i w τ − τ] dτ,      I₂(w) = I₁(−w),
//! ```
//!
//! evaluated three ways: direct oscillatory quadrature, the incomplete-gamma
//! closed form, and the large-frequency expansion (gamma term plus the
//! entry-boundary term).

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_10, PI};

use num_complex::Complex64;

use crate::complex::LogComplex;
use crate::error::{Error, Result};
use crate::kinematics::{phase_exponent, ScenarioParams};
use crate::quad::{integrate, ordered_double, oscillatory_breakpoints, Tolerance};
use crate::specfun::{bessel_j, log_gamma, upper_incomplete_gamma};

/// Which transition amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Transition {
    /// `I₁`: ground-state atom absorbs a photon (rotating term).
    Absorption,
    /// `I₂`: ground-state atom emits a photon (counter-rotating term).
    Emission,
}

impl Transition {
    pub fn sign(self) -> f64 {
        match self {
            Transition::Absorption => 1.0,
            Transition::Emission => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Quadrature,
    ClosedForm,
    Asymptotic,
}

/// `Boundaryless` drops the switching contributions at the cavity edges and
/// keeps only the gamma-function term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EdgeMode {
    Full,
    Boundaryless,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub absorption: LogComplex,
    pub emission: LogComplex,
    pub method: Method,
    pub edge_mode: EdgeMode,
}

impl AmplitudeSet {
    /// `ln(|I₂|²/|I₁|²)`
    pub fn log_ratio(&self) -> f64 {
        self.emission.log_norm_sqr() - self.absorption.log_norm_sqr()
    }
}

/// Coefficients of the field master equation, in α-units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateSet {
    /// R₁
    pub absorption: f64,
    /// R₂
    pub emission: f64,
    pub squeeze_1: Complex64,
    pub squeeze_2: Complex64,
    /// Second-order frequency pull of the mode; only acts on coherences.
    pub frequency_shift: f64,
}

impl RateSet {
    pub fn thermal(absorption: f64, emission: f64) -> Self {
        RateSet {
            absorption,
            emission,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InjectionMode {
    Random,
    Regular,
}

/// Injection statistics. Regular injection at `t₀ᵢ = π mᵢ/ν + t_φ` locks
/// every atom to the common phase factor `Φ = e^{-2iν t_φ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectionSchedule {
    pub mode: InjectionMode,
    pub t_phi: f64,
    pub phase_factor: Complex64,
}

impl InjectionSchedule {
    pub fn random() -> Self {
        InjectionSchedule {
            mode: InjectionMode::Random,
            t_phi: 0.0,
            phase_factor: Complex64::new(0.0, 0.0),
        }
    }

    pub fn regular(t_phi: f64, nu: f64) -> Self {
        InjectionSchedule {
            mode: InjectionMode::Regular,
            t_phi,
            phase_factor: Complex64::from_polar(1.0, -2.0 * nu * t_phi),
        }
    }
}

/// Piezo-driven oscillating atom (vibrating reed).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReedParams {
    /// Modulation depth k·z₀.
    pub kz0: f64,
    /// Harmonic index.
    pub p: i32,
    /// Effective atomic decay rate γ/α.
    pub gamma_over_alpha: f64,
    /// Drive frequency ω₀/α.
    pub omega0: f64,
    /// Oscillation amplitude z₀ in c/α (informational; `kz0` is used).
    #[cfg_attr(feature = "serde", serde(default))]
    pub z0: f64,
}

impl ReedParams {
    /// `p = 0` needs `ω = ν`; `p ≠ 0` needs `ω + ν = p ω₀`.
    pub fn check_resonance(&self, base: &ScenarioParams) -> Result<()> {
        let (w, f) = (base.omega, base.nu);
        if self.p == 0 {
            if (w - f).abs() > 1e-9 * w.max(f) {
                return Err(Error::ResonanceViolation("p = 0 requires ω = ν"));
            }
        } else if (w + f - self.p as f64 * self.omega0).abs() > 1e-9 * (w + f) {
            return Err(Error::ResonanceViolation("p ≠ 0 requires ω + ν = p ω₀"));
        }
        Ok(())
    }
}

const QUADRATURE_MAX_NU: f64 = 1e5;
const SQUEEZING_MAX_NU: f64 = 1e4;

/// Integrand values carry a rounding error proportional to the size of the
/// phase, so the floor grows with `ν e^{-ατᵢ} + ωT`.
fn amplitude_tolerance(params: &ScenarioParams) -> Tolerance {
    let phase = params.nu * (-params.entry_time).exp() + params.omega * params.flight_time;
    Tolerance {
        abs: 1e-16,
        rel: 1e-12,
        l1_rel: 1e-15 + 1e-17 * phase,
    }
}

/// Direct oscillatory quadrature of the amplitude integral over `[τᵢ, τᵢ+T]`.
pub fn amplitude_quadrature(params: &ScenarioParams, which: Transition) -> Result<LogComplex> {
    params.validate()?;
    if params.nu > QUADRATURE_MAX_NU {
        return Err(Error::ParameterOutOfRange {
            name: "f",
            value: params.nu,
        });
    }
    if !params.flight_time.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "aT",
            value: params.flight_time,
        });
    }
    if params.flight_time == 0.0 {
        return Ok(LogComplex::ZERO);
    }
    let (a, b) = params.window();
    let pts = oscillatory_breakpoints(a, b, |t| params.phase_rate_bound(t), FRAC_PI_4);
    let s = which.sign();
    let out = integrate(
        |t: f64| phase_exponent(params, t, s).exp(),
        &pts,
        amplitude_tolerance(params),
        pts.len() * 64 + 10_000,
        "amplitude quadrature",
    )?;
    Ok(LogComplex::from_complex(out.value))
}

/// `(i/ν)(α/ν)^{-i s ω/α} e^{s π ω/2α}` for the signed frequency `s ω`.
fn gamma_prefactor(nu: f64, signed_w: f64) -> LogComplex {
    LogComplex::new(-nu.ln() + FRAC_PI_2 * signed_w, FRAC_PI_2 + signed_w * nu.ln())
}

fn closed_form_signed(params: &ScenarioParams, signed_w: f64) -> Result<LogComplex> {
    if params.flight_time == 0.0 {
        return Ok(LogComplex::ZERO);
    }
    let z = Complex64::new(1.0, -signed_w);
    let u = Complex64::new(0.0, -params.nu * (-params.entry_time).exp());
    let exit = u * (-params.flight_time).exp();
    let upper = upper_incomplete_gamma(z, exit)?;
    let lower = upper_incomplete_gamma(z, u)?;
    Ok(gamma_prefactor(params.nu, signed_w) * upper.sub(lower))
}

/// Incomplete-gamma closed form,
/// `I = (i/ν)(α/ν)^{∓iω/α} e^{±πω/2α} [Γ(z, u e^{-αT}) − Γ(z, u)]` with
/// `z = 1 ∓ iω/α` and `u = −i(ν/α)e^{-ατᵢ}`. An infinite flight time uses
/// `Γ(z, 0) = Γ(z)`.
pub fn amplitude_closed_form(params: &ScenarioParams, which: Transition) -> Result<LogComplex> {
    params.validate()?;
    closed_form_signed(params, which.sign() * params.omega)
}

/// Gamma-function term alone: the amplitude without switching contributions.
pub fn gamma_term(params: &ScenarioParams, which: Transition) -> Result<LogComplex> {
    let signed_w = which.sign() * params.omega;
    Ok(gamma_prefactor(params.nu, signed_w) * log_gamma(Complex64::new(1.0, -signed_w))?)
}

/// Leading switching contribution at the entry point,
/// `−i exp(i ν′ᵢ ± iωτᵢ − τᵢ)/(ν′ᵢ ∓ ω)` with `ν′ᵢ = ν e^{-ατᵢ}`.
pub fn boundary_term(params: &ScenarioParams, which: Transition) -> LogComplex {
    let signed_w = which.sign() * params.omega;
    let shifted = params.nu * (-params.entry_time).exp();
    let exponent = phase_exponent(params, params.entry_time, which.sign());
    LogComplex::from_exponent(exponent) * LogComplex::new(0.0, -FRAC_PI_2)
        / LogComplex::from_complex(Complex64::new(shifted - signed_w, 0.0))
}

/// Large-frequency expansion: gamma term plus entry-boundary term, with
/// relative error `O(αω/(ν−ω)²)`. `Boundaryless` returns the gamma term.
pub fn amplitude_asymptotic(params: &ScenarioParams, which: Transition, edge_mode: EdgeMode) -> Result<LogComplex> {
    params.validate()?;
    let gamma = gamma_term(params, which)?;
    if edge_mode == EdgeMode::Boundaryless {
        return Ok(gamma);
    }
    let shifted = params.nu * (-params.entry_time).exp();
    if shifted < 20.0 {
        return Err(Error::RegimeViolation("expansion needs ν e^{-ατᵢ} ≥ 20α"));
    }
    if params.omega < 2.0 {
        return Err(Error::RegimeViolation("expansion needs ω ≥ 2α"));
    }
    if params.flight_time < 10.0 {
        return Err(Error::RegimeViolation("expansion needs αT ≥ 10"));
    }
    if (shifted - params.omega).powi(2) <= params.omega {
        return Err(Error::RegimeViolation("expansion needs (ν − ω)² ≫ αω"));
    }
    Ok(gamma.add(boundary_term(params, which)))
}

/// Both amplitudes by one method.
pub fn amplitude_set(params: &ScenarioParams, method: Method, edge_mode: EdgeMode) -> Result<AmplitudeSet> {
    let (absorption, emission) = match (method, edge_mode) {
        (Method::Quadrature, EdgeMode::Full) => (
            amplitude_quadrature(params, Transition::Absorption)?,
            amplitude_quadrature(params, Transition::Emission)?,
        ),
        (Method::Quadrature, EdgeMode::Boundaryless) => {
            return Err(Error::RegimeViolation(
                "boundaryless amplitudes have no finite-window quadrature",
            ))
        }
        (Method::ClosedForm, EdgeMode::Full) => (
            amplitude_closed_form(params, Transition::Absorption)?,
            amplitude_closed_form(params, Transition::Emission)?,
        ),
        (Method::ClosedForm, EdgeMode::Boundaryless) | (Method::Asymptotic, _) => (
            amplitude_asymptotic(params, Transition::Absorption, edge_mode)?,
            amplitude_asymptotic(params, Transition::Emission, edge_mode)?,
        ),
    };
    Ok(AmplitudeSet {
        absorption,
        emission,
        method,
        edge_mode,
    })
}

/// `R₁,₂ = r g² |I₁,₂|²`; regular injection adds `S₁`, `S₂` and the
/// frequency pull.
pub fn rates(params: &ScenarioParams, schedule: &InjectionSchedule, amp: &AmplitudeSet) -> Result<RateSet> {
    let rg2 = params.injection_rate * params.coupling * params.coupling;
    let mut out = RateSet {
        absorption: rg2 * amp.absorption.norm_sqr(),
        emission: rg2 * amp.emission.norm_sqr(),
        ..Default::default()
    };
    if schedule.mode == InjectionMode::Regular && rg2 > 0.0 {
        let sq = second_order_coefficients(params, schedule)?;
        out.squeeze_1 = sq.squeeze_1;
        out.squeeze_2 = sq.squeeze_2;
        out.frequency_shift = sq.frequency_shift;
    }
    Ok(out)
}

/// `α/(2πω)`, valid for `ν ≫ ω ≫ α`.
pub fn ratio_asymptotic(params: &ScenarioParams) -> Result<f64> {
    if params.omega < 2.0 {
        return Err(Error::RegimeViolation("ratio needs ω ≥ 2α"));
    }
    if params.nu < 20.0 * params.omega {
        return Err(Error::RegimeViolation("ratio needs ν ≥ 20ω"));
    }
    Ok(cavity_factor(params.omega))
}

/// `α/(2πω)` without regime checks.
pub fn cavity_factor(omega: f64) -> f64 {
    1.0 / (2.0 * PI * omega)
}

/// `log₁₀ exp(−2πω/α)`.
pub fn unruh_factor_log10(params: &ScenarioParams) -> f64 {
    -2.0 * PI * params.omega / LN_10
}

/// `S₁`, `S₂` and the frequency pull from the time-ordered double integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrder {
    pub squeeze_1: Complex64,
    pub squeeze_2: Complex64,
    pub frequency_shift: f64,
}

/// Squeezing coefficients
/// `S₁,₂ = r g² Φ e^{-2iν/α} ∫dτ′ ∫^{τ′}dτ″ e^{iνe^{-τ′} ∓ iωτ′ − τ′} e^{iνe^{-τ″} ± iωτ″ − τ″}`.
pub fn squeezing_integrals(params: &ScenarioParams, schedule: &InjectionSchedule) -> Result<(Complex64, Complex64)> {
    let sq = second_order_coefficients(params, schedule)?;
    Ok((sq.squeeze_1, sq.squeeze_2))
}

pub fn second_order_coefficients(params: &ScenarioParams, schedule: &InjectionSchedule) -> Result<SecondOrder> {
    params.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    if params.nu > SQUEEZING_MAX_NU {
        return Err(Error::ParameterOutOfRange {
            name: "f",
            value: params.nu,
        });
    }
    if !params.flight_time.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "aT",
            value: params.flight_time,
        });
    }
    if params.flight_time == 0.0 {
        return Ok(SecondOrder {
            squeeze_1: zero,
            squeeze_2: zero,
            frequency_shift: 0.0,
        });
    }
    let (a, b) = params.window();
    let absorb = |t: f64| phase_exponent(params, t, 1.0).exp();
    let emit = |t: f64| phase_exponent(params, t, -1.0).exp();
    let out = ordered_double(
        a,
        b,
        |t| params.phase_rate_bound(t),
        |t: f64| [absorb(t), emit(t)],
        |t: f64, inner: &[Complex64; 2]| {
            let (h1, h2) = (absorb(t), emit(t));
            [h2 * inner[0], h1 * inner[1], h2 * inner[1].conj(), h1.conj() * inner[0]]
        },
        Tolerance {
            abs: 1e-18,
            rel: 1e-11,
            l1_rel: 1e-15,
        },
        "squeezing double integral",
    )?;
    let [d1, d2, d_emit, d_absorb] = out.value;
    let rg2 = params.injection_rate * params.coupling * params.coupling;
    let pref = schedule.phase_factor * Complex64::from_polar(rg2, -2.0 * params.nu);
    Ok(SecondOrder {
        squeeze_1: pref * d1,
        squeeze_2: pref * d2,
        frequency_shift: rg2 * (d_emit.im + d_absorb.im),
    })
}

/// Vibrating-reed rates `r g²/(γ+α)² |J_p(kz₀)|²` (both R₁ and R₂) with
/// squeezing cross terms of magnitude `r g²/(γ+α)² |J_p J₀|`.
///
/// The product `J_p(−kz₀)J_p(kz₀) = (−1)^p J_p(kz₀)²` is reported by
/// magnitude so rates stay non-negative.
pub fn reed_rates(base: &ScenarioParams, reed: &ReedParams) -> Result<RateSet> {
    base.validate()?;
    reed.check_resonance(base)?;
    if !(reed.gamma_over_alpha + 1.0 > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "gamma_over_alpha",
            value: reed.gamma_over_alpha,
        });
    }
    let scale = base.injection_rate * base.coupling * base.coupling / (reed.gamma_over_alpha + 1.0).powi(2);
    let jp = bessel_j(reed.p, reed.kz0)?;
    let j0 = bessel_j(0, reed.kz0)?;
    let rate = scale * jp * jp;
    let cross = Complex64::new(scale * (jp * j0).abs(), 0.0);
    Ok(RateSet {
        absorption: rate,
        emission: rate,
        squeeze_1: cross,
        squeeze_2: cross,
        frequency_shift: 0.0,
    })
}

/// Resonant gain factor `[ν/(γ+α)]²` of the reed over counter-rotating emission.
pub fn resonant_enhancement(base: &ScenarioParams, reed: &ReedParams) -> Result<f64> {
    let width = reed.gamma_over_alpha + 1.0;
    if !(width > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "gamma_over_alpha",
            value: reed.gamma_over_alpha,
        });
    }
    Ok((base.nu / width).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn empty_window_is_zero() {
        let p = ScenarioParams::new(5.0, 100.0, 0.0);
        assert!(amplitude_quadrature(&p, Transition::Absorption).unwrap().is_zero());
        assert!(amplitude_closed_form(&p, Transition::Emission).unwrap().is_zero());
        let (s1, s2) = squeezing_integrals(&p, &InjectionSchedule::regular(0.3, 100.0)).unwrap();
        assert_eq!((s1.norm(), s2.norm()), (0.0, 0.0));
    }

    #[test]
    fn closed_form_matches_quadrature_reference_point() {
        let p = ScenarioParams::new(5.0, 100.0, 10.0);
        for which in [Transition::Absorption, Transition::Emission] {
            let q = amplitude_quadrature(&p, which).unwrap().to_complex();
            let c = amplitude_closed_form(&p, which).unwrap().to_complex();
            assert!(rel(c, q) < 1e-8, "{which:?}: {c} vs {q}");
        }
    }

    #[test]
    fn emission_is_absorption_at_negative_frequency() {
        let p = ScenarioParams::new(3.7, 250.0, 12.0);
        let a = closed_form_signed(&p, -p.omega).unwrap();
        let b = amplitude_closed_form(&p, Transition::Emission).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn boundary_term_of_emission_has_modulus_one_over_nu_plus_omega() {
        let p = ScenarioParams::new(5.0, 500.0, 20.0);
        let b = boundary_term(&p, Transition::Emission);
        assert!((b.log_mag.exp() - 1.0 / 505.0).abs() < 1e-15);
    }

    #[test]
    fn boundaryless_ratio_is_unruh_factor() {
        for w in [0.5, 3.0, 300.0] {
            let p = ScenarioParams::new(w, 1000.0, 20.0);
            let set = amplitude_set(&p, Method::Asymptotic, EdgeMode::Boundaryless).unwrap();
            assert!((set.log_ratio() + 2.0 * PI * w).abs() < 1e-10);
        }
    }

    #[test]
    fn infinite_flight_time_uses_complete_gamma() {
        let mut p = ScenarioParams::new(5.0, 500.0, f64::INFINITY);
        let inf = amplitude_closed_form(&p, Transition::Absorption).unwrap().to_complex();
        p.flight_time = 40.0;
        let long = amplitude_closed_form(&p, Transition::Absorption).unwrap().to_complex();
        assert!(rel(inf, long) < 1e-12);
        p.flight_time = f64::INFINITY;
        let asym = amplitude_asymptotic(&p, Transition::Absorption, EdgeMode::Full)
            .unwrap()
            .to_complex();
        // O(αω/(ν−ω)²) ≈ 2e-5
        assert!(rel(asym, inf) < 1e-3, "{}", rel(asym, inf));
    }

    #[test]
    fn asymptotic_regime_enforced() {
        let p = ScenarioParams::new(1.0, 500.0, 20.0);
        assert!(matches!(
            amplitude_asymptotic(&p, Transition::Absorption, EdgeMode::Full),
            Err(Error::RegimeViolation(_))
        ));
        assert!(amplitude_asymptotic(&p, Transition::Absorption, EdgeMode::Boundaryless).is_ok());
        assert!(amplitude_set(&p, Method::Quadrature, EdgeMode::Boundaryless).is_err());
    }

    #[test]
    fn rates_scale_with_injection_and_vanish_without_coupling() {
        let p = ScenarioParams::new(5.0, 100.0, 10.0).with_coupling(0.01).with_rate(3.0);
        let amp = amplitude_set(&p, Method::ClosedForm, EdgeMode::Full).unwrap();
        let r1 = rates(&p, &InjectionSchedule::random(), &amp).unwrap();
        let r2 = rates(&p.with_rate(6.0), &InjectionSchedule::random(), &amp).unwrap();
        assert!((r2.absorption / r1.absorption - 2.0).abs() < 1e-14);
        assert!((r2.emission / r1.emission - 2.0).abs() < 1e-14);
        assert_eq!(r1.squeeze_1, Complex64::new(0.0, 0.0));
        let z = rates(&p.with_coupling(0.0), &InjectionSchedule::regular(0.1, 100.0), &amp).unwrap();
        assert_eq!((z.absorption, z.emission, z.squeeze_1.norm()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn ratio_and_unruh_factor_values() {
        let p = ScenarioParams::new(20.0, 2000.0, 15.0);
        assert!((ratio_asymptotic(&p).unwrap() - 7.957_747e-3).abs() < 1e-9);
        assert!((cavity_factor(1.0 / (2.0 * PI)) - 1.0).abs() < 1e-15);
        assert!(ratio_asymptotic(&ScenarioParams::new(20.0, 100.0, 1.0)).is_err());
        let one = ScenarioParams::new(1.0, 100.0, 1.0);
        assert!((10f64.powf(unruh_factor_log10(&one)) - 1.867_442_731_707_988_8e-3).abs() < 1e-15);
        let lab = ScenarioParams::new(100.0, 1e4, 1.0);
        assert!((unruh_factor_log10(&lab) + 272.875).abs() < 1e-2);
        assert!(unruh_factor_log10(&ScenarioParams::new(1e-12, 1.0, 1.0)).abs() < 1e-11);
    }

    #[test]
    fn squeezing_phase_only_rotates() {
        let p = ScenarioParams::new(2.0, 15.0, 4.0).with_coupling(0.1);
        let (a1, a2) = squeezing_integrals(&p, &InjectionSchedule::regular(0.0, p.nu)).unwrap();
        let (b1, b2) = squeezing_integrals(&p, &InjectionSchedule::regular(0.37, p.nu)).unwrap();
        assert!((a1.norm() - b1.norm()).abs() < 1e-12 * a1.norm());
        assert!((a2.norm() - b2.norm()).abs() < 1e-12 * a2.norm());
        let (r1, r2) = squeezing_integrals(&p, &InjectionSchedule::random()).unwrap();
        assert_eq!((r1.norm(), r2.norm()), (0.0, 0.0));
    }

    #[test]
    fn reed_limits_and_resonance() {
        let base = ScenarioParams::new(5.0, 500.0, 10.0).with_coupling(0.1).with_rate(2.0);
        let scale = 2.0 * 0.01 / 4.0;
        let emit = ReedParams {
            kz0: 0.0,
            p: 1,
            gamma_over_alpha: 1.0,
            omega0: 505.0,
            z0: 0.0,
        };
        assert_eq!(reed_rates(&base, &emit).unwrap().emission, 0.0);
        let peak = reed_rates(
            &base,
            &ReedParams {
                kz0: 1.841_183_781_340_659,
                ..emit
            },
        )
        .unwrap();
        assert!((peak.emission / scale - 0.338_6).abs() < 1e-4);
        let absorb_base = ScenarioParams::new(500.0, 500.0, 10.0)
            .with_coupling(0.1)
            .with_rate(2.0);
        let absorb = ReedParams {
            kz0: 0.0,
            p: 0,
            gamma_over_alpha: 1.0,
            omega0: 505.0,
            z0: 0.0,
        };
        assert!((reed_rates(&absorb_base, &absorb).unwrap().absorption - scale).abs() < 1e-17);
        assert!(matches!(reed_rates(&base, &absorb), Err(Error::ResonanceViolation(_))));
        let off = ReedParams { omega0: 500.0, ..emit };
        assert!(matches!(reed_rates(&base, &off), Err(Error::ResonanceViolation(_))));
        // odd p at negative argument still gives a non-negative rate
        let odd = ReedParams {
            kz0: -1.3,
            p: 3,
            omega0: 505.0 / 3.0,
            ..emit
        };
        assert!(reed_rates(&base, &odd).unwrap().emission > 0.0);
    }

    #[test]
    fn resonant_enhancement_values() {
        let base = ScenarioParams::new(5.0, 100.0, 10.0);
        let reed = ReedParams {
            kz0: 1.0,
            p: 1,
            gamma_over_alpha: 9.0,
            omega0: 105.0,
            z0: 0.0,
        };
        assert!((resonant_enhancement(&base, &reed).unwrap() - 100.0).abs() < 1e-12);
        let wide = ReedParams {
            gamma_over_alpha: 1e12,
            ..reed
        };
        assert!(resonant_enhancement(&base, &wide).unwrap() < 1e-19);
    }
}
