//! Microscopic reference calculations on the joint atom ⊗ field space.
//!
//! Nothing here uses the amplitude formulas: phases are rebuilt from the
//! world line, and the per-atom change of the field comes from the
//! second-order double commutator evaluated by brute-force quadrature.
//! The joint basis is `|b,n⟩ → n`, `|a,n⟩ → (nmax+1) + n`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::amplitudes::{InjectionMode, InjectionSchedule};
use crate::error::{Error, Result};
use crate::field::{CMatrix, FockDensityMatrix};
use crate::kinematics::{coupling, doppler_frequency, trajectory, ScenarioParams};
use crate::quad::{integrate, ordered_double, oscillatory_breakpoints, Tolerance};

const ORACLE_TOL: Tolerance = Tolerance {
    abs: 1e-16,
    rel: 1e-11,
    l1_rel: 1e-15,
};

/// State of one atom together with the truncated cavity field.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    nmax: usize,
    entries: CMatrix,
}

impl JointState {
    /// `|b⟩⟨b| ⊗ ρ`
    pub fn ground_with(field: &FockDensityMatrix) -> Self {
        let dim = field.nmax() + 1;
        let mut entries = CMatrix::zeros(2 * dim, 2 * dim);
        entries.view_mut((0, 0), (dim, dim)).copy_from(field.entries());
        JointState {
            nmax: field.nmax(),
            entries,
        }
    }

    pub fn from_entries(nmax: usize, entries: CMatrix) -> Result<Self> {
        let dim = 2 * (nmax + 1);
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::TruncationTooSmall(nmax));
        }
        Ok(JointState { nmax, entries })
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Trace over the atom.
    pub fn field_part(&self) -> CMatrix {
        trace_atom(&self.entries, self.nmax + 1)
    }

    /// Excited-state population, tracing over the field.
    pub fn excited_population(&self) -> f64 {
        let dim = self.nmax + 1;
        (0..dim).map(|n| self.entries[(dim + n, dim + n)].re).sum()
    }
}

fn trace_atom(joint: &CMatrix, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |n, m| joint[(n, m)] + joint[(dim + n, dim + m)])
}

/// Field phase `−ν t(τ) + k z(τ)` for a co-propagating mode, from the world line.
fn mode_phase(params: &ScenarioParams, tau: f64) -> f64 {
    let p = trajectory(params, tau);
    params.nu * (p.z - p.t)
}

/// `V(τ) = g(τ)[a e^{-iνt+ikz} + a† e^{iνt−ikz}][σ e^{-iωτ} + σ† e^{iωτ}]`
/// on the joint basis, with all four rotating and counter-rotating terms.
pub fn interaction_matrix(params: &ScenarioParams, tau: f64, nmax: usize) -> CMatrix {
    let dim = nmax + 1;
    let mut v = CMatrix::zeros(2 * dim, 2 * dim);
    let g = coupling(params, tau);
    if g == 0.0 {
        return v;
    }
    let phi = mode_phase(params, tau);
    let lower = Complex64::from_polar(g, phi + params.omega * tau);
    let raise = Complex64::from_polar(g, -phi + params.omega * tau);
    for n in 0..nmax {
        let s = ((n + 1) as f64).sqrt();
        // a σ†: |b,n+1⟩ → |a,n⟩
        v[(dim + n, n + 1)] = lower * s;
        v[(n + 1, dim + n)] = lower.conj() * s;
        // a† σ†: |b,n⟩ → |a,n+1⟩
        v[(dim + n + 1, n)] = raise * s;
        v[(n, dim + n + 1)] = raise.conj() * s;
    }
    v
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `−∫dτ′ [V(τ′), [∫^{τ′}V, ρ₀]]` for every initial joint state in `initial`,
/// sharing the quadrature.
fn second_order_changes(params: &ScenarioParams, nmax: usize, initial: &[CMatrix]) -> Result<Vec<CMatrix>> {
    params.validate()?;
    if !params.flight_time.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "aT",
            value: params.flight_time,
        });
    }
    let size = 2 * (nmax + 1);
    let zero = || initial.iter().map(|_| CMatrix::zeros(size, size)).collect::<Vec<_>>();
    let g2 = params.coupling * params.coupling;
    if params.flight_time == 0.0 || g2 == 0.0 || initial.is_empty() {
        return Ok(zero());
    }
    let unit = params.with_coupling(1.0);
    let (a, b) = params.window();
    let count = initial.len();
    let out = ordered_double(
        a,
        b,
        |t| params.phase_rate_bound(t),
        |t: f64| interaction_matrix(&unit, t, nmax),
        |t: f64, acc: &CMatrix| {
            let v = interaction_matrix(&unit, t, nmax);
            let mut stacked = CMatrix::zeros(size, size * count);
            for (k, rho) in initial.iter().enumerate() {
                stacked
                    .view_mut((0, k * size), (size, size))
                    .copy_from(&commutator(&v, &commutator(acc, rho)));
            }
            stacked
        },
        ORACLE_TOL,
        "per-atom double commutator",
    )?;
    Ok((0..count)
        .map(|k| out.value.view((0, k * size), (size, size)) * Complex64::new(-g2, 0.0))
        .collect())
}

/// Change of the joint state due to one ground-state atom crossing the cavity.
pub fn per_atom_joint(field: &FockDensityMatrix, params: &ScenarioParams) -> Result<JointState> {
    let start = JointState::ground_with(field);
    let mut out = second_order_changes(params, field.nmax(), &[start.entries])?;
    Ok(JointState {
        nmax: field.nmax(),
        entries: out.pop().unwrap(),
    })
}

/// Entry times over which the map is averaged: a single locked phase for
/// regular injection, a quarter-period pair for random injection (this
/// removes every phase-sensitive term).
fn injection_times(params: &ScenarioParams, schedule: &InjectionSchedule) -> Vec<f64> {
    match schedule.mode {
        InjectionMode::Regular => alloc::vec![schedule.t_phi],
        InjectionMode::Random => alloc::vec![params.t0, params.t0 + 0.5 * PI / params.nu],
    }
}

fn averaged_field_changes(
    params: &ScenarioParams,
    schedule: &InjectionSchedule,
    nmax: usize,
    fields: &[CMatrix],
) -> Result<Vec<CMatrix>> {
    let dim = nmax + 1;
    let initial: Vec<CMatrix> = fields
        .iter()
        .map(|f| {
            let mut j = CMatrix::zeros(2 * dim, 2 * dim);
            j.view_mut((0, 0), (dim, dim)).copy_from(f);
            j
        })
        .collect();
    let times = injection_times(params, schedule);
    let weight = Complex64::new(1.0 / times.len() as f64, 0.0);
    let mut total: Vec<CMatrix> = fields.iter().map(|_| CMatrix::zeros(dim, dim)).collect();
    for t0 in times {
        let p = ScenarioParams { t0, ..*params };
        for (acc, joint) in total.iter_mut().zip(second_order_changes(&p, nmax, &initial)?) {
            *acc += trace_atom(&joint, dim) * weight;
        }
    }
    Ok(total)
}

/// Field change `δρ` left behind by one atom.
pub fn per_atom_map(
    field: &FockDensityMatrix,
    params: &ScenarioParams,
    schedule: &InjectionSchedule,
) -> Result<CMatrix> {
    let mut out = averaged_field_changes(params, schedule, field.nmax(), core::slice::from_ref(field.entries()))?;
    Ok(out.pop().unwrap())
}

/// The per-atom map as a matrix on row-major vectorised ρ
/// (`index = n·(nmax+1) + m`), the layout of `Generator::to_dense`.
pub fn per_atom_superoperator(params: &ScenarioParams, schedule: &InjectionSchedule, nmax: usize) -> Result<CMatrix> {
    let dim = nmax + 1;
    let basis: Vec<CMatrix> = (0..dim * dim)
        .map(|k| {
            let mut e = CMatrix::zeros(dim, dim);
            e[(k / dim, k % dim)] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let images = averaged_field_changes(params, schedule, nmax, &basis)?;
    let mut out = CMatrix::zeros(dim * dim, dim * dim);
    for (col, image) in images.iter().enumerate() {
        for n in 0..dim {
            for m in 0..dim {
                out[(n * dim + m, col)] = image[(n, m)];
            }
        }
    }
    Ok(out)
}

/// Probability that an atom entering in `|b⟩` with the field in vacuum
/// leaves excited.
pub fn atomic_excitation(params: &ScenarioParams, nmax: usize) -> Result<f64> {
    Ok(per_atom_joint(&FockDensityMatrix::vacuum(nmax), params)?.excited_population())
}

/// Dressed ground state `ψ₀ = c0|b,0⟩ + c1|a,1⟩` in the two-level
/// approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedAmplitudes {
    pub c0: Complex64,
    pub c1: Complex64,
    /// `g(τ)/(ν′(τ) + ω)`
    pub mixing: f64,
}

pub fn dressed_states(params: &ScenarioParams, tau: f64) -> Result<DressedAmplitudes> {
    let gap = doppler_frequency(params, tau) + params.omega;
    if !(gap > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "w",
            value: params.omega,
        });
    }
    let mixing = coupling(params, tau) / gap;
    let norm = (1.0 + mixing * mixing).sqrt();
    Ok(DressedAmplitudes {
        c0: Complex64::new(1.0 / norm, 0.0),
        c1: Complex64::new(-mixing / norm, 0.0),
        mixing,
    })
}

/// Splitting of the two dressed levels from exact diagonalisation of
/// `[[0, g], [g, ω + ν′]]`.
pub fn dressed_gap(params: &ScenarioParams, tau: f64) -> f64 {
    let g = coupling(params, tau);
    let h = Matrix2::new(0.0, g, g, params.omega + doppler_frequency(params, tau));
    let e = h.symmetric_eigenvalues();
    (e[0] - e[1]).abs()
}

/// Bare excited-state weight `(g(τ)/(ω + ν′))²` of the dressed ground state.
pub fn bloch_siegert_probability(params: &ScenarioParams, tau: f64) -> Result<f64> {
    let m = dressed_states(params, tau)?.mixing;
    Ok(m * m)
}

/// Switching of the coupling around the flight window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// Coupling off.
    Off,
    /// Sudden switching at the cavity walls.
    Step,
    /// Raised-cosine ramps of the given length outside the window.
    RaisedCosine { ramp: f64 },
}

impl Envelope {
    pub const ADIABATIC: Envelope = Envelope::RaisedCosine { ramp: 10.0 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonadiabaticResult {
    pub c1: Complex64,
    pub probability: f64,
    /// Largest `|d/dτ(g/(ω+ν′))| / (ω+ν′)` over the smooth part of the envelope.
    pub adiabaticity: f64,
    /// Set when `adiabaticity > 0.1`, where first-order perturbation is suspect.
    pub warning: bool,
}

fn envelope_value(env: Envelope, a: f64, b: f64, tau: f64) -> (f64, f64) {
    match env {
        Envelope::Off => (0.0, 0.0),
        Envelope::Step => {
            if tau >= a && tau <= b {
                (1.0, 0.0)
            } else {
                (0.0, 0.0)
            }
        }
        Envelope::RaisedCosine { ramp } => {
            let k = PI / ramp;
            if tau < a - ramp || tau > b + ramp {
                (0.0, 0.0)
            } else if tau < a {
                let x = k * (tau - a + ramp);
                (0.5 * (1.0 - x.cos()), 0.5 * k * x.sin())
            } else if tau > b {
                let x = k * (tau - b);
                (0.5 * (1.0 + x.cos()), -0.5 * k * x.sin())
            } else {
                (1.0, 0.0)
            }
        }
    }
}

/// First-order amplitude for leaving the dressed ground state,
/// `c₁ = ∫ exp[i∫_{τᵢ}^{τ}(ν′ + ω)] d/dτ[g(τ)/(ω + ν′)] dτ`.
///
/// A step envelope contributes the jumps of `g/(ω+ν′)` at the walls.
pub fn nonadiabatic_c1(params: &ScenarioParams, envelope: Envelope) -> Result<NonadiabaticResult> {
    params.validate()?;
    if !params.flight_time.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "aT",
            value: params.flight_time,
        });
    }
    if let Envelope::RaisedCosine { ramp } = envelope {
        if !(ramp > 0.0 && ramp.is_finite()) {
            return Err(Error::ParameterOutOfRange {
                name: "ramp",
                value: ramp,
            });
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    let (a, b) = params.window();
    if envelope == Envelope::Off || params.coupling == 0.0 {
        return Ok(NonadiabaticResult {
            c1: zero,
            probability: 0.0,
            adiabaticity: 0.0,
            warning: false,
        });
    }
    let (w, f, g) = (params.omega, params.nu, params.coupling);
    let phase = |tau: f64| f * ((-a).exp() - (-tau).exp()) + w * (tau - a);
    // g e^{-τ}/(ω + ν e^{-τ}) = g/(ω e^{τ} + ν)
    let mixing = |tau: f64| g / (w * tau.exp() + f);
    let slope = |tau: f64| {
        let (e, de) = envelope_value(envelope, a, b, tau);
        let den = w * tau.exp() + f;
        g * (de * den - e * w * tau.exp()) / (den * den)
    };
    let (lo, hi) = match envelope {
        Envelope::RaisedCosine { ramp } => (a - ramp, b + ramp),
        _ => (a, b),
    };
    let mut c1 = zero;
    if hi > lo {
        let pts = oscillatory_breakpoints(lo, hi, |t| w + f * (-t).exp(), 2.0);
        let out = integrate(
            |t: f64| Complex64::from_polar(slope(t), phase(t)),
            &pts,
            Tolerance {
                abs: 1e-300,
                rel: 1e-9,
                l1_rel: 1e-12,
            },
            8_000_000,
            "nonadiabatic amplitude",
        )?;
        c1 = out.value;
    }
    if envelope == Envelope::Step {
        c1 += Complex64::from_polar(mixing(a), phase(a)) - Complex64::from_polar(mixing(b), phase(b));
    }
    // adiabaticity of the smooth part, sampled on a fine grid
    let samples = 4000;
    let mut adiabaticity: f64 = 0.0;
    for k in 0..=samples {
        let t = lo + (hi - lo) * k as f64 / samples as f64;
        adiabaticity = adiabaticity.max(slope(t).abs() / (w + f * (-t).exp()));
    }
    Ok(NonadiabaticResult {
        c1,
        probability: c1.norm_sqr(),
        adiabaticity,
        warning: adiabaticity > 0.1,
    })
}
