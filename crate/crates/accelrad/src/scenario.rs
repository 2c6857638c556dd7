//! Scenario runners with fixed column schemas, and the parameter sweep.

use accelrad_core::amplitudes::{
    amplitude_set, cavity_factor, rates, ratio_asymptotic, reed_rates, resonant_enhancement, second_order_coefficients,
    unruh_factor_log10, AmplitudeSet, EdgeMode, InjectionMode, InjectionSchedule, Method, RateSet,
};
use accelrad_core::complex::ComplexScalar;
use accelrad_core::field::{
    build_generator, default_nmax, diagnostics, evolve, steady_state, EvolveOptions, FockDensityMatrix, GeneratorSpec,
    PHASE_SENSITIVE_MAX_NMAX,
};
use accelrad_core::kinematics::ScenarioParams;
use accelrad_core::oracle::{
    atomic_excitation, bloch_siegert_probability, dressed_states, nonadiabatic_c1, per_atom_map,
    per_atom_superoperator, Envelope,
};
use accelrad_core::Error as CoreError;
use rayon::prelude::*;

use crate::config::{set_param, Resolved, RunConfig, ScenarioKind};
use crate::error::{CliError, CliResult};
use crate::table::{Table, Value};

const ECHO: [&str; 13] = [
    "scenario",
    "w",
    "f",
    "g_over_alpha",
    "r_over_alpha",
    "aT",
    "ati",
    "t0",
    "schedule",
    "t_phi",
    "si_alpha",
    "si_omega",
    "si_nu",
];

/// Truncation and parameter limits of the oracle scenario.
pub const ORACLE_MAX_NMAX: usize = 8;
pub const ORACLE_MAX_F: f64 = 1e3;

pub fn output_columns(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::Amplitudes => &[
            "method",
            "edge_mode",
            "I1_re",
            "I1_im",
            "I2_re",
            "I2_im",
            "ln_abs_I1_sq",
            "ln_abs_I2_sq",
            "abs_I1_sq",
            "abs_I2_sq",
            "R1",
            "R2",
            "ratio",
            "ln_ratio",
            "unruh_log10",
        ],
        ScenarioKind::Thermal => &[
            "R1",
            "R2",
            "loss",
            "nmax",
            "q",
            "nbar",
            "Tc",
            "mandel_Q",
            "min_var",
            "p0",
            "p1",
            "p2",
            "tail_mass",
        ],
        ScenarioKind::Squeezed => &[
            "R1",
            "R2",
            "S1_re",
            "S1_im",
            "S2_re",
            "S2_im",
            "delta",
            "loss",
            "nmax",
            "t",
            "nbar",
            "min_var",
            "theta_min",
            "mandel_Q",
            "min_eigenvalue",
            "trace_error",
            "tail_mass",
        ],
        ScenarioKind::Reed => &[
            "kz0",
            "p",
            "gamma_over_alpha",
            "omega0",
            "R1",
            "R2",
            "S1",
            "S2",
            "enhancement",
        ],
        ScenarioKind::UnruhCompare => &[
            "ratio_cavity",
            "cavity_log10",
            "unruh_log10",
            "log10_enhancement",
            "ratio_exact",
            "regime_ok",
        ],
        ScenarioKind::Oracle => &[
            "oracle_nmax",
            "delta_rho11",
            "g2_abs_I2_sq",
            "atom_excitation",
            "bloch_siegert",
            "mixing",
            "c1_step_sq",
            "c1_adiabatic_sq",
            "adiabaticity",
            "adiabatic_warning",
            "map_generator_rel",
        ],
        ScenarioKind::Sweep => &[],
    }
}

pub fn columns(kind: ScenarioKind) -> Vec<&'static str> {
    let mut c: Vec<&'static str> = ECHO.to_vec();
    c.extend_from_slice(output_columns(kind));
    c.push("error");
    c
}

fn echo(r: &Resolved) -> Vec<Value> {
    let p = &r.params;
    let (mode, t_phi) = match r.schedule.mode {
        InjectionMode::Random => ("random", Value::Empty),
        InjectionMode::Regular => ("regular", Value::Num(r.schedule.t_phi)),
    };
    let si = r.si.as_ref();
    vec![
        r.kind.name().into(),
        given(p.omega),
        given(p.nu),
        p.coupling.into(),
        p.injection_rate.into(),
        p.flight_time.into(),
        p.entry_time.into(),
        p.t0.into(),
        mode.into(),
        t_phi,
        si.map(|s| s.alpha).into(),
        si.and_then(|s| s.omega).into(),
        si.and_then(|s| s.nu).into(),
    ]
}

fn given(x: f64) -> Value {
    if x.is_nan() {
        Value::Empty
    } else {
        Value::Num(x)
    }
}

/// One output row: echo, scenario values, and an empty error column.
pub fn evaluate(r: &Resolved) -> CliResult<Vec<Value>> {
    let mut row = echo(r);
    let out = match r.kind {
        ScenarioKind::Amplitudes => run_amplitudes(r)?,
        ScenarioKind::Thermal => run_thermal(r)?,
        ScenarioKind::Squeezed => run_squeezed(r)?,
        ScenarioKind::Reed => run_reed(r)?,
        ScenarioKind::UnruhCompare => run_unruh_compare(r)?,
        ScenarioKind::Oracle => run_oracle(r)?,
        ScenarioKind::Sweep => return Err(CliError::Validation("nested sweep".into())),
    };
    debug_assert_eq!(out.len(), output_columns(r.kind).len());
    row.extend(out);
    row.push(Value::Empty);
    Ok(row)
}

/// Row for a sweep point that failed: echo, blank outputs, and the message.
fn failed_row(r: &Resolved, e: &CliError) -> Vec<Value> {
    let mut row = echo(r);
    row.extend(std::iter::repeat_n(Value::Empty, output_columns(r.kind).len()));
    row.push(Value::Text(e.to_string()));
    row
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Quadrature => "quadrature",
        Method::ClosedForm => "closed_form",
        Method::Asymptotic => "asymptotic",
    }
}

fn edge_name(e: EdgeMode) -> &'static str {
    match e {
        EdgeMode::Full => "full",
        EdgeMode::Boundaryless => "boundaryless",
    }
}

fn amplitudes(r: &Resolved) -> CliResult<AmplitudeSet> {
    r.params.validate()?;
    Ok(amplitude_set(&r.params, r.numerics.method, r.numerics.edge_mode)?)
}

fn run_amplitudes(r: &Resolved) -> CliResult<Vec<Value>> {
    let amp = amplitudes(r)?;
    let rg2 = r.params.injection_rate * r.params.coupling * r.params.coupling;
    let (i1, i2) = (amp.absorption.to_complex(), amp.emission.to_complex());
    let ln_ratio = amp.log_ratio();
    Ok(vec![
        method_name(amp.method).into(),
        edge_name(amp.edge_mode).into(),
        i1.re.into(),
        i1.im.into(),
        i2.re.into(),
        i2.im.into(),
        amp.absorption.log_norm_sqr().into(),
        amp.emission.log_norm_sqr().into(),
        amp.absorption.norm_sqr().into(),
        amp.emission.norm_sqr().into(),
        (rg2 * amp.absorption.norm_sqr()).into(),
        (rg2 * amp.emission.norm_sqr()).into(),
        ln_ratio.exp().into(),
        ln_ratio.into(),
        unruh_factor_log10(&r.params).into(),
    ])
}

/// Master-equation coefficients: the explicit override or the amplitude calculation.
fn rate_set(r: &Resolved, with_squeezing: bool) -> CliResult<RateSet> {
    if let Some(rs) = r.rates {
        return Ok(rs);
    }
    let amp = amplitudes(r)?;
    let schedule = if with_squeezing {
        r.schedule
    } else {
        InjectionSchedule::random()
    };
    let mut rs = rates(&r.params, &schedule, &amp)?;
    if with_squeezing && schedule.mode == InjectionMode::Random {
        // random injection averages the squeezing away but keeps the pull
        rs.frequency_shift = second_order_coefficients(&r.params, &schedule)?.frequency_shift;
    }
    Ok(rs)
}

fn temperature(q: f64) -> f64 {
    if q > 0.0 && q < 1.0 {
        1.0 / (1.0 / q).ln()
    } else {
        0.0
    }
}

fn evolve_options(r: &Resolved) -> EvolveOptions {
    EvolveOptions {
        dt_max: r.numerics.dt_max,
        tail_tol: r.numerics.tail_tol,
    }
}

fn run_thermal(r: &Resolved) -> CliResult<Vec<Value>> {
    let rs = rate_set(r, false)?;
    let spec = GeneratorSpec {
        loss: r.numerics.loss,
        ..GeneratorSpec::thermal(rs)
    };
    let q = spec.ratio();
    let nmax = r.numerics.nmax.unwrap_or_else(|| default_nmax(q));
    let gen = build_generator(&spec, nmax)?;
    let state = match r.numerics.evolve_time {
        Some(t) => evolve(&FockDensityMatrix::vacuum(nmax), &gen, t, &evolve_options(r))?,
        None => steady_state(&gen)?.state,
    };
    if state.tail_mass() > r.numerics.tail_tol {
        return Err(CoreError::TruncationOverflow(state.tail_mass()).into());
    }
    let d = diagnostics(&state);
    let pn = state.populations();
    Ok(vec![
        rs.absorption.into(),
        rs.emission.into(),
        r.numerics.loss.into(),
        nmax.into(),
        q.into(),
        d.nbar.into(),
        temperature(q).into(),
        d.mandel_q.into(),
        d.min_quadrature_variance.into(),
        pn[0].into(),
        pn[1].into(),
        pn[2].into(),
        state.tail_mass().into(),
    ])
}

fn run_squeezed(r: &Resolved) -> CliResult<Vec<Value>> {
    let rs = rate_set(r, true)?;
    let spec = GeneratorSpec {
        loss: r.numerics.loss,
        ..GeneratorSpec::phase_sensitive(rs)
    };
    let (state, t) = match r.numerics.evolve_time {
        Some(t) => {
            let nmax = r.numerics.nmax.unwrap_or_else(|| default_nmax(spec.ratio()));
            let gen = build_generator(&spec, nmax)?;
            (
                evolve(&FockDensityMatrix::vacuum(nmax), &gen, t, &evolve_options(r))?,
                Value::Num(t),
            )
        }
        None => (squeezed_steady_state(r, &spec)?, Value::Empty),
    };
    let nmax = state.nmax();
    let d = diagnostics(&state);
    let phys = state.physicality();
    Ok(vec![
        rs.absorption.into(),
        rs.emission.into(),
        rs.squeeze_1.re.into(),
        rs.squeeze_1.im.into(),
        rs.squeeze_2.re.into(),
        rs.squeeze_2.im.into(),
        rs.frequency_shift.into(),
        r.numerics.loss.into(),
        nmax.into(),
        t,
        d.nbar.into(),
        d.min_quadrature_variance.into(),
        d.theta_min.into(),
        d.mandel_q.into(),
        phys.min_eigenvalue.into(),
        phys.trace_error.into(),
        phys.tail_mass.into(),
    ])
}

/// Squeezing widens the photon distribution beyond the thermal geometric
/// tail, so without an explicit `nmax` the truncation grows until the top
/// level is empty to `tail_tol`.
fn squeezed_steady_state(r: &Resolved, spec: &GeneratorSpec) -> CliResult<FockDensityMatrix> {
    let mut nmax = match r.numerics.nmax {
        Some(n) => n,
        None => default_nmax(spec.ratio()).min(PHASE_SENSITIVE_MAX_NMAX),
    };
    loop {
        let state = steady_state(&build_generator(spec, nmax)?)?.state;
        let tail = state.tail_mass();
        if tail <= r.numerics.tail_tol {
            return Ok(state);
        }
        if r.numerics.nmax.is_some() || nmax == PHASE_SENSITIVE_MAX_NMAX {
            return Err(CoreError::TruncationOverflow(tail).into());
        }
        nmax = (nmax + nmax / 2).min(PHASE_SENSITIVE_MAX_NMAX);
    }
}

fn run_reed(r: &Resolved) -> CliResult<Vec<Value>> {
    let reed = r
        .reed
        .ok_or_else(|| CliError::Validation("scenario 'reed' needs a 'reed' block".into()))?;
    let rs = reed_rates(&r.params, &reed)?;
    Ok(vec![
        reed.kz0.into(),
        reed.p.into(),
        reed.gamma_over_alpha.into(),
        reed.omega0.into(),
        rs.absorption.into(),
        rs.emission.into(),
        rs.squeeze_1.re.into(),
        rs.squeeze_2.re.into(),
        resonant_enhancement(&r.params, &reed)?.into(),
    ])
}

fn run_unruh_compare(r: &Resolved) -> CliResult<Vec<Value>> {
    let w = r.params.omega;
    if !(w > 0.0 && w.is_finite()) {
        return Err(CliError::Validation(format!("w must be positive and finite, got {w}")));
    }
    let cavity = cavity_factor(w);
    let cavity_log10 = cavity.log10();
    let unruh = unruh_factor_log10(&r.params);
    // the exact ratio needs a mode frequency
    let exact = if r.params.nu.is_nan() {
        None
    } else {
        Some(amplitudes(r)?.log_ratio().exp())
    };
    let regime_ok = !r.params.nu.is_nan() && ratio_asymptotic(&r.params).is_ok();
    Ok(vec![
        cavity.into(),
        cavity_log10.into(),
        unruh.into(),
        (cavity_log10 - unruh).into(),
        exact.into(),
        regime_ok.into(),
    ])
}

fn run_oracle(r: &Resolved) -> CliResult<Vec<Value>> {
    let p = &r.params;
    let nmax = r.numerics.oracle_nmax;
    if !(2..=ORACLE_MAX_NMAX).contains(&nmax) {
        return Err(CliError::Validation(format!(
            "oracle_nmax must lie in 2..={ORACLE_MAX_NMAX}, got {nmax}"
        )));
    }
    if p.nu > ORACLE_MAX_F {
        return Err(CliError::Validation(format!(
            "oracle needs f ≤ {ORACLE_MAX_F}, got {}",
            p.nu
        )));
    }
    p.validate()?;
    if !p.flight_time.is_finite() {
        return Err(CliError::Validation("oracle needs a finite aT".into()));
    }
    let map = per_atom_map(&FockDensityMatrix::vacuum(nmax), p, &r.schedule)?;
    let amp = amplitude_set(p, Method::ClosedForm, EdgeMode::Full)?;
    let g2 = p.coupling * p.coupling;
    let dressed = dressed_states(p, p.entry_time)?;
    let step = nonadiabatic_c1(p, Envelope::Step)?;
    let smooth = nonadiabatic_c1(p, Envelope::ADIABATIC)?;
    Ok(vec![
        nmax.into(),
        map[(1, 1)].re.into(),
        (g2 * amp.emission.norm_sqr()).into(),
        atomic_excitation(p, nmax)?.into(),
        bloch_siegert_probability(p, p.entry_time)?.into(),
        dressed.mixing.into(),
        step.probability.into(),
        smooth.probability.into(),
        smooth.adiabaticity.into(),
        smooth.warning.into(),
        map_generator_rel(p, &r.schedule, &amp, nmax)?.into(),
    ])
}

/// Largest deviation of the per-atom map from generator/r over the rows the
/// truncation leaves intact, relative to the generator norm. Empty when the
/// rates fall in the gain regime, where no generator is built.
fn map_generator_rel(
    p: &ScenarioParams,
    schedule: &InjectionSchedule,
    amp: &AmplitudeSet,
    nmax: usize,
) -> CliResult<Option<f64>> {
    if p.injection_rate * p.coupling * p.coupling == 0.0 {
        return Ok(None);
    }
    let map = per_atom_superoperator(p, schedule, nmax)?;
    let rs = rates(p, schedule, amp)?;
    let spec = match schedule.mode {
        InjectionMode::Random => GeneratorSpec::thermal(rs),
        InjectionMode::Regular => GeneratorSpec::phase_sensitive(rs),
    };
    let gen = match build_generator(&spec, nmax) {
        Ok(g) => g.to_dense() / ComplexScalar::new(p.injection_rate, 0.0),
        Err(CoreError::GainRegime) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let dim = nmax + 1;
    let rows: Vec<usize> = match schedule.mode {
        // random injection keeps a frequency pull the thermal generator drops,
        // so only populations are compared
        InjectionMode::Random => (0..dim).map(|n| n * dim + n).collect(),
        InjectionMode::Regular => (0..nmax).flat_map(|n| (0..nmax).map(move |m| n * dim + m)).collect(),
    };
    let mut worst: f64 = 0.0;
    for row in rows {
        for col in 0..dim * dim {
            worst = worst.max((map[(row, col)] - gen[(row, col)]).norm());
        }
    }
    Ok(Some(worst / gen.norm()))
}

/// Evaluate a config: one row for a scenario, one per grid point for a sweep.
pub fn run(config: &RunConfig) -> CliResult<Table> {
    let base = config.resolve()?;
    let mut table = Table::new(columns(base.kind));
    let Some(sweep) = config.sweep.as_ref().filter(|_| config.scenario == ScenarioKind::Sweep) else {
        table.push(evaluate(&base)?);
        return Ok(table);
    };
    let axes: Vec<(&str, Vec<f64>)> = sweep.axes.iter().map(|a| (a.name.as_str(), a.values())).collect();
    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let rows: Vec<Vec<Value>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let mut point = base.clone();
            // last axis varies fastest
            let mut rest = k;
            let mut picks = vec![0.0; axes.len()];
            for (i, (_, values)) in axes.iter().enumerate().rev() {
                picks[i] = values[rest % values.len()];
                rest /= values.len();
            }
            let result = axes
                .iter()
                .zip(&picks)
                .try_for_each(|((name, _), &v)| set_param(&mut point.params, name, v))
                .and_then(|()| {
                    if point.schedule.mode == InjectionMode::Regular {
                        point.schedule = InjectionSchedule::regular(point.schedule.t_phi, point.params.nu);
                    }
                    evaluate(&point)
                });
            result.unwrap_or_else(|e| failed_row(&point, &e))
        })
        .collect();
    for row in rows {
        table.push(row);
    }
    Ok(table)
}
