use accelrad_core::amplitudes::*;
use accelrad_core::field::*;
use accelrad_core::kinematics::ScenarioParams;
use accelrad_core::Error;
use proptest::prelude::*;

/// Rates of a real scenario under regular injection, rescaled so R₁ = 1.
fn physical_rates(w: f64, f: f64, at: f64, t_phi: f64) -> RateSet {
    let p = ScenarioParams::new(w, f, at);
    let schedule = InjectionSchedule::regular(t_phi, f);
    let amp = amplitude_set(&p, Method::ClosedForm, EdgeMode::Full).unwrap();
    let r = rates(&p, &schedule, &amp).unwrap();
    let k = 1.0 / r.absorption;
    RateSet {
        absorption: 1.0,
        emission: r.emission * k,
        squeeze_1: r.squeeze_1 * k,
        squeeze_2: r.squeeze_2 * k,
        frequency_shift: r.frequency_shift * k,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn evolution_stays_physical(w in 0.5f64..3.0, f in 3.0f64..20.0, at in 1.0f64..6.0, t_phi in 0.0f64..3.0) {
        let rates = physical_rates(w, f, at, t_phi);
        let spec = GeneratorSpec::phase_sensitive(rates);
        let nmax = default_nmax(spec.ratio()).min(30);
        let gen = match build_generator(&spec, nmax) {
            Ok(g) => g,
            Err(Error::GainRegime) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let out = evolve(&FockDensityMatrix::vacuum(nmax), &gen, 3.0, &EvolveOptions { dt_max: 0.01, tail_tol: 1e-6 });
        let state = match out {
            Ok(s) => s,
            Err(Error::TruncationOverflow(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let phys = state.physicality();
        prop_assert!(phys.trace_error < 3e-9, "{phys:?}");
        prop_assert!(phys.hermiticity_error < 1e-12, "{phys:?}");
        prop_assert!(phys.min_eigenvalue >= -1e-8, "{phys:?}");
    }
}

#[test]
fn single_atom_rates_sit_on_the_positivity_boundary() {
    for (w, f, at, t_phi) in [(1.0, 5.0, 3.0, 0.2), (2.0, 12.0, 4.0, 1.1), (0.7, 8.0, 2.0, 2.5)] {
        let r = physical_rates(w, f, at, t_phi);
        let cross = (r.squeeze_1 + r.squeeze_2).norm_sqr();
        assert!((cross / (r.absorption * r.emission) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn steady_state_is_fixed_point_of_evolution() {
    let rates = physical_rates(1.0, 6.0, 3.0, 0.4);
    let gen = build_generator(&GeneratorSpec::phase_sensitive(rates), 20).unwrap();
    let ss = steady_state(&gen).unwrap();
    let later = evolve(&ss.state, &gen, 2.0, &EvolveOptions::default()).unwrap();
    assert!((later.entries() - ss.state.entries()).norm() < 1e-10);
}

#[test]
fn detailed_balance_of_thermal_steady_state() {
    let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(0.9, 0.35)), 40).unwrap();
    let ss = steady_state(&gen).unwrap();
    for n in 0..39 {
        // R₂ (n+1) p_n = R₁ (n+1) p_{n+1}
        assert!((0.35 * ss.pn[n] - 0.9 * ss.pn[n + 1]).abs() < 1e-14);
    }
}

#[test]
fn vacuum_relaxation_of_mean_photon_number() {
    // d n̄/dt = −(R₁ − R₂) n̄ + R₂ away from the truncation edge
    let (r1, r2) = (1.0, 0.2);
    let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(r1, r2)), 30).unwrap();
    let t = 1.5;
    let state = evolve(&FockDensityMatrix::vacuum(30), &gen, t, &EvolveOptions::default()).unwrap();
    let expect = r2 / (r1 - r2) * (1.0 - (-(r1 - r2) * t).exp());
    assert!((diagnostics(&state).nbar - expect).abs() < 1e-10);
}

#[test]
fn uncertainty_bound_respected() {
    let rates = physical_rates(1.5, 10.0, 4.0, 0.7);
    let gen = build_generator(&GeneratorSpec::phase_sensitive(rates), 24).unwrap();
    let ss = steady_state(&gen).unwrap();
    let v0 = quadrature_variance(&ss.state, ss.theta_min);
    let v1 = quadrature_variance(&ss.state, ss.theta_min + std::f64::consts::FRAC_PI_2);
    assert!(v0 * v1 >= 1.0 / 16.0 - 1e-12);
}
