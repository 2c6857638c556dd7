//! Cavity-field density matrix in a truncated Fock basis and its
//! coarse-grained master equation.
//!
//! The generator is
//!
//! ```text
//! Lρ = R₁/2 (2aρa† − a†aρ − ρa†a) + R₂/2 (2a†ρa − aa†ρ − ρaa†) − iΔ[a†a, ρ]
//!      − S₁(aaρ − aρa) − S₂(ρaa − aρa) + h.c. of the S terms,
//! ```
//!
//! the second-order map of a ground-state atom written as a superoperator.
//! Its diagonal reproduces the thermal rate equation when `S₁ = S₂ = 0` and
//! the phase-sensitive one otherwise. All ladder operators are truncated at
//! `nmax`, which keeps the trace exactly conserved.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::amplitudes::RateSet;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest truncation accepted for the dense phase-sensitive steady-state solve.
pub const PHASE_SENSITIVE_MAX_NMAX: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    entries: CMatrix,
}

/// Measured deviations from a physical state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub tail_mass: f64,
}

impl Physicality {
    pub fn is_physical(&self, tail_tol: f64) -> bool {
        self.trace_error <= 1e-9
            && self.hermiticity_error <= 1e-12
            && self.min_eigenvalue >= -1e-8
            && self.tail_mass < tail_tol
    }
}

impl FockDensityMatrix {
    pub fn vacuum(nmax: usize) -> Self {
        let mut entries = CMatrix::zeros(nmax + 1, nmax + 1);
        entries[(0, 0)] = Complex64::new(1.0, 0.0);
        FockDensityMatrix { entries }
    }

    /// Diagonal state with populations `∝ qⁿ`, normalised on the truncated space.
    pub fn geometric(nmax: usize, q: f64) -> Self {
        let mut entries = CMatrix::zeros(nmax + 1, nmax + 1);
        let mut p = 1.0;
        let mut norm = 0.0;
        for n in 0..=nmax {
            entries[(n, n)] = Complex64::new(p, 0.0);
            norm += p;
            p *= q;
        }
        entries /= Complex64::new(norm, 0.0);
        FockDensityMatrix { entries }
    }

    pub fn from_entries(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() < 3 {
            return Err(Error::TruncationTooSmall(entries.nrows().saturating_sub(1)));
        }
        Ok(FockDensityMatrix { entries })
    }

    pub fn nmax(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..=self.nmax()).map(|n| self.entries[(n, n)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn tail_mass(&self) -> f64 {
        let n = self.nmax();
        self.entries[(n, n)].re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn physicality(&self) -> Physicality {
        Physicality {
            trace_error: (self.trace() - Complex64::new(1.0, 0.0)).norm(),
            hermiticity_error: self.hermiticity_error(),
            min_eigenvalue: self.min_eigenvalue(),
            tail_mass: self.tail_mass(),
        }
    }

    fn hermitize(&mut self) {
        let adj = self.entries.adjoint();
        self.entries += adj;
        self.entries *= Complex64::new(0.5, 0.0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GeneratorKind {
    /// Phase-insensitive rate equation; only R₁ and R₂ enter.
    Thermal,
    /// Adds the squeezing coefficients and the frequency pull.
    PhaseSensitive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub rates: RateSet,
    pub kind: GeneratorKind,
    /// Cavity decay κ, added to the absorption channel. Zero for a lossless cavity.
    pub loss: f64,
}

impl GeneratorSpec {
    pub fn thermal(rates: RateSet) -> Self {
        GeneratorSpec {
            rates,
            kind: GeneratorKind::Thermal,
            loss: 0.0,
        }
    }

    pub fn phase_sensitive(rates: RateSet) -> Self {
        GeneratorSpec {
            rates,
            kind: GeneratorKind::PhaseSensitive,
            loss: 0.0,
        }
    }

    /// Geometric ratio R₂/(R₁ + κ).
    pub fn ratio(&self) -> f64 {
        self.rates.emission / (self.rates.absorption + self.loss)
    }
}

/// The assembled master-equation generator on a fixed truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    nmax: usize,
    kind: GeneratorKind,
    down: f64,
    up: f64,
    squeeze_1: Complex64,
    squeeze_2: Complex64,
    shift: f64,
}

/// Smallest `n` with `qⁿ < 1e-10`, clamped to `[8, 512]`.
pub fn default_nmax(q: f64) -> usize {
    if !(q > 0.0) {
        return 8;
    }
    if q >= 1.0 {
        return 512;
    }
    let n = ((1e-10f64).ln() / q.ln()).floor() as usize + 1;
    n.clamp(8, 512)
}

pub fn build_generator(spec: &GeneratorSpec, nmax: usize) -> Result<Generator> {
    if nmax < 2 {
        return Err(Error::TruncationTooSmall(nmax));
    }
    let rates = &spec.rates;
    for (name, v) in [("R1", rates.absorption), ("R2", rates.emission), ("loss", spec.loss)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::ParameterOutOfRange { name, value: v });
        }
    }
    let down = rates.absorption + spec.loss;
    let up = rates.emission;
    let (squeeze_1, squeeze_2, shift) = match spec.kind {
        GeneratorKind::Thermal => (ZERO, ZERO, 0.0),
        GeneratorKind::PhaseSensitive => {
            let damping = down - up;
            let sum = (rates.squeeze_1 + rates.squeeze_2).norm();
            let diff = (rates.squeeze_1 - rates.squeeze_2).norm_sqr();
            let pull = rates.frequency_shift;
            // |S₁+S₂| < R₁ − R₂, and the mean-field drift
            // −(γ/2 + iΔ)⟨a⟩ + (S̄₁ − S̄₂)⟨a†⟩ must decay
            if (sum > 0.0 || diff > 0.0) && (!(sum < damping) || !(diff - pull * pull < 0.25 * damping * damping)) {
                return Err(Error::GainRegime);
            }
            (rates.squeeze_1, rates.squeeze_2, pull)
        }
    };
    Ok(Generator {
        nmax,
        kind: spec.kind,
        down,
        up,
        squeeze_1,
        squeeze_2,
        shift,
    })
}

impl Generator {
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.nmax + 1
    }

    /// Effective absorption R₁ + κ.
    pub fn absorption(&self) -> f64 {
        self.down
    }

    pub fn emission(&self) -> f64 {
        self.up
    }

    /// Row-sum bound on the superoperator norm, hence on its spectral radius.
    pub fn rate_bound(&self) -> f64 {
        let n = self.dim() as f64;
        let squeeze = (self.squeeze_1.norm() + self.squeeze_2.norm()) * 4.0;
        n * (2.0 * (self.down + self.up) + self.shift.abs() + squeeze)
    }

    /// `dρ/dt` for the given state.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let dim = self.dim();
        let nmax = self.nmax as isize;
        let get = |i: isize, j: isize| -> Complex64 {
            if i < 0 || j < 0 || i > nmax || j > nmax {
                ZERO
            } else {
                rho[(i as usize, j as usize)]
            }
        };
        let sq = |x: isize| (x.max(0) as f64).sqrt();
        // diagonal of the truncated a a†
        let raise = |n: isize| if n < nmax { (n + 1) as f64 } else { 0.0 };
        let s1 = self.squeeze_1;
        let s2 = self.squeeze_2;
        let phase_sensitive = self.kind == GeneratorKind::PhaseSensitive;
        CMatrix::from_fn(dim, dim, |i, j| {
            let (n, m) = (i as isize, j as isize);
            let r = get(n, m);
            let mut out = get(n + 1, m + 1) * (self.down * sq(n + 1) * sq(m + 1))
                - r * (0.5 * self.down * (n + m) as f64)
                + get(n - 1, m - 1) * (self.up * sq(n) * sq(m))
                - r * (0.5 * self.up * (raise(n) + raise(m)));
            if phase_sensitive {
                out += r * Complex64::new(0.0, -self.shift * (n - m) as f64);
                let a_rho_a = get(n + 1, m - 1) * (sq(n + 1) * sq(m));
                let ad_rho_ad = get(n - 1, m + 1) * (sq(n) * sq(m + 1));
                let aa_rho = get(n + 2, m) * (sq(n + 1) * sq(n + 2));
                let rho_adad = get(n, m + 2) * (sq(m + 1) * sq(m + 2));
                let adad_rho = get(n - 2, m) * (sq(n) * sq(n - 1));
                let rho_aa = get(n, m - 2) * (sq(m) * sq(m - 1));
                out -= s1 * (aa_rho - a_rho_a);
                out -= s1.conj() * (rho_adad - ad_rho_ad);
                out -= s2.conj() * (adad_rho - ad_rho_ad);
                out -= s2 * (rho_aa - a_rho_a);
            }
            out
        })
    }

    /// Dense superoperator on row-major vectorised ρ (`index = n·(nmax+1) + m`).
    pub fn to_dense(&self) -> CMatrix {
        let dim = self.dim();
        let size = dim * dim;
        let mut out = CMatrix::zeros(size, size);
        let mut unit = CMatrix::zeros(dim, dim);
        for col in 0..size {
            let (k, l) = (col / dim, col % dim);
            unit[(k, l)] = Complex64::new(1.0, 0.0);
            let image = self.apply(&unit);
            unit[(k, l)] = ZERO;
            for n in 0..dim {
                for m in 0..dim {
                    out[(n * dim + m, col)] = image[(n, m)];
                }
            }
        }
        out
    }
}

/// Options for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt_max: f64,
    pub tail_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            dt_max: 0.01,
            tail_tol: 1e-8,
        }
    }
}

/// Classical fourth-order Runge–Kutta over time `t`, re-symmetrising after
/// every step and watching the population of the highest Fock level.
///
/// The step is `dt_max` or `2.5/‖L‖`, whichever is smaller, so large
/// truncations stay inside the RK4 stability region.
pub fn evolve(rho: &FockDensityMatrix, gen: &Generator, t: f64, opts: &EvolveOptions) -> Result<FockDensityMatrix> {
    if rho.nmax() != gen.nmax() {
        return Err(Error::TruncationTooSmall(rho.nmax()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t });
    }
    if !(opts.dt_max > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "dt_max",
            value: opts.dt_max,
        });
    }
    let mut state = rho.clone();
    if t == 0.0 {
        return Ok(state);
    }
    let dt_max = opts.dt_max.min(2.5 / gen.rate_bound());
    let steps = (t / dt_max).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..steps {
        let y = &state.entries;
        let k1 = gen.apply(y);
        let k2 = gen.apply(&(y + &k1 * half));
        let k3 = gen.apply(&(y + &k2 * half));
        let k4 = gen.apply(&(y + &k3 * full));
        state.entries += (k1 + k2 * two + k3 * two + k4) * sixth;
        state.hermitize();
        let tail = state.tail_mass();
        if tail > opts.tail_tol {
            return Err(Error::TruncationOverflow(tail));
        }
    }
    let min_eig = state.min_eigenvalue();
    if min_eig < -1e-8 {
        return Err(Error::PositivityViolation(min_eig));
    }
    Ok(state)
}

/// Photon statistics of a field state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub nbar: f64,
    /// `min_θ Var X_θ` with `X_θ = (a e^{-iθ} + a† e^{iθ})/2`.
    pub min_quadrature_variance: f64,
    pub theta_min: f64,
    /// `(Var n − n̄)/n̄`; `None` for the vacuum.
    pub mandel_q: Option<f64>,
}

struct Moments {
    nbar: f64,
    n2: f64,
    a: Complex64,
    a2: Complex64,
}

fn moments(rho: &FockDensityMatrix) -> Moments {
    let e = rho.entries();
    let nmax = rho.nmax();
    let mut m = Moments {
        nbar: 0.0,
        n2: 0.0,
        a: ZERO,
        a2: ZERO,
    };
    for n in 0..=nmax {
        let p = e[(n, n)].re;
        m.nbar += n as f64 * p;
        m.n2 += (n * n) as f64 * p;
        if n < nmax {
            m.a += e[(n + 1, n)] * ((n + 1) as f64).sqrt();
        }
        if n + 1 < nmax {
            m.a2 += e[(n + 2, n)] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    m
}

/// `Var X_θ = ¼[1 + 2(n̄ − |⟨a⟩|²) + 2 Re((⟨a²⟩ − ⟨a⟩²) e^{-2iθ})]`
pub fn quadrature_variance(rho: &FockDensityMatrix, theta: f64) -> f64 {
    let m = moments(rho);
    let c = m.a2 - m.a * m.a;
    0.25 * (1.0 + 2.0 * (m.nbar - m.a.norm_sqr()) + 2.0 * (c * Complex64::from_polar(1.0, -2.0 * theta)).re)
}

pub fn diagnostics(rho: &FockDensityMatrix) -> Diagnostics {
    let m = moments(rho);
    let c = m.a2 - m.a * m.a;
    let base = 1.0 + 2.0 * (m.nbar - m.a.norm_sqr());
    let min_var = 0.25 * (base - 2.0 * c.norm());
    let theta_min = 0.5 * (c.arg() + core::f64::consts::PI);
    let mandel_q = if m.nbar > 1e-300 {
        Some((m.n2 - m.nbar * m.nbar - m.nbar) / m.nbar)
    } else {
        None
    };
    Diagnostics {
        nbar: m.nbar,
        min_quadrature_variance: min_var,
        theta_min,
        mandel_q,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub nbar: f64,
    /// Effective temperature in units of ħν/k_B, from `e^{-ħν/k_B T_c} = R₂/R₁`.
    pub tc: f64,
    pub pn: Vec<f64>,
    pub min_quadrature_variance: f64,
    pub theta_min: f64,
    pub mandel_q: Option<f64>,
    pub state: FockDensityMatrix,
}

/// Null-space solution of the generator, normalised to unit trace.
pub fn steady_state(gen: &Generator) -> Result<SteadyStateReport> {
    if !(gen.down > gen.up) {
        return Err(Error::NoSteadyState);
    }
    let dim = gen.dim();
    // coupled elements: the diagonal for the thermal generator, all
    // even-parity (n − m even) elements for the phase-sensitive one
    let basis: Vec<(usize, usize)> = match gen.kind {
        GeneratorKind::Thermal => (0..dim).map(|n| (n, n)).collect(),
        GeneratorKind::PhaseSensitive => {
            if gen.nmax > PHASE_SENSITIVE_MAX_NMAX {
                return Err(Error::ParameterOutOfRange {
                    name: "nmax",
                    value: gen.nmax as f64,
                });
            }
            (0..dim)
                .flat_map(|n| (0..dim).map(move |m| (n, m)))
                .filter(|(n, m)| (n + m) % 2 == 0)
                .collect()
        }
    };
    let size = basis.len();
    let mut index = vec![usize::MAX; dim * dim];
    for (k, &(n, m)) in basis.iter().enumerate() {
        index[n * dim + m] = k;
    }
    let mut system = CMatrix::zeros(size, size);
    let mut unit = CMatrix::zeros(dim, dim);
    for (col, &(k, l)) in basis.iter().enumerate() {
        unit[(k, l)] = Complex64::new(1.0, 0.0);
        let image = gen.apply(&unit);
        unit[(k, l)] = ZERO;
        for (row, &(n, m)) in basis.iter().enumerate() {
            system[(row, col)] = image[(n, m)];
        }
    }
    // the diagonal rows sum to zero (trace conservation); swap one for Σ ρ_nn = 1
    let trace_row = index[0];
    for (col, &(n, m)) in basis.iter().enumerate() {
        system[(trace_row, col)] = if n == m { Complex64::new(1.0, 0.0) } else { ZERO };
    }
    let mut rhs = DVector::zeros(size);
    rhs[trace_row] = Complex64::new(1.0, 0.0);
    let solution = system.lu().solve(&rhs).ok_or(Error::Singular)?;
    let mut entries = CMatrix::zeros(dim, dim);
    for (k, &(n, m)) in basis.iter().enumerate() {
        entries[(n, m)] = solution[k];
    }
    let mut state = FockDensityMatrix { entries };
    state.hermitize();
    let d = diagnostics(&state);
    let q = gen.up / gen.down;
    let tc = if q > 0.0 { 1.0 / (1.0 / q).ln() } else { 0.0 };
    Ok(SteadyStateReport {
        nbar: d.nbar,
        tc,
        pn: state.populations(),
        min_quadrature_variance: d.min_quadrature_variance,
        theta_min: d.theta_min,
        mandel_q: d.mandel_q,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn squeezing_rates() -> RateSet {
        RateSet {
            absorption: 1.0,
            emission: 0.2,
            squeeze_1: c(0.15, 0.05),
            squeeze_2: c(0.12, -0.08),
            frequency_shift: 0.03,
        }
    }

    #[test]
    fn vacuum_is_stationary_without_emission() {
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(1.0, 0.0)), 6).unwrap();
        let d = gen.apply(FockDensityMatrix::vacuum(6).entries());
        assert!(d.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn thermal_diagonal_matches_rate_equation() {
        let (r1, r2) = (0.8, 0.3);
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(r1, r2)), 6).unwrap();
        let dense = gen.to_dense();
        let dim = 7;
        for n in 0..6usize {
            let row = n * dim + n;
            let nf = n as f64;
            assert!((dense[(row, row)].re + r2 * (nf + 1.0) + r1 * nf).abs() < 1e-14);
            if n > 0 {
                assert!((dense[(row, (n - 1) * dim + n - 1)].re - r2 * nf).abs() < 1e-14);
            }
            assert!((dense[(row, (n + 1) * dim + n + 1)].re - r1 * (nf + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_sensitive_reduces_to_thermal_on_the_diagonal() {
        let thermal = build_generator(&GeneratorSpec::thermal(RateSet::thermal(1.0, 0.4)), 6)
            .unwrap()
            .to_dense();
        let rates = RateSet {
            frequency_shift: 0.7,
            ..RateSet::thermal(1.0, 0.4)
        };
        let ps = build_generator(&GeneratorSpec::phase_sensitive(rates), 6)
            .unwrap()
            .to_dense();
        for n in 0..7 {
            let row = n * 7 + n;
            for col in 0..49 {
                assert_eq!(thermal[(row, col)], ps[(row, col)]);
            }
        }
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity() {
        let gen = build_generator(&GeneratorSpec::phase_sensitive(squeezing_rates()), 7).unwrap();
        let rho = FockDensityMatrix::geometric(7, 0.3);
        let mut e = rho.entries().clone();
        e[(2, 0)] = c(0.01, 0.02);
        e[(0, 2)] = c(0.01, -0.02);
        let d = gen.apply(&e);
        assert!(d.trace().norm() < 1e-15);
        assert!((d.adjoint() - &d).norm() < 1e-15);
    }

    #[test]
    fn gain_regime_rejected() {
        let mut rates = squeezing_rates();
        rates.squeeze_1 = c(0.5, 0.0);
        rates.squeeze_2 = c(0.5, 0.0);
        assert_eq!(
            build_generator(&GeneratorSpec::phase_sensitive(rates), 6),
            Err(Error::GainRegime)
        );
        let mut rates = squeezing_rates();
        rates.squeeze_1 = c(0.3, 0.0);
        rates.squeeze_2 = c(-0.3, 0.0);
        rates.frequency_shift = 0.0;
        assert_eq!(
            build_generator(&GeneratorSpec::phase_sensitive(rates), 6),
            Err(Error::GainRegime)
        );
        // the thermal kind ignores squeezing
        assert!(build_generator(&GeneratorSpec::thermal(rates), 6).is_ok());
        assert_eq!(
            build_generator(&GeneratorSpec::thermal(rates), 1),
            Err(Error::TruncationTooSmall(1))
        );
    }

    #[test]
    fn thermal_steady_state_closed_form() {
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(1.0, 0.25)), 30).unwrap();
        let ss = steady_state(&gen).unwrap();
        assert!((ss.nbar - 1.0 / 3.0).abs() < 1e-12);
        assert!((ss.tc - 1.0 / 4f64.ln()).abs() < 1e-12);
        assert!((ss.tc - 0.721_35).abs() < 1e-5);
        for (n, p) in ss.pn.iter().enumerate() {
            assert!((p - 0.75 * 0.25f64.powi(n as i32)).abs() < 1e-12);
        }
        let d = diagnostics(&ss.state);
        assert!((d.mandel_q.unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!((d.min_quadrature_variance - (2.0 / 3.0 + 1.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn no_emission_gives_vacuum() {
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(1.0, 0.0)), 8).unwrap();
        let ss = steady_state(&gen).unwrap();
        assert!(ss.nbar.abs() < 1e-15);
        assert_eq!(ss.tc, 0.0);
        assert!(ss.mandel_q.is_none());
    }

    #[test]
    fn no_steady_state_when_emission_dominates() {
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(0.5, 0.5)), 8).unwrap();
        assert_eq!(steady_state(&gen), Err(Error::NoSteadyState));
        // cavity loss restores it
        let spec = GeneratorSpec {
            loss: 0.5,
            ..GeneratorSpec::thermal(RateSet::thermal(0.5, 0.5))
        };
        let ss = steady_state(&build_generator(&spec, 40).unwrap()).unwrap();
        assert!((ss.nbar - 1.0).abs() < 1e-8);
    }

    #[test]
    fn vacuum_quadratures() {
        let vac = FockDensityMatrix::vacuum(5);
        for k in 0..8 {
            assert!((quadrature_variance(&vac, k as f64 * 0.4) - 0.25).abs() < 1e-15);
        }
        assert!(diagnostics(&vac).mandel_q.is_none());
    }

    #[test]
    fn phase_sensitive_steady_state_is_stationary() {
        let gen = build_generator(&GeneratorSpec::phase_sensitive(squeezing_rates()), 24).unwrap();
        let ss = steady_state(&gen).unwrap();
        let resid = gen.apply(ss.state.entries()).norm();
        assert!(resid < 1e-12, "{resid}");
        let phys = ss.state.physicality();
        assert!(phys.is_physical(1e-8), "{phys:?}");
        assert!(ss.min_quadrature_variance <= quadrature_variance(&ss.state, 0.0) + 1e-15);
        assert!((ss.min_quadrature_variance - quadrature_variance(&ss.state, ss.theta_min)).abs() < 1e-14);
    }

    #[test]
    fn evolution_identity_and_stationarity() {
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(1.0, 0.25)), 30).unwrap();
        let rho = FockDensityMatrix::geometric(30, 0.25);
        let same = evolve(&rho, &gen, 0.0, &EvolveOptions::default()).unwrap();
        assert_eq!(same, rho);
        let later = evolve(
            &rho,
            &gen,
            1.0,
            &EvolveOptions {
                dt_max: 0.01,
                tail_tol: 1e-6,
            },
        )
        .unwrap();
        assert!((later.entries() - rho.entries()).norm() < 1e-10);
    }

    #[test]
    fn evolution_is_fourth_order() {
        let gen = build_generator(&GeneratorSpec::phase_sensitive(squeezing_rates()), 12).unwrap();
        let rho = FockDensityMatrix::vacuum(12);
        let run = |dt: f64| {
            evolve(
                &rho,
                &gen,
                2.0,
                &EvolveOptions {
                    dt_max: dt,
                    tail_tol: 1.0,
                },
            )
            .unwrap()
        };
        let (a, b, c) = (run(0.05), run(0.025), run(0.0125));
        let ratio = (a.entries() - b.entries()).norm() / (b.entries() - c.entries()).norm();
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn large_truncation_caps_the_step() {
        let rates = RateSet {
            absorption: 1.0,
            emission: 0.22,
            squeeze_1: c(-0.014, -0.097),
            squeeze_2: c(0.127, -0.361),
            frequency_shift: 0.8,
        };
        let gen = build_generator(&GeneratorSpec::phase_sensitive(rates), 80).unwrap();
        let out = evolve(&FockDensityMatrix::vacuum(80), &gen, 3.0, &EvolveOptions::default()).unwrap();
        assert!(out.min_eigenvalue() > -1e-12);
        assert!(out.tail_mass() < 1e-20);
    }

    #[test]
    fn tail_overflow_detected() {
        let gen = build_generator(&GeneratorSpec::thermal(RateSet::thermal(1.0, 2.0)), 4).unwrap();
        let r = evolve(&FockDensityMatrix::vacuum(4), &gen, 5.0, &EvolveOptions::default());
        assert!(matches!(r, Err(Error::TruncationOverflow(_))));
    }

    #[test]
    fn default_truncation() {
        assert_eq!(default_nmax(0.0), 8);
        assert_eq!(default_nmax(0.25), 17);
        assert!(0.25f64.powi(17) < 1e-10 && 0.25f64.powi(16) >= 1e-10);
        assert_eq!(default_nmax(0.999_999), 512);
    }
}
