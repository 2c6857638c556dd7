//! Adaptive Gauss–Kronrod quadrature for oscillatory integrands.
//!
//! Every oscillatory integral in the crate has a phase rate bounded by a
//! monotone function of time (`ω + ν e^{-ατ}`), so panels are first laid out
//! to keep the phase change per panel below a fixed angle and then refined
//! by bisection on the Kronrod–Gauss error estimate.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: scalars, vectors, matrices.
pub trait QuadValue: Clone {
    fn zeros_like(&self) -> Self;
    /// `self += w * x`
    fn add_scaled(&mut self, w: f64, x: &Self);
    fn norm(&self) -> f64;
    fn distance(&self, other: &Self) -> f64;
}

impl QuadValue for Complex64 {
    fn zeros_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += x * w;
    }
    fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl<const N: usize> QuadValue for [Complex64; N] {
    fn zeros_like(&self) -> Self {
        [Complex64::new(0.0, 0.0); N]
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x.iter()) {
            *a += b * w;
        }
    }
    fn norm(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl QuadValue for DMatrix<Complex64> {
    fn zeros_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x.iter()) {
            *a += b * w;
        }
    }
    fn norm(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Convergence target: the error estimate must fall below the largest of
/// `abs`, `rel·|I|` and `l1_rel·∫|f|`.
///
/// The last term is the rounding floor of an oscillatory sum whose value is
/// much smaller than the integral of its modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub l1_rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            l1_rel: 1e-15,
        }
    }

    pub fn target(&self, value_norm: f64, l1: f64) -> f64 {
        self.abs.max(self.rel * value_norm).max(self.l1_rel * l1)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-14, 1e-12)
    }
}

#[derive(Debug, Clone)]
pub struct QuadOutcome<V> {
    pub value: V,
    pub error: f64,
    /// Integral of the integrand norm, used for the rounding floor.
    pub l1: f64,
    pub panels: usize,
}

/// One G7–K15 panel: (Kronrod value, |K − G|, ∫|f|).
pub fn gk15<V, F>(f: &F, a: f64, b: f64) -> (V, f64, f64)
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc.zeros_like();
    let mut gauss = fc.zeros_like();
    kron.add_scaled(WGK[7], &fc);
    gauss.add_scaled(WG[3], &fc);
    let mut l1 = WGK[7] * fc.norm();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron.add_scaled(WGK[j], &f1);
        kron.add_scaled(WGK[j], &f2);
        l1 += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss.add_scaled(WG[j / 2], &f1);
            gauss.add_scaled(WG[j / 2], &f2);
        }
    }
    let mut k = kron.zeros_like();
    k.add_scaled(h, &kron);
    let mut g = gauss.zeros_like();
    g.add_scaled(h, &gauss);
    let err = k.distance(&g);
    (k, err, l1 * h.abs())
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    l1: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration starting from the panels delimited by
/// `breakpoints` (sorted, at least two entries).
pub fn integrate<V, F>(
    f: F,
    breakpoints: &[f64],
    tol: Tolerance,
    max_panels: usize,
    what: &'static str,
) -> Result<QuadOutcome<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    assert!(breakpoints.len() >= 2, "integrate needs at least one panel");
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    for w in breakpoints.windows(2) {
        let (value, error, l1) = gk15(&f, w[0], w[1]);
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            l1,
        });
    }
    loop {
        let (value, error, l1) = totals(&heap);
        let target = tol.target(value.norm(), l1);
        if error <= target || !error.is_finite() {
            if !value.norm().is_finite() {
                return Err(Error::NonConvergence { what });
            }
            return Ok(QuadOutcome {
                value,
                error,
                l1,
                panels: heap.len(),
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::ToleranceNotReached { what, estimate: error });
        }
        // refine the worst panels in a batch to amortise the totals pass
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.peek() else { break };
            if worst.error <= target / heap.len() as f64 {
                break;
            }
            let p = heap.pop().unwrap();
            let mid = 0.5 * (p.a + p.b);
            if mid <= p.a || mid >= p.b {
                // panel below floating-point resolution
                return Err(Error::ToleranceNotReached { what, estimate: error });
            }
            let (v1, e1, l1a) = gk15(&f, p.a, mid);
            let (v2, e2, l1b) = gk15(&f, mid, p.b);
            heap.push(Panel {
                a: p.a,
                b: mid,
                value: v1,
                error: e1,
                l1: l1a,
            });
            heap.push(Panel {
                a: mid,
                b: p.b,
                value: v2,
                error: e2,
                l1: l1b,
            });
        }
    }
}

fn totals<V: QuadValue>(heap: &BinaryHeap<Panel<V>>) -> (V, f64, f64) {
    let mut it = heap.iter();
    let first = it.next().expect("non-empty panel set");
    let mut value = first.value.clone();
    let mut error = first.error;
    let mut l1 = first.l1;
    for p in it {
        value.add_scaled(1.0, &p.value);
        error += p.error;
        l1 += p.l1;
    }
    (value, error, l1)
}

/// Breakpoints on `[a, b]` such that `rate(x)·h ≤ max_phase` on every panel,
/// with `rate` evaluated at the panel start. `rate` must be non-increasing.
pub fn oscillatory_breakpoints<R: Fn(f64) -> f64>(a: f64, b: f64, rate: R, max_phase: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    pts.push(a);
    if b <= a {
        return pts;
    }
    let mut x = a;
    while x < b {
        let r = rate(x).abs().max(1e-300);
        let h = (max_phase / r).min(b - a).max((b - a) * 1e-12);
        x = (x + h).min(b);
        if b - x < 1e-9 * h {
            x = b;
        }
        pts.push(x);
    }
    pts
}

/// Time-ordered double integral `∫_a^b dx outer(x, ∫_a^x inner(y) dy)`.
///
/// The inner antiderivative is carried across panels and refreshed at the
/// Kronrod nodes of each outer panel by a short GK15 on `[panel start, node]`.
/// Panels are halved in phase until two successive layouts agree.
pub fn ordered_double<W, V, R, FI, FO>(
    a: f64,
    b: f64,
    rate: R,
    inner: FI,
    outer: FO,
    tol: Tolerance,
    what: &'static str,
) -> Result<QuadOutcome<V>>
where
    W: QuadValue,
    V: QuadValue,
    R: Fn(f64) -> f64,
    FI: Fn(f64) -> W,
    FO: Fn(f64, &W) -> V,
{
    let mut previous: Option<(V, f64)> = None;
    let mut max_phase = FRAC_PI_4;
    for _level in 0..8 {
        let pts = oscillatory_breakpoints(a, b, &rate, max_phase);
        let (value, l1) = ordered_on_panels(&pts, &inner, &outer);
        if let Some((prev, _)) = &previous {
            let err = value.distance(prev);
            if err <= tol.target(value.norm(), l1) {
                return Ok(QuadOutcome {
                    value,
                    error: err,
                    l1,
                    panels: pts.len() - 1,
                });
            }
        }
        previous = Some((value, l1));
        max_phase *= 0.5;
    }
    let (value, _) = previous.unwrap();
    Err(Error::ToleranceNotReached {
        what,
        estimate: value.norm(),
    })
}

fn ordered_on_panels<W, V, FI, FO>(pts: &[f64], inner: &FI, outer: &FO) -> (V, f64)
where
    W: QuadValue,
    V: QuadValue,
    FI: Fn(f64) -> W,
    FO: Fn(f64, &W) -> V,
{
    let a = pts[0];
    let probe_inner = inner(a);
    let mut antideriv = probe_inner.zeros_like();
    let mut total: Option<V> = None;
    let mut l1 = 0.0;
    for w in pts.windows(2) {
        let (p0, p1) = (w[0], w[1]);
        let c = 0.5 * (p0 + p1);
        let h = 0.5 * (p1 - p0);
        let mut node = |x: f64, weight: f64, total: &mut Option<V>| {
            let mut acc = antideriv.clone();
            if x > p0 {
                let (part, _, _) = gk15(inner, p0, x);
                acc.add_scaled(1.0, &part);
            }
            let val = outer(x, &acc);
            l1 += weight * h * val.norm();
            match total {
                Some(t) => t.add_scaled(weight * h, &val),
                None => {
                    let mut t = val.zeros_like();
                    t.add_scaled(weight * h, &val);
                    *total = Some(t);
                }
            }
        };
        node(c, WGK[7], &mut total);
        for j in 0..7 {
            node(c - h * XGK[j], WGK[j], &mut total);
            node(c + h * XGK[j], WGK[j], &mut total);
        }
        let (whole, _, _) = gk15(inner, p0, p1);
        antideriv.add_scaled(1.0, &whole);
    }
    let total = match total {
        Some(t) => t,
        None => {
            let probe = outer(a, &antideriv);
            probe.zeros_like()
        }
    };
    (total, l1)
}
