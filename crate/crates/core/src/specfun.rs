//! Complex gamma functions and integer-order Bessel functions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::complex::LogComplex;
use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal-sheet-free `ln Γ(z)`: the imaginary part is some branch of
/// `arg Γ(z)`, which is all a [`LogComplex`] needs.
pub(crate) fn ln_gamma_unwrapped(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "z", value: z.re });
    }
    if is_pole(z) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_unwrapped(one_minus)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

/// `ln sin(πz)` without overflowing for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    let i = Complex64::new(0.0, 1.0);
    if w.im.abs() < 30.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        // sin w = (i/2) e^{-iw} (1 − e^{2iw})
        Complex64::new(0.5, 0.0).ln() + i * (PI / 2.0) - i * w + (1.0 - (i * w * 2.0).exp()).ln()
    } else {
        Complex64::new(0.5, 0.0).ln() - i * (PI / 2.0) + i * w + (1.0 - (-i * w * 2.0).exp()).ln()
    }
}

/// `Γ(z)` in log-polar form.
pub fn log_gamma(z: Complex64) -> Result<LogComplex> {
    Ok(LogComplex::from_exponent(ln_gamma_unwrapped(z)?))
}

/// `Γ(z)` in Cartesian form; fails if the modulus overflows `f64`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    let lg = log_gamma(z)?;
    if lg.log_mag > 709.0 {
        return Err(Error::ParameterOutOfRange {
            name: "z",
            value: z.norm(),
        });
    }
    Ok(lg.to_complex())
}

/// Upper incomplete gamma `Γ(z, u) = ∫_u^∞ e^{-x} x^{z-1} dx` with the
/// principal branch of `x^{z-1}`.
///
/// `u = 0` reduces to `Γ(z)`. For `|u| ≤ max(1, |z|)` the Kummer series for the lower
/// function is subtracted from `Γ(z)`; otherwise the Legendre continued
/// fraction is used, with direct integration along `x = u + t`, `t ≥ 0`
/// (constant imaginary part, so the cut is never crossed) as the fallback.
pub fn upper_incomplete_gamma(z: Complex64, u: Complex64) -> Result<LogComplex> {
    if !(z.re.is_finite() && z.im.is_finite() && u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "u",
            value: u.norm(),
        });
    }
    if u.re == 0.0 && u.im == 0.0 {
        if z.re <= 0.0 {
            return Err(Error::ParameterOutOfRange { name: "z", value: z.re });
        }
        return log_gamma(z);
    }
    if u.im == 0.0 && u.re < 0.0 {
        return Err(Error::BranchCut { re: u.re, im: u.im });
    }
    // below |z| the lower function is the small part; above it the upper one is
    if u.norm() <= z.norm().max(1.0) && !is_pole(z) {
        return via_lower_series(z, u);
    }
    if let Some(v) = via_continued_fraction(z, u) {
        return Ok(v);
    }
    via_horizontal_path(z, u)
}

/// Legendre continued fraction
/// `Γ(z,u) = u^z e^{-u} / (u+1−z − 1(1−z)/(u+3−z − 2(2−z)/(u+5−z − …)))`,
/// evaluated by the modified Lentz method. `None` if it has not settled.
fn via_continued_fraction(z: Complex64, u: Complex64) -> Option<LogComplex> {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut b = u + 1.0 - z;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = if b.norm() < TINY { tiny.inv() } else { b.inv() };
    let mut h = d;
    for i in 1..100_000 {
        let k = i as f64;
        let an = -k * (k - z);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = tiny;
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            if !(h.re.is_finite() && h.im.is_finite()) {
                return None;
            }
            return Some(LogComplex::from_exponent(z * u.ln() - u) * LogComplex::from_complex(h));
        }
    }
    None
}

fn via_lower_series(z: Complex64, u: Complex64) -> Result<LogComplex> {
    // γ(z,u) = u^z e^{-u} Σ_k u^k / (z (z+1) ... (z+k))
    let mut term = z.inv();
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term = term * u / (z + k as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        if k > 500 {
            return Err(Error::NonConvergence {
                what: "lower incomplete gamma series",
            });
        }
    }
    let ln_lower = z * u.ln() - u + sum.ln();
    let ln_full = ln_gamma_unwrapped(z)?;
    let scale = ln_lower.re.max(ln_full.re);
    let diff = (ln_full - scale).exp() - (ln_lower - scale).exp();
    Ok(LogComplex::from_complex(diff).scale_log(scale))
}

fn via_horizontal_path(z: Complex64, u: Complex64) -> Result<LogComplex> {
    let zm1 = z - 1.0;
    let exponent = |t: f64| -> Complex64 {
        let x = u + t;
        -x + zm1 * x.ln()
    };
    let mut t_end = u.norm() + 60.0;

    // reference magnitude: the largest Re φ on a coarse sample of the path
    let mut scale = f64::NEG_INFINITY;
    let samples = 512;
    for k in 0..=samples {
        let t = t_end * (k as f64 / samples as f64).powi(2);
        scale = scale.max(exponent(t).re);
    }
    if u.re < 0.0 && -u.re < t_end {
        scale = scale.max(exponent(-u.re).re);
    }
    let mut extensions = 0;
    while exponent(t_end).re - scale > -45.0 {
        t_end += 60.0;
        extensions += 1;
        if extensions > 200 {
            return Err(Error::NonConvergence {
                what: "incomplete gamma truncation",
            });
        }
    }

    let mut pts: Vec<f64> = Vec::new();
    pts.push(0.0);
    let mut t = 0.5;
    while t < t_end {
        pts.push(t);
        t *= 2.0;
    }
    if u.re < 0.0 && -u.re < t_end {
        // closest approach to the origin
        let c = -u.re;
        let mut d = 0.5;
        while d < t_end {
            pts.push(c - d);
            pts.push(c + d);
            d *= 2.0;
        }
        pts.push(c);
    }
    pts.push(t_end);
    pts.retain(|&p| (0.0..=t_end).contains(&p));
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();

    let out = integrate(
        |t: f64| (exponent(t) - scale).exp(),
        &pts,
        Tolerance {
            abs: 0.0,
            rel: 1e-12,
            l1_rel: 1e-14,
        },
        200_000,
        "incomplete gamma path integral",
    )?;
    Ok(LogComplex::from_complex(out.value).scale_log(scale))
}

/// Integer-order Bessel function of the first kind.
///
/// Miller's backward recurrence normalised by `J₀ + 2 Σ J_{2k} = 1`.
pub fn bessel_j(p: i32, x: f64) -> Result<f64> {
    if p.unsigned_abs() > 50 {
        return Err(Error::ParameterOutOfRange {
            name: "p",
            value: p as f64,
        });
    }
    if !x.is_finite() || x.abs() > 100.0 {
        return Err(Error::ParameterOutOfRange { name: "x", value: x });
    }
    let n = p.unsigned_abs() as usize;
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x)
    let mut sign = 1.0;
    if p < 0 && n % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && n % 2 == 1 {
        sign = -sign;
    }
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let top = (n as f64).max(ax);
    let mut m = (top + 40.0 + 10.0 * top.cbrt()).ceil() as usize;
    m += m % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut ans = 0.0;
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        if k == n {
            ans = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = (2.0 * k as f64 / ax) * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e200 {
            cur *= 1e-200;
            next *= 1e-200;
            ans *= 1e-200;
            norm *= 1e-200;
        }
    }
    if n == 0 {
        ans = cur;
    }
    norm += cur;
    Ok(sign * ans / norm)
}
