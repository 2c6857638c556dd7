//! Complex scalars and their log-polar form.
//!
//! Prefactors such as `e^{πω/2α}` overflow `f64` long before the physical
//! quantities they multiply do, so amplitudes travel as [`LogComplex`].

use core::f64::consts::PI;
use core::ops::{Div, Mul, Neg};

use num_complex::Complex64;

/// Cartesian complex scalar used at every public boundary.
pub type ComplexScalar = Complex64;

/// Wrap an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    let two_pi = 2.0 * PI;
    let mut p = phase - two_pi * (phase / two_pi).round();
    if p <= -PI {
        p += two_pi;
    } else if p > PI {
        p -= two_pi;
    }
    p
}

/// A complex number stored as `exp(log_mag + i·phase)`.
///
/// `log_mag = -∞` encodes zero. The phase is always wrapped to `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    /// `exp(w)` for a complex exponent `w`.
    pub fn from_exponent(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        // hypot keeps tiny/huge components from under/overflowing
        Self::new(z.re.hypot(z.im).ln(), z.im.atan2(z.re))
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.log_mag.exp();
        Complex64::new(m * self.phase.cos(), m * self.phase.sin())
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        (self.log_mag.is_finite() || self.is_zero()) && self.phase.is_finite()
    }

    /// |z|² in log space.
    pub fn log_norm_sqr(self) -> f64 {
        2.0 * self.log_mag
    }

    pub fn norm_sqr(self) -> f64 {
        (2.0 * self.log_mag).exp()
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_mag, -self.phase)
    }

    /// Multiply by `e^{s}` for real `s`.
    pub fn scale_log(self, s: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mag + s, self.phase)
    }

    /// Sum evaluated relative to the larger magnitude so neither term overflows.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let s = self.log_mag.max(other.log_mag);
        let sum = self.scale_log(-s).to_complex() + other.scale_log(-s).to_complex();
        Self::from_complex(sum).scale_log(s)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mag, self.phase + PI)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}
