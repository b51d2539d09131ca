//! Arithmetic in the two-dimensional commutative algebra with structure
//! polynomial `X^2 + beta*X + alpha`.
//!
//! Elements are written `u + i v` where the generator satisfies
//! `i^2 = -beta*i - alpha`, which gives the multiplication rule
//!
//! ```text
//! (u1 + i v1)(u2 + i v2) = (u1 u2 - alpha v1 v2) + i (u1 v2 + u2 v1 - beta v1 v2)
//! ```
//!
//! The classical complex numbers are the special case `alpha = 1, beta = 0`.
//! The algebra is a field exactly when `4*alpha - beta^2 > 0` (the quadratic
//! form `u^2 - beta*u*v + alpha*v^2` is then positive definite, so every
//! nonzero element is invertible). The structure parameters may vary from
//! point to point, so they are passed into each operation rather than stored
//! in the values.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Invertibility threshold for [`GC::inv`], relative to `u^2 + v^2 + 1`.
pub const EPS_DET: f64 = 1e-12;

/// Structure parameters `(alpha, beta)` of the polynomial `X^2 + beta*X + alpha`.
///
/// Both components must be finite. No sign constraint is imposed here;
/// consumers that require ellipticity check [`StructureParams::is_elliptic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureParams {
    pub alpha: f64,
    pub beta: f64,
}

impl StructureParams {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// The classical complex structure `alpha = 1, beta = 0`.
    pub const CLASSICAL: Self = Self::new(1.0, 0.0);

    /// Discriminant `4*alpha - beta^2` of the structure polynomial
    /// (with the opposite sign convention of the quadratic formula, so
    /// elliptic means positive).
    pub fn discriminant(self) -> f64 {
        4.0 * self.alpha - self.beta * self.beta
    }

    /// True when the algebra is elliptic, i.e. `4*alpha - beta^2 > 0`.
    pub fn is_elliptic(self) -> bool {
        self.discriminant() > 0.0
    }
}

impl fmt::Display for StructureParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha = {}, beta = {})", self.alpha, self.beta)
    }
}

/// An element `u + i v` of the algebra; `re` is the `u` component, `im` the
/// `v` component. Equality is componentwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GC {
    pub re: f64,
    pub im: f64,
}

/// Error returned by [`GC::inv`] when the quadratic form
/// `u^2 - beta*u*v + alpha*v^2` vanishes (relative to the element's size),
/// so no inverse exists. Always the case for zero; possible for nonzero
/// elements in non-elliptic algebras.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegenerateElement {
    pub re: f64,
    pub im: f64,
    pub det: f64,
}

impl fmt::Display for DegenerateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "element ({}, {}) is not invertible (quadratic form = {})",
            self.re, self.im, self.det
        )
    }
}

impl std::error::Error for DegenerateElement {}

impl GC {
    pub const ZERO: GC = GC { re: 0.0, im: 0.0 };
    pub const ONE: GC = GC { re: 1.0, im: 0.0 };
    /// The generator of the algebra (the "imaginary unit").
    pub const I: GC = GC { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// Product in the algebra with structure `s`.
    ///
    /// The `v1*v2` product is formed once so that the formula is exactly
    /// symmetric in floating point (commutativity holds bitwise).
    pub fn mul(self, rhs: GC, s: StructureParams) -> GC {
        let vv = self.im * rhs.im;
        GC {
            re: self.re * rhs.re - s.alpha * vv,
            im: self.re * rhs.im + rhs.re * self.im - s.beta * vv,
        }
    }

    /// Conjugation `u + i v -> u - i v`.
    ///
    /// Note `w * w.conj() = (u^2 + alpha v^2) + i (beta v^2)`, which is not
    /// real-valued unless `beta = 0`.
    pub fn conj(self) -> GC {
        GC {
            re: self.re,
            im: -self.im,
        }
    }

    /// Multiplicative inverse, solving `(u + i v)(p + i q) = 1` as a 2x2
    /// linear system with determinant `u^2 - beta*u*v + alpha*v^2`.
    pub fn inv(self, s: StructureParams) -> Result<GC, DegenerateElement> {
        let (u, v) = (self.re, self.im);
        let det = u * u - s.beta * (u * v) + s.alpha * (v * v);
        if det.abs() < EPS_DET * (u * u + v * v + 1.0) {
            return Err(DegenerateElement { re: u, im: v, det });
        }
        Ok(GC {
            re: (u - s.beta * v) / det,
            im: -v / det,
        })
    }

    /// Scalar multiple `t * (u + i v)`.
    pub fn scale(self, t: f64) -> GC {
        GC {
            re: t * self.re,
            im: t * self.im,
        }
    }

    /// Componentwise max-norm `max(|u|, |v|)`.
    pub fn norm_inf(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

impl Add for GC {
    type Output = GC;
    fn add(self, rhs: GC) -> GC {
        GC {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GC {
    type Output = GC;
    fn sub(self, rhs: GC) -> GC {
        GC {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for GC {
    type Output = GC;
    fn neg(self) -> GC {
        GC {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for GC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{} - {}i", self.re, -self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}
