use std::ops::{Add, Mul, Neg, Sub};

/// First-order jet of a function of (x, y) at a point: the value together
/// with both first partial derivatives. Propagating jets through arithmetic
/// is forward-mode automatic differentiation with two dual components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Jet2 {
    pub const fn new(value: f64, dx: f64, dy: f64) -> Jet2 {
        Jet2 { value, dx, dy }
    }

    /// A constant: both derivatives zero.
    pub const fn constant(c: f64) -> Jet2 {
        Jet2::new(c, 0.0, 0.0)
    }

    /// The coordinate function x evaluated at `x`.
    pub const fn var_x(x: f64) -> Jet2 {
        Jet2::new(x, 1.0, 0.0)
    }

    /// The coordinate function y evaluated at `y`.
    pub const fn var_y(y: f64) -> Jet2 {
        Jet2::new(y, 0.0, 1.0)
    }

    /// Chain rule for a univariate outer function: given `outer = g(value)`
    /// and `dfactor = g'(value)`, returns the jet of `g(f)`.
    pub fn chain(self, outer: f64, dfactor: f64) -> Jet2 {
        Jet2::new(outer, dfactor * self.dx, dfactor * self.dy)
    }

    pub fn scale(self, t: f64) -> Jet2 {
        Jet2::new(t * self.value, t * self.dx, t * self.dy)
    }

    pub fn is_finite(self) -> bool {
        self.value.is_finite() && self.dx.is_finite() && self.dy.is_finite()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value + rhs.value, self.dx + rhs.dx, self.dy + rhs.dy)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value - rhs.value, self.dx - rhs.dx, self.dy - rhs.dy)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.dx, -self.dy)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2::new(
            self.value * rhs.value,
            self.dx * rhs.value + self.value * rhs.dx,
            self.dy * rhs.value + self.value * rhs.dy,
        )
    }
}
