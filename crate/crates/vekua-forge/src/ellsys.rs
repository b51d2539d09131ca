//! The input object: a first-order linear system in the plane,
//!
//! ```text
//! -v_y + a11 u_x + a12 u_y + a1 u + b1 v = f1
//!  v_x + a21 u_x + a22 u_y + a2 u + b2 v = f2
//! ```
//!
//! with expression-valued coefficients, plus ellipticity classification, the
//! structure parameters (alpha, beta) it induces, and a generator for the
//! family of variable-coefficient systems whose structure parameters are
//! constant.

use crate::coeffexpr::{eval, Expr};
use crate::error::Error;
use crate::gcnum::StructureParams;

/// Positivity threshold for the leading coefficients a11, a22; the pipeline
/// divides by both, so values at or below this are rejected with the point.
pub const EPS_POS: f64 = 1e-12;

/// Coefficients of the system above. Naming follows the line/derivative
/// position: a12 multiplies u_y in line 1, a21 multiplies u_x in line 2.
///
/// Ellipticity (a11 > 0, a22 > 0, delta > 0 pointwise) is checked by
/// [`EllipticSystem::classify`], never assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticSystem {
    pub a11: Expr,
    pub a12: Expr,
    pub a21: Expr,
    pub a22: Expr,
    pub a1: Expr,
    pub a2: Expr,
    pub b1: Expr,
    pub b2: Expr,
    pub f1: Expr,
    pub f2: Expr,
}

/// A candidate or manufactured solution of the system.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPair {
    pub u: Expr,
    pub v: Expr,
}

/// Rectangle with a uniform sampling grid, node-inclusive on all edges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

/// Outcome of grid classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification {
    Elliptic,
    NotElliptic {
        x: f64,
        y: f64,
        violation: EllipticityViolation,
    },
}

/// Which ellipticity condition failed at the witness point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EllipticityViolation {
    LeadingCoefficient {
        coefficient: &'static str,
        value: f64,
    },
    Discriminant {
        delta: f64,
    },
}

impl std::fmt::Display for EllipticityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EllipticityViolation::LeadingCoefficient { coefficient, value } => {
                write!(f, "{coefficient} = {value} <= 0")
            }
            EllipticityViolation::Discriminant { delta } => {
                write!(f, "delta = {delta} <= 0")
            }
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Elliptic => write!(f, "Elliptic"),
            Classification::NotElliptic { x, y, violation } => {
                write!(f, "NotElliptic at ({x}, {y}): {violation}")
            }
        }
    }
}

impl Region {
    /// Validates bounds and resolution: finite, x_min < x_max, y_min < y_max,
    /// nx >= 2, ny >= 2.
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Region, Error> {
        let r = Region {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bounds = [self.x_min, self.x_max, self.y_min, self.y_max];
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidRegion(format!(
                "bounds must be finite, got x: [{}, {}], y: [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.x_min >= self.x_max {
            return Err(Error::InvalidRegion(format!(
                "x_min = {} must be < x_max = {}",
                self.x_min, self.x_max
            )));
        }
        if self.y_min >= self.y_max {
            return Err(Error::InvalidRegion(format!(
                "y_min = {} must be < y_max = {}",
                self.y_min, self.y_max
            )));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidRegion(format!(
                "grid must be at least 2x2, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    /// x coordinate of grid column `i`; the first and last columns are the
    /// exact bounds (not reconstructed from the step, which could round).
    pub fn node_x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + (self.x_max - self.x_min) * (i as f64) / ((self.nx - 1) as f64)
        }
    }

    pub fn node_y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.y_max
        } else {
            self.y_min + (self.y_max - self.y_min) * (j as f64) / ((self.ny - 1) as f64)
        }
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    /// All grid nodes in deterministic row-major order: x varies fastest,
    /// y advances per row. This is the order every grid output uses.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (self.node_x(i), self.node_y(j))))
    }
}

impl EllipticSystem {
    /// The Cauchy-Riemann system: identity principal part, no lower-order
    /// terms, zero right-hand sides. Fixed point of the whole pipeline.
    pub fn classical() -> EllipticSystem {
        let zero = || Expr::Num(0.0);
        EllipticSystem {
            a11: Expr::Num(1.0),
            a12: zero(),
            a21: zero(),
            a22: Expr::Num(1.0),
            a1: zero(),
            a2: zero(),
            b1: zero(),
            b2: zero(),
            f1: zero(),
            f2: zero(),
        }
    }

    /// The ellipticity discriminant delta = a11*a22 - ((a12 + a21)/2)^2
    /// at a point.
    pub fn delta(&self, x: f64, y: f64) -> Result<f64, Error> {
        let at = Error::eval_at(x, y);
        let a11 = eval(&self.a11, x, y).map_err(&at)?;
        let a22 = eval(&self.a22, x, y).map_err(&at)?;
        let a12 = eval(&self.a12, x, y).map_err(&at)?;
        let a21 = eval(&self.a21, x, y).map_err(&at)?;
        let mixed = 0.5 * (a12 + a21);
        Ok(a11 * a22 - mixed * mixed)
    }

    /// Checks a11 > 0, a22 > 0, delta > 0 at every node of `r`, scanning in
    /// grid order and reporting the first violation as the witness.
    pub fn classify(&self, r: &Region) -> Result<Classification, Error> {
        r.validate()?;
        for (x, y) in r.nodes() {
            let at = Error::eval_at(x, y);
            let a11 = eval(&self.a11, x, y).map_err(&at)?;
            if a11 <= 0.0 {
                return Ok(Classification::NotElliptic {
                    x,
                    y,
                    violation: EllipticityViolation::LeadingCoefficient {
                        coefficient: "a11",
                        value: a11,
                    },
                });
            }
            let a22 = eval(&self.a22, x, y).map_err(&at)?;
            if a22 <= 0.0 {
                return Ok(Classification::NotElliptic {
                    x,
                    y,
                    violation: EllipticityViolation::LeadingCoefficient {
                        coefficient: "a22",
                        value: a22,
                    },
                });
            }
            let delta = self.delta(x, y)?;
            if delta <= 0.0 {
                return Ok(Classification::NotElliptic {
                    x,
                    y,
                    violation: EllipticityViolation::Discriminant { delta },
                });
            }
        }
        Ok(Classification::Elliptic)
    }

    /// Structure parameters induced at a point:
    /// alpha = a22/a11, beta = -(a21 + a12)/a11.
    ///
    /// A beta of -0.0 is normalized to 0.0 so that output formatting is
    /// stable for systems with a12 = a21 = 0.
    pub fn structure_params(&self, x: f64, y: f64) -> Result<StructureParams, Error> {
        let at = Error::eval_at(x, y);
        let a11 = eval(&self.a11, x, y).map_err(&at)?;
        if a11 <= EPS_POS {
            return Err(Error::NonPositiveLeadingCoefficient {
                coefficient: "a11",
                value: a11,
                x,
                y,
            });
        }
        let a22 = eval(&self.a22, x, y).map_err(&at)?;
        let a12 = eval(&self.a12, x, y).map_err(&at)?;
        let a21 = eval(&self.a21, x, y).map_err(&at)?;
        let alpha = a22 / a11;
        let beta = -(a21 + a12) / a11;
        Ok(StructureParams {
            alpha: if alpha == 0.0 { 0.0 } else { alpha },
            beta: if beta == 0.0 { 0.0 } else { beta },
        })
    }
}

/// Light constant folding so generated systems print as clean expressions:
/// `c * e` with `c >= 0`.
fn scaled(c: f64, e: &Expr) -> Expr {
    if let Expr::Num(v) = e {
        return Expr::Num(c * v);
    }
    if c == 1.0 {
        return e.clone();
    }
    Expr::Mul(Box::new(Expr::Num(c)), Box::new(e.clone()))
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 0.0)
}

/// Builds a system with variable coefficients whose structure parameters are
/// the constants (alpha0, beta0) wherever `lambda > 0`:
///
/// ```text
/// a11 = lambda,  a22 = alpha0*lambda,  a12 = mu,  a21 = -beta0*lambda - mu
/// ```
///
/// with zero lower-order coefficients and right-hand sides. Then
/// a22/a11 = alpha0 and -(a21 + a12)/a11 = beta0 identically; `mu` is the
/// free off-diagonal degree of freedom left by the constraint
/// a12 + a21 = -beta0*lambda.
pub fn make_constant_structure_family(
    alpha0: f64,
    beta0: f64,
    lambda: &Expr,
    mu: &Expr,
) -> Result<EllipticSystem, Error> {
    let disc = 4.0 * alpha0 - beta0 * beta0;
    // disc.is_nan() keeps NaN inputs (and inf - inf overflow) on the
    // rejection path; a bare `disc <= 0.0` would let them through.
    if disc.is_nan() || disc <= 0.0 || !alpha0.is_finite() || !beta0.is_finite() {
        return Err(Error::NotElliptic {
            alpha: alpha0,
            beta: beta0,
        });
    }
    // -beta0*lambda built sign-aware so the printed form stays canonical
    let beta_part = if beta0 > 0.0 {
        Some(Expr::Neg(Box::new(scaled(beta0, lambda))))
    } else if beta0 < 0.0 {
        Some(scaled(-beta0, lambda))
    } else {
        None
    };
    let a21 = match (beta_part, is_zero(mu)) {
        (None, true) => Expr::Num(0.0),
        (None, false) => Expr::Neg(Box::new(mu.clone())),
        (Some(bp), true) => bp,
        (Some(bp), false) => Expr::Sub(Box::new(bp), Box::new(mu.clone())),
    };
    let zero = || Expr::Num(0.0);
    Ok(EllipticSystem {
        a11: lambda.clone(),
        a12: mu.clone(),
        a21,
        a22: scaled(alpha0, lambda),
        a1: zero(),
        a2: zero(),
        b1: zero(),
        b2: zero(),
        f1: zero(),
        f2: zero(),
    })
}
