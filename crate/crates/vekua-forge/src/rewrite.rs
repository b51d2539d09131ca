//! The rewriting pipeline, evaluated pointwise:
//!
//! 1. `substitute`: U = a22*u, V = v - a12*u turns the input system into an
//!    intermediate one whose line-1 principal part is -V_y + (1/alpha) U_x.
//!    Expanding the substitution with the product rule injects derivative
//!    terms of a12 and a22 into the lower-order coefficients (the "starred"
//!    coefficients below); this is why the main coefficients must be
//!    differentiable.
//! 2. `row_reduce`: add beta times line 1 to line 2 (cancelling U_x there),
//!    then scale line 1 by alpha. The result is the canonical form
//!    -alpha V_y + U_x + aU + bV = f, V_x + U_y + cU + dV = g.
//! 3. `assemble_vekua`: match the canonical form against
//!    dzbar(W) + A*W + B*conj(W) = F over the algebra with parameters
//!    (alpha, beta), where W = U + iV and dzbar = (1/2)(d/dx + i d/dy).
//!
//! Everything is computed as point values, not symbolic expressions: the
//! derivative terms come from jets, which keeps the algebra exact and avoids
//! quotient swell.

use crate::coeffexpr::{eval, eval_jet, Jet2};
use crate::ellsys::{EllipticSystem, SolutionPair, EPS_POS};
use crate::error::Error;
use crate::gcnum::{StructureParams, GC};

/// Point values of the system after the substitution U = a22*u,
/// V = v - a12*u, before the row operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntermediateSystem {
    pub a_star: f64,
    pub b_star: f64,
    pub c_star: f64,
    pub d_star: f64,
    /// Coefficient of U_x in line 1; equals a11/a22 = 1/alpha.
    pub inv_alpha_coeff: f64,
    /// Coefficient of U_x in line 2; equals (a21 + a12)/a22 = -beta/alpha.
    pub mixed_coeff: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Point values of the canonical system
/// -alpha V_y + U_x + aU + bV = f, V_x + U_y + cU + dV = g.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub g: f64,
}

/// Everything the rewrite produces at one point: the structure parameters,
/// the Vekua coefficients A, B and right-hand side F, and the substitution
/// values needed to push a solution of the original system forward to W.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VekuaPointData {
    pub structure: StructureParams,
    pub a: GC,
    pub b: GC,
    pub f: GC,
    /// value of a22 at the point (W = a22*u + i(v - a12*u))
    pub a22: f64,
    /// value of a12 at the point
    pub a12: f64,
}

/// Expands the substitution at a point. The starred coefficients are the
/// fully expanded lower-order terms:
///
/// ```text
/// a* = (a1 - dy(a12) + b1*a12)/a22 - a11*dx(a22)/a22^2
/// b* = b1
/// c* = (a2 + dx(a12) + b2*a12)/a22 - dy(a22)/a22 - (a12 + a21)*dx(a22)/a22^2
/// d* = b2
/// ```
///
/// These formulas are certified end to end by the residual check in the
/// verify module, not trusted.
pub fn substitute(sys: &EllipticSystem, x: f64, y: f64) -> Result<IntermediateSystem, Error> {
    let at = Error::eval_at(x, y);
    let a22 = eval_jet(&sys.a22, x, y).map_err(&at)?;
    if a22.value <= EPS_POS {
        return Err(Error::NonPositiveLeadingCoefficient {
            coefficient: "a22",
            value: a22.value,
            x,
            y,
        });
    }
    let a12 = eval_jet(&sys.a12, x, y).map_err(&at)?;
    let a11 = eval(&sys.a11, x, y).map_err(&at)?;
    let a21 = eval(&sys.a21, x, y).map_err(&at)?;
    let a1 = eval(&sys.a1, x, y).map_err(&at)?;
    let a2 = eval(&sys.a2, x, y).map_err(&at)?;
    let b1 = eval(&sys.b1, x, y).map_err(&at)?;
    let b2 = eval(&sys.b2, x, y).map_err(&at)?;
    let f1 = eval(&sys.f1, x, y).map_err(&at)?;
    let f2 = eval(&sys.f2, x, y).map_err(&at)?;

    let v22 = a22.value;
    // dx(a22)/a22^2 appears in both a* and c*
    let dx22_over_sq = a22.dx / (v22 * v22);
    Ok(IntermediateSystem {
        a_star: (a1 - a12.dy + b1 * a12.value) / v22 - a11 * dx22_over_sq,
        b_star: b1,
        c_star: (a2 + a12.dx + b2 * a12.value) / v22
            - a22.dy / v22
            - (a12.value + a21) * dx22_over_sq,
        d_star: b2,
        inv_alpha_coeff: a11 / v22,
        mixed_coeff: (a21 + a12.value) / v22,
        f1,
        f2,
    })
}

/// Applies the two row operations: line2 += beta*line1 (which cancels the
/// U_x term in line 2, since beta*(1/alpha) + (-beta/alpha) = 0), then
/// line1 *= alpha.
pub fn row_reduce(inter: &IntermediateSystem, s: StructureParams) -> Result<CanonicalPoint, Error> {
    if !s.is_elliptic() {
        return Err(Error::NotElliptic {
            alpha: s.alpha,
            beta: s.beta,
        });
    }
    Ok(CanonicalPoint {
        a: s.alpha * inter.a_star,
        b: s.alpha * inter.b_star,
        c: inter.c_star + s.beta * inter.a_star,
        d: inter.d_star + s.beta * inter.b_star,
        f: s.alpha * inter.f1,
        g: inter.f2 + s.beta * inter.f1,
    })
}

/// Matches the canonical point against dzbar(W) + A*W + B*conj(W) = F:
///
/// ```text
/// A = (1/4) (a - (beta/alpha) b + d  +  i (c - b/alpha))
/// B = (1/4) (a + (beta/alpha) b - d  +  i (c + b/alpha))
/// F = (1/2) (f + i g)
/// ```
///
/// The 1/2 on F pairs with dzbar = (1/2)(d/dx + i d/dy): expanding
/// 2*dzbar(W) reproduces the principal parts of both canonical lines
/// exactly, so every lower-order term (and the right-hand side) picks up
/// the same factor 1/2, which the 1/4 in A and B already reflects.
pub fn assemble_vekua(cp: &CanonicalPoint, s: StructureParams) -> Result<(GC, GC, GC), Error> {
    if !s.is_elliptic() {
        return Err(Error::NotElliptic {
            alpha: s.alpha,
            beta: s.beta,
        });
    }
    let b_beta = s.beta / s.alpha * cp.b;
    let b_alpha = cp.b / s.alpha;
    Ok((
        GC::new(0.25 * (cp.a - b_beta + cp.d), 0.25 * (cp.c - b_alpha)),
        GC::new(0.25 * (cp.a + b_beta - cp.d), 0.25 * (cp.c + b_alpha)),
        GC::new(0.5 * cp.f, 0.5 * cp.g),
    ))
}

/// The manufactured right-hand sides (f1, f2) of the original system
/// transform exactly like the configured ones: f = alpha*f1,
/// g = f2 + beta*f1, then F = (1/2)(f + ig).
pub fn push_forward_rhs(f1: f64, f2: f64, s: StructureParams) -> GC {
    GC::new(0.5 * (s.alpha * f1), 0.5 * (f2 + s.beta * f1))
}

/// Full pipeline at one point: structure parameters, substitution, row
/// operations, Vekua assembly. Errors are annotated with the stage name.
pub fn rewrite_at(sys: &EllipticSystem, x: f64, y: f64) -> Result<VekuaPointData, Error> {
    let s = sys
        .structure_params(x, y)
        .map_err(|e| e.at_stage("structure_params"))?;
    let inter = substitute(sys, x, y).map_err(|e| e.at_stage("substitute"))?;
    let cp = row_reduce(&inter, s).map_err(|e| e.at_stage("row_reduce"))?;
    let (a, b, f) = assemble_vekua(&cp, s).map_err(|e| e.at_stage("assemble_vekua"))?;
    let at = Error::eval_at(x, y);
    let a22 = eval(&sys.a22, x, y).map_err(&at)?;
    let a12 = eval(&sys.a12, x, y).map_err(&at)?;
    Ok(VekuaPointData {
        structure: s,
        a,
        b,
        f,
        a22,
        a12,
    })
}

/// W = U + iV at a point: (a22*u, v - a12*u).
pub fn push_forward_solution(
    p: &SolutionPair,
    sys: &EllipticSystem,
    x: f64,
    y: f64,
) -> Result<GC, Error> {
    let at = Error::eval_at(x, y);
    let u = eval(&p.u, x, y).map_err(&at)?;
    let v = eval(&p.v, x, y).map_err(&at)?;
    let a22 = eval(&sys.a22, x, y).map_err(&at)?;
    let a12 = eval(&sys.a12, x, y).map_err(&at)?;
    Ok(GC::new(a22 * u, v - a12 * u))
}

/// Jets of (U, V) = (a22*u, v - a12*u): automatic differentiation through
/// the substitution, so W_x and W_y are exact rather than finite-differenced.
pub fn push_forward_jet(
    p: &SolutionPair,
    sys: &EllipticSystem,
    x: f64,
    y: f64,
) -> Result<(Jet2, Jet2), Error> {
    let at = Error::eval_at(x, y);
    let u = eval_jet(&p.u, x, y).map_err(&at)?;
    let v = eval_jet(&p.v, x, y).map_err(&at)?;
    let a22 = eval_jet(&sys.a22, x, y).map_err(&at)?;
    let a12 = eval_jet(&sys.a12, x, y).map_err(&at)?;
    Ok((a22 * u, v - a12 * u))
}
