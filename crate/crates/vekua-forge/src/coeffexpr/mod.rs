//! Coefficient expressions in the variables (x, y): parsing, evaluation, and
//! exact first derivatives via forward-mode jets.
//!
//! The PDE coefficients arrive as text like `"2 + x^2"` or `"exp(-x*y)"`.
//! They are parsed once into an [`Expr`] and then evaluated pointwise, either
//! for the value alone ([`eval`]) or together with both first partials
//! ([`eval_jet`]). [`fd_partials`] is a deliberately independent
//! central-difference path used to cross-check the jet arithmetic.

pub mod jet;
pub mod parser;

pub use jet::Jet2;
pub use parser::{parse_expr, ParseError};

use std::fmt;

/// Coordinate variable inside an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Supported univariate functions. `Log` is the natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Tanh,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Parsed expression tree. Immutable after parsing; evaluation is pure, so
/// one tree may be evaluated from many threads concurrently.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Axis),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Expr, ParseError> {
        parse_expr(s)
    }
}

/// Binding strength used by the canonical printer; parenthesization happens
/// exactly when a child binds looser than its context requires.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 5,
        Expr::Pow(..) => 4,
        Expr::Mul(..) | Expr::Div(..) => 3,
        Expr::Neg(_) => 2,
        Expr::Add(..) | Expr::Sub(..) => 1,
    }
}

fn fmt_prec(e: &Expr, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(e) < ctx {
        write!(f, "(")?;
        fmt_prec(e, 0, f)?;
        return write!(f, ")");
    }
    match e {
        Expr::Num(v) => write!(f, "{v:?}"),
        Expr::Var(Axis::X) => write!(f, "x"),
        Expr::Var(Axis::Y) => write!(f, "y"),
        Expr::Neg(a) => {
            // the operand prints bare when it is a product or tighter, since
            // a term-opening minus scopes over a product
            write!(f, "-")?;
            fmt_prec(a, 3, f)
        }
        Expr::Add(a, b) => {
            fmt_prec(a, 1, f)?;
            write!(f, " + ")?;
            fmt_prec(b, 2, f)
        }
        Expr::Sub(a, b) => {
            fmt_prec(a, 1, f)?;
            write!(f, " - ")?;
            fmt_prec(b, 2, f)
        }
        Expr::Mul(a, b) => {
            fmt_prec(a, 3, f)?;
            write!(f, "*")?;
            fmt_prec(b, 4, f)
        }
        Expr::Div(a, b) => {
            fmt_prec(a, 3, f)?;
            write!(f, "/")?;
            fmt_prec(b, 4, f)
        }
        Expr::Pow(a, b) => {
            fmt_prec(a, 5, f)?;
            write!(f, "^")?;
            fmt_prec(b, 4, f)
        }
        Expr::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            fmt_prec(a, 0, f)?;
            write!(f, ")")
        }
    }
}

/// Canonical form: parsing the printed text reproduces the tree exactly,
/// provided the tree came from the parser (parser output never contains
/// negative literals; those print through `Neg`).
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, f)
    }
}

/// Domain failure while evaluating an expression at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    DivisionByZero,
    LogNonPositive { arg: f64 },
    SqrtOfNegative { arg: f64 },
    PowUndefined { base: f64, exponent: f64 },
    DerivativeUndefined { func: &'static str, arg: f64 },
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::LogNonPositive { arg } => {
                write!(f, "log of non-positive argument {arg}")
            }
            EvalError::SqrtOfNegative { arg } => {
                write!(f, "sqrt of negative argument {arg}")
            }
            EvalError::PowUndefined { base, exponent } => {
                write!(f, "power {base}^{exponent} is undefined")
            }
            EvalError::DerivativeUndefined { func, arg } => {
                write!(f, "derivative of {func} undefined at {arg}")
            }
            EvalError::NonFinite => write!(f, "evaluation produced a non-finite value"),
        }
    }
}

impl std::error::Error for EvalError {}

fn is_small_int(v: f64) -> bool {
    v.fract() == 0.0 && v.abs() <= i32::MAX as f64
}

/// Value of the expression at (x, y).
pub fn eval(e: &Expr, x: f64, y: f64) -> Result<f64, EvalError> {
    let v = eval_inner(e, x, y)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn eval_inner(e: &Expr, x: f64, y: f64) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Num(c) => *c,
        Expr::Var(Axis::X) => x,
        Expr::Var(Axis::Y) => y,
        Expr::Neg(a) => -eval_inner(a, x, y)?,
        Expr::Add(a, b) => eval_inner(a, x, y)? + eval_inner(b, x, y)?,
        Expr::Sub(a, b) => eval_inner(a, x, y)? - eval_inner(b, x, y)?,
        Expr::Mul(a, b) => eval_inner(a, x, y)? * eval_inner(b, x, y)?,
        Expr::Div(a, b) => {
            let den = eval_inner(b, x, y)?;
            if den == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            eval_inner(a, x, y)? / den
        }
        Expr::Pow(a, b) => pow_value(eval_inner(a, x, y)?, eval_inner(b, x, y)?)?,
        Expr::Call(func, a) => call_value(*func, eval_inner(a, x, y)?)?,
    })
}

fn call_value(func: Func, v: f64) -> Result<f64, EvalError> {
    Ok(match func {
        Func::Sin => v.sin(),
        Func::Cos => v.cos(),
        Func::Tan => v.tan(),
        Func::Exp => v.exp(),
        Func::Log => {
            if v <= 0.0 {
                return Err(EvalError::LogNonPositive { arg: v });
            }
            v.ln()
        }
        Func::Sqrt => {
            if v < 0.0 {
                return Err(EvalError::SqrtOfNegative { arg: v });
            }
            v.sqrt()
        }
        Func::Tanh => v.tanh(),
        Func::Abs => v.abs(),
    })
}

fn pow_value(base: f64, exponent: f64) -> Result<f64, EvalError> {
    if is_small_int(exponent) {
        if base == 0.0 && exponent < 0.0 {
            return Err(EvalError::PowUndefined { base, exponent });
        }
        Ok(base.powi(exponent as i32))
    } else if base > 0.0 {
        Ok(base.powf(exponent))
    } else if base == 0.0 && exponent > 0.0 {
        Ok(0.0)
    } else {
        Err(EvalError::PowUndefined { base, exponent })
    }
}

/// Value and both first partials at (x, y), by dual-number propagation.
///
/// Stricter than [`eval`]: points where the value exists but the derivative
/// does not (abs at 0, sqrt at 0) are errors.
pub fn eval_jet(e: &Expr, x: f64, y: f64) -> Result<Jet2, EvalError> {
    let j = jet_inner(e, x, y)?;
    if j.is_finite() {
        Ok(j)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn jet_inner(e: &Expr, x: f64, y: f64) -> Result<Jet2, EvalError> {
    Ok(match e {
        Expr::Num(c) => Jet2::constant(*c),
        Expr::Var(Axis::X) => Jet2::var_x(x),
        Expr::Var(Axis::Y) => Jet2::var_y(y),
        Expr::Neg(a) => -jet_inner(a, x, y)?,
        Expr::Add(a, b) => jet_inner(a, x, y)? + jet_inner(b, x, y)?,
        Expr::Sub(a, b) => jet_inner(a, x, y)? - jet_inner(b, x, y)?,
        Expr::Mul(a, b) => jet_inner(a, x, y)? * jet_inner(b, x, y)?,
        Expr::Div(a, b) => {
            let den = jet_inner(b, x, y)?;
            if den.value == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            let num = jet_inner(a, x, y)?;
            let q = num.value / den.value;
            Jet2::new(
                q,
                (num.dx - q * den.dx) / den.value,
                (num.dy - q * den.dy) / den.value,
            )
        }
        Expr::Pow(a, b) => pow_jet(jet_inner(a, x, y)?, jet_inner(b, x, y)?)?,
        Expr::Call(func, a) => call_jet(*func, jet_inner(a, x, y)?)?,
    })
}

fn call_jet(func: Func, j: Jet2) -> Result<Jet2, EvalError> {
    let v = j.value;
    Ok(match func {
        Func::Sin => j.chain(v.sin(), v.cos()),
        Func::Cos => j.chain(v.cos(), -v.sin()),
        Func::Tan => {
            let t = v.tan();
            j.chain(t, 1.0 + t * t)
        }
        Func::Exp => {
            let w = v.exp();
            j.chain(w, w)
        }
        Func::Log => {
            if v <= 0.0 {
                return Err(EvalError::LogNonPositive { arg: v });
            }
            j.chain(v.ln(), 1.0 / v)
        }
        Func::Sqrt => {
            if v < 0.0 {
                return Err(EvalError::SqrtOfNegative { arg: v });
            }
            if v == 0.0 {
                return Err(EvalError::DerivativeUndefined {
                    func: "sqrt",
                    arg: v,
                });
            }
            let w = v.sqrt();
            j.chain(w, 0.5 / w)
        }
        Func::Tanh => {
            let t = v.tanh();
            j.chain(t, 1.0 - t * t)
        }
        Func::Abs => {
            if v == 0.0 {
                return Err(EvalError::DerivativeUndefined {
                    func: "abs",
                    arg: v,
                });
            }
            j.chain(v.abs(), v.signum())
        }
    })
}

fn pow_jet(base: Jet2, exponent: Jet2) -> Result<Jet2, EvalError> {
    let constant_exponent = exponent.dx == 0.0 && exponent.dy == 0.0;
    if constant_exponent && is_small_int(exponent.value) {
        // integer power rule, valid for any base sign
        let n = exponent.value as i32;
        if n == 0 {
            return Ok(Jet2::constant(1.0));
        }
        if base.value == 0.0 && n < 0 {
            return Err(EvalError::PowUndefined {
                base: base.value,
                exponent: exponent.value,
            });
        }
        let value = base.value.powi(n);
        let dfactor = f64::from(n) * base.value.powi(n - 1);
        return Ok(base.chain(value, dfactor));
    }
    // general case as exp(exponent * log(base)); requires a positive base
    if base.value <= 0.0 {
        return Err(EvalError::PowUndefined {
            base: base.value,
            exponent: exponent.value,
        });
    }
    let value = base.value.powf(exponent.value);
    let lnb = base.value.ln();
    Ok(Jet2::new(
        value,
        value * (exponent.dx * lnb + exponent.value * base.dx / base.value),
        value * (exponent.dy * lnb + exponent.value * base.dy / base.value),
    ))
}

/// Central finite-difference approximation to both partials, step `h`.
///
/// This path goes through [`eval`] only and shares no derivative code with
/// [`eval_jet`], which makes it an independent oracle for the jet rules.
pub fn fd_partials(e: &Expr, x: f64, y: f64, h: f64) -> Result<(f64, f64), EvalError> {
    debug_assert!(h > 0.0);
    let px = (eval(e, x + h, y)? - eval(e, x - h, y)?) / (2.0 * h);
    let py = (eval(e, x, y + h)? - eval(e, x, y - h)?) / (2.0 * h);
    Ok((px, py))
}
