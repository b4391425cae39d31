//! A small language for complex functions of `z`.
//!
//! ```
//! use grpf::expr::parse;
//! use num_complex::Complex;
//!
//! let f = parse("(z-1)*(z-i)^2*(z+1)^3/(z+i)").unwrap();
//! assert_eq!(f.eval(Complex::new(0.0, 0.0)), Complex::new(0.0, -1.0));
//! ```

mod lexer;
mod parser;

use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use crate::phase::AnalyticFunction;
use crate::specials::{bessel_j, bessel_y};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}{}", expected.as_ref().map(|e| format!(" (expected {e})")).unwrap_or_default())]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub expected: Option<String>,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>, expected: Option<&str>) -> Self {
        Self { position, message: message.into(), expected: expected.map(str::to_string) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    BesselJ(u32),
    BesselY(u32),
}

impl Func {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "exp" => Self::Exp,
            "log" => Self::Log,
            "sqrt" => Self::Sqrt,
            "sin" => Self::Sin,
            "cos" => Self::Cos,
            "tan" => Self::Tan,
            "sinh" => Self::Sinh,
            "cosh" => Self::Cosh,
            "tanh" => Self::Tanh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Exp => "exp",
            Self::Log => "log",
            Self::Sqrt => "sqrt",
            Self::Sin => "sin",
            Self::Cos => "cos",
            Self::Tan => "tan",
            Self::Sinh => "sinh",
            Self::Cosh => "cosh",
            Self::Tanh => "tanh",
            Self::BesselJ(_) => "besselj",
            Self::BesselY(_) => "bessely",
        }
    }
}

/// Expression tree. Literals are never negative; `-2` is `Neg(Real(2))`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Real(f64),
    Imag(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Parse an expression in `z`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parser::parse(src)
}

/// Exponents up to this size are applied by repeated multiplication.
const MAX_INT_POW: f64 = 64.0;

fn int_pow<T: Scalar>(z: Complex<T>, n: i64) -> Complex<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    for _ in 0..n.unsigned_abs() {
        acc = acc * z;
    }
    if n < 0 {
        Complex::new(T::one(), T::zero()) / acc
    } else {
        acc
    }
}

fn pow<T: Scalar>(z: Complex<T>, w: Complex<T>) -> Complex<T> {
    if w.im == T::zero() && w.re.fract() == T::zero() && w.re.abs() <= T::lit(MAX_INT_POW) {
        return int_pow(z, w.re.to_i64().unwrap_or(0));
    }
    if z.re == T::zero() && z.im == T::zero() {
        return if w.re > T::zero() {
            Complex::new(T::zero(), T::zero())
        } else {
            Complex::new(T::infinity(), T::zero())
        };
    }
    (w * z.ln()).exp()
}

impl Expr {
    /// Value at `z`. Division by zero or an out-of-range Bessel argument
    /// gives a non-finite value, not an error.
    pub fn eval<T: Scalar>(&self, z: Complex<T>) -> Complex<T> {
        let zero = T::zero();
        match self {
            Expr::Real(x) => Complex::new(T::lit(*x), zero),
            Expr::Imag(x) => Complex::new(zero, T::lit(*x)),
            Expr::Const(Constant::Pi) => Complex::new(T::PI(), zero),
            Expr::Const(Constant::E) => Complex::new(T::E(), zero),
            Expr::Var => z,
            // 0 - x keeps a +0 imaginary part, so -4 stays on the principal side of the cut
            Expr::Neg(a) => Complex::new(zero, zero) - a.eval(z),
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval(z), b.eval(z));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => pow(x, y),
                }
            }
            Expr::Call(f, a) => {
                let x = a.eval(z);
                let nan = Complex::new(T::nan(), T::nan());
                match f {
                    Func::Exp => x.exp(),
                    Func::Log => x.ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::BesselJ(m) => bessel_j(*m as usize, x).unwrap_or(nan),
                    Func::BesselY(m) => bessel_y(*m as usize, x).unwrap_or(nan),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Real(x) => write!(f, "{x}"),
            Expr::Imag(x) if *x == 1.0 => write!(f, "i"),
            Expr::Imag(x) => write!(f, "{x}i"),
            Expr::Const(Constant::Pi) => write!(f, "pi"),
            Expr::Const(Constant::E) => write!(f, "e"),
            Expr::Var => write!(f, "z"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, a.precedence() < 3)
            }
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                if *op == BinOp::Pow {
                    wrap(f, a, a.precedence() <= p)?;
                    write!(f, "{sym}")?;
                    wrap(f, b, b.precedence() < 3)
                } else {
                    wrap(f, a, a.precedence() < p)?;
                    write!(f, "{sym}")?;
                    wrap(f, b, b.precedence() <= p)
                }
            }
            Expr::Call(func, a) => match func {
                Func::BesselJ(m) | Func::BesselY(m) => write!(f, "{}({m}, {a})", func.name()),
                _ => write!(f, "{}({a})", func.name()),
            },
        }
    }
}

/// A parsed expression usable as the function under analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprFunction {
    pub source: String,
    pub expr: Expr,
}

impl ExprFunction {
    pub fn new(source: &str) -> Result<Self, ParseError> {
        Ok(Self { source: source.to_string(), expr: parse(source)? })
    }
}

impl<T: Scalar> AnalyticFunction<T> for ExprFunction {
    fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        self.expr.eval(z)
    }

    fn name(&self) -> String {
        "expr".into()
    }

    fn metadata(&self) -> Vec<(String, String)> {
        vec![("expression".into(), self.source.clone())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn at(src: &str, z: Complex<f64>) -> Complex<f64> {
        parse(src).unwrap().eval(z)
    }

    #[test]
    fn precedence_table() {
        let z = c(0.0, 0.0);
        assert_eq!(at("1+2*3^2", z), c(19.0, 0.0));
        assert_eq!(at("2^3^2", z), c(512.0, 0.0));
        assert_eq!(at("-2^2", z), c(-4.0, 0.0));
        assert_eq!(at("(-2)^2", z), c(4.0, 0.0));
        assert_eq!(at("2^-1", z), c(0.5, 0.0));
        assert_eq!(at("8/4/2", z), c(1.0, 0.0));
        assert_eq!(at("1-2-3", z), c(-4.0, 0.0));
        assert_eq!(at("2*-3", z), c(-6.0, 0.0));
    }

    #[test]
    fn demo_function_structure() {
        let e = parse("(z-1)*(z-i)^2*(z+1)^3/(z+i)").unwrap();
        // ((a*b)*c)/d
        let Expr::Binary(BinOp::Div, num, _) = &e else { panic!("{e:?}") };
        let Expr::Binary(BinOp::Mul, ab, _) = num.as_ref() else { panic!() };
        assert!(matches!(ab.as_ref(), Expr::Binary(BinOp::Mul, ..)));
        assert_eq!(e.eval(c(0.0, 0.0)), c(0.0, -1.0));
        assert!(!e.eval(c(0.0, -1.0)).is_finite());
    }

    #[test]
    fn functions_and_constants() {
        let v = at("exp(z)", c(0.0, std::f64::consts::PI));
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(at("sqrt(-4)", c(0.0, 0.0)), c(0.0, 2.0));
        assert!((at("log(-1)", c(0.0, 0.0)) - c(0.0, std::f64::consts::PI)).norm() < 1e-15);
        assert!((at("e^(i*pi)", c(0.0, 0.0)) - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(at("2.5i", c(0.0, 0.0)), c(0.0, 2.5));
        let z = c(0.7, -0.3);
        assert!((at("sin(z)^2 + cos(z)^2", z) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((at("tanh(z) - sinh(z)/cosh(z)", z)).norm() < 1e-15);
        assert!((at("tan(z)*cos(z) - sin(z)", z)).norm() < 1e-15);
        assert_eq!(at("besselj(1, z)", z), bessel_j(1, z).unwrap());
        assert_eq!(at("bessely(0, z)", z), bessel_y(0, z).unwrap());
        assert!(!at("bessely(0, z)", c(0.0, 0.0)).is_finite());
        assert!(!at("besselj(0, z)", c(40.0, 0.0)).is_finite());
    }

    #[test]
    fn non_integer_powers_use_principal_log() {
        let z = c(-1.0, 0.0);
        let v = at("z^0.5", z);
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(at("0^0.5", z), c(0.0, 0.0));
        assert!(!at("0^(-0.5)", z).is_finite());
        assert_eq!(at("z^0", c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "(z-1)*(z-i)^2*(z+1)^3/(z+i)",
            "-z^2",
            "(-z)^2",
            "2^3^2",
            "(2^3)^2",
            "1-(2-3)",
            "1/(2/z)",
            "--z",
            "2^-z",
            "besselj(3, 2*z) - bessely(0,z)",
            "exp(-(z*pi))*e",
            "1.5e-20 + 2.5i",
        ] {
            let a = parse(src).unwrap();
            let printed = a.to_string();
            assert_eq!(parse(&printed).unwrap(), a, "{src} -> {printed}");
        }
        assert_eq!(parse("(z-1)*(z-i)^2").unwrap().to_string(), "(z - 1)*(z - i)^2");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("z +* 2").unwrap_err();
        assert_eq!(e.position, 3);
        assert_eq!(e.expected.as_deref(), Some("operand"));
        assert_eq!(parse("foo(z)").unwrap_err().position, 0);
        assert_eq!(parse("sin(z").unwrap_err().position, 5);
        assert_eq!(parse("besselj(1.5, z)").unwrap_err().position, 8);
        assert_eq!(parse("").unwrap_err().position, 0);
        assert!(parse("z(2)").unwrap_err().message.contains("not a function"));
    }

    #[test]
    fn single_precision_eval() {
        let e = parse("z^2 + 1").unwrap();
        let v: Complex<f32> = e.eval(Complex::new(0.0f32, 1.0));
        assert_eq!(v, Complex::new(0.0, 0.0));
    }
}
