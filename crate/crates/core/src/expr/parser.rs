//! Recursive descent with precedence climbing for the binary operators.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | '+' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'i' | 'z' | 'pi' | 'e' | name '(' args ')' | '(' expr ')'
//! ```

use super::lexer::{tokenize, Spanned, Tok};
use super::{BinOp, Constant, Expr, Func, ParseError};

pub(crate) fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, at: 0 };
    let e = p.expr(0)?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => Err(p.error("unmatched ')'", Some("operator or end of input"))),
        t => {
            let msg = format!("unexpected {}", t.describe());
            Err(p.error(msg, Some("operator or end of input")))
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

fn binding(t: &Tok) -> Option<(BinOp, u8)> {
    match t {
        Tok::Plus => Some((BinOp::Add, 1)),
        Tok::Minus => Some((BinOp::Sub, 1)),
        Tok::Star => Some((BinOp::Mul, 2)),
        Tok::Slash => Some((BinOp::Div, 2)),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>, expected: Option<&str>) -> ParseError {
        ParseError::new(self.pos(), msg, expected)
    }

    fn expect(&mut self, want: Tok, hint: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe()), Some(hint)))
        }
    }

    /// Binary operators binding at least as tightly as `min`.
    fn expr(&mut self, min: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some((op, prec)) = binding(self.peek()) {
            if prec < min {
                break;
            }
            self.bump();
            let rhs = self.expr(prec + 1)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Real(x) => Ok(Expr::Real(x)),
            Tok::Imag(x) => Ok(Expr::Imag(x)),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => self.named(name, pos),
            Tok::End => Err(ParseError::new(pos, "expression ended early", Some("operand"))),
            t => Err(ParseError::new(pos, format!("unexpected {}", t.describe()), Some("operand"))),
        }
    }

    fn named(&mut self, name: String, pos: usize) -> Result<Expr, ParseError> {
        let simple = match name.as_str() {
            "z" => Some(Expr::Var),
            "pi" => Some(Expr::Const(Constant::Pi)),
            "e" => Some(Expr::Const(Constant::E)),
            _ => None,
        };
        if let Some(e) = simple {
            if *self.peek() == Tok::LParen {
                return Err(self.error(format!("'{name}' is not a function"), Some("operator")));
            }
            return Ok(e);
        }
        let bessel = matches!(name.as_str(), "besselj" | "bessely");
        let unary = Func::from_name(&name);
        if unary.is_none() && !bessel {
            return Err(ParseError::new(pos, format!("unknown identifier '{name}'"), Some("z, pi, e, i or a function")));
        }
        self.expect(Tok::LParen, "'('")?;
        let f = if bessel {
            let order_pos = self.pos();
            let m = match self.bump() {
                Tok::Real(x) if x.fract() == 0.0 && x <= u32::MAX as f64 => x as u32,
                _ => {
                    return Err(ParseError::new(
                        order_pos,
                        format!("{name} needs a non-negative integer order"),
                        Some("integer literal"),
                    ))
                }
            };
            self.expect(Tok::Comma, "','")?;
            if name == "besselj" {
                Func::BesselJ(m)
            } else {
                Func::BesselY(m)
            }
        } else {
            unary.expect("checked above")
        };
        let arg = self.expr(0)?;
        if *self.peek() == Tok::Comma {
            return Err(self.error(format!("too many arguments for {name}"), Some("')'")));
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(Expr::Call(f, Box::new(arg)))
    }
}
