//! Text grammar shared by the library and the command line.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" integer)?
//! atom  := integer | "y" | "y'" | "z" | "x" | "(" expr ")"
//!        | "sqrt" "(" expr ")" | "root" "(" expr "," expr ")"
//! ```
//!
//! `x` is only meaningful inside the first argument of `root`. Division is
//! allowed by nonzero constants only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::BiPoly;
use crate::error::{AodeError, Result};
use crate::numbers::tower::{all_roots, qpoly_to_apoly};
use crate::numbers::AlgebraicNumber;
use crate::upoly::UniPoly;

type A = AlgebraicNumber;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Prime => "'''".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::End => "end of input".into(),
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> AodeError {
    AodeError::Syntax { offset, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().unwrap()), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            b'\'' => Tok::Prime,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// Parsed expression with byte offsets for error reporting.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Y,
    Z,
    X { offset: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>, usize),
    Root(Box<Expr>, Box<Expr>, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {}, found {}", describe(&want), describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let (_, off) = self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), off);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
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

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let off = self.offset();
        let e = match self.bump().0 {
            Tok::Int(n) => n.to_u32().ok_or_else(|| syntax(off, "exponent too large"))?,
            t => return Err(syntax(off, format!("expected a nonnegative integer exponent, found {}", describe(&t)))),
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, off) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "y" => {
                    if *self.peek() == Tok::Prime {
                        self.bump();
                        Ok(Expr::Z)
                    } else {
                        Ok(Expr::Y)
                    }
                }
                "z" => Ok(Expr::Z),
                "x" => Ok(Expr::X { offset: off }),
                "sqrt" => {
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Sqrt(Box::new(a), off))
                }
                "root" => {
                    self.expect(Tok::LParen)?;
                    let p = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let k = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Root(Box::new(p), Box::new(k), off))
                }
                _ => Err(AodeError::UnknownIdentifier { name, offset: off }),
            },
            t => Err(syntax(off, format!("expected an operand, found {}", describe(&t)))),
        }
    }
}

/// Which variables an evaluation context admits.
#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    /// `y` and `y'`.
    Curve,
    /// `x` only, mapped onto the first slot of `BiPoly`.
    RootArg,
    /// No variables.
    Constant,
}

fn eval(e: &Expr, ctx: Ctx) -> Result<BiPoly> {
    let unknown = |name: &str, offset: usize| AodeError::UnknownIdentifier { name: name.into(), offset };
    Ok(match e {
        Expr::Int(n) => BiPoly::constant(A::rational(BigRational::from_integer(n.clone()))),
        // offsets of y and y' are not tracked; they are always valid in the
        // curve grammar and rejected at the first use elsewhere
        Expr::Y | Expr::Z if ctx != Ctx::Curve => {
            return Err(AodeError::InvalidRequest("variables y and y' are not allowed in a constant".into()))
        }
        Expr::Y => BiPoly::y(),
        Expr::Z => BiPoly::z(),
        Expr::X { offset } => {
            if ctx != Ctx::RootArg {
                return Err(unknown("x", *offset));
            }
            BiPoly::y()
        }
        Expr::Neg(a) => eval(a, ctx)?.neg(),
        Expr::Add(a, b) => eval(a, ctx)?.add(&eval(b, ctx)?),
        Expr::Sub(a, b) => eval(a, ctx)?.sub(&eval(b, ctx)?),
        Expr::Mul(a, b) => eval(a, ctx)?.mul(&eval(b, ctx)?),
        Expr::Div(a, b, off) => {
            let d = eval(b, ctx)?;
            if d.total_degree() > 0 {
                return Err(syntax(*off, "division by a non-constant expression"));
            }
            let d = d.coeff(0, 0);
            if d.is_zero() {
                return Err(AodeError::DivisionByZero);
            }
            eval(a, ctx)?.scale(&d.inv())
        }
        Expr::Pow(a, k) => eval(a, ctx)?.pow(*k),
        Expr::Sqrt(a, _) => {
            let v = eval(a, Ctx::Constant)?.coeff(0, 0);
            BiPoly::constant(sqrt(&v)?)
        }
        Expr::Root(p, k, off) => BiPoly::constant(root(p, k, *off)?),
    })
}

/// Last root of `x^2 - v` in the canonical order.
fn sqrt(v: &A) -> Result<A> {
    let p = UniPoly::new(vec![v.neg(), A::zero(), A::one()]);
    let roots = all_roots(&p)?;
    Ok(roots.last().expect("quadratic has roots").0.clone())
}

fn root(p: &Expr, k: &Expr, off: usize) -> Result<A> {
    let p = eval(p, Ctx::RootArg)?;
    if p.total_degree() == 0 {
        return Err(syntax(off, "root() needs a non-constant polynomial in x"));
    }
    let coeffs: Option<Vec<BigRational>> = (0..=p.deg_y()).map(|i| p.coeff(i, 0).as_rational()).collect();
    let Some(coeffs) = coeffs else {
        return Err(AodeError::InvalidRequest("root() needs a polynomial with rational coefficients".into()));
    };
    let idx = eval(k, Ctx::Constant)?.coeff(0, 0);
    let idx = idx
        .as_rational()
        .filter(|r| r.is_integer())
        .ok_or_else(|| syntax(off, "root index must be an integer"))?;
    let roots = all_roots(&qpoly_to_apoly(&UniPoly::new(coeffs)))?;
    let count = roots.len();
    let bad = || AodeError::RootIndexOutOfRange { index: idx.to_integer().to_usize().unwrap_or(0), count };
    if idx.is_zero() || idx < BigRational::zero() {
        return Err(bad());
    }
    let i = idx.to_integer().to_usize().ok_or_else(bad)?;
    roots.get(i - 1).map(|r| r.0.clone()).ok_or_else(bad)
}

fn parse_expr(src: &str) -> Result<(Expr, Parser)> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let e = p.expr()?;
    Ok((e, p))
}

fn finish(p: &Parser) -> Result<()> {
    match p.peek() {
        Tok::End => Ok(()),
        t => Err(syntax(p.offset(), format!("expected an operator or end of input, found {}", describe(t)))),
    }
}

/// Parses a polynomial in `y` and `y'` (alias `z`).
pub fn parse_polynomial(src: &str) -> Result<BiPoly> {
    let (e, p) = parse_expr(src)?;
    finish(&p)?;
    eval(&e, Ctx::Curve)
}

/// Parses a constant such as `-3/4`, `sqrt(2)` or `root(x^3 - x - 1, 1)`.
pub fn parse_number(src: &str) -> Result<A> {
    let (e, p) = parse_expr(src)?;
    finish(&p)?;
    Ok(eval(&e, Ctx::Constant)?.coeff(0, 0))
}

/// Parses an initial tuple `c0, c1`, optionally wrapped in parentheses.
pub fn parse_tuple(src: &str) -> Result<(A, A)> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let wrapped = *p.peek() == Tok::LParen && {
        // `(c0, c1)` versus `(c0) + 1, c1`: find the matching parenthesis and
        // check it closes the whole input
        let mut depth = 0usize;
        let mut close = None;
        for (i, (t, _)) in p.toks.iter().enumerate() {
            match t {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        close == Some(p.toks.len() - 2)
    };
    if wrapped {
        p.bump();
    }
    let a = p.expr()?;
    p.expect(Tok::Comma)?;
    let b = p.expr()?;
    if wrapped {
        p.expect(Tok::RParen)?;
    }
    finish(&p)?;
    Ok((eval(&a, Ctx::Constant)?.coeff(0, 0), eval(&b, Ctx::Constant)?.coeff(0, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qq;

    #[test]
    fn nested_powers() {
        let f = parse_polynomial("(y')^2 - y^3 - y^2").unwrap();
        assert_eq!(f.coeff(0, 2), A::one());
        assert_eq!(f.coeff(3, 0), A::from_i64(-1));
        assert_eq!(f.coeff(2, 0), A::from_i64(-1));
        assert_eq!(f.len(), 3);
        assert_eq!(parse_polynomial("z^2 - y^3 - y^2").unwrap(), f);
    }

    #[test]
    fn rationals_and_precedence() {
        let f = parse_polynomial("-y^2/4 + 3/2*y'").unwrap();
        assert_eq!(f.coeff(2, 0), A::rational(qq(-1, 4)));
        assert_eq!(f.coeff(0, 1), A::rational(qq(3, 2)));
        assert_eq!(parse_polynomial("2^3").unwrap().coeff(0, 0), A::from_i64(8));
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(parse_polynomial("y -").unwrap_err(), AodeError::Syntax {
            offset: 3,
            message: "expected an operand, found end of input".into()
        });
        assert!(matches!(parse_polynomial("2y"), Err(AodeError::Syntax { offset: 1, .. })));
        assert!(matches!(parse_polynomial("(y"), Err(AodeError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_polynomial("y # 1"), Err(AodeError::Syntax { offset: 2, .. })));
        assert_eq!(
            parse_polynomial("y + w").unwrap_err(),
            AodeError::UnknownIdentifier { name: "w".into(), offset: 4 }
        );
        assert!(matches!(parse_polynomial("x + y"), Err(AodeError::UnknownIdentifier { offset: 0, .. })));
        assert_eq!(parse_polynomial("y/0").unwrap_err(), AodeError::DivisionByZero);
    }

    #[test]
    fn tuples() {
        let (a, b) = parse_tuple("1, sqrt(2)").unwrap();
        assert_eq!(a, A::one());
        assert_eq!(b.mul(&b), A::from_i64(2));
        assert!(b.to_f64().0 > 0.0);
        let (a, b) = parse_tuple("root(x^2-3, 1), 0").unwrap();
        assert_eq!(a.mul(&a), A::from_i64(3));
        assert!(a.to_f64().0 < 0.0);
        assert!(b.is_zero());
        let (a, b) = parse_tuple("(0, 1)").unwrap();
        assert!(a.is_zero() && b.is_one());
        let (a, _) = parse_tuple("(1) + 1, 0").unwrap();
        assert_eq!(a, A::from_i64(2));
    }

    #[test]
    fn numbers() {
        let i = parse_number("sqrt(-1)").unwrap();
        assert_eq!(i.mul(&i), A::from_i64(-1));
        assert!(i.to_f64().1 > 0.0);
        assert_eq!(parse_number("sqrt(9/4)").unwrap(), A::rational(qq(3, 2)));
        assert_eq!(
            parse_number("root(x^2 - 1, 3)").unwrap_err(),
            AodeError::RootIndexOutOfRange { index: 3, count: 2 }
        );
        assert!(matches!(parse_number("root(x^2 - 1, 0)"), Err(AodeError::RootIndexOutOfRange { .. })));
        assert_eq!(parse_number("root((x-1)^2*(x+2), 2)").unwrap(), A::one());
    }
}
