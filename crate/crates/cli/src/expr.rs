//! Rational expressions in `z` with complex literals.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := atom ('^' exponent)*
//! exponent := ('-' | '+') exponent | atom
//! atom     := number | 'i' | 'z' | '(' expr ')'
//! ```
//!
//! Numbers are decimal with optional exponent and an optional `i` suffix
//! (`1.5`, `2i`, `3e-2i`). Exponents must reduce to integer constants.

use cmc_core::sigma::{poly_add, poly_mul, poly_neg, Coeffs, RationalMap};
use cmc_core::{Error, Result};
use num_complex::Complex64;

/// Intermediate degree bound while normalizing; the final map is capped at 64.
const WORK_DEGREE_CAP: usize = 1024;

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(Complex64),
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k];
        let start = k;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                k += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'z' => Tok::Z,
            b'i' => Tok::Num(Complex64::new(0.0, 1.0)),
            b'0'..=b'9' | b'.' => {
                while k < bytes.len() && (bytes[k].is_ascii_digit() || bytes[k] == b'.') {
                    k += 1;
                }
                if k < bytes.len() && (bytes[k] == b'e' || bytes[k] == b'E') {
                    let mut e = k + 1;
                    if e < bytes.len() && (bytes[e] == b'+' || bytes[e] == b'-') {
                        e += 1;
                    }
                    if e < bytes.len() && bytes[e].is_ascii_digit() {
                        while e < bytes.len() && bytes[e].is_ascii_digit() {
                            e += 1;
                        }
                        k = e;
                    }
                }
                let v: f64 =
                    text[start..k].parse().map_err(|_| syntax(start, format!("bad number '{}'", &text[start..k])))?;
                let num = if k < bytes.len() && bytes[k] == b'i' {
                    k += 1;
                    Complex64::new(0.0, v)
                } else {
                    Complex64::new(v, 0.0)
                };
                out.push((start, Tok::Num(num)));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((start, tok));
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, t: Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(Tok::Minus) {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat(Tok::Plus) {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.peek() == Some(Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            let e = self.exponent()?;
            base = Expr::Pow(Box::new(base), integer_exponent(&e, pos)?);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expr> {
        if self.eat(Tok::Minus) {
            Ok(Expr::Neg(Box::new(self.exponent()?)))
        } else if self.eat(Tok::Plus) {
            self.exponent()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::Z) => {
                self.at += 1;
                Ok(Expr::Z)
            }
            Some(Tok::Open) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(Tok::Close) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Some(t) => Err(syntax(pos, format!("unexpected {t:?}"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn integer_exponent(e: &Expr, pos: usize) -> Result<i64> {
    let r = normalize(e)?;
    let not_int = || Error::NonRational(format!("exponent at position {pos} is not an integer constant"));
    if r.num.len() > 1 || r.den.len() > 1 {
        return Err(not_int());
    }
    let v = r.num.first().copied().unwrap_or_default() / r.den[0];
    if v.im != 0.0 || v.re.fract() != 0.0 || v.re.abs() > 1e9 {
        return Err(not_int());
    }
    Ok(v.re as i64)
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser { toks, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Unreduced numerator/denominator pair.
struct Ratio {
    num: Coeffs,
    den: Coeffs,
}

fn check_work(r: Ratio) -> Result<Ratio> {
    let deg = r.num.len().max(r.den.len()).saturating_sub(1);
    if deg > WORK_DEGREE_CAP {
        return Err(Error::DegreeCap(deg));
    }
    Ok(r)
}

fn normalize(e: &Expr) -> Result<Ratio> {
    let one = vec![Complex64::new(1.0, 0.0)];
    let r = match e {
        Expr::Const(c) => Ratio { num: if *c == Complex64::default() { vec![] } else { vec![*c] }, den: one },
        Expr::Z => Ratio { num: vec![Complex64::default(), Complex64::new(1.0, 0.0)], den: one },
        Expr::Neg(a) => {
            let a = normalize(a)?;
            Ratio { num: poly_neg(&a.num), den: a.den }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (a, b) = (normalize(a)?, normalize(b)?);
            let b_num = if matches!(e, Expr::Sub(..)) { poly_neg(&b.num) } else { b.num };
            if a.den == b.den {
                Ratio { num: poly_add(&a.num, &b_num), den: a.den }
            } else {
                Ratio {
                    num: poly_add(&poly_mul(&a.num, &b.den), &poly_mul(&b_num, &a.den)),
                    den: poly_mul(&a.den, &b.den),
                }
            }
        }
        Expr::Mul(a, b) => {
            let (a, b) = (normalize(a)?, normalize(b)?);
            Ratio { num: poly_mul(&a.num, &b.num), den: poly_mul(&a.den, &b.den) }
        }
        Expr::Div(a, b) => {
            let (a, b) = (normalize(a)?, normalize(b)?);
            if b.num.is_empty() {
                return Err(Error::NonRational("division by zero".into()));
            }
            Ratio { num: poly_mul(&a.num, &b.den), den: poly_mul(&a.den, &b.num) }
        }
        Expr::Pow(a, k) => {
            let a = normalize(a)?;
            let (num, den) = if *k < 0 {
                if a.num.is_empty() {
                    return Err(Error::NonRational("zero raised to a negative power".into()));
                }
                (a.den, a.num)
            } else {
                (a.num, a.den)
            };
            let n = k.unsigned_abs() as usize;
            let deg = num.len().max(den.len()).saturating_sub(1) * n;
            if deg > WORK_DEGREE_CAP {
                return Err(Error::DegreeCap(deg));
            }
            let mut out = Ratio { num: one.clone(), den: one };
            for _ in 0..n {
                out = Ratio { num: poly_mul(&out.num, &num), den: poly_mul(&out.den, &den) };
            }
            out
        }
    };
    check_work(r)
}

/// Reduces an expression tree to a [`RationalMap`].
pub fn to_rational(e: &Expr) -> Result<RationalMap> {
    let r = normalize(e)?;
    RationalMap::new(r.num, r.den)
}

/// Parses and normalizes a rational expression in `z`.
///
/// ```
/// use cmc_cli::expr::parse_rational;
/// let m = parse_rational("1/z + z").unwrap();
/// assert_eq!(m.to_string(), "(1 + 1*z^2)/(1*z)");
/// ```
pub fn parse_rational(text: &str) -> Result<RationalMap> {
    to_rational(&parse_expr(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn identity_map() {
        let m = parse_rational("z").unwrap();
        assert_eq!(m.numerator(), re(&[0.0, 1.0]).as_slice());
        assert_eq!(m.denominator(), re(&[1.0]).as_slice());
    }

    #[test]
    fn quotient_coefficients_read_off() {
        let m = parse_rational("(z^2 - 1)/(z^2 + 1)").unwrap();
        assert_eq!(m.numerator(), re(&[-1.0, 0.0, 1.0]).as_slice());
        assert_eq!(m.denominator(), re(&[1.0, 0.0, 1.0]).as_slice());
    }

    #[test]
    fn precedence() {
        let m = parse_rational("-z^2").unwrap();
        assert_eq!(m.numerator(), re(&[0.0, 0.0, -1.0]).as_slice());
        let m = parse_rational("2^3^2").unwrap();
        assert_eq!(m.numerator(), re(&[64.0]).as_slice());
        let m = parse_rational("1 - 2 - 3").unwrap();
        assert_eq!(m.numerator(), re(&[-4.0]).as_slice());
        let m = parse_rational("8/2/2").unwrap();
        assert_eq!(m.numerator(), re(&[2.0]).as_slice());
    }

    #[test]
    fn complex_literals() {
        let m = parse_rational("(1+2i)*z + 3e-1i + i").unwrap();
        assert_eq!(m.numerator(), &[Complex64::new(0.0, 1.3), Complex64::new(1.0, 2.0)]);
    }

    #[test]
    fn negative_and_parenthesized_exponents() {
        let m = parse_rational("z^-2").unwrap();
        assert_eq!(m.numerator(), re(&[1.0]).as_slice());
        assert_eq!(m.denominator(), re(&[0.0, 0.0, 1.0]).as_slice());
        assert_eq!(parse_rational("z^(1+1)").unwrap(), parse_rational("z^2").unwrap());
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_rational("z + * 2") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_rational("(z"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_rational("z $"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_rational(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_rational("z z"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn non_integer_exponent_is_rejected() {
        assert!(matches!(parse_rational("z^z"), Err(Error::NonRational(_))));
        assert!(matches!(parse_rational("z^0.5"), Err(Error::NonRational(_))));
        assert!(matches!(parse_rational("z^i"), Err(Error::NonRational(_))));
        assert!(matches!(parse_rational("1/(z - z)"), Err(Error::NonRational(_))));
    }

    #[test]
    fn degree_cap() {
        assert!(parse_rational("z^64").is_ok());
        assert!(matches!(parse_rational("z^65"), Err(Error::DegreeCap(65))));
        assert!(matches!(parse_rational("z^5000"), Err(Error::DegreeCap(5000))));
        assert!(parse_rational("z^100/z^99").is_ok());
    }
}
