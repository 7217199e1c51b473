//! Text grammar for polynomials, rational-log expressions and basis
//! sections: integer and rational literals, variable names, `+ - * /
//! ^`, parentheses, and `ln(...)` in the rational-log layer.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::graded::Section;
use crate::poly::{Poly, Q, Vars};
use crate::ratlog::RatLog;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.pos + 1, self.msg)
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> PResult<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(input[start..i].to_string())));
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Ln(Box<Expr>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        let pos = self.here();
        match self.bump() {
            Some(got) if got == t => Ok(()),
            got => Err(ParseError {
                pos,
                msg: format!("expected {t:?}, found {got:?}"),
            }),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| ParseError {
                        pos,
                        msg: "exponent must be a small non-negative integer".into(),
                    })?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => {
                    return Err(ParseError {
                        pos,
                        msg: "expected an integer exponent after ^".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Num(n)),
            Some(Tok::Ident(name)) if name == "ln" => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Ln(Box::new(inner)))
            }
            Some(Tok::Ident(name)) => Ok(Expr::Ident(name)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            got => Err(ParseError {
                pos,
                msg: format!("expected a value, found {got:?}"),
            }),
        }
    }
}

fn parse_expr(input: &str) -> PResult<Expr> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: input.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

fn eval_poly_expr(e: &Expr, vars: &Vars) -> PResult<Poly> {
    match e {
        Expr::Num(n) => Ok(Poly::constant(vars, Q::from_integer(n.clone()))),
        Expr::Ident(name) => Poly::var_named(vars, name).ok_or_else(|| ParseError {
            pos: 0,
            msg: format!("unknown variable {name}"),
        }),
        Expr::Neg(a) => Ok(-&eval_poly_expr(a, vars)?),
        Expr::Add(a, b) => Ok(&eval_poly_expr(a, vars)? + &eval_poly_expr(b, vars)?),
        Expr::Sub(a, b) => Ok(&eval_poly_expr(a, vars)? - &eval_poly_expr(b, vars)?),
        Expr::Mul(a, b) => Ok(&eval_poly_expr(a, vars)? * &eval_poly_expr(b, vars)?),
        Expr::Div(a, b) => {
            let num = eval_poly_expr(a, vars)?;
            let den = eval_poly_expr(b, vars)?;
            match den.as_constant() {
                Some(c) if !c.is_zero() => Ok(num.scale(&(Q::new(1.into(), 1.into()) / c))),
                Some(_) => Err(ParseError {
                    pos: 0,
                    msg: "division by zero".into(),
                }),
                None => Err(ParseError {
                    pos: 0,
                    msg: "polynomial division only by constants".into(),
                }),
            }
        }
        Expr::Pow(a, e) => Ok(eval_poly_expr(a, vars)?.pow(*e)),
        Expr::Ln(_) => Err(ParseError {
            pos: 0,
            msg: "ln is not allowed in a polynomial".into(),
        }),
    }
}

fn eval_ratlog_expr(e: &Expr, vars: &Vars) -> PResult<RatLog> {
    match e {
        Expr::Num(n) => Ok(RatLog::from_poly(Poly::constant(
            vars,
            Q::from_integer(n.clone()),
        ))),
        Expr::Ident(name) => {
            let p = Poly::var_named(vars, name).ok_or_else(|| ParseError {
                pos: 0,
                msg: format!("unknown variable {name}"),
            })?;
            Ok(RatLog::from_poly(p))
        }
        Expr::Neg(a) => Ok(eval_ratlog_expr(a, vars)?.neg()),
        Expr::Add(a, b) => Ok(eval_ratlog_expr(a, vars)?.add(&eval_ratlog_expr(b, vars)?)),
        Expr::Sub(a, b) => Ok(eval_ratlog_expr(a, vars)?.sub(&eval_ratlog_expr(b, vars)?)),
        Expr::Mul(a, b) => {
            let lhs = eval_ratlog_expr(a, vars)?;
            let rhs = eval_ratlog_expr(b, vars)?;
            lhs.mul(&rhs).ok_or_else(|| ParseError {
                pos: 0,
                msg: "products of logarithms with non-constant factors are outside the grammar"
                    .into(),
            })
        }
        Expr::Div(a, b) => {
            let lhs = eval_ratlog_expr(a, vars)?;
            let rhs = eval_ratlog_expr(b, vars)?;
            lhs.div(&rhs).ok_or_else(|| ParseError {
                pos: 0,
                msg: "division only by nonzero log-free expressions".into(),
            })
        }
        Expr::Pow(a, e) => {
            let base = eval_ratlog_expr(a, vars)?;
            if base.has_logs() && *e > 1 {
                return Err(ParseError {
                    pos: 0,
                    msg: "powers of logarithms are outside the grammar".into(),
                });
            }
            let mut acc = RatLog::from_poly(Poly::int(vars, 1));
            for _ in 0..*e {
                acc = acc.mul(&base).expect("log-free powers");
            }
            Ok(acc)
        }
        Expr::Ln(a) => {
            let inner = eval_poly_expr(a, vars).map_err(|e| ParseError {
                pos: e.pos,
                msg: format!("logarithm argument must be a polynomial: {}", e.msg),
            })?;
            if inner.is_zero() {
                return Err(ParseError {
                    pos: 0,
                    msg: "logarithm of zero".into(),
                });
            }
            Ok(RatLog::log(Q::new(1.into(), 1.into()), inner))
        }
    }
}

#[derive(Clone)]
enum SecVal {
    Scalar(Poly),
    Sec(Section),
}

fn eval_section_expr(
    e: &Expr,
    vars: &Vars,
    labels: &[String],
    level: usize,
) -> PResult<SecVal> {
    let ev = |x: &Expr| eval_section_expr(x, vars, labels, level);
    match e {
        Expr::Num(n) => Ok(SecVal::Scalar(Poly::constant(
            vars,
            Q::from_integer(n.clone()),
        ))),
        Expr::Ident(name) => {
            if let Some(idx) = labels.iter().position(|l| l == name) {
                return Ok(SecVal::Sec(Section::basis(level, idx, vars)));
            }
            Poly::var_named(vars, name)
                .map(SecVal::Scalar)
                .ok_or_else(|| ParseError {
                    pos: 0,
                    msg: format!("unknown variable or basis label {name}"),
                })
        }
        Expr::Neg(a) => match ev(a)? {
            SecVal::Scalar(p) => Ok(SecVal::Scalar(-&p)),
            SecVal::Sec(s) => Ok(SecVal::Sec(s.neg())),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let negate = matches!(e, Expr::Sub(_, _));
            let lhs = ev(a)?;
            let rhs = ev(b)?;
            let rhs = if negate {
                match rhs {
                    SecVal::Scalar(p) => SecVal::Scalar(-&p),
                    SecVal::Sec(s) => SecVal::Sec(s.neg()),
                }
            } else {
                rhs
            };
            match (lhs, rhs) {
                (SecVal::Scalar(p), SecVal::Scalar(q)) => Ok(SecVal::Scalar(&p + &q)),
                (SecVal::Sec(s), SecVal::Sec(t)) => {
                    let mut out = s;
                    out.add_section(&t);
                    Ok(SecVal::Sec(out))
                }
                (SecVal::Scalar(p), SecVal::Sec(s)) | (SecVal::Sec(s), SecVal::Scalar(p)) => {
                    if p.is_zero() {
                        Ok(SecVal::Sec(s))
                    } else {
                        Err(ParseError {
                            pos: 0,
                            msg: "cannot add a scalar to a section".into(),
                        })
                    }
                }
            }
        }
        Expr::Mul(a, b) => {
            let lhs = ev(a)?;
            let rhs = ev(b)?;
            match (lhs, rhs) {
                (SecVal::Scalar(p), SecVal::Scalar(q)) => Ok(SecVal::Scalar(&p * &q)),
                (SecVal::Scalar(p), SecVal::Sec(s)) | (SecVal::Sec(s), SecVal::Scalar(p)) => {
                    Ok(SecVal::Sec(s.scale(&p)))
                }
                (SecVal::Sec(_), SecVal::Sec(_)) => Err(ParseError {
                    pos: 0,
                    msg: "cannot multiply two sections".into(),
                }),
            }
        }
        Expr::Div(a, b) => {
            let lhs = ev(a)?;
            let rhs = ev(b)?;
            let c = match rhs {
                SecVal::Scalar(p) => p.as_constant().filter(|c| !c.is_zero()),
                SecVal::Sec(_) => None,
            }
            .ok_or_else(|| ParseError {
                pos: 0,
                msg: "sections divide only by nonzero constants".into(),
            })?;
            let inv = Q::new(1.into(), 1.into()) / c;
            match lhs {
                SecVal::Scalar(p) => Ok(SecVal::Scalar(p.scale(&inv))),
                SecVal::Sec(s) => Ok(SecVal::Sec(s.scale(&Poly::constant(vars, inv)))),
            }
        }
        Expr::Pow(a, e) => match ev(a)? {
            SecVal::Scalar(p) => Ok(SecVal::Scalar(p.pow(*e))),
            SecVal::Sec(_) => Err(ParseError {
                pos: 0,
                msg: "cannot raise a section to a power".into(),
            }),
        },
        Expr::Ln(_) => Err(ParseError {
            pos: 0,
            msg: "ln is not allowed in a section".into(),
        }),
    }
}

/// Parses a polynomial in the given variables.
pub fn parse_poly(input: &str, vars: &Vars) -> PResult<Poly> {
    let e = parse_expr(input)?;
    eval_poly_expr(&e, vars)
}

/// Parses a rational-log expression in the given variables.
pub fn parse_ratlog(input: &str, vars: &Vars) -> PResult<RatLog> {
    let e = parse_expr(input)?;
    eval_ratlog_expr(&e, vars)
}

/// Parses a section string over the given basis labels at one level,
/// e.g. `y*dx - x*dy` or `-2*one` or `0`.
pub fn parse_section(
    input: &str,
    vars: &Vars,
    labels: &[String],
    level: usize,
) -> PResult<Section> {
    let e = parse_expr(input)?;
    match eval_section_expr(&e, vars, labels, level)? {
        SecVal::Sec(s) => Ok(s),
        SecVal::Scalar(p) if p.is_zero() => Ok(Section::zero(level)),
        SecVal::Scalar(_) => Err(ParseError {
            pos: 0,
            msg: "expected a section, found a scalar".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    #[test]
    fn parse_basic_polys() {
        let v = Vars::xyz(3);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        assert_eq!(parse_poly("x^2 - 3*x*y + 1", &v).unwrap().to_string(), "x^2 - 3*x*y + 1");
        assert_eq!(parse_poly("1/2*x", &v).unwrap(), x.scale(&qr(1, 2)));
        assert_eq!(parse_poly("(x + y)^2", &v).unwrap(), (&x + &y).pow(2));
        assert_eq!(parse_poly("-x", &v).unwrap(), -&x);
        assert!(parse_poly("x/y", &v).is_err());
        assert!(parse_poly("ln(x)", &v).is_err());
        assert!(parse_poly("w", &v).is_err());
    }

    #[test]
    fn roundtrip_canonical_display() {
        let v = Vars::xn(4);
        let p = parse_poly("x1^3 - 2*x2*x4 + 7/3", &v).unwrap();
        let q = parse_poly(&p.to_string(), &v).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_witness_forms() {
        let v = Vars::xn(2);
        let g = parse_ratlog("(2/2)*ln(x1^2 + x2^2)", &v).unwrap();
        assert!(g.has_logs());
        let h = parse_ratlog("ln(x1^2 + x2^2)", &v).unwrap();
        assert!(g.equal(&h));
        let r = parse_ratlog("x1/(x1^2 + 1)", &v).unwrap();
        assert!(!r.has_logs());
        assert!(parse_ratlog("ln(x1)*x2", &v).is_err());
        assert!(parse_ratlog("ln(0)", &v).is_err());
    }

    #[test]
    fn parse_sections() {
        let v = Vars::xyz(3);
        let labels: Vec<String> = ["dx", "dy", "dz"].iter().map(|s| s.to_string()).collect();
        let s = parse_section("y*dx - x*dy", &v, &labels, 0).unwrap();
        assert_eq!(s.coeff(0, &v), Poly::var(&v, 1));
        assert_eq!(s.coeff(1, &v), -&Poly::var(&v, 0));
        let z = parse_section("0", &v, &labels, 0).unwrap();
        assert!(z.is_zero());
        let m = parse_section("-2*dz", &v, &labels, 0).unwrap();
        assert_eq!(m.coeff(2, &v), Poly::int(&v, -2));
        assert!(parse_section("x + dx", &v, &labels, 0).is_err());
    }
}
