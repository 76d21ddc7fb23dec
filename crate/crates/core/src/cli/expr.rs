//! Element expressions: integers, `t`, `+ - * / ^` and parentheses.
//!
//! Precedence from tightest: `^` (integer exponent, may be negative),
//! unary minus, `* /`, `+ -`. So `-t^2` is `-(t^2)` and `2^-1` is `1/2`.

use num_bigint::BigInt;

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, WorkingField};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Gen,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// offset of the operator, for error reporting
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Gen,
    Op(char),
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = chars.get(i).map_or(src.len(), |x| x.0);
                let n: BigInt = src[chars[start].0..end].parse().expect("digits");
                out.push((Tok::Int(n), pos));
            }
            't' => {
                out.push((Tok::Gen, pos));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push((Tok::Op(c), pos));
                i += 1;
            }
            '\u{2212}' => {
                out.push((Tok::Op('-'), pos));
                i += 1;
            }
            _ => {
                return Err(Error::ParseError { offset: pos, message: format!("unexpected character '{}'", c) })
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
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

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::ParseError { offset: self.offset(), message: message.to_string() })
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    let (_, at) = self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        let (_, at) = self.bump();
        let e = self.exponent()?;
        if *self.peek() == Tok::Op('^') {
            return self.err("chained exponents are ambiguous; use parentheses");
        }
        Ok(Expr::Pow(Box::new(base), e, at))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = *self.peek() == Tok::Op('(');
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Op('-');
        if neg {
            self.bump();
        }
        let at = self.offset();
        let n = match self.bump().0 {
            Tok::Int(n) => n,
            _ => return Err(Error::ParseError { offset: at, message: "exponent must be an integer literal".into() }),
        };
        let n: i64 = i64::try_from(&n)
            .ok()
            .filter(|n| *n <= 1 << 20)
            .ok_or(Error::ParseError { offset: at, message: "exponent too large".into() })?;
        if paren {
            if *self.peek() != Tok::Op(')') {
                return self.err("expected ')'");
            }
            self.bump();
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump().0 {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Gen => Ok(Expr::Gen),
            Tok::Op('(') => {
                let e = self.sum()?;
                if *self.peek() != Tok::Op(')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(Error::ParseError { offset: at, message: "unexpected end of expression".into() }),
            Tok::Op(c) => Err(Error::ParseError { offset: at, message: format!("unexpected '{}'", c) }),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn eval(e: &Expr, f: &WorkingField) -> Result<FieldElement> {
    Ok(match e {
        Expr::Int(n) => f.from_q(Q::from_integer(n.clone())),
        Expr::Gen => f.theta(),
        Expr::Neg(a) => eval(a, f)?.neg(),
        Expr::Add(a, b) => eval(a, f)?.add(&eval(b, f)?),
        Expr::Sub(a, b) => eval(a, f)?.sub(&eval(b, f)?),
        Expr::Mul(a, b) => f.mul(&eval(a, f)?, &eval(b, f)?),
        Expr::Div(a, b, at) => {
            let d = eval(b, f)?;
            if d.is_zero() {
                return Err(Error::EvalError(format!("division by zero at offset {}", at)));
            }
            f.div(&eval(a, f)?, &d)?
        }
        Expr::Pow(a, n, at) => {
            let x = eval(a, f)?;
            if *n < 0 && x.is_zero() {
                return Err(Error::EvalError(format!("negative power of zero at offset {}", at)));
            }
            f.pow(&x, *n)
        }
    })
}

/// Parses and evaluates in one step.
pub fn evaluate(src: &str, f: &WorkingField) -> Result<FieldElement> {
    eval(&parse(src)?, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::numberfield::Poly;

    fn sqrt2() -> WorkingField {
        WorkingField::new(Poly::from_ints(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn precedence() {
        let f = sqrt2();
        assert_eq!(evaluate("-t^2", &f).unwrap(), f.from_int(-2));
        assert_eq!(evaluate("1+2*3", &f).unwrap(), f.from_int(7));
        assert_eq!(evaluate("2^-1", &f).unwrap(), f.from_q(qf(1, 2)));
        assert_eq!(evaluate("(1+t)^(-1)", &f).unwrap(), f.from_int(-1).add(&f.theta()));
        assert_eq!(evaluate("3/4", &f).unwrap(), f.from_q(qf(3, 4)));
        assert_eq!(evaluate("8/2/2", &f).unwrap(), f.from_int(2));
        assert_eq!(evaluate("(t^3 - 9*t)/2", &f).unwrap().coords()[1], qf(-7, 2));
    }

    #[test]
    fn errors() {
        let f = sqrt2();
        assert!(matches!(parse("1 +"), Err(Error::ParseError { offset: 3, .. })));
        assert!(matches!(parse("2t"), Err(Error::ParseError { offset: 1, .. })));
        assert!(matches!(parse("x"), Err(Error::ParseError { offset: 0, .. })));
        assert!(matches!(parse("t^t"), Err(Error::ParseError { .. })));
        assert!(matches!(parse("t^2^3"), Err(Error::ParseError { .. })));
        assert!(matches!(parse("(1"), Err(Error::ParseError { .. })));
        assert!(matches!(evaluate("1/(t^2-2)", &f), Err(Error::EvalError(_))));
        assert!(matches!(evaluate("0^-1", &f), Err(Error::EvalError(_))));
    }
}
