//! Expression syntax for elements of K_log.
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' exponent)?
//! base   := integer | 'x' | 'l' nat | '(' expr ')' | 'D(' expr ')'
//! exponent := '-'? integer | '(' '-'? integer ('/' integer)? ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::logts::{Frac, Monomial};
use crate::ogroup::{fmt_rat, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Ast {
    Num(BigInt),
    Gen(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Rat),
    D(Box<Ast>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = if self.eat(b'-') { Ast::Neg(Box::new(self.term()?)) } else { self.term()? };
        loop {
            if self.eat(b'+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.base()?;
        if self.eat(b'^') {
            let e = self.exponent()?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rat> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.digits()?;
            let d = if self.eat(b'/') { self.digits()? } else { BigInt::one() };
            self.expect(b')')?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let q = Rat::new(n, d);
            Ok(if neg { -q } else { q })
        } else {
            let neg = self.eat(b'-');
            let n = Rat::from_integer(self.digits()?);
            Ok(if neg { -n } else { n })
        }
    }

    fn base(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ast::Num(self.digits()?)),
            Some(b'x') => {
                self.pos += 1;
                Ok(Ast::Gen(0))
            }
            Some(b'l') => {
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return self.err("expected generator index after `l`");
                }
                let n = self.digits()?;
                match n.to_usize() {
                    Some(n) => Ok(Ast::Gen(n)),
                    None => self.err("generator index too large"),
                }
            }
            Some(b'D') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'(') {
                    return self.err("expected `(` after `D`");
                }
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(Ast::D(Box::new(e)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(text: &str) -> Result<Ast> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn rat_root(c: &Rat, k: &BigInt) -> Option<Rat> {
    let k = k.to_u32()?;
    if c.is_negative() && k % 2 == 0 {
        return None;
    }
    let root = |n: &BigInt| {
        let r = if n.is_negative() { -(-n).nth_root(k) } else { n.nth_root(k) };
        (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
    };
    Some(Rat::new(root(c.numer())?, root(c.denom())?))
}

fn pow(v: &Frac, q: &Rat) -> Result<Frac> {
    if q.is_integer() {
        let k = q.to_integer().to_i64().ok_or_else(|| Error::Semantic("exponent too large".into()))?;
        if v.is_zero() && k < 0 {
            return Err(Error::DivisionByZero);
        }
        return v.pow_int(k);
    }
    let leaves = || Error::Semantic(format!("({v})^({}) is not in K_log", fmt_rat(q)));
    let s = v.as_series().filter(|s| s.len() == 1).ok_or_else(leaves)?;
    let (m, c) = s.leading().unwrap();
    let c = rat_root(c, q.denom()).ok_or_else(leaves)?;
    let c = num_traits::pow(c, q.numer().abs().to_usize().ok_or_else(leaves)?);
    let c = if q.is_negative() { c.recip() } else { c };
    Ok(Frac::term(c, m.pow(q)))
}

pub fn eval(ast: &Ast) -> Result<Frac> {
    Ok(match ast {
        Ast::Num(n) => Frac::constant(Rat::from_integer(n.clone())),
        Ast::Gen(i) => Frac::monomial(Monomial::ell(*i)),
        Ast::Neg(a) => -eval(a)?,
        Ast::Add(a, b) => &eval(a)? + &eval(b)?,
        Ast::Sub(a, b) => &eval(a)? - &eval(b)?,
        Ast::Mul(a, b) => &eval(a)? * &eval(b)?,
        Ast::Div(a, b) => (&eval(a)? / &eval(b)?)?,
        Ast::Pow(a, q) => pow(&eval(a)?, q)?,
        Ast::D(a) => eval(a)?.derivative(),
    })
}

pub fn parse_frac(text: &str) -> Result<Frac> {
    eval(&parse(text)?)
}

fn exp_text(q: &Rat) -> String {
    if q.is_integer() {
        fmt_rat(q)
    } else {
        format!("({})", fmt_rat(q))
    }
}

fn write_expr(a: &Ast, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match a {
        Ast::Add(l, r) => {
            write_expr(l, f)?;
            write!(f, " + ")?;
            write_term(r, f)
        }
        Ast::Sub(l, r) => {
            write_expr(l, f)?;
            write!(f, " - ")?;
            write_term(r, f)
        }
        Ast::Neg(t) => {
            write!(f, "-")?;
            write_term(t, f)
        }
        _ => write_term(a, f),
    }
}

fn write_term(a: &Ast, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match a {
        Ast::Mul(l, r) => {
            write_term(l, f)?;
            write!(f, "*")?;
            write_factor(r, f)
        }
        Ast::Div(l, r) => {
            write_term(l, f)?;
            write!(f, "/")?;
            write_factor(r, f)
        }
        _ => write_factor(a, f),
    }
}

fn write_factor(a: &Ast, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match a {
        Ast::Pow(b, q) => {
            write_base(b, f)?;
            write!(f, "^{}", exp_text(q))
        }
        _ => write_base(a, f),
    }
}

fn write_base(a: &Ast, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match a {
        Ast::Num(n) => write!(f, "{n}"),
        Ast::Gen(0) => write!(f, "x"),
        Ast::Gen(i) => write!(f, "l{i}"),
        Ast::D(e) => {
            write!(f, "D(")?;
            write_expr(e, f)?;
            write!(f, ")")
        }
        _ => {
            write!(f, "(")?;
            write_expr(a, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f)
    }
}
