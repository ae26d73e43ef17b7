use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use super::series::{Monomial, Series};
use crate::acouple::GammaInf;
use crate::error::{Error, Result};
use crate::ogroup::{GroupElem, Rat};

/// `num / den` with den ≠ 0, scaled so that den's leading term is exactly 1.
#[derive(Clone)]
pub struct Frac {
    num: Series,
    den: Series,
}

fn div_cap(a: &Series, b: &Series) -> usize {
    4 * (a.len() + 1) * (b.len() + 1) + 16
}

impl Frac {
    pub fn new(num: Series, den: Series) -> Result<Self> {
        let (m, c) = match den.leading() {
            Some((m, c)) => (m.inv(), c.recip()),
            None => return Err(Error::DivisionByZero),
        };
        let num = num.mul_term(&c, &m);
        let den = den.mul_term(&c, &m);
        if den.len() == 1 {
            return Ok(Self { num, den });
        }
        if let Some(q) = num.div_exact(&den, div_cap(&num, &den)) {
            return Ok(q.into());
        }
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Series::zero().into()
    }

    pub fn one() -> Self {
        Series::one().into()
    }

    pub fn constant(c: Rat) -> Self {
        Series::constant(c).into()
    }

    pub fn monomial(m: Monomial) -> Self {
        Series::monomial(m).into()
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        Series::term(c, m).into()
    }

    pub fn ell(n: usize) -> Self {
        Series::ell(n).into()
    }

    pub fn num(&self) -> &Series {
        &self.num
    }

    pub fn den(&self) -> &Series {
        &self.den
    }

    pub fn as_series(&self) -> Option<&Series> {
        (self.den.len() == 1).then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn valuation(&self) -> GammaInf {
        match (self.num.valuation(), self.den.valuation()) {
            (GammaInf::Finite(a), GammaInf::Finite(b)) => GammaInf::Finite(&a - &b),
            _ => GammaInf::Infinity,
        }
    }

    /// Valuation of a nonzero element.
    pub fn val(&self) -> Result<GroupElem> {
        match self.valuation() {
            GammaInf::Finite(v) => Ok(v),
            GammaInf::Infinity => Err(Error::Precondition("valuation of zero".into())),
        }
    }

    pub fn leading_coeff(&self) -> Rat {
        match (self.num.leading(), self.den.leading()) {
            (Some((_, a)), Some((_, b))) => a / b,
            _ => Rat::zero(),
        }
    }

    /// Leading term c·m with v(self − c·m) > v(self).
    pub fn leading_term(&self) -> Option<(Rat, Monomial)> {
        let (m, c) = self.num.leading()?;
        let (n, d) = self.den.leading()?;
        Some((c / d, m * &n.inv()))
    }

    pub fn signum(&self) -> Ordering {
        self.leading_coeff().cmp(&Rat::zero())
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, q: &Rat) -> Self {
        Self { num: self.num.scale(q), den: self.den.clone() }
    }

    pub fn pow_int(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Self {
        if self.den.len() == 1 {
            return self.num.derivative().into();
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).unwrap()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        let c = self.leading_coeff();
        (self.num == self.den.scale(&c)).then_some(c)
    }

    /// Terms of the expansion with valuation ≤ `bound`, so that the remainder has valuation
    /// > `bound`. `None` if more than `max_terms` terms would be needed.
    pub fn expand_to(&self, bound: &GroupElem, max_terms: usize) -> Option<Series> {
        self.expand_while(max_terms, |m, _| m.valuation() <= *bound)
    }

    /// The first `n` terms of the expansion (fewer if it terminates).
    pub fn expand_terms(&self, n: usize) -> Series {
        self.expand_while(n, |_, k| k < n).unwrap_or_default()
    }

    fn expand_while(&self, max_terms: usize, keep: impl Fn(&Monomial, usize) -> bool) -> Option<Series> {
        // den is normalized to leading term 1, so each quotient term is the remainder's leading term
        let mut q = Series::zero();
        let mut r = self.num.clone();
        let mut k = 0;
        loop {
            let Some((m, c)) = r.leading() else { return Some(q) };
            if !keep(m, k) {
                return Some(q);
            }
            if k >= max_terms {
                return None;
            }
            let (m, c) = (m.clone(), c.clone());
            r = &r - &self.den.mul_term(&c, &m);
            q.add_term(m, c);
            k += 1;
        }
    }
}

impl From<Series> for Frac {
    fn from(s: Series) -> Self {
        Self { num: s, den: Series::one() }
    }
}

impl From<Rat> for Frac {
    fn from(c: Rat) -> Self {
        Self::constant(c)
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Frac {}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Frac> for &Frac {
    type Output = Frac;
    fn add(self, rhs: &Frac) -> Frac {
        if self.den == rhs.den {
            return Frac::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Frac::new(n, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub<&Frac> for &Frac {
    type Output = Frac;
    fn sub(self, rhs: &Frac) -> Frac {
        self + &(-rhs)
    }
}

impl Mul<&Frac> for &Frac {
    type Output = Frac;
    fn mul(self, rhs: &Frac) -> Frac {
        if self.is_zero() || rhs.is_zero() {
            return Frac::zero();
        }
        Frac::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div<&Frac> for &Frac {
    type Output = Result<Frac>;
    fn div(self, rhs: &Frac) -> Result<Frac> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Frac::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Frac {
            type Output = <&'static Frac as $tr<&'static Frac>>::Output;
            fn $m(self, rhs: Frac) -> Self::Output {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        -&self
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} | {}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Default for Frac {
    fn default() -> Self {
        Self::zero()
    }
}
