use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::acouple::GammaInf;
use crate::ogroup::{fmt_rat, GroupElem, Rat};

/// ∏ ℓᵢ^{rᵢ} with ℓ₀ = x. Ordered by valuation, so the dominant monomial comes first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: GroupElem,
}

impl Monomial {
    pub fn new(exps: GroupElem) -> Self {
        Self { exps }
    }

    pub fn one() -> Self {
        Self::default()
    }

    /// The generator ℓₙ.
    pub fn ell(n: usize) -> Self {
        Self::new(GroupElem::basis(n))
    }

    /// ℓₙ† = (ℓ₀ℓ₁⋯ℓₙ)⁻¹.
    pub fn ell_dagger(n: usize) -> Self {
        Self::new(-GroupElem::ones(n + 1))
    }

    /// The monomial with valuation `v`.
    pub fn with_valuation(v: &GroupElem) -> Self {
        Self::new(-v)
    }

    pub fn exps(&self) -> &GroupElem {
        &self.exps
    }

    pub fn valuation(&self) -> GroupElem {
        -&self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_zero()
    }

    pub fn inv(&self) -> Self {
        Self::new(-&self.exps)
    }

    pub fn pow(&self, q: &Rat) -> Self {
        Self::new(self.exps.scale(q))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.exps.cmp(&self.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// exponent vectors add under multiplication
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul<&Monomial> for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        Monomial::new(&self.exps + &rhs.exps)
    }
}

fn gen_name(i: usize) -> String {
    if i == 0 {
        "x".to_string()
    } else {
        format!("l{i}")
    }
}

pub(crate) fn fmt_exp(q: &Rat) -> String {
    if q.is_integer() {
        fmt_rat(q)
    } else {
        format!("({})", fmt_rat(q))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<(usize, &Rat)> = self.exps.iter().collect();
        let common = parts[0].1;
        if parts.len() > 1 && !common.is_one() && parts.iter().all(|(_, q)| *q == common) {
            let names: Vec<String> = parts.iter().map(|(i, _)| gen_name(*i)).collect();
            return write!(f, "({})^{}", names.join("*"), fmt_exp(common));
        }
        let names: Vec<String> = parts
            .iter()
            .map(|(i, q)| if q.is_one() { gen_name(*i) } else { format!("{}^{}", gen_name(*i), fmt_exp(q)) })
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite sum of monomials with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Series {
    terms: BTreeMap<Monomial, Rat>,
}

impl Series {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rat::one(), m)
    }

    pub fn ell(n: usize) -> Self {
        Self::monomial(Monomial::ell(n))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing valuation, dominant term first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next()
    }

    pub fn trailing(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn valuation(&self) -> GammaInf {
        match self.leading() {
            Some((m, _)) => GammaInf::Finite(m.valuation()),
            None => GammaInf::Infinity,
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.leading().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn mul_term(&self, q: &Rat, m: &Monomial) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(n, c)| (n * m, c * q)).collect() }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (i, r) in m.exps().iter() {
                out.add_term(m * &Monomial::ell_dagger(i), c * r);
            }
        }
        out
    }

    /// Per-generator (min, max) exponent over the terms, for the indices in `idx`.
    fn exp_box(&self, idx: &BTreeSet<usize>) -> BTreeMap<usize, (Rat, Rat)> {
        let mut out = BTreeMap::new();
        for &i in idx {
            let mut it = self.terms.keys().map(|m| m.exps().get(i));
            let first = it.next().unwrap_or_else(Rat::zero);
            let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), e| (lo.min(e.clone()), hi.max(e)));
            out.insert(i, (lo, hi));
        }
        out
    }

    /// Exact quotient when `d` divides `self` with a finite quotient found within `cap` steps.
    pub fn div_exact(&self, d: &Series, cap: usize) -> Option<Series> {
        let (dm, dc) = d.leading()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        // the exponent box of a product is the sum of the boxes, so the quotient's box is pinned
        let idx: BTreeSet<usize> =
            self.terms.keys().chain(d.terms.keys()).flat_map(|m| m.exps().iter().map(|(i, _)| i)).collect();
        let (nb, db) = (self.exp_box(&idx), d.exp_box(&idx));
        let mut qbox = BTreeMap::new();
        for i in &idx {
            let lo = &nb[i].0 - &db[i].0;
            let hi = &nb[i].1 - &db[i].1;
            if lo > hi {
                return None;
            }
            qbox.insert(*i, (lo, hi));
        }
        let dm_inv = dm.inv();
        let mut q = Self::zero();
        let mut r = self.clone();
        for _ in 0..cap {
            let Some((m, c)) = r.leading() else { return Some(q) };
            let qm = m * &dm_inv;
            let inside = qbox.iter().all(|(i, (lo, hi))| {
                let e = qm.exps().get(*i);
                *lo <= e && e <= *hi
            });
            if !inside {
                return None;
            }
            let qc = c / dc;
            for (n, e) in &d.terms {
                r.add_term(n * &qm, -(e * &qc));
            }
            q.add_term(qm, qc);
        }
        None
    }
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m * n, c * d);
            }
        }
        out
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rat(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
