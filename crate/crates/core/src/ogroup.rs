//! The ordered group Γ_log = ⊕ ℚeₙ with lexicographic order (lower index dominates),
//! and its extension by a formal element δ realized as the all-ones sequence.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Syntax { offset: 0, message: format!("bad rational `{s}`") };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// JSON form of a rational: a number when integral and small, else a `p/q` string.
pub(crate) fn rat_json(r: &Rat) -> serde_json::Value {
    if r.is_integer() {
        if let Some(i) = r.numer().to_i64() {
            return serde_json::Value::from(i);
        }
    }
    serde_json::Value::from(fmt_rat(r))
}

/// Finite-support rational vector; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupElem {
    coeffs: BTreeMap<usize, Rat>,
}

impl GroupElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(n: usize) -> Self {
        Self::single(n, Rat::one())
    }

    pub fn single(n: usize, q: Rat) -> Self {
        let mut g = Self::zero();
        g.set(n, q);
        g
    }

    /// e₀ + … + e_{len-1}
    pub fn ones(len: usize) -> Self {
        Self::from_pairs((0..len).map(|i| (i, Rat::one())))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let mut g = Self::zero();
        for (i, q) in pairs {
            let v = g.get(i) + q;
            g.set(i, v);
        }
        g
    }

    pub fn from_dense(v: &[Rat]) -> Self {
        Self::from_pairs(v.iter().cloned().enumerate())
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::from_pairs(v.iter().map(|&c| int(c)).enumerate())
    }

    pub fn get(&self, n: usize) -> Rat {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, n: usize, q: Rat) {
        if q.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, q);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.coeffs.iter().map(|(i, q)| (*i, q))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn first_index(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn last_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.values().next()
    }

    pub fn signum(&self) -> Ordering {
        match self.leading_coeff() {
            None => Ordering::Equal,
            Some(q) if q.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * q)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&int(k))
    }

    /// Compares archimedean classes: for nonzero elements the class is fixed by the first index.
    pub fn arch_cmp(&self, other: &Self) -> Ordering {
        match (self.first_index(), other.first_index()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }

    /// Whether the element lies in the convex subgroup Δ_k = {γ : γ_i = 0 for i < k}.
    pub fn in_tail(&self, k: usize) -> bool {
        self.first_index().is_none_or(|i| i >= k)
    }

    pub fn dense(&self, len: usize) -> Vec<Rat> {
        (0..len).map(|i| self.get(i)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let len = self.last_index().map_or(0, |i| i + 1);
        serde_json::Value::Array(self.dense(len).iter().map(rat_json).collect())
    }
}

impl Ord for GroupElem {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.coeffs.iter().peekable();
        let mut b = other.coeffs.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((_, x)), None) => return x.cmp(&&Rat::zero()),
                (None, Some((_, y))) => return Rat::zero().cmp(y),
                (Some((i, x)), Some((j, y))) => match i.cmp(j) {
                    Ordering::Less => return x.cmp(&&Rat::zero()),
                    Ordering::Greater => return Rat::zero().cmp(y),
                    Ordering::Equal => {
                        let c = x.cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for GroupElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&GroupElem> for GroupElem {
    fn add_assign(&mut self, rhs: &GroupElem) {
        for (i, q) in &rhs.coeffs {
            let v = self.get(*i) + q;
            self.set(*i, v);
        }
    }
}

impl Add<&GroupElem> for &GroupElem {
    type Output = GroupElem;
    fn add(self, rhs: &GroupElem) -> GroupElem {
        let mut r = self.clone();
        r += rhs;
        r
    }
}

impl Add for GroupElem {
    type Output = GroupElem;
    fn add(mut self, rhs: GroupElem) -> GroupElem {
        self += &rhs;
        self
    }
}

impl Neg for &GroupElem {
    type Output = GroupElem;
    fn neg(self) -> GroupElem {
        GroupElem { coeffs: self.coeffs.iter().map(|(i, q)| (*i, -q)).collect() }
    }
}

impl Neg for GroupElem {
    type Output = GroupElem;
    fn neg(self) -> GroupElem {
        -&self
    }
}

impl Sub<&GroupElem> for &GroupElem {
    type Output = GroupElem;
    fn sub(self, rhs: &GroupElem) -> GroupElem {
        self + &(-rhs)
    }
}

impl Sub for GroupElem {
    type Output = GroupElem;
    fn sub(self, rhs: GroupElem) -> GroupElem {
        &self - &rhs
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.last_index().map_or(0, |i| i + 1);
        let parts: Vec<String> = self.dense(len).iter().map(fmt_rat).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GroupElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Syntax { offset: 0, message: format!("expected `[..]`, got `{t}`") })?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let mut v = Vec::new();
        for part in inner.split(',') {
            v.push(parse_rat(part)?);
        }
        Ok(Self::from_dense(&v))
    }
}

impl Serialize for GroupElem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let len = self.last_index().map_or(0, |i| i + 1);
        let mut seq = ser.serialize_seq(Some(len))?;
        for q in self.dense(len) {
            seq.serialize_element(&rat_json(&q))?;
        }
        seq.end()
    }
}

/// `base + q·δ`, where δ is the all-ones sequence (1, 1, 1, …).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExtElem {
    pub base: GroupElem,
    pub delta: Rat,
}

impl ExtElem {
    pub fn new(base: GroupElem, delta: Rat) -> Self {
        Self { base, delta }
    }

    pub fn delta() -> Self {
        Self::new(GroupElem::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.delta.is_zero()
    }

    /// Entry i of the padded sequence.
    pub fn entry(&self, i: usize) -> Rat {
        self.base.get(i) + &self.delta
    }

    /// Index past which the padded sequence is constant (equal to the δ coefficient).
    pub fn horizon(&self) -> usize {
        self.base.last_index().map_or(0, |i| i + 1)
    }

    pub fn first_index(&self) -> Option<usize> {
        (0..=self.horizon()).find(|&i| !self.entry(i).is_zero())
    }

    pub fn signum(&self) -> Ordering {
        match self.first_index() {
            None => Ordering::Equal,
            Some(i) => self.entry(i).cmp(&Rat::zero()),
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        Self::new(self.base.scale(q), &self.delta * q)
    }
}

impl From<GroupElem> for ExtElem {
    fn from(g: GroupElem) -> Self {
        Self::new(g, Rat::zero())
    }
}

pub fn ext_cmp(a: &ExtElem, b: &ExtElem) -> Ordering {
    (a - b).signum()
}

impl Ord for ExtElem {
    fn cmp(&self, other: &Self) -> Ordering {
        ext_cmp(self, other)
    }
}

impl PartialOrd for ExtElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&ExtElem> for &ExtElem {
    type Output = ExtElem;
    fn add(self, rhs: &ExtElem) -> ExtElem {
        ExtElem::new(&self.base + &rhs.base, &self.delta + &rhs.delta)
    }
}

impl Sub<&ExtElem> for &ExtElem {
    type Output = ExtElem;
    fn sub(self, rhs: &ExtElem) -> ExtElem {
        ExtElem::new(&self.base - &rhs.base, &self.delta - &rhs.delta)
    }
}

impl Neg for &ExtElem {
    type Output = ExtElem;
    fn neg(self) -> ExtElem {
        ExtElem::new(-&self.base, -&self.delta)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*delta", self.base, fmt_rat(&self.delta))
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "delta" {
            return Ok(Self::delta());
        }
        match t.rfind(']') {
            Some(end) => {
                let base: GroupElem = t[..=end].parse()?;
                let rest = t[end + 1..].trim();
                if rest.is_empty() {
                    return Ok(base.into());
                }
                let (sign, rest) = match rest.strip_prefix('+') {
                    Some(r) => (Rat::one(), r),
                    None => match rest.strip_prefix('-') {
                        Some(r) => (-Rat::one(), r),
                        None => return Err(Error::Syntax { offset: end + 1, message: "expected `+ q*delta`".into() }),
                    },
                };
                let rest = rest.trim();
                let q = match rest.strip_suffix("delta") {
                    Some("") => Rat::one(),
                    Some(c) => parse_rat(c.trim().trim_end_matches('*'))?,
                    None => return Err(Error::Syntax { offset: end + 1, message: "expected `q*delta`".into() }),
                };
                Ok(Self::new(base, sign * q))
            }
            None => Err(Error::Syntax { offset: 0, message: format!("bad extended element `{t}`") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[i64]) -> GroupElem {
        GroupElem::from_ints(v)
    }

    #[test]
    fn lex_order() {
        assert_eq!(g(&[1]).cmp(&g(&[0, 1000])), Ordering::Greater);
        assert_eq!(GroupElem::zero().cmp(&GroupElem::zero()), Ordering::Equal);
        assert_eq!(g(&[1, -5]).cmp(&g(&[1])), Ordering::Less);
        assert!(g(&[0, 0, -1]) < GroupElem::zero());
    }

    #[test]
    fn group_ops() {
        assert_eq!(&g(&[1, 2]) + &g(&[0, -2]), GroupElem::basis(0));
        assert_eq!(-GroupElem::zero(), GroupElem::zero());
        assert_eq!(g(&[2, 4]).scale(&rat(1, 2)), g(&[1, 2]));
        assert_eq!(g(&[1, 2]).support_len(), 2);
        assert_eq!((&g(&[1, 2]) - &g(&[1, 2])).support_len(), 0);
    }

    #[test]
    fn archimedean_classes() {
        assert_eq!(GroupElem::basis(2).arch_cmp(&GroupElem::basis(0)), Ordering::Less);
        assert_eq!(GroupElem::zero().arch_cmp(&GroupElem::basis(5)), Ordering::Less);
        assert_eq!(g(&[0, 3]).arch_cmp(&g(&[0, -7])), Ordering::Equal);
        // n·e₂ < e₀ for every n we try
        for n in [1i64, 10, 1000, 1_000_000] {
            assert!(GroupElem::basis(2).scale_int(n) < GroupElem::basis(0));
        }
    }

    #[test]
    fn ext_order() {
        let d = ExtElem::delta();
        assert_eq!(ext_cmp(&d, &GroupElem::ones(3).into()), Ordering::Greater);
        assert_eq!(ext_cmp(&d, &d), Ordering::Equal);
        assert_eq!(ext_cmp(&d, &g(&[2]).into()), Ordering::Less);
        let a: ExtElem = g(&[1, -3]).into();
        let b: ExtElem = g(&[1, 2]).into();
        assert_eq!(ext_cmp(&a, &b), a.base.cmp(&b.base));
    }

    #[test]
    fn text_round_trip() {
        let a = GroupElem::from_dense(&[int(1), rat(-1, 2), int(0), int(3)]);
        assert_eq!(a.to_string(), "[1, -1/2, 0, 3]");
        assert_eq!(a.to_string().parse::<GroupElem>().unwrap(), a);
        assert_eq!("[]".parse::<GroupElem>().unwrap(), GroupElem::zero());
        assert_eq!("[1, 0, 0]".parse::<GroupElem>().unwrap(), GroupElem::basis(0));
        let e = ExtElem::new(g(&[0, 1]), rat(-2, 3));
        assert_eq!(e.to_string().parse::<ExtElem>().unwrap(), e);
        assert_eq!("delta".parse::<ExtElem>().unwrap(), ExtElem::delta());
        assert_eq!("[1] - delta".parse::<ExtElem>().unwrap(), ExtElem::new(g(&[1]), int(-1)));
    }

    #[test]
    fn json_form() {
        let a = GroupElem::from_dense(&[int(-2), rat(1, 2)]);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"[-2,"1/2"]"#);
    }
}
