//! The maps ψ, ′, ∫, s, χ of the logarithmic asymptotic couple, the gap-extended couple,
//! axiom checks, the trichotomy classifier and the Liouville-closure count.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{pre, Error, Result};
use crate::ogroup::{int, rat, ExtElem, GroupElem, Rat};
use crate::report::Report;
use crate::sample;

/// Γ ∪ {∞}; derived order puts `Infinity` above every finite value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GammaInf {
    Finite(GroupElem),
    Infinity,
}

impl GammaInf {
    pub fn finite(&self) -> Option<&GroupElem> {
        match self {
            GammaInf::Finite(g) => Some(g),
            GammaInf::Infinity => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            GammaInf::Finite(g) => g.to_json(),
            GammaInf::Infinity => json!("inf"),
        }
    }
}

impl fmt::Display for GammaInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaInf::Finite(g) => write!(f, "{g}"),
            GammaInf::Infinity => write!(f, "inf"),
        }
    }
}

pub fn psi(g: &GroupElem) -> GammaInf {
    match g.first_index() {
        Some(n) => GammaInf::Finite(GroupElem::ones(n + 1)),
        None => GammaInf::Infinity,
    }
}

pub fn der(g: &GroupElem) -> Result<GroupElem> {
    match g.first_index() {
        Some(n) => Ok(g + &GroupElem::ones(n + 1)),
        None => pre("der(0) is undefined"),
    }
}

/// First index whose coefficient differs from 1.
fn first_non_one(g: &GroupElem) -> usize {
    let one = Rat::one();
    (0..).find(|&i| g.get(i) != one).unwrap()
}

pub fn integrate(g: &GroupElem) -> GroupElem {
    let n = first_non_one(g);
    let mut r = g.clone();
    for i in 0..n {
        r.set(i, Rat::zero());
    }
    r.set(n, g.get(n) - Rat::one());
    r
}

pub fn successor(g: &GroupElem) -> GroupElem {
    GroupElem::ones(first_non_one(g) + 1)
}

pub fn chi(g: &GroupElem) -> GroupElem {
    match g.first_index() {
        Some(n) => -GroupElem::basis(n + 1),
        None => GroupElem::zero(),
    }
}

/// γ ∈ (Γ^<)′, i.e. ∫γ < 0.
pub fn in_neg_derived(g: &GroupElem) -> bool {
    integrate(g).is_negative()
}

/// γ ∈ (Γ^>)′, i.e. ∫γ > 0.
pub fn in_pos_derived(g: &GroupElem) -> bool {
    integrate(g).is_positive()
}

pub fn psi_ext(a: &ExtElem) -> Option<GroupElem> {
    a.first_index().map(|n| GroupElem::ones(n + 1))
}

pub fn der_ext(a: &ExtElem) -> Result<ExtElem> {
    match psi_ext(a) {
        Some(p) => Ok(a + &ExtElem::from(p)),
        None => pre("der(0) is undefined"),
    }
}

/// The unique α ≠ 0 with α′ = a, or `None` when a is the gap δ.
pub fn integrate_ext(a: &ExtElem) -> Option<ExtElem> {
    let one = Rat::one();
    let n = (0..=a.horizon()).find(|&i| a.entry(i) != one)?;
    let mut base = a.base.clone();
    for i in 0..n {
        base.set(i, -a.delta.clone());
    }
    base.set(n, a.base.get(n) - one);
    Some(ExtElem::new(base, a.delta.clone()))
}

/// Group operations plus ψ, enough to state AC1–AC3 and (HC).
pub trait CoupleGroup: Clone + Ord + fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, k: i64) -> Self;
    /// ψ, with `None` standing for ∞.
    fn psi_of(&self) -> Option<Self>;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            Self::zero().minus(self)
        } else {
            self.clone()
        }
    }
}

impl CoupleGroup for GroupElem {
    fn zero() -> Self {
        GroupElem::zero()
    }
    fn is_zero(&self) -> bool {
        GroupElem::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, k: i64) -> Self {
        self.scale_int(k)
    }
    fn psi_of(&self) -> Option<Self> {
        psi(self).finite().cloned()
    }
}

impl CoupleGroup for ExtElem {
    fn zero() -> Self {
        ExtElem::default()
    }
    fn is_zero(&self) -> bool {
        ExtElem::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, k: i64) -> Self {
        self.scale(&int(k))
    }
    fn psi_of(&self) -> Option<Self> {
        psi_ext(self).map(ExtElem::from)
    }
}

/// a ≥ b in Γ ∪ {∞}, `None` being ∞.
fn ge_inf<T: Ord>(a: &Option<T>, b: &Option<T>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y,
    }
}

fn min_inf<T: Ord + Clone>(a: &Option<T>, b: &Option<T>) -> Option<T> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

fn show<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("inf".to_string(), |x| x.to_string())
}

/// Checks AC1, AC2, AC3 and (HC) on one triple, recording each check in `rep`.
pub fn check_axioms_on<T: CoupleGroup>(rep: &mut Report, a: &T, b: &T, k: i64) {
    let sum = a.plus(b);
    if !sum.is_zero() {
        let lhs = sum.psi_of();
        let rhs = min_inf(&a.psi_of(), &b.psi_of());
        rep.check(
            ge_inf(&lhs, &rhs),
            || format!("AC1 a={a} b={b}"),
            "psi(a+b) >= min(psi a, psi b)",
            || format!("{} vs {}", show(&lhs), show(&rhs)),
        );
    }
    if k != 0 {
        let lhs = a.times(k).psi_of();
        let rhs = a.psi_of();
        rep.check(lhs == rhs, || format!("AC2 a={a} k={k}"), "psi(k a) = psi(a)", || format!("{} vs {}", show(&lhs), show(&rhs)));
    }
    for (x, y) in [(a, b), (b, a)] {
        if *x > T::zero() && !y.is_zero() {
            let lhs = x.plus(&x.psi_of().unwrap());
            let rhs = y.psi_of().unwrap();
            rep.check(lhs > rhs, || format!("AC3 a={x} b={y}"), "a + psi(a) > psi(b)", || format!("{lhs} vs {rhs}"));
        }
    }
    let (p, q) = (a.abs_val(), b.abs_val());
    if !p.is_zero() && !q.is_zero() {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let (pl, ph) = (lo.psi_of(), hi.psi_of());
        rep.check(ge_inf(&pl, &ph), || format!("HC a={lo} b={hi}"), "psi(a) >= psi(b)", || format!("{} vs {}", show(&pl), show(&ph)));
    }
}

pub fn verify_couple_axioms(sample_size: usize, seed: u64) -> Result<Report> {
    verify_couple_axioms_in(&CoupleDescriptor::LogFull, sample_size, seed)
}

/// Axiom check on seeded random triples in the given couple.
pub fn verify_couple_axioms_in(c: &CoupleDescriptor, sample_size: usize, seed: u64) -> Result<Report> {
    if sample_size == 0 {
        return pre("sample_size must be at least 1");
    }
    let mut rep = Report::new(format!("couple-axioms:{c}"));
    let mut r = sample::rng(seed);
    for _ in 0..sample_size {
        let ks = [1i64, -1, 2, -3, 5, 16];
        match c {
            CoupleDescriptor::TruncatedN(n) => {
                let t = [0, 1, 2].map(|_| sample::group_elem_below(&mut r, *n));
                let k = ks[rand::Rng::gen_range(&mut r, 0..ks.len())];
                check_axioms_on(&mut rep, &t[0], &t[1], k);
                check_axioms_on(&mut rep, &t[1], &t[2], k);
            }
            CoupleDescriptor::LogFull => {
                let t = [0, 1, 2].map(|_| sample::group_elem(&mut r));
                let k = ks[rand::Rng::gen_range(&mut r, 0..ks.len())];
                check_axioms_on(&mut rep, &t[0], &t[1], k);
                check_axioms_on(&mut rep, &t[1], &t[2], k);
            }
            CoupleDescriptor::LogWithGapDelta => {
                let t = [0, 1, 2].map(|_| sample::ext_elem(&mut r));
                let k = ks[rand::Rng::gen_range(&mut r, 0..ks.len())];
                check_axioms_on(&mut rep, &t[0], &t[1], k);
                check_axioms_on(&mut rep, &t[1], &t[2], k);
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoupleDescriptor {
    TruncatedN(usize),
    LogFull,
    LogWithGapDelta,
}

impl fmt::Display for CoupleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoupleDescriptor::TruncatedN(n) => write!(f, "trunc:{n}"),
            CoupleDescriptor::LogFull => write!(f, "logfull"),
            CoupleDescriptor::LogWithGapDelta => write!(f, "loggap"),
        }
    }
}

impl std::str::FromStr for CoupleDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "logfull" => Ok(Self::LogFull),
            "loggap" => Ok(Self::LogWithGapDelta),
            t => match t.strip_prefix("trunc:").map(|n| n.parse::<usize>()) {
                Some(Ok(n)) if n >= 1 => Ok(Self::TruncatedN(n)),
                _ => Err(Error::Syntax { offset: 0, message: format!("unknown couple `{t}`") }),
            },
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TrichotomyResult {
    Grounded(GroupElem),
    Gap(ExtElem),
    AsymptoticIntegration,
}

impl TrichotomyResult {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            TrichotomyResult::Grounded(m) => json!({"kind": "grounded", "max_psi": m}),
            TrichotomyResult::Gap(b) => json!({"kind": "gap", "beta": b.to_string()}),
            TrichotomyResult::AsymptoticIntegration => json!({"kind": "asymptotic_integration"}),
        }
    }
}

const CERT_DEPTH: usize = 32;
const CERT_SAMPLES: usize = 256;
const CERT_SEED: u64 = 0x5eed;

fn cert(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Certificate(what()))
    }
}

/// Classifies the couple and re-verifies the verdict before returning it.
pub fn classify_couple(c: &CoupleDescriptor) -> Result<TrichotomyResult> {
    let res = match c {
        CoupleDescriptor::TruncatedN(n) => {
            if *n == 0 {
                return pre("truncation length must be positive");
            }
            TrichotomyResult::Grounded(GroupElem::ones(*n))
        }
        CoupleDescriptor::LogFull => TrichotomyResult::AsymptoticIntegration,
        CoupleDescriptor::LogWithGapDelta => TrichotomyResult::Gap(ExtElem::delta()),
    };
    verify_classification(c, &res)?;
    Ok(res)
}

pub fn verify_classification(c: &CoupleDescriptor, res: &TrichotomyResult) -> Result<()> {
    let mut r = sample::rng(CERT_SEED);
    match (c, res) {
        (CoupleDescriptor::TruncatedN(n), TrichotomyResult::Grounded(m)) => {
            // Ψ is spanned by ψ(e_k), k < n, since ψ only looks at the first index.
            let psis: Vec<GroupElem> = (0..*n).map(|k| psi(&GroupElem::basis(k)).finite().unwrap().clone()).collect();
            let top = psis.iter().max().unwrap();
            cert(top == m, || format!("max psi is {top}, claimed {m}"))?;
            cert(m.last_index().is_some_and(|i| i < *n), || "max psi outside truncation".into())?;
            // The only preimage of m under ′ in the full group lies outside the truncation.
            let pre_m = integrate(m);
            cert(pre_m.last_index().unwrap() >= *n, || format!("max psi has integral {pre_m} inside truncation"))?;
            for _ in 0..CERT_SAMPLES {
                let g = sample::group_elem_below(&mut r, *n);
                if &g == m {
                    continue;
                }
                let a = integrate(&g);
                cert(a.last_index().is_some_and(|i| i < *n) && der(&a)? == g, || format!("{g} has no integral in trunc:{n}"))?;
                if !g.is_zero() {
                    let p = psi(&g);
                    cert(p.finite().unwrap() <= m, || format!("psi({g}) above max psi"))?;
                }
            }
            Ok(())
        }
        (CoupleDescriptor::LogFull, TrichotomyResult::AsymptoticIntegration) => {
            for _ in 0..CERT_SAMPLES {
                let g = sample::group_elem(&mut r);
                let a = integrate(&g);
                cert(!a.is_zero() && der(&a)? == g, || format!("der(integrate({g})) != {g}"))?;
                if !g.is_zero() {
                    cert(integrate(&der(&g)?) == g, || format!("integrate(der({g})) != {g}"))?;
                }
            }
            Ok(())
        }
        (CoupleDescriptor::LogWithGapDelta, TrichotomyResult::Gap(beta)) => {
            cert(*beta == ExtElem::delta(), || format!("unexpected gap element {beta}"))?;
            for k in 0..=CERT_DEPTH {
                let p: ExtElem = GroupElem::ones(k + 1).into();
                cert(*beta > p, || format!("{beta} <= {p}"))?;
            }
            let qs = [rat(1, 16), rat(1, 2), int(1), int(2)];
            for k in 0..=CERT_DEPTH {
                for q in &qs {
                    let fam = [
                        ExtElem::from(GroupElem::single(k, q.clone())),
                        (&ExtElem::delta() - &ExtElem::from(GroupElem::ones(k + 1))).scale(q),
                    ];
                    for g in fam {
                        cert(g.signum() == Ordering::Greater, || format!("{g} not positive"))?;
                        let d = der_ext(&g)?;
                        cert(*beta < d, || format!("{beta} >= ({g})'"))?;
                    }
                }
            }
            cert(integrate_ext(beta).is_none(), || format!("{beta} has an integral"))?;
            for _ in 0..CERT_SAMPLES {
                let g = sample::ext_elem(&mut r);
                if &g == beta {
                    continue;
                }
                let a = integrate_ext(&g).ok_or_else(|| Error::Certificate(format!("{g} has no integral")))?;
                cert(!a.is_zero() && der_ext(&a)? == g, || format!("der(integrate({g})) != {g}"))?;
            }
            Ok(())
        }
        _ => Err(Error::Certificate(format!("verdict {res:?} does not match couple {c}"))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum YesNoUnknown {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountResult {
    One,
    Two,
    Unknown,
}

pub fn closure_count(t: &TrichotomyResult, lambda_free: YesNoUnknown) -> Result<CountResult> {
    Ok(match (t, lambda_free) {
        (TrichotomyResult::Gap(_), YesNoUnknown::Yes) => return pre("a couple with a gap is not lambda-free"),
        (TrichotomyResult::Grounded(_), _) => CountResult::One,
        (TrichotomyResult::Gap(_), _) => CountResult::Two,
        (TrichotomyResult::AsymptoticIntegration, YesNoUnknown::Yes) => CountResult::One,
        (TrichotomyResult::AsymptoticIntegration, YesNoUnknown::No) => CountResult::Two,
        (TrichotomyResult::AsymptoticIntegration, YesNoUnknown::Unknown) => CountResult::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[i64]) -> GroupElem {
        GroupElem::from_ints(v)
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(&g(&[0, 0, 3])), GammaInf::Finite(g(&[1, 1, 1])));
        assert_eq!(psi(&GroupElem::zero()), GammaInf::Infinity);
        assert_eq!(psi(&g(&[-1])), GammaInf::Finite(g(&[1])));
        assert!(GammaInf::Infinity > GammaInf::Finite(g(&[100])));
    }

    #[test]
    fn der_values() {
        assert_eq!(der(&g(&[1])).unwrap(), g(&[2]));
        assert_eq!(der(&g(&[0, -1])).unwrap(), g(&[1]));
        assert_eq!(der(&GroupElem::basis(5)).unwrap(), g(&[1, 1, 1, 1, 1, 2]));
        assert!(der(&GroupElem::zero()).is_err());
    }

    #[test]
    fn integrate_values() {
        let a = GroupElem::from_dense(&[int(1), int(1), rat(1, 2)]);
        assert_eq!(integrate(&a), GroupElem::single(2, rat(-1, 2)));
        assert_eq!(integrate(&g(&[1])), g(&[0, -1]));
        assert_eq!(integrate(&g(&[2])), g(&[1]));
        assert_eq!(integrate(&GroupElem::zero()), g(&[-1]));
    }

    #[test]
    fn successor_and_chi() {
        assert_eq!(successor(&g(&[1, 1, 5])), g(&[1, 1, 1]));
        assert_eq!(successor(&g(&[2])), g(&[1]));
        assert_eq!(successor(&GroupElem::zero()), g(&[1]));
        assert_eq!(chi(&g(&[0, 3])), g(&[0, 0, -1]));
        assert_eq!(chi(&GroupElem::zero()), GroupElem::zero());
        assert_eq!(chi(&g(&[-7])), g(&[0, -1]));
    }

    #[test]
    fn ext_maps() {
        let d = ExtElem::delta();
        assert_eq!(psi_ext(&d), Some(g(&[1])));
        assert_eq!(integrate_ext(&d), None);
        let x = ExtElem::new(g(&[0, 3]), rat(1, 2));
        let a = integrate_ext(&x).unwrap();
        assert_eq!(der_ext(&a).unwrap(), x);
    }

    #[test]
    fn axioms_small() {
        let rep = verify_couple_axioms(1000, 1).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(verify_couple_axioms(0, 1).is_err());
        let a = g(&[0, 5]);
        assert_eq!(psi(&a.scale_int(3)), psi(&a));
    }

    #[test]
    fn classify() {
        assert_eq!(classify_couple(&CoupleDescriptor::TruncatedN(3)).unwrap(), TrichotomyResult::Grounded(g(&[1, 1, 1])));
        assert_eq!(classify_couple(&CoupleDescriptor::LogFull).unwrap(), TrichotomyResult::AsymptoticIntegration);
        assert_eq!(classify_couple(&CoupleDescriptor::LogWithGapDelta).unwrap(), TrichotomyResult::Gap(ExtElem::delta()));
        let wrong = TrichotomyResult::Grounded(g(&[1, 1]));
        assert!(verify_classification(&CoupleDescriptor::TruncatedN(3), &wrong).is_err());
    }

    #[test]
    fn closure_table() {
        let gr = TrichotomyResult::Grounded(g(&[1]));
        let gap = TrichotomyResult::Gap(ExtElem::delta());
        let ai = TrichotomyResult::AsymptoticIntegration;
        assert_eq!(closure_count(&gr, YesNoUnknown::Unknown).unwrap(), CountResult::One);
        assert_eq!(closure_count(&gap, YesNoUnknown::No).unwrap(), CountResult::Two);
        assert_eq!(closure_count(&ai, YesNoUnknown::Yes).unwrap(), CountResult::One);
        assert_eq!(closure_count(&ai, YesNoUnknown::No).unwrap(), CountResult::Two);
        assert!(closure_count(&gap, YesNoUnknown::Yes).is_err());
    }
}
