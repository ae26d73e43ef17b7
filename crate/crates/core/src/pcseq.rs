//! Pseudocauchy sequences over K_log, analyzed on finite prefixes.
//!
//! Every verdict is scoped to the prefix it was computed on. `Yes(ρ₀)` means the defining
//! condition holds for all indices ≥ ρ₀ inside the prefix and the prefix contains at least two
//! comparisons past ρ₀.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use crate::acouple::{chi, GammaInf};
use crate::error::{pre, Error, Result};
use crate::logts::{Frac, Monomial, Series};
use crate::ogroup::{int, GroupElem, Rat};
use crate::sample;

type Gen = Arc<dyn Fn(usize) -> Frac + Send + Sync>;

#[derive(Clone)]
pub struct PCSeq {
    label: String,
    gen: Gen,
}

impl PCSeq {
    pub fn new(label: impl Into<String>, gen: impl Fn(usize) -> Frac + Send + Sync + 'static) -> Self {
        Self { label: label.into(), gen: Arc::new(gen) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn term(&self, n: usize) -> Frac {
        (self.gen)(n)
    }

    pub fn prefix(&self, len: usize) -> Vec<Frac> {
        (0..len).map(|n| self.term(n)).collect()
    }

    /// λₙ = −ℓₙ††.
    pub fn lambda() -> Self {
        Self::new("lambda", |n| Frac::from(lambda_term(n)))
    }

    /// The λ-sequence of the logarithmic sequence ℓₙ(1 + ℓₙ₊₁⁻¹).
    pub fn lambda_perturbed() -> Self {
        Self::new("lambda-perturbed", |n| {
            let l = &Frac::ell(n) * &(&Frac::one() + &Frac::monomial(Monomial::ell(n + 1).inv()));
            lambda_definitional(&l).expect("ℓₙ(1 + ℓₙ₊₁⁻¹) is not constant")
        })
    }

    /// aₙ = Σ_{k≤n} x⁻ᵏ.
    pub fn geometric() -> Self {
        Self::new("geometric", |n| Frac::from(geometric_sum(n)))
    }

    pub fn constant(f: Frac) -> Self {
        Self::new(format!("const:{f}"), move |_| f.clone())
    }

    /// aₙ = the first n+1 terms of the expansion of `f`.
    pub fn truncations(f: Frac) -> Self {
        Self::new(format!("expand:{f}"), move |n| Frac::from(f.expand_terms(n + 1)))
    }
}

impl fmt::Debug for PCSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PCSeq({})", self.label)
    }
}

fn geometric_sum(n: usize) -> Series {
    let mut s = Series::zero();
    for k in 0..=n {
        s.add_term(Monomial::new(GroupElem::single(0, int(-(k as i64)))), Rat::one());
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Yes { rho0: usize, len: usize },
    No { len: usize, witness: Vec<usize> },
    Inconclusive { len: usize },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }
}

fn v(f: &Frac) -> GammaInf {
    f.valuation()
}

/// Three-valued verdict for "`ok(i)` holds for every i ≥ ρ₀" over i in 0..count, where `ok(i)`
/// holding for the last index is needed and two indices past ρ₀ certify.
fn tail_verdict(count: usize, len: usize, ok: impl Fn(usize) -> bool, witness: impl Fn(usize) -> Vec<usize>) -> Verdict {
    if count == 0 {
        return Verdict::Inconclusive { len };
    }
    if !ok(count - 1) {
        return Verdict::No { len, witness: witness(count - 1) };
    }
    let mut rho0 = count - 1;
    while rho0 > 0 && ok(rho0 - 1) {
        rho0 -= 1;
    }
    if rho0 + 2 <= count {
        Verdict::Yes { rho0, len }
    } else {
        Verdict::Inconclusive { len }
    }
}

/// τ > σ > ρ ≥ ρ₀ ⟹ a_τ − a_σ ≺ a_σ − a_ρ on the prefix.
pub fn is_pc_prefix(s: &PCSeq, len: usize) -> Result<Verdict> {
    if len < 4 {
        return pre("prefix length must be at least 4");
    }
    let a = s.prefix(len);
    let d = |i: usize, j: usize| v(&(&a[j] - &a[i]));
    // ok(ρ): every triple starting at ρ satisfies the condition
    let ok = |rho: usize| {
        (rho + 1..len).all(|sg| {
            let base = d(rho, sg);
            (sg + 1..len).all(|tau| d(sg, tau) > base)
        })
    };
    let witness = |rho: usize| {
        for sg in rho + 1..len {
            for tau in sg + 1..len {
                if d(sg, tau) <= d(rho, sg) {
                    return vec![rho, sg, tau];
                }
            }
        }
        vec![rho]
    };
    Ok(tail_verdict(len - 2, len, ok, witness))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthPrefix {
    pub rho0: usize,
    pub sigmas: Vec<GroupElem>,
}

/// σ_ρ = v(a_{ρ+1} − a_ρ) for ρ₀ ≤ ρ < len−1.
pub fn width_prefix(s: &PCSeq, len: usize) -> Result<WidthPrefix> {
    let Verdict::Yes { rho0, .. } = is_pc_prefix(s, len)? else {
        return pre(format!("{} is not pseudocauchy on a prefix of length {len}", s.label));
    };
    let a = s.prefix(len);
    let sigmas = (rho0..len - 1).map(|r| (&a[r + 1] - &a[r]).val()).collect::<Result<Vec<_>>>()?;
    Ok(WidthPrefix { rho0, sigmas })
}

/// a_ρ ⇝ a on the prefix: γ_ρ = v(a − a_ρ) strictly increasing from some ρ₀.
pub fn pseudolimit_check(s: &PCSeq, a: &Frac, len: usize) -> Verdict {
    let g: Vec<GammaInf> = s.prefix(len).iter().map(|t| v(&(a - t))).collect();
    if g.contains(&GammaInf::Infinity) {
        return Verdict::Inconclusive { len };
    }
    if len < 2 {
        return Verdict::Inconclusive { len };
    }
    tail_verdict(len - 1, len, |r| g[r] < g[r + 1], |r| vec![r, r + 1])
}

/// Condition (3) of equivalence with ρ = σ = k: for all ρ′, σ′ > k in the prefix,
/// a_ρ′ − b_σ′ ≺ a_ρ′ − a_k and a_ρ′ − b_σ′ ≺ b_σ′ − b_k.
pub fn equivalent_prefix(s1: &PCSeq, s2: &PCSeq, len: usize) -> Result<Verdict> {
    for s in [s1, s2] {
        if !is_pc_prefix(s, len)?.is_yes() {
            return pre(format!("{} is not pseudocauchy on a prefix of length {len}", s.label));
        }
    }
    let (a, b) = (s1.prefix(len), s2.prefix(len));
    let ok = |k: usize| {
        (k + 1..len).all(|r| {
            (k + 1..len).all(|q| {
                let c = v(&(&a[r] - &b[q]));
                c > v(&(&a[r] - &a[k])) && c > v(&(&b[q] - &b[k]))
            })
        })
    };
    Ok(tail_verdict(len - 2, len, ok, |k| vec![k]))
}

pub fn ell(n: usize) -> Frac {
    Frac::ell(n)
}

/// Closed form λₙ = Σ_{i≤n} ℓᵢ†.
pub fn lambda_term(n: usize) -> Series {
    let mut s = Series::zero();
    for i in 0..=n {
        s.add_term(Monomial::ell_dagger(i), Rat::one());
    }
    s
}

/// −(l††) computed through two logarithmic derivatives.
pub fn lambda_definitional(l: &Frac) -> Result<Frac> {
    let d = crate::logts::logderiv(l)?;
    Ok(-crate::logts::logderiv(&d)?)
}

/// Conditions (1)–(3) of a logarithmic sequence on the generators ℓ₀..ℓ_n, plus coinitiality
/// against `probe`: returns an index k ≤ n with ℓₖ ≼ probe when probe ≻ 1.
pub fn check_log_sequence(n: usize, probe: Option<&Frac>) -> Result<Option<usize>> {
    for i in 0..n {
        let (a, b) = (ell(i).val()?, ell(i + 1).val()?);
        if b != chi(&a) {
            return Err(Error::Certificate(format!("v(l{}) != chi(v(l{i}))", i + 1)));
        }
        if b <= a {
            return Err(Error::Certificate(format!("l{} is not dominated by l{i}", i + 1)));
        }
    }
    let Some(f) = probe else { return Ok(None) };
    let vf = f.val()?;
    if !vf.is_negative() {
        return pre("coinitiality probe must be ≻ 1");
    }
    Ok((0..=n).find(|&k| ell(k).valuation() >= GammaInf::Finite(vf.clone())))
}

/// Least n ≤ `max_n` with v(s + λₙ) ≤ v(ℓₙ†), i.e. g = ℓₙ satisfies s − g†† ≽ g†.
pub fn lambda_free_witness(s: &Frac, max_n: usize) -> Option<usize> {
    (0..=max_n).find(|&n| {
        let t = s + &Frac::from(lambda_term(n));
        t.valuation() <= GammaInf::Finite(GroupElem::ones(n + 1))
    })
}

/// Seeded corpus: random elements plus perturbations of −λ_k, the hardest inputs for the
/// witness search.
pub fn lambda_corpus(size: usize, seed: u64) -> Vec<Frac> {
    (0..size)
        .map(|i| {
            let mut r = sample::case_rng(seed, i);
            if i % 2 == 0 {
                sample::frac(&mut r)
            } else {
                let k = r.gen_range(0..=11);
                let tail = if r.gen_bool(0.5) { sample::frac(&mut r) } else { Frac::zero() };
                &(-&Frac::from(lambda_term(k))) + &tail
            }
        })
        .collect()
}

/// R = P/Q with coefficient lists in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Vec<Frac>,
    pub den: Vec<Frac>,
}

fn horner(c: &[Frac], a: &Frac) -> Frac {
    c.iter().rev().fold(Frac::zero(), |acc, k| &(&acc * a) + k)
}

fn trim(mut c: Vec<Frac>) -> Vec<Frac> {
    while c.last().is_some_and(|k| k.is_zero()) {
        c.pop();
    }
    c
}

impl RatFn {
    pub fn new(num: Vec<Frac>, den: Vec<Frac>) -> Result<Self> {
        let (num, den) = (trim(num), trim(den));
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn poly(num: Vec<Frac>) -> Self {
        Self::new(num, vec![Frac::one()]).unwrap()
    }

    /// Integer coefficients, for tests and the shipped family.
    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self> {
        let f = |v: &[i64]| v.iter().map(|&c| Frac::constant(int(c))).collect();
        Self::new(f(num), f(den))
    }

    pub fn eval(&self, a: &Frac) -> Result<Frac> {
        let q = horner(&self.den, a);
        if q.is_zero() {
            return Err(Error::Precondition(format!("R is undefined at {a}")));
        }
        &horner(&self.num, a) / &q
    }

    /// P·c_Q − Q·c_P = 0 for the leading ratio, i.e. R ∈ K.
    pub fn is_constant(&self) -> bool {
        let cross = |p: &[Frac], q: &[Frac]| -> Vec<Frac> {
            let mut out = vec![Frac::zero(); p.len() + q.len()];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in q.iter().enumerate() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
            out
        };
        // R constant iff P′Q − PQ′ = 0 as a polynomial in X
        let deriv = |p: &[Frac]| -> Vec<Frac> {
            p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&int(i as i64))).collect()
        };
        let l = cross(&deriv(&self.num), &self.den);
        let r = cross(&self.num, &deriv(&self.den));
        let n = l.len().max(r.len());
        (0..n).all(|i| {
            let a = l.get(i).cloned().unwrap_or_default();
            let b = r.get(i).cloned().unwrap_or_default();
            a == b
        })
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &[Frac]| {
            let parts: Vec<String> =
                c.iter().enumerate().filter(|(_, k)| !k.is_zero()).map(|(i, k)| format!("({k})*X^{i}")).collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        };
        write!(f, "[{}] / [{}]", show(&self.num), show(&self.den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KaplanskyFit {
    pub alpha: GroupElem,
    pub i: u32,
    /// Least index from which v(R(a_ρ) − R(a)) = α + iγ_ρ holds through the end of the prefix.
    pub law_start: usize,
    /// Index just below `law_start` where the law fails, if any.
    pub first_violation: Option<usize>,
    pub verified: bool,
}

fn positive_integer_ratio(num: &GroupElem, den: &GroupElem) -> Option<u32> {
    let k = den.first_index()?;
    let q = num.get(k) / den.get(k);
    if !q.is_integer() || !q.is_positive() {
        return None;
    }
    let i = q.to_integer().to_u32()?;
    (den.scale_int(i as i64) == *num).then_some(i)
}

/// Fits v(R(a_ρ) − R(a)) = α + iγ_ρ from the last two prefix indices and checks it backwards.
pub fn kaplansky_fit(r: &RatFn, s: &PCSeq, a: &Frac, len: usize) -> Result<KaplanskyFit> {
    if r.is_constant() {
        return pre("R is constant");
    }
    if len < 3 {
        return pre("prefix length must be at least 3");
    }
    let ra = r.eval(a)?;
    let terms = s.prefix(len);
    let mut gam = Vec::with_capacity(len);
    let mut del = Vec::with_capacity(len);
    for t in &terms {
        gam.push(v(&(a - t)));
        del.push(r.eval(t).ok().map(|rt| v(&(&rt - &ra))));
    }
    let fin = |g: &GammaInf| g.finite().cloned();
    let at = |k: usize| -> Option<(GroupElem, GroupElem)> { Some((fin(&gam[k])?, fin(del[k].as_ref()?)?)) };
    let ((g1, d1), (g2, d2)) = match (at(len - 2), at(len - 1)) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(Error::Certificate("law cannot be fitted: infinite valuation at the end of the prefix".into())),
    };
    let i = positive_integer_ratio(&(&d2 - &d1), &(&g2 - &g1))
        .ok_or_else(|| Error::Certificate(format!("no integer slope: Δδ = {} vs Δγ = {}", &d2 - &d1, &g2 - &g1)))?;
    let alpha = &d2 - &g2.scale_int(i as i64);
    let holds = |k: usize| at(k).is_some_and(|(g, d)| d == &alpha + &g.scale_int(i as i64));
    let mut law_start = len - 1;
    while law_start > 0 && holds(law_start - 1) {
        law_start -= 1;
    }
    let first_violation = law_start.checked_sub(1);
    Ok(KaplanskyFit { alpha, i, law_start, first_violation, verified: law_start + 3 <= len })
}

/// Pseudolimits of the shipped Kaplansky pairs; the sequences are their truncated expansions.
pub fn kaplansky_limits() -> Vec<Frac> {
    let p = |t: &str| crate::expr::parse_frac(t).expect("shipped expression");
    [
        "x/(x-1)",
        "1/(x-l1)",
        "l1/(1+x^-1)",
        "(x^2+1)/(x-2)",
        "1/(1-x^-1*l1)",
        "x^(1/2)/(x^(1/2)-1)",
        "(l1+x)/(x-l2)",
        "1/(x^2+x+l1)",
        "(3-x^-1)/(1+2*x^-1)",
        "(x*l1+1)/(x+l2)",
    ]
    .iter()
    .map(|t| p(t))
    .collect()
}

pub fn kaplansky_pairs() -> Vec<(PCSeq, Frac)> {
    kaplansky_limits().into_iter().map(|a| (PCSeq::truncations(a.clone()), a)).collect()
}

/// The shipped family of nonconstant R with numerator and denominator degree ≤ 3.
pub fn kaplansky_functions() -> Vec<RatFn> {
    let p = |t: &str| crate::expr::parse_frac(t).expect("shipped expression");
    let c = |n: i64| Frac::constant(int(n));
    let nums: Vec<Vec<Frac>> = vec![
        vec![c(0), c(1)],
        vec![c(0), c(0), c(1)],
        vec![c(0), c(0), c(0), c(1)],
        vec![c(1), c(1)],
        vec![c(0), c(-1), c(1)],
        vec![c(0), c(1), c(0), c(1)],
        vec![c(-1), c(1), c(-1), c(2)],
        vec![p("x"), c(0), c(1)],
        vec![c(0), p("l1"), c(0), p("x")],
    ];
    let dens: Vec<Vec<Frac>> =
        vec![vec![c(1)], vec![c(0), c(1)], vec![c(-2), c(1)], vec![p("x^-1"), c(0), c(1)]];
    let mut out = Vec::new();
    for d in &dens {
        for n in &nums {
            let r = RatFn::new(n.clone(), d.clone()).unwrap();
            if !r.is_constant() {
                out.push(r);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_frac;

    fn ones(n: usize) -> GroupElem {
        GroupElem::ones(n)
    }

    #[test]
    fn lambda_closed_form_matches_definition() {
        for n in 0..6 {
            assert_eq!(Frac::from(lambda_term(n)), lambda_definitional(&ell(n)).unwrap(), "n={n}");
        }
        assert_eq!(lambda_term(0).to_string(), "x^-1");
        assert_eq!(lambda_term(1).to_string(), "x^-1 + (x*l1)^-1");
    }

    #[test]
    fn pc_verdicts() {
        assert_eq!(is_pc_prefix(&PCSeq::lambda(), 8).unwrap(), Verdict::Yes { rho0: 0, len: 8 });
        assert!(is_pc_prefix(&PCSeq::constant(ell(0)), 8).unwrap().is_no());
        assert_eq!(is_pc_prefix(&PCSeq::geometric(), 8).unwrap(), Verdict::Yes { rho0: 0, len: 8 });
        assert!(is_pc_prefix(&PCSeq::geometric(), 3).is_err());
    }

    #[test]
    fn widths() {
        let w = width_prefix(&PCSeq::lambda(), 6).unwrap();
        assert_eq!(w.sigmas, (0..5).map(|n| ones(n + 2)).collect::<Vec<_>>());
        let w = width_prefix(&PCSeq::geometric(), 5).unwrap();
        let e = |k: i64| GroupElem::from_ints(&[k]);
        assert_eq!(w.sigmas, vec![e(1), e(2), e(3), e(4)]);
        assert!(width_prefix(&PCSeq::constant(ell(1)), 6).is_err());
    }

    #[test]
    fn pseudolimits() {
        let a = parse_frac("x/(x-1)").unwrap();
        assert_eq!(pseudolimit_check(&PCSeq::geometric(), &a, 8), Verdict::Yes { rho0: 0, len: 8 });
        assert!(pseudolimit_check(&PCSeq::lambda(), &Frac::zero(), 8).is_no());
        let first = PCSeq::geometric().term(0);
        assert!(!pseudolimit_check(&PCSeq::geometric(), &first, 4).is_yes());
    }

    #[test]
    fn equivalence() {
        let (l, p, g) = (PCSeq::lambda(), PCSeq::lambda_perturbed(), PCSeq::geometric());
        assert!(equivalent_prefix(&l, &p, 7).unwrap().is_yes());
        assert!(equivalent_prefix(&l, &l, 7).unwrap().is_yes());
        assert!(equivalent_prefix(&l, &g, 7).unwrap().is_no());
    }

    #[test]
    fn log_sequence_conditions() {
        let f = parse_frac("l3^2 + l7").unwrap();
        let k = check_log_sequence(10, Some(&f)).unwrap().unwrap();
        assert!(ell(k).valuation() >= f.valuation());
        assert_eq!(check_log_sequence(10, None).unwrap(), None);
    }

    #[test]
    fn lambda_free_examples() {
        assert_eq!(lambda_free_witness(&Frac::zero(), 5), Some(0));
        assert_eq!(lambda_free_witness(&-Frac::from(lambda_term(5)), 10), Some(6));
        assert_eq!(lambda_free_witness(&Frac::from(lambda_term(5)), 5), Some(0));
        assert_eq!(lambda_free_witness(&-Frac::from(lambda_term(5)), 5), None);
    }

    #[test]
    fn kaplansky_examples() {
        let a = parse_frac("x/(x-1)").unwrap();
        let s = PCSeq::geometric();
        let sq = RatFn::from_ints(&[0, 0, 1], &[1]).unwrap();
        let fit = kaplansky_fit(&sq, &s, &a, 8).unwrap();
        assert_eq!((fit.alpha.clone(), fit.i, fit.verified), (a.scale(&int(2)).val().unwrap(), 1, true));
        let id = RatFn::from_ints(&[0, 1], &[1]).unwrap();
        let fit = kaplansky_fit(&id, &s, &a, 8).unwrap();
        assert_eq!((fit.alpha, fit.i, fit.law_start), (GroupElem::zero(), 1, 0));
        let inv = RatFn::from_ints(&[1], &[0, 1]).unwrap();
        let fit = kaplansky_fit(&inv, &s, &a, 8).unwrap();
        assert_eq!((fit.alpha, fit.i, fit.verified), (a.val().unwrap().scale_int(-2), 1, true));
        assert!(kaplansky_fit(&RatFn::from_ints(&[3], &[1]).unwrap(), &s, &a, 8).is_err());
        assert!(RatFn::from_ints(&[0, 2], &[0, 1]).unwrap().is_constant());
    }
}
