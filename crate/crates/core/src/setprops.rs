//! Convex subsets of Γ_log given symbolically, with exact membership and three-valued
//! jammed / yardstick decisions that carry re-checkable evidence.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::acouple::{chi, der, in_neg_derived, integrate, successor};
use crate::error::{pre, Error, Result};
use crate::extend::{self, ExtScenario, Kind};
use crate::ogroup::{rat, GroupElem, Rat};
use crate::sample;

/// Largest tail index Δ_k examined by the searches.
pub const K_MAX: usize = 32;
/// Upper bound on frontier candidates in a search.
pub const FRONTIER_BUDGET: usize = 10_000;

#[derive(Clone)]
pub enum SetDescriptor {
    LessThan(GroupElem),
    LessEq(GroupElem),
    /// Ψ↓ = (Γ^<)′.
    PsiDown,
    /// α + nD.
    Affine(GroupElem, u32, Box<SetDescriptor>),
    DownClosure(Box<SetDescriptor>),
    /// ∫D = {γ ≠ 0 : γ′ ∈ D}.
    IntImage(Box<SetDescriptor>),
    ExtS(Arc<ExtScenario>),
}

use SetDescriptor::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Inside (Γ^<)′.
    Neg,
    /// Inside (Γ^>)′.
    Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JamCert {
    pub k: usize,
    pub gamma0: GroupElem,
    /// An upper bound of the set with upper − γ₀ ∈ Δ_k.
    pub upper: GroupElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub gamma: GroupElem,
    pub target: GroupElem,
    pub reached: GroupElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    None,
    Greatest { element: GroupElem },
    /// One certificate for each Δ_k, k = 1..=K_MAX.
    Jammed { certs: Vec<JamCert> },
    /// Every frontier element γ₀ paired with a member γ₁ > γ₀, γ₁ − γ₀ ∉ Δ_k.
    NotJammed { k: usize, pairs: Vec<(GroupElem, GroupElem)> },
    Base { base: GroupElem },
    /// Increasing members whose step leaves the set.
    Escapes { points: Vec<GroupElem> },
    Steps { base: GroupElem, steps: Vec<StepCheck> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub verdict: Outcome,
    pub evidence: Evidence,
    pub rule: String,
}

impl PropertyVerdict {
    fn new(verdict: Outcome, evidence: Evidence, rule: impl Into<String>) -> Self {
        Self { verdict, evidence, rule: rule.into() }
    }

    fn unknown(rule: impl Into<String>) -> Self {
        Self::new(Outcome::Unknown, Evidence::None, rule)
    }

    pub fn holds(&self) -> bool {
        self.verdict == Outcome::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Outcome::Fails
    }

    /// The same verdict for α + nS.
    fn transport(self, alpha: &GroupElem, n: u32) -> Self {
        let f = |g: &GroupElem| alpha + &g.scale_int(n as i64);
        let evidence = match self.evidence {
            Evidence::Greatest { element } => Evidence::Greatest { element: f(&element) },
            Evidence::Jammed { certs } => Evidence::Jammed {
                certs: certs
                    .iter()
                    .map(|c| JamCert { k: c.k, gamma0: f(&c.gamma0), upper: f(&c.upper) })
                    .collect(),
            },
            Evidence::NotJammed { k, pairs } => {
                Evidence::NotJammed { k, pairs: pairs.iter().map(|(a, b)| (f(a), f(b))).collect() }
            }
            _ => Evidence::None,
        };
        let verdict = if evidence == Evidence::None && self.verdict != Outcome::Unknown { Outcome::Unknown } else { self.verdict };
        Self { verdict, evidence, rule: format!("affine image: {}", self.rule) }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub k_max: usize,
    /// Chain-derived elements near the top of the set.
    pub top: usize,
    /// Random members below the top elements.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { k_max: K_MAX, top: 16, samples: 48, seed: 0 }
    }
}

fn first_non_one(g: &GroupElem) -> usize {
    let one = Rat::one();
    (0..).find(|&i| g.get(i) != one).unwrap()
}

impl SetDescriptor {
    pub fn lt(b: GroupElem) -> Self {
        LessThan(b)
    }

    pub fn affine(alpha: GroupElem, n: u32, d: SetDescriptor) -> Result<Self> {
        if n == 0 {
            return pre("affine factor must be positive");
        }
        Ok(Affine(alpha, n, Box::new(d)))
    }

    pub fn down(d: SetDescriptor) -> Self {
        DownClosure(Box::new(d))
    }

    pub fn int(d: SetDescriptor) -> Self {
        IntImage(Box::new(d))
    }

    pub fn ext(sc: Arc<ExtScenario>) -> Self {
        ExtS(sc)
    }

    /// The derived set the descriptor lies in, when known.
    pub fn side(&self) -> Option<Side> {
        match self {
            PsiDown => Some(Side::Neg),
            LessThan(b) | LessEq(b) => in_neg_derived(b).then_some(Side::Neg),
            ExtS(sc) => Some(if sc.kind == Kind::BigInt { Side::Neg } else { Side::Pos }),
            // Γ^< ⊆ Ψ↓
            DownClosure(d) | IntImage(d) => (d.side() == Some(Side::Neg)).then_some(Side::Neg),
            Affine(..) => None,
        }
    }

    /// Whether the set is downward closed in Γ.
    pub fn is_down_closed(&self) -> bool {
        match self {
            LessThan(_) | LessEq(_) | PsiDown | DownClosure(_) => true,
            ExtS(sc) => sc.kind == Kind::BigInt,
            Affine(_, _, d) => d.is_down_closed(),
            // ∫ is increasing and maps (Γ^<)′ onto Γ^<
            IntImage(d) => d.side() == Some(Side::Neg) && d.is_down_closed(),
        }
    }

    pub fn member(&self, g: &GroupElem) -> Result<bool> {
        match self {
            LessThan(b) => Ok(g < b),
            LessEq(b) => Ok(g <= b),
            PsiDown => {
                let k = first_non_one(g);
                Ok(g.get(k) < Rat::one())
            }
            Affine(alpha, n, d) => d.member(&(g - alpha).scale(&rat(1, *n as i64))),
            IntImage(d) => {
                if d.side().is_none() {
                    return Err(Error::UnsupportedDescriptor(format!("∫ of {d}: operand not inside a derived set")));
                }
                if g.is_zero() {
                    return Ok(false);
                }
                d.member(&der(g)?)
            }
            DownClosure(d) => d.down_member(g),
            ExtS(sc) => sc.member(g),
        }
    }

    /// Membership in the downward closure.
    pub fn down_member(&self, g: &GroupElem) -> Result<bool> {
        if self.is_down_closed() {
            return self.member(g);
        }
        match self {
            // S is a downward closed part of (Γ^>)′, and Γ = (Γ^<)′ ∪ (Γ^>)′
            ExtS(sc) => Ok(in_neg_derived(g) || sc.member(g)?),
            Affine(alpha, n, d) => d.down_member(&(g - alpha).scale(&rat(1, *n as i64))),
            IntImage(d) if d.side() == Some(Side::Pos) && matches!(**d, ExtS(_)) => {
                Ok(!g.is_positive() || self.member(g)?)
            }
            _ => Err(Error::UnsupportedDescriptor(format!("downward closure of {self}"))),
        }
    }

    /// Rewrites ∫Ψ↓ = Γ^< and ∫Γ^{<β} = Γ^{<∫β} (β ∈ Ψ↓), recursively.
    pub fn simplify(&self) -> SetDescriptor {
        match self {
            Affine(a, n, d) => Affine(a.clone(), *n, Box::new(d.simplify())),
            DownClosure(d) => {
                let d = d.simplify();
                if d.is_down_closed() {
                    d
                } else {
                    DownClosure(Box::new(d))
                }
            }
            IntImage(d) => match d.simplify() {
                PsiDown => LessThan(GroupElem::zero()),
                LessThan(b) if in_neg_derived(&b) => LessThan(integrate(&b)),
                LessEq(b) if in_neg_derived(&b) => LessEq(integrate(&b)),
                other => IntImage(Box::new(other)),
            },
            other => other.clone(),
        }
    }

    /// Increasing members approaching the top of the set; a single element when the set has a
    /// greatest element.
    pub fn top_members(&self, m: usize) -> Result<Vec<GroupElem>> {
        match self {
            LessThan(b) => Ok((1..=m).map(|k| b - &GroupElem::basis(k)).collect()),
            LessEq(b) => Ok(vec![b.clone()]),
            PsiDown => Ok((1..=m).map(GroupElem::ones).collect()),
            Affine(a, n, d) => Ok(d.top_members(m)?.iter().map(|g| a + &g.scale_int(*n as i64)).collect()),
            DownClosure(d) => d.top_members(m),
            IntImage(d) => {
                if d.side().is_none() {
                    return Err(Error::UnsupportedDescriptor(format!("∫ of {d}: operand not inside a derived set")));
                }
                Ok(d.top_members(m)?.iter().map(integrate).collect())
            }
            ExtS(sc) => (0..m).map(|k| sc.chain_gamma(k)).collect(),
        }
    }

    /// Seeded members below the top elements, for search frontiers.
    fn lower_members(&self, top: &[GroupElem], cfg: &SearchConfig) -> Vec<GroupElem> {
        let mut out = Vec::new();
        for i in 0..cfg.samples.min(FRONTIER_BUDGET) {
            let mut r = sample::case_rng(cfg.seed, i);
            let t = &top[r.gen_range(0..top.len())];
            let g = t - &sample::positive_elem(&mut r);
            if matches!(self.member(&g), Ok(true)) {
                out.push(g);
            }
        }
        out
    }

    /// Membership of a candidate taken as an upper bound: outside the downward closure.
    fn bounds_above(&self, g: &GroupElem) -> Result<bool> {
        Ok(!self.down_member(g)?)
    }
}

pub fn member(d: &SetDescriptor, g: &GroupElem) -> Result<bool> {
    d.member(g)
}

pub fn is_jammed(d: &SetDescriptor) -> PropertyVerdict {
    is_jammed_with(d, &SearchConfig::default())
}

pub fn is_jammed_with(d: &SetDescriptor, cfg: &SearchConfig) -> PropertyVerdict {
    match d.simplify() {
        LessEq(b) => PropertyVerdict::new(Outcome::Fails, Evidence::Greatest { element: b }, "has a greatest element"),
        LessThan(b) => {
            let certs = (1..=cfg.k_max)
                .map(|k| JamCert { k, gamma0: &b - &GroupElem::basis(k), upper: b.clone() })
                .collect();
            PropertyVerdict::new(Outcome::Holds, Evidence::Jammed { certs }, "Γ^{<β} is jammed since Γ^> has no least element")
        }
        PsiDown => {
            // γ₀ = (−e_k)′ and γ₀ + 2e_k ∈ (Γ^>)′
            let certs = (1..=cfg.k_max)
                .map(|k| {
                    let g0 = GroupElem::ones(k);
                    let upper = &g0 + &GroupElem::basis(k).scale_int(2);
                    JamCert { k, gamma0: g0, upper }
                })
                .collect();
            PropertyVerdict::new(Outcome::Holds, Evidence::Jammed { certs }, "Ψ↓ = (Γ^<)′ is jammed: (−δ)′ + 2δ ∈ (Γ^>)′")
        }
        Affine(a, n, inner) => is_jammed_with(&inner, cfg).transport(&a, n),
        DownClosure(inner) => {
            let v = is_jammed_with(&inner, cfg);
            PropertyVerdict { rule: format!("same as the set before downward closure: {}", v.rule), ..v }
        }
        other => jam_search(&other, cfg),
    }
}

fn jam_search(d: &SetDescriptor, cfg: &SearchConfig) -> PropertyVerdict {
    let run = || -> Result<PropertyVerdict> {
        let ups = d.top_members(cfg.top + 8)?;
        if ups.len() < 2 {
            return Ok(PropertyVerdict::unknown("no increasing members to search"));
        }
        let top = &ups[..cfg.top.min(ups.len() - 1)];
        let mut frontier = top.to_vec();
        frontier.extend(d.lower_members(top, cfg));
        frontier.truncate(FRONTIER_BUDGET);
        'k: for k in 1..=cfg.k_max {
            let mut pairs = Vec::new();
            for g0 in &frontier {
                match ups.iter().find(|g1| *g1 > g0 && !(*g1 - g0).in_tail(k)) {
                    Some(g1) => pairs.push((g0.clone(), g1.clone())),
                    None => continue 'k,
                }
            }
            return Ok(PropertyVerdict::new(
                Outcome::Fails,
                Evidence::NotJammed { k, pairs },
                format!("every frontier element is followed by a member outside Δ_{k}"),
            ));
        }
        Ok(PropertyVerdict::unknown(format!("no Δ_k with k ≤ {} falsified on the frontier", cfg.k_max)))
    };
    run().unwrap_or_else(|e| PropertyVerdict::unknown(format!("search stopped: {e}")))
}

pub fn has_yardstick(d: &SetDescriptor) -> PropertyVerdict {
    has_yardstick_with(d, &SearchConfig::default())
}

pub fn has_yardstick_with(d: &SetDescriptor, cfg: &SearchConfig) -> PropertyVerdict {
    match d.simplify() {
        LessThan(b) if b.is_zero() => PropertyVerdict::new(
            Outcome::Holds,
            Evidence::Base { base: -GroupElem::basis(0) },
            "γ < 0 has first nonzero coordinate negative and χ(γ) lies at a later index",
        ),
        LessThan(b) => {
            // β − ½e_m comes arbitrarily close to β while χ stays at the index after β's first
            let m0 = b.last_index().unwrap() + 5;
            let points = (m0..m0 + 8).map(|m| &b - &GroupElem::single(m, rat(1, 2))).collect();
            PropertyVerdict::new(
                Outcome::Fails,
                Evidence::Escapes { points },
                "β − ½e_m − χ(β − ½e_m) > β for every large m",
            )
        }
        LessEq(_) => PropertyVerdict::unknown("has a greatest element"),
        DownClosure(inner) => {
            let v = has_yardstick_with(&inner, cfg);
            PropertyVerdict { rule: format!("same as the convex set before downward closure: {}", v.rule), ..v }
        }
        IntImage(inner) => match has_derived_yardstick_with(&inner, cfg) {
            Ok(v) if v.holds() => {
                let Evidence::Steps { base, .. } = &v.evidence else { unreachable!() };
                PropertyVerdict::new(
                    Outcome::Holds,
                    Evidence::Base { base: integrate(base) },
                    "∫S has the yardstick property when S has the derived one",
                )
            }
            _ => escape_search(&IntImage(inner), cfg, |g| Ok(g - &chi(g)), "γ − χ(γ)"),
        },
        other => escape_search(&other, cfg, |g| Ok(g - &chi(g)), "γ − χ(γ)"),
    }
}

/// Fails when every top member from the midpoint on steps out of the set.
fn escape_search(
    d: &SetDescriptor,
    cfg: &SearchConfig,
    step: impl Fn(&GroupElem) -> Result<GroupElem>,
    what: &str,
) -> PropertyVerdict {
    let run = || -> Result<PropertyVerdict> {
        let top = d.top_members(cfg.top)?;
        if top.len() < 2 {
            return Ok(PropertyVerdict::unknown("no increasing members to search"));
        }
        let tail = &top[top.len() / 2..];
        for g in tail {
            if d.member(&step(g)?)? {
                return Ok(PropertyVerdict::unknown(format!("{what} stays inside at {g}")));
            }
        }
        Ok(PropertyVerdict::new(
            Outcome::Fails,
            Evidence::Escapes { points: tail.to_vec() },
            format!("{what} leaves the set along members approaching its top"),
        ))
    };
    run().unwrap_or_else(|e| PropertyVerdict::unknown(format!("search stopped: {e}")))
}

fn derived_step(g: &GroupElem) -> GroupElem {
    g - &integrate(&successor(g))
}

/// Errors unless the set lies inside (Γ^<)′ or (Γ^>)′.
pub fn has_derived_yardstick(d: &SetDescriptor) -> Result<PropertyVerdict> {
    has_derived_yardstick_with(d, &SearchConfig::default())
}

pub fn has_derived_yardstick_with(d: &SetDescriptor, cfg: &SearchConfig) -> Result<PropertyVerdict> {
    if d.side().is_none() {
        return pre(format!("{d} is not known to lie inside (Γ^<)′ or (Γ^>)′"));
    }
    Ok(match d.simplify() {
        PsiDown => PropertyVerdict::new(
            Outcome::Holds,
            Evidence::Base { base: GroupElem::basis(0) },
            "γ − ∫s(γ) = γ + e_{k+1} keeps the first coordinate k of γ that differs from 1",
        ),
        ExtS(sc) => ext_steps(&sc, cfg).unwrap_or_else(|e| PropertyVerdict::unknown(format!("step failed: {e}"))),
        other => escape_search(&other, cfg, |g| Ok(derived_step(g)), "γ − ∫s(γ)"),
    })
}

/// Runs the constructive step from chain witnesses above the base v(s).
fn ext_steps(sc: &ExtScenario, cfg: &SearchConfig) -> Result<PropertyVerdict> {
    let base = sc.initial()?.gamma;
    let mut steps = Vec::new();
    for w in sc.chain(cfg.top.min(8))? {
        if w.gamma <= base {
            continue;
        }
        let next = sc.yardstick_step(&w)?;
        steps.push(StepCheck { target: derived_step(&w.gamma), gamma: w.gamma, reached: next.gamma });
    }
    Ok(PropertyVerdict::new(
        Outcome::Holds,
        Evidence::Steps { base, steps },
        format!("the {} step reaches γ − ∫s(γ) from every member above v(s)", sc.kind.name()),
    ))
}

pub fn sup_in_divhull(d: &SetDescriptor) -> Result<Option<GroupElem>> {
    match d.simplify() {
        LessThan(b) | LessEq(b) => Ok(Some(b)),
        // upper bounds must exceed every e₀ + … + e_k
        PsiDown => Ok(None),
        Affine(a, n, inner) => Ok(sup_in_divhull(&inner)?.map(|s| &a + &s.scale_int(n as i64))),
        DownClosure(inner) => sup_in_divhull(&inner),
        other => Err(Error::UnsupportedDescriptor(format!("supremum of {other}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Jammed,
    Yardstick,
    DerivedYardstick,
}

/// Re-checks the evidence behind a Holds or Fails verdict.
pub fn check_certificate(d: &SetDescriptor, prop: Property, v: &PropertyVerdict) -> Result<()> {
    let fail = |m: String| Err(Error::Certificate(format!("{d}: {m}")));
    if v.verdict == Outcome::Unknown {
        return Ok(());
    }
    match (&v.evidence, prop, v.verdict) {
        (Evidence::Greatest { element }, Property::Jammed, Outcome::Fails) => {
            if !d.member(element)? {
                return fail(format!("greatest element {element} is not a member"));
            }
            let above = element + &GroupElem::basis(element.last_index().map_or(0, |i| i + 1));
            if d.member(&above)? {
                return fail(format!("{above} lies above the greatest element"));
            }
        }
        (Evidence::Jammed { certs }, Property::Jammed, Outcome::Holds) => {
            if certs.iter().map(|c| c.k).ne(1..=certs.len()) || certs.is_empty() {
                return fail("certificates do not cover Δ_1, Δ_2, …".into());
            }
            for c in certs {
                if !d.member(&c.gamma0)? || !d.bounds_above(&c.upper)? || !(&c.upper - &c.gamma0).in_tail(c.k) {
                    return fail(format!("certificate at Δ_{} with γ₀ = {} fails", c.k, c.gamma0));
                }
            }
        }
        (Evidence::NotJammed { k, pairs }, Property::Jammed, Outcome::Fails) => {
            if pairs.is_empty() {
                return fail("empty frontier".into());
            }
            for (a, b) in pairs {
                if !(d.member(a)? && d.member(b)? && b > a && !(b - a).in_tail(*k)) {
                    return fail(format!("pair ({a}, {b}) does not leave Δ_{k}"));
                }
            }
        }
        (Evidence::Base { base }, Property::Yardstick | Property::DerivedYardstick, Outcome::Holds) => {
            if !d.member(base)? {
                return fail(format!("base {base} is not a member"));
            }
            let step = |g: &GroupElem| if prop == Property::Yardstick { g - &chi(g) } else { derived_step(g) };
            for g in d.top_members(12)?.iter().filter(|g| *g > base) {
                if !d.member(&step(g))? {
                    return fail(format!("step from {g} leaves the set"));
                }
            }
        }
        (Evidence::Escapes { points }, Property::Yardstick | Property::DerivedYardstick, Outcome::Fails) => {
            if points.is_empty() || points.windows(2).any(|w| w[0] >= w[1]) {
                return fail("escape points are not increasing".into());
            }
            for g in points {
                let next = if prop == Property::Yardstick { g - &chi(g) } else { derived_step(g) };
                if !d.member(g)? || d.member(&next)? {
                    return fail(format!("{g} does not escape"));
                }
            }
        }
        (Evidence::Steps { base, steps }, Property::DerivedYardstick, Outcome::Holds) => {
            if !d.member(base)? {
                return fail(format!("base {base} is not a member"));
            }
            for s in steps {
                if !(s.gamma > *base && s.target > s.gamma && s.reached >= s.target && d.member(&s.target)?) {
                    return fail(format!("step from {} reached {}, below {}", s.gamma, s.reached, s.target));
                }
                if s.target != derived_step(&s.gamma) {
                    return fail(format!("target {} is not γ − ∫s(γ)", s.target));
                }
            }
        }
        _ => return fail(format!("evidence does not fit a {:?} verdict for {prop:?}", v.verdict)),
    }
    Ok(())
}

/// The S-set of an extension scenario as a descriptor.
pub fn s_descriptor(sc: Arc<ExtScenario>) -> SetDescriptor {
    ExtS(sc)
}

/// The value set v(y − K) of the immediate extension built from `sc`, i.e. (∫S)↓.
pub fn value_set(sc: Arc<ExtScenario>) -> SetDescriptor {
    SetDescriptor::down(SetDescriptor::int(ExtS(sc)))
}

/// Descriptors used by the suites: rule-decided sets, the extension value sets, and the shipped
/// not-jammed example.
pub fn shipped() -> Result<Vec<(String, SetDescriptor)>> {
    let mut v = vec![
        ("negative".to_string(), LessThan(GroupElem::zero())),
        ("below-e0".to_string(), LessThan(GroupElem::basis(0))),
        ("psi-down".to_string(), PsiDown),
        ("int-psi-down".to_string(), SetDescriptor::int(PsiDown)),
        ("down-int-psi-down".to_string(), SetDescriptor::down(SetDescriptor::int(PsiDown))),
        ("affine-psi-down".to_string(), SetDescriptor::affine(GroupElem::basis(0), 3, PsiDown)?),
    ];
    for name in extend::SHIPPED {
        v.push((format!("value-set:{name}"), value_set(extend::scenario(name)?)));
    }
    Ok(v)
}

/// The shipped set that is not jammed at Δ₁.
pub fn not_jammed_example() -> Result<SetDescriptor> {
    Ok(value_set(extend::scenario("geometric")?))
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LessThan(b) => write!(f, "(lt {b})"),
            LessEq(b) => write!(f, "(le {b})"),
            PsiDown => write!(f, "psidown"),
            Affine(a, n, d) => write!(f, "(affine {a} {n} {d})"),
            DownClosure(d) => write!(f, "(down {d})"),
            IntImage(d) => write!(f, "(int {d})"),
            ExtS(sc) => write!(f, "(ext {})", sc.name),
        }
    }
}

impl fmt::Debug for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialEq for SetDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}

struct SexprParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> SexprParser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn atom(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == '[').unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a word");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn vector(&mut self) -> Result<GroupElem> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        if !rest.starts_with('[') {
            return self.err("expected `[`");
        }
        let Some(end) = rest.find(']') else { return self.err("unclosed `[`") };
        self.pos += end + 1;
        rest[..=end].parse().map_err(|e| match e {
            Error::Syntax { offset, message } => Error::Syntax { offset: start + offset, message },
            other => other,
        })
    }

    fn desc(&mut self) -> Result<SetDescriptor> {
        self.skip_ws();
        if !self.text[self.pos..].starts_with('(') {
            let at = self.pos;
            return match self.atom()? {
                "psidown" => Ok(PsiDown),
                w => Err(Error::Syntax { offset: at, message: format!("unknown descriptor `{w}`") }),
            };
        }
        self.eat('(')?;
        let at = self.pos;
        let d = match self.atom()? {
            "lt" => LessThan(self.vector()?),
            "le" => LessEq(self.vector()?),
            "affine" => {
                let a = self.vector()?;
                let n_at = self.pos;
                let n: u32 = self.atom()?.parse().map_err(|_| Error::Syntax {
                    offset: n_at,
                    message: "expected a positive integer".into(),
                })?;
                SetDescriptor::affine(a, n, self.desc()?)?
            }
            "down" => SetDescriptor::down(self.desc()?),
            "int" => SetDescriptor::int(self.desc()?),
            "ext" => ExtS(extend::scenario(self.atom()?)?),
            w => return Err(Error::Syntax { offset: at, message: format!("unknown descriptor `{w}`") }),
        };
        self.eat(')')?;
        Ok(d)
    }
}

impl FromStr for SetDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = SexprParser { text: s, pos: 0 };
        let d = p.desc()?;
        p.skip_ws();
        if p.pos != s.len() {
            return p.err("trailing input");
        }
        Ok(d)
    }
}

/// Integer affine factors used by the samplers.
pub fn sample_affine(r: &mut impl Rng, d: SetDescriptor) -> SetDescriptor {
    let alpha = sample::group_elem(r);
    let n = r.gen_range(1..=5u32);
    Affine(alpha, n, Box::new(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ogroup::int;

    fn g(v: &[i64]) -> GroupElem {
        GroupElem::from_ints(v)
    }

    fn d(s: &str) -> SetDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn psi_down_membership() {
        assert!(PsiDown.member(&g(&[1, 1, 0])).unwrap());
        assert!(!PsiDown.member(&g(&[1, 2])).unwrap());
        assert!(LessThan(GroupElem::zero()).member(&-GroupElem::basis(3)).unwrap());
        for k in 0..6 {
            assert!(PsiDown.member(&GroupElem::ones(k)).unwrap());
        }
    }

    #[test]
    fn parse_and_print() {
        for s in ["psidown", "(down (affine [1] 3 psidown))", "(lt [0, -1/2])", "(down (int (ext smallint)))"] {
            assert_eq!(d(s).to_string(), s);
        }
        assert!(matches!("(lt [1,".parse::<SetDescriptor>(), Err(Error::Syntax { .. })));
        assert!(matches!("(foo [1])".parse::<SetDescriptor>(), Err(Error::Syntax { offset: 1, .. })));
        assert!("(affine [1] 0 psidown)".parse::<SetDescriptor>().is_err());
    }

    #[test]
    fn jammed_rules() {
        for s in ["psidown", "(affine [1] 3 psidown)", "(lt [0, 2])", "(down (lt [1]))"] {
            let v = is_jammed(&d(s));
            assert!(v.holds(), "{s}: {v:?}");
            check_certificate(&d(s), Property::Jammed, &v).unwrap();
        }
        let v = is_jammed(&d("(le [1])"));
        assert!(v.fails());
        check_certificate(&d("(le [1])"), Property::Jammed, &v).unwrap();
    }

    #[test]
    fn not_jammed_example() {
        let e = super::not_jammed_example().unwrap();
        let v = is_jammed(&e);
        assert!(v.fails(), "{v:?}");
        assert!(matches!(v.evidence, Evidence::NotJammed { k: 1, .. }));
        check_certificate(&e, Property::Jammed, &v).unwrap();
        let v = is_jammed(&d("(down (int (ext smallint)))"));
        assert!(matches!(v.evidence, Evidence::NotJammed { k: 2, .. }), "{v:?}");
    }

    #[test]
    fn yardstick_examples() {
        let v = has_yardstick(&d("(lt [])"));
        assert!(v.holds());
        let lt = d("(lt [1])");
        let v = has_yardstick(&lt);
        assert!(v.fails());
        let Evidence::Escapes { points } = &v.evidence else { panic!() };
        assert_eq!(points[0], GroupElem::from_pairs([(0, int(1)), (5, rat(-1, 2))]));
        check_certificate(&lt, Property::Yardstick, &v).unwrap();
        let v = has_yardstick(&PsiDown);
        assert!(v.fails(), "{v:?}");
        check_certificate(&PsiDown, Property::Yardstick, &v).unwrap();
        for name in ["smallint", "smallexpint", "bigint"] {
            let s = ExtS(extend::scenario(name).unwrap());
            let dv = has_derived_yardstick(&s).unwrap();
            assert!(dv.holds(), "{name}: {dv:?}");
            check_certificate(&s, Property::DerivedYardstick, &dv).unwrap();
            let i = SetDescriptor::int(s);
            let v = has_yardstick(&i);
            assert!(v.holds(), "{name}: {v:?}");
            check_certificate(&i, Property::Yardstick, &v).unwrap();
        }
        assert!(has_derived_yardstick(&d("(affine [1] 2 psidown)")).is_err());
    }

    #[test]
    fn sups() {
        assert_eq!(sup_in_divhull(&d("(lt [1])")).unwrap(), Some(g(&[1])));
        assert_eq!(sup_in_divhull(&PsiDown).unwrap(), None);
        assert_eq!(sup_in_divhull(&d("(affine [0, 1] 2 (lt []))")).unwrap(), Some(g(&[0, 1])));
        assert!(sup_in_divhull(&d("(int (ext smallint))")).is_err());
    }

    #[test]
    fn simplified_forms_agree() {
        let mut r = sample::rng(7);
        let cases = [
            SetDescriptor::int(PsiDown),
            SetDescriptor::int(LessThan(g(&[1, 0, -1]))),
            SetDescriptor::int(LessEq(g(&[0, 3]))),
        ];
        for c in &cases {
            let s = c.simplify();
            assert_ne!(s.to_string(), c.to_string());
            for _ in 0..300 {
                let x = sample::group_elem(&mut r);
                assert_eq!(c.member(&x).unwrap(), s.member(&x).unwrap(), "{c} at {x}");
            }
        }
    }
}
