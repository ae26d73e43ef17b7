//! The sets S attached to adjoining a small exponential integral, a small integral or a big
//! integral, and the constructive yardstick step that walks up each of them in K_log.
//!
//! | kind        | S                                  | witness   |
//! |-------------|------------------------------------|-----------|
//! | SmallExpInt | v(s − ε′/(1+ε)), ε ≺ 1             | ε         |
//! | SmallInt    | v(s − ε′), ε ≺ 1                   | ε         |
//! | BigInt      | v(s − a′), a ∈ K                   | a         |

use std::fmt;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::Serialize;

use crate::acouple::{in_neg_derived, in_pos_derived, integrate, successor, GammaInf};
use crate::error::{pre, Error, Result};
use crate::expr::parse_frac;
use crate::logts::{Frac, Monomial};
use crate::ogroup::GroupElem;
use crate::report::Report;
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    SmallExpInt,
    SmallInt,
    BigInt,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::SmallExpInt => "smallexpint",
            Kind::SmallInt => "smallint",
            Kind::BigInt => "bigint",
        }
    }

    pub fn is_small(self) -> bool {
        self != Kind::BigInt
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smallexpint" => Ok(Kind::SmallExpInt),
            "smallint" => Ok(Kind::SmallInt),
            "bigint" => Ok(Kind::BigInt),
            _ => Err(Error::Semantic(format!("unknown scenario kind `{s}`"))),
        }
    }
}

/// γ ∉ S whenever the part of γ at indices < `depth` exceeds `prefix`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutCert {
    pub prefix: GroupElem,
    pub depth: usize,
}

impl CutCert {
    pub fn excludes(&self, g: &GroupElem) -> bool {
        let head = GroupElem::from_pairs(g.iter().filter(|(i, _)| *i < self.depth).map(|(i, q)| (i, q.clone())));
        head > self.prefix
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "as_text")]
    pub eps: Frac,
    pub gamma: GroupElem,
}

fn as_text<S: serde::Serializer>(f: &Frac, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

/// Steps explored before a membership query gives up.
pub const CHAIN_BUDGET: usize = 256;
/// Terms kept when compacting a witness.
const COMPACT_TERMS: usize = 512;

pub struct ExtScenario {
    pub name: String,
    pub kind: Kind,
    pub s: Frac,
    /// BigInt: an element with g′ ∼ s.
    pub g: Option<Frac>,
    pub start: Frac,
    pub cut: Option<CutCert>,
    /// SmallInt: δ with s = (1+δ)†; SmallExpInt: b with s = b′. Used only when the identity checks.
    pub hint: Option<Frac>,
    /// Why s is not in ∂𝔬, (K^×)† or ∂K, as the kind requires.
    pub certificate: String,
    chain: Mutex<Vec<Witness>>,
}

impl fmt::Debug for ExtScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtScenario({}, {}, s = {})", self.name, self.kind.name(), self.s)
    }
}

fn small(f: &Frac) -> bool {
    match f.valuation() {
        GammaInf::Infinity => true,
        GammaInf::Finite(v) => v.is_positive(),
    }
}

/// The monomial with valuation `v`.
fn mono(v: &GroupElem) -> Frac {
    Frac::monomial(Monomial::with_valuation(v))
}

impl ExtScenario {
    pub fn new(name: &str, kind: Kind, s: Frac, g: Option<Frac>, start: Frac) -> Result<Self> {
        let sc = Self {
            name: name.to_string(),
            kind,
            s,
            g,
            start,
            cut: None,
            hint: None,
            certificate: String::new(),
            chain: Mutex::new(Vec::new()),
        };
        let vs = sc.s.val()?;
        match kind {
            Kind::SmallExpInt | Kind::SmallInt if !in_pos_derived(&vs) => {
                return pre(format!("v(s) = {vs} is not in (Γ^>)′"));
            }
            Kind::BigInt if !in_neg_derived(&vs) => return pre(format!("v(s) = {vs} is not in (Γ^<)′")),
            Kind::BigInt => {
                let g = sc.g.as_ref().ok_or_else(|| Error::Precondition("bigint needs g with g′ ∼ s".into()))?;
                if !crate::logts::similar(&g.derivative(), &sc.s)? {
                    return pre(format!("g′ = {} is not ∼ s", g.derivative()));
                }
            }
            _ => {}
        }
        Ok(sc)
    }

    fn with_cut(mut self, prefix: GroupElem, depth: usize) -> Self {
        self.cut = Some(CutCert { prefix, depth });
        self
    }

    fn with_hint(mut self, h: Frac) -> Self {
        self.hint = Some(h);
        self
    }

    fn with_certificate(mut self, c: &str) -> Self {
        self.certificate = c.to_string();
        self
    }

    pub fn v_s(&self) -> GroupElem {
        self.s.val().expect("scenario s is nonzero")
    }

    /// The defining expression: s − w′/(1+w), s − w′ or s − w′.
    fn residual(&self, w: &Frac) -> Result<Frac> {
        if self.kind.is_small() && !small(w) {
            return pre(format!("witness {w} is not ≺ 1"));
        }
        Ok(match self.kind {
            Kind::SmallExpInt => &self.s - &(&w.derivative() / &(&Frac::one() + w))?,
            Kind::SmallInt | Kind::BigInt => &self.s - &w.derivative(),
        })
    }

    fn scaled_residual(&self, w: &Frac) -> Result<Frac> {
        match self.kind {
            Kind::SmallExpInt => {
                if !small(w) {
                    return pre(format!("witness {w} is not ≺ 1"));
                }
                Ok(&(&self.s * &(&Frac::one() + w)) - &w.derivative())
            }
            _ => self.residual(w),
        }
    }

    /// v(residual). For SmallExpInt, v(1+w) = 0 lets s(1+w) − w′ stand in for the quotient.
    pub fn s_value(&self, w: &Frac) -> Result<GroupElem> {
        self.scaled_residual(w)?
            .val()
            .map_err(|_| Error::Precondition(format!("s − w′ vanishes at w = {w}: s is integrable by this witness")))
    }

    pub fn initial(&self) -> Result<Witness> {
        Ok(Witness { gamma: self.s_value(&self.start)?, eps: self.start.clone() })
    }

    fn check_witness(&self, w: &Witness) -> Result<()> {
        let g = self.s_value(&w.eps)?;
        if g != w.gamma {
            return Err(Error::Precondition(format!("witness gives {g}, not {}", w.gamma)));
        }
        if self.kind == Kind::BigInt && w.gamma <= self.v_s() {
            return pre(format!("bigint step needs γ > v(s) = {}", self.v_s()));
        }
        Ok(())
    }

    /// Drops the terms of `f` with valuation above ∫β when that leaves s_value unchanged; a tail
    /// h with v(h) > ∫β has v(h′) > β.
    fn compact(&self, f: Frac, beta: &GroupElem) -> Frac {
        if let Some(t) = f.expand_to(&integrate(beta), COMPACT_TERMS) {
            let t = Frac::from(t);
            if self.s_value(&t).ok().as_ref() == Some(beta) {
                return t;
            }
        }
        f
    }

    /// ε + ub (SmallInt), (1+ε)(1+ub) − 1 (SmallExpInt) or a − uδ (BigInt), where v(b) = ∫γ
    /// and u absorbs the residual. All three equal ε + R/b† with R = s − ε′, or s(1+ε) − ε′
    /// for SmallExpInt, which keeps the denominator short.
    fn raw_step(&self, w: &Witness) -> Result<Frac> {
        // v(b) = ∫γ, so v(b′) = γ
        let b = mono(&integrate(&w.gamma));
        let b_dagger = (&b.derivative() / &b)?;
        Ok(&w.eps + &(&self.scaled_residual(&w.eps)? / &b_dagger)?)
    }

    /// One step of the constructive yardstick argument.
    pub fn yardstick_step(&self, w: &Witness) -> Result<Witness> {
        self.check_witness(w)?;
        let gamma = &w.gamma;
        let next = self.raw_step(w)?;
        let beta = self.s_value(&next)?;
        let bound = gamma - &integrate(&successor(gamma));
        if beta <= *gamma || beta < bound {
            return Err(Error::Certificate(format!("step from {gamma} reached {beta}, below {bound}")));
        }
        Ok(Witness { eps: self.compact(next, &beta), gamma: beta })
    }

    /// A strictly larger member from any member; for BigInt this also covers γ ≤ v(s), where
    /// the yardstick bound is not claimed.
    pub fn step_up(&self, w: &Witness) -> Result<Witness> {
        if self.kind != Kind::BigInt || w.gamma > self.v_s() {
            return self.yardstick_step(w);
        }
        let got = self.s_value(&w.eps)?;
        if got != w.gamma {
            return pre(format!("witness gives {got}, not {}", w.gamma));
        }
        let next = self.raw_step(w)?;
        let beta = self.s_value(&next)?;
        if beta <= w.gamma {
            return Err(Error::Certificate(format!("step from {} reached {beta}", w.gamma)));
        }
        Ok(Witness { eps: self.compact(next, &beta), gamma: beta })
    }

    /// The step reaching γ + ∫γ, available when s minus the current correction is explicitly
    /// (1+δ)† (SmallInt) or b′ with b ≺ 1 (SmallExpInt). `None` when no such representation is
    /// at hand.
    pub fn strengthened_step(&self, w: &Witness) -> Result<Option<Witness>> {
        self.check_witness(w)?;
        let Some(h) = &self.hint else { return Ok(None) };
        if self.kind == Kind::BigInt || !small(h) || h.is_zero() {
            return Ok(None);
        }
        let t = self.residual(&w.eps)?;
        let one = Frac::one();
        let next = match self.kind {
            Kind::SmallInt => {
                if t != (&h.derivative() / &(&one + h))? {
                    return Ok(None);
                }
                &w.eps + h
            }
            _ => {
                if t != h.derivative() {
                    return Ok(None);
                }
                &(&(&one + &w.eps) * &(&one + h)) - &one
            }
        };
        let beta = self.s_value(&next)?;
        let target = &w.gamma + &integrate(&w.gamma);
        if beta != target {
            return Err(Error::Certificate(format!("strengthened step reached {beta}, expected {target}")));
        }
        Ok(Some(Witness { eps: next, gamma: beta }))
    }

    /// Witnesses 0..=k of the iterated step chain, cached.
    pub fn chain(&self, k: usize) -> Result<Vec<Witness>> {
        self.with_chain(k, |c| c.to_vec())
    }

    /// γ of the k-th chain witness.
    pub fn chain_gamma(&self, k: usize) -> Result<GroupElem> {
        self.with_chain(k, |c| c[k].gamma.clone())
    }

    fn with_chain<R>(&self, k: usize, f: impl FnOnce(&[Witness]) -> R) -> Result<R> {
        let mut c = self.chain.lock().unwrap_or_else(|e| e.into_inner());
        if c.is_empty() {
            c.push(self.initial()?);
        }
        while c.len() <= k {
            let w = self.step_up(c.last().unwrap())?;
            c.push(w);
        }
        Ok(f(&c[..=k]))
    }

    /// Least chain index whose γ is ≥ g.
    fn chain_index_above(&self, g: &GroupElem) -> Result<usize> {
        for k in 0..=CHAIN_BUDGET {
            if *g <= self.chain_gamma(k)? {
                return Ok(k);
            }
        }
        Err(Error::SearchExhausted(format!("{g} lies above {CHAIN_BUDGET} chain steps of {}", self.name)))
    }

    fn on_side(&self, g: &GroupElem) -> bool {
        match self.kind {
            Kind::BigInt => in_neg_derived(g),
            _ => in_pos_derived(g),
        }
    }

    /// A witness for a member δ below a known member w, by adding f with v(f′) = δ.
    fn witness_below(&self, w: &Witness, delta: &GroupElem) -> Result<Witness> {
        if *delta == w.gamma {
            return Ok(w.clone());
        }
        if *delta > w.gamma {
            return pre(format!("{delta} is not below {}", w.gamma));
        }
        if self.kind.is_small() && !in_pos_derived(delta) {
            return pre(format!("{delta} is not in (Γ^>)′"));
        }
        let f = mono(&integrate(delta));
        let eps = match self.kind {
            Kind::SmallExpInt => &(&f + &w.eps) + &(&f * &w.eps),
            _ => &w.eps + &f,
        };
        let got = self.s_value(&eps)?;
        if got != *delta {
            return Err(Error::Certificate(format!("downward witness gives {got}, not {delta}")));
        }
        Ok(Witness { eps, gamma: got })
    }

    /// Membership with a witness. Errors with `SearchExhausted` when neither the chain nor the
    /// cut certificate decides within the budget.
    pub fn witness_for(&self, g: &GroupElem) -> Result<Option<Witness>> {
        if !self.member(g)? {
            return Ok(None);
        }
        let k = self.chain_index_above(g)?;
        let w = self.with_chain(k, |c| c[k].clone())?;
        self.witness_below(&w, g).map(Some)
    }

    pub fn member(&self, g: &GroupElem) -> Result<bool> {
        if !self.on_side(g) || self.cut.as_ref().is_some_and(|c| c.excludes(g)) {
            return Ok(false);
        }
        self.chain_index_above(g).map(|_| true)
    }
}

pub fn smallint() -> ExtScenario {
    ExtScenario::new("smallint", Kind::SmallInt, parse_frac("x^-2*l1^-1").unwrap(), None, Frac::zero())
        .unwrap()
        .with_cut(GroupElem::from_ints(&[2]), 1)
        .with_certificate(
            "An antiderivative x⁻¹Σcₖℓ₁⁻ᵏ of x⁻²ℓ₁⁻¹ needs cₖ = −(k−1)cₖ₋₁, so |cₖ| = (k−1)!. \
             Coefficients of a rational function in ℓ₁⁻¹ grow at most exponentially, so no ε ∈ K_log \
             cancels the x⁻² level of s − ε′: every member has first coordinate ≤ 2.",
        )
}

pub fn smallexpint() -> ExtScenario {
    ExtScenario::new("smallexpint", Kind::SmallExpInt, parse_frac("x^-2*l1^-1").unwrap(), None, Frac::zero())
        .unwrap()
        .with_cut(GroupElem::from_ints(&[2]), 1)
        .with_certificate(
            "log(1+ε) would have to agree with ∫s = −x⁻¹Σ(k−1)!ℓ₁⁻ᵏ on the x⁻¹ level; the x⁻¹ level of \
             log(1+ε) is that of ε, a rational function of the ℓᵢ, whose coefficients cannot grow \
             factorially. So s ∉ (K^×)† and members have first coordinate ≤ 2.",
        )
}

/// s = −1/(x^{3/2} − x) = Σ_{k≥3} −x^{−k/2}; S is all of (Γ^>)′.
pub fn smallint_geometric() -> ExtScenario {
    ExtScenario::new("geometric", Kind::SmallInt, parse_frac("-1/(x^(3/2)-x)").unwrap(), None, Frac::zero())
        .unwrap()
        .with_certificate(
            "∫s = −2log(1 − x^(−1/2)) = 2Σ x^(−k/2)/k, the logarithm of a non-monomial, which is an \
             infinite series outside K_log; its partial sums ε give v(s − ε′) unbounded in the x-coordinate.",
        )
}

/// s = −x⁻² = (x⁻¹)′, where the strengthened small-exponential step applies at ε = 0.
pub fn smallexpint_exact() -> ExtScenario {
    ExtScenario::new("smallexpint-exact", Kind::SmallExpInt, parse_frac("-x^-2").unwrap(), None, Frac::zero())
        .unwrap()
        .with_hint(parse_frac("x^-1").unwrap())
        .with_certificate("s = f† would force f = c·exp(x⁻¹), which is not in K_log.")
}

/// s = (1 + x⁻¹)†, where the strengthened small-integration step applies at ε = 0.
pub fn smallint_exact() -> ExtScenario {
    ExtScenario::new("smallint-exact", Kind::SmallInt, parse_frac("D(1+x^-1)/(1+x^-1)").unwrap(), None, Frac::zero())
        .unwrap()
        .with_hint(parse_frac("x^-1").unwrap())
        .with_certificate("∫s = log(1 + x⁻¹) = Σ(−1)^(k+1)x⁻ᵏ/k is an infinite series outside K_log.")
}

/// s = ℓ₁⁻¹ with g = xℓ₁⁻¹, g′ = ℓ₁⁻¹ − ℓ₁⁻².
pub fn bigint() -> ExtScenario {
    let g = parse_frac("x*l1^-1").unwrap();
    ExtScenario::new("bigint", Kind::BigInt, parse_frac("l1^-1").unwrap(), Some(g), Frac::zero())
        .unwrap()
        .with_cut(GroupElem::zero(), 1)
        .with_certificate(
            "∫ℓ₁⁻¹ = xΣ(k−1)!ℓ₁⁻ᵏ (the logarithmic integral), with factorially growing coefficients, so \
             no a ∈ K_log cancels the x⁰ level of s − a′: members have first coordinate ≤ 0.",
        )
}

/// s = ℓ₁ = (xℓ₁ − x)′: integrable, kept to exercise the error path.
pub fn bigint_integrable() -> ExtScenario {
    ExtScenario::new("bigint-integrable", Kind::BigInt, parse_frac("l1").unwrap(), Some(parse_frac("x*l1 - x").unwrap()), Frac::zero())
        .unwrap()
        .with_certificate("none: s = (xℓ₁ − x)′ lies in ∂K")
}

pub fn scenario(name: &str) -> Result<Arc<ExtScenario>> {
    Ok(Arc::new(match name {
        "smallint" => smallint(),
        "smallexpint" => smallexpint(),
        "geometric" => smallint_geometric(),
        "smallexpint-exact" => smallexpint_exact(),
        "smallint-exact" => smallint_exact(),
        "bigint" => bigint(),
        "bigint-integrable" => bigint_integrable(),
        _ => return Err(Error::Semantic(format!("unknown scenario `{name}`"))),
    }))
}

pub const SHIPPED: [&str; 6] = ["smallint", "smallexpint", "geometric", "smallexpint-exact", "smallint-exact", "bigint"];

/// A custom scenario as given on the command line.
pub fn custom(kind: Kind, s: &str, g: Option<&str>) -> Result<ExtScenario> {
    let s = parse_frac(s)?;
    let g = g.map(parse_frac).transpose()?;
    let start = match (kind, &g) {
        (Kind::BigInt, Some(g)) => g.clone(),
        _ => Frac::zero(),
    };
    ExtScenario::new("custom", kind, s, g, start)
}

#[derive(Clone, Debug, Serialize)]
pub struct StepChain {
    pub scenario: String,
    pub kind: Kind,
    pub gammas: Vec<GroupElem>,
    pub gains: Vec<GroupElem>,
    pub bounds: Vec<GroupElem>,
}

/// Iterates the yardstick step `iters` times from the scenario's start.
pub fn step_chain(sc: &ExtScenario, iters: usize) -> Result<StepChain> {
    let mut w = sc.initial()?;
    if sc.kind == Kind::BigInt && w.gamma <= sc.v_s() {
        w = sc.step_up(&w)?;
    }
    let mut out = StepChain {
        scenario: sc.name.clone(),
        kind: sc.kind,
        gammas: vec![w.gamma.clone()],
        gains: Vec::new(),
        bounds: Vec::new(),
    };
    for _ in 0..iters {
        let next = sc.yardstick_step(&w)?;
        out.gains.push(&next.gamma - &w.gamma);
        out.bounds.push(-integrate(&successor(&w.gamma)));
        out.gammas.push(next.gamma.clone());
        w = next;
    }
    Ok(out)
}

/// Downward closure inside the ambient derived set and absence of a maximum, both by explicit
/// witnesses, on `probes` sampled members and targets.
pub fn verify_downward_no_max(sc: &ExtScenario, probes: usize, seed: u64) -> Result<Report> {
    if probes == 0 {
        return pre("probes must be at least 1");
    }
    let chain = sc.chain(8)?;
    let mut rep = Report::new(format!("downward-no-max:{}", sc.name));
    for i in 0..probes {
        let mut r = sample::case_rng(seed, i);
        let w = &chain[r.gen_range(0..chain.len())];
        let up = sc.step_up(w);
        rep.check(
            matches!(&up, Ok(u) if u.gamma > w.gamma && sc.s_value(&u.eps).ok().as_ref() == Some(&u.gamma)),
            || format!("gamma={}", w.gamma),
            "a strictly larger member",
            || format!("{up:?}"),
        );
        let target = loop {
            let d = &w.gamma - &sample::positive_elem(&mut r);
            if !sc.kind.is_small() || in_pos_derived(&d) {
                break d;
            }
        };
        let down = sc.witness_below(w, &target);
        rep.check(
            matches!(&down, Ok(d) if d.gamma == target),
            || format!("gamma={} target={target}", w.gamma),
            "a witness realizing the target",
            || format!("{down:?}"),
        );
    }
    Ok(rep)
}

/// On sampled ε ≺ 1, v((g(1+ε))′ − s) > v(s); each chain member above v(s) has a witness a
/// with a/g − 1 ≺ 1.
pub fn verify_bigint_form(sc: &ExtScenario, samples: usize, seed: u64) -> Result<Report> {
    let Some(g) = sc.g.clone().filter(|_| sc.kind == Kind::BigInt) else {
        return pre("needs a bigint scenario");
    };
    let vs = sc.v_s();
    let mut rep = Report::new(format!("bigint-form:{}", sc.name));
    for i in 0..samples {
        let mut r = sample::case_rng(seed, i);
        let e = loop {
            let f = sample::frac(&mut r);
            if small(&f) {
                break f;
            }
            if let Ok(f) = f.inv() {
                if small(&f) {
                    break f;
                }
            }
        };
        let a = &g * &(&Frac::one() + &e);
        let got = sc.s_value(&a);
        rep.check(matches!(&got, Ok(v) if *v > vs), || format!("eps={e}"), "v((g(1+eps))' - s) > v(s)", || format!("{got:?}"));
    }
    for w in sc.chain(10)?.iter().filter(|w| w.gamma > vs) {
        let e = (&w.eps / &g).map(|q| &q - &Frac::one());
        rep.check(matches!(&e, Ok(e) if small(e)), || format!("a={}", w.eps), "a = g(1+eps) with eps < 1", || format!("{e:?}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[i64]) -> GroupElem {
        GroupElem::from_ints(v)
    }

    #[test]
    fn s_values() {
        assert_eq!(smallint().s_value(&Frac::zero()).unwrap(), g(&[2, 1]));
        assert_eq!(smallexpint().s_value(&Frac::zero()).unwrap(), g(&[2, 1]));
        let b = bigint_integrable();
        assert_eq!(b.s_value(&Frac::zero()).unwrap(), g(&[0, -1]));
        assert!(integrate(&g(&[0, -1])).is_negative());
        assert_eq!(b.g.as_ref().unwrap().derivative(), parse_frac("l1").unwrap());
        assert!(b.s_value(b.g.as_ref().unwrap()).is_err());
        assert!(smallint().s_value(&parse_frac("x").unwrap()).is_err());
    }

    #[test]
    fn worked_steps() {
        for sc in [smallint(), smallexpint()] {
            let w = sc.initial().unwrap();
            let n = sc.yardstick_step(&w).unwrap();
            assert!(n.gamma >= g(&[2, 2]), "{} reached {}", sc.name, n.gamma);
        }
        let c = step_chain(&smallint(), 5).unwrap();
        assert!(c.gammas.windows(2).all(|p| p[0] < p[1]));
        assert!(c.gains.iter().zip(&c.bounds).all(|(a, b)| a >= b));
    }

    #[test]
    fn strengthened_steps() {
        let sc = smallexpint_exact();
        let w = sc.strengthened_step(&sc.initial().unwrap()).unwrap().unwrap();
        assert_eq!(w.gamma, g(&[3]));
        let sc = smallint_exact();
        let w0 = sc.initial().unwrap();
        assert_eq!(w0.gamma, g(&[2]));
        let w = sc.strengthened_step(&w0).unwrap().unwrap();
        assert_eq!(w.gamma, g(&[3]));
        assert!(sc.strengthened_step(&w).unwrap().is_none());
        assert!(smallint().strengthened_step(&smallint().initial().unwrap()).unwrap().is_none());
    }

    #[test]
    fn bigint_steps() {
        let sc = bigint();
        assert_eq!(sc.v_s(), g(&[0, 1]));
        let c = step_chain(&sc, 4).unwrap();
        assert!(c.gammas[0] > sc.v_s());
        assert!(c.gammas.windows(2).all(|p| p[0] < p[1]));
        assert!(sc.yardstick_step(&sc.initial().unwrap()).is_err());
        let b = bigint_integrable();
        let w = Witness { eps: b.g.clone().unwrap(), gamma: g(&[5]) };
        assert!(b.yardstick_step(&w).is_err());
    }

    #[test]
    fn membership() {
        let sc = smallint();
        let w = sc.witness_for(&g(&[2, 1])).unwrap().unwrap();
        assert!(w.eps.is_zero());
        assert!(sc.member(&g(&[2, 7])).unwrap());
        assert!(!sc.member(&g(&[3])).unwrap());
        // e₀ + e₁ lies in Ψ↓, outside (Γ^>)′
        assert!(!sc.member(&g(&[1, 1])).unwrap());
        let w = sc.witness_for(&g(&[1, 2])).unwrap().unwrap();
        assert_eq!(w.eps, parse_frac("l1^-1").unwrap());
        assert!(bigint().member(&g(&[0, 9])).unwrap());
        assert!(!bigint().member(&g(&[1, -3])).unwrap());
        assert!(smallint_geometric().member(&g(&[9, 4])).unwrap());
    }

    #[test]
    fn downward_and_forms() {
        for name in ["smallint", "smallexpint", "bigint", "geometric"] {
            let sc = scenario(name).unwrap();
            let rep = verify_downward_no_max(&sc, 20, 3).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures);
        }
        let rep = verify_bigint_form(&bigint(), 30, 4).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }
}
