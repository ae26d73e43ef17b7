//! K_log: fractions of finite sums of logarithmic monomials ∏ℓᵢ^{rᵢ} over ℚ, with the
//! derivation determined by ℓᵢ† = (ℓ₀⋯ℓᵢ)⁻¹ and valuation v(∏ℓᵢ^{rᵢ}) = −Σ rᵢeᵢ.

mod frac;
mod series;

use std::cmp::Ordering;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

pub use frac::Frac;
pub use series::{Monomial, Series};

use crate::acouple::{integrate, psi, GammaInf};
use crate::error::{pre, Error, Result};
use crate::ogroup::{GroupElem, Rat};
use crate::report::{Failure, Report};
use crate::sample;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    StrictlyDominated,
    Asymptotic,
    StrictlyDominates,
}

pub fn derivative(f: &Frac) -> Frac {
    f.derivative()
}

pub fn valuation(f: &Frac) -> GammaInf {
    f.valuation()
}

/// Compares f with g: ≺ when v(f) > v(g).
pub fn dominance(f: &Frac, g: &Frac) -> Dominance {
    match f.valuation().cmp(&g.valuation()) {
        Ordering::Greater => Dominance::StrictlyDominated,
        Ordering::Equal => Dominance::Asymptotic,
        Ordering::Less => Dominance::StrictlyDominates,
    }
}

pub fn similar(f: &Frac, g: &Frac) -> Result<bool> {
    if f.is_zero() || g.is_zero() {
        return pre("similar() needs nonzero operands");
    }
    Ok((f - g).valuation() > f.valuation())
}

pub fn sign(f: &Frac) -> Ordering {
    f.signum()
}

pub fn leading_coeff(f: &Frac) -> Rat {
    f.leading_coeff()
}

pub fn logderiv(f: &Frac) -> Result<Frac> {
    if f.is_zero() {
        return pre("logderiv(0)");
    }
    &f.derivative() / f
}

pub fn is_constant(f: &Frac) -> bool {
    f.derivative().is_zero()
}

pub fn residue(f: &Frac) -> Result<Rat> {
    match f.valuation() {
        GammaInf::Infinity => Ok(Rat::zero()),
        GammaInf::Finite(v) if v.is_zero() => Ok(f.leading_coeff()),
        GammaInf::Finite(v) if v.is_positive() => Ok(Rat::zero()),
        GammaInf::Finite(_) => pre("residue of an element ≻ 1"),
    }
}

/// Membership in I(K) = {y : y ≼ g′ for some g ∈ O}.
pub fn is_in_i(f: &Frac) -> bool {
    match f.valuation() {
        GammaInf::Infinity => true,
        GammaInf::Finite(v) => integrate(&v).is_positive(),
    }
}

fn is_bounded(f: &Frac) -> bool {
    match f.valuation() {
        GammaInf::Infinity => true,
        GammaInf::Finite(v) => !v.is_negative(),
    }
}

/// Turns a nonzero sample into one with positive valuation (≺ 1), if possible.
fn make_small(f: &Frac) -> Option<Frac> {
    let v = f.val().ok()?;
    match v.signum() {
        Ordering::Greater => Some(f.clone()),
        Ordering::Less => f.inv().ok(),
        Ordering::Equal => {
            let e = f - &Frac::constant(f.leading_coeff());
            (!e.is_zero()).then_some(e)
        }
    }
}

fn make_large(f: &Frac) -> Option<Frac> {
    make_small(f).and_then(|e| e.inv().ok())
}

fn abs(f: &Frac) -> Frac {
    if f.signum() == Ordering::Less {
        -f
    } else {
        f.clone()
    }
}

fn field_case(case: usize, seed: u64) -> Vec<Failure> {
    let mut r = sample::case_rng(seed, case);
    let (f, g, h) = (sample::frac(&mut r), sample::frac(&mut r), sample::frac(&mut r));
    let mut out = Vec::new();
    let mut check = |ok: bool, what: &str, got: String| {
        if !ok {
            out.push(Failure::new(case, format!("f={f} g={g} h={h}"), what, got));
        }
    };
    let (df, dg) = (f.derivative(), g.derivative());

    check((&f + &g).derivative() == &df + &dg, "(f+g)' = f'+g'", String::new());
    check((&f * &g).derivative() == &(&df * &g) + &(&f * &dg), "(fg)' = f'g+fg'", String::new());
    check(&(&f + &g) * &h == &(&f * &h) + &(&g * &h), "(f+g)h = fh+gh", String::new());
    check(&(&f * &g) * &h == &f * &(&g * &h), "(fg)h = f(gh)", String::new());
    if !f.is_zero() {
        check(&f * &f.inv().unwrap() == Frac::one(), "f f^-1 = 1", String::new());
    }

    let (vf, vg) = (f.valuation(), g.valuation());
    let vfg = (&f * &g).valuation();
    let sum = match (&vf, &vg) {
        (GammaInf::Finite(a), GammaInf::Finite(b)) => GammaInf::Finite(a + b),
        _ => GammaInf::Infinity,
    };
    check(vfg == sum, "v(fg) = v(f)+v(g)", format!("{vfg} vs {sum}"));
    let vs = (&f + &g).valuation();
    let m = vf.clone().min(vg.clone());
    check(vs >= m, "v(f+g) >= min", format!("{vs} vs {m}"));
    if vf != vg {
        check(vs == m, "v(f+g) = min when v(f) != v(g)", format!("{vs} vs {m}"));
    }

    if let GammaInf::Finite(v) = &vf {
        if !v.is_zero() {
            let lhs = psi(v);
            let rhs = logderiv(&f).unwrap().valuation();
            check(lhs == rhs, "psi(v f) = v(f†)", format!("{lhs} vs {rhs}"));
        } else {
            let c = residue(&f).unwrap();
            check(similar(&f, &Frac::constant(c.clone())).unwrap(), "f ~ res(f)", c.to_string());
        }
    }

    if let (Some(a), Some(b)) = (make_small(&f), make_small(&g)) {
        let lhs = dominance(&a, &b) == Dominance::StrictlyDominated;
        let rhs = dominance(&a.derivative(), &b.derivative()) == Dominance::StrictlyDominated;
        check(lhs == rhs, "(A) a < b iff a' < b'", format!("a={a} b={b}"));
        check(is_in_i(&a.derivative()), "a' in I(K) for a small", format!("a={a}"));
    }
    if let Some(b) = make_small(&g) {
        let a = if is_bounded(&f) { f.clone() } else { f.inv().unwrap() };
        let bd = logderiv(&b).unwrap();
        check(
            dominance(&a.derivative(), &bd) == Dominance::StrictlyDominated,
            "(PDV) a' < b†",
            format!("a={a} b={b}"),
        );
    }
    if !f.is_zero() && !g.is_zero() {
        let p = abs(&f);
        let q = {
            let q = abs(&g);
            if is_bounded(&q) {
                q
            } else {
                q.inv().unwrap()
            }
        };
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        if is_bounded(&hi) && lo.signum() == Ordering::Greater && lo < hi {
            check(is_bounded(&lo), "(PH1) 0 < a < b in O implies a in O", format!("a={lo} b={hi}"));
        }
    }
    if let Some(big) = make_large(&f) {
        let big = abs(&big);
        check(big.derivative().signum() == Ordering::Greater, "(PH2) f > O implies f' > 0", format!("f={big}"));
    }
    let cst = f.as_constant().is_some();
    check(is_constant(&f) == cst, "f' = 0 iff f in Q", format!("f={f}"));
    let shifted = &f + &Frac::constant(Rat::from_integer(7.into()));
    check(shifted.derivative() == df, "(f+7)' = f'", String::new());
    out
}

/// Field, derivation, valuation and H-field axioms on seeded random samples.
pub fn check_axioms(sample_size: usize, seed: u64) -> Result<Report> {
    if sample_size == 0 {
        return pre("sample_size must be at least 1");
    }
    let per_case: Vec<Vec<Failure>> = (0..sample_size).into_par_iter().map(|i| field_case(i, seed)).collect();
    Ok(Report::from_cases("field-axioms", per_case))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeCheck {
    pub c0: Rat,
    pub c1: Rat,
    pub y0_large: bool,
    pub y1_large: bool,
}

impl OdeCheck {
    pub fn dominance_agrees(&self) -> bool {
        self.y0_large == self.y1_large
    }
}

/// For solutions y0, y1 of y″ = ell·y′, finds constants with y1 = c₀y0 + c₁.
pub fn ode_second_order_check(y0: &Frac, y1: &Frac, ell: &Frac) -> Result<OdeCheck> {
    for (name, y) in [("y0", y0), ("y1", y1)] {
        if is_constant(y) {
            return pre(format!("{name} is constant"));
        }
        let d = y.derivative();
        if d.derivative() != ell * &d {
            return pre(format!("{name} does not solve y'' = ell y'"));
        }
    }
    let q = (&y1.derivative() / &y0.derivative())?;
    let c0 = q.as_constant().ok_or_else(|| Error::Certificate(format!("y1'/y0' = {q} is not constant")))?;
    if c0.is_zero() {
        return Err(Error::Certificate("c0 = 0".into()));
    }
    let rest = y1 - &y0.scale(&c0);
    let c1 = rest.as_constant().ok_or_else(|| Error::Certificate(format!("y1 - c0 y0 = {rest} is not constant")))?;
    let large = |y: &Frac| matches!(y.valuation(), GammaInf::Finite(v) if v.is_negative());
    Ok(OdeCheck { c0, c1, y0_large: large(y0), y1_large: large(y1) })
}

/// v(f) as a finite group element; `f` must be nonzero.
pub fn val(f: &Frac) -> Result<GroupElem> {
    f.val()
}
