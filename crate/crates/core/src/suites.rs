//! The property suites, each returning a `Report` with zero failures on success.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::acouple::{
    chi, classify_couple, closure_count, der, in_neg_derived, in_pos_derived, integrate, psi, successor,
    verify_classification, verify_couple_axioms_in, CoupleDescriptor, CountResult, TrichotomyResult, YesNoUnknown,
};
use crate::error::{Error, Result};
use crate::expr::parse_frac;
use crate::extend::{self, Kind};
use crate::logts::{check_axioms, ode_second_order_check, Frac};
use crate::ogroup::{int, rat, ExtElem, GroupElem, Rat};
use crate::pcseq::{self, PCSeq, Verdict};
use crate::report::{Failure, Report};
use crate::sample;
use crate::setprops::{self, Evidence, Outcome, Property, SetDescriptor};

pub const SUITES: [&str; 10] =
    ["couple-axioms", "identities", "formulas", "jammed", "yardstick", "field", "lambda", "kaplansky", "extend", "classify"];

/// Default sample size of each suite.
pub fn default_cases(suite: &str) -> Option<usize> {
    Some(match suite {
        "couple-axioms" | "identities" => 10_000,
        "field" | "lambda" | "yardstick" => 1_000,
        "jammed" => 50,
        "extend" => 100,
        "formulas" | "kaplansky" | "classify" => 0,
        _ => return None,
    })
}

/// Runs a suite by name; `cases` overrides the default sample size where the suite has one.
pub fn run(suite: &str, cases: Option<usize>, seed: u64) -> Result<Report> {
    let n = cases.or_else(|| default_cases(suite)).ok_or_else(|| Error::Semantic(format!("unknown suite `{suite}`")))?;
    match suite {
        "couple-axioms" => couple_axioms(n, seed),
        "identities" => identities(n, seed),
        "formulas" => Ok(formulas()),
        "jammed" => jammed(n, seed),
        "yardstick" => yardstick(n, seed),
        "field" => field(n, seed),
        "lambda" => lambda(LAMBDA_LEN, n, seed),
        "kaplansky" => kaplansky(KAPLANSKY_LEN),
        "extend" => extend_steps(n),
        "classify" => classify(),
        _ => Err(Error::Semantic(format!("unknown suite `{suite}`"))),
    }
}

pub fn couple_axioms(cases: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new("couple-axioms");
    for c in [CoupleDescriptor::LogFull, CoupleDescriptor::LogWithGapDelta] {
        rep.absorb(verify_couple_axioms_in(&c, cases, seed)?);
    }
    Ok(rep)
}

fn nonzero(r: &mut impl Rng) -> GroupElem {
    loop {
        let g = sample::group_elem(r);
        if !g.is_zero() {
            return g;
        }
    }
}

fn s(a: &GroupElem) -> GroupElem {
    successor(a)
}

/// ψ on a nonzero element.
fn psi1(a: &GroupElem) -> GroupElem {
    psi(a).finite().cloned().expect("nonzero argument")
}

fn identity_case(case: usize, seed: u64) -> Vec<Failure> {
    let mut r = sample::case_rng(seed, case);
    let (a, b, g) = (sample::group_elem(&mut r), sample::group_elem(&mut r), nonzero(&mut r));
    let mut out = Vec::new();
    let mut check = |ok: bool, what: &str, got: String| {
        if !ok {
            out.push(Failure::new(case, format!("a={a} b={b} g={g}"), what, got));
        }
    };

    check(integrate(&a) == &a - &s(&a), "∫a = a − s(a)", integrate(&a).to_string());
    if s(&a) < s(&b) {
        let d = &b - &a;
        check(psi1(&d) == s(&a), "s(a) < s(b) ⇒ ψ(b − a) = s(a)", psi1(&d).to_string());
    }
    for beta in [b.clone(), s(&a)] {
        let d = &a - &beta;
        let lhs = !d.is_zero() && psi1(&d) == beta;
        check(lhs == (beta == s(&a)), "β = ψ(a − β) iff β = s(a)", format!("β={beta}"));
    }
    check(s(&a) < s(&s(&a)), "s(a) < s²(a)", s(&s(&a)).to_string());
    check(chi(&g).arch_cmp(&g).is_lt(), "[χ(γ)] < [γ]", chi(&g).to_string());
    if a != b {
        let d = &chi(&a) - &chi(&b);
        check(d.arch_cmp(&(&a - &b)).is_lt(), "[χ(a) − χ(b)] < [a − b]", d.to_string());
    }
    let (lo, hi) = if a < b { (&a, &b) } else { (&b, &a) };
    if lo < hi {
        let (x, y) = (lo - &chi(lo), hi - &chi(hi));
        check(x < y, "a < b ⇒ a − χ(a) < b − χ(b)", format!("{x} vs {y}"));
    }

    // overspill from (Γ^<)′
    let neg = der(&-g.abs()).unwrap();
    check(in_neg_derived(&neg), "(−|γ|)′ ∈ (Γ^<)′", neg.to_string());
    for n in 1..=3 {
        let t = &neg + &(&s(&neg) - &neg).scale_int(n + 1);
        check(in_pos_derived(&t), "α + (n+1)(s(α) − α) ∈ (Γ^>)′", format!("n={n}: {t}"));
    }

    // ∫(γ′ − ∫s(γ′)) = γ + (s(γ†) − γ†) = γ − χ(γ)
    let gd = der(&g).unwrap();
    let dagger = psi1(&g);
    let lhs = integrate(&(&gd - &integrate(&s(&gd))));
    let mid = &g + &(&s(&dagger) - &dagger);
    let rhs = &g - &chi(&g);
    check(lhs == mid && mid == rhs, "∫(γ′ − ∫sγ′) = γ + (sγ† − γ†) = γ − χ(γ)", format!("{lhs}, {mid}, {rhs}"));

    // on (Γ^>)′: ∫γ > −∫sγ = −χ∫γ > 0, and γ ↦ −∫sγ is increasing
    let p0 = der(&g.abs()).unwrap();
    let p1 = der(&b.abs().max(GroupElem::basis(MAX_INDEX_PROBE))).unwrap();
    for p in [&p0, &p1] {
        let ip = integrate(p);
        let y = -integrate(&s(p));
        check(ip > y && y == -chi(&ip) && y.is_positive(), "∫γ > −∫sγ = −χ∫γ > 0", format!("γ={p}: {ip}, {y}"));
    }
    let (q0, q1) = if p0 <= p1 { (&p0, &p1) } else { (&p1, &p0) };
    let (y0, y1) = (-integrate(&s(q0)), -integrate(&s(q1)));
    check(y0 <= y1, "γ₀ ≤ γ₁ ⇒ −∫sγ₀ ≤ −∫sγ₁", format!("{y0} vs {y1}"));
    out
}

const MAX_INDEX_PROBE: usize = 14;

/// Identities for ∫, s and χ, overspill, the yardstick calculation and its monotone bound.
pub fn identities(cases: usize, seed: u64) -> Result<Report> {
    let per_case: Vec<Vec<Failure>> = (0..cases).into_par_iter().map(|i| identity_case(i, seed)).collect();
    Ok(Report::from_cases("identities", per_case))
}

/// The grid: every vector with support ≤ 3 inside indices 0..GRID_LEN, coefficients from
/// {−2, −1, −1/2, 1/2, 1, 2}.
pub const GRID_LEN: usize = 5;

pub fn grid_coeffs() -> Vec<Rat> {
    vec![int(-2), int(-1), rat(-1, 2), rat(1, 2), int(1), int(2)]
}

pub fn formula_grid() -> Vec<Vec<Rat>> {
    let cs = grid_coeffs();
    let mut out = vec![vec![Rat::zero(); GRID_LEN]];
    let mut frontier = out.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for v in &frontier {
            let last = (0..GRID_LEN).rev().find(|&i| !v[i].is_zero()).map_or(0, |i| i + 1);
            for i in last..GRID_LEN {
                for c in &cs {
                    let mut w = v.clone();
                    w[i] = c.clone();
                    next.push(w);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn padded(v: &[Rat]) -> Vec<Rat> {
    let mut w = v.to_vec();
    w.resize(v.len() + 2, Rat::zero());
    w
}

/// The displayed integral formula on a dense vector.
fn dense_integral(v: &[Rat]) -> Vec<Rat> {
    let mut w = padded(v);
    let n = w.iter().position(|q| !q.is_one()).unwrap();
    for q in w.iter_mut().take(n) {
        *q = Rat::zero();
    }
    w[n] -= Rat::one();
    w
}

fn dense_successor(v: &[Rat]) -> Vec<Rat> {
    let w = padded(v);
    let n = w.iter().position(|q| !q.is_one()).unwrap();
    (0..w.len()).map(|i| if i <= n { Rat::one() } else { Rat::zero() }).collect()
}

fn dense_chi(v: &[Rat]) -> Vec<Rat> {
    let mut w = vec![Rat::zero(); v.len() + 2];
    if let Some(n) = v.iter().position(|q| !q.is_zero()) {
        w[n + 1] = -Rat::one();
    }
    w
}

/// integrate, successor and chi against the displayed vector formulas on the full grid.
pub fn formulas() -> Report {
    let mut rep = Report::new("formulas");
    for v in formula_grid() {
        let a = GroupElem::from_dense(&v);
        let show = || format!("{a}");
        let i = integrate(&a);
        rep.check(i == GroupElem::from_dense(&dense_integral(&v)), show, "integral formula", || i.to_string());
        let sa = successor(&a);
        rep.check(sa == GroupElem::from_dense(&dense_successor(&v)), show, "successor formula", || sa.to_string());
        let c = chi(&a);
        rep.check(c == GroupElem::from_dense(&dense_chi(&v)), show, "contraction formula", || c.to_string());
        rep.check(!i.is_zero() && der(&i).ok() == Some(a.clone()), show, "(∫a)′ = a", || i.to_string());
        rep.check(psi(&i).finite() == Some(&sa), show, "s(a) = ψ(∫a)", || sa.to_string());
        let expect_chi = if a.is_zero() { GroupElem::zero() } else { integrate(&psi1(&a)) };
        rep.check(c == expect_chi, show, "χ(a) = ∫ψ(a)", || c.to_string());
    }
    rep
}

fn same_outcome(a: &setprops::PropertyVerdict, b: &setprops::PropertyVerdict) -> bool {
    let k = |v: &setprops::PropertyVerdict| match v.evidence {
        Evidence::NotJammed { k, .. } => Some(k),
        _ => None,
    };
    a.verdict == b.verdict && k(a) == k(b)
}

/// Rule verdicts, invariance under affine maps and downward closure, and the not-jammed example.
pub fn jammed(transforms: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new("jammed");
    let verdict_ok = |rep: &mut Report, d: &SetDescriptor, want: Outcome| {
        let v = setprops::is_jammed(d);
        let cert = setprops::check_certificate(d, Property::Jammed, &v);
        rep.check(v.verdict == want && cert.is_ok(), || d.to_string(), &format!("{want:?}"), || format!("{:?} {cert:?}", v.verdict));
        v
    };
    verdict_ok(&mut rep, &SetDescriptor::PsiDown, Outcome::Holds);
    let mut r = sample::rng(seed);
    let betas: Vec<GroupElem> = (0..20).map(|_| sample::group_elem(&mut r)).collect();
    for b in &betas {
        verdict_ok(&mut rep, &SetDescriptor::LessThan(b.clone()), Outcome::Holds);
    }
    let example = setprops::not_jammed_example()?;
    let v = verdict_ok(&mut rep, &example, Outcome::Fails);
    rep.check(matches!(v.evidence, Evidence::NotJammed { k: 1, .. }), || example.to_string(), "witness at Δ_1", || format!("{:?}", v.evidence));

    let bases = [SetDescriptor::PsiDown,
        SetDescriptor::LessThan(betas[0].clone()),
        SetDescriptor::LessEq(betas[1].clone()),
        example,
        setprops::value_set(extend::scenario("smallint")?)];
    let base_verdicts: Vec<_> = bases.iter().map(setprops::is_jammed).collect();
    for i in 0..transforms {
        let mut r = sample::case_rng(seed, i);
        let j = i % bases.len();
        let d = &bases[j];
        let alpha = sample::group_elem(&mut r);
        let n = r.gen_range(1..=5u32);
        for t in [SetDescriptor::affine(alpha, n, d.clone())?, SetDescriptor::down(d.clone())] {
            let v = setprops::is_jammed(&t);
            let cert = setprops::check_certificate(&t, Property::Jammed, &v);
            rep.check(
                same_outcome(&v, &base_verdicts[j]) && cert.is_ok(),
                || t.to_string(),
                &format!("{:?} as for {d}", base_verdicts[j].verdict),
                || format!("{:?} {cert:?}", v.verdict),
            );
        }
    }
    Ok(rep)
}

/// Jammed/yardstick exclusion on the shipped descriptors, plus the iterated yardstick step.
pub fn yardstick(probes: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new("yardstick");
    let mut fails = 0;
    for (name, d) in setprops::shipped()? {
        let y = setprops::has_yardstick(&d);
        let j = setprops::is_jammed(&d);
        for (prop, v) in [(Property::Yardstick, &y), (Property::Jammed, &j)] {
            let c = setprops::check_certificate(&d, prop, v);
            rep.check(c.is_ok(), || format!("{name} = {d}"), &format!("{prop:?} certificate"), || format!("{c:?}"));
        }
        if !y.holds() {
            continue;
        }
        let mut differs = None;
        for i in 0..probes {
            let mut r = sample::case_rng(seed, i);
            let p = sample::group_elem(&mut r);
            let m = d.member(&p);
            let Ok(m) = m else {
                rep.check(false, || format!("{name} at {p}"), "decided membership", || format!("{m:?}"));
                continue;
            };
            if m != p.is_negative() {
                differs = Some(p.clone());
            }
            if m && j.holds() {
                rep.check(m == p.is_negative(), || format!("{name} at {p}"), "jammed with yardstick ⇒ Γ^<", || m.to_string());
            }
            if m {
                let up = &p - &chi(&p);
                let inside = d.member(&up);
                rep.check(matches!(inside, Ok(true)), || format!("{name} at {p}"), "γ − χ(γ) ∈ S", || format!("{inside:?}"));
            }
        }
        if j.holds() {
            rep.check(differs.is_none(), || name.clone(), "agrees with Γ^< on all probes", || format!("{differs:?}"));
        }
        if differs.is_some() {
            rep.check(j.verdict != Outcome::Holds, || name.clone(), "not jammed", || format!("{:?}", j.verdict));
            fails += usize::from(j.fails());
        }
    }
    rep.check(fails >= 1, || "shipped descriptors".into(), "at least one Fails", || fails.to_string());
    Ok(rep)
}

/// (y0, y1, ℓ, c₀, c₁) with y1 = c₀y0 + c₁ and y″ = ℓy′.
pub fn ode_instances() -> Vec<(Frac, Frac, Frac, Rat, Rat)> {
    let p = |t: &str| parse_frac(t).expect("shipped expression");
    vec![
        (p("l1"), p("3*l1 + 5"), p("-x^-1"), int(3), int(5)),
        (p("x"), p("-2*x + 1/2"), Frac::zero(), int(-2), rat(1, 2)),
        (p("x^2"), p("3/2*x^2 - 4"), p("x^-1"), rat(3, 2), int(-4)),
    ]
}

pub fn field(cases: usize, seed: u64) -> Result<Report> {
    let mut rep = check_axioms(cases, seed)?;
    rep.suite = "field".into();
    for (y0, y1, ell, c0, c1) in ode_instances() {
        let r = ode_second_order_check(&y0, &y1, &ell);
        let ok = matches!(&r, Ok(o) if o.c0 == c0 && o.c1 == c1 && o.dominance_agrees());
        rep.check(ok, || format!("y0={y0} y1={y1} ell={ell}"), &format!("c0={c0} c1={c1}"), || format!("{r:?}"));
    }
    Ok(rep)
}

pub const LAMBDA_LEN: usize = 12;

/// The λ-sequence: pc verdict, widths, equivalence with a perturbation, and the corpus.
pub fn lambda(len: usize, corpus: usize, seed: u64) -> Result<Report> {
    let mut rep = Report::new("lambda");
    let l = PCSeq::lambda();
    let pc = pcseq::is_pc_prefix(&l, len)?;
    rep.check(pc == Verdict::Yes { rho0: 0, len }, || format!("lambda len={len}"), "Yes(0)", || format!("{pc:?}"));
    let w = pcseq::width_prefix(&l, len)?;
    let want: Vec<GroupElem> = (0..len - 1).map(|n| GroupElem::ones(n + 2)).collect();
    rep.check(w.rho0 == 0 && w.sigmas == want, || "widths".into(), "σₙ = e₀ + … + e_{n+1}", || format!("{:?}", w.sigmas));
    let eq = pcseq::equivalent_prefix(&l, &PCSeq::lambda_perturbed(), len)?;
    rep.check(eq.is_yes(), || "lambda vs perturbed".into(), "Yes", || format!("{eq:?}"));
    let logseq = pcseq::check_log_sequence(len, None);
    rep.check(logseq.is_ok(), || "ℓ₀..ℓₙ".into(), "logarithmic sequence", || format!("{logseq:?}"));
    let items = pcseq::lambda_corpus(corpus, seed);
    let per: Vec<Vec<Failure>> = items
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut out = Vec::new();
            let pl = pcseq::pseudolimit_check(&l, a, len);
            if pl.is_yes() {
                out.push(Failure::new(i, a.to_string(), "no pseudolimit", format!("{pl:?}")));
            }
            let wit = pcseq::lambda_free_witness(a, len);
            if wit.is_none_or(|n| n > len) {
                out.push(Failure::new(i, a.to_string(), "witness index ≤ len", format!("{wit:?}")));
            }
            out
        })
        .collect();
    rep.absorb(Report::from_cases("lambda-corpus", per));
    Ok(rep)
}

pub const KAPLANSKY_LEN: usize = 10;

/// Fits and verifies the affine law for every shipped R over every shipped pair.
pub fn kaplansky(len: usize) -> Result<Report> {
    let pairs = pcseq::kaplansky_pairs();
    let fns = pcseq::kaplansky_functions();
    let jobs: Vec<(usize, usize)> = (0..pairs.len()).flat_map(|p| (0..fns.len()).map(move |f| (p, f))).collect();
    let per: Vec<Vec<Failure>> = jobs
        .par_iter()
        .enumerate()
        .map(|(case, &(p, f))| {
            let (s, a) = &pairs[p];
            let fit = pcseq::kaplansky_fit(&fns[f], s, a, len);
            match &fit {
                Ok(k) if k.verified && k.i >= 1 => Vec::new(),
                _ => vec![Failure::new(case, format!("R={} a={a}", fns[f]), "verified law", format!("{fit:?}"))],
            }
        })
        .collect();
    Ok(Report::from_cases("kaplansky", per))
}

pub const STEP_KINDS: [&str; 3] = ["smallexpint", "smallint", "bigint"];

/// Iterated yardstick steps per kind, the worked example, strengthened steps, and the
/// downward/no-max and membership-form checks.
pub fn extend_steps(iters: usize) -> Result<Report> {
    let mut rep = Report::new("extend");
    let chains: Vec<Result<extend::StepChain>> =
        STEP_KINDS.par_iter().map(|n| extend::step_chain(&*extend::scenario(n)?, iters)).collect();
    for (name, c) in STEP_KINDS.iter().zip(chains) {
        let c = match c {
            Ok(c) => c,
            Err(e) => {
                rep.check(false, || name.to_string(), "step chain", || e.to_string());
                continue;
            }
        };
        rep.check(c.gammas.len() == iters + 1, || name.to_string(), "all steps", || c.gammas.len().to_string());
        for (i, w) in c.gammas.windows(2).enumerate() {
            let (gain, bound) = (&c.gains[i], &c.bounds[i]);
            rep.check(
                w[1] > w[0] && *gain == &w[1] - &w[0] && gain >= bound && *bound == -integrate(&successor(&w[0])),
                || format!("{name} step {i} from {}", w[0]),
                "strict increase with gain ≥ −∫s(γ)",
                || format!("{} gain {gain} bound {bound}", w[1]),
            );
        }
    }
    let sc = extend::scenario("smallint")?;
    let w = sc.yardstick_step(&sc.initial()?)?;
    let target = GroupElem::from_ints(&[2, 2]);
    rep.check(
        sc.initial()?.gamma == GroupElem::from_ints(&[2, 1]) && w.gamma >= target,
        || "smallint from 2e₀+e₁".into(),
        "≥ 2e₀+2e₁",
        || w.gamma.to_string(),
    );
    for name in ["smallexpint-exact", "smallint-exact"] {
        let sc = extend::scenario(name)?;
        let w0 = sc.initial()?;
        let st = sc.strengthened_step(&w0);
        let want = &w0.gamma + &integrate(&w0.gamma);
        rep.check(
            matches!(&st, Ok(Some(w)) if w.gamma == want),
            || name.to_string(),
            &format!("strengthened step to {want}"),
            || format!("{st:?}"),
        );
    }
    for name in ["smallint", "smallexpint", "bigint", "geometric"] {
        rep.absorb(extend::verify_downward_no_max(&*extend::scenario(name)?, 50, 1)?);
    }
    let big = extend::scenario("bigint")?;
    rep.absorb(extend::verify_bigint_form(&big, 50, 1)?);
    let integrable = extend::scenario("bigint-integrable")?;
    let e = extend::step_chain(&integrable, 1);
    rep.check(e.is_err(), || "bigint-integrable".into(), "error: s is integrable", || format!("{:?}", e.map(|c| c.gammas)));
    for name in extend::SHIPPED {
        let d = setprops::s_descriptor(extend::scenario(name)?);
        let side = d.side();
        let ok = match extend::scenario(name)?.kind {
            Kind::BigInt => side == Some(setprops::Side::Neg),
            _ => side == Some(setprops::Side::Pos),
        };
        let dy = setprops::has_derived_yardstick(&d);
        let cert = dy.as_ref().map(|v| setprops::check_certificate(&d, Property::DerivedYardstick, v));
        rep.check(
            ok && matches!(&dy, Ok(v) if v.holds()) && matches!(cert, Ok(Ok(()))),
            || name.to_string(),
            "derived yardstick holds",
            || format!("{:?}", dy.map(|v| v.verdict)),
        );
    }
    Ok(rep)
}

/// The trichotomy on the three shipped couples and the closure count table.
pub fn classify() -> Result<Report> {
    let mut rep = Report::new("classify");
    let expect = [
        (CoupleDescriptor::TruncatedN(3), TrichotomyResult::Grounded(GroupElem::ones(3))),
        (CoupleDescriptor::LogFull, TrichotomyResult::AsymptoticIntegration),
        (CoupleDescriptor::LogWithGapDelta, TrichotomyResult::Gap(ExtElem::delta())),
    ];
    for (c, want) in &expect {
        let got = classify_couple(c);
        let again = got.as_ref().map(|g| verify_classification(c, g));
        rep.check(
            got.as_ref() == Ok(want) && matches!(again, Ok(Ok(()))),
            || c.to_string(),
            &format!("{want:?}"),
            || format!("{got:?}"),
        );
    }
    let wrong = verify_classification(&CoupleDescriptor::TruncatedN(3), &TrichotomyResult::Grounded(GroupElem::ones(2)));
    rep.check(wrong.is_err(), || "trunc:3 with max ψ (1,1)".into(), "certificate rejected", || format!("{wrong:?}"));
    let (gr, gap, ai) = (expect[0].1.clone(), expect[2].1.clone(), TrichotomyResult::AsymptoticIntegration);
    let table = [
        (&gr, YesNoUnknown::Unknown, CountResult::One),
        (&gap, YesNoUnknown::No, CountResult::Two),
        (&ai, YesNoUnknown::Yes, CountResult::One),
        (&ai, YesNoUnknown::No, CountResult::Two),
    ];
    for (t, lf, want) in table {
        let got = closure_count(t, lf);
        rep.check(got == Ok(want), || format!("{t:?} {lf:?}"), &format!("{want:?}"), || format!("{got:?}"));
    }
    let bad = closure_count(&gap, YesNoUnknown::Yes);
    rep.check(bad.is_err(), || "Gap with λ-free Yes".into(), "rejected", || format!("{bad:?}"));
    Ok(rep)
}
