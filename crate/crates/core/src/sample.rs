//! Seeded samplers for group elements and field elements.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logts::{Frac, Monomial, Series};
use crate::ogroup::{int, rat, ExtElem, GroupElem, Rat};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for case `i` of a run seeded with `seed`.
pub fn case_rng(seed: u64, i: usize) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i as u64 + 1);
    r
}

pub const MAX_SUPPORT: usize = 6;
pub const MAX_INDEX: usize = 12;
pub const MAX_MAG: i64 = 16;

pub fn small_rat(r: &mut impl Rng) -> Rat {
    if r.gen_bool(0.5) {
        let v = [rat(-2, 1), rat(-1, 1), rat(-1, 2), rat(1, 2), rat(1, 1), rat(2, 1)];
        v.choose(r).unwrap().clone()
    } else {
        let mut n = 0;
        while n == 0 {
            n = r.gen_range(-MAX_MAG..=MAX_MAG);
        }
        rat(n, r.gen_range(1..=MAX_MAG))
    }
}

/// Random element with indices below `bound`. A third of the samples start with a run of
/// ones so that the "first index with coefficient ≠ 1" varies.
pub fn group_elem_below(r: &mut impl Rng, bound: usize) -> GroupElem {
    if r.gen_ratio(1, 40) {
        return GroupElem::zero();
    }
    let mut g = GroupElem::zero();
    let mut start = 0;
    if r.gen_ratio(1, 3) {
        start = r.gen_range(0..=4.min(bound));
        g = GroupElem::ones(start);
        if start == bound {
            return g;
        }
    }
    let support = r.gen_range(1..=MAX_SUPPORT);
    for _ in 0..support {
        let i = r.gen_range(start..bound);
        g.set(i, small_rat(r));
    }
    g
}

pub fn group_elem(r: &mut impl Rng) -> GroupElem {
    group_elem_below(r, MAX_INDEX + 1)
}

pub fn positive_elem(r: &mut impl Rng) -> GroupElem {
    loop {
        let g = group_elem(r);
        if !g.is_zero() {
            return g.abs();
        }
    }
}

pub fn ext_elem(r: &mut impl Rng) -> ExtElem {
    let base = group_elem(r);
    let q = match r.gen_range(0..4) {
        0 => Rat::zero(),
        1 => Rat::one(),
        2 => -Rat::one(),
        _ => small_rat(r),
    };
    ExtElem::new(base, q)
}

pub const FIELD_SUPPORT: usize = 4;
pub const FIELD_INDEX: usize = 8;
pub const FIELD_EXP: i64 = 4;
pub const FIELD_TERMS: usize = 5;
pub const FIELD_QUOTIENT_TERMS: usize = 3;

pub fn monomial(r: &mut impl Rng) -> Monomial {
    let mut e = GroupElem::zero();
    for _ in 0..r.gen_range(0..=FIELD_SUPPORT) {
        let i = r.gen_range(0..=FIELD_INDEX);
        let q = if r.gen_ratio(1, 4) {
            rat(r.gen_range(-2 * FIELD_EXP..=2 * FIELD_EXP), 2)
        } else {
            int(r.gen_range(-FIELD_EXP..=FIELD_EXP))
        };
        e.set(i, q);
    }
    Monomial::new(e)
}

pub fn series(r: &mut impl Rng) -> Series {
    series_up_to(r, FIELD_TERMS)
}

fn series_up_to(r: &mut impl Rng, terms: usize) -> Series {
    let mut s = Series::zero();
    for _ in 0..r.gen_range(1..=terms) {
        let c = int(r.gen_range(-6..=6));
        s = &s + &Series::term(c, monomial(r));
    }
    s
}

pub fn nonzero_series(r: &mut impl Rng) -> Series {
    loop {
        let s = series(r);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Mostly polynomial samples, with a fraction of genuine quotients.
pub fn frac(r: &mut impl Rng) -> Frac {
    if r.gen_ratio(1, 3) {
        // quotient parts stay short: products of three quotients are cross-multiplied
        let num = series_up_to(r, FIELD_QUOTIENT_TERMS);
        let den = loop {
            let d = series_up_to(r, FIELD_QUOTIENT_TERMS);
            if !d.is_zero() {
                break d;
            }
        };
        Frac::new(num, den).expect("nonzero denominator")
    } else {
        Frac::from(series(r))
    }
}

pub fn nonzero_frac(r: &mut impl Rng) -> Frac {
    loop {
        let f = frac(r);
        if !f.is_zero() {
            return f;
        }
    }
}
