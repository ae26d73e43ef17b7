//! Fixed inputs shared by the benchmarks.

use aclab::sample;
use aclab::{Frac, GroupElem};

pub fn group_inputs(n: usize, seed: u64) -> Vec<GroupElem> {
    let mut r = sample::rng(seed);
    (0..n).map(|_| sample::group_elem(&mut r)).collect()
}

pub fn field_inputs(n: usize, seed: u64) -> Vec<Frac> {
    let mut r = sample::rng(seed);
    (0..n).map(|_| sample::nonzero_frac(&mut r)).collect()
}
