//! Exact computations with the asymptotic couple of logarithmic transseries, a finitely
//! representable logarithmic differential field, pseudocauchy sequences, and the
//! jammed/yardstick properties of convex subsets of the value group.

pub mod acouple;
pub mod error;
pub mod expr;
pub mod extend;
pub mod logts;
pub mod ogroup;
pub mod pcseq;
pub mod report;
pub mod sample;
pub mod setprops;
pub mod suites;

pub use acouple::{
    chi, classify_couple, closure_count, der, integrate, psi, successor, CoupleDescriptor, CountResult, GammaInf,
    TrichotomyResult, YesNoUnknown,
};
pub use error::{Error, Result};
pub use logts::{Dominance, Frac, Monomial, Series};
pub use ogroup::{ext_cmp, ExtElem, GroupElem, Rat};
pub use report::{Failure, Report};
pub use setprops::{Outcome, PropertyVerdict, SetDescriptor};
