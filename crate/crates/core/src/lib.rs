//! Sumset arithmetic in finite abelian groups and a certificate engine for
//! Kneser's addition theorem: `|A + B| >= |A + K| + |B + K| - |K|` where
//! `K` is the stabilizer of `A + B`.
//!
//! - [`group`]: direct products of cyclic groups and their quotients.
//! - [`set`]: subsets, sumsets, stabilizers, saturation.
//! - [`engine`]: the bound, certificate generation and verification.
//! - [`oracle`]: exhaustive and sampled brute-force validation.
//! - [`cli`]: the `kneser` command line.

pub mod cli;
pub mod engine;
pub mod error;
pub mod group;
pub mod oracle;
pub mod parse;
pub mod set;

pub use engine::{certify, kneser_bound, verify, BoundReport, Certificate, VerifyReport};
pub use error::{Error, Result};
pub use group::{make_group, quotient, FinAbGroup, GroupElem, QuotientMap};
pub use set::{GSet, Subgroup};
