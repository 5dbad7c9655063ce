//! Rainbow numbers of `x1 + x2 = k*x3` over the cyclic groups `Z_n`.
//!
//! `rb(Z_n, k)` is the least `r` such that every exact `r`-coloring of `Z_n`
//! contains a solution whose three entries carry three different colors.
//! This crate provides the modular arithmetic, coloring analysis, an
//! exhaustive search oracle, the closed-form values and explicit extremal
//! colorings, all cross-checkable against each other.

pub mod certificate;
pub mod coloring;
pub mod constructions;
pub mod error;
pub mod formulas;
pub mod lm;
pub mod modular;
pub mod search;

pub use certificate::{Certificate, CertificateMeta, Verification};
pub use coloring::{find_rainbow_triple, is_rainbow_free, ColorId, Coloring, Palette};
pub use error::{Error, Result};
pub use formulas::{
    rb_general, rb_prime_power, rb_q_p, rb_schur, rb_schur_prime, Method, RbResult, TwoPowerTable,
};
pub use lm::{classify_3coloring_lm, LmCase, LmClassification};
pub use modular::{CyclicInstance, Factorization, Triple};
pub use search::{max_rainbow_free_r, rb_oracle, OracleVerdict, SearchConfig, SearchOutcome};
