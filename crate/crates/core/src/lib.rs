//! Exact computation in free products of finite cyclic groups.
//!
//! The ambient group is `G = Z/n1Z * ... * Z/nmZ`, described by a [`Signature`]
//! of factor orders. Elements are [`Word`]s in alternating-syllable normal
//! form, so equality is plain syntactic comparison. On top of the word
//! arithmetic the crate provides:
//!
//! - [`aut`]: the standard generating set of `Aut(G)` (factor automorphisms,
//!   admissible permutations, partial conjugations), automorphism algebra, and
//!   machine verification of the generator relations and of the `m = 3`
//!   presentation with its mutually inverse assignment maps.
//! - [`tree`]: finite simplicial trees, subtree families, and checkers for the
//!   Helly property, the subtree-cycle property, and the diagonal property,
//!   with seeded fuzz generators that plant the required hypotheses.
//! - [`bass`]: finite balls of the coset trees on which `Aut(G)` (for `m = 2`)
//!   and `Out(G)` (for `m = 3`) act, extended actions, barycentric
//!   subdivision, and amalgam stabilizer reports.
//! - [`invariants`]: conjugacy-class census, occurrence counts of each cyclic
//!   factor, characteristic-subgroup checks with induced automorphisms on
//!   quotients, and the commutation-case certificates used to certify fixed
//!   points.
//! - [`cli`]: the batch command-line surface over all of the above.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything can be shared freely across threads.

pub mod aut;
pub mod bass;
pub mod cli;
pub mod invariants;
pub mod report;
pub mod sig;
pub mod tree;
pub mod word;

pub(crate) mod arith;

pub use aut::Automorphism;
pub use report::Report;
pub use sig::Signature;
pub use word::{Order, Syllable, Word};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    /// `index` is reported 1-based, matching the text syntax `x<i>`.
    #[error("index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("word length {len} exceeds cap {cap} (override with FPCYC_MAX_WORD_LEN)")]
    WordTooLong { len: usize, cap: usize },
    #[error("char {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
