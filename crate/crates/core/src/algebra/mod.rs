//! Signatures, terms, identities, finite algebras and the operations on
//! them that every other module builds on.

mod finite;
mod iso;
mod parse;
mod presentation;
mod product;
mod signature;
mod term;

pub use finite::{for_each_assignment, AlgebraJson, Element, FiniteAlgebra};
pub use iso::{find_isomorphism, is_homomorphism};
pub use parse::{parse_presentation, ParseError};
pub use presentation::Presentation;
pub use product::{direct_product, DirectProduct, DEFAULT_MAX_PRODUCT};
pub use signature::{Signature, Symbol, SymbolId};
pub use term::{Identity, IdentityDisplay, Term, TermDisplay};

pub(crate) use finite::table_len;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown symbol id {0}")]
    UnknownSymbolId(SymbolId),
    #[error("symbol `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("the designated groupoid term may only use the variables x and y")]
    GroupoidNotBinary,
    #[error("no groupoid term designated")]
    MissingGroupoid,
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("algebra does not match the signature")]
    SignatureMismatch,
    #[error("universe must be non-empty")]
    EmptyUniverse,
    #[error("table for symbol #{symbol} has {got} entries, expected {expected}")]
    TableLength {
        symbol: SymbolId,
        expected: usize,
        got: usize,
    },
    #[error("element {element} outside universe of size {size}")]
    ElementOutOfRange { element: Element, size: usize },
    #[error("missing table for `{0}`")]
    MissingTable(String),
    #[error("product of size {size} exceeds the limit {max}")]
    ProductTooLarge { size: usize, max: usize },
    #[error("table size overflow")]
    TooLarge,
    #[error("invalid algebra JSON: {0}")]
    Json(String),
    #[error("invalid witness data: {0}")]
    Witness(String),
}
