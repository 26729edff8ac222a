//! Witness term systems and the bounded searches that find them.

mod search;
mod terms;

pub use search::{
    check_semidegeneracy_evidence, find_connection_terms, find_connection_terms_in,
    find_semidegeneracy_witnesses, find_semidegeneracy_witnesses_in, identity_valid_bounded,
    trivial_subuniverses, ConnectionSearch, EvidenceReport, EvidenceViolation, IdentityVerdict,
    ModelCache, SemidegeneracySearch, WitnessBounds, WitnessError,
};
pub use terms::{ConnectionTerms, SemidegeneracyTerms, WitnessSet};

pub(crate) use terms::chain_var_names;
