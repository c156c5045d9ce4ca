//! NPN Boolean matching of truth tables.
//!
//! Pairs are first screened by cheap invariants (minterm counts, then
//! sensitivity signatures, then invariants of the sensitivity-level
//! subgraphs of the hypercube) and only the survivors are decided exactly
//! through canonical forms.

pub mod bench;
pub mod canon;
pub mod domain;
pub mod error;
pub mod generator;
pub mod pipeline;
pub mod pruning;
pub mod sensitivity;
pub mod truth_table;

pub use canon::{brute_force_equivalent, canonical_form, exact_equivalent, CanonicalForm};
pub use domain::{compare_k_invariants, k_domain, KComparison, KDomain, KInvariant};
pub use error::{Error, Result};
pub use pipeline::{classify, match_pair, ClassPartition, MatchOutcome, Phase};
pub use pruning::{
    advanced_prune, basic_prune, PolarityRule, PruneConfig, PruneVerdict, Signature,
};
pub use sensitivity::{compute_profile, naive_profile, Polarity, SensitivityProfile};
pub use truth_table::{NpnTransform, TextFormat, TruthTable, Word, WordWidth};
