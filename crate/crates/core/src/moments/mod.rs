//! Rademacher moment identities, decoupled moment bounds, partition
//! combinatorics and the moment-to-tail conversion.

mod combinatorics;
mod khinchine;
mod suite;
mod tail;

pub use combinatorics::{
    bell_numbers, binomial, factorial, partition_classes, stirling2, stirling2_table, stirling_refined_bound_check,
    surjection_count, PartitionClass, StirlingBoundCheck, SurjectionCheck, MAX_PARTITION_J, MAX_STIRLING,
};
pub use khinchine::{
    decoupled_moment_check, enumerated_moment, exact_moment, khinchine_ratio, multinomial_moment, normconstant_term,
    random_multi_index, CompensatedSum, DecoupledVerdict, NormconstantTerm, EXACT_AGREEMENT, KHINCHINE_SAMPLES,
    MAX_EXACT_MOMENT, MAX_EXACT_TERMS, MIN_DECOUPLED_TRIALS,
};
pub use tail::{tail_from_moments, MomentGrowth, TailBound};

pub use crate::verdict::Verdict;
pub use suite::moment_suite;
