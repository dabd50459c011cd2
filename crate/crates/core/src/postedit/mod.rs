//! Post-edit analytics: unit matching, change classification and
//! aggregation.

pub mod category;
pub mod classify;
pub mod matching;
pub mod stats;

pub use category::{ChangeCategory, UnknownCategory};
pub use classify::{classify_change, verify_record, ChangeRecord, ClassifyError, TEXT_UNIT_PREFIX};
pub use matching::{match_rate, match_units, overlap_score, MatchPass, MatchResult, MatchedPair, OVERLAP_THRESHOLD};
pub use stats::{
    aggregate_changes, changed_fractions, completed_only, mean_changed_fraction, per_participant_counts, ChangeTable,
    Ratio, StatsError,
};
