//! Multilingual rule-based data-to-text core.
//!
//! Grammar units carry the grammatical settings of a variable text span.
//! They are realized into inflected text, planned into statements from
//! templates and data, transferred to other languages through a
//! translation backend plus dependency parses, and compared against human
//! post-edits.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod backend;
pub mod features;
pub mod locale;
pub mod postedit;
pub mod realize;
pub mod template;
pub mod transfer;
pub mod unit;

pub use features::{
    Case, Determiner, FeatureOverrides, FeatureSet, Gender, Number, Numeral, NumeralType, Person, PronounType, Tense,
};
pub use locale::{Capability, Locale};
pub use unit::{
    apply_overrides, resolve_agreement, validate_unit, GrammarUnit, PartOfSpeech, Span, ValidationReport, Violation,
};
