//! Classification of a post-edit into change categories.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::category::ChangeCategory;
use crate::features::{FeatureSet, Numeral};
use crate::locale::Locale;
use crate::unit::{GrammarUnit, PartOfSpeech};

use ChangeCategory as C;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("neither a before nor an after unit was given")]
    NothingToCompare,
    #[error("record `{unit_id}` logs {logged:?} but before and after do not differ")]
    ConflictingInput { unit_id: String, logged: Vec<String> },
    #[error("record `{unit_id}` logs {logged:?} but the classifier finds {found:?}")]
    Mismatch {
        unit_id: String,
        logged: Vec<String>,
        found: Vec<String>,
    },
    #[error("record `{unit_id}` violates the add/remove unit rule")]
    Structure { unit_id: String },
}

/// First differing character decides between capitalize and lowercase.
fn casing_change(before: &str, after: &str) -> Option<ChangeCategory> {
    if before == after || before.chars().count() != after.chars().count() {
        return None;
    }
    let mut found = None;
    for (b, a) in before.chars().zip(after.chars()) {
        if b == a {
            continue;
        }
        let same_letter = b.to_lowercase().eq(a.to_lowercase());
        if !same_letter {
            return None;
        }
        if found.is_none() {
            found = Some(if a.is_uppercase() { C::Capitalize } else { C::Lowercase });
        }
    }
    found
}

fn lemma_category(pos: PartOfSpeech) -> ChangeCategory {
    match pos {
        PartOfSpeech::Noun | PartOfSpeech::Pronoun => C::ChangeNounLemma,
        PartOfSpeech::Verb => C::ChangeVerbLemma,
    }
}

fn lemma_changes(before: &GrammarUnit, after: &GrammarUnit, out: &mut BTreeSet<ChangeCategory>) {
    let (b, a) = (&before.features.lemma, &after.features.lemma);
    if b == a {
        return;
    }
    if b.is_empty() {
        out.insert(match after.pos {
            PartOfSpeech::Noun => C::AddNoun,
            PartOfSpeech::Pronoun => C::AddPronoun,
            PartOfSpeech::Verb => C::ChangeVerbLemma,
        });
        return;
    }
    match casing_change(b, a) {
        Some(c) => {
            out.insert(c);
        }
        None => {
            out.insert(lemma_category(after.pos));
        }
    }
}

fn adjective_changes(b: &[String], a: &[String], out: &mut BTreeSet<ChangeCategory>) {
    if b == a {
        return;
    }
    let mut remaining: Vec<&String> = a.iter().collect();
    let mut removed = 0usize;
    for x in b {
        match remaining.iter().position(|y| *y == x) {
            Some(i) => {
                remaining.remove(i);
            }
            None => removed += 1,
        }
    }
    let added = remaining.len();
    let changed = added.min(removed);
    if changed > 0 || (added == 0 && removed == 0) {
        out.insert(C::ChangeAdjectiveLemma);
    }
    if added > changed {
        out.insert(C::AddAdjective);
    }
    if removed > changed {
        out.insert(C::RemoveAdjective);
    }
}

fn numeral_changes(b: Option<Numeral>, a: Option<Numeral>, out: &mut BTreeSet<ChangeCategory>) {
    match (b, a) {
        (None, Some(_)) => {
            out.insert(C::AddNumber);
        }
        (Some(_), None) => {
            out.insert(C::ChangeNumeralType);
        }
        (Some(x), Some(y)) if x.numeral_type != y.numeral_type => {
            out.insert(C::ChangeNumeralType);
        }
        _ => {}
    }
}

fn feature_changes(pos: PartOfSpeech, b: &FeatureSet, a: &FeatureSet, out: &mut BTreeSet<ChangeCategory>) {
    if b.case != a.case {
        out.insert(C::ChangeCase);
    }
    if b.number != a.number || b.person != a.person {
        out.insert(C::ChangeNumber);
    }
    if b.tense != a.tense {
        out.insert(C::ChangeTense);
    }
    if b.gender != a.gender {
        out.insert(lemma_category(pos));
    }
    match (&b.preposition, &a.preposition) {
        (None, Some(_)) => {
            out.insert(C::AddPreposition);
        }
        (Some(_), None) => {
            out.insert(C::RemovePreposition);
        }
        (Some(x), Some(y)) if x != y => {
            out.insert(match casing_change(x, y) {
                Some(c) => c,
                None => C::ChangePreposition,
            });
        }
        _ => {}
    }
    adjective_changes(&b.adjectives, &a.adjectives, out);
    numeral_changes(b.numerals, a.numerals, out);
    if b.conjunctions != a.conjunctions {
        out.insert(C::ChangeConjunction);
    }
    match (b.article(), a.article()) {
        (None, Some(_)) => {
            out.insert(C::AddDeterminer);
        }
        (Some(_), None) => {
            out.insert(C::RemoveDeterminer);
        }
        (Some(x), Some(y)) if x != y => {
            out.insert(C::ChangeDeterminer);
        }
        _ => {}
    }
    match (b.pronoun_type, a.pronoun_type) {
        (None, Some(_)) => {
            out.insert(C::AddPronoun);
        }
        (Some(x), y) if Some(x) != y => {
            out.insert(C::ChangeNounLemma);
        }
        _ => {}
    }
    if b.head_index != a.head_index {
        out.insert(C::MarkHead);
    }
}

/// Categories of one post-edit.
///
/// An absent `before` is an added unit and an absent `after` a removed one.
/// Otherwise every differing dimension contributes one category. Casing-only
/// differences of the lemma or of the rendered texts give capitalize or
/// lowercase. Numeral value changes are data, not edits, and are ignored.
pub fn classify_change(
    before: Option<&GrammarUnit>,
    after: Option<&GrammarUnit>,
    before_text: Option<&str>,
    after_text: Option<&str>,
) -> Result<BTreeSet<ChangeCategory>, ClassifyError> {
    let mut out = BTreeSet::new();
    let (b, a) = match (before, after) {
        (None, None) => return Err(ClassifyError::NothingToCompare),
        (None, Some(_)) => {
            out.insert(C::AddUnit);
            return Ok(out);
        }
        (Some(_), None) => {
            out.insert(C::RemoveUnit);
            return Ok(out);
        }
        (Some(b), Some(a)) => (b, a),
    };
    lemma_changes(b, a, &mut out);
    if b.pos != a.pos {
        out.insert(C::ChangePos);
    } else {
        feature_changes(a.pos, &b.features, &a.features, &mut out);
    }
    if let (Some(bt), Some(at)) = (before_text, after_text) {
        if let Some(c) = casing_change(bt, at) {
            out.insert(c);
        }
    }
    Ok(out)
}

/// One logged post-edit.
///
/// Records of literal text edits between units carry an empty category set
/// and the unit id `text:<statement id>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeRecord {
    pub session_id: String,
    pub participant_id: String,
    pub locale: Locale,
    pub statement_id: String,
    pub unit_id: String,
    pub categories: BTreeSet<ChangeCategory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before: Option<GrammarUnit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after: Option<GrammarUnit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after_text: Option<String>,
    /// Milliseconds since the Unix epoch.
    pub timestamp: u64,
}

pub const TEXT_UNIT_PREFIX: &str = "text:";

impl ChangeRecord {
    pub fn is_text_only(&self) -> bool {
        self.categories.is_empty() && self.unit_id.starts_with(TEXT_UNIT_PREFIX)
    }
}

fn labels(set: &BTreeSet<ChangeCategory>) -> Vec<String> {
    set.iter().map(|c| c.label().into()).collect()
}

/// Re-classifies a record and checks it against what was logged.
pub fn verify_record(record: &ChangeRecord) -> Result<(), ClassifyError> {
    if record.is_text_only() {
        return Ok(());
    }
    let structure_ok = (record.before.is_none() == record.categories.contains(&C::AddUnit))
        && (record.after.is_none() == record.categories.contains(&C::RemoveUnit));
    if !structure_ok {
        return Err(ClassifyError::Structure {
            unit_id: record.unit_id.clone(),
        });
    }
    let found = classify_change(
        record.before.as_ref(),
        record.after.as_ref(),
        record.before_text.as_deref(),
        record.after_text.as_deref(),
    )?;
    if found.is_empty() {
        return Err(ClassifyError::ConflictingInput {
            unit_id: record.unit_id.clone(),
            logged: labels(&record.categories),
        });
    }
    if found != record.categories {
        return Err(ClassifyError::Mismatch {
            unit_id: record.unit_id.clone(),
            logged: labels(&record.categories),
            found: labels(&found),
        });
    }
    Ok(())
}
