//! Grammar units: validation against the per-POS feature matrix, overrides
//! and count agreement.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::features::{compound_segments, FeatureOverrides, FeatureSet, Number};
use crate::locale::Locale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartOfSpeech {
    Noun,
    Pronoun,
    Verb,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 3] = [PartOfSpeech::Noun, PartOfSpeech::Pronoun, PartOfSpeech::Verb];

    pub fn label(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Pronoun => "pronoun",
            PartOfSpeech::Verb => "verb",
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Half-open character (not byte) range into a rendered statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slices `text` by character offsets. `None` when out of bounds.
    pub fn slice<'a>(&self, text: &'a str) -> Option<&'a str> {
        if self.start > self.end {
            return None;
        }
        let start = char_to_byte(text, self.start)?;
        let end = char_to_byte(text, self.end)?;
        Some(&text[start..end])
    }
}

pub(crate) fn char_to_byte(text: &str, chars: usize) -> Option<usize> {
    if chars == 0 {
        return Some(0);
    }
    let mut it = text.char_indices();
    match it.nth(chars) {
        Some((b, _)) => Some(b),
        None if text.chars().count() == chars => Some(text.len()),
        None => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrammarUnit {
    pub id: String,
    pub locale: Locale,
    pub pos: PartOfSpeech,
    pub features: FeatureSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement_source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

impl GrammarUnit {
    pub fn new(id: impl Into<String>, locale: Locale, pos: PartOfSpeech, features: FeatureSet) -> Self {
        GrammarUnit {
            id: id.into(),
            locale,
            pos,
            features,
            agreement_source: None,
            span: None,
        }
    }
}

/// A feature slot of the legality matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Lemma,
    Case,
    Number,
    Tense,
    Person,
    Gender,
    Preposition,
    Adjectives,
    Numerals,
    Conjunctions,
    Determiner,
    PronounType,
}

impl Feature {
    pub const ALL: [Feature; 12] = [
        Feature::Lemma,
        Feature::Case,
        Feature::Number,
        Feature::Tense,
        Feature::Person,
        Feature::Gender,
        Feature::Preposition,
        Feature::Adjectives,
        Feature::Numerals,
        Feature::Conjunctions,
        Feature::Determiner,
        Feature::PronounType,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Feature::Lemma => "lemma",
            Feature::Case => "case",
            Feature::Number => "number",
            Feature::Tense => "tense",
            Feature::Person => "person",
            Feature::Gender => "gender",
            Feature::Preposition => "preposition",
            Feature::Adjectives => "adjectives",
            Feature::Numerals => "numerals",
            Feature::Conjunctions => "conjunctions",
            Feature::Determiner => "determiner",
            Feature::PronounType => "pronoun type",
        }
    }

    /// The feature-per-POS matrix.
    pub fn legal_on(self, pos: PartOfSpeech) -> bool {
        use PartOfSpeech::*;
        match self {
            Feature::Lemma | Feature::Number | Feature::Gender => true,
            Feature::Case | Feature::Preposition => matches!(pos, Noun | Pronoun),
            Feature::Tense | Feature::Person => pos == Verb,
            Feature::Adjectives | Feature::Numerals | Feature::Conjunctions | Feature::Determiner => pos == Noun,
            Feature::PronounType => pos == Pronoun,
        }
    }

    pub fn is_set(self, f: &FeatureSet) -> bool {
        match self {
            Feature::Lemma => true,
            Feature::Case => f.case.is_some(),
            Feature::Number => f.number.is_some(),
            Feature::Tense => f.tense.is_some(),
            Feature::Person => f.person.is_some(),
            Feature::Gender => f.gender.is_some(),
            Feature::Preposition => f.preposition.is_some(),
            Feature::Adjectives => !f.adjectives.is_empty(),
            Feature::Numerals => f.numerals.is_some(),
            Feature::Conjunctions => !f.conjunctions.is_empty(),
            Feature::Determiner => f.determiner.is_some(),
            Feature::PronounType => f.pronoun_type.is_some(),
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    IllegalFeature { feature: Feature, pos: PartOfSpeech },
    HeadIndexOutOfRange { index: usize, segments: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IllegalFeature { feature, pos } => write!(f, "{feature} illegal on {pos}"),
            Violation::HeadIndexOutOfRange { index, segments } => {
                write!(f, "head index {index} out of range for {segments} compound segments")
            }
        }
    }
}

/// Violations of a unit, empty when valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_features(pos: PartOfSpeech, features: &FeatureSet) -> ValidationReport {
    let mut violations: Vec<Violation> = Feature::ALL
        .iter()
        .filter(|feat| feat.is_set(features) && !feat.legal_on(pos))
        .map(|&feature| Violation::IllegalFeature { feature, pos })
        .collect();
    if let Some(index) = features.head_index {
        let segments = compound_segments(&features.lemma).len();
        if index >= segments {
            violations.push(Violation::HeadIndexOutOfRange { index, segments });
        }
    }
    ValidationReport { violations }
}

pub fn validate_unit(unit: &GrammarUnit) -> ValidationReport {
    validate_features(unit.pos, &unit.features)
}

/// Locale-level restrictions layered on top of the POS matrix: a case the
/// locale cannot express, or dual number outside dual-marking locales.
pub fn locale_violations(unit: &GrammarUnit) -> Vec<LocaleViolation> {
    let mut out = Vec::new();
    if let Some(case) = unit.features.case {
        if !unit.locale.legal_cases().contains(&case) {
            out.push(LocaleViolation::Case(case));
        }
    }
    if unit.features.number == Some(Number::Dual) && !unit.locale.has_dual() {
        out.push(LocaleViolation::Dual);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocaleViolation {
    Case(crate::features::Case),
    Dual,
}

impl fmt::Display for LocaleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocaleViolation::Case(c) => write!(f, "case {c} not available in locale"),
            LocaleViolation::Dual => f.write_str("dual number not available in locale"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnitError {
    #[error("override produces an illegal unit: {}", display_violations(.0))]
    IllegalOverride(Vec<Violation>),
    #[error("unit `{0}` has no agreement source")]
    NoAgreementSource(String),
}

fn display_violations(v: &[Violation]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        let _ = write!(s, "{x}");
    }
    s
}

pub fn apply_overrides(base: &GrammarUnit, overrides: &FeatureOverrides) -> Result<GrammarUnit, UnitError> {
    let features = overrides.apply_to(&base.features);
    let report = validate_features(base.pos, &features);
    if !report.is_valid() {
        return Err(UnitError::IllegalOverride(report.violations));
    }
    Ok(GrammarUnit {
        features,
        ..base.clone()
    })
}

/// How a count is expressed grammatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountForm {
    pub number: Number,
    /// Slovenian 5+ (and 0) counts govern a genitive plural. Recorded only.
    pub quantified_genitive: bool,
}

pub fn count_form(count: i64, locale: Locale) -> CountForm {
    let n = count.unsigned_abs();
    match locale {
        Locale::SlSi => {
            let (number, quantified_genitive) = match n % 100 {
                1 => (Number::Singular, false),
                2 => (Number::Dual, false),
                3 | 4 => (Number::Plural, false),
                _ => (Number::Plural, true),
            };
            CountForm {
                number,
                quantified_genitive,
            }
        }
        _ => CountForm {
            number: if n == 1 { Number::Singular } else { Number::Plural },
            quantified_genitive: false,
        },
    }
}

/// Grammatical number of `unit` for a bound count. Chinese units get the
/// same value as English; realization ignores it there.
pub fn resolve_agreement(unit: &GrammarUnit, data_value: i64, locale: Locale) -> Result<Number, UnitError> {
    if unit.agreement_source.is_none() {
        return Err(UnitError::NoAgreementSource(unit.id.clone()));
    }
    Ok(count_form(data_value, locale).number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{Case, Determiner, Tense};

    fn noun(f: FeatureSet) -> GrammarUnit {
        GrammarUnit::new("u1", Locale::DeDe, PartOfSpeech::Noun, f)
    }

    #[test]
    fn am_samstag_unit_is_valid() {
        let mut f = FeatureSet::with_lemma("Samstag");
        f.case = Some(Case::Dative);
        f.determiner = Some(Determiner::Definite);
        f.preposition = Some("an".into());
        assert!(validate_unit(&noun(f)).is_valid());
    }

    #[test]
    fn case_on_verb_is_reported() {
        let mut f = FeatureSet::with_lemma("gewinnen");
        f.case = Some(Case::Genitive);
        let u = GrammarUnit::new("v", Locale::DeDe, PartOfSpeech::Verb, f);
        let r = validate_unit(&u);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(alloc::format!("{}", r.violations[0]), "case illegal on verb");
    }

    #[test]
    fn lemma_only_valid_everywhere() {
        for pos in PartOfSpeech::ALL {
            let u = GrammarUnit::new("x", Locale::EnUs, pos, FeatureSet::with_lemma("x"));
            assert!(validate_unit(&u).is_valid());
        }
    }

    #[test]
    fn head_index_must_address_a_segment() {
        let mut f = FeatureSet::with_lemma("Double-Double-Ergebnis");
        f.head_index = Some(2);
        assert!(validate_unit(&noun(f.clone())).is_valid());
        f.head_index = Some(3);
        assert_eq!(
            validate_unit(&noun(f)).violations,
            [Violation::HeadIndexOutOfRange { index: 3, segments: 3 }]
        );
    }

    #[test]
    fn overrides_replace_field_wise() {
        let mut f = FeatureSet::with_lemma("Samstag");
        f.case = Some(Case::Nominative);
        let base = noun(f);
        let o = FeatureOverrides {
            case: Some(Some(Case::Dative)),
            ..Default::default()
        };
        let out = apply_overrides(&base, &o).unwrap();
        assert_eq!(out.features.case, Some(Case::Dative));
        assert_eq!(out.features.lemma, "Samstag");
        assert_eq!(base.features.case, Some(Case::Nominative));
        assert_eq!(apply_overrides(&base, &FeatureOverrides::default()).unwrap(), base);
    }

    #[test]
    fn tense_override_on_noun_fails() {
        let base = noun(FeatureSet::with_lemma("Samstag"));
        let o = FeatureOverrides {
            tense: Some(Some(Tense::Past)),
            ..Default::default()
        };
        assert!(matches!(apply_overrides(&base, &o), Err(UnitError::IllegalOverride(_))));
    }

    #[test]
    fn agreement_examples() {
        let mut u = noun(FeatureSet::with_lemma("goal"));
        assert!(resolve_agreement(&u, 1, Locale::EnUs).is_err());
        u.agreement_source = Some("goals".into());
        assert_eq!(resolve_agreement(&u, 1, Locale::EnUs).unwrap(), Number::Singular);
        assert_eq!(resolve_agreement(&u, 8, Locale::DeDe).unwrap(), Number::Plural);
        assert_eq!(resolve_agreement(&u, 2, Locale::SlSi).unwrap(), Number::Dual);
    }

    /// Slovenian count agreement, written out by hand from a reference
    /// grammar: ena točka, dve točki, tri/štiri točke, pet točk.
    #[test]
    fn slovenian_count_table() {
        let table = [
            (1, Number::Singular, false),
            (2, Number::Dual, false),
            (3, Number::Plural, false),
            (4, Number::Plural, false),
            (5, Number::Plural, true),
        ];
        for (n, number, gen) in table {
            let f = count_form(n, Locale::SlSi);
            assert_eq!((f.number, f.quantified_genitive), (number, gen), "n={n}");
        }
        assert_eq!(count_form(101, Locale::SlSi).number, Number::Singular);
        assert_eq!(count_form(102, Locale::SlSi).number, Number::Dual);
        assert!(count_form(0, Locale::SlSi).quantified_genitive);
    }

    #[test]
    fn span_slices_by_chars() {
        let s = "Über 20000";
        assert_eq!(Span::new(0, 4).slice(s), Some("Über"));
        assert_eq!(Span::new(5, 10).slice(s), Some("20000"));
        assert_eq!(Span::new(5, 11).slice(s), None);
    }

    #[test]
    fn locale_case_subset() {
        let mut f = FeatureSet::with_lemma("Samstag");
        f.case = Some(Case::Locative);
        assert_eq!(locale_violations(&noun(f)), [LocaleViolation::Case(Case::Locative)]);
    }
}
