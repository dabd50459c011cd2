//! Legality matrix, overrides and count agreement of grammar units.

mod common;

use common::*;
use gramtx_core::unit::{count_form, validate_features, UnitError};
use gramtx_core::{
    apply_overrides, resolve_agreement, validate_unit, Case, FeatureOverrides, FeatureSet, GrammarUnit, Locale, Number,
    PartOfSpeech, Tense,
};
use proptest::prelude::*;

/// Feature legality per part of speech, one row per feature with the
/// noun, pronoun and verb columns.
const MATRIX: [(&str, [char; 3]); 12] = [
    ("lemma", ['x', 'x', 'x']),
    ("case", ['x', 'x', '-']),
    ("number", ['x', 'x', 'x']),
    ("tense", ['-', '-', 'x']),
    ("person", ['-', '-', 'x']),
    ("gender", ['x', 'x', 'x']),
    ("preposition", ['x', 'x', '-']),
    ("adjectives", ['x', '-', '-']),
    ("numerals", ['x', '-', '-']),
    ("conjunctions", ['x', '-', '-']),
    ("determiners", ['x', '-', '-']),
    ("pronoun type", ['-', 'x', '-']),
];

fn column(pos: PartOfSpeech) -> usize {
    match pos {
        PartOfSpeech::Noun => 0,
        PartOfSpeech::Pronoun => 1,
        PartOfSpeech::Verb => 2,
    }
}

fn cell(feature: &str, pos: PartOfSpeech) -> bool {
    MATRIX.iter().find(|(f, _)| *f == feature).unwrap().1[column(pos)] == 'x'
}

/// Names of the optional features present in `f`, read field by field.
fn set_features(f: &FeatureSet) -> Vec<&'static str> {
    let mut out = Vec::new();
    if f.case.is_some() {
        out.push("case");
    }
    if f.number.is_some() {
        out.push("number");
    }
    if f.tense.is_some() {
        out.push("tense");
    }
    if f.person.is_some() {
        out.push("person");
    }
    if f.gender.is_some() {
        out.push("gender");
    }
    if f.preposition.is_some() {
        out.push("preposition");
    }
    if !f.adjectives.is_empty() {
        out.push("adjectives");
    }
    if f.numerals.is_some() {
        out.push("numerals");
    }
    if !f.conjunctions.is_empty() {
        out.push("conjunctions");
    }
    if f.determiner.is_some() {
        out.push("determiners");
    }
    if f.pronoun_type.is_some() {
        out.push("pronoun type");
    }
    out
}

fn head_in_range(f: &FeatureSet) -> bool {
    match f.head_index {
        None => true,
        Some(i) => i < f.lemma.split(['-', ' ']).filter(|s| !s.is_empty()).count(),
    }
}

/// Expected validity from the matrix and the head index rule.
fn oracle_valid(pos: PartOfSpeech, f: &FeatureSet) -> bool {
    set_features(f).iter().all(|feat| cell(feat, pos)) && head_in_range(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn validation_follows_matrix(pos in pos(), f in feature_set()) {
        let unit = GrammarUnit::new("u", Locale::DeDe, pos, f.clone());
        let report = validate_unit(&unit);
        prop_assert_eq!(report.is_valid(), oracle_valid(pos, &f), "{:?}", report);
        let illegal = set_features(&f).into_iter().filter(|feat| !cell(feat, pos)).count();
        let head = usize::from(!head_in_range(&f));
        prop_assert_eq!(report.violations.len(), illegal + head);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn validation_is_deterministic(pos in pos(), f in feature_set()) {
        prop_assert_eq!(validate_features(pos, &f), validate_features(pos, &f.clone()));
    }

    #[test]
    fn empty_override_is_identity(u in legal_unit()) {
        prop_assert_eq!(apply_overrides(&u, &FeatureOverrides::default()).unwrap(), u);
    }

    #[test]
    fn overrides_are_idempotent(u in legal_unit(), other in feature_set(), mask in any::<u16>()) {
        let ov = overrides_from(&other, mask);
        match apply_overrides(&u, &ov) {
            Ok(once) => {
                let twice = apply_overrides(&once, &ov).unwrap();
                prop_assert_eq!(&twice, &once);
                prop_assert!(validate_unit(&once).is_valid());
                prop_assert_eq!(&once.id, &u.id);
            }
            Err(UnitError::IllegalOverride(v)) => {
                prop_assert!(!v.is_empty());
                let applied = ov.apply_to(&u.features);
                prop_assert!(!oracle_valid(u.pos, &applied));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn no_dual_outside_slovenian(l in locale(), n in -1_000i64..1_000) {
        let mut u = GrammarUnit::new("n", l, PartOfSpeech::Noun, FeatureSet::with_lemma("x"));
        u.agreement_source = Some("count".into());
        let number = resolve_agreement(&u, n, l).unwrap();
        if l != Locale::SlSi {
            prop_assert_ne!(number, Number::Dual);
            prop_assert_eq!(number == Number::Singular, n.abs() == 1);
        }
        prop_assert_eq!(number, resolve_agreement(&u, n, l).unwrap());
    }
}

/// Overrides copying the features of `f` selected by the bits of `mask`;
/// bits 12..=15 clear case, number, determiner and preposition instead.
fn overrides_from(f: &FeatureSet, mask: u16) -> FeatureOverrides {
    let bit = |i: u16| mask & (1 << i) != 0;
    let mut o = FeatureOverrides::default();
    if bit(0) {
        o.lemma = Some(f.lemma.clone());
    }
    if bit(1) {
        o.case = Some(f.case);
    }
    if bit(2) {
        o.number = Some(f.number);
    }
    if bit(3) {
        o.tense = Some(f.tense);
    }
    if bit(4) {
        o.person = Some(f.person);
    }
    if bit(5) {
        o.gender = Some(f.gender);
    }
    if bit(6) {
        o.preposition = Some(f.preposition.clone());
    }
    if bit(7) {
        o.adjectives = Some(f.adjectives.clone());
    }
    if bit(8) {
        o.numerals = Some(f.numerals);
    }
    if bit(9) {
        o.conjunctions = Some(f.conjunctions.clone());
    }
    if bit(10) {
        o.determiner = Some(f.determiner);
    }
    if bit(11) {
        o.pronoun_type = Some(f.pronoun_type);
    }
    if bit(12) {
        o.case = Some(None);
    }
    if bit(13) {
        o.number = Some(None);
    }
    if bit(14) {
        o.determiner = Some(None);
    }
    if bit(15) {
        o.preposition = Some(None);
    }
    o
}

#[test]
fn override_replaces_only_named_fields() {
    let mut f = FeatureSet::with_lemma("Samstag");
    f.case = Some(Case::Nominative);
    f.number = Some(Number::Singular);
    let base = GrammarUnit::new("u", Locale::DeDe, PartOfSpeech::Noun, f);
    let ov = FeatureOverrides {
        case: Some(Some(Case::Dative)),
        ..FeatureOverrides::default()
    };
    let out = apply_overrides(&base, &ov).unwrap();
    assert_eq!(out.features.case, Some(Case::Dative));
    assert_eq!(out.features.number, Some(Number::Singular));
    assert_eq!(base.features.case, Some(Case::Nominative));

    let tense = FeatureOverrides {
        tense: Some(Some(Tense::Past)),
        ..FeatureOverrides::default()
    };
    assert!(matches!(
        apply_overrides(&base, &tense),
        Err(UnitError::IllegalOverride(_))
    ));
}

#[test]
fn slovenian_count_table() {
    // Hand-enumerated: 1 singular, 2 dual, 3 and 4 plural, 5 and up plural
    // with a genitive construction; hundreds repeat the pattern.
    let table = [
        (0, Number::Plural, true),
        (1, Number::Singular, false),
        (2, Number::Dual, false),
        (3, Number::Plural, false),
        (4, Number::Plural, false),
        (5, Number::Plural, true),
        (11, Number::Plural, true),
        (101, Number::Singular, false),
        (102, Number::Dual, false),
        (103, Number::Plural, false),
        (-2, Number::Dual, false),
    ];
    for (n, number, genitive) in table {
        let c = count_form(n, Locale::SlSi);
        assert_eq!((c.number, c.quantified_genitive), (number, genitive), "count {n}");
    }
}

#[test]
fn agreement_requires_source() {
    let u = GrammarUnit::new("u", Locale::EnUs, PartOfSpeech::Noun, FeatureSet::with_lemma("point"));
    assert_eq!(
        resolve_agreement(&u, 2, Locale::EnUs),
        Err(UnitError::NoAgreementSource("u".into()))
    );
}

#[test]
fn canonical_json_omits_absent_features() {
    let mut f = FeatureSet::with_lemma("Samstag");
    f.case = Some(Case::Dative);
    let u = GrammarUnit::new("u1", Locale::DeDe, PartOfSpeech::Noun, f);
    assert_eq!(
        serde_json::to_string(&u).unwrap(),
        r#"{"id":"u1","locale":"de-DE","pos":"noun","features":{"lemma":"Samstag","case":"dative"}}"#
    );
}

proptest! {
    #[test]
    fn json_never_contains_null(u in unit()) {
        let json = serde_json::to_string(&u).unwrap();
        prop_assert!(!json.contains("null"));
        prop_assert_eq!(serde_json::from_str::<GrammarUnit>(&json).unwrap(), u);
    }
}
