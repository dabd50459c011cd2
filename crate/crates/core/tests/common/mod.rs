//! Proptest strategies shared by the integration tests.
#![allow(dead_code)]

use gramtx_core::features::{Numeral, NumeralType};
use gramtx_core::{
    Case, Determiner, FeatureSet, Gender, GrammarUnit, Locale, Number, PartOfSpeech, Person, PronounType, Tense,
};
use proptest::prelude::*;
use proptest::sample::select;

pub fn pos() -> impl Strategy<Value = PartOfSpeech> {
    select(PartOfSpeech::ALL.to_vec())
}

pub fn locale() -> impl Strategy<Value = Locale> {
    select(Locale::ALL.to_vec())
}

pub fn word() -> impl Strategy<Value = String> {
    "[A-Za-zäöüß]{1,8}"
}

/// Lemmas with up to three hyphen- or space-separated segments.
pub fn lemma() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 1..4).prop_flat_map(|parts| {
        let n = parts.len();
        prop::collection::vec(select(vec!["-", " "]), n - 1).prop_map(move |seps| {
            let mut s = parts[0].clone();
            for (sep, p) in seps.iter().zip(&parts[1..]) {
                s.push_str(sep);
                s.push_str(p);
            }
            s
        })
    })
}

pub fn numeral() -> impl Strategy<Value = Numeral> {
    (-5i64..200, select(NumeralType::ALL.to_vec())).prop_map(|(value, numeral_type)| Numeral { value, numeral_type })
}

/// Any feature set: every optional feature is independently present or
/// absent, regardless of part of speech.
pub fn feature_set() -> impl Strategy<Value = FeatureSet> {
    (
        (
            lemma(),
            prop::option::of(select(Case::ALL.to_vec())),
            prop::option::of(select(Number::ALL.to_vec())),
            prop::option::of(select(Tense::ALL.to_vec())),
            prop::option::of(select(Person::ALL.to_vec())),
            prop::option::of(select(Gender::ALL.to_vec())),
            prop::option::of(word()),
        ),
        (
            prop::collection::vec(word(), 0..3),
            prop::option::of(numeral()),
            prop::collection::vec(word(), 0..2),
            prop::option::of(select(Determiner::ALL.to_vec())),
            prop::option::of(select(PronounType::ALL.to_vec())),
            prop::option::of(0usize..4),
        ),
    )
        .prop_map(
            |(
                (lemma, case, number, tense, person, gender, preposition),
                (adjectives, numerals, conjunctions, determiner, pronoun_type, head_index),
            )| FeatureSet {
                lemma,
                case,
                number,
                tense,
                person,
                gender,
                preposition,
                adjectives,
                numerals,
                conjunctions,
                determiner,
                pronoun_type,
                head_index,
            },
        )
}

pub fn unit() -> impl Strategy<Value = GrammarUnit> {
    ("[a-z][a-z0-9_]{0,6}", locale(), pos(), feature_set())
        .prop_map(|(id, locale, pos, features)| GrammarUnit::new(id, locale, pos, features))
}

/// A feature set restricted to the features legal on `pos`.
pub fn legal_feature_set(pos: PartOfSpeech) -> impl Strategy<Value = FeatureSet> {
    feature_set().prop_map(move |mut f| {
        let noun = pos == PartOfSpeech::Noun;
        let nominal = pos != PartOfSpeech::Verb;
        if !nominal {
            f.case = None;
            f.preposition = None;
        }
        if pos != PartOfSpeech::Verb {
            f.tense = None;
            f.person = None;
        }
        if !noun {
            f.adjectives.clear();
            f.numerals = None;
            f.conjunctions.clear();
            f.determiner = None;
        }
        if pos != PartOfSpeech::Pronoun {
            f.pronoun_type = None;
        }
        f.head_index = None;
        f
    })
}

pub fn legal_unit() -> impl Strategy<Value = GrammarUnit> {
    (locale(), pos())
        .prop_flat_map(|(l, p)| (Just(l), Just(p), legal_feature_set(p)))
        .prop_map(|(l, p, f)| GrammarUnit::new("u", l, p, f))
}
