//! Aggregation of a dependency parse fragment into a grammar unit.

use alloc::string::String;
use alloc::vec::Vec;

use super::conllu::{DependencyToken, ParseFragment, TreeError};
use crate::features::{
    compound_segments, Case, Determiner, FeatureSet, Gender, Number, Numeral, NumeralType, Person, PronounType, Tense,
};
use crate::unit::{Feature, GrammarUnit, PartOfSpeech};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AggregateError {
    #[error("invalid parse tree: {0}")]
    InvalidTree(#[from] TreeError),
    #[error("root part of speech `{upos}` does not map to a grammar unit")]
    UnsupportedHead { upos: String },
}

pub fn pos_for_upos(upos: &str) -> Option<PartOfSpeech> {
    match upos {
        "NOUN" | "PROPN" => Some(PartOfSpeech::Noun),
        "PRON" => Some(PartOfSpeech::Pronoun),
        "VERB" | "AUX" => Some(PartOfSpeech::Verb),
        _ => None,
    }
}

pub fn ud_case(v: &str) -> Option<Case> {
    Some(match v {
        "Nom" => Case::Nominative,
        "Gen" => Case::Genitive,
        "Dat" => Case::Dative,
        "Acc" => Case::Accusative,
        "Loc" => Case::Locative,
        "Ins" => Case::Instrumental,
        "Voc" => Case::Vocative,
        _ => return None,
    })
}

pub fn ud_number(v: &str) -> Option<Number> {
    Some(match v {
        "Sing" => Number::Singular,
        "Dual" => Number::Dual,
        "Plur" => Number::Plural,
        _ => return None,
    })
}

pub fn ud_gender(v: &str) -> Option<Gender> {
    Some(match v {
        "Masc" => Gender::Masculine,
        "Fem" => Gender::Feminine,
        "Neut" => Gender::Neuter,
        "Com" => Gender::Common,
        _ => return None,
    })
}

pub fn ud_tense(v: &str) -> Option<Tense> {
    Some(match v {
        "Past" => Tense::Past,
        "Pres" => Tense::Present,
        "Fut" => Tense::Future,
        _ => return None,
    })
}

pub fn ud_person(v: &str) -> Option<Person> {
    Some(match v {
        "1" => Person::First,
        "2" => Person::Second,
        "3" => Person::Third,
        _ => return None,
    })
}

pub fn ud_pronoun_type(v: &str) -> Option<PronounType> {
    Some(match v {
        "Prs" => PronounType::Personal,
        "Dem" => PronounType::Demonstrative,
        "Rel" => PronounType::Relative,
        "Int" => PronounType::Interrogative,
        _ => return None,
    })
}

fn ud_numeral(tok: &DependencyToken) -> Option<Numeral> {
    let numeral_type = match tok.feat("NumType")? {
        "Card" => NumeralType::Cardinal,
        "Ord" => NumeralType::Ordinal,
        _ => return None,
    };
    let digits = |s: &str| s.trim_end_matches('.').parse::<i64>().ok();
    let value = digits(&tok.form).or_else(|| digits(&tok.lemma))?;
    Some(Numeral { value, numeral_type })
}

/// Builds a grammar unit from the fragment's root and its direct dependents.
///
/// Head features are lifted only where the part of speech allows them.
/// Dependents contribute preposition (ADP), determiner (DET with
/// `Definite`), adjectives (ADJ, surface order), numeral (NUM or ordinal ADJ
/// with `NumType` and a digit form) and conjunctions (CCONJ). A proper-noun
/// head with `flat` or `compound` dependents takes the joined forms as lemma.
/// The unit id is the fragment's unit id.
pub fn aggregate_fragment(frag: &ParseFragment) -> Result<GrammarUnit, AggregateError> {
    frag.validate()?;
    let head = frag.root().ok_or(TreeError::RootCount(0))?;
    let pos = pos_for_upos(&head.upos).ok_or_else(|| AggregateError::UnsupportedHead {
        upos: head.upos.clone(),
    })?;
    let legal = |f: Feature| f.legal_on(pos);

    let mut features = FeatureSet::with_lemma(head.lemma.clone());
    if head.upos == "PROPN" {
        let mut parts: Vec<&DependencyToken> = frag
            .children(head.index)
            .filter(|t| matches!(t.deprel.as_str(), "flat" | "flat:name" | "compound"))
            .collect();
        if !parts.is_empty() {
            parts.push(head);
            parts.sort_by_key(|t| t.index);
            let forms: Vec<&str> = parts.iter().map(|t| t.form.as_str()).collect();
            features.lemma = forms.join(" ");
        }
    }
    if legal(Feature::Case) {
        features.case = head.feat("Case").and_then(ud_case);
    }
    features.number = head.feat("Number").and_then(ud_number);
    features.gender = head.feat("Gender").and_then(ud_gender);
    if legal(Feature::Tense) {
        features.tense = head.feat("Tense").and_then(ud_tense);
    }
    if legal(Feature::Person) {
        features.person = head.feat("Person").and_then(ud_person);
    }
    if legal(Feature::PronounType) {
        features.pronoun_type = head
            .feat("PronType")
            .and_then(ud_pronoun_type)
            .or_else(|| (head.feat("Poss") == Some("Yes")).then_some(PronounType::Possessive));
    }

    for child in frag.children(head.index) {
        match child.upos.as_str() {
            "ADP" if legal(Feature::Preposition) && features.preposition.is_none() => {
                features.preposition = Some(child.lemma.clone());
            }
            "DET" if legal(Feature::Determiner) && features.determiner.is_none() => {
                features.determiner = match child.feat("Definite") {
                    Some("Def") => Some(Determiner::Definite),
                    Some("Ind") => Some(Determiner::Indefinite),
                    _ => None,
                };
            }
            "NUM" | "ADJ" if legal(Feature::Numerals) && features.numerals.is_none() && ud_numeral(child).is_some() => {
                features.numerals = ud_numeral(child);
            }
            "ADJ" if legal(Feature::Adjectives) => features.adjectives.push(child.lemma.clone()),
            "CCONJ" if legal(Feature::Conjunctions) => features.conjunctions.push(child.lemma.clone()),
            _ => {}
        }
    }

    if head.form.contains('-') {
        let segments = compound_segments(&features.lemma).len();
        if segments > 1 {
            features.head_index = Some(segments - 1);
        }
    }

    let mut unit = GrammarUnit::new(frag.unit_id.clone(), frag.locale, pos, features);
    drop_locale_illegal(&mut unit);
    Ok(unit)
}

/// Clears a case the locale cannot express and dual outside dual locales.
fn drop_locale_illegal(unit: &mut GrammarUnit) {
    if let Some(c) = unit.features.case {
        if !unit.locale.legal_cases().contains(&c) {
            unit.features.case = None;
        }
    }
    if unit.features.number == Some(Number::Dual) && !unit.locale.has_dual() {
        unit.features.number = Some(Number::Plural);
    }
}

/// Lemma key used for gazetteer lookups.
pub fn gazetteer_key(lemma: &str) -> String {
    lemma.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}
