//! Table-based lexicon.
//!
//! Inflection keys:
//!
//! * nouns and pronouns: `<case>.<number>`, e.g. `dat.sg`, `nom.pl`, `loc.du`
//! * verbs: `<tense>.<person>.<number>`, e.g. `past.3.sg`, `pres.1.pl`
//! * adjectives carry no keys; German endings are attached to `stem`
//!   (defaulting to the lemma) by rule.
//!
//! Case abbreviations are `nom gen dat acc loc ins voc`, numbers `sg du pl`,
//! tenses `past pres fut`, persons `1 2 3`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::features::{Case, Gender, Number, Person, Tense};
use crate::locale::Locale;
use crate::unit::PartOfSpeech;

/// Lexicon category. Adjectives are lexicon-only; grammar units never
/// carry this POS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LexicalCategory {
    Noun,
    Pronoun,
    Verb,
    Adjective,
}

impl From<PartOfSpeech> for LexicalCategory {
    fn from(p: PartOfSpeech) -> Self {
        match p {
            PartOfSpeech::Noun => LexicalCategory::Noun,
            PartOfSpeech::Pronoun => LexicalCategory::Pronoun,
            PartOfSpeech::Verb => LexicalCategory::Verb,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub lemma: String,
    pub pos: LexicalCategory,
    pub locale: Locale,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inflection_table: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plural_stem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

pub fn nominal_key(case: Case, number: Number) -> String {
    format!("{}.{}", case.abbr(), number.abbr())
}

pub fn verbal_key(tense: Tense, person: Person, number: Number) -> String {
    format!("{}.{}.{}", tense.abbr(), person.abbr(), number.abbr())
}

/// Parsed inflection key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InflectionKey {
    Nominal(Case, Number),
    Verbal(Tense, Person, Number),
}

impl InflectionKey {
    pub fn parse(key: &str) -> Option<InflectionKey> {
        let parts: Vec<&str> = key.split('.').collect();
        match parts.as_slice() {
            [c, n] => Some(InflectionKey::Nominal(Case::from_abbr(c)?, Number::from_abbr(n)?)),
            [t, p, n] => Some(InflectionKey::Verbal(
                Tense::from_abbr(t)?,
                Person::from_abbr(p)?,
                Number::from_abbr(n)?,
            )),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("{locale} noun `{lemma}` has no gender")]
    MissingGender { lemma: String, locale: Locale },
    #[error("entry `{lemma}`: key `{key}` is malformed or illegal for {pos:?}")]
    BadKey {
        lemma: String,
        key: String,
        pos: LexicalCategory,
    },
    #[error("duplicate lexicon entry `{lemma}` ({pos:?}, {locale})")]
    Duplicate {
        lemma: String,
        pos: LexicalCategory,
        locale: Locale,
    },
}

impl LexiconEntry {
    pub fn validate(&self) -> Result<(), LexiconError> {
        if self.locale == Locale::DeDe && self.pos == LexicalCategory::Noun && self.gender.is_none() {
            return Err(LexiconError::MissingGender {
                lemma: self.lemma.clone(),
                locale: self.locale,
            });
        }
        for key in self.inflection_table.keys() {
            let ok = matches!(
                (self.pos, InflectionKey::parse(key)),
                (
                    LexicalCategory::Noun | LexicalCategory::Pronoun,
                    Some(InflectionKey::Nominal(..))
                ) | (LexicalCategory::Verb, Some(InflectionKey::Verbal(..)))
            );
            if !ok {
                return Err(LexiconError::BadKey {
                    lemma: self.lemma.clone(),
                    key: key.clone(),
                    pos: self.pos,
                });
            }
        }
        Ok(())
    }

    pub fn form(&self, key: &str) -> Option<&str> {
        self.inflection_table.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<(Locale, LexicalCategory, String), LexiconEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = LexiconEntry>>(entries: I) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::new();
        for e in entries {
            lex.insert(e)?;
        }
        Ok(lex)
    }

    pub fn insert(&mut self, entry: LexiconEntry) -> Result<(), LexiconError> {
        entry.validate()?;
        let key = (entry.locale, entry.pos, entry.lemma.clone());
        if self.entries.contains_key(&key) {
            return Err(LexiconError::Duplicate {
                lemma: entry.lemma,
                pos: entry.pos,
                locale: entry.locale,
            });
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn get(&self, locale: Locale, pos: LexicalCategory, lemma: &str) -> Option<&LexiconEntry> {
        self.entries.get(&(locale, pos, String::from(lemma)))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(pos: LexicalCategory, keys: &[(&str, &str)]) -> LexiconEntry {
        LexiconEntry {
            lemma: "x".into(),
            pos,
            locale: Locale::EnUs,
            gender: None,
            inflection_table: keys.iter().map(|(k, v)| ((*k).into(), (*v).into())).collect(),
            plural_stem: None,
            stem: None,
        }
    }

    #[test]
    fn key_grammar() {
        assert_eq!(
            InflectionKey::parse("dat.sg"),
            Some(InflectionKey::Nominal(Case::Dative, Number::Singular))
        );
        assert_eq!(
            InflectionKey::parse("past.3.sg"),
            Some(InflectionKey::Verbal(Tense::Past, Person::Third, Number::Singular))
        );
        assert_eq!(InflectionKey::parse("dative.sg"), None);
        assert_eq!(nominal_key(Case::Dative, Number::Plural), "dat.pl");
        assert_eq!(verbal_key(Tense::Past, Person::Third, Number::Singular), "past.3.sg");
    }

    #[test]
    fn verb_keys_rejected_on_nouns() {
        assert!(entry(LexicalCategory::Noun, &[("nom.sg", "x")]).validate().is_ok());
        assert!(entry(LexicalCategory::Noun, &[("past.3.sg", "x")]).validate().is_err());
        assert!(entry(LexicalCategory::Verb, &[("nom.sg", "x")]).validate().is_err());
        assert!(entry(LexicalCategory::Adjective, &[("nom.sg", "x")])
            .validate()
            .is_err());
    }

    #[test]
    fn german_nouns_need_gender() {
        let mut e = entry(LexicalCategory::Noun, &[]);
        e.locale = Locale::DeDe;
        assert!(matches!(e.validate(), Err(LexiconError::MissingGender { .. })));
        e.gender = Some(Gender::Masculine);
        assert!(e.validate().is_ok());
    }

    #[test]
    fn duplicates_rejected() {
        let e = entry(LexicalCategory::Noun, &[]);
        assert!(Lexicon::from_entries([e.clone(), e]).is_err());
    }
}
