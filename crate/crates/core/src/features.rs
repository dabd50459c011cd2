//! Feature value inventories and the feature container carried by a grammar unit.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

macro_rules! feature_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal / $abbr:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: [$name; feature_enum!(@count $($variant)+)] = [$($name::$variant),+];

            pub fn label(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }

            /// Short form used in lexicon inflection keys.
            pub fn abbr(self) -> &'static str {
                match self {
                    $($name::$variant => $abbr),+
                }
            }

            pub fn from_label(s: &str) -> Option<Self> {
                match s {
                    $($label => Some($name::$variant),)+
                    _ => None,
                }
            }

            pub fn from_abbr(s: &str) -> Option<Self> {
                match s {
                    $($abbr => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }
    };
    (@count $($t:ident)+) => { 0 $(+ feature_enum!(@one $t))+ };
    (@one $t:ident) => { 1 };
}

feature_enum!(Case {
    Nominative => "nominative" / "nom",
    Genitive => "genitive" / "gen",
    Dative => "dative" / "dat",
    Accusative => "accusative" / "acc",
    Locative => "locative" / "loc",
    Instrumental => "instrumental" / "ins",
    Vocative => "vocative" / "voc",
});

feature_enum!(Number {
    Singular => "singular" / "sg",
    Dual => "dual" / "du",
    Plural => "plural" / "pl",
});

feature_enum!(Tense {
    Past => "past" / "past",
    Present => "present" / "pres",
    Future => "future" / "fut",
});

feature_enum!(Person {
    First => "first" / "1",
    Second => "second" / "2",
    Third => "third" / "3",
});

feature_enum!(Gender {
    Masculine => "masculine" / "m",
    Feminine => "feminine" / "f",
    Neuter => "neuter" / "n",
    Common => "common" / "c",
});

feature_enum!(Determiner {
    Definite => "definite" / "def",
    Indefinite => "indefinite" / "indef",
    None => "none" / "none",
});

feature_enum!(PronounType {
    Personal => "personal" / "prs",
    Possessive => "possessive" / "poss",
    Demonstrative => "demonstrative" / "dem",
    Relative => "relative" / "rel",
    Interrogative => "interrogative" / "int",
});

feature_enum!(NumeralType {
    Cardinal => "cardinal" / "card",
    Ordinal => "ordinal" / "ord",
});

impl Determiner {
    /// `none` and an absent determiner both mean "no article".
    pub fn is_article(self) -> bool {
        !matches!(self, Determiner::None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Numeral {
    pub value: i64,
    pub numeral_type: NumeralType,
}

/// Grammatical settings of one unit. Absent optionals and empty lists are
/// omitted from the canonical JSON form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureSet {
    pub lemma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tense: Option<Tense>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub person: Option<Person>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adjectives: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerals: Option<Numeral>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjunctions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determiner: Option<Determiner>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pronoun_type: Option<PronounType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_index: Option<usize>,
}

impl FeatureSet {
    pub fn with_lemma(lemma: impl Into<String>) -> Self {
        FeatureSet {
            lemma: lemma.into(),
            ..FeatureSet::default()
        }
    }

    /// The article actually requested, treating `none` as absent.
    pub fn article(&self) -> Option<Determiner> {
        self.determiner.filter(|d| d.is_article())
    }
}

/// Splits a lemma into compound segments on `-` and ` ` jointly.
/// Returns byte ranges into `lemma`.
pub fn compound_segments(lemma: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in lemma.char_indices() {
        if c == '-' || c == ' ' {
            if i > start {
                out.push((start, i));
            }
            start = i + c.len_utf8();
        }
    }
    if start < lemma.len() {
        out.push((start, lemma.len()));
    }
    out
}

/// Field-wise partial replacement for a [`FeatureSet`].
///
/// For optional features `Some(None)` clears the value (JSON `null`) and
/// `None` leaves it untouched (field absent).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub case: Option<Option<Case>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub number: Option<Option<Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub tense: Option<Option<Tense>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub person: Option<Option<Person>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub gender: Option<Option<Gender>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub preposition: Option<Option<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjectives: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub numerals: Option<Option<Numeral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjunctions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub determiner: Option<Option<Determiner>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub pronoun_type: Option<Option<PronounType>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "double_option")]
    pub head_index: Option<Option<usize>>,
}

impl FeatureOverrides {
    pub fn is_empty(&self) -> bool {
        *self == FeatureOverrides::default()
    }

    pub fn apply_to(&self, base: &FeatureSet) -> FeatureSet {
        fn pick<T: Clone>(o: &Option<T>, b: &T) -> T {
            o.as_ref().unwrap_or(b).clone()
        }
        FeatureSet {
            lemma: pick(&self.lemma, &base.lemma),
            case: pick(&self.case, &base.case),
            number: pick(&self.number, &base.number),
            tense: pick(&self.tense, &base.tense),
            person: pick(&self.person, &base.person),
            gender: pick(&self.gender, &base.gender),
            preposition: pick(&self.preposition, &base.preposition),
            adjectives: pick(&self.adjectives, &base.adjectives),
            numerals: pick(&self.numerals, &base.numerals),
            conjunctions: pick(&self.conjunctions, &base.conjunctions),
            determiner: pick(&self.determiner, &base.determiner),
            pronoun_type: pick(&self.pronoun_type, &base.pronoun_type),
            head_index: pick(&self.head_index, &base.head_index),
        }
    }
}

mod double_option {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: Serialize, S: Serializer>(v: &Option<Option<T>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(inner) => inner.serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T: Deserialize<'de>, D: Deserializer<'de>>(d: D) -> Result<Option<Option<T>>, D::Error> {
        Option::<T>::deserialize(d).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments_split_on_hyphen_and_space() {
        let lemma = "Double-Double-Ergebnis";
        let segs: Vec<&str> = compound_segments(lemma)
            .into_iter()
            .map(|(s, e)| &lemma[s..e])
            .collect();
        assert_eq!(segs, ["Double", "Double", "Ergebnis"]);
        assert_eq!(compound_segments("Denver Nuggets").len(), 2);
        assert_eq!(compound_segments("Samstag").len(), 1);
        assert!(compound_segments("").is_empty());
    }

    #[test]
    fn canonical_json_omits_absent_fields() {
        let mut f = FeatureSet::with_lemma("Samstag");
        f.case = Some(Case::Dative);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"lemma":"Samstag","case":"dative"}"#);
    }

    #[test]
    fn overrides_distinguish_clear_from_absent() {
        let o: FeatureOverrides = serde_json::from_str(r#"{"case":"dative","preposition":null}"#).unwrap();
        assert_eq!(o.case, Some(Some(Case::Dative)));
        assert_eq!(o.preposition, Some(None));
        assert_eq!(o.number, None);
        let back = serde_json::to_string(&o).unwrap();
        assert_eq!(back, r#"{"case":"dative","preposition":null}"#);
    }

    #[test]
    fn labels_and_abbreviations_parse_back() {
        for c in Case::ALL {
            assert_eq!(Case::from_label(c.label()), Some(c));
            assert_eq!(Case::from_abbr(c.abbr()), Some(c));
        }
        assert_eq!(Person::from_abbr("3"), Some(Person::Third));
    }
}
