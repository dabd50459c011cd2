use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! categories {
    ($($variant:ident => $label:literal),+ $(,)?) => {
        /// Post-edit change category. Serialized as its label.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum ChangeCategory {
            $($variant),+
        }

        impl ChangeCategory {
            /// All 25 categories: the 23 table rows in order, then the two
            /// structural ones.
            pub const ALL: [ChangeCategory; 25] = [$(ChangeCategory::$variant),+];

            pub fn label(self) -> &'static str {
                match self {
                    $(ChangeCategory::$variant => $label),+
                }
            }

            pub fn from_label(s: &str) -> Option<Self> {
                match s {
                    $($label => Some(ChangeCategory::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

categories! {
    AddAdjective => "add adjective",
    AddDeterminer => "add determiner",
    AddNoun => "add noun",
    AddNumber => "add number",
    AddPreposition => "add preposition",
    AddPronoun => "add pronoun",
    Capitalize => "capitalize",
    ChangePos => "change POS",
    ChangeAdjectiveLemma => "change adjective lemma",
    ChangeCase => "change case",
    ChangeConjunction => "change conjunction",
    ChangeDeterminer => "change determiner",
    ChangeNounLemma => "change noun lemma",
    ChangeNumber => "change number",
    ChangeNumeralType => "change numeral type",
    ChangePreposition => "change preposition",
    ChangeTense => "change tense",
    ChangeVerbLemma => "change verb lemma",
    Lowercase => "lowercase",
    MarkHead => "mark head",
    RemoveAdjective => "remove adjective",
    RemoveDeterminer => "remove determiner",
    RemovePreposition => "remove preposition",
    AddUnit => "add unit",
    RemoveUnit => "remove unit",
}

impl ChangeCategory {
    /// The 23 categories that form the rows of the per-language table.
    pub fn table_rows() -> &'static [ChangeCategory] {
        &Self::ALL[..23]
    }

    pub fn is_structural(self) -> bool {
        matches!(self, ChangeCategory::AddUnit | ChangeCategory::RemoveUnit)
    }
}

impl fmt::Display for ChangeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown change category `{0}`")]
pub struct UnknownCategory(pub alloc::string::String);

impl FromStr for ChangeCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChangeCategory::from_label(s).ok_or_else(|| UnknownCategory(s.into()))
    }
}

impl Serialize for ChangeCategory {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for ChangeCategory {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(d)?;
        ChangeCategory::from_label(&s).ok_or_else(|| serde::de::Error::custom(UnknownCategory(s.into_owned())))
    }
}
