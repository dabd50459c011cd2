use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::features::Case;

/// One of the shipped target/source languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Locale {
    #[serde(rename = "en-US")]
    EnUs,
    #[serde(rename = "de-DE")]
    DeDe,
    #[serde(rename = "es-ES")]
    EsEs,
    #[serde(rename = "fr-FR")]
    FrFr,
    #[serde(rename = "pl-PL")]
    PlPl,
    #[serde(rename = "pt-BR")]
    PtBr,
    #[serde(rename = "sl-SI")]
    SlSi,
    #[serde(rename = "zh-CN")]
    ZhCn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Capability {
    FullRealization,
    TransferOnly,
}

const FULL: &[Capability] = &[Capability::FullRealization, Capability::TransferOnly];
const TRANSFER: &[Capability] = &[Capability::TransferOnly];

const CASES_EN: &[Case] = &[Case::Nominative, Case::Genitive, Case::Dative, Case::Accusative];
const CASES_DE: &[Case] = &[Case::Nominative, Case::Genitive, Case::Dative, Case::Accusative];
const CASES_ROMANCE: &[Case] = &[Case::Nominative, Case::Dative, Case::Accusative];
const CASES_PL: &[Case] = &Case::ALL;
const CASES_SL: &[Case] = &[
    Case::Nominative,
    Case::Genitive,
    Case::Dative,
    Case::Accusative,
    Case::Locative,
    Case::Instrumental,
];

impl Locale {
    pub const ALL: [Locale; 8] = [
        Locale::EnUs,
        Locale::DeDe,
        Locale::EsEs,
        Locale::FrFr,
        Locale::PlPl,
        Locale::PtBr,
        Locale::SlSi,
        Locale::ZhCn,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Locale::EnUs => "en-US",
            Locale::DeDe => "de-DE",
            Locale::EsEs => "es-ES",
            Locale::FrFr => "fr-FR",
            Locale::PlPl => "pl-PL",
            Locale::PtBr => "pt-BR",
            Locale::SlSi => "sl-SI",
            Locale::ZhCn => "zh-CN",
        }
    }

    pub fn capabilities(self) -> &'static [Capability] {
        match self {
            Locale::EnUs | Locale::DeDe => FULL,
            _ => TRANSFER,
        }
    }

    pub fn has_full_realization(self) -> bool {
        self.capabilities().contains(&Capability::FullRealization)
    }

    /// Cases this locale can express. The inventory is the closed
    /// seven-value superset; Chinese marks no case at all.
    pub fn legal_cases(self) -> &'static [Case] {
        match self {
            Locale::EnUs => CASES_EN,
            Locale::DeDe => CASES_DE,
            Locale::EsEs | Locale::FrFr | Locale::PtBr => CASES_ROMANCE,
            Locale::PlPl => CASES_PL,
            Locale::SlSi => CASES_SL,
            Locale::ZhCn => &[],
        }
    }

    pub fn has_dual(self) -> bool {
        self == Locale::SlSi
    }
}

impl fmt::Display for Locale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown locale `{0}`")]
pub struct UnknownLocale(pub alloc::string::String);

impl FromStr for Locale {
    type Err = UnknownLocale;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Locale::ALL
            .iter()
            .copied()
            .find(|l| l.code() == s)
            .ok_or_else(|| UnknownLocale(s.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_realization_only_for_english_and_german() {
        for l in Locale::ALL {
            let full = matches!(l, Locale::EnUs | Locale::DeDe);
            assert_eq!(l.has_full_realization(), full, "{l}");
            assert!(l.capabilities().contains(&Capability::TransferOnly));
        }
    }

    #[test]
    fn codes_round_trip() {
        for l in Locale::ALL {
            assert_eq!(l.code().parse::<Locale>().unwrap(), l);
            let json = serde_json::to_string(&l).unwrap();
            assert_eq!(json, alloc::format!("\"{}\"", l.code()));
        }
        assert!("xx-XX".parse::<Locale>().is_err());
    }

    #[test]
    fn german_has_four_cases_chinese_none() {
        assert_eq!(Locale::DeDe.legal_cases().len(), 4);
        assert!(Locale::ZhCn.legal_cases().is_empty());
        assert_eq!(Locale::PlPl.legal_cases().len(), 7);
    }
}
