//! German article and adjective paradigms.

use crate::features::{Case, Determiner, Gender, Number};

/// Adjective declension class, selected by the article in front of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paradigm {
    Weak,
    Mixed,
    Strong,
}

impl Paradigm {
    pub fn for_determiner(det: Option<Determiner>, number: Number) -> Paradigm {
        match det {
            Some(Determiner::Definite) => Paradigm::Weak,
            // "ein" has no plural; plural indefinite NPs decline strong.
            Some(Determiner::Indefinite) if number == Number::Singular => Paradigm::Mixed,
            _ => Paradigm::Strong,
        }
    }
}

/// Row index into the paradigm tables: m, f, n, pl.
fn column(number: Number, gender: Gender) -> usize {
    if number != Number::Singular {
        return 3;
    }
    match gender {
        Gender::Masculine | Gender::Common => 0,
        Gender::Feminine => 1,
        Gender::Neuter => 2,
    }
}

fn row(case: Case) -> Option<usize> {
    match case {
        Case::Nominative => Some(0),
        Case::Accusative => Some(1),
        Case::Dative => Some(2),
        Case::Genitive => Some(3),
        _ => None,
    }
}

//                      m      f      n      pl
const DEFINITE: [[&str; 4]; 4] = [
    ["der", "die", "das", "die"], // nom
    ["den", "die", "das", "die"], // acc
    ["dem", "der", "dem", "den"], // dat
    ["des", "der", "des", "der"], // gen
];

const INDEFINITE: [[&str; 4]; 4] = [
    ["ein", "eine", "ein", ""],
    ["einen", "eine", "ein", ""],
    ["einem", "einer", "einem", ""],
    ["eines", "einer", "eines", ""],
];

const WEAK: [[&str; 4]; 4] = [
    ["e", "e", "e", "en"],
    ["en", "e", "e", "en"],
    ["en", "en", "en", "en"],
    ["en", "en", "en", "en"],
];

const MIXED: [[&str; 4]; 4] = [
    ["er", "e", "es", "en"],
    ["en", "e", "es", "en"],
    ["en", "en", "en", "en"],
    ["en", "en", "en", "en"],
];

const STRONG: [[&str; 4]; 4] = [
    ["er", "e", "es", "e"],
    ["en", "e", "es", "e"],
    ["em", "er", "em", "en"],
    ["en", "er", "en", "er"],
];

/// Article form, or `None` when no article is written (no determiner,
/// `none`, or indefinite plural). Cases outside nom/acc/dat/gen yield `None`.
pub fn article(det: Option<Determiner>, case: Case, number: Number, gender: Gender) -> Option<&'static str> {
    let table = match det? {
        Determiner::Definite => &DEFINITE,
        Determiner::Indefinite => &INDEFINITE,
        Determiner::None => return None,
    };
    let form = table[row(case)?][column(number, gender)];
    (!form.is_empty()).then_some(form)
}

pub fn adjective_ending(paradigm: Paradigm, case: Case, number: Number, gender: Gender) -> Option<&'static str> {
    let table = match paradigm {
        Paradigm::Weak => &WEAK,
        Paradigm::Mixed => &MIXED,
        Paradigm::Strong => &STRONG,
    };
    Some(table[row(case)?][column(number, gender)])
}

/// Stem for attaching an ending: drops a final `e` (weise → weis-en).
pub fn adjective_stem(lemma: &str) -> &str {
    lemma.strip_suffix('e').unwrap_or(lemma)
}

/// Regular dative plural from a plural stem: add `n` unless the stem
/// already ends in `n` or `s`.
pub fn dative_plural(plural_stem: &str) -> alloc::string::String {
    let mut s = alloc::string::String::from(plural_stem);
    if !(s.ends_with('n') || s.ends_with('s')) {
        s.push('n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definite_articles() {
        use Case::*;
        use Gender::*;
        let def = Some(Determiner::Definite);
        assert_eq!(article(def, Dative, Number::Singular, Masculine), Some("dem"));
        assert_eq!(article(def, Nominative, Number::Singular, Feminine), Some("die"));
        assert_eq!(article(def, Dative, Number::Plural, Neuter), Some("den"));
        assert_eq!(article(def, Genitive, Number::Singular, Neuter), Some("des"));
        assert_eq!(article(def, Locative, Number::Singular, Neuter), None);
    }

    #[test]
    fn indefinite_plural_is_empty() {
        let ind = Some(Determiner::Indefinite);
        assert_eq!(
            article(ind, Case::Dative, Number::Singular, Gender::Masculine),
            Some("einem")
        );
        assert_eq!(article(ind, Case::Dative, Number::Plural, Gender::Masculine), None);
        assert_eq!(article(None, Case::Dative, Number::Plural, Gender::Masculine), None);
        assert_eq!(
            article(
                Some(Determiner::None),
                Case::Nominative,
                Number::Singular,
                Gender::Masculine
            ),
            None
        );
    }

    #[test]
    fn adjective_paradigms() {
        use Case::*;
        use Gender::*;
        // mit 8 beeindruckenden Rückprallern
        let p = Paradigm::for_determiner(None, Number::Plural);
        assert_eq!(p, Paradigm::Strong);
        assert_eq!(adjective_ending(p, Dative, Number::Plural, Masculine), Some("en"));
        // der große Sieg / ein großer Sieg / großer Sieg
        assert_eq!(
            adjective_ending(Paradigm::Weak, Nominative, Number::Singular, Masculine),
            Some("e")
        );
        assert_eq!(
            adjective_ending(Paradigm::Mixed, Nominative, Number::Singular, Masculine),
            Some("er")
        );
        assert_eq!(
            adjective_ending(Paradigm::Strong, Dative, Number::Singular, Neuter),
            Some("em")
        );
        assert_eq!(
            Paradigm::for_determiner(Some(Determiner::Indefinite), Number::Plural),
            Paradigm::Strong
        );
    }

    #[test]
    fn dative_plural_rule() {
        assert_eq!(dative_plural("Rückpraller"), "Rückprallern");
        assert_eq!(dative_plural("Vorlagen"), "Vorlagen");
        assert_eq!(dative_plural("Steals"), "Steals");
    }
}
