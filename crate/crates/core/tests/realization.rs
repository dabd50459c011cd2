//! Surface realization of counted phrases and German contractions.

use std::collections::BTreeMap;
use std::path::PathBuf;

use gramtx_core::features::{Numeral, NumeralType};
use gramtx_core::realize::lexicon::{LexicalCategory, Lexicon, LexiconEntry};
use gramtx_core::realize::RealizationContext;
use gramtx_core::{Case, Determiner, FeatureSet, Gender, GrammarUnit, Locale, Number, PartOfSpeech};
use proptest::prelude::*;
use proptest::sample::select;

fn entries(locale: &str) -> Vec<LexiconEntry> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/lexicon/{locale}.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn ctx(locale: Locale) -> RealizationContext {
    RealizationContext::new(locale, Lexicon::from_entries(entries(locale.code())).unwrap())
}

/// Form listed in the fixture lexicon for `lemma` at `key`.
fn table_form(locale: Locale, lemma: &str, key: &str) -> String {
    entries(locale.code())
        .into_iter()
        .find(|e| e.lemma == lemma)
        .and_then(|e| e.inflection_table.get(key).cloned())
        .unwrap()
}

fn counted(locale: Locale, lemma: &str, case: Option<Case>, adjectives: &[&str]) -> GrammarUnit {
    let mut f = FeatureSet::with_lemma(lemma);
    f.case = case;
    f.numerals = Some(Numeral {
        value: 0,
        numeral_type: NumeralType::Cardinal,
    });
    f.adjectives = adjectives.iter().map(|a| a.to_string()).collect();
    let mut u = GrammarUnit::new("n", locale, PartOfSpeech::Noun, f);
    u.agreement_source = Some("count".into());
    u
}

const SWEEP: [i64; 5] = [0, 1, 2, 8, 26];

#[test]
fn english_counts_agree() {
    let ctx = ctx(Locale::EnUs);
    for lemma in ["point", "rebound", "assist"] {
        let u = counted(Locale::EnUs, lemma, None, &[]);
        for n in SWEEP {
            let key = if n == 1 { "nom.sg" } else { "nom.pl" };
            let expected = format!("{n} {}", table_form(Locale::EnUs, lemma, key));
            assert_eq!(ctx.realize(&u, Some(n)).unwrap(), expected);
        }
    }
}

/// Strong adjective endings for a masculine noun without an article.
fn strong_masculine(case: Case, number: Number) -> &'static str {
    match (case, number) {
        (Case::Nominative, Number::Singular) => "er",
        (Case::Dative, Number::Singular) => "em",
        (Case::Nominative, _) => "e",
        (Case::Dative, _) => "en",
        _ => unreachable!(),
    }
}

#[test]
fn german_counts_agree() {
    let ctx = ctx(Locale::DeDe);
    for lemma in ["Punkt", "Rückpraller"] {
        for case in [Case::Nominative, Case::Dative] {
            for adjectives in [&[][..], &["beeindruckend"][..]] {
                let u = counted(Locale::DeDe, lemma, Some(case), adjectives);
                for n in SWEEP {
                    let number = if n == 1 { Number::Singular } else { Number::Plural };
                    let key = format!(
                        "{}.{}",
                        if case == Case::Dative { "dat" } else { "nom" },
                        if number == Number::Singular { "sg" } else { "pl" }
                    );
                    let head = table_form(Locale::DeDe, lemma, &key);
                    let expected = match adjectives.first() {
                        Some(a) => format!("{n} {a}{} {head}", strong_masculine(case, number)),
                        None => format!("{n} {head}"),
                    };
                    let got = ctx.realize(&u, Some(n)).unwrap();
                    assert_eq!(got, expected);
                    if case == Case::Dative && number == Number::Plural {
                        assert!(got.ends_with('n'), "{got}");
                    }
                }
            }
        }
    }
    let u = counted(Locale::DeDe, "Rückpraller", Some(Case::Dative), &["beeindruckend"]);
    assert_eq!(ctx.realize(&u, Some(8)).unwrap(), "8 beeindruckenden Rückprallern");
}

#[test]
fn german_dative_plural_from_stem() {
    let mut lex = Lexicon::new();
    for (lemma, stem) in [("Tor", "Tore"), ("Auto", "Autos"), ("Frau", "Frauen")] {
        lex.insert(LexiconEntry {
            lemma: lemma.into(),
            pos: LexicalCategory::Noun,
            locale: Locale::DeDe,
            gender: Some(Gender::Neuter),
            inflection_table: BTreeMap::new(),
            plural_stem: Some(stem.into()),
            stem: None,
        })
        .unwrap();
    }
    let ctx = RealizationContext::new(Locale::DeDe, lex);
    for (lemma, expected) in [("Tor", "26 Toren"), ("Auto", "26 Autos"), ("Frau", "26 Frauen")] {
        let u = counted(Locale::DeDe, lemma, Some(Case::Dative), &[]);
        assert_eq!(ctx.realize(&u, Some(26)).unwrap(), expected);
    }
}

#[test]
fn ordinal_keeps_its_number() {
    let ctx = ctx(Locale::EnUs);
    let mut u = counted(Locale::EnUs, "gameday", None, &[]);
    u.features.numerals = Some(Numeral {
        value: 0,
        numeral_type: NumeralType::Ordinal,
    });
    u.features.number = Some(Number::Singular);
    u.features.determiner = Some(Determiner::Definite);
    assert_eq!(ctx.realize(&u, Some(2)).unwrap(), "the 2nd gameday");
}

/// Definite article by case and by masculine, feminine, neuter, plural.
fn definite(case: Case, number: Number, gender: Gender) -> &'static str {
    let col = if number == Number::Singular {
        match gender {
            Gender::Masculine => 0,
            Gender::Feminine => 1,
            Gender::Neuter => 2,
            Gender::Common => unreachable!("German nouns are m, f or n"),
        }
    } else {
        3
    };
    let rows = [
        ["der", "die", "das", "die"],
        ["des", "der", "des", "der"],
        ["dem", "der", "dem", "den"],
        ["den", "die", "das", "die"],
    ];
    let row = match case {
        Case::Nominative => 0,
        Case::Genitive => 1,
        Case::Dative => 2,
        Case::Accusative => 3,
        _ => unreachable!("not a German case"),
    };
    rows[row][col]
}

fn contracted(prep: &str, article: &str) -> Option<&'static str> {
    [
        ("an", "dem", "am"),
        ("an", "das", "ans"),
        ("in", "dem", "im"),
        ("in", "das", "ins"),
        ("zu", "dem", "zum"),
        ("zu", "der", "zur"),
        ("von", "dem", "vom"),
        ("bei", "dem", "beim"),
    ]
    .into_iter()
    .find(|(p, a, _)| *p == prep && *a == article)
    .map(|(_, _, c)| c)
}

fn gendered_nouns() -> Vec<(String, Gender)> {
    entries("de-DE")
        .into_iter()
        .filter(|e| e.pos == LexicalCategory::Noun)
        .filter_map(|e| e.gender.map(|g| (e.lemma, g)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn german_preposition_article_contracts(
        (lemma, gender) in select(gendered_nouns()),
        prep in select(vec!["an", "in", "zu", "von", "bei", "mit", "für"]),
        case in select(vec![Case::Nominative, Case::Genitive, Case::Dative, Case::Accusative]),
        number in select(vec![Number::Singular, Number::Plural]),
    ) {
        let mut f = FeatureSet::with_lemma(lemma.clone());
        f.preposition = Some(prep.to_string());
        f.determiner = Some(Determiner::Definite);
        f.case = Some(case);
        f.number = Some(number);
        let u = GrammarUnit::new("u", Locale::DeDe, PartOfSpeech::Noun, f);
        let got = ctx(Locale::DeDe).realize(&u, None).unwrap();
        let article = definite(case, number, gender);
        let lead = match contracted(prep, article) {
            Some(c) => format!("{c} "),
            None => format!("{prep} {article} "),
        };
        prop_assert!(got.starts_with(&lead), "{} does not start with {}", got, lead);
        for (p, a) in [("an", "dem"), ("in", "dem"), ("zu", "dem"), ("zu", "der"), ("von", "dem"), ("bei", "dem")] {
            prop_assert!(!got.contains(&format!("{p} {a} ")), "{}", got);
        }
    }
}

#[test]
fn saturday_in_the_dative() {
    let mut f = FeatureSet::with_lemma("Samstag");
    f.preposition = Some("an".into());
    f.determiner = Some(Determiner::Definite);
    f.case = Some(Case::Dative);
    f.number = Some(Number::Singular);
    let u = GrammarUnit::new("date", Locale::DeDe, PartOfSpeech::Noun, f);
    assert_eq!(ctx(Locale::DeDe).realize(&u, None).unwrap(), "am Samstag");
}
