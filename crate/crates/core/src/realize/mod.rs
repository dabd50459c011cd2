//! Surface realization of grammar units.
//!
//! English and German are fully realized: articles, case endings, adjective
//! agreement, preposition–article contraction and verb conjugation. Chinese
//! is passed through (lemma with preposition). The remaining transfer-only
//! locales are rendered from lexicon forms where available, without
//! articles.

pub mod german;
pub mod lexicon;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::features::{compound_segments, Case, FeatureSet, Gender, Number, NumeralType, Person, Tense};
use crate::locale::Locale;
use crate::unit::{
    count_form, locale_violations, validate_unit, GrammarUnit, LocaleViolation, PartOfSpeech, Violation,
};

pub use lexicon::{InflectionKey, LexicalCategory, Lexicon, LexiconEntry, LexiconError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error("no inflection `{key}` for `{lemma}`")]
    MissingInflection { lemma: String, key: String },
    #[error("`{lemma}` is not in the {locale} lexicon")]
    MissingLexeme { lemma: String, locale: Locale },
    #[error("unit is illegal: {0:?}")]
    IllegalUnit(Vec<Violation>),
    #[error("unit not expressible in {locale}: {violation}")]
    NotInLocale { locale: Locale, violation: LocaleViolation },
    #[error("expected a {expected} unit, got {found}")]
    WrongPos {
        expected: &'static str,
        found: PartOfSpeech,
    },
    #[error("cannot determine gender of `{lemma}`")]
    MissingGender { lemma: String },
    #[error("head segment of `{lemma}` does not match lexicon entry `{entry}`")]
    HeadMismatch { lemma: String, entry: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("contraction rule for ({preposition}, {determiner}) defined twice")]
pub struct DuplicateContraction {
    pub preposition: String,
    pub determiner: String,
}

/// `(preposition, article form) → contracted form`; injective on the left.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContractionRules {
    rules: BTreeMap<(String, String), String>,
}

impl ContractionRules {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, prep: &str, det: &str, contracted: &str) -> Result<(), DuplicateContraction> {
        let key = (prep.to_string(), det.to_string());
        if self.rules.contains_key(&key) {
            return Err(DuplicateContraction {
                preposition: key.0,
                determiner: key.1,
            });
        }
        self.rules.insert(key, contracted.to_string());
        Ok(())
    }

    pub fn from_rules<'a, I>(rules: I) -> Result<Self, DuplicateContraction>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let mut out = ContractionRules::new();
        for (p, d, c) in rules {
            out.add(p, d, c)?;
        }
        Ok(out)
    }

    /// Standard contractions for a locale.
    pub fn defaults(locale: Locale) -> Self {
        let rules: &[(&str, &str, &str)] = match locale {
            Locale::DeDe => &[
                ("an", "dem", "am"),
                ("an", "das", "ans"),
                ("in", "dem", "im"),
                ("in", "das", "ins"),
                ("zu", "dem", "zum"),
                ("zu", "der", "zur"),
                ("von", "dem", "vom"),
                ("bei", "dem", "beim"),
            ],
            _ => &[],
        };
        Self::from_rules(rules.iter().copied()).expect("built-in rules are injective")
    }

    pub fn get(&self, prep: &str, det: &str) -> Option<&str> {
        self.rules.get(&(prep.to_string(), det.to_string())).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct RealizationContext {
    pub locale: Locale,
    pub lexicon: Lexicon,
    pub contractions: ContractionRules,
}

impl RealizationContext {
    pub fn new(locale: Locale, lexicon: Lexicon) -> Self {
        RealizationContext {
            locale,
            lexicon,
            contractions: ContractionRules::defaults(locale),
        }
    }

    pub fn with_contractions(mut self, contractions: ContractionRules) -> Self {
        self.contractions = contractions;
        self
    }

    /// Realizes any unit, dispatching on its part of speech.
    pub fn realize(&self, unit: &GrammarUnit, count: Option<i64>) -> Result<String, RealizeError> {
        match unit.pos {
            PartOfSpeech::Verb => realize_verb_counted(unit, self, count),
            PartOfSpeech::Noun | PartOfSpeech::Pronoun => realize_np(unit, self, count),
        }
    }
}

fn lookup_nominal(entry: &LexiconEntry, case: Case, number: Number) -> Option<String> {
    let key = lexicon::nominal_key(case, number);
    if let Some(f) = entry.form(&key) {
        return Some(f.to_string());
    }
    if entry.locale == Locale::EnUs && case != Case::Nominative {
        if let Some(f) = entry.form(&lexicon::nominal_key(Case::Nominative, number)) {
            return Some(f.to_string());
        }
    }
    if number == Number::Plural {
        if let Some(stem) = &entry.plural_stem {
            return Some(if entry.locale == Locale::DeDe && case == Case::Dative {
                german::dative_plural(stem)
            } else {
                stem.clone()
            });
        }
    }
    None
}

/// Inflects a noun (or pronoun) for the case and number in `features`.
///
/// When `features.lemma` is a compound whose head segment (by
/// `head_index`) is `entry`, only that segment is inflected.
pub fn inflect_noun(entry: &LexiconEntry, features: &FeatureSet) -> Result<String, RealizeError> {
    let case = features.case.unwrap_or(Case::Nominative);
    let number = features.number.unwrap_or(Number::Singular);
    let missing = || RealizeError::MissingInflection {
        lemma: entry.lemma.clone(),
        key: lexicon::nominal_key(case, number),
    };

    let lemma = features.lemma.as_str();
    if lemma.is_empty() || lemma == entry.lemma {
        return lookup_nominal(entry, case, number).ok_or_else(missing);
    }
    let segments = compound_segments(lemma);
    let head = features
        .head_index
        .and_then(|i| segments.get(i).copied())
        .filter(|&(s, e)| lemma[s..e] == entry.lemma)
        .ok_or_else(|| RealizeError::HeadMismatch {
            lemma: lemma.to_string(),
            entry: entry.lemma.clone(),
        })?;
    let form = lookup_nominal(entry, case, number).ok_or_else(missing)?;
    Ok(format!("{}{}{}", &lemma[..head.0], form, &lemma[head.1..]))
}

/// Finds the entry for a nominal lemma, falling back to the marked compound
/// head when the whole compound is not listed.
fn nominal_entry<'a>(
    ctx: &'a RealizationContext,
    cat: LexicalCategory,
    features: &FeatureSet,
) -> Result<&'a LexiconEntry, RealizeError> {
    let lemma = features.lemma.as_str();
    if let Some(e) = ctx.lexicon.get(ctx.locale, cat, lemma) {
        return Ok(e);
    }
    if let Some(i) = features.head_index {
        if let Some(&(s, e)) = compound_segments(lemma).get(i) {
            if let Some(entry) = ctx.lexicon.get(ctx.locale, cat, &lemma[s..e]) {
                return Ok(entry);
            }
        }
    }
    Err(RealizeError::MissingLexeme {
        lemma: lemma.to_string(),
        locale: ctx.locale,
    })
}

pub fn render_numeral(value: i64, kind: NumeralType, locale: Locale) -> String {
    match kind {
        NumeralType::Cardinal => value.to_string(),
        NumeralType::Ordinal => match locale {
            Locale::EnUs => {
                let n = value.unsigned_abs();
                let suffix = match (n % 10, n % 100) {
                    (_, 11..=13) => "th",
                    (1, _) => "st",
                    (2, _) => "nd",
                    (3, _) => "rd",
                    _ => "th",
                };
                format!("{value}{suffix}")
            }
            Locale::EsEs | Locale::PtBr => format!("{value}º"),
            Locale::FrFr => {
                if value == 1 {
                    "1er".to_string()
                } else {
                    format!("{value}e")
                }
            }
            Locale::ZhCn => format!("第{value}"),
            Locale::DeDe | Locale::PlPl | Locale::SlSi => format!("{value}."),
        },
    }
}

fn check_unit(unit: &GrammarUnit, ctx: &RealizationContext) -> Result<(), RealizeError> {
    let report = validate_unit(unit);
    if !report.is_valid() {
        return Err(RealizeError::IllegalUnit(report.violations));
    }
    let mut probe = unit.clone();
    probe.locale = ctx.locale;
    if let Some(&violation) = locale_violations(&probe).first() {
        return Err(RealizeError::NotInLocale {
            locale: ctx.locale,
            violation,
        });
    }
    Ok(())
}

/// Features after binding the runtime count: a numeral, if present, takes
/// the count as its value, and number follows the count rule unless the
/// numeral is ordinal ("the 2nd gameday" stays singular).
fn bound_features(unit: &GrammarUnit, locale: Locale, count: Option<i64>) -> FeatureSet {
    let mut f = unit.features.clone();
    if let (Some(n), Some(_)) = (count, &unit.agreement_source) {
        let ordinal = f.numerals.is_some_and(|num| num.numeral_type == NumeralType::Ordinal);
        if !ordinal {
            f.number = Some(count_form(n, locale).number);
        }
        if let Some(num) = f.numerals.as_mut() {
            num.value = n;
        }
    }
    f
}

fn english_article(det: crate::features::Determiner, number: Number, next: &str) -> Option<&'static str> {
    use crate::features::Determiner;
    match det {
        Determiner::Definite => Some("the"),
        Determiner::Indefinite if number == Number::Singular => {
            let vowel = next
                .chars()
                .next()
                .is_some_and(|c| matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u'));
            Some(if vowel { "an" } else { "a" })
        }
        _ => None,
    }
}

fn join_tokens(tokens: &[String], ctx: &RealizationContext, prep_at: Option<usize>) -> String {
    let mut out: Vec<&str> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if Some(i) == prep_at && i + 1 < tokens.len() {
            if let Some(c) = ctx.contractions.get(&tokens[i], &tokens[i + 1]) {
                out.push(c);
                i += 2;
                continue;
            }
        }
        out.push(&tokens[i]);
        i += 1;
    }
    out.join(" ")
}

/// Realizes a noun or pronoun phrase:
/// `[preposition] [article] [numeral] [adjectives…] head`, then contracts an
/// adjacent preposition and article.
pub fn realize_np(unit: &GrammarUnit, ctx: &RealizationContext, count: Option<i64>) -> Result<String, RealizeError> {
    if unit.pos == PartOfSpeech::Verb {
        return Err(RealizeError::WrongPos {
            expected: "noun or pronoun",
            found: unit.pos,
        });
    }
    check_unit(unit, ctx)?;
    let f = bound_features(unit, ctx.locale, count);
    let numeral = f.numerals.map(|n| render_numeral(n.value, n.numeral_type, ctx.locale));

    match ctx.locale {
        Locale::EnUs | Locale::DeDe => {}
        Locale::ZhCn => {
            let mut s = String::new();
            s.extend(f.preposition.iter().map(String::as_str));
            s.extend(numeral.as_deref());
            s.extend(f.adjectives.iter().map(String::as_str));
            s.push_str(&f.lemma);
            return Ok(s);
        }
        _ => return Ok(transfer_only_np(unit.pos, &f, ctx, numeral)),
    }

    let cat = LexicalCategory::from(unit.pos);
    let entry = nominal_entry(ctx, cat, &f)?;
    let head = inflect_noun(entry, &f)?;
    let case = f.case.unwrap_or(Case::Nominative);
    let number = f.number.unwrap_or(Number::Singular);

    let mut tokens: Vec<String> = Vec::new();
    let prep_at = f.preposition.as_ref().map(|p| {
        tokens.push(p.clone());
        0
    });

    if ctx.locale == Locale::DeDe {
        let gender = entry.gender.or(f.gender);
        let needs_gender = number == Number::Singular && (f.article().is_some() || !f.adjectives.is_empty());
        let gender = match gender {
            Some(g) => g,
            None if !needs_gender => Gender::Masculine,
            None => return Err(RealizeError::MissingGender { lemma: f.lemma.clone() }),
        };
        if let Some(a) = german::article(f.determiner, case, number, gender) {
            tokens.push(a.to_string());
        }
        tokens.extend(numeral);
        let paradigm = german::Paradigm::for_determiner(f.determiner, number);
        for adj in &f.adjectives {
            let stem = ctx
                .lexicon
                .get(ctx.locale, LexicalCategory::Adjective, adj)
                .and_then(|e| e.stem.as_deref())
                .unwrap_or_else(|| german::adjective_stem(adj));
            let ending = german::adjective_ending(paradigm, case, number, gender).ok_or_else(|| {
                RealizeError::MissingInflection {
                    lemma: adj.clone(),
                    key: lexicon::nominal_key(case, number),
                }
            })?;
            tokens.push(format!("{stem}{ending}"));
        }
    } else {
        let first_after = numeral
            .as_deref()
            .or(f.adjectives.first().map(String::as_str))
            .unwrap_or(&head);
        if let Some(a) = f.article().and_then(|d| english_article(d, number, first_after)) {
            tokens.push(a.to_string());
        }
        tokens.extend(numeral);
        tokens.extend(f.adjectives.iter().cloned());
    }
    tokens.push(head);
    Ok(join_tokens(&tokens, ctx, prep_at))
}

fn transfer_only_np(pos: PartOfSpeech, f: &FeatureSet, ctx: &RealizationContext, numeral: Option<String>) -> String {
    let head = ctx
        .lexicon
        .get(ctx.locale, LexicalCategory::from(pos), &f.lemma)
        .and_then(|e| {
            e.form(&lexicon::nominal_key(
                f.case.unwrap_or(Case::Nominative),
                f.number.unwrap_or(Number::Singular),
            ))
        })
        .unwrap_or(&f.lemma)
        .to_string();
    let mut tokens: Vec<String> = Vec::new();
    tokens.extend(f.preposition.iter().cloned());
    tokens.extend(numeral);
    tokens.extend(f.adjectives.iter().cloned());
    tokens.push(head);
    tokens.join(" ")
}

/// Conjugates a verb unit. Tense defaults to present, person to third,
/// number to singular.
pub fn realize_verb(unit: &GrammarUnit, ctx: &RealizationContext) -> Result<String, RealizeError> {
    realize_verb_counted(unit, ctx, None)
}

pub fn realize_verb_counted(
    unit: &GrammarUnit,
    ctx: &RealizationContext,
    count: Option<i64>,
) -> Result<String, RealizeError> {
    if unit.pos != PartOfSpeech::Verb {
        return Err(RealizeError::WrongPos {
            expected: "verb",
            found: unit.pos,
        });
    }
    check_unit(unit, ctx)?;
    let f = bound_features(unit, ctx.locale, count);
    let key = lexicon::verbal_key(
        f.tense.unwrap_or(Tense::Present),
        f.person.unwrap_or(Person::Third),
        f.number.unwrap_or(Number::Singular),
    );
    let entry = ctx.lexicon.get(ctx.locale, LexicalCategory::Verb, &f.lemma);
    if !ctx.locale.has_full_realization() {
        return Ok(entry.and_then(|e| e.form(&key)).unwrap_or(&f.lemma).to_string());
    }
    let entry = entry.ok_or_else(|| RealizeError::MissingLexeme {
        lemma: f.lemma.clone(),
        locale: ctx.locale,
    })?;
    entry
        .form(&key)
        .map(str::to_string)
        .ok_or(RealizeError::MissingInflection {
            lemma: f.lemma.clone(),
            key,
        })
}
