//! Unit matching and change aggregation checked against direct arithmetic.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use gramtx_core::postedit::{
    aggregate_changes, changed_fractions, match_units, mean_changed_fraction, per_participant_counts, ChangeCategory,
    ChangeRecord, Ratio, StatsError,
};
use gramtx_core::{Case, FeatureSet, GrammarUnit, Locale, Number, PartOfSpeech, Tense};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn noun(k: usize) -> GrammarUnit {
    let mut f = FeatureSet::with_lemma(format!("Nomen{k}"));
    f.case = Some(Case::Nominative);
    f.number = Some(Number::Singular);
    GrammarUnit::new(format!("a{k}"), Locale::DeDe, PartOfSpeech::Noun, f)
}

/// Inserted units share nothing with the nouns: other part of speech,
/// lemma, number and a tense.
fn inserted(k: usize) -> GrammarUnit {
    let mut f = FeatureSet::with_lemma(format!("verb{k}"));
    f.number = Some(Number::Plural);
    f.tense = Some(Tense::Past);
    GrammarUnit::new(format!("ins{k}"), Locale::DeDe, PartOfSpeech::Verb, f)
}

/// `n` automatic units; the edited list drops the `deleted` positions,
/// post-edits the case of every third survivor and appends `i` new units.
fn corpus(n: usize, deleted: &[usize], i: usize) -> (Vec<GrammarUnit>, Vec<GrammarUnit>) {
    let auto: Vec<GrammarUnit> = (0..n).map(noun).collect();
    let mut edited: Vec<GrammarUnit> = auto
        .iter()
        .enumerate()
        .filter(|(k, _)| !deleted.contains(k))
        .map(|(k, u)| {
            let mut u = u.clone();
            if k % 3 == 0 {
                u.features.case = Some(Case::Dative);
            }
            u
        })
        .collect();
    edited.extend((0..i).map(inserted));
    (auto, edited)
}

/// The rate formula evaluated directly.
fn oracle(n: usize, d: usize, i: usize) -> f64 {
    let num = 2 * (n - d);
    let den = 2 * n - d + i;
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

#[test]
fn hundred_units_two_deletions_two_insertions() {
    let (auto, edited) = corpus(100, &[17, 58], 2);
    let m = match_units(&auto, &edited);
    assert_eq!(m.pairs.len(), 98);
    assert_eq!(m.unmatched_auto, [17, 58]);
    assert_eq!(m.unmatched_edited, [98, 99]);
    assert_eq!(m.match_rate, oracle(100, 2, 2));
    assert_eq!(m.match_rate, 196.0 / 200.0);
}

#[test]
fn five_against_four() {
    let (auto, edited) = corpus(5, &[4], 0);
    assert_eq!(match_units(&auto, &edited).match_rate, 8.0 / 9.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rate_matches_formula(
        (n, deleted) in (0usize..60).prop_flat_map(|n| (Just(n), subsequence((0..n).collect::<Vec<_>>(), 0..=n))),
        i in 0usize..20,
    ) {
        let (auto, edited) = corpus(n, &deleted, i);
        let m = match_units(&auto, &edited);
        let d = deleted.len();
        prop_assert_eq!(m.pairs.len(), n - d);
        prop_assert_eq!(m.match_rate, oracle(n, d, i));
        prop_assert_eq!(m.unmatched_auto.len(), d);
        prop_assert_eq!(m.unmatched_edited.len(), i);
    }

    #[test]
    fn rate_is_symmetric(
        a in prop::collection::vec(unit(), 0..8),
        b in prop::collection::vec(unit(), 0..8),
        ids in prop::collection::vec(0u8..4, 16),
    ) {
        // Few distinct ids so that every pass has work to do.
        let relabel = |v: Vec<GrammarUnit>, off: usize| -> Vec<GrammarUnit> {
            v.into_iter().enumerate().map(|(k, mut u)| { u.id = format!("u{}", ids[k + off]); u }).collect()
        };
        let (a, b) = (relabel(a, 0), relabel(b, 8));
        let ab = match_units(&a, &b);
        let ba = match_units(&b, &a);
        prop_assert_eq!(ab.match_rate, ba.match_rate);
        prop_assert_eq!(ab.pairs.len() + ab.unmatched_auto.len(), a.len());
        prop_assert_eq!(ab.pairs.len() + ab.unmatched_edited.len(), b.len());
    }
}

fn record(session: &str, participant: &str, locale: Locale, unit: &str, cats: &[ChangeCategory]) -> ChangeRecord {
    ChangeRecord {
        session_id: session.into(),
        participant_id: participant.into(),
        locale,
        statement_id: "st".into(),
        unit_id: unit.into(),
        categories: cats.iter().copied().collect(),
        before: None,
        after: None,
        before_text: None,
        after_text: None,
        timestamp: 0,
    }
}

fn category() -> impl Strategy<Value = ChangeCategory> {
    proptest::sample::select(ChangeCategory::table_rows().to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn aggregation_conserves_incidences(
        recs in prop::collection::vec(
            (proptest::sample::select(vec![Locale::DeDe, Locale::EsEs, Locale::SlSi]), prop::collection::btree_set(category(), 1..4), 0u8..5),
            0..60,
        ),
        totals in (1u64..500, 1u64..500, 1u64..500),
    ) {
        let records: Vec<ChangeRecord> = recs
            .iter()
            .enumerate()
            .map(|(k, (l, cats, p))| {
                record("s", &format!("p{p}"), *l, &format!("u{k}"), &cats.iter().copied().collect::<Vec<_>>())
            })
            .collect();
        let totals: BTreeMap<Locale, u64> =
            [(Locale::DeDe, totals.0), (Locale::EsEs, totals.1), (Locale::SlSi, totals.2)].into();
        let table = aggregate_changes(&records, &totals).unwrap();
        let incidences: u64 = recs.iter().map(|(_, c, _)| c.len() as u64).sum();
        prop_assert_eq!(table.incidences(), incidences);

        // Recompute counts from the exact cell fractions.
        let mut recomputed = 0u128;
        for &c in ChangeCategory::table_rows() {
            for (&l, &t) in &totals {
                let f = table.fraction(c, l);
                let scaled = f.num * u128::from(t);
                prop_assert_eq!(scaled % f.den, 0);
                recomputed += scaled / f.den;
                // Half-up integer percent, blank for zero.
                let count = recs.iter().filter(|(rl, cats, _)| *rl == l && cats.contains(&c)).count() as u128;
                let expected = if count == 0 { String::new() } else { ((200 * count + u128::from(t)) / (2 * u128::from(t))).to_string() };
                prop_assert_eq!(table.display_cell(c, l), expected);
            }
        }
        prop_assert_eq!(recomputed, u128::from(incidences));

        let per = per_participant_counts(&records);
        prop_assert_eq!(per.values().sum::<u64>(), records.len() as u64);
    }
}

#[test]
fn eight_of_a_hundred_is_eight_percent() {
    let records: Vec<ChangeRecord> = (0..8)
        .map(|k| record("s", "p", Locale::DeDe, &format!("u{k}"), &[ChangeCategory::ChangeCase]))
        .collect();
    let table = aggregate_changes(&records, &[(Locale::DeDe, 100)].into()).unwrap();
    assert_eq!(table.display_cell(ChangeCategory::ChangeCase, Locale::DeDe), "8");
    assert_eq!(table.display_cell(ChangeCategory::MarkHead, Locale::DeDe), "");
}

#[test]
fn unknown_locale_is_an_error() {
    let r = record("s", "p", Locale::PlPl, "u", &[ChangeCategory::ChangeCase]);
    assert_eq!(
        aggregate_changes(&[r], &[(Locale::DeDe, 10)].into()),
        Err(StatsError::UnknownLocale(Locale::PlPl))
    );
}

#[test]
fn synthetic_nineteen_percent() {
    // 10 of 100 German units and 28 of 100 Spanish units changed, some more
    // than once: (10/100 + 28/100) / 2 = 19/100.
    let mut records = Vec::new();
    for k in 0..10 {
        records.push(record(
            "de",
            "p1",
            Locale::DeDe,
            &format!("u{k}"),
            &[ChangeCategory::ChangeCase],
        ));
    }
    records.push(record("de", "p1", Locale::DeDe, "u0", &[ChangeCategory::ChangeNumber]));
    for k in 0..28 {
        records.push(record(
            "es",
            "p2",
            Locale::EsEs,
            &format!("u{k}"),
            &[ChangeCategory::ChangeNounLemma],
        ));
    }
    records.push(record("es", "p2", Locale::EsEs, "u3", &[ChangeCategory::AddAdjective]));
    let totals: BTreeMap<Locale, u64> = [(Locale::DeDe, 100), (Locale::EsEs, 100)].into();
    let fractions = changed_fractions(&records, &totals).unwrap();
    let mean = mean_changed_fraction(&fractions).unwrap();
    assert_eq!(mean, Ratio::new(19, 100));
    assert_eq!(mean.percent(2), "19.00");
    let excluded: BTreeSet<String> = BTreeSet::new();
    assert_eq!(
        gramtx_core::postedit::completed_only(&records, &excluded).len(),
        records.len()
    );
}
