//! Pairing of automatically transferred units with their post-edited
//! counterparts.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::unit::{Feature, GrammarUnit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchPass {
    Id,
    LemmaPos,
    Overlap,
}

/// Indices into the `auto` and `edited` inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub auto: usize,
    pub edited: usize,
    pub pass: MatchPass,
}

impl MatchedPair {
    /// Feature-overlap matches are offered for confirmation.
    pub fn low_confidence(&self) -> bool {
        self.pass == MatchPass::Overlap
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_auto: Vec<usize>,
    pub unmatched_edited: Vec<usize>,
    pub match_rate: f64,
}

/// `2·pairs / (auto + edited)`, and 1 when both sides are empty.
pub fn match_rate(pairs: usize, auto: usize, edited: usize) -> f64 {
    if auto + edited == 0 {
        1.0
    } else {
        (2 * pairs) as f64 / (auto + edited) as f64
    }
}

/// Minimum share of jointly set features that must agree in the overlap pass.
pub const OVERLAP_THRESHOLD: f64 = 0.5;

/// Share of features set on either unit that are equal on both. The lemma
/// always counts; part of speech counts as one more feature.
pub fn overlap_score(a: &GrammarUnit, b: &GrammarUnit) -> f64 {
    let (fa, fb) = (&a.features, &b.features);
    let mut joint = 1usize;
    let mut agree = usize::from(a.pos == b.pos);
    for f in Feature::ALL {
        if !(f.is_set(fa) || f.is_set(fb)) {
            continue;
        }
        joint += 1;
        let same = match f {
            Feature::Lemma => fa.lemma == fb.lemma,
            Feature::Case => fa.case == fb.case,
            Feature::Number => fa.number == fb.number,
            Feature::Tense => fa.tense == fb.tense,
            Feature::Person => fa.person == fb.person,
            Feature::Gender => fa.gender == fb.gender,
            Feature::Preposition => fa.preposition == fb.preposition,
            Feature::Adjectives => fa.adjectives == fb.adjectives,
            Feature::Numerals => fa.numerals == fb.numerals,
            Feature::Conjunctions => fa.conjunctions == fb.conjunctions,
            Feature::Determiner => fa.determiner == fb.determiner,
            Feature::PronounType => fa.pronoun_type == fb.pronoun_type,
        };
        agree += usize::from(same);
    }
    agree as f64 / joint as f64
}

/// Greedy in-order pairing under an equivalence relation.
fn pass_equal<K: PartialEq>(
    auto: &[GrammarUnit],
    edited: &[GrammarUnit],
    auto_used: &mut [bool],
    edited_used: &mut [bool],
    key: impl Fn(&GrammarUnit) -> K,
    pass: MatchPass,
    pairs: &mut Vec<MatchedPair>,
) {
    for (i, a) in auto.iter().enumerate() {
        if auto_used[i] {
            continue;
        }
        let ka = key(a);
        if let Some(j) = (0..edited.len()).find(|&j| !edited_used[j] && key(&edited[j]) == ka) {
            auto_used[i] = true;
            edited_used[j] = true;
            pairs.push(MatchedPair {
                auto: i,
                edited: j,
                pass,
            });
        }
    }
}

/// Maximum-cardinality matching over admissible overlap edges. Seeds with a
/// greedy choice by (score, position distance), then grows through
/// augmenting paths.
fn pass_overlap(
    auto: &[GrammarUnit],
    edited: &[GrammarUnit],
    auto_used: &[bool],
    edited_used: &[bool],
) -> Vec<(usize, usize)> {
    let free_a: Vec<usize> = (0..auto.len()).filter(|&i| !auto_used[i]).collect();
    let free_e: Vec<usize> = (0..edited.len()).filter(|&j| !edited_used[j]).collect();
    let mut edges: Vec<(f64, usize, usize, usize)> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); free_a.len()];
    for (ai, &i) in free_a.iter().enumerate() {
        for (ej, &j) in free_e.iter().enumerate() {
            let s = overlap_score(&auto[i], &edited[j]);
            if s >= OVERLAP_THRESHOLD {
                edges.push((s, i.abs_diff(j), ai, ej));
                adj[ai].push(ej);
            }
        }
    }
    edges.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
            .then(x.3.cmp(&y.3))
    });
    let mut match_a: Vec<Option<usize>> = vec![None; free_a.len()];
    let mut match_e: Vec<Option<usize>> = vec![None; free_e.len()];
    for &(_, _, ai, ej) in &edges {
        if match_a[ai].is_none() && match_e[ej].is_none() {
            match_a[ai] = Some(ej);
            match_e[ej] = Some(ai);
        }
    }
    fn augment(
        ai: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_a: &mut [Option<usize>],
        match_e: &mut [Option<usize>],
    ) -> bool {
        for &ej in &adj[ai] {
            if seen[ej] {
                continue;
            }
            seen[ej] = true;
            let free = match match_e[ej] {
                None => true,
                Some(other) => augment(other, adj, seen, match_a, match_e),
            };
            if free {
                match_a[ai] = Some(ej);
                match_e[ej] = Some(ai);
                return true;
            }
        }
        false
    }
    for ai in 0..free_a.len() {
        if match_a[ai].is_none() {
            let mut seen = vec![false; free_e.len()];
            augment(ai, &adj, &mut seen, &mut match_a, &mut match_e);
        }
    }
    match_a
        .iter()
        .enumerate()
        .filter_map(|(ai, m)| m.map(|ej| (free_a[ai], free_e[ej])))
        .collect()
}

/// Pairs units in three passes: identical id, identical lemma and part of
/// speech, then feature overlap of at least [`OVERLAP_THRESHOLD`].
pub fn match_units(auto: &[GrammarUnit], edited: &[GrammarUnit]) -> MatchResult {
    let mut auto_used = vec![false; auto.len()];
    let mut edited_used = vec![false; edited.len()];
    let mut pairs = Vec::new();
    pass_equal(
        auto,
        edited,
        &mut auto_used,
        &mut edited_used,
        |u| u.id.clone(),
        MatchPass::Id,
        &mut pairs,
    );
    pass_equal(
        auto,
        edited,
        &mut auto_used,
        &mut edited_used,
        |u| (u.features.lemma.clone(), u.pos),
        MatchPass::LemmaPos,
        &mut pairs,
    );
    for (i, j) in pass_overlap(auto, edited, &auto_used, &edited_used) {
        auto_used[i] = true;
        edited_used[j] = true;
        pairs.push(MatchedPair {
            auto: i,
            edited: j,
            pass: MatchPass::Overlap,
        });
    }
    pairs.sort_by_key(|p| (p.auto, p.edited));
    let unmatched_auto = (0..auto.len()).filter(|&i| !auto_used[i]).collect();
    let unmatched_edited = (0..edited.len()).filter(|&j| !edited_used[j]).collect();
    MatchResult {
        match_rate: match_rate(pairs.len(), auto.len(), edited.len()),
        pairs,
        unmatched_auto,
        unmatched_edited,
    }
}
