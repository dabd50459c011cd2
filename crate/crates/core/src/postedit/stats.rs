//! Per-language and per-participant change statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::category::ChangeCategory;
use super::classify::ChangeRecord;
use crate::locale::Locale;

/// Exact non-negative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Ratio {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn zero() -> Ratio {
        Ratio { num: 0, den: 1 }
    }

    pub fn div_int(self, k: u128) -> Ratio {
        Ratio::new(self.num, self.den * k)
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `100 · self` rounded half-up to `decimals` places, as a string.
    pub fn percent(self, decimals: u32) -> String {
        let scale = 10u128.pow(decimals);
        let scaled = (2 * 100 * scale * self.num + self.den) / (2 * self.den);
        if decimals == 0 {
            format!("{scaled}")
        } else {
            format!(
                "{}.{:0width$}",
                scaled / scale,
                scaled % scale,
                width = decimals as usize
            )
        }
    }
}

impl core::ops::Add for Ratio {
    type Output = Ratio;

    fn add(self, o: Ratio) -> Ratio {
        let g = gcd(self.den, o.den);
        let den = self.den / g * o.den;
        Ratio::new(self.num * (den / self.den) + o.num * (den / o.den), den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("no unit total for locale {0}")]
    UnknownLocale(Locale),
    #[error("unit total for locale {0} is zero")]
    ZeroTotal(Locale),
}

/// Locale × category change counts with the per-locale unit totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeTable {
    pub totals: BTreeMap<Locale, u64>,
    pub counts: BTreeMap<(ChangeCategory, Locale), u64>,
}

impl ChangeTable {
    pub fn locales(&self) -> impl Iterator<Item = Locale> + '_ {
        self.totals.keys().copied()
    }

    pub fn count(&self, category: ChangeCategory, locale: Locale) -> u64 {
        self.counts.get(&(category, locale)).copied().unwrap_or(0)
    }

    /// Exact share of the locale's units carrying the category.
    pub fn fraction(&self, category: ChangeCategory, locale: Locale) -> Ratio {
        match self.totals.get(&locale) {
            Some(&t) if t > 0 => Ratio::new(u128::from(self.count(category, locale)), u128::from(t)),
            _ => Ratio::zero(),
        }
    }

    /// Integer percent, rounded half-up; empty when the count is zero.
    pub fn display_cell(&self, category: ChangeCategory, locale: Locale) -> String {
        let f = self.fraction(category, locale);
        if f.is_zero() {
            String::new()
        } else {
            f.percent(0)
        }
    }

    /// Sum of all (record, category) incidences.
    pub fn incidences(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Counts, per locale, the records containing each category. Text-only
/// records are skipped.
pub fn aggregate_changes(
    records: &[ChangeRecord],
    unit_totals: &BTreeMap<Locale, u64>,
) -> Result<ChangeTable, StatsError> {
    for (&l, &t) in unit_totals {
        if t == 0 && records.iter().any(|r| r.locale == l && !r.is_text_only()) {
            return Err(StatsError::ZeroTotal(l));
        }
    }
    let mut counts = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_text_only()) {
        if !unit_totals.contains_key(&r.locale) {
            return Err(StatsError::UnknownLocale(r.locale));
        }
        for &c in &r.categories {
            *counts.entry((c, r.locale)).or_insert(0u64) += 1;
        }
    }
    Ok(ChangeTable {
        totals: unit_totals.clone(),
        counts,
    })
}

/// Unit edit records per participant. Text-only records are not counted.
pub fn per_participant_counts(records: &[ChangeRecord]) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_text_only()) {
        *out.entry(r.participant_id.clone()).or_insert(0) += 1;
    }
    out
}

/// Share of each locale's units that received at least one edit. A unit is
/// identified by session, statement and unit id.
pub fn changed_fractions(
    records: &[ChangeRecord],
    unit_totals: &BTreeMap<Locale, u64>,
) -> Result<BTreeMap<Locale, Ratio>, StatsError> {
    let mut changed: BTreeMap<Locale, BTreeSet<(&str, &str, &str)>> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.is_text_only()) {
        if !unit_totals.contains_key(&r.locale) {
            return Err(StatsError::UnknownLocale(r.locale));
        }
        changed.entry(r.locale).or_default().insert((
            r.session_id.as_str(),
            r.statement_id.as_str(),
            r.unit_id.as_str(),
        ));
    }
    let mut out = BTreeMap::new();
    for (&l, &t) in unit_totals {
        if t == 0 {
            return Err(StatsError::ZeroTotal(l));
        }
        let n = changed.get(&l).map_or(0, |s| s.len()) as u128;
        out.insert(l, Ratio::new(n, u128::from(t)));
    }
    Ok(out)
}

/// Unweighted mean over locales of the changed-unit share. `None` when there
/// are no locales.
pub fn mean_changed_fraction(per_locale: &BTreeMap<Locale, Ratio>) -> Option<Ratio> {
    if per_locale.is_empty() {
        return None;
    }
    let sum = per_locale.values().fold(Ratio::zero(), |acc, r| acc + *r);
    Some(sum.div_int(per_locale.len() as u128))
}

/// Records restricted to sessions not listed in `incomplete`.
pub fn completed_only(records: &[ChangeRecord], incomplete: &BTreeSet<String>) -> Vec<ChangeRecord> {
    records
        .iter()
        .filter(|r| !incomplete.contains(&r.session_id))
        .cloned()
        .collect()
}
