//! Analytics reports over an edit log: the per-language change table, the
//! per-participant counts and a summary with changed-unit shares and the
//! unit match rate.

use std::collections::{BTreeMap, BTreeSet};

use gramtx_core::postedit::{
    aggregate_changes, changed_fractions, completed_only, match_units, mean_changed_fraction, per_participant_counts,
    verify_record, ChangeCategory, ChangeRecord, ChangeTable, ClassifyError, MatchPass, Ratio, StatsError,
};
use gramtx_core::Locale;
use serde::Serialize;

use crate::io::UnitsFile;

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error("record {index}: {source}")]
    Record { index: usize, source: ClassifyError },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Re-classifies every record; the first inconsistent one is reported by its
/// zero-based position.
pub fn check_records(records: &[ChangeRecord]) -> Result<(), AnalyzeError> {
    for (index, r) in records.iter().enumerate() {
        verify_record(r).map_err(|source| AnalyzeError::Record { index, source })?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellOut {
    pub category: ChangeCategory,
    pub locale: Locale,
    pub count: u64,
    pub fraction: String,
    pub percent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableOut {
    pub totals: BTreeMap<Locale, u64>,
    pub cells: Vec<CellOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChangedOut {
    pub changed: u128,
    pub total: u64,
    pub fraction: String,
    pub percent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MatchingOut {
    pub statements: usize,
    pub auto_units: usize,
    pub edited_units: usize,
    pub pairs: usize,
    pub pairs_by_pass: BTreeMap<MatchPass, usize>,
    /// Pairs found only by feature overlap, offered for confirmation.
    pub low_confidence_pairs: usize,
    pub match_rate: String,
    pub match_rate_exact: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub unit_edit_records: usize,
    pub text_only_records: usize,
    pub incidences: u64,
    pub excluded_sessions: BTreeSet<String>,
    pub changed_units: BTreeMap<Locale, ChangedOut>,
    /// Unweighted mean over locales; `null` without locales.
    pub mean_changed_fraction: Option<String>,
    pub matching: MatchingOut,
}

/// All report files as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reports {
    pub change_table_csv: String,
    pub change_table_json: String,
    pub participants_csv: String,
    pub summary_json: String,
}

pub const CHANGE_TABLE_CSV: &str = "change_table.csv";
pub const CHANGE_TABLE_JSON: &str = "change_table.json";
pub const PARTICIPANTS_CSV: &str = "participants.csv";
pub const SUMMARY_JSON: &str = "summary.json";

fn percent_string(r: Ratio) -> String {
    format!("{}%", r.percent(2))
}

fn csv_text(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("input is UTF-8")
}

/// Rows are the 23 table categories, columns the locales of `table`. With no
/// unit edit records only the header is written.
pub fn change_table_csv(table: &ChangeTable, has_records: bool) -> String {
    let mut header = vec!["category".to_string()];
    header.extend(table.locales().map(|l| l.code().to_string()));
    let mut rows = vec![header];
    if has_records {
        for &c in ChangeCategory::table_rows() {
            let mut row = vec![c.label().to_string()];
            row.extend(table.locales().map(|l| table.display_cell(c, l)));
            rows.push(row);
        }
    }
    csv_text(rows)
}

pub fn participants_csv(counts: &BTreeMap<String, u64>) -> String {
    let mut rows = vec![vec!["participant".to_string(), "changes".to_string()]];
    rows.extend(counts.iter().map(|(p, n)| vec![p.clone(), n.to_string()]));
    csv_text(rows)
}

fn table_out(table: &ChangeTable, has_records: bool) -> TableOut {
    let mut cells = Vec::new();
    if has_records {
        for &c in ChangeCategory::table_rows() {
            for l in table.locales() {
                let f = table.fraction(c, l);
                cells.push(CellOut {
                    category: c,
                    locale: l,
                    count: table.count(c, l),
                    fraction: f.to_string(),
                    percent: f.percent(2),
                });
            }
        }
    }
    TableOut {
        totals: table.totals.clone(),
        cells,
    }
}

fn matching(units: &UnitsFile, excluded: &BTreeSet<String>) -> MatchingOut {
    let mut out = MatchingOut::default();
    for s in units.statements.iter().filter(|s| !excluded.contains(&s.session_id)) {
        let m = match_units(&s.auto, &s.edited);
        out.statements += 1;
        out.auto_units += s.auto.len();
        out.edited_units += s.edited.len();
        out.pairs += m.pairs.len();
        for p in &m.pairs {
            *out.pairs_by_pass.entry(p.pass).or_insert(0) += 1;
        }
        out.low_confidence_pairs += m.pairs.iter().filter(|p| p.low_confidence()).count();
    }
    let rate = match out.auto_units + out.edited_units {
        0 => Ratio::new(1, 1),
        n => Ratio::new(2 * out.pairs as u128, n as u128),
    };
    out.match_rate = percent_string(rate);
    out.match_rate_exact = rate.to_string();
    out
}

/// Computes every report. Records of incomplete sessions are dropped unless
/// `include_incomplete` is set.
pub fn analyze(records: &[ChangeRecord], units: &UnitsFile, include_incomplete: bool) -> Result<Reports, AnalyzeError> {
    let excluded: BTreeSet<String> = if include_incomplete {
        BTreeSet::new()
    } else {
        units.incomplete_sessions.clone()
    };
    let kept = completed_only(records, &excluded);
    let totals = units.unit_totals();
    let table = aggregate_changes(&kept, &totals)?;
    let unit_edits = kept.iter().filter(|r| !r.is_text_only()).count();
    let has_records = unit_edits > 0;
    let fractions = changed_fractions(&kept, &totals)?;
    let changed_units = fractions
        .iter()
        .map(|(&l, &r)| {
            let total = totals[&l];
            (
                l,
                ChangedOut {
                    changed: r.num * u128::from(total) / r.den,
                    total,
                    fraction: r.to_string(),
                    percent: percent_string(r),
                },
            )
        })
        .collect();
    let summary = Summary {
        records: kept.len(),
        unit_edit_records: unit_edits,
        text_only_records: kept.len() - unit_edits,
        incidences: table.incidences(),
        excluded_sessions: excluded.clone(),
        changed_units,
        mean_changed_fraction: mean_changed_fraction(&fractions).map(percent_string),
        matching: matching(units, &excluded),
    };
    Ok(Reports {
        change_table_csv: change_table_csv(&table, has_records),
        change_table_json: crate::io::to_json_pretty(&table_out(&table, has_records)),
        participants_csv: participants_csv(&per_participant_counts(&kept)),
        summary_json: crate::io::to_json_pretty(&summary),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gramtx_core::postedit::TEXT_UNIT_PREFIX;
    use gramtx_core::{Case, FeatureSet, GrammarUnit, PartOfSpeech};

    fn unit(id: &str, case: Case) -> GrammarUnit {
        let mut f = FeatureSet::with_lemma("Samstag");
        f.case = Some(case);
        GrammarUnit::new(id, Locale::DeDe, PartOfSpeech::Noun, f)
    }

    fn record(session: &str, participant: &str, unit_id: &str) -> ChangeRecord {
        ChangeRecord {
            session_id: session.into(),
            participant_id: participant.into(),
            locale: Locale::DeDe,
            statement_id: "st".into(),
            unit_id: unit_id.into(),
            categories: [ChangeCategory::ChangeCase].into(),
            before: Some(unit(unit_id, Case::Genitive)),
            after: Some(unit(unit_id, Case::Nominative)),
            before_text: None,
            after_text: None,
            timestamp: 1,
        }
    }

    #[test]
    fn csv_shapes() {
        let units = UnitsFile {
            totals: Some([(Locale::DeDe, 4)].into()),
            ..UnitsFile::default()
        };
        let r = analyze(&[], &units, false).unwrap();
        assert_eq!(r.change_table_csv, "category,de-DE\n");
        assert_eq!(r.participants_csv, "participant,changes\n");

        let recs = vec![record("s1", "p1", "a"), record("s1", "p1", "b")];
        let r = analyze(&recs, &units, false).unwrap();
        let lines: Vec<&str> = r.change_table_csv.lines().collect();
        assert_eq!(lines.len(), 24);
        assert!(lines.contains(&"change case,50"));
        assert!(lines.contains(&"mark head,"));
        assert_eq!(r.participants_csv, "participant,changes\np1,2\n");
    }

    #[test]
    fn incomplete_sessions_excluded_by_default() {
        let units = UnitsFile {
            totals: Some([(Locale::DeDe, 10)].into()),
            incomplete_sessions: ["s2".to_string()].into(),
            ..UnitsFile::default()
        };
        let recs = vec![record("s1", "p1", "a"), record("s2", "p2", "b")];
        let r = analyze(&recs, &units, false).unwrap();
        assert!(
            r.summary_json.contains("\"mean_changed_fraction\": \"10.00%\""),
            "{}",
            r.summary_json
        );
        let r = analyze(&recs, &units, true).unwrap();
        assert!(r.summary_json.contains("\"mean_changed_fraction\": \"20.00%\""));
    }

    #[test]
    fn text_only_records_counted_separately() {
        let units = UnitsFile {
            totals: Some([(Locale::DeDe, 10)].into()),
            ..UnitsFile::default()
        };
        let mut text = record("s1", "p1", &format!("{TEXT_UNIT_PREFIX}st"));
        text.categories.clear();
        text.before = None;
        text.after = None;
        let r = analyze(&[text], &units, false).unwrap();
        assert_eq!(r.change_table_csv, "category,de-DE\n");
        assert!(r.summary_json.contains("\"text_only_records\": 1"));
    }

    #[test]
    fn inconsistent_record_rejected() {
        let mut r = record("s1", "p1", "a");
        r.categories = [ChangeCategory::MarkHead].into();
        assert!(matches!(
            check_records(&[record("s", "p", "x"), r]),
            Err(AnalyzeError::Record { index: 1, .. })
        ));
    }
}
