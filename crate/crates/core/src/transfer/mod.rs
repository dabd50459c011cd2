//! Grammar transfer: mark unit spans, translate, re-locate the snippets and
//! rebuild target-language units from their dependency parses.

pub mod aggregate;
pub mod conllu;
pub mod markers;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::backend::{BackendError, RequestError, TranslationRequest, Translator};
use crate::locale::Locale;
use crate::realize::RealizationContext;
use crate::template::{
    render_statement, DataRecord, DataSlot, RenderError, RenderedStatement, Segment, StatementTemplate, UnitRef,
};
use crate::unit::{apply_overrides, GrammarUnit};

pub use aggregate::{aggregate_fragment, gazetteer_key, AggregateError};
pub use conllu::{parse_conllu, write_conllu, write_parser_input, DependencyToken, ParseFragment, TreeError};
pub use markers::{
    align_translation, mark_spans, mark_units, strip_markers, Alignment, MarkError, MarkSpan, MarkerKind, Piece,
};

/// Proper names whose parses are not trusted for case and number.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    names: BTreeSet<String>,
}

impl Gazetteer {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Gazetteer {
            names: names.into_iter().map(|n| gazetteer_key(n.as_ref())).collect(),
        }
    }

    /// Case-insensitive, whitespace-normalized membership.
    pub fn contains(&self, lemma: &str) -> bool {
        self.names.contains(&gazetteer_key(lemma))
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Rebuilds `source` in the target language from the parse of its
/// translated snippet.
///
/// The result takes id, agreement source and the numeral value from
/// `source`; all other features come from the parse.
pub fn transfer_unit(source: &GrammarUnit, target_parse: &ParseFragment) -> Result<GrammarUnit, AggregateError> {
    let mut unit = aggregate_fragment(target_parse)?;
    unit.id = source.id.clone();
    unit.agreement_source = source.agreement_source.clone();
    if let (Some(target), Some(src)) = (unit.features.numerals.as_mut(), source.features.numerals) {
        target.value = src.value;
    }
    Ok(unit)
}

/// [`transfer_unit`] with the known-misparse guard: when the target lemma is
/// a gazetteer name, case and number are copied from the source unit.
/// Returns whether the guard changed anything.
pub fn transfer_unit_guarded(
    source: &GrammarUnit,
    target_parse: &ParseFragment,
    gazetteer: &Gazetteer,
) -> Result<(GrammarUnit, bool), AggregateError> {
    let mut unit = transfer_unit(source, target_parse)?;
    let mut changed = false;
    if gazetteer.contains(&unit.features.lemma) {
        let case = source.features.case.filter(|c| unit.locale.legal_cases().contains(c));
        if unit.features.case != case && unit.pos != crate::unit::PartOfSpeech::Verb {
            unit.features.case = case;
            changed = true;
        }
        if unit.features.number != source.features.number {
            unit.features.number = source.features.number;
            changed = true;
        }
    }
    Ok((unit, changed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferFailure {
    pub unit_id: String,
    pub reason: String,
}

/// Outcome of transferring one statement.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub statement_id: String,
    /// Units whose markers did not survive translation.
    pub lost: Vec<String>,
    /// Data slots whose markers did not survive translation.
    pub lost_slots: Vec<String>,
    /// Units whose snippet had no usable parse.
    pub failures: Vec<TransferFailure>,
    /// Units whose case or number was reset by the gazetteer guard.
    pub gazetteer_overrides: Vec<String>,
}

impl TransferReport {
    pub fn is_clean(&self) -> bool {
        self.lost.is_empty() && self.lost_slots.is_empty() && self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("statement `{statement}`: {source}")]
    Render { statement: String, source: RenderError },
    #[error("statement `{statement}`: {source}")]
    Mark { statement: String, source: MarkError },
    #[error("statement `{statement}`: {source}")]
    Request { statement: String, source: RequestError },
    #[error("statement `{statement}`: {source}")]
    Backend { statement: String, source: BackendError },
}

/// A statement that has been rendered, marked, translated and aligned, and
/// is waiting for parses of its unit snippets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedTransfer {
    pub statement_id: String,
    pub target_locale: Locale,
    pub rendered: RenderedStatement,
    pub tagged_source: String,
    pub tagged_target: String,
    pub alignment: Alignment,
    /// Source units after statement-level overrides and agreement binding.
    pub source_units: BTreeMap<String, GrammarUnit>,
}

impl PreparedTransfer {
    /// Surviving unit snippets in text order, as parser input.
    pub fn snippets(&self) -> Vec<(String, String)> {
        self.alignment
            .pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Unit { id, text } => Some((id.clone(), text.clone())),
                _ => None,
            })
            .collect()
    }
}

/// Effective source units as rendered: overrides applied and the
/// reference-level agreement field moved onto the unit.
fn effective_units(stmt: &StatementTemplate) -> Result<BTreeMap<String, GrammarUnit>, RenderError> {
    let mut out = BTreeMap::new();
    for r in stmt.unit_refs() {
        let base = stmt
            .units
            .get(&r.unit_id)
            .ok_or_else(|| RenderError::UnknownUnit(r.unit_id.clone()))?;
        let mut unit = apply_overrides(base, &r.overrides).map_err(|source| RenderError::Unit {
            unit_id: r.unit_id.clone(),
            source,
        })?;
        if r.agreement.is_some() {
            unit.agreement_source = r.agreement.clone();
        }
        out.insert(r.unit_id.clone(), unit);
    }
    Ok(out)
}

/// Renders, marks and translates one statement, then aligns the result.
pub fn prepare_transfer(
    stmt: &StatementTemplate,
    data: &DataRecord,
    ctx: &RealizationContext,
    backend: &dyn Translator,
    target: Locale,
) -> Result<PreparedTransfer, TransferError> {
    let statement = || stmt.id.clone();
    let rendered = render_statement(stmt, data, ctx).map_err(|source| TransferError::Render {
        statement: statement(),
        source,
    })?;
    let source_units = effective_units(stmt).map_err(|source| TransferError::Render {
        statement: statement(),
        source,
    })?;
    let mut spans: Vec<MarkSpan> = rendered
        .units
        .iter()
        .map(|(id, span)| MarkSpan {
            kind: MarkerKind::Unit,
            id: id.clone(),
            span: *span,
        })
        .collect();
    spans.extend(rendered.slots.iter().map(|s| MarkSpan {
        kind: MarkerKind::Slot,
        id: s.field.clone(),
        span: s.span,
    }));
    let tagged_source = mark_spans(&rendered.text, &spans).map_err(|source| TransferError::Mark {
        statement: statement(),
        source,
    })?;
    let req = TranslationRequest::new(stmt.locale, target, tagged_source.clone()).map_err(|source| {
        TransferError::Request {
            statement: statement(),
            source,
        }
    })?;
    let tagged_target = backend.translate(&req).map_err(|source| TransferError::Backend {
        statement: statement(),
        source,
    })?;
    let unit_ids: Vec<String> = stmt.unit_refs().map(|r| r.unit_id.clone()).collect();
    let mut slot_fields: Vec<String> = Vec::new();
    for f in stmt.slot_fields() {
        if !slot_fields.iter().any(|x| x == f) {
            slot_fields.push(f.to_string());
        }
    }
    let alignment = align_translation(&tagged_target, &unit_ids, &slot_fields);
    Ok(PreparedTransfer {
        statement_id: stmt.id.clone(),
        target_locale: target,
        rendered,
        tagged_source,
        tagged_target,
        alignment,
        source_units,
    })
}

/// Assembles the target statement from an aligned translation and the
/// parses of its snippets.
///
/// Surviving units become references to transferred units. Lost units and
/// units without a usable parse are kept unreferenced in the unit map, as
/// untransferred copies flagged in the report; the snippet text of a failed
/// unit stays in the output as a literal.
pub fn complete_transfer(
    prepared: &PreparedTransfer,
    source: &StatementTemplate,
    parses: &BTreeMap<String, ParseFragment>,
    gazetteer: &Gazetteer,
) -> (StatementTemplate, TransferReport) {
    let target = prepared.target_locale;
    let mut report = TransferReport {
        statement_id: prepared.statement_id.clone(),
        lost: prepared.alignment.lost.clone(),
        lost_slots: prepared.alignment.lost_slots.clone(),
        ..TransferReport::default()
    };
    let formats: BTreeMap<&str, &DataSlot> = source
        .segments
        .iter()
        .filter_map(|s| match s {
            Segment::Slot(d) => Some((d.field.as_str(), d)),
            _ => None,
        })
        .collect();
    let untransferred = |u: &GrammarUnit| GrammarUnit {
        locale: target,
        span: None,
        ..u.clone()
    };

    let mut segments: Vec<Segment> = Vec::new();
    let mut units: BTreeMap<String, GrammarUnit> = BTreeMap::new();
    let push_literal = |segments: &mut Vec<Segment>, t: &str| {
        if let Some(Segment::Literal(last)) = segments.last_mut() {
            last.push_str(t);
        } else if !t.is_empty() {
            segments.push(Segment::Literal(t.to_string()));
        }
    };
    for piece in &prepared.alignment.pieces {
        match piece {
            Piece::Text(t) => push_literal(&mut segments, t),
            Piece::Slot { field, .. } => {
                let slot = formats.get(field.as_str()).map(|d| (*d).clone()).unwrap_or(DataSlot {
                    field: field.clone(),
                    format: None,
                });
                segments.push(Segment::Slot(slot));
            }
            Piece::Unit { id, text } => {
                let src = &prepared.source_units[id];
                let outcome = match parses.get(id) {
                    None => Err("no parse for snippet".to_string()),
                    Some(frag) => transfer_unit_guarded(src, frag, gazetteer).map_err(|e| e.to_string()),
                };
                match outcome {
                    Ok((mut unit, guarded)) => {
                        unit.locale = target;
                        if guarded {
                            report.gazetteer_overrides.push(id.clone());
                        }
                        units.insert(id.clone(), unit);
                        segments.push(Segment::Unit(UnitRef {
                            unit_id: id.clone(),
                            ..UnitRef::default()
                        }));
                    }
                    Err(reason) => {
                        report.failures.push(TransferFailure {
                            unit_id: id.clone(),
                            reason,
                        });
                        units.insert(id.clone(), untransferred(src));
                        push_literal(&mut segments, text);
                    }
                }
            }
        }
    }
    for id in &report.lost {
        if let Some(src) = prepared.source_units.get(id) {
            units.insert(id.clone(), untransferred(src));
        }
    }
    let stmt = StatementTemplate {
        id: source.id.clone(),
        locale: target,
        segments,
        condition: source.condition.clone(),
        units,
    };
    (stmt, report)
}

/// Full pipeline for one statement: render, mark, translate, align, then
/// transfer each snippet using `parses`.
pub fn transfer_statement(
    stmt: &StatementTemplate,
    data: &DataRecord,
    ctx: &RealizationContext,
    backend: &dyn Translator,
    parses: &BTreeMap<String, ParseFragment>,
    gazetteer: &Gazetteer,
    target: Locale,
) -> Result<(StatementTemplate, TransferReport), TransferError> {
    let prepared = prepare_transfer(stmt, data, ctx, backend, target)?;
    Ok(complete_transfer(&prepared, stmt, parses, gazetteer))
}
