use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::condition::ConditionError;
use super::data::{DataRecord, Value};
use super::dates::{format_long, Date};
use super::{Project, Segment, SlotFormat, StatementTemplate};
use crate::realize::{RealizationContext, RealizeError};
use crate::unit::{apply_overrides, Span, UnitError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("no value for field `{0}`")]
    MissingData(String),
    #[error("field `{field}`: expected {expected}, found {found}")]
    BadValue {
        field: String,
        expected: &'static str,
        found: String,
    },
    #[error("unit `{unit_id}`: {source}")]
    Realize { unit_id: String, source: RealizeError },
    #[error("unit `{unit_id}`: {source}")]
    Unit { unit_id: String, source: UnitError },
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("statement `{statement}` condition: {source}")]
    Condition { statement: String, source: ConditionError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotSpan {
    pub field: String,
    pub span: Span,
}

/// Output of [`render_statement`]: text plus the exact character span of
/// every realized unit and data slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedStatement {
    pub statement_id: String,
    pub text: String,
    pub units: BTreeMap<String, Span>,
    /// Realized text per unit, after sentence-initial capitalization.
    pub unit_texts: BTreeMap<String, String>,
    pub slots: Vec<SlotSpan>,
}

/// Statements whose condition is absent or true, in project order.
pub fn select_statements<'a>(
    project: &'a Project,
    data: &DataRecord,
) -> Result<Vec<&'a StatementTemplate>, RenderError> {
    let mut out = Vec::new();
    for st in &project.statements {
        let include = match &st.condition {
            None => true,
            Some(c) => c.eval(data).map_err(|source| RenderError::Condition {
                statement: st.id.clone(),
                source,
            })?,
        };
        if include {
            out.push(st);
        }
    }
    Ok(out)
}

pub fn format_value(
    field: &str,
    value: &Value,
    format: Option<SlotFormat>,
    ctx: &RealizationContext,
) -> Result<String, RenderError> {
    let bad = |expected| RenderError::BadValue {
        field: field.to_string(),
        expected,
        found: value.to_string(),
    };
    match format {
        None => Ok(value.to_string()),
        Some(SlotFormat::Integer) => value.as_int().map(|i| i.to_string()).ok_or_else(|| bad("integer")),
        Some(SlotFormat::DateLong) => match value {
            Value::Str(s) => Date::parse_iso(s)
                .map(|d| format_long(d, ctx.locale))
                .ok_or_else(|| bad("ISO date")),
            _ => Err(bad("ISO date")),
        },
    }
}

fn at_sentence_start(text: &str) -> bool {
    let trimmed = text.trim_end();
    trimmed.is_empty() || (trimmed.len() < text.len() && trimmed.ends_with(['.', '!', '?']))
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Renders one statement for one data record.
///
/// A unit at the start of the text or after sentence-final punctuation gets
/// its first letter capitalized.
pub fn render_statement(
    stmt: &StatementTemplate,
    data: &DataRecord,
    ctx: &RealizationContext,
) -> Result<RenderedStatement, RenderError> {
    let mut text = String::new();
    let mut len = 0usize;
    let mut units = BTreeMap::new();
    let mut unit_texts = BTreeMap::new();
    let mut slots = Vec::new();

    for seg in &stmt.segments {
        let start = len;
        let piece = match seg {
            Segment::Literal(s) => s.clone(),
            Segment::Slot(slot) => {
                let v = data
                    .get(&slot.field)
                    .ok_or_else(|| RenderError::MissingData(slot.field.clone()))?;
                format_value(&slot.field, v, slot.format, ctx)?
            }
            Segment::Unit(r) => {
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
                let count = match &unit.agreement_source {
                    None => None,
                    Some(field) => {
                        let v = data.get(field).ok_or_else(|| RenderError::MissingData(field.clone()))?;
                        Some(v.as_int().ok_or_else(|| RenderError::BadValue {
                            field: field.clone(),
                            expected: "integer",
                            found: v.to_string(),
                        })?)
                    }
                };
                let mut s = ctx.realize(&unit, count).map_err(|source| RenderError::Realize {
                    unit_id: r.unit_id.clone(),
                    source,
                })?;
                if at_sentence_start(&text) {
                    s = capitalize_first(&s);
                }
                s
            }
        };
        len += piece.chars().count();
        let span = Span::new(start, len);
        match seg {
            Segment::Unit(r) => {
                units.insert(r.unit_id.clone(), span);
                unit_texts.insert(r.unit_id.clone(), piece.clone());
            }
            Segment::Slot(slot) => slots.push(SlotSpan {
                field: slot.field.clone(),
                span,
            }),
            Segment::Literal(_) => {}
        }
        text.push_str(&piece);
    }
    Ok(RenderedStatement {
        statement_id: stmt.id.clone(),
        text,
        units,
        unit_texts,
        slots,
    })
}
