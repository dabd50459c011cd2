//! Statement templates, document planning and rendering.

pub mod condition;
pub mod data;
pub mod dates;
pub mod dsl;
mod render;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::features::FeatureOverrides;
use crate::locale::Locale;
use crate::unit::GrammarUnit;

pub use condition::{ConditionError, Expr};
pub use data::{DataRecord, Value};
pub use dsl::{parse_template, serialize_template, ParseError};
pub use render::{render_statement, select_statements, RenderError, RenderedStatement, SlotSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotFormat {
    Integer,
    DateLong,
}

impl SlotFormat {
    pub fn name(self) -> &'static str {
        match self {
            SlotFormat::Integer => "integer",
            SlotFormat::DateLong => "date-long",
        }
    }

    pub fn from_name(s: &str) -> Option<SlotFormat> {
        match s {
            "integer" => Some(SlotFormat::Integer),
            "date-long" => Some(SlotFormat::DateLong),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DataSlot {
    pub field: String,
    pub format: Option<SlotFormat>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UnitRef {
    pub unit_id: String,
    pub overrides: FeatureOverrides,
    /// Data field bound to the unit's number (`number=@field`).
    pub agreement: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Literal(String),
    Slot(DataSlot),
    Unit(UnitRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatementTemplate {
    pub id: String,
    pub locale: Locale,
    pub segments: Vec<Segment>,
    pub condition: Option<Expr>,
    pub units: BTreeMap<String, GrammarUnit>,
}

impl StatementTemplate {
    pub fn unit_refs(&self) -> impl Iterator<Item = &UnitRef> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Unit(u) => Some(u),
            _ => None,
        })
    }

    pub fn slot_fields(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot(d) => Some(d.field.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    pub id: String,
    pub source_locale: Locale,
    pub target_locales: Vec<Locale>,
    pub statements: Vec<StatementTemplate>,
    pub schema: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectError {
    #[error("statement `{statement}` is {found}, project source locale is {expected}")]
    LocaleMismatch {
        statement: String,
        expected: Locale,
        found: Locale,
    },
    #[error("duplicate statement id `{0}`")]
    DuplicateStatement(String),
    #[error("statement `{statement}` references unknown unit `{unit}`")]
    UnresolvedUnit { statement: String, unit: String },
    #[error("statement `{statement}` references unit `{unit}` more than once")]
    RepeatedUnitRef { statement: String, unit: String },
    #[error("unit id `{0}` is used by more than one statement")]
    DuplicateUnit(String),
    #[error("statement `{statement}` uses field `{field}` which is not in the schema")]
    UnknownField { statement: String, field: String },
    #[error("unit `{unit}` has locale {found}, statement is {expected}")]
    UnitLocale {
        unit: String,
        expected: Locale,
        found: Locale,
    },
}

impl Project {
    /// Builds a project, checking that statements share the source locale,
    /// ids are unique, every unit reference resolves, and conditions and
    /// slots only use schema fields. Unit ids must be unique project-wide.
    pub fn new(
        id: impl Into<String>,
        source_locale: Locale,
        target_locales: Vec<Locale>,
        statements: Vec<StatementTemplate>,
        schema: BTreeSet<String>,
    ) -> Result<Project, ProjectError> {
        let mut seen = BTreeSet::new();
        let mut unit_ids = BTreeSet::new();
        for st in &statements {
            if st.locale != source_locale {
                return Err(ProjectError::LocaleMismatch {
                    statement: st.id.clone(),
                    expected: source_locale,
                    found: st.locale,
                });
            }
            if !seen.insert(st.id.as_str()) {
                return Err(ProjectError::DuplicateStatement(st.id.clone()));
            }
            validate_statement(st, &schema)?;
            for uid in st.units.keys() {
                if !unit_ids.insert(uid.as_str()) {
                    return Err(ProjectError::DuplicateUnit(uid.clone()));
                }
            }
        }
        Ok(Project {
            id: id.into(),
            source_locale,
            target_locales,
            statements,
            schema,
        })
    }

    pub fn statement(&self, id: &str) -> Option<&StatementTemplate> {
        self.statements.iter().find(|s| s.id == id)
    }
}

pub fn validate_statement(st: &StatementTemplate, schema: &BTreeSet<String>) -> Result<(), ProjectError> {
    let mut refs = BTreeSet::new();
    for r in st.unit_refs() {
        if !st.units.contains_key(&r.unit_id) {
            return Err(ProjectError::UnresolvedUnit {
                statement: st.id.clone(),
                unit: r.unit_id.clone(),
            });
        }
        if !refs.insert(r.unit_id.as_str()) {
            return Err(ProjectError::RepeatedUnitRef {
                statement: st.id.clone(),
                unit: r.unit_id.clone(),
            });
        }
    }
    for u in st.units.values() {
        if u.locale != st.locale {
            return Err(ProjectError::UnitLocale {
                unit: u.id.clone(),
                expected: st.locale,
                found: u.locale,
            });
        }
    }
    let agreement = st
        .unit_refs()
        .filter_map(|r| r.agreement.as_deref())
        .chain(st.units.values().filter_map(|u| u.agreement_source.as_deref()));
    let cond = st.condition.iter().flat_map(|c| c.fields());
    for field in st.slot_fields().chain(agreement).chain(cond) {
        if !schema.contains(field) {
            return Err(ProjectError::UnknownField {
                statement: st.id.clone(),
                field: field.into(),
            });
        }
    }
    Ok(())
}
