//! Generation and translation runs over whole projects.

use std::collections::BTreeMap;
use std::path::Path;

use gramtx_core::backend::Translator;
use gramtx_core::realize::{ContractionRules, RealizationContext};
use gramtx_core::template::{render_statement, select_statements, DataRecord, Project, ProjectError, RenderError};
use gramtx_core::transfer::{
    complete_transfer, prepare_transfer, write_parser_input, Gazetteer, ParseFragment, TransferError, TransferReport,
};
use gramtx_core::{Locale, Span};
use serde::{Deserialize, Serialize};

use crate::io::{load_lexicon, FormatError};

/// Realization context for `locale` with the lexicon from `lexicon_dir` and
/// the built-in contraction rules.
pub fn realization_context(lexicon_dir: &Path, locale: Locale) -> Result<RealizationContext, FormatError> {
    let lexicon = load_lexicon(lexicon_dir, locale)?;
    Ok(RealizationContext::new(locale, lexicon).with_contractions(ContractionRules::defaults(locale)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotOut {
    pub field: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedStatement {
    pub statement_id: String,
    pub text: String,
    pub units: BTreeMap<String, Span>,
    pub slots: Vec<SlotOut>,
}

/// Rendered text of one data record. `text` joins the statements with
/// newlines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedDocument {
    pub instance: String,
    pub locale: Locale,
    pub text: String,
    pub statements: Vec<GeneratedStatement>,
}

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("record `{record}`: {source}")]
    Select { record: String, source: Box<RenderError> },
    #[error("record `{record}`, statement `{statement}`: {source}")]
    Render {
        record: String,
        statement: String,
        source: Box<RenderError>,
    },
}

pub fn generate_document(
    project: &Project,
    record: &DataRecord,
    ctx: &RealizationContext,
) -> Result<GeneratedDocument, GenerateError> {
    let selected = select_statements(project, record).map_err(|source| GenerateError::Select {
        record: record.provenance.clone(),
        source: Box::new(source),
    })?;
    let mut statements = Vec::new();
    for st in selected {
        let r = render_statement(st, record, ctx).map_err(|source| GenerateError::Render {
            record: record.provenance.clone(),
            statement: st.id.clone(),
            source: Box::new(source),
        })?;
        statements.push(GeneratedStatement {
            statement_id: r.statement_id,
            text: r.text,
            units: r.units,
            slots: r
                .slots
                .into_iter()
                .map(|s| SlotOut {
                    field: s.field,
                    span: s.span,
                })
                .collect(),
        });
    }
    let text = statements
        .iter()
        .map(|s| s.text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    Ok(GeneratedDocument {
        instance: record.provenance.clone(),
        locale: ctx.locale,
        text,
        statements,
    })
}

/// Renders every record; one document per record, in input order.
pub fn generate(
    project: &Project,
    records: &[DataRecord],
    ctx: &RealizationContext,
) -> Result<Vec<GeneratedDocument>, GenerateError> {
    records.iter().map(|r| generate_document(project, r, ctx)).collect()
}

/// JSON-lines form of [`generate`]: one document per line.
pub fn documents_to_jsonl(docs: &[GeneratedDocument]) -> String {
    let mut s = String::new();
    for d in docs {
        s.push_str(&serde_json::to_string(d).expect("documents serialize"));
        s.push('\n');
    }
    s
}

/// Everything learned while translating a project.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub project_id: String,
    pub source_locale: Locale,
    pub target_locale: Locale,
    /// Provenance of the data record used for rendering.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub statements: Vec<TransferReport>,
}

impl TranslationReport {
    pub fn is_clean(&self) -> bool {
        self.statements.iter().all(TransferReport::is_clean)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TranslateError {
    #[error("project `{0}` has statements but no data record was given")]
    NoData(String),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Project(#[from] ProjectError),
}

impl TranslateError {
    /// Statement the failure belongs to, when there is one.
    pub fn statement(&self) -> Option<&str> {
        match self {
            TranslateError::Transfer(
                TransferError::Render { statement, .. }
                | TransferError::Mark { statement, .. }
                | TransferError::Request { statement, .. }
                | TransferError::Backend { statement, .. },
            ) => Some(statement),
            _ => None,
        }
    }
}

/// Runs the transfer for every statement. Either every statement is
/// translated or an error is returned; nothing partial escapes.
///
/// All statements are rendered with `record`, regardless of their
/// conditions, so that each one is translated.
pub fn translate_project(
    project: &Project,
    record: Option<&DataRecord>,
    ctx: &RealizationContext,
    backend: &dyn Translator,
    parses: &BTreeMap<String, ParseFragment>,
    gazetteer: &Gazetteer,
    target: Locale,
) -> Result<(Project, TranslationReport), TranslateError> {
    let mut statements = Vec::with_capacity(project.statements.len());
    let mut reports = Vec::with_capacity(project.statements.len());
    if !project.statements.is_empty() {
        let record = record.ok_or_else(|| TranslateError::NoData(project.id.clone()))?;
        for st in &project.statements {
            let prepared = prepare_transfer(st, record, ctx, backend, target)?;
            let (t, report) = complete_transfer(&prepared, st, parses, gazetteer);
            statements.push(t);
            reports.push(report);
        }
    }
    let translated = Project::new(
        project.id.clone(),
        target,
        Vec::new(),
        statements,
        project.schema.clone(),
    )?;
    let report = TranslationReport {
        project_id: project.id.clone(),
        source_locale: project.source_locale,
        target_locale: target,
        instance: record.map(|r| r.provenance.clone()),
        statements: reports,
    };
    Ok((translated, report))
}

/// Parser input for every unit snippet that survives translation, in
/// statement order.
pub fn parser_input(
    project: &Project,
    record: &DataRecord,
    ctx: &RealizationContext,
    backend: &dyn Translator,
    target: Locale,
) -> Result<String, TranslateError> {
    let mut snippets = Vec::new();
    for st in &project.statements {
        snippets.extend(prepare_transfer(st, record, ctx, backend, target)?.snippets());
    }
    Ok(write_parser_input(
        snippets.iter().map(|(id, text)| (id.as_str(), text.as_str())),
        target,
    ))
}
