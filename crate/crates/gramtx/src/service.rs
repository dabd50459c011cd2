//! Review service: post-edit sessions over translated projects.
//!
//! Each session pairs one participant with one target locale. Every
//! statement carries its automatic template, the current edited template and
//! per-unit version counters; edits are checked against the legality matrix,
//! re-rendered for all four data variants, classified and appended to the
//! session's edit log.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use gramtx_core::features::{Case, Determiner, Gender, Number, NumeralType, Person, PronounType, Tense};
use gramtx_core::postedit::{classify_change, ChangeCategory, ChangeRecord, TEXT_UNIT_PREFIX};
use gramtx_core::realize::RealizationContext;
use gramtx_core::template::{
    render_statement, DataRecord, Project, RenderedStatement, Segment, StatementTemplate, UnitRef,
};
use gramtx_core::unit::{locale_violations, Feature};
use gramtx_core::{validate_unit, FeatureOverrides, FeatureSet, GrammarUnit, Locale, PartOfSpeech, Span};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::io::{append_record, StatementUnits};

/// Number of data variants every statement is previewed with.
pub const VARIANTS: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum SetupError {
    #[error("expected {VARIANTS} data variants, got {0}")]
    VariantCount(usize),
    #[error("target project for {locale} is in {found}")]
    TargetLocale { locale: Locale, found: Locale },
    #[error("no realization context for {0}")]
    MissingContext(Locale),
    #[error("source statement `{statement}` does not render: {message}")]
    SourceRender { statement: String, message: String },
}

/// Immutable inputs shared by all sessions.
pub struct ServiceConfig {
    source: Project,
    targets: BTreeMap<Locale, Project>,
    variants: Vec<DataRecord>,
    contexts: BTreeMap<Locale, RealizationContext>,
    log_dir: PathBuf,
    source_texts: BTreeMap<String, String>,
}

impl ServiceConfig {
    /// `targets` are translated projects keyed by their locale; `contexts`
    /// must cover the source locale and every target.
    pub fn new(
        source: Project,
        targets: Vec<Project>,
        variants: Vec<DataRecord>,
        contexts: Vec<RealizationContext>,
        log_dir: PathBuf,
    ) -> Result<ServiceConfig, SetupError> {
        if variants.len() != VARIANTS {
            return Err(SetupError::VariantCount(variants.len()));
        }
        let contexts: BTreeMap<Locale, RealizationContext> = contexts.into_iter().map(|c| (c.locale, c)).collect();
        let targets: BTreeMap<Locale, Project> = targets.into_iter().map(|p| (p.source_locale, p)).collect();
        for l in std::iter::once(source.source_locale).chain(targets.keys().copied()) {
            if !contexts.contains_key(&l) {
                return Err(SetupError::MissingContext(l));
            }
        }
        let ctx = &contexts[&source.source_locale];
        let mut source_texts = BTreeMap::new();
        for st in &source.statements {
            let r = render_statement(st, &variants[0], ctx).map_err(|e| SetupError::SourceRender {
                statement: st.id.clone(),
                message: e.to_string(),
            })?;
            source_texts.insert(st.id.clone(), r.text);
        }
        Ok(ServiceConfig {
            source,
            targets,
            variants,
            contexts,
            log_dir,
            source_texts,
        })
    }
}

#[derive(Debug, Clone)]
struct StatementState {
    auto: StatementTemplate,
    current: StatementTemplate,
    unit_versions: BTreeMap<String, u64>,
    text_version: u64,
}

#[derive(Debug, Clone)]
struct SessionState {
    session_id: String,
    participant_id: String,
    target_locale: Locale,
    completed: bool,
    statements: Vec<StatementState>,
    records: Vec<ChangeRecord>,
}

impl SessionState {
    fn statement_of_unit(&self, unit_id: &str) -> Option<usize> {
        self.statements
            .iter()
            .position(|s| s.current.units.contains_key(unit_id))
    }

    fn statement_index(&self, statement_id: &str) -> Option<usize> {
        self.statements.iter().position(|s| s.current.id == statement_id)
    }
}

/// A session: a snapshot for readers and a lock that serializes writers,
/// so the edit log has a single appender.
struct Session {
    snapshot: RwLock<Arc<SessionState>>,
    writer: Mutex<()>,
}

/// Shared service state.
pub struct AppState {
    config: ServiceConfig,
    sessions: RwLock<BTreeMap<String, Arc<Session>>>,
    next_id: AtomicU64,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Arc<AppState> {
        Arc::new(AppState {
            config,
            sessions: RwLock::new(BTreeMap::new()),
            next_id: AtomicU64::new(1),
        })
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("unknown session `{id}`")))
    }

    fn ctx(&self, locale: Locale) -> &RealizationContext {
        &self.config.contexts[&locale]
    }

    fn log_path(&self, session_id: &str) -> PathBuf {
        self.config.log_dir.join(format!("{session_id}.jsonl"))
    }
}

// ---------------------------------------------------------------------------
// Errors

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            body: json!({ "error": message.into() }),
        }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> ApiError {
        self.body[key] = serde_json::to_value(value).expect("error details serialize");
        self
    }

    fn not_found(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, message)
    }

    fn conflict(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::CONFLICT, message)
    }

    fn unprocessable(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }

    fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }

    fn internal(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

// ---------------------------------------------------------------------------
// Payloads

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateSession {
    pub participant_id: String,
    pub target_locale: Locale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub session_id: String,
    pub project_id: String,
    pub participant_id: String,
    pub source_locale: Locale,
    pub target_locale: Locale,
    pub completed: bool,
    pub statements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentView {
    Literal { index: usize, text: String },
    Slot { index: usize, field: String },
    Unit { index: usize, unit_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitView {
    pub unit: GrammarUnit,
    pub version: u64,
    /// Whether the template references the unit. Units lost in transfer are
    /// kept unreferenced.
    pub referenced: bool,
    /// Span and text in the first variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementView {
    pub statement_id: String,
    pub source_text: String,
    pub target_text: String,
    pub variants: Vec<String>,
    pub variant_instances: Vec<String>,
    pub text_version: u64,
    pub segments: Vec<SegmentView>,
    pub units: BTreeMap<String, UnitView>,
    /// Units whose current state differs from the automatic transfer.
    pub changed_units: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditResponse {
    pub statement_id: String,
    pub unit_id: String,
    pub version: u64,
    pub text_version: u64,
    /// Categories of the appended record; empty when nothing was logged.
    pub categories: Vec<ChangeCategory>,
    pub logged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<GrammarUnit>,
    pub target_text: String,
    pub variants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementReport {
    pub statement_id: String,
    pub unit_edits: u64,
    pub text_edits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionReport {
    pub session: SessionInfo,
    /// Unit edit records; text-only edits are counted separately.
    pub unit_edits: u64,
    pub text_edits: u64,
    pub categories: BTreeMap<ChangeCategory, u64>,
    pub statements: Vec<StatementReport>,
    /// Automatic and current units per statement, as analytics input.
    pub units: Vec<StatementUnits>,
    pub records: Vec<ChangeRecord>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AddUnit {
    pub version: u64,
    pub unit: NewUnit,
    /// Literal text the unit replaces; the unit is appended when absent.
    #[serde(default)]
    pub replace: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NewUnit {
    pub id: String,
    pub pos: PartOfSpeech,
    pub features: FeatureSet,
    #[serde(default)]
    pub agreement_source: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RemoveUnitQuery {
    pub version: u64,
    /// Keep the unit's current text as a literal.
    #[serde(default)]
    pub keep_text: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct EditLiteral {
    pub version: u64,
    pub text: String,
}

// ---------------------------------------------------------------------------
// Helpers

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn info(state: &AppState, s: &SessionState) -> SessionInfo {
    SessionInfo {
        session_id: s.session_id.clone(),
        project_id: state.config.source.id.clone(),
        participant_id: s.participant_id.clone(),
        source_locale: state.config.source.source_locale,
        target_locale: s.target_locale,
        completed: s.completed,
        statements: s.statements.len(),
    }
}

/// Renders all variants; the first failure is reported with the variant's
/// instance.
fn render_variants(
    state: &AppState,
    stmt: &StatementTemplate,
    locale: Locale,
) -> Result<Vec<RenderedStatement>, (String, String)> {
    let ctx = state.ctx(locale);
    state
        .config
        .variants
        .iter()
        .map(|v| render_statement(stmt, v, ctx).map_err(|e| (v.provenance.clone(), e.to_string())))
        .collect()
}

fn unrenderable(instance: String, message: String) -> ApiError {
    ApiError::unprocessable("edit makes the statement unrenderable")
        .with("instance", instance)
        .with("detail", message)
}

fn segment_views(stmt: &StatementTemplate) -> Vec<SegmentView> {
    stmt.segments
        .iter()
        .enumerate()
        .map(|(index, s)| match s {
            Segment::Literal(text) => SegmentView::Literal {
                index,
                text: text.clone(),
            },
            Segment::Slot(d) => SegmentView::Slot {
                index,
                field: d.field.clone(),
            },
            Segment::Unit(r) => SegmentView::Unit {
                index,
                unit_id: r.unit_id.clone(),
            },
        })
        .collect()
}

fn statement_view(state: &AppState, session: &SessionState, st: &StatementState) -> StatementView {
    let ctx = state.ctx(session.target_locale);
    let mut variants = Vec::with_capacity(VARIANTS);
    let mut first: Option<RenderedStatement> = None;
    for v in &state.config.variants {
        match render_statement(&st.current, v, ctx) {
            Ok(r) => {
                variants.push(r.text.clone());
                first.get_or_insert(r);
            }
            Err(e) => variants.push(format!("<render error: {e}>")),
        }
    }
    let referenced: BTreeSet<&str> = st.current.unit_refs().map(|r| r.unit_id.as_str()).collect();
    let units = st
        .current
        .units
        .iter()
        .map(|(id, u)| {
            (
                id.clone(),
                UnitView {
                    unit: u.clone(),
                    version: st.unit_versions.get(id).copied().unwrap_or(0),
                    referenced: referenced.contains(id.as_str()),
                    span: first.as_ref().and_then(|r| r.units.get(id).copied()),
                    text: first.as_ref().and_then(|r| r.unit_texts.get(id).cloned()),
                },
            )
        })
        .collect();
    let changed_units = st
        .current
        .units
        .iter()
        .filter(|(id, u)| st.auto.units.get(*id) != Some(*u))
        .map(|(id, _)| id.clone())
        .chain(
            st.auto
                .units
                .keys()
                .filter(|id| !st.current.units.contains_key(*id))
                .cloned(),
        )
        .collect();
    StatementView {
        statement_id: st.current.id.clone(),
        source_text: state
            .config
            .source_texts
            .get(&st.current.id)
            .cloned()
            .unwrap_or_default(),
        target_text: variants[0].clone(),
        variant_instances: state.config.variants.iter().map(|v| v.provenance.clone()).collect(),
        variants,
        text_version: st.text_version,
        segments: segment_views(&st.current),
        units,
        changed_units,
    }
}

/// Checks the session is open and the caller saw the latest version.
fn check_writable(s: &SessionState, expected: u64, actual: u64) -> ApiResult<()> {
    if s.completed {
        return Err(ApiError::conflict("session is completed"));
    }
    if expected != actual {
        return Err(ApiError::conflict("stale version").with("current_version", actual));
    }
    Ok(())
}

fn validate_for_locale(unit: &GrammarUnit) -> ApiResult<()> {
    let report = validate_unit(unit);
    if !report.is_valid() {
        return Err(
            ApiError::unprocessable("unit violates the feature legality matrix").with("violations", &report.violations)
        );
    }
    let lv = locale_violations(unit);
    if !lv.is_empty() {
        return Err(ApiError::unprocessable("unit uses values the locale cannot express").with("violations", &lv));
    }
    Ok(())
}

/// Appends `record` to the log and returns it; state is only swapped after
/// the log write succeeds.
fn commit(
    state: &AppState,
    session: &Session,
    mut next: SessionState,
    record: Option<ChangeRecord>,
) -> ApiResult<Arc<SessionState>> {
    if let Some(r) = record {
        append_record(&state.log_path(&next.session_id), &r).map_err(|e| ApiError::internal(e.to_string()))?;
        next.records.push(r);
    }
    let next = Arc::new(next);
    *session.snapshot.write() = next.clone();
    Ok(next)
}

fn new_record(
    s: &SessionState,
    statement_id: &str,
    unit_id: &str,
    categories: BTreeSet<ChangeCategory>,
) -> ChangeRecord {
    ChangeRecord {
        session_id: s.session_id.clone(),
        participant_id: s.participant_id.clone(),
        locale: s.target_locale,
        statement_id: statement_id.into(),
        unit_id: unit_id.into(),
        categories,
        before: None,
        after: None,
        before_text: None,
        after_text: None,
        timestamp: now_ms(),
    }
}

/// Keys a unit edit body may carry besides `version` and `pos`.
pub const OVERRIDE_KEYS: [&str; 13] = [
    "lemma",
    "case",
    "number",
    "tense",
    "person",
    "gender",
    "preposition",
    "adjectives",
    "numerals",
    "conjunctions",
    "determiner",
    "pronoun_type",
    "head_index",
];

/// Splits a partial-feature body into its version, optional part of speech
/// and feature overrides. Unknown keys are rejected.
fn parse_edit_body(body: serde_json::Value) -> ApiResult<(u64, Option<PartOfSpeech>, FeatureOverrides)> {
    let serde_json::Value::Object(mut map) = body else {
        return Err(ApiError::bad_request("body must be a JSON object"));
    };
    let version = map
        .remove("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| ApiError::bad_request("`version` (non-negative integer) is required"))?;
    let pos = map
        .remove("pos")
        .map(serde_json::from_value::<PartOfSpeech>)
        .transpose()
        .map_err(|e| ApiError::unprocessable(format!("pos: {e}")))?;
    if let Some(k) = map.keys().find(|k| !OVERRIDE_KEYS.contains(&k.as_str())) {
        return Err(ApiError::unprocessable(format!("unknown feature `{k}`")));
    }
    let ov: FeatureOverrides =
        serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| ApiError::unprocessable(e.to_string()))?;
    Ok((version, pos, ov))
}

// ---------------------------------------------------------------------------
// Handlers

async fn create_session(
    State(state): State<Arc<AppState>>,
    Json(body): Json<CreateSession>,
) -> ApiResult<(StatusCode, Json<SessionInfo>)> {
    let target = state
        .config
        .targets
        .get(&body.target_locale)
        .ok_or_else(|| ApiError::unprocessable(format!("no translated project for {}", body.target_locale)))?;
    let n = state.next_id.fetch_add(1, Ordering::SeqCst);
    let session_id = format!("session-{n:04}");
    let statements = target
        .statements
        .iter()
        .map(|st| StatementState {
            auto: st.clone(),
            current: st.clone(),
            unit_versions: st.units.keys().map(|k| (k.clone(), 0)).collect(),
            text_version: 0,
        })
        .collect();
    let s = SessionState {
        session_id: session_id.clone(),
        participant_id: body.participant_id,
        target_locale: body.target_locale,
        completed: false,
        statements,
        records: Vec::new(),
    };
    let out = info(&state, &s);
    let session = Arc::new(Session {
        snapshot: RwLock::new(Arc::new(s)),
        writer: Mutex::new(()),
    });
    state.sessions.write().insert(session_id, session);
    Ok((StatusCode::CREATED, Json(out)))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionInfo>> {
    let s = state.session(&id)?.snapshot.read().clone();
    Ok(Json(info(&state, &s)))
}

async fn list_statements(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Vec<StatementView>>> {
    let s = state.session(&id)?.snapshot.read().clone();
    Ok(Json(
        s.statements.iter().map(|st| statement_view(&state, &s, st)).collect(),
    ))
}

async fn get_statement(
    State(state): State<Arc<AppState>>,
    Path((id, statement_id)): Path<(String, String)>,
) -> ApiResult<Json<StatementView>> {
    let s = state.session(&id)?.snapshot.read().clone();
    let i = s
        .statement_index(&statement_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown statement `{statement_id}`")))?;
    Ok(Json(statement_view(&state, &s, &s.statements[i])))
}

async fn edit_unit(
    State(state): State<Arc<AppState>>,
    Path((id, unit_id)): Path<(String, String)>,
    Json(body): Json<serde_json::Value>,
) -> ApiResult<Json<EditResponse>> {
    let session = state.session(&id)?;
    let _writer = session.writer.lock();
    let current = session.snapshot.read().clone();
    let si = current
        .statement_of_unit(&unit_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown unit `{unit_id}`")))?;
    let (version, pos, ov) = parse_edit_body(body)?;
    let st = &current.statements[si];
    let unit_version = st.unit_versions.get(&unit_id).copied().unwrap_or(0);
    check_writable(&current, version, unit_version)?;

    let before = st.current.units[&unit_id].clone();
    let mut after = before.clone();
    after.features = ov.apply_to(&before.features);
    if let Some(p) = pos {
        after.pos = p;
    }
    validate_for_locale(&after)?;

    let locale = current.target_locale;
    if after == before {
        let rendered = render_variants(&state, &st.current, locale).map_err(|(i, m)| unrenderable(i, m))?;
        return Ok(Json(EditResponse {
            statement_id: st.current.id.clone(),
            unit_id,
            version: unit_version,
            text_version: st.text_version,
            categories: Vec::new(),
            logged: false,
            unit: Some(before),
            target_text: rendered[0].text.clone(),
            variants: rendered.into_iter().map(|r| r.text).collect(),
        }));
    }

    let mut template = st.current.clone();
    template.units.insert(unit_id.clone(), after.clone());
    let old = render_variants(&state, &st.current, locale).ok();
    let rendered = render_variants(&state, &template, locale).map_err(|(i, m)| unrenderable(i, m))?;
    let before_text = old.as_ref().and_then(|o| o[0].unit_texts.get(&unit_id).cloned());
    let after_text = rendered[0].unit_texts.get(&unit_id).cloned();
    let categories = classify_change(
        Some(&before),
        Some(&after),
        before_text.as_deref(),
        after_text.as_deref(),
    )
    .map_err(|e| ApiError::internal(e.to_string()))?;

    let record = (!categories.is_empty()).then(|| ChangeRecord {
        before: Some(before),
        after: Some(after.clone()),
        before_text,
        after_text,
        ..new_record(&current, &template.id, &unit_id, categories.clone())
    });
    let mut next = (*current).clone();
    let nst = &mut next.statements[si];
    nst.current = template;
    let new_version = unit_version + 1;
    nst.unit_versions.insert(unit_id.clone(), new_version);
    let text_version = nst.text_version;
    let statement_id = nst.current.id.clone();
    let logged = record.is_some();
    commit(&state, &session, next, record)?;
    Ok(Json(EditResponse {
        statement_id,
        unit_id,
        version: new_version,
        text_version,
        categories: categories.into_iter().collect(),
        logged,
        unit: Some(after),
        target_text: rendered[0].text.clone(),
        variants: rendered.into_iter().map(|r| r.text).collect(),
    }))
}

async fn remove_unit(
    State(state): State<Arc<AppState>>,
    Path((id, unit_id)): Path<(String, String)>,
    Query(q): Query<RemoveUnitQuery>,
) -> ApiResult<Json<EditResponse>> {
    let session = state.session(&id)?;
    let _writer = session.writer.lock();
    let current = session.snapshot.read().clone();
    let si = current
        .statement_of_unit(&unit_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown unit `{unit_id}`")))?;
    let st = &current.statements[si];
    let unit_version = st.unit_versions.get(&unit_id).copied().unwrap_or(0);
    check_writable(&current, q.version, unit_version)?;
    let locale = current.target_locale;

    let old = render_variants(&state, &st.current, locale).ok();
    let before_text = old.as_ref().and_then(|o| o[0].unit_texts.get(&unit_id).cloned());
    let mut template = st.current.clone();
    let before = template.units.remove(&unit_id).expect("unit located above");
    let mut segments = Vec::with_capacity(template.segments.len());
    for seg in template.segments {
        match seg {
            Segment::Unit(r) if r.unit_id == unit_id => {
                if q.keep_text {
                    if let Some(t) = &before_text {
                        segments.push(Segment::Literal(t.clone()));
                    }
                }
            }
            other => segments.push(other),
        }
    }
    template.segments = merge_literals(segments);
    let rendered = render_variants(&state, &template, locale).map_err(|(i, m)| unrenderable(i, m))?;
    let categories = classify_change(Some(&before), None, before_text.as_deref(), None)
        .map_err(|e| ApiError::internal(e.to_string()))?;
    let record = ChangeRecord {
        before: Some(before),
        before_text,
        ..new_record(&current, &template.id, &unit_id, categories.clone())
    };
    let mut next = (*current).clone();
    let nst = &mut next.statements[si];
    nst.current = template;
    nst.unit_versions.remove(&unit_id);
    nst.text_version += 1;
    let (statement_id, text_version) = (nst.current.id.clone(), nst.text_version);
    commit(&state, &session, next, Some(record))?;
    Ok(Json(EditResponse {
        statement_id,
        unit_id,
        version: unit_version + 1,
        text_version,
        categories: categories.into_iter().collect(),
        logged: true,
        unit: None,
        target_text: rendered[0].text.clone(),
        variants: rendered.into_iter().map(|r| r.text).collect(),
    }))
}

/// Joins adjacent literals, collapsing the doubled space a removed unit
/// leaves behind.
fn merge_literals(segments: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for s in segments {
        match (out.last_mut(), s) {
            (Some(Segment::Literal(prev)), Segment::Literal(t)) => {
                let t = if prev.ends_with(' ') {
                    t.strip_prefix(' ').unwrap_or(&t)
                } else {
                    &t
                };
                prev.push_str(t)
            }
            (_, Segment::Literal(t)) if t.is_empty() => {}
            (_, s) => out.push(s),
        }
    }
    out
}

async fn add_unit(
    State(state): State<Arc<AppState>>,
    Path((id, statement_id)): Path<(String, String)>,
    Json(body): Json<AddUnit>,
) -> ApiResult<(StatusCode, Json<EditResponse>)> {
    let session = state.session(&id)?;
    let _writer = session.writer.lock();
    let current = session.snapshot.read().clone();
    let si = current
        .statement_index(&statement_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown statement `{statement_id}`")))?;
    let st = &current.statements[si];
    check_writable(&current, body.version, st.text_version)?;
    let uid = body.unit.id.clone();
    if current.statement_of_unit(&uid).is_some() {
        return Err(ApiError::conflict(format!("unit id `{uid}` is already in use")));
    }
    let mut unit = GrammarUnit::new(uid.clone(), current.target_locale, body.unit.pos, body.unit.features);
    unit.agreement_source = body.unit.agreement_source;
    validate_for_locale(&unit)?;

    let mut template = st.current.clone();
    let unit_ref = Segment::Unit(UnitRef {
        unit_id: uid.clone(),
        ..UnitRef::default()
    });
    match &body.replace {
        None => template.segments.push(unit_ref),
        Some(needle) => {
            let pos = template
                .segments
                .iter()
                .enumerate()
                .find_map(|(i, s)| match s {
                    Segment::Literal(t) => t.find(needle.as_str()).map(|at| (i, at)),
                    _ => None,
                })
                .ok_or_else(|| ApiError::unprocessable(format!("literal text `{needle}` not found")))?;
            let (i, at) = pos;
            let Segment::Literal(t) = template.segments.remove(i) else {
                unreachable!("position found on a literal")
            };
            let (head, tail) = (t[..at].to_string(), t[at + needle.len()..].to_string());
            let parts = [Segment::Literal(head), unit_ref, Segment::Literal(tail)];
            template.segments.splice(i..i, parts);
            template.segments = merge_literals(std::mem::take(&mut template.segments));
        }
    }
    template.units.insert(uid.clone(), unit.clone());
    let rendered = render_variants(&state, &template, current.target_locale).map_err(|(i, m)| unrenderable(i, m))?;
    let after_text = rendered[0].unit_texts.get(&uid).cloned();
    let categories = classify_change(None, Some(&unit), None, after_text.as_deref())
        .map_err(|e| ApiError::internal(e.to_string()))?;
    let record = ChangeRecord {
        after: Some(unit.clone()),
        after_text,
        ..new_record(&current, &statement_id, &uid, categories.clone())
    };
    let mut next = (*current).clone();
    let nst = &mut next.statements[si];
    nst.current = template;
    nst.unit_versions.insert(uid.clone(), 0);
    nst.text_version += 1;
    let text_version = nst.text_version;
    commit(&state, &session, next, Some(record))?;
    Ok((
        StatusCode::CREATED,
        Json(EditResponse {
            statement_id,
            unit_id: uid,
            version: 0,
            text_version,
            categories: categories.into_iter().collect(),
            logged: true,
            unit: Some(unit),
            target_text: rendered[0].text.clone(),
            variants: rendered.into_iter().map(|r| r.text).collect(),
        }),
    ))
}

async fn edit_literal(
    State(state): State<Arc<AppState>>,
    Path((id, statement_id, index)): Path<(String, String, usize)>,
    Json(body): Json<EditLiteral>,
) -> ApiResult<Json<EditResponse>> {
    let session = state.session(&id)?;
    let _writer = session.writer.lock();
    let current = session.snapshot.read().clone();
    let si = current
        .statement_index(&statement_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown statement `{statement_id}`")))?;
    let st = &current.statements[si];
    let Some(Segment::Literal(old)) = st.current.segments.get(index) else {
        return Err(ApiError::not_found(format!("segment {index} is not literal text")));
    };
    check_writable(&current, body.version, st.text_version)?;
    let locale = current.target_locale;
    let unit_id = format!("{TEXT_UNIT_PREFIX}{statement_id}");
    if *old == body.text {
        let rendered = render_variants(&state, &st.current, locale).map_err(|(i, m)| unrenderable(i, m))?;
        return Ok(Json(EditResponse {
            statement_id,
            unit_id,
            version: st.text_version,
            text_version: st.text_version,
            categories: Vec::new(),
            logged: false,
            unit: None,
            target_text: rendered[0].text.clone(),
            variants: rendered.into_iter().map(|r| r.text).collect(),
        }));
    }
    let mut template = st.current.clone();
    template.segments[index] = Segment::Literal(body.text.clone());
    let rendered = render_variants(&state, &template, locale).map_err(|(i, m)| unrenderable(i, m))?;
    let record = ChangeRecord {
        before_text: Some(old.clone()),
        after_text: Some(body.text),
        ..new_record(&current, &statement_id, &unit_id, BTreeSet::new())
    };
    let mut next = (*current).clone();
    let nst = &mut next.statements[si];
    nst.current = template;
    nst.text_version += 1;
    let text_version = nst.text_version;
    commit(&state, &session, next, Some(record))?;
    Ok(Json(EditResponse {
        statement_id,
        unit_id,
        version: text_version,
        text_version,
        categories: Vec::new(),
        logged: true,
        unit: None,
        target_text: rendered[0].text.clone(),
        variants: rendered.into_iter().map(|r| r.text).collect(),
    }))
}

async fn complete_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionInfo>> {
    let session = state.session(&id)?;
    let _writer = session.writer.lock();
    let mut next = (**session.snapshot.read()).clone();
    next.completed = true;
    let next = commit(&state, &session, next, None)?;
    Ok(Json(info(&state, &next)))
}

/// Report of one session, as served by `GET /sessions/{id}/report`.
fn build_report(state: &AppState, s: &SessionState) -> SessionReport {
    let mut categories = BTreeMap::new();
    let mut per_statement: BTreeMap<&str, (u64, u64)> =
        s.statements.iter().map(|st| (st.current.id.as_str(), (0, 0))).collect();
    let (mut unit_edits, mut text_edits) = (0, 0);
    for r in &s.records {
        let e = per_statement.entry(r.statement_id.as_str()).or_default();
        if r.is_text_only() {
            text_edits += 1;
            e.1 += 1;
        } else {
            unit_edits += 1;
            e.0 += 1;
            for &c in &r.categories {
                *categories.entry(c).or_insert(0) += 1;
            }
        }
    }
    let statements = s
        .statements
        .iter()
        .map(|st| {
            let (u, t) = per_statement[st.current.id.as_str()];
            StatementReport {
                statement_id: st.current.id.clone(),
                unit_edits: u,
                text_edits: t,
            }
        })
        .collect();
    let units = s
        .statements
        .iter()
        .map(|st| StatementUnits {
            session_id: s.session_id.clone(),
            statement_id: st.current.id.clone(),
            locale: s.target_locale,
            auto: st.auto.units.values().cloned().collect(),
            edited: st.current.units.values().cloned().collect(),
        })
        .collect();
    SessionReport {
        session: info(state, s),
        unit_edits,
        text_edits,
        categories,
        statements,
        units,
        records: s.records.clone(),
    }
}

async fn report(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionReport>> {
    let s = state.session(&id)?.snapshot.read().clone();
    Ok(Json(build_report(&state, &s)))
}

/// Legal features per part of speech and legal values per locale, for
/// clients that build edit forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalityManifest {
    pub features: BTreeMap<PartOfSpeech, Vec<Feature>>,
    pub values: BTreeMap<String, Vec<String>>,
    pub locales: BTreeMap<Locale, LocaleManifest>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocaleManifest {
    pub cases: Vec<Case>,
    pub numbers: Vec<Number>,
    pub full_realization: bool,
}

pub fn legality_manifest() -> LegalityManifest {
    fn labels<T: Copy>(all: &[T], f: fn(T) -> &'static str) -> Vec<String> {
        all.iter().map(|&x| f(x).to_string()).collect()
    }
    let features = PartOfSpeech::ALL
        .iter()
        .map(|&p| (p, Feature::ALL.iter().copied().filter(|f| f.legal_on(p)).collect()))
        .collect();
    let values = BTreeMap::from([
        ("case".to_string(), labels(&Case::ALL, Case::label)),
        ("number".to_string(), labels(&Number::ALL, Number::label)),
        ("tense".to_string(), labels(&Tense::ALL, Tense::label)),
        ("person".to_string(), labels(&Person::ALL, Person::label)),
        ("gender".to_string(), labels(&Gender::ALL, Gender::label)),
        ("determiner".to_string(), labels(&Determiner::ALL, Determiner::label)),
        (
            "pronoun_type".to_string(),
            labels(&PronounType::ALL, PronounType::label),
        ),
        (
            "numeral_type".to_string(),
            labels(&NumeralType::ALL, NumeralType::label),
        ),
    ]);
    let locales = Locale::ALL
        .iter()
        .map(|&l| {
            (
                l,
                LocaleManifest {
                    cases: l.legal_cases().to_vec(),
                    numbers: Number::ALL
                        .iter()
                        .copied()
                        .filter(|&n| n != Number::Dual || l.has_dual())
                        .collect(),
                    full_realization: l.has_full_realization(),
                },
            )
        })
        .collect();
    LegalityManifest {
        features,
        values,
        locales,
    }
}

async fn legality() -> Json<LegalityManifest> {
    Json(legality_manifest())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/legality", get(legality))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/statements", get(list_statements))
        .route("/sessions/{id}/statements/{statement_id}", get(get_statement))
        .route("/sessions/{id}/statements/{statement_id}/units", post(add_unit))
        .route(
            "/sessions/{id}/statements/{statement_id}/literals/{index}",
            patch(edit_literal),
        )
        .route("/sessions/{id}/units/{unit_id}", patch(edit_unit).delete(remove_unit))
        .route("/sessions/{id}/complete", post(complete_session))
        .route("/sessions/{id}/report", get(report))
        .with_state(state)
}
