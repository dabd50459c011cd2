//! Fixture loading shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use gramtx::io;
use gramtx::pipeline::{realization_context, translate_project, TranslationReport};
use gramtx_core::realize::RealizationContext;
use gramtx_core::template::{DataRecord, Project};
use gramtx_core::transfer::{Gazetteer, ParseFragment};
use gramtx_core::Locale;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

pub fn project(name: &str) -> Project {
    io::load_project(&fixture(name)).unwrap()
}

pub fn bulls_nuggets() -> Project {
    project("bulls_nuggets.project.json")
}

pub fn saturday() -> Project {
    project("saturday.project.json")
}

pub fn records(project: &Project, name: &str) -> Vec<DataRecord> {
    io::load_data(&fixture(name), &project.schema).unwrap()
}

pub fn ctx(locale: Locale) -> RealizationContext {
    realization_context(&fixture("lexicon"), locale).unwrap()
}

pub fn parses() -> BTreeMap<String, ParseFragment> {
    io::load_parses(&fixture("parses.de-DE.conllu"), Locale::DeDe).unwrap()
}

pub fn gazetteer() -> Gazetteer {
    io::load_gazetteer(&fixture("gazetteer.txt")).unwrap()
}

/// Translates a fixture project to German with the fixture TM, parses and
/// gazetteer, rendering with the first record of `data`.
pub fn translate_de(project: &Project, data: &str) -> (Project, TranslationReport) {
    let tm = io::load_tm(&fixture("tm.de-DE.json")).unwrap();
    let recs = records(project, data);
    translate_project(
        project,
        recs.first(),
        &ctx(project.source_locale),
        &tm,
        &parses(),
        &gazetteer(),
        Locale::DeDe,
    )
    .unwrap()
}

/// [`translate_de`] with an explicit gazetteer.
pub fn translate_de_with(project: &Project, data: &str, gazetteer: &Gazetteer) -> Project {
    let tm = io::load_tm(&fixture("tm.de-DE.json")).unwrap();
    let recs = records(project, data);
    translate_project(
        project,
        recs.first(),
        &ctx(project.source_locale),
        &tm,
        &parses(),
        gazetteer,
        Locale::DeDe,
    )
    .unwrap()
    .0
}

/// Review service over the fixture project with `target` as its German
/// project; edit logs go to `log_dir`.
pub fn service(target: Project, log_dir: &std::path::Path) -> axum::Router {
    use gramtx::service::{router, AppState, ServiceConfig, VARIANTS};
    let source = bulls_nuggets();
    let mut variants = records(&source, "data.jsonl");
    variants.truncate(VARIANTS);
    let cfg = ServiceConfig::new(
        source,
        vec![target],
        variants,
        vec![ctx(Locale::EnUs), ctx(Locale::DeDe)],
        log_dir.to_path_buf(),
    )
    .unwrap();
    router(AppState::new(cfg))
}

/// Sends one JSON request and returns the status and decoded body.
pub async fn call(
    app: &axum::Router,
    method: &str,
    uri: &str,
    body: Option<serde_json::Value>,
) -> (axum::http::StatusCode, serde_json::Value) {
    use http_body_util::BodyExt;
    use tower::ServiceExt;
    let mut req = axum::http::Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            axum::body::Body::from(serde_json::to_vec(&v).unwrap())
        }
        None => axum::body::Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        serde_json::Value::Null
    } else {
        serde_json::from_slice(&bytes)
            .unwrap_or_else(|_| serde_json::Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

/// Creates a German session and returns its id.
pub async fn open_session(app: &axum::Router, participant: &str) -> String {
    let (status, body) = call(
        app,
        "POST",
        "/sessions",
        Some(serde_json::json!({"participant_id": participant, "target_locale": "de-DE"})),
    )
    .await;
    assert_eq!(status, axum::http::StatusCode::CREATED, "{body}");
    body["session_id"].as_str().unwrap().to_string()
}

/// Lines of a session's edit log; none when the log does not exist.
pub fn log_lines(log_dir: &std::path::Path, session: &str) -> Vec<gramtx_core::postedit::ChangeRecord> {
    let path = log_dir.join(format!("{session}.jsonl"));
    if !path.exists() {
        return Vec::new();
    }
    io::load_edit_log(&path).unwrap()
}
