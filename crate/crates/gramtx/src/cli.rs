//! Command-line interface: `generate`, `translate`, `analyze` and `serve`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gramtx_core::backend::Translator;
use gramtx_core::transfer::Gazetteer;
use gramtx_core::Locale;

use crate::analyze::{analyze, check_records, CHANGE_TABLE_CSV, CHANGE_TABLE_JSON, PARTICIPANTS_CSV, SUMMARY_JSON};
use crate::config::{BackendKind, Config, BACKEND_URL_ENV};
use crate::http_backend::HttpTranslator;
use crate::io::{
    load_data, load_edit_log, load_gazetteer, load_parses, load_project, load_tm, load_units_file, to_json_pretty,
    write_atomic, ProjectFile,
};
use crate::pipeline::{documents_to_jsonl, generate, parser_input, realization_context, translate_project};
use crate::service::{router, AppState, ServiceConfig, VARIANTS};

#[derive(Debug, Parser)]
#[command(
    name = "gramtx",
    version,
    about = "Grammar-unit data-to-text generation and transfer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render every data record with a project.
    Generate(GenerateArgs),
    /// Translate a project into another locale.
    Translate(TranslateArgs),
    /// Build the change table, participant counts and summary from edit logs.
    Analyze(AnalyzeArgs),
    /// Run the review service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Project file (JSON).
    #[arg(long)]
    pub project: PathBuf,
    /// JSON lines, one data record per line.
    #[arg(long)]
    pub data: PathBuf,
    /// Output locale; the project's source locale by default.
    #[arg(long)]
    pub locale: Option<Locale>,
    /// Directory holding `<locale>.json` lexicons.
    #[arg(long)]
    pub lexicon_dir: PathBuf,
    /// JSON lines, one rendered document per record.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    /// Project file (JSON).
    #[arg(long)]
    pub project: PathBuf,
    /// Data records; the first one is rendered for translation.
    #[arg(long)]
    pub data: PathBuf,
    /// Target locale.
    #[arg(long)]
    pub locale: Locale,
    /// Backend, gazetteer and lexicon settings (TOML or JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// CoNLL-U parses of the translated unit snippets.
    #[arg(long, required_unless_present = "parser_input")]
    pub parses: Option<PathBuf>,
    /// Translated project file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Transfer report; `<out>.report.json` by default.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the parser input for the translated snippets here and stop.
    #[arg(long)]
    pub parser_input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Edit log (JSON lines); may be repeated.
    #[arg(long = "log", required = true)]
    pub logs: Vec<PathBuf>,
    /// Unit inventory: totals per locale and automatic/edited units.
    #[arg(long)]
    pub units: PathBuf,
    /// Directory receiving the report files.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Keep records of sessions listed as incomplete.
    #[arg(long)]
    pub include_incomplete: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Project file (JSON).
    #[arg(long)]
    pub project: PathBuf,
    /// Data records; the first four are the preview variants.
    #[arg(long)]
    pub data: PathBuf,
    /// Directory holding `<locale>.json` lexicons.
    #[arg(long)]
    pub lexicon_dir: PathBuf,
    /// Translated project per locale, as `LOCALE=PATH`; may be repeated.
    #[arg(long = "target", value_parser = parse_target, required = true)]
    pub targets: Vec<(Locale, PathBuf)>,
    /// Directory receiving one edit log per session.
    #[arg(long)]
    pub log_dir: PathBuf,
    /// Listen address.
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
}

fn parse_target(s: &str) -> Result<(Locale, PathBuf), String> {
    let (l, p) = s
        .split_once('=')
        .ok_or_else(|| format!("expected LOCALE=PATH, got `{s}`"))?;
    Ok((l.parse().map_err(|e| format!("{e}"))?, PathBuf::from(p)))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => run_generate(&a),
        Command::Translate(a) => run_translate(&a),
        Command::Analyze(a) => run_analyze(&a),
        Command::Serve(a) => run_serve(a),
    }
}

pub fn run_generate(a: &GenerateArgs) -> Result<()> {
    let project = load_project(&a.project)?;
    let records = load_data(&a.data, &project.schema)?;
    let locale = a.locale.unwrap_or(project.source_locale);
    let ctx = realization_context(&a.lexicon_dir, locale)?;
    let docs = generate(&project, &records, &ctx)?;
    write_atomic(&a.out, documents_to_jsonl(&docs).as_bytes())?;
    Ok(())
}

fn backend(cfg: &Config) -> Result<Box<dyn Translator>> {
    Ok(match cfg.backend.kind {
        BackendKind::Tm => {
            let path = cfg
                .backend
                .tm_path
                .as_deref()
                .context("backend.tm_path is required for the tm backend")?;
            Box::new(load_tm(path)?)
        }
        BackendKind::Http => Box::new(
            HttpTranslator::from_config(&cfg.backend)
                .with_context(|| format!("backend.url (or {BACKEND_URL_ENV}) is required for the http backend"))?,
        ),
    })
}

fn default_report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

pub fn run_translate(a: &TranslateArgs) -> Result<()> {
    let cfg = Config::load(&a.config)?.with_env();
    let project = load_project(&a.project)?;
    let records = load_data(&a.data, &project.schema)?;
    let lexicon_dir = cfg.lexicon_dir.clone().context("config needs lexicon_dir")?;
    let ctx = realization_context(&lexicon_dir, project.source_locale)?;
    let backend = backend(&cfg)?;

    if let Some(path) = &a.parser_input {
        let record = records.first().context("parser input needs at least one data record")?;
        let text = parser_input(&project, record, &ctx, backend.as_ref(), a.locale)?;
        write_atomic(path, text.as_bytes())?;
        if a.parses.is_none() {
            return Ok(());
        }
    }

    let parses_path = a.parses.as_deref().context("--parses is required")?;
    let out = a.out.as_deref().context("--out is required")?;
    let parses = load_parses(parses_path, a.locale)?;
    let gazetteer = match &cfg.gazetteer_path {
        Some(p) => load_gazetteer(p)?,
        None => Gazetteer::default(),
    };
    let (translated, report) = translate_project(
        &project,
        records.first(),
        &ctx,
        backend.as_ref(),
        &parses,
        &gazetteer,
        a.locale,
    )
    .map_err(|e| match e.statement() {
        Some(s) => anyhow::anyhow!("statement `{s}` failed: {e}"),
        None => e.into(),
    })?;
    let report_path = a.report.clone().unwrap_or_else(|| default_report_path(out));
    let file = ProjectFile::from_project(&translated, Some(project.source_locale));
    write_atomic(out, to_json_pretty(&file).as_bytes())?;
    write_atomic(&report_path, to_json_pretty(&report).as_bytes())?;
    Ok(())
}

pub fn run_analyze(a: &AnalyzeArgs) -> Result<()> {
    let mut records = Vec::new();
    for p in &a.logs {
        records.extend(load_edit_log(p)?);
    }
    check_records(&records)?;
    let units = load_units_file(&a.units)?;
    let reports = analyze(&records, &units, a.include_incomplete)?;
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    for (name, text) in [
        (CHANGE_TABLE_CSV, &reports.change_table_csv),
        (CHANGE_TABLE_JSON, &reports.change_table_json),
        (PARTICIPANTS_CSV, &reports.participants_csv),
        (SUMMARY_JSON, &reports.summary_json),
    ] {
        write_atomic(&a.out_dir.join(name), text.as_bytes())?;
    }
    Ok(())
}

/// Loads everything `serve` needs without binding a socket.
pub fn service_state(a: &ServeArgs) -> Result<Arc<AppState>> {
    let project = load_project(&a.project)?;
    let mut variants = load_data(&a.data, &project.schema)?;
    if variants.len() < VARIANTS {
        bail!(
            "{}: need at least {VARIANTS} data records, found {}",
            a.data.display(),
            variants.len()
        );
    }
    variants.truncate(VARIANTS);
    let mut contexts = vec![realization_context(&a.lexicon_dir, project.source_locale)?];
    let mut targets = Vec::new();
    for (locale, path) in &a.targets {
        let t = load_project(path)?;
        if t.source_locale != *locale {
            bail!(
                "{}: project is in {}, expected {locale}",
                path.display(),
                t.source_locale
            );
        }
        if *locale != project.source_locale {
            contexts.push(realization_context(&a.lexicon_dir, *locale)?);
        }
        targets.push(t);
    }
    std::fs::create_dir_all(&a.log_dir).with_context(|| format!("creating {}", a.log_dir.display()))?;
    let cfg = ServiceConfig::new(project, targets, variants, contexts, a.log_dir.clone())?;
    Ok(AppState::new(cfg))
}

pub fn run_serve(a: ServeArgs) -> Result<()> {
    let state = service_state(&a)?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&a.addr)
            .await
            .with_context(|| format!("binding {}", a.addr))?;
        eprintln!("listening on {}", listener.local_addr()?);
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
