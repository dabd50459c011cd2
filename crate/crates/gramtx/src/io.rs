//! On-disk formats: project JSON, data JSONL, lexicons, translation memory,
//! CoNLL-U parses, gazetteers, edit logs and unit-pair files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gramtx_core::backend::{TmEntry, TmError, TranslationMemory};
use gramtx_core::postedit::ChangeRecord;
use gramtx_core::realize::{Lexicon, LexiconEntry, LexiconError};
use gramtx_core::template::{
    parse_template, serialize_template, ConditionError, DataRecord, Expr, ParseError, Project, ProjectError,
    StatementTemplate, Value,
};
use gramtx_core::transfer::conllu::{parse_conllu, ConlluError, ParseFragment};
use gramtx_core::transfer::Gazetteer;
use gramtx_core::{FeatureSet, GrammarUnit, Locale, PartOfSpeech};
use serde::{Deserialize, Serialize};

/// Data key holding the record's provenance instead of a field value.
pub const INSTANCE_KEY: &str = "_instance";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}:{line}: {message}")]
    Line {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("statement `{statement}`: template: {source}")]
    Template { statement: String, source: ParseError },
    #[error("statement `{statement}`: condition: {source}")]
    Condition { statement: String, source: ConditionError },
    #[error(transparent)]
    Project(#[from] ProjectError),
    #[error("{path}: {source}")]
    Lexicon { path: PathBuf, source: LexiconError },
    #[error("{path}: lexicon entry `{lemma}` is {found}, file is for {expected}")]
    LexiconLocale {
        path: PathBuf,
        lemma: String,
        expected: Locale,
        found: Locale,
    },
    #[error("{path}: {source}")]
    Conllu { path: PathBuf, source: ConlluError },
    #[error("{path}: {source}")]
    Tm { path: PathBuf, source: TmError },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), FormatError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(contents).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Projects

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitFile {
    pub pos: PartOfSpeech,
    pub features: FeatureSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement_source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementFile {
    pub id: String,
    pub template: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default)]
    pub units: BTreeMap<String, UnitFile>,
}

/// Project as stored on disk. Templates and conditions are kept in their
/// text syntax; units take the project's source locale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectFile {
    pub id: String,
    pub source_locale: Locale,
    #[serde(default)]
    pub target_locales: Vec<Locale>,
    /// Set on projects produced by grammar transfer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translated_from: Option<Locale>,
    #[serde(default)]
    pub schema: BTreeSet<String>,
    pub statements: Vec<StatementFile>,
}

impl ProjectFile {
    pub fn into_project(self) -> Result<Project, FormatError> {
        let locale = self.source_locale;
        let mut statements = Vec::with_capacity(self.statements.len());
        for st in self.statements {
            let segments = parse_template(&st.template).map_err(|source| FormatError::Template {
                statement: st.id.clone(),
                source,
            })?;
            let condition =
                st.condition
                    .as_deref()
                    .map(Expr::parse)
                    .transpose()
                    .map_err(|source| FormatError::Condition {
                        statement: st.id.clone(),
                        source,
                    })?;
            let units = st
                .units
                .into_iter()
                .map(|(id, u)| {
                    let mut unit = GrammarUnit::new(id.clone(), locale, u.pos, u.features);
                    unit.agreement_source = u.agreement_source;
                    (id, unit)
                })
                .collect();
            statements.push(StatementTemplate {
                id: st.id,
                locale,
                segments,
                condition,
                units,
            });
        }
        Ok(Project::new(
            self.id,
            locale,
            self.target_locales,
            statements,
            self.schema,
        )?)
    }

    pub fn from_project(project: &Project, translated_from: Option<Locale>) -> ProjectFile {
        ProjectFile {
            id: project.id.clone(),
            source_locale: project.source_locale,
            target_locales: project.target_locales.clone(),
            translated_from,
            schema: project.schema.clone(),
            statements: project
                .statements
                .iter()
                .map(|st| StatementFile {
                    id: st.id.clone(),
                    template: serialize_template(&st.segments),
                    condition: st.condition.as_ref().map(|c| c.to_string()),
                    units: st
                        .units
                        .iter()
                        .map(|(id, u)| {
                            (
                                id.clone(),
                                UnitFile {
                                    pos: u.pos,
                                    features: u.features.clone(),
                                    agreement_source: u.agreement_source.clone(),
                                },
                            )
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn load_project_file(path: &Path) -> Result<ProjectFile, FormatError> {
    read_json(path)
}

pub fn load_project(path: &Path) -> Result<Project, FormatError> {
    load_project_file(path)?.into_project()
}

// ---------------------------------------------------------------------------
// Data records

/// Parses one JSON object into a record, checking every field against the
/// schema. The reserved `_instance` key becomes the provenance.
pub fn parse_record(line: &str, schema: &BTreeSet<String>, fallback_provenance: &str) -> Result<DataRecord, String> {
    let obj: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(line).map_err(|e| format!("not a JSON object: {e}"))?;
    let mut rec = DataRecord::new(fallback_provenance);
    for (k, v) in obj {
        if k == INSTANCE_KEY {
            rec.provenance = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(format!("`{INSTANCE_KEY}` must be a string or number, found {other}")),
            };
            continue;
        }
        if !schema.contains(&k) {
            return Err(format!("field `{k}` is not in the project schema"));
        }
        let value = match v {
            serde_json::Value::Bool(b) => Value::Bool(b),
            serde_json::Value::String(s) => Value::Str(s),
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Value::Int(i),
                None => return Err(format!("field `{k}` must be an integer, found {n}")),
            },
            other => return Err(format!("field `{k}` has unsupported value {other}")),
        };
        rec.fields.insert(k, value);
    }
    Ok(rec)
}

/// Reads a JSON-lines data file. Blank lines are skipped; records without an
/// `_instance` key are named by their line number.
pub fn load_data(path: &Path, schema: &BTreeSet<String>) -> Result<Vec<DataRecord>, FormatError> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = parse_record(line, schema, &format!("line {}", i + 1)).map_err(|message| FormatError::Line {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        })?;
        out.push(rec);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lexicons

pub fn lexicon_path(dir: &Path, locale: Locale) -> PathBuf {
    dir.join(format!("{}.json", locale.code()))
}

/// Loads `<dir>/<locale>.json`. A missing file gives an empty lexicon, which
/// is enough for transfer-only locales.
pub fn load_lexicon(dir: &Path, locale: Locale) -> Result<Lexicon, FormatError> {
    let path = lexicon_path(dir, locale);
    if !path.exists() {
        return Ok(Lexicon::new());
    }
    let entries: Vec<LexiconEntry> = read_json(&path)?;
    if let Some(e) = entries.iter().find(|e| e.locale != locale) {
        return Err(FormatError::LexiconLocale {
            path,
            lemma: e.lemma.clone(),
            expected: locale,
            found: e.locale,
        });
    }
    Lexicon::from_entries(entries).map_err(|source| FormatError::Lexicon { path, source })
}

// ---------------------------------------------------------------------------
// Translation memory, parses, gazetteer

pub fn load_tm(path: &Path) -> Result<TranslationMemory, FormatError> {
    let entries: Vec<TmEntry> = read_json(path)?;
    TranslationMemory::from_entries(entries).map_err(|source| FormatError::Tm {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse fragments keyed by unit id. A later fragment for the same id
/// replaces an earlier one.
pub fn load_parses(path: &Path, locale: Locale) -> Result<BTreeMap<String, ParseFragment>, FormatError> {
    let text = read_text(path)?;
    let frags = parse_conllu(&text, locale).map_err(|source| FormatError::Conllu {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(frags.into_iter().map(|f| (f.unit_id.clone(), f)).collect())
}

/// One name per line; blank lines and `#` comments are ignored.
pub fn parse_gazetteer(text: &str) -> Gazetteer {
    Gazetteer::new(
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#')),
    )
}

pub fn load_gazetteer(path: &Path) -> Result<Gazetteer, FormatError> {
    Ok(parse_gazetteer(&read_text(path)?))
}

// ---------------------------------------------------------------------------
// Edit logs and unit pairs

pub fn parse_edit_log(text: &str, path: &Path) -> Result<Vec<ChangeRecord>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(line).map_err(|e| FormatError::Line {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn load_edit_log(path: &Path) -> Result<Vec<ChangeRecord>, FormatError> {
    parse_edit_log(&read_text(path)?, path)
}

/// Appends one record as a JSON line and flushes it to disk.
pub fn append_record(path: &Path, record: &ChangeRecord) -> Result<(), FormatError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    let mut line = serde_json::to_string(record).expect("records serialize");
    line.push('\n');
    f.write_all(line.as_bytes()).map_err(io_err(path))?;
    f.sync_data().map_err(io_err(path))
}

/// Automatic and post-edited units of one statement in one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementUnits {
    pub session_id: String,
    pub statement_id: String,
    pub locale: Locale,
    pub auto: Vec<GrammarUnit>,
    pub edited: Vec<GrammarUnit>,
}

/// Input of the analytics run besides the edit log.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitsFile {
    /// Units per locale. When absent, the automatic units listed in
    /// `statements` are counted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub totals: Option<BTreeMap<Locale, u64>>,
    #[serde(default)]
    pub incomplete_sessions: BTreeSet<String>,
    #[serde(default)]
    pub statements: Vec<StatementUnits>,
}

impl UnitsFile {
    pub fn unit_totals(&self) -> BTreeMap<Locale, u64> {
        match &self.totals {
            Some(t) => t.clone(),
            None => {
                let mut t = BTreeMap::new();
                for s in self
                    .statements
                    .iter()
                    .filter(|s| !self.incomplete_sessions.contains(&s.session_id))
                {
                    *t.entry(s.locale).or_insert(0) += s.auto.len() as u64;
                }
                t
            }
        }
    }
}

pub fn load_units_file(path: &Path) -> Result<UnitsFile, FormatError> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_parsing() {
        let schema: BTreeSet<String> = ["a".into(), "b".into(), "c".into()].into();
        let r = parse_record(r#"{"_instance": 97, "a": 1, "b": "x", "c": true}"#, &schema, "l1").unwrap();
        assert_eq!(r.provenance, "97");
        assert_eq!(r.get("a"), Some(&Value::Int(1)));
        assert_eq!(r.get("c"), Some(&Value::Bool(true)));
        let e = parse_record(r#"{"zzz": 1}"#, &schema, "l1").unwrap_err();
        assert!(e.contains("zzz"), "{e}");
        assert!(parse_record(r#"{"a": 1.5}"#, &schema, "l1").is_err());
        assert!(parse_record(r#"{"a": null}"#, &schema, "l1").is_err());
        assert_eq!(parse_record("{}", &schema, "l7").unwrap().provenance, "l7");
    }

    #[test]
    fn gazetteer_comments() {
        let g = parse_gazetteer("# teams\n\n  Denver Nuggets \n");
        assert!(g.contains("denver  nuggets"));
        assert!(!g.contains("# teams"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
