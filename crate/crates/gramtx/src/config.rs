//! Run configuration read from TOML or JSON.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::io::{read_text, FormatError};

/// Environment variable that overrides `backend.url`.
pub const BACKEND_URL_ENV: &str = "GRAMTX_BACKEND_URL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    /// Exact lookup in a translation-memory file.
    #[default]
    Tm,
    /// JSON over HTTP.
    Http,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub tm_path: Option<PathBuf>,
    pub url: Option<String>,
    pub timeout_ms: u64,
    pub retries: u32,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::Tm,
            tm_path: None,
            url: None,
            timeout_ms: 10_000,
            retries: 2,
        }
    }
}

impl BackendConfig {
    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub backend: BackendConfig,
    pub gazetteer_path: Option<PathBuf>,
    pub lexicon_dir: Option<PathBuf>,
}

impl Config {
    /// Parses `text` as JSON when `path` ends in `.json`, TOML otherwise.
    /// Relative paths inside the file are resolved against its directory.
    pub fn parse(text: &str, path: &Path) -> Result<Config, FormatError> {
        let mut cfg: Config = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(text).map_err(|source| FormatError::Json {
                path: path.to_path_buf(),
                source,
            })?
        } else {
            toml::from_str(text).map_err(|source| FormatError::Toml {
                path: path.to_path_buf(),
                source,
            })?
        };
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.backend.tm_path, &mut cfg.gazetteer_path, &mut cfg.lexicon_dir]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, FormatError> {
        Config::parse(&read_text(path)?, path)
    }

    /// Applies the backend URL override, if `value` is set and non-empty.
    pub fn with_url_override(mut self, value: Option<String>) -> Config {
        if let Some(url) = value.filter(|u| !u.is_empty()) {
            self.backend.url = Some(url);
        }
        self
    }

    /// [`Config::with_url_override`] from the process environment.
    pub fn with_env(self) -> Config {
        self.with_url_override(std::env::var(BACKEND_URL_ENV).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = Config::parse(
            "gazetteer_path = \"g.txt\"\n[backend]\nkind = \"http\"\nurl = \"http://x\"\nretries = 5\n",
            Path::new("/etc/gramtx/config.toml"),
        )
        .unwrap();
        let j = Config::parse(
            r#"{"gazetteer_path": "g.txt", "backend": {"kind": "http", "url": "http://x", "retries": 5}}"#,
            Path::new("/etc/gramtx/config.json"),
        )
        .unwrap();
        assert_eq!(t, j);
        assert_eq!(t.backend.kind, BackendKind::Http);
        assert_eq!(t.backend.timeout_ms, 10_000);
        assert_eq!(t.gazetteer_path.as_deref(), Some(Path::new("/etc/gramtx/g.txt")));
    }

    #[test]
    fn override_touches_only_url() {
        let c = Config::default().with_url_override(Some("http://nmt:8080".into()));
        assert_eq!(c.backend.url.as_deref(), Some("http://nmt:8080"));
        assert_eq!(c.backend.kind, BackendKind::Tm);
        assert_eq!(
            Config::default().with_url_override(Some(String::new())),
            Config::default()
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::parse("bogus = 1\n", Path::new("c.toml")).is_err());
    }
}
