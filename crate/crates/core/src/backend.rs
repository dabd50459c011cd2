//! Translation backend interface and the translation-memory backend.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::locale::Locale;
use crate::transfer::markers::markers_balanced;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("source and target locale are both {0}")]
    SameLocale(Locale),
    #[error("input markers are not balanced")]
    UnbalancedMarkers,
}

/// A validated translation request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRequest {
    source_locale: Locale,
    target_locale: Locale,
    tagged_text: String,
}

impl TranslationRequest {
    pub fn new(
        source_locale: Locale,
        target_locale: Locale,
        tagged_text: impl Into<String>,
    ) -> Result<Self, RequestError> {
        let tagged_text = tagged_text.into();
        if source_locale == target_locale {
            return Err(RequestError::SameLocale(source_locale));
        }
        if !markers_balanced(&tagged_text) {
            return Err(RequestError::UnbalancedMarkers);
        }
        Ok(TranslationRequest {
            source_locale,
            target_locale,
            tagged_text,
        })
    }

    pub fn source_locale(&self) -> Locale {
        self.source_locale
    }

    pub fn target_locale(&self) -> Locale {
        self.target_locale
    }

    pub fn tagged_text(&self) -> &str {
        &self.tagged_text
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("no translation memory entry for `{0}`")]
    MissingEntry(String),
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("backend returned status {status}: {detail}")]
    BadResponse { status: u16, detail: String },
}

/// A translation backend. Returned text may have lost or mangled markers.
pub trait Translator {
    fn translate(&self, req: &TranslationRequest) -> Result<String, BackendError>;
}

impl<T: Translator + ?Sized> Translator for &T {
    fn translate(&self, req: &TranslationRequest) -> Result<String, BackendError> {
        (**self).translate(req)
    }
}

/// Collapses whitespace runs, trims, and removes spaces before `. , ; : ! ? )`
/// and after `(`.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space && !matches!(c, '.' | ',' | ';' | ':' | '!' | '?' | ')') && !out.ends_with('(') {
            out.push(' ');
        }
        pending_space = false;
        out.push(c);
    }
    out
}

/// One translation memory file entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmEntry {
    pub source_locale: Locale,
    pub target_locale: Locale,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TmError {
    #[error("entry `{0}` has unbalanced markers")]
    Unbalanced(String),
    #[error("entry `{0}` is defined twice with different targets")]
    Conflict(String),
}

/// Exact-lookup translation table keyed by locale pair and normalized source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranslationMemory {
    entries: BTreeMap<(Locale, Locale, String), String>,
}

impl TranslationMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = TmEntry>) -> Result<Self, TmError> {
        let mut tm = TranslationMemory::new();
        for e in entries {
            tm.insert(e)?;
        }
        Ok(tm)
    }

    pub fn insert(&mut self, e: TmEntry) -> Result<(), TmError> {
        if !markers_balanced(&e.source) {
            return Err(TmError::Unbalanced(e.source));
        }
        if !markers_balanced(&e.target) {
            return Err(TmError::Unbalanced(e.target));
        }
        let key = (e.source_locale, e.target_locale, normalize(&e.source));
        match self.entries.get(&key) {
            Some(existing) if *existing != e.target => Err(TmError::Conflict(e.source)),
            _ => {
                self.entries.insert(key, e.target);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> Vec<TmEntry> {
        self.entries
            .iter()
            .map(|((s, t, src), tgt)| TmEntry {
                source_locale: *s,
                target_locale: *t,
                source: src.clone(),
                target: tgt.clone(),
            })
            .collect()
    }
}

impl Translator for TranslationMemory {
    fn translate(&self, req: &TranslationRequest) -> Result<String, BackendError> {
        let key = (req.source_locale, req.target_locale, normalize(&req.tagged_text));
        self.entries
            .get(&key)
            .cloned()
            .ok_or_else(|| BackendError::MissingEntry(req.tagged_text.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm() -> TranslationMemory {
        TranslationMemory::from_entries([TmEntry {
            source_locale: Locale::EnUs,
            target_locale: Locale::DeDe,
            source: "⟦gu:u1⟧on Saturday⟦/gu⟧".into(),
            target: "⟦gu:u1⟧am Samstag⟦/gu⟧".into(),
        }])
        .unwrap()
    }

    #[test]
    fn exact_lookup() {
        let req = TranslationRequest::new(Locale::EnUs, Locale::DeDe, "⟦gu:u1⟧on Saturday⟦/gu⟧").unwrap();
        assert_eq!(tm().translate(&req).unwrap(), "⟦gu:u1⟧am Samstag⟦/gu⟧");
        let missing = TranslationRequest::new(Locale::EnUs, Locale::DeDe, "on Sunday").unwrap();
        assert_eq!(
            tm().translate(&missing),
            Err(BackendError::MissingEntry("on Sunday".into()))
        );
    }

    #[test]
    fn request_validation() {
        assert_eq!(
            TranslationRequest::new(Locale::EnUs, Locale::EnUs, "x"),
            Err(RequestError::SameLocale(Locale::EnUs))
        );
        assert_eq!(
            TranslationRequest::new(Locale::EnUs, Locale::DeDe, "⟦gu:a⟧x"),
            Err(RequestError::UnbalancedMarkers)
        );
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize("  a   b \n c  "), "a b c");
        assert_eq!(normalize("won ( Illinois ) ."), "won (Illinois).");
        assert_eq!(normalize("106 - 101"), "106 - 101");
        let req = TranslationRequest::new(Locale::EnUs, Locale::DeDe, "⟦gu:u1⟧on  Saturday⟦/gu⟧ ").unwrap();
        assert!(tm().translate(&req).is_ok());
    }

    #[test]
    fn conflicting_entries_rejected() {
        let mut t = tm();
        let e = TmEntry {
            source_locale: Locale::EnUs,
            target_locale: Locale::DeDe,
            source: "⟦gu:u1⟧on Saturday⟦/gu⟧".into(),
            target: "⟦gu:u1⟧Samstag⟦/gu⟧".into(),
        };
        assert!(matches!(t.insert(e), Err(TmError::Conflict(_))));
    }
}
