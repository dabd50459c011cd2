//! Inline span markers that carry unit and data-slot boundaries through a
//! translation backend.
//!
//! Units are wrapped as `⟦gu:ID⟧…⟦/gu⟧` and data slots as `⟦df:FIELD⟧…⟦/df⟧`.
//! Markers never nest.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::unit::{char_to_byte, Span};

pub const OPEN: char = '⟦';
pub const CLOSE: char = '⟧';

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkerKind {
    Unit,
    Slot,
}

impl MarkerKind {
    fn tag(self) -> &'static str {
        match self {
            MarkerKind::Unit => "gu",
            MarkerKind::Slot => "df",
        }
    }
}

pub fn open_marker(kind: MarkerKind, id: &str) -> String {
    let mut s = String::new();
    s.push(OPEN);
    s.push_str(kind.tag());
    s.push(':');
    s.push_str(id);
    s.push(CLOSE);
    s
}

pub fn close_marker(kind: MarkerKind) -> String {
    let mut s = String::new();
    s.push(OPEN);
    s.push('/');
    s.push_str(kind.tag());
    s.push(CLOSE);
    s
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MarkError {
    #[error("spans of `{first}` and `{second}` overlap")]
    OverlappingSpans { first: String, second: String },
    #[error("span of `{id}` ({start}..{end}) is outside the text")]
    OutOfBounds { id: String, start: usize, end: usize },
    #[error("text already contains the marker character at offset {0}")]
    MarkerInText(usize),
    #[error("`{0}` is not a valid marker id")]
    BadId(String),
}

/// A span to wrap, keyed by kind and id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkSpan {
    pub kind: MarkerKind,
    pub id: String,
    pub span: Span,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// Wraps every unit span in `⟦gu:ID⟧…⟦/gu⟧`.
pub fn mark_units(text: &str, spans: &BTreeMap<String, Span>) -> Result<String, MarkError> {
    let marks: Vec<MarkSpan> = spans
        .iter()
        .map(|(id, span)| MarkSpan {
            kind: MarkerKind::Unit,
            id: id.clone(),
            span: *span,
        })
        .collect();
    mark_spans(text, &marks)
}

/// Wraps arbitrary unit and slot spans. Spans must not overlap; empty spans
/// are allowed and produce an empty marker pair.
pub fn mark_spans(text: &str, spans: &[MarkSpan]) -> Result<String, MarkError> {
    if let Some(at) = text.chars().position(|c| c == OPEN || c == CLOSE) {
        return Err(MarkError::MarkerInText(at));
    }
    let total = text.chars().count();
    let mut sorted: Vec<&MarkSpan> = spans.iter().collect();
    sorted.sort_by_key(|m| (m.span.start, m.span.end));
    for m in &sorted {
        if !valid_id(&m.id) {
            return Err(MarkError::BadId(m.id.clone()));
        }
        if m.span.start > m.span.end || m.span.end > total {
            return Err(MarkError::OutOfBounds {
                id: m.id.clone(),
                start: m.span.start,
                end: m.span.end,
            });
        }
    }
    for pair in sorted.windows(2) {
        if pair[1].span.start < pair[0].span.end {
            return Err(MarkError::OverlappingSpans {
                first: pair[0].id.clone(),
                second: pair[1].id.clone(),
            });
        }
    }
    let mut out = String::with_capacity(text.len() + 16 * sorted.len());
    let mut pos = 0usize;
    for m in sorted {
        let (s, e) = (
            char_to_byte(text, m.span.start).unwrap_or(text.len()),
            char_to_byte(text, m.span.end).unwrap_or(text.len()),
        );
        out.push_str(&text[pos..s]);
        out.push_str(&open_marker(m.kind, &m.id));
        out.push_str(&text[s..e]);
        out.push_str(&close_marker(m.kind));
        pos = e;
    }
    out.push_str(&text[pos..]);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Text(&'a str),
    Open(MarkerKind, &'a str),
    Close(MarkerKind),
}

/// Tries to read a marker starting at byte `at` (which holds `⟦`).
/// Returns the token and the byte length consumed.
fn read_marker(text: &str, at: usize) -> Option<(Token<'_>, usize)> {
    let rest = &text[at + OPEN.len_utf8()..];
    let end = rest.find(CLOSE)?;
    let body = &rest[..end];
    if body.contains(OPEN) {
        return None;
    }
    let consumed = OPEN.len_utf8() + end + CLOSE.len_utf8();
    let token = match body {
        "/gu" => Token::Close(MarkerKind::Unit),
        "/df" => Token::Close(MarkerKind::Slot),
        _ => {
            let (tag, id) = body.split_once(':')?;
            let kind = match tag {
                "gu" => MarkerKind::Unit,
                "df" => MarkerKind::Slot,
                _ => return None,
            };
            if !valid_id(id) {
                return None;
            }
            Token::Open(kind, id)
        }
    };
    Some((token, consumed))
}

fn malformed_end(text: &str, at: usize) -> Option<usize> {
    if !text[at..].starts_with(OPEN) {
        return None;
    }
    let body_start = at + OPEN.len_utf8();
    let close = text[body_start..].find(CLOSE)?;
    let body = &text[body_start..body_start + close];
    (!body.contains(OPEN)).then_some(body_start + close + CLOSE.len_utf8())
}

/// Splits text into literal runs and well-formed markers. Malformed marker
/// characters are dropped.
fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut pos = 0;
    let mut lit_start = 0;
    while let Some(rel) = text[pos..].find([OPEN, CLOSE]) {
        let at = pos + rel;
        if at > lit_start {
            out.push(Token::Text(&text[lit_start..at]));
        }
        let ch_len = OPEN.len_utf8();
        match text[at..].starts_with(OPEN).then(|| read_marker(text, at)).flatten() {
            Some((tok, consumed)) => {
                out.push(tok);
                pos = at + consumed;
            }
            // A malformed bracket pair is dropped whole; a lone bracket
            // character is dropped by itself.
            None => pos = malformed_end(text, at).unwrap_or(at + ch_len),
        }
        lit_start = pos;
    }
    if lit_start < text.len() {
        out.push(Token::Text(&text[lit_start..]));
    }
    out
}

/// Removes every marker, leaving the text they delimited.
pub fn strip_markers(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for tok in tokenize(text) {
        if let Token::Text(t) = tok {
            out.push_str(t);
        }
    }
    out
}

/// True when all markers are well formed, properly paired, not nested and
/// every id occurs once per kind.
pub fn markers_balanced(text: &str) -> bool {
    let mut open: Option<MarkerKind> = None;
    let mut seen = BTreeSet::new();
    let mut marker_chars = 0usize;
    for tok in tokenize(text) {
        match tok {
            Token::Text(_) => {}
            Token::Open(kind, id) => {
                marker_chars += 2;
                if open.is_some() || !seen.insert((kind, id)) {
                    return false;
                }
                open = Some(kind);
            }
            Token::Close(kind) => {
                marker_chars += 2;
                if open != Some(kind) {
                    return false;
                }
                open = None;
            }
        }
    }
    let raw = text.chars().filter(|&c| c == OPEN || c == CLOSE).count();
    open.is_none() && raw == marker_chars
}

/// One piece of an aligned translation, in text order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Text(String),
    Unit { id: String, text: String },
    Slot { field: String, text: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    pub pieces: Vec<Piece>,
    /// Expected unit ids without exactly one intact marker pair.
    pub lost: Vec<String>,
    /// Expected slot fields without exactly one intact marker pair.
    pub lost_slots: Vec<String>,
}

impl Alignment {
    pub fn snippets(&self) -> BTreeMap<String, String> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Unit { id, text } => Some((id.clone(), text.clone())),
                _ => None,
            })
            .collect()
    }

    /// Plain text with all markers removed.
    pub fn plain_text(&self) -> String {
        let mut s = String::new();
        for p in &self.pieces {
            match p {
                Piece::Text(t) | Piece::Unit { text: t, .. } | Piece::Slot { text: t, .. } => s.push_str(t),
            }
        }
        s
    }
}

/// Re-locates marked snippets in a translated text.
///
/// A pair survives when it opens and closes with the same kind, is not
/// interrupted by another opener and its id is expected and unique. All
/// other marked content is kept as plain text and the id is reported lost.
pub fn align_translation(translated: &str, expected_units: &[String], expected_slots: &[String]) -> Alignment {
    #[derive(Clone)]
    enum Raw {
        Text(String),
        Pair(MarkerKind, String, String),
    }
    let mut raw: Vec<Raw> = Vec::new();
    let mut current: Option<(MarkerKind, &str, String)> = None;
    let push_text = |raw: &mut Vec<Raw>, t: &str| {
        if let Some(Raw::Text(last)) = raw.last_mut() {
            last.push_str(t);
        } else if !t.is_empty() {
            raw.push(Raw::Text(t.to_string()));
        }
    };
    for tok in tokenize(translated) {
        match tok {
            Token::Text(t) => match &mut current {
                Some((_, _, buf)) => buf.push_str(t),
                None => push_text(&mut raw, t),
            },
            Token::Open(kind, id) => {
                if let Some((_, _, buf)) = current.take() {
                    push_text(&mut raw, &buf);
                }
                current = Some((kind, id, String::new()));
            }
            Token::Close(kind) => match current.take() {
                Some((k, id, buf)) if k == kind => raw.push(Raw::Pair(kind, id.to_string(), buf)),
                Some((_, _, buf)) => push_text(&mut raw, &buf),
                None => {}
            },
        }
    }
    if let Some((_, _, buf)) = current.take() {
        push_text(&mut raw, &buf);
    }

    let mut counts: BTreeMap<(MarkerKind, String), usize> = BTreeMap::new();
    for r in &raw {
        if let Raw::Pair(k, id, _) = r {
            *counts.entry((*k, id.clone())).or_default() += 1;
        }
    }
    let expected = |kind: MarkerKind, id: &str| match kind {
        MarkerKind::Unit => expected_units.iter().any(|e| e == id),
        MarkerKind::Slot => expected_slots.iter().any(|e| e == id),
    };

    let mut pieces: Vec<Piece> = Vec::new();
    let push_piece_text = |pieces: &mut Vec<Piece>, t: &str| {
        if let Some(Piece::Text(last)) = pieces.last_mut() {
            last.push_str(t);
        } else if !t.is_empty() {
            pieces.push(Piece::Text(t.to_string()));
        }
    };
    let mut found_units = BTreeSet::new();
    let mut found_slots = BTreeSet::new();
    for r in raw {
        match r {
            Raw::Text(t) => push_piece_text(&mut pieces, &t),
            Raw::Pair(kind, id, text) => {
                let unique = counts.get(&(kind, id.clone())) == Some(&1);
                if unique && expected(kind, &id) {
                    match kind {
                        MarkerKind::Unit => {
                            found_units.insert(id.clone());
                            pieces.push(Piece::Unit { id, text });
                        }
                        MarkerKind::Slot => {
                            found_slots.insert(id.clone());
                            pieces.push(Piece::Slot { field: id, text });
                        }
                    }
                } else {
                    push_piece_text(&mut pieces, &text);
                }
            }
        }
    }
    let lost = expected_units
        .iter()
        .filter(|id| !found_units.contains(*id))
        .cloned()
        .collect();
    let lost_slots = expected_slots
        .iter()
        .filter(|f| !found_slots.contains(*f))
        .cloned()
        .collect();
    Alignment {
        pieces,
        lost,
        lost_slots,
    }
}
