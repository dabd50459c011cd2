//! CoNLL-U reading and writing for per-unit parse fragments.
//!
//! Only ID, FORM, LEMMA, UPOS, FEATS, HEAD and DEPREL are read. Multiword
//! token ranges (`1-2`) and empty nodes (`1.1`) are skipped. A comment
//! `# unit_id = ID` starts a new fragment; tokens before the first such
//! comment are an error.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::locale::Locale;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyToken {
    /// 1-based position.
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub feats: BTreeMap<String, String>,
    /// 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl DependencyToken {
    pub fn feat(&self, name: &str) -> Option<&str> {
        self.feats.get(name).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFragment {
    pub unit_id: String,
    pub locale: Locale,
    pub tokens: Vec<DependencyToken>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("fragment has no tokens")]
    Empty,
    #[error("token {found} is at position {expected}; indices must run 1..n")]
    NonContiguous { expected: usize, found: usize },
    #[error("token {token} has head {head} outside 0..={len}")]
    HeadOutOfRange { token: usize, head: usize, len: usize },
    #[error("token {0} is its own head")]
    SelfHead(usize),
    #[error("fragment has {0} roots, expected exactly one")]
    RootCount(usize),
    #[error("token {0} is on a cycle")]
    Cycle(usize),
}

impl ParseFragment {
    /// Checks that indices are contiguous from 1 and the heads form a tree.
    pub fn validate(&self) -> Result<(), TreeError> {
        let n = self.tokens.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i + 1 {
                return Err(TreeError::NonContiguous {
                    expected: i + 1,
                    found: t.index,
                });
            }
            if t.head > n {
                return Err(TreeError::HeadOutOfRange {
                    token: t.index,
                    head: t.head,
                    len: n,
                });
            }
            if t.head == t.index {
                return Err(TreeError::SelfHead(t.index));
            }
        }
        let roots = self.tokens.iter().filter(|t| t.head == 0).count();
        if roots != 1 {
            return Err(TreeError::RootCount(roots));
        }
        for t in &self.tokens {
            let mut cur = t.head;
            let mut steps = 0;
            while cur != 0 {
                steps += 1;
                if steps > n {
                    return Err(TreeError::Cycle(t.index));
                }
                cur = self.tokens[cur - 1].head;
            }
        }
        Ok(())
    }

    pub fn root(&self) -> Option<&DependencyToken> {
        self.tokens.iter().find(|t| t.head == 0)
    }

    /// Direct dependents of `index`, in surface order.
    pub fn children(&self, index: usize) -> impl Iterator<Item = &DependencyToken> {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    /// Surface text with single spaces between tokens.
    pub fn text(&self) -> String {
        let forms: Vec<&str> = self.tokens.iter().map(|t| t.form.as_str()).collect();
        forms.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ConlluError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ConlluError {
    ConlluError {
        line,
        message: message.into(),
    }
}

fn parse_feats(s: &str, line: usize) -> Result<BTreeMap<String, String>, ConlluError> {
    let mut out = BTreeMap::new();
    if s == "_" {
        return Ok(out);
    }
    for pair in s.split('|') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| err(line, format!("malformed feature `{pair}`")))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// Parses a CoNLL-U document into fragments keyed by `# unit_id` comments.
/// Fragments are returned in document order.
pub fn parse_conllu(text: &str, locale: Locale) -> Result<Vec<ParseFragment>, ConlluError> {
    let mut out: Vec<ParseFragment> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "unit_id" {
                    let id = value.trim();
                    if id.is_empty() {
                        return Err(err(line_no, "empty unit_id"));
                    }
                    if out.iter().any(|f| f.unit_id == id) {
                        return Err(err(line_no, format!("duplicate unit_id `{id}`")));
                    }
                    out.push(ParseFragment {
                        unit_id: id.to_string(),
                        locale,
                        tokens: vec![],
                    });
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(
                line_no,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let index: usize = cols[0]
            .parse()
            .map_err(|_| err(line_no, format!("bad token id `{}`", cols[0])))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| err(line_no, format!("bad head `{}`", cols[6])))?;
        let token = DependencyToken {
            index,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            feats: parse_feats(cols[5], line_no)?,
            head,
            deprel: cols[7].to_string(),
        };
        match out.last_mut() {
            Some(frag) => frag.tokens.push(token),
            None => return Err(err(line_no, "token before any `# unit_id` comment")),
        }
    }
    Ok(out)
}

/// Writes fragments back as CoNLL-U; unread columns are `_`.
pub fn write_conllu(fragments: &[ParseFragment]) -> String {
    let mut s = String::new();
    for frag in fragments {
        let _ = writeln!(s, "# unit_id = {}", frag.unit_id);
        let _ = writeln!(s, "# text = {}", frag.text());
        for t in &frag.tokens {
            let feats = if t.feats.is_empty() {
                "_".to_string()
            } else {
                let parts: Vec<String> = t.feats.iter().map(|(k, v)| format!("{k}={v}")).collect();
                parts.join("|")
            };
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\t_",
                t.index, t.form, t.lemma, t.upos, feats, t.head, t.deprel
            );
        }
        s.push('\n');
    }
    s
}

/// Parser input: one snippet per line as `unit_id<TAB>locale<TAB>text`.
/// Tabs and newlines inside snippets are replaced by spaces.
pub fn write_parser_input<'a, I>(snippets: I, locale: Locale) -> String
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut s = String::new();
    for (id, text) in snippets {
        let clean: String = text
            .chars()
            .map(|c| if c == '\t' || c == '\n' || c == '\r' { ' ' } else { c })
            .collect();
        let _ = writeln!(s, "{id}\t{}\t{clean}", locale.code());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const AM_SAMSTAG: &str = "# unit_id = u1\n\
        # text = am Samstag\n\
        1-2\tam\t_\t_\t_\t_\t_\t_\t_\t_\n\
        1\tan\tan\tADP\tAPPR\t_\t3\tcase\t_\t_\n\
        2\tdem\tder\tDET\tART\tCase=Dat|Definite=Def|Gender=Masc|Number=Sing|PronType=Art\t3\tdet\t_\t_\n\
        3\tSamstag\tSamstag\tNOUN\tNN\tCase=Dat|Gender=Masc|Number=Sing\t0\troot\t_\t_\n";

    #[test]
    fn parses_fragment_and_skips_ranges() {
        let frags = parse_conllu(AM_SAMSTAG, Locale::DeDe).unwrap();
        assert_eq!(frags.len(), 1);
        let f = &frags[0];
        assert_eq!(f.unit_id, "u1");
        assert_eq!(f.tokens.len(), 3);
        assert_eq!(f.tokens[1].feat("Definite"), Some("Def"));
        assert_eq!(f.root().unwrap().lemma, "Samstag");
        assert!(f.validate().is_ok());
        let again = parse_conllu(&write_conllu(&frags), Locale::DeDe).unwrap();
        assert_eq!(again, frags);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            parse_conllu("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n", Locale::DeDe)
                .unwrap_err()
                .line,
            1
        );
        let short = "# unit_id = u\n1\ta\ta\n";
        assert_eq!(parse_conllu(short, Locale::DeDe).unwrap_err().line, 2);
        let dup = "# unit_id = u\n# unit_id = u\n";
        assert!(parse_conllu(dup, Locale::DeDe).is_err());
    }

    fn tok(index: usize, head: usize) -> DependencyToken {
        DependencyToken {
            index,
            form: "x".into(),
            lemma: "x".into(),
            upos: "NOUN".into(),
            feats: BTreeMap::new(),
            head,
            deprel: "dep".into(),
        }
    }

    fn frag(tokens: Vec<DependencyToken>) -> ParseFragment {
        ParseFragment {
            unit_id: "u".into(),
            locale: Locale::DeDe,
            tokens,
        }
    }

    #[test]
    fn tree_validation() {
        assert_eq!(frag(vec![]).validate(), Err(TreeError::Empty));
        assert_eq!(frag(vec![tok(1, 1)]).validate(), Err(TreeError::SelfHead(1)));
        assert_eq!(
            frag(vec![tok(1, 0), tok(2, 0)]).validate(),
            Err(TreeError::RootCount(2))
        );
        assert_eq!(
            frag(vec![tok(1, 0), tok(2, 3), tok(3, 2)]).validate(),
            Err(TreeError::Cycle(2))
        );
        assert!(matches!(
            frag(vec![tok(1, 0), tok(3, 1)]).validate(),
            Err(TreeError::NonContiguous { .. })
        ));
        assert!(matches!(
            frag(vec![tok(1, 5)]).validate(),
            Err(TreeError::HeadOutOfRange { .. })
        ));
    }

    #[test]
    fn parser_input_lines() {
        let s = write_parser_input([("u1", "am\tSamstag")], Locale::DeDe);
        assert_eq!(s, "u1\tde-DE\tam Samstag\n");
    }
}
