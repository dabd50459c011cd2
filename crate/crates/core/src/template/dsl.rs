//! Template DSL.
//!
//! ```text
//! template  := (literal | slot | unit)*
//! literal   := any text; `\` escapes one of `\ { [`
//! slot      := "{" field (":" format)? "}"          format: integer | date-long
//! unit      := "[" unit-id ("|" override ("," override)*)? "]"
//! override  := key "=" value
//! ```
//!
//! Override keys, in canonical order:
//!
//! | key            | value                                        |
//! |----------------|----------------------------------------------|
//! | `lemma`        | text                                         |
//! | `case`         | case label or `-`                            |
//! | `number`       | number label, `@field` (agreement) or `-`    |
//! | `tense`        | tense label or `-`                           |
//! | `person`       | person label or `-`                          |
//! | `gender`       | gender label or `-`                          |
//! | `prep`         | text or `-`                                  |
//! | `adjectives`   | text joined by `+`, or `-` for none          |
//! | `numeral`      | `<integer>/<cardinal|ordinal>` or `-`        |
//! | `conjunctions` | text joined by `+`, or `-` for none          |
//! | `det`          | determiner label or `-`                      |
//! | `pronoun_type` | pronoun type label or `-`                    |
//! | `head`         | segment index or `-`                         |
//!
//! `-` clears a feature. Inside text values `\` escapes `\ , ] | + -`.
//! Field names match `[A-Za-z_][A-Za-z0-9_]*`; unit ids `[A-Za-z0-9_.-]+`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::{DataSlot, Segment, SlotFormat, UnitRef};
use crate::features::{Case, Determiner, Gender, Number, Numeral, NumeralType, Person, PronounType, Tense};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Character offset of the error.
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn is_field_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_field_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_unit_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

const TEXT_ESCAPES: &[char] = &['\\', ',', ']', '|', '+', '-'];

enum Setting<T> {
    Clear,
    Set(T),
}

impl Parser {
    fn err(&self, offset: usize, message: &str, expected: &[&str]) -> ParseError {
        let mut line = 1;
        let mut column = 1;
        for c in self.chars.iter().take(offset) {
            if *c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError {
            offset,
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn template(&mut self) -> Result<Vec<Segment>, ParseError> {
        let mut out = Vec::new();
        let mut lit = String::new();
        while let Some(c) = self.peek() {
            match c {
                '\\' => {
                    let at = self.pos;
                    match self.chars.get(at + 1) {
                        Some(&e @ ('\\' | '{' | '[')) => {
                            lit.push(e);
                            self.pos += 2;
                        }
                        _ => return Err(self.err(at, "invalid escape in literal", &["\\\\", "\\{", "\\["])),
                    }
                }
                '{' | '[' => {
                    if !lit.is_empty() {
                        out.push(Segment::Literal(core::mem::take(&mut lit)));
                    }
                    out.push(if c == '{' { self.slot()? } else { self.unit()? });
                }
                _ => {
                    lit.push(c);
                    self.pos += 1;
                }
            }
        }
        if !lit.is_empty() {
            out.push(Segment::Literal(lit));
        }
        Ok(out)
    }

    fn ident(&mut self, start_ok: fn(char) -> bool, rest_ok: fn(char) -> bool) -> Option<String> {
        let first = self.peek().filter(|&c| start_ok(c))?;
        let mut s = String::from(first);
        self.pos += 1;
        while let Some(c) = self.peek().filter(|&c| rest_ok(c)) {
            s.push(c);
            self.pos += 1;
        }
        Some(s)
    }

    fn slot(&mut self) -> Result<Segment, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let field = self
            .ident(is_field_start, is_field_char)
            .ok_or_else(|| self.unclosed_or(open, "expected field name", &["field name"]))?;
        let mut format = None;
        if self.peek() == Some(':') {
            self.pos += 1;
            let name_start = self.pos;
            let name = self
                .ident(|c| c.is_ascii_alphabetic(), |c| c.is_ascii_alphanumeric() || c == '-')
                .unwrap_or_default();
            format = Some(SlotFormat::from_name(&name).ok_or_else(|| {
                if name.is_empty() {
                    self.unclosed_or(open, "unknown slot format", &["integer", "date-long"])
                } else {
                    self.err(name_start, "unknown slot format", &["integer", "date-long"])
                }
            })?);
        }
        match self.peek() {
            Some('}') => {
                self.pos += 1;
                Ok(Segment::Slot(DataSlot { field, format }))
            }
            _ => Err(self.unclosed_or(open, "expected `}`", &["}", ":"])),
        }
    }

    /// At end of input, reports the unclosed construct at `open`; otherwise
    /// reports at the current position.
    fn unclosed_or(&self, open: usize, message: &str, expected: &[&str]) -> ParseError {
        if self.pos >= self.chars.len() {
            let what = if self.chars[open] == '{' {
                "slot"
            } else {
                "unit reference"
            };
            self.err(open, &alloc::format!("unclosed {what}"), expected)
        } else {
            self.err(self.pos, message, expected)
        }
    }

    fn unit(&mut self) -> Result<Segment, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let unit_id = self
            .ident(is_unit_id_char, is_unit_id_char)
            .ok_or_else(|| self.unclosed_or(open, "expected unit id", &["unit id"]))?;
        let mut r = UnitRef {
            unit_id,
            ..UnitRef::default()
        };
        let mut seen: Vec<String> = Vec::new();
        match self.peek() {
            Some(']') => {
                self.pos += 1;
                return Ok(Segment::Unit(r));
            }
            Some('|') => self.pos += 1,
            _ => return Err(self.unclosed_or(open, "expected `]` or `|`", &["]", "|"])),
        }
        loop {
            let key_at = self.pos;
            let key = self
                .ident(|c| c.is_ascii_alphabetic(), |c| c.is_ascii_alphanumeric() || c == '_')
                .ok_or_else(|| self.unclosed_or(open, "expected override key", &["override key"]))?;
            if seen.contains(&key) {
                return Err(self.err(key_at, "duplicate override key", &[]));
            }
            if self.peek() != Some('=') {
                return Err(self.unclosed_or(open, "expected `=`", &["="]));
            }
            self.pos += 1;
            self.override_value(open, key_at, &key, &mut r)?;
            seen.push(key);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(Segment::Unit(r));
                }
                _ => return Err(self.unclosed_or(open, "expected `,` or `]`", &[",", "]"])),
            }
        }
    }

    /// Raw value text up to `,` `]` `|` (unescaped); `-` alone is a clear.
    fn raw_value(&mut self, open: usize) -> Result<(usize, Vec<Setting<String>>), ParseError> {
        let at = self.pos;
        let mut items = Vec::new();
        let mut cur = String::new();
        let mut escaped_any = false;
        loop {
            match self.peek() {
                None => return Err(self.unclosed_or(open, "", &[",", "]"])),
                Some(',' | ']' | '|') => break,
                Some('\\') => match self.chars.get(self.pos + 1) {
                    Some(&e) if TEXT_ESCAPES.contains(&e) => {
                        cur.push(e);
                        escaped_any = true;
                        self.pos += 2;
                    }
                    _ => {
                        return Err(self.err(
                            self.pos,
                            "invalid escape in value",
                            &["\\\\", "\\,", "\\]", "\\|", "\\+", "\\-"],
                        ))
                    }
                },
                Some('+') => {
                    items.push(core::mem::take(&mut cur));
                    self.pos += 1;
                }
                Some(c) => {
                    cur.push(c);
                    self.pos += 1;
                }
            }
        }
        if items.is_empty() && cur == "-" && !escaped_any {
            return Ok((at, vec![Setting::Clear]));
        }
        items.push(cur);
        if items.iter().any(String::is_empty) {
            return Err(self.err(at, "empty value", &["value"]));
        }
        Ok((at, items.into_iter().map(Setting::Set).collect()))
    }

    fn override_value(&mut self, open: usize, key_at: usize, key: &str, r: &mut UnitRef) -> Result<(), ParseError> {
        let (at, mut items) = self.raw_value(open)?;
        let single = |p: &Self, items: &mut Vec<Setting<String>>| -> Result<Setting<String>, ParseError> {
            if items.len() != 1 {
                return Err(p.err(at, "list value not allowed here", &[]));
            }
            Ok(items.pop().unwrap())
        };
        fn label<T>(
            p: &Parser,
            at: usize,
            v: Setting<String>,
            parse: fn(&str) -> Option<T>,
            names: &[&str],
        ) -> Result<Option<T>, ParseError> {
            match v {
                Setting::Clear => Ok(None),
                Setting::Set(s) => parse(&s).map(Some).ok_or_else(|| p.err(at, "unknown value", names)),
            }
        }
        fn labels<T: Copy, const N: usize>(all: [T; N], name: fn(T) -> &'static str) -> Vec<&'static str> {
            all.iter().map(|&x| name(x)).collect()
        }
        let o = &mut r.overrides;
        match key {
            "lemma" => match single(self, &mut items)? {
                Setting::Set(s) => o.lemma = Some(s),
                Setting::Clear => return Err(self.err(at, "lemma cannot be cleared", &["lemma text"])),
            },
            "case" => {
                let v = single(self, &mut items)?;
                o.case = Some(label(self, at, v, Case::from_label, &labels(Case::ALL, Case::label))?);
            }
            "number" => match single(self, &mut items)? {
                Setting::Set(s) if s.starts_with('@') => {
                    let field = &s[1..];
                    let ok = field.chars().next().is_some_and(is_field_start) && field.chars().all(is_field_char);
                    if !ok {
                        return Err(self.err(at + 1, "expected field name after `@`", &["field name"]));
                    }
                    r.agreement = Some(field.to_string());
                }
                v => {
                    o.number = Some(label(
                        self,
                        at,
                        v,
                        Number::from_label,
                        &labels(Number::ALL, Number::label),
                    )?);
                }
            },
            "tense" => {
                let v = single(self, &mut items)?;
                o.tense = Some(label(
                    self,
                    at,
                    v,
                    Tense::from_label,
                    &labels(Tense::ALL, Tense::label),
                )?);
            }
            "person" => {
                let v = single(self, &mut items)?;
                o.person = Some(label(
                    self,
                    at,
                    v,
                    Person::from_label,
                    &labels(Person::ALL, Person::label),
                )?);
            }
            "gender" => {
                let v = single(self, &mut items)?;
                o.gender = Some(label(
                    self,
                    at,
                    v,
                    Gender::from_label,
                    &labels(Gender::ALL, Gender::label),
                )?);
            }
            "det" => {
                let v = single(self, &mut items)?;
                o.determiner = Some(label(
                    self,
                    at,
                    v,
                    Determiner::from_label,
                    &labels(Determiner::ALL, Determiner::label),
                )?);
            }
            "pronoun_type" => {
                let v = single(self, &mut items)?;
                o.pronoun_type = Some(label(
                    self,
                    at,
                    v,
                    PronounType::from_label,
                    &labels(PronounType::ALL, PronounType::label),
                )?);
            }
            "prep" => {
                o.preposition = Some(match single(self, &mut items)? {
                    Setting::Clear => None,
                    Setting::Set(s) => Some(s),
                })
            }
            "adjectives" | "conjunctions" => {
                let list = match items.as_slice() {
                    [Setting::Clear] => Vec::new(),
                    _ => items
                        .into_iter()
                        .map(|s| match s {
                            Setting::Set(s) => s,
                            Setting::Clear => unreachable!(),
                        })
                        .collect(),
                };
                if key == "adjectives" {
                    o.adjectives = Some(list);
                } else {
                    o.conjunctions = Some(list);
                }
            }
            "numeral" => {
                o.numerals = Some(match single(self, &mut items)? {
                    Setting::Clear => None,
                    Setting::Set(s) => {
                        let parsed = s.split_once('/').and_then(|(v, t)| {
                            Some(Numeral {
                                value: v.parse().ok()?,
                                numeral_type: NumeralType::from_label(t)?,
                            })
                        });
                        Some(parsed.ok_or_else(|| {
                            self.err(at, "malformed numeral", &["<integer>/cardinal", "<integer>/ordinal"])
                        })?)
                    }
                })
            }
            "head" => {
                o.head_index = Some(match single(self, &mut items)? {
                    Setting::Clear => None,
                    Setting::Set(s) => Some(
                        s.parse()
                            .map_err(|_| self.err(at, "expected segment index", &["index"]))?,
                    ),
                })
            }
            _ => {
                return Err(self.err(
                    key_at,
                    "unknown override key",
                    &[
                        "lemma",
                        "case",
                        "number",
                        "tense",
                        "person",
                        "gender",
                        "prep",
                        "adjectives",
                        "numeral",
                        "conjunctions",
                        "det",
                        "pronoun_type",
                        "head",
                    ],
                ))
            }
        }
        Ok(())
    }
}

pub fn parse_template(text: &str) -> Result<Vec<Segment>, ParseError> {
    Parser {
        chars: text.chars().collect(),
        pos: 0,
    }
    .template()
}

fn push_text_value(out: &mut String, s: &str) {
    if s == "-" {
        out.push_str("\\-");
        return;
    }
    for c in s.chars() {
        if matches!(c, '\\' | ',' | ']' | '|' | '+') {
            out.push('\\');
        }
        out.push(c);
    }
}

fn push_label(out: &mut String, key: &str, v: Option<&str>) {
    let _ = write!(out, "{key}={}", v.unwrap_or("-"));
}

fn write_overrides(out: &mut Vec<String>, r: &UnitRef) {
    let o = &r.overrides;
    let mut item = |f: &dyn Fn(&mut String)| {
        let mut s = String::new();
        f(&mut s);
        out.push(s);
    };
    if let Some(l) = &o.lemma {
        item(&|s| {
            s.push_str("lemma=");
            push_text_value(s, l);
        });
    }
    if let Some(v) = o.case {
        item(&|s| push_label(s, "case", v.map(Case::label)));
    }
    if let Some(field) = &r.agreement {
        item(&|s| {
            let _ = write!(s, "number=@{field}");
        });
    } else if let Some(v) = o.number {
        item(&|s| push_label(s, "number", v.map(Number::label)));
    }
    if let Some(v) = o.tense {
        item(&|s| push_label(s, "tense", v.map(Tense::label)));
    }
    if let Some(v) = o.person {
        item(&|s| push_label(s, "person", v.map(Person::label)));
    }
    if let Some(v) = o.gender {
        item(&|s| push_label(s, "gender", v.map(Gender::label)));
    }
    if let Some(v) = &o.preposition {
        item(&|s| {
            s.push_str("prep=");
            match v {
                Some(p) => push_text_value(s, p),
                None => s.push('-'),
            }
        });
    }
    let list = |s: &mut String, key: &str, v: &[String]| {
        let _ = write!(s, "{key}=");
        if v.is_empty() {
            s.push('-');
        }
        for (i, a) in v.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            push_text_value(s, a);
        }
    };
    if let Some(v) = &o.adjectives {
        item(&|s| list(s, "adjectives", v));
    }
    if let Some(v) = o.numerals {
        item(&|s| match v {
            Some(n) => {
                let _ = write!(s, "numeral={}/{}", n.value, n.numeral_type.label());
            }
            None => s.push_str("numeral=-"),
        });
    }
    if let Some(v) = &o.conjunctions {
        item(&|s| list(s, "conjunctions", v));
    }
    if let Some(v) = o.determiner {
        item(&|s| push_label(s, "det", v.map(Determiner::label)));
    }
    if let Some(v) = o.pronoun_type {
        item(&|s| push_label(s, "pronoun_type", v.map(PronounType::label)));
    }
    if let Some(v) = o.head_index {
        item(&|s| match v {
            Some(i) => {
                let _ = write!(s, "head={i}");
            }
            None => s.push_str("head=-"),
        });
    }
}

/// Canonical text form of a segment list.
pub fn serialize_template(segments: &[Segment]) -> String {
    let mut out = String::new();
    for seg in segments {
        match seg {
            Segment::Literal(text) => {
                for c in text.chars() {
                    if matches!(c, '\\' | '{' | '[') {
                        out.push('\\');
                    }
                    out.push(c);
                }
            }
            Segment::Slot(slot) => {
                out.push('{');
                out.push_str(&slot.field);
                if let Some(f) = slot.format {
                    out.push(':');
                    out.push_str(f.name());
                }
                out.push('}');
            }
            Segment::Unit(r) => {
                out.push('[');
                out.push_str(&r.unit_id);
                let mut items = Vec::new();
                write_overrides(&mut items, r);
                if !items.is_empty() {
                    out.push('|');
                    out.push_str(&items.join(","));
                }
                out.push(']');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureOverrides;

    #[test]
    fn peter_scored_example() {
        let segs = parse_template("Peter scored {goals} [u1|number=@goals].").unwrap();
        assert_eq!(
            segs,
            vec![
                Segment::Literal("Peter scored ".into()),
                Segment::Slot(DataSlot {
                    field: "goals".into(),
                    format: None
                }),
                Segment::Literal(" ".into()),
                Segment::Unit(UnitRef {
                    unit_id: "u1".into(),
                    overrides: FeatureOverrides::default(),
                    agreement: Some("goals".into()),
                }),
                Segment::Literal(".".into()),
            ]
        );
    }

    #[test]
    fn empty_template() {
        assert!(parse_template("").unwrap().is_empty());
    }

    #[test]
    fn unclosed_unit_reports_opening_offset() {
        let e = parse_template("missing close [u1").unwrap_err();
        assert_eq!(e.offset, 14);
        assert_eq!((e.line, e.column), (1, 15));
        assert_eq!(e.expected, ["]", "|"]);
    }

    #[test]
    fn line_and_column_on_second_line() {
        let e = parse_template("ok\n{bad field}").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert_eq!(e.offset, 7);
    }

    #[test]
    fn overrides_parse() {
        let segs = parse_template(
            "[d|lemma=Double-Double-Ergebnis,case=dative,prep=-,adjectives=groß+schön,numeral=8/cardinal,det=definite,head=2]",
        )
        .unwrap();
        let Segment::Unit(r) = &segs[0] else { panic!() };
        let o = &r.overrides;
        assert_eq!(o.lemma.as_deref(), Some("Double-Double-Ergebnis"));
        assert_eq!(o.case, Some(Some(Case::Dative)));
        assert_eq!(o.preposition, Some(None));
        assert_eq!(
            o.adjectives.as_deref(),
            Some(&["groß".to_string(), "schön".to_string()][..])
        );
        assert_eq!(
            o.numerals,
            Some(Some(Numeral {
                value: 8,
                numeral_type: NumeralType::Cardinal
            }))
        );
        assert_eq!(o.head_index, Some(Some(2)));
    }

    #[test]
    fn bad_overrides() {
        for bad in [
            "[u|case=dativ]",
            "[u|tense=past,tense=past]",
            "[u|colour=red]",
            "[u|numeral=8]",
            "[u|number=@]",
            "[u|lemma=-]",
            "[u|prep=]",
            "[u|case=dative+genitive]",
            "{x:weird}",
            "{}",
            "a \\x",
        ] {
            assert!(parse_template(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn escapes_round_trip() {
        let t = "a \\{b} \\[c] \\\\ [u|prep=a\\,b,lemma=\\-]";
        let segs = parse_template(t).unwrap();
        assert_eq!(segs[0], Segment::Literal("a {b} [c] \\ ".into()));
        assert_eq!(serialize_template(&segs), "a \\{b} \\[c] \\\\ [u|lemma=\\-,prep=a\\,b]");
        assert_eq!(parse_template(&serialize_template(&segs)).unwrap(), segs);
    }
}
