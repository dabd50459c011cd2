//! Statement conditions: a small boolean language over data fields.
//!
//! ```text
//! expr  := and ("or" and)*
//! and   := unary ("and" unary)*
//! unary := "not" unary | cmp
//! cmp   := atom (("==" | "!=" | "<" | ">") atom)?
//! atom  := field | integer | "string" | true | false | "(" expr ")"
//! ```

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::data::{DataRecord, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Field(String),
    Literal(Value),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConditionError {
    #[error("condition syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown field `{0}` in condition")]
    UnknownField(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Op(CmpOp),
    LParen,
    RParen,
}

fn syntax(offset: usize, message: &str) -> ConditionError {
    ConditionError::Syntax {
        offset,
        message: message.to_string(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ConditionError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'=' | b'!' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((i, Tok::Op(if c == b'=' { CmpOp::Eq } else { CmpOp::Ne })));
                i += 2;
            }
            b'<' => {
                out.push((i, Tok::Op(CmpOp::Lt)));
                i += 1;
            }
            b'>' => {
                out.push((i, Tok::Op(CmpOp::Gt)));
                i += 1;
            }
            b'"' => {
                let start = i;
                i += 1;
                let mut s = String::new();
                loop {
                    match src[i..].chars().next() {
                        None => return Err(syntax(start, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let esc = src[i + 1..]
                                .chars()
                                .next()
                                .ok_or_else(|| syntax(i, "dangling escape"))?;
                            s.push(esc);
                            i += 1 + esc.len_utf8();
                        }
                        Some(ch) => {
                            s.push(ch);
                            i += ch.len_utf8();
                        }
                    }
                }
                out.push((start, Tok::Str(s)));
            }
            b'-' | b'0'..=b'9' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i].parse().map_err(|_| syntax(start, "bad integer"))?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return Err(syntax(i, "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Expr, ConditionError> {
        let mut lhs = self.and()?;
        while self.keyword("or") {
            lhs = Expr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ConditionError> {
        let mut lhs = self.unary()?;
        while self.keyword("and") {
            lhs = Expr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ConditionError> {
        if self.keyword("not") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        let lhs = self.atom()?;
        if let Some(Tok::Op(op)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.atom()?;
            return Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Expr, ConditionError> {
        let offset = self.offset();
        let tok = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        match tok {
            Some(Tok::Int(n)) => Ok(Expr::Literal(Value::Int(n))),
            Some(Tok::Str(s)) => Ok(Expr::Literal(Value::Str(s))),
            Some(Tok::Ident(s)) => match s.as_str() {
                "true" => Ok(Expr::Literal(Value::Bool(true))),
                "false" => Ok(Expr::Literal(Value::Bool(false))),
                "and" | "or" | "not" => Err(syntax(offset, "expected operand, found keyword")),
                _ => Ok(Expr::Field(s)),
            },
            Some(Tok::LParen) => {
                let e = self.or()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(syntax(self.offset(), "expected `)`")),
                }
            }
            _ => Err(syntax(offset, "expected operand")),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ConditionError> {
        let mut p = Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
        };
        let e = p.or()?;
        if p.pos < p.toks.len() {
            return Err(syntax(p.offset(), "unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn fields(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_fields(&mut out);
        out
    }

    fn collect_fields<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Field(f) => {
                out.insert(f);
            }
            Expr::Literal(_) => {}
            Expr::Not(e) => e.collect_fields(out),
            Expr::Cmp(_, a, b) | Expr::And(a, b) | Expr::Or(a, b) => {
                a.collect_fields(out);
                b.collect_fields(out);
            }
        }
    }

    fn value(&self, data: &DataRecord) -> Result<Value, ConditionError> {
        match self {
            Expr::Field(f) => data
                .get(f)
                .cloned()
                .ok_or_else(|| ConditionError::UnknownField(f.clone())),
            Expr::Literal(v) => Ok(v.clone()),
            _ => self.eval(data).map(Value::Bool),
        }
    }

    pub fn eval(&self, data: &DataRecord) -> Result<bool, ConditionError> {
        match self {
            Expr::Field(_) | Expr::Literal(_) => match self.value(data)? {
                Value::Bool(b) => Ok(b),
                other => Err(ConditionError::TypeMismatch(alloc::format!(
                    "expected boolean, found {}",
                    other.type_name()
                ))),
            },
            Expr::Not(e) => Ok(!e.eval(data)?),
            Expr::And(a, b) => Ok(a.eval(data)? && b.eval(data)?),
            Expr::Or(a, b) => Ok(a.eval(data)? || b.eval(data)?),
            Expr::Cmp(op, a, b) => {
                let (a, b) = (a.value(data)?, b.value(data)?);
                match (op, &a, &b) {
                    (CmpOp::Eq, _, _) if a.type_name() == b.type_name() => Ok(a == b),
                    (CmpOp::Ne, _, _) if a.type_name() == b.type_name() => Ok(a != b),
                    (CmpOp::Lt, Value::Int(x), Value::Int(y)) => Ok(x < y),
                    (CmpOp::Gt, Value::Int(x), Value::Int(y)) => Ok(x > y),
                    _ => Err(ConditionError::TypeMismatch(alloc::format!(
                        "cannot compare {} {} {}",
                        a.type_name(),
                        op.symbol(),
                        b.type_name()
                    ))),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(_) => 3,
            Expr::Cmp(..) => 4,
            Expr::Field(_) | Expr::Literal(_) => 5,
        }
    }

    fn fmt_child(&self, child: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() < min {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Field(s) => f.write_str(s),
            Expr::Literal(Value::Str(s)) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("\"")
            }
            Expr::Literal(v) => write!(f, "{v}"),
            Expr::Not(e) => {
                f.write_str("not ")?;
                self.fmt_child(e, 3, f)
            }
            Expr::And(a, b) => {
                self.fmt_child(a, 2, f)?;
                f.write_str(" and ")?;
                self.fmt_child(b, 3, f)
            }
            Expr::Or(a, b) => {
                self.fmt_child(a, 1, f)?;
                f.write_str(" or ")?;
                self.fmt_child(b, 2, f)
            }
            Expr::Cmp(op, a, b) => {
                self.fmt_child(a, 5, f)?;
                write!(f, " {} ", op.symbol())?;
                self.fmt_child(b, 5, f)
            }
        }
    }
}
