use std::fmt;

use thiserror::Error;

use super::ast::{EdgeDirection, EdgePattern, NodePattern, PathLength, PatternQuery, Predicate};
use crate::graph::PropertyValue;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {position}: expected {expected}, found {found}")]
pub struct SyntaxError {
    /// Byte offset into the query text.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Float(f64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Dash,
    Arrow,
    LArrow,
    Star,
    DotDot,
    Dot,
    Eq,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Float(x) => write!(f, "`{x}`"),
            Tok::Str(s) => write!(f, "string '{s}'"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::Colon => ":",
                    Tok::Dash => "-",
                    Tok::Arrow => "->",
                    Tok::LArrow => "<-",
                    Tok::Star => "*",
                    Tok::DotDot => "..",
                    Tok::Dot => ".",
                    Tok::Eq => "=",
                    _ => ",",
                };
                write!(f, "`{s}`")
            }
        }
    }
}

fn err(position: usize, expected: &str, found: impl fmt::Display) -> SyntaxError {
    SyntaxError {
        position,
        expected: expected.to_owned(),
        found: found.to_string(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let next = bytes.get(i + 1).copied();
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b':' => Tok::Colon,
            b'*' => Tok::Star,
            b'=' => Tok::Eq,
            b',' => Tok::Comma,
            b'-' if next == Some(b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'-' => Tok::Dash,
            b'<' if next == Some(b'-') => {
                i += 1;
                Tok::LArrow
            }
            b'.' if next == Some(b'.') => {
                i += 1;
                Tok::DotDot
            }
            b'.' => Tok::Dot,
            b'\'' | b'"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match bytes.get(j) {
                        None => return Err(err(text.len(), "closing quote", Tok::Eof)),
                        Some(&q) if q == c => break,
                        Some(b'\\') if j + 1 < bytes.len() => {
                            let ch = text[j + 1..].chars().next().expect("in bounds");
                            s.push(ch);
                            j += 1 + ch.len_utf8();
                        }
                        Some(_) => {
                            let ch = text[j..].chars().next().expect("in bounds");
                            s.push(ch);
                            j += ch.len_utf8();
                        }
                    }
                }
                i = j;
                Tok::Str(s)
            }
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let is_float = bytes.get(j) == Some(&b'.') && bytes.get(j + 1).is_some_and(u8::is_ascii_digit);
                if is_float {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    let x = text[i..j].parse().map_err(|_| err(i, "number", &text[i..j]))?;
                    i = j - 1;
                    Tok::Float(x)
                } else {
                    let v = text[i..j]
                        .parse()
                        .map_err(|_| err(i, "integer that fits in 64 bits", &text[i..j]))?;
                    i = j - 1;
                    Tok::Int(v)
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let s = text[i..j].to_owned();
                i = j - 1;
                Tok::Ident(s)
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(err(i, "a token", format!("`{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        Err(err(self.pos(), expected, self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.to_string())
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s.eq_ignore_ascii_case(kw))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.fail(kw)
        }
    }

    fn ident(&mut self, what: &str) -> Result<(usize, String), SyntaxError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((pos, s))
            }
            _ => self.fail(what),
        }
    }

    fn count(&mut self) -> Result<u32, SyntaxError> {
        match *self.peek() {
            Tok::Int(i) if (0..=i64::from(u32::MAX)).contains(&i) => {
                self.bump();
                Ok(i as u32)
            }
            _ => self.fail("hop count"),
        }
    }

    fn node(&mut self) -> Result<(usize, NodePattern), SyntaxError> {
        self.expect(Tok::LParen)?;
        let (pos, var) = self.ident("variable")?;
        let label = if *self.peek() == Tok::Colon {
            self.bump();
            Some(self.ident("node label")?.1)
        } else {
            None
        };
        self.expect(Tok::RParen)?;
        Ok((pos, NodePattern { var, label }))
    }

    fn edge(&mut self) -> Result<EdgePattern, SyntaxError> {
        let pointing_left = match self.peek() {
            Tok::Dash => false,
            Tok::LArrow => true,
            _ => return self.fail("`-` or `<-`"),
        };
        self.bump();
        self.expect(Tok::LBracket)?;
        let label = if *self.peek() == Tok::Colon {
            self.bump();
            Some(self.ident("edge label")?.1)
        } else {
            None
        };
        let length = if *self.peek() == Tok::Star {
            self.bump();
            if let Tok::Int(_) = self.peek() {
                let pos = self.pos();
                let min = self.count()?;
                let max = if *self.peek() == Tok::DotDot {
                    self.bump();
                    self.count()?
                } else {
                    min
                };
                if max < min {
                    return Err(err(pos, "lower hop bound <= upper bound", format!("{min}..{max}")));
                }
                PathLength::Range { min, max: Some(max) }
            } else {
                PathLength::Range { min: 1, max: None }
            }
        } else {
            PathLength::One
        };
        self.expect(Tok::RBracket)?;
        let pointing_right = match self.peek() {
            Tok::Dash => false,
            Tok::Arrow => true,
            _ => return self.fail("`-` or `->`"),
        };
        if pointing_left && pointing_right {
            return self.fail("`-` (an edge points one way)");
        }
        self.bump();
        let direction = match (pointing_left, pointing_right) {
            (true, _) => EdgeDirection::Left,
            (_, true) => EdgeDirection::Right,
            _ => EdgeDirection::Undirected,
        };
        Ok(EdgePattern {
            label,
            direction,
            length,
        })
    }

    fn literal(&mut self) -> Result<PropertyValue, SyntaxError> {
        let negative = *self.peek() == Tok::Dash;
        if negative {
            self.bump();
        }
        let value = match self.peek().clone() {
            Tok::Int(i) => PropertyValue::Int(if negative { -i } else { i }),
            Tok::Float(x) => PropertyValue::Float(if negative { -x } else { x }),
            Tok::Str(s) if !negative => PropertyValue::Str(s),
            Tok::Ident(s) if !negative && s.eq_ignore_ascii_case("true") => PropertyValue::Bool(true),
            Tok::Ident(s) if !negative && s.eq_ignore_ascii_case("false") => PropertyValue::Bool(false),
            _ if negative => return self.fail("number"),
            _ => return self.fail("literal"),
        };
        self.bump();
        Ok(value)
    }

    fn query(&mut self) -> Result<PatternQuery, SyntaxError> {
        self.keyword("MATCH")?;
        let (_, left) = self.node()?;
        let edge = self.edge()?;
        let (right_pos, right) = self.node()?;
        if right.var == left.var {
            return Err(err(right_pos, "a fresh variable", format!("`{}` again", right.var)));
        }
        let declared = |pos: usize, v: &str| {
            if v == left.var || v == right.var {
                Ok(())
            } else {
                Err(err(pos, "a variable bound in MATCH", format!("`{v}`")))
            }
        };
        let mut predicates = Vec::new();
        if self.is_keyword("WHERE") {
            self.bump();
            loop {
                let (pos, var) = self.ident("variable")?;
                declared(pos, &var)?;
                self.expect(Tok::Dot)?;
                let (_, property) = self.ident("property name")?;
                self.expect(Tok::Eq)?;
                let value = self.literal()?;
                predicates.push(Predicate { var, property, value });
                if self.is_keyword("AND") {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.keyword("RETURN")?;
        let mut returns = Vec::new();
        loop {
            let (pos, var) = self.ident("variable")?;
            declared(pos, &var)?;
            returns.push(var);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        if *self.peek() != Tok::Eof {
            return self.fail("end of input");
        }
        Ok(PatternQuery {
            left,
            edge,
            right,
            predicates,
            returns,
        })
    }
}

/// Parses one `MATCH ... RETURN ...` query. Keywords are case-insensitive
/// and whitespace is free.
pub fn parse(text: &str) -> Result<PatternQuery, SyntaxError> {
    Parser {
        toks: lex(text)?,
        at: 0,
    }
    .query()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_query() {
        let q = parse("MATCH (n)-[*]->(m) WHERE n.node_id = 1 RETURN m").unwrap();
        assert_eq!(q.left.var, "n");
        assert_eq!(q.edge.direction, EdgeDirection::Right);
        assert_eq!(q.edge.length, PathLength::Range { min: 1, max: None });
        assert_eq!(q.edge.label, None);
        assert_eq!(q.predicates[0].value, PropertyValue::Int(1));
        assert_eq!(q.returns, ["m"]);
    }

    #[test]
    fn labeled_and_bounded() {
        let q = parse("match (n:Post)<-[:REPLY_OF*2..3]-(m) where n.node_id = 7 and m.lang = 'en' return n,m").unwrap();
        assert_eq!(q.left.label.as_deref(), Some("Post"));
        assert_eq!(q.edge.label.as_deref(), Some("REPLY_OF"));
        assert_eq!(q.edge.direction, EdgeDirection::Left);
        assert_eq!(q.edge.length, PathLength::Range { min: 2, max: Some(3) });
        assert_eq!(q.predicates.len(), 2);
        assert_eq!(
            parse("MATCH (a)-[*4]-(b) RETURN a").unwrap().edge.length.bounds(),
            (4, Some(4))
        );
        assert_eq!(parse("MATCH (a)-[]-(b) RETURN a").unwrap().edge.length, PathLength::One);
    }

    #[test]
    fn literals() {
        let q = parse(r#"MATCH (a)-[]->(b) WHERE a.x = -3 AND a.y = 2.5 AND a.z = "it's" AND b.w = TRUE RETURN b"#)
            .unwrap();
        let values: Vec<_> = q.predicates.iter().map(|p| p.value.clone()).collect();
        assert_eq!(
            values,
            [
                PropertyValue::Int(-3),
                PropertyValue::Float(2.5),
                PropertyValue::Str("it's".into()),
                PropertyValue::Bool(true)
            ]
        );
    }

    #[test]
    fn unclosed_node_reports_end_position() {
        let text = "MATCH (n)-[*]->(m";
        let e = parse(text).unwrap_err();
        assert_eq!(e.position, text.len());
        assert_eq!(e.expected, "`)`");
        assert_eq!(e.found, "end of input");
    }

    #[test]
    fn error_positions_and_hints() {
        let cases = [
            ("MATCH (n)-[*]->(n) RETURN n", 16, "a fresh variable"),
            ("MATCH (n)-[*]->(m) RETURN x", 26, "a variable bound in MATCH"),
            ("MATCH (n)<-[*]->(m) RETURN m", 14, "`-` (an edge points one way)"),
            ("MATCH (n)-[*3..1]->(m) RETURN m", 12, "lower hop bound <= upper bound"),
            ("FIND (n)", 0, "MATCH"),
            ("MATCH (n)-[*]->(m) WHERE n.id = RETURN m", 32, "literal"),
            ("MATCH (n)-[*]->(m) RETURN m extra", 28, "end of input"),
            ("MATCH (n)-[*]->(m) WHERE n.s = 'open RETURN m", 45, "closing quote"),
            ("MATCH (n)-[*]->(m) WHERE n.s = # RETURN m", 31, "a token"),
        ];
        for (text, pos, expected) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!((e.position, e.expected.as_str()), (pos, expected), "{text}: {e}");
        }
    }
}
