use std::fmt;

use crate::graph::PropertyValue;

#[derive(Clone, Debug, PartialEq)]
pub struct NodePattern {
    pub var: String,
    pub label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeDirection {
    /// `-[...]->`
    Right,
    /// `<-[...]-`
    Left,
    /// `-[...]-`
    Undirected,
}

impl EdgeDirection {
    pub fn reversed(self) -> EdgeDirection {
        match self {
            EdgeDirection::Right => EdgeDirection::Left,
            EdgeDirection::Left => EdgeDirection::Right,
            EdgeDirection::Undirected => EdgeDirection::Undirected,
        }
    }
}

/// Number of hops an edge pattern spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathLength {
    /// No star: exactly one edge.
    One,
    /// `*` is `min = 1, max = None`; `*k` is `k..k`.
    Range { min: u32, max: Option<u32> },
}

impl PathLength {
    pub fn bounds(self) -> (u32, Option<u32>) {
        match self {
            PathLength::One => (1, Some(1)),
            PathLength::Range { min, max } => (min, max),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgePattern {
    pub label: Option<String>,
    pub direction: EdgeDirection,
    pub length: PathLength,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Predicate {
    pub var: String,
    pub property: String,
    pub value: PropertyValue,
}

/// `MATCH (a)-[e]->(b) WHERE p AND ... RETURN v, ...`
#[derive(Clone, Debug, PartialEq)]
pub struct PatternQuery {
    pub left: NodePattern,
    pub edge: EdgePattern,
    pub right: NodePattern,
    pub predicates: Vec<Predicate>,
    pub returns: Vec<String>,
}

impl PatternQuery {
    pub fn predicates_on<'a>(&'a self, var: &'a str) -> impl Iterator<Item = &'a Predicate> + 'a {
        self.predicates.iter().filter(move |p| p.var == var)
    }
}

impl fmt::Display for NodePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "({}:{})", self.var, l),
            None => write!(f, "({})", self.var),
        }
    }
}

impl fmt::Display for EdgePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self.direction {
            EdgeDirection::Right => ("-", "->"),
            EdgeDirection::Left => ("<-", "-"),
            EdgeDirection::Undirected => ("-", "-"),
        };
        f.write_str(open)?;
        f.write_str("[")?;
        if let Some(l) = &self.label {
            write!(f, ":{l}")?;
        }
        match self.length {
            PathLength::One => {}
            PathLength::Range { min: 1, max: None } => f.write_str("*")?,
            PathLength::Range { min, max: Some(max) } => write!(f, "*{min}..{max}")?,
            // Not expressible in the grammar; only reachable through
            // hand-built ASTs.
            PathLength::Range { min, max: None } => write!(f, "*{min}..")?,
        }
        f.write_str("]")?;
        f.write_str(close)
    }
}

pub(crate) fn write_literal(f: &mut impl fmt::Write, v: &PropertyValue) -> fmt::Result {
    match v {
        PropertyValue::Int(i) => write!(f, "{i}"),
        PropertyValue::Float(x) => {
            let s = x.to_string();
            if s.contains(['.', 'e', 'N', 'i']) {
                f.write_str(&s)
            } else {
                write!(f, "{s}.0")
            }
        }
        PropertyValue::Str(s) => write!(f, "'{}'", s.replace('\\', "\\\\").replace('\'', "\\'")),
        PropertyValue::Bool(b) => write!(f, "{b}"),
    }
}

impl fmt::Display for PatternQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MATCH {}{}{}", self.left, self.edge, self.right)?;
        for (i, p) in self.predicates.iter().enumerate() {
            f.write_str(if i == 0 { " WHERE " } else { " AND " })?;
            write!(f, "{}.{} = ", p.var, p.property)?;
            write_literal(f, &p.value)?;
        }
        write!(f, " RETURN {}", self.returns.join(", "))
    }
}
