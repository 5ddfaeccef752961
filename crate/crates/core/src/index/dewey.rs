use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Child ranks along the path from the root; the root itself is `[1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeweyLabel(Vec<u32>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed Dewey label `{0}`")]
pub struct MalformedDewey(pub String);

impl DeweyLabel {
    pub fn root() -> DeweyLabel {
        DeweyLabel(vec![1])
    }

    /// Components must all be positive.
    pub fn new(components: Vec<u32>) -> Option<DeweyLabel> {
        (!components.is_empty() && components.iter().all(|c| *c > 0)).then_some(DeweyLabel(components))
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len() - 1
    }

    pub fn child(&self, rank: u32) -> DeweyLabel {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(rank);
        DeweyLabel(v)
    }

    /// Strict, component-wise prefix: `1.2` is a prefix of `1.2.2` but not
    /// of `1.22` or of itself.
    pub fn is_proper_prefix_of(&self, other: &DeweyLabel) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    pub fn is_prefix_of(&self, other: &DeweyLabel) -> bool {
        other.0.starts_with(&self.0)
    }

    pub(crate) fn components_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }

    /// Replaces the leading `old_len` components with `prefix`.
    pub(crate) fn rebase(&self, old_len: usize, prefix: &DeweyLabel) -> DeweyLabel {
        let mut v = prefix.0.clone();
        v.extend_from_slice(&self.0[old_len..]);
        DeweyLabel(v)
    }

    /// Heap bytes of the vector form.
    pub fn storage_bytes(&self) -> usize {
        self.0.len() * std::mem::size_of::<u32>()
    }
}

impl fmt::Display for DeweyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.0 {
            if !first {
                f.write_str(".")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for DeweyLabel {
    type Err = MalformedDewey;

    /// Accepts `[1-9][0-9]*(\.[1-9][0-9]*)*`.
    fn from_str(s: &str) -> Result<DeweyLabel, MalformedDewey> {
        let bad = || MalformedDewey(s.to_owned());
        s.split('.')
            .map(|part| {
                let valid = !part.is_empty() && !part.starts_with('0') && part.bytes().all(|b| b.is_ascii_digit());
                if valid {
                    part.parse::<u32>().map_err(|_| bad())
                } else {
                    Err(bad())
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(DeweyLabel)
    }
}

pub fn dewey_to_string(d: &DeweyLabel) -> String {
    d.to_string()
}

pub fn string_to_dewey(s: &str) -> Result<DeweyLabel, MalformedDewey> {
    s.parse()
}
