//! Vertex labels of the walker figure.
//!
//! Canonical labels are single ASCII characters whose byte order coincides with
//! the canonical order `0,1,2,3,4,5,a,b,c,m,t`, so the derived `Ord` is the
//! tie-breaking order used everywhere.

use std::borrow::Borrow;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> NodeKind {
        match self.as_str() {
            "0" | "a" | "b" | "c" | "m" => NodeKind::Diamond,
            _ => NodeKind::Circle,
        }
    }

    /// Precedence class used when naming partitions; lower binds first.
    pub fn name_class(&self) -> u8 {
        match self.as_str() {
            "1" | "2" | "3" | "4" | "5" => 0,
            "0" => 1,
            "a" | "b" | "c" => 2,
            "m" => 3,
            "t" => 4,
            _ => 5,
        }
    }

    pub fn is_canonical(&self) -> bool {
        CANONICAL.contains(&self.as_str())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

impl Borrow<str> for Label {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Node shape in the adjacency figure: derived points are diamonds,
/// endpoints and compass centres are circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Diamond,
    Circle,
}

pub const CANONICAL: [&str; 11] = ["0", "1", "2", "3", "4", "5", "a", "b", "c", "m", "t"];

pub fn canonical() -> impl Iterator<Item = Label> {
    CANONICAL.iter().map(|s| Label::new(*s))
}

/// Numbering used by the written construction steps, mapped onto canonical
/// labels: agents pin the inner string at text points 1,2,3 and the outer
/// string at 4,5,6.
pub const TEXT_ALIASES: [(&str, &str); 6] = [
    ("1", "t"),
    ("2", "1"),
    ("3", "2"),
    ("4", "3"),
    ("5", "5"),
    ("6", "4"),
];

pub fn from_text_alias(text: &str) -> Option<Label> {
    TEXT_ALIASES
        .iter()
        .find(|(t, _)| *t == text)
        .map(|(_, c)| Label::new(*c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_order_is_canonical_order() {
        let mut sorted: Vec<Label> = canonical().collect();
        sorted.sort();
        let names: Vec<&str> = sorted.iter().map(Label::as_str).collect();
        assert_eq!(names, CANONICAL);
    }

    #[test]
    fn node_shapes() {
        for s in ["a", "b", "c", "m", "0"] {
            assert_eq!(Label::from(s).kind(), NodeKind::Diamond);
        }
        for s in ["1", "2", "3", "4", "5", "t"] {
            assert_eq!(Label::from(s).kind(), NodeKind::Circle);
        }
    }

    #[test]
    fn text_aliases() {
        assert_eq!(from_text_alias("1"), Some(Label::from("t")));
        assert_eq!(from_text_alias("6"), Some(Label::from("4")));
        assert_eq!(from_text_alias("7"), None);
    }
}
