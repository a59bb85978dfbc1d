//! Index labels for the coordinate set.
//!
//! The index set is an arbitrary unbounded universe of labels. A label is
//! either an integer (written in canonical decimal) or an opaque string;
//! a string that reads as a canonical decimal integer IS that integer, so
//! labels compare equal exactly when their textual forms coincide. Integer
//! labels order numerically and sort before all text labels, which keeps
//! iteration over mixed windows deterministic and natural.

use std::fmt;

/// One coordinate of the index set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum IndexLabel {
    Int(i64),
    Text(String),
}

impl IndexLabel {
    /// Interprets a string as a label; canonical decimal integers become
    /// integer labels, everything else is opaque text.
    pub fn parse(s: &str) -> IndexLabel {
        if is_canonical_decimal(s) {
            if let Ok(n) = s.parse::<i64>() {
                return IndexLabel::Int(n);
            }
        }
        IndexLabel::Text(s.to_string())
    }

    pub fn int(n: i64) -> IndexLabel {
        IndexLabel::Int(n)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            IndexLabel::Int(n) => Some(*n),
            IndexLabel::Text(_) => None,
        }
    }
}

fn is_canonical_decimal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return false;
    }
    if s == "-0" {
        return false;
    }
    true
}

impl fmt::Display for IndexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexLabel::Int(n) => write!(f, "{n}"),
            IndexLabel::Text(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for IndexLabel {
    fn from(n: i64) -> Self {
        IndexLabel::Int(n)
    }
}

impl From<&str> for IndexLabel {
    fn from(s: &str) -> Self {
        IndexLabel::parse(s)
    }
}

impl From<String> for IndexLabel {
    fn from(s: String) -> Self {
        IndexLabel::parse(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_decimal_strings_are_integers() {
        assert_eq!(IndexLabel::parse("17"), IndexLabel::Int(17));
        assert_eq!(IndexLabel::parse("-3"), IndexLabel::Int(-3));
        assert_eq!(IndexLabel::parse("0"), IndexLabel::Int(0));
    }

    #[test]
    fn non_canonical_strings_stay_text() {
        assert_eq!(IndexLabel::parse("03"), IndexLabel::Text("03".into()));
        assert_eq!(IndexLabel::parse("-0"), IndexLabel::Text("-0".into()));
        assert_eq!(IndexLabel::parse("+2"), IndexLabel::Text("+2".into()));
        assert_eq!(IndexLabel::parse("a"), IndexLabel::Text("a".into()));
        assert_eq!(IndexLabel::parse(""), IndexLabel::Text(String::new()));
    }

    #[test]
    fn equal_textual_forms_mean_equal_labels() {
        for s in ["12", "-5", "03", "x9", "0"] {
            assert_eq!(IndexLabel::parse(s), IndexLabel::parse(&IndexLabel::parse(s).to_string()));
            assert_eq!(IndexLabel::parse(s).to_string(), s);
        }
    }

    #[test]
    fn integers_order_numerically_and_before_text() {
        let mut labels = vec![
            IndexLabel::parse("b"),
            IndexLabel::parse("10"),
            IndexLabel::parse("2"),
            IndexLabel::parse("a"),
            IndexLabel::parse("-1"),
        ];
        labels.sort();
        let shown: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, ["-1", "2", "10", "a", "b"]);
    }
}
