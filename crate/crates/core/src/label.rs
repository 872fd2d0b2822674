use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::node::Node;

/// A name for one constructed set.
///
/// Structural labels tie a set to exactly one tree node. Coding labels are
/// what the decoding functionals look for; the priority variant additionally
/// records the node `nu` below which higher-priority strategies were quiet
/// when the label was placed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Structural(Node),
    CodingFip { strategy: usize, code: usize },
    CodingPriority { strategy: usize, code: usize, nu: Node },
}

impl Label {
    pub fn structural_node(&self) -> Option<Node> {
        match self {
            Label::Structural(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_coding(&self) -> bool {
        !matches!(self, Label::Structural(_))
    }

    /// Strategy index of a coding label.
    pub fn strategy(&self) -> Option<usize> {
        match self {
            Label::Structural(_) => None,
            Label::CodingFip { strategy, .. } | Label::CodingPriority { strategy, .. } => Some(*strategy),
        }
    }

    /// Coding index `j` of a coding label.
    pub fn code(&self) -> Option<usize> {
        match self {
            Label::Structural(_) => None,
            Label::CodingFip { code, .. } | Label::CodingPriority { code, .. } => Some(*code),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Structural(n) => write!(f, "A[{n}]"),
            Label::CodingFip { strategy, code } => write!(f, "B[{strategy},{code}]"),
            Label::CodingPriority { strategy, code, nu } => write!(f, "B[{strategy},{code},{nu}]"),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Label {
    type Err = ParseError;

    /// Parses the `A[σ]`, `B[i,j]` and `B[i,j,ν]` forms produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::new(format!("malformed label `{s}`"));
        let (kind, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let body = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let index = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match kind {
            "A" => Ok(Label::Structural(body.parse()?)),
            "B" => {
                let parts: Vec<&str> = body.split(',').collect();
                match parts.as_slice() {
                    [i, j] => Ok(Label::CodingFip { strategy: index(i)?, code: index(j)? }),
                    [i, j, nu] => Ok(Label::CodingPriority { strategy: index(i)?, code: index(j)?, nu: nu.parse()? }),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}
