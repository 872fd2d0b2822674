//! Nodes of the full binary tree of finite bit strings.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// Deepest node the packed representation can hold.
pub const MAX_NODE_DEPTH: usize = 63;

/// A finite binary string, i.e. a position in the binary tree.
///
/// The bits are packed most-significant-first into a `u64`, so for nodes of
/// equal length numeric order agrees with lexicographic order. The derived
/// ordering is length-lexicographic, which is the canonical enumeration
/// order used throughout the crate (witness allocation, dumps, searches).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    len: u8,
    bits: u64,
}

impl Node {
    /// The empty string λ.
    pub const ROOT: Node = Node { len: 0, bits: 0 };

    pub fn root() -> Node {
        Node::ROOT
    }

    /// Builds a node from an explicit bit sequence.
    ///
    /// # Panics
    ///
    /// Panics if `bits` is longer than [`MAX_NODE_DEPTH`].
    pub fn from_bits(bits: &[bool]) -> Node {
        assert!(bits.len() <= MAX_NODE_DEPTH, "node deeper than {MAX_NODE_DEPTH}");
        bits.iter().fold(Node::ROOT, |n, &b| n.child(b))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_root(&self) -> bool {
        self.len == 0
    }

    /// Bit at position `k` (0 is the bit right below the root).
    pub fn bit(&self, k: usize) -> bool {
        assert!(k < self.len(), "bit index {k} out of range for {self}");
        (self.bits >> (self.len() - 1 - k)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |k| self.bit(k))
    }

    pub fn child(&self, bit: bool) -> Node {
        assert!(self.len() < MAX_NODE_DEPTH, "child of {self} exceeds depth limit");
        Node { len: self.len + 1, bits: (self.bits << 1) | bit as u64 }
    }

    pub fn parent(&self) -> Option<Node> {
        (!self.is_root()).then(|| self.prefix(self.len() - 1))
    }

    /// The initial segment of length `k`.
    pub fn prefix(&self, k: usize) -> Node {
        assert!(k <= self.len(), "prefix length {k} exceeds {}", self.len());
        let bits = if k == 0 { 0 } else { self.bits >> (self.len() - k) };
        Node { len: k as u8, bits }
    }

    /// All initial segments from λ up to and including `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..=self.len()).map(move |k| self.prefix(k))
    }

    /// All strict initial segments, λ first.
    pub fn proper_prefixes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.len()).map(move |k| self.prefix(k))
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &Node) -> bool {
        self.len <= other.len && other.prefix(self.len()) == *self
    }

    /// `self ≺ other`.
    pub fn is_proper_prefix_of(&self, other: &Node) -> bool {
        self.len < other.len && self.is_prefix_of(other)
    }

    pub fn is_comparable(&self, other: &Node) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The sibling branch: same parent, last bit flipped. λ has none.
    pub fn sibling(&self) -> Option<Node> {
        (!self.is_root()).then_some(Node { len: self.len, bits: self.bits ^ 1 })
    }

    /// Every node of length at most `depth`, in length-lex order.
    pub fn all_up_to(depth: usize) -> impl Iterator<Item = Node> {
        assert!(depth <= MAX_NODE_DEPTH);
        (0..=depth).flat_map(|len| (0..1u64 << len).map(move |bits| Node { len: len as u8, bits }))
    }

    /// Position of this node in the length-lex enumeration of all nodes.
    pub fn ordinal(&self) -> usize {
        ((1u64 << self.len) - 1 + self.bits) as usize
    }

    /// Bit string form without the λ symbol: the root is `""`.
    pub fn to_bit_string(&self) -> String {
        self.bits().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl Default for Node {
    fn default() -> Self {
        Node::ROOT
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            f.write_str("λ")
        } else {
            f.write_str(&self.to_bit_string())
        }
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Node({self})")
    }
}

impl FromStr for Node {
    type Err = ParseError;

    /// Accepts a string over `{0,1}`; the root may be written `""` or `λ`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "λ" {
            return Ok(Node::ROOT);
        }
        if s.len() > MAX_NODE_DEPTH {
            return Err(ParseError::new(format!("node `{s}` is deeper than {MAX_NODE_DEPTH}")));
        }
        let mut node = Node::ROOT;
        for c in s.chars() {
            node = match c {
                '0' => node.child(false),
                '1' => node.child(true),
                _ => return Err(ParseError::new(format!("invalid character {c:?} in node `{s}`"))),
            };
        }
        Ok(node)
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
