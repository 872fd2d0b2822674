//! The labeled tree and the accessor algebra over it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::label::Label;
use crate::node::Node;

pub type Stage = usize;

/// Position of a label in first-appearance order; index `k` names `X_k`.
pub type LabelIndex = usize;

/// Which construction built a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "fip")]
    Fip,
    #[serde(rename = "2ip")]
    TwoIp,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fip => "fip",
            Mode::TwoIp => "2ip",
        })
    }
}

impl FromStr for Mode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fip" => Ok(Mode::Fip),
            "2ip" => Ok(Mode::TwoIp),
            _ => Err(ParseError::new(format!("unknown mode `{s}` (expected fip or 2ip)"))),
        }
    }
}

/// Result of recording a label on a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Placed {
    pub index: LabelIndex,
    pub new_label: bool,
    pub new_at_node: bool,
}

/// Stage-stamped assignment of labels to nodes, plus the global index order.
///
/// Records are append-only: once a label is on a node its stage stamp never
/// changes. Trees are built by the engine (or by trace replay) and are
/// read-only afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    mode: Mode,
    max_depth: usize,
    labels: Vec<Label>,
    first_stage: Vec<Stage>,
    index_of: HashMap<Label, LabelIndex>,
    placements: BTreeMap<Node, BTreeMap<LabelIndex, Stage>>,
    locations: Vec<Vec<Node>>,
}

impl LabeledTree {
    pub fn new(mode: Mode, max_depth: usize) -> Self {
        LabeledTree {
            mode,
            max_depth,
            labels: Vec::new(),
            first_stage: Vec::new(),
            index_of: HashMap::new(),
            placements: BTreeMap::new(),
            locations: Vec::new(),
        }
    }

    pub(crate) fn place(&mut self, label: Label, node: Node, stage: Stage) -> Placed {
        match label {
            Label::Structural(home) => assert_eq!(home, node, "{label} may only sit on its own node"),
            Label::CodingFip { .. } => assert_eq!(self.mode, Mode::Fip, "{label} in a 2IP tree"),
            Label::CodingPriority { .. } => assert_eq!(self.mode, Mode::TwoIp, "{label} in a FIP tree"),
        }
        assert!(node.len() <= self.max_depth, "{node} is below the depth bound {}", self.max_depth);
        let (index, new_label) = match self.index_of.get(&label) {
            Some(&k) => (k, false),
            None => {
                let k = self.labels.len();
                self.labels.push(label);
                self.first_stage.push(stage);
                self.index_of.insert(label, k);
                self.locations.push(Vec::new());
                (k, true)
            }
        };
        let at_node = self.placements.entry(node).or_default();
        let new_at_node = !at_node.contains_key(&index);
        if new_at_node {
            at_node.insert(index, stage);
            self.locations[index].push(node);
        }
        Placed { index, new_label, new_at_node }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// Number of distinct labels (the length of the index order).
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in first-appearance order.
    pub fn index_order(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, k: LabelIndex) -> Option<Label> {
        self.labels.get(k).copied()
    }

    pub fn index_of(&self, label: &Label) -> Option<LabelIndex> {
        self.index_of.get(label).copied()
    }

    /// Stage at which `X_k`'s label first appeared.
    pub fn first_stage(&self, k: LabelIndex) -> Option<Stage> {
        self.first_stage.get(k).copied()
    }

    /// Nodes carrying label `k`, in the order they received it.
    pub fn locations(&self, k: LabelIndex) -> &[Node] {
        self.locations.get(k).map_or(&[], Vec::as_slice)
    }

    /// `(label index, stage)` records on one node.
    pub fn placements_at(&self, node: &Node) -> impl Iterator<Item = (LabelIndex, Stage)> + '_ {
        self.placements.get(node).into_iter().flat_map(|m| m.iter().map(|(&k, &s)| (k, s)))
    }

    /// Every labeled node with its records, in length-lex node order.
    pub fn placements(&self) -> impl Iterator<Item = (Node, &BTreeMap<LabelIndex, Stage>)> {
        self.placements.iter().map(|(n, m)| (*n, m))
    }

    pub fn carries(&self, node: &Node, k: LabelIndex) -> bool {
        self.placements.get(node).is_some_and(|m| m.contains_key(&k))
    }

    /// σ̃: indices of labels on strict initial segments of `sigma`.
    pub fn proper_tilde(&self, sigma: &Node) -> BTreeSet<LabelIndex> {
        sigma.proper_prefixes().flat_map(|tau| self.placements_at(&tau).map(|(k, _)| k)).collect()
    }

    /// Indices of labels on initial segments of `sigma`, `sigma` included.
    pub fn inclusive_tilde(&self, sigma: &Node) -> BTreeSet<LabelIndex> {
        sigma.prefixes().flat_map(|tau| self.placements_at(&tau).map(|(k, _)| k)).collect()
    }

    /// [`inclusive_tilde`](Self::inclusive_tilde) as the tree stood at the end of `stage`.
    pub fn inclusive_tilde_at(&self, sigma: &Node, stage: Stage) -> BTreeSet<LabelIndex> {
        sigma
            .prefixes()
            .flat_map(|tau| self.placements_at(&tau).filter(move |&(_, s)| s <= stage).map(|(k, _)| k))
            .collect()
    }

    /// Ỹ for the longest available prefix of an intended infinite path.
    ///
    /// This is only the finite approximation: labels placed on the path
    /// below `path_prefix` are not represented.
    pub fn path_tilde(&self, path_prefix: &Node) -> BTreeSet<LabelIndex> {
        self.inclusive_tilde(path_prefix)
    }

    /// Index of `A_σ`, if placed.
    pub fn structural_index(&self, sigma: &Node) -> Option<LabelIndex> {
        self.index_of(&Label::Structural(*sigma))
    }

    /// Every node of length `<= max_depth`, length-lex.
    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        Node::all_up_to(self.max_depth)
    }
}
