//! Bounded versions of the oracle functionals.
//!
//! `phi` reads a path off the structural labels of an oracle; the `psi`
//! family decodes `K` from coding labels. Real functionals may run forever;
//! here every search has an explicit budget and reports `Diverged` when it
//! runs out.

use std::collections::BTreeMap;

use crate::label::Label;
use crate::node::Node;
use crate::oracle::OracleSet;
use crate::scenario::{EnumerationEvent, Scenario};
use crate::tree::{LabeledTree, Stage};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outcome<T> {
    Converged(T),
    /// Nothing found within the stated budget.
    Diverged {
        budget: usize,
    },
    /// The oracle cannot be the range of an FIP function.
    IllFormedOracle(String),
}

impl<T> Outcome<T> {
    pub fn converged(&self) -> Option<&T> {
        match self {
            Outcome::Converged(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self, Outcome::Diverged { .. })
    }
}

/// Which decoding functional to run: `Ψ_i` (FIP mode) or `Ψ_{i,ν}` (2IP mode).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    Fip { strategy: usize },
    Priority { strategy: usize, nu: Node },
}

impl Selector {
    /// The coding label whose presence means "`j` is not in `K`".
    pub fn label(&self, code: usize) -> Label {
        match *self {
            Selector::Fip { strategy } => Label::CodingFip { strategy, code },
            Selector::Priority { strategy, nu } => Label::CodingPriority { strategy, code, nu },
        }
    }

    pub fn strategy(&self) -> usize {
        match *self {
            Selector::Fip { strategy } | Selector::Priority { strategy, .. } => strategy,
        }
    }
}

/// First `n_bits` bits of the path named by the oracle's structural labels.
///
/// With a well-formed oracle the structural labels lie on one chain, so at
/// most one of them has the requested length. The budget reported on
/// divergence is the number of oracle elements examined.
pub fn phi(tree: &LabeledTree, oracle: &OracleSet, n_bits: usize) -> Outcome<Node> {
    let structural: Vec<Node> =
        oracle.indices().iter().filter_map(|&k| tree.label(k).and_then(|l| l.structural_node())).collect();
    for (a, x) in structural.iter().enumerate() {
        if let Some(y) = structural[a + 1..].iter().find(|y| !x.is_comparable(y)) {
            return Outcome::IllFormedOracle(format!("A[{x}] and A[{y}] sit on incomparable nodes"));
        }
    }
    match structural.into_iter().find(|s| s.len() == n_bits) {
        Some(sigma) => Outcome::Converged(sigma),
        None => Outcome::Diverged { budget: oracle.len() },
    }
}

/// The two-clause search behind `Ψ`.
///
/// For `s = 0, 1, ..., budget`: output 1 if `j ∈ K_s`; otherwise output 0 if
/// the selector's label for `j` names an oracle element that is visible at
/// `s` (its label has appeared by stage `s`, and when the oracle carries an
/// enumeration, it has been listed at a position `<= s`). Clause 1 wins ties.
pub fn psi(
    tree: &LabeledTree,
    scenario: &Scenario,
    selector: Selector,
    oracle: &OracleSet,
    code: usize,
    budget: Stage,
) -> Outcome<u8> {
    let target = tree.index_of(&selector.label(code)).filter(|&k| oracle.contains(k));
    let visible_from = target.map(|k| {
        let listed = oracle.first_positions().get(&k).copied().unwrap_or(0);
        tree.first_stage(k).unwrap_or(0).max(listed)
    });
    let halts_at = scenario.k_entry(code);
    for s in 0..=budget {
        if halts_at.is_some_and(|t| t <= s) {
            return Outcome::Converged(1);
        }
        if visible_from.is_some_and(|t| t <= s) {
            return Outcome::Converged(0);
        }
    }
    Outcome::Diverged { budget }
}

/// `Ψ_i^S(j)` for the FIP construction.
pub fn psi_fip(
    tree: &LabeledTree,
    scenario: &Scenario,
    strategy: usize,
    oracle: &OracleSet,
    code: usize,
    budget: Stage,
) -> Outcome<u8> {
    psi(tree, scenario, Selector::Fip { strategy }, oracle, code, budget)
}

/// `Ψ_{i,ν}^S(j)` for the priority construction.
pub fn psi_2ip(
    tree: &LabeledTree,
    scenario: &Scenario,
    strategy: usize,
    nu: Node,
    oracle: &OracleSet,
    code: usize,
    budget: Stage,
) -> Outcome<u8> {
    psi(tree, scenario, Selector::Priority { strategy, nu }, oracle, code, budget)
}

/// Runs `Ψ` at every `j < jMax`.
pub fn decode_k(
    tree: &LabeledTree,
    scenario: &Scenario,
    selector: Selector,
    oracle: &OracleSet,
    budget: Stage,
) -> BTreeMap<usize, Outcome<u8>> {
    (0..scenario.j_max).map(|j| (j, psi(tree, scenario, selector, oracle, j, budget))).collect()
}

/// How a path prefix stands against one scripted c.e. set of strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Genericity {
    /// An enumerated node is an initial segment of the path.
    Meets(Node),
    /// This initial segment of the path has no enumerated extension, and the
    /// script is known to be complete.
    Avoids(Node),
    Undecided,
}

/// Classifies `path` against the nodes a script enumerates.
///
/// `exhausted` says the script lists everything the set will ever contain;
/// without it, avoidance cannot be certified. Meeting takes precedence, and
/// the shortest witness prefix is reported in either case.
pub fn meets_or_avoids(path: &Node, events: &[EnumerationEvent], exhausted: bool) -> Genericity {
    if let Some(tau) = path.prefixes().find(|tau| events.iter().any(|e| e.node == *tau)) {
        return Genericity::Meets(tau);
    }
    if exhausted {
        if let Some(tau) = path.prefixes().find(|tau| !events.iter().any(|e| tau.is_prefix_of(&e.node))) {
            return Genericity::Avoids(tau);
        }
    }
    Genericity::Undecided
}
