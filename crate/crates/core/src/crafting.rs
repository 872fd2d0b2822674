//! Oracle recipes, cofinality and maximality reports, and crafted scenarios
//! realizing the "neither meets nor avoids" situation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{CraftError, OracleError};
use crate::family::{SetFamily, Witness};
use crate::functionals::Selector;
use crate::label::Label;
use crate::node::Node;
use crate::oracle::OracleSet;
use crate::scenario::{Scenario, MAX_STAGE};
use crate::tree::{LabelIndex, LabeledTree, Mode, Stage};

/// Attached to every maximality report.
pub const BOUNDED_UNIVERSE_CAVEAT: &str = "maximal only among the sets and witnesses this bounded run produced";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleRecipe {
    /// The labels on initial segments of `Y_d`, `Y_d` included.
    PathOnly(Node),
    /// `PathOnly` plus the selector's coding labels for every `j < jMax` outside the final `K`.
    PathPlusCoding(Node, Selector),
    Explicit(BTreeSet<LabelIndex>),
}

pub fn build_oracle(tree: &LabeledTree, scenario: &Scenario, recipe: &OracleRecipe) -> Result<OracleSet, OracleError> {
    let path_part = |y: &Node| -> Result<BTreeSet<LabelIndex>, OracleError> {
        let set = tree.path_tilde(y);
        match tree.structural_index(y) {
            Some(_) => Ok(set),
            None => Err(OracleError::MissingLabel(Label::Structural(*y))),
        }
    };
    match recipe {
        OracleRecipe::PathOnly(y) => Ok(OracleSet::new(path_part(y)?)),
        OracleRecipe::PathPlusCoding(y, selector) => {
            let mut set = path_part(y)?;
            let k = scenario.final_k();
            for j in (0..scenario.j_max).filter(|j| !k.contains(j)) {
                let label = selector.label(j);
                set.insert(tree.index_of(&label).ok_or(OracleError::MissingLabel(label))?);
            }
            Ok(OracleSet::new(set))
        }
        OracleRecipe::Explicit(indices) => {
            if let Some(&bad) = indices.iter().find(|&&k| k >= tree.len()) {
                return Err(OracleError::UnknownIndex(bad));
            }
            Ok(OracleSet::new(indices.iter().copied()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CofinalityReport {
    /// One entry per prefix `σ` of `Y_d`, shortest first.
    pub prefixes: Vec<(Node, bool)>,
}

impl CofinalityReport {
    pub fn all(&self) -> bool {
        self.prefixes.iter().all(|&(_, ok)| ok)
    }
}

/// For each prefix `σ ⪯ Y_d`: does some `τ ⪰ σ` in the bounded tree have the
/// label on a strict initial segment?
///
/// Nodes of length `maxDepth + 1` count as `τ`, since their parents receive
/// witnesses; deeper ones never matter.
pub fn is_cofinal_along(tree: &LabeledTree, k: LabelIndex, path: &Node) -> CofinalityReport {
    let homes = tree.locations(k);
    let prefixes = path
        .prefixes()
        .map(|sigma| {
            let ok = homes.iter().any(|rho| rho.len() <= tree.max_depth() && sigma.is_comparable(rho));
            (sigma, ok)
        })
        .collect();
    CofinalityReport { prefixes }
}

/// The candidate sets a maximality check ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub members: BTreeSet<LabelIndex>,
    pub truncated_below: Option<usize>,
}

impl Universe {
    pub fn full(tree: &LabeledTree) -> Self {
        Universe { members: (0..tree.len()).collect(), truncated_below: None }
    }

    /// Drops every `A_τ` with `|τ| > depth`.
    ///
    /// A path known only up to `Y_d` says nothing about structural labels
    /// below depth `d`; leaving them in makes every `Y_d`-based oracle
    /// trivially extendable by the `A` labels on its own continuation.
    pub fn truncated(tree: &LabeledTree, depth: usize) -> Self {
        let members = (0..tree.len())
            .filter(|&k| tree.label(k).and_then(|l| l.structural_node()).is_none_or(|s| s.len() <= depth))
            .collect();
        Universe { members, truncated_below: Some(depth) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Blocker {
    pub candidate: LabelIndex,
    /// Oracle members that together with the candidate have empty
    /// intersection; no member can be dropped from this list.
    pub subfamily: Vec<LabelIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MaximalityReport {
    pub has_fip: bool,
    pub common_witness: Option<Witness>,
    pub blockers: Vec<Blocker>,
    /// Candidates whose addition keeps a common witness.
    pub addable: Vec<LabelIndex>,
    pub outside_universe: Vec<LabelIndex>,
    pub universe_size: usize,
    pub truncated_below: Option<usize>,
    pub caveat: &'static str,
}

impl MaximalityReport {
    pub fn is_maximal(&self) -> bool {
        self.has_fip && self.addable.is_empty()
    }
}

pub fn check_maximal_within_universe(family: &SetFamily, oracle: &OracleSet, universe: &Universe) -> MaximalityReport {
    let common = family.common_witnesses(oracle.indices());
    let outside_universe = oracle.indices().iter().copied().filter(|k| !universe.members.contains(k)).collect();
    let mut blockers = Vec::new();
    let mut addable = Vec::new();
    for &candidate in universe.members.iter().filter(|k| !oracle.contains(**k)) {
        let rest: BTreeSet<Witness> = common.intersection(family.set(candidate)).copied().collect();
        if rest.is_empty() {
            blockers.push(Blocker { candidate, subfamily: minimal_blocker(family, oracle, candidate) });
        } else {
            addable.push(candidate);
        }
    }
    MaximalityReport {
        has_fip: !common.is_empty(),
        common_witness: common.first().copied(),
        blockers,
        addable,
        outside_universe,
        universe_size: universe.members.len(),
        truncated_below: universe.truncated_below,
        caveat: BOUNDED_UNIVERSE_CAVEAT,
    }
}

/// Shrinks the oracle to a subfamily still disjoint from `candidate`'s set
/// by dropping members one at a time.
fn minimal_blocker(family: &SetFamily, oracle: &OracleSet, candidate: LabelIndex) -> Vec<LabelIndex> {
    let mut kept: BTreeSet<LabelIndex> = oracle.indices().clone();
    let empty_with = |set: &BTreeSet<LabelIndex>| {
        let mut s = set.clone();
        s.insert(candidate);
        family.common_witnesses(&s).is_empty()
    };
    for k in oracle.indices() {
        kept.remove(k);
        if !empty_with(&kept) {
            kept.insert(*k);
        }
    }
    kept.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CofinalRow {
    pub label: LabelIndex,
    /// `Ỹ_d` plus this label still has a common witness.
    pub preserves_fip: bool,
    pub cofinal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CofinalCheck {
    pub path: Node,
    pub rows: Vec<CofinalRow>,
}

impl CofinalCheck {
    pub fn mismatches(&self) -> impl Iterator<Item = &CofinalRow> {
        self.rows.iter().filter(|r| r.preserves_fip != r.cofinal)
    }
}

/// For every coding label outside `Ỹ_d`: does adding it to `Ỹ_d` keep a
/// common witness, and is it cofinal along `Y_d`? The two answers should agree.
pub fn check_cofinal_characterization(tree: &LabeledTree, family: &SetFamily, path: &Node) -> CofinalCheck {
    let base = tree.path_tilde(path);
    let rows = (0..tree.len())
        .filter(|k| !base.contains(k) && tree.label(*k).is_some_and(|l| l.is_coding()))
        .map(|k| {
            let mut with = base.clone();
            with.insert(k);
            CofinalRow {
                label: k,
                preserves_fip: !family.common_witnesses(&with).is_empty(),
                cofinal: is_cofinal_along(tree, k, path).all(),
            }
        })
        .collect();
    CofinalCheck { path: *path, rows }
}

/// Knobs for [`craft_lemma_main_scenario`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CraftParams {
    pub max_depth: usize,
    /// `Y_d` has length `max_depth - margin`.
    pub margin: usize,
    pub i_max: usize,
    pub target: usize,
    pub j_max: usize,
    pub k: BTreeSet<usize>,
    /// The full-depth path; its prefix of length `max_depth - margin` is `Y_d`.
    pub path: Node,
    /// Every other strategy enumerates the off-path siblings at levels
    /// `0..other_actions`.
    pub other_actions: usize,
    /// Priority mode: the target acts once before the others, so its first
    /// batch is injured.
    pub early_injury: bool,
}

impl CraftParams {
    /// Single strategy, margin 2, path `0101...`.
    pub fn new(max_depth: usize, j_max: usize, k: impl IntoIterator<Item = usize>) -> Self {
        let bits: Vec<bool> = (0..max_depth).map(|b| b % 2 == 1).collect();
        CraftParams {
            max_depth,
            margin: 2,
            i_max: 1,
            target: 0,
            j_max,
            k: k.into_iter().collect(),
            path: Node::from_bits(&bits),
            other_actions: 0,
            early_injury: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CraftedScenario {
    pub scenario: Scenario,
    pub mode: Mode,
    /// `Y_d`.
    pub path: Node,
    /// Decoding functional for the target strategy; `None` without strategies.
    pub selector: Option<Selector>,
}

/// Scripts a run in which the target `W_{i0}` enumerates the off-path
/// sibling of every prefix of the path (so the path neither meets nor avoids
/// it), while `K` receives the requested codes between the shallow and the
/// deep part of that enumeration.
///
/// Timeline, after waiting until every strategy may act:
/// an optional early target action (priority mode), the other strategies'
/// off-path actions, the target's shallow siblings (levels `< d`), the `K`
/// events, then the deep siblings (levels `d..maxDepth`).
pub fn craft_lemma_main_scenario(mode: Mode, params: &CraftParams) -> Result<CraftedScenario, CraftError> {
    let infeasible = |m: String| Err(CraftError::ParamsInfeasible(m));
    let p = &params;
    if p.path.len() != p.max_depth {
        return infeasible(format!("path {} does not have length {}", p.path, p.max_depth));
    }
    if p.margin == 0 || p.margin >= p.max_depth {
        return infeasible(format!("margin {} leaves no room inside depth {}", p.margin, p.max_depth));
    }
    let d = p.max_depth - p.margin;
    if let Some(j) = p.k.iter().find(|&&j| j >= p.j_max) {
        return infeasible(format!("K member {j} is outside jMax {}", p.j_max));
    }
    if p.other_actions >= d {
        return infeasible(format!("{} off-path actions do not fit above depth {d}", p.other_actions));
    }
    if p.i_max > 0 && p.target >= p.i_max {
        return infeasible(format!("target strategy {} is outside iMax {}", p.target, p.i_max));
    }
    let sibling = |level: usize| -> Node {
        let up = p.path.prefix(level);
        up.child(!p.path.bit(level))
    };

    let mut sc = Scenario::quiet(0, p.max_depth, p.j_max, p.i_max);
    let mut t: Stage = p.i_max.max(1);
    let target = p.target;
    if p.i_max > 0 {
        if mode == Mode::TwoIp && p.early_injury {
            sc.enumerate(target, t, sibling(p.other_actions));
            t += 1;
        }
        if p.other_actions > 0 {
            for i in (0..p.i_max).filter(|&i| i != target) {
                for level in 0..p.other_actions {
                    sc.enumerate(i, t, sibling(level));
                }
            }
            t += 1;
        }
        for level in 0..d {
            sc.enumerate(target, t, sibling(level));
            t += 1;
        }
    }
    for &j in &p.k {
        sc.halt(t, j);
    }
    t += 1;
    if p.i_max > 0 {
        for level in d..p.max_depth {
            sc.enumerate(target, t, sibling(level));
            t += 1;
        }
    }
    sc.max_stage = t.max(p.max_depth + 1);
    if sc.max_stage > MAX_STAGE {
        return infeasible(format!("the schedule needs {} stages, more than {MAX_STAGE}", sc.max_stage));
    }
    sc.validate_for(mode).map_err(|e| CraftError::ParamsInfeasible(e.to_string()))?;

    let selector = (p.i_max > 0).then(|| match mode {
        Mode::Fip => Selector::Fip { strategy: target },
        Mode::TwoIp => {
            let nu = if target > 0 { p.path.prefix(p.other_actions) } else { Node::ROOT };
            Selector::Priority { strategy: target, nu }
        }
    });
    Ok(CraftedScenario { scenario: sc, mode, path: p.path.prefix(d), selector })
}

/// A scenario whose `W_0` enumerates every node of length `max_depth`, so
/// its coding labels are dense in the tree. Leaves in the `1` half come
/// first, then `K` receives its codes, then the `0` half. `W_1` only acts
/// inside the `1` subtree. `Y_d` is the all-zero path of length
/// `max_depth - 2`, so `W_0`'s labels for codes outside `K` are cofinal
/// along it and no other coding label is.
pub fn dense_scenario(max_depth: usize, j_max: usize, k: &BTreeSet<usize>) -> (Scenario, Node) {
    let mut sc = Scenario::quiet(0, max_depth, j_max, 2);
    let leaves: Vec<Node> = Node::all_up_to(max_depth).filter(|n| n.len() == max_depth).collect();
    let (zeros, ones): (Vec<Node>, Vec<Node>) = leaves.into_iter().partition(|n| n.is_root() || !n.bit(0));
    let mut t = 2;
    for leaf in ones {
        sc.enumerate(0, t, leaf);
    }
    t += 1;
    for &j in k {
        sc.halt(t, j);
    }
    t += 1;
    for leaf in zeros {
        sc.enumerate(0, t, leaf);
    }
    t += 1;
    let mut side = Node::ROOT.child(true);
    while side.len() <= max_depth {
        sc.enumerate(1, t, side);
        side = side.child(side.len().is_multiple_of(2));
        t += 1;
    }
    sc.max_stage = t.max(max_depth + 1);
    (sc, Node::from_bits(&vec![false; max_depth.saturating_sub(2)]))
}
