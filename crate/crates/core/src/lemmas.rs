//! Exhaustive subset checks of the path characterizations on a built universe.
//!
//! Each checker compares a family-side property (computed from the witness
//! sets alone) with a tree-side property (computed from label placements
//! alone) on every label subset up to a size bound.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::bits::Bits;
use crate::family::{Provenance, SetFamily};
use crate::node::Node;
use crate::tree::{LabelIndex, LabeledTree};

/// Which family-side property a check compares against the common-path test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// All members share a witness.
    CommonIntersection,
    /// Every two members share a witness.
    PairwiseIntersection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub labels: Vec<LabelIndex>,
    pub family_side: bool,
    pub common_path: Option<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaReport {
    pub property: Property,
    pub min_size: usize,
    pub max_size: usize,
    pub labels: usize,
    /// Groups of labels with identical shared witnesses and nodes; subsets
    /// are enumerated over these, weighted by how many label subsets each
    /// combination stands for.
    pub classes: usize,
    /// Subsets in the size range that were evaluated directly.
    pub checked: u64,
    /// Subsets in the size range settled without evaluation (both sides false
    /// on a subset, hence on every superset).
    pub implied: u64,
    /// Evaluated subsets on which both sides held.
    pub both_true: u64,
    pub counterexample_count: u64,
    /// The first few counterexamples, in search order.
    pub counterexamples: Vec<Counterexample>,
}

impl LemmaReport {
    pub fn total(&self) -> u64 {
        self.checked + self.implied
    }

    pub fn holds(&self) -> bool {
        self.counterexample_count == 0
    }
}

const KEPT_COUNTEREXAMPLES: usize = 16;

/// Labels that no subset check can tell apart: same shared witnesses and
/// same nodes. Private witnesses are left out, since they only ever matter
/// for single-label subsets.
struct Class {
    shared: Bits,
    nodes: Bits,
    labels: Vec<LabelIndex>,
}

struct Universe {
    classes: Vec<Class>,
    node_list: Vec<Node>,
    witness_width: usize,
}

impl Universe {
    fn new(tree: &LabeledTree, family: &SetFamily) -> Self {
        // Shared witnesses with the same members are merged into one column.
        let mut members: HashMap<u64, Vec<LabelIndex>> = HashMap::new();
        for (k, set) in family.sets().iter().enumerate() {
            for &n in set {
                if matches!(family.provenance(n), Some(Provenance::Shared { .. })) {
                    members.entry(n).or_default().push(k);
                }
            }
        }
        let mut profiles: HashMap<Vec<LabelIndex>, usize> = HashMap::new();
        let mut column: HashMap<u64, usize> = HashMap::new();
        for (n, labels) in members {
            let next = profiles.len();
            column.insert(n, *profiles.entry(labels).or_insert(next));
        }
        let width = profiles.len();
        let node_list: Vec<Node> = tree.nodes().collect();
        let mut node_bits = vec![Bits::zeros(node_list.len()); family.len()];
        for (ord, node) in node_list.iter().enumerate() {
            for k in tree.inclusive_tilde(node) {
                if k < family.len() {
                    node_bits[k].insert(ord);
                }
            }
        }
        let mut classes: Vec<Class> = Vec::new();
        let mut seen: HashMap<(Bits, Bits), usize> = HashMap::new();
        for (k, nodes) in node_bits.into_iter().enumerate() {
            let mut witnesses = Bits::zeros(width);
            for n in family.set(k) {
                if let Some(&c) = column.get(n) {
                    witnesses.insert(c);
                }
            }
            let key = (witnesses, nodes);
            match seen.get(&key) {
                Some(&c) => classes[c].labels.push(k),
                None => {
                    seen.insert(key.clone(), classes.len());
                    classes.push(Class { shared: key.0, nodes: key.1, labels: vec![k] });
                }
            }
        }
        Universe { classes, node_list, witness_width: width }
    }
}

/// One level of the search: a class in the support and the running
/// intersections through it.
struct Frame {
    class: usize,
    shared: Bits,
    nodes: Bits,
    /// Every two distinct classes so far share a witness.
    cross_pairs: bool,
}

struct Search<'a> {
    universe: &'a Universe,
    property: Property,
    min_size: usize,
    max_size: usize,
    prune: bool,
    frames: Vec<Frame>,
    report: LemmaReport,
}

impl Search<'_> {
    fn extend_from(&mut self, start: usize) {
        for c in start..self.universe.classes.len() {
            let class = &self.universe.classes[c];
            let frame = match self.frames.last() {
                None => Frame { class: c, shared: class.shared.clone(), nodes: class.nodes.clone(), cross_pairs: true },
                Some(top) => {
                    let mut shared = Bits::zeros(self.universe.witness_width);
                    top.shared.and_into(&class.shared, &mut shared);
                    let mut nodes = Bits::zeros(self.universe.node_list.len());
                    top.nodes.and_into(&class.nodes, &mut nodes);
                    let cross_pairs = top.cross_pairs
                        && self.frames.iter().all(|f| self.universe.classes[f.class].shared.intersects(&class.shared));
                    Frame { class: c, shared, nodes, cross_pairs }
                }
            };
            self.frames.push(frame);
            self.evaluate_support();
            let support = self.frames.len();
            if support < self.max_size {
                let top = self.frames.last().expect("just pushed");
                let family_false = match self.property {
                    Property::CommonIntersection => top.shared.is_empty(),
                    Property::PairwiseIntersection => !top.cross_pairs,
                };
                if self.prune && support >= 2 && family_false && top.nodes.is_empty() {
                    self.report.implied += self.extensions(c);
                } else {
                    self.extend_from(c + 1);
                }
            }
            self.frames.pop();
        }
    }

    /// Every label subset whose set of classes is exactly the current support.
    fn evaluate_support(&mut self) {
        let top = self.frames.last().expect("support is nonempty");
        let path_side = top.nodes.first();
        let (shared_common, cross_pairs) = (!top.shared.is_empty(), top.cross_pairs);
        let sizes: Vec<usize> = self.frames.iter().map(|f| self.universe.classes[f.class].labels.len()).collect();
        for counts in compositions(&sizes, self.max_size) {
            let size: usize = counts.iter().sum();
            if size < self.min_size {
                continue;
            }
            let family_side = size == 1
                || match self.property {
                    Property::CommonIntersection => shared_common,
                    Property::PairwiseIntersection => {
                        cross_pairs
                            && self
                                .frames
                                .iter()
                                .zip(&counts)
                                .all(|(f, &a)| a < 2 || !self.universe.classes[f.class].shared.is_empty())
                    }
                };
            let weight: u64 = sizes.iter().zip(&counts).map(|(&m, &a)| binomial(m, a)).product();
            self.report.checked += weight;
            if family_side && path_side.is_some() {
                self.report.both_true += weight;
            }
            if family_side != path_side.is_some() {
                self.report.counterexample_count += weight;
                if self.report.counterexamples.len() < KEPT_COUNTEREXAMPLES {
                    let mut labels: Vec<LabelIndex> = self
                        .frames
                        .iter()
                        .zip(&counts)
                        .flat_map(|(f, &a)| self.universe.classes[f.class].labels[..a].iter().copied())
                        .collect();
                    labels.sort_unstable();
                    self.report.counterexamples.push(Counterexample {
                        labels,
                        family_side,
                        common_path: path_side.map(|ord| self.universe.node_list[ord].child(false)),
                    });
                }
            }
        }
    }

    /// Label subsets in the size range that extend the current support by
    /// classes after `last`.
    fn extensions(&self, last: usize) -> u64 {
        let sizes: Vec<usize> = self.frames.iter().map(|f| self.universe.classes[f.class].labels.len()).collect();
        let free: usize = self.universe.classes[last + 1..].iter().map(|c| c.labels.len()).sum();
        compositions(&sizes, self.max_size)
            .map(|counts| {
                let size: usize = counts.iter().sum();
                let weight: u64 = sizes.iter().zip(&counts).map(|(&m, &a)| binomial(m, a)).product();
                weight * supersets(free, size, self.min_size, self.max_size)
            })
            .sum()
    }
}

/// Every way to take `1..=sizes[c]` labels from each class with at most
/// `max` in total.
fn compositions(sizes: &[usize], max: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(sizes.len());
    fn go(sizes: &[usize], budget: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&m, rest)) = sizes.split_first() else {
            out.push(current.clone());
            return;
        };
        let room = budget.saturating_sub(rest.len());
        for a in 1..=m.min(room) {
            current.push(a);
            go(rest, budget - a, current, out);
            current.pop();
        }
    }
    if sizes.len() <= max {
        go(sizes, max, &mut current, &mut out);
    }
    out.into_iter()
}

/// Number of ways to add `t >= 1` of `free` remaining labels to a subset of
/// size `size` with `min <= size + t <= max`.
fn supersets(free: usize, size: usize, min: usize, max: usize) -> u64 {
    (1..=max.saturating_sub(size)).filter(|t| size + t >= min).map(|t| binomial(free, t)).sum()
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for r in 0..k {
        acc = acc * (n - r) as u64 / (r + 1) as u64;
    }
    acc
}

fn search(
    tree: &LabeledTree,
    family: &SetFamily,
    property: Property,
    min_size: usize,
    max_size: usize,
    prune: bool,
) -> LemmaReport {
    assert!(min_size >= 1 && min_size <= max_size, "size range must be nonempty and start at 1 or more");
    let universe = Universe::new(tree, family);
    let report = LemmaReport {
        property,
        min_size,
        max_size,
        labels: family.len(),
        classes: universe.classes.len(),
        checked: 0,
        implied: 0,
        both_true: 0,
        counterexample_count: 0,
        counterexamples: Vec::new(),
    };
    let mut s = Search { universe: &universe, property, min_size, max_size, prune, frames: Vec::new(), report };
    s.extend_from(0);
    s.report
}

/// Common intersection of the sets versus "all labels on one path", for
/// every label subset of size `1..=max_size`.
pub fn check_finite_paths(tree: &LabeledTree, family: &SetFamily, max_size: usize, prune: bool) -> LemmaReport {
    search(tree, family, Property::CommonIntersection, 1, max_size, prune)
}

/// Pairwise intersection versus "all labels on one path", for every label
/// subset of size `2..=max_size`.
pub fn check_pairwise_paths(tree: &LabeledTree, family: &SetFamily, max_size: usize, prune: bool) -> LemmaReport {
    search(tree, family, Property::PairwiseIntersection, 2, max_size, prune)
}

/// The maximal subfamilies with a common element, restricted to `universe`.
///
/// For a finite family these are exactly the sets "all members containing
/// `n`" that are maximal under inclusion, so they can be read off the
/// witnesses directly.
pub fn maximal_intersecting(family: &SetFamily, universe: &BTreeSet<LabelIndex>) -> Vec<BTreeSet<LabelIndex>> {
    let mut profiles: BTreeSet<BTreeSet<LabelIndex>> = BTreeSet::new();
    let mut by_witness: HashMap<u64, BTreeSet<LabelIndex>> = HashMap::new();
    for &k in universe {
        for &n in family.set(k) {
            by_witness.entry(n).or_default().insert(k);
        }
    }
    profiles.extend(by_witness.into_values());
    profiles.iter().filter(|p| !profiles.iter().any(|q| q.len() > p.len() && p.is_subset(q))).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::label_set_on_common_path;
    use crate::engine::{run_2ip, run_fip};
    use crate::scenario::Scenario;
    use itertools::Itertools;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    fn busy() -> Scenario {
        let mut sc = Scenario::quiet(7, 4, 2, 2);
        sc.enumerate(0, 1, n("01")).enumerate(0, 3, n("0110")).enumerate(1, 2, n("1")).enumerate(1, 4, n("001"));
        sc.halt(3, 1);
        sc
    }

    #[test]
    fn finite_paths_on_small_runs() {
        for c in [run_fip(&busy()).unwrap(), run_2ip(&busy()).unwrap()] {
            let r = check_finite_paths(&c.tree, &c.family, 3, false);
            assert!(r.holds(), "{:?}", r.counterexamples);
            let labels = c.family.len();
            assert_eq!(r.checked, labels as u64 + binomial(labels, 2) + binomial(labels, 3));
        }
    }

    #[test]
    fn pairwise_on_priority_run() {
        let c = run_2ip(&busy()).unwrap();
        let r = check_pairwise_paths(&c.tree, &c.family, 3, false);
        assert!(r.holds(), "{:?}", r.counterexamples);
    }

    #[test]
    fn pruning_only_skips_agreeing_subsets() {
        let c = run_fip(&busy()).unwrap();
        let full = check_finite_paths(&c.tree, &c.family, 4, false);
        let pruned = check_finite_paths(&c.tree, &c.family, 4, true);
        assert_eq!(full.total(), pruned.total());
        assert!(pruned.implied > 0);
        assert_eq!(full.both_true, pruned.both_true);
        assert_eq!(full.counterexample_count, pruned.counterexample_count);
    }

    /// Plain per-subset evaluation through the public set and tree APIs.
    fn brute_force(c: &crate::engine::Construction, property: Property, min: usize, max: usize) -> (u64, u64, u64) {
        let (mut checked, mut both, mut bad) = (0, 0, 0);
        for size in min..=max {
            for subset in (0..c.family.len()).combinations(size) {
                let labels: BTreeSet<usize> = subset.iter().copied().collect();
                let family_side = match property {
                    Property::CommonIntersection => !c.family.common_witnesses(&labels).is_empty(),
                    Property::PairwiseIntersection => {
                        subset.iter().tuple_combinations().all(|(&x, &y)| !c.family.set(x).is_disjoint(c.family.set(y)))
                    }
                };
                let path_side = label_set_on_common_path(&c.tree, &labels).is_some();
                checked += 1;
                both += u64::from(family_side && path_side);
                bad += u64::from(family_side != path_side);
            }
        }
        (checked, both, bad)
    }

    #[test]
    fn class_search_matches_brute_force() {
        for c in [run_fip(&busy()).unwrap(), run_2ip(&busy()).unwrap()] {
            let r = check_finite_paths(&c.tree, &c.family, 3, false);
            assert!(r.classes < r.labels);
            assert_eq!((r.checked, r.both_true, r.counterexample_count), brute_force(&c, r.property, 1, 3));
        }
        let c = run_2ip(&busy()).unwrap();
        let r = check_pairwise_paths(&c.tree, &c.family, 3, false);
        assert_eq!((r.checked, r.both_true, r.counterexample_count), brute_force(&c, r.property, 2, 3));
    }

    #[test]
    fn compositions_respect_bounds() {
        let all: Vec<Vec<usize>> = compositions(&[2, 3], 4).collect();
        assert_eq!(all, vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 1], vec![2, 2]]);
        assert_eq!(compositions(&[1, 1, 1], 2).count(), 0);
    }

    #[test]
    fn maximal_families_on_quiet_tree_are_leaf_chains() {
        let c = run_fip(&Scenario::quiet(4, 3, 1, 1)).unwrap();
        let universe: BTreeSet<usize> = (0..c.family.len()).collect();
        let maximal = maximal_intersecting(&c.family, &universe);
        assert_eq!(maximal.len(), 8);
        for m in maximal {
            let nodes: Vec<Node> = m.iter().filter_map(|&k| c.tree.label(k).unwrap().structural_node()).collect();
            assert_eq!(nodes.len(), 4);
            assert!(nodes.iter().tuple_combinations().all(|(x, y)| x.is_comparable(y)));
        }
    }

    #[test]
    fn superset_counting() {
        assert_eq!(supersets(3, 1, 1, 4), 3 + 3 + 1);
        assert_eq!(supersets(5, 1, 2, 2), 5);
        assert_eq!(supersets(0, 2, 2, 4), 0);
    }
}
