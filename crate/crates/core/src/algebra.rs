//! Intersection-property checks and maximal-subfamily algorithms over
//! explicit finite families.
//!
//! "Maximal" always means maximal among the members actually listed, with
//! the elements actually listed. For a truncated construction this is the
//! bounded stand-in for maximality in the infinite family.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{FamilyError, ParseError};
use crate::node::Node;
use crate::tree::{LabelIndex, LabeledTree};

/// A finite sequence of finite sets of naturals; repetitions are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteFamily {
    pub members: Vec<BTreeSet<u64>>,
}

impl FiniteFamily {
    pub fn new(members: Vec<BTreeSet<u64>>) -> Self {
        FiniteFamily { members }
    }

    pub fn from_slices(members: &[&[u64]]) -> Self {
        FiniteFamily { members: members.iter().map(|m| m.iter().copied().collect()).collect() }
    }

    /// Parses `{"members": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, FamilyError> {
        serde_json::from_str(text).map_err(|e| FamilyError::Parse(ParseError::new(e.to_string())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The subfamily listed by `indices`, in the given order.
    pub fn restrict<'a>(&self, indices: impl IntoIterator<Item = &'a usize>) -> FiniteFamily {
        FiniteFamily { members: indices.into_iter().map(|&k| self.members[k].clone()).collect() }
    }

    /// Elements common to the listed members; `None` stands for "no constraint"
    /// (the empty subfamily).
    pub fn common<'a>(&self, indices: impl IntoIterator<Item = &'a usize>) -> Option<BTreeSet<u64>> {
        let mut acc: Option<BTreeSet<u64>> = None;
        for &k in indices {
            acc = Some(match acc {
                None => self.members[k].clone(),
                Some(a) => a.intersection(&self.members[k]).copied().collect(),
            });
        }
        acc
    }

    fn ensure_some_nonempty(&self) -> Result<(), FamilyError> {
        if self.members.iter().all(BTreeSet::is_empty) {
            return Err(FamilyError::AllEmpty);
        }
        Ok(())
    }
}

/// Every finite subfamily has nonempty intersection.
///
/// For a finite family it is enough to intersect all members; the empty
/// family has the property vacuously.
pub fn has_fip(family: &FiniteFamily) -> bool {
    let all: Vec<usize> = (0..family.len()).collect();
    family.common(&all).is_none_or(|c| !c.is_empty())
}

/// Every subfamily of at most `n` members has nonempty intersection.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn has_nip(family: &FiniteFamily, n: usize) -> bool {
    assert!(n >= 1, "arity must be at least 1");
    let width = n.min(family.len());
    if width == 0 {
        return true;
    }
    (0..family.len()).combinations(width).all(|c| family.common(&c).is_some_and(|s| !s.is_empty()))
}

/// Scans members in order, keeping each one that still leaves a common element.
pub fn greedy_maximal_fip(family: &FiniteFamily) -> Result<BTreeSet<usize>, FamilyError> {
    family.ensure_some_nonempty()?;
    let mut chosen = BTreeSet::new();
    let mut common: Option<BTreeSet<u64>> = None;
    for (k, member) in family.members.iter().enumerate() {
        let next: BTreeSet<u64> = match &common {
            None => member.clone(),
            Some(c) => c.intersection(member).copied().collect(),
        };
        if !next.is_empty() {
            chosen.insert(k);
            common = Some(next);
        }
    }
    Ok(chosen)
}

/// A forcing condition: a finite partial function `g` whose selected members
/// have a common element. Only the values matter here, so `g` is stored as
/// the list `g(0), g(1), ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Condition {
    pub values: Vec<usize>,
}

impl Condition {
    fn range(&self) -> BTreeSet<usize> {
        self.values.iter().copied().collect()
    }

    /// Whether some extension of this condition puts `n` into the range.
    fn can_force(&self, family: &FiniteFamily, n: usize) -> bool {
        let mut range = self.range();
        range.insert(n);
        has_fip(&family.restrict(&range))
    }
}

/// Builds the descending sequence of conditions that meets, for each member
/// `n` in turn, the dense set "`n` is in the range of `g`, or no extension
/// of `g` can put it there". Returns every condition in the sequence,
/// starting from the empty one.
pub fn forcing_sequence(family: &FiniteFamily) -> Result<Vec<Condition>, FamilyError> {
    family.ensure_some_nonempty()?;
    let mut chain = vec![Condition::default()];
    for n in 0..family.len() {
        let current = chain.last().expect("chain starts nonempty");
        if current.can_force(family, n) {
            let mut next = current.clone();
            next.values.push(n);
            chain.push(next);
        }
    }
    Ok(chain)
}

/// Range of the generic built by [`forcing_sequence`].
pub fn forcing_maximal_fip(family: &FiniteFamily) -> Result<BTreeSet<usize>, FamilyError> {
    let chain = forcing_sequence(family)?;
    Ok(chain.last().map(Condition::range).unwrap_or_default())
}

/// Replaces a family by one whose finite intersection property matches the
/// `n`-intersection property of the original.
///
/// Every index set (scanned length-lex) whose members have the
/// `n`-intersection property receives one fresh element, placed in exactly
/// those members. The scan covers all `2^len - 1` nonempty index sets, so
/// this is only meant for small families.
///
/// # Panics
///
/// Panics if `n < 2`.
pub fn reduce_nip_to_fip(family: &FiniteFamily, n: usize) -> FiniteFamily {
    assert!(n >= 2, "arity must be at least 2");
    let mut members = vec![BTreeSet::new(); family.len()];
    let mut fresh = 0u64;
    for size in 1..=family.len() {
        for subset in (0..family.len()).combinations(size) {
            if has_nip(&family.restrict(&subset), n) {
                for &k in &subset {
                    members[k].insert(fresh);
                }
                fresh += 1;
            }
        }
    }
    FiniteFamily { members }
}

/// Some `σ` with every listed label on a strict initial segment of `σ`.
///
/// Only nodes whose parent lies within the tree's depth bound are
/// considered, since deeper nodes never receive witnesses. The shallowest
/// (then leftmost) such node is returned.
pub fn label_set_on_common_path(tree: &LabeledTree, labels: &BTreeSet<LabelIndex>) -> Option<Node> {
    tree.nodes().find(|node| labels.is_subset(&tree.inclusive_tilde(node))).map(|node| node.child(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> FiniteFamily {
        FiniteFamily::from_slices(&[&[1, 2], &[2, 3], &[3, 1]])
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn footnote_family() {
        assert!(!has_fip(&triangle()));
        assert!(has_nip(&triangle(), 2));
        assert!(!has_nip(&triangle(), 3));
    }

    #[test]
    fn trivial_fip_cases() {
        assert!(has_fip(&FiniteFamily::default()));
        assert!(has_fip(&FiniteFamily::from_slices(&[&[5]])));
        assert!(has_fip(&FiniteFamily::from_slices(&[&[1, 2], &[2, 3]])));
        assert!(!has_nip(&FiniteFamily::from_slices(&[&[1], &[]]), 1));
        assert!(has_nip(&FiniteFamily::default(), 3));
    }

    #[test]
    fn maximalizers_on_examples() {
        assert_eq!(greedy_maximal_fip(&triangle()).unwrap(), set(&[0, 1]));
        assert_eq!(forcing_maximal_fip(&triangle()).unwrap(), set(&[0, 1]));
        let single = FiniteFamily::from_slices(&[&[7]]);
        assert_eq!(greedy_maximal_fip(&single).unwrap(), set(&[0]));
        assert_eq!(forcing_maximal_fip(&single).unwrap(), set(&[0]));
        let disjoint = FiniteFamily::from_slices(&[&[1], &[2, 3], &[4]]);
        assert_eq!(greedy_maximal_fip(&disjoint).unwrap(), set(&[0]));
        assert_eq!(forcing_maximal_fip(&disjoint).unwrap(), set(&[0]));
        let leading_empty = FiniteFamily::from_slices(&[&[], &[4]]);
        assert_eq!(greedy_maximal_fip(&leading_empty).unwrap(), set(&[1]));
    }

    #[test]
    fn all_empty_rejected() {
        let empty = FiniteFamily::from_slices(&[&[], &[]]);
        assert_eq!(greedy_maximal_fip(&empty), Err(FamilyError::AllEmpty));
        assert_eq!(forcing_maximal_fip(&empty), Err(FamilyError::AllEmpty));
        assert_eq!(greedy_maximal_fip(&FiniteFamily::default()), Err(FamilyError::AllEmpty));
    }

    #[test]
    fn forcing_chain_descends() {
        let chain = forcing_sequence(&triangle()).unwrap();
        let values: Vec<Vec<usize>> = chain.into_iter().map(|c| c.values).collect();
        assert_eq!(values, [vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn reduction_of_triangle() {
        let reduced = reduce_nip_to_fip(&triangle(), 2);
        assert_eq!(reduced.len(), 3);
        // 3 singletons, 3 pairs and the triple are all 2-intersecting: 7 fresh elements.
        assert_eq!(reduced.members[0], BTreeSet::from([0, 3, 4, 6]));
        assert_eq!(reduced.members[1], BTreeSet::from([1, 3, 5, 6]));
        assert_eq!(reduced.members[2], BTreeSet::from([2, 4, 5, 6]));
        assert!(has_fip(&reduced));
    }

    #[test]
    fn reduction_of_singleton() {
        let reduced = reduce_nip_to_fip(&FiniteFamily::from_slices(&[&[5]]), 2);
        assert_eq!(reduced.members, vec![BTreeSet::from([0])]);
    }

    #[test]
    fn family_json() {
        let fam = FiniteFamily::from_json(r#"{"members": [[1,2],[2,3],[3,1]]}"#).unwrap();
        assert_eq!(fam, triangle());
        assert_eq!(FiniteFamily::from_json(&fam.to_json()).unwrap(), fam);
        assert!(FiniteFamily::from_json(r#"{"members": [[-1]]}"#).is_err());
    }

    fn arb_family(max_members: usize, universe: u64) -> impl Strategy<Value = FiniteFamily> {
        proptest::collection::vec(proptest::collection::btree_set(0..universe, 0..universe as usize), 0..=max_members)
            .prop_map(FiniteFamily::new)
    }

    /// Brute force: every nonempty subfamily has a common element.
    fn fip_by_subsets(f: &FiniteFamily) -> bool {
        (1..=f.len()).all(|size| (0..f.len()).combinations(size).all(|c| f.common(&c).is_some_and(|s| !s.is_empty())))
    }

    proptest! {
        #[test]
        fn fip_matches_subset_oracle(f in arb_family(5, 6)) {
            prop_assert_eq!(has_fip(&f), fip_by_subsets(&f));
        }

        #[test]
        fn nip_is_monotone_in_arity(f in arb_family(5, 6), n in 1usize..5) {
            if has_nip(&f, n + 1) {
                prop_assert!(has_nip(&f, n));
            }
        }

        #[test]
        fn fip_is_full_arity_nip(f in arb_family(5, 6)) {
            prop_assert_eq!(has_fip(&f), has_nip(&f, f.len().max(1)));
        }
    }
}
