//! The constructed sets `X_k`, as explicit finite witness sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::node::Node;
use crate::tree::{LabelIndex, Stage};

pub type Witness = u64;

/// Where a witness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Odd witness added at `stage` to every set labeled on an initial segment of `node`.
    Shared { stage: Stage, node: Node },
    /// The even witness `2k` owned by `X_k` alone.
    Private { label: LabelIndex },
}

/// The reals `X_k`, truncated to the witnesses produced by a bounded run.
///
/// Odd numbers are shared witnesses, drawn from one counter in
/// (stage, node length-lex) order. Every set additionally owns the even
/// number `2k`, so distinct labels always give distinct sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetFamily {
    sets: Vec<BTreeSet<Witness>>,
    provenance: BTreeMap<Witness, Provenance>,
    next_odd: Witness,
}

impl SetFamily {
    pub fn new() -> Self {
        SetFamily { sets: Vec::new(), provenance: BTreeMap::new(), next_odd: 1 }
    }

    /// Creates `X_k` with its private witness. Labels must be registered in index order.
    pub(crate) fn register_label(&mut self, k: LabelIndex) {
        assert_eq!(k, self.sets.len(), "labels are registered in index order");
        let private = 2 * k as Witness;
        self.sets.push(BTreeSet::from([private]));
        self.provenance.insert(private, Provenance::Private { label: k });
    }

    /// Value the next shared witness will take.
    pub fn next_witness(&self) -> Witness {
        self.next_odd
    }

    /// Allocates a fresh odd witness and puts it into each of `members`.
    pub(crate) fn add_shared(
        &mut self,
        stage: Stage,
        node: Node,
        members: impl IntoIterator<Item = LabelIndex>,
    ) -> Witness {
        let n = self.next_odd;
        self.next_odd += 2;
        self.provenance.insert(n, Provenance::Shared { stage, node });
        for k in members {
            self.sets[k].insert(n);
        }
        n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `X_k`.
    pub fn set(&self, k: LabelIndex) -> &BTreeSet<Witness> {
        &self.sets[k]
    }

    pub fn sets(&self) -> &[BTreeSet<Witness>] {
        &self.sets
    }

    pub fn provenance(&self, n: Witness) -> Option<Provenance> {
        self.provenance.get(&n).copied()
    }

    /// All witnesses with their provenance, ascending.
    pub fn witnesses(&self) -> impl Iterator<Item = (Witness, Provenance)> + '_ {
        self.provenance.iter().map(|(&n, &p)| (n, p))
    }

    /// Witnesses common to every listed set; all witnesses when `indices` is empty.
    pub fn common_witnesses(&self, indices: &BTreeSet<LabelIndex>) -> BTreeSet<Witness> {
        let mut iter = indices.iter();
        let Some(&first) = iter.next() else {
            return self.provenance.keys().copied().collect();
        };
        let mut common = self.sets[first].clone();
        for &k in iter {
            common.retain(|n| self.sets[k].contains(n));
            if common.is_empty() {
                break;
            }
        }
        common
    }

    /// Indices of the sets containing witness `n`.
    pub fn sets_containing(&self, n: Witness) -> BTreeSet<LabelIndex> {
        (0..self.sets.len()).filter(|&k| self.sets[k].contains(&n)).collect()
    }
}
