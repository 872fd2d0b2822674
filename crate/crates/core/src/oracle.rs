use std::collections::{BTreeMap, BTreeSet};

use crate::error::OracleError;
use crate::tree::LabelIndex;

/// A finite stand-in for the range of a purported FIP function `f`.
///
/// The functionals only ever look at the range; the optional enumeration
/// realizes a particular `f` and can only change how soon a search succeeds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleSet {
    indices: BTreeSet<LabelIndex>,
    enumeration: Option<Vec<LabelIndex>>,
}

impl OracleSet {
    pub fn new(indices: impl IntoIterator<Item = LabelIndex>) -> Self {
        OracleSet { indices: indices.into_iter().collect(), enumeration: None }
    }

    /// An oracle realized by an explicit sequence; the range is its set of values.
    pub fn enumerated(sequence: Vec<LabelIndex>) -> Self {
        OracleSet { indices: sequence.iter().copied().collect(), enumeration: Some(sequence) }
    }

    /// Attaches an enumeration, which must have exactly the oracle's range.
    pub fn with_enumeration(mut self, sequence: Vec<LabelIndex>) -> Result<Self, OracleError> {
        if sequence.iter().copied().collect::<BTreeSet<_>>() != self.indices {
            return Err(OracleError::EnumerationMismatch);
        }
        self.enumeration = Some(sequence);
        Ok(self)
    }

    pub fn indices(&self) -> &BTreeSet<LabelIndex> {
        &self.indices
    }

    pub fn enumeration(&self) -> Option<&[LabelIndex]> {
        self.enumeration.as_deref()
    }

    pub fn contains(&self, k: LabelIndex) -> bool {
        self.indices.contains(&k)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// First position at which each index is listed; all zero without an enumeration.
    pub fn first_positions(&self) -> BTreeMap<LabelIndex, usize> {
        match &self.enumeration {
            None => self.indices.iter().map(|&k| (k, 0)).collect(),
            Some(seq) => {
                let mut first = BTreeMap::new();
                for (r, &k) in seq.iter().enumerate() {
                    first.entry(k).or_insert(r);
                }
                first
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_must_match_range() {
        let o = OracleSet::new([1, 4, 6]);
        assert!(o.clone().with_enumeration(vec![6, 1, 4, 1]).is_ok());
        assert_eq!(o.clone().with_enumeration(vec![6, 1]), Err(OracleError::EnumerationMismatch));
        let e = OracleSet::enumerated(vec![4, 4, 2]);
        assert_eq!(e.indices(), &BTreeSet::from([2, 4]));
        assert_eq!(e.first_positions(), BTreeMap::from([(2, 2), (4, 0)]));
    }
}
