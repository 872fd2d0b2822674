//! Scripted stand-ins for the c.e. sets `W_i` and the halting set `K`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, ScenarioError};
use crate::node::Node;
use crate::tree::{Mode, Stage};

/// Largest tree depth a scenario may request.
pub const MAX_DEPTH: usize = 12;
/// Largest stage bound a scenario may request.
pub const MAX_STAGE: usize = 128;
/// Upper limit for both `jMax` and `iMax`.
pub const MAX_INDEX_BOUND: usize = 64;

/// `W_i` enumerates `node` at `stage`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationEvent {
    pub stage: Stage,
    pub node: Node,
}

/// The scripted enumeration of one `W_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CeSet {
    pub i: usize,
    pub events: Vec<EnumerationEvent>,
}

/// `j` enters `K` at `stage`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KEvent {
    pub stage: Stage,
    pub j: usize,
}

/// Bounds plus scripted enumerations for one construction run.
///
/// The file form is JSON with keys in the order `maxStage`, `maxDepth`,
/// `jMax`, `iMax`, `ceSets`, `kEvents`; [`Scenario::to_canonical_json`]
/// always writes exactly that layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Scenario {
    pub max_stage: Stage,
    pub max_depth: usize,
    #[serde(rename = "jMax")]
    pub j_max: usize,
    #[serde(rename = "iMax")]
    pub i_max: usize,
    #[serde(default)]
    pub ce_sets: Vec<CeSet>,
    #[serde(default)]
    pub k_events: Vec<KEvent>,
}

impl Scenario {
    /// A scenario with no enumerations at all.
    pub fn quiet(max_stage: Stage, max_depth: usize, j_max: usize, i_max: usize) -> Self {
        Scenario { max_stage, max_depth, j_max, i_max, ce_sets: Vec::new(), k_events: Vec::new() }
    }

    /// Appends an enumeration of `node` by `W_i` at `stage`.
    pub fn enumerate(&mut self, i: usize, stage: Stage, node: Node) -> &mut Self {
        let pos = match self.ce_sets.iter().position(|c| c.i == i) {
            Some(p) => p,
            None => {
                self.ce_sets.push(CeSet { i, events: Vec::new() });
                self.ce_sets.len() - 1
            }
        };
        self.ce_sets[pos].events.push(EnumerationEvent { stage, node });
        self
    }

    /// Appends `j` entering `K` at `stage`.
    pub fn halt(&mut self, stage: Stage, j: usize) -> &mut Self {
        self.k_events.push(KEvent { stage, j });
        self
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(ParseError::new(e.to_string())))
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("scenario serializes");
        text.push('\n');
        text
    }

    /// Checks the bounds that hold in either mode.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Invalid(msg));
        if self.max_depth > MAX_DEPTH {
            return invalid(format!("maxDepth {} exceeds the supported {MAX_DEPTH}", self.max_depth));
        }
        if self.max_stage > MAX_STAGE {
            return invalid(format!("maxStage {} exceeds the supported {MAX_STAGE}", self.max_stage));
        }
        if self.max_stage <= self.max_depth {
            return invalid(format!(
                "maxStage {} must exceed maxDepth {} so every node receives witnesses",
                self.max_stage, self.max_depth
            ));
        }
        if self.j_max > MAX_INDEX_BOUND || self.i_max > MAX_INDEX_BOUND {
            return invalid(format!("jMax and iMax are limited to {MAX_INDEX_BOUND}"));
        }
        let mut seen = BTreeSet::new();
        for ce in &self.ce_sets {
            if ce.i >= self.i_max {
                return invalid(format!("W_{} is outside iMax {}", ce.i, self.i_max));
            }
            if !seen.insert(ce.i) {
                return invalid(format!("W_{} is listed twice", ce.i));
            }
            for ev in &ce.events {
                if ev.stage > self.max_stage {
                    return invalid(format!("W_{} event at stage {} is past maxStage", ce.i, ev.stage));
                }
                if ev.node.len() > self.max_depth {
                    return invalid(format!("W_{} enumerates {} below maxDepth", ce.i, ev.node));
                }
            }
        }
        for k in &self.k_events {
            if k.stage > self.max_stage {
                return invalid(format!("K event for {} at stage {} is past maxStage", k.j, k.stage));
            }
            if k.j >= self.j_max {
                return invalid(format!("K event for {} is outside jMax {}", k.j, self.j_max));
            }
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus the mode-specific conventions.
    pub fn validate_for(&self, mode: Mode) -> Result<(), ScenarioError> {
        self.validate()?;
        if mode == Mode::TwoIp {
            for ce in &self.ce_sets {
                if let Some(ev) = ce.events.iter().find(|ev| ev.node.is_root()) {
                    return Err(ScenarioError::LambdaEnumerated { strategy: ce.i, stage: ev.stage });
                }
            }
        }
        Ok(())
    }

    /// `K_s`: codes enumerated into `K` by stage `s`.
    pub fn k_approx(&self, s: Stage) -> BTreeSet<usize> {
        self.k_events.iter().filter(|k| k.stage <= s).map(|k| k.j).collect()
    }

    /// `K` as it stands at `maxStage`.
    pub fn final_k(&self) -> BTreeSet<usize> {
        self.k_approx(self.max_stage)
    }

    /// Stage at which `j` enters `K`, if it ever does.
    pub fn k_entry(&self, j: usize) -> Option<Stage> {
        self.k_events.iter().filter(|k| k.j == j).map(|k| k.stage).min()
    }

    /// Events scripted for `W_i` (empty if none).
    pub fn events_for(&self, i: usize) -> &[EnumerationEvent] {
        self.ce_sets.iter().find(|c| c.i == i).map_or(&[], |c| c.events.as_slice())
    }

    /// Every scripted `W_i`, keyed by `i`.
    pub fn strategies(&self) -> BTreeMap<usize, &[EnumerationEvent]> {
        self.ce_sets.iter().map(|c| (c.i, c.events.as_slice())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn k_approx_examples() {
        let sc = Scenario::quiet(4, 2, 6, 1);
        assert!(sc.k_approx(3).is_empty());
        let mut sc = Scenario::quiet(4, 2, 6, 1);
        sc.halt(2, 5);
        assert!(sc.k_approx(1).is_empty());
        assert_eq!(sc.k_approx(2), BTreeSet::from([5]));
        assert_eq!(sc.k_entry(5), Some(2));
        assert_eq!(sc.final_k(), BTreeSet::from([5]));
    }

    #[test]
    fn canonical_layout() {
        let mut sc = Scenario::quiet(4, 2, 2, 1);
        sc.enumerate(0, 1, n("0")).halt(0, 1);
        let text = sc.to_canonical_json();
        let expected = r#"{
  "maxStage": 4,
  "maxDepth": 2,
  "jMax": 2,
  "iMax": 1,
  "ceSets": [
    {
      "i": 0,
      "events": [
        {
          "stage": 1,
          "node": "0"
        }
      ]
    }
  ],
  "kEvents": [
    {
      "stage": 0,
      "j": 1
    }
  ]
}
"#;
        assert_eq!(text, expected);
        assert_eq!(Scenario::from_json(&text).unwrap(), sc);
    }

    #[test]
    fn validation_errors() {
        let mut sc = Scenario::quiet(4, 2, 2, 1);
        sc.enumerate(1, 1, n("0"));
        assert!(matches!(sc.validate(), Err(ScenarioError::Invalid(_))));

        let mut sc = Scenario::quiet(4, 2, 2, 1);
        sc.enumerate(0, 1, n("000"));
        assert!(sc.validate().is_err());

        let mut sc = Scenario::quiet(4, 2, 2, 1);
        sc.halt(1, 2);
        assert!(sc.validate().is_err());

        assert!(Scenario::quiet(2, 2, 1, 1).validate().is_err());

        let mut sc = Scenario::quiet(4, 2, 2, 1);
        sc.enumerate(0, 3, Node::ROOT);
        assert!(sc.validate_for(Mode::Fip).is_ok());
        assert_eq!(sc.validate_for(Mode::TwoIp), Err(ScenarioError::LambdaEnumerated { strategy: 0, stage: 3 }));
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = r#"{"maxStage":3,"maxDepth":1,"jMax":1,"iMax":1,"extra":0}"#;
        assert!(Scenario::from_json(text).is_err());
        let text = r#"{"maxStage":3,"maxDepth":1,"jMax":1,"iMax":1}"#;
        assert_eq!(Scenario::from_json(text).unwrap(), Scenario::quiet(3, 1, 1, 1));
    }

    proptest! {
        #[test]
        fn k_approx_is_monotone(events in proptest::collection::vec((0usize..10, 0usize..5), 0..8), s in 0usize..10) {
            let mut sc = Scenario::quiet(10, 2, 5, 1);
            for (stage, j) in events {
                sc.halt(stage, j);
            }
            prop_assert!(sc.k_approx(s).is_subset(&sc.k_approx(s + 1)));
        }

        #[test]
        fn canonical_json_round_trips(
            events in proptest::collection::vec((0usize..3, 0usize..9, proptest::collection::vec(any::<bool>(), 0..4)), 0..6),
            ks in proptest::collection::vec((0usize..9, 0usize..4), 0..4),
        ) {
            let mut sc = Scenario::quiet(9, 4, 4, 3);
            for (i, stage, bits) in events {
                sc.enumerate(i, stage, Node::from_bits(&bits));
            }
            for (stage, j) in ks {
                sc.halt(stage, j);
            }
            let text = sc.to_canonical_json();
            let back = Scenario::from_json(&text).unwrap();
            prop_assert_eq!(&back, &sc);
            prop_assert_eq!(back.to_canonical_json(), text);
        }
    }
}
