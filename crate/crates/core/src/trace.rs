//! Construction traces: the record stream, its line format, and replay.
//!
//! One record per line, fields separated by single spaces:
//!
//! ```text
//! WITNESS <n> <stage> <node>
//! PLACE <stage> <node> <label> <structural|coding>
//! DISCARD <stage> <label> <trigger-label> <trigger-node>
//! SKIP <stage> <strategy> <node> <prefix-enumerated|gate|no-nu>
//! ```
//!
//! Nodes are bit strings with `λ` for the root; labels use the `A[σ]`,
//! `B[i,j]`, `B[i,j,ν]` forms. Private (even) witnesses are implied by the
//! first PLACE or DISCARD of each label and are not written.

use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, ReplayError};
use crate::family::{SetFamily, Witness};
use crate::label::Label;
use crate::node::Node;
use crate::tree::{LabeledTree, Mode, Stage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaceReason {
    Structural,
    Coding,
}

/// Why an enumeration event placed nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkipReason {
    /// FIP mode: the strategy enumerated an initial segment at an earlier stage.
    PrefixEnumerated,
    /// 2IP mode: an initial segment other than λ already carries this strategy's label.
    Gate,
    /// 2IP mode: every initial segment has an extension with a higher-priority label.
    NoNu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceEvent {
    WitnessAdded { witness: Witness, stage: Stage, node: Node },
    LabelPlaced { label: Label, node: Node, stage: Stage, reason: PlaceReason },
    LabelDiscarded { label: Label, stage: Stage, trigger: Label, trigger_node: Node },
    Skipped { stage: Stage, strategy: usize, node: Node, reason: SkipReason },
}

impl TraceEvent {
    pub fn stage(&self) -> Stage {
        match *self {
            TraceEvent::WitnessAdded { stage, .. }
            | TraceEvent::LabelPlaced { stage, .. }
            | TraceEvent::LabelDiscarded { stage, .. }
            | TraceEvent::Skipped { stage, .. } => stage,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            TraceEvent::WitnessAdded { .. } => "WITNESS",
            TraceEvent::LabelPlaced { .. } => "PLACE",
            TraceEvent::LabelDiscarded { .. } => "DISCARD",
            TraceEvent::Skipped { .. } => "SKIP",
        }
    }
}

impl fmt::Display for PlaceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaceReason::Structural => "structural",
            PlaceReason::Coding => "coding",
        })
    }
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::PrefixEnumerated => "prefix-enumerated",
            SkipReason::Gate => "gate",
            SkipReason::NoNu => "no-nu",
        })
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::WitnessAdded { witness, stage, node } => write!(f, "WITNESS {witness} {stage} {node}"),
            TraceEvent::LabelPlaced { label, node, stage, reason } => {
                write!(f, "PLACE {stage} {node} {label} {reason}")
            }
            TraceEvent::LabelDiscarded { label, stage, trigger, trigger_node } => {
                write!(f, "DISCARD {stage} {label} {trigger} {trigger_node}")
            }
            TraceEvent::Skipped { stage, strategy, node, reason } => {
                write!(f, "SKIP {stage} {strategy} {node} {reason}")
            }
        }
    }
}

impl FromStr for TraceEvent {
    type Err = ParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = line.split(' ').collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| ParseError::new(format!("bad number `{s}`")));
        match fields.as_slice() {
            ["WITNESS", n, stage, node] => Ok(TraceEvent::WitnessAdded {
                witness: n.parse().map_err(|_| ParseError::new(format!("bad witness `{n}`")))?,
                stage: num(stage)?,
                node: node.parse()?,
            }),
            ["PLACE", stage, node, label, reason] => Ok(TraceEvent::LabelPlaced {
                stage: num(stage)?,
                node: node.parse()?,
                label: label.parse()?,
                reason: match *reason {
                    "structural" => PlaceReason::Structural,
                    "coding" => PlaceReason::Coding,
                    other => return Err(ParseError::new(format!("unknown placement reason `{other}`"))),
                },
            }),
            ["DISCARD", stage, label, trigger, trigger_node] => Ok(TraceEvent::LabelDiscarded {
                stage: num(stage)?,
                label: label.parse()?,
                trigger: trigger.parse()?,
                trigger_node: trigger_node.parse()?,
            }),
            ["SKIP", stage, strategy, node, reason] => Ok(TraceEvent::Skipped {
                stage: num(stage)?,
                strategy: num(strategy)?,
                node: node.parse()?,
                reason: match *reason {
                    "prefix-enumerated" => SkipReason::PrefixEnumerated,
                    "gate" => SkipReason::Gate,
                    "no-nu" => SkipReason::NoNu,
                    other => return Err(ParseError::new(format!("unknown skip reason `{other}`"))),
                },
            }),
            _ => Err(ParseError::new(format!("unrecognized trace record `{line}`"))),
        }
    }
}

/// Ordered record of everything a construction run did.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub events: Vec<TraceEvent>,
}

impl ConstructionTrace {
    pub fn push(&mut self, event: TraceEvent) {
        self.events.push(event);
    }

    pub fn count(&self, tag: &str) -> usize {
        self.events.iter().filter(|e| e.tag() == tag).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the line format; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut events = Vec::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            events.push(line.parse().map_err(|e: ParseError| e.at_line(k + 1))?);
        }
        Ok(ConstructionTrace { events })
    }

    /// Rebuilds the tree and set family from the records alone.
    pub fn replay(&self, mode: Mode, max_depth: usize) -> Result<(LabeledTree, SetFamily), ReplayError> {
        let mut tree = LabeledTree::new(mode, max_depth);
        let mut family = SetFamily::new();
        let mut last_stage = 0;
        for (record, event) in self.events.iter().enumerate() {
            let record = record + 1;
            let stage = event.stage();
            if stage < last_stage {
                return Err(ReplayError::StageRegression { record, stage, previous: last_stage });
            }
            last_stage = stage;
            let inconsistent = |message: String| ReplayError::Inconsistent { record, message };
            match *event {
                TraceEvent::WitnessAdded { witness, node, .. } => {
                    check_depth(&node, max_depth).map_err(inconsistent)?;
                    let expected = family.next_witness();
                    if witness != expected {
                        return Err(ReplayError::WitnessOrder { record, witness, expected });
                    }
                    family.add_shared(stage, node, tree.inclusive_tilde(&node));
                }
                TraceEvent::LabelPlaced { label, node, .. } => {
                    check_label(&label, &node, mode, max_depth).map_err(inconsistent)?;
                    let placed = tree.place(label, node, stage);
                    if placed.new_label {
                        family.register_label(placed.index);
                    }
                }
                TraceEvent::LabelDiscarded { label, trigger, trigger_node, .. } => {
                    if mode != Mode::TwoIp {
                        return Err(inconsistent("DISCARD record in a FIP trace".into()));
                    }
                    check_label(&label, &Node::ROOT, mode, max_depth).map_err(inconsistent)?;
                    if !tree.index_of(&trigger).is_some_and(|k| tree.carries(&trigger_node, k)) {
                        return Err(inconsistent(format!("trigger {trigger} is not on {trigger_node}")));
                    }
                    let placed = tree.place(label, Node::ROOT, stage);
                    if placed.new_label {
                        family.register_label(placed.index);
                    }
                }
                TraceEvent::Skipped { .. } => {}
            }
        }
        Ok((tree, family))
    }
}

fn check_depth(node: &Node, max_depth: usize) -> Result<(), String> {
    if node.len() > max_depth {
        return Err(format!("{node} exceeds the depth bound {max_depth}"));
    }
    Ok(())
}

fn check_label(label: &Label, node: &Node, mode: Mode, max_depth: usize) -> Result<(), String> {
    check_depth(node, max_depth)?;
    match (label, mode) {
        (Label::Structural(home), _) if home != node => Err(format!("{label} placed on {node}")),
        (Label::CodingFip { .. }, Mode::TwoIp) | (Label::CodingPriority { .. }, Mode::Fip) => {
            Err(format!("{label} does not belong to a {mode} tree"))
        }
        _ => Ok(()),
    }
}
