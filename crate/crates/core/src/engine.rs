//! The stage loops that label the tree and fill in the sets.
//!
//! Both modes share the same skeleton. At stage `s`:
//!
//! 1. `A_σ` goes on every node of length `s` (while `s <= maxDepth`).
//! 2. Strategies `i < min(s, iMax)` run in increasing order, each handling
//!    its newly due enumeration events in script order. An event is due at
//!    the first stage `s >= event.stage` with `i < s`, and is handled once.
//! 3. One fresh odd witness per node of length `< s`, in length-lex order,
//!    goes into every set labeled on an initial segment of that node.
//!
//! Coding labels are only produced for `j < jMax`.

use std::collections::BTreeSet;

use crate::error::ScenarioError;
use crate::family::SetFamily;
use crate::label::Label;
use crate::node::Node;
use crate::scenario::Scenario;
use crate::trace::{ConstructionTrace, PlaceReason, SkipReason, TraceEvent};
use crate::tree::{LabeledTree, Mode, Stage};

/// Output of one construction run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub tree: LabeledTree,
    pub family: SetFamily,
    pub trace: ConstructionTrace,
}

/// Runs the FIP-mode construction.
pub fn run_fip(scenario: &Scenario) -> Result<Construction, ScenarioError> {
    run(scenario, Mode::Fip)
}

/// Runs the priority (2IP-mode) construction.
pub fn run_2ip(scenario: &Scenario) -> Result<Construction, ScenarioError> {
    run(scenario, Mode::TwoIp)
}

pub fn run(scenario: &Scenario, mode: Mode) -> Result<Construction, ScenarioError> {
    scenario.validate_for(mode)?;
    let mut engine = Engine::new(scenario, mode);
    for stage in 0..=scenario.max_stage {
        engine.stage(stage);
    }
    Ok(Construction { tree: engine.tree, family: engine.family, trace: engine.trace })
}

struct Engine<'a> {
    scenario: &'a Scenario,
    tree: LabeledTree,
    family: SetFamily,
    trace: ConstructionTrace,
    /// Per strategy: which scripted events have been handled.
    handled: Vec<Vec<bool>>,
    /// FIP mode: nodes each strategy has enumerated, with the stage handled.
    enumerated: Vec<Vec<(Node, Stage)>>,
    /// 2IP mode: non-root nodes carrying a coding label of each strategy.
    coding_nodes: Vec<BTreeSet<Node>>,
}

impl<'a> Engine<'a> {
    fn new(scenario: &'a Scenario, mode: Mode) -> Self {
        let strategies = scenario.i_max;
        Engine {
            scenario,
            tree: LabeledTree::new(mode, scenario.max_depth),
            family: SetFamily::new(),
            trace: ConstructionTrace::default(),
            handled: (0..strategies).map(|i| vec![false; scenario.events_for(i).len()]).collect(),
            enumerated: vec![Vec::new(); strategies],
            coding_nodes: vec![BTreeSet::new(); strategies],
        }
    }

    fn stage(&mut self, stage: Stage) {
        if stage <= self.scenario.max_depth {
            for node in Node::all_up_to(stage).filter(|n| n.len() == stage) {
                self.place(Label::Structural(node), node, stage, PlaceReason::Structural);
            }
        }

        let k_now = self.scenario.k_approx(stage);
        for i in 0..stage.min(self.scenario.i_max) {
            let events = self.scenario.events_for(i);
            for (e, event) in events.iter().enumerate() {
                if self.handled[i][e] || event.stage > stage {
                    continue;
                }
                self.handled[i][e] = true;
                let sigma = event.node;
                match self.tree.mode() {
                    Mode::Fip => self.enumerate_fip(stage, i, sigma, &k_now),
                    Mode::TwoIp => self.enumerate_2ip(stage, i, sigma, &k_now),
                }
            }
        }

        if stage > 0 {
            let deepest = (stage - 1).min(self.scenario.max_depth);
            for node in Node::all_up_to(deepest) {
                let members = self.tree.inclusive_tilde(&node);
                let witness = self.family.add_shared(stage, node, members);
                self.trace.push(TraceEvent::WitnessAdded { witness, stage, node });
            }
        }
    }

    fn enumerate_fip(&mut self, stage: Stage, i: usize, sigma: Node, k_now: &BTreeSet<usize>) {
        let blocked = self.enumerated[i].iter().any(|(tau, s)| *s < stage && tau.is_prefix_of(&sigma));
        self.enumerated[i].push((sigma, stage));
        if blocked {
            self.skip(stage, i, sigma, SkipReason::PrefixEnumerated);
            return;
        }
        for code in (0..self.scenario.j_max).filter(|j| !k_now.contains(j)) {
            self.place(Label::CodingFip { strategy: i, code }, sigma, stage, PlaceReason::Coding);
        }
    }

    fn enumerate_2ip(&mut self, stage: Stage, i: usize, sigma: Node, k_now: &BTreeSet<usize>) {
        let Some(nu) = self.select_nu(i, &sigma) else {
            self.skip(stage, i, sigma, SkipReason::NoNu);
            return;
        };
        if self.coding_nodes[i].iter().any(|tau| tau.is_prefix_of(&sigma)) {
            self.skip(stage, i, sigma, SkipReason::Gate);
            return;
        }
        let mut trigger = None;
        for code in (0..self.scenario.j_max).filter(|j| !k_now.contains(j)) {
            let label = Label::CodingPriority { strategy: i, code, nu };
            self.place(label, sigma, stage, PlaceReason::Coding);
            trigger.get_or_insert(label);
        }
        let Some(trigger) = trigger else { return };
        self.coding_nodes[i].insert(sigma);

        // Lower-priority labels whose ν lies on the path to σ are moved to λ.
        for lower in i + 1..self.scenario.i_max {
            for code in 0..self.scenario.j_max {
                for nu in sigma.prefixes() {
                    let label = Label::CodingPriority { strategy: lower, code, nu };
                    if self.place_quietly(label, Node::ROOT, stage) {
                        self.trace.push(TraceEvent::LabelDiscarded { label, stage, trigger, trigger_node: sigma });
                    }
                }
            }
        }
    }

    /// Shortest `ν ⪯ σ` with no extension carrying a coding label of a
    /// strategy `i' < i`. Labels moved to λ do not count.
    fn select_nu(&self, i: usize, sigma: &Node) -> Option<Node> {
        sigma.prefixes().find(|nu| !self.coding_nodes[..i].iter().flatten().any(|tau| nu.is_prefix_of(tau)))
    }

    fn place(&mut self, label: Label, node: Node, stage: Stage, reason: PlaceReason) {
        if self.place_quietly(label, node, stage) {
            self.trace.push(TraceEvent::LabelPlaced { label, node, stage, reason });
        }
    }

    /// Records the label; returns whether it is new on `node`.
    fn place_quietly(&mut self, label: Label, node: Node, stage: Stage) -> bool {
        let placed = self.tree.place(label, node, stage);
        if placed.new_label {
            self.family.register_label(placed.index);
        }
        placed.new_at_node
    }

    fn skip(&mut self, stage: Stage, strategy: usize, node: Node, reason: SkipReason) {
        self.trace.push(TraceEvent::Skipped { stage, strategy, node, reason });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    fn fip(i: usize, code: usize) -> Label {
        Label::CodingFip { strategy: i, code }
    }

    fn pri(i: usize, code: usize, nu: &str) -> Label {
        Label::CodingPriority { strategy: i, code, nu: n(nu) }
    }

    fn nodes_of(tree: &LabeledTree, label: Label) -> Vec<Node> {
        tree.index_of(&label).map_or(Vec::new(), |k| tree.locations(k).to_vec())
    }

    #[test]
    fn quiet_scenario_has_only_structural_labels() {
        let c = run_fip(&Scenario::quiet(3, 2, 2, 1)).unwrap();
        assert_eq!(c.tree.len(), 7);
        assert_eq!(c.tree.index_order()[0], Label::Structural(Node::ROOT));
        for (node, records) in c.tree.placements() {
            let labels: Vec<Label> = records.keys().map(|&k| c.tree.label(k).unwrap()).collect();
            assert_eq!(labels, [Label::Structural(node)]);
        }
        // witnesses: stage 1 -> 1 node, stage 2 -> 3 nodes, stage 3 -> 7 nodes.
        assert_eq!(c.trace.count("WITNESS"), 11);
    }

    #[test]
    fn fip_places_batch_for_codes_outside_k() {
        let mut sc = Scenario::quiet(4, 2, 2, 1);
        sc.enumerate(0, 1, n("0"));
        let c = run_fip(&sc).unwrap();
        for code in 0..2 {
            let k = c.tree.index_of(&fip(0, code)).unwrap();
            assert_eq!(c.tree.locations(k), &[n("0")]);
            assert_eq!(c.tree.first_stage(k), Some(1));
        }

        sc.halt(0, 1);
        let c = run_fip(&sc).unwrap();
        assert_eq!(nodes_of(&c.tree, fip(0, 0)), [n("0")]);
        assert!(c.tree.index_of(&fip(0, 1)).is_none());
    }

    #[test]
    fn fip_skips_extensions_of_earlier_enumerations() {
        let mut sc = Scenario::quiet(5, 3, 1, 1);
        sc.enumerate(0, 1, n("0")).enumerate(0, 2, n("01")).enumerate(0, 2, n("1"));
        let c = run_fip(&sc).unwrap();
        assert_eq!(nodes_of(&c.tree, fip(0, 0)), [n("0"), n("1")]);
        assert!(c.trace.events.contains(&TraceEvent::Skipped {
            stage: 2,
            strategy: 0,
            node: n("01"),
            reason: SkipReason::PrefixEnumerated
        }));
    }

    #[test]
    fn strategy_waits_until_stage_exceeds_its_index() {
        let mut sc = Scenario::quiet(5, 2, 1, 3);
        sc.enumerate(2, 0, n("1"));
        let c = run_fip(&sc).unwrap();
        let k = c.tree.index_of(&fip(2, 0)).unwrap();
        assert_eq!(c.tree.first_stage(k), Some(3));
    }

    #[test]
    fn two_ip_single_strategy_uses_root_nu() {
        let mut sc = Scenario::quiet(4, 3, 2, 1);
        sc.enumerate(0, 1, n("01"));
        let c = run_2ip(&sc).unwrap();
        assert_eq!(nodes_of(&c.tree, pri(0, 0, "")), [n("01")]);
        assert_eq!(nodes_of(&c.tree, pri(0, 1, "")), [n("01")]);
    }

    #[test]
    fn two_ip_nu_avoids_higher_priority_extensions() {
        let mut sc = Scenario::quiet(5, 3, 1, 2);
        sc.enumerate(0, 1, n("00")).enumerate(1, 2, n("001"));
        let c = run_2ip(&sc).unwrap();
        assert_eq!(nodes_of(&c.tree, pri(0, 0, "")), [n("00")]);
        assert_eq!(nodes_of(&c.tree, pri(1, 0, "001")), [n("001")]);
        // W_0 acting on 00 moved every B_1 label with ν ⪯ 00 to λ.
        for nu in ["", "0", "00"] {
            assert_eq!(nodes_of(&c.tree, pri(1, 0, nu)), [Node::ROOT]);
        }
    }

    #[test]
    fn two_ip_discard_moves_lower_priority_labels_to_root() {
        let mut sc = Scenario::quiet(5, 3, 2, 2);
        sc.enumerate(1, 2, n("10")).enumerate(0, 3, n("101"));
        let c = run_2ip(&sc).unwrap();
        for code in 0..2 {
            assert_eq!(nodes_of(&c.tree, pri(1, code, "")), [n("10"), Node::ROOT]);
            assert_eq!(nodes_of(&c.tree, pri(0, code, "")), [n("101")]);
        }
        let discards: Vec<_> = c
            .trace
            .events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::LabelDiscarded { label, stage, trigger_node, .. } => Some((*label, *stage, *trigger_node)),
                _ => None,
            })
            .collect();
        assert!(discards.contains(&(pri(1, 0, ""), 3, n("101"))));
        assert_eq!(discards.len(), 2 * 4);
    }

    #[test]
    fn two_ip_gate_and_missing_nu() {
        let mut sc = Scenario::quiet(6, 3, 1, 2);
        // W_1 acts on 01; a later extension 011 is gated.
        sc.enumerate(1, 2, n("01")).enumerate(1, 3, n("011"));
        // W_0 takes 1, after which no initial segment of 1 is free of B_0 extensions.
        sc.enumerate(0, 3, n("1")).enumerate(1, 4, n("1"));
        let c = run_2ip(&sc).unwrap();
        let skips: Vec<_> = c
            .trace
            .events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Skipped { node, reason, .. } => Some((*node, *reason)),
                _ => None,
            })
            .collect();
        assert_eq!(skips, [(n("011"), SkipReason::Gate), (n("1"), SkipReason::NoNu)]);
    }

    #[test]
    fn lambda_events_rejected_in_2ip() {
        let mut sc = Scenario::quiet(4, 2, 1, 1);
        sc.enumerate(0, 1, Node::ROOT);
        assert!(matches!(run_2ip(&sc), Err(ScenarioError::LambdaEnumerated { .. })));
        assert!(run_fip(&sc).is_ok());
    }

    #[test]
    fn runs_are_deterministic() {
        let mut sc = Scenario::quiet(7, 3, 2, 2);
        sc.enumerate(0, 1, n("01")).enumerate(1, 2, n("1")).enumerate(0, 3, n("11")).halt(2, 1);
        for mode in [Mode::Fip, Mode::TwoIp] {
            assert_eq!(run(&sc, mode).unwrap(), run(&sc, mode).unwrap());
        }
    }
}
