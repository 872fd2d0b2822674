//! Seeded generators for scenarios, crafted-scenario parameters and finite families.
//!
//! Everything is driven by a ChaCha stream, so a seed fixes the output on
//! every platform.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteFamily;
use crate::crafting::CraftParams;
use crate::node::Node;
use crate::scenario::Scenario;
use crate::tree::Mode;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_members` members, each a random subset of `0..universe`.
pub fn random_family(rng: &mut impl Rng, max_members: usize, universe: u64) -> FiniteFamily {
    let members = rng.gen_range(1..=max_members.max(1));
    FiniteFamily::new(
        (0..members).map(|_| (0..universe).filter(|_| rng.gen_bool(0.5)).collect::<BTreeSet<u64>>()).collect(),
    )
}

/// Bounds for [`random_scenario`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScenarioBounds {
    pub max_depth: usize,
    pub max_stage: usize,
    pub j_max: usize,
    pub i_max: usize,
    /// Upper bound on scripted events per strategy.
    pub events: usize,
}

impl Default for ScenarioBounds {
    fn default() -> Self {
        ScenarioBounds { max_depth: 5, max_stage: 12, j_max: 3, i_max: 3, events: 4 }
    }
}

fn random_node(rng: &mut impl Rng, min_len: usize, max_len: usize) -> Node {
    let len = rng.gen_range(min_len..=max_len);
    let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
    Node::from_bits(&bits)
}

/// A valid scenario for `mode` with the given bounds: random enumeration
/// events (never `λ` in priority mode) and random `K` entries.
pub fn random_scenario(rng: &mut impl Rng, mode: Mode, bounds: ScenarioBounds) -> Scenario {
    let max_stage = bounds.max_stage.max(bounds.max_depth + 1);
    let mut sc = Scenario::quiet(max_stage, bounds.max_depth, bounds.j_max, bounds.i_max);
    let min_len = usize::from(mode == Mode::TwoIp);
    let strategies = if min_len > bounds.max_depth { 0 } else { bounds.i_max };
    for i in 0..strategies {
        for _ in 0..rng.gen_range(0..=bounds.events) {
            let stage = rng.gen_range(0..=max_stage);
            let node = random_node(rng, min_len, bounds.max_depth);
            sc.enumerate(i, stage, node);
        }
    }
    for j in 0..bounds.j_max {
        if rng.gen_bool(0.5) {
            sc.halt(rng.gen_range(0..=max_stage), j);
        }
    }
    sc
}

/// Parameters for a crafted scenario with a random path, `K` and strategy layout.
pub fn random_craft_params(rng: &mut impl Rng, mode: Mode, max_depth: usize, j_max: usize) -> CraftParams {
    let k = (0..j_max).filter(|_| rng.gen_bool(0.5));
    let mut params = CraftParams::new(max_depth, j_max, k);
    let bits: Vec<bool> = (0..max_depth).map(|_| rng.gen_bool(0.5)).collect();
    params.path = Node::from_bits(&bits);
    params.i_max = rng.gen_range(1..=3);
    params.target = rng.gen_range(0..params.i_max);
    let room = max_depth - params.margin;
    params.other_actions = if params.i_max > 1 { rng.gen_range(0..room.min(3)) } else { 0 };
    params.early_injury = mode == Mode::TwoIp && rng.gen_bool(0.5);
    params
}

/// A random reordering of `items`, possibly with repeats, covering every item.
pub fn random_enumeration(rng: &mut impl Rng, items: &BTreeSet<usize>) -> Vec<usize> {
    let mut seq: Vec<usize> = items.iter().copied().collect();
    let repeats: Vec<usize> = seq.iter().copied().filter(|_| rng.gen_bool(0.25)).collect();
    seq.extend(repeats);
    seq.shuffle(rng);
    seq
}
