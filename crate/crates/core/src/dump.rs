//! Deterministic text dumps of a built tree and its set family.

use std::fmt::Write;

use itertools::Itertools;

use crate::family::{Provenance, SetFamily};
use crate::tree::LabeledTree;

/// Labels in index order with their first stage and homes, then every node
/// with the labels it carries (`index@stage`).
pub fn dump_tree(tree: &LabeledTree) -> String {
    let mut out = String::new();
    writeln!(out, "# tree mode={} maxDepth={} labels={}", tree.mode(), tree.max_depth(), tree.len()).unwrap();
    for (k, label) in tree.index_order().iter().enumerate() {
        let first = tree.first_stage(k).expect("every indexed label was placed");
        let homes = tree.locations(k).iter().join(" ");
        writeln!(out, "label {k} {label} first={first} on {homes}").unwrap();
    }
    for (node, labels) in tree.placements() {
        let carried = labels.iter().map(|(k, s)| format!("{k}@{s}")).join(" ");
        writeln!(out, "node {node} {carried}").unwrap();
    }
    out
}

/// Every set `X_k` in index order, then every witness with its origin.
pub fn dump_family(tree: &LabeledTree, family: &SetFamily) -> String {
    let mut out = String::new();
    writeln!(out, "# family sets={} nextWitness={}", family.len(), family.next_witness()).unwrap();
    for (k, set) in family.sets().iter().enumerate() {
        let label = tree.label(k).map_or_else(|| "?".to_string(), |l| l.to_string());
        writeln!(out, "X {k} {label} {{{}}}", set.iter().join(",")).unwrap();
    }
    for (n, origin) in family.witnesses() {
        match origin {
            Provenance::Shared { stage, node } => writeln!(out, "witness {n} shared stage={stage} node={node}"),
            Provenance::Private { label } => writeln!(out, "witness {n} private X{label}"),
        }
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_fip;
    use crate::scenario::Scenario;

    #[test]
    fn quiet_dump_shape() {
        let c = run_fip(&Scenario::quiet(2, 1, 1, 1)).unwrap();
        let tree = dump_tree(&c.tree);
        assert_eq!(
            tree,
            "# tree mode=fip maxDepth=1 labels=3\n\
             label 0 A[λ] first=0 on λ\n\
             label 1 A[0] first=1 on 0\n\
             label 2 A[1] first=1 on 1\n\
             node λ 0@0\n\
             node 0 1@1\n\
             node 1 2@1\n"
        );
        let family = dump_family(&c.tree, &c.family);
        assert!(family.starts_with("# family sets=3 nextWitness=9\nX 0 A[λ] {0,1,3,5,7}\n"), "{family}");
        assert!(family.contains("witness 1 shared stage=1 node=λ\n"));
        assert!(family.contains("witness 4 private X2\n"));
    }
}
