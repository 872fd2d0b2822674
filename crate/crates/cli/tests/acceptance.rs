//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fiplab::algebra::{
    forcing_maximal_fip, greedy_maximal_fip, has_fip, has_nip, label_set_on_common_path, reduce_nip_to_fip,
    FiniteFamily,
};
use fiplab::crafting::{
    build_oracle, check_cofinal_characterization, craft_lemma_main_scenario, dense_scenario, CraftParams,
    CraftedScenario, OracleRecipe,
};
use fiplab::functionals::{decode_k, phi, Outcome};
use fiplab::lemmas::{check_finite_paths, check_pairwise_paths, LemmaReport};
use fiplab::random::{random_craft_params, random_enumeration, random_family, random_scenario, rng, ScenarioBounds};
use fiplab::{run, Construction, Mode, OracleSet, Scenario};
use rand::Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const LEMMA_BOUNDS: ScenarioBounds = ScenarioBounds { max_depth: 8, max_stage: 32, j_max: 4, i_max: 3, events: 6 };
const TIME_LIMIT: Duration = Duration::from_secs(30);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Direct evaluation of random subsets through the public APIs, as a spot
/// check on the exhaustive search.
fn spot_check(c: &Construction, pairwise: bool, seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let labels = c.family.len();
    for _ in 0..3000 {
        let size = r.gen_range(if pairwise { 2 } else { 1 }..=4);
        let subset: BTreeSet<usize> = (0..size).map(|_| r.gen_range(0..labels)).collect();
        let family_side = if pairwise {
            subset.iter().all(|&x| subset.iter().all(|&y| !c.family.set(x).is_disjoint(c.family.set(y))))
        } else {
            !c.family.common_witnesses(&subset).is_empty()
        };
        let path_side = label_set_on_common_path(&c.tree, &subset);
        ensure(family_side == path_side.is_some(), || format!("spot check disagrees on {subset:?}"))?;
        if let Some(sigma) = path_side {
            ensure(subset.is_subset(&c.tree.proper_tilde(&sigma)), || format!("{sigma} does not carry {subset:?}"))?;
        }
    }
    Ok(())
}

fn lemma_runs(mode: Mode, pairwise: bool) -> Verdict {
    let mut summary = Vec::new();
    let mut discards = 0;
    for seed in 1..=3 {
        let scenario = random_scenario(&mut rng(seed), mode, LEMMA_BOUNDS);
        let start = Instant::now();
        let c = run(&scenario, mode).map_err(|e| e.to_string())?;
        let report: LemmaReport = if pairwise {
            check_pairwise_paths(&c.tree, &c.family, 4, true)
        } else {
            check_finite_paths(&c.tree, &c.family, 4, true)
        };
        let elapsed = start.elapsed();
        ensure(report.holds(), || {
            format!("seed {seed}: {} counterexamples {:?}", report.counterexample_count, report.counterexamples)
        })?;
        ensure(elapsed < TIME_LIMIT, || format!("seed {seed}: took {elapsed:?}"))?;
        spot_check(&c, pairwise, seed)?;
        discards += c.trace.count("DISCARD");
        summary.push(format!("{} labels/{} subsets/{:.1}s", report.labels, report.total(), elapsed.as_secs_f64()));
    }
    // A smaller universe with every subset evaluated, no monotone shortcut.
    let small = ScenarioBounds { max_depth: 5, max_stage: 12, ..LEMMA_BOUNDS };
    let scenario = random_scenario(&mut rng(4), mode, small);
    let c = run(&scenario, mode).map_err(|e| e.to_string())?;
    let full = if pairwise {
        check_pairwise_paths(&c.tree, &c.family, 4, false)
    } else {
        check_finite_paths(&c.tree, &c.family, 4, false)
    };
    ensure(full.holds() && full.implied == 0, || format!("unpruned depth 5 run: {:?}", full.counterexamples))?;
    summary.push(format!("depth 5 unpruned {} subsets", full.checked));
    if mode == Mode::TwoIp {
        ensure(discards > 0, || "no discards happened; the priority runs were trivial".into())?;
    }
    Ok(format!("0 counterexamples [{}]", summary.join("; ")))
}

fn criterion_1() -> Verdict {
    lemma_runs(Mode::Fip, false)
}

fn criterion_2() -> Verdict {
    lemma_runs(Mode::TwoIp, true)
}

fn criterion_3() -> Verdict {
    let f = FiniteFamily::from_slices(&[&[1, 2], &[2, 3], &[3, 1]]);
    let (nip, fip) = (has_nip(&f, 2), has_fip(&f));
    ensure(nip && !fip, || format!("hasNip = {nip}, hasFip = {fip}"))?;
    Ok("hasNip(_, 2) = true, hasFip = false".into())
}

fn criterion_4() -> Verdict {
    let mut checked = 0;
    for seed in 0..12u64 {
        let mode = if seed % 2 == 0 { Mode::Fip } else { Mode::TwoIp };
        let mut r = rng(1000 + seed);
        let depth = r.gen_range(4..=8);
        let crafted =
            craft_lemma_main_scenario(mode, &random_craft_params(&mut r, mode, depth, 3)).map_err(|e| e.to_string())?;
        let c = run(&crafted.scenario, mode).map_err(|e| e.to_string())?;
        let y = crafted.path;
        let selector = crafted.selector.expect("crafted with strategies");
        for recipe in [OracleRecipe::PathOnly(y), OracleRecipe::PathPlusCoding(y, selector)] {
            let oracle = build_oracle(&c.tree, &crafted.scenario, &recipe).map_err(|e| e.to_string())?;
            let orders: Vec<OracleSet> =
                (0..5).map(|_| OracleSet::enumerated(random_enumeration(&mut r, oracle.indices()))).collect();
            for n in 0..=y.len() {
                let got = phi(&c.tree, &oracle, n);
                ensure(got == Outcome::Converged(y.prefix(n)), || {
                    format!("seed {seed}: phi({n}) = {got:?}, path {y}")
                })?;
                for o in &orders {
                    ensure(phi(&c.tree, o, n) == got, || format!("seed {seed}: enumeration order changed phi({n})"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("12 seeded scenarios, {checked} prefix requests, order-invariant"))
}

fn decode_crafted(crafted: &CraftedScenario) -> Result<Construction, String> {
    let c = run(&crafted.scenario, crafted.mode).map_err(|e| e.to_string())?;
    let selector = crafted.selector.expect("crafted with strategies");
    let recipe = OracleRecipe::PathPlusCoding(crafted.path, selector);
    let oracle = build_oracle(&c.tree, &crafted.scenario, &recipe).map_err(|e| e.to_string())?;
    let table = decode_k(&c.tree, &crafted.scenario, selector, &oracle, crafted.scenario.max_stage);
    let k = crafted.scenario.final_k();
    for (j, outcome) in &table {
        let expected = Outcome::Converged(u8::from(k.contains(j)));
        ensure(*outcome == expected, || format!("K = {k:?}: entry {j} is {outcome:?}"))?;
    }
    Ok(c)
}

fn criterion_5() -> Verdict {
    let scripts: [&[usize]; 4] = [&[1, 3], &[], &[0, 1, 2, 3], &[2]];
    for (n, k) in scripts.iter().enumerate() {
        let mut params = CraftParams::new(8, 4, k.iter().copied());
        if n == 3 {
            params.i_max = 3;
            params.target = 2;
            params.other_actions = 2;
            params.path = "11010010".parse().expect("valid node");
        }
        let crafted = craft_lemma_main_scenario(Mode::Fip, &params).map_err(|e| e.to_string())?;
        decode_crafted(&crafted)?;
    }
    Ok("4 K scripts decoded exactly, 0 diverged at budget maxStage".into())
}

fn criterion_6() -> Verdict {
    let mut discards = Vec::new();
    let layouts = [
        (1, 0, 0, false, vec![0, 2]),
        (2, 1, 2, true, vec![1]),
        (3, 2, 2, false, vec![0, 1, 2]),
        (3, 0, 1, false, vec![]),
    ];
    for (i_max, target, other, injury, k) in layouts {
        let mut params = CraftParams::new(8, 3, k);
        params.i_max = i_max;
        params.target = target;
        params.other_actions = other;
        params.early_injury = injury;
        let crafted = craft_lemma_main_scenario(Mode::TwoIp, &params).map_err(|e| e.to_string())?;
        let c = decode_crafted(&crafted)?;
        discards.push(c.trace.count("DISCARD"));
    }
    ensure(discards.iter().any(|&d| d > 0), || "no scenario fired the discard rule".into())?;
    Ok(format!("4 layouts decoded exactly; DISCARD records per run {discards:?}"))
}

/// Every nonempty subfamily has a common element, checked subset by subset.
fn fip_brute(f: &FiniteFamily, members: &[usize]) -> bool {
    (1u32..1 << members.len()).all(|mask| {
        let chosen: Vec<usize> = (0..members.len()).filter(|b| mask >> b & 1 == 1).map(|b| members[b]).collect();
        f.members[chosen[0]].iter().any(|x| chosen.iter().all(|&k| f.members[k].contains(x)))
    })
}

fn criterion_7() -> Verdict {
    let mut r = rng(7);
    let mut tested = 0;
    while tested < 200 {
        let f = random_family(&mut r, 6, 8);
        if f.members.iter().all(BTreeSet::is_empty) {
            continue;
        }
        tested += 1;
        let g = greedy_maximal_fip(&f).map_err(|e| e.to_string())?;
        let h = forcing_maximal_fip(&f).map_err(|e| e.to_string())?;
        ensure(g == h, || format!("{f:?}: greedy {g:?} vs forcing {h:?}"))?;
        let chosen: Vec<usize> = g.iter().copied().collect();
        ensure(fip_brute(&f, &chosen), || format!("{f:?}: {g:?} lacks FIP"))?;
        for k in (0..f.len()).filter(|k| !g.contains(k)) {
            let mut with = chosen.clone();
            with.push(k);
            ensure(!fip_brute(&f, &with), || format!("{f:?}: {g:?} extends by {k}"))?;
        }
    }
    Ok("200 families: outputs agree, have FIP and are strictly maximal".into())
}

fn criterion_8() -> Verdict {
    let mut r = rng(8);
    let mut subsets = 0;
    for _ in 0..100 {
        let f = random_family(&mut r, 6, 8);
        let reduced = reduce_nip_to_fip(&f, 2);
        for mask in 0u32..1 << f.len() {
            let chosen: Vec<usize> = (0..f.len()).filter(|b| mask >> b & 1 == 1).collect();
            let lhs = chosen.is_empty() || fip_brute(&reduced, &chosen);
            let rhs = chosen.iter().all(|&x| chosen.iter().all(|&y| !f.members[x].is_disjoint(&f.members[y])));
            ensure(lhs == rhs, || format!("{f:?} on {chosen:?}: reduced FIP {lhs}, original 2IP {rhs}"))?;
            ensure(rhs == has_nip(&f.restrict(&chosen), 2), || format!("hasNip disagrees on {chosen:?}"))?;
            subsets += 1;
        }
    }
    Ok(format!("100 families, {subsets} index sets"))
}

fn criterion_9() -> Verdict {
    let (scenario, y) = dense_scenario(8, 3, &BTreeSet::from([1]));
    let c = run(&scenario, Mode::Fip).map_err(|e| e.to_string())?;
    let check = check_cofinal_characterization(&c.tree, &c.family, &y);
    let bad: Vec<_> = check.mismatches().collect();
    ensure(bad.is_empty(), || format!("mismatches {bad:?}"))?;
    let cofinal = check.rows.iter().filter(|r| r.cofinal).count();
    ensure(cofinal > 0 && cofinal < check.rows.len(), || "check did not exercise both outcomes".into())?;
    Ok(format!("{} coding labels outside the path family ({cofinal} cofinal), 0 counterexamples", check.rows.len()))
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut params = CraftParams::new(7, 3, [1]);
    params.i_max = 2;
    params.target = 1;
    params.other_actions = 1;
    params.early_injury = true;
    let crafted = craft_lemma_main_scenario(Mode::TwoIp, &params).map_err(|e| e.to_string())?;
    let scenario_path = dir.path().join("scenario.json");
    fs::write(&scenario_path, crafted.scenario.to_canonical_json()).map_err(|e| e.to_string())?;
    let text = fs::read_to_string(&scenario_path).map_err(|e| e.to_string())?;
    let reparsed = Scenario::from_json(&text).map_err(|e| e.to_string())?;
    ensure(reparsed.to_canonical_json() == text, || "scenario file does not round-trip".into())?;
    let mut outputs = Vec::new();
    for run_dir in ["a", "b"] {
        let out = dir.path().join(run_dir);
        let status = Command::new(env!("CARGO_BIN_EXE_fiplab"))
            .args(["build", "--mode", "2ip", "--scenario"])
            .arg(&scenario_path)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        let files: Vec<Vec<u8>> = ["trace.txt", "tree.txt", "family.txt"]
            .iter()
            .map(|f| fs::read(out.join(f)).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        outputs.push(files);
    }
    ensure(outputs[0] == outputs[1], || "build outputs differ between runs".into())?;
    let bytes: usize = outputs[0].iter().map(Vec::len).sum();
    Ok(format!("trace, tree and family dumps identical ({bytes} bytes)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("common intersection <=> common path (FIP, depth 8, subsets <= 4)", criterion_1),
        ("pairwise intersection <=> common path (2IP, depth 8, subsets 2..4)", criterion_2),
        ("triangle family is 2IP but not FIP", criterion_3),
        ("phi recovers the path prefix, independent of enumeration", criterion_4),
        ("psi decodes K on crafted FIP scenarios", criterion_5),
        ("psi decodes K on crafted 2IP scenarios with discards", criterion_6),
        ("greedy and forcing maximalizers", criterion_7),
        ("2IP-to-FIP reduction", criterion_8),
        ("FIP preservation <=> cofinality (dense scenario, depth 8)", criterion_9),
        ("build output is deterministic", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
