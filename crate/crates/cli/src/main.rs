//! `fiplab`: batch front-end for the constructions, functionals and checkers.
//!
//! Exit status: 0 on success, 1 when a check finds a counterexample, 2 on
//! invalid input or usage.

mod output;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fiplab::algebra::{forcing_maximal_fip, greedy_maximal_fip, has_fip, has_nip, reduce_nip_to_fip, FiniteFamily};
use fiplab::crafting::{
    build_oracle, check_cofinal_characterization, check_maximal_within_universe, craft_lemma_main_scenario,
    dense_scenario, CraftParams, OracleRecipe, Universe,
};
use fiplab::dump::{dump_family, dump_tree};
use fiplab::functionals::{decode_k, meets_or_avoids, phi, Genericity, Selector};
use fiplab::lemmas::{check_finite_paths, check_pairwise_paths, LemmaReport};
use fiplab::random::{random_craft_params, random_family, random_scenario, rng, ScenarioBounds};
use fiplab::{run, Construction, Mode, Node, OracleSet, Scenario};

use output::{outcome_json, Report};

#[derive(Parser, Debug)]
#[command(name = "fiplab", version, about = "Bounded FIP / 2IP labeled-tree laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a construction and write tree, family and trace files.
    Build {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one of the exhaustive check suites.
    Check(CheckArgs),
    /// Maximal FIP subfamily of a finite family (JSON `{"members": [[...], ...]}`).
    Maximalize {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Read the path off an oracle with Φ.
    Phi {
        #[command(flatten)]
        input: RunInput,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Prefix length to request; every length up to the path's by default.
        #[arg(long)]
        bits: Option<usize>,
    },
    /// Decode K from an oracle with Ψ.
    Psi {
        #[command(flatten)]
        input: RunInput,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        strategy: usize,
        /// Priority context ν (2ip mode only).
        #[arg(long, value_parser = parse_node)]
        nu: Option<Node>,
        /// Search budget in stages; maxStage by default.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Write a scenario in which one strategy neither meets nor avoids a path.
    ScenarioCraft(CraftArgs),
    /// Summary of one run: sizes, checks, oracles and decoding.
    Report {
        #[command(flatten)]
        input: RunInput,
        #[arg(long, value_parser = parse_node)]
        path: Node,
        #[arg(long)]
        strategy: Option<usize>,
        #[arg(long, value_parser = parse_node)]
        nu: Option<Node>,
        /// Largest subset size for the lemma checks.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fip,
    #[value(name = "2ip")]
    TwoIp,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Fip => Mode::Fip,
            ModeArg::TwoIp => Mode::TwoIp,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Forcing,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    LemmaFinitepaths,
    #[value(name = "2ip-is-fip")]
    TwoIpIsFip,
    Cofinal,
    Maximalizers,
    Reduction,
}

#[derive(Args, Debug)]
struct RunInput {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Path prefix `Y_d`; the oracle is the labels on its initial segments.
    #[arg(long, value_parser = parse_node, conflicts_with = "indices")]
    path: Option<Node>,
    /// Add the coding batch of the strategy given to `psi` (needs --path).
    #[arg(long, requires = "path")]
    coding: bool,
    /// Explicit comma-separated label indices.
    #[arg(long, value_delimiter = ',')]
    indices: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Scenario file; a seeded random scenario is generated otherwise.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Tree depth of the generated scenario.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest subset size for the lemma suites.
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    /// Evaluate every subset instead of skipping supersets of doubly-false ones.
    #[arg(long)]
    no_prune: bool,
    /// Path for the cofinal suite; defaults to the all-zero path two levels above the bottom.
    #[arg(long, value_parser = parse_node)]
    path: Option<Node>,
    /// Random families for the algebra suites.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args, Debug)]
struct CraftArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 4)]
    j_max: usize,
    /// Codes that enter K, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    i_max: usize,
    #[arg(long, default_value_t = 0)]
    target: usize,
    #[arg(long, default_value_t = 2)]
    margin: usize,
    /// Off-path levels each other strategy enumerates.
    #[arg(long, default_value_t = 0)]
    other_actions: usize,
    #[arg(long)]
    early_injury: bool,
    /// Full-depth path; alternating bits by default.
    #[arg(long, value_parser = parse_node)]
    path: Option<Node>,
    /// Draw every parameter except mode, depth and jMax from this seed instead.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_node(s: &str) -> Result<Node, String> {
    s.parse().map_err(|e: fiplab::ParseError| e.to_string())
}

enum Status {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<Status> {
    match command {
        Command::Build { mode, scenario, out } => build(mode.into(), &scenario, &out),
        Command::Check(args) => check(&args),
        Command::Maximalize { family, method } => maximalize(&family, method),
        Command::Phi { input, oracle, bits } => phi_cmd(&input, &oracle, bits),
        Command::Psi { input, oracle, strategy, nu, budget } => psi_cmd(&input, &oracle, strategy, nu, budget),
        Command::ScenarioCraft(args) => craft(&args),
        Command::Report { input, path, strategy, nu, max_size } => report(&input, path, strategy, nu, max_size),
    }
}

fn load_scenario(path: &Path, mode: Mode) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let scenario = Scenario::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    scenario.validate_for(mode)?;
    Ok(scenario)
}

fn load_run(input: &RunInput) -> Result<(Scenario, Construction)> {
    let mode = input.mode.into();
    let scenario = load_scenario(&input.scenario, mode)?;
    let construction = run(&scenario, mode)?;
    Ok((scenario, construction))
}

fn build(mode: Mode, scenario_path: &Path, out: &Path) -> Result<Status> {
    let scenario = load_scenario(scenario_path, mode)?;
    let c = run(&scenario, mode)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let files = [
        ("trace.txt", c.trace.to_text()),
        ("tree.txt", dump_tree(&c.tree)),
        ("family.txt", dump_family(&c.tree, &c.family)),
    ];
    for (name, text) in &files {
        let path = out.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut r = Report::new(format!("build ({mode})"));
    r.line(format!("labels: {}", c.tree.len()));
    r.line(format!("shared witnesses: {}", (c.family.next_witness() - 1) / 2));
    for tag in ["PLACE", "DISCARD", "SKIP"] {
        r.line(format!("{tag} records: {}", c.trace.count(tag)));
    }
    r.line(format!("wrote {}", out.display()));
    r.set(
        "result",
        json!({
            "mode": mode.to_string(),
            "labels": c.tree.len(),
            "nextWitness": c.family.next_witness(),
            "records": {
                "place": c.trace.count("PLACE"),
                "discard": c.trace.count("DISCARD"),
                "skip": c.trace.count("SKIP"),
                "witness": c.trace.count("WITNESS"),
            },
            "files": files.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
        }),
    );
    r.print();
    Ok(Status::Ok)
}

fn check_scenario(args: &CheckArgs, mode: Mode) -> Result<Scenario> {
    match &args.scenario {
        Some(path) => load_scenario(path, mode),
        None => {
            let bounds = ScenarioBounds { max_depth: args.depth, max_stage: 32, j_max: 4, i_max: 3, events: 6 };
            let scenario = random_scenario(&mut rng(args.seed), mode, bounds);
            scenario.validate_for(mode)?;
            Ok(scenario)
        }
    }
}

fn check(args: &CheckArgs) -> Result<Status> {
    match args.suite {
        Suite::LemmaFinitepaths | Suite::TwoIpIsFip => lemma_suite(args),
        Suite::Cofinal => cofinal_suite(args),
        Suite::Maximalizers | Suite::Reduction => algebra_suite(args),
    }
}

fn lemma_suite(args: &CheckArgs) -> Result<Status> {
    let pairwise = args.suite == Suite::TwoIpIsFip;
    let mode: Mode = match (args.mode, pairwise) {
        (Some(ModeArg::Fip), true) => bail!("the 2ip-is-fip suite needs a 2ip-mode tree"),
        (Some(m), _) => m.into(),
        (None, true) => Mode::TwoIp,
        (None, false) => Mode::Fip,
    };
    if args.max_size == 0 || (pairwise && args.max_size < 2) {
        bail!("--max-size is too small for this suite");
    }
    let scenario = check_scenario(args, mode)?;
    let c = run(&scenario, mode)?;
    let report = if pairwise {
        check_pairwise_paths(&c.tree, &c.family, args.max_size, !args.no_prune)
    } else {
        check_finite_paths(&c.tree, &c.family, args.max_size, !args.no_prune)
    };
    let mut r = Report::new(format!("check {} ({mode}, depth {})", suite_name(args.suite), scenario.max_depth));
    lemma_lines(&mut r, &report, &c);
    r.set("result", json!({ "suite": suite_name(args.suite), "mode": mode.to_string(), "report": report }));
    r.print();
    Ok(if report.holds() { Status::Ok } else { Status::CheckFailed })
}

fn lemma_lines(r: &mut Report, report: &LemmaReport, c: &Construction) {
    r.line(format!("labels: {}", report.labels));
    r.line(format!(
        "subsets of size {}..={}: {} ({} evaluated, {} settled by monotonicity)",
        report.min_size,
        report.max_size,
        report.total(),
        report.checked,
        report.implied
    ));
    r.line(format!("both sides true: {}", report.both_true));
    r.line(format!("counterexamples: {}", report.counterexample_count));
    for cx in &report.counterexamples {
        let labels: Vec<String> =
            cx.labels.iter().map(|&k| format!("{k}:{}", c.tree.label(k).expect("indexed label"))).collect();
        let path = cx.common_path.map_or_else(|| "none".to_string(), |n| n.to_string());
        r.line(format!("  {{{}}} family side {} common path {path}", labels.join(", "), cx.family_side));
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::LemmaFinitepaths => "lemma-finitepaths",
        Suite::TwoIpIsFip => "2ip-is-fip",
        Suite::Cofinal => "cofinal",
        Suite::Maximalizers => "maximalizers",
        Suite::Reduction => "reduction",
    }
}

fn cofinal_suite(args: &CheckArgs) -> Result<Status> {
    let mode: Mode = args.mode.map_or(Mode::Fip, Into::into);
    let (scenario, default_path) = match &args.scenario {
        Some(p) => {
            let sc = load_scenario(p, mode)?;
            let d = sc.max_depth.saturating_sub(2);
            (sc, Node::from_bits(&vec![false; d]))
        }
        None => {
            if args.depth > 12 {
                bail!("--depth {} exceeds the supported 12", args.depth);
            }
            dense_scenario(args.depth, 3, &BTreeSet::from([1]))
        }
    };
    let path = args.path.unwrap_or(default_path);
    if path.len() > scenario.max_depth {
        bail!("path {path} is deeper than maxDepth {}", scenario.max_depth);
    }
    let c = run(&scenario, mode)?;
    let result = check_cofinal_characterization(&c.tree, &c.family, &path);
    let bad: Vec<_> = result.mismatches().collect();
    let mut r = Report::new(format!("check cofinal ({mode}, depth {}, path {path})", scenario.max_depth));
    r.line(format!("coding labels outside the path family: {}", result.rows.len()));
    r.line(format!("cofinal: {}", result.rows.iter().filter(|row| row.cofinal).count()));
    r.line(format!("counterexamples: {}", bad.len()));
    for row in &bad {
        let label = c.tree.label(row.label).expect("indexed label");
        r.line(format!("  {}:{label} preserves {} cofinal {}", row.label, row.preserves_fip, row.cofinal));
    }
    let failed = !bad.is_empty();
    r.set("result", json!({ "suite": "cofinal", "mode": mode.to_string(), "report": result }));
    r.print();
    Ok(if failed { Status::CheckFailed } else { Status::Ok })
}

/// Every subset of `0..len`, as sorted index vectors.
fn all_subsets(len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << len).map(move |mask| (0..len).filter(|b| mask >> b & 1 == 1).collect())
}

fn algebra_suite(args: &CheckArgs) -> Result<Status> {
    let mut r_gen = rng(args.seed);
    let mut failures = Vec::new();
    let mut examined = 0;
    for sample in 0..args.samples {
        let family = random_family(&mut r_gen, 6, 8);
        if args.suite == Suite::Maximalizers {
            let (Ok(g), Ok(f)) = (greedy_maximal_fip(&family), forcing_maximal_fip(&family)) else {
                continue;
            };
            examined += 1;
            let maximal = |set: &BTreeSet<usize>| {
                has_fip(&family.restrict(set))
                    && (0..family.len()).filter(|k| !set.contains(k)).all(|k| {
                        let mut with = set.clone();
                        with.insert(k);
                        !has_fip(&family.restrict(&with))
                    })
            };
            if g != f || !maximal(&g) || !maximal(&f) {
                failures.push(json!({ "sample": sample, "family": family, "greedy": g, "forcing": f }));
            }
        } else {
            examined += 1;
            let reduced = reduce_nip_to_fip(&family, 2);
            for subset in all_subsets(family.len()) {
                let lhs = has_fip(&reduced.restrict(&subset));
                let rhs = has_nip(&family.restrict(&subset), 2);
                if lhs != rhs {
                    failures.push(json!({ "sample": sample, "family": family, "subset": subset }));
                    break;
                }
            }
        }
    }
    let name = suite_name(args.suite);
    let mut r = Report::new(format!("check {name} (seed {})", args.seed));
    r.line(format!("families examined: {examined}"));
    r.line(format!("counterexamples: {}", failures.len()));
    for f in &failures {
        r.line(format!("  {f}"));
    }
    let failed = !failures.is_empty();
    r.set("result", json!({ "suite": name, "examined": examined, "counterexamples": failures }));
    r.print();
    Ok(if failed { Status::CheckFailed } else { Status::Ok })
}

fn maximalize(path: &Path, method: Method) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let family = FiniteFamily::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut r = Report::new(format!("maximalize ({} members)", family.len()));
    let mut out = serde_json::Map::new();
    if matches!(method, Method::Greedy | Method::Both) {
        let g = greedy_maximal_fip(&family)?;
        r.line(format!("greedy: {g:?}"));
        out.insert("greedy".into(), json!(g));
    }
    if matches!(method, Method::Forcing | Method::Both) {
        let f = forcing_maximal_fip(&family)?;
        r.line(format!("forcing: {f:?}"));
        out.insert("forcing".into(), json!(f));
    }
    r.line("maximal among the listed members only".to_string());
    r.set("result", Value::Object(out));
    r.print();
    Ok(Status::Ok)
}

fn oracle_from(
    args: &OracleArgs,
    c: &Construction,
    scenario: &Scenario,
    selector: Option<Selector>,
) -> Result<OracleSet> {
    let recipe = match (&args.indices, args.path, args.coding, selector) {
        (Some(ix), _, _, _) => OracleRecipe::Explicit(ix.iter().copied().collect()),
        (None, Some(y), true, Some(sel)) => OracleRecipe::PathPlusCoding(y, sel),
        (None, Some(_), true, None) => bail!("--coding only applies to psi"),
        (None, Some(y), false, _) => OracleRecipe::PathOnly(y),
        (None, None, _, _) => bail!("give an oracle with --path or --indices"),
    };
    Ok(build_oracle(&c.tree, scenario, &recipe)?)
}

fn phi_cmd(input: &RunInput, oracle_args: &OracleArgs, bits: Option<usize>) -> Result<Status> {
    let (scenario, c) = load_run(input)?;
    let oracle = oracle_from(oracle_args, &c, &scenario, None)?;
    let lengths: Vec<usize> = match (bits, oracle_args.path) {
        (Some(n), _) => vec![n],
        (None, Some(y)) => (0..=y.len()).collect(),
        (None, None) => (0..=scenario.max_depth).collect(),
    };
    let mut r = Report::new(format!("phi ({} oracle elements)", oracle.len()));
    let mut rows = Vec::new();
    for n in lengths {
        let outcome = phi(&c.tree, &oracle, n);
        r.line(format!("n={n}: {}", output::outcome_text(&outcome)));
        rows.push(json!({ "bits": n, "outcome": outcome_json(&outcome) }));
    }
    r.set("result", json!({ "oracle": oracle.indices(), "phi": rows }));
    r.print();
    Ok(Status::Ok)
}

fn selector_for(mode: Mode, strategy: usize, nu: Option<Node>) -> Result<Selector> {
    match (mode, nu) {
        (Mode::Fip, None) => Ok(Selector::Fip { strategy }),
        (Mode::Fip, Some(_)) => bail!("--nu only applies in 2ip mode"),
        (Mode::TwoIp, Some(nu)) => Ok(Selector::Priority { strategy, nu }),
        (Mode::TwoIp, None) => bail!("2ip mode needs --nu"),
    }
}

fn psi_cmd(
    input: &RunInput,
    oracle_args: &OracleArgs,
    strategy: usize,
    nu: Option<Node>,
    budget: Option<usize>,
) -> Result<Status> {
    let (scenario, c) = load_run(input)?;
    if strategy >= scenario.i_max {
        bail!("strategy {strategy} is outside iMax {}", scenario.i_max);
    }
    let selector = selector_for(input.mode.into(), strategy, nu)?;
    let oracle = oracle_from(oracle_args, &c, &scenario, Some(selector))?;
    let budget = budget.unwrap_or(scenario.max_stage);
    let table = decode_k(&c.tree, &scenario, selector, &oracle, budget);
    let mut r = Report::new(format!("psi for {} (budget {budget})", selector.label(0)));
    let mut rows = Vec::new();
    for (j, outcome) in &table {
        r.line(format!("j={j}: {}", output::outcome_text(outcome)));
        rows.push(json!({ "j": j, "outcome": outcome_json(outcome) }));
    }
    let final_k = scenario.final_k();
    let matches = table.iter().all(|(j, o)| o.converged().is_some_and(|&b| (b == 1) == final_k.contains(j)));
    r.line(format!("agrees with final K: {matches}"));
    r.set(
        "result",
        json!({ "oracle": oracle.indices(), "budget": budget, "table": rows, "finalK": final_k, "agrees": matches }),
    );
    r.print();
    Ok(Status::Ok)
}

fn craft(args: &CraftArgs) -> Result<Status> {
    let mode: Mode = args.mode.into();
    if args.depth == 0 || args.depth > 12 {
        bail!("--depth must be between 1 and 12");
    }
    let params = match args.seed {
        Some(seed) => random_craft_params(&mut rng(seed), mode, args.depth, args.j_max),
        None => {
            let mut p = CraftParams::new(args.depth, args.j_max, args.k.iter().copied());
            p.i_max = args.i_max;
            p.target = args.target;
            p.margin = args.margin;
            p.other_actions = args.other_actions;
            p.early_injury = args.early_injury;
            if let Some(path) = args.path {
                p.path = path;
            }
            p
        }
    };
    let crafted = craft_lemma_main_scenario(mode, &params)?;
    let text = crafted.scenario.to_canonical_json();
    fs::write(&args.out, &text).with_context(|| format!("writing {}", args.out.display()))?;
    let mut r = Report::new(format!("scenario-craft ({mode})"));
    r.line(format!("path Y_d: {}", crafted.path));
    let selector = crafted.selector.map(|s| match s {
        Selector::Fip { strategy } => json!({ "strategy": strategy }),
        Selector::Priority { strategy, nu } => json!({ "strategy": strategy, "nu": nu }),
    });
    if let Some(s) = crafted.selector {
        r.line(format!("decode with: {}", s.label(0)));
    }
    r.line(format!("final K: {:?}", crafted.scenario.final_k()));
    r.line(format!("maxStage: {}", crafted.scenario.max_stage));
    r.line(format!("wrote {}", args.out.display()));
    r.set("result", json!({ "path": crafted.path, "selector": selector, "finalK": crafted.scenario.final_k() }));
    r.print();
    Ok(Status::Ok)
}

fn report(input: &RunInput, path: Node, strategy: Option<usize>, nu: Option<Node>, max_size: usize) -> Result<Status> {
    let mode: Mode = input.mode.into();
    let (scenario, c) = load_run(input)?;
    if path.len() > scenario.max_depth {
        bail!("path {path} is deeper than maxDepth {}", scenario.max_depth);
    }
    if max_size == 0 {
        bail!("--max-size must be positive");
    }
    let mut r = Report::new(format!("report ({mode}, depth {}, path {path})", scenario.max_depth));
    r.line(format!("labels: {}, shared witnesses: {}", c.tree.len(), (c.family.next_witness() - 1) / 2));
    r.line(format!(
        "records: {} PLACE, {} DISCARD, {} SKIP",
        c.trace.count("PLACE"),
        c.trace.count("DISCARD"),
        c.trace.count("SKIP")
    ));

    let finite = check_finite_paths(&c.tree, &c.family, max_size, true);
    r.line(format!("common intersection vs common path: {} counterexamples", finite.counterexample_count));
    let mut failed = !finite.holds();
    let pairwise =
        (mode == Mode::TwoIp && max_size >= 2).then(|| check_pairwise_paths(&c.tree, &c.family, max_size, true));
    if let Some(p) = &pairwise {
        r.line(format!("pairwise intersection vs common path: {} counterexamples", p.counterexample_count));
        failed |= !p.holds();
    }

    let genericity: Vec<Value> = (0..scenario.i_max)
        .map(|i| {
            let g = meets_or_avoids(&path, scenario.events_for(i), true);
            let text = match g {
                Genericity::Meets(t) => format!("meets at {t}"),
                Genericity::Avoids(t) => format!("avoids at {t}"),
                Genericity::Undecided => "neither meets nor avoids".to_string(),
            };
            r.line(format!("W_{i}: {text}"));
            json!({ "i": i, "classification": text })
        })
        .collect();

    let universe = Universe::truncated(&c.tree, path.len());
    let path_oracle = build_oracle(&c.tree, &scenario, &OracleRecipe::PathOnly(path))?;
    let path_max = check_maximal_within_universe(&c.family, &path_oracle, &universe);
    r.line(format!(
        "path oracle: FIP {}, maximal {} ({} addable)",
        path_max.has_fip,
        path_max.is_maximal(),
        path_max.addable.len()
    ));
    let mut decoding = Value::Null;
    let mut coding_max = Value::Null;
    if let Some(i) = strategy {
        let selector = selector_for(mode, i, nu)?;
        let oracle = build_oracle(&c.tree, &scenario, &OracleRecipe::PathPlusCoding(path, selector))?;
        let m = check_maximal_within_universe(&c.family, &oracle, &universe);
        r.line(format!("path + coding oracle: FIP {}, maximal {}", m.has_fip, m.is_maximal()));
        let table = decode_k(&c.tree, &scenario, selector, &oracle, scenario.max_stage);
        let bits: Vec<String> = table.values().map(output::outcome_text).collect();
        r.line(format!("decoded K table: [{}]", bits.join(", ")));
        decoding = json!(table.iter().map(|(j, o)| json!({ "j": j, "outcome": outcome_json(o) })).collect::<Vec<_>>());
        coding_max = json!(m);
    }
    r.line(format!("maximality is {}", fiplab::crafting::BOUNDED_UNIVERSE_CAVEAT));
    r.set(
        "result",
        json!({
            "mode": mode.to_string(),
            "labels": c.tree.len(),
            "finitePaths": finite,
            "pairwise": pairwise,
            "genericity": genericity,
            "pathOracle": path_max,
            "codingOracle": coding_max,
            "decoding": decoding,
            "finalK": scenario.final_k(),
        }),
    );
    r.print();
    Ok(if failed { Status::CheckFailed } else { Status::Ok })
}
