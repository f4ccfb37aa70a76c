//! Command-line front end for the variety-seeking jump game library.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success |
//! | 1 | unexpected failure |
//! | 2 | invalid input (bad flags, parameters or files) |
//! | 3 | exhaustive search over the state budget |
//! | 4 | at least one checked bound failed |
//! | 5 | constructor not applicable or failed |

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use varietyjump::construct::{
    construct_cylinder_equilibrium, construct_torus_equilibrium, construct_tree_equilibrium, Construction,
};
use varietyjump::dynamics::{find_irc, run_dynamics, DynamicsStatus, ResponsePolicy};
use varietyjump::game::{equilibrium_witness, metrics};
use varietyjump::graph::{make_cylinder, make_torus, FamilyTag, GraphFamily};
use varietyjump::io::{self, InstanceFile};
use varietyjump::oracle::{
    analyze, analyze_both, check_paper_bounds, paper_small_sweep, random_irc_experiment, BoundReport,
    ExperimentConfig, InstanceAnalysis, Objective,
};
use varietyjump::{Assignment, Error, Instance, TypeProfile, DEFAULT_BUDGET};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_FAILED_BOUND: u8 = 4;
const EXIT_CONSTRUCTION: u8 = 5;

#[derive(Parser)]
#[command(name = "varietyjump", version, about = "Variety-seeking jump games on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file from a graph family
    Gen {
        /// Family name: line, cycle, clique, tree, cylinder, torus, clique-lines,
        /// clique-cycle, ring-of-cliques, pos-gadget, random-regular
        family: String,
        /// Integer parameters of the family (tree and random-regular take their seed from --seed)
        params: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report utilities, objectives and stability of an assignment
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Run improving-response dynamics
    Dynamics {
        #[command(flatten)]
        source: Source,
        /// Start assignment; defaults to types packed in node order
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Policy::Best)]
        policy: Policy,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Write the jump trace here
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the final assignment here
        #[arg(long)]
        final_state: Option<PathBuf>,
    },
    /// Search the whole state graph for an improving-response cycle
    IrcSearch {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        search: Search,
    },
    /// Build an equilibrium on a tree, 2×m cylinder or torus
    Construct {
        #[command(flatten)]
        source: Source,
        /// Print the construction case and certificate
        #[arg(long)]
        explain: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive optimum, equilibria and price ratios
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        search: Search,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Sw)]
        objective: ObjectiveArg,
    },
    /// Check the closed-form equilibrium and price-of-anarchy bounds
    Bounds {
        /// Named sweep to run instead of a single instance
        #[arg(long, value_enum)]
        sweep: Option<Sweep>,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        search: Search,
    },
    /// Run the random-graph cycle experiment described by a TOML config
    Experiment {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the table (or JSON with --json) here
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Export the graph, optionally coloured by an assignment, as Graphviz DOT
    ExportDot {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Where the instance comes from: a file, or a family with a profile.
#[derive(Args)]
struct Source {
    /// Instance file
    #[arg(conflicts_with_all = ["family", "params"])]
    instance: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    params: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    profile: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Search {
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    First,
    Best,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Sw,
    Ce,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sweep {
    PaperSmall,
}

/// Failure that maps to a fixed exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Exit(code, _)) = cause.downcast_ref::<Exit>() {
            return *code;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                Error::Construction(_) | Error::Inapplicable(_) | Error::GaveUp { .. } => EXIT_CONSTRUCTION,
                Error::InvalidParameter(_)
                | Error::PreconditionViolation(_)
                | Error::InapplicablePotential { .. }
                | Error::InvalidInput(_) => EXIT_INVALID_INPUT,
            };
        }
    }
    EXIT_FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Exit(EXIT_INVALID_INPUT, msg.into()).into()
}

fn family(name: &str, mut params: Vec<u64>, seed: u64) -> anyhow::Result<GraphFamily> {
    let tag: FamilyTag = name.parse()?;
    match tag {
        FamilyTag::Tree | FamilyTag::RandomRegular => params.push(seed),
        FamilyTag::Custom => return Err(invalid("the custom family has no generator; write an instance file")),
        _ => {}
    }
    Ok(GraphFamily::new(tag, params))
}

fn build(fam: &GraphFamily, profile: Vec<usize>) -> anyhow::Result<Instance> {
    let (graph, roles) = fam.build()?;
    let profile = TypeProfile::new(profile)?;
    Ok(Instance::with_roles(graph, profile, roles)?)
}

impl Source {
    fn load(&self) -> anyhow::Result<InstanceFile> {
        match (&self.instance, &self.family) {
            (Some(path), None) => {
                if !self.profile.is_empty() {
                    return Err(invalid("--profile is taken from the instance file"));
                }
                Ok(io::read_instance(path)?)
            }
            (None, Some(name)) => {
                if self.profile.is_empty() {
                    return Err(invalid("--family needs --profile"));
                }
                let fam = family(name, self.params.clone(), self.seed)?;
                let instance = build(&fam, self.profile.clone())?;
                Ok(InstanceFile { instance, family: Some(fam) })
            }
            _ => Err(invalid("give either an instance file or --family with --params and --profile")),
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => Ok(io_write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn io_write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn packed_start(instance: &Instance) -> anyhow::Result<Assignment> {
    let mut cells = vec![None; instance.node_count()];
    let mut v = 0;
    for (t, &c) in instance.profile().counts().iter().enumerate() {
        for _ in 0..c {
            cells[v] = Some(t as u8);
            v += 1;
        }
    }
    Ok(Assignment::new(instance, &cells)?)
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Gen { family: name, params, profile, seed, output } => {
            let fam = family(&name, params, seed)?;
            let instance = build(&fam, profile)?;
            emit(output.as_deref(), &io::instance_to_string(&instance, Some(&fam)))
        }
        Command::Check { source, assignment } => {
            let file = source.load()?;
            let inst = &file.instance;
            let a = io::read_assignment(&assignment, inst)?;
            let m = metrics(inst, &a);
            println!("social welfare: {}", m.sw);
            println!("colorful edges: {}", m.ce);
            println!("monochromatic edges: {}", m.mono);
            match equilibrium_witness(inst, &a) {
                None => println!("EQUILIBRIUM"),
                Some(j) => println!("NOT EQUILIBRIUM: improving jump {j}"),
            }
            Ok(())
        }
        Command::Dynamics { source, start, policy, steps, output, final_state } => {
            let file = source.load()?;
            let inst = &file.instance;
            let start = match start {
                Some(path) => io::read_assignment(&path, inst)?,
                None => packed_start(inst)?,
            };
            let policy = match policy {
                Policy::First => ResponsePolicy::FirstImproving,
                Policy::Best => ResponsePolicy::BestResponse,
                Policy::Random => ResponsePolicy::RandomImproving(source.seed),
            };
            let run = run_dynamics(inst, &start, policy, steps)?;
            match run.status {
                DynamicsStatus::Equilibrium => println!("equilibrium after {} jumps", run.trace.len()),
                DynamicsStatus::StateRevisited(i) => {
                    println!("cycle of {} jumps entered after {} jumps", run.trace.len() - i, i)
                }
                DynamicsStatus::StepLimit => println!("step limit reached after {} jumps", run.trace.len()),
            }
            println!("final: {}", run.final_state);
            let trace = io::trace_to_string(&run.trace);
            match output {
                Some(path) => io_write(&path, &trace)?,
                None => print!("{trace}"),
            }
            if let Some(path) = final_state {
                io::write_assignment(&path, &run.final_state)?;
            }
            Ok(())
        }
        Command::IrcSearch { source, search } => {
            let file = source.load()?;
            let irc = find_irc(&file.instance, search.budget)?;
            if search.json {
                let value = match &irc {
                    None => json!({ "acyclic": true }),
                    Some(c) => json!({
                        "acyclic": false,
                        "start": c.start.occupancy(),
                        "jumps": c.jumps.iter().map(|j| j.to_string()).collect::<Vec<_>>(),
                    }),
                };
                println!("{}", serde_json::to_string_pretty(&value)?);
                return Ok(());
            }
            match irc {
                None => println!("ACYCLIC"),
                Some(c) => {
                    println!("IRC of {} jumps", c.len());
                    println!("start: {}", c.start);
                    print!("{}", io::trace_to_string(&c.jumps));
                }
            }
            Ok(())
        }
        Command::Construct { source, explain, output } => {
            let file = source.load()?;
            let c = construct(&file)?;
            if explain {
                println!("case: {}", c.case);
                println!("certificate: {}", c.certificate);
            }
            let text = io::assignment_to_string(&c.assignment);
            emit(output.as_deref(), &text)
        }
        Command::Analyze { source, search, objective } => {
            let file = source.load()?;
            let objective = match objective {
                ObjectiveArg::Sw => Objective::Sw,
                ObjectiveArg::Ce => Objective::Ce,
            };
            let a = analyze(&file.instance, objective, search.budget, search.jobs)?;
            if search.json {
                println!("{}", serde_json::to_string_pretty(&analysis_json(&a))?);
            } else {
                print!("{}", analysis_text(&a));
            }
            Ok(())
        }
        Command::Bounds { sweep, source, search } => {
            let instances = match sweep {
                Some(Sweep::PaperSmall) => paper_small_sweep()?,
                None => vec![("instance".to_string(), source.load()?.instance)],
            };
            let mut failed = 0;
            let mut out = Vec::new();
            for (name, inst) in &instances {
                let (sw, ce) = analyze_both(inst, search.budget, search.jobs)?;
                let report = check_paper_bounds(inst, &sw, &ce);
                failed += report.failures().count();
                out.push((name.clone(), report));
            }
            if search.json {
                println!("{}", serde_json::to_string_pretty(&bounds_json(&out, failed))?);
            } else {
                print!("{}", bounds_text(&out, failed));
            }
            if failed > 0 {
                return Err(Exit(EXIT_FAILED_BOUND, format!("{failed} bound check(s) failed")).into());
            }
            Ok(())
        }
        Command::Experiment { config, jobs, output, json } => {
            let text = io_read(&config)?;
            let config: ExperimentConfig =
                toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", config.display())))?;
            let report = random_irc_experiment(&config, jobs)?;
            let text = if json { serde_json::to_string_pretty(&report)? + "\n" } else { report.to_table() };
            emit(output.as_deref(), &text)
        }
        Command::ExportDot { source, assignment, output } => {
            let file = source.load()?;
            let a = assignment.map(|p| io::read_assignment(&p, &file.instance)).transpose()?;
            emit(output.as_deref(), &io::to_dot(&file.instance, a.as_ref()))
        }
    }
}

fn io_read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

/// Picks the constructor from the recorded family, or by recognising the graph.
fn construct(file: &InstanceFile) -> anyhow::Result<Construction> {
    let inst = &file.instance;
    let g = inst.graph();
    if let Some(fam) = &file.family {
        if fam.tag == FamilyTag::Torus {
            let [m1, m2] = fam.params[..] else { bail!(invalid("torus family needs two parameters")) };
            return Ok(construct_torus_equilibrium(inst, m1 as usize, m2 as usize)?);
        }
    }
    if g.is_tree() {
        return Ok(construct_tree_equilibrium(inst)?);
    }
    let nodes = g.node_count();
    if nodes % 2 == 0 && nodes >= 6 && *g == make_cylinder(nodes / 2)? {
        return Ok(construct_cylinder_equilibrium(inst)?);
    }
    for m2 in 3..=nodes / 3 {
        if nodes % m2 == 0 && nodes / m2 >= m2 && make_torus(nodes / m2, m2).is_ok_and(|t| t == *g) {
            return Ok(construct_torus_equilibrium(inst, nodes / m2, m2)?);
        }
    }
    Err(anyhow!(Error::Inapplicable("no constructor for this graph: expected a tree, a 2×m cylinder or a torus".into())))
}

fn ratio(r: Option<varietyjump::oracle::PriceRatio>) -> String {
    r.map_or_else(|| "undefined (no equilibrium)".into(), |r| r.to_string())
}

fn analysis_text(a: &InstanceAnalysis) -> String {
    let mut s = format!("objective: {}\nstates: {}\n", a.objective, a.states);
    s += &format!("optimum: {} at {}\n", a.optimum_value, a.optimum_witness);
    s += &format!("equilibria: {}\n", a.equilibria_count);
    if let (Some(lo), Some(hi), Some(lw), Some(hw)) = (a.min_eq_value, a.max_eq_value, &a.min_eq_witness, &a.max_eq_witness) {
        s += &format!("worst equilibrium: {lo} at {lw}\nbest equilibrium: {hi} at {hw}\n");
    }
    s += &format!("PoA: {}\nPoS: {}\n", ratio(a.poa), ratio(a.pos));
    s
}

fn analysis_json(a: &InstanceAnalysis) -> serde_json::Value {
    json!({
        "objective": a.objective.name(),
        "states": a.states,
        "optimum": a.optimum_value,
        "optimum_witness": a.optimum_witness.occupancy(),
        "equilibria": a.equilibria_count,
        "worst_equilibrium": a.min_eq_value,
        "best_equilibrium": a.max_eq_value,
        "poa": a.poa.map(|r| r.to_string()),
        "pos": a.pos.map(|r| r.to_string()),
    })
}

fn bounds_text(reports: &[(String, BoundReport)], failed: usize) -> String {
    let mut s = String::new();
    for (name, report) in reports {
        s += &format!("{name}\n");
        for c in &report.checks {
            s += &format!("  {} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
    }
    s += &format!("{failed} failed bound(s)\n");
    s
}

fn bounds_json(reports: &[(String, BoundReport)], failed: usize) -> serde_json::Value {
    let instances: Vec<_> = reports
        .iter()
        .map(|(name, r)| {
            json!({
                "instance": name,
                "checks": r.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "failed": failed, "instances": instances })
}
