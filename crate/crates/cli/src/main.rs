//! `crn`: structural analysis, certification, steady-state search and lifting
//! for mass-action reaction networks.
//!
//! Machine output is JSON on stdout (`family` prints network text). A run
//! manifest goes to `--manifest` or, failing that, to stderr as one JSON line.
//! Exit codes: 0 ok, 2 input error, 3 undecided under `--strict`, 4 numeric
//! failure.

mod exit;
mod input;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use crn_core::numerics::ClassSolver;
use crn_core::{
    canonical_serialize, certify_deficiency_zero, certify_open, continue_to_next_cycle, deficiency,
    lift_steady_state, mapk_cascade, open_species, phosphorylation_cycle, project_complement, small_cascade,
    LiftResult, RateAssignment, SearchConfig, Verdict,
};
use serde_json::{json, Value};

use exit::{Failure, Outcome};
use input::{number_list, species_list, Inputs};
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "crn", version, about = "Reaction network analysis and multistationarity tools")]
struct Cli {
    /// Write the run manifest to this file instead of stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Human-readable tables on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: complexes, linkage classes, deficiency, conservation laws.
    Analyze {
        file: PathBuf,
        /// Analyse the projection removing these species (comma separated).
        #[arg(long)]
        project: Option<String>,
    },
    /// Monostationarity certificate, optionally for the network with species opened.
    Certify {
        file: PathBuf,
        /// Species to open (comma separated).
        #[arg(long)]
        open: Option<String>,
        /// Exit with code 3 when the verdict is undecided.
        #[arg(long)]
        strict: bool,
    },
    /// Multistart steady-state search in one compatibility class.
    Search {
        file: PathBuf,
        /// Rates as a JSON object; defaults to rates annotated in the network file.
        #[arg(long)]
        rates: Option<PathBuf>,
        /// Conserved totals (comma separated, one per conservation law).
        #[arg(long, conflicts_with = "from_state", required_unless_present = "from_state")]
        totals: Option<String>,
        /// Take the totals of the first state in this file.
        #[arg(long)]
        from_state: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, env = "CRN_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Lift steady states of the n-site cycle with S<site> opened to n+1 sites.
    Lift {
        n: usize,
        #[arg(long, default_value_t = 0)]
        site: usize,
        #[arg(long)]
        rates: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Rate of the two added direct reactions.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Residual tolerance the input states must meet.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Newton-refine the input states in a common class first.
        #[arg(long)]
        refine: bool,
        /// Continue through this many additional sites.
        #[arg(long, default_value_t = 0)]
        chain: usize,
        /// Binding rate of the intermediate chains.
        #[arg(long, default_value_t = 2.0)]
        on: f64,
        /// Unbinding rate of the intermediate chains.
        #[arg(long, default_value_t = 2000.0)]
        off: f64,
        /// Extra multistart search per continuation level.
        #[arg(long, default_value_t = 0)]
        starts: usize,
        #[arg(long, env = "CRN_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Print a family network as text.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// n-site phosphorylation cycle.
    Phospho {
        n: usize,
        /// Species to open (comma separated).
        #[arg(long)]
        open: Option<String>,
    },
    /// Two-layer cascade.
    Cascade,
    /// Three-layer MAPK cascade.
    Mapk,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Certify { .. } => "certify",
            Command::Search { .. } => "search",
            Command::Lift { .. } => "lift",
            Command::Family { .. } => "family",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Search { seed, .. } | Command::Lift { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

/// What a command produced: stdout text and the exit code on success.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn json(v: &impl serde::Serialize) -> Outcome<Self> {
        Ok(Output {
            text: serde_json::to_string_pretty(v)? + "\n",
            code: exit::OK,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut manifest = RunManifest::new(
        cli.command.name(),
        std::env::args().skip(1).collect(),
        cli.command.seed(),
    );
    let mut inputs = Inputs::default();
    let result = run(&cli.command, &mut inputs, cli.verbose);
    manifest.input_hashes = inputs.hashes;
    let (text, code) = match result {
        Ok(out) => (out.text, out.code),
        Err(f) => {
            eprintln!("error: {f}");
            (String::new(), f.code)
        }
    };
    print!("{text}");
    manifest.finish(&text, code, start.elapsed().as_secs_f64());
    let line = serde_json::to_string(&manifest).expect("manifest serialises");
    match &cli.manifest {
        Some(path) => {
            if let Err(e) = std::fs::write(path, line + "\n") {
                eprintln!("error: writing manifest {}: {e}", path.display());
                return ExitCode::from(exit::INPUT as u8);
            }
        }
        None => eprintln!("{line}"),
    }
    ExitCode::from(code as u8)
}

fn run(cmd: &Command, inputs: &mut Inputs, verbose: bool) -> Outcome<Output> {
    match cmd {
        Command::Analyze { file, project } => {
            let (net, _) = inputs.network(file)?;
            let net = match project {
                Some(set) => project_complement(&net, &species_list(set))?.collapsed(),
                None => net,
            };
            let report = deficiency(&net);
            if verbose {
                eprintln!(
                    "complexes {}  linkage classes {}  rank {}  deficiency {}  weakly reversible {}",
                    report.complexes, report.linkage_classes, report.stoich_dim, report.deficiency, report.weakly_reversible
                );
            }
            Output::json(&report)
        }
        Command::Certify { file, open, strict } => {
            let (net, _) = inputs.network(file)?;
            let cert = match open {
                Some(set) => certify_open(&net, &species_list(set))?,
                None => certify_deficiency_zero(&net),
            };
            if cert.verdict == Verdict::Monostationary && !cert.replay()? {
                return Err(Failure::numeric("certificate trace failed to replay"));
            }
            if verbose {
                for step in &cert.trace {
                    eprintln!("{:<16} {}", serde_json::to_string(&step.rule)?, step.outputs);
                }
                eprintln!("verdict {:?}", cert.verdict);
            }
            let mut out = Output::json(&cert)?;
            if *strict && cert.verdict == Verdict::Undecided {
                out.code = exit::UNDECIDED;
            }
            Ok(out)
        }
        Command::Search {
            file,
            rates,
            totals,
            from_state,
            starts,
            seed,
        } => {
            let (net, inline) = inputs.network(file)?;
            let rates = inputs.rates(&net, rates.as_ref(), inline)?;
            let solver = ClassSolver::new(&net, &rates)?;
            let t = match (totals, from_state) {
                (Some(t), _) => number_list(t)?,
                (None, Some(path)) => solver.totals(&inputs.states(path, &net)?[0]),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let cfg = SearchConfig {
                num_starts: *starts,
                seed: *seed,
                ..Default::default()
            };
            let found = solver.search(&t, &cfg)?;
            let nondeg = found.iter().filter(|r| r.nondegenerate).count();
            eprintln!("found {} distinct states ({nondeg} nondegenerate)", found.len());
            if verbose {
                eprintln!("{}", net.species_names().join("\t"));
                for r in &found {
                    let row: Vec<String> = r.x.iter().map(|v| format!("{v:.6e}")).collect();
                    eprintln!("{}", row.join("\t"));
                }
            }
            Output::json(&json!({
                "species": net.species_names(),
                "totals": t,
                "states": found,
            }))
        }
        Command::Lift {
            n,
            site,
            rates,
            state,
            a,
            tol,
            refine,
            chain,
            on,
            off,
            starts,
            seed,
        } => lift(inputs, LiftArgs {
            n: *n,
            site: *site,
            rates,
            state,
            a: *a,
            tol: *tol,
            refine: *refine,
            chain: *chain,
            intermediate: (*on, *off),
            cfg: SearchConfig {
                num_starts: *starts,
                seed: *seed,
                ..Default::default()
            },
            verbose,
        }),
        Command::Family { family } => {
            let net = match family {
                FamilyCommand::Phospho { n, open } => {
                    let base = phosphorylation_cycle(*n)?;
                    match open {
                        Some(set) => open_species(&base, &species_list(set))?,
                        None => base,
                    }
                }
                FamilyCommand::Cascade => small_cascade(),
                FamilyCommand::Mapk => mapk_cascade(),
            };
            Ok(Output {
                text: canonical_serialize(&net),
                code: exit::OK,
            })
        }
    }
}

struct LiftArgs<'a> {
    n: usize,
    site: usize,
    rates: &'a PathBuf,
    state: &'a PathBuf,
    a: f64,
    tol: f64,
    refine: bool,
    chain: usize,
    intermediate: (f64, f64),
    cfg: SearchConfig,
    verbose: bool,
}

fn lift(inputs: &mut Inputs, args: LiftArgs) -> Outcome<Output> {
    if !(args.a > 0.0 && args.a.is_finite()) {
        return Err(Failure::input(format!("--a must be positive, got {}", args.a)));
    }
    let base = open_species(&phosphorylation_cycle(args.n)?, &[format!("S{}", args.site)])?;
    let rates = inputs.rates(&base, Some(args.rates), Default::default())?;
    let mut states = inputs.states(args.state, &base)?;
    if args.refine {
        let solver = ClassSolver::new(&base, &rates)?;
        let (_, refined) = solver.refine_in_common_class(&states, 1e-12, 200);
        states = refined
            .into_iter()
            .map(|r| r.map(|r| r.x).ok_or_else(|| Failure::numeric("refinement did not converge")))
            .collect::<Outcome<_>>()?;
    }
    let lift_all = |n: usize, rates: &RateAssignment, states: &[Vec<f64>]| -> Outcome<Vec<LiftResult>> {
        states
            .iter()
            .map(|x| Ok(lift_steady_state(n, args.site, rates, x, args.a, args.tol)?))
            .collect()
    };
    let lifts = lift_all(args.n, &rates, &states)?;
    let mut levels: Vec<Value> = Vec::new();
    let (mut n, mut current) = (args.n, lifts.clone());
    for _ in 0..args.chain {
        let next = continue_to_next_cycle(&current, args.intermediate, &args.cfg)?;
        let good: Vec<Vec<f64>> = next.states.iter().filter(|s| s.nondegenerate).map(|s| s.x.clone()).collect();
        if args.verbose {
            eprintln!("n = {}: {} states, {} nondegenerate", next.n, next.states.len(), good.len());
        }
        levels.push(json!({
            "n": next.n,
            "states": next.states.len(),
            "nondegenerate": good.len(),
            "continuation": next,
        }));
        if good.is_empty() {
            return Err(Failure::numeric(format!("no nondegenerate state at n = {}", n + 1)));
        }
        n += 1;
        current = lift_all(n, &next.rates, &good)?;
    }
    Output::json(&json!({ "lifts": lifts, "levels": levels }))
}
