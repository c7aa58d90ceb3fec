//! `descs`: command-line front end for supervisor synthesis and checking.
//!
//! Exit codes: 0 positive verdict or output written, 1 negative verdict,
//! 2 usage or input error, 3 state limit exceeded, 4 output write failure.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use descs::format::{parse_automaton_with, parse_det_automaton, to_dot, write_with_names, ParseOptions};
use descs::{
    bisimilar, canonicalize, check_existence_with, determinize, f_syn, inclusion_witness, is_simulated_by,
    parallel, supremal_fixpoint, supremal_formula, synthesize_supervisor_with, verify_closed_loop_with,
    Automaton, Budget, CheckReport, ClosedLoopVerdict, DetAutomaton, Error, EventAlphabet, SupremalResult,
    DEFAULT_STATE_LIMIT,
};

#[derive(Parser, Debug)]
#[command(name = "descs", version, about = "Bisimilarity enforcing supervisor synthesis for discrete-event systems")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Maximum number of states any construction may create.
    #[arg(long, global = true, env = "DESCS_STATE_LIMIT", default_value_t = DEFAULT_STATE_LIMIT)]
    state_limit: usize,

    /// Write the `key = value` report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    /// Print one JSON object per run on standard output.
    #[arg(long, global = true)]
    machine: bool,

    /// Seed recorded in the report; the commands themselves are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test whether a bisimilarity enforcing supervisor exists.
    Check { plant: PathBuf, spec: PathBuf },
    /// Write the supervisor (the specification with its uncontrollable augment).
    Synthesize { plant: PathBuf, spec: PathBuf, out: PathBuf },
    /// Write the supremal controllable sub-specification.
    Supremal {
        plant: PathBuf,
        spec: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Fixpoint)]
        method: MethodArg,
    },
    /// Check a supervisor against a plant and a specification.
    Verify { plant: PathBuf, supervisor: PathBuf, spec: PathBuf },
    /// Strong bisimilarity of two automata.
    Bisim { a: PathBuf, b: PathBuf },
    /// Whether the first automaton is simulated by the second.
    Sim { a: PathBuf, b: PathBuf },
    /// Parallel composition.
    Compose {
        a: PathBuf,
        b: PathBuf,
        out: PathBuf,
        /// Also write a Graphviz rendering to `<OUT>.dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Minimal deterministic automaton with the same languages.
    Det { input: PathBuf, out: PathBuf },
    /// Synchronous state merger of a plant.
    Fsyn { input: PathBuf, out: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Fixpoint,
    Formula,
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_STATE_LIMIT: u8 = 3;
const EXIT_WRITE: u8 = 4;

/// A failure that ends the run with a nonzero exit code and no verdict.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn from_core(context: &str, e: Error) -> Self {
        let code = match e {
            Error::StateLimitExceeded { .. } => EXIT_STATE_LIMIT,
            _ => EXIT_INPUT,
        };
        let message = match e {
            Error::Parse { line, message } => format!("{context}:{line}: {message}"),
            other => format!("{context}: {other}"),
        };
        Failure { code, message }
    }
}

/// Ordered `key = value` pairs.
#[derive(Debug, Default)]
struct Report(Vec<(String, String)>);

impl Report {
    fn set(&mut self, key: &str, value: impl Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

struct Ctx {
    budget: Budget,
    report: Report,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, allow_reserved: bool) -> Result<Automaton, Failure> {
    parse_automaton_with(&read(path)?, ParseOptions { allow_reserved })
        .map_err(|e| Failure::from_core(&path.display().to_string(), e))
}

fn load_det(path: &Path) -> Result<DetAutomaton, Failure> {
    parse_det_automaton(&read(path)?, ParseOptions::default())
        .map_err(|e| Failure::from_core(&path.display().to_string(), e))
}

/// Plant and specification over one alphabet, the plant reordered to the specification's.
fn load_pair(plant: &Path, spec: &Path) -> Result<(Automaton, DetAutomaton), Failure> {
    let g = load(plant, false)?;
    let r = load_det(spec)?;
    let g = g
        .aligned_to(r.alphabet())
        .map_err(|e| Failure::input(format!("{} vs {}: {e}", plant.display(), spec.display())))?
        .into_owned();
    Ok((g, r))
}

fn core<T>(r: descs::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::from_core("error", e))
}

/// Writes `a` canonically to `out` with its name map beside it at `<out>.names`.
fn write_output(ctx: &mut Ctx, out: &Path, a: &Automaton) -> Result<(), Failure> {
    let (text, names) = write_with_names(a);
    let write = |p: &Path, s: &str| {
        fs::write(p, s).map_err(|e| Failure {
            code: EXIT_WRITE,
            message: format!("{}: {e}", p.display()),
        })
    };
    write(out, &text)?;
    write(&with_suffix(out, "names"), &names)?;
    ctx.report.set("output", out.display());
    ctx.report.set("output_states", descs::accessible(a).num_states());
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn report_check(ctx: &mut Ctx, report: &CheckReport) {
    let rep = &mut ctx.report;
    rep.set("result", if report.controllable { "controllable" } else { "not-controllable" });
    let mut failed = Vec::new();
    if report.dead_witness.is_some() {
        failed.push("dead");
    }
    if report.unctrl_witness.is_some() {
        failed.push("uncontrollable");
    }
    if report.marking_witness.is_some() {
        failed.push("marking");
    }
    if !failed.is_empty() {
        rep.set("failed", failed.join(" "));
    }
    let shortest = match (&report.dead_witness, &report.unctrl_witness) {
        (Some(d), Some(u)) => Some(if u.0.len() < d.0.len() { u } else { d }),
        (d, u) => d.as_ref().or(u.as_ref()),
    };
    if let Some(w) = shortest {
        rep.set("unctrl_or_dead_witness", w);
    }
    if let Some(w) = &report.dead_witness {
        rep.set("dead_witness", w);
    }
    if let Some(w) = &report.unctrl_witness {
        rep.set("unctrl_witness", w);
    }
    if let Some(m) = &report.marking_witness {
        rep.set("marking_witness", &m.trace);
        rep.set("marking_spec_state", &m.spec_state);
        rep.set("marking_plant_state", &m.plant_state);
    }
    rep.set("product_states", report.product_states);
}

/// Shortest string on which the languages of `a` and `b` differ, if any.
fn language_difference(a: &Automaton, b: &Automaton, budget: &Budget) -> Result<Option<String>, Failure> {
    let da = core(determinize(a, budget))?;
    let db = core(determinize(b, budget))?;
    let w = match core(inclusion_witness(&da, &db))? {
        Some(w) => Some(w),
        None => core(inclusion_witness(&db, &da))?,
    };
    Ok(w.map(|w| da.alphabet().render(&w).join(" ")))
}

fn same_alphabet(a: &Automaton, b: &Automaton, pa: &Path, pb: &Path) -> Result<Automaton, Failure> {
    b.aligned_to(a.alphabet())
        .map(|c| c.into_owned())
        .map_err(|e| Failure::input(format!("{} vs {}: {e}", pa.display(), pb.display())))
}

fn alphabet_union(a: &EventAlphabet, b: &EventAlphabet) -> Result<EventAlphabet, Failure> {
    a.union(b).map_err(|e| Failure::input(e.to_string()))
}

fn run(command: &Command, ctx: &mut Ctx) -> Result<u8, Failure> {
    let verdict = |ok: bool| if ok { 0 } else { EXIT_NEGATIVE };
    match command {
        Command::Check { plant, spec } => {
            let (g, r) = load_pair(plant, spec)?;
            ctx.report.set("plant_states", g.num_states());
            ctx.report.set("spec_states", r.num_states());
            let report = core(check_existence_with(&r, &g, &ctx.budget))?;
            report_check(ctx, &report);
            Ok(verdict(report.controllable))
        }
        Command::Synthesize { plant, spec, out } => {
            let (g, r) = load_pair(plant, spec)?;
            match synthesize_supervisor_with(&r, &g, &ctx.budget) {
                Ok(s) => {
                    ctx.report.set("result", "controllable");
                    write_output(ctx, out, &s)?;
                    Ok(0)
                }
                Err(Error::NotControllable(report)) => {
                    report_check(ctx, &report);
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(Failure::from_core("error", e)),
            }
        }
        Command::Supremal {
            plant,
            spec,
            out,
            method,
        } => {
            let (g, r) = load_pair(plant, spec)?;
            let res: SupremalResult = match method {
                MethodArg::Fixpoint => core(supremal_fixpoint(&r, &g, &ctx.budget))?,
                MethodArg::Formula => core(supremal_formula(&r, &g, &ctx.budget))?,
            };
            ctx.report.set("method", format!("{:?}", res.method).to_lowercase());
            if let Some(k) = res.iterations {
                ctx.report.set("iterations", k);
                let sizes: Vec<String> = res.z_sizes.iter().map(|n| n.to_string()).collect();
                ctx.report.set("z_sizes", sizes.join(" "));
            }
            match res.sub_spec() {
                Some(m) => {
                    ctx.report.set("result", "nonempty");
                    write_output(ctx, out, m)?;
                    Ok(0)
                }
                None => {
                    ctx.report.set("result", "empty");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Verify { plant, supervisor, spec } => {
            let (g, r) = load_pair(plant, spec)?;
            let s = load(supervisor, true)?;
            let s = same_alphabet(&g, &s, plant, supervisor)?;
            match core(verify_closed_loop_with(&g, &s, &r, &ctx.budget))? {
                ClosedLoopVerdict::Enforced { closed_loop, .. } => {
                    ctx.report.set("result", "bisimilar");
                    ctx.report.set("closed_loop_states", closed_loop.num_states());
                    Ok(0)
                }
                ClosedLoopVerdict::NotBisimilar {
                    closed_loop_state,
                    spec_state,
                    trace,
                } => {
                    ctx.report.set("result", "not-bisimilar");
                    ctx.report.set("closed_loop_state", closed_loop_state);
                    ctx.report.set("spec_state", spec_state);
                    if let Some(t) = trace {
                        ctx.report.set("witness", t);
                    }
                    Ok(EXIT_NEGATIVE)
                }
                ClosedLoopVerdict::UncontrollableDisabled { state, event } => {
                    ctx.report.set("result", "not-controllable");
                    ctx.report.set("disabled_state", state);
                    ctx.report.set("disabled_event", event);
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Bisim { a, b } => {
            let x = load(a, true)?;
            let y = same_alphabet(&x, &load(b, true)?, a, b)?;
            let bis = core(bisimilar(&x, &y))?;
            ctx.report.set("result", if bis.bisimilar { "bisimilar" } else { "not-bisimilar" });
            if !bis.bisimilar {
                ctx.report.set("left_state", x.name(x.initial()));
                ctx.report.set("right_state", y.name(y.initial()));
                if let Some(w) = language_difference(&x, &y, &ctx.budget)? {
                    ctx.report.set("witness", w);
                }
            }
            Ok(verdict(bis.bisimilar))
        }
        Command::Sim { a, b } => {
            let x = load(a, true)?;
            let y = same_alphabet(&x, &load(b, true)?, a, b)?;
            let ok = core(is_simulated_by(&x, &y))?;
            ctx.report.set("result", if ok { "simulated" } else { "not-simulated" });
            if !ok {
                let dx = core(determinize(&x, &ctx.budget))?;
                let dy = core(determinize(&y, &ctx.budget))?;
                if let Some(w) = core(inclusion_witness(&dx, &dy))? {
                    ctx.report.set("witness", dx.alphabet().render(&w).join(" "));
                }
            }
            Ok(verdict(ok))
        }
        Command::Compose { a, b, out, dot } => {
            let x = load(a, true)?;
            let y = load(b, true)?;
            alphabet_union(x.alphabet(), y.alphabet())?;
            let p = core(parallel(&x, &y))?;
            core(ctx.budget.check_states(p.num_states()))?;
            write_output(ctx, out, &p)?;
            if *dot {
                let path = with_suffix(out, "dot");
                fs::write(&path, to_dot(&p)).map_err(|e| Failure {
                    code: EXIT_WRITE,
                    message: format!("{}: {e}", path.display()),
                })?;
            }
            Ok(0)
        }
        Command::Det { input, out } => {
            let a = load(input, true)?;
            let d = core(determinize(&a, &ctx.budget))?;
            write_output(ctx, out, &d)?;
            Ok(0)
        }
        Command::Fsyn { input, out } => {
            let a = load(input, true)?;
            let f = core(f_syn(&a, &ctx.budget))?;
            write_output(ctx, out, &canonicalize(&f))?;
            Ok(0)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Synthesize { .. } => "synthesize",
        Command::Supremal { .. } => "supremal",
        Command::Verify { .. } => "verify",
        Command::Bisim { .. } => "bisim",
        Command::Sim { .. } => "sim",
        Command::Compose { .. } => "compose",
        Command::Det { .. } => "det",
        Command::Fsyn { .. } => "fsyn",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut ctx = Ctx {
        budget: Budget::with_state_limit(cli.global.state_limit),
        report: Report::default(),
    };
    ctx.report.set("command", command_name(&cli.command));
    if let Some(seed) = cli.global.seed {
        ctx.report.set("seed", seed);
    }
    let code = match run(&cli.command, &mut ctx) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ctx.report.set("error", &f.message);
            f.code
        }
    };
    if let Some(path) = &cli.global.report {
        if let Err(e) = fs::write(path, ctx.report.render()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_WRITE);
        }
    } else if !cli.global.machine {
        print!("{}", ctx.report.render());
    }
    if cli.global.machine {
        let mut obj = serde_json::Map::new();
        for (k, v) in &ctx.report.0 {
            obj.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        obj.insert("exit_code".into(), code.into());
        obj.insert("timing_ms".into(), (started.elapsed().as_secs_f64() * 1e3).into());
        println!("{}", serde_json::Value::Object(obj));
    }
    ExitCode::from(code)
}
