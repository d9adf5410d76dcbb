use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agenda_control::gen::{random_instance, rng_from_seed, InstanceShape};
use agenda_control::graph::{self, GraphInstance, GraphProblem, GraphWitness};
use agenda_control::io::{self, Report};
use agenda_control::reductions::{build_reduction, build_reduction_seeded, verify_reduction, ReductionKind, ReductionTag};
use agenda_control::solvers::{brute_force_solve_with, dispatch_solve_with, Caps, SolveOptions};
use agenda_control::{winner, Agenda, ControlInstance, Error, ProcedureSpec, Problem, Result, Solution};
use clap::{Args, Parser, Subcommand};

/// Agenda-based voting: winner determination, control solving, and
/// hardness-reduction generators.
#[derive(Parser, Debug)]
#[command(name = "agenda-control", version)]
struct Cli {
    /// Emit `key=value` lines instead of the plain report.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Winner of an election under an agenda procedure.
    Winner {
        #[arg(long)]
        election: PathBuf,
        /// Space-separated candidate ids.
        #[arg(long)]
        agenda: String,
        /// `successive`, `amendment h=<int>` or `amendment h=m-<int>`.
        #[arg(long, default_value = "amendment h=1")]
        procedure: String,
        /// Print the elimination rounds.
        #[arg(long)]
        trace: bool,
    },
    /// Decide a control instance with the most specific exact algorithm.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Replace a non-minimal witness by a minimum one from the oracle.
        #[arg(long)]
        minimal: bool,
        /// Write the solution as a report document.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decide a control instance by exhaustive search.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Write generated instances.
    #[command(subcommand)]
    Generate(Generate),
    /// Solve a reduction source and its target and compare the answers.
    VerifyReduction {
        #[command(flatten)]
        source: ReductionArgs,
    },
    /// Decide an instance of one of the auxiliary graph problems.
    GraphSolve {
        #[arg(long)]
        problem: Option<GraphProblem>,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        kappa: Option<usize>,
    },
    /// Rewrite any document in canonical form.
    Canonicalize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 1 when the file is not already canonical.
        #[arg(long, conflicts_with = "out")]
        check: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Control instance built from a graph source by a catalog reduction.
    Reduction {
        #[command(flatten)]
        source: ReductionArgs,
        /// Permutes the free agenda positions of seeded constructions.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random control instance.
    Random {
        #[arg(long)]
        candidates: usize,
        #[arg(long)]
        votes: usize,
        #[arg(long)]
        problem: Problem,
        #[arg(long, default_value = "amendment h=1")]
        procedure: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ReductionArgs {
    #[arg(long)]
    kind: ReductionTag,
    #[arg(long)]
    graph: PathBuf,
    /// Procedure parameter of lifted constructions.
    #[arg(long)]
    h: Option<usize>,
    /// Overrides the graph document's `kappa`.
    #[arg(long)]
    kappa: Option<usize>,
}

impl ReductionArgs {
    fn load(&self) -> Result<(ReductionKind, GraphInstance)> {
        let kind = ReductionKind { tag: self.kind, h: self.h };
        let doc = io::parse_graph(&read(&self.graph)?)?;
        let src = doc.to_instance(Some(self.kind.source()), self.kappa)?;
        Ok((kind, src))
    }
}

/// Outcome of a verb: text for stdout and the exit status.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn success(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<String> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn render_solution(inst: &ControlInstance, s: &Solution, porcelain: bool) -> String {
    let r = Report::from_solution(inst, s);
    let mut out = String::new();
    if porcelain {
        out += &format!("decision={}\n", yes_no(r.decision));
        out += &format!("algorithm={}\n", r.algorithm);
        out += &format!("minimal={}\n", r.minimal);
        out += &format!("rationale={}\n", r.rationale);
        for w in &r.witness {
            out += &format!("witness={w}\n");
        }
    } else {
        out += &format!("{}\n", yes_no(r.decision));
        for w in &r.witness {
            out += &format!("{w}\n");
        }
        out += &format!("algorithm: {}\n", r.algorithm);
        out += &format!("minimal: {}\n", r.minimal);
        if !r.rationale.is_empty() {
            out += &format!("rationale: {}\n", r.rationale);
        }
    }
    out
}

fn finish_solution(inst: &ControlInstance, s: Solution, report: Option<&Path>, porcelain: bool) -> Result<Outcome> {
    if let Some(path) = report {
        write_or_print(Some(path), &io::serialize_report(&Report::from_solution(inst, &s)))?;
    }
    Ok(Outcome { text: render_solution(inst, &s, porcelain), ok: s.decision })
}

fn render_witness(w: &Option<GraphWitness>) -> Vec<String> {
    match w {
        Some(GraphWitness::Set(s)) => vec![format!("set {}", s.join(" "))],
        Some(GraphWitness::Pair(a, b)) => vec![format!("left {}", a.join(" ")), format!("right {}", b.join(" "))],
        None => Vec::new(),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let porcelain = cli.porcelain;
    match cli.command {
        Command::Winner { election, agenda, procedure, trace } => {
            let e = io::parse_election(&read(&election)?)?;
            let agenda = Agenda::parse(&agenda)?;
            let spec: ProcedureSpec = procedure.parse()?;
            let (w, t) = winner(&e, &agenda, spec)?;
            let mut out = String::new();
            if porcelain {
                out += &format!("winner={w}\n");
                if trace {
                    for (i, (c, gone)) in t.rounds.iter().enumerate() {
                        out += &format!("round={} {c}:{}\n", i + 1, gone.join(","));
                    }
                }
            } else if trace {
                out += &format!("{t}\n");
            } else {
                out += &format!("{w}\n");
            }
            Ok(Outcome::success(out))
        }
        Command::Solve { instance, minimal, report, jobs } => {
            let inst = io::parse_instance(&read(&instance)?)?;
            let caps = Caps::from_env()?;
            let mut s = dispatch_solve_with(&inst, SolveOptions { caps, jobs })?;
            log::debug!("routed to {}", s.algorithm);
            if minimal && s.decision && !s.minimal {
                match brute_force_solve_with(&inst, caps, jobs) {
                    Ok(b) => {
                        let algorithm = format!("{} + brute-force minimisation", s.algorithm);
                        s = Solution { algorithm, rationale: s.rationale, ..b };
                    }
                    Err(Error::Resource(why)) => log::warn!("keeping non-minimal witness: {why}"),
                    Err(e) => return Err(e),
                }
            }
            finish_solution(&inst, s, report.as_deref(), porcelain)
        }
        Command::Oracle { instance, report, jobs } => {
            let inst = io::parse_instance(&read(&instance)?)?;
            let s = brute_force_solve_with(&inst, Caps::from_env()?, jobs)?;
            finish_solution(&inst, s, report.as_deref(), porcelain)
        }
        Command::Generate(Generate::Reduction { source, seed, out }) => {
            let (kind, src) = source.load()?;
            let inst = match seed {
                Some(s) => build_reduction_seeded(kind, &src, s)?,
                None => build_reduction(kind, &src)?,
            };
            write_or_print(out.as_deref(), &io::serialize_instance(&inst)).map(Outcome::success)
        }
        Command::Generate(Generate::Random { candidates, votes, problem, procedure, seed, out }) => {
            let shape = InstanceShape::new(problem, procedure.parse()?, candidates, votes);
            let inst = random_instance(&mut rng_from_seed(seed), &shape)?;
            write_or_print(out.as_deref(), &io::serialize_instance(&inst)).map(Outcome::success)
        }
        Command::VerifyReduction { source } => {
            let (kind, src) = source.load()?;
            let c = verify_reduction(kind, &src)?;
            let text = if porcelain {
                let mut t = format!(
                    "verdict={}\nsource={}\ntarget={}\n",
                    if c.agree { "AGREE" } else { "DISAGREE" },
                    yes_no(c.source_answer),
                    yes_no(c.target_answer)
                );
                for w in render_witness(&c.source_witness) {
                    t += &format!("source-witness={w}\n");
                }
                t
            } else {
                format!("{c}\n")
            };
            Ok(Outcome { text, ok: c.agree })
        }
        Command::GraphSolve { problem, graph: path, kappa } => {
            let doc = io::parse_graph(&read(&path)?)?;
            let src = doc.to_instance(problem, kappa)?;
            let w = graph::solve(&src)?;
            let mut text = if porcelain {
                format!("decision={}\n", yes_no(w.is_some()))
            } else {
                format!("{}\n", yes_no(w.is_some()))
            };
            for line in render_witness(&w) {
                text += &if porcelain { format!("witness={line}\n") } else { format!("{line}\n") };
            }
            Ok(Outcome { text, ok: w.is_some() })
        }
        Command::Canonicalize { file, out, check } => {
            let text = read(&file)?;
            let canon = io::canonicalize(&text)?;
            if check {
                return Ok(Outcome { text: String::new(), ok: canon == text });
            }
            write_or_print(out.as_deref(), &canon).map(Outcome::success)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Parse { .. } | Error::Invalid { .. } | Error::Precondition(_) => 2,
        Error::Resource(_) => 3,
        Error::Invariant(_) => 4,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) => {
            print!("{}", o.text);
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
