use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use octo_cfs::experiment::{run, ExperimentConfig, Format, Status};
use octo_cfs::{Error, Result};

#[derive(Parser)]
#[command(
    name = "octo-cfs",
    version,
    about = "Octonionic algebra and causal fermion system experiments"
)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the default check tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Extra params as inline JSON or a path to a JSON file.
    #[arg(long, global = true)]
    params: Option<String>,
    #[command(subcommand)]
    command: Noun,
}

#[derive(Subcommand)]
enum Noun {
    /// Run an experiment config file.
    Run { config: PathBuf },
    #[command(subcommand)]
    Octonion(OctonionCmd),
    #[command(subcommand)]
    Clifford(CliffordCmd),
    #[command(subcommand)]
    Ideals(IdealsCmd),
    #[command(subcommand)]
    Cfs(CfsCmd),
    #[command(subcommand)]
    Vacuum(VacuumCmd),
    #[command(subcommand)]
    Majorana(MajoranaCmd),
    #[command(subcommand)]
    Potentials(PotentialsCmd),
}

#[derive(Args)]
struct Samples {
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum OctonionCmd {
    Table,
    Check(Samples),
}

#[derive(Subcommand)]
enum CliffordCmd {
    Dim,
    Identities(Samples),
}

#[derive(Subcommand)]
enum IdealsCmd {
    States,
    Su3,
    Casimir,
}

#[derive(Subcommand)]
enum CfsCmd {
    Action {
        #[arg(long)]
        measure: PathBuf,
    },
    Classify {
        /// JSON file with `config` and `pairs`.
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    Minimize {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        n: Option<usize>,
    },
    ElResidual {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        probes: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VacuumCmd {
    Build,
    Residual {
        #[arg(long)]
        refine: bool,
    },
    Localize {
        /// Comma-separated lattice coordinates, time first.
        #[arg(long)]
        point: String,
        #[arg(long)]
        other: Option<String>,
    },
    Act {
        /// Comma-separated imaginary units, e.g. `1,2,3`.
        #[arg(long)]
        op: String,
    },
}

#[derive(Subcommand)]
enum MajoranaCmd {
    Check {
        #[arg(long)]
        variant: Option<String>,
    },
}

#[derive(Subcommand)]
enum PotentialsCmd {
    Scan {
        #[arg(long, conflicts_with = "one_loop")]
        tree: bool,
        #[arg(long = "loop")]
        one_loop: bool,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn inline_or_file(s: &str) -> Result<Value> {
    if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("--params: {e}")))
    } else {
        read_json(Path::new(s))
    }
}

fn coords(s: &str) -> Result<Value> {
    let v: std::result::Result<Vec<i64>, _> =
        s.split(',').map(|c| c.trim().parse::<i64>()).collect();
    v.map(|v| json!(v))
        .map_err(|e| Error::Config(format!("bad coordinate list {s:?}: {e}")))
}

fn indices(s: &str) -> Result<Value> {
    let v: std::result::Result<Vec<usize>, _> = s
        .split(',')
        .map(|c| c.trim().trim_start_matches('e').parse::<usize>())
        .collect();
    v.map(|v| json!(v))
        .map_err(|e| Error::Config(format!("bad unit list {s:?}: {e}")))
}

/// Command name and params from the parsed arguments.
fn build(cli: &Cli) -> Result<ExperimentConfig> {
    if let Noun::Run { config } = &cli.command {
        return ExperimentConfig::from_json(&read_json(config)?);
    }
    let mut p: Map<String, Value> = match &cli.params {
        Some(s) => match inline_or_file(s)? {
            Value::Object(m) => m,
            _ => return Err(Error::Config("--params must be a JSON object".into())),
        },
        None => Map::new(),
    };
    let mut set = |k: &str, v: Value| {
        p.insert(k.to_string(), v);
    };
    let command = match &cli.command {
        Noun::Run { .. } => unreachable!(),
        Noun::Octonion(OctonionCmd::Table) => "octonion table",
        Noun::Octonion(OctonionCmd::Check(s)) => {
            if let Some(n) = s.samples {
                set("samples", json!(n));
            }
            "octonion check"
        }
        Noun::Clifford(CliffordCmd::Dim) => "clifford dim",
        Noun::Clifford(CliffordCmd::Identities(s)) => {
            if let Some(n) = s.samples {
                set("samples", json!(n));
            }
            "clifford identities"
        }
        Noun::Ideals(IdealsCmd::States) => "ideals states",
        Noun::Ideals(IdealsCmd::Su3) => "ideals su3",
        Noun::Ideals(IdealsCmd::Casimir) => "ideals casimir",
        Noun::Cfs(CfsCmd::Action { measure }) => {
            set("measure", read_json(measure)?);
            "cfs action"
        }
        Noun::Cfs(CfsCmd::Classify {
            pairs,
            random,
            verify,
        }) => {
            if let Some(path) = pairs {
                match read_json(path)? {
                    Value::Object(m) => m.into_iter().for_each(|(k, v)| set(&k, v)),
                    _ => return Err(Error::Config("pairs file must hold {config, pairs}".into())),
                }
            }
            if let Some(r) = random {
                set("random", json!(r));
            }
            if *verify {
                set("verify", json!(true));
            }
            "cfs classify"
        }
        Noun::Cfs(CfsCmd::Minimize { family, kappa, n }) => {
            set("family", read_json(family)?);
            set("kappa", json!(kappa));
            if let Some(n) = n {
                set("n", json!(n));
            }
            "cfs minimize"
        }
        Noun::Cfs(CfsCmd::ElResidual { measure, probes }) => {
            set("measure", read_json(measure)?);
            if let Some(n) = probes {
                set("probes", json!(n));
            }
            "cfs el-residual"
        }
        Noun::Vacuum(VacuumCmd::Build) => "vacuum build",
        Noun::Vacuum(VacuumCmd::Residual { refine }) => {
            if *refine {
                set("refine", json!(true));
            }
            "vacuum residual"
        }
        Noun::Vacuum(VacuumCmd::Localize { point, other }) => {
            set("point", coords(point)?);
            if let Some(o) = other {
                set("other", coords(o)?);
            }
            "vacuum localize"
        }
        Noun::Vacuum(VacuumCmd::Act { op }) => {
            set("op", indices(op)?);
            "vacuum act"
        }
        Noun::Majorana(MajoranaCmd::Check { variant }) => {
            if let Some(v) = variant {
                set("variant", json!(v));
            }
            "majorana check"
        }
        Noun::Potentials(PotentialsCmd::Scan { tree, one_loop }) => {
            match (tree, one_loop) {
                (true, _) => set("mode", json!("tree")),
                (_, true) => set("mode", json!("loop")),
                _ => {}
            }
            "potentials scan"
        }
    };
    let format: Format = cli.format.parse()?;
    Ok(ExperimentConfig {
        command: command.to_string(),
        params: Value::Object(p),
        seed: cli.seed,
        output: cli.out.clone(),
        format,
        tol: cli.tol,
    })
}

fn emit(cfg: &ExperimentConfig, primary: &[u8], summary: Option<&[u8]>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, primary)?;
            if let Some(s) = summary {
                lock.write_all(s)?;
            }
        }
        None if summary.is_some() => {
            return Err(Error::Config(format!(
                "{} writes binary output and needs --out",
                cfg.command
            )));
        }
        None => lock.write_all(primary)?,
    }
    lock.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::from_error(&e).code() as u8);
        }
    };
    let outcome = run(&cfg);
    if let Some(msg) = &outcome.error {
        eprintln!("error: {msg}");
        return ExitCode::from(outcome.status.code() as u8);
    }
    if let Err(e) = emit(&cfg, &outcome.primary, outcome.summary.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(Status::from_error(&e).code() as u8);
    }
    if outcome.status == Status::AssertionFailure {
        eprintln!("error: a verified invariant did not hold");
    }
    ExitCode::from(outcome.status.code() as u8)
}
