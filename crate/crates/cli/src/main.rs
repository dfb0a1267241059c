use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgt_core::mixed::{bures_distance_squared, sjoqvist_distance_squared, uhlmann_fidelity, uhlmann_holonomy};
use qgt_core::pure::ParamLoop;
use qgt_core::scan::{run_scan, run_verify, OutputFormat, Quantity, ScanConfig, Suite, VerifyOptions};
use qgt_core::states::DensityMatrix;
use qgt_core::zoo::ModelSpec;
use qgt_core::{linalg, CMatrix, DifferentiationPlan, Error, FdScheme, HermitianOperator, ParamPoint, C64};

const EXIT_CONFIG: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "qgt", version, about = "Quantum geometric tensor scans for pure and thermal states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quantity on a parameter grid and write a CSV or JSON table.
    Scan(ScanArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Bures and Sjoqvist distances between two states.
    Distance(DistanceArgs),
    /// Uhlmann holonomy of a thermal model around a loop.
    Holonomy(HolonomyArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// TOML scan configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model name (paramagnet, twoband, random); replaces the configured model.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    quantity: Option<String>,
    /// Output file; `-` or absent writes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    fd_scheme: Option<String>,
    /// Timestamp written to the metadata instead of the current time.
    #[arg(long)]
    pin_timestamp: Option<String>,
    /// Comma-separated parameter point.
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, hide = true)]
    corrupt_connection_sign: bool,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "paramagnet")]
    model: String,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Seed, dimension and parameter count of the random model.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
}

impl ModelArgs {
    fn spec(&self) -> ModelSpec {
        ModelSpec {
            name: self.model.clone(),
            omega0: self.omega0,
            mu: self.mu,
            seed: self.seed,
            n: self.n,
            k: self.k,
            temperature: self.temperature,
        }
    }
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// First parameter point (comma separated).
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Inline density matrix as JSON rows; entries are numbers or `[re, im]`.
    #[arg(long)]
    rho1: Option<String>,
    #[arg(long)]
    rho2: Option<String>,
}

#[derive(Args)]
struct HolonomyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Base point of the loop (comma separated).
    #[arg(long)]
    point: String,
    /// Parameter swept once around its period.
    #[arg(long)]
    param: String,
    #[arg(long, default_value_t = 256)]
    count: usize,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    fd_scheme: Option<String>,
}

enum Failure {
    Config(String),
    Partial(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::Io { .. } => Failure::Config(e.to_string()),
            other => Failure::Partial(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Scan(a) => scan(a),
        Command::Verify(a) => verify(a),
        Command::Distance(a) => distance(a),
        Command::Holonomy(a) => holonomy(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Partial(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARTIAL)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}

fn parse_point(field: &str, s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Config(format!("`{field}`: {e} in `{s}`")))
}

fn plan_from(step: Option<f64>, scheme: Option<&str>) -> Result<DifferentiationPlan, Failure> {
    let mut plan = DifferentiationPlan::default();
    if let Some(s) = scheme {
        plan.scheme = FdScheme::parse(s).ok_or_else(|| Failure::Config(format!("`--fd-scheme`: unknown scheme `{s}`")))?;
    }
    if let Some(h) = step {
        plan.step = h;
    }
    plan.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(plan)
}

fn scan(a: ScanArgs) -> Result<(), Failure> {
    let mut cfg = match (&a.config, &a.quantity, &a.model) {
        (Some(path), _, _) => ScanConfig::from_path(path)?,
        (None, Some(q), Some(m)) => ScanConfig::new(q.parse()?, ModelSpec::named(m)),
        _ => return Err(Failure::Config("`scan` needs --config or both --quantity and --model".into())),
    };
    if let Some(q) = &a.quantity {
        cfg.quantity = q.parse::<Quantity>()?;
    }
    if let Some(m) = &a.model {
        if cfg.model.name != *m {
            cfg.model = ModelSpec {
                temperature: cfg.model.temperature,
                ..ModelSpec::named(m)
            };
        }
    }
    if let Some(t) = a.temperature {
        cfg.model.temperature = Some(t);
    }
    if let Some(p) = &a.point {
        cfg.point = Some(parse_point("--point", p)?);
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.threads {
        cfg.threads = t;
    }
    if let Some(h) = a.fd_step {
        cfg.fd.step = h;
    }
    if let Some(s) = &a.fd_scheme {
        cfg.fd.scheme = s.clone();
    }
    if let Some(f) = &a.format {
        cfg.output.format = f.parse::<OutputFormat>()?;
    }
    if let Some(o) = &a.out {
        cfg.output.path = Some(o.display().to_string());
    }
    if let Some(ts) = &a.pin_timestamp {
        cfg.timestamp = Some(ts.clone());
    }

    let table = run_scan(&cfg)?;
    let text = table.render(cfg.output.format)?;
    match cfg.output.path.as_deref() {
        Some(p) if p != "-" => {
            let path = Path::new(p);
            table.emit(path, cfg.output.format)?;
            let sidecar = PathBuf::from(format!("{p}.warnings"));
            if table.warnings.is_empty() {
                let _ = std::fs::remove_file(&sidecar);
            } else {
                std::fs::write(&sidecar, table.warnings_text()).map_err(|e| Error::Io {
                    path: sidecar.display().to_string(),
                    message: e.to_string(),
                })?;
            }
        }
        _ => {
            print!("{text}");
            eprint!("{}", table.warnings_text());
        }
    }
    if table.warnings.is_empty() {
        Ok(())
    } else {
        Err(Failure::Partial(format!("{} of {} rows failed", table.failed_rows(), table.rows.len())))
    }
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let report = run_verify(
        suite,
        VerifyOptions {
            seed: a.seed,
            corrupt_connection_sign: a.corrupt_connection_sign,
        },
    );
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn parse_matrix(field: &str, s: &str) -> Result<DensityMatrix, Failure> {
    let bad = |msg: String| Failure::Config(format!("`{field}`: {msg}"));
    let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
    let n = rows.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(bad(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = match v {
                serde_json::Value::Number(x) => C64::new(x.as_f64().unwrap_or(f64::NAN), 0.0),
                serde_json::Value::Array(p) if p.len() == 2 => {
                    C64::new(p[0].as_f64().unwrap_or(f64::NAN), p[1].as_f64().unwrap_or(f64::NAN))
                }
                other => return Err(bad(format!("entry ({i},{j}) `{other}` is not a number or [re, im]"))),
            };
        }
    }
    let op = HermitianOperator::new(m).map_err(|e| bad(e.to_string()))?;
    DensityMatrix::new(op).map_err(|e| bad(e.to_string()))
}

fn distance(a: DistanceArgs) -> Result<(), Failure> {
    let (rho1, rho2) = match (&a.rho1, &a.rho2, &a.a, &a.b) {
        (Some(r1), Some(r2), None, None) => (parse_matrix("--rho1", r1)?, parse_matrix("--rho2", r2)?),
        (None, None, Some(p1), Some(p2)) => {
            let model = a.model.spec().build()?;
            if model.temperature.is_none() {
                return Err(Failure::Config("`--temperature` is required for model states".into()));
            }
            let r1 = ParamPoint::from(parse_point("--a", p1)?);
            let r2 = ParamPoint::from(parse_point("--b", p2)?);
            (model.rho(&r1)?, model.rho(&r2)?)
        }
        _ => return Err(Failure::Config("give either --rho1 and --rho2, or --a and --b".into())),
    };
    if rho1.dim() != rho2.dim() {
        return Err(Failure::Config(format!("dimensions differ: {} and {}", rho1.dim(), rho2.dim())));
    }
    let fidelity = uhlmann_fidelity(&rho1, &rho2)?;
    let db2 = bures_distance_squared(&rho1, &rho2)?;
    println!("fidelity {}", fidelity);
    println!("bures_squared {}", db2);
    println!("bures {}", db2.sqrt());
    match sjoqvist_distance_squared(&rho1, &rho2) {
        Ok(ds2) => {
            println!("sjoqvist_squared {}", ds2);
            println!("sjoqvist {}", ds2.sqrt());
            Ok(())
        }
        Err(e) => {
            println!("sjoqvist_squared nan");
            println!("sjoqvist nan");
            Err(Failure::Partial(e.to_string()))
        }
    }
}

fn holonomy(a: HolonomyArgs) -> Result<(), Failure> {
    let model = a.model.spec().build()?;
    if model.temperature.is_none() {
        return Err(Failure::Config("`--temperature` is required".into()));
    }
    let plan = plan_from(a.fd_step, a.fd_scheme.as_deref())?;
    let base = ParamPoint::from(parse_point("--point", &a.point)?);
    let mu = model
        .param_names
        .iter()
        .position(|n| *n == a.param)
        .ok_or_else(|| Failure::Config(format!("`--param`: model has no parameter `{}`", a.param)))?;
    let path = ParamLoop::coordinate_circle(&base, mu, a.count)?;
    let hol = uhlmann_holonomy(&model, &path, &plan)?;
    for i in 0..hol.nrows() {
        let row: Vec<String> = (0..hol.ncols())
            .map(|j| {
                let z = hol[(i, j)];
                format!("{:+.12e}{:+.12e}i", z.re, z.im)
            })
            .collect();
        println!("{}", row.join("  "));
    }
    println!("unitarity_error {:e}", linalg::unitarity_error(&hol));
    println!("trace {}", hol.trace());
    Ok(())
}
