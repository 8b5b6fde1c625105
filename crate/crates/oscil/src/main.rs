//! Command-line front end: point evaluations of the oscillation integral,
//! dyadic profiles, coefficient tables, identity sweeps and the seeded
//! experiments. Exit codes: 0 success/PASS, 1 usage error, 2 assertion or
//! computation failure.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oscil::harness::{
    self, fmt_g17, parse_kind, ExperimentConfig, ExperimentKind, HarnessError,
};
use oscil::{
    theta, theta_profile, FunctionDescriptor, HolderFunction, LacunaryCoeffTable, QuadratureSpec,
};

#[derive(Parser)]
#[command(
    name = "oscil",
    about = "Oscillation functionals of Hölder functions: point values, dyadic profiles, \
             spectral coefficient tables, identity sweeps, and seeded experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FunctionArgs {
    /// Function kind: lacunary | weierstrass | sign-power | constant | linear
    #[arg(long = "fn", value_name = "KIND", default_value = "lacunary")]
    kind: String,
    /// Hölder exponent in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Series base (weierstrass)
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Series truncation index J
    #[arg(long, default_value_t = 40)]
    terms: u32,
    /// Constant value / linear slope
    #[arg(long, default_value_t = 0.0)]
    level: f64,
}

impl FunctionArgs {
    fn descriptor(&self) -> Result<FunctionDescriptor, String> {
        let kind =
            parse_kind(&self.kind).ok_or_else(|| format!("unknown function kind {}", self.kind))?;
        Ok(FunctionDescriptor {
            kind,
            alpha: self.alpha,
            base: self.base,
            terms: self.terms,
            level: self.level,
            seminorm_hint: None,
            shift: 0.0,
            samples: None,
        })
    }

    fn build(&self) -> Result<HolderFunction, String> {
        HolderFunction::from_descriptor(&self.descriptor()?).map_err(|e| e.to_string())
    }
}

/// Function flags without defaults, so a config file is only overridden
/// by flags the user actually passed.
#[derive(Args, Clone)]
struct OptFunctionArgs {
    /// Function kind: lacunary | weierstrass | sign-power | constant | linear
    #[arg(long = "fn", value_name = "FKIND", id = "function_kind")]
    function_kind: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    base: Option<u32>,
    #[arg(long)]
    terms: Option<u32>,
    #[arg(long)]
    level: Option<f64>,
}

#[derive(Args, Clone)]
struct QuadArgs {
    #[arg(long = "abs-tol", default_value_t = 1e-9)]
    abs_tol: f64,
    #[arg(long = "rel-tol", default_value_t = 1e-9)]
    rel_tol: f64,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec::with_tols(self.abs_tol, self.rel_tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Θ_ε(f)(x) by quadrature.
    Theta {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Θ along the dyadic grid ε = 2^{-k}, k = 1..=N, with the running max.
    Profile {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        x: f64,
        #[arg(long, short = 'n')]
        n: u32,
        #[command(flatten)]
        quad: QuadArgs,
        /// Write the profile as CSV to this path.
        #[arg(long)]
        out: Option<String>,
    },
    /// Tabulate the sine-power coefficients c_{j,N} (and b_j, A(α)).
    Coeffs {
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long = "n-max", default_value_t = 16)]
        n_max: u32,
        #[arg(long = "j-extra", default_value_t = 40)]
        j_extra: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// Bulk identity sweep (translation average, scale-average
    /// decomposition, summation by parts, energy); exit 0 iff PASS.
    Identity {
        #[command(flatten)]
        function: FunctionArgs,
        /// Sweep preset (only "default" is defined).
        #[arg(long, default_value = "default")]
        sweep: String,
        /// Highest dyadic level in the sweep.
        #[arg(long = "k-max", default_value_t = 8)]
        k_max: u32,
        /// Number of sample points x.
        #[arg(long = "x-count", default_value_t = 10)]
        x_count: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
    /// Seeded statistical experiments; exit 0 iff all checks pass.
    Experiment {
        /// l2 | tail | exp-moment | lil | cancellation | identity-sweep
        kind: String,
        /// Flat key=value config file applied before the flags.
        #[arg(long)]
        config: Option<String>,
        #[command(flatten)]
        function: OptFunctionArgs,
        /// Comma-separated dyadic depths, e.g. 8,16,32.
        #[arg(long = "N", value_name = "LIST")]
        n_list: Option<String>,
        /// Sample count.
        #[arg(long = "M")]
        m: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "t-grid")]
        t_grid: Option<String>,
        #[arg(long = "lambda-grid")]
        lambda_grid: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        traces: Option<u32>,
        #[arg(long = "trace-c")]
        trace_c: Option<f64>,
        #[arg(long = "abs-tol")]
        abs_tol: Option<f64>,
        #[arg(long = "rel-tol")]
        rel_tol: Option<f64>,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
}

fn experiment_kind(name: &str) -> Option<ExperimentKind> {
    Some(match name {
        "l2" | "l2-growth" => ExperimentKind::L2Growth,
        "tail" => ExperimentKind::Tail,
        "exp-moment" | "expmoment" => ExperimentKind::ExpMoment,
        "lil" => ExperimentKind::Lil,
        "cancellation" | "cancel" => ExperimentKind::Cancellation,
        "identity-sweep" | "identity" => ExperimentKind::IdentitySweep,
        _ => return None,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successes; anything else is usage.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    harness::init_thread_pool();
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::BadConfig(_) | HarnessError::Io(_) | HarnessError::Json(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Theta {
            function,
            x,
            eps,
            quad,
        } => {
            let f = function.build().map_err(CliError::Usage)?;
            let v =
                theta(&f, x, eps, &quad.spec()).map_err(|e| CliError::Failure(e.to_string()))?;
            println!("{}", fmt_g17(v));
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile {
            function,
            x,
            n,
            quad,
            out,
        } => {
            let f = function.build().map_err(CliError::Usage)?;
            let p = theta_profile(&f, x, n, &quad.spec())
                .map_err(|e| CliError::Failure(e.to_string()))?;
            let mut csv = String::from("k,eps,theta,theta_star\n");
            for (i, k) in p.levels.iter().enumerate() {
                println!(
                    "k={:-3}  theta={}  theta*={}",
                    k,
                    fmt_g17(p.theta[i]),
                    fmt_g17(p.theta_star[i])
                );
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    k,
                    fmt_g17((-(*k as f64)).exp2()),
                    fmt_g17(p.theta[i]),
                    fmt_g17(p.theta_star[i])
                ));
            }
            println!("bridge band: ±{}", fmt_g17(p.eps_bridge));
            if let Some(path) = out {
                fs::write(path, csv).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Coeffs {
            alpha,
            n_max,
            j_extra,
            out,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(CliError::Usage(format!("alpha {alpha} outside (0, 1)")));
            }
            let table = LacunaryCoeffTable::build(alpha, n_max, j_extra);
            let mut csv = String::from("j,n,alpha,c_jn\n");
            for n in 1..=n_max {
                for j in 0..=table.j_max() {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        j,
                        n,
                        fmt_g17(alpha),
                        fmt_g17(table.c(n, j))
                    ));
                }
            }
            println!(
                "A({}) = {}   (b_{} = {})",
                alpha,
                fmt_g17(table.a_limit()),
                table.j_max(),
                fmt_g17(table.b(table.j_max()))
            );
            if let Some(path) = out {
                fs::write(path, csv).map_err(|e| CliError::Usage(e.to_string()))?;
            } else {
                print!("{csv}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Identity {
            function,
            sweep,
            k_max,
            x_count,
            seed,
            out,
            json,
        } => {
            if sweep != "default" {
                return Err(CliError::Usage(format!("unknown sweep preset {sweep}")));
            }
            let mut cfg = ExperimentConfig::default_for(ExperimentKind::IdentitySweep);
            cfg.function = function.descriptor().map_err(CliError::Usage)?;
            cfg.alpha = function.alpha;
            cfg.n_list = (1..=k_max).collect();
            cfg.m = x_count;
            cfg.seed = seed;
            cfg.output_path = out;
            cfg.json_path = json;
            let report = harness::run_identity_sweep(&cfg)?;
            print!("{}", report.summary());
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Experiment {
            kind,
            config,
            function,
            n_list,
            m,
            seed,
            t_grid,
            lambda_grid,
            beta,
            traces,
            trace_c,
            abs_tol,
            rel_tol,
            out,
            json,
        } => {
            let kind = experiment_kind(&kind)
                .ok_or_else(|| CliError::Usage(format!("unknown experiment kind {kind}")))?;
            let mut cfg = ExperimentConfig::default_for(kind);
            if let Some(path) = config {
                let text = fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
                cfg.apply_config_text(&text)?;
            }
            // Explicit flags override the config file.
            if let Some(v) = function.function_kind {
                cfg.apply_kv("fn", &v)?;
            }
            if let Some(v) = function.alpha {
                cfg.apply_kv("alpha", &v.to_string())?;
            }
            if let Some(v) = function.base {
                cfg.function.base = v;
            }
            if let Some(v) = function.terms {
                cfg.function.terms = v;
            }
            if let Some(v) = function.level {
                cfg.function.level = v;
            }
            if let Some(v) = n_list {
                cfg.apply_kv("N", &v)?;
            }
            if let Some(v) = m {
                cfg.m = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = t_grid {
                cfg.apply_kv("t-grid", &v)?;
            }
            if let Some(v) = lambda_grid {
                cfg.apply_kv("lambda-grid", &v)?;
            }
            if let Some(v) = beta {
                cfg.beta = v;
            }
            if let Some(v) = traces {
                cfg.traces = v;
            }
            if let Some(v) = trace_c {
                cfg.trace_c = v;
            }
            if let Some(v) = abs_tol {
                cfg.abs_tol = v;
            }
            if let Some(v) = rel_tol {
                cfg.rel_tol = v;
            }
            if out.is_some() {
                cfg.output_path = out;
            }
            if json.is_some() {
                cfg.json_path = json;
            }
            let report = harness::run(&cfg)?;
            print!("{}", report.summary());
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}
