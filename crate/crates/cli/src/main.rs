use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shellbuck_cli::{run_and_write, CliError, Command, DentOptions, RunConfig, RunOutput};

#[derive(Parser)]
#[command(name = "shellbuck", version, about = "Stability constants of axially compressed cylindrical shells")]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Sub,
}

/// Config keys settable from the command line; they win over the file.
#[derive(Args)]
struct Overrides {
    /// Comma-separated thickness ratios.
    #[arg(long, global = true)]
    h_list: Option<String>,
    /// Shell length.
    #[arg(long = "length", global = true)]
    length: Option<String>,
    /// Young's modulus.
    #[arg(long = "young", global = true)]
    young: Option<String>,
    #[arg(long, global = true)]
    nu: Option<String>,
    /// Load imperfection (twist) parameter.
    #[arg(long, global = true)]
    eps: Option<String>,
    #[arg(long, global = true)]
    beta0: Option<String>,
    #[arg(long, global = true)]
    m_max_factor: Option<String>,
    #[arg(long, global = true)]
    k_ax_factor: Option<String>,
    #[arg(long, global = true)]
    p_rad: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    #[arg(long, global = true)]
    out_dir: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Any config key as `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Overrides {
    fn pairs(&self) -> Result<Vec<(String, String)>, CliError> {
        let named = [
            ("h_list", &self.h_list),
            ("L", &self.length),
            ("E", &self.young),
            ("nu", &self.nu),
            ("eps", &self.eps),
            ("beta0", &self.beta0),
            ("m_max_factor", &self.m_max_factor),
            ("k_ax_factor", &self.k_ax_factor),
            ("p_rad", &self.p_rad),
            ("tol", &self.tol),
            ("out_dir", &self.out_dir),
            ("seed", &self.seed),
        ];
        let mut pairs = Vec::new();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got '{s}'")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        pairs.extend(named.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))));
        Ok(pairs)
    }
}

#[derive(Subcommand)]
enum Sub {
    /// Korn constant over the h list.
    KornSweep,
    /// Safe-load constant over the h list.
    SafeloadSweep,
    /// Component Korn constants over the h list.
    ComponentSweep {
        /// Gradient entries, e.g. rz,theta-z,cross.
        #[arg(long, default_value = "rz,thetaz", value_delimiter = ',')]
        components: Vec<String>,
    },
    /// Buckling load of the (possibly twisted) trivial branch.
    BucklingSweep,
    /// Rayleigh ratios of the explicit ansatz field.
    AnsatzCheck,
    /// Residuals of the linear and Saint Venant-Kirchhoff branches.
    TrivialBranch {
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, default_value_t = 20)]
        extra_points: usize,
    },
    /// Residuals and linearization of the Mooney-Rivlin branch.
    MrBranch {
        #[arg(long, default_value_t = 0.05)]
        lambda: f64,
        #[arg(long, default_value_t = 20)]
        extra_points: usize,
    },
    /// Stress potential around a localized dent.
    DentSolve {
        /// Peak hoop curvature of the dent (positive is inward).
        #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
        curvature: f64,
        #[arg(long, default_value_t = 1.0)]
        width_eta: f64,
        #[arg(long, default_value_t = 0.5)]
        width_zeta: f64,
        /// Grid nodes per side.
        #[arg(long, default_value_t = 61)]
        nodes: usize,
        #[arg(long, default_value_t = 1.5)]
        half_width: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
    },
    /// lambda_hat^2 / K over the h list.
    Sufficiency,
}

fn command(sub: &Sub) -> Result<Command, CliError> {
    Ok(match sub {
        Sub::KornSweep => Command::KornSweep,
        Sub::SafeloadSweep => Command::SafeloadSweep,
        Sub::ComponentSweep { components } => Command::ComponentSweep {
            components: components
                .iter()
                .map(|c| c.parse().map_err(|e: shellbuck_core::Error| CliError::Config(e.to_string())))
                .collect::<Result<_, _>>()?,
        },
        Sub::BucklingSweep => Command::BucklingSweep,
        Sub::AnsatzCheck => Command::AnsatzCheck,
        Sub::TrivialBranch { lambda, extra_points } => Command::TrivialBranch { lambda: *lambda, extra_points: *extra_points },
        Sub::MrBranch { lambda, extra_points } => Command::MrBranch { lambda: *lambda, extra_points: *extra_points },
        Sub::DentSolve { curvature, width_eta, width_zeta, nodes, half_width, max_iter } => Command::DentSolve(DentOptions {
            curvature: *curvature,
            width_eta: *width_eta,
            width_zeta: *width_zeta,
            nodes: *nodes,
            half_width: *half_width,
            max_iter: *max_iter,
        }),
        Sub::Sufficiency => Command::Sufficiency,
    })
}

fn report(out: &RunOutput) {
    for f in &out.fits {
        let target = f.target.map_or(String::new(), |t| format!(" (target {t})"));
        println!(
            "fit {}: exponent {:.4}{target}, prefactor {:.6e}, r2 {:.6}, {} points",
            f.quantity, f.exponent, f.prefactor, f.r_squared, f.points
        );
    }
    for m in &out.metrics {
        match m.reference {
            Some(r) => println!("{}: {:.10e} (reference {:.10e})", m.name, m.value, r),
            None => println!("{}: {:.10e}", m.name, m.value),
        }
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for f in &out.failures {
        if f.h.is_nan() {
            eprintln!("failed: {}", f.message);
        } else {
            eprintln!("failed at h = {}: {}", f.h, f.message);
        }
    }
}

fn main_inner(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(&cli.overrides.pairs()?)?;
    let cmd = command(&cli.command)?;
    let (out, csv, json) = run_and_write(&cmd, &cfg)?;
    report(&out);
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(if out.failures.is_empty() { 0 } else { 2 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
