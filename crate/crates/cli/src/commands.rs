//! The sweep subcommands. Each returns a [`RunOutput`]; writing it out is
//! left to the caller.

use rayon::prelude::*;

use shellbuck_core::ansatz::{
    ansatz_ratios, bump_profile, cross_limit, cubic_axial_bump, phipsi_cross_identity, phipsi_profile, Bump,
};
use shellbuck_core::basis::GradComponent;
use shellbuck_core::branch::{check_points, imperfect_branch, linear_residuals, svk_branch, svk_stretch};
use shellbuck_core::dent::{dent_hoop_stress, dent_solve, DentGrid, DentProfile};
use shellbuck_core::mooney::{mr_alpha, mr_branch, mr_linearize, mr_residuals};
use shellbuck_core::scaling::fit_scaling;
use shellbuck_core::spectra::{
    buckling_load, component_korn, korn_constant, safe_load_constant, sufficiency_ratio, SpectralResult,
};
use shellbuck_core::{Error, ShellParams};

use crate::config::RunConfig;
use crate::output::{Cell, Failure, FitReport, Metric, RunOutput, Table};
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    KornSweep,
    SafeloadSweep,
    ComponentSweep { components: Vec<GradComponent> },
    BucklingSweep,
    AnsatzCheck,
    TrivialBranch { lambda: f64, extra_points: usize },
    MrBranch { lambda: f64, extra_points: usize },
    DentSolve(DentOptions),
    Sufficiency,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DentOptions {
    /// Peak hoop curvature of the dent; positive is inward.
    pub curvature: f64,
    pub width_eta: f64,
    pub width_zeta: f64,
    pub nodes: usize,
    pub half_width: f64,
    pub max_iter: usize,
}

impl Default for DentOptions {
    fn default() -> Self {
        Self { curvature: 1e-2, width_eta: 1.0, width_zeta: 0.5, nodes: 61, half_width: 1.5, max_iter: 200 }
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::KornSweep => "korn-sweep",
            Command::SafeloadSweep => "safeload-sweep",
            Command::ComponentSweep { .. } => "component-sweep",
            Command::BucklingSweep => "buckling-sweep",
            Command::AnsatzCheck => "ansatz-check",
            Command::TrivialBranch { .. } => "trivial-branch",
            Command::MrBranch { .. } => "mr-branch",
            Command::DentSolve(_) => "dent-solve",
            Command::Sufficiency => "sufficiency",
        }
    }

    /// Canonical text of the subcommand options, hashed with the config.
    pub fn canonical(&self) -> String {
        match self {
            Command::ComponentSweep { components } => {
                let labels: Vec<String> = components.iter().map(GradComponent::label).collect();
                format!("{}\ncomponents = {}\n", self.name(), labels.join(","))
            }
            Command::TrivialBranch { lambda, extra_points } | Command::MrBranch { lambda, extra_points } => {
                format!("{}\nlambda = {lambda:e}\nextra_points = {extra_points}\n", self.name())
            }
            Command::DentSolve(o) => format!(
                "{}\ncurvature = {:e}\nwidth_eta = {:e}\nwidth_zeta = {:e}\nnodes = {}\nhalf_width = {:e}\nmax_iter = {}\n",
                self.name(),
                o.curvature,
                o.width_eta,
                o.width_zeta,
                o.nodes,
                o.half_width,
                o.max_iter
            ),
            _ => format!("{}\n", self.name()),
        }
    }
}

/// `1 / sqrt(3 (1 - nu^2))`, the classical buckling strain over `h`.
pub fn classical_prefactor(nu: f64) -> f64 {
    1.0 / (3.0 * (1.0 - nu * nu)).sqrt()
}

/// `h^{5/4} / (eps + h^{1/4})`.
pub fn imperfect_scale(h: f64, eps: f64) -> f64 {
    h.powf(1.25) / (eps + h.powf(0.25))
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    match cmd {
        Command::KornSweep => single_sweep(cfg, "K", 1.5, |p| korn_constant(p, &cfg.spectral())),
        Command::SafeloadSweep => single_sweep(cfg, "safe_load", 1.5, |p| safe_load_constant(p, &cfg.spectral())),
        Command::ComponentSweep { components } => component_sweep(cfg, components),
        Command::BucklingSweep => buckling_sweep(cfg),
        Command::AnsatzCheck => ansatz_check(cfg),
        Command::TrivialBranch { lambda, extra_points } => trivial_branch(cfg, *lambda, *extra_points),
        Command::MrBranch { lambda, extra_points } => mooney_branch(cfg, *lambda, *extra_points),
        Command::DentSolve(opts) => dent(cfg, opts),
        Command::Sufficiency => sufficiency(cfg),
    }
}

// Config errors abort the run; anything else becomes a per-h failure.
fn split_error(h: f64, e: Error, failures: &mut Vec<Failure>) -> Result<(), CliError> {
    match e {
        Error::Config(msg) => Err(CliError::Config(msg)),
        other => {
            failures.push(Failure { h, message: other.to_string() });
            Ok(())
        }
    }
}

/// Evaluate `f` at every `h` in parallel; results come back in list order.
fn per_h<T: Send>(cfg: &RunConfig, f: impl Fn(f64, &ShellParams) -> Result<T, Error> + Sync) -> Vec<(f64, Result<T, Error>)> {
    cfg.h_list
        .par_iter()
        .map(|&h| {
            let r = ShellParams::new(h, cfg.length, cfg.young, cfg.nu).and_then(|p| f(h, &p));
            (h, r)
        })
        .collect()
}

fn fit(quantity: &str, table: &Table, column: &str, target: Option<f64>, warnings: &mut Vec<String>) -> Option<FitReport> {
    let pts: Vec<(f64, f64)> = table
        .values("h")
        .into_iter()
        .zip(table.values(column))
        .filter(|(h, v)| h.is_finite() && v.is_finite() && *v > 0.0)
        .collect();
    match fit_scaling(&pts) {
        Ok(f) => Some(FitReport {
            quantity: quantity.to_string(),
            exponent: f.exponent,
            target,
            prefactor: f.prefactor(),
            r_squared: f.r_squared,
            points: pts.len(),
        }),
        Err(e) => {
            warnings.push(format!("no fit for {quantity}: {e}"));
            None
        }
    }
}

const SPECTRAL_COLUMNS: [&str; 7] = ["m_star", "boundary_flag", "residual", "k_ax", "p_rad", "m_max", "size"];

fn spectral_cells(r: &SpectralResult) -> Vec<Cell> {
    let m_max = r.per_m.last().map_or(0, |(m, _)| *m);
    vec![
        r.m_star.into(),
        r.boundary_flag.into(),
        r.residual.into(),
        r.basis_meta.k_ax.into(),
        r.basis_meta.p_rad.into(),
        m_max.into(),
        r.basis_meta.size.into(),
    ]
}

fn failed_cells(n: usize) -> Vec<Cell> {
    vec![Cell::Num(f64::NAN); n]
}

fn header(first: &[&str], last: &[&str]) -> Vec<String> {
    first.iter().chain(SPECTRAL_COLUMNS.iter()).chain(last.iter()).map(|s| s.to_string()).collect()
}

fn note_boundary(h: f64, what: &str, r: &SpectralResult, warnings: &mut Vec<String>) {
    if r.boundary_flag {
        warnings.push(format!("h = {h}: {what} extremum at the largest wavenumber examined (m = {})", r.m_star));
    }
    warnings.extend(r.warnings.iter().filter(|w| !w.contains("largest wavenumber")).map(|w| format!("h = {h}: {w}")));
}

fn single_sweep(
    cfg: &RunConfig,
    column: &str,
    target: f64,
    f: impl Fn(&ShellParams) -> Result<SpectralResult, Error> + Sync,
) -> Result<RunOutput, CliError> {
    let mut out = RunOutput { table: Table { columns: header(&["h", column], &["status"]), rows: vec![] }, ..Default::default() };
    for (h, res) in per_h(cfg, |_, p| f(p)) {
        match res {
            Ok(r) => {
                note_boundary(h, column, &r, &mut out.warnings);
                let mut row = vec![h.into(), r.value.into()];
                row.extend(spectral_cells(&r));
                row.push("ok".into());
                out.table.push(row);
            }
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                let mut row = vec![h.into(), f64::NAN.into()];
                row.extend(failed_cells(SPECTRAL_COLUMNS.len()));
                row.push(format!("failed: {msg}").into());
                out.table.push(row);
            }
        }
    }
    out.fits.extend(fit(column, &out.table, column, Some(target), &mut out.warnings));
    Ok(out)
}

fn component_target(c: GradComponent) -> Option<f64> {
    match c {
        GradComponent::RZ => Some(-1.0),
        GradComponent::THETA_Z => Some(-0.5),
        _ => None,
    }
}

fn component_sweep(cfg: &RunConfig, components: &[GradComponent]) -> Result<RunOutput, CliError> {
    let mut out = RunOutput { table: Table { columns: header(&["h", "component", "value"], &["status"]), rows: vec![] }, ..Default::default() };
    let spectral = cfg.spectral();
    let results = per_h(cfg, |_, p| {
        components.iter().map(|&c| component_korn(p, c, &spectral).map(|r| (c, r))).collect::<Result<Vec<_>, _>>()
    });
    for (h, res) in results {
        match res {
            Ok(rows) => {
                for (c, r) in rows {
                    note_boundary(h, &c.label(), &r, &mut out.warnings);
                    let mut row = vec![h.into(), c.label().into(), r.value.into()];
                    row.extend(spectral_cells(&r));
                    row.push("ok".into());
                    out.table.push(row);
                }
            }
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                for c in components {
                    let mut row = vec![h.into(), c.label().into(), f64::NAN.into()];
                    row.extend(failed_cells(SPECTRAL_COLUMNS.len()));
                    row.push(format!("failed: {msg}").into());
                    out.table.push(row);
                }
            }
        }
    }
    for &c in components {
        let label = c.label();
        let k = out.table.column("component").unwrap_or(1);
        let sub = Table {
            columns: out.table.columns.clone(),
            rows: out.table.rows.iter().filter(|r| r[k] == Cell::Text(label.clone())).cloned().collect(),
        };
        out.fits.extend(fit(&label, &sub, "value", component_target(c), &mut out.warnings));
    }
    Ok(out)
}

fn buckling_sweep(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let eps = cfg.eps;
    let mut out = RunOutput {
        table: Table { columns: header(&["h", "load", "load_over_h", "imperfection_ratio"], &["status"]), rows: vec![] },
        ..Default::default()
    };
    let spectral = cfg.spectral();
    for (h, res) in per_h(cfg, |_, p| buckling_load(p, &imperfect_branch(eps, p).stress, &spectral)) {
        match res {
            Ok(r) => {
                note_boundary(h, "load", &r, &mut out.warnings);
                let mut row = vec![h.into(), r.value.into(), (r.value / h).into(), (r.value / imperfect_scale(h, eps)).into()];
                row.extend(spectral_cells(&r));
                row.push("ok".into());
                out.table.push(row);
            }
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                let mut row = failed_cells(4);
                row[0] = h.into();
                row.extend(failed_cells(SPECTRAL_COLUMNS.len()));
                row.push(format!("failed: {msg}").into());
                out.table.push(row);
            }
        }
    }
    let target = if eps == 0.0 { 1.0 } else { 1.25 };
    out.fits.extend(fit("load", &out.table, "load", Some(target), &mut out.warnings));

    let hs = out.table.values("h");
    let over_h = out.table.values("load_over_h");
    if let Some(k) = (0..hs.len()).filter(|&k| over_h[k].is_finite()).min_by(|&a, &b| {
        (hs[a].ln() - 0.01f64.ln()).abs().total_cmp(&(hs[b].ln() - 0.01f64.ln()).abs())
    }) {
        out.metrics.push(Metric::new("prefactor_h", hs[k]));
        out.metrics.push(Metric::against("prefactor", over_h[k], classical_prefactor(cfg.nu)));
    }
    let ratios: Vec<f64> = out.table.values("imperfection_ratio").into_iter().filter(|v| v.is_finite()).collect();
    if !ratios.is_empty() {
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        out.metrics.push(Metric::new("imperfection_band", max / min));
    }
    Ok(out)
}

fn sufficiency(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let eps = cfg.eps;
    let mut out = RunOutput {
        table: Table {
            columns: ["h", "load", "K", "ratio", "m_star_load", "m_star_korn", "boundary_flag", "residual", "k_ax", "p_rad", "size", "status"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows: vec![],
        },
        ..Default::default()
    };
    let spectral = cfg.spectral();
    let results = per_h(cfg, |_, p| {
        let l = buckling_load(p, &imperfect_branch(eps, p).stress, &spectral)?;
        let k = korn_constant(p, &spectral)?;
        let ratio = sufficiency_ratio(l.value, k.value)?;
        Ok((l, k, ratio))
    });
    for (h, res) in results {
        match res {
            Ok((l, k, ratio)) => {
                note_boundary(h, "load", &l, &mut out.warnings);
                note_boundary(h, "K", &k, &mut out.warnings);
                out.table.push(vec![
                    h.into(),
                    l.value.into(),
                    k.value.into(),
                    ratio.into(),
                    l.m_star.into(),
                    k.m_star.into(),
                    (l.boundary_flag || k.boundary_flag).into(),
                    l.residual.max(k.residual).into(),
                    l.basis_meta.k_ax.into(),
                    l.basis_meta.p_rad.into(),
                    l.basis_meta.size.into(),
                    "ok".into(),
                ]);
            }
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                let mut row = failed_cells(11);
                row[0] = h.into();
                row.push(format!("failed: {msg}").into());
                out.table.push(row);
            }
        }
    }
    out.fits.extend(fit("ratio", &out.table, "ratio", Some(0.5), &mut out.warnings));
    let mut pairs: Vec<(f64, f64)> = out.table.values("h").into_iter().zip(out.table.values("ratio")).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let decreasing = pairs.windows(2).all(|w| w[1].1 < w[0].1);
    out.metrics.push(Metric::new("strictly_decreasing", if decreasing { 1.0 } else { 0.0 }));
    Ok(out)
}

fn band(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

fn ansatz_check(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let columns = [
        "h",
        "korn_ratio",
        "load_ratio",
        "theta_z_ratio",
        "r_z_ratio",
        "korn_prefactor",
        "load_prefactor",
        "theta_z_prefactor",
        "r_z_prefactor",
        "cross_over_h",
        "cross_limit",
        "cross_gap",
        "quadrature",
        "status",
    ];
    let mut out = RunOutput { table: Table::new(&columns), ..Default::default() };
    let bump = bump_profile(cfg.length).map_err(|e| CliError::Config(e.to_string()))?;
    let (phi, psi) = (Bump::unit(), cubic_axial_bump(cfg.length));
    let phipsi = phipsi_profile(&phi, &psi).map_err(|e| CliError::Config(e.to_string()))?;
    let limit = cross_limit(&phipsi).map_err(CliError::Numerical)?;
    let identity = phipsi_cross_identity(&phi, &psi);
    out.metrics.push(Metric::against("cross_identity", limit, identity));
    out.metrics.push(Metric::new("cross_identity_gap", (limit - identity).abs() / identity.abs()));

    for (h, res) in per_h(cfg, |_, p| Ok((ansatz_ratios(&bump, p)?, ansatz_ratios(&phipsi, p)?))) {
        match res {
            Ok((r, x)) => {
                let cross = x.cross / h;
                out.table.push(vec![
                    h.into(),
                    r.korn_ratio().into(),
                    r.load_ratio().into(),
                    r.theta_z_ratio().into(),
                    r.r_z_ratio().into(),
                    (r.korn_ratio() / h.powf(1.5)).into(),
                    (r.load_ratio() / h).into(),
                    (r.theta_z_ratio() * h.sqrt()).into(),
                    (r.r_z_ratio() * h).into(),
                    cross.into(),
                    limit.into(),
                    ((cross - limit).abs() / limit.abs()).into(),
                    "12x32x32".into(),
                    "ok".into(),
                ]);
            }
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                let mut row = failed_cells(columns.len() - 2);
                row[0] = h.into();
                row.push("12x32x32".into());
                row.push(format!("failed: {msg}").into());
                out.table.push(row);
            }
        }
    }
    for (quantity, column, target) in [
        ("korn_ratio", "korn_ratio", 1.5),
        ("load_ratio", "load_ratio", 1.0),
        ("theta_z_ratio", "theta_z_ratio", -0.5),
        ("r_z_ratio", "r_z_ratio", -1.0),
    ] {
        out.fits.extend(fit(quantity, &out.table, column, Some(target), &mut out.warnings));
    }
    for column in ["korn_prefactor", "load_prefactor", "theta_z_prefactor", "r_z_prefactor"] {
        let v: Vec<f64> = out.table.values(column).into_iter().filter(|v| v.is_finite()).collect();
        if !v.is_empty() {
            out.metrics.push(Metric::new(&format!("{column}_band"), band(&v)));
        }
    }
    if let Some(k) = argmin_h(&out.table) {
        out.metrics.push(Metric::new("cross_gap_smallest_h", out.table.values("cross_gap")[k]));
    }
    Ok(out)
}

fn argmin_h(table: &Table) -> Option<usize> {
    let hs = table.values("h");
    (0..hs.len()).min_by(|&a, &b| hs[a].total_cmp(&hs[b]))
}

fn trivial_branch(cfg: &RunConfig, lambda: f64, extra: usize) -> Result<RunOutput, CliError> {
    let columns =
        ["h", "eps", "lambda", "svk_traction", "equilibrium", "traction", "clamp", "da_dlambda", "points", "status"];
    let mut out = RunOutput { table: Table::new(&columns), ..Default::default() };
    let step = 1e-5;
    let slope = (svk_stretch(step, cfg.nu).map_err(CliError::Numerical)?
        - svk_stretch(-step, cfg.nu).map_err(CliError::Numerical)?)
        / (2.0 * step);
    out.metrics.push(Metric::against("da_dlambda", slope, cfg.nu));
    let (eps, seed) = (cfg.eps, cfg.seed);
    let results = per_h(cfg, |_, p| {
        let svk = svk_branch(lambda, p)?.traction_residual(p)?;
        let pts = check_points(p, extra, seed);
        let rep = linear_residuals(&imperfect_branch(eps, p).displacement(), p, &pts)?;
        Ok((svk, rep))
    });
    for (h, res) in results {
        match res {
            Ok((svk, rep)) => out.table.push(vec![
                h.into(),
                eps.into(),
                lambda.into(),
                svk.into(),
                rep.equilibrium.into(),
                rep.traction.into(),
                rep.clamp.into(),
                slope.into(),
                rep.points.into(),
                "ok".into(),
            ]),
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                let mut row = failed_cells(columns.len() - 1);
                row[0] = h.into();
                row.push(format!("failed: {msg}").into());
                out.table.push(row);
            }
        }
    }
    for column in ["svk_traction", "equilibrium", "traction", "clamp"] {
        let worst = out.table.values(column).into_iter().fold(0.0_f64, |m, v| m.max(v));
        out.metrics.push(Metric::new(&format!("max_{column}"), worst));
    }
    Ok(out)
}

/// Largest entry gap between the linearized incompressible stress and the
/// imperfect-branch stress with `nu = 1/2`, `eps = beta0`.
pub fn linearization_gap(h: f64, length: f64, beta0: f64, young: f64) -> Result<f64, Error> {
    let lin = mr_linearize(h, beta0, young)?;
    let p = ShellParams::new(h, length, young, 0.5)?;
    let reference = imperfect_branch(beta0, &p).stress;
    let mut worst = 0.0_f64;
    for r in [p.inner_radius(), 1.0, p.outer_radius()] {
        worst = worst.max((lin.stress.at(r) - reference.at(r)).max_abs());
    }
    Ok(worst)
}

fn mooney_branch(cfg: &RunConfig, lambda: f64, extra: usize) -> Result<RunOutput, CliError> {
    let columns = [
        "h",
        "lambda",
        "beta0",
        "det",
        "ode",
        "traction",
        "face_conditions",
        "alpha_slope",
        "alpha_slope_target",
        "linearization_gap",
        "points",
        "status",
    ];
    let mut out = RunOutput { table: Table::new(&columns), ..Default::default() };
    let (beta0, young, length, seed) = (cfg.beta0, cfg.young, cfg.length, cfg.seed);
    let results = per_h(cfg, |h, _| {
        let branch = mr_branch(lambda, h, beta0, young)?;
        let p = ShellParams::new(h, length, young, 0.5)?;
        let rep = mr_residuals(&branch, &check_points(&p, extra, seed))?;
        // alpha >= 0 near lambda = 0, so the slope uses one-sided Richardson.
        let step = 1e-5;
        let slope = (4.0 * mr_alpha(step, h, beta0)? - mr_alpha(2.0 * step, h, beta0)?) / (2.0 * step);
        let gap = linearization_gap(h, length, beta0, young)?;
        Ok((rep, slope, gap))
    });
    for (h, res) in results {
        match res {
            Ok((rep, slope, gap)) => out.table.push(vec![
                h.into(),
                lambda.into(),
                beta0.into(),
                rep.det.into(),
                rep.ode.into(),
                rep.traction.into(),
                rep.face_conditions.into(),
                slope.into(),
                (4.0 * beta0 / (4.0 - h * h)).into(),
                gap.into(),
                rep.points.into(),
                "ok".into(),
            ]),
            Err(e) => {
                let msg = e.to_string();
                split_error(h, e, &mut out.failures)?;
                let mut row = failed_cells(columns.len() - 1);
                row[0] = h.into();
                row.push(format!("failed: {msg}").into());
                out.table.push(row);
            }
        }
    }
    for column in ["det", "ode", "traction"] {
        let worst = out.table.values(column).into_iter().fold(0.0_f64, |m, v| m.max(v));
        out.metrics.push(Metric::new(&format!("max_{column}"), worst));
    }
    let slope_err = out
        .table
        .values("alpha_slope")
        .iter()
        .zip(out.table.values("alpha_slope_target"))
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    out.metrics.push(Metric::new("max_alpha_slope_error", slope_err));
    let gaps = out.table.values("linearization_gap");
    for (k, w) in gaps.windows(2).enumerate() {
        out.metrics.push(Metric::new(&format!("linearization_gap_ratio_{k}"), w[0] / w[1]));
    }
    Ok(out)
}

fn dent(cfg: &RunConfig, o: &DentOptions) -> Result<RunOutput, CliError> {
    let cfg_err = |e: Error| match e {
        Error::Config(m) | Error::Domain(m) => CliError::Config(m),
        other => CliError::Numerical(other),
    };
    let profile = DentProfile::from_center_curvature(o.curvature, o.width_eta, o.width_zeta).map_err(cfg_err)?;
    let grid = DentGrid::new(profile, o.nodes, o.nodes, o.half_width, o.half_width).map_err(cfg_err)?;
    let sol = dent_solve(&grid, cfg.young, cfg.tol, o.max_iter).map_err(cfg_err)?;
    let hoop = dent_hoop_stress(&grid, &sol);
    let mut out = RunOutput { table: Table::new(&["eta", "zeta", "rho", "s", "hoop_stress"]), ..Default::default() };
    for i in 0..grid.n_eta {
        for j in 0..grid.n_zeta {
            let (eta, zeta) = grid.node(i, j);
            let k = grid.index(i, j);
            out.table.push(vec![eta.into(), zeta.into(), grid.rho[k].into(), sol.s[k].into(), hoop.values[k].into()]);
        }
    }
    let sup = |v: &mut dyn Iterator<Item = f64>| v.fold(0.0_f64, |m, x| m.max(x.abs()));
    let rho_sup = sup(&mut grid.rho.iter().map(|r| cfg.young * r));
    let gap = sup(&mut sol.s.iter().zip(&grid.rho).map(|(s, r)| s + cfg.young * r));
    let center = hoop.values[grid.index(grid.n_eta / 2, grid.n_zeta / 2)];
    out.metrics.extend([
        Metric::new("iterations", sol.iterations as f64),
        Metric::new("converged", if sol.converged { 1.0 } else { 0.0 }),
        Metric::against("residual", sol.residual, cfg.tol),
        Metric::new("leading_order_gap", if rho_sup > 0.0 { gap / rho_sup } else { 0.0 }),
        Metric::new("hoop_min", hoop.min),
        Metric::new("hoop_min_eta", hoop.argmin.0),
        Metric::new("hoop_min_zeta", hoop.argmin.1),
        Metric::new("hoop_center", center),
        Metric::new("spacing", grid.spacing.0),
    ]);
    if !sol.converged {
        out.failures.push(Failure {
            h: f64::NAN,
            message: format!("dent iteration did not converge in {} steps (residual {:e})", sol.iterations, sol.residual),
        });
    }
    Ok(out)
}
