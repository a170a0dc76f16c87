use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::ConfigFile;
use super::report::{fmt_num, json_num, json_opt};
use super::{Cli, Command, CommonArgs, EvolveArgs, GplotArgs, IndexArgs, ScanArgs};
use crate::error::{invalid, Error, Result};
use crate::evolve::{linearized_evolve, smooth_random_init};
use crate::grid::make_grid;
use crate::pencil::log_space;
use crate::problem::{GridSpec, StabilityProblem};
use crate::profiles::{make_profile, Model, SolverOpts};
use crate::spectral::Tolerances;
use crate::verify::{bisect_threshold, boussinesq_threshold, threshold_scan, ScanConfig, ScanTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

/// Settings shared by all subcommands after merging flags, config and defaults.
struct Settings {
    cfg: ConfigFile,
    model: Model,
    c: f64,
    p: f64,
    grid: GridSpec,
    tol: Tolerances,
    solver: SolverOpts,
    jobs: usize,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

impl Settings {
    fn resolve(a: &CommonArgs, default_n: usize, default_format: Format) -> Result<Self> {
        let cfg = match &a.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let model: Model = cfg.pick(a.model.clone(), "model", "boussinesq".to_string())?.parse()?;
        let default_p = if model == Model::Boussinesq { 2.0 } else { 3.0 };
        let format = match cfg.pick_opt(a.format.clone(), "format")?.as_deref() {
            None => default_format,
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return invalid(format!("unknown format '{other}' (csv|json)")),
        };
        let d = Tolerances::default();
        let s = SolverOpts::default();
        Ok(Self {
            model,
            c: cfg.pick(a.c, "c", 0.0)?,
            p: cfg.pick(a.p, "p", default_p)?,
            grid: GridSpec { n_points: cfg.pick(a.n, "N", default_n)?, half_length: cfg.pick_opt(a.l, "L")? },
            tol: Tolerances {
                zero_tol_rel: cfg.pick(a.tol_zero, "zero_tol_rel", d.zero_tol_rel)?,
                gap_tol_rel: cfg.pick(a.tol_gap, "gap_tol_rel", d.gap_tol_rel)?,
                b_tol: cfg.pick(a.tol_b, "b_tol", d.b_tol)?,
            },
            solver: SolverOpts {
                max_iter: cfg.pick(a.max_iter, "max_iter", s.max_iter)?,
                tol: cfg.pick(a.solver_tol, "tol", s.tol)?,
                gamma: cfg.pick_opt(a.gamma, "gamma")?,
            },
            jobs: cfg.pick(a.jobs, "jobs", 1)?,
            seed: cfg.pick(a.seed, "seed", 7)?,
            out: cfg.pick_opt(a.out.clone(), "out")?,
            format,
            cfg,
        })
    }

    fn problem(&self) -> Result<StabilityProblem> {
        StabilityProblem::new(self.model, self.c, self.p, &self.grid, &self.tol, &self.solver)
    }

    fn half_length(&self) -> f64 {
        self.grid.resolve(self.model, self.c)
    }

    /// Write `name` under `--out`, or print it when `to_stdout`.
    fn emit(&self, name: &str, content: &str, to_stdout: bool) -> Result<()> {
        match &self.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(name), content)?;
            }
            None if to_stdout => print!("{content}"),
            None => {}
        }
        Ok(())
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Parse arguments already collected by clap and run the subcommand.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Profile(a) => cmd_profile(&a),
        Command::Index(a) => cmd_index(&a),
        Command::Scan(a) => cmd_scan(&a),
        Command::Evolve(a) => cmd_evolve(&a),
        Command::Gplot(a) => cmd_gplot(&a),
    }
}

fn cmd_profile(a: &CommonArgs) -> Result<()> {
    let st = Settings::resolve(a, 512, Format::Csv)?;
    st.model.check_params(st.c, st.p)?;
    let grid = make_grid(st.half_length(), st.grid.n_points)?;
    let prof = make_profile(st.model, st.c, st.p, &grid, &st.solver)?;
    let mut csv = String::from(if prof.companion.is_some() { "x,phi,psi\n" } else { "x,phi\n" });
    for (j, &x) in grid.nodes().iter().enumerate() {
        let _ = write!(csv, "{},{}", fmt_num(x), fmt_num(prof.values[j]));
        if let Some(psi) = &prof.companion {
            let _ = write!(csv, ",{}", fmt_num(psi[j]));
        }
        csv.push('\n');
    }
    let meta = json!({
        "model": st.model.name(),
        "c": json_num(st.c),
        "p": json_num(st.p),
        "grid": {"N": grid.n_points(), "L": json_num(grid.half_length())},
        "residual": json_num(prof.residual),
        "max_phi": json_num(prof.amplitude()),
        "phi_center": json_num(prof.center_value()),
    });
    st.emit("profile.csv", &csv, st.format == Format::Csv)?;
    st.emit("profile.json", &to_json(&meta), st.format == Format::Json)
}

fn cmd_index(a: &IndexArgs) -> Result<()> {
    let st = Settings::resolve(&a.common, 512, Format::Json)?;
    let prob = st.problem()?;
    let r = &prob.report;
    let mut report = json!({
        "model": st.model.name(),
        "c": json_num(st.c),
        "p": json_num(st.p),
        "grid": {"N": prob.op.grid.n_points(), "L": json_num(prob.op.grid.half_length())},
        "assumptions": {
            "A": r.assumption_a,
            "B": r.assumption_b,
            "E": "finite-dimensional: automatic",
            "delta_sq": json_num(r.delta_sq),
            "sigma_sq": json_num(r.sigma_sq),
            "b_pairing": json_num(r.b_pairing),
            "n_negative": r.n_negative,
            "kernel_dim": r.kernel_dim,
        },
    });
    let pencil = match prob.pencil() {
        Ok(p) => p,
        Err(e) => {
            report["error"] = Value::from(e.to_string());
            st.emit("index.json", &to_json(&report), true)?;
            return Err(e);
        }
    };
    let omega = a.omega.unwrap_or(st.c.abs());
    let v = pencil.verdict(omega)?;
    let obj = report.as_object_mut().expect("report is an object");
    obj.insert("omega".into(), json_num(v.omega));
    obj.insert("q_index".into(), json_num(v.q_index));
    obj.insert("omega_star".into(), json_num(v.omega_star));
    obj.insert("q_periodic".into(), json_num(v.index.q_periodic));
    obj.insert("omega_star_periodic".into(), json_num(v.index.omega_star_periodic));
    obj.insert("stable".into(), Value::from(v.stable));
    obj.insert("lambda0".into(), json_opt(v.lambda0));
    obj.insert("residuals".into(), json!({"profile": json_num(prob.profile.residual), "pencil": json_opt(v.pencil_residual)}));
    obj.insert("flags".into(), Value::from(v.flags.clone()));
    st.emit("index.json", &to_json(&report), true)?;
    if a.trace {
        st.emit("trace.txt", &v.trace.to_text(), false)?;
    }
    Ok(())
}

pub(crate) fn scan_csv(table: &ScanTable) -> String {
    let mut s = String::from("c,q_index,omega_star,stable,lambda0,residual,flags\n");
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_num(r.c),
            fmt_num(r.q_index),
            fmt_num(r.omega_star),
            r.stable,
            r.lambda0.map(fmt_num).unwrap_or_default(),
            r.residual.map(fmt_num).unwrap_or_default(),
            r.flags.join(";").replace(',', " ")
        );
    }
    s
}

fn cmd_scan(a: &ScanArgs) -> Result<()> {
    let st = Settings::resolve(&a.common, 512, Format::Csv)?;
    let c_lo = st.cfg.pick(a.c_lo, "c_lo", 0.05)?;
    let c_hi = st.cfg.pick(a.c_hi, "c_hi", 0.95)?;
    let dc = st.cfg.pick(a.dc, "dc", 0.01)?;
    let cfg = ScanConfig { grid: st.grid, tol: st.tol, solver: st.solver.clone(), with_roots: !a.no_roots, jobs: st.jobs };
    let table = threshold_scan(st.model, st.p, c_lo, c_hi, dc, &cfg)?;
    let refined = match (a.no_refine, table.bracket()) {
        (false, Some((lo, hi))) => Some(bisect_threshold(st.model, st.p, lo, hi, 1e-4, &cfg)?),
        _ => None,
    };
    let closed = match st.model {
        Model::Boussinesq => boussinesq_threshold(st.p),
        Model::Kgz => Some(std::f64::consts::FRAC_1_SQRT_2),
        Model::Beam => None,
    };
    let summary = json!({
        "model": st.model.name(),
        "p": json_num(st.p),
        "c_lo": json_num(c_lo),
        "c_hi": json_num(c_hi),
        "dc": json_num(dc),
        "N": st.grid.n_points,
        "rows": table.rows.len(),
        "unstable_rows": table.rows.iter().filter(|r| !r.stable).count(),
        "flagged_rows": table.rows.iter().filter(|r| !r.flags.is_empty()).count(),
        "detected_threshold": json_opt(table.detected_threshold()),
        "refined_threshold": json_opt(refined),
        "closed_form_threshold": json_opt(closed),
    });
    st.emit("scan.csv", &scan_csv(&table), st.format == Format::Csv)?;
    st.emit("scan.json", &to_json(&summary), st.format == Format::Json)
}

fn cmd_evolve(a: &EvolveArgs) -> Result<()> {
    let st = Settings::resolve(&a.common, 256, Format::Json)?;
    let t_end = st.cfg.pick(a.t_end, "t_end", 100.0)?;
    let dt = st.cfg.pick_opt(a.dt, "dt")?;
    let prob = st.problem()?;
    let omega = st.c.abs();
    let verdict = prob.pencil()?.verdict(omega)?;
    let blocks = if prob.op.block { 2 } else { 1 };
    let init = smooth_random_init(&prob.op.grid, blocks, 2.0, st.seed);
    let traj = linearized_evolve(&prob.op, omega, &init, dt, t_end)?;
    let stride = (traj.times.len() / 2000).max(1);
    let rel = verdict.lambda0.map(|l| (traj.fitted_rate - l).abs() / l);
    let summary = json!({
        "model": st.model.name(),
        "c": json_num(st.c),
        "p": json_num(st.p),
        "grid": {"N": prob.op.grid.n_points(), "L": json_num(prob.op.grid.half_length())},
        "t_end": json_num(t_end),
        "dt": json_num(traj.dt),
        "steps": traj.times.len() - 1,
        "seed": st.seed,
        "fitted_rate": json_num(traj.fitted_rate),
        "fit_quality": json_num(traj.fit_quality),
        "exponential_growth": traj.fitted_rate > 1e-2,
        "lambda0": json_opt(verdict.lambda0),
        "relative_difference": json_opt(rel),
        "stable": verdict.stable,
    });
    st.emit("trajectory.csv", &traj.to_csv(stride), st.format == Format::Csv)?;
    st.emit("evolve.json", &to_json(&summary), st.format == Format::Json)
}

fn read_scan_curve(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (Some(ic), Some(iw)) = (col("c"), col("omega_star")) else {
        return invalid(format!("{}: not a scan CSV (need c and omega_star columns)", path.display()));
    };
    let mut out = String::from("# c omega_star |c|\n");
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let c: f64 = f[ic].parse().map_err(|_| Error::InvalidParameter(format!("bad c value '{}'", f[ic])))?;
        let w = match f[iw].parse::<f64>() {
            Ok(w) if w.is_finite() => fmt_num(w),
            _ => "NaN".to_string(),
        };
        let _ = writeln!(out, "{} {} {}", fmt_num(c), w, fmt_num(c.abs()));
    }
    Ok(out)
}

fn cmd_gplot(a: &GplotArgs) -> Result<()> {
    let st = Settings::resolve(&a.common, 512, Format::Csv)?;
    for (i, path) in a.scan.iter().enumerate() {
        let name = format!("scan_curve_{i}.dat");
        st.emit(&name, &read_scan_curve(path)?, true)?;
    }
    if a.common.model.is_none() && !a.scan.is_empty() {
        return Ok(());
    }
    let prob = st.problem()?;
    let pencil = prob.pencil()?;
    let omega = a.omega.unwrap_or(st.c.abs());
    if !(omega > 0.0) {
        return invalid("G(lambda) trace needs omega > 0");
    }
    let lo = a.lambda_min.unwrap_or(1e-3);
    let hi = a.lambda_max.unwrap_or(1e2);
    let n = a.points.unwrap_or(400);
    let lambdas = log_space(lo, hi, n);
    let values = pencil.g_trace(omega, &lambdas)?;
    let mut out = format!("# model {} c {} p {} omega {}\n# lambda G\n", st.model.name(), fmt_num(st.c), fmt_num(st.p), fmt_num(omega));
    for (l, g) in lambdas.iter().zip(&values) {
        let _ = writeln!(out, "{} {}", fmt_num(*l), fmt_num(*g));
    }
    st.emit("g_trace.dat", &out, true)
}
