//! `classify` and `simulate`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use fracchemo_core::config::{ExperimentConfig, RawConfig};
use fracchemo_core::diagnostics::{band_check, drift_gap_check, CheckReport};
use fracchemo_core::evolve::{write_snapshot, Simulator, Trajectory};
use fracchemo_core::regimes::{regime_report, RegimeReport};
use fracchemo_core::{coeff_bounds, Error, Result};
use rayon::prelude::*;

use crate::output::{comment, ensure_dir, io_err, write_with_header};
use crate::Status;

pub struct Pool(rayon::ThreadPool);

impl Pool {
    pub fn new(jobs: usize) -> Result<Self> {
        if jobs == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map(Pool)
            .map_err(|e| Error::Config(format!("thread pool: {e}")))
    }

    /// Order-preserving parallel map.
    fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
        self.0
            .install(|| items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect())
    }
}

fn load(path: &Path) -> Result<RawConfig> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    RawConfig::parse(&text)
}

/// Resolves every sweep member up front so that a bad tuple fails the
/// whole command before any work is done.
fn resolve_all(raw: &RawConfig) -> Result<Vec<ExperimentConfig>> {
    raw.expand()?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.resolve().map_err(|e| match e {
                Error::Config(m) if raw.is_sweep() => Error::Config(format!("sweep point {i}: {m}")),
                other => other,
            })
        })
        .collect()
}

fn raw_text(raw: &RawConfig) -> String {
    raw.entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

fn report_for(cfg: &ExperimentConfig) -> Result<RegimeReport> {
    let bounds = coeff_bounds(&cfg.a, &cfg.b)?;
    let u0_sup = cfg.u0.sample(&cfg.grid).sup_norm();
    Ok(regime_report(&cfg.params, &bounds, u0_sup))
}

pub fn classify(config: &Path, out: Option<&Path>, pool: &Pool) -> Result<Status> {
    let raw = load(config)?;
    let cfgs = resolve_all(&raw)?;
    let reports: Vec<RegimeReport> = pool.map(&cfgs, |_, c| report_for(c)).into_iter().collect::<Result<_>>()?;
    let mut csv = String::from(RegimeReport::csv_header());
    csv.push('\n');
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    let header = if raw.is_sweep() {
        format!("sweep over {} points\n{}", cfgs.len(), raw_text(&raw))
    } else {
        cfgs[0].to_text()
    };
    if raw.is_sweep() {
        print!("{}{csv}", comment(&header));
    } else {
        println!("{}", reports[0]);
        print!("{csv}");
    }
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_with_header(&dir.join("classify.csv"), &header, &csv)?;
    }
    let covered = reports.iter().all(RegimeReport::is_covered);
    Ok(if covered { Status::Pass } else { Status::NoCase })
}

pub struct SimulateOptions {
    pub seed: Option<u64>,
    pub window: f64,
    pub tol: f64,
    pub force: bool,
}

/// Result of one simulation for the sweep summary.
struct RunSummary {
    status: Status,
    case: String,
    max_sup: Option<f64>,
    message: String,
}

pub fn simulate(config: &Path, out: &Path, opts: &SimulateOptions, pool: &Pool) -> Result<Status> {
    let mut raw = load(config)?;
    if let Some(seed) = opts.seed {
        raw.set("u0.seed", seed.to_string());
    }
    if !(opts.window > 0.0 && opts.window < 1.0) {
        return Err(Error::InvalidWindow(opts.window));
    }
    if !(opts.tol >= 0.0 && opts.tol.is_finite()) {
        return Err(Error::Config(format!("--tol {} must be nonnegative", opts.tol)));
    }
    let cfgs = resolve_all(&raw)?;
    ensure_dir(out)?;
    if !raw.is_sweep() {
        let s = run_one(&cfgs[0], out, opts)?;
        print!("{}", s.message);
        return Ok(s.status);
    }
    let results = pool.map(&cfgs, |i, c| run_one(c, &out.join(format!("run_{i:04}")), opts));
    let mut csv = String::from("index,case,status,max_sup,message\n");
    let mut status = Status::Pass;
    for (i, r) in results.into_iter().enumerate() {
        let r = r?;
        status = status.combine(r.status);
        let first_line = r.message.lines().next().unwrap_or("").replace(',', ";");
        let _ = writeln!(
            csv,
            "{i},{},{},{},{first_line}",
            r.case,
            r.status as u8,
            r.max_sup.map_or("NA".into(), |v| format!("{v:e}"))
        );
    }
    let header = format!(
        "sweep over {} points, window = {}, tol = {}\n{}",
        cfgs.len(),
        opts.window,
        opts.tol,
        raw_text(&raw)
    );
    write_with_header(&out.join("sweep.csv"), &header, &csv)?;
    print!("{}{csv}", comment(&header));
    Ok(status)
}

fn case_label(report: &RegimeReport) -> String {
    match (report.case(), report.pure_diffusion) {
        (Some(c), _) => c.to_string(),
        (None, true) => "PureDiffusion".into(),
        (None, false) => "None".into(),
    }
}

fn run_one(cfg: &ExperimentConfig, dir: &Path, opts: &SimulateOptions) -> Result<RunSummary> {
    ensure_dir(dir)?;
    let header = format!("{}window = {}\ntol = {}\n", cfg.to_text(), opts.window, opts.tol);
    let report = report_for(cfg)?;
    let case = case_label(&report);
    write_with_header(&dir.join("regime.txt"), &header, &format!("{report}\n"))?;
    if !report.is_covered() && !opts.force {
        let message = "no boundedness case applies; rerun with --force to simulate anyway\n".to_string();
        write_with_header(&dir.join("summary.txt"), &header, &message)?;
        return Ok(RunSummary {
            status: Status::NoCase,
            case,
            max_sup: None,
            message,
        });
    }
    let sim = Simulator::new(cfg.params, cfg.a, cfg.b, cfg.grid, cfg.stepper.clone())?;
    let traj = match sim.integrate(cfg.u0.sample(&cfg.grid)) {
        Ok(t) => t,
        Err(e) => {
            let status = Status::of_error(&e);
            if status == Status::Config {
                return Err(e);
            }
            let message = format!("run failed: {e}\n");
            write_with_header(&dir.join("summary.txt"), &header, &message)?;
            return Ok(RunSummary {
                status,
                case,
                max_sup: None,
                message,
            });
        }
    };
    write_trajectory(dir, &header, &traj)?;
    let checks = evaluate_checks(&traj, &report, opts);
    write_with_header(&dir.join("checks.csv"), &header, &checks.csv())?;
    let mut message = checks.summary();
    let status = if !report.is_covered() {
        message.push_str("note: no boundedness case applies; nothing to check against\n");
        Status::NoCase
    } else if checks.all_pass() && !checks.notes.iter().any(|n| n.starts_with("unchecked")) {
        Status::Pass
    } else {
        Status::Failed
    };
    let _ = writeln!(message, "case = {case}, max sup u = {:e}, status = {}", traj.max_sup(), status as u8);
    write_with_header(&dir.join("summary.txt"), &header, &message)?;
    Ok(RunSummary {
        status,
        case,
        max_sup: Some(traj.max_sup()),
        message,
    })
}

fn evaluate_checks(traj: &Trajectory, report: &RegimeReport, opts: &SimulateOptions) -> CheckReport {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    if traj.u0_touches_zero {
        notes.push("initial density touches zero; outside the well-posedness hypotheses".into());
    }
    if report.band.is_some() {
        match band_check(traj, report, opts.tol, opts.window) {
            Ok(r) => rows.extend(r),
            Err(e) => notes.push(format!("unchecked band: {e}")),
        }
    } else {
        notes.push("band constants not defined for this regime".into());
    }
    if report.c0.is_some() {
        match drift_gap_check(traj, report) {
            Ok(r) => rows.push(r),
            Err(e) => notes.push(format!("unchecked drift gap: {e}")),
        }
    }
    if let Some(c0) = report.c0 {
        let ratio = traj.max_sup() / c0;
        notes.push(format!("max sup u / C0 = {ratio:.6}"));
    }
    CheckReport {
        window_fraction: opts.window,
        tol: opts.tol,
        rows,
        notes,
    }
}

fn write_trajectory(dir: &Path, header: &str, traj: &Trajectory) -> Result<()> {
    let mut csv = String::from(Trajectory::csv_header());
    csv.push('\n');
    for row in traj.csv_rows() {
        csv.push_str(&row);
        csv.push('\n');
    }
    write_with_header(&dir.join("trajectory.csv"), header, &csv)?;

    // binary snapshots carry their own fixed header; the index records the config
    let snap_dir = dir.join("snapshots");
    ensure_dir(&snap_dir)?;
    let mut index = String::from("file,t\n");
    let states = traj
        .snapshots
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("snap_{i:05}.fxs"), s))
        .chain(std::iter::once(("final.fxs".to_string(), &traj.final_state)));
    for (name, state) in states {
        let path = snap_dir.join(&name);
        let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = std::io::BufWriter::new(file);
        write_snapshot(&mut w, state)?;
        w.flush().map_err(|e| io_err(&path, e))?;
        let _ = writeln!(index, "{name},{:e}", state.t);
    }
    write_with_header(&snap_dir.join("index.csv"), header, &index)
}
