//! Plain-text `key = value` configuration, one key per line, `#` comments.
//!
//! A value written as a comma list (`0.5, 1, 2`) or a range `lo:hi:n`
//! (`n` evenly spaced points, ends included) turns the file into a sweep;
//! [`RawConfig::expand`] yields the Cartesian product in file order.
//! Vector values (`a.wave`, `u0.wave`) are whitespace separated. Numbers may
//! carry a `pi` factor: `10pi`, `2.5*pi`, `pi`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::evolve::StepperConfig;
use crate::model::{validate_params, CoefficientField, Grid, InitialData, ModelParams};

const MODEL_KEYS: &[&str] = &[
    "alpha", "gamma", "k", "chi1", "chi2", "lambda1", "lambda2", "mu1", "mu2", "dim", "extent", "points",
];
const COEFF_SUBKEYS: &[&str] = &["kind", "mean", "amp_x", "amp_t", "wave", "freq", "phase"];
const U0_SUBKEYS: &[&str] = &["kind", "value", "mean", "amp", "wave", "modes", "seed"];
const STEPPER_KEYS: &[&str] = &[
    "t_end",
    "dt_max",
    "cfl_safety",
    "snapshot_every",
    "positivity_tol",
    "dealias",
    "fixed_dt",
];

fn known_key(key: &str) -> bool {
    if MODEL_KEYS.contains(&key) || STEPPER_KEYS.contains(&key) {
        return true;
    }
    match key.split_once('.') {
        Some(("a", sub)) | Some(("b", sub)) => COEFF_SUBKEYS.contains(&sub),
        Some(("u0", sub)) => U0_SUBKEYS.contains(&sub),
        _ => false,
    }
}

/// Parsed but unresolved configuration, entries in file order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: Vec<(String, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !known_key(k) {
                return Err(Error::Config(format!("line {}: unknown key '{k}'", n + 1)));
            }
            if v.is_empty() {
                return Err(Error::Config(format!("line {}: empty value for '{k}'", n + 1)));
            }
            if entries.iter().any(|(e, _)| e == k) {
                return Err(Error::Config(format!("line {}: duplicate key '{k}'", n + 1)));
            }
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Sets or replaces a key.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn is_sweep(&self) -> bool {
        self.entries.iter().any(|(k, v)| sweep_values(k, v).map(|x| x.len() > 1).unwrap_or(false))
    }

    /// Cartesian product over swept keys; a non-sweep config expands to itself.
    pub fn expand(&self) -> Result<Vec<RawConfig>> {
        let mut out = vec![RawConfig::default()];
        for (k, v) in &self.entries {
            let choices = sweep_values(k, v)?;
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for base in &out {
                for c in &choices {
                    let mut cfg = base.clone();
                    cfg.entries.push((k.clone(), c.clone()));
                    next.push(cfg);
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn resolve(&self) -> Result<ExperimentConfig> {
        if self.is_sweep() {
            return Err(Error::Config("sweep values must be expanded before resolving".into()));
        }
        let num = |key: &str, default: f64| -> Result<f64> {
            match self.get(key) {
                Some(v) => parse_number(key, v),
                None => Ok(default),
            }
        };
        let dim = match self.get("dim") {
            Some(v) => parse_usize("dim", v)?,
            None => 1,
        };
        let d = ModelParams::default();
        let params = validate_params(ModelParams {
            alpha: num("alpha", d.alpha)?,
            gamma: num("gamma", d.gamma)?,
            k: num("k", d.k)?,
            chi1: num("chi1", d.chi1)?,
            chi2: num("chi2", d.chi2)?,
            lambda1: num("lambda1", d.lambda1)?,
            lambda2: num("lambda2", d.lambda2)?,
            mu1: num("mu1", d.mu1)?,
            mu2: num("mu2", d.mu2)?,
            dim,
        })?;
        let default_extent = if dim == 1 { 10.0 * PI } else { 4.0 * PI };
        let default_points = if dim == 1 { 512 } else { 128 };
        let extent = num("extent", default_extent)?;
        let points = match self.get("points") {
            Some(v) => parse_usize("points", v)?,
            None => default_points,
        };
        let grid = Grid::new(dim, &[extent, extent], &[points, points])?;
        let a = self.coefficient("a")?;
        let b = self.coefficient("b")?;
        let u0 = self.initial_data()?;
        let sd = StepperConfig::default();
        let stepper = StepperConfig {
            t_end: num("t_end", sd.t_end)?,
            dt_max: num("dt_max", sd.dt_max)?,
            cfl_safety: num("cfl_safety", sd.cfl_safety)?,
            positivity_tol: num("positivity_tol", sd.positivity_tol)?,
            dealias: match self.get("dealias") {
                Some(v) => parse_bool("dealias", v)?,
                None => sd.dealias,
            },
            snapshot_every: match self.get("snapshot_every") {
                Some(v) => parse_usize("snapshot_every", v)?,
                None => sd.snapshot_every,
            },
            fixed_dt: match self.get("fixed_dt") {
                Some(v) => Some(parse_number("fixed_dt", v)?),
                None => None,
            },
        };
        stepper.validate()?;
        Ok(ExperimentConfig {
            params,
            grid,
            a,
            b,
            u0,
            stepper,
        })
    }

    fn coefficient(&self, name: &str) -> Result<CoefficientField> {
        let key = |s: &str| format!("{name}.{s}");
        let num = |s: &str, default: f64| -> Result<f64> {
            match self.get(&key(s)) {
                Some(v) => parse_number(&key(s), v),
                None => Ok(default),
            }
        };
        match self.get(&key("kind")).unwrap_or("constant") {
            "constant" => Ok(CoefficientField::Constant(num("mean", 1.0)?)),
            "periodic" => Ok(CoefficientField::SpaceTimePeriodic {
                mean: num("mean", 1.0)?,
                amp_x: num("amp_x", 0.0)?,
                amp_t: num("amp_t", 0.0)?,
                wave: match self.get(&key("wave")) {
                    Some(v) => parse_vector(&key("wave"), v)?,
                    None => [0.0; 2],
                },
                freq: num("freq", 0.0)?,
                phase: num("phase", 0.0)?,
            }),
            other => Err(Error::Config(format!(
                "{name}.kind = '{other}', expected constant or periodic"
            ))),
        }
    }

    fn initial_data(&self) -> Result<InitialData> {
        let num = |s: &str, default: f64| -> Result<f64> {
            let k = format!("u0.{s}");
            match self.get(&k) {
                Some(v) => parse_number(&k, v),
                None => Ok(default),
            }
        };
        match self.get("u0.kind").unwrap_or("constant") {
            "constant" => Ok(InitialData::Constant(num("value", 1.0)?)),
            "cosine" => Ok(InitialData::Cosine {
                mean: num("mean", 1.0)?,
                amp: num("amp", 0.0)?,
                wave: match self.get("u0.wave") {
                    Some(v) => parse_vector("u0.wave", v)?,
                    None => [0.0; 2],
                },
            }),
            "random" => Ok(InitialData::RandomSmooth {
                mean: num("mean", 1.0)?,
                amp: num("amp", 0.0)?,
                modes: match self.get("u0.modes") {
                    Some(v) => parse_usize("u0.modes", v)?,
                    None => 8,
                },
                seed: match self.get("u0.seed") {
                    Some(v) => v
                        .parse()
                        .map_err(|_| Error::Config(format!("u0.seed = '{v}' is not an unsigned integer")))?,
                    None => 0,
                },
            }),
            other => Err(Error::Config(format!(
                "u0.kind = '{other}', expected constant, cosine or random"
            ))),
        }
    }
}

/// Candidate values of one entry: a single value, a comma list, or `lo:hi:n`.
fn sweep_values(key: &str, value: &str) -> Result<Vec<String>> {
    if value.contains(',') {
        return Ok(value.split(',').map(|s| s.trim().to_string()).collect());
    }
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() == 3 {
        let lo = parse_number(key, parts[0])?;
        let hi = parse_number(key, parts[1])?;
        let n = parse_usize(key, parts[2])?;
        if n == 0 {
            return Err(Error::Config(format!("{key}: range needs at least one point")));
        }
        if n == 1 {
            return Ok(vec![format!("{lo}")]);
        }
        return Ok((0..n)
            .map(|i| format!("{}", lo + (hi - lo) * i as f64 / (n - 1) as f64))
            .collect());
    }
    Ok(vec![value.to_string()])
}

pub fn parse_number(key: &str, v: &str) -> Result<f64> {
    let v = v.trim();
    let bad = || Error::Config(format!("{key} = '{v}' is not a number"));
    let (body, factor) = match v.strip_suffix("pi") {
        Some(rest) => {
            let rest = rest.trim_end().trim_end_matches('*').trim_end();
            (rest, PI)
        }
        None => (v, 1.0),
    };
    let x = if body.is_empty() {
        1.0
    } else if body == "-" {
        -1.0
    } else {
        body.parse::<f64>().map_err(|_| bad())?
    };
    let x = x * factor;
    if !x.is_finite() {
        return Err(bad());
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key} = '{v}' is not a nonnegative integer")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("{key} = '{v}' is not a boolean"))),
    }
}

fn parse_vector(key: &str, v: &str) -> Result<[f64; 2]> {
    let xs: Vec<f64> = v
        .split_whitespace()
        .map(|s| parse_number(key, s))
        .collect::<Result<_>>()?;
    match xs.len() {
        1 => Ok([xs[0], 0.0]),
        2 => Ok([xs[0], xs[1]]),
        _ => Err(Error::Config(format!("{key} needs one or two components"))),
    }
}

/// Fully resolved single experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub grid: Grid,
    pub a: CoefficientField,
    pub b: CoefficientField,
    pub u0: InitialData,
    pub stepper: StepperConfig,
}

fn coeff_text(out: &mut String, name: &str, c: &CoefficientField) {
    match *c {
        CoefficientField::Constant(v) => {
            let _ = writeln!(out, "{name}.kind = constant\n{name}.mean = {v}");
        }
        CoefficientField::SpaceTimePeriodic {
            mean,
            amp_x,
            amp_t,
            wave,
            freq,
            phase,
        } => {
            let _ = writeln!(
                out,
                "{name}.kind = periodic\n{name}.mean = {mean}\n{name}.amp_x = {amp_x}\n{name}.amp_t = {amp_t}\n{name}.wave = {} {}\n{name}.freq = {freq}\n{name}.phase = {phase}",
                wave[0], wave[1]
            );
        }
    }
}

impl ExperimentConfig {
    /// Every resolved key, defaults included, in config syntax.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let g = &self.grid;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "alpha = {}\ngamma = {}\nk = {}\nchi1 = {}\nchi2 = {}\nlambda1 = {}\nlambda2 = {}\nmu1 = {}\nmu2 = {}\ndim = {}\nextent = {}\npoints = {}",
            p.alpha, p.gamma, p.k, p.chi1, p.chi2, p.lambda1, p.lambda2, p.mu1, p.mu2, p.dim,
            g.extent(0), g.points(0)
        );
        coeff_text(&mut s, "a", &self.a);
        coeff_text(&mut s, "b", &self.b);
        match self.u0 {
            InitialData::Constant(v) => {
                let _ = writeln!(s, "u0.kind = constant\nu0.value = {v}");
            }
            InitialData::Cosine { mean, amp, wave } => {
                let _ = writeln!(s, "u0.kind = cosine\nu0.mean = {mean}\nu0.amp = {amp}\nu0.wave = {} {}", wave[0], wave[1]);
            }
            InitialData::RandomSmooth { mean, amp, modes, seed } => {
                let _ = writeln!(s, "u0.kind = random\nu0.mean = {mean}\nu0.amp = {amp}\nu0.modes = {modes}\nu0.seed = {seed}");
            }
        }
        let st = &self.stepper;
        let _ = writeln!(
            s,
            "t_end = {}\ndt_max = {}\ncfl_safety = {}\npositivity_tol = {}\ndealias = {}\nsnapshot_every = {}",
            st.t_end, st.dt_max, st.cfl_safety, st.positivity_tol, st.dealias, st.snapshot_every
        );
        if let Some(dt) = st.fixed_dt {
            let _ = writeln!(s, "fixed_dt = {dt}");
        }
        s
    }

    /// [`to_text`](Self::to_text) with every line prefixed by `# `.
    pub fn comment_header(&self) -> String {
        self.to_text().lines().map(|l| format!("# {l}\n")).collect()
    }
}
