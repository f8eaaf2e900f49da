//! Run configuration, batch execution and CSV output.
//!
//! A config is plain text with one `key = value` per line; `#` starts a
//! comment. Dotted keys group the initial state, schedule and outputs:
//!
//! ```text
//! mu = 0
//! tp = 1
//! d = 1
//! n_sites = 256
//! initial.kind = delta
//! schedule.kind = off
//! t_final = 10
//! dt_out = 0.01
//! ```
//!
//! Every field is checked before anything is computed, and nothing is
//! written until the whole run has succeeded.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::Error;
use crate::evolver::{drive, record_scheduled, Engine, RunWindow, SpectralEngine};
use crate::model::{approx_zb_parameters, ChainParams, TpSign};
use crate::observables::{zb_from_series, TrajectoryRecord, ZbEstimate};
use crate::oracle::{OracleEngine, MAX_ORACLE_SITES};
use crate::schedule::{make_resonant_schedule, make_windowed_schedule, Schedule};
use crate::state::{delta_packet, separated_gaussian_packet, Spinor, SpinorField};

pub const TRAJECTORY_HEADER: [&str; 6] =
    ["t", "mean_j_particle", "mean_j_hole", "separation", "norm_particle", "norm_hole"];
pub const SNAPSHOT_HEADER: [&str; 4] = ["j", "occupation_signed", "particle_prob", "hole_prob"];
pub const COMPARISON_HEADER: [&str; 2] = ["t", "max_state_diff"];

const KNOWN_KEYS: &[&str] = &[
    "mu",
    "tp",
    "d",
    "n_sites",
    "initial.kind",
    "initial.center",
    "initial.offset",
    "initial.sigma",
    "initial.a_re",
    "initial.a_im",
    "initial.b_re",
    "initial.b_im",
    "schedule.kind",
    "schedule.periods",
    "schedule.on_periods",
    "schedule.stop_half_periods",
    "schedule.resume_periods",
    "schedule.signs",
    "t_final",
    "dt_out",
    "snapshots",
    "engine",
    "output.trajectory",
    "output.snapshot_prefix",
    "output.comparison",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Spectral,
    Oracle,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Delta { site: usize, spinor: Spinor },
    /// Particle at `center + offset`, hole at `center - offset`.
    Gaussian { center: usize, offset: i64, sigma: f64, spinor: Spinor },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleSpec {
    Off,
    Resonant { periods: u64 },
    Windowed { on_periods: u64, stop_half_periods: u64, resume_periods: u64 },
    /// One `+`/`-` per half period.
    Custom { signs: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub trajectory: PathBuf,
    /// Snapshot files are `<prefix>_t<time>.csv`.
    pub snapshot_prefix: PathBuf,
    pub comparison: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ChainParams,
    pub initial: InitialSpec,
    pub schedule: ScheduleSpec,
    pub t_final: f64,
    pub dt_out: f64,
    pub snapshots: Vec<f64>,
    pub outputs: OutputPaths,
    pub engine: EngineChoice,
}

/// One problem with one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

/// Every problem found in a config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<FieldError>);

impl ConfigErrors {
    pub fn mentions(&self, field: &str) -> bool {
        self.0.iter().any(|e| e.field.split(", ").any(|f| f == field))
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", e.field, e.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error:\n{0}")]
    Config(ConfigErrors),
    #[error("{0}")]
    Numeric(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: malformed trajectory CSV: {message}")]
    Csv { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } | CliError::Csv { .. } => 4,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

struct Fields {
    values: BTreeMap<String, (usize, String)>,
    errors: Vec<FieldError>,
}

impl Fields {
    fn error(&mut self, field: &str, message: impl Into<String>) {
        self.errors.push(FieldError { field: field.into(), message: message.into() });
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(_, v)| v.as_str())
    }

    fn float(&mut self, key: &str, default: Option<f64>) -> Option<f64> {
        let Some(raw) = self.raw(key) else {
            if default.is_none() {
                self.error(key, "required");
            }
            return default;
        };
        match raw.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                let msg = format!("expected a finite number, got {raw:?}");
                self.error(key, msg);
                None
            }
        }
    }

    fn int<T: std::str::FromStr>(&mut self, key: &str, default: Option<T>) -> Option<T> {
        let Some(raw) = self.raw(key) else {
            if default.is_none() {
                self.error(key, "required");
            }
            return default;
        };
        match raw.parse::<T>() {
            Ok(x) => Some(x),
            Err(_) => {
                let msg = format!("expected an integer, got {raw:?}");
                self.error(key, msg);
                None
            }
        }
    }

    fn text(&self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    /// Flags keys that do not belong to the chosen variant.
    fn reject_unused(&mut self, keys: &[&str], context: &str) {
        for &k in keys {
            if self.values.contains_key(k) {
                self.error(k, format!("not used with {context}"));
            }
        }
    }
}

fn tokenize(text: &str) -> Fields {
    let mut fields = Fields { values: BTreeMap::new(), errors: Vec::new() };
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            fields.error(&format!("line {lineno}"), format!("expected `key = value`, got {line:?}"));
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            fields.error(key, format!("unknown key (line {lineno})"));
            continue;
        }
        if let Some((first, _)) = fields.values.get(key) {
            let msg = format!("given twice (lines {first} and {lineno})");
            fields.error(key, msg);
            continue;
        }
        fields.values.insert(key.to_string(), (lineno, value.to_string()));
    }
    fields
}

fn parse_params(f: &mut Fields) -> Option<ChainParams> {
    let mu = f.float("mu", None);
    let tp = f.float("tp", None);
    let d = f.float("d", None);
    let n = f.int::<usize>("n_sites", None);
    if let Some(d) = d {
        if d <= 0.0 {
            f.error("d", format!("must be > 0, got {d}"));
        }
    }
    if let Some(n) = n {
        if n < 8 || !n.is_multiple_of(2) {
            f.error("n_sites", format!("must be even and >= 8, got {n}"));
        }
    }
    ChainParams::new(mu?, tp?, d?, n?).ok()
}

fn parse_initial(f: &mut Fields, n: Option<usize>) -> Option<InitialSpec> {
    let kind = f.text("initial.kind", "gaussian");
    let a_re = f.float("initial.a_re", Some(std::f64::consts::FRAC_1_SQRT_2));
    let a_im = f.float("initial.a_im", Some(0.0));
    let b_re = f.float("initial.b_re", Some(-std::f64::consts::FRAC_1_SQRT_2));
    let b_im = f.float("initial.b_im", Some(0.0));
    let spinor = Spinor::new(Complex64::new(a_re?, a_im?), Complex64::new(b_re?, b_im?));
    let norm = spinor.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        f.error(
            "initial.a_re, initial.a_im, initial.b_re, initial.b_im",
            format!("spinor must satisfy |a|^2 + |b|^2 = 1, got {norm}"),
        );
    }
    let center = f.int::<usize>("initial.center", n.map(|n| n / 2));
    if let (Some(c), Some(n)) = (center, n) {
        if c >= n {
            f.error("initial.center", format!("must be < n_sites = {n}, got {c}"));
        }
    }
    match kind.as_str() {
        "delta" => {
            f.reject_unused(&["initial.sigma", "initial.offset"], "initial.kind = delta");
            Some(InitialSpec::Delta { site: center?, spinor })
        }
        "gaussian" => {
            let sigma = f.float("initial.sigma", None);
            let offset = f.int::<i64>("initial.offset", Some(0));
            if let (Some(s), Some(n)) = (sigma, n) {
                let max = n as f64 / 8.0;
                if !(s > 0.0 && s < max) {
                    f.error("initial.sigma", format!("must lie in (0, {max}), got {s}"));
                }
            }
            if let (Some(o), Some(n)) = (offset, n) {
                if o.unsigned_abs() >= n as u64 / 2 {
                    f.error("initial.offset", format!("must satisfy |offset| < n_sites / 2, got {o}"));
                }
            }
            Some(InitialSpec::Gaussian { center: center?, offset: offset?, sigma: sigma?, spinor })
        }
        other => {
            f.error("initial.kind", format!("expected gaussian or delta, got {other:?}"));
            None
        }
    }
}

fn parse_schedule(f: &mut Fields) -> Option<ScheduleSpec> {
    const ALL: [&str; 5] = [
        "schedule.periods",
        "schedule.on_periods",
        "schedule.stop_half_periods",
        "schedule.resume_periods",
        "schedule.signs",
    ];
    let kind = f.text("schedule.kind", "off");
    let others = |used: &[&str]| -> Vec<&'static str> { ALL.iter().copied().filter(|k| !used.contains(k)).collect() };
    let context = format!("schedule.kind = {kind}");
    match kind.as_str() {
        "off" => {
            f.reject_unused(&ALL, &context);
            Some(ScheduleSpec::Off)
        }
        "resonant" => {
            f.reject_unused(&others(&["schedule.periods"]), &context);
            let periods = f.int::<u64>("schedule.periods", None)?;
            if periods < 1 {
                f.error("schedule.periods", "must be at least 1");
            }
            Some(ScheduleSpec::Resonant { periods })
        }
        "windowed" => {
            let used = ["schedule.on_periods", "schedule.stop_half_periods", "schedule.resume_periods"];
            f.reject_unused(&others(&used), &context);
            let on_periods = f.int::<u64>(used[0], None);
            let stop_half_periods = f.int::<u64>(used[1], None);
            let resume_periods = f.int::<u64>(used[2], Some(0));
            Some(ScheduleSpec::Windowed {
                on_periods: on_periods?,
                stop_half_periods: stop_half_periods?,
                resume_periods: resume_periods?,
            })
        }
        "custom" => {
            f.reject_unused(&others(&["schedule.signs"]), &context);
            let Some(signs) = f.raw("schedule.signs").map(str::to_string) else {
                f.error("schedule.signs", "required");
                return None;
            };
            if let Some(bad) = signs.chars().find(|c| !matches!(c, '+' | '-' | ' ' | ',')) {
                f.error("schedule.signs", format!("unexpected character {bad:?}"));
                return None;
            }
            Some(ScheduleSpec::Custom { signs })
        }
        other => {
            f.error("schedule.kind", format!("expected off, resonant, windowed or custom, got {other:?}"));
            None
        }
    }
}

fn parse_snapshots(f: &mut Fields) -> Vec<f64> {
    let Some(raw) = f.raw("snapshots").map(str::to_string) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.parse::<f64>() {
            Ok(t) if t.is_finite() => out.push(t),
            _ => f.error("snapshots", format!("expected comma-separated times, got {item:?}")),
        }
    }
    out
}

/// Parses and validates a config. Relative output paths are kept as given.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let mut f = tokenize(text);
    let params = parse_params(&mut f);
    let n = params.map(|p| p.n_sites);
    let initial = parse_initial(&mut f, n);
    let schedule = parse_schedule(&mut f);
    let t_final = f.float("t_final", None);
    let dt_out = f.float("dt_out", None);
    let snapshots = parse_snapshots(&mut f);
    let engine = match f.text("engine", "spectral").as_str() {
        "spectral" => Some(EngineChoice::Spectral),
        "oracle" => Some(EngineChoice::Oracle),
        "both" => Some(EngineChoice::Both),
        other => {
            f.error("engine", format!("expected spectral, oracle or both, got {other:?}"));
            None
        }
    };
    let outputs = OutputPaths {
        trajectory: f.text("output.trajectory", "trajectory.csv").into(),
        snapshot_prefix: f.text("output.snapshot_prefix", "snapshot").into(),
        comparison: f.text("output.comparison", "comparison.csv").into(),
    };

    if let Some(t) = t_final {
        if t <= 0.0 {
            f.error("t_final", format!("must be > 0, got {t}"));
        }
        if let Some(bad) = snapshots.iter().find(|&&s| !(0.0..=t).contains(&s)) {
            f.error("snapshots", format!("time {bad} outside [0, {t}]"));
        }
    }
    if let Some(dt) = dt_out {
        if dt <= 0.0 {
            f.error("dt_out", format!("must be > 0, got {dt}"));
        }
    }
    if let (Some(e), Some(n)) = (engine, n) {
        if e != EngineChoice::Spectral && n > MAX_ORACLE_SITES {
            f.error("engine", format!("the oracle supports at most {MAX_ORACLE_SITES} sites, n_sites = {n}"));
        }
    }
    // module preconditions that depend on several fields at once
    if let (Some(p), Some(s)) = (params, &schedule) {
        if let Err(e) = build_schedule(&p, s) {
            f.error("schedule.kind", e.to_string());
        }
    }
    if let (Some(p), Some(init)) = (params, &initial) {
        if f.errors.is_empty() {
            if let Err(e) = build_initial(p.n_sites, init) {
                f.error("initial.kind", e.to_string());
            }
        }
    }

    if !f.errors.is_empty() {
        return Err(ConfigErrors(f.errors));
    }
    Ok(RunConfig {
        params: params.expect("checked"),
        initial: initial.expect("checked"),
        schedule: schedule.expect("checked"),
        t_final: t_final.expect("checked"),
        dt_out: dt_out.expect("checked"),
        snapshots,
        outputs,
        engine: engine.expect("checked"),
    })
}

/// Reads a config file; relative output paths are resolved against the
/// file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut config = parse_config(&text).map_err(CliError::Config)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for p in [
        &mut config.outputs.trajectory,
        &mut config.outputs.snapshot_prefix,
        &mut config.outputs.comparison,
    ] {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(config)
}

pub fn build_schedule(params: &ChainParams, spec: &ScheduleSpec) -> Result<Schedule, Error> {
    match spec {
        ScheduleSpec::Off => Ok(Schedule::off()),
        ScheduleSpec::Resonant { periods } => make_resonant_schedule(params, *periods),
        ScheduleSpec::Windowed { on_periods, stop_half_periods, resume_periods } => {
            make_windowed_schedule(params, *on_periods, *stop_half_periods, *resume_periods)
        }
        ScheduleSpec::Custom { signs } => {
            let half = approx_zb_parameters(params)?.period / 2.0;
            Schedule::parse_signs(half, signs)
        }
    }
}

pub fn build_initial(n_sites: usize, spec: &InitialSpec) -> Result<SpinorField, Error> {
    match *spec {
        InitialSpec::Delta { site, spinor } => delta_packet(n_sites, site, spinor),
        InitialSpec::Gaussian { center, offset, sigma, spinor } => {
            separated_gaussian_packet(n_sites, center, offset, sigma, spinor)
        }
    }
}

/// Everything a run produces, held in memory until written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: TrajectoryRecord,
    /// `(t, max_state_diff)` per sample, with engine = both.
    pub comparison: Option<Vec<(f64, f64)>>,
}

impl RunOutput {
    pub fn max_state_diff(&self) -> Option<f64> {
        self.comparison.as_ref().map(|c| c.iter().map(|&(_, d)| d).fold(0.0, f64::max))
    }
}

/// Two engines advanced in lockstep. The field carries both states side by
/// side: the first `n` sites belong to `a`, the next `n` to `b`.
struct Tandem<'a> {
    a: &'a dyn Engine,
    b: &'a dyn Engine,
}

impl Tandem<'_> {
    fn join(x: &SpinorField, y: &SpinorField) -> SpinorField {
        SpinorField {
            particle: x.particle.iter().chain(&y.particle).copied().collect(),
            hole: x.hole.iter().chain(&y.hole).copied().collect(),
        }
    }

    fn split(z: &SpinorField) -> (SpinorField, SpinorField) {
        let n = z.n_sites() / 2;
        (
            SpinorField { particle: z.particle[..n].to_vec(), hole: z.hole[..n].to_vec() },
            SpinorField { particle: z.particle[n..].to_vec(), hole: z.hole[n..].to_vec() },
        )
    }
}

impl Engine for Tandem<'_> {
    fn n_sites(&self) -> usize {
        2 * self.a.n_sites()
    }

    fn evolve(&self, state: &SpinorField, sign: TpSign, dt: f64) -> crate::Result<SpinorField> {
        let (x, y) = Self::split(state);
        Ok(Self::join(&self.a.evolve(&x, sign, dt)?, &self.b.evolve(&y, sign, dt)?))
    }
}

/// Runs a validated config without touching the filesystem.
pub fn execute(config: &RunConfig) -> Result<RunOutput, Error> {
    let params = config.params;
    let initial = build_initial(params.n_sites, &config.initial)?;
    let schedule = build_schedule(&params, &config.schedule)?;
    let mut window = RunWindow::new(0.0, config.t_final, config.dt_out);
    window.snapshot_times = config.snapshots.clone();

    let spectral = SpectralEngine::new(params);
    match config.engine {
        EngineChoice::Spectral => {
            let (record, _) = record_scheduled(&spectral, &initial, &schedule, &window)?;
            Ok(RunOutput { record, comparison: None })
        }
        EngineChoice::Oracle => {
            let oracle = OracleEngine::new(params)?;
            let (record, _) = record_scheduled(&oracle, &initial, &schedule, &window)?;
            Ok(RunOutput { record, comparison: None })
        }
        EngineChoice::Both => {
            let oracle = OracleEngine::new(params)?;
            let (record, _) = record_scheduled(&spectral, &initial, &schedule, &window)?;
            let tandem = Tandem { a: &spectral, b: &oracle };
            let mut comparison = Vec::with_capacity(record.len());
            drive(&tandem, &Tandem::join(&initial, &initial), &schedule, &window, |ev, st| {
                if ev.sample {
                    let (x, y) = Tandem::split(st);
                    comparison.push((ev.t, x.max_abs_diff(&y)));
                }
                Ok(())
            })?;
            Ok(RunOutput { record, comparison: Some(comparison) })
        }
    }
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf)
}

fn csv_bytes<const W: usize>(header: [&str; W], rows: impl Iterator<Item = [String; W]>) -> Vec<u8> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(header).expect("in-memory write");
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    buf
}

/// Trajectory CSV; numbers use the shortest decimal that round-trips.
pub fn trajectory_csv(record: &TrajectoryRecord) -> Vec<u8> {
    csv_bytes(
        TRAJECTORY_HEADER,
        (0..record.len()).map(|i| {
            [
                record.times[i].to_string(),
                record.mean_j_particle[i].to_string(),
                record.mean_j_hole[i].to_string(),
                record.separation[i].to_string(),
                record.norm_particle[i].to_string(),
                record.norm_hole[i].to_string(),
            ]
        }),
    )
}

pub fn snapshot_path(prefix: &Path, time: f64) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(format!("_t{time}.csv"));
    PathBuf::from(name)
}

/// Output files and their contents, in write order.
pub fn render_outputs(config: &RunConfig, output: &RunOutput) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = vec![(config.outputs.trajectory.clone(), trajectory_csv(&output.record))];
    for snap in &output.record.snapshots {
        let occ = snap.occupation_signed();
        let bytes = csv_bytes(
            SNAPSHOT_HEADER,
            (0..occ.len()).map(|j| {
                [j.to_string(), occ[j].to_string(), snap.particle_prob[j].to_string(), snap.hole_prob[j].to_string()]
            }),
        );
        files.push((snapshot_path(&config.outputs.snapshot_prefix, snap.time), bytes));
    }
    if let Some(cmp) = &output.comparison {
        let bytes = csv_bytes(COMPARISON_HEADER, cmp.iter().map(|(t, d)| [t.to_string(), d.to_string()]));
        files.push((config.outputs.comparison.clone(), bytes));
    }
    files
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(bytes).map_err(|e| CliError::io(path, e))
}

/// Executes a config and writes its outputs. Returns the paths written.
pub fn run(config: &RunConfig) -> Result<(RunOutput, Vec<PathBuf>), CliError> {
    let output = execute(config)?;
    let files = render_outputs(config, &output);
    for (path, bytes) in &files {
        write_file(path, bytes)?;
    }
    Ok((output, files.into_iter().map(|(p, _)| p).collect()))
}

/// Reads a trajectory CSV written by [`run`].
pub fn read_trajectory(path: &Path) -> Result<TrajectoryRecord, CliError> {
    let bad = |message: String| CliError::Csv { path: path.to_path_buf(), message };
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(TRAJECTORY_HEADER) {
        return Err(bad(format!("expected header {}, got {}", TRAJECTORY_HEADER.join(","), header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut record = TrajectoryRecord::new(0);
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let mut v = [0.0; 6];
        for (slot, cell) in v.iter_mut().zip(row.iter()) {
            *slot = cell.parse().map_err(|_| bad(format!("row {}: cannot parse {cell:?}", i + 2)))?;
        }
        if row.len() != 6 {
            return Err(bad(format!("row {}: expected 6 fields, got {}", i + 2, row.len())));
        }
        if record.times.last().is_some_and(|&t| v[0] <= t) {
            return Err(bad(format!("row {}: times must increase", i + 2)));
        }
        record.push_values(v[0], v[1], v[2], v[4], v[5]);
        // keep the stored separation rather than recomputing it
        *record.separation.last_mut().expect("just pushed") = v[3];
    }
    Ok(record)
}

/// Amplitude and period of the separation column of a trajectory CSV.
pub fn zb_extract_file(path: &Path) -> Result<ZbEstimate, CliError> {
    let record = read_trajectory(path)?;
    Ok(zb_from_series(&record.times, &record.separation)?)
}
