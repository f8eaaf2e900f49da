//! Exact propagation in the paired momentum representation.
//!
//! Each mode evolves under a constant 2×2 field, so its propagator is the
//! closed-form rotation `cos(EΔt) I - i sin(EΔt) n·σ`. There is no time step:
//! a constant-sign segment of any length is one analytic update.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{effective_field, gap, xi, ChainParams, EffectiveField, TpSign};
use crate::observables::{density_center, mean_positions, Snapshot, TrajectoryRecord};
use crate::schedule::{tp_sign_at, Schedule};
use crate::state::{from_k_paired, to_k_paired, KPairedField, SpinorField};

/// Modes are handed to rayon in chunks of at least this many.
const PAR_MODE_CHUNK: usize = 4096;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator {
    pub u: [[Complex64; 2]; 2],
}

impl ModePropagator {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self { u: [[one, zero], [zero, one]] }
    }

    fn from_field(field: &EffectiveField, dt: f64) -> Self {
        if field.is_degenerate() {
            return Self::identity();
        }
        let (s, c) = (field.strength * dt).sin_cos();
        let [nx, ny, nz] = field.axis;
        // n·σ = [[nz, nx - i ny], [nx + i ny, -nz]]
        let ms = -I * s;
        Self {
            u: [
                [c + ms * nz, ms * Complex64::new(nx, -ny)],
                [ms * Complex64::new(nx, ny), c - ms * nz],
            ],
        }
    }

    #[inline]
    pub fn apply(&self, s: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.u[0][0] * s[0] + self.u[0][1] * s[1],
            self.u[1][0] * s[0] + self.u[1][1] * s[1],
        ]
    }

    /// Largest entry of `U†U - I`.
    pub fn unitarity_error(&self) -> f64 {
        let u = &self.u;
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let v = u[0][r].conj() * u[0][c] + u[1][r].conj() * u[1][c];
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }
}

/// `exp(-i H(k) dt)` for the chain with `t_p` multiplied by `sign`.
pub fn propagator(params: &ChainParams, sign: TpSign, k: f64, dt: f64) -> ModePropagator {
    ModePropagator::from_field(&effective_field(&params.with_tp_sign(sign), k), dt)
}

/// A way of evolving a state for a duration at fixed drive sign.
pub trait Engine {
    fn n_sites(&self) -> usize;

    fn evolve(&self, state: &SpinorField, sign: TpSign, dt: f64) -> Result<SpinorField>;
}

pub(crate) fn check_step(engine_sites: usize, state: &SpinorField, dt: f64) -> Result<()> {
    if state.n_sites() != engine_sites {
        return Err(Error::DimensionMismatch { left: state.n_sites(), right: engine_sites });
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::Window(format!("duration must be finite and >= 0, got {dt}")));
    }
    Ok(())
}

/// Paired-momentum engine with the per-mode fields cached for both signs.
#[derive(Debug, Clone)]
pub struct SpectralEngine {
    params: ChainParams,
    fields_plus: Vec<EffectiveField>,
    fields_minus: Vec<EffectiveField>,
}

impl SpectralEngine {
    pub fn new(params: ChainParams) -> Self {
        let grid = params.k_grid();
        let fields = |sign| {
            let p = params.with_tp_sign(sign);
            grid.iter().map(|&k| effective_field(&p, k)).collect()
        };
        Self { params, fields_plus: fields(TpSign::Plus), fields_minus: fields(TpSign::Minus) }
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    fn fields(&self, sign: TpSign) -> &[EffectiveField] {
        match sign {
            TpSign::Plus => &self.fields_plus,
            TpSign::Minus => &self.fields_minus,
        }
    }

    /// Applies the mode propagators in place.
    pub fn evolve_paired(&self, kfield: &mut KPairedField, sign: TpSign, dt: f64) {
        let fields = self.fields(sign);
        kfield
            .modes
            .par_iter_mut()
            .zip(fields.par_iter())
            .with_min_len(PAR_MODE_CHUNK)
            .for_each(|(s, f)| *s = ModePropagator::from_field(f, dt).apply(*s));
    }
}

impl Engine for SpectralEngine {
    fn n_sites(&self) -> usize {
        self.params.n_sites
    }

    fn evolve(&self, state: &SpinorField, sign: TpSign, dt: f64) -> Result<SpinorField> {
        check_step(self.params.n_sites, state, dt)?;
        if dt == 0.0 {
            return Ok(state.clone());
        }
        let mut k = to_k_paired(state);
        self.evolve_paired(&mut k, sign, dt);
        Ok(from_k_paired(&k))
    }
}

/// Evolve `state` for `dt` with `t_p` multiplied by `sign`.
pub fn evolve(state: &SpinorField, params: &ChainParams, sign: TpSign, dt: f64) -> Result<SpinorField> {
    SpectralEngine::new(*params).evolve(state, sign, dt)
}

/// `Σ_k s(k)† H(k) s(k)` for a paired field.
pub fn paired_energy(kfield: &KPairedField, params: &ChainParams, sign: TpSign) -> f64 {
    let p = params.with_tp_sign(sign);
    p.k_grid()
        .iter()
        .zip(&kfield.modes)
        .map(|(&k, [f, h])| {
            let e = xi(&p, k);
            let delta = gap(&p, k);
            e * (f.norm_sqr() - h.norm_sqr()) + 2.0 * (f.conj() * delta * h).re
        })
        .sum()
}

/// Sampling plan for a scheduled run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunWindow {
    pub t0: f64,
    pub t1: f64,
    pub dt_out: f64,
    /// Extra instants at which site profiles are recorded.
    pub snapshot_times: Vec<f64>,
    /// Position origin; defaults to the initial density center.
    pub reference: Option<usize>,
}

impl RunWindow {
    pub fn new(t0: f64, t1: f64, dt_out: f64) -> Self {
        Self { t0, t1, dt_out, snapshot_times: Vec::new(), reference: None }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t1.is_finite() && self.t0 >= 0.0) {
            return Err(Error::Window(format!("window [{}, {}] must be finite and start at t >= 0", self.t0, self.t1)));
        }
        if self.t1 < self.t0 {
            return Err(Error::Window(format!("t1 = {} precedes t0 = {}", self.t1, self.t0)));
        }
        if !(self.dt_out > 0.0 && self.dt_out.is_finite()) {
            return Err(Error::Window(format!("dt_out must be > 0, got {}", self.dt_out)));
        }
        if let Some(&t) = self.snapshot_times.iter().find(|&&t| !(t >= self.t0 && t <= self.t1)) {
            return Err(Error::Window(format!("snapshot time {t} outside [{}, {}]", self.t0, self.t1)));
        }
        Ok(())
    }
}

/// One instant the driver stops at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub sample: bool,
    pub snapshot: bool,
}

/// Sample grid, schedule boundaries and snapshot times, merged. Instants
/// closer than a billionth of `dt_out` are one event; a segment boundary's
/// exact time wins over a nearby grid time.
fn plan_events(window: &RunWindow, boundaries: &[f64]) -> Vec<Event> {
    let tol = 1e-9 * window.dt_out;
    let span = window.t1 - window.t0;
    let n = (span / window.dt_out + 1e-9).floor() as u64;
    // (time, priority, sample, snapshot); lower priority value wins the merge
    let mut raw: Vec<(f64, u8, bool, bool)> = Vec::new();
    raw.extend((0..=n).map(|i| (window.t0 + i as f64 * window.dt_out, 1, true, false)));
    raw.push((window.t1, 0, true, false));
    raw.extend(boundaries.iter().map(|&b| (b, 0, true, false)));
    raw.extend(window.snapshot_times.iter().map(|&t| (t, 2, false, true)));
    raw.retain(|e| e.0 >= window.t0 && e.0 <= window.t1 + tol);
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut events: Vec<(Event, u8)> = Vec::new();
    for (t, prio, sample, snapshot) in raw {
        let t = t.min(window.t1);
        match events.last_mut() {
            Some((last, last_prio)) if (t - last.t).abs() <= tol => {
                if prio < *last_prio {
                    last.t = t;
                    *last_prio = prio;
                }
                last.sample |= sample;
                last.snapshot |= snapshot;
            }
            _ => events.push((Event { t, sample, snapshot }, prio)),
        }
    }
    events.into_iter().map(|(e, _)| e).collect()
}

/// Drives `engine` through `schedule` over the window, calling `visit` at
/// every event with the exact state at that instant. Each constant-sign
/// segment is propagated from its own start state, so sampling never feeds
/// back into the trajectory. Returns the state at `t1`.
pub fn drive<E, F>(engine: &E, initial: &SpinorField, schedule: &Schedule, window: &RunWindow, mut visit: F) -> Result<SpinorField>
where
    E: Engine + ?Sized,
    F: FnMut(&Event, &SpinorField) -> Result<()>,
{
    window.validate()?;
    check_step(engine.n_sites(), initial, 0.0)?;
    let boundaries: Vec<f64> = schedule
        .boundary_times()
        .filter(|&b| b > window.t0 && b < window.t1)
        .collect();
    let events = plan_events(window, &boundaries);

    let mut seg_start = window.t0;
    let mut seg_state = initial.clone();
    let mut sign = tp_sign_at(schedule, window.t0)?;
    let mut next_boundary = boundaries.iter().peekable();
    let mut last = initial.clone();
    for ev in &events {
        while let Some(&&b) = next_boundary.peek() {
            if b > ev.t {
                break;
            }
            seg_state = engine.evolve(&seg_state, sign, b - seg_start)?;
            seg_start = b;
            sign = tp_sign_at(schedule, b)?;
            next_boundary.next();
        }
        last = engine.evolve(&seg_state, sign, ev.t - seg_start)?;
        visit(ev, &last)?;
    }
    Ok(last)
}

/// Runs a schedule and records observables; also returns the final state.
pub fn record_scheduled<E: Engine + ?Sized>(
    engine: &E,
    initial: &SpinorField,
    schedule: &Schedule,
    window: &RunWindow,
) -> Result<(TrajectoryRecord, SpinorField)> {
    let reference = window.reference.unwrap_or_else(|| density_center(initial));
    let mut record = TrajectoryRecord::new(reference);
    let last = drive(engine, initial, schedule, window, |ev, st| {
        if ev.sample {
            let (je, jh) = mean_positions(st, reference)?;
            record.push_values(ev.t, je, jh, st.norm_particle(), st.norm_hole());
        }
        if ev.snapshot {
            record.snapshots.push(Snapshot::capture(ev.t, st));
        }
        Ok(())
    })?;
    Ok((record, last))
}

/// Spectral run of `schedule` over `[t0, t1]`, sampled every `dt_out` and at
/// every drive flip.
pub fn evolve_scheduled(
    state: &SpinorField,
    params: &ChainParams,
    schedule: &Schedule,
    t0: f64,
    t1: f64,
    dt_out: f64,
) -> Result<TrajectoryRecord> {
    let engine = SpectralEngine::new(*params);
    Ok(record_scheduled(&engine, state, schedule, &RunWindow::new(t0, t1, dt_out))?.0)
}
