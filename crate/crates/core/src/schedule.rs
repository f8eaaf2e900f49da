//! Piecewise-constant schedules for the sign of the tunneling integral.
//!
//! Boundaries live on an integer tick lattice in units of half a ZB period,
//! `T/2 = π / (2(μ + 2t_p))`. Real time is only produced by `tick * T/2`, so
//! boundary instants are bit-reproducible no matter how many ticks precede
//! them.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{approx_zb_parameters, is_magic, ChainParams, TpSign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start_tick: u64,
    pub sign: TpSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    segments: Vec<Segment>,
    half_period: Option<f64>,
    total_ticks: u64,
}

impl Schedule {
    /// No modulation: `t_p` keeps its original sign forever.
    pub fn off() -> Self {
        Self { segments: Vec::new(), half_period: None, total_ticks: 0 }
    }

    /// One sign per tick. Runs of equal signs are merged into one segment.
    pub fn from_tick_signs(half_period: f64, signs: &[TpSign]) -> Result<Self> {
        if signs.is_empty() {
            return Ok(Self::off());
        }
        if !(half_period.is_finite() && half_period > 0.0) {
            return Err(Error::Schedule(format!("half period must be positive, got {half_period}")));
        }
        let mut segments: Vec<Segment> = Vec::new();
        for (tick, &sign) in signs.iter().enumerate() {
            if segments.last().map(|s| s.sign) != Some(sign) {
                segments.push(Segment { start_tick: tick as u64, sign });
            }
        }
        Ok(Self { segments, half_period: Some(half_period), total_ticks: signs.len() as u64 })
    }

    /// Parses a tick pattern such as `"+-+-++"`.
    pub fn parse_signs(half_period: f64, pattern: &str) -> Result<Self> {
        let signs = pattern
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(TpSign::Plus),
                '-' => Ok(TpSign::Minus),
                other => Err(Error::Schedule(format!("unexpected character {other:?} in sign pattern"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_tick_signs(half_period, &signs)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn half_period(&self) -> Option<f64> {
        self.half_period
    }

    pub fn total_ticks(&self) -> u64 {
        self.total_ticks
    }

    pub fn is_off(&self) -> bool {
        self.segments.is_empty()
    }

    /// Real time of a tick.
    pub fn tick_time(&self, tick: u64) -> f64 {
        match self.half_period {
            Some(h) => tick as f64 * h,
            None => 0.0,
        }
    }

    /// Start times of every segment after the first.
    pub fn boundary_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().skip(1).map(|s| self.tick_time(s.start_tick))
    }

    /// Tick containing `t`, with boundaries belonging to the later tick.
    fn tick_at(&self, h: f64, t: f64) -> u64 {
        let mut tick = (t / h).floor().max(0.0) as u64;
        while self.tick_time(tick + 1) <= t {
            tick += 1;
        }
        while tick > 0 && self.tick_time(tick) > t {
            tick -= 1;
        }
        tick
    }

    fn sign_at(&self, t: f64) -> TpSign {
        let Some(h) = self.half_period else {
            return TpSign::Plus;
        };
        let tick = self.tick_at(h, t);
        let idx = self.segments.partition_point(|s| s.start_tick <= tick);
        self.segments[idx.saturating_sub(1)].sign
    }
}

impl fmt::Display for Schedule {
    /// Tick pattern, one `+`/`-` per tick; empty for an off schedule.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            let end = self.segments.get(i + 1).map_or(self.total_ticks, |s| s.start_tick);
            let c = if seg.sign == TpSign::Plus { '+' } else { '-' };
            for _ in seg.start_tick..end {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

fn alternating(periods: u64) -> impl Iterator<Item = TpSign> {
    (0..2 * periods).map(|i| if i % 2 == 0 { TpSign::Plus } else { TpSign::Minus })
}

fn half_period_of(params: &ChainParams) -> Result<f64> {
    Ok(approx_zb_parameters(params)?.period / 2.0)
}

/// Flip the sign of `t_p` every half period for `n_periods` full periods.
pub fn make_resonant_schedule(params: &ChainParams, n_periods: u64) -> Result<Schedule> {
    if n_periods < 1 {
        return Err(Error::Schedule("resonant schedule needs at least one period".into()));
    }
    if !is_magic(params, 1e-6) {
        log::warn!("resonant drive away from mu = 0, tp = d does not give perfect drift");
    }
    let signs: Vec<_> = alternating(n_periods).collect();
    Schedule::from_tick_signs(half_period_of(params)?, &signs)
}

/// Resonant drive for `on_periods`, then `stop_half_periods` ticks with the
/// original sign, then resonant drive again for `resume_periods`.
pub fn make_windowed_schedule(
    params: &ChainParams,
    on_periods: u64,
    stop_half_periods: u64,
    resume_periods: u64,
) -> Result<Schedule> {
    let signs: Vec<_> = alternating(on_periods)
        .chain(std::iter::repeat_n(TpSign::Plus, stop_half_periods as usize))
        .chain(alternating(resume_periods))
        .collect();
    if signs.is_empty() {
        return Ok(Schedule::off());
    }
    Schedule::from_tick_signs(half_period_of(params)?, &signs)
}

/// Active sign at time `t`; past the last tick the last sign persists.
pub fn tp_sign_at(schedule: &Schedule, t: f64) -> Result<TpSign> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Schedule(format!("time must be >= 0, got {t}")));
    }
    Ok(schedule.sign_at(t))
}
