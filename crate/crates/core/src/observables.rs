//! Physical read-outs of states and trajectories.
//!
//! Mean positions use the unnormalized weighting: the particle mean is
//! `Σ_j (j - ref) |u_j|²` without dividing by the particle norm, so a delta
//! packet gives `sin²(2dt)/2` at the flat-band point. The separation series
//! `⟨j_e⟩ - ⟨j_h⟩` then oscillates between 0 and 1. Packet centers (divided by
//! the component norm) are available separately; those measure the distance
//! between the particle and hole packets themselves.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{ring_offset, SpinorField};

/// Fraction of the norm allowed within 2 sites of the seam before positions
/// are refused.
const SEAM_MASS_LIMIT: f64 = 0.01;

fn seam_mass(state: &SpinorField, reference: usize) -> f64 {
    let n = state.n_sites();
    let edge = n as i64 / 2 - 2;
    (0..n)
        .filter(|&j| {
            let x = ring_offset(j, reference, n);
            x < -edge || x >= edge
        })
        .map(|j| state.particle[j].norm_sqr() + state.hole[j].norm_sqr())
        .sum()
}

fn weighted_offsets(v: &[Complex64], reference: usize) -> f64 {
    let n = v.len();
    v.iter()
        .enumerate()
        .map(|(j, z)| ring_offset(j, reference, n) as f64 * z.norm_sqr())
        .sum()
}

/// Unnormalized mean positions `(⟨j_e⟩, ⟨j_h⟩)` relative to `reference`,
/// with coordinates unwrapped about it.
pub fn mean_positions(state: &SpinorField, reference: usize) -> Result<(f64, f64)> {
    let mass = seam_mass(state, reference);
    if mass > SEAM_MASS_LIMIT {
        return Err(Error::SeamProximity { mass });
    }
    Ok((weighted_offsets(&state.particle, reference), weighted_offsets(&state.hole, reference)))
}

/// Packet centers, each divided by its component norm. `None` for an empty
/// component.
pub fn component_centers(state: &SpinorField, reference: usize) -> Result<(Option<f64>, Option<f64>)> {
    let (je, jh) = mean_positions(state, reference)?;
    let center = |mean: f64, norm: f64| (norm > 0.0).then(|| mean / norm);
    Ok((center(je, state.norm_particle()), center(jh, state.norm_hole())))
}

/// Site nearest to the circular mean of the total density.
pub fn density_center(state: &SpinorField) -> usize {
    let n = state.n_sites();
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let (s, c) = (0..n).fold((0.0, 0.0), |(s, c), j| {
        let w = state.particle[j].norm_sqr() + state.hole[j].norm_sqr();
        let a = step * j as f64;
        (s + w * a.sin(), c + w * a.cos())
    });
    let angle = s.atan2(c).rem_euclid(2.0 * std::f64::consts::PI);
    ((angle / step).round() as usize) % n
}

/// `|⟨a|b⟩|` over both components; insensitive to a global phase.
pub fn profile_fidelity(a: &SpinorField, b: &SpinorField) -> Result<f64> {
    if a.n_sites() != b.n_sites() {
        return Err(Error::DimensionMismatch { left: a.n_sites(), right: b.n_sites() });
    }
    let overlap: Complex64 = a
        .particle
        .iter()
        .zip(&b.particle)
        .chain(a.hole.iter().zip(&b.hole))
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm().min(1.0))
}

/// `|u_j|² - |v_j|²` per site; negative values are hole occupation.
pub fn occupation_profile(state: &SpinorField) -> Vec<f64> {
    state
        .particle
        .iter()
        .zip(&state.hole)
        .map(|(u, v)| u.norm_sqr() - v.norm_sqr())
        .collect()
}

/// Site probabilities recorded at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub particle_prob: Vec<f64>,
    pub hole_prob: Vec<f64>,
}

impl Snapshot {
    pub fn capture(time: f64, state: &SpinorField) -> Self {
        Self {
            time,
            particle_prob: state.particle.iter().map(|z| z.norm_sqr()).collect(),
            hole_prob: state.hole.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn occupation_signed(&self) -> Vec<f64> {
        self.particle_prob.iter().zip(&self.hole_prob).map(|(p, h)| p - h).collect()
    }
}

/// Time series of observables from one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryRecord {
    /// Site the positions are measured from.
    pub reference: usize,
    pub times: Vec<f64>,
    pub mean_j_particle: Vec<f64>,
    pub mean_j_hole: Vec<f64>,
    pub separation: Vec<f64>,
    pub norm_particle: Vec<f64>,
    pub norm_hole: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
}

impl TrajectoryRecord {
    pub fn new(reference: usize) -> Self {
        Self { reference, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one sample; times must be strictly increasing.
    pub fn push(&mut self, time: f64, state: &SpinorField) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if time <= last {
                return Err(Error::Window(format!("sample time {time} does not follow {last}")));
            }
        }
        let (je, jh) = mean_positions(state, self.reference)?;
        self.push_values(time, je, jh, state.norm_particle(), state.norm_hole());
        Ok(())
    }

    pub(crate) fn push_values(&mut self, time: f64, je: f64, jh: f64, np: f64, nh: f64) {
        self.times.push(time);
        self.mean_j_particle.push(je);
        self.mean_j_hole.push(jh);
        self.separation.push(je - jh);
        self.norm_particle.push(np);
        self.norm_hole.push(nh);
    }

    /// Distance between the particle and hole packet centers at sample `i`.
    pub fn center_separation(&self, i: usize) -> f64 {
        self.mean_j_particle[i] / self.norm_particle[i] - self.mean_j_hole[i] / self.norm_hole[i]
    }

    /// Largest deviation of the total norm from 1.
    pub fn max_norm_drift(&self) -> f64 {
        self.norm_particle
            .iter()
            .zip(&self.norm_hole)
            .map(|(p, h)| (p + h - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Index of the sample at `t`, if one lies within `tol`.
    pub fn index_at(&self, t: f64, tol: f64) -> Option<usize> {
        let i = self.times.partition_point(|&x| x < t - tol);
        (i < self.len() && (self.times[i] - t).abs() <= tol).then_some(i)
    }
}

/// Oscillation amplitude and period read off a separation series.
#[derive(Debug, Clone, PartialEq)]
pub struct ZbEstimate {
    /// Peak-to-trough excursion of the separation.
    pub amplitude: f64,
    /// Mean spacing between separation maxima.
    pub period: f64,
    /// Interpolated `(time, value)` of each accepted maximum.
    pub peaks: Vec<(f64, f64)>,
}

/// Vertex of the parabola through three samples, falling back to the middle
/// sample when the points are not concave.
fn parabola_vertex(t: [f64; 3], s: [f64; 3]) -> (f64, f64) {
    let a = (s[1] - s[0]) / (t[1] - t[0]);
    let b = ((s[2] - s[1]) / (t[2] - t[1]) - a) / (t[2] - t[0]);
    if b >= 0.0 || !b.is_finite() {
        return (t[1], s[1]);
    }
    let tv = (0.5 * (t[0] + t[1]) - a / (2.0 * b)).clamp(t[0], t[2]);
    let sv = s[0] + a * (tv - t[0]) + b * (tv - t[0]) * (tv - t[1]);
    (tv, sv)
}

/// Maximum of the sinusoid `A + B cos(θx) + C sin(θx)` fitted to five
/// equally spaced samples around a peak. Successive differences of a
/// sampled sinusoid obey `d[j+1] + d[j-1] = 2 cos θ d[j]`, which fixes θ;
/// the remaining three coefficients then go through the middle samples.
/// `None` on uneven spacing or when the samples do not look sinusoidal.
fn sinusoid_vertex(t: &[f64], s: &[f64]) -> Option<(f64, f64)> {
    let h = t[2] - t[1];
    if t.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return None;
    }
    let d: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    let num = (d[0] + d[2]) * d[1] + (d[1] + d[3]) * d[2];
    let den = 2.0 * (d[1] * d[1] + d[2] * d[2]);
    let c = num / den;
    if !(c.is_finite() && c > -1.0 && c < 1.0 - 1e-12) {
        return None;
    }
    let theta = c.acos();
    let (s0, sm, sp) = (s[2], s[1], s[3]);
    let b = (2.0 * s0 - sm - sp) / (2.0 * (1.0 - c));
    let cc = (sp - sm) / (2.0 * theta.sin());
    let a = s0 - b;
    let x = cc.atan2(b) / theta;
    if !(b > 0.0 && x.abs() <= 1.0) {
        return None;
    }
    Some((t[2] + x * h, a + b.hypot(cc)))
}

/// Local maxima with prominence at least `min_prominence`, interpolated.
fn find_peaks(t: &[f64], s: &[f64], min_prominence: f64) -> Vec<(f64, f64)> {
    let n = s.len();
    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if !(s[i - 1] < s[i] && s[i] >= s[i + 1]) {
            continue;
        }
        let mut left = s[i];
        for &v in s[..i].iter().rev() {
            if v > s[i] {
                break;
            }
            left = left.min(v);
        }
        let mut right = s[i];
        for &v in &s[i + 1..] {
            if v > s[i] {
                break;
            }
            right = right.min(v);
        }
        if s[i] - left.max(right) >= min_prominence {
            let fitted = (i >= 2 && i + 2 < n).then(|| sinusoid_vertex(&t[i - 2..=i + 2], &s[i - 2..=i + 2])).flatten();
            peaks.push(fitted.unwrap_or_else(|| parabola_vertex([t[i - 1], t[i], t[i + 1]], [s[i - 1], s[i], s[i + 1]])));
        }
    }
    peaks
}

/// Amplitude and period of the separation oscillation in an undriven record.
pub fn extract_zb(record: &TrajectoryRecord) -> Result<ZbEstimate> {
    zb_from_series(&record.times, &record.separation)
}

pub fn zb_from_series(times: &[f64], series: &[f64]) -> Result<ZbEstimate> {
    let raw_max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw_min = series.iter().copied().fold(f64::INFINITY, f64::min);
    let range = raw_max - raw_min;
    if series.len() < 3 || !(range > 1e-12) {
        return Err(Error::InsufficientPeaks { found: 0 });
    }
    let min_prominence = 1e-3 * range;
    let peaks = find_peaks(times, series, min_prominence);
    if peaks.len() < 2 {
        return Err(Error::InsufficientPeaks { found: peaks.len() });
    }
    let negated: Vec<f64> = series.iter().map(|v| -v).collect();
    let troughs = find_peaks(times, &negated, min_prominence);

    let top = peaks.iter().map(|p| p.1).fold(raw_max, f64::max);
    let bottom = troughs.iter().map(|p| -p.1).fold(raw_min, f64::min);
    let period = (peaks[peaks.len() - 1].0 - peaks[0].0) / (peaks.len() - 1) as f64;
    Ok(ZbEstimate { amplitude: top - bottom, period, peaks })
}
