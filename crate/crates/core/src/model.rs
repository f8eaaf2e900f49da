//! Kitaev chain parameters and the per-momentum two-band structure.
//!
//! Units: ħ = 1, lattice constant 1. The paired 2×2 Hamiltonian at wavenumber
//! `k` is
//!
//! ```text
//! H(k) = [[ ξ(k),   Δ(k) ],      ξ(k) = -μ - 2 t_p cos k
//!         [ Δ(k)*, -ξ(k) ]]      Δ(k) = 2i d sin k
//! ```
//!
//! i.e. `H(k) = ξ(k) σ_z - 2 d sin(k) σ_y`, a pseudo-spin in a "magnetic
//! field" lying in the y-z plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sign applied to the tunneling integral by the drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TpSign {
    Plus,
    Minus,
}

impl TpSign {
    pub fn value(self) -> f64 {
        match self {
            TpSign::Plus => 1.0,
            TpSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            TpSign::Plus => TpSign::Minus,
            TpSign::Minus => TpSign::Plus,
        }
    }
}

/// Physical definition of a periodic Kitaev chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// Chemical potential μ.
    pub mu: f64,
    /// Tunneling integral t_p.
    pub tp: f64,
    /// Pairing amplitude d (> 0).
    pub d: f64,
    /// Number of sites N (even, ≥ 8).
    pub n_sites: usize,
}

impl ChainParams {
    pub fn new(mu: f64, tp: f64, d: f64, n_sites: usize) -> Result<Self> {
        if !(mu.is_finite() && tp.is_finite() && d.is_finite()) {
            return Err(Error::InvalidParams("mu, tp and d must be finite".into()));
        }
        if d <= 0.0 {
            return Err(Error::InvalidParams(format!("pairing d must be > 0, got {d}")));
        }
        if n_sites < 8 || !n_sites.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "n_sites must be even and >= 8, got {n_sites}"
            )));
        }
        Ok(Self { mu, tp, d, n_sites })
    }

    /// μ = 0, t_p = d: the flat-band parameter point.
    pub fn magic(d: f64, n_sites: usize) -> Result<Self> {
        Self::new(0.0, d, d, n_sites)
    }

    /// Same chain with the tunneling sign set by the drive.
    pub fn with_tp_sign(&self, sign: TpSign) -> Self {
        Self { tp: sign.value() * self.tp, ..*self }
    }

    /// Zone-centered Brillouin grid `k_m = 2πm/N - π`.
    pub fn k_grid(&self) -> Vec<f64> {
        (0..self.n_sites).map(|m| k_at(self.n_sites, m)).collect()
    }
}

/// Wavenumber of grid index `m` on an `n`-site ring.
#[inline]
pub fn k_at(n: usize, m: usize) -> f64 {
    2.0 * PI * m as f64 / n as f64 - PI
}

/// Kinetic term ξ(k) = -μ - 2 t_p cos k.
pub fn xi(params: &ChainParams, k: f64) -> f64 {
    -params.mu - 2.0 * params.tp * k.cos()
}

/// Pairing term Δ(k) = 2i d sin k.
pub fn gap(params: &ChainParams, k: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * params.d * k.sin())
}

/// Pseudo-magnetic field of the paired Hamiltonian at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveField {
    /// Field strength E(k) = sqrt(ξ² + 4d² sin²k).
    pub strength: f64,
    /// Unit field direction `(n_x, n_y, n_z)`; zero when the gap closes.
    pub axis: [f64; 3],
}

impl EffectiveField {
    /// True at a gap closing, where the mode does not evolve.
    pub fn is_degenerate(&self) -> bool {
        self.strength == 0.0
    }

    /// Polar angle of the axis measured from +z.
    pub fn polar_angle(&self) -> f64 {
        self.axis[2].clamp(-1.0, 1.0).acos()
    }
}

pub fn effective_field(params: &ChainParams, k: f64) -> EffectiveField {
    let z = xi(params, k);
    let y = -2.0 * params.d * k.sin();
    let strength = z.hypot(y);
    let axis = if strength > 0.0 {
        [0.0, y / strength, z / strength]
    } else {
        [0.0; 3]
    };
    EffectiveField { strength, axis }
}

/// Whether the chain sits at μ = 0, t_p = d within `tol` (relative to d).
pub fn is_magic(params: &ChainParams, tol: f64) -> bool {
    params.mu.abs() <= tol * params.d && (params.tp - params.d).abs() <= tol * params.d
}

/// First-order (small-k) Zitterbewegung predictions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZbPrediction {
    pub omega: f64,
    pub period: f64,
    pub amplitude: f64,
}

/// Frequency, period and amplitude of the oscillation for a momentum-narrow
/// packet. Only the `μ + 2t_p > 0` branch is supported.
pub fn approx_zb_parameters(params: &ChainParams) -> Result<ZbPrediction> {
    let bandwidth = params.mu + 2.0 * params.tp;
    if bandwidth <= 0.0 {
        return Err(Error::BranchUnsupported { value: bandwidth });
    }
    Ok(ZbPrediction {
        omega: 2.0 * bandwidth,
        period: PI / bandwidth,
        amplitude: 2.0 * params.d / bandwidth,
    })
}
