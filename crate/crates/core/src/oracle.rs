//! Dense real-space Bogoliubov-de Gennes propagation.
//!
//! Builds the 2N×2N matrix for the periodic chain in the `(particle; hole)`
//! site basis and evolves by full diagonalization. Nothing here goes through
//! the FFT or the per-mode propagators, which is what makes it a useful
//! cross-check of the spectral engine.
//!
//! Hole amplitudes are indexed in the same mirrored coordinate the paired
//! transform uses, so the pairing term couples particle site `j` to hole
//! sites `-j ± 1`. Expressed in the unmirrored hole coordinate it is the
//! usual antisymmetric nearest-neighbor pairing.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolver::{check_step, Engine};
use crate::model::{ChainParams, TpSign};
use crate::state::SpinorField;

/// Largest chain the oracle will diagonalize.
pub const MAX_ORACLE_SITES: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct BdgMatrix {
    pub h: DMatrix<Complex64>,
}

impl BdgMatrix {
    pub fn n_sites(&self) -> usize {
        self.h.nrows() / 2
    }

    /// Largest entry of `H - H†`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.h.nrows();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.h[(r, c)] - self.h[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut e: Vec<f64> = Decomposition::of(self).energies.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

pub fn build_bdg_matrix(params: &ChainParams, sign: TpSign) -> BdgMatrix {
    let n = params.n_sites;
    let tp = sign.value() * params.tp;
    let d = params.d;
    let mut h = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    let re = |x: f64| Complex64::new(x, 0.0);
    let wrap = |j: i64| j.rem_euclid(n as i64) as usize;
    for j in 0..n {
        let next = wrap(j as i64 + 1);
        let prev = wrap(j as i64 - 1);
        // -μ c†c and -(t c_j† c_{j+1} + h.c.)
        h[(j, j)] = re(-params.mu);
        h[(j, next)] += re(-tp);
        h[(j, prev)] += re(-tp);
        h[(n + j, n + j)] = re(params.mu);
        h[(n + j, n + next)] += re(tp);
        h[(n + j, n + prev)] += re(tp);
        // pairing, hole index mirrored: j <-> -j
        h[(j, n + wrap(-(j as i64) + 1))] += re(d);
        h[(j, n + wrap(-(j as i64) - 1))] += re(-d);
    }
    for j in 0..n {
        for l in 0..n {
            let v = h[(j, n + l)];
            h[(n + l, j)] = v.conj();
        }
    }
    BdgMatrix { h }
}

#[derive(Debug, Clone)]
struct Decomposition {
    energies: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

impl Decomposition {
    fn of(m: &BdgMatrix) -> Self {
        // real parameters give a real symmetric matrix; that eigensolver is
        // several times cheaper than the complex one
        let is_real = m.h.iter().all(|z| z.im == 0.0);
        if is_real {
            let real = m.h.map(|z| z.re);
            let eig = SymmetricEigen::new(real);
            Self { energies: eig.eigenvalues, vectors: eig.eigenvectors.map(|x| Complex64::new(x, 0.0)) }
        } else {
            let eig = SymmetricEigen::new(m.h.clone());
            Self { energies: eig.eigenvalues, vectors: eig.eigenvectors }
        }
    }

    fn propagate(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let mut coeffs = self.vectors.ad_mul(psi);
        for (c, &e) in coeffs.iter_mut().zip(self.energies.iter()) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        &self.vectors * coeffs
    }
}

/// Dense-diagonalization engine; each sign is decomposed on first use and
/// the result shared afterwards.
#[derive(Debug)]
pub struct OracleEngine {
    params: ChainParams,
    plus: OnceLock<Decomposition>,
    minus: OnceLock<Decomposition>,
}

impl OracleEngine {
    pub fn new(params: ChainParams) -> Result<Self> {
        if params.n_sites > MAX_ORACLE_SITES {
            return Err(Error::DimensionOverflow { dim: 2 * params.n_sites, max: MAX_ORACLE_SITES });
        }
        Ok(Self { params, plus: OnceLock::new(), minus: OnceLock::new() })
    }

    fn decomposition(&self, sign: TpSign) -> &Decomposition {
        let cell = match sign {
            TpSign::Plus => &self.plus,
            TpSign::Minus => &self.minus,
        };
        cell.get_or_init(|| Decomposition::of(&build_bdg_matrix(&self.params, sign)))
    }
}

impl Engine for OracleEngine {
    fn n_sites(&self) -> usize {
        self.params.n_sites
    }

    fn evolve(&self, state: &SpinorField, sign: TpSign, dt: f64) -> Result<SpinorField> {
        check_step(self.params.n_sites, state, dt)?;
        if dt == 0.0 {
            return Ok(state.clone());
        }
        let psi = DVector::from_vec(state.to_stacked());
        let out = self.decomposition(sign).propagate(&psi, dt);
        Ok(SpinorField::from_stacked(out.as_slice()))
    }
}

/// `exp(-i H t)` applied to the stacked state.
pub fn evolve_oracle(state: &SpinorField, params: &ChainParams, sign: TpSign, t: f64) -> Result<SpinorField> {
    OracleEngine::new(*params)?.evolve(state, sign, t)
}
