//! Real-space spinor fields, wavepacket factories and the (k, -k) paired
//! momentum representation.
//!
//! The forward transform follows the creation-operator convention
//! `c_k† = N^{-1/2} Σ_j c_j† e^{ijk}`, applied to amplitudes:
//! `f(k) = N^{-1/2} Σ_j x_j e^{ijk}`. The paired mode at grid wavenumber
//! `k` is `(f_particle(k), f_hole(-k))`. Sampling the hole at `-k` mirrors
//! the hole coordinate through site 0 (equivalently site N/2, the other
//! fixed point of `j -> -j mod N`), so co-located particle/hole packets are
//! centered on one of those two sites.

use std::cell::RefCell;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

const SPINOR_TOL: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn fft_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Internal (particle, hole) pseudo-spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub a: Complex64,
    pub b: Complex64,
}

impl Spinor {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    /// `(1, -1)/√2`, the maximal-oscillation spinor used throughout.
    pub fn antiparallel() -> Self {
        Self::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    }

    pub fn particle() -> Self {
        Self::real(1.0, 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    fn validate(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > SPINOR_TOL {
            return Err(Error::SpinorNotNormalized { norm });
        }
        Ok(())
    }
}

/// Two complex amplitudes per site.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub particle: Vec<Complex64>,
    pub hole: Vec<Complex64>,
}

impl SpinorField {
    pub fn zeros(n_sites: usize) -> Self {
        Self {
            particle: vec![Complex64::new(0.0, 0.0); n_sites],
            hole: vec![Complex64::new(0.0, 0.0); n_sites],
        }
    }

    pub fn from_components(particle: Vec<Complex64>, hole: Vec<Complex64>) -> Result<Self> {
        if particle.len() != hole.len() {
            return Err(Error::DimensionMismatch { left: particle.len(), right: hole.len() });
        }
        Ok(Self { particle, hole })
    }

    pub fn n_sites(&self) -> usize {
        self.particle.len()
    }

    pub fn norm_particle(&self) -> f64 {
        self.particle.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm_hole(&self) -> f64 {
        self.hole.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_particle() + self.norm_hole()
    }

    /// Stacked `(particle; hole)` vector of length 2N.
    pub fn to_stacked(&self) -> Vec<Complex64> {
        self.particle.iter().chain(&self.hole).copied().collect()
    }

    pub fn from_stacked(v: &[Complex64]) -> Self {
        let n = v.len() / 2;
        Self { particle: v[..n].to_vec(), hole: v[n..].to_vec() }
    }

    /// Largest per-entry modulus of the difference.
    pub fn max_abs_diff(&self, other: &SpinorField) -> f64 {
        self.particle
            .iter()
            .zip(&other.particle)
            .chain(self.hole.iter().zip(&other.hole))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Per-mode 2-spinors `(f(k), h(-k))` on the zone-centered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KPairedField {
    pub modes: Vec<[Complex64; 2]>,
}

impl KPairedField {
    pub fn n_sites(&self) -> usize {
        self.modes.len()
    }

    pub fn norm(&self) -> f64 {
        self.modes.iter().map(|[f, h]| f.norm_sqr() + h.norm_sqr()).sum()
    }
}

/// Signed displacement `j - center` on the ring, in `[-N/2, N/2)`.
pub(crate) fn ring_offset(j: usize, center: usize, n: usize) -> i64 {
    let n = n as i64;
    let raw = (j as i64 - center as i64).rem_euclid(n);
    if raw >= n / 2 {
        raw - n
    } else {
        raw
    }
}

fn gaussian_profile(n_sites: usize, center: i64, sigma: f64) -> Vec<f64> {
    let c = center.rem_euclid(n_sites as i64) as usize;
    let mut g: Vec<f64> = (0..n_sites)
        .map(|j| {
            let x = ring_offset(j, c, n_sites) as f64;
            (-x * x / (4.0 * sigma * sigma)).exp()
        })
        .collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    g.iter_mut().for_each(|x| *x /= norm);
    g
}

fn check_sigma(n_sites: usize, sigma: f64) -> Result<()> {
    let max = n_sites as f64 / 8.0;
    if !(sigma > 0.0 && sigma < max) {
        return Err(Error::SigmaOutOfRange { sigma, max });
    }
    Ok(())
}

fn check_site(n_sites: usize, site: i64) -> Result<()> {
    if site < 0 || site >= n_sites as i64 {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

fn warn_near_seam(n_sites: usize, center: i64, sigma: f64) {
    let c = center.rem_euclid(n_sites as i64) as f64;
    let dist = c.min(n_sites as f64 - c);
    if dist < 4.0 * sigma {
        log::warn!("packet centered at {c} with sigma {sigma} lies within 4 sigma of the periodic seam");
    }
}

/// Gaussian wavepacket with internal spinor `(a, b)`. The discrete profile is
/// normalized so that `Σ_j G(j)² = 1`, and `G(j)²` has standard deviation
/// `sigma`.
pub fn gaussian_packet(n_sites: usize, center: usize, sigma: f64, spinor: Spinor) -> Result<SpinorField> {
    separated_gaussian_packet(n_sites, center, 0, sigma, spinor)
}

/// Particle packet at `center + offset`, hole packet at `center - offset`,
/// both sharing one Gaussian profile. With `center` on a mirror fixed point
/// this is the same pseudo-spinor for every mode regardless of `offset`.
pub fn separated_gaussian_packet(
    n_sites: usize,
    center: usize,
    offset: i64,
    sigma: f64,
    spinor: Spinor,
) -> Result<SpinorField> {
    spinor.validate()?;
    check_sigma(n_sites, sigma)?;
    check_site(n_sites, center as i64)?;
    let c = center as i64;
    warn_near_seam(n_sites, c + offset, sigma);
    warn_near_seam(n_sites, c - offset, sigma);
    let gp = gaussian_profile(n_sites, c + offset, sigma);
    let gh = if offset == 0 { gp.clone() } else { gaussian_profile(n_sites, c - offset, sigma) };
    Ok(SpinorField {
        particle: gp.iter().map(|&g| spinor.a * g).collect(),
        hole: gh.iter().map(|&g| spinor.b * g).collect(),
    })
}

/// All amplitude on one site.
pub fn delta_packet(n_sites: usize, site: usize, spinor: Spinor) -> Result<SpinorField> {
    spinor.validate()?;
    check_site(n_sites, site as i64)?;
    let mut field = SpinorField::zeros(n_sites);
    field.particle[site] = spinor.a;
    field.hole[site] = spinor.b;
    Ok(field)
}

/// FFT bin holding grid wavenumber `k_m = 2πm/N - π`.
#[inline]
fn bin_of_mode(m: usize, n: usize) -> usize {
    (m + n / 2) % n
}

#[inline]
fn negated_bin(q: usize, n: usize) -> usize {
    (n - q) % n
}

pub fn to_k_paired(field: &SpinorField) -> KPairedField {
    let n = field.n_sites();
    // rustfft's inverse direction carries the e^{+ijk} kernel
    let fft = fft_inverse(n);
    let mut p = field.particle.clone();
    let mut h = field.hole.clone();
    fft.process(&mut p);
    fft.process(&mut h);
    let scale = 1.0 / (n as f64).sqrt();
    let modes = (0..n)
        .map(|m| {
            let q = bin_of_mode(m, n);
            [p[q] * scale, h[negated_bin(q, n)] * scale]
        })
        .collect();
    KPairedField { modes }
}

pub fn from_k_paired(kfield: &KPairedField) -> SpinorField {
    let n = kfield.n_sites();
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    let mut h = vec![Complex64::new(0.0, 0.0); n];
    for (m, [f, g]) in kfield.modes.iter().enumerate() {
        let q = bin_of_mode(m, n);
        p[q] = *f;
        h[negated_bin(q, n)] = *g;
    }
    let ifft = fft_forward(n);
    ifft.process(&mut p);
    ifft.process(&mut h);
    let scale = 1.0 / (n as f64).sqrt();
    p.iter_mut().chain(h.iter_mut()).for_each(|z| *z *= scale);
    SpinorField { particle: p, hole: h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::k_at;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct O(N²) transform, independent of the FFT path.
    fn naive_dft(x: &[Complex64], k: f64) -> Complex64 {
        let n = x.len();
        x.iter()
            .enumerate()
            .map(|(j, &v)| v * Complex64::from_polar(1.0, (j as f64) * k))
            .sum::<Complex64>()
            / (n as f64).sqrt()
    }

    fn random_field(n: usize, seed: u64) -> SpinorField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpinorField::zeros(n);
        for z in f.particle.iter_mut().chain(f.hole.iter_mut()) {
            *z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let s = f.norm().sqrt();
        f.particle.iter_mut().chain(f.hole.iter_mut()).for_each(|z| *z /= s);
        f
    }

    #[test]
    fn gaussian_component_norms() {
        let f = gaussian_packet(256, 128, 5.0, Spinor::antiparallel()).unwrap();
        assert!((f.norm_particle() - 0.5).abs() < 1e-14);
        assert!((f.norm_hole() - 0.5).abs() < 1e-14);
        assert!((f.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_width_is_sigma() {
        let f = gaussian_packet(256, 128, 5.0, Spinor::particle()).unwrap();
        let var: f64 = f
            .particle
            .iter()
            .enumerate()
            .map(|(j, z)| (j as f64 - 128.0).powi(2) * z.norm_sqr())
            .sum();
        assert!((var.sqrt() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn particle_only_gaussian_has_no_hole() {
        let f = gaussian_packet(64, 32, 4.0, Spinor::particle()).unwrap();
        assert!(f.hole.iter().all(|z| *z == c(0.0, 0.0)));
        assert!((f.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_spectrum_even_and_real_up_to_center_phase() {
        let f = gaussian_packet(256, 128, 5.0, Spinor::particle()).unwrap();
        let k = to_k_paired(&f);
        for m in 1..256 {
            let kk = k_at(256, m);
            // remove the e^{i 128 k} centering phase
            let g = k.modes[m][0] * Complex64::from_polar(1.0, -128.0 * kk);
            assert!(g.im.abs() < 1e-13);
            assert!(g.re > -1e-13);
            let mirror = k.modes[256 - m][0] * Complex64::from_polar(1.0, 128.0 * kk);
            assert!((g - mirror).norm() < 1e-13);
        }
    }

    #[test]
    fn packet_errors() {
        assert!(matches!(
            gaussian_packet(64, 32, 2.0, Spinor::real(1.0, 0.5)),
            Err(Error::SpinorNotNormalized { .. })
        ));
        assert!(matches!(gaussian_packet(64, 32, 8.0, Spinor::particle()), Err(Error::SigmaOutOfRange { .. })));
        assert!(matches!(gaussian_packet(64, 32, 0.0, Spinor::particle()), Err(Error::SigmaOutOfRange { .. })));
        assert!(matches!(delta_packet(64, 64, Spinor::particle()), Err(Error::SiteOutOfRange { .. })));
        assert!(delta_packet(64, 3, Spinor::real(0.9, 0.0)).is_err());
    }

    #[test]
    fn delta_packet_layout() {
        let f = delta_packet(64, 32, Spinor::antiparallel()).unwrap();
        assert_eq!(f.particle[32], c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(f.hole[32], c(-FRAC_1_SQRT_2, 0.0));
        let nonzero = f.particle.iter().chain(&f.hole).filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);

        let f = delta_packet(64, 0, Spinor::particle()).unwrap();
        assert_eq!(f.particle.iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(f.norm(), 1.0);
    }

    #[test]
    fn delta_spectrum_is_flat() {
        let f = delta_packet(64, 32, Spinor::antiparallel()).unwrap();
        let k = to_k_paired(&f);
        for [p, _] in &k.modes {
            assert!((p.norm_sqr() - 1.0 / 128.0).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_at_origin_pairs_to_antiparallel_spinors() {
        let f = delta_packet(64, 0, Spinor::antiparallel()).unwrap();
        for [p, h] in to_k_paired(&f).modes {
            assert!((p + h).norm() < 1e-15);
            assert!((p - c(FRAC_1_SQRT_2 / 8.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn transform_matches_direct_sum() {
        let f = random_field(16, 3);
        let k = to_k_paired(&f);
        for m in 0..16 {
            let kk = k_at(16, m);
            assert!((k.modes[m][0] - naive_dft(&f.particle, kk)).norm() < 1e-14);
            assert!((k.modes[m][1] - naive_dft(&f.hole, -kk)).norm() < 1e-14);
        }
    }

    #[test]
    fn separated_packets_align_for_any_offset() {
        for offset in [0, 5, 20] {
            let f = separated_gaussian_packet(256, 128, offset, 4.0, Spinor::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2))
                .unwrap();
            let k = to_k_paired(&f);
            for [p, h] in &k.modes {
                if p.norm() > 1e-12 {
                    // direction (1, 1)/√2 up to a common phase
                    assert!((p - h).norm() < 1e-13 * p.norm().max(1e-3), "offset {offset}");
                }
            }
        }
    }

    fn shift_modes(field: &SpinorField, phase_per_k: f64) -> SpinorField {
        let n = field.n_sites();
        let mut k = to_k_paired(field);
        for (m, s) in k.modes.iter_mut().enumerate() {
            let phase = Complex64::from_polar(1.0, phase_per_k * k_at(n, m));
            s[0] *= phase;
            s[1] *= phase;
        }
        from_k_paired(&k)
    }

    fn center(v: &[Complex64]) -> f64 {
        v.iter().enumerate().map(|(j, z)| j as f64 * z.norm_sqr()).sum::<f64>()
            / v.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    #[test]
    fn common_mode_phase_moves_particle_and_hole_oppositely() {
        let g = gaussian_packet(128, 64, 4.0, Spinor::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).unwrap();
        let f = shift_modes(&g, 2.0);
        assert!((center(&f.particle) - 66.0).abs() < 1e-10);
        assert!((center(&f.hole) - 62.0).abs() < 1e-10);
        let f = shift_modes(&g, -2.0);
        assert!((center(&f.particle) - 62.0).abs() < 1e-10);
        assert!((center(&f.hole) - 66.0).abs() < 1e-10);
    }

    #[test]
    fn zero_roundtrip() {
        let k = KPairedField { modes: vec![[c(0.0, 0.0); 2]; 32] };
        assert_eq!(from_k_paired(&k), SpinorField::zeros(32));
    }

    #[test]
    fn delta_roundtrip_is_exact_site() {
        for site in [0, 7, 31, 32, 63] {
            let f = delta_packet(64, site, Spinor::antiparallel()).unwrap();
            let back = from_k_paired(&to_k_paired(&f));
            assert!(back.max_abs_diff(&f) < 1e-15);
            let peak = back
                .particle
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap()
                .0;
            assert_eq!(peak, site);
        }
    }

    #[test]
    fn diagonal_mode_evolution_rotates_particle_at_k_and_hole_at_minus_k() {
        // ε(k) deliberately neither even nor odd
        let eps = |k: f64| k.cos() + 0.3 * k.sin() + 0.1 * (2.0 * k).sin();
        let t = 0.77;
        let n = 16;
        let f = random_field(n, 11);
        let mut k = to_k_paired(&f);
        for (m, s) in k.modes.iter_mut().enumerate() {
            let e = eps(k_at(n, m));
            s[0] *= Complex64::from_polar(1.0, -e * t);
            s[1] *= Complex64::from_polar(1.0, e * t);
        }
        let got = from_k_paired(&k);

        // with the e^{ijk} forward kernel, plane wave e^{iqj} sits in particle
        // mode -q and in hole mode +q
        let apply = |x: &[Complex64], phase: &dyn Fn(f64) -> f64| -> Vec<Complex64> {
            (0..n)
                .map(|j| {
                    let mut acc = c(0.0, 0.0);
                    for m in 0..n {
                        let q = 2.0 * PI * m as f64 / n as f64;
                        for (l, &xl) in x.iter().enumerate() {
                            acc += xl * Complex64::from_polar(1.0, q * (j as f64 - l as f64) + phase(q));
                        }
                    }
                    acc / n as f64
                })
                .collect()
        };
        let want_p = apply(&f.particle, &|q| -eps(-q) * t);
        let want_h = apply(&f.hole, &|q| eps(q) * t);
        let want = SpinorField { particle: want_p, hole: want_h };
        assert!(got.max_abs_diff(&want) < 1e-13);
    }

    proptest! {
        #[test]
        fn transform_is_unitary_and_invertible(seed in 0u64..1000, half in 4usize..40) {
            let f = random_field(2 * half, seed);
            let k = to_k_paired(&f);
            prop_assert!((k.norm() - f.norm()).abs() <= 1e-13);
            let back = from_k_paired(&k);
            prop_assert!(back.max_abs_diff(&f) <= 1e-13);
        }
    }
}
