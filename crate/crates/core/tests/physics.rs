//! End-to-end physics checks beyond the acceptance list.

use std::f64::consts::PI;

use kitaev_zb::evolver::{record_scheduled, RunWindow};
use kitaev_zb::observables::{component_centers, extract_zb, mean_positions};
use kitaev_zb::schedule::{make_windowed_schedule, Schedule};
use kitaev_zb::state::Spinor;
use kitaev_zb::{
    approx_zb_parameters, evolve, evolve_oracle, evolve_scheduled, gaussian_packet, ChainParams, Engine,
    SpectralEngine, TpSign,
};

#[test]
fn broad_packet_matches_first_order_prediction() {
    let p = ChainParams::new(1.0, 1.0, 0.5, 256).unwrap();
    let init = gaussian_packet(256, 128, 25.0, Spinor::antiparallel()).unwrap();
    let rec = evolve_scheduled(&init, &p, &Schedule::off(), 0.0, 6.0, 0.002).unwrap();
    let z = extract_zb(&rec).unwrap();
    let want = approx_zb_parameters(&p).unwrap();
    assert!((want.period - PI / 3.0).abs() < 1e-15);
    assert!((want.amplitude - 1.0 / 3.0).abs() < 1e-15);
    assert!((z.period - want.period).abs() <= 0.02 * want.period, "{z:?}");
    assert!((z.amplitude - want.amplitude).abs() <= 0.05 * want.amplitude, "{z:?}");
}

#[test]
fn narrow_packet_away_from_magic_point_damps() {
    let p = ChainParams::new(0.5, 1.0, 0.5, 256).unwrap();
    let init = gaussian_packet(256, 128, 2.0, Spinor::antiparallel()).unwrap();
    let rec = evolve_scheduled(&init, &p, &Schedule::off(), 0.0, 16.0, 0.002).unwrap();
    let z = extract_zb(&rec).unwrap();
    assert!(z.peaks[9].1 < 0.9 * z.peaks[0].1, "{:?}", &z.peaks[..10]);
}

#[test]
fn magic_shape_is_preserved_at_every_period() {
    let p = ChainParams::magic(1.0, 512).unwrap();
    for sigma in [0.8, 2.0, 10.0, 40.0] {
        let init = gaussian_packet(512, 256, sigma, Spinor::antiparallel()).unwrap();
        for n in 1..=4 {
            let t = n as f64 * PI / 2.0;
            let out = evolve(&init, &p, TpSign::Plus, t).unwrap();
            // U(T) = -1 at the flat-band point
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let max = out
                .particle
                .iter()
                .zip(&init.particle)
                .chain(out.hole.iter().zip(&init.hole))
                .map(|(a, b)| (a - b * sign).norm())
                .fold(0.0, f64::max);
            assert!(max < 1e-12, "sigma {sigma}, period {n}: {max}");
        }
    }
}

#[test]
fn oracle_reproduces_mean_positions() {
    let p = ChainParams::new(0.2, 0.9, 0.6, 128).unwrap();
    let init = gaussian_packet(128, 64, 3.0, Spinor::antiparallel()).unwrap();
    let a = evolve(&init, &p, TpSign::Plus, 1.3).unwrap();
    let b = evolve_oracle(&init, &p, TpSign::Plus, 1.3).unwrap();
    let (ae, ah) = mean_positions(&a, 64).unwrap();
    let (be, bh) = mean_positions(&b, 64).unwrap();
    assert!((ae - be).abs() < 1e-10 && (ah - bh).abs() < 1e-10);
}

#[test]
fn drive_phase_matters() {
    // starting the drive half a period late reverses the drift
    let p = ChainParams::magic(1.0, 256).unwrap();
    let init = gaussian_packet(256, 128, 4.0, Spinor::antiparallel()).unwrap();
    let late = make_windowed_schedule(&p, 0, 1, 3).unwrap();
    let engine = SpectralEngine::new(p);
    let (rec, last) = record_scheduled(&engine, &init, &late, &RunWindow::new(0.0, 3.5 * PI / 2.0, 0.05)).unwrap();
    let (pe, ph) = component_centers(&last, rec.reference).unwrap();
    // "++" returns to the start, then five reversed half-period steps
    assert!((pe.unwrap() + 5.0).abs() < 1e-9 && (ph.unwrap() - 5.0).abs() < 1e-9, "{pe:?} {ph:?}");
}

#[test]
fn segments_compose_like_one_long_step() {
    let p = ChainParams::new(-0.4, 1.1, 0.8, 128).unwrap();
    let engine = SpectralEngine::new(p);
    let init = gaussian_packet(128, 64, 3.0, Spinor::antiparallel()).unwrap();
    let whole = engine.evolve(&init, TpSign::Minus, 2.5).unwrap();
    let mut piecewise = init;
    for _ in 0..25 {
        piecewise = engine.evolve(&piecewise, TpSign::Minus, 0.1).unwrap();
    }
    assert!(whole.max_abs_diff(&piecewise) < 1e-12);
}
