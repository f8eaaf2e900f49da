use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kitaev_zb::cli::{read_trajectory, snapshot_path};

const MAGIC_DELTA: &str = "\
mu = 0
tp = 1
d = 1
n_sites = 256
initial.kind = delta
schedule.kind = off
t_final = 10
dt_out = 0.01
snapshots = 0.7853981633974483
";

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kitaev-zb")).args(args).output().expect("spawn")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn simulate(config: &Path) -> Output {
    bin(&["simulate", config.to_str().unwrap()])
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|row| row.unwrap()[idx].parse().unwrap()).collect()
}

#[test]
fn magic_delta_trajectory_and_extraction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", MAGIC_DELTA);
    let out = simulate(&cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let traj = dir.path().join("trajectory.csv");
    let text = std::fs::read_to_string(&traj).unwrap();
    assert!(text.starts_with("t,mean_j_particle,mean_j_hole,separation,norm_particle,norm_hole\n"));
    let t = column(&traj, "t");
    let sep = column(&traj, "separation");
    assert_eq!(t.len(), 1001);
    for (t, s) in t.iter().zip(&sep) {
        assert!((s - (2.0 * t).sin().powi(2)).abs() <= 1e-10, "t = {t}");
    }

    // quarter period: half the particle weight one site right, hole one left
    let snap = snapshot_path(&dir.path().join("snapshot"), std::f64::consts::FRAC_PI_4);
    let occ = column(&snap, "occupation_signed");
    assert!(std::fs::read_to_string(&snap).unwrap().starts_with("j,occupation_signed,particle_prob,hole_prob\n"));
    assert!((occ[129] - 0.5).abs() < 1e-12);
    assert!((occ[127] + 0.5).abs() < 1e-12);
    assert!(occ.iter().enumerate().filter(|(j, _)| *j != 127 && *j != 129).all(|(_, o)| o.abs() < 1e-12));

    let out = bin(&["zb-extract", traj.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "amplitude=1.000000000 period=1.570796327");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", &format!("{MAGIC_DELTA}output.trajectory = a.csv\n"));
    assert!(simulate(&cfg).status.success());
    let first = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert!(simulate(&cfg).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("a.csv")).unwrap());
}

#[test]
fn resonant_drive_separates_packets_by_twenty() {
    let dir = tempfile::tempdir().unwrap();
    let text = "\
mu = 0
tp = 1
d = 1
n_sites = 256
initial.kind = gaussian
initial.sigma = 5
schedule.kind = resonant
schedule.periods = 5
t_final = 7.853981633974483
dt_out = 0.05
";
    let cfg = write_config(dir.path(), "drive.cfg", text);
    assert!(simulate(&cfg).status.success());
    let traj = dir.path().join("trajectory.csv");
    let rec = read_trajectory(&traj).unwrap();
    let last = rec.len() - 1;
    assert!((rec.times[last] - 5.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((rec.center_separation(last) - 20.0).abs() < 1e-6);
    // the unnormalized column carries the component weights of 1/2
    assert!((rec.separation[last] - 10.0).abs() < 1e-6);
}

#[test]
fn both_engines_agree_off_the_magic_point() {
    let dir = tempfile::tempdir().unwrap();
    let text = "\
mu = 0.3
tp = 1
d = 0.7
n_sites = 128
initial.kind = gaussian
initial.sigma = 4
initial.a_re = 0.6
initial.b_re = 0
initial.b_im = 0.8
schedule.kind = custom
schedule.signs = +--+-
t_final = 4
dt_out = 0.1
engine = both
output.comparison = cmp.csv
";
    let cfg = write_config(dir.path(), "both.cfg", text);
    let out = simulate(&cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let diffs = column(&dir.path().join("cmp.csv"), "max_state_diff");
    assert_eq!(diffs.len(), column(&dir.path().join("trajectory.csv"), "t").len());
    assert!(diffs.iter().all(|&d| d <= 1e-8));

    let out = bin(&["oracle-check", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let line = String::from_utf8_lossy(&out.stdout);
    let value: f64 = line.trim().strip_prefix("max_state_diff=").unwrap().parse().unwrap();
    assert!(value <= 1e-8);
}

#[test]
fn config_errors_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let text = MAGIC_DELTA.replace("initial.kind = delta", "initial.kind = delta\ninitial.a_re = 0.8\ninitial.b_re = -0.4\ncolour = red");
    let cfg = write_config(dir.path(), "bad.cfg", &text);
    let out = simulate(&cfg);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("initial.a_re") && err.contains("colour"), "{err}");
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}

#[test]
fn numeric_failures_exit_3_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    // away from the flat band a delta spreads around a short ring
    let text = MAGIC_DELTA.replace("mu = 0", "mu = 0.5").replace("n_sites = 256", "n_sites = 16");
    let cfg = write_config(dir.path(), "seam.cfg", &text);
    let out = simulate(&cfg);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&dir.path().join("missing.cfg"));
    assert_eq!(out.status.code(), Some(4));

    let cfg = write_config(dir.path(), "x.cfg", &format!("{MAGIC_DELTA}output.trajectory = no/such/dir/t.csv\n"));
    assert_eq!(simulate(&cfg).status.code(), Some(4));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "a,b\n1,2\n").unwrap();
    assert_eq!(bin(&["zb-extract", bad.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn flat_trajectory_has_no_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let mut text = String::from("t,mean_j_particle,mean_j_hole,separation,norm_particle,norm_hole\n");
    for i in 0..50 {
        text.push_str(&format!("{},0,0,0,0.5,0.5\n", i as f64 * 0.1));
    }
    std::fs::write(&path, text).unwrap();
    let out = bin(&["zb-extract", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("peaks"));
}

#[test]
fn thread_override_is_honored_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", MAGIC_DELTA);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_kitaev-zb"))
            .args(["simulate", cfg.to_str().unwrap()])
            .env("KITAEV_ZB_THREADS", threads)
            .output()
            .unwrap()
    };
    assert!(run("2").status.success());
    assert_eq!(run("lots").status.code(), Some(2));
}
