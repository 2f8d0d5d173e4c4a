use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hvdc_mc::io::{read_mc_csv, read_te_csv, write_mc_csv, McRow};
use hvdc_mc::Binding;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hvdc-mc"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn exec(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_reproduces_example_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario("example1.toml");
    let o = exec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_mc_csv(fs::File::open(dir.path().join("mc.csv")).unwrap()).unwrap();
    let last = rows.last().expect("capacity rows");
    assert_eq!(last.binding, Binding::AlphaMin);
    assert!(
        (last.mc_power - 861.8).abs() / 861.8 < 0.01,
        "{}",
        last.mc_power
    );

    let te = read_te_csv(fs::File::open(dir.path().join("te.csv")).unwrap()).unwrap();
    assert!(te.iter().filter(|t| t.t > 0.7).all(|t| t.held_over));
}

#[test]
fn simulate_then_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let sim_out = dir.path().join("sim");
    let cfg = scenario("example1.toml");
    let o = exec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--mode",
        "simulate",
        "--out",
        sim_out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!sim_out.join("mc.csv").exists());

    let est_cfg = dir.path().join("estimate.toml");
    fs::write(
        &est_cfg,
        "mode = \"estimate\"\npaths.input = \"sim/trajectory.csv\"\n",
    )
    .unwrap();
    let o = exec(&[
        "--config",
        est_cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let te = read_te_csv(fs::File::open(dir.path().join("te.csv")).unwrap()).unwrap();
    let last = te.last().unwrap();
    assert!((last.x - 0.2).abs() < 1e-8 && (last.r - 0.005).abs() < 1e-8);
}

#[test]
fn quiet_stream_yields_no_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("quiet.toml");
    fs::write(
        &cfg,
        "mode = \"run\"\nscenario.duration = 0.5\nscenario.te_true.e_th = [1.0, 0.0]\n\
         scenario.te_true.x_th = 0.2\nscenario.z_d0 = [1.5, 0.3]\n",
    )
    .unwrap();
    let o = exec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let te = read_te_csv(fs::File::open(dir.path().join("te.csv")).unwrap()).unwrap();
    assert!(te.is_empty());
}

#[test]
fn seed_controls_noise() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noisy.toml");
    let base = fs::read_to_string(scenario("example1.toml"))
        .unwrap()
        .replace(
            "scenario.noise_variance = 0.0",
            "scenario.noise_variance = 1e-5",
        );
    fs::write(&cfg, base).unwrap();
    let traj = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = exec(&[
            "--config",
            cfg.to_str().unwrap(),
            "--mode",
            "simulate",
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read_to_string(out.join("trajectory.csv")).unwrap()
    };
    assert_eq!(traj("5", "a"), traj("5", "b"));
    assert_ne!(traj("5", "a"), traj("6", "c"));
}

#[test]
fn allocate_splits_shortage_evenly() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, mc) in [("link_a", 810.0), ("link_b", 856.0)] {
        fs::create_dir(dir.path().join(sub)).unwrap();
        let rows = [McRow {
            t: 0.55,
            mc_power: mc,
            binding: Binding::Vdcol,
            i_d_at_mc: 1.8,
        }];
        write_mc_csv(
            fs::File::create(dir.path().join(sub).join("mc.csv")).unwrap(),
            &rows,
        )
        .unwrap();
    }
    let cfg = dir.path().join("allocate.toml");
    fs::copy(scenario("allocate.toml"), &cfg).unwrap();
    let o = exec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("600.0 MW -> 727.0 MW"), "{stdout}");
    assert!(stdout.contains("500.0 MW -> 773.0 MW"), "{stdout}");
    assert!(stdout.contains("remaining margin 83.0 MW"), "{stdout}");
    let table = fs::read_to_string(dir.path().join("allocation.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn malformed_csv_reports_line_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("pmu.csv"),
        "t,v_re,v_im,i_re,i_im\n0,1,0,0.5,0\n0.01,1,zero,0.5,0\n",
    )
    .unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "mode = \"estimate\"\npaths.input = \"pmu.csv\"\n").unwrap();
    let o = exec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn bad_configuration_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "mode = \"estimate\"\nestimator.lambda = 1.5\npaths.input = \"x.csv\"\n",
    )
    .unwrap();
    let o = exec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = exec(&[
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}
