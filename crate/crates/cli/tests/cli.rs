use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_blochdress");

fn configs() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs"].iter().collect()
}

fn blochdress(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("RUST_LOG", "warn").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

/// Small, fast chain run with every observable enabled.
const SMALL: &str = r#"
schema = 1
[chain]
n_sites = 16
omega_b = 0.01
t_a = 0.05
t_b = 0.01
g0 = 0.02
n_max = 3
[initial_state]
kind = "coherent"
mean = 0.5
u = 8
sigma = 2
[evolution]
t_end = 200.0
[outputs]
sample_stride = 7
"#;

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn validate_echoes_fig4b_parameters() {
    let path = configs().join("fig4b.cfg");
    let o = blochdress(&["validate", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("N = 128"), "{text}");
    assert!(text.contains("t_a = 0.008"), "{text}");
    assert!(text.contains("t_b = 0.0008"), "{text}");
    assert!(text.contains("omega_B = 0.0008"), "{text}");
    assert!(text.contains("n_max = 60"), "{text}");
}

#[test]
fn every_shipped_config_validates() {
    let mut seen = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let o = blochdress(&["validate", path.to_str().unwrap()]);
            assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
            seen += 1;
        }
    }
    assert!(seen >= 20);
}

#[test]
fn empty_config_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "empty.cfg", "");
    let o = blochdress(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("schema"), "{}", stderr(&o));
}

#[test]
fn negative_sigma_is_reported_by_key_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "bad.cfg", &SMALL.replace("sigma = 2", "sigma = -2"));
    let o = blochdress(&["simulate", path.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("initial_state.sigma"), "{}", stderr(&o));
    assert!(!dir.path().join("o/frames.csv").exists());
}

#[test]
fn zero_duration_run_writes_one_normalized_frame() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "zero.cfg", &SMALL.replace("t_end = 200.0", "t_end = 0.0"));
    let out = dir.path().join("out");
    let o = blochdress(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let frames = fs::read_to_string(out.join("frames.csv")).unwrap();
    let norms = column(&frames, "norm");
    assert_eq!(norms.len(), 1);
    assert!((norms[0] - 1.0).abs() < 1e-14);
}

#[test]
fn jc_vacuum_follows_sin_squared() {
    let dir = tempfile::tempdir().unwrap();
    let path = configs().join("jc_vacuum.cfg");
    let o = blochdress(&["simulate", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let frames = fs::read_to_string(dir.path().join("frames.csv")).unwrap();
    let g = 0.0125;
    let t = column(&frames, "time");
    let n = column(&frames, "mean_n");
    assert!(t.len() > 100);
    for (t, n) in t.iter().zip(&n) {
        assert!((n - (g * t).sin().powi(2)).abs() < 1e-4, "t = {t}: {n}");
    }
    // Short chains are not checked for mass at the seam.
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seam_warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "small.cfg", SMALL);
    let mut bundles = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let o = blochdress(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        bundles.push(out);
    }
    for file in ["frames.csv", "inversion.csv", "current.csv", "photons.csv"] {
        let a = fs::read(bundles[0].join(file)).unwrap();
        let b = fs::read(bundles[1].join(file)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{file} differs between runs");
    }
    let hash = |dir: &Path| {
        let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("meta.json")).unwrap()).unwrap();
        meta["run_hash"].as_str().unwrap().to_string()
    };
    assert_eq!(hash(&bundles[0]), hash(&bundles[1]));
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "small.cfg", SMALL);
    let mut frames = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let o = blochdress(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", stderr(&o));
        frames.push(fs::read(out.join("frames.csv")).unwrap());
    }
    assert_eq!(frames[0], frames[1]);
}

#[test]
fn plot_bundle_includes_heatmaps_when_matrices_exist() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "small.cfg", SMALL);
    let out = dir.path().join("bundle");
    assert!(blochdress(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    let o = blochdress(&["plot", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let scalars = fs::read_to_string(out.join("plots/scalars.py")).unwrap();
    assert!(scalars.contains("\"mean_n\""));
    let heat = fs::read_to_string(out.join("plots/heatmaps.py")).unwrap();
    assert!(heat.contains("inversion.csv") && heat.contains("current.csv"));
}

#[test]
fn plot_without_frames_fails_and_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = blochdress(&["plot", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("frames.csv"));
}

#[test]
fn spectrum_of_bloch_run_peaks_at_the_bloch_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL
        .replace("g0 = 0.02", "g0 = 0.0")
        .replace("t_a = 0.05", "t_a = 0.005")
        .replace("t_end = 200.0", "t_end = 5026.548245743669");
    let path = write_config(dir.path(), "bo.cfg", &text);
    let out = dir.path().join("bo");
    assert!(blochdress(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    let o = blochdress(&["spectrum", out.join("frames.csv").to_str().unwrap(), "--column", "center"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let bin: f64 = text.lines().next().unwrap().split_whitespace().nth(4).unwrap().trim_end_matches(',').parse().unwrap();
    let strongest = text
        .lines()
        .skip(2)
        .map(|l| {
            let mut it = l.split(',').map(|v| v.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    assert!((strongest.0 - 0.01).abs() <= bin, "{text}");
}

#[test]
fn device_reports_render_chain_fragments() {
    let devices = configs().join("devices");
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("flux.json");
    let o = blochdress(&[
        "device",
        "josephson",
        devices.join("fluxonium.toml").to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("[chain]"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["fragment"]["t_a"].as_f64().unwrap() > 0.0);

    let o = blochdress(&["device", "heterostructure", devices.join("gaas_superlattice.toml").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("g0 = ") && text.contains("Bloch period"), "{text}");
}

#[test]
fn device_file_with_missing_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "broken.toml", "e_j_ghz = 30\n");
    let o = blochdress(&["device", "josephson", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
