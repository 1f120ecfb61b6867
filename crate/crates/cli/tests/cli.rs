use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use floquet_kick_sim::{run_sweep, run_timeseries, Config, HEADER};

const CHAIN6: &str = r#"
[model]
dims = 1
extents = [6]
periodic = true
J = 1.0
kappa = 0.25
h = 2.0
omega = 30.0
"#;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("fks-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }
    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn cli(args: &[&str], config: Option<&Path>, out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_floquet-kick-sim"));
    cmd.args(args);
    if let Some(c) = config {
        cmd.arg("--config").arg(c);
    }
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn coeffs_table_has_six_exact_rows() {
    let out = cli(&["coeffs"], None, None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().any(|r| r.starts_with("2,NNNI,") && r.contains(",281,64,")), "{rows:?}");
    assert!(rows.iter().any(|r| r.starts_with("1,NNI,") && r.contains(",3,1,")), "{rows:?}");
    assert!(rows.iter().any(|r| r.starts_with("2,NNI,") && r.contains(",21,4,")), "{rows:?}");
}

#[test]
fn malformed_key_exits_2_without_output() {
    let s = Scratch::new("badkey");
    let cfg = s.file("c.toml", &format!("{CHAIN6}\n[timeseries]\nt_over_T = [0.0]\nmethodz = [\"exact\"]\n"));
    let out_path = s.path("out.csv");
    let out = cli(&["timeseries"], Some(&cfg), Some(&out_path));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("methodz"));
    assert!(!out_path.exists());
}

#[test]
fn missing_config_and_bad_lattice_are_config_errors() {
    assert_eq!(cli(&["sweep"], None, None).status.code(), Some(2));
    let s = Scratch::new("lattice");
    let cfg = s.file("c.toml", &CHAIN6.replace("extents = [6]", "extents = [6, 4]"));
    assert_eq!(cli(&["compile"], Some(&cfg), None).status.code(), Some(2));
}

#[test]
fn oversize_system_is_a_capacity_error() {
    let s = Scratch::new("capacity");
    let cfg = s.file("c.toml", &format!("{}\n[timeseries]\nt_over_T = [0.0]\n", CHAIN6.replace("[6]", "[64]")));
    let out_path = s.path("out.csv");
    let out = cli(&["timeseries"], Some(&cfg), Some(&out_path));
    assert_eq!(out.status.code(), Some(3));
    assert!(!out_path.exists());
}

#[test]
fn compile_counts_line() {
    let s = Scratch::new("compile");
    let torus = r#"
[model]
dims = 2
extents = [4, 5]
periodic = true
J = 1.0
kappa = 0.25
h = 2.0
omega = 30.0
"#;
    let cfg = s.file("generic.toml", &format!("{torus}\n[compile]\nt_over_T = 22.3\nt0 = 0.37\n"));
    let out = cli(&["compile", "--counts"], Some(&cfg), Some(&s.path("c.txt")));
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2q=70 1q=40");
    let circuit = std::fs::read_to_string(s.path("c.txt")).unwrap();
    assert!(circuit.starts_with(HEADER));

    let cfg = s.file("half.toml", &format!("{torus}\n[compile]\nt_over_T = 22.5\npeephole = true\n"));
    let out = cli(&["compile", "--counts"], Some(&cfg), None);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2q=0 1q=0");

    let nn_only = CHAIN6.replace("kappa = 0.25", "kappa = 0.0");
    let cfg = s.file("nn.toml", &format!("{nn_only}\n[compile]\nt_over_T = 3.3\n"));
    let out = cli(&["compile", "--counts"], Some(&cfg), None);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("2q=6 "));
}

#[test]
fn timeseries_rows_and_half_period_invariant() {
    let cfg = Config::parse(&format!(
        "{CHAIN6}\n[timeseries]\nt_over_T = [0.0, 0.5, 1.0, 1.3, 2.5]\nmethods = [\"exact\", \"qhiffs\"]\n"
    ))
    .unwrap();
    let rows = run_timeseries(&cfg, 0).unwrap();
    assert_eq!(rows.len(), 10);
    let qh: Vec<_> = rows.iter().filter(|r| r.method == "qhiffs").collect();
    let c0 = qh.iter().find(|r| r.t_over_t == 0.0).unwrap().correlation;
    for r in qh.iter().filter(|r| (r.t_over_t * 2.0).fract() == 0.0) {
        assert!((r.correlation - c0).abs() < 1e-12, "{} vs {c0}", r.correlation);
    }
}

#[test]
fn seeded_output_is_byte_identical() {
    let s = Scratch::new("determinism");
    let cfg = s.file(
        "c.toml",
        &format!("{CHAIN6}\n[timeseries]\nt_over_T = [0.25, 1.75]\nmethods = [\"qhiffs\", \"trotter\"]\nshots = 200\n"),
    );
    let run = |seed: &str, name: &str| {
        let p = s.path(name);
        let out = cli(&["timeseries", "--seed", seed], Some(&cfg), Some(&p));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(p).unwrap()
    };
    let a = run("5", "a.csv");
    assert_eq!(a, run("5", "b.csv"));
    assert_ne!(a, run("6", "c.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(data_rows(&text).iter().all(|r| r.split(',').nth(4).is_some_and(|v| !v.is_empty())));
}

#[test]
fn sweep_grid_counts_and_phase_signs() {
    let n8 = CHAIN6.replace("[6]", "[8]");
    let cfg = Config::parse(&format!(
        "{n8}\n[sweep]\nh = [0.0, 0.5, 1.0]\nkappa = [0.1, 0.3, 0.9]\nt_over_T = [1.25]\nmethods = [\"exact\"]\n"
    ))
    .unwrap();
    let rows = run_sweep(&cfg, 0).unwrap();
    assert_eq!(rows.len(), 9);
    for r in rows.iter().filter(|r| r.h == 0.0) {
        if r.kappa < 0.5 {
            assert!((r.correlation - 1.0).abs() < 1e-8, "κ={}: {}", r.kappa, r.correlation);
        } else {
            assert!((r.correlation + 1.0).abs() < 1e-8, "κ={}: {}", r.kappa, r.correlation);
        }
    }
}

#[test]
fn degenerate_scan_measures_zero() {
    // without a drive the kick vanishes and QHiFFS is exact
    let cfg = Config::parse(&format!(
        "{}\n[error_scan]\nvariable = \"t\"\nvalues = [1.0, 2.0]\nmethods = [\"measured\"]\nn_states = 4\n",
        CHAIN6.replace("h = 2.0", "h = 0.0")
    ))
    .unwrap();
    let rows = floquet_kick_sim::run_error_scan(&cfg, 1).unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!(r.infidelity_measured.unwrap().abs() < 1e-9);
    }
}
