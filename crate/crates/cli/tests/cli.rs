use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_miso-pareto"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("MISO_PARETO_THREADS")
        .output()
        .expect("binary runs")
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn meta(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json")).unwrap()).unwrap()
}

#[test]
fn two_point_grid_gives_the_endpoints() {
    let d = TempDir::new().unwrap();
    let o = run(&["--preset", "fig2", "--scenario", "nn-closed", "--M", "2"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&d.path().join("nn_closed.csv"));
    assert_eq!(r.len(), 2);
    assert_eq!(r[1][1], "1.00000000000");
}

#[test]
fn preset_writes_every_region() {
    let d = TempDir::new().unwrap();
    let o = run(&["--preset", "fig2", "--M", "50"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["nn_num.csv", "nn_closed.csv", "dn.csv", "nd.csv", "dd.csv", "union.csv", "region.gp", "meta.json"] {
        assert!(d.path().join(f).is_file(), "missing {f}");
    }
    let gp = std::fs::read_to_string(d.path().join("region.gp")).unwrap();
    assert!(gp.contains("'dd.csv'") && gp.contains("'union.csv'"));
    let m = meta(d.path());
    let k = &m["constants"];
    assert_eq!((k["g11"].as_f64(), k["g12"].as_f64(), k["g21"].as_f64(), k["g22"].as_f64()), (Some(1.0), Some(2.0), Some(2.0), Some(1.0)));
    assert_eq!((k["kappa1"].as_f64(), k["kappa2"].as_f64()), (Some(0.3), Some(0.3)));
    assert_eq!((k["sigma1_sq"].as_f64(), k["sigma2_sq"].as_f64()), (Some(1.0), Some(1.0)));
    assert_eq!(m["boundaries"].as_array().unwrap().len(), 6);
}

#[test]
fn fig3_preset_correlations() {
    let d = TempDir::new().unwrap();
    assert!(run(&["--preset", "fig3", "--scenario", "dd", "--M", "20"], d.path()).status.success());
    let m = meta(d.path());
    assert_eq!(m["constants"]["kappa1"].as_f64(), Some(0.85));
    assert_eq!(m["constants"]["kappa2"].as_f64(), Some(0.85));
}

#[test]
fn sequential_runs_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["--rayleigh", "4,3", "--M", "60", "--scenario", "nn-num,dn,dd,union,oracle:nn"];
    assert!(run(&args, a.path()).status.success());
    assert!(run(&args, b.path()).status.success());
    for f in ["nn_num.csv", "dn.csv", "dd.csv", "union.csv", "oracle_nn.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn parallel_matches_sequential() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["--preset", "fig4", "--M", "80", "--scenario", "nn-num,dn,nd,dd"];
    assert!(run(&args, a.path()).status.success());
    let mut par = args.to_vec();
    par.push("--parallel");
    assert!(run(&par, b.path()).status.success());
    for f in ["nn_num.csv", "dn.csv", "nd.csv", "dd.csv"] {
        let (x, y) = (rows(&a.path().join(f)), rows(&b.path().join(f)));
        assert_eq!(x.len(), y.len(), "{f}");
        for (p, q) in x.iter().zip(&y) {
            for col in [1, 2] {
                let (u, v): (f64, f64) = (p[col].parse().unwrap(), q[col].parse().unwrap());
                assert!((u - v).abs() <= 1e-6, "{f}: {u} vs {v}");
            }
        }
    }
}

#[test]
fn channel_and_constants_files() {
    let d = TempDir::new().unwrap();
    let consts = d.path().join("k.json");
    std::fs::write(
        &consts,
        r#"{"g11":1.0,"g12":2.0,"g21":2.0,"g22":1.0,"kappa1":0.3,"kappa2":0.3,"sigma1_sq":1.0,"sigma2_sq":1.0}"#,
    )
    .unwrap();
    let out = d.path().join("a");
    let o = run(&["--channels", consts.to_str().unwrap(), "--scenario", "dn", "--M", "30"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(meta(&out)["channel"]["kind"], "constants file");

    let ch = d.path().join("h.json");
    std::fs::write(
        &ch,
        r#"{"n_t":2,"h11":[[1.0,0.0],[0.0,0.0]],"h12":[[0.6,0.0],[0.8,0.0]],"h21":[[0.0,0.0],[1.0,0.0]],"h22":[[0.5,0.5],[0.5,0.0]],"sigma1_sq":1.0,"sigma2_sq":0.5}"#,
    )
    .unwrap();
    let out = d.path().join("b");
    let o = run(&["--channels", ch.to_str().unwrap(), "--scenario", "nn-closed", "--M", "30"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = meta(&out);
    assert_eq!(m["channel"]["kind"], "channel file");
    assert!((m["constants"]["kappa1"].as_f64().unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let code = |args: &[&str], out: &Path| run(args, out).status.code();
    assert_eq!(code(&["--constants", "1,2,2,1,1.5,0.3,1,1"], d.path()), Some(2));
    assert_eq!(code(&["--constants", "1,2,2"], d.path()), Some(2));
    assert_eq!(code(&["--preset", "fig2", "--scenario", "xx"], d.path()), Some(2));
    assert_eq!(code(&["--preset", "fig2", "--M", "1"], d.path()), Some(2));
    assert_eq!(code(&["--preset", "fig2", "--scenario", "oracle:dn", "--M", "5"], d.path()), Some(2));
    assert_eq!(code(&["--preset", "fig2", "--epsilon", "0"], d.path()), Some(2));
    assert_eq!(code(&["--scenario", "dn"], d.path()), Some(2));
    let blocker = d.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    assert_eq!(code(&["--preset", "fig2", "--scenario", "dn"], &blocker.join("sub")), Some(4));
    assert_eq!(code(&["--channels", "/nonexistent/k.json"], d.path()), Some(4));
}

#[test]
fn thread_cap_from_environment() {
    let d = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_miso-pareto"))
        .args(["--preset", "fig4", "--scenario", "dn,oracle:dn", "--M", "20", "--parallel", "--out"])
        .arg(d.path())
        .env("MISO_PARETO_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(meta(d.path())["settings"]["threads"], 1);
}
