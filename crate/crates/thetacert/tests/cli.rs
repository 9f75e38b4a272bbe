//! End-to-end runs of the binary and determinism of the sweeps.

use std::path::PathBuf;
use std::process::Command;

use thetacert::kernels::KernelKind;
use thetacert::operators::{sweep, OpConfig, Quantity};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thetacert"))
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("thetacert_{name}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn fast_min_i_runs_and_writes_cells() {
    let out = tmp("fast");
    let o = bin()
        .args(["min-i", "--n", "8", "--fast", "--out-dir"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let cells = std::fs::read_to_string(out.join("itilde_N8.txt")).unwrap();
    assert_eq!(cells.lines().filter(|l| !l.starts_with('#')).count(), 8);
    let s = std::fs::read_to_string(out.join("min_i.summary")).unwrap();
    assert!(s.contains("min_itilde"));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let out = tmp("badcfg");
    let cfg = out.join("run.cfg");
    std::fs::write(&cfg, "tolerance=1e-3\n").unwrap();
    let o = bin().arg("gershgorin").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(64));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown key") && err.contains("abs_tol"), "{err}");
}

#[test]
fn gershgorin_command_reports_both_orders() {
    let out = tmp("gersh");
    let o = bin().arg("gershgorin").arg("--out-dir").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("gersh3 -0.31246") && s.contains("gersh6 -0.31209"), "{s}");
}

#[test]
fn certify_all_on_missing_inputs_fails() {
    let out = tmp("cert");
    // tiny fast run: every input computed, certificate expected to fail
    let o = bin()
        .args([
            "certify-all",
            "--n",
            "8",
            "--fast",
            "--budget",
            "20",
            "--mesh-left",
            "16",
            "--mesh-middle",
            "32",
            "--mesh-right",
            "16",
            "--out-dir",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let rep = std::fs::read_to_string(out.join("certificate.txt")).unwrap();
    assert!(rep.contains("summary FAIL"));
    assert!(rep.contains("FAIL(width-limited)"));
}

#[test]
fn sweeps_are_identical_across_runs_and_thread_counts() {
    let cfg = OpConfig {
        budget: 20,
        ..OpConfig::default()
    };
    let q = Quantity::Sym(KernelKind::J);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep(q, 16, &cfg).unwrap().to_report())
    };
    let a = run(1);
    assert_eq!(a, run(1));
    assert_eq!(a, run(3));
}

#[test]
fn corrupted_matrix_file_fails_with_provenance() {
    let out = tmp("corrupt");
    let mats = out.join("mats");
    std::fs::create_dir_all(&mats).unwrap();
    let good = "0.5 ".repeat(24) + "\n";
    std::fs::write(mats.join("t3_fin.txt"), good.repeat(23) + "0.5 oops\n").unwrap();
    std::fs::write(mats.join("t6_fin.txt"), good.repeat(24)).unwrap();
    let o = bin()
        .args(["certify-all", "--n", "8", "--fast", "--budget", "20"])
        .args(["--mesh-left", "16", "--mesh-middle", "32", "--mesh-right", "16"])
        .arg("--matrix-dir")
        .arg(&mats)
        .arg("--out-dir")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let rep = std::fs::read_to_string(out.join("certificate.txt")).unwrap();
    assert!(rep.contains("# error gershgorin:") && rep.contains("line 24"), "{rep}");
    assert!(rep.contains("# error defect3:"), "{rep}");
    assert!(rep.contains("summary FAIL"));
}
