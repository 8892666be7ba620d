use std::path::Path;
use std::process::{Command, Output};

use cholcov::experiments::CSV_HEADER;

fn cholcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cholcov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sweep_to(out: &Path, extra: &[&str]) -> Output {
    let out = out.to_str().unwrap();
    let mut args = vec![
        "sweep", "--p", "10", "--n", "4,6", "--cond", "4,64", "--eta", "0.25", "--trials", "8",
        "--out", out,
    ];
    args.extend_from_slice(extra);
    cholcov(&args)
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("risk.csv");
    let res = sweep_to(
        &out,
        &["--estimators", "fsopt,oracle,rcf", "--deterministic"],
    );
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 2 * 2 * 3);
    assert!(lines[1].starts_with("p10_n4_cond4_eta0.25,10,4,"));
    // progress goes to stderr, one line per row
    let progress = String::from_utf8_lossy(&res.stderr);
    assert_eq!(progress.lines().filter(|l| l.starts_with('[')).count(), 12);
}

#[test]
fn deterministic_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(sweep_to(&a, &["--deterministic"]).status.success());
    assert!(sweep_to(&b, &["--deterministic"]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = dir.path().join("c.csv");
    assert!(sweep_to(&c, &[]).status.success());
    let text = std::fs::read_to_string(&c).unwrap();
    let (comment, rest) = text.split_once('\n').unwrap();
    assert!(comment.starts_with("# generated"));
    assert_eq!(rest.as_bytes(), std::fs::read(&a).unwrap().as_slice());
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            "# small grid\np = 8\nn = 5\ncond = 16\neta = 0.25, 0.4\nestimators = lwls\ntrials = 50\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let res = cholcov(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "4",
        "--deterministic",
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.contains(",lwls,4,")));
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    for args in [
        vec!["sweep", "--p", "10", "--n", "10", "--out", out],
        vec![
            "sweep", "--p", "10", "--n", "4", "--cond", "1", "--out", out,
        ],
        vec![
            "sweep",
            "--p",
            "10",
            "--n",
            "4",
            "--estimators",
            "nls",
            "--out",
            out,
        ],
        vec!["sweep", "--config", "/nonexistent/sweep.cfg"],
        vec!["sweep", "--p", "ten"],
    ] {
        let res = cholcov(&args);
        assert_eq!(res.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&res.stderr).contains("error"));
    }
    assert!(!Path::new(out).exists());
}

#[test]
fn unwritable_output_exits_with_3() {
    let res = cholcov(&[
        "sweep",
        "--p",
        "6",
        "--n",
        "3",
        "--cond",
        "4",
        "--eta",
        "0.25",
        "--trials",
        "2",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn selftest_passes() {
    let res = cholcov(&["selftest", "--seed", "3"]);
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(res.status.success(), "{stdout}");
    assert!(stdout.contains("5/5 checks passed"));
}
