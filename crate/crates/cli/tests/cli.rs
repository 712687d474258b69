use std::fs;
use std::process::{Command, Output};

const HEADER: &str = "problem,n,solver,seconds,fwd_err,residual,apost_err,flops,workspace";

fn sgko(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sgko"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn field(line: &str, idx: usize) -> f64 {
    line.split(',').nth(idx).unwrap().parse().unwrap()
}

#[test]
fn solve_writes_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p1.csv");
    let o = sgko(
        &["solve", "--problem", "p1", "--n", "64", "--solver", "downdating", "--repeats", "1", "--out"],
        &[],
    );
    assert!(!o.status.success(), "missing --out value must be rejected");

    let o = sgko(
        &[
            "solve", "--problem", "p1", "--n", "64", "--solver", "downdating", "--repeats", "1", "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("p1,64,downdating,"));
    assert!(field(lines[1], 4) < 1e-13);
    assert!(field(lines[1], 6) < 1e-13);
}

#[test]
fn flags_come_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env.csv");
    let o = sgko(
        &["solve"],
        &[
            ("SGKO_PROBLEM", "identity"),
            ("SGKO_N", "16"),
            ("SGKO_SOLVER", "extended"),
            ("SGKO_REPEATS", "1"),
            ("SGKO_OUT", out.to_str().unwrap()),
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("identity,16,extended,"));
    assert!(field(row, 4) < 1e-14);
    assert_eq!(row.split(',').nth(6), Some(""));
}

#[test]
fn invert_reports_errors() {
    let o = sgko(&["invert", "--problem", "t2", "--n", "64", "--eps", "1e-6", "--out", "-"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "problem,n,eps,seconds,e1,e2,e3,flops,workspace");
    assert!(field(lines[1], 6) < 1e-6);
    assert_eq!(field(lines[1], 8), 128.0);
}

#[test]
fn failures_exit_nonzero_with_error_line() {
    let o = sgko(&["solve", "--problem", "p9", "--solver", "classic", "--out", "-"], &[]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error kind=invalid_problem message="), "{err}");

    let o = sgko(&["solve", "--problem", "t1", "--n", "8", "--solver", "classic", "--out", "-"], &[]);
    assert!(!o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("error kind=invalid_problem"));

    let o = sgko(&["invert", "--problem", "p1", "--n", "8", "--out", "-"], &[]);
    assert!(!o.status.success());

    let o = sgko(&["solve", "--problem", "p3", "--a", "1.5", "--solver", "classic", "--out", "-"], &[]);
    assert!(!o.status.success());
}

#[test]
fn sweep_is_deterministic_across_threading() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, par) in [(&a, false), (&b, true)] {
        let mut args = vec!["sweep", "--max-n", "128", "--repeats", "1", "--out", path.to_str().unwrap()];
        if par {
            args.push("--parallel-problems");
        }
        let o = sgko(&args, &[]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let strip = |p: &std::path::Path| -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(3);
                f.join(",")
            })
            .collect()
    };
    let (ra, rb) = (strip(&a), strip(&b));
    assert_eq!(ra, rb);
    // p1, p2 at n=128, seven p3 values, five p4 seeds; three solvers each
    assert_eq!(ra.len(), 1 + 3 * (2 + 7 + 5));
    let inv = fs::read_to_string(dir.path().join("a_invert.csv")).unwrap();
    assert_eq!(inv.lines().count(), 1 + 1 + 5);
}
