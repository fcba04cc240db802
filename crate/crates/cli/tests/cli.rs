use std::path::Path;
use std::process::{Command, Output};

fn hybsel(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hybsel"));
    cmd.args(args).env_remove("HYBSEL_DISABLE_SHORTCUTS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("run hybsel")
}

fn ok(args: &[&str], envs: &[(&str, &str)]) -> String {
    let out = hybsel(args, envs);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Column values of the single data row in CSV output.
fn row(csv: &str) -> Vec<String> {
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "{csv}");
    assert!(lines[0].starts_with("text,structure,n,backend"));
    lines[1].split(',').map(str::to_string).collect()
}

fn checksum(csv: &str) -> String {
    row(csv).last().unwrap().clone()
}

fn gen(dir: &Path, kind: &str, size: usize) -> String {
    let path = dir.join(format!("{kind}.txt"));
    let p = path.to_str().unwrap().to_string();
    ok(
        &["gen-text", "--synthetic", kind, "--size", &size.to_string(), "--seed", "3", "--base-segment", "4096", "--output", &p],
        &[],
    );
    p
}

#[test]
fn gen_text_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "repetitive", 20_000);
    let first = std::fs::read(&a).unwrap();
    let b = gen(dir.path(), "repetitive", 20_000);
    assert_eq!(first, std::fs::read(b).unwrap());
    assert_eq!(first.len(), 20_000);
    assert!(!first.contains(&0));
}

#[test]
fn plcp_backends_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "repetitive", 30_000);
    let base = ["bench-plcp", "--input", &input, "--queries", "3000", "--seed", "9"];
    let hyb = ok(&[&base[..], &["--backend", "hyb", "--bs", "8"]].concat(), &[]);
    let plain = ok(&[&base[..], &["--backend", "plain"]].concat(), &[]);
    assert_eq!(checksum(&hyb), checksum(&plain));
    let r = row(&hyb);
    assert_eq!(r[0], "repetitive.txt");
    assert_eq!(r[1], "plcp");
    assert_eq!(r[2], "30001");
    assert_eq!(r[4], "8");
}

#[test]
fn disabling_shortcuts_keeps_answers() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "repetitive", 30_000);
    for cmd in ["bench-plcp", "bench-bwt-select"] {
        let args = ["--input", &input, "--queries", "2000", "--backend", "hyb"];
        let args: Vec<&str> = std::iter::once(cmd).chain(args).collect();
        let on = ok(&args, &[]);
        let off = ok(&args, &[("HYBSEL_DISABLE_SHORTCUTS", "1")]);
        assert_eq!(checksum(&on), checksum(&off), "{cmd}");
    }
}

#[test]
fn bwt_select_shapes_and_backends_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "random", 10_000);
    let mut sums = Vec::new();
    for backend in ["hyb", "plain"] {
        for shape in ["huff", "blcd"] {
            let out = ok(
                &["bench-bwt-select", "--input", &input, "--backend", backend, "--shape", shape, "--queries", "1500"],
                &[],
            );
            assert_eq!(row(&out)[5], shape);
            sums.push(checksum(&out));
        }
    }
    assert!(sums.windows(2).all(|w| w[0] == w[1]), "{sums:?}");
}

#[test]
fn synthetic_input_and_csv_append() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let csv = csv.to_str().unwrap();
    for backend in ["hyb", "plain"] {
        let out = ok(
            &["bench-plcp", "--synthetic", "random", "--size", "5000", "--queries", "100", "--backend", backend, "--csv", csv],
            &[],
        );
        assert!(out.is_empty());
    }
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().filter(|l| l.starts_with("text,")).count(), 1);
}

#[test]
fn build_writes_container() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "random", 4000);
    for structure in ["plcp", "bwt-select"] {
        let out = dir.path().join(format!("{structure}.bin"));
        let csv = ok(
            &["build", "--input", &input, "--structure", structure, "--output", out.to_str().unwrap()],
            &[],
        );
        let bytes = std::fs::read(&out).unwrap();
        assert_eq!(&bytes[..8], b"HYBSELCT");
        let size: usize = row(&csv)[9].parse().unwrap();
        assert_eq!(bytes.len(), 22 + size);
    }
}

#[test]
fn bad_inputs_fail() {
    let dir = tempfile::tempdir().unwrap();
    let nul = dir.path().join("nul.txt");
    std::fs::write(&nul, b"abc\0def").unwrap();
    let out = hybsel(&["bench-plcp", "--input", nul.to_str().unwrap()], &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sentinel"));

    let missing = dir.path().join("missing.txt");
    assert!(!hybsel(&["bench-plcp", "--input", missing.to_str().unwrap()], &[]).status.success());
    assert!(!hybsel(&["bench-plcp", "--synthetic", "random", "--bs", "12"], &[]).status.success());
    assert!(!hybsel(&["bench-plcp", "--synthetic", "random", "--queries", "0"], &[]).status.success());
    assert!(!hybsel(&["bench-plcp"], &[]).status.success());
    let out = dir.path().join("x.txt");
    let bad_rate = hybsel(
        &["gen-text", "--synthetic", "repetitive", "--mutation-rate", "2", "--output", out.to_str().unwrap()],
        &[],
    );
    assert!(!bad_rate.status.success());
}
