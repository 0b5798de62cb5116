use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_platebench");

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = run(args, cwd);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str], cwd: &Path) {
    let out = run(args, cwd);
    assert!(!out.status.success(), "{args:?} should fail");
    assert!(!out.stderr.is_empty());
}

const CONFIG: &str = "\
corpus_count = 2
plate_width = 240
plate_height = 80
detectors = canny, copda
levels = 0, 0.3
";

#[test]
fn gen_noise_detect_pfom_chain() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("c.cfg"), CONFIG).unwrap();
    ok(&["gen", "--config", "c.cfg", "--out-dir", "corpus"], d);
    let manifest = std::fs::read_to_string(d.join("corpus/manifest.tsv")).unwrap();
    assert_eq!(manifest.lines().count(), 2);
    assert!(manifest.starts_with("plate_000\twidth=240;height=80;"));

    ok(
        &[
            "noise",
            "--kind",
            "impulse",
            "--level",
            "0.3",
            "--seed",
            "5",
            "--in",
            "corpus/plate_000.pgm",
            "--out",
            "noisy.pgm",
        ],
        d,
    );
    ok(
        &[
            "detect",
            "--detector",
            "canny",
            "--in",
            "noisy.pgm",
            "--out",
            "edges.pgm",
            "--box-average",
        ],
        d,
    );
    let score = ok(
        &[
            "pfom",
            "--detected",
            "edges.pgm",
            "--truth",
            "corpus/plate_000_truth.pgm",
        ],
        d,
    );
    let score = score.trim();
    assert_eq!(score.len(), 6, "{score}");
    let v: f64 = score.parse().unwrap();
    assert!((0.0..=1.0).contains(&v));

    let perfect = ok(
        &[
            "pfom",
            "--detected",
            "corpus/plate_000_truth.pgm",
            "--truth",
            "corpus/plate_000_truth.pgm",
        ],
        d,
    );
    assert_eq!(perfect, "1.0000\n");
}

#[test]
fn run_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("c.cfg"), CONFIG).unwrap();
    let md = ok(
        &[
            "run",
            "--config",
            "c.cfg",
            "--out-dir",
            "out",
            "--dump-edges",
        ],
        d,
    );
    assert!(md.contains("| Image without noise | Image with noise (30%) |"));
    let csv = std::fs::read_to_string(d.join("out/report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 2);
    assert!(d.join("out/edges/plate_001_copda_0.30_1.pgm").exists());

    let again = ok(
        &["report", "--rows", "out/report.csv", "--format", "markdown"],
        d,
    );
    // rebuilt from 4-decimal scores, so means may differ in the last digit
    assert_eq!(again.lines().count(), md.lines().count());
    assert_eq!(again.lines().next(), md.lines().next());
    let csv_again = ok(
        &["report", "--rows", "out/report.csv", "--format", "csv"],
        d,
    );
    assert_eq!(csv_again, csv);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.cfg"), "levels = 2.0\n").unwrap();
    std::fs::write(d.join("bad.pgm"), "P5\n2 2\n65535\n").unwrap();
    std::fs::write(
        d.join("empty.csv"),
        "plate_id,detector,noise_kind,level,seed,pfom,k_actual,k_detected,wall_time_ms\n",
    )
    .unwrap();
    fails(&["run", "--config", "bad.cfg", "--out-dir", "o"], d);
    fails(&["run", "--config", "missing.cfg", "--out-dir", "o"], d);
    fails(
        &[
            "detect",
            "--detector",
            "canny",
            "--in",
            "bad.pgm",
            "--out",
            "e.pgm",
        ],
        d,
    );
    fails(
        &[
            "detect",
            "--detector",
            "sobol",
            "--in",
            "bad.pgm",
            "--out",
            "e.pgm",
        ],
        d,
    );
    fails(
        &[
            "noise", "--kind", "impulse", "--level", "1.5", "--in", "bad.pgm", "--out", "n.pgm",
        ],
        d,
    );
    fails(&["report", "--rows", "empty.csv", "--format", "csv"], d);

    // truth and detection of different sizes
    std::fs::write(d.join("a.pgm"), b"P5\n2 1\n255\n\xff\x00").unwrap();
    std::fs::write(d.join("b.pgm"), b"P5\n1 2\n255\n\xff\x00").unwrap();
    fails(&["pfom", "--detected", "a.pgm", "--truth", "b.pgm"], d);
    std::fs::write(d.join("z.pgm"), b"P5\n1 2\n255\n\x00\x00").unwrap();
    fails(&["pfom", "--detected", "b.pgm", "--truth", "z.pgm"], d);
}
