use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qpms_cli::RunReport;

fn qpms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpms"))
        .args(args)
        .output()
        .expect("run qpms")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_prints_common_lmers() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("x.fasta");
    fs::write(&fasta, ">a\nACGTTGCA\n>b\nTTGCAACG\n>c\nCAACGTTG\n").unwrap();
    for algo in ["oracle", "prune", "qpms7", "traver", "sigma", "subset"] {
        let o = qpms(&[
            "solve",
            "--fasta",
            path(&fasta),
            "--l",
            "3",
            "--d",
            "0",
            "--q",
            "3",
            "--algo",
            algo,
        ]);
        assert!(
            o.status.success(),
            "{algo}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(stdout(&o), "ACG\t3\nTTG\t3\n", "{algo}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("x.fasta");
    fs::write(&fasta, ">a\nACGTACGTAC\n>b\nACGTACGTAC\n").unwrap();
    let f = path(&fasta);
    assert_eq!(
        qpms(&["solve", "--fasta", f, "--l", "3", "--d", "0", "--q", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qpms(&["solve", "--fasta", f, "--l", "11", "--d", "0", "--q", "2"])
            .status
            .code(),
        Some(2)
    );
    let budget = qpms(&[
        "solve", "--fasta", f, "--l", "9", "--d", "1", "--q", "2", "--algo", "oracle",
    ]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(!budget.stderr.is_empty());

    let bad = dir.path().join("bad.fasta");
    fs::write(&bad, "ACGT\n").unwrap();
    assert_eq!(
        qpms(&[
            "solve",
            "--fasta",
            path(&bad),
            "--l",
            "2",
            "--d",
            "0",
            "--q",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    fs::write(&bad, ">a\nACGX\n>b\nACGT\n").unwrap();
    assert_eq!(
        qpms(&[
            "solve",
            "--fasta",
            path(&bad),
            "--l",
            "2",
            "--d",
            "0",
            "--q",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.fasta");
    assert_eq!(
        qpms(&[
            "solve",
            "--fasta",
            path(&missing),
            "--l",
            "2",
            "--d",
            "0",
            "--q",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn generate_is_deterministic_and_recoverable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for prefix in [&a, &b] {
        let o = qpms(&[
            "generate",
            "--n",
            "8",
            "--m",
            "80",
            "--l",
            "8",
            "--d",
            "1",
            "--q",
            "8",
            "--seed",
            "3",
            "--out",
            path(prefix),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for ext in ["fasta", "truth"] {
        let x = fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let y = fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(x, y, "{ext}");
    }
    let truth = fs::read_to_string(dir.path().join("a.truth")).unwrap();
    assert!(truth.starts_with("#motif ") && truth.contains(" l=8 d=1 q=8\nseq=1 pos="));

    let o = qpms(&[
        "solve",
        "--fasta",
        path(&dir.path().join("a.fasta")),
        "--l",
        "8",
        "--d",
        "1",
        "--q",
        "8",
        "--truth",
        path(&dir.path().join("a.truth")),
        "--json",
    ]);
    assert!(o.status.success());
    let report: RunReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.schema, 1);
    assert_eq!(report.recovered, Some(true));
    assert_eq!(report.algorithm, "sigma");
    assert_eq!(report.motif_count, report.motifs.as_ref().unwrap().len());
    assert_eq!(
        (report.n, report.m, report.l, report.d, report.q),
        (8, 80, 8, 1, 8)
    );
}

#[test]
fn default_generate_shape() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g");
    assert!(
        qpms(&["generate", "--l", "13", "--d", "4", "--out", path(&p)])
            .status
            .success()
    );
    let fasta = fs::read_to_string(dir.path().join("g.fasta")).unwrap();
    assert_eq!(fasta.matches('>').count(), 20);
    let first: String = fasta
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with('>'))
        .collect();
    assert_eq!(first.len(), 600);
    assert_eq!(
        fs::read_to_string(dir.path().join("g.truth"))
            .unwrap()
            .lines()
            .count(),
        21
    );
    assert_eq!(
        qpms(&["generate", "--l", "13", "--d", "14", "--out", path(&p)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn report_without_truth_has_no_flag() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("x.fasta");
    fs::write(&fasta, ">a\nACGTTGCA\n>b\nTTGCAACG\n").unwrap();
    let o = qpms(&[
        "solve",
        "--fasta",
        path(&fasta),
        "--l",
        "4",
        "--d",
        "0",
        "--q",
        "2",
        "--json",
        "--max-listed",
        "0",
    ]);
    let text = stdout(&o);
    assert!(!text.contains("recovered"));
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.motif_count, 2);
    assert!(report.motifs.is_none());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t");
    assert!(qpms(&[
        "generate",
        "--n",
        "10",
        "--m",
        "100",
        "--l",
        "7",
        "--d",
        "1",
        "--q",
        "6",
        "--seed",
        "9",
        "--out",
        path(&p)
    ])
    .status
    .success());
    let f = dir.path().join("t.fasta");
    let run = |threads: &str, extra: &[&str]| {
        let mut args = vec![
            "solve",
            "--fasta",
            path(&f),
            "--l",
            "7",
            "--d",
            "1",
            "--q",
            "6",
            "--threads",
            threads,
        ];
        args.extend_from_slice(extra);
        stdout(&qpms(&args))
    };
    let one = run("1", &[]);
    assert!(!one.is_empty());
    assert_eq!(run("8", &[]), one);
    assert_eq!(
        run(
            "3",
            &["--chunk", "1", "--algo", "traver", "--no-pos-reorder"]
        ),
        one
    );
    assert_eq!(run("2", &["--algo", "qpms7", "--no-string-reorder"]), one);
}

#[test]
fn score_with_starts() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("s.fasta");
    fs::write(&fasta, ">a\nTTACGTA\n>b\nACGTAAA\n>c\nGGGACGT\n").unwrap();
    let o = qpms(&[
        "score",
        "--fasta",
        path(&fasta),
        "--l",
        "4",
        "--starts",
        "3,1,4",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("consensus\tACGT\n"));
    assert!(text.ends_with("score\t12\n"));
    assert_eq!(
        qpms(&[
            "score",
            "--fasta",
            path(&fasta),
            "--l",
            "4",
            "--starts",
            "3,1,5"
        ])
        .status
        .code(),
        Some(2)
    );

    let best = stdout(&qpms(&["score", "--fasta", path(&fasta), "--l", "4"]));
    assert!(best.starts_with("starts\t3,1,4\n"));
    let o = qpms(&[
        "score",
        "--fasta",
        path(&fasta),
        "--l",
        "2",
        "--budget",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn score_of_worked_profile_is_42() {
    // seven rows whose column maxima are 5,5,6,4,5,5,6,6 with consensus ATGCAACT
    let rows = [
        "ATGCAACT", "ATGCAACT", "ATGCAACT", "ATGCAACT", "ATGGAACT", "CCGAGGCT", "GGTTTTGA",
    ];
    let mut text = String::new();
    for (i, r) in rows.iter().enumerate() {
        text.push_str(&format!(">s{i}\n{r}\n"));
    }
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("p.fasta");
    fs::write(&fasta, text).unwrap();
    let out = stdout(&qpms(&[
        "score",
        "--fasta",
        path(&fasta),
        "--l",
        "8",
        "--starts",
        "1,1,1,1,1,1,1",
    ]));
    assert!(out.contains("consensus\tATGCAACT\n"), "{out}");
    assert!(out.ends_with("score\t42\n"), "{out}");
}

#[test]
fn bench_timeout_row() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.jsonl");
    let o = qpms(&[
        "bench",
        "--suite",
        "challenging",
        "--q",
        "20",
        "--algos",
        "sigma",
        "--timeout",
        "0.2",
        "--seeds",
        "1",
        "--only",
        "23:9",
        "--rows",
        path(&rows),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert!(table.lines().next().unwrap().contains("algo"));
    assert!(table.contains("TIMEOUT"));
    let row: serde_json::Value =
        serde_json::from_str(fs::read_to_string(&rows).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(row["status"], "TIMEOUT");
    assert_eq!(row["l"], 23);
}

#[test]
fn bench_small_shape_matches_across_algorithms() {
    let o = qpms(&[
        "bench",
        "--q",
        "10",
        "--algos",
        "sigma,traver,qpms7",
        "--timeout",
        "120",
        "--seeds",
        "1,2",
        "--only",
        "9:2",
        "--n",
        "10",
        "--m",
        "200",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    let data: Vec<Vec<&str>> = table
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(data.len(), 6);
    for seed_rows in data.chunks(3) {
        assert!(
            seed_rows
                .iter()
                .all(|r| r[7] == seed_rows[0][7] && r[8] == "true"),
            "{table}"
        );
    }
}
