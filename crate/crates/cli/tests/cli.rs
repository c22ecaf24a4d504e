//! End-to-end tests of the `ssdiv` binary: exit codes, CSV headers,
//! output stability, and the PGM verification loop.

use std::process::{Command, Output};

fn ssdiv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ssdiv"))
}

fn run(args: &[&str]) -> Output {
    ssdiv().args(args).output().expect("binary must spawn")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn assert_exit(output: &Output, code: i32, context: &str) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "{context}: stdout={:?} stderr={:?}",
        stdout_of(output),
        stderr_of(output)
    );
}

#[test]
fn model_csv_is_byte_stable_with_the_exact_header() {
    let args = ["model", "--n", "512,1024,2048", "--p", "0.75"];
    let first = run(&args);
    assert_exit(&first, 0, "model run");
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "same flags, same bytes");
    let text = stdout_of(&first);
    assert_eq!(
        text.lines().next().unwrap(),
        "n,g,r,B,P,A,lambda,q,c,W_E,W_SSD,Omega,T_Ex,T_SBR,T_MBR,S_SBR,S_MBR"
    );
    assert_eq!(text.lines().count(), 4, "header plus one row per size");
    assert!(text.ends_with('\n'), "LF-terminated");
}

#[test]
fn model_mc_check_accepts_its_own_closed_form() {
    let out = run(&[
        "model",
        "--n",
        "256",
        "--g",
        "2",
        "--B",
        "8",
        "--a",
        "16",
        "--lambda",
        "3",
        "--check-mc",
        "4000",
        "--seed",
        "11",
    ]);
    assert_exit(&out, 0, "MC cross-check within 1%");
}

#[test]
fn render_verify_loop_covers_all_three_exits() {
    let dir = tempfile::tempdir().unwrap();
    let ex = dir.path().join("ex.pgm");
    let ask = dir.path().join("ask.pgm");
    let small = dir.path().join("small.pgm");

    let out = run(&[
        "render",
        "--approach",
        "EX",
        "--n",
        "128",
        "--dwell",
        "128",
        "--out",
        ex.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "exhaustive render");
    let out = run(&[
        "render",
        "--approach",
        "ASK",
        "--n",
        "128",
        "--dwell",
        "128",
        "--g",
        "8",
        "--r",
        "2",
        "--B",
        "8",
        "--out",
        ask.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "subdivision render");
    let out = run(&[
        "render",
        "--approach",
        "EX",
        "--n",
        "64",
        "--dwell",
        "128",
        "--out",
        small.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "smaller render");

    // Within the gate: exit 0 and a parseable report.
    let out = run(&["verify", ex.to_str().unwrap(), ask.to_str().unwrap()]);
    assert_exit(&out, 0, "verify within the gate");
    let report = stdout_of(&out);
    assert!(
        report.contains("total_pixels=16384") && report.contains("mismatch_ppm="),
        "report was {report:?}"
    );

    // Corrupt one percent of the raster: beyond the gate, exit 1.
    let mut bytes = std::fs::read(&ask).unwrap();
    let raster_start = bytes.len() - 128 * 128;
    for i in 0..164 {
        let idx = raster_start + i * 97;
        bytes[idx] = bytes[idx].wrapping_add(1);
    }
    let corrupt = dir.path().join("corrupt.pgm");
    std::fs::write(&corrupt, &bytes).unwrap();
    let out = run(&["verify", ex.to_str().unwrap(), corrupt.to_str().unwrap()]);
    assert_exit(&out, 1, "verify beyond the gate");

    // Incomparable dimensions: exit 2.
    let out = run(&["verify", ex.to_str().unwrap(), small.to_str().unwrap()]);
    assert_exit(&out, 2, "verify dimension mismatch");
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["model", "--n", "1000"],
        &["model", "--n", "1024", "--p", "1.5"],
        &[
            "render",
            "--approach",
            "REC",
            "--n",
            "64",
            "--out",
            "/tmp/x.pgm",
            "--stats",
            "/tmp/x.csv",
        ],
        &[
            "render",
            "--approach",
            "ASK",
            "--n",
            "4096",
            "--g",
            "32",
            "--r",
            "4",
            "--B",
            "16",
            "--workers",
            "0",
            "--out",
            "/tmp/x.pgm",
        ],
        &[
            "optimize",
            "--engine",
            "MODEL",
            "--objective",
            "MIN_WALL_TIME",
        ],
        &["optimize", "--engine", "ASK", "--objective", "MIN_WORK"],
        &["bench", "--no-such-flag"],
        &["bench", "--optimal", "/tmp/x.csv", "--g", "4"],
        &[
            "render",
            "--approach",
            "ASK",
            "--n",
            "64",
            "--viewport",
            "2,1,0,1",
            "--out",
            "/tmp/x.pgm",
        ],
    ];
    for args in cases {
        let out = run(args);
        assert_exit(&out, 2, &format!("expected usage failure for {args:?}"));
    }
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.pgm");
    let some = dir.path().join("some.pgm");
    std::fs::write(&some, pgm_stub(4, 4)).unwrap();

    let out = run(&["verify", missing.to_str().unwrap(), some.to_str().unwrap()]);
    assert_exit(&out, 1, "missing input file");

    // Every candidate shape exceeds the domain: no feasible point.
    let out = run(&[
        "optimize",
        "--engine",
        "MODEL",
        "--objective",
        "MIN_WORK",
        "--n",
        "4096",
        "--g",
        "1024",
        "--r",
        "2",
        "--B",
        "1024",
    ]);
    assert_exit(&out, 1, "infeasible sweep");

    let out = run(&["bench", "--optimal", missing.to_str().unwrap(), "--n", "64"]);
    assert_exit(&out, 1, "missing landscape file");
}

fn pgm_stub(w: usize, h: usize) -> Vec<u8> {
    let mut v = format!("P5\n{w} {h}\n255\n").into_bytes();
    v.extend(std::iter::repeat_n(7u8, w * h));
    v
}

#[test]
fn bench_rows_carry_the_mismatch_gate() {
    let out = run(&[
        "bench",
        "--approaches",
        "EX,ASK_SBR,REC_MBR",
        "--n",
        "128",
        "--g",
        "8",
        "--r",
        "2",
        "--B",
        "8",
        "--dwell",
        "128",
        "--reps",
        "1",
    ]);
    assert_exit(&out, 0, "bench run");
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "approach,n,g,r,B,tile,workers,mean_ms,stderr_ms,reps,mismatch_ppm"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3, "one row per approach");
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 11, "row arity in {row:?}");
        let ppm: u64 = fields[10].parse().unwrap();
        assert!(ppm <= 1000, "gate violated in {row:?}");
        let stderr_ms: f64 = fields[8].parse().unwrap();
        assert!(stderr_ms >= 0.0, "negative stderr in {row:?}");
    }
    assert!(
        text.contains("\nEX,") && text.contains("\nASK_SBR,") && text.contains("\nREC_MBR,"),
        "approach labels appear verbatim"
    );
}

#[test]
fn bench_optimal_uses_the_best_landscape_row() {
    let dir = tempfile::tempdir().unwrap();
    let land = dir.path().join("landscape.csv");
    let out = run(&[
        "optimize",
        "--engine",
        "MODEL",
        "--objective",
        "MIN_WORK",
        "--n",
        "256",
        "--g",
        "2,4",
        "--r",
        "2",
        "--B",
        "8,16",
        "--out",
        land.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "model sweep");
    let best_line = stdout_of(&out);
    assert!(
        best_line.starts_with("best g="),
        "best shape goes to standard output when the CSV has a file: {best_line:?}"
    );

    let out = run(&[
        "bench",
        "--optimal",
        land.to_str().unwrap(),
        "--approaches",
        "ASK_SBR",
        "--n",
        "256",
        "--dwell",
        "64",
        "--reps",
        "1",
    ]);
    assert_exit(&out, 0, "bench from landscape");
    let row = stdout_of(&out).lines().nth(1).unwrap().to_string();
    let fields: Vec<String> = row.split(',').map(str::to_string).collect();
    let expected = format!("best g={} r={} B={}", fields[2], fields[3], fields[4]);
    assert!(
        best_line.starts_with(&expected),
        "bench used {row:?} but the sweep reported {best_line:?}"
    );
}

#[test]
fn optimize_keeps_the_csv_clean_on_standard_output() {
    let out = run(&[
        "optimize",
        "--engine",
        "MODEL",
        "--objective",
        "MIN_TIME_SBR",
        "--n",
        "1024",
        "--g",
        "2,4",
        "--r",
        "2,4",
        "--B",
        "4,8",
    ]);
    assert_exit(&out, 0, "sweep to standard output");
    let text = stdout_of(&out);
    assert!(
        text.starts_with("g,r,B,feasible,value\n"),
        "stdout starts with the landscape header, not the best line: {text:?}"
    );
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').count(), 5, "pure CSV row, got {line:?}");
    }
    assert!(
        stderr_of(&out).contains("best g="),
        "best shape reported on standard error instead"
    );
}

#[test]
fn renders_are_identical_across_worker_flags_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let flag = dir.path().join("flag.pgm");
    let env = dir.path().join("env.pgm");
    let base = dir.path().join("base.pgm");

    let shared = [
        "render",
        "--approach",
        "ASK",
        "--n",
        "128",
        "--dwell",
        "128",
        "--g",
        "8",
        "--r",
        "2",
        "--B",
        "8",
        "--scheme",
        "MBR",
        "--tile",
        "8",
    ];
    let out = ssdiv()
        .args(shared)
        .args(["--workers", "1", "--out", base.to_str().unwrap()])
        .output()
        .unwrap();
    assert_exit(&out, 0, "one worker");
    let out = ssdiv()
        .args(shared)
        .args(["--workers", "3", "--out", flag.to_str().unwrap()])
        .output()
        .unwrap();
    assert_exit(&out, 0, "three workers by flag");
    let out = ssdiv()
        .args(shared)
        .args(["--out", env.to_str().unwrap()])
        .env("SSDIV_WORKERS", "2")
        .output()
        .unwrap();
    assert_exit(&out, 0, "two workers by environment");

    let base_bytes = std::fs::read(&base).unwrap();
    assert_eq!(base_bytes, std::fs::read(&flag).unwrap(), "flag workers");
    assert_eq!(base_bytes, std::fs::read(&env).unwrap(), "env workers");
    assert!(
        wrote_pgm_header(&base_bytes, 128),
        "output is a well-formed PGM"
    );
}

fn wrote_pgm_header(bytes: &[u8], n: usize) -> bool {
    bytes.starts_with(format!("P5\n{n} {n}\n255\n").as_bytes())
        && bytes.len() == format!("P5\n{n} {n}\n255\n").len() + n * n
}

#[test]
fn render_stats_match_the_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("img.pgm");
    let stats = dir.path().join("stats.csv");
    let out = run(&[
        "render",
        "--approach",
        "ASK",
        "--n",
        "256",
        "--dwell",
        "256",
        "--g",
        "8",
        "--r",
        "2",
        "--B",
        "8",
        "--out",
        img.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "render with stats");
    let text = std::fs::read_to_string(&stats).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "level,regions_in,filled,subdivided,leaf_processed,q_pixels,t_pixels,a_pixels"
    );
    let first: Vec<u64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0, "levels start at 0");
    assert_eq!(first[1], 64, "level 0 holds g^2 regions");
}
