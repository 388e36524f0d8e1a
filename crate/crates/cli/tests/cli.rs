use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use superjam::codec::Image;
use superjam::pnm::{encode_pnm, read_pnm};

fn superjam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superjam"))
        .args(args)
        .env_remove("SUPERJAM_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Grey test image plus a three-file knowledge base.
fn fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let (w, h) = (24, 16);
    let px = (0..w * h)
        .map(|i| ((i * 53 + i / w * 7) % 256) as u8)
        .collect();
    let img = Image::new(w, h, 1, px).unwrap();
    let image = dir.join("in.pgm");
    fs::write(&image, encode_pnm(&img).unwrap()).unwrap();
    let kb = dir.join("kb");
    fs::create_dir(&kb).unwrap();
    for (name, body) in [("a.txt", "first"), ("b.txt", "second"), ("c.bin", "third")] {
        fs::write(kb.join(name), body).unwrap();
    }
    (image, kb)
}

#[test]
fn sep_curve_values() {
    let o = superjam(&[
        "sep-curve",
        "--snr-db",
        "10",
        "--a-min",
        "0.4",
        "--a-max",
        "0.49",
        "--steps",
        "10",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,snr_db,sep_leg,sep_eve"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    let first = &rows[0];
    assert_eq!(first[0], 0.4);
    assert!((first[2] - 0.1514).abs() < 0.002 && (first[3] - 0.4463).abs() < 0.005);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 0.49);
    assert!((last[2] - 0.1133).abs() < 0.002 && (last[3] - 0.4766).abs() < 0.005);
}

#[test]
fn sep_curve_files_and_bad_steps() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("c.csv"), dir.path().join("c.svg"));
    let o = superjam(&[
        "sep-curve",
        "--snr-db",
        "-3",
        "--out",
        s(&csv),
        "--svg",
        s(&svg),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 50);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let manifest = fs::read_to_string(dir.path().join("c.csv.manifest")).unwrap();
    assert!(manifest.contains("command=sep-curve\n") && manifest.contains("snr_db=-3\n"));
    assert!(manifest.contains("steps=49\n"));

    assert_eq!(
        code(&superjam(&["sep-curve", "--snr-db", "10", "--steps", "1"])),
        1
    );
    assert_eq!(
        code(&superjam(&[
            "sep-curve",
            "--snr-db",
            "10",
            "--a-min",
            "0.6"
        ])),
        1
    );
    assert_eq!(code(&superjam(&["sep-curve"])), 1);
}

#[test]
fn pac_plan_exit_codes() {
    let o = superjam(&["pac-plan", "--snr-db", "10", "--min-eve-sep", "0.45"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o);
    let a: f64 = line
        .split_whitespace()
        .next()
        .unwrap()
        .strip_prefix("a=")
        .unwrap()
        .parse()
        .unwrap();
    assert!(a > 0.0 && a < 0.5);

    let o = superjam(&["pac-plan", "--snr-db", "10", "--min-eve-sep", "0.9"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
    let o = superjam(&[
        "pac-plan",
        "--snr-db",
        "10",
        "--min-eve-sep",
        "0.5",
        "--max-leg-sep",
        "0.44",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(
        code(&superjam(&[
            "pac-plan",
            "--snr-db",
            "10",
            "--min-eve-sep",
            "1.5"
        ])),
        1
    );
}

#[test]
fn simulate_rows_and_workers() {
    let args = [
        "simulate",
        "--a",
        "0.3",
        "--snr-leg",
        "10",
        "--snr-eve",
        "5",
        "--symbols",
        "200000",
    ];
    let one = superjam(&[&args[..], &["--workers", "1"]].concat());
    let many = superjam(&[&args[..], &["--workers", "8"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    let text = stdout(&one);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("legitimate,") && rows[2].starts_with("eavesdropper,"));
    assert!(rows[1].ends_with(",true") && rows[2].ends_with(",true"));

    assert_eq!(
        code(&superjam(&[
            "simulate",
            "--a",
            "0.3",
            "--snr-leg",
            "1",
            "--snr-eve",
            "1",
            "--symbols",
            "0"
        ])),
        1
    );
    assert_eq!(
        code(&superjam(&[
            "simulate",
            "--a",
            "0.7",
            "--snr-leg",
            "1",
            "--snr-eve",
            "1"
        ])),
        1
    );
}

#[test]
fn seed_from_environment() {
    let args = [
        "simulate",
        "--a",
        "0.2",
        "--snr-leg",
        "0",
        "--snr-eve",
        "0",
        "--symbols",
        "5000",
    ];
    let run_env = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_superjam"));
        c.args(args).env_remove("SUPERJAM_SEED");
        if let Some(v) = seed {
            c.env("SUPERJAM_SEED", v);
        }
        c.output().unwrap().stdout
    };
    let explicit = superjam(&[&args[..], &["--seed", "77"]].concat()).stdout;
    assert_eq!(run_env(Some("77")), explicit);
    assert_ne!(run_env(None), explicit);
    assert_eq!(
        run_env(None),
        superjam(&[&args[..], &["--seed", "0"]].concat()).stdout
    );
}

#[test]
fn transmit_noiseless_bob() {
    let dir = tempfile::tempdir().unwrap();
    let (image, kb) = fixture(dir.path());
    let (bob, eve, report) = (
        dir.path().join("bob.pgm"),
        dir.path().join("eve.pgm"),
        dir.path().join("r.csv"),
    );
    let o = superjam(&[
        "transmit",
        "--image",
        s(&image),
        "--kb",
        s(&kb),
        "--a",
        "0.25",
        "--snr-leg",
        "200",
        "--snr-eve",
        "0",
        "--seed",
        "4",
        "--out-bob",
        s(&bob),
        "--out-eve",
        s(&eve),
        "--report",
        s(&report),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let original = read_pnm(&image).unwrap();
    assert_eq!(read_pnm(&bob).unwrap(), original);
    assert_ne!(read_pnm(&eve).unwrap(), original);
    let text = fs::read_to_string(&report).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "1536");
    assert_eq!(row[4], "inf");
    let manifest = fs::read_to_string(dir.path().join("r.csv.manifest")).unwrap();
    let digest = manifest
        .lines()
        .find_map(|l| l.strip_prefix("kb_digest="))
        .unwrap();
    assert_eq!(digest.len(), 64);
    assert!(manifest.contains("codec=raw\n") && manifest.contains("index_seed=4\n"));
}

#[test]
fn transmit_block_mean_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (image, kb) = fixture(dir.path());
    let (bob, eve, report) = (
        dir.path().join("bob.pgm"),
        dir.path().join("eve.pgm"),
        dir.path().join("r.csv"),
    );
    let base = [
        "transmit",
        "--image",
        s(&image),
        "--kb",
        s(&kb),
        "--a",
        "0.4",
        "--snr-leg",
        "15",
        "--snr-eve",
        "15",
        "--out-bob",
        s(&bob),
        "--out-eve",
        s(&eve),
        "--report",
        s(&report),
    ];
    let o = superjam(&[&base[..], &["--codec", "block-mean", "--block", "4"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&report).unwrap().contains("\n"));
    assert_eq!(
        read_pnm(&bob).unwrap().shape(),
        read_pnm(&image).unwrap().shape()
    );

    // block does not divide 24×16
    assert_eq!(
        code(&superjam(
            &[&base[..], &["--codec", "block-mean", "--block", "5"]].concat()
        )),
        1
    );
    assert_eq!(
        code(&superjam(
            &[&base[..], &["--regen-flip-prob", "1.5"]].concat()
        )),
        1
    );
}

#[test]
fn failed_transmit_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let (image, kb) = fixture(dir.path());
    let (bob, report) = (dir.path().join("bob.pgm"), dir.path().join("r.csv"));
    let missing = dir.path().join("no/such/dir/eve.pgm");
    let o = superjam(&[
        "transmit",
        "--image",
        s(&image),
        "--kb",
        s(&kb),
        "--a",
        "0.3",
        "--snr-leg",
        "10",
        "--snr-eve",
        "10",
        "--out-bob",
        s(&bob),
        "--out-eve",
        s(&missing),
        "--report",
        s(&report),
    ]);
    assert_eq!(code(&o), 1);
    assert!(!bob.exists() && !report.exists());
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "{names:?}");

    let empty = dir.path().join("empty_kb");
    fs::create_dir(&empty).unwrap();
    let o = superjam(&[
        "transmit",
        "--image",
        s(&image),
        "--kb",
        s(&empty),
        "--a",
        "0.3",
        "--snr-leg",
        "10",
        "--snr-eve",
        "10",
        "--out-bob",
        s(&bob),
        "--out-eve",
        s(&dir.path().join("e.pgm")),
        "--report",
        s(&report),
    ]);
    assert_eq!(code(&o), 1);
    assert!(!bob.exists());
}

#[test]
fn nhsic_command() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.csv");
    let x3 = dir.path().join("x3.csv");
    let short = dir.path().join("short.csv");
    fs::write(&x, "1,2\n3,-1\n0.5,4\n2,2\n").unwrap();
    fs::write(&x3, "3,6\n9,-3\n1.5,12\n6,6\n").unwrap();
    fs::write(&short, "1\n2\n3\n").unwrap();
    let val = |o: Output| -> f64 {
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).trim().parse().unwrap()
    };
    assert!((val(superjam(&["nhsic", "--x", s(&x), "--y", s(&x)])) - 1.0).abs() < 1e-11);
    assert!((val(superjam(&["nhsic", "--x", s(&x), "--y", s(&x3)])) - 1.0).abs() < 1e-11);
    assert!(
        (val(superjam(&[
            "nhsic",
            "--x",
            s(&x),
            "--y",
            s(&x3),
            "--uncentered"
        ])) - 1.0)
            .abs()
            < 1e-11
    );
    assert_ne!(
        code(&superjam(&["nhsic", "--x", s(&x), "--y", s(&short)])),
        0
    );
    assert_ne!(
        code(&superjam(&[
            "nhsic",
            "--x",
            s(&x),
            "--y",
            s(&dir.path().join("nope.csv"))
        ])),
        0
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (image, kb) = fixture(dir.path());
    let out = dir.path().join("out");
    fs::create_dir(&out).unwrap();
    let o = |n: &str| out.join(n);
    let commands: Vec<Vec<String>> = vec![
        vec![
            "sep-curve",
            "--snr-db",
            "7",
            "--out",
            s(&o("c.csv")),
            "--svg",
            s(&o("c.svg")),
        ],
        vec![
            "simulate",
            "--a",
            "0.35",
            "--snr-leg",
            "6",
            "--snr-eve",
            "6",
            "--symbols",
            "50000",
            "--seed",
            "3",
            "--out",
            s(&o("sim.csv")),
        ],
        vec![
            "transmit",
            "--image",
            s(&image),
            "--kb",
            s(&kb),
            "--a",
            "0.45",
            "--snr-leg",
            "8",
            "--snr-eve",
            "8",
            "--seed",
            "12",
            "--regen-flip-prob",
            "0.01",
            "--out-bob",
            s(&o("b.pgm")),
            "--out-eve",
            s(&o("e.pgm")),
            "--report",
            s(&o("r.csv")),
        ],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    let snapshot = || {
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().into_string().unwrap(),
                    fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    };
    let mut runs = Vec::new();
    for _ in 0..2 {
        for c in &commands {
            let args: Vec<&str> = c.iter().map(String::as_str).collect();
            assert_eq!(code(&superjam(&args)), 0);
        }
        runs.push(snapshot());
    }
    assert_eq!(runs[0].len(), 9);
    assert_eq!(runs[0], runs[1]);
}
