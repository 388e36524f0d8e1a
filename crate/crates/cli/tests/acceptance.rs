//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use superjam::codebook::KnowledgeBase;
use superjam::codec::Image;
use superjam::gumbel::{hard_sample, CategoryLogits};
use superjam::independence::nhsic;
use superjam::link::{transmit_frame_numbered, LinkConfig};
use superjam::pnm::encode_pnm;
use superjam::rng::CounterRng;
use superjam::sep::{
    eve_scp_0010_terms, eve_scp_rectangles, linear_grid, sep_eavesdropper,
    sep_eavesdropper_closed_form, sep_legitimate, sweep_curve, NoiseSigma,
};
use superjam::simulation::{simulate_sep, SimulationParams};
use superjam::{Codebook, Pac, SampleMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pac(a: f64) -> Pac {
    Pac::new(a).unwrap()
}

fn sigma_db(db: f64) -> NoiseSigma<f64> {
    superjam::sigma_from_snr(db).unwrap()
}

fn operating_points() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (a, leg_ref, eve_ref) in [(0.49, 0.1133, 0.4766), (0.40, 0.1514, 0.4463)] {
        let (p, s) = (pac(a), sigma_db(10.0));
        let (leg, eve) = (sep_legitimate(p, s), sep_eavesdropper(p, s));
        check(
            (leg - leg_ref).abs() <= 0.002,
            format!("a={a}: sep_leg {leg:.6} vs {leg_ref}"),
        )?;
        check(
            (eve - eve_ref).abs() <= 0.005,
            format!("a={a}: sep_eve {eve:.6} vs {eve_ref}"),
        )?;
        detail.push(format!("a={a}: leg {leg:.4} eve {eve:.4}"));
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(detail.join(", "))
}

fn analytic_vs_empirical() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for a in [0.1, 0.25, 0.40, 0.49] {
        for db in [0.0, 10.0, 20.0] {
            let r = simulate_sep(&SimulationParams {
                pac: pac(a),
                snr_leg_db: db,
                snr_eve_db: db,
                symbols: 1_000_000,
                seed: 20_000 + (a * 100.0) as u64 * 100 + db as u64,
                workers: 0,
            })
            .map_err(|e| e.to_string())?;
            for (name, s) in [
                ("legitimate", r.legitimate),
                ("eavesdropper", r.eavesdropper),
            ] {
                check(
                    s.within_3sigma(),
                    format!(
                        "a={a} snr={db} {name}: empirical {} analytic {} half-width {}",
                        s.empirical, s.analytic, s.half_width
                    ),
                )?;
                if s.half_width > 0.0 {
                    worst = worst.max((s.empirical - s.analytic).abs() / s.half_width);
                }
            }
        }
    }
    Ok(format!(
        "24 checks, worst |dev|/3σ = {worst:.2}, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn curve_shape() -> Outcome {
    let start = Instant::now();
    let grid = linear_grid(0.005, 0.495, 99).map_err(|e| e.to_string())?;
    let curve = sweep_curve(10.0f64, &grid).map_err(|e| e.to_string())?;
    let pts = &curve.points;
    check(
        pts.windows(2).all(|w| w[1].sep_leg < w[0].sep_leg),
        "sep_leg not strictly decreasing",
    )?;
    let argmin = (0..pts.len())
        .min_by(|&i, &j| pts[i].sep_eve.total_cmp(&pts[j].sep_eve))
        .unwrap();
    check(
        argmin > 0 && argmin + 1 < pts.len(),
        format!("sep_eve minimum at edge index {argmin}"),
    )?;
    check(
        pts.iter().all(|p| p.sep_eve >= p.sep_leg),
        "sep_eve < sep_leg somewhere",
    )?;
    let took = start.elapsed();
    check(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!(
        "{} points, sep_eve minimum {:.4} at a={:.3}",
        pts.len(),
        pts[argmin].sep_eve,
        pts[argmin].a
    ))
}

fn exact_cancellation() -> Outcome {
    let mut rng = CounterRng::at(4242, 0, 0, 0);
    let kb = KnowledgeBase::from_items(
        (0..5).map(|i| (format!("doc{i}"), format!("contents {i}").into_bytes())),
    )
    .map_err(|e| e.to_string())?;
    let mut frames = 0;
    for k in 0..100u64 {
        let (w, h) = (1 + rng.below(40) as usize, 1 + rng.below(40) as usize);
        let c = if rng.below(2) == 0 { 1 } else { 3 };
        let px = (0..w * h * c).map(|_| rng.below(256) as u8).collect();
        let img = Image::new(w, h, c, px).map_err(|e| e.to_string())?;
        let cb: Codebook = Codebook::build(&kb, 4 * w * h * c).map_err(|e| e.to_string())?;
        for a in [0.05, 0.25, 0.49] {
            let cfg = LinkConfig::new(pac(a), 300.0, 300.0, k);
            let out = transmit_frame_numbered(&img, &cb, &cfg, k).map_err(|e| e.to_string())?;
            check(
                out.bob == img,
                format!("image {k} ({w}x{h}x{c}) at a={a} not reproduced"),
            )?;
            frames += 1;
        }
    }
    Ok(format!("{frames} noiseless frames byte-exact"))
}

fn dual_path() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for a in [0.03, 0.12, 0.25, 0.37, 0.49] {
        for sigma in [0.05, 0.2, 0.5, 1.5] {
            let (p, s) = (pac(a), NoiseSigma::new(sigma).unwrap());
            let d = (sep_eavesdropper(p, s) - sep_eavesdropper_closed_form(p, s)).abs();
            let terms: f64 = eve_scp_0010_terms(p, s).iter().sum();
            let rect = eve_scp_rectangles("0010".parse().unwrap(), p, s);
            worst = worst.max(d).max((terms - rect).abs());
            n += 1;
        }
    }
    check(worst <= 1e-12, format!("max difference {worst:e}"))?;
    Ok(format!("{n} grid points, max difference {worst:.1e}"))
}

fn normals(rows: usize, cols: usize, seed: u64) -> SampleMatrix {
    let mut rng = CounterRng::at(seed, 9, 0, 0);
    let v = (0..rows * cols).map(|_| rng.normal_pair().0).collect();
    SampleMatrix::new(rows, cols, v).unwrap()
}

fn nhsic_suite() -> Outcome {
    let x = normals(300, 4, 1);
    let y = normals(300, 3, 2).map(|v| v.powi(3));
    let self_val = nhsic(&x, &x).unwrap();
    check(
        (self_val - 1.0).abs() <= 1e-12,
        format!("nhsic(x, x) = {self_val}"),
    )?;

    let mut max_indep: f64 = 0.0;
    for seed in 0..10 {
        let v = nhsic(
            &normals(2000, 4, 100 + 2 * seed),
            &normals(2000, 4, 101 + 2 * seed),
        )
        .unwrap();
        max_indep = max_indep.max(v);
    }
    check(
        max_indep < 0.05,
        format!("independent samples gave {max_indep}"),
    )?;

    let base = nhsic(&x, &y).unwrap();
    let scaled = nhsic(&x.map(|v| 40.0 * v), &y.map(|v| 1e-3 * v)).unwrap();
    check(
        (scaled - base).abs() <= 1e-12,
        format!("scaling moved nhsic by {:e}", scaled - base),
    )?;
    // rotate the first two feature columns of x
    let (c, s) = (0.6f64, 0.8f64);
    let rows: Vec<Vec<f64>> = (0..x.rows())
        .map(|i| {
            let mut r = x.row(i).to_vec();
            let (u, w) = (r[0], r[1]);
            r[0] = c * u - s * w;
            r[1] = s * u + c * w;
            r
        })
        .collect();
    let rotated = nhsic(&SampleMatrix::from_rows(&rows).unwrap(), &y).unwrap();
    check(
        (rotated - base).abs() <= 1e-12,
        format!("rotation moved nhsic by {:e}", rotated - base),
    )?;
    Ok(format!(
        "self {self_val:.12}, max independent {max_indep:.4}"
    ))
}

fn gumbel_chi_square() -> Outcome {
    const CRIT: f64 = 11.345;
    let n = 100_000u64;
    let mut stats = Vec::new();
    for (k, raw) in [
        [0.0; 4],
        [0.7f64.ln(), 0.1f64.ln(), 0.1f64.ln(), 0.1f64.ln()],
        [1.5, -0.5, 0.25, -2.0],
    ]
    .into_iter()
    .enumerate()
    {
        let logits = CategoryLogits::new(raw).unwrap();
        let p = logits.probabilities();
        let mut counts = [0u64; 4];
        for i in 0..n {
            counts[hard_sample(&logits, 500 + k as u64, i)] += 1;
        }
        let chi2: f64 = (0..4)
            .map(|i| (counts[i] as f64 - n as f64 * p[i]).powi(2) / (n as f64 * p[i]))
            .sum();
        check(chi2 < CRIT, format!("logits {raw:?}: chi2 {chi2:.3}"))?;
        stats.push(format!("{chi2:.2}"));
    }
    Ok(format!("chi2 = [{}] < {CRIT}", stats.join(", ")))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_superjam"))
        .args(args)
        .env_remove("SUPERJAM_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let (w, h) = (20, 12);
    let img = Image::new(
        w,
        h,
        3,
        (0..w * h * 3).map(|i| (i * 31 % 251) as u8).collect(),
    )
    .unwrap();
    let image = root.join("in.ppm");
    fs::write(&image, encode_pnm(&img).unwrap()).unwrap();
    let kb = root.join("kb");
    fs::create_dir(&kb).unwrap();
    fs::write(kb.join("one"), "first entry").unwrap();
    fs::write(kb.join("two"), "second entry").unwrap();
    fs::write(root.join("x.csv"), "1,2\n0,1\n3,-1\n2,2\n").unwrap();
    fs::write(root.join("y.csv"), "0.5\n1\n-2\n4\n").unwrap();
    let out = root.join("out");
    fs::create_dir(&out).unwrap();
    let p = |name: &str| root.join(name).to_string_lossy().into_owned();
    let o = |name: &str| out.join(name).to_string_lossy().into_owned();

    let commands: Vec<Vec<String>> = [
        vec![
            "sep-curve",
            "--snr-db",
            "10",
            "--out",
            &o("curve.csv"),
            "--svg",
            &o("curve.svg"),
        ],
        vec!["sep-curve", "--snr-db", "5"],
        vec!["pac-plan", "--snr-db", "10", "--min-eve-sep", "0.45"],
        vec![
            "simulate",
            "--a",
            "0.4",
            "--snr-leg",
            "10",
            "--snr-eve",
            "10",
            "--symbols",
            "100000",
            "--seed",
            "8",
            "--out",
            &o("sim.csv"),
        ],
        vec![
            "transmit",
            "--image",
            &p("in.ppm"),
            "--kb",
            &p("kb"),
            "--a",
            "0.3",
            "--snr-leg",
            "9",
            "--snr-eve",
            "9",
            "--seed",
            "5",
            "--out-bob",
            &o("bob.ppm"),
            "--out-eve",
            &o("eve.ppm"),
            "--report",
            &o("report.csv"),
        ],
        vec!["nhsic", "--x", &p("x.csv"), "--y", &p("y.csv")],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();

    let mut runs = Vec::new();
    for _ in 0..2 {
        let mut stdouts = Vec::new();
        for c in &commands {
            let args: Vec<&str> = c.iter().map(String::as_str).collect();
            stdouts.push(run_cli(&args)?);
        }
        runs.push((stdouts, snapshot(&out)));
    }
    check(runs[0] == runs[1], "outputs differ between runs")?;

    let sim = [
        "simulate",
        "--a",
        "0.25",
        "--snr-leg",
        "5",
        "--snr-eve",
        "5",
        "--symbols",
        "1000000",
        "--seed",
        "3",
    ];
    let one = run_cli(&[&sim[..], &["--workers", "1"]].concat())?;
    let eight = run_cli(&[&sim[..], &["--workers", "8"]].concat())?;
    check(one == eight, "simulate output depends on worker count")?;
    Ok(format!(
        "{} commands, {} output files identical; 1 vs 8 workers identical",
        commands.len(),
        runs[0].1.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "operating points at a=0.49 and a=0.40, 10 dB",
            operating_points,
        ),
        (
            "analytic vs empirical SEP within 3 sigma",
            analytic_vs_empirical,
        ),
        ("SEP curve shape at 10 dB", curve_shape),
        (
            "exact cancellation, noiseless raw transmit",
            exact_cancellation,
        ),
        ("dual-path eavesdropper SEP", dual_path),
        ("nHSIC suite", nhsic_suite),
        ("Gumbel-max chi-square", gumbel_chi_square),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("[PASS] C{} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] C{} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
