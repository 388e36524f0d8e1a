//! `superjam`: SEP curves, PAC planning, Monte Carlo validation, end-to-end
//! image transmission and the nHSIC statistic.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 infeasible PAC plan.

mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use superjam::codec::CodecSpec;
use superjam::independence::{nhsic_with, Centering};
use superjam::link::transmit_frame;
use superjam::pnm::{encode_pnm, read_pnm};
use superjam::sep::{linear_grid, plan_pac, sweep_curve};
use superjam::simulation::{simulate_sep, ReceiverStats};
use superjam::{Codebook, Error, KnowledgeBase, LinkConfig, Pac, SampleMatrix, SimulationParams};

use output::{manifest_path, sig12, RunManifest, Staged};

#[derive(Parser, Debug)]
#[command(
    name = "superjam",
    version,
    about = "Coding-enhanced jamming link toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic SEP of both receivers over a PAC grid, as CSV.
    SepCurve {
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long, default_value_t = 0.01)]
        a_min: f64,
        #[arg(long, default_value_t = 0.49)]
        a_max: f64,
        #[arg(long, default_value_t = 49)]
        steps: usize,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Largest PAC meeting the security target.
    PacPlan {
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long)]
        min_eve_sep: f64,
        #[arg(long)]
        max_leg_sep: Option<f64>,
    },
    /// Monte Carlo SEP of both receivers against the closed forms.
    Simulate {
        #[arg(long)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        snr_leg: f64,
        #[arg(long, allow_hyphen_values = true)]
        snr_eve: f64,
        #[arg(long, default_value_t = 1_000_000)]
        symbols: u64,
        #[arg(long, env = "SUPERJAM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Send an image to Bob and Eve through the jammed link.
    Transmit {
        #[arg(long)]
        image: PathBuf,
        /// Directory whose regular files form the shared knowledge base.
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        snr_leg: f64,
        #[arg(long, allow_hyphen_values = true)]
        snr_eve: f64,
        #[arg(long, env = "SUPERJAM_SEED", default_value_t = 0)]
        seed: u64,
        /// Seed for codeword selection; defaults to --seed.
        #[arg(long)]
        index_seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = CodecArg::Raw)]
        codec: CodecArg,
        #[arg(long, default_value_t = 2)]
        block: usize,
        #[arg(long, default_value_t = 0.0)]
        regen_flip_prob: f64,
        #[arg(long)]
        out_bob: PathBuf,
        #[arg(long)]
        out_eve: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Normalized HSIC between two headerless CSV sample files.
    Nhsic {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        uncentered: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CodecArg {
    Raw,
    BlockMean,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::SepCurve {
            snr_db,
            a_min,
            a_max,
            steps,
            out,
            svg,
        } => sep_curve_cmd(snr_db, a_min, a_max, steps, out.as_deref(), svg.as_deref())?,
        Command::PacPlan {
            snr_db,
            min_eve_sep,
            max_leg_sep,
        } => pac_plan_cmd(snr_db, min_eve_sep, max_leg_sep)?,
        Command::Simulate {
            a,
            snr_leg,
            snr_eve,
            symbols,
            seed,
            workers,
            out,
        } => simulate_cmd(a, snr_leg, snr_eve, symbols, seed, workers, out.as_deref())?,
        Command::Transmit {
            image,
            kb,
            a,
            snr_leg,
            snr_eve,
            seed,
            index_seed,
            codec,
            block,
            regen_flip_prob,
            out_bob,
            out_eve,
            report,
        } => {
            let codec = match codec {
                CodecArg::Raw => CodecSpec::RAW,
                CodecArg::BlockMean => CodecSpec::block_mean(block),
            };
            let mut cfg = LinkConfig::new(pac(a)?, snr_leg, snr_eve, seed);
            cfg.index_seed = index_seed.unwrap_or(seed);
            cfg.codec = codec;
            cfg.regen_flip_prob = regen_flip_prob;
            transmit_cmd(&image, &kb, &cfg, &out_bob, &out_eve, &report)?
        }
        Command::Nhsic { x, y, uncentered } => nhsic_cmd(&x, &y, uncentered)?,
    }
    Ok(())
}

fn pac(a: f64) -> Result<Pac> {
    Pac::new(a).map_err(|e| anyhow!(e))
}

/// Writes `body` to `out` (with manifest) or to standard output.
fn emit(body: String, out: Option<&Path>, manifest: &RunManifest, extra: Staged) -> Result<()> {
    match out {
        Some(path) => {
            let mut staged = extra;
            staged.add(path, body.into_bytes());
            staged.add(&manifest_path(path), manifest.render().into_bytes());
            staged.commit()
        }
        None => {
            extra.commit()?;
            print!("{body}");
            Ok(())
        }
    }
}

fn sep_curve_cmd(
    snr_db: f64,
    a_min: f64,
    a_max: f64,
    steps: usize,
    out: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<()> {
    if !snr_db.is_finite() {
        bail!("--snr-db must be finite");
    }
    for (name, v) in [("--a-min", a_min), ("--a-max", a_max)] {
        if !(v > 0.0 && v < 0.5) {
            bail!("{name} {v} outside (0, 0.5)");
        }
    }
    let grid = linear_grid(a_min, a_max, steps)?;
    let curve = sweep_curve(snr_db, &grid)?;

    let mut csv = String::from("a,snr_db,sep_leg,sep_eve\n");
    for p in &curve.points {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            sig12(p.a),
            sig12(p.snr_db),
            sig12(p.sep_leg),
            sig12(p.sep_eve)
        ));
    }
    let mut manifest = RunManifest::new("sep-curve");
    manifest
        .set("snr_db", snr_db)
        .set("a_min", a_min)
        .set("a_max", a_max)
        .set("steps", steps);
    let mut extra = Staged::default();
    if let Some(path) = svg_path {
        extra.add(path, svg::sep_curves(&curve).into_bytes());
    }
    emit(csv, out, &manifest, extra)
}

fn pac_plan_cmd(
    snr_db: f64,
    min_eve_sep: f64,
    max_leg_sep: Option<f64>,
) -> std::result::Result<(), Failure> {
    if !(min_eve_sep > 0.0 && min_eve_sep < 1.0) {
        return Err(anyhow!("--min-eve-sep {min_eve_sep} outside (0, 1)").into());
    }
    match plan_pac(snr_db, min_eve_sep, max_leg_sep) {
        Ok(plan) => {
            println!(
                "a={} sep_leg={} sep_eve={}",
                sig12(plan.pac.value()),
                sig12(plan.sep_leg),
                sig12(plan.sep_eve)
            );
            Ok(())
        }
        Err(e @ Error::Infeasible { .. }) => Err(Failure {
            code: 2,
            error: anyhow!(e),
        }),
        Err(e) => Err(anyhow!(e).into()),
    }
}

fn receiver_row(name: &str, a: f64, s: &ReceiverStats) -> String {
    format!(
        "{name},{},{},{},{},{},{},{},{}\n",
        sig12(a),
        sig12(s.snr_db),
        s.symbols,
        s.errors,
        sig12(s.analytic),
        sig12(s.empirical),
        sig12(s.half_width),
        s.within_3sigma()
    )
}

fn simulate_cmd(
    a: f64,
    snr_leg: f64,
    snr_eve: f64,
    symbols: u64,
    seed: u64,
    workers: usize,
    out: Option<&Path>,
) -> Result<()> {
    if symbols == 0 {
        bail!("--symbols must be at least 1");
    }
    let params = SimulationParams {
        pac: pac(a)?,
        snr_leg_db: snr_leg,
        snr_eve_db: snr_eve,
        symbols,
        seed,
        workers,
    };
    let report = simulate_sep(&params)?;
    let mut csv = String::from(
        "receiver,a,snr_db,symbols,errors,sep_analytic,sep_empirical,half_width_3sigma,within_3sigma\n",
    );
    csv.push_str(&receiver_row("legitimate", a, &report.legitimate));
    csv.push_str(&receiver_row("eavesdropper", a, &report.eavesdropper));

    // worker count is not recorded: it does not affect the output
    let mut manifest = RunManifest::new("simulate");
    manifest
        .set("a", a)
        .set("snr_leg_db", snr_leg)
        .set("snr_eve_db", snr_eve)
        .set("symbols", symbols)
        .set("master_seed", seed);
    emit(csv, out, &manifest, Staged::default())
}

fn transmit_cmd(
    image: &Path,
    kb_dir: &Path,
    cfg: &LinkConfig,
    out_bob: &Path,
    out_eve: &Path,
    report_path: &Path,
) -> Result<()> {
    let img = read_pnm(image)?;
    let kb = KnowledgeBase::from_dir(kb_dir)?;
    if kb.is_empty() {
        bail!("knowledge base {} has no files", kb_dir.display());
    }
    let len = cfg
        .codec
        .symbol_count(img.shape())
        .context("codec does not fit the image")?;
    let codebook = Codebook::build(&kb, len)?;
    let frame = transmit_frame(&img, &codebook, cfg)?;
    let r = &frame.report;

    let report = format!(
        "index,symbol_count,sep_emp_leg,sep_emp_eve,psnr_bob_db,psnr_eve_db\n{},{},{},{},{},{}\n",
        r.index,
        r.symbol_count,
        sig12(r.sep_emp_leg),
        sig12(r.sep_emp_eve),
        sig12(r.psnr_bob.db()),
        sig12(r.psnr_eve.db()),
    );
    let codec = match cfg.codec.mode {
        superjam::CodecMode::Raw => "raw".to_string(),
        superjam::CodecMode::BlockMean(k) => format!("block-mean:{k}"),
    };
    let mut manifest = RunManifest::new("transmit");
    manifest
        .set("image", image.display())
        .set("kb", kb_dir.display())
        .set("a", cfg.pac.value())
        .set("snr_leg_db", cfg.snr_leg_db)
        .set("snr_eve_db", cfg.snr_eve_db)
        .set("master_seed", cfg.master_seed)
        .set("index_seed", cfg.index_seed)
        .set("codec", codec)
        .set("regen_flip_prob", cfg.regen_flip_prob)
        .set("kb_digest", codebook.kb_digest_hex())
        .set("out_bob", out_bob.display())
        .set("out_eve", out_eve.display());

    let mut staged = Staged::default();
    staged.add(out_bob, encode_pnm(&frame.bob)?);
    staged.add(out_eve, encode_pnm(&frame.eve)?);
    staged.add(report_path, report.into_bytes());
    staged.add(&manifest_path(report_path), manifest.render().into_bytes());
    staged.commit()
}

fn read_matrix(path: &Path) -> Result<SampleMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("{}: row {} is not numeric", path.display(), i + 1))?;
        rows.push(row);
    }
    SampleMatrix::from_rows(&rows).with_context(|| path.display().to_string())
}

fn nhsic_cmd(x: &Path, y: &Path, uncentered: bool) -> Result<()> {
    let (mx, my) = (read_matrix(x)?, read_matrix(y)?);
    if mx.rows() != my.rows() {
        bail!("row counts differ: {} vs {}", mx.rows(), my.rows());
    }
    let centering = if uncentered {
        Centering::Uncentered
    } else {
        Centering::Centered
    };
    println!("{}", sig12(nhsic_with(&mx, &my, centering)?));
    Ok(())
}
