use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use platebench::bench::runner::{generated_specs, read_gray, render_item, write_file};
use platebench::bench::{
    parse_csv, run_benchmark, write_report, BenchConfig, CorpusSource, ReportFormat,
};
use platebench::detectors::gradient::Threshold;
use platebench::detectors::{detect, Detector, DetectorParams};
use platebench::filters::{box_average, median_filter};
use platebench::noise::{add_noise, NoiseKind, NoiseSpec};
use platebench::plate::{parse_manifest, write_manifest};
use platebench::pnm::save_pgm;
use platebench::{pfom, quantize, EdgeMap, PRATT_SCALE};

#[derive(Parser)]
#[command(
    name = "platebench",
    version,
    about = "Edge detector benchmark on number-plate images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a plate corpus with ground truth and a manifest.
    Gen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Corrupt one image.
    Noise {
        #[arg(long)]
        kind: NoiseKind,
        #[arg(long)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect edges in one image and write the map as a PGM.
    Detect(DetectArgs),
    /// Score a detected edge map against ground truth.
    Pfom {
        #[arg(long)]
        detected: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = PRATT_SCALE)]
        n: f64,
    },
    /// Run a benchmark sweep and write report.csv and report.md.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads, overrides the config.
        #[arg(long)]
        threads: Option<usize>,
        /// Also write every edge map under <out-dir>/edges.
        #[arg(long)]
        dump_edges: bool,
    },
    /// Re-render a CSV report.
    Report {
        #[arg(long)]
        rows: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    detector: Detector,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// `auto` (Otsu) or a number; sobel, prewitt, roberts, laplacian, morph.
    #[arg(long, default_value = "auto")]
    threshold: Threshold,
    #[arg(long)]
    box_average: bool,
    /// Median window applied before detection.
    #[arg(long)]
    median: Option<usize>,
    #[arg(long)]
    canny_sigma: Option<f64>,
    #[arg(long)]
    canny_high_quantile: Option<f64>,
    #[arg(long)]
    canny_low_ratio: Option<f64>,
    #[arg(long)]
    copda_window: Option<usize>,
    #[arg(long)]
    copda_contrast: Option<f64>,
    #[arg(long)]
    copda_min_chain: Option<usize>,
    #[arg(long, default_value_t = 3)]
    morph_size: usize,
}

impl DetectArgs {
    fn params(&self) -> DetectorParams {
        let mut p = DetectorParams {
            gradient_threshold: self.threshold,
            laplacian_threshold: self.threshold,
            morph_threshold: self.threshold,
            morph_size: self.morph_size,
            ..DetectorParams::default()
        };
        if let Some(v) = self.canny_sigma {
            p.canny.gauss_sigma = v;
        }
        if let Some(v) = self.canny_high_quantile {
            p.canny.high_quantile = v;
        }
        if let Some(v) = self.canny_low_ratio {
            p.canny.low_ratio = v;
        }
        if let Some(v) = self.copda_window {
            p.copda.window = v;
        }
        if let Some(v) = self.copda_contrast {
            p.copda.contrast_threshold = v;
        }
        if let Some(v) = self.copda_min_chain {
            p.copda.min_chain = v;
        }
        p
    }
}

fn read_edges(path: &Path) -> Result<EdgeMap> {
    Ok(EdgeMap::from_gray(&read_gray(path)?))
}

fn gen(config: &Path, out_dir: &Path) -> Result<()> {
    let cfg = BenchConfig::load(config)?;
    let specs = match &cfg.corpus {
        CorpusSource::Generated(g) => generated_specs(g),
        CorpusSource::Manifest(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_manifest(&text)?
        }
        CorpusSource::Files(_) => bail!("gen needs a generated corpus or a manifest, not inputs"),
    };
    for (id, spec) in &specs {
        let item = render_item(id, spec)?;
        write_file(&out_dir.join(format!("{id}.pgm")), &save_pgm(&item.image)?)?;
        write_file(
            &out_dir.join(format!("{id}_truth.pgm")),
            &save_pgm(&item.truth.to_gray())?,
        )?;
    }
    let manifest = write_manifest(specs.iter().map(|(id, s)| (id.as_str(), s)));
    write_file(&out_dir.join("manifest.tsv"), manifest.as_bytes())?;
    println!("wrote {} plates to {}", specs.len(), out_dir.display());
    Ok(())
}

fn run(config: &Path, out_dir: &Path, threads: Option<usize>, dump_edges: bool) -> Result<()> {
    let mut cfg = BenchConfig::load(config)?;
    cfg.output_dir = Some(out_dir.to_path_buf());
    cfg.dump_edges |= dump_edges;
    if threads.is_some() {
        cfg.threads = threads.filter(|&n| n > 0);
    }
    let rows = run_benchmark(&cfg)?;
    write_file(
        &out_dir.join("report.csv"),
        &write_report(&rows, ReportFormat::Csv)?,
    )?;
    let md = write_report(&rows, ReportFormat::Markdown)?;
    write_file(&out_dir.join("report.md"), &md)?;
    std::io::stdout().write_all(&md)?;
    Ok(())
}

fn main() {
    if let Err(e) = dispatch(Cli::parse().command) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen { config, out_dir } => gen(&config, &out_dir)?,
        Command::Noise {
            kind,
            level,
            seed,
            input,
            out,
        } => {
            let img = read_gray(&input)?;
            let noisy = add_noise(&img, &NoiseSpec::new(kind, level, seed)?)?;
            write_file(&out, &save_pgm(&quantize(&noisy))?)?;
        }
        Command::Detect(args) => {
            let mut img = read_gray(&args.input)?;
            if let Some(w) = args.median {
                img = median_filter(&img, w)?;
            }
            if args.box_average {
                img = box_average(&img);
            }
            let edges = detect(&img, args.detector, &args.params())?;
            write_file(&args.out, &save_pgm(&edges.to_gray())?)?;
        }
        Command::Pfom { detected, truth, n } => {
            let result = pfom(&read_edges(&detected)?, &read_edges(&truth)?, n)?;
            println!("{:.4}", result.score);
        }
        Command::Run {
            config,
            out_dir,
            threads,
            dump_edges,
        } => run(&config, &out_dir, threads, dump_edges)?,
        Command::Report { rows, format, out } => {
            let text = std::fs::read_to_string(&rows)
                .with_context(|| format!("reading {}", rows.display()))?;
            let bytes = write_report(&parse_csv(&text)?, format)?;
            match out {
                Some(path) => write_file(&path, &bytes)?,
                None => std::io::stdout().write_all(&bytes)?,
            }
        }
    }
    Ok(())
}
