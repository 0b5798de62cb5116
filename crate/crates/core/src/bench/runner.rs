//! Corrupt, reconstruct, enhance, detect and score over a noise sweep.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::detectors::{detect, Detector, DetectorParams};
use crate::error::{Error, Result};
use crate::filters::{box_average, enhance_power, median_filter};
use crate::image::{quantize, EdgeMap, GrayImage};
use crate::metrics::pfom;
use crate::noise::{add_noise, NoiseKind, NoiseSpec};
use crate::plate::{parse_manifest, random_plate_text, render_plate, PlateSpec};
use crate::pnm::{load_pnm, save_pgm};
use crate::rng::derive_seed;

use super::config::{BenchConfig, CorpusSource, GeneratedCorpus, Preprocess};
use super::report::format_level;

/// One scored benchmark cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub plate_id: String,
    pub detector: String,
    pub noise_kind: NoiseKind,
    pub level: f64,
    pub seed: u64,
    pub pfom_score: f64,
    pub k_actual: usize,
    pub k_detected: usize,
    pub wall_time_ms: f64,
}

/// A plate image with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub id: String,
    pub image: GrayImage,
    pub truth: EdgeMap,
}

/// Anything that turns an image into an edge map.
pub trait EdgeDetector: Sync {
    fn name(&self) -> String;
    fn detect(&self, img: &GrayImage) -> Result<EdgeMap>;
}

/// A built-in detector bound to its parameters.
pub struct Configured<'a> {
    pub detector: Detector,
    pub params: &'a DetectorParams,
}

impl EdgeDetector for Configured<'_> {
    fn name(&self) -> String {
        self.detector.as_str().to_string()
    }

    fn detect(&self, img: &GrayImage) -> Result<EdgeMap> {
        detect(img, self.detector, self.params)
    }
}

/// Seeded specs of a generated corpus, ids `plate_000`, `plate_001`, ...
pub fn generated_specs(g: &GeneratedCorpus) -> Vec<(String, PlateSpec)> {
    (0..g.count)
        .map(|i| {
            let seed = derive_seed(g.seed, i as u64);
            let spec = PlateSpec {
                width: g.width,
                height: g.height,
                text: random_plate_text(seed, g.text_len),
                style: g.styles[i % g.styles.len()],
                seed,
                blur_sigma: g.blur_sigma,
                ..PlateSpec::default()
            };
            (format!("plate_{i:03}"), spec)
        })
        .collect()
}

/// Render a plate as stored on disk: quantized to 8-bit.
pub fn render_item(id: &str, spec: &PlateSpec) -> Result<CorpusItem> {
    let (image, truth) = render_plate(spec)?;
    Ok(CorpusItem {
        id: id.to_string(),
        image: quantize(&image),
        truth,
    })
}

pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(load_pnm(&bytes)?.into_gray())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_corpus(source: &CorpusSource) -> Result<Vec<CorpusItem>> {
    match source {
        CorpusSource::Generated(g) => generated_specs(g)
            .par_iter()
            .map(|(id, spec)| render_item(id, spec))
            .collect(),
        CorpusSource::Manifest(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_manifest(&text)?
                .par_iter()
                .map(|(id, spec)| render_item(id, spec))
                .collect()
        }
        CorpusSource::Files(pairs) => pairs
            .iter()
            .map(|(img_path, truth_path)| {
                let image = read_gray(img_path)?;
                let truth = EdgeMap::from_gray(&read_gray(truth_path)?);
                if image.dimensions() != truth.dimensions() {
                    return Err(Error::DimensionMismatch {
                        left: image.dimensions(),
                        right: truth.dimensions(),
                    });
                }
                let id = img_path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| img_path.display().to_string());
                Ok(CorpusItem { id, image, truth })
            })
            .collect(),
    }
}

/// Enabled stages in fixed order: median, box average, enhance.
pub fn preprocess(img: &GrayImage, p: &Preprocess) -> Result<GrayImage> {
    let mut out = img.clone();
    if let Some(w) = p.median {
        out = median_filter(&out, w)?;
    }
    if p.box_average {
        out = box_average(&out);
    }
    if let Some(e) = &p.enhance {
        out = enhance_power(&out, e)?;
    }
    Ok(out)
}

/// Seed of the noise field for one plate: shared by every detector and
/// level so the corrupted pixel sets nest as the level grows.
pub fn noise_seed(seed: u64, plate_index: usize) -> u64 {
    derive_seed(seed, plate_index as u64)
}

pub fn edge_dump_name(plate: &str, detector: &str, level: f64, seed: u64) -> String {
    format!("{plate}_{detector}_{}_{seed}.pgm", format_level(level))
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<ReportRow>> {
    let configured: Vec<Configured> = cfg
        .detectors
        .iter()
        .map(|&detector| Configured {
            detector,
            params: &cfg.params,
        })
        .collect();
    let dyns: Vec<&dyn EdgeDetector> = configured.iter().map(|c| c as &dyn EdgeDetector).collect();
    run_benchmark_with(cfg, &dyns)
}

/// Run the sweep with explicit detectors (config's detector list is ignored).
pub fn run_benchmark_with(
    cfg: &BenchConfig,
    detectors: &[&dyn EdgeDetector],
) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let work = || -> Result<Vec<ReportRow>> {
        let corpus = load_corpus(&cfg.corpus)?;
        run_on_corpus(cfg, &corpus, detectors)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Sweep an already loaded corpus.
pub fn run_on_corpus(
    cfg: &BenchConfig,
    corpus: &[CorpusItem],
    detectors: &[&dyn EdgeDetector],
) -> Result<Vec<ReportRow>> {
    let dump_dir: Option<PathBuf> = match (&cfg.output_dir, cfg.dump_edges) {
        (Some(dir), true) => Some(dir.join("edges")),
        _ => None,
    };
    let mut tasks = Vec::new();
    for (pi, _) in corpus.iter().enumerate() {
        for &level in &cfg.levels {
            for &seed in &cfg.seeds {
                tasks.push((pi, level, seed));
            }
        }
    }

    let nested: Vec<Vec<ReportRow>> = tasks
        .par_iter()
        .map(|&(pi, level, seed)| {
            let item = &corpus[pi];
            let noisy = if level > 0.0 {
                let spec = NoiseSpec::new(cfg.noise_kind, level, noise_seed(seed, pi))?;
                add_noise(&item.image, &spec)?
            } else {
                item.image.clone()
            };
            let input = preprocess(&noisy, &cfg.preprocess)?;
            detectors
                .iter()
                .map(|d| {
                    let start = Instant::now();
                    let edges = d.detect(&input)?;
                    let score = pfom(&edges, &item.truth, cfg.pratt_scale)?;
                    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
                    let name = d.name();
                    if let Some(dir) = &dump_dir {
                        let path = dir.join(edge_dump_name(&item.id, &name, level, seed));
                        write_file(&path, &save_pgm(&edges.to_gray())?)?;
                    }
                    Ok(ReportRow {
                        plate_id: item.id.clone(),
                        detector: name,
                        noise_kind: cfg.noise_kind,
                        level,
                        seed,
                        pfom_score: score.score,
                        k_actual: score.k_actual,
                        k_detected: score.k_detected,
                        wall_time_ms: if cfg.record_timing { elapsed } else { 0.0 },
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<ReportRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.plate_id
            .cmp(&b.plate_id)
            .then_with(|| a.detector.cmp(&b.detector))
            .then_with(|| a.level.total_cmp(&b.level))
            .then_with(|| a.seed.cmp(&b.seed))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plate::boundary_pixels;

    /// Right or lower neighbor differs: reproduces the ground truth of an
    /// unblurred clean plate.
    struct ForwardDifference;

    impl EdgeDetector for ForwardDifference {
        fn name(&self) -> String {
            "stub".into()
        }

        fn detect(&self, img: &GrayImage) -> Result<EdgeMap> {
            let (lo, hi) = img.min_max();
            let mid = 0.5 * (lo + hi);
            Ok(boundary_pixels(&EdgeMap::from_fn(
                img.width(),
                img.height(),
                |x, y| img.get(x, y) < mid,
            )))
        }
    }

    fn small(count: usize, blur: f64) -> BenchConfig {
        BenchConfig {
            corpus: CorpusSource::Generated(GeneratedCorpus {
                count,
                blur_sigma: blur,
                text_len: 3,
                width: 120,
                height: 40,
                ..GeneratedCorpus::default()
            }),
            ..BenchConfig::default()
        }
    }

    #[test]
    fn identity_detector_scores_one_on_clean_plates() {
        let cfg = BenchConfig {
            levels: vec![0.0],
            ..small(3, 0.0)
        };
        let rows = run_benchmark_with(&cfg, &[&ForwardDifference]).unwrap();
        assert_eq!(rows.len(), 3);
        for r in rows {
            assert_eq!(r.pfom_score, 1.0);
            assert_eq!(r.k_actual, r.k_detected);
        }
    }

    #[test]
    fn one_row_per_cell() {
        let cfg = BenchConfig {
            detectors: vec![Detector::Canny],
            levels: vec![0.0, 0.3],
            ..small(1, 1.0)
        };
        assert_eq!(run_benchmark(&cfg).unwrap().len(), 2);

        let cfg = BenchConfig {
            detectors: vec![Detector::Sobel, Detector::Roberts],
            levels: vec![0.3, 0.0],
            seeds: vec![9, 2],
            ..small(2, 1.0)
        };
        let rows = run_benchmark(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 2);
        let keys: Vec<_> = rows
            .iter()
            .map(|r| {
                (
                    r.plate_id.clone(),
                    r.detector.clone(),
                    format_level(r.level),
                    r.seed,
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn thread_count_does_not_change_rows() {
        let base = BenchConfig {
            detectors: vec![Detector::Canny, Detector::Copda, Detector::Laplacian],
            levels: vec![0.0, 0.2],
            seeds: vec![3],
            ..small(2, 1.0)
        };
        let one = run_benchmark(&BenchConfig {
            threads: Some(1),
            ..base.clone()
        })
        .unwrap();
        let four = run_benchmark(&BenchConfig {
            threads: Some(4),
            ..base
        })
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn preprocess_order_is_fixed() {
        let img = GrayImage::from_fn(9, 9, |x, y| ((x * 37 + y * 91) % 256) as f64);
        let p = Preprocess {
            median: Some(3),
            box_average: true,
            enhance: None,
        };
        let expect = box_average(&median_filter(&img, 3).unwrap());
        assert_eq!(preprocess(&img, &p).unwrap(), expect);
    }

    #[test]
    fn mismatched_truth_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let img = dir.path().join("a.pgm");
        let truth = dir.path().join("a_truth.pgm");
        write_file(&img, &save_pgm(&GrayImage::filled(6, 4, 10.0)).unwrap()).unwrap();
        write_file(&truth, &save_pgm(&GrayImage::filled(4, 6, 255.0)).unwrap()).unwrap();
        let source = CorpusSource::Files(vec![(img, truth)]);
        assert!(matches!(
            load_corpus(&source),
            Err(Error::DimensionMismatch { .. })
        ));
        let missing = CorpusSource::Files(vec![("/nope/x.pgm".into(), "/nope/y.pgm".into())]);
        assert!(matches!(load_corpus(&missing), Err(Error::Io { .. })));
    }
}
