//! Flat `key = value` benchmark configuration.
//!
//! One setting per line, `#` starts a comment, list values are
//! comma-separated. Unknown keys and repeated keys are errors. Relative
//! paths are resolved against the directory holding the config file.
//!
//! ```text
//! corpus_count  = 20
//! corpus_seed   = 7
//! corpus_styles = clean, dirty, faded
//! detectors     = sobel, canny, copda
//! noise_kind    = impulse
//! levels        = 0, 0.1, 0.3
//! seeds         = 1, 2
//! box_average   = true
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::detectors::{Detector, DetectorParams};
use crate::error::{Error, Result};
use crate::filters::EnhanceConfig;
use crate::noise::NoiseKind;
use crate::plate::PlateStyle;

/// Where the plates come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    /// Plates rendered from seeded specs.
    Generated(GeneratedCorpus),
    /// A manifest written by `gen`.
    Manifest(PathBuf),
    /// Image files paired with ground-truth PGMs (nonzero = edge).
    Files(Vec<(PathBuf, PathBuf)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedCorpus {
    pub count: usize,
    pub seed: u64,
    /// Cycled over plate indices.
    pub styles: Vec<PlateStyle>,
    pub width: usize,
    pub height: usize,
    pub blur_sigma: f64,
    pub text_len: usize,
}

impl Default for GeneratedCorpus {
    fn default() -> Self {
        Self {
            count: 20,
            seed: 1,
            styles: vec![PlateStyle::Clean],
            width: 720,
            height: 240,
            blur_sigma: 1.0,
            text_len: 6,
        }
    }
}

/// Reconstruction and enhancement stages, applied in the order
/// median, box average, enhance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Preprocess {
    pub median: Option<usize>,
    pub box_average: bool,
    pub enhance: Option<EnhanceConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub corpus: CorpusSource,
    pub detectors: Vec<Detector>,
    pub noise_kind: NoiseKind,
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    pub preprocess: Preprocess,
    pub params: DetectorParams,
    pub pratt_scale: f64,
    /// Write every edge map as a PGM under `output_dir/edges`.
    pub dump_edges: bool,
    /// Measure wall time per row. Off by default so reports stay byte-stable.
    pub record_timing: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

/// 0.50 down to 0.30 in steps of 0.02, then 0.
pub fn default_levels() -> Vec<f64> {
    (0..=10)
        .map(|i| f64::from(50 - 2 * i) / 100.0)
        .chain([0.0])
        .collect()
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            corpus: CorpusSource::Generated(GeneratedCorpus::default()),
            detectors: Detector::ALL.to_vec(),
            noise_kind: NoiseKind::Impulse,
            levels: default_levels(),
            seeds: vec![1],
            preprocess: Preprocess::default(),
            params: DetectorParams::default(),
            pratt_scale: crate::PRATT_SCALE,
            dump_edges: false,
            record_timing: false,
            threads: None,
            output_dir: None,
        }
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("bad value {value:?} for {key}"))
}

fn parse_bool(key: &str, value: &str) -> std::result::Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("bad boolean {value:?} for {key}")),
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> std::result::Result<Vec<T>, String> {
    list(value).map(|v| parse_one(key, v)).collect()
}

impl BenchConfig {
    /// Read a config file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse_with_base(&text, base)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_base(text, Path::new(""))
    }

    pub fn parse_with_base(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = BenchConfig::default();
        let mut generated = GeneratedCorpus::default();
        let mut uses_generated = false;
        let mut source: Option<CorpusSource> = None;
        let mut enhance = EnhanceConfig::default();
        let mut enhance_on = false;
        let mut median_on = false;
        let mut median_window = 3;
        let mut seen = HashSet::new();
        let resolve = |p: &str| -> PathBuf {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(err(format!("duplicate key {key}")));
            }
            let p = &mut cfg.params;
            let res: std::result::Result<(), String> = (|| {
                match key {
                    "corpus_count" => {
                        generated.count = parse_one(key, value)?;
                        uses_generated = true;
                    }
                    "corpus_seed" => {
                        generated.seed = parse_one(key, value)?;
                        uses_generated = true;
                    }
                    "corpus_styles" => {
                        generated.styles = parse_list(key, value)?;
                        uses_generated = true;
                    }
                    "plate_width" => generated.width = parse_one(key, value)?,
                    "plate_height" => generated.height = parse_one(key, value)?,
                    "blur" => generated.blur_sigma = parse_one(key, value)?,
                    "text_len" => generated.text_len = parse_one(key, value)?,
                    "corpus_manifest" => {
                        source = Some(CorpusSource::Manifest(resolve(value)));
                    }
                    "inputs" => {
                        let pairs = list(value)
                            .map(|pair| {
                                let (img, truth) = pair
                                    .split_once('|')
                                    .ok_or(format!("input {pair:?} must be image|truth"))?;
                                Ok((resolve(img.trim()), resolve(truth.trim())))
                            })
                            .collect::<std::result::Result<Vec<_>, String>>()?;
                        source = Some(CorpusSource::Files(pairs));
                    }
                    "detectors" => cfg.detectors = parse_list(key, value)?,
                    "noise_kind" => cfg.noise_kind = parse_one(key, value)?,
                    "levels" => cfg.levels = parse_list(key, value)?,
                    "seeds" => cfg.seeds = parse_list(key, value)?,
                    "box_average" => cfg.preprocess.box_average = parse_bool(key, value)?,
                    "median" => median_on = parse_bool(key, value)?,
                    "median_window" => median_window = parse_one(key, value)?,
                    "enhance" => enhance_on = parse_bool(key, value)?,
                    "enhance_m" => enhance.m = parse_one(key, value)?,
                    "enhance_sigma" => enhance.sigma = parse_one(key, value)?,
                    "gradient_threshold" => p.gradient_threshold = parse_one(key, value)?,
                    "laplacian_threshold" => p.laplacian_threshold = parse_one(key, value)?,
                    "morph_threshold" => p.morph_threshold = parse_one(key, value)?,
                    "morph_size" => p.morph_size = parse_one(key, value)?,
                    "canny_sigma" => p.canny.gauss_sigma = parse_one(key, value)?,
                    "canny_kernel" => p.canny.kernel_size = parse_one(key, value)?,
                    "canny_high_quantile" => p.canny.high_quantile = parse_one(key, value)?,
                    "canny_low_ratio" => p.canny.low_ratio = parse_one(key, value)?,
                    "copda_window" => p.copda.window = parse_one(key, value)?,
                    "copda_contrast" => p.copda.contrast_threshold = parse_one(key, value)?,
                    "copda_min_chain" => p.copda.min_chain = parse_one(key, value)?,
                    "pratt_scale" => cfg.pratt_scale = parse_one(key, value)?,
                    "dump_edges" => cfg.dump_edges = parse_bool(key, value)?,
                    "record_timing" => cfg.record_timing = parse_bool(key, value)?,
                    "threads" => {
                        let n: usize = parse_one(key, value)?;
                        cfg.threads = (n > 0).then_some(n);
                    }
                    "output_dir" => cfg.output_dir = Some(resolve(value)),
                    _ => return Err(format!("unknown key {key}")),
                }
                Ok(())
            })();
            res.map_err(err)?;
        }

        cfg.corpus = match source {
            Some(_) if uses_generated => {
                return Err(Error::Config {
                    line: 0,
                    message: "corpus_* keys conflict with inputs/corpus_manifest".into(),
                })
            }
            Some(s) => s,
            None => CorpusSource::Generated(generated),
        };
        cfg.preprocess.median = median_on.then_some(median_window);
        cfg.preprocess.enhance = enhance_on.then_some(enhance);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.detectors.is_empty() {
            return bad("no detectors".into());
        }
        if self.seeds.is_empty() {
            return bad("no seeds".into());
        }
        if self.levels.is_empty() {
            return bad("no noise levels".into());
        }
        if let Some(&l) = self.levels.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidNoiseLevel(l));
        }
        if let Some(w) = self.preprocess.median {
            if w < 3 || w % 2 == 0 {
                return Err(Error::InvalidWindow(w));
            }
        }
        if let Some(e) = &self.preprocess.enhance {
            if !(e.sigma > 0.0) {
                return Err(Error::InvalidExponent(e.sigma));
            }
        }
        if !(self.pratt_scale >= 0.0 && self.pratt_scale.is_finite()) {
            return bad(format!("pratt scale {}", self.pratt_scale));
        }
        if let CorpusSource::Generated(g) = &self.corpus {
            if g.count == 0 || g.styles.is_empty() || g.text_len == 0 {
                return bad("generated corpus needs count, styles and text_len > 0".into());
            }
        }
        self.params.canny.validate()?;
        self.params.copda.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::gradient::Threshold;

    #[test]
    fn default_levels_sweep() {
        let l = default_levels();
        assert_eq!(l.len(), 12);
        assert_eq!(l[0], 0.5);
        assert_eq!(l[10], 0.3);
        assert_eq!(l[11], 0.0);
        assert_eq!(l[1], 0.48);
    }

    #[test]
    fn parses_full_config() {
        let cfg = BenchConfig::parse(
            "# sweep\n\
             corpus_count = 4\n\
             corpus_styles = clean, faded  # two styles\n\
             detectors = canny, copda\n\
             noise_kind = speckle\n\
             levels = 0, 0.3\n\
             seeds = 5, 6\n\
             box_average = true\n\
             median = yes\n\
             median_window = 5\n\
             gradient_threshold = 40\n\
             threads = 2\n",
        )
        .unwrap();
        let CorpusSource::Generated(g) = &cfg.corpus else {
            panic!()
        };
        assert_eq!(g.count, 4);
        assert_eq!(g.styles, vec![PlateStyle::Clean, PlateStyle::Faded]);
        assert_eq!(cfg.detectors, vec![Detector::Canny, Detector::Copda]);
        assert_eq!(cfg.noise_kind, NoiseKind::Speckle);
        assert_eq!(cfg.levels, vec![0.0, 0.3]);
        assert_eq!(cfg.seeds, vec![5, 6]);
        assert!(cfg.preprocess.box_average);
        assert_eq!(cfg.preprocess.median, Some(5));
        assert_eq!(cfg.params.gradient_threshold, Threshold::Fixed(40.0));
        assert_eq!(cfg.threads, Some(2));
    }

    #[test]
    fn rejects_bad_lines() {
        for text in [
            "levels = 0.2, 1.5",
            "detectors = sobel, fancy",
            "seeds =",
            "nonsense",
            "colour = red",
            "seeds = 1\nseeds = 2",
            "inputs = a.pgm|b.pgm\ncorpus_count = 3",
        ] {
            assert!(BenchConfig::parse(text).is_err(), "{text}");
        }
        match BenchConfig::parse("seeds = 1\nlevels = x") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn relative_inputs_resolve_against_base() {
        let cfg = BenchConfig::parse_with_base(
            "inputs = a.pgm|a_t.pgm, /x/b.pgm|/x/b_t.pgm",
            Path::new("/data"),
        )
        .unwrap();
        assert_eq!(
            cfg.corpus,
            CorpusSource::Files(vec![
                ("/data/a.pgm".into(), "/data/a_t.pgm".into()),
                ("/x/b.pgm".into(), "/x/b_t.pgm".into()),
            ])
        );
    }
}
