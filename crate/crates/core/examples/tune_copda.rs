//! Grid search of COPDA parameters on a tuning corpus.
//!
//! cargo run --release --example tune_copda -- [config] [windows] [contrasts] [chains]
//!
//! Lists are comma-separated. The config must describe a corpus disjoint
//! from the one used for evaluation (a different `corpus_seed`).

use std::path::Path;

use platebench::bench::runner::{load_corpus, noise_seed, preprocess};
use platebench::bench::BenchConfig;
use platebench::detectors::{copda_detect, CopdaConfig};
use platebench::noise::{add_noise, NoiseSpec};
use platebench::pfom;
use rayon::prelude::*;

fn list<T: std::str::FromStr>(s: Option<&String>, default: &str) -> Vec<T> {
    s.map_or(default, String::as_str)
        .split(',')
        .filter_map(|v| v.trim().parse().ok())
        .collect()
}

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cfg = match args.first().filter(|p| !p.is_empty()) {
        Some(p) => BenchConfig::load(Path::new(p))?,
        None => BenchConfig::parse(
            "corpus_count = 10\ncorpus_seed = 9001\nplate_width = 720\nplate_height = 240\n\
             levels = 0.3\nbox_average = true\n",
        )?,
    };
    let windows: Vec<usize> = list(args.get(1), "3");
    let contrasts: Vec<f64> = list(args.get(2), "20,30,40,50,60,80,100");
    let chains: Vec<usize> = list(args.get(3), "3,8,16,32,64");

    let corpus = load_corpus(&cfg.corpus)?;
    let mut inputs = Vec::new();
    for (pi, item) in corpus.iter().enumerate() {
        for &level in &cfg.levels {
            for &seed in &cfg.seeds {
                let noisy = if level > 0.0 {
                    add_noise(
                        &item.image,
                        &NoiseSpec::new(cfg.noise_kind, level, noise_seed(seed, pi))?,
                    )?
                } else {
                    item.image.clone()
                };
                inputs.push((preprocess(&noisy, &cfg.preprocess)?, &item.truth));
            }
        }
    }

    let mut grid = Vec::new();
    for &window in &windows {
        for &contrast_threshold in &contrasts {
            for &min_chain in &chains {
                grid.push(CopdaConfig {
                    window,
                    contrast_threshold,
                    min_chain,
                });
            }
        }
    }
    let mut scored: Vec<(CopdaConfig, f64)> = grid
        .par_iter()
        .map(|c| {
            let total: f64 = inputs
                .iter()
                .map(|(img, truth)| {
                    pfom(&copda_detect(img, c).unwrap(), truth, cfg.pratt_scale)
                        .unwrap()
                        .score
                })
                .sum();
            (*c, total / inputs.len() as f64)
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (c, s) in scored.iter().take(15) {
        println!(
            "window={} contrast={} min_chain={} mean_pfom={s:.4}",
            c.window, c.contrast_threshold, c.min_chain
        );
    }
    Ok(())
}
