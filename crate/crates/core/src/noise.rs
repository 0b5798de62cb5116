//! Seeded impulse (salt & pepper) and speckle corruption.
//!
//! Each pixel draws from its own [`SplitMix64`] stream keyed by
//! `(seed, pixel index)`. For impulse noise the first draw decides whether
//! the pixel is corrupted (`u < level`) and the second picks pepper (`< 0.5`)
//! or salt. Because the decision is a threshold on a fixed draw, the set of
//! corrupted pixels at a lower level is a subset of the set at a higher level
//! for the same seed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    Impulse,
    Speckle,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::Impulse => "impulse",
            NoiseKind::Speckle => "speckle",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "impulse" | "salt-and-pepper" | "salt_pepper" => Ok(NoiseKind::Impulse),
            "speckle" => Ok(NoiseKind::Speckle),
            other => Err(Error::InvalidParameter(format!(
                "unknown noise kind {other:?}"
            ))),
        }
    }
}

/// Corruption recipe. `level` is a fraction in `[0, 1]`: the pixel
/// corruption probability for impulse noise, the variance of the
/// multiplicative term for speckle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub level: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, level: f64, seed: u64) -> Result<Self> {
        check_level(level)?;
        Ok(Self { kind, level, seed })
    }
}

fn check_level(level: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::InvalidNoiseLevel(level));
    }
    Ok(())
}

fn per_pixel(img: &GrayImage, seed: u64, f: impl Fn(f64, &mut SplitMix64) -> f64) -> GrayImage {
    let (w, h) = img.dimensions();
    let data = img
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &v)| f(v, &mut SplitMix64::for_index(seed, i as u64)))
        .collect();
    GrayImage::new(w, h, data).expect("same shape as input")
}

pub fn add_impulse(img: &GrayImage, spec: &NoiseSpec) -> Result<GrayImage> {
    check_level(spec.level)?;
    let level = spec.level;
    Ok(per_pixel(img, spec.seed, |v, rng| {
        if rng.next_f64() < level {
            if rng.next_f64() < 0.5 {
                0.0
            } else {
                255.0
            }
        } else {
            v
        }
    }))
}

/// `out = clamp(g + g * u)` with `u` uniform on `[-sqrt(3 level), sqrt(3 level)]`.
pub fn add_speckle(img: &GrayImage, spec: &NoiseSpec) -> Result<GrayImage> {
    check_level(spec.level)?;
    let half_width = (3.0 * spec.level).sqrt();
    Ok(per_pixel(img, spec.seed, |v, rng| {
        let u = (2.0 * rng.next_f64() - 1.0) * half_width;
        (v + v * u).clamp(0.0, 255.0)
    }))
}

/// Dispatch on `spec.kind`.
pub fn add_noise(img: &GrayImage, spec: &NoiseSpec) -> Result<GrayImage> {
    match spec.kind {
        NoiseKind::Impulse => add_impulse(img, spec),
        NoiseKind::Speckle => add_speckle(img, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 7 + y * 13) % 254 + 1) as f64)
    }

    fn spec(kind: NoiseKind, level: f64, seed: u64) -> NoiseSpec {
        NoiseSpec { kind, level, seed }
    }

    #[test]
    fn zero_level_is_identity() {
        let img = ramp(20, 10);
        assert_eq!(
            add_impulse(&img, &spec(NoiseKind::Impulse, 0.0, 1)).unwrap(),
            img
        );
        assert_eq!(
            add_speckle(&img, &spec(NoiseKind::Speckle, 0.0, 1)).unwrap(),
            img
        );
    }

    #[test]
    fn full_impulse_saturates_everything() {
        let out = add_impulse(&ramp(30, 30), &spec(NoiseKind::Impulse, 1.0, 5)).unwrap();
        assert!(out.pixels().iter().all(|&v| v == 0.0 || v == 255.0));
        let salt = out.pixels().iter().filter(|&&v| v == 255.0).count();
        assert!(salt > 300 && salt < 600, "salt count {salt}");
    }

    #[test]
    fn impulse_only_produces_extremes_or_original() {
        let img = ramp(40, 25);
        let out = add_impulse(&img, &spec(NoiseKind::Impulse, 0.4, 11)).unwrap();
        for (&a, &b) in img.pixels().iter().zip(out.pixels()) {
            assert!(b == a || b == 0.0 || b == 255.0);
        }
    }

    #[test]
    fn impulse_corruption_is_nested_across_levels() {
        let img = ramp(50, 50);
        let lo = add_impulse(&img, &spec(NoiseKind::Impulse, 0.2, 3)).unwrap();
        let hi = add_impulse(&img, &spec(NoiseKind::Impulse, 0.5, 3)).unwrap();
        for ((&o, &l), &h) in img.pixels().iter().zip(lo.pixels()).zip(hi.pixels()) {
            if l != o {
                assert_eq!(l, h);
            }
        }
    }

    #[test]
    fn speckle_preserves_zero() {
        let zero = GrayImage::filled(16, 16, 0.0);
        let out = add_speckle(&zero, &spec(NoiseKind::Speckle, 0.9, 4)).unwrap();
        assert!(out.pixels().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn speckle_variance_matches_uniform_formula() {
        // pre-clamp variance of 128 + 128 u is 128^2 * level; level 0.5 keeps
        // 128 (1 + u) inside [0, 255] only partially, so reconstruct u directly
        let img = GrayImage::filled(100, 100, 128.0);
        let level = 0.5;
        let s = spec(NoiseKind::Speckle, level, 21);
        let half = (3.0f64 * level).sqrt();
        let pre: Vec<f64> = (0..10_000u64)
            .map(|i| {
                let u = (2.0 * SplitMix64::for_index(s.seed, i).next_f64() - 1.0) * half;
                128.0 + 128.0 * u
            })
            .collect();
        let mean = pre.iter().sum::<f64>() / pre.len() as f64;
        let var = pre.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (pre.len() - 1) as f64;
        let expected = 128.0 * 128.0 * level;
        assert!(
            (var - expected).abs() / expected < 0.10,
            "var {var} vs {expected}"
        );
        // the clamped output agrees with the reconstruction wherever it is in range
        let out = add_speckle(&img, &s).unwrap();
        for (&o, &p) in out.pixels().iter().zip(&pre) {
            assert_eq!(o, p.clamp(0.0, 255.0));
        }
    }

    #[test]
    fn rejects_out_of_range_levels() {
        let img = ramp(4, 4);
        assert!(matches!(
            add_impulse(&img, &spec(NoiseKind::Impulse, 1.5, 0)),
            Err(Error::InvalidNoiseLevel(_))
        ));
        assert!(add_speckle(&img, &spec(NoiseKind::Speckle, -0.1, 0)).is_err());
        assert!(NoiseSpec::new(NoiseKind::Impulse, f64::NAN, 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let img = ramp(32, 32);
        let s = spec(NoiseKind::Speckle, 0.3, 99);
        assert_eq!(
            add_speckle(&img, &s).unwrap(),
            add_speckle(&img, &s).unwrap()
        );
        let other = spec(NoiseKind::Speckle, 0.3, 100);
        assert_ne!(
            add_speckle(&img, &s).unwrap(),
            add_speckle(&img, &other).unwrap()
        );
    }
}
