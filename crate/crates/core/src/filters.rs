//! Correlation engine, 3x3 averaging, median filtering and power-law
//! brightness enhancement.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Odd-sized weight grid, anchored at its center.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, weights: Vec<f64>) -> Result<Self> {
        if width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::EvenKernel { width, height });
        }
        if weights.len() != width * height {
            return Err(Error::InvalidDimensions {
                width,
                height,
                len: weights.len(),
            });
        }
        Ok(Self {
            width,
            height,
            weights,
        })
    }

    /// Square kernel from nested rows.
    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(N, N, rows.iter().flatten().copied().collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[j * self.width + i]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Normalized sampled Gaussian of the given odd size.
    pub fn gaussian(size: usize, sigma: f64) -> Result<Self> {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("gaussian sigma {sigma}")));
        }
        let r = (size / 2) as f64;
        let mut weights = Vec::with_capacity(size * size);
        for j in 0..size {
            for i in 0..size {
                let (dx, dy) = (i as f64 - r, j as f64 - r);
                weights.push((-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp());
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(size, size, weights)
    }
}

/// Correlation with replicate-edge padding:
/// `out(x, y) = sum_ij k(i, j) * img(x + i - cx, y + j - cy)`.
/// Output is not clamped.
pub fn convolve(img: &GrayImage, k: &Kernel) -> GrayImage {
    let (cx, cy) = ((k.width / 2) as isize, (k.height / 2) as isize);
    // only nonzero taps contribute; precompute them once
    let taps: Vec<(isize, isize, f64)> = (0..k.height)
        .flat_map(|j| (0..k.width).map(move |i| (i, j)))
        .filter_map(|(i, j)| {
            let w = k.get(i, j);
            (w != 0.0).then_some((i as isize - cx, j as isize - cy, w))
        })
        .collect();
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let (x, y) = (x as isize, y as isize);
        taps.iter()
            .map(|&(dx, dy, w)| w * img.get_replicate(x + dx, y + dy))
            .sum()
    })
}

/// 3x3 mean filter, clamped to `[0, 255]`.
pub fn box_average(img: &GrayImage) -> GrayImage {
    let k = Kernel::new(3, 3, vec![1.0; 9]).expect("3x3");
    convolve(img, &k).map(|v| (v / 9.0).clamp(0.0, 255.0))
}

/// Median of each `window` x `window` neighborhood with replicate padding.
pub fn median_filter(img: &GrayImage, window: usize) -> Result<GrayImage> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidWindow(window));
    }
    let r = (window / 2) as isize;
    let mut buf = Vec::with_capacity(window * window);
    Ok(GrayImage::from_fn(img.width(), img.height(), |x, y| {
        buf.clear();
        for dy in -r..=r {
            for dx in -r..=r {
                buf.push(img.get_replicate(x as isize + dx, y as isize + dy));
            }
        }
        let mid = buf.len() / 2;
        *buf.select_nth_unstable_by(mid, f64::total_cmp).1
    }))
}

/// Parameters of the power-law brightness map `m * g^sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhanceConfig {
    pub m: f64,
    pub sigma: f64,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        Self { m: 1.0, sigma: 0.2 }
    }
}

/// Power-law map on `[0, 1]`-normalized intensities: `255 * m * (v / 255)^sigma`,
/// clamped. Inputs outside `[0, 255]` are clamped first.
pub fn enhance_power(img: &GrayImage, cfg: &EnhanceConfig) -> Result<GrayImage> {
    if !(cfg.sigma > 0.0) {
        return Err(Error::InvalidExponent(cfg.sigma));
    }
    let EnhanceConfig { m, sigma } = *cfg;
    Ok(img.map(|v| {
        let g = v.clamp(0.0, 255.0) / 255.0;
        (m * g.powf(sigma) * 255.0).clamp(0.0, 255.0)
    }))
}
