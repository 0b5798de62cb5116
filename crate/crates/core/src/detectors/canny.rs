//! Canny: Gaussian smoothing, Sobel gradient, non-maximum suppression over
//! four orientation bins, quantile-based double threshold and 8-connected
//! hysteresis.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::filters::{convolve, Kernel};
use crate::image::{EdgeMap, GrayImage};

use super::gradient::{gradient_field, GradientField, GradientOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyConfig {
    pub gauss_sigma: f64,
    /// Side of the square Gaussian kernel; odd.
    pub kernel_size: usize,
    /// The high threshold is this quantile of the nonzero gradient magnitudes.
    pub high_quantile: f64,
    /// `low = low_ratio * high`.
    pub low_ratio: f64,
}

impl Default for CannyConfig {
    fn default() -> Self {
        Self {
            gauss_sigma: 1.4,
            kernel_size: 5,
            high_quantile: 0.90,
            low_ratio: 0.4,
        }
    }
}

impl CannyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gauss_sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "canny gauss_sigma {} must be positive",
                self.gauss_sigma
            )));
        }
        if self.kernel_size.is_multiple_of(2) {
            return Err(Error::EvenKernel {
                width: self.kernel_size,
                height: self.kernel_size,
            });
        }
        for (name, v) in [
            ("high_quantile", self.high_quantile),
            ("low_ratio", self.low_ratio),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "canny {name} {v} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Orientation bin of a gradient angle: 0, 45, 90 or 135 degrees.
pub fn orientation_bin(theta: f64) -> u8 {
    let mut deg = theta.to_degrees() % 180.0;
    if deg < 0.0 {
        deg += 180.0;
    }
    match deg {
        d if !(22.5..157.5).contains(&d) => 0,
        d if d < 67.5 => 45,
        d if d < 112.5 => 90,
        _ => 135,
    }
}

/// Neighbor offset along the gradient, on the "previous" side. The other
/// neighbor is its mirror image. Image rows grow downward, so a 45 degree
/// gradient points to the lower right.
pub fn bin_offset(bin: u8) -> (isize, isize) {
    match bin {
        0 => (-1, 0),
        45 => (-1, -1),
        90 => (0, -1),
        _ => (1, -1),
    }
}

/// Relative tolerance under which two magnitudes count as a plateau.
const TIE_EPS: f64 = 1e-9;

/// Thin the magnitude grid to ridge pixels. A pixel survives when its
/// magnitude is strictly greater than the previous neighbor along its
/// snapped gradient direction and at least the next one, so a two-pixel
/// plateau keeps its upper-left member. Magnitudes within a relative
/// [`TIE_EPS`] of each other are equal. Outside the image counts as zero.
pub fn non_max_suppression(field: &GradientField) -> GrayImage {
    let mag = &field.magnitude;
    let (w, h) = mag.dimensions();
    let at = |x: isize, y: isize| {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0.0
        } else {
            mag.get(x as usize, y as usize)
        }
    };
    GrayImage::from_fn(w, h, |x, y| {
        let m = mag.get(x, y);
        if m <= 0.0 {
            return 0.0;
        }
        let (dx, dy) = bin_offset(orientation_bin(field.orientation.get(x, y)));
        let (xi, yi) = (x as isize, y as isize);
        let prev = at(xi + dx, yi + dy);
        let next = at(xi - dx, yi - dy);
        let tol = TIE_EPS * m;
        if m - prev > tol && m - next >= -tol {
            m
        } else {
            0.0
        }
    })
}

/// Nearest-rank quantile of the strictly positive values.
pub fn positive_quantile(values: &[f64], q: f64) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&m| m > 0.0).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    Some(v[rank - 1])
}

/// Keep pixels `>= high`, plus pixels `>= low` 8-connected to them through
/// other pixels `>= low`.
pub fn hysteresis(mag: &GrayImage, low: f64, high: f64) -> EdgeMap {
    let (w, h) = mag.dimensions();
    let mut out = EdgeMap::empty(w, h);
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            let m = mag.get(x, y);
            if m > 0.0 && m >= high {
                out.set(x, y, true);
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
            for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                if !out.get(nx, ny) {
                    let m = mag.get(nx, ny);
                    if m > 0.0 && m >= low {
                        out.set(nx, ny, true);
                        queue.push_back((nx, ny));
                    }
                }
            }
        }
    }
    out
}

pub fn canny_detect(img: &GrayImage, cfg: &CannyConfig) -> Result<EdgeMap> {
    cfg.validate()?;
    let smoothed = convolve(img, &Kernel::gaussian(cfg.kernel_size, cfg.gauss_sigma)?);
    let field = gradient_field(&smoothed, GradientOperator::Sobel);
    let Some(high) = positive_quantile(field.magnitude.pixels(), cfg.high_quantile) else {
        return Ok(EdgeMap::empty(img.width(), img.height()));
    };
    let thin = non_max_suppression(&field);
    Ok(hysteresis(&thin, cfg.low_ratio * high, high))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn bins() {
        assert_eq!(orientation_bin(0.0), 0);
        assert_eq!(orientation_bin(PI), 0);
        assert_eq!(orientation_bin(-PI / 2.0), 90);
        assert_eq!(orientation_bin(PI / 4.0), 45);
        assert_eq!(orientation_bin(-3.0 * PI / 4.0), 45);
        assert_eq!(orientation_bin(3.0 * PI / 4.0), 135);
        assert_eq!(orientation_bin(20f64.to_radians()), 0);
        assert_eq!(orientation_bin(160f64.to_radians()), 0);
    }

    #[test]
    fn constant_image_is_empty() {
        let out = canny_detect(&GrayImage::filled(20, 12, 90.0), &CannyConfig::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn vertical_step_gives_single_line() {
        let img = GrayImage::from_fn(24, 16, |x, _| if x < 12 { 20.0 } else { 230.0 });
        let out = canny_detect(&img, &CannyConfig::default()).unwrap();
        for y in 0..16 {
            let cols: Vec<usize> = (0..24).filter(|&x| out.get(x, y)).collect();
            assert_eq!(cols, vec![11], "row {y}");
        }
    }

    #[test]
    fn hysteresis_keeps_connected_weak_segments_only() {
        // strong segment at row 2, x in 2..6; weak continuation x in 6..10;
        // isolated weak segment on row 8
        let mag = GrayImage::from_fn(14, 11, |x, y| match (x, y) {
            (2..=5, 2) => 100.0,
            (6..=9, 2) => 50.0,
            (3..=9, 8) => 50.0,
            _ => 0.0,
        });
        let out = hysteresis(&mag, 40.0, 90.0);
        for x in 2..=9 {
            assert!(out.get(x, 2));
        }
        for x in 3..=9 {
            assert!(!out.get(x, 8));
        }
        assert_eq!(out.count(), 8);
    }

    #[test]
    fn suppression_keeps_only_local_maxima() {
        let img = GrayImage::from_fn(20, 20, |x, y| ((x * 13 + y * 7) % 50) as f64 * 3.0);
        let field = gradient_field(&img, GradientOperator::Sobel);
        let thin = non_max_suppression(&field);
        let (w, h) = (20isize, 20isize);
        for y in 0..h {
            for x in 0..w {
                if thin.get(x as usize, y as usize) == 0.0 {
                    continue;
                }
                let (dx, dy) = bin_offset(orientation_bin(
                    field.orientation.get(x as usize, y as usize),
                ));
                let m = field.magnitude.get(x as usize, y as usize);
                let get = |x: isize, y: isize| {
                    if x < 0 || y < 0 || x >= w || y >= h {
                        0.0
                    } else {
                        field.magnitude.get(x as usize, y as usize)
                    }
                };
                assert!(!(get(x + dx, y + dy) > m && get(x - dx, y - dy) > m));
            }
        }
    }

    #[test]
    fn quantile_nearest_rank() {
        let v = [0.0, 4.0, 1.0, 3.0, 2.0, 0.0];
        assert_eq!(positive_quantile(&v, 0.5), Some(2.0));
        assert_eq!(positive_quantile(&v, 0.9), Some(4.0));
        assert_eq!(positive_quantile(&[0.0, 0.0], 0.9), None);
    }

    #[test]
    fn invalid_config() {
        let img = GrayImage::filled(4, 4, 1.0);
        for cfg in [
            CannyConfig {
                gauss_sigma: 0.0,
                ..Default::default()
            },
            CannyConfig {
                kernel_size: 4,
                ..Default::default()
            },
            CannyConfig {
                high_quantile: 1.0,
                ..Default::default()
            },
            CannyConfig {
                low_ratio: 0.0,
                ..Default::default()
            },
        ] {
            assert!(canny_detect(&img, &cfg).is_err());
        }
    }
}
