//! First-derivative operators (Sobel, Prewitt, Roberts) and the Laplacian.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filters::{convolve, Kernel};
use crate::image::{EdgeMap, GrayImage};

use super::otsu::otsu_threshold;

/// Responses smaller than this are rounding residue and read as zero.
pub const RESPONSE_EPS: f64 = 1e-9;

#[inline]
pub(crate) fn snap(v: f64) -> f64 {
    if v.abs() < RESPONSE_EPS {
        0.0
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GradientOperator {
    Sobel,
    Prewitt,
    Roberts,
}

impl GradientOperator {
    /// Horizontal and vertical correlation kernels. Roberts' 2x2 cross is
    /// anchored at its top-left cell, embedded in the lower-right corner of a
    /// 3x3 grid so it shares the centered correlation engine.
    pub fn kernels(self) -> (Kernel, Kernel) {
        let rows = match self {
            GradientOperator::Sobel => (
                [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]],
                [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]],
            ),
            GradientOperator::Prewitt => (
                [[-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]],
                [[-1.0, -1.0, -1.0], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]],
            ),
            GradientOperator::Roberts => (
                [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]],
                [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]],
            ),
        };
        (
            Kernel::from_rows(rows.0).expect("3x3"),
            Kernel::from_rows(rows.1).expect("3x3"),
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GradientOperator::Sobel => "sobel",
            GradientOperator::Prewitt => "prewitt",
            GradientOperator::Roberts => "roberts",
        }
    }
}

impl fmt::Display for GradientOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Explicit threshold or Otsu's threshold over the response magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Threshold {
    #[default]
    Auto,
    Fixed(f64),
}

impl Threshold {
    pub fn resolve(self, values: &[f64]) -> Result<f64> {
        match self {
            Threshold::Auto => otsu_threshold(values),
            Threshold::Fixed(t) if t >= 0.0 => Ok(t),
            Threshold::Fixed(t) => Err(Error::NegativeThreshold(t)),
        }
    }
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Threshold::Auto);
        }
        let t: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("threshold {s:?}")))?;
        if !(t >= 0.0) {
            return Err(Error::NegativeThreshold(t));
        }
        Ok(Threshold::Fixed(t))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Auto => f.write_str("auto"),
            Threshold::Fixed(t) => write!(f, "{t}"),
        }
    }
}

/// Signed derivatives with magnitude and orientation in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub gx: GrayImage,
    pub gy: GrayImage,
    pub magnitude: GrayImage,
    pub orientation: GrayImage,
}

pub fn gradient_field(img: &GrayImage, op: GradientOperator) -> GradientField {
    let (kx, ky) = op.kernels();
    let gx = convolve(img, &kx).map(snap);
    let gy = convolve(img, &ky).map(snap);
    let (w, h) = img.dimensions();
    let magnitude = GrayImage::from_fn(w, h, |x, y| gx.get(x, y).hypot(gy.get(x, y)));
    let orientation = GrayImage::from_fn(w, h, |x, y| {
        let t = gy.get(x, y).atan2(gx.get(x, y));
        if t <= -PI {
            PI
        } else {
            t
        }
    });
    GradientField {
        gx,
        gy,
        magnitude,
        orientation,
    }
}

fn mark_above(values: &GrayImage, threshold: f64) -> EdgeMap {
    let bits = values.pixels().iter().map(|&v| v > threshold).collect();
    EdgeMap::new(values.width(), values.height(), bits).expect("same shape")
}

pub fn gradient_detect(
    img: &GrayImage,
    op: GradientOperator,
    threshold: Threshold,
) -> Result<EdgeMap> {
    let field = gradient_field(img, op);
    let t = threshold.resolve(field.magnitude.pixels())?;
    Ok(mark_above(&field.magnitude, t))
}

pub fn laplacian_kernel() -> Kernel {
    Kernel::from_rows([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]]).expect("3x3")
}

/// Signed 4-neighbor Laplacian response.
pub fn laplacian_response(img: &GrayImage) -> GrayImage {
    convolve(img, &laplacian_kernel()).map(snap)
}

/// Edge where `|laplacian| > threshold`.
pub fn laplacian_detect(img: &GrayImage, threshold: Threshold) -> Result<EdgeMap> {
    let abs = laplacian_response(img).map(f64::abs);
    let t = threshold.resolve(abs.pixels())?;
    Ok(mark_above(&abs, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(w: usize, h: usize, at: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, _| if x < at { 0.0 } else { 255.0 })
    }

    #[test]
    fn constant_image_has_no_edges() {
        let img = GrayImage::filled(9, 7, 140.0);
        for op in [
            GradientOperator::Sobel,
            GradientOperator::Prewitt,
            GradientOperator::Roberts,
        ] {
            assert!(gradient_detect(&img, op, Threshold::Auto)
                .unwrap()
                .is_empty());
            assert!(gradient_detect(&img, op, Threshold::Fixed(0.0))
                .unwrap()
                .is_empty());
        }
        assert!(laplacian_detect(&img, Threshold::Auto).unwrap().is_empty());
    }

    #[test]
    fn sobel_on_vertical_step() {
        let field = gradient_field(&step(8, 6, 4), GradientOperator::Sobel);
        for y in 0..6 {
            assert_eq!(field.gx.get(3, y), 1020.0);
            assert_eq!(field.gx.get(4, y), 1020.0);
            assert_eq!(field.gx.get(2, y), 0.0);
            for x in 0..8 {
                assert_eq!(field.gy.get(x, y), 0.0);
            }
            assert_eq!(field.orientation.get(3, y), 0.0);
        }
    }

    #[test]
    fn roberts_is_anchored_top_left() {
        let field = gradient_field(&step(6, 4, 3), GradientOperator::Roberts);
        for y in 0..4 {
            assert_eq!(field.gx.get(2, y), -255.0);
            assert_eq!(field.gy.get(2, y), 255.0);
            assert_eq!(field.magnitude.get(3, y), 0.0);
        }
    }

    #[test]
    fn laplacian_examples() {
        let ramp = GrayImage::from_fn(10, 6, |x, _| x as f64);
        let r = laplacian_response(&ramp);
        for y in 1..5 {
            for x in 1..9 {
                assert_eq!(r.get(x, y), 0.0);
            }
        }
        let dot = GrayImage::from_fn(5, 5, |x, y| if (x, y) == (2, 2) { 255.0 } else { 0.0 });
        let r = laplacian_response(&dot);
        assert_eq!(r.get(2, 2), -4.0 * 255.0);
        for (x, y) in [(1, 2), (3, 2), (2, 1), (2, 3)] {
            assert_eq!(r.get(x, y), 255.0);
        }
        assert_eq!(r.get(1, 1), 0.0);
    }

    #[test]
    fn negative_threshold_rejected() {
        let img = step(5, 5, 2);
        assert!(matches!(
            gradient_detect(&img, GradientOperator::Sobel, Threshold::Fixed(-1.0)),
            Err(Error::NegativeThreshold(_))
        ));
        assert!(laplacian_detect(&img, Threshold::Fixed(-0.5)).is_err());
        assert!("-3".parse::<Threshold>().is_err());
        assert_eq!("auto".parse::<Threshold>().unwrap(), Threshold::Auto);
        assert_eq!("12.5".parse::<Threshold>().unwrap(), Threshold::Fixed(12.5));
    }

    #[test]
    fn orientation_range() {
        let img = GrayImage::from_fn(9, 9, |x, y| ((x * 31 + y * 17) % 200) as f64);
        let f = gradient_field(&img, GradientOperator::Prewitt);
        assert!(f.orientation.pixels().iter().all(|&t| t > -PI && t <= PI));
        // step falling to the right points the gradient at pi
        let fall = GrayImage::from_fn(6, 3, |x, _| if x < 3 { 255.0 } else { 0.0 });
        let f = gradient_field(&fall, GradientOperator::Sobel);
        assert_eq!(f.orientation.get(2, 1), PI);
    }
}
