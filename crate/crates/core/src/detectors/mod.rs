//! Edge detectors: five single-pixel operators, the collection-of-pixel
//! detector and the morphological gradient, behind one dispatch enum.

pub mod canny;
pub mod copda;
pub mod gradient;
pub mod otsu;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{EdgeMap, GrayImage};
use crate::morphology::{dilate, erode, StructuringElement};

pub use canny::{canny_detect, CannyConfig};
pub use copda::{copda_detect, CopdaConfig};
pub use gradient::{
    gradient_detect, gradient_field, laplacian_detect, GradientField, GradientOperator, Threshold,
};
pub use otsu::otsu_threshold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    Sobel,
    Prewitt,
    Roberts,
    Laplacian,
    Canny,
    Copda,
    Morph,
}

impl Detector {
    pub const ALL: [Detector; 7] = [
        Detector::Sobel,
        Detector::Prewitt,
        Detector::Roberts,
        Detector::Laplacian,
        Detector::Canny,
        Detector::Copda,
        Detector::Morph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Detector::Sobel => "sobel",
            Detector::Prewitt => "prewitt",
            Detector::Roberts => "roberts",
            Detector::Laplacian => "laplacian",
            Detector::Canny => "canny",
            Detector::Copda => "copda",
            Detector::Morph => "morph",
        }
    }

    /// Single-value-pixel operators classify from a local response alone.
    pub fn is_single_pixel(self) -> bool {
        !matches!(self, Detector::Copda | Detector::Morph)
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Detector::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown detector {s:?}")))
    }
}

/// Tunables for every detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorParams {
    /// Sobel, Prewitt and Roberts.
    pub gradient_threshold: Threshold,
    pub laplacian_threshold: Threshold,
    pub canny: CannyConfig,
    pub copda: CopdaConfig,
    pub morph_size: usize,
    pub morph_threshold: Threshold,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            gradient_threshold: Threshold::Auto,
            laplacian_threshold: Threshold::Auto,
            canny: CannyConfig::default(),
            copda: CopdaConfig::default(),
            morph_size: 3,
            morph_threshold: Threshold::Auto,
        }
    }
}

/// Morphological gradient with an explicit or Otsu threshold.
pub fn morph_detect(
    img: &GrayImage,
    se: &StructuringElement,
    threshold: Threshold,
) -> Result<EdgeMap> {
    let t = match threshold {
        Threshold::Fixed(t) => t,
        Threshold::Auto => {
            let hi = dilate(img, se);
            let lo = erode(img, se);
            let grad: Vec<f64> = hi
                .pixels()
                .iter()
                .zip(lo.pixels())
                .map(|(a, b)| a - b)
                .collect();
            otsu_threshold(&grad)?
        }
    };
    crate::morphology::morph_gradient_edges(img, se, t)
}

pub fn detect(img: &GrayImage, detector: Detector, params: &DetectorParams) -> Result<EdgeMap> {
    match detector {
        Detector::Sobel => gradient_detect(img, GradientOperator::Sobel, params.gradient_threshold),
        Detector::Prewitt => {
            gradient_detect(img, GradientOperator::Prewitt, params.gradient_threshold)
        }
        Detector::Roberts => {
            gradient_detect(img, GradientOperator::Roberts, params.gradient_threshold)
        }
        Detector::Laplacian => laplacian_detect(img, params.laplacian_threshold),
        Detector::Canny => canny_detect(img, &params.canny),
        Detector::Copda => copda_detect(img, &params.copda),
        Detector::Morph => {
            let se = StructuringElement::rect(params.morph_size, params.morph_size)?;
            morph_detect(img, &se, params.morph_threshold)
        }
    }
}
