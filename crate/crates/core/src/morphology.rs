//! Flat grayscale morphology: windowed mean, dilation, erosion and the
//! morphological gradient edge operator.

use crate::error::{Error, Result};
use crate::image::{EdgeMap, GrayImage};

/// Flat structuring element of odd size `a` x `b` (width x height). The
/// origin is the center cell and must be a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    width: usize,
    height: usize,
    members: Vec<bool>,
}

impl StructuringElement {
    pub fn new(width: usize, height: usize, members: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::InvalidStructuringElement(
                "width and height must be odd and positive",
            ));
        }
        if members.len() != width * height {
            return Err(Error::InvalidStructuringElement(
                "membership mask does not match size",
            ));
        }
        if !members[(height / 2) * width + width / 2] {
            return Err(Error::InvalidStructuringElement("origin must be a member"));
        }
        Ok(Self {
            width,
            height,
            members,
        })
    }

    /// Every cell a member.
    pub fn rect(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![true; width * height])
    }

    /// Plus-shaped element of odd `size`.
    pub fn cross(size: usize) -> Result<Self> {
        let c = size / 2;
        Self::new(
            size,
            size,
            (0..size * size)
                .map(|i| i % size == c || i / size == c)
                .collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_member(&self, i: usize, j: usize) -> bool {
        self.members[j * self.width + i]
    }

    /// Member offsets `(di, dj)` relative to the origin.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        let (cx, cy) = ((self.width / 2) as isize, (self.height / 2) as isize);
        (0..self.height)
            .flat_map(|j| (0..self.width).map(move |i| (i, j)))
            .filter(|&(i, j)| self.is_member(i, j))
            .map(|(i, j)| (i as isize - cx, j as isize - cy))
            .collect()
    }
}

fn reduce(
    img: &GrayImage,
    offsets: &[(isize, isize)],
    init: f64,
    op: impl Fn(f64, f64) -> f64,
) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        offsets.iter().fold(init, |acc, &(dx, dy)| {
            op(acc, img.get_replicate(x as isize + dx, y as isize + dy))
        })
    })
}

/// Mean of `img(x + i, y + j)` over members, clamped.
pub fn smooth_morph(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    let offsets = se.offsets();
    let n = offsets.len() as f64;
    reduce(img, &offsets, 0.0, |a, b| a + b).map(|v| (v / n).clamp(0.0, 255.0))
}

/// `max` of `img(x - i, y - j)` over members.
pub fn dilate(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    let reflected: Vec<_> = se.offsets().into_iter().map(|(i, j)| (-i, -j)).collect();
    reduce(img, &reflected, f64::NEG_INFINITY, f64::max)
}

/// `min` of `img(x - i, y - j)` over members.
pub fn erode(img: &GrayImage, se: &StructuringElement) -> GrayImage {
    let reflected: Vec<_> = se.offsets().into_iter().map(|(i, j)| (-i, -j)).collect();
    reduce(img, &reflected, f64::INFINITY, f64::min)
}

/// Edge where `dilate(img) - erode(img) > threshold`.
pub fn morph_gradient_edges(
    img: &GrayImage,
    se: &StructuringElement,
    threshold: f64,
) -> Result<EdgeMap> {
    if !(threshold >= 0.0) {
        return Err(Error::NegativeThreshold(threshold));
    }
    let hi = dilate(img, se);
    let lo = erode(img, se);
    let bits = hi
        .pixels()
        .iter()
        .zip(lo.pixels())
        .map(|(a, b)| a - b > threshold)
        .collect();
    EdgeMap::new(img.width(), img.height(), bits)
}
