//! Collection-of-pixel detector.
//!
//! Pass one scores every pixel against four directional step profiles over
//! a `window` x `window` neighborhood. Each profile is a zero-mean +/-1 mask
//! split by a line through the center at 0, 45, 90 or 135 degrees; the
//! response is the mean of the positive half minus the mean of the negative
//! half, so it is measured in intensity units. Pixels whose strongest
//! absolute response exceeds `contrast_threshold` become candidates.
//!
//! Pass two works on the candidate set as a whole: 8-connected components
//! with fewer than `min_chain` pixels are dropped, then one-pixel gaps are
//! bridged where a surviving pixel and another surviving pixel sit two steps
//! apart along the edge direction of the first pixel's component.

use crate::error::{Error, Result};
use crate::image::{EdgeMap, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopdaConfig {
    pub window: usize,
    pub contrast_threshold: f64,
    pub min_chain: usize,
}

impl Default for CopdaConfig {
    fn default() -> Self {
        Self {
            window: 3,
            contrast_threshold: 80.0,
            min_chain: 10,
        }
    }
}

impl CopdaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidWindow(self.window));
        }
        if !(self.contrast_threshold >= 0.0) {
            return Err(Error::NegativeThreshold(self.contrast_threshold));
        }
        if self.min_chain == 0 {
            return Err(Error::InvalidParameter(
                "copda min_chain must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Profile directions, as the angle of the intensity change.
pub const DIRECTIONS: [u8; 4] = [0, 45, 90, 135];

/// Sign of the step-profile mask for direction `dir` at offset `(dx, dy)`.
#[inline]
pub fn profile_sign(dir: u8, dx: isize, dy: isize) -> isize {
    match dir {
        0 => dx.signum(),
        45 => (dx + dy).signum(),
        90 => dy.signum(),
        _ => (dx - dy).signum(),
    }
}

/// Unit step along the edge (perpendicular to the intensity change).
fn edge_step(dir: u8) -> (isize, isize) {
    match dir {
        0 => (0, 1),
        45 => (1, -1),
        90 => (1, 0),
        _ => (1, 1),
    }
}

/// Per-pixel best absolute profile response and its direction index.
pub fn profile_responses(img: &GrayImage, window: usize) -> (GrayImage, Vec<u8>) {
    let r = (window / 2) as isize;
    let masks: Vec<Vec<(isize, isize, f64)>> = DIRECTIONS
        .iter()
        .map(|&dir| {
            let mut taps = Vec::new();
            for dy in -r..=r {
                for dx in -r..=r {
                    let s = profile_sign(dir, dx, dy);
                    if s != 0 {
                        taps.push((dx, dy, s as f64));
                    }
                }
            }
            // positive and negative halves are mirror images, equal in size
            let half = taps.len() as f64 / 2.0;
            taps.iter_mut().for_each(|t| t.2 /= half);
            taps
        })
        .collect();

    let (w, h) = img.dimensions();
    let mut best_dir = vec![0u8; w * h];
    let best = GrayImage::from_fn(w, h, |x, y| {
        let (xi, yi) = (x as isize, y as isize);
        let mut top = 0.0;
        let mut top_dir = 0;
        for (d, taps) in masks.iter().enumerate() {
            let resp: f64 = taps
                .iter()
                .map(|&(dx, dy, wgt)| wgt * img.get_replicate(xi + dx, yi + dy))
                .sum();
            let resp = super::gradient::snap(resp);
            if resp.abs() > top {
                top = resp.abs();
                top_dir = d;
            }
        }
        best_dir[y * w + x] = top_dir as u8;
        top
    });
    (best, best_dir)
}

/// 8-connected components as lists of pixel indices, in scan order.
pub fn components(map: &EdgeMap) -> Vec<Vec<usize>> {
    let (w, h) = map.dimensions();
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for start in 0..w * h {
        if seen[start] || !map.bits()[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let (x, y) = (comp[head] % w, comp[head] / w);
            head += 1;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let i = ny * w + nx;
                    if !seen[i] && map.bits()[i] {
                        seen[i] = true;
                        comp.push(i);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Drop 8-connected components smaller than `min_chain`.
pub fn filter_short_chains(map: &EdgeMap, min_chain: usize) -> EdgeMap {
    let (w, h) = map.dimensions();
    let mut out = EdgeMap::empty(w, h);
    for comp in components(map) {
        if comp.len() >= min_chain {
            for i in comp {
                out.set(i % w, i / w, true);
            }
        }
    }
    out
}

fn bridge_gaps(map: &EdgeMap, dirs: &[u8]) -> EdgeMap {
    let (w, h) = map.dimensions();
    let inside = |x: isize, y: isize| x >= 0 && y >= 0 && x < w as isize && y < h as isize;
    let mut out = map.clone();
    for comp in components(map) {
        let mut votes = [0usize; 4];
        for &i in &comp {
            votes[dirs[i] as usize] += 1;
        }
        // ties resolve to the lowest direction index
        let dominant = (0..4)
            .max_by_key(|&d| (votes[d], std::cmp::Reverse(d)))
            .unwrap();
        let (sx, sy) = edge_step(DIRECTIONS[dominant]);
        for &i in &comp {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for (dx, dy) in [(sx, sy), (-sx, -sy)] {
                let (gx, gy) = (x + dx, y + dy);
                let (fx, fy) = (x + 2 * dx, y + 2 * dy);
                if inside(fx, fy)
                    && !map.get(gx as usize, gy as usize)
                    && map.get(fx as usize, fy as usize)
                {
                    out.set(gx as usize, gy as usize, true);
                }
            }
        }
    }
    out
}

pub fn copda_detect(img: &GrayImage, cfg: &CopdaConfig) -> Result<EdgeMap> {
    cfg.validate()?;
    let (response, dirs) = profile_responses(img, cfg.window);
    let candidates = EdgeMap::new(
        img.width(),
        img.height(),
        response
            .pixels()
            .iter()
            .map(|&r| r > cfg.contrast_threshold)
            .collect(),
    )?;
    let chains = filter_short_chains(&candidates, cfg.min_chain);
    Ok(bridge_gaps(&chains, &dirs))
}
