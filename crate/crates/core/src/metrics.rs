//! Pratt Figure of Merit.
//!
//! `score = 1 / max(k_actual, k_detected) * sum_p 1 / (1 + n l(p)^2)` where
//! the sum runs over detected pixels and `l(p)` is the Euclidean distance
//! from `p` to the nearest ground-truth pixel. Distances come from an exact
//! separable squared-distance transform (lower envelope of parabolas, one
//! pass per axis), so `l(p)^2` is an exact integer.

use crate::error::{Error, Result};
use crate::image::EdgeMap;

/// Default scaling constant.
pub const PRATT_SCALE: f64 = 1.0 / 9.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfomResult {
    pub score: f64,
    /// Ground-truth edge pixel count.
    pub k_actual: usize,
    /// Detected edge pixel count.
    pub k_detected: usize,
    pub n: f64,
}

const FAR: f64 = 1e20;

/// Exact 1-D squared distance transform of sampled function `f` into `out`.
fn dt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let len = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..len {
        let fq = f[q] + (q * q) as f64;
        // z[0] is -inf, so k never underflows
        let s = loop {
            let p = v[k];
            let s = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                k -= 1;
            } else {
                break s;
            }
        };
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, slot) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        *slot = d * d + f[v[k]];
    }
}

/// Squared Euclidean distance from every pixel to the nearest edge pixel of
/// `map`, row-major. Pixels in an empty map get a huge sentinel value.
pub fn squared_distance_transform(map: &EdgeMap) -> Vec<f64> {
    let (w, h) = map.dimensions();
    let n = w.max(h);
    let mut grid: Vec<f64> = map
        .bits()
        .iter()
        .map(|&b| if b { 0.0 } else { FAR })
        .collect();
    let (mut f, mut d) = (vec![0.0; n], vec![0.0; n]);
    let (mut v, mut z) = (vec![0usize; n], vec![0.0; n + 1]);

    for x in 0..w {
        for y in 0..h {
            f[y] = grid[y * w + x];
        }
        dt_1d(&f[..h], &mut d[..h], &mut v, &mut z);
        for y in 0..h {
            grid[y * w + x] = d[y];
        }
    }
    for y in 0..h {
        let row = &mut grid[y * w..(y + 1) * w];
        f[..w].copy_from_slice(row);
        dt_1d(&f[..w], &mut d[..w], &mut v, &mut z);
        row.copy_from_slice(&d[..w]);
    }
    grid
}

/// Euclidean distance from every pixel to the nearest edge pixel.
pub fn distance_transform(map: &EdgeMap) -> Result<Vec<f64>> {
    if map.is_empty() {
        return Err(Error::EmptyTruth);
    }
    Ok(squared_distance_transform(map)
        .into_iter()
        .map(f64::sqrt)
        .collect())
}

/// Nearest-truth distance by scanning every truth pixel.
pub fn nearest_edge_distance_oracle(p: (usize, usize), truth: &EdgeMap) -> Result<f64> {
    let (px, py) = (p.0 as f64, p.1 as f64);
    truth
        .edges()
        .map(|(x, y)| (x as f64 - px).hypot(y as f64 - py))
        .min_by(f64::total_cmp)
        .ok_or(Error::EmptyTruth)
}

pub fn pfom(detected: &EdgeMap, truth: &EdgeMap, n: f64) -> Result<PfomResult> {
    if detected.dimensions() != truth.dimensions() {
        return Err(Error::DimensionMismatch {
            left: detected.dimensions(),
            right: truth.dimensions(),
        });
    }
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "pratt scale {n} must be finite and >= 0"
        )));
    }
    let k_actual = truth.count();
    if k_actual == 0 {
        return Err(Error::EmptyTruth);
    }
    let k_detected = detected.count();
    let score = if k_detected == 0 {
        0.0
    } else {
        let sq = squared_distance_transform(truth);
        let sum: f64 = detected
            .bits()
            .iter()
            .zip(&sq)
            .filter(|(&b, _)| b)
            .map(|(_, &d2)| 1.0 / (1.0 + n * d2))
            .sum();
        sum / k_actual.max(k_detected) as f64
    };
    Ok(PfomResult {
        score,
        k_actual,
        k_detected,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(w: usize, h: usize, at: (usize, usize)) -> EdgeMap {
        EdgeMap::from_fn(w, h, |x, y| (x, y) == at)
    }

    #[test]
    fn identical_maps_score_one() {
        let m = EdgeMap::from_fn(13, 9, |x, y| (x * y) % 5 == 1);
        let r = pfom(&m, &m, PRATT_SCALE).unwrap();
        assert_eq!(r.score, 1.0);
        assert_eq!(r.k_actual, r.k_detected);
    }

    #[test]
    fn distance_three_scores_half() {
        let truth = single(10, 10, (2, 2));
        let det = single(10, 10, (5, 2));
        let r = pfom(&det, &truth, PRATT_SCALE).unwrap();
        assert!((r.score - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_detection_scores_zero() {
        let truth = single(4, 4, (1, 1));
        let r = pfom(&EdgeMap::empty(4, 4), &truth, PRATT_SCALE).unwrap();
        assert_eq!(r.score, 0.0);
        assert_eq!(r.k_detected, 0);
    }

    #[test]
    fn errors_are_distinct() {
        let a = EdgeMap::empty(4, 4);
        let b = single(5, 4, (0, 0));
        assert!(matches!(
            pfom(&b, &b.transpose(), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(pfom(&a, &a, 1.0), Err(Error::EmptyTruth)));
        assert!(pfom(&b, &b, -1.0).is_err());
        assert!(matches!(
            nearest_edge_distance_oracle((0, 0), &a),
            Err(Error::EmptyTruth)
        ));
    }

    #[test]
    fn oracle_examples() {
        let truth = single(8, 8, (3, 4));
        assert_eq!(nearest_edge_distance_oracle((3, 4), &truth).unwrap(), 0.0);
        assert_eq!(nearest_edge_distance_oracle((0, 0), &truth).unwrap(), 5.0);
    }

    #[test]
    fn transform_matches_oracle_on_sparse_map() {
        let truth = EdgeMap::from_fn(17, 11, |x, y| (x * 7 + y * 3) % 23 == 0);
        let dt = distance_transform(&truth).unwrap();
        for y in 0..11 {
            for x in 0..17 {
                let o = nearest_edge_distance_oracle((x, y), &truth).unwrap();
                assert!((dt[y * 17 + x] - o).abs() < 1e-12, "({x},{y})");
            }
        }
    }

    #[test]
    fn transform_handles_single_row_and_column() {
        let row = EdgeMap::from_fn(9, 1, |x, _| x == 6);
        let dt = distance_transform(&row).unwrap();
        assert_eq!(dt, vec![6.0, 5.0, 4.0, 3.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let dt = distance_transform(&row.transpose()).unwrap();
        assert_eq!(dt[0], 6.0);
    }

    #[test]
    fn spurious_far_pixel_lowers_score() {
        let truth = EdgeMap::from_fn(30, 30, |x, y| y == 3 && x < 10);
        let mut det = truth.clone();
        let base = pfom(&det, &truth, PRATT_SCALE).unwrap().score;
        det.set(29, 29, true);
        let worse = pfom(&det, &truth, PRATT_SCALE).unwrap().score;
        assert!(worse < base);
    }
}
