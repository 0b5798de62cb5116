//! Otsu's threshold over a 256-bin histogram spanning `[0, max]`.

use crate::error::{Error, Result};

pub const BINS: usize = 256;

/// Histogram bin of `v` for a grid whose maximum is `max > 0`.
#[inline]
pub fn bin_of(v: f64, max: f64) -> usize {
    ((v / max * BINS as f64) as usize).min(BINS - 1)
}

/// Between-class score for a split with `n0` samples summing (in bin
/// indices) to `s0` below the cut and `n1`, `s1` above. Proportional to
/// the inter-class variance `w0 w1 (mu0 - mu1)^2`.
#[inline]
pub fn split_score(n0: u64, s0: u64, n1: u64, s1: u64) -> f64 {
    let diff = s0 as i128 * n1 as i128 - s1 as i128 * n0 as i128;
    let d = diff as f64;
    d * d / (n0 as f64 * n1 as f64)
}

/// Threshold maximizing the inter-class variance of `values`.
///
/// The returned value is the upper edge of the last bin of the lower class,
/// `(k + 1) * max / 256`; classify with `v > threshold`. Ties go to the
/// lowest bin. If every value is equal that value is returned; if all values
/// fall in one bin no split qualifies and the maximum is returned.
pub fn otsu_threshold(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "otsu threshold of an empty grid".into(),
        ));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if lo < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "otsu threshold needs non-negative values, found {lo}"
        )));
    }
    if lo == hi {
        return Ok(lo);
    }

    let mut hist = [0u64; BINS];
    for &v in values {
        hist[bin_of(v, hi)] += 1;
    }
    let total_n: u64 = hist.iter().sum();
    let total_s: u64 = hist.iter().enumerate().map(|(i, &c)| i as u64 * c).sum();

    let (mut n0, mut s0) = (0u64, 0u64);
    let mut best: Option<(usize, f64)> = None;
    for (k, &count) in hist.iter().enumerate().take(BINS - 1) {
        n0 += count;
        s0 += k as u64 * count;
        let n1 = total_n - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let score = split_score(n0, s0, n1, total_s - s0);
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((k, score));
        }
    }
    Ok(match best {
        Some((k, _)) => (k + 1) as f64 * hi / BINS as f64,
        None => hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bimodal_threshold_separates_modes() {
        let mut v = vec![0.0; 50];
        v.extend(std::iter::repeat_n(200.0, 50));
        let t = otsu_threshold(&v).unwrap();
        assert!(t > 0.0 && t < 200.0, "threshold {t}");
    }

    #[test]
    fn degenerate_grid_returns_its_value() {
        assert_eq!(otsu_threshold(&[7.5; 10]).unwrap(), 7.5);
        assert_eq!(otsu_threshold(&[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn single_bin_spread_returns_max() {
        assert_eq!(otsu_threshold(&[199.9, 200.0]).unwrap(), 200.0);
    }

    #[test]
    fn rejects_empty_and_negative() {
        assert!(otsu_threshold(&[]).is_err());
        assert!(otsu_threshold(&[-1.0, 3.0]).is_err());
    }

    #[test]
    fn three_clusters_cut_between_largest_gap() {
        let mut v = vec![10.0; 40];
        v.extend([12.0; 40]);
        v.extend([250.0; 20]);
        let t = otsu_threshold(&v).unwrap();
        assert!(t > 12.0 && t < 250.0);
    }
}
