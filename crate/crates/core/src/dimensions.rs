//! Packing counts `N(x, R, k)` and regression estimates of the upper and
//! lower (Larman) dimensions.
//!
//! `N(x, R, k)` is the size of a greedy maximal `R`-separated subset of the
//! atoms in `B(x, kR)`, taken in atom order. Greedy sets can undercount the
//! true packing number only by a bounded factor, which leaves log-log slopes
//! unchanged.

use std::collections::HashMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::ols;
use crate::geometry::{euclid, CompactSetSample, Point};
use crate::scalar::Real;

/// Relative slack on the separation test so that aligned scales of
/// self-similar sets are not lost to rounding.
const SEPARATION_SLACK: f64 = 1e-9;

pub fn packing_count<T: Real>(set: &CompactSetSample<T>, x: &Point<T>, r: T, k: T) -> Result<usize> {
    if !(k > T::one()) {
        return Err(Error::InvalidParameter(format!("packing needs k > 1, got {k}")));
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidParameter(format!("packing needs R > 0, got {r}")));
    }
    let ball = set.index().within(x.coords(), k * r);
    Ok(greedy(set, &ball, r))
}

fn greedy<T: Real>(set: &CompactSetSample<T>, candidates: &[usize], r: T) -> usize {
    let n = set.dim();
    let sep = r * (T::one() - T::lit(SEPARATION_SLACK));
    let cell = |p: &[T]| -> Vec<i64> { p.iter().map(|c| (*c / r).floor().to_i64().unwrap_or(0)).collect() };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut count = 0;
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let o = (code % 3) as i64 - 1;
                    code /= 3;
                    o
                })
                .collect()
        })
        .collect();
    for &a in candidates {
        let p = set.atom(a).coords();
        let c = cell(p);
        let clash = offsets.iter().any(|o| {
            let key: Vec<i64> = c.iter().zip(o).map(|(a, b)| a + b).collect();
            grid.get(&key)
                .is_some_and(|v| v.iter().any(|&b| euclid(p, set.atom(b).coords()) < sep))
        });
        if !clash {
            grid.entry(c).or_default().push(a);
            count += 1;
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionConfig {
    /// Number of sampled centres.
    pub trials: usize,
    pub seed: u64,
    /// Outer radii `kR`, as fractions of the (unit) diameter.
    pub outer_radii: Vec<f64>,
    /// Values of `k` per doubling.
    pub steps_per_octave: usize,
    /// Smallest `k` in the regression.
    pub k_min: f64,
    /// Inner radii stay above this multiple of the resolution (at least 4).
    pub floor_factor: f64,
}

impl Default for DimensionConfig {
    fn default() -> Self {
        Self {
            trials: 64,
            seed: 0,
            outer_radii: vec![1.0, 0.5, 0.25],
            steps_per_octave: 4,
            k_min: 8.0,
            floor_factor: 8.0,
        }
    }
}

/// Extremes of `N` over sampled centres and outer radii at one `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PackingRow {
    pub k: f64,
    pub max_count: usize,
    pub min_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub upper: f64,
    pub lower: f64,
    /// Larger of the two RMS residuals of the log-log fits.
    pub fit_residual: f64,
    /// Every `(R, k)` evaluated, after rescaling to unit diameter.
    pub scales_used: Vec<(f64, f64)>,
    pub table: Vec<PackingRow>,
}

/// Rescales `set` to unit diameter and regresses `log max N` and
/// `log min N` over sampled centres against `log k`.
pub fn estimate_dimensions<T: Real>(set: &CompactSetSample<T>, config: &DimensionConfig) -> Result<DimensionEstimate> {
    let diam = set.diameter();
    if set.len() == 1 || diam == T::zero() {
        return Ok(DimensionEstimate {
            upper: 0.0,
            lower: 0.0,
            fit_residual: 0.0,
            scales_used: Vec::new(),
            table: Vec::new(),
        });
    }
    if config.trials == 0 || config.outer_radii.is_empty() || config.steps_per_octave == 0 {
        return Err(Error::InvalidParameter("empty dimension-estimation configuration".into()));
    }
    let unit = set.scaled(T::one() / diam)?;
    let res = unit.resolution().as_f64();
    let floor = config.floor_factor.max(4.0) * res;
    let rho_min = config.outer_radii.iter().copied().fold(f64::INFINITY, f64::min);
    let k_max = rho_min / floor;
    if !(k_max >= 2.0 * config.k_min.max(2.0)) {
        return Err(Error::InsufficientScales(format!(
            "k can reach only {k_max:.3} with inner radii above {floor:.3e}"
        )));
    }
    let ratio = 2f64.powf(1.0 / config.steps_per_octave as f64);
    let mut ks = Vec::new();
    let mut k = config.k_min.max(2.0);
    while k <= k_max * (1.0 + 1e-12) {
        ks.push(k);
        k *= ratio;
    }
    if ks.len() < 2 {
        return Err(Error::InsufficientScales("fewer than two values of k".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let centres: Vec<usize> = (0..config.trials).map(|_| rng.random_range(0..unit.len())).collect();

    let mut scales_used = Vec::new();
    let mut jobs = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        for &rho in &config.outer_radii {
            scales_used.push((rho / k, k));
            for &c in &centres {
                jobs.push((ki, rho, c));
            }
        }
    }
    let counts: Vec<usize> = jobs
        .par_iter()
        .map(|&(ki, rho, c)| {
            let k = T::lit(ks[ki]);
            let r = T::lit(rho) / k;
            packing_count(&unit, unit.atom(c), r, k).expect("k > 1 and R > 0")
        })
        .collect();
    let mut table: Vec<PackingRow> = ks
        .iter()
        .map(|&k| PackingRow {
            k,
            max_count: 0,
            min_count: usize::MAX,
        })
        .collect();
    for (&(ki, _, _), &n) in jobs.iter().zip(&counts) {
        table[ki].max_count = table[ki].max_count.max(n);
        table[ki].min_count = table[ki].min_count.min(n);
    }
    let lk: Vec<f64> = table.iter().map(|r| r.k.ln()).collect();
    let lmax: Vec<f64> = table.iter().map(|r| (r.max_count as f64).ln()).collect();
    let lmin: Vec<f64> = table.iter().map(|r| (r.min_count as f64).ln()).collect();
    let up = ols(&lk, &lmax).ok_or_else(|| Error::InsufficientScales("degenerate fit".into()))?;
    let lo = ols(&lk, &lmin).ok_or_else(|| Error::InsufficientScales("degenerate fit".into()))?;
    Ok(DimensionEstimate {
        upper: up.slope.max(0.0),
        lower: lo.slope.max(0.0),
        fit_residual: up.rms.max(lo.rms),
        scales_used,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_set, SetKind};

    fn pt(x: f64) -> Point<f64> {
        Point::new(vec![x]).unwrap()
    }

    /// Largest R-separated subset by exhaustive search.
    fn exact_packing(xs: &[f64], r: f64) -> usize {
        let n = xs.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let chosen: Vec<f64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| xs[i]).collect();
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| (a - b).abs() >= r));
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn interval_count_between_bounds() {
        let e = generate_set::<f64>(&SetKind::Interval, 4).unwrap();
        let n = packing_count(&e, &pt(0.5), 0.1, 5.0).unwrap();
        assert!((5..=11).contains(&n), "{n}");
        let xs: Vec<f64> = e.atoms().iter().map(|a| a.coords()[0]).collect();
        assert_eq!(n, exact_packing(&xs, 0.1));
    }

    #[test]
    fn single_atom_and_bad_k() {
        let e = CompactSetSample::new(vec![pt(0.2)]).unwrap();
        assert_eq!(packing_count(&e, &pt(0.2), 0.1, 3.0).unwrap(), 1);
        assert!(packing_count(&e, &pt(0.2), 0.1, 1.0).is_err());
        let d = estimate_dimensions(&e, &DimensionConfig::default()).unwrap();
        assert_eq!((d.upper, d.lower), (0.0, 0.0));
    }

    #[test]
    fn cantor_aligned_counts() {
        let e = generate_set::<f64>(&SetKind::Cantor, 8).unwrap();
        for j in 1..=6 {
            let r = 3f64.powi(-j);
            let n = packing_count(&e, &pt(0.0), r, 1.0 / r).unwrap();
            assert_eq!(n, 1 << j, "j={j}");
        }
    }

    #[test]
    fn interval_dimension_is_one() {
        let e = generate_set::<f64>(&SetKind::Interval, 12).unwrap();
        let cfg = DimensionConfig {
            trials: 16,
            ..DimensionConfig::default()
        };
        let d = estimate_dimensions(&e, &cfg).unwrap();
        assert!((d.upper - 1.0).abs() < 0.05, "{d:?}");
        assert!((d.lower - 1.0).abs() < 0.05, "{d:?}");
    }

    #[test]
    fn too_few_scales() {
        let e = generate_set::<f64>(&SetKind::Cantor, 2).unwrap();
        assert!(matches!(
            estimate_dimensions(&e, &DimensionConfig::default()),
            Err(Error::InsufficientScales(_))
        ));
    }
}

