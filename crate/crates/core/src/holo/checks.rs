use num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::DoublingMeasure;
use crate::scalar::Real;
use crate::verify::{Stability, VerificationReport};

use super::{kernel_sum, winding, CircleSet, DiskExtension};

/// `|d/d conj(z) F|` estimated from central differences with step `h`.
pub fn cr_residual<T: Real>(ext: &DiskExtension<'_, T>, z: Complex<T>, h: T) -> Result<T> {
    let i = Complex::new(T::zero(), T::one());
    let dx = Complex::new(h, T::zero());
    let dy = Complex::new(T::zero(), h);
    let two_h = h + h;
    let fx = (ext.value(z + dx)? - ext.value(z - dx)?) / two_h;
    let fy = (ext.value(z + dy)? - ext.value(z - dy)?) / two_h;
    Ok((fx + i * fy).norm() / T::lit(2.0))
}

/// Polar grids for the `|h_q|` lower-bound scan: each entry `(k, m)` takes
/// radii `1 - 2^-j`, `j = 0..=k`, and `m` equally spaced angles.
#[derive(Clone, Debug, PartialEq)]
pub struct Assumption6Config {
    pub grids: Vec<(usize, usize)>,
    pub stability: Stability,
}

impl Default for Assumption6Config {
    fn default() -> Self {
        Self {
            grids: vec![(4, 32), (6, 64), (8, 128)],
            stability: Stability::default(),
        }
    }
}

/// Samples `|h_q(z)| d(z,E)^q / mu(B_z)` with `B_z = B(z0, 3 d(z,E))`,
/// `z0` the atom nearest `z`. `C` is the infimum on the finest grid; the
/// check passes when the infimum is positive and its reciprocal is stable
/// under refinement.
pub fn check_assumption6<T: Real>(
    set: &CircleSet<T>,
    mu: &DoublingMeasure<T>,
    q: T,
    config: &Assumption6Config,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("assumption6")
        .param("q", q.as_f64())
        .param("atoms", set.len())
        .param(
            "grids",
            config
                .grids
                .iter()
                .map(|(k, m)| format!("{k}x{m}"))
                .collect::<Vec<_>>()
                .join(","),
        );
    let mut series = Vec::new();
    let mut inverse = Vec::new();
    let mut witness = (Complex::new(T::zero(), T::zero()), T::infinity());
    let mut min_h = (Complex::new(T::zero(), T::zero()), T::infinity());
    let mut samples = 0;
    for &(levels, angles) in &config.grids {
        let nodes: Vec<Complex<T>> = (0..=levels)
            .flat_map(|j| {
                let r = T::one() - T::lit(2.0).powi(-(j as i32));
                let count = if j == 0 { 1 } else { angles };
                (0..count).map(move |k| Complex::from_polar(r, T::TAU() * T::from_count(k) / T::from_count(angles)))
            })
            .collect();
        let rows: Vec<Option<(T, T)>> = nodes
            .par_iter()
            .map(|&z| {
                let (i, d) = set.nearest(z).ok()?;
                if d == T::zero() {
                    return None;
                }
                let h = kernel_sum(set, mu, q, &z).norm();
                let ball = mu.ball_mass(set.planar().atom(i), T::lit(3.0) * d);
                Some((h * d.powf(q) / ball, h))
            })
            .collect();
        let mut inf = (Complex::new(T::zero(), T::zero()), T::infinity());
        for (z, row) in nodes.iter().zip(&rows) {
            if let Some((ratio, h)) = row {
                samples += 1;
                if *ratio < inf.1 {
                    inf = (*z, *ratio);
                }
                if *h < min_h.1 {
                    min_h = (*z, *h);
                }
            }
        }
        series.push(inf.1.as_f64());
        inverse.push(1.0 / inf.1.as_f64());
        witness = inf;
    }
    let top = config.grids.iter().map(|g| g.0).max().unwrap_or(0);
    let r = T::one() - T::lit(2.0).powi(-(top as i32));
    let (w, _, _) = winding(|t| kernel_sum(set, mu, q, &Complex::from_polar(r, t)), 4 * set.len().max(64));
    rep.samples = samples;
    rep.witness = vec![witness.0.re.as_f64(), witness.0.im.as_f64()];
    rep.note("min_abs_h", min_h.1.as_f64());
    rep.note("min_abs_h_at", format!("{},{}", min_h.0.re.as_f64(), min_h.0.im.as_f64()));
    rep.note("zeros_inside", w);
    rep.note("contour_radius", r.as_f64());
    rep.constant = series.last().copied().unwrap_or(0.0);
    rep.pass = series.iter().all(|c| *c > 0.0) && config.stability.judge(&inverse);
    rep.series = series;
    Ok(rep)
}

/// Approach ladders `z = (1 - 2^-j) e^{i theta}` for the derivative bound.
#[derive(Clone, Debug, PartialEq)]
pub struct AAlphaConfig {
    /// Angles sampled per ladder; half of them aim at atoms.
    pub directions: usize,
    /// Deepest `j` of each refinement step.
    pub depths: Vec<u32>,
    pub seed: u64,
    pub stability: Stability,
}

impl Default for AAlphaConfig {
    fn default() -> Self {
        Self {
            directions: 32,
            depths: vec![6, 9, 12],
            seed: 0,
            stability: Stability::default(),
        }
    }
}

/// Sup of `|F^(m)(z)| d(z,E)^(m - alpha)` over approach ladders.
pub fn check_a_alpha<T: Real>(ext: &DiskExtension<'_, T>, m: usize, config: &AAlphaConfig) -> Result<VerificationReport> {
    let alpha = ext.params().alpha;
    let two_alpha = alpha + alpha;
    if two_alpha == two_alpha.round() {
        return Err(Error::Precondition(format!("2 alpha must not be an integer, alpha = {alpha}")));
    }
    if !(T::from_count(m) > alpha) {
        return Err(Error::Precondition(format!("derivative order {m} must exceed alpha = {alpha}")));
    }
    let set = ext.set();
    let deepest = config.depths.iter().copied().max().unwrap_or(1);
    let r_max = T::one() - T::lit(2.0).powi(-(deepest as i32));
    if r_max > ext.certificate().radius {
        return Err(Error::Precondition(format!(
            "ladder reaches |z| = {r_max}, beyond the certified radius {}",
            ext.certificate().radius
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let thetas: Vec<T> = (0..config.directions)
        .map(|k| {
            if k % 2 == 0 {
                set.points()[rng.random_range(0..set.len())].theta()
            } else {
                T::lit(rng.random_range(0.0..std::f64::consts::TAU))
            }
        })
        .collect();
    let jobs: Vec<(u32, T)> = (1..=deepest).flat_map(|j| thetas.iter().map(move |&t| (j, t))).collect();
    let ratios: Vec<(T, Complex<T>)> = jobs
        .par_iter()
        .map(|&(j, theta)| {
            let z = Complex::from_polar(T::one() - T::lit(2.0).powi(-(j as i32)), theta);
            let (_, d) = set.nearest(z)?;
            let dm = ext.derivatives(z, m)?[m];
            Ok((dm.norm() * d.powf(T::from_count(m) - alpha), z))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = VerificationReport::new("a_alpha")
        .param("alpha", alpha.as_f64())
        .param("q", ext.params().q.as_f64())
        .param("m", m)
        .param("directions", config.directions)
        .param(
            "depths",
            config.depths.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        )
        .param("seed", config.seed);
    let mut series = Vec::new();
    let mut best = (T::zero(), Complex::new(T::zero(), T::zero()));
    for &top in &config.depths {
        let mut sup = T::zero();
        for (&(j, _), &(ratio, z)) in jobs.iter().zip(&ratios) {
            if j > top {
                continue;
            }
            sup = sup.max(ratio);
            if ratio > best.0 {
                best = (ratio, z);
            }
        }
        series.push(sup.as_f64());
    }
    rep.samples = jobs.len();
    rep.witness = vec![best.1.re.as_f64(), best.1.im.as_f64()];
    rep.finish(series, &config.stability);
    Ok(rep)
}
