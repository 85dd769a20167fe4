use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::DoublingMeasure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyConfig<T> {
    pub trials: usize,
    pub seed: u64,
    /// Smallest inner radius sampled; `None` means four times the resolution.
    pub scale_floor: Option<T>,
    /// Pass requires `c_up <= bound` and `c_low >= 1 / bound`.
    pub bound: T,
}

impl<T: Real> CertifyConfig<T> {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            scale_floor: None,
            bound: T::lit(16.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureCertificate<T> {
    pub gamma_up: T,
    pub lambda_low: T,
    /// `max mu(B(x,kR)) / (k^gamma mu(B(x,R)))`.
    pub c_up: T,
    /// `min mu(B(x,kR)) / (k^lambda mu(B(x,R)))`.
    pub c_low: T,
    pub samples: usize,
    pub scale_floor: T,
    /// `(support index, R, k)` attaining `c_up`.
    pub worst_up: Option<(usize, T, T)>,
    pub worst_low: Option<(usize, T, T)>,
    pub pass: bool,
}

/// Samples `(x, R, k)` with `x` in the support and
/// `floor <= R < kR <= diam`, log-uniformly in both scales.
pub fn certify<T: Real>(
    mu: &DoublingMeasure<T>,
    gamma: T,
    lambda: T,
    config: &CertifyConfig<T>,
) -> Result<MeasureCertificate<T>> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("certification needs at least one trial".into()));
    }
    if gamma < lambda {
        return Err(Error::InvalidParameter(format!(
            "upper exponent {gamma} is below lower exponent {lambda}"
        )));
    }
    let diam = mu.diameter();
    let floor = config
        .scale_floor
        .unwrap_or_else(|| T::lit(4.0) * mu.resolution());
    if !(floor > T::zero() && floor < diam) {
        return Err(Error::InsufficientScales(format!(
            "scale floor {floor} leaves no room below diameter {diam}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lf, ld) = (floor.as_f64().ln(), diam.as_f64().ln());
    let draws: Vec<(usize, T, T)> = (0..config.trials)
        .map(|_| {
            let x = rng.random_range(0..mu.support().len());
            let r = rng.random_range(lf..ld).exp();
            let span = (ld - r.ln()).max(1e-12);
            let k = rng.random_range(0.0..span).exp();
            (x, T::lit(r), T::lit(k))
        })
        .collect();
    let ratios: Vec<(T, T)> = draws
        .par_iter()
        .map(|&(x, r, k)| {
            let p = &mu.points()[x];
            let inner = mu.ball_mass(p, r);
            let outer = mu.ball_mass(p, k * r);
            assert!(inner > T::zero(), "ball around a support atom has mass");
            let q = outer / inner;
            (q / k.powf(gamma), q / k.powf(lambda))
        })
        .collect();
    let (mut c_up, mut c_low) = (T::one(), T::one());
    let (mut worst_up, mut worst_low) = (None, None);
    for (d, (u, l)) in draws.iter().zip(ratios) {
        if u > c_up {
            c_up = u;
            worst_up = Some(*d);
        }
        if l < c_low {
            c_low = l;
            worst_low = Some(*d);
        }
    }
    let pass = c_up <= config.bound && c_low >= T::one() / config.bound;
    Ok(MeasureCertificate {
        gamma_up: gamma,
        lambda_low: lambda,
        c_up,
        c_low,
        samples: config.trials,
        scale_floor: floor,
        worst_up,
        worst_low,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_set, SetKind};
    use crate::measure::build_measure;

    #[test]
    fn uniform_interval_has_small_constant() {
        let e = generate_set::<f64>(&SetKind::Interval, 10).unwrap();
        let mu = DoublingMeasure::uniform(&e).unwrap();
        let c = certify(&mu, 1.0, 1.0, &CertifyConfig::new(10_000, 3)).unwrap();
        assert!(c.c_up <= 4.0, "{}", c.c_up);
        assert!(c.c_up >= 1.0);
    }

    #[test]
    fn zero_exponents_and_unit_scale() {
        let e = generate_set::<f64>(&SetKind::Cantor, 6).unwrap();
        let mu = build_measure(&e, 6).unwrap();
        // k -> 1: the ratio is 1 for every x and R.
        for x in mu.points().iter().take(10) {
            let r = 0.1;
            assert_eq!(mu.ball_mass(x, r * 1.0) / mu.ball_mass(x, r), 1.0);
        }
        let c = certify(&mu, 0.0, 0.0, &CertifyConfig::new(500, 1)).unwrap();
        assert!(c.c_up >= 1.0 && c.c_low <= 1.0);
    }

    #[test]
    fn deterministic_and_validated() {
        let e = generate_set::<f64>(&SetKind::Cantor, 8).unwrap();
        let mu = build_measure(&e, 8).unwrap();
        let d = 2f64.ln() / 3f64.ln();
        let cfg = CertifyConfig::new(2_000, 42);
        let a = certify(&mu, d + 0.1, d - 0.1, &cfg).unwrap();
        let b = certify(&mu, d + 0.1, d - 0.1, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
        assert!(certify(&mu, 0.1, 0.2, &cfg).is_err());
        assert!(certify(&mu, 1.0, 0.2, &CertifyConfig::new(0, 1)).is_err());
    }
}
