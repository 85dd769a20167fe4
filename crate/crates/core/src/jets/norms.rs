use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{euclid, CompactSetSample};
use crate::measure::DoublingMeasure;
use crate::scalar::Real;

use super::{Jet, MultiIndex};

/// Per-component breakdown of a jet norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NormReport<T> {
    pub indices: Vec<MultiIndex>,
    pub sup_part: Vec<T>,
    pub seminorm_part: Vec<T>,
    pub total: T,
    /// Diagonal pairs `t = s` left out of a pair sum.
    pub excluded_pairs: usize,
}

impl<T: Real> NormReport<T> {
    fn assemble(indices: Vec<MultiIndex>, sup_part: Vec<T>, seminorm_part: Vec<T>, excluded_pairs: usize) -> Self {
        let total = sup_part.iter().copied().sum::<T>() + seminorm_part.iter().copied().sum::<T>();
        Self {
            indices,
            sup_part,
            seminorm_part,
            total,
            excluded_pairs,
        }
    }
}

/// `sum_j ( max |f_j| + max_{x != y} |Delta_j(y, x)| / d(x, y)^(alpha - |j|) )`.
pub fn lip_norm<T: Real>(jet: &Jet<T>, set: &CompactSetSample<T>) -> NormReport<T> {
    let indices = jet.indices().to_vec();
    let sup_part = jet
        .components()
        .iter()
        .map(|c| c.iter().fold(T::zero(), |m, v| m.max(v.abs())))
        .collect();
    let n = set.len();
    let alpha = jet.alpha();
    let per_y: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|y| {
            let mut worst = vec![T::zero(); indices.len()];
            for x in 0..n {
                if x == y {
                    continue;
                }
                let d = euclid(set.atom(x).coords(), set.atom(y).coords());
                for (c, j) in indices.iter().enumerate() {
                    let e = alpha - T::from_count(j.order());
                    let r = jet.delta(set, y, x, j).abs() / d.powf(e);
                    worst[c] = worst[c].max(r);
                }
            }
            worst
        })
        .collect();
    let mut seminorm = vec![T::zero(); indices.len()];
    for w in per_y {
        for (s, v) in seminorm.iter_mut().zip(w) {
            *s = s.max(v);
        }
    }
    NormReport::assemble(indices, sup_part, seminorm, 0)
}

/// Sign of the `lambda` term in the pair kernel
/// `d(s,t)^(-p(alpha-|j|) +- lambda) w_t w_s / mu[t,s]^2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LambdaSign {
    /// `+lambda`, the exponent exactly as written in the definition.
    #[default]
    AsPrinted,
    /// `-lambda`, the usual convention for Besov kernels.
    Standard,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovParams<T> {
    pub p: T,
    pub alpha: T,
    pub lambda: T,
    pub sign: LambdaSign,
}

impl<T: Real> BesovParams<T> {
    pub fn new(p: T, alpha: T, lambda: T) -> Result<Self> {
        if !(p >= T::one()) {
            return Err(Error::InvalidParameter(format!("Besov exponent p must be >= 1, got {p}")));
        }
        if !(alpha > T::zero()) || !(lambda >= T::zero()) {
            return Err(Error::InvalidParameter("need alpha > 0 and lambda >= 0".into()));
        }
        Ok(Self {
            p,
            alpha,
            lambda,
            sign: LambdaSign::AsPrinted,
        })
    }

    pub fn with_sign(mut self, sign: LambdaSign) -> Self {
        self.sign = sign;
        self
    }

    /// Smoothness `alpha + (n - lambda) / p` of the ambient space.
    pub fn beta(&self, n: usize) -> T {
        self.alpha + (T::from_count(n) - self.lambda) / self.p
    }

    /// Rejects integer `alpha`, which the trace characterisation excludes.
    pub fn require_fractional(&self) -> Result<()> {
        if self.alpha.fract() == T::zero() {
            Err(Error::Precondition(format!("alpha = {} must not be an integer", self.alpha)))
        } else {
            Ok(())
        }
    }
}

/// Besov jet norm against `mu`: per component the `L^p(mu)` norm plus the
/// `p`-th root of the weighted pair sum over the support.
///
/// Both parts are returned as norms (`p`-th roots), so the total is
/// absolutely homogeneous and subadditive.
pub fn besov_norm<T: Real>(
    jet: &Jet<T>,
    set: &CompactSetSample<T>,
    mu: &DoublingMeasure<T>,
    params: &BesovParams<T>,
) -> Result<NormReport<T>> {
    if jet.atom_count() != set.len() {
        return Err(Error::InvalidParameter(format!(
            "jet has {} atoms, set has {}",
            jet.atom_count(),
            set.len()
        )));
    }
    let p = params.p;
    let inv_p = T::one() / p;
    let indices = jet.indices().to_vec();
    let support = mu.support();
    let weights = mu.weights();

    let sup_part = jet
        .components()
        .iter()
        .map(|c| {
            let s: T = support
                .iter()
                .zip(weights)
                .map(|(&a, &w)| w * c[a].abs().powf(p))
                .sum();
            s.powf(inv_p)
        })
        .collect();

    let lam = match params.sign {
        LambdaSign::AsPrinted => params.lambda,
        LambdaSign::Standard => -params.lambda,
    };
    let m = support.len();
    let per_t: Vec<Vec<T>> = (0..m)
        .into_par_iter()
        .map(|ti| {
            let t = support[ti];
            let mut order: Vec<(T, usize)> = (0..m)
                .map(|si| (euclid(set.atom(t).coords(), set.atom(support[si]).coords()), si))
                .collect();
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut acc = vec![T::zero(); indices.len()];
            let mut k = 0;
            let mut mass = T::zero();
            while k < m {
                // Closed ball: all atoms tied at this distance are inside.
                let d = order[k].0;
                let mut end = k;
                while end < m && order[end].0 == d {
                    mass += weights[order[end].1];
                    end += 1;
                }
                if d > T::zero() {
                    for &(_, si) in &order[k..end] {
                        let s = support[si];
                        let base = weights[ti] * weights[si] / (mass * mass);
                        for (c, j) in indices.iter().enumerate() {
                            let e = -p * (params.alpha - T::from_count(j.order())) + lam;
                            let delta = jet.delta(set, t, s, j).abs();
                            if delta > T::zero() {
                                acc[c] += delta.powf(p) * d.powf(e) * base;
                            }
                        }
                    }
                }
                k = end;
            }
            acc
        })
        .collect();
    let mut pair_sum = vec![T::zero(); indices.len()];
    for row in per_t {
        for (s, v) in pair_sum.iter_mut().zip(row) {
            *s += v;
        }
    }
    let seminorm = pair_sum.into_iter().map(|s| s.powf(inv_p)).collect();
    Ok(NormReport::assemble(indices, sup_part, seminorm, m))
}
