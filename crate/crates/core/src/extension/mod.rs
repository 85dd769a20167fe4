//! The kernel extension operator
//! `E(f)(x) = h_q(x)^-1 sum_t w_t d(x,t)^-q T_t f(x)`, its derivatives, the
//! windowed variant, grid assembly and the classical Whitney baseline.

mod grid;
mod whitney;
mod window;

pub use grid::{assemble_g, FieldGrid, GridSpec};
pub use whitney::{whitney_baseline, WhitneyEval};
pub use window::{transition, window_weight};

use crate::error::{Error, Result};
use crate::geometry::{CompactSetSample, Metric, Point};
use crate::jets::{max_order, Jet, MultiIndex};
use crate::measure::DoublingMeasure;
use crate::scalar::Real;
use crate::taylor::{Ring, TaylorScalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtensionParams<T> {
    pub q: T,
    pub alpha: T,
    pub metric: Metric,
}

impl<T: Real> ExtensionParams<T> {
    pub fn new(q: T, alpha: T) -> Result<Self> {
        if !(q > T::zero() && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("kernel exponent q must be > 0, got {q}")));
        }
        if !(alpha >= T::zero() && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("jet order must be >= 0, got {alpha}")));
        }
        Ok(Self {
            q,
            alpha,
            metric: Metric::Isotropic,
        })
    }

    /// `q = upsilon + alpha + 1` for a certified upper exponent `upsilon`.
    pub fn with_default_q(upsilon: T, alpha: T) -> Result<Self> {
        Self::new(upsilon + alpha + T::one(), alpha)
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    /// The `q > upsilon + alpha` condition of the remainder bounds.
    pub fn dominates(&self, upsilon: T) -> bool {
        self.q > upsilon + self.alpha
    }
}

/// A jet, its set and measure, and kernel parameters, ready to evaluate.
#[derive(Clone, Copy, Debug)]
pub struct Extension<'a, T: Real> {
    jet: &'a Jet<T>,
    set: &'a CompactSetSample<T>,
    mu: &'a DoublingMeasure<T>,
    params: ExtensionParams<T>,
}

impl<'a, T: Real> Extension<'a, T> {
    pub fn new(
        jet: &'a Jet<T>,
        set: &'a CompactSetSample<T>,
        mu: &'a DoublingMeasure<T>,
        params: ExtensionParams<T>,
    ) -> Result<Self> {
        if jet.atom_count() != set.len() {
            return Err(Error::InvalidParameter(format!(
                "jet has {} atoms, set has {}",
                jet.atom_count(),
                set.len()
            )));
        }
        if jet.dim() != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                got: jet.dim(),
            });
        }
        if jet.alpha() != params.alpha {
            return Err(Error::InvalidParameter(format!(
                "jet order {} differs from the extension order {}",
                jet.alpha(),
                params.alpha
            )));
        }
        if params.metric == Metric::NonIsotropicDisk && set.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: set.dim(),
            });
        }
        if mu.support().last().is_some_and(|&a| a >= set.len()) {
            return Err(Error::InvalidParameter("measure is not carried by this set".into()));
        }
        Ok(Self { jet, set, mu, params })
    }

    pub fn jet(&self) -> &'a Jet<T> {
        self.jet
    }

    pub fn set(&self) -> &'a CompactSetSample<T> {
        self.set
    }

    pub fn measure(&self) -> &'a DoublingMeasure<T> {
        self.mu
    }

    pub fn params(&self) -> &ExtensionParams<T> {
        &self.params
    }

    /// The same operator applied to another jet on the same set.
    pub fn with_jet<'b>(&self, jet: &'b Jet<T>) -> Result<Extension<'b, T>>
    where
        'a: 'b,
    {
        Extension::new(jet, self.set, self.mu, self.params.with_alpha(jet.alpha()))
    }

    /// The atom nearest `x`, or `Singular` if `x` is one.
    fn check_off_set(&self, x: &Point<T>) -> Result<usize> {
        let (i, d) = self.set.nearest(x)?;
        if d == T::zero() {
            return Err(Error::Singular(i));
        }
        Ok(i)
    }

    /// `d(x, t)^2` in the ring of `x`.
    fn dist2<R: Ring<T>>(&self, x: &[R], t: &[T]) -> R {
        match self.params.metric {
            Metric::Isotropic => {
                let mut acc: Option<R> = None;
                for (xk, tk) in x.iter().zip(t) {
                    let w = xk.clone().shift(-*tk);
                    let sq = w.clone() * w;
                    acc = Some(match acc {
                        None => sq,
                        Some(a) => a + sq,
                    });
                }
                acc.expect("dimension >= 1")
            }
            Metric::NonIsotropicDisk => {
                // 1 - z conj(w) with z = x0 + i x1, w = t0 + i t1
                let re = (x[0].clone().scale(t[0]) + x[1].clone().scale(t[1])).scale(-T::one()).shift(T::one());
                let im = x[1].clone().scale(t[0]) - x[0].clone().scale(t[1]);
                re.clone() * re + im.clone() * im
            }
        }
    }

    /// `w_t d(x, t)^-q`.
    fn kernel<R: Ring<T>>(&self, x: &[R], t: usize, w: T) -> R {
        let half_q = -self.params.q / T::lit(2.0);
        self.dist2(x, self.set.atom(t).coords()).powf(half_q).scale(w)
    }

    fn kernel_mass<R: Ring<T>>(&self, x: &[R]) -> R {
        let mut den = x[0].lift(T::zero());
        for (&t, &w) in self.mu.support().iter().zip(self.mu.weights()) {
            den = den + self.kernel(x, t, w);
        }
        den
    }

    /// `E(f)` in the ring of `x`, as
    /// `T_{t0} f(x) + sum_t phi_t(x) (T_t f - T_{t0} f)(x)` with `phi_t`
    /// the normalised kernel weights. Expanded about the atom `t0`, the
    /// bracket has coefficients `-Delta_k(t, t0)`, so jets that are exact
    /// polynomials contribute only rounding to the sum, and the large
    /// derivatives of `phi_t` close to `E` never multiply `O(1)` terms
    /// that would have to cancel.
    fn evaluate<R: Ring<T>>(&self, x: &[R], t0: usize) -> R {
        let idx = self.jet.indices();
        let comps = self.jet.components();
        let p0 = self.set.atom(t0).coords();
        let zero = x[0].lift(T::zero());
        let mut den = zero.clone();
        let mut acc: Vec<R> = vec![zero.clone(); idx.len()];
        for (&t, &w) in self.mu.support().iter().zip(self.mu.weights()) {
            let kernel = self.kernel(x, t, w);
            if t != t0 {
                let shift: Vec<T> = p0.iter().zip(self.set.atom(t).coords()).map(|(a, b)| *a - *b).collect();
                for (i, k) in idx.iter().enumerate() {
                    let c = self.jet.taylor_derived(t, k, &shift) - comps[i][t0];
                    if c != T::zero() {
                        acc[i] = acc[i].clone() + kernel.clone().scale(c);
                    }
                }
            }
            den = den + kernel;
        }
        let disp: Vec<R> = x.iter().zip(p0).map(|(xk, pk)| xk.clone().shift(-*pk)).collect();
        let mut corr = zero;
        for (k, a) in idx.iter().zip(acc) {
            let mut term = a.scale(T::one() / k.factorial::<T>());
            for (d, &e) in k.entries().iter().enumerate() {
                for _ in 0..e {
                    term = term * disp[d].clone();
                }
            }
            corr = corr + term;
        }
        self.jet.taylor_at(t0, &disp) + corr / den
    }

    /// `h_q(x) = sum_t w_t d(x, t)^-q`.
    pub fn h_q(&self, x: &Point<T>) -> Result<T> {
        self.check_off_set(x)?;
        Ok(self.kernel_mass(x.coords()))
    }

    /// `h_q` with all derivatives up to `order` at `x`.
    pub fn h_q_jet(&self, x: &Point<T>, order: usize) -> Result<TaylorScalar<T>> {
        self.check_off_set(x)?;
        let seed = TaylorScalar::seed(x.coords(), order);
        Ok(self.kernel_mass(&seed))
    }

    pub fn value(&self, x: &Point<T>) -> Result<T> {
        let t0 = self.check_off_set(x)?;
        Ok(self.evaluate(x.coords(), t0))
    }

    /// `E(f)` at `x` with every derivative of total order `<= order`.
    pub fn jet_at(&self, x: &Point<T>, order: usize) -> Result<TaylorScalar<T>> {
        let t0 = self.check_off_set(x)?;
        let seed = TaylorScalar::seed(x.coords(), order);
        Ok(self.evaluate(&seed, t0))
    }

    /// Highest derivative order [`Self::derivative`] accepts.
    pub fn max_derivative(&self) -> usize {
        max_order(self.params.alpha) + 1
    }

    /// `D^a E(f)(x)`, exact up to rounding.
    pub fn derivative(&self, x: &Point<T>, a: &MultiIndex) -> Result<T> {
        if a.order() > self.max_derivative() {
            return Err(Error::OrderExceeded {
                requested: a.order(),
                max: self.max_derivative(),
            });
        }
        if a.dim() != self.set.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.set.dim(),
                got: a.dim(),
            });
        }
        let t = self.jet_at(x, a.order())?;
        Ok(t.derivative(a).expect("order within truncation"))
    }

    /// `D^a` of the Taylor polynomial of the extension's own jet at `x`,
    /// i.e. `D^a_y T_x E(f)(y)`, for `|a| <= order`. Returned as a
    /// closure-free table: entry `b` is `D^b E(f)(x)`.
    pub fn taylor_coefficients(&self, x: &Point<T>, order: usize) -> Result<TaylorScalar<T>> {
        self.jet_at(x, order)
    }
}

/// `h_q(x)` for the measure `mu` on `set`.
pub fn h_q<T: Real>(
    set: &CompactSetSample<T>,
    mu: &DoublingMeasure<T>,
    params: &ExtensionParams<T>,
    x: &Point<T>,
) -> Result<T> {
    let dummy = Jet::zeros(set.dim(), params.alpha, set.len());
    Extension::new(&dummy, set, mu, *params)?.h_q(x)
}

pub fn extend<T: Real>(
    jet: &Jet<T>,
    set: &CompactSetSample<T>,
    mu: &DoublingMeasure<T>,
    params: &ExtensionParams<T>,
    x: &Point<T>,
) -> Result<T> {
    Extension::new(jet, set, mu, *params)?.value(x)
}

pub fn extend_derivative<T: Real>(
    jet: &Jet<T>,
    set: &CompactSetSample<T>,
    mu: &DoublingMeasure<T>,
    params: &ExtensionParams<T>,
    x: &Point<T>,
    a: &MultiIndex,
) -> Result<T> {
    Extension::new(jet, set, mu, *params)?.derivative(x, a)
}

/// `phi(x) E(f)(x)` with `phi = 1` on `B(0, R)` and `0` off `B(0, 2R)`.
/// Requires `E` inside `B(0, R/2)`.
pub fn windowed_extension<T: Real>(ext: &Extension<'_, T>, radius: T, x: &Point<T>) -> Result<T> {
    window::check_window(ext.set(), radius)?;
    let phi = window_weight(x.coords(), radius);
    if phi == T::zero() {
        return Ok(T::zero());
    }
    Ok(phi * ext.value(x)?)
}

/// The windowed extension with every derivative up to `order` at `x`.
pub fn windowed_jet_at<T: Real>(
    ext: &Extension<'_, T>,
    radius: T,
    x: &Point<T>,
    order: usize,
) -> Result<TaylorScalar<T>> {
    window::check_window(ext.set(), radius)?;
    let seed = TaylorScalar::seed(x.coords(), order);
    let phi = window::window_ring(&seed, radius);
    if phi.coefficients().iter().all(|c| *c == T::zero()) {
        return Ok(phi);
    }
    Ok(phi * ext.jet_at(x, order)?)
}

#[cfg(test)]
mod tests;
