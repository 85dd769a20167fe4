use crate::error::{Error, Result};
use crate::geometry::{euclid, CompactSetSample};
use crate::scalar::Real;
use crate::taylor::{ring_sqrt, Ring};

/// Smooth step: `0` for `t <= 0`, `1` for `t >= 1`,
/// `e^(-1/t) / (e^(-1/t) + e^(-1/(1-t)))` in between.
pub fn transition<T: Real>(t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    if t >= T::one() {
        return T::one();
    }
    let a = (-t.recip()).exp();
    let b = (-(T::one() - t).recip()).exp();
    a / (a + b)
}

/// `phi(x) = transition((2R - |x|) / R)`.
pub fn window_weight<T: Real>(x: &[T], radius: T) -> T {
    let r = euclid(x, &vec![T::zero(); x.len()]);
    transition((radius + radius - r) / radius)
}

pub(super) fn window_ring<T: Real, R: Ring<T>>(x: &[R], radius: T) -> R {
    let values: Vec<T> = x.iter().map(|c| c.value()).collect();
    let r = euclid(&values, &vec![T::zero(); values.len()]);
    let zero = x[0].lift(T::zero());
    if r <= radius {
        return zero.shift(T::one());
    }
    if r >= radius + radius {
        return zero;
    }
    let mut sq = zero;
    for c in x {
        sq = sq + c.clone() * c.clone();
    }
    let t = ring_sqrt(&sq).scale(-radius.recip()).shift(T::lit(2.0));
    let one_minus = t.clone().scale(-T::one()).shift(T::one());
    let a = (-t.recip()).exp();
    let b = (-one_minus.recip()).exp();
    a.clone() / (a + b)
}

pub(super) fn check_window<T: Real>(set: &CompactSetSample<T>, radius: T) -> Result<()> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidParameter(format!("window radius must be > 0, got {radius}")));
    }
    let reach = set.atoms().iter().map(|a| a.norm()).fold(T::zero(), T::max);
    if reach > radius / T::lit(2.0) {
        return Err(Error::OutsideWindow(reach.as_f64()));
    }
    Ok(())
}
