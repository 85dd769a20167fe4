//! Holomorphic extension from closed subsets of the unit circle with the
//! kernel `(1 - z conj(w))^-q`.
//!
//! For `w` on the circle `|1 - z conj(w)| = |w - z|`, so distances to `E`
//! from anywhere in the disk are plain Euclidean distances. Complex powers
//! use the principal branch, which is continuous on the open disk because
//! `Re(1 - z conj(w)) > 0` there.

mod checks;
mod circle;

pub use checks::{check_a_alpha, check_assumption6, cr_residual, AAlphaConfig, Assumption6Config};
pub use circle::{CirclePoint, CircleSet};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::jets::{Jet, MultiIndex};
use crate::measure::DoublingMeasure;
use crate::scalar::{Field, Real};
use crate::taylor::{Ring, TaylorScalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskKernelParams<T> {
    pub q: T,
    pub alpha: T,
}

impl<T: Real> DiskKernelParams<T> {
    pub fn new(q: T, alpha: T) -> Result<Self> {
        if !(q > T::zero() && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("kernel exponent q must be > 0, got {q}")));
        }
        if !(alpha >= T::zero() && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("jet order must be >= 0, got {alpha}")));
        }
        Ok(Self { q, alpha })
    }

    /// `upsilon < q < 1`, where the lower bound on `|h_q|` is known to hold.
    pub fn assumption6_regime(&self, upsilon: T) -> bool {
        upsilon < self.q && self.q < T::one()
    }
}

/// `1 - z conj(w)`.
pub fn tau_ni<T: Real>(z: Complex<T>, w: &CirclePoint<T>) -> Complex<T> {
    Complex::new(T::one(), T::zero()) - z * w.coordinate().conj()
}

/// `sum_i w_i (1 - z conj(zeta_i))^-q`.
pub fn h_q_ni<T: Real>(set: &CircleSet<T>, mu: &DoublingMeasure<T>, q: T, z: Complex<T>) -> Result<Complex<T>> {
    let (i, d) = set.nearest(z)?;
    if d == T::zero() {
        return Err(Error::Singular(i));
    }
    Ok(kernel_sum(set, mu, q, &z))
}

fn kernel_sum<T: Real, R: Ring<Complex<T>>>(set: &CircleSet<T>, mu: &DoublingMeasure<T>, q: T, z: &R) -> R {
    let mut acc = z.lift(Complex::new(T::zero(), T::zero()));
    for (&t, &w) in mu.support().iter().zip(mu.weights()) {
        let tau = z.clone().scale(-set.coordinate(t).conj()).shift(Complex::new(T::one(), T::zero()));
        acc = acc + tau.powf(-q).scale(Complex::from_real(w));
    }
    acc
}

/// Certifies that `h_q` has no zero in `|z| <= radius`: the winding number
/// of `h_q` along `|z| = radius` counts its zeros inside, and `h_q` has no
/// poles in the open disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroFreeCertificate<T> {
    pub radius: T,
    pub winding: i64,
    /// Smallest `|h_q|` met on the contour.
    pub min_modulus: T,
    pub evaluations: usize,
}

/// Winding number of `f(theta)` over `[0, 2 pi]`, bisecting any step whose
/// argument change exceeds `pi / 4` or is not additive under halving.
pub(crate) fn winding<T: Real>(f: impl Fn(T) -> Complex<T>, base: usize) -> (i64, T, usize) {
    let tau = T::TAU();
    let mut evals = 0usize;
    let mut min_mod = T::infinity();
    let mut eval = |theta: T| {
        let v = f(theta);
        evals += 1;
        min_mod = min_mod.min(v.norm());
        v
    };
    let n = base.max(8);
    let mut total = T::zero();
    let mut prev_theta = T::zero();
    let mut prev = eval(prev_theta);
    let quarter = T::FRAC_PI_4();
    for k in 1..=n {
        let next_theta = tau * T::from_count(k) / T::from_count(n);
        let next = eval(next_theta);
        // explicit stack of (a, fa, b, fb, depth)
        let mut stack = vec![(prev_theta, prev, next_theta, next, 0u32)];
        while let Some((a, fa, b, fb, depth)) = stack.pop() {
            let whole = (fb / fa).arg();
            let mid = (a + b) / T::lit(2.0);
            let fm = eval(mid);
            let d1 = (fm / fa).arg();
            let d2 = (fb / fm).arg();
            let consistent = (d1 + d2 - whole).abs() < T::lit(1e-9);
            if depth >= 60 || (consistent && d1.abs() < quarter && d2.abs() < quarter) {
                total += d1 + d2;
            } else {
                // right half first so the left half is summed first
                stack.push((mid, fm, b, fb, depth + 1));
                stack.push((a, fa, mid, fm, depth + 1));
            }
        }
        prev_theta = next_theta;
        prev = next;
    }
    let w = (total / tau).round().to_i64().unwrap_or(i64::MAX);
    (w, min_mod, evals)
}

/// The holomorphic extension of a complex jet on `E`, certified zero-free
/// on `|z| <= radius`.
#[derive(Clone, Debug)]
pub struct DiskExtension<'a, T: Real> {
    jet: &'a Jet<Complex<T>>,
    set: &'a CircleSet<T>,
    mu: &'a DoublingMeasure<T>,
    params: DiskKernelParams<T>,
    certificate: ZeroFreeCertificate<T>,
}

impl<'a, T: Real> DiskExtension<'a, T> {
    pub fn new(
        jet: &'a Jet<Complex<T>>,
        set: &'a CircleSet<T>,
        mu: &'a DoublingMeasure<T>,
        params: DiskKernelParams<T>,
        radius: T,
    ) -> Result<Self> {
        if jet.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: jet.dim(),
            });
        }
        if jet.atom_count() != set.len() {
            return Err(Error::InvalidParameter(format!(
                "jet has {} atoms, set has {}",
                jet.atom_count(),
                set.len()
            )));
        }
        if jet.alpha() != params.alpha {
            return Err(Error::InvalidParameter(format!(
                "jet order {} differs from the extension order {}",
                jet.alpha(),
                params.alpha
            )));
        }
        if !(radius > T::zero() && radius < T::one()) {
            return Err(Error::InvalidParameter(format!("certified radius must lie in (0, 1), got {radius}")));
        }
        let base = 4 * set.len().max(64);
        let (w, min_modulus, evaluations) = winding(
            |theta| {
                let z = Complex::from_polar(radius, theta);
                kernel_sum(set, mu, params.q, &z)
            },
            base,
        );
        if w != 0 {
            let (z, m) = locate_min(set, mu, params.q, radius);
            return Err(Error::ZeroOfKernelMass {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                modulus: m.as_f64(),
            });
        }
        Ok(Self {
            jet,
            set,
            mu,
            params,
            certificate: ZeroFreeCertificate {
                radius,
                winding: w,
                min_modulus,
                evaluations,
            },
        })
    }

    pub fn certificate(&self) -> &ZeroFreeCertificate<T> {
        &self.certificate
    }

    pub fn params(&self) -> &DiskKernelParams<T> {
        &self.params
    }

    pub fn set(&self) -> &'a CircleSet<T> {
        self.set
    }

    pub fn measure(&self) -> &'a DoublingMeasure<T> {
        self.mu
    }

    pub fn jet(&self) -> &'a Jet<Complex<T>> {
        self.jet
    }

    fn check_region(&self, z: Complex<T>) -> Result<()> {
        let r = self.certificate.radius;
        if !(z.norm() <= r * (T::one() + T::epsilon())) {
            return Err(Error::Precondition(format!(
                "|z| = {} lies outside the certified disk of radius {r}",
                z.norm()
            )));
        }
        Ok(())
    }

    fn sums<R: Ring<Complex<T>>>(&self, z: &R) -> (R, R) {
        let one = Complex::new(T::one(), T::zero());
        let mut num = z.lift(Complex::new(T::zero(), T::zero()));
        let mut den = num.clone();
        for (&t, &w) in self.mu.support().iter().zip(self.mu.weights()) {
            let zeta = self.set.coordinate(t);
            let tau = z.clone().scale(-zeta.conj()).shift(one);
            let k = tau.powf(-self.params.q).scale(Complex::from_real(w));
            let taylor = self.jet.taylor_at(t, &[z.clone().shift(-zeta)]);
            num = num + k.clone() * taylor;
            den = den + k;
        }
        (num, den)
    }

    pub fn h(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_region(z)?;
        Ok(kernel_sum(self.set, self.mu, self.params.q, &z))
    }

    pub fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_region(z)?;
        let (num, den) = self.sums(&z);
        Ok(num / den)
    }

    /// `[F(z), F'(z), ..., F^(m)(z)]` for the extension `F`.
    pub fn derivatives(&self, z: Complex<T>, m: usize) -> Result<Vec<Complex<T>>> {
        self.check_region(z)?;
        let seed = TaylorScalar::seed(&[z], m).pop().expect("one variable");
        let (num, den) = self.sums(&seed);
        let f = num / den;
        Ok((0..=m)
            .map(|k| f.derivative(&MultiIndex::new(vec![k as u32])).expect("within order"))
            .collect())
    }
}

/// `F(z)` for one point, certifying the disk halfway between `|z|` and the
/// circle.
pub fn extend_ni<T: Real>(
    jet: &Jet<Complex<T>>,
    set: &CircleSet<T>,
    mu: &DoublingMeasure<T>,
    params: DiskKernelParams<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    let r = z.norm();
    if !(r < T::one()) {
        return Err(Error::Precondition(format!("needs |z| < 1, got {r}")));
    }
    let radius = (r + T::one()) / T::lit(2.0);
    DiskExtension::new(jet, set, mu, params, radius)?.value(z)
}

/// Smallest `|h_q|` on a polar grid inside `radius`.
fn locate_min<T: Real>(set: &CircleSet<T>, mu: &DoublingMeasure<T>, q: T, radius: T) -> (Complex<T>, T) {
    let mut best = (Complex::new(T::zero(), T::zero()), T::infinity());
    for i in 0..=64 {
        let r = radius * T::from_count(i) / T::lit(64.0);
        for k in 0..256 {
            let z = Complex::from_polar(r, T::TAU() * T::from_count(k) / T::lit(256.0));
            let m = kernel_sum(set, mu, q, &z).norm();
            if m < best.1 {
                best = (z, m);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests;
