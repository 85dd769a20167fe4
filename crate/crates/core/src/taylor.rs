//! Truncated multivariate Taylor arithmetic.
//!
//! A [`TaylorScalar`] stores the coefficients `c_b` of `f(x + h) = sum_b c_b h^b`
//! for every multi-index `|b| <= order`, so that `D^b f(x) = b! c_b`. Seeding
//! the coordinates of an evaluation point with [`TaylorScalar::variable`] and
//! running any [`Ring`]-generic computation yields all partial derivatives of
//! the result up to the truncation order.

use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;
use smallvec::SmallVec;

use crate::jets::MultiIndex;
use crate::scalar::{Field, Real};

/// Monomial layout shared by every [`TaylorScalar`] of the same shape.
#[derive(Debug)]
pub struct Layout {
    vars: usize,
    order: usize,
    exponents: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// `(i, j, k)` with `exponents[i] + exponents[j] == exponents[k]`.
    products: Vec<(u32, u32, u32)>,
}

type LayoutCache = HashMap<(usize, usize), Arc<Layout>>;

impl Layout {
    fn build(vars: usize, order: usize) -> Self {
        let exponents = MultiIndex::all_up_to(vars, order);
        let lookup: HashMap<MultiIndex, usize> = exponents
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in exponents.iter().enumerate() {
            for (j, b) in exponents.iter().enumerate() {
                if a.order() + b.order() <= order {
                    let k = lookup[&a.add(b)];
                    products.push((i as u32, j as u32, k as u32));
                }
            }
        }
        Self {
            vars,
            order,
            exponents,
            lookup,
            products,
        }
    }

    /// Shared layout for `vars` variables truncated at total degree `order`.
    pub fn shared(vars: usize, order: usize) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<LayoutCache>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry((vars, order))
            .or_insert_with(|| Arc::new(Layout::build(vars, order)))
            .clone()
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[MultiIndex] {
        &self.exponents
    }

    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.lookup.get(m).copied()
    }
}

type Coeffs<F> = SmallVec<[F; 10]>;

/// Element of the truncated polynomial ring in `vars` variables.
#[derive(Clone, Debug)]
pub struct TaylorScalar<F: Field> {
    layout: Arc<Layout>,
    coeffs: Coeffs<F>,
}

impl<F: Field> TaylorScalar<F> {
    pub fn constant(layout: &Arc<Layout>, c: F) -> Self {
        let mut coeffs: Coeffs<F> = SmallVec::from_elem(F::zero(), layout.len());
        coeffs[0] = c;
        Self {
            layout: layout.clone(),
            coeffs,
        }
    }

    /// The coordinate `value + h_var`.
    pub fn variable(layout: &Arc<Layout>, var: usize, value: F) -> Self {
        assert!(var < layout.vars, "variable index out of range");
        let mut s = Self::constant(layout, value);
        if layout.order >= 1 {
            let pos = layout
                .position(&MultiIndex::unit(layout.vars, var))
                .expect("unit monomial present for order >= 1");
            s.coeffs[pos] = F::one();
        }
        s
    }

    /// Seeds every coordinate of a point.
    pub fn seed(point: &[F], order: usize) -> Vec<Self> {
        let layout = Layout::shared(point.len(), order);
        point
            .iter()
            .enumerate()
            .map(|(k, &v)| Self::variable(&layout, k, v))
            .collect()
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn coefficients(&self) -> &[F] {
        &self.coeffs
    }

    pub fn value(&self) -> F {
        self.coeffs[0]
    }

    /// Taylor coefficient `c_b`; zero when `|b|` exceeds the truncation order.
    pub fn coefficient(&self, b: &MultiIndex) -> F {
        self.layout
            .position(b)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(F::zero)
    }

    /// Partial derivative `D^b` at the expansion point, or `None` past the
    /// truncation order.
    pub fn derivative(&self, b: &MultiIndex) -> Option<F> {
        let i = self.layout.position(b)?;
        Some(self.coeffs[i] * F::from_real(b.factorial::<F::Real>()))
    }

    fn same_layout(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.layout, &other.layout)
                || (self.layout.vars == other.layout.vars
                    && self.layout.order == other.layout.order),
            "mixed Taylor layouts"
        );
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.same_layout(other);
        let mut out: Coeffs<F> = SmallVec::from_elem(F::zero(), self.coeffs.len());
        for &(i, j, k) in &self.layout.products {
            out[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Self {
            layout: self.layout.clone(),
            coeffs: out,
        }
    }

    /// Evaluates `sum_k series[k] g^k` where `g` is the non-constant part.
    fn compose(&self, series: &[F]) -> Self {
        let mut g = self.clone();
        g.coeffs[0] = F::zero();
        let mut out = Self::constant(&self.layout, series[0]);
        let mut power = Self::constant(&self.layout, F::one());
        for &s in series.iter().skip(1) {
            power = power.mul_ref(&g);
            for (o, p) in out.coeffs.iter_mut().zip(power.coeffs.iter()) {
                *o += s * *p;
            }
        }
        out
    }

    fn powf_impl(&self, p: F::Real) -> Self {
        let c0 = self.coeffs[0];
        let order = self.layout.order;
        // (c0 + g)^p = c0^p * sum_k binom(p, k) (g / c0)^k
        let base = Field::powf(c0, p);
        let inv = F::one() / c0;
        let mut series = Vec::with_capacity(order + 1);
        let mut binom = F::Real::one();
        let mut inv_pow = F::one();
        series.push(base);
        for k in 1..=order {
            let kr = F::Real::from_count(k);
            binom = binom * (p - kr + F::Real::one()) / kr;
            inv_pow *= inv;
            series.push(base * inv_pow * F::from_real(binom));
        }
        self.compose(&series)
    }

    fn recip_impl(&self) -> Self {
        let inv = F::one() / self.coeffs[0];
        let order = self.layout.order;
        let mut series = Vec::with_capacity(order + 1);
        let mut term = inv;
        series.push(term);
        for _ in 1..=order {
            term = -term * inv;
            series.push(term);
        }
        self.compose(&series)
    }

    fn exp_impl(&self) -> Self {
        let base = Field::exp(self.coeffs[0]);
        let order = self.layout.order;
        let mut series = Vec::with_capacity(order + 1);
        let mut term = base;
        series.push(term);
        for k in 1..=order {
            term /= F::from_real(F::Real::from_count(k));
            series.push(term);
        }
        self.compose(&series)
    }
}

impl<F: Field> Add for TaylorScalar<F> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.same_layout(&rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += *b;
        }
        self
    }
}

impl<F: Field> Sub for TaylorScalar<F> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.same_layout(&rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= *b;
        }
        self
    }
}

impl<F: Field> Mul for TaylorScalar<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<F: Field> Div for TaylorScalar<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.mul_ref(&rhs.recip_impl())
    }
}

impl<F: Field> Neg for TaylorScalar<F> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

/// Arithmetic needed by the kernel-weighted evaluations, implemented both by
/// plain scalars and by [`TaylorScalar`].
pub trait Ring<F: Field>:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant with the same shape as `self`.
    fn lift(&self, c: F) -> Self;
    fn scale(self, c: F) -> Self;
    fn shift(self, c: F) -> Self;
    fn powf(&self, p: F::Real) -> Self;
    fn recip(&self) -> Self;
    fn exp(&self) -> Self;
    fn value(&self) -> F;
}

impl<F: Field> Ring<F> for F {
    #[inline]
    fn lift(&self, c: F) -> Self {
        c
    }
    #[inline]
    fn scale(self, c: F) -> Self {
        self * c
    }
    #[inline]
    fn shift(self, c: F) -> Self {
        self + c
    }
    #[inline]
    fn powf(&self, p: F::Real) -> Self {
        Field::powf(*self, p)
    }
    #[inline]
    fn recip(&self) -> Self {
        F::one() / *self
    }
    #[inline]
    fn exp(&self) -> Self {
        Field::exp(*self)
    }
    #[inline]
    fn value(&self) -> F {
        *self
    }
}

impl<F: Field> Ring<F> for TaylorScalar<F> {
    fn lift(&self, c: F) -> Self {
        Self::constant(&self.layout, c)
    }
    fn scale(mut self, c: F) -> Self {
        for a in self.coeffs.iter_mut() {
            *a *= c;
        }
        self
    }
    fn shift(mut self, c: F) -> Self {
        self.coeffs[0] += c;
        self
    }
    fn powf(&self, p: F::Real) -> Self {
        self.powf_impl(p)
    }
    fn recip(&self) -> Self {
        self.recip_impl()
    }
    fn exp(&self) -> Self {
        self.exp_impl()
    }
    fn value(&self) -> F {
        self.coeffs[0]
    }
}

/// Real-valued helper: `sqrt` expressed through [`Ring::powf`].
pub fn ring_sqrt<T: Real, R: Ring<T>>(x: &R) -> R {
    x.powf(T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn layout_counts_monomials() {
        assert_eq!(Layout::shared(1, 3).len(), 4);
        assert_eq!(Layout::shared(2, 3).len(), 10);
        assert_eq!(Layout::shared(3, 2).len(), 10);
    }

    #[test]
    fn monomial_derivatives_match_symbolic() {
        // f(x, y) = x^3 y^2 at (1.3, -0.7), order 5.
        let v = TaylorScalar::<f64>::seed(&[1.3, -0.7], 5);
        let x = v[0].clone();
        let y = v[1].clone();
        let f = x.clone() * x.clone() * x * y.clone() * y;
        let (a, b) = (1.3_f64, -0.7_f64);
        let cases: [(&[u32], f64); 6] = [
            (&[0, 0], a.powi(3) * b * b),
            (&[1, 0], 3.0 * a * a * b * b),
            (&[0, 1], 2.0 * a.powi(3) * b),
            (&[2, 1], 12.0 * a * b),
            (&[3, 2], 12.0),
            (&[1, 1], 6.0 * a * a * b),
        ];
        for (e, want) in cases {
            let got = f.derivative(&mi(e)).unwrap();
            assert!((got - want).abs() < 1e-13, "{e:?}: {got} vs {want}");
        }
        assert!(f.derivative(&mi(&[4, 2])).is_none());
    }

    #[test]
    fn power_and_reciprocal_match_closed_forms() {
        // g(x) = (1 + x^2)^(-1.75) at x = 0.4, derivatives to order 4.
        let x = TaylorScalar::<f64>::seed(&[0.4], 4).remove(0);
        let g = (x.clone() * x.clone()).shift(1.0).powf(-1.75);
        let u = 1.0 + 0.16_f64;
        let p = -1.75_f64;
        let d1 = p * u.powf(p - 1.0) * 0.8;
        let d2 = p * (p - 1.0) * u.powf(p - 2.0) * 0.64 + p * u.powf(p - 1.0) * 2.0;
        assert!((g.value() - u.powf(p)).abs() < 1e-14);
        assert!((g.derivative(&mi(&[1])).unwrap() - d1).abs() < 1e-13);
        assert!((g.derivative(&mi(&[2])).unwrap() - d2).abs() < 1e-13);

        let r = x.clone().shift(2.0).recip();
        // 1/(2.4 + h): k-th derivative = (-1)^k k! / 2.4^(k+1)
        for k in 0..=4u32 {
            let want = (-1f64).powi(k as i32)
                * (1..=k).map(f64::from).product::<f64>()
                / 2.4f64.powi(k as i32 + 1);
            let got = r.derivative(&mi(&[k])).unwrap();
            assert!((got - want).abs() < 1e-13 * want.abs().max(1.0));
        }
    }

    #[test]
    fn exp_series() {
        let x = TaylorScalar::<f64>::seed(&[0.3], 5).remove(0);
        let e = Ring::exp(&x.scale(2.0));
        for k in 0..=5u32 {
            let want = 2f64.powi(k as i32) * (0.6f64).exp();
            assert!((e.derivative(&mi(&[k])).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_coefficients_differentiate_holomorphic_powers() {
        // (1 - z c)^(-q) with c = conj(w), derivative order 3.
        let z0 = Complex::new(0.2_f64, -0.3);
        let c = Complex::new(0.6_f64, -0.8);
        let q = 1.5_f64;
        let z = TaylorScalar::seed(&[z0], 3).remove(0);
        let f = z.scale(-c).shift(Complex::new(1.0, 0.0)).powf(-q);
        let base = Complex::new(1.0, 0.0) - z0 * c;
        // d^k/dz^k (1 - cz)^(-q) = q (q+1)...(q+k-1) c^k (1 - cz)^(-q-k)
        let mut rising = 1.0;
        for k in 0..=3u32 {
            let want = Complex::new(rising, 0.0) * c.powu(k) * base.powf(-q - k as f64);
            let got = f.derivative(&mi(&[k])).unwrap();
            assert!((got - want).norm() < 1e-12, "k={k}");
            rising *= q + k as f64;
        }
    }

    #[test]
    fn quotient_matches_product_rule() {
        let v = TaylorScalar::<f64>::seed(&[0.5, 1.5], 3);
        let num = v[0].clone() * v[1].clone();
        let den = v[0].clone().shift(1.0);
        let q = num.clone() / den.clone();
        let back = q * den;
        for (a, b) in back.coefficients().iter().zip(num.coefficients()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
