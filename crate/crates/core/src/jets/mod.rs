//! Jets on a finite set, their Taylor polynomials, remainders and norms.

mod io;
mod multi_index;
mod norms;
mod polynomial;

pub use multi_index::MultiIndex;
pub use norms::{besov_norm, lip_norm, BesovParams, LambdaSign, NormReport};
pub use polynomial::Polynomial;

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{CompactSetSample, Point};
use crate::scalar::{Field, Real};
use crate::taylor::{Layout, Ring};

/// Largest `|j|` carried by a jet of order `alpha`.
pub fn max_order<T: Real>(alpha: T) -> usize {
    alpha.floor().to_usize().unwrap_or(0)
}

/// A family `{f_j : |j| <= alpha}` sampled on the atoms of a set, in the
/// graded multi-index order of [`MultiIndex::all_up_to`].
#[derive(Clone, Debug)]
pub struct Jet<V: Field> {
    alpha: V::Real,
    layout: Arc<Layout>,
    /// `values[c][atom]` for the `c`-th multi-index.
    values: Vec<Vec<V>>,
}

impl<V: Field> PartialEq for Jet<V>
where
    V: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        self.alpha == other.alpha && self.dim() == other.dim() && self.values == other.values
    }
}

/// Outcome of a two-sided evaluation of the Taylor re-expansion identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reexpansion<T> {
    pub residual: T,
    /// Largest magnitude among the summed terms.
    pub scale: T,
}

impl<T: Real> Reexpansion<T> {
    pub fn relative(&self) -> T {
        if self.scale > T::zero() {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

impl<V: Field> Jet<V> {
    fn check_alpha(alpha: V::Real) -> Result<()> {
        if alpha.is_finite() && alpha >= V::Real::zero() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("jet order must be >= 0, got {alpha}")))
        }
    }

    pub fn from_components(n: usize, alpha: V::Real, values: Vec<Vec<V>>) -> Result<Self> {
        Self::check_alpha(alpha)?;
        let layout = Layout::shared(n, max_order(alpha));
        if values.len() != layout.len() {
            return Err(Error::InvalidParameter(format!(
                "order {alpha} in dimension {n} needs {} components, got {}",
                layout.len(),
                values.len()
            )));
        }
        let atoms = values[0].len();
        for v in &values {
            if v.len() != atoms {
                return Err(Error::InvalidParameter("component lengths differ".into()));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            alpha,
            layout,
            values,
        })
    }

    pub fn zeros(n: usize, alpha: V::Real, atoms: usize) -> Self {
        let layout = Layout::shared(n, max_order(alpha));
        let values = vec![vec![V::zero(); atoms]; layout.len()];
        Self {
            alpha,
            layout,
            values,
        }
    }

    /// `f_0 = c`, every higher component zero.
    pub fn constant(n: usize, alpha: V::Real, atoms: usize, c: V) -> Self {
        let mut j = Self::zeros(n, alpha, atoms);
        j.values[0].iter_mut().for_each(|v| *v = c);
        j
    }

    /// `f_j(atom) = deriv(atom, j)` for every `|j| <= alpha`.
    pub fn induce<D>(n: usize, alpha: V::Real, atoms: usize, deriv: D) -> Result<Self>
    where
        D: Fn(usize, &MultiIndex) -> Option<V>,
    {
        Self::check_alpha(alpha)?;
        let layout = Layout::shared(n, max_order(alpha));
        let mut values = Vec::with_capacity(layout.len());
        for j in layout.exponents() {
            let mut col = Vec::with_capacity(atoms);
            for a in 0..atoms {
                let v = deriv(a, j).ok_or_else(|| Error::MissingDerivative(j.to_string()))?;
                col.push(v);
            }
            values.push(col);
        }
        Self::from_components(n, alpha, values)
    }

    pub fn dim(&self) -> usize {
        self.layout.vars()
    }

    pub fn alpha(&self) -> V::Real {
        self.alpha
    }

    pub fn max_order(&self) -> usize {
        self.layout.order()
    }

    pub fn atom_count(&self) -> usize {
        self.values[0].len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        self.layout.exponents()
    }

    pub fn components(&self) -> &[Vec<V>] {
        &self.values
    }

    pub fn position(&self, j: &MultiIndex) -> Option<usize> {
        self.layout.position(j)
    }

    pub fn component(&self, j: &MultiIndex) -> Option<&[V]> {
        self.position(j).map(|c| self.values[c].as_slice())
    }

    pub fn scaled(&self, s: V) -> Self {
        let mut out = self.clone();
        for col in &mut out.values {
            col.iter_mut().for_each(|v| *v *= s);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim()
            || self.max_order() != other.max_order()
            || self.atom_count() != other.atom_count()
        {
            return Err(Error::InvalidParameter("jets have different shapes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += *y);
        }
        Ok(out)
    }

    /// Keeps only the listed atoms, in the given order.
    pub fn select_atoms(&self, atoms: &[usize]) -> Self {
        let values = self
            .values
            .iter()
            .map(|col| atoms.iter().map(|&a| col[a]).collect())
            .collect();
        Self {
            alpha: self.alpha,
            layout: self.layout.clone(),
            values,
        }
    }

    /// `(f_k) -> (f_{k+j})`, of order `alpha - |j|`. Past the order this is
    /// the zero jet of order 0.
    pub fn derive(&self, j: &MultiIndex) -> Self {
        let n = self.dim();
        let m = self.max_order();
        if j.order() > m {
            return Self::zeros(n, V::Real::zero(), self.atom_count());
        }
        let alpha = self.alpha - V::Real::from_count(j.order());
        let layout = Layout::shared(n, m - j.order());
        let values = layout
            .exponents()
            .iter()
            .map(|k| self.values[self.layout.position(&k.add(j)).expect("index in range")].clone())
            .collect();
        Self {
            alpha,
            layout,
            values,
        }
    }

    /// `T_y f` at displacement `w = x - y`: `sum_k f_k(y) w^k / k!`.
    pub fn taylor_at<R: Ring<V>>(&self, atom: usize, w: &[R]) -> R {
        self.taylor_derived(atom, &MultiIndex::zero(self.dim()), w)
    }

    /// `T^{alpha-|j|}_y (D~^j f)` at displacement `w`, which is also
    /// `D^j_x T^alpha_y f(x)`.
    pub fn taylor_derived<R: Ring<V>>(&self, atom: usize, j: &MultiIndex, w: &[R]) -> R {
        let m = self.max_order();
        let zero = w[0].lift(V::zero());
        if j.order() > m {
            return zero;
        }
        let top = m - j.order();
        // pw[d][e] = w_d^e / e!
        let pw: Vec<Vec<R>> = w
            .iter()
            .map(|wd| {
                let mut col = Vec::with_capacity(top + 1);
                col.push(wd.lift(V::one()));
                for e in 1..=top {
                    let inv = V::from_real(V::Real::one() / V::Real::from_count(e));
                    let next = (col[e - 1].clone() * wd.clone()).scale(inv);
                    col.push(next);
                }
                col
            })
            .collect();
        let mut acc = zero;
        let shifted = j.order() > 0;
        for (i, k) in self.layout.exponents().iter().enumerate() {
            if k.order() > top {
                break;
            }
            let pos = if shifted {
                self.layout.position(&k.add(j)).expect("index in range")
            } else {
                i
            };
            let c = self.values[pos][atom];
            if c == V::zero() {
                continue;
            }
            let mut mono: Option<R> = None;
            for (d, &e) in k.entries().iter().enumerate() {
                if e > 0 {
                    let f = pw[d][e as usize].clone();
                    mono = Some(match mono {
                        None => f,
                        Some(m) => m * f,
                    });
                }
            }
            acc = match mono {
                None => acc.shift(c),
                Some(m) => acc + m.scale(c),
            };
        }
        acc
    }
}

impl<T: Real> Jet<T> {
    /// `T^alpha_y f(x)` with `y` an atom of `set`.
    pub fn taylor(&self, set: &CompactSetSample<T>, y: usize, x: &Point<T>) -> T {
        self.taylor_at(y, &x.sub(set.atom(y)))
    }

    /// `Delta_j(y, x) = f_j(x) - T^{alpha-|j|}_y (D~^j f)(x)` for atoms `y`, `x`.
    pub fn delta(&self, set: &CompactSetSample<T>, y: usize, x: usize, j: &MultiIndex) -> T {
        let fj = self.component(j).map(|c| c[x]).unwrap_or_else(T::zero);
        fj - self.taylor_derived(y, j, &set.atom(x).sub(set.atom(y)))
    }

    /// Evaluates both sides of
    /// `T_t f(x) = sum_l (x-y)^l / l! T^{alpha-|l|}_t (D~^l f)(y)`.
    pub fn reexpand_check(
        &self,
        set: &CompactSetSample<T>,
        t: usize,
        y: &Point<T>,
        x: &Point<T>,
    ) -> Reexpansion<T> {
        let lhs = self.taylor(set, t, x);
        let xy = x.sub(y);
        let yt = y.sub(set.atom(t));
        let mut rhs = T::zero();
        let mut scale = lhs.abs();
        for l in self.indices() {
            let term = l.monomial(&xy) / l.factorial::<T>() * self.taylor_derived(t, l, &yt);
            scale = scale.max(term.abs());
            rhs += term;
        }
        Reexpansion {
            residual: (lhs - rhs).abs(),
            scale,
        }
    }
}
