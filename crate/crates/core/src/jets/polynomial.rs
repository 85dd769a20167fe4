use crate::error::{Error, Result};
use crate::geometry::CompactSetSample;
use crate::scalar::Real;

use super::{Jet, MultiIndex};

/// Real polynomial `sum c_k x^k` in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    n: usize,
    terms: Vec<(T, MultiIndex)>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(n: usize, terms: Vec<(T, MultiIndex)>) -> Result<Self> {
        if let Some((_, k)) = terms.iter().find(|(_, k)| k.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: k.dim(),
            });
        }
        Ok(Self { n, terms })
    }

    /// `c[0] + c[1] x + c[2] x^2 + ...`
    pub fn univariate(coeffs: Vec<T>) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (c, MultiIndex::new(vec![k as u32])))
            .collect();
        Self { n: 1, terms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(c, _)| *c != T::zero())
            .map(|(_, k)| k.order())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.terms.iter().map(|(c, k)| *c * k.monomial(x)).sum()
    }

    /// `D^j` of the polynomial.
    pub fn derivative(&self, j: &MultiIndex) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(c, k)| {
                let rest = k.checked_sub(j)?;
                // D^j x^k = k!/(k-j)! x^(k-j)
                Some((*c * k.factorial::<T>() / rest.factorial::<T>(), rest))
            })
            .collect();
        Self { n: self.n, terms }
    }

    pub fn derivative_at(&self, x: &[T], j: &MultiIndex) -> T {
        self.derivative(j).eval(x)
    }

    /// The jet `{D^j P restricted to E : |j| <= alpha}`.
    pub fn induce(&self, set: &CompactSetSample<T>, alpha: T) -> Result<Jet<T>> {
        if set.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: set.dim(),
            });
        }
        Jet::induce(self.n, alpha, set.len(), |a, j| {
            Some(self.derivative_at(set.atom(a).coords(), j))
        })
    }
}
