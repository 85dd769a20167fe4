//! Points, metrics and finite samples of compact sets.

mod kdtree;
mod set;

pub use kdtree::KdTree;
pub use set::{generate_set, CompactSetSample, Generator, SetKind, Similarity};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("a point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    /// Skips validation; callers guarantee finite, non-empty input.
    pub(crate) fn raw(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn origin(n: usize) -> Self {
        Self::raw(vec![T::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn norm(&self) -> T {
        euclid(&self.coords, &vec![T::zero(); self.coords.len()])
    }

    /// `self - other` as a plain vector.
    pub fn sub(&self, other: &Self) -> Vec<T> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| *a - *b)
            .collect()
    }

    pub fn offset(&self, v: &[T]) -> Self {
        Self::raw(self.coords.iter().zip(v).map(|(a, b)| *a + *b).collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    /// `|x - y|`.
    #[default]
    Isotropic,
    /// `|1 - z conj(w)|` for points of the plane read as complex numbers.
    /// Equals `|z - w|` when both lie on the unit circle.
    NonIsotropicDisk,
}

pub fn euclid<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y) * (*x - *y))
        .sum::<T>()
        .sqrt()
}

pub fn distance<T: Real>(x: &Point<T>, y: &Point<T>, metric: Metric) -> Result<T> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    match metric {
        Metric::Isotropic => Ok(euclid(&x.coords, &y.coords)),
        Metric::NonIsotropicDisk => {
            if x.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: x.dim(),
                });
            }
            let (a, b) = (x.coords[0], x.coords[1]);
            let (c, d) = (y.coords[0], y.coords[1]);
            // 1 - (a + ib)(c - id) = (1 - ac - bd) - i(bc - ad)
            let re = T::one() - a * c - b * d;
            let im = b * c - a * d;
            Ok(re.hypot(im))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&p(&[0.0, 0.0]), &p(&[3.0, 4.0]), Metric::Isotropic).unwrap(), 5.0);
        let x = p(&[0.3, -1.2]);
        assert_eq!(distance(&x, &x, Metric::Isotropic).unwrap(), 0.0);
        assert_eq!(distance(&p(&[0.0]), &p(&[0.7]), Metric::Isotropic).unwrap(), 0.7);
        assert!(matches!(
            distance(&p(&[0.0]), &p(&[0.0, 1.0]), Metric::Isotropic),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn disk_metric_is_chordal_on_circle() {
        for k in 0..50 {
            let a = 0.37 * k as f64;
            let b = 1.91 * k as f64 + 0.2;
            let z = p(&[a.cos(), a.sin()]);
            let w = p(&[b.cos(), b.sin()]);
            let ni = distance(&z, &w, Metric::NonIsotropicDisk).unwrap();
            let iso = distance(&z, &w, Metric::Isotropic).unwrap();
            assert!((ni - iso).abs() < 1e-14);
        }
        assert_eq!(
            distance(&p(&[0.0, 0.0]), &p(&[0.6, 0.8]), Metric::NonIsotropicDisk).unwrap(),
            1.0
        );
    }

    #[test]
    fn rejects_bad_points() {
        assert!(Point::<f64>::new(vec![]).is_err());
        assert!(matches!(Point::new(vec![f64::NAN]), Err(Error::NonFinite)));
    }
}
