use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{CompactSetSample, Point};
use crate::measure::{build_measure, DoublingMeasure};
use crate::scalar::Real;

/// A point `e^{i theta}` of the unit circle, `theta` in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirclePoint<T> {
    theta: T,
}

impl<T: Real> CirclePoint<T> {
    pub fn new(theta: T) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut t = theta % T::TAU();
        if t < T::zero() {
            t += T::TAU();
        }
        if t >= T::TAU() {
            t = T::zero();
        }
        Ok(Self { theta: t })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn coordinate(&self) -> Complex<T> {
        Complex::new(self.theta.cos(), self.theta.sin())
    }
}

/// A finite subset of the circle, kept both as angles and as planar atoms.
#[derive(Clone, Debug)]
pub struct CircleSet<T> {
    points: Vec<CirclePoint<T>>,
    planar: CompactSetSample<T>,
}

impl<T: Real> CircleSet<T> {
    pub fn from_angles(angles: &[T]) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::EmptySet);
        }
        let points = angles.iter().map(|&a| CirclePoint::new(a)).collect::<Result<Vec<_>>>()?;
        let atoms = points
            .iter()
            .map(|p| {
                let c = p.coordinate();
                Point::new(vec![c.re, c.im])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            points,
            planar: CompactSetSample::new(atoms)?,
        })
    }

    /// Reads planar atoms lying on the unit circle (to 1e-9).
    pub fn from_planar(set: &CompactSetSample<T>) -> Result<Self> {
        if set.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: set.dim(),
            });
        }
        let mut points = Vec::with_capacity(set.len());
        for a in set.atoms() {
            if (a.norm() - T::one()).abs() > T::lit(1e-9) {
                return Err(Error::InvalidParameter(format!("atom {:?} is off the unit circle", a.coords())));
            }
            points.push(CirclePoint::new(a.coords()[1].atan2(a.coords()[0]))?);
        }
        Ok(Self {
            points,
            planar: set.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[CirclePoint<T>] {
        &self.points
    }

    pub fn coordinate(&self, i: usize) -> Complex<T> {
        let a = self.planar.atom(i).coords();
        Complex::new(a[0], a[1])
    }

    pub fn planar(&self) -> &CompactSetSample<T> {
        &self.planar
    }

    /// Nearest atom to `z` and `d(z, E)`.
    pub fn nearest(&self, z: Complex<T>) -> Result<(usize, T)> {
        self.planar.nearest(&Point::new(vec![z.re, z.im])?)
    }

    /// Equal-split measure built on the angles and carried to the circle.
    pub fn measure(&self, depth: usize) -> Result<DoublingMeasure<T>> {
        let line = CompactSetSample::new(
            self.points
                .iter()
                .map(|p| Point::new(vec![p.theta()]))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let mu = build_measure(&line, depth)?;
        let weights = (0..line.len()).map(|i| mu.weight_of(i)).collect();
        DoublingMeasure::from_weights(&self.planar, weights)
    }

    pub fn to_text(&self) -> String {
        self.points.iter().map(|p| format!("{}\n", p.theta().as_f64())).collect()
    }

    /// One angle in radians per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut angles = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let v: f64 = body.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad angle `{body}`"),
            })?;
            angles.push(T::lit(v));
        }
        Self::from_angles(&angles)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
