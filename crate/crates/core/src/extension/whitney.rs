//! Classical Whitney extension over a dyadic cube decomposition of the
//! complement, used as a baseline for the kernel operator.
//!
//! Cubes are the maximal dyadic cubes `Q` with `diam Q <= d(Q, E)`, so
//! `d(Q, E) < 4 diam Q` as well. Each carries a tensor bump equal to 1 on
//! `Q` and vanishing off its 9/8 dilate; the bumps are normalised into a
//! partition of unity and `F = sum phi_Q T_{t_Q} f` with `t_Q` the atom
//! nearest the centre of `Q`.

use crate::error::Result;
use crate::geometry::{CompactSetSample, Point};
use crate::jets::{Jet, MultiIndex};
use crate::scalar::Real;

use super::window::transition;

#[derive(Clone, Debug, PartialEq)]
pub struct WhitneyEval<T> {
    pub value: T,
    /// `sum phi_Q(x)`; 1 up to rounding off `E`.
    pub weight_sum: T,
    /// Cubes whose bump is non-zero at `x`.
    pub cubes: usize,
}

fn bump<T: Real>(u: T) -> T {
    transition((T::lit(1.125) - u.abs()) * T::lit(8.0))
}

struct Cube<T> {
    lo: Vec<T>,
    side: T,
}

impl<T: Real> Cube<T> {
    fn at(level: i32, idx: &[i64]) -> Self {
        let side = T::lit(2.0).powi(-level);
        Self {
            lo: idx.iter().map(|&i| T::lit(i as f64) * side).collect(),
            side,
        }
    }

    fn hi(&self) -> Vec<T> {
        self.lo.iter().map(|&l| l + self.side).collect()
    }

    fn center(&self) -> Vec<T> {
        let h = self.side / T::lit(2.0);
        self.lo.iter().map(|&l| l + h).collect()
    }

    fn diameter(&self) -> T {
        self.side * T::from_count(self.lo.len()).sqrt()
    }
}

fn is_whitney<T: Real>(set: &CompactSetSample<T>, level: i32, idx: &[i64]) -> bool {
    let q = Cube::<T>::at(level, idx);
    if !(q.diameter() <= set.index().box_distance(&q.lo, &q.hi())) {
        return false;
    }
    let pidx: Vec<i64> = idx.iter().map(|&i| i.div_euclid(2)).collect();
    let p = Cube::<T>::at(level - 1, &pidx);
    !(p.diameter() <= set.index().box_distance(&p.lo, &p.hi()))
}

pub fn whitney_baseline<T: Real>(jet: &Jet<T>, set: &CompactSetSample<T>, x: &Point<T>) -> Result<WhitneyEval<T>> {
    let (nearest, d) = set.nearest(x)?;
    let zero = MultiIndex::zero(set.dim());
    if d == T::zero() {
        return Ok(WhitneyEval {
            value: jet.component(&zero).map_or(T::zero(), |c| c[nearest]),
            weight_sum: T::one(),
            cubes: 0,
        });
    }
    let n = set.dim();
    let rn = T::from_count(n).sqrt();
    // Cubes touching x have d(x, E) / 5.2 <= diam Q <= 16/15 d(x, E); the
    // scanned range is wider.
    let fine = (-(d / (T::lit(8.0) * rn)).log2()).ceil().to_i32().unwrap_or(0);
    let coarse = (-(T::lit(2.0) * d / rn).log2()).floor().to_i32().unwrap_or(0);
    let mut psi_sum = T::zero();
    let mut acc = T::zero();
    let mut cubes = 0;
    let mut weights = Vec::new();
    for level in coarse..=fine {
        let side = T::lit(2.0).powi(-level);
        let pad = side / T::lit(16.0);
        let ranges: Vec<(i64, i64)> = x
            .coords()
            .iter()
            .map(|&c| {
                let lo = ((c - side - pad) / side).floor().to_i64().unwrap_or(0);
                let hi = ((c + pad) / side).floor().to_i64().unwrap_or(0);
                (lo, hi)
            })
            .collect();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'cubes: loop {
            let cube = Cube::<T>::at(level, &idx);
            let half = cube.side / T::lit(2.0);
            let psi: T = cube
                .center()
                .iter()
                .zip(x.coords())
                .map(|(c, xc)| bump((*xc - *c) / half))
                .fold(T::one(), |a, b| a * b);
            if psi > T::zero() && is_whitney(set, level, &idx) {
                let centre = Point::new(cube.center())?;
                let (t, _) = set.nearest(&centre)?;
                acc += psi * jet.taylor(set, t, x);
                psi_sum += psi;
                weights.push(psi);
                cubes += 1;
            }
            for k in 0..n {
                if idx[k] < ranges[k].1 {
                    idx[k] += 1;
                    continue 'cubes;
                }
                idx[k] = ranges[k].0;
            }
            break;
        }
    }
    let weight_sum = weights.iter().map(|&w| w / psi_sum).sum();
    Ok(WhitneyEval {
        value: acc / psi_sum,
        weight_sum,
        cubes,
    })
}
