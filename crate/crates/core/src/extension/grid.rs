//! Rectangular grids of extension values and derivatives.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::jets::MultiIndex;
use crate::scalar::Real;

use super::{windowed_jet_at, Extension};

/// Nodes `origin + i * spacing` for `0 <= i < counts`, enumerated with the
/// first axis slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub origin: Vec<T>,
    pub spacing: Vec<T>,
    pub counts: Vec<usize>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(origin: Vec<T>, spacing: Vec<T>, counts: Vec<usize>) -> Result<Self> {
        let n = origin.len();
        if n == 0 {
            return Err(Error::InvalidParameter("grid needs at least one axis".into()));
        }
        for len in [spacing.len(), counts.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        if spacing.iter().any(|h| !(*h > T::zero() && h.is_finite())) || origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::NonFinite);
        }
        if counts.contains(&0) {
            return Err(Error::InvalidParameter("grid axis with no nodes".into()));
        }
        Ok(Self { origin, spacing, counts })
    }

    /// `counts` nodes per axis spanning `[lo, hi]` inclusive.
    pub fn spanning(lo: Vec<T>, hi: Vec<T>, counts: Vec<usize>) -> Result<Self> {
        let spacing = lo
            .iter()
            .zip(&hi)
            .zip(&counts)
            .map(|((a, b), &c)| if c > 1 { (*b - *a) / T::from_count(c - 1) } else { T::one() })
            .collect();
        Self::new(lo, spacing, counts)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, mut i: usize) -> Point<T> {
        let n = self.dim();
        let mut c = vec![T::zero(); n];
        for k in (0..n).rev() {
            let ik = i % self.counts[k];
            i /= self.counts[k];
            c[k] = self.origin[k] + T::from_count(ik) * self.spacing[k];
        }
        Point::raw(c)
    }

    /// Volume of one grid cell, used as a quadrature weight.
    pub fn cell_volume(&self) -> T {
        self.spacing.iter().copied().fold(T::one(), |a, b| a * b)
    }
}

/// `G(x) = f_a(x)` on `E` and `D^a E(f)(x)` elsewhere, for each column `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid<T> {
    pub spec: GridSpec<T>,
    pub columns: Vec<MultiIndex>,
    /// `rows[node][column]`. Jet components beyond the jet order are NaN.
    pub rows: Vec<Vec<T>>,
    /// The atom a node coincides with, if any.
    pub on_set: Vec<Option<usize>>,
}

/// Evaluates the (optionally windowed) extension and the requested
/// derivatives at every node of `spec`.
pub fn assemble_g<T: Real>(
    ext: &Extension<'_, T>,
    spec: &GridSpec<T>,
    columns: &[MultiIndex],
    window: Option<T>,
) -> Result<FieldGrid<T>> {
    if spec.dim() != ext.set().dim() {
        return Err(Error::DimensionMismatch {
            expected: ext.set().dim(),
            got: spec.dim(),
        });
    }
    let order = columns.iter().map(MultiIndex::order).max().unwrap_or(0);
    if order > ext.max_derivative() {
        return Err(Error::OrderExceeded {
            requested: order,
            max: ext.max_derivative(),
        });
    }
    let jet = ext.jet();
    let rows: Vec<Result<(Vec<T>, Option<usize>)>> = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let x = spec.node(i);
            if let Some(a) = ext.set().atom_at(&x) {
                let phi = window.map_or(T::one(), |r| super::window_weight(x.coords(), r));
                let row = columns
                    .iter()
                    .map(|c| jet.component(c).map_or(T::nan(), |v| v[a] * phi))
                    .collect();
                return Ok((row, Some(a)));
            }
            let t = match window {
                Some(r) => windowed_jet_at(ext, r, &x, order)?,
                None => ext.jet_at(&x, order)?,
            };
            let row = columns.iter().map(|c| t.derivative(c).expect("order checked")).collect();
            Ok((row, None))
        })
        .collect();
    let mut out_rows = Vec::with_capacity(rows.len());
    let mut on_set = Vec::with_capacity(rows.len());
    for r in rows {
        let (row, a) = r?;
        out_rows.push(row);
        on_set.push(a);
    }
    Ok(FieldGrid {
        spec: spec.clone(),
        columns: columns.to_vec(),
        rows: out_rows,
        on_set,
    })
}

const HEADER: &str = "# whitney-ext grid";

impl<T: Real> FieldGrid<T> {
    pub fn to_text(&self) -> String {
        let join = |v: &[T]| v.iter().map(|x| format!("{:.16e}", x.as_f64())).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "{HEADER}");
        let _ = writeln!(s, "dimension {}", self.spec.dim());
        let _ = writeln!(s, "origin {}", join(&self.spec.origin));
        let _ = writeln!(s, "spacing {}", join(&self.spec.spacing));
        let counts: Vec<String> = self.spec.counts.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "counts {}", counts.join(" "));
        let cols: Vec<String> = self.columns.iter().map(|c| format!("d[{c}]")).collect();
        let axes: Vec<String> = (1..=self.spec.dim()).map(|k| format!("x{k}")).collect();
        let _ = writeln!(s, "columns {} on_set {}", axes.join(" "), cols.join(" "));
        for (i, row) in self.rows.iter().enumerate() {
            let x = self.spec.node(i);
            let tag = self.on_set[i].map_or("-".to_string(), |a| a.to_string());
            let _ = writeln!(s, "{} {} {}", join(x.coords()), tag, join(row));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let bad = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let mut field = |name: &str| -> Result<(usize, Vec<String>)> {
            let (i, l) = lines.next().ok_or_else(|| bad(0, "truncated grid header"))?;
            let mut parts = l.split_whitespace();
            if parts.next() != Some(name) {
                return Err(bad(i, &format!("expected `{name}`")));
            }
            Ok((i, parts.map(str::to_string).collect()))
        };
        let num = |i: usize, s: &str| -> Result<T> {
            s.parse::<f64>().map(T::lit).map_err(|_| bad(i, &format!("bad number `{s}`")))
        };
        field("#")?;
        let (i, d) = field("dimension")?;
        let n: usize = d.first().and_then(|s| s.parse().ok()).ok_or_else(|| bad(i, "bad dimension"))?;
        let (i, o) = field("origin")?;
        let origin = o.iter().map(|s| num(i, s)).collect::<Result<Vec<_>>>()?;
        let (i, h) = field("spacing")?;
        let spacing = h.iter().map(|s| num(i, s)).collect::<Result<Vec<_>>>()?;
        let (i, c) = field("counts")?;
        let counts = c
            .iter()
            .map(|s| s.parse::<usize>().map_err(|_| bad(i, "bad count")))
            .collect::<Result<Vec<_>>>()?;
        let (i, cols) = field("columns")?;
        let columns = cols
            .iter()
            .skip(n + 1)
            .map(|s| {
                let inner = s
                    .strip_prefix("d[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| bad(i, "bad column"))?;
                MultiIndex::parse(inner).ok_or_else(|| bad(i, "bad column index"))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = GridSpec::new(origin, spacing, counts)?;
        if spec.dim() != n {
            return Err(bad(i, "dimension disagrees with origin"));
        }
        let mut rows = Vec::new();
        let mut on_set = Vec::new();
        for (i, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != n + 1 + columns.len() {
                return Err(bad(i, "wrong number of fields"));
            }
            on_set.push(match parts[n] {
                "-" => None,
                s => Some(s.parse().map_err(|_| bad(i, "bad atom tag"))?),
            });
            rows.push(parts[n + 1..].iter().map(|s| num(i, s)).collect::<Result<Vec<_>>>()?);
        }
        if rows.len() != spec.len() {
            return Err(bad(0, "row count disagrees with the grid"));
        }
        Ok(Self {
            spec,
            columns,
            rows,
            on_set,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_enumeration() {
        let g = GridSpec::spanning(vec![0.0, -1.0], vec![1.0, 1.0], vec![3, 2]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.node(0).coords(), &[0.0, -1.0]);
        assert_eq!(g.node(1).coords(), &[0.0, 1.0]);
        assert_eq!(g.node(5).coords(), &[1.0, 1.0]);
        assert!((g.cell_volume() - 1.0_f64).abs() < 1e-15);
        assert!(GridSpec::new(vec![0.0], vec![0.0], vec![2]).is_err());
    }
}
