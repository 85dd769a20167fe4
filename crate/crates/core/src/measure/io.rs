use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::CompactSetSample;
use crate::scalar::Real;

use super::DoublingMeasure;

const MAGIC: &str = "# whitney-ext measure";

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl<T: Real> DoublingMeasure<T> {
    /// Header plus one `x1 .. xn weight` row per supported atom, 17
    /// significant digits so weights survive a round trip exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "dimension {}", self.dim());
        let _ = writeln!(out, "depth {}", self.depth);
        let _ = writeln!(out, "atoms {}", self.support.len());
        let _ = writeln!(out, "resolution {:.16e}", self.resolution.as_f64());
        for (p, w) in self.points.iter().zip(&self.weights) {
            let mut row: Vec<String> = p.coords().iter().map(|c| format!("{:.16e}", c.as_f64())).collect();
            row.push(format!("{:.16e}", w.as_f64()));
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Reads a measure file and attaches every row to the atom of `set` at
    /// exactly that position.
    pub fn parse_on(text: &str, set: &CompactSetSample<T>) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            _ => return Err(bad(1, "missing measure header")),
        }
        let mut header = Vec::new();
        for key in ["dimension", "depth", "atoms", "resolution"] {
            let (i, l) = lines.next().ok_or_else(|| bad(0, format!("missing `{key}`")))?;
            let v = l
                .trim()
                .strip_prefix(key)
                .ok_or_else(|| bad(i + 1, format!("expected `{key}`")))?
                .trim()
                .to_string();
            header.push((i + 1, v));
        }
        let n: usize = header[0].1.parse().map_err(|_| bad(header[0].0, "bad dimension"))?;
        let depth: usize = header[1].1.parse().map_err(|_| bad(header[1].0, "bad depth"))?;
        let count: usize = header[2].1.parse().map_err(|_| bad(header[2].0, "bad atom count"))?;
        if n != set.dim() {
            return Err(Error::DimensionMismatch {
                expected: set.dim(),
                got: n,
            });
        }
        let mut weights = vec![T::zero(); set.len()];
        let mut rows = 0;
        for (i, l) in lines {
            if l.trim().is_empty() {
                continue;
            }
            let vals = l
                .split_whitespace()
                .map(|s| s.parse::<f64>().map(T::lit))
                .collect::<std::result::Result<Vec<T>, _>>()
                .map_err(|e| bad(i + 1, e.to_string()))?;
            if vals.len() != n + 1 {
                return Err(bad(i + 1, format!("expected {} columns", n + 1)));
            }
            let p = crate::geometry::Point::new(vals[..n].to_vec()).map_err(|e| bad(i + 1, e.to_string()))?;
            let a = set
                .atom_at(&p)
                .ok_or_else(|| bad(i + 1, "weighted point is not an atom of the set"))?;
            weights[a] += vals[n];
            rows += 1;
        }
        if rows != count {
            return Err(bad(0, format!("header says {count} atoms, found {rows} rows")));
        }
        let mut m = Self::from_weights(set, weights)?;
        m.depth = depth;
        Ok(m)
    }

    pub fn load_on(path: &std::path::Path, set: &CompactSetSample<T>) -> Result<Self> {
        Self::parse_on(&std::fs::read_to_string(path)?, set)
    }
}
