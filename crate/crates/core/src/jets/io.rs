use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{max_order, Jet, MultiIndex};

const MAGIC: &str = "# whitney-ext jet";

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl<T: Real> Jet<T> {
    /// Header (dimension, order, atom count, multi-indices) followed by one
    /// row of component values per atom, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "dimension {}", self.dim());
        let _ = writeln!(out, "alpha {}", self.alpha());
        let _ = writeln!(out, "atoms {}", self.atom_count());
        let idx: Vec<String> = self.indices().iter().map(|j| j.to_string()).collect();
        let _ = writeln!(out, "indices {}", idx.join(" "));
        for a in 0..self.atom_count() {
            let row: Vec<String> = self
                .components()
                .iter()
                .map(|c| format!("{:.16e}", c[a].as_f64()))
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            _ => return Err(bad(1, "missing jet header")),
        }
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (i, l) = lines.next().ok_or_else(|| bad(0, format!("missing `{key}`")))?;
            let rest = l
                .trim()
                .strip_prefix(key)
                .ok_or_else(|| bad(i + 1, format!("expected `{key}`")))?;
            Ok((i + 1, rest.trim().to_string()))
        };
        let (ln, v) = field("dimension")?;
        let n: usize = v.parse().map_err(|_| bad(ln, "bad dimension"))?;
        let (ln, v) = field("alpha")?;
        let alpha: f64 = v.parse().map_err(|_| bad(ln, "bad alpha"))?;
        let (ln, v) = field("atoms")?;
        let atoms: usize = v.parse().map_err(|_| bad(ln, "bad atom count"))?;
        let (ln, v) = field("indices")?;
        let listed = v
            .split_whitespace()
            .map(MultiIndex::parse)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad(ln, "bad multi-index"))?;
        let expected = MultiIndex::all_up_to(n, max_order(alpha));
        if listed != expected {
            return Err(bad(ln, "multi-index list does not match dimension and order"));
        }
        let mut values = vec![Vec::with_capacity(atoms); listed.len()];
        let mut rows = 0;
        for (i, l) in lines {
            if l.trim().is_empty() {
                continue;
            }
            let vals: Vec<&str> = l.split_whitespace().collect();
            if vals.len() != listed.len() {
                return Err(bad(i + 1, format!("expected {} values", listed.len())));
            }
            for (c, s) in vals.iter().enumerate() {
                let x: f64 = s.parse().map_err(|_| bad(i + 1, format!("bad value `{s}`")))?;
                values[c].push(T::lit(x));
            }
            rows += 1;
        }
        if rows != atoms {
            return Err(bad(0, format!("header says {atoms} atoms, found {rows} rows")));
        }
        Jet::from_components(n, T::lit(alpha), values)
    }
}
