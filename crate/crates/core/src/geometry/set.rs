use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{euclid, KdTree, Point};

/// `x -> ratio * x + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Similarity<T> {
    pub ratio: T,
    pub offset: Vec<T>,
}

impl<T: Real> Similarity<T> {
    pub fn apply(&self, p: &[T]) -> Vec<T> {
        p.iter()
            .zip(&self.offset)
            .map(|(x, b)| self.ratio * *x + *b)
            .collect()
    }
}

/// Self-similar description: the atoms are the images of `base` under every
/// word of length `depth` in the maps.
///
/// Atoms are stored in word order with the outermost map as the leading
/// digit, so the atoms of any cell `f_{w1} o ... o f_{wl}(K)` form one
/// contiguous index range.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<T> {
    pub maps: Vec<Similarity<T>>,
    pub base: Vec<Point<T>>,
    pub depth: usize,
    /// Bounding box of the attractor.
    pub hull_lo: Vec<T>,
    pub hull_hi: Vec<T>,
    /// Diameter of the attractor.
    pub diameter: T,
}

impl<T: Real> Generator<T> {
    pub fn branching(&self) -> usize {
        self.maps.len()
    }

    /// Atoms under one cell at `level`: `branching^(depth - level) * |base|`.
    pub fn cell_size(&self, level: usize) -> usize {
        self.maps.len().pow((self.depth - level) as u32) * self.base.len()
    }

    /// Image of the hull centre under the maps of `word` (outermost first).
    pub fn cell_center(&self, word: &[usize]) -> Vec<T> {
        let two = T::lit(2.0);
        let mut c: Vec<T> = self
            .hull_lo
            .iter()
            .zip(&self.hull_hi)
            .map(|(a, b)| (*a + *b) / two)
            .collect();
        for &m in word.iter().rev() {
            c = self.maps[m].apply(&c);
        }
        c
    }

    /// Product of ratios along `word`, times the attractor diameter.
    pub fn cell_diameter(&self, word: &[usize]) -> T {
        word.iter()
            .fold(self.diameter, |acc, &m| acc * self.maps[m].ratio.abs())
    }

    fn atoms(&self) -> Vec<Point<T>> {
        let mut level: Vec<Vec<T>> = self.base.iter().map(|p| p.coords().to_vec()).collect();
        for _ in 0..self.depth {
            let mut next = Vec::with_capacity(level.len() * self.maps.len());
            for m in &self.maps {
                next.extend(level.iter().map(|p| m.apply(p)));
            }
            level = next;
        }
        level.into_iter().map(Point::raw).collect()
    }
}

/// Finite atom cloud standing in for a compact set `E`.
#[derive(Clone, Debug)]
pub struct CompactSetSample<T> {
    atoms: Vec<Point<T>>,
    generator: Option<Generator<T>>,
    resolution: T,
    index: KdTree<T>,
}

impl<T: Real> CompactSetSample<T> {
    /// Validates distinctness and dimensions; resolution defaults to half the
    /// largest nearest-neighbour spacing.
    pub fn new(atoms: Vec<Point<T>>) -> Result<Self> {
        let mut s = Self::build(atoms, None, T::zero())?;
        s.resolution = s.half_spacing();
        Ok(s)
    }

    pub fn with_resolution(atoms: Vec<Point<T>>, resolution: T) -> Result<Self> {
        Self::build(atoms, None, resolution)
    }

    pub fn from_generator(generator: Generator<T>) -> Result<Self> {
        let atoms = generator.atoms();
        let resolution = generator.diameter
            * generator
                .maps
                .iter()
                .map(|m| m.ratio.abs())
                .fold(T::zero(), T::max)
                .powi(generator.depth as i32);
        Self::build(atoms, Some(generator), resolution)
    }

    fn build(atoms: Vec<Point<T>>, generator: Option<Generator<T>>, resolution: T) -> Result<Self> {
        let first = atoms.first().ok_or(Error::EmptySet)?;
        let n = first.dim();
        for a in &atoms {
            if a.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: a.dim(),
                });
            }
        }
        let index = KdTree::build(n, atoms.iter().map(|a| a.coords()));
        for (i, a) in atoms.iter().enumerate() {
            let hits = index.within(a.coords(), T::zero());
            if let Some(&j) = hits.iter().find(|&&j| j != i) {
                return Err(Error::DuplicateAtom(i.min(j), i.max(j)));
            }
        }
        Ok(Self {
            atoms,
            generator,
            resolution,
            index,
        })
    }

    fn half_spacing(&self) -> T {
        if self.atoms.len() < 2 {
            return T::zero();
        }
        let mut worst = T::zero();
        for (i, a) in self.atoms.iter().enumerate() {
            let mut best = T::infinity();
            // Nearest other atom: grow the radius until something besides `i` shows up.
            let mut r = T::lit(1e-3);
            loop {
                let hits = self.index.within(a.coords(), r);
                for &j in &hits {
                    if j != i {
                        best = best.min(euclid(a.coords(), self.atoms[j].coords()));
                    }
                }
                if best.is_finite() {
                    break;
                }
                r *= T::lit(4.0);
            }
            worst = worst.max(best);
        }
        worst / T::lit(2.0)
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Point<T>] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Point<T> {
        &self.atoms[i]
    }

    pub fn generator(&self) -> Option<&Generator<T>> {
        self.generator.as_ref()
    }

    pub fn resolution(&self) -> T {
        self.resolution
    }

    pub fn index(&self) -> &KdTree<T> {
        &self.index
    }

    /// Index of the nearest atom and `d(x, E)`; ties go to the lowest index.
    pub fn nearest(&self, x: &Point<T>) -> Result<(usize, T)> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        self.index.nearest(x.coords()).ok_or(Error::EmptySet)
    }

    pub fn nearest_point(&self, x: &Point<T>) -> Result<(Point<T>, T)> {
        let (i, d) = self.nearest(x)?;
        Ok((self.atoms[i].clone(), d))
    }

    pub fn dist_to_set(&self, x: &Point<T>) -> Result<T> {
        Ok(self.nearest(x)?.1)
    }

    /// The atom `x` coincides with, if any.
    pub fn atom_at(&self, x: &Point<T>) -> Option<usize> {
        match self.nearest(x) {
            Ok((i, d)) if d == T::zero() => Some(i),
            _ => None,
        }
    }

    pub fn bbox(&self) -> (Vec<T>, Vec<T>) {
        let n = self.dim();
        let mut lo = vec![T::infinity(); n];
        let mut hi = vec![T::neg_infinity(); n];
        for a in &self.atoms {
            for k in 0..n {
                lo[k] = lo[k].min(a.coords()[k]);
                hi[k] = hi[k].max(a.coords()[k]);
            }
        }
        (lo, hi)
    }

    /// Exact for up to 8192 atoms, bounding-box diagonal beyond.
    pub fn diameter(&self) -> T {
        if self.atoms.len() <= 8192 {
            let mut d = T::zero();
            for i in 0..self.atoms.len() {
                for j in i + 1..self.atoms.len() {
                    d = d.max(euclid(self.atoms[i].coords(), self.atoms[j].coords()));
                }
            }
            d
        } else {
            let (lo, hi) = self.bbox();
            euclid(&lo, &hi)
        }
    }

    /// The same atoms scaled by `s` about the origin.
    pub fn scaled(&self, s: T) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Point::raw(a.coords().iter().map(|c| *c * s).collect()))
            .collect();
        Self::build(atoms, None, self.resolution * s.abs())
    }

    /// One point per line, shortest round-trip decimal.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.atoms {
            let row: Vec<String> = a.coords().iter().map(|c| format!("{c}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut dim = None;
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let coords = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map(T::lit).map_err(|e| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad coordinate `{t}`: {e}"),
                    })
                })
                .collect::<Result<Vec<T>>>()?;
            let n = *dim.get_or_insert(coords.len());
            if coords.len() != n {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected {n} coordinates, found {}", coords.len()),
                });
            }
            atoms.push(Point::new(coords).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?);
        }
        Self::new(atoms)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SetKind {
    Interval,
    Cantor,
    Sierpinski,
    /// Arc of the unit circle between two angles in radians.
    CircleArc { start: f64, end: f64 },
    File(PathBuf),
}

impl FromStr for SetKind {
    type Err = Error;

    /// `interval`, `cantor`, `sierpinski`, `circle`, `arc:a,b`, `file:path`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => return Ok(Self::Interval),
            "cantor" => return Ok(Self::Cantor),
            "sierpinski" => return Ok(Self::Sierpinski),
            "circle" => {
                return Ok(Self::CircleArc {
                    start: 0.0,
                    end: std::f64::consts::TAU,
                })
            }
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("arc:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if let [a, b] = parts.as_slice() {
                if let (Ok(start), Ok(end)) = (a.trim().parse(), b.trim().parse()) {
                    return Ok(Self::CircleArc { start, end });
                }
            }
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(Self::File(PathBuf::from(path)));
        }
        Err(Error::UnknownKind(s.to_string()))
    }
}

pub fn generate_set<T: Real>(kind: &SetKind, depth: usize) -> Result<CompactSetSample<T>> {
    let half = T::lit(0.5);
    match kind {
        SetKind::Interval => {
            let m = 1usize << depth;
            let atoms = (0..=m)
                .map(|i| Point::raw(vec![T::from_count(i) / T::from_count(m)]))
                .collect();
            let res = half / T::from_count(m);
            CompactSetSample::with_resolution(atoms, res)
        }
        SetKind::Cantor => {
            let third = T::one() / T::lit(3.0);
            CompactSetSample::from_generator(Generator {
                maps: vec![
                    Similarity {
                        ratio: third,
                        offset: vec![T::zero()],
                    },
                    Similarity {
                        ratio: third,
                        offset: vec![T::lit(2.0) / T::lit(3.0)],
                    },
                ],
                base: vec![Point::raw(vec![T::zero()])],
                depth,
                hull_lo: vec![T::zero()],
                hull_hi: vec![T::one()],
                diameter: T::one(),
            })
        }
        SetKind::Sierpinski => {
            let h = T::lit(3.0).sqrt() / T::lit(2.0);
            let off = [
                vec![T::zero(), T::zero()],
                vec![half, T::zero()],
                vec![half * half, half * h],
            ];
            CompactSetSample::from_generator(Generator {
                maps: off
                    .into_iter()
                    .map(|offset| Similarity {
                        ratio: half,
                        offset,
                    })
                    .collect(),
                base: vec![Point::raw(vec![T::zero(), T::zero()])],
                depth,
                hull_lo: vec![T::zero(), T::zero()],
                hull_hi: vec![T::one(), h],
                diameter: T::one(),
            })
        }
        SetKind::CircleArc { start, end } => {
            let m = 1usize << depth;
            let span = end - start;
            if !(span.is_finite() && span > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "arc needs end > start, got [{start}, {end}]"
                )));
            }
            let full = span >= std::f64::consts::TAU - 1e-12;
            let count = if full { m } else { m + 1 };
            let atoms = (0..count)
                .map(|i| {
                    let t = start + span * i as f64 / m as f64;
                    Point::raw(vec![T::lit(t.cos()), T::lit(t.sin())])
                })
                .collect();
            CompactSetSample::new(atoms)
        }
        SetKind::File(path) => CompactSetSample::load(path),
    }
}
