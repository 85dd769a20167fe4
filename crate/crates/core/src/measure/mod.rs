//! Equal-split doubling measures on finite sets, ball masses, certification.

mod certify;
mod io;

pub use certify::{certify, CertifyConfig, MeasureCertificate};

use crate::error::{Error, Result};
use crate::geometry::{euclid, CompactSetSample, KdTree, Point};
use crate::scalar::Real;

/// One cell of the mass tree.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode<T> {
    pub level: usize,
    pub center: Vec<T>,
    /// Half side length for dyadic cubes, half diameter for generator cells.
    pub half_width: T,
    pub mass: T,
    /// Atoms of the set inside this cell, ascending.
    pub atoms: Vec<usize>,
    pub children: Vec<usize>,
}

/// Mass tree; node 0 is the root. Only occupied cells are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicTree<T> {
    pub nodes: Vec<TreeNode<T>>,
}

impl<T: Real> DyadicTree<T> {
    pub fn root(&self) -> &TreeNode<T> {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode<T>> {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    pub fn level_count(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0) + 1
    }
}

/// Probability measure carried by finitely many atoms of a set.
#[derive(Clone, Debug)]
pub struct DoublingMeasure<T> {
    /// Set atoms with positive weight, ascending.
    support: Vec<usize>,
    weights: Vec<T>,
    points: Vec<Point<T>>,
    depth: usize,
    resolution: T,
    diameter: T,
    tree: Option<DyadicTree<T>>,
    index: KdTree<T>,
}

/// Equal-split measure on `set`, subdividing to `depth` levels.
///
/// Cells are dyadic cubes, or the images of the attractor under the maps when
/// the set carries a self-similar generator. Each cell passes its mass in
/// equal shares to its occupied children; a leaf hands its mass to its atom
/// nearest the leaf centre.
pub fn build_measure<T: Real>(set: &CompactSetSample<T>, depth: usize) -> Result<DoublingMeasure<T>> {
    if depth < 1 {
        return Err(Error::InvalidDepth(depth));
    }
    let tree = match set.generator() {
        Some(_) => generator_tree(set, depth),
        None => dyadic_tree(set, depth)?,
    };
    let mut weights = vec![T::zero(); set.len()];
    for leaf in tree.leaves() {
        let best = leaf
            .atoms
            .iter()
            .map(|&a| (a, euclid(set.atom(a).coords(), &leaf.center)))
            .fold((usize::MAX, T::infinity()), |b, c| if c.1 < b.1 { c } else { b });
        weights[best.0] += leaf.mass;
    }
    let mut m = DoublingMeasure::from_weights(set, weights)?;
    m.depth = depth;
    m.tree = Some(tree);
    Ok(m)
}

fn generator_tree<T: Real>(set: &CompactSetSample<T>, depth: usize) -> DyadicTree<T> {
    let g = set.generator().expect("generator present");
    let two = T::lit(2.0);
    let mut nodes = vec![TreeNode {
        level: 0,
        center: g.cell_center(&[]),
        half_width: g.diameter / two,
        mass: T::one(),
        atoms: (0..set.len()).collect(),
        children: Vec::new(),
    }];
    // (node id, word)
    let mut stack = vec![(0usize, Vec::<usize>::new())];
    while let Some((id, word)) = stack.pop() {
        let level = nodes[id].level;
        let atoms = nodes[id].atoms.clone();
        if level >= depth || atoms.len() <= 1 {
            continue;
        }
        let mass = nodes[id].mass;
        let mut kids = Vec::new();
        if level < g.depth {
            let size = g.cell_size(level + 1);
            let share = mass / T::from_count(g.branching());
            for m in 0..g.branching() {
                let mut w = word.clone();
                w.push(m);
                let start = atoms[0] + m * size;
                kids.push((
                    TreeNode {
                        level: level + 1,
                        center: g.cell_center(&w),
                        half_width: g.cell_diameter(&w) / two,
                        mass: share,
                        atoms: (start..start + size).collect(),
                        children: Vec::new(),
                    },
                    w,
                ));
            }
        } else {
            // Below the generator depth every base image is its own cell.
            let share = mass / T::from_count(atoms.len());
            for &a in &atoms {
                kids.push((
                    TreeNode {
                        level: level + 1,
                        center: set.atom(a).coords().to_vec(),
                        half_width: T::zero(),
                        mass: share,
                        atoms: vec![a],
                        children: Vec::new(),
                    },
                    word.clone(),
                ));
            }
        }
        for (node, w) in kids {
            let cid = nodes.len();
            nodes.push(node);
            nodes[id].children.push(cid);
            stack.push((cid, w));
        }
    }
    DyadicTree { nodes }
}

fn dyadic_tree<T: Real>(set: &CompactSetSample<T>, depth: usize) -> Result<DyadicTree<T>> {
    let n = set.dim();
    let (lo, hi) = set.bbox();
    let two = T::lit(2.0);
    let center: Vec<T> = lo.iter().zip(&hi).map(|(a, b)| (*a + *b) / two).collect();
    let half = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (*b - *a) / two)
        .fold(T::zero(), T::max);
    let floor = half * T::lit(64.0) * T::epsilon();
    let mut nodes = vec![TreeNode {
        level: 0,
        center,
        half_width: half,
        mass: T::one(),
        atoms: (0..set.len()).collect(),
        children: Vec::new(),
    }];
    let mut stack = vec![0usize];
    while let Some(id) = stack.pop() {
        let (level, hw) = (nodes[id].level, nodes[id].half_width);
        if level >= depth || nodes[id].atoms.len() <= 1 {
            continue;
        }
        if hw <= floor {
            return Err(Error::ResolutionMismatch {
                depth,
                level,
                atoms: nodes[id].atoms.len(),
            });
        }
        let c = nodes[id].center.clone();
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); 1 << n];
        for &a in &nodes[id].atoms {
            let p = set.atom(a).coords();
            let code = (0..n).fold(0usize, |acc, k| acc | (usize::from(p[k] >= c[k]) << k));
            buckets[code].push(a);
        }
        let occupied: Vec<(usize, Vec<usize>)> = buckets
            .into_iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .collect();
        let share = nodes[id].mass / T::from_count(occupied.len());
        let qh = hw / two;
        for (code, atoms) in occupied {
            let center = (0..n)
                .map(|k| if code >> k & 1 == 1 { c[k] + qh } else { c[k] - qh })
                .collect();
            let cid = nodes.len();
            nodes.push(TreeNode {
                level: level + 1,
                center,
                half_width: qh,
                mass: share,
                atoms,
                children: Vec::new(),
            });
            nodes[id].children.push(cid);
            stack.push(cid);
        }
    }
    Ok(DyadicTree { nodes })
}

impl<T: Real> DoublingMeasure<T> {
    /// Measure with the given per-atom weights, normalised to total mass 1.
    /// Zero weights drop out of the support.
    pub fn from_weights(set: &CompactSetSample<T>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != set.len() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} atoms",
                weights.len(),
                set.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= T::zero())) {
            return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
        }
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::InvalidParameter("total mass must be positive".into()));
        }
        let exact = (total - T::one()).abs() <= T::lit(1e-12);
        let mut support = Vec::new();
        let mut w = Vec::new();
        for (i, &x) in weights.iter().enumerate() {
            if x > T::zero() {
                support.push(i);
                w.push(if exact { x } else { x / total });
            }
        }
        let points: Vec<Point<T>> = support.iter().map(|&i| set.atom(i).clone()).collect();
        let index = KdTree::build(set.dim(), points.iter().map(|p| p.coords()));
        Ok(Self {
            support,
            weights: w,
            points,
            depth: 0,
            resolution: set.resolution(),
            diameter: set.diameter(),
            tree: None,
            index,
        })
    }

    /// Uniform weights on every atom.
    pub fn uniform(set: &CompactSetSample<T>) -> Result<Self> {
        let w = T::one() / T::from_count(set.len());
        Self::from_weights(set, vec![w; set.len()])
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// Indices into the set of the atoms carrying mass, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Weights aligned with [`Self::support`].
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn resolution(&self) -> T {
        self.resolution
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    pub fn tree(&self) -> Option<&DyadicTree<T>> {
        self.tree.as_ref()
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Weight of set atom `atom` (zero off the support).
    pub fn weight_of(&self, atom: usize) -> T {
        self.support
            .binary_search(&atom)
            .map(|k| self.weights[k])
            .unwrap_or_else(|_| T::zero())
    }

    /// `mu(B(x, r))` for the closed ball, summed in support order so the
    /// result is exactly monotone in `r`.
    pub fn ball_mass(&self, x: &Point<T>, r: T) -> T {
        let mut s = T::zero();
        for k in self.index.within(x.coords(), r) {
            s += self.weights[k];
        }
        s
    }

    /// `mu[t, s] = mu(B(t, d(t, s)))`; not symmetric.
    pub fn mu_pair(&self, t: &Point<T>, s: &Point<T>) -> T {
        self.ball_mass(t, euclid(t.coords(), s.coords()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_set, SetKind};

    fn pt(x: f64) -> Point<f64> {
        Point::new(vec![x]).unwrap()
    }

    #[test]
    fn single_point() {
        let e = CompactSetSample::new(vec![pt(0.3)]).unwrap();
        let mu = build_measure(&e, 4).unwrap();
        assert_eq!(mu.weights(), &[1.0]);
        assert_eq!(mu.ball_mass(&pt(0.3), 0.0), 1.0);
    }

    #[test]
    fn cantor_weights_are_dyadic() {
        for k in [3, 6, 9] {
            let e = generate_set::<f64>(&SetKind::Cantor, k).unwrap();
            let mu = build_measure(&e, k).unwrap();
            assert_eq!(mu.support().len(), 1 << k);
            let w = 0.5f64.powi(k as i32);
            assert!(mu.weights().iter().all(|&x| x == w));
            assert_eq!(mu.total_mass(), 1.0);
        }
    }

    #[test]
    fn cantor_ball_masses() {
        let e = generate_set::<f64>(&SetKind::Cantor, 8).unwrap();
        let mu = build_measure(&e, 8).unwrap();
        // [0, 1/3] holds the left half; the right endpoints of the left
        // half are at most 1/3 - 3^-8 away.
        assert_eq!(mu.ball_mass(&pt(0.0), 1.0 / 3.0), 0.5);
        assert_eq!(mu.mu_pair(&pt(0.0), &pt(1.0)), 1.0);
        let t = e.atom(5).clone();
        assert_eq!(mu.mu_pair(&t, &t), mu.weight_of(5));
        assert_eq!(mu.ball_mass(&pt(0.5), 10.0), 1.0);
    }

    #[test]
    fn interval_weights_within_factor_two() {
        let e = generate_set::<f64>(&SetKind::Interval, 8).unwrap();
        let mu = build_measure(&e, 8).unwrap();
        let (lo, hi) = mu
            .weights()
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(a, b), &w| (a.min(w), b.max(w)));
        assert!(hi / lo <= 2.0, "{lo} {hi}");
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mass_is_conserved_level_by_level() {
        for kind in [SetKind::Interval, SetKind::Sierpinski, SetKind::Cantor] {
            let e = generate_set::<f64>(&kind, 5).unwrap();
            let mu = build_measure(&e, 7).unwrap();
            let tree = mu.tree().unwrap();
            assert_eq!(tree.root().mass, 1.0);
            for node in &tree.nodes {
                if !node.children.is_empty() {
                    let s: f64 = node.children.iter().map(|&c| tree.nodes[c].mass).sum();
                    assert!((s - node.mass).abs() <= 1e-15 * node.mass);
                }
            }
            for &a in mu.support() {
                assert!(tree.leaves().any(|l| l.atoms.contains(&a)));
            }
        }
    }

    #[test]
    fn depth_zero_is_rejected() {
        let e = generate_set::<f64>(&SetKind::Cantor, 2).unwrap();
        assert!(matches!(build_measure(&e, 0), Err(Error::InvalidDepth(0))));
    }

    #[test]
    fn geometric_tree_on_sierpinski_points() {
        // Without the generator the dyadic subdivision is used.
        let s = generate_set::<f64>(&SetKind::Sierpinski, 4).unwrap();
        let e = CompactSetSample::new(s.atoms().to_vec()).unwrap();
        let mu = build_measure(&e, 10).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
        assert!(mu.weights().iter().all(|&w| w > 0.0));
    }
}
