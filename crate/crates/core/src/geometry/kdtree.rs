use crate::scalar::Real;

use super::euclid;

const LEAF_SIZE: usize = 8;

#[derive(Clone, Debug)]
struct Node<T> {
    lo: Vec<T>,
    hi: Vec<T>,
    /// Range into `perm` for leaves; child indices for internal nodes.
    kind: NodeKind,
}

#[derive(Clone, Debug)]
enum NodeKind {
    Leaf { start: usize, end: usize },
    Split { left: usize, right: usize },
}

/// Static k-d tree over a point list. Queries are exact and break ties by
/// the lowest point index, so they agree bit-for-bit with a brute-force scan.
#[derive(Clone, Debug)]
pub struct KdTree<T> {
    dim: usize,
    coords: Vec<T>,
    perm: Vec<usize>,
    nodes: Vec<Node<T>>,
}

impl<T: Real> KdTree<T> {
    /// Builds from rows of equal length `dim`.
    pub fn build<'a, I>(dim: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a [T]>,
    {
        let mut coords = Vec::new();
        for r in rows {
            debug_assert_eq!(r.len(), dim);
            coords.extend_from_slice(r);
        }
        let n = coords.len().checked_div(dim).unwrap_or(0);
        let mut tree = Self {
            dim,
            coords,
            perm: (0..n).collect(),
            nodes: Vec::new(),
        };
        if n > 0 {
            tree.split(0, n);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn split(&mut self, start: usize, end: usize) -> usize {
        let mut lo = vec![T::infinity(); self.dim];
        let mut hi = vec![T::neg_infinity(); self.dim];
        for &i in &self.perm[start..end] {
            let r = &self.coords[i * self.dim..(i + 1) * self.dim];
            for k in 0..self.dim {
                lo[k] = lo[k].min(r[k]);
                hi[k] = hi[k].max(r[k]);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo: lo.clone(),
            hi: hi.clone(),
            kind: NodeKind::Leaf { start, end },
        });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let axis = (0..self.dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).partial_cmp(&(hi[b] - lo[b])).unwrap())
            .unwrap_or(0);
        if hi[axis] <= lo[axis] {
            return id;
        }
        let mid = start + (end - start) / 2;
        let dim = self.dim;
        let coords = &self.coords;
        self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            coords[a * dim + axis]
                .partial_cmp(&coords[b * dim + axis])
                .unwrap()
                .then(a.cmp(&b))
        });
        let left = self.split(start, mid);
        let right = self.split(mid, end);
        self.nodes[id].kind = NodeKind::Split { left, right };
        id
    }

    fn box_gap(lo: &[T], hi: &[T], p: &[T]) -> T {
        let mut s = T::zero();
        for k in 0..p.len() {
            let g = if p[k] < lo[k] {
                lo[k] - p[k]
            } else if p[k] > hi[k] {
                p[k] - hi[k]
            } else {
                T::zero()
            };
            s += g * g;
        }
        s.sqrt()
    }

    /// Nearest point and its distance; ties go to the lowest index.
    pub fn nearest(&self, p: &[T]) -> Option<(usize, T)> {
        if self.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, T::infinity());
        self.nearest_rec(0, p, &mut best);
        Some(best)
    }

    fn nearest_rec(&self, id: usize, p: &[T], best: &mut (usize, T)) {
        let node = &self.nodes[id];
        if Self::box_gap(&node.lo, &node.hi, p) > best.1 {
            return;
        }
        match node.kind {
            NodeKind::Leaf { start, end } => {
                for &i in &self.perm[start..end] {
                    let d = euclid(self.row(i), p);
                    if d < best.1 || (d == best.1 && i < best.0) {
                        *best = (i, d);
                    }
                }
            }
            NodeKind::Split { left, right } => {
                let dl = Self::box_gap(&self.nodes[left].lo, &self.nodes[left].hi, p);
                let dr = Self::box_gap(&self.nodes[right].lo, &self.nodes[right].hi, p);
                if dl <= dr {
                    self.nearest_rec(left, p, best);
                    self.nearest_rec(right, p, best);
                } else {
                    self.nearest_rec(right, p, best);
                    self.nearest_rec(left, p, best);
                }
            }
        }
    }

    /// Indices of points with `|a - p| <= r`, ascending.
    pub fn within(&self, p: &[T], r: T) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.is_empty() {
            self.within_rec(0, p, r, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_rec(&self, id: usize, p: &[T], r: T, out: &mut Vec<usize>) {
        let node = &self.nodes[id];
        if Self::box_gap(&node.lo, &node.hi, p) > r {
            return;
        }
        match node.kind {
            NodeKind::Leaf { start, end } => {
                for &i in &self.perm[start..end] {
                    if euclid(self.row(i), p) <= r {
                        out.push(i);
                    }
                }
            }
            NodeKind::Split { left, right } => {
                self.within_rec(left, p, r, out);
                self.within_rec(right, p, r, out);
            }
        }
    }

    /// Euclidean distance from the box `[lo, hi]` to the nearest point.
    pub fn box_distance(&self, lo: &[T], hi: &[T]) -> T {
        let mut best = T::infinity();
        if !self.is_empty() {
            self.box_rec(0, lo, hi, &mut best);
        }
        best
    }

    fn gap_boxes(alo: &[T], ahi: &[T], blo: &[T], bhi: &[T]) -> T {
        let mut s = T::zero();
        for k in 0..alo.len() {
            let g = (blo[k] - ahi[k]).max(alo[k] - bhi[k]).max(T::zero());
            s += g * g;
        }
        s.sqrt()
    }

    fn box_rec(&self, id: usize, lo: &[T], hi: &[T], best: &mut T) {
        let node = &self.nodes[id];
        if Self::gap_boxes(lo, hi, &node.lo, &node.hi) >= *best {
            return;
        }
        match node.kind {
            NodeKind::Leaf { start, end } => {
                for &i in &self.perm[start..end] {
                    let d = Self::box_gap(lo, hi, self.row(i));
                    if d < *best {
                        *best = d;
                    }
                }
            }
            NodeKind::Split { left, right } => {
                self.box_rec(left, lo, hi, best);
                self.box_rec(right, lo, hi, best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect()
    }

    #[test]
    fn matches_brute_force() {
        for dim in 1..=3 {
            let pts = cloud(300, dim, dim as u64);
            let tree = KdTree::build(dim, pts.iter().map(|v| v.as_slice()));
            for q in cloud(50, dim, 99) {
                let (i, d) = tree.nearest(&q).unwrap();
                let (bi, bd) = pts
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (i, euclid(a, &q)))
                    .fold((usize::MAX, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
                assert_eq!((i, d), (bi, bd));
                let r = 0.4;
                let got = tree.within(&q, r);
                let want: Vec<usize> = (0..pts.len()).filter(|&i| euclid(&pts[i], &q) <= r).collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn ties_pick_lowest_index() {
        let pts = [vec![1.0], vec![-1.0], vec![1.0 + 1e-300]];
        let tree = KdTree::build(1, pts.iter().map(|v| v.as_slice()));
        assert_eq!(tree.nearest(&[0.0]).unwrap().0, 0);
    }

    #[test]
    fn box_distance_matches_scan() {
        let pts = cloud(200, 2, 5);
        let tree = KdTree::build(2, pts.iter().map(|v| v.as_slice()));
        let (lo, hi) = ([0.1, 0.2], [0.15, 0.3]);
        let want = pts
            .iter()
            .map(|a| KdTree::<f64>::box_gap(&lo, &hi, a))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(tree.box_distance(&lo, &hi), want);
    }
}
