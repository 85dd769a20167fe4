use std::fmt;

use smallvec::SmallVec;

use crate::scalar::Real;

/// Multi-index `j` in `N^n` with length `|j|` and factorial `j!`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(SmallVec::from_vec(entries))
    }

    pub fn zero(n: usize) -> Self {
        Self(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[k] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|j|`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn factorial<T: Real>(&self) -> T {
        let mut f = T::one();
        for &e in &self.0 {
            for k in 2..=e {
                f *= T::from_count(k as usize);
            }
        }
        f
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Self)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `prod_k binom(self_k, other_k)` for `other <= self`.
    pub fn binomial<T: Real>(&self, other: &Self) -> T {
        let mut b = T::one();
        for (&n, &k) in self.0.iter().zip(&other.0) {
            for i in 0..k {
                b = b * T::from_count((n - i) as usize) / T::from_count((i + 1) as usize);
            }
        }
        b
    }

    /// Every multi-index of dimension `n` with `|j| <= max`, graded by order
    /// then reverse-lexicographic within an order (`(1,0)` before `(0,1)`).
    pub fn all_up_to(n: usize, max: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for total in 0..=max {
            let mut cur = vec![0u32; n];
            fill(&mut cur, 0, total as u32, &mut out);
        }
        out
    }

    /// Every `k <= self` componentwise, in graded order.
    pub fn below(&self) -> Vec<MultiIndex> {
        Self::all_up_to(self.dim(), self.order())
            .into_iter()
            .filter(|k| k.le(self))
            .collect()
    }

    /// Evaluates the monomial `w^j`.
    pub fn monomial<T: Real>(&self, w: &[T]) -> T {
        self.0
            .iter()
            .zip(w)
            .fold(T::one(), |acc, (&e, &x)| acc * x.powi(e as i32))
    }

    /// Parses `"2"` or `"1,0,3"`.
    pub fn parse(s: &str) -> Option<Self> {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().ok())
            .collect::<Option<Vec<_>>>()
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(MultiIndex::new(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = left;
        out.push(MultiIndex::new(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
