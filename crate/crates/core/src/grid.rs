//! Integer boxes in `Z^k` enumerated in lexicographic order, with the last
//! coordinate varying fastest.

use std::ops::Range;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Grid {
    /// Inclusive bounds per coordinate; an empty side makes the grid empty.
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Grid { lo, hi }
    }

    pub fn cube(dims: usize, lo: i64, hi: i64) -> Self {
        Grid::new(vec![lo; dims], vec![hi; dims])
    }

    pub fn dims(&self) -> usize {
        self.lo.len()
    }

    pub fn widths(&self) -> Vec<u64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| if h < l { 0 } else { (h - l + 1) as u64 }).collect()
    }

    /// Number of points, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.widths().iter().fold(1u128, |acc, &w| acc.saturating_mul(w as u128))
    }

    pub fn point(&self, mut idx: u64, out: &mut [i64]) {
        let w = self.widths();
        for k in (0..self.dims()).rev() {
            out[k] = self.lo[k] + (idx % w[k]) as i64;
            idx /= w[k];
        }
    }

    /// Calls `f` on every point with index in `range`, in order.
    pub fn for_range(&self, range: Range<u64>, mut f: impl FnMut(&[i64])) {
        if range.is_empty() {
            return;
        }
        let k = self.dims();
        let mut p = vec![0; k];
        self.point(range.start, &mut p);
        for _ in range {
            f(&p);
            for j in (0..k).rev() {
                if p[j] < self.hi[j] {
                    p[j] += 1;
                    break;
                }
                p[j] = self.lo[j];
            }
        }
    }

    pub fn for_each(&self, f: impl FnMut(&[i64])) {
        self.for_range(0..self.size() as u64, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_size() {
        let g = Grid::new(vec![0, -1], vec![1, 1]);
        assert_eq!(g.size(), 6);
        let mut seen = Vec::new();
        g.for_each(|p| seen.push(p.to_vec()));
        assert_eq!(seen[0], vec![0, -1]);
        assert_eq!(seen[3], vec![1, -1]);
        let mut tail = Vec::new();
        g.for_range(4..6, |p| tail.push(p.to_vec()));
        assert_eq!(tail, seen[4..].to_vec());
    }

    #[test]
    fn empty_side() {
        assert_eq!(Grid::new(vec![1], vec![0]).size(), 0);
    }
}
