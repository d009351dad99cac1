//! Execution context shared by every enumeration kernel.
//!
//! Kernels split their work into chunks whose boundaries depend only on the
//! input, never on the executor. Partial results are merged in chunk order,
//! so the parallel and sequential paths produce bit-identical output.

use crate::error::{Error, Result};

/// Default cap on enumerated points for a single kernel call.
pub const DEFAULT_MAX_POINTS: u128 = 100_000_000;

const CHUNKS: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is off.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub exec: Exec,
    pub max_points: u128,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx { exec: Exec::default(), max_points: DEFAULT_MAX_POINTS }
    }
}

impl Ctx {
    pub fn sequential() -> Self {
        Ctx { exec: Exec::Sequential, ..Ctx::default() }
    }

    pub fn with_max_points(mut self, cap: u128) -> Self {
        self.max_points = cap;
        self
    }

    pub fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_points {
            Err(Error::Budget { what, needed, cap: self.max_points })
        } else {
            Ok(())
        }
    }

    /// Maps `f` over `0..n` and returns the results in index order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self.exec {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Splits `0..total` into input-determined chunks, runs `body` on each
    /// and folds the partial results left to right.
    pub fn reduce<A, F, M>(&self, total: u64, body: F, merge: M) -> Option<A>
    where
        A: Send,
        F: Fn(std::ops::Range<u64>) -> A + Sync + Send,
        M: Fn(A, A) -> A,
    {
        if total == 0 {
            return None;
        }
        let chunk = total.div_ceil(CHUNKS).max(1);
        let n = total.div_ceil(chunk) as usize;
        let parts = self.map(n, |k| {
            let start = k as u64 * chunk;
            body(start..(start + chunk).min(total))
        });
        parts.into_iter().reduce(merge)
    }

    /// Returns the smallest index in `0..n` for which `f` yields `Some`.
    pub fn find_first<T, F>(&self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self.exec {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().filter_map(f).find_first(|_| true)
            }
            _ => (0..n).find_map(f),
        }
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    pub re: KahanSum,
    pub im: KahanSum,
}

impl ComplexSum {
    pub fn add_phase(&mut self, frac: f64) {
        let (s, c) = (std::f64::consts::TAU * frac).sin_cos();
        self.re.add(c);
        self.im.add(s);
    }

    pub fn add(&mut self, re: f64, im: f64) {
        self.re.add(re);
        self.im.add(im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> (f64, f64) {
        (self.re.value(), self.im.value())
    }
}
