//! Small-dimension integer lattice utilities: Hermite bases and kernels
//! modulo an integer.
//!
//! Matrices are row-major `Vec<Vec<i128>>` whose *columns* are the basis
//! vectors. A Hermite basis is upper triangular with a positive diagonal and
//! every entry above the diagonal reduced into `[0, H[i][i])`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn column(m: &Mat, j: usize) -> Vec<i128> {
    m.iter().map(|row| row[j]).collect()
}

pub fn columns(m: &Mat) -> Vec<Vec<i128>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| column(m, j)).collect()
}

pub fn from_columns(cols: &[Vec<i128>], dim: usize) -> Mat {
    (0..dim).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

pub fn det_upper(m: &Mat) -> i128 {
    (0..m.len()).map(|i| m[i][i]).product()
}

/// Hermite basis of the full-rank lattice spanned by `gens` in `Z^dim`.
pub fn hermite_basis(gens: &[Vec<i128>], dim: usize) -> Result<Mat> {
    let mut work: Vec<Vec<i128>> =
        gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
    for g in &work {
        if g.len() != dim {
            return Err(Error::invalid("generator has the wrong dimension"));
        }
    }
    let mut cols: Vec<Vec<i128>> = vec![Vec::new(); dim];
    for r in (0..dim).rev() {
        loop {
            let nonzero: Vec<usize> = (0..work.len()).filter(|&k| work[k][r] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&k| work[k][r].abs()).unwrap();
            let pivot = work[p].clone();
            for &k in &nonzero {
                if k == p {
                    continue;
                }
                let q = work[k][r] / pivot[r];
                for (x, y) in work[k].iter_mut().zip(&pivot) {
                    *x -= q * y;
                }
            }
        }
        let Some(p) = (0..work.len()).find(|&k| work[k][r] != 0) else {
            return Err(Error::invalid("lattice is not of full rank"));
        };
        let mut v = work.swap_remove(p);
        if v[r] < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        cols[r] = v;
        work.retain(|g| g.iter().any(|&x| x != 0));
    }
    let mut h = from_columns(&cols, dim);
    reduce_upper(&mut h);
    Ok(h)
}

fn reduce_upper(h: &mut Mat) {
    let n = h.len();
    for j in 0..n {
        for i in (0..j).rev() {
            let q = Integer::div_floor(&h[i][j], &h[i][i]);
            if q != 0 {
                for r in 0..=i {
                    h[r][j] -= q * h[r][i];
                }
            }
        }
    }
}

/// Hermite basis of `{ w in Z^k : a w = 0 mod modulus }` for a `rows x k`
/// integer matrix `a`.
pub fn kernel_mod(a: &[Vec<i128>], k: usize, modulus: i128) -> Result<Mat> {
    if modulus <= 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let mut basis = columns(&identity(k));
    for row in a {
        let mut vals: Vec<i128> =
            basis.iter().map(|b| dot(row, b).rem_euclid(modulus)).collect();
        loop {
            let nonzero: Vec<usize> = (0..k).filter(|&j| vals[j] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&j| vals[j].abs()).unwrap();
            for &j in &nonzero {
                if j == p {
                    continue;
                }
                let q = vals[j] / vals[p];
                vals[j] -= q * vals[p];
                let bp = basis[p].clone();
                for (x, y) in basis[j].iter_mut().zip(&bp) {
                    *x -= q * y;
                }
            }
        }
        if let Some(p) = (0..k).find(|&j| vals[j] != 0) {
            let g = vals[p].abs().gcd(&modulus);
            let factor = modulus / g;
            basis[p].iter_mut().for_each(|x| *x *= factor);
        }
        let mut gens = basis.clone();
        gens.extend((0..k).map(|i| {
            let mut e = vec![0; k];
            e[i] = modulus;
            e
        }));
        basis = columns(&hermite_basis(&gens, k)?);
    }
    Ok(from_columns(&basis, k))
}

pub fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &Mat, v: &[i128]) -> Vec<i128> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Adjugate of an upper triangular matrix times `det / diag` bookkeeping is
/// avoided: membership of `v` in the lattice with Hermite basis `h` is decided
/// by back substitution.
pub fn contains(h: &Mat, v: &[i128]) -> bool {
    let n = h.len();
    let mut rest = v.to_vec();
    for i in (0..n).rev() {
        if rest[i] % h[i][i] != 0 {
            return false;
        }
        let t = rest[i] / h[i][i];
        if t != 0 {
            for r in 0..=i {
                rest[r] -= t * h[r][i];
            }
        }
    }
    rest.iter().all(|&x| x == 0)
}

/// Rank over Q of an integer matrix given by rows. Uses fraction-free
/// elimination in `i128` and restarts in big integers on overflow.
pub fn rank_i128(rows: &[Vec<i128>]) -> usize {
    rank_checked(rows).unwrap_or_else(|| {
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        rank_big(big)
    })
}

fn rank_checked(rows: &[Vec<i128>]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let g = a.gcd(&b);
                let (fa, fb) = (a / g, b / g);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = x.checked_mul(fa)?.checked_sub(y.checked_mul(fb)?)?;
                }
                let content = m[r].iter().fold(0i128, |acc, x| acc.gcd(x));
                if content > 1 {
                    m[r].iter_mut().for_each(|x| *x /= content);
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

pub fn rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if !m[r][c].is_zero() {
                let g = m[rank][c].gcd(&m[r][c]);
                let fa = &m[rank][c] / &g;
                let fb = &m[r][c] / &g;
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = &*x * &fa - y * &fb;
                }
                let content = m[r].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                if content > BigInt::one() {
                    m[r].iter_mut().for_each(|x| *x = &*x / &content);
                }
            }
        }
        rank += 1;
    }
    rank
}
