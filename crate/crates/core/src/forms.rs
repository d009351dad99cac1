//! Cubic forms over O stored as symmetric coefficient tensors.
//!
//! The stored tensor always represents 6C: for the input polynomial C the
//! entries satisfy `sum_{i,j,k} c_ijk x_i x_j x_k = 6 C(x)`, so a monomial
//! `a x_i^3` gives `c_iii = 6a`, `a x_i^2 x_j` gives `c_iij = 2a` and
//! `a x_i x_j x_k` gives `c_ijk = a`. Every bilinear form, Hessian and phase
//! downstream is taken relative to this tensor.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Ctx;
use crate::field::{make_field, AlgInt, FieldElem, FieldSpec, IdealRep, Scalar};
use crate::grid::Grid;
use crate::hnf;

pub type Index3 = [usize; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct CubicForm {
    pub field: FieldSpec,
    pub s: usize,
    /// Stored tensor entries `c_ijk` for `i <= j <= k` (0-based), zeros omitted.
    pub coeffs: BTreeMap<Index3, AlgInt>,
    /// Always true once constructed: the tensor carries the factor 6.
    pub scaled: bool,
    dense: Option<Vec<[i128; 2]>>,
}

/// Number of distinct orderings of the index triple.
pub fn multiplicity(idx: Index3) -> i64 {
    let [i, j, k] = idx;
    if i == j && j == k {
        1
    } else if i == j || j == k || i == k {
        3
    } else {
        6
    }
}

fn sorted(mut idx: Index3) -> Index3 {
    idx.sort_unstable();
    idx
}

impl CubicForm {
    /// Builds the form from input-polynomial coefficients per monomial.
    pub fn from_poly(field: FieldSpec, s: usize, terms: &[(Index3, AlgInt)]) -> Result<Self> {
        if s == 0 {
            return Err(Error::invalid("a form needs at least one variable"));
        }
        let mut poly: BTreeMap<Index3, AlgInt> = BTreeMap::new();
        for (idx, a) in terms {
            if idx.iter().any(|&i| i >= s) {
                return Err(Error::invalid(format!("variable index out of range in {idx:?}")));
            }
            let e = poly.entry(sorted(*idx)).or_insert_with(AlgInt::zero);
            *e = e.add(a);
        }
        let coeffs: BTreeMap<Index3, AlgInt> = poly
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(idx, a)| (idx, a.scale(&BigInt::from(6 / multiplicity(idx)))))
            .collect();
        Ok(CubicForm::from_tensor(field, s, coeffs))
    }

    fn from_tensor(field: FieldSpec, s: usize, coeffs: BTreeMap<Index3, AlgInt>) -> Self {
        let mut form = CubicForm { field, s, coeffs, scaled: true, dense: None };
        form.dense = form.build_dense();
        form
    }

    fn build_dense(&self) -> Option<Vec<[i128; 2]>> {
        let s = self.s;
        let mut d = vec![[0i128; 2]; s * s * s];
        for (&[i, j, k], c) in &self.coeffs {
            let v = [c.coords[0].to_i64()? as i128, c.coords[1].to_i64()? as i128];
            for p in permutations([i, j, k]) {
                d[(p[0] * s + p[1]) * s + p[2]] = v;
            }
        }
        Some(d)
    }

    /// Diagonal form `sum a_m x_m^3`.
    pub fn diagonal(field: FieldSpec, a: &[AlgInt]) -> Result<Self> {
        let terms: Vec<(Index3, AlgInt)> = a.iter().enumerate().map(|(m, c)| ([m, m, m], c.clone())).collect();
        CubicForm::from_poly(field, a.len(), &terms)
    }

    /// Diagonal form with rational integer coefficients over Q(sqrt(-d)).
    pub fn diagonal_int(d: i64, a: &[i64]) -> Result<Self> {
        let a: Vec<AlgInt> = a.iter().map(|&x| AlgInt::new(x, 0)).collect();
        CubicForm::diagonal(make_field(d)?, &a)
    }

    pub fn is_diagonal(&self) -> bool {
        self.coeffs.keys().all(|&[i, j, k]| i == j && j == k)
    }

    /// Coefficients of the diagonal form, if it is one.
    pub fn diagonal_coeffs(&self) -> Option<Vec<AlgInt>> {
        if !self.is_diagonal() {
            return None;
        }
        Some((0..self.s).map(|m| self.poly_coeff([m, m, m])).collect())
    }

    pub fn tensor(&self, idx: Index3) -> AlgInt {
        self.coeffs.get(&sorted(idx)).cloned().unwrap_or_default()
    }

    pub fn tensor_small(&self, i: usize, j: usize, k: usize) -> [i128; 2] {
        self.dense.as_ref().expect("small form")[(i * self.s + j) * self.s + k]
    }

    pub fn is_small(&self) -> bool {
        self.dense.is_some()
    }

    /// Input-polynomial evaluator over small coordinates for hot loops.
    pub fn compiled(&self) -> Result<Compiled> {
        if !self.is_small() {
            return Err(Error::invalid("coefficients too large for the fast kernels"));
        }
        Ok(Compiled { field: self.field.clone(), s: self.s, terms: self.poly_terms_in::<i128>() })
    }

    /// Input-polynomial coefficient of the monomial `x_i x_j x_k`.
    pub fn poly_coeff(&self, idx: Index3) -> AlgInt {
        let idx = sorted(idx);
        let c = self.tensor(idx);
        let k = BigInt::from(6 / multiplicity(idx));
        AlgInt { coords: [&c.coords[0] / &k, &c.coords[1] / &k] }
    }

    /// Nonzero input-polynomial terms in index order.
    pub fn poly_terms(&self) -> Vec<(Index3, AlgInt)> {
        self.coeffs.keys().map(|&idx| (idx, self.poly_coeff(idx))).collect()
    }

    /// The form with coefficients converted into `T` (input polynomial).
    pub fn poly_terms_in<T: Scalar>(&self) -> Vec<(Index3, [T; 2])> {
        self.poly_terms()
            .into_iter()
            .map(|(idx, a)| (idx, [T::of_big(&a.coords[0]), T::of_big(&a.coords[1])]))
            .collect()
    }

    /// C(x) for the input polynomial.
    pub fn value_in<T: Scalar>(&self, x: &[[T; 2]]) -> [T; 2] {
        let f = &self.field;
        let mut acc = [T::zero_s(), T::zero_s()];
        for ([i, j, k], a) in self.poly_terms_in::<T>() {
            let m = f.mul_s(&f.mul_s(&f.mul_s(&a, &x[i]), &x[j]), &x[k]);
            acc = [acc[0].clone() + m[0].clone(), acc[1].clone() + m[1].clone()];
        }
        acc
    }

    pub fn value(&self, x: &[AlgInt]) -> AlgInt {
        let xs: Vec<[BigInt; 2]> = x.iter().map(|v| v.coords.clone()).collect();
        AlgInt { coords: self.value_in(&xs) }
    }

    /// Stored-tensor value, equal to 6 C(x).
    pub fn tensor_value(&self, x: &[AlgInt]) -> AlgInt {
        self.value(x).scale(&BigInt::from(6))
    }

    /// `B_i(x, y) = sum_{j,k} c_ijk x_j y_k` over the stored tensor.
    pub fn bilinear_in<T: Scalar>(&self, i: usize, x: &[[T; 2]], y: &[[T; 2]]) -> Result<[T; 2]> {
        if i >= self.s {
            return Err(Error::invalid(format!("bilinear index {} out of range 1..={}", i + 1, self.s)));
        }
        let f = &self.field;
        let mut acc = [T::zero_s(), T::zero_s()];
        for j in 0..self.s {
            for k in 0..self.s {
                let c = self.tensor([i, j, k]);
                if c.is_zero() {
                    continue;
                }
                let c = [T::of_big(&c.coords[0]), T::of_big(&c.coords[1])];
                let m = f.mul_s(&f.mul_s(&c, &x[j]), &y[k]);
                acc = [acc[0].clone() + m[0].clone(), acc[1].clone() + m[1].clone()];
            }
        }
        Ok(acc)
    }

    pub fn bilinear(&self, i: usize, x: &[AlgInt], y: &[AlgInt]) -> Result<AlgInt> {
        let (xs, ys) = (coords_of(x), coords_of(y));
        Ok(AlgInt { coords: self.bilinear_in(i, &xs, &ys)? })
    }

    /// All `B_i(x, y)` for small inputs.
    pub fn bilinear_all_small(&self, x: &[[i128; 2]], y: &[[i128; 2]]) -> Vec<[i128; 2]> {
        let f = &self.field;
        let d = self.dense.as_ref().expect("small form");
        let s = self.s;
        (0..s)
            .map(|i| {
                let mut acc = [0i128; 2];
                for j in 0..s {
                    if x[j] == [0, 0] {
                        continue;
                    }
                    for k in 0..s {
                        let c = d[(i * s + j) * s + k];
                        if c == [0, 0] {
                            continue;
                        }
                        let m = f.mul_i(f.mul_i(c, x[j]), y[k]);
                        acc[0] += m[0];
                        acc[1] += m[1];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn hessian(&self, x: &[AlgInt]) -> HessianMatrix {
        let f = &self.field;
        let entries = (0..self.s)
            .map(|j| {
                (0..self.s)
                    .map(|k| {
                        (0..self.s).fold(AlgInt::zero(), |acc, i| acc.add(&f.mul(&self.tensor([i, j, k]), &x[i])))
                    })
                    .collect()
            })
            .collect();
        HessianMatrix { x: x.to_vec(), entries }
    }

    fn hessian_small(&self, x: &[[i128; 2]]) -> Vec<Vec<[i128; 2]>> {
        let f = &self.field;
        let s = self.s;
        let d = self.dense.as_ref().expect("small form");
        let mut m = vec![vec![[0i128; 2]; s]; s];
        for i in 0..s {
            if x[i] == [0, 0] {
                continue;
            }
            for j in 0..s {
                for k in j..s {
                    let c = d[(i * s + j) * s + k];
                    if c != [0, 0] {
                        let v = f.mul_i(c, x[i]);
                        m[j][k][0] += v[0];
                        m[j][k][1] += v[1];
                    }
                }
            }
        }
        for j in 0..s {
            for k in 0..j {
                m[j][k] = m[k][j];
            }
        }
        m
    }

    /// r(x), the rank of M(x) over K.
    pub fn rank_at(&self, x: &[AlgInt]) -> usize {
        if let (true, Some(xs)) = (self.is_small(), small_vec(x)) {
            return self.rank_small(&xs);
        }
        let m = self.hessian(x);
        let rows = realify(&self.field, &m.entries, |a| a.coords.clone());
        hnf::rank_big(rows) / 2
    }

    /// r(x) for x in K^s; denominators are cleared first.
    pub fn rank_at_elems(&self, x: &[FieldElem]) -> usize {
        let l = x.iter().fold(BigInt::from(1), |acc, e| acc.lcm(&e.den));
        let ints: Vec<AlgInt> = x.iter().map(|e| e.num.scale(&(&l / &e.den))).collect();
        self.rank_at(&ints)
    }

    pub fn rank_small(&self, x: &[[i128; 2]]) -> usize {
        let m = self.hessian_small(x);
        let rows = realify(&self.field, &m, |a| *a);
        hnf::rank_i128(&rows) / 2
    }

    /// r_p(h), the rank of M(h) over the residue field O/p.
    pub fn rank_mod(&self, h: &[AlgInt], p: &IdealRep) -> Result<usize> {
        rank_mod_matrix(&self.field, &self.hessian(h).entries, p)
    }

    /// Counts of `x in O^s` with `|x| < H` by rank of M(x).
    pub fn geometric_condition_scan(&self, h: i64, ctx: &Ctx) -> Result<ScanReport> {
        if h < 1 {
            return Err(Error::invalid("H must be at least 1"));
        }
        if !self.is_small() {
            return Err(Error::invalid("coefficients too large for the scan kernel"));
        }
        let grid = Grid::cube(2 * self.s, -(h - 1), h - 1);
        ctx.check("geometric condition scan", grid.size())?;
        let s = self.s;
        let counts = ctx
            .reduce(
                grid.size() as u64,
                |range| {
                    let mut counts = vec![0u64; s + 1];
                    let mut x = vec![[0i128; 2]; s];
                    grid.for_range(range, |p| {
                        for m in 0..s {
                            x[m] = [p[2 * m] as i128, p[2 * m + 1] as i128];
                        }
                        counts[self.rank_small(&x)] += 1;
                    });
                    counts
                },
                |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
            )
            .unwrap_or_else(|| vec![0; s + 1]);
        let ratios = counts.iter().enumerate().map(|(r, &c)| c as f64 / (h as f64).powi(2 * r as i32)).collect();
        Ok(ScanReport { h, counts, ratios })
    }

    /// `#{(x, y) : |x|, |y| < H, B_i(x, y) = 0 for all i}`.
    pub fn bilinear_zero_count(&self, h: i64, ctx: &Ctx) -> Result<u64> {
        if !self.is_small() {
            return Err(Error::invalid("coefficients too large for the kernel"));
        }
        let s = self.s;
        let grid = Grid::cube(4 * s, -(h - 1), h - 1);
        ctx.check("bilinear zero count", grid.size())?;
        Ok(ctx
            .reduce(
                grid.size() as u64,
                |range| {
                    let mut n = 0u64;
                    let (mut x, mut y) = (vec![[0i128; 2]; s], vec![[0i128; 2]; s]);
                    grid.for_range(range, |p| {
                        for m in 0..s {
                            x[m] = [p[2 * m] as i128, p[2 * m + 1] as i128];
                            y[m] = [p[2 * s + 2 * m] as i128, p[2 * s + 2 * m + 1] as i128];
                        }
                        if self.bilinear_all_small(&x, &y).iter().all(|b| *b == [0, 0]) {
                            n += 1;
                        }
                    });
                    n
                },
                |a, b| a + b,
            )
            .unwrap_or(0))
    }

    /// `C(w+h+z) - C(w+z) - C(h+z) + C(z) - 6 sum z_i B_i(w, h)` on the stored
    /// tensor, which should equal Psi(w, h) for every z.
    pub fn multilinear_residual(&self, w: &[AlgInt], h: &[AlgInt], z: &[AlgInt]) -> Result<AlgInt> {
        let f = &self.field;
        let add = |a: &[AlgInt], b: &[AlgInt]| -> Vec<AlgInt> { a.iter().zip(b).map(|(x, y)| x.add(y)).collect() };
        let whz = add(&add(w, h), z);
        let diff = self
            .tensor_value(&whz)
            .sub(&self.tensor_value(&add(w, z)))
            .sub(&self.tensor_value(&add(h, z)))
            .add(&self.tensor_value(z));
        let mut lin = AlgInt::zero();
        for i in 0..self.s {
            lin = lin.add(&f.mul(&z[i], &self.bilinear(i, w, h)?));
        }
        Ok(diff.sub(&lin.scale(&BigInt::from(6))))
    }

    /// The residual at `z` agrees with the residual at `z = 0`.
    pub fn multilinear_check(&self, w: &[AlgInt], h: &[AlgInt], z: &[AlgInt]) -> Result<bool> {
        let zero = vec![AlgInt::zero(); self.s];
        Ok(self.multilinear_residual(w, h, z)? == self.multilinear_residual(w, h, &zero)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_form(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("field d={}\nvars s={}\n", self.field.d, self.s);
        for (idx, a) in self.poly_terms() {
            let _ = writeln!(out, "{} : {}", monomial_name(idx), a);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub field: FieldSpec,
    pub s: usize,
    pub terms: Vec<(Index3, [i128; 2])>,
}

impl Compiled {
    pub fn value(&self, x: &[[i128; 2]]) -> [i128; 2] {
        let f = &self.field;
        let mut acc = [0i128; 2];
        for &([i, j, k], a) in &self.terms {
            let m = f.mul_i(f.mul_i(f.mul_i(a, x[i]), x[j]), x[k]);
            acc[0] += m[0];
            acc[1] += m[1];
        }
        acc
    }

    /// C at the point whose coordinates are laid out as `x_1 = (p0, p1)`,
    /// `x_2 = (p2, p3)`, and so on.
    pub fn value_flat(&self, p: &[i64]) -> [i128; 2] {
        let f = &self.field;
        let mut acc = [0i128; 2];
        for &([i, j, k], a) in &self.terms {
            let xi = [p[2 * i] as i128, p[2 * i + 1] as i128];
            let xj = [p[2 * j] as i128, p[2 * j + 1] as i128];
            let xk = [p[2 * k] as i128, p[2 * k + 1] as i128];
            let m = f.mul_i(f.mul_i(f.mul_i(a, xi), xj), xk);
            acc[0] += m[0];
            acc[1] += m[1];
        }
        acc
    }
}

/// Rank over O/p of a square matrix with entries in O.
pub fn rank_mod_matrix(f: &FieldSpec, m: &[Vec<AlgInt>], p: &IdealRep) -> Result<usize> {
    let k = p.residue_field(f)?;
    let mut rows: Vec<Vec<[i64; 2]>> = m.iter().map(|r| r.iter().map(|a| k.reduce_big(a)).collect()).collect();
    let (nr, nc) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| !k.is_zero(rows[r][c])) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = k.inv(rows[rank][c]).expect("pivot is nonzero");
        for r in 0..nr {
            if r != rank && !k.is_zero(rows[r][c]) {
                let factor = k.mul(rows[r][c], inv);
                for cc in 0..nc {
                    let t = k.mul(factor, rows[rank][cc]);
                    rows[r][cc] = k.sub(rows[r][cc], t);
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

fn coords_of(x: &[AlgInt]) -> Vec<[BigInt; 2]> {
    x.iter().map(|v| v.coords.clone()).collect()
}

fn small_vec(x: &[AlgInt]) -> Option<Vec<[i128; 2]>> {
    x.iter()
        .map(|v| {
            let s = v.small()?;
            (s[0].abs() < 1 << 40 && s[1].abs() < 1 << 40).then_some(s)
        })
        .collect()
}

fn permutations([i, j, k]: Index3) -> [Index3; 6] {
    [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]]
}

/// The 2s x 2s rational matrix of the K-linear map with matrix `m`.
fn realify<E, T: Scalar>(f: &FieldSpec, m: &[Vec<E>], get: impl Fn(&E) -> [T; 2]) -> Vec<Vec<T>> {
    let n = m.len();
    let mut rows = vec![vec![T::zero_s(); 2 * n]; 2 * n];
    for j in 0..n {
        for k in 0..n {
            let a = get(&m[j][k]);
            let aw = f.mul_s(&a, &[T::of(0), T::of(1)]);
            rows[2 * j][2 * k] = a[0].clone();
            rows[2 * j + 1][2 * k] = a[1].clone();
            rows[2 * j][2 * k + 1] = aw[0].clone();
            rows[2 * j + 1][2 * k + 1] = aw[1].clone();
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HessianMatrix {
    pub x: Vec<AlgInt>,
    pub entries: Vec<Vec<AlgInt>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub h: i64,
    /// `counts[r]` points with rank r.
    pub counts: Vec<u64>,
    /// `counts[r] / H^(2r)`
    pub ratios: Vec<f64>,
}

impl ScanReport {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn monomial_name(idx: Index3) -> String {
    let mut parts = Vec::new();
    let mut k = 0;
    while k < 3 {
        let v = idx[k];
        let e = idx.iter().filter(|&&u| u == v).count();
        parts.push(if e == 1 { format!("x{}", v + 1) } else { format!("x{}^{}", v + 1, e) });
        k += e;
    }
    parts.join("*")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str, key: &str, name: &str) -> Option<i64> {
    let rest = line.strip_prefix(key)?.trim();
    rest.strip_prefix(name)?.trim_start().strip_prefix('=')?.trim().parse().ok()
}

fn parse_monomial(text: &str, s: usize, line: usize) -> Result<Index3> {
    let mut vars = Vec::new();
    for factor in text.split('*').map(str::trim) {
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => (v.trim(), e.trim().parse::<usize>().map_err(|_| parse_err(line, format!("bad exponent in {factor:?}")))?),
            None => (factor, 1),
        };
        let i: usize = var
            .strip_prefix('x')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| parse_err(line, format!("bad variable {var:?}")))?;
        if i == 0 || i > s {
            return Err(parse_err(line, format!("variable x{i} outside x1..x{s}")));
        }
        vars.extend(std::iter::repeat(i - 1).take(exp));
    }
    if vars.len() != 3 {
        return Err(parse_err(line, format!("monomial {text:?} has degree {}, not 3", vars.len())));
    }
    Ok(sorted([vars[0], vars[1], vars[2]]))
}

/// Parses `a+b*w`, `a-b*w`, `a`, `b*w`, `w`, `-w`.
pub fn parse_coeff(text: &str) -> Option<AlgInt> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut pieces = Vec::new();
    let mut cur = String::new();
    for (n, ch) in t.chars().enumerate() {
        if (ch == '+' || ch == '-') && n > 0 {
            pieces.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    pieces.push(cur);
    for p in pieces {
        let (sign, body) = match p.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, p.strip_prefix('+').unwrap_or(&p)),
        };
        if let Some(num) = body.strip_suffix('w') {
            let num = num.strip_suffix('*').unwrap_or(num);
            let v: BigInt = if num.is_empty() { 1.into() } else { num.parse().ok()? };
            b += v * sign;
        } else {
            let v: BigInt = body.parse().ok()?;
            a += v * sign;
        }
    }
    Some(AlgInt { coords: [a, b] })
}

pub fn parse_form(text: &str) -> Result<CubicForm> {
    let mut d = None;
    let mut s = None;
    let mut terms = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let ln = n + 1;
        if line.is_empty() {
            continue;
        }
        if line.starts_with("field") {
            d = Some(parse_header(line, "field", "d").ok_or_else(|| parse_err(ln, "expected `field d=<d>`"))?);
            continue;
        }
        if line.starts_with("vars") {
            let v = parse_header(line, "vars", "s").ok_or_else(|| parse_err(ln, "expected `vars s=<s>`"))?;
            if v < 1 {
                return Err(parse_err(ln, "s must be positive"));
            }
            s = Some(v as usize);
            continue;
        }
        let (Some(_), Some(sv)) = (d, s) else {
            return Err(parse_err(ln, "the `field` and `vars` headers must come first"));
        };
        let (mono, coeff) = line.split_once(':').ok_or_else(|| parse_err(ln, "expected `monomial : coefficient`"))?;
        let idx = parse_monomial(mono.trim(), sv, ln)?;
        let a = parse_coeff(coeff).ok_or_else(|| parse_err(ln, format!("malformed coefficient {:?}", coeff.trim())))?;
        terms.push((idx, a));
    }
    let d = d.ok_or_else(|| parse_err(0, "missing `field d=<d>` header"))?;
    let s = s.ok_or_else(|| parse_err(0, "missing `vars s=<s>` header"))?;
    CubicForm::from_poly(make_field(d)?, s, &terms)
}
