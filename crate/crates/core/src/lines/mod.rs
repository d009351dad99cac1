//! Linear spaces on cubic hypersurfaces: pencil expansion, bounded search,
//! descent from K to Q, normalization and the prime demonstration.

pub mod poly;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Ctx;
use crate::field::{AlgInt, FieldElem, FieldSpec};
use crate::forms::CubicForm;
use crate::primes::{is_prime, sieve};
use poly::{echelon, form_poly, int_elem, kernel, rank, restrict, solve, zero_elem, Poly};

/// Hard cap on candidate pairs in the bounded line search.
pub const LINE_PAIR_CAP: u128 = 100_000_000;
/// Largest progression length handled by the sieve.
pub const MAX_AP_LEN: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldTag {
    Rational,
    Quadratic(i64),
}

/// Projective linear space of dimension `dim`, spanned by `dim + 1` vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSpace {
    pub dim: usize,
    pub basis: Vec<Vec<FieldElem>>,
    pub field_tag: FieldTag,
}

fn is_rational_elem(x: &FieldElem) -> bool {
    num_traits::Zero::is_zero(&x.num.coords[1])
}

pub fn int_vec(v: &[i64]) -> Vec<FieldElem> {
    v.iter().map(|&x| int_elem(x)).collect()
}

impl LinearSpace {
    pub fn new(f: &FieldSpec, basis: Vec<Vec<FieldElem>>) -> Result<Self> {
        let s = basis.first().map_or(0, |v| v.len());
        if basis.is_empty() || s == 0 || basis.iter().any(|v| v.len() != s) {
            return Err(Error::invalid("basis vectors must be nonempty and of equal length"));
        }
        if rank(f, &basis)? != basis.len() {
            return Err(Error::invalid("basis vectors are linearly dependent"));
        }
        let rational = basis.iter().flatten().all(is_rational_elem);
        let field_tag = if rational { FieldTag::Rational } else { FieldTag::Quadratic(f.d) };
        Ok(LinearSpace { dim: basis.len() - 1, basis, field_tag })
    }

    pub fn from_ints(f: &FieldSpec, basis: &[Vec<i64>]) -> Result<Self> {
        LinearSpace::new(f, basis.iter().map(|v| int_vec(v)).collect())
    }

    pub fn s(&self) -> usize {
        self.basis[0].len()
    }

    pub fn conj(&self, f: &FieldSpec) -> LinearSpace {
        let basis = self.basis.iter().map(|v| v.iter().map(|x| f.elem_conj(x)).collect()).collect();
        LinearSpace { dim: self.dim, basis, field_tag: self.field_tag }
    }

    pub fn is_rational(&self) -> bool {
        self.field_tag == FieldTag::Rational
    }

    /// C vanishes identically on the space.
    pub fn on_form(&self, c: &CubicForm) -> bool {
        restrict(c, &self.basis).is_zero()
    }

    /// Same span as `o`.
    pub fn same_span(&self, f: &FieldSpec, o: &LinearSpace) -> Result<bool> {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Ok(self.dim == o.dim && rank(f, &all)? == self.dim + 1)
    }
}

/// Reduced row echelon basis of the span of `vecs`.
fn rref_basis(f: &FieldSpec, vecs: &[Vec<FieldElem>]) -> Result<Vec<Vec<FieldElem>>> {
    let mut m = vecs.to_vec();
    let r = echelon(f, &mut m)?.len();
    m.truncate(r);
    Ok(m)
}

// ---------------------------------------------------------------- pencil

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilExpansion {
    /// C(v)
    pub c0: FieldElem,
    /// Q_i(v), the coefficient of t_i.
    pub quad: Vec<FieldElem>,
    /// L_ij(v) for i <= j, the coefficient of t_i t_j.
    pub lin: Vec<((usize, usize), FieldElem)>,
    /// C(t_1 w_1 + ... + t_m w_m) in the variables t.
    pub tail: Poly,
}

impl PencilExpansion {
    pub fn m(&self) -> usize {
        self.quad.len()
    }

    /// The cubic polynomial in t put back together from the pieces.
    pub fn reassemble(&self, f: &FieldSpec) -> Poly {
        let m = self.m();
        let mut p = Poly::constant(m, self.c0.clone());
        for (i, q) in self.quad.iter().enumerate() {
            let mut e = vec![0; m];
            e[i] = 1;
            p = p.add(f, &mono(m, e, q.clone()));
        }
        for ((i, j), l) in &self.lin {
            let mut e = vec![0; m];
            e[*i] += 1;
            e[*j] += 1;
            p = p.add(f, &mono(m, e, l.clone()));
        }
        p.add(f, &self.tail)
    }

    pub fn all_vanish(&self) -> bool {
        self.c0.is_zero()
            && self.quad.iter().all(FieldElem::is_zero)
            && self.lin.iter().all(|(_, l)| l.is_zero())
            && self.tail.is_zero()
    }
}

fn mono(n: usize, e: Vec<u32>, c: FieldElem) -> Poly {
    let mut p = Poly::zero(n);
    if !c.is_zero() {
        p.terms.insert(e, c);
    }
    p
}

/// `C(v + sum t_i w_i)` by direct substitution.
pub fn pencil_direct(c: &CubicForm, v: &[FieldElem], ws: &[Vec<FieldElem>]) -> Poly {
    let m = ws.len();
    let subs: Vec<Poly> = (0..c.s)
        .map(|k| {
            let mut coeffs: Vec<FieldElem> = ws.iter().map(|w| w[k].clone()).collect();
            coeffs.truncate(m);
            Poly::linear(&coeffs).add(&c.field, &Poly::constant(m, v[k].clone()))
        })
        .collect();
    form_poly(c).compose(&c.field, &subs)
}

/// Pieces from directional derivatives of C at v.
pub fn expand_pencil(c: &CubicForm, v: &[FieldElem], ws: &[Vec<FieldElem>]) -> Result<PencilExpansion> {
    let f = &c.field;
    if v.len() != c.s || ws.is_empty() || ws.iter().any(|w| w.len() != c.s) {
        return Err(Error::invalid("v and w_i must have s coordinates and m >= 1"));
    }
    let m = ws.len();
    let cp = form_poly(c);
    let c0 = cp.eval(f, v);
    let first: Vec<Poly> = ws.iter().map(|w| cp.directional(f, w)).collect();
    let quad = first.iter().map(|d| d.eval(f, v)).collect();
    let half = FieldElem::new(AlgInt::one(), 2).expect("nonzero");
    let mut lin = Vec::new();
    for i in 0..m {
        for j in i..m {
            let mut l = first[i].directional(f, &ws[j]).eval(f, v);
            if i == j {
                l = f.elem_mul(&l, &half);
            }
            lin.push(((i, j), l));
        }
    }
    let tail = pencil_direct(c, &vec![zero_elem(); c.s], ws);
    Ok(PencilExpansion { c0, quad, lin, tail })
}

// ---------------------------------------------------------------- search

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFound {
    pub v: Vec<i64>,
    pub w: Vec<i64>,
    pub height: i64,
    pub zeros_scanned: usize,
}

pub fn is_rational_form(c: &CubicForm) -> bool {
    c.poly_terms().iter().all(|(_, a)| num_traits::Zero::is_zero(&a.coords[1]))
}

fn primitive_normalized(v: &[i64]) -> bool {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    g == 1 && v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Primitive integer zeros of C with `|x| <= b`, first nonzero coordinate
/// positive, ordered by height and then lexicographically.
pub fn bounded_zeros(c: &CubicForm, b: i64, ctx: &Ctx) -> Result<Vec<Vec<i64>>> {
    if b < 1 {
        return Err(Error::invalid("height bound must be at least 1"));
    }
    let side = (2 * b + 1) as u128;
    let total = side.checked_pow(c.s as u32).unwrap_or(u128::MAX);
    ctx.check("line search vectors", total)?;
    let comp = c.compiled()?;
    let decode = |mut k: u64| -> Vec<i64> {
        let mut v = vec![0; c.s];
        for x in v.iter_mut().rev() {
            *x = (k % side as u64) as i64 - b;
            k /= side as u64;
        }
        v
    };
    let mut zeros = ctx
        .reduce(
            total as u64,
            |r| {
                r.map(&decode)
                    .filter(|v| primitive_normalized(v) && comp.value_flat(&flat(v)) == [0, 0])
                    .collect::<Vec<_>>()
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )
        .unwrap_or_default();
    zeros.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    Ok(zeros)
}

fn flat(v: &[i64]) -> Vec<i64> {
    v.iter().flat_map(|&x| [x, 0]).collect()
}

/// For zeros v, w of C, the t and t^2 coefficients of C(v + t w) are
/// `(C(v+w) -+ C(v-w)) / 2`, so both vanish iff C(v+w) = C(v-w) = 0.
fn spans_line(comp: &crate::forms::Compiled, v: &[i64], w: &[i64]) -> bool {
    let plus: Vec<i64> = v.iter().zip(w).map(|(a, b)| a + b).collect();
    let minus: Vec<i64> = v.iter().zip(w).map(|(a, b)| a - b).collect();
    comp.value_flat(&flat(&plus)) == [0, 0] && comp.value_flat(&flat(&minus)) == [0, 0]
}

/// Exhaustive search for a rational line of height at most `b`.
pub fn find_line_bounded(c: &CubicForm, b: i64, ctx: &Ctx) -> Result<Option<LineFound>> {
    if !is_rational_form(c) {
        return Err(Error::invalid("line search needs a form with rational coefficients"));
    }
    let zeros = bounded_zeros(c, b, ctx)?;
    let k = zeros.len() as u128;
    let pairs = k * k.saturating_sub(1) / 2;
    if pairs > LINE_PAIR_CAP {
        return Err(Error::Budget { what: "line search pairs", needed: pairs, cap: LINE_PAIR_CAP });
    }
    ctx.check("line search pairs", pairs)?;
    let comp = c.compiled()?;
    let found = ctx.find_first(zeros.len(), |i| {
        zeros[i + 1..].iter().find(|w| spans_line(&comp, &zeros[i], w)).map(|w| (i, w.clone()))
    });
    Ok(found.map(|(i, w)| {
        let v = zeros[i].clone();
        let height = v.iter().chain(&w).map(|x| x.abs()).max().unwrap_or(0);
        LineFound { v, w, height, zeros_scanned: zeros.len() }
    }))
}

// ---------------------------------------------------------------- descent

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescentOutcome {
    /// V = V*, returned in rational echelon form.
    AlreadyRational,
    /// C vanishes on W; any rational subspace of W of the right dimension works.
    Degenerate,
    /// The third component L was recovered by exact division.
    Descended,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentResult {
    pub outcome: DescentOutcome,
    pub space: LinearSpace,
    /// Rational basis of W = V + V*.
    pub w_basis: Vec<Vec<FieldElem>>,
    /// Linear forms in W coordinates for V, V* and L (empty unless descended).
    pub factors: Vec<Vec<FieldElem>>,
    /// C|_W in W coordinates.
    pub restricted: Poly,
}

fn linear_coeffs(p: &Poly) -> Vec<FieldElem> {
    (0..p.nvars)
        .map(|k| {
            let mut e = vec![0; p.nvars];
            e[k] = 1;
            p.coeff(&e)
        })
        .collect()
}

/// Passes from a K-rational space V on C to a rational one of the same
/// dimension through the residual component of C restricted to V + V*.
pub fn conjugate_descent(c: &CubicForm, v: &LinearSpace) -> Result<DescentResult> {
    let f = &c.field;
    if !is_rational_form(c) {
        return Err(Error::invalid("descent needs a form with rational coefficients"));
    }
    if v.s() != c.s {
        return Err(Error::invalid("V lives in the wrong number of coordinates"));
    }
    if !v.on_form(c) {
        return Err(Error::Hypothesis("C does not vanish on V".into()));
    }
    let m1 = v.dim + 1;
    let vstar = v.conj(f);
    let mut both = v.basis.clone();
    both.extend(vstar.basis.iter().cloned());
    let w_basis = rref_basis(f, &both)?;
    if w_basis.iter().flatten().any(|x| !is_rational_elem(x)) {
        return Err(Error::Violation("echelon basis of V + V* is not rational".into()));
    }
    if w_basis.len() == m1 {
        let space = LinearSpace::new(f, w_basis.clone())?;
        let restricted = restrict(c, &w_basis);
        return Ok(DescentResult { outcome: DescentOutcome::AlreadyRational, space, w_basis, factors: vec![], restricted });
    }
    if w_basis.len() != m1 + 1 {
        return Err(Error::Hypothesis(format!(
            "V + V* has dimension {} but {} is needed",
            w_basis.len(),
            m1 + 1
        )));
    }
    let restricted = restrict(c, &w_basis);
    if restricted.is_zero() {
        let space = LinearSpace::new(f, w_basis[..m1].to_vec())?;
        return Ok(DescentResult { outcome: DescentOutcome::Degenerate, space, w_basis, factors: vec![], restricted });
    }
    // V inside W is the kernel of one linear form.
    let coords: Vec<Vec<FieldElem>> = v
        .basis
        .iter()
        .map(|u| solve(f, &w_basis, u)?.ok_or_else(|| Error::Violation("V is not inside W".into())))
        .collect::<Result<_>>()?;
    let lv = kernel(f, &coords, m1 + 1)?;
    if lv.len() != 1 {
        return Err(Error::Violation("V is not a hyperplane in W".into()));
    }
    let lv = lv.into_iter().next().expect("one form");
    let lvs: Vec<FieldElem> = lv.iter().map(|x| f.elem_conj(x)).collect();
    let (q1, r1) = restricted.div_linear(f, &Poly::linear(&lv))?;
    if !r1.is_zero() {
        return Err(Error::Violation("C|_W is not divisible by the form cutting out V".into()));
    }
    let (q2, r2) = q1.div_linear(f, &Poly::linear(&lvs))?;
    if !r2.is_zero() {
        return Err(Error::Violation("C|_W is not divisible by the form cutting out V*".into()));
    }
    if q2.degree() != 1 || q2.terms.keys().any(|e| e.iter().sum::<u32>() != 1) {
        return Err(Error::Violation("residual factor is not a linear form".into()));
    }
    let mut l = linear_coeffs(&q2);
    let lead = l.iter().find(|x| !x.is_zero()).cloned().expect("nonzero form");
    let inv = f.elem_inv(&lead)?;
    l = l.iter().map(|x| f.elem_mul(x, &inv)).collect();
    if !l.iter().all(is_rational_elem) {
        return Err(Error::Violation("residual component is not fixed by conjugation".into()));
    }
    let ker = kernel(f, std::slice::from_ref(&l), m1 + 1)?;
    let basis: Vec<Vec<FieldElem>> = ker
        .iter()
        .map(|y| {
            (0..c.s)
                .map(|i| y.iter().zip(&w_basis).fold(zero_elem(), |acc, (yk, wk)| f.elem_add(&acc, &f.elem_mul(yk, &wk[i]))))
                .collect()
        })
        .collect();
    let space = LinearSpace::new(f, rref_basis(f, &basis)?)?;
    if !space.is_rational() || !space.on_form(c) {
        return Err(Error::Violation("descended space fails the exact recheck".into()));
    }
    Ok(DescentResult { outcome: DescentOutcome::Descended, space, w_basis, factors: vec![lv, lvs, l], restricted })
}

// ---------------------------------------------------------------- normalize

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedLine {
    /// Coprime multipliers; 1 on passthrough slots.
    pub c: Vec<i64>,
    /// Offsets after centering; 0 on passthrough slots.
    pub b: Vec<i64>,
    /// Coordinates with a_i = b_i = 0, which stay 0 along the line.
    pub passthrough: Vec<bool>,
    /// (x, y) with a' = x a + y b.
    pub combination: (i64, i64),
    pub shift: i64,
}

impl NormalizedLine {
    /// Coordinate i at (t, u); passthrough slots are 0.
    pub fn point(&self, t: i64, u: i64) -> Vec<i64> {
        (0..self.c.len()).map(|i| if self.passthrough[i] { 0 } else { self.c[i] * (t + self.b[i] * u) }).collect()
    }

    pub fn max_offset(&self) -> i64 {
        self.b.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// C(a t + b u) as a polynomial in (t, u).
fn on_line_poly(c: &CubicForm, a: &[i64], b: &[i64]) -> Poly {
    let subs: Vec<Poly> = a.iter().zip(b).map(|(&x, &y)| Poly::linear(&[int_elem(x), int_elem(y)])).collect();
    form_poly(c).compose(&c.field, &subs)
}

fn combination_candidates(limit: i64) -> impl Iterator<Item = (i64, i64)> {
    std::iter::once((1, 0)).chain((1..=limit).flat_map(|r| {
        let mut shell: Vec<(i64, i64)> = (-r..=r)
            .flat_map(|x| (-r..=r).map(move |y| (x, y)))
            .filter(|&(x, y)| x.abs().max(y.abs()) == r && (x > 0 || (x == 0 && y > 0)))
            .collect();
        shell.sort();
        shell
    }))
}

/// Rescales the line `a t + b u` so every effective coordinate reads
/// `c_i (t + b_i u)`.
pub fn normalize_line(c: &CubicForm, a: &[i64], b: &[i64]) -> Result<NormalizedLine> {
    let s = c.s;
    if a.len() != s || b.len() != s {
        return Err(Error::invalid("a and b must have s coordinates"));
    }
    let f = &c.field;
    if rank(f, &[int_vec(a), int_vec(b)])? != 2 {
        return Err(Error::invalid("a and b are dependent, not a line"));
    }
    if !on_line_poly(c, a, b).is_zero() {
        return Err(Error::Hypothesis("C(a t + b u) does not vanish identically".into()));
    }
    let passthrough: Vec<bool> = (0..s).map(|i| a[i] == 0 && b[i] == 0).collect();
    let (x, y, a1, b1) = combination_candidates(s as i64 + 1)
        .find_map(|(x, y)| {
            let a1: Vec<i64> = (0..s).map(|i| x * a[i] + y * b[i]).collect();
            let ok = (0..s).all(|i| passthrough[i] || a1[i] != 0);
            ok.then(|| (x, y, a1, if x != 0 { b.to_vec() } else { a.to_vec() }))
        })
        .ok_or_else(|| Error::Violation("no combination clears the zero coordinates".into()))?;
    let eff: Vec<usize> = (0..s).filter(|&i| !passthrough[i]).collect();
    let big = eff.iter().fold(1i64, |l, &i| l.lcm(&a1[i]));
    let g = eff.iter().fold(0i64, |g, &i| g.gcd(&a1[i]));
    let mut cv = vec![1i64; s];
    let mut bv = vec![0i64; s];
    for &i in &eff {
        cv[i] = a1[i] / g;
        bv[i] = b1[i] * (big / a1[i]);
    }
    // t -> t - k u, with k minimizing max |b_i - k| and ties to smaller |k|
    let lo = eff.iter().map(|&i| bv[i]).min().unwrap_or(0);
    let hi = eff.iter().map(|&i| bv[i]).max().unwrap_or(0);
    let shift = [Integer::div_floor(&(lo + hi), &2), Integer::div_ceil(&(lo + hi), &2)]
        .into_iter()
        .min_by_key(|&k| ((k - lo).abs().max((hi - k).abs()), k.abs()))
        .expect("two candidates");
    for &i in &eff {
        bv[i] -= shift;
    }
    let line = NormalizedLine { c: cv, b: bv, passthrough, combination: (x, y), shift };
    let cs: Vec<i64> = (0..s).map(|i| if line.passthrough[i] { 0 } else { line.c[i] }).collect();
    let bs: Vec<i64> = (0..s).map(|i| cs[i] * line.b[i]).collect();
    if !on_line_poly(c, &cs, &bs).is_zero() {
        return Err(Error::Violation("normalized line fails the exact recheck".into()));
    }
    Ok(line)
}

// ---------------------------------------------------------------- primes

/// Returns `(l, d)` with `l + k d` prime for all `|k| <= m`, `d >= 1`, and
/// every term below `bound`. Ordered by largest term, then by `l`.
pub fn prime_ap_sieve(m: u64, bound: u64, ctx: &Ctx) -> Result<Option<(u64, u64)>> {
    if m < 1 {
        return Err(Error::invalid("M must be at least 1"));
    }
    if 2 * m + 1 > MAX_AP_LEN {
        return Err(Error::Hypothesis(format!(
            "progression length {} exceeds the desk limit {MAX_AP_LEN}",
            2 * m + 1
        )));
    }
    if bound > 1_000_000_000 {
        return Err(Error::invalid("bound must be at most 1e9"));
    }
    let table = (bound <= 100_000_000).then(|| sieve(bound as usize));
    let prime = |n: u64| match &table {
        Some(t) => (n as usize) < t.len() && t[n as usize],
        None => is_prime(n),
    };
    let n = bound.saturating_sub(2) as usize;
    Ok(ctx.find_first(n, |i| {
        let top = i as u64 + 2;
        if !prime(top) {
            return None;
        }
        let dmax = (top - 2) / (2 * m);
        (1..=dmax).rev().find_map(|d| {
            let l = top - m * d;
            (0..2 * m).all(|j| prime(top - (j + 1) * d)).then_some((l, d))
        })
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeSolution {
    pub line: NormalizedLine,
    /// `M = 2 max|b_i| + 1`
    pub m: u64,
    pub ell: u64,
    pub d: u64,
    /// `None` on passthrough slots.
    pub primes: Vec<Option<u64>>,
    pub x: Vec<i64>,
}

/// A solution `C(c_1 p_1, ..., c_s p_s) = 0` in primes from a rational line.
pub fn almost_prime_solution(c: &CubicForm, a: &[i64], b: &[i64], bound: u64, ctx: &Ctx) -> Result<PrimeSolution> {
    let line = normalize_line(c, a, b)?;
    let m = 2 * line.max_offset() as u64 + 1;
    if 2 * m + 1 > MAX_AP_LEN {
        return Err(Error::Hypothesis(format!(
            "max|b_i| = {} needs M = {m}, a progression of length {}; the desk limit is {MAX_AP_LEN}",
            line.max_offset(),
            2 * m + 1
        )));
    }
    let (ell, d) = prime_ap_sieve(m, bound, ctx)?
        .ok_or_else(|| Error::Exhausted(format!("no {}-term prime progression below {bound}", 2 * m + 1)))?;
    let s = c.s;
    let primes: Vec<Option<u64>> = (0..s)
        .map(|i| (!line.passthrough[i]).then(|| (ell as i64 + line.b[i] * d as i64) as u64))
        .collect();
    let x = line.point(ell as i64, d as i64);
    if primes.iter().flatten().any(|&p| !is_prime(p)) {
        return Err(Error::Violation("a slot is not prime".into()));
    }
    let distinct: std::collections::BTreeSet<_> = primes.iter().flatten().collect();
    if distinct.len() < 2 {
        return Err(Error::Violation("all primes are equal".into()));
    }
    let xv: Vec<AlgInt> = x.iter().map(|&v| AlgInt::new(v, 0)).collect();
    if !c.value(&xv).is_zero() {
        return Err(Error::Violation("C does not vanish at the solution".into()));
    }
    Ok(PrimeSolution { line, m, ell, d, primes, x })
}

/// `beta(m, d) = 2 m^2 + d (m + 1) + (0 if m even else 2)`
pub fn beta(m: u64, d: u64) -> u64 {
    2 * m * m + d * (m + 1) + if m % 2 == 0 { 0 } else { 2 }
}

/// Variables needed for a rational m-plane: `s > m + C(m+1, 2) + beta(m, 13)`.
pub fn line_threshold(m: u64) -> u64 {
    m + m * (m + 1) / 2 + beta(m, 13)
}
