//! Sparse multivariate polynomials and small linear algebra over K.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AlgInt, FieldElem, FieldSpec};
use crate::forms::CubicForm;

pub type Exps = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyRepr", from = "PolyRepr")]
pub struct Poly {
    pub nvars: usize,
    /// Exponent vector to nonzero coefficient.
    pub terms: BTreeMap<Exps, FieldElem>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    terms: Vec<(Exps, FieldElem)>,
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> Self {
        PolyRepr { nvars: p.nvars, terms: p.terms.into_iter().collect() }
    }
}

impl From<PolyRepr> for Poly {
    fn from(r: PolyRepr) -> Self {
        Poly { nvars: r.nvars, terms: r.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

pub fn zero_elem() -> FieldElem {
    FieldElem::from_int(AlgInt::zero())
}

pub fn int_elem(n: i64) -> FieldElem {
    FieldElem::from_int(AlgInt::new(n, 0))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElem) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c, None);
        p
    }

    /// `sum_i c_i x_i`
    pub fn linear(coeffs: &[FieldElem]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone(), None);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exps, c: FieldElem, f: Option<&FieldSpec>) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = f.expect("field needed to combine terms").elem_add(&old, &c);
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    pub fn add(&self, f: &FieldSpec, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone(), Some(f));
        }
        p
    }

    pub fn sub(&self, f: &FieldSpec, o: &Poly) -> Poly {
        self.add(f, &o.scale(f, &int_elem(-1)))
    }

    pub fn scale(&self, f: &FieldSpec, c: &FieldElem) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), f.elem_mul(a, c), Some(f));
        }
        p
    }

    pub fn mul(&self, f: &FieldSpec, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e1, a) in &self.terms {
            for (e2, b) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                p.add_term(e, f.elem_mul(a, b), Some(f));
            }
        }
        p
    }

    pub fn conj(&self, f: &FieldSpec) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), f.elem_conj(a), Some(f));
        }
        p
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElem {
        self.terms.get(e).cloned().unwrap_or_else(zero_elem)
    }

    /// Every coefficient lies in Q.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.num.coords[1].is_zero_big())
    }

    /// Exact division by a nonzero linear form; the remainder is returned
    /// alongside and is zero exactly when the form divides.
    pub fn div_linear(&self, f: &FieldSpec, l: &Poly) -> Result<(Poly, Poly)> {
        if l.degree() != 1 || l.terms.keys().any(|e| e.iter().sum::<u32>() != 1) {
            return Err(Error::invalid("divisor must be a linear form"));
        }
        // lex-leading variable of l
        let (lead_e, lead_c) = l.terms.iter().next_back().expect("nonzero");
        let k = lead_e.iter().position(|&x| x == 1).expect("linear");
        let inv = f.elem_inv(lead_c)?;
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.nvars);
        let mut out = Poly::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e[k] == 0 {
                rem.terms.remove(&e);
                out.add_term(e, c, Some(f));
                continue;
            }
            let mut qe = e.clone();
            qe[k] -= 1;
            let qc = f.elem_mul(&c, &inv);
            let mut t = Poly::zero(self.nvars);
            t.add_term(qe.clone(), qc.clone(), None);
            rem = rem.sub(f, &t.mul(f, l));
            quo.add_term(qe, qc, Some(f));
        }
        Ok((quo, out))
    }

    /// Partial derivative in `x_k`.
    pub fn derivative(&self, f: &FieldSpec, k: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut e2 = e.clone();
                e2[k] -= 1;
                p.add_term(e2, f.elem_mul(c, &int_elem(e[k] as i64)), Some(f));
            }
        }
        p
    }

    /// `sum_k w_k d/dx_k`
    pub fn directional(&self, f: &FieldSpec, w: &[FieldElem]) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (k, wk) in w.iter().enumerate() {
            if !wk.is_zero() {
                p = p.add(f, &self.derivative(f, k).scale(f, wk));
            }
        }
        p
    }

    pub fn eval(&self, f: &FieldSpec, x: &[FieldElem]) -> FieldElem {
        let mut acc = zero_elem();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = f.elem_mul(&t, &x[i]);
                }
            }
            acc = f.elem_add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i -> subs[i]`.
    pub fn compose(&self, f: &FieldSpec, subs: &[Poly]) -> Poly {
        let n = subs.first().map_or(0, |p| p.nvars);
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(f, &subs[i]);
                }
            }
            out = out.add(f, &t);
        }
        out
    }
}

trait BigZero {
    fn is_zero_big(&self) -> bool;
}

impl BigZero for num_bigint::BigInt {
    fn is_zero_big(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// C as a polynomial in s variables.
pub fn form_poly(c: &CubicForm) -> Poly {
    let mut p = Poly::zero(c.s);
    for (idx, a) in c.poly_terms() {
        let mut e = vec![0u32; c.s];
        for i in idx {
            e[i] += 1;
        }
        p.add_term(e, FieldElem::from_int(a), Some(&c.field));
    }
    p
}

/// C(sum_k y_k u_k) as a polynomial in the y's.
pub fn restrict(c: &CubicForm, basis: &[Vec<FieldElem>]) -> Poly {
    let subs: Vec<Poly> =
        (0..c.s).map(|i| Poly::linear(&basis.iter().map(|u| u[i].clone()).collect::<Vec<_>>())).collect();
    form_poly(c).compose(&c.field, &subs)
}

/// Row echelon form over K; returns the pivot columns.
pub fn echelon(f: &FieldSpec, m: &mut [Vec<FieldElem>]) -> Result<Vec<usize>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = f.elem_inv(&m[r][col])?;
        for x in m[r].iter_mut() {
            *x = f.elem_mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let k = m[i][col].clone();
                for j in 0..cols {
                    let t = f.elem_mul(&k, &m[r][j]);
                    m[i][j] = f.elem_sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Ok(pivots)
}

pub fn rank(f: &FieldSpec, vecs: &[Vec<FieldElem>]) -> Result<usize> {
    let mut m = vecs.to_vec();
    Ok(echelon(f, &mut m)?.len())
}

/// Basis of `{x : sum_j rows[i][j] x_j = 0 for all i}`.
pub fn kernel(f: &FieldSpec, rows: &[Vec<FieldElem>], n: usize) -> Result<Vec<Vec<FieldElem>>> {
    let mut m = rows.to_vec();
    let pivots = echelon(f, &mut m)?;
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero_elem(); n];
        v[free] = int_elem(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.elem_sub(&zero_elem(), &m[r][free]);
        }
        out.push(v);
    }
    Ok(out)
}

/// Coordinates of `x` in the span of `basis`, if it lies there.
pub fn solve(f: &FieldSpec, basis: &[Vec<FieldElem>], x: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
    let n = x.len();
    let k = basis.len();
    // augmented system: rows are coordinates
    let mut m: Vec<Vec<FieldElem>> =
        (0..n).map(|i| basis.iter().map(|b| b[i].clone()).chain(std::iter::once(x[i].clone())).collect()).collect();
    let pivots = echelon(f, &mut m)?;
    if pivots.contains(&k) {
        return Ok(None);
    }
    let mut y = vec![zero_elem(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        y[pc] = m[r][k].clone();
    }
    Ok(Some(y))
}
