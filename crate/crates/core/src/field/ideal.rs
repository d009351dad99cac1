//! Integral ideals as 2x2 Hermite lattices, denominator ideals and the
//! residue classes of K/O.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgInt, FieldElem, FieldSpec};
use crate::error::{Error, Result};
use crate::exec::Ctx;
use crate::hnf;

/// Columns `(a, 0)` and `(b, c)` with `0 <= b < a`; norm `a * c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IdealFile", into = "IdealFile")]
pub struct IdealRep {
    pub hnf: [[i64; 2]; 2],
    pub norm: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealFile {
    pub hnf: [[i64; 2]; 2],
}

impl TryFrom<IdealFile> for IdealRep {
    type Error = Error;

    fn try_from(f: IdealFile) -> Result<Self> {
        let [[a, b], [z, c]] = f.hnf;
        if a <= 0 || c <= 0 || z != 0 || b < 0 || b >= a {
            return Err(Error::invalid("ideal matrix is not in Hermite form"));
        }
        Ok(IdealRep { hnf: f.hnf, norm: a * c })
    }
}

impl From<IdealRep> for IdealFile {
    fn from(j: IdealRep) -> Self {
        IdealFile { hnf: j.hnf }
    }
}

impl IdealRep {
    pub fn unit() -> Self {
        IdealRep { hnf: [[1, 0], [0, 1]], norm: 1 }
    }

    fn from_mat(m: &hnf::Mat) -> Result<Self> {
        let to = |x: i128| i64::try_from(x).map_err(|_| Error::invalid("ideal entry overflows i64"));
        let hnf = [[to(m[0][0])?, to(m[0][1])?], [0, to(m[1][1])?]];
        Ok(IdealRep { hnf, norm: hnf[0][0] * hnf[1][1] })
    }

    /// Checks closure under multiplication by w.
    pub fn from_hnf(f: &FieldSpec, hnf: [[i64; 2]; 2]) -> Result<Self> {
        let j = IdealRep::try_from(IdealFile { hnf })?;
        if !j.is_ideal(f) {
            return Err(Error::invalid("lattice is not closed under multiplication by w"));
        }
        Ok(j)
    }

    pub fn columns(&self) -> [[i128; 2]; 2] {
        let [[a, b], [_, c]] = self.hnf;
        [[a as i128, 0], [b as i128, c as i128]]
    }

    pub fn is_ideal(&self, f: &FieldSpec) -> bool {
        self.columns().iter().all(|&col| self.contains_i(f.mul_i(col, [0, 1])))
    }

    pub fn from_generators(f: &FieldSpec, gens: &[[i128; 2]]) -> Result<Self> {
        let mut lat = Vec::new();
        for &g in gens {
            lat.push(g.to_vec());
            lat.push(f.mul_i(g, [0, 1]).to_vec());
        }
        IdealRep::from_mat(&hnf::hermite_basis(&lat, 2)?)
    }

    pub fn principal(f: &FieldSpec, g: [i128; 2]) -> Result<Self> {
        IdealRep::from_generators(f, &[g])
    }

    pub fn contains_i(&self, x: [i128; 2]) -> bool {
        let [[a, b], [_, c]] = self.hnf;
        let (a, b, c) = (a as i128, b as i128, c as i128);
        if x[1] % c != 0 {
            return false;
        }
        (x[0] - (x[1] / c) * b) % a == 0
    }

    pub fn contains(&self, x: &AlgInt) -> bool {
        let [[a, b], [_, c]] = self.hnf;
        let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
        let (q, r) = x.coords[1].div_rem(&c);
        r.is_zero() && (&x.coords[0] - q * b).is_multiple_of(&a)
    }

    pub fn mul(&self, f: &FieldSpec, o: &IdealRep) -> Result<Self> {
        let mut gens = Vec::new();
        for x in self.columns() {
            for y in o.columns() {
                gens.push(f.mul_i(x, y).to_vec());
            }
        }
        IdealRep::from_mat(&hnf::hermite_basis(&gens, 2)?)
    }

    pub fn pow(&self, f: &FieldSpec, e: u32) -> Result<Self> {
        let mut acc = IdealRep::unit();
        for _ in 0..e {
            acc = acc.mul(f, self)?;
        }
        Ok(acc)
    }

    pub fn conj(&self, f: &FieldSpec) -> Result<Self> {
        let gens: Vec<Vec<i128>> = self.columns().iter().map(|&c| f.conj_i(c).to_vec()).collect();
        IdealRep::from_mat(&hnf::hermite_basis(&gens, 2)?)
    }

    pub fn intersect(&self, o: &IdealRep) -> Result<Self> {
        // x = H1 t lies in L2 iff adj(H2) H1 t = 0 mod det(H2)
        let [[a2, b2], [_, c2]] = o.hnf;
        let adj = [[c2 as i128, -(b2 as i128)], [0, a2 as i128]];
        let h1: hnf::Mat = vec![
            vec![self.hnf[0][0] as i128, self.hnf[0][1] as i128],
            vec![0, self.hnf[1][1] as i128],
        ];
        let rows: Vec<Vec<i128>> = (0..2)
            .map(|i| (0..2).map(|j| adj[i][0] * h1[0][j] + adj[i][1] * h1[1][j]).collect())
            .collect();
        let t = hnf::kernel_mod(&rows, 2, o.norm as i128)?;
        let gens: Vec<Vec<i128>> = hnf::columns(&t).iter().map(|c| hnf::mat_vec(&h1, c)).collect();
        IdealRep::from_mat(&hnf::hermite_basis(&gens, 2)?)
    }

    /// `self` divides `o`, i.e. `o` is contained in `self`.
    pub fn divides(&self, o: &IdealRep) -> bool {
        o.columns().iter().all(|&c| self.contains_i(c))
    }

    pub fn is_prime(&self, f: &FieldSpec) -> bool {
        let n = self.norm;
        if n > 1 && is_prime_u64(n as u64) {
            return true;
        }
        let p = (n as f64).sqrt().round() as i64;
        p * p == n
            && is_prime_u64(p as u64)
            && self.hnf == [[p, 0], [0, p]]
            && ideals_of_norm(f, p).is_empty()
    }

    /// Prime ideals lying over the rational prime `p`.
    pub fn primes_over(f: &FieldSpec, p: i64) -> Vec<IdealRep> {
        let split = ideals_of_norm(f, p);
        if split.is_empty() {
            vec![IdealRep { hnf: [[p, 0], [0, p]], norm: p * p }]
        } else {
            split
        }
    }

    /// Prime ideals containing `self`, found by trial division of the norm.
    pub fn prime_divisors(&self, f: &FieldSpec) -> Vec<IdealRep> {
        let mut out = Vec::new();
        let mut n = self.norm;
        let mut p = 2;
        while n > 1 {
            if p * p > n {
                p = n;
            }
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                out.extend(IdealRep::primes_over(f, p).into_iter().filter(|q| q.divides(self)));
            }
            p += 1;
        }
        out
    }

    /// Largest `e` with `p^e` dividing `self`.
    pub fn valuation(&self, f: &FieldSpec, p: &IdealRep) -> Result<u32> {
        let mut e = 0;
        let mut pe = *p;
        while pe.divides(self) {
            e += 1;
            pe = pe.mul(f, p)?;
        }
        Ok(e)
    }

    pub fn residue_field(&self, f: &FieldSpec) -> Result<ResidueField> {
        if !self.is_prime(f) {
            return Err(Error::invalid(format!("ideal {:?} is not prime", self.hnf)));
        }
        let [[a, b], [_, c]] = self.hnf;
        Ok(if c == 1 {
            // b + w lies in the ideal, so w = -b
            ResidueField { p: a, degree: 1, w_image: (-b).rem_euclid(a), t1: f.t1, n2: f.n2 }
        } else {
            ResidueField { p: a, degree: 2, w_image: 0, t1: f.t1, n2: f.n2 }
        })
    }
}

/// O / p for a prime ideal p, with elements as coordinate pairs mod `p`.
/// Degree-one fields keep the second coordinate zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueField {
    pub p: i64,
    pub degree: u32,
    w_image: i64,
    t1: i64,
    n2: i64,
}

pub type ResidueElem = [i64; 2];

impl ResidueField {
    pub fn size(&self) -> i64 {
        self.p.pow(self.degree)
    }

    pub fn reduce(&self, x: [i128; 2]) -> ResidueElem {
        let p = self.p as i128;
        if self.degree == 1 {
            [((x[0] + x[1] * self.w_image as i128).rem_euclid(p)) as i64, 0]
        } else {
            [x[0].rem_euclid(p) as i64, x[1].rem_euclid(p) as i64]
        }
    }

    pub fn reduce_big(&self, x: &AlgInt) -> ResidueElem {
        let p = BigInt::from(self.p);
        let r = |v: &BigInt| v.mod_floor(&p).to_i128().expect("reduced value is small");
        self.reduce([r(&x.coords[0]), r(&x.coords[1])])
    }

    pub fn is_zero(&self, x: ResidueElem) -> bool {
        x == [0, 0]
    }

    pub fn sub(&self, x: ResidueElem, y: ResidueElem) -> ResidueElem {
        [(x[0] - y[0]).rem_euclid(self.p), (x[1] - y[1]).rem_euclid(self.p)]
    }

    pub fn mul(&self, x: ResidueElem, y: ResidueElem) -> ResidueElem {
        let p = self.p as i128;
        let (x0, x1, y0, y1) = (x[0] as i128, x[1] as i128, y[0] as i128, y[1] as i128);
        let hi = x1 * y1;
        [
            (x0 * y0 - self.n2 as i128 * hi).rem_euclid(p) as i64,
            (x0 * y1 + x1 * y0 + self.t1 as i128 * hi).rem_euclid(p) as i64,
        ]
    }

    pub fn inv(&self, x: ResidueElem) -> Option<ResidueElem> {
        if self.is_zero(x) {
            return None;
        }
        let p = self.p as i128;
        let conj = [(x[0] as i128 + self.t1 as i128 * x[1] as i128).rem_euclid(p) as i64, (-x[1]).rem_euclid(self.p)];
        let n = self.mul(x, conj)[0];
        let ninv = mod_inverse(n as i128, p)? as i64;
        Some(self.mul(conj, [ninv, 0]))
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

pub fn is_prime_u64(n: u64) -> bool {
    crate::primes::is_prime(n)
}

/// All ideals of the given norm, in Hermite order.
pub fn ideals_of_norm(f: &FieldSpec, n: i64) -> Vec<IdealRep> {
    let mut out = Vec::new();
    for a in (1..=n).filter(|a| n % a == 0) {
        let c = n / a;
        for b in 0..a {
            let j = IdealRep { hnf: [[a, b], [0, c]], norm: n };
            if j.is_ideal(f) {
                out.push(j);
            }
        }
    }
    out
}

/// `{x in O : x g in O}` as a Hermite lattice.
///
/// # Panics
/// If the reduced denominator of `g` does not fit in an `i64`.
pub fn denominator_ideal(g: &FieldElem, f: &FieldSpec) -> IdealRep {
    let den = g.den.to_i64().expect("denominator fits in i64") as i128;
    if den == 1 {
        return IdealRep::unit();
    }
    let bd = BigInt::from(den);
    let r = |v: &BigInt| v.mod_floor(&bd).to_i128().expect("reduced");
    let num = [r(&g.num.coords[0]), r(&g.num.coords[1])];
    let nw = f.mul_i(num, [0, 1]);
    let rows = vec![vec![num[0], nw[0]], vec![num[1], nw[1]]];
    let k = hnf::kernel_mod(&rows, 2, den).expect("modulus is positive");
    IdealRep::from_mat(&k).expect("kernel entries are bounded by the modulus")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    pub gamma: FieldElem,
    pub denom_ideal: IdealRep,
}

impl ResidueClass {
    pub fn new(f: &FieldSpec, g: &FieldElem) -> Self {
        let gamma = g.reduce_mod_o();
        let denom_ideal = denominator_ideal(&gamma, f);
        ResidueClass { gamma, denom_ideal }
    }

    pub fn zero() -> Self {
        ResidueClass { gamma: FieldElem::zero(), denom_ideal: IdealRep::unit() }
    }

    pub fn norm(&self) -> i64 {
        self.denom_ideal.norm
    }
}

/// Every class of K/O whose denominator ideal has norm at most `r`, grouped
/// by norm, then ideal, then canonical coordinates.
pub fn enumerate_residues(r: f64, f: &FieldSpec, ctx: &Ctx) -> Result<Vec<ResidueClass>> {
    if !(r >= 1.0) {
        return Err(Error::invalid("R must be at least 1"));
    }
    let rmax = r.floor() as i64;
    let ideals: Vec<IdealRep> = (1..=rmax).flat_map(|n| ideals_of_norm(f, n)).collect();
    let total: u128 = ideals.iter().map(|j| j.norm as u128).sum();
    ctx.check("residue classes", total)?;
    let per = ctx.map(ideals.len(), |k| classes_with_ideal(f, &ideals[k]));
    Ok(per.into_iter().flatten().collect())
}

/// Classes whose denominator ideal is exactly `j`; they lie in conj(j)/N(j).
fn classes_with_ideal(f: &FieldSpec, j: &IdealRep) -> Vec<ResidueClass> {
    let n = j.norm as i128;
    let jbar = j.conj(f).expect("conjugate of an ideal");
    let [c1, c2] = jbar.columns();
    let (ra, rc) = (n / c1[0], n / c2[1]);
    let mut out = Vec::new();
    for t1 in 0..ra {
        for t2 in 0..rc {
            let x = [t1 * c1[0] + t2 * c2[0], t2 * c2[1]];
            let g = FieldElem::new(AlgInt::from_small(x), n).expect("positive").reduce_mod_o();
            let a = denominator_ideal(&g, f);
            if a == *j {
                out.push(ResidueClass { gamma: g, denom_ideal: a });
            }
        }
    }
    out.sort_by(|x, y| x.gamma.num.coords.cmp(&y.gamma.num.coords).then(x.gamma.den.cmp(&y.gamma.den)));
    out
}
