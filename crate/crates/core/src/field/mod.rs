//! Imaginary quadratic fields K = Q(sqrt(-d)), their rings of integers O and
//! the Minkowski space K_R, all written in an integral basis {1, w}.

mod approx;
mod ideal;

pub use approx::{
    dirichlet_fractional, dirichlet_integral, is_integral_by_trace, lift_of, shortest_element,
    ApproxResult, TraceVerdict,
};
pub use ideal::{denominator_ideal, enumerate_residues, ideals_of_norm, IdealRep, ResidueClass};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// w = sqrt(-d)
    SqrtD,
    /// w = (1 + sqrt(-d)) / 2, used when -d = 1 mod 4
    HalfPlus,
}

/// Serialized shape of a field: `{d, basis_kind, delta}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldFile {
    pub d: i64,
    pub basis_kind: BasisKind,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldFile", into = "FieldFile")]
pub struct FieldSpec {
    pub d: i64,
    pub basis_kind: BasisKind,
    pub delta: i64,
    /// `T[i][j] = tr(w_i w_j)`
    pub trace_form: [[i64; 2]; 2],
    /// tr(w)
    pub t1: i64,
    /// N(w); so w^2 = t1*w - n2
    pub n2: i64,
}

impl TryFrom<FieldFile> for FieldSpec {
    type Error = Error;

    fn try_from(f: FieldFile) -> Result<Self> {
        let spec = make_field(f.d)?;
        if spec.basis_kind != f.basis_kind || spec.delta != f.delta {
            return Err(Error::invalid(format!(
                "field file for d={} disagrees with the canonical basis",
                f.d
            )));
        }
        Ok(spec)
    }
}

impl From<FieldSpec> for FieldFile {
    fn from(f: FieldSpec) -> Self {
        FieldFile { d: f.d, basis_kind: f.basis_kind, delta: f.delta }
    }
}

pub fn is_squarefree(n: i64) -> bool {
    if n < 1 {
        return false;
    }
    let mut m = n;
    let mut p = 2i64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn make_field(d: i64) -> Result<FieldSpec> {
    if d < 1 || !is_squarefree(d) {
        return Err(Error::invalid(format!("d = {d} must be a squarefree positive integer")));
    }
    let (basis_kind, t1, n2) = if (-d).rem_euclid(4) == 1 {
        (BasisKind::HalfPlus, 1, (1 + d) / 4)
    } else {
        (BasisKind::SqrtD, 0, d)
    };
    // tr(w^2) = tr(t1 w - n2) = t1^2 - 2 n2
    let trace_form = [[2, t1], [t1, t1 * t1 - 2 * n2]];
    let delta = trace_form[0][0] * trace_form[1][1] - trace_form[0][1] * trace_form[1][0];
    Ok(FieldSpec { d, basis_kind, delta, trace_form, t1, n2 })
}

/// Coefficient rings used for basis coordinates.
pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
    + Send
    + Sync
{
    fn of(v: i64) -> Self;
    fn of_big(v: &BigInt) -> Self;
    fn zero_s() -> Self {
        Self::of(0)
    }
    fn is_zero_s(&self) -> bool {
        *self == Self::of(0)
    }
}

impl Scalar for i128 {
    fn of(v: i64) -> Self {
        v as i128
    }
    fn of_big(v: &BigInt) -> Self {
        v.to_i128().expect("coefficient fits in i128")
    }
}

impl Scalar for BigInt {
    fn of(v: i64) -> Self {
        BigInt::from(v)
    }
    fn of_big(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Scalar for BigRational {
    fn of(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn of_big(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl Scalar for f64 {
    fn of(v: i64) -> Self {
        v as f64
    }
    fn of_big(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
}

/// a1 + a2 w. Serialized as the string `a1+a2*w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct AlgInt {
    pub coords: [BigInt; 2],
}

impl AlgInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        AlgInt { coords: [a.into(), b.into()] }
    }

    pub fn zero() -> Self {
        AlgInt::new(0, 0)
    }

    pub fn one() -> Self {
        AlgInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn height(&self) -> BigInt {
        self.coords[0].abs().max(self.coords[1].abs())
    }

    pub fn small(&self) -> Option<[i128; 2]> {
        Some([self.coords[0].to_i128()?, self.coords[1].to_i128()?])
    }

    pub fn from_small(v: [i128; 2]) -> Self {
        AlgInt::new(v[0], v[1])
    }

    pub fn add(&self, o: &AlgInt) -> AlgInt {
        AlgInt { coords: [&self.coords[0] + &o.coords[0], &self.coords[1] + &o.coords[1]] }
    }

    pub fn sub(&self, o: &AlgInt) -> AlgInt {
        AlgInt { coords: [&self.coords[0] - &o.coords[0], &self.coords[1] - &o.coords[1]] }
    }

    pub fn neg(&self) -> AlgInt {
        AlgInt { coords: [-&self.coords[0], -&self.coords[1]] }
    }

    pub fn scale(&self, k: &BigInt) -> AlgInt {
        AlgInt { coords: [&self.coords[0] * k, &self.coords[1] * k] }
    }

    pub fn content(&self) -> BigInt {
        self.coords[0].gcd(&self.coords[1])
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.coords;
        if b.is_negative() {
            write!(f, "{a}-{}*w", -b)
        } else {
            write!(f, "{a}+{b}*w")
        }
    }
}

/// An element of K as `num / den` with `den > 0` and no common factor of
/// `den` and both coordinates of `num`. Serialized as `(a+b*w)/den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FieldElem {
    pub num: AlgInt,
    pub den: BigInt,
}

impl FieldElem {
    pub fn new(num: AlgInt, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let mut g = num.content().gcd(&den);
        if den.is_negative() {
            g = -g;
        }
        Ok(FieldElem {
            num: AlgInt { coords: [&num.coords[0] / &g, &num.coords[1] / &g] },
            den: den / g,
        })
    }

    pub fn from_int(a: AlgInt) -> Self {
        FieldElem { num: a, den: BigInt::one() }
    }

    pub fn from_ratios(c: &[BigRational; 2]) -> Self {
        let den = c[0].denom().lcm(c[1].denom());
        let num = AlgInt {
            coords: [
                c[0].numer() * (&den / c[0].denom()),
                c[1].numer() * (&den / c[1].denom()),
            ],
        };
        FieldElem::new(num, den).expect("denominator is positive")
    }

    pub fn zero() -> Self {
        FieldElem::from_int(AlgInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn coords(&self) -> [BigRational; 2] {
        [
            BigRational::new(self.num.coords[0].clone(), self.den.clone()),
            BigRational::new(self.num.coords[1].clone(), self.den.clone()),
        ]
    }

    /// Canonical representative of the class in K/O, coordinates in [0, 1).
    pub fn reduce_mod_o(&self) -> FieldElem {
        let num = AlgInt {
            coords: [self.num.coords[0].mod_floor(&self.den), self.num.coords[1].mod_floor(&self.den)],
        };
        FieldElem::new(num, self.den.clone()).expect("denominator is positive")
    }

    pub fn to_minkowski(&self) -> MinkowskiVec {
        MinkowskiVec::Exact(self.coords())
    }

    pub fn to_f64(&self) -> [f64; 2] {
        let c = self.coords();
        [rat_to_f64(&c[0]), rat_to_f64(&c[1])]
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl From<AlgInt> for String {
    fn from(a: AlgInt) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for AlgInt {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        crate::forms::parse_coeff(&s).ok_or_else(|| format!("bad algebraic integer {s:?}"))
    }
}

impl From<FieldElem> for String {
    fn from(a: FieldElem) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for FieldElem {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        let bad = || format!("bad field element {s:?}");
        let t = s.trim();
        let (num, den) = match t.strip_prefix('(').and_then(|r| r.split_once(")/")) {
            Some((n, d)) => (n, d.trim().parse::<BigInt>().map_err(|_| bad())?),
            None => (t, BigInt::one()),
        };
        let num = crate::forms::parse_coeff(num).ok_or_else(bad)?;
        FieldElem::new(num, den).map_err(|_| bad())
    }
}

/// Exact coordinate pairs as `["p/q", "r/s"]`.
mod rat_pair {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &[BigRational; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(c.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[BigRational; 2], D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let p = |t: &str| t.parse::<BigRational>().map_err(|_| D::Error::custom(format!("bad rational {t:?}")));
        Ok([p(&a)?, p(&b)?])
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A point of K_R in basis coordinates, exact or approximate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinkowskiVec {
    Exact(#[serde(with = "rat_pair")] [BigRational; 2]),
    Approx([f64; 2]),
}

impl MinkowskiVec {
    pub fn exact(a: BigRational, b: BigRational) -> Self {
        MinkowskiVec::Exact([a, b])
    }

    pub fn approx(a: f64, b: f64) -> Self {
        MinkowskiVec::Approx([a, b])
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, MinkowskiVec::Exact(_))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        match self {
            MinkowskiVec::Exact(c) => [rat_to_f64(&c[0]), rat_to_f64(&c[1])],
            MinkowskiVec::Approx(c) => *c,
        }
    }

    pub fn as_exact(&self) -> Option<&[BigRational; 2]> {
        match self {
            MinkowskiVec::Exact(c) => Some(c),
            MinkowskiVec::Approx(_) => None,
        }
    }

    pub fn height(&self) -> f64 {
        let c = self.to_f64();
        c[0].abs().max(c[1].abs())
    }

    pub fn sub(&self, o: &MinkowskiVec) -> MinkowskiVec {
        match (self, o) {
            (MinkowskiVec::Exact(a), MinkowskiVec::Exact(b)) => {
                MinkowskiVec::Exact([&a[0] - &b[0], &a[1] - &b[1]])
            }
            _ => {
                let (a, b) = (self.to_f64(), o.to_f64());
                MinkowskiVec::Approx([a[0] - b[0], a[1] - b[1]])
            }
        }
    }

    pub fn add(&self, o: &MinkowskiVec) -> MinkowskiVec {
        match (self, o) {
            (MinkowskiVec::Exact(a), MinkowskiVec::Exact(b)) => {
                MinkowskiVec::Exact([&a[0] + &b[0], &a[1] + &b[1]])
            }
            _ => {
                let (a, b) = (self.to_f64(), o.to_f64());
                MinkowskiVec::Approx([a[0] + b[0], a[1] + b[1]])
            }
        }
    }
}

impl FieldSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("field spec serializes")
    }

    /// Product of two basis-coordinate vectors over any coefficient ring.
    pub fn mul_s<T: Scalar>(&self, a: &[T; 2], b: &[T; 2]) -> [T; 2] {
        let hi = a[1].clone() * b[1].clone();
        [
            a[0].clone() * b[0].clone() - T::of(self.n2) * hi.clone(),
            a[0].clone() * b[1].clone() + a[1].clone() * b[0].clone() + T::of(self.t1) * hi,
        ]
    }

    pub fn mul(&self, a: &AlgInt, b: &AlgInt) -> AlgInt {
        AlgInt { coords: self.mul_s(&a.coords, &b.coords) }
    }

    pub fn mul_i(&self, a: [i128; 2], b: [i128; 2]) -> [i128; 2] {
        let hi = a[1] * b[1];
        [a[0] * b[0] - self.n2 as i128 * hi, a[0] * b[1] + a[1] * b[0] + self.t1 as i128 * hi]
    }

    pub fn mul_f(&self, a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
        let hi = a[1] * b[1];
        [a[0] * b[0] - self.n2 as f64 * hi, a[0] * b[1] + a[1] * b[0] + self.t1 as f64 * hi]
    }

    pub fn mul_rat(&self, a: &[BigRational; 2], b: &[BigRational; 2]) -> [BigRational; 2] {
        let hi = &a[1] * &b[1];
        [
            &a[0] * &b[0] - BigRational::from_integer(self.n2.into()) * &hi,
            &a[0] * &b[1] + &a[1] * &b[0] + BigRational::from_integer(self.t1.into()) * hi,
        ]
    }

    pub fn conj(&self, a: &AlgInt) -> AlgInt {
        AlgInt {
            coords: [&a.coords[0] + &a.coords[1] * BigInt::from(self.t1), -&a.coords[1]],
        }
    }

    pub fn conj_i(&self, a: [i128; 2]) -> [i128; 2] {
        [a[0] + self.t1 as i128 * a[1], -a[1]]
    }

    pub fn norm(&self, a: &AlgInt) -> BigInt {
        let [x, y] = &a.coords;
        x * x + x * y * BigInt::from(self.t1) + y * y * BigInt::from(self.n2)
    }

    pub fn norm_i(&self, a: [i128; 2]) -> i128 {
        a[0] * a[0] + self.t1 as i128 * a[0] * a[1] + self.n2 as i128 * a[1] * a[1]
    }

    pub fn trace(&self, a: &AlgInt) -> BigInt {
        BigInt::from(2) * &a.coords[0] + BigInt::from(self.t1) * &a.coords[1]
    }

    pub fn trace_i(&self, a: [i128; 2]) -> i128 {
        2 * a[0] + self.t1 as i128 * a[1]
    }

    /// Standard field trace on K_R (sum over both complex embeddings).
    pub fn trace_mink(&self, a: &MinkowskiVec) -> f64 {
        match a {
            MinkowskiVec::Exact(c) => rat_to_f64(&self.trace_exact(c)),
            MinkowskiVec::Approx(c) => 2.0 * c[0] + self.t1 as f64 * c[1],
        }
    }

    pub fn trace_exact(&self, c: &[BigRational; 2]) -> BigRational {
        BigRational::from_integer(2.into()) * &c[0] + BigRational::from_integer(self.t1.into()) * &c[1]
    }

    pub fn norm_mink(&self, a: &MinkowskiVec) -> f64 {
        match a {
            MinkowskiVec::Exact(c) => rat_to_f64(&self.norm_exact(c)),
            MinkowskiVec::Approx(c) => {
                c[0] * c[0] + self.t1 as f64 * c[0] * c[1] + self.n2 as f64 * c[1] * c[1]
            }
        }
    }

    pub fn norm_exact(&self, c: &[BigRational; 2]) -> BigRational {
        &c[0] * &c[0]
            + BigRational::from_integer(self.t1.into()) * &c[0] * &c[1]
            + BigRational::from_integer(self.n2.into()) * &c[1] * &c[1]
    }

    /// The complex embedding with Im(w) > 0.
    pub fn embed(&self, c: [f64; 2]) -> (f64, f64) {
        let sd = (self.d as f64).sqrt();
        match self.basis_kind {
            BasisKind::SqrtD => (c[0], c[1] * sd),
            BasisKind::HalfPlus => (c[0] + c[1] / 2.0, c[1] * sd / 2.0),
        }
    }

    /// Inverse of [`FieldSpec::embed`].
    pub fn from_complex(&self, re: f64, im: f64) -> [f64; 2] {
        let sd = (self.d as f64).sqrt();
        match self.basis_kind {
            BasisKind::SqrtD => [re, im / sd],
            BasisKind::HalfPlus => {
                let b = 2.0 * im / sd;
                [re - b / 2.0, b]
            }
        }
    }

    /// |a|_K, the modulus of the complex embedding.
    pub fn embedding_height(&self, a: &MinkowskiVec) -> f64 {
        let (re, im) = self.embed(a.to_f64());
        re.hypot(im)
    }

    pub fn elem_add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let num = a.num.scale(&b.den).add(&b.num.scale(&a.den));
        FieldElem::new(num, &a.den * &b.den).expect("nonzero")
    }

    pub fn elem_sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let num = a.num.scale(&b.den).sub(&b.num.scale(&a.den));
        FieldElem::new(num, &a.den * &b.den).expect("nonzero")
    }

    pub fn elem_mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem::new(self.mul(&a.num, &b.num), &a.den * &b.den).expect("nonzero")
    }

    pub fn elem_conj(&self, a: &FieldElem) -> FieldElem {
        FieldElem::new(self.conj(&a.num), a.den.clone()).expect("nonzero")
    }

    pub fn elem_inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::invalid("inverse of zero"));
        }
        let n = self.norm(&a.num);
        FieldElem::new(self.conj(&a.num).scale(&a.den), n)
    }

    /// a / q, normalized to a rational denominator via the conjugate of q.
    pub fn quotient(&self, a: &AlgInt, q: &AlgInt) -> Result<FieldElem> {
        if q.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        FieldElem::new(self.mul(a, &self.conj(q)), self.norm(q))
    }

    pub fn mul_int_elem(&self, x: &AlgInt, g: &FieldElem) -> FieldElem {
        FieldElem::new(self.mul(x, &g.num), g.den.clone()).expect("nonzero")
    }

    /// tr(a * b) for b in O, via the trace form.
    pub fn trace_pair_exact(&self, a: &[BigRational; 2], b: [i128; 2]) -> BigRational {
        let t = &self.trace_form;
        let mut acc = BigRational::zero();
        for i in 0..2 {
            for j in 0..2 {
                let k = BigInt::from(t[i][j]) * BigInt::from(b[j]);
                acc += &a[i] * BigRational::from_integer(k);
            }
        }
        acc
    }
}
