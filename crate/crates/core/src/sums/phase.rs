//! Additive characters `c -> e(tr(alpha c))` on O.
//!
//! An exact part `a / den` is handled in integers, so its contribution is
//! reduced modulo 1 before any rounding. An optional floating part carries
//! the theta of a mixed point `gamma + theta`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec, MinkowskiVec};

#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    /// Exact part of alpha: `a / den`, with `a` reduced mod `den`.
    a: [i128; 2],
    den: i128,
    /// `T a`, so `tr(a c / den) = (v . c) / den`.
    v: [i128; 2],
    theta: [f64; 2],
    /// `T theta`
    u: [f64; 2],
    field: FieldSpec,
}

fn tmul(f: &FieldSpec, a: [i128; 2]) -> [i128; 2] {
    let t = f.trace_form;
    [
        a[0] * t[0][0] as i128 + a[1] * t[1][0] as i128,
        a[0] * t[0][1] as i128 + a[1] * t[1][1] as i128,
    ]
}

fn tmul_f(f: &FieldSpec, a: [f64; 2]) -> [f64; 2] {
    let t = f.trace_form;
    [a[0] * t[0][0] as f64 + a[1] * t[1][0] as f64, a[0] * t[0][1] as f64 + a[1] * t[1][1] as f64]
}

impl Phase {
    fn build(f: &FieldSpec, a: [i128; 2], den: i128, theta: [f64; 2]) -> Self {
        let a = [a[0].rem_euclid(den), a[1].rem_euclid(den)];
        Phase { a, den, v: tmul(f, a), theta, u: tmul_f(f, theta), field: f.clone() }
    }

    pub fn new(f: &FieldSpec, alpha: &MinkowskiVec) -> Result<Self> {
        match alpha {
            MinkowskiVec::Exact(_) => {
                let e = FieldElem::from_ratios(alpha.as_exact().expect("exact"));
                Phase::mixed(f, &e, [0.0, 0.0])
            }
            MinkowskiVec::Approx(c) => Ok(Phase::build(f, [0, 0], 1, *c)),
        }
    }

    /// The point `gamma + theta`.
    pub fn mixed(f: &FieldSpec, gamma: &FieldElem, theta: [f64; 2]) -> Result<Self> {
        let too_big = || Error::invalid("exact phase denominator exceeds the kernel range");
        let den = gamma.den.to_i128().filter(|d| *d < 1 << 62).ok_or_else(too_big)?;
        let bd = BigInt::from(den);
        let r = |v: &BigInt| v.mod_floor(&bd).to_i128().expect("reduced");
        Ok(Phase::build(f, [r(&gamma.num.coords[0]), r(&gamma.num.coords[1])], den, theta))
    }

    pub fn zero(f: &FieldSpec) -> Self {
        Phase::build(f, [0, 0], 1, [0.0, 0.0])
    }

    pub fn is_exact(&self) -> bool {
        self.theta == [0.0, 0.0]
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    /// The character of `alpha * m`.
    pub fn times(&self, m: [i128; 2]) -> Phase {
        let f = &self.field;
        let a = f.mul_i(self.a, m);
        let th = f.mul_f(self.theta, [m[0] as f64, m[1] as f64]);
        Phase::build(f, a, self.den, th)
    }

    /// The character of `-alpha`.
    pub fn neg(&self) -> Phase {
        Phase::build(&self.field, [-self.a[0], -self.a[1]], self.den, [-self.theta[0], -self.theta[1]])
    }

    /// Exact residue of `den * tr(a c / den)` modulo `den`.
    pub fn index(&self, c: [i128; 2]) -> i128 {
        (self.v[0] * c[0] + self.v[1] * c[1]).rem_euclid(self.den)
    }

    /// `tr(alpha c)` modulo 1, in `[0, 1)`.
    pub fn frac(&self, c: [i128; 2]) -> f64 {
        let e = self.index(c) as f64 / self.den as f64;
        if self.is_exact() {
            return e;
        }
        let x = e + (self.u[0] * c[0] as f64).fract() + (self.u[1] * c[1] as f64).fract();
        x - x.floor()
    }

    /// Distance of `tr(alpha c)` to the nearest integer.
    pub fn dist(&self, c: [i128; 2]) -> f64 {
        let x = self.frac(c);
        x.min(1.0 - x)
    }

    /// `||tr(alpha c)|| < 1 / p`, decided exactly when alpha is exact and
    /// `p` is an integer.
    pub fn dist_below_inv(&self, c: [i128; 2], p: f64) -> bool {
        if self.is_exact() && p.fract() == 0.0 && p.abs() < 1e15 {
            let r = self.index(c);
            let m = r.min(self.den - r);
            return m * (p as i128) < self.den;
        }
        self.dist(c) * p < 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, rat, AlgInt};

    #[test]
    fn integral_alpha_has_trivial_phase() {
        let f = make_field(1).unwrap();
        let p = Phase::new(&f, &MinkowskiVec::exact(rat(3, 1), rat(-2, 1))).unwrap();
        assert_eq!(p.frac([5, 7]), 0.0);
    }

    #[test]
    fn half_in_gaussian_field() {
        let f = make_field(1).unwrap();
        let p = Phase::new(&f, &MinkowskiVec::exact(rat(1, 2), rat(0, 1))).unwrap();
        // tr(c / 2) = c0
        assert_eq!(p.frac([1, 0]), 0.0);
        let q = Phase::mixed(&f, &FieldElem::new(AlgInt::new(1, 0), 3).unwrap(), [0.0, 0.0]).unwrap();
        assert!((q.frac([1, 0]) - 2.0 / 3.0).abs() < 1e-15);
        assert!(q.dist_below_inv([1, 0], 3.0) == false);
        assert!(q.dist_below_inv([1, 0], 2.0));
    }

    #[test]
    fn approx_matches_exact() {
        let f = make_field(3).unwrap();
        let e = Phase::new(&f, &MinkowskiVec::exact(rat(1, 7), rat(2, 5))).unwrap();
        let a = Phase::new(&f, &MinkowskiVec::approx(1.0 / 7.0, 0.4)).unwrap();
        for c in [[1, 0], [0, 1], [13, -7], [100, 3]] {
            let d = (e.frac(c) - a.frac(c)).abs();
            assert!(d.min(1.0 - d) < 1e-12);
        }
    }
}
