//! Dirichlet approximation in K_R, short elements of ideals and the trace
//! criterion for integrality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{rat_to_f64, AlgInt, FieldElem, FieldSpec, IdealRep, MinkowskiVec, ResidueClass};
use crate::error::{Error, Result};

/// Comparison slack for approximate-mode values.
pub const APPROX_GUARD: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    /// Canonical class of a/q.
    pub gamma: ResidueClass,
    /// alpha - a/q, so alpha = gamma + theta modulo O.
    pub theta: MinkowskiVec,
    pub q: AlgInt,
    pub a: AlgInt,
    /// |q alpha - a|
    pub error: f64,
    /// |theta| * N(a_gamma)^(1/2) * Q
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceVerdict {
    PremiseHoldsAndIntegral,
    PremiseFails { index: usize },
}

pub fn is_integral_by_trace(alpha: &MinkowskiVec, f: &FieldSpec) -> Result<TraceVerdict> {
    let c = alpha
        .as_exact()
        .ok_or_else(|| Error::invalid("the trace criterion needs an exact element"))?;
    let delta = BigRational::from_integer(f.delta.into());
    for (index, w) in [[1i128, 0], [0, 1]].into_iter().enumerate() {
        if !(f.trace_pair_exact(c, w) / &delta).is_integer() {
            return Ok(TraceVerdict::PremiseFails { index });
        }
    }
    if c.iter().all(BigRational::is_integer) {
        Ok(TraceVerdict::PremiseHoldsAndIntegral)
    } else {
        Err(Error::Violation(format!("traces are integral but {c:?} is not in O")))
    }
}

/// Nonzero elements of height exactly `h` whose first nonzero coordinate is
/// positive, in lexicographic order.
pub(crate) fn shell(h: i64) -> Vec<[i64; 2]> {
    if h == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for x in 0..=h {
        let ys: Vec<i64> = if x == 0 {
            vec![h]
        } else if x == h {
            (-h..=h).collect()
        } else {
            vec![-h, h]
        };
        out.extend(ys.into_iter().map(|y| [x, y]));
    }
    out
}

/// A nonzero element of `j` of minimal height.
pub fn shortest_element(j: &IdealRep) -> AlgInt {
    let bound = j.hnf[0][0].max(j.hnf[1][1]);
    for h in 1..=bound {
        if let Some(g) = shell(h).into_iter().find(|g| j.contains_i([g[0] as i128, g[1] as i128])) {
            return AlgInt::new(g[0], g[1]);
        }
    }
    unreachable!("(a, 0) lies in the ideal")
}

fn round_half_up(x: &BigRational) -> BigInt {
    (x + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

enum Err_ {
    /// numerator over a common denominator
    Small(i128, i128),
    Exact(BigRational),
    Approx(f64),
}

fn q_rational(q: f64) -> Result<BigRational> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::invalid("Q must be a finite real at least 1"));
    }
    BigRational::from_float(q).ok_or_else(|| Error::invalid("Q is not representable"))
}

/// The (q, a) with 1 <= |q| <= Q minimizing |q alpha - a|, ties broken by
/// (|q|, |q_2|, coordinates) among q whose first nonzero coordinate is
/// positive, so q = 1 wins whenever it is optimal.
pub fn dirichlet_integral(alpha: &MinkowskiVec, q_bound: f64, f: &FieldSpec) -> Result<ApproxResult> {
    let r = search(alpha, q_bound, f, false)?;
    let qr = q_rational(q_bound)?;
    let too_big = match &alpha {
        MinkowskiVec::Exact(c) => {
            let q = r.q.coords.clone().map(BigRational::from_integer);
            let qa = f.mul_rat(c, &q);
            let a = r.a.coords.clone().map(BigRational::from_integer);
            let e = (&qa[0] - &a[0]).abs().max((&qa[1] - &a[1]).abs());
            e > qr.recip()
        }
        MinkowskiVec::Approx(_) => r.error > 1.0 / q_bound + APPROX_GUARD,
    };
    if too_big {
        return Err(Error::Violation(format!("best error {} exceeds 1/Q", r.error)));
    }
    Ok(r)
}

/// Fractional form: gamma = a/q with N(a_gamma) <= Q^2 and
/// |alpha - gamma| <= C / (N(a_gamma)^(1/2) Q).
///
/// The search is the integral one restricted to N(q) <= Q^2. Since
/// a_gamma divides (q) this gives the norm bound outright; C is measured.
pub fn dirichlet_fractional(alpha: &MinkowskiVec, q_bound: f64, f: &FieldSpec) -> Result<ApproxResult> {
    let r = search(alpha, q_bound, f, true)?;
    let n = r.gamma.norm();
    let q2 = q_rational(q_bound)?.pow(2);
    if BigRational::from_integer(n.into()) > q2 {
        return Err(Error::Violation(format!("N(a_gamma) = {n} exceeds Q^2")));
    }
    Ok(r)
}

/// alpha = (n0 / den, n1 / den) with everything in i64.
fn small_exact(c: &[BigRational; 2]) -> Option<([i128; 2], i128)> {
    let den = c[0].denom().lcm(c[1].denom());
    let num = |r: &BigRational| (r.numer() * (&den / r.denom())).to_i64();
    Some(([num(&c[0])? as i128, num(&c[1])? as i128], den.to_i64()? as i128))
}

fn search(alpha: &MinkowskiVec, q_bound: f64, f: &FieldSpec, norm_capped: bool) -> Result<ApproxResult> {
    let qr = q_rational(q_bound)?;
    let hmax = q_bound.floor() as i64;
    let cap = qr.pow(2);
    let small = alpha.as_exact().and_then(small_exact);
    let mut best: Option<(Err_, [i64; 2], AlgInt)> = None;
    for h in 1..=hmax {
        let mut candidates = shell(h);
        candidates.sort_by_key(|q| (q[1].abs(), *q));
        for q in candidates {
            if norm_capped && BigRational::from_integer(f.norm_i([q[0] as i128, q[1] as i128]).into()) > cap {
                continue;
            }
            let (err, a) = match (alpha, small) {
                (MinkowskiVec::Exact(_), Some((n, den))) => {
                    let qa = f.mul_i(n, [q[0] as i128, q[1] as i128]);
                    let a = qa.map(|x| (2 * x + den).div_euclid(2 * den));
                    let e = (qa[0] - a[0] * den).abs().max((qa[1] - a[1] * den).abs());
                    (Err_::Small(e, den), AlgInt::from_small(a))
                }
                (MinkowskiVec::Exact(c), None) => {
                    let qa = f.mul_rat(c, &[BigRational::from_integer(q[0].into()), BigRational::from_integer(q[1].into())]);
                    let a = [round_half_up(&qa[0]), round_half_up(&qa[1])];
                    let e0 = (&qa[0] - BigRational::from_integer(a[0].clone())).abs();
                    let e1 = (&qa[1] - BigRational::from_integer(a[1].clone())).abs();
                    (Err_::Exact(e0.max(e1)), AlgInt { coords: a })
                }
                (MinkowskiVec::Approx(c), _) => {
                    let qa = f.mul_f(*c, [q[0] as f64, q[1] as f64]);
                    let a = [(qa[0] + 0.5).floor(), (qa[1] + 0.5).floor()];
                    let e = (qa[0] - a[0]).abs().max((qa[1] - a[1]).abs());
                    (Err_::Approx(e), AlgInt::new(a[0] as i64, a[1] as i64))
                }
            };
            let better = match (&best, &err) {
                (None, _) => true,
                (Some((Err_::Small(b, _), ..)), Err_::Small(e, _)) => e < b,
                (Some((Err_::Exact(b), ..)), Err_::Exact(e)) => e < b,
                (Some((Err_::Approx(b), ..)), Err_::Approx(e)) => *e < *b - APPROX_GUARD,
                _ => unreachable!("mode is fixed by alpha"),
            };
            if better {
                best = Some((err, q, a));
            }
        }
    }
    let (err, q, a) = best.ok_or_else(|| Error::invalid("no candidate q"))?;
    let error = match &err {
        Err_::Small(e, den) => *e as f64 / *den as f64,
        Err_::Exact(e) => rat_to_f64(e),
        Err_::Approx(e) => *e,
    };
    let q = AlgInt::new(q[0], q[1]);
    let lift = f.quotient(&a, &q)?;
    let gamma = ResidueClass::new(f, &lift);
    let theta = alpha.sub(&lift.to_minkowski());
    let constant = theta.height() * (gamma.norm() as f64).sqrt() * q_bound;
    Ok(ApproxResult { gamma, theta, q, a, error, constant })
}

/// a/q as a field element, used by tests and verifiers.
pub fn lift_of(r: &ApproxResult, f: &FieldSpec) -> FieldElem {
    f.quotient(&r.a, &r.q).expect("q is nonzero")
}

impl ApproxResult {
    pub fn q_height(&self) -> i64 {
        self.q.height().to_i64().unwrap_or(i64::MAX)
    }

    pub fn is_exact(&self) -> bool {
        self.theta.is_exact()
    }

    pub fn theta_is_zero(&self) -> bool {
        match &self.theta {
            MinkowskiVec::Exact(c) => c.iter().all(Zero::is_zero),
            MinkowskiVec::Approx(c) => c.iter().all(|x| *x == 0.0),
        }
    }
}
