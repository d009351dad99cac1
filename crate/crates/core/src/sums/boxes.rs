//! Boxes B in K_R^s given by rational bounds per coordinate.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rat, rat_to_f64};
use crate::forms::CubicForm;
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterKind {
    UnitBox,
    /// `[-1, 1]` in every coordinate.
    Symmetric,
    /// A box around a nonsingular real zero `z` of C with nonzero coordinates.
    CenteredAt(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    /// `lo[i][j] <= x_ij / P <= hi[i][j]`
    pub lo: Vec<[BigRational; 2]>,
    pub hi: Vec<[BigRational; 2]>,
    pub center: CenterKind,
}

fn scale(r: &BigRational, p: &BigRational, up: bool) -> i64 {
    let v = r * p;
    let i = if up { v.ceil() } else { v.floor() };
    i.to_integer().try_into().unwrap_or(if up { i64::MAX } else { i64::MIN })
}

impl BoxSpec {
    pub fn new(lo: Vec<[BigRational; 2]>, hi: Vec<[BigRational; 2]>, center: CenterKind) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::invalid("box bounds must cover the same positive number of variables"));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if l[0] >= h[0] || l[1] >= h[1] {
                return Err(Error::invalid("box bounds must satisfy lo < hi"));
            }
        }
        Ok(BoxSpec { lo, hi, center })
    }

    pub fn unit(s: usize) -> Self {
        BoxSpec { lo: vec![[rat(0, 1), rat(0, 1)]; s], hi: vec![[rat(1, 1), rat(1, 1)]; s], center: CenterKind::UnitBox }
    }

    pub fn symmetric(s: usize) -> Self {
        BoxSpec {
            lo: vec![[rat(-1, 1), rat(-1, 1)]; s],
            hi: vec![[rat(1, 1), rat(1, 1)]; s],
            center: CenterKind::Symmetric,
        }
    }

    /// The box `z +- radius` after checking that `z` is a real zero of C with
    /// `dC/dx_1(z) != 0` and every `z_i != 0`. Bounds are rational
    /// approximations of the endpoints with denominator 2^20.
    pub fn centered(c: &CubicForm, z: &[[f64; 2]], radius: f64) -> Result<Self> {
        if z.len() != c.s {
            return Err(Error::invalid("center has the wrong number of coordinates"));
        }
        let scale_z = z.iter().map(|v| v[0].abs().max(v[1].abs())).fold(1.0, f64::max);
        let val = c.value_in::<f64>(z);
        if val[0].abs().max(val[1].abs()) > 1e-9 * scale_z.powi(3) {
            return Err(Error::invalid(format!("C(z) = {val:?} is not zero")));
        }
        let grad = c.bilinear_in::<f64>(0, z, z)?;
        if grad[0].abs().max(grad[1].abs()) < 1e-9 * scale_z.powi(2) {
            return Err(Error::invalid("dC/dx1 vanishes at z"));
        }
        if z.iter().any(|v| v[0] == 0.0 && v[1] == 0.0) {
            return Err(Error::invalid("z has a zero coordinate"));
        }
        if !(radius > 0.0) {
            return Err(Error::invalid("radius must be positive"));
        }
        let q = |x: f64| BigRational::new(((x * (1u64 << 20) as f64).round() as i64).into(), (1i64 << 20).into());
        let lo = z.iter().map(|v| [q(v[0] - radius), q(v[1] - radius)]).collect();
        let hi = z.iter().map(|v| [q(v[0] + radius), q(v[1] + radius)]).collect();
        BoxSpec::new(lo, hi, CenterKind::CenteredAt(z.to_vec()))
    }

    pub fn s(&self) -> usize {
        self.lo.len()
    }

    /// Integer points of `P B` as a grid over the 2s coordinates.
    pub fn grid(&self, p: f64) -> Result<Grid> {
        let pr = BigRational::from_float(p).filter(|r| !r.is_zero() || p == 0.0).ok_or_else(|| Error::invalid("P must be finite"))?;
        if p < 0.0 {
            return Err(Error::invalid("P must be nonnegative"));
        }
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (l, h) in self.lo.iter().zip(&self.hi) {
            for j in 0..2 {
                lo.push(scale(&l[j], &pr, true));
                hi.push(scale(&h[j], &pr, false));
            }
        }
        Ok(Grid::new(lo, hi))
    }

    pub fn contains(&self, xi: &[[f64; 2]]) -> bool {
        xi.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| {
            (0..2).all(|j| rat_to_f64(&l[j]) <= x[j] && x[j] <= rat_to_f64(&h[j]))
        })
    }

    pub fn bounds_f64(&self) -> (Vec<f64>, Vec<f64>) {
        let flat = |v: &Vec<[BigRational; 2]>| v.iter().flat_map(|c| [rat_to_f64(&c[0]), rat_to_f64(&c[1])]).collect();
        (flat(&self.lo), flat(&self.hi))
    }

    /// Lebesgue volume in basis coordinates.
    pub fn volume(&self) -> f64 {
        let (lo, hi) = self.bounds_f64();
        lo.iter().zip(&hi).map(|(l, h)| h - l).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid() {
        let b = BoxSpec::symmetric(1);
        let g = b.grid(2.5).unwrap();
        assert_eq!(g.lo, vec![-2, -2]);
        assert_eq!(g.hi, vec![2, 2]);
        assert_eq!(BoxSpec::symmetric(2).grid(0.5).unwrap().size(), 1);
    }

    #[test]
    fn centered_checks() {
        let c = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
        assert!(BoxSpec::centered(&c, &[[1.0, 0.0], [-1.0, 0.0]], 0.25).is_ok());
        assert!(BoxSpec::centered(&c, &[[1.0, 0.0], [1.0, 0.0]], 0.25).is_err());
        assert!(BoxSpec::centered(&c, &[[0.0, 0.0], [0.0, 0.0]], 0.25).is_err());
    }
}
