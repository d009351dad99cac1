//! The shrinking lemma, divisibility from small torus norms, the
//! lattice Lambda(h), successive minima and point counts.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Ctx;
use crate::field::{enumerate_residues, make_field, AlgInt, FieldElem, FieldSpec, IdealRep, ResidueClass};
use crate::forms::{rank_mod_matrix, CubicForm};
use crate::grid::Grid;
use crate::hnf::{self, Mat};
use crate::sums::Phase;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkCounts {
    pub n1: u64,
    pub nz: u64,
    /// `N(1) / (Z^-m N(Z))`
    pub ratio: f64,
}

fn shrink_count(l: &[Vec<f64>], a: f64, z: f64, perm: &[usize], ctx: &Ctx) -> Result<u64> {
    let m = l.len();
    let r = (a * z).ceil() as i64 - 1;
    if r < 0 {
        return Ok(0);
    }
    let grid = Grid::cube(m, -r, r);
    ctx.check("shrink count", grid.size())?;
    let (bound, tor) = (a * z, z / a);
    Ok(ctx
        .reduce(
            grid.size() as u64,
            |range| {
                let mut n = 0u64;
                let mut u = vec![0i64; m];
                grid.for_range(range, |p| {
                    for (k, &pk) in perm.iter().enumerate() {
                        u[pk] = p[k];
                    }
                    if u.iter().any(|&x| (x as f64).abs() >= bound) {
                        return;
                    }
                    let ok = l.iter().all(|row| {
                        let v: f64 = row.iter().zip(&u).map(|(c, &x)| c * x as f64).sum();
                        (v - v.round()).abs() < tor
                    });
                    n += u64::from(ok);
                });
                n
            },
            |x, y| x + y,
        )
        .unwrap_or(0))
}

/// Counts `N(1)` and `N(Z)` for `|u| < aZ`, `||(L u)_i|| < Z / a`.
pub fn shrink_check(l: &[Vec<f64>], a: f64, z: f64, ctx: &Ctx) -> Result<ShrinkCounts> {
    shrink_check_ordered(l, a, z, &(0..l.len()).collect::<Vec<_>>(), ctx)
}

/// As [`shrink_check`], enumerating coordinates in the order `perm`.
pub fn shrink_check_ordered(l: &[Vec<f64>], a: f64, z: f64, perm: &[usize], ctx: &Ctx) -> Result<ShrinkCounts> {
    let m = l.len();
    if m == 0 || m > 6 || l.iter().any(|r| r.len() != m) {
        return Err(Error::invalid("L must be a square matrix of size 1..=6"));
    }
    if !(a > 0.0) || !(z > 0.0 && z <= 1.0) {
        return Err(Error::invalid("need a > 0 and 0 < Z <= 1"));
    }
    let n1 = shrink_count(l, a, 1.0, perm, ctx)?;
    let nz = shrink_count(l, a, z, perm, ctx)?;
    let ratio = n1 as f64 / (z.powi(-(m as i32)) * nz as f64);
    Ok(ShrinkCounts { n1, nz, ratio })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisibilityVerdict {
    /// m lies in a_gamma and, when required, m = 0.
    Holds { in_ideal: bool, zero_required: bool },
    Counterexample { in_ideal: bool, reason: String },
}

/// `||Delta^-1 tr((gamma + theta) m w_j)||` for j = 1, 2.
fn scaled_distances(f: &FieldSpec, phase: &Phase, m: [i128; 2]) -> [f64; 2] {
    [phase.dist(f.mul_i(m, [1, 0])), phase.dist(f.mul_i(m, [0, 1]))]
}

/// The character of `Delta^-1 (gamma + theta)`.
pub fn divisibility_phase(f: &FieldSpec, gamma: &ResidueClass, theta: [f64; 2]) -> Result<Phase> {
    let g = FieldElem::new(gamma.gamma.num.clone(), &gamma.gamma.den * BigInt::from(f.delta))?;
    let d = f.delta as f64;
    Phase::mixed(f, &g, [theta[0] / d, theta[1] / d])
}

#[allow(clippy::too_many_arguments)]
pub fn divisibility_check(
    f: &FieldSpec,
    gamma: &ResidueClass,
    theta: [f64; 2],
    big_m: f64,
    p0: f64,
    a: f64,
    m: &AlgInt,
) -> Result<DivisibilityVerdict> {
    let phase = divisibility_phase(f, gamma, theta)?;
    divisibility_check_phase(f, gamma, theta, &phase, big_m, p0, a, m)
}

#[allow(clippy::too_many_arguments)]
fn divisibility_check_phase(
    f: &FieldSpec,
    gamma: &ResidueClass,
    theta: [f64; 2],
    phase: &Phase,
    big_m: f64,
    p0: f64,
    a: f64,
    m: &AlgInt,
) -> Result<DivisibilityVerdict> {
    let ms = m.small().ok_or_else(|| Error::invalid("m too large"))?;
    let n_root = (gamma.norm() as f64).sqrt();
    let th = theta[0].abs().max(theta[1].abs());
    let mh = ms[0].abs().max(ms[1].abs()) as f64;
    if big_m * th * n_root > a {
        return Err(Error::Hypothesis("M |theta| N^(1/2) > A".into()));
    }
    if mh > big_m {
        return Err(Error::Hypothesis("|m| > M".into()));
    }
    if a * p0 < n_root {
        return Err(Error::Hypothesis("A P0 < N^(1/2)".into()));
    }
    if scaled_distances(f, phase, ms).iter().any(|&d| d * p0 >= 1.0) {
        return Err(Error::Hypothesis("trace distance is not below 1/P0".into()));
    }
    let in_ideal = gamma.denom_ideal.contains_i(ms);
    if !in_ideal {
        return Ok(DivisibilityVerdict::Counterexample {
            in_ideal,
            reason: format!("{m} is not in the denominator ideal"),
        });
    }
    let zero_required = big_m <= a * n_root || a * th >= 1.0 / (n_root * p0);
    if zero_required && ms != [0, 0] {
        return Ok(DivisibilityVerdict::Counterexample { in_ideal, reason: format!("{m} should vanish") });
    }
    Ok(DivisibilityVerdict::Holds { in_ideal, zero_required })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DivisibilitySweep {
    pub a: f64,
    pub checked: u64,
    pub hypotheses_failed: u64,
    pub zero_required: u64,
    pub counterexamples: u64,
    pub first_counterexample: Option<String>,
}

/// Calibration domain: N(a_gamma) <= 25, |m| <= 6, theta on the 20 x 20 grid
/// `((k1 - 10) / 40, (k2 - 10) / 40)`, with `M = |m|` and `P0 = N^(1/2) / A`.
pub fn divisibility_sweep(f: &FieldSpec, a: f64, ctx: &Ctx) -> Result<DivisibilitySweep> {
    let classes = enumerate_residues(25.0, f, ctx)?;
    let thetas: Vec<[f64; 2]> =
        (0..400).map(|k| [((k / 20) as f64 - 10.0) / 40.0, ((k % 20) as f64 - 10.0) / 40.0]).collect();
    let jobs = classes.len() * thetas.len();
    ctx.check("divisibility sweep", (jobs * 169) as u128)?;
    let parts = ctx.map(jobs, |job| {
        let (g, theta) = (&classes[job / thetas.len()], thetas[job % thetas.len()]);
        let mut out = DivisibilitySweep { a, ..Default::default() };
        let Ok(phase) = divisibility_phase(f, g, theta) else {
            return out;
        };
        let p0 = (g.norm() as f64).sqrt() / a;
        for m0 in -6i64..=6 {
            for m1 in -6i64..=6 {
                let big_m = m0.abs().max(m1.abs()) as f64;
                let m = AlgInt::new(m0, m1);
                out.checked += 1;
                match divisibility_check_phase(f, g, theta, &phase, big_m, p0, a, &m) {
                    Err(_) => out.hypotheses_failed += 1,
                    Ok(DivisibilityVerdict::Holds { zero_required, .. }) => out.zero_required += u64::from(zero_required),
                    Ok(DivisibilityVerdict::Counterexample { reason, .. }) => {
                        out.counterexamples += 1;
                        if out.first_counterexample.is_none() {
                            out.first_counterexample = Some(format!("gamma={} theta={theta:?}: {reason}", g.gamma));
                        }
                    }
                }
            }
        }
        out
    });
    Ok(parts.into_iter().fold(DivisibilitySweep { a, ..Default::default() }, |mut acc, p| {
        acc.checked += p.checked;
        acc.hypotheses_failed += p.hypotheses_failed;
        acc.zero_required += p.zero_required;
        acc.counterexamples += p.counterexamples;
        if acc.first_counterexample.is_none() {
            acc.first_counterexample = p.first_counterexample;
        }
        acc
    }))
}

/// Largest A (bisection in log scale over [2^-30, 1]) with no counterexample
/// on the calibration domain, halved.
pub fn calibrate_a0(f: &FieldSpec, ctx: &Ctx) -> Result<f64> {
    let (mut lo, mut hi) = (-30.0f64, 0.0f64);
    if divisibility_sweep(f, 2f64.powf(lo), ctx)?.counterexamples > 0 {
        return Err(Error::Exhausted("no admissible A above 2^-30".into()));
    }
    if divisibility_sweep(f, 1.0, ctx)?.counterexamples == 0 {
        return Ok(0.5);
    }
    for _ in 0..24 {
        let mid = (lo + hi) / 2.0;
        if divisibility_sweep(f, 2f64.powf(mid), ctx)?.counterexamples == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(2f64.powf(lo) / 2.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibratedField {
    pub d: i64,
    pub basis_kind: crate::field::BasisKind,
    pub delta: i64,
    pub a0: f64,
}

const FIELD_D1: &str = include_str!("../data/field_d1.json");
const FIELD_D3: &str = include_str!("../data/field_d3.json");

/// The shipped calibrated constant A0 for d = 1 and d = 3.
pub fn shipped_a0(d: i64) -> Option<f64> {
    let text = match d {
        1 => FIELD_D1,
        3 => FIELD_D3,
        _ => return None,
    };
    let c: CalibratedField = serde_json::from_str(text).ok()?;
    make_field(c.d).ok().filter(|f| f.delta == c.delta)?;
    Some(c.a0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generic,
    LambdaH { h: Vec<AlgInt>, q2: IdealRep },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    pub dim: usize,
    /// Hermite basis, columns are basis vectors.
    pub basis: Mat,
    pub provenance: Provenance,
}

impl IntegerLattice {
    pub fn from_generators(gens: &[Vec<i128>], dim: usize) -> Result<Self> {
        if dim == 0 || dim > 8 {
            return Err(Error::invalid("lattice dimension must be 1..=8"));
        }
        Ok(IntegerLattice { dim, basis: hnf::hermite_basis(gens, dim)?, provenance: Provenance::Generic })
    }

    pub fn standard(dim: usize) -> Self {
        IntegerLattice { dim, basis: hnf::identity(dim), provenance: Provenance::Generic }
    }

    pub fn det(&self) -> i128 {
        hnf::det_upper(&self.basis)
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        hnf::contains(&self.basis, v)
    }

    /// Calls `f` on every lattice vector with sup-norm at most `r`.
    pub fn for_each_in_cube(&self, r: i128, mut f: impl FnMut(&[i128])) {
        let n = self.dim;
        let mut v = vec![0i128; n];
        let mut t = vec![0i128; n];
        self.walk(n, r, &mut t, &mut v, &mut f);
    }

    fn walk(&self, level: usize, r: i128, t: &mut Vec<i128>, v: &mut Vec<i128>, f: &mut impl FnMut(&[i128])) {
        if level == 0 {
            f(v);
            return;
        }
        let i = level - 1;
        let h = &self.basis;
        // v_i = sum_{j >= i} h[i][j] t_j; rest is fixed by deeper choices
        let rest: i128 = (i + 1..self.dim).map(|j| h[i][j] * t[j]).sum();
        let d = h[i][i];
        let lo = num_integer::Integer::div_ceil(&(-r - rest), &d);
        let hi = num_integer::Integer::div_floor(&(r - rest), &d);
        for ti in lo..=hi {
            t[i] = ti;
            for k in 0..=i {
                v[k] = (k..self.dim).map(|j| h[k][j] * t[j]).sum();
            }
            self.walk(i, r, t, v, f);
        }
        t[i] = 0;
    }

    /// Estimated number of vectors in the cube of radius `r`.
    fn cube_estimate(&self, r: i128) -> u128 {
        let vol = (2.0 * r as f64 + 1.0).powi(self.dim as i32) / self.det() as f64;
        vol.ceil() as u128 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaReport {
    /// Sup-norm successive minima.
    pub lambdas: Vec<i128>,
    pub witnesses: Vec<Vec<i128>>,
}

fn sup(v: &[i128]) -> i128 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Exhaustive sup-norm successive minima for dim <= 6.
pub fn successive_minima(l: &IntegerLattice, ctx: &Ctx) -> Result<MinimaReport> {
    if l.dim > 6 {
        return Err(Error::invalid("successive minima are exhaustive only up to dimension 6"));
    }
    let r = hnf::columns(&l.basis).iter().map(|c| sup(c)).max().unwrap_or(1);
    ctx.check("successive minima", l.cube_estimate(r))?;
    let mut vecs: Vec<(i128, Vec<i128>)> = Vec::new();
    l.for_each_in_cube(r, |v| {
        if let Some(&first) = v.iter().find(|&&x| x != 0) {
            if first > 0 {
                vecs.push((sup(v), v.to_vec()));
            }
        }
    });
    vecs.sort();
    let mut lambdas = Vec::new();
    let mut witnesses: Vec<Vec<i128>> = Vec::new();
    for (n, v) in vecs {
        if witnesses.len() == l.dim {
            break;
        }
        let mut trial = witnesses.clone();
        trial.push(v.clone());
        if hnf::rank_i128(&trial) == trial.len() {
            lambdas.push(n);
            witnesses.push(v);
        }
    }
    if witnesses.len() != l.dim {
        return Err(Error::Violation("basis columns did not yield independent minima".into()));
    }
    Ok(MinimaReport { lambdas, witnesses })
}

/// Number of lattice vectors with sup-norm at most `b`, origin included.
pub fn count_points(l: &IntegerLattice, b: f64, ctx: &Ctx) -> Result<u64> {
    let r = b.floor() as i128;
    if r < 0 {
        return Ok(0);
    }
    ctx.check("lattice point count", l.cube_estimate(r))?;
    let mut n = 0;
    l.for_each_in_cube(r, |_| n += 1);
    Ok(n)
}

/// `prod (1 + B / lambda_i)`
pub fn point_bound_shape(m: &MinimaReport, b: f64) -> f64 {
    m.lambdas.iter().map(|&l| 1.0 + b / l as f64).product()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub lattice: IntegerLattice,
    /// Minimum over primes p | q2 of the rank of Delta M(h) mod p.
    pub r_defining: usize,
    /// Minimum over primes p | q2 of the rank of M(h) mod p.
    pub r_hessian: usize,
    /// N(q2)^r_defining divides det.
    pub det_divisible: bool,
}

/// Lambda(h) = {w in O^s : Delta B_i(w, h) in q2 for all i} in Z^(2s),
/// with B_i from the stored tensor (times 6 again when `literal_six`).
pub fn lambda_h(c: &CubicForm, h: &[AlgInt], q2: &IdealRep, literal_six: bool) -> Result<LambdaReport> {
    let f = &c.field;
    let s = c.s;
    if s > 3 {
        return Err(Error::invalid("Lambda(h) is limited to s <= 3"));
    }
    let k = BigInt::from(f.delta * if literal_six { 6 } else { 1 });
    let m: Vec<Vec<AlgInt>> =
        c.hessian(h).entries.iter().map(|r| r.iter().map(|a| a.scale(&k)).collect()).collect();
    let [[a, b], [_, cc]] = q2.hnf;
    let adj = [[cc as i128, -(b as i128)], [0, a as i128]];
    let mut rows = Vec::new();
    for i in 0..s {
        // coordinate rows of sum_j m_ij w_j as a map Z^(2s) -> Z^2
        let mut real = vec![vec![0i128; 2 * s]; 2];
        for j in 0..s {
            let e = m[i][j].small().ok_or_else(|| Error::invalid("entries too large"))?;
            let ew = f.mul_i(e, [0, 1]);
            real[0][2 * j] = e[0];
            real[1][2 * j] = e[1];
            real[0][2 * j + 1] = ew[0];
            real[1][2 * j + 1] = ew[1];
        }
        for adj_row in &adj {
            rows.push((0..2 * s).map(|col| adj_row[0] * real[0][col] + adj_row[1] * real[1][col]).collect());
        }
    }
    let basis = hnf::kernel_mod(&rows, 2 * s, q2.norm as i128)?;
    let lattice = IntegerLattice { dim: 2 * s, basis, provenance: Provenance::LambdaH { h: h.to_vec(), q2: *q2 } };
    let primes = q2.prime_divisors(f);
    let r_defining = primes.iter().map(|p| rank_mod_matrix(f, &m, p)).collect::<Result<Vec<_>>>()?.into_iter().min().unwrap_or(s);
    let r_hessian = primes.iter().map(|p| c.rank_mod(h, p)).collect::<Result<Vec<_>>>()?.into_iter().min().unwrap_or(s);
    let det = lattice.det();
    let need = (q2.norm as i128).checked_pow(r_defining as u32).ok_or_else(|| Error::invalid("N(q2)^r overflows"))?;
    Ok(LambdaReport { det_divisible: det % need == 0, lattice, r_defining, r_hessian })
}

/// q2 O^s as generators in Z^(2s).
pub fn ideal_power_generators(q2: &IdealRep, s: usize) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    for i in 0..s {
        for col in q2.columns() {
            let mut v = vec![0i128; 2 * s];
            v[2 * i] = col[0];
            v[2 * i + 1] = col[1];
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_constants_exist() {
        assert!(shipped_a0(1).unwrap() > 0.0);
        assert!(shipped_a0(3).unwrap() > 0.0);
        assert!(shipped_a0(2).is_none());
    }

    #[test]
    fn cube_walk_counts() {
        let l = IntegerLattice::from_generators(&[vec![2, 0], vec![0, 1]], 2).unwrap();
        let mut n = 0;
        l.for_each_in_cube(2, |v| {
            assert!(v[0] % 2 == 0);
            n += 1;
        });
        assert_eq!(n, 3 * 5);
    }
}
