//! Major and minor arcs, the truncated singular series and integral, exact
//! point counts, the A-sum and the exponent ledger.

mod integral;
pub mod ledger;

pub use integral::{
    oscillatory_integral, singular_integral, zero_density, DeltaRow, DensityParams, IntegralEstimate, IntegralMethod,
    OscillatoryParams,
};
pub use ledger::{exponent_ledger, LedgerEntry, LedgerRow};

use std::collections::HashMap;

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Ctx;
use crate::field::{enumerate_residues, FieldElem, FieldSpec, MinkowskiVec, ResidueClass};
use crate::forms::CubicForm;
use crate::grid::Grid;
use crate::sums::{complete_sum, count_n_h_phase, BoxSpec, Phase, EPS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcParams {
    pub p: f64,
    pub nu: Rational64,
    pub q_exp: Rational64,
}

impl ArcParams {
    pub fn new(p: f64, nu: Rational64, q_exp: Rational64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::invalid("P must be at least 1"));
        }
        if nu <= Rational64::from_integer(0) || nu >= Rational64::new(1, 6) {
            return Err(Error::invalid("nu must lie in (0, 1/6)"));
        }
        if q_exp > Rational64::new(3, 2) {
            return Err(Error::invalid("Q must not exceed P^(3/2)"));
        }
        Ok(ArcParams { p, nu, q_exp })
    }

    /// nu = 1/7 and Q = P^(13/11).
    pub fn standard(p: f64) -> Result<Self> {
        ArcParams::new(p, Rational64::new(1, 7), Rational64::new(13, 11))
    }

    fn pow(&self, e: Rational64) -> f64 {
        self.p.powf(e.to_f64().expect("small rational"))
    }

    pub fn q(&self) -> f64 {
        self.pow(self.q_exp)
    }

    /// P^nu, the norm cutoff for major-arc centers.
    pub fn norm_cutoff(&self) -> f64 {
        self.pow(self.nu)
    }

    /// P^(-3 + nu)
    pub fn radius(&self) -> f64 {
        self.pow(self.nu - 3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcClass {
    Major { gamma: FieldElem, distance: f64 },
    Minor { nearest: Option<FieldElem>, distance: f64 },
}

/// Height of `x` reduced modulo O.
fn torus_height(x: [f64; 2]) -> f64 {
    x.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max)
}

fn torus_height_exact(x: &[BigRational; 2]) -> BigRational {
    let d = |v: &BigRational| (v - v.round()).abs();
    let (a, b) = (d(&x[0]), d(&x[1]));
    if a > b {
        a
    } else {
        b
    }
}

/// Centers gamma with N(a_gamma) <= P^nu.
pub fn major_arc_centers(params: &ArcParams, f: &FieldSpec, ctx: &Ctx) -> Result<Vec<ResidueClass>> {
    enumerate_residues(params.norm_cutoff(), f, ctx)
}

/// Pairwise distance of all centers exceeds twice the radius, decided on
/// exact rational distances against an outward-rounded radius.
pub fn arcs_disjoint(params: &ArcParams, f: &FieldSpec, ctx: &Ctx) -> Result<bool> {
    let centers = major_arc_centers(params, f, ctx)?;
    let two_r = 2.0 * params.radius() * (1.0 + 1e-12);
    let bound = BigRational::from_float(two_r).ok_or_else(|| Error::invalid("radius is not finite"))?;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            let d = f.elem_sub(&a.gamma, &b.gamma);
            if torus_height_exact(&d.coords()) <= bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn classify_arc(alpha: &MinkowskiVec, params: &ArcParams, f: &FieldSpec, ctx: &Ctx) -> Result<ArcClass> {
    let a = alpha.to_f64();
    let centers = major_arc_centers(params, f, ctx)?;
    if !arcs_disjoint(params, f, ctx)? {
        return Err(Error::Violation("major arcs overlap at these parameters".into()));
    }
    let mut best: Option<(f64, &ResidueClass)> = None;
    for g in &centers {
        let gf = g.gamma.to_f64();
        let d = torus_height([a[0] - gf[0], a[1] - gf[1]]);
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, g));
        }
    }
    Ok(match best {
        Some((d, g)) if d < params.radius() => ArcClass::Major { gamma: g.gamma.clone(), distance: d },
        Some((d, g)) => ArcClass::Minor { nearest: Some(g.gamma.clone()), distance: d },
        None => ArcClass::Minor { nearest: None, distance: f64::INFINITY },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub norm: i64,
    pub classes: u64,
    /// Sum of N^(-ns) S_gamma over the classes of this norm.
    pub sum: [f64; 2],
    pub max_term: f64,
    /// `k^(1 - s/6)`, the decay the terms are compared with.
    pub decay_ref: f64,
    /// Running partial sum up to this norm.
    pub partial: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub r: f64,
    pub partial_sum: [f64; 2],
    pub rows: Vec<SeriesRow>,
    /// Largest `#classes(k) / k^(1 + EPS)`.
    pub class_count_ratio: f64,
}

/// Truncated singular series over gamma with N(a_gamma) <= R.
pub fn singular_series(c: &CubicForm, r: f64, ctx: &Ctx) -> Result<SeriesReport> {
    let classes = enumerate_residues(r, &c.field, ctx)?;
    let ns = 2 * c.s as i32;
    for g in &classes {
        let n = g.norm() as u128;
        if c.is_diagonal() {
            ctx.check("complete sum (per variable)", n * n)?;
        } else {
            ctx.check("complete sum", n.checked_pow(ns as u32).unwrap_or(u128::MAX))?;
        }
    }
    let terms = ctx.map(classes.len(), |i| complete_sum(c, &classes[i], ctx).map(|rep| rep.value));
    let mut rows: Vec<SeriesRow> = Vec::new();
    let mut total = [0.0f64; 2];
    for (g, t) in classes.iter().zip(terms) {
        let t = t?;
        let k = g.norm();
        let w = (k as f64).powi(-ns);
        let term = [t[0] * w, t[1] * w];
        if rows.last().map_or(true, |row| row.norm != k) {
            rows.push(SeriesRow {
                norm: k,
                classes: 0,
                sum: [0.0; 2],
                max_term: 0.0,
                decay_ref: (k as f64).powf(1.0 - c.s as f64 / 6.0),
                partial: total,
            });
        }
        let row = rows.last_mut().expect("row pushed");
        row.classes += 1;
        row.sum[0] += term[0];
        row.sum[1] += term[1];
        row.max_term = row.max_term.max(term[0].hypot(term[1]));
        total[0] += term[0];
        total[1] += term[1];
        row.partial = total;
    }
    let class_count_ratio =
        rows.iter().map(|row| row.classes as f64 / (row.norm as f64).powf(1.0 + EPS)).fold(0.0, f64::max);
    Ok(SeriesReport { r, partial_sum: total, rows, class_count_ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountPath {
    /// Hash join for diagonal forms, otherwise generic.
    #[default]
    Auto,
    Generic,
    HashJoin,
}

/// N(P) = #{x in P B, x in O^s : C(x) = 0}.
pub fn brute_count(c: &CubicForm, p: f64, b: &BoxSpec, ctx: &Ctx) -> Result<u64> {
    brute_count_with(c, p, b, ctx, CountPath::Auto)
}

pub fn brute_count_with(c: &CubicForm, p: f64, b: &BoxSpec, ctx: &Ctx, path: CountPath) -> Result<u64> {
    if b.s() != c.s {
        return Err(Error::invalid("box and form disagree on s"));
    }
    let join = match path {
        CountPath::HashJoin => true,
        CountPath::Auto => c.is_diagonal(),
        CountPath::Generic => false,
    };
    let grid = b.grid(p)?;
    if grid.size() == 0 {
        return Ok(0);
    }
    if join {
        hash_join_count(c, &grid, ctx)
    } else {
        ctx.check("brute count", grid.size())?;
        let k = c.compiled()?;
        Ok(ctx
            .reduce(
                grid.size() as u64,
                |r| {
                    let mut n = 0u64;
                    grid.for_range(r, |q| n += u64::from(k.value_flat(q) == [0, 0]));
                    n
                },
                |a, b| a + b,
            )
            .unwrap_or(0))
    }
}

/// Value multiset of `sum a_i x_i^3` over the variables `vars`.
fn half_histogram(
    per_var: &[Vec<([i128; 2], u64)>],
    ctx: &Ctx,
) -> HashMap<[i128; 2], u64> {
    let dims: Vec<i64> = per_var.iter().map(|v| v.len() as i64).collect();
    let grid = Grid::new(vec![0; dims.len()], dims.iter().map(|d| d - 1).collect());
    ctx.reduce(
        grid.size() as u64,
        |r| {
            let mut m: HashMap<[i128; 2], u64> = HashMap::new();
            grid.for_range(r, |q| {
                let mut v = [0i128; 2];
                let mut mult = 1u64;
                for (i, &k) in q.iter().enumerate() {
                    let (x, w) = per_var[i][k as usize];
                    v[0] += x[0];
                    v[1] += x[1];
                    mult *= w;
                }
                *m.entry(v).or_default() += mult;
            });
            m
        },
        |mut a, b| {
            if a.len() < b.len() {
                return merge_into(b, a);
            }
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )
    .unwrap_or_default()
}

fn merge_into(mut a: HashMap<[i128; 2], u64>, b: HashMap<[i128; 2], u64>) -> HashMap<[i128; 2], u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

fn hash_join_count(c: &CubicForm, grid: &Grid, ctx: &Ctx) -> Result<u64> {
    let a = c.diagonal_coeffs().ok_or_else(|| Error::invalid("hash join needs a diagonal form"))?;
    let f = &c.field;
    let mut per_var = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        let ai = ai.small().ok_or_else(|| Error::invalid("coefficients too large"))?;
        let sub = Grid::new(grid.lo[2 * i..2 * i + 2].to_vec(), grid.hi[2 * i..2 * i + 2].to_vec());
        let mut h: HashMap<[i128; 2], u64> = HashMap::new();
        sub.for_each(|q| {
            let x = [q[0] as i128, q[1] as i128];
            *h.entry(f.mul_i(ai, f.mul_i(x, f.mul_i(x, x)))).or_default() += 1;
        });
        let mut v: Vec<_> = h.into_iter().collect();
        v.sort_unstable();
        per_var.push(v);
    }
    let split = c.s.div_ceil(2);
    let size = |vs: &[Vec<([i128; 2], u64)>]| vs.iter().map(|v| v.len() as u128).product::<u128>();
    ctx.check("hash join (left half)", size(&per_var[..split]))?;
    ctx.check("hash join (right half)", size(&per_var[split..]))?;
    let left = half_histogram(&per_var[..split], ctx);
    if split == c.s {
        return Ok(left.get(&[0, 0]).copied().unwrap_or(0));
    }
    let right = &per_var[split..];
    let dims: Vec<i64> = right.iter().map(|v| v.len() as i64).collect();
    let rg = Grid::new(vec![0; dims.len()], dims.iter().map(|d| d - 1).collect());
    Ok(ctx
        .reduce(
            rg.size() as u64,
            |r| {
                let mut n = 0u64;
                rg.for_range(r, |q| {
                    let mut v = [0i128; 2];
                    let mut mult = 1u64;
                    for (i, &k) in q.iter().enumerate() {
                        let (x, w) = right[i][k as usize];
                        v[0] -= x[0];
                        v[1] -= x[1];
                        mult *= w;
                    }
                    if let Some(l) = left.get(&v) {
                        n += l * mult;
                    }
                });
                n
            },
            |a, b| a + b,
        )
        .unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub nu: Rational64,
    pub density: DensityParams,
    /// Overrides the series cutoff P^nu.
    pub series_r: Option<f64>,
}

impl Default for ReportParams {
    fn default() -> Self {
        ReportParams { nu: Rational64::new(1, 7), density: DensityParams::default(), series_r: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: f64,
    pub n: u64,
    /// N(P) / P^(2(s-3))
    pub normalized: f64,
    pub series_r: f64,
    pub series: f64,
    pub integral: f64,
    pub sigma_hat: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub integral: IntegralEstimate,
    pub rows: Vec<ReportRow>,
}

/// Compares N(P) with S(R) J P^(2(s-3)), R = P^nu.
pub fn asymptotic_report(c: &CubicForm, ps: &[f64], b: &BoxSpec, rp: &ReportParams, ctx: &Ctx) -> Result<AsymptoticReport> {
    let integral = zero_density(c, b, &rp.density, ctx)?;
    let mut rows = Vec::new();
    let nu = rp.nu.to_f64().expect("small rational");
    for &p in ps {
        let n = brute_count(c, p, b, ctx)?;
        let normalized = n as f64 / p.powi(2 * (c.s as i32 - 3));
        let series_r = rp.series_r.unwrap_or_else(|| p.powf(nu));
        let series = singular_series(c, series_r, ctx)?.partial_sum[0];
        let sigma_hat = series * integral.value;
        rows.push(ReportRow { p, n, normalized, series_r, series, integral: integral.value, sigma_hat, ratio: normalized / sigma_hat });
    }
    Ok(AsymptoticReport { integral, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ASumReport {
    pub value: f64,
    pub classes: usize,
    pub shifts: usize,
    pub eta: f64,
    /// The bound shape `[R^2 P^(s/2) (1 + (R H^3 eta)^(s/2) + H^s min(1, P^2 eta) / (R P^2 eta)^(s/2))]^n`.
    pub bound_shape: f64,
}

/// A(theta, R, H, P): sum over gamma with R < N(a_gamma)^(1/2) <= 2R and
/// h in O^s with |h| <= H of N(gamma + theta, P, h)^(1/2).
pub fn a_sum(c: &CubicForm, theta: [f64; 2], r: f64, h: i64, p: f64, ctx: &Ctx) -> Result<ASumReport> {
    if r > 4.0 || h > 2 || p > 6.0 || c.s > 2 || h < 0 || !(r > 0.0) {
        return Err(Error::invalid("a_sum is limited to R <= 4, 0 <= H <= 2, P <= 6, s <= 2"));
    }
    let f = &c.field;
    let all = if 4.0 * r * r >= 1.0 { enumerate_residues(4.0 * r * r, f, ctx)? } else { Vec::new() };
    let classes: Vec<ResidueClass> = all
        .into_iter()
        .filter(|g| {
            let root = (g.norm() as f64).sqrt();
            r < root && root <= 2.0 * r
        })
        .collect();
    let shifts = Grid::cube(2 * c.s, -h, h);
    let hs: Vec<Vec<[i128; 2]>> = {
        let mut v = Vec::new();
        shifts.for_each(|q| v.push(q.chunks(2).map(|w| [w[0] as i128, w[1] as i128]).collect()));
        v
    };
    let mut value = 0.0;
    for g in &classes {
        let phase = Phase::mixed(f, &g.gamma, theta)?;
        for hv in &hs {
            value += (count_n_h_phase(c, &phase, p, hv, false, ctx)? as f64).sqrt();
        }
    }
    let s = c.s as f64;
    let hh = (h as f64).max(1.0);
    let th = theta[0].abs().max(theta[1].abs());
    let eta = th + 1.0 / (p * p * hh);
    let inner = r * r
        * p.powf(s / 2.0 + EPS)
        * (1.0 + (r * hh.powi(3) * eta).powf(s / 2.0) + hh.powf(s) / (r * p * p * eta).powf(s / 2.0) * (p * p * eta).min(1.0));
    Ok(ASumReport { value, classes: classes.len(), shifts: hs.len(), eta, bound_shape: inner * inner })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn params_validate() {
        assert!(ArcParams::new(10.0, Rational64::new(1, 6), Rational64::new(13, 11)).is_err());
        assert!(ArcParams::new(10.0, Rational64::new(1, 7), Rational64::new(17, 11)).is_err());
        let a = ArcParams::standard(20.0).unwrap();
        assert!((a.radius() - 20f64.powf(-3.0 + 1.0 / 7.0)).abs() < 1e-15);
    }

    #[test]
    fn origin_is_major() {
        let f = make_field(1).unwrap();
        let a = ArcParams::standard(20.0).unwrap();
        let z = MinkowskiVec::approx(0.0, 0.0);
        assert!(matches!(classify_arc(&z, &a, &f, &Ctx::default()).unwrap(), ArcClass::Major { .. }));
    }
}
