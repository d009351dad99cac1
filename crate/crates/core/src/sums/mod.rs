//! Exponential sums over boxes and residue systems, their differenced and
//! averaged variants, and the counting functions attached to Weyl
//! differencing.

mod boxes;
mod phase;

pub use boxes::{BoxSpec, CenterKind};
pub use phase::Phase;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exec::{ComplexSum, Ctx, KahanSum};
use crate::field::{MinkowskiVec, ResidueClass};
use crate::forms::{Compiled, CubicForm};
use crate::grid::Grid;

/// Default epsilon in every bound verification.
pub const EPS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub value: [f64; 2],
    pub terms: u128,
    pub params: serde_json::Value,
    pub bound_rhs: Option<f64>,
}

impl SumReport {
    pub fn abs(&self) -> f64 {
        self.value[0].hypot(self.value[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumPath {
    /// Diagonal product when the form is diagonal, otherwise generic.
    #[default]
    Auto,
    Generic,
    Diagonal,
    /// Pairs `x` with `-x` on a symmetric box; the sum is real.
    Folded,
}

fn cmul(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
}

fn sum_over(grid: &Grid, ctx: &Ctx, phase_of: impl Fn(&[i64]) -> f64 + Sync) -> [f64; 2] {
    let total = ctx
        .reduce(
            grid.size() as u64,
            |r| {
                let mut acc = ComplexSum::default();
                grid.for_range(r, |p| acc.add_phase(phase_of(p)));
                acc
            },
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
        .unwrap_or_default();
    let (re, im) = total.value();
    [re, im]
}

/// Integer height bound: the largest integer strictly below `p`.
pub fn height_below(p: f64) -> i64 {
    (p.ceil() as i64 - 1).max(0)
}

/// S(alpha; P) over the integer points of P B.
pub fn weyl_sum(c: &CubicForm, alpha: &MinkowskiVec, p: f64, b: &BoxSpec, ctx: &Ctx) -> Result<SumReport> {
    weyl_sum_with(c, alpha, p, b, ctx, SumPath::Auto)
}

pub fn weyl_sum_with(
    c: &CubicForm,
    alpha: &MinkowskiVec,
    p: f64,
    b: &BoxSpec,
    ctx: &Ctx,
    path: SumPath,
) -> Result<SumReport> {
    let phase = Phase::new(&c.field, alpha)?;
    weyl_sum_phase(c, &phase, p, b, ctx, path).map(|mut r| {
        r.params = json!({"alpha": alpha, "P": p});
        r
    })
}

pub fn weyl_sum_phase(c: &CubicForm, phase: &Phase, p: f64, b: &BoxSpec, ctx: &Ctx, path: SumPath) -> Result<SumReport> {
    if b.s() != c.s {
        return Err(Error::invalid("box and form have different variable counts"));
    }
    let grid = b.grid(p)?;
    ctx.check("weyl sum", grid.size())?;
    let k = c.compiled()?;
    let path = match path {
        SumPath::Auto if c.is_diagonal() => SumPath::Diagonal,
        SumPath::Auto => SumPath::Generic,
        other => other,
    };
    let value = match path {
        SumPath::Diagonal => {
            let a = c.diagonal_coeffs().ok_or_else(|| Error::invalid("form is not diagonal"))?;
            let mut v = [1.0, 0.0];
            for (m, am) in a.iter().enumerate() {
                let am = am.small().ok_or_else(|| Error::invalid("coefficient too large"))?;
                let g = Grid::new(grid.lo[2 * m..2 * m + 2].to_vec(), grid.hi[2 * m..2 * m + 2].to_vec());
                let f = &c.field;
                let one = sum_over(&g, &Ctx::sequential(), |q| {
                    let x = [q[0] as i128, q[1] as i128];
                    phase.frac(f.mul_i(am, f.mul_i(x, f.mul_i(x, x))))
                });
                v = cmul(v, one);
            }
            v
        }
        SumPath::Folded => {
            if b.center != CenterKind::Symmetric {
                return Err(Error::invalid("folding needs the symmetric box"));
            }
            let half = ctx
                .reduce(
                    grid.size() as u64,
                    |r| {
                        let mut acc = KahanSum::default();
                        grid.for_range(r, |q| {
                            if let Some(&first) = q.iter().find(|&&v| v != 0) {
                                if first > 0 {
                                    acc.add((std::f64::consts::TAU * phase.frac(k.value_flat(q))).cos());
                                }
                            }
                        });
                        acc
                    },
                    |mut a, b| {
                        a.merge(&b);
                        a
                    },
                )
                .unwrap_or_default();
            [1.0 + 2.0 * half.value(), 0.0]
        }
        _ => sum_over(&grid, ctx, |q| phase.frac(k.value_flat(q))),
    };
    Ok(SumReport { value, terms: grid.size(), params: json!({"P": p}), bound_rhs: None })
}

/// Multiset of C(x) over the integer points of P B, sorted by value.
pub fn value_histogram(c: &CubicForm, p: f64, b: &BoxSpec, ctx: &Ctx) -> Result<Vec<([i128; 2], u64)>> {
    let grid = b.grid(p)?;
    ctx.check("value histogram", grid.size())?;
    let k = c.compiled()?;
    let map = ctx
        .reduce(
            grid.size() as u64,
            |r| {
                let mut m: HashMap<[i128; 2], u64> = HashMap::new();
                grid.for_range(r, |q| *m.entry(k.value_flat(q)).or_default() += 1);
                m
            },
            |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            },
        )
        .unwrap_or_default();
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

fn sum_histogram(hist: &[([i128; 2], u64)], phase: &Phase) -> [f64; 2] {
    let mut acc = ComplexSum::default();
    for &(v, m) in hist {
        let (s, c) = (std::f64::consts::TAU * phase.frac(v)).sin_cos();
        acc.add(c * m as f64, s * m as f64);
    }
    let (re, im) = acc.value();
    [re, im]
}

/// Exact histogram of phase indices over `x mod N(a_gamma)`.
fn complete_indices(c: &Compiled, phase: &Phase, n: i64, dims: usize, ctx: &Ctx) -> Vec<u64> {
    let grid = Grid::cube(dims, 0, n - 1);
    let den = phase.den() as usize;
    ctx.reduce(
        grid.size() as u64,
        |r| {
            let mut h = vec![0u64; den];
            grid.for_range(r, |q| h[phase.index(c.value_flat(q)) as usize] += 1);
            h
        },
        |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
    )
    .unwrap_or_else(|| vec![0; den])
}

fn from_indices(h: &[u64]) -> [f64; 2] {
    let den = h.len() as f64;
    let mut acc = ComplexSum::default();
    for (r, &m) in h.iter().enumerate() {
        if m > 0 {
            let (s, c) = (std::f64::consts::TAU * r as f64 / den).sin_cos();
            acc.add(c * m as f64, s * m as f64);
        }
    }
    let (re, im) = acc.value();
    [re, im]
}

/// S_gamma = sum over x mod N(a_gamma) of e(tr(gamma C(x))).
pub fn complete_sum(c: &CubicForm, g: &ResidueClass, ctx: &Ctx) -> Result<SumReport> {
    complete_sum_with(c, g, ctx, SumPath::Auto)
}

pub fn complete_sum_with(c: &CubicForm, g: &ResidueClass, ctx: &Ctx, path: SumPath) -> Result<SumReport> {
    let n = g.norm();
    let phase = Phase::mixed(&c.field, &g.gamma, [0.0, 0.0])?;
    let terms = (n as u128).checked_pow(2 * c.s as u32).unwrap_or(u128::MAX);
    let diagonal = match path {
        SumPath::Diagonal => true,
        SumPath::Auto => c.is_diagonal(),
        _ => false,
    };
    let value = if diagonal {
        let a = c.diagonal_coeffs().ok_or_else(|| Error::invalid("form is not diagonal"))?;
        ctx.check("complete sum (per variable)", (n as u128).pow(2))?;
        let mut v = [1.0, 0.0];
        for am in &a {
            let one = CubicForm::diagonal(c.field.clone(), std::slice::from_ref(am))?.compiled()?;
            v = cmul(v, from_indices(&complete_indices(&one, &phase, n, 2, ctx)));
        }
        v
    } else {
        ctx.check("complete sum", terms)?;
        from_indices(&complete_indices(&c.compiled()?, &phase, n, 2 * c.s, ctx))
    };
    Ok(SumReport { value, terms, params: json!({"gamma": g.gamma.to_string(), "N": n}), bound_rhs: None })
}

/// Checks that shifting any single coordinate by N(a_gamma) leaves every
/// phase of S_gamma unchanged.
pub fn complete_sum_periodic(c: &CubicForm, g: &ResidueClass, ctx: &Ctx) -> Result<bool> {
    let n = g.norm();
    let phase = Phase::mixed(&c.field, &g.gamma, [0.0, 0.0])?;
    let k = c.compiled()?;
    let dims = 2 * c.s;
    let grid = Grid::cube(dims, 0, n - 1);
    ctx.check("periodicity check", grid.size() * dims as u128)?;
    Ok(ctx
        .reduce(
            grid.size() as u64,
            |r| {
                let mut ok = true;
                let mut q2 = vec![0i64; dims];
                grid.for_range(r, |q| {
                    let base = phase.index(k.value_flat(q));
                    for t in 0..dims {
                        q2.copy_from_slice(q);
                        q2[t] += n;
                        ok &= phase.index(k.value_flat(&q2)) == base;
                    }
                });
                ok
            },
            |a, b| a && b,
        )
        .unwrap_or(true))
}

/// The characters `alpha w_j` (times 6 when `literal_six`) for j = 1, 2.
fn omega_phases(alpha: &Phase, literal_six: bool) -> [Phase; 2] {
    let k = if literal_six { 6 } else { 1 };
    [alpha.times([k, 0]), alpha.times([0, k])]
}

/// N(alpha, P): pairs (x, y) with |x|, |y| < P and
/// ||tr(alpha w_j B_i(x, y))|| < 1/P for all i, j.
pub fn count_n(c: &CubicForm, alpha: &MinkowskiVec, p: f64, literal_six: bool, ctx: &Ctx) -> Result<u64> {
    let phase = Phase::new(&c.field, alpha)?;
    count_n_phase(c, &phase, p, literal_six, ctx)
}

pub fn count_n_phase(c: &CubicForm, phase: &Phase, p: f64, literal_six: bool, ctx: &Ctx) -> Result<u64> {
    c.compiled()?;
    let s = c.s;
    let hb = height_below(p);
    let grid = Grid::cube(4 * s, -hb, hb);
    ctx.check("count N", grid.size())?;
    let ph = omega_phases(phase, literal_six);
    Ok(ctx
        .reduce(
            grid.size() as u64,
            |r| {
                let mut n = 0u64;
                let (mut x, mut y) = (vec![[0i128; 2]; s], vec![[0i128; 2]; s]);
                grid.for_range(r, |q| {
                    for m in 0..s {
                        x[m] = [q[2 * m] as i128, q[2 * m + 1] as i128];
                        y[m] = [q[2 * s + 2 * m] as i128, q[2 * s + 2 * m + 1] as i128];
                    }
                    let bs = c.bilinear_all_small(&x, &y);
                    if bs.iter().all(|&b| ph.iter().all(|f| f.dist_below_inv(b, p))) {
                        n += 1;
                    }
                });
                n
            },
            |a, b| a + b,
        )
        .unwrap_or(0))
}

/// N(alpha, P, h): vectors w with |w| < P and
/// ||tr(alpha w_j B_i(w, h))|| < 1/P for all i, j.
pub fn count_n_h(c: &CubicForm, alpha: &MinkowskiVec, p: f64, h: &[[i128; 2]], literal_six: bool, ctx: &Ctx) -> Result<u64> {
    let phase = Phase::new(&c.field, alpha)?;
    count_n_h_phase(c, &phase, p, h, literal_six, ctx)
}

pub fn count_n_h_phase(c: &CubicForm, phase: &Phase, p: f64, h: &[[i128; 2]], literal_six: bool, ctx: &Ctx) -> Result<u64> {
    c.compiled()?;
    let s = c.s;
    if h.len() != s {
        return Err(Error::invalid("h has the wrong length"));
    }
    let hb = height_below(p);
    let grid = Grid::cube(2 * s, -hb, hb);
    ctx.check("count N_h", grid.size())?;
    let ph = omega_phases(phase, literal_six);
    Ok(ctx
        .reduce(
            grid.size() as u64,
            |r| {
                let mut n = 0u64;
                let mut w = vec![[0i128; 2]; s];
                grid.for_range(r, |q| {
                    for m in 0..s {
                        w[m] = [q[2 * m] as i128, q[2 * m + 1] as i128];
                    }
                    let bs = c.bilinear_all_small(&w, h);
                    if bs.iter().all(|&b| ph.iter().all(|f| f.dist_below_inv(b, p))) {
                        n += 1;
                    }
                });
                n
            },
            |a, b| a + b,
        )
        .unwrap_or(0))
}

/// Grid of `y` with both `y` and `y + h` in P B.
pub fn shift_region(grid: &Grid, h: &[[i128; 2]]) -> Grid {
    let flat: Vec<i64> = h.iter().flat_map(|v| [v[0] as i64, v[1] as i64]).collect();
    Grid::new(
        grid.lo.iter().zip(&flat).map(|(l, d)| (*l).max(l - d)).collect(),
        grid.hi.iter().zip(&flat).map(|(u, d)| (*u).min(u - d)).collect(),
    )
}

/// T(h, beta) = sum over y in R(h) of e(tr(beta [C(y + h) - C(y)])).
pub fn t_sum(c: &CubicForm, h: &[[i128; 2]], beta: &MinkowskiVec, p: f64, b: &BoxSpec, ctx: &Ctx) -> Result<SumReport> {
    let phase = Phase::new(&c.field, beta)?;
    let k = c.compiled()?;
    let region = shift_region(&b.grid(p)?, h);
    ctx.check("T sum", region.size())?;
    let flat: Vec<i64> = h.iter().flat_map(|v| [v[0] as i64, v[1] as i64]).collect();
    let value = sum_over(&region, ctx, |q| {
        let yh: Vec<i64> = q.iter().zip(&flat).map(|(a, d)| a + d).collect();
        let (u, v) = (k.value_flat(&yh), k.value_flat(q));
        phase.frac([u[0] - v[0], u[1] - v[1]])
    });
    Ok(SumReport { value, terms: region.size(), params: json!({"h": h, "beta": beta, "P": p}), bound_rhs: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanSquare {
    pub value: f64,
    pub error_estimate: f64,
    pub grid: usize,
}

/// Largest frequency of `beta -> e(tr(beta v))` over the histogram, per axis.
fn max_frequency(c: &CubicForm, hist: &[([i128; 2], u64)]) -> usize {
    let t = c.field.trace_form;
    hist.iter()
        .map(|(v, _)| {
            let a = (v[0] * t[0][0] as i128 + v[1] * t[1][0] as i128).abs();
            let b = (v[0] * t[0][1] as i128 + v[1] * t[1][1] as i128).abs();
            a.max(b)
        })
        .max()
        .unwrap_or(0) as usize
}

/// Quadrature resolution for [`mean_square`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    /// Nodes per oscillation length `P^-3` along each axis.
    pub points_per_osc: f64,
    pub min_grid: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { points_per_osc: 8.0, min_grid: 64 }
    }
}

fn midpoint_2d(n: usize, center: [f64; 2], kappa: f64, ctx: &Ctx, f: impl Fn([f64; 2]) -> f64 + Sync) -> f64 {
    let h = 2.0 * kappa / n as f64;
    let rows = ctx.map(n, |i| {
        let mut acc = KahanSum::default();
        for j in 0..n {
            let b = [center[0] - kappa + (i as f64 + 0.5) * h, center[1] - kappa + (j as f64 + 0.5) * h];
            acc.add(f(b));
        }
        acc
    });
    let mut total = KahanSum::default();
    rows.iter().for_each(|r| total.merge(r));
    total.value() * h * h
}

/// M(alpha, kappa) by midpoint quadrature on an `n x n` grid, refined once.
pub fn mean_square(
    c: &CubicForm,
    alpha: [f64; 2],
    kappa: f64,
    p: f64,
    b: &BoxSpec,
    quad: QuadSpec,
    ctx: &Ctx,
) -> Result<MeanSquare> {
    if !(kappa > 0.0 && kappa <= 0.5) {
        return Err(Error::invalid("kappa must lie in (0, 1/2]"));
    }
    let hist = value_histogram(c, p, b, ctx)?;
    let n = ((quad.points_per_osc * 2.0 * kappa * p.powi(3)).ceil() as usize).max(quad.min_grid);
    ctx.check("mean square quadrature", (2 * n as u128).pow(2) * hist.len() as u128)?;
    let f = &c.field;
    let eval = |beta: [f64; 2]| {
        let v = sum_histogram(&hist, &Phase::new(f, &MinkowskiVec::Approx(beta)).expect("approx phase"));
        v[0] * v[0] + v[1] * v[1]
    };
    let coarse = midpoint_2d(n, alpha, kappa, ctx, eval);
    let fine = midpoint_2d(2 * n, alpha, kappa, ctx, eval);
    Ok(MeanSquare { value: fine, error_estimate: (fine - coarse).abs() / 3.0, grid: 2 * n })
}

/// Midpoint quadrature of S(alpha) over the whole torus. The grid exceeds
/// twice the largest frequency, which makes the rule exact up to rounding.
///
/// tr(alpha v) = alpha . (T v) is linear in alpha, so the n x n node sum
/// splits into a product of one-dimensional sums, tabulated per frequency.
pub fn torus_integral(c: &CubicForm, p: f64, b: &BoxSpec, min_grid: usize, ctx: &Ctx) -> Result<[f64; 2]> {
    let hist = value_histogram(c, p, b, ctx)?;
    let m = max_frequency(c, &hist);
    let n = (2 * m + 1).max(min_grid);
    ctx.check("torus quadrature", (2 * m as u128 + 1) * n as u128 + hist.len() as u128)?;
    // table[k] = (1/n) sum_i e(L (i + 1/2) / n) for L = k - m
    let table = ctx.map(2 * m + 1, |k| {
        let l = k as i128 - m as i128;
        let mut acc = ComplexSum::default();
        for i in 0..n as i128 {
            // exact reduction of L (2i + 1) / (2n) modulo 1
            let num = (l * (2 * i + 1)).rem_euclid(2 * n as i128);
            acc.add_phase(num as f64 / (2 * n) as f64);
        }
        let (re, im) = acc.value();
        [re / n as f64, im / n as f64]
    });
    let t = c.field.trace_form;
    let mut acc = ComplexSum::default();
    for &(v, mult) in &hist {
        let l0 = v[0] * t[0][0] as i128 + v[1] * t[1][0] as i128;
        let l1 = v[0] * t[0][1] as i128 + v[1] * t[1][1] as i128;
        let g0 = table[(l0 + m as i128) as usize];
        let g1 = table[(l1 + m as i128) as usize];
        let w = mult as f64;
        acc.add(w * (g0[0] * g1[0] - g0[1] * g1[1]), w * (g0[0] * g1[1] + g0[1] * g1[0]));
    }
    let (re, im) = acc.value();
    Ok([re, im])
}

/// Exact count of pairs with C(x) = C(y), the orthogonality value of M.
pub fn equal_value_pairs(c: &CubicForm, p: f64, b: &BoxSpec, ctx: &Ctx) -> Result<u128> {
    Ok(value_histogram(c, p, b, ctx)?.iter().map(|(_, m)| (*m as u128).pow(2)).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSample {
    pub gamma: ResidueClass,
    pub theta: [f64; 2],
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylBoundRow {
    pub norm: i64,
    pub theta_height: f64,
    pub p: f64,
    pub measured: f64,
    pub bound_rhs: f64,
    pub ratio: f64,
    pub flagged: bool,
}

/// Measured |S(gamma + theta)| against
/// `P^(2s+eps) (N^(1/2)|theta| + (N^(1/2)|theta| P^3)^-1)^(2s/8)`.
pub fn verify_weyl_bound(
    c: &CubicForm,
    samples: &[WeylSample],
    b: &BoxSpec,
    eps: f64,
    constant: f64,
    ctx: &Ctx,
) -> Result<Vec<WeylBoundRow>> {
    let s = c.s as f64;
    samples
        .iter()
        .map(|smp| {
            let n = smp.gamma.norm() as f64;
            if n.sqrt() > smp.p.powf(1.5) {
                return Err(Error::Hypothesis(format!("N(a_gamma)^(1/2) = {} exceeds P^(3/2)", n.sqrt())));
            }
            let phase = Phase::mixed(&c.field, &smp.gamma.gamma, smp.theta)?;
            let measured = weyl_sum_phase(c, &phase, smp.p, b, ctx, SumPath::Auto)?.abs();
            let th = smp.theta[0].abs().max(smp.theta[1].abs());
            let x = n.sqrt() * th;
            let inner = x + 1.0 / (x * smp.p.powi(3));
            let rhs = smp.p.powf(2.0 * s + eps) * inner.powf(2.0 * s / 8.0);
            let ratio = measured / rhs;
            Ok(WeylBoundRow {
                norm: n as i64,
                theta_height: th,
                p: smp.p,
                measured,
                bound_rhs: rhs,
                ratio,
                flagged: ratio > constant,
            })
        })
        .collect()
}

/// `sum_{|x|,|y| < P} prod_{i,j} min(P, ||tr(alpha w_j B_i(x, y))||^-1)`.
pub fn fourth_power_rhs_sum(c: &CubicForm, alpha: &MinkowskiVec, p: f64, ctx: &Ctx) -> Result<f64> {
    let phase = Phase::new(&c.field, alpha)?;
    c.compiled()?;
    let ph = omega_phases(&phase, false);
    let s = c.s;
    let hb = height_below(p);
    let grid = Grid::cube(4 * s, -hb, hb);
    ctx.check("fourth power sum", grid.size())?;
    Ok(ctx
        .reduce(
            grid.size() as u64,
            |r| {
                let mut acc = KahanSum::default();
                let (mut x, mut y) = (vec![[0i128; 2]; s], vec![[0i128; 2]; s]);
                grid.for_range(r, |q| {
                    for m in 0..s {
                        x[m] = [q[2 * m] as i128, q[2 * m + 1] as i128];
                        y[m] = [q[2 * s + 2 * m] as i128, q[2 * s + 2 * m + 1] as i128];
                    }
                    let mut prod = 1.0;
                    for bv in c.bilinear_all_small(&x, &y) {
                        for f in &ph {
                            let d = f.dist(bv);
                            prod *= if d * p < 1.0 { p } else { 1.0 / d };
                        }
                    }
                    acc.add(prod);
                });
                acc
            },
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
        .map(|k| k.value())
        .unwrap_or(0.0))
}
