//! The singular integral through the density of real zeros, and the
//! truncated oscillatory integral by tensor quadrature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{Ctx, KahanSum};
use crate::forms::CubicForm;
use crate::grid::Grid;
use crate::sums::{BoxSpec, CenterKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralMethod {
    Density,
    Oscillatory,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub samples: u64,
    /// delta_k = delta0 2^-k for k < deltas.
    pub deltas: usize,
    pub delta0: f64,
    pub seed: u64,
}

impl Default for DensityParams {
    fn default() -> Self {
        DensityParams { samples: 10_000_000, deltas: 5, delta0: 0.1, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatoryParams {
    /// `|zeta| < cutoff`, i.e. R^nu.
    pub cutoff: f64,
    /// Midpoints per coordinate.
    pub nodes: usize,
}

impl Default for OscillatoryParams {
    fn default() -> Self {
        OscillatoryParams { cutoff: 6.0, nodes: 72 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub delta: f64,
    pub density: f64,
    pub std_error: f64,
    pub hits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub method: IntegralMethod,
    /// The singular integral, i.e. `density / |Delta|` for the density method.
    pub value: f64,
    pub std_error: f64,
    /// `(2 delta)^-2 vol{xi in B : |C(xi)_j| < delta}` extrapolated to 0.
    pub density: Option<f64>,
    pub sweep: Vec<DeltaRow>,
    pub converged: bool,
}

fn center_check(c: &CubicForm, b: &BoxSpec) -> Result<()> {
    match &b.center {
        CenterKind::CenteredAt(z) => BoxSpec::centered(c, z, 1.0).map(|_| ()),
        _ => Err(Error::invalid("the singular integral needs a box centered at a real zero")),
    }
}

/// The singular integral over a box centered at a nonsingular real zero.
pub fn singular_integral(c: &CubicForm, b: &BoxSpec, method: IntegralMethod, ctx: &Ctx) -> Result<IntegralEstimate> {
    center_check(c, b)?;
    match method {
        IntegralMethod::Density => zero_density(c, b, &DensityParams::default(), ctx),
        IntegralMethod::Oscillatory => oscillatory_integral(c, b, &OscillatoryParams::default(), ctx),
    }
}

/// Monte Carlo density of `C = 0` on any box. Sample `i` always uses the
/// same stretch of the ChaCha stream, so results do not depend on chunking.
pub fn zero_density(c: &CubicForm, b: &BoxSpec, dp: &DensityParams, ctx: &Ctx) -> Result<IntegralEstimate> {
    if b.s() != c.s {
        return Err(Error::invalid("box and form disagree on s"));
    }
    if dp.deltas < 2 || !(dp.delta0 > 0.0) || dp.samples == 0 {
        return Err(Error::invalid("need at least two deltas, delta0 > 0 and samples > 0"));
    }
    ctx.check("density samples", dp.samples as u128)?;
    let s = c.s;
    let (lo, hi) = b.bounds_f64();
    let deltas: Vec<f64> = (0..dp.deltas).map(|k| dp.delta0 / (1u64 << k) as f64).collect();
    let poly = c.poly_terms_in::<f64>();
    let hits = ctx
        .reduce(
            dp.samples,
            |range| {
                let mut rng = ChaCha8Rng::seed_from_u64(dp.seed);
                rng.set_word_pos(range.start as u128 * 4 * s as u128);
                let mut h = vec![0u64; deltas.len()];
                let mut xi = vec![[0.0f64; 2]; s];
                for _ in range {
                    for (m, x) in xi.iter_mut().enumerate() {
                        for j in 0..2 {
                            let t: f64 = rng.gen();
                            x[j] = lo[2 * m + j] + t * (hi[2 * m + j] - lo[2 * m + j]);
                        }
                    }
                    let v = eval(&c.field, &poly, &xi);
                    let m = v[0].abs().max(v[1].abs());
                    for (k, d) in deltas.iter().enumerate() {
                        if m < *d {
                            h[k] += 1;
                        } else {
                            break;
                        }
                    }
                }
                h
            },
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        )
        .unwrap_or_default();
    let vol = b.volume();
    let n = dp.samples as f64;
    let sweep: Vec<DeltaRow> = deltas
        .iter()
        .zip(&hits)
        .map(|(&d, &k)| {
            let p = k as f64 / n;
            let scale = vol / (4.0 * d * d);
            DeltaRow { delta: d, density: p * scale, std_error: (p * (1.0 - p) / n).sqrt() * scale, hits: k }
        })
        .collect();
    // least squares line through (delta, density), read off at delta = 0
    let m = sweep.len() as f64;
    let (sx, sy) = sweep.iter().fold((0.0, 0.0), |(a, b), r| (a + r.delta, b + r.density));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = sweep.iter().fold((0.0, 0.0), |(a, b), r| {
        (a + (r.delta - mx) * (r.density - my), b + (r.delta - mx).powi(2))
    });
    let slope = sxy / sxx;
    let density = (my - slope * mx).max(0.0);
    let last = sweep.last().expect("two deltas");
    let prev = &sweep[sweep.len() - 2];
    let std_error = last.std_error.hypot(density - last.density);
    let step = (last.density - prev.density).abs();
    let noise = 3.0 * last.std_error.hypot(prev.std_error);
    let converged = last.hits >= 100 && step <= noise.max(0.1 * last.density);
    let delta = c.field.delta.abs() as f64;
    Ok(IntegralEstimate {
        method: IntegralMethod::Density,
        value: density / delta,
        std_error: std_error / delta,
        density: Some(density),
        sweep,
        converged,
    })
}

fn eval(f: &crate::field::FieldSpec, poly: &[([usize; 3], [f64; 2])], x: &[[f64; 2]]) -> [f64; 2] {
    let mut acc = [0.0f64; 2];
    for (idx, a) in poly {
        let m = f.mul_f(f.mul_f(x[idx[0]], x[idx[1]]), x[idx[2]]);
        let t = f.mul_f(*a, m);
        acc[0] += t[0];
        acc[1] += t[1];
    }
    acc
}

/// `int_{-L}^{L} e(zeta u) d zeta`
fn dirichlet(l: f64, u: f64) -> f64 {
    if u.abs() < 1e-12 {
        2.0 * l
    } else {
        (std::f64::consts::TAU * l * u).sin() / (std::f64::consts::PI * u)
    }
}

fn oscillatory_once(c: &CubicForm, b: &BoxSpec, l: f64, nodes: usize, ctx: &Ctx) -> Result<f64> {
    let dims = 2 * c.s;
    let grid = Grid::cube(dims, 0, nodes as i64 - 1);
    ctx.check("oscillatory quadrature", grid.size())?;
    let (lo, hi) = b.bounds_f64();
    let w: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (b - a) / nodes as f64).collect();
    let cell: f64 = w.iter().product();
    let poly = c.poly_terms_in::<f64>();
    let t = c.field.trace_form;
    let f = &c.field;
    let total = ctx
        .reduce(
            grid.size() as u64,
            |range| {
                let mut acc = KahanSum::default();
                let mut xi = vec![[0.0f64; 2]; c.s];
                grid.for_range(range, |q| {
                    for m in 0..c.s {
                        for j in 0..2 {
                            xi[m][j] = lo[2 * m + j] + (q[2 * m + j] as f64 + 0.5) * w[2 * m + j];
                        }
                    }
                    let v = eval(f, &poly, &xi);
                    // tr(zeta v) = zeta . (T v)
                    let u0 = t[0][0] as f64 * v[0] + t[0][1] as f64 * v[1];
                    let u1 = t[1][0] as f64 * v[0] + t[1][1] as f64 * v[1];
                    acc.add(dirichlet(l, u0) * dirichlet(l, u1));
                });
                acc
            },
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
        .map(|k| k.value())
        .unwrap_or(0.0);
    Ok(total * cell)
}

/// Truncated singular integral by midpoint quadrature; the error bar adds the
/// change from halving the nodes and from halving the cutoff.
pub fn oscillatory_integral(c: &CubicForm, b: &BoxSpec, op: &OscillatoryParams, ctx: &Ctx) -> Result<IntegralEstimate> {
    if c.s > 2 {
        return Err(Error::invalid("the oscillatory method is limited to s <= 2"));
    }
    if op.nodes < 4 || !(op.cutoff > 0.0) {
        return Err(Error::invalid("need nodes >= 4 and a positive cutoff"));
    }
    let full = oscillatory_once(c, b, op.cutoff, op.nodes, ctx)?;
    let coarse = oscillatory_once(c, b, op.cutoff, op.nodes / 2, ctx)?;
    let short = oscillatory_once(c, b, op.cutoff / 2.0, op.nodes, ctx)?;
    let std_error = (full - coarse).abs() + (full - short).abs();
    Ok(IntegralEstimate {
        method: IntegralMethod::Oscillatory,
        value: full,
        std_error,
        density: None,
        sweep: Vec::new(),
        converged: std_error <= 0.2 * full.abs(),
    })
}
