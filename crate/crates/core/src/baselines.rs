//! Regression constants, measured once on the calibration suites in
//! `verify` and frozen (maxima rounded up at the second decimal). They
//! bound implied constants at desk scale only.

/// Largest `|alpha - gamma| N(a_gamma)^(1/2) Q` over the Dirichlet grid, per field.
/// Measured 1.1879 and 1.6536.
pub const DIRICHLET_C_D1: f64 = 1.19;
pub const DIRICHLET_C_D3: f64 = 1.66;

/// Largest shrinking ratio `N(1) / (Z^-m N(Z))` over the random suite, m = 1..=4.
/// Measured 2.5, 5.25, 8.875, 14.9375.
pub const SHRINK_C: [f64; 4] = [2.5, 5.25, 8.88, 14.94];

/// Largest `|S_gamma| N^-(2s - s/6)` for the diagonal s = 2 suite over Q(i).
/// Measured 1.5874, i.e. 2^(2/3).
pub const S_GAMMA_C: f64 = 1.59;

pub fn dirichlet_c(d: i64) -> Option<f64> {
    match d {
        1 => Some(DIRICHLET_C_D1),
        3 => Some(DIRICHLET_C_D3),
        _ => None,
    }
}

/// Two-sided constants `[lower, upper]` relating the coordinate height |a|
/// to other sizes of a nonzero a in K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightConstants {
    /// `|a|_K / |a|`, with |a|_K the largest embedding modulus.
    pub embedding: [f64; 2],
    /// `Norm(a) / |a|^2`
    pub norm: [f64; 2],
    /// `|a^-1| |a|`
    pub inverse: [f64; 2],
}

/// Frozen from 10^5 random elements per field. The measured extremes sit
/// within 1e-3 of the closed forms 1, sqrt 2 (d = 1) and sqrt 3 / 2,
/// sqrt 3 (d = 3), which are used as the bounds.
pub fn height_constants(d: i64) -> Option<HeightConstants> {
    match d {
        1 => Some(HeightConstants { embedding: [1.0, 1.4143], norm: [1.0, 2.0], inverse: [0.5, 1.0] }),
        3 => Some(HeightConstants { embedding: [0.8660, 1.7321], norm: [0.75, 3.0], inverse: [1.0 / 3.0, 4.0 / 3.0] }),
        _ => None,
    }
}
