//! Exponent bookkeeping for the minor-arc argument with s = 14, n = 2.
//!
//! Every quantity is a power of P after substituting `R = P^rho`; an entry
//! compares two affine functions of rho over a closed interval, so checking
//! the two endpoints decides it. All epsilons are set to zero and strict
//! entries must hold strictly.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// `c + k rho` as the exponent of P.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub c: Rational64,
    pub k: Rational64,
}

impl Affine {
    pub fn constant(c: Rational64) -> Self {
        Affine { c, k: Rational64::zero() }
    }

    pub fn new(c: Rational64, k: Rational64) -> Self {
        Affine { c, k }
    }

    pub fn at(&self, rho: Rational64) -> Rational64 {
        self.c + self.k * rho
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c.is_zero(), self.k.is_zero()) {
            (_, true) => write!(f, "{}", self.c),
            (true, false) => write!(f, "{}*rho", self.k),
            _ => write!(f, "{} + {}*rho", self.c, self.k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lt => "<",
            Direction::Le => "<=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub name: &'static str,
    pub lhs: Affine,
    pub rhs: Affine,
    pub direction: Direction,
    /// Closed rho interval on which the comparison is claimed.
    pub regime: (Rational64, Rational64),
    pub anchor: &'static str,
    /// Planted failure used to show that the verifier can fail.
    pub sentinel: bool,
}

impl LedgerEntry {
    pub fn holds(&self) -> bool {
        [self.regime.0, self.regime.1].iter().all(|&rho| {
            let (a, b) = (self.lhs.at(rho), self.rhs.at(rho));
            match self.direction {
                Direction::Lt => a < b,
                Direction::Le => a <= b,
            }
        })
    }

    pub fn render(&self) -> String {
        format!(
            "{} | P^({}) {} P^({}) | rho in [{}, {}] | {}{}",
            self.name,
            self.lhs,
            self.direction,
            self.rhs,
            self.regime.0,
            self.regime.1,
            self.anchor,
            if self.sentinel { " | sentinel" } else { "" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub name: String,
    pub lhs_exponent: String,
    pub direction: Direction,
    pub rhs_exponent: String,
    pub regime: [String; 2],
    pub anchor: String,
    pub sentinel: bool,
    pub holds: bool,
}

impl From<&LedgerEntry> for LedgerRow {
    fn from(e: &LedgerEntry) -> Self {
        LedgerRow {
            name: e.name.to_string(),
            lhs_exponent: e.lhs.to_string(),
            direction: e.direction,
            rhs_exponent: e.rhs.to_string(),
            regime: [e.regime.0.to_string(), e.regime.1.to_string()],
            anchor: e.anchor.to_string(),
            sentinel: e.sentinel,
            holds: e.holds(),
        }
    }
}

pub const Q_EXP: (i64, i64) = (13, 11);

/// phi_0 = (R^4 P^31)^(-1/15)
pub fn phi0() -> Affine {
    Affine::new(r(-31, 15), r(-4, 15))
}

/// phi_1 = R^(9/10) P^-3
pub fn phi1() -> Affine {
    Affine::new(r(-3, 1), r(9, 10))
}

/// phi_2 = P^(-43/25) R^(-7/10)
pub fn phi2() -> Affine {
    Affine::new(r(-43, 25), r(-7, 10))
}

pub fn entries() -> Vec<LedgerEntry> {
    let q = r(Q_EXP.0, Q_EXP.1);
    let c = Affine::constant;
    let zero = Rational64::zero();
    let all = (zero, q);
    let pt = (zero, zero);
    let low = (zero, r(4, 5));
    let high = (r(4, 5), q);
    let e = |name, lhs, direction, rhs, regime, anchor| LedgerEntry {
        name,
        lhs,
        rhs,
        direction,
        regime,
        anchor,
        sentinel: false,
    };
    vec![
        e("nu_below_1_over_n_plus_4", c(r(1, 7)), Direction::Lt, c(r(1, 6)), pt, "$\\nu < \\frac{1}{n+4}$"),
        e(
            "Q_at_most_P_3_2",
            c(q),
            Direction::Lt,
            c(r(3, 2)),
            pt,
            "also satisfies our earlier rough assumption $Q \\le P^{3/2}$",
        ),
        e("Q_over_P2", c(q), Direction::Lt, c(r(2, 1)), pt, "$\\frac{Q}{P^2}+\\frac{Q^{9/7}}{P^{11/7}}$"),
        // Q^(9/7) / P^(11/7): 117/77 < 121/77
        e("Q_9_7_over_P_11_7", c(q * r(9, 7)), Direction::Lt, c(r(11, 7)), pt, "satisfactory if $Q \\ll P^{11/9-\\varepsilon}$"),
        e("Q_below_P_11_9", c(q), Direction::Lt, c(r(11, 9)), pt, "satisfactory if $Q \\ll P^{11/9-\\varepsilon}$"),
        // P^(15/13) / Q: 165/143 < 169/143
        e("P_15_13_over_Q", c(r(15, 13)), Direction::Lt, c(q), pt, "satisfactory if $Q \\gg P^{15/13+\\varepsilon}$"),
        e(
            "H_at_most_P_first",
            // R^4 phi^2 with phi = 1/(QR)
            Affine::new(-r(2, 1) * q, r(2, 1)),
            Direction::Lt,
            c(r(8, 1)),
            all,
            "we require $R^4\\phi^2 \\ll P^{8-\\varepsilon}$",
        ),
        e(
            "H_at_most_P_second",
            Affine::new(-q, r(3, 1)),
            Direction::Lt,
            c(r(11, 1)),
            all,
            "as well as $R^4\\phi \\ll P^{11-\\varepsilon}$",
        ),
        e("phi2_below_phi0_high", phi2(), Direction::Le, phi0(), high, "$\\phi_2 \\le \\phi_0 \\le \\phi_1$ if $R \\ge R_0$"),
        e("phi0_below_phi1_high", phi0(), Direction::Le, phi1(), high, "$\\phi_2 \\le \\phi_0 \\le \\phi_1$ if $R \\ge R_0$"),
        e(
            "phi1_below_phi0_low",
            phi1(),
            Direction::Le,
            phi0(),
            low,
            "$P^{-\\varepsilon}\\phi_1 \\le \\phi_0 \\le \\phi_2 P^{\\varepsilon}$ if $R \\le R_0$",
        ),
        e(
            "phi0_below_phi2_low",
            phi0(),
            Direction::Le,
            phi2(),
            low,
            "$P^{-\\varepsilon}\\phi_1 \\le \\phi_0 \\le \\phi_2 P^{\\varepsilon}$ if $R \\le R_0$",
        ),
        e(
            "conditionphi_lower_vs_phi1",
            Affine::new(r(-3, 1), r(1, 3)),
            Direction::Le,
            phi1(),
            low,
            "$\\phi_1 \\gg \\frac{R^{1/3+\\varepsilon}}{P^3}$",
        ),
        e(
            "conditionphi_upper_vs_phi2",
            phi2(),
            Direction::Lt,
            Affine::new(r(-12, 11), r(-15, 11)),
            low,
            "$\\frac{R^{1/3}}{P^{3-\\varepsilon}} \\ll \\phi \\ll \\frac{1}{P^{12/11+\\varepsilon} R^{15/11}}$",
        ),
        // R_0 = P^(4/5) against P^(346/365): 292/365 < 346/365
        e("R0_below_P_346_365", c(r(4, 5)), Direction::Lt, c(r(346, 365)), pt, "$R \\ll P^{\\frac{346}{365}-\\varepsilon}$"),
        e(
            "minor_arc_lower",
            c(r(-3, 1)),
            Direction::Lt,
            c(r(-3, 1) + r(1, 7)),
            pt,
            "we are on the minor arcs so that $\\phi \\ge P^{-3+\\nu}$",
        ),
        e(
            "minor_arc_upper",
            c(-q),
            Direction::Lt,
            c(r(-12, 11)),
            pt,
            "$\\phi \\le \\frac{1}{RQ}$ against $\\frac{1}{P^{12/11+\\varepsilon} R^{15/11}}$",
        ),
        e("e0_below_e1", c(zero), Direction::Lt, c(r(1, 2)), pt, "$e(0)=0$, $e(1)=\\frac{1}{2}$"),
        e("e1_below_e2", c(r(1, 2)), Direction::Lt, c(Rational64::one()), pt, "$e(0)=0$, $e(1)=\\frac{1}{2}$"),
        LedgerEntry {
            name: "sentinel_Q_at_most_P_3_2",
            lhs: c(r(17, 11)),
            rhs: c(r(3, 2)),
            direction: Direction::Lt,
            regime: pt,
            anchor: "corrupted copy of $Q \\le P^{3/2}$ with 17/11",
            sentinel: true,
        },
    ]
}

/// The ledger as text, one entry per line; new entries are only appended.
pub fn render() -> String {
    let mut out = String::from("# exponent ledger v1: name | inequality | regime | anchor\n");
    for e in entries() {
        out.push_str(&e.render());
        out.push('\n');
    }
    out
}

pub const SHIPPED: &str = include_str!("../../data/ledger_v1.txt");

pub fn exponent_ledger() -> Vec<LedgerRow> {
    entries().iter().map(LedgerRow::from).collect()
}
