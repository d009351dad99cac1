use cubic_circle::exec::Ctx;
use cubic_circle::field::{enumerate_residues, make_field, rat, AlgInt, FieldElem, MinkowskiVec, ResidueClass};
use cubic_circle::forms::CubicForm;
use cubic_circle::sums::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn close(a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    (a[0] - b[0]).abs() < tol && (a[1] - b[1]).abs() < tol
}

/// e(tr(gamma v)) computed from the field trace of an exact product.
fn oracle_phase(d: i64, gamma: &FieldElem, v: &AlgInt) -> f64 {
    let f = make_field(d).unwrap();
    let t = f.trace(&f.mul(&gamma.num, v));
    let r = BigRational::new(t.mod_floor(&gamma.den), gamma.den.clone());
    r.to_f64().unwrap()
}

fn oracle_sum(d: i64, c: &CubicForm, gamma: &FieldElem, lo: i64, hi: i64) -> [f64; 2] {
    let mut acc = [0.0, 0.0];
    let s = c.s;
    let n = (hi - lo + 1) as usize;
    for idx in 0..n.pow(2 * s as u32) {
        let mut k = idx;
        let mut x = Vec::new();
        for _ in 0..s {
            let a = lo + (k % n) as i64;
            k /= n;
            let b = lo + (k % n) as i64;
            k /= n;
            x.push(AlgInt::new(a, b));
        }
        let ph = oracle_phase(d, gamma, &c.value(&x));
        acc[0] += (std::f64::consts::TAU * ph).cos();
        acc[1] += (std::f64::consts::TAU * ph).sin();
    }
    acc
}

#[test]
fn trivial_alpha_counts_points() {
    let c = CubicForm::diagonal_int(1, &[1, 2]).unwrap();
    let b = BoxSpec::symmetric(2);
    let ctx = Ctx::default();
    let n = b.grid(3.0).unwrap().size() as f64;
    for alpha in [MinkowskiVec::exact(rat(0, 1), rat(0, 1)), MinkowskiVec::exact(rat(2, 1), rat(-5, 1))] {
        let r = weyl_sum(&c, &alpha, 3.0, &b, &ctx).unwrap();
        assert!(close(r.value, [n, 0.0], 1e-9), "{:?}", r.value);
        assert_eq!(r.terms, 7u128.pow(4));
    }
}

#[test]
fn cube_half_direct_vs_folded() {
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let b = BoxSpec::symmetric(1);
    let ctx = Ctx::default();
    let alpha = MinkowskiVec::exact(rat(1, 2), rat(0, 1));
    let direct = weyl_sum_with(&c, &alpha, 4.0, &b, &ctx, SumPath::Generic).unwrap();
    let folded = weyl_sum_with(&c, &alpha, 4.0, &b, &ctx, SumPath::Folded).unwrap();
    let diag = weyl_sum_with(&c, &alpha, 4.0, &b, &ctx, SumPath::Diagonal).unwrap();
    assert!(close(direct.value, folded.value, 1e-10));
    assert!(close(direct.value, diag.value, 1e-10));
    let g = FieldElem::new(AlgInt::new(1, 0), 2).unwrap();
    assert!(close(direct.value, oracle_sum(1, &c, &g, -4, 4), 1e-9));
}

#[test]
fn conjugation_symmetry() {
    let c = CubicForm::parse("field d=3\nvars s=2\nx1^3 : 1+1*w\nx1*x2^2 : 2\n").unwrap();
    let b = BoxSpec::unit(2);
    let ctx = Ctx::default();
    let a = weyl_sum(&c, &MinkowskiVec::exact(rat(1, 5), rat(2, 7)), 3.0, &b, &ctx).unwrap();
    let m = weyl_sum(&c, &MinkowskiVec::exact(rat(-1, 5), rat(-2, 7)), 3.0, &b, &ctx).unwrap();
    assert!(close(a.value, [m.value[0], -m.value[1]], 1e-9));
}

#[test]
fn complete_sums_against_oracles() {
    let f = make_field(1).unwrap();
    let ctx = Ctx::default();
    let c = CubicForm::diagonal_int(1, &[1, 3]).unwrap();
    let classes = enumerate_residues(10.0, &f, &ctx).unwrap();
    for g in &classes {
        let diag = complete_sum_with(&c, g, &ctx, SumPath::Diagonal).unwrap();
        let full = complete_sum_with(&c, g, &ctx, SumPath::Generic).unwrap();
        assert!(close(diag.value, full.value, 1e-7), "{}", g.gamma);
        assert!(complete_sum_periodic(&c, g, &ctx).unwrap());
        if g.norm() <= 4 {
            let o = oracle_sum(1, &c, &g.gamma, 0, g.norm() - 1);
            assert!(close(full.value, o, 1e-7));
        }
    }
    let zero = complete_sum(&c, &ResidueClass::zero(), &ctx).unwrap();
    assert!(close(zero.value, [1.0, 0.0], 1e-12));
}

#[test]
fn cube_at_half_plus_half_i() {
    let f = make_field(1).unwrap();
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let g = ResidueClass::new(&f, &FieldElem::new(AlgInt::new(1, 1), 2).unwrap());
    assert_eq!(g.norm(), 2);
    let r = complete_sum(&c, &g, &Ctx::default()).unwrap();
    let o = oracle_sum(1, &c, &g.gamma, 0, 1);
    assert!(close(r.value, o, 1e-12));
    // x in {0, 1, i, 1+i}: tr((1+i)/2 x^3) is 0, 1, 1, -2, all integers
    assert!(close(r.value, [4.0, 0.0], 1e-12), "{:?}", r.value);
}

/// Direct count of N(alpha, P) for s = 1 with exact rational traces.
fn oracle_count_n(d: i64, c: &CubicForm, alpha: &FieldElem, p: i64) -> u64 {
    let f = make_field(d).unwrap();
    let mut n = 0;
    let r = p - 1;
    for x0 in -r..=r {
        for x1 in -r..=r {
            for y0 in -r..=r {
                for y1 in -r..=r {
                    let b = c.bilinear(0, &[AlgInt::new(x0, x1)], &[AlgInt::new(y0, y1)]).unwrap();
                    let ok = [AlgInt::new(1, 0), AlgInt::new(0, 1)].iter().all(|w| {
                        let t = f.trace(&f.mul(&f.mul(&alpha.num, w), &b));
                        let m = t.mod_floor(&alpha.den);
                        let dist = m.clone().min(&alpha.den - m);
                        dist * BigInt::from(p) < alpha.den
                    });
                    n += u64::from(ok);
                }
            }
        }
    }
    n
}

#[test]
fn count_n_matches_recount() {
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let ctx = Ctx::default();
    let zero = MinkowskiVec::exact(rat(0, 1), rat(0, 1));
    assert_eq!(count_n(&c, &zero, 3.0, false, &ctx).unwrap(), 625);
    let half = MinkowskiVec::exact(rat(1, 2), rat(0, 1));
    let got = count_n(&c, &half, 3.0, false, &ctx).unwrap();
    let g = FieldElem::new(AlgInt::new(1, 0), 2).unwrap();
    assert_eq!(got, oracle_count_n(1, &c, &g, 3));
    let third = MinkowskiVec::exact(rat(1, 3), rat(1, 5));
    let g = FieldElem::from_ratios(third.as_exact().unwrap());
    assert_eq!(count_n(&c, &third, 3.0, false, &ctx).unwrap(), oracle_count_n(1, &c, &g, 3));
    let seq = count_n(&c, &third, 3.0, false, &Ctx::sequential()).unwrap();
    assert_eq!(seq, oracle_count_n(1, &c, &g, 3));
}

#[test]
fn count_n_h_zero_shift() {
    let c = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
    let a = MinkowskiVec::exact(rat(1, 3), rat(1, 7));
    let n = count_n_h(&c, &a, 3.0, &[[0, 0], [0, 0]], false, &Ctx::default()).unwrap();
    assert_eq!(n, 5u64.pow(4));
}

#[test]
fn t_sum_cases() {
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let b = BoxSpec::symmetric(1);
    let ctx = Ctx::default();
    let zero = MinkowskiVec::exact(rat(0, 1), rat(0, 1));
    let t = t_sum(&c, &[[0, 0]], &zero, 3.0, &b, &ctx).unwrap();
    assert!(close(t.value, [49.0, 0.0], 1e-9));
    let int = MinkowskiVec::exact(rat(4, 1), rat(1, 1));
    let t = t_sum(&c, &[[1, 0]], &int, 3.0, &b, &ctx).unwrap();
    assert!(close(t.value, [t.terms as f64, 0.0], 1e-9));
    assert_eq!(t.terms, 42);
    // difference polynomial C(y + 1) - C(y) = 3y^2 + 3y + 1
    let third = MinkowskiVec::exact(rat(1, 3), rat(0, 1));
    let t = t_sum(&c, &[[1, 0]], &third, 3.0, &b, &ctx).unwrap();
    let f = make_field(1).unwrap();
    let g = FieldElem::new(AlgInt::new(1, 0), 3).unwrap();
    let mut o = [0.0, 0.0];
    for y0 in -3..=2 {
        for y1 in -3..=3 {
            let y = AlgInt::new(y0, y1);
            let y2 = f.mul(&y, &y);
            let v = y2.scale(&3.into()).add(&y.scale(&3.into())).add(&AlgInt::one());
            let ph = oracle_phase(1, &g, &v);
            o[0] += (std::f64::consts::TAU * ph).cos();
            o[1] += (std::f64::consts::TAU * ph).sin();
        }
    }
    assert!(close(t.value, o, 1e-9));
}

#[test]
fn differencing_identity() {
    let c = CubicForm::parse("field d=1\nvars s=1\nx1^3 : 1+1*w\n").unwrap();
    let b = BoxSpec::symmetric(1);
    let ctx = Ctx::default();
    let beta = MinkowskiVec::exact(rat(2, 7), rat(1, 3));
    let s = weyl_sum(&c, &beta, 2.0, &b, &ctx).unwrap();
    let mut total = [0.0, 0.0];
    for h0 in -4..=4 {
        for h1 in -4..=4 {
            let t = t_sum(&c, &[[h0, h1]], &beta, 2.0, &b, &ctx).unwrap();
            total[0] += t.value[0];
            total[1] += t.value[1];
        }
    }
    let sq = s.value[0].powi(2) + s.value[1].powi(2);
    assert!(close(total, [sq, 0.0], 1e-8), "{total:?} vs {sq}");
}

#[test]
fn mean_square_orthogonality_and_monotonicity() {
    let b = BoxSpec::symmetric(1);
    let ctx = Ctx::default();
    for p in 1..=4 {
        let c = CubicForm::diagonal_int(1, &[1]).unwrap();
        let exact = equal_value_pairs(&c, p as f64, &b, &ctx).unwrap() as f64;
        let m = mean_square(&c, [0.5, 0.5], 0.5, p as f64, &b, QuadSpec::default(), &ctx).unwrap();
        assert!((m.value - exact).abs() <= 0.01 * exact, "P={p}: {} vs {exact}", m.value);
    }
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let mut last = f64::INFINITY;
    for kappa in [0.4, 0.2, 0.1, 0.05] {
        let m = mean_square(&c, [0.1, 0.3], kappa, 2.0, &b, QuadSpec::default(), &ctx).unwrap();
        assert!(m.value <= last + 1e-6);
        last = m.value;
    }
}

#[test]
fn mean_square_of_zero_form() {
    let f = make_field(1).unwrap();
    let c = CubicForm::from_poly(f, 1, &[]).unwrap();
    let b = BoxSpec::symmetric(1);
    let m = mean_square(&c, [0.0, 0.0], 0.25, 2.0, &b, QuadSpec::default(), &Ctx::default()).unwrap();
    assert!((m.value - 0.25 * 625.0).abs() < 1e-9);
}

#[test]
fn torus_integral_counts_zeros() {
    let b = BoxSpec::symmetric(1);
    let ctx = Ctx::default();
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    for p in 1..=4 {
        let v = torus_integral(&c, p as f64, &b, 8, &ctx).unwrap();
        let zeros = value_histogram(&c, p as f64, &b, &ctx).unwrap().iter().find(|(v, _)| *v == [0, 0]).map_or(0, |x| x.1);
        assert!((v[0] - zeros as f64).abs() < 1e-6 && v[1].abs() < 1e-6);
    }
}

#[test]
fn weyl_bound_hypothesis() {
    let f = make_field(1).unwrap();
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let ctx = Ctx::default();
    let g = ResidueClass::new(&f, &FieldElem::new(AlgInt::new(1, 0), 7).unwrap());
    let bad = WeylSample { gamma: g.clone(), theta: [0.01, 0.0], p: 2.0 };
    assert!(matches!(
        verify_weyl_bound(&c, &[bad], &BoxSpec::symmetric(1), EPS, 1.0, &ctx),
        Err(cubic_circle::Error::Hypothesis(_))
    ));
    let rows: Vec<_> = [1e-3, 1e-2, 1e-1]
        .iter()
        .map(|&t| WeylSample { gamma: g.clone(), theta: [t, 0.0], p: 4.0 })
        .collect();
    let out = verify_weyl_bound(&c, &rows, &BoxSpec::symmetric(1), EPS, 1.0, &ctx).unwrap();
    assert!(out.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
    let _ = BigInt::zero();
}
