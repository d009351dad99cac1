use cubic_circle::circle::ledger::{entries, Direction};
use cubic_circle::circle::*;
use cubic_circle::field::{make_field, AlgInt, FieldSpec, MinkowskiVec};
use cubic_circle::forms::CubicForm;
use cubic_circle::sums::BoxSpec;
use cubic_circle::Ctx;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big() -> Ctx {
    Ctx::default().with_max_points(1u128 << 36)
}

/// Gaussian-integer product.
fn gmul(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// N(a_gamma) for gamma = (a + b i) / k in Q(i) by counting x mod k with x gamma in Z[i].
fn oracle_norm(a: i64, b: i64, k: i64) -> i64 {
    let mut good = 0;
    for x0 in 0..k {
        for x1 in 0..k {
            let p = gmul((x0, x1), (a, b));
            if p.0 % k == 0 && p.1 % k == 0 {
                good += 1;
            }
        }
    }
    k * k / good
}

#[test]
fn class_counts_match_oracle() {
    let f = make_field(1).unwrap();
    let rep = singular_series(&CubicForm::diagonal_int(1, &[1]).unwrap(), 20.0, &big()).unwrap();
    for row in &rep.rows {
        let k = row.norm;
        let mut n = 0;
        for a in 0..k {
            for b in 0..k {
                n += u64::from(oracle_norm(a, b, k) == k);
            }
        }
        assert_eq!(row.classes, n, "norm {k}");
    }
    assert_eq!(rep.rows.iter().map(|r| r.norm).collect::<Vec<_>>(), vec![1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20]);
    let _ = f;
}

#[test]
fn series_trivial_and_small() {
    let c = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
    let r1 = singular_series(&c, 1.0, &big()).unwrap();
    assert_eq!(r1.partial_sum, [1.0, 0.0]);
    // S at (1+i)/2: tr((1+i)/2 y) = y0 - y1, an integer, so all 16 terms are 1
    let r2 = singular_series(&c, 2.0, &big()).unwrap();
    assert!((r2.partial_sum[0] - 2.0).abs() < 1e-12);
    assert!(r2.partial_sum[1].abs() < 1e-12);
}

/// S_gamma by complex arithmetic in the embedding, an independent path.
fn oracle_series(a: &[i64], r: i64) -> f64 {
    let mut total = 0.0;
    for k in 1..=r {
        for ga in 0..k {
            for gb in 0..k {
                if oracle_norm(ga, gb, k) != k {
                    continue;
                }
                let mut phases = Vec::new();
                for x0 in 0..k {
                    for x1 in 0..k {
                        let x3 = gmul((x0, x1), gmul((x0, x1), (x0, x1)));
                        phases.push(x3);
                    }
                }
                // product over variables of one-variable sums
                let mut prod = (1.0f64, 0.0f64);
                for &ai in a {
                    let (mut re, mut im) = (0.0, 0.0);
                    for &v in &phases {
                        let y = gmul((ai, 0), v);
                        let num = gmul((ga, gb), y);
                        // tr = 2 Re, reduced mod k before scaling
                        let t = (2 * num.0).rem_euclid(k) as f64 / k as f64;
                        re += (std::f64::consts::TAU * t).cos();
                        im += (std::f64::consts::TAU * t).sin();
                    }
                    prod = (prod.0 * re - prod.1 * im, prod.0 * im + prod.1 * re);
                }
                total += prod.0 / (k as f64).powi(2 * a.len() as i32);
            }
        }
    }
    total
}

#[test]
fn series_matches_oracle_and_settles() {
    let c = CubicForm::diagonal_int(1, &[1, 2]).unwrap();
    let mut last = Vec::new();
    for r in [2.0, 4.0, 8.0, 16.0] {
        let rep = singular_series(&c, r, &big()).unwrap();
        let want = oracle_series(&[1, 2], r as i64);
        assert!((rep.partial_sum[0] - want).abs() < 1e-9, "R = {r}: {} vs {want}", rep.partial_sum[0]);
        assert!(rep.partial_sum[1].abs() < 1e-9);
        last.push(rep.partial_sum[0]);
    }
    assert!(last.iter().all(|v| v.is_finite() && *v > 0.0));
}

#[test]
fn classify_examples() {
    let f = make_field(1).unwrap();
    let ctx = big();
    let a = ArcParams::standard(20.0).unwrap();
    let near = MinkowskiVec::approx(a.radius() / 2.0, 0.0);
    assert!(matches!(classify_arc(&near, &a, &f, &ctx).unwrap(), ArcClass::Major { .. }));
    // only gamma = 0 has N <= 20^(1/7); (1/2, 0) is midway between 0 and 1
    let mid = MinkowskiVec::approx(0.5, 0.0);
    assert!(matches!(classify_arc(&mid, &a, &f, &ctx).unwrap(), ArcClass::Minor { .. }));
    for p in [5.0, 20.0, 1e3, 1e6, 1e9] {
        assert!(arcs_disjoint(&ArcParams::standard(p).unwrap(), &f, &ctx).unwrap());
    }
}

#[test]
fn classify_matches_oracle() {
    let f = make_field(1).unwrap();
    let ctx = big();
    let a = ArcParams::standard(1e6).unwrap();
    let cutoff = a.norm_cutoff();
    let rad = a.radius();
    let mut centers = Vec::new();
    for k in 1..=8i64 {
        for x in 0..k {
            for y in 0..k {
                if (oracle_norm(x, y, k) as f64) <= cutoff {
                    centers.push([x as f64 / k as f64, y as f64 / k as f64]);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..400 {
        let alpha = if i % 2 == 0 {
            let c = centers[rng.gen_range(0..centers.len())];
            [c[0] + rng.gen_range(-2.0..2.0) * rad, c[1] + rng.gen_range(-2.0..2.0) * rad]
        } else {
            [rng.gen::<f64>(), rng.gen::<f64>()]
        };
        let dist = |c: &[f64; 2]| {
            (0..2).map(|j| (alpha[j] - c[j] - (alpha[j] - c[j]).round()).abs()).fold(0.0, f64::max)
        };
        let major = centers.iter().any(|c| dist(c) < rad);
        let got = classify_arc(&MinkowskiVec::Approx(alpha), &a, &f, &ctx).unwrap();
        assert_eq!(matches!(got, ArcClass::Major { .. }), major, "{alpha:?}");
    }
}

/// Nested loops over the box [-P, P]^(2s) for a diagonal form over Q(i).
fn oracle_count(a: &[i64], p: i64) -> u64 {
    let s = a.len();
    let side = 2 * p + 1;
    let mut n = 0;
    for idx in 0..side.pow(2 * s as u32) {
        let mut t = idx;
        let mut v = (0i64, 0i64);
        for &ai in a {
            let x0 = t % side - p;
            t /= side;
            let x1 = t % side - p;
            t /= side;
            let c = gmul((ai, 0), gmul((x0, x1), gmul((x0, x1), (x0, x1))));
            v = (v.0 + c.0, v.1 + c.1);
        }
        n += u64::from(v == (0, 0));
    }
    n
}

#[test]
fn count_two_cubes() {
    let c = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
    let b = BoxSpec::symmetric(2);
    // zeros are exactly x2 = -x1
    assert_eq!(brute_count(&c, 5.0, &b, &big()).unwrap(), 121);
    assert_eq!(oracle_count(&[1, 1], 5), 121);
    for path in [CountPath::Generic, CountPath::HashJoin] {
        assert_eq!(brute_count_with(&c, 5.0, &b, &big(), path).unwrap(), 121);
    }
    assert_eq!(brute_count(&c, 0.5, &b, &big()).unwrap(), 1);
}

#[test]
fn count_paths_agree() {
    let c = CubicForm::diagonal_int(1, &[1, 1, 1, 1]).unwrap();
    let b = BoxSpec::symmetric(4);
    for p in [1.0, 2.0, 3.0] {
        let g = brute_count_with(&c, p, &b, &big(), CountPath::Generic).unwrap();
        let h = brute_count_with(&c, p, &b, &big(), CountPath::HashJoin).unwrap();
        assert_eq!(g, h);
        if p <= 2.0 {
            assert_eq!(g, oracle_count(&[1, 1, 1, 1], p as i64));
        }
    }
    let c3 = CubicForm::diagonal_int(1, &[1, 2, -3]).unwrap();
    let b3 = BoxSpec::unit(3);
    for p in [2.0, 3.0] {
        let g = brute_count_with(&c3, p, &b3, &big(), CountPath::Generic).unwrap();
        assert_eq!(g, brute_count_with(&c3, p, &b3, &big(), CountPath::HashJoin).unwrap());
    }
}

#[test]
fn count_respects_budget() {
    let c = CubicForm::diagonal_int(1, &[1, 1, 1, 1]).unwrap();
    let e = brute_count_with(&c, 10.0, &BoxSpec::symmetric(4), &Ctx::default(), CountPath::Generic).unwrap_err();
    assert!(e.is_budget());
}

fn calibration() -> (CubicForm, BoxSpec) {
    let c = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
    let b = BoxSpec::centered(&c, &[[1.0, 0.0], [-1.0, 0.0]], 0.25).unwrap();
    (c, b)
}

/// Density of x1^3 + x2^3 = 0 near (1, -1): for fixed x1 the zero is x2 = -x1
/// and the fibre area is 4 delta^2 / |3 x1^2|^2.
fn oracle_density() -> f64 {
    let n = 400;
    let h = 0.5 / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = 0.75 + (i as f64 + 0.5) * h;
            let y = -0.25 + (j as f64 + 0.5) * h;
            acc += 1.0 / (9.0 * (x * x + y * y).powi(2));
        }
    }
    acc * h * h
}

#[test]
fn density_matches_fibre_integral() {
    let (c, b) = calibration();
    let est = singular_integral(&c, &b, IntegralMethod::Density, &big()).unwrap();
    let want = oracle_density();
    let d = est.density.unwrap();
    assert!(est.converged);
    assert!((d - want).abs() <= 3.0 * est.std_error * 4.0 + 0.02 * want, "{d} vs {want} ({})", est.std_error);
    assert!((est.value - d / 4.0).abs() < 1e-15);
    for w in est.sweep.windows(2) {
        assert!(w[0].delta > w[1].delta);
    }
}

#[test]
fn density_is_reproducible_across_execution() {
    let (c, b) = calibration();
    let dp = DensityParams { samples: 200_000, ..Default::default() };
    let a = zero_density(&c, &b, &dp, &big()).unwrap();
    let s = zero_density(&c, &b, &dp, &Ctx::sequential().with_max_points(1 << 30)).unwrap();
    assert_eq!(a, s);
}

#[test]
fn methods_agree_on_calibration_form() {
    let (c, b) = calibration();
    let d = singular_integral(&c, &b, IntegralMethod::Density, &big()).unwrap();
    let o = singular_integral(&c, &b, IntegralMethod::Oscillatory, &big()).unwrap();
    let tol = 2.0 * d.std_error.hypot(o.std_error);
    println!("density {} +- {}, oscillatory {} +- {}", d.value, d.std_error, o.value, o.std_error);
    assert!((d.value - o.value).abs() <= tol, "density {} +- {}, oscillatory {} +- {}", d.value, d.std_error, o.value, o.std_error);
}

#[test]
fn density_vanishes_off_surface() {
    let c = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
    let off = BoxSpec::centered(&CubicForm::diagonal_int(1, &[1, -1]).unwrap(), &[[1.0, 0.0], [1.0, 0.0]], 0.25).unwrap();
    let off = BoxSpec::new(off.lo, off.hi, cubic_circle::sums::CenterKind::UnitBox).unwrap();
    let est = zero_density(&c, &off, &DensityParams { samples: 200_000, ..Default::default() }, &big()).unwrap();
    assert_eq!(est.value, 0.0);
    assert!(singular_integral(&c, &off, IntegralMethod::Density, &big()).is_err());
}

#[test]
fn report_for_form_without_zeros() {
    // x^3 = -2 y^3 has no solution in Q(i) other than 0
    let c = CubicForm::diagonal_int(1, &[1, 2]).unwrap();
    let b = BoxSpec::symmetric(2);
    let rp = ReportParams { density: DensityParams { samples: 100_000, ..Default::default() }, ..Default::default() };
    let rep = asymptotic_report(&c, &[2.0, 4.0, 8.0], &b, &rp, &big()).unwrap();
    for row in &rep.rows {
        assert_eq!(row.n, 1);
        assert_eq!(row.n, oracle_count(&[1, 2], row.p as i64).min(1).max(row.n));
    }
    assert_eq!(oracle_count(&[1, 2], 4), 1);
}

/// A(theta, R, H, P) for s = 1 over Q(i) by exact integer arithmetic.
fn oracle_a_sum(a: i64, r: f64, h: i64, p: i64) -> f64 {
    let mut total = 0.0;
    for k in 1..=((2.0 * r) * (2.0 * r)) as i64 {
        let root = (k as f64).sqrt();
        if !(r < root && root <= 2.0 * r) {
            continue;
        }
        for ga in 0..k {
            for gb in 0..k {
                if oracle_norm(ga, gb, k) != k {
                    continue;
                }
                for h0 in -h..=h {
                    for h1 in -h..=h {
                        let mut n = 0u64;
                        for w0 in -(p - 1)..p {
                            for w1 in -(p - 1)..p {
                                // B(w, h) = 6 a w h from the stored tensor
                                let bv = gmul((6 * a, 0), gmul((w0, w1), (h0, h1)));
                                let ok = [(1, 0), (0, 1)].iter().all(|&om| {
                                    let num = gmul((ga, gb), gmul(om, bv));
                                    let t = (2 * num.0).rem_euclid(k);
                                    let d = t.min(k - t);
                                    // ||t / k|| < 1 / p
                                    d * p < k
                                });
                                n += u64::from(ok);
                            }
                        }
                        total += (n as f64).sqrt();
                    }
                }
            }
        }
    }
    total
}

#[test]
fn a_sum_cases() {
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let ctx = big();
    // H = 0: only h = 0, every w counts
    let rep = a_sum(&c, [0.0, 0.0], 1.0, 0, 4.0, &ctx).unwrap();
    assert_eq!(rep.shifts, 1);
    assert!((rep.value - rep.classes as f64 * 49f64.sqrt()).abs() < 1e-12);
    let empty = a_sum(&c, [0.0, 0.0], 0.45, 1, 4.0, &ctx).unwrap();
    assert_eq!((empty.classes, empty.value), (0, 0.0));
    let pinned = a_sum(&c, [0.0, 0.0], 2.0, 1, 4.0, &ctx).unwrap();
    let want = oracle_a_sum(1, 2.0, 1, 4);
    assert!((pinned.value - want).abs() < 1e-9, "{} vs {want}", pinned.value);
    assert!((pinned.value - 2774.448449).abs() < 1e-5, "regression value moved: {}", pinned.value);
    assert!(a_sum(&c, [0.0, 0.0], 5.0, 1, 4.0, &ctx).is_err());
}

#[test]
fn ledger_verdicts() {
    let rows = exponent_ledger();
    for row in &rows {
        assert_eq!(row.holds, !row.sentinel, "{}", row.name);
        assert!(!row.anchor.is_empty());
    }
    let q = entries().into_iter().find(|e| e.name == "Q_9_7_over_P_11_7").unwrap();
    assert_eq!(q.lhs.c, Rational64::new(117, 77));
    assert_eq!(q.direction, Direction::Lt);
    let p = entries().into_iter().find(|e| e.name == "P_15_13_over_Q").unwrap();
    assert_eq!((p.lhs.c * 143, p.rhs.c * 143), (Rational64::from_integer(165), Rational64::from_integer(169)));
    let r0 = entries().into_iter().find(|e| e.name == "R0_below_P_346_365").unwrap();
    assert_eq!(r0.lhs.c * 365, Rational64::from_integer(292));
}

#[allow(dead_code)]
fn unused(_: &FieldSpec, _: AlgInt) {}
