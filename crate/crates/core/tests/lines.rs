use cubic_circle::field::{make_field, AlgInt, FieldElem};
use cubic_circle::forms::CubicForm;
use cubic_circle::lines::poly::{int_elem, Poly};
use cubic_circle::lines::*;
use cubic_circle::{Ctx, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sum_cubes(s: usize) -> CubicForm {
    CubicForm::diagonal_int(1, &vec![1; s]).unwrap()
}

fn form(d: i64, s: usize, terms: &[([usize; 3], i64)]) -> CubicForm {
    let f = make_field(d).unwrap();
    let t: Vec<_> = terms.iter().map(|&(i, a)| (i, AlgInt::new(a, 0))).collect();
    CubicForm::from_poly(f, s, &t).unwrap()
}

/// Integer evaluation of a rational-coefficient form, monomial by monomial.
fn oracle_eval(terms: &[([usize; 3], i64)], x: &[i64]) -> i128 {
    terms.iter().map(|&([i, j, k], a)| a as i128 * x[i] as i128 * x[j] as i128 * x[k] as i128).sum()
}

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

fn cubes_terms(s: usize) -> Vec<([usize; 3], i64)> {
    (0..s).map(|i| ([i, i, i], 1)).collect()
}

#[test]
fn pencil_homogeneity() {
    let c = sum_cubes(3);
    let f = &c.field;
    let w = int_vec(&[2, -1, 3]);
    let e = expand_pencil(&c, &w, std::slice::from_ref(&w)).unwrap();
    let cw = oracle_eval(&cubes_terms(3), &[2, -1, 3]) as i64;
    assert_eq!(e.c0, int_elem(cw));
    // (1 + t)^3 C(w)
    for (k, binom) in [1, 3, 3, 1].into_iter().enumerate() {
        assert_eq!(e.reassemble(f).coeff(&[k as u32]), int_elem(binom * cw));
    }
    assert_eq!(e.tail.coeff(&[3]), int_elem(cw));
}

#[test]
fn pencil_planted_line_vanishes() {
    let c = sum_cubes(4);
    let e = expand_pencil(&c, &int_vec(&[1, -1, 0, 0]), &[int_vec(&[0, 0, 1, -1])]).unwrap();
    assert!(e.all_vanish());
}

#[test]
fn pencil_reassembly_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..400 {
        let s = rng.gen_range(2..=4);
        let m = rng.gen_range(1..=2);
        let mut terms = Vec::new();
        for i in 0..s {
            for j in i..s {
                for k in j..s {
                    if rng.gen_bool(0.5) {
                        terms.push(([i, j, k], rng.gen_range(-4..=4)));
                    }
                }
            }
        }
        terms.retain(|t| t.1 != 0);
        if terms.is_empty() {
            terms.push(([0, 0, 0], 1));
        }
        let c = form(1, s, &terms);
        let v: Vec<i64> = (0..s).map(|_| rng.gen_range(-3..=3)).collect();
        let ws: Vec<Vec<i64>> = (0..m).map(|_| (0..s).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let wse: Vec<_> = ws.iter().map(|w| int_vec(w)).collect();
        let e = expand_pencil(&c, &int_vec(&v), &wse).unwrap();
        let re = e.reassemble(&c.field);
        assert_eq!(re, pencil_direct(&c, &int_vec(&v), &wse), "trial {trial}");
        // evaluate both sides at integer t against the monomial oracle
        for t1 in -2..=2i64 {
            for t2 in -2..=2i64 {
                let ts = [t1, t2];
                let x: Vec<i64> = (0..s).map(|i| v[i] + (0..m).map(|j| ts[j] * ws[j][i]).sum::<i64>()).collect();
                let tv: Vec<FieldElem> = ts[..m].iter().map(|&t| int_elem(t)).collect();
                assert_eq!(re.eval(&c.field, &tv), int_elem(oracle_eval(&terms, &x) as i64));
            }
        }
    }
}

#[test]
fn finds_line_on_four_cubes() {
    let c = sum_cubes(4);
    let l = find_line_bounded(&c, 1, &Ctx::default()).unwrap().expect("line exists");
    assert_eq!(l.v, vec![0, 0, 1, -1]);
    assert_eq!(l.w, vec![1, -1, -1, 1]);
    for t in -3..=3 {
        let x: Vec<i64> = (0..4).map(|i| l.v[i] + t * l.w[i]).collect();
        assert_eq!(oracle_eval(&cubes_terms(4), &x), 0);
    }
}

/// Exhaustive oracle: some pair of independent vectors of height <= b spans a line.
fn oracle_has_line(terms: &[([usize; 3], i64)], s: usize, b: i64) -> bool {
    let side = 2 * b + 1;
    let vecs: Vec<Vec<i64>> = (0..side.pow(s as u32))
        .map(|mut k| {
            (0..s)
                .map(|_| {
                    let x = k % side - b;
                    k /= side;
                    x
                })
                .collect()
        })
        .filter(|v: &Vec<i64>| v.iter().any(|&x| x != 0))
        .collect();
    for v in &vecs {
        for w in &vecs {
            let indep = (0..s).any(|i| (0..s).any(|j| v[i] * w[j] != v[j] * w[i]));
            if indep
                && (-1..=2).all(|t| {
                    let x: Vec<i64> = (0..s).map(|i| v[i] + t * w[i]).collect();
                    oracle_eval(terms, &x) == 0
                })
            {
                return true;
            }
        }
    }
    false
}

#[test]
fn plane_cubic_has_no_line() {
    // x^3 + y^3 + z^3 is irreducible, so it contains no projective line.
    let c = sum_cubes(3);
    assert!(find_line_bounded(&c, 2, &Ctx::default()).unwrap().is_none());
    assert!(!oracle_has_line(&cubes_terms(3), 3, 2));
}

#[test]
fn planted_linear_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        // x1 * Q(x) with Q a random quadratic in x1..x4
        let mut terms = Vec::new();
        for j in 0..4 {
            for k in j..4 {
                let a = rng.gen_range(-3..=3);
                if a != 0 {
                    terms.push(([0, j, k], a));
                }
            }
        }
        if terms.is_empty() {
            terms.push(([0, 0, 1], 1));
        }
        let c = form(1, 4, &terms);
        let l = find_line_bounded(&c, 1, &Ctx::default()).unwrap().expect("x1 = 0 contains lines");
        let q = |x: &[i64]| oracle_eval(&terms, x);
        for t in -2..=2 {
            let x: Vec<i64> = (0..4).map(|i| l.v[i] + t * l.w[i]).collect();
            assert_eq!(q(&x), 0);
        }
        // the line lies in x1 = 0 or inside the quadric
        let in_hyperplane = l.v[0] == 0 && l.w[0] == 0;
        let quad: Vec<([usize; 2], i64)> = terms.iter().map(|&([_, j, k], a)| ([j, k], a)).collect();
        let qv = |x: &[i64]| quad.iter().map(|&([j, k], a)| a as i128 * (x[j] * x[k]) as i128).sum::<i128>();
        let in_quadric = (-2..=2).all(|t| qv(&(0..4).map(|i| l.v[i] + t * l.w[i]).collect::<Vec<_>>()) == 0);
        assert!(in_hyperplane || in_quadric);
        assert!(oracle_has_line(&terms, 4, 1));
    }
}

#[test]
fn line_search_respects_budget() {
    let c = sum_cubes(6);
    let err = find_line_bounded(&c, 5, &Ctx::default().with_max_points(1000)).unwrap_err();
    assert!(err.is_budget());
}

fn gaussian(a: i64, b: i64) -> FieldElem {
    FieldElem::from_int(AlgInt::new(a, b))
}

#[test]
fn descent_over_gaussian_field() {
    // x1 (x2^2 + x3^2) = x1 (x2 - i x3)(x2 + i x3)
    let c = form(1, 3, &[([0, 1, 1], 1), ([0, 2, 2], 1)]);
    let f = c.field.clone();
    let v = LinearSpace::new(&f, vec![int_vec(&[1, 0, 0]), vec![gaussian(0, 0), gaussian(0, 1), gaussian(1, 0)]]).unwrap();
    assert!(!v.is_rational());
    let r = conjugate_descent(&c, &v).unwrap();
    assert_eq!(r.outcome, DescentOutcome::Descended);
    assert!(r.space.is_rational());
    let want = LinearSpace::from_ints(&f, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    assert!(r.space.same_span(&f, &want).unwrap());
    // product of the three linear factors is C|_W up to a scalar
    let prod = r.factors.iter().fold(Poly::constant(3, int_elem(1)), |p, l| p.mul(&f, &Poly::linear(l)));
    let (e, a) = r.restricted.terms.iter().next().unwrap();
    let scale = f.elem_mul(&prod.coeff(e), &f.elem_inv(a).unwrap());
    assert_eq!(r.restricted.scale(&f, &scale), prod);
}

#[test]
fn descent_over_eisenstein_field() {
    // x2^2 + x2 x3 + x3^2 vanishes at x2 = (w - 1) x3 where w = (1 + sqrt(-3)) / 2
    let c = form(3, 3, &[([0, 1, 1], 1), ([0, 1, 2], 1), ([0, 2, 2], 1)]);
    let f = c.field.clone();
    let v = LinearSpace::new(&f, vec![int_vec(&[1, 0, 0]), vec![gaussian(0, 0), gaussian(-1, 1), gaussian(1, 0)]]).unwrap();
    assert!(v.on_form(&c));
    let r = conjugate_descent(&c, &v).unwrap();
    assert_eq!(r.outcome, DescentOutcome::Descended);
    let want = LinearSpace::from_ints(&f, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    assert!(r.space.same_span(&f, &want).unwrap());
}

#[test]
fn descent_identity_on_rational_input() {
    let c = form(1, 3, &[([0, 1, 1], 1), ([0, 2, 2], 1)]);
    let f = c.field.clone();
    let v = LinearSpace::from_ints(&f, &[vec![0, 1, 1], vec![0, 1, -1]]).unwrap();
    let r = conjugate_descent(&c, &v).unwrap();
    assert_eq!(r.outcome, DescentOutcome::AlreadyRational);
    assert!(r.space.same_span(&f, &v).unwrap());
}

#[test]
fn descent_degenerate_branch() {
    let c = form(1, 3, &[([0, 0, 0], 1)]);
    let f = c.field.clone();
    let v = LinearSpace::new(&f, vec![vec![gaussian(0, 0), gaussian(1, 0), gaussian(0, 1)]]).unwrap();
    let r = conjugate_descent(&c, &v).unwrap();
    assert_eq!(r.outcome, DescentOutcome::Degenerate);
    assert!(r.space.is_rational() && r.space.on_form(&c) && r.space.dim == 0);
}

#[test]
fn descent_rejects_space_off_the_form() {
    let c = form(1, 3, &[([0, 1, 1], 1), ([0, 2, 2], 1)]);
    let f = c.field.clone();
    let v = LinearSpace::new(&f, vec![int_vec(&[1, 0, 0]), vec![gaussian(0, 0), gaussian(0, 2), gaussian(1, 0)]]).unwrap();
    assert!(matches!(conjugate_descent(&c, &v), Err(Error::Hypothesis(_))));
}

fn check_normalized(terms: &[([usize; 3], i64)], n: &NormalizedLine) {
    for t in -3..=3 {
        for u in -3..=3 {
            assert_eq!(oracle_eval(terms, &n.point(t, u)), 0);
        }
    }
}

#[test]
fn normalize_found_line() {
    let c = sum_cubes(4);
    let n = normalize_line(&c, &[1, -1, -1, 1], &[0, 0, 1, -1]).unwrap();
    assert_eq!(n.c, vec![1, -1, -1, 1]);
    assert_eq!(n.b, vec![0, 0, -1, -1]);
    check_normalized(&cubes_terms(4), &n);
    // zero coordinates in a force a combination
    let n2 = normalize_line(&c, &[0, 0, 1, -1], &[1, -1, -1, 1]).unwrap();
    assert_eq!(n2.combination, (0, 1));
    check_normalized(&cubes_terms(4), &n2);
}

#[test]
fn normalize_planted_rescale() {
    // (-x1 + x2 + x3)(x1^2 + x2^2 + x3^2) vanishes on a = (2,1,1), b = (0,1,-1)
    let lin = [(0usize, -1i64), (1, 1), (2, 1)];
    let mut terms = std::collections::BTreeMap::new();
    for &(i, a) in &lin {
        for j in 0..3 {
            let mut idx = [i, j, j];
            idx.sort();
            *terms.entry(idx).or_insert(0) += a;
        }
    }
    let terms: Vec<_> = terms.into_iter().filter(|e| e.1 != 0).collect();
    let c = form(1, 3, &terms);
    let n = normalize_line(&c, &[2, 1, 1], &[0, 1, -1]).unwrap();
    assert_eq!(n.c, vec![2, 1, 1]);
    assert_eq!(n.b, vec![0, 2, -2]);
    check_normalized(&terms, &n);
}

#[test]
fn normalize_passthrough_and_errors() {
    let c = sum_cubes(5);
    let n = normalize_line(&c, &[1, -1, -1, 1, 0], &[0, 0, 1, -1, 0]).unwrap();
    assert_eq!(n.passthrough, vec![false, false, false, false, true]);
    assert_eq!(n.c[4], 1);
    check_normalized(&cubes_terms(5), &n);
    assert!(matches!(normalize_line(&c, &[1, -1, 0, 0, 0], &[2, -2, 0, 0, 0]), Err(Error::Invalid(_))));
    assert!(matches!(normalize_line(&c, &[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]), Err(Error::Hypothesis(_))));
}

/// Naive search in the same order: largest term, then smallest first term.
fn oracle_ap(m: u64, bound: u64) -> Option<(u64, u64)> {
    for top in 2..bound {
        let mut best = None;
        for d in 1..=top {
            if top < 2 * m * d + 2 {
                break;
            }
            if (0..=2 * m).all(|k| trial_prime(top - k * d)) {
                best = Some((top - m * d, d));
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

#[test]
fn prime_progressions() {
    let ctx = Ctx::default();
    assert_eq!(prime_ap_sieve(1, 1000, &ctx).unwrap(), Some((5, 2)));
    assert_eq!(oracle_ap(1, 1000), Some((5, 2)));
    assert_eq!(prime_ap_sieve(3, 1000, &ctx).unwrap(), Some((457, 150)));
    assert_eq!(oracle_ap(3, 1000), Some((457, 150)));
    assert_eq!(prime_ap_sieve(4, 100, &ctx).unwrap(), None);
    assert_eq!(oracle_ap(4, 100), None);
    for m in 1..=2 {
        assert_eq!(prime_ap_sieve(m, 5000, &ctx).unwrap(), oracle_ap(m, 5000));
    }
    assert!(prime_ap_sieve(5, 1000, &ctx).is_err());
}

#[test]
fn almost_prime_four_cubes() {
    let c = sum_cubes(4);
    let ctx = Ctx::default();
    let line = find_line_bounded(&c, 1, &ctx).unwrap().unwrap();
    let sol = almost_prime_solution(&c, &line.v, &line.w, 10_000, &ctx).unwrap();
    assert_eq!(sol.m, 3);
    assert_eq!((sol.ell, sol.d), (457, 150));
    assert_eq!(sol.x, vec![457, -457, -307, 307]);
    assert_eq!(oracle_eval(&cubes_terms(4), &sol.x), 0);
    for (i, p) in sol.primes.iter().enumerate() {
        let p = p.unwrap();
        assert!(trial_prime(p));
        assert_eq!(sol.line.c[i] * p as i64, sol.x[i]);
    }
    assert!(matches!(almost_prime_solution(&c, &line.v, &line.w, 100, &ctx), Err(Error::Exhausted(_))));
}

#[test]
fn almost_prime_guard_and_passthrough() {
    let ctx = Ctx::default();
    // (x1 - x2) x3^2 vanishes on (t, t, t + 6u); centered offsets reach 3
    let c = form(1, 3, &[([0, 2, 2], 1), ([1, 2, 2], -1)]);
    let err = almost_prime_solution(&c, &[1, 1, 1], &[0, 0, 6], 10_000, &ctx).unwrap_err();
    assert!(matches!(err, Error::Hypothesis(ref m) if m.contains("M = 7")), "{err}");

    let c5 = sum_cubes(5);
    let sol = almost_prime_solution(&c5, &[1, -1, -1, 1, 0], &[0, 0, 1, -1, 0], 10_000, &ctx).unwrap();
    assert_eq!(sol.primes[4], None);
    assert_eq!(sol.x[4], 0);
    assert_eq!(oracle_eval(&cubes_terms(5), &sol.x), 0);
}

#[test]
fn beta_thresholds() {
    assert_eq!(beta(1, 0), 4);
    assert_eq!(beta(2, 0), 8);
    assert_eq!(line_threshold(1), 32);
    for m in 1..8u64 {
        let closed = (5 * m * m + 29 * m) / 2 + if m % 2 == 0 { 13 } else { 15 };
        assert_eq!(line_threshold(m), closed);
    }
}
