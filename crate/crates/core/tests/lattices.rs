use cubic_circle::field::{make_field, rat, AlgInt, FieldElem, IdealRep, ResidueClass};
use cubic_circle::forms::CubicForm;
use cubic_circle::lattices::*;
use cubic_circle::{Ctx, Error};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big() -> Ctx {
    Ctx::default().with_max_points(1u128 << 40)
}

/// Plain nested-loop count of the box-and-torus system.
fn oracle_shrink(l: &[Vec<f64>], a: f64, z: f64) -> u64 {
    let m = l.len();
    let r = (a * z).ceil() as i64;
    let mut n = 0;
    let total = (2 * r + 1).pow(m as u32);
    for k in 0..total {
        let mut t = k;
        let u: Vec<i64> = (0..m)
            .map(|_| {
                let c = t % (2 * r + 1) - r;
                t /= 2 * r + 1;
                c
            })
            .collect();
        if u.iter().any(|&x| (x.abs() as f64) >= a * z) {
            continue;
        }
        if l.iter().all(|row| {
            let v: f64 = row.iter().zip(&u).map(|(c, &x)| c * x as f64).sum();
            (v - v.round()).abs() < z / a
        }) {
            n += 1;
        }
    }
    n
}

#[test]
fn shrink_zero_map() {
    let r = shrink_check(&[vec![0.0]], 10.0, 0.5, &big()).unwrap();
    assert_eq!((r.n1, r.nz), (19, 9));
    assert!(r.ratio <= 19.0 / 18.0 + 1e-12);
}

#[test]
fn shrink_trivial_cases() {
    let l = vec![vec![0.3, 0.7], vec![0.1, 0.4]];
    assert_eq!(shrink_check(&l, 1.5, 1.0, &big()).unwrap().ratio, 1.0);
    let r = shrink_check(&l, 0.5, 0.5, &big()).unwrap();
    assert_eq!(r.n1, 1);
    assert!(r.ratio <= 1.0);
}

#[test]
fn shrink_matches_oracle_and_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let m = rng.gen_range(1..=3);
        let l: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let a = [0.5, 1.0, 2.0, 4.0][rng.gen_range(0..4)];
        let z = [0.5, 0.25][rng.gen_range(0..2)];
        let r = shrink_check(&l, a, z, &big()).unwrap();
        assert_eq!(r.n1, oracle_shrink(&l, a, 1.0));
        assert_eq!(r.nz, oracle_shrink(&l, a, z));
        let perm: Vec<usize> = (0..m).rev().collect();
        let r2 = shrink_check_ordered(&l, a, z, &perm, &Ctx::sequential()).unwrap();
        assert_eq!((r.n1, r.nz), (r2.n1, r2.nz));
    }
}

#[test]
fn shrink_rejects_bad_input() {
    assert!(shrink_check(&[vec![1.0]], 0.0, 0.5, &big()).is_err());
    assert!(shrink_check(&[vec![1.0]], 1.0, 1.5, &big()).is_err());
    assert!(shrink_check(&vec![vec![0.0; 7]; 7], 1.0, 1.0, &big()).is_err());
    assert!(shrink_check(&[vec![0.0]], 1e12, 1.0, &Ctx::default()).unwrap_err().is_budget());
}

#[test]
fn divisibility_examples() {
    let f = make_field(1).unwrap();
    let half = ResidueClass::new(&f, &FieldElem::from_ratios(&[rat(1, 2), rat(0, 1)]));
    assert_eq!(half.norm(), 4);
    let a = shipped_a0(1).unwrap();
    // m = 0 passes whenever the hypotheses hold
    let v = divisibility_check(&f, &half, [0.0, 0.0], 1.0, 2.0 / a, a, &AlgInt::zero()).unwrap();
    assert!(matches!(v, DivisibilityVerdict::Holds { .. }));
    // m = 2 lies in (2); tr(w_1) / Delta = -1/2 needs P0 < 2, hence A > 1 and condition (1)
    let v = divisibility_check(&f, &half, [0.0, 0.0], 2.0, 1.5, 2.0, &AlgInt::new(2, 0)).unwrap();
    assert!(matches!(v, DivisibilityVerdict::Counterexample { in_ideal: true, .. }));
    // m = 1 violates the trace hypothesis, which is reported and is not a counterexample
    let e = divisibility_check(&f, &half, [0.0, 0.0], 1.0, 2.0 / a, a, &AlgInt::new(1, 0)).unwrap_err();
    assert!(matches!(e, Error::Hypothesis(_)));
}

#[test]
fn shipped_a0_has_no_counterexample() {
    for d in [1, 3] {
        let f = make_field(d).unwrap();
        let r = divisibility_sweep(&f, shipped_a0(d).unwrap(), &big()).unwrap();
        assert_eq!(r.counterexamples, 0, "{:?}", r.first_counterexample);
        assert!(r.zero_required > 0);
    }
}

#[test]
fn too_large_a_is_refuted() {
    let f = make_field(1).unwrap();
    let r = divisibility_sweep(&f, 1.0, &big()).unwrap();
    assert!(r.counterexamples > 0);
}

/// det of Lambda(h) by counting residues w mod N(q2) that satisfy the defining condition.
fn oracle_index(c: &CubicForm, h: &[AlgInt], q2: &IdealRep, six: bool) -> i128 {
    let f = &c.field;
    let n = q2.norm;
    let dim = 2 * c.s;
    let k = BigInt::from(f.delta * if six { 6 } else { 1 });
    let total = n.pow(dim as u32);
    let mut good = 0i128;
    for idx in 0..total {
        let mut t = idx;
        let w: Vec<AlgInt> = (0..c.s)
            .map(|_| {
                let a = t % n;
                t /= n;
                let b = t % n;
                t /= n;
                AlgInt::new(a, b)
            })
            .collect();
        if (0..c.s).all(|i| q2.contains(&c.bilinear(i, &w, h).unwrap().scale(&k))) {
            good += 1;
        }
    }
    (n as i128).pow(dim as u32) / good
}

#[test]
fn lambda_h_trivial_cases() {
    let c = CubicForm::diagonal_int(1, &[1, 2]).unwrap();
    let f = c.field.clone();
    let q2 = IdealRep::principal(&f, [3, 0]).unwrap();
    let r = lambda_h(&c, &[AlgInt::zero(), AlgInt::zero()], &q2, false).unwrap();
    assert_eq!(r.lattice.det(), 1);
    let r = lambda_h(&c, &[AlgInt::new(1, 0), AlgInt::new(2, 1)], &IdealRep::unit(), false).unwrap();
    assert_eq!(r.lattice.det(), 1);
}

#[test]
fn lambda_h_matches_residue_count() {
    for d in [1, 3] {
        let f = make_field(d).unwrap();
        let c1 = CubicForm::diagonal_int(d, &[1]).unwrap();
        let c2 = CubicForm::from_poly(
            f.clone(),
            2,
            &[([0, 0, 0], AlgInt::new(1, 0)), ([0, 0, 1], AlgInt::new(0, 1)), ([0, 1, 1], AlgInt::new(2, -1)), ([1, 1, 1], AlgInt::new(5, 0))],
        )
        .unwrap();
        for gen in [[2, 0], [1, 1], [5, 0], [7, 0], [2, 1]] {
            let Ok(q2) = IdealRep::principal(&f, gen) else { continue };
            if q2.norm > 50 {
                continue;
            }
            for six in [false, true] {
                let r = lambda_h(&c1, &[AlgInt::new(1, 0)], &q2, six).unwrap();
                assert_eq!(r.lattice.det(), oracle_index(&c1, &[AlgInt::new(1, 0)], &q2, six));
                assert!(r.det_divisible);
                if q2.norm <= 7 {
                    let h = [AlgInt::new(1, 2), AlgInt::new(-1, 1)];
                    let r = lambda_h(&c2, &h, &q2, six).unwrap();
                    assert_eq!(r.lattice.det(), oracle_index(&c2, &h, &q2, six));
                    assert!(r.det_divisible);
                    for g in ideal_power_generators(&q2, 2) {
                        assert!(r.lattice.contains(&g));
                    }
                }
            }
        }
    }
}

#[test]
fn lambda_h_diagonal_example() {
    // s = 1, h = 1, q2 = (2) in Q(i): Delta * 6 * B = -4 * 6 w, always in (2)
    let c = CubicForm::diagonal_int(1, &[1]).unwrap();
    let q2 = IdealRep::principal(&c.field, [2, 0]).unwrap();
    let r = lambda_h(&c, &[AlgInt::new(1, 0)], &q2, false).unwrap();
    assert_eq!(r.lattice.det(), 1);
    assert_eq!(r.r_defining, 0);
    // M(h) = 6 vanishes mod (1+i) as well
    assert_eq!(r.r_hessian, 0);
    let q2 = IdealRep::principal(&c.field, [5, 0]).unwrap();
    let r = lambda_h(&c, &[AlgInt::new(1, 0)], &q2, false).unwrap();
    assert_eq!(r.lattice.det(), 25);
    assert_eq!(r.r_defining, 1);
}

/// Minima of a 2-dimensional lattice by scanning a box.
fn oracle_minima_2d(l: &IntegerLattice) -> Vec<i128> {
    let mut pts = Vec::new();
    for x in -30i128..=30 {
        for y in -30i128..=30 {
            if (x, y) != (0, 0) && l.contains(&[x, y]) {
                pts.push((x.abs().max(y.abs()), [x, y]));
            }
        }
    }
    pts.sort();
    let l1 = pts[0].0;
    let v = pts[0].1;
    let l2 = pts.iter().find(|(_, w)| v[0] * w[1] - v[1] * w[0] != 0).unwrap().0;
    vec![l1, l2]
}

#[test]
fn minima_examples() {
    let z2 = IntegerLattice::standard(2);
    let m = successive_minima(&z2, &big()).unwrap();
    assert_eq!(m.lambdas, vec![1, 1]);
    for b in [0.0f64, 1.0, 2.5, 7.0] {
        let k = 2 * b.floor() as u64 + 1;
        assert_eq!(count_points(&z2, b, &big()).unwrap(), k * k);
    }
    let l = IntegerLattice::from_generators(&[vec![2, 0], vec![0, 1]], 2).unwrap();
    let m = successive_minima(&l, &big()).unwrap();
    assert_eq!(m.lambdas, vec![1, 2]);
    for b in [1.0, 3.0, 10.0] {
        assert!(count_points(&l, b, &big()).unwrap() as f64 <= 4.0 * point_bound_shape(&m, b));
    }
}

#[test]
fn minima_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let gens: Vec<Vec<i128>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let Ok(l) = IntegerLattice::from_generators(&gens, 2) else { continue };
        if l.det() == 0 || l.det() > 60 {
            continue;
        }
        let m = successive_minima(&l, &big()).unwrap();
        assert_eq!(m.lambdas, oracle_minima_2d(&l));
        for (w, &lam) in m.witnesses.iter().zip(&m.lambdas) {
            assert!(l.contains(w));
            assert_eq!(w.iter().map(|x| x.abs()).max().unwrap(), lam);
        }
    }
}

#[test]
fn lambda_h_minima_are_small() {
    let c = CubicForm::diagonal_int(1, &[1, 1, 1]).unwrap();
    let f = c.field.clone();
    for p in [5i128, 13, 29] {
        let q2 = IdealRep::principal(&f, [p, 0]).unwrap();
        let r = lambda_h(&c, &[AlgInt::new(1, 0), AlgInt::new(2, 0), AlgInt::new(0, 1)], &q2, false).unwrap();
        let m = successive_minima(&r.lattice, &big()).unwrap();
        assert!(m.lambdas.windows(2).all(|w| w[0] <= w[1]));
        assert!(*m.lambdas.last().unwrap() <= p);
        assert_eq!(r.lattice.det(), p.pow(6));
    }
}

#[test]
fn minima_reject_large_dim() {
    let l = IntegerLattice::standard(7);
    assert!(successive_minima(&l, &big()).is_err());
}
