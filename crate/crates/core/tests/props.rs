use cmcert::analytic::ClassIndexer;
use cmcert::arith::{factor_integer, is_prime, parse_decimal, IntMatrix, Integer, Rational};
use cmcert::ball::{Ball, ComplexBall};
use cmcert::siegel::PeriodPoint;
use cmcert::theta::{recognize_rational, theta_constants};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_certificate(v in prop::collection::vec(-20i64..20, 9)) {
        let rows: Vec<Vec<i64>> = v.chunks(3).map(|c| c.to_vec()).collect();
        let a = IntMatrix::from_rows(&rows);
        let (d, l, r) = a.snf();
        prop_assert_eq!(l.mul(&a).mul(&r), d.clone());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert_eq!(d[(i, j)].clone(), Integer::new());
                }
            }
        }
        for i in 0..2 {
            let (x, y) = (d[(i, i)].clone(), d[(i + 1, i + 1)].clone());
            prop_assert!(x == 0 && y == 0 || x != 0 && y.is_divisible(&x));
        }
        let prod: Integer = (0..3).map(|i| d[(i, i)].clone()).product();
        prop_assert_eq!(prod.abs(), a.det().unwrap().abs());
    }

    #[test]
    fn hnf_keeps_the_lattice(v in prop::collection::vec(-30i64..30, 9)) {
        let rows: Vec<Vec<i64>> = v.chunks(3).map(|c| c.to_vec()).collect();
        let a = IntMatrix::from_rows(&rows);
        let det = a.det().unwrap();
        prop_assume!(det != 0);
        let h = a.hnf();
        prop_assert_eq!(h.det().unwrap().abs(), det.abs());
        // each column of a is an integer combination of h's columns
        let hi = h.to_rat().inverse().unwrap();
        for c in a.columns() {
            let x = hi.mul_vec(&c.iter().map(|z| Rational::from(z.clone())).collect::<Vec<_>>());
            prop_assert!(x.iter().all(|q| *q.denom() == 1));
        }
    }

    #[test]
    fn balls_enclose(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let (x, y) = (rat(a, b), rat(c, d));
        let (bx, by) = (Ball::from_rat(64, &x), Ball::from_rat(64, &y));
        prop_assert!(bx.add(&by).contains_rat(&(x.clone() + &y)));
        prop_assert!(bx.sub(&by).contains_rat(&(x.clone() - &y)));
        prop_assert!(bx.mul(&by).contains_rat(&(x.clone() * &y)));
        if c != 0 {
            prop_assert!(bx.div(&by).unwrap().contains_rat(&(x.clone() / &y)));
        }
        if a > 0 {
            prop_assert!(bx.sqrt().unwrap().sqr().contains_rat(&x));
            let l = bx.log().unwrap();
            prop_assert!(l.exp().contains_rat(&x));
        }
    }

    #[test]
    fn precision_nests(a in -300i64..300, b in 1i64..100) {
        let x = rat(a, b);
        let lo = Ball::from_rat(64, &x).exp();
        let hi = Ball::from_rat(256, &x).exp();
        prop_assert!(hi.rad_f64() <= lo.rad_f64() || hi.rad_f64() == 0.0);
        prop_assert!(lo.sub(&hi).contains_zero());
        let z = ComplexBall::from_rat(96, &rat(a, 7 * b), &rat(b, 3));
        let w = ComplexBall::from_rat(200, &rat(a, 7 * b), &rat(b, 3));
        prop_assert!(z.exp_pi_i().overlaps(&w.exp_pi_i()));
    }

    #[test]
    fn decimal_strings_round_trip(n in -10i64.pow(12)..10i64.pow(12), d in 1i64..10i64.pow(6)) {
        let q = rat(n, d);
        prop_assert_eq!(parse_decimal(&q.to_string()), Some(q.clone()));
        let s = format!("{}e-3", n);
        prop_assert_eq!(parse_decimal(&s), Some(rat(n, 1000)));
    }

    #[test]
    fn factorization_multiplies_back(n in 2u64..10u64.pow(12)) {
        let n = Integer::from(n);
        let f = factor_integer(&n);
        let mut prod = Integer::from(1);
        for (p, e) in &f {
            prop_assert!(is_prime(p));
            prod *= Integer::from(rug::ops::Pow::pow(p, *e));
        }
        prop_assert_eq!(prod, n);
    }

    #[test]
    fn recognition_recovers_small_rationals(n in -10i64.pow(9)..10i64.pow(9), d in 1i64..5000) {
        let q = rat(n, d);
        let b = Ball::from_rat(160, &q).add_error(&rug::Float::with_val(30, 1e-30));
        prop_assert_eq!(recognize_rational(&b, &(Integer::from(1) << 20)), Some(q));
    }

    #[test]
    fn class_labels_form_a_group(d1 in 1i64..6, d2 in 1i64..6, k in 1i64..4) {
        let divs = vec![d1, d1 * d2, d1 * d2 * k];
        let ix = ClassIndexer::new(&divs);
        prop_assert_eq!(ix.h as i64, divs.iter().product::<i64>());
        for a in 0..ix.h {
            prop_assert_eq!(ix.index(&ix.label(a)), a);
            prop_assert_eq!(ix.add(a, ix.neg(a)), 0);
            prop_assert_eq!(ix.add(a, 0), a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    // theta constants at two precisions overlap at points of the fundamental domain
    #[test]
    fn theta_precision_overlap(x1 in -0.5f64..0.5, x12 in -0.5f64..0.5, x2 in -0.5f64..0.5,
                               y1 in 0.9f64..1.5, t in 0.0f64..0.5, dy in 0.0f64..0.8) {
        let y12 = t * y1 / 2.0;
        let y2 = y1 + dy;
        let p = |prec| PeriodPoint::new(
            ComplexBall::from_f64(prec, x1, y1),
            ComplexBall::from_f64(prec, x12, y12),
            ComplexBall::from_f64(prec, x2, y2),
        );
        let a = theta_constants(&p(64), 64).unwrap();
        let b = theta_constants(&p(160), 160).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            prop_assert!(u.overlaps(v));
        }
    }
}
