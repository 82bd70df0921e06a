use cmcert::analytic::*;
use cmcert::arith::{Integer, Rational, ZPoly};
use cmcert::ball::Ball;
use cmcert::classgroup::ClassGroup;
use cmcert::nf::CMField;

fn zeta5() -> CMField {
    CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap()
}

#[test]
fn zeta5_ideal_counts() {
    let t = ideal_counts_plain(&zeta5(), 200).unwrap();
    // 5 totally ramified, 11 and 31 split completely, 2 and 3 inert
    assert_eq!(t.total(5), 1);
    assert_eq!(t.total(11), 4);
    assert_eq!(t.total(31), 4);
    assert_eq!(t.total(2), 0);
    assert_eq!(t.total(16), 1);
    assert_eq!(t.total(81), 1);
    assert_eq!(t.total(55), 4);
    assert_eq!(t.total(121), 10);
}

#[test]
fn counts_approach_the_residue() {
    // sum_{n <= X} a_n / X tends to kappa
    for poly in [[1i64, 1, 1, 1, 1], [20, 0, 10, 0, 1]] {
        let k = CMField::from_poly(&ZPoly::from_i64(&poly)).unwrap();
        let g = ClassGroup::compute(&k, 0).unwrap();
        let x = 1_000_000u64;
        let t = ideal_counts_plain(&k, x).unwrap();
        let s: u64 = t.totals().iter().sum();
        let (kappa, _) = residue_kappa(&k, &g.h, 128).unwrap();
        let r = s as f64 / x as f64 / kappa.to_f64();
        assert!((r - 1.0).abs() < 0.2, "{} ratio {}", k.disc, r);
    }
}

#[test]
fn class_split_counts_add_up() {
    let k = CMField::from_poly(&ZPoly::from_i64(&[20, 0, 10, 0, 1])).unwrap();
    let g = ClassGroup::compute(&k, 0).unwrap();
    let (t, ix) = ideal_counts(&k, &g, 20_000).unwrap();
    let plain = ideal_counts_plain(&k, 20_000).unwrap();
    assert_eq!(t.totals(), plain.totals());
    // min norms from the table match the class group records
    for r in g.min_norms(&k).unwrap() {
        assert_eq!(t.min_norm(ix.index(&r.class)), r.min_norm.to_u64());
    }
}

#[test]
fn zeta5_has_ten_roots_of_unity() {
    let k = zeta5();
    let (kappa, rep) = residue_kappa(&k, &Integer::from(1), 128).unwrap();
    assert_eq!(rep.w, 10);
    assert!(rep.w_flag);
    assert!(rep.r_k_le_2r_f);
    assert!(!rep.louboutin_applicable);
    // kappa = (2 pi)^2 R_K / (10 sqrt 125), R_K = 2 log phi / Q with Q = 1
    let phi = Ball::from_i64(128, 5).sqrt().unwrap().add(&Ball::from_i64(128, 1)).mul_2exp(-1);
    let want = Ball::pi(128).mul_i64(2).sqr().mul(&phi.log().unwrap().mul_i64(2)).div(&Ball::from_i64(128, 125).sqrt().unwrap().mul_i64(10)).unwrap();
    let q = k.unit_index() as i64;
    assert!(kappa.mul_i64(q).sub(&want).contains_zero(), "{} {}", kappa.to_f64(), want.to_f64());
}

#[test]
fn delta_scan_and_main_bound() {
    assert!(delta_lemma_scan(10, 200_000).unwrap().is_empty());
    let q = cmcert::nf::quad::real_quad_data(&Integer::from(5)).unwrap();
    let b = main_theorem_bound(q.h, &q.regulator(128), &q.disc, &Rational::from(2), &Rational::new()).unwrap();
    assert_eq!(b.branch, 0);
    assert!((b.log_bound / 64f64.exp() - 1.0).abs() < 1e-12);
}

#[test]
fn constants_exponents() {
    let c = constants_report(128).unwrap();
    assert_eq!(c.quartic.delta_exponent, Rational::from((3, 16)));
    assert_eq!(c.aggregate_t_exponent, Rational::from((3, 4)));
    assert!(c.conductor_ratio_in_range);
    // the constant itself is a finite positive number
    assert!(c.quartic.constant.is_finite() && c.quartic.constant > 0.0);
}
