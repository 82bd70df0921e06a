use cmcert::arith::{Integer, Rational, ZPoly};
use cmcert::ball::{Ball, ComplexBall};
use cmcert::ideal::FracIdeal;
use cmcert::nf::CMField;
use cmcert::polarize::{find_polarizations, symplectic_basis};
use cmcert::siegel::{act, reduce_cm_point, s3_family, translation_matrix, PeriodPoint};
use cmcert::theta::*;
use rand::{Rng, SeedableRng};

fn zeta5_point(prec: u32) -> (PeriodPoint, ThetaVector) {
    let k = CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
    let phi = k.cm_types()[0];
    let t = find_polarizations(&k, &phi, &FracIdeal::unit()).unwrap().triples.remove(0);
    let b = symplectic_basis(&k, &t).unwrap();
    let p = reduce_cm_point(&k, &b, &phi, prec).unwrap();
    let th = theta_constants(&p, prec).unwrap();
    (p, th)
}

// Colmez value for Q(zeta_5) computed from Lerch's formula (Deligne normalization).
const COLMEZ_ZETA5: &str = "-1.45250923964564465031770704184";

#[test]
fn zeta5_invariants_vanish() {
    let (_, th) = zeta5_point(200);
    let ic = igusa_clebsch(&th).unwrap();
    // y^2 = x^5 + 1 has I2 = I4 = I6 = 0 by the coefficient formulas
    let i10 = ic[3].abs();
    assert!(i10.is_positive() == Some(true));
    for x in &ic[..3] {
        assert!(x.abs().div(&i10).unwrap().upper_f64() < 1e-40);
    }
    let j = absolute_invariants(&ic, Normalization::Calibrated).unwrap();
    for x in &j {
        assert!(x.contains_zero());
    }
}

#[test]
fn i2_matches_coefficient_formula() {
    // monic sextic with roots 1..6 (homogeneous roots (r : 1))
    let prec = 128;
    let roots: [(ComplexBall, ComplexBall); 6] =
        std::array::from_fn(|i| (ComplexBall::from_i64(prec, i as i64 + 1, 0), ComplexBall::one(prec)));
    let ic = igusa_clebsch_from_roots(&roots);
    // coefficients of prod (x - r)
    let mut c = vec![Integer::from(1)];
    for r in 1..=6i64 {
        let mut n = vec![Integer::new(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            n[i + 1] += ci;
            n[i] -= Integer::from(ci * r);
        }
        c = n;
    }
    let a = |i: usize| c[i].clone();
    let i2 = Integer::from(-240) * a(0) * a(6) + Integer::from(40) * a(1) * a(5) - Integer::from(16) * a(2) * a(4)
        + Integer::from(6) * a(3) * a(3);
    assert!(ic[0].real().sub(&Ball::from_int(prec, &i2)).contains_zero(), "{:?} vs {}", ic[0].to_f64(), i2);
}

#[test]
fn zeta5_height_matches_colmez() {
    let prec = 160;
    let (p, th) = zeta5_point(prec);
    let l = log_chi10_det(&th, &p, false).unwrap();
    let hinf = infinity_part(&[l]).unwrap();
    let rep = faltings_height(
        &[hinf],
        &Ball::zero(prec),
        &Integer::from(125),
        &Integer::from(5),
        &Rational::from(2),
    )
    .unwrap();
    let oracle = Ball::from_rat(prec, &cmcert::arith::parse_decimal(COLMEZ_ZETA5).unwrap());
    let d = rep.faltings_height.sub(&oracle).abs().upper_f64();
    assert!(d < 1e-28, "{}", d);
    assert_eq!(rep.lower_bound_ok, Some(true));
}

#[test]
fn chi10_weight_ten() {
    let prec = 96;
    let (p, th) = zeta5_point(prec);
    let base = log_chi10_det(&th, &p, false).unwrap();
    let fam = s3_family();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let mut m = fam[rng.gen_range(0..fam.len())].clone();
        m = m.mul(&translation_matrix([[rng.gen_range(-1..=1), 0], [0, rng.gen_range(-1..=1)]]));
        m = m.mul(&fam[rng.gen_range(0..fam.len())]);
        let q = PeriodPoint::from_matrix(&act(&m, &p.matrix()).unwrap());
        let tq = theta_constants(&q, prec).unwrap();
        let l = log_chi10_det(&tq, &q, false).unwrap();
        assert!(l.sub(&base).abs().upper_f64() < 1e-15, "{:?} {:?}", l.to_f64(), base.to_f64());
    }
}

#[test]
fn chi10_lower_bound_at_zeta5() {
    let (p, th) = zeta5_point(128);
    let lb = chi10_lower_bound(&p);
    assert_eq!(chi10(&th).abs().sub(&lb).is_positive(), Some(true));
}

#[test]
fn precision_doubling_nests() {
    let (_, a) = zeta5_point(96);
    let (_, b) = zeta5_point(192);
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!(x.overlaps(y));
    }
}

#[test]
fn disc8000_reproduces_known_triple() {
    let k = CMField::from_poly(&ZPoly::from_i64(&[20, 0, 10, 0, 1])).unwrap();
    let g = cmcert::classgroup::ClassGroup::compute(&k, 0).unwrap();
    let phi = k.cm_types()[0];
    let (pts, _) = field_points(&k, &g, &phi, 300).unwrap();
    assert_eq!(pts.len(), 2);
    let target = ["183708000", "474590099025000000", "25021491747613593750000000"]
        .map(|s| Rational::from(cmcert::arith::parse_int(s).unwrap()));
    let rec: Vec<_> =
        pts.iter().map(|p| recognize_triple(&p.igusa_clebsch, DEFAULT_NORMALIZATION).unwrap()).collect();
    assert!(rec.iter().any(|r| r.as_ref() == Some(&target)), "{:?}", rec);
    // the other curve of this field is not integral
    let cp = class_polynomials(&pts, Normalization::Streng).unwrap();
    assert_eq!(cp.integral(), Some(false));
    // the Igusa-type family does not reproduce the triple
    let igusa: Vec<_> = pts.iter().map(|p| recognize_triple(&p.igusa_clebsch, Normalization::Igusa).unwrap()).collect();
    assert!(igusa.iter().all(|r| r.as_ref() != Some(&target)));
}
