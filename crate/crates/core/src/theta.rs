//! Genus-2 theta constants with rigorous truncation, chi_10, Igusa-Clebsch
//! invariants through Rosenhain roots, absolute invariants, rational
//! recognition and class polynomials.

use crate::arith::{Integer, Rational};
use crate::ball::{Ball, ComplexBall};
use crate::error::{Error, Result};
use crate::siegel::PeriodPoint;
use rug::Float;
use serde::{Deserialize, Serialize};

/// Indices m = a0 + 2 a1 + 4 b0 + 8 b1 of the even characteristics
/// [a/2; b/2].
pub const EVEN: [usize; 10] = [0, 1, 2, 3, 4, 6, 8, 9, 12, 15];

pub fn is_even(m: usize) -> bool {
    ((m & 1) * ((m >> 2) & 1) + ((m >> 1) & 1) * ((m >> 3) & 1)) % 2 == 0
}

#[derive(Clone, Debug)]
pub struct ThetaVector {
    /// theta_m for m in EVEN
    pub values: Vec<ComplexBall>,
    /// lattice box |v|_inf <= bound + 1/2 was summed
    pub bound: u32,
    pub tail: f64,
}

impl ThetaVector {
    pub fn get(&self, m: usize) -> &ComplexBall {
        &self.values[EVEN.iter().position(|&e| e == m).expect("even characteristic")]
    }
}

/// Lower bound for the smallest eigenvalue of Y.
pub fn lambda_min_lower(p: &PeriodPoint) -> Result<f64> {
    let [a, b, c] = p.y();
    let tr = a.add(&c);
    let disc = a.sub(&c).sqr().add(&b.sqr().mul_i64(4));
    let l = tr.sub(&disc.sqrt()?).mul_rat(&Rational::from((1, 2)));
    // also lambda_min >= det / tr
    let l2 = p.det_y().div(&tr)?;
    let v = l.lower_f64().max(l2.lower_f64());
    if v.is_finite() && v > 0.0 {
        Ok(v * (1.0 - 1e-12))
    } else {
        Err(Error::Indeterminate("Im Z not certified positive definite".into()))
    }
}

/// Sum over v outside the box of exp(-pi lam |v|^2), for v in a shifted
/// lattice; t is the least excluded coordinate size.
fn tail_bound(lam: f64, t: f64, prec: u32) -> Float {
    let p = 64;
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let l = Float::with_val(p, lam);
    // 1D tail: 2 exp(-pi l t^2) / (1 - exp(-2 pi l t)); 1D total: 2 + 1/sqrt(l)
    let e1 = Float::with_val(p, -(Float::with_val(p, &pi * &l) * (t * t))).exp();
    let e2 = Float::with_val(p, -(Float::with_val(p, &pi * &l) * (2.0 * t))).exp();
    let den = Float::with_val(p, 1 - e2);
    let tail1 = Float::with_val(p, e1 * 2u32) / den;
    let full = Float::with_val(p, 2 + Float::with_val(p, l.recip_sqrt_ref()));
    let mut r = Float::with_val(p, tail1 * full) * 2u32;
    // a little slack for the rounding in this estimate
    r *= 1.01f64;
    let _ = prec;
    r
}

/// The ten even theta constants at Z.
pub fn theta_constants(p: &PeriodPoint, prec: u32) -> Result<ThetaVector> {
    let lam = lambda_min_lower(p)?;
    // pi lam t^2 >= (prec + 20) log 2 + log(16 (2 + 1/sqrt lam))
    let need = (prec as f64 + 20.0) * std::f64::consts::LN_2 + (16.0 * (2.0 + 1.0 / lam.sqrt())).ln();
    let t = (need / (std::f64::consts::PI * lam)).sqrt();
    let bound = (t - 0.5).ceil().max(1.0) as u32;
    let tmin = bound as f64 + 0.5;
    let tail = tail_bound(lam, tmin, prec);
    let extra = 40 + (bound as f64 * bound as f64 * p.z1.abs().upper_f64().max(p.z2.abs().upper_f64()) * 4.0)
        .log2()
        .max(0.0) as u32;
    let wp = prec + extra;
    let z = p.set_prec(wp);
    let two_z12 = z.z12.mul_i64(2);
    let mut acc: Vec<ComplexBall> = (0..16).map(|_| ComplexBall::zero(wp)).collect();
    let b = bound as i64;
    for a0 in 0..2i64 {
        for a1 in 0..2i64 {
            // v = n + a/2, written as w / 2 with w = 2 n + a
            for n1 in -b..=b {
                let w1 = 2 * n1 + a0;
                if a0 == 1 && n1 == b {
                    continue;
                }
                for n2 in -b..=b {
                    if a1 == 1 && n2 == b {
                        continue;
                    }
                    let w2 = 2 * n2 + a1;
                    // q = (z1 w1^2 + 2 z12 w1 w2 + z2 w2^2) / 4
                    let q = z
                        .z1
                        .mul_i64(w1 * w1)
                        .add(&two_z12.mul_i64(w1 * w2))
                        .add(&z.z2.mul_i64(w2 * w2))
                        .mul_2exp(-2);
                    let term = q.exp_pi_i();
                    for b0 in 0..2i64 {
                        for b1 in 0..2i64 {
                            let m = (a0 + 2 * a1 + 4 * b0 + 8 * b1) as usize;
                            if !is_even(m) {
                                continue;
                            }
                            // exp(2 pi i v.b) = i^(w1 b0 + w2 b1)
                            let k = (w1 * b0 + w2 * b1).rem_euclid(4) as u32;
                            acc[m] = acc[m].add(&term.mul_i_pow(k));
                        }
                    }
                }
            }
        }
    }
    // every excluded v has some |v_i| >= b + 1/2
    let values = EVEN.iter().map(|&m| acc[m].add_error(&tail).set_prec(prec)).collect();
    Ok(ThetaVector { values, bound, tail: tail.to_f64() })
}

/// chi_10 = prod theta_m^2 (no prefactor).
pub fn chi10(t: &ThetaVector) -> ComplexBall {
    let mut r = ComplexBall::one(t.values[0].prec());
    for v in &t.values {
        r = r.mul(&v.sqr());
    }
    r
}

/// 2^{-12} prod theta_m^2.
pub fn chi10_literature(t: &ThetaVector) -> ComplexBall {
    chi10(t).mul_2exp(-12)
}

/// Rosenhain invariants lambda_1, lambda_2, lambda_3.
pub fn rosenhain(t: &ThetaVector) -> Result<[ComplexBall; 3]> {
    let th = |m: usize| t.get(m).clone();
    let q = |a: usize, b: usize, c: usize, d: usize| -> Result<ComplexBall> {
        Ok(th(a).mul(&th(b)).div(&th(c).mul(&th(d)))?.sqr())
    };
    Ok([q(0, 1, 2, 3)?, q(1, 12, 2, 15)?, q(0, 12, 3, 15)?])
}

/// Igusa-Clebsch invariants (I2, I4, I6, I10) of the binary sextic with the
/// given homogeneous roots (x_i : z_i).
pub fn igusa_clebsch_from_roots(r: &[(ComplexBall, ComplexBall); 6]) -> [ComplexBall; 4] {
    let prec = r[0].0.prec();
    let d = |i: usize, j: usize| r[i].0.mul(&r[j].1).sub(&r[j].0.mul(&r[i].1));
    let mut dd = vec![vec![ComplexBall::zero(prec); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            if i != j {
                dd[i][j] = d(i, j).sqr();
            }
        }
    }
    // I2: the 15 perfect matchings
    let mut i2 = ComplexBall::zero(prec);
    for m in matchings(&[0, 1, 2, 3, 4, 5]) {
        let mut t = ComplexBall::one(prec);
        for (a, b) in m {
            t = t.mul(&dd[a][b]);
        }
        i2 = i2.add(&t);
    }
    let mut i4 = ComplexBall::zero(prec);
    let mut i6 = ComplexBall::zero(prec);
    for x in 1..6 {
        for y in x + 1..6 {
            let tri = [0, x, y];
            let rest: Vec<usize> = (0..6).filter(|k| !tri.contains(k)).collect();
            let (a, b, c) = (tri[0], tri[1], tri[2]);
            let (e, f, g) = (rest[0], rest[1], rest[2]);
            let base = dd[a][b].mul(&dd[b][c]).mul(&dd[c][a]).mul(&dd[e][f]).mul(&dd[f][g]).mul(&dd[g][e]);
            i4 = i4.add(&base);
            for perm in [[e, f, g], [e, g, f], [f, e, g], [f, g, e], [g, e, f], [g, f, e]] {
                let t = dd[a][perm[0]].mul(&dd[b][perm[1]]).mul(&dd[c][perm[2]]);
                i6 = i6.add(&base.mul(&t));
            }
        }
    }
    let mut i10 = ComplexBall::one(prec);
    for i in 0..6 {
        for j in i + 1..6 {
            i10 = i10.mul(&dd[i][j]);
        }
    }
    [i2, i4, i6, i10]
}

fn matchings(s: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if s.is_empty() {
        return vec![vec![]];
    }
    let a = s[0];
    let mut out = Vec::new();
    for k in 1..s.len() {
        let rest: Vec<usize> = s[1..].iter().copied().filter(|&x| x != s[k]).collect();
        for mut m in matchings(&rest) {
            m.insert(0, (a, s[k]));
            out.push(m);
        }
    }
    out
}

/// Igusa-Clebsch invariants of the Rosenhain model at the point.
pub fn igusa_clebsch(t: &ThetaVector) -> Result<[ComplexBall; 4]> {
    let prec = t.values[0].prec();
    let l = rosenhain(t)?;
    let one = ComplexBall::one(prec);
    let zero = ComplexBall::zero(prec);
    let roots = [
        (zero.clone(), one.clone()),
        (one.clone(), one.clone()),
        (one.clone(), zero),
        (l[0].clone(), one.clone()),
        (l[1].clone(), one.clone()),
        (l[2].clone(), one),
    ];
    Ok(igusa_clebsch_from_roots(&roots))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// I2^5/I10, I2^3 I4/I10, I2^2 I6/I10
    Igusa,
    /// I4 I6'/I10, I2 I4^2/I10, I4^5/I10^2 with I6' = (I2 I4 - 3 I6)/2
    Streng,
    /// (s1, s1 s2, s1 s3) for the Streng triple s; this is the form the
    /// published disc 8000 triple takes
    Calibrated,
}

/// Absolute invariants from Igusa-Clebsch invariants.
pub fn absolute_invariants(ic: &[ComplexBall; 4], norm: Normalization) -> Result<[ComplexBall; 3]> {
    let [i2, i4, i6, i10] = ic;
    if i10.contains_zero() {
        return Err(Error::Failed("DecomposablePoint: I10 is not certified nonzero".into()));
    }
    Ok(match norm {
        Normalization::Igusa => [
            i2.pow_u(5).div(i10)?,
            i2.pow_u(3).mul(i4).div(i10)?,
            i2.sqr().mul(i6).div(i10)?,
        ],
        Normalization::Streng => {
            let i6p = i2.mul(i4).sub(&i6.mul_i64(3)).mul_2exp(-1);
            [i4.mul(&i6p).div(i10)?, i2.mul(&i4.sqr()).div(i10)?, i4.pow_u(5).div(&i10.sqr())?]
        }
        Normalization::Calibrated => {
            let [s1, s2, s3] = absolute_invariants(ic, Normalization::Streng)?;
            let (a, b) = (s1.mul(&s2), s1.mul(&s3));
            [s1, a, b]
        }
    })
}

/// The normalization whose values reproduce the calibration triple of the
/// discriminant 8000 field.
pub const DEFAULT_NORMALIZATION: Normalization = Normalization::Calibrated;

/// Continued-fraction recognition: the unique rational with denominator at
/// most `max_den` inside the ball, if the radius makes it unique.
pub fn recognize_rational(b: &Ball, max_den: &Integer) -> Option<Rational> {
    let mid = b.mid.to_rational()?;
    let rad = b.rad.to_rational()?;
    // convergents of mid
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut x = mid.clone();
    let mut best: Option<Rational> = None;
    for _ in 0..10_000 {
        let a = crate::arith::rat_floor(&x);
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > *max_den {
            break;
        }
        let c = Rational::from((h2.clone(), k2.clone()));
        let dist = Rational::from(&c - &mid).abs();
        if dist <= rad {
            best = Some(c);
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = Rational::from(&x - &a);
        if frac == 0 {
            break;
        }
        x = frac.recip();
    }
    let c = best?;
    // uniqueness: two rationals with denominators q, s <= Q differ by >= 1/(q Q)
    let gap = Rational::from((Integer::from(1), Integer::from(c.denom() * max_den)));
    if Rational::from(&rad * 2u32) < gap {
        Some(c)
    } else {
        None
    }
}

/// Certified: the ball contains no integer.
pub fn certified_non_integer(b: &Ball) -> bool {
    matches!(b.integers_inside(2), Some(v) if v.is_empty())
}

/// Coefficients (low to high, monic) of prod (X - r_k) in ball arithmetic.
pub fn poly_from_roots(roots: &[ComplexBall]) -> Vec<ComplexBall> {
    let prec = roots.first().map(|r| r.prec()).unwrap_or(64);
    let mut c = vec![ComplexBall::one(prec)];
    for r in roots {
        let mut n = vec![ComplexBall::zero(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            n[i + 1] = n[i + 1].add(ci);
            n[i] = n[i].sub(&ci.mul(r));
        }
        c = n;
    }
    c
}

#[derive(Clone, Debug)]
pub enum Recognized {
    /// all coefficients recognized
    Exact(Vec<Rational>),
    /// some coefficient certified not an integer
    NonIntegral { index: usize },
    /// precision too low to decide
    Undecided,
}

/// Recognition of a class polynomial over Q from ball coefficients.
pub fn recognize_poly(coeffs: &[ComplexBall], max_den: &Integer) -> Recognized {
    let mut out = Vec::new();
    for c in coeffs {
        if !c.imag().contains_zero() {
            return Recognized::Undecided;
        }
        match recognize_rational(&c.real(), max_den) {
            Some(q) => out.push(q),
            None => return Recognized::Undecided,
        }
    }
    Recognized::Exact(out)
}

/// First coefficient certified non-integral, if any.
pub fn find_non_integral(coeffs: &[ComplexBall]) -> Option<usize> {
    coeffs.iter().position(|c| certified_non_integer(&c.real()))
}

/// log(|chi_10(Z)| det(Y)^5).
pub fn log_chi10_det(t: &ThetaVector, p: &PeriodPoint, literature: bool) -> Result<Ball> {
    let c = if literature { chi10_literature(t) } else { chi10(t) };
    let a = c.abs();
    if a.is_positive() != Some(true) {
        return Err(Error::Failed("DecomposablePoint: chi10 contains zero".into()));
    }
    let prec = t.values[0].prec();
    Ok(a.log()?.add(&p.det_y().set_prec(prec).log()?.mul_i64(5)))
}

/// h^infty = -1/(10 #H) sum log(|chi_10| det Y^5).
pub fn infinity_part(logs: &[Ball]) -> Result<Ball> {
    if logs.is_empty() {
        return Err(Error::Domain("no points".into()));
    }
    let mut s = Ball::zero(logs[0].prec());
    for l in logs {
        s = s.add(l);
    }
    Ok(s.mul_rat(&Rational::from((-1, 10 * logs.len() as i64))))
}

#[derive(Clone, Debug)]
pub struct HeightReport {
    pub infinity_parts: Vec<Ball>,
    pub h0: Rational,
    pub faltings_height: Ball,
    pub lower_bound: Ball,
    pub lower_bound_ok: Option<bool>,
}

/// h = h0 + mean(h_i^infty) - (4/5) log 2 - log pi, with the lower bound
/// -(gamma_F/2 + (1/4) log disc_F + log 2 pi + gamma_Q) + (sqrt 5 / 20) log disc_K.
pub fn faltings_height(
    parts: &[Ball],
    h0_log: &Ball,
    disc_k: &Integer,
    disc_f: &Integer,
    gamma_f: &Rational,
) -> Result<HeightReport> {
    let prec = parts[0].prec();
    let mut s = Ball::zero(prec);
    for p in parts {
        s = s.add(p);
    }
    let mean = s.mul_rat(&Rational::from((1, parts.len() as i64)));
    let log2 = Ball::from_i64(prec, 2).log()?;
    let pi = Ball::pi(prec);
    let h = h0_log.add(&mean).sub(&log2.mul_rat(&Rational::from((4, 5)))).sub(&pi.log()?);
    let gamma_q = Ball::from_rat(prec, &Rational::from((566215, 1000000)));
    let c = Ball::from_rat(prec, gamma_f)
        .mul_rat(&Rational::from((1, 2)))
        .add(&Ball::from_int(prec, disc_f).log()?.mul_rat(&Rational::from((1, 4))))
        .add(&pi.mul_i64(2).log()?)
        .add(&gamma_q);
    let lb = Ball::from_i64(prec, 5)
        .sqrt()?
        .mul_rat(&Rational::from((1, 20)))
        .mul(&Ball::from_int(prec, disc_k).log()?)
        .sub(&c);
    let ok = h.sub(&lb).is_positive();
    Ok(HeightReport {
        infinity_parts: parts.to_vec(),
        h0: Rational::new(),
        faltings_height: h,
        lower_bound: lb,
        lower_bound_ok: ok,
    })
}

/// HP lower bound 8e-5 min(1, pi |z12|)^2 exp(-2 pi Tr Y) for |chi_10|.
pub fn chi10_lower_bound(p: &PeriodPoint) -> Ball {
    let prec = p.prec();
    let pi = Ball::pi(prec);
    let m = pi.mul(&p.z12.abs()).min(&Ball::from_i64(prec, 1));
    Ball::from_rat(prec, &Rational::from((8, 100000)))
        .mul(&m.sqr())
        .mul(&pi.mul(&p.trace_y()).mul_i64(-2).exp())
}

/// Everything computed at one CM point.
#[derive(Clone, Debug)]
pub struct PointData {
    pub triple: crate::polarize::CMTriple,
    pub point: PeriodPoint,
    pub theta: ThetaVector,
    /// log(|chi_10| det Y^5), literature normalization
    pub log_chi10: Ball,
    pub igusa_clebsch: [ComplexBall; 4],
}

/// Reduced CM points of all triples for the type phi at precision prec.
/// The flag reports a triple found on the boundary of the unit search range.
pub fn field_points(
    k: &crate::nf::CMField,
    g: &crate::classgroup::ClassGroup,
    phi: &crate::nf::CMType,
    prec: u32,
) -> Result<(Vec<PointData>, bool)> {
    let (ts, boundary) = crate::polarize::triples_for_type(k, g, phi)?;
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let b = crate::polarize::symplectic_basis(k, &t)?;
        let point = crate::siegel::reduce_cm_point(k, &b, phi, prec)?;
        let theta = theta_constants(&point, prec)?;
        let log_chi10 = log_chi10_det(&theta, &point, false)?;
        let igusa_clebsch = igusa_clebsch(&theta)?;
        out.push(PointData { triple: t, point, theta, log_chi10, igusa_clebsch });
    }
    Ok((out, boundary))
}

#[derive(Clone, Debug)]
pub struct ClassPolynomials {
    pub normalization: Normalization,
    /// per invariant: ball coefficients of prod (X - j_k), low to high
    pub coeffs: Vec<Vec<ComplexBall>>,
    pub recognized: Vec<Recognized>,
}

impl ClassPolynomials {
    /// Some(false): a coefficient is certified non-integral; Some(true): every
    /// coefficient was recognized with denominator 1.
    pub fn integral(&self) -> Option<bool> {
        if self.recognized.iter().any(|r| matches!(r, Recognized::NonIntegral { .. })) {
            return Some(false);
        }
        let all = self.recognized.iter().all(|r| match r {
            Recognized::Exact(c) => c.iter().all(|q| *q.denom() == 1),
            _ => false,
        });
        if all {
            Some(true)
        } else {
            None
        }
    }
}

/// Denominator bound for recognition: half the bits of absolute accuracy,
/// which leaves room for the uniqueness condition.
fn max_den_for(c: &ComplexBall) -> Integer {
    let r = c.rad_f64();
    let bits = if r == 0.0 { c.prec() as f64 / 2.0 } else { -r.log2() / 2.0 - 4.0 };
    Integer::from(1) << (bits.clamp(0.0, 1e6) as u32)
}

fn recognize_each(c: &[ComplexBall]) -> Recognized {
    let mut vals = Vec::new();
    for x in c {
        match recognize_poly(std::slice::from_ref(x), &max_den_for(x)) {
            Recognized::Exact(mut v) => vals.append(&mut v),
            other => return other,
        }
    }
    Recognized::Exact(vals)
}

/// Class polynomials from the invariant triples of a Galois-stable set of
/// points. The integrality refutation works on each coefficient directly.
pub fn class_polynomials(points: &[PointData], norm: Normalization) -> Result<ClassPolynomials> {
    let js: Vec<[ComplexBall; 3]> =
        points.iter().map(|p| absolute_invariants(&p.igusa_clebsch, norm)).collect::<Result<_>>()?;
    let mut coeffs = Vec::new();
    let mut recognized = Vec::new();
    for i in 0..3 {
        let roots: Vec<ComplexBall> = js.iter().map(|j| j[i].clone()).collect();
        let c = poly_from_roots(&roots);
        let r = match find_non_integral(&c) {
            Some(index) => Recognized::NonIntegral { index },
            None => recognize_each(&c),
        };
        coeffs.push(c);
        recognized.push(r);
    }
    Ok(ClassPolynomials { normalization: norm, coeffs, recognized })
}

/// Absolute invariants of a single point recognized as rationals.
pub fn recognize_triple(ic: &[ComplexBall; 4], norm: Normalization) -> Result<Option<[Rational; 3]>> {
    let j = absolute_invariants(ic, norm)?;
    let mut out = Vec::new();
    for x in &j {
        if !x.imag().contains_zero() {
            return Ok(None);
        }
        match recognize_rational(&x.real(), &max_den_for(x)) {
            Some(q) => out.push(q),
            None => return Ok(None),
        }
    }
    let [a, b, c]: [Rational; 3] = out.try_into().expect("three");
    Ok(Some([a, b, c]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_point(prec: u32, t1: f64, t2: f64) -> PeriodPoint {
        PeriodPoint::new(
            ComplexBall::from_f64(prec, 0.0, t1),
            ComplexBall::zero(prec),
            ComplexBall::from_f64(prec, 0.0, t2),
        )
    }

    #[test]
    fn ten_even_characteristics() {
        assert_eq!((0..16).filter(|&m| is_even(m)).collect::<Vec<_>>(), EVEN.to_vec());
    }

    #[test]
    fn diagonal_point_factors() {
        let prec = 128;
        let t = theta_constants(&diag_point(prec, 1.0, 1.0), prec).unwrap();
        // theta_00(i) = pi^{1/4} / Gamma(3/4)
        let pi = Float::with_val(200, rug::float::Constant::Pi);
        let g = Float::with_val(200, 0.75f64).gamma();
        let th = Float::with_val(200, pi.sqrt().sqrt() / g);
        let th2 = Float::with_val(200, &th * &th);
        let v = t.get(0);
        let d = Float::with_val(200, &v.re - &th2).abs().to_f64();
        assert!(d < 1e-30, "{}", d);
        // decomposable: chi10 vanishes
        assert!(chi10(&t).contains_zero());
    }

    #[test]
    fn truncation_is_stable() {
        let prec = 128;
        let p = PeriodPoint::new(
            ComplexBall::from_f64(prec, 0.1, 1.3),
            ComplexBall::from_f64(prec, 0.23, 0.4),
            ComplexBall::from_f64(prec, -0.2, 1.7),
        );
        let a = theta_constants(&p, prec).unwrap();
        let b = theta_constants(&p, 2 * prec).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(x.overlaps(y));
            assert!(x.rad_f64() < 1e-30);
        }
    }

    #[test]
    fn recognition() {
        let b = Ball::from_rat(256, &Rational::from((-355, 113)));
        assert_eq!(recognize_rational(&b, &Integer::from(1000)), Some(Rational::from((-355, 113))));
        let b = Ball::from_i64(256, 183708000);
        assert_eq!(recognize_rational(&b, &Integer::from(1)), Some(Rational::from(183708000)));
        // a wide ball is refused
        let w = Ball::from_f64(64, 0.5).add_error(&Float::with_val(64, 0.3));
        assert_eq!(recognize_rational(&w, &Integer::from(1)), None);
        let w = Ball::from_f64(64, 0.5).add_error(&Float::with_val(64, 0.1));
        assert!(certified_non_integer(&w));
    }
}
