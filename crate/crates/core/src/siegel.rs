//! Period matrices in the Siegel upper half space of degree 2, reduction
//! into the fundamental domain and the inequality checks on reduced points.

use crate::arith::{IntMatrix, Integer, Rational};
use crate::ball::{Ball, ComplexBall};
use crate::error::{Error, Result};
use crate::nf::{CMField, CMType, NFElement};
use crate::polarize::SymplecticBasis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// 2x2 complex ball matrix, row major.
#[derive(Clone, Debug)]
pub struct CMat2(pub [[ComplexBall; 2]; 2]);

impl CMat2 {
    pub fn from_int(prec: u32, m: &[[i64; 2]; 2]) -> CMat2 {
        let c = |x: i64| ComplexBall::from_i64(prec, x, 0);
        CMat2([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn from_intm(prec: u32, m: &IntMatrix, r0: usize, c0: usize) -> CMat2 {
        let c = |i: usize, j: usize| ComplexBall::from_real(&Ball::from_int(prec, &m[(r0 + i, c0 + j)]));
        CMat2([[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]])
    }

    pub fn add(&self, o: &CMat2) -> CMat2 {
        let a = &self.0;
        let b = &o.0;
        CMat2([[a[0][0].add(&b[0][0]), a[0][1].add(&b[0][1])], [a[1][0].add(&b[1][0]), a[1][1].add(&b[1][1])]])
    }

    pub fn mul(&self, o: &CMat2) -> CMat2 {
        let a = &self.0;
        let b = &o.0;
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        CMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn det(&self) -> ComplexBall {
        let a = &self.0;
        a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]))
    }

    pub fn inv(&self) -> Result<CMat2> {
        let d = self.det().recip()?;
        let a = &self.0;
        Ok(CMat2([
            [a[1][1].mul(&d), a[0][1].neg().mul(&d)],
            [a[1][0].neg().mul(&d), a[0][0].mul(&d)],
        ]))
    }
}

/// A point of the Siegel upper half space with its reduction certificate.
#[derive(Clone, Debug)]
pub struct PeriodPoint {
    pub z1: ComplexBall,
    pub z12: ComplexBall,
    pub z2: ComplexBall,
    /// M in Sp4(Z) with this point = M . (input point)
    pub reduction_matrix: IntMatrix,
    /// symplectic basis the point was computed from, if any
    pub basis: Option<Vec<NFElement>>,
    /// some reduction condition holds only up to the ball radii
    pub boundary: bool,
}

impl PeriodPoint {
    pub fn new(z1: ComplexBall, z12: ComplexBall, z2: ComplexBall) -> PeriodPoint {
        PeriodPoint { z1, z12, z2, reduction_matrix: IntMatrix::identity(4), basis: None, boundary: false }
    }

    pub fn prec(&self) -> u32 {
        self.z1.prec()
    }

    pub fn matrix(&self) -> CMat2 {
        CMat2([[self.z1.clone(), self.z12.clone()], [self.z12.clone(), self.z2.clone()]])
    }

    pub fn from_matrix(m: &CMat2) -> PeriodPoint {
        // symmetrise: both off-diagonal entries contain the true value
        let z12 = m.0[0][1].union(&m.0[1][0]);
        PeriodPoint::new(m.0[0][0].clone(), z12, m.0[1][1].clone())
    }

    pub fn y(&self) -> [Ball; 3] {
        [self.z1.imag(), self.z12.imag(), self.z2.imag()]
    }

    pub fn x(&self) -> [Ball; 3] {
        [self.z1.real(), self.z12.real(), self.z2.real()]
    }

    pub fn det_y(&self) -> Ball {
        let [a, b, c] = self.y();
        a.mul(&c).sub(&b.sqr())
    }

    pub fn trace_y(&self) -> Ball {
        let [a, _, c] = self.y();
        a.add(&c)
    }

    /// Y positive definite, certified.
    pub fn is_y_positive(&self) -> Option<bool> {
        let y1 = self.z1.imag().is_positive()?;
        let d = self.det_y().is_positive()?;
        Some(y1 && d)
    }

    pub fn set_prec(&self, prec: u32) -> PeriodPoint {
        let mut p = self.clone();
        p.z1 = p.z1.set_prec(prec);
        p.z12 = p.z12.set_prec(prec);
        p.z2 = p.z2.set_prec(prec);
        p
    }
}

pub fn j4() -> IntMatrix {
    crate::polarize::standard_j()
}

/// M^T J M = J.
pub fn is_symplectic(m: &IntMatrix) -> bool {
    m.rows == 4 && m.cols == 4 && m.transpose().mul(&j4()).mul(m) == j4()
}

/// (A Z + B)(C Z + D)^{-1}.
pub fn act(m: &IntMatrix, z: &CMat2) -> Result<CMat2> {
    let prec = z.0[0][0].prec();
    let a = CMat2::from_intm(prec, m, 0, 0);
    let b = CMat2::from_intm(prec, m, 0, 2);
    let c = CMat2::from_intm(prec, m, 2, 0);
    let d = CMat2::from_intm(prec, m, 2, 2);
    let num = a.mul(z).add(&b);
    let den = c.mul(z).add(&d);
    Ok(num.mul(&den.inv()?))
}

/// det(C Z + D).
pub fn cz_plus_d_det(m: &IntMatrix, z: &CMat2) -> ComplexBall {
    let prec = z.0[0][0].prec();
    let c = CMat2::from_intm(prec, m, 2, 0);
    let d = CMat2::from_intm(prec, m, 2, 2);
    c.mul(z).add(&d).det()
}

fn block_matrix(a: [[i64; 2]; 2], b: [[i64; 2]; 2], c: [[i64; 2]; 2], d: [[i64; 2]; 2]) -> IntMatrix {
    let mut m = IntMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = Integer::from(a[i][j]);
            m[(i, j + 2)] = Integer::from(b[i][j]);
            m[(i + 2, j)] = Integer::from(c[i][j]);
            m[(i + 2, j + 2)] = Integer::from(d[i][j]);
        }
    }
    m
}

/// Z -> U^T Z U.
pub fn gl2_matrix(u: [[i64; 2]; 2]) -> IntMatrix {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    assert!(det == 1 || det == -1);
    let ut = [[u[0][0], u[1][0]], [u[0][1], u[1][1]]];
    let uinv = [[u[1][1] * det, -u[0][1] * det], [-u[1][0] * det, u[0][0] * det]];
    block_matrix(ut, [[0, 0], [0, 0]], [[0, 0], [0, 0]], uinv)
}

/// Z -> Z + B.
pub fn translation_matrix(b: [[i64; 2]; 2]) -> IntMatrix {
    block_matrix([[1, 0], [0, 1]], b, [[0, 0], [0, 0]], [[1, 0], [0, 1]])
}

/// The finite family used for (S3): C = I with every symmetric D having
/// entries in {-1, 0, 1}, and the two embedded SL2 inversions with
/// translations d in {-1, 0, 1}.
pub fn s3_family() -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for d11 in -1..=1 {
        for d12 in -1..=1 {
            for d22 in -1..=1 {
                out.push(block_matrix([[0, 0], [0, 0]], [[-1, 0], [0, -1]], [[1, 0], [0, 1]], [[d11, d12], [d12, d22]]));
            }
        }
    }
    for d in -1..=1 {
        out.push(block_matrix([[0, 0], [0, 1]], [[-1, 0], [0, 0]], [[1, 0], [0, 0]], [[d, 0], [0, 1]]));
        out.push(block_matrix([[1, 0], [0, 0]], [[0, 0], [0, -1]], [[0, 0], [0, 1]], [[1, 0], [0, d]]));
    }
    out
}

/// Z = -Omega_1^{-1} Omega_2 where Omega_1 = (Phi(e1) Phi(e2)) and
/// Omega_2 = (Phi(e3) Phi(e4)).
///
/// H conjugates its first argument, so the positive Riemann form of the
/// lattice Phi(I) is -E and (e1, e2, -e3, -e4) is symplectic for it; Z is
/// the period matrix of that basis and lies in the upper half space.
pub fn period_matrix(k: &CMField, b: &SymplecticBasis, phi: &CMType, prec: u32) -> Result<PeriodPoint> {
    crate::ball::with_precision_retry(prec, prec * 16, |wp| {
        let em = |x: &NFElement, r: usize| k.embed(x, phi.0[r], wp + 32);
        let o1 = CMat2([[em(&b.e[0], 0), em(&b.e[1], 0)], [em(&b.e[0], 1), em(&b.e[1], 1)]]);
        let o2 = CMat2([[em(&b.e[2], 0), em(&b.e[3], 0)], [em(&b.e[2], 1), em(&b.e[3], 1)]]);
        let z = o1.inv()?.mul(&o2);
        let z = CMat2([[z.0[0][0].neg(), z.0[0][1].neg()], [z.0[1][0].neg(), z.0[1][1].neg()]]);
        if !z.0[0][1].overlaps(&z.0[1][0]) {
            return Err(Error::Failed("period matrix is not symmetric".into()));
        }
        let mut p = PeriodPoint::from_matrix(&z).set_prec(wp);
        p.basis = Some(b.e.clone());
        match p.is_y_positive() {
            Some(true) => Ok(p),
            Some(false) => Err(Error::Failed("Im Z is not positive definite".into())),
            None => Err(Error::Indeterminate("positivity of Im Z".into())),
        }
    })
}

/// The basis change matching Z -> M.Z: e' = e N with N = [[D^T, B^T], [C^T, A^T]].
pub fn basis_transform(m: &IntMatrix) -> IntMatrix {
    let mut n = IntMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            n[(i, j)] = m[(j + 2, i + 2)].clone();
            n[(i, j + 2)] = m[(j, i + 2)].clone();
            n[(i + 2, j)] = m[(j + 2, i)].clone();
            n[(i + 2, j + 2)] = m[(j, i)].clone();
        }
    }
    n
}

/// New symplectic basis after Z -> M.Z; the sign twist of `period_matrix`
/// is conjugated through, so the Gram matrix stays J.
pub fn transform_basis(k: &CMField, e: &[NFElement], m: &IntMatrix) -> Vec<NFElement> {
    let mut n = basis_transform(m);
    for i in 0..4 {
        for j in 0..4 {
            if (i < 2) != (j < 2) {
                n[(i, j)] = Integer::from(-&n[(i, j)]);
            }
        }
    }
    (0..4)
        .map(|j| {
            let mut acc = NFElement::integer(0, 4);
            for (i, ei) in e.iter().enumerate() {
                if n[(i, j)] != 0 {
                    acc = k.add(&acc, &k.scale(ei, &Rational::from(n[(i, j)].clone())));
                }
            }
            acc
        })
        .collect()
}

fn fl(b: &Ball) -> f64 {
    b.to_f64()
}

/// Cap on reduction steps.
pub const MAX_STEPS: usize = 10_000;

/// Reduction of a point into F_2. Decisions use the midpoints; moves in
/// (S3) are only applied when |det(CZ+D)| < 1 is certified, so det Y grows
/// strictly along the way. Z is recomputed from the input at every step.
pub fn reduce_to_f2(p: &PeriodPoint) -> Result<PeriodPoint> {
    let z0 = p.matrix();
    let mut m = IntMatrix::identity(4);
    let mut z = z0.clone();
    let fam = s3_family();
    let mut last_det = p.det_y();
    for _ in 0..MAX_STEPS {
        // (S2): Gauss reduction of Y by U in GL2(Z)
        for _ in 0..200 {
            let y = [fl(&z.0[0][0].imag()), fl(&z.0[0][1].imag()), fl(&z.0[1][1].imag())];
            let u = if y[0] > y[2] {
                [[0, 1], [1, 0]]
            } else {
                let r = (y[1] / y[0]).round();
                if r != 0.0 && (2.0 * y[1]).abs() > y[0] {
                    [[1, -(r as i64)], [0, 1]]
                } else if y[1] < 0.0 {
                    [[1, 0], [0, -1]]
                } else {
                    break;
                }
            };
            m = gl2_matrix(u).mul(&m);
            z = act(&m, &z0)?;
        }
        // (S1)
        let x = [fl(&z.0[0][0].real()), fl(&z.0[0][1].real()), fl(&z.0[1][1].real())];
        let t = |v: f64| -((v + 0.5).floor() as i64);
        let b = [[t(x[0]), t(x[1])], [t(x[1]), t(x[2])]];
        if b != [[0, 0], [0, 0]] {
            m = translation_matrix(b).mul(&m);
            z = act(&m, &z0)?;
        }
        // (S3)
        let mut best: Option<(f64, &IntMatrix)> = None;
        for g in &fam {
            let d = cz_plus_d_det(g, &z).abs();
            if d.lt_rat(&Rational::from(1)) == Some(true) {
                let v = fl(&d);
                if best.map_or(true, |(b, _)| v < b) {
                    best = Some((v, g));
                }
            }
        }
        let Some((_, g)) = best else {
            let mut out = PeriodPoint::from_matrix(&z);
            out.reduction_matrix = m.mul(&p.reduction_matrix);
            out.basis = p.basis.clone();
            out.boundary = !certify_f2(&out).certified;
            return Ok(out);
        };
        m = g.mul(&m);
        z = act(&m, &z0)?;
        let nd = PeriodPoint::from_matrix(&z).det_y();
        if nd.cmp_ball(&last_det) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::PrecisionExhausted { prec: p.prec() });
        }
        last_det = nd;
    }
    Err(Error::Failed("reduction step cap reached".into()))
}

/// Reduction of a CM point: the certificate found at low precision is
/// applied exactly to the symplectic basis and Z is recomputed at `prec`.
pub fn reduce_cm_point(k: &CMField, b: &SymplecticBasis, phi: &CMType, prec: u32) -> Result<PeriodPoint> {
    let low = period_matrix(k, b, phi, prec.min(192))?;
    let r = reduce_to_f2(&low)?;
    let e = transform_basis(k, &b.e, &r.reduction_matrix);
    let nb = SymplecticBasis { e };
    let mut p = period_matrix(k, &nb, phi, prec)?;
    p.reduction_matrix = r.reduction_matrix.clone();
    let c = certify_f2(&p);
    if !c.within_tolerance {
        // numerical trouble at low precision: reduce again from the new point
        let r2 = reduce_to_f2(&p)?;
        let e = transform_basis(k, &nb.e, &r2.reduction_matrix);
        let mut p2 = period_matrix(k, &SymplecticBasis { e }, phi, prec)?;
        p2.reduction_matrix = r2.reduction_matrix.mul(&r.reduction_matrix);
        p2.boundary = !certify_f2(&p2).certified;
        return Ok(p2);
    }
    p.boundary = !c.certified;
    Ok(p)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct F2Certificate {
    /// every condition holds strictly on the balls
    pub certified: bool,
    /// every condition holds up to the ball radii
    pub within_tolerance: bool,
}

/// Checks (S1), (S2) and (S3) against the finite family.
pub fn certify_f2(p: &PeriodPoint) -> F2Certificate {
    let half = Rational::from((1, 2));
    let mut cert = true;
    let mut tol = true;
    let mut le = |a: &Ball, b: &Ball| match b.sub(a).is_positive() {
        Some(true) => {}
        Some(false) => {
            cert = false;
            tol &= b.sub(a).contains_zero();
        }
        None => cert = false,
    };
    let [x1, x12, x2] = p.x();
    for x in [&x1, &x12, &x2] {
        let h = Ball::from_rat(p.prec(), &half);
        le(&x.abs(), &h);
    }
    let [y1, y12, y2] = p.y();
    let zero = Ball::zero(p.prec());
    le(&zero, &y12.mul_i64(2));
    le(&y12.mul_i64(2), &y1);
    le(&y1, &y2);
    let z = p.matrix();
    let one = Ball::from_i64(p.prec(), 1);
    for g in s3_family() {
        le(&one, &cz_plus_d_det(&g, &z).abs());
    }
    F2Certificate { certified: cert, within_tolerance: tol }
}

/// Spot check of (S3) against random symplectic matrices built from
/// bounded words in the generators; returns the number of violations.
pub fn random_s3_spot_check(p: &PeriodPoint, count: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = p.matrix();
    let mut bad = 0;
    for _ in 0..count {
        let mut m = IntMatrix::identity(4);
        let len = rng.gen_range(1..=4);
        for _ in 0..len {
            let g = match rng.gen_range(0..3) {
                0 => translation_matrix({
                    let b12 = rng.gen_range(-2..=2);
                    [[rng.gen_range(-2..=2), b12], [b12, rng.gen_range(-2..=2)]]
                }),
                1 => {
                    let choices = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 0]], [[1, -1], [0, 1]]];
                    gl2_matrix(choices[rng.gen_range(0..4)])
                }
                _ => block_matrix([[0, 0], [0, 0]], [[-1, 0], [0, -1]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]),
            };
            m = g.mul(&m);
        }
        let d = cz_plus_d_det(&m, &z).abs();
        if d.lt_rat(&Rational::from(1)) == Some(true) {
            // compare det Y: a genuine improvement is a violation
            if let Ok(w) = act(&m, &z) {
                let q = PeriodPoint::from_matrix(&w);
                if q.det_y().cmp_ball(&p.det_y()) == Some(std::cmp::Ordering::Greater) {
                    bad += 1;
                }
            }
        }
    }
    bad
}

/// Outcome of one certified comparison lhs <= rhs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    /// Some(true/false) when certified, None when undecidable
    pub holds: Option<bool>,
    /// rhs - lhs, midpoint
    pub slack: f64,
}

impl Check {
    pub fn le(lhs: &Ball, rhs: &Ball) -> Check {
        let d = rhs.sub(lhs);
        Check { holds: d.is_positive().or(if d.contains_zero() { None } else { Some(false) }), slack: d.to_f64() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IneqReport {
    /// y1 y2 <= (4/3) det Y
    pub a_y1y2: Check,
    /// det Y >= 9/16
    pub b_det_9_16: Check,
    /// det Y >= 9/8, reported only
    pub b_det_9_8: Check,
    /// |z12| >= (2/3) disc^{-1/2}
    pub c_z12: Check,
    /// Tr Y <= (2/3) (disc^{1/2} / N)^{1/2}
    pub d_trace: Check,
}

impl IneqReport {
    /// No certified violation of (a), (b at 9/16), (c), (d).
    pub fn certified_ok(&self) -> bool {
        [&self.a_y1y2, &self.b_det_9_16, &self.c_z12, &self.d_trace].iter().all(|c| c.holds != Some(false))
    }

    pub fn undecided(&self) -> bool {
        [&self.a_y1y2, &self.b_det_9_16, &self.c_z12, &self.d_trace].iter().any(|c| c.holds.is_none())
    }
}

/// The inequalities on a reduced CM point; `norm_inv` is the minimal norm
/// of an integral ideal in the class of I^{-1}.
pub fn check_inequalities(p: &PeriodPoint, disc: &Integer, norm_inv: &Integer) -> Result<IneqReport> {
    let prec = p.prec();
    let [y1, _, y2] = p.y();
    let dy = p.det_y();
    let a = Check::le(&y1.mul(&y2), &dy.mul_rat(&Rational::from((4, 3))));
    let b1 = Check::le(&Ball::from_rat(prec, &Rational::from((9, 16))), &dy);
    let b2 = Check::le(&Ball::from_rat(prec, &Rational::from((9, 8))), &dy);
    let d = Ball::from_int(prec, disc);
    let sd = d.sqrt()?;
    let c = Check::le(&sd.recip()?.mul_rat(&Rational::from((2, 3))), &p.z12.abs());
    let rhs = sd.div(&Ball::from_int(prec, norm_inv))?.sqrt()?.mul_rat(&Rational::from((2, 3)));
    let dd = Check::le(&p.trace_y(), &rhs);
    Ok(IneqReport { a_y1y2: a, b_det_9_16: b1, b_det_9_8: b2, c_z12: c, d_trace: dd })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(prec: u32, z: [(f64, f64); 3]) -> PeriodPoint {
        PeriodPoint::new(
            ComplexBall::from_f64(prec, z[0].0, z[0].1),
            ComplexBall::from_f64(prec, z[1].0, z[1].1),
            ComplexBall::from_f64(prec, z[2].0, z[2].1),
        )
    }

    #[test]
    fn family_is_symplectic() {
        for g in s3_family() {
            assert!(is_symplectic(&g));
        }
        assert!(is_symplectic(&gl2_matrix([[2, 1], [1, 1]])));
        assert!(is_symplectic(&translation_matrix([[1, -2], [-2, 3]])));
        assert_eq!(s3_family().len(), 33);
    }

    #[test]
    fn reduced_point_is_fixed() {
        let p = pt(128, [(0.1, 1.3), (0.23, 0.4), (-0.2, 1.7)]);
        let r = reduce_to_f2(&p).unwrap();
        assert_eq!(r.reduction_matrix, IntMatrix::identity(4));
        assert!(certify_f2(&r).certified);
    }

    #[test]
    fn round_trip() {
        let p = pt(256, [(0.1, 1.3), (0.23, 0.4), (-0.2, 1.7)]);
        let j = block_matrix([[0, 0], [0, 0]], [[-1, 0], [0, -1]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]);
        let m = j.mul(&translation_matrix([[1, 0], [0, 2]])).mul(&j).mul(&translation_matrix([[0, 1], [1, -1]]));
        let m = gl2_matrix([[1, 1], [0, 1]]).mul(&m).mul(&j);
        assert!(is_symplectic(&m));
        let w = act(&m, &p.matrix()).unwrap();
        let q = PeriodPoint::from_matrix(&w);
        let r = reduce_to_f2(&q).unwrap();
        assert!(is_symplectic(&r.reduction_matrix));
        for (a, b) in [(&r.z1, &p.z1), (&r.z12, &p.z12), (&r.z2, &p.z2)] {
            assert!(a.overlaps(b), "{:?} vs {:?}", a.to_f64(), b.to_f64());
        }
    }

    #[test]
    fn q_zeta5_point() {
        use crate::arith::ZPoly;
        use crate::ideal::FracIdeal;
        use crate::polarize::{find_polarizations, symplectic_basis};
        let k = CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        let phi = k.cm_types()[0];
        let t = find_polarizations(&k, &phi, &FracIdeal::unit()).unwrap().triples.remove(0);
        let b = symplectic_basis(&k, &t).unwrap();
        let p = period_matrix(&k, &b, &phi, 200).unwrap();
        assert!(p.z12.overlaps(&p.z12));
        let r = reduce_cm_point(&k, &b, &phi, 200).unwrap();
        assert!(certify_f2(&r).within_tolerance);
        assert!(is_symplectic(&r.reduction_matrix));
        // the reduced basis still satisfies Gram = J
        let e = r.basis.clone().unwrap();
        assert_eq!(crate::polarize::pairing_gram(&k, &t.xi, &e).unwrap(), crate::polarize::standard_j());
        // y2 / det Y = H(e1, e1)
        let h = crate::polarize::hermitian_form(&k, &t, &e[0], &e[0], 200).real();
        let [_, _, y2] = r.y();
        assert!(y2.div(&r.det_y()).unwrap().sub(&h).contains_zero());
        let rep = check_inequalities(&r, &Integer::from(125), &Integer::from(1)).unwrap();
        assert!(rep.certified_ok() && !rep.undecided(), "{:?}", rep);
        assert!(r.trace_y().to_f64() <= 2.0 / 3.0 * 125f64.powf(0.25));
        assert_eq!(random_s3_spot_check(&r, 2000, 1), 0);
    }

    #[test]
    fn basis_transform_matches_action() {
        let m = gl2_matrix([[1, 1], [0, 1]]).mul(&translation_matrix([[1, 0], [0, -1]]));
        let n = basis_transform(&m);
        assert!(is_symplectic(&n));
    }
}
