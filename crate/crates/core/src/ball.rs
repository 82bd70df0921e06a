//! Real and complex ball arithmetic over MPFR.
//!
//! A ball is a midpoint at working precision plus an absolute radius kept as
//! a short float rounded upwards. Every operation returns a ball containing
//! the exact image of every point of its inputs.

use crate::error::{Error, Result};
use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;

/// Precision of radii.
const MAGP: u32 = 30;

fn mag_zero() -> Float {
    Float::new(MAGP)
}

fn up<T>(v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(MAGP, v, Round::Up).0
}

fn down<T>(v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(MAGP, v, Round::Down).0
}

/// Upper bound for |x|.
fn abs_up(x: &Float) -> Float {
    up(x.as_abs().clone())
}

fn abs_down(x: &Float) -> Float {
    down(x.as_abs().clone())
}

/// Bound on the rounding error of a correctly rounded result at its precision.
fn rnd(x: &Float) -> Float {
    if x.is_zero() {
        return mag_zero();
    }
    let mut e = abs_up(x);
    e >>= x.prec() as i32 - 1;
    e
}

fn madd(a: &Float, b: &Float) -> Float {
    up(a + b)
}

fn mmul(a: &Float, b: &Float) -> Float {
    up(a * b)
}

/// Real ball.
#[derive(Clone, Debug)]
pub struct Ball {
    pub mid: Float,
    pub rad: Float,
}

/// Complex disk ball.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: Float,
    pub im: Float,
    pub rad: Float,
}

/// Run `f` at increasing precision until it stops reporting an undecided
/// predicate. Precision doubles from `start` up to `cap`.
pub fn with_precision_retry<T>(start: u32, cap: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut prec = start.max(32);
    loop {
        match f(prec) {
            Err(Error::Indeterminate(_)) => {
                if prec >= cap {
                    return Err(Error::PrecisionExhausted { prec });
                }
                prec = (prec * 2).min(cap);
            }
            r => return r,
        }
    }
}

impl Ball {
    pub fn exact(mid: Float) -> Ball {
        Ball { mid, rad: mag_zero() }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Float::new(prec))
    }

    pub fn from_i64(prec: u32, v: i64) -> Ball {
        let mid = Float::with_val(prec, v);
        let rad = rnd_if_inexact(&mid, &Rational::from(v));
        Ball { mid, rad }
    }

    pub fn from_int(prec: u32, v: &Integer) -> Ball {
        let mid = Float::with_val(prec, v);
        let rad = rnd_if_inexact(&mid, &Rational::from(v));
        Ball { mid, rad }
    }

    pub fn from_rat(prec: u32, v: &Rational) -> Ball {
        let mid = Float::with_val(prec, v);
        let rad = rnd_if_inexact(&mid, v);
        Ball { mid, rad }
    }

    pub fn from_f64(prec: u32, v: f64) -> Ball {
        Ball::exact(Float::with_val(prec, v))
    }

    pub fn with_rad(mid: Float, rad: &Float) -> Ball {
        Ball { mid, rad: up(rad) }
    }

    pub fn pi(prec: u32) -> Ball {
        let mid = Float::with_val(prec, Constant::Pi);
        let rad = rnd(&mid);
        Ball { mid, rad }
    }

    /// Euler's constant.
    pub fn euler_gamma(prec: u32) -> Ball {
        let mid = Float::with_val(prec, Constant::Euler);
        let rad = rnd(&mid);
        Ball { mid, rad }
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid + &self.rad, Round::Up).0
    }

    pub fn lower_f64(&self) -> f64 {
        self.lower().to_f64_round(Round::Down)
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper().to_f64_round(Round::Up)
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    /// Some(true) if certainly > 0, Some(false) if certainly <= 0.
    pub fn is_positive(&self) -> Option<bool> {
        if !self.is_finite() {
            return None;
        }
        if self.lower() > 0 {
            Some(true)
        } else if self.upper() <= 0 {
            Some(false)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lower() <= 0 && self.upper() >= 0
    }

    /// Certified comparison, None if the balls overlap.
    pub fn cmp_ball(&self, o: &Ball) -> Option<Ordering> {
        let d = self.sub(o);
        match d.is_positive() {
            Some(true) => Some(Ordering::Greater),
            _ => {
                if d.upper() < 0 {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
        }
    }

    /// Certified `self < x` for an exact rational.
    pub fn lt_rat(&self, x: &Rational) -> Option<bool> {
        let hi = self.upper();
        let lo = self.lower();
        if !hi.is_finite() || !lo.is_finite() {
            return None;
        }
        let hi = hi.to_rational().unwrap();
        let lo = lo.to_rational().unwrap();
        if hi < *x {
            Some(true)
        } else if lo >= *x {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self > x`.
    pub fn gt_rat(&self, x: &Rational) -> Option<bool> {
        self.neg().lt_rat(&Rational::from(-x))
    }

    pub fn contains_rat(&self, x: &Rational) -> bool {
        if !self.is_finite() {
            return true;
        }
        let m = self.mid.to_rational().unwrap();
        let r = self.rad.to_rational().unwrap();
        Rational::from(x - &m).abs() <= r
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn abs(&self) -> Ball {
        Ball { mid: self.mid.clone().abs(), rad: self.rad.clone() }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let p = self.prec().max(o.prec());
        let mid = Float::with_val(p, &self.mid + &o.mid);
        let rad = madd(&madd(&self.rad, &o.rad), &rnd(&mid));
        Ball { mid, rad }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let p = self.prec().max(o.prec());
        let mid = Float::with_val(p, &self.mid * &o.mid);
        let r = madd(
            &madd(&mmul(&abs_up(&self.mid), &o.rad), &mmul(&abs_up(&o.mid), &self.rad)),
            &mmul(&self.rad, &o.rad),
        );
        Ball { rad: madd(&r, &rnd(&mid)), mid }
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(self.prec(), k))
    }

    pub fn mul_rat(&self, q: &Rational) -> Ball {
        self.mul(&Ball::from_rat(self.prec(), q))
    }

    /// Multiply by 2^k exactly.
    pub fn mul_2exp(&self, k: i32) -> Ball {
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        if k >= 0 {
            mid <<= k;
            rad <<= k;
        } else {
            mid >>= -k;
            rad >>= -k;
        }
        Ball { mid, rad }
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn recip(&self) -> Result<Ball> {
        let am = abs_down(&self.mid);
        let gap = down(&am - &self.rad);
        if !(gap > 0) || !self.is_finite() {
            return Err(Error::Indeterminate("reciprocal of a ball containing zero".into()));
        }
        let mid = Float::with_val(self.prec(), self.mid.clone().recip_ref());
        let den = down(&am * &gap);
        let r = up(&self.rad / &den);
        Ok(Ball { rad: madd(&r, &rnd(&mid)), mid })
    }

    pub fn div(&self, o: &Ball) -> Result<Ball> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn sqrt(&self) -> Result<Ball> {
        let lo = self.lower();
        if lo < 0 {
            if self.upper() < 0 {
                return Err(Error::Domain("square root of a negative ball".into()));
            }
            return Err(Error::Indeterminate("square root of a ball straddling zero".into()));
        }
        let mid = Float::with_val(self.prec(), self.mid.sqrt_ref());
        // |sqrt(m+d) - sqrt(m)| <= r / sqrt(lo) and <= sqrt(r)
        let r = if lo > 0 {
            let s = down(Float::with_val_round(MAGP, lo.sqrt_ref(), Round::Down).0);
            let a = up(&self.rad / &s);
            let b = up(self.rad.sqrt_ref());
            if a < b {
                a
            } else {
                b
            }
        } else {
            up(self.rad.sqrt_ref())
        };
        Ok(Ball { rad: madd(&r, &rnd(&mid)), mid })
    }

    pub fn exp(&self) -> Ball {
        let mid = Float::with_val(self.prec(), self.mid.exp_ref());
        let eup = madd(&abs_up(&mid), &rnd(&mid));
        let em1 = up(self.rad.exp_m1_ref());
        let r = mmul(&eup, &em1);
        Ball { rad: madd(&r, &rnd(&mid)), mid }
    }

    pub fn log(&self) -> Result<Ball> {
        let lo = self.lower();
        if !(lo > 0) {
            if self.upper() <= 0 {
                return Err(Error::Domain("logarithm of a nonpositive ball".into()));
            }
            return Err(Error::Indeterminate("logarithm of a ball touching zero".into()));
        }
        let mid = Float::with_val(self.prec(), self.mid.ln_ref());
        let r = up(&self.rad / &down(&lo));
        Ok(Ball { rad: madd(&r, &rnd(&mid)), mid })
    }

    pub fn sin(&self) -> Ball {
        let mid = Float::with_val(self.prec(), self.mid.sin_ref());
        let rad = madd(&self.rad, &rnd(&mid));
        Ball { mid, rad }
    }

    pub fn cos(&self) -> Ball {
        let mid = Float::with_val(self.prec(), self.mid.cos_ref());
        let rad = madd(&self.rad, &rnd(&mid));
        Ball { mid, rad }
    }

    pub fn pow_u(&self, n: u32) -> Ball {
        let mut r = Ball::from_i64(self.prec(), 1);
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.sqr();
            }
        }
        r
    }

    /// x^y for x > 0.
    pub fn pow(&self, y: &Ball) -> Result<Ball> {
        Ok(self.log()?.mul(y).exp())
    }

    pub fn max(&self, o: &Ball) -> Ball {
        // enclosure of max over both balls
        let hi = if self.upper() > o.upper() { self.upper() } else { o.upper() };
        let lo = if self.lower() > o.lower() { self.lower() } else { o.lower() };
        Ball::from_endpoints(&lo, &hi)
    }

    pub fn min(&self, o: &Ball) -> Ball {
        self.neg().max(&o.neg()).neg()
    }

    /// Ball enclosing [lo, hi].
    pub fn from_endpoints(lo: &Float, hi: &Float) -> Ball {
        let p = lo.prec().max(hi.prec());
        let mid = Float::with_val(p, lo + hi) / 2u32;
        let r1 = up(&mid - lo);
        let r2 = up(hi - &mid);
        let rad = if r1 > r2 { r1 } else { r2 };
        Ball { rad: madd(&rad, &rnd(&mid)), mid }
    }

    /// Smallest ball containing both.
    pub fn union(&self, o: &Ball) -> Ball {
        let lo = if self.lower() < o.lower() { self.lower() } else { o.lower() };
        let hi = if self.upper() > o.upper() { self.upper() } else { o.upper() };
        Ball::from_endpoints(&lo, &hi)
    }

    /// Enlarge the radius by a nonnegative bound.
    pub fn add_error(&self, e: &Float) -> Ball {
        Ball { mid: self.mid.clone(), rad: madd(&self.rad, &up(e.as_abs().clone())) }
    }

    /// Integers contained in the ball, if there are at most `limit`.
    pub fn integers_inside(&self, limit: u32) -> Option<Vec<Integer>> {
        let lo = self.lower().ceil();
        let hi = self.upper().floor();
        if !lo.is_finite() || !hi.is_finite() {
            return None;
        }
        let lo = lo.to_integer()?;
        let hi = hi.to_integer()?;
        if hi < lo {
            return Some(vec![]);
        }
        if Integer::from(&hi - &lo) >= limit {
            return None;
        }
        let mut v = Vec::new();
        let mut k = lo;
        while k <= hi {
            v.push(k.clone());
            k += 1;
        }
        Some(v)
    }

    pub fn set_prec(&self, prec: u32) -> Ball {
        let mid = Float::with_val(prec, &self.mid);
        let extra = if prec < self.prec() { rnd(&mid) } else { mag_zero() };
        Ball { rad: madd(&self.rad, &extra), mid }
    }

    /// Number of correct bits relative to the midpoint (rough).
    pub fn rel_accuracy_bits(&self) -> i64 {
        if self.rad.is_zero() {
            return self.prec() as i64;
        }
        if self.mid.is_zero() {
            return 0;
        }
        let m = self.mid.get_exp().unwrap_or(0) as i64;
        let r = self.rad.get_exp().unwrap_or(0) as i64;
        m - r
    }
}

fn rnd_if_inexact(mid: &Float, exact: &Rational) -> Float {
    match mid.to_rational() {
        Some(q) if q == *exact => mag_zero(),
        _ => rnd(mid),
    }
}

impl ComplexBall {
    pub fn zero(prec: u32) -> ComplexBall {
        ComplexBall { re: Float::new(prec), im: Float::new(prec), rad: mag_zero() }
    }

    pub fn one(prec: u32) -> ComplexBall {
        ComplexBall::from_real(&Ball::from_i64(prec, 1))
    }

    pub fn i(prec: u32) -> ComplexBall {
        ComplexBall { re: Float::new(prec), im: Float::with_val(prec, 1), rad: mag_zero() }
    }

    pub fn from_real(b: &Ball) -> ComplexBall {
        ComplexBall { re: b.mid.clone(), im: Float::new(b.prec()), rad: b.rad.clone() }
    }

    pub fn from_parts(re: &Ball, im: &Ball) -> ComplexBall {
        ComplexBall { re: re.mid.clone(), im: im.mid.clone(), rad: madd(&re.rad, &im.rad) }
    }

    pub fn from_rat(prec: u32, re: &Rational, im: &Rational) -> ComplexBall {
        ComplexBall::from_parts(&Ball::from_rat(prec, re), &Ball::from_rat(prec, im))
    }

    pub fn from_i64(prec: u32, re: i64, im: i64) -> ComplexBall {
        ComplexBall::from_parts(&Ball::from_i64(prec, re), &Ball::from_i64(prec, im))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> ComplexBall {
        ComplexBall { re: Float::with_val(prec, re), im: Float::with_val(prec, im), rad: mag_zero() }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn real(&self) -> Ball {
        Ball { mid: self.re.clone(), rad: self.rad.clone() }
    }

    pub fn imag(&self) -> Ball {
        Ball { mid: self.im.clone(), rad: self.rad.clone() }
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite() && self.rad.is_finite()
    }

    pub fn add_error(&self, e: &Float) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.clone(), rad: madd(&self.rad, &up(e.as_abs().clone())) }
    }

    /// Upper bound of |mid|.
    fn mid_abs_up(&self) -> Float {
        up(Float::with_val(MAGP + 8, self.re.hypot_ref(&self.im)))
    }

    fn mid_abs_down(&self) -> Float {
        down(Float::with_val_round(MAGP + 8, self.re.hypot_ref(&self.im), Round::Down).0)
    }

    /// Upper bound of |z| over the ball.
    pub fn abs_upper(&self) -> Float {
        madd(&self.mid_abs_up(), &self.rad)
    }

    pub fn abs(&self) -> Ball {
        let mid = Float::with_val(self.prec(), self.re.hypot_ref(&self.im));
        let rad = madd(&self.rad, &rnd(&mid));
        Ball { mid, rad }
    }

    pub fn contains_zero(&self) -> bool {
        !(self.mid_abs_down() > self.rad)
    }

    pub fn contains(&self, re: &Rational, im: &Rational) -> bool {
        if !self.is_finite() {
            return true;
        }
        let mr = self.re.to_rational().unwrap();
        let mi = self.im.to_rational().unwrap();
        let r = self.rad.to_rational().unwrap();
        let dr = Rational::from(re - &mr);
        let di = Rational::from(im - &mi);
        dr.clone() * &dr + di.clone() * &di <= r.clone() * &r
    }

    /// True if the two balls intersect.
    pub fn overlaps(&self, o: &ComplexBall) -> bool {
        self.sub(o).contains_zero()
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: Float::with_val(self.prec(), -&self.re), im: Float::with_val(self.prec(), -&self.im), rad: self.rad.clone() }
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im), rad: self.rad.clone() }
    }

    pub fn mul_i(&self) -> ComplexBall {
        ComplexBall { re: Float::with_val(self.prec(), -&self.im), im: self.re.clone(), rad: self.rad.clone() }
    }

    /// Multiply by i^k.
    pub fn mul_i_pow(&self, k: u32) -> ComplexBall {
        match k % 4 {
            0 => self.clone(),
            1 => self.mul_i(),
            2 => self.neg(),
            _ => self.mul_i().neg(),
        }
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        let p = self.prec().max(o.prec());
        let re = Float::with_val(p, &self.re + &o.re);
        let im = Float::with_val(p, &self.im + &o.im);
        let rad = madd(&madd(&self.rad, &o.rad), &madd(&rnd(&re), &rnd(&im)));
        ComplexBall { re, im, rad }
    }

    pub fn sub(&self, o: &ComplexBall) -> ComplexBall {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        let p = self.prec().max(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        let re = Float::with_val(p, &ac - &bd);
        let im = Float::with_val(p, &ad + &bc);
        let mut err = madd(&madd(&rnd(&ac), &rnd(&bd)), &madd(&rnd(&ad), &rnd(&bc)));
        err = madd(&err, &madd(&rnd(&re), &rnd(&im)));
        let prop = madd(
            &madd(&mmul(&self.mid_abs_up(), &o.rad), &mmul(&o.mid_abs_up(), &self.rad)),
            &mmul(&self.rad, &o.rad),
        );
        ComplexBall { re, im, rad: madd(&err, &prop) }
    }

    pub fn mul_real(&self, b: &Ball) -> ComplexBall {
        let p = self.prec().max(b.prec());
        let re = Float::with_val(p, &self.re * &b.mid);
        let im = Float::with_val(p, &self.im * &b.mid);
        let err = madd(&rnd(&re), &rnd(&im));
        let prop = madd(
            &madd(&mmul(&self.mid_abs_up(), &b.rad), &mmul(&abs_up(&b.mid), &self.rad)),
            &mmul(&self.rad, &b.rad),
        );
        ComplexBall { re, im, rad: madd(&err, &prop) }
    }

    pub fn mul_i64(&self, k: i64) -> ComplexBall {
        self.mul_real(&Ball::from_i64(self.prec(), k))
    }

    pub fn mul_rat(&self, q: &Rational) -> ComplexBall {
        self.mul_real(&Ball::from_rat(self.prec(), q))
    }

    pub fn mul_2exp(&self, k: i32) -> ComplexBall {
        let (mut re, mut im, mut rad) = (self.re.clone(), self.im.clone(), self.rad.clone());
        if k >= 0 {
            re <<= k;
            im <<= k;
            rad <<= k;
        } else {
            re >>= -k;
            im >>= -k;
            rad >>= -k;
        }
        ComplexBall { re, im, rad }
    }

    pub fn sqr(&self) -> ComplexBall {
        self.mul(self)
    }

    pub fn pow_u(&self, n: u32) -> ComplexBall {
        let mut r = ComplexBall::one(self.prec());
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.sqr();
            }
        }
        r
    }

    pub fn recip(&self) -> Result<ComplexBall> {
        let am = self.mid_abs_down();
        let gap = down(&am - &self.rad);
        if !(gap > 0) || !self.is_finite() {
            return Err(Error::Indeterminate("reciprocal of a complex ball containing zero".into()));
        }
        let p = self.prec();
        let n2 = Float::with_val(p, self.re.clone().square() + self.im.clone().square());
        let re = Float::with_val(p, &self.re / &n2);
        let im = Float::with_val(p, -Float::with_val(p, &self.im / &n2));
        // relative rounding: n2 has three roundings, quotients one more each
        let rel = {
            let mut e = Float::with_val(MAGP, 1u32);
            e >>= p as i32 - 4;
            e
        };
        let inv_up = up(Float::with_val(MAGP, 1u32) / &am);
        let err = mmul(&mmul(&inv_up, &rel), &Float::with_val(MAGP, 2u32));
        let prop = up(&self.rad / &down(&am * &gap));
        Ok(ComplexBall { re, im, rad: madd(&err, &prop) })
    }

    pub fn div(&self, o: &ComplexBall) -> Result<ComplexBall> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn exp(&self) -> ComplexBall {
        let p = self.prec();
        let ea = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        let re = Float::with_val(p, &ea * &c);
        let im = Float::with_val(p, &ea * &s);
        let eup = madd(&abs_up(&ea), &rnd(&ea));
        let mut e8 = eup.clone();
        e8 >>= p as i32 - 3;
        let prop = mmul(&eup, &up(self.rad.exp_m1_ref()));
        ComplexBall { re, im, rad: madd(&e8, &prop) }
    }

    /// exp(i*pi*q).
    pub fn exp_pi_i(&self) -> ComplexBall {
        let pi = Ball::pi(self.prec());
        self.mul_real(&pi).mul_i().exp()
    }

    /// Principal square root; requires the ball to avoid the negative real axis.
    pub fn sqrt(&self) -> Result<ComplexBall> {
        let p = self.prec();
        let lo_re = Float::with_val_round(p, &self.re - &self.rad, Round::Down).0;
        if lo_re <= 0 {
            let hi_abs_im = Float::with_val_round(p, self.im.as_abs().clone() - &self.rad, Round::Down).0;
            if hi_abs_im <= 0 {
                return Err(Error::Indeterminate("square root near the branch cut".into()));
            }
        }
        // midpoint via polar form
        let r = Float::with_val(p + 10, self.re.hypot_ref(&self.im));
        let sr = Float::with_val(p + 10, (Float::with_val(p + 10, &r + &self.re) / 2u32).sqrt());
        let si = Float::with_val(p + 10, (Float::with_val(p + 10, &r - &self.re) / 2u32).sqrt());
        let si = if self.im < 0 { -si } else { si };
        let re = Float::with_val(p, &sr);
        let im = Float::with_val(p, &si);
        // |sqrt(z+d)-sqrt(z)| <= |d| / (|sqrt(z+d)|+|sqrt(z)|) <= r / sqrt(|z|-r)
        let am = self.mid_abs_down();
        let gap = down(&am - &self.rad);
        if !(gap > 0) {
            return Err(Error::Indeterminate("square root of a ball containing zero".into()));
        }
        let prop = up(&self.rad / &down(gap.sqrt_ref()));
        let mut err = up(Float::with_val(MAGP, am.sqrt_ref()) * 2u32);
        err >>= p as i32 - 6;
        Ok(ComplexBall { re, im, rad: madd(&prop, &err) })
    }

    pub fn set_prec(&self, prec: u32) -> ComplexBall {
        let re = Float::with_val(prec, &self.re);
        let im = Float::with_val(prec, &self.im);
        let extra = if prec < self.prec() { madd(&rnd(&re), &rnd(&im)) } else { mag_zero() };
        ComplexBall { rad: madd(&self.rad, &extra), re, im }
    }

    /// Ball containing both inputs.
    pub fn union(&self, o: &ComplexBall) -> ComplexBall {
        let p = self.prec();
        let re = Float::with_val(p, &self.re + &o.re) / 2u32;
        let im = Float::with_val(p, &self.im + &o.im) / 2u32;
        let c = ComplexBall { re: re.clone(), im: im.clone(), rad: mag_zero() };
        let d1 = madd(&self.sub(&c).abs_upper(), &Float::with_val(MAGP, 0));
        let d2 = o.sub(&c).abs_upper();
        let rad = if d1 > d2 { d1 } else { d2 };
        ComplexBall { re, im, rad: madd(&rad, &madd(&rnd(&c.re), &rnd(&c.im))) }
    }

    /// Gaussian integers within the ball when there are few of them.
    pub fn gaussian_integers_inside(&self, limit: u32) -> Option<Vec<(Integer, Integer)>> {
        let rr = self.real().integers_inside(limit)?;
        let ii = self.imag().integers_inside(limit)?;
        let mut out = Vec::new();
        for a in &rr {
            for b in &ii {
                if self.contains(&Rational::from(a), &Rational::from(b)) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        Some(out)
    }
}

/// The value exp(i*pi*q).
pub fn ball_exp_pi_i(q: &ComplexBall) -> ComplexBall {
    q.exp_pi_i()
}

/// log(x) for a positive rational as a ball.
pub fn log_rat(prec: u32, x: &Rational) -> Result<Ball> {
    Ball::from_rat(prec, x).log()
}

/// Log of a positive integer.
pub fn log_int(prec: u32, x: &Integer) -> Result<Ball> {
    Ball::from_int(prec, x).log()
}

/// x^(1/n) for x > 0.
pub fn root_n(x: &Ball, n: u32) -> Result<Ball> {
    Ok(x.log()?.mul_rat(&Rational::from((1, n))).exp())
}

/// Upper bound as rational, for reporting.
pub fn upper_rat(b: &Ball) -> Option<Rational> {
    b.upper().to_rational()
}

pub fn float_pow(x: &Float, n: i32) -> Float {
    Float::with_val(x.prec(), x.pow(n))
}

// Serialized form keeps the midpoint exactly (shortest round-trip decimal at
// the stored precision) and the radius rounded up, so reloaded balls still
// enclose the same values.
#[derive(serde::Serialize, serde::Deserialize)]
struct BallRepr {
    prec: u32,
    mid: String,
    rad: String,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ComplexBallRepr {
    prec: u32,
    re: String,
    im: String,
    rad: String,
}

// Round-trip digits; radii are printed upward so the string never undercuts them.
fn float_str(x: &Float, round: Round) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        x.to_string_radix_round(10, None, round)
    }
}

fn parse_float<E: serde::de::Error>(prec: u32, s: &str, round: Round) -> std::result::Result<Float, E> {
    let p = Float::parse(s).map_err(E::custom)?;
    Ok(Float::with_val_round(prec, p, round).0)
}

impl serde::Serialize for Ball {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BallRepr { prec: self.prec(), mid: float_str(&self.mid, Round::Nearest), rad: float_str(&self.rad, Round::Up) }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Ball {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Ball, D::Error> {
        let r = BallRepr::deserialize(d)?;
        Ok(Ball { mid: parse_float(r.prec, &r.mid, Round::Nearest)?, rad: parse_float(MAGP, &r.rad, Round::Nearest)? })
    }
}

impl serde::Serialize for ComplexBall {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexBallRepr { prec: self.prec(), re: float_str(&self.re, Round::Nearest), im: float_str(&self.im, Round::Nearest), rad: float_str(&self.rad, Round::Up) }
            .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for ComplexBall {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<ComplexBall, D::Error> {
        let r = ComplexBallRepr::deserialize(d)?;
        Ok(ComplexBall {
            re: parse_float(r.prec, &r.re, Round::Nearest)?,
            im: parse_float(r.prec, &r.im, Round::Nearest)?,
            rad: parse_float(MAGP, &r.rad, Round::Nearest)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_round_trip() {
        let b = Ball::pi(200).div(&Ball::from_i64(200, 7)).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        let c: Ball = serde_json::from_str(&s).unwrap();
        assert_eq!((c.mid.clone(), c.rad.clone()), (b.mid.clone(), b.rad.clone()));
        let z = ComplexBall::from_parts(&b, &b.neg()).exp();
        let w: ComplexBall = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        assert_eq!((w.re.clone(), w.im.clone()), (z.re.clone(), z.im.clone()));
        assert_eq!(w.rad, z.rad);
    }

    #[test]
    fn exp_pi_i_examples() {
        let p = 128;
        let z = ComplexBall::zero(p).exp_pi_i();
        assert!(z.contains(&Rational::from(1), &Rational::new()));
        let z = ComplexBall::from_i64(p, 1, 0).exp_pi_i();
        assert!(z.contains(&Rational::from(-1), &Rational::new()));
        assert!(z.rad_f64() < 1e-30);
        let z = ComplexBall::from_i64(p, 0, 1).exp_pi_i();
        let e = Float::with_val(300, -Float::with_val(300, Constant::Pi)).exp();
        assert!(z.contains(&e.to_rational().unwrap(), &Rational::new()));
        assert!((z.re.to_f64() - 0.0432139).abs() < 1e-7);
    }

    #[test]
    fn retry_driver() {
        let mut seen = vec![];
        let r = with_precision_retry(64, 512, |p| {
            seen.push(p);
            if p < 256 {
                Err(Error::Indeterminate("x".into()))
            } else {
                Ok(p)
            }
        });
        assert_eq!(r, Ok(256));
        assert_eq!(seen, vec![64, 128, 256]);
        let r: Result<u32> = with_precision_retry(64, 128, |_| Err(Error::Indeterminate("x".into())));
        assert_eq!(r, Err(Error::PrecisionExhausted { prec: 128 }));
    }

    #[test]
    fn recip_and_sqrt() {
        let p = 100;
        let z = ComplexBall::from_i64(p, 3, 4);
        let w = z.recip().unwrap();
        assert!(w.contains(&Rational::from((3, 25)), &Rational::from((-4, 25))));
        let s = ComplexBall::from_i64(p, -3, 4).sqrt().unwrap();
        assert!(s.contains(&Rational::from(1), &Rational::from(2)));
        let b = Ball::from_i64(p, 2).sqrt().unwrap();
        assert!(b.sqr().contains_rat(&Rational::from(2)));
        assert!(Ball::zero(p).recip().is_err());
    }
}
