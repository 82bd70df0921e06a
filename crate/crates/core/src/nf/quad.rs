//! Real quadratic fields: fundamental unit and class number.

use crate::arith::{fundamental_discriminant, Integer};
use crate::ball::Ball;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealQuadField {
    #[serde(with = "crate::serde_int")]
    pub disc: Integer,
    /// Fundamental unit (t + u sqrt(D)) / 2 with t, u > 0.
    #[serde(with = "crate::serde_int")]
    pub eps_t: Integer,
    #[serde(with = "crate::serde_int")]
    pub eps_u: Integer,
    pub eps_norm: i32,
    pub h: u64,
    pub h_plus: u64,
}

impl RealQuadField {
    /// log of the fundamental unit.
    pub fn regulator(&self, prec: u32) -> Ball {
        let sd = Ball::from_int(prec, &self.disc).sqrt().unwrap();
        let e = Ball::from_int(prec, &self.eps_t).add(&sd.mul(&Ball::from_int(prec, &self.eps_u))).mul_2exp(-1);
        e.log().unwrap()
    }

    pub fn eps_ball(&self, prec: u32) -> Ball {
        let sd = Ball::from_int(prec, &self.disc).sqrt().unwrap();
        Ball::from_int(prec, &self.eps_t).add(&sd.mul(&Ball::from_int(prec, &self.eps_u))).mul_2exp(-1)
    }

    /// 2-rank of the class group of F, by genus theory.
    pub fn two_rank_cl(&self) -> u32 {
        let f = crate::arith::factor_integer(&self.disc);
        let t = f.len() as u32;
        let sum_of_squares = f.iter().all(|(p, _)| p.mod_u(4) != 3);
        if sum_of_squares {
            t - 1
        } else {
            t.saturating_sub(2)
        }
    }
}

pub fn is_fundamental_discriminant(d: &Integer) -> bool {
    if *d == 1 || *d == 0 {
        return false;
    }
    fundamental_discriminant(d) == *d
}

/// Fundamental unit and class number of Q(sqrt(D)) for a positive
/// fundamental discriminant D.
pub fn real_quad_data(d: &Integer) -> Result<RealQuadField> {
    if *d <= 1 || !is_fundamental_discriminant(d) {
        return Err(Error::Domain(format!("{} is not a positive fundamental discriminant", d)));
    }
    let s = Integer::from(d.mod_u(2));
    let sq = d.clone().sqrt();
    let tr = s.clone();
    let nm = Integer::from(&s * &s - d) / 4;
    // continued fraction of omega = (s + sqrt D)/2 as (P + sqrt D)/Q
    let mut pp = s.clone();
    let mut qq = Integer::from(2);
    let (mut p0, mut p1) = (Integer::from(1), Integer::new());
    let (mut q0, mut q1) = (Integer::new(), Integer::from(1));
    let (t, u, norm) = loop {
        let a = Integer::from(&pp + &sq).div_rem_floor(qq.clone()).0;
        let p2 = Integer::from(&a * &p0) + &p1;
        let q2 = Integer::from(&a * &q0) + &q1;
        p1 = std::mem::replace(&mut p0, p2);
        q1 = std::mem::replace(&mut q0, q2);
        // norm of p - q*omega
        let n: Integer = Integer::from(&p0 * &p0) - Integer::from(&p0 * &q0) * &tr + Integer::from(&q0 * &q0) * &nm;
        if n == 1 || n == -1 {
            let t = Integer::from(&p0 * 2) - Integer::from(&q0 * &s);
            break (t, q0.clone(), n.to_i32().unwrap());
        }
        let np = Integer::from(&a * &qq) - &pp;
        let nq = (Integer::from(d - &np * &np)) / &qq;
        pp = np;
        qq = nq;
    };
    let h_plus = narrow_class_number(d);
    let h = if norm == -1 { h_plus } else { h_plus / 2 };
    Ok(RealQuadField { disc: d.clone(), eps_t: t, eps_u: u, eps_norm: norm, h, h_plus })
}

/// Number of cycles of reduced indefinite forms of discriminant D.
pub fn narrow_class_number(d: &Integer) -> u64 {
    let s = d.clone().sqrt();
    let reduced = |a: &Integer, b: &Integer| -> bool {
        // sqrt(D) - b < 2|a| < sqrt(D) + b, with 0 < b < sqrt(D)
        let ta = Integer::from(a.abs_ref()) * 2;
        *b > 0 && *b <= s && Integer::from(&s - b) < ta && ta <= Integer::from(&s + b)
    };
    let mut forms: Vec<(Integer, Integer, Integer)> = Vec::new();
    let mut b = Integer::from(d.mod_u(2));
    if b == 0 {
        b = Integer::from(2);
    }
    while b <= s {
        let ac: Integer = Integer::from(&b * &b - d) / 4;
        let m = ac.clone().abs();
        let mut a = Integer::from(1);
        while a <= m {
            if m.is_divisible(&a) {
                for sa in [a.clone(), -a.clone()] {
                    let c = Integer::from(&ac / &sa);
                    if reduced(&sa, &b) {
                        forms.push((sa, b.clone(), c));
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    let rho = |f: &(Integer, Integer, Integer)| -> (Integer, Integer, Integer) {
        let (_, b, c) = f;
        let m: Integer = Integer::from(c.abs_ref()) * 2;
        // b' = -b mod 2|c| in the window [s - 2|c| + 1, s]
        let lo = Integer::from(&s - &m) + 1;
        let nb = Integer::from(-b);
        let k = Integer::from(&lo - &nb).div_rem_ceil(m.clone()).0;
        let b2 = nb + k * &m;
        let c2 = Integer::from(&b2 * &b2 - d) / (Integer::from(c * 4));
        (c.clone(), b2, c2)
    };
    let mut seen = std::collections::HashSet::new();
    let mut cycles = 0u64;
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        cycles += 1;
        let mut g = f.clone();
        let mut guard = 0;
        while seen.insert(g.clone()) {
            g = rho(&g);
            guard += 1;
            if guard > 1_000_000 {
                break;
            }
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f = real_quad_data(&Integer::from(5)).unwrap();
        assert_eq!((f.eps_t.to_i64().unwrap(), f.eps_u.to_i64().unwrap(), f.eps_norm, f.h), (1, 1, -1, 1));
        assert!((f.regulator(64).to_f64() - 0.4812118250596034).abs() < 1e-15);
        let f = real_quad_data(&Integer::from(8)).unwrap();
        // 1 + sqrt 2 = (2 + 1*sqrt 8)/2
        assert_eq!((f.eps_t.to_i64().unwrap(), f.eps_u.to_i64().unwrap(), f.h), (2, 1, 1));
        let f = real_quad_data(&Integer::from(40)).unwrap();
        assert_eq!(f.h, 2);
        let f = real_quad_data(&Integer::from(12)).unwrap();
        // 2 + sqrt 3 = (4 + 1*sqrt 12)/2, norm +1, h = 1, h+ = 2
        assert_eq!((f.eps_t.to_i64().unwrap(), f.eps_norm, f.h, f.h_plus), (4, 1, 1, 2));
        assert!(real_quad_data(&Integer::from(20)).is_err());
        assert_eq!(real_quad_data(&Integer::from(229)).unwrap().h, 3);
    }
}
