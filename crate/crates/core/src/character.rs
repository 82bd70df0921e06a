//! Quartic Dirichlet characters attached to cyclic quartic CM fields.

use crate::arith::{is_prime_u64, modp, Integer};
use crate::error::{Error, Result};
use crate::nf::{modp_pow, CMField};
use serde::{Deserialize, Serialize};

/// A Dirichlet character of order dividing 4. `table[a]` is k with
/// chi(a) = i^k, or -1 when gcd(a, modulus) > 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuarticCharacter {
    pub modulus: u64,
    pub table: Vec<i8>,
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl QuarticCharacter {
    pub fn value(&self, a: u64) -> Option<u8> {
        let t = self.table[(a % self.modulus) as usize];
        if t < 0 {
            None
        } else {
            Some(t as u8)
        }
    }

    pub fn value_i64(&self, a: i64) -> Option<u8> {
        self.value(a.rem_euclid(self.modulus as i64) as u64)
    }

    pub fn order(&self) -> u32 {
        let mut o = 1;
        for &t in &self.table {
            if t >= 0 {
                let ord = match t % 4 {
                    0 => 1,
                    2 => 2,
                    _ => 4,
                };
                o = o.max(ord);
            }
        }
        o
    }

    pub fn is_odd(&self) -> bool {
        self.value(self.modulus - 1) == Some(2)
    }

    pub fn pow(&self, e: u32) -> QuarticCharacter {
        QuarticCharacter {
            modulus: self.modulus,
            table: self.table.iter().map(|&t| if t < 0 { t } else { ((t as u32 * e) % 4) as i8 }).collect(),
        }
    }

    pub fn conj(&self) -> QuarticCharacter {
        self.pow(3)
    }

    /// Conductor: the least divisor d of the modulus with chi trivial on
    /// units congruent to 1 mod d.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus;
        let mut divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        divs.sort();
        for d in divs {
            let ok = (0..n).all(|a| a % d != 1 % d || self.table[a as usize] < 0 || self.table[a as usize] == 0);
            if ok {
                return d;
            }
        }
        n
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// f * B_{1,chi} = sum chi(a) a over 0 < a < f, as a Gaussian integer.
    pub fn bernoulli_numerator(&self) -> (Integer, Integer) {
        let (mut re, mut im) = (Integer::new(), Integer::new());
        for a in 1..self.modulus {
            match self.value(a) {
                Some(0) => re += a,
                Some(1) => im += a,
                Some(2) => re -= a,
                Some(3) => im -= a,
                _ => {}
            }
        }
        (re, im)
    }

    /// Lexicographic comparison key used to pick one of chi, chi^3.
    pub fn canonical(&self) -> QuarticCharacter {
        let c = self.conj();
        if c.table < self.table {
            c
        } else {
            self.clone()
        }
    }
}

/// Frobenius at an unramified prime p as the exponent k with Frob_p = sigma^k.
pub fn frobenius_exponent(k: &CMField, p: u64) -> Result<u32> {
    let st = &k.mult;
    let mut images = Vec::new();
    for i in 0..4 {
        let mut e = vec![0u64; 4];
        e[i] = 1;
        images.push(modp_pow(st, &e, p as u128, p));
    }
    let mut m = crate::arith::IntMatrix::identity(4);
    for kk in 0..4u32 {
        let ok = (0..4).all(|i| (0..4).all(|r| m[(r, i)].mod_u(p as u32) as u64 == images[i][r]));
        if ok {
            return Ok(kk);
        }
        m = k.sigma.mul(&m);
    }
    Err(Error::Failed(format!("no Frobenius found at {}", p)))
}

/// The quartic character of K (up to chi <-> chi^3), recovered from
/// Frobenius elements; modulus = conductor f with disc K = f^2 disc F.
pub fn field_character(k: &CMField) -> Result<QuarticCharacter> {
    let f = k.conductor().ok_or_else(|| Error::Failed("disc_K / disc_F is not a square".into()))?;
    let f = f.to_u64().ok_or_else(|| Error::Domain("conductor too large".into()))?;
    let phi = (1..f).filter(|&a| gcd(a, f) == 1).count() + usize::from(f == 1);
    let mut table = vec![-1i8; f as usize];
    table[(1 % f) as usize] = 0;
    let mut known: Vec<u64> = vec![1 % f];
    let mut p = 2u64;
    while known.len() < phi {
        p += 1;
        if !is_prime_u64(p) || f % p == 0 || k.disc.is_divisible_u(p as u32) {
            continue;
        }
        let r = p % f;
        if table[r as usize] >= 0 {
            continue;
        }
        let kp = frobenius_exponent(k, p)? as i8;
        // close the known subgroup under multiplication by r
        let mut newk = Vec::new();
        let mut cur = r;
        let mut e: i8 = 1;
        while table[cur as usize] < 0 {
            for &a in &known {
                let b = modp::mul_mod(a, cur, f);
                if table[b as usize] < 0 {
                    table[b as usize] = (table[a as usize] + e * kp).rem_euclid(4);
                    newk.push(b);
                }
            }
            cur = modp::mul_mod(cur, r, f);
            e = (e + 1) % 4;
        }
        known.extend(newk);
        if p > 1_000_000 {
            return Err(Error::Failed("character table incomplete".into()));
        }
    }
    Ok(QuarticCharacter { modulus: f, table })
}

/// h_K = h_F * Q * w * |B_{1,chi}|^2 / 4 for a cyclic quartic CM field.
pub fn analytic_class_number(k: &CMField) -> Result<Integer> {
    let chi = field_character(k)?;
    let (a, b) = chi.bernoulli_numerator();
    let num = Integer::from(&a * &a) + Integer::from(&b * &b);
    let f = Integer::from(chi.modulus);
    let q = k.unit_index() as u64;
    let total = num * Integer::from(k.quad.h) * q * k.w();
    let den = Integer::from(&f * &f) * 4;
    if !total.is_divisible(&den) {
        return Err(Error::Failed("class number formula is not integral".into()));
    }
    Ok(total / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZPoly;

    #[test]
    fn character_of_q_zeta5() {
        let k = CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        let chi = field_character(&k).unwrap();
        assert_eq!(chi.modulus, 5);
        assert_eq!(chi.order(), 4);
        assert!(chi.is_odd());
        assert!(chi.is_primitive());
        assert_eq!(analytic_class_number(&k).unwrap(), 1);
    }

    #[test]
    fn character_of_disc_8000() {
        let k = CMField::from_poly(&ZPoly::from_i64(&[20, 0, 10, 0, 1])).unwrap();
        let chi = field_character(&k).unwrap();
        assert_eq!(chi.modulus, 40);
        assert!(chi.is_primitive() && chi.is_odd());
        // chi^2 is the character of Q(sqrt 5)
        let c2 = chi.pow(2);
        for a in 1..40u64 {
            if let Some(v) = c2.value(a) {
                let kr = crate::arith::kronecker(&Integer::from(5), a);
                assert_eq!(if v == 0 { 1 } else { -1 }, kr);
            }
        }
    }
}
