//! Integer polynomials and their factorisation over F_p.

use super::modp::{self, Poly};
use super::{is_prime, Integer, IntMatrix, Rational};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Integer polynomial, coefficients from the constant term upwards.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<Integer>,
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let a = c.clone().abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show = a != 1 || i == 0;
            if show {
                write!(f, "{}", a)?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show { "*" } else { "" })?,
                _ => write!(f, "{}x^{}", if show { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().map_or(false, |c| *c == 0) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree, -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Integer {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut r = vec![Integer::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        ZPoly::new(r)
    }

    pub fn scale(&self, c: &Integer) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|a| Integer::from(a * c)).collect())
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, a)| Integer::from(a * i as u32)).collect())
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Remainder of division by a monic polynomial.
    pub fn rem_monic(&self, m: &ZPoly) -> ZPoly {
        assert!(m.is_monic());
        let d = m.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let c = r.pop().unwrap();
            if c != 0 {
                let off = r.len() - d;
                for j in 0..d {
                    r[off + j] -= Integer::from(&c * &m.coeffs[j]);
                }
            }
        }
        ZPoly::new(r)
    }

    pub fn reduce_mod(&self, p: u64) -> Poly {
        modp::trim(self.coeffs.iter().map(|c| c.mod_u(p as u32) as u64).collect())
    }

    fn reduce_mod_big(&self, p: u64) -> Poly {
        let pp = Integer::from(p);
        modp::trim(self.coeffs.iter().map(|c| c.clone().div_rem_euc(pp.clone()).1.to_u64().unwrap()).collect())
    }

    pub fn from_modp(f: &Poly) -> ZPoly {
        ZPoly::new(f.iter().map(|&c| Integer::from(c)).collect())
    }

    /// Sylvester-matrix resultant.
    pub fn resultant(&self, o: &ZPoly) -> Integer {
        let m = self.degree();
        let n = o.degree();
        if m < 0 || n < 0 {
            return Integer::new();
        }
        let (m, n) = (m as usize, n as usize);
        let size = m + n;
        if size == 0 {
            return Integer::from(1);
        }
        let mut s = IntMatrix::zeros(size, size);
        for i in 0..n {
            for j in 0..=m {
                s[(i, i + j)] = self.coeffs[m - j].clone();
            }
        }
        for i in 0..m {
            for j in 0..=n {
                s[(n + i, i + j)] = o.coeffs[n - j].clone();
            }
        }
        s.det().unwrap()
    }

    /// Discriminant with the usual sign convention.
    pub fn discriminant(&self) -> Integer {
        let n = self.degree();
        let r = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        r * sign / self.leading()
    }
}

/// Factor f modulo a prime p into monic irreducibles with multiplicities.
/// The seed makes the equal-degree splitting reproducible.
pub fn factor_mod_p(f: &ZPoly, p: &Integer) -> Result<Vec<(ZPoly, usize)>> {
    factor_mod_p_seeded(f, p, 0x0c0f_fee0)
}

pub fn factor_mod_p_seeded(f: &ZPoly, p: &Integer, seed: u64) -> Result<Vec<(ZPoly, usize)>> {
    if !is_prime(p) {
        return Err(Error::CompositeModulus(p.to_string()));
    }
    let Some(pu) = p.to_u64().filter(|&v| v < (1u64 << 62)) else {
        return Err(Error::Domain("prime too large for word-sized factorisation".into()));
    };
    let fp = if pu < (1 << 31) { f.reduce_mod(pu) } else { f.reduce_mod_big(pu) };
    if fp.is_empty() {
        return Err(Error::Domain("polynomial vanishes modulo p".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = factor_poly_modp(&fp, pu, &mut rng);
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
    Ok(out.into_iter().map(|(g, e)| (ZPoly::from_modp(&g), e)).collect())
}

/// Factorisation of a nonzero polynomial over F_p (monic factors).
pub fn factor_poly_modp(f: &Poly, p: u64, rng: &mut ChaCha8Rng) -> Vec<(Poly, usize)> {
    let f = modp::monic(f, p);
    let mut out = Vec::new();
    for (sqf, mult) in squarefree(&f, p) {
        for (d, g) in distinct_degree(&sqf, p) {
            for h in equal_degree(&g, d, p, rng) {
                out.push((h, mult));
            }
        }
    }
    out
}

/// Squarefree decomposition: list of (squarefree factor, multiplicity).
fn squarefree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if modp::deg(f) < 1 {
        return out;
    }
    let df = modp::pderiv(f, p);
    if df.is_empty() {
        // f is a p-th power
        let root: Poly = f.iter().step_by(p as usize).cloned().collect();
        for (g, m) in squarefree(&root, p) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = modp::pgcd(f, &df, p);
    let mut w = modp::pdivrem(f, &c, p).0;
    let mut i = 1;
    while modp::deg(&w) > 0 {
        let y = modp::pgcd(&w, &c, p);
        let z = modp::pdivrem(&w, &y, p).0;
        if modp::deg(&z) > 0 {
            out.push((modp::monic(&z, p), i));
        }
        i += 1;
        w = y;
        c = modp::pdivrem(&c, &w, p).0;
    }
    if modp::deg(&c) > 0 {
        let root: Poly = c.iter().step_by(p as usize).cloned().collect();
        for (g, m) in squarefree(&root, p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

fn distinct_degree(f: &Poly, p: u64) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while modp::deg(&g) >= 2 * (d as isize + 1) {
        d += 1;
        h = modp::ppowmod(&h, p as u128, &g, p);
        let t = modp::pgcd(&g, &modp::psub(&h, &x, p), p);
        if modp::deg(&t) > 0 {
            g = modp::pdivrem(&g, &t, p).0;
            h = modp::prem(&h, &g, p);
            out.push((d, t));
        }
    }
    if modp::deg(&g) > 0 {
        out.push((modp::deg(&g) as usize, modp::monic(&g, p)));
    }
    out
}

fn equal_degree(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = modp::deg(f) as usize;
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a: Poly = modp::trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if modp::deg(&a) < 1 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = modp::prem(&modp::pmul(&t, &t, p), f, p);
                s = modp::padd(&s, &t, p);
            }
            s
        } else {
            let e = (((p as u128).pow(d as u32)) - 1) / 2;
            let t = modp::ppowmod(&a, e, f, p);
            modp::psub(&t, &vec![1], p)
        };
        let g = modp::pgcd(f, &b, p);
        let dg = modp::deg(&g);
        if dg > 0 && (dg as usize) < n {
            let h = modp::pdivrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&modp::monic(&h, p), d, p, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclo5() -> ZPoly {
        ZPoly::from_i64(&[1, 1, 1, 1, 1])
    }

    #[test]
    fn factor_examples() {
        let f = factor_mod_p(&cyclo5(), &Integer::from(11)).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|(g, e)| g.degree() == 1 && *e == 1));
        let f = factor_mod_p(&cyclo5(), &Integer::from(2)).unwrap();
        assert_eq!(f, vec![(cyclo5(), 1)]);
        let f = factor_mod_p(&ZPoly::from_i64(&[1, 0, 1]), &Integer::from(2)).unwrap();
        assert_eq!(f, vec![(ZPoly::from_i64(&[1, 1]), 2)]);
        assert!(matches!(factor_mod_p(&cyclo5(), &Integer::from(15)), Err(Error::CompositeModulus(_))));
        // x^5+1 mod 5 = (x+1)^5
        let f = factor_mod_p(&ZPoly::from_i64(&[1, 0, 0, 0, 0, 1]), &Integer::from(5)).unwrap();
        assert_eq!(f, vec![(ZPoly::from_i64(&[1, 1]), 5)]);
    }

    #[test]
    fn discriminants() {
        assert_eq!(cyclo5().discriminant(), 125);
        assert_eq!(ZPoly::from_i64(&[20, 0, 10, 0, 1]).discriminant(), 128000);
        assert_eq!(ZPoly::from_i64(&[1, 0, 0, 0, 1]).discriminant(), 256);
        assert_eq!(ZPoly::from_i64(&[-2, 0, 1]).discriminant(), 8);
    }

    #[test]
    fn display() {
        assert_eq!(ZPoly::from_i64(&[20, 0, 10, 0, 1]).to_string(), "x^4 + 10*x^2 + 20");
    }
}
