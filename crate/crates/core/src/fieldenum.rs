//! Cyclic quartic CM fields containing a fixed real quadratic field, via
//! quartic Dirichlet characters and Gaussian periods.

use crate::arith::{factor_integer, kronecker, Integer, Rational, ZPoly};
use crate::ball::{with_precision_retry, ComplexBall};
use crate::character::{gcd, QuarticCharacter};
use crate::error::{Error, Result};
use crate::lattice;
use crate::nf::{CMField, FieldRecord, NFElement};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct EnumeratedField {
    pub character: QuarticCharacter,
    pub disc: Integer,
    pub poly: ZPoly,
    pub field: CMField,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldDbRow {
    #[serde(flatten)]
    pub record: FieldRecord,
    pub character: QuarticCharacter,
}

impl EnumeratedField {
    pub fn db_row(&self) -> FieldDbRow {
        FieldDbRow { record: FieldRecord::from_field(&self.field), character: self.character.clone() }
    }
}

/// Generators of (Z/n)^* with their orders, via CRT over prime powers.
fn unit_group_generators(n: u64) -> Vec<(u64, u64)> {
    if n <= 2 {
        return vec![];
    }
    let mut gens = Vec::new();
    for (p, e) in factor_integer(&Integer::from(n)) {
        let p = p.to_u64().unwrap();
        let q = p.pow(e);
        let rest = n / q;
        // lift a residue mod q to one that is 1 mod rest
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % n;
            }
            // x = g mod q, x = 1 mod rest
            (0..rest).map(|t| g + t * q).find(|x| x % rest == 1).unwrap() % n
        };
        if p == 2 {
            if e == 2 {
                gens.push((lift(3), 2));
            } else if e >= 3 {
                gens.push((lift(q - 1), 2));
                gens.push((lift(5), q / 4));
            }
        } else {
            let phi = q / p * (p - 1);
            // primitive root mod p^e
            let g = (2..q)
                .find(|&g| {
                    gcd(g, p) == 1 && {
                        let mut ok = true;
                        for (r, _) in factor_integer(&Integer::from(phi)) {
                            let r = r.to_u64().unwrap();
                            if crate::arith::modp::pow_mod(g, phi / r, q) == 1 {
                                ok = false;
                                break;
                            }
                        }
                        ok
                    }
                })
                .unwrap();
            gens.push((lift(g), phi));
        }
    }
    gens
}

/// All characters (Z/n)^* -> mu_4, as value tables.
fn characters_mod(n: u64) -> Vec<QuarticCharacter> {
    let gens = unit_group_generators(n);
    // admissible images per generator
    let choices: Vec<Vec<u8>> = gens
        .iter()
        .map(|&(_, o)| (0..4u8).filter(|&k| (o * k as u64) % 4 == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let mut table = vec![-1i8; n as usize];
        table[(1 % n) as usize] = 0;
        let mut elems: Vec<(u64, i8)> = vec![(1 % n, 0)];
        for (t, &(g, o)) in gens.iter().enumerate() {
            let k = choices[t][idx[t]] as i8;
            let mut next = Vec::with_capacity(elems.len() * o as usize);
            for &(a, v) in &elems {
                let mut x = a;
                let mut val = v;
                for _ in 0..o {
                    next.push((x, val));
                    x = (x as u128 * g as u128 % n as u128) as u64;
                    val = (val + k).rem_euclid(4);
                }
            }
            elems = next;
        }
        for (a, v) in elems {
            table[a as usize] = v;
        }
        out.push(QuarticCharacter { modulus: n, table });
        // next index
        let mut t = 0;
        loop {
            if t == gens.len() {
                return out;
            }
            idx[t] += 1;
            if idx[t] < choices[t].len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// Quartic odd primitive characters whose square is the Kronecker symbol of
/// disc_f, one per pair {chi, chi^3}, with disc_f * f^2 <= bound.
pub fn enumerate_characters_for(disc_f: &Integer, bound: &Integer) -> Vec<QuarticCharacter> {
    let fmax = Integer::from(bound / disc_f).sqrt().to_u64().unwrap_or(0);
    let df = disc_f.to_u64().unwrap();
    let mut out: Vec<QuarticCharacter> = (1..=fmax)
        .into_par_iter()
        .filter(|f| f % df == 0)
        .flat_map_iter(|f| {
            characters_mod(f)
                .into_iter()
                .filter(move |c| {
                    c.order() == 4
                        && c.is_odd()
                        && (1..f).all(|a| match c.value(a) {
                            Some(v) => {
                                let kr = kronecker(disc_f, a);
                                (v % 2 == 0 && kr == 1) || (v % 2 == 1 && kr == -1)
                            }
                            None => true,
                        })
                        && c.is_primitive()
                })
                .map(|c| c.canonical())
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| (a.modulus, &a.table).cmp(&(b.modulus, &b.table)));
    out.dedup();
    out
}

pub fn enumerate_characters(bound: &Integer) -> Vec<QuarticCharacter> {
    enumerate_characters_for(&Integer::from(5), bound)
}

/// Conjugates of a linear combination of Gaussian periods of chi's kernel.
fn period_conjugates(chi: &QuarticCharacter, coeffs: &[(u64, i64)], prec: u32) -> Vec<ComplexBall> {
    let f = chi.modulus;
    let ker: Vec<u64> = (1..f.max(2)).filter(|&a| chi.value(a) == Some(0)).collect();
    let ker = if f == 1 { vec![0] } else { ker };
    // coset representatives g_t with chi(g_t) = i^t
    let reps: Vec<u64> = (0..4u8).map(|t| (1..f).find(|&a| chi.value(a) == Some(t)).unwrap()).collect();
    reps.iter()
        .map(|&g| {
            let mut s = ComplexBall::zero(prec);
            for &(j, c) in coeffs {
                let mut e = ComplexBall::zero(prec);
                for &a in &ker {
                    let k = (j as u128 * a as u128 * g as u128 % f as u128) as u64;
                    let q = ComplexBall::from_rat(prec, &Rational::from((2 * k, f)), &Rational::new());
                    e = e.add(&q.exp_pi_i());
                }
                s = s.add(&e.mul_i64(c));
            }
            s
        })
        .collect()
}

fn poly_from_conjugates(c: &[ComplexBall]) -> Result<ZPoly> {
    let prec = c[0].prec();
    let mut poly = vec![ComplexBall::one(prec)];
    for z in c {
        let mut next = vec![ComplexBall::zero(prec); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a);
            next[i] = next[i].sub(&a.mul(z));
        }
        poly = next;
    }
    let mut coeffs = Vec::new();
    for a in &poly {
        if a.rad_f64() >= 0.25 || a.imag().rad_f64() >= 0.25 {
            return Err(Error::Indeterminate("period polynomial coefficient too wide".into()));
        }
        let re = a.real().integers_inside(2);
        let im = a.imag().integers_inside(2);
        match (re, im) {
            (Some(r), Some(i)) if r.len() == 1 && i.len() == 1 && i[0] == 0 => coeffs.push(r[0].clone()),
            _ => return Err(Error::Indeterminate("period polynomial coefficient not isolated".into())),
        }
    }
    Ok(ZPoly::new(coeffs))
}

/// Minimal polynomial of a generating combination of Gaussian periods.
pub fn defining_poly_from_character(chi: &QuarticCharacter, prec: u32) -> Result<ZPoly> {
    let f = chi.modulus;
    let mut coeffs: Vec<(u64, i64)> = vec![(1, 1)];
    let extra: Vec<u64> = (2..f).collect();
    let mut next_j = extra.iter();
    for _ in 0..64 {
        let poly = with_precision_retry(prec, prec * 16, |p| {
            let conj = period_conjugates(chi, &coeffs, p);
            // distinct conjugates give a primitive element
            for i in 0..4 {
                for j in 0..i {
                    if conj[i].overlaps(&conj[j]) {
                        if conj[i].sub(&conj[j]).abs_upper() < 1e-6 {
                            return Ok(None);
                        }
                        return Err(Error::Indeterminate("period conjugates not separated".into()));
                    }
                }
            }
            poly_from_conjugates(&conj).map(Some)
        })?;
        if let Some(p) = poly {
            return Ok(p);
        }
        match next_j.next() {
            Some(&j) => coeffs.push((j, 2 + coeffs.len() as i64)),
            None => break,
        }
    }
    Err(Error::Failed(format!("no primitive period combination for conductor {}", f)))
}

fn poly_key(p: &ZPoly, t2: &Integer) -> (Integer, Integer, usize, Vec<Integer>) {
    let s: Integer = p.coeffs().iter().map(|c| Integer::from(c.abs_ref())).sum();
    let neg = p.coeffs().iter().filter(|c| **c < 0).count();
    (t2.clone(), s, neg, p.coeffs().to_vec())
}

/// A defining polynomial of small T2 size, chosen among short elements of O_K.
pub fn reduce_defining_poly(k: &CMField) -> Result<ZPoly> {
    let u = lattice::lll_gram(&k.t2_gram);
    let g = lattice::transform(&k.t2_gram, &u);
    let mut bound = (0..4).map(|i| g[(i, i)].clone()).max().unwrap();
    let mut best: Option<(ZPoly, Integer)> = None;
    for _ in 0..4 {
        let vs = lattice::short_vectors(&k.t2_gram, &bound);
        for v in vs {
            let a = NFElement::from_int_coords(v.clone());
            let cp = k.char_poly(&a);
            if cp.iter().any(|c| *c.denom() != 1) {
                continue;
            }
            let zp = ZPoly::new(cp.iter().map(|c| c.numer().clone()).collect());
            if zp.discriminant() == 0 {
                continue; // not a primitive element
            }
            let t2 = crate::lattice::qf(&k.t2_gram, &v);
            let key = poly_key(&zp, &t2);
            match &best {
                Some((bp, bt)) if poly_key(bp, bt) <= key => {}
                _ => best = Some((zp, t2)),
            }
        }
        if best.is_some() {
            break;
        }
        bound *= 2;
    }
    best.map(|b| b.0).ok_or_else(|| Error::Failed("no primitive element found".into()))
}

/// Build the field of a character with exact checks.
pub fn field_from_character(chi: &QuarticCharacter, disc_f: &Integer, prec: u32) -> Result<EnumeratedField> {
    let p0 = defining_poly_from_character(chi, prec)?;
    let k0 = CMField::from_poly(&p0)?;
    let poly = reduce_defining_poly(&k0)?;
    let field = if poly == p0 { k0 } else { CMField::from_poly(&poly)? };
    let f = Integer::from(chi.modulus);
    let disc = Integer::from(&f * &f) * disc_f;
    if field.disc != disc {
        return Err(Error::Failed(format!("conductor {}: field discriminant {} != {}", chi.modulus, field.disc, disc)));
    }
    if field.quad.disc != *disc_f {
        return Err(Error::Failed("real subfield mismatch".into()));
    }
    let x2 = ZPoly::new(vec![Integer::from(-disc_f), Integer::new(), Integer::from(1)]);
    if field.roots_in_field(&x2)?.is_empty() {
        return Err(Error::Failed("sqrt of disc_F not in field".into()));
    }
    Ok(EnumeratedField { character: chi.clone(), disc, poly, field })
}

/// All fields with |disc| <= bound containing Q(sqrt 5), sorted by (disc, table).
pub fn enumerate_fields(bound: &Integer, prec: u32) -> Result<Vec<EnumeratedField>> {
    let disc_f = Integer::from(5);
    let chars = enumerate_characters(bound);
    let res: Vec<Result<EnumeratedField>> = chars.par_iter().map(|c| field_from_character(c, &disc_f, prec)).collect();
    res.into_iter().collect()
}

/// Isomorphism test by finding a root of one polynomial in the other field.
pub fn isomorphic(k: &CMField, other: &ZPoly) -> Result<bool> {
    Ok(!k.roots_in_field(other)?.is_empty())
}

/// sqrt(5) in K, exactly.
pub fn contains_sqrt(k: &CMField, d: i64) -> Result<bool> {
    let x2 = ZPoly::from_i64(&[-d, 0, 1]);
    Ok(!k.roots_in_field(&x2)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_five_only() {
        let c = enumerate_characters(&Integer::from(125));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].modulus, 5);
        let p = defining_poly_from_character(&c[0], 128).unwrap();
        assert_eq!(p, ZPoly::from_i64(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn conductor_forty() {
        let c = enumerate_characters(&Integer::from(8000));
        assert!(c.iter().any(|x| x.modulus == 40));
        let chi = c.iter().find(|x| x.modulus == 40).unwrap();
        let e = field_from_character(chi, &Integer::from(5), 128).unwrap();
        assert_eq!(e.disc, 8000);
        assert!(isomorphic(&e.field, &ZPoly::from_i64(&[20, 0, 10, 0, 1])).unwrap());
        assert!(contains_sqrt(&e.field, 5).unwrap());
    }
}
