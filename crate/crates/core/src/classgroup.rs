//! Class group of a quartic CM field by relation search over a Minkowski
//! factor base, stopped by the analytic class number.

use crate::arith::{primes_up_to, IntMatrix, Integer, Rational};
use crate::character::analytic_class_number;
use crate::error::{Error, Result};
use crate::ideal::{minkowski_bound, split_prime, FracIdeal, PrimeIdeal};
use crate::nf::{CMField, NFElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Class as exponents against the cyclic factors.
pub type ClassLabel = Vec<i64>;

#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub h: Integer,
    /// nontrivial elementary divisors d_1 | d_2 | ...
    pub divisors: Vec<i64>,
    pub fb: Vec<PrimeIdeal>,
    /// class of each factor-base prime
    pub fb_dl: Vec<ClassLabel>,
    /// sigma(fb[j]) = fb[sigma_perm[j]]
    pub sigma_perm: Vec<usize>,
    pub minkowski: Rational,
    pub seed: u64,
    pub relations_used: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassRecord {
    pub class: ClassLabel,
    #[serde(with = "crate::serde_int")]
    pub min_norm: Integer,
    /// exponents over the factor base of the minimal representative
    pub rep_exponents: Vec<u32>,
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        // g = x b + y (a mod b) = y a + (x - (a div b) y) b
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Upper triangular basis of span(rows) + m Z^n (row convention), all
/// arithmetic reduced modulo m.
pub fn hnf_mod(rows: &[Vec<i64>], n: usize, m: i64) -> Vec<Vec<i64>> {
    let md = |x: i128| -> i64 { (x.rem_euclid(m as i128)) as i64 };
    let mut work: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(m)).collect()).collect();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut piv = vec![0i64; n];
        piv[j] = m;
        let mut rest = Vec::with_capacity(work.len());
        for v in work.into_iter() {
            if v[j] == 0 {
                if v.iter().any(|&x| x != 0) {
                    rest.push(v);
                }
                continue;
            }
            let (g, a, b) = egcd(piv[j], v[j]);
            let (pj, vj) = (piv[j] / g, v[j] / g);
            let mut np = vec![0i64; n];
            let mut nv = vec![0i64; n];
            for c in j..n {
                let x = piv[c] as i128;
                let y = v[c] as i128;
                np[c] = if c == j { g } else { md(a as i128 * x + b as i128 * y) };
                nv[c] = if c == j { 0 } else { md(vj as i128 * x - pj as i128 * y) };
            }
            piv = np;
            if nv.iter().any(|&x| x != 0) {
                rest.push(nv);
            }
        }
        // reduce the pivot tail
        for c in j + 1..n {
            piv[c] = piv[c].rem_euclid(m);
        }
        // (m / g) * piv - m e_j stays in the lattice
        let q = m / piv[j];
        let carry: Vec<i64> = (0..n).map(|c| if c <= j { 0 } else { md(q as i128 * piv[c] as i128) }).collect();
        if carry.iter().any(|&x| x != 0) {
            rest.push(carry);
        }
        out.push(piv);
        work = rest;
    }
    out
}

fn add_labels(a: &[i64], b: &[i64], d: &[i64]) -> ClassLabel {
    a.iter().zip(b).zip(d).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect()
}

fn scale_label(a: &[i64], k: i64, d: &[i64]) -> ClassLabel {
    a.iter().zip(d).map(|(x, m)| ((*x as i128 * k as i128).rem_euclid(*m as i128)) as i64).collect()
}

/// Trial division of |n| over the given primes; returns exponents or None.
fn smooth_factor(n: &Integer, primes: &[u64]) -> Option<Vec<(u64, u32)>> {
    let mut r = Integer::from(n.abs_ref());
    if r == 0 {
        return None;
    }
    let mut out = Vec::new();
    for &p in primes {
        let mut e = 0;
        while r.is_divisible_u(p as u32) {
            r /= p as u32;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        if r == 1 {
            break;
        }
    }
    if r == 1 {
        Some(out)
    } else {
        None
    }
}

impl ClassGroup {
    pub fn compute(k: &CMField, seed: u64) -> Result<ClassGroup> {
        let h = analytic_class_number(k)?;
        let hh = h.to_i64().ok_or_else(|| Error::Domain("class number too large".into()))?;
        let mk = minkowski_bound(k);
        let pmax = crate::arith::rat_floor(&mk).to_u64().unwrap_or(0);
        let mut fb: Vec<PrimeIdeal> = Vec::new();
        for p in primes_up_to(pmax.max(1)) {
            fb.extend(split_prime(k, p)?);
        }
        let n = fb.len();
        let sigma_perm: Vec<usize> = fb
            .iter()
            .map(|p| {
                let s = p.ideal.sigma(k);
                fb.iter().position(|q| q.ideal == s).expect("factor base is Galois stable")
            })
            .collect();
        if hh == 1 {
            return Ok(ClassGroup {
                h,
                divisors: vec![],
                fb_dl: vec![vec![]; n],
                fb,
                sigma_perm,
                minkowski: mk,
                seed,
                relations_used: 0,
            });
        }
        let fb_primes: Vec<u64> = {
            let mut v: Vec<u64> = fb.iter().map(|p| p.p).collect();
            v.dedup();
            v
        };
        let mut rels: Vec<Vec<i64>> = Vec::new();
        for &p in &fb_primes {
            let mut r = vec![0i64; n];
            for (j, q) in fb.iter().enumerate() {
                if q.p == p {
                    r[j] = q.e as i64;
                }
            }
            rels.push(r);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small: Vec<usize> = {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by_key(|&j| fb[j].norm());
            idx
        };
        let mut tries = 0usize;
        let mut last_check = 0usize;
        let w = loop {
            if rels.len() >= last_check + 8 || tries % 400 == 399 {
                last_check = rels.len();
                let w = hnf_mod(&rels, n, hh);
                let det: Integer = w.iter().enumerate().map(|(j, r)| Integer::from(r[j])).product();
                if det == h {
                    break w;
                }
            }
            tries += 1;
            if tries > 200_000 {
                return Err(Error::Failed("relation search exhausted".into()));
            }
            // random factor-base product
            let cnt = rng.gen_range(1..=3usize.min(small.len().max(1)));
            let mut b = FracIdeal::unit();
            for _ in 0..cnt {
                if small.is_empty() {
                    break;
                }
                let j = small[rng.gen_range(0..small.len())];
                b = b.mul(k, &fb[j].ideal);
            }
            let red = b.reduced_basis(k);
            for _ in 0..6 {
                let mut a = NFElement::integer(0, 4);
                for r in &red {
                    let c: i64 = rng.gen_range(-1..=1);
                    if c != 0 {
                        a = k.add(&a, &k.scale(r, &Rational::from(c)));
                    }
                }
                if a.is_zero() {
                    continue;
                }
                if let Some(rel) = element_relation(k, &fb, &fb_primes, &a) {
                    if rel.iter().any(|&x| x != 0) {
                        rels.push(rel);
                    }
                }
            }
        };
        // Smith form of the relation basis
        let mut wm = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                wm[(i, j)] = Integer::from(w[i][j]);
            }
        }
        let (d, _l, r) = wm.snf();
        let mut divisors = Vec::new();
        let mut cols = Vec::new();
        for i in 0..n {
            let di = d[(i, i)].clone().abs();
            if di > 1 {
                divisors.push(di.to_i64().unwrap());
                cols.push(i);
            }
        }
        let fb_dl: Vec<ClassLabel> = (0..n)
            .map(|j| {
                cols.iter()
                    .zip(&divisors)
                    .map(|(&c, &m)| Integer::from(r[(j, c)].clone() % m).to_i64().unwrap().rem_euclid(m))
                    .collect()
            })
            .collect();
        let relations_used = rels.len();
        Ok(ClassGroup { h, divisors, fb, fb_dl, sigma_perm, minkowski: mk, seed, relations_used })
    }

    pub fn identity(&self) -> ClassLabel {
        vec![0; self.divisors.len()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> ClassLabel {
        add_labels(a, b, &self.divisors)
    }

    pub fn scale(&self, a: &[i64], k: i64) -> ClassLabel {
        scale_label(a, k, &self.divisors)
    }

    pub fn neg(&self, a: &[i64]) -> ClassLabel {
        self.scale(a, -1)
    }

    /// Class of a product of factor-base primes.
    pub fn class_of_exponents(&self, e: &[i64]) -> ClassLabel {
        let mut c = self.identity();
        for (j, &x) in e.iter().enumerate() {
            if x != 0 {
                c = self.add(&c, &self.scale(&self.fb_dl[j], x));
            }
        }
        c
    }

    /// All classes.
    pub fn elements(&self) -> Vec<ClassLabel> {
        let mut out = vec![self.identity()];
        for (i, &d) in self.divisors.iter().enumerate() {
            let mut next = Vec::new();
            for c in &out {
                for t in 0..d {
                    let mut x = c.clone();
                    x[i] = t;
                    next.push(x);
                }
            }
            out = next;
        }
        out
    }

    /// Number of classes killed by 2.
    pub fn two_torsion(&self) -> u64 {
        1u64 << self.divisors.iter().filter(|d| *d % 2 == 0).count()
    }

    /// Discrete logarithm of an arbitrary fractional ideal.
    pub fn dlog(&self, k: &CMField, j: &FracIdeal) -> Result<ClassLabel> {
        if self.divisors.is_empty() {
            return Ok(vec![]);
        }
        if let Some(pos) = self.fb.iter().position(|p| p.ideal == *j) {
            return Ok(self.fb_dl[pos].clone());
        }
        let fb_primes: Vec<u64> = {
            let mut v: Vec<u64> = self.fb.iter().map(|p| p.p).collect();
            v.dedup();
            v
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0xd1_0c);
        let small: Vec<usize> = (0..self.fb.len()).filter(|&i| self.fb[i].norm() <= crate::arith::rat_floor(&self.minkowski) + 1).collect();
        for attempt in 0..5000 {
            let mut bexp = vec![0i64; self.fb.len()];
            let mut b = FracIdeal::unit();
            if attempt > 0 && !small.is_empty() {
                for _ in 0..rng.gen_range(1..=2) {
                    let t = small[rng.gen_range(0..small.len())];
                    bexp[t] += 1;
                    b = b.mul(k, &self.fb[t].ideal);
                }
            }
            let i = j.mul(k, &b);
            let ni = i.norm();
            let red = i.reduced_basis(k);
            let combos: Vec<Vec<i64>> = if attempt == 0 {
                (0..4).map(|t| (0..4).map(|u| i64::from(u == t)).collect()).collect()
            } else {
                (0..4).map(|_| (0..4).map(|_| rng.gen_range(-1..=1)).collect()).collect()
            };
            for c in combos {
                let mut a = NFElement::integer(0, 4);
                for (r, &x) in red.iter().zip(&c) {
                    if x != 0 {
                        a = k.add(&a, &k.scale(r, &Rational::from(x)));
                    }
                }
                if a.is_zero() {
                    continue;
                }
                let q = Rational::from(k.norm(&a).abs() / &ni);
                if *q.denom() != 1 {
                    continue;
                }
                let nj = q.numer().clone();
                let Some(fac) = smooth_factor(&nj, &fb_primes) else { continue };
                // (a) = I J', J' integral and smooth
                let mut cls = self.neg(&self.class_of_exponents(&bexp));
                let mut ok = true;
                for (p, e) in fac {
                    let mut s = 0i64;
                    for (t, pr) in self.fb.iter().enumerate() {
                        if pr.p != p {
                            continue;
                        }
                        let v = pr.valuation(k, &a) - pr.ideal_valuation(k, &i);
                        if v < 0 {
                            ok = false;
                        }
                        s += v * pr.f as i64;
                        cls = self.add(&cls, &self.scale(&self.fb_dl[t], -v));
                    }
                    if s != e as i64 {
                        ok = false;
                    }
                }
                if ok {
                    return Ok(cls);
                }
            }
        }
        Err(Error::Failed("discrete logarithm search exhausted".into()))
    }

    pub fn is_principal(&self, k: &CMField, j: &FracIdeal) -> Result<bool> {
        Ok(self.dlog(k, j)?.iter().all(|&x| x == 0))
    }

    /// Minimal norms of integral ideals in each class.
    pub fn min_norms(&self, k: &CMField) -> Result<Vec<ClassRecord>> {
        let bound = crate::arith::rat_floor(&self.minkowski);
        self.min_norms_upto(&bound, k)
    }

    /// Minimal norms, enumerating integral ideals up to `bound` (primes of
    /// norm above the Minkowski bound are classified by discrete log).
    pub fn min_norms_upto(&self, bound: &Integer, k: &CMField) -> Result<Vec<ClassRecord>> {
        let b = bound.to_u64().ok_or_else(|| Error::Domain("bound too large".into()))?;
        // primes of norm <= bound
        let mut primes: Vec<(u64, ClassLabel)> = Vec::new();
        let mut exps_index: Vec<Option<usize>> = Vec::new();
        for (j, p) in self.fb.iter().enumerate() {
            let nm = p.norm().to_u64().unwrap_or(u64::MAX);
            if nm <= b {
                primes.push((nm, self.fb_dl[j].clone()));
                exps_index.push(Some(j));
            }
        }
        let pmax_fb = self.fb.iter().map(|p| p.p).max().unwrap_or(1);
        for p in primes_up_to(b) {
            if p <= pmax_fb {
                continue;
            }
            for q in split_prime(k, p)? {
                let nm = q.norm().to_u64().unwrap_or(u64::MAX);
                if nm <= b {
                    primes.push((nm, self.dlog(k, &q.ideal)?));
                    exps_index.push(None);
                }
            }
        }
        let mut best: std::collections::BTreeMap<ClassLabel, (u64, Vec<(usize, u32)>)> = Default::default();
        fn rec(
            i: usize,
            norm: u64,
            cls: &ClassLabel,
            cur: &mut Vec<(usize, u32)>,
            primes: &[(u64, ClassLabel)],
            b: u64,
            g: &ClassGroup,
            best: &mut std::collections::BTreeMap<ClassLabel, (u64, Vec<(usize, u32)>)>,
        ) {
            match best.get(cls) {
                Some((nb, _)) if *nb <= norm => {}
                _ => {
                    best.insert(cls.clone(), (norm, cur.clone()));
                }
            }
            for t in i..primes.len() {
                let (pn, pc) = &primes[t];
                let Some(nn) = norm.checked_mul(*pn) else { continue };
                if nn > b {
                    continue;
                }
                let mut e = 1u32;
                let mut nn = nn;
                let mut c = g.add(cls, pc);
                loop {
                    cur.push((t, e));
                    rec(t + 1, nn, &c, cur, primes, b, g, best);
                    cur.pop();
                    match nn.checked_mul(*pn) {
                        Some(x) if x <= b => {
                            nn = x;
                            c = g.add(&c, pc);
                            e += 1;
                        }
                        _ => break,
                    }
                }
            }
        }
        let mut cur = Vec::new();
        rec(0, 1, &self.identity(), &mut cur, &primes, b, self, &mut best);
        let mut out = Vec::new();
        for (cls, (nm, exps)) in best {
            let mut rep = vec![0u32; self.fb.len()];
            let mut rep_ok = true;
            for (t, e) in exps {
                match exps_index[t] {
                    Some(j) => rep[j] += e,
                    None => rep_ok = false,
                }
            }
            out.push(ClassRecord { class: cls, min_norm: Integer::from(nm), rep_exponents: if rep_ok { rep } else { vec![] } });
        }
        Ok(out)
    }

    /// Ideal of a class record (product of factor-base primes).
    pub fn record_ideal(&self, k: &CMField, r: &ClassRecord) -> FracIdeal {
        let mut i = FracIdeal::unit();
        for (j, &e) in r.rep_exponents.iter().enumerate() {
            for _ in 0..e {
                i = i.mul(k, &self.fb[j].ideal);
            }
        }
        i
    }

    /// Action of sigma^t on a class given by factor-base exponents.
    pub fn sigma_class(&self, exps: &[u32], t: usize) -> ClassLabel {
        let mut e: Vec<i64> = exps.iter().map(|&x| x as i64).collect();
        for _ in 0..(t % 4) {
            let mut ne = vec![0i64; e.len()];
            for (j, &x) in e.iter().enumerate() {
                ne[self.sigma_perm[j]] += x;
            }
            e = ne;
        }
        self.class_of_exponents(&e)
    }

    /// Image of the type norm I -> I sigma^3(I) (for types {phi, sigma.phi}).
    pub fn type_norm_image(&self, records: &[ClassRecord]) -> Vec<ClassLabel> {
        let mut img: Vec<ClassLabel> = records
            .iter()
            .map(|r| {
                let e: Vec<i64> = r.rep_exponents.iter().map(|&x| x as i64).collect();
                self.add(&self.class_of_exponents(&e), &self.sigma_class(&r.rep_exponents, 3))
            })
            .collect();
        img.sort();
        img.dedup();
        img
    }
}

/// Factorisation of (a) over the factor base, if smooth.
fn element_relation(k: &CMField, fb: &[PrimeIdeal], fb_primes: &[u64], a: &NFElement) -> Option<Vec<i64>> {
    let nrm = k.norm(a);
    if *nrm.denom() != 1 {
        return None;
    }
    let fac = smooth_factor(nrm.numer(), fb_primes)?;
    let mut rel = vec![0i64; fb.len()];
    for (p, e) in fac {
        let mut s = 0i64;
        for (j, q) in fb.iter().enumerate() {
            if q.p == p {
                let v = q.valuation(k, a);
                rel[j] = v;
                s += v * q.f as i64;
            }
        }
        if s != e as i64 {
            return None;
        }
    }
    Some(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZPoly;

    #[test]
    fn hnf_mod_small() {
        // Z^2 / <(2, 1), (0, 3)> has order 6
        let w = hnf_mod(&[vec![2, 1], vec![0, 3]], 2, 6);
        assert_eq!(w[0][0] * w[1][1], 6);
        let w = hnf_mod(&[vec![1, 0]], 2, 4);
        assert_eq!(w[0][0] * w[1][1], 4);
        // (2,1) and 4Z^2 span a lattice containing (0,2)
        let w = hnf_mod(&[vec![2, 1]], 2, 4);
        assert_eq!(w[0][0] * w[1][1], 4);
    }

    #[test]
    fn trivial_group() {
        let k = CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        let g = ClassGroup::compute(&k, 0).unwrap();
        assert_eq!(g.h, 1);
        let recs = g.min_norms(&k).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].min_norm, 1);
    }
}
