//! Fractional ideals of a quartic CM field, prime splitting and valuations.

use crate::arith::{modp, IntMatrix, Integer, RatMatrix, Rational};
use crate::error::{Error, Result};
use crate::lattice;
use crate::nf::{modp_mul, modp_pow, CMField, NFElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (1/den) * lattice spanned by the columns of `hnf` (integral-basis coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracIdeal {
    pub hnf: IntMatrix,
    pub den: Integer,
}

impl FracIdeal {
    /// Ideal with the given Z-basis (or generating set) of rational vectors.
    pub fn from_lattice(vecs: &[Vec<Rational>]) -> Result<FracIdeal> {
        let mut den = Integer::from(1);
        for v in vecs {
            for x in v {
                den.lcm_mut(x.denom());
            }
        }
        let cols: Vec<Vec<Integer>> = vecs
            .iter()
            .map(|v| v.iter().map(|x| Integer::from(x.numer() * &den) / x.denom()).collect())
            .collect();
        let h = IntMatrix::from_columns(&cols).hnf();
        if h.cols != 4 {
            return Err(Error::Dimension(format!("ideal lattice of rank {}", h.cols)));
        }
        let mut g = den.clone();
        for x in &h.data {
            g.gcd_mut(x);
        }
        let (hnf, den) = if g > 1 {
            let mut m = h;
            for x in m.data.iter_mut() {
                *x /= &g;
            }
            (m.hnf(), den / g)
        } else {
            (h, den)
        };
        Ok(FracIdeal { hnf, den })
    }

    pub fn unit() -> FracIdeal {
        FracIdeal { hnf: IntMatrix::identity(4), den: Integer::from(1) }
    }

    /// The O_K-ideal generated by the given elements.
    pub fn from_generators(k: &CMField, gens: &[NFElement]) -> Result<FracIdeal> {
        let mut vecs = Vec::new();
        for g in gens {
            for j in 0..4 {
                vecs.push(k.mul(g, &k.basis_elt(j)).coords());
            }
        }
        FracIdeal::from_lattice(&vecs)
    }

    pub fn principal(k: &CMField, a: &NFElement) -> Result<FracIdeal> {
        FracIdeal::from_generators(k, std::slice::from_ref(a))
    }

    /// Z-basis as field elements.
    pub fn basis(&self) -> Vec<NFElement> {
        (0..4).map(|j| NFElement::new(self.hnf.column(j), self.den.clone())).collect()
    }

    fn basis_coords(&self) -> Vec<Vec<Rational>> {
        self.basis().iter().map(|b| b.coords()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn norm(&self) -> Rational {
        let d = self.hnf.det().expect("square").abs();
        Rational::from((d, Integer::from(rug::ops::Pow::pow(self.den.clone(), 4u32))))
    }

    pub fn mul(&self, k: &CMField, o: &FracIdeal) -> FracIdeal {
        let a = self.basis();
        let b = o.basis();
        let mut vecs = Vec::with_capacity(16);
        for x in &a {
            for y in &b {
                vecs.push(k.mul(x, y).coords());
            }
        }
        FracIdeal::from_lattice(&vecs).expect("product of full-rank ideals")
    }

    pub fn add(&self, o: &FracIdeal) -> FracIdeal {
        let mut vecs = self.basis_coords();
        vecs.extend(o.basis_coords());
        FracIdeal::from_lattice(&vecs).expect("full rank")
    }

    pub fn pow(&self, k: &CMField, e: i64) -> Result<FracIdeal> {
        let base = if e < 0 { self.inv(k)? } else { self.clone() };
        let mut r = FracIdeal::unit();
        for _ in 0..e.unsigned_abs() {
            r = r.mul(k, &base);
        }
        Ok(r)
    }

    /// I^{-1} = {x : x I in O_K}, as the dual of the row lattice of the
    /// multiplication matrices of a basis of I.
    pub fn inv(&self, k: &CMField) -> Result<FracIdeal> {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for b in self.basis() {
            let m = k.mult_matrix(&b);
            for i in 0..4 {
                rows.push((0..4).map(|j| m[(i, j)].clone()).collect());
            }
        }
        dual_lattice(&rows)
    }

    pub fn div(&self, k: &CMField, o: &FracIdeal) -> Result<FracIdeal> {
        Ok(self.mul(k, &o.inv(k)?))
    }

    pub fn contains(&self, x: &NFElement) -> bool {
        let m = self.hnf.to_rat().inverse().expect("full rank");
        let v: Vec<Rational> = x.coords().iter().map(|c| Rational::from(c * &self.den)).collect();
        m.mul_vec(&v).iter().all(|c| *c.denom() == 1)
    }

    /// I contained in J.
    pub fn is_subset(&self, o: &FracIdeal) -> bool {
        self.basis().iter().all(|b| o.contains(b))
    }

    fn apply(&self, m: &IntMatrix) -> FracIdeal {
        let cols: Vec<Vec<Rational>> = self
            .basis()
            .iter()
            .map(|b| m.mul_vec(&b.num).into_iter().map(|x| Rational::from((x, b.den.clone()))).collect())
            .collect();
        FracIdeal::from_lattice(&cols).expect("automorphic image")
    }

    pub fn conj(&self, k: &CMField) -> FracIdeal {
        self.apply(&k.conj)
    }

    pub fn sigma(&self, k: &CMField) -> FracIdeal {
        self.apply(&k.sigma)
    }

    pub fn sigma_pow(&self, k: &CMField, e: usize) -> FracIdeal {
        let mut r = self.clone();
        for _ in 0..(e % 4) {
            r = r.sigma(k);
        }
        r
    }

    /// Exact O_K-module test: closed under multiplication by the integral basis.
    pub fn is_module(&self, k: &CMField) -> bool {
        self.basis().iter().all(|b| (0..4).all(|j| self.contains(&k.mul(b, &k.basis_elt(j)))))
    }

    /// Gram matrix of T2 restricted to the numerator lattice.
    pub fn t2_gram(&self, k: &CMField) -> IntMatrix {
        self.hnf.transpose().mul(&k.t2_gram).mul(&self.hnf)
    }

    /// An element of I with |N(x)| = N(I), if one exists: I is principal iff
    /// such an element exists. Candidates come from T2 enumeration, which is
    /// complete once the bound covers a unit-balanced generator.
    pub fn principal_generator(&self, k: &CMField) -> Option<NFElement> {
        let g = self.t2_gram(k);
        let n_num = self.hnf.det().ok()?.abs();
        // generator balanced by units: T2 <= 2 sqrt(N) (eps + 1/eps)
        let prec = 64;
        let e = k.embed(&k.eps, 0, prec).real();
        let s = e.add(&e.recip().ok()?);
        let sq = crate::ball::Ball::from_int(prec, &n_num).sqrt().ok()?;
        let bound = sq.mul(&s).mul_i64(2).upper();
        let bound = bound.ceil().to_integer()? + 1;
        let target = Rational::from(n_num.clone());
        let vs = lattice::short_vectors(&g, &bound);
        let mut best: Option<NFElement> = None;
        for v in vs {
            let x = NFElement::from_int_coords(self.hnf.mul_vec(&v));
            if k.norm(&x).abs() == target {
                let gen = NFElement::new(x.num.clone(), self.den.clone());
                match &best {
                    Some(b) if k.trace(&k.mul(b, &k.apply_conj(b))) <= k.trace(&k.mul(&gen, &k.apply_conj(&gen))) => {}
                    _ => best = Some(gen),
                }
            }
        }
        best
    }

    /// LLL-reduced basis of the numerator lattice with respect to T2.
    pub fn reduced_basis(&self, k: &CMField) -> Vec<NFElement> {
        let u = lattice::lll_gram(&self.t2_gram(k));
        let b = self.hnf.mul(&u);
        (0..4).map(|j| NFElement::new(b.column(j), self.den.clone())).collect()
    }
}

/// Dual {x : r . x in Z for all rows r} of the lattice spanned by `rows`.
fn dual_lattice(rows: &[Vec<Rational>]) -> Result<FracIdeal> {
    let mut den = Integer::from(1);
    for r in rows {
        for x in r {
            den.lcm_mut(x.denom());
        }
    }
    let cols: Vec<Vec<Integer>> =
        rows.iter().map(|r| r.iter().map(|x| Integer::from(x.numer() * &den) / x.denom()).collect()).collect();
    let h = IntMatrix::from_columns(&cols).hnf();
    if h.cols != 4 {
        return Err(Error::Singular);
    }
    // rows of W = h^T / den; dual basis = columns of W^{-1}
    let mut w = h.transpose().to_rat();
    for x in w.data.iter_mut() {
        *x /= den.clone();
    }
    let wi = w.inverse()?;
    let vecs: Vec<Vec<Rational>> = (0..4).map(|j| (0..4).map(|i| wi[(i, j)].clone()).collect()).collect();
    FracIdeal::from_lattice(&vecs)
}

/// The different ideal D_{K/Q} (integral, norm |disc K|).
pub fn different_ideal(k: &CMField) -> FracIdeal {
    inverse_different(k).inv(k).expect("codifferent is invertible")
}

/// The codifferent {x : Tr(x O_K) in Z}.
pub fn inverse_different(k: &CMField) -> FracIdeal {
    let rows: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| Rational::from(&k.trace_gram[(i, j)])).collect()).collect();
    dual_lattice(&rows).expect("trace form is nondegenerate")
}

/// Minkowski bound (4!/4^4)(4/pi)^2 sqrt|disc|, rounded up to a rational.
pub fn minkowski_bound(k: &CMField) -> Rational {
    minkowski_bound_disc(&k.disc)
}

pub fn minkowski_bound_disc(disc: &Integer) -> Rational {
    let prec = 128;
    let b = crate::ball::Ball::from_int(prec, &Integer::from(disc.abs_ref()))
        .sqrt()
        .unwrap()
        .mul_rat(&Rational::from((3, 2)))
        .div(&crate::ball::Ball::pi(prec).sqr())
        .unwrap();
    // round the upper end up to a multiple of 2^-20
    let up = b.upper() * 1048576u32;
    Rational::from((up.ceil().to_integer().unwrap(), Integer::from(1048576)))
}

#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub ideal: FracIdeal,
    /// element of p P^{-1} outside p O_K, used for valuations
    pub gamma: NFElement,
}

impl PrimeIdeal {
    pub fn norm(&self) -> Integer {
        Integer::from(Integer::u_pow_u(self.p as u32, self.f))
    }

    /// v_P(a) for nonzero a.
    pub fn valuation(&self, k: &CMField, a: &NFElement) -> i64 {
        if a.is_zero() {
            return i64::MAX;
        }
        let p = Integer::from(self.p);
        let mut v: i64 = 0;
        let mut d = a.den.clone();
        while d.is_divisible(&p) {
            d /= &p;
            v -= self.e as i64;
        }
        let mut num = a.num.clone();
        loop {
            if num.iter().all(|x| x.is_divisible(&p)) {
                for x in num.iter_mut() {
                    *x /= &p;
                }
                v += self.e as i64;
                continue;
            }
            break;
        }
        let mut cur = NFElement::from_int_coords(num);
        loop {
            let t = k.mul(&cur, &self.gamma);
            if t.num.iter().all(|x| x.is_divisible(&p)) {
                cur = NFElement::from_int_coords(t.num.iter().map(|x| Integer::from(x / &p)).collect());
                v += 1;
            } else {
                break;
            }
        }
        v
    }

    /// v_P(I) as the minimum over a Z-basis.
    pub fn ideal_valuation(&self, k: &CMField, i: &FracIdeal) -> i64 {
        i.basis().iter().filter(|b| !b.is_zero()).map(|b| self.valuation(k, b)).min().unwrap()
    }
}

// -- F_p-subspaces of O/pO --------------------------------------------------

fn reduce_by(basis: &[Vec<u64>], piv: &[usize], v: &[u64], p: u64) -> Vec<u64> {
    let mut r = v.to_vec();
    for (row, &c) in basis.iter().zip(piv) {
        if r[c] != 0 {
            let f = r[c];
            for j in 0..r.len() {
                r[j] = modp::sub_mod(r[j], modp::mul_mod(f, row[j], p), p);
            }
        }
    }
    r
}

/// Row-reduced basis of the span.
fn span(vs: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    if vs.is_empty() {
        return (vec![], vec![]);
    }
    let mut a = vs.to_vec();
    let piv = modp::rref(&mut a, p);
    a.truncate(piv.len());
    (a, piv)
}

fn ideal_plus_elt(st: &[Vec<Vec<Integer>>], j: &[Vec<u64>], s: &[u64], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut vs: Vec<Vec<u64>> = j.to_vec();
    for i in 0..4 {
        let mut e = vec![0u64; 4];
        e[i] = 1;
        vs.push(modp_mul(st, s, &e, p));
    }
    span(&vs, p)
}

/// Prime ideals above p with ramification and residue degrees.
pub fn split_prime(k: &CMField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::CompositeModulus(p.to_string()));
    }
    if p >= 1 << 31 {
        return Err(Error::Domain("prime too large for splitting".into()));
    }
    let st = &k.mult;
    let n = 4;
    let mut q: u128 = p as u128;
    while q < n as u128 {
        q *= p as u128;
    }
    let unit = |i: usize| {
        let mut e = vec![0u64; n];
        e[i] = 1;
        e
    };
    // radical
    let mut frob_q = vec![vec![0u64; n]; n];
    let mut frob = vec![vec![0u64; n]; n];
    for i in 0..n {
        let a = modp_pow(st, &unit(i), q, p);
        let b = modp_pow(st, &unit(i), p as u128, p);
        for r in 0..n {
            frob_q[r][i] = a[r];
            frob[r][i] = b[r];
        }
    }
    let rad = modp::kernel(&frob_q, n, p);
    let (rad, rad_piv) = span(&rad, p);
    // S = {x : x^p - x in rad}
    let mut m = vec![vec![0u64; n + rad.len()]; n];
    for r in 0..n {
        for c in 0..n {
            m[r][c] = modp::sub_mod(frob[r][c], if r == c { 1 } else { 0 }, p);
        }
        for (t, rv) in rad.iter().enumerate() {
            m[r][n + t] = modp::sub_mod(0, rv[r], p);
        }
    }
    let ker = modp::kernel(&m, n + rad.len(), p);
    let s_vecs: Vec<Vec<u64>> = ker.iter().map(|v| v[..n].to_vec()).collect();
    let (s_basis, _) = span(&s_vecs, p);
    let g = s_basis.len() - rad.len();
    let mut ideals: Vec<(Vec<Vec<u64>>, Vec<usize>)> = vec![(rad.clone(), rad_piv.clone())];
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut tries = 0;
    while ideals.len() < g {
        tries += 1;
        if tries > 500 {
            return Err(Error::Failed(format!("could not split the algebra at {}", p)));
        }
        let mut s = vec![0u64; n];
        for b in &s_basis {
            let c = rng.gen_range(0..p);
            for j in 0..n {
                s[j] = modp::add_mod(s[j], modp::mul_mod(c, b[j], p), p);
            }
        }
        let mut next = Vec::new();
        for (jb, jp) in &ideals {
            // minimal polynomial of s modulo J
            let mut pows: Vec<Vec<u64>> = vec![reduce_by(jb, jp, &unit(0), p)];
            let mut cur = unit(0);
            let minpoly = loop {
                cur = modp_mul(st, &cur, &s, p);
                let r = reduce_by(jb, jp, &cur, p);
                // solve r = sum c_i pows_i
                let d = pows.len();
                let mut a = vec![vec![0u64; d + 1]; n];
                for row in 0..n {
                    for (i, pw) in pows.iter().enumerate() {
                        a[row][i] = pw[row];
                    }
                    a[row][d] = r[row];
                }
                let kr = modp::kernel(&a, d + 1, p);
                if let Some(v) = kr.into_iter().find(|v| v[d] != 0) {
                    // v[d] r + sum v_i pows_i = 0 => monic poly
                    let inv = modp::inv_mod(v[d], p);
                    let mut mp: Vec<u64> = v[..d].iter().map(|&x| modp::mul_mod(x, inv, p)).collect();
                    mp.push(1);
                    break mp;
                }
                pows.push(r);
            };
            let mut rng2 = ChaCha8Rng::seed_from_u64(p ^ 0x5eed);
            let facs = crate::arith::zpoly::factor_poly_modp(&minpoly, p, &mut rng2);
            if facs.len() <= 1 {
                next.push((jb.clone(), jp.clone()));
                continue;
            }
            for (fac, _) in facs {
                // root r of a linear factor x + c: r = -c
                let root = modp::sub_mod(0, fac[0], p);
                let mut sr = s.clone();
                sr[0] = modp::sub_mod(sr[0], root, p);
                let (b2, p2) = ideal_plus_elt(st, jb, &sr, p);
                if b2.len() < n {
                    next.push((b2, p2));
                }
            }
        }
        ideals = next;
    }
    let mut out = Vec::new();
    for (jb, _) in &ideals {
        let f = (n - jb.len()) as u32;
        let e = (n as u32) / (g as u32 * f);
        let mut gens: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            let mut v = vec![Rational::new(); n];
            v[i] = Rational::from(p);
            gens.push(v);
        }
        for b in jb {
            gens.push(b.iter().map(|&x| Rational::from(x)).collect());
        }
        let ideal = FracIdeal::from_lattice(&gens)?;
        let pinv = ideal.inv(k)?;
        let ppinv: Vec<NFElement> = pinv.basis().iter().map(|b| k.scale(b, &Rational::from(p))).collect();
        let pz = Integer::from(p);
        let gamma = ppinv
            .into_iter()
            .find(|b| b.is_integral() && !b.num.iter().all(|x| x.is_divisible(&pz)))
            .ok_or_else(|| Error::Failed("no anti-uniformizer".into()))?;
        out.push(PrimeIdeal { p, e, f, ideal, gamma });
    }
    out.sort_by(|a, b| a.ideal.hnf.data.cmp(&b.ideal.hnf.data));
    Ok(out)
}

/// (e, f, g) splitting pattern of p.
pub fn splitting_type(k: &CMField, p: u64) -> Result<(u32, u32, u32)> {
    let ps = split_prime(k, p)?;
    Ok((ps[0].e, ps[0].f, ps.len() as u32))
}

/// Rational vector helper for tests and callers.
pub fn rat_matrix_columns(m: &RatMatrix) -> Vec<Vec<Rational>> {
    (0..m.cols).map(|j| (0..m.rows).map(|i| m[(i, j)].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZPoly;

    fn z5() -> CMField {
        CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap()
    }

    #[test]
    fn splitting_in_q_zeta5() {
        let k = z5();
        assert_eq!(splitting_type(&k, 11).unwrap(), (1, 1, 4));
        assert_eq!(splitting_type(&k, 5).unwrap(), (4, 1, 1));
        assert_eq!(splitting_type(&k, 2).unwrap(), (1, 4, 1));
        assert_eq!(splitting_type(&k, 19).unwrap(), (1, 2, 2));
        // product of P^e is (p)
        for p in [5u64, 11, 19, 29] {
            let ps = split_prime(&k, p).unwrap();
            let mut prod = FracIdeal::unit();
            for q in &ps {
                prod = prod.mul(&k, &q.ideal.pow(&k, q.e as i64).unwrap());
            }
            assert_eq!(prod, FracIdeal::principal(&k, &k.from_int(p as i64)).unwrap());
        }
    }

    #[test]
    fn different_norms() {
        let k = z5();
        let d = different_ideal(&k);
        assert_eq!(d.norm(), 125);
        let id = d.mul(&k, &inverse_different(&k));
        assert_eq!(id, FracIdeal::unit());
        let k2 = CMField::from_poly(&ZPoly::from_i64(&[20, 0, 10, 0, 1])).unwrap();
        assert_eq!(different_ideal(&k2).norm(), 8000);
    }

    #[test]
    fn split_at_index_divisor() {
        let k = CMField::from_poly(&ZPoly::from_i64(&[20, 0, 10, 0, 1])).unwrap();
        let mut total = 0;
        for p in [2u64, 3, 5, 7, 11, 13, 41] {
            let ps = split_prime(&k, p).unwrap();
            total += 1;
            let s: u32 = ps.iter().map(|q| q.e * q.f).sum();
            assert_eq!(s, 4);
            for q in &ps {
                assert!(q.ideal.is_module(&k));
                assert_eq!(q.ideal.norm(), Rational::from(q.norm()));
                assert_eq!(q.valuation(&k, &k.from_int(p as i64)), q.e as i64);
            }
        }
        assert_eq!(total, 7);
    }

    #[test]
    fn minkowski_examples() {
        let b = minkowski_bound_disc(&Integer::from(125));
        assert!((b.to_f64() - 1.699).abs() < 1e-3);
        assert!((minkowski_bound_disc(&Integer::from(8000)).to_f64() - 13.59).abs() < 1e-2);
        assert!((minkowski_bound_disc(&Integer::from(4_000_000)).to_f64() - 303.9).abs() < 0.1);
    }

    #[test]
    fn inverse_and_principal() {
        let k = z5();
        let ps = split_prime(&k, 11).unwrap();
        let p = &ps[0].ideal;
        assert_eq!(p.mul(&k, &p.inv(&k).unwrap()), FracIdeal::unit());
        let g = p.principal_generator(&k).expect("class number one");
        assert_eq!(k.norm(&g).abs(), 11);
        assert_eq!(FracIdeal::principal(&k, &g).unwrap(), *p);
    }
}
