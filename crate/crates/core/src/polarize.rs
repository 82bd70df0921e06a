//! Principal polarizations: CM triples (I, xi, Phi), the Riemann and
//! Hermitian forms, symplectic bases and the polarizable set of classes.

use crate::arith::{IntMatrix, Integer, Rational};
use crate::ball::{Ball, ComplexBall};
use crate::classgroup::{ClassGroup, ClassLabel};
use crate::error::{Error, Result};
use crate::ideal::{inverse_different, FracIdeal};
use crate::nf::{CMField, CMType, NFElement};
use serde::{Deserialize, Serialize};

/// A principally polarized abelian surface with CM by O_K.
#[derive(Clone, Debug)]
pub struct CMTriple {
    pub ideal: FracIdeal,
    pub xi: NFElement,
    pub cm_type: CMType,
    /// class of the ideal, when known
    pub class: Option<ClassLabel>,
    /// exponent of eps in xi / xi_0 (diagnostic)
    pub eps_exponent: i64,
}

/// Z-basis e_1..e_4 of I with Tr(xi conj(e_i) e_j) = J_ij.
#[derive(Clone, Debug)]
pub struct SymplecticBasis {
    pub e: Vec<NFElement>,
}

/// Default range of eps exponents tried when searching polarizations.
pub const EPS_RANGE: i64 = 4;

/// Standard symplectic form with 1 at (i, i+2) and -1 at (i+2, i).
pub fn standard_j() -> IntMatrix {
    let mut j = IntMatrix::zeros(4, 4);
    j[(0, 2)] = Integer::from(1);
    j[(1, 3)] = Integer::from(1);
    j[(2, 0)] = Integer::from(-1);
    j[(3, 1)] = Integer::from(-1);
    j
}

/// Tr(xi conj(a) b).
pub fn trace_pairing(k: &CMField, xi: &NFElement, a: &NFElement, b: &NFElement) -> Rational {
    k.trace(&k.mul(&k.mul(xi, &k.apply_conj(a)), b))
}

/// E(Phi(a), Phi(b)) = -Tr(xi conj(a) b).
pub fn riemann_form(k: &CMField, t: &CMTriple, a: &NFElement, b: &NFElement) -> Rational {
    -trace_pairing(k, &t.xi, a, b)
}

/// H(Phi(a), Phi(b)) = -2i Tr_Phi(xi conj(a) b).
pub fn hermitian_form(k: &CMField, t: &CMTriple, a: &NFElement, b: &NFElement, prec: u32) -> ComplexBall {
    type_trace(k, &t.cm_type, &k.mul(&k.mul(&t.xi, &k.apply_conj(a)), b), prec).mul_i().mul_i64(-2)
}

/// Tr_Phi(x) = sum over phi in Phi of phi(x).
pub fn type_trace(k: &CMField, phi: &CMType, x: &NFElement, prec: u32) -> ComplexBall {
    k.embed(x, phi.0[0], prec).add(&k.embed(x, phi.0[1], prec))
}

/// Gram matrix of (a, b) -> Tr(xi conj(a) b) on the given elements.
pub fn pairing_gram(k: &CMField, xi: &NFElement, basis: &[NFElement]) -> Result<IntMatrix> {
    let n = basis.len();
    let mut g = IntMatrix::zeros(n, n);
    let conj: Vec<NFElement> = basis.iter().map(|b| k.mul(xi, &k.apply_conj(b))).collect();
    for i in 0..n {
        for j in 0..n {
            let t = k.trace(&k.mul(&conj[i], &basis[j]));
            if *t.denom() != 1 {
                return Err(Error::Domain("pairing is not integral on the lattice".into()));
            }
            g[(i, j)] = t.numer().clone();
        }
    }
    Ok(g)
}

pub fn pfaffian4(g: &IntMatrix) -> Integer {
    Integer::from(&g[(0, 1)] * &g[(2, 3)]) - Integer::from(&g[(0, 2)] * &g[(1, 3)])
        + Integer::from(&g[(0, 3)] * &g[(1, 2)])
}

fn pair(g: &IntMatrix, x: &[Integer], y: &[Integer]) -> Integer {
    let gy = g.mul_vec(y);
    x.iter().zip(&gy).map(|(a, b)| Integer::from(a * b)).sum()
}

fn ext_gcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    let (g, s, t) = a.clone().gcd_cofactors(b.clone(), Integer::new());
    (g, s, t)
}

/// Integral symplectic Gram-Schmidt: P with P^T G P = J and det P = 1,
/// for an alternating unimodular G.
pub fn symplectic_transform(g: &IntMatrix) -> Result<IntMatrix> {
    let n = g.rows;
    if n % 2 != 0 || n != g.cols {
        return Err(Error::Dimension("alternating form of odd size".into()));
    }
    let half = n / 2;
    let mut es: Vec<Vec<Integer>> = Vec::new();
    let mut fs: Vec<Vec<Integer>> = Vec::new();
    let mut w: Vec<Vec<Integer>> = IntMatrix::identity(n).columns();
    for _ in 0..half {
        // the pair with the smallest nonzero pairing goes first
        let mut best: Option<(usize, Integer)> = None;
        for (i, x) in w.iter().enumerate() {
            for y in &w {
                let c = pair(g, x, y).abs();
                if c != 0 && best.as_ref().map_or(true, |(_, b)| c < *b) {
                    best = Some((i, c));
                }
            }
        }
        let Some((i0, _)) = best else {
            return Err(Error::Failed("not unimodular: degenerate form".into()));
        };
        w.swap(0, i0);
        let e = w[0].clone();
        let c: Vec<Integer> = w.iter().map(|y| pair(g, &e, y)).collect();
        // Bezout: sum t_j c_j = gcd
        let mut gsum = Integer::new();
        let mut t = vec![Integer::new(); w.len()];
        for j in 0..w.len() {
            let (d, s1, s2) = ext_gcd(&gsum, &c[j]);
            for x in t.iter_mut().take(j) {
                *x *= &s1;
            }
            t[j] = s2;
            gsum = d;
        }
        if gsum != 1 {
            return Err(Error::Failed(format!("not unimodular: pairing gcd {}", gsum)));
        }
        let mut f = vec![Integer::new(); n];
        for (tj, y) in t.iter().zip(&w) {
            for r in 0..n {
                f[r] += Integer::from(tj * &y[r]);
            }
        }
        debug_assert_eq!(pair(g, &e, &f), 1);
        // project the rest onto the orthogonal complement of <e, f>
        let mut proj: Vec<Vec<Integer>> = Vec::new();
        for y in &w {
            let a = pair(g, &e, y);
            let b = pair(g, &f, y);
            let z: Vec<Integer> =
                (0..n).map(|r| Integer::from(&y[r] - &a * &f[r]) + Integer::from(&b * &e[r])).collect();
            if z.iter().any(|x| *x != 0) {
                proj.push(z);
            }
        }
        w = if proj.is_empty() { vec![] } else { IntMatrix::from_columns(&proj).hnf().columns() };
        es.push(e);
        fs.push(f);
    }
    let mut cols = es;
    cols.extend(fs);
    let p = IntMatrix::from_columns(&cols);
    let j = if n == 4 { standard_j() } else { std_j(n) };
    if p.transpose().mul(g).mul(&p) != j {
        return Err(Error::Failed("symplectic reduction did not reach J".into()));
    }
    Ok(p)
}

fn std_j(n: usize) -> IntMatrix {
    let h = n / 2;
    let mut j = IntMatrix::zeros(n, n);
    for i in 0..h {
        j[(i, i + h)] = Integer::from(1);
        j[(i + h, i)] = Integer::from(-1);
    }
    j
}

/// Symplectic Z-basis of I for the pairing Tr(xi conj(x) y).
pub fn symplectic_basis(k: &CMField, t: &CMTriple) -> Result<SymplecticBasis> {
    let b = t.ideal.reduced_basis(k);
    let g = pairing_gram(k, &t.xi, &b)?;
    let pf = pfaffian4(&g);
    if pf.clone().abs() != 1 {
        return Err(Error::Failed(format!("NotUnimodular: Pfaffian {}", pf)));
    }
    let p = symplectic_transform(&g)?;
    let e = (0..4)
        .map(|j| {
            let mut acc = NFElement::integer(0, 4);
            for i in 0..4 {
                if p[(i, j)] != 0 {
                    acc = k.add(&acc, &k.scale(&b[i], &Rational::from(p[(i, j)].clone())));
                }
            }
            acc
        })
        .collect();
    Ok(SymplecticBasis { e })
}

/// Checks that xi is totally imaginary and Im phi(xi) > 0 for phi in Phi.
pub fn is_phi_positive(k: &CMField, phi: &CMType, xi: &NFElement) -> Result<bool> {
    if k.apply_conj(xi) != k.neg(xi) {
        return Ok(false);
    }
    crate::ball::with_precision_retry(64, 4096, |prec| {
        let mut ok = true;
        for &j in &phi.0 {
            match k.embed(xi, j, prec).imag().is_positive() {
                Some(b) => ok &= b,
                None => return Err(Error::Indeterminate("sign of Im phi(xi)".into())),
            }
        }
        Ok(ok)
    })
}

/// Units u with u * xi0 totally imaginary, as (u, eps exponent); the unit
/// set is mu_K x <eta> x eps^[-r, r].
fn candidate_units(k: &CMField, range: i64) -> Result<Vec<(NFElement, i64)>> {
    let mut base = k.roots_of_unity.clone();
    if let Some(eta) = k.unit_index_witness() {
        let more: Vec<NFElement> = base.iter().map(|z| k.mul(z, &eta)).collect();
        base.extend(more);
    }
    let mut out = Vec::new();
    for e in -range..=range {
        let ek = k.pow(&k.eps, e)?;
        for z in &base {
            out.push((k.mul(z, &ek), e));
        }
    }
    Ok(out)
}

/// xi ~ xi' iff xi / xi' = v conj(v) for a unit v.
pub fn equivalent_polarizations(k: &CMField, a: &NFElement, b: &NFElement) -> Result<bool> {
    let r = k.div(a, b)?;
    if !r.is_integral() || k.apply_conj(&r) != r {
        return Ok(false);
    }
    // r is a totally positive unit of F; write r = eps^m
    let prec = 128;
    let lr = k.embed(&r, 0, prec).real();
    let le = k.embed(&k.eps, 0, prec).real();
    if lr.is_positive() != Some(true) {
        return Ok(false);
    }
    let m = lr.log()?.div(&le.log()?)?;
    let Some(ms) = m.integers_inside(2) else { return Ok(false) };
    if ms.len() != 1 {
        return Ok(false);
    }
    let m = ms[0].to_i64().unwrap_or(0);
    if k.pow(&k.eps, m)? != r {
        return Ok(false);
    }
    // norms v conj(v) form eps^(2Z), or eps^Z when some eta conj(eta) = eps
    if m % 2 == 0 {
        return Ok(true);
    }
    if let Some(eta) = k.unit_index_witness() {
        let n = k.mul(&eta, &k.apply_conj(&eta));
        return Ok(n == k.eps || n == k.pow(&k.eps, -1)?);
    }
    Ok(false)
}

/// Result of a polarization search on one ideal.
#[derive(Clone, Debug)]
pub struct PolarizationSearch {
    pub triples: Vec<CMTriple>,
    /// a kept representative needed the extreme eps exponent
    pub boundary_warning: bool,
}

/// All principal polarizations of (I, Phi) up to xi ~ v conj(v) xi.
pub fn find_polarizations(k: &CMField, phi: &CMType, ideal: &FracIdeal) -> Result<PolarizationSearch> {
    find_polarizations_range(k, phi, ideal, EPS_RANGE)
}

pub fn find_polarizations_range(
    k: &CMField,
    phi: &CMType,
    ideal: &FracIdeal,
    range: i64,
) -> Result<PolarizationSearch> {
    let none = PolarizationSearch { triples: vec![], boundary_warning: false };
    let target = polarization_ideal(k, ideal)?;
    let Some(xi0) = target.principal_generator(k) else { return Ok(none) };
    let mut cands = candidate_units(k, range)?;
    cands.sort_by_key(|(_, e)| e.abs());
    let mut kept: Vec<CMTriple> = Vec::new();
    let mut warn = false;
    for (u, e) in cands {
        let xi = k.mul(&u, &xi0);
        if !is_phi_positive(k, phi, &xi)? {
            continue;
        }
        let mut dup = false;
        for t in &kept {
            if equivalent_polarizations(k, &t.xi, &xi)? {
                dup = true;
                break;
            }
        }
        if !dup {
            warn |= e.abs() == range;
            kept.push(CMTriple { ideal: ideal.clone(), xi, cm_type: *phi, class: None, eps_exponent: e });
        }
    }
    Ok(PolarizationSearch { triples: kept, boundary_warning: warn })
}

/// D^{-1} (conj(I) I)^{-1}, the ideal a polarization xi must generate.
pub fn polarization_ideal(k: &CMField, ideal: &FracIdeal) -> Result<FracIdeal> {
    let ii = ideal.conj(k).mul(k, ideal);
    inverse_different(k).div(k, &ii)
}

/// Exact check of xi conj(I) I = D^{-1}.
pub fn check_triple(k: &CMField, t: &CMTriple) -> Result<bool> {
    let lhs = FracIdeal::principal(k, &t.xi)?.mul(k, &t.ideal.conj(k)).mul(k, &t.ideal);
    Ok(lhs == inverse_different(k) && is_phi_positive(k, &t.cm_type, &t.xi)?)
}

/// Triples over all ideal classes for one CM type, using minimal-norm
/// representatives.
pub fn triples_for_type(k: &CMField, g: &ClassGroup, phi: &CMType) -> Result<(Vec<CMTriple>, bool)> {
    let recs = g.min_norms(k)?;
    let mut out = Vec::new();
    let mut warn = false;
    for r in &recs {
        let ideal = g.record_ideal(k, r);
        let s = find_polarizations(k, phi, &ideal)?;
        warn |= s.boundary_warning;
        for mut t in s.triples {
            t.class = Some(r.class.clone());
            out.push(t);
        }
    }
    Ok((out, warn))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetReport {
    pub classes: Vec<ClassLabel>,
    /// #H: number of polarizable classes
    pub size: usize,
    pub h0_size: usize,
    /// polarizable set is a coset of H0
    pub is_h0_coset: bool,
    /// polarizable set is a union of H0 cosets
    pub is_h0_union: bool,
}

/// Classes [I] admitting a principal polarization of type Phi, compared with
/// the type-norm subgroup H0.
pub fn polarizable_coset(k: &CMField, g: &ClassGroup, phi: &CMType) -> Result<CosetReport> {
    let (ts, _) = triples_for_type(k, g, phi)?;
    let mut classes: Vec<ClassLabel> = ts.iter().filter_map(|t| t.class.clone()).collect();
    classes.sort();
    classes.dedup();
    let recs = g.min_norms(k)?;
    let mut h0 = g.type_norm_image(&recs);
    h0.sort();
    h0.dedup();
    let shift = |c: &ClassLabel| -> Vec<ClassLabel> {
        let mut v: Vec<ClassLabel> = h0.iter().map(|h| g.add(c, h)).collect();
        v.sort();
        v
    };
    let is_h0_coset = !classes.is_empty() && shift(&classes[0]) == classes;
    let is_h0_union = classes.iter().all(|c| shift(c).iter().all(|x| classes.contains(x)));
    Ok(CosetReport { size: classes.len(), h0_size: h0.len(), classes, is_h0_coset, is_h0_union })
}

/// Lower bound of the type-trace lemma for a pair of basis vectors.
pub fn type_trace_lower_bound(disc: &Integer, hii: &Ball, hjj: &Ball) -> Result<Ball> {
    let prec = hii.prec();
    let d = Ball::from_int(prec, disc);
    let a = crate::ball::root_n(&d, 4)?.recip()?;
    let b = d.sqrt()?.recip()?.mul_i64(2).div(&hii.add(hjj))?;
    Ok(a.min(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZPoly;

    #[test]
    fn symplectic_transform_small() {
        // J with a unimodular change of basis
        let u = IntMatrix::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 3, 0], vec![0, 0, 1, 5], vec![1, 2, 0, 2]]);
        assert_eq!(u.det().unwrap().abs(), 1);
        let g = u.transpose().mul(&standard_j()).mul(&u);
        assert_eq!(pfaffian4(&g).abs(), 1);
        let p = symplectic_transform(&g).unwrap();
        assert_eq!(p.transpose().mul(&g).mul(&p), standard_j());
    }

    #[test]
    fn q_zeta5_unit_ideal_is_polarizable() {
        let k = CMField::from_poly(&ZPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        for phi in k.cm_types() {
            let s = find_polarizations(&k, &phi, &FracIdeal::unit()).unwrap();
            assert_eq!(s.triples.len(), 1, "type {:?}", phi);
            assert!(!s.boundary_warning);
            let t = &s.triples[0];
            assert!(check_triple(&k, t).unwrap());
            let b = symplectic_basis(&k, t).unwrap();
            let g = pairing_gram(&k, &t.xi, &b.e).unwrap();
            assert_eq!(g, standard_j());
            // Riemann form alternates, H is positive on basis vectors
            for x in &b.e {
                assert_eq!(riemann_form(&k, t, x, x), 0);
                let h = hermitian_form(&k, t, x, x, 128);
                assert_eq!(h.real().is_positive(), Some(true));
                assert!(h.imag().contains_zero());
            }
            let h = hermitian_form(&k, t, &b.e[0], &b.e[2], 128);
            let e = riemann_form(&k, t, &b.e[0], &b.e[2]);
            assert!(h.imag().contains_rat(&e));
        }
    }
}
