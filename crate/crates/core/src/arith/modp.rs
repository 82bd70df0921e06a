//! Arithmetic in F_p for word-sized primes: scalars, dense polynomials and
//! small linear algebra.

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    pow_mod(a, p - 2, p)
}

/// Polynomials over F_p, coefficients low to high, no trailing zeros.
pub type Poly = Vec<u64>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &Poly) -> isize {
    f.len() as isize - 1
}

pub fn padd(f: &Poly, g: &Poly, p: u64) -> Poly {
    let n = f.len().max(g.len());
    let r = (0..n)
        .map(|i| add_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(r)
}

pub fn psub(f: &Poly, g: &Poly, p: u64) -> Poly {
    let n = f.len().max(g.len());
    let r = (0..n)
        .map(|i| sub_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(r)
}

pub fn pmul(f: &Poly, g: &Poly, p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            r[i + j] = add_mod(r[i + j], mul_mod(a, b, p), p);
        }
    }
    trim(r)
}

pub fn pscale(f: &Poly, c: u64, p: u64) -> Poly {
    trim(f.iter().map(|&a| mul_mod(a, c, p)).collect())
}

/// Quotient and remainder; g must be nonzero.
pub fn pdivrem(f: &Poly, g: &Poly, p: u64) -> (Poly, Poly) {
    let mut r = f.clone();
    if r.len() < g.len() {
        return (vec![], r);
    }
    let dg = g.len() - 1;
    let lc_inv = inv_mod(g[dg], p);
    let mut q = vec![0u64; r.len() - dg];
    for i in (0..q.len()).rev() {
        let c = mul_mod(r[i + dg], lc_inv, p);
        q[i] = c;
        if c != 0 {
            for j in 0..=dg {
                r[i + j] = sub_mod(r[i + j], mul_mod(c, g[j], p), p);
            }
        }
    }
    r.truncate(dg);
    (trim(q), trim(r))
}

pub fn prem(f: &Poly, g: &Poly, p: u64) -> Poly {
    pdivrem(f, g, p).1
}

pub fn monic(f: &Poly, p: u64) -> Poly {
    match f.last() {
        None => vec![],
        Some(&lc) => pscale(f, inv_mod(lc, p), p),
    }
}

pub fn pgcd(f: &Poly, g: &Poly, p: u64) -> Poly {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn pderiv(f: &Poly, p: u64) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, (i as u64) % p, p))
            .collect(),
    )
}

/// f^e mod m.
pub fn ppowmod(f: &Poly, mut e: u128, m: &Poly, p: u64) -> Poly {
    let mut r: Poly = prem(&vec![1], m, p);
    let mut b = prem(f, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = prem(&pmul(&r, &b, p), m, p);
        }
        b = prem(&pmul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| m[k][c] != 0) else {
            continue;
        };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for k in 0..rows {
            if k != r && m[k][c] != 0 {
                let f = m[k][c];
                for j in 0..cols {
                    let v = mul_mod(f, m[r][j], p);
                    m[k][j] = sub_mod(m[k][j], v, p);
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

/// Basis of the right kernel {x : M x = 0} of a rows x cols matrix.
pub fn kernel(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let piv = rref(&mut a, p);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = sub_mod(0, a[r][f], p);
            }
            v
        })
        .collect()
}

pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, p).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_powmod() {
        let p = 7;
        let f = pmul(&vec![1, 1], &vec![2, 1], p);
        let g = pmul(&vec![1, 1], &vec![3, 1], p);
        assert_eq!(pgcd(&f, &g, p), vec![1, 1]);
        // x^7 = x mod (x^2+1) over F_7 is x^(7) ; x^2=-1 -> x^7 = x*(x^2)^3 = -x
        let m = vec![1, 0, 1];
        assert_eq!(ppowmod(&vec![0, 1], 7, &m, p), vec![0, 6]);
    }

    #[test]
    fn kernel_dim() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = kernel(&m, 3, 11);
        assert_eq!(k.len(), 2);
        for v in k {
            for row in &m {
                let s = row.iter().zip(&v).fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, 11), 11));
                assert_eq!(s, 0);
            }
        }
    }
}
