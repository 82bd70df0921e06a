//! Small-dimensional lattice tools on exact integer Gram matrices: LLL
//! reduction and Fincke-Pohst enumeration. Floating point only steers the
//! search; every returned vector is checked against the exact form.

use crate::arith::{IntMatrix, Integer};

fn gram_f64(g: &IntMatrix) -> Vec<Vec<f64>> {
    (0..g.rows).map(|i| (0..g.cols).map(|j| g[(i, j)].to_f64()).collect()).collect()
}

/// Quadratic form value x^T G x, exact.
pub fn qf(g: &IntMatrix, x: &[Integer]) -> Integer {
    let gx = g.mul_vec(x);
    let mut s = Integer::new();
    for (a, b) in x.iter().zip(&gx) {
        s += a * b;
    }
    s
}

/// LLL-reduce the lattice with Gram matrix `g` (delta = 0.99). Returns the
/// unimodular U whose columns express the reduced basis in the old one.
pub fn lll_gram(g: &IntMatrix) -> IntMatrix {
    let n = g.rows;
    let mut u = IntMatrix::identity(n);
    let mut gg = g.clone();
    let mut k = 1;
    let mut guard = 0;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        let gf = gram_f64(&gg);
        let (mu, bstar) = gso(&gf);
        // size reduce b_k against b_{k-1} .. b_0
        let mut changed = false;
        for j in (0..k).rev() {
            let (mu, _) = gso(&gram_f64(&gg));
            let q = mu[k][j].round();
            if q != 0.0 && q.is_finite() {
                let qi = Integer::from_f64(q).unwrap_or_default();
                col_sub(&mut u, k, j, &qi);
                gg = transform(g, &u);
                changed = true;
            }
        }
        let (mu2, bstar2) = if changed { gso(&gram_f64(&gg)) } else { (mu, bstar) };
        if bstar2[k] >= (0.99 - mu2[k][k - 1] * mu2[k][k - 1]) * bstar2[k - 1] {
            k += 1;
        } else {
            u.swap_cols(k, k - 1);
            gg = transform(g, &u);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    u
}

fn col_sub(u: &mut IntMatrix, k: usize, j: usize, q: &Integer) {
    for i in 0..u.rows {
        let t = Integer::from(&u[(i, j)] * q);
        u[(i, k)] -= t;
    }
}

/// U^T G U
pub fn transform(g: &IntMatrix, u: &IntMatrix) -> IntMatrix {
    u.transpose().mul(g).mul(u)
}

fn gso(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut r = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= mu[j][k] * r[i][k];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = if r[j][j] != 0.0 { s / r[j][j] } else { 0.0 };
            }
        }
        bstar[i] = r[i][i];
        mu[i][i] = 1.0;
    }
    (mu, bstar)
}

/// All nonzero x with x^T G x <= bound (both signs), for positive definite G.
/// The search runs on an LLL-reduced basis and results are mapped back.
pub fn short_vectors(g: &IntMatrix, bound: &Integer) -> Vec<Vec<Integer>> {
    short_vectors_limited(g, bound, usize::MAX).unwrap_or_default()
}

/// As `short_vectors`, giving up (None) once more than `limit` are found.
pub fn short_vectors_limited(g: &IntMatrix, bound: &Integer, limit: usize) -> Option<Vec<Vec<Integer>>> {
    let n = g.rows;
    let u = lll_gram(g);
    let gr = transform(g, &u);
    let gf = gram_f64(&gr);
    // Cholesky-style coefficients: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = gf[i][j];
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let c = bound.to_f64() * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    // recursive enumeration from the last coordinate
    fn rec(
        i: usize,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        rem: f64,
        out: &mut Vec<Vec<i64>>,
        limit: usize,
    ) -> bool {
        let n = x.len();
        let mut center = 0.0;
        for j in i + 1..n {
            center -= q[i][j] * x[j] as f64;
        }
        let w = (rem / q[i][i]).max(0.0).sqrt();
        let lo = (center - w - 1e-9).ceil() as i64;
        let hi = (center + w + 1e-9).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - center;
            let r = rem - q[i][i] * d * d;
            if r < -1e-9 * rem.abs().max(1.0) {
                continue;
            }
            if i == 0 {
                if x.iter().any(|&a| a != 0) {
                    out.push(x.clone());
                    if out.len() > limit {
                        return false;
                    }
                }
            } else if !rec(i - 1, q, x, r, out, limit) {
                return false;
            }
        }
        x[i] = 0;
        true
    }
    let mut raw = Vec::new();
    let ok = rec(n - 1, &q, &mut x, c, &mut raw, limit.saturating_mul(2).saturating_add(8));
    if !ok {
        return None;
    }
    for v in raw {
        let vi: Vec<Integer> = v.iter().map(|&a| Integer::from(a)).collect();
        if qf(&gr, &vi) <= *bound {
            out.push(u.mul_vec(&vi));
        }
    }
    if out.len() > limit {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_reduces_skewed_basis() {
        // Z^2 with basis (1,0), (1000,1)
        let b = IntMatrix::from_rows(&[vec![1i64, 1000], vec![0, 1]]);
        let g = b.transpose().mul(&b);
        let u = lll_gram(&g);
        let gr = transform(&g, &u);
        assert_eq!(gr[(0, 0)], 1);
        assert_eq!(gr[(1, 1)], 1);
        assert_eq!(u.det().unwrap().abs(), 1);
    }

    #[test]
    fn enumerate_z2() {
        let g = IntMatrix::identity(2);
        let v = short_vectors(&g, &Integer::from(2));
        assert_eq!(v.len(), 8);
        let v = short_vectors(&g, &Integer::from(1));
        assert_eq!(v.len(), 4);
    }
}
