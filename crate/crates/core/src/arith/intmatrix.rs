//! Dense integer and rational matrices.
//!
//! Hermite forms are column-style: the columns of the result span the same
//! lattice as the columns of the input, the result is upper triangular,
//! pivots are positive and every entry to the right of a pivot lies in
//! `[0, pivot)`.

use super::{Integer, Rational};
use crate::error::{Error, Result};
use std::fmt;

/// Floor division.
pub fn fdiv(a: &Integer, b: &Integer) -> Integer {
    a.clone().div_rem_floor(b.clone()).0
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Integer>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Integer;
    fn index(&self, (i, j): (usize, usize)) -> &Integer {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Integer {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Integer::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Integer::from(1);
        }
        m
    }

    pub fn from_rows<T: Into<Integer> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Integer>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(d: &[Integer]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<Integer> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Integer> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Integer>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut r = Self::zeros(self.rows, o.cols);
        let mut acc;
        for i in 0..self.rows {
            for j in 0..o.cols {
                acc = Integer::new();
                for k in 0..self.cols {
                    let a = &self[(i, k)];
                    if *a != 0 {
                        acc += a * &o[(k, j)];
                    }
                }
                r[(i, j)].clone_from(&acc);
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Integer]) -> Vec<Integer> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Integer::new();
                for (k, x) in v.iter().enumerate() {
                    acc += &self[(i, k)] * x;
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Integer> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Integer::from(1));
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                let Some(r) = (k + 1..n).find(|&r| a[(r, k)] != 0) else {
                    return Ok(Integer::new());
                };
                a.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = Integer::from(&a[(i, j)] * &a[(k, k)]) - Integer::from(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_a <- col_a + c * col_b
    fn addmul_col(&mut self, a: usize, b: usize, c: &Integer) {
        if *c == 0 {
            return;
        }
        for i in 0..self.rows {
            let t = Integer::from(&self[(i, b)] * c);
            self[(i, a)] += t;
        }
    }

    /// row_a <- row_a + c * row_b
    fn addmul_row(&mut self, a: usize, b: usize, c: &Integer) {
        if *c == 0 {
            return;
        }
        for j in 0..self.cols {
            let t = Integer::from(&self[(b, j)] * c);
            self[(a, j)] += t;
        }
    }

    /// (col_a, col_b) <- (s col_a + t col_b, u col_a + v col_b)
    fn combine_cols(&mut self, a: usize, b: usize, s: &Integer, t: &Integer, u: &Integer, v: &Integer) {
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = Integer::from(s * &x) + Integer::from(t * &y);
            self[(i, b)] = Integer::from(u * &x) + Integer::from(v * &y);
        }
    }

    fn combine_rows(&mut self, a: usize, b: usize, s: &Integer, t: &Integer, u: &Integer, v: &Integer) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = Integer::from(s * &x) + Integer::from(t * &y);
            self[(b, j)] = Integer::from(u * &x) + Integer::from(v * &y);
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, a)]);
            self[(i, a)] = v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(a, j)]);
            self[(a, j)] = v;
        }
    }

    /// Column-style Hermite normal form. The result has one column per
    /// pivot; for a lattice of full rank it is square upper triangular.
    pub fn hnf(&self) -> IntMatrix {
        let mut h = self.clone();
        let n = h.rows;
        let m = h.cols;
        if m == 0 {
            return IntMatrix::zeros(n, 0);
        }
        // pivot column for the current row, moving leftwards
        let mut k = m as isize - 1;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for i in (0..n).rev() {
            if k < 0 {
                break;
            }
            let ku = k as usize;
            loop {
                // bring the smallest nonzero entry of row i (cols 0..=k) to col k
                let mut best: Option<usize> = None;
                for j in 0..=ku {
                    if h[(i, j)] != 0 {
                        match best {
                            Some(b) if h[(i, b)].cmp_abs(&h[(i, j)]) != std::cmp::Ordering::Greater => {}
                            _ => best = Some(j),
                        }
                    }
                }
                let Some(b) = best else { break };
                h.swap_cols(b, ku);
                let mut done = true;
                for j in 0..ku {
                    if h[(i, j)] != 0 {
                        let q = fdiv(&h[(i, j)], &h[(i, ku)]);
                        h.addmul_col(j, ku, &Integer::from(-q));
                        if h[(i, j)] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if h[(i, ku)] == 0 {
                continue;
            }
            if h[(i, ku)] < 0 {
                h.negate_col(ku);
            }
            pivots.push((i, ku));
            k -= 1;
        }
        // reduce entries to the right of each pivot, bottom pivots first
        for &(i, c) in &pivots {
            for j in c + 1..m {
                let q = fdiv(&h[(i, j)], &h[(i, c)]);
                if q != 0 {
                    h.addmul_col(j, c, &Integer::from(-q));
                }
            }
        }
        let first = (k + 1) as usize;
        let mut out = IntMatrix::zeros(n, m - first);
        for i in 0..n {
            for j in first..m {
                out[(i, j - first)] = h[(i, j)].clone();
            }
        }
        out
    }

    /// Smith normal form: returns (D, L, R) with L * self * R = D.
    pub fn snf(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let (n, m) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut l = IntMatrix::identity(n);
        let mut r = IntMatrix::identity(m);
        let mut t = 0;
        while t < n.min(m) {
            // smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    if a[(i, j)] != 0 {
                        match best {
                            Some((bi, bj)) if a[(bi, bj)].cmp_abs(&a[(i, j)]) != std::cmp::Ordering::Greater => {}
                            _ => best = Some((i, j)),
                        }
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap_rows(t, bi);
            l.swap_rows(t, bi);
            a.swap_cols(t, bj);
            r.swap_cols(t, bj);
            loop {
                let mut clean = true;
                for i in t + 1..n {
                    if a[(i, t)] != 0 {
                        let x = a[(t, t)].clone();
                        let y = a[(i, t)].clone();
                        if y.is_divisible(&x) {
                            let q = -Integer::from(&y / &x);
                            a.addmul_row(i, t, &q);
                            l.addmul_row(i, t, &q);
                        } else {
                            let (g, s, tt) = x.clone().gcd_cofactors(y.clone(), Integer::new());
                            let u = Integer::from(-&y) / &g;
                            let v = Integer::from(&x / &g);
                            a.combine_rows(t, i, &s, &tt, &u, &v);
                            l.combine_rows(t, i, &s, &tt, &u, &v);
                            clean = false;
                        }
                    }
                }
                for j in t + 1..m {
                    if a[(t, j)] != 0 {
                        let x = a[(t, t)].clone();
                        let y = a[(t, j)].clone();
                        if y.is_divisible(&x) {
                            let q = -Integer::from(&y / &x);
                            a.addmul_col(j, t, &q);
                            r.addmul_col(j, t, &q);
                        } else {
                            let (g, s, tt) = x.clone().gcd_cofactors(y.clone(), Integer::new());
                            let u = Integer::from(-&y) / &g;
                            let v = Integer::from(&x / &g);
                            a.combine_cols(t, j, &s, &tt, &u, &v);
                            r.combine_cols(t, j, &s, &tt, &u, &v);
                            clean = false;
                        }
                    }
                }
                if !clean {
                    continue;
                }
                // divisibility of the remaining block
                let mut bad: Option<usize> = None;
                'f: for i in t + 1..n {
                    for j in t + 1..m {
                        if !a[(i, j)].is_divisible(&a[(t, t)]) {
                            bad = Some(i);
                            break 'f;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let one = Integer::from(1);
                        a.addmul_row(t, i, &one);
                        l.addmul_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if a[(t, t)] < 0 {
                a.negate_row(t);
                l.negate_row(t);
            }
            t += 1;
        }
        (a, l, r)
    }

    /// Elementary divisors (diagonal of the Smith form, zeros included).
    pub fn elementary_divisors(&self) -> Vec<Integer> {
        let (d, _, _) = self.snf();
        (0..d.rows.min(d.cols)).map(|i| d[(i, i)].clone()).collect()
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rational::from(x)).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from(1);
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, o.rows);
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Rational::new();
                for k in 0..self.cols {
                    if self[(i, k)] != 0 {
                        acc += Rational::from(&self[(i, k)] * &o[(k, j)]);
                    }
                }
                r[(i, j)] = acc;
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (k, x) in v.iter().enumerate() {
                    acc += Rational::from(&self[(i, k)] * x);
                }
                acc
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[(r, c)] != 0) else {
                return Err(Error::Singular);
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[(c, c)].clone().recip();
            for j in 0..n {
                a[(c, j)] *= &piv;
                inv[(c, j)] *= &piv;
            }
            for r in 0..n {
                if r != c && a[(r, c)] != 0 {
                    let f = a[(r, c)].clone();
                    for j in 0..n {
                        let t = Rational::from(&f * &a[(c, j)]);
                        a[(r, j)] -= t;
                        let t = Rational::from(&f * &inv[(c, j)]);
                        inv[(r, j)] -= t;
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut d = Rational::from(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[(r, c)] != 0) else {
                return Ok(Rational::new());
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                d = -d;
            }
            d *= &a[(c, c)];
            for r in c + 1..n {
                if a[(r, c)] != 0 {
                    let f = Rational::from(&a[(r, c)] / &a[(c, c)]);
                    for j in c..n {
                        let t = Rational::from(&f * &a[(c, j)]);
                        a[(r, j)] -= t;
                    }
                }
            }
        }
        Ok(d)
    }

    /// Common denominator and integer numerator matrix.
    pub fn to_int_with_den(&self) -> (IntMatrix, Integer) {
        let mut den = Integer::from(1);
        for x in &self.data {
            den.lcm_mut(x.denom());
        }
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (k, x) in self.data.iter().enumerate() {
            m.data[k] = Integer::from(x.numer() * &den) / x.denom();
        }
        (m, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(r: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(r)
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(IntMatrix::identity(4).hnf(), IntMatrix::identity(4));
        let m = im(&[vec![2, 1], vec![0, 1]]);
        assert_eq!(m.hnf(), m);
        let m = im(&[vec![4, 6, 2], vec![1, 3, 5]]);
        let h = m.hnf();
        assert_eq!(h.cols, 2);
        assert_eq!(h[(1, 0)], 0);
        assert_eq!(h.det().unwrap().abs(), 6);
    }

    #[test]
    fn snf_examples() {
        let d = im(&[vec![2, 0], vec![0, 3]]).elementary_divisors();
        assert_eq!(d, vec![Integer::from(1), Integer::from(6)]);
        let m = im(&[vec![4, 2], vec![2, 4]]);
        let (d, l, r) = m.snf();
        assert_eq!(d, im(&[vec![2, 0], vec![0, 6]]));
        assert_eq!(l.mul(&m).mul(&r), d);
        assert_eq!(l.det().unwrap().abs(), 1);
        assert_eq!(r.det().unwrap().abs(), 1);
        assert_eq!(IntMatrix::identity(2).snf().0, IntMatrix::identity(2));
    }

    #[test]
    fn det_and_inverse() {
        let m = im(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.det().unwrap(), 18);
        let inv = m.to_rat().inverse().unwrap();
        assert_eq!(m.to_rat().mul(&inv), RatMatrix::identity(3));
        assert_eq!(m.to_rat().det().unwrap(), 18);
    }
}
