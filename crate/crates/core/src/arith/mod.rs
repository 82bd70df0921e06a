//! Exact integer and rational arithmetic: matrices in Hermite/Smith form,
//! integer polynomials and factorisation over prime fields.

pub mod intmatrix;
pub mod modp;
pub mod zpoly;

pub use intmatrix::{IntMatrix, RatMatrix};
pub use zpoly::{factor_mod_p, ZPoly};

pub use rug::{Integer, Rational};

pub type BigInt = Integer;
pub type BigRat = Rational;

use rand::Rng;
use rug::ops::Pow;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parse a decimal string into an integer.
pub fn parse_int(s: &str) -> Option<Integer> {
    Integer::from_str_radix(s.trim(), 10).ok()
}

/// Parse a decimal string such as "-1.25", "3/4" or "1e-3" exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (parse_int(a)?, parse_int(b)?);
        return if b == 0 { None } else { Some(Rational::from((a, b))) };
    }
    let (m, e) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, m) = match m.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, m.strip_prefix('+').unwrap_or(m)),
    };
    let (ip, fp) = m.split_once('.').unwrap_or((m, ""));
    if ip.is_empty() && fp.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", ip, fp);
    let mut q = Rational::from(Integer::from_str_radix(&digits, 10).ok()?);
    let exp = e - fp.len() as i32;
    let ten = Rational::from(Integer::from(10).pow(exp.unsigned_abs()));
    if exp >= 0 {
        q *= ten;
    } else {
        q /= ten;
    }
    Some(if neg { -q } else { q })
}

pub fn is_prime(n: &Integer) -> bool {
    if *n < 2 {
        return false;
    }
    if let Some(v) = n.to_u64() {
        if v < 1 << 32 {
            return is_prime_u64(v);
        }
    }
    n.is_probably_prime(40) != rug::integer::IsPrime::No
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = modp::pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = modp::mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Factor |n| into primes with multiplicities, sorted by prime.
pub fn factor_integer(n: &Integer) -> Vec<(Integer, u32)> {
    let mut m = n.clone().abs();
    let mut out: Vec<(Integer, u32)> = Vec::new();
    if m <= 1 {
        return out;
    }
    for p in primes_up_to(10_000) {
        if m == 1 {
            break;
        }
        let mut e = 0;
        while m.is_divisible_u(p as u32) {
            m /= p as u32;
            e += 1;
        }
        if e > 0 {
            out.push((Integer::from(p), e));
        }
    }
    let mut stack = vec![m];
    let mut big: Vec<Integer> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(&m) {
            big.push(m);
            continue;
        }
        if m.is_perfect_square() {
            let r = m.clone().sqrt();
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = pollard_brent(&m);
        let q = Integer::from(&m / &d);
        stack.push(d);
        stack.push(q);
    }
    big.sort();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn pollard_brent(n: &Integer) -> Integer {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    loop {
        let c = Integer::from(rng.gen_range(1u64..1_000_000));
        let mut y = Integer::from(rng.gen_range(2u64..1_000_000));
        let m = 128u64;
        let mut g = Integer::from(1);
        let mut r = 1u64;
        let mut q = Integer::from(1);
        let mut x = Integer::new();
        let mut ys = Integer::new();
        let f = |v: &Integer| -> Integer { (Integer::from(v * v) + &c) % n };
        while g == 1 {
            x.clone_from(&y);
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys.clone_from(&y);
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * Integer::from(&x - &y).abs()) % n;
                }
                g = q.clone().gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = Integer::from(&x - &ys).abs().gcd(n);
                if g > 1 {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
}

/// Floor of a rational.
pub fn rat_floor(q: &Rational) -> Integer {
    q.clone().floor().into_numer_denom().0
}

/// Nearest integer, ties rounded down so that x - round(x) lies in [-1/2, 1/2).
pub fn rat_round(q: &Rational) -> Integer {
    rat_floor(&(q.clone() + Rational::from((1, 2))))
}

/// Squarefree kernel part: n = s * m^2 with s squarefree, returns s (sign kept).
pub fn squarefree_part(n: &Integer) -> Integer {
    let mut s = Integer::from(n.signum_ref());
    for (p, e) in factor_integer(n) {
        if e % 2 == 1 {
            s *= p;
        }
    }
    s
}

/// Fundamental discriminant of Q(sqrt(d)) for nonsquare d.
pub fn fundamental_discriminant(d: &Integer) -> Integer {
    let s = squarefree_part(d);
    let r = Integer::from(s.mod_u(4));
    if r == 1 {
        s
    } else {
        s * 4
    }
}

/// Kronecker symbol (d/n) for n >= 1.
pub fn kronecker(d: &Integer, n: u64) -> i32 {
    d.kronecker(&Integer::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factoring() {
        let n = Integer::from(2u64.pow(10)) * 3 * 1_000_003u64 * 1_000_003u64 * 998_244_353u64;
        let f = factor_integer(&n);
        assert_eq!(
            f,
            vec![
                (Integer::from(2), 10),
                (Integer::from(3), 1),
                (Integer::from(1_000_003), 2),
                (Integer::from(998_244_353), 1)
            ]
        );
        let m = Integer::from(1_000_000_007u64) * 1_000_000_009u64;
        assert_eq!(factor_integer(&m).len(), 2);
    }

    #[test]
    fn fund_disc() {
        assert_eq!(fundamental_discriminant(&Integer::from(5)), 5);
        assert_eq!(fundamental_discriminant(&Integer::from(2)), 8);
        assert_eq!(fundamental_discriminant(&Integer::from(20)), 5);
        assert_eq!(fundamental_discriminant(&Integer::from(40)), 40);
        assert_eq!(fundamental_discriminant(&Integer::from(-1)), -4);
    }

    #[test]
    fn rounding_half_open() {
        assert_eq!(rat_round(&Rational::from((1, 2))), 1);
        assert_eq!(rat_round(&Rational::from((-1, 2))), 0);
        assert_eq!(rat_round(&Rational::from((-7, 5))), -1);
    }
}
