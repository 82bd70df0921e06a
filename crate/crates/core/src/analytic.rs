//! Ideal counting, smoothed ideal sums over class-group characters, the
//! Dedekind zeta residue, explicit subconvexity constants and the elementary
//! bounds feeding the final discriminant bound.

use crate::arith::{Integer, Rational};
use crate::ball::{Ball, ComplexBall};
use crate::character::frobenius_exponent;
use crate::classgroup::{ClassGroup, ClassLabel};
use crate::error::{Error, Result};
use crate::ideal::split_prime;
use crate::nf::CMField;
use crate::siegel::Check;
use rug::Float;
use serde::{Deserialize, Serialize};

/// Mixed-radix indexing of Cl_K = prod Z/d_j (first coordinate fastest).
#[derive(Clone, Debug)]
pub struct ClassIndexer {
    pub divisors: Vec<i64>,
    pub h: usize,
    add: Vec<usize>,
}

impl ClassIndexer {
    pub fn new(divisors: &[i64]) -> ClassIndexer {
        let h = divisors.iter().product::<i64>().max(1) as usize;
        let mut ix = ClassIndexer { divisors: divisors.to_vec(), h, add: Vec::new() };
        let labels: Vec<ClassLabel> = (0..h).map(|i| ix.label(i)).collect();
        let mut add = vec![0; h * h];
        for a in 0..h {
            for b in 0..h {
                let s: ClassLabel =
                    labels[a].iter().zip(&labels[b]).zip(divisors).map(|((x, y), d)| (x + y).rem_euclid(*d)).collect();
                add[a * h + b] = ix.index(&s);
            }
        }
        ix.add = add;
        ix
    }

    pub fn index(&self, c: &[i64]) -> usize {
        let mut i = 0usize;
        let mut stride = 1usize;
        for (x, d) in c.iter().zip(&self.divisors) {
            i += x.rem_euclid(*d) as usize * stride;
            stride *= *d as usize;
        }
        i
    }

    pub fn label(&self, mut i: usize) -> ClassLabel {
        self.divisors
            .iter()
            .map(|&d| {
                let x = (i % d as usize) as i64;
                i /= d as usize;
                x
            })
            .collect()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.h + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        let l: ClassLabel = self.label(a).iter().map(|x| -x).collect();
        self.index(&l)
    }

    /// chi_e(c) = exp(2 pi i sum e_j c_j / d_j), returned as k / L with
    /// L = lcm of the divisors.
    pub fn character_angle(&self, e: usize, c: usize) -> (u64, u64) {
        let l = self.divisors.iter().fold(1i64, |a, &d| a / gcd(a, d) * d).max(1);
        let (ee, cc) = (self.label(e), self.label(c));
        let k: i64 = ee.iter().zip(&cc).zip(&self.divisors).map(|((x, y), d)| x * y * (l / d)).sum();
        (k.rem_euclid(l) as u64, l as u64)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A prime ideal of norm at most the table cutoff, with its class index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: u64,
    pub norm: u64,
    pub class: usize,
}

fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Prime ideals of norm <= max_norm. Without a class group every class is 0.
/// Since h_F = 1 and sigma^2 is complex conjugation, P conj(P) and, for
/// residue degree 2, P sigma(P) are principal; so two discrete logs per
/// split prime suffice.
pub fn prime_records(k: &CMField, g: Option<(&ClassGroup, &ClassIndexer)>, max_norm: u64) -> Result<Vec<PrimeRecord>> {
    if k.quad.h != 1 {
        return Err(Error::Domain("real subfield with class number > 1".into()));
    }
    let mut out = Vec::new();
    let cls = |j: &crate::ideal::FracIdeal| -> Result<usize> {
        match g {
            Some((g, ix)) if ix.h > 1 => Ok(ix.index(&g.dlog(k, j)?)),
            _ => Ok(0),
        }
    };
    let nontrivial = matches!(g, Some((_, ix)) if ix.h > 1);
    for p in primes_upto(max_norm) {
        if k.disc.is_divisible_u(p as u32) {
            for q in split_prime(k, p)? {
                let nq = q.norm().to_u64().unwrap_or(u64::MAX);
                if nq <= max_norm {
                    out.push(PrimeRecord { p, norm: nq, class: cls(&q.ideal)? });
                }
            }
            continue;
        }
        let fe = frobenius_exponent(k, p)?;
        match fe {
            0 => {
                if nontrivial {
                    let s = split_prime(k, p)?;
                    let (gg, ix) = g.expect("class group");
                    let c0 = ix.index(&gg.dlog(k, &s[0].ideal)?);
                    let c1 = ix.index(&gg.dlog(k, &s[0].ideal.sigma(k))?);
                    for c in [c0, c1, ix.neg(c0), ix.neg(c1)] {
                        out.push(PrimeRecord { p, norm: p, class: c });
                    }
                } else {
                    for _ in 0..4 {
                        out.push(PrimeRecord { p, norm: p, class: 0 });
                    }
                }
            }
            2 => {
                if p.checked_mul(p).map_or(false, |q| q <= max_norm) {
                    let c = if nontrivial {
                        let s = split_prime(k, p)?;
                        cls(&s[0].ideal)?
                    } else {
                        0
                    };
                    let c1 = match g {
                        Some((_, ix)) => ix.neg(c),
                        None => 0,
                    };
                    out.push(PrimeRecord { p, norm: p * p, class: c });
                    out.push(PrimeRecord { p, norm: p * p, class: c1 });
                }
            }
            _ => {
                if let Some(q) = p.checked_pow(4) {
                    if q <= max_norm {
                        out.push(PrimeRecord { p, norm: q, class: 0 });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Number of integral ideals of each norm n <= cutoff, split by class.
#[derive(Clone, Debug)]
pub struct IdealCountTable {
    pub cutoff: u64,
    pub h: usize,
    /// counts[n * h + c]
    counts: Vec<u32>,
}

impl IdealCountTable {
    pub fn count(&self, c: usize, n: u64) -> u32 {
        self.counts[n as usize * self.h + c]
    }

    pub fn total(&self, n: u64) -> u64 {
        let i = n as usize * self.h;
        self.counts[i..i + self.h].iter().map(|&x| x as u64).sum()
    }

    pub fn totals(&self) -> Vec<u64> {
        (0..=self.cutoff).map(|n| self.total(n)).collect()
    }

    /// Least norm of an integral ideal in class c, if below the cutoff.
    pub fn min_norm(&self, c: usize) -> Option<u64> {
        (1..=self.cutoff).find(|&n| self.count(c, n) > 0)
    }
}

/// Ideal counts from prime records: multiplying in each prime ideal's
/// geometric series in increasing order of multiples.
pub fn ideal_counts_from(records: &[PrimeRecord], ix: &ClassIndexer, cutoff: u64) -> IdealCountTable {
    let h = ix.h;
    let mut counts = vec![0u32; (cutoff as usize + 1) * h];
    if cutoff >= 1 {
        counts[h] = 1;
    }
    for r in records {
        let q = r.norm;
        let mut m = 1u64;
        while m * q <= cutoff {
            let (src, dst) = (m as usize * h, (m * q) as usize * h);
            for d in 0..h {
                let v = counts[src + d];
                if v != 0 {
                    counts[dst + ix.add(d, r.class)] += v;
                }
            }
            m += 1;
        }
    }
    IdealCountTable { cutoff, h, counts }
}

/// Ideal counts of norm <= x split by class.
pub fn ideal_counts(k: &CMField, g: &ClassGroup, x: u64) -> Result<(IdealCountTable, ClassIndexer)> {
    let ix = ClassIndexer::new(&g.divisors);
    let recs = prime_records(k, Some((g, &ix)), x)?;
    Ok((ideal_counts_from(&recs, &ix, x), ix))
}

/// Ideal counts of norm <= x without class information.
pub fn ideal_counts_plain(k: &CMField, x: u64) -> Result<IdealCountTable> {
    let ix = ClassIndexer::new(&[]);
    let recs = prime_records(k, None, x)?;
    Ok(ideal_counts_from(&recs, &ix, x))
}

/// f(y) = y^{-1/2} e^{-y}.
pub fn smoothing(y: &Ball) -> Result<Ball> {
    Ok(y.sqrt()?.recip()?.mul(&y.neg().exp()))
}

/// Upper bound for sum_{n > cutoff} a_n f(n/x) using a_n <= tau_4(n) <= n^2.
/// Needs cutoff > 1.5 x.
pub fn tail_bound(x: f64, cutoff: u64) -> Option<f64> {
    let n = cutoff as f64;
    if n <= 1.5 * x * 1.01 {
        return None;
    }
    // x^{1/2} N^{3/2} e^{-N/x} / (1/x - 3/(2N))
    let ln = 0.5 * x.ln() + 1.5 * n.ln() - n / x - (1.0 / x - 1.5 / n).ln();
    Some(ln.exp() * 1.01)
}

/// Smallest cutoff >= 50 x with tail below 2^{-tail_bits}.
pub fn choose_cutoff(x: f64, tail_bits: u32) -> u64 {
    let mut n = (50.0 * x).ceil().max(10.0) as u64;
    let target = (-(tail_bits as f64) * std::f64::consts::LN_2).exp();
    while tail_bound(x, n).map_or(true, |t| t > target) {
        n = n + n / 4 + 1;
    }
    n
}

/// Per-class sums T_c(x) = sum_{[I] = c, N(I) <= cutoff} f(N(I)/x), and the
/// common tail bound.
#[derive(Clone, Debug)]
pub struct ClassSums {
    pub x: Ball,
    pub per_class: Vec<Ball>,
    /// per-class sums restricted to N(I) <= x
    pub per_class_upto_x: Vec<Ball>,
    /// sum over [I] = c, N(I) <= x of (x/N(I))^{1/2}
    pub sqrt_upto_x: Vec<Ball>,
    pub tail: Float,
}

pub fn class_sums(t: &IdealCountTable, x: &Ball, prec: u32) -> Result<ClassSums> {
    let tail = tail_bound(x.upper_f64(), t.cutoff)
        .ok_or_else(|| Error::Domain("ideal table cutoff too small for x".into()))?;
    let mut per = vec![Ball::zero(prec); t.h];
    let mut upto = vec![Ball::zero(prec); t.h];
    let mut sq = vec![Ball::zero(prec); t.h];
    let xr = x.recip()?;
    for n in 1..=t.cutoff {
        if t.total(n) == 0 {
            continue;
        }
        let y = xr.mul_i64(n as i64);
        let r = y.sqrt()?.recip()?;
        let f = r.mul(&y.neg().exp());
        // n <= x decided with the ball, boundary cases counted as excluded and
        // flagged by a widened ball
        let below = y.lt_rat(&Rational::from(1));
        for c in 0..t.h {
            let v = t.count(c, n);
            if v == 0 {
                continue;
            }
            let fv = f.mul_i64(v as i64);
            per[c] = per[c].add(&fv);
            match below {
                Some(true) => {
                    upto[c] = upto[c].add(&fv);
                    sq[c] = sq[c].add(&r.mul_i64(v as i64));
                }
                Some(false) => {}
                None => {
                    upto[c] = upto[c].union(&upto[c].add(&fv));
                    sq[c] = sq[c].union(&sq[c].add(&r.mul_i64(v as i64)));
                }
            }
        }
    }
    let tail = Float::with_val(64, tail);
    Ok(ClassSums { x: x.clone(), per_class: per, per_class_upto_x: upto, sqrt_upto_x: sq, tail })
}

/// exp(2 pi i k / l) as a ball.
pub fn root_of_unity(k: u64, l: u64, prec: u32) -> ComplexBall {
    let a = Ball::pi(prec).mul_rat(&Rational::from((2 * k as i64, l as i64)));
    ComplexBall::from_parts(&a.cos(), &a.sin())
}

/// S(x, chi_e) = sum_c chi_e(c) T_c(x), plus the tail.
pub fn smoothed_sum(s: &ClassSums, ix: &ClassIndexer, e: usize) -> ComplexBall {
    let prec = s.per_class.first().map(|b| b.prec()).unwrap_or(64);
    let mut acc = ComplexBall::zero(prec);
    for (c, t) in s.per_class.iter().enumerate() {
        let (k, l) = ix.character_angle(e, c);
        acc = acc.add(&root_of_unity(k, l, prec).mul_real(t));
    }
    acc.add_error(&s.tail)
}

/// Sum of T_c over the classes in H (tail included once per class).
pub fn coset_sum_full(s: &ClassSums, classes: &[usize]) -> Ball {
    let prec = s.per_class[0].prec();
    let mut acc = Ball::zero(prec);
    for &c in classes {
        acc = acc.add(&s.per_class[c]).add_error(&s.tail);
    }
    acc
}

/// S_H(x): ideals in H of norm <= x.
pub fn coset_sum_sh(s: &ClassSums, classes: &[usize]) -> Ball {
    let prec = s.per_class[0].prec();
    classes.iter().fold(Ball::zero(prec), |a, &c| a.add(&s.per_class_upto_x[c]))
}

/// Characters trivial on the subgroup H0 (given by class indices).
pub fn annihilator(ix: &ClassIndexer, h0: &[usize]) -> Vec<usize> {
    (0..ix.h)
        .filter(|&e| h0.iter().all(|&c| ix.character_angle(e, c).0 == 0))
        .collect()
}

/// The sandwich sum (x/N)^{1/2} <= e S_H(x) <= (e/[Cl:H0]) sum chi(h)^{-1} S(x,chi)
/// for the coset H = h + H0, together with the finite Fourier identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sandwich {
    pub lower: Check,
    pub upper: Check,
    /// the character average equals the full coset sum within radii
    pub fourier_identity: bool,
    pub lhs: f64,
    pub middle: f64,
    pub rhs: f64,
}

pub fn sandwich(s: &ClassSums, ix: &ClassIndexer, h: usize, h0: &[usize]) -> Result<Sandwich> {
    let prec = s.per_class[0].prec();
    let coset: Vec<usize> = h0.iter().map(|&c| ix.add(h, c)).collect();
    let e = Ball::from_i64(prec, 1).exp();
    let lhs = coset.iter().fold(Ball::zero(prec), |a, &c| a.add(&s.sqrt_upto_x[c]));
    let mid = e.mul(&coset_sum_sh(s, &coset));
    let chars = annihilator(ix, h0);
    let index = (ix.h / h0.len()) as i64;
    let mut acc = ComplexBall::zero(prec);
    for &ch in &chars {
        let (k, l) = ix.character_angle(ch, h);
        let inv = root_of_unity((l - k) % l, l, prec);
        acc = acc.add(&inv.mul(&smoothed_sum(s, ix, ch)));
    }
    let avg = acc.mul_rat(&Rational::from((1, index)));
    let full = coset_sum_full(s, &coset);
    let fourier_identity = avg.real().sub(&full).contains_zero() && avg.imag().contains_zero();
    let rhs = e.mul(&avg.real());
    Ok(Sandwich {
        lower: Check::le(&lhs, &mid),
        upper: Check::le(&mid, &rhs),
        fourier_identity,
        lhs: lhs.to_f64(),
        middle: mid.to_f64(),
        rhs: rhs.to_f64(),
    })
}

/// Regulator of K: R_K = 2 R_F / Q.
pub fn regulator_k(k: &CMField, prec: u32) -> Ball {
    k.quad.regulator(prec).mul_rat(&Rational::from((2, k.unit_index() as i64)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KappaReport {
    pub kappa: f64,
    pub kappa_ball: (f64, f64),
    pub w: u64,
    /// the w = 2 specialization 2 pi^2 h R / disc^{1/2} does not apply
    pub w_flag: bool,
    pub r_k_le_2r_f: bool,
    /// kappa >= 2 / (e log disc)
    pub louboutin: Check,
    /// disc^{1/4} >= 98
    pub louboutin_applicable: bool,
}

/// kappa_K = (2 pi)^2 h R_K / (w disc^{1/2}).
pub fn residue_kappa(k: &CMField, h: &Integer, prec: u32) -> Result<(Ball, KappaReport)> {
    let rk = regulator_k(k, prec);
    let w = k.w();
    let d = Ball::from_int(prec, &k.disc);
    let kappa = Ball::pi(prec)
        .mul_i64(2)
        .sqr()
        .mul(&Ball::from_int(prec, h))
        .mul(&rk)
        .div(&d.sqrt()?.mul_i64(w as i64))?;
    let e = Ball::from_i64(prec, 1).exp();
    let lb = Ball::from_i64(prec, 2).div(&e.mul(&d.log()?))?;
    let rf2 = k.quad.regulator(prec).mul_i64(2);
    let rep = KappaReport {
        kappa: kappa.to_f64(),
        kappa_ball: (kappa.to_f64(), kappa.rad_f64()),
        w,
        w_flag: w > 2,
        r_k_le_2r_f: rf2.sub(&rk).is_positive() != Some(false),
        louboutin: Check::le(&lb, &kappa),
        louboutin_applicable: k.disc >= Integer::from(98u64.pow(4)),
    };
    Ok((kappa, rep))
}

/// S-bound checks at x = eps disc^{1/2}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SBoundReport {
    pub eps: String,
    pub x: f64,
    pub cutoff: u64,
    /// one entry per nontrivial character: |S| <= 163 eps^{7/12} disc^{15/32}
    pub nontrivial: Vec<Check>,
    /// |S(x,1)| <= 393 eps^{7/12} disc^{15/32} + (pi^{5/2}/2) eps h R_K
    pub trivial: Check,
    /// the same with the pole term kappa Gamma(1/2) x computed from kappa
    pub trivial_kappa_term: Check,
    pub max_nontrivial_ratio: f64,
}

impl SBoundReport {
    pub fn certified_ok(&self) -> bool {
        self.nontrivial.iter().all(|c| c.holds == Some(true)) && self.trivial.holds == Some(true)
    }
}

pub fn s_bounds(
    k: &CMField,
    g: &ClassGroup,
    table: &IdealCountTable,
    ix: &ClassIndexer,
    eps: &Rational,
    prec: u32,
) -> Result<SBoundReport> {
    let d = Ball::from_int(prec, &k.disc);
    let x = d.sqrt()?.mul_rat(eps);
    let s = class_sums(table, &x, prec)?;
    let e = Ball::from_rat(prec, eps);
    let e712 = e.log()?.mul_rat(&Rational::from((7, 12))).exp();
    let d1532 = d.log()?.mul_rat(&Rational::from((15, 32))).exp();
    let base = e712.mul(&d1532);
    let rhs_nt = base.mul_i64(163);
    let mut nontrivial = Vec::new();
    let mut worst = 0f64;
    for ch in 1..ix.h {
        let v = smoothed_sum(&s, ix, ch).abs();
        worst = worst.max(v.to_f64() / rhs_nt.to_f64());
        nontrivial.push(Check::le(&v, &rhs_nt));
    }
    let s1 = smoothed_sum(&s, ix, 0).abs();
    let h = Ball::from_int(prec, &g.h);
    let rk = regulator_k(k, prec);
    let pi = Ball::pi(prec);
    let pi52 = pi.sqr().mul(&pi.sqrt()?);
    let rhs_t = base.mul_i64(393).add(&pi52.mul_rat(&Rational::from((1, 2))).mul(&e).mul(&h).mul(&rk));
    let (kappa, _) = residue_kappa(k, &g.h, prec)?;
    let rhs_k = base.mul_i64(393).add(&kappa.mul(&pi.sqrt()?).mul(&x));
    Ok(SBoundReport {
        eps: eps.to_string(),
        x: x.to_f64(),
        cutoff: table.cutoff,
        nontrivial,
        trivial: Check::le(&s1, &rhs_t),
        trivial_kappa_term: Check::le(&s1, &rhs_k),
        max_nontrivial_ratio: worst,
    })
}

/// Minimal-norm average (1/#H) sum (disc^{1/2}/N([I]))^{1/2} against the
/// displayed constant c'(F) and the form inside its derivation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinNormAverage {
    pub size: usize,
    pub average: f64,
    /// 80 disc^{15/32}/#H + 5800 R_F log disc / disc^{1/32} + 20 R_F
    pub displayed: Check,
    /// 80 disc^{15/32}/#H + 108 disc^{15/32}/h_K + 10 R_K
    pub proof_form: Check,
    /// c'(F) <= 1.4e5 R_F
    pub c_prime_le: Check,
    /// disc^{1/4} >= 98
    pub applicable: bool,
}

pub fn min_norm_average(k: &CMField, h: &Integer, min_norms: &[Integer], prec: u32) -> Result<MinNormAverage> {
    let d = Ball::from_int(prec, &k.disc);
    let sd = d.sqrt()?;
    let mut acc = Ball::zero(prec);
    for n in min_norms {
        acc = acc.add(&sd.div(&Ball::from_int(prec, n))?.sqrt()?);
    }
    let size = min_norms.len();
    let avg = acc.mul_rat(&Rational::from((1, size as i64)));
    let rf = k.quad.regulator(prec);
    let rk = regulator_k(k, prec);
    let ld = d.log()?;
    let d1532 = ld.mul_rat(&Rational::from((15, 32))).exp();
    let d132 = ld.mul_rat(&Rational::from((1, 32))).exp();
    let main = d1532.mul_rat(&Rational::from((80, size as i64)));
    let cprime = rf.mul_i64(5800).mul(&ld).div(&d132)?.add(&rf.mul_i64(20));
    let proof = main.add(&d1532.mul_i64(108).div(&Ball::from_int(prec, h))?).add(&rk.mul_i64(10));
    Ok(MinNormAverage {
        size,
        average: avg.to_f64(),
        displayed: Check::le(&avg, &main.add(&cprime)),
        proof_form: Check::le(&avg, &proof),
        c_prime_le: Check::le(&cprime, &rf.mul_i64(140_000)),
        applicable: k.disc >= Integer::from(98u64.pow(4)),
    })
}

/// Parameters of the explicit subconvexity estimate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityParams {
    pub d: u32,
    #[serde(with = "crate::serde_rat")]
    pub lambda: Rational,
    /// log x
    #[serde(with = "crate::serde_rat")]
    pub log_x: Rational,
    /// C_t <= conductor_coeff (1+|t|)^t_power disc
    #[serde(with = "crate::serde_rat")]
    pub conductor_coeff: Rational,
    pub t_power: u32,
}

impl ConvexityParams {
    /// Degree-4 Hecke L-function of a quartic CM field with lambda = 1/2,
    /// x = e^4 and C_t <= 7e-4 (1+|t|)^4 disc.
    pub fn quartic() -> ConvexityParams {
        ConvexityParams {
            d: 4,
            lambda: Rational::from((1, 2)),
            log_x: Rational::from(4),
            conductor_coeff: Rational::from((7, 10000)),
            t_power: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityResult {
    /// the bound on log |L| minus the conductor term
    pub log_constant: f64,
    /// implied constant: exp(log_constant) conductor_coeff^{delta_exponent}
    pub constant: f64,
    pub constant_upper: f64,
    #[serde(with = "crate::serde_rat")]
    pub delta_exponent: Rational,
    #[serde(with = "crate::serde_rat")]
    pub t_exponent: Rational,
}

/// Worst case of the explicit bound with |a(n)| = d Lambda(n):
/// sum_{n <= x} d Lambda(n) n^{-1/2 - lambda/log x} log(x/n) / (log x log n)
/// + (lambda^2 + lambda) d / (log x)^2 + d e^{-lambda} / (x^{1/2} (log x)^2),
/// and the conductor term ((1 + lambda)/2) log C / log x.
pub fn convexity_constant(p: &ConvexityParams, prec: u32) -> Result<ConvexityResult> {
    let half = Rational::from((1, 2));
    if p.lambda < half {
        return Err(Error::Domain("lambda must be at least 1/2".into()));
    }
    let lo = Rational::from(2).max(Rational::from(&p.lambda * 2u32));
    if p.log_x < lo {
        return Err(Error::Failed("HypothesisViolated: log x < max(2, 2 lambda)".into()));
    }
    let lx = Ball::from_rat(prec, &p.log_x);
    let lam = Ball::from_rat(prec, &p.lambda);
    let d = p.d as i64;
    let xmax = lx.exp().upper_f64().floor() as u64 + 1;
    let mut sum = Ball::zero(prec);
    let expo = Ball::from_rat(prec, &half).add(&lam.div(&lx)?);
    for n in 2..=xmax {
        let Some((q, _)) = prime_power(n) else { continue };
        let ln = Ball::from_i64(prec, n as i64).log()?;
        match ln.cmp_ball(&lx) {
            Some(std::cmp::Ordering::Greater) => continue,
            None => return Err(Error::PrecisionExhausted { prec }),
            _ => {}
        }
        // Lambda(n) / log n = log q / log n
        let lq = Ball::from_i64(prec, q as i64).log()?;
        let t = lq
            .mul_i64(d)
            .mul(&ln.mul(&expo).neg().exp())
            .mul(&lx.sub(&ln))
            .div(&lx.mul(&ln))?;
        sum = sum.add(&t);
    }
    let lx2 = lx.sqr();
    let extra = lam.sqr().add(&lam).mul_i64(d).div(&lx2)?.add(
        &lam.neg().exp().mul_i64(d).div(&lx.mul_rat(&half).exp().mul(&lx2))?,
    );
    let logc = sum.add(&extra);
    let delta = Rational::from((Rational::from(1) + &p.lambda) / (Rational::from(&p.log_x * 2u32)));
    let cc = Ball::from_rat(prec, &p.conductor_coeff).log()?.mul_rat(&delta);
    let constant = logc.add(&cc).exp();
    Ok(ConvexityResult {
        log_constant: logc.to_f64(),
        constant: constant.to_f64(),
        constant_upper: constant.upper_f64(),
        t_exponent: Rational::from(&delta * p.t_power),
        delta_exponent: delta,
    })
}

fn prime_power(n: u64) -> Option<(u64, u32)> {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    if n >= 2 {
        Some((n, 1))
    } else {
        None
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub quartic: ConvexityResult,
    /// zeta_K / zeta route: degree 3, C_t <= 18 (1+|t|)^3 disc / (4 pi)^3
    pub cubic: ConvexityResult,
    /// 13 times the cubic constant: |zeta(1/2+it)| <= 13 (1+|t|)^{3/16}
    pub aggregate: f64,
    #[serde(with = "crate::serde_rat")]
    pub aggregate_t_exponent: Rational,
    pub quartic_le_263: bool,
    pub aggregate_le_839: bool,
    /// sup and inf of C_t / ((1+|t|)^4 disc) on a grid, and its limit
    pub conductor_ratio_range: (f64, f64),
    pub conductor_ratio_in_range: bool,
}

impl ConstantsReport {
    pub fn all_ok(&self) -> bool {
        self.quartic_le_263
            && self.aggregate_le_839
            && self.quartic.delta_exponent == Rational::from((3, 16))
            && self.quartic.t_exponent == Rational::from((3, 4))
            && self.aggregate_t_exponent == Rational::from((3, 4))
            && self.conductor_ratio_in_range
    }
}

/// C_t / ((1 + |t|)^4 disc) for a quartic CM field.
pub fn conductor_ratio(t: f64) -> f64 {
    let fp = (4.0 * std::f64::consts::PI).powi(4);
    (1.0 + 4.0 * t * t) * (9.0 + 4.0 * t * t) / (fp * (1.0 + t).powi(4))
}

pub fn constants_report(prec: u32) -> Result<ConstantsReport> {
    let quartic = convexity_constant(&ConvexityParams::quartic(), prec)?;
    // 18 / (4 pi)^3, rounded up
    let pi3 = (4.0 * std::f64::consts::PI).powi(3);
    let c3 = Rational::from_f64(18.0 / pi3 * (1.0 + 1e-12)).expect("finite");
    let cubic = convexity_constant(
        &ConvexityParams { d: 3, lambda: Rational::from((1, 2)), log_x: Rational::from(4), conductor_coeff: c3, t_power: 3 },
        prec,
    )?;
    let aggregate = 13.0 * cubic.constant_upper;
    let agg_t = Rational::from(&cubic.t_exponent + Rational::from((3, 16)));
    let mut lo = f64::INFINITY;
    let mut hi = 0f64;
    for i in 0..=200_000 {
        let t = i as f64 * 0.005;
        let r = conductor_ratio(t);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let lim = 16.0 / (4.0 * std::f64::consts::PI).powi(4);
    hi = hi.max(lim);
    Ok(ConstantsReport {
        quartic_le_263: quartic.constant_upper <= 263.0,
        aggregate_le_839: aggregate <= 839.0,
        quartic,
        cubic,
        aggregate,
        aggregate_t_exponent: agg_t,
        conductor_ratio_range: (lo, hi),
        conductor_ratio_in_range: lo >= 1e-4 && hi <= 7e-4,
    })
}

/// Distinct prime factor counts for 0..=n.
pub fn omega_table(n: u64) -> Vec<u8> {
    let mut w = vec![0u8; n as usize + 1];
    for p in 2..=n as usize {
        if w[p] == 0 {
            let mut j = p;
            while j <= n as usize {
                w[j] += 1;
                j += p;
            }
        }
    }
    w
}

/// N in [lo, hi] with 2^{omega(N)} > N^{1/log log N}.
pub fn delta_lemma_scan(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 10 {
        return Err(Error::Domain("scan starts at N >= 10".into()));
    }
    let w = omega_table(hi);
    let mut bad = Vec::new();
    for n in lo..=hi {
        let om = w[n as usize] as f64;
        let ln = (n as f64).ln();
        let margin = ln / ln.ln() - om * std::f64::consts::LN_2;
        if margin > 1e-9 {
            continue;
        }
        // close call: decide with balls
        let b = Ball::from_i64(128, n as i64).log()?;
        let rhs = b.div(&b.log()?)?;
        let lhs = Ball::from_i64(128, 2).log()?.mul_i64(om as i64);
        match Check::le(&lhs, &rhs).holds {
            Some(true) => {}
            _ => bad.push(n),
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetBound {
    pub lhs: f64,
    pub rhs: f64,
    pub check: Check,
    /// disc > 9.3e7
    pub applicable: bool,
}

/// disc^{1/2}/#H <= 215 h_F^3 R_F log disc disc^{1/log log disc}.
pub fn coset_size_bound(disc: &Integer, size: usize, h_f: u64, r_f: &Ball) -> Result<CosetBound> {
    let prec = r_f.prec();
    let d = Ball::from_int(prec, disc);
    let lhs = d.sqrt()?.mul_rat(&Rational::from((1, size as i64)));
    let ld = d.log()?;
    let rhs = r_f
        .mul_i64(215 * (h_f as i64).pow(3))
        .mul(&ld)
        .mul(&ld.div(&ld.log()?)?.exp());
    Ok(CosetBound {
        lhs: lhs.to_f64(),
        rhs: rhs.to_f64(),
        check: Check::le(&lhs, &rhs),
        applicable: *disc > 93_000_000u64,
    })
}

/// 0.74 + 8.4 R_F + (1/10 + 7200 h_F^3 R_F / disc^{1/32 - 1/log log disc}
/// + 2430 R_F / disc^{1/32}) log disc.
pub fn finalbh_rhs(disc: &Integer, h_f: u64, r_f: &Ball) -> Result<Ball> {
    let prec = r_f.prec();
    let ld = Ball::from_int(prec, disc).log()?;
    let e1 = Ball::from_rat(prec, &Rational::from((1, 32))).sub(&ld.log()?.recip()?);
    let t1 = r_f.mul_i64(7200 * (h_f as i64).pow(3)).div(&ld.mul(&e1).exp())?;
    let t2 = r_f.mul_i64(2430).div(&ld.mul_rat(&Rational::from((1, 32))).exp())?;
    let inner = Ball::from_rat(prec, &Rational::from((1, 10))).add(&t1).add(&t2);
    Ok(Ball::from_rat(prec, &Rational::from((74, 100)))
        .add(&r_f.mul_rat(&Rational::from((84, 10))))
        .add(&inner.mul(&ld)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MainBound {
    /// bound on log disc_K, as a decimal string of a ball midpoint
    pub log_bound: f64,
    /// index of the dominating branch (0: e^64, 1: 64 log(144000 h^3 R), 2: height branch)
    pub branch: usize,
    pub branches: [f64; 3],
}

/// log disc_K <= max{e^64, 64 log(144000 h_F^3 R_F),
/// 10 (h0 + gamma_F/2 + (1/4) log disc_F + 8.4 R_F + 1.45)}.
pub fn main_theorem_bound(h_f: u64, r_f: &Ball, disc_f: &Integer, gamma_f: &Rational, h0: &Rational) -> Result<MainBound> {
    let prec = r_f.prec();
    let b0 = Ball::from_i64(prec, 64).exp();
    let b1 = r_f.mul_i64(144_000 * (h_f as i64).pow(3)).log()?.mul_i64(64);
    let b2 = Ball::from_rat(prec, h0)
        .add(&Ball::from_rat(prec, gamma_f).mul_rat(&Rational::from((1, 2))))
        .add(&Ball::from_int(prec, disc_f).log()?.mul_rat(&Rational::from((1, 4))))
        .add(&r_f.mul_rat(&Rational::from((84, 10))))
        .add(&Ball::from_rat(prec, &Rational::from((145, 100))))
        .mul_i64(10);
    let bs = [b0, b1, b2];
    let mut best = 0;
    for i in 1..3 {
        if bs[i].cmp_ball(&bs[best]) == Some(std::cmp::Ordering::Greater) {
            best = i;
        }
    }
    Ok(MainBound {
        log_bound: bs[best].to_f64(),
        branch: best,
        branches: [bs[0].to_f64(), bs[1].to_f64(), bs[2].to_f64()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexer_round_trip() {
        let ix = ClassIndexer::new(&[2, 2, 10]);
        assert_eq!(ix.h, 40);
        for i in 0..40 {
            assert_eq!(ix.index(&ix.label(i)), i);
            assert_eq!(ix.add(i, ix.neg(i)), 0);
        }
    }

    #[test]
    fn character_orthogonality() {
        let ix = ClassIndexer::new(&[2, 6]);
        for c in 0..ix.h {
            let mut s = ComplexBall::zero(128);
            for e in 0..ix.h {
                let (k, l) = ix.character_angle(e, c);
                s = s.add(&root_of_unity(k, l, 128));
            }
            let want = if c == 0 { ix.h as i64 } else { 0 };
            assert!(s.sub(&ComplexBall::from_i64(128, want, 0)).contains_zero());
        }
    }

    #[test]
    fn delta_small_cases() {
        assert!(delta_lemma_scan(10, 50_000).unwrap().is_empty());
        assert!(delta_lemma_scan(30030, 30030).unwrap().is_empty());
    }

    #[test]
    fn main_bound_first_branch() {
        let rf = Ball::from_rat(128, &Rational::from((5, 1))).sqrt().unwrap().add(&Ball::from_i64(128, 1)).mul_2exp(-1).log().unwrap();
        let b = main_theorem_bound(1, &rf, &Integer::from(5), &Rational::from(2), &Rational::new()).unwrap();
        assert_eq!(b.branch, 0);
        assert!((b.branches[2] - 68.9).abs() < 0.1, "{}", b.branches[2]);
    }

    #[test]
    fn tail_is_small() {
        let n = choose_cutoff(2000.0, 40);
        assert!(tail_bound(2000.0, n).unwrap() < 1e-12);
        assert!(n >= 100_000);
    }
}
