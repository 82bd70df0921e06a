//! Certified complex roots of squarefree integer polynomials.

use crate::arith::ZPoly;
use crate::ball::{Ball, ComplexBall};
use crate::error::{Error, Result};
use rug::Float;

fn eval_f64(c: &[(f64, f64)], z: (f64, f64)) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for &(a, b) in c.iter().rev() {
        acc = (acc.0 * z.0 - acc.1 * z.1 + a, acc.0 * z.1 + acc.1 * z.0 + b);
    }
    acc
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

/// Aberth iteration in double precision: rough approximations of all roots.
fn aberth(f: &ZPoly) -> Vec<(f64, f64)> {
    let n = f.degree() as usize;
    let lc = f.leading().to_f64();
    let c: Vec<(f64, f64)> = f.coeffs().iter().map(|a| (a.to_f64() / lc, 0.0)).collect();
    let dc: Vec<(f64, f64)> = (1..=n).map(|i| (c[i].0 * i as f64, 0.0)).collect();
    // Cauchy bound for the initial circle
    let r = 1.0 + c[..n].iter().map(|a| a.0.abs()).fold(0.0, f64::max);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            (0.5 * r * t.cos(), 0.5 * r * t.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut maxstep: f64 = 0.0;
        for i in 0..n {
            let w = cdiv(eval_f64(&c, z[i]), eval_f64(&dc, z[i]));
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = cdiv((1.0, 0.0), (z[i].0 - z[j].0, z[i].1 - z[j].1));
                    s = (s.0 + d.0, s.1 + d.1);
                }
            }
            let ws = (w.0 * s.0 - w.1 * s.1, w.0 * s.1 + w.1 * s.0);
            let step = cdiv(w, (1.0 - ws.0, -ws.1));
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = (z[i].0 - step.0, z[i].1 - step.1);
                maxstep = maxstep.max(step.0.hypot(step.1) / (1.0 + z[i].0.hypot(z[i].1)));
            }
        }
        if maxstep < 1e-15 {
            break;
        }
    }
    z
}

fn eval_ball(f: &ZPoly, z: &ComplexBall) -> ComplexBall {
    let p = z.prec();
    let mut acc = ComplexBall::zero(p);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&ComplexBall::from_real(&Ball::from_int(p, c)));
    }
    acc
}

/// All complex roots of a squarefree integer polynomial as disjoint balls.
pub fn complex_roots(f: &ZPoly, prec: u32) -> Result<Vec<ComplexBall>> {
    let n = f.degree();
    if n < 1 {
        return Ok(vec![]);
    }
    let seeds = aberth(f);
    let df = f.derivative();
    let wp = prec + 32;
    let mut out = Vec::new();
    for s in seeds {
        let mut z = ComplexBall::from_f64(wp, s.0, s.1);
        // Newton on midpoints; quadratic convergence from double precision
        let mut bits = 40u32;
        let mut iters = 0;
        while bits < 2 * wp && iters < 200 {
            let fz = eval_ball(f, &z);
            let dz = eval_ball(&df, &z);
            let step = match fz.div(&dz) {
                Ok(s) => s,
                Err(_) => break,
            };
            let nz = z.sub(&step);
            z = ComplexBall { re: nz.re, im: nz.im, rad: Float::new(30) };
            bits *= 2;
            iters += 1;
        }
        for _ in 0..2 {
            let fz = eval_ball(f, &z);
            let dz = eval_ball(&df, &z);
            if let Ok(step) = fz.div(&dz) {
                let nz = z.sub(&step);
                z = ComplexBall { re: nz.re, im: nz.im, rad: Float::new(30) };
            }
        }
        // a disk of radius n|f(z)|/|f'(z)| around z contains a root
        let fz = eval_ball(f, &z);
        let dz = eval_ball(&df, &z);
        let dlow = dz.abs().lower();
        if !(dlow > 0) {
            return Err(Error::Indeterminate("derivative vanishes near a root".into()));
        }
        let r = Float::with_val_round(30, fz.abs_upper() * (n as u32), rug::float::Round::Up).0;
        let r = Float::with_val_round(30, &r / &dlow, rug::float::Round::Up).0;
        let zb = ComplexBall { re: Float::with_val(prec, &z.re), im: Float::with_val(prec, &z.im), rad: Float::new(30) };
        let zb = zb.set_prec(prec);
        out.push(zb.add_error(&r));
    }
    // disjointness forces one root per disk
    for i in 0..out.len() {
        for j in 0..i {
            if out[i].overlaps(&out[j]) {
                return Err(Error::Indeterminate("root disks overlap".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn roots_of_x2_plus_1() {
        let r = complex_roots(&ZPoly::from_i64(&[1, 0, 1]), 128).unwrap();
        assert_eq!(r.len(), 2);
        let has_i = r.iter().any(|z| z.contains(&Rational::new(), &Rational::from(1)));
        let has_mi = r.iter().any(|z| z.contains(&Rational::new(), &Rational::from(-1)));
        assert!(has_i && has_mi);
        assert!(r.iter().all(|z| z.rad_f64() < 1e-30));
    }

    #[test]
    fn roots_of_big_quartic() {
        let r = complex_roots(&ZPoly::from_i64(&[20, 0, 10, 0, 1]), 256).unwrap();
        assert_eq!(r.len(), 4);
        for z in r {
            assert!(z.rad_f64() < 1e-60);
        }
    }
}
