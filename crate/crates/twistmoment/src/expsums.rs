//! Kloosterman and Ramanujan sums, plus the exact Kloosterman identities
//! used to simplify the geometric side of the trace formula.
//!
//! Sums are evaluated by direct O(c) summation over units with a batch
//! inverse table and a shared root-of-unity table. No algebraic shortcuts:
//! at desk scale the brute-force sum is its own oracle. Accumulation is
//! Kahan-compensated because identity checks downstream assert residuals
//! close to machine epsilon across thousands of terms.

use crate::arith::{self, gcd, mul_mod};
use crate::error::{Error, Result};
use crate::report::{param, VerificationReport};
use num_complex::Complex64;
use std::f64::consts::PI;

/// S(a, b; c) together with its inputs.
#[derive(Debug, Clone)]
pub struct KloostermanSum {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub value: Complex64,
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Reusable tables for Kloosterman sums to a fixed modulus.
pub struct KloostermanContext {
    c: i64,
    inverse: Vec<i64>,
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
}

impl KloostermanContext {
    pub fn new(c: i64) -> Self {
        assert!(c >= 1);
        let inverse = arith::unit_inverse_table(c);
        let (mut cos_table, mut sin_table) = (Vec::new(), Vec::new());
        cos_table.reserve(c as usize);
        sin_table.reserve(c as usize);
        for j in 0..c {
            let t = 2.0 * PI * j as f64 / c as f64;
            cos_table.push(t.cos());
            sin_table.push(t.sin());
        }
        KloostermanContext {
            c,
            inverse,
            cos_table,
            sin_table,
        }
    }

    /// S(a, b; c) = Σ_{x mod c, (x,c)=1} e((ax + b x̄)/c).
    pub fn sum(&self, a: i64, b: i64) -> KloostermanSum {
        let c = self.c;
        let ar = a.rem_euclid(c);
        let br = b.rem_euclid(c);
        let (mut re, mut im) = (Kahan::default(), Kahan::default());
        if c == 1 {
            re.add(1.0);
        } else {
            for x in 1..c {
                let xb = self.inverse[x as usize];
                if xb == 0 {
                    continue; // not a unit: the table stores 0 for non-units
                }
                let idx = (mul_mod(ar, x, c) + mul_mod(br, xb, c)) % c;
                re.add(self.cos_table[idx as usize]);
                im.add(self.sin_table[idx as usize]);
            }
        }
        KloostermanSum {
            a,
            b,
            c,
            value: Complex64::new(re.sum, im.sum),
        }
    }
}

/// One-shot S(a, b; c).
pub fn kloosterman(a: i64, b: i64, c: i64) -> KloostermanSum {
    KloostermanContext::new(c).sum(a, b)
}

/// Weil-type bound τ(c) gcd(a,b,c)^{1/2} c^{1/2} used as a sanity envelope.
pub fn weil_bound(a: i64, b: i64, c: i64) -> f64 {
    let g = gcd(gcd(a, b), c);
    let g = if g == 0 { c } else { g };
    arith::tau(c) as f64 * (g as f64).sqrt() * (c as f64).sqrt()
}

pub const IDENTITY_TOL: f64 = 1e-8;

/// S(nq, m, c'q^{l+1}) = 0 whenever (m, q) = 1 and (c', q) = 1.
pub fn kloosterman_vanishing(
    n: i64,
    m: i64,
    q: i64,
    c_prime: i64,
    l: u32,
) -> Result<VerificationReport> {
    if !arith::is_prime(q) || q % 2 == 0 {
        return Err(Error::NotPrime(q));
    }
    if gcd(m, q) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd(m={m}, q={q}) != 1")));
    }
    if gcd(c_prime, q) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "gcd(c'={c_prime}, q={q}) != 1"
        )));
    }
    if l < 1 {
        return Err(Error::PreconditionViolated("l >= 1 required".into()));
    }
    let modulus = c_prime
        .checked_mul(q.checked_pow(l + 1).ok_or(Error::Overflow("q^(l+1)"))?)
        .ok_or(Error::Overflow("c' q^(l+1)"))?;
    let s = kloosterman(n * q, m, modulus);
    Ok(VerificationReport::new(
        "kloosterman-vanishing",
        vec![
            param("n", n),
            param("m", m),
            param("q", q),
            param("c_prime", c_prime),
            param("l", l),
            param("modulus", modulus),
        ],
        s.value,
        Complex64::new(0.0, 0.0),
        IDENTITY_TOL,
    ))
}

/// S(nq, m, cq) = −S(n, m q̄, c) for (c, q) = (m, q) = 1, q an odd prime.
pub fn kloosterman_signflip(n: i64, m: i64, q: i64, c: i64) -> Result<VerificationReport> {
    if !arith::is_prime(q) || q % 2 == 0 {
        return Err(Error::NotPrime(q));
    }
    if gcd(c, q) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd(c={c}, q={q}) != 1")));
    }
    if gcd(m, q) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd(m={m}, q={q}) != 1")));
    }
    let lhs = kloosterman(n * q, m, c * q).value;
    let rhs = if c == 1 {
        // S(n, m q̄, 1) = 1
        -Complex64::new(1.0, 0.0)
    } else {
        let qbar = arith::mod_inverse(q, c)?.value();
        -kloosterman(n, mul_mod(m.rem_euclid(c), qbar, c), c).value
    };
    Ok(VerificationReport::new(
        "kloosterman-signflip",
        vec![param("n", n), param("m", m), param("q", q), param("c", c)],
        lhs,
        rhs,
        IDENTITY_TOL,
    ))
}

/// Twisted multiplicativity S(a,b;c1c2) = S(a c̄2, b c̄2; c1) S(a c̄1, b c̄1; c2)
/// for coprime c1, c2.
pub fn twisted_multiplicativity(a: i64, b: i64, c1: i64, c2: i64) -> Result<VerificationReport> {
    if gcd(c1, c2) != 1 {
        return Err(Error::ModuliNotCoprime(c1, c2));
    }
    let lhs = kloosterman(a, b, c1 * c2).value;
    let factor = |cq: i64, other: i64| -> Result<Complex64> {
        if cq == 1 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let inv = arith::mod_inverse(other, cq)?.value();
        Ok(kloosterman(
            mul_mod(a.rem_euclid(cq), inv, cq),
            mul_mod(b.rem_euclid(cq), inv, cq),
            cq,
        )
        .value)
    };
    let rhs = factor(c1, c2)? * factor(c2, c1)?;
    Ok(VerificationReport::new(
        "kloosterman-twisted-multiplicativity",
        vec![param("a", a), param("b", b), param("c1", c1), param("c2", c2)],
        lhs,
        rhs,
        1e-9,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert!((kloosterman(1, 1, 2).value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        // S(0,0,c) = phi(c)
        assert!((kloosterman(0, 0, 12).value - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        assert!((kloosterman(1, 1, 3).value - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        // Ramanujan sum S(0, m, q) = mu(q) for (m, q) = 1
        assert!((kloosterman(0, 2, 7).value - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn realness_weil_symmetry_small() {
        for c in 1..=60i64 {
            let ctx = KloostermanContext::new(c);
            for a in 0..c {
                for b in 0..c {
                    let s = ctx.sum(a, b);
                    assert!(s.value.im.abs() < 1e-9, "Im S({a},{b},{c}) = {}", s.value.im);
                    assert!(
                        s.value.norm() <= weil_bound(a, b, c) + 1e-9,
                        "Weil fails at ({a},{b},{c})"
                    );
                    let t = ctx.sum(b, a);
                    assert!((s.value - t.value).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn vanishing_identity() {
        let r = kloosterman_vanishing(1, 1, 3, 2, 1).unwrap();
        assert!(r.pass, "residual {}", r.residual);
        let r = kloosterman_vanishing(2, 5, 7, 1, 1).unwrap();
        assert!(r.pass, "residual {}", r.residual);
        // hypothesis (m, q) = 1 fails
        assert!(matches!(
            kloosterman_vanishing(1, 3, 3, 2, 1),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn signflip_identity() {
        let r = kloosterman_signflip(1, 1, 3, 4).unwrap();
        assert!(r.pass, "residual {}", r.residual);
        let r = kloosterman_signflip(2, 3, 5, 7).unwrap();
        assert!(r.pass, "residual {}", r.residual);
        assert!(matches!(
            kloosterman_signflip(1, 1, 5, 5),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn twisted_multiplicativity_examples() {
        let r = twisted_multiplicativity(1, 1, 2, 3).unwrap();
        assert!(r.pass);
        assert!((r.lhs_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        let r = twisted_multiplicativity(0, 0, 4, 9).unwrap();
        assert!(r.pass);
        assert!((r.lhs_complex().re - 12.0).abs() < 1e-9);
        assert_eq!(
            twisted_multiplicativity(1, 1, 4, 6).unwrap_err(),
            Error::ModuliNotCoprime(4, 6)
        );
    }

    #[test]
    fn randomized_identity_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let mut count = 0;
        while count < 500 {
            let q = *[3i64, 5, 7].iter().nth(rng.gen_range(0..3)).unwrap();
            let n = rng.gen_range(1..50);
            let m = rng.gen_range(1..50);
            let c = rng.gen_range(1..40);
            if gcd(m, q) != 1 || gcd(c, q) != 1 {
                continue;
            }
            let r = kloosterman_signflip(n, m, q, c).unwrap();
            assert!(r.pass, "signflip fails: {:?}", r.parameters);
            let l = rng.gen_range(1..=2u32);
            let r = kloosterman_vanishing(n, m, q, c, l).unwrap();
            assert!(r.pass, "vanishing fails: {:?}", r.parameters);
            count += 1;
        }
    }
}
