//! Exact integer and modular arithmetic underlying every exponential sum.
//!
//! Everything here is 64-bit: the moduli in scope stay well below 10^6, so
//! products fit in i128 and no arbitrary-precision arithmetic is needed.
//! Modular products are overflow-checked — silent wraparound would corrupt
//! an exponential sum without tripping any assertion.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A residue class `value` mod `modulus`, kept reduced to `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue {
    value: i64,
    modulus: i64,
}

impl Residue {
    pub fn new(value: i64, modulus: i64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue {
            value: value.rem_euclid(modulus),
            modulus,
        }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b).
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Overflow-checked product reduced mod m.
pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    debug_assert!(m >= 1);
    let prod = (a as i128) * (b as i128);
    (prod.rem_euclid(m as i128)) as i64
}

/// Inverse of `a` mod `m` by extended Euclid (works for composite m).
///
/// By convention the inverse mod 1 is 0.
pub fn mod_inverse(a: i64, m: i64) -> Result<Residue> {
    if m < 1 {
        return Err(Error::PreconditionViolated(format!("modulus {m} < 1")));
    }
    if m == 1 {
        return Ok(Residue::new(0, 1));
    }
    let ar = a.rem_euclid(m);
    let (g, x, _) = extended_gcd(ar, m);
    if g != 1 {
        return Err(Error::NotInvertible(a, m));
    }
    Ok(Residue::new(x, m))
}

/// Chinese remainder reconstruction of a residue mod m1*m2 from coprime parts.
pub fn crt_combine(r1: Residue, r2: Residue) -> Result<Residue> {
    let (m1, m2) = (r1.modulus(), r2.modulus());
    if gcd(m1, m2) != 1 {
        return Err(Error::ModuliNotCoprime(m1, m2));
    }
    let m = m1
        .checked_mul(m2)
        .ok_or(Error::Overflow("crt_combine modulus product"))?;
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    let inv = mod_inverse(m1, m2)?.value();
    let t = mul_mod((r2.value() - r1.value()).rem_euclid(m2), inv, m2);
    Ok(Residue::new(r1.value() + m1 * t, m))
}

/// Divisor count of n.
pub fn tau(n: i64) -> i64 {
    assert!(n >= 1);
    let mut count = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

/// All divisors of n, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Twisted divisor function Σ_{l|n} ψ(l) for a character ψ.
pub fn tau_twisted<F>(n: i64, psi: F) -> Complex64
where
    F: Fn(i64) -> Complex64,
{
    divisors(n).into_iter().map(psi).sum()
}

pub fn euler_phi(n: i64) -> i64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            result -= result / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Trial-division primality, adequate for desk-scale inputs.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes up to `n` inclusive, by sieve.
pub fn primes_up_to(n: i64) -> Vec<i64> {
    if n < 2 {
        return Vec::new();
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
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as i64) } else { None })
        .collect()
}

/// Prime factorization by trial division, as (p, multiplicity) pairs.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    assert!(n >= 1);
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn moebius(n: i64) -> i64 {
    assert!(n >= 1);
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Inverses of all units mod m in one pass (Montgomery batch trick):
/// prefix products, a single extended Euclid, then back-substitution.
/// Entry `inv[x]` is 0 when gcd(x, m) > 1.
pub fn unit_inverse_table(m: i64) -> Vec<i64> {
    assert!(m >= 1);
    if m == 1 {
        return vec![0];
    }
    let mu = m as usize;
    let mut units = Vec::with_capacity(mu);
    let mut prefix = Vec::with_capacity(mu);
    let mut acc = 1i64;
    for x in 1..m {
        if gcd(x, m) == 1 {
            units.push(x);
            prefix.push(acc);
            acc = mul_mod(acc, x, m);
        }
    }
    let mut inv_acc = mod_inverse(acc, m)
        .expect("product of units is a unit")
        .value();
    let mut table = vec![0i64; mu];
    for i in (0..units.len()).rev() {
        table[units[i] as usize] = mul_mod(inv_acc, prefix[i], m);
        inv_acc = mul_mod(inv_acc, units[i], m);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(3, 7).unwrap().value(), 5);
        assert_eq!(mod_inverse(2, 4), Err(Error::NotInvertible(2, 4)));
        assert_eq!(mod_inverse(10, 1).unwrap().value(), 0);
    }

    #[test]
    fn mod_inverse_exhaustive() {
        for m in 1..=1000i64 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    let x = mod_inverse(a, m).unwrap().value();
                    assert_eq!(mul_mod(a, x, m), 1 % m, "a={a} m={m}");
                }
            }
        }
    }

    #[test]
    fn crt_examples() {
        let r = crt_combine(Residue::new(1, 2), Residue::new(2, 3)).unwrap();
        assert_eq!((r.value(), r.modulus()), (5, 6));
        let r = crt_combine(Residue::new(0, 5), Residue::new(0, 7)).unwrap();
        assert_eq!((r.value(), r.modulus()), (0, 35));
        assert_eq!(
            crt_combine(Residue::new(1, 4), Residue::new(1, 6)),
            Err(Error::ModuliNotCoprime(4, 6))
        );
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(12), 6);
        assert_eq!(tau(1), 1);
        assert_eq!(tau(97), 2);
    }

    #[test]
    fn tau_multiplicative() {
        for m in 1..=200i64 {
            for n in 1..=200i64 {
                if gcd(m, n) == 1 {
                    assert_eq!(tau(m * n), tau(m) * tau(n));
                }
            }
        }
    }

    #[test]
    fn unit_inverses_match_euclid() {
        for m in [1i64, 2, 12, 97, 360, 1021] {
            let t = unit_inverse_table(m);
            for x in 1..m {
                if gcd(x, m) == 1 {
                    assert_eq!(t[x as usize], mod_inverse(x, m).unwrap().value());
                } else {
                    assert_eq!(t[x as usize], 0);
                }
            }
        }
    }

    #[test]
    fn phi_and_moebius() {
        assert_eq!(euler_phi(36), 12);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
    }
}
