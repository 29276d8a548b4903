//! Dirichlet characters modulo an odd prime and their Gauss sums.
//!
//! Characters are indexed by discrete logarithm against the least primitive
//! root g mod p: the character of index k sends g ↦ e(k/(p−1)). The dlog
//! table and the root-of-unity table are built once per modulus and shared
//! read-only by all p−1 characters, so evaluation inside million-term sums
//! is a pair of table lookups.

use crate::arith::{self, is_prime};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Shared per-modulus tables: discrete logs and roots of unity.
#[derive(Debug)]
pub struct CharacterGroup {
    modulus: i64,
    generator: i64,
    /// dlog[a] = j with g^j ≡ a (mod p), for 1 ≤ a < p.
    dlog: Vec<u32>,
    /// unity[j] = e(j/(p−1)) for 0 ≤ j < p−1.
    unity: Vec<Complex64>,
    /// additive[a] = e(a/p) for 0 ≤ a < p.
    additive: Vec<Complex64>,
}

impl CharacterGroup {
    pub fn new(p: i64) -> Result<Arc<Self>> {
        if p % 2 == 0 {
            return Err(Error::EvenModulus(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let g = least_primitive_root(p);
        let order = (p - 1) as usize;
        let mut dlog = vec![0u32; p as usize];
        let mut v = 1i64;
        for j in 0..order {
            dlog[v as usize] = j as u32;
            v = arith::mul_mod(v, g, p);
        }
        let unity = (0..order)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / order as f64))
            .collect();
        let additive = (0..p)
            .map(|a| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / p as f64))
            .collect();
        Ok(Arc::new(CharacterGroup {
            modulus: p,
            generator: g,
            dlog,
            unity,
            additive,
        }))
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn generator(&self) -> i64 {
        self.generator
    }

    /// e(a/p), table-backed.
    pub fn additive_character(&self, a: i64) -> Complex64 {
        self.additive[a.rem_euclid(self.modulus) as usize]
    }
}

fn least_primitive_root(p: i64) -> i64 {
    if p == 2 {
        return 1;
    }
    let factors = arith::factorize(p - 1);
    'outer: for g in 2..p {
        for &(q, _) in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut acc = 1i64;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = arith::mul_mod(acc, b, m);
        }
        b = arith::mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A Dirichlet character mod an odd prime p, χ(g) = e(index/(p−1)).
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    index: usize,
}

impl std::fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DirichletCharacter(mod {}, index {})",
            self.group.modulus, self.index
        )
    }
}

impl DirichletCharacter {
    pub fn new(group: Arc<CharacterGroup>, index: usize) -> Self {
        let order = (group.modulus - 1) as usize;
        DirichletCharacter {
            group,
            index: index % order,
        }
    }

    /// The character of given index mod p, building the group tables.
    pub fn from_modulus(p: i64, index: usize) -> Result<Self> {
        Ok(Self::new(CharacterGroup::new(p)?, index))
    }

    pub fn modulus(&self) -> i64 {
        self.group.modulus
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// For prime modulus every non-principal character is primitive.
    pub fn is_primitive(&self) -> bool {
        self.index != 0
    }

    /// χ(−1) = (−1)^index.
    pub fn parity(&self) -> Parity {
        if self.index % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Multiplicative order of χ in the dual group.
    pub fn order(&self) -> i64 {
        let m = self.group.modulus - 1;
        m / arith::gcd(self.index as i64, m)
    }

    /// χ(n): 0 when p | n, otherwise a root of unity from the shared table.
    pub fn eval(&self, n: i64) -> Complex64 {
        let p = self.group.modulus;
        let r = n.rem_euclid(p);
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let order = (p - 1) as usize;
        let j = (self.index * self.group.dlog[r as usize] as usize) % order;
        self.group.unity[j]
    }

    /// χ̄, sharing the same tables.
    pub fn conjugate(&self) -> Self {
        let order = (self.group.modulus - 1) as usize;
        DirichletCharacter {
            group: Arc::clone(&self.group),
            index: (order - self.index) % order,
        }
    }

    /// χ^k.
    pub fn power(&self, k: usize) -> Self {
        let order = (self.group.modulus - 1) as usize;
        DirichletCharacter {
            group: Arc::clone(&self.group),
            index: (self.index * (k % order)) % order,
        }
    }

    /// Σ_{l|n} χ(l), the χ-twisted divisor function.
    pub fn tau_twisted(&self, n: i64) -> Complex64 {
        arith::tau_twisted(n, |d| self.eval(d))
    }
}

/// Gauss sum τ(χ) = Σ_{a mod p} χ(a) e(a/p).
#[derive(Debug, Clone)]
pub struct GaussSum {
    pub character: DirichletCharacter,
    pub value: Complex64,
}

pub fn gauss_sum(chi: &DirichletCharacter) -> GaussSum {
    let p = chi.modulus();
    let mut value = Complex64::new(0.0, 0.0);
    for a in 1..p {
        value += chi.eval(a) * chi.group.additive_character(a);
    }
    GaussSum {
        character: chi.clone(),
        value,
    }
}

/// All p−1 characters mod p: index 0 principal, the rest primitive.
pub fn all_characters(p: i64) -> Result<Vec<DirichletCharacter>> {
    let group = CharacterGroup::new(p)?;
    Ok((0..(p - 1) as usize)
        .map(|k| DirichletCharacter::new(Arc::clone(&group), k))
        .collect())
}

/// The quadratic character mod p (index (p−1)/2).
pub fn quadratic_character(p: i64) -> Result<DirichletCharacter> {
    DirichletCharacter::from_modulus(p, ((p - 1) / 2) as usize)
}
