//! Weight-2 rational newforms of prime level via elliptic-curve point
//! counting, with Hecke expansion and a persistent eigenvalue cache.
//!
//! Curve models are embedded as data but never trusted: construction
//! re-derives the discriminant, checks good reduction away from the level
//! and multiplicative reduction at it, cross-checks the O(p) x-scan
//! counter against full (x, y) enumeration on small primes, verifies
//! Hasse at the first 25 primes, and requires a_q = ±1.

use crate::arith::{factorize, is_prime, primes_up_to};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write as _;
use std::path::PathBuf;

/// Integral Weierstrass model y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6
/// of prime conductor `level`.
#[derive(Debug, Clone)]
pub struct CurveModel {
    pub label: String,
    pub level: i64,
    pub a_invariants: [i64; 5],
}

impl CurveModel {
    pub fn new(label: &str, level: i64, a_invariants: [i64; 5]) -> Self {
        CurveModel {
            label: label.to_string(),
            level,
            a_invariants,
        }
    }

    fn b_invariants(&self) -> (i64, i64, i64, i64) {
        let [a1, a2, a3, a4, a6] = self.a_invariants;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> i64 {
        let (b2, b4, b6, b8) = self.b_invariants();
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    pub fn c4(&self) -> i64 {
        let (b2, b4, _, _) = self.b_invariants();
        b2 * b2 - 24 * b4
    }

    /// Number of affine points over F_p by full (x, y) enumeration.
    /// O(p²): the independent oracle for the x-scan counter.
    pub fn count_points_naive(&self, p: i64) -> i64 {
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|a| a.rem_euclid(p));
        let mut count = 0i64;
        for x in 0..p {
            let rhs = (((x * x % p) * x + a2 * x % p * x + a4 * x + a6) % p).rem_euclid(p);
            for y in 0..p {
                let lhs = ((y * y + a1 * x % p * y + a3 * y) % p).rem_euclid(p);
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    /// a_p = p + 1 − #E(F_p) for a prime p of good reduction, counting
    /// solutions of the completed square (2y + a1x + a3)² = D(x) with a
    /// quadratic-residue table: O(p).
    pub fn ap_good(&self, p: i64) -> i64 {
        assert!(p != self.level);
        if p == 2 {
            return 2 + 1 - (1 + self.count_points_naive(2));
        }
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|a| a.rem_euclid(p));
        let sq = square_table(p);
        let mut affine = 0i64;
        for x in 0..p {
            let d = d_of_x(x, a1, a2, a3, a4, a6, p);
            affine += if d == 0 {
                1
            } else if sq[d as usize] {
                2
            } else {
                0
            };
        }
        p + 1 - (affine + 1)
    }

    /// a_q = q − #E^{ns}(F_q) at the multiplicative prime q; ±1, with the
    /// sign separating split from non-split reduction.
    pub fn ap_multiplicative(&self) -> i64 {
        let q = self.level;
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|a| a.rem_euclid(q));
        let sq = square_table(q);
        let inv2 = (q + 1) / 2; // inverse of 2 mod odd q
        let mut nonsingular_affine = 0i64;
        for x in 0..q {
            let d = d_of_x(x, a1, a2, a3, a4, a6, q);
            if d == 0 {
                // y0 = −(a1 x + a3)/2; singular iff F_x also vanishes
                let y0 = (-(a1 * x + a3)).rem_euclid(q) * inv2 % q;
                let fx = (3 * x % q * x + 2 * a2 * x + a4 + q * q - a1 * y0).rem_euclid(q);
                if fx != 0 {
                    nonsingular_affine += 1;
                }
            } else if sq[d as usize] {
                nonsingular_affine += 2;
            }
        }
        q - (nonsingular_affine + 1)
    }

    /// Reject models that do not genuinely have prime conductor `level`.
    pub fn validate(&self) -> Result<()> {
        let fail = |why: String| Err(Error::InvalidCurveModel(self.label.clone(), why));
        if !is_prime(self.level) {
            return fail(format!("level {} is not prime", self.level));
        }
        let disc = self.discriminant();
        if disc == 0 {
            return fail("zero discriminant".into());
        }
        // good reduction away from q: |Δ| must be a power of q
        for (p, _) in factorize(disc.abs()) {
            if p != self.level {
                return fail(format!("discriminant divisible by {p} != level"));
            }
        }
        // multiplicative (not additive) reduction at q
        if self.c4() % self.level == 0 {
            return fail("additive reduction at the level".into());
        }
        let aq = self.ap_multiplicative();
        if aq != 1 && aq != -1 {
            return fail(format!("a_q = {aq} not in {{-1, +1}}"));
        }
        // x-scan counter against the full-enumeration oracle
        for p in [3i64, 5, 7, 11, 13] {
            if p == self.level {
                continue;
            }
            let scan = self.ap_good(p);
            let naive = p + 1 - (self.count_points_naive(p) + 1);
            if scan != naive {
                return fail(format!("point counters disagree at p = {p}: {scan} vs {naive}"));
            }
        }
        // Hasse bound at the first 25 good primes
        let mut checked = 0;
        for p in primes_up_to(150) {
            if p == self.level || checked >= 25 {
                continue;
            }
            let ap = self.ap_good(p);
            if (ap * ap) as f64 > 4.0 * p as f64 {
                return fail(format!("Hasse fails at p = {p}: a_p = {ap}"));
            }
            checked += 1;
        }
        Ok(())
    }
}

fn d_of_x(x: i64, a1: i64, a2: i64, a3: i64, a4: i64, a6: i64, p: i64) -> i64 {
    // D(x) = 4(x³ + a2x² + a4x + a6) + (a1x + a3)², reduced mod p
    let x2 = x * x % p;
    let cubic = ((x2 * x + a2 * x2) % p + a4 * x + a6) % p;
    let lin = (a1 * x + a3) % p;
    (4 * cubic + lin * lin).rem_euclid(p)
}

fn square_table(p: i64) -> Vec<bool> {
    let mut t = vec![false; p as usize];
    for y in 0..p {
        t[(y * y % p) as usize] = true;
    }
    t
}

/// Built-in rational weight-2 families. Level 13 is genuinely empty
/// (X₀(13) has genus 0) and exercises the empty-family paths.
pub fn builtin_curves() -> Vec<CurveModel> {
    vec![
        CurveModel::new("11a1", 11, [0, -1, 1, -10, -20]),
        CurveModel::new("17a1", 17, [1, -1, 1, -1, -14]),
        CurveModel::new("19a1", 19, [0, 1, 1, -9, -15]),
        CurveModel::new("37a1", 37, [0, 0, 1, -1, 0]),
        CurveModel::new("37b1", 37, [0, 1, 1, -23, -50]),
    ]
}

pub const BUILTIN_LEVELS: [i64; 5] = [11, 13, 17, 19, 37];

/// Built-in levels with the labels of their rational newforms.
pub fn builtin_levels() -> Vec<(i64, Vec<String>)> {
    BUILTIN_LEVELS
        .iter()
        .map(|&q| {
            let labels = builtin_curves()
                .iter()
                .filter(|c| c.level == q)
                .map(|c| c.label.clone())
                .collect();
            (q, labels)
        })
        .collect()
}

pub fn curve_by_label(label: &str) -> Result<CurveModel> {
    builtin_curves()
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::NotBuiltIn(-1))
}

pub fn curves_for_level(q: i64) -> Result<Vec<CurveModel>> {
    if !BUILTIN_LEVELS.contains(&q) {
        return Err(Error::NotBuiltIn(q));
    }
    Ok(builtin_curves().into_iter().filter(|c| c.level == q).collect())
}

pub const DEFAULT_P_MAX: i64 = 10_000;

/// Plain-text CSV eigenvalue store: one `<label>.csv` per form, rows
/// `label,p,a_p`, append-only.
#[derive(Debug, Clone)]
pub struct EigenvalueCache {
    pub dir: PathBuf,
}

impl EigenvalueCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        EigenvalueCache { dir: dir.into() }
    }

    /// Cache directory from the TWISTMOMENT_CACHE environment variable.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("TWISTMOMENT_CACHE").map(|d| Self::new(PathBuf::from(d)))
    }

    fn file(&self, label: &str) -> PathBuf {
        self.dir.join(format!("{label}.csv"))
    }

    pub fn load(&self, label: &str) -> Result<HashMap<i64, i64>> {
        let mut map = HashMap::new();
        let path = self.file(label);
        if !path.exists() {
            return Ok(map);
        }
        let text = std::fs::read_to_string(path)?;
        for line in text.lines() {
            let mut parts = line.split(',');
            let (l, p, ap) = (parts.next(), parts.next(), parts.next());
            if let (Some(l), Some(p), Some(ap)) = (l, p, ap) {
                if l == label {
                    let p: i64 = p.trim().parse().map_err(|_| Error::Io(format!("bad row: {line}")))?;
                    let ap: i64 = ap.trim().parse().map_err(|_| Error::Io(format!("bad row: {line}")))?;
                    map.insert(p, ap);
                }
            }
        }
        Ok(map)
    }

    /// Append rows for primes not already present, in increasing p order.
    pub fn append(&self, label: &str, rows: &[(i64, i64)]) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let existing = self.load(label)?;
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.file(label))?;
        let mut sorted: Vec<_> = rows.iter().filter(|(p, _)| !existing.contains_key(p)).collect();
        sorted.sort();
        for (p, ap) in sorted {
            writeln!(file, "{label},{p},{ap}")?;
        }
        Ok(())
    }
}

/// A weight-2 rational newform backed by a validated curve model, with
/// prime eigenvalues a_p held for p ≤ p_max.
pub struct Newform {
    pub curve: CurveModel,
    pub weight: u32,
    p_max: i64,
    ap: HashMap<i64, i64>,
    aq: i64,
}

impl Newform {
    pub fn new(curve: CurveModel, p_max: i64) -> Result<Self> {
        Self::with_cache(curve, p_max, None)
    }

    pub fn with_cache(curve: CurveModel, p_max: i64, cache: Option<&EigenvalueCache>) -> Result<Self> {
        curve.validate()?;
        let aq = curve.ap_multiplicative();
        let mut ap = match cache {
            Some(c) => c.load(&curve.label)?,
            None => HashMap::new(),
        };
        let missing: Vec<i64> = primes_up_to(p_max)
            .into_iter()
            .filter(|&p| p != curve.level && !ap.contains_key(&p))
            .collect();
        let computed: Vec<(i64, i64)> = missing
            .par_iter()
            .map(|&p| (p, curve.ap_good(p)))
            .collect();
        if let Some(c) = cache {
            c.append(&curve.label, &computed)?;
        }
        ap.extend(computed);
        Ok(Newform {
            curve,
            weight: 2,
            p_max,
            ap,
            aq,
        })
    }

    pub fn label(&self) -> &str {
        &self.curve.label
    }

    pub fn level(&self) -> i64 {
        self.curve.level
    }

    pub fn p_max(&self) -> i64 {
        self.p_max
    }

    /// a_p for prime p: point-counted for good p ≤ p_max, ±1 at p = q.
    pub fn a_p(&self, p: i64) -> Result<i64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == self.curve.level {
            return Ok(self.aq);
        }
        self.ap.get(&p).copied().ok_or(Error::CacheMiss(p, self.p_max))
    }

    /// a_n by Hecke multiplicativity:
    /// a_{p^{r+1}} = a_p a_{p^r} − p a_{p^{r−1}} away from the level,
    /// a_{q^r} = a_q^r at it.
    pub fn a_n(&self, n: i64) -> Result<i64> {
        assert!(n >= 1);
        let mut value = 1i64;
        for (p, e) in factorize(n) {
            value *= self.prime_power(p, e)?;
        }
        Ok(value)
    }

    fn prime_power(&self, p: i64, e: u32) -> Result<i64> {
        let ap = self.a_p(p)?;
        if p == self.curve.level {
            return Ok(ap.pow(e));
        }
        let (mut prev, mut cur) = (1i64, ap);
        for _ in 1..e {
            (prev, cur) = (cur, ap * cur - p * prev);
        }
        Ok(cur)
    }

    /// ρ_f(n) = a_n / √n (weight 2 normalization).
    pub fn rho(&self, n: i64) -> Result<f64> {
        Ok(self.a_n(n)? as f64 / (n as f64).sqrt())
    }

    /// Dense table [a_0 = 0, a_1, …, a_{n_max}] via a smallest-prime-factor
    /// sieve; the workhorse for the summation harnesses.
    pub fn a_n_table(&self, n_max: i64) -> Result<Vec<f64>> {
        let n_max = n_max.max(1) as usize;
        // verify prime coverage first
        for p in primes_up_to(n_max as i64) {
            self.a_p(p)?;
        }
        let mut spf = vec![0u32; n_max + 1];
        for p in primes_up_to(n_max as i64) {
            let mut m = p as usize;
            while m <= n_max {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
                m += p as usize;
            }
        }
        let mut table = vec![0.0f64; n_max + 1];
        if n_max >= 1 {
            table[1] = 1.0;
        }
        for n in 2..=n_max {
            let p = spf[n] as i64;
            let mut pk = p;
            let mut m = n as i64 / p;
            while m % p == 0 {
                pk *= p;
                m /= p;
            }
            table[n] = if m > 1 {
                table[pk as usize] * table[m as usize]
            } else {
                self.prime_power(p, (n as i64 / m).ilog(p))? as f64
            };
        }
        Ok(table)
    }

    /// ρ_f table: a_n/√n for n ≤ n_max.
    pub fn rho_table(&self, n_max: i64) -> Result<Vec<f64>> {
        let mut t = self.a_n_table(n_max)?;
        for (n, v) in t.iter_mut().enumerate().skip(1) {
            *v /= (n as f64).sqrt();
        }
        Ok(t)
    }
}
