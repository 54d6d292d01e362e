//! The coefficient function of the fourth eta power, by three
//! independent routes: the chi-weighted four-squares sum, the truncated
//! eta product, and the multiplicative extension of the Euler local
//! factors through the Grossencharacter on Eisenstein integers.
//!
//! Indexing: a(m) are the newform coefficients (m = 1 mod 6 support);
//! psi_raw(n) = a(n/4) when n = 4 mod 24 and 0 otherwise.

use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsiError {
    #[error("n = {0} exceeds the brute-force bound {1}")]
    BoundExceeded(u64, u64),
    #[error("{0} is not split in Z[j]")]
    NoSplitting(u64),
    #[error("coefficient table only reaches {0}")]
    TableTooSmall(u64),
    #[error("bad table format: {0}")]
    BadFormat(String),
}

pub const DEFAULT_BRUTE_BOUND: u64 = 4000;

/// The primitive character mod 12: +1 at 12k+-1, -1 at 12k+-5, 0 on
/// multiples of 2 or 3.
pub fn chi12(n: i64) -> i64 {
    let r = n.rem_euclid(12);
    match r {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

// ---------------------------------------------------------------------
// Route 1: chi-weighted four squares
// ---------------------------------------------------------------------

/// Table of psi(n) for n <= n_max by direct enumeration of ordered
/// quadruples of positive integers (entries with chi = 0 are skipped;
/// quadruples containing 0 contribute nothing since chi(0) = 0).
pub fn psi_bruteforce_table(n_max: u64) -> Vec<i64> {
    let mut out = vec![0i64; n_max as usize + 1];
    let top = (n_max as f64).sqrt() as i64 + 1;
    let vals: Vec<(i64, i64)> = (1..=top)
        .filter_map(|v| {
            let ch = chi12(v);
            (ch != 0).then_some((v, ch))
        })
        .collect();
    for &(a, ca) in &vals {
        let a2 = a * a;
        if a2 > n_max as i64 {
            break;
        }
        for &(b, cb) in &vals {
            let ab = a2 + b * b;
            if ab > n_max as i64 {
                break;
            }
            for &(c, cc) in &vals {
                let abc = ab + c * c;
                if abc > n_max as i64 {
                    break;
                }
                for &(d, cd) in &vals {
                    let n = abc + d * d;
                    if n > n_max as i64 {
                        break;
                    }
                    out[n as usize] += ca * cb * cc * cd;
                }
            }
        }
    }
    out
}

/// psi(n) by the quadruple sum, guarded by the desk-scale bound.
pub fn psi_bruteforce(n: u64) -> Result<i64, PsiError> {
    psi_bruteforce_bounded(n, DEFAULT_BRUTE_BOUND)
}

pub fn psi_bruteforce_bounded(n: u64, bound: u64) -> Result<i64, PsiError> {
    if n > bound {
        return Err(PsiError::BoundExceeded(n, bound));
    }
    Ok(psi_bruteforce_table(n)[n as usize])
}

// ---------------------------------------------------------------------
// Eisenstein integers
// ---------------------------------------------------------------------

/// a + b j with j = exp(2 pi i / 3); norm a^2 - a b + b^2.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EisensteinInt {
    pub a: i64,
    pub b: i64,
}

impl fmt::Debug for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}j", self.a, self.b)
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}j", self.a, self.b)
    }
}

impl EisensteinInt {
    pub fn new(a: i64, b: i64) -> Self {
        EisensteinInt { a, b }
    }

    pub fn norm(&self) -> i64 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    pub fn mul(&self, o: &EisensteinInt) -> Self {
        // j^2 = -1 - j
        EisensteinInt {
            a: self.a * o.a - self.b * o.b,
            b: self.a * o.b + self.b * o.a - self.b * o.b,
        }
    }

    pub fn conj(&self) -> Self {
        EisensteinInt {
            a: self.a - self.b,
            b: -self.b,
        }
    }

    /// Trace z + conj(z) = 2a - b.
    pub fn trace(&self) -> i64 {
        2 * self.a - self.b
    }

    pub fn units() -> [EisensteinInt; 6] {
        // +-1, +-j, +-j^2 = -(1 + j)
        [
            EisensteinInt::new(1, 0),
            EisensteinInt::new(-1, 0),
            EisensteinInt::new(0, 1),
            EisensteinInt::new(0, -1),
            EisensteinInt::new(-1, -1),
            EisensteinInt::new(1, 1),
        ]
    }

    pub fn associates(&self) -> [EisensteinInt; 6] {
        let mut out = [*self; 6];
        for (o, u) in out.iter_mut().zip(Self::units()) {
            *o = self.mul(&u);
        }
        out
    }

    /// z = 1 mod 2 sqrt(-3), the conductor; sqrt(-3) = 1 + 2j.
    pub fn is_one_mod_conductor(&self) -> bool {
        // (z - 1) / (2 + 4j): multiply by conj(2 + 4j) = -2 - 4j and
        // require both coordinates divisible by norm 12
        let w = EisensteinInt::new(self.a - 1, self.b);
        let t = w.mul(&EisensteinInt::new(-2, -4));
        t.a.rem_euclid(12) == 0 && t.b.rem_euclid(12) == 0
    }
}

/// The Grossencharacter value at a split prime p = 1 mod 3: the unique
/// generator of a prime above p congruent to 1 mod 2 sqrt(-3).
pub fn grossencharacter(p: u64) -> Result<EisensteinInt, PsiError> {
    if p % 3 != 1 {
        return Err(PsiError::NoSplitting(p));
    }
    let p = p as i64;
    // find any (a, b) with a^2 - a b + b^2 = p
    let mut seed = None;
    'outer: for a in 0..=((4 * p / 3) as f64).sqrt() as i64 + 1 {
        // b^2 - a b + (a^2 - p) = 0 => b = (a +- sqrt(4p - 3a^2)) / 2
        let disc = 4 * p - 3 * a * a;
        if disc < 0 {
            break;
        }
        let s = (disc as f64).sqrt() as i64;
        for t in [s - 1, s, s + 1] {
            if t >= 0 && t * t == disc && (a + t) % 2 == 0 {
                seed = Some(EisensteinInt::new(a, (a + t) / 2));
                break 'outer;
            }
        }
    }
    let seed = seed.ok_or(PsiError::NoSplitting(p as u64))?;
    debug_assert_eq!(seed.norm(), p);
    let hits: Vec<EisensteinInt> = seed
        .associates()
        .into_iter()
        .filter(|z| z.is_one_mod_conductor())
        .collect();
    debug_assert_eq!(hits.len(), 1, "unique associate = 1 mod conductor");
    Ok(hits[0])
}

// ---------------------------------------------------------------------
// Route 3: multiplicative extension of the local factors
// ---------------------------------------------------------------------

/// a(p^e) from the Euler local factor at p.
fn prime_power_coeff(p: u64, e: u32) -> i64 {
    if e == 0 {
        return 1;
    }
    if p == 2 || p == 3 {
        return 0;
    }
    if p % 3 == 2 {
        // inert: (1 + p X^2)^{-1} = sum (-p)^k X^{2k}
        if e % 2 == 1 {
            0
        } else {
            (-(p as i64)).pow(e / 2)
        }
    } else {
        // split: full homogeneous sum of degree e in pi, conj(pi),
        // via s_e = t s_{e-1} - p s_{e-2}
        let t = grossencharacter(p).expect("split prime").trace();
        let (mut s0, mut s1) = (1i64, t);
        if e == 1 {
            return t;
        }
        for _ in 2..=e {
            let s2 = t * s1 - (p as i64) * s0;
            s0 = s1;
            s1 = s2;
        }
        s1
    }
}

/// a(m) for a single m by factorization.
pub fn psi_multiplicative(m: u64) -> i64 {
    assert!(m >= 1);
    let mut m = m;
    let mut out = 1i64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out *= prime_power_coeff(p, e);
            if out == 0 {
                return 0;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out *= prime_power_coeff(m, 1);
    }
    out
}

// ---------------------------------------------------------------------
// Coefficient table
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSource {
    MultiplicativeSieve,
    EtaProduct,
}

/// Immutable table of a(1..=limit) with the psi_raw view on n <= 4*limit.
#[derive(Clone)]
pub struct CoeffTable {
    limit: u64,
    a: Vec<i64>,
    source: TableSource,
}

impl CoeffTable {
    /// Build by factoring every m with a smallest-prime-factor sieve and
    /// multiplying exact prime-power values.
    pub fn build(limit: u64) -> Self {
        assert!(limit >= 1);
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut i = 2usize;
        while i * i <= n {
            if spf[i] == 0 {
                let mut j = i * i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        let mut a = vec![0i64; n + 1];
        a[1] = 1;
        // cache of traces for split primes
        let mut trace = std::collections::HashMap::new();
        let pp_coeff = |p: u64, e: u32, trace: &mut std::collections::HashMap<u64, i64>| -> i64 {
            if p == 2 || p == 3 {
                return 0;
            }
            if p % 3 == 2 {
                if e % 2 == 1 {
                    0
                } else {
                    (-(p as i64)).pow(e / 2)
                }
            } else {
                let t = *trace
                    .entry(p)
                    .or_insert_with(|| grossencharacter(p).expect("split").trace());
                let (mut s0, mut s1) = (1i64, t);
                for _ in 2..=e.max(1) {
                    let s2 = t * s1 - (p as i64) * s0;
                    s0 = s1;
                    s1 = s2;
                }
                if e == 0 {
                    1
                } else {
                    s1
                }
            }
        };
        for m in 2..=n {
            let p = if spf[m] == 0 { m as u64 } else { spf[m] as u64 };
            let mut rest = m;
            let mut e = 0u32;
            while rest % p as usize == 0 {
                rest /= p as usize;
                e += 1;
            }
            a[m] = if a[rest] == 0 {
                0
            } else {
                a[rest] * pp_coeff(p, e, &mut trace)
            };
        }
        CoeffTable {
            limit,
            a,
            source: TableSource::MultiplicativeSieve,
        }
    }

    /// Build from the truncated eta product: the coefficients of
    /// prod (1 - x^k)^4 read off at x^{(m-1)/6}. Exact integers via the
    /// pentagonal-number series squared twice.
    pub fn build_eta_product(limit: u64) -> Self {
        let deg = ((limit - 1) / 6) as usize;
        // Euler product prod (1 - x^k) = sum (-1)^k x^{k(3k-1)/2}
        let mut euler = vec![0i64; deg + 1];
        euler[0] = 1;
        let mut k = 1i64;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 as usize > deg && g2 as usize > deg {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            if (g1 as usize) <= deg {
                euler[g1 as usize] += sign;
            }
            if (g2 as usize) <= deg {
                euler[g2 as usize] += sign;
            }
            k += 1;
        }
        let square = |f: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; deg + 1];
            for (i, &fi) in f.iter().enumerate() {
                if fi == 0 {
                    continue;
                }
                for (j, &fj) in f.iter().take(deg + 1 - i).enumerate() {
                    if fj != 0 {
                        out[i + j] += fi * fj;
                    }
                }
            }
            out
        };
        let quartic = square(&square(&euler));
        let mut a = vec![0i64; limit as usize + 1];
        a[1] = 1;
        let mut m = 1usize;
        while m <= limit as usize {
            a[m] = quartic[(m - 1) / 6];
            m += 6;
        }
        CoeffTable {
            limit,
            a,
            source: TableSource::EtaProduct,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    /// Newform coefficient a(m), m <= limit.
    pub fn a(&self, m: u64) -> Result<i64, PsiError> {
        if m == 0 || m > self.limit {
            return Err(PsiError::TableTooSmall(self.limit));
        }
        Ok(self.a[m as usize])
    }

    /// psi(n) = a(n/4) when n = 4 mod 24, else 0; defined for n <= 4*limit.
    pub fn psi_raw(&self, n: u64) -> Result<i64, PsiError> {
        if n > 4 * self.limit {
            return Err(PsiError::TableTooSmall(self.limit));
        }
        if n % 24 == 4 {
            self.a(n / 4)
        } else {
            Ok(0)
        }
    }

    /// Fraction of n <= cap with psi(n) != 0.
    pub fn lacunarity_density(&self, cap: u64) -> Result<f64, PsiError> {
        if cap > 4 * self.limit {
            return Err(PsiError::TableTooSmall(self.limit));
        }
        let mut count = 0u64;
        let mut n = 4u64;
        while n <= cap {
            if self.psi_raw(n)? != 0 {
                count += 1;
            }
            n += 24;
        }
        Ok(count as f64 / cap as f64)
    }

    /// max over M <= cap of |sum_{m <= M} a(m)| / M^{5/6}.
    pub fn partial_sum_growth(&self, cap: u64) -> Result<f64, PsiError> {
        if cap > self.limit {
            return Err(PsiError::TableTooSmall(self.limit));
        }
        let mut acc = 0i64;
        let mut best = 0f64;
        for m in 1..=cap {
            acc += self.a[m as usize];
            let ratio = acc.unsigned_abs() as f64 / (m as f64).powf(5.0 / 6.0);
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best)
    }

    /// |a(p)| <= 2 sqrt(p) for all primes p <= cap (exact integer check).
    pub fn ramanujan_check(&self, cap: u64) -> Result<bool, PsiError> {
        if cap > self.limit {
            return Err(PsiError::TableTooSmall(self.limit));
        }
        for p in primes_up_to(cap) {
            let ap = self.a[p as usize];
            if (ap as i128) * (ap as i128) > 4 * p as i128 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// CSV dump: header line then one "m,a" row per support index.
    pub fn dump_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "hexlab-coeff-table,v1,limit={}", self.limit)?;
        let mut m = 1u64;
        while m <= self.limit {
            writeln!(w, "{},{}", m, self.a[m as usize])?;
            m += 6;
        }
        Ok(())
    }

    pub fn load_csv<R: BufRead>(r: R) -> Result<Self, PsiError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| PsiError::BadFormat("empty file".into()))?
            .map_err(|e| PsiError::BadFormat(e.to_string()))?;
        let mut parts = header.split(',');
        if parts.next() != Some("hexlab-coeff-table") || parts.next() != Some("v1") {
            return Err(PsiError::BadFormat("bad header".into()));
        }
        let limit: u64 = parts
            .next()
            .and_then(|s| s.strip_prefix("limit="))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PsiError::BadFormat("bad limit".into()))?;
        let mut a = vec![0i64; limit as usize + 1];
        for line in lines {
            let line = line.map_err(|e| PsiError::BadFormat(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (m, v) = line
                .split_once(',')
                .ok_or_else(|| PsiError::BadFormat(format!("bad row {line:?}")))?;
            let m: u64 = m.parse().map_err(|_| PsiError::BadFormat("bad m".into()))?;
            let v: i64 = v.parse().map_err(|_| PsiError::BadFormat("bad a".into()))?;
            if m > limit {
                return Err(PsiError::BadFormat("row beyond limit".into()));
            }
            a[m as usize] = v;
        }
        Ok(CoeffTable {
            limit,
            a,
            source: TableSource::MultiplicativeSieve,
        })
    }
}

/// Serre's support criterion: psi(n) != 0 iff n = 4 mod 24 and every
/// prime = 2 mod 3 divides n/4 to an even power.
pub fn nonvanishing(n: u64) -> bool {
    if n % 24 != 4 {
        return false;
    }
    // n/4 = 1 mod 6, so only odd primes >= 5 can divide it
    let mut m = n / 4;
    let mut p = 5u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if p % 3 == 2 && e % 2 == 1 {
                return false;
            }
        }
        p += 2;
    }
    m == 1 || m % 3 != 2
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
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
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi_values() {
        assert_eq!(chi12(1), 1);
        assert_eq!(chi12(5), -1);
        assert_eq!(chi12(6), 0);
        assert_eq!(chi12(7), -1);
        assert_eq!(chi12(11), 1);
        assert_eq!(chi12(13), 1);
        assert_eq!(chi12(-1), 1);
        // multiplicative
        for a in 1i64..60 {
            for b in 1i64..60 {
                assert_eq!(chi12(a * b), chi12(a) * chi12(b));
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(psi_bruteforce(4).unwrap(), 1);
        assert_eq!(psi_bruteforce(1).unwrap(), 0);
        assert_eq!(psi_bruteforce(28).unwrap(), -4);
        assert_eq!(
            psi_bruteforce(5000),
            Err(PsiError::BoundExceeded(5000, 4000))
        );
    }

    #[test]
    fn eta_product_examples() {
        let t = CoeffTable::build_eta_product(200);
        assert_eq!(t.a(1).unwrap(), 1);
        assert_eq!(t.a(7).unwrap(), -4);
        assert_eq!(t.a(25).unwrap(), -5);
        assert_eq!(t.a(13).unwrap(), 2);
        // support: a(m) = 0 unless m = 1 mod 6
        for m in 1..=200 {
            if m % 6 != 1 {
                assert_eq!(t.a(m).unwrap(), 0);
            }
        }
    }

    #[test]
    fn multiplicative_examples() {
        assert_eq!(psi_multiplicative(1), 1);
        assert_eq!(psi_multiplicative(7), -4);
        assert_eq!(psi_multiplicative(25), -5);
        assert_eq!(psi_multiplicative(11), 0);
        assert_eq!(psi_multiplicative(121), -11);
    }

    #[test]
    fn grossencharacter_examples() {
        let pi = grossencharacter(7).unwrap();
        assert_eq!(pi.norm(), 7);
        assert!(pi.is_one_mod_conductor());
        assert_eq!(pi.trace(), -4);
        // associate of 1 + 3j
        let base = EisensteinInt::new(1, 3);
        assert!(base.associates().contains(&pi));
        let pi13 = grossencharacter(13).unwrap();
        assert_eq!(pi13.norm(), 13);
        let t = CoeffTable::build_eta_product(20);
        assert_eq!(pi13.trace(), t.a(13).unwrap());
        assert_eq!(grossencharacter(5), Err(PsiError::NoSplitting(5)));
        // uniqueness among the six associates, for many split primes
        for p in primes_up_to(500) {
            if p % 3 == 1 {
                let pi = grossencharacter(p).unwrap();
                let count = pi
                    .associates()
                    .iter()
                    .filter(|z| z.is_one_mod_conductor())
                    .count();
                assert_eq!(count, 1, "p = {p}");
                assert_eq!(pi.norm(), p as i64);
            }
        }
    }

    #[test]
    fn sieve_matches_eta_product() {
        let sieve = CoeffTable::build(2000);
        let eta = CoeffTable::build_eta_product(2000);
        for m in 1..=2000 {
            assert_eq!(sieve.a(m).unwrap(), eta.a(m).unwrap(), "a({m})");
        }
    }

    #[test]
    fn multiplicativity_random_coprime() {
        let t = CoeffTable::build(40_000);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut done = 0;
        while done < 500 {
            let m1 = rng.gen_range(1u64..200);
            let m2 = rng.gen_range(1u64..200);
            if gcd(m1, m2) != 1 {
                continue;
            }
            assert_eq!(
                t.a(m1 * m2).unwrap(),
                t.a(m1).unwrap() * t.a(m2).unwrap(),
                "a({m1}*{m2})"
            );
            done += 1;
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn nonvanishing_examples() {
        assert!(nonvanishing(4));
        assert!(!nonvanishing(44));
        assert!(nonvanishing(28));
        let t = CoeffTable::build(5000);
        let mut n = 4u64;
        while n <= 20_000 {
            assert_eq!(
                nonvanishing(n),
                t.psi_raw(n).unwrap() != 0,
                "criterion at {n}"
            );
            n += 24;
        }
    }

    #[test]
    fn density_and_growth() {
        let t = CoeffTable::build(100);
        assert_eq!(t.lacunarity_density(10).unwrap(), 0.1);
        assert_eq!(t.partial_sum_growth(1).unwrap(), 1.0);
        // monotone in the cap
        let t = CoeffTable::build(3000);
        let mut prev = 0.0;
        for cap in [10, 100, 1000, 3000] {
            let g = t.partial_sum_growth(cap).unwrap();
            assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn ramanujan_small() {
        let t = CoeffTable::build(10_000);
        assert!(t.ramanujan_check(10_000).unwrap());
    }

    #[test]
    fn csv_roundtrip() {
        let t = CoeffTable::build(500);
        let mut buf = Vec::new();
        t.dump_csv(&mut buf).unwrap();
        let back = CoeffTable::load_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(back.limit(), 500);
        for m in 1..=500 {
            assert_eq!(t.a(m).unwrap(), back.a(m).unwrap());
        }
    }
}
