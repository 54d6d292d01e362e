//! Continued-fraction codecs between rationals, reals, quadratic surds
//! and L&R words, with exact surd arithmetic.
//!
//! Sign convention: a nonnegative x is encoded by its euclidean digits;
//! anything else is encoded as -1/x of a nonnegative number, recorded
//! by the `negated` flag.

use std::collections::HashMap;
use std::fmt;

use rug::ops::DivRounding;
use rug::{Complete, Integer, Rational};
use thiserror::Error;

use crate::modgroup::{Alphabet, GroupWord, Letter};
use crate::num::{Prec, RInterval};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContFracError {
    #[error("continued fraction must have even length")]
    OddLength,
    #[error("input is not an irrational of the expected kind")]
    NotIrrational,
    #[error("period matrix is trivial")]
    DegeneratePeriod,
    #[error("cannot certify the next digit at this precision")]
    PrecisionExhausted,
    #[error("geodesic endpoints are not in normalized position")]
    NotNormalized,
    #[error("zero is not a valid input here")]
    ZeroInput,
    #[error("parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------
// Finite continued fractions
// ---------------------------------------------------------------------

/// Finite euclidean continued fraction, possibly marked as representing
/// -1/value via the `negated` flag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CfSeq {
    pub negated: bool,
    pub digits: Vec<Integer>,
}

impl fmt::Debug for CfSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CfSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.digits.is_empty() {
            "[]".to_string()
        } else {
            let head = self.digits[0].to_string();
            let tail: Vec<String> = self.digits[1..].iter().map(|d| d.to_string()).collect();
            if tail.is_empty() {
                format!("[{head}]")
            } else {
                format!("[{head};{}]", tail.join(","))
            }
        };
        if self.negated {
            write!(f, "-1/{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Any,
}

impl CfSeq {
    pub fn new(negated: bool, digits: Vec<Integer>) -> Self {
        debug_assert!(digits.iter().skip(1).all(|d| *d >= 1));
        debug_assert!(digits.first().map_or(true, |d| *d >= 0));
        CfSeq { negated, digits }
    }

    pub fn from_u32s(negated: bool, digits: &[u32]) -> Self {
        CfSeq::new(negated, digits.iter().map(|&d| Integer::from(d)).collect())
    }

    /// Toggle between the two representations of the same rational.
    pub fn toggled_parity(&self) -> CfSeq {
        let mut d = self.digits.clone();
        if d.is_empty() {
            d.push(Integer::new());
        } else if d.len() == 1 && d[0] == 0 {
            d.clear();
        } else if d.last().unwrap() == &1 && d.len() >= 2 {
            let _ = d.pop();
            *d.last_mut().unwrap() += 1;
        } else {
            *d.last_mut().unwrap() -= 1;
            d.push(Integer::from(1));
        }
        CfSeq::new(self.negated, d)
    }

    /// Exact value as (num, den), den >= 0, gcd 1; (1, 0) encodes infinity.
    pub fn value(&self) -> (Integer, Integer) {
        let (mut n, mut m) = if self.digits.is_empty() {
            // empty expansion encodes 0
            (Integer::new(), Integer::from(1))
        } else {
            let (mut n, mut m) = (Integer::from(1), Integer::new());
            for d in self.digits.iter().rev() {
                // x -> d + 1/x maps n/m to (d n + m)/n
                let new_n = (d * &n).complete() + &m;
                m = std::mem::replace(&mut n, new_n);
            }
            (n, m)
        };
        if self.negated {
            // value -> -1/value
            std::mem::swap(&mut n, &mut m);
            n = -n;
        }
        if m.cmp0() == std::cmp::Ordering::Less || (m.cmp0() == std::cmp::Ordering::Equal && n.cmp0() == std::cmp::Ordering::Less) {
            n = -n;
            m = -m;
        }
        let g = n.clone().gcd(&m);
        if g != 0 {
            n /= &g;
            m /= &g;
        }
        (n, m)
    }
}

/// Euclidean expansion of num/den with the requested length parity.
pub fn rational_to_cf(num: &Integer, den: &Integer, parity: Parity) -> CfSeq {
    assert!(
        num.cmp0() != std::cmp::Ordering::Equal || den.cmp0() != std::cmp::Ordering::Equal,
        "0/0 has no expansion"
    );
    // orient: den >= 0
    let (mut n, mut d) = (num.clone(), den.clone());
    if d.cmp0() == std::cmp::Ordering::Less {
        n = -n;
        d = -d;
    }
    let negated = d.cmp0() == std::cmp::Ordering::Equal || n.cmp0() == std::cmp::Ordering::Less;
    if negated {
        // x -> -1/x = d / (-n)
        let new_n = d;
        let mut new_d = -n;
        if new_d.cmp0() == std::cmp::Ordering::Less {
            // unreachable: x < 0 gives -n > 0; x = inf gives d = 0 handled below
            new_d = -new_d;
        }
        n = new_n;
        d = new_d;
    }
    let mut digits = Vec::new();
    if d.cmp0() != std::cmp::Ordering::Equal {
        loop {
            let (q, r) = n.clone().div_rem_euc(d.clone());
            digits.push(q);
            if r.cmp0() == std::cmp::Ordering::Equal {
                break;
            }
            n = d;
            d = r;
        }
    }
    let cf = CfSeq::new(negated, digits);
    match parity {
        Parity::Any => cf,
        Parity::Even => {
            if cf.digits.len() % 2 == 0 {
                cf
            } else {
                cf.toggled_parity()
            }
        }
        Parity::Odd => {
            if cf.digits.len() % 2 == 1 {
                cf
            } else {
                cf.toggled_parity()
            }
        }
    }
}

/// R^{n0} L^{n1} ... L^{nk} for an even-length expansion.
pub fn cf_to_lr_word(cf: &CfSeq) -> Result<GroupWord, ContFracError> {
    if cf.negated {
        return Err(ContFracError::NotNormalized);
    }
    if cf.digits.len() % 2 != 0 {
        return Err(ContFracError::OddLength);
    }
    let mut syl = Vec::new();
    for (i, d) in cf.digits.iter().enumerate() {
        let letter = if i % 2 == 0 { Letter::R } else { Letter::L };
        if d.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let e = d.to_i64().expect("letter run fits i64");
        syl.push((letter, e));
    }
    GroupWord::new(Alphabet::LR, syl).map_err(|e| ContFracError::Parse(e.to_string()))
}

/// Convergents p_k/q_k of a digit sequence.
pub fn convergents(digits: &[Integer]) -> Vec<(Integer, Integer)> {
    let mut out = Vec::with_capacity(digits.len());
    let (mut p0, mut q0) = (Integer::from(1), Integer::new());
    let (mut p1, mut q1) = (Integer::new(), Integer::from(1));
    for d in digits {
        let p = (d * &p0).complete() + &p1;
        let q = (d * &q0).complete() + &q1;
        p1 = std::mem::replace(&mut p0, p);
        q1 = std::mem::replace(&mut q0, q);
        out.push((p0.clone(), q0.clone()));
    }
    out
}

// ---------------------------------------------------------------------
// Quadratic surds
// ---------------------------------------------------------------------

/// Exact real quadratic irrational (p + q sqrt(d)) / r with r > 0,
/// q != 0, d squarefree >= 2 and gcd(p, q, r) = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub p: Integer,
    pub q: Integer,
    pub r: Integer,
    pub d: Integer,
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.p, self.q, self.d, self.r)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.p, self.q, self.d, self.r)
    }
}

/// Split n > 0 into s^2 * f with f squarefree, by trial division up to
/// min(sqrt(n), 2^20) followed by a perfect-square check on the
/// cofactor. Complete for n <= 10^12; beyond that, square factors with
/// no prime divisor below 2^20 go undetected (far outside the ranges
/// this crate constructs).
fn squarefree_split(n: &Integer) -> (Integer, Integer) {
    let mut f = Integer::from(1);
    let mut s = Integer::from(1);
    let mut m = n.clone();
    let bound = Integer::from(1u32 << 20);
    let mut p = Integer::from(2);
    while (&p * &p).complete() <= m && p <= bound {
        let mut e = 0u32;
        while m.is_divisible(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            if e % 2 == 1 {
                f *= &p;
            }
            for _ in 0..e / 2 {
                s *= &p;
            }
        }
        p += 1;
    }
    if m > 1 {
        if m.is_perfect_square() {
            s *= m.clone().sqrt();
        } else {
            f *= &m;
        }
    }
    (s, f)
}

impl QuadSurd {
    /// Build and normalize; error if the value is rational.
    pub fn new(p: Integer, q: Integer, r: Integer, d: Integer) -> Result<Self, ContFracError> {
        if r.cmp0() == std::cmp::Ordering::Equal {
            return Err(ContFracError::ZeroInput);
        }
        if q.cmp0() == std::cmp::Ordering::Equal || d <= 0 {
            return Err(ContFracError::NotIrrational);
        }
        let (s, f) = squarefree_split(&d);
        if f == 1 {
            return Err(ContFracError::NotIrrational);
        }
        let mut p = p;
        let mut q = q * s;
        let mut r = r;
        let d = f;
        if r.cmp0() == std::cmp::Ordering::Less {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.clone().gcd(&q).gcd(&r);
        if g > 1 {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(QuadSurd { p, q, r, d })
    }

    pub fn from_i64(p: i64, q: i64, r: i64, d: i64) -> Self {
        QuadSurd::new(
            Integer::from(p),
            Integer::from(q),
            Integer::from(r),
            Integer::from(d),
        )
        .expect("valid surd")
    }

    pub fn sqrt_of(d: i64) -> Self {
        QuadSurd::from_i64(0, 1, 1, d)
    }

    pub fn golden_ratio() -> Self {
        QuadSurd::from_i64(1, 1, 2, 5)
    }

    /// Roots of a x^2 + b x + c; `plus` selects (-b + sqrt(disc))/(2a).
    pub fn from_quadratic(
        a: &Integer,
        b: &Integer,
        c: &Integer,
        plus: bool,
    ) -> Result<Self, ContFracError> {
        let disc = (b * b).complete() - Integer::from(4) * (a * c).complete();
        if disc <= 0 {
            return Err(ContFracError::NotIrrational);
        }
        QuadSurd::new(
            -b.clone(),
            Integer::from(if plus { 1 } else { -1 }),
            Integer::from(2) * a.clone(),
            disc,
        )
    }

    pub fn galois_conjugate(&self) -> Self {
        QuadSurd {
            p: self.p.clone(),
            q: (-&self.q).complete(),
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        QuadSurd {
            p: (-&self.p).complete(),
            q: (-&self.q).complete(),
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    /// Sign of u + q sqrt(d).
    fn sign_lin(u: &Integer, q: &Integer, d: &Integer) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (u.cmp0(), q.cmp0()) {
            (Equal, s) | (s, Equal) => s,
            (Greater, Greater) => Greater,
            (Less, Less) => Less,
            (Greater, Less) | (Less, Greater) => {
                let u2 = (u * u).complete();
                let q2d = (q * q).complete() * d;
                match u2.cmp(&q2d) {
                    Equal => Equal, // impossible for squarefree d >= 2
                    o => {
                        if u.cmp0() == Greater {
                            o
                        } else {
                            o.reverse()
                        }
                    }
                }
            }
        }
    }

    pub fn sign(&self) -> std::cmp::Ordering {
        Self::sign_lin(&self.p, &self.q, &self.d)
    }

    /// Exact comparison against a rational num/den (den > 0).
    pub fn cmp_rational(&self, num: &Integer, den: &Integer) -> std::cmp::Ordering {
        // (p + q sqrt d)/r vs n/m  <=>  sign of (m p - n r) + m q sqrt(d)
        let u = (den * &self.p).complete() - (num * &self.r).complete();
        let v = (den * &self.q).complete();
        Self::sign_lin(&u, &v, &self.d)
    }

    pub fn cmp_surd(&self, other: &QuadSurd) -> std::cmp::Ordering {
        assert_eq!(self.d, other.d, "comparison requires the same field");
        // sign of (p1 r2 - p2 r1) + (q1 r2 - q2 r1) sqrt(d)
        let u = (&self.p * &other.r).complete() - (&other.p * &self.r).complete();
        let v = (&self.q * &other.r).complete() - (&other.q * &self.r).complete();
        Self::sign_lin(&u, &v, &self.d)
    }

    fn add_general(&self, other: &QuadSurd, sub: bool) -> Result<Self, ContFracError> {
        assert_eq!(self.d, other.d, "arithmetic requires the same field");
        let oq = if sub {
            (-&other.q).complete()
        } else {
            other.q.clone()
        };
        let op = if sub {
            (-&other.p).complete()
        } else {
            other.p.clone()
        };
        let p = (&self.p * &other.r).complete() + (&op * &self.r).complete();
        let q = (&self.q * &other.r).complete() + (&oq * &self.r).complete();
        let r = (&self.r * &other.r).complete();
        QuadSurd::new(p, q, r, self.d.clone())
    }

    pub fn add(&self, other: &QuadSurd) -> Result<Self, ContFracError> {
        self.add_general(other, false)
    }

    pub fn sub(&self, other: &QuadSurd) -> Result<Self, ContFracError> {
        self.add_general(other, true)
    }

    pub fn add_rational(&self, num: &Integer, den: &Integer) -> Self {
        let p = (&self.p * den).complete() + (num * &self.r).complete();
        let q = (&self.q * den).complete();
        let r = (&self.r * den).complete();
        QuadSurd::new(p, q, r, self.d.clone()).expect("still irrational")
    }

    pub fn mul_rational(&self, num: &Integer, den: &Integer) -> Result<Self, ContFracError> {
        if num.cmp0() == std::cmp::Ordering::Equal {
            return Err(ContFracError::NotIrrational);
        }
        QuadSurd::new(
            (&self.p * num).complete(),
            (&self.q * num).complete(),
            (&self.r * den).complete(),
            self.d.clone(),
        )
    }

    pub fn mul(&self, other: &QuadSurd) -> Result<Self, ContFracError> {
        assert_eq!(self.d, other.d);
        let p = (&self.p * &other.p).complete() + (&self.q * &other.q).complete() * &self.d;
        let q = (&self.p * &other.q).complete() + (&self.q * &other.p).complete();
        let r = (&self.r * &other.r).complete();
        QuadSurd::new(p, q, r, self.d.clone())
    }

    pub fn recip(&self) -> Self {
        // r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
        let norm = (&self.p * &self.p).complete() - (&self.q * &self.q).complete() * &self.d;
        QuadSurd::new(
            (&self.r * &self.p).complete(),
            -(&self.r * &self.q).complete(),
            norm,
            self.d.clone(),
        )
        .expect("reciprocal of an irrational is irrational")
    }

    /// (a x + b) / (c x + d) for an integer matrix with det +-1.
    pub fn mobius(&self, a: &Integer, b: &Integer, c: &Integer, d: &Integer) -> Self {
        let num = QuadSurd {
            p: (&self.p * a).complete() + (b * &self.r).complete(),
            q: (&self.q * a).complete(),
            r: self.r.clone(),
            d: self.d.clone(),
        };
        let den_p = (&self.p * c).complete() + (d * &self.r).complete();
        let den_q = (&self.q * c).complete();
        if den_q.cmp0() == std::cmp::Ordering::Equal && den_p.cmp0() == std::cmp::Ordering::Equal {
            panic!("Moebius denominator vanishes");
        }
        // num/den = num * conj(den) / norm(den)
        let norm = (&den_p * &den_p).complete() - (&den_q * &den_q).complete() * &self.d;
        let p = (&num.p * &den_p).complete() - (&num.q * &den_q).complete() * &self.d;
        let q = (&num.q * &den_p).complete() - (&num.p * &den_q).complete();
        QuadSurd::new(p, q, norm * &num.r, self.d.clone())
            .expect("Moebius image of an irrational is irrational")
    }

    /// Exact floor.
    pub fn floor(&self) -> Integer {
        // float estimate then exact correction
        let est = self.value_float(96).floor();
        let mut f = est.to_integer().unwrap_or_default();
        // value >= k  <=>  (p - k r) + q sqrt(d) >= 0
        let ge = |k: &Integer| -> bool {
            let u = self.p.clone() - (k * &self.r).complete();
            Self::sign_lin(&u, &self.q, &self.d) != std::cmp::Ordering::Less
        };
        while ge(&(f.clone() + 1)) {
            f += 1;
        }
        while !ge(&f) {
            f -= 1;
        }
        f
    }

    pub fn value_float(&self, prec: Prec) -> rug::Float {
        let sq = rug::Float::with_val(prec, &self.d).sqrt();
        (rug::Float::with_val(prec, &self.p) + rug::Float::with_val(prec, &self.q) * sq)
            / rug::Float::with_val(prec, &self.r)
    }

    pub fn value_interval(&self, prec: Prec) -> RInterval {
        use rug::float::Round;
        use rug::ops::AssignRound;
        // directed sqrt then directed combination, sign-aware
        let mut sq_lo = rug::Float::new(prec);
        sq_lo.assign_round(rug::Float::with_val(prec, &self.d).sqrt(), Round::Down);
        let mut sq_hi = sq_lo.clone();
        sq_hi.next_up();
        let (ql, qh) = if self.q.cmp0() == std::cmp::Ordering::Less {
            (&sq_hi, &sq_lo)
        } else {
            (&sq_lo, &sq_hi)
        };
        let mut lo = rug::Float::new(prec);
        lo.assign_round(
            (rug::Float::with_val(prec, &self.p) + rug::Float::with_val(prec, &self.q) * ql)
                / rug::Float::with_val(prec, &self.r),
            Round::Down,
        );
        let mut hi = rug::Float::new(prec);
        hi.assign_round(
            (rug::Float::with_val(prec, &self.p) + rug::Float::with_val(prec, &self.q) * qh)
                / rug::Float::with_val(prec, &self.r),
            Round::Up,
        );
        // widen by an ulp for the division/addition rounding
        lo.next_down();
        hi.next_up();
        RInterval { lo, hi }
    }

    /// Primitive minimal polynomial (a, b, c) with a > 0.
    pub fn minimal_poly(&self) -> (Integer, Integer, Integer) {
        let a = (&self.r * &self.r).complete();
        let b = -Integer::from(2) * (&self.p * &self.r).complete();
        let c = (&self.p * &self.p).complete() - (&self.q * &self.q).complete() * &self.d;
        let g = a.clone().gcd(&b).gcd(&c);
        (a / &g, b / &g, c / &g)
    }
}

/// Height max(|a|, |b|, |c|) of the primitive minimal polynomial.
pub fn surd_height(x: &QuadSurd) -> Integer {
    let (a, b, c) = x.minimal_poly();
    a.abs().max(b.abs()).max(c.abs())
}

pub fn galois_conjugate(x: &QuadSurd) -> QuadSurd {
    x.galois_conjugate()
}

// ---------------------------------------------------------------------
// Exact continued fractions of surds
// ---------------------------------------------------------------------

/// Digit iterator for the continued fraction of a positive quadratic
/// irrational, using the exact (P + sqrt(D))/Q recurrence.
#[derive(Clone, Debug)]
pub struct SurdCfIter {
    pp: Integer,
    qq: Integer,
    dd: Integer,
    isqrt_dd: Integer,
}

impl SurdCfIter {
    pub fn new(x: &QuadSurd) -> Self {
        // write x = (P + sqrt(D)) / Q with Q | D - P^2
        let (mut pp, mut qq, mut dd);
        if x.q.cmp0() == std::cmp::Ordering::Greater {
            pp = x.p.clone();
            qq = x.r.clone();
            dd = (&x.q * &x.q).complete() * &x.d;
        } else {
            pp = (-&x.p).complete();
            qq = (-&x.r).complete();
            dd = (&x.q * &x.q).complete() * &x.d;
        }
        let rem = dd.clone() - (&pp * &pp).complete();
        if !rem.is_divisible(&qq) {
            let scale = qq.clone().abs();
            pp *= &scale;
            dd *= (&scale * &scale).complete();
            qq *= &scale;
        }
        let isqrt_dd = dd.clone().sqrt();
        SurdCfIter { pp, qq, dd, isqrt_dd }
    }

    /// Internal state, for period detection.
    pub fn state(&self) -> (Integer, Integer) {
        (self.pp.clone(), self.qq.clone())
    }

    /// floor((P + sqrt(D)) / Q), exact for irrational sqrt(D).
    fn floor_state(&self) -> Integer {
        let s = &self.isqrt_dd;
        if self.qq.cmp0() == std::cmp::Ordering::Greater {
            ((&self.pp + s).complete()).div_floor(&self.qq)
        } else {
            // floor(v/Q) with Q < 0 and v irrational: -floor(v/|Q|) - 1
            let av = ((&self.pp + s).complete()).div_floor(&(-&self.qq).complete());
            -av - 1
        }
    }
}

impl Iterator for SurdCfIter {
    type Item = Integer;

    fn next(&mut self) -> Option<Integer> {
        let a = self.floor_state();
        let new_p = (&a * &self.qq).complete() - &self.pp;
        let new_q = (self.dd.clone() - (&new_p * &new_p).complete()) / &self.qq;
        self.pp = new_p;
        self.qq = new_q;
        // recompute isqrt only once (D fixed)
        Some(a)
    }
}

/// Exact eventually-periodic expansion of a surd: (preperiod, period)
/// digits of |x| when x > 0, with the -1/x convention applied first.
pub fn surd_to_periodic_cf(x: &QuadSurd) -> (bool, Vec<Integer>, Vec<Integer>) {
    let (negated, y) = if x.sign() == std::cmp::Ordering::Less {
        (true, x.recip().neg())
    } else {
        (false, x.clone())
    };
    let mut it = SurdCfIter::new(&y);
    let mut seen: HashMap<(Integer, Integer), usize> = HashMap::new();
    let mut digits: Vec<Integer> = Vec::new();
    loop {
        let state = it.state();
        if let Some(&idx) = seen.get(&state) {
            let period = digits.split_off(idx);
            return (negated, digits, period);
        }
        seen.insert(state, digits.len());
        digits.push(it.next().unwrap());
    }
}

// ---------------------------------------------------------------------
// Exact reals and certified digit extraction
// ---------------------------------------------------------------------

/// A real number given exactly (rational or quadratic surd) or as a
/// certified interval enclosure.
#[derive(Clone, Debug)]
pub enum ExactReal {
    Rational(Rational),
    Surd(QuadSurd),
    Interval(RInterval),
}

impl ExactReal {
    pub fn from_f64_exact(x: f64) -> Self {
        ExactReal::Rational(Rational::from_f64(x).expect("finite"))
    }

    /// Certified sign where possible.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        match self {
            ExactReal::Rational(q) => Some(q.cmp0()),
            ExactReal::Surd(s) => Some(s.sign()),
            ExactReal::Interval(iv) => {
                use std::cmp::Ordering::*;
                if iv.lo.is_sign_positive() && !iv.lo.is_zero() {
                    Some(Greater)
                } else if iv.hi.is_sign_negative() && !iv.hi.is_zero() {
                    Some(Less)
                } else {
                    None
                }
            }
        }
    }

    pub fn value_float(&self, prec: Prec) -> rug::Float {
        match self {
            ExactReal::Rational(q) => rug::Float::with_val(prec, q),
            ExactReal::Surd(s) => s.value_float(prec),
            ExactReal::Interval(iv) => {
                rug::Float::with_val(prec, &iv.lo + &iv.hi) / 2u32
            }
        }
    }

    /// Certified comparison against a rational (None if undecidable).
    pub fn cmp_rational(&self, num: &Integer, den: &Integer) -> Option<std::cmp::Ordering> {
        match self {
            ExactReal::Rational(q) => {
                Some(q.cmp(&Rational::from((num.clone(), den.clone()))))
            }
            ExactReal::Surd(s) => Some(s.cmp_rational(num, den)),
            ExactReal::Interval(iv) => {
                let prec = iv.lo.prec();
                let t = rug::Float::with_val(prec, Rational::from((num.clone(), den.clone())));
                use std::cmp::Ordering::*;
                if iv.lo > t {
                    Some(Greater)
                } else if iv.hi < t {
                    Some(Less)
                } else {
                    None
                }
            }
        }
    }
}

/// First `depth` continued-fraction digits with the -1/x sign
/// convention; every digit emitted is exactly correct.
pub fn real_to_cf(x: &ExactReal, depth: usize) -> Result<CfSeq, ContFracError> {
    match x {
        ExactReal::Rational(q) => {
            let cf = rational_to_cf(q.numer(), q.denom(), Parity::Any);
            let digits = cf.digits.into_iter().take(depth).collect();
            Ok(CfSeq::new(cf.negated, digits))
        }
        ExactReal::Surd(s) => {
            let (negated, y) = if s.sign() == std::cmp::Ordering::Less {
                (true, s.recip().neg())
            } else {
                (false, s.clone())
            };
            let digits: Vec<Integer> = SurdCfIter::new(&y).take(depth).collect();
            Ok(CfSeq::new(negated, digits))
        }
        ExactReal::Interval(iv) => {
            let mut iv = iv.clone();
            let negated = if iv.hi.is_sign_negative() && !iv.hi.is_zero() {
                // x < 0 certified: switch to -1/x > 0
                let flipped = RInterval {
                    lo: (-iv.hi.clone()).recip(),
                    hi: (-iv.lo.clone()).recip(),
                }; // outward rounding below via widening
                iv = widen(flipped);
                true
            } else if iv.lo.is_sign_positive() {
                false
            } else {
                return Err(ContFracError::PrecisionExhausted);
            };
            let mut digits = Vec::new();
            for k in 0..depth {
                let a = iv.certified_floor().ok_or(ContFracError::PrecisionExhausted)?;
                if k > 0 && a < 1 {
                    return Err(ContFracError::PrecisionExhausted);
                }
                digits.push(a.clone());
                let frac = iv.sub_integer(&a);
                match frac.recip_positive() {
                    Some(next) => iv = next,
                    None => {
                        if digits.len() < depth {
                            return Err(ContFracError::PrecisionExhausted);
                        }
                        break;
                    }
                }
            }
            Ok(CfSeq::new(negated, digits))
        }
    }
}

fn widen(iv: RInterval) -> RInterval {
    let mut lo = iv.lo;
    let mut hi = iv.hi;
    lo.next_down();
    hi.next_up();
    RInterval { lo, hi }
}

// ---------------------------------------------------------------------
// Periodic continued fractions
// ---------------------------------------------------------------------

/// Exact surd fixed by the period: the attracting solution of
/// x = (a x + b)/(c x + d) for the period matrix, pushed through the
/// preperiod.
pub fn periodic_cf_to_surd(
    preperiod: &[Integer],
    period: &[Integer],
) -> Result<QuadSurd, ContFracError> {
    if period.is_empty() {
        return Err(ContFracError::DegeneratePeriod);
    }
    if period.iter().any(|n| *n < 1) {
        return Err(ContFracError::Parse("period digits must be >= 1".into()));
    }
    // period matrix prod [[n, 1], [1, 0]]
    let (mut a, mut b, mut c, mut d) = (
        Integer::from(1),
        Integer::new(),
        Integer::new(),
        Integer::from(1),
    );
    for n in period {
        let (na, nb) = ((&a * n).complete() + &b, a);
        let (nc, nd) = ((&c * n).complete() + &d, c);
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    if c.cmp0() == std::cmp::Ordering::Equal {
        return Err(ContFracError::DegeneratePeriod);
    }
    // attracting fixed point: c x^2 + (d - a) x - b = 0, + branch
    let qa = c.clone();
    let qb = (&d - &a).complete();
    let qc = (-&b).complete();
    let y = QuadSurd::from_quadratic(&qa, &qb, &qc, true)
        .map_err(|_| ContFracError::DegeneratePeriod)?;
    // preperiod Moebius
    let mut x = y;
    for n in preperiod.iter().rev() {
        // x -> n + 1/x
        x = x.recip().add_rational(n, &Integer::from(1));
    }
    Ok(x)
}

/// Period matrix of an even-length L&R word, as Moebius coefficients.
pub fn lr_word_fixed_points(word: &GroupWord) -> Result<(QuadSurd, QuadSurd), ContFracError> {
    use crate::modgroup::word_to_matrix;
    let m = word_to_matrix(word);
    if m.c.cmp0() == std::cmp::Ordering::Equal {
        return Err(ContFracError::DegeneratePeriod);
    }
    let qa = m.c.clone();
    let qb = (&m.d - &m.a).complete();
    let qc = (-&m.b).complete();
    let plus = QuadSurd::from_quadratic(&qa, &qb, &qc, true)
        .map_err(|_| ContFracError::DegeneratePeriod)?;
    let minus = plus.galois_conjugate();
    Ok((minus, plus))
}

// ---------------------------------------------------------------------
// Geodesic coding
// ---------------------------------------------------------------------

/// Bi-infinite L&R code around a marked origin: `past[0]` is the letter
/// immediately left of the origin, `future[0]` immediately right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrBiWindow {
    pub past: Vec<Letter>,
    pub future: Vec<Letter>,
}

impl LrBiWindow {
    /// Letters in reading order, past then future.
    pub fn reading_order(&self) -> Vec<Letter> {
        let mut v: Vec<Letter> = self.past.iter().rev().copied().collect();
        v.extend_from_slice(&self.future);
        v
    }
}

fn cf_digit_stream(x: &ExactReal, max_digits: usize) -> Result<Vec<Integer>, ContFracError> {
    let cf = real_to_cf(x, max_digits)?;
    if cf.negated {
        return Err(ContFracError::NotNormalized);
    }
    Ok(cf.digits)
}

fn digits_to_letters(digits: &[Integer], first: Letter, window: usize) -> Vec<Letter> {
    let other = |l: Letter| if l == Letter::R { Letter::L } else { Letter::R };
    let mut out = Vec::with_capacity(window);
    let mut letter = first;
    for d in digits {
        let run = d.to_usize().unwrap_or(usize::MAX).min(window - out.len());
        for _ in 0..run {
            out.push(letter);
        }
        if out.len() >= window {
            break;
        }
        letter = other(letter);
    }
    out
}

/// Geodesic code of (alpha_minus, alpha_plus) with -1 < alpha_minus < 0
/// and alpha_plus > 1: the transpose of the code of -1/alpha_minus
/// concatenated with the code of alpha_plus.
pub fn geodesic_code(
    alpha_minus: &ExactReal,
    alpha_plus: &ExactReal,
    window: usize,
) -> Result<LrBiWindow, ContFracError> {
    let one = Integer::from(1);
    let zero = Integer::new();
    let ok_minus = alpha_minus.cmp_rational(&zero, &one) == Some(std::cmp::Ordering::Less)
        && alpha_minus.cmp_rational(&(-&one).complete(), &one) == Some(std::cmp::Ordering::Greater);
    let ok_plus = alpha_plus.cmp_rational(&one, &one) == Some(std::cmp::Ordering::Greater);
    if !ok_minus || !ok_plus {
        return Err(ContFracError::NotNormalized);
    }
    // -1/alpha_minus > 1
    let beta = match alpha_minus {
        ExactReal::Rational(q) => {
            let flipped = Rational::from((-q.denom().clone(), q.numer().clone()));
            ExactReal::Rational(flipped)
        }
        ExactReal::Surd(s) => ExactReal::Surd(s.recip().neg()),
        ExactReal::Interval(iv) => {
            let lo = (-iv.hi.clone()).recip();
            let hi = (-iv.lo.clone()).recip();
            ExactReal::Interval(widen(RInterval { lo, hi }))
        }
    };
    // enough digits to cover the window (each digit >= 1 contributes
    // at least one letter)
    let fut_digits = cf_digit_stream(alpha_plus, window)?;
    let past_digits = cf_digit_stream(&beta, window)?;
    let future = digits_to_letters(&fut_digits, Letter::R, window);
    // transpose: the past stream, read leftward, swaps R and L
    let past = digits_to_letters(&past_digits, Letter::L, window);
    Ok(LrBiWindow { past, future })
}

// ---------------------------------------------------------------------
// Text syntax: "[n0;n1,n2,...]", "-1/[n0;...]", optional "(...)" period
// ---------------------------------------------------------------------

/// Parse a CF literal. The tail may include a parenthesized period:
/// "[1;2,(2,1)]" denotes digits 1,2 then period 2,1.
pub fn parse_cf_literal(s: &str) -> Result<(bool, Vec<Integer>, Option<Vec<Integer>>), ContFracError> {
    let s = s.trim();
    let (negated, body) = if let Some(rest) = s.strip_prefix("-1/") {
        (true, rest.trim())
    } else {
        (false, s)
    };
    let inner = body
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ContFracError::Parse(format!("expected [..] in {s:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok((negated, Vec::new(), None));
    }
    let (head, tail) = match inner.split_once(';') {
        Some((h, t)) => (h.trim(), Some(t.trim())),
        None => (inner, None),
    };
    let mut digits = Vec::new();
    let mut period = None;
    let parse_int = |tok: &str| -> Result<Integer, ContFracError> {
        tok.trim()
            .parse::<Integer>()
            .map_err(|_| ContFracError::Parse(format!("bad digit {tok:?}")))
    };
    digits.push(parse_int(head)?);
    if let Some(tail) = tail {
        let mut rest = tail;
        if let Some(start) = rest.find('(') {
            let end = rest
                .rfind(')')
                .ok_or_else(|| ContFracError::Parse("unclosed period".into()))?;
            let per: Result<Vec<Integer>, _> = rest[start + 1..end]
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(parse_int)
                .collect();
            period = Some(per?);
            rest = &rest[..start];
        }
        for tok in rest.split(',') {
            let tok = tok.trim().trim_end_matches(',');
            if tok.is_empty() {
                continue;
            }
            digits.push(parse_int(tok)?);
        }
    }
    Ok((negated, digits, period))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::word_to_matrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn int(x: i64) -> Integer {
        Integer::from(x)
    }

    #[test]
    fn rational_cf_examples() {
        let cf = rational_to_cf(&int(0), &int(1), Parity::Any);
        assert_eq!(cf.digits, vec![int(0)]);
        let even = rational_to_cf(&int(0), &int(1), Parity::Even);
        assert!(even.digits.is_empty());
        let one = rational_to_cf(&int(1), &int(1), Parity::Even);
        assert_eq!(one.digits, vec![int(0), int(1)]);
        let cf = rational_to_cf(&int(7), &int(5), Parity::Any);
        assert_eq!(cf.digits, vec![int(1), int(2), int(2)]);
        assert!(!cf.negated);
        // -2 -> negated [0;2]
        let cf = rational_to_cf(&int(-2), &int(1), Parity::Any);
        assert!(cf.negated);
        assert_eq!(cf.digits, vec![int(0), int(2)]);
        // infinity = -1/[0] (equivalently -1/[]; even parity gives [])
        let cf = rational_to_cf(&int(1), &int(0), Parity::Any);
        assert!(cf.negated);
        assert_eq!(cf.digits, vec![int(0)]);
        let cf = rational_to_cf(&int(1), &int(0), Parity::Even);
        assert!(cf.negated && cf.digits.is_empty());
    }

    #[test]
    fn rational_cf_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let n = rng.gen_range(-10_000i64..10_000);
            let d = rng.gen_range(1i64..10_000);
            let g = rug::Integer::from(n).gcd(&int(d));
            let (n, d) = (int(n) / &g, int(d) / &g);
            if n.cmp0() == std::cmp::Ordering::Equal && d.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for parity in [Parity::Even, Parity::Odd, Parity::Any] {
                let cf = rational_to_cf(&n, &d, parity);
                let (vn, vd) = cf.value();
                assert_eq!((vn, vd), (n.clone(), d.clone()), "cf {cf} of {n}/{d}");
                match parity {
                    Parity::Even => assert_eq!(cf.digits.len() % 2, 0),
                    Parity::Odd => assert_eq!(cf.digits.len() % 2, 1),
                    Parity::Any => {}
                }
            }
            // the two parities differ exactly by the final-digit split
            let e = rational_to_cf(&n, &d, Parity::Even);
            let o = rational_to_cf(&n, &d, Parity::Odd);
            assert_eq!(e.toggled_parity(), o);
        }
    }

    #[test]
    fn lr_word_examples() {
        let empty = cf_to_lr_word(&CfSeq::from_u32s(false, &[])).unwrap();
        assert!(empty.is_empty());
        let l = cf_to_lr_word(&CfSeq::from_u32s(false, &[0, 1])).unwrap();
        assert_eq!(l.syllables(), &[(Letter::L, 1)]);
        let rl = cf_to_lr_word(&CfSeq::from_u32s(false, &[1, 1])).unwrap();
        assert_eq!(rl.syllables(), &[(Letter::R, 1), (Letter::L, 1)]);
        assert_eq!(
            cf_to_lr_word(&CfSeq::from_u32s(false, &[1, 2, 2])),
            Err(ContFracError::OddLength)
        );
    }

    #[test]
    fn lr_word_first_column_is_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1i64..5_000);
            let d = rng.gen_range(1i64..5_000);
            let g = int(n).gcd(&int(d));
            let (n, d) = (int(n) / &g, int(d) / &g);
            let cf = rational_to_cf(&n, &d, Parity::Even);
            let w = cf_to_lr_word(&cf).unwrap();
            let m = word_to_matrix(&w);
            assert_eq!((m.a.clone(), m.c.clone()), (n, d));
        }
    }

    #[test]
    fn surd_basics() {
        let phi = QuadSurd::golden_ratio();
        assert_eq!(phi.floor(), int(1));
        let (a, b, c) = phi.minimal_poly();
        assert_eq!((a, b, c), (int(1), int(-1), int(-1)));
        assert_eq!(surd_height(&phi), int(1));
        let s2 = QuadSurd::sqrt_of(2);
        assert_eq!(surd_height(&s2), int(2));
        assert_eq!(s2.galois_conjugate(), s2.neg());
        let x = QuadSurd::from_i64(1, 1, 1, 2); // 1 + sqrt 2
        assert_eq!(surd_height(&x), int(2));
        assert_eq!(x.floor(), int(2));
        // sqrt(8) normalizes to 2 sqrt(2)
        let s8 = QuadSurd::sqrt_of(8);
        assert_eq!(s8, QuadSurd::from_i64(0, 2, 1, 2));
        // conjugate pairs
        assert_eq!(
            phi.galois_conjugate(),
            QuadSurd::from_i64(1, -1, 2, 5)
        );
    }

    #[test]
    fn surd_cf_digits() {
        let phi = QuadSurd::golden_ratio();
        let digits: Vec<Integer> = SurdCfIter::new(&phi).take(12).collect();
        assert!(digits.iter().all(|d| *d == 1));
        let s2 = QuadSurd::sqrt_of(2);
        let digits: Vec<Integer> = SurdCfIter::new(&s2).take(6).collect();
        assert_eq!(digits, vec![int(1), int(2), int(2), int(2), int(2), int(2)]);
        let (neg, pre, per) = surd_to_periodic_cf(&s2);
        assert!(!neg);
        assert_eq!(pre, vec![int(1)]);
        assert_eq!(per, vec![int(2)]);
        // negative surd: -sqrt(2) = -1/(sqrt(2)/2), digits of sqrt(2)/2 = [0;1,2,2,...]
        let (neg, pre, _per) = surd_to_periodic_cf(&s2.neg());
        assert!(neg);
        assert_eq!(pre[0], int(0));
    }

    #[test]
    fn periodic_cf_examples() {
        // period [1,1] -> golden ratio
        let y = periodic_cf_to_surd(&[], &[int(1), int(1)]).unwrap();
        assert_eq!(y, QuadSurd::golden_ratio());
        // RLLR = [[3,4],[2,3]] -> sqrt(2)
        let w = GroupWord::new(
            Alphabet::LR,
            vec![(Letter::R, 1), (Letter::L, 2), (Letter::R, 1)],
        )
        .unwrap();
        let (minus, plus) = lr_word_fixed_points(&w).unwrap();
        assert_eq!(plus, QuadSurd::sqrt_of(2));
        assert_eq!(minus, QuadSurd::sqrt_of(2).neg());
        // period [2,2] -> 1 + sqrt 2
        let y = periodic_cf_to_surd(&[], &[int(2), int(2)]).unwrap();
        assert_eq!(y, QuadSurd::from_i64(1, 1, 1, 2));
        assert_eq!(
            periodic_cf_to_surd(&[], &[]),
            Err(ContFracError::DegeneratePeriod)
        );
    }

    #[test]
    fn periodic_cf_fixed_point_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let plen = rng.gen_range(1..5);
            let period: Vec<Integer> =
                (0..plen).map(|_| int(rng.gen_range(1i64..6))).collect();
            let pre: Vec<Integer> = (0..rng.gen_range(0..3))
                .map(|i| int(rng.gen_range(if i == 0 { 0 } else { 1 }..5i64)))
                .collect();
            let x = match periodic_cf_to_surd(&pre, &period) {
                Ok(x) => x,
                Err(ContFracError::DegeneratePeriod) => continue,
                Err(e) => panic!("{e}"),
            };
            // a x^2 + b x + c = [a(p^2 + q^2 d) + b p r + c r^2
            //                    + (2 a p q + b q r) sqrt(d)] / r^2 = 0
            let (a, b, c) = x.minimal_poly();
            let pp = (&x.p * &x.p).complete();
            let qq = (&x.q * &x.q).complete();
            let rat = a.clone() * (pp + qq * &x.d)
                + b.clone() * (&x.p * &x.r).complete()
                + c * (&x.r * &x.r).complete();
            let irr = Integer::from(2) * a * (&x.p * &x.q).complete()
                + b * (&x.q * &x.r).complete();
            assert_eq!(rat.cmp0(), std::cmp::Ordering::Equal);
            assert_eq!(irr.cmp0(), std::cmp::Ordering::Equal);
            // digits reproduce the periodic expansion
            let cf = real_to_cf(&ExactReal::Surd(x.clone()), 40).unwrap();
            let mut expect: Vec<Integer> = pre.clone();
            while expect.len() < 40 {
                expect.extend_from_slice(&period);
            }
            expect.truncate(40);
            assert!(!cf.negated);
            assert_eq!(cf.digits, expect, "periodic digits of {x}");
        }
    }

    #[test]
    fn real_to_cf_certified_interval() {
        // sqrt(2) as an interval at modest precision
        let s2 = QuadSurd::sqrt_of(2);
        let iv = s2.value_interval(128);
        let cf = real_to_cf(&ExactReal::Interval(iv), 20).unwrap();
        assert_eq!(cf.digits[0], int(1));
        assert!(cf.digits[1..].iter().all(|d| *d == 2));
        // too little precision for 60 digits
        let iv = s2.value_interval(64);
        assert_eq!(
            real_to_cf(&ExactReal::Interval(iv), 60),
            Err(ContFracError::PrecisionExhausted)
        );
        // -2 as exact rational
        let cf = real_to_cf(
            &ExactReal::Rational(Rational::from((-2, 1))),
            10,
        )
        .unwrap();
        assert!(cf.negated);
        assert_eq!(cf.digits, vec![int(0), int(2)]);
    }

    #[test]
    fn geodesic_code_golden() {
        // (alpha-, alpha+) = ((1 - sqrt 5)/2, (1 + sqrt 5)/2) -> ...RLRL|RLRL...
        let plus = QuadSurd::golden_ratio();
        let minus = plus.galois_conjugate();
        let code = geodesic_code(&ExactReal::Surd(minus), &ExactReal::Surd(plus), 8).unwrap();
        assert_eq!(
            code.future,
            vec![
                Letter::R,
                Letter::L,
                Letter::R,
                Letter::L,
                Letter::R,
                Letter::L,
                Letter::R,
                Letter::L
            ]
        );
        // past, read leftward: L R L R ... so reading order ends ... R L
        assert_eq!(code.past[0], Letter::L);
        assert_eq!(code.past[1], Letter::R);
        let reading = code.reading_order();
        // bi-infinite word is (RL)^infty
        for pair in reading.chunks(2) {
            if pair.len() == 2 {
                assert_ne!(pair[0], pair[1]);
            }
        }
    }

    #[test]
    fn geodesic_code_sqrt2_normalized() {
        // normalized lift of (-sqrt2, sqrt2): (1 - sqrt2, 1 + sqrt2)
        let plus = QuadSurd::from_i64(1, 1, 1, 2);
        let minus = plus.galois_conjugate();
        let code = geodesic_code(&ExactReal::Surd(minus), &ExactReal::Surd(plus), 8).unwrap();
        // future: R^2 L^2 R^2 ...
        assert_eq!(
            code.future,
            vec![
                Letter::R,
                Letter::R,
                Letter::L,
                Letter::L,
                Letter::R,
                Letter::R,
                Letter::L,
                Letter::L
            ]
        );
        // past leftward: L^2 R^2 ... -> bi-infinite (R^2 L^2)^infty
        assert_eq!(code.past[0], Letter::L);
        assert_eq!(code.past[1], Letter::L);
        assert_eq!(code.past[2], Letter::R);
        // un-normalized pair is rejected
        let raw_minus = QuadSurd::sqrt_of(2).neg();
        let raw_plus = QuadSurd::sqrt_of(2);
        assert_eq!(
            geodesic_code(&ExactReal::Surd(raw_minus), &ExactReal::Surd(raw_plus), 4),
            Err(ContFracError::NotNormalized)
        );
    }

    #[test]
    fn fibonacci_continuity_bound() {
        // two reals sharing the prefix R^{n0}..L^{n_{2k+1}} differ by
        // at most 2/(F_{2k} F_{2k+1})
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let fib = |k: usize| -> Integer {
            let (mut a, mut b) = (Integer::new(), Integer::from(1));
            for _ in 0..k {
                let t = (&a + &b).complete();
                a = std::mem::replace(&mut b, t);
            }
            a
        };
        for _ in 0..200 {
            let k = rng.gen_range(1usize..6);
            let len = 2 * k + 2;
            let mut prefix: Vec<Integer> = Vec::new();
            prefix.push(int(rng.gen_range(0i64..4)));
            for _ in 1..len {
                prefix.push(int(rng.gen_range(1i64..9)));
            }
            let mut make_val = |prefix: &[Integer]| -> Rational {
                let mut digits = prefix.to_vec();
                for _ in 0..rng.gen_range(1usize..4) {
                    digits.push(int(rng.gen_range(1i64..9)));
                }
                let cf = CfSeq::new(false, digits);
                let (n, d) = cf.value();
                Rational::from((n, d))
            };
            let x = make_val(&prefix);
            let y = make_val(&prefix);
            let diff = (x - y).abs();
            let bound = Rational::from((
                Integer::from(2),
                fib(2 * k) * fib(2 * k + 1),
            ));
            assert!(diff <= bound, "k={k} diff={diff} bound={bound}");
        }
    }

    #[test]
    fn parse_cf_literals() {
        let (neg, d, p) = parse_cf_literal("[1;2,3]").unwrap();
        assert!(!neg);
        assert_eq!(d, vec![int(1), int(2), int(3)]);
        assert!(p.is_none());
        let (neg, d, p) = parse_cf_literal("-1/[0;2]").unwrap();
        assert!(neg);
        assert_eq!(d, vec![int(0), int(2)]);
        assert!(p.is_none());
        let (neg, d, p) = parse_cf_literal("[1;(2)]").unwrap();
        assert!(!neg);
        assert_eq!(d, vec![int(1)]);
        assert_eq!(p.unwrap(), vec![int(2)]);
        let (_, d, p) = parse_cf_literal("[]").unwrap();
        assert!(d.is_empty() && p.is_none());
        assert!(parse_cf_literal("nope").is_err());
    }

    #[test]
    fn mobius_and_field_ops() {
        let s2 = QuadSurd::sqrt_of(2);
        // (1*x + 1)/(0*x + 1) = x + 1
        let shifted = s2.mobius(&int(1), &int(1), &int(0), &int(1));
        assert_eq!(shifted, QuadSurd::from_i64(1, 1, 1, 2));
        // S: -1/x
        let flipped = s2.mobius(&int(0), &int(-1), &int(1), &int(0));
        // -1/sqrt(2) = -sqrt(2)/2
        assert_eq!(flipped, QuadSurd::from_i64(0, -1, 2, 2));
        assert_eq!(flipped.neg().recip(), s2);
        // recip of golden: 1/phi = phi - 1
        let phi = QuadSurd::golden_ratio();
        assert_eq!(phi.recip(), phi.add_rational(&int(-1), &int(1)));
    }
}
