//! Exact algebra in the modular group: projective integer matrices,
//! words over the {S,T}, {L,R}, {X,Y} alphabets, Rademacher numbers,
//! membership and decomposition in the derived subgroups, and the affine
//! hexagonal representation of the quotient by the second derived group.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use rug::{Complete, Integer};
use thiserror::Error;

use crate::num::CVal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModGroupError {
    #[error("matrix has no nonnegative representative")]
    NotInMonoid,
    #[error("determinant is not 1")]
    BadDeterminant,
    #[error("Rademacher number is defined for infinite order only")]
    TorsionElement,
    #[error("element is not in the derived subgroup")]
    NotInDerivedGroup,
    #[error("arguments are not coprime")]
    NotCoprime,
    #[error("letter {0:?} is not in alphabet {1:?}")]
    AlphabetMismatch(Letter, Alphabet),
    #[error("exponents in a monoid word must be positive")]
    NonPositiveExponent,
}

// ---------------------------------------------------------------------
// Projective matrices
// ---------------------------------------------------------------------

/// Element of PSL2(Z): an integer matrix of determinant 1, stored with
/// the canonical sign (c > 0, or c = 0 and d > 0) so that M and -M
/// compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl ProjMatrix {
    pub fn new(a: Integer, b: Integer, c: Integer, d: Integer) -> Result<Self, ModGroupError> {
        let det = (&a * &d).complete() - (&b * &c).complete();
        if det != 1 {
            return Err(ModGroupError::BadDeterminant);
        }
        let mut m = ProjMatrix { a, b, c, d };
        m.canonicalize();
        Ok(m)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        ProjMatrix::new(
            Integer::from(a),
            Integer::from(b),
            Integer::from(c),
            Integer::from(d),
        )
        .expect("determinant 1")
    }

    fn canonicalize(&mut self) {
        let neg = if self.c.cmp0() == std::cmp::Ordering::Equal {
            self.d.cmp0() == std::cmp::Ordering::Less
        } else {
            self.c.cmp0() == std::cmp::Ordering::Less
        };
        if neg {
            self.a = (-&self.a).complete();
            self.b = (-&self.b).complete();
            self.c = (-&self.c).complete();
            self.d = (-&self.d).complete();
        }
    }

    pub fn identity() -> Self {
        ProjMatrix::from_i64(1, 0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 0 && self.d == 1
    }

    pub fn mul(&self, other: &ProjMatrix) -> Self {
        let a = (&self.a * &other.a).complete() + (&self.b * &other.c).complete();
        let b = (&self.a * &other.b).complete() + (&self.b * &other.d).complete();
        let c = (&self.c * &other.a).complete() + (&self.d * &other.c).complete();
        let d = (&self.c * &other.b).complete() + (&self.d * &other.d).complete();
        let mut m = ProjMatrix { a, b, c, d };
        m.canonicalize();
        m
    }

    pub fn inverse(&self) -> Self {
        let mut m = ProjMatrix {
            a: self.d.clone(),
            b: (-&self.b).complete(),
            c: (-&self.c).complete(),
            d: self.a.clone(),
        };
        m.canonicalize();
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = ProjMatrix {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        };
        m.canonicalize();
        m
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut result = ProjMatrix::identity();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// |a + d|, the projective trace.
    pub fn trace_abs(&self) -> Integer {
        ((&self.a + &self.d).complete()).abs()
    }

    /// Nontrivial finite-order element (conjugate of S or T^{+-1}).
    pub fn is_nontrivial_torsion(&self) -> bool {
        !self.is_identity() && self.trace_abs() < 2
    }

    pub fn first_column(&self) -> (Integer, Integer) {
        (self.a.clone(), self.c.clone())
    }

    /// Action on a boundary fraction p/q (projective, q may be 0).
    pub fn act_on_fraction(&self, p: &Integer, q: &Integer) -> (Integer, Integer) {
        let np = (&self.a * p).complete() + (&self.b * q).complete();
        let nq = (&self.c * p).complete() + (&self.d * q).complete();
        (np, nq)
    }

    /// Moebius action on a complex value in the upper half-plane.
    pub fn act_on_cval(&self, z: &CVal) -> CVal {
        let prec = z.prec();
        let fa = rug::Float::with_val(prec, &self.a);
        let fb = rug::Float::with_val(prec, &self.b);
        let fc = rug::Float::with_val(prec, &self.c);
        let fd = rug::Float::with_val(prec, &self.d);
        let num = z.scale(&fa).add(&CVal::real(fb));
        let den = z.scale(&fc).add(&CVal::real(fd));
        num.div(&den)
    }
}

pub fn mat_s() -> ProjMatrix {
    ProjMatrix::from_i64(0, -1, 1, 0)
}
pub fn mat_t() -> ProjMatrix {
    ProjMatrix::from_i64(1, -1, 1, 0)
}
pub fn mat_l() -> ProjMatrix {
    ProjMatrix::from_i64(1, 0, 1, 1)
}
pub fn mat_r() -> ProjMatrix {
    ProjMatrix::from_i64(1, 1, 0, 1)
}
pub fn mat_x() -> ProjMatrix {
    ProjMatrix::from_i64(1, 1, 1, 2)
}
pub fn mat_y() -> ProjMatrix {
    ProjMatrix::from_i64(2, 1, 1, 1)
}

// ---------------------------------------------------------------------
// Group words
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    T,
    L,
    R,
    X,
    Y,
}

impl Letter {
    pub fn matrix(self) -> ProjMatrix {
        match self {
            Letter::S => mat_s(),
            Letter::T => mat_t(),
            Letter::L => mat_l(),
            Letter::R => mat_r(),
            Letter::X => mat_x(),
            Letter::Y => mat_y(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::S => 'S',
            Letter::T => 'T',
            Letter::L => 'L',
            Letter::R => 'R',
            Letter::X => 'X',
            Letter::Y => 'Y',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    ST,
    LR,
    XY,
}

impl Alphabet {
    pub fn contains(self, l: Letter) -> bool {
        matches!(
            (self, l),
            (Alphabet::ST, Letter::S)
                | (Alphabet::ST, Letter::T)
                | (Alphabet::LR, Letter::L)
                | (Alphabet::LR, Letter::R)
                | (Alphabet::XY, Letter::X)
                | (Alphabet::XY, Letter::Y)
        )
    }
}

/// Freely reduced word over one of the three alphabets, as a run-length
/// sequence of (letter, exponent) syllables.
///
/// Reduction rules per alphabet: ST syllables carry S-exponent 1 and
/// T-exponents in {1, -1} (orders 2 and 3); LR is a positive monoid
/// word; XY is reduced in the free group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    pub alphabet: Alphabet,
    syllables: Vec<(Letter, i64)>,
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|&(l, e)| {
                if e == 1 {
                    l.symbol().to_string()
                } else {
                    format!("{}^{}", l.symbol(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl GroupWord {
    pub fn new(
        alphabet: Alphabet,
        syllables: Vec<(Letter, i64)>,
    ) -> Result<Self, ModGroupError> {
        for &(l, _) in &syllables {
            if !alphabet.contains(l) {
                return Err(ModGroupError::AlphabetMismatch(l, alphabet));
            }
        }
        if alphabet == Alphabet::LR && syllables.iter().any(|&(_, e)| e <= 0) {
            return Err(ModGroupError::NonPositiveExponent);
        }
        let mut w = GroupWord {
            alphabet,
            syllables,
        };
        w.reduce();
        Ok(w)
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        GroupWord {
            alphabet,
            syllables: Vec::new(),
        }
    }

    pub fn syllables(&self) -> &[(Letter, i64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter count (sum of |exponent|).
    pub fn len_letters(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    fn normalize_exp(alphabet: Alphabet, l: Letter, e: i64) -> i64 {
        match (alphabet, l) {
            (Alphabet::ST, Letter::S) => e.rem_euclid(2),
            (Alphabet::ST, Letter::T) => {
                let r = e.rem_euclid(3);
                if r == 2 {
                    -1
                } else {
                    r
                }
            }
            _ => e,
        }
    }

    fn reduce(&mut self) {
        let mut out: Vec<(Letter, i64)> = Vec::with_capacity(self.syllables.len());
        for &(l, e) in &self.syllables {
            let mut cur = (l, Self::normalize_exp(self.alphabet, l, e));
            if cur.1 == 0 {
                continue;
            }
            loop {
                match out.last() {
                    Some(&(pl, pe)) if pl == cur.0 => {
                        out.pop();
                        let merged = Self::normalize_exp(self.alphabet, cur.0, pe + cur.1);
                        if merged == 0 {
                            break;
                        }
                        cur.1 = merged;
                        // the stack stays alternating, so at most one more
                        // pass pushes cur
                    }
                    _ => {
                        out.push(cur);
                        break;
                    }
                }
            }
        }
        self.syllables = out;
    }

    pub fn concat(&self, other: &GroupWord) -> Result<Self, ModGroupError> {
        assert_eq!(self.alphabet, other.alphabet);
        let mut syl = self.syllables.clone();
        syl.extend_from_slice(&other.syllables);
        GroupWord::new(self.alphabet, syl)
    }

    pub fn inverse_word(&self) -> Self {
        let syl: Vec<(Letter, i64)> = self
            .syllables
            .iter()
            .rev()
            .map(|&(l, e)| (l, -e))
            .collect();
        GroupWord::new(self.alphabet, syl).expect("inverse of valid word")
    }
}

/// Product of the letter matrices of a word.
pub fn word_to_matrix(w: &GroupWord) -> ProjMatrix {
    let mut m = ProjMatrix::identity();
    for &(l, e) in w.syllables() {
        m = m.mul(&l.matrix().pow(e));
    }
    m
}

// ---------------------------------------------------------------------
// L&R monoid factorization
// ---------------------------------------------------------------------

/// Factor a matrix of the euclidean monoid into its unique L&R word.
pub fn lr_factorize(m: &ProjMatrix) -> Result<GroupWord, ModGroupError> {
    if m.a.cmp0() == std::cmp::Ordering::Less
        || m.b.cmp0() == std::cmp::Ordering::Less
        || m.c.cmp0() == std::cmp::Ordering::Less
        || m.d.cmp0() == std::cmp::Ordering::Less
    {
        return Err(ModGroupError::NotInMonoid);
    }
    let mut a = m.a.clone();
    let mut b = m.b.clone();
    let mut c = m.c.clone();
    let mut d = m.d.clone();
    let mut syl: Vec<(Letter, i64)> = Vec::new();
    loop {
        if a == 1 && d == 1 && b == 0 && c == 0 {
            break;
        }
        let top = a >= c && b >= d;
        let bottom = c >= a && d >= b;
        if top && !bottom {
            // peel R from the left: row1 -= row2, count run length
            // q = min(a/c, b/d) componentwise safe: do single steps via
            // how many times row2 fits under row1.
            let q = run_quotient(&a, &c, &b, &d);
            a -= (&c * &q).complete();
            b -= (&d * &q).complete();
            push_run(&mut syl, Letter::R, &q)?;
        } else if bottom && !top {
            let q = run_quotient(&c, &a, &d, &b);
            c -= (&a * &q).complete();
            d -= (&b * &q).complete();
            push_run(&mut syl, Letter::L, &q)?;
        } else {
            return Err(ModGroupError::NotInMonoid);
        }
    }
    GroupWord::new(Alphabet::LR, syl)
}

/// Largest q with q*(c,d) <= (a,b) componentwise and the result still a
/// valid monoid matrix, i.e. q = min(floor ratios) capped at >= 1.
fn run_quotient(a: &Integer, c: &Integer, b: &Integer, d: &Integer) -> Integer {
    let q1 = if c.cmp0() == std::cmp::Ordering::Equal {
        None
    } else {
        Some((a / c).complete())
    };
    let q2 = if d.cmp0() == std::cmp::Ordering::Equal {
        None
    } else {
        Some((b / d).complete())
    };
    let q = match (q1, q2) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (None, None) => Integer::from(1),
    };
    if q < 1 {
        Integer::from(1)
    } else {
        q
    }
}

fn push_run(syl: &mut Vec<(Letter, i64)>, l: Letter, q: &Integer) -> Result<(), ModGroupError> {
    let q = q.to_i64().ok_or(ModGroupError::NotInMonoid)?;
    syl.push((l, q));
    Ok(())
}

// ---------------------------------------------------------------------
// S&T factorization and the euclidean syllable decomposition
// ---------------------------------------------------------------------

/// Decompose A = (R^{q_1} S)(R^{q_2} S) ... (R^{q_k} S) R^{q_tail} by a
/// euclidean reduction of the first column. The q_i are exact integers;
/// nothing is materialized letterwise, so this scales to huge entries.
pub fn euclid_syllables(m: &ProjMatrix) -> (Vec<Integer>, Integer) {
    let mut a = m.a.clone();
    let mut b = m.b.clone();
    let mut c = m.c.clone();
    let mut d = m.d.clone();
    let mut qs = Vec::new();
    while c.cmp0() != std::cmp::Ordering::Equal {
        // q = round(a/c); the rounded remainder satisfies |r| <= |c|/2
        let (q, _r) = a.clone().div_rem_round(c.clone());
        a -= (&c * &q).complete();
        b -= (&d * &q).complete();
        // multiply by S on the left: (row1, row2) <- (-row2, row1)
        std::mem::swap(&mut a, &mut c);
        std::mem::swap(&mut b, &mut d);
        a = -a;
        b = -b;
        qs.push(q);
    }
    // now the matrix is +-[[1, t],[0, 1]]
    let tail = if a == 1 { b.clone() } else { (-&b).complete() };
    (qs, tail)
}

/// Reduced S,T word with product A (product checked by tests, not here).
pub fn st_factorize(m: &ProjMatrix) -> GroupWord {
    let (qs, tail) = euclid_syllables(m);
    let mut syl: Vec<(Letter, i64)> = Vec::new();
    let push_r_power = |syl: &mut Vec<(Letter, i64)>, q: &Integer| {
        let q = q.to_i64().expect("st_factorize exponent fits i64");
        if q >= 0 {
            for _ in 0..q {
                syl.push((Letter::T, 1));
                syl.push((Letter::S, 1));
            }
        } else {
            for _ in 0..(-q) {
                syl.push((Letter::S, 1));
                syl.push((Letter::T, -1));
            }
        }
    };
    for q in &qs {
        push_r_power(&mut syl, q);
        syl.push((Letter::S, 1));
    }
    push_r_power(&mut syl, &tail);
    GroupWord::new(Alphabet::ST, syl).expect("valid ST word")
}

// ---------------------------------------------------------------------
// Rademacher number and the abelianized class
// ---------------------------------------------------------------------

/// #R - #L over the cyclic L&R word of the conjugacy class of A.
pub fn rademacher(m: &ProjMatrix) -> Result<Integer, ModGroupError> {
    let w = st_factorize(m);
    let mut syl: Vec<(Letter, i64)> = w.syllables().to_vec();
    // cyclic reduction in the amalgam Z/2 * Z/3
    loop {
        if syl.len() < 2 {
            break;
        }
        let first = syl[0];
        let last = *syl.last().unwrap();
        if first.0 != last.0 {
            break;
        }
        syl.pop();
        syl[0].1 = GroupWord::normalize_exp(Alphabet::ST, first.0, first.1 + last.1);
        if syl[0].1 == 0 {
            syl.remove(0);
            // after removing, adjacent ends may merge again; loop handles it
            // but inner adjacencies may also appear; re-reduce linearly:
            syl = GroupWord::new(Alphabet::ST, syl)
                .expect("valid")
                .syllables()
                .to_vec();
        }
    }
    if syl.len() <= 1 {
        return Err(ModGroupError::TorsionElement);
    }
    // strictly alternating; rotate to start with T
    if syl[0].0 == Letter::S {
        let head = syl.remove(0);
        syl.push(head);
    }
    let mut rad = Integer::new();
    for chunk in syl.chunks(2) {
        debug_assert_eq!(chunk[0].0, Letter::T);
        debug_assert!(chunk.len() == 2 && chunk[1].0 == Letter::S);
        rad += chunk[0].1;
    }
    Ok(rad)
}

/// Image of A in Gamma/Gamma' = Z/6, normalized so class(R) = 1
/// (matching Rad(R) = 1): class = 3*(#S mod 2) + 4*(sum of T exponents
/// mod 3) mod 6, computed from the S,T factorization.
pub fn gamma_abelian_class(m: &ProjMatrix) -> u8 {
    let w = st_factorize(m);
    let mut s_count: i64 = 0;
    let mut t_sum: i64 = 0;
    for &(l, e) in w.syllables() {
        match l {
            Letter::S => s_count += e,
            Letter::T => t_sum += e,
            _ => unreachable!(),
        }
    }
    let s = s_count.rem_euclid(2);
    let t = t_sum.rem_euclid(3);
    ((3 * s + 4 * t).rem_euclid(6)) as u8
}

// ---------------------------------------------------------------------
// Hexagonal representation of Gamma/Gamma''
// ---------------------------------------------------------------------

/// Element of Z^2 x| Z/6: a lattice translation (m, n) in the basis
/// (X, Y) together with a rotation rho, where Rot(1) sends X -> Y and
/// Y -> Y - X.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HexElement {
    pub m: i64,
    pub n: i64,
    pub rho: u8,
}

/// Rot(k) as a 2x2 integer matrix acting on column vectors (m, n).
const ROT: [[i64; 4]; 6] = [
    [1, 0, 0, 1],
    [0, -1, 1, 1],
    [-1, -1, 1, 0],
    [-1, 0, 0, -1],
    [0, 1, -1, -1],
    [1, 1, -1, 0],
];

pub fn rot_apply(k: u8, m: i64, n: i64) -> (i64, i64) {
    let r = &ROT[(k % 6) as usize];
    (r[0] * m + r[1] * n, r[2] * m + r[3] * n)
}

impl HexElement {
    pub fn identity() -> Self {
        HexElement { m: 0, n: 0, rho: 0 }
    }

    pub fn new(m: i64, n: i64, rho: u8) -> Self {
        HexElement { m, n, rho: rho % 6 }
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.n == 0 && self.rho == 0
    }

    pub fn compose(&self, other: &HexElement) -> Self {
        let (rm, rn) = rot_apply(self.rho, other.m, other.n);
        HexElement {
            m: self.m + rm,
            n: self.n + rn,
            rho: (self.rho + other.rho) % 6,
        }
    }

    pub fn inverse(&self) -> Self {
        let inv_rho = (6 - self.rho) % 6;
        let (rm, rn) = rot_apply(inv_rho, self.m, self.n);
        HexElement {
            m: -rm,
            n: -rn,
            rho: inv_rho,
        }
    }

    /// e-th power, using that the full rotation-orbit sums of a
    /// nontrivial rotation vanish.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        if self.rho == 0 {
            return HexElement::new(self.m * e, self.n * e, 0);
        }
        let period = 6 / gcd_u8(self.rho, 6) as i64;
        let steps = e.rem_euclid(period);
        let mut acc = HexElement::identity();
        for _ in 0..steps {
            acc = acc.compose(self);
        }
        acc.rho = ((self.rho as i64 * e).rem_euclid(6)) as u8;
        acc
    }
}

fn gcd_u8(a: u8, b: u8) -> u8 {
    if a == 0 {
        b
    } else {
        gcd_u8(b % a, a)
    }
}

/// phi(S) and phi(T): the unique cocycle with phi(X) = ((1,0),0),
/// phi(Y) = ((0,1),0) and phi(R) = ((0,0),1); the latter pins the
/// translation parts, matching the affine action of the hexponential.
pub fn phi_s() -> HexElement {
    HexElement::new(1, -1, 3)
}
pub fn phi_t() -> HexElement {
    HexElement::new(1, 0, 4)
}
pub fn phi_r() -> HexElement {
    HexElement::new(0, 0, 1)
}

/// Image of A under the homomorphism Gamma -> Z^2 x| Z/6 with kernel
/// Gamma''. Computed from the euclidean syllable decomposition, so it
/// runs in O(log |entries|) group operations.
pub fn hex_image(m: &ProjMatrix) -> HexElement {
    let (qs, tail) = euclid_syllables(m);
    let mut h = HexElement::identity();
    let s = phi_s();
    for q in &qs {
        let qmod = q.mod_u(6) as i64;
        h = h.compose(&phi_r().pow(qmod));
        h = h.compose(&s);
    }
    let tmod = tail.mod_u(6) as i64;
    h = h.compose(&phi_r().pow(tmod));
    h
}

/// Image of a group word under phi, letter by letter (slow path used
/// for cross-checks).
pub fn hex_image_word(w: &GroupWord) -> HexElement {
    let phi_letter = |l: Letter| -> HexElement {
        match l {
            Letter::S => phi_s(),
            Letter::T => phi_t(),
            Letter::L => phi_t().inverse().compose(&phi_s()),
            Letter::R => phi_r(),
            Letter::X => HexElement::new(1, 0, 0),
            Letter::Y => HexElement::new(0, 1, 0),
        }
    };
    let mut h = HexElement::identity();
    for &(l, e) in w.syllables() {
        h = h.compose(&phi_letter(l).pow(e));
    }
    h
}

/// True iff A lies in the second derived subgroup.
pub fn gamma_second_contains(m: &ProjMatrix) -> bool {
    hex_image(m).is_identity()
}

// ---------------------------------------------------------------------
// Reidemeister-Schreier decomposition over Gamma'
// ---------------------------------------------------------------------

fn transversal() -> [ProjMatrix; 6] {
    let t = mat_t();
    let s = mat_s();
    let t2 = t.mul(&t);
    // indexed by abelian class: 0:Id, 1:TS, 2:T^2, 3:S, 4:T, 5:T^2 S
    [
        ProjMatrix::identity(),
        t.mul(&s),
        t2.clone(),
        s.clone(),
        t.clone(),
        t2.mul(&s),
    ]
}

fn letter_class(l: Letter, e: i64) -> u8 {
    let base: i64 = match l {
        Letter::S => 3,
        Letter::T => 4,
        _ => unreachable!(),
    };
    ((base * e).rem_euclid(6)) as u8
}

/// Dictionary from matrices to short reduced XY words, for identifying
/// the Schreier generator tokens.
fn xy_dictionary() -> &'static HashMap<ProjMatrix, Vec<(Letter, i64)>> {
    static DICT: OnceLock<HashMap<ProjMatrix, Vec<(Letter, i64)>>> = OnceLock::new();
    DICT.get_or_init(|| {
        let mut map = HashMap::new();
        map.insert(ProjMatrix::identity(), Vec::new());
        let gens: [(Letter, i64); 4] = [
            (Letter::X, 1),
            (Letter::X, -1),
            (Letter::Y, 1),
            (Letter::Y, -1),
        ];
        let mut frontier: Vec<(ProjMatrix, Vec<(Letter, i64)>)> =
            vec![(ProjMatrix::identity(), Vec::new())];
        for _ in 0..4 {
            let mut next = Vec::new();
            for (m, w) in &frontier {
                for &(l, e) in &gens {
                    if let Some(&(ll, le)) = w.last() {
                        if ll == l && le == -e {
                            continue;
                        }
                    }
                    let nm = m.mul(&l.matrix().pow(e));
                    let mut nw = w.clone();
                    nw.push((l, e));
                    if !map.contains_key(&nm) {
                        map.insert(nm.clone(), nw.clone());
                        next.push((nm, nw));
                    }
                }
            }
            frontier = next;
        }
        map
    })
}

/// Reidemeister-Schreier rewriting table: for each transversal index
/// and generator letter, the XY word of rep * g * rep(target)^{-1}.
fn rs_table() -> &'static HashMap<(u8, Letter, i64), Vec<(Letter, i64)>> {
    static TABLE: OnceLock<HashMap<(u8, Letter, i64), Vec<(Letter, i64)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let reps = transversal();
        let dict = xy_dictionary();
        let mut table = HashMap::new();
        for k in 0..6u8 {
            for &(l, e) in &[(Letter::S, 1i64), (Letter::T, 1), (Letter::T, -1)] {
                let target = (k + letter_class(l, e)) % 6;
                let u = reps[k as usize]
                    .mul(&l.matrix().pow(e))
                    .mul(&reps[target as usize].inverse());
                let word = dict
                    .get(&u)
                    .unwrap_or_else(|| panic!("Schreier token {u:?} not in XY dictionary"))
                    .clone();
                table.insert((k, l, e), word);
            }
        }
        table
    })
}

/// The unique reduced word in X, Y with product A, for A in Gamma'.
pub fn gamma_prime_decompose(m: &ProjMatrix) -> Result<GroupWord, ModGroupError> {
    if gamma_abelian_class(m) != 0 {
        return Err(ModGroupError::NotInDerivedGroup);
    }
    let st = st_factorize(m);
    let table = rs_table();
    let mut state: u8 = 0;
    let mut syl: Vec<(Letter, i64)> = Vec::new();
    for &(l, e) in st.syllables() {
        // ST syllables have exponents in {1,-1} after reduction
        debug_assert!(e == 1 || e == -1);
        let tok = table.get(&(state, l, e)).expect("table covers all letters");
        syl.extend_from_slice(tok);
        state = (state + letter_class(l, e)) % 6;
    }
    debug_assert_eq!(state, 0);
    let w = GroupWord::new(Alphabet::XY, syl)?;
    debug_assert_eq!(word_to_matrix(&w), *m);
    Ok(w)
}

// ---------------------------------------------------------------------
// Cusp representatives in Gamma'
// ---------------------------------------------------------------------

/// Some A in Gamma' whose first column is (a, c), for coprime (a, c).
/// Unique up to right multiplication by powers of R^6, which acts
/// trivially under hex_image.
pub fn gamma_prime_rep_for_cusp(a: &Integer, c: &Integer) -> Result<ProjMatrix, ModGroupError> {
    let g = a.clone().gcd(c);
    if g != 1 {
        return Err(ModGroupError::NotCoprime);
    }
    // extended gcd: s*a + t*c = 1 -> column (a, c) with d0 = s, b0 = -t
    let (g, s, t) = a.clone().extended_gcd(c.clone(), Integer::new());
    debug_assert_eq!(g, 1);
    let m0 = ProjMatrix::new(a.clone(), -t, c.clone(), s)
        .expect("extended gcd gives determinant 1");
    let k = ((6 - hex_image(&m0).rho) % 6) as i64;
    let mut rep = m0.mul(&mat_r().pow(k));
    debug_assert_eq!(hex_image(&rep).rho, 0);
    if rep.is_nontrivial_torsion() {
        rep = rep.mul(&mat_r().pow(6));
    }
    Ok(rep)
}
