//! Polynomials and Laurent polynomials over GF(2).
//!
//! [`Poly`] is the ordinary polynomial ring `GF(2)[D]`, stored as packed bit
//! words. [`LaurentPoly`] is `GF(2)[D, 1/D]`, stored as a lowest exponent plus a
//! body polynomial with constant term one, so equality is structural.
//! [`RationalFn`] only appears transiently (series expansions).

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use thiserror::Error;

/// Default bound on exponents and spans before arithmetic growth is treated as runaway.
pub const DEFAULT_MAX_SPAN: u64 = 1 << 16;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("denominator has zero constant term; expansion is not a power series")]
    NotPowerSeries,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid polynomial `{input}`: {reason}")]
pub struct ParsePolyError {
    pub input: String,
    pub reason: String,
}

/// A polynomial over GF(2). Bit `i` of the packed words is the coefficient of `D^i`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    // No trailing zero words; the zero polynomial is the empty vector.
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::monomial(0)
    }

    pub fn monomial(degree: usize) -> Self {
        let mut p = Poly::zero();
        p.flip(degree);
        p
    }

    /// Sum of `D^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Poly::zero();
        for e in exps {
            p.flip(e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| (w >> (i % WORD)) & 1 == 1)
    }

    /// Exponent of the lowest nonzero term.
    pub fn lowest_term(&self) -> Option<usize> {
        let (idx, w) = self.words.iter().enumerate().find(|(_, w)| **w != 0)?;
        Some(idx * WORD + w.trailing_zeros() as usize)
    }

    /// Exponents with coefficient one, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(idx, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(idx * WORD + b)
            })
        })
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn flip(&mut self, i: usize) {
        let idx = i / WORD;
        if self.words.len() <= idx {
            self.words.resize(idx + 1, 0);
        }
        self.words[idx] ^= 1 << (i % WORD);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn xor_shifted(&mut self, other: &Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let ws = shift / WORD;
        let bs = shift % WORD;
        let need = ws + other.words.len() + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (k, &w) in other.words.iter().enumerate() {
            self.words[ws + k] ^= w << bs;
            if bs != 0 {
                self.words[ws + k + 1] ^= w >> (WORD - bs);
            }
        }
        self.trim();
    }

    /// Multiplication by `D^k`.
    pub fn shl(&self, k: usize) -> Poly {
        let mut p = Poly::zero();
        p.xor_shifted(self, k);
        p
    }

    /// Division by `D^k`, dropping the low `k` coefficients.
    fn shr(&self, k: usize) -> Poly {
        Poly::from_exponents(self.exponents().filter(|&e| e >= k).map(|e| e - k))
    }

    /// Coefficient reversal `D^deg · p(1/D)`.
    pub fn reversed(&self) -> Poly {
        match self.degree() {
            None => Poly::zero(),
            Some(d) => Poly::from_exponents(self.exponents().map(|e| d - e)),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.xor_shifted(other, 0);
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (small, large) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Poly::zero();
        for e in small.exponents() {
            acc.xor_shifted(large, e);
        }
        acc
    }

    /// Euclidean division: `self = q·divisor + rem` with `deg rem < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let db = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let mut q = Poly::zero();
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let s = dr - db;
            q.flip(s);
            rem.xor_shifted(divisor, s);
        }
        Ok((q, rem))
    }

    /// Extended gcd: `(g, u, v)` with `u·self + v·other = g`.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly), PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.add(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.add(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        Ok((r0, s0, t0))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        match self.xgcd(other) {
            Ok((g, _, _)) => g,
            Err(_) => Poly::zero(),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", LaurentPoly::from_poly(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", LaurentPoly::from_poly(self))
    }
}

/// A Laurent polynomial `D^offset · body(D)` over GF(2).
///
/// Canonical form: `body` has constant term one, or the value is zero and
/// `offset == 0`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    offset: i64,
    body: Poly,
}

/// Result of [`LaurentPoly::symmetry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symmetry {
    /// `f(1/D) = f(D)`.
    pub symmetric: bool,
    /// The coefficient of `D^0` is one.
    pub has_constant: bool,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            offset: 0,
            body: Poly::zero(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0)
    }

    pub fn monomial(exp: i64) -> Self {
        LaurentPoly {
            offset: exp,
            body: Poly::one(),
        }
    }

    pub fn from_poly(p: &Poly) -> Self {
        LaurentPoly::from_parts(0, p.clone())
    }

    /// `D^shift · p`, normalised.
    pub fn from_parts(shift: i64, p: Poly) -> Self {
        match p.lowest_term() {
            None => LaurentPoly::zero(),
            Some(0) => LaurentPoly {
                offset: shift,
                body: p,
            },
            Some(low) => LaurentPoly {
                offset: shift + low as i64,
                body: p.shr(low),
            },
        }
    }

    /// Sum of `D^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exps: I) -> Self {
        let exps: Vec<i64> = exps.into_iter().collect();
        let Some(&low) = exps.iter().min() else {
            return LaurentPoly::zero();
        };
        LaurentPoly::from_parts(
            low,
            Poly::from_exponents(exps.iter().map(|e| (e - low) as usize)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.offset == 0 && self.body.is_one()
    }

    /// Units of the Laurent ring are exactly the monomials.
    pub fn is_monomial(&self) -> bool {
        self.body.is_one()
    }

    /// Lowest exponent, `None` for zero.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    /// Highest exponent, `None` for zero.
    pub fn high(&self) -> Option<i64> {
        self.body.degree().map(|d| self.offset + d as i64)
    }

    /// Exponent span `high - low`; undefined for zero.
    pub fn laurent_degree(&self) -> Option<usize> {
        self.body.degree()
    }

    /// The polynomial with the unit `D^low` stripped.
    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn coeff(&self, exp: i64) -> bool {
        let k = exp - self.offset;
        k >= 0 && self.body.coeff(k as usize)
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        let off = self.offset;
        self.body.exponents().map(move |e| off + e as i64)
    }

    pub fn terms(&self) -> Vec<i64> {
        self.exponents().collect()
    }

    /// Multiplication by `D^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            offset: self.offset + k,
            body: self.body.clone(),
        }
    }

    /// The substitution `D -> 1/D`.
    pub fn reciprocal(&self) -> LaurentPoly {
        match self.body.degree() {
            None => LaurentPoly::zero(),
            Some(d) => LaurentPoly {
                offset: -self.offset - d as i64,
                body: self.body.reversed(),
            },
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        Symmetry {
            symmetric: self.reciprocal() == *self,
            has_constant: self.coeff(0),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry().symmetric
    }

    /// Polynomial view; `None` when a negative exponent is present.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        (self.offset >= 0).then(|| self.body.shl(self.offset as usize))
    }

    /// Largest absolute exponent appearing; zero for the zero polynomial.
    pub fn max_abs_exponent(&self) -> u64 {
        match (self.low(), self.high()) {
            (Some(l), Some(h)) => l.unsigned_abs().max(h.unsigned_abs()),
            _ => 0,
        }
    }

    /// Euclidean division with respect to [`laurent_degree`](Self::laurent_degree):
    /// `self = q·divisor + rem` with `rem = 0` or `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok((LaurentPoly::zero(), LaurentPoly::zero()));
        }
        let (q, r) = self.body.divmod(&divisor.body)?;
        Ok((
            LaurentPoly::from_parts(self.offset - divisor.offset, q),
            LaurentPoly::from_parts(self.offset, r),
        ))
    }

    /// Exact quotient in the Laurent ring, if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Divisibility in the Laurent ring (bodies compared after stripping units).
    pub fn divides(&self, other: &LaurentPoly) -> bool {
        other.exact_div(self).is_some()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, e) in self.exponents().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("D")?,
                _ => write!(f, "D^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParsePolyError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty polynomial"));
        }
        let mut exps = Vec::new();
        for term in compact.split('+') {
            match term {
                "" => return Err(err("empty term")),
                "0" => {}
                "1" => exps.push(0),
                "D" => exps.push(1),
                t => {
                    let e = t
                        .strip_prefix("D^")
                        .ok_or_else(|| err(&format!("unrecognised term `{t}`")))?;
                    let e: i64 = e
                        .parse()
                        .map_err(|_| err(&format!("bad exponent in `{t}`")))?;
                    exps.push(e);
                }
            }
        }
        Ok(LaurentPoly::from_exponents(exps))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.offset.min(rhs.offset);
        let mut acc = self.body.shl((self.offset - low) as usize);
        acc.xor_shifted(&rhs.body, (rhs.offset - low) as usize);
        LaurentPoly::from_parts(low, acc)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        // Both bodies have constant term one, so the product does too.
        LaurentPoly {
            offset: self.offset + rhs.offset,
            body: self.body.mul(&rhs.body),
        }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// A reduced quotient `numerator / denominator` of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    numerator: Poly,
    denominator: Poly,
}

impl RationalFn {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self, PolyError> {
        if denominator.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if numerator.is_zero() {
            return Ok(RationalFn {
                numerator,
                denominator: Poly::one(),
            });
        }
        let g = numerator.gcd(&denominator);
        let (n, _) = numerator.divmod(&g)?;
        let (d, _) = denominator.divmod(&g)?;
        Ok(RationalFn {
            numerator: n,
            denominator: d,
        })
    }

    pub fn inverse_of(p: &Poly) -> Result<Self, PolyError> {
        RationalFn::new(Poly::one(), p.clone())
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// The value as a Laurent polynomial, when the denominator is a monomial.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        let den = LaurentPoly::from_poly(&self.denominator);
        den.is_monomial()
            .then(|| LaurentPoly::from_poly(&self.numerator).shift(-den.low().unwrap_or(0)))
    }

    /// First `k` coefficients of the power-series expansion.
    pub fn series_head(&self, k: usize) -> Result<Vec<bool>, PolyError> {
        if !self.denominator.coeff(0) {
            return Err(PolyError::NotPowerSeries);
        }
        // Long division: c_i = num_i + sum_{j>=1} den_j c_{i-j}.
        let den: Vec<usize> = self.denominator.exponents().filter(|&e| e > 0).collect();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let mut c = self.numerator.coeff(i);
            for &j in &den {
                if j <= i && out[i - j] {
                    c = !c;
                }
            }
            out.push(c);
        }
        Ok(out)
    }
}

/// Period of the expansion of `1/p` for `p` with constant term one: the least
/// `t >= 1` with `p | D^t + 1`.
pub fn inverse_period(p: &Poly) -> Option<usize> {
    let d = p.degree()?;
    if !p.coeff(0) {
        return None;
    }
    if d == 0 {
        return Some(1);
    }
    // Order of D modulo p; bounded by (2^d - 1) times a small factor for
    // repeated factors.
    let cap = (1usize << d.min(20)).saturating_mul(d + 1);
    let mut power = Poly::monomial(1).divmod(p).ok()?.1;
    for t in 1..=cap {
        if power.is_one() {
            return Some(t);
        }
        power = power.shl(1).divmod(p).ok()?.1;
    }
    None
}
