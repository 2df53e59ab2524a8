//! Exact Laurent-polynomial arithmetic over the rationals.
//!
//! A `LaurentPoly` is a sparse map from integer exponents to nonzero
//! `BigRational` coefficients.  Everything here is exact: no floating
//! point, no overflow (coefficients are arbitrary precision).
//!
//! Invariants:
//! - no stored coefficient is zero (trimmed on construction),
//! - the involution sends `t` to `t^-1` and is an algebra involution.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("exact division failed: not divisible")]
    NotDivisible,
    #[error("operation requires integer coefficients")]
    NonIntegerCoefficient,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("root-power order must be positive")]
    ZeroOrder,
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Sparse exact Laurent polynomial in one variable `t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// The generator `t`.
    pub fn t() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(coeff: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Integer-coefficient monomial `c * t^k`.
    pub fn int_monomial(c: i64, k: i64) -> Self {
        Self::monomial(rat(c, 1), k)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, BigRational::is_one)
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The involution `t -> t^-1`, negating every exponent.
    pub fn involute(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Evaluation at `t = 1`, i.e. the sum of coefficients.
    pub fn eval_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Substitution `t -> t^r`, multiplying every exponent by `r`.
    pub fn subst_power(&self, r: i64) -> Self {
        assert!(r != 0, "substitution order must be nonzero");
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * r, c.clone())).collect(),
        }
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Gcd of the (integer) coefficients; `content(0) = 0`.
    pub fn content(&self) -> Result<BigInt, LaurentError> {
        if !self.has_integer_coeffs() {
            return Err(LaurentError::NonIntegerCoefficient);
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&c.to_integer());
        }
        Ok(g.abs())
    }

    /// Coefficientwise reduction mod 2; requires integer coefficients.
    pub fn mod_two(&self) -> Result<Self, LaurentError> {
        if !self.has_integer_coeffs() {
            return Err(LaurentError::NonIntegerCoefficient);
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let r = c.to_integer().mod_floor(&BigInt::from(2));
            if !r.is_zero() {
                out.terms.insert(*e, BigRational::from_integer(r));
            }
        }
        Ok(out)
    }

    /// If this is `s * t^k` with `s` of absolute value one, return `(sign, k)`.
    pub fn as_unit_monomial(&self) -> Option<(i64, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.abs().is_one() {
            Some((if c.is_positive() { 1 } else { -1 }, *e))
        } else {
            None
        }
    }

    /// Exact quotient `self / divisor`, or `NotDivisible`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let a = self.min_exp().unwrap();
        let b = divisor.min_exp().unwrap();
        let p = self.to_coeff_vec(a);
        let q = divisor.to_coeff_vec(b);
        let quot = poly_exact_div(&p, &q).ok_or(LaurentError::NotDivisible)?;
        Ok(Self::from_coeff_vec(&quot, a - b))
    }

    /// The polynomial whose roots are the r-th powers of the roots of `self`,
    /// computed as the resultant `Res_s(self(s), s^r - t)` and unit-normalized
    /// to be symmetric with positive value at `t = 1` when possible.
    pub fn power_roots(&self, r: u32) -> Result<Self, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        if r == 0 {
            return Err(LaurentError::ZeroOrder);
        }
        if r == 1 {
            return Ok(self.normalize_unit());
        }
        let min = self.min_exp().unwrap();
        let f = self.to_coeff_vec(min);
        let d = f.len() - 1;
        if d == 0 {
            return Ok(Self::one());
        }
        // Res_s(f, s^r - t) has degree d in t; interpolate through d+1 nodes.
        let nodes: Vec<BigRational> = (0..=d as i64)
            .map(|k| BigRational::from_integer(BigInt::from(k)))
            .collect();
        let values: Vec<BigRational> = nodes
            .iter()
            .map(|t0| sylvester_resultant(&f, r as usize, t0))
            .collect();
        let coeffs = lagrange_interpolate(&nodes, &values);
        Ok(Self::from_coeff_vec(&coeffs, 0).normalize_unit())
    }

    /// Multiply by `±t^k` so the result is involution-symmetric (when the
    /// support allows it) and positive at `t = 1`, falling back to a positive
    /// leading coefficient when the value at 1 vanishes.
    pub fn normalize_unit(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut out = if (lo + hi) % 2 == 0 {
            self.shift(-(lo + hi) / 2)
        } else {
            self.shift(-lo)
        };
        let v = out.eval_one();
        let lead = out.terms.values().next_back().unwrap().clone();
        let flip = if !v.is_zero() { v.is_negative() } else { lead.is_negative() };
        if flip {
            out = -&out;
        }
        out
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.involute() == *self
    }

    fn to_coeff_vec(&self, min: i64) -> Vec<BigRational> {
        let max = self.max_exp().unwrap();
        let mut v = vec![BigRational::zero(); (max - min + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - min) as usize] = c.clone();
        }
        v
    }

    fn from_coeff_vec(v: &[BigRational], offset: i64) -> Self {
        Self::from_terms(
            v.iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + offset, c.clone())),
        )
    }
}

/// Exact quotient of ordinary polynomials (coefficient vectors, constant
/// term first); `None` when the division leaves a remainder.
fn poly_exact_div(p: &[BigRational], q: &[BigRational]) -> Option<Vec<BigRational>> {
    let dq = q.len() - 1;
    if p.len() < q.len() {
        return None;
    }
    let mut rem: Vec<BigRational> = p.to_vec();
    let dp = p.len() - 1;
    let mut quot = vec![BigRational::zero(); dp - dq + 1];
    for k in (0..=dp - dq).rev() {
        let c = &rem[k + dq] / &q[dq];
        if !c.is_zero() {
            for (i, qi) in q.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(qi * &c);
            }
        }
        quot[k] = c;
    }
    if rem.iter().all(BigRational::is_zero) {
        Some(quot)
    } else {
        None
    }
}

/// Determinant of the Sylvester matrix of `f` (constant term first) and
/// `g(s) = s^r - t0`, evaluated exactly over the rationals.
fn sylvester_resultant(f: &[BigRational], r: usize, t0: &BigRational) -> BigRational {
    let d = f.len() - 1;
    let n = d + r;
    let mut m = vec![vec![BigRational::zero(); n]; n];
    // r rows of f coefficients (descending powers convention).
    for row in 0..r {
        for (i, c) in f.iter().rev().enumerate() {
            m[row][row + i] = c.clone();
        }
    }
    // d rows of g = s^r - t0.
    for row in 0..d {
        m[r + row][row] = BigRational::one();
        m[r + row][row + r] = -t0.clone();
    }
    determinant(&mut m)
}

fn determinant(m: &mut [Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&row| !m[row][col].is_zero());
        let Some(pivot) = pivot else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &p;
            for k in col..n {
                let sub = &m[col][k] * &factor;
                m[row][k] = &m[row][k] - &sub;
            }
        }
    }
    det
}

fn lagrange_interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        // numerator polynomial prod_{j!=i} (x - xs[j])
        let mut num = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(c * &xs[j]);
            }
            num = next;
            denom *= &xs[i] - &xs[j];
        }
        let w = &ys[i] / denom;
        for (k, c) in num.iter().enumerate() {
            acc[k] = &acc[k] + &(c * &w);
        }
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Text grammar: signed terms `c*t^k`, `c`, `t^k`, `t`; `*` optional.
// ---------------------------------------------------------------------------

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = *e == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if *e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, LaurentError> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { chars: src.chars().collect(), pos: 0, src }
    }

    fn err(&self, msg: &str) -> LaurentError {
        LaurentError::Parse { col: self.pos + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<LaurentPoly, LaurentError> {
        if self.src.trim().is_empty() {
            return Err(self.err("empty input"));
        }
        let mut out = LaurentPoly::zero();
        let mut sign = BigRational::one();
        if let Some(c) = self.peek() {
            if c == '-' {
                sign = -sign;
                self.pos += 1;
            } else if c == '+' {
                self.pos += 1;
            }
        }
        loop {
            let (coeff, exp) = self.parse_term()?;
            out.add_term(exp, coeff * &sign);
            match self.peek() {
                None => break,
                Some('+') => {
                    sign = BigRational::one();
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -BigRational::one();
                    self.pos += 1;
                }
                Some(_) => return Err(self.err("expected '+' or '-' between terms")),
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(BigRational, i64), LaurentError> {
        let mut coeff = BigRational::one();
        let mut have_coeff = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num = self.parse_int()?;
            let den = if self.peek() == Some('/') {
                self.pos += 1;
                let d = self.parse_int()?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                d
            } else {
                BigInt::one()
            };
            coeff = BigRational::new(num, den);
            have_coeff = true;
        }
        if self.peek() == Some('*') {
            if !have_coeff {
                return Err(self.err("'*' without a coefficient"));
            }
            self.pos += 1;
        }
        if self.peek() == Some('t') {
            self.pos += 1;
            let exp = if self.peek() == Some('^') {
                self.pos += 1;
                let mut esign = 1i64;
                if self.peek() == Some('-') {
                    esign = -1;
                    self.pos += 1;
                } else if self.peek() == Some('+') {
                    self.pos += 1;
                }
                let e = self.parse_int()?;
                let e: i64 = e.try_into().map_err(|_| self.err("exponent out of range"))?;
                esign * e
            } else {
                1
            };
            Ok((coeff, exp))
        } else if have_coeff {
            Ok((coeff, 0))
        } else {
            Err(self.err("expected a coefficient or 't'"))
        }
    }

    fn parse_int(&mut self) -> Result<BigInt, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("invalid number"))
    }
}
