//! The 2-loop diagram space in its canonical theta basis.
//!
//! A closed 2-loop diagram with edge colors `t^a, t^b, t^c` is determined by
//! the exponent triple up to the order-12 group generated by the edge
//! permutations, the slide `(a,b,c) ~ (a+1,b+1,c+1)` and global inversion.
//! Each orbit meets the region `0 <= 2n <= m` (after normalizing the third
//! exponent to 0) in exactly one point; that pair indexes the basis.
//!
//! Elements are stored in cleared (numerator) form: an edge colored by the
//! fraction `P/Delta` contributes the numerator `P`, an uncolored edge
//! contributes `Delta`.  The optional `denom` records the clearing
//! denominator for the hair map.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThetaError {
    #[error("lattice scale must be positive")]
    ZeroModulus,
    #[error("denominator vanishes at t = 1")]
    DenominatorVanishesAtOne,
    #[error("malformed theta line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Orbit representative of an exponent triple: the unique image with third
/// coordinate slid to zero and `0 <= 2n <= m`.
pub fn canonical_pair(m: i64, n: i64, k: i64) -> (i64, i64) {
    let mut found: Option<(i64, i64)> = None;
    for (a, b, c) in orbit_triples(m, n, k) {
        let pair = (a - c, b - c);
        if 0 <= 2 * pair.1 && 2 * pair.1 <= pair.0 {
            match found {
                None => found = Some(pair),
                // each orbit meets the canonical region exactly once
                Some(prev) => assert_eq!(prev, pair, "orbit met the region twice"),
            }
        }
    }
    found.expect("every orbit meets the canonical region")
}

/// The 12 group images of a triple (permutations times global inversion).
pub fn orbit_triples(m: i64, n: i64, k: i64) -> impl Iterator<Item = (i64, i64, i64)> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let v = [m, n, k];
    PERMS.into_iter().flat_map(move |p| {
        [1i64, -1].into_iter().map(move |s| {
            (s * v[p[0]], s * v[p[1]], s * v[p[2]])
        })
    })
}

/// Pre-canonical coloring of the theta graph: one Laurent numerator per
/// edge, all edges oriented the same way.
#[derive(Debug, Clone)]
pub struct RawTriple {
    pub p: LaurentPoly,
    pub q: LaurentPoly,
    pub r: LaurentPoly,
}

impl RawTriple {
    pub fn new(p: LaurentPoly, q: LaurentPoly, r: LaurentPoly) -> Self {
        Self { p, q, r }
    }
}

/// Element of the 2-loop space in the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThetaElement {
    coeffs: BTreeMap<(i64, i64), BigRational>,
    denom: Option<LaurentPoly>,
}

impl ThetaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Single basis element `theta(t^m, t^n)` with the given coefficient.
    pub fn basis(m: i64, n: i64, coeff: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(canonical_pair(m, n, 0), coeff);
        out
    }

    /// Trilinear expansion of a colored triple into canonical pairs.
    pub fn from_triple(x: &RawTriple) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in x.p.terms() {
            for (e2, c2) in x.q.terms() {
                for (e3, c3) in x.r.terms() {
                    out.add_term(canonical_pair(e1, e2, e3), c1 * c2 * c3);
                }
            }
        }
        out
    }

    pub fn with_denom(mut self, denom: LaurentPoly) -> Self {
        self.denom = Some(denom);
        self
    }

    pub fn denom(&self) -> Option<&LaurentPoly> {
        self.denom.as_ref()
    }

    fn add_term(&mut self, key: (i64, i64), coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: i64, n: i64) -> BigRational {
        self.coeffs
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(
            compatible(&self.denom, &other.denom),
            "cannot add theta elements with different denominators"
        );
        let mut out = self.clone();
        if out.denom.is_none() {
            out.denom = other.denom.clone();
        }
        for (k, v) in &other.coeffs {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self { coeffs: BTreeMap::new(), denom: self.denom.clone() };
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * s)).collect(),
            denom: self.denom.clone(),
        }
    }

    /// Max `m` over stored keys; `None` for the zero element.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().map(|(m, _)| *m).max()
    }

    /// True iff every coefficient of `k * self` is an integer.
    pub fn in_lattice(&self, k: u32) -> Result<bool, ThetaError> {
        if k == 0 {
            return Err(ThetaError::ZeroModulus);
        }
        let k = BigRational::from_integer(k.into());
        Ok(self.coeffs.values().all(|c| (c * &k).is_integer()))
    }

    /// Sum of all canonical coefficients: the coefficient of the unlabeled
    /// theta graph after setting `t = 1`.
    pub fn eval_t_one(&self) -> BigRational {
        self.coeffs.values().fold(BigRational::zero(), |a, c| a + c)
    }

    /// Coefficientwise reduction mod 2 (requires integer coefficients).
    pub fn mod_two(&self) -> Result<Self, ThetaError> {
        let mut out = Self::zero();
        out.denom = self.denom.clone();
        for (k, v) in &self.coeffs {
            if !v.is_integer() {
                return Err(ThetaError::Laurent(LaurentError::NonIntegerCoefficient));
            }
            if v.to_integer().is_odd() {
                out.coeffs.insert(*k, BigRational::one());
            }
        }
        Ok(out)
    }

    /// One `m n coefficient` line per term, sorted by key.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for ((m, n), c) in &self.coeffs {
            s.push_str(&format!("{} {} {}\n", m, n, c));
        }
        s
    }

    pub fn parse_lines(text: &str) -> Result<Self, ThetaError> {
        let mut out = Self::zero();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse_err = |msg: &str| ThetaError::Parse { line: i + 1, msg: msg.to_string() };
            let m: i64 = it
                .next()
                .ok_or_else(|| parse_err("missing m"))?
                .parse()
                .map_err(|_| parse_err("bad m"))?;
            let n: i64 = it
                .next()
                .ok_or_else(|| parse_err("missing n"))?
                .parse()
                .map_err(|_| parse_err("bad n"))?;
            let c: BigRational = it
                .next()
                .ok_or_else(|| parse_err("missing coefficient"))?
                .parse()
                .map_err(|_| parse_err("bad coefficient"))?;
            if it.next().is_some() {
                return Err(parse_err("trailing tokens"));
            }
            out.add_term(canonical_pair(m, n, 0), c);
        }
        Ok(out)
    }
}

fn compatible(a: &Option<LaurentPoly>, b: &Option<LaurentPoly>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

impl fmt::Display for ThetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((m, n), c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*theta({},{})", c, m, n)?;
        }
        Ok(())
    }
}

/// Dumbbell reduction: loops colored `P/Delta` and `Q/Delta`, central edge
/// `R/Delta`.  The central color splits off its value at 1 and the rest
/// vanishes by sliding; the IHX move then identifies the remainder with
/// `theta(P/Delta, (Qbar - Q)/Delta)`.
pub fn reduce_dumbbell(
    p: &LaurentPoly,
    r: &LaurentPoly,
    q: &LaurentPoly,
    delta: &LaurentPoly,
) -> Result<ThetaElement, ThetaError> {
    let dv = delta.eval_one();
    if dv.is_zero() {
        return Err(ThetaError::DenominatorVanishesAtOne);
    }
    let eps = r.eval_one() / dv;
    let triple = RawTriple::new(p.clone(), &q.involute() - q, delta.clone());
    Ok(ThetaElement::from_triple(&triple)
        .scale(&eps)
        .with_denom(delta.clone()))
}

// ---------------------------------------------------------------------------
// Hair map
// ---------------------------------------------------------------------------

/// Bivariate power series in two commuting variables, truncated at a total
/// degree; exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    trunc: u32,
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

impl BivariateSeries {
    pub fn zero(trunc: u32) -> Self {
        Self { trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs.insert((0, 0), BigRational::one());
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, p: u32, q: u32) -> BigRational {
        self.coeffs
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRational) {
        if c.is_zero() || key.0 + key.1 > self.trunc {
            return;
        }
        let e = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.trunc, other.trunc, "truncation degrees differ");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .filter(|_| !s.is_zero())
                .map(|(k, v)| (*k, v * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.trunc, other.trunc, "truncation degrees differ");
        let mut out = Self::zero(self.trunc);
        for ((p1, q1), c1) in &self.coeffs {
            for ((p2, q2), c2) in &other.coeffs {
                if p1 + p2 + q1 + q2 <= self.trunc {
                    out.add_term((p1 + p2, q1 + q2), c1 * c2);
                }
            }
        }
        out
    }

    /// `exp(ma + nb)` truncated at total degree.
    fn exp_linear(m: i64, n: i64, trunc: u32) -> Self {
        let mut out = Self::zero(trunc);
        let mut mp = vec![BigRational::one()];
        let mut np = vec![BigRational::one()];
        let mb = BigRational::from_integer(m.into());
        let nb = BigRational::from_integer(n.into());
        let mut fact = vec![BigRational::one()];
        for k in 1..=trunc as usize {
            mp.push(&mp[k - 1] * &mb);
            np.push(&np[k - 1] * &nb);
            fact.push(&fact[k - 1] * BigRational::from_integer(k.into()));
        }
        for p in 0..=trunc {
            for q in 0..=trunc - p {
                out.add_term(
                    (p, q),
                    &mp[p as usize] / &fact[p as usize] * (&np[q as usize] / &fact[q as usize]),
                );
            }
        }
        out
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Self {
        let c0 = self.coeff(0, 0);
        assert!(!c0.is_zero(), "constant term must be invertible");
        let mut inv = Self::zero(self.trunc);
        inv.coeffs.insert((0, 0), BigRational::one() / &c0);
        // Newton-free iteration: subtract higher terms degree by degree.
        let mut rest = self.clone();
        rest.coeffs.remove(&(0, 0));
        let mut out = Self::zero(self.trunc);
        let mut term = inv.clone();
        for _ in 0..=self.trunc {
            out = out.add(&term);
            term = term.mul(&rest).scale(&(-BigRational::one() / &c0));
            if term.is_zero() {
                break;
            }
        }
        out
    }
}

/// Substitute `t -> exp(u)` into a Laurent polynomial, where `u = ca*a + cb*b`.
fn poly_exp_series(poly: &LaurentPoly, ca: i64, cb: i64, trunc: u32) -> BivariateSeries {
    let mut out = BivariateSeries::zero(trunc);
    for (e, c) in poly.terms() {
        out = out.add(&BivariateSeries::exp_linear(e * ca, e * cb, trunc).scale(c));
    }
    out
}

/// The hair substitution `t -> exp(h)`: each canonical monomial maps to the
/// sum over the 12-element group of `exp(m'a + n'b)`, divided by the
/// denominator evaluated on each edge class when one is recorded.
pub fn hair(x: &ThetaElement, trunc: u32) -> BivariateSeries {
    let mut out = BivariateSeries::zero(trunc);
    for ((m, n), c) in x.iter() {
        let mut sym = BivariateSeries::zero(trunc);
        for (a, b, k) in orbit_triples(m, n, 0) {
            sym = sym.add(&BivariateSeries::exp_linear(a - k, b - k, trunc));
        }
        out = out.add(&sym.scale(c));
    }
    if let Some(delta) = x.denom() {
        if !delta.is_one() {
            // edge classes are a, b and -a-b
            let d1 = poly_exp_series(delta, 1, 0, trunc).inverse();
            let d2 = poly_exp_series(delta, 0, 1, trunc).inverse();
            let d3 = poly_exp_series(delta, -1, -1, trunc).inverse();
            out = out.mul(&d1).mul(&d2).mul(&d3);
        }
    }
    out
}
