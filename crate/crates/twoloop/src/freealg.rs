//! Truncated formal series in noncommuting generators.
//!
//! Words are stored sparsely as generator-index strings with exact rational
//! coefficients; multiplication truncates at the series' degree bound.
//! `exp` and `log` are mutually inverse on the usual domains up to the
//! truncation degree.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::rat;

type Word = Vec<u8>;

/// Formal series in noncommuting generators, truncated at `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSeries {
    degree: usize,
    terms: BTreeMap<Word, BigRational>,
}

impl NcSeries {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.terms.insert(Vec::new(), BigRational::one());
        s
    }

    pub fn generator(i: u8, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if degree >= 1 {
            s.terms.insert(vec![i], BigRational::one());
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, word: &[u8]) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, word: Word, c: BigRational) {
        if c.is_zero() || word.len() > self.degree {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "truncation degrees differ");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "truncation degrees differ");
        let mut out = Self::zero(self.degree);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() <= self.degree {
                    let mut w = w1.clone();
                    w.extend_from_slice(w2);
                    out.add_term(w, c1 * c2);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Exponential; the constant term must vanish.
    pub fn exp(&self) -> Self {
        assert!(
            self.coeff(&[]).is_zero(),
            "exp requires a vanishing constant term"
        );
        let mut out = Self::one(self.degree);
        let mut term = Self::one(self.degree);
        for k in 1..=self.degree {
            term = term.mul(self).scale(&rat(1, k as i64));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        out
    }

    /// Logarithm; the constant term must be 1.
    pub fn log(&self) -> Self {
        assert!(self.coeff(&[]).is_one(), "log requires constant term one");
        let mut y = self.clone();
        y.terms.remove(&Vec::new());
        let mut out = Self::zero(self.degree);
        let mut term = Self::one(self.degree);
        for k in 1..=self.degree {
            term = term.mul(&y);
            if term.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&term.scale(&rat(sign, k as i64)));
        }
        out
    }

    /// Image under letter-sorting, i.e. in the abelianization.
    pub fn abelianized(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (w, c) in &self.terms {
            let mut sorted = w.clone();
            sorted.sort_unstable();
            out.add_term(sorted, c.clone());
        }
        out
    }
}

/// The tangle product `exp(-b/2) Phi exp(a/2) Phi^-1 exp(b) Phi exp(-a)
/// Phi^-1 exp(-b) Phi exp(a/2) Phi^-1 exp(b/2)` for a caller-supplied
/// associator approximation `Phi`.
pub fn zt_product_with(phi: &NcSeries) -> NcSeries {
    let d = phi.degree();
    let a = NcSeries::generator(0, d);
    let b = NcSeries::generator(1, d);
    let phi_inv = phi.log().scale(&rat(-1, 1)).exp();
    let factors = [
        b.scale(&rat(-1, 2)).exp(),
        phi.clone(),
        a.scale(&rat(1, 2)).exp(),
        phi_inv.clone(),
        b.exp(),
        phi.clone(),
        a.scale(&rat(-1, 1)).exp(),
        phi_inv.clone(),
        b.scale(&rat(-1, 1)).exp(),
        phi.clone(),
        a.scale(&rat(1, 2)).exp(),
        phi_inv,
        b.scale(&rat(1, 2)).exp(),
    ];
    let mut prod = NcSeries::one(d);
    for f in &factors {
        prod = prod.mul(f);
    }
    prod
}

/// The same product with the even associator `Phi = exp([a,b]/24)` at
/// truncation degree 3.
pub fn zt_product() -> NcSeries {
    let d = 3;
    let a = NcSeries::generator(0, d);
    let b = NcSeries::generator(1, d);
    let phi = a.commutator(&b).scale(&rat(1, 24)).exp();
    zt_product_with(&phi)
}

/// Checks that the tangle product equals `exp([a, b])` exactly at
/// truncation degree 3.
pub fn zt_identity_check() -> bool {
    let a = NcSeries::generator(0, 3);
    let b = NcSeries::generator(1, 3);
    zt_product().log() == a.commutator(&b)
}

/// The generalized Campbell-Hausdorff exponential in `p` generators:
///
/// ```text
/// exp(sum a_i + 1/2 sum [a_i,a_j] + 1/6 sum [a_i,[a_j,a_k]]
///     + 1/6 sum [[a_i,a_j],a_k] + 1/12 sum [a_i,[a_i,a_j]]
///     + 1/12 sum [a_j,[a_j,a_i]])
/// ```
pub fn bch_operator(p: usize, degree: usize) -> NcSeries {
    assert!(p >= 1, "arity must be positive");
    assert!(degree >= 3, "truncation degree must be at least 3");
    assert!(p <= u8::MAX as usize);
    let gens: Vec<NcSeries> = (0..p as u8)
        .map(|i| NcSeries::generator(i, degree))
        .collect();
    let mut s = NcSeries::zero(degree);
    for g in &gens {
        s = s.add(g);
    }
    for i in 0..p {
        for j in i + 1..p {
            s = s.add(&gens[i].commutator(&gens[j]).scale(&rat(1, 2)));
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            for k in j + 1..p {
                s = s.add(
                    &gens[i]
                        .commutator(&gens[j].commutator(&gens[k]))
                        .scale(&rat(1, 6)),
                );
                s = s.add(
                    &gens[i]
                        .commutator(&gens[j])
                        .commutator(&gens[k])
                        .scale(&rat(1, 6)),
                );
            }
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            s = s.add(
                &gens[i]
                    .commutator(&gens[i].commutator(&gens[j]))
                    .scale(&rat(1, 12)),
            );
            s = s.add(
                &gens[j]
                    .commutator(&gens[j].commutator(&gens[i]))
                    .scale(&rat(1, 12)),
            );
        }
    }
    s.exp()
}

/// Product `exp(a_1) ... exp(a_p)` truncated at `degree`.
pub fn exp_product(p: usize, degree: usize) -> NcSeries {
    let mut prod = NcSeries::one(degree);
    for i in 0..p as u8 {
        prod = prod.mul(&NcSeries::generator(i, degree).exp());
    }
    prod
}
