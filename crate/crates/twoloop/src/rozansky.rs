//! The monomial-matrix pipeline: assemble the 2-loop exponent of a surgery
//! presentation from its equivariant linking matrix, Gaussian-integrate it,
//! and report integrality verdicts.
//!
//! A matrix in the scan class is hermitian with entries `0` or `±t^k`,
//! diagonal `±1`, and determinant `±1` at `t = 1`.  The exponent collects
//! struts, wheels, ladders and tripods; merging the elementary links along
//! a component follows the generalized Campbell-Hausdorff operator, whose
//! degree-3 brackets enter the glued exponent at half weight (the
//! coefficient is pinned by the integrality of the Casson value across the
//! scan class).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::contraction::{
    cleared_theta_class, contract_h, contract_tripods, contract_wheel2, invert_hermitian,
    ContractionError, DiagramExponent, Leg, LeggedDiagram, PairingMatrix,
};
use crate::laurent::{rat, LaurentPoly};
use crate::theta::{ThetaElement, ThetaError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RozanskyError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("entry ({0},{1}) is not zero or a signed monomial")]
    NotMonomial(usize, usize),
    #[error("diagonal entry {0} is not +1 or -1")]
    BadDiagonal(usize),
    #[error("determinant at t = 1 is not a unit")]
    NotUnimodular,
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Hermitian matrix with entries `0` or `±t^k`, diagonal `±1`, invertible
/// over the integers at `t = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    n: usize,
    entries: Vec<Vec<LaurentPoly>>,
}

impl MonomialMatrix {
    pub fn new(entries: Vec<Vec<LaurentPoly>>) -> Result<Self, RozanskyError> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(RozanskyError::NotSquare);
        }
        for i in 0..n {
            for j in 0..n {
                if !entries[i][j].is_zero() && entries[i][j].as_unit_monomial().is_none() {
                    return Err(RozanskyError::NotMonomial(i, j));
                }
                if entries[j][i] != entries[i][j].involute() {
                    return Err(RozanskyError::NotHermitian);
                }
            }
            match entries[i][i].as_unit_monomial() {
                Some((_, 0)) => {}
                _ => return Err(RozanskyError::BadDiagonal(i)),
            }
        }
        let m = Self { n, entries };
        if !m.det_at_one_is_unit() {
            return Err(RozanskyError::NotUnimodular);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Vec<Vec<LaurentPoly>> {
        &self.entries
    }

    /// Framing of the i-th component: the diagonal entry at `t = 1`.
    pub fn framing(&self, i: usize) -> i64 {
        self.entries[i][i].as_unit_monomial().unwrap().0
    }

    fn at_one(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entries[i][j].eval_one()).collect())
            .collect()
    }

    fn det_at_one_is_unit(&self) -> bool {
        det_rational(&mut self.at_one()).abs().is_one()
    }

    /// Signature of the integer symmetric matrix `W(1)`, by exact
    /// congruence diagonalization.
    pub fn signature(&self) -> i64 {
        let mut a = self.at_one();
        let n = self.n;
        let mut alive: Vec<usize> = (0..n).collect();
        let mut sig = 0i64;
        while !alive.is_empty() {
            let pivot = alive.iter().copied().find(|&i| !a[i][i].is_zero());
            let Some(p) = pivot else {
                // all alive diagonal entries vanish: mix a nonzero off-pair in
                let mut mixed = false;
                'outer: for &i in &alive {
                    for &j in &alive {
                        if i != j && !a[i][j].is_zero() {
                            for c in 0..n {
                                let v = a[j][c].clone();
                                a[i][c] += v;
                            }
                            for r in 0..n {
                                let v = a[r][j].clone();
                                a[r][i] += v;
                            }
                            mixed = true;
                            break 'outer;
                        }
                    }
                }
                if !mixed {
                    break;
                }
                continue;
            };
            sig += if a[p][p].is_positive() { 1 } else { -1 };
            let piv = a[p][p].clone();
            let rest: Vec<usize> = alive.into_iter().filter(|&i| i != p).collect();
            for &i in &rest {
                let f = &a[i][p] / &piv;
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = &a[p][c] * &f;
                    a[i][c] -= v;
                }
                for r in 0..n {
                    let v = &a[r][p] * &f;
                    a[r][i] -= v;
                }
            }
            alive = rest;
        }
        sig
    }

    /// Compact one-line digest for reports: rows separated by `|`,
    /// entries by `;`.
    pub fn digest(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.to_string().replace(' ', ""))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .collect();
        format!("[{}]", rows.join("|"))
    }
}

fn det_rational(a: &mut [Vec<BigRational>]) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for c in col..n {
                let v = &a[col][c] * &f;
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Integrality verdicts attached to a 2-loop value.
#[derive(Debug, Clone)]
pub struct Verdicts {
    pub value: ThetaElement,
    pub in_twelfth: bool,
    pub in_half: bool,
    pub casson: BigRational,
}

impl Verdicts {
    pub fn casson_is_integer(&self) -> bool {
        self.casson.is_integer()
    }
}

/// The part of the elementary-link integral linked to both components:
/// `exp(eps strut + (eps^2/8) wheel + ((eps + 2 eps^3)/24) ladder)`.
pub fn elementary_link_term(eps: i64, a: usize, b: usize) -> DiagramExponent {
    assert!(eps == 1 || eps == -1, "crossing sign must be +1 or -1");
    let mut out = DiagramExponent::default();
    out.push(
        rat(eps, 1),
        LeggedDiagram::Strut { legs: [Leg::unit(a), Leg::unit(b)] },
    );
    out.push(
        rat(eps * eps, 8),
        LeggedDiagram::Wheel2 { legs: [Leg::unit(a), Leg::unit(b)] },
    );
    out.push(
        rat(eps + 2 * eps * eps * eps, 24),
        LeggedDiagram::HGraph {
            top: [Leg::unit(a), Leg::unit(b)],
            bottom: [Leg::unit(a), Leg::unit(b)],
        },
    );
    out
}

fn stripped(w: &LaurentPoly) -> (i64, LaurentPoly) {
    let (sign, k) = w.as_unit_monomial().expect("monomial entry");
    (sign, LaurentPoly::int_monomial(1, k))
}

/// The merged 2-loop exponent of the presentation: struts, wheels, the
/// elementary-link ladders and the Campbell-Hausdorff tripods and ladders.
pub fn build_exponent(w: &MonomialMatrix) -> DiagramExponent {
    let n = w.size();
    let mut out = DiagramExponent::default();
    // struts (the quadratic part, kept for bookkeeping)
    for i in 0..n {
        for j in i..n {
            if !w.entry(i, j).is_zero() {
                out.push(
                    BigRational::one(),
                    LeggedDiagram::Strut {
                        legs: [Leg::unit(i), Leg::new(j, w.entry(i, j).clone())],
                    },
                );
            }
        }
    }
    // isolated-component normalization wheels
    for i in 0..n {
        out.push(
            rat(1, 48),
            LeggedDiagram::Wheel2 { legs: [Leg::unit(i), Leg::unit(i)] },
        );
    }
    // elementary-link wheels and ladders, signs in the coefficient and the
    // winding monomial on the legs of the second component
    for i in 0..n {
        for j in i + 1..n {
            if w.entry(i, j).is_zero() {
                continue;
            }
            let (sign, mag) = stripped(w.entry(i, j));
            out.push(
                rat(1, 8),
                LeggedDiagram::Wheel2 {
                    legs: [Leg::unit(i), Leg::new(j, mag.clone())],
                },
            );
            out.push(
                rat(sign, 8),
                LeggedDiagram::HGraph {
                    top: [Leg::unit(i), Leg::new(j, mag.clone())],
                    bottom: [Leg::unit(i), Leg::new(j, mag)],
                },
            );
        }
    }
    // Campbell-Hausdorff merge along each component
    for c in 0..n {
        let linked: Vec<usize> = (0..n).filter(|&u| u != c && !w.entry(c, u).is_zero()).collect();
        let leg = |u: usize| Leg::new(u, w.entry(c, u).clone());
        // degree 2: tripods
        for a in 0..linked.len() {
            for b in a + 1..linked.len() {
                out.push(
                    rat(1, 2),
                    LeggedDiagram::Tripod {
                        legs: [Leg::unit(c), leg(linked[a]), leg(linked[b])],
                    },
                );
            }
        }
        // degree 3: ladders, at half the operator coefficients
        for x in 0..linked.len() {
            for y in x + 1..linked.len() {
                for z in y + 1..linked.len() {
                    let (j, k, l) = (linked[x], linked[y], linked[z]);
                    // [a_j, [a_k, a_l]]
                    out.push(
                        rat(1, 12),
                        LeggedDiagram::HGraph {
                            top: [leg(j), Leg::unit(c)],
                            bottom: [leg(k), leg(l)],
                        },
                    );
                    // [[a_j, a_k], a_l]
                    out.push(
                        rat(1, 12),
                        LeggedDiagram::HGraph {
                            top: [Leg::unit(c), leg(l)],
                            bottom: [leg(j), leg(k)],
                        },
                    );
                }
            }
        }
        for x in 0..linked.len() {
            for y in x + 1..linked.len() {
                let (j, k) = (linked[x], linked[y]);
                // [a_j, [a_j, a_k]] and [a_k, [a_k, a_j]]
                out.push(
                    rat(1, 24),
                    LeggedDiagram::HGraph {
                        top: [leg(j), Leg::unit(c)],
                        bottom: [leg(j), leg(k)],
                    },
                );
                out.push(
                    rat(1, 24),
                    LeggedDiagram::HGraph {
                        top: [leg(k), Leg::unit(c)],
                        bottom: [leg(k), leg(j)],
                    },
                );
            }
        }
    }
    out
}

/// Framing and normalization corrections, plus the explicit signature
/// multiple of the theta class.
pub struct FramingFactor {
    pub exponent: DiagramExponent,
    pub theta_coeff: BigRational,
}

pub fn framing_factor(w: &MonomialMatrix) -> FramingFactor {
    let n = w.size();
    let mut exponent = DiagramExponent::default();
    for i in 0..n {
        let wi = w.framing(i);
        exponent.push(
            rat(wi, 2),
            LeggedDiagram::Strut { legs: [Leg::unit(i), Leg::unit(i)] },
        );
        for j in 0..n {
            if j != i && !w.entry(i, j).is_zero() {
                exponent.push(
                    rat(wi, 24),
                    LeggedDiagram::Wheel2 {
                        legs: [Leg::unit(i), Leg::new(j, w.entry(i, j).clone())],
                    },
                );
            }
        }
        exponent.push(
            rat(wi * wi + 1, 48),
            LeggedDiagram::Wheel2 { legs: [Leg::unit(i), Leg::unit(i)] },
        );
    }
    FramingFactor {
        exponent,
        theta_coeff: rat(w.signature(), 16),
    }
}

/// Gaussian-integrate the assembled exponent at 2-loop order and compute
/// the integrality verdicts.
pub fn phi(w: &MonomialMatrix) -> Result<Verdicts, RozanskyError> {
    let pairing = invert_hermitian(w.entries())?;
    let mut exponent = build_exponent(w);
    let framing = framing_factor(w);
    exponent.extend(framing.exponent);
    let value = integrate(&exponent, &framing.theta_coeff, &pairing)?;
    let in_twelfth = value.in_lattice(12)?;
    let in_half = value.in_lattice(2)?;
    let casson = value.eval_t_one() * BigRational::from_integer(BigInt::from(2));
    Ok(Verdicts { value, in_twelfth, in_half, casson })
}

fn integrate(
    exponent: &DiagramExponent,
    theta_coeff: &BigRational,
    pairing: &PairingMatrix,
) -> Result<ThetaElement, RozanskyError> {
    let den = pairing.den().clone();
    let mut value = ThetaElement::zero().with_denom(den.clone());
    let mut tripods: Vec<(&BigRational, &[Leg; 3])> = Vec::new();
    for (coeff, diagram) in &exponent.terms {
        match diagram {
            LeggedDiagram::Strut { .. } => {}
            LeggedDiagram::Wheel2 { legs } => {
                value = value.add(&contract_wheel2(coeff, legs, pairing)?);
            }
            LeggedDiagram::HGraph { top, bottom } => {
                value = value.add(&contract_h(coeff, top, bottom, pairing)?);
            }
            LeggedDiagram::Tripod { legs } => tripods.push((coeff, legs)),
        }
    }
    for a in 0..tripods.len() {
        for b in a..tripods.len() {
            let c = if a == b {
                tripods[a].0 * tripods[b].0 / BigRational::from_integer(2.into())
            } else {
                tripods[a].0 * tripods[b].0
            };
            value = value.add(&contract_tripods(&c, tripods[a].1, tripods[b].1, pairing)?);
        }
    }
    value = value.add(&cleared_theta_class(&den).scale(theta_coeff));
    Ok(value)
}

// ---------------------------------------------------------------------------
// Enumeration and scanning
// ---------------------------------------------------------------------------

/// All scan-class matrices of the given size with off-diagonal exponents
/// bounded by `max_exp`, in a deterministic lexicographic order.
pub struct MatrixEnumerator {
    n: usize,
    diag_choices: u64,
    off_options: Vec<LaurentPoly>,
    slots: Vec<(usize, usize)>,
    index: u64,
    total: u64,
}

impl MatrixEnumerator {
    pub fn new(n: usize, max_exp: i64) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        assert!(max_exp >= 0, "exponent bound must be nonnegative");
        let mut off_options = vec![LaurentPoly::zero()];
        for e in -max_exp..=max_exp {
            off_options.push(LaurentPoly::int_monomial(1, e));
            off_options.push(LaurentPoly::int_monomial(-1, e));
        }
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let diag_choices = 1u64 << n;
        let total = diag_choices * (off_options.len() as u64).pow(slots.len() as u32);
        Self { n, diag_choices, off_options, slots, index: 0, total }
    }

    fn decode(&self, mut idx: u64) -> Vec<Vec<LaurentPoly>> {
        let n = self.n;
        let mut m = vec![vec![LaurentPoly::zero(); n]; n];
        let diag = idx % self.diag_choices;
        idx /= self.diag_choices;
        for (i, row) in m.iter_mut().enumerate() {
            let sign = if diag & (1 << i) == 0 { 1 } else { -1 };
            row[i] = LaurentPoly::int_monomial(sign, 0);
        }
        for &(i, j) in &self.slots {
            let choice = (idx % self.off_options.len() as u64) as usize;
            idx /= self.off_options.len() as u64;
            m[i][j] = self.off_options[choice].clone();
            m[j][i] = self.off_options[choice].involute();
        }
        m
    }
}

impl Iterator for MatrixEnumerator {
    type Item = MonomialMatrix;

    fn next(&mut self) -> Option<MonomialMatrix> {
        while self.index < self.total {
            let entries = self.decode(self.index);
            self.index += 1;
            if let Ok(m) = MonomialMatrix::new(entries) {
                return Some(m);
            }
        }
        None
    }
}

pub fn enumerate_matrices(n: usize, max_exp: i64) -> MatrixEnumerator {
    MatrixEnumerator::new(n, max_exp)
}

/// Scan outcome: the deterministic report plus the failure lists.  A
/// twelfth failure contradicts the integrality theorem and signals a bug.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub n: usize,
    pub max_exp: i64,
    pub total: usize,
    pub twelfth_failures: Vec<String>,
    pub casson_failures: Vec<String>,
    pub half_failures: Vec<String>,
    pub lines: Vec<String>,
}

impl ScanReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# scan n={} max_exp={}", self.n, self.max_exp);
        let _ = writeln!(out, "# total={}", self.total);
        let _ = writeln!(
            out,
            "# twelfth_failures={} casson_failures={} half_failures={}",
            self.twelfth_failures.len(),
            self.casson_failures.len(),
            self.half_failures.len()
        );
        for l in &self.lines {
            let _ = writeln!(out, "{}", l);
        }
        out
    }
}

/// Run `phi` over the whole enumeration; independent evaluations are
/// distributed over the rayon pool, aggregation stays in enumeration order.
pub fn scan(n: usize, max_exp: i64) -> Result<ScanReport, RozanskyError> {
    let mats: Vec<MonomialMatrix> = enumerate_matrices(n, max_exp).collect();
    let verdicts: Vec<(String, Verdicts)> = mats
        .par_iter()
        .map(|m| phi(m).map(|v| (m.digest(), v)))
        .collect::<Result<_, _>>()?;
    let mut report = ScanReport {
        n,
        max_exp,
        total: verdicts.len(),
        twelfth_failures: Vec::new(),
        casson_failures: Vec::new(),
        half_failures: Vec::new(),
        lines: Vec::new(),
    };
    for (digest, v) in &verdicts {
        report.lines.push(format!(
            "{} lambda={} in_twelfth={} in_half={}",
            digest, v.casson, v.in_twelfth, v.in_half
        ));
        if !v.in_twelfth {
            report.twelfth_failures.push(digest.clone());
        }
        if !v.casson_is_integer() {
            report.casson_failures.push(digest.clone());
        }
        if !v.in_half {
            report
                .half_failures
                .push(format!("{} value: {}", digest, v.value));
        }
    }
    Ok(report)
}
