//! The single-clasper surgery formula.
//!
//! A clasper is described by the equivariant pairing of its three leaves
//! and an externally supplied degree-2 term `mu`.  Surgery changes the
//! 2-loop part by half the contraction of the clasper against a parallel
//! copy, plus `mu`.

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::contraction::{contract_tripods, ContractionError, Leg, PairingMatrix};
use crate::laurent::LaurentPoly;
use crate::theta::ThetaElement;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("leaf pairing must be a 3x3 hermitian matrix")]
    BadPairing,
    #[error(transparent)]
    Contraction(#[from] ContractionError),
}

/// Equivariant data of a single clasper: the hermitian leaf pairing
/// (numerators over `delta`) and the contracted Milnor term.
#[derive(Debug, Clone)]
pub struct ClasperData {
    pub leaf_pairing: Vec<Vec<LaurentPoly>>,
    pub delta: LaurentPoly,
    pub mu: ThetaElement,
}

impl ClasperData {
    pub fn new(
        leaf_pairing: Vec<Vec<LaurentPoly>>,
        delta: LaurentPoly,
        mu: ThetaElement,
    ) -> Result<Self, SurgeryError> {
        if leaf_pairing.len() != 3 || leaf_pairing.iter().any(|r| r.len() != 3) {
            return Err(SurgeryError::BadPairing);
        }
        for i in 0..3 {
            for j in 0..3 {
                if leaf_pairing[j][i] != leaf_pairing[i][j].involute() {
                    return Err(SurgeryError::BadPairing);
                }
            }
        }
        Ok(Self { leaf_pairing, delta, mu })
    }

    /// The 6x6 pairing of the clasper together with its parallel copy; the
    /// push-off inherits the pairings unchanged.
    fn doubled_pairing(&self) -> Result<PairingMatrix, SurgeryError> {
        let mut num = vec![vec![LaurentPoly::zero(); 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                num[i][j] = self.leaf_pairing[i % 3][j % 3].clone();
            }
        }
        Ok(PairingMatrix::from_parts(num, self.delta.clone())?)
    }
}

/// Sum of all 15 ways of contracting the six leaves of the clasper and its
/// parallel copy, glued with the negative of the pairing.
pub fn pairing_contraction(c: &ClasperData) -> Result<ThetaElement, SurgeryError> {
    let pairing = c.doubled_pairing()?;
    let t1 = [Leg::unit(0), Leg::unit(1), Leg::unit(2)];
    let t2 = [Leg::unit(3), Leg::unit(4), Leg::unit(5)];
    Ok(contract_tripods(&BigRational::one(), &t1, &t2, &pairing)?)
}

/// Change of the 2-loop part under surgery on the clasper:
/// half the pairing contraction plus the Milnor term.
pub fn surgery_delta(c: &ClasperData) -> Result<ThetaElement, SurgeryError> {
    let half = BigRational::new(1.into(), 2.into());
    let contraction = pairing_contraction(c)?.scale(&half);
    Ok(contraction.add(&c.mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn zero3() -> Vec<Vec<LaurentPoly>> {
        vec![vec![LaurentPoly::zero(); 3]; 3]
    }

    fn identity3() -> Vec<Vec<LaurentPoly>> {
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn zero_pairing_returns_mu() {
        let mu = ThetaElement::basis(2, 1, rat(3, 2));
        let c = ClasperData::new(zero3(), LaurentPoly::one(), mu.clone()).unwrap();
        assert!(pairing_contraction(&c).unwrap().is_zero());
        let d = surgery_delta(&c).unwrap();
        assert_eq!(d.coeff(2, 1), rat(3, 2));
    }

    #[test]
    fn identity_pairing_regression() {
        // pinned by the 15-matching oracle: only the diagonal cross matching
        // survives, giving -theta(1,1)
        let c = ClasperData::new(identity3(), LaurentPoly::one(), ThetaElement::zero()).unwrap();
        let r = pairing_contraction(&c).unwrap();
        assert_eq!(r.coeff(0, 0), rat(-1, 1));
        assert_eq!(r.iter().count(), 1);
        // with mu = 0 the surgery delta is half of it
        let d = surgery_delta(&c).unwrap();
        assert_eq!(d.coeff(0, 0), rat(-1, 2));
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = zero3();
        m[0][1] = p("t");
        m[1][0] = p("t"); // should be t^-1
        assert!(matches!(
            ClasperData::new(m, LaurentPoly::one(), ThetaElement::zero()),
            Err(SurgeryError::BadPairing)
        ));
    }

    #[test]
    fn contraction_is_cubic_in_the_pairing() {
        // every matching uses exactly three pairing entries
        let mut m = identity3();
        m[0][1] = p("t^2");
        m[1][0] = p("t^-2");
        m[1][2] = p("-t");
        m[2][1] = p("-t^-1");
        let c1 = ClasperData::new(m.clone(), LaurentPoly::one(), ThetaElement::zero()).unwrap();
        let scaled: Vec<Vec<LaurentPoly>> = m
            .iter()
            .map(|row| row.iter().map(|e| e.scale(&rat(3, 1))).collect())
            .collect();
        let c3 = ClasperData::new(scaled, LaurentPoly::one(), ThetaElement::zero()).unwrap();
        let r1 = pairing_contraction(&c1).unwrap();
        let r3 = pairing_contraction(&c3).unwrap();
        assert_eq!(r3, r1.scale(&rat(27, 1)));
    }

    #[test]
    fn integer_pairing_lands_in_half_lattice() {
        // mirrors the half-integrality statement for S-equivalent pairs
        let cases: Vec<Vec<Vec<LaurentPoly>>> = vec![
            identity3(),
            {
                let mut m = identity3();
                m[0][1] = p("t^3");
                m[1][0] = p("t^-3");
                m
            },
            {
                let mut m = zero3();
                m[0][0] = p("-1");
                m[1][1] = p("1");
                m[2][2] = p("1");
                m[0][2] = p("-t^2");
                m[2][0] = p("-t^-2");
                m
            },
        ];
        for m in cases {
            let c = ClasperData::new(m, LaurentPoly::one(), ThetaElement::zero()).unwrap();
            let d = surgery_delta(&c).unwrap();
            assert!(d.in_lattice(2).unwrap(), "delta = {}", d);
        }
    }
}
