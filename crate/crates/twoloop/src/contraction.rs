//! Formal Gaussian integration at 2-loop order.
//!
//! Legged diagrams (struts, two-legged wheels, tripods and the four-legged
//! ladder) carry component labels and Laurent colors.  Contraction glues
//! legs pairwise: the edge glued from legs `x` on component `i` and `y` on
//! component `j` carries the fraction
//!
//! ```text
//!     -(color of x) * entry(i, j) * involute(color of y)
//! ```
//!
//! over the pairing denominator, oriented from `x`'s vertex to `y`'s.
//! Closed results are reduced to canonical theta form; dumbbells arising
//! from a self-gluing at a trivalent vertex reduce through
//! [`crate::theta::reduce_dumbbell`]'s move, which also realizes the
//! antisymmetry rule for loop edges.
//!
//! Cyclic orders: tripod legs are listed in cyclic order; the ladder
//! `HGraph { top, bottom }` has orders `(top.0, central, top.1)` at the top
//! vertex and `(bottom.1, central, bottom.0)` at the bottom one, i.e. the
//! planar picture with the `.0` legs on one side.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::theta::{RawTriple, ThetaElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContractionError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("matrix is not square")]
    NotSquare,
    #[error("leg component {0} out of range for pairing of size {1}")]
    ComponentOutOfRange(usize, usize),
    #[error("diagram shape does not match its leg count")]
    ShapeMismatch,
}

/// A diagram leg: the component it ends on and its color, read outward
/// from the internal vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub component: usize,
    pub color: LaurentPoly,
}

impl Leg {
    pub fn new(component: usize, color: LaurentPoly) -> Self {
        Self { component, color }
    }

    pub fn unit(component: usize) -> Self {
        Self::new(component, LaurentPoly::one())
    }
}

/// The legged shapes that occur at 2-loop order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeggedDiagram {
    /// Single edge with two legs; quadratic part of an exponent.
    Strut { legs: [Leg; 2] },
    /// Circle with two legs.
    Wheel2 { legs: [Leg; 2] },
    /// One trivalent vertex, legs in cyclic order.
    Tripod { legs: [Leg; 3] },
    /// Two trivalent vertices joined by an (uncolored) edge, two legs each.
    HGraph { top: [Leg; 2], bottom: [Leg; 2] },
}

/// Formal rational combination of legged diagrams, read inside an
/// exponential.
#[derive(Debug, Clone, Default)]
pub struct DiagramExponent {
    pub terms: Vec<(BigRational, LeggedDiagram)>,
}

impl DiagramExponent {
    pub fn push(&mut self, coeff: BigRational, diagram: LeggedDiagram) {
        if !coeff.is_zero() {
            self.terms.push((coeff, diagram));
        }
    }

    pub fn extend(&mut self, other: DiagramExponent) {
        self.terms.extend(other.terms);
    }
}

/// Hermitian matrix of Laurent fractions `num[i][j] / den` used to glue
/// legs.  For the monomial-matrix pipeline this is the inverse equivariant
/// linking matrix; for clasper surgery it is the leaf pairing itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    n: usize,
    num: Vec<Vec<LaurentPoly>>,
    den: LaurentPoly,
}

impl PairingMatrix {
    /// Build from explicit numerators over a common denominator.
    pub fn from_parts(
        num: Vec<Vec<LaurentPoly>>,
        den: LaurentPoly,
    ) -> Result<Self, ContractionError> {
        let n = num.len();
        if num.iter().any(|row| row.len() != n) {
            return Err(ContractionError::NotSquare);
        }
        if den.is_zero() {
            return Err(ContractionError::Singular);
        }
        for i in 0..n {
            for j in 0..n {
                if num[j][i] != num[i][j].involute() {
                    return Err(ContractionError::NotHermitian);
                }
            }
        }
        Ok(Self { n, num, den })
    }

    pub fn identity(n: usize) -> Self {
        let num = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
                    .collect()
            })
            .collect();
        Self { n, num, den: LaurentPoly::one() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn num_entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.num[i][j]
    }
}

/// Determinant by cofactor expansion; matrices here are tiny.
pub fn matrix_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = LaurentPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<LaurentPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &matrix_det(&sub);
        det = if j % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

fn matrix_adjugate(m: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![LaurentPoly::one()]];
    }
    let mut adj = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let sub: Vec<Vec<LaurentPoly>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let mut co = matrix_det(&sub);
            if (i + j) % 2 == 1 {
                co = -&co;
            }
            adj[j][i] = co;
        }
    }
    adj
}

/// Adjugate-over-determinant inverse of a hermitian Laurent matrix, with
/// the denominator normalized to be positive at `t = 1` and the product
/// `W * W^-1 = id` verified exactly.
pub fn invert_hermitian(w: &[Vec<LaurentPoly>]) -> Result<PairingMatrix, ContractionError> {
    let n = w.len();
    if w.iter().any(|row| row.len() != n) {
        return Err(ContractionError::NotSquare);
    }
    for i in 0..n {
        for j in 0..n {
            if w[j][i] != w[i][j].involute() {
                return Err(ContractionError::NotHermitian);
            }
        }
    }
    let det = matrix_det(w);
    if det.is_zero() {
        return Err(ContractionError::Singular);
    }
    let mut adj = matrix_adjugate(w);
    let mut den = det;
    let dv = den.eval_one();
    if dv.is_negative() {
        den = -&den;
        for row in &mut adj {
            for e in row.iter_mut() {
                *e = -&*e;
            }
        }
    }
    // hermitian input gives a symmetric determinant and hermitian adjugate
    debug_assert!(den.is_symmetric() || dv.is_zero());
    for i in 0..n {
        for j in 0..n {
            let mut acc = LaurentPoly::zero();
            for (k, adj_row) in adj.iter().enumerate() {
                acc = &acc + &(&w[i][k] * &adj_row[j]);
            }
            let expect = if i == j { den.clone() } else { LaurentPoly::zero() };
            assert_eq!(acc, expect, "adjugate inverse failed to verify");
        }
    }
    PairingMatrix::from_parts(adj, den)
}

/// Color numerator of the edge glued from legs `x` and `y`:
/// `-x.color * num(i,j) * involute(y.color)` over the pairing denominator.
pub fn contract_pair(x: &Leg, y: &Leg, pairing: &PairingMatrix) -> LaurentPoly {
    -&(&(&x.color * pairing.num_entry(x.component, y.component)) * &y.color.involute())
}

fn check_components<'a>(
    legs: impl IntoIterator<Item = &'a Leg>,
    pairing: &PairingMatrix,
) -> Result<(), ContractionError> {
    for leg in legs {
        if leg.component >= pairing.size() {
            return Err(ContractionError::ComponentOutOfRange(
                leg.component,
                pairing.size(),
            ));
        }
    }
    Ok(())
}

/// A slot of the generalized tripod used by the matching enumerator: either
/// a real leg (glued through the pairing) or an internal edge end.
enum Slot<'a> {
    Leg(&'a Leg),
    Internal,
}

/// One perfect matching of the six slots of a tripod pair: either a cross
/// matching (a signed bijection of slots) or a pair of self-gluings with
/// one cross edge between the free slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Matching {
    Cross { perm: [usize; 3], sign: i64 },
    Selves { free_a: usize, free_b: usize },
}

/// All perfect matchings compatible with an optional forced slot pair
/// (the internal edge of a ladder): 15 in general, 3 when forced.
fn matchings(forced: Option<(usize, usize)>) -> Vec<Matching> {
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
    ];
    let mut out = Vec::new();
    for (perm, sign) in PERMS {
        if let Some((fa, fb)) = forced {
            if perm[fa] != fb {
                continue;
            }
        }
        out.push(Matching::Cross { perm, sign });
    }
    for free_a in 0..3 {
        for free_b in 0..3 {
            if let Some(f) = forced {
                if (free_a, free_b) != f {
                    continue;
                }
            }
            out.push(Matching::Selves { free_a, free_b });
        }
    }
    out
}

/// Sum over the perfect matchings of two tripods' slots.  `forced` names a
/// pair of slots joined by an internal edge of color `internal` (the ladder
/// case); without it all 15 matchings of the six legs are visited.
///
/// Cross matchings contribute `sign(sigma) * theta(colors)`; matchings with
/// a self-gluing reduce through the dumbbell move with the cross edge's
/// value at 1 as prefactor.
fn contract_slots(
    a: &[Slot; 3],
    b: &[Slot; 3],
    forced: Option<(usize, usize)>,
    internal: &LaurentPoly,
    pairing: &PairingMatrix,
) -> ThetaElement {
    let den = pairing.den();
    let dv = den.eval_one();
    assert!(!dv.is_zero(), "pairing denominator vanishes at t = 1");
    let mut acc = ThetaElement::zero().with_denom(den.clone());

    let glue = |x: &Slot, y: &Slot| -> LaurentPoly {
        match (x, y) {
            (Slot::Leg(lx), Slot::Leg(ly)) => contract_pair(lx, ly, pairing),
            // an internal edge keeps its polynomial color; cleared by den
            (Slot::Internal, Slot::Internal) => internal * den,
            _ => unreachable!("internal slots are only glued to each other"),
        }
    };

    for m in matchings(forced) {
        match m {
            Matching::Cross { perm, sign } => {
                let c0 = glue(&a[0], &b[perm[0]]);
                let c1 = glue(&a[1], &b[perm[1]]);
                let c2 = glue(&a[2], &b[perm[2]]);
                let triple = RawTriple::new(c0, c1, c2);
                let sign = BigRational::from_integer(sign.into());
                acc = acc.add(
                    &ThetaElement::from_triple(&triple)
                        .scale(&sign)
                        .with_denom(den.clone()),
                );
            }
            Matching::Selves { free_a, free_b } => {
                if matches!(a[free_a], Slot::Internal) != matches!(b[free_b], Slot::Internal) {
                    continue;
                }
                let (ja, ka) = ((free_a + 1) % 3, (free_a + 2) % 3);
                let (jb, kb) = ((free_b + 1) % 3, (free_b + 2) % 3);
                if matches!(a[ja], Slot::Internal)
                    || matches!(a[ka], Slot::Internal)
                    || matches!(b[jb], Slot::Internal)
                    || matches!(b[kb], Slot::Internal)
                {
                    continue;
                }
                let loop_a = glue(&a[ja], &a[ka]);
                let loop_b = glue(&b[jb], &b[kb]);
                let central = glue(&a[free_a], &b[free_b]);
                let eps = central.eval_one() / &dv;
                if eps.is_zero() {
                    continue;
                }
                let triple = RawTriple::new(loop_a, &loop_b.involute() - &loop_b, den.clone());
                acc = acc.add(
                    &ThetaElement::from_triple(&triple)
                        .scale(&eps)
                        .with_denom(den.clone()),
                );
            }
        }
    }
    acc
}

/// Close the two legs of a 2-wheel onto each other.
pub fn contract_wheel2(
    coeff: &BigRational,
    legs: &[Leg; 2],
    pairing: &PairingMatrix,
) -> Result<ThetaElement, ContractionError> {
    check_components(legs.iter(), pairing)?;
    let den = pairing.den();
    let glued = contract_pair(&legs[0], &legs[1], pairing);
    let triple = RawTriple::new(den.clone(), den.clone(), glued);
    Ok(ThetaElement::from_triple(&triple)
        .scale(coeff)
        .with_denom(den.clone()))
}

/// Close the four legs of a ladder; exactly 3 matchings.
pub fn contract_h(
    coeff: &BigRational,
    top: &[Leg; 2],
    bottom: &[Leg; 2],
    pairing: &PairingMatrix,
) -> Result<ThetaElement, ContractionError> {
    check_components(top.iter().chain(bottom.iter()), pairing)?;
    let a = [Slot::Leg(&top[0]), Slot::Internal, Slot::Leg(&top[1])];
    let b = [Slot::Leg(&bottom[1]), Slot::Internal, Slot::Leg(&bottom[0])];
    let one = LaurentPoly::one();
    Ok(contract_slots(&a, &b, Some((1, 1)), &one, pairing).scale(coeff))
}

/// Sum over all 15 matchings of two tripods' legs.
pub fn contract_tripods(
    coeff: &BigRational,
    d1: &[Leg; 3],
    d2: &[Leg; 3],
    pairing: &PairingMatrix,
) -> Result<ThetaElement, ContractionError> {
    check_components(d1.iter().chain(d2.iter()), pairing)?;
    let a = [Slot::Leg(&d1[0]), Slot::Leg(&d1[1]), Slot::Leg(&d1[2])];
    let b = [Slot::Leg(&d2[0]), Slot::Leg(&d2[1]), Slot::Leg(&d2[2])];
    let one = LaurentPoly::one();
    Ok(contract_slots(&a, &b, None, &one, pairing).scale(coeff))
}

/// Contract one term of a diagram exponent.  Struts are the quadratic part
/// (the measure itself) and contribute nothing.
pub fn contract_diagram(
    coeff: &BigRational,
    d: &LeggedDiagram,
    pairing: &PairingMatrix,
) -> Result<ThetaElement, ContractionError> {
    match d {
        LeggedDiagram::Strut { .. } => Ok(ThetaElement::zero().with_denom(pairing.den().clone())),
        LeggedDiagram::Wheel2 { legs } => contract_wheel2(coeff, legs, pairing),
        LeggedDiagram::HGraph { top, bottom } => contract_h(coeff, top, bottom, pairing),
        LeggedDiagram::Tripod { .. } => Err(ContractionError::ShapeMismatch),
    }
}

/// The closed mod-2 form of the square of a tripod colored `a_i, a_j, a_k`
/// on components `i, j, k`:
///
/// ```text
/// eps(p_ii a_i abar_i) theta(a_j p_jk abar_k) + (cyclic permutations)
/// ```
///
/// reduced mod 2; comparisons against the exhaustive contraction are made
/// modulo the class of the unlabeled theta.
pub fn y_square_mod2(
    colors: &[LaurentPoly; 3],
    components: &[usize; 3],
    pairing: &PairingMatrix,
) -> Result<ThetaElement, ContractionError> {
    for &c in components {
        if c >= pairing.size() {
            return Err(ContractionError::ComponentOutOfRange(c, pairing.size()));
        }
    }
    let den = pairing.den();
    let dv = den.eval_one();
    assert!(!dv.is_zero(), "pairing denominator vanishes at t = 1");
    let mut acc = ThetaElement::zero().with_denom(den.clone());
    for rot in 0..3 {
        let (i, j, k) = (rot % 3, (rot + 1) % 3, (rot + 2) % 3);
        let (ci, cj, ck) = (components[i], components[j], components[k]);
        let diag = &(pairing.num_entry(ci, ci) * &colors[i]) * &colors[i].involute();
        let eps = diag.eval_one() / &dv;
        let edge = &(&colors[j] * pairing.num_entry(cj, ck)) * &colors[k].involute();
        let triple = RawTriple::new(edge, den.clone(), den.clone());
        acc = acc.add(&ThetaElement::from_triple(&triple).scale(&eps).with_denom(den.clone()));
    }
    acc.mod_two().map_err(|_| ContractionError::ShapeMismatch)
}

/// The class of the unlabeled theta graph in cleared coordinates: every
/// edge carries the denominator.
pub fn cleared_theta_class(den: &LaurentPoly) -> ThetaElement {
    ThetaElement::from_triple(&RawTriple::new(den.clone(), den.clone(), den.clone()))
        .with_denom(den.clone())
}

/// Equality mod 2 and modulo the theta class, the comparison used by the
/// tripod-square lemma.
pub fn equal_mod2_mod_theta(
    x: &ThetaElement,
    y: &ThetaElement,
    den: &LaurentPoly,
) -> bool {
    let diff = match x.sub(y).mod_two() {
        Ok(d) => d,
        Err(_) => return false,
    };
    if diff.is_zero() {
        return true;
    }
    match cleared_theta_class(den).mod_two() {
        Ok(t) => diff == t,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;
    use num_traits::One;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn one_r() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn invert_identity() {
        let w = vec![vec![p("1"), p("0")], vec![p("0"), p("1")]];
        let inv = invert_hermitian(&w).unwrap();
        assert_eq!(inv, PairingMatrix::identity(2));
    }

    #[test]
    fn invert_two_by_two_oracle() {
        // W = [[1, t], [t^-1, -1]], det = -2
        let w = vec![vec![p("1"), p("t")], vec![p("t^-1"), p("-1")]];
        let inv = invert_hermitian(&w).unwrap();
        // normalized to den = +2 with num = [[1, t], [t^-1, -1]]
        assert_eq!(inv.den(), &p("2"));
        assert_eq!(inv.num_entry(0, 0), &p("1"));
        assert_eq!(inv.num_entry(0, 1), &p("t"));
        assert_eq!(inv.num_entry(1, 0), &p("t^-1"));
        assert_eq!(inv.num_entry(1, 1), &p("-1"));
    }

    #[test]
    fn invert_clasper_block_matrix() {
        // M = [[W, I], [I, 0]] for a 2x2 monomial W; M^-1 = [[0, I], [I, -W]]
        let wm = [[p("1"), p("t^2")], [p("t^-2"), p("-1")]];
        let n = 4;
        let mut m = vec![vec![LaurentPoly::zero(); n]; n];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = wm[i][j].clone();
            }
            m[i][i + 2] = LaurentPoly::one();
            m[i + 2][i] = LaurentPoly::one();
        }
        let inv = invert_hermitian(&m).unwrap();
        let d = inv.den().clone();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(inv.num_entry(i, j), &LaurentPoly::zero());
                let expect = if i == j { d.clone() } else { LaurentPoly::zero() };
                assert_eq!(inv.num_entry(i, j + 2), &expect);
                assert_eq!(inv.num_entry(i + 2, j), &expect);
                assert_eq!(inv.num_entry(i + 2, j + 2), &(-&(&wm[i][j] * &d)));
            }
        }
    }

    #[test]
    fn invert_rejects_singular_and_nonhermitian() {
        let w = vec![vec![p("1"), p("1")], vec![p("1"), p("1")]];
        assert_eq!(invert_hermitian(&w), Err(ContractionError::Singular));
        let w = vec![vec![p("1"), p("t")], vec![p("t")/*not involuted*/, p("1")]];
        assert_eq!(invert_hermitian(&w), Err(ContractionError::NotHermitian));
    }

    #[test]
    fn contract_pair_anchors() {
        let id = PairingMatrix::identity(1);
        let x = Leg::unit(0);
        assert_eq!(contract_pair(&x, &x, &id), p("-1"));
        let tl = Leg::new(0, p("t"));
        assert_eq!(contract_pair(&tl, &tl, &id), p("-1"));
    }

    #[test]
    fn contract_pair_hermitian() {
        let w = vec![vec![p("1"), p("t")], vec![p("t^-1"), p("-1")]];
        let inv = invert_hermitian(&w).unwrap();
        let x = Leg::new(0, p("t^2 + 1"));
        let y = Leg::new(1, p("t - 2"));
        let xy = contract_pair(&x, &y, &inv);
        let yx = contract_pair(&y, &x, &inv);
        assert_eq!(xy.involute(), yx);
    }

    #[test]
    fn wheel_anchor() {
        let id = PairingMatrix::identity(1);
        let legs = [Leg::unit(0), Leg::unit(0)];
        let r = contract_wheel2(&one_r(), &legs, &id).unwrap();
        assert_eq!(r.coeff(0, 0), rat(-1, 1));
        assert_eq!(r.iter().count(), 1);
    }

    #[test]
    fn h_with_unit_colors_identity_pairing() {
        // pinned by the matching-enumeration oracle
        let id = PairingMatrix::identity(2);
        let top = [Leg::unit(0), Leg::unit(1)];
        let bottom = [Leg::unit(0), Leg::unit(1)];
        let r = contract_h(&one_r(), &top, &bottom, &id).unwrap();
        assert_eq!(r.coeff(0, 0), rat(-1, 1));
        assert_eq!(r.iter().count(), 1);
    }

    #[test]
    fn h_with_zero_colors_vanishes() {
        let id = PairingMatrix::identity(2);
        let z = Leg::new(0, LaurentPoly::zero());
        let r = contract_h(&one_r(), &[z.clone(), z.clone()], &[z.clone(), z], &id).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn tripods_unit_regression() {
        // pinned by the 15-matching oracle: everything cancels
        let id = PairingMatrix::identity(1);
        let t = [Leg::unit(0), Leg::unit(0), Leg::unit(0)];
        let r = contract_tripods(&one_r(), &t, &t, &id).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn tripods_against_zero_vanish() {
        let id = PairingMatrix::identity(1);
        let t = [Leg::unit(0), Leg::unit(0), Leg::unit(0)];
        let z = Leg::new(0, LaurentPoly::zero());
        let r = contract_tripods(&one_r(), &t, &[z.clone(), z.clone(), z], &id).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn bilinearity_in_colors() {
        let w = vec![vec![p("1"), p("t")], vec![p("t^-1"), p("-1")]];
        let inv = invert_hermitian(&w).unwrap();
        let mk = |c: &str| [Leg::new(0, p(c)), Leg::new(1, p("t")), Leg::new(1, p("1"))];
        let sum = contract_tripods(&one_r(), &mk("t + t^-2"), &mk("t^2"), &inv).unwrap();
        let part1 = contract_tripods(&one_r(), &mk("t"), &mk("t^2"), &inv).unwrap();
        let part2 = contract_tripods(&one_r(), &mk("t^-2"), &mk("t^2"), &inv).unwrap();
        assert_eq!(sum, part1.add(&part2));
        let scaled = contract_tripods(&rat(3, 7), &mk("t"), &mk("t^2"), &inv).unwrap();
        assert_eq!(scaled, part1.scale(&rat(3, 7)));
    }

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(None).len(), 15);
        assert_eq!(matchings(Some((1, 1))).len(), 3);
    }

    #[test]
    fn contract_pair_carries_inverse_entry_between_involuted_colors() {
        // legs colored w_ij, w_ik glued through entry (j,k) give the
        // fraction -w_ij w^-1_jk w_ki over the determinant
        let w = vec![
            vec![p("1"), p("t"), p("-t^2")],
            vec![p("t^-1"), p("1"), p("1")],
            vec![p("-t^-2"), p("1"), p("-1")],
        ];
        let inv = invert_hermitian(&w).unwrap();
        let x = Leg::new(1, w[0][1].clone());
        let y = Leg::new(2, w[0][2].clone());
        let got = contract_pair(&x, &y, &inv);
        let expect = -&(&(&w[0][1] * inv.num_entry(1, 2)) * &w[2][0]);
        assert_eq!(got, expect);
    }

    #[test]
    fn y_square_closed_form_unit_colors() {
        // identity pairing: the off-diagonal entries vanish, so each of the
        // three closed-form terms does too
        let inv = PairingMatrix::identity(3);
        let colors = [p("1"), p("1"), p("1")];
        let r = y_square_mod2(&colors, &[0, 1, 2], &inv).unwrap();
        assert!(r.is_zero());
        // a coupled matrix produces the three eps-weighted theta terms
        let w = vec![
            vec![p("1"), p("1"), p("0")],
            vec![p("1"), p("1"), p("1")],
            vec![p("0"), p("1"), p("-1")],
        ];
        let inv = invert_hermitian(&w).unwrap();
        let r = y_square_mod2(&colors, &[0, 1, 2], &inv).unwrap();
        let brute = {
            let legs = [Leg::unit(0), Leg::unit(1), Leg::unit(2)];
            contract_tripods(&BigRational::one(), &legs, &legs, &inv).unwrap()
        };
        assert!(equal_mod2_mod_theta(&brute, &r, inv.den()));
    }

    #[test]
    fn y_square_permutation_symmetry() {
        // swapping (j,k) exchanges the two last closed-form terms
        let w = vec![
            vec![p("1"), p("t"), p("0")],
            vec![p("t^-1"), p("1"), p("1")],
            vec![p("0"), p("1"), p("-1")],
        ];
        let inv = invert_hermitian(&w).unwrap();
        let colors = [p("t"), p("t^-1"), p("1")];
        let swapped = [p("t"), p("1"), p("t^-1")];
        let a = y_square_mod2(&colors, &[0, 1, 2], &inv).unwrap();
        let b = y_square_mod2(&swapped, &[0, 2, 1], &inv).unwrap();
        assert_eq!(a, b);
    }
}
