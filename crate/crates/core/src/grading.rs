//! The grading group Gr(Z): half-integer Maslov component plus a class in
//! H1(Z, a), with the product twisted by the linking pairing L.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, ClassSet, StrandsAlgebra, StrandsGenerator};
use crate::diagram::{ArcDiagram, ChordClass, Point};
use crate::error::GradingError;
use crate::half::{HalfInt, Quarter};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradingElement {
    /// Twice the Maslov component.
    pub maslov2: i64,
    pub h: ChordClass,
}

impl GradingElement {
    pub fn maslov(&self) -> HalfInt {
        HalfInt::from_twice(self.maslov2)
    }
}

impl fmt::Display for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.maslov(), self.h)
    }
}

#[derive(Clone, Debug)]
pub struct GradingGroup {
    diagram: ArcDiagram,
}

impl GradingGroup {
    pub fn new(diagram: ArcDiagram) -> Self {
        GradingGroup { diagram }
    }

    pub fn skein() -> Self {
        GradingGroup::new(ArcDiagram::four_punctured_sphere())
    }

    pub fn diagram(&self) -> &ArcDiagram {
        &self.diagram
    }

    pub fn identity(&self) -> GradingElement {
        GradingElement { maslov2: 0, h: self.diagram.zero_class() }
    }

    /// The central element λ^n.
    pub fn lambda(&self, n: i64) -> GradingElement {
        GradingElement { maslov2: 2 * n, h: self.diagram.zero_class() }
    }

    /// Builds an element, rejecting pairs outside Gr(Z).
    pub fn element(&self, maslov: HalfInt, h: ChordClass) -> Result<GradingElement, GradingError> {
        if h.0.len() != self.diagram.chord_rank() {
            return Err(GradingError::Dimension { expected: self.diagram.chord_rank(), found: h.0.len() });
        }
        let g = GradingElement { maslov2: maslov.twice(), h };
        if self.is_member(&g) {
            Ok(g)
        } else {
            Err(GradingError::Parity { maslov2: g.maslov2 })
        }
    }

    pub fn avg_multiplicity(&self, p: Point, alpha: &ChordClass) -> HalfInt {
        self.diagram.avg_multiplicity(p, alpha)
    }

    /// L(α, β) = m(∂α, β).
    pub fn l_pairing(&self, alpha: &ChordClass, beta: &ChordClass) -> HalfInt {
        self.diagram
            .boundary(alpha)
            .iter()
            .enumerate()
            .map(|(idx, &coef)| self.avg_multiplicity(idx as Point + 1, beta) * coef)
            .sum()
    }

    /// A quarter of the number of points with half-integral multiplicity, mod 1.
    pub fn epsilon(&self, alpha: &ChordClass) -> HalfInt {
        let halves = (1..=self.diagram.n_points() as Point)
            .filter(|&p| !self.avg_multiplicity(p, alpha).is_integer())
            .count() as i64;
        // halves / 4 mod 1, as a doubled value in {0, 1}
        HalfInt::from_twice((halves / 2).rem_euclid(2))
    }

    pub fn is_member(&self, g: &GradingElement) -> bool {
        (g.maslov2 - self.epsilon(&g.h).twice()).rem_euclid(2) == 0
    }

    pub fn mul(&self, g: &GradingElement, h: &GradingElement) -> GradingElement {
        GradingElement { maslov2: g.maslov2 + h.maslov2 + self.l_pairing(&g.h, &h.h).twice(), h: &g.h + &h.h }
    }

    pub fn inv(&self, g: &GradingElement) -> GradingElement {
        GradingElement { maslov2: -g.maslov2 + self.l_pairing(&g.h, &g.h).twice(), h: -&g.h }
    }

    pub fn pow(&self, g: &GradingElement, n: i64) -> GradingElement {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        (0..n.abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }

    /// ∂' = M_* ∘ ∂, on match-classes.
    pub fn d_prime(&self, alpha: &ChordClass) -> Vec<i64> {
        self.diagram.class_boundary(alpha)
    }

    pub fn is_refined(&self, g: &GradingElement) -> bool {
        self.d_prime(&g.h).iter().all(|&c| c == 0)
    }

    /// gr(φ) = (inv(φ) − m([S], [ρ]), [ρ]) for the expansion chosen by `choice`.
    pub fn gr_with_choice(&self, alg: &StrandsAlgebra, g: &StrandsGenerator, choice: usize) -> GradingElement {
        let strands = &alg.expansions(g)[choice];
        let mut h = self.diagram.zero_class();
        for c in &g.moving {
            h += &self.diagram.chord_class(*c);
        }
        let m_s: HalfInt = strands.iter().map(|&(s, _)| self.avg_multiplicity(s, &h)).sum();
        let maslov = HalfInt::from_int(alg.inv(strands) as i64) - m_s;
        GradingElement { maslov2: maslov.twice(), h }
    }

    pub fn gr_generator(&self, alg: &StrandsAlgebra, g: &StrandsGenerator) -> GradingElement {
        self.gr_with_choice(alg, g, 0)
    }

    /// The common grading of every term, or an error when the terms disagree.
    pub fn gr_element(&self, alg: &StrandsAlgebra, a: &AlgebraElement) -> Result<GradingElement, GradingError> {
        homogeneous(a.iter().map(|g| self.gr_generator(alg, g)))
    }

    /// gr(B) = (−e − n1 − n2, ∂∂B) for a domain with Euler measure `e` and
    /// corner multiplicities `n1`, `n2`.
    pub fn domain_grading(
        &self,
        e: Quarter,
        n1: Quarter,
        n2: Quarter,
        bdry: ChordClass,
    ) -> Result<GradingElement, GradingError> {
        let total = -(e + n1 + n2);
        let maslov = total.to_half().ok_or(GradingError::Parity { maslov2: total.quarters() })?;
        self.element(maslov, bdry)
    }
}

fn homogeneous(mut grades: impl Iterator<Item = GradingElement>) -> Result<GradingElement, GradingError> {
    let first = grades.next().ok_or(GradingError::Zero)?;
    if grades.all(|g| g == first) {
        Ok(first)
    } else {
        Err(GradingError::NotHomogeneous)
    }
}

/// A base idempotent and one correction element per idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementData {
    base: ClassSet,
    assignment: BTreeMap<ClassSet, GradingElement>,
}

impl RefinementData {
    pub fn new(
        group: &GradingGroup,
        base: ClassSet,
        assignment: BTreeMap<ClassSet, GradingElement>,
    ) -> Result<Self, GradingError> {
        match assignment.get(&base) {
            Some(g) if *g == group.identity() => {}
            _ => return Err(GradingError::Refinement(format!("base idempotent {base} must map to the identity"))),
        }
        for (idem, g) in &assignment {
            if !group.is_member(g) {
                return Err(GradingError::Parity { maslov2: g.maslov2 });
            }
            let expected: Vec<i64> =
                (1..=group.diagram().n_classes()).map(|c| idem.contains(c) as i64 - base.contains(c) as i64).collect();
            if group.d_prime(&g.h) != expected {
                return Err(GradingError::Refinement(format!(
                    "boundary of r({idem}) is {:?}, expected {expected:?}",
                    group.d_prime(&g.h)
                )));
            }
        }
        Ok(RefinementData { base, assignment })
    }

    pub fn base(&self) -> ClassSet {
        self.base
    }

    pub fn get(&self, idem: ClassSet) -> Option<&GradingElement> {
        self.assignment.get(&idem)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClassSet, &GradingElement)> {
        self.assignment.iter()
    }

    /// Replaces one correction without re-validating; used to seed faults.
    pub fn with_unchecked(&self, idem: ClassSet, g: GradingElement) -> Self {
        let mut out = self.clone();
        out.assignment.insert(idem, g);
        out
    }

    fn lookup(&self, idem: ClassSet) -> Result<&GradingElement, GradingError> {
        self.assignment
            .get(&idem)
            .ok_or_else(|| GradingError::Refinement(format!("no correction for idempotent {idem}")))
    }

    /// r(I_s) · g · r(I_e)^{-1}.
    pub fn conjugate(
        &self,
        group: &GradingGroup,
        start: ClassSet,
        g: &GradingElement,
        end: ClassSet,
    ) -> Result<GradingElement, GradingError> {
        let left = self.lookup(start)?;
        let right = group.inv(self.lookup(end)?);
        Ok(group.mul(&group.mul(left, g), &right))
    }

    pub fn refine_generator(
        &self,
        group: &GradingGroup,
        alg: &StrandsAlgebra,
        g: &StrandsGenerator,
    ) -> Result<GradingElement, GradingError> {
        let out = self.conjugate(group, alg.left_idem(g), &group.gr_generator(alg, g), alg.right_idem(g))?;
        if group.is_refined(&out) && group.is_member(&out) {
            Ok(out)
        } else {
            Err(GradingError::NotRefined(group.d_prime(&out.h)))
        }
    }

    /// Refined grading of a homogeneous element.
    pub fn refine(
        &self,
        group: &GradingGroup,
        alg: &StrandsAlgebra,
        a: &AlgebraElement,
    ) -> Result<GradingElement, GradingError> {
        let grades: Vec<GradingElement> =
            a.iter().map(|g| self.refine_generator(group, alg, g)).collect::<Result<_, _>>()?;
        homogeneous(grades.into_iter())
    }
}

/// A basis A1, …, An of the refined subgroup modulo λ, giving coordinates
/// (λ, A1, …, An) on Gr̄(Z).
#[derive(Clone, Debug)]
pub struct RefinedBasis {
    group: GradingGroup,
    basis: Vec<GradingElement>,
    pivots: Vec<usize>,
}

impl RefinedBasis {
    pub fn new(group: GradingGroup, basis: Vec<GradingElement>) -> Result<Self, GradingError> {
        let mut pivots = Vec::new();
        for (i, b) in basis.iter().enumerate() {
            if !group.is_refined(b) || !group.is_member(b) {
                return Err(GradingError::NotRefined(group.d_prime(&b.h)));
            }
            let pivot = (0..b.h.0.len())
                .find(|&j| b.h.0[j] != 0 && basis.iter().enumerate().all(|(k, o)| k == i || o.h.0[j] == 0))
                .ok_or_else(|| GradingError::Refinement(format!("basis element {b} has no private coordinate")))?;
            pivots.push(pivot);
        }
        Ok(RefinedBasis { group, basis, pivots })
    }

    /// λ, A1 = (−1/2, [ρ123]), A2 = (−1/2, [ρ456]), A3 = (−3/2, [ρ78]).
    pub fn skein() -> Self {
        let group = GradingGroup::skein();
        let z = group.diagram().clone();
        let a = |twice: i64, label: &str| GradingElement {
            maslov2: twice,
            h: z.class_by_label(label).expect("fixed label"),
        };
        let basis = vec![a(-1, "123"), a(-1, "456"), a(-3, "78")];
        RefinedBasis::new(group, basis).expect("fixed basis is valid")
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.basis.len() + 1
    }

    pub fn generator(&self, i: usize) -> &GradingElement {
        &self.basis[i]
    }

    /// Coordinates (a, c1, …, cn) with g = λ^a · Π Ai^ci.
    pub fn coords(&self, g: &GradingElement) -> Result<Vec<i64>, GradingError> {
        if !self.group.is_refined(g) {
            return Err(GradingError::NotRefined(self.group.d_prime(&g.h)));
        }
        let mut cs = Vec::with_capacity(self.basis.len());
        let mut span = self.group.diagram().zero_class();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if g.h.0[p] % b.h.0[p] != 0 {
                return Err(GradingError::NotRefined(g.h.0.clone()));
            }
            let c = g.h.0[p] / b.h.0[p];
            span += &b.h.scale(c);
            cs.push(c);
        }
        if span != g.h {
            return Err(GradingError::NotRefined(g.h.0.clone()));
        }
        let rest = self.group.mul(g, &self.group.inv(&self.element_at(&cs)));
        let a = rest.maslov().to_int().ok_or(GradingError::Parity { maslov2: rest.maslov2 })?;
        let mut out = vec![a];
        out.extend(cs);
        Ok(out)
    }

    fn element_at(&self, cs: &[i64]) -> GradingElement {
        cs.iter()
            .zip(&self.basis)
            .fold(self.group.identity(), |acc, (&c, b)| self.group.mul(&acc, &self.group.pow(b, c)))
    }

    pub fn from_coords(&self, coords: &[i64]) -> GradingElement {
        self.group.mul(&self.group.lambda(coords[0]), &self.element_at(&coords[1..]))
    }

    /// The image in Gr̄/⟨A1, …, An⟩ ≅ ℤ, with λ ↦ 1.
    pub fn skein_reduce(&self, g: &GradingElement) -> Result<i64, GradingError> {
        Ok(self.coords(g)?[0])
    }

    /// Renders coordinates as e.g. `-A2-A3` or `2λ+A1`.
    pub fn format_coords(coords: &[i64]) -> String {
        let mut out = String::new();
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i == 0 { "λ".to_string() } else { format!("A{i}") };
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            out.push_str(&format!("{sign}{mag}{name}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp() -> GradingGroup {
        GradingGroup::skein()
    }

    fn class(label: &str) -> ChordClass {
        grp().diagram().class_by_label(label).unwrap()
    }

    fn el(twice: i64, h: ChordClass) -> GradingElement {
        GradingElement { maslov2: twice, h }
    }

    #[test]
    fn pairing_values() {
        let g = grp();
        assert_eq!(g.l_pairing(&class("1"), &class("2")), HalfInt::HALF);
        assert_eq!(g.l_pairing(&class("2"), &class("1")), -HalfInt::HALF);
        assert_eq!(g.l_pairing(&class("123"), &class("123")), HalfInt::ZERO);
        assert_eq!(g.l_pairing(&class("1"), &class("7")), HalfInt::ZERO);
    }

    #[test]
    fn multiplicities() {
        let g = grp();
        assert_eq!(g.avg_multiplicity(3, &class("1")), HalfInt::HALF);
        assert_eq!(g.avg_multiplicity(3, &class("123")), HalfInt::from_int(1));
        assert_eq!(g.avg_multiplicity(1, &class("456")), HalfInt::ZERO);
    }

    #[test]
    fn epsilon_values() {
        let g = grp();
        for j in 1..=8 {
            assert_eq!(g.epsilon(&g.diagram().elementary_class(j)), HalfInt::HALF);
        }
        assert_eq!(g.epsilon(&g.diagram().zero_class()), HalfInt::ZERO);
        assert_eq!(g.epsilon(&class("78")), HalfInt::HALF);
        // (0, [ρ123]) is not in Gr(Z)
        assert!(g.element(HalfInt::ZERO, class("123")).is_err());
    }

    #[test]
    fn conjugation_fixes_sign_convention() {
        let g = grp();
        let r3 = el(0, &class("5") + &class("8"));
        let b = el(2, -&(&class("456") + &class("78")));
        let out = g.mul(&g.mul(&r3, &b), &g.inv(&r3));
        assert_eq!(out, el(4, -&(&class("456") + &class("78"))));
        let basis = RefinedBasis::skein();
        assert_eq!(basis.coords(&out).unwrap(), vec![0, 0, -1, -1]);
    }

    #[test]
    fn inverse_and_identity() {
        let g = grp();
        let x = el(-1, &class("12") + &class("5"));
        assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        assert_eq!(g.mul(&g.inv(&x), &x), g.identity());
        assert_eq!(g.mul(&x, &g.identity()), x);
    }

    #[test]
    fn single_chord_gradings() {
        let g = grp();
        let alg = StrandsAlgebra::skein();
        for label in ["1", "2", "3", "12", "23", "123", "4", "5", "6", "45", "56", "456", "7", "8", "78"] {
            let a = alg.parse_word(label).unwrap();
            assert_eq!(g.gr_element(&alg, &a).unwrap(), el(-1, class(label)), "{label}");
        }
        for i in alg.idempotents() {
            assert_eq!(g.gr_generator(&alg, &i), g.identity());
        }
    }

    #[test]
    fn skein_coordinates() {
        let b = RefinedBasis::skein();
        let g = b.group();
        assert_eq!(b.skein_reduce(&g.lambda(1)).unwrap(), 1);
        for i in 0..3 {
            assert_eq!(b.skein_reduce(b.generator(i)).unwrap(), 0);
        }
        let v = vec![3, -1, 2, 5];
        assert_eq!(b.coords(&b.from_coords(&v)).unwrap(), v);
        assert!(b.coords(&el(-1, class("1"))).is_err());
        assert_eq!(RefinedBasis::format_coords(&[0, 0, -1, -1]), "-A2-A3");
        assert_eq!(RefinedBasis::format_coords(&[2, 1, 0, 0]), "2λ+A1");
    }

    #[test]
    fn domain_grading_checks_parity() {
        let g = grp();
        let q = Quarter::from_quarters;
        let zero = g.domain_grading(q(0), q(0), q(0), g.diagram().zero_class()).unwrap();
        assert_eq!(zero, g.identity());
        assert!(g.domain_grading(q(1), q(0), q(0), g.diagram().zero_class()).is_err());
        assert!(g.domain_grading(q(-2), q(0), q(0), g.diagram().zero_class()).is_err());
    }
}
