//! The free crossed module `C(ω) → F(X)` of a group presentation.
//!
//! Elements are sequences of triples `(relator, sign, conjugator)`; the
//! boundary sends `(r, ε, p)` to `p⁻¹·(ωr)^ε·p` and the right action of a
//! word `q` appends it to every conjugator.
//!
//! Equality is decided by the pair (boundary in `F(X)`, abelianized image
//! `h₂` in the free `ℤ[G]`-module on the relators), where `G` is the
//! presented group, enumerated within a bound. The second component sends
//! `(r, ε, p)` to `ε·r·φ(p)`. Because the boundary image is a free
//! subgroup of `F(X)`, its inclusion splits and `h₂` is injective on the
//! kernel of the boundary, so the pair decides equality exactly whenever
//! the bounded enumeration of `G` succeeds.

use crate::error::AlgebraError;
use crate::presentation::{enumerate_fp_group, EnumeratedGroup, GroupPresentation};
use crate::ring::GroupRingElement;
use crate::word::FreeWord;

/// One signed, conjugated relator symbol `(r, ε, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FcmTerm {
    pub relator: usize,
    pub sign: i8,
    pub conj: FreeWord,
}

impl FcmTerm {
    pub fn new(relator: usize, sign: i8, conj: FreeWord) -> Self {
        assert!(sign == 1 || sign == -1);
        FcmTerm { relator, sign, conj }
    }
}

/// An element of the free crossed module, as a Peiffer sequence.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FcmElement {
    pub terms: Vec<FcmTerm>,
}

impl FcmElement {
    pub fn identity() -> Self {
        FcmElement::default()
    }

    pub fn single(relator: usize, sign: i8, conj: FreeWord) -> Self {
        FcmElement { terms: vec![FcmTerm::new(relator, sign, conj)] }
    }

    pub fn check(&self, p: &GroupPresentation) -> Result<(), AlgebraError> {
        for t in &self.terms {
            if t.relator >= p.relators.len() {
                return Err(AlgebraError::BadGenerator {
                    index: t.relator,
                    count: p.relators.len(),
                });
            }
        }
        Ok(())
    }

    /// Concatenation (the group operation of `C(ω)`), with free
    /// cancellation of adjacent exact inverses.
    pub fn mul(&self, other: &FcmElement) -> FcmElement {
        let mut terms = self.terms.clone();
        for t in &other.terms {
            match terms.last() {
                Some(last)
                    if last.relator == t.relator
                        && last.sign == -t.sign
                        && last.conj == t.conj =>
                {
                    terms.pop();
                }
                _ => terms.push(t.clone()),
            }
        }
        FcmElement { terms }
    }

    pub fn inv(&self) -> FcmElement {
        FcmElement {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|t| FcmTerm::new(t.relator, -t.sign, t.conj.clone()))
                .collect(),
        }
    }

    /// Right action `(r, ε, p)^q = (r, ε, p·q)`.
    pub fn act(&self, q: &FreeWord) -> FcmElement {
        FcmElement {
            terms: self
                .terms
                .iter()
                .map(|t| FcmTerm::new(t.relator, t.sign, t.conj.mul(q)))
                .collect(),
        }
    }

    /// The boundary `∂`: the product over the sequence of
    /// `p⁻¹·(ωr)^ε·p`, freely reduced. Multiplicative over concatenation.
    pub fn boundary(&self, relators: &[FreeWord]) -> FreeWord {
        let mut out = FreeWord::identity();
        for t in &self.terms {
            let base = if t.sign > 0 {
                relators[t.relator].clone()
            } else {
                relators[t.relator].inv()
            };
            out = out.mul(&base.conjugate(&t.conj));
        }
        out
    }

    /// The abelianization `h₂` into the free `ℤ[G]`-module on the
    /// relators: `(r, ε, p) ↦ ε·r·φ(p)`, one group-ring coordinate per
    /// relator.
    pub fn h2(&self, en: &EnumeratedGroup) -> Vec<GroupRingElement> {
        let mut out = vec![GroupRingElement::zero(); en.presentation.relators.len()];
        for t in &self.terms {
            out[t.relator].add_term(en.eval(&t.conj), t.sign as i64);
        }
        out
    }
}

/// Decides equality in `C(ω)` for the presentation `pres`, enumerating the
/// presented group within `bound`.
pub fn fcm_equal(
    e1: &FcmElement,
    e2: &FcmElement,
    pres: &GroupPresentation,
    bound: usize,
) -> Result<bool, AlgebraError> {
    e1.check(pres)?;
    e2.check(pres)?;
    let en = enumerate_fp_group(pres, bound)?;
    if e1.boundary(&pres.relators) != e2.boundary(&pres.relators) {
        return Ok(false);
    }
    Ok(e1.h2(&en) == e2.h2(&en))
}

/// The two sides of the defining Peiffer relation for the generators
/// `x = (r,p)` and `y = (s,q)`:
///
/// ```text
/// (s,q)·(r,p)  =  (r,p)·(s, q·p⁻¹(ωr)p)
/// ```
///
/// returned as `(left, right)`. This is CM2 in `C(ω)`: conjugation by an
/// element acts as its boundary does, `x⁻¹·y·x = y^{∂x}`.
pub fn peiffer_pair(
    x: &FcmTerm,
    y: &FcmTerm,
    relators: &[FreeWord],
) -> (FcmElement, FcmElement) {
    let dx = FcmElement { terms: vec![x.clone()] }.boundary(relators);
    let left = FcmElement { terms: vec![y.clone(), x.clone()] };
    let right = FcmElement {
        terms: vec![x.clone(), FcmTerm::new(y.relator, y.sign, y.conj.mul(&dx))],
    };
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_squared_pres() -> GroupPresentation {
        GroupPresentation::unnamed(1, vec![FreeWord::generator(0).pow(2)])
    }

    #[test]
    fn boundary_trivial_conjugator() {
        let p = x_squared_pres();
        let e = FcmElement::single(0, 1, FreeWord::identity());
        assert_eq!(e.boundary(&p.relators), p.relators[0]);
    }

    #[test]
    fn boundary_conjugation_formula() {
        let p = x_squared_pres();
        let q = FreeWord::generator(0);
        let e = FcmElement::single(0, 1, q.clone());
        assert_eq!(e.boundary(&p.relators), p.relators[0].conjugate(&q));
    }

    #[test]
    fn boundary_of_inverse_pair_vanishes() {
        let p = x_squared_pres();
        let e = FcmElement::single(0, 1, FreeWord::identity())
            .mul(&FcmElement::single(0, -1, FreeWord::identity()));
        assert!(e.terms.is_empty());
        assert!(e.boundary(&p.relators).is_identity());
    }

    #[test]
    fn action_appends_conjugator() {
        let q = FreeWord::generator(0);
        let e = FcmElement::single(0, 1, FreeWord::generator(0));
        let acted = e.act(&q);
        assert_eq!(acted.terms[0].conj, FreeWord::generator(0).pow(2));
        // e^1 = e
        assert_eq!(e.act(&FreeWord::identity()), e);
        // (e^q)^{q⁻¹} = e
        assert_eq!(e.act(&q).act(&q.inv()), e);
    }

    #[test]
    fn boundary_action_compatibility() {
        // ∂(e^q) = q⁻¹·∂e·q for sampled e, q
        let p = GroupPresentation::unnamed(
            2,
            vec![
                FreeWord::generator(0).pow(2),
                FreeWord::generator(1).pow(3),
            ],
        );
        let words = [
            FreeWord::identity(),
            FreeWord::generator(0),
            FreeWord::generator(1).inv(),
            FreeWord::generator(0).mul(&FreeWord::generator(1)),
        ];
        for r in 0..2 {
            for sign in [1i8, -1] {
                for conj in &words {
                    for q in &words {
                        let e = FcmElement::single(r, sign, conj.clone());
                        assert_eq!(
                            e.act(q).boundary(&p.relators),
                            e.boundary(&p.relators).conjugate(q)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn peiffer_pair_is_equal() {
        // (s,q)·(r,p) = (r,p)·(s, q·p⁻¹(ωr)p) in C(ω) — checked over the
        // S3 presentation so the quotient group is finite
        let pres = GroupPresentation::unnamed(
            2,
            vec![
                FreeWord::generator(0).pow(2),
                FreeWord::generator(1).pow(3),
                FreeWord::generator(0).mul(&FreeWord::generator(1)).pow(2),
            ],
        );
        let conjs = [
            FreeWord::identity(),
            FreeWord::generator(0),
            FreeWord::generator(1),
            FreeWord::generator(1).inv().mul(&FreeWord::generator(0)),
        ];
        for r in 0..3 {
            for s in 0..3 {
                for p in &conjs {
                    for q in &conjs {
                        let x = FcmTerm::new(r, 1, p.clone());
                        let y = FcmTerm::new(s, 1, q.clone());
                        let (left, right) = peiffer_pair(&x, &y, &pres.relators);
                        assert_eq!(
                            left.boundary(&pres.relators),
                            right.boundary(&pres.relators)
                        );
                        assert!(fcm_equal(&left, &right, &pres, 64).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn reflexivity() {
        let p = x_squared_pres();
        let e = FcmElement::single(0, 1, FreeWord::generator(0));
        assert!(fcm_equal(&e, &e, &p, 16).unwrap());
    }

    #[test]
    fn identity_among_relations_detected() {
        // in ⟨x | x²⟩: (r,+,1)·(r,−,x) has trivial boundary but
        // h₂ = r·(1 − x) ≠ 0, so it is a nontrivial identity among
        // relations and differs from the empty element
        let p = x_squared_pres();
        let e = FcmElement::single(0, 1, FreeWord::identity())
            .mul(&FcmElement::single(0, -1, FreeWord::generator(0)));
        assert!(e.boundary(&p.relators).is_identity());
        assert!(!fcm_equal(&e, &FcmElement::identity(), &p, 16).unwrap());
        let en = enumerate_fp_group(&p, 16).unwrap();
        let h = e.h2(&en);
        assert_eq!(h[0].coeff(&0), 1);
        assert_eq!(h[0].coeff(&en.gen_images[0]), -1);
    }

    #[test]
    fn unbounded_signal_propagates() {
        let p = GroupPresentation::unnamed(1, vec![]); // free: infinite
        let e = FcmElement::identity();
        assert!(matches!(
            fcm_equal(&e, &e, &p, 32),
            Err(AlgebraError::Unbounded { .. })
        ));
    }

    #[test]
    fn congruence_with_concatenation_and_action() {
        // fcm_equal is compatible with mul and act on exhaustive short
        // sequences over ⟨x | x³⟩
        let p = GroupPresentation::unnamed(1, vec![FreeWord::generator(0).pow(3)]);
        let conjs = [
            FreeWord::identity(),
            FreeWord::generator(0),
            FreeWord::generator(0).inv(),
        ];
        let mut elements: Vec<FcmElement> = vec![FcmElement::identity()];
        for s in [1i8, -1] {
            for c in &conjs {
                elements.push(FcmElement::single(0, s, c.clone()));
            }
        }
        // pairs of equal elements stay equal after acting and multiplying
        let q = FreeWord::generator(0);
        let z = FcmElement::single(0, 1, FreeWord::identity());
        for a in &elements {
            for b in &elements {
                let eq = fcm_equal(a, b, &p, 16).unwrap();
                if eq {
                    assert!(fcm_equal(&a.act(&q), &b.act(&q), &p, 16).unwrap());
                    assert!(fcm_equal(&a.mul(&z), &b.mul(&z), &p, 16).unwrap());
                    assert!(fcm_equal(&z.mul(a), &z.mul(b), &p, 16).unwrap());
                }
            }
        }
    }
}
