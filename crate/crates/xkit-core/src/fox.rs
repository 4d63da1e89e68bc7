//! Fox free differential calculus and the linear shadow of a presentation:
//! the derived module, the relator Jacobian, the module of identities among
//! relations, and chain complexes with an operator group.
//!
//! All derivations are right-handed: `h₁(pq) = h₁(p)^{φq} + h₁(q)`, where
//! the action is right multiplication in `ℤ[G]`. The classical calculus is
//! left-handed; the dictionary is `∂/∂x ↦ antipode of the left derivative`.

use crate::error::AlgebraError;
use crate::matrix::{lattice_quotient, left_kernel};
use crate::presentation::{enumerate_fp_group, EnumeratedGroup, GroupPresentation};
use crate::ring::{GroupCarrier, GroupRingElement, RingElem, RingMatrix};
use crate::word::FreeWord;

/// The Fox derivative `∂w/∂x` pushed through `φ` into `ℤ[G]`, where `φ` is
/// given by its images of the generators in the carrier `g`.
///
/// Satisfies `∂(uv) = (∂u)·φ(v) + ∂v`, `∂x/∂x = 1`, `∂y/∂x = 0`, and
/// consequently `∂(x⁻¹)/∂x = −φ(x)⁻¹`.
pub fn fox_derivative<C: GroupCarrier>(
    w: &FreeWord,
    x: usize,
    carrier: &C,
    images: &[C::Elt],
) -> RingElem<C::Elt>
where
    C::Elt: Clone + Ord + std::fmt::Debug,
{
    let mut out = RingElem::zero();
    // process letters right to left, carrying φ(suffix)
    let mut suffix = carrier.identity();
    for &(g, s) in w.letters().iter().rev() {
        if g == x {
            if s > 0 {
                // ∂(x·s) contributes +φ(suffix)
                out.add_term(suffix.clone(), 1);
            } else {
                // ∂(x⁻¹·s) contributes −φ(x)⁻¹·φ(suffix)
                out.add_term(carrier.mul(&carrier.inv(&images[g]), &suffix), -1);
            }
        }
        let img = if s > 0 { images[g].clone() } else { carrier.inv(&images[g]) };
        suffix = carrier.mul(&img, &suffix);
    }
    out
}

/// Fox derivative over a finite quotient described by an enumeration.
pub fn fox_derivative_table(w: &FreeWord, x: usize, en: &EnumeratedGroup) -> GroupRingElement {
    fox_derivative(w, x, &en.table, &en.gen_images)
}

/// The full gradient `h₁(w) = (∂w/∂x)_x`, a row of the derived module
/// `D_φ` (the free `ℤ[G]`-module on the generators).
pub fn fox_gradient(w: &FreeWord, en: &EnumeratedGroup) -> Vec<GroupRingElement> {
    (0..en.presentation.rank())
        .map(|x| fox_derivative_table(w, x, en))
        .collect()
}

/// The relator Jacobian `(∂r/∂x)` over `ℤ[G]`, with `G` enumerated within
/// `bound`. Rows are indexed by relators, columns by generators.
pub fn fox_jacobian(
    pres: &GroupPresentation,
    bound: usize,
) -> Result<(EnumeratedGroup, RingMatrix), AlgebraError> {
    let en = enumerate_fp_group(pres, bound)?;
    let m = jacobian_with(&en);
    Ok((en, m))
}

fn jacobian_with(en: &EnumeratedGroup) -> RingMatrix {
    let pres = &en.presentation;
    let mut m = RingMatrix::zero(pres.relators.len(), pres.rank());
    for (r, rel) in pres.relators.iter().enumerate() {
        for x in 0..pres.rank() {
            m.set(r, x, fox_derivative_table(rel, x, en));
        }
    }
    m
}

/// The column of `h₀(φx) = φx − 1` over the generators: the boundary
/// `D_φ → ℤ[G]` of the augmented row.
pub fn augmentation_column(en: &EnumeratedGroup) -> RingMatrix {
    let pres = &en.presentation;
    let mut m = RingMatrix::zero(pres.rank(), 1);
    for x in 0..pres.rank() {
        let mut e = GroupRingElement::term(en.gen_images[x], 1);
        e.add_term(en.table.id(), -1);
        m.set(x, 0, e);
    }
    m
}

/// A chain complex of free right `ℤ[G]`-modules with boundaries as
/// matrices; `boundaries[k]` maps degree `k+1` to degree `k`, acting on row
/// vectors from the right.
#[derive(Clone, Debug)]
pub struct OperatorChainComplex {
    pub group: EnumeratedGroup,
    /// rank of the free module in each degree, from degree 0 upwards
    pub dims: Vec<usize>,
    pub boundaries: Vec<RingMatrix>,
}

impl OperatorChainComplex {
    /// Checks shapes and that consecutive boundaries compose to zero.
    pub fn verify(&self) -> Result<(), AlgebraError> {
        if self.boundaries.len() + 1 != self.dims.len() && !self.dims.is_empty() {
            return Err(AlgebraError::Dimension(
                "boundary count does not match degree count".into(),
            ));
        }
        for (k, b) in self.boundaries.iter().enumerate() {
            if b.rows() != self.dims[k + 1] || b.cols() != self.dims[k] {
                return Err(AlgebraError::Dimension(format!(
                    "boundary {k} has shape {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    self.dims[k + 1],
                    self.dims[k]
                )));
            }
        }
        for k in 0..self.boundaries.len().saturating_sub(1) {
            let prod = self.boundaries[k + 1].mul(&self.boundaries[k], &self.group.table)?;
            if !prod.is_zero() {
                return Err(AlgebraError::Dimension(format!(
                    "∂{}∘∂{} is nonzero",
                    k + 1,
                    k + 2
                )));
            }
        }
        Ok(())
    }
}

/// `∇` of the free crossed complex of a presentation: the chain complex
/// `ℤ[G] ← D_φ ← C(ω)ᵃᵇ` with `∂₁ = (φx − 1)` and `∂₂` the Fox Jacobian.
pub fn nabla_of_presentation(
    pres: &GroupPresentation,
    bound: usize,
) -> Result<OperatorChainComplex, AlgebraError> {
    let (en, jac) = fox_jacobian(pres, bound)?;
    let b0 = augmentation_column(&en);
    let dims = vec![1, pres.rank(), pres.relators.len()];
    let c = OperatorChainComplex { group: en, dims, boundaries: vec![b0, jac] };
    c.verify()?;
    Ok(c)
}

/// Report of the commutation checks of the derived diagram
///
/// ```text
///   C(ω) ──∂──> F(X) ──φ──> G
///    |h₂         |h₁         |h₀
///    v           v           v
///  ℤ[G]^R ─∂₂─> D_φ ──∂₁──> ℤ[G]
/// ```
#[derive(Clone, Debug)]
pub struct DiagramReport {
    /// ∂₂∘h₂ = h₁∘∂ on the sampled free-crossed-module elements
    pub square_top: bool,
    /// ∂₁∘h₁ = h₀∘φ on the sampled words
    pub square_bottom: bool,
    /// ∂₁∘∂₂ = 0 as matrices
    pub dd_zero: bool,
    /// Ker ∂₁ = Im ∂₂ at D_φ (lattice equality, not just ranks)
    pub exact_at_dphi: bool,
    pub elements_checked: usize,
    pub words_checked: usize,
}

impl DiagramReport {
    pub fn all_ok(&self) -> bool {
        self.square_top && self.square_bottom && self.dd_zero && self.exact_at_dphi
    }
}

/// Multiplies a row over `ℤ[G]` by a ring matrix.
pub fn row_times_matrix(
    row: &[GroupRingElement],
    m: &RingMatrix,
    g: &crate::table::FiniteGroupTable,
) -> Vec<GroupRingElement> {
    assert_eq!(row.len(), m.rows());
    (0..m.cols())
        .map(|j| {
            let mut acc = GroupRingElement::zero();
            for (i, r) in row.iter().enumerate() {
                acc = acc.add(&r.mul(m.get(i, j), g));
            }
            acc
        })
        .collect()
}

/// Exhaustively verifies the derived diagram for `pres` over all
/// free-crossed-module sequences of length ≤ `max_seq` with conjugators of
/// length ≤ `max_conj`, and all reduced words of length ≤ `max_word`.
pub fn derived_diagram_check(
    pres: &GroupPresentation,
    bound: usize,
    max_seq: usize,
    max_conj: usize,
    max_word: usize,
) -> Result<DiagramReport, AlgebraError> {
    use crate::fcm::{FcmElement, FcmTerm};
    let (en, jac) = fox_jacobian(pres, bound)?;
    let b0 = augmentation_column(&en);

    // ∂₁∘∂₂ = 0
    let dd_zero = jac.mul(&b0, &en.table)?.is_zero();

    // exactness at D_φ: Ker(∂₁ expanded) equals the row lattice of
    // (∂₂ expanded)
    let jac_int = jac.to_int_matrix(&en.table);
    let b0_int = b0.to_int_matrix(&en.table);
    let ker = left_kernel(&b0_int)?;
    let exact_at_dphi = match lattice_quotient(&ker, &jac_int) {
        Ok((0, tors)) if tors.is_empty() => true,
        Ok(_) => false,
        Err(_) => false, // Im ∂₂ not inside Ker ∂₁
    };

    // enumerate conjugator words (reduced, length ≤ max_conj)
    let conjs = reduced_words(pres.rank(), max_conj);
    // single terms
    let mut terms: Vec<FcmTerm> = Vec::new();
    for r in 0..pres.relators.len() {
        for sign in [1i8, -1] {
            for c in &conjs {
                terms.push(FcmTerm::new(r, sign, c.clone()));
            }
        }
    }
    // sequences of length ≤ max_seq
    let mut elements: Vec<FcmElement> = vec![FcmElement::identity()];
    let mut layer: Vec<FcmElement> = vec![FcmElement::identity()];
    for _ in 0..max_seq {
        let mut next = Vec::new();
        for e in &layer {
            for t in &terms {
                let mut seq = e.terms.clone();
                seq.push(t.clone());
                next.push(FcmElement { terms: seq });
            }
        }
        elements.extend(next.iter().cloned());
        layer = next;
    }

    let mut square_top = true;
    for e in &elements {
        let lhs = row_times_matrix(&e.h2(&en), &jac, &en.table);
        let rhs: Vec<GroupRingElement> = fox_gradient(&e.boundary(&pres.relators), &en);
        if lhs != rhs {
            square_top = false;
            break;
        }
    }

    let words = reduced_words(pres.rank(), max_word);
    let mut square_bottom = true;
    for w in &words {
        let lhs = row_times_matrix(&fox_gradient(w, &en), &b0, &en.table);
        let mut rhs = GroupRingElement::term(en.eval(w), 1);
        rhs.add_term(en.table.id(), -1);
        if lhs[0] != rhs {
            square_bottom = false;
            break;
        }
    }

    Ok(DiagramReport {
        square_top,
        square_bottom,
        dd_zero,
        exact_at_dphi,
        elements_checked: elements.len(),
        words_checked: words.len(),
    })
}

/// All freely reduced words of length ≤ `max_len` on `rank` generators.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::identity()];
    let mut layer = vec![FreeWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..rank {
                for s in [1i8, -1] {
                    let v = w.mul(&FreeWord::from_letters(&[(g, s)]));
                    if v.len() == w.len() + 1 {
                        next.push(v);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The module of identities among relations: `ℤ[G]`-generators of the
/// kernel of the Fox Jacobian and the ℤ-rank of its integer form.
#[derive(Clone, Debug)]
pub struct IdentitiesModule {
    pub generators: Vec<Vec<GroupRingElement>>,
    pub z_rank: usize,
}

pub fn identities_module(
    pres: &GroupPresentation,
    bound: usize,
) -> Result<IdentitiesModule, AlgebraError> {
    let (en, jac) = fox_jacobian(pres, bound)?;
    let gens = crate::ring::module_kernel(&jac, &en.table)?;
    Ok(IdentitiesModule { z_rank: gens.len(), generators: gens })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FreeCarrier;

    fn xw() -> FreeWord {
        FreeWord::generator(0)
    }

    fn x_pow_pres(n: i64) -> GroupPresentation {
        GroupPresentation::unnamed(1, vec![xw().pow(n)])
    }

    #[test]
    fn base_cases() {
        let free = FreeCarrier;
        let images = vec![FreeWord::generator(0), FreeWord::generator(1)];
        let dx = fox_derivative(&xw(), 0, &free, &images);
        assert_eq!(dx, RingElem::term(FreeWord::identity(), 1));
        let dy = fox_derivative(&FreeWord::generator(1), 0, &free, &images);
        assert!(dy.is_zero());
    }

    #[test]
    fn inverse_case() {
        // ∂(x⁻¹)/∂x = −(φx)⁻¹, forced by 0 = ∂(x·x⁻¹)
        let free = FreeCarrier;
        let images = vec![FreeWord::generator(0)];
        let d = fox_derivative(&xw().inv(), 0, &free, &images);
        assert_eq!(d, RingElem::term(FreeWord::generator(0).inv(), -1));
    }

    #[test]
    fn powers_by_induction_oracle() {
        // ∂(xⁿ)/∂x = 1 + φx + … + (φx)ⁿ⁻¹, built independently by the
        // derivation law ∂(x·xⁿ⁻¹) = ∂x·φ(xⁿ⁻¹) + ∂(xⁿ⁻¹)
        let free = FreeCarrier;
        let images = vec![FreeWord::generator(0)];
        for n in 1..=6i64 {
            let mut expect = RingElem::zero();
            for k in 0..n {
                expect.add_term(xw().pow(k), 1);
            }
            assert_eq!(fox_derivative(&xw().pow(n), 0, &free, &images), expect, "n = {n}");
        }
    }

    #[test]
    fn derivation_law_exhaustive_short() {
        // ∂(uv) = (∂u)^{φv} + ∂v on all reduced words of length ≤ 3 over
        // two generators, in the free carrier (the sharpest check)
        let free = FreeCarrier;
        let images = vec![FreeWord::generator(0), FreeWord::generator(1)];
        let words = reduced_words(2, 3);
        for u in &words {
            for v in &words {
                for x in 0..2 {
                    let du = fox_derivative(u, x, &free, &images);
                    let dv = fox_derivative(v, x, &free, &images);
                    let lhs = fox_derivative(&u.mul(v), x, &free, &images);
                    let rhs = du.translate(v, &free).add(&dv);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn jacobian_of_x_squared() {
        let (en, jac) = fox_jacobian(&x_pow_pres(2), 16).unwrap();
        assert_eq!(jac.rows(), 1);
        assert_eq!(jac.cols(), 1);
        let x = en.gen_images[0];
        let expect = GroupRingElement::term(0, 1).add(&GroupRingElement::term(x, 1));
        assert_eq!(jac.get(0, 0), &expect);
    }

    #[test]
    fn jacobian_of_x() {
        let (_en, jac) = fox_jacobian(&x_pow_pres(1), 4).unwrap();
        assert_eq!(jac.get(0, 0), &GroupRingElement::term(0, 1));
    }

    #[test]
    fn jacobian_of_klein_four() {
        // ⟨x,y | x², y², (xy)²⟩ over ℤ[C2×C2]: 3×2 matrix
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let pres = GroupPresentation::unnamed(2, vec![x.pow(2), y.pow(2), x.mul(&y).pow(2)]);
        let (en, jac) = fox_jacobian(&pres, 16).unwrap();
        assert_eq!(en.order(), 4);
        assert_eq!((jac.rows(), jac.cols()), (3, 2));
        // entrywise oracle from the right derivation law on xyxy: the two
        // x-letters contribute φ(yxy) and φ(y)
        let d = fox_derivative_table(&x.mul(&y).pow(2), 0, &en);
        assert_eq!(jac.get(2, 0), &d);
        let mut expect = GroupRingElement::term(en.eval(&y.mul(&x).mul(&y)), 1);
        expect.add_term(en.eval(&y), 1);
        assert_eq!(&expect, jac.get(2, 0));
    }

    #[test]
    fn diagram_commutes_for_x2_and_x3() {
        for n in [2i64, 3] {
            let report = derived_diagram_check(&x_pow_pres(n), 16, 2, 1, 3).unwrap();
            assert!(report.all_ok(), "n = {n}: {report:?}");
            assert!(report.elements_checked > 10);
        }
    }

    #[test]
    fn identities_module_ranks() {
        // Ker(1 + x + … + xⁿ⁻¹) in ℤ[Cn] has ℤ-rank n−1
        for n in 2..=5i64 {
            let im = identities_module(&x_pow_pres(n), 32).unwrap();
            assert_eq!(im.z_rank as i64, n - 1, "n = {n}");
            // every generator times the Jacobian is zero
            let (en, jac) = fox_jacobian(&x_pow_pres(n), 32).unwrap();
            for g in &im.generators {
                let prod = row_times_matrix(g, &jac, &en.table);
                assert!(prod.iter().all(|e| e.is_zero()));
            }
        }
        // ⟨x | x⟩: trivial module
        assert_eq!(identities_module(&x_pow_pres(1), 4).unwrap().z_rank, 0);
    }

    #[test]
    fn identities_generator_for_x2_is_one_minus_x() {
        let im = identities_module(&x_pow_pres(2), 16).unwrap();
        assert_eq!(im.z_rank, 1);
        let g = &im.generators[0][0];
        let expect = GroupRingElement::term(0, 1).sub(&GroupRingElement::term(1, 1));
        assert!(g == &expect || g == &expect.neg(), "{g:?}");
    }

    #[test]
    fn nabla_of_x_squared() {
        // ℤ[C2] ←(x−1)─ ℤ[C2] ←(1+x)─ ℤ[C2]
        let c = nabla_of_presentation(&x_pow_pres(2), 16).unwrap();
        assert_eq!(c.dims, vec![1, 1, 1]);
        let x = c.group.gen_images[0];
        let xm1 = GroupRingElement::term(x, 1).sub(&GroupRingElement::term(0, 1));
        let xp1 = GroupRingElement::term(x, 1).add(&GroupRingElement::term(0, 1));
        assert_eq!(c.boundaries[0].get(0, 0), &xm1);
        assert_eq!(c.boundaries[1].get(0, 0), &xp1);
        c.verify().unwrap();
    }

    #[test]
    fn nabla_rejects_nothing_but_checks_dd() {
        for n in 2..=4i64 {
            nabla_of_presentation(&x_pow_pres(n), 16).unwrap().verify().unwrap();
        }
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let pres = GroupPresentation::unnamed(2, vec![x.pow(2), y.pow(2), x.mul(&y).pow(2)]);
        nabla_of_presentation(&pres, 16).unwrap().verify().unwrap();
    }
}
