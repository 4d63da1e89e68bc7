//! Partial boxes in a cell of `Iⁿ` and the chain construction between
//! nested partial boxes.
//!
//! A partial box in an `r`-cell `C` is the subcomplex generated by one
//! `(r−1)`-face `b` (the base) together with further `(r−1)`-faces none of
//! which is opposite to `b` (two faces are opposite when they do not meet).
//! For nested partial boxes `B′ ⊆ B` there is always a chain
//! `B = Bₛ ↘ … ↘ B₁ = B′` where each `Bᵢ` is a partial box,
//! `Bᵢ₊₁ = Bᵢ ∪ aᵢ` for an `(r−1)`-face `aᵢ`, and `aᵢ ∩ Bᵢ` is a partial
//! box in `aᵢ`; the construction below emits one deterministically, along
//! with a replayable elementary-collapse certificate.

use super::{elementary_collapse, CollapseStep, Coord, CubeCell, CubeComplex};
use crate::error::CubeError;
use std::collections::BTreeSet;

/// A face of a cell: the ambient coordinate that gets fixed, and its value.
pub type Face = (usize, bool);

fn opposite(f: Face) -> Face {
    (f.0, !f.1)
}

/// A partial box, stored by its generating data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBox {
    /// the ambient r-cell
    pub cell: CubeCell,
    pub base: Face,
    pub sides: Vec<Face>,
}

impl PartialBox {
    /// Validates the generating data: the base and sides are distinct
    /// faces of `cell` and no side is opposite to the base.
    pub fn new(cell: CubeCell, base: Face, sides: Vec<Face>) -> Result<Self, CubeError> {
        let b = PartialBox { cell, base, sides };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), CubeError> {
        let free: Vec<usize> = (0..self.cell.ambient())
            .filter(|&i| self.cell.0[i] == Coord::Free)
            .collect();
        let check = |f: Face| -> Result<(), CubeError> {
            if !free.contains(&f.0) {
                return Err(CubeError::NotPartialBox(format!(
                    "coordinate {} is not free in {}",
                    f.0, self.cell
                )));
            }
            Ok(())
        };
        check(self.base)?;
        let mut seen: BTreeSet<Face> = [self.base].into();
        for &s in &self.sides {
            check(s)?;
            if s == opposite(self.base) {
                return Err(CubeError::NotPartialBox(format!(
                    "side ({},{}) is opposite to the base",
                    s.0, s.1 as u8
                )));
            }
            if !seen.insert(s) {
                return Err(CubeError::NotPartialBox("duplicate face".into()));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.cell.dimension()
    }

    /// The face set `{base} ∪ sides`.
    pub fn faces(&self) -> BTreeSet<Face> {
        let mut s: BTreeSet<Face> = self.sides.iter().copied().collect();
        s.insert(self.base);
        s
    }

    /// The cell of a generating face.
    pub fn face_cell(&self, f: Face) -> CubeCell {
        let mut v = self.cell.0.clone();
        v[f.0] = Coord::fixed(f.1);
        CubeCell(v)
    }

    /// The generated complex: the face closure of the generating faces.
    pub fn materialize(&self) -> CubeComplex {
        CubeComplex::closure(
            self.cell.ambient(),
            self.faces().into_iter().map(|f| self.face_cell(f)),
        )
    }
}

/// Builds a partial box from a face set by choosing the smallest valid
/// base (a face whose opposite is absent); `None` when no base exists or
/// the set is empty.
pub fn from_face_set(cell: &CubeCell, faces: &BTreeSet<Face>) -> Option<PartialBox> {
    let base = *faces.iter().find(|&&f| !faces.contains(&opposite(f)))?;
    let sides: Vec<Face> = faces.iter().copied().filter(|&f| f != base).collect();
    PartialBox::new(cell.clone(), base, sides).ok()
}

/// One step of a chain: the face removed and the partial box it meets.
#[derive(Clone, Debug)]
pub struct ChainStep {
    /// the `(r−1)`-face `aᵢ` with `Bᵢ₊₁ = Bᵢ ∪ aᵢ`
    pub added_face: Face,
    /// `aᵢ ∩ Bᵢ`, a partial box in `aᵢ`
    pub intersection: PartialBox,
}

/// A chain of partial boxes from `B` down to `B′`, with a full
/// elementary-collapse certificate.
#[derive(Clone, Debug)]
pub struct BoxChain {
    /// `boxes[0] = B` down to `boxes.last() = B′`
    pub boxes: Vec<PartialBox>,
    /// `steps[i]` turns `boxes[i]` into `boxes[i+1]`
    pub chain_steps: Vec<ChainStep>,
    /// the flattened collapse certificate from `B.materialize()` to
    /// `B′.materialize()`
    pub collapses: Vec<CollapseStep>,
}

/// Collapses the closed cell `a` onto a partial box `p` inside it: one
/// elementary collapse removes `a` with the face opposite-omitted, the
/// rest is a recursive chain from the remaining box down to `p`.
fn collapse_cell_onto(a: &CubeCell, p: &PartialBox, out: &mut Vec<CollapseStep>) {
    debug_assert_eq!(&p.cell, a);
    let all: BTreeSet<Face> = (0..a.ambient())
        .filter(|&i| a.0[i] == Coord::Free)
        .flat_map(|i| [(i, false), (i, true)])
        .collect();
    let p_faces = p.faces();
    let omit = *all
        .iter()
        .find(|f| !p_faces.contains(f))
        .expect("a partial box never contains every face of its cell");
    out.push(CollapseStep { cell: a.clone(), face: p.face_cell(omit) });
    if p_faces.len() + 1 == all.len() {
        // p is already the box missing `omit`
        return;
    }
    let box_faces: BTreeSet<Face> = all.into_iter().filter(|&f| f != omit).collect();
    let bx = PartialBox::new(
        a.clone(),
        opposite(omit),
        box_faces.iter().copied().filter(|&f| f != opposite(omit)).collect(),
    )
    .expect("a box is a partial box based at the face opposite the omitted one");
    let chain = box_chain(&bx, p).expect("chain from a box to a contained partial box");
    out.extend(chain.collapses);
}

/// The chain `B = Bₛ ↘ … ↘ B₁ = B′` between nested partial boxes in the
/// same cell. Deterministic: at each step the smallest removable face
/// whose opposite is still present is preferred, then the smallest
/// removable face.
pub fn box_chain(b: &PartialBox, b_prime: &PartialBox) -> Result<BoxChain, CubeError> {
    b.validate()?;
    b_prime.validate()?;
    if b.cell != b_prime.cell {
        return Err(CubeError::NotContained("different ambient cells".into()));
    }
    let target = b_prime.faces();
    let mut current = b.faces();
    if !target.is_subset(&current) {
        return Err(CubeError::NotContained(format!("{:?}", b_prime)));
    }
    let mut boxes = vec![b.clone()];
    let mut chain_steps = Vec::new();
    let mut collapses = Vec::new();
    while current != target {
        let removable: Vec<Face> =
            current.iter().copied().filter(|f| !target.contains(f)).collect();
        let face = removable
            .iter()
            .copied()
            .find(|&f| current.contains(&opposite(f)))
            .unwrap_or(removable[0]);
        let mut next = current.clone();
        next.remove(&face);
        // a_i ∩ B_i: the faces of `face`'s cell shared with the remaining
        // generating faces (all directions other than face.0)
        let a_cell = b.face_cell(face);
        let shared: BTreeSet<Face> =
            next.iter().copied().filter(|&(i, _)| i != face.0).collect();
        let intersection = from_face_set(&a_cell, &shared).ok_or_else(|| {
            CubeError::NotPartialBox(format!(
                "intersection with removed face ({},{}) has no base",
                face.0, face.1 as u8
            ))
        })?;
        collapse_cell_onto(&a_cell, &intersection, &mut collapses);
        let next_box = from_face_set(&b.cell, &next).ok_or_else(|| {
            CubeError::NotPartialBox("intermediate face set has no base".into())
        })?;
        chain_steps.push(ChainStep { added_face: face, intersection });
        boxes.push(next_box);
        current = next;
    }
    Ok(BoxChain { boxes, chain_steps, collapses })
}

/// Replays and re-verifies a chain: every intermediate is a valid partial
/// box, consecutive boxes differ by exactly the recorded face, every
/// intersection is a partial box in its face, and the collapse
/// certificate replays from `B` to `B′`.
pub fn verify_chain(b: &PartialBox, b_prime: &PartialBox, chain: &BoxChain) -> Result<(), CubeError> {
    if chain.boxes.first().map(|x| x.faces()) != Some(b.faces()) {
        return Err(CubeError::NotContained("chain does not start at B".into()));
    }
    if chain.boxes.last().map(|x| x.faces()) != Some(b_prime.faces()) {
        return Err(CubeError::NotContained("chain does not end at B'".into()));
    }
    for (k, step) in chain.chain_steps.iter().enumerate() {
        chain.boxes[k].validate()?;
        chain.boxes[k + 1].validate()?;
        let mut expect = chain.boxes[k + 1].faces();
        expect.insert(step.added_face);
        if expect != chain.boxes[k].faces() {
            return Err(CubeError::NotContained(format!("step {k} face mismatch")));
        }
        step.intersection.validate()?;
        // the recorded intersection generates a_i ∩ B_i
        let a_cell = chain.boxes[k].face_cell(step.added_face);
        if step.intersection.cell != a_cell {
            return Err(CubeError::NotContained(format!("step {k} wrong cell")));
        }
        let lower = chain.boxes[k + 1].materialize();
        let mut meet_cells = Vec::new();
        for c in CubeComplex::closure(a_cell.ambient(), [a_cell.clone()]).cells() {
            if lower.contains(c) {
                meet_cells.push(c.clone());
            }
        }
        let meet = CubeComplex::new(a_cell.ambient(), meet_cells)?;
        if meet != step.intersection.materialize() {
            return Err(CubeError::NotPartialBox(format!(
                "step {k}: recorded intersection does not equal aᵢ ∩ Bᵢ"
            )));
        }
    }
    let mut current = b.materialize();
    for s in &chain.collapses {
        current = elementary_collapse(&current, &s.cell, &s.face)?;
    }
    if current != b_prime.materialize() {
        return Err(CubeError::NotContained("collapse certificate misses B'".into()));
    }
    Ok(())
}

/// All partial boxes in `cell`, one per (face set, base) pair.
pub fn all_partial_boxes(cell: &CubeCell) -> Vec<PartialBox> {
    let free: Vec<usize> =
        (0..cell.ambient()).filter(|&i| cell.0[i] == Coord::Free).collect();
    let faces: Vec<Face> = free.iter().flat_map(|&i| [(i, false), (i, true)]).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << faces.len()) {
        let subset: Vec<Face> = faces
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask >> k & 1 == 1)
            .map(|(_, &f)| f)
            .collect();
        for &base in &subset {
            let sides: Vec<Face> = subset.iter().copied().filter(|&f| f != base).collect();
            if let Ok(pb) = PartialBox::new(cell.clone(), base, sides) {
                out.push(pb);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> CubeCell {
        CubeCell::parse("**").unwrap()
    }

    fn cube3() -> CubeCell {
        CubeCell::parse("***").unwrap()
    }

    #[test]
    fn partial_box_rejects_opposite_side() {
        assert!(PartialBox::new(square(), (0, false), vec![(0, true)]).is_err());
        assert!(PartialBox::new(square(), (0, false), vec![(1, false)]).is_ok());
    }

    #[test]
    fn box_bases_are_exactly_opposite_omitted() {
        // in r ≤ 3: the box omitting ω is generable precisely from the base
        // opposite ω
        for cell in [square(), cube3()] {
            let free: Vec<usize> = (0..cell.ambient()).collect();
            let faces: Vec<Face> =
                free.iter().flat_map(|&i| [(i, false), (i, true)]).collect();
            for &omit in &faces {
                let members: Vec<Face> =
                    faces.iter().copied().filter(|&f| f != omit).collect();
                for &base in &members {
                    let sides: Vec<Face> =
                        members.iter().copied().filter(|&f| f != base).collect();
                    let ok = PartialBox::new(cell.clone(), base, sides).is_ok();
                    assert_eq!(ok, base == opposite(omit), "omit {omit:?} base {base:?}");
                }
            }
        }
    }

    #[test]
    fn one_step_chain_in_a_square() {
        // B = base + one side, B' = base
        let b = PartialBox::new(square(), (0, false), vec![(1, false)]).unwrap();
        let bp = PartialBox::new(square(), (0, false), vec![]).unwrap();
        let chain = box_chain(&b, &bp).unwrap();
        assert_eq!(chain.chain_steps.len(), 1);
        verify_chain(&b, &bp, &chain).unwrap();
        // exhaust all side choices
        for side in [(1usize, false), (1usize, true)] {
            let b = PartialBox::new(square(), (0, false), vec![side]).unwrap();
            let chain = box_chain(&b, &bp).unwrap();
            verify_chain(&b, &bp, &chain).unwrap();
        }
    }

    #[test]
    fn trivial_chain() {
        let b = PartialBox::new(square(), (0, false), vec![(1, false)]).unwrap();
        let chain = box_chain(&b, &b).unwrap();
        assert!(chain.chain_steps.is_empty());
        assert!(chain.collapses.is_empty());
        verify_chain(&b, &b, &chain).unwrap();
    }

    #[test]
    fn chain_rejects_non_nested() {
        let b = PartialBox::new(square(), (0, false), vec![]).unwrap();
        let bp = PartialBox::new(square(), (1, false), vec![]).unwrap();
        assert!(matches!(box_chain(&b, &bp), Err(CubeError::NotContained(_))));
    }

    #[test]
    fn exhaustive_chains_in_the_square() {
        let boxes = all_partial_boxes(&square());
        for b in &boxes {
            for bp in &boxes {
                if bp.faces().is_subset(&b.faces()) {
                    let chain = box_chain(b, bp).unwrap();
                    verify_chain(b, bp, &chain).unwrap();
                }
            }
        }
    }

    #[test]
    fn exhaustive_chains_in_the_three_cell() {
        // the Key Proposition is unconditional: every nested pair of
        // partial boxes in a 3-cell admits a verified chain
        let boxes = all_partial_boxes(&cube3());
        assert!(!boxes.is_empty());
        let mut pairs = 0usize;
        for b in &boxes {
            for bp in &boxes {
                if bp.faces().is_subset(&b.faces()) {
                    pairs += 1;
                    let chain = box_chain(b, bp).unwrap_or_else(|e| {
                        panic!("no chain for {:?} ⊇ {:?}: {e}", b.faces(), bp.faces())
                    });
                    verify_chain(b, bp, &chain).unwrap();
                }
            }
        }
        assert!(pairs > 100, "checked {pairs} nested pairs");
    }

    #[test]
    fn chains_in_a_face_cell_of_i3() {
        // partial boxes living in a 2-cell of I³ (ambient coordinates
        // carried along)
        let cell = CubeCell::parse("*1*").unwrap();
        let boxes = all_partial_boxes(&cell);
        for b in &boxes {
            for bp in &boxes {
                if bp.faces().is_subset(&b.faces()) {
                    verify_chain(b, bp, &box_chain(b, bp).unwrap()).unwrap();
                }
            }
        }
    }
}
