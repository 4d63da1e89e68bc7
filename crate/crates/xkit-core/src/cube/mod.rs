//! Combinatorics of the n-cube: cells as vectors over `{0, 1, *}`,
//! face-closed subcomplexes, elementary collapses and replayable collapse
//! certificates, product collapses, partial boxes, and subdivisions.

pub mod boxes;
pub mod subdivision;

pub use boxes::{box_chain, BoxChain, PartialBox};
pub use subdivision::{compose_check, subdivide, FaceLabels, Subdivision};

use crate::error::CubeError;
use std::collections::BTreeSet;
use std::fmt;

/// One coordinate of a cube cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Zero,
    One,
    Free,
}

impl Coord {
    pub fn fixed(v: bool) -> Self {
        if v {
            Coord::One
        } else {
            Coord::Zero
        }
    }
}

/// A cell of `Iⁿ`: `*` marks free coordinates; the dimension is the number
/// of free coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeCell(pub Vec<Coord>);

macro_rules! fmt_cell {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for c in &self.0 {
                let ch = match c {
                    Coord::Zero => '0',
                    Coord::One => '1',
                    Coord::Free => '*',
                };
                write!(f, "{ch}")?;
            }
            Ok(())
        }
    };
}

impl fmt::Debug for CubeCell {
    fmt_cell!();
}

impl fmt::Display for CubeCell {
    fmt_cell!();
}

impl CubeCell {
    /// Parses a spec like `*1*` (`0`, `1`, `*`).
    pub fn parse(s: &str) -> Option<CubeCell> {
        let mut v = Vec::with_capacity(s.len());
        for ch in s.chars() {
            v.push(match ch {
                '0' => Coord::Zero,
                '1' => Coord::One,
                '*' => Coord::Free,
                _ => return None,
            });
        }
        Some(CubeCell(v))
    }

    /// The full cube `Iⁿ` as a single top cell.
    pub fn top(n: usize) -> CubeCell {
        CubeCell(vec![Coord::Free; n])
    }

    /// A vertex from its 0/1 coordinates.
    pub fn vertex(coords: &[bool]) -> CubeCell {
        CubeCell(coords.iter().map(|&b| Coord::fixed(b)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.0.len()
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|&&c| c == Coord::Free).count()
    }

    /// All cells obtained by setting one free coordinate; `2·dim` of them.
    pub fn faces(&self) -> Vec<CubeCell> {
        let mut out = Vec::with_capacity(2 * self.dimension());
        for (i, &c) in self.0.iter().enumerate() {
            if c == Coord::Free {
                for v in [Coord::Zero, Coord::One] {
                    let mut f = self.0.clone();
                    f[i] = v;
                    out.push(CubeCell(f));
                }
            }
        }
        out
    }

    /// Is `other` a face of `self` of any codimension (or equal)?
    pub fn contains(&self, other: &CubeCell) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(&a, &b)| a == Coord::Free || a == b)
    }

    /// Appends a fixed or free last coordinate (the prism construction).
    pub fn extend(&self, c: Coord) -> CubeCell {
        let mut v = self.0.clone();
        v.push(c);
        CubeCell(v)
    }
}

/// A face-closed set of cells of `Iⁿ`.
#[derive(Clone, PartialEq, Eq)]
pub struct CubeComplex {
    pub n: usize,
    cells: BTreeSet<CubeCell>,
}

impl fmt::Debug for CubeComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeComplex(n={}, {} cells)", self.n, self.cells.len())
    }
}

impl CubeComplex {
    pub fn empty(n: usize) -> Self {
        CubeComplex { n, cells: BTreeSet::new() }
    }

    /// Builds a complex from cells, verifying face closure.
    pub fn new(n: usize, cells: impl IntoIterator<Item = CubeCell>) -> Result<Self, CubeError> {
        let cells: BTreeSet<CubeCell> = cells.into_iter().collect();
        for c in &cells {
            if c.ambient() != n {
                return Err(CubeError::WrongDimension { expected: n, got: c.ambient() });
            }
            for f in c.faces() {
                if !cells.contains(&f) {
                    return Err(CubeError::NotClosed(f.to_string()));
                }
            }
        }
        Ok(CubeComplex { n, cells })
    }

    /// The face closure of a set of generating cells.
    pub fn closure(n: usize, gens: impl IntoIterator<Item = CubeCell>) -> Self {
        let mut cells = BTreeSet::new();
        let mut stack: Vec<CubeCell> = gens.into_iter().collect();
        while let Some(c) = stack.pop() {
            assert_eq!(c.ambient(), n, "ambient mismatch in closure");
            if cells.insert(c.clone()) {
                stack.extend(c.faces());
            }
        }
        CubeComplex { n, cells }
    }

    /// The full cube `Iⁿ` with all `3ⁿ` cells.
    pub fn full(n: usize) -> Self {
        CubeComplex::closure(n, [CubeCell::top(n)])
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &CubeCell) -> bool {
        self.cells.contains(c)
    }

    pub fn cells(&self) -> impl Iterator<Item = &CubeCell> {
        self.cells.iter()
    }

    pub fn is_subcomplex_of(&self, other: &CubeComplex) -> bool {
        self.n == other.n && self.cells.iter().all(|c| other.cells.contains(c))
    }

    /// Direct (codimension-one) cofaces of `b` within the complex.
    pub fn cofaces(&self, b: &CubeCell) -> Vec<CubeCell> {
        let mut out = Vec::new();
        for (i, &c) in b.0.iter().enumerate() {
            if c != Coord::Free {
                let mut up = b.0.clone();
                up[i] = Coord::Free;
                let up = CubeCell(up);
                if self.cells.contains(&up) {
                    out.push(up);
                }
            }
        }
        out
    }

    /// The prism `self × I`: cells `c×0`, `c×1`, `c×*`.
    pub fn prism(&self) -> CubeComplex {
        let mut cells = BTreeSet::new();
        for c in &self.cells {
            for coord in [Coord::Zero, Coord::One, Coord::Free] {
                cells.insert(c.extend(coord));
            }
        }
        CubeComplex { n: self.n + 1, cells }
    }

    /// `self × {v}`.
    pub fn times_end(&self, v: bool) -> CubeComplex {
        CubeComplex {
            n: self.n + 1,
            cells: self.cells.iter().map(|c| c.extend(Coord::fixed(v))).collect(),
        }
    }

    pub fn union(&self, other: &CubeComplex) -> CubeComplex {
        assert_eq!(self.n, other.n);
        CubeComplex { n: self.n, cells: self.cells.union(&other.cells).cloned().collect() }
    }
}

/// One elementary collapse step: remove `cell` together with its free face
/// `face`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseStep {
    pub cell: CubeCell,
    pub face: CubeCell,
}

/// Removes the pair `(a, b)` where `b` is a free face of `a`: `b` must be a
/// codimension-one face of `a` and of no other cell of the complex.
/// Returns the smaller complex.
pub fn elementary_collapse(
    complex: &CubeComplex,
    a: &CubeCell,
    b: &CubeCell,
) -> Result<CubeComplex, CubeError> {
    if !complex.contains(a) {
        return Err(CubeError::NotInComplex(a.to_string()));
    }
    if !complex.contains(b) {
        return Err(CubeError::NotInComplex(b.to_string()));
    }
    if a.dimension() == 0 || b.dimension() + 1 != a.dimension() || !a.contains(b) {
        return Err(CubeError::NotFace { cell: a.to_string(), face: b.to_string() });
    }
    for up in complex.cofaces(b) {
        if &up != a {
            return Err(CubeError::NotFree { face: b.to_string(), other: up.to_string() });
        }
    }
    // `a` itself has no cofaces: any such cell would also have `b` as a
    // deeper face, contradicting freeness via the intermediate cell.
    let mut cells = complex.cells.clone();
    cells.remove(a);
    cells.remove(b);
    Ok(CubeComplex { n: complex.n, cells })
}

/// Replays a collapse certificate from `start`, verifying the freeness
/// precondition at every step; returns the final complex.
pub fn replay(start: &CubeComplex, steps: &[CollapseStep]) -> Result<CubeComplex, CubeError> {
    let mut current = start.clone();
    for s in steps {
        current = elementary_collapse(&current, &s.cell, &s.face)?;
    }
    Ok(current)
}

/// A deterministic collapse of `Iⁿ` to the vertex `v`, direction by
/// direction: first squash direction 1 onto `v₁`, then direction 2, and so
/// on. The certificate has exactly `(3ⁿ−1)/2` steps.
pub fn collapse_to_vertex(n: usize, v: &[bool]) -> Vec<CollapseStep> {
    assert_eq!(v.len(), n);
    let mut steps = Vec::new();
    // after k phases, coordinates 0..k are fixed at v[0..k]
    for k in 0..n {
        // cells of the remaining cube on coordinates k+1..n, in decreasing
        // dimension
        let tail = n - k - 1;
        let mut suffixes: Vec<Vec<Coord>> = vec![Vec::new()];
        for _ in 0..tail {
            let mut next = Vec::new();
            for s in &suffixes {
                for c in [Coord::Zero, Coord::One, Coord::Free] {
                    let mut t = s.clone();
                    t.push(c);
                    next.push(t);
                }
            }
            suffixes = next;
        }
        suffixes.sort_by_key(|s| {
            std::cmp::Reverse(s.iter().filter(|&&c| c == Coord::Free).count())
        });
        for suffix in suffixes {
            let mut cell = Vec::with_capacity(n);
            for i in 0..k {
                cell.push(Coord::fixed(v[i]));
            }
            cell.push(Coord::Free);
            cell.extend(suffix.iter().copied());
            let mut face = cell.clone();
            face[k] = Coord::fixed(!v[k]);
            steps.push(CollapseStep { cell: CubeCell(cell), face: CubeCell(face) });
        }
    }
    steps
}

/// The product collapse `B×I ↘ B×{0} ∪ C×I` for a subcomplex `C ⊆ B`,
/// removing the prisms over `B∖C` from their free top faces in decreasing
/// dimension. Returns the certificate; the start complex is `B.prism()`.
pub fn product_collapse(
    b: &CubeComplex,
    c: &CubeComplex,
) -> Result<Vec<CollapseStep>, CubeError> {
    if !c.is_subcomplex_of(b) {
        let missing = c
            .cells()
            .find(|cell| !b.contains(cell))
            .map(|cell| cell.to_string())
            .unwrap_or_else(|| "ambient mismatch".into());
        return Err(CubeError::NotSubcomplex(missing));
    }
    let mut removed: Vec<&CubeCell> = b.cells().filter(|cell| !c.contains(cell)).collect();
    removed.sort_by_key(|cell| std::cmp::Reverse(cell.dimension()));
    Ok(removed
        .into_iter()
        .map(|cell| CollapseStep {
            cell: cell.extend(Coord::Free),
            face: cell.extend(Coord::One),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        let sq = CubeCell::parse("**").unwrap();
        let faces = sq.faces();
        assert_eq!(faces.len(), 4);
        let expect: Vec<CubeCell> = ["0*", "1*", "*0", "*1"]
            .iter()
            .map(|s| CubeCell::parse(s).unwrap())
            .collect();
        for f in &expect {
            assert!(faces.contains(f));
        }
        assert!(CubeCell::parse("01").unwrap().faces().is_empty());
        assert_eq!(CubeCell::parse("*1*").unwrap().faces().len(), 4);
    }

    #[test]
    fn full_cube_has_three_to_the_n_cells() {
        for n in 0..=5 {
            assert_eq!(CubeComplex::full(n).len(), 3usize.pow(n as u32));
        }
    }

    #[test]
    fn closure_is_validated() {
        let c = CubeComplex::new(2, [CubeCell::parse("**").unwrap()]);
        assert!(matches!(c, Err(CubeError::NotClosed(_))));
        let ok = CubeComplex::closure(2, [CubeCell::parse("**").unwrap()]);
        assert_eq!(ok.len(), 9);
    }

    #[test]
    fn collapse_square_from_free_edge() {
        let b = CubeComplex::full(2);
        let a = CubeCell::parse("**").unwrap();
        let e = CubeCell::parse("*1").unwrap();
        let c = elementary_collapse(&b, &a, &e).unwrap();
        // |C| = |B| − 2: three edges + four vertices
        assert_eq!(c.len(), b.len() - 2);
        assert_eq!(c.cells().filter(|x| x.dimension() == 1).count(), 3);
        assert_eq!(c.cells().filter(|x| x.dimension() == 0).count(), 4);
    }

    #[test]
    fn shared_edge_is_not_free() {
        // two squares side by side inside I^2 is impossible; use the prism
        // I^2 = I×I with an inner edge: build two squares in 3 coords
        let left = CubeComplex::closure(3, [CubeCell::parse("**0").unwrap()]);
        let right = CubeComplex::closure(3, [CubeCell::parse("**1").unwrap()]);
        let shared = CubeComplex::closure(3, [CubeCell::parse("***").unwrap()]);
        // the edge *10 is a face of **0 and ***: not free in the closure
        let b = shared.union(&left).union(&right);
        let err = elementary_collapse(
            &b,
            &CubeCell::parse("**0").unwrap(),
            &CubeCell::parse("*10").unwrap(),
        );
        assert!(matches!(err, Err(CubeError::NotFree { .. })));
    }

    #[test]
    fn edge_collapses_to_vertex() {
        // complex {edge, 2 vertices}: collapsing (edge, far vertex) leaves
        // one vertex
        let b = CubeComplex::full(1);
        let c = elementary_collapse(
            &b,
            &CubeCell::parse("*").unwrap(),
            &CubeCell::parse("1").unwrap(),
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.contains(&CubeCell::parse("0").unwrap()));
    }

    #[test]
    fn collapse_to_vertex_lengths_and_replay() {
        for n in 1..=4 {
            let v = vec![false; n];
            let steps = collapse_to_vertex(n, &v);
            assert_eq!(steps.len(), (3usize.pow(n as u32) - 1) / 2);
            let end = replay(&CubeComplex::full(n), &steps).unwrap();
            assert_eq!(end.len(), 1);
            assert!(end.contains(&CubeCell::vertex(&v)));
        }
    }

    #[test]
    fn collapse_to_other_vertices_replays() {
        for bits in 0..8u32 {
            let v: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
            let steps = collapse_to_vertex(3, &v);
            let end = replay(&CubeComplex::full(3), &steps).unwrap();
            assert_eq!(end.len(), 1);
            assert!(end.contains(&CubeCell::vertex(&v)));
        }
    }

    #[test]
    fn product_collapse_edge_endpoint() {
        // B = edge, C = one endpoint: the square collapses to
        // (edge×{0}) ∪ (endpoint×I) in 2 steps
        let b = CubeComplex::full(1);
        let c = CubeComplex::closure(1, [CubeCell::parse("0").unwrap()]);
        let steps = product_collapse(&b, &c).unwrap();
        assert_eq!(steps.len(), 2);
        let end = replay(&b.prism(), &steps).unwrap();
        let expect = b.times_end(false).union(&c.prism());
        assert_eq!(end, expect);
    }

    #[test]
    fn product_collapse_trivial_when_equal() {
        let b = CubeComplex::full(2);
        let steps = product_collapse(&b, &b).unwrap();
        assert!(steps.is_empty());
    }

    #[test]
    fn product_collapse_square_over_boundary() {
        // B = square, C = ∂square: one step, the top cell from its free
        // top face
        let b = CubeComplex::full(2);
        let boundary = CubeComplex::new(
            2,
            b.cells().filter(|c| c.dimension() < 2).cloned().collect::<Vec<_>>(),
        )
        .unwrap();
        let steps = product_collapse(&b, &boundary).unwrap();
        assert_eq!(steps.len(), 1);
        let end = replay(&b.prism(), &steps).unwrap();
        assert_eq!(end, b.times_end(false).union(&boundary.prism()));
    }

    #[test]
    fn product_collapse_rejects_non_subcomplex() {
        let b = CubeComplex::closure(1, [CubeCell::parse("0").unwrap()]);
        let c = CubeComplex::full(1);
        assert!(matches!(product_collapse(&b, &c), Err(CubeError::NotSubcomplex(_))));
    }

    #[test]
    fn every_elementary_collapse_removes_two_cells() {
        let full = CubeComplex::full(3);
        let steps = collapse_to_vertex(3, &[true, false, true]);
        let mut current = full;
        for s in &steps {
            let next = elementary_collapse(&current, &s.cell, &s.face).unwrap();
            assert_eq!(next.len() + 2, current.len());
            current = next;
        }
    }
}
