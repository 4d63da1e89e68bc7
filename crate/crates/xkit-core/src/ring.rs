//! Group rings `ℤ[G]`, formal sums over a group carrier, matrices over a
//! group ring, and kernels of `ℤ[G]`-module maps via the regular
//! representation.
//!
//! Conventions are right-handed throughout: modules are right modules, the
//! action of `g` on a ring element is right multiplication, and a module
//! element is a row vector multiplying a matrix from the left.

use crate::error::AlgebraError;
use crate::matrix::{left_kernel, IntMatrix};
use crate::table::FiniteGroupTable;
use crate::word::FreeWord;
use std::collections::BTreeMap;

/// A group usable as the carrier of a group ring.
pub trait GroupCarrier {
    type Elt: Clone + Ord + Eq + std::fmt::Debug;
    fn identity(&self) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn inv(&self, a: &Self::Elt) -> Self::Elt;
}

impl GroupCarrier for FiniteGroupTable {
    type Elt = usize;
    fn identity(&self) -> usize {
        self.id()
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteGroupTable::mul(self, *a, *b)
    }
    fn inv(&self, a: &usize) -> usize {
        FiniteGroupTable::inv(self, *a)
    }
}

/// The free group on some generators, as a carrier (elements are reduced
/// words; the rank is not tracked here).
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeCarrier;

impl GroupCarrier for FreeCarrier {
    type Elt = FreeWord;
    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }
    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b)
    }
    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.inv()
    }
}

/// A formal ℤ-linear combination of group elements. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RingElem<K: Clone + Ord> {
    terms: BTreeMap<K, i64>,
}

/// `ℤ[G]` for a finite group table (elements indexed densely).
pub type GroupRingElement = RingElem<usize>;

impl<K: Clone + Ord + std::fmt::Debug> Default for RingElem<K> {
    fn default() -> Self {
        RingElem { terms: BTreeMap::new() }
    }
}

impl<K: Clone + Ord + std::fmt::Debug> std::fmt::Debug for RingElem<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}·{k:?}")?;
        }
        Ok(())
    }
}

impl<K: Clone + Ord + std::fmt::Debug> RingElem<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(k: K, coeff: i64) -> Self {
        let mut t = Self::zero();
        t.add_term(k, coeff);
        t
    }

    pub fn one<G: GroupCarrier<Elt = K>>(g: &G) -> Self {
        Self::term(g.identity(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, k: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        RingElem { terms: self.terms.iter().map(|(k, &c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        RingElem { terms: self.terms.iter().map(|(k, &c)| (k.clone(), c * n)).collect() }
    }

    pub fn mul<G: GroupCarrier<Elt = K>>(&self, other: &Self, g: &G) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(g.mul(a, b), ca * cb);
            }
        }
        out
    }

    /// Right translation by a single group element.
    pub fn translate<G: GroupCarrier<Elt = K>>(&self, x: &K, g: &G) -> Self {
        let mut out = Self::zero();
        for (a, c) in self.terms() {
            out.add_term(g.mul(a, x), c);
        }
        out
    }

    /// The augmentation `Σ coeffs`.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl GroupRingElement {
    /// Checks that all indices are inside the table.
    pub fn check_carrier(&self, g: &FiniteGroupTable) -> Result<(), AlgebraError> {
        for (&k, _) in self.terms() {
            if k >= g.order() {
                return Err(AlgebraError::BadElement { index: k, order: g.order() });
            }
        }
        Ok(())
    }

    /// Dense coefficient vector of length `|G|`.
    pub fn to_vec(&self, g: &FiniteGroupTable) -> Vec<i64> {
        let mut v = vec![0; g.order()];
        for (&k, c) in self.terms() {
            v[k] = c;
        }
        v
    }

    /// Matrix of right multiplication on `ℤ[G]`: row `x`, column `y` holds
    /// the coefficient of `y` in `x·self`.
    pub fn regular_matrix(&self, g: &FiniteGroupTable) -> IntMatrix {
        let n = g.order();
        let mut m = IntMatrix::zero(n, n);
        for x in 0..n {
            for (&a, c) in self.terms() {
                let y = g.mul(x, a);
                m.set(x, y, m.get(x, y) + c);
            }
        }
        m
    }
}

/// `add` or `mul`, for the CLI surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOpKind {
    Add,
    Mul,
}

/// Ring operation on `ℤ[G]` over a finite table.
pub fn group_ring_op(
    a: &GroupRingElement,
    b: &GroupRingElement,
    kind: RingOpKind,
    g: &FiniteGroupTable,
) -> Result<GroupRingElement, AlgebraError> {
    a.check_carrier(g)?;
    b.check_carrier(g)?;
    Ok(match kind {
        RingOpKind::Add => a.add(b),
        RingOpKind::Mul => a.mul(b, g),
    })
}

/// A matrix over `ℤ[G]`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl std::fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RingMatrix[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl RingMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RingMatrix { rows, cols, entries: vec![GroupRingElement::zero(); rows * cols] }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<GroupRingElement>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RingMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GroupRingElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &RingMatrix, g: &FiniteGroupTable) -> Result<RingMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RingMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElement::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j), g));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Expansion to an integer matrix via the regular representation:
    /// a `rows×cols` matrix over `ℤ[G]` becomes `rows·|G| × cols·|G|`,
    /// compatible with row-vector-times-matrix convention.
    pub fn to_int_matrix(&self, g: &FiniteGroupTable) -> IntMatrix {
        let n = g.order();
        let mut out = IntMatrix::zero(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self.get(i, j).regular_matrix(g);
                for x in 0..n {
                    for y in 0..n {
                        let v = block.get(x, y);
                        if v != 0 {
                            out.set(i * n + x, j * n + y, v);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Folds an integer row vector of length `k·|G|` back into a row over
/// `ℤ[G]` of length `k`.
pub fn fold_row(row: &[i64], g: &FiniteGroupTable) -> Vec<GroupRingElement> {
    let n = g.order();
    assert_eq!(row.len() % n, 0);
    row.chunks(n)
        .map(|chunk| {
            let mut e = GroupRingElement::zero();
            for (idx, &c) in chunk.iter().enumerate() {
                e.add_term(idx, c);
            }
            e
        })
        .collect()
}

/// Generators of the kernel of the right-module map `v ↦ v·m` on
/// `ℤ[G]^rows`, as rows over `ℤ[G]`. Every returned row multiplies `m` to
/// zero exactly; the set generates the full integer kernel lattice.
pub fn module_kernel(
    m: &RingMatrix,
    g: &FiniteGroupTable,
) -> Result<Vec<Vec<GroupRingElement>>, AlgebraError> {
    let big = m.to_int_matrix(g);
    let ker = left_kernel(&big)?;
    let mut out = Vec::with_capacity(ker.rows());
    for i in 0..ker.rows() {
        out.push(fold_row(ker.row(i), g));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FiniteGroupTable {
        FiniteGroupTable::cyclic(2)
    }

    #[test]
    fn ring_arithmetic_in_zc2() {
        let g = c2();
        let one = GroupRingElement::term(0, 1);
        let x = GroupRingElement::term(1, 1);
        let a = one.add(&x); // 1 + x
        let b = one.sub(&x); // 1 - x
        // (1+x)(1-x) = 1 - x + x - x² = 1 - 1 = 0 in ℤ[C2]
        assert!(a.mul(&b, &g).is_zero());
        // a·1 = a
        assert_eq!(a.mul(&GroupRingElement::one(&g), &g), a);
        // (1+x) + (-1-x) = 0
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn kernel_of_one_plus_x() {
        let g = c2();
        let one_plus_x = GroupRingElement::term(0, 1).add(&GroupRingElement::term(1, 1));
        let m = RingMatrix::from_entries(1, 1, vec![one_plus_x.clone()]);
        let ker = module_kernel(&m, &g).unwrap();
        // kernel of (1+x) in ℤ[C2] is generated by (1-x): rank 1
        assert_eq!(ker.len(), 1);
        let k = &ker[0][0];
        assert!(k.mul(&one_plus_x, &g).is_zero());
        let expect = GroupRingElement::term(0, 1).sub(&GroupRingElement::term(1, 1));
        assert!(k == &expect || k == &expect.neg());
    }

    #[test]
    fn kernel_trivial_and_full() {
        let g = c2();
        let idm = RingMatrix::from_entries(1, 1, vec![GroupRingElement::one(&g)]);
        assert!(module_kernel(&idm, &g).unwrap().is_empty());
        let zm = RingMatrix::from_entries(1, 1, vec![GroupRingElement::zero()]);
        let ker = module_kernel(&zm, &g).unwrap();
        // everything maps to zero: free ℤ-basis {1, x}, rank 2
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn regular_matrix_respects_multiplication() {
        let g = FiniteGroupTable::cyclic(3);
        let a = GroupRingElement::term(1, 2).add(&GroupRingElement::term(2, -1));
        let b = GroupRingElement::term(0, 1).add(&GroupRingElement::term(1, 1));
        let ab = a.mul(&b, &g);
        // row of identity in regular matrix of a·b equals coefficient vector
        let m = ab.regular_matrix(&g);
        assert_eq!(m.row(0).to_vec(), ab.to_vec(&g));
        // and R(a)R(b) = R(ab)
        let ra = a.regular_matrix(&g);
        let rb = b.regular_matrix(&g);
        assert_eq!(ra.mul(&rb).unwrap(), m);
    }
}
