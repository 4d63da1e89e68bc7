//! Exact integer matrices, Smith normal form, kernels, and lattice quotients.
//!
//! All arithmetic is checked: overflow is reported as
//! [`AlgebraError::Overflow`], never wrapped silently.

use crate::error::AlgebraError;
use std::fmt;

/// A dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

/// Result of [`smith_normal_form`]: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // accumulate in i128: intermediate terms may exceed i64 even when
        // the result fits
        let mut acc = vec![0i128; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as i128;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a
                        .checked_mul(other.get(k, j) as i128)
                        .ok_or(AlgebraError::Overflow)?;
                    acc[i * other.cols + j] = acc[i * other.cols + j]
                        .checked_add(term)
                        .ok_or(AlgebraError::Overflow)?;
                }
            }
        }
        let data = acc
            .into_iter()
            .map(|x| i64::try_from(x).map_err(|_| AlgebraError::Overflow))
            .collect::<Result<Vec<i64>, _>>()?;
        Ok(IntMatrix { rows: self.rows, cols: other.cols, data })
    }

    /// Vertically stacks `self` above `other` (same column count).
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "stack: column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination in i128.
    /// Used as an independent check that transforms are unimodular.
    pub fn det(&self) -> Result<i64, AlgebraError> {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k * n + k] == 0 {
                let pivot = (k + 1..n).find(|&i| m[i * n + k] != 0);
                match pivot {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i * n + j]
                        .checked_mul(m[k * n + k])
                        .and_then(|a| a.checked_sub(m[i * n + k].checked_mul(m[k * n + j])?))
                        .ok_or(AlgebraError::Overflow)?;
                    m[i * n + j] = num / prev;
                }
                m[i * n + k] = 0;
            }
            prev = m[k * n + k];
        }
        let d = sign * m[n * n - 1];
        i64::try_from(d).map_err(|_| AlgebraError::Overflow)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

fn checked_add(a: i128, b: i128) -> Result<i128, AlgebraError> {
    a.checked_add(b).ok_or(AlgebraError::Overflow)
}

fn checked_mul(a: i128, b: i128) -> Result<i128, AlgebraError> {
    a.checked_mul(b).ok_or(AlgebraError::Overflow)
}

/// Working matrix for the elimination, kept in i128 for headroom: the
/// unimodular transforms can grow well past the input magnitude.
struct WideMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl WideMatrix {
    fn from(m: &IntMatrix) -> Self {
        WideMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|&x| x as i128).collect(),
        }
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        WideMatrix { rows: n, cols: n, data }
    }

    fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    fn narrow(&self) -> Result<IntMatrix, AlgebraError> {
        let data = self
            .data
            .iter()
            .map(|&x| i64::try_from(x).map_err(|_| AlgebraError::Overflow))
            .collect::<Result<Vec<i64>, _>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }
}

struct SnfState {
    a: WideMatrix,
    u: WideMatrix,
    v: WideMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols {
            let (x, y) = (self.a.get(i, c), self.a.get(j, c));
            self.a.set(i, c, y);
            self.a.set(j, c, x);
        }
        for c in 0..self.u.cols {
            let (x, y) = (self.u.get(i, c), self.u.get(j, c));
            self.u.set(i, c, y);
            self.u.set(j, c, x);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows {
            let (x, y) = (self.a.get(r, i), self.a.get(r, j));
            self.a.set(r, i, y);
            self.a.set(r, j, x);
        }
        for r in 0..self.v.rows {
            let (x, y) = (self.v.get(r, i), self.v.get(r, j));
            self.v.set(r, i, y);
            self.v.set(r, j, x);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: i128) -> Result<(), AlgebraError> {
        for c in 0..self.a.cols {
            let t = checked_mul(q, self.a.get(j, c))?;
            self.a.set(i, c, checked_add(self.a.get(i, c), -t)?);
        }
        for c in 0..self.u.cols {
            let t = checked_mul(q, self.u.get(j, c))?;
            self.u.set(i, c, checked_add(self.u.get(i, c), -t)?);
        }
        Ok(())
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: i128) -> Result<(), AlgebraError> {
        for r in 0..self.a.rows {
            let t = checked_mul(q, self.a.get(r, j))?;
            self.a.set(r, i, checked_add(self.a.get(r, i), -t)?);
        }
        for r in 0..self.v.rows {
            let t = checked_mul(q, self.v.get(r, j))?;
            self.v.set(r, i, checked_add(self.v.get(r, i), -t)?);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols {
            self.a.set(i, c, -self.a.get(i, c));
        }
        for c in 0..self.u.cols {
            self.u.set(i, c, -self.u.get(i, c));
        }
    }
}

/// Computes the Smith normal form `u*m*v = d`: `d` diagonal with
/// `d₁ | d₂ | …`, all nonnegative, and `u`, `v` unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition, AlgebraError> {
    let mut st = SnfState {
        a: WideMatrix::from(m),
        u: WideMatrix::identity(m.rows()),
        v: WideMatrix::identity(m.cols()),
    };
    let n = m.rows().min(m.cols());
    let mut t = 0;
    while t < n {
        // Find a pivot: nonzero entry of smallest absolute value in the
        // trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m.rows() {
            for j in t..m.cols() {
                let x = st.a.get(i, j);
                if x != 0 && pivot.is_none_or(|(pi, pj)| x.abs() < st.a.get(pi, pj).abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);

        // Clear the pivot row and column. Quotients are balanced (round to
        // nearest) to keep the transforms small; a nonzero remainder is
        // swapped in as the strictly smaller pivot and the pass restarts.
        'reduce: loop {
            if st.a.get(t, t) < 0 {
                st.negate_row(t);
            }
            let p = st.a.get(t, t);
            for i in t + 1..m.rows() {
                let x = st.a.get(i, t);
                if x != 0 {
                    let q = checked_add(x, p.div_euclid(2))?.div_euclid(p);
                    st.row_sub(i, t, q)?;
                    if st.a.get(i, t) != 0 {
                        st.swap_rows(t, i);
                    }
                    continue 'reduce;
                }
            }
            for j in t + 1..m.cols() {
                let x = st.a.get(t, j);
                if x != 0 {
                    let q = checked_add(x, p.div_euclid(2))?.div_euclid(p);
                    st.col_sub(j, t, q)?;
                    if st.a.get(t, j) != 0 {
                        st.swap_cols(t, j);
                    }
                    continue 'reduce;
                }
            }
            break;
        }

        // Enforce divisibility: if some trailing entry is not divisible by
        // the pivot, fold its row in and redo this pivot position.
        let p = st.a.get(t, t);
        let mut redo = false;
        'scan: for i in t + 1..m.rows() {
            for j in t + 1..m.cols() {
                if st.a.get(i, j) % p != 0 {
                    st.row_sub(t, i, -1)?; // row_t += row_i
                    redo = true;
                    break 'scan;
                }
            }
        }
        if !redo {
            t += 1;
        }
    }
    Ok(SmithDecomposition { d: st.a.narrow()?, u: st.u.narrow()?, v: st.v.narrow()? })
}

impl SmithDecomposition {
    /// Diagonal entries (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i)).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }

    /// Invariant factors > 1 (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<i64> {
        self.diagonal().into_iter().filter(|&x| x > 1).collect()
    }
}

/// A basis (as rows) of the left kernel `{v : v·m = 0}`.
pub fn left_kernel(m: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
    let s = smith_normal_form(m)?;
    let rank = s.rank();
    let mut rows = Vec::new();
    for i in rank..m.rows() {
        rows.push(s.u.row(i).to_vec());
    }
    if rows.is_empty() {
        Ok(IntMatrix::zero(0, m.rows()))
    } else {
        Ok(IntMatrix::from_rows(rows))
    }
}

/// A basis (as rows of length `m.cols()`) of the right kernel `{x : m·x = 0}`.
pub fn right_kernel(m: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
    left_kernel(&m.transpose())
}

/// Inverse of a unimodular matrix, via a second Smith decomposition.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
    let s = smith_normal_form(m)?;
    if s.diagonal().iter().any(|&d| d != 1) {
        return Err(AlgebraError::Dimension("matrix is not unimodular".into()));
    }
    // u*m*v = I  =>  m⁻¹ = v*u
    s.v.mul(&s.u)
}

/// Solves `x · m = target` over ℤ for each row of `target`; returns the
/// coefficient matrix `x` or `None` if some row is not in the row lattice.
pub fn solve_left(m: &IntMatrix, target: &IntMatrix) -> Result<Option<IntMatrix>, AlgebraError> {
    if m.cols() != target.cols() {
        return Err(AlgebraError::Dimension("solve_left: column mismatch".into()));
    }
    let s = smith_normal_form(m)?;
    let diag = s.diagonal();
    // x·m = t  <=>  (x·u⁻¹)·d = t·v  with x = w·u
    let tv = target.mul(&s.v)?;
    let mut w = IntMatrix::zero(target.rows(), m.rows());
    for r in 0..target.rows() {
        for j in 0..m.rows() {
            let d = if j < diag.len() { diag[j] } else { 0 };
            let rhs = if j < tv.cols() { tv.get(r, j) } else { 0 };
            if d == 0 {
                if rhs != 0 {
                    return Ok(None);
                }
            } else {
                if rhs % d != 0 {
                    return Ok(None);
                }
                w.set(r, j, rhs / d);
            }
        }
        // columns of t·v beyond m.rows() must vanish
        for j in m.rows()..tv.cols() {
            if tv.get(r, j) != 0 {
                return Ok(None);
            }
        }
    }
    Ok(Some(w.mul(&s.u)?))
}

/// Abelian invariants of the quotient `L(num) / L(den)` of two integer
/// lattices given by generating rows, with `L(den) ⊆ L(num)` required.
///
/// Returns `(free_rank, torsion)` where torsion lists invariant factors > 1.
pub fn lattice_quotient(
    num: &IntMatrix,
    den: &IntMatrix,
) -> Result<(usize, Vec<i64>), AlgebraError> {
    if num.cols() != den.cols() {
        return Err(AlgebraError::Dimension("lattice_quotient: ambient mismatch".into()));
    }
    // Find a ℤ-basis of L(num): u*num*v = d gives basis rows dᵢ·(v⁻¹ row i),
    // i.e. the nonzero rows of d·v⁻¹.
    let s = smith_normal_form(num)?;
    let vinv = unimodular_inverse(&s.v)?;
    let basis_full = s.d.mul(&vinv)?;
    let rank = s.rank();
    let mut basis_rows = Vec::with_capacity(rank);
    for i in 0..rank {
        basis_rows.push(basis_full.row(i).to_vec());
    }
    if rank == 0 {
        return if den.is_zero() || den.rows() == 0 {
            Ok((0, Vec::new()))
        } else {
            Err(AlgebraError::Dimension("denominator not inside numerator lattice".into()))
        };
    }
    let basis = IntMatrix::from_rows(basis_rows);
    // Express the denominator generators in that basis.
    let coords = solve_left(&basis, den)?
        .ok_or_else(|| AlgebraError::Dimension("denominator not inside numerator lattice".into()))?;
    let cs = smith_normal_form(&coords)?;
    let free_rank = rank - cs.rank();
    Ok((free_rank, cs.torsion()))
}

/// Abelian invariants of `ℤⁿ / L(rels)`: `(free_rank, torsion)`.
pub fn abelian_invariants(n: usize, rels: &IntMatrix) -> Result<(usize, Vec<i64>), AlgebraError> {
    assert_eq!(rels.cols(), n, "relation ambient mismatch");
    let s = smith_normal_form(rels)?;
    Ok((n - s.rank(), s.torsion()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) {
        let s = smith_normal_form(m).unwrap();
        // u*m*v = d
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        // unimodular
        assert_eq!(s.u.det().unwrap().abs(), 1, "u not unimodular");
        assert_eq!(s.v.det().unwrap().abs(), 1, "v not unimodular");
        // diagonal, nonnegative, divisibility chain
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0, "off-diagonal entry");
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0] >= 0);
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {:?}", diag);
            } else {
                assert_eq!(w[1], 0);
            }
        }
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        check_snf(&m);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal(), vec![1, 6]);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = IntMatrix::zero(3, 2);
        check_snf(&z);
        assert!(smith_normal_form(&z).unwrap().d.is_zero());
        let id = IntMatrix::identity(4);
        check_snf(&id);
        assert_eq!(smith_normal_form(&id).unwrap().d, id);
    }

    #[test]
    fn snf_mixed_cases() {
        for m in [
            IntMatrix::from_rows(vec![vec![2, 4, 4]]),
            IntMatrix::from_rows(vec![vec![-6, 111], vec![5, -672], vec![10, 7]]),
            IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]),
            IntMatrix::from_rows(vec![vec![2, 0], vec![1, 2]]),
            IntMatrix::from_rows(vec![vec![0, 0], vec![0, 0]]),
        ] {
            check_snf(&m);
        }
    }

    #[test]
    fn kernel_basic() {
        // row kernel of [[1],[0]] (2x1): spanned by (0,1)
        let m = IntMatrix::from_rows(vec![vec![1], vec![0]]);
        let k = left_kernel(&m).unwrap();
        assert_eq!(k.rows(), 1);
        let prod = k.mul(&m).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn lattice_quotient_torsion() {
        // ℤ² / <(2,0),(0,3)> inside numerator ℤ²
        let num = IntMatrix::identity(2);
        let den = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let (free, tors) = lattice_quotient(&num, &den).unwrap();
        assert_eq!(free, 0);
        assert_eq!(tors, vec![6]);

        // ℤ² / <(2,0)>: free rank 1, torsion C2
        let den2 = IntMatrix::from_rows(vec![vec![2, 0]]);
        let (free2, tors2) = lattice_quotient(&num, &den2).unwrap();
        assert_eq!(free2, 1);
        assert_eq!(tors2, vec![2]);
    }

    #[test]
    fn solve_left_membership() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 1]]);
        let t = IntMatrix::from_rows(vec![vec![4, 3]]);
        let x = solve_left(&m, &t).unwrap().unwrap();
        assert_eq!(x.mul(&m).unwrap(), t);
        let bad = IntMatrix::from_rows(vec![vec![1, 0]]);
        assert!(solve_left(&m, &bad).unwrap().is_none());
    }

    proptest::proptest! {
        #[test]
        fn snf_random(entries in proptest::collection::vec(-40i64..40, 12)) {
            let m = IntMatrix::from_rows(entries.chunks(4).map(|c| c.to_vec()).collect());
            check_snf(&m);
        }
    }
}


