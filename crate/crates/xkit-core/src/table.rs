//! Finite groups by multiplication table.
//!
//! Elements are dense indices `0..order` with `0` the identity. Tables are
//! validated exhaustively: associativity for all triples, two-sided identity
//! and inverses.

use crate::error::XmodError;
use std::collections::BTreeSet;

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl std::fmt::Debug for FiniteGroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroupTable(order {})", self.order)
    }
}

impl FiniteGroupTable {
    /// Builds and validates a table from a row-major multiplication map.
    pub fn new(order: usize, mul: Vec<usize>) -> Result<Self, XmodError> {
        if order == 0 || mul.len() != order * order {
            return Err(XmodError::PreconditionFailed("table size mismatch".into()));
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(XmodError::PreconditionFailed("table entry out of range".into()));
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b;
                }
            }
        }
        let t = FiniteGroupTable { order, mul, inv };
        t.validate()?;
        Ok(t)
    }

    /// Exhaustive group-axiom check.
    pub fn validate(&self) -> Result<(), XmodError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(XmodError::PreconditionFailed(format!(
                    "element 0 is not a two-sided identity at {a}"
                )));
            }
            let i = self.inv[a];
            if i == usize::MAX || self.mul(a, i) != 0 || self.mul(i, a) != 0 {
                return Err(XmodError::PreconditionFailed(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(XmodError::PreconditionFailed(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conj(&self, m: usize, p: usize) -> usize {
        // p⁻¹ m p
        self.mul(self.mul(self.inv(p), m), p)
    }

    pub fn pow(&self, a: usize, n: i64) -> usize {
        let base = if n < 0 { self.inv(a) } else { a };
        let mut out = 0;
        for _ in 0..n.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Sorted multiset of element orders — a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = (a + b) % n;
            }
        }
        FiniteGroupTable::new(n, mul).expect("cyclic table is a group")
    }

    /// Direct product, elements indexed as `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroupTable, b: &FiniteGroupTable) -> Self {
        let n = a.order * b.order;
        let mut mul = vec![0; n * n];
        for x1 in 0..a.order {
            for y1 in 0..b.order {
                for x2 in 0..a.order {
                    for y2 in 0..b.order {
                        let i = x1 * b.order + y1;
                        let j = x2 * b.order + y2;
                        mul[i * n + j] = a.mul(x1, x2) * b.order + b.mul(y1, y2);
                    }
                }
            }
        }
        FiniteGroupTable::new(n, mul).expect("product table is a group")
    }

    /// Closure of a generating set.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !seen[y] {
                        seen[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// A small generating set found greedily.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut have: BTreeSet<usize> = [0].into();
        while have.len() < self.order {
            // add the element extending the closure the most
            let best = (0..self.order)
                .filter(|x| !have.contains(x))
                .max_by_key(|&x| {
                    let mut g2 = gens.clone();
                    g2.push(x);
                    self.generated_subgroup(&g2).len()
                })
                .expect("non-trivial remainder");
            gens.push(best);
            have = self.generated_subgroup(&gens).into_iter().collect();
        }
        gens
    }

    pub fn is_subgroup(&self, elts: &[usize]) -> bool {
        let set: BTreeSet<usize> = elts.iter().copied().collect();
        if !set.contains(&0) {
            return false;
        }
        set.iter()
            .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal_subgroup(&self, elts: &[usize]) -> bool {
        if !self.is_subgroup(elts) {
            return false;
        }
        let set: BTreeSet<usize> = elts.iter().copied().collect();
        set.iter()
            .all(|&m| (0..self.order).all(|p| set.contains(&self.conj(m, p))))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|a| self.mul(z, a) == self.mul(a, z)))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Reindexed table of a subgroup; returns the table and the inclusion
    /// map (subgroup index -> ambient index). The subgroup must contain 0.
    pub fn subgroup_table(&self, elts: &[usize]) -> Result<(FiniteGroupTable, Vec<usize>), XmodError> {
        if !self.is_subgroup(elts) {
            return Err(XmodError::PreconditionFailed("not a subgroup".into()));
        }
        let mut sorted: Vec<usize> = elts.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        // identity must map to index 0
        let pos = sorted.iter().position(|&x| x == 0).unwrap();
        sorted.swap(0, pos);
        let back: std::collections::BTreeMap<usize, usize> =
            sorted.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = sorted.len();
        let mut mul = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                mul[i * k + j] = back[&self.mul(sorted[i], sorted[j])];
            }
        }
        Ok((FiniteGroupTable::new(k, mul)?, sorted))
    }

    /// The quotient by a normal subgroup: the coset table and the
    /// projection map.
    pub fn quotient_table(&self, normal: &[usize]) -> Result<(FiniteGroupTable, Vec<usize>), XmodError> {
        if !self.is_normal_subgroup(normal) {
            return Err(XmodError::PreconditionFailed("subgroup not normal".into()));
        }
        let set: BTreeSet<usize> = normal.iter().copied().collect();
        let mut coset = vec![usize::MAX; self.order];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..self.order {
            if coset[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            for &n in &set {
                coset[self.mul(x, n)] = c;
            }
            reps.push(x);
        }
        // identity must be coset 0: element 0 is processed first
        let k = reps.len();
        let mut mul = vec![0usize; k * k];
        for a in 0..k {
            for b in 0..k {
                mul[a * k + b] = coset[self.mul(reps[a], reps[b])];
            }
        }
        Ok((FiniteGroupTable::new(k, mul)?, coset))
    }

    /// All automorphisms, as permutation vectors, found by images of a
    /// generating set. Practical for orders ≤ 24.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let gens = self.generating_set();
        if gens.is_empty() {
            return vec![vec![0]];
        }
        // Express every element as a word in the generators by BFS.
        let words = self.generator_words(&gens);
        let mut out = Vec::new();
        let orders: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        let mut images = vec![0usize; gens.len()];
        self.search_automorphisms(&gens, &words, &orders, 0, &mut images, &mut out);
        out
    }

    fn generator_words(&self, gens: &[usize]) -> Vec<Vec<(usize, bool)>> {
        // word per element: list of (generator position, inverted?)
        let mut words: Vec<Option<Vec<(usize, bool)>>> = vec![None; self.order];
        words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let wx = words[x].clone().unwrap();
            for (gi, &g) in gens.iter().enumerate() {
                for (inv, y) in [(false, self.mul(x, g)), (true, self.mul(x, self.inv(g)))] {
                    if words[y].is_none() {
                        let mut w = wx.clone();
                        w.push((gi, inv));
                        words[y] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.expect("generating set generates")).collect()
    }

    fn apply_word(&self, word: &[(usize, bool)], images: &[usize]) -> usize {
        let mut x = 0;
        for &(gi, inv) in word {
            let g = if inv { self.inv(images[gi]) } else { images[gi] };
            x = self.mul(x, g);
        }
        x
    }

    fn search_automorphisms(
        &self,
        gens: &[usize],
        words: &[Vec<(usize, bool)>],
        orders: &[usize],
        depth: usize,
        images: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == gens.len() {
            let map: Vec<usize> = words.iter().map(|w| self.apply_word(w, images)).collect();
            // bijective + homomorphism
            let mut seen = vec![false; self.order];
            for &x in &map {
                if seen[x] {
                    return;
                }
                seen[x] = true;
            }
            for a in 0..self.order {
                for b in 0..self.order {
                    if map[self.mul(a, b)] != self.mul(map[a], map[b]) {
                        return;
                    }
                }
            }
            out.push(map);
            return;
        }
        for cand in 0..self.order {
            if orders[cand] != orders[gens[depth]] {
                continue;
            }
            images[depth] = cand;
            self.search_automorphisms(gens, words, orders, depth + 1, images, out);
        }
    }

    /// Brute-force isomorphism test via generator images. Intended for
    /// orders ≤ 24.
    pub fn isomorphic(&self, other: &FiniteGroupTable) -> bool {
        if self.order != other.order {
            return false;
        }
        if self.order_profile() != other.order_profile() {
            return false;
        }
        let gens = self.generating_set();
        let words = self.generator_words(&gens);
        let orders_self: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let orders_other: Vec<usize> = (0..other.order).map(|a| other.element_order(a)).collect();

        fn rec(
            a: &FiniteGroupTable,
            b: &FiniteGroupTable,
            gens: &[usize],
            words: &[Vec<(usize, bool)>],
            gen_orders: &[usize],
            b_orders: &[usize],
            depth: usize,
            images: &mut Vec<usize>,
        ) -> bool {
            if depth == gens.len() {
                let map: Vec<usize> = words.iter().map(|w| b.apply_word(w, images)).collect();
                let mut seen = vec![false; b.order()];
                for &x in &map {
                    if seen[x] {
                        return false;
                    }
                    seen[x] = true;
                }
                for x in 0..a.order() {
                    for y in 0..a.order() {
                        if map[a.mul(x, y)] != b.mul(map[x], map[y]) {
                            return false;
                        }
                    }
                }
                return true;
            }
            for cand in 0..b.order() {
                if b_orders[cand] != gen_orders[depth] {
                    continue;
                }
                images[depth] = cand;
                if rec(a, b, gens, words, gen_orders, b_orders, depth + 1, images) {
                    return true;
                }
            }
            false
        }
        let mut images = vec![0usize; gens.len()];
        rec(self, other, &gens, &words, &orders_self, &orders_other, 0, &mut images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_are_valid() {
        for n in 1..=8 {
            let g = FiniteGroupTable::cyclic(n);
            assert_eq!(g.order(), n);
            g.validate().unwrap();
        }
    }

    #[test]
    fn klein_four_vs_c4() {
        let v4 = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2),
            &FiniteGroupTable::cyclic(2),
        );
        let c4 = FiniteGroupTable::cyclic(4);
        assert_eq!(v4.order(), 4);
        assert!(!v4.isomorphic(&c4));
        assert!(v4.isomorphic(&v4));
        assert_eq!(v4.order_profile(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn c6_is_c2_times_c3() {
        let c6 = FiniteGroupTable::cyclic(6);
        let p = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2),
            &FiniteGroupTable::cyclic(3),
        );
        assert!(c6.isomorphic(&p));
    }

    #[test]
    fn automorphisms_of_small_groups() {
        // Aut(C4) = C2, Aut(C2xC2) = S3 (order 6), Aut(C5) = C4
        assert_eq!(FiniteGroupTable::cyclic(4).automorphisms().len(), 2);
        let v4 = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2),
            &FiniteGroupTable::cyclic(2),
        );
        assert_eq!(v4.automorphisms().len(), 6);
        assert_eq!(FiniteGroupTable::cyclic(5).automorphisms().len(), 4);
    }

    #[test]
    fn center_and_normality() {
        let c6 = FiniteGroupTable::cyclic(6);
        assert_eq!(c6.center().len(), 6);
        assert!(c6.is_normal_subgroup(&[0, 2, 4]));
        assert!(!c6.is_subgroup(&[0, 2]));
    }
}
