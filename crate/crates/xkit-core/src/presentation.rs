//! Finitely presented groups and bounded enumeration.
//!
//! [`enumerate_fp_group`] realizes the quotient `F(X)/N(ωR)` as a finite
//! multiplication table by bounded closure of the generator-action graph:
//! new element slots are created breadth-first, relator traces are used to
//! deduce and identify slots, and the closure either stabilizes below the
//! bound (returning the exact table plus shortlex normal forms) or fails
//! explicitly with [`AlgebraError::Unbounded`] — never a silent truncation.

use crate::error::AlgebraError;
use crate::table::FiniteGroupTable;
use crate::word::FreeWord;
use std::collections::VecDeque;

/// A group presentation: named generators and relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<FreeWord>) -> Result<Self, AlgebraError> {
        let count = generators.len();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= count {
                    return Err(AlgebraError::BadGenerator { index: g, count });
                }
            }
        }
        Ok(GroupPresentation { generators, relators })
    }

    /// Convenience constructor with generators named `x0, x1, …` unless
    /// one or two are requested (then `x`, `y`).
    pub fn unnamed(rank: usize, relators: Vec<FreeWord>) -> Self {
        let generators = match rank {
            1 => vec!["x".to_string()],
            2 => vec!["x".to_string(), "y".to_string()],
            _ => (0..rank).map(|i| format!("x{i}")).collect(),
        };
        GroupPresentation::new(generators, relators).expect("generator indices in range")
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// The result of a successful bounded enumeration.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    pub presentation: GroupPresentation,
    pub table: FiniteGroupTable,
    /// Image of each generator in the table.
    pub gen_images: Vec<usize>,
    /// Shortlex-minimal representative word per element.
    pub normal_forms: Vec<FreeWord>,
}

impl EnumeratedGroup {
    /// Evaluates a word of `F(X)` in the enumerated quotient.
    pub fn eval(&self, w: &FreeWord) -> usize {
        let mut x = self.table.id();
        for &(g, s) in w.letters() {
            let img = self.gen_images[g];
            let img = if s < 0 { self.table.inv(img) } else { img };
            x = self.table.mul(x, img);
        }
        x
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }
}

const LETTER_SLACK: usize = 8;

struct ClosureState {
    letters: usize,
    parent: Vec<usize>,
    edges: Vec<Vec<Option<usize>>>,
    pending: VecDeque<(usize, usize)>,
    live: usize,
}

impl ClosureState {
    fn new(letters: usize) -> Self {
        ClosureState {
            letters,
            parent: vec![0],
            edges: vec![vec![None; letters]],
            pending: VecDeque::new(),
            live: 1,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn fresh(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.edges.push(vec![None; self.letters]);
        self.live += 1;
        id
    }

    /// Records `u --l--> v` (and the reverse edge), queueing coincidences.
    fn set_edge(&mut self, u: usize, l: usize, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.edges[u][l] {
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    self.pending.push_back((w, v));
                }
            }
            None => self.edges[u][l] = Some(v),
        }
        let rl = l ^ 1;
        match self.edges[v][rl] {
            Some(w) => {
                let w = self.find(w);
                if w != u {
                    self.pending.push_back((w, u));
                }
            }
            None => self.edges[v][rl] = Some(u),
        }
    }

    fn process_coincidences(&mut self) -> bool {
        let mut merged = false;
        while let Some((a, b)) = self.pending.pop_front() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            merged = true;
            // keep the smaller index as the surviving root
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            self.live -= 1;
            let gone_edges = std::mem::take(&mut self.edges[gone]);
            for (l, tgt) in gone_edges.into_iter().enumerate() {
                if let Some(t) = tgt {
                    self.set_edge(keep, l, t);
                }
            }
        }
        merged
    }

    /// Traces a relator at `u`; deduces a missing edge or queues a
    /// coincidence when possible. Returns whether progress was made.
    fn trace_relator(&mut self, u: usize, relator: &[usize]) -> bool {
        let n = relator.len();
        if n == 0 {
            return false;
        }
        // forward as far as defined
        let mut x = u;
        let mut f = 0;
        while f < n {
            match self.edges[x][relator[f]] {
                Some(y) => {
                    x = self.find(y);
                    f += 1;
                }
                None => break,
            }
        }
        if f == n {
            if x != u {
                self.pending.push_back((x, u));
                return true;
            }
            return false;
        }
        // backward from the end as far as defined
        let mut z = u;
        let mut b = n;
        while b > f + 1 {
            match self.edges[z][relator[b - 1] ^ 1] {
                Some(y) => {
                    z = self.find(y);
                    b -= 1;
                }
                None => break,
            }
        }
        if b == f + 1 {
            // exactly one gap: deduce it
            self.set_edge(x, relator[f], z);
            return true;
        }
        false
    }
}

/// Bounded enumeration of `F(X)/N(R)`.
///
/// `bound` limits the number of simultaneously distinct elements. Returns
/// the exact multiplication table, generator images and shortlex normal
/// forms, or [`AlgebraError::Unbounded`] when closure does not stabilize.
pub fn enumerate_fp_group(
    p: &GroupPresentation,
    bound: usize,
) -> Result<EnumeratedGroup, AlgebraError> {
    if bound == 0 {
        return Err(AlgebraError::Unbounded { bound });
    }
    let letters = 2 * p.rank();
    // letter encoding: generator g positively = 2g, inverse = 2g+1
    let relators: Vec<Vec<usize>> = p
        .relators
        .iter()
        .map(|r| {
            r.letters()
                .iter()
                .map(|&(g, s)| 2 * g + usize::from(s < 0))
                .collect()
        })
        .collect();

    let mut st = ClosureState::new(letters);
    let creation_cap = bound.saturating_mul(LETTER_SLACK).saturating_add(64);

    loop {
        st.process_coincidences();
        // deduction sweep
        let mut progressed = false;
        let node_count = st.parent.len();
        for u in 0..node_count {
            if st.find(u) != u {
                continue;
            }
            for r in &relators {
                if st.trace_relator(u, r) {
                    progressed = true;
                }
            }
            if !st.pending.is_empty() {
                st.process_coincidences();
                progressed = true;
            }
        }
        if progressed {
            continue;
        }
        // closure is quiescent: fill the first undefined edge, if any
        let mut filled = false;
        'fill: for u in 0..st.parent.len() {
            if st.find(u) != u {
                continue;
            }
            for l in 0..letters {
                if st.edges[u][l].is_none() {
                    if st.live >= bound || st.parent.len() >= creation_cap {
                        return Err(AlgebraError::Unbounded { bound });
                    }
                    let v = st.fresh();
                    st.set_edge(u, l, v);
                    filled = true;
                    break 'fill;
                }
            }
        }
        if !filled {
            break;
        }
    }

    // Compact the live classes by BFS from the identity class, recording
    // shortlex-minimal words along the way.
    let root = st.find(0);
    let total = st.parent.len();
    let mut index = vec![usize::MAX; total];
    let mut normal_forms: Vec<FreeWord> = Vec::new();
    let mut order_nodes: Vec<usize> = Vec::new();
    index[root] = 0;
    normal_forms.push(FreeWord::identity());
    order_nodes.push(root);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let base = normal_forms[index[u]].clone();
        for l in 0..letters {
            let v = st.find(st.edges[u][l].expect("closure left an undefined edge"));
            if index[v] == usize::MAX {
                index[v] = order_nodes.len();
                let letter = (l / 2, if l % 2 == 0 { 1 } else { -1 });
                normal_forms.push(base.mul(&FreeWord::from_letters(&[letter])));
                order_nodes.push(v);
                queue.push_back(v);
            }
        }
    }
    let n = order_nodes.len();
    assert_eq!(n, st.live, "every live class must be reachable from the identity");

    // Multiplication: follow the normal form of the right factor.
    let follow = |st: &mut ClosureState, start: usize, w: &FreeWord| -> usize {
        let mut x = start;
        for &(g, s) in w.letters() {
            let l = 2 * g + usize::from(s < 0);
            x = st.find(st.edges[x][l].expect("closure left an undefined edge"));
        }
        x
    };
    let mut mul = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            let w = normal_forms[j].clone();
            mul[i * n + j] = index[follow(&mut st, order_nodes[i], &w)];
        }
    }
    let table = FiniteGroupTable::new(n, mul)
        .expect("closure produced a non-group table; this is a bug");

    // Postcondition: every relator acts trivially at every element.
    let gen_images: Vec<usize> = (0..p.rank())
        .map(|g| index[st.find(st.edges[root][2 * g].expect("defined"))])
        .collect();
    let en = EnumeratedGroup { presentation: p.clone(), table, gen_images, normal_forms };
    for r in &p.relators {
        assert_eq!(en.eval(r), 0, "relator does not vanish in the quotient; this is a bug");
    }
    for i in 0..n {
        for r in &p.relators {
            let mut x = i;
            for &(g, s) in r.letters() {
                let img = en.gen_images[g];
                let img = if s < 0 { en.table.inv(img) } else { img };
                x = en.table.mul(x, img);
            }
            assert_eq!(x, i, "relator trace does not close; this is a bug");
        }
    }
    Ok(en)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FreeWord;

    fn x_pow(n: i64) -> FreeWord {
        FreeWord::generator(0).pow(n)
    }

    #[test]
    fn cyclic_three() {
        let p = GroupPresentation::unnamed(1, vec![x_pow(3)]);
        let en = enumerate_fp_group(&p, 10).unwrap();
        assert_eq!(en.order(), 3);
        // brute-force closure oracle: an independently constructed C3
        assert!(en.table.isomorphic(&FiniteGroupTable::cyclic(3)));
    }

    #[test]
    fn relator_kills_generator() {
        let p = GroupPresentation::unnamed(1, vec![x_pow(1)]);
        let en = enumerate_fp_group(&p, 2).unwrap();
        assert_eq!(en.order(), 1);
    }

    #[test]
    fn klein_four_presentation() {
        // ⟨x,y | x², y², (xy)²⟩ has order 4
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let p = GroupPresentation::unnamed(
            2,
            vec![x.pow(2), y.pow(2), x.mul(&y).pow(2)],
        );
        let en = enumerate_fp_group(&p, 16).unwrap();
        assert_eq!(en.order(), 4);
        let v4 = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2),
            &FiniteGroupTable::cyclic(2),
        );
        assert!(en.table.isomorphic(&v4));
    }

    #[test]
    fn symmetric_three() {
        // ⟨x,y | x², y³, (xy)²⟩ ≅ S3
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let p = GroupPresentation::unnamed(2, vec![x.pow(2), y.pow(3), x.mul(&y).pow(2)]);
        let en = enumerate_fp_group(&p, 64).unwrap();
        assert_eq!(en.order(), 6);
        assert_eq!(en.table.order_profile(), vec![1, 2, 2, 2, 3, 3]);
        assert!(!en.table.is_abelian());
        // word-problem spot checks: yxy = x in S3 with these relators
        let yxy = en.eval(&y.mul(&x).mul(&y));
        assert_eq!(yxy, en.eval(&x));
    }

    #[test]
    fn free_product_c2_c3_is_unbounded() {
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let p = GroupPresentation::unnamed(2, vec![x.pow(2), y.pow(3)]);
        match enumerate_fp_group(&p, 512) {
            Err(AlgebraError::Unbounded { .. }) => {}
            other => panic!("expected Unbounded, got {:?}", other.map(|e| e.order())),
        }
    }

    #[test]
    fn free_group_rank_one_is_unbounded() {
        let p = GroupPresentation::unnamed(1, vec![]);
        assert!(matches!(
            enumerate_fp_group(&p, 100),
            Err(AlgebraError::Unbounded { .. })
        ));
    }

    #[test]
    fn quaternion_group() {
        // ⟨a,b | a⁴, a²b⁻², b⁻¹aba⟩ ≅ Q8
        let a = FreeWord::generator(0);
        let b = FreeWord::generator(1);
        let p = GroupPresentation::unnamed(
            2,
            vec![
                a.pow(4),
                a.pow(2).mul(&b.pow(-2)),
                b.inv().mul(&a).mul(&b).mul(&a),
            ],
        );
        let en = enumerate_fp_group(&p, 64).unwrap();
        assert_eq!(en.order(), 8);
        assert_eq!(en.table.order_profile(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn normal_forms_are_canonical() {
        let p = GroupPresentation::unnamed(1, vec![x_pow(4)]);
        let en = enumerate_fp_group(&p, 16).unwrap();
        for (i, w) in en.normal_forms.iter().enumerate() {
            assert_eq!(en.eval(w), i);
        }
        assert!(en.normal_forms[0].is_identity());
    }
}
