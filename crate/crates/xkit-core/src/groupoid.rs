//! Finite-object groupoids: free groupoids on directed graphs, groupoid
//! presentations, pushouts along morphisms, maximal trees, and vertex-group
//! extraction.

use crate::error::GroupoidError;
use crate::presentation::GroupPresentation;
use crate::word::FreeWord;
use std::fmt;

/// A finite directed graph with named objects and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    pub objects: Vec<String>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

impl DirectedGraph {
    pub fn new(objects: Vec<String>, edges: Vec<Edge>) -> Result<Self, GroupoidError> {
        for (i, e) in edges.iter().enumerate() {
            if e.src >= objects.len() || e.tgt >= objects.len() {
                return Err(GroupoidError::BadEdge(i));
            }
        }
        Ok(DirectedGraph { objects, edges })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Connected components (ignoring direction): a component id per object.
    pub fn components(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for e in &self.edges {
                    for (a, b) in [(e.src, e.tgt), (e.tgt, e.src)] {
                        if a == x && comp[b] == usize::MAX {
                            comp[b] = next;
                            stack.push(b);
                        }
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

/// A composable, freely reduced edge word with a remembered start object,
/// so that the empty path knows where it sits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePath {
    start: usize,
    letters: Vec<(usize, i8)>,
}

impl fmt::Debug for EdgePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "path@{}[", self.start)?;
        for (i, &(e, s)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "e{}{}", e, if s < 0 { "^-1" } else { "" })?;
        }
        write!(f, "]")
    }
}

impl EdgePath {
    /// The identity path at `obj`.
    pub fn identity(obj: usize) -> Self {
        EdgePath { start: obj, letters: Vec::new() }
    }

    /// Builds a path from raw letters, checking composability and reducing
    /// adjacent inverse pairs. Endpoints are preserved by the reduction.
    pub fn new(
        g: &DirectedGraph,
        start: usize,
        letters: &[(usize, i8)],
    ) -> Result<Self, GroupoidError> {
        if start >= g.objects.len() {
            return Err(GroupoidError::ObjectNotFound(start));
        }
        let mut at = start;
        let mut stack: Vec<(usize, i8)> = Vec::new();
        for &(e, s) in letters {
            let edge = g.edges.get(e).ok_or(GroupoidError::BadEdge(e))?;
            let (from, to) = if s > 0 { (edge.src, edge.tgt) } else { (edge.tgt, edge.src) };
            if from != at {
                return Err(GroupoidError::NotComposable { expected: at, found: from });
            }
            at = to;
            match stack.last() {
                Some(&(pe, ps)) if pe == e && ps == -s => {
                    stack.pop();
                }
                _ => stack.push((e, s)),
            }
        }
        Ok(EdgePath { start, letters: stack })
    }

    pub fn single(g: &DirectedGraph, edge: usize, sign: i8) -> Result<Self, GroupoidError> {
        let e = g.edges.get(edge).ok_or(GroupoidError::BadEdge(edge))?;
        let start = if sign > 0 { e.src } else { e.tgt };
        EdgePath::new(g, start, &[(edge, sign)])
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn source(&self) -> usize {
        self.start
    }

    pub fn target(&self, g: &DirectedGraph) -> usize {
        let mut at = self.start;
        for &(e, s) in &self.letters {
            at = if s > 0 { g.edges[e].tgt } else { g.edges[e].src };
        }
        at
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn compose(&self, other: &EdgePath, g: &DirectedGraph) -> Result<EdgePath, GroupoidError> {
        let t = self.target(g);
        if t != other.start {
            return Err(GroupoidError::NotComposable { expected: t, found: other.start });
        }
        let mut letters = self.letters.clone();
        for &(e, s) in &other.letters {
            match letters.last() {
                Some(&(pe, ps)) if pe == e && ps == -s => {
                    letters.pop();
                }
                _ => letters.push((e, s)),
            }
        }
        Ok(EdgePath { start: self.start, letters })
    }

    pub fn inverse(&self, g: &DirectedGraph) -> EdgePath {
        EdgePath {
            start: self.target(g),
            letters: self.letters.iter().rev().map(|&(e, s)| (e, -s)).collect(),
        }
    }
}

/// Free reduction of an edge word given as raw letters: the word-problem
/// entry point for the free groupoid on `g`.
pub fn groupoid_reduce(
    g: &DirectedGraph,
    start: usize,
    letters: &[(usize, i8)],
) -> Result<EdgePath, GroupoidError> {
    EdgePath::new(g, start, letters)
}

/// A groupoid presentation: a generating graph plus relations between
/// parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidPresentation {
    pub graph: DirectedGraph,
    pub relations: Vec<(EdgePath, EdgePath)>,
}

impl GroupoidPresentation {
    pub fn new(
        graph: DirectedGraph,
        relations: Vec<(EdgePath, EdgePath)>,
    ) -> Result<Self, GroupoidError> {
        for (l, r) in &relations {
            if l.source() != r.source() || l.target(&graph) != r.target(&graph) {
                return Err(GroupoidError::MismatchedRelation);
            }
        }
        Ok(GroupoidPresentation { graph, relations })
    }

    /// The free groupoid on a graph.
    pub fn free(graph: DirectedGraph) -> Self {
        GroupoidPresentation { graph, relations: Vec::new() }
    }

    /// One-object presentation wrapping a group presentation.
    pub fn from_group(p: &GroupPresentation, object: &str) -> Self {
        let graph = DirectedGraph {
            objects: vec![object.to_string()],
            edges: p
                .generators
                .iter()
                .map(|name| Edge { name: name.clone(), src: 0, tgt: 0 })
                .collect(),
        };
        let relations = p
            .relators
            .iter()
            .map(|r| {
                let letters: Vec<(usize, i8)> = r.letters().to_vec();
                (
                    EdgePath::new(&graph, 0, &letters).expect("one-object words compose"),
                    EdgePath::identity(0),
                )
            })
            .collect();
        GroupoidPresentation { graph, relations }
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }
}

/// A morphism of groupoid presentations: object map plus generator-edge
/// images as paths in the target.
#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    pub obj_map: Vec<usize>,
    pub edge_map: Vec<EdgePath>,
}

/// How far a morphism could be verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismCheck {
    /// Endpoints preserved and every relation verified (target free).
    Verified,
    /// Endpoints preserved; relations recorded as unverified because the
    /// target has relations of its own.
    EndpointsOnly,
}

impl GroupoidMorphism {
    pub fn identity(p: &GroupoidPresentation) -> Self {
        GroupoidMorphism {
            obj_map: (0..p.graph.object_count()).collect(),
            edge_map: (0..p.graph.edge_count())
                .map(|e| EdgePath::single(&p.graph, e, 1).expect("edge exists"))
                .collect(),
        }
    }

    /// Applies the morphism to a path of the source.
    pub fn apply(
        &self,
        path: &EdgePath,
        tgt: &GroupoidPresentation,
    ) -> Result<EdgePath, GroupoidError> {
        let start = *self
            .obj_map
            .get(path.source())
            .ok_or(GroupoidError::ObjectNotFound(path.source()))?;
        let mut out = EdgePath::identity(start);
        for &(e, s) in path.letters() {
            let img = self.edge_map.get(e).ok_or(GroupoidError::BadEdge(e))?;
            let img = if s > 0 { img.clone() } else { img.inverse(&tgt.graph) };
            out = out.compose(&img, &tgt.graph)?;
        }
        Ok(out)
    }

    /// Validates endpoint preservation, and relations when the target is
    /// free (otherwise they are recorded as unverified).
    pub fn check(
        &self,
        src: &GroupoidPresentation,
        tgt: &GroupoidPresentation,
    ) -> Result<MorphismCheck, GroupoidError> {
        if self.obj_map.len() != src.graph.object_count()
            || self.edge_map.len() != src.graph.edge_count()
        {
            return Err(GroupoidError::MismatchedRelation);
        }
        for (i, e) in src.graph.edges.iter().enumerate() {
            let img = &self.edge_map[i];
            if img.source() != self.obj_map[e.src] || img.target(&tgt.graph) != self.obj_map[e.tgt]
            {
                return Err(GroupoidError::BadMorphism(i));
            }
        }
        if !tgt.is_free() {
            return Ok(MorphismCheck::EndpointsOnly);
        }
        for (l, r) in &src.relations {
            if self.apply(l, tgt)? != self.apply(r, tgt)? {
                return Err(GroupoidError::MismatchedRelation);
            }
        }
        Ok(MorphismCheck::Verified)
    }
}

/// Result of a pushout of presentations, with the embeddings of both legs.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub presentation: GroupoidPresentation,
    pub u_objects: Vec<usize>,
    pub u_edges: Vec<usize>,
    pub v_objects: Vec<usize>,
    pub v_edges: Vec<usize>,
}

/// Pushout of `U ←i— W —j→ V` at the level of presentations: objects are
/// glued along the object maps, generators are the disjoint union of the
/// generators of `U` and `V`, and relations are those of `U`, those of `V`,
/// and one relation `i(w) = j(w)` per generator edge `w` of `W`.
pub fn pushout(
    w: &GroupoidPresentation,
    u: &GroupoidPresentation,
    v: &GroupoidPresentation,
    i: &GroupoidMorphism,
    j: &GroupoidMorphism,
) -> Result<Pushout, GroupoidError> {
    i.check(w, u)?;
    j.check(w, v)?;
    let nu = u.graph.object_count();
    let nv = v.graph.object_count();
    let mut parent: Vec<usize> = (0..nu + nv).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for wo in 0..w.graph.object_count() {
        let a = find(&mut parent, i.obj_map[wo]);
        let b = find(&mut parent, nu + j.obj_map[wo]);
        if a != b {
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            parent[gone] = keep;
        }
    }
    let mut index = vec![usize::MAX; nu + nv];
    let mut names: Vec<String> = Vec::new();
    for x in 0..nu + nv {
        let r = find(&mut parent, x);
        if index[r] == usize::MAX {
            let name = if r < nu {
                u.graph.objects[r].clone()
            } else {
                v.graph.objects[r - nu].clone()
            };
            index[r] = names.len();
            names.push(name);
        }
        index[x] = index[r];
    }
    let u_objects: Vec<usize> = (0..nu).map(|x| index[x]).collect();
    let v_objects: Vec<usize> = (0..nv).map(|x| index[nu + x]).collect();

    let mut edges: Vec<Edge> = Vec::new();
    let mut used: std::collections::BTreeSet<String> = Default::default();
    let mut push_edge = |name: &str, src: usize, tgt: usize, edges: &mut Vec<Edge>| {
        let mut n = name.to_string();
        while used.contains(&n) {
            n.push('\'');
        }
        used.insert(n.clone());
        edges.push(Edge { name: n, src, tgt });
    };
    for e in &u.graph.edges {
        push_edge(&e.name, u_objects[e.src], u_objects[e.tgt], &mut edges);
    }
    let u_edges: Vec<usize> = (0..u.graph.edge_count()).collect();
    let v_base = edges.len();
    for e in &v.graph.edges {
        push_edge(&e.name, v_objects[e.src], v_objects[e.tgt], &mut edges);
    }
    let v_edges: Vec<usize> = (0..v.graph.edge_count()).map(|k| v_base + k).collect();
    let graph = DirectedGraph { objects: names, edges };

    let transport = |p: &EdgePath,
                     objs: &[usize],
                     emap: &[usize],
                     graph: &DirectedGraph|
     -> Result<EdgePath, GroupoidError> {
        let letters: Vec<(usize, i8)> = p.letters().iter().map(|&(e, s)| (emap[e], s)).collect();
        EdgePath::new(graph, objs[p.source()], &letters)
    };

    let mut relations: Vec<(EdgePath, EdgePath)> = Vec::new();
    for (l, r) in &u.relations {
        relations.push((
            transport(l, &u_objects, &u_edges, &graph)?,
            transport(r, &u_objects, &u_edges, &graph)?,
        ));
    }
    for (l, r) in &v.relations {
        relations.push((
            transport(l, &v_objects, &v_edges, &graph)?,
            transport(r, &v_objects, &v_edges, &graph)?,
        ));
    }
    for we in 0..w.graph.edge_count() {
        let path = EdgePath::single(&w.graph, we, 1)?;
        let iu = i.apply(&path, u)?;
        let jv = j.apply(&path, v)?;
        relations.push((
            transport(&iu, &u_objects, &u_edges, &graph)?,
            transport(&jv, &v_objects, &v_edges, &graph)?,
        ));
    }
    let presentation = GroupoidPresentation::new(graph, relations)?;
    Ok(Pushout { presentation, u_objects, u_edges, v_objects, v_edges })
}

/// A spanning forest: one BFS tree per component, as edge indices.
/// `|tree| = |objects| − #components`.
pub fn maximal_tree(g: &DirectedGraph) -> Vec<usize> {
    let n = g.object_count();
    let mut visited = vec![false; n];
    let mut tree = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for (idx, e) in g.edges.iter().enumerate() {
                for (a, b) in [(e.src, e.tgt), (e.tgt, e.src)] {
                    if a == x && !visited[b] {
                        visited[b] = true;
                        tree.push(idx);
                        queue.push_back(b);
                    }
                }
            }
        }
    }
    tree.sort_unstable();
    tree.dedup();
    tree
}

/// Tree paths from a base object to every object of its component (`None`
/// outside the component).
pub fn tree_paths(g: &DirectedGraph, tree: &[usize], base: usize) -> Vec<Option<EdgePath>> {
    let mut paths: Vec<Option<EdgePath>> = vec![None; g.object_count()];
    paths[base] = Some(EdgePath::identity(base));
    let mut queue = std::collections::VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        for &idx in tree {
            let e = &g.edges[idx];
            for (a, b, s) in [(e.src, e.tgt, 1i8), (e.tgt, e.src, -1i8)] {
                if a == x && paths[b].is_none() {
                    let step = EdgePath::new(g, a, &[(idx, s)]).expect("tree edge composes");
                    paths[b] = Some(paths[x].clone().unwrap().compose(&step, g).unwrap());
                    queue.push_back(b);
                }
            }
        }
    }
    paths
}

/// Extracts the vertex group at `obj` from a presentation via a spanning
/// tree of its component: generators are the non-tree edges of the
/// component; each groupoid relation is rewritten through tree conjugation
/// to a relator at `obj` (non-tree edges become generators, tree edges
/// vanish).
pub fn vertex_group(
    p: &GroupoidPresentation,
    obj: usize,
    tree: &[usize],
) -> Result<GroupPresentation, GroupoidError> {
    let g = &p.graph;
    if obj >= g.object_count() {
        return Err(GroupoidError::ObjectNotFound(obj));
    }
    let comp = g.components();
    let my = comp[obj];
    let mut gen_of_edge: Vec<Option<usize>> = vec![None; g.edge_count()];
    let mut names: Vec<String> = Vec::new();
    for (idx, e) in g.edges.iter().enumerate() {
        if comp[e.src] == my && !tree.contains(&idx) {
            gen_of_edge[idx] = Some(names.len());
            names.push(e.name.clone());
        }
    }
    let rewrite = |path: &EdgePath| -> FreeWord {
        let letters: Vec<(usize, i8)> = path
            .letters()
            .iter()
            .filter_map(|&(e, s)| gen_of_edge[e].map(|x| (x, s)))
            .collect();
        FreeWord::from_letters(&letters)
    };
    let mut relators = Vec::new();
    for (l, r) in &p.relations {
        if comp[l.source()] != my {
            continue;
        }
        let w = rewrite(l).mul(&rewrite(r).inv());
        if !w.is_identity() {
            relators.push(w);
        }
    }
    GroupPresentation::new(names, relators).map_err(GroupoidError::Algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::AlgebraError;
    use crate::presentation::enumerate_fp_group;

    fn graph(objs: &[&str], edges: &[(&str, usize, usize)]) -> DirectedGraph {
        DirectedGraph::new(
            objs.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|&(n, s, t)| Edge { name: n.to_string(), src: s, tgt: t })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn reduce_edge_inverse_pair() {
        let g = graph(&["a", "b"], &[("e", 0, 1)]);
        let p = groupoid_reduce(&g, 0, &[(0, 1), (0, -1)]).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.source(), 0);
    }

    #[test]
    fn reduce_then_keep_prefix() {
        let g = graph(&["a", "b", "c"], &[("e", 0, 1), ("f", 1, 2)]);
        let p = groupoid_reduce(&g, 0, &[(0, 1), (1, 1), (1, -1)]).unwrap();
        assert_eq!(p.letters(), &[(0, 1)]);
        assert_eq!(p.target(&g), 1);
    }

    #[test]
    fn non_composable_is_an_error() {
        let g = graph(&["a", "b", "c", "d"], &[("e", 0, 1), ("g", 2, 3)]);
        assert!(matches!(
            groupoid_reduce(&g, 0, &[(0, 1), (1, 1)]),
            Err(GroupoidError::NotComposable { .. })
        ));
    }

    #[test]
    fn maximal_tree_sizes() {
        let g = graph(&["p", "q"], &[("e", 0, 1), ("f", 0, 1)]);
        assert_eq!(maximal_tree(&g).len(), 1);
        let g1 = graph(&["p"], &[]);
        assert!(maximal_tree(&g1).is_empty());
        let g3 = graph(&["a", "b", "c"], &[("x", 0, 1), ("y", 1, 2), ("z", 2, 0)]);
        assert_eq!(maximal_tree(&g3).len(), 2);
    }

    #[test]
    fn spanning_tree_count_oracle_triangle() {
        // the triangle has exactly 3 spanning trees: every 2-subset works
        let g3 = graph(&["a", "b", "c"], &[("x", 0, 1), ("y", 1, 2), ("z", 2, 0)]);
        let mut count = 0;
        for omit in 0..3 {
            let tree: Vec<usize> = (0..3).filter(|&e| e != omit).collect();
            let sub = DirectedGraph {
                objects: g3.objects.clone(),
                edges: tree.iter().map(|&e| g3.edges[e].clone()).collect(),
            };
            if sub.components().iter().all(|&c| c == 0) {
                count += 1;
            }
        }
        assert_eq!(count, 3);
    }

    /// The two-semicircle circle cover: discrete groupoid on {−1, 1} mapped
    /// into two interval groupoids.
    fn circle_pushout() -> Pushout {
        let w = GroupoidPresentation::free(graph(&["-1", "1"], &[]));
        let u = GroupoidPresentation::free(graph(&["-1", "1"], &[("e+", 0, 1)]));
        let v = GroupoidPresentation::free(graph(&["-1", "1"], &[("e-", 0, 1)]));
        let i = GroupoidMorphism { obj_map: vec![0, 1], edge_map: vec![] };
        let j = GroupoidMorphism { obj_map: vec![0, 1], edge_map: vec![] };
        pushout(&w, &u, &v, &i, &j).unwrap()
    }

    #[test]
    fn circle_pushout_shape() {
        let po = circle_pushout();
        let p = &po.presentation;
        assert_eq!(p.graph.object_count(), 2);
        assert_eq!(p.graph.edge_count(), 2);
        assert!(p.relations.is_empty());
        assert_eq!(p.graph.edges[0].src, p.graph.edges[1].src);
        assert_eq!(p.graph.edges[0].tgt, p.graph.edges[1].tgt);
    }

    #[test]
    fn circle_vertex_group_is_free_of_rank_one() {
        let po = circle_pushout();
        let p = &po.presentation;
        let tree = maximal_tree(&p.graph);
        assert_eq!(tree.len(), 1);
        let vg = vertex_group(p, 0, &tree).unwrap();
        assert_eq!(vg.rank(), 1);
        assert!(vg.relators.is_empty());
    }

    #[test]
    fn pushout_along_identity_keeps_vertex_groups() {
        let w = GroupoidPresentation::free(graph(&["p"], &[("a", 0, 0)]));
        let u = w.clone();
        let v = w.clone();
        let i = GroupoidMorphism::identity(&w);
        let j = GroupoidMorphism::identity(&w);
        let po = pushout(&w, &u, &v, &i, &j).unwrap();
        // one object, loops a and a', relation a = a'; adjoin a³ to compare
        // finite vertex groups
        let tree = maximal_tree(&po.presentation.graph);
        let vg = vertex_group(&po.presentation, 0, &tree).unwrap();
        let mut relators = vg.relators.clone();
        relators.push(FreeWord::generator(0).pow(3));
        let en = enumerate_fp_group(
            &GroupPresentation::new(vg.generators.clone(), relators).unwrap(),
            64,
        )
        .unwrap();
        assert_eq!(en.order(), 3);
    }

    #[test]
    fn free_product_pushout_relators() {
        // one-object pushout C2 <- 1 -> C3: presentation ⟨x, y | x², y³⟩
        let w = GroupoidPresentation::free(graph(&["p"], &[]));
        let u = GroupoidPresentation::from_group(
            &GroupPresentation::unnamed(1, vec![FreeWord::generator(0).pow(2)]),
            "p",
        );
        let v = GroupoidPresentation::from_group(
            &GroupPresentation::unnamed(1, vec![FreeWord::generator(0).pow(3)]),
            "p",
        );
        let i = GroupoidMorphism { obj_map: vec![0], edge_map: vec![] };
        let j = GroupoidMorphism { obj_map: vec![0], edge_map: vec![] };
        let po = pushout(&w, &u, &v, &i, &j).unwrap();
        let tree = maximal_tree(&po.presentation.graph);
        assert!(tree.is_empty());
        let vg = vertex_group(&po.presentation, 0, &tree).unwrap();
        assert_eq!(vg.rank(), 2);
        let mut lens: Vec<usize> = vg.relators.iter().map(|r| r.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 3]);
        // bounded enumeration signals Unbounded: C2 * C3 is infinite
        assert!(matches!(
            enumerate_fp_group(&vg, 256),
            Err(AlgebraError::Unbounded { .. })
        ));
    }

    #[test]
    fn pushout_is_symmetric() {
        let w = GroupoidPresentation::free(graph(&["p"], &[]));
        let u = GroupoidPresentation::from_group(
            &GroupPresentation::unnamed(1, vec![FreeWord::generator(0).pow(2)]),
            "p",
        );
        let v = GroupoidPresentation::from_group(
            &GroupPresentation::unnamed(1, vec![FreeWord::generator(0).pow(3)]),
            "p",
        );
        let i = GroupoidMorphism { obj_map: vec![0], edge_map: vec![] };
        let j = GroupoidMorphism { obj_map: vec![0], edge_map: vec![] };
        let ab = pushout(&w, &u, &v, &i, &j).unwrap();
        let ba = pushout(&w, &v, &u, &j, &i).unwrap();
        let norm = |po: &Pushout| {
            let tree = maximal_tree(&po.presentation.graph);
            let vg = vertex_group(&po.presentation, 0, &tree).unwrap();
            let mut pats: Vec<Vec<i8>> = vg
                .relators
                .iter()
                .map(|r| r.letters().iter().map(|&(_, s)| s).collect())
                .collect();
            pats.sort();
            let mut lens: Vec<usize> = vg.relators.iter().map(|r| r.len()).collect();
            lens.sort_unstable();
            (lens, pats)
        };
        assert_eq!(norm(&ab), norm(&ba));
    }

    #[test]
    fn tree_groupoid_has_trivial_vertex_group() {
        let g = graph(&["a", "b", "c"], &[("e", 0, 1), ("f", 1, 2)]);
        let p = GroupoidPresentation::free(g);
        let tree = maximal_tree(&p.graph);
        assert_eq!(tree.len(), 2);
        let vg = vertex_group(&p, 0, &tree).unwrap();
        assert_eq!(vg.rank(), 0);
        assert!(vg.relators.is_empty());
    }

    #[test]
    fn wedge_of_two_circles_rank_two() {
        let w = GroupoidPresentation::free(graph(&["-1", "1"], &[]));
        let u = GroupoidPresentation::free(graph(&["-1", "1"], &[("a", 0, 1), ("b", 0, 1)]));
        let v = GroupoidPresentation::free(graph(&["-1", "1"], &[("c", 0, 1)]));
        let i = GroupoidMorphism { obj_map: vec![0, 1], edge_map: vec![] };
        let j = GroupoidMorphism { obj_map: vec![0, 1], edge_map: vec![] };
        let po = pushout(&w, &u, &v, &i, &j).unwrap();
        let tree = maximal_tree(&po.presentation.graph);
        let vg = vertex_group(&po.presentation, 0, &tree).unwrap();
        // E=3, V=2: rank 2
        assert_eq!(vg.rank(), 2);
        assert!(vg.relators.is_empty());
    }

    #[test]
    fn rank_formula_exhaustive_small_graphs() {
        // rank of the vertex group of a free groupoid = E − V + 1, for all
        // connected graphs with ≤ 4 objects and ≤ 5 edges
        for v in 1..=4usize {
            let mut pairs = Vec::new();
            for a in 0..v {
                for b in 0..v {
                    pairs.push((a, b));
                }
            }
            let maxe = 5usize;
            fn combos(
                pairs: &[(usize, usize)],
                maxe: usize,
                start: usize,
                current: &mut Vec<(usize, usize)>,
                out: &mut Vec<Vec<(usize, usize)>>,
            ) {
                out.push(current.clone());
                if current.len() == maxe {
                    return;
                }
                for k in start..pairs.len() {
                    current.push(pairs[k]);
                    combos(pairs, maxe, k, current, out);
                    current.pop();
                }
            }
            let mut all = Vec::new();
            combos(&pairs, maxe, 0, &mut Vec::new(), &mut all);
            for edges in all {
                let g = DirectedGraph {
                    objects: (0..v).map(|i| format!("o{i}")).collect(),
                    edges: edges
                        .iter()
                        .enumerate()
                        .map(|(k, &(s, t))| Edge { name: format!("e{k}"), src: s, tgt: t })
                        .collect(),
                };
                if g.components().iter().any(|&c| c != 0) {
                    continue;
                }
                let p = GroupoidPresentation::free(g);
                let tree = maximal_tree(&p.graph);
                let vg = vertex_group(&p, 0, &tree).unwrap();
                assert_eq!(vg.rank(), edges.len() + 1 - v, "E={} V={}", edges.len(), v);
            }
        }
    }

    #[test]
    fn vertex_group_independent_of_tree_choice() {
        // a circle with relation (loop)³ both ways round: vertex groups for
        // two different trees are isomorphic as finite groups
        let g = graph(&["p", "q"], &[("e", 0, 1), ("f", 0, 1)]);
        // relation: (e f⁻¹)³ = id_p
        let loop_ef = EdgePath::new(&g, 0, &[(0, 1), (1, -1)]).unwrap();
        let cubed = loop_ef
            .compose(&loop_ef, &g)
            .unwrap()
            .compose(&loop_ef, &g)
            .unwrap();
        let p = GroupoidPresentation::new(g, vec![(cubed, EdgePath::identity(0))]).unwrap();
        let mut tables = Vec::new();
        for tree in [vec![0usize], vec![1usize]] {
            for obj in 0..2 {
                let vg = vertex_group(&p, obj, &tree).unwrap();
                let en = enumerate_fp_group(&vg, 32).unwrap();
                tables.push(en.table);
            }
        }
        for t in &tables[1..] {
            assert_eq!(t.order(), tables[0].order());
            assert_eq!(t.order_profile(), tables[0].order_profile());
            assert!(t.isomorphic(&tables[0]));
        }
    }
}
