//! Tensor products of crossed complexes, the symmetry, factor embeddings,
//! cylinders, and 1-homotopy verification.
//!
//! Generators of `A⊗B` in degree `k` are pairs of basis elements with
//! degrees summing to `k`, ordered lexicographically on
//! `(deg a, index a, index b)`. Boundaries and the bilinear expansion of
//! non-basis arguments follow the bimorphism rules: additive notation is
//! interpreted as ordered multiplication into the degree-2 carrier and as
//! formal sums above, action decorations become conjugation or
//! translation, and the sign `(−1)ᵐ` is taken verbatim.

use super::element::{Crossed2, ModElt};
use super::{BoundaryVal, ComplexSolvers, CrossedComplex, CrsError, Gen2, ModGen, ModulePart};
use crate::groupoid::{DirectedGraph, Edge, EdgePath};
use std::collections::BTreeMap;

/// A generator of the tensor: a pair of basis elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TensorGenerator {
    pub a_degree: usize,
    pub a_index: usize,
    pub b_degree: usize,
    pub b_index: usize,
}

impl TensorGenerator {
    pub fn degree(&self) -> usize {
        self.a_degree + self.b_degree
    }
}

/// An element of the tensor, by target degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TElt {
    One(EdgePath),
    Two(Crossed2),
    Mod(ModElt),
}

/// Basis bookkeeping of one factor.
fn basis_count(c: &CrossedComplex, d: usize) -> usize {
    match d {
        0 => c.objects.len(),
        1 => c.graph.edge_count(),
        2 => c.c2.len(),
        _ => c.module(d).map(|p| p.gens.len()).unwrap_or(0),
    }
}

fn basis_name(c: &CrossedComplex, d: usize, i: usize) -> String {
    match d {
        0 => c.objects[i].clone(),
        1 => c.graph.edges[i].name.clone(),
        2 => c.c2[i].name.clone(),
        _ => c.module(d).unwrap().gens[i].name.clone(),
    }
}

/// The target-end object of a basis element (`β`); for an object it is
/// itself, for an edge the target.
fn basis_beta(c: &CrossedComplex, d: usize, i: usize) -> usize {
    match d {
        0 => i,
        1 => c.graph.edges[i].tgt,
        2 => c.c2[i].base,
        _ => c.module(d).unwrap().gens[i].base,
    }
}

/// The tensor product with its index maps.
pub struct Tensor {
    pub complex: CrossedComplex,
    pub a: CrossedComplex,
    pub b: CrossedComplex,
    pub maxdeg: usize,
    b_objects: usize,
    /// edge index of `(a-edge e, b-object o)`
    edge_a: BTreeMap<(usize, usize), usize>,
    /// edge index of `(a-object o, b-edge f)`
    edge_b: BTreeMap<(usize, usize), usize>,
    /// generator pairs per degree ≥ 2, in order
    pub gens: BTreeMap<usize, Vec<TensorGenerator>>,
    gen_index: BTreeMap<(usize, usize, usize, usize), usize>,
}

impl Tensor {
    pub fn object(&self, a_obj: usize, b_obj: usize) -> usize {
        a_obj * self.b_objects + b_obj
    }

    pub fn edge_of_a(&self, e: usize, b_obj: usize) -> usize {
        self.edge_a[&(e, b_obj)]
    }

    pub fn edge_of_b(&self, a_obj: usize, f: usize) -> usize {
        self.edge_b[&(a_obj, f)]
    }

    /// Generator index (within its degree) of a basis pair.
    pub fn gen(&self, adeg: usize, ai: usize, bdeg: usize, bi: usize) -> usize {
        self.gen_index[&(adeg, ai, bdeg, bi)]
    }

    pub fn generator(&self, degree: usize, index: usize) -> TensorGenerator {
        self.gens[&degree][index]
    }

    fn graph(&self) -> &DirectedGraph {
        &self.complex.graph
    }

    /// Transports a path of `A` into the slice over a `B`-object.
    pub fn path_a(&self, p: &EdgePath, b_obj: usize) -> EdgePath {
        let letters: Vec<(usize, i8)> = p
            .letters()
            .iter()
            .map(|&(e, s)| (self.edge_of_a(e, b_obj), s))
            .collect();
        EdgePath::new(self.graph(), self.object(p.source(), b_obj), &letters)
            .expect("transported paths compose")
    }

    /// Transports a path of `B` into the slice over an `A`-object.
    pub fn path_b(&self, a_obj: usize, p: &EdgePath) -> EdgePath {
        let letters: Vec<(usize, i8)> = p
            .letters()
            .iter()
            .map(|&(f, s)| (self.edge_of_b(a_obj, f), s))
            .collect();
        EdgePath::new(self.graph(), self.object(a_obj, p.source()), &letters)
            .expect("transported paths compose")
    }

    /// `θ(e, f)` on positive single edges, as the degree-2 generator at
    /// its base.
    fn th11_gen(&self, e: usize, f: usize) -> Crossed2 {
        let be = self.a.graph.edges[e].tgt;
        let bf = self.b.graph.edges[f].tgt;
        Crossed2::single(self.gen(1, e, 1, f), 1, EdgePath::identity(self.object(be, bf)))
    }

    /// `θ(e^s, pb)` for a single signed `A`-edge against a `B`-path.
    fn th11_letter(&self, e: usize, s: i8, pb: &EdgePath) -> Crossed2 {
        let ae = &self.a.graph.edges[e];
        if s > 0 {
            // recurse over the letters of pb
            let mut at = pb.source();
            let mut rest = pb.letters().to_vec();
            if rest.is_empty() {
                return Crossed2::zero();
            }
            let (f, fs) = rest.remove(0);
            let rest_path = {
                let start = if fs > 0 { self.b.graph.edges[f].tgt } else { self.b.graph.edges[f].src };
                EdgePath::new(&self.b.graph, start, &rest).expect("suffix composes")
            };
            let _ = &mut at;
            let first = if fs > 0 {
                self.th11_gen(e, f)
            } else {
                // θ(e, f⁻¹) = −θ(e, f)^{θ(βe, f⁻¹)}
                let fpath =
                    EdgePath::single(&self.b.graph, f, -1).expect("edge path");
                let tw = self.path_b(ae.tgt, &fpath);
                self.th11_gen(e, f).act(&tw, self.graph()).expect("act composes").inv()
            };
            // θ(a, l·w) = θ(a, l)^{θ(βa, w)} · θ(a, w)
            let tw = self.path_b(ae.tgt, &rest_path);
            first
                .act(&tw, self.graph())
                .expect("act composes")
                .mul(&self.th11_letter(e, 1, &rest_path))
        } else {
            // θ(e⁻¹, b) = −θ(e, b)^{θ(e⁻¹, βb)}
            let beta_b = pb.target(&self.b.graph);
            let inv_edge = EdgePath::single(&self.a.graph, e, -1).expect("edge path");
            let tw = self.path_a(&inv_edge, beta_b);
            self.th11_letter(e, 1, pb).act(&tw, self.graph()).expect("act composes").inv()
        }
    }

    /// `θ(pa, pb)` for full degree-1 words, an ordered degree-2 element
    /// based at `(β pa, β pb)`.
    pub fn th11(&self, pa: &EdgePath, pb: &EdgePath) -> Crossed2 {
        let mut letters = pa.letters().to_vec();
        if letters.is_empty() {
            return Crossed2::zero();
        }
        let (e, s) = letters.remove(0);
        let rest = {
            let start =
                if s > 0 { self.a.graph.edges[e].tgt } else { self.a.graph.edges[e].src };
            EdgePath::new(&self.a.graph, start, &letters).expect("suffix composes")
        };
        // θ(l·w, b) = θ(w, b) · θ(l, b)^{θ(w, βb)}
        let bb = pb.target(&self.b.graph);
        let tw = self.path_a(&rest, bb);
        self.th11(&rest, pb)
            .mul(&self.th11_letter(e, s, pb).act(&tw, self.graph()).expect("act composes"))
    }

    /// `θ(x, b₀)` for a degree-2 element of `A` over a `B`-object.
    pub fn th20(&self, x: &Crossed2, b_obj: usize) -> Crossed2 {
        let mut out = Crossed2::zero();
        for t in &x.terms {
            let g = self.gen(2, t.gen, 0, b_obj);
            let base = self.a.c2[t.gen].base;
            let conj = self.path_a(&t.conj, b_obj);
            let single = Crossed2::single(g, t.sign, EdgePath::identity(self.object(base, b_obj)))
                .act(&conj, self.graph())
                .expect("act composes");
            out = out.mul(&single);
        }
        out
    }

    /// `θ(a₀, y)` for a degree-2 element of `B` over an `A`-object.
    pub fn th02(&self, a_obj: usize, y: &Crossed2) -> Crossed2 {
        let mut out = Crossed2::zero();
        for t in &y.terms {
            let g = self.gen(0, a_obj, 2, t.gen);
            let base = self.b.c2[t.gen].base;
            let conj = self.path_b(a_obj, &t.conj);
            let single = Crossed2::single(g, t.sign, EdgePath::identity(self.object(a_obj, base)))
                .act(&conj, self.graph())
                .expect("act composes");
            out = out.mul(&single);
        }
        out
    }

    /// `θ(pa, b)` for a degree-1 word against a basis element of degree
    /// `n ≥ 2`: a formal sum in degree `1+n`.
    pub fn th_word_basis(&self, pa: &EdgePath, bdeg: usize, bi: usize) -> ModElt {
        let mut letters = pa.letters().to_vec();
        if letters.is_empty() {
            return ModElt::zero();
        }
        let (e, s) = letters.remove(0);
        let rest = {
            let start =
                if s > 0 { self.a.graph.edges[e].tgt } else { self.a.graph.edges[e].src };
            EdgePath::new(&self.a.graph, start, &letters).expect("suffix composes")
        };
        let b_base = basis_beta(&self.b, bdeg, bi);
        let first = if s > 0 {
            let g = self.gen(1, e, bdeg, bi);
            let at = self.object(self.a.graph.edges[e].tgt, b_base);
            ModElt::single(g, EdgePath::identity(at), 1)
        } else {
            let inv_edge = EdgePath::single(&self.a.graph, e, -1).expect("edge path");
            let tw = self.path_a(&inv_edge, b_base);
            self.th_word_basis(&EdgePath::single(&self.a.graph, e, 1).unwrap(), bdeg, bi)
                .act(&tw, self.graph())
                .expect("act composes")
                .neg()
        };
        // θ(l·w, b) = θ(w, b) + θ(l, b)^{θ(w, β b)}
        let tw = self.path_a(&rest, b_base);
        self.th_word_basis(&rest, bdeg, bi)
            .add(&first.act(&tw, self.graph()).expect("act composes"))
    }

    /// `θ(a, pb)` for a basis element of degree `m ≥ 2` against a
    /// degree-1 word.
    pub fn th_basis_word(&self, adeg: usize, ai: usize, pb: &EdgePath) -> ModElt {
        let mut letters = pb.letters().to_vec();
        if letters.is_empty() {
            return ModElt::zero();
        }
        let (f, s) = letters.remove(0);
        let rest = {
            let start =
                if s > 0 { self.b.graph.edges[f].tgt } else { self.b.graph.edges[f].src };
            EdgePath::new(&self.b.graph, start, &letters).expect("suffix composes")
        };
        let a_base = basis_beta(&self.a, adeg, ai);
        let first = if s > 0 {
            let g = self.gen(adeg, ai, 1, f);
            let at = self.object(a_base, self.b.graph.edges[f].tgt);
            ModElt::single(g, EdgePath::identity(at), 1)
        } else {
            let inv_edge = EdgePath::single(&self.b.graph, f, -1).expect("edge path");
            let tw = self.path_b(a_base, &inv_edge);
            self.th_basis_word(adeg, ai, &EdgePath::single(&self.b.graph, f, 1).unwrap())
                .act(&tw, self.graph())
                .expect("act composes")
                .neg()
        };
        // θ(a, l·w) = θ(a, l)^{θ(β a, w)} + θ(a, w)
        let tw = self.path_b(a_base, &rest);
        first
            .act(&tw, self.graph())
            .expect("act composes")
            .add(&self.th_basis_word(adeg, ai, &rest))
    }

    /// `θ(x, b)` for a degree-2 element of `A` against a basis element of
    /// degree `n ≥ 1`.
    pub fn th_elt2_basis(&self, x: &Crossed2, bdeg: usize, bi: usize) -> ModElt {
        let b_base = basis_beta(&self.b, bdeg, bi);
        let mut out = ModElt::zero();
        for t in &x.terms {
            let g = self.gen(2, t.gen, bdeg, bi);
            let at = self.object(self.a.c2[t.gen].base, b_base);
            let tw = self.path_a(&t.conj, b_base);
            out = out.add(
                &ModElt::single(g, EdgePath::identity(at), t.sign as i64)
                    .act(&tw, self.graph())
                    .expect("act composes"),
            );
        }
        out
    }

    /// `θ(a, y)` for a basis element of degree `m ≥ 1` against a degree-2
    /// element of `B`.
    pub fn th_basis_elt2(&self, adeg: usize, ai: usize, y: &Crossed2) -> ModElt {
        let a_base = basis_beta(&self.a, adeg, ai);
        let mut out = ModElt::zero();
        for t in &y.terms {
            let g = self.gen(adeg, ai, 2, t.gen);
            let at = self.object(a_base, self.b.c2[t.gen].base);
            let tw = self.path_b(a_base, &t.conj);
            out = out.add(
                &ModElt::single(g, EdgePath::identity(at), t.sign as i64)
                    .act(&tw, self.graph())
                    .expect("act composes"),
            );
        }
        out
    }

    /// `θ(x, b)` for a module element of `A` (degree ≥ 3) against any
    /// basis element.
    pub fn th_mod_basis(&self, mdeg: usize, x: &ModElt, bdeg: usize, bi: usize) -> ModElt {
        let b_base = basis_beta(&self.b, bdeg, bi);
        let mut out = ModElt::zero();
        for t in &x.terms {
            let g = self.gen(mdeg, t.gen, bdeg, bi);
            let at = self.object(self.a.module(mdeg).unwrap().gens[t.gen].base, b_base);
            let tw = self.path_a(&t.path, b_base);
            out = out.add(
                &ModElt::single(g, EdgePath::identity(at), t.coeff)
                    .act(&tw, self.graph())
                    .expect("act composes"),
            );
        }
        out
    }

    /// `θ(a, y)` for any basis element against a module element of `B`.
    pub fn th_basis_mod(&self, adeg: usize, ai: usize, ndeg: usize, y: &ModElt) -> ModElt {
        let a_base = basis_beta(&self.a, adeg, ai);
        let mut out = ModElt::zero();
        for t in &y.terms {
            let g = self.gen(adeg, ai, ndeg, t.gen);
            let at = self.object(a_base, self.b.module(ndeg).unwrap().gens[t.gen].base);
            let tw = self.path_b(a_base, &t.path);
            out = out.add(
                &ModElt::single(g, EdgePath::identity(at), t.coeff)
                    .act(&tw, self.graph())
                    .expect("act composes"),
            );
        }
        out
    }

    /// The boundary of a tensor generator of degree ≥ 2, by the printed
    /// case of the boundary rules.
    pub fn boundary(&self, g: &TensorGenerator) -> Result<TElt, CrsError> {
        let (m, n) = (g.a_degree, g.b_degree);
        let (ai, bi) = (g.a_index, g.b_index);
        let gr = self.graph();
        match (m, n) {
            (2, 0) => {
                let w = &self.a.c2[ai].boundary;
                Ok(TElt::One(self.path_a(w, bi)))
            }
            (0, 2) => {
                let w = &self.b.c2[bi].boundary;
                Ok(TElt::One(self.path_b(ai, w)))
            }
            (1, 1) => {
                // δ(a⊗b) = −(βa⊗b) − (a⊗αb) + (αa⊗b) + (a⊗βb)
                let ea = &self.a.graph.edges[ai];
                let eb = &self.b.graph.edges[bi];
                let letters = vec![
                    (self.edge_of_b(ea.tgt, bi), -1),
                    (self.edge_of_a(ai, eb.src), -1),
                    (self.edge_of_b(ea.src, bi), 1),
                    (self.edge_of_a(ai, eb.tgt), 1),
                ];
                let start = self.object(ea.tgt, eb.tgt);
                Ok(TElt::One(
                    EdgePath::new(gr, start, &letters).map_err(CrsError::Groupoid)?,
                ))
            }
            (1, nn) if nn >= 2 => {
                // −θ(a, δb) − θ(βa, b) + θ(αa, b)^{θ(a, βb)}
                let ea = &self.a.graph.edges[ai];
                let b_base = basis_beta(&self.b, nn, bi);
                let tw = self.path_a(&EdgePath::single(&self.a.graph, ai, 1).unwrap(), b_base);
                if nn == 2 {
                    let db = &self.b.c2[bi].boundary;
                    let t1 = self
                        .th11(&EdgePath::single(&self.a.graph, ai, 1).unwrap(), db)
                        .inv();
                    let t2 = Crossed2::single(
                        self.gen(0, ea.tgt, 2, bi),
                        -1,
                        EdgePath::identity(self.object(ea.tgt, b_base)),
                    );
                    let t3 = Crossed2::single(
                        self.gen(0, ea.src, 2, bi),
                        1,
                        EdgePath::identity(self.object(ea.src, b_base)),
                    )
                    .act(&tw, gr)
                    .map_err(CrsError::Groupoid)?;
                    Ok(TElt::Two(t1.mul(&t2).mul(&t3)))
                } else {
                    let db = match &self.b.module(nn).unwrap().boundary[bi] {
                        BoundaryVal::Two(x) => self.th_basis_elt2(1, ai, x),
                        BoundaryVal::Higher(x) => self.th_basis_mod(1, ai, nn - 1, x),
                    };
                    let t2 = ModElt::single(
                        self.gen(0, ea.tgt, nn, bi),
                        EdgePath::identity(self.object(ea.tgt, b_base)),
                        -1,
                    );
                    let t3 = ModElt::single(
                        self.gen(0, ea.src, nn, bi),
                        EdgePath::identity(self.object(ea.src, b_base)),
                        1,
                    )
                    .act(&tw, gr)
                    .map_err(CrsError::Groupoid)?;
                    Ok(TElt::Mod(db.neg().add(&t2).add(&t3)))
                }
            }
            (mm, 1) if mm >= 2 => {
                // (−1)^{m+1} θ(a, βb) + (−1)^m θ(a, αb)^{θ(βa, b)} + θ(δa, b)
                let eb = &self.b.graph.edges[bi];
                let a_base = basis_beta(&self.a, mm, ai);
                let sign_m = if mm % 2 == 0 { 1i64 } else { -1i64 };
                let tw = self.path_b(a_base, &EdgePath::single(&self.b.graph, bi, 1).unwrap());
                if mm == 2 {
                    let da = &self.a.c2[ai].boundary;
                    let t1 = Crossed2::single(
                        self.gen(2, ai, 0, eb.tgt),
                        1,
                        EdgePath::identity(self.object(a_base, eb.tgt)),
                    )
                    .scale(-sign_m);
                    let t2 = Crossed2::single(
                        self.gen(2, ai, 0, eb.src),
                        1,
                        EdgePath::identity(self.object(a_base, eb.src)),
                    )
                    .act(&tw, gr)
                    .map_err(CrsError::Groupoid)?
                    .scale(sign_m);
                    let t3 = self.th11(da, &EdgePath::single(&self.b.graph, bi, 1).unwrap());
                    Ok(TElt::Two(t1.mul(&t2).mul(&t3)))
                } else {
                    let t1 = ModElt::single(
                        self.gen(mm, ai, 0, eb.tgt),
                        EdgePath::identity(self.object(a_base, eb.tgt)),
                        -sign_m,
                    );
                    let t2 = ModElt::single(
                        self.gen(mm, ai, 0, eb.src),
                        EdgePath::identity(self.object(a_base, eb.src)),
                        sign_m,
                    )
                    .act(&tw, gr)
                    .map_err(CrsError::Groupoid)?;
                    let bpath = EdgePath::single(&self.b.graph, bi, 1).unwrap();
                    let t3 = match &self.a.module(mm).unwrap().boundary[ai] {
                        BoundaryVal::Two(x) => self.th_elt2_basis(x, 1, bi),
                        BoundaryVal::Higher(x) => self.th_mod_basis(mm - 1, x, 1, bi),
                    };
                    let _ = bpath;
                    Ok(TElt::Mod(t1.add(&t2).add(&t3)))
                }
            }
            (mm, 0) if mm >= 3 => {
                // θ(δa, b)
                match &self.a.module(mm).unwrap().boundary[ai] {
                    BoundaryVal::Two(x) => Ok(TElt::Two(self.th20(x, bi))),
                    BoundaryVal::Higher(x) => Ok(TElt::Mod(self.th_mod_basis(mm - 1, x, 0, bi))),
                }
            }
            (0, nn) if nn >= 3 => match &self.b.module(nn).unwrap().boundary[bi] {
                BoundaryVal::Two(y) => Ok(TElt::Two(self.th02(ai, y))),
                BoundaryVal::Higher(y) => Ok(TElt::Mod(self.th_basis_mod(0, ai, nn - 1, y))),
            },
            (mm, nn) if mm >= 2 && nn >= 2 => {
                // θ(δa, b) + (−1)^m θ(a, δb)
                let sign_m = if mm % 2 == 0 { 1i64 } else { -1i64 };
                let left = if mm == 2 {
                    self.th_word_basis(&self.a.c2[ai].boundary, nn, bi)
                } else {
                    match &self.a.module(mm).unwrap().boundary[ai] {
                        BoundaryVal::Two(x) => self.th_elt2_basis(x, nn, bi),
                        BoundaryVal::Higher(x) => self.th_mod_basis(mm - 1, x, nn, bi),
                    }
                };
                let right = if nn == 2 {
                    self.th_basis_word(mm, ai, &self.b.c2[bi].boundary)
                } else {
                    match &self.b.module(nn).unwrap().boundary[bi] {
                        BoundaryVal::Two(y) => self.th_basis_elt2(mm, ai, y),
                        BoundaryVal::Higher(y) => self.th_basis_mod(mm, ai, nn - 1, y),
                    }
                };
                Ok(TElt::Mod(left.add(&right.scale(sign_m))))
            }
            _ => Err(CrsError::PreconditionFailed(format!(
                "no boundary for a degree-{} generator",
                m + n
            ))),
        }
    }
}

/// Builds `A⊗B` up to `maxdeg`, including transported relations. Both
/// factors must come with finite basis data; relations are carried along
/// as relation-times-basis transports.
pub fn tensor_complex(
    a: &CrossedComplex,
    b: &CrossedComplex,
    maxdeg: usize,
) -> Result<Tensor, CrsError> {
    if maxdeg < 1 {
        return Err(CrsError::PreconditionFailed("maxdeg must be ≥ 1".into()));
    }
    let b_objects = b.objects.len();
    let mut objects = Vec::with_capacity(a.objects.len() * b_objects);
    for ao in &a.objects {
        for bo in &b.objects {
            objects.push(format!("({ao}|{bo})"));
        }
    }
    let object = |ao: usize, bo: usize| ao * b_objects + bo;
    let mut edges = Vec::new();
    let mut edge_a = BTreeMap::new();
    let mut edge_b = BTreeMap::new();
    for (e, ea) in a.graph.edges.iter().enumerate() {
        for bo in 0..b_objects {
            edge_a.insert((e, bo), edges.len());
            edges.push(Edge {
                name: format!("({}|{})", ea.name, b.objects[bo]),
                src: object(ea.src, bo),
                tgt: object(ea.tgt, bo),
            });
        }
    }
    for ao in 0..a.objects.len() {
        for (f, eb) in b.graph.edges.iter().enumerate() {
            edge_b.insert((ao, f), edges.len());
            edges.push(Edge {
                name: format!("({}|{})", a.objects[ao], eb.name),
                src: object(ao, eb.src),
                tgt: object(ao, eb.tgt),
            });
        }
    }
    let graph = DirectedGraph { objects: objects.clone(), edges };

    // generator lists per degree ≥ 2
    let mut gens: BTreeMap<usize, Vec<TensorGenerator>> = BTreeMap::new();
    let mut gen_index = BTreeMap::new();
    for k in 2..=maxdeg {
        let mut list = Vec::new();
        for adeg in 0..=k {
            let bdeg = k - adeg;
            for ai in 0..basis_count(a, adeg) {
                for bi in 0..basis_count(b, bdeg) {
                    gen_index.insert((adeg, ai, bdeg, bi), list.len());
                    list.push(TensorGenerator {
                        a_degree: adeg,
                        a_index: ai,
                        b_degree: bdeg,
                        b_index: bi,
                    });
                }
            }
        }
        gens.insert(k, list);
    }

    let skeleton = CrossedComplex {
        objects,
        graph,
        c1_relations: Vec::new(),
        c2: Vec::new(),
        c2_relations: Vec::new(),
        higher: Vec::new(),
    };
    let mut t = Tensor {
        complex: skeleton,
        a: a.clone(),
        b: b.clone(),
        maxdeg,
        b_objects,
        edge_a,
        edge_b,
        gens,
        gen_index,
    };

    // degree-1 relations: transported slices
    let mut c1_relations = Vec::new();
    for (l, r) in &a.c1_relations {
        for bo in 0..b_objects {
            c1_relations.push((t.path_a(l, bo), t.path_a(r, bo)));
        }
    }
    for ao in 0..a.objects.len() {
        for (l, r) in &b.c1_relations {
            c1_relations.push((t.path_b(ao, l), t.path_b(ao, r)));
        }
    }
    t.complex.c1_relations = c1_relations;

    // degree-2 generators with boundaries
    if maxdeg >= 2 {
        let mut c2 = Vec::new();
        for g in &t.gens[&2].clone() {
            let boundary = match t.boundary(g)? {
                TElt::One(p) => p,
                _ => unreachable!("degree-2 boundaries are paths"),
            };
            let base = boundary.source();
            c2.push(Gen2 {
                name: format!(
                    "({}|{})",
                    basis_name(a, g.a_degree, g.a_index),
                    basis_name(b, g.b_degree, g.b_index)
                ),
                base,
                boundary,
            });
        }
        t.complex.c2 = c2;

        // degree-2 relations
        let mut rels: Vec<Crossed2> = Vec::new();
        for rho in &a.c2_relations {
            for bo in 0..b_objects {
                rels.push(t.th20(rho, bo));
            }
        }
        for ao in 0..a.objects.len() {
            for rho in &b.c2_relations {
                rels.push(t.th02(ao, rho));
            }
        }
        for (l, r) in &a.c1_relations {
            for f in 0..b.graph.edge_count() {
                let pf = EdgePath::single(&b.graph, f, 1).unwrap();
                rels.push(t.th11(l, &pf).mul(&t.th11(r, &pf).inv()));
            }
        }
        for e in 0..a.graph.edge_count() {
            let pe = EdgePath::single(&a.graph, e, 1).unwrap();
            for (l, r) in &b.c1_relations {
                rels.push(t.th11(&pe, l).mul(&t.th11(&pe, r).inv()));
            }
        }
        t.complex.c2_relations = rels;
    }

    // degrees 3..maxdeg
    for k in 3..=maxdeg {
        let mut part = ModulePart::default();
        for g in &t.gens[&k].clone() {
            let base = t.object(
                basis_beta(a, g.a_degree, g.a_index),
                basis_beta(b, g.b_degree, g.b_index),
            );
            part.gens.push(ModGen {
                name: format!(
                    "({}|{})",
                    basis_name(a, g.a_degree, g.a_index),
                    basis_name(b, g.b_degree, g.b_index)
                ),
                base,
            });
            part.boundary.push(match t.boundary(g)? {
                TElt::Two(x) => BoundaryVal::Two(x),
                TElt::Mod(x) => BoundaryVal::Higher(x),
                TElt::One(_) => unreachable!("degree ≥ 3 boundaries are not paths"),
            });
        }
        // relations at degree k: relation ⊗ basis and basis ⊗ relation
        let mut rels: Vec<ModElt> = Vec::new();
        // A-relations of degree 1 (pairs) against B-basis of degree k−1
        for (l, r) in &a.c1_relations {
            for bi in 0..basis_count(b, k - 1) {
                if k - 1 >= 2 {
                    rels.push(
                        t.th_word_basis(l, k - 1, bi)
                            .add(&t.th_word_basis(r, k - 1, bi).neg()),
                    );
                }
            }
        }
        for ai in 0..basis_count(a, k - 1) {
            if k - 1 >= 2 {
                for (l, r) in &b.c1_relations {
                    rels.push(
                        t.th_basis_word(k - 1, ai, l)
                            .add(&t.th_basis_word(k - 1, ai, r).neg()),
                    );
                }
            }
        }
        // A-relations of degree 2 against B-basis of degree k−2
        for rho in &a.c2_relations {
            for bi in 0..basis_count(b, k - 2) {
                rels.push(t.th_elt2_basis(rho, k - 2, bi));
            }
        }
        for ai in 0..basis_count(a, k - 2) {
            for rho in &b.c2_relations {
                rels.push(t.th_basis_elt2(k - 2, ai, rho));
            }
        }
        // A-relations of degree d ≥ 3 against B-basis of degree k−d
        for d in 3..=k {
            if let Some(pa) = a.module(d) {
                for rho in &pa.relations {
                    for bi in 0..basis_count(b, k - d) {
                        rels.push(t.th_mod_basis(d, rho, k - d, bi));
                    }
                }
            }
            if let Some(pb) = b.module(d) {
                for ai in 0..basis_count(a, k - d) {
                    for rho in &pb.relations {
                        rels.push(t.th_basis_mod(k - d, ai, d, rho));
                    }
                }
            }
        }
        rels.retain(|r| !r.terms.is_empty());
        part.relations = rels;
        t.complex.higher.push(part);
    }
    Ok(t)
}

/// The boundary of a tensor generator, exposed directly.
pub fn tensor_boundary(t: &Tensor, g: &TensorGenerator) -> Result<TElt, CrsError> {
    t.boundary(g)
}

/// A morphism of crossed complexes stored by generator images.
#[derive(Clone, Debug)]
pub struct CrsMorphism {
    pub obj_map: Vec<usize>,
    pub edge_map: Vec<EdgePath>,
    pub c2_map: Vec<Crossed2>,
    pub higher_map: Vec<Vec<ModElt>>,
}

impl CrsMorphism {
    /// The identity morphism.
    pub fn identity(c: &CrossedComplex) -> Self {
        CrsMorphism {
            obj_map: (0..c.objects.len()).collect(),
            edge_map: (0..c.graph.edge_count())
                .map(|e| EdgePath::single(&c.graph, e, 1).unwrap())
                .collect(),
            c2_map: (0..c.c2.len())
                .map(|g| Crossed2::single(g, 1, EdgePath::identity(c.c2[g].base)))
                .collect(),
            higher_map: (3..=c.top_degree())
                .map(|d| {
                    let part = c.module(d).unwrap();
                    (0..part.gens.len())
                        .map(|g| {
                            ModElt::single(g, EdgePath::identity(part.gens[g].base), 1)
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn apply_path(&self, p: &EdgePath, tgt: &CrossedComplex) -> Result<EdgePath, CrsError> {
        let mut out = EdgePath::identity(self.obj_map[p.source()]);
        for &(e, s) in p.letters() {
            let img = &self.edge_map[e];
            let img = if s > 0 { img.clone() } else { img.inverse(&tgt.graph) };
            out = out.compose(&img, &tgt.graph).map_err(CrsError::Groupoid)?;
        }
        Ok(out)
    }

    pub fn apply_c2(&self, x: &Crossed2, tgt: &CrossedComplex) -> Result<Crossed2, CrsError> {
        let mut out = Crossed2::zero();
        for t in &x.terms {
            let img = self.c2_map[t.gen].clone();
            let img = if t.sign > 0 { img } else { img.inv() };
            let conj = self.apply_path(&t.conj, tgt)?;
            out = out.mul(&img.act(&conj, &tgt.graph).map_err(CrsError::Groupoid)?);
        }
        Ok(out)
    }

    pub fn apply_mod(
        &self,
        d: usize,
        x: &ModElt,
        tgt: &CrossedComplex,
    ) -> Result<ModElt, CrsError> {
        let table = self.higher_map.get(d - 3).ok_or_else(|| {
            CrsError::PreconditionFailed(format!("morphism lacks degree {d}"))
        })?;
        let mut out = ModElt::zero();
        for t in &x.terms {
            let img = table[t.gen].clone();
            let path = self.apply_path(&t.path, tgt)?;
            out = out.add(
                &img.act(&path, &tgt.graph)
                    .map_err(CrsError::Groupoid)?
                    .scale(t.coeff),
            );
        }
        Ok(out)
    }

    /// Verifies endpoint preservation and the boundary squares
    /// `φ(δx) = δ(φx)` on every generator, using the target's equality
    /// solvers.
    pub fn check(
        &self,
        src: &CrossedComplex,
        tgt: &CrossedComplex,
        solvers: &ComplexSolvers,
    ) -> Result<(), CrsError> {
        for (e, edge) in src.graph.edges.iter().enumerate() {
            let img = &self.edge_map[e];
            if img.source() != self.obj_map[edge.src]
                || img.target(&tgt.graph) != self.obj_map[edge.tgt]
            {
                return Err(CrsError::PreconditionFailed(format!(
                    "edge {e} image endpoints disagree"
                )));
            }
        }
        for (g, gen) in src.c2.iter().enumerate() {
            let lhs = self.apply_path(&gen.boundary, tgt)?;
            let rhs = tgt.d2(&self.c2_map[g])?;
            if !solvers.c1_equal(&lhs, &rhs) {
                return Err(CrsError::PreconditionFailed(format!(
                    "degree-2 boundary square fails at generator {g}"
                )));
            }
        }
        for d in 3..=src.top_degree() {
            let part = src.module(d).unwrap();
            for (g, bv) in part.boundary.iter().enumerate() {
                let img = &self.higher_map[d - 3][g];
                match bv {
                    BoundaryVal::Two(x) => {
                        let lhs = self.apply_c2(x, tgt)?;
                        let rhs = tgt.d3(img)?;
                        if !solvers.c2_equal(tgt, &lhs, &rhs)? {
                            return Err(CrsError::PreconditionFailed(format!(
                                "degree-3 boundary square fails at generator {g}"
                            )));
                        }
                    }
                    BoundaryVal::Higher(x) => {
                        let lhs = self.apply_mod(d - 1, x, tgt)?;
                        let rhs = tgt.dn(d, img)?;
                        if !solvers.mod_equal(tgt, d - 1, &lhs, &rhs)? {
                            return Err(CrsError::PreconditionFailed(format!(
                                "degree-{d} boundary square fails at generator {g}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The symmetry `A⊗B → B⊗A`: `a⊗b ↦ (−1)^{mn}·(b⊗a)`. Returns the
/// generator map as a morphism on the tensor complexes.
pub fn symmetry(t_ab: &Tensor, t_ba: &Tensor) -> CrsMorphism {
    let a_objs = t_ab.a.objects.len();
    let _ = a_objs;
    let mut obj_map = vec![0usize; t_ab.complex.objects.len()];
    for ao in 0..t_ab.a.objects.len() {
        for bo in 0..t_ab.b.objects.len() {
            obj_map[t_ab.object(ao, bo)] = t_ba.object(bo, ao);
        }
    }
    let mut edge_map = vec![EdgePath::identity(0); t_ab.complex.graph.edge_count()];
    for (&(e, bo), &idx) in &t_ab.edge_a {
        edge_map[idx] = EdgePath::single(&t_ba.complex.graph, t_ba.edge_of_b(bo, e), 1).unwrap();
    }
    for (&(ao, f), &idx) in &t_ab.edge_b {
        edge_map[idx] = EdgePath::single(&t_ba.complex.graph, t_ba.edge_of_a(f, ao), 1).unwrap();
    }
    let mut c2_map = Vec::new();
    if t_ab.maxdeg >= 2 {
        for g in &t_ab.gens[&2] {
            let sign = if (g.a_degree * g.b_degree) % 2 == 0 { 1 } else { -1 };
            let swapped = t_ba.gen(g.b_degree, g.b_index, g.a_degree, g.a_index);
            let base = t_ba.complex.c2[swapped].base;
            c2_map.push(Crossed2::single(swapped, sign, EdgePath::identity(base)));
        }
    }
    let mut higher_map = Vec::new();
    for k in 3..=t_ab.maxdeg {
        let mut layer = Vec::new();
        for g in &t_ab.gens[&k] {
            let sign: i64 = if (g.a_degree * g.b_degree) % 2 == 0 { 1 } else { -1 };
            let swapped = t_ba.gen(g.b_degree, g.b_index, g.a_degree, g.a_index);
            let base = t_ba.complex.higher[k - 3].gens[swapped].base;
            layer.push(ModElt::single(swapped, EdgePath::identity(base), sign));
        }
        higher_map.push(layer);
    }
    CrsMorphism { obj_map, edge_map, c2_map, higher_map }
}

/// The injective embedding `B → A⊗B` over a vertex `a₀` of `A`.
pub fn embed_second_factor(t: &Tensor, a0: usize) -> CrsMorphism {
    let b = &t.b;
    let obj_map = (0..b.objects.len()).map(|bo| t.object(a0, bo)).collect();
    let edge_map = (0..b.graph.edge_count())
        .map(|f| EdgePath::single(&t.complex.graph, t.edge_of_b(a0, f), 1).unwrap())
        .collect();
    let c2_map = (0..b.c2.len())
        .map(|g| {
            let idx = t.gen(0, a0, 2, g);
            Crossed2::single(idx, 1, EdgePath::identity(t.object(a0, b.c2[g].base)))
        })
        .collect();
    let higher_map = (3..=b.top_degree().min(t.maxdeg))
        .map(|d| {
            let part = b.module(d).unwrap();
            (0..part.gens.len())
                .map(|g| {
                    let idx = t.gen(0, a0, d, g);
                    ModElt::single(
                        idx,
                        EdgePath::identity(t.object(a0, part.gens[g].base)),
                        1,
                    )
                })
                .collect()
        })
        .collect();
    CrsMorphism { obj_map, edge_map, c2_map, higher_map }
}

/// The cylinder `𝕀 ⊗ C`.
pub fn cylinder(c: &CrossedComplex, maxdeg: usize) -> Result<Tensor, CrsError> {
    tensor_complex(&CrossedComplex::interval(), c, maxdeg)
}

/// Degreewise data of a 1-homotopy `H: f ≃ g` between morphisms `A → C`:
/// an element one degree up per generator of `A`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    /// per object of `A`: a path `f(o) → g(o)`
    pub h_obj: Vec<EdgePath>,
    /// per edge of `A`: a degree-2 element of `C`
    pub h_edge: Vec<Crossed2>,
    /// per degree-2 generator of `A`: a degree-3 element of `C`
    pub h_gen2: Vec<ModElt>,
    /// per degree-`d ≥ 3` generator: a degree-`d+1` element
    pub h_higher: Vec<Vec<ModElt>>,
}

/// Verifies the 1-homotopy condition degreewise on the basis of `A`. The
/// boundary relation is not axiomatized separately: it is obtained by
/// evaluating a would-be morphism `𝕀⊗A → C` on the boundary of `ι⊗x`, so
/// everything reduces to the tensor boundary formulas.
pub fn check_homotopy(
    a: &CrossedComplex,
    c: &CrossedComplex,
    f: &CrsMorphism,
    g: &CrsMorphism,
    h: &Homotopy,
    bound: usize,
) -> Result<Vec<String>, CrsError> {
    let solvers = ComplexSolvers::new(c, bound)?;
    f.check(a, c, &solvers)?;
    g.check(a, c, &solvers)?;
    let cyl = cylinder(a, a.top_degree() + 1)?;
    // the would-be morphism Φ: 𝕀⊗A → C on cylinder generators
    let phi = PhiMap { a, c, cyl: &cyl, f, g, h };
    let mut failures = Vec::new();
    // degree 0: endpoints of the connecting paths
    for o in 0..a.objects.len() {
        let p = &h.h_obj[o];
        if p.source() != f.obj_map[o] || p.target(&c.graph) != g.obj_map[o] {
            failures.push(format!("object {o}: connecting path endpoints disagree"));
        }
    }
    // degree 1: δ(H(e)) must match Φ(δ(ι⊗e))
    for e in 0..a.graph.edge_count() {
        let gidx = cyl.gen(1, 0, 1, e);
        let gen = cyl.generator(2, gidx);
        let TElt::One(bpath) = cyl.boundary(&gen)? else { unreachable!() };
        let expect = phi.path(&bpath)?;
        let got = c.d2(&h.h_edge[e])?;
        if !solvers.c1_equal(&expect, &got) {
            failures.push(format!("edge {e}: boundary of the homotopy square disagrees"));
        }
    }
    // degree 2: δ(H(r)) in C₂ vs Φ(δ(ι⊗r))
    for r in 0..a.c2.len() {
        let gidx = cyl.gen(1, 0, 2, r);
        let gen = cyl.generator(3, gidx);
        let TElt::Two(b2) = cyl.boundary(&gen)? else { unreachable!() };
        let expect = phi.c2(&b2)?;
        let got = c.d3(&h.h_gen2[r])?;
        if !solvers.c2_equal(c, &expect, &got)? {
            failures.push(format!("degree-2 generator {r}: homotopy boundary disagrees"));
        }
    }
    for d in 3..=a.top_degree() {
        let part = a.module(d).unwrap();
        for r in 0..part.gens.len() {
            let gidx = cyl.gen(1, 0, d, r);
            let gen = cyl.generator(d + 1, gidx);
            let TElt::Mod(bm) = cyl.boundary(&gen)? else { unreachable!() };
            let expect = phi.modelt(d, &bm)?;
            let got = c.dn(d + 1, &h.h_higher[d - 3][r])?;
            if !solvers.mod_equal(c, d, &expect, &got)? {
                failures.push(format!("degree-{d} generator {r}: homotopy boundary disagrees"));
            }
        }
    }
    Ok(failures)
}

/// Applies the generator images `(0⊗x ↦ f(x), 1⊗x ↦ g(x), ι⊗x ↦ H(x))` to
/// elements of the cylinder.
struct PhiMap<'x> {
    a: &'x CrossedComplex,
    c: &'x CrossedComplex,
    cyl: &'x Tensor,
    f: &'x CrsMorphism,
    g: &'x CrsMorphism,
    h: &'x Homotopy,
}

impl PhiMap<'_> {
    fn object(&self, t_obj: usize) -> usize {
        let n = self.a.objects.len();
        let iobj = t_obj / n;
        let aobj = t_obj % n;
        if iobj == 0 {
            self.f.obj_map[aobj]
        } else {
            self.g.obj_map[aobj]
        }
    }

    fn edge_image(&self, t_edge: usize) -> Result<EdgePath, CrsError> {
        // search the index maps: edges are either (ι ⊗ a-object) or
        // (𝕀-object ⊗ a-edge)
        for ao in 0..self.a.objects.len() {
            if self.cyl.edge_of_a(0, ao) == t_edge {
                return Ok(self.h.h_obj[ao].clone());
            }
        }
        for io in 0..2 {
            for e in 0..self.a.graph.edge_count() {
                if self.cyl.edge_of_b(io, e) == t_edge {
                    return Ok(if io == 0 {
                        self.f.edge_map[e].clone()
                    } else {
                        self.g.edge_map[e].clone()
                    });
                }
            }
        }
        Err(CrsError::PreconditionFailed("edge outside the cylinder".into()))
    }

    fn path(&self, p: &EdgePath) -> Result<EdgePath, CrsError> {
        let c = self.target();
        let mut out = EdgePath::identity(self.object(p.source()));
        for &(e, s) in p.letters() {
            let img = self.edge_image(e)?;
            let img = if s > 0 { img } else { img.inverse(&c.graph) };
            out = out.compose(&img, &c.graph).map_err(CrsError::Groupoid)?;
        }
        Ok(out)
    }

    fn target(&self) -> &CrossedComplex {
        self.c
    }

    fn c2(&self, x: &Crossed2) -> Result<Crossed2, CrsError> {
        let c = self.target();
        let mut out = Crossed2::zero();
        for t in &x.terms {
            let gen = self.cyl.generator(2, t.gen);
            let img: Crossed2 = match (gen.a_degree, gen.b_degree) {
                (1, 1) => self.h.h_edge[gen.b_index].clone(),
                (0, 2) => {
                    if gen.a_index == 0 {
                        self.f.c2_map[gen.b_index].clone()
                    } else {
                        self.g.c2_map[gen.b_index].clone()
                    }
                }
                _ => unreachable!("interval has no degree ≥ 2 basis"),
            };
            let img = if t.sign > 0 { img } else { img.inv() };
            let conj = self.path(&t.conj)?;
            out = out.mul(&img.act(&conj, &c.graph).map_err(CrsError::Groupoid)?);
        }
        Ok(out)
    }

    fn modelt(&self, d: usize, x: &ModElt) -> Result<ModElt, CrsError> {
        let c = self.target();
        let mut out = ModElt::zero();
        for t in &x.terms {
            let gen = self.cyl.generator(d, t.gen);
            let img: ModElt = match (gen.a_degree, gen.b_degree) {
                (1, bd) => self.homotopy_image(bd, gen.b_index)?,
                (0, bd) => {
                    let map = if gen.a_index == 0 { self.f } else { self.g };
                    map.higher_map[bd - 3][gen.b_index].clone()
                }
                _ => unreachable!("interval has no degree ≥ 2 basis"),
            };
            let path = self.path(&t.path)?;
            out = out
                .add(&img.act(&path, &c.graph).map_err(CrsError::Groupoid)?.scale(t.coeff));
        }
        Ok(out)
    }

    fn homotopy_image(&self, bd: usize, bi: usize) -> Result<ModElt, CrsError> {
        match bd {
            2 => Ok(self.h.h_gen2[bi].clone()),
            _ => Ok(self.h.h_higher[bd - 3][bi].clone()),
        }
    }
}
