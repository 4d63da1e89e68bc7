//! Crossed complexes over a groupoid of objects: a groupoid in degree 1, a
//! free crossed module (with declared relations) in degree 2, and modules
//! over the fundamental groupoid above, with boundaries composing to zero
//! and the degree-2 boundary acting trivially upstairs.

pub mod element;
pub mod tensor;

pub use element::{C2Term, Crossed2, GroupoidSolver, ModElt, ModTerm};
pub use tensor::{
    check_homotopy, cylinder, embed_second_factor, symmetry, tensor_boundary, tensor_complex,
    CrsMorphism, Homotopy, TensorGenerator,
};

use crate::error::{AlgebraError, GroupoidError};
use crate::fox::OperatorChainComplex;
use crate::groupoid::{DirectedGraph, Edge, EdgePath, GroupoidPresentation};
use crate::matrix::{lattice_quotient, IntMatrix};
use crate::presentation::GroupPresentation;
use crate::ring::{GroupRingElement, RingMatrix};
use crate::word::FreeWord;
use element::{h2_coords, mod_coords, relation_translates, ClassKey, CoordKey, RelationLattice};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors from crossed-complex operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
}

/// A degree-2 generator: a name, a base object, and the boundary loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gen2 {
    pub name: String,
    pub base: usize,
    pub boundary: EdgePath,
}

/// A generator of a module degree (≥ 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModGen {
    pub name: String,
    pub base: usize,
}

/// The boundary value of a module generator: into the crossed-module
/// degree for degree 3, into the module below otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryVal {
    Two(Crossed2),
    Higher(ModElt),
}

/// One module degree: generators, declared relations, boundary values.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModulePart {
    pub gens: Vec<ModGen>,
    pub relations: Vec<ModElt>,
    pub boundary: Vec<BoundaryVal>,
}

/// A crossed complex with finite presentation data in every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedComplex {
    pub objects: Vec<String>,
    /// generating graph of the degree-1 groupoid
    pub graph: DirectedGraph,
    /// degree-1 relations (empty for a free complex)
    pub c1_relations: Vec<(EdgePath, EdgePath)>,
    /// degree-2 free-crossed generators
    pub c2: Vec<Gen2>,
    /// degree-2 elements declared trivial
    pub c2_relations: Vec<Crossed2>,
    /// module degrees 3, 4, …
    pub higher: Vec<ModulePart>,
}

impl CrossedComplex {
    /// The one-object, one-point complex.
    pub fn point(name: &str) -> Self {
        CrossedComplex {
            objects: vec![name.to_string()],
            graph: DirectedGraph { objects: vec![name.to_string()], edges: Vec::new() },
            c1_relations: Vec::new(),
            c2: Vec::new(),
            c2_relations: Vec::new(),
            higher: Vec::new(),
        }
    }

    /// The unit interval: the indiscrete groupoid on two objects, realized
    /// freely by a single generating edge.
    pub fn interval() -> Self {
        let graph = DirectedGraph {
            objects: vec!["0".into(), "1".into()],
            edges: vec![Edge { name: "i".into(), src: 0, tgt: 1 }],
        };
        CrossedComplex {
            objects: graph.objects.clone(),
            graph,
            c1_relations: Vec::new(),
            c2: Vec::new(),
            c2_relations: Vec::new(),
            higher: Vec::new(),
        }
    }

    /// Top nonzero degree present in the data.
    pub fn top_degree(&self) -> usize {
        if !self.higher.is_empty() {
            2 + self.higher.len()
        } else if !self.c2.is_empty() {
            2
        } else if self.graph.edge_count() > 0 {
            1
        } else {
            0
        }
    }

    /// Is every degree free of declared relations?
    pub fn is_free(&self) -> bool {
        self.c1_relations.is_empty()
            && self.c2_relations.is_empty()
            && self.higher.iter().all(|h| h.relations.is_empty())
    }

    /// The degree-1 presentation.
    pub fn c1_presentation(&self) -> GroupoidPresentation {
        GroupoidPresentation {
            graph: self.graph.clone(),
            relations: self.c1_relations.clone(),
        }
    }

    /// The fundamental groupoid `π₁C = C₁ / Im δ₂` as a presentation: the
    /// degree-1 presentation plus one relation `δ₂(g) = id` per degree-2
    /// generator.
    pub fn fundamental_groupoid(&self) -> GroupoidPresentation {
        let mut relations = self.c1_relations.clone();
        for g in &self.c2 {
            relations.push((g.boundary.clone(), EdgePath::identity(g.base)));
        }
        GroupoidPresentation { graph: self.graph.clone(), relations }
    }

    /// Module part for degree `n ≥ 3`, if present.
    pub fn module(&self, n: usize) -> Option<&ModulePart> {
        if n < 3 {
            return None;
        }
        self.higher.get(n - 3)
    }

    /// The boundary of a degree-2 element.
    pub fn d2(&self, e: &Crossed2) -> Result<EdgePath, CrsError> {
        let mut out: Option<EdgePath> = None;
        for t in &e.terms {
            let g = self.c2.get(t.gen).ok_or_else(|| {
                CrsError::PreconditionFailed(format!("degree-2 generator {} missing", t.gen))
            })?;
            let base = &g.boundary;
            let body = if t.sign > 0 { base.clone() } else { base.inverse(&self.graph) };
            let piece = t
                .conj
                .inverse(&self.graph)
                .compose(&body, &self.graph)?
                .compose(&t.conj, &self.graph)?;
            out = Some(match out {
                None => piece,
                Some(acc) => acc.compose(&piece, &self.graph)?,
            });
        }
        Ok(out.unwrap_or_else(|| {
            EdgePath::identity(e.terms.first().map(|t| t.conj.source()).unwrap_or(0))
        }))
    }

    /// The boundary of a degree-`n` module element (`n ≥ 4`), one degree
    /// down.
    pub fn dn(&self, n: usize, e: &ModElt) -> Result<ModElt, CrsError> {
        let part = self
            .module(n)
            .ok_or_else(|| CrsError::PreconditionFailed(format!("no degree {n}")))?;
        let mut out = ModElt::zero();
        for t in &e.terms {
            match part.boundary.get(t.gen) {
                Some(BoundaryVal::Higher(b)) => {
                    out = out.add(&b.act(&t.path, &self.graph)?.scale(t.coeff));
                }
                Some(BoundaryVal::Two(_)) => {
                    return Err(CrsError::PreconditionFailed(
                        "degree-3 boundary reached through dn".into(),
                    ))
                }
                None => {
                    return Err(CrsError::PreconditionFailed(format!(
                        "generator {} has no boundary",
                        t.gen
                    )))
                }
            }
        }
        Ok(out)
    }

    /// The boundary of a degree-3 module element into degree 2. In a valid
    /// complex `Im δ₃ ⊆ Ker δ₂`, which is central, so the term order does
    /// not matter.
    pub fn d3(&self, e: &ModElt) -> Result<Crossed2, CrsError> {
        let part = self
            .module(3)
            .ok_or_else(|| CrsError::PreconditionFailed("no degree 3".into()))?;
        let mut out = Crossed2::zero();
        for t in &e.terms {
            match part.boundary.get(t.gen) {
                Some(BoundaryVal::Two(b)) => {
                    out = out.mul(&b.act(&t.path, &self.graph)?.scale(t.coeff));
                }
                _ => {
                    return Err(CrsError::PreconditionFailed(format!(
                        "degree-3 generator {} lacks a degree-2 boundary",
                        t.gen
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Word-problem context for one complex: a solver for `π₁C = C₁/Im δ₂`
/// (required) and, when its vertex groups are enumerable, an exact solver
/// for `C₁` itself. When `C₁` is out of reach, degree-1 comparisons fall
/// back to π₁-classes — a sound necessary condition, reported as such,
/// never silently.
pub struct ComplexSolvers {
    pub c1: Option<GroupoidSolver>,
    pub pi1: GroupoidSolver,
}

impl ComplexSolvers {
    pub fn new(c: &CrossedComplex, bound: usize) -> Result<Self, AlgebraError> {
        let c1 = match GroupoidSolver::new(&c.c1_presentation(), bound) {
            Ok(s) => Some(s),
            Err(AlgebraError::Unbounded { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(ComplexSolvers { c1, pi1: GroupoidSolver::new(&c.fundamental_groupoid(), bound)? })
    }

    /// Is degree-1 equality decided exactly in `C₁` (rather than in π₁)?
    pub fn c1_exact(&self) -> bool {
        self.c1.is_some()
    }

    /// Degree-1 equality: exact in `C₁` when available, otherwise the
    /// π₁-class comparison.
    pub fn c1_equal(&self, a: &EdgePath, b: &EdgePath) -> bool {
        match &self.c1 {
            Some(s) => s.equal(a, b),
            None => self.pi1.equal(a, b),
        }
    }

    pub fn c1_is_identity(&self, p: &EdgePath) -> bool {
        match &self.c1 {
            Some(s) => s.is_identity(p),
            None => self.pi1.is_identity(p),
        }
    }

    /// Equality of degree-2 elements by the pair criterion applied to
    /// `x·y⁻¹`: trivial boundary in `C₁` and abelianized coordinates in
    /// the relation lattice. Elements sitting at different objects are
    /// unequal.
    pub fn c2_equal(
        &self,
        c: &CrossedComplex,
        x: &Crossed2,
        y: &Crossed2,
    ) -> Result<bool, CrsError> {
        self.c2_is_zero(c, &x.mul(&y.inv()))
    }

    pub fn c2_is_zero(&self, c: &CrossedComplex, x: &Crossed2) -> Result<bool, CrsError> {
        if x.terms.is_empty() {
            return Ok(true);
        }
        let b = match c.d2(x) {
            Ok(b) => b,
            Err(CrsError::Groupoid(GroupoidError::NotComposable { .. })) => return Ok(false),
            Err(e) => return Err(e),
        };
        if !self.c1_is_identity(&b) {
            return Ok(false);
        }
        let diff = h2_coords(x, &self.pi1);
        let extra: Vec<CoordKey> = diff.keys().cloned().collect();
        let lat = self.c2_relation_lattice(c, &extra)?;
        Ok(lat.contains(&diff)?)
    }

    fn c2_relation_lattice(
        &self,
        c: &CrossedComplex,
        extra: &[CoordKey],
    ) -> Result<RelationLattice, CrsError> {
        let mut rel_coords = Vec::new();
        for rho in &c.c2_relations {
            let obj = rho
                .terms
                .first()
                .map(|t| t.conj.target(&c.graph))
                .unwrap_or(0);
            rel_coords.push((obj, h2_coords(rho, &self.pi1)));
        }
        let translated = relation_translates(&rel_coords, &self.pi1)?;
        Ok(RelationLattice::new(&translated, extra))
    }

    /// Equality of module elements at degree `n ≥ 3` modulo relations.
    pub fn mod_equal(
        &self,
        c: &CrossedComplex,
        n: usize,
        x: &ModElt,
        y: &ModElt,
    ) -> Result<bool, CrsError> {
        let part = c
            .module(n)
            .ok_or_else(|| CrsError::PreconditionFailed(format!("no degree {n}")))?;
        let mut diff = mod_coords(x, &self.pi1);
        for (k, v) in mod_coords(y, &self.pi1) {
            let e = diff.entry(k.clone()).or_insert(0);
            *e -= v;
            if *e == 0 {
                diff.remove(&k);
            }
        }
        if diff.is_empty() {
            return Ok(true);
        }
        let mut rel_coords = Vec::new();
        for rho in &part.relations {
            let obj = rho.terms.first().map(|t| t.path.target(&c.graph)).unwrap_or(0);
            rel_coords.push((obj, mod_coords(rho, &self.pi1)));
        }
        let translated = relation_translates(&rel_coords, &self.pi1)?;
        let extra: Vec<CoordKey> = diff.keys().cloned().collect();
        let lat = RelationLattice::new(&translated, &extra);
        Ok(lat.contains(&diff)?)
    }

    pub fn mod_is_zero(&self, c: &CrossedComplex, n: usize, x: &ModElt) -> Result<bool, CrsError> {
        self.mod_equal(c, n, x, &ModElt::zero())
    }
}

/// Outcome of one validation item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(String),
    Skipped(String),
}

/// Validation report: named checks with outcomes and witnesses.
#[derive(Clone, Debug, Default)]
pub struct ComplexReport {
    pub items: Vec<(String, Check)>,
}

impl ComplexReport {
    fn push(&mut self, name: &str, check: Check) {
        self.items.push((name.to_string(), check));
    }

    pub fn is_valid(&self) -> bool {
        self.items.iter().all(|(_, c)| !matches!(c, Check::Fail(_)))
    }
}

/// Validates the axioms of a crossed complex on its generating data:
/// boundary shapes, `δδ = 0` in every adjacent pair of degrees, triviality
/// of the `δ₂`-action upstairs, and boundary-compatibility of the declared
/// relations.
pub fn validate_complex(c: &CrossedComplex, bound: usize) -> Result<ComplexReport, CrsError> {
    let mut report = ComplexReport::default();

    let mut shape_ok = true;
    for (i, g) in c.c2.iter().enumerate() {
        if g.boundary.source() != g.base || g.boundary.target(&c.graph) != g.base {
            shape_ok = false;
            report.push(
                "deg2 boundary is a loop at the base",
                Check::Fail(format!("generator {i} ({})", g.name)),
            );
        }
    }
    if shape_ok {
        report.push("deg2 boundary is a loop at the base", Check::Pass);
    }

    let solvers = ComplexSolvers::new(c, bound)?;

    let c1_tag = if solvers.c1_exact() { "" } else { " (in π₁ only)" };
    if c.c2_relations.is_empty() {
        report.push("deg2 relations have trivial boundary", Check::Pass);
    } else {
        let mut ok = true;
        for (i, rho) in c.c2_relations.iter().enumerate() {
            let b = c.d2(rho)?;
            if !solvers.c1_is_identity(&b) {
                ok = false;
                report.push(
                    &format!("deg2 relations have trivial boundary{c1_tag}"),
                    Check::Fail(format!("relation {i}")),
                );
            }
        }
        if ok {
            report.push(&format!("deg2 relations have trivial boundary{c1_tag}"), Check::Pass);
        }
    }

    // δ₂ acts trivially upstairs: the π₁-class of δ₂(g) is the identity
    let mut act_ok = true;
    for (i, g) in c.c2.iter().enumerate() {
        if !solvers.pi1.is_identity(&g.boundary) {
            act_ok = false;
            report.push(
                "δ₂ image acts trivially upstairs",
                Check::Fail(format!("generator {i} ({})", g.name)),
            );
        }
    }
    if act_ok {
        report.push("δ₂ image acts trivially upstairs", Check::Pass);
    }

    report.push("degrees ≥ 3 are abelian module carriers", Check::Pass);

    if let Some(part) = c.module(3) {
        let mut ok = true;
        for (i, b) in part.boundary.iter().enumerate() {
            let BoundaryVal::Two(b2) = b else {
                return Err(CrsError::PreconditionFailed(format!(
                    "degree-3 generator {i} must bound into degree 2"
                )));
            };
            let edge = c.d2(b2)?;
            if !solvers.c1_is_identity(&edge) {
                ok = false;
                report.push(&format!("d2∘d3 = 0{c1_tag}"), Check::Fail(format!("generator {i}")));
            }
        }
        if ok {
            report.push(&format!("d2∘d3 = 0{c1_tag}"), Check::Pass);
        }
        let mut rel_ok = true;
        for (i, rho) in part.relations.iter().enumerate() {
            let img = c.d3(rho)?;
            if !solvers.c2_is_zero(c, &img)? {
                rel_ok = false;
                report
                    .push("deg3 relations bound to zero", Check::Fail(format!("relation {i}")));
            }
        }
        if rel_ok {
            report.push("deg3 relations bound to zero", Check::Pass);
        }
    }

    for n in 4..=c.top_degree() {
        let part = c.module(n).expect("degree data present");
        let mut ok = true;
        for (i, b) in part.boundary.iter().enumerate() {
            let BoundaryVal::Higher(bn) = b else {
                return Err(CrsError::PreconditionFailed(format!(
                    "degree-{n} generator {i} must bound one degree down"
                )));
            };
            let zero = if n == 4 {
                let img = c.d3(bn)?;
                solvers.c2_is_zero(c, &img)?
            } else {
                let img = c.dn(n - 1, bn)?;
                solvers.mod_is_zero(c, n - 2, &img)?
            };
            if !zero {
                ok = false;
                report.push(
                    &format!("d{}∘d{} = 0", n - 1, n),
                    Check::Fail(format!("generator {i}")),
                );
            }
        }
        if ok {
            report.push(&format!("d{}∘d{} = 0", n - 1, n), Check::Pass);
        }
        let mut rel_ok = true;
        for (i, rho) in part.relations.iter().enumerate() {
            let img = c.dn(n, rho)?;
            if !solvers.mod_is_zero(c, n - 1, &img)? {
                rel_ok = false;
                report.push(
                    &format!("deg{n} relations bound to zero"),
                    Check::Fail(format!("relation {i}")),
                );
            }
        }
        if rel_ok {
            report.push(&format!("deg{n} relations bound to zero"), Check::Pass);
        }
    }
    Ok(report)
}

/// The canonical examples.
#[derive(Clone, Debug)]
pub enum ExampleKind {
    /// `G` concentrated in degree `n`: a presentation for `n = 1`,
    /// invariant factors (abelian) for `n ≥ 2`.
    CGn { presentation: Option<GroupPresentation>, invariants: Vec<i64>, n: usize },
    /// `G` in degree 1 and a trivial `G`-module in degree `n ≥ 2` with
    /// zero boundary; the module is given by invariant factors, `0`
    /// meaning a free summand.
    CG1Mn { presentation: GroupPresentation, invariants: Vec<i64>, n: usize },
    /// The free crossed complex of a group presentation: degrees 1 and 2.
    FromPresentation(GroupPresentation),
}

/// Builds one of the canonical complexes; the output passes
/// [`validate_complex`].
pub fn make_example(kind: ExampleKind) -> Result<CrossedComplex, CrsError> {
    match kind {
        ExampleKind::FromPresentation(p) => Ok(from_presentation(&p)),
        ExampleKind::CGn { presentation, invariants, n } => match n {
            0 => Err(CrsError::PreconditionFailed("degree must be ≥ 1".into())),
            1 => {
                let p = presentation.ok_or_else(|| {
                    CrsError::PreconditionFailed("degree 1 needs a presentation".into())
                })?;
                let mut c = CrossedComplex::point("p");
                let gp = GroupoidPresentation::from_group(&p, "p");
                c.graph = gp.graph;
                c.c1_relations = gp.relations;
                Ok(c)
            }
            _ => {
                let mut c = CrossedComplex::point("p");
                install_trivial_module(&mut c, &invariants, n)?;
                Ok(c)
            }
        },
        ExampleKind::CG1Mn { presentation, invariants, n } => {
            if n < 2 {
                return Err(CrsError::PreconditionFailed("module degree must be ≥ 2".into()));
            }
            let mut c = CrossedComplex::point("p");
            let gp = GroupoidPresentation::from_group(&presentation, "p");
            c.graph = gp.graph;
            c.c1_relations = gp.relations;
            install_trivial_module(&mut c, &invariants, n)?;
            Ok(c)
        }
    }
}

/// Installs an abelian group with the given invariant factors as a
/// trivial-action module in degree `n ≥ 2` of a one-object complex.
fn install_trivial_module(
    c: &mut CrossedComplex,
    invariants: &[i64],
    n: usize,
) -> Result<(), CrsError> {
    if invariants.iter().any(|&d| d < 0) {
        return Err(CrsError::PreconditionFailed("invariant factors must be ≥ 0".into()));
    }
    let names: Vec<String> = (0..invariants.len()).map(|i| format!("m{i}")).collect();
    let obj = 0usize;
    if n == 2 {
        for name in &names {
            c.c2.push(Gen2 {
                name: name.clone(),
                base: obj,
                boundary: EdgePath::identity(obj),
            });
        }
        for (i, &d) in invariants.iter().enumerate() {
            if d > 0 {
                c.c2_relations
                    .push(Crossed2::single(i, 1, EdgePath::identity(obj)).scale(d));
            }
            // trivial action: acting by any generator returns the element
            for e in 0..c.graph.edge_count() {
                let x = EdgePath::single(&c.graph, e, 1).unwrap();
                let rel = Crossed2::single(i, 1, x)
                    .mul(&Crossed2::single(i, -1, EdgePath::identity(obj)));
                c.c2_relations.push(rel);
            }
        }
    } else {
        while c.higher.len() < n - 3 {
            c.higher.push(ModulePart::default());
        }
        let mut part = ModulePart::default();
        for name in &names {
            part.gens.push(ModGen { name: name.clone(), base: obj });
            part.boundary.push(if n == 3 {
                BoundaryVal::Two(Crossed2::zero())
            } else {
                BoundaryVal::Higher(ModElt::zero())
            });
        }
        for (i, &d) in invariants.iter().enumerate() {
            if d > 0 {
                part.relations.push(ModElt::single(i, EdgePath::identity(obj), d));
            }
            for e in 0..c.graph.edge_count() {
                let x = EdgePath::single(&c.graph, e, 1).unwrap();
                let rel = ModElt::single(i, x, 1)
                    .add(&ModElt::single(i, EdgePath::identity(obj), -1));
                part.relations.push(rel);
            }
        }
        c.higher.push(part);
    }
    Ok(())
}

/// The free crossed complex of a presentation: one object, `C₁` free on
/// the generators, `C₂` free crossed on the relators.
pub fn from_presentation(p: &GroupPresentation) -> CrossedComplex {
    let graph = DirectedGraph {
        objects: vec!["p".into()],
        edges: p
            .generators
            .iter()
            .map(|g| Edge { name: g.clone(), src: 0, tgt: 0 })
            .collect(),
    };
    let c2 = p
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| Gen2 {
            name: format!("r{i}"),
            base: 0,
            boundary: EdgePath::new(&graph, 0, r.letters()).expect("one-object words compose"),
        })
        .collect();
    CrossedComplex {
        objects: vec!["p".into()],
        graph,
        c1_relations: Vec::new(),
        c2,
        c2_relations: Vec::new(),
        higher: Vec::new(),
    }
}

/// Homology `Hₙ(C, p)` at the single object of a one-object complex, as
/// abelian invariants `(free_rank, torsion)`. Degrees resolve to integer
/// coordinates over the enumerated `π₁`; multi-object complexes and
/// non-finite fundamental groups are declined explicitly.
pub fn homology(
    c: &CrossedComplex,
    n: usize,
    bound: usize,
) -> Result<(usize, Vec<i64>), CrsError> {
    if n < 2 {
        return Err(CrsError::PreconditionFailed("homology degrees start at 2".into()));
    }
    if c.objects.len() != 1 {
        return Err(CrsError::UnsupportedAction(
            "homology supports one-object complexes".into(),
        ));
    }
    if n > c.top_degree() {
        return Ok((0, Vec::new()));
    }
    let solvers = ComplexSolvers::new(c, bound)?;
    let coords = DegreeCoords::build(c, &solvers)?;
    let num = coords.cycle_lattice(c, &solvers, n)?;
    let den = coords.boundary_lattice(c, &solvers, n)?;
    lattice_quotient(&num, &den).map_err(CrsError::Algebra)
}

/// Integer coordinates per degree ≥ 2 of a one-object complex.
struct DegreeCoords {
    keys: BTreeMap<usize, Vec<CoordKey>>,
    rels: BTreeMap<usize, IntMatrix>,
}

impl DegreeCoords {
    fn gens_of_degree(c: &CrossedComplex, d: usize) -> usize {
        match d {
            2 => c.c2.len(),
            _ => c.module(d).map(|p| p.gens.len()).unwrap_or(0),
        }
    }

    fn build(c: &CrossedComplex, solvers: &ComplexSolvers) -> Result<Self, CrsError> {
        let mut keys = BTreeMap::new();
        let mut rels = BTreeMap::new();
        let order = solvers
            .pi1
            .group_order(0)
            .ok_or_else(|| CrsError::UnsupportedAction("π₁ is not finite".into()))?;
        for d in 2..=c.top_degree() {
            let gens = Self::gens_of_degree(c, d);
            let mut ks = Vec::with_capacity(gens * order);
            for g in 0..gens {
                for e in 0..order {
                    ks.push((g, 0usize, ClassKey::Fin(e)));
                }
            }
            let rel_elts: Vec<BTreeMap<CoordKey, i64>> = match d {
                2 => {
                    let coords: Vec<(usize, BTreeMap<CoordKey, i64>)> = c
                        .c2_relations
                        .iter()
                        .map(|r| (0usize, h2_coords(r, &solvers.pi1)))
                        .collect();
                    relation_translates(&coords, &solvers.pi1).map_err(CrsError::Algebra)?
                }
                _ => {
                    let part = c.module(d).expect("degree present");
                    let coords: Vec<(usize, BTreeMap<CoordKey, i64>)> = part
                        .relations
                        .iter()
                        .map(|r| (0usize, mod_coords(r, &solvers.pi1)))
                        .collect();
                    relation_translates(&coords, &solvers.pi1).map_err(CrsError::Algebra)?
                }
            };
            let index: BTreeMap<CoordKey, usize> =
                ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
            let mut rows = Vec::new();
            for rc in rel_elts {
                let mut row = vec![0i64; ks.len()];
                for (k, v) in rc {
                    row[*index.get(&k).ok_or_else(|| {
                        CrsError::PreconditionFailed("relation key outside coordinates".into())
                    })?] = v;
                }
                rows.push(row);
            }
            let m = if rows.is_empty() {
                IntMatrix::zero(0, ks.len())
            } else {
                IntMatrix::from_rows(rows)
            };
            keys.insert(d, ks);
            rels.insert(d, m);
        }
        Ok(DegreeCoords { keys, rels })
    }

    fn dim(&self, d: usize) -> usize {
        self.keys.get(&d).map(Vec::len).unwrap_or(0)
    }

    fn coords_to_row(
        &self,
        d: usize,
        coords: &BTreeMap<CoordKey, i64>,
    ) -> Result<Vec<i64>, CrsError> {
        let ks = &self.keys[&d];
        let index: BTreeMap<CoordKey, usize> =
            ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let mut row = vec![0i64; ks.len()];
        for (k, &v) in coords {
            row[*index.get(k).ok_or_else(|| {
                CrsError::PreconditionFailed("element key outside coordinates".into())
            })?] = v;
        }
        Ok(row)
    }

    /// The boundary matrix from degree `d ≥ 3` to `d−1` in abelianized
    /// coordinates, rows indexed by the keys of degree `d`.
    fn boundary_matrix(
        &self,
        c: &CrossedComplex,
        solvers: &ComplexSolvers,
        d: usize,
    ) -> Result<IntMatrix, CrsError> {
        let ks = &self.keys[&d];
        let lower = self.dim(d - 1);
        let mut rows = Vec::with_capacity(ks.len());
        for (g, _, cls) in ks {
            let ClassKey::Fin(e) = cls else {
                return Err(CrsError::UnsupportedAction("π₁ is not finite".into()));
            };
            let path = solvers.pi1.realize(0, 0, *e);
            let elt = ModElt::single(*g, path, 1);
            let coords = if d == 3 {
                let img = c.d3(&elt)?;
                h2_coords(&img, &solvers.pi1)
            } else {
                let img = c.dn(d, &elt)?;
                mod_coords(&img, &solvers.pi1)
            };
            rows.push(self.coords_to_row(d - 1, &coords)?);
        }
        Ok(if rows.is_empty() { IntMatrix::zero(0, lower) } else { IntMatrix::from_rows(rows) })
    }

    /// Generators of the cycle lattice at degree `n`: rows whose boundary
    /// lands in the relation lattice one degree down. For `n = 2` the
    /// boundary is the Fox gradient into the derived module over `π₁`.
    fn cycle_lattice(
        &self,
        c: &CrossedComplex,
        solvers: &ComplexSolvers,
        n: usize,
    ) -> Result<IntMatrix, CrsError> {
        let dim = self.dim(n);
        let en = solvers.pi1.vertex_group(0).expect("finite π₁").clone();
        let (bmat, target_rels): (IntMatrix, IntMatrix) = if n == 2 {
            let ngen1 = c.graph.edge_count();
            let mut jac = RingMatrix::zero(c.c2.len(), ngen1);
            for (i, g) in c.c2.iter().enumerate() {
                let word = FreeWord::from_letters(g.boundary.letters());
                for x in 0..ngen1 {
                    jac.set(i, x, crate::fox::fox_derivative_table(&word, x, &en));
                }
            }
            let big = jac.to_int_matrix(&en.table);
            (big, IntMatrix::zero(0, ngen1 * en.order()))
        } else {
            (self.boundary_matrix(c, solvers, n)?, self.rels[&(n - 1)].clone())
        };
        let stacked = if target_rels.rows() == 0 {
            bmat.clone()
        } else {
            // v·bmat ∈ rowspan(rels) iff (v, w) kernel of [bmat; −rels]
            let mut rows: Vec<Vec<i64>> = Vec::new();
            for i in 0..bmat.rows() {
                rows.push(bmat.row(i).to_vec());
            }
            for i in 0..target_rels.rows() {
                rows.push(target_rels.row(i).iter().map(|&x| -x).collect());
            }
            IntMatrix::from_rows(rows)
        };
        let ker = crate::matrix::left_kernel(&stacked).map_err(CrsError::Algebra)?;
        let mut rows = Vec::new();
        for i in 0..ker.rows() {
            rows.push(ker.row(i)[..dim].to_vec());
        }
        // the declared relations of degree n are zero, hence cycles
        let rels = &self.rels[&n];
        for i in 0..rels.rows() {
            rows.push(rels.row(i).to_vec());
        }
        Ok(if rows.is_empty() { IntMatrix::zero(0, dim) } else { IntMatrix::from_rows(rows) })
    }

    /// Generators of the boundary lattice at degree `n`: images of degree
    /// `n+1` plus the relation rows at `n`.
    fn boundary_lattice(
        &self,
        c: &CrossedComplex,
        solvers: &ComplexSolvers,
        n: usize,
    ) -> Result<IntMatrix, CrsError> {
        let dim = self.dim(n);
        let mut rows: Vec<Vec<i64>> = Vec::new();
        if c.top_degree() >= n + 1 && self.dim(n + 1) > 0 {
            let b = self.boundary_matrix(c, solvers, n + 1)?;
            for i in 0..b.rows() {
                rows.push(b.row(i).to_vec());
            }
        }
        let rels = &self.rels[&n];
        for i in 0..rels.rows() {
            rows.push(rels.row(i).to_vec());
        }
        Ok(if rows.is_empty() { IntMatrix::zero(0, dim) } else { IntMatrix::from_rows(rows) })
    }
}

/// `∇C` for a free one-object complex: degree 0 is `ℤ[π₁]`, degree 1 the
/// derived module on the generators, degree 2 the abelianized free crossed
/// module with the Fox Jacobian as boundary, degrees ≥ 3 copied.
pub fn nabla(c: &CrossedComplex, bound: usize) -> Result<OperatorChainComplex, CrsError> {
    if c.objects.len() != 1 {
        return Err(CrsError::UnsupportedAction("∇ supports one-object complexes".into()));
    }
    if !c.is_free() {
        return Err(CrsError::UnsupportedAction("∇ supports free complexes".into()));
    }
    let solvers = ComplexSolvers::new(c, bound)?;
    let en = solvers
        .pi1
        .vertex_group(0)
        .ok_or_else(|| CrsError::UnsupportedAction("π₁ is not finite".into()))?
        .clone();
    let mut dims = vec![1, c.graph.edge_count()];
    let mut boundaries = Vec::new();
    let mut b0 = RingMatrix::zero(c.graph.edge_count(), 1);
    for x in 0..c.graph.edge_count() {
        let mut e = GroupRingElement::term(en.gen_images[x], 1);
        e.add_term(en.table.id(), -1);
        b0.set(x, 0, e);
    }
    boundaries.push(b0);
    if c.top_degree() >= 2 {
        dims.push(c.c2.len());
        let mut jac = RingMatrix::zero(c.c2.len(), c.graph.edge_count());
        for (i, g) in c.c2.iter().enumerate() {
            let word = FreeWord::from_letters(g.boundary.letters());
            for x in 0..c.graph.edge_count() {
                jac.set(i, x, crate::fox::fox_derivative_table(&word, x, &en));
            }
        }
        boundaries.push(jac);
    }
    for n in 3..=c.top_degree() {
        let part = c.module(n).expect("degree present");
        dims.push(part.gens.len());
        let lower = DegreeCoords::gens_of_degree(c, n - 1);
        let mut b = RingMatrix::zero(part.gens.len(), lower);
        for (i, bv) in part.boundary.iter().enumerate() {
            let coords: BTreeMap<CoordKey, i64> = match bv {
                BoundaryVal::Two(x) => h2_coords(x, &solvers.pi1),
                BoundaryVal::Higher(x) => mod_coords(x, &solvers.pi1),
            };
            for ((g, _, cls), v) in coords {
                let ClassKey::Fin(e) = cls else {
                    return Err(CrsError::UnsupportedAction("π₁ is not finite".into()));
                };
                let mut entry = b.get(i, g).clone();
                entry.add_term(e, v);
                b.set(i, g, entry);
            }
        }
        boundaries.push(b);
    }
    let out = OperatorChainComplex { group: en, dims, boundaries };
    out.verify().map_err(CrsError::Algebra)?;
    Ok(out)
}
