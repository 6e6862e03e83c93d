//! The first terms of the minimal injective resolution of a simple comodule,
//!
//! ```text
//! 0 -> S_n -> e_n C --f--> ⊕_{t(a)=n} e_{s(a)} C --g--> ⊕_{r in R_n} e_{s(r)} C
//! ```
//!
//! together with its right-comodule mirror, Ext tables between simples and
//! graded dimensions of Hom spaces between the injectives `e_i C`.
//!
//! Maps are evaluators on [`PathVector`]s; matrices are assembled one degree
//! at a time only for rank computations.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{iota_left_action, iota_right_action, left_quotient, right_quotient, PathVector};
use crate::error::{Error, Result};
use crate::linalg::{combine, kernel, Echelon, Indexer, SparseVec};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};
use crate::relations::{find_redundant, ideal_truncation, IdealTruncation, Relation, RelationSet};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Left comodules: `e_n C`, maps act by stripping trailing segments.
    Left,
    /// Right comodules: `C e_m`, maps act by stripping leading segments.
    Right,
}

/// Summand `e_{s(a)}C` (left) or `C e_{t(a)}` (right), indexed by its arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSummand {
    pub arrow: ArrowId,
    pub vertex: VertexId,
}

/// Summand `e_{s(r)}C` (left) or `C e_{t(r)}` (right), indexed by its relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSummand {
    pub relation: Relation,
    pub vertex: VertexId,
}

#[derive(Clone, Debug)]
pub struct ResolutionFragment {
    quiver: Quiver,
    side: Side,
    vertex: VertexId,
    truncation: usize,
    term1: Vec<ArrowSummand>,
    term2: Vec<RelationSummand>,
    ideal: Arc<IdealTruncation>,
}

fn lookup_vertex(q: &Quiver, name: &str) -> Result<VertexId> {
    q.vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
}

/// Left fragment for the simple comodule at `vertex`.
pub fn build_resolution_fragment(
    q: &Quiver,
    vertex: &str,
    rels: &RelationSet,
    truncation: usize,
) -> Result<ResolutionFragment> {
    let n = lookup_vertex(q, vertex)?;
    let ideal = Arc::new(ideal_truncation(q, rels, truncation)?);
    Ok(ResolutionFragment::with_ideal(q, Side::Left, n, rels, ideal))
}

/// Right fragment `0 -> S_m -> C e_m -> ⊕_{s(a)=m} C e_{t(a)} -> ⊕_{s(r)=m} C e_{t(r)}`.
pub fn build_right_fragment(
    q: &Quiver,
    vertex: &str,
    rels: &RelationSet,
    truncation: usize,
) -> Result<ResolutionFragment> {
    let m = lookup_vertex(q, vertex)?;
    let ideal = Arc::new(ideal_truncation(q, rels, truncation)?);
    Ok(ResolutionFragment::with_ideal(q, Side::Right, m, rels, ideal))
}

impl ResolutionFragment {
    /// Builds a fragment sharing an already computed ideal truncation.
    pub fn with_ideal(
        q: &Quiver,
        side: Side,
        vertex: VertexId,
        rels: &RelationSet,
        ideal: Arc<IdealTruncation>,
    ) -> ResolutionFragment {
        let (term1, term2) = match side {
            Side::Left => (
                q.incoming(vertex)
                    .into_iter()
                    .map(|a| ArrowSummand {
                        arrow: a,
                        vertex: q.arrow(a).source,
                    })
                    .collect(),
                rels.ending_at(vertex)
                    .into_iter()
                    .map(|r| RelationSummand {
                        relation: r.clone(),
                        vertex: r.source().expect("common endpoints"),
                    })
                    .collect(),
            ),
            Side::Right => (
                q.outgoing(vertex)
                    .iter()
                    .map(|&a| ArrowSummand {
                        arrow: a,
                        vertex: q.arrow(a).target,
                    })
                    .collect(),
                rels.starting_at(vertex)
                    .into_iter()
                    .map(|r| RelationSummand {
                        relation: r.clone(),
                        vertex: r.target().expect("common endpoints"),
                    })
                    .collect(),
            ),
        };
        ResolutionFragment {
            quiver: q.clone(),
            side,
            vertex,
            truncation: ideal.max_degree(),
            term1,
            term2,
            ideal,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn term1(&self) -> &[ArrowSummand] {
        &self.term1
    }

    pub fn term2(&self) -> &[RelationSummand] {
        &self.term2
    }

    pub fn is_approximate(&self) -> bool {
        self.ideal.is_approximate()
    }

    /// Replaces the element used by `g` for one relation summand, leaving the
    /// comodules untouched. Used to exercise failure paths.
    pub fn replace_relation_element(&mut self, index: usize, element: PathVector) {
        self.term2[index].relation.element = element;
    }

    fn arrow_path(&self, a: ArrowId) -> Path {
        Path::arrow(&self.quiver, a)
    }

    /// `f(x)`, one component per arrow summand.
    pub fn apply_f(&self, x: &PathVector) -> Vec<PathVector> {
        self.term1
            .iter()
            .map(|s| {
                let a = self.arrow_path(s.arrow);
                match self.side {
                    Side::Left => right_quotient(x, &a),
                    Side::Right => left_quotient(x, &a),
                }
            })
            .collect()
    }

    /// `g(y)` for `y` given componentwise over the arrow summands.
    pub fn apply_g(&self, y: &[PathVector]) -> Vec<PathVector> {
        assert_eq!(y.len(), self.term1.len());
        self.term2
            .iter()
            .map(|rs| {
                let mut out = PathVector::zero(&self.quiver);
                for (s, component) in self.term1.iter().zip(y) {
                    if component.is_zero() {
                        continue;
                    }
                    let a = self.arrow_path(s.arrow);
                    let part = match self.side {
                        Side::Left => {
                            let ra = right_quotient(&rs.relation.element, &a);
                            iota_left_action(&ra, component).expect("same quiver")
                        }
                        Side::Right => {
                            let ar = left_quotient(&rs.relation.element, &a);
                            iota_right_action(component, &ar).expect("same quiver")
                        }
                    };
                    out.add_scaled(&part, &crate::algebra::scalar(1));
                }
                out
            })
            .collect()
    }

    /// Basis of the degree-`d` part of `e_v C` (left) or `C e_v` (right).
    fn injective_basis(&self, v: VertexId, degree: usize) -> Vec<PathVector> {
        self.quiver
            .vertex_ids()
            .flat_map(|u| match self.side {
                Side::Left => self.ideal.coalgebra_basis(&self.quiver, degree, u, v),
                Side::Right => self.ideal.coalgebra_basis(&self.quiver, degree, v, u),
            })
            .collect()
    }
}

/// Outcome of evaluating `g∘f` on a basis of the first injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexCheck {
    pub truncation: usize,
    pub checked: usize,
    pub witness: Option<ComplexWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexWitness {
    pub degree: usize,
    /// The basis element `x` of the first injective.
    pub element: String,
    /// Rendered nonzero components of `g(f(x))`.
    pub image: String,
}

impl ComplexCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn render_components(q: &Quiver, labels: &[String], parts: &[PathVector]) -> String {
    labels
        .iter()
        .zip(parts)
        .filter(|(_, p)| !p.is_zero())
        .map(|(l, p)| format!("[{l}] {}", p.display(q)))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Evaluates `g(f(x))` on every basis element `x` of the first injective up to
/// the fragment's truncation; reports the lowest-degree failure.
pub fn verify_complex(frag: &ResolutionFragment) -> ComplexCheck {
    let labels: Vec<String> = frag.term2.iter().map(|r| r.relation.name.clone()).collect();
    let mut checked = 0;
    for d in 0..=frag.truncation {
        for x in frag.injective_basis(frag.vertex, d) {
            checked += 1;
            let gf = frag.apply_g(&frag.apply_f(&x));
            if gf.iter().any(|c| !c.is_zero()) {
                return ComplexCheck {
                    truncation: frag.truncation,
                    checked,
                    witness: Some(ComplexWitness {
                        degree: d,
                        element: x.display(&frag.quiver).to_string(),
                        image: render_components(&frag.quiver, &labels, &gf),
                    }),
                };
            }
        }
    }
    ComplexCheck {
        truncation: frag.truncation,
        checked,
        witness: None,
    }
}

/// Dimension counts at one degree of the middle term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeExactness {
    pub degree: usize,
    pub term_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub truncation: usize,
    pub degrees: Vec<DegreeExactness>,
    /// `dim ker f` per degree `0..=N`; exactness at `e_n C` needs `[1, 0, 0, ...]`.
    pub kernel_f: Vec<usize>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.exact)
            && self
                .kernel_f
                .iter()
                .enumerate()
                .all(|(d, &k)| k == usize::from(d == 0))
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.degrees.iter().find(|d| !d.exact).map(|d| d.degree)
    }
}

type TupleSpace = Indexer<(usize, Path)>;

fn tuple_row(space: &mut TupleSpace, parts: &[PathVector]) -> SparseVec {
    space.row(
        parts
            .iter()
            .enumerate()
            .flat_map(|(k, part)| part.terms().map(move |(p, c)| ((k, p.clone()), c.clone()))),
    )
}

/// Degree-wise check of `ker g = im f` on the middle term and of `ker f = S_n`.
pub fn verify_exactness_middle(frag: &ResolutionFragment) -> Result<ExactnessReport> {
    if frag.is_approximate() {
        return Err(Error::ApproximateMode);
    }
    let n_terms = frag.term1.len();
    let mut degrees = Vec::new();
    for d in 0..frag.truncation {
        // Basis of the middle term at degree d, as tuples.
        let mut basis: Vec<Vec<PathVector>> = Vec::new();
        for (k, s) in frag.term1.iter().enumerate() {
            for b in frag.injective_basis(s.vertex, d) {
                let mut tuple = vec![PathVector::zero(&frag.quiver); n_terms];
                tuple[k] = b;
                basis.push(tuple);
            }
        }
        let mut middle = TupleSpace::default();
        let basis_coords: Vec<SparseVec> = basis.iter().map(|t| tuple_row(&mut middle, t)).collect();

        let image_rows: Vec<SparseVec> = frag
            .injective_basis(frag.vertex, d + 1)
            .iter()
            .map(|x| tuple_row(&mut middle, &frag.apply_f(x)))
            .collect();

        let mut target = TupleSpace::default();
        let g_images: Vec<SparseVec> = basis.iter().map(|t| tuple_row(&mut target, &frag.apply_g(t))).collect();
        let kernel_combos = kernel(&g_images, target.dim());

        let dim = middle.dim();
        let image = Echelon::from_rows(dim, image_rows);
        let kernel_space = Echelon::from_rows(
            dim,
            kernel_combos.iter().map(|combo| combine(&basis_coords, combo)),
        );
        degrees.push(DegreeExactness {
            degree: d,
            term_dim: basis.len(),
            image_dim: image.rank(),
            kernel_dim: kernel_space.rank(),
            exact: kernel_space.same_span(&image),
        });
    }

    let kernel_f = (0..=frag.truncation)
        .map(|d| {
            let mut space = TupleSpace::default();
            let images: Vec<SparseVec> = frag
                .injective_basis(frag.vertex, d)
                .iter()
                .map(|x| tuple_row(&mut space, &frag.apply_f(x)))
                .collect();
            kernel(&images, space.dim()).len()
        })
        .collect();

    Ok(ExactnessReport {
        truncation: frag.truncation,
        degrees,
        kernel_f,
    })
}

/// `dims[k][j][i] = dim Ext^k(S_j, S_i)` for `k = 0, 1, 2` and optionally 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub vertices: Vec<String>,
    pub dims: Vec<Vec<Vec<usize>>>,
}

impl ExtTable {
    pub fn get(&self, k: usize, j: VertexId, i: VertexId) -> usize {
        self.dims[k][j.index()][i.index()]
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// The `Ext^k` matrix with rows and columns swapped, i.e. the other
    /// variance convention for reading relation counts.
    pub fn transposed(&self, k: usize) -> Vec<Vec<usize>> {
        let m = &self.dims[k];
        (0..m.len()).map(|i| (0..m.len()).map(|j| m[j][i]).collect()).collect()
    }

    pub fn is_symmetric(&self, k: usize) -> bool {
        self.transposed(k) == self.dims[k]
    }
}

fn ext_from_fragments(q: &Quiver, rels: &RelationSet) -> Result<ExtTable> {
    let size = q.vertex_count();
    let bound = rels.max_degree().max(1);
    let ideal = Arc::new(ideal_truncation(q, rels, bound)?);
    let mut dims = vec![vec![vec![0usize; size]; size]; 3];
    for i in q.vertex_ids() {
        dims[0][i.index()][i.index()] = 1;
        let frag = ResolutionFragment::with_ideal(q, Side::Left, i, rels, Arc::clone(&ideal));
        for s in frag.term1() {
            dims[1][s.vertex.index()][i.index()] += 1;
        }
        for s in frag.term2() {
            dims[2][s.vertex.index()][i.index()] += 1;
        }
    }
    Ok(ExtTable {
        vertices: q.vertex_names().to_vec(),
        dims,
    })
}

/// Ext dimensions between simples, read off the socles of the fragment terms
/// and cross-checked against direct arrow and relation counts.
pub fn ext_dims(q: &Quiver, rels: &RelationSet) -> Result<ExtTable> {
    if !rels.has_common_endpoints() {
        return Err(Error::InvalidInput(
            "relations must each have a common source and target".into(),
        ));
    }
    if !rels.is_minimal() {
        if let Some(name) = find_redundant(q, rels) {
            return Err(Error::NotMinimal { name });
        }
    }
    let table = ext_from_fragments(q, rels)?;
    for j in q.vertex_ids() {
        for i in q.vertex_ids() {
            let arrows = q.arrows_between(j, i).len();
            let relations = rels.between(j, i).len();
            if table.get(1, j, i) != arrows || table.get(2, j, i) != relations {
                return Err(Error::InvalidInput(format!(
                    "socle reading disagrees with counts at ({}, {})",
                    q.vertex_name(j),
                    q.vertex_name(i)
                )));
            }
        }
    }
    Ok(table)
}

/// Adds `Ext^3` from a supplied third term: `third[i]` lists the vertices `j`
/// of the summands `e_j C` of the third injective in the resolution of `S_i`.
pub fn ext_dims_with_third(
    q: &Quiver,
    rels: &RelationSet,
    third: &BTreeMap<VertexId, Vec<VertexId>>,
) -> Result<ExtTable> {
    let mut table = ext_dims(q, rels)?;
    let size = q.vertex_count();
    let mut ext3 = vec![vec![0usize; size]; size];
    for (i, summands) in third {
        for j in summands {
            ext3[j.index()][i.index()] += 1;
        }
    }
    table.dims.push(ext3);
    Ok(table)
}

/// Graded dimensions of `Hom_C(e_j C, e_i C) ≅ (e_j C e_i)^*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomDims {
    pub from: String,
    pub to: String,
    pub truncation: usize,
    pub approximate: bool,
    /// `(degree, dimension)` pairs for degrees `0..=N`.
    pub dims: Vec<(usize, usize)>,
}

/// Per-degree dimension of `e_j C e_i`: the part of `C` spanned by paths
/// from `i` to `j`, i.e. path count minus the rank of the relation ideal.
pub fn hom_injectives(
    q: &Quiver,
    rels: &RelationSet,
    i: &str,
    j: &str,
    truncation: usize,
) -> Result<HomDims> {
    let vi = lookup_vertex(q, i)?;
    let vj = lookup_vertex(q, j)?;
    let ideal = ideal_truncation(q, rels, truncation)?;
    let approximate = ideal.is_approximate();
    let dims = if approximate {
        // Level d approximates C ∩ kQ_{<=d}; differences give degrees.
        let mut prev = 0;
        (0..=truncation)
            .map(|d| {
                let total = ideal.coalgebra_dim(d, vi, vj);
                let here = total.saturating_sub(prev);
                prev = total;
                (d, here)
            })
            .collect()
    } else {
        (0..=truncation).map(|d| (d, ideal.coalgebra_dim(d, vi, vj))).collect()
    };
    Ok(HomDims {
        from: j.to_string(),
        to: i.to_string(),
        truncation,
        approximate,
        dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{minimal_relations, TruncationMode};

    fn jordan() -> (Quiver, RelationSet) {
        let q = Quiver::from_parts(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        let r = RelationSet::parse(&q, &[("r", "x.y - y.x")]).unwrap();
        (q, r)
    }

    fn commutative3() -> (Quiver, RelationSet) {
        let q = Quiver::from_parts(&["1"], &[("x", "1", "1"), ("y", "1", "1"), ("z", "1", "1")]).unwrap();
        let r = RelationSet::parse(&q, &[("a", "y.z - z.y"), ("b", "z.x - x.z"), ("c", "x.y - y.x")]).unwrap();
        (q, r)
    }

    #[test]
    fn fragment_shapes() {
        let (q, r) = jordan();
        let frag = build_resolution_fragment(&q, "1", &r, 4).unwrap();
        assert_eq!(frag.term1().len(), 2);
        assert_eq!(frag.term2().len(), 1);
        let right = build_right_fragment(&q, "1", &r, 4).unwrap();
        assert_eq!(right.term1().len(), 2);
        assert_eq!(right.term2().len(), 1);

        let a2 = Quiver::from_parts(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let empty = RelationSet::empty();
        let frag = build_resolution_fragment(&a2, "2", &empty, 4).unwrap();
        assert_eq!(frag.term1().len(), 1);
        assert_eq!(a2.vertex_name(frag.term1()[0].vertex), "1");
        assert!(frag.term2().is_empty());
        let frag = build_resolution_fragment(&a2, "1", &empty, 4).unwrap();
        assert!(frag.term1().is_empty());
        let right = build_right_fragment(&a2, "1", &empty, 4).unwrap();
        assert_eq!(right.term1().len(), 1);
        assert_eq!(a2.vertex_name(right.term1()[0].vertex), "2");

        assert_eq!(
            build_resolution_fragment(&a2, "7", &empty, 4).unwrap_err(),
            Error::UnknownVertex("7".into())
        );
    }

    #[test]
    fn complex_and_exactness_on_fixtures() {
        for (q, r) in [jordan(), commutative3()] {
            for side in [Side::Left, Side::Right] {
                let ideal = Arc::new(ideal_truncation(&q, &r, 4).unwrap());
                let frag = ResolutionFragment::with_ideal(&q, side, q.vertex("1").unwrap(), &r, ideal);
                assert!(verify_complex(&frag).passed());
                let ex = verify_exactness_middle(&frag).unwrap();
                assert!(ex.passed(), "{ex:?}");
            }
        }
    }

    #[test]
    fn path_coalgebra_sequence_is_exact() {
        let q = Quiver::from_parts(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).unwrap();
        let empty = RelationSet::empty();
        for v in ["1", "2", "3"] {
            let frag = build_resolution_fragment(&q, v, &empty, 4).unwrap();
            let ex = verify_exactness_middle(&frag).unwrap();
            assert!(ex.passed());
            // g is absent, so exactness means f is onto degree-wise.
            assert!(ex.degrees.iter().all(|d| d.image_dim == d.term_dim));
        }
    }

    #[test]
    fn corrupted_relation_is_caught() {
        let (q, r) = jordan();
        let mut frag = build_resolution_fragment(&q, "1", &r, 4).unwrap();
        frag.replace_relation_element(0, PathVector::parse(&q, "x.y + y.x").unwrap());
        let check = verify_complex(&frag);
        let w = check.witness.expect("must fail");
        assert_eq!(w.degree, 2);
        assert_eq!(w.element, "x.y + y.x");
        assert_eq!(w.image, "[r] 2*e_1");
    }

    #[test]
    fn filtered_relations_refuse_exactness() {
        let (q, _) = jordan();
        let r = RelationSet::parse(&q, &[("r", "x.y - y.x + x.x.x")]).unwrap();
        let frag = build_resolution_fragment(&q, "1", &r, 4).unwrap();
        assert_eq!(verify_exactness_middle(&frag).unwrap_err(), Error::ApproximateMode);
    }

    #[test]
    fn ext_examples() {
        let a2 = Quiver::from_parts(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let t = ext_dims(&a2, &RelationSet::empty()).unwrap();
        let (v1, v2) = (a2.vertex("1").unwrap(), a2.vertex("2").unwrap());
        assert_eq!(t.get(1, v1, v2), 1);
        assert_eq!(t.get(1, v2, v1), 0);
        assert_eq!(t.get(1, v1, v1), 0);
        assert_eq!(t.get(0, v1, v1), 1);

        let (q, r) = jordan();
        let v = q.vertex("1").unwrap();
        let t = ext_dims(&q, &r).unwrap();
        assert_eq!((t.get(1, v, v), t.get(2, v, v)), (2, 1));

        let d = Quiver::from_parts(&["1", "2"], &[]).unwrap();
        let t = ext_dims(&d, &RelationSet::empty()).unwrap();
        assert_eq!(t.dims[0], vec![vec![1, 0], vec![0, 1]]);
        assert!(t.dims[1].iter().chain(&t.dims[2]).flatten().all(|&x| x == 0));
    }

    #[test]
    fn ext_refuses_redundant_relations() {
        let (q, _) = jordan();
        let r = RelationSet::parse(&q, &[("r", "x.y - y.x"), ("s", "x.x.y - x.y.x")]).unwrap();
        assert_eq!(ext_dims(&q, &r).unwrap_err(), Error::NotMinimal { name: "s".into() });
        let m = minimal_relations(&q, &r, 4, TruncationMode::Exact).unwrap();
        assert!(ext_dims(&q, &m).is_ok());
    }

    #[test]
    fn hom_examples() {
        let (q, r) = jordan();
        let h = hom_injectives(&q, &r, "1", "1", 4).unwrap();
        assert_eq!(h.dims.iter().map(|d| d.1).collect::<Vec<_>>(), [1, 2, 3, 4, 5]);
        let h = hom_injectives(&q, &RelationSet::empty(), "1", "1", 3).unwrap();
        assert_eq!(h.dims.iter().map(|d| d.1).collect::<Vec<_>>(), [1, 2, 4, 8]);
        let (q3, r3) = commutative3();
        let h = hom_injectives(&q3, &r3, "1", "1", 2).unwrap();
        assert_eq!(h.dims[2], (2, 6));
    }
}
