//! Relation ideals, their degree-wise truncations, and minimal relation sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{multiply, PathVector, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::quiver::{enumerate_paths, ArrowId, Path, Quiver, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub element: PathVector,
}

impl Relation {
    pub fn new(name: impl Into<String>, element: PathVector) -> Self {
        Relation {
            name: name.into(),
            element,
        }
    }

    pub fn degree(&self) -> usize {
        self.element.max_degree().unwrap_or(0)
    }

    pub fn source(&self) -> Option<VertexId> {
        self.element.common_endpoints().map(|e| e.0)
    }

    pub fn target(&self) -> Option<VertexId> {
        self.element.common_endpoints().map(|e| e.1)
    }
}

/// A finite list of relations in `kQ_{>=2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    relations: Vec<Relation>,
    minimal: bool,
    approximate: bool,
}

impl RelationSet {
    pub fn new(q: &Quiver, relations: Vec<Relation>) -> Result<RelationSet> {
        let mut names = BTreeSet::new();
        for r in &relations {
            if !names.insert(r.name.as_str()) {
                return Err(Error::DuplicateId(r.name.clone()));
            }
            if !r.element.belongs_to(q) {
                return Err(Error::MixedQuiver);
            }
            match r.element.min_degree() {
                None => return Err(Error::ZeroRelation { name: r.name.clone() }),
                Some(d) if d < 2 => return Err(Error::LowDegreeRelation { name: r.name.clone() }),
                _ => {}
            }
        }
        Ok(RelationSet {
            relations,
            minimal: false,
            approximate: false,
        })
    }

    pub fn empty() -> RelationSet {
        RelationSet {
            relations: Vec::new(),
            minimal: true,
            approximate: false,
        }
    }

    /// Builds a set from `(name, expression)` pairs.
    pub fn parse(q: &Quiver, relations: &[(&str, &str)]) -> Result<RelationSet> {
        let rels = relations
            .iter()
            .map(|(n, e)| Ok(Relation::new(*n, PathVector::parse(q, e)?)))
            .collect::<Result<Vec<_>>>()?;
        RelationSet::new(q, rels)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn elements(&self) -> Vec<PathVector> {
        self.relations.iter().map(|r| r.element.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Every element is a combination of equal-length paths.
    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(|r| r.element.is_homogeneous())
    }

    /// Finitely many relations per vertex pair; always true for a finite list.
    pub fn is_locally_finite(&self) -> bool {
        true
    }

    pub fn has_common_endpoints(&self) -> bool {
        self.relations
            .iter()
            .all(|r| r.element.common_endpoints().is_some())
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Set when the relations came from the filtered (inhomogeneous) procedure.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn max_degree(&self) -> usize {
        self.relations.iter().map(Relation::degree).max().unwrap_or(0)
    }

    /// `R_n = {r : t(r) = n}`.
    pub fn ending_at(&self, n: VertexId) -> Vec<&Relation> {
        self.relations
            .iter()
            .filter(|r| r.target() == Some(n))
            .collect()
    }

    pub fn starting_at(&self, m: VertexId) -> Vec<&Relation> {
        self.relations
            .iter()
            .filter(|r| r.source() == Some(m))
            .collect()
    }

    pub fn between(&self, source: VertexId, target: VertexId) -> Vec<&Relation> {
        self.relations
            .iter()
            .filter(|r| r.element.common_endpoints() == Some((source, target)))
            .collect()
    }

    /// The same relations with paths reversed, over the opposite quiver.
    pub fn reversed(&self, op: &Quiver) -> RelationSet {
        RelationSet {
            relations: self
                .relations
                .iter()
                .map(|r| Relation::new(r.name.clone(), r.element.reversed(op)))
                .collect(),
            minimal: self.minimal,
            approximate: self.approximate,
        }
    }

    /// Relations whose support lies in `sub` (matched by names), moved there.
    pub fn restrict(&self, from: &Quiver, sub: &Quiver) -> RelationSet {
        RelationSet {
            relations: self
                .relations
                .iter()
                .filter_map(|r| {
                    r.element
                        .transport(from, sub)
                        .ok()
                        .map(|e| Relation::new(r.name.clone(), e))
                })
                .collect(),
            minimal: self.minimal,
            approximate: self.approximate,
        }
    }

    /// Applies `f` to every element, keeping names and flags.
    pub fn map_elements<F>(&self, mut f: F) -> RelationSet
    where
        F: FnMut(&Relation) -> PathVector,
    {
        RelationSet {
            relations: self
                .relations
                .iter()
                .map(|r| Relation::new(r.name.clone(), f(r)))
                .collect(),
            minimal: self.minimal,
            approximate: self.approximate,
        }
    }

    pub fn without(&self, index: usize) -> RelationSet {
        let mut relations = self.relations.clone();
        relations.remove(index);
        RelationSet {
            relations,
            minimal: false,
            approximate: self.approximate,
        }
    }

    /// Marks the set as minimal without checking.
    pub fn assume_minimal(mut self) -> RelationSet {
        self.minimal = true;
        self
    }
}

/// Trailing arrows of the support paths; empty for trivial paths.
pub fn lead(x: &PathVector) -> BTreeSet<ArrowId> {
    x.support().filter_map(Path::last_arrow).collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TruncationMode {
    /// Homogeneous generators; degree components are exact.
    Exact,
    /// Inhomogeneous generators; level `n` is a lower bound for `Ω ∩ kQ_{<=n}`.
    Filtered,
}

/// Row-reduced basis of one `(level, source, target)` block.
#[derive(Clone, Debug)]
pub struct Block {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    echelon: Echelon,
}

impl Block {
    fn new(paths: Vec<Path>) -> Block {
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let echelon = Echelon::new(paths.len());
        Block {
            paths,
            index,
            echelon,
        }
    }

    /// Column basis: the paths of this block.
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn coordinates(&self, x: &PathVector) -> Option<SparseVec> {
        let mut row: SparseVec = x
            .terms()
            .map(|(p, c)| self.index.get(p).map(|&i| (i, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        row.sort_by_key(|(c, _)| *c);
        Some(row)
    }

    pub fn vector(&self, q: &Quiver, row: &[(usize, Scalar)]) -> PathVector {
        PathVector::from_terms(q, row.iter().map(|(c, x)| (x.clone(), self.paths[*c].clone())))
    }
}

/// Degree-wise truncation of a two-sided ideal of kQ.
#[derive(Clone, Debug)]
pub struct IdealTruncation {
    mode: TruncationMode,
    max_degree: usize,
    blocks: BTreeMap<(usize, VertexId, VertexId), Block>,
}

impl IdealTruncation {
    pub fn mode(&self) -> TruncationMode {
        self.mode
    }

    pub fn is_approximate(&self) -> bool {
        self.mode == TruncationMode::Filtered
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn block(&self, degree: usize, i: VertexId, j: VertexId) -> Option<&Block> {
        self.blocks.get(&(degree, i, j))
    }

    pub fn rank(&self, degree: usize, i: VertexId, j: VertexId) -> usize {
        self.block(degree, i, j).map_or(0, Block::rank)
    }

    /// Number of columns (paths) of the block.
    pub fn path_count(&self, degree: usize, i: VertexId, j: VertexId) -> usize {
        self.block(degree, i, j).map_or(0, |b| b.paths.len())
    }

    pub fn ranks(&self) -> BTreeMap<(usize, VertexId, VertexId), usize> {
        self.blocks.iter().map(|(k, b)| (*k, b.rank())).collect()
    }

    pub fn total_rank(&self, degree: usize) -> usize {
        self.blocks
            .iter()
            .filter(|(k, _)| k.0 == degree)
            .map(|(_, b)| b.rank())
            .sum()
    }

    /// Membership of `x` in the truncation at level `degree` (blockwise).
    pub fn contains(&self, degree: usize, x: &PathVector) -> bool {
        x.split_blocks().iter().all(|(&(i, j), part)| {
            match self.block(degree, i, j) {
                Some(b) => b
                    .coordinates(part)
                    .is_some_and(|row| b.echelon.contains(&row)),
                None => part.is_zero(),
            }
        })
    }

    /// Orthogonal of the ideal inside the paths of block `(degree, i, j)`.
    ///
    /// In filtered mode `C ∩ kQ_{<=d}` is orthogonal to the truncation of all
    /// of `Ω` to degrees `<= d`, not just to `Ω ∩ kQ_{<=d}`; the top level is
    /// truncated to approximate it.
    fn orthogonal(&self, degree: usize, i: VertexId, j: VertexId) -> Option<(&Block, Echelon)> {
        let b = self.block(degree, i, j)?;
        let echelon = match self.mode {
            TruncationMode::Exact => b.echelon.clone(),
            TruncationMode::Filtered => {
                let top = self.block(self.max_degree, i, j).expect("levels are nested");
                // Columns are ordered by degree, so level `degree` is a prefix.
                let width = b.paths.len();
                let mut e = Echelon::from_rows(
                    width,
                    top.echelon
                        .rows()
                        .map(|row| row.iter().filter(|(c, _)| *c < width).cloned().collect()),
                );
                e.make_reduced();
                e
            }
        };
        Some((b, echelon))
    }

    /// Dimension of the degree-`degree` part of `C = Ω^⊥` from `i` to `j`
    /// (of `C ∩ kQ_{<=degree}` in filtered mode).
    pub fn coalgebra_dim(&self, degree: usize, i: VertexId, j: VertexId) -> usize {
        self.orthogonal(degree, i, j)
            .map_or(0, |(b, e)| b.paths.len() - e.rank())
    }

    /// Basis of the degree-`degree` part of `C = Ω^⊥` with paths from `i` to
    /// `j` (of `C ∩ kQ_{<=degree}` in filtered mode).
    pub fn coalgebra_basis(&self, q: &Quiver, degree: usize, i: VertexId, j: VertexId) -> Vec<PathVector> {
        if degree > self.max_degree {
            return Vec::new();
        }
        match self.orthogonal(degree, i, j) {
            Some((b, e)) => e
                .orthogonal_complement()
                .iter()
                .map(|row| b.vector(q, row))
                .collect(),
            None => Vec::new(),
        }
    }

    /// First `(degree, i, j)` where the two row spaces differ.
    pub fn first_difference(&self, other: &IdealTruncation) -> Option<(usize, VertexId, VertexId)> {
        let keys: BTreeSet<_> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        keys.into_iter().find(|&(n, i, j)| match (self.block(n, i, j), other.block(n, i, j)) {
            (Some(a), Some(b)) => !a.echelon.same_span(&b.echelon),
            (Some(a), None) | (None, Some(a)) => a.rank() != 0,
            (None, None) => false,
        })
    }
}

/// Incrementally built ideal truncation.
pub(crate) struct IdealBuilder<'q> {
    q: &'q Quiver,
    mode: TruncationMode,
    max_degree: usize,
    paths: Vec<Vec<Path>>,
    blocks: BTreeMap<(usize, VertexId, VertexId), Block>,
}

impl<'q> IdealBuilder<'q> {
    pub(crate) fn new(q: &'q Quiver, mode: TruncationMode, max_degree: usize) -> Self {
        let paths: Vec<Vec<Path>> = (0..=max_degree)
            .map(|n| enumerate_paths(q, n, None, None))
            .collect();
        let mut blocks = BTreeMap::new();
        for n in 0..=max_degree {
            for i in q.vertex_ids() {
                for j in q.vertex_ids() {
                    let cols: Vec<Path> = match mode {
                        TruncationMode::Exact => paths[n]
                            .iter()
                            .filter(|p| p.source() == i && p.target() == j)
                            .cloned()
                            .collect(),
                        TruncationMode::Filtered => (0..=n)
                            .flat_map(|d| paths[d].iter())
                            .filter(|p| p.source() == i && p.target() == j)
                            .cloned()
                            .collect(),
                    };
                    if !cols.is_empty() {
                        blocks.insert((n, i, j), Block::new(cols));
                    }
                }
            }
        }
        IdealBuilder {
            q,
            mode,
            max_degree,
            paths,
            blocks,
        }
    }

    fn insert_at(&mut self, level: usize, x: &PathVector) {
        for ((i, j), part) in x.split_blocks() {
            let block = self
                .blocks
                .get_mut(&(level, i, j))
                .expect("support paths lie in an enumerated block");
            let row = block.coordinates(&part).expect("paths enumerated");
            block.echelon.insert(&row);
        }
    }

    /// Adds every `p·g·r` of (filtration) degree at most the truncation bound.
    pub(crate) fn add_generator(&mut self, g: &PathVector) {
        for (&(s, t), part) in &g.split_blocks() {
            let d = part.max_degree().unwrap_or(0);
            if d > self.max_degree {
                continue;
            }
            let slack = self.max_degree - d;
            for k in 0..=slack {
                let lefts: Vec<PathVector> = self.paths[k]
                    .iter()
                    .filter(|p| p.target() == s)
                    .map(|p| multiply(&PathVector::from_path(self.q, p.clone()), part).unwrap())
                    .collect();
                for m in 0..=slack - k {
                    let rights: Vec<Path> = self.paths[m]
                        .iter()
                        .filter(|r| r.source() == t)
                        .cloned()
                        .collect();
                    for left in &lefts {
                        for r in &rights {
                            let x = multiply(left, &PathVector::from_path(self.q, r.clone())).unwrap();
                            if x.is_zero() {
                                continue;
                            }
                            let level = d + k + m;
                            match self.mode {
                                TruncationMode::Exact => self.insert_at(level, &x),
                                TruncationMode::Filtered => {
                                    for n in level..=self.max_degree {
                                        self.insert_at(n, &x);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn contains(&self, level: usize, x: &PathVector) -> bool {
        x.split_blocks().iter().all(|(&(i, j), part)| {
            self.blocks.get(&(level, i, j)).is_some_and(|b| {
                b.coordinates(part)
                    .is_some_and(|row| b.echelon.contains(&row))
            })
        })
    }

    pub(crate) fn finish(mut self) -> IdealTruncation {
        for b in self.blocks.values_mut() {
            b.echelon.make_reduced();
        }
        IdealTruncation {
            mode: self.mode,
            max_degree: self.max_degree,
            blocks: self.blocks,
        }
    }
}

fn mode_for(elements: &[PathVector]) -> TruncationMode {
    if elements.iter().all(PathVector::is_homogeneous) {
        TruncationMode::Exact
    } else {
        TruncationMode::Filtered
    }
}

/// Truncation of the ideal generated by arbitrary elements (not necessarily in `kQ_{>=2}`).
pub fn ideal_span(q: &Quiver, elements: &[PathVector], max_degree: usize) -> Result<IdealTruncation> {
    let needed = elements.iter().filter_map(PathVector::max_degree).max().unwrap_or(0);
    if needed > max_degree {
        return Err(Error::TruncationTooLow {
            bound: max_degree,
            needed,
        });
    }
    let mut builder = IdealBuilder::new(q, mode_for(elements), max_degree);
    for g in elements {
        if !g.belongs_to(q) {
            return Err(Error::MixedQuiver);
        }
        builder.add_generator(g);
    }
    Ok(builder.finish())
}

/// Degree-wise truncation of the ideal generated by `gens`; filtered mode is
/// used (and flagged) when some generator is inhomogeneous.
pub fn ideal_truncation(q: &Quiver, gens: &RelationSet, max_degree: usize) -> Result<IdealTruncation> {
    ideal_span(q, &gens.elements(), max_degree)
}

/// Extracts a minimal relation set generating the same ideal.
///
/// Generators are split into `(source, target)` blocks, ordered by degree
/// (stable in input order) and admitted greedily when they are not in the
/// ideal generated by the relations admitted so far. Admitted elements are
/// normalized to leading coefficient 1.
pub fn minimal_relations(
    q: &Quiver,
    gens: &RelationSet,
    max_degree: usize,
    mode: TruncationMode,
) -> Result<RelationSet> {
    if mode == TruncationMode::Exact {
        if let Some(r) = gens.relations.iter().find(|r| !r.element.is_homogeneous()) {
            return Err(Error::Inhomogeneous { name: r.name.clone() });
        }
    }
    let needed = gens.max_degree();
    if needed > max_degree {
        return Err(Error::TruncationTooLow {
            bound: max_degree,
            needed,
        });
    }

    let mut taken: BTreeSet<String> = gens.relations.iter().map(|r| r.name.clone()).collect();
    let mut candidates: Vec<Relation> = Vec::new();
    for r in &gens.relations {
        let blocks = r.element.split_blocks();
        if blocks.len() == 1 {
            candidates.push(r.clone());
            continue;
        }
        for (k, part) in blocks.into_values().enumerate() {
            let mut name = format!("{}_{}", r.name, k + 1);
            while taken.contains(&name) {
                name.push('_');
            }
            taken.insert(name.clone());
            candidates.push(Relation::new(name, part));
        }
    }
    candidates.sort_by_key(Relation::degree);

    // Admission at degree d only needs the ideal up to the largest generator degree.
    let bound = candidates.last().map_or(0, Relation::degree);
    let mut builder = IdealBuilder::new(q, mode, bound);
    let mut admitted = Vec::new();
    for c in candidates {
        if builder.contains(c.degree(), &c.element) {
            continue;
        }
        builder.add_generator(&c.element);
        admitted.push(Relation::new(c.name, c.element.normalized()));
    }
    Ok(RelationSet {
        relations: admitted,
        minimal: true,
        approximate: mode == TruncationMode::Filtered,
    })
}

/// Name of the first relation lying in the ideal generated by the others.
pub fn find_redundant(q: &Quiver, rels: &RelationSet) -> Option<String> {
    rels.relations.iter().enumerate().find_map(|(idx, r)| {
        let others: Vec<PathVector> = rels
            .relations
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, o)| o.element.clone())
            .collect();
        let mode = mode_for(&others);
        let mut builder = IdealBuilder::new(q, mode, r.degree());
        for o in &others {
            builder.add_generator(o);
        }
        builder
            .contains(r.degree(), &r.element)
            .then(|| r.name.clone())
    })
}

/// Number of relations per ordered vertex pair (every pair listed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCounts {
    pub counts: BTreeMap<(VertexId, VertexId), usize>,
}

impl PairCounts {
    pub fn get(&self, i: VertexId, j: VertexId) -> usize {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }
}

pub fn locally_finite_check(q: &Quiver, rels: &RelationSet) -> PairCounts {
    let mut counts: BTreeMap<(VertexId, VertexId), usize> = q
        .vertex_ids()
        .flat_map(|i| q.vertex_ids().map(move |j| ((i, j), 0)))
        .collect();
    for r in &rels.relations {
        for key in r.element.split_blocks().keys() {
            *counts.entry(*key).or_insert(0) += 1;
        }
    }
    PairCounts { counts }
}
