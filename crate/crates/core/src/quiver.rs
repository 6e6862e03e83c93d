//! Finite quivers, paths and connected components.
//!
//! Vertices and arrows are stored sorted by name and addressed by dense
//! indices, so ordering paths by arrow index sequence coincides with ordering
//! them lexicographically by arrow names.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite directed multigraph with named vertices and arrows.
#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: BTreeMap<String, VertexId>,
    arrow_index: BTreeMap<String, ArrowId>,
    outgoing: Vec<Vec<ArrowId>>,
    fingerprint: u64,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

/// Validates raw vertex and arrow declarations into a [`Quiver`].
///
/// Arrows are given as `(name, source, target)`.
pub fn validate_quiver<V, A>(vertices: V, arrows: A) -> Result<Quiver>
where
    V: IntoIterator,
    V::Item: Into<String>,
    A: IntoIterator<Item = (String, String, String)>,
{
    let mut vertex_set = BTreeSet::new();
    for v in vertices {
        let v = v.into();
        if !vertex_set.insert(v.clone()) {
            return Err(Error::DuplicateId(v));
        }
    }
    let vertices: Vec<String> = vertex_set.into_iter().collect();
    let vertex_index: BTreeMap<String, VertexId> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), VertexId(i as u32)))
        .collect();

    let mut raw: BTreeMap<String, (VertexId, VertexId)> = BTreeMap::new();
    for (name, source, target) in arrows {
        if raw.contains_key(&name) {
            return Err(Error::DuplicateId(name));
        }
        let s = *vertex_index
            .get(&source)
            .ok_or(Error::DanglingEndpoint(source))?;
        let t = *vertex_index
            .get(&target)
            .ok_or(Error::DanglingEndpoint(target))?;
        raw.insert(name, (s, t));
    }

    let arrows: Vec<Arrow> = raw
        .into_iter()
        .map(|(name, (source, target))| Arrow {
            name,
            source,
            target,
        })
        .collect();
    Ok(Quiver::assemble(vertices, vertex_index, arrows))
}

impl Quiver {
    fn assemble(
        vertices: Vec<String>,
        vertex_index: BTreeMap<String, VertexId>,
        arrows: Vec<Arrow>,
    ) -> Quiver {
        let arrow_index = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.clone(), ArrowId(i as u32)))
            .collect();
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, a) in arrows.iter().enumerate() {
            outgoing[a.source.index()].push(ArrowId(i as u32));
        }
        let mut hasher = DefaultHasher::new();
        vertices.hash(&mut hasher);
        arrows.hash(&mut hasher);
        Quiver {
            fingerprint: hasher.finish(),
            vertices,
            arrows,
            vertex_index,
            arrow_index,
            outgoing,
        }
    }

    /// Convenience constructor from string slices.
    pub fn from_parts(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Quiver> {
        validate_quiver(
            vertices.iter().copied(),
            arrows
                .iter()
                .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
        )
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: ArrowId) -> &Arrow {
        &self.arrows[id.index()]
    }

    pub fn vertex_name(&self, id: VertexId) -> &str {
        &self.vertices[id.index()]
    }

    pub fn arrow_name(&self, id: ArrowId) -> &str {
        &self.arrows[id.index()].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn outgoing(&self, v: VertexId) -> &[ArrowId] {
        &self.outgoing[v.index()]
    }

    /// Arrows with the given endpoints, in name order.
    pub fn arrows_between(&self, source: VertexId, target: VertexId) -> Vec<ArrowId> {
        self.outgoing(source)
            .iter()
            .copied()
            .filter(|&a| self.arrow(a).target == target)
            .collect()
    }

    pub fn incoming(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrow_ids()
            .filter(|&a| self.arrow(a).target == v)
            .collect()
    }

    /// Same vertices and arrow names, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                source: a.target,
                target: a.source,
            })
            .collect();
        Quiver::assemble(self.vertices.clone(), self.vertex_index.clone(), arrows)
    }

    /// Parses the textual form `a.b.c` or `e_v` of a single path.
    pub fn path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix("e_") {
            if self.arrow_id(text).is_none() {
                let v = self
                    .vertex(v)
                    .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
                return Ok(Path::trivial(v));
            }
        }
        let arrows = text
            .split('.')
            .map(|name| {
                self.arrow_id(name.trim())
                    .ok_or_else(|| Error::UnknownArrow(name.trim().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Path::from_arrows(self, arrows)
    }
}

/// A path `a_1.a_2...a_n` with `s(a_{i+1}) = t(a_i)`, or a trivial path at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn trivial(v: VertexId) -> Path {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> Path {
        let arrow = q.arrow(a);
        Path {
            source: arrow.source,
            target: arrow.target,
            arrows: vec![a],
        }
    }

    pub fn from_arrows(q: &Quiver, arrows: Vec<ArrowId>) -> Result<Path> {
        let Some(&first) = arrows.first() else {
            return Err(Error::InvalidInput(
                "a nontrivial path needs at least one arrow".into(),
            ));
        };
        for pair in arrows.windows(2) {
            if q.arrow(pair[0]).target != q.arrow(pair[1]).source {
                let text: Vec<&str> = arrows.iter().map(|&a| q.arrow_name(a)).collect();
                return Err(Error::NonComposable(text.join(".")));
            }
        }
        Ok(Path {
            source: q.arrow(first).source,
            target: q.arrow(*arrows.last().unwrap()).target,
            arrows,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn is_cycle(&self) -> bool {
        self.source == self.target
    }

    /// The last arrow, if any.
    pub fn last_arrow(&self) -> Option<ArrowId> {
        self.arrows.last().copied()
    }

    pub fn first_arrow(&self) -> Option<ArrowId> {
        self.arrows.first().copied()
    }

    /// `self` followed by `other`, or `None` when `t(self) != s(other)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            target: other.target,
            arrows,
        })
    }

    /// Returns `r` with `self = r.q`.
    pub fn strip_suffix(&self, q: &Path) -> Option<Path> {
        if q.target != self.target || !self.arrows.ends_with(&q.arrows) {
            return None;
        }
        Some(Path {
            source: self.source,
            target: q.source,
            arrows: self.arrows[..self.len() - q.len()].to_vec(),
        })
    }

    /// Returns `r` with `self = q.r`.
    pub fn strip_prefix(&self, q: &Path) -> Option<Path> {
        if q.source != self.source || !self.arrows.starts_with(&q.arrows) {
            return None;
        }
        Some(Path {
            source: q.target,
            target: self.target,
            arrows: self.arrows[q.len()..].to_vec(),
        })
    }

    /// The same arrows read backwards, as a path of the opposite quiver.
    pub fn reversed(&self) -> Path {
        Path {
            source: self.target,
            target: self.source,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }

    pub fn display<'a>(&'a self, q: &'a Quiver) -> PathDisplay<'a> {
        PathDisplay { path: self, quiver: q }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    quiver: &'a Quiver,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_trivial() {
            return write!(f, "e_{}", self.quiver.vertex_name(self.path.source));
        }
        for (i, &a) in self.path.arrows.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(self.quiver.arrow_name(a))?;
        }
        Ok(())
    }
}

/// All composable paths of the given length, optionally filtered by endpoints,
/// ordered lexicographically by arrow sequence.
pub fn enumerate_paths(
    q: &Quiver,
    length: usize,
    source: Option<VertexId>,
    target: Option<VertexId>,
) -> Vec<Path> {
    let mut layer: Vec<Path> = match source {
        Some(s) => vec![Path::trivial(s)],
        None => q.vertex_ids().map(Path::trivial).collect(),
    };
    for _ in 0..length {
        let mut next = Vec::new();
        for p in &layer {
            for &a in q.outgoing(p.target) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path {
                    source: p.source,
                    target: q.arrow(a).target,
                    arrows,
                });
            }
        }
        layer = next;
    }
    if let Some(t) = target {
        layer.retain(|p| p.target == t);
    }
    layer.sort();
    layer
}

/// A connected component with its induced sub-quiver.
#[derive(Clone, Debug)]
pub struct Component {
    pub vertices: Vec<String>,
    pub arrows: Vec<String>,
    pub quiver: Quiver,
}

/// Partition of the vertices by undirected reachability, ordered by smallest vertex.
pub fn connected_components(q: &Quiver) -> Vec<Component> {
    let n = q.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in q.arrows() {
        let (ra, rb) = (
            find(&mut parent, a.source.index()),
            find(&mut parent, a.target.index()),
        );
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        groups.entry(root).or_default().push(v);
    }
    groups
        .into_values()
        .map(|members| {
            let member_set: BTreeSet<usize> = members.iter().copied().collect();
            let vertices: Vec<String> = members.iter().map(|&v| q.vertices[v].clone()).collect();
            let arrows: Vec<&Arrow> = q
                .arrows()
                .iter()
                .filter(|a| member_set.contains(&a.source.index()))
                .collect();
            let quiver = validate_quiver(
                vertices.iter().cloned(),
                arrows.iter().map(|a| {
                    (
                        a.name.clone(),
                        q.vertex_name(a.source).to_string(),
                        q.vertex_name(a.target).to_string(),
                    )
                }),
            )
            .expect("induced sub-quiver of a valid quiver is valid");
            Component {
                vertices,
                arrows: arrows.iter().map(|a| a.name.clone()).collect(),
                quiver,
            }
        })
        .collect()
}
