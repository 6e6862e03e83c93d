//! Shared helpers for the integration tests: fixtures and seeded generators.
#![allow(dead_code)]

use std::path::PathBuf;

use cyquiver::algebra::{ratio, scalar};
use cyquiver::quiver::enumerate_paths;
use cyquiver::{parse, InputDocument, Path, PathVector, Quiver, Relation, RelationSet, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_source(name: &str) -> String {
    let path = fixtures_dir().join(format!("{name}.quiver"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture(name: &str) -> InputDocument {
    parse(&fixture_source(name)).unwrap()
}

/// All fixture names, sorted.
pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "quiver").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

/// Random quiver with vertices `1..=n` and arrows `a0, a1, ...`.
pub fn random_quiver(rng: &mut ChaCha8Rng, vertices: usize, arrows: usize) -> Quiver {
    let vs: Vec<String> = (1..=vertices).map(|v| v.to_string()).collect();
    let arrows: Vec<(String, String, String)> = (0..arrows)
        .map(|k| {
            (
                format!("a{k}"),
                vs[rng.gen_range(0..vertices)].clone(),
                vs[rng.gen_range(0..vertices)].clone(),
            )
        })
        .collect();
    let v_refs: Vec<&str> = vs.iter().map(String::as_str).collect();
    let a_refs: Vec<(&str, &str, &str)> = arrows
        .iter()
        .map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str()))
        .collect();
    Quiver::from_parts(&v_refs, &a_refs).unwrap()
}

pub fn loops(n: usize) -> Quiver {
    let names: Vec<String> = ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect();
    let arrows: Vec<(&str, &str, &str)> = names.iter().map(|a| (a.as_str(), "1", "1")).collect();
    Quiver::from_parts(&["1"], &arrows).unwrap()
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let n = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(n, rng.gen_range(1..=3))
}

/// Random combination of up to `terms` paths of degree at most `max_degree`.
pub fn random_vector(rng: &mut ChaCha8Rng, q: &Quiver, max_degree: usize, terms: usize) -> PathVector {
    let mut v = PathVector::zero(q);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        let paths = enumerate_paths(q, d, None, None);
        if let Some(p) = paths.choose(rng) {
            v.add_term(p.clone(), random_scalar(rng));
        }
    }
    v
}

/// Random homogeneous element of one `(source, target)` block, or `None`
/// when the block has no paths of that degree.
pub fn random_block_element(rng: &mut ChaCha8Rng, q: &Quiver, degree: usize) -> Option<PathVector> {
    let paths = enumerate_paths(q, degree, None, None);
    let anchor = paths.choose(rng)?.clone();
    let block: Vec<&Path> = paths
        .iter()
        .filter(|p| p.source() == anchor.source() && p.target() == anchor.target())
        .collect();
    let mut v = PathVector::from_path(q, anchor.clone());
    v = v.scale(&random_scalar(rng));
    for _ in 0..rng.gen_range(0..=2) {
        v.add_term((*block.choose(rng).unwrap()).clone(), random_scalar(rng));
    }
    (!v.is_zero()).then_some(v)
}

/// Random homogeneous relations of the given degrees, named `g0, g1, ...`.
pub fn random_relations(rng: &mut ChaCha8Rng, q: &Quiver, degrees: &[usize]) -> RelationSet {
    let rels: Vec<Relation> = degrees
        .iter()
        .filter_map(|&d| random_block_element(rng, q, d))
        .enumerate()
        .map(|(k, e)| Relation::new(format!("g{k}"), e))
        .collect();
    RelationSet::new(q, rels).unwrap()
}

/// Renames vertices and arrows through the given permutations of the
/// sorted name lists, moving the relations along.
pub fn relabel(
    q: &Quiver,
    rels: &RelationSet,
    vertex_names: &[String],
    arrow_names: &[String],
) -> (Quiver, RelationSet) {
    let v_refs: Vec<&str> = vertex_names.iter().map(String::as_str).collect();
    let arrows: Vec<(&str, &str, &str)> = q
        .arrows()
        .iter()
        .zip(arrow_names)
        .map(|(a, new)| {
            (
                new.as_str(),
                v_refs[a.source.index()],
                v_refs[a.target.index()],
            )
        })
        .collect();
    let target = Quiver::from_parts(&v_refs, &arrows).unwrap();
    let moved = rels.map_elements(|r| {
        PathVector::from_terms(
            &target,
            r.element.terms().map(|(p, c)| {
                let path = if p.is_trivial() {
                    Path::trivial(target.vertex(v_refs[p.source().index()]).unwrap())
                } else {
                    let ids = p
                        .arrows()
                        .iter()
                        .map(|a| target.arrow_id(&arrow_names[a.index()]).unwrap())
                        .collect();
                    Path::from_arrows(&target, ids).unwrap()
                };
                (c.clone(), path)
            }),
        )
    });
    (target, moved)
}

/// A relabeling that reverses the sorted order of vertex and arrow names.
pub fn reversing_names(q: &Quiver) -> (Vec<String>, Vec<String>) {
    let nv = q.vertex_count();
    let na = q.arrow_count();
    (
        (0..nv).map(|k| format!("v{}", nv - k)).collect(),
        (0..na).map(|k| format!("b{:02}", na - k)).collect(),
    )
}

/// Multiplies every relation by its own random nonzero rational.
pub fn rescale(rng: &mut ChaCha8Rng, rels: &RelationSet) -> RelationSet {
    rels.map_elements(|r| r.element.scale(&random_scalar(rng)))
}

pub fn one() -> Scalar {
    scalar(1)
}
