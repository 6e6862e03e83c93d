//! Superpotentials and cyclic derivatives, used to generate CY-3 candidates.

use crate::algebra::{ratio, PathVector};
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Path, Quiver};
use crate::relations::Relation;

/// A rational combination of cycles, read up to cyclic rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpotential {
    element: PathVector,
}

impl Superpotential {
    pub fn new(q: &Quiver, element: PathVector) -> Result<Superpotential> {
        if let Some(p) = element.support().find(|p| !p.is_cycle()) {
            return Err(Error::NonCyclic(p.display(q).to_string()));
        }
        Ok(Superpotential { element })
    }

    pub fn element(&self) -> &PathVector {
        &self.element
    }

    /// Average over rotations of every term; has the same cyclic derivatives.
    pub fn symmetrized(&self, q: &Quiver) -> Superpotential {
        let mut out = PathVector::zero(q);
        for (p, c) in self.element.terms() {
            if p.is_trivial() {
                out.add_term(p.clone(), c.clone());
                continue;
            }
            let n = p.len();
            let weight = c * ratio(1, n as i64);
            for k in 0..n {
                out.add_term(rotate(q, p, k), weight.clone());
            }
        }
        Superpotential { element: out }
    }
}

fn rotate(q: &Quiver, p: &Path, k: usize) -> Path {
    let arrows = p.arrows();
    let rotated: Vec<ArrowId> = arrows[k..].iter().chain(&arrows[..k]).copied().collect();
    Path::from_arrows(q, rotated).expect("rotation of a cycle is a cycle")
}

/// `∂_a w`: every occurrence `u.a.v` in a cycle of `w` contributes `v.u`.
pub fn cyclic_derivative(q: &Quiver, w: &Superpotential, a: ArrowId) -> PathVector {
    let mut out = PathVector::zero(q);
    for (p, c) in w.element.terms() {
        let arrows = p.arrows();
        for (k, &b) in arrows.iter().enumerate() {
            if b != a {
                continue;
            }
            let rest: Vec<ArrowId> = arrows[k + 1..].iter().chain(&arrows[..k]).copied().collect();
            let term = if rest.is_empty() {
                Path::trivial(q.arrow(a).target)
            } else {
                Path::from_arrows(q, rest).expect("complement of an arrow in a cycle is a path")
            };
            out.add_term(term, c.clone());
        }
    }
    out
}

/// The nonzero cyclic derivatives, named `d_<arrow>`, in arrow order.
pub fn derive_relations(q: &Quiver, w: &Superpotential) -> Vec<Relation> {
    q.arrow_ids()
        .filter_map(|a| {
            let d = cyclic_derivative(q, w, a);
            (!d.is_zero()).then(|| Relation::new(format!("d_{}", q.arrow_name(a)), d))
        })
        .collect()
}
