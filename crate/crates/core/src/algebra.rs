//! Exact rational linear combinations of paths and the operations of the path
//! algebra kQ acting on (truncations of) the path coalgebra CQ.
//!
//! The same [`PathVector`] type represents elements of both sides; the
//! pairing between them is the Kronecker pairing on the path basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver, VertexId};

pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Finitely supported map from paths to nonzero rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathVector {
    fingerprint: u64,
    terms: BTreeMap<Path, Scalar>,
}

impl PathVector {
    pub fn zero(q: &Quiver) -> PathVector {
        PathVector {
            fingerprint: q.fingerprint(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(q: &Quiver, p: Path) -> PathVector {
        let mut v = PathVector::zero(q);
        v.terms.insert(p, Scalar::one());
        v
    }

    pub fn from_terms<I>(q: &Quiver, terms: I) -> PathVector
    where
        I: IntoIterator<Item = (Scalar, Path)>,
    {
        let mut v = PathVector::zero(q);
        for (c, p) in terms {
            v.add_term(p, c);
        }
        v
    }

    /// Parses an expression such as `x.y - 1/2*y.x` against `q`.
    pub fn parse(q: &Quiver, text: &str) -> Result<PathVector> {
        crate::input::parse_expression(q, text)
    }

    fn empty_like(&self) -> PathVector {
        PathVector {
            fingerprint: self.fingerprint,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn same_quiver(&self, other: &PathVector) -> Result<()> {
        if self.fingerprint == other.fingerprint {
            Ok(())
        } else {
            Err(Error::MixedQuiver)
        }
    }

    pub fn belongs_to(&self, q: &Quiver) -> bool {
        self.fingerprint == q.fingerprint()
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PathVector, c: &Scalar) {
        assert_eq!(self.fingerprint, other.fingerprint, "mixed-quiver operands");
        if c.is_zero() {
            return;
        }
        for (p, k) in &other.terms {
            self.add_term(p.clone(), k * c);
        }
    }

    pub fn add(&self, other: &PathVector) -> PathVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &PathVector) -> PathVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn scale(&self, c: &Scalar) -> PathVector {
        if c.is_zero() {
            return self.empty_like();
        }
        PathVector {
            fingerprint: self.fingerprint,
            terms: self.terms.iter().map(|(p, k)| (p.clone(), k * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order: by degree, then lexicographically by path.
    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Path::len).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Path::len)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Path::len)
    }

    /// True when every support path has the same length (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.max_degree()
    }

    pub fn endpoints(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.terms.keys().map(|p| (p.source(), p.target())).collect()
    }

    /// The common `(source, target)` of all support paths, if there is one.
    pub fn common_endpoints(&self) -> Option<(VertexId, VertexId)> {
        let ends = self.endpoints();
        if ends.len() == 1 {
            ends.into_iter().next()
        } else {
            None
        }
    }

    /// Decomposition along `kQ = ⊕ kQ_{i,j}`.
    pub fn split_blocks(&self) -> BTreeMap<(VertexId, VertexId), PathVector> {
        let mut out: BTreeMap<(VertexId, VertexId), PathVector> = BTreeMap::new();
        for (p, c) in &self.terms {
            out.entry((p.source(), p.target()))
                .or_insert_with(|| self.empty_like())
                .terms
                .insert(p.clone(), c.clone());
        }
        out
    }

    pub fn homogeneous_part(&self, degree: usize) -> PathVector {
        PathVector {
            fingerprint: self.fingerprint,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.len() == degree)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rescaled so that the first coefficient in canonical order is 1.
    pub fn normalized(&self) -> PathVector {
        match self.terms.values().next() {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }

    /// The same element read in the opposite quiver `op` (paths reversed).
    pub fn reversed(&self, op: &Quiver) -> PathVector {
        PathVector::from_terms(op, self.terms.iter().map(|(p, c)| (c.clone(), p.reversed())))
    }

    /// Moves the element to another quiver by arrow and vertex names.
    pub fn transport(&self, from: &Quiver, to: &Quiver) -> Result<PathVector> {
        let mut out = PathVector::zero(to);
        for (p, c) in &self.terms {
            let moved = if p.is_trivial() {
                let name = from.vertex_name(p.source());
                Path::trivial(
                    to.vertex(name)
                        .ok_or_else(|| Error::UnknownVertex(name.to_string()))?,
                )
            } else {
                let arrows = p
                    .arrows()
                    .iter()
                    .map(|&a| {
                        let name = from.arrow_name(a);
                        to.arrow_id(name)
                            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Path::from_arrows(to, arrows)?
            };
            out.add_term(moved, c.clone());
        }
        Ok(out)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut counts = BTreeMap::new();
        for p in self.terms.keys() {
            *counts.entry((p.len(), p.source(), p.target())).or_insert(0) += 1;
        }
        DegreeProfile { counts }
    }

    pub fn display<'a>(&'a self, q: &'a Quiver) -> VectorDisplay<'a> {
        VectorDisplay { vector: self, quiver: q }
    }
}

/// Support summary of a [`PathVector`]: number of support paths per
/// `(degree, source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DegreeProfile {
    pub counts: BTreeMap<(usize, VertexId, VertexId), usize>,
}

impl DegreeProfile {
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.counts.keys().map(|k| k.0).collect()
    }
}

pub struct VectorDisplay<'a> {
    vector: &'a PathVector,
    quiver: &'a Quiver,
}

pub(crate) fn format_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for VectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vector.is_zero() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.vector.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            if !magnitude.is_one() {
                write!(f, "{}*", format_scalar(&magnitude))?;
            }
            write!(f, "{}", p.display(self.quiver))?;
        }
        Ok(())
    }
}

/// Bilinear extension of concatenation; `p q = 0` unless `s(q) = t(p)`.
pub fn multiply(x: &PathVector, y: &PathVector) -> Result<PathVector> {
    x.same_quiver(y)?;
    let mut out = x.empty_like();
    for (p, a) in &x.terms {
        for (q, b) in &y.terms {
            if let Some(pq) = p.concat(q) {
                out.add_term(pq, a * b);
            }
        }
    }
    Ok(out)
}

/// `x q⁻¹`: every path `p = r q` contributes `r`, other terms vanish.
pub fn right_quotient(x: &PathVector, q: &Path) -> PathVector {
    let mut out = x.empty_like();
    for (p, c) in &x.terms {
        if let Some(r) = p.strip_suffix(q) {
            out.add_term(r, c.clone());
        }
    }
    out
}

/// `q⁻¹ x`: every path `p = q r` contributes `r`, other terms vanish.
pub fn left_quotient(x: &PathVector, q: &Path) -> PathVector {
    let mut out = x.empty_like();
    for (p, c) in &x.terms {
        if let Some(r) = p.strip_prefix(q) {
            out.add_term(r, c.clone());
        }
    }
    out
}

/// The Kronecker pairing `⟨x, y⟩` extended bilinearly.
pub fn pair(x: &PathVector, y: &PathVector) -> Result<Scalar> {
    x.same_quiver(y)?;
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    Ok(small
        .terms
        .iter()
        .filter_map(|(p, a)| large.terms.get(p).map(|b| a * b))
        .fold(Scalar::zero(), |acc, t| acc + t))
}

/// Left action `ι(y) x = Σ_q y_q · x q⁻¹` of `y ∈ kQ` on `x ∈ CQ`.
pub fn iota_left_action(y: &PathVector, x: &PathVector) -> Result<PathVector> {
    x.same_quiver(y)?;
    let mut out = x.empty_like();
    for (q, c) in &y.terms {
        out.add_scaled(&right_quotient(x, q), c);
    }
    Ok(out)
}

/// Right action `x ι(y) = Σ_q y_q · q⁻¹ x`.
pub fn iota_right_action(x: &PathVector, y: &PathVector) -> Result<PathVector> {
    x.same_quiver(y)?;
    let mut out = x.empty_like();
    for (q, c) in &y.terms {
        out.add_scaled(&left_quotient(x, q), c);
    }
    Ok(out)
}
