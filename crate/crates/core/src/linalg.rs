//! Exact sparse row reduction over the rationals.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::algebra::Scalar;

/// Sparse row: strictly increasing column indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

/// A row-echelon basis of a subspace of `Q^ncols`; every row has pivot entry 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
    reduced: bool,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
            reduced: true,
        }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseVec>>(ncols: usize, rows: I) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(&r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let Some(&(start, _)) = v.first() else {
            return Vec::new();
        };
        let mut acc: Vec<Scalar> = vec![Scalar::zero(); self.ncols];
        for (c, x) in v {
            acc[*c] = x.clone();
        }
        for col in start..self.ncols {
            if acc[col].is_zero() {
                continue;
            }
            if let Some(row) = self.rows.get(&col) {
                let factor = std::mem::take(&mut acc[col]);
                for (c, x) in row.iter().skip(1) {
                    acc[*c] -= &factor * x;
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let residual = self.reduce(v);
        let Some((pivot, lead)) = residual.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let row: SparseVec = residual
            .into_iter()
            .map(|(c, x)| (c, if c == pivot { Scalar::one() } else { x * &inv }))
            .collect();
        self.rows.insert(pivot, row);
        self.reduced = false;
        true
    }

    /// Back-substitutes so that pivot columns are zero outside their own row.
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for p in pivots {
            let row = self.rows[&p].clone();
            let mut acc: BTreeMap<usize, Scalar> = row.into_iter().collect();
            let later: Vec<usize> = acc.keys().copied().filter(|&c| c != p).collect();
            for c in later {
                let Some(factor) = acc.get(&c).cloned() else {
                    continue;
                };
                if let Some(other) = self.rows.get(&c) {
                    for (cc, x) in other {
                        let e = acc.entry(*cc).or_insert_with(Scalar::zero);
                        *e -= &factor * x;
                    }
                    acc.retain(|_, x| !x.is_zero());
                }
            }
            self.rows.insert(p, acc.into_iter().collect());
        }
        self.reduced = true;
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Basis of the orthogonal complement under the standard dot product
    /// (equivalently, the null space of the row matrix).
    pub fn orthogonal_complement(&self) -> Vec<SparseVec> {
        let mut reduced = self.clone();
        reduced.make_reduced();
        let mut entries_by_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&p, row) in &reduced.rows {
            for (c, x) in row.iter().skip(1) {
                entries_by_col.entry(*c).or_default().push((p, x.clone()));
            }
        }
        (0..self.ncols)
            .filter(|c| !reduced.rows.contains_key(c))
            .map(|free| {
                let mut v: SparseVec = entries_by_col
                    .get(&free)
                    .map(|es| es.iter().map(|(p, x)| (*p, -x.clone())).collect())
                    .unwrap_or_default();
                v.push((free, Scalar::one()));
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }

    /// Equality of row spaces.
    pub fn same_span(&self, other: &Echelon) -> bool {
        self.rank() == other.rank() && other.rows().all(|r| self.contains(r))
    }

    pub fn contains_all(&self, other: &Echelon) -> bool {
        other.rows().all(|r| self.contains(r))
    }
}

/// Basis of `{c : Σ c_i images[i] = 0}` in coordinates over the domain indices.
pub fn kernel(images: &[SparseVec], image_dim: usize) -> Vec<SparseVec> {
    let n = images.len();
    let mut ech = Echelon::new(image_dim + n);
    for (i, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.push((image_dim + i, Scalar::one()));
        ech.insert(&row);
    }
    ech.rows
        .range(image_dim..)
        .map(|(_, row)| row.iter().map(|(c, x)| (c - image_dim, x.clone())).collect())
        .collect()
}

/// Coefficients `c` with `Σ c_i gens[i] = target`, if the target is in the span.
pub fn express(gens: &[SparseVec], target: &[(usize, Scalar)], dim: usize) -> Option<Vec<Scalar>> {
    let n = gens.len();
    let mut ech = Echelon::new(dim + n);
    for (i, g) in gens.iter().enumerate() {
        let mut row = g.clone();
        row.push((dim + i, Scalar::one()));
        ech.insert(&row);
    }
    let residual = ech.reduce(target);
    if residual.iter().any(|(c, _)| *c < dim) {
        return None;
    }
    let mut coeffs = vec![Scalar::zero(); n];
    for (c, x) in residual {
        coeffs[c - dim] = -x;
    }
    Some(coeffs)
}

pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    Echelon::from_rows(ncols, rows.iter().cloned()).rank()
}

/// Assigns column indices to keys on first sight, for assembling matrices
/// over spaces whose basis is discovered while evaluating maps.
#[derive(Clone, Debug)]
pub struct Indexer<K> {
    index: HashMap<K, usize>,
}

impl<K: Eq + Hash> Default for Indexer<K> {
    fn default() -> Self {
        Indexer { index: HashMap::new() }
    }
}

impl<K: Eq + Hash> Indexer<K> {
    pub fn column(&mut self, key: K) -> usize {
        let next = self.index.len();
        *self.index.entry(key).or_insert(next)
    }

    /// Sums duplicate keys and drops zeros.
    pub fn row<I: IntoIterator<Item = (K, Scalar)>>(&mut self, entries: I) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, x) in entries {
            *acc.entry(self.column(k)).or_insert_with(Scalar::zero) += x;
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }
}

/// `Σ c_i rows[i]` for a sparse coefficient vector.
pub fn combine(rows: &[SparseVec], coeffs: &[(usize, Scalar)]) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in coeffs {
        for (col, x) in &rows[*i] {
            *acc.entry(*col).or_insert_with(Scalar::zero) += c * x;
        }
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Dense rows to sparse rows.
pub fn sparse(row: &[Scalar]) -> SparseVec {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar;

    fn row(xs: &[i64]) -> SparseVec {
        sparse(&xs.iter().map(|&x| scalar(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&row(&[1, 2, 3])));
        assert!(e.insert(&row(&[2, 4, 7])));
        assert!(!e.insert(&row(&[3, 6, 10])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&row(&[0, 0, 1])));
        assert!(!e.contains(&row(&[0, 1, 0])));
    }

    #[test]
    fn reduced_form_and_complement() {
        let mut e = Echelon::from_rows(3, [row(&[1, 1, 0]), row(&[0, 1, 1])]);
        e.make_reduced();
        let rows: Vec<_> = e.rows().cloned().collect();
        assert_eq!(rows, vec![row(&[1, 0, -1]), row(&[0, 1, 1])]);
        let comp = e.orthogonal_complement();
        assert_eq!(comp, vec![row(&[1, -1, 1])]);
    }

    #[test]
    fn kernel_and_solve() {
        let images = vec![row(&[1, 0]), row(&[0, 1]), row(&[1, 1])];
        let k = kernel(&images, 2);
        assert_eq!(k.len(), 1);
        let combo: Vec<Scalar> = (0..2)
            .map(|c| {
                k[0].iter()
                    .filter_map(|(i, x)| images[*i].iter().find(|(cc, _)| *cc == c).map(|(_, y)| x * y))
                    .fold(scalar(0), |a, b| a + b)
            })
            .collect();
        assert!(combo.iter().all(|x| x.is_zero()));

        let gens = vec![row(&[1, 1, 0]), row(&[0, 1, 1])];
        let c = express(&gens, &row(&[2, 5, 3]), 3).unwrap();
        assert_eq!(c, vec![scalar(2), scalar(3)]);
        assert!(express(&gens, &row(&[1, 0, 0]), 3).is_none());
    }
}
