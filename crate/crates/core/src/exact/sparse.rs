use std::collections::btree_map;
use std::collections::BTreeMap;
use std::ops::Bound;

use super::Rational;

/// A finitely supported vector over an ordered key set, zero-free and
/// canonically ordered, so structural equality is linear-algebraic equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparseVec<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        let mut v = Self::new();
        v.terms.insert(key, Rational::one());
        v
    }

    pub fn single(key: K, coeff: Rational) -> Self {
        let mut v = Self::new();
        v.add_term(key, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, key: &K) -> Option<&Rational> {
        self.terms.get(key)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Rational> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Rational> {
        self.terms.keys()
    }

    pub fn first_key(&self) -> Option<&K> {
        self.terms.keys().next()
    }

    /// Adds `coeff * key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec<K>) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), c * v);
        }
    }

    pub fn add_assign(&mut self, other: &SparseVec<K>) {
        self.axpy(&Rational::one(), other);
    }

    pub fn sub_assign(&mut self, other: &SparseVec<K>) {
        self.axpy(&-Rational::one(), other);
    }

    pub fn scaled(&self, c: &Rational) -> SparseVec<K> {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec<K> {
        SparseVec {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn plus(&self, other: &SparseVec<K>) -> SparseVec<K> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &SparseVec<K>) -> SparseVec<K> {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    /// Keeps only the terms whose key satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&K) -> bool) -> SparseVec<K> {
        SparseVec {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> SparseVec<L> {
        let mut out = SparseVec::new();
        for (k, v) in self.iter() {
            out.add_term(f(k), v.clone());
        }
        out
    }

    fn range_after(&self, cursor: &Option<K>) -> btree_map::Range<'_, K, Rational> {
        match cursor {
            None => self
                .terms
                .range::<K, (Bound<&K>, Bound<&K>)>((Bound::Unbounded, Bound::Unbounded)),
            Some(c) => self
                .terms
                .range::<K, (Bound<&K>, Bound<&K>)>((Bound::Excluded(c), Bound::Unbounded)),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut v = SparseVec::new();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl<'a, K: Ord> IntoIterator for &'a SparseVec<K> {
    type Item = (&'a K, &'a Rational);
    type IntoIter = btree_map::Iter<'a, K, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<K: Ord> {
    vec: SparseVec<K>,
    /// The row as a combination of the tagged input vectors.
    combo: SparseVec<usize>,
}

/// Outcome of inserting a vector into an [`EchelonBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion<K: Ord> {
    /// The vector was independent; it now owns this pivot.
    Pivot(K),
    /// The vector was dependent. The payload is a nonzero combination of
    /// the tagged inputs (including the new one) that sums to zero.
    Relation(SparseVec<usize>),
}

/// Incremental sparse Gaussian elimination over an ordered key space.
///
/// Each stored row has its smallest key as pivot with coefficient 1, and
/// tracks how it was built from the tagged input vectors. This gives rank,
/// span membership, coordinates and kernels of column-described maps without
/// ever forming a dense matrix.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord> {
    rows: BTreeMap<K, EchelonRow<K>>,
}

impl<K: Ord> Default for EchelonBasis<K> {
    fn default() -> Self {
        EchelonBasis { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Returns `(remainder, combo)` with `v = remainder + Σ combo[t]·input[t]`.
    /// The remainder has no entries on pivot keys.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = rem
                .range_after(&cursor)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((key, c)) = next else { break };
            let row = &self.rows[&key];
            rem.axpy(&-&c, &row.vec);
            combo.axpy(&c, &row.combo);
            cursor = Some(key);
        }
        (rem, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coordinates of `v` with respect to the tagged inputs, if `v` lies in the span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (rem, combo) = self.reduce(v);
        rem.is_zero().then_some(combo)
    }

    pub fn insert(&mut self, v: &SparseVec<K>, tag: usize) -> Insertion<K> {
        let (rem, combo) = self.reduce(v);
        let mut relation = SparseVec::unit(tag);
        relation.sub_assign(&combo);
        match rem.first_key().cloned() {
            None => Insertion::Relation(relation),
            Some(pivot) => {
                let inv = rem.get(&pivot).recip();
                self.rows.insert(
                    pivot.clone(),
                    EchelonRow {
                        vec: rem.scaled(&inv),
                        combo: relation.scaled(&inv),
                    },
                );
                Insertion::Pivot(pivot)
            }
        }
    }
}

/// Kernel of the linear map sending basis vector `j` to `images[j]`.
///
/// The returned basis is in reduced row-echelon form (as rows over the
/// column indices), so it is canonical for a given map.
pub fn kernel_of_images<K: Ord + Clone>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut basis = EchelonBasis::new();
    let mut relations = Vec::new();
    for (j, img) in images.iter().enumerate() {
        if let Insertion::Relation(r) = basis.insert(img, j) {
            relations.push(r);
        }
    }
    rref_sparse(relations)
}

/// Rank of the family of vectors.
pub fn rank_of<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> usize {
    let mut basis = EchelonBasis::new();
    for (j, v) in vectors.iter().enumerate() {
        basis.insert(v, j);
    }
    basis.rank()
}

/// Fully reduced row-echelon basis of the span of `rows`, ordered by pivot.
pub fn rref_sparse<K: Ord + Clone>(rows: Vec<SparseVec<K>>) -> Vec<SparseVec<K>> {
    let mut basis = EchelonBasis::new();
    for (j, r) in rows.iter().enumerate() {
        basis.insert(r, j);
    }
    let pivots: Vec<K> = basis.rows.keys().cloned().collect();
    let mut reduced: BTreeMap<K, SparseVec<K>> = BTreeMap::new();
    // Back-substitute from the largest pivot down.
    for p in pivots.iter().rev() {
        let mut v = basis.rows[p].vec.clone();
        let hits: Vec<(K, Rational)> = v
            .iter()
            .filter(|(k, _)| *k != p && reduced.contains_key(k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        for (k, c) in hits {
            v.axpy(&-c, &reduced[&k]);
        }
        reduced.insert(p.clone(), v);
    }
    reduced.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn add_term_cancels_to_zero_free_form() {
        let mut v = SparseVec::new();
        v.add_term(3usize, q(2));
        v.add_term(3usize, q(-2));
        assert!(v.is_zero());
        v.add_term(1, q(0));
        assert!(v.is_zero());
    }

    #[test]
    fn echelon_tracks_relations() {
        let a: SparseVec<usize> = [(0, q(1)), (1, q(1))].into_iter().collect();
        let b: SparseVec<usize> = [(1, q(1)), (2, q(1))].into_iter().collect();
        let c = a.plus(&b);
        let mut e = EchelonBasis::new();
        assert_eq!(e.insert(&a, 0), Insertion::Pivot(0));
        assert_eq!(e.insert(&b, 1), Insertion::Pivot(1));
        match e.insert(&c, 2) {
            Insertion::Relation(r) => {
                assert_eq!(r.get(&2), q(1));
                assert_eq!(r.get(&0), q(-1));
                assert_eq!(r.get(&1), q(-1));
            }
            other => panic!("expected relation, got {other:?}"),
        }
        assert_eq!(e.express(&c).unwrap().get(&0), q(1));
    }

    #[test]
    fn rref_is_canonical() {
        let r1: SparseVec<usize> = [(0, q(2)), (1, q(4))].into_iter().collect();
        let r2: SparseVec<usize> = [(0, q(1)), (1, q(3))].into_iter().collect();
        let rows = rref_sparse(vec![r1, r2]);
        assert_eq!(rows, vec![SparseVec::unit(0), SparseVec::unit(1)]);
    }
}
