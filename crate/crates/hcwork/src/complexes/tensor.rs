//! Mixed-radix indexing of tensor products of basis vectors, and helpers for
//! building module structures on quotients of free tensor spaces.

use crate::exactla::{Quotient, SparseMatrix, SparseVec, Subspace, Q};

use super::ComplexError;

/// Index of (x_0, ..., x_k) in V_0 ⊗ ... ⊗ V_k, first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    radices: Vec<usize>,
}

impl TensorSpace {
    pub fn new(radices: Vec<usize>) -> Self {
        TensorSpace { radices }
    }

    /// M ⊗ B^{⊗n}.
    pub fn module_power(m: usize, b: usize, n: usize) -> Self {
        let mut r = vec![m];
        r.extend(std::iter::repeat_n(b, n));
        TensorSpace { radices: r }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn size(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn index(&self, t: &[usize]) -> usize {
        debug_assert_eq!(t.len(), self.radices.len());
        t.iter().zip(&self.radices).fold(0, |acc, (&x, &r)| acc * r + x)
    }

    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        for k in (0..self.radices.len()).rev() {
            let r = self.radices[k];
            if r == 0 {
                return out;
            }
            out[k] = idx % r;
            idx /= r;
        }
        out
    }

    /// Sum over the entries of v placed in slot `slot` of the tuple template t.
    pub fn substitute(&self, t: &[usize], slot: usize, v: &SparseVec) -> SparseVec {
        let mut tt = t.to_vec();
        let pairs = v.iter().map(|(k, c)| {
            tt[slot] = *k;
            (self.index(&tt), c.clone())
        });
        SparseVec::from_pairs(pairs.collect::<Vec<_>>())
    }

    pub fn tuple_vec(&self, t: &[usize], c: Q) -> SparseVec {
        SparseVec::from_pairs([(self.index(t), c)])
    }

    /// v_0 ⊗ ... ⊗ v_k as a vector of this space.
    pub fn product_vec(&self, factors: &[SparseVec]) -> SparseVec {
        debug_assert_eq!(factors.len(), self.radices.len());
        let mut acc: Vec<(usize, Q)> = vec![(0, crate::exactla::q(1))];
        for (v, &r) in factors.iter().zip(&self.radices) {
            if v.is_zero() {
                return SparseVec::new();
            }
            let mut next = Vec::with_capacity(acc.len() * v.nnz());
            for (i, c) in &acc {
                for (k, x) in v.iter() {
                    next.push((i * r + k, c * x));
                }
            }
            acc = next;
        }
        SparseVec::from_pairs(acc)
    }
}

/// A quotient of a free tensor space by a relation subspace.
#[derive(Clone, Debug)]
pub struct TupleLevel {
    pub space: TensorSpace,
    pub quot: Quotient,
}

impl TupleLevel {
    pub fn new(space: TensorSpace, rels: Vec<SparseVec>) -> Self {
        let n = space.size();
        TupleLevel { space, quot: Quotient::new(Subspace::span_owned(n, rels)) }
    }

    pub fn dim(&self) -> usize {
        self.quot.dim()
    }

    /// The quotient basis vectors as tuples.
    pub fn basis_tuples(&self) -> Vec<Vec<usize>> {
        self.quot.lifts().iter().map(|&i| self.space.digits(i)).collect()
    }
}

/// Matrix of the map induced by f on tuples, after checking that the
/// relations of src are sent into the relations of dst.
pub fn induce_tuple_map(
    src: &TupleLevel,
    dst: &TupleLevel,
    what: &str,
    check: bool,
    f: impl Fn(&[usize]) -> SparseVec,
) -> Result<SparseMatrix, ComplexError> {
    let g = |i: usize| f(&src.space.digits(i));
    if check && !src.quot.descends(&dst.quot, g) {
        return Err(ComplexError::NotWellDefined(what.to_string()));
    }
    Ok(src.quot.induce(&dst.quot, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn digits_roundtrip(r in proptest::collection::vec(1usize..4, 1..5), seed in 0usize..1000) {
            let s = TensorSpace::new(r);
            let i = seed % s.size();
            prop_assert_eq!(s.index(&s.digits(i)), i);
        }
    }

    #[test]
    fn substitute_places_entries() {
        let s = TensorSpace::new(vec![2, 3]);
        let v = SparseVec::from_pairs([(0, q(1)), (2, q(5))]);
        let w = s.substitute(&[1, 1], 1, &v);
        assert_eq!(w, SparseVec::from_pairs([(3, q(1)), (5, q(5))]));
    }
}
