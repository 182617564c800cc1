//! Bounded chain complexes of finite-dimensional Q-spaces.

use rayon::prelude::*;
use serde::Serialize;

use crate::exactla::{kernel_basis, rank, LaError, Quotient, SparseMatrix, Subquotient, Subspace};

use super::ComplexError;

/// Degrees lo..=hi; d[k] : C_{lo+k} → C_{lo+k-1}. The map out of the lowest
/// degree is implicitly zero, as is the map into the top degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i32,
    dims: Vec<usize>,
    d: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// d[k] must have shape dims[k-1] x dims[k]; d[0] is ignored and may be
    /// any 0 x dims[0] matrix. Checks d² = 0.
    pub fn new(lo: i32, dims: Vec<usize>, mut d: Vec<SparseMatrix>) -> Result<Self, ComplexError> {
        if d.len() != dims.len() {
            return Err(ComplexError::Shape(format!("{} maps for {} degrees", d.len(), dims.len())));
        }
        if let Some(first) = d.first_mut() {
            *first = SparseMatrix::zero(0, dims[0]);
        }
        for k in 1..dims.len() {
            if d[k].nrows() != dims[k - 1] || d[k].ncols() != dims[k] {
                return Err(ComplexError::Shape(format!("boundary in degree {}", lo + k as i32)));
            }
        }
        for k in 2..dims.len() {
            if !d[k - 1].mul(&d[k]).is_zero() {
                return Err(ComplexError::NotAComplex(lo + k as i32));
            }
        }
        Ok(ChainComplex { lo, dims, d })
    }

    /// Single nonnegative-degree constructor from boundary maps d_1..d_top.
    pub fn from_boundaries(dims: Vec<usize>, ds: Vec<SparseMatrix>) -> Result<Self, ComplexError> {
        let mut d = vec![SparseMatrix::zero(0, dims.first().copied().unwrap_or(0))];
        d.extend(ds);
        Self::new(0, dims, d)
    }

    pub fn zero(lo: i32, hi: i32) -> Self {
        let n = (hi - lo + 1).max(0) as usize;
        ChainComplex { lo, dims: vec![0; n], d: vec![SparseMatrix::zero(0, 0); n] }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    fn idx(&self, n: i32) -> Option<usize> {
        if n < self.lo || n > self.hi() {
            None
        } else {
            Some((n - self.lo) as usize)
        }
    }

    pub fn dim(&self, n: i32) -> usize {
        self.idx(n).map_or(0, |k| self.dims[k])
    }

    /// d_n : C_n → C_{n-1}, zero outside the stored range.
    pub fn boundary(&self, n: i32) -> SparseMatrix {
        match self.idx(n) {
            Some(k) if k > 0 => self.d[k].clone(),
            _ => SparseMatrix::zero(self.dim(n - 1), self.dim(n)),
        }
    }

    fn boundary_rank(&self, n: i32) -> usize {
        match self.idx(n) {
            Some(k) if k > 0 => rank(&self.d[k]),
            _ => 0,
        }
    }

    /// dim ker d_n - rank d_{n+1}.
    pub fn homology(&self, n: i32) -> Result<usize, ComplexError> {
        if self.idx(n).is_none() {
            return Err(ComplexError::DegreeOutOfRange(n));
        }
        Ok(self.dim(n) - self.boundary_rank(n) - self.boundary_rank(n + 1))
    }

    /// Homology dimensions for every stored degree, ranks in parallel.
    pub fn homology_table(&self) -> Vec<(i32, usize)> {
        let ranks: Vec<usize> =
            (0..self.dims.len() + 1).into_par_iter().map(|k| self.boundary_rank(self.lo + k as i32)).collect();
        (0..self.dims.len()).map(|k| (self.lo + k as i32, self.dims[k] - ranks[k] - ranks[k + 1])).collect()
    }

    pub fn cycles(&self, n: i32) -> Subspace {
        kernel_basis(&self.boundary(n))
    }

    pub fn boundaries(&self, n: i32) -> Subspace {
        Subspace::image(&self.boundary(n + 1))
    }

    /// H_n as a subquotient of C_n.
    pub fn homology_space(&self, n: i32) -> Result<Subquotient, LaError> {
        Subquotient::new(&self.cycles(n), &self.boundaries(n))
    }

    /// Subcomplex spanned by the given subspaces, in their echelon coordinates.
    pub fn restrict(&self, subs: &[Subspace]) -> Result<ChainComplex, ComplexError> {
        self.check_len(subs.len())?;
        let dims: Vec<usize> = subs.iter().map(|s| s.dim()).collect();
        let mut d = vec![SparseMatrix::zero(0, dims[0])];
        for k in 1..dims.len() {
            let n = self.lo + k as i32;
            let dn = self.boundary(n);
            let mut cols = Vec::with_capacity(dims[k]);
            for v in subs[k].basis() {
                let img = dn.mul_vec(v);
                cols.push(subs[k - 1].coords(&img).ok_or(ComplexError::NotASubcomplex(n))?);
            }
            d.push(SparseMatrix::from_columns(dims[k - 1], cols));
        }
        ChainComplex::new(self.lo, dims, d)
    }

    /// Quotient complex C / K for a subcomplex K.
    pub fn quotient(&self, subs: &[Subspace]) -> Result<(ChainComplex, Vec<Quotient>), ComplexError> {
        self.check_len(subs.len())?;
        let qs: Vec<Quotient> = subs.iter().map(|s| Quotient::new(s.clone())).collect();
        let dims: Vec<usize> = qs.iter().map(|q| q.dim()).collect();
        let mut d = vec![SparseMatrix::zero(0, dims[0])];
        for k in 1..dims.len() {
            let n = self.lo + k as i32;
            let dn = self.boundary(n);
            for r in subs[k].basis() {
                if !subs[k - 1].contains(&dn.mul_vec(r)) {
                    return Err(ComplexError::NotASubcomplex(n));
                }
            }
            d.push(qs[k].induce(&qs[k - 1], |i| dn.col(i).clone()));
        }
        Ok((ChainComplex::new(self.lo, dims, d)?, qs))
    }

    fn check_len(&self, n: usize) -> Result<(), ComplexError> {
        if n != self.dims.len() {
            return Err(ComplexError::Shape(format!("{} subspaces for {} degrees", n, self.dims.len())));
        }
        Ok(())
    }

    /// Degree shift: result_n = self_{n-k}.
    pub fn shift(&self, k: i32) -> ChainComplex {
        ChainComplex { lo: self.lo + k, dims: self.dims.clone(), d: self.d.clone() }
    }

    pub fn dims(&self) -> Vec<(i32, usize)> {
        (0..self.dims.len()).map(|k| (self.lo + k as i32, self.dims[k])).collect()
    }

    /// Checks that per-degree maps f_n : self_n → other_n commute with d.
    pub fn is_chain_map(&self, other: &ChainComplex, f: &[SparseMatrix]) -> bool {
        for (k, fk) in f.iter().enumerate() {
            let n = self.lo + k as i32;
            if k == 0 {
                continue;
            }
            let lhs = other.boundary(n).mul(fk);
            let rhs = f[k - 1].mul(&self.boundary(n));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Rank of the map induced on H_n by a chain map component f_n.
    pub fn induced_homology_rank(&self, other: &ChainComplex, n: i32, f_n: &SparseMatrix) -> usize {
        let z = self.cycles(n);
        let b_other = other.boundaries(n);
        let img = z.map(f_n);
        img.sum(&b_other).dim() - b_other.dim()
    }

    pub fn to_report(&self) -> ComplexReport {
        ComplexReport { dims: self.dims(), homology: self.homology_table() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub dims: Vec<(i32, usize)>,
    pub homology: Vec<(i32, usize)>,
}

/// The two-term complex 0 → Q^a --m--> Q^b → 0 in degrees 1, 0.
pub fn two_term(m: SparseMatrix) -> ChainComplex {
    let dims = vec![m.nrows(), m.ncols()];
    ChainComplex::from_boundaries(dims, vec![m]).expect("two-term complex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::SparseVec;

    #[test]
    fn homology_examples() {
        let z = ChainComplex::zero(0, 2);
        assert_eq!(z.homology(1).unwrap(), 0);
        let id = two_term(SparseMatrix::identity(1));
        assert_eq!(id.homology_table(), vec![(0, 0), (1, 0)]);
        let zero = two_term(SparseMatrix::zero(1, 1));
        assert_eq!(zero.homology_table(), vec![(0, 1), (1, 1)]);
        assert_eq!(zero.homology(5), Err(ComplexError::DegreeOutOfRange(5)));
    }

    #[test]
    fn rejects_non_complex() {
        let one = SparseMatrix::identity(1);
        let r = ChainComplex::from_boundaries(vec![1, 1, 1], vec![one.clone(), one]);
        assert_eq!(r, Err(ComplexError::NotAComplex(2)));
    }

    #[test]
    fn restrict_and_quotient() {
        // Q --(1,0)^T--> Q^2; subcomplex spanned by degree-1 e0 and degree-0 e0
        let d = SparseMatrix::from_i64(&[&[1], &[0]]);
        let c = ChainComplex::from_boundaries(vec![2, 1], vec![d]).unwrap();
        let subs = vec![Subspace::span_owned(2, vec![SparseVec::unit(0)]), Subspace::full(1)];
        let k = c.restrict(&subs).unwrap();
        assert_eq!(k.homology_table(), vec![(0, 0), (1, 0)]);
        let (qc, _) = c.quotient(&subs).unwrap();
        assert_eq!(qc.homology_table(), vec![(0, 1), (1, 0)]);
        let bad = vec![Subspace::zero(2), Subspace::full(1)];
        assert_eq!(c.restrict(&bad), Err(ComplexError::NotASubcomplex(1)));
    }

    #[test]
    fn induced_rank_of_identity() {
        let c = two_term(SparseMatrix::zero(1, 2));
        let id0 = SparseMatrix::identity(1);
        assert_eq!(c.induced_homology_rank(&c, 0, &id0), 1);
    }
}
