//! Spectral sequence of a bounded filtered chain complex.
//!
//! Descending filtration F_p with d(F_p) ⊆ F_p. Pages are computed from
//! Z_r^p = F_p ∩ d⁻¹F_{p+r} and E_r^p = Z_r^p / (Z_{r-1}^{p+1} + dZ_{r-1}^{p-r+1}),
//! with Z_{-1}^p = F_p, and d_r : E_r^{p,n} → E_r^{p+r,n-1}.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactla::{SparseMatrix, Subquotient, Subspace};

use super::{ChainComplex, ComplexError};

#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: ChainComplex,
    p_min: i32,
    /// levels[k][i] = F_{p_min + k} in degree lo + i; F_p is everything for
    /// p < p_min and zero past the last stored level. Pages are reported for
    /// p in the stored range, so levels[0] should be the whole complex.
    levels: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    pub fn new(complex: ChainComplex, p_min: i32, levels: Vec<Vec<Subspace>>) -> Result<Self, ComplexError> {
        let nd = complex.hi() - complex.lo() + 1;
        for lvl in &levels {
            if lvl.len() != nd as usize {
                return Err(ComplexError::Shape("one subspace per degree at every level".into()));
            }
        }
        let f = FilteredComplex { complex, p_min, levels };
        for n in f.complex.lo()..=f.complex.hi() {
            for k in 0..f.levels.len() {
                let p = p_min + k as i32;
                if !f.level(p, n).is_subspace_of(&f.level(p - 1, n)) {
                    return Err(ComplexError::Shape(format!("filtration not descending at p = {p}")));
                }
                if !f.level(p, n).map(&f.complex.boundary(n)).is_subspace_of(&f.level(p, n - 1)) {
                    return Err(ComplexError::FiltrationNotPreserved(n));
                }
            }
        }
        Ok(f)
    }

    /// From an increasing filtration G_0 ⊆ G_1 ⊆ ... ⊆ G_s = C, reindexed
    /// as F_{-s} = G_s.
    pub fn from_increasing(complex: ChainComplex, g: Vec<Vec<Subspace>>) -> Result<Self, ComplexError> {
        let s = g.len() as i32 - 1;
        let levels: Vec<Vec<Subspace>> = g.into_iter().rev().collect();
        Self::new(complex, -s, levels)
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn p_range(&self) -> (i32, i32) {
        (self.p_min, self.p_min + self.levels.len() as i32 - 1)
    }

    /// F_p in degree n.
    pub fn level(&self, p: i32, n: i32) -> Subspace {
        let dim = self.complex.dim(n);
        if n < self.complex.lo() || n > self.complex.hi() {
            return Subspace::zero(dim);
        }
        let i = (n - self.complex.lo()) as usize;
        if p < self.p_min {
            return Subspace::full(dim);
        }
        match self.levels.get((p - self.p_min) as usize) {
            Some(l) => l[i].clone(),
            None => Subspace::zero(dim),
        }
    }

    /// Z_r^p in degree n (r ≥ -1).
    fn z(&self, r: i32, p: i32, n: i32) -> Subspace {
        if r < 0 {
            return self.level(p, n);
        }
        self.level(p, n).preimage_within(&self.complex.boundary(n), &self.level(p + r, n - 1))
    }

    fn e_space(&self, r: i32, p: i32, n: i32) -> Result<Subquotient, ComplexError> {
        let z = self.z(r, p, n);
        let a = self.z(r - 1, p + 1, n);
        let b = self.z(r - 1, p - r + 1, n + 1).map(&self.complex.boundary(n + 1));
        Ok(Subquotient::new(&z, &a.sum(&b))?)
    }

    /// Pages E_0 .. E_{pages-1}, followed by E_∞.
    pub fn spectral_sequence(&self, pages: usize) -> Result<Vec<SpectralPage>, ComplexError> {
        let (pl, ph) = self.p_range();
        let stable = (ph - pl + 2).max(1);
        let mut out = Vec::new();
        let mut rs: Vec<i32> = (0..pages as i32).collect();
        rs.push(stable.max(pages as i32));
        for (idx, &r) in rs.iter().enumerate() {
            let mut spaces = BTreeMap::new();
            for n in self.complex.lo()..=self.complex.hi() {
                for p in pl..=ph {
                    let e = self.e_space(r, p, n)?;
                    spaces.insert((p, n), e);
                }
            }
            let mut table = Vec::new();
            let mut diffs = Vec::new();
            for (&(p, n), e) in &spaces {
                table.push(Entry { p, q: n - p, dim: e.dim() });
                if let Some(dst) = spaces.get(&(p + r, n - 1)) {
                    let m = e.induced(dst, &self.complex.boundary(n))?;
                    diffs.push(Differential { p, q: n - p, matrix: m });
                }
            }
            out.push(SpectralPage {
                r: if idx == pages { None } else { Some(r as usize) },
                table,
                differentials: diffs,
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub p: i32,
    pub q: i32,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Differential {
    pub p: i32,
    pub q: i32,
    pub matrix: SparseMatrix,
}

/// One page; r = None marks E_∞.
#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub r: Option<usize>,
    pub table: Vec<Entry>,
    pub differentials: Vec<Differential>,
}

impl SpectralPage {
    pub fn dim(&self, p: i32, q: i32) -> usize {
        self.table.iter().find(|e| e.p == p && e.q == q).map_or(0, |e| e.dim)
    }

    /// Σ_p dim E_{p, n-p}.
    pub fn total(&self, n: i32) -> usize {
        self.table.iter().filter(|e| e.p + e.q == n).map(|e| e.dim).sum()
    }

    /// d_r ∘ d_r = 0 for every composable pair.
    pub fn differentials_square_to_zero(&self, r: i32) -> bool {
        self.differentials.iter().all(|d1| {
            match self.differentials.iter().find(|d2| d2.p == d1.p + r && d2.q == d1.q - r - 1) {
                Some(d2) => d2.matrix.mul(&d1.matrix).is_zero(),
                None => true,
            }
        })
    }
}

/// Dimensions of the homology of a page under its differentials, keyed by
/// (p, q); used to confirm that E_{r+1} = H(E_r, d_r).
pub fn page_homology(page: &SpectralPage, r: i32) -> Vec<Entry> {
    let rank_of = |p: i32, q: i32| {
        page.differentials.iter().find(|d| d.p == p && d.q == q).map_or(0, |d| crate::exactla::rank(&d.matrix))
    };
    page.table
        .iter()
        .map(|e| {
            let out = rank_of(e.p, e.q);
            let inc = rank_of(e.p - r, e.q + r + 1);
            Entry { p: e.p, q: e.q, dim: e.dim - out - inc }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::SparseVec;

    #[test]
    fn trivial_filtration() {
        let d = SparseMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let c = ChainComplex::from_boundaries(vec![2, 2], vec![d]).unwrap();
        let f = FilteredComplex::new(c.clone(), 0, vec![vec![Subspace::full(2), Subspace::full(2)]]).unwrap();
        let pages = f.spectral_sequence(3).unwrap();
        let h = c.homology_table();
        for n in 0..2 {
            assert_eq!(pages[1].total(n), h[n as usize].1);
            assert_eq!(pages.last().unwrap().total(n), h[n as usize].1);
        }
        assert!(pages[1].differentials.iter().all(|d| d.matrix.is_zero()));
    }

    #[test]
    fn two_step_filtration() {
        // d(e2) = e1 from degree 1 to degree 0; F_1 = span(e1) in degree 0 only
        let d = SparseMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let c = ChainComplex::from_boundaries(vec![2, 2], vec![d]).unwrap();
        let e1 = Subspace::span_owned(2, vec![SparseVec::unit(0)]);
        let lv = vec![vec![Subspace::full(2), Subspace::full(2)], vec![e1, Subspace::zero(2)]];
        let f = FilteredComplex::new(c.clone(), 0, lv).unwrap();
        let pages = f.spectral_sequence(3).unwrap();
        assert_eq!((pages[1].dim(0, 1), pages[1].dim(0, 0), pages[1].dim(1, -1)), (2, 1, 1));
        assert!(pages[1].differentials.iter().any(|d| !d.matrix.is_zero()));
        assert!(pages[1].differentials_square_to_zero(1));
        assert_eq!(page_homology(&pages[1], 1), pages[2].table);
        let inf = pages.last().unwrap();
        assert_eq!((inf.total(0), inf.total(1)), (1, 1));
        assert_eq!(c.homology_table(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn rejects_unfiltered() {
        let d = SparseMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let c = ChainComplex::from_boundaries(vec![2, 2], vec![d]).unwrap();
        let bad = Subspace::span_owned(2, vec![SparseVec::unit(1)]);
        let r = FilteredComplex::new(c, 1, vec![vec![Subspace::zero(2), bad.clone()]]);
        assert!(matches!(r, Err(ComplexError::FiltrationNotPreserved(1))));
    }
}
