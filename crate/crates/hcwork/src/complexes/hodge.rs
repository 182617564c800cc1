//! Hodge decomposition of the normalized Hochschild and cyclic complexes of
//! a graded-commutative differential graded algebra, via the eigenspaces of
//! the shuffle operator λ² = Σ_k sh_{k,n-k} (eigenvalue 2^p on weight p).
//!
//! Chains are a_0[a_1|...|a_n] with a_0 ∈ A and a_i ∈ A/Q·1, graded by the
//! total degree n + Σ|a_i|. Bar entries carry the suspended degree |a_i| + 1.

use std::collections::HashMap;

use num_traits::Zero;

use crate::algebra::FinAlgebra;
use crate::exactla::{kernel_basis, q, SparseMatrix, SparseVec, Subspace, Q};

use super::{ChainComplex, ComplexError, MixedComplex};

/// A finite-dimensional graded-commutative algebra with unit at basis index
/// 0 and a derivation of degree -1.
#[derive(Clone, Debug)]
pub struct GradedCommAlgebra {
    alg: FinAlgebra,
    deg: Vec<usize>,
    diff: SparseMatrix,
}

fn parity(k: usize) -> Q {
    if k.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

impl GradedCommAlgebra {
    pub fn new(alg: FinAlgebra, deg: Vec<usize>, diff: SparseMatrix) -> Result<Self, ComplexError> {
        let n = alg.dim();
        if deg.len() != n || diff.nrows() != n || diff.ncols() != n {
            return Err(ComplexError::Shape("degree list or differential".into()));
        }
        if alg.unit() != Some(&SparseVec::unit(0)) || deg[0] != 0 {
            return Err(ComplexError::Shape("unit must be basis element 0 in degree 0".into()));
        }
        let g = GradedCommAlgebra { alg, deg, diff };
        for i in 0..n {
            for j in 0..n {
                let ij = g.alg.basis_product(i, j);
                if ij.iter().any(|(k, _)| g.deg[*k] != g.deg[i] + g.deg[j]) {
                    return Err(ComplexError::Shape(format!("product ({i},{j}) not homogeneous")));
                }
                let ji = g.alg.basis_product(j, i).scale(&parity(g.deg[i] * g.deg[j]));
                if *ij != ji {
                    return Err(ComplexError::NotCommutative);
                }
                let lhs = g.diff.mul_vec(ij);
                let rhs = g
                    .alg
                    .mul(g.diff.col(i), &SparseVec::unit(j))
                    .add(&g.alg.mul(&SparseVec::unit(i), g.diff.col(j)).scale(&parity(g.deg[i])));
                if lhs != rhs {
                    return Err(ComplexError::Shape(format!("differential is not a derivation at ({i},{j})")));
                }
            }
            if g.diff.col(i).iter().any(|(k, _)| g.deg[*k] + 1 != g.deg[i]) {
                return Err(ComplexError::Shape("differential must have degree -1".into()));
            }
        }
        if !g.diff.mul(&g.diff).is_zero() {
            return Err(ComplexError::NotAComplex(0));
        }
        Ok(g)
    }

    /// A commutative algebra in degree 0, rebased so that the unit is the
    /// first basis vector.
    pub fn ungraded(a: &FinAlgebra) -> Result<Self, ComplexError> {
        if !a.is_commutative() {
            return Err(ComplexError::NotCommutative);
        }
        let a = unit_first(a)?;
        let n = a.dim();
        Self::new(a, vec![0; n], SparseMatrix::zero(n, n))
    }

    /// Λ = R ⊕ S[1] for an ideal S ⊆ R, with S·S = 0 and ∂ the inclusion
    /// S → R. The ideal is given by spanning vectors in R.
    pub fn square_zero(r: &FinAlgebra, ideal: &[SparseVec]) -> Result<Self, ComplexError> {
        if !r.is_commutative() {
            return Err(ComplexError::NotCommutative);
        }
        let r = unit_first(r)?;
        let dr = r.dim();
        let s = Subspace::span(dr, ideal.iter());
        let ds = s.dim();
        let n = dr + ds;
        let mut table = vec![SparseVec::new(); n * n];
        for i in 0..dr {
            for j in 0..dr {
                table[i * n + j] = r.basis_product(i, j).clone();
            }
            for k in 0..ds {
                let prod = r.mul(&SparseVec::unit(i), &s.basis()[k]);
                let c = s.coords(&prod).ok_or_else(|| ComplexError::Shape("generators do not span an ideal".into()))?;
                let c = c.shifted(dr);
                table[i * n + dr + k] = c.clone();
                table[(dr + k) * n + i] = c;
            }
        }
        let alg = FinAlgebra::new(n, Some(SparseVec::unit(0)), table)?;
        let mut deg = vec![0; dr];
        deg.extend(std::iter::repeat_n(1, ds));
        let cols = (0..n).map(|k| if k < dr { SparseVec::new() } else { s.basis()[k - dr].clone() }).collect();
        Self::new(alg, deg, SparseMatrix::from_columns(n, cols))
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.alg
    }

    pub fn degree(&self, k: usize) -> usize {
        self.deg[k]
    }
}

/// Rebases a unital algebra so that the unit is basis vector 0.
pub fn unit_first(a: &FinAlgebra) -> Result<FinAlgebra, ComplexError> {
    let u = a.unit().ok_or_else(|| ComplexError::Shape("algebra must be unital".into()))?.clone();
    if u == SparseVec::unit(0) {
        return Ok(a.clone());
    }
    let (j, uj) = u.iter().next().cloned().expect("nonzero unit");
    let n = a.dim();
    // new basis: f_0 = u, f_k = e_{old(k)} for the remaining indices
    let old: Vec<usize> = (0..n).filter(|&k| k != j).collect();
    let to_new = |v: &SparseVec| -> SparseVec {
        let c = v.get(j) / &uj;
        let mut pairs = vec![(0, c.clone())];
        for (k, &o) in old.iter().enumerate() {
            pairs.push((k + 1, v.get(o) - &c * u.get(o)));
        }
        SparseVec::from_pairs(pairs)
    };
    let elem = |k: usize| if k == 0 { u.clone() } else { SparseVec::unit(old[k - 1]) };
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            table.push(to_new(&a.mul(&elem(x), &elem(y))));
        }
    }
    Ok(FinAlgebra::new(n, Some(SparseVec::unit(0)), table)?)
}

/// Normalized chains of a graded-commutative DGA up to a total degree, with
/// b (including the internal differential), B and the weight spaces.
#[derive(Clone, Debug)]
pub struct HodgeComplex {
    top: usize,
    basis: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    mixed: MixedComplex,
    weights: Vec<Vec<Subspace>>,
}

type Terms = Vec<(Vec<usize>, Q)>;

struct Ops<'a> {
    g: &'a GradedCommAlgebra,
}

impl<'a> Ops<'a> {
    fn sdeg(&self, k: usize) -> usize {
        self.g.deg[k] + 1
    }

    fn total(&self, t: &[usize]) -> usize {
        self.g.deg[t[0]] + t[1..].iter().map(|&k| self.sdeg(k)).sum::<usize>()
    }

    /// Pushes t with slot `slot` replaced by each entry of v; bar slots drop
    /// the unit component.
    fn push_sub(&self, out: &mut Terms, t: &[usize], slot: usize, v: &SparseVec, c: &Q) {
        for (k, x) in v.iter() {
            if slot > 0 && *k == 0 {
                continue;
            }
            let mut tt = t.to_vec();
            tt[slot] = *k;
            out.push((tt, c * x));
        }
    }

    /// ε_i = |a_0| + Σ_{1 ≤ j ≤ i} (|a_j| + 1).
    fn eps(&self, t: &[usize], i: usize) -> usize {
        self.g.deg[t[0]] + t[1..=i].iter().map(|&k| self.sdeg(k)).sum::<usize>()
    }

    fn boundary(&self, t: &[usize]) -> Terms {
        let n = t.len() - 1;
        let mut out = Vec::new();
        self.push_sub(&mut out, t, 0, self.g.diff.col(t[0]), &q(1));
        for i in 1..=n {
            let c = -parity(self.eps(t, i - 1));
            self.push_sub(&mut out, t, i, self.g.diff.col(t[i]), &c);
        }
        for i in 0..n {
            let c = parity(self.eps(t, i));
            let prod = self.g.alg.basis_product(t[i], t[i + 1]);
            let mut tt: Vec<usize> = t[..=i].to_vec();
            tt.extend_from_slice(&t[i + 2..]);
            self.push_sub(&mut out, &tt, i, prod, &c);
        }
        if n >= 1 {
            let c = -parity(self.sdeg(t[n]) * self.eps(t, n - 1));
            let prod = self.g.alg.basis_product(t[n], t[0]);
            let tt: Vec<usize> = t[..n].to_vec();
            self.push_sub(&mut out, &tt, 0, prod, &c);
        }
        out
    }

    fn connes(&self, t: &[usize]) -> Terms {
        if t[0] == 0 {
            return vec![];
        }
        let n = t.len() - 1;
        let mut out = Vec::new();
        for i in 0..=n {
            let a: usize = t[..i].iter().map(|&k| self.sdeg(k)).sum();
            let b: usize = t[i..].iter().map(|&k| self.sdeg(k)).sum();
            let mut tt = vec![0];
            tt.extend_from_slice(&t[i..]);
            tt.extend_from_slice(&t[..i]);
            out.push((tt, parity(a * b)));
        }
        out
    }

    /// Σ over all (k, n-k) shuffles of the bar entries with Koszul signs.
    fn shuffle_sum(&self, t: &[usize]) -> Terms {
        let n = t.len() - 1;
        let mut out = Vec::new();
        for k in 0..=n {
            for mask in masks(n, k) {
                let (mut first, mut second) = (1..=k, k + 1..=n);
                let mut tt = vec![t[0]];
                let mut sign = 0usize;
                let mut pending_first: usize = (1..=k).map(|j| self.sdeg(t[j])).sum();
                for &from_first in &mask {
                    if from_first {
                        let j = first.next().unwrap();
                        pending_first -= self.sdeg(t[j]);
                        tt.push(t[j]);
                    } else {
                        let j = second.next().unwrap();
                        sign += pending_first * self.sdeg(t[j]);
                        tt.push(t[j]);
                    }
                }
                out.push((tt, parity(sign)));
            }
        }
        out
    }
}

/// All arrangements of k trues among n positions.
fn masks(n: usize, k: usize) -> Vec<Vec<bool>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    if k > 0 {
        for mut m in masks(n - 1, k - 1) {
            m.insert(0, true);
            out.push(m);
        }
    }
    if k < n {
        for mut m in masks(n - 1, k) {
            m.insert(0, false);
            out.push(m);
        }
    }
    out
}

impl HodgeComplex {
    /// Chains of total degree 0..=top.
    pub fn new(g: &GradedCommAlgebra, top: usize) -> Result<Self, ComplexError> {
        let ops = Ops { g };
        let d = g.alg.dim();
        let mut basis: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
        for n in 0..=top {
            let mut radices = vec![d];
            radices.extend(std::iter::repeat_n(d - 1, n));
            let sp = super::tensor::TensorSpace::new(radices);
            for idx in 0..sp.size() {
                let mut t = sp.digits(idx);
                for x in t[1..].iter_mut() {
                    *x += 1;
                }
                let tot = ops.total(&t);
                if tot <= top {
                    basis[tot].push(t);
                }
            }
        }
        for b in basis.iter_mut() {
            b.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
        }
        let index: Vec<HashMap<Vec<usize>, usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
        let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();
        let assemble = |src: usize, dst: usize, op: &dyn Fn(&[usize]) -> Terms| -> SparseMatrix {
            let cols = basis[src]
                .iter()
                .map(|t| {
                    SparseVec::from_pairs(
                        op(t).into_iter().filter(|(_, c)| !c.is_zero()).map(|(tt, c)| (index[dst][&tt], c)),
                    )
                })
                .collect();
            SparseMatrix::from_columns(dims[dst], cols)
        };
        let mut b = vec![SparseMatrix::zero(0, dims[0])];
        for k in 1..=top {
            b.push(assemble(k, k - 1, &|t| ops.boundary(t)));
        }
        let bb: Vec<SparseMatrix> = (0..top).map(|k| assemble(k, k + 1, &|t| ops.connes(t))).collect();
        let mixed = MixedComplex::new(dims.clone(), b, bb)?;
        let mut weights = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let lam = assemble(k, k, &|t| ops.shuffle_sum(t));
            let ws: Vec<Subspace> = (0..=k)
                .map(|p| kernel_basis(&lam.sub(&SparseMatrix::identity(dims[k]).scale(&q(1i64 << p)))))
                .collect();
            if ws.iter().map(|w| w.dim()).sum::<usize>() != dims[k] {
                return Err(ComplexError::Shape(format!("shuffle operator not diagonalizable in degree {k}")));
            }
            weights.push(ws);
        }
        Ok(HodgeComplex { top, basis, index, mixed, weights })
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn mixed(&self) -> &MixedComplex {
        &self.mixed
    }

    pub fn basis(&self, k: usize) -> &[Vec<usize>] {
        &self.basis[k]
    }

    pub fn index_of(&self, k: usize, t: &[usize]) -> Option<usize> {
        self.index[k].get(t).copied()
    }

    /// C^(p) in total degree k (zero for p > k).
    pub fn weight(&self, k: usize, p: usize) -> Subspace {
        self.weights[k].get(p).cloned().unwrap_or_else(|| Subspace::zero(self.mixed.dims()[k]))
    }

    /// dim C^(p)_k for p = 0..=k.
    pub fn weight_dims(&self, k: usize) -> Vec<usize> {
        self.weights[k].iter().map(|w| w.dim()).collect()
    }

    /// (C^(p), b) in degrees 0..=top.
    pub fn hochschild_weight(&self, p: usize) -> Result<ChainComplex, ComplexError> {
        let subs: Vec<Subspace> = (0..=self.top).map(|k| self.weight(k, p)).collect();
        self.mixed.hochschild()?.restrict(&subs)
    }

    /// Total complex of weight p: degree k is ⊕_j C^(p-j)_{k-2j}.
    pub fn cyclic_weight(&self, p: usize) -> Result<ChainComplex, ComplexError> {
        let tot = self.mixed.cyclic_total(self.top)?;
        let subs: Vec<Subspace> = tot
            .blocks
            .iter()
            .enumerate()
            .map(|(k, bl)| {
                let amb = tot.complex.dim(k as i32);
                let mut vs = Vec::new();
                for &(j, n, off) in bl {
                    if j <= p {
                        vs.extend(self.weight(n, p - j).basis().iter().map(|v| v.shifted(off)));
                    }
                }
                Subspace::span_owned(amb, vs)
            })
            .collect();
        tot.complex.restrict(&subs)
    }

    /// HH^(p)_n for n = 0..top-1.
    pub fn hh_weight_table(&self, p: usize) -> Result<Vec<usize>, ComplexError> {
        let h = self.hochschild_weight(p)?.homology_table();
        Ok(h.into_iter().take(self.top).map(|x| x.1).collect())
    }

    /// HC^(p)_n for n = 0..top-1.
    pub fn hc_weight_table(&self, p: usize) -> Result<Vec<usize>, ComplexError> {
        let h = self.cyclic_weight(p)?.homology_table();
        Ok(h.into_iter().take(self.top).map(|x| x.1).collect())
    }

    /// Matrix of the shuffle operator in total degree k.
    pub fn lambda2(&self, g: &GradedCommAlgebra, k: usize) -> SparseMatrix {
        let ops = Ops { g };
        let cols = self.basis[k]
            .iter()
            .map(|t| SparseVec::from_pairs(ops.shuffle_sum(t).into_iter().map(|(tt, c)| (self.index[k][&tt], c))))
            .collect();
        SparseMatrix::from_columns(self.mixed.dims()[k], cols)
    }
}

/// Eigenspace decomposition of the normalized complex of a commutative
/// algebra: one sub chain complex (C^(p), b) per weight p = 0..=max.
pub fn hodge_decompose(a: &FinAlgebra, max_degree: usize) -> Result<Vec<ChainComplex>, ComplexError> {
    let g = GradedCommAlgebra::ungraded(a)?;
    let h = HodgeComplex::new(&g, max_degree)?;
    (0..=max_degree).map(|p| h.hochschild_weight(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::hochschild::absolute_cyclic_module;

    fn dual() -> FinAlgebra {
        FinAlgebra::truncated_poly(2)
    }

    #[test]
    fn normalized_matches_unnormalized() {
        for m in [2, 3] {
            let a = FinAlgebra::truncated_poly(m);
            let h = HodgeComplex::new(&GradedCommAlgebra::ungraded(&a).unwrap(), 4).unwrap();
            let c = absolute_cyclic_module(&a, 4).unwrap().mixed().unwrap();
            assert_eq!(h.mixed().hh_table().unwrap(), c.hh_table().unwrap());
            assert_eq!(h.mixed().hc_table().unwrap(), c.hc_table().unwrap());
        }
    }

    #[test]
    fn weights_are_complete_and_bounded() {
        let h = HodgeComplex::new(&GradedCommAlgebra::ungraded(&dual()).unwrap(), 4).unwrap();
        for k in 0..=4 {
            let w = h.weight_dims(k);
            assert_eq!(w.iter().sum::<usize>(), h.mixed().dims()[k]);
            if k >= 1 {
                assert_eq!(w[0], 0);
            }
        }
    }

    #[test]
    fn b_and_connes_respect_weights() {
        let g = GradedCommAlgebra::ungraded(&FinAlgebra::truncated_poly(3)).unwrap();
        let h = HodgeComplex::new(&g, 4).unwrap();
        for k in 1..=4 {
            let l = h.lambda2(&g, k);
            let l1 = h.lambda2(&g, k - 1);
            assert_eq!(h.mixed().b(k).mul(&l), l1.mul(h.mixed().b(k)));
            assert_eq!(h.mixed().connes_b(k - 1).mul(&l1).scale(&q(2)), l.mul(h.mixed().connes_b(k - 1)));
        }
    }

    #[test]
    fn dual_numbers_hh1_in_weight_one() {
        let h = HodgeComplex::new(&GradedCommAlgebra::ungraded(&dual()).unwrap(), 3).unwrap();
        assert_eq!(h.hh_weight_table(1).unwrap()[1], 1);
        assert_eq!(h.hh_weight_table(0).unwrap()[1], 0);
        assert_eq!(h.hh_weight_table(2).unwrap()[1], 0);
    }

    #[test]
    fn square_zero_model_is_quasi_isomorphic() {
        // Λ = R ⊕ S[1] is a model of R/S = Q
        for m in [2, 3] {
            let r = FinAlgebra::truncated_poly(m);
            let s: Vec<SparseVec> = (1..m).map(SparseVec::unit).collect();
            let g = GradedCommAlgebra::square_zero(&r, &s).unwrap();
            let h = HodgeComplex::new(&g, 4).unwrap();
            assert_eq!(h.mixed().hh_table().unwrap(), vec![1, 0, 0, 0]);
            assert_eq!(h.mixed().hc_table().unwrap(), vec![1, 0, 1, 0]);
            for k in 1..=4 {
                let (l, l1) = (h.lambda2(&g, k), h.lambda2(&g, k - 1));
                assert_eq!(h.mixed().b(k).mul(&l), l1.mul(h.mixed().b(k)));
            }
        }
    }

    #[test]
    fn rejects_noncommutative() {
        assert_eq!(GradedCommAlgebra::ungraded(&FinAlgebra::matrix_units(2)).err(), Some(ComplexError::NotCommutative));
    }

    #[test]
    fn rebasing_the_unit() {
        let a = unit_first(&FinAlgebra::diagonal(2)).unwrap();
        assert_eq!(a.unit(), Some(&SparseVec::unit(0)));
        let h = HodgeComplex::new(&GradedCommAlgebra::ungraded(&a).unwrap(), 3).unwrap();
        assert_eq!(h.mixed().hc_table().unwrap(), vec![2, 0, 2]);
    }
}
