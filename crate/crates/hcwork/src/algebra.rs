//! Finite-dimensional algebras over Q by structure constants, subalgebra
//! embeddings, bimodules, tensor products over a subalgebra and commutator
//! quotients.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{fmt_q, parse_q, q, LaError, Quotient, SparseMatrix, SparseVec, Subspace, Q};
use crate::pinj::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("structure constants are not associative at basis ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit axiom fails")]
    UnitFails,
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("action dimensions do not match: {0}")]
    ActionMismatch(String),
    #[error("map is not a unital algebra homomorphism")]
    NotAHomomorphism,
    #[error("augmentation check fails: {0}")]
    BadAugmentation(String),
    #[error("bimodule axiom fails: {0}")]
    BadBimodule(String),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error(transparent)]
    La(#[from] LaError),
}

/// Algebra with basis e_0..e_{dim-1} and e_i e_j = table[i*dim+j].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    dim: usize,
    unit: Option<SparseVec>,
    table: Vec<SparseVec>,
    labels: Vec<String>,
}

impl FinAlgebra {
    /// Validates associativity and, when present, the unit.
    pub fn new(dim: usize, unit: Option<SparseVec>, table: Vec<SparseVec>) -> Result<Self, AlgebraError> {
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        let a = FinAlgebra { dim, unit, table, labels };
        a.validate()?;
        Ok(a)
    }

    fn new_unchecked(dim: usize, unit: Option<SparseVec>, table: Vec<SparseVec>, labels: Vec<String>) -> Self {
        FinAlgebra { dim, unit, table, labels }
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        if self.table.len() != d * d {
            return Err(AlgebraError::Malformed(format!("table has {} entries, need {}", self.table.len(), d * d)));
        }
        if self.table.iter().any(|v| v.max_index().is_some_and(|m| m >= d)) {
            return Err(AlgebraError::Malformed("product index out of range".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i * d + j];
                for k in 0..d {
                    let lhs = self.mul(ij, &SparseVec::unit(k));
                    let rhs = self.mul(&SparseVec::unit(i), &self.table[j * d + k]);
                    if lhs != rhs {
                        return Err(AlgebraError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        if let Some(u) = &self.unit {
            for i in 0..d {
                let e = SparseVec::unit(i);
                if self.mul(u, &e) != e || self.mul(&e, u) != e {
                    return Err(AlgebraError::UnitFails);
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = std::collections::BTreeMap::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                for (k, c) in self.table[i * self.dim + j].iter() {
                    *acc.entry(*k).or_insert_with(Q::zero) += &ab * c;
                }
            }
        }
        SparseVec::from_btree(acc)
    }

    /// Matrix of y ↦ x y.
    pub fn left_matrix(&self, x: &SparseVec) -> SparseMatrix {
        SparseMatrix::from_columns(self.dim, (0..self.dim).map(|j| self.mul(x, &SparseVec::unit(j))).collect())
    }

    /// Matrix of y ↦ y x.
    pub fn right_matrix(&self, x: &SparseVec) -> SparseMatrix {
        SparseMatrix::from_columns(self.dim, (0..self.dim).map(|j| self.mul(&SparseVec::unit(j), x)).collect())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// The field Q.
    pub fn rationals() -> Self {
        Self::new_unchecked(1, Some(SparseVec::unit(0)), vec![SparseVec::unit(0)], vec!["1".into()])
    }

    /// Q^n with coordinate idempotents p_0..p_{n-1}.
    pub fn diagonal(n: usize) -> Self {
        let mut table = vec![SparseVec::new(); n * n];
        for i in 0..n {
            table[i * n + i] = SparseVec::unit(i);
        }
        let unit = SparseVec::from_pairs((0..n).map(|i| (i, q(1))));
        Self::new_unchecked(n, Some(unit), table, (0..n).map(|i| format!("p{i}")).collect())
    }

    /// M_n(Q) with basis index i*n+j for E_ij.
    pub fn matrix_units(n: usize) -> Self {
        Self::matrix_algebra(n, &Self::rationals())
    }

    /// M_n(C) with basis index (i*n+j)*dim(C)+k for E_ij ⊗ c_k.
    pub fn matrix_algebra(n: usize, c: &FinAlgebra) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        let dc = c.dim;
        let dim = n * n * dc;
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * dc + k;
        let mut table = vec![SparseVec::new(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for a in 0..dc {
                        for b in 0..dc {
                            let prod = c.basis_product(a, b);
                            table[idx(i, j, a) * dim + idx(j, l, b)] = prod.map_indices(|k| idx(i, l, k));
                        }
                    }
                }
            }
        }
        let unit = c.unit.as_ref().map(|u| {
            SparseVec::from_pairs((0..n).flat_map(|i| u.iter().map(move |(k, x)| (idx(i, i, *k), x.clone()))))
        });
        let labels = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..dc).map(move |k| (i, j, k))))
            .map(|(i, j, k)| if dc == 1 { format!("E{i}{j}") } else { format!("E{i}{j}*{}", c.labels[k]) })
            .collect();
        Self::new_unchecked(dim, unit, table, labels)
    }

    /// Q[x]/(x^m) with basis 1, x, .., x^{m-1}.
    pub fn truncated_poly(m: usize) -> Self {
        assert!(m >= 1);
        let mut table = vec![SparseVec::new(); m * m];
        for i in 0..m {
            for j in 0..m {
                if i + j < m {
                    table[i * m + j] = SparseVec::unit(i + j);
                }
            }
        }
        Self::new_unchecked(m, Some(SparseVec::unit(0)), table, (0..m).map(|i| format!("x^{i}")).collect())
    }

    /// The nonunital algebra Q·x with x² = 0.
    pub fn square_zero_line() -> Self {
        Self::new_unchecked(1, None, vec![SparseVec::new()], vec!["x".into()])
    }

    /// Direct product; block k occupies a contiguous index range.
    pub fn product(parts: &[FinAlgebra]) -> Self {
        let dim: usize = parts.iter().map(|a| a.dim).sum();
        let mut table = vec![SparseVec::new(); dim * dim];
        let mut off = 0;
        let mut unit = Some(SparseVec::new());
        let mut labels = Vec::new();
        for (b, a) in parts.iter().enumerate() {
            for i in 0..a.dim {
                for j in 0..a.dim {
                    table[(off + i) * dim + off + j] = a.basis_product(i, j).shifted(off);
                }
                labels.push(format!("{}[{b}]", a.labels[i]));
            }
            unit = match (unit, &a.unit) {
                (Some(u), Some(v)) => Some(u.add(&v.shifted(off))),
                _ => None,
            };
            off += a.dim;
        }
        Self::new_unchecked(dim, unit, table, labels)
    }

    /// A^n; component m of basis element k sits at index m*dim(A)+k.
    pub fn power(a: &FinAlgebra, n: usize) -> Self {
        Self::product(&vec![a.clone(); n])
    }

    /// A ⊗ B, index i*dim(B)+j.
    pub fn tensor(a: &FinAlgebra, b: &FinAlgebra) -> Self {
        let (da, db) = (a.dim, b.dim);
        let dim = da * db;
        let mut table = vec![SparseVec::new(); dim * dim];
        for i in 0..da {
            for j in 0..db {
                for k in 0..da {
                    for l in 0..db {
                        let mut e = Vec::new();
                        for (x, c) in a.basis_product(i, k).iter() {
                            for (y, d) in b.basis_product(j, l).iter() {
                                e.push((x * db + y, c * d));
                            }
                        }
                        table[(i * db + j) * dim + k * db + l] = SparseVec::from_sorted(e);
                    }
                }
            }
        }
        let unit = match (&a.unit, &b.unit) {
            (Some(u), Some(v)) => {
                let mut e = Vec::new();
                for (x, c) in u.iter() {
                    for (y, d) in v.iter() {
                        e.push((x * db + y, c * d));
                    }
                }
                Some(SparseVec::from_sorted(e))
            }
            _ => None,
        };
        let labels = (0..da)
            .flat_map(|i| (0..db).map(move |j| (i, j)))
            .map(|(i, j)| format!("{}*{}", a.labels[i], b.labels[j]))
            .collect();
        Self::new_unchecked(dim, unit, table, labels)
    }

    /// A / J for a two-sided ideal J given by spanning vectors, on the
    /// quotient basis of lifted original basis elements.
    pub fn quotient(&self, ideal: &[SparseVec]) -> Result<(FinAlgebra, Quotient), AlgebraError> {
        let sub = Subspace::span(self.dim, ideal.iter());
        for v in sub.basis() {
            for k in 0..self.dim {
                let a = SparseVec::unit(k);
                if !sub.contains(&self.mul(&a, v)) || !sub.contains(&self.mul(v, &a)) {
                    return Err(AlgebraError::Malformed("not a two-sided ideal".into()));
                }
            }
        }
        let qt = Quotient::new(sub);
        let lifts = qt.lifts().to_vec();
        let mut table = Vec::with_capacity(lifts.len() * lifts.len());
        for &i in &lifts {
            for &j in &lifts {
                table.push(qt.project(self.basis_product(i, j)));
            }
        }
        let unit = self.unit.as_ref().map(|u| qt.project(u));
        let labels = lifts.iter().map(|&i| self.labels[i].clone()).collect();
        let alg = FinAlgebra::new(qt.dim(), unit, table)?.with_labels(labels);
        Ok((alg, qt))
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            dim: self.dim,
            unit: self.unit.as_ref().map(|u| u.to_dense(self.dim).iter().map(fmt_q).collect()),
            table: self.table.iter().map(|v| v.iter().map(|(k, c)| (*k, fmt_q(c))).collect()).collect(),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self, AlgebraError> {
        let unit = match &j.unit {
            Some(u) => {
                if u.len() != j.dim {
                    return Err(AlgebraError::Malformed("unit has wrong length".into()));
                }
                let vals: Result<Vec<Q>, LaError> = u.iter().map(|s| parse_q(s)).collect();
                Some(SparseVec::from_dense(&vals?))
            }
            None => None,
        };
        let mut table = Vec::with_capacity(j.table.len());
        for entry in &j.table {
            let mut pairs = Vec::new();
            for (k, c) in entry {
                pairs.push((*k, parse_q(c)?));
            }
            table.push(SparseVec::from_pairs(pairs));
        }
        Self::new(j.dim, unit, table)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    pub dim: usize,
    pub unit: Option<Vec<String>>,
    pub table: Vec<Vec<(usize, String)>>,
}

/// A unital embedding ι: small → big, optionally with a retraction π that is
/// a map of left big-modules.
#[derive(Clone, Debug)]
pub struct SubalgebraEmbedding {
    pub small: FinAlgebra,
    pub big: FinAlgebra,
    pub iota: SparseMatrix,
    pub pi: Option<SparseMatrix>,
}

impl SubalgebraEmbedding {
    pub fn new(
        small: FinAlgebra,
        big: FinAlgebra,
        iota: SparseMatrix,
        pi: Option<SparseMatrix>,
    ) -> Result<Self, AlgebraError> {
        if iota.nrows() != big.dim || iota.ncols() != small.dim {
            return Err(AlgebraError::ActionMismatch("inclusion matrix shape".into()));
        }
        for i in 0..small.dim {
            for j in 0..small.dim {
                let lhs = iota.mul_vec(small.basis_product(i, j));
                let rhs = big.mul(iota.col(i), iota.col(j));
                if lhs != rhs {
                    return Err(AlgebraError::NotAHomomorphism);
                }
            }
        }
        match (small.unit(), big.unit()) {
            (Some(u), Some(v)) if iota.mul_vec(u) == *v => {}
            _ => return Err(AlgebraError::NotAHomomorphism),
        }
        let e = SubalgebraEmbedding { small, big, iota, pi };
        if let Some(p) = &e.pi {
            e.check_augmentation(p)?;
        }
        Ok(e)
    }

    fn check_augmentation(&self, p: &SparseMatrix) -> Result<(), AlgebraError> {
        if p.nrows() != self.small.dim || p.ncols() != self.big.dim {
            return Err(AlgebraError::BadAugmentation("retraction shape".into()));
        }
        if p.mul(&self.iota) != SparseMatrix::identity(self.small.dim) {
            return Err(AlgebraError::BadAugmentation("π∘ι ≠ id".into()));
        }
        for b in 0..self.big.dim {
            for x in 0..self.big.dim {
                let bx = p.mul_vec(self.big.basis_product(b, x));
                let back = self.iota.mul_vec(p.col(x));
                let other = p.mul_vec(&self.big.mul(&SparseVec::unit(b), &back));
                if bx != other {
                    return Err(AlgebraError::BadAugmentation(format!("π not left-linear at ({b},{x})")));
                }
            }
        }
        Ok(())
    }

    /// Q·1 inside a unital algebra.
    pub fn scalars(big: &FinAlgebra) -> Self {
        let u = big.unit().expect("unital algebra required").clone();
        let iota = SparseMatrix::from_columns(big.dim, vec![u]);
        SubalgebraEmbedding::new(FinAlgebra::rationals(), big.clone(), iota, None).unwrap()
    }

    pub fn identity(a: &FinAlgebra) -> Self {
        let id = SparseMatrix::identity(a.dim);
        SubalgebraEmbedding::new(a.clone(), a.clone(), id.clone(), Some(id)).unwrap()
    }

    /// The diagonal Q^n ⊂ M_n(Q) with retraction ε_l(E_ij) = p_i.
    pub fn diagonal_in_matrices(n: usize) -> Self {
        let big = FinAlgebra::matrix_units(n);
        let iota = SparseMatrix::from_triplets(n * n, n, (0..n).map(|i| (i * n + i, i, q(1))));
        let pi = SparseMatrix::from_triplets(n, n * n, (0..n).flat_map(|i| (0..n).map(move |j| (i, i * n + j, q(1)))));
        SubalgebraEmbedding::new(FinAlgebra::diagonal(n), big, iota, Some(pi)).unwrap()
    }

    pub fn is_trivial_base(&self) -> bool {
        self.small.dim == 1
    }

    pub fn retraction(&self) -> Option<&SparseMatrix> {
        self.pi.as_ref()
    }
}

/// Span of block indicators of a partition inside Q^n.
pub fn partition_subalgebra(p: &Partition) -> SubalgebraEmbedding {
    let n = p.n();
    let k = p.blocks().len();
    let trips = p.blocks().iter().enumerate().flat_map(|(b, blk)| blk.iter().map(move |&x| (x, b, q(1))));
    let iota = SparseMatrix::from_triplets(n, k, trips);
    SubalgebraEmbedding::new(FinAlgebra::diagonal(k), FinAlgebra::diagonal(n), iota, None).unwrap()
}

/// A vector space with a left action of one algebra and a right action of
/// another, given by one matrix per basis element of each algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub dim: usize,
    pub left: Vec<SparseMatrix>,
    pub right: Vec<SparseMatrix>,
}

impl Bimodule {
    pub fn zero(left_dim: usize, right_dim: usize) -> Self {
        Bimodule {
            dim: 0,
            left: vec![SparseMatrix::zero(0, 0); left_dim],
            right: vec![SparseMatrix::zero(0, 0); right_dim],
        }
    }

    /// A as an A-A bimodule.
    pub fn regular(a: &FinAlgebra) -> Self {
        let left = (0..a.dim()).map(|i| a.left_matrix(&SparseVec::unit(i))).collect();
        let right = (0..a.dim()).map(|i| a.right_matrix(&SparseVec::unit(i))).collect();
        Bimodule { dim: a.dim(), left, right }
    }

    /// Left action of an algebra element.
    pub fn left_of(&self, x: &SparseVec) -> SparseMatrix {
        combine(self.dim, &self.left, x)
    }

    pub fn right_of(&self, x: &SparseVec) -> SparseMatrix {
        combine(self.dim, &self.right, x)
    }

    /// Checks action axioms against the acting algebras.
    pub fn validate(&self, l: &FinAlgebra, r: &FinAlgebra) -> Result<(), AlgebraError> {
        if self.left.len() != l.dim() || self.right.len() != r.dim() {
            return Err(AlgebraError::ActionMismatch("action count".into()));
        }
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                if self.left_of(l.basis_product(i, j)) != self.left[i].mul(&self.left[j]) {
                    return Err(AlgebraError::BadBimodule(format!("left action at ({i},{j})")));
                }
            }
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                if self.right_of(r.basis_product(i, j)) != self.right[j].mul(&self.right[i]) {
                    return Err(AlgebraError::BadBimodule(format!("right action at ({i},{j})")));
                }
            }
        }
        for a in &self.left {
            for b in &self.right {
                if a.mul(b) != b.mul(a) {
                    return Err(AlgebraError::BadBimodule("actions do not commute".into()));
                }
            }
        }
        if let Some(u) = l.unit() {
            if self.left_of(u) != SparseMatrix::identity(self.dim) {
                return Err(AlgebraError::BadBimodule("left unit".into()));
            }
        }
        if let Some(u) = r.unit() {
            if self.right_of(u) != SparseMatrix::identity(self.dim) {
                return Err(AlgebraError::BadBimodule("right unit".into()));
            }
        }
        Ok(())
    }

    /// Restricts the left action along ι.
    pub fn restrict_left(&self, e: &SubalgebraEmbedding) -> Bimodule {
        let left = (0..e.small.dim()).map(|a| self.left_of(e.iota.col(a))).collect();
        Bimodule { dim: self.dim, left, right: self.right.clone() }
    }

    pub fn restrict_right(&self, e: &SubalgebraEmbedding) -> Bimodule {
        let right = (0..e.small.dim()).map(|a| self.right_of(e.iota.col(a))).collect();
        Bimodule { dim: self.dim, left: self.left.clone(), right }
    }
}

fn combine(dim: usize, mats: &[SparseMatrix], x: &SparseVec) -> SparseMatrix {
    let mut acc = SparseMatrix::zero(dim, dim);
    for (k, c) in x.iter() {
        acc = acc.add_scaled(&mats[*k], c);
    }
    acc
}

/// X ⊗_A Y for X with a right A-action and Y with a left A-action, where A is
/// e.small. Returns the resulting bimodule and the quotient of X ⊗ Y.
pub fn tensor_over(e: &SubalgebraEmbedding, x: &Bimodule, y: &Bimodule) -> Result<(Bimodule, Quotient), AlgebraError> {
    let da = e.small.dim();
    if x.right.len() != da || y.left.len() != da {
        return Err(AlgebraError::ActionMismatch(format!(
            "need right and left actions of a {da}-dimensional algebra, got {} and {}",
            x.right.len(),
            y.left.len()
        )));
    }
    let (dx, dy) = (x.dim, y.dim);
    let mut rels = Vec::new();
    if !(da == 1 && e.small.unit().is_some()) {
        for a in 0..da {
            let xa = &x.right[a];
            let ay = &y.left[a];
            for i in 0..dx {
                for j in 0..dy {
                    let lhs = xa.col(i).map_indices(|k| k * dy + j);
                    let rhs = ay.col(j).map_indices(|k| i * dy + k);
                    let r = lhs.sub(&rhs);
                    if !r.is_zero() {
                        rels.push(r);
                    }
                }
            }
        }
    }
    let qt = Quotient::new(Subspace::span(dx * dy, rels.iter()));
    let id_y = SparseMatrix::identity(dy);
    let id_x = SparseMatrix::identity(dx);
    let ind = |m: &SparseMatrix| qt.induce(&qt, |i| m.col(i).clone());
    let left = x.left.iter().map(|l| ind(&l.kron(&id_y))).collect();
    let right = y.right.iter().map(|r| ind(&id_x.kron(r))).collect();
    Ok((Bimodule { dim: qt.dim(), left, right }, qt))
}

/// N / [B, N] for a B-bimodule N.
pub fn commutator_quotient(b: &FinAlgebra, n: &Bimodule) -> Result<Quotient, AlgebraError> {
    if n.left.len() != b.dim() || n.right.len() != b.dim() {
        return Err(AlgebraError::ActionMismatch("bimodule is not over this algebra".into()));
    }
    let mut rels = Vec::new();
    for k in 0..b.dim() {
        for m in 0..n.dim {
            let r = n.left[k].col(m).sub(n.right[k].col(m));
            if !r.is_zero() {
                rels.push(r);
            }
        }
    }
    Ok(Quotient::new(Subspace::span(n.dim, rels.iter())))
}

/// Elementwise check that two algebras agree up to the given linear map.
pub fn is_algebra_map(src: &FinAlgebra, dst: &FinAlgebra, m: &SparseMatrix) -> bool {
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            if m.mul_vec(src.basis_product(i, j)) != dst.mul(m.col(i), m.col(j)) {
                return false;
            }
        }
    }
    match (src.unit(), dst.unit()) {
        (Some(u), Some(v)) => m.mul_vec(u) == *v,
        (None, _) => true,
        _ => false,
    }
}

/// Convenience: the scalar c as an element of a unital algebra.
pub fn scalar(a: &FinAlgebra, c: &Q) -> SparseVec {
    a.unit().expect("unital algebra required").scale(c)
}

/// True when the vector is the unit of the algebra.
pub fn is_unit(a: &FinAlgebra, v: &SparseVec) -> bool {
    a.unit() == Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pinj::Partition;

    #[test]
    fn constructions_are_associative() {
        let algs = vec![
            FinAlgebra::rationals(),
            FinAlgebra::diagonal(3),
            FinAlgebra::matrix_units(2),
            FinAlgebra::truncated_poly(3),
            FinAlgebra::matrix_algebra(2, &FinAlgebra::truncated_poly(2)),
            FinAlgebra::power(&FinAlgebra::truncated_poly(2), 2),
            FinAlgebra::tensor(&FinAlgebra::matrix_units(2), &FinAlgebra::truncated_poly(2)),
            FinAlgebra::square_zero_line(),
        ];
        for a in algs {
            a.validate().unwrap();
        }
    }

    #[test]
    fn rejects_non_associative() {
        // e0 e0 = e1, e1 e0 = e0, everything else zero
        let mut table = vec![SparseVec::new(); 4];
        table[0] = SparseVec::unit(1);
        table[2] = SparseVec::unit(0);
        assert!(matches!(FinAlgebra::new(2, None, table), Err(AlgebraError::NotAssociative(..))));
    }

    #[test]
    fn matrix_algebra_examples() {
        assert_eq!(FinAlgebra::matrix_algebra(1, &FinAlgebra::truncated_poly(2)), {
            let mut a = FinAlgebra::truncated_poly(2);
            a.labels = vec!["E00*x^0".into(), "E00*x^1".into()];
            a
        });
        let m = FinAlgebra::matrix_units(2);
        assert_eq!(m.dim(), 4);
        for (i, j, k, l) in itertools_free_quads(2) {
            let expect = if j == k { SparseVec::unit(i * 2 + l) } else { SparseVec::new() };
            assert_eq!(*m.basis_product(i * 2 + j, k * 2 + l), expect);
        }
        assert_eq!(FinAlgebra::matrix_algebra(2, &FinAlgebra::truncated_poly(2)).dim(), 8);
    }

    fn itertools_free_quads(n: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        v.push((i, j, k, l));
                    }
                }
            }
        }
        v
    }

    #[test]
    fn tensor_over_examples() {
        let q2 = FinAlgebra::diagonal(2);
        let m3 = FinAlgebra::truncated_poly(3);
        let e = SubalgebraEmbedding::scalars(&m3);
        let x = Bimodule::regular(&m3).restrict_right(&e);
        let y = Bimodule::regular(&m3).restrict_left(&e);
        assert_eq!(tensor_over(&e, &x, &y).unwrap().0.dim, 9);

        let id = SubalgebraEmbedding::identity(&q2);
        let r = Bimodule::regular(&q2);
        assert_eq!(tensor_over(&id, &r, &r).unwrap().0.dim, 2);

        let d = SubalgebraEmbedding::diagonal_in_matrices(2);
        let g = Bimodule::regular(&d.big);
        let (t, _) = tensor_over(&d, &g.restrict_right(&d), &g.restrict_left(&d)).unwrap();
        assert_eq!(t.dim, 8);
        t.validate(&d.big, &d.big).unwrap();

        assert!(matches!(tensor_over(&d, &g, &g), Err(AlgebraError::ActionMismatch(_))));
    }

    #[test]
    fn tensor_with_base_is_identity() {
        let d = SubalgebraEmbedding::diagonal_in_matrices(2);
        let g = Bimodule::regular(&d.big).restrict_right(&d);
        let p = Bimodule::regular(&d.small);
        let (t, _) = tensor_over(&d, &g, &p).unwrap();
        assert_eq!(t.dim, g.dim);
    }

    #[test]
    fn commutator_quotient_examples() {
        let c = FinAlgebra::truncated_poly(3);
        assert_eq!(commutator_quotient(&c, &Bimodule::regular(&c)).unwrap().dim(), 3);
        let m = FinAlgebra::matrix_units(2);
        assert_eq!(commutator_quotient(&m, &Bimodule::regular(&m)).unwrap().dim(), 1);
        assert_eq!(commutator_quotient(&m, &Bimodule::zero(4, 4)).unwrap().dim(), 0);
        for coeffs in [FinAlgebra::truncated_poly(2), FinAlgebra::diagonal(2), FinAlgebra::truncated_poly(3)] {
            let mc = FinAlgebra::matrix_algebra(2, &coeffs);
            assert_eq!(commutator_quotient(&mc, &Bimodule::regular(&mc)).unwrap().dim(), coeffs.dim());
        }
    }

    #[test]
    fn partition_subalgebra_examples() {
        assert_eq!(partition_subalgebra(&Partition::discrete(3)).small.dim(), 3);
        assert_eq!(partition_subalgebra(&Partition::one_block(3)).small.dim(), 1);
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let e = partition_subalgebra(&p);
        assert_eq!(e.small.dim(), 2);
        assert_eq!(e.iota, SparseMatrix::from_i64(&[&[1, 0], &[1, 0], &[0, 1]]));
    }

    #[test]
    fn partition_meet_contains_both() {
        let all = Partition::all(3);
        for a in &all {
            for b in &all {
                let m = Subspace::image(&partition_subalgebra(&a.meet(b).unwrap()).iota);
                assert!(Subspace::image(&partition_subalgebra(a).iota).is_subspace_of(&m));
                assert!(Subspace::image(&partition_subalgebra(b).iota).is_subspace_of(&m));
            }
        }
    }

    #[test]
    fn augmentation_of_matrices() {
        for n in 1..=3 {
            let e = SubalgebraEmbedding::diagonal_in_matrices(n);
            assert!(e.pi.is_some());
        }
        // the transposed retraction E_ij ↦ p_j is not left linear
        let e = SubalgebraEmbedding::diagonal_in_matrices(2);
        let bad = SparseMatrix::from_triplets(2, 4, (0..2).flat_map(|i| (0..2).map(move |j| (j, i * 2 + j, q(1)))));
        let r = SubalgebraEmbedding::new(e.small.clone(), e.big.clone(), e.iota.clone(), Some(bad));
        assert!(matches!(r, Err(AlgebraError::BadAugmentation(_))));
    }

    #[test]
    fn json_round_trip() {
        let a = FinAlgebra::truncated_poly(2);
        let j = a.to_json();
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"dim":2,"unit":["1","0"],"table":[[[0,"1"]],[[1,"1"]],[[1,"1"]],[]]}"#);
        let back = FinAlgebra::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.table, a.table);
        assert_eq!(back.unit, a.unit);
        let bad = r#"{"dim":1,"unit":["1"],"table":[[[0,"2"]]]}"#;
        assert!(FinAlgebra::from_json(&serde_json::from_str(bad).unwrap()).is_err());
    }

    #[test]
    fn bimodule_validation() {
        let m = FinAlgebra::matrix_units(2);
        Bimodule::regular(&m).validate(&m, &m).unwrap();
        let mut broken = Bimodule::regular(&m);
        broken.left[0] = SparseMatrix::identity(4);
        assert!(broken.validate(&m, &m).is_err());
    }
}
