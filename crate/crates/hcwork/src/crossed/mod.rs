//! Emb-bundles over Q^N, crossed products R#Γ_N and M#Γ_N, modules with a
//! partial-injection action and their coinvariants, and the ⊠ product of
//! sequences.
//!
//! Γ_N = M_N(Q) with basis E_ij = U_{j→i} at index i*N+j, and 𝒫_N = Q^N.

pub mod bicomplex;
pub mod diagonal;
pub mod morita;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{is_algebra_map, AlgebraError, Bimodule, FinAlgebra, SubalgebraEmbedding};
use crate::complexes::hochschild::{perp_module, RightModule};
use crate::complexes::ComplexError;
use crate::exactla::{q, rank, Quotient, SparseMatrix, SparseVec, Subspace};
use crate::pinj::PartialInjection;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossedError {
    #[error("bundle axiom fails: {0}")]
    BundleAxiomViolation(String),
    #[error("base is not a sequence algebra A^N with the standard action")]
    NotSequenceBase,
    #[error("not an action of the partial-injection monoid: {0}")]
    NotAnAction(String),
    #[error("covariance fails: {0}")]
    NotCovariant(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<crate::exactla::LaError> for CrossedError {
    fn from(e: crate::exactla::LaError) -> Self {
        CrossedError::Complex(e.into())
    }
}

/// A matrix unit E_ij as (i, j); None is the zero of Γ.
pub type Unit = Option<(usize, usize)>;

pub fn compose(a: Unit, b: Unit) -> Unit {
    match (a, b) {
        (Some((i, j)), Some((k, l))) if j == k => Some((i, l)),
        _ => None,
    }
}

pub fn dagger(a: Unit) -> Unit {
    a.map(|(i, j)| (j, i))
}

/// E_ij for the basis index i*N+j.
pub fn unit_of(n: usize, idx: usize) -> Unit {
    Some((idx / n, idx % n))
}

pub fn unit_index(n: usize, u: (usize, usize)) -> usize {
    u.0 * n + u.1
}

/// 1 = Σ E_ii as a vector of Γ_N.
pub fn gamma_one(n: usize) -> SparseVec {
    SparseVec::from_pairs((0..n).map(|i| (i * n + i, q(1))))
}

pub fn unit_vec(n: usize, u: Unit) -> SparseVec {
    u.map_or_else(SparseVec::new, |u| SparseVec::unit(unit_index(n, u)))
}

/// A vector space with operators (E_ij)_* satisfying the monoid relations
/// (E_ij)_*(E_kl)_* = δ_jk (E_il)_*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbModule {
    pub n: usize,
    pub dim: usize,
    pub units: Vec<SparseMatrix>,
}

impl EmbModule {
    pub fn new(n: usize, dim: usize, units: Vec<SparseMatrix>) -> Result<Self, CrossedError> {
        let m = EmbModule { n, dim, units };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), CrossedError> {
        let n = self.n;
        if self.units.len() != n * n || self.units.iter().any(|u| u.nrows() != self.dim || u.ncols() != self.dim) {
            return Err(CrossedError::NotAnAction("one square matrix per matrix unit".into()));
        }
        for a in 0..n * n {
            for b in 0..n * n {
                let lhs = self.units[a].mul(&self.units[b]);
                let rhs = match compose(unit_of(n, a), unit_of(n, b)) {
                    Some(u) => self.units[unit_index(n, u)].clone(),
                    None => SparseMatrix::zero(self.dim, self.dim),
                };
                if lhs != rhs {
                    return Err(CrossedError::NotAnAction(format!("units {a} and {b}")));
                }
            }
        }
        Ok(())
    }

    /// f_* = Σ_{x ∈ dom f} (E_{f(x),x})_*.
    pub fn act(&self, f: &PartialInjection) -> SparseMatrix {
        let mut acc = SparseMatrix::zero(self.dim, self.dim);
        for (x, y) in f.graph() {
            acc = acc.add(&self.units[unit_index(self.n, (y, x))]);
        }
        acc
    }

    /// G_* for an element of Γ_N.
    pub fn act_vec(&self, g: &SparseVec) -> SparseMatrix {
        let mut acc = SparseMatrix::zero(self.dim, self.dim);
        for (k, c) in g.iter() {
            acc = acc.add_scaled(&self.units[*k], c);
        }
        acc
    }

    /// M / span{m - σ_*(m) : σ total}.
    pub fn coinvariants(&self) -> Quotient {
        let mut rels = Vec::new();
        for s in PartialInjection::permutations(self.n) {
            let a = self.act(&s);
            for m in 0..self.dim {
                let r = SparseVec::unit(m).sub(a.col(m));
                if !r.is_zero() {
                    rels.push(r);
                }
            }
        }
        Quotient::new(Subspace::span_owned(self.dim, rels))
    }

    /// The image of 1_*, on which Γ acts unitally, with the restricted
    /// action.
    pub fn unital_part(&self) -> Result<(Subspace, EmbModule), CrossedError> {
        let one = self.act(&PartialInjection::identity(self.n));
        if one == SparseMatrix::identity(self.dim) {
            return Ok((Subspace::full(self.dim), self.clone()));
        }
        let img = Subspace::image(&one);
        let units = self
            .units
            .iter()
            .map(|u| {
                let cols =
                    img.basis().iter().map(|v| img.coords(&u.mul_vec(v)).expect("1_* absorbs every unit")).collect();
                SparseMatrix::from_columns(img.dim(), cols)
            })
            .collect();
        let m = EmbModule::new(self.n, img.dim(), units)?;
        Ok((img, m))
    }

    /// The right Γ-module m·E_ij = (E_ji)_* m; needs 1_* = id.
    pub fn right_module(&self) -> Result<RightModule, CrossedError> {
        let n = self.n;
        let act = (0..n * n).map(|k| self.units[(k % n) * n + k / n].clone()).collect();
        let r = RightModule { dim: self.dim, act };
        r.validate(&FinAlgebra::matrix_units(n))?;
        Ok(r)
    }

    /// Γ_N acting on itself by left multiplication.
    pub fn gamma_left(n: usize) -> Self {
        let g = FinAlgebra::matrix_units(n);
        let units = (0..n * n).map(|k| g.left_matrix(&SparseVec::unit(k))).collect();
        EmbModule { n, dim: n * n, units }
    }

    /// Γ_N acting on itself by f_*(x) = U_f x U_f†.
    pub fn gamma_conjugation(n: usize) -> Self {
        let g = FinAlgebra::matrix_units(n);
        let units = (0..n * n)
            .map(|k| {
                let d = (k % n) * n + k / n;
                g.left_matrix(&SparseVec::unit(k)).mul(&g.right_matrix(&SparseVec::unit(d)))
            })
            .collect();
        EmbModule { n, dim: n * n, units }
    }
}

/// H_0(Γ/𝒫, M) = M ⊗_Γ 𝒫 computed from ⊥(Γ_N/𝒫_N, M) on the unital part.
pub fn perp_h0(m: &EmbModule) -> Result<usize, CrossedError> {
    let (_, u) = m.unital_part()?;
    let right = u.right_module()?;
    let e = SubalgebraEmbedding::diagonal_in_matrices(m.n);
    let (c, _) = perp_module(&e, &right, 1, None, true)?;
    let h = c.hochschild()?.homology(0)?;
    Ok(h)
}

/// The cyclic identities of ⊥(Γ/𝒫, M) with the operator of ⊥ twisted by
/// F = f_1⋯f_n, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicReport {
    pub t_order: Vec<bool>,
    pub b_squared: Vec<bool>,
    pub anticommute: Vec<bool>,
}

impl CyclicReport {
    pub fn passed(&self) -> bool {
        self.t_order.iter().chain(&self.b_squared).chain(&self.anticommute).all(|&x| x)
    }
}

/// t_n^{n+1} = 1 for n ≤ top, B² = 0 and bB + Bb = 0 for n < top.
pub fn perp_cyclic_check(m: &EmbModule, top: usize) -> Result<CyclicReport, CrossedError> {
    let (_, u) = m.unital_part()?;
    let right = u.right_module()?;
    let e = SubalgebraEmbedding::diagonal_in_matrices(m.n);
    let (c, _) = perp_module(&e, &right, top, Some(m.n), true)?;
    let mut t_order = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let t = c.t_signed(k)?;
        let mut p = SparseMatrix::identity(c.dims[k]);
        for _ in 0..=k {
            p = t.mul(&p);
        }
        t_order.push(p == SparseMatrix::identity(c.dims[k]));
    }
    let bb = (0..top).map(|k| c.connes_b(k)).collect::<Result<Vec<_>, _>>()?;
    let b_squared = (0..top.saturating_sub(1)).map(|k| bb[k + 1].mul(&bb[k]).is_zero()).collect();
    let anticommute = (0..top)
        .map(|k| {
            let mut s = c.b(k + 1).mul(&bb[k]);
            if k >= 1 {
                s = s.add(&bb[k - 1].mul(&c.b(k)));
            }
            s.is_zero()
        })
        .collect();
    Ok(CyclicReport { t_order, b_squared, anticommute })
}

/// An algebra R with a central copy of 𝒫_N and an action of the partial
/// injections of {0..N-1} by multiplicative maps with p·a = p_*(a).
#[derive(Clone, Debug)]
pub struct Bundle {
    pub algebra: FinAlgebra,
    pub n: usize,
    /// Images of p_0..p_{N-1}.
    pub p: Vec<SparseVec>,
    pub action: EmbModule,
    /// Set for A^N with the standard action.
    pub sequence_base: Option<FinAlgebra>,
}

impl Bundle {
    pub fn new(algebra: FinAlgebra, p: Vec<SparseVec>, units: Vec<SparseMatrix>) -> Result<Self, CrossedError> {
        let n = p.len();
        let d = algebra.dim();
        let action = EmbModule::new(n, d, units).map_err(|e| CrossedError::BundleAxiomViolation(e.to_string()))?;
        let b = Bundle { algebra, n, p, action, sequence_base: None };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<(), CrossedError> {
        let (r, n, d) = (&self.algebra, self.n, self.algebra.dim());
        let bad = |m: String| Err(CrossedError::BundleAxiomViolation(m));
        let emb = self.p_embedding();
        if let Err(e) = emb {
            return bad(format!("𝒫 is not a unital subalgebra: {e}"));
        }
        for (i, p) in self.p.iter().enumerate() {
            for k in 0..d {
                let a = SparseVec::unit(k);
                if r.mul(p, &a) != r.mul(&a, p) {
                    return bad(format!("p{i} is not central"));
                }
                if r.mul(p, &a) != *self.action.units[i * n + i].col(k) {
                    return bad(format!("p{i}·a ≠ (p{i})_*(a) at basis {k}"));
                }
            }
        }
        for u in 0..n * n {
            let f = &self.action.units[u];
            for a in 0..d {
                for b in 0..d {
                    let lhs = f.mul_vec(r.basis_product(a, b));
                    let rhs = r.mul(f.col(a), f.col(b));
                    if lhs != rhs {
                        return bad(format!("unit {u} not multiplicative at ({a},{b})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// A^N with (E_ij)_* moving component j to component i.
    pub fn sequence(a: &FinAlgebra, n: usize) -> Result<Self, CrossedError> {
        let da = a.dim();
        let unit = a.unit().ok_or(AlgebraError::UnitFails)?;
        let algebra = FinAlgebra::power(a, n);
        let p = (0..n).map(|i| unit.shifted(i * da)).collect();
        let units = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                SparseMatrix::from_triplets(n * da, n * da, (0..da).map(|x| (i * da + x, j * da + x, q(1))))
            })
            .collect();
        let mut b = Bundle::new(algebra, p, units)?;
        b.sequence_base = Some(a.clone());
        Ok(b)
    }

    pub fn p_embedding(&self) -> Result<SubalgebraEmbedding, AlgebraError> {
        let iota = SparseMatrix::from_columns(self.algebra.dim(), self.p.clone());
        SubalgebraEmbedding::new(FinAlgebra::diagonal(self.n), self.algebra.clone(), iota, None)
    }

    pub fn unit_act(&self, u: (usize, usize)) -> &SparseMatrix {
        &self.action.units[unit_index(self.n, u)]
    }

    /// The quotient bundle R/I for an invariant two-sided ideal I, with the
    /// projection matrix.
    pub fn quotient(&self, ideal: &[SparseVec]) -> Result<(Bundle, SparseMatrix), CrossedError> {
        let (r, d) = (&self.algebra, self.algebra.dim());
        let sub = Subspace::span(d, ideal.iter());
        for v in sub.basis() {
            for u in &self.action.units {
                if !sub.contains(&u.mul_vec(v)) {
                    return Err(CrossedError::BundleAxiomViolation("ideal not invariant".into()));
                }
            }
        }
        let (alg, qt) = r.quotient(ideal).map_err(|e| match e {
            AlgebraError::Malformed(m) => CrossedError::BundleAxiomViolation(m),
            e => e.into(),
        })?;
        let units = self.action.units.iter().map(|u| qt.induce(&qt, |i| u.col(i).clone())).collect();
        let p = self.p.iter().map(|v| qt.project(v)).collect();
        let mut b = Bundle::new(alg, p, units)?;
        b.sequence_base = None;
        Ok((b, qt.projection_matrix()))
    }
}

/// An R-bimodule M, central over 𝒫, with a covariant action
/// f_*(rms) = f_*(r) f_*(m) f_*(s).
#[derive(Clone, Debug)]
pub struct CovariantBimodule {
    pub module: Bimodule,
    pub action: EmbModule,
}

impl CovariantBimodule {
    pub fn new(b: &Bundle, module: Bimodule, units: Vec<SparseMatrix>) -> Result<Self, CrossedError> {
        module.validate(&b.algebra, &b.algebra)?;
        let action = EmbModule::new(b.n, module.dim, units)?;
        let m = CovariantBimodule { module, action };
        m.validate(b)?;
        Ok(m)
    }

    fn validate(&self, b: &Bundle) -> Result<(), CrossedError> {
        let (n, d) = (b.n, self.module.dim);
        let bad = |s: String| Err(CrossedError::NotCovariant(s));
        for (i, p) in b.p.iter().enumerate() {
            let l = self.module.left_of(p);
            if l != self.module.right_of(p) {
                return bad(format!("p{i} acts differently on the two sides"));
            }
            if l != self.action.units[i * n + i] {
                return bad(format!("p{i}·m ≠ (p{i})_*(m)"));
            }
        }
        for u in 0..n * n {
            let f = &self.action.units[u];
            let fr = &b.action.units[u];
            for a in 0..b.algebra.dim() {
                let fa = fr.col(a);
                for m in 0..d {
                    let am = self.module.left[a].col(m);
                    let ma = self.module.right[a].col(m);
                    if f.mul_vec(am) != self.module.left_of(fa).mul_vec(f.col(m)) {
                        return bad(format!("left action, unit {u}"));
                    }
                    if f.mul_vec(ma) != self.module.right_of(fa).mul_vec(f.col(m)) {
                        return bad(format!("right action, unit {u}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn regular(b: &Bundle) -> Self {
        CovariantBimodule { module: Bimodule::regular(&b.algebra), action: b.action.clone() }
    }
}

/// X ⊗_𝒫 Γ_N at index x*N²+g, for X with right 𝒫-action matrices rp[i].
fn over_p_quotient(dim: usize, n: usize, rp: &[SparseMatrix]) -> Quotient {
    let nn = n * n;
    let mut rels = Vec::new();
    for x in 0..dim {
        for (i, m) in rp.iter().enumerate() {
            for g in 0..nn {
                let k = g / n;
                let lhs = m.col(x).map_indices(|y| y * nn + g);
                let r = if i == k { lhs.sub(&SparseVec::unit(x * nn + g)) } else { lhs };
                if !r.is_zero() {
                    rels.push(r);
                }
            }
        }
    }
    Quotient::new(Subspace::span_owned(dim * nn, rels))
}

/// M ⊗_𝒫 Γ as a quotient of the free space, with its lifts.
#[derive(Clone, Debug)]
pub struct CrossedSpace {
    pub quot: Quotient,
    pub n: usize,
}

impl CrossedSpace {
    pub fn split(&self, free: usize) -> (usize, (usize, usize)) {
        let nn = self.n * self.n;
        (free / nn, ((free % nn) / self.n, free % self.n))
    }

    /// Class of m # E_u, for m a vector of M.
    pub fn element(&self, m: &SparseVec, u: Unit) -> SparseVec {
        match u {
            None => SparseVec::new(),
            Some(u) => {
                let nn = self.n * self.n;
                let g = unit_index(self.n, u);
                self.quot.project(&m.map_indices(|x| x * nn + g))
            }
        }
    }

    /// Class of m # G for G a vector of Γ.
    pub fn element_vec(&self, m: &SparseVec, g: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (k, c) in g.iter() {
            acc = acc.add_scaled(&self.element(m, unit_of(self.n, *k)), c);
        }
        acc
    }

    pub fn dim(&self) -> usize {
        self.quot.dim()
    }

    /// (m-basis index, unit) of quotient basis vector k.
    pub fn lift(&self, k: usize) -> (usize, (usize, usize)) {
        self.split(self.quot.lift(k))
    }
}

/// The crossed product R#Γ_N with its underlying space.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub bundle: Bundle,
    pub space: CrossedSpace,
    pub algebra: FinAlgebra,
}

/// Bilinear map on free spaces checked to descend in each variable.
fn descend_bilinear(
    qa: &Quotient,
    qb: &Quotient,
    qc: &Quotient,
    f: &dyn Fn(usize, usize) -> SparseVec,
) -> Result<(), CrossedError> {
    let apply_left = |r: &SparseVec, j: usize| {
        let mut acc = SparseVec::new();
        for (i, c) in r.iter() {
            acc = acc.add_scaled(&f(*i, j), c);
        }
        acc
    };
    let apply_right = |i: usize, r: &SparseVec| {
        let mut acc = SparseVec::new();
        for (j, c) in r.iter() {
            acc = acc.add_scaled(&f(i, *j), c);
        }
        acc
    };
    for r in qa.relations().basis() {
        for j in 0..qb.ambient() {
            if !qc.relations().contains(&apply_left(r, j)) {
                return Err(CrossedError::BundleAxiomViolation("product does not descend (left)".into()));
            }
        }
    }
    for r in qb.relations().basis() {
        for i in 0..qa.ambient() {
            if !qc.relations().contains(&apply_right(i, r)) {
                return Err(CrossedError::BundleAxiomViolation("product does not descend (right)".into()));
            }
        }
    }
    Ok(())
}

/// R#Γ from a validated bundle; associativity is checked by FinAlgebra.
pub fn crossed_product(b: &Bundle) -> Result<CrossedProduct, CrossedError> {
    let (space, bim) = crossed_bimodule_parts(b, &CovariantBimodule::regular(b))?;
    let d = space.dim();
    let table = (0..d * d).map(|ij| bim.left[ij / d].col(ij % d).clone()).collect();
    let one = gamma_one(b.n);
    let unit = space.element_vec(b.algebra.unit().ok_or(AlgebraError::UnitFails)?, &one);
    let labels = (0..d)
        .map(|k| {
            let (a, (i, j)) = space.lift(k);
            format!("{}#E{i}{j}", b.algebra.labels()[a])
        })
        .collect();
    let algebra = FinAlgebra::new(d, Some(unit), table)?.with_labels(labels);
    Ok(CrossedProduct { bundle: b.clone(), space, algebra })
}

/// M#Γ as an R#Γ-bimodule: (a#f)(m#g) = a f_*(m) # fg and
/// (m#g)(a#f) = m g_*(a) # gf.
fn crossed_bimodule_parts(b: &Bundle, m: &CovariantBimodule) -> Result<(CrossedSpace, Bimodule), CrossedError> {
    let n = b.n;
    let nn = n * n;
    let dr = b.algebra.dim();
    let dm = m.module.dim;
    let rq = over_p_quotient(dr, n, &b.p.iter().map(|p| b.algebra.right_matrix(p)).collect::<Vec<_>>());
    let mq = over_p_quotient(dm, n, &b.p.iter().map(|p| m.module.right_of(p)).collect::<Vec<_>>());
    let rs = CrossedSpace { quot: rq, n };
    let ms = CrossedSpace { quot: mq, n };
    let place = |v: &SparseVec, u: Unit| match u {
        None => SparseVec::new(),
        Some(u) => v.map_indices(|x| x * nn + unit_index(n, u)),
    };
    let left = |i: usize, j: usize| {
        let (a, f) = rs.split(i);
        let (x, g) = ms.split(j);
        let fm = m.action.units[unit_index(n, f)].col(x);
        place(&m.module.left[a].mul_vec(fm), compose(Some(f), Some(g)))
    };
    let right = |j: usize, i: usize| {
        let (x, g) = ms.split(j);
        let (a, f) = rs.split(i);
        let ga = b.action.units[unit_index(n, g)].col(a);
        let xm = m.module.right_of(ga).mul_vec(&SparseVec::unit(x));
        place(&xm, compose(Some(g), Some(f)))
    };
    descend_bilinear(&rs.quot, &ms.quot, &ms.quot, &left)?;
    descend_bilinear(&ms.quot, &rs.quot, &ms.quot, &right)?;
    let dq = ms.dim();
    let lefts = (0..rs.dim())
        .map(|k| {
            let i = rs.quot.lift(k);
            ms.quot.induce(&ms.quot, |j| left(i, j))
        })
        .collect();
    let rights = (0..rs.dim())
        .map(|k| {
            let i = rs.quot.lift(k);
            ms.quot.induce(&ms.quot, |j| right(j, i))
        })
        .collect();
    Ok((ms, Bimodule { dim: dq, left: lefts, right: rights }))
}

impl CrossedProduct {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// 𝒫_N ⊂ R#Γ by p_i ↦ p_i # 1.
    pub fn p_embedding(&self) -> Result<SubalgebraEmbedding, AlgebraError> {
        let one = gamma_one(self.bundle.n);
        let cols = self.bundle.p.iter().map(|p| self.space.element_vec(p, &one)).collect();
        let iota = SparseMatrix::from_columns(self.dim(), cols);
        SubalgebraEmbedding::new(FinAlgebra::diagonal(self.bundle.n), self.algebra.clone(), iota, None)
    }

    /// M#Γ as an R#Γ-bimodule, with its underlying space.
    pub fn bimodule(&self, m: &CovariantBimodule) -> Result<(CrossedSpace, Bimodule), CrossedError> {
        let (s, bm) = crossed_bimodule_parts(&self.bundle, m)?;
        bm.validate(&self.algebra, &self.algebra)?;
        Ok((s, bm))
    }

    /// The map R#Γ → R'#Γ induced by a bundle map R → R'.
    pub fn induced_map(&self, dst: &CrossedProduct, f: &SparseMatrix) -> SparseMatrix {
        let cols = (0..self.dim())
            .map(|k| {
                let (a, u) = self.space.lift(k);
                dst.space.element(f.col(a), Some(u))
            })
            .collect();
        SparseMatrix::from_columns(dst.dim(), cols)
    }
}

/// The realization α # U_f ↦ diag(α) U_f into M_N(A), for a sequence base.
#[derive(Clone, Debug)]
pub struct Realization {
    pub target: FinAlgebra,
    pub matrix: SparseMatrix,
}

pub fn diag_realization(c: &CrossedProduct) -> Result<Realization, CrossedError> {
    let a = c.bundle.sequence_base.as_ref().ok_or(CrossedError::NotSequenceBase)?;
    let (n, da) = (c.bundle.n, a.dim());
    let target = FinAlgebra::matrix_algebra(n, a);
    let cols = (0..c.dim())
        .map(|k| {
            let (x, (i, l)) = c.space.lift(k);
            // diag(α) E_il keeps component i of α
            let (comp, basis) = (x / da, x % da);
            if comp == i {
                SparseVec::unit((i * n + l) * da + basis)
            } else {
                SparseVec::new()
            }
        })
        .collect();
    let matrix = SparseMatrix::from_columns(target.dim(), cols);
    Ok(Realization { target, matrix })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub n: usize,
    pub dim: usize,
    pub homomorphism: bool,
    pub bijective: bool,
    pub ideal_onto: bool,
}

impl RealizationReport {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.bijective && self.ideal_onto
    }
}

/// Checks that the realization is a bijective algebra map sending J^N#Γ
/// onto M_N(J) for an ideal J of A.
pub fn check_realization(a: &FinAlgebra, n: usize, ideal: &[SparseVec]) -> Result<RealizationReport, CrossedError> {
    let b = Bundle::sequence(a, n)?;
    let c = crossed_product(&b)?;
    let r = diag_realization(&c)?;
    let homomorphism = is_algebra_map(&c.algebra, &r.target, &r.matrix);
    let bijective = c.dim() == r.target.dim() && rank(&r.matrix) == c.dim();
    let da = a.dim();
    let mut src = Vec::new();
    let mut want = Vec::new();
    for i in 0..n {
        for j in ideal {
            for g in 0..n * n {
                src.push(c.space.element(&j.shifted(i * da), unit_of(n, g)));
            }
        }
    }
    for g in 0..n * n {
        for j in ideal {
            want.push(j.map_indices(|k| g * da + k));
        }
    }
    let img = Subspace::span_owned(r.target.dim(), src.iter().map(|v| r.matrix.mul_vec(v)).collect());
    let tgt = Subspace::span_owned(r.target.dim(), want);
    let ideal_onto = img.is_subspace_of(&tgt) && tgt.is_subspace_of(&img);
    Ok(RealizationReport { n, dim: c.dim(), homomorphism, bijective, ideal_onto })
}

/// (α ⊠ β)_{(m,n)} = α_n ⊗ β_m over A⊗B, at the flattened index m*len(α)+n.
pub fn boxtimes(alpha: &[SparseVec], beta: &[SparseVec], db: usize) -> Vec<SparseVec> {
    let mut out = Vec::with_capacity(alpha.len() * beta.len());
    for bm in beta {
        for an in alpha {
            let mut acc = Vec::new();
            for (i, x) in an.iter() {
                for (j, y) in bm.iter() {
                    acc.push((i * db + j, x * y));
                }
            }
            out.push(SparseVec::from_pairs(acc));
        }
    }
    out
}

/// The sequence action f_*(α)_{f(x)} = α_x.
pub fn act_sequence(f: &PartialInjection, alpha: &[SparseVec]) -> Vec<SparseVec> {
    f.act(alpha, &SparseVec::new()).expect("sequence length matches")
}

/// One row of a two-sided comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub lhs: usize,
    pub rhs: usize,
    pub equal: bool,
}

/// {degree: {lhs, rhs, equal}}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CheckReport {
    pub rows: BTreeMap<usize, CheckRow>,
}

impl CheckReport {
    pub fn from_tables(lhs: &[usize], rhs: &[usize]) -> Self {
        let rows = lhs
            .iter()
            .zip(rhs)
            .enumerate()
            .map(|(k, (&l, &r))| (k, CheckRow { lhs: l, rhs: r, equal: l == r }))
            .collect();
        CheckReport { rows }
    }

    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.values().all(|r| r.equal)
    }

    pub fn lhs(&self) -> Vec<usize> {
        self.rows.values().map(|r| r.lhs).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    #[test]
    fn crossed_product_dimensions() {
        let q1 = FinAlgebra::rationals();
        let d = |a: &FinAlgebra, n| crossed_product(&Bundle::sequence(a, n).unwrap()).unwrap().dim();
        assert_eq!(d(&q1, 2), 4);
        assert_eq!(d(&q1, 1), 1);
        assert_eq!(d(&FinAlgebra::truncated_poly(2), 2), 8);
        assert_eq!(d(&q1, 3), 9);
    }

    #[test]
    fn realization_examples() {
        let b = Bundle::sequence(&FinAlgebra::rationals(), 2).unwrap();
        let c = crossed_product(&b).unwrap();
        let r = diag_realization(&c).unwrap();
        // (1,0) # U_id ↦ E_00
        let x = c.space.element_vec(&SparseVec::unit(0), &gamma_one(2));
        assert_eq!(r.matrix.mul_vec(&x), SparseVec::unit(0));
        // (1,1) # U_(0 1) ↦ antidiagonal
        let swap = PartialInjection::permutation(&[1, 0]).unwrap();
        let us = SparseVec::from_pairs(swap.graph().into_iter().map(|(j, i)| (i * 2 + j, q(1))));
        let y = c.space.element_vec(b.algebra.unit().unwrap(), &us);
        assert_eq!(r.matrix.mul_vec(&y), SparseVec::from_pairs([(1, q(1)), (2, q(1))]));
        let n1 = check_realization(&FinAlgebra::rationals(), 1, &[]).unwrap();
        assert!(n1.passed());
    }

    #[test]
    fn realization_is_isomorphism() {
        let x = vec![SparseVec::unit(1)];
        for n in 1..=3 {
            assert!(check_realization(&FinAlgebra::rationals(), n, &[]).unwrap().passed());
            assert!(check_realization(&FinAlgebra::truncated_poly(2), n, &x).unwrap().passed());
        }
    }

    #[test]
    fn non_sequence_base_rejected() {
        let b = Bundle::sequence(&FinAlgebra::rationals(), 2).unwrap();
        let (qb, _) = b.quotient(&[]).unwrap();
        let c = crossed_product(&qb).unwrap();
        assert!(matches!(diag_realization(&c), Err(CrossedError::NotSequenceBase)));
    }

    #[test]
    fn bad_bundle_rejected() {
        // swap the roles of the units so that p·a ≠ p_*(a)
        let a = FinAlgebra::rationals();
        let b = Bundle::sequence(&a, 2).unwrap();
        let mut units = b.action.units.clone();
        units.swap(0, 3);
        let r = Bundle::new(b.algebra.clone(), b.p.clone(), units);
        assert!(matches!(r, Err(CrossedError::BundleAxiomViolation(_))));
    }

    #[test]
    fn coinvariants_examples() {
        let b = Bundle::sequence(&FinAlgebra::rationals(), 2).unwrap();
        assert_eq!(b.action.coinvariants().dim(), 1);
        let triv = EmbModule::new(1, 3, vec![SparseMatrix::identity(3)]).unwrap();
        assert_eq!(triv.coinvariants().dim(), 3);
    }

    #[test]
    fn coinvariants_match_perp_h0() {
        for n in 2..=3 {
            let mods = vec![
                Bundle::sequence(&FinAlgebra::rationals(), n).unwrap().action,
                Bundle::sequence(&FinAlgebra::truncated_poly(2), n).unwrap().action,
                EmbModule::gamma_left(n),
                EmbModule::gamma_conjugation(n),
            ];
            for m in &mods {
                EmbModule::new(m.n, m.dim, m.units.clone()).unwrap();
                assert_eq!(m.coinvariants().dim(), perp_h0(m).unwrap(), "N = {n}");
            }
        }
    }

    #[test]
    fn perp_cyclic_identities_n2() {
        let mods = vec![
            Bundle::sequence(&FinAlgebra::rationals(), 2).unwrap().action,
            Bundle::sequence(&FinAlgebra::truncated_poly(2), 2).unwrap().action,
            EmbModule::gamma_left(2),
            EmbModule::gamma_conjugation(2),
        ];
        for m in &mods {
            let r = perp_cyclic_check(m, 3).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!((r.t_order.len(), r.b_squared.len(), r.anticommute.len()), (4, 2, 3));
        }
    }

    #[test]
    fn non_action_rejected() {
        let mut units = EmbModule::gamma_left(2).units;
        units[1] = SparseMatrix::identity(4);
        assert!(matches!(EmbModule::new(2, 4, units), Err(CrossedError::NotAnAction(_))));
    }

    #[test]
    fn boxtimes_examples() {
        let one = vec![SparseVec::unit(0); 2];
        assert_eq!(boxtimes(&one, &one[..1], 1), vec![SparseVec::unit(0); 2]);
        let a = vec![SparseVec::unit(0).scale(&q(1)), SparseVec::unit(0).scale(&q(2))];
        let b = vec![SparseVec::unit(0).scale(&q(3))];
        let r = boxtimes(&a, &b, 1);
        assert_eq!(r, vec![SparseVec::unit(0).scale(&q(3)), SparseVec::unit(0).scale(&q(6))]);
    }

    #[test]
    fn boxtimes_intertwines_products() {
        let gens = PartialInjection::all(2);
        let a: Vec<SparseVec> = (0..2).map(|i| SparseVec::unit(0).scale(&q(i + 2))).collect();
        let b: Vec<SparseVec> = (0..2).map(|i| SparseVec::unit(0).scale(&q(5 * i - 1))).collect();
        for f in &gens {
            for g in &gens {
                let fg = f.product(g);
                assert_eq!(fg.u_matrix(), f.u_matrix().kron(&g.u_matrix()));
                let lhs = act_sequence(&fg, &boxtimes(&a, &b, 1));
                let rhs = boxtimes(&act_sequence(g, &a), &act_sequence(f, &b), 1);
                assert_eq!(lhs, rhs);
                for f2 in &gens {
                    for g2 in &gens {
                        let left = f.then_after(f2).product(&g.then_after(g2));
                        assert_eq!(left, fg.then_after(&f2.product(g2)));
                    }
                }
            }
        }
    }

    #[test]
    fn regular_modules_are_covariant() {
        let b = Bundle::sequence(&FinAlgebra::truncated_poly(2), 2).unwrap();
        let m = CovariantBimodule::regular(&b);
        CovariantBimodule::new(&b, m.module.clone(), m.action.units.clone()).unwrap();
        let c = crossed_product(&b).unwrap();
        let (_, bm) = c.bimodule(&m).unwrap();
        assert_eq!(bm, Bimodule::regular(&c.algebra));
    }
}
