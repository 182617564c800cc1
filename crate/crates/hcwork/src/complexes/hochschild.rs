//! Tuple models of the relative Hochschild cyclic module C(B/A, N), the bar
//! complex, and the relative module ⊥(B/A, M) for a right B-module M.

use crate::algebra::{AlgebraError, Bimodule, FinAlgebra, SubalgebraEmbedding};
use crate::exactla::{SparseMatrix, SparseVec};

use super::tensor::{induce_tuple_map, TensorSpace, TupleLevel};
use super::{ChainComplex, ComplexError, CyclicModule};

/// A right module over an algebra: act[k] is right multiplication by the
/// k-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightModule {
    pub dim: usize,
    pub act: Vec<SparseMatrix>,
}

impl RightModule {
    pub fn regular(b: &FinAlgebra) -> Self {
        let act = (0..b.dim()).map(|k| b.right_matrix(&SparseVec::unit(k))).collect();
        RightModule { dim: b.dim(), act }
    }

    pub fn from_bimodule(m: &Bimodule) -> Self {
        RightModule { dim: m.dim, act: m.right.clone() }
    }

    pub fn right_of(&self, x: &SparseVec) -> SparseMatrix {
        let mut acc = SparseMatrix::zero(self.dim, self.dim);
        for (k, c) in x.iter() {
            acc = acc.add_scaled(&self.act[*k], c);
        }
        acc
    }

    /// m·(xy) = (m·x)·y and m·1 = m.
    pub fn validate(&self, b: &FinAlgebra) -> Result<(), AlgebraError> {
        if self.act.len() != b.dim() {
            return Err(AlgebraError::ActionMismatch("right action count".into()));
        }
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                if self.right_of(b.basis_product(i, j)) != self.act[j].mul(&self.act[i]) {
                    return Err(AlgebraError::BadBimodule(format!("right action at ({i},{j})")));
                }
            }
        }
        if let Some(u) = b.unit() {
            if self.right_of(u) != SparseMatrix::identity(self.dim) {
                return Err(AlgebraError::BadBimodule("unit acts nontrivially".into()));
            }
        }
        Ok(())
    }
}

/// The free tuple (prefix, k, suffix) summed over the entries k of v.
pub fn splice(dst: &TensorSpace, prefix: &[usize], v: &SparseVec, suffix: &[usize]) -> SparseVec {
    let mut t: Vec<usize> = Vec::with_capacity(prefix.len() + 1 + suffix.len());
    t.extend_from_slice(prefix);
    t.push(0);
    t.extend_from_slice(suffix);
    dst.substitute(&t, prefix.len(), v)
}

type FaceFn<'a> = dyn Fn(usize, usize, &[usize]) -> SparseVec + 'a;
type TauFn<'a> = dyn Fn(usize, &[usize]) -> SparseVec + 'a;

/// Builds a cyclic module on quotients of free tuple spaces from operations
/// given on tuples. face(n, i, t) and degen(n, i, t) land in the free spaces
/// of degree n-1 and n+1; tau(n, t) in degree n.
pub fn assemble(
    levels: &[TupleLevel],
    face: &FaceFn,
    degen: &FaceFn,
    tau: Option<&TauFn>,
    check: bool,
) -> Result<CyclicModule, ComplexError> {
    let top = levels.len() - 1;
    let mut faces = vec![vec![]];
    for n in 1..=top {
        let mut fs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            fs.push(induce_tuple_map(&levels[n], &levels[n - 1], &format!("d{i} in degree {n}"), check, |t| {
                face(n, i, t)
            })?);
        }
        faces.push(fs);
    }
    let mut degens = Vec::with_capacity(top);
    for n in 0..top {
        let mut ss = Vec::with_capacity(n + 1);
        for i in 0..=n {
            ss.push(induce_tuple_map(&levels[n], &levels[n + 1], &format!("s{i} in degree {n}"), check, |t| {
                degen(n, i, t)
            })?);
        }
        degens.push(ss);
    }
    let tau = match tau {
        Some(tf) => Some(
            (0..=top)
                .map(|n| induce_tuple_map(&levels[n], &levels[n], &format!("τ in degree {n}"), check, |t| tf(n, t)))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    Ok(CyclicModule { dims: levels.iter().map(|l| l.dim()).collect(), faces, degens, tau })
}

/// How an element of the small algebra acts on the module factor.
struct SlotActions {
    m_right: Vec<SparseMatrix>,
    m_left: Option<Vec<SparseMatrix>>,
    b_left: Vec<SparseMatrix>,
    b_right: Vec<SparseMatrix>,
}

impl SlotActions {
    fn new(
        e: &SubalgebraEmbedding,
        m_right: &dyn Fn(&SparseVec) -> SparseMatrix,
        m_left: Option<&dyn Fn(&SparseVec) -> SparseMatrix>,
    ) -> Self {
        let gens: Vec<SparseVec> = e.iota.columns().to_vec();
        SlotActions {
            m_right: gens.iter().map(m_right).collect(),
            m_left: m_left.map(|f| gens.iter().map(f).collect()),
            b_left: gens.iter().map(|a| e.big.left_matrix(a)).collect(),
            b_right: gens.iter().map(|a| e.big.right_matrix(a)).collect(),
        }
    }

    /// Tensor relations over A between adjacent slots, plus the cyclic
    /// relation a·x_0 ⊗ ... = x_0 ⊗ ... ⊗ x_n·a when a left action is given.
    fn relations(&self, space: &TensorSpace) -> Vec<SparseVec> {
        let n = space.arity() - 1;
        let mut rels = Vec::new();
        for idx in 0..space.size() {
            let t = space.digits(idx);
            for a in 0..self.m_right.len() {
                for k in 0..n {
                    let lhs = if k == 0 {
                        space.substitute(&t, 0, self.m_right[a].col(t[0]))
                    } else {
                        space.substitute(&t, k, self.b_right[a].col(t[k]))
                    };
                    let rhs = space.substitute(&t, k + 1, self.b_left[a].col(t[k + 1]));
                    let r = lhs.sub(&rhs);
                    if !r.is_zero() {
                        rels.push(r);
                    }
                }
                if let Some(ml) = &self.m_left {
                    let lhs = space.substitute(&t, 0, ml[a].col(t[0]));
                    let rhs = if n == 0 {
                        space.substitute(&t, 0, self.m_right[a].col(t[0]))
                    } else {
                        space.substitute(&t, n, self.b_right[a].col(t[n]))
                    };
                    let r = lhs.sub(&rhs);
                    if !r.is_zero() {
                        rels.push(r);
                    }
                }
            }
        }
        rels
    }
}

fn tensor_levels(e: &SubalgebraEmbedding, dm: usize, top: usize, acts: Option<&SlotActions>) -> Vec<TupleLevel> {
    (0..=top)
        .map(|n| {
            let space = TensorSpace::module_power(dm, e.big.dim(), n);
            let rels = acts.map(|a| a.relations(&space)).unwrap_or_default();
            TupleLevel::new(space, rels)
        })
        .collect()
}

/// C_n(B/A, N) = N ⊗_A B^{⊗_A n} modulo the cyclic A-relation, for a
/// B-bimodule N. When `cyclic` is set N must be B itself and the rotation
/// (x_0, ..., x_n) ↦ (x_n, x_0, ..., x_{n-1}) is included.
pub fn hochschild_module(
    e: &SubalgebraEmbedding,
    nmod: &Bimodule,
    cyclic: bool,
    top: usize,
    check: bool,
) -> Result<(CyclicModule, Vec<TupleLevel>), ComplexError> {
    let b = &e.big;
    nmod.validate(b, b)?;
    if cyclic && *nmod != Bimodule::regular(b) {
        return Err(ComplexError::Shape("cyclic structure needs N = B".into()));
    }
    let unit = b.unit().ok_or(AlgebraError::UnitFails)?.clone();
    let acts = if e.is_trivial_base() {
        None
    } else {
        let mr = |a: &SparseVec| nmod.right_of(a);
        let ml = |a: &SparseVec| nmod.left_of(a);
        Some(SlotActions::new(e, &mr, Some(&ml)))
    };
    let levels = tensor_levels(e, nmod.dim, top, acts.as_ref());
    let sp = |n: usize| &levels[n].space;
    let face = |n: usize, i: usize, t: &[usize]| -> SparseVec {
        let dst = sp(n - 1);
        if i == 0 {
            splice(dst, &[], nmod.right[t[1]].col(t[0]), &t[2..])
        } else if i < n {
            splice(dst, &t[..i], b.basis_product(t[i], t[i + 1]), &t[i + 2..])
        } else {
            splice(dst, &[], nmod.left[t[n]].col(t[0]), &t[1..n])
        }
    };
    let degen = |n: usize, i: usize, t: &[usize]| splice(sp(n + 1), &t[..=i], &unit, &t[i + 1..]);
    let rot = |n: usize, t: &[usize]| {
        let mut r = Vec::with_capacity(n + 1);
        r.push(t[n]);
        r.extend_from_slice(&t[..n]);
        sp(n).tuple_vec(&r, crate::exactla::q(1))
    };
    let tau: Option<&TauFn> = if cyclic { Some(&rot) } else { None };
    let c = assemble(&levels, &face, &degen, tau, check)?;
    Ok((c, levels))
}

/// The cyclic module of B relative to A with coefficients in B.
pub fn cyclic_module(e: &SubalgebraEmbedding, top: usize, check: bool) -> Result<CyclicModule, ComplexError> {
    Ok(hochschild_module(e, &Bimodule::regular(&e.big), true, top, check)?.0)
}

/// Absolute cyclic module of a unital algebra.
pub fn absolute_cyclic_module(a: &FinAlgebra, top: usize) -> Result<CyclicModule, ComplexError> {
    cyclic_module(&SubalgebraEmbedding::scalars(a), top, false)
}

/// Bar complex A^{⊗(n+1)} with b' = Σ_{i<n} (-1)^i μ_i, degrees 0..=max.
/// Works for nonunital algebras.
pub fn bar_complex(a: &FinAlgebra, max: usize) -> Result<ChainComplex, ComplexError> {
    let d = a.dim();
    let spaces: Vec<TensorSpace> = (0..=max).map(|n| TensorSpace::new(vec![d; n + 1])).collect();
    let dims: Vec<usize> = spaces.iter().map(|s| s.size()).collect();
    let mut ds = Vec::with_capacity(max);
    for n in 1..=max {
        let cols = (0..dims[n])
            .map(|idx| {
                let t = spaces[n].digits(idx);
                let mut acc = SparseVec::new();
                for i in 0..n {
                    let v = splice(&spaces[n - 1], &t[..i], a.basis_product(t[i], t[i + 1]), &t[i + 2..]);
                    acc = if i % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
                }
                acc
            })
            .collect();
        ds.push(SparseMatrix::from_columns(dims[n - 1], cols));
    }
    ChainComplex::from_boundaries(dims, ds)
}

/// ⊥_n(B/A, M) = M ⊗_A B^{⊗_A n} for a right B-module M, with
/// ∂_0 = m·x_1, ∂_i = x_i x_{i+1}, ∂_n = x_{n-1}·ιπ(x_n). With `gamma_n`
/// set (e must be the diagonal in M_N(Q)) the cyclic operator
/// (m, g_1..g_n) ↦ (m·F, F†, g_1, ..., g_{n-1}) with F = g_1⋯g_n is included.
pub fn perp_module(
    e: &SubalgebraEmbedding,
    m: &RightModule,
    top: usize,
    gamma_n: Option<usize>,
    check: bool,
) -> Result<(CyclicModule, Vec<TupleLevel>), ComplexError> {
    let b = &e.big;
    m.validate(b)?;
    let pi = e.retraction().ok_or_else(|| AlgebraError::BadAugmentation("no retraction".into()))?;
    let iota_pi = e.iota.mul(pi);
    let unit = b.unit().ok_or(AlgebraError::UnitFails)?.clone();
    let acts = if e.is_trivial_base() {
        None
    } else {
        let mr = |a: &SparseVec| m.right_of(a);
        Some(SlotActions::new(e, &mr, None))
    };
    let levels = tensor_levels(e, m.dim, top, acts.as_ref());
    let sp = |n: usize| &levels[n].space;
    let face = |n: usize, i: usize, t: &[usize]| -> SparseVec {
        let dst = sp(n - 1);
        if i == 0 {
            splice(dst, &[], m.act[t[1]].col(t[0]), &t[2..])
        } else if i < n {
            splice(dst, &t[..i], b.basis_product(t[i], t[i + 1]), &t[i + 2..])
        } else if n == 1 {
            splice(dst, &[], &m.right_of(iota_pi.col(t[1])).mul_vec(&SparseVec::unit(t[0])), &[])
        } else {
            let v = b.mul(&SparseVec::unit(t[n - 1]), iota_pi.col(t[n]));
            splice(dst, &t[..n - 1], &v, &[])
        }
    };
    let degen = |n: usize, i: usize, t: &[usize]| splice(sp(n + 1), &t[..=i], &unit, &t[i + 1..]);
    let tau_fn = |n: usize, t: &[usize]| -> SparseVec {
        let nn = gamma_n.expect("gamma");
        if n == 0 {
            return SparseVec::unit(t[0]);
        }
        let (ij, jj) = (|g: usize| g / nn, |g: usize| g % nn);
        for k in 1..n {
            if jj(t[k]) != ij(t[k + 1]) {
                return SparseVec::new();
            }
        }
        let (i1, jn) = (ij(t[1]), jj(t[n]));
        let f = i1 * nn + jn;
        let fd = jn * nn + i1;
        let mut suffix = vec![fd];
        suffix.extend_from_slice(&t[1..n]);
        splice(sp(n), &[], m.act[f].col(t[0]), &suffix)
    };
    if let Some(nn) = gamma_n {
        if b.dim() != nn * nn || e.small.dim() != nn {
            return Err(ComplexError::Shape("cyclic operator needs the diagonal in M_N(Q)".into()));
        }
    }
    let tau: Option<&TauFn> = if gamma_n.is_some() { Some(&tau_fn) } else { None };
    let c = assemble(&levels, &face, &degen, tau, check)?;
    Ok((c, levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::cyclic::connes_complex;

    fn hh(c: &CyclicModule) -> Vec<usize> {
        let h = c.hochschild().unwrap().homology_table();
        h[..h.len() - 1].iter().map(|x| x.1).collect()
    }

    #[test]
    fn dual_numbers_absolute() {
        let a = FinAlgebra::truncated_poly(2);
        let c = absolute_cyclic_module(&a, 4).unwrap();
        c.check_cyclic().unwrap();
        assert_eq!(hh(&c), vec![2, 1, 1, 1]);
        let mc = c.mixed().unwrap();
        assert_eq!(mc.hc_table().unwrap(), vec![2, 0, 2, 0]);
        let lam = connes_complex(&c).unwrap().homology_table();
        assert_eq!(lam[..4].iter().map(|x| x.1).collect::<Vec<_>>(), vec![2, 0, 2, 0]);
    }

    #[test]
    fn separable_examples() {
        let c = absolute_cyclic_module(&FinAlgebra::diagonal(2), 3).unwrap();
        assert_eq!(hh(&c), vec![2, 0, 0]);
        assert_eq!(c.mixed().unwrap().hc_table().unwrap(), vec![2, 0, 2]);
        let m2 = absolute_cyclic_module(&FinAlgebra::matrix_units(2), 3).unwrap();
        assert_eq!(m2.mixed().unwrap().hc_table().unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn relative_to_diagonal() {
        let e = SubalgebraEmbedding::diagonal_in_matrices(2);
        let c = cyclic_module(&e, 3, true).unwrap();
        c.check_cyclic().unwrap();
        assert_eq!(hh(&c), vec![1, 0, 0]);
        assert_eq!(c.normalized_mixed().unwrap().hc_table().unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn bar_of_unital_is_acyclic() {
        let bar = bar_complex(&FinAlgebra::truncated_poly(2), 3).unwrap();
        let h = bar.homology_table();
        assert!(h[..3].iter().all(|x| x.1 == 0));
        let nz = bar_complex(&FinAlgebra::square_zero_line(), 3).unwrap().homology_table();
        assert_eq!(nz[..3].iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn perp_gamma_is_cyclic() {
        let e = SubalgebraEmbedding::diagonal_in_matrices(2);
        let m = RightModule::regular(&e.big);
        let (c, _) = perp_module(&e, &m, 3, Some(2), true).unwrap();
        c.check_cyclic().unwrap();
        // B is a free right B-module; ⊥ is contractible above degree 0
        assert_eq!(hh(&c), vec![2, 0, 0]);
    }
}
