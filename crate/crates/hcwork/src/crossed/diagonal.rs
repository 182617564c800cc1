//! The diagonal Δ_n = (M ⊗_𝒫 R^{⊗_𝒫 n})_𝒫 ⊗_𝒫 Γ^{⊗_𝒫 n} of
//! ⊥(Γ/𝒫, C(R/𝒫, M)) and the maps φ, ψ to and from
//! C(R#Γ/𝒫, M#Γ).
//!
//! Tuples of degree n are (a_0, a_1..a_n, g_1..g_n) with a_0 ∈ M, a_i ∈ R and
//! g_i matrix units. The faces are d_i = μ_i ⊗ ∂_{i+1} for i < n and
//! d_n(x ⊗ g) = μ_n(x)·G ⊗ (g_2⋯g_n)† ⊗ g_2 ⊗ ... ⊗ g_{n-1} with G = g_1⋯g_n,
//! which is the face structure φ transports from C(R#Γ/𝒫, M#Γ).

use serde::Serialize;

use crate::complexes::hochschild::{assemble, hochschild_module};
use crate::complexes::tensor::{induce_tuple_map, TensorSpace, TupleLevel};
use crate::complexes::CyclicModule;
use crate::exactla::{SparseMatrix, SparseVec};

use super::{
    compose, crossed_product, dagger, gamma_one, unit_of, unit_vec, Bundle, CovariantBimodule, CrossedError,
    CrossedProduct, CrossedSpace, Unit,
};

/// The simplicial module Δ together with its tuple levels.
pub struct Diagonal {
    pub module: CyclicModule,
    pub levels: Vec<TupleLevel>,
    n: usize,
    dr: usize,
}

fn space(dm: usize, dr: usize, nn: usize, n: usize) -> TensorSpace {
    let mut r = vec![dm];
    r.extend(std::iter::repeat_n(dr, n));
    r.extend(std::iter::repeat_n(nn, n));
    TensorSpace::new(r)
}

/// g_1⋯g_k for a nonempty list of unit indices.
fn composite(n: usize, gs: &[usize]) -> Unit {
    gs[1..].iter().fold(unit_of(n, gs[0]), |acc, &g| compose(acc, unit_of(n, g)))
}

impl Diagonal {
    pub fn new(b: &Bundle, m: &CovariantBimodule, top: usize, check: bool) -> Result<Self, CrossedError> {
        let (n, dr, dm) = (b.n, b.algebra.dim(), m.module.dim);
        let nn = n * n;
        let r = &b.algebra;
        let unit = r.unit().ok_or(crate::algebra::AlgebraError::UnitFails)?.clone();
        let levels: Vec<TupleLevel> = (0..=top)
            .map(|k| {
                let sp = space(dm, dr, nn, k);
                let rels = relations(b, m, &sp, k);
                TupleLevel::new(sp, rels)
            })
            .collect();
        let sp = |k: usize| &levels[k].space;
        let ru = |x: usize| SparseVec::unit(x);
        let face = |k: usize, i: usize, t: &[usize]| -> SparseVec {
            let (a, g) = (&t[..=k], &t[k + 1..]);
            let mut xs: Vec<SparseVec> = Vec::with_capacity(k);
            if i < k {
                for (s, &x) in a.iter().enumerate() {
                    if s == i + 1 {
                        continue;
                    }
                    if s == i {
                        let v = if i == 0 {
                            m.module.right[a[1]].col(a[0]).clone()
                        } else {
                            r.basis_product(a[i], a[i + 1]).clone()
                        };
                        xs.push(v);
                    } else {
                        xs.push(ru(x));
                    }
                }
                let gs: Vec<SparseVec> = if k == 1 {
                    // ∂_1 = x·ιπ(g_1)
                    let (row, _) = unit_of(n, g[0]).expect("unit");
                    xs[0] = m.module.left_of(&b.p[row]).mul_vec(&xs[0]);
                    vec![]
                } else if i + 1 < k {
                    let mut gs: Vec<SparseVec> = g[..i].iter().map(|&x| ru(x)).collect();
                    gs.push(unit_vec(n, compose(unit_of(n, g[i]), unit_of(n, g[i + 1]))));
                    gs.extend(g[i + 2..].iter().map(|&x| ru(x)));
                    gs
                } else {
                    let (row, _) = unit_of(n, g[k - 1]).expect("unit");
                    let mut gs: Vec<SparseVec> = g[..k - 2].iter().map(|&x| ru(x)).collect();
                    gs.push(unit_vec(n, compose(unit_of(n, g[k - 2]), Some((row, row)))));
                    gs
                };
                xs.extend(gs);
                return sp(k - 1).product_vec(&xs);
            }
            let big = composite(n, g);
            let mut mu: Vec<usize> = vec![0; k];
            mu[1..].copy_from_slice(&a[1..k]);
            let head = m.module.left[a[k]].col(a[0]).clone();
            let gd = dagger(big);
            let Some(gd) = gd else { return SparseVec::new() };
            let mut xs = vec![m.action.units[super::unit_index(n, gd)].mul_vec(&head)];
            xs.extend(mu[1..].iter().map(|&x| b.unit_act(gd).col(x).clone()));
            if k >= 2 {
                xs.push(unit_vec(n, dagger(composite(n, &g[1..]))));
                xs.extend(g[1..k - 1].iter().map(|&x| ru(x)));
            }
            sp(k - 1).product_vec(&xs)
        };
        let one = gamma_one(n);
        let degen = |k: usize, i: usize, t: &[usize]| -> SparseVec {
            let (a, g) = (&t[..=k], &t[k + 1..]);
            let mut xs: Vec<SparseVec> = a[..=i].iter().map(|&x| ru(x)).collect();
            xs.push(unit.clone());
            xs.extend(a[i + 1..].iter().map(|&x| ru(x)));
            if i < k {
                xs.extend(g[..=i].iter().map(|&x| ru(x)));
                xs.push(one.clone());
                xs.extend(g[i + 1..].iter().map(|&x| ru(x)));
            } else {
                xs.extend(g.iter().map(|&x| ru(x)));
                xs.push(if k == 0 { one.clone() } else { unit_vec(n, dagger(composite(n, g))) });
            }
            sp(k + 1).product_vec(&xs)
        };
        let module = assemble(&levels, &face, &degen, None, check)?;
        Ok(Diagonal { module, levels, n, dr })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_dim(&self) -> usize {
        self.dr
    }
}

/// C-relations over 𝒫 (with the cyclic one) and the ⊥-relations, for each
/// free tuple and each p_k.
fn relations(b: &Bundle, m: &CovariantBimodule, sp: &TensorSpace, k: usize) -> Vec<SparseVec> {
    let (n, r) = (b.n, &b.algebra);
    let mut rels = Vec::new();
    let mut push = |v: SparseVec| {
        if !v.is_zero() {
            rels.push(v);
        }
    };
    let pl_m: Vec<SparseMatrix> = b.p.iter().map(|p| m.module.left_of(p)).collect();
    let pr_m: Vec<SparseMatrix> = b.p.iter().map(|p| m.module.right_of(p)).collect();
    let pl_r: Vec<SparseMatrix> = b.p.iter().map(|p| r.left_matrix(p)).collect();
    let pr_r: Vec<SparseMatrix> = b.p.iter().map(|p| r.right_matrix(p)).collect();
    for idx in 0..sp.size() {
        let t = sp.digits(idx);
        for pk in 0..n {
            for s in 0..k {
                let lhs = if s == 0 {
                    sp.substitute(&t, 0, pr_m[pk].col(t[0]))
                } else {
                    sp.substitute(&t, s, pr_r[pk].col(t[s]))
                };
                push(lhs.sub(&sp.substitute(&t, s + 1, pl_r[pk].col(t[s + 1]))));
            }
            let rhs = if k == 0 {
                sp.substitute(&t, 0, pr_m[pk].col(t[0]))
            } else {
                sp.substitute(&t, k, pr_r[pk].col(t[k]))
            };
            push(sp.substitute(&t, 0, pl_m[pk].col(t[0])).sub(&rhs));
            if k >= 1 {
                let g1 = k + 1;
                let gk = |x: usize| unit_vec(n, compose(Some((pk, pk)), unit_of(n, x)));
                push(sp.substitute(&t, 0, pl_m[pk].col(t[0])).sub(&sp.substitute(&t, g1, &gk(t[g1]))));
                for s in 1..k {
                    let (gi, gj) = (k + s, k + s + 1);
                    let lhs = sp.substitute(&t, gi, &unit_vec(n, compose(unit_of(n, t[gi]), Some((pk, pk)))));
                    push(lhs.sub(&sp.substitute(&t, gj, &gk(t[gj]))));
                }
            }
        }
    }
    rels
}

/// φ and ψ between Δ and C(R#Γ/𝒫, M#Γ), degree by degree.
pub struct PhiPsi {
    pub diagonal: Diagonal,
    pub crossed: CyclicModule,
    pub crossed_levels: Vec<TupleLevel>,
    pub phi: Vec<SparseMatrix>,
    pub psi: Vec<SparseMatrix>,
}

pub fn phi_psi(b: &Bundle, m: &CovariantBimodule, top: usize) -> Result<PhiPsi, CrossedError> {
    let c = crossed_product(b)?;
    let diagonal = Diagonal::new(b, m, top, true)?;
    let (ms, mbim) = c.bimodule(m)?;
    let e = c.p_embedding()?;
    let (crossed, crossed_levels) = hochschild_module(&e, &mbim, false, top, true)?;
    let mut phi = Vec::with_capacity(top + 1);
    let mut psi = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let dl = &diagonal.levels[k];
        let cl = &crossed_levels[k];
        phi.push(induce_tuple_map(dl, cl, &format!("φ in degree {k}"), true, |t| phi_tuple(b, &c, &ms, k, t))?);
        psi.push(induce_tuple_map(cl, dl, &format!("ψ in degree {k}"), true, |t| psi_tuple(b, m, &c, &ms, dl, k, t))?);
    }
    Ok(PhiPsi { diagonal, crossed, crossed_levels, phi, psi })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiPsiReport {
    pub top: usize,
    pub simplicial: bool,
    pub psi_phi_identity: bool,
    pub phi_psi_identity: bool,
}

impl PhiPsiReport {
    pub fn passed(&self) -> bool {
        self.simplicial && self.psi_phi_identity && self.phi_psi_identity
    }
}

/// φ commutes with faces and degeneracies and is inverse to ψ, degrees 0..=top.
pub fn phi_psi_check(b: &Bundle, m: &CovariantBimodule, top: usize) -> Result<PhiPsiReport, CrossedError> {
    let pp = phi_psi(b, m, top)?;
    let (dm, cm) = (&pp.diagonal.module, &pp.crossed);
    let faces =
        (1..=top).all(|k| (0..=k).all(|i| pp.phi[k - 1].mul(&dm.faces[k][i]) == cm.faces[k][i].mul(&pp.phi[k])));
    let degens =
        (0..top).all(|k| (0..=k).all(|i| pp.phi[k + 1].mul(&dm.degens[k][i]) == cm.degens[k][i].mul(&pp.phi[k])));
    let id = |d: usize, a: &SparseMatrix, c: &SparseMatrix| a.mul(c) == SparseMatrix::identity(d);
    Ok(PhiPsiReport {
        top,
        simplicial: faces && degens,
        psi_phi_identity: (0..=top).all(|k| id(dm.dims[k], &pp.psi[k], &pp.phi[k])),
        phi_psi_identity: (0..=top).all(|k| id(cm.dims[k], &pp.phi[k], &pp.psi[k])),
    })
}

/// a_0#g_1 ⊗ g_1†(a_1)#g_2 ⊗ ... ⊗ (g_1⋯g_k)†(a_k)#(g_1⋯g_k)†.
fn phi_tuple(b: &Bundle, c: &CrossedProduct, ms: &CrossedSpace, k: usize, t: &[usize]) -> SparseVec {
    let n = b.n;
    let (a, g) = (&t[..=k], &t[k + 1..]);
    let dst = TensorSpace::module_power(ms.dim(), c.dim(), k);
    if k == 0 {
        return ms.element_vec(&SparseVec::unit(a[0]), &gamma_one(n));
    }
    let mut xs = vec![ms.element(&SparseVec::unit(a[0]), unit_of(n, g[0]))];
    let mut prefix: Unit = None;
    for j in 1..=k {
        prefix = if j == 1 { unit_of(n, g[0]) } else { compose(prefix, unit_of(n, g[j - 1])) };
        let Some(pd) = dagger(prefix) else { return SparseVec::new() };
        let moved = b.unit_act(pd).col(a[j]).clone();
        let next = if j < k { unit_of(n, g[j]) } else { Some(pd) };
        xs.push(c.space.element(&moved, next));
    }
    dst.product_vec(&xs)
}

/// For a tuple with f_0⋯f_k a closed chain: a_0 ⊗ f_0(a_1) ⊗ ... ⊗
/// (f_0⋯f_{k-1})(a_k) ⊗ f_0 ⊗ ... ⊗ f_{k-1}; zero otherwise.
fn psi_tuple(
    b: &Bundle,
    m: &CovariantBimodule,
    c: &CrossedProduct,
    ms: &CrossedSpace,
    dl: &TupleLevel,
    k: usize,
    t: &[usize],
) -> SparseVec {
    let n = b.n;
    let (x0, f0) = ms.lift(t[0]);
    let mut fs = vec![f0];
    let mut xs_r = Vec::with_capacity(k);
    for &y in &t[1..] {
        let (a, f) = c.space.lift(y);
        fs.push(f);
        xs_r.push(b.algebra.mul(&SparseVec::unit(a), &b.p[f.0]));
    }
    for j in 0..k {
        if fs[j].1 != fs[j + 1].0 {
            return SparseVec::new();
        }
    }
    if fs[k].1 != fs[0].0 {
        return SparseVec::new();
    }
    let mut out = vec![m.module.right_of(&b.p[f0.0]).mul_vec(&SparseVec::unit(x0))];
    let mut prefix: Unit = None;
    for j in 0..k {
        prefix = if j == 0 { Some(fs[0]) } else { compose(prefix, Some(fs[j])) };
        let pf = prefix.expect("chain is composable");
        out.push(b.unit_act(pf).mul_vec(&xs_r[j]));
    }
    out.extend(fs[..k].iter().map(|&f| unit_vec(n, Some(f))));
    dl.space.product_vec(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAlgebra;

    fn identity(d: usize) -> SparseMatrix {
        SparseMatrix::identity(d)
    }

    fn check(b: &Bundle, top: usize) {
        let m = CovariantBimodule::regular(b);
        let pp = phi_psi(b, &m, top).unwrap();
        pp.diagonal.module.check_simplicial().unwrap();
        for k in 0..=top {
            assert_eq!(pp.psi[k].mul(&pp.phi[k]), identity(pp.diagonal.module.dims[k]), "ψφ in degree {k}");
            assert_eq!(pp.phi[k].mul(&pp.psi[k]), identity(pp.crossed.dims[k]), "φψ in degree {k}");
        }
        for k in 1..=top {
            for i in 0..=k {
                let lhs = pp.phi[k - 1].mul(&pp.diagonal.module.faces[k][i]);
                let rhs = pp.crossed.faces[k][i].mul(&pp.phi[k]);
                assert_eq!(lhs, rhs, "face {i} in degree {k}");
            }
        }
        for k in 0..top {
            for i in 0..=k {
                let lhs = pp.phi[k + 1].mul(&pp.diagonal.module.degens[k][i]);
                let rhs = pp.crossed.degens[k][i].mul(&pp.phi[k]);
                assert_eq!(lhs, rhs, "degeneracy {i} in degree {k}");
            }
        }
    }

    #[test]
    fn phi_is_simplicial_isomorphism_q2() {
        check(&Bundle::sequence(&FinAlgebra::rationals(), 2).unwrap(), 2);
    }

    #[test]
    fn phi_is_simplicial_isomorphism_dual_numbers() {
        let b = Bundle::sequence(&FinAlgebra::truncated_poly(2), 2).unwrap();
        check(&b, 2);
        assert!(phi_psi_check(&b, &CovariantBimodule::regular(&b), 2).unwrap().passed());
    }
}
