//! The bicomplex ⊥_m(Γ/𝒫, X_n) with X_n = C_n(R/𝒫, M) under the diagonal
//! action, its total complex with δ = ∂ + (-1)^m b and 𝔅 = ℬ + (-1)^m B,
//! and comparisons with the Hochschild and cyclic homology of R#Γ.

use crate::algebra::SubalgebraEmbedding;
use crate::complexes::hochschild::{absolute_cyclic_module, hochschild_module, perp_module, splice};
use crate::complexes::tensor::{induce_tuple_map, TensorSpace, TupleLevel};
use crate::complexes::{ChainComplex, CyclicModule, MixedComplex};
use crate::exactla::{kernel_basis, q, SparseMatrix, SparseVec, Subspace};

use super::{crossed_product, Bundle, CheckReport, CovariantBimodule, CrossedError, EmbModule};

/// Total complex of ⊥(Γ/𝒫, C(R/𝒫, M)) in total degrees 0..=top.
pub struct Hyper {
    pub top: usize,
    /// blocks[k] = [(m, n, offset)] with m + n = k.
    pub blocks: Vec<Vec<(usize, usize, usize)>>,
    pub chain: ChainComplex,
    pub mixed: Option<MixedComplex>,
    c_levels: Vec<TupleLevel>,
    perp_levels: Vec<Vec<TupleLevel>>,
}

fn sign(m: usize) -> crate::exactla::Q {
    if m.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

/// f ⊗ id on ⊥_m, for f : X → X' given on quotient bases.
fn lift(src: &TupleLevel, dst: &TupleLevel, f: &SparseMatrix, check: bool) -> Result<SparseMatrix, CrossedError> {
    Ok(induce_tuple_map(src, dst, "horizontal map on ⊥", check, |t| splice(&dst.space, &[], f.col(t[0]), &t[1..]))?)
}

/// X_n with the diagonal action f_*(a_0 ⊗ ... ⊗ a_n) = f_*a_0 ⊗ ... ⊗ f_*a_n.
fn diagonal_action(b: &Bundle, m: &CovariantBimodule, lv: &TupleLevel, check: bool) -> Result<EmbModule, CrossedError> {
    let n = b.n;
    let units = (0..n * n)
        .map(|u| {
            induce_tuple_map(lv, lv, "diagonal action", check, |t| {
                let mut xs = vec![m.action.units[u].col(t[0]).clone()];
                xs.extend(t[1..].iter().map(|&x| b.action.units[u].col(x).clone()));
                lv.space.product_vec(&xs)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    EmbModule::new(n, lv.dim(), units)
}

impl Hyper {
    pub fn new(b: &Bundle, m: &CovariantBimodule, cyclic: bool, top: usize, check: bool) -> Result<Self, CrossedError> {
        let n = b.n;
        let e = b.p_embedding()?;
        let (cmod, c_levels) = hochschild_module(&e, &m.module, cyclic, top, check)?;
        let gamma = SubalgebraEmbedding::diagonal_in_matrices(n);
        let mut perp: Vec<CyclicModule> = Vec::with_capacity(top + 1);
        let mut perp_levels = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let x = diagonal_action(b, m, &c_levels[k], check)?.right_module()?;
            let (p, pl) = perp_module(&gamma, &x, top - k, cyclic.then_some(n), check)?;
            perp.push(p);
            perp_levels.push(pl);
        }
        let mut blocks = Vec::with_capacity(top + 1);
        let mut dims = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut off = 0;
            let mut bl = Vec::new();
            for nc in 0..=k {
                let mm = k - nc;
                bl.push((mm, nc, off));
                off += perp[nc].dims[mm];
            }
            blocks.push(bl);
            dims.push(off);
        }
        let sizes = |k: usize| -> Vec<usize> { blocks[k].iter().map(|&(mm, nc, _)| perp[nc].dims[mm]).collect() };
        let pos =
            |k: usize, mm: usize, nc: usize| blocks[k].iter().position(|x| x.0 == mm && x.1 == nc).expect("block");
        let mut bs = vec![SparseMatrix::zero(0, dims[0])];
        for k in 1..=top {
            let mut parts: Vec<(usize, usize, SparseMatrix)> = Vec::new();
            for (j, &(mm, nc, _)) in blocks[k].iter().enumerate() {
                if mm >= 1 {
                    parts.push((pos(k - 1, mm - 1, nc), j, perp[nc].b(mm)));
                }
                if nc >= 1 {
                    let h = lift(&perp_levels[nc][mm], &perp_levels[nc - 1][mm], &cmod.b(nc), check)?;
                    parts.push((pos(k - 1, mm, nc - 1), j, h.scale(&sign(mm))));
                }
            }
            let refs: Vec<(usize, usize, &SparseMatrix)> = parts.iter().map(|(r, c, m)| (*r, *c, m)).collect();
            bs.push(SparseMatrix::block(&sizes(k - 1), &sizes(k), &refs));
        }
        let chain = ChainComplex::from_boundaries(dims.clone(), bs[1..].to_vec())?;
        let mixed = if cyclic {
            let mut bbs = Vec::with_capacity(top);
            for k in 0..top {
                let mut parts: Vec<(usize, usize, SparseMatrix)> = Vec::new();
                for (j, &(mm, nc, _)) in blocks[k].iter().enumerate() {
                    parts.push((pos(k + 1, mm + 1, nc), j, perp[nc].connes_b(mm)?));
                    let h = lift(&perp_levels[nc][mm], &perp_levels[nc + 1][mm], &cmod.connes_b(nc)?, check)?;
                    parts.push((pos(k + 1, mm, nc + 1), j, h.scale(&sign(mm))));
                }
                let refs: Vec<(usize, usize, &SparseMatrix)> = parts.iter().map(|(r, c, m)| (*r, *c, m)).collect();
                bbs.push(SparseMatrix::block(&sizes(k + 1), &sizes(k), &refs));
            }
            Some(MixedComplex::new(dims, bs, bbs)?)
        } else {
            None
        };
        Ok(Hyper { top, blocks, chain, mixed, c_levels, perp_levels })
    }

    /// The total map induced by a bundle map R → R' with M = R on both
    /// sides, given by its matrix.
    pub fn map_to(&self, other: &Hyper, f: &SparseMatrix, check: bool) -> Result<Vec<SparseMatrix>, CrossedError> {
        let mut xs = Vec::with_capacity(self.top + 1);
        for k in 0..=self.top {
            let (src, dst) = (&self.c_levels[k], &other.c_levels[k]);
            xs.push(induce_tuple_map(src, dst, "bundle map on C", check, |t| {
                let fs: Vec<SparseVec> = t.iter().map(|&x| f.col(x).clone()).collect();
                dst.space.product_vec(&fs)
            })?);
        }
        let mut out = Vec::with_capacity(self.top + 1);
        for k in 0..=self.top {
            let mut parts = Vec::new();
            for (j, &(mm, nc, _)) in self.blocks[k].iter().enumerate() {
                parts.push((j, j, lift(&self.perp_levels[nc][mm], &other.perp_levels[nc][mm], &xs[nc], check)?));
            }
            let rs: Vec<usize> = other.blocks[k].iter().map(|&(mm, nc, _)| other.perp_levels[nc][mm].dim()).collect();
            let cs: Vec<usize> = self.blocks[k].iter().map(|&(mm, nc, _)| self.perp_levels[nc][mm].dim()).collect();
            let refs: Vec<(usize, usize, &SparseMatrix)> = parts.iter().map(|(r, c, m)| (*r, *c, m)).collect();
            out.push(SparseMatrix::block(&rs, &cs, &refs));
        }
        Ok(out)
    }

    pub fn hh_table(&self) -> Vec<usize> {
        self.chain.homology_table().into_iter().take(self.top).map(|(_, d)| d).collect()
    }
}

/// C_n(A) → C_n(A') for an algebra map, on free tuples.
fn tensor_power_maps(
    src: &CyclicModule,
    dst: &CyclicModule,
    da: usize,
    db: usize,
    f: &SparseMatrix,
) -> Vec<SparseMatrix> {
    (0..=src.top())
        .map(|k| {
            let s = TensorSpace::new(vec![da; k + 1]);
            let t = TensorSpace::new(vec![db; k + 1]);
            let cols = (0..src.dims[k])
                .map(|i| {
                    let fs: Vec<SparseVec> = s.digits(i).iter().map(|&x| f.col(x).clone()).collect();
                    t.product_vec(&fs)
                })
                .collect();
            debug_assert_eq!(t.size(), dst.dims[k]);
            SparseMatrix::from_columns(t.size(), cols)
        })
        .collect()
}

fn kernels(maps: &[SparseMatrix]) -> Vec<Subspace> {
    maps.iter().map(kernel_basis).collect()
}

/// HC of the total bicomplex against HC(R#Γ) over Q, degrees 0..=max.
pub fn hc_crossed_check(b: &Bundle, max_degree: usize) -> Result<CheckReport, CrossedError> {
    if b.n > 2 || max_degree > 3 {
        return Err(CrossedError::SizeLimit(format!(
            "hc check needs N ≤ 2 and degree ≤ 3, got {} and {max_degree}",
            b.n
        )));
    }
    let top = max_degree + 1;
    let h = Hyper::new(b, &CovariantBimodule::regular(b), true, top, true)?;
    let lhs = h.mixed.as_ref().expect("cyclic").hc_table()?;
    let c = crossed_product(b)?;
    let rhs = absolute_cyclic_module(&c.algebra, top)?.mixed()?.hc_table()?;
    Ok(CheckReport::from_tables(&lhs, &rhs))
}

/// Hochschild homology of the total bicomplex against
/// HH(R#Γ/𝒫, M#Γ), degrees 0..=max.
pub fn hh_crossed_check(b: &Bundle, m: &CovariantBimodule, max_degree: usize) -> Result<CheckReport, CrossedError> {
    if b.n > 3 || max_degree > 3 {
        return Err(CrossedError::SizeLimit(format!(
            "hh check needs N ≤ 3 and degree ≤ 3, got {} and {max_degree}",
            b.n
        )));
    }
    let top = max_degree + 1;
    let lhs = Hyper::new(b, m, false, top, true)?.hh_table();
    let c = crossed_product(b)?;
    let (_, mb) = c.bimodule(m)?;
    let (cm, _) = hochschild_module(&c.p_embedding()?, &mb, false, top, true)?;
    let rhs: Vec<usize> = cm.hochschild()?.homology_table().into_iter().take(top).map(|(_, d)| d).collect();
    Ok(CheckReport::from_tables(&lhs, &rhs))
}

/// (dim M_E, dim HH_0(R#Γ, M#Γ)).
pub fn hh0_coinvariants(b: &Bundle, m: &CovariantBimodule) -> Result<(usize, usize), CrossedError> {
    let c = crossed_product(b)?;
    let (_, mb) = c.bimodule(m)?;
    let (cm, _) = hochschild_module(&c.p_embedding()?, &mb, false, 1, true)?;
    Ok((m.action.coinvariants().dim(), cm.hochschild()?.homology(0)?))
}

/// Relative HC for an invariant ideal I ⊂ R: the kernel of the map to the
/// R/I model, on the bicomplex side and on C(R#Γ) over Q.
pub fn relative_hc_check(b: &Bundle, ideal: &[SparseVec], max_degree: usize) -> Result<CheckReport, CrossedError> {
    if b.n > 2 || max_degree > 2 {
        return Err(CrossedError::SizeLimit(format!(
            "relative check needs N ≤ 2 and degree ≤ 2, got {} and {max_degree}",
            b.n
        )));
    }
    let top = max_degree + 1;
    let (qb, proj) = b.quotient(ideal)?;
    let h = Hyper::new(b, &CovariantBimodule::regular(b), true, top, true)?;
    let hq = Hyper::new(&qb, &CovariantBimodule::regular(&qb), true, top, true)?;
    let f = h.map_to(&hq, &proj, true)?;
    let lhs = h.mixed.as_ref().expect("cyclic").restrict(&kernels(&f))?.hc_table()?;
    let c = crossed_product(b)?;
    let cq = crossed_product(&qb)?;
    let g = c.induced_map(&cq, &proj);
    let src = absolute_cyclic_module(&c.algebra, top)?;
    let dst = absolute_cyclic_module(&cq.algebra, top)?;
    let maps = tensor_power_maps(&src, &dst, c.dim(), cq.dim(), &g);
    let rhs = src.mixed()?.restrict(&kernels(&maps))?.hc_table()?;
    Ok(CheckReport::from_tables(&lhs, &rhs))
}

/// (x)^N inside (Q[x]/x^m)^N.
pub fn sequence_ideal(b: &Bundle, gens: &[SparseVec]) -> Vec<SparseVec> {
    let da = b.sequence_base.as_ref().map_or(b.algebra.dim(), |a| a.dim());
    (0..b.n).flat_map(|i| gens.iter().map(move |g| g.shifted(i * da))).collect()
}
