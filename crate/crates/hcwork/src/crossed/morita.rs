//! Morita stability of the relative complex ⊥(B/A, N): the doubled
//! augmented algebra (M_2B, A⊕A, π), the corner inclusion ι and the
//! retraction p′ of ι′ on the relative resolutions.

use serde::Serialize;

use crate::algebra::{FinAlgebra, SubalgebraEmbedding};
use crate::complexes::hochschild::{perp_module, RightModule};
use crate::complexes::tensor::{induce_tuple_map, TupleLevel};
use crate::complexes::ChainComplex;
use crate::exactla::{q, SparseMatrix, SparseVec};

use super::CrossedError;

/// (M_2B, A⊕A) with (a_1, a_2) ↦ E_00 a_1 + E_11 a_2 and
/// π(E_ij x) = π(x) placed in component i.
pub fn doubled(e: &SubalgebraEmbedding) -> Result<SubalgebraEmbedding, CrossedError> {
    let pi = e.retraction().ok_or_else(|| CrossedError::NotCovariant("base has no retraction".into()))?;
    let (da, db) = (e.small.dim(), e.big.dim());
    let big = FinAlgebra::matrix_algebra(2, &e.big);
    let small = FinAlgebra::power(&e.small, 2);
    let mut it = Vec::new();
    for m in 0..2 {
        for k in 0..da {
            for (x, c) in e.iota.col(k).iter() {
                it.push(((m * 2 + m) * db + x, m * da + k, c.clone()));
            }
        }
    }
    let mut pt = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..db {
                for (a, c) in pi.col(k).iter() {
                    pt.push((i * da + a, (i * 2 + j) * db + k, c.clone()));
                }
            }
        }
    }
    let iota = SparseMatrix::from_triplets(2 * 2 * db, 2 * da, it);
    let p = SparseMatrix::from_triplets(2 * da, 2 * 2 * db, pt);
    Ok(SubalgebraEmbedding::new(small, big, iota, Some(p))?)
}

/// N^{1×2} as a right M_2B-module: (n_0, n_1)·E_ij x puts n_i·x in slot j.
pub fn row_module(n: &RightModule, db: usize) -> RightModule {
    let d = n.dim;
    let mut act = Vec::with_capacity(4 * db);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..db {
                let trips =
                    (0..d).flat_map(|v| n.act[k].col(v).iter().map(move |(w, c)| (j * d + w, i * d + v, c.clone())));
                act.push(SparseMatrix::from_triplets(2 * d, 2 * d, trips.collect::<Vec<_>>()));
            }
        }
    }
    RightModule { dim: 2 * d, act }
}

/// B^{2×1}: two copies of the regular right module, copy r at r*dim(B).
pub fn column_module(b: &FinAlgebra) -> RightModule {
    let reg = RightModule::regular(b);
    let d = b.dim();
    let act = reg
        .act
        .iter()
        .map(|m| {
            let trips = (0..2).flat_map(|r| {
                (0..d).flat_map(move |v| m.col(v).iter().map(move |(w, c)| (r * d + w, r * d + v, c.clone())))
            });
            SparseMatrix::from_triplets(2 * d, 2 * d, trips.collect::<Vec<_>>())
        })
        .collect();
    RightModule { dim: 2 * d, act }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub source: usize,
    pub target: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaReport {
    pub iota_chain_map: bool,
    pub degrees: Vec<DegreeRow>,
    pub resolutions_chain_maps: bool,
    pub retraction_identity: bool,
}

impl MoritaReport {
    pub fn quasi_iso(&self) -> bool {
        self.iota_chain_map && self.degrees.iter().all(|r| r.source == r.rank && r.target == r.rank)
    }

    pub fn passed(&self) -> bool {
        self.quasi_iso() && self.resolutions_chain_maps && self.retraction_identity
    }
}

type Built = (ChainComplex, Vec<TupleLevel>);

fn perp(e: &SubalgebraEmbedding, m: &RightModule, top: usize) -> Result<Built, CrossedError> {
    let (c, lv) = perp_module(e, m, top, None, true)?;
    Ok((c.hochschild()?, lv))
}

fn tuple_maps(
    src: &[TupleLevel],
    dst: &[TupleLevel],
    what: &str,
    f: impl Fn(&[usize]) -> Option<Vec<usize>>,
) -> Result<Vec<SparseMatrix>, CrossedError> {
    src.iter()
        .zip(dst)
        .map(|(s, d)| {
            Ok(induce_tuple_map(s, d, what, true, |t| match f(t) {
                Some(u) => d.space.tuple_vec(&u, q(1)),
                None => SparseVec::new(),
            })?)
        })
        .collect()
}

/// Checks ι in degrees below `top` and ι′, p′ with p′ι′ = 1 up to `top`.
pub fn morita_check(e: &SubalgebraEmbedding, n: &RightModule, top: usize) -> Result<MoritaReport, CrossedError> {
    let db = e.big.dim();
    let d2 = doubled(e)?;
    let (src, sl) = perp(e, n, top)?;
    let (dst, dl) = perp(&d2, &row_module(n, db), top)?;
    // slot 0 of N^{1×2} and E_00 x keep the index of n and x
    let iota = tuple_maps(&sl, &dl, "ι", |t| Some(t.to_vec()))?;
    let iota_chain_map = src.is_chain_map(&dst, &iota);
    let degrees = (0..top)
        .map(|k| DegreeRow {
            degree: k,
            source: src.homology(k as i32).unwrap_or(0),
            target: dst.homology(k as i32).unwrap_or(0),
            rank: src.induced_homology_rank(&dst, k as i32, &iota[k]),
        })
        .collect();

    let (ps, psl) = perp(e, &column_module(&e.big), top)?;
    let (pd, pdl) = perp(&d2, &RightModule::regular(&d2.big), top)?;
    let split = |x: usize| ((x / db) / 2, (x / db) % 2, x % db);
    let iota_p = tuple_maps(&psl, &pdl, "ι′", |t| {
        let (r, k) = (t[0] / db, t[0] % db);
        let mut u = vec![(r * 2) * db + k];
        u.extend_from_slice(&t[1..]);
        Some(u)
    })?;
    let p_prime = tuple_maps(&pdl, &psl, "p′", |t| {
        let (i0, mut prev, k0) = split(t[0]);
        let mut u = vec![i0 * db + k0];
        for &x in &t[1..] {
            let (i, j, k) = split(x);
            if i != prev {
                return None;
            }
            prev = j;
            u.push(k);
        }
        Some(u)
    })?;
    let resolutions_chain_maps = ps.is_chain_map(&pd, &iota_p) && pd.is_chain_map(&ps, &p_prime);
    let retraction_identity = p_prime.iter().zip(&iota_p).all(|(p, i)| p.mul(i) == SparseMatrix::identity(i.ncols()));
    Ok(MoritaReport { iota_chain_map, degrees, resolutions_chain_maps, retraction_identity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize) -> RightModule {
        let act = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                SparseMatrix::from_triplets(n, n, [(j, i, q(1))])
            })
            .collect();
        RightModule { dim: n, act }
    }

    #[test]
    fn doubled_is_an_augmented_algebra() {
        let e = SubalgebraEmbedding::diagonal_in_matrices(2);
        let d = doubled(&e).unwrap();
        assert_eq!((d.small.dim(), d.big.dim()), (4, 16));
        row_module(&row(2), 4).validate(&d.big).unwrap();
        column_module(&e.big).validate(&e.big).unwrap();
    }

    #[test]
    fn corner_inclusion_is_quasi_iso_n2() {
        let e = SubalgebraEmbedding::diagonal_in_matrices(2);
        // H_0 = N ⊗_Γ 𝒫: Q^{1×2} ⊗ Q^{2×1} = Q and Γ ⊗_Γ 𝒫 = 𝒫
        for (n, h0) in [(row(2), 1), (RightModule::regular(&e.big), 2)] {
            let r = morita_check(&e, &n, 3).unwrap();
            assert!(r.passed(), "{r:?}");
            let hs: Vec<_> = r.degrees.iter().map(|d| d.source).collect();
            assert_eq!(hs, vec![h0, 0, 0]);
        }
    }
}
