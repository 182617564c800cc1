//! Kähler forms of presented commutative algebras, the map μ from Hochschild
//! chains to forms, the ideal filtration ℱ_p(S) with its complexes L^(p) and
//! D^(p), and comparisons with the Hodge pieces of HH and HC of R/S computed
//! from the square-zero model Λ = R ⊕ S[1].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FinAlgebra};
use crate::complexes::hochschild::absolute_cyclic_module;
use crate::complexes::hodge::{GradedCommAlgebra, HodgeComplex};
use crate::complexes::specseq::FilteredComplex;
use crate::complexes::tensor::{TensorSpace, TupleLevel};
use crate::complexes::{ChainComplex, ComplexError};
use crate::crossed::{CheckReport, CrossedError, EmbModule};
use crate::exactla::{parse_q, q, qr, LaError, Quotient, SparseMatrix, SparseVec, Subspace, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("monomial basis is infinite: {0}")]
    InfiniteBasis(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
}

impl From<LaError> for FormsError {
    fn from(e: LaError) -> Self {
        FormsError::Algebra(e.into())
    }
}

/// c · x^e, one exponent per variable.
pub type Term = (Q, Vec<usize>);
pub type Poly = Vec<Term>;

/// JSON form: {"vars": [...], "relations": [...], "ideal": [...]}, each
/// polynomial a list of [coefficient, exponents] pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentedJson {
    pub vars: Vec<String>,
    pub relations: Vec<Vec<(String, Vec<usize>)>>,
    #[serde(default)]
    pub ideal: Vec<Vec<(String, Vec<usize>)>>,
}

fn parse_poly(p: &[(String, Vec<usize>)], nv: usize, what: &str) -> Result<Poly, FormsError> {
    p.iter()
        .map(|(c, e)| {
            if e.len() != nv {
                return Err(FormsError::Malformed(format!(
                    "{what}: exponent list of length {} for {nv} variables",
                    e.len()
                )));
            }
            let c = parse_q(c).map_err(|_| FormsError::Malformed(format!("{what}: coefficient {c:?}")))?;
            Ok((c, e.clone()))
        })
        .collect()
}

/// Q[x_1..x_v]/(relations), finite-dimensional because every variable has a
/// pure power among the relations. T is the truncated monomial space below
/// those powers and A = T/J.
#[derive(Clone, Debug)]
pub struct CommPresentedAlgebra {
    vars: Vec<String>,
    relations: Vec<Poly>,
    mono: TensorSpace,
    quot: Quotient,
    alg: FinAlgebra,
}

impl CommPresentedAlgebra {
    pub fn new(vars: Vec<String>, relations: Vec<Poly>) -> Result<Self, FormsError> {
        let nv = vars.len();
        for r in &relations {
            if r.iter().any(|(_, e)| e.len() != nv) {
                return Err(FormsError::Malformed("exponent list length differs from the number of variables".into()));
            }
        }
        let mut bounds = Vec::with_capacity(nv);
        for (i, v) in vars.iter().enumerate() {
            let pure = relations
                .iter()
                .filter_map(|r| match r.as_slice() {
                    [(c, e)] if *c != q(0) && e[i] > 0 && e.iter().enumerate().all(|(j, &x)| j == i || x == 0) => {
                        Some(e[i])
                    }
                    _ => None,
                })
                .min();
            bounds.push(pure.ok_or_else(|| FormsError::InfiniteBasis(format!("no pure power relation for {v}")))?);
        }
        let mono = TensorSpace::new(bounds);
        let t = FinAlgebra::new(mono.size(), Some(SparseVec::unit(0)), monomial_table(&mono))?;
        let mut rels = Vec::new();
        for r in &relations {
            let rv = reduce_in(&mono, r);
            for m in 0..mono.size() {
                let v = t.mul(&SparseVec::unit(m), &rv);
                if !v.is_zero() {
                    rels.push(v);
                }
            }
        }
        let labels: Vec<String> = (0..mono.size()).map(|m| monomial_label(&vars, &mono.digits(m))).collect();
        let t = t.with_labels(labels);
        let (alg, quot) = t.quotient(&rels)?;
        Ok(CommPresentedAlgebra { vars, relations, mono, quot, alg })
    }

    /// Q[x]/(x^m).
    pub fn truncated_poly(m: usize) -> Self {
        Self::new(vec!["x".into()], vec![vec![(q(1), vec![m])]]).expect("pure power presentation")
    }

    /// The algebra and the ideal generators of a JSON presentation.
    pub fn from_json(j: &PresentedJson) -> Result<(Self, Vec<Poly>), FormsError> {
        let nv = j.vars.len();
        let rels = j
            .relations
            .iter()
            .enumerate()
            .map(|(k, p)| parse_poly(p, nv, &format!("relations[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let ideal = j
            .ideal
            .iter()
            .enumerate()
            .map(|(k, p)| parse_poly(p, nv, &format!("ideal[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((Self::new(j.vars.clone(), rels)?, ideal))
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.alg
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// A polynomial as an element of A.
    pub fn element(&self, p: &Poly) -> SparseVec {
        self.quot.project(&reduce_in(&self.mono, p))
    }

    /// The ideal of A generated by the given polynomials, as a subspace.
    pub fn ideal(&self, gens: &[Poly]) -> Subspace {
        let mut vs = Vec::new();
        for g in gens {
            let gv = self.element(g);
            for k in 0..self.dim() {
                vs.push(self.alg.mul(&SparseVec::unit(k), &gv));
            }
        }
        Subspace::span_owned(self.dim(), vs)
    }

    fn lift_monomial(&self, k: usize) -> usize {
        self.quot.lift(k)
    }
}

fn monomial_table(mono: &TensorSpace) -> Vec<SparseVec> {
    let n = mono.size();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let ea = mono.digits(a);
        for b in 0..n {
            let eb = mono.digits(b);
            let e: Vec<usize> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(mono.radices()).all(|(x, r)| x < r) {
                table.push(SparseVec::unit(mono.index(&e)));
            } else {
                table.push(SparseVec::new());
            }
        }
    }
    table
}

fn reduce_in(mono: &TensorSpace, p: &Poly) -> SparseVec {
    let pairs = p
        .iter()
        .filter(|(_, e)| e.iter().zip(mono.radices()).all(|(x, r)| x < r))
        .map(|(c, e)| (mono.index(e), c.clone()));
    SparseVec::from_pairs(pairs.collect::<Vec<_>>())
}

fn monomial_label(vars: &[String], e: &[usize]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &x)| x > 0)
        .map(|(v, &x)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// e_I ∧ e_J = sign · e_{I∪J}, or None when I and J meet.
fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inv = 0;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inv += 1;
            }
        }
    }
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    Some((u, inv % 2 == 1))
}

/// Ω^q_A = (T ⊗ Λ^q Q^v) / (J ⊗ Λ^q + T·dr ∧ Λ^{q-1}) for q = 0..=max_q,
/// with the de Rham differential.
#[derive(Clone, Debug)]
pub struct Kaehler {
    pub algebra: CommPresentedAlgebra,
    wedges: Vec<Vec<Vec<usize>>>,
    wedge_index: Vec<HashMap<Vec<usize>, usize>>,
    levels: Vec<TupleLevel>,
    d: Vec<SparseMatrix>,
}

/// Free forms: a map from (degree, free index) to coefficients.
type Free = (usize, SparseVec);

impl Kaehler {
    pub fn new(r: &CommPresentedAlgebra, max_q: usize) -> Result<Self, FormsError> {
        let nv = r.nvars();
        let wedges: Vec<Vec<Vec<usize>>> = (0..=max_q + 1).map(|k| subsets(nv, k)).collect();
        let wedge_index = wedges.iter().map(|w| w.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        let mut k = Kaehler { algebra: r.clone(), wedges, wedge_index, levels: Vec::new(), d: Vec::new() };
        let tsize = r.mono.size();
        let jbasis: Vec<SparseVec> = r.quot.relations().basis().to_vec();
        let drs: Vec<SparseVec> = r.relations.iter().map(|p| k.free_d_poly(p)).collect();
        for qd in 0..=max_q + 1 {
            let space = TensorSpace::new(vec![tsize, k.wedges[qd].len()]);
            let mut rels = Vec::new();
            for v in &jbasis {
                for w in 0..k.wedges[qd].len() {
                    rels.push(space.substitute(&[0, w], 0, v));
                }
            }
            if qd >= 1 {
                for dr in &drs {
                    for m in 0..tsize {
                        for w in 0..k.wedges[qd - 1].len() {
                            let base = SparseVec::unit(m * k.wedges[qd - 1].len() + w);
                            let v = k.free_mul((1, dr.clone()), (qd - 1, base));
                            if !v.1.is_zero() {
                                rels.push(v.1);
                            }
                        }
                    }
                }
            }
            k.levels.push(TupleLevel::new(space, rels));
        }
        for qd in 0..=max_q {
            let (src, dst) = (&k.levels[qd], &k.levels[qd + 1]);
            let f = |i: usize| k.free_d(qd, i);
            if !src.quot.descends(&dst.quot, f) {
                return Err(FormsError::Complex(ComplexError::NotWellDefined(format!("d on Ω^{qd}"))));
            }
            k.d.push(src.quot.induce(&dst.quot, f));
        }
        k.levels.truncate(max_q + 1);
        k.wedges.truncate(max_q + 1);
        Ok(k)
    }

    pub fn max_q(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self, qd: usize) -> usize {
        self.levels.get(qd).map_or(0, |l| l.dim())
    }

    /// d : Ω^q → Ω^{q+1}.
    pub fn d(&self, qd: usize) -> &SparseMatrix {
        &self.d[qd]
    }

    fn nw(&self, qd: usize) -> usize {
        self.wedges[qd].len()
    }

    fn free_d(&self, qd: usize, idx: usize) -> SparseVec {
        let (m, w) = (idx / self.nw(qd), idx % self.nw(qd));
        let mono = &self.algebra.mono;
        let e = mono.digits(m);
        let mut pairs = Vec::new();
        for i in 0..e.len() {
            if e[i] == 0 {
                continue;
            }
            if let Some((u, neg)) = merge(&[i], &self.wedges[qd][w]) {
                let mut ee = e.clone();
                ee[i] -= 1;
                let c = q(e[i] as i64);
                let c = if neg { -c } else { c };
                pairs.push((mono.index(&ee) * self.nw(qd + 1) + self.wedge_index[qd + 1][&u], c));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// d of a polynomial before truncation, as a free 1-form.
    fn free_d_poly(&self, p: &Poly) -> SparseVec {
        let mono = &self.algebra.mono;
        let nv = self.algebra.nvars();
        let mut pairs = Vec::new();
        for (c, e) in p {
            for i in 0..nv {
                if e[i] == 0 {
                    continue;
                }
                let mut ee = e.clone();
                ee[i] -= 1;
                if ee.iter().zip(mono.radices()).all(|(x, r)| x < r) {
                    pairs.push((mono.index(&ee) * nv + i, c * q(e[i] as i64)));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    fn free_mul(&self, a: Free, b: Free) -> Free {
        let mono = &self.algebra.mono;
        let (pa, pb) = (a.0, b.0);
        let (na, nb, nc) = (self.nw(pa), self.nw(pb), self.nw(pa + pb));
        let mut pairs = Vec::new();
        for (i, x) in a.1.iter() {
            for (j, y) in b.1.iter() {
                let (ma, wa) = (i / na, i % na);
                let (mb, wb) = (j / nb, j % nb);
                let ea = mono.digits(ma);
                let eb = mono.digits(mb);
                let e: Vec<usize> = ea.iter().zip(&eb).map(|(s, t)| s + t).collect();
                if !e.iter().zip(mono.radices()).all(|(s, r)| s < r) {
                    continue;
                }
                if let Some((u, neg)) = merge(&self.wedges[pa][wa], &self.wedges[pb][wb]) {
                    let c = x * y;
                    let c = if neg { -c } else { c };
                    pairs.push((mono.index(&e) * nc + self.wedge_index[pa + pb][&u], c));
                }
            }
        }
        (pa + pb, SparseVec::from_pairs(pairs))
    }

    fn project(&self, f: &Free) -> SparseVec {
        self.levels[f.0].quot.project(&f.1)
    }

    fn lift(&self, qd: usize, k: usize) -> Free {
        (qd, SparseVec::unit(self.levels[qd].quot.lift(k)))
    }

    /// The free 0-form of basis element k of A.
    fn function(&self, k: usize) -> Free {
        (0, SparseVec::unit(self.algebra.lift_monomial(k)))
    }

    /// Multiplication by a ∈ A on Ω^q.
    pub fn mul_matrix(&self, a: &SparseVec, qd: usize) -> SparseMatrix {
        let cols = (0..self.dim(qd))
            .map(|k| {
                let mut acc = SparseVec::new();
                for (i, c) in a.iter() {
                    let v = self.project(&self.free_mul(self.function(*i), self.lift(qd, k)));
                    acc = acc.add_scaled(&v, c);
                }
                acc
            })
            .collect();
        SparseMatrix::from_columns(self.dim(qd), cols)
    }

    /// μ : C_n(A) → Ω^n, a_0 ⊗ ... ⊗ a_n ↦ (1/n!) a_0 da_1 ∧ ... ∧ da_n, on the
    /// unnormalized chains of the absolute cyclic module.
    pub fn mu(&self, n: usize) -> Result<SparseMatrix, FormsError> {
        if !self.algebra.alg.is_commutative() {
            return Err(ComplexError::NotCommutative.into());
        }
        self.need(n)?;
        let da = self.algebra.dim();
        let sp = TensorSpace::new(vec![da; n + 1]);
        let scale = qr(1, (1..=n as i64).product());
        let dfun: Vec<Free> = (0..da).map(|k| (1, self.free_d(0, self.algebra.lift_monomial(k)))).collect();
        let cols = (0..sp.size())
            .map(|idx| {
                let t = sp.digits(idx);
                let mut acc = self.function(t[0]);
                for &a in &t[1..] {
                    acc = self.free_mul(acc, dfun[a].clone());
                }
                self.project(&acc).scale(&scale)
            })
            .collect();
        Ok(SparseMatrix::from_columns(self.dim(n), cols))
    }

    /// S^k Ω^q for the ideal S (as a subspace of A); S^0 = A.
    pub fn ideal_forms(&self, s: &Subspace, k: usize, qd: usize) -> Subspace {
        let amb = self.dim(qd);
        if k == 0 {
            return Subspace::full(amb);
        }
        let sk = ideal_power(&self.algebra.alg, s, k);
        let mut vs = Vec::new();
        for u in sk.basis() {
            let m = self.mul_matrix(u, qd);
            vs.extend(m.columns().iter().cloned());
        }
        Subspace::span_owned(amb, vs)
    }

    /// ℱ_p^q = S^{p-q+1} Ω^q for p ≥ q, and Ω^q for q > p.
    pub fn filtration(&self, s: &Subspace, p: i64, qd: usize) -> Subspace {
        if (qd as i64) > p {
            return Subspace::full(self.dim(qd));
        }
        self.ideal_forms(s, (p - qd as i64 + 1) as usize, qd)
    }

    /// Ω^0 → ... → Ω^p as a complex in degrees -p..=0 (Ω^q in degree -q).
    fn de_rham_window(&self, p: usize) -> Result<ChainComplex, FormsError> {
        let dims: Vec<usize> = (0..=p).rev().map(|qd| self.dim(qd)).collect();
        let mut d = vec![SparseMatrix::zero(0, dims[0])];
        for i in 1..=p {
            d.push(self.d[p - i].clone());
        }
        Ok(ChainComplex::new(-(p as i32), dims, d)?)
    }

    /// D^(p)(S)_q = Ω^{-q} / ℱ_p^{-q}.
    pub fn d_complex(&self, s: &Subspace, p: usize) -> Result<ChainComplex, FormsError> {
        self.need(p)?;
        let x = self.de_rham_window(p)?;
        let subs: Vec<Subspace> = (0..=p).rev().map(|qd| self.filtration(s, p as i64, qd)).collect();
        Ok(x.quotient(&subs)?.0)
    }

    /// L^(p)(S)_q = ℱ_{p-1}^{-q} / ℱ_p^{-q}.
    pub fn l_complex(&self, s: &Subspace, p: usize) -> Result<ChainComplex, FormsError> {
        self.need(p)?;
        let x = self.de_rham_window(p)?;
        let big: Vec<Subspace> = (0..=p).rev().map(|qd| self.filtration(s, p as i64 - 1, qd)).collect();
        let small: Vec<Subspace> = (0..=p).rev().map(|qd| self.filtration(s, p as i64, qd)).collect();
        let y = x.restrict(&big)?;
        let coords: Vec<Subspace> = big
            .iter()
            .zip(&small)
            .map(|(b, sm)| {
                let vs = sm.basis().iter().map(|v| b.coords(v).expect("filtration is descending")).collect();
                Subspace::span_owned(b.dim(), vs)
            })
            .collect();
        Ok(y.quotient(&coords)?.0)
    }

    /// SΩ^n / d(S²Ω^{n-1}).
    pub fn milnor_level(&self, s: &Subspace, n: usize) -> Result<MilnorLevel, FormsError> {
        self.need(n)?;
        let top = self.ideal_forms(s, 1, n);
        let image =
            if n == 0 { Subspace::zero(self.dim(0)) } else { self.ideal_forms(s, 2, n - 1).map(&self.d[n - 1]) };
        if !image.is_subspace_of(&top) {
            return Err(FormsError::Malformed("d(S²Ω) not inside SΩ".into()));
        }
        Ok(MilnorLevel { degree: n, ambient: top.dim(), image: image.dim(), dim: top.dim() - image.dim() })
    }

    fn need(&self, qd: usize) -> Result<(), FormsError> {
        if qd > self.max_q() {
            return Err(FormsError::SizeLimit(format!("forms computed up to degree {}", self.max_q())));
        }
        Ok(())
    }
}

/// S^k inside A.
pub fn ideal_power(a: &FinAlgebra, s: &Subspace, k: usize) -> Subspace {
    let mut cur = s.clone();
    for _ in 1..k {
        let mut vs = Vec::new();
        for u in cur.basis() {
            for v in s.basis() {
                vs.push(a.mul(u, v));
            }
        }
        cur = Subspace::span_owned(a.dim(), vs);
    }
    cur
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorLevel {
    pub degree: usize,
    pub ambient: usize,
    pub image: usize,
    pub dim: usize,
}

/// Coinvariants of X^N under the permutation action of the sequence bundle,
/// for a space X of dimension `dim`.
pub fn sequence_coinvariants(dim: usize, n: usize) -> Result<usize, FormsError> {
    let units = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            SparseMatrix::from_triplets(
                n * dim,
                n * dim,
                (0..dim).map(|x| (i * dim + x, j * dim + x, q(1))).collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok(EmbModule::new(n, n * dim, units)?.coinvariants().dim())
}

fn homology_at(c: &ChainComplex, n: i32) -> Result<usize, FormsError> {
    if n < c.lo() || n > c.hi() {
        return Ok(0);
    }
    Ok(c.homology(n)?)
}

/// Tables of HC^(p)_n and HH^(p)_n of R/S from Λ = R ⊕ S[1] against
/// H_{n-2p}(D^(p)) and H_{n-2p}(L^(p)), for n = 0..=max.
#[derive(Clone, Debug, Serialize)]
pub struct CggReport {
    pub p: usize,
    pub hc: CheckReport,
    pub hh: CheckReport,
}

impl CggReport {
    pub fn passed(&self) -> bool {
        self.hc.passed() && self.hh.passed()
    }
}

pub fn cgg_check(r: &CommPresentedAlgebra, s_gens: &[Poly], p: usize, max: usize) -> Result<CggReport, FormsError> {
    if p > 3 || max > 3 {
        return Err(FormsError::SizeLimit("p and the degree are limited to 3".into()));
    }
    let s = r.ideal(s_gens);
    let g = GradedCommAlgebra::square_zero(r.algebra(), s.basis())?;
    let h = HodgeComplex::new(&g, max + 1)?;
    let hc_l = h.hc_weight_table(p)?;
    let hh_l = h.hh_weight_table(p)?;
    let k = Kaehler::new(r, p)?;
    let dc = k.d_complex(&s, p)?;
    let lc = k.l_complex(&s, p)?;
    let shift = 2 * p as i32;
    let hc_r = (0..=max).map(|n| homology_at(&dc, n as i32 - shift)).collect::<Result<Vec<_>, _>>()?;
    let hh_r = (0..=max).map(|n| homology_at(&lc, n as i32 - shift)).collect::<Result<Vec<_>, _>>()?;
    Ok(CggReport { p, hc: CheckReport::from_tables(&hc_l, &hc_r), hh: CheckReport::from_tables(&hh_l, &hh_r) })
}

/// HH^(n)_n(R) against Ω^n and HC^(n)_n(R) against Ω^n / dΩ^{n-1}, n = 0..=max.
#[derive(Clone, Debug, Serialize)]
pub struct HodgeFormsReport {
    pub hh: CheckReport,
    pub hc: CheckReport,
    /// Σ_p dim C^(p)_n and dim C_n for n = 0..=max.
    pub weights: CheckReport,
}

impl HodgeFormsReport {
    pub fn passed(&self) -> bool {
        self.hh.passed() && self.hc.passed() && self.weights.passed()
    }
}

pub fn hodge_forms_check(
    r: &CommPresentedAlgebra,
    max: usize,
    weight_max: usize,
) -> Result<HodgeFormsReport, FormsError> {
    let g = GradedCommAlgebra::ungraded(r.algebra())?;
    let top = (max + 1).max(weight_max);
    let h = HodgeComplex::new(&g, top)?;
    let k = Kaehler::new(r, max)?;
    let mut hh = (Vec::new(), Vec::new());
    let mut hc = (Vec::new(), Vec::new());
    for n in 0..=max {
        hh.0.push(h.hh_weight_table(n)?[n]);
        hh.1.push(k.dim(n));
        hc.0.push(h.hc_weight_table(n)?[n]);
        let exact = if n == 0 { 0 } else { Subspace::image(k.d(n - 1)).dim() };
        hc.1.push(k.dim(n) - exact);
    }
    let wl: Vec<usize> = (0..=weight_max).map(|n| h.weight_dims(n).iter().sum()).collect();
    let wr: Vec<usize> = (0..=weight_max).map(|n| h.mixed().dims()[n]).collect();
    Ok(HodgeFormsReport {
        hh: CheckReport::from_tables(&hh.0, &hh.1),
        hc: CheckReport::from_tables(&hc.0, &hc.1),
        weights: CheckReport::from_tables(&wl, &wr),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuillenEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

/// Spectral sequence of the cyclic complex of Λ = R ⊕ I[1] filtered by the
/// number of I-entries, for total degrees 0..=max.
#[derive(Clone, Debug, Serialize)]
pub struct QuillenReport {
    pub e1: Vec<QuillenEntry>,
    pub e_inf_total: Vec<usize>,
    /// HC_n(R/I) from the quotient algebra.
    pub target: Vec<usize>,
}

impl QuillenReport {
    pub fn e1_vanishes_from(&self, p: usize) -> bool {
        self.e1.iter().all(|e| e.p < p || e.dim == 0)
    }

    pub fn converges(&self) -> bool {
        self.e_inf_total == self.target
    }
}

pub fn quillen(r: &FinAlgebra, ideal: &[SparseVec], max: usize) -> Result<QuillenReport, FormsError> {
    if max > 4 {
        return Err(FormsError::SizeLimit("degree is limited to 4".into()));
    }
    let g = GradedCommAlgebra::square_zero(r, ideal)?;
    let top = max + 1;
    let h = HodgeComplex::new(&g, top)?;
    let tot = h.mixed().cyclic_total(top)?;
    let count = |n: usize, i: usize| h.basis(n)[i].iter().filter(|&&x| g.degree(x) == 1).count();
    let smax = top + 1;
    let mut levels = Vec::with_capacity(smax + 1);
    for s in 0..=smax {
        let lvl: Vec<Subspace> = tot
            .blocks
            .iter()
            .enumerate()
            .map(|(k, bl)| {
                let amb = tot.complex.dim(k as i32);
                let mut vs = Vec::new();
                for &(_, n, off) in bl {
                    for i in 0..h.basis(n).len() {
                        if count(n, i) <= s {
                            vs.push(SparseVec::unit(off + i));
                        }
                    }
                }
                Subspace::span_owned(amb, vs)
            })
            .collect();
        levels.push(lvl);
    }
    let f = FilteredComplex::from_increasing(tot.complex.clone(), levels)?;
    let pages = f.spectral_sequence(2)?;
    let e1 = &pages[1];
    let inf = pages.last().expect("E_∞ page");
    let mut entries = Vec::new();
    for p in 0..=smax {
        for n in p..=max {
            entries.push(QuillenEntry { p, q: n - p, dim: e1.dim(-(p as i32), (n + p) as i32) });
        }
    }
    let e_inf_total = (0..=max).map(|n| inf.total(n as i32)).collect();
    let (quot, _) = r.quotient(ideal)?;
    let target = absolute_cyclic_module(&quot, max + 1)?.mixed()?.hc_table()?;
    Ok(QuillenReport { e1: entries, e_inf_total, target })
}
