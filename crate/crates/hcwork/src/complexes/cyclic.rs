//! Simplicial and cyclic modules truncated at a top degree, and mixed
//! complexes with their cyclic and negative cyclic totalizations.

use crate::exactla::{q, Quotient, SparseMatrix, Subspace};

use super::{ChainComplex, ComplexError};

/// Degrees 0..=top. faces[n][i] : C_n → C_{n-1} (empty for n = 0),
/// degens[n][i] : C_n → C_{n+1} for n < top, tau[n] : C_n → C_n unsigned.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub dims: Vec<usize>,
    pub faces: Vec<Vec<SparseMatrix>>,
    pub degens: Vec<Vec<SparseMatrix>>,
    pub tau: Option<Vec<SparseMatrix>>,
}

fn sign(k: usize) -> crate::exactla::Q {
    if k.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

impl CyclicModule {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    fn shape_check(&self) -> Result<(), ComplexError> {
        let t = self.top();
        if self.faces.len() != t + 1 || self.degens.len() != t {
            return Err(ComplexError::Shape("face/degeneracy counts".into()));
        }
        for n in 1..=t {
            if self.faces[n].len() != n + 1 {
                return Err(ComplexError::Shape(format!("{} faces in degree {n}", self.faces[n].len())));
            }
            for f in &self.faces[n] {
                if f.nrows() != self.dims[n - 1] || f.ncols() != self.dims[n] {
                    return Err(ComplexError::Shape(format!("face shape in degree {n}")));
                }
            }
        }
        for n in 0..t {
            if self.degens[n].len() != n + 1 {
                return Err(ComplexError::Shape(format!("{} degeneracies in degree {n}", self.degens[n].len())));
            }
        }
        Ok(())
    }

    /// All simplicial identities that fit below the top degree.
    pub fn check_simplicial(&self) -> Result<(), ComplexError> {
        self.shape_check()?;
        let t = self.top();
        let d = |n: usize, i: usize| &self.faces[n][i];
        let s = |n: usize, i: usize| &self.degens[n][i];
        let fail = |m: String| Err(ComplexError::Simplicial(m));
        for n in 2..=t {
            for j in 0..=n {
                for i in 0..j {
                    if d(n - 1, i).mul(d(n, j)) != d(n - 1, j - 1).mul(d(n, i)) {
                        return fail(format!("d{i}d{j} in degree {n}"));
                    }
                }
            }
        }
        for n in 0..t {
            let id = SparseMatrix::identity(self.dims[n]);
            for j in 0..=n {
                let sj = s(n, j);
                for i in 0..=n + 1 {
                    let lhs = d(n + 1, i).mul(sj);
                    let rhs = if i < j {
                        s(n - 1, j - 1).mul(d(n, i))
                    } else if i == j || i == j + 1 {
                        id.clone()
                    } else {
                        s(n - 1, j).mul(d(n, i - 1))
                    };
                    if lhs != rhs {
                        return fail(format!("d{i}s{j} in degree {n}"));
                    }
                }
            }
        }
        for n in 0..t.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    if s(n + 1, i).mul(s(n, j)) != s(n + 1, j + 1).mul(s(n, i)) {
                        return fail(format!("s{i}s{j} in degree {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// τ^{n+1} = 1, d_0τ = d_n, d_iτ = τd_{i-1}, s_0τ = τ²s_n, s_iτ = τs_{i-1}.
    pub fn check_cyclic(&self) -> Result<(), ComplexError> {
        self.check_simplicial()?;
        let tau = self.tau.as_ref().ok_or_else(|| ComplexError::NotCyclic("no cyclic operator".into()))?;
        let fail = |m: String| Err(ComplexError::NotCyclic(m));
        for n in 0..=self.top() {
            let mut p = SparseMatrix::identity(self.dims[n]);
            for _ in 0..=n {
                p = tau[n].mul(&p);
            }
            if p != SparseMatrix::identity(self.dims[n]) {
                return fail(format!("τ^(n+1) ≠ 1 in degree {n}"));
            }
            if n >= 1 {
                if self.faces[n][0].mul(&tau[n]) != self.faces[n][n] {
                    return fail(format!("d0τ in degree {n}"));
                }
                for i in 1..=n {
                    if self.faces[n][i].mul(&tau[n]) != tau[n - 1].mul(&self.faces[n][i - 1]) {
                        return fail(format!("d{i}τ in degree {n}"));
                    }
                }
            }
            if n < self.top() {
                let s = &self.degens[n];
                if s[0].mul(&tau[n]) != tau[n + 1].mul(&tau[n + 1]).mul(&s[n]) {
                    return fail(format!("s0τ in degree {n}"));
                }
                for i in 1..=n {
                    if s[i].mul(&tau[n]) != tau[n + 1].mul(&s[i - 1]) {
                        return fail(format!("s{i}τ in degree {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// b = Σ_{i=0}^{n} (-1)^i d_i.
    pub fn b(&self, n: usize) -> SparseMatrix {
        self.alternating(n, n + 1)
    }

    /// b' = Σ_{i=0}^{n-1} (-1)^i d_i.
    pub fn b_prime(&self, n: usize) -> SparseMatrix {
        self.alternating(n, n)
    }

    fn alternating(&self, n: usize, count: usize) -> SparseMatrix {
        if n == 0 {
            return SparseMatrix::zero(0, self.dims[0]);
        }
        let mut acc = SparseMatrix::zero(self.dims[n - 1], self.dims[n]);
        for i in 0..count {
            acc = acc.add_scaled(&self.faces[n][i], &sign(i));
        }
        acc
    }

    /// Hochschild complex (C, b) in degrees 0..=top.
    pub fn hochschild(&self) -> Result<ChainComplex, ComplexError> {
        let ds = (1..=self.top()).map(|n| self.b(n)).collect();
        ChainComplex::from_boundaries(self.dims.clone(), ds)
    }

    /// Bar complex (C, b') in degrees 0..=top.
    pub fn bar(&self) -> Result<ChainComplex, ComplexError> {
        let ds = (1..=self.top()).map(|n| self.b_prime(n)).collect();
        ChainComplex::from_boundaries(self.dims.clone(), ds)
    }

    /// Signed cyclic operator t = (-1)^n τ.
    pub fn t_signed(&self, n: usize) -> Result<SparseMatrix, ComplexError> {
        let tau = self.tau.as_ref().ok_or_else(|| ComplexError::NotCyclic("no cyclic operator".into()))?;
        Ok(tau[n].scale(&sign(n)))
    }

    /// Connes' B : C_n → C_{n+1}, B = (1 - t)·s·N with s = τ s_n and
    /// N = Σ t^i.
    pub fn connes_b(&self, n: usize) -> Result<SparseMatrix, ComplexError> {
        if n >= self.top() {
            return Err(ComplexError::DegreeOutOfRange(n as i32 + 1));
        }
        let tau = self.tau.as_ref().ok_or_else(|| ComplexError::NotCyclic("no cyclic operator".into()))?;
        let t = self.t_signed(n)?;
        let mut norm = SparseMatrix::zero(self.dims[n], self.dims[n]);
        let mut p = SparseMatrix::identity(self.dims[n]);
        for _ in 0..=n {
            norm = norm.add(&p);
            p = t.mul(&p);
        }
        let extra = tau[n + 1].mul(&self.degens[n][n]);
        let one_minus_t = SparseMatrix::identity(self.dims[n + 1]).sub(&self.t_signed(n + 1)?);
        Ok(one_minus_t.mul(&extra).mul(&norm))
    }

    pub fn mixed(&self) -> Result<MixedComplex, ComplexError> {
        let b = (0..=self.top()).map(|n| self.b(n)).collect();
        let bb = (0..self.top()).map(|n| self.connes_b(n)).collect::<Result<_, _>>()?;
        MixedComplex::new(self.dims.clone(), b, bb)
    }

    /// Quotient by a family of subspaces stable under all structure maps,
    /// e.g. the span of degenerate elements.
    pub fn quotient(&self, subs: &[Subspace]) -> Result<(CyclicModule, Vec<Quotient>), ComplexError> {
        if subs.len() != self.dims.len() {
            return Err(ComplexError::Shape("one subspace per degree".into()));
        }
        let qs: Vec<Quotient> = subs.iter().map(|s| Quotient::new(s.clone())).collect();
        let ind = |src: usize, dst: usize, m: &SparseMatrix, what: String| -> Result<SparseMatrix, ComplexError> {
            let f = |i: usize| m.col(i).clone();
            if !qs[src].descends(&qs[dst], f) {
                return Err(ComplexError::NotWellDefined(what));
            }
            Ok(qs[src].induce(&qs[dst], f))
        };
        let mut faces = vec![vec![]];
        for n in 1..=self.top() {
            let fs = (0..=n)
                .map(|i| ind(n, n - 1, &self.faces[n][i], format!("d{i} in degree {n}")))
                .collect::<Result<_, _>>()?;
            faces.push(fs);
        }
        let mut degens = vec![];
        for n in 0..self.top() {
            let ss = (0..=n)
                .map(|i| ind(n, n + 1, &self.degens[n][i], format!("s{i} in degree {n}")))
                .collect::<Result<_, _>>()?;
            degens.push(ss);
        }
        let tau = match &self.tau {
            Some(ts) => Some(
                ts.iter()
                    .enumerate()
                    .map(|(n, t)| ind(n, n, t, format!("τ in degree {n}")))
                    .collect::<Result<_, _>>()?,
            ),
            None => None,
        };
        let dims = qs.iter().map(|q| q.dim()).collect();
        Ok((CyclicModule { dims, faces, degens, tau }, qs))
    }

    /// Span of the images of the degeneracies in each degree.
    pub fn degenerate_subspaces(&self) -> Vec<Subspace> {
        let mut out = vec![Subspace::zero(self.dims[0])];
        for n in 1..=self.top() {
            let mut vs = Vec::new();
            for s in &self.degens[n - 1] {
                vs.extend(s.columns().iter().cloned());
            }
            out.push(Subspace::span_owned(self.dims[n], vs));
        }
        out
    }

    /// The normalized mixed complex (C / D, b, B) for D the degenerate part.
    pub fn normalized_mixed(&self) -> Result<MixedComplex, ComplexError> {
        self.mixed()?.quotient(&self.degenerate_subspaces())
    }
}

/// Mixed complex (C, b, B) in degrees 0..=top. b[n] : C_n → C_{n-1} with
/// b[0] the zero map, bb[n] : C_n → C_{n+1} for n < top.
#[derive(Clone, Debug)]
pub struct MixedComplex {
    dims: Vec<usize>,
    b: Vec<SparseMatrix>,
    bb: Vec<SparseMatrix>,
}

/// The total complex together with the block layout of each degree.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub complex: ChainComplex,
    /// blocks[k] = [(j, degree n of the summand C_n, offset)] in Tot_k.
    pub blocks: Vec<Vec<(usize, usize, usize)>>,
}

impl MixedComplex {
    pub fn new(dims: Vec<usize>, mut b: Vec<SparseMatrix>, bb: Vec<SparseMatrix>) -> Result<Self, ComplexError> {
        let top = dims.len().checked_sub(1).ok_or_else(|| ComplexError::Shape("empty".into()))?;
        if b.len() != top + 1 || bb.len() != top {
            return Err(ComplexError::Shape("map counts".into()));
        }
        b[0] = SparseMatrix::zero(0, dims[0]);
        for n in 1..=top {
            if b[n].nrows() != dims[n - 1] || b[n].ncols() != dims[n] {
                return Err(ComplexError::Shape(format!("b in degree {n}")));
            }
        }
        for n in 0..top {
            if bb[n].nrows() != dims[n + 1] || bb[n].ncols() != dims[n] {
                return Err(ComplexError::Shape(format!("B in degree {n}")));
            }
        }
        for n in 2..=top {
            if !b[n - 1].mul(&b[n]).is_zero() {
                return Err(ComplexError::NotMixed(format!("b² in degree {n}")));
            }
        }
        for n in 0..top.saturating_sub(1) {
            if !bb[n + 1].mul(&bb[n]).is_zero() {
                return Err(ComplexError::NotMixed(format!("B² in degree {n}")));
            }
        }
        for n in 0..top {
            let mut s = b[n + 1].mul(&bb[n]);
            if n >= 1 {
                s = s.add(&bb[n - 1].mul(&b[n]));
            }
            if !s.is_zero() {
                return Err(ComplexError::NotMixed(format!("bB + Bb in degree {n}")));
            }
        }
        Ok(MixedComplex { dims, b, bb })
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn b(&self, n: usize) -> &SparseMatrix {
        &self.b[n]
    }

    pub fn connes_b(&self, n: usize) -> &SparseMatrix {
        &self.bb[n]
    }

    pub fn hochschild(&self) -> Result<ChainComplex, ComplexError> {
        ChainComplex::from_boundaries(self.dims.clone(), self.b[1..].to_vec())
    }

    /// HH_n for n = 0..=top-1; the top degree is used only for boundaries.
    pub fn hh_table(&self) -> Result<Vec<usize>, ComplexError> {
        let h = self.hochschild()?.homology_table();
        Ok(h.into_iter().take(self.top()).map(|(_, d)| d).collect())
    }

    /// Tot_k = ⊕_{j ≥ 0} C_{k-2j} for k = 0..=max, with D = b + B, where the
    /// block j of degree k maps by b into block j and by B into block j-1.
    pub fn cyclic_total(&self, max: usize) -> Result<TotalComplex, ComplexError> {
        if max > self.top() {
            return Err(ComplexError::DegreeOutOfRange(max as i32));
        }
        let mut blocks = Vec::with_capacity(max + 1);
        let mut dims = Vec::with_capacity(max + 1);
        for k in 0..=max {
            let mut off = 0;
            let mut bl = Vec::new();
            for j in 0..=k / 2 {
                let n = k - 2 * j;
                bl.push((j, n, off));
                off += self.dims[n];
            }
            dims.push(off);
            blocks.push(bl);
        }
        let mut ds = Vec::with_capacity(max);
        for k in 1..=max {
            let mut trips = Vec::new();
            for &(j, n, off) in &blocks[k] {
                if n >= 1 {
                    if let Some(&(_, _, doff)) = blocks[k - 1].iter().find(|b| b.0 == j) {
                        trips.extend(self.b[n].entries().into_iter().map(|(r, c, x)| (doff + r, off + c, x)));
                    }
                }
                if j >= 1 {
                    let &(_, _, doff) = blocks[k - 1].iter().find(|b| b.0 == j - 1).expect("block j-1");
                    trips.extend(self.bb[n].entries().into_iter().map(|(r, c, x)| (doff + r, off + c, x)));
                }
            }
            ds.push(SparseMatrix::from_triplets(dims[k - 1], dims[k], trips));
        }
        let complex = ChainComplex::from_boundaries(dims, ds)?;
        Ok(TotalComplex { complex, blocks })
    }

    /// HC_n for n = 0..=top-1.
    pub fn hc_table(&self) -> Result<Vec<usize>, ComplexError> {
        let tot = self.cyclic_total(self.top())?;
        let h = tot.complex.homology_table();
        Ok(h.into_iter().take(self.top()).map(|(_, d)| d).collect())
    }

    /// Periodicity map S : Tot_k → Tot_{k-2}, dropping block 0.
    pub fn s_map(&self, tot: &TotalComplex, k: usize) -> SparseMatrix {
        let rows = tot.complex.dim(k as i32 - 2);
        let cols = tot.complex.dim(k as i32);
        if k < 2 {
            return SparseMatrix::zero(rows, cols);
        }
        let mut trips = Vec::new();
        for &(j, n, off) in &tot.blocks[k] {
            if j >= 1 {
                let &(_, _, doff) = tot.blocks[k - 2].iter().find(|b| b.0 == j - 1).expect("block");
                trips.extend((0..self.dims[n]).map(|i| (doff + i, off + i, q(1))));
            }
        }
        SparseMatrix::from_triplets(rows, cols, trips)
    }

    /// Window of the negative cyclic complex: HN-chains in degree k are
    /// ∏_{m ≥ 0} C_{k+2m}, truncated at the top degree, for lo ≤ k ≤ top.
    /// Only statements insensitive to the truncation should be read off it.
    pub fn negative_window(&self, lo: i32) -> Result<ChainComplex, ComplexError> {
        let top = self.top() as i32;
        if lo > top {
            return Err(ComplexError::DegreeOutOfRange(lo));
        }
        let layout = |k: i32| -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            let mut off = 0;
            let mut n = k;
            while n <= top {
                if n >= 0 {
                    out.push((n as usize, off));
                    off += self.dims[n as usize];
                }
                n += 2;
            }
            out
        };
        let dim_of = |k: i32| layout(k).iter().map(|&(n, _)| self.dims[n]).sum::<usize>();
        let dims: Vec<usize> = (lo..=top).map(dim_of).collect();
        let mut d = vec![SparseMatrix::zero(0, dims[0])];
        for k in lo + 1..=top {
            let src = layout(k);
            let dst = layout(k - 1);
            let mut trips = Vec::new();
            for &(n, off) in &src {
                if n >= 1 {
                    if let Some(&(_, doff)) = dst.iter().find(|x| x.0 == n - 1) {
                        trips.extend(self.b[n].entries().into_iter().map(|(r, c, x)| (doff + r, off + c, x)));
                    }
                }
                if n < self.top() {
                    if let Some(&(_, doff)) = dst.iter().find(|x| x.0 == n + 1) {
                        trips.extend(self.bb[n].entries().into_iter().map(|(r, c, x)| (doff + r, off + c, x)));
                    }
                }
            }
            d.push(SparseMatrix::from_triplets(dim_of(k - 1), dim_of(k), trips));
        }
        ChainComplex::new(lo, dims, d)
    }

    /// Sub mixed complex on subspaces stable under b and B.
    pub fn restrict(&self, subs: &[Subspace]) -> Result<MixedComplex, ComplexError> {
        if subs.len() != self.dims.len() {
            return Err(ComplexError::Shape("one subspace per degree".into()));
        }
        let res = |m: &SparseMatrix, src: &Subspace, dst: &Subspace, n: usize| -> Result<SparseMatrix, ComplexError> {
            let cols = src
                .basis()
                .iter()
                .map(|v| dst.coords(&m.mul_vec(v)).ok_or(ComplexError::NotASubcomplex(n as i32)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SparseMatrix::from_columns(dst.dim(), cols))
        };
        let mut b = vec![SparseMatrix::zero(0, subs[0].dim())];
        for n in 1..=self.top() {
            b.push(res(&self.b[n], &subs[n], &subs[n - 1], n)?);
        }
        let mut bb = vec![];
        for n in 0..self.top() {
            bb.push(res(&self.bb[n], &subs[n], &subs[n + 1], n)?);
        }
        MixedComplex::new(subs.iter().map(|s| s.dim()).collect(), b, bb)
    }

    /// Quotient mixed complex by subspaces stable under b and B.
    pub fn quotient(&self, subs: &[Subspace]) -> Result<MixedComplex, ComplexError> {
        if subs.len() != self.dims.len() {
            return Err(ComplexError::Shape("one subspace per degree".into()));
        }
        let qs: Vec<Quotient> = subs.iter().map(|s| Quotient::new(s.clone())).collect();
        let ind = |m: &SparseMatrix, s: usize, t: usize| -> Result<SparseMatrix, ComplexError> {
            let f = |i: usize| m.col(i).clone();
            if !qs[s].descends(&qs[t], f) {
                return Err(ComplexError::NotASubcomplex(s as i32));
            }
            Ok(qs[s].induce(&qs[t], f))
        };
        let mut b = vec![SparseMatrix::zero(0, qs[0].dim())];
        for n in 1..=self.top() {
            b.push(ind(&self.b[n], n, n - 1)?);
        }
        let mut bb = vec![];
        for n in 0..self.top() {
            bb.push(ind(&self.bb[n], n, n + 1)?);
        }
        MixedComplex::new(qs.iter().map(|q| q.dim()).collect(), b, bb)
    }

    /// Degree truncation to 0..=top.
    pub fn truncate(&self, top: usize) -> Result<MixedComplex, ComplexError> {
        if top > self.top() {
            return Err(ComplexError::DegreeOutOfRange(top as i32));
        }
        MixedComplex::new(self.dims[..=top].to_vec(), self.b[..=top].to_vec(), self.bb[..top].to_vec())
    }
}

/// Coinvariants V / (1 - g)V of a cyclic group action given by a generator
/// of the stated order.
pub fn cyclic_group_coinvariants(dim: usize, gen: &SparseMatrix, order: usize) -> Result<Quotient, ComplexError> {
    if gen.nrows() != dim || gen.ncols() != dim || order == 0 {
        return Err(ComplexError::Shape("generator shape".into()));
    }
    let mut p = SparseMatrix::identity(dim);
    for _ in 0..order {
        p = gen.mul(&p);
    }
    if p != SparseMatrix::identity(dim) {
        return Err(ComplexError::NotAnAction);
    }
    let one_minus = SparseMatrix::identity(dim).sub(gen);
    Ok(Quotient::new(Subspace::image(&one_minus)))
}

/// Dimension of C_λ = C / (1 - t) in each degree.
pub fn connes_quotient_dims(c: &CyclicModule) -> Result<Vec<usize>, ComplexError> {
    (0..=c.top()).map(|n| Ok(cyclic_group_coinvariants(c.dims[n], &c.t_signed(n)?, n + 1)?.dim())).collect()
}

/// Connes' complex C^λ = C / (1 - t) with the induced b; over Q its
/// homology is HC.
pub fn connes_complex(c: &CyclicModule) -> Result<ChainComplex, ComplexError> {
    let qs = (0..=c.top())
        .map(|n| cyclic_group_coinvariants(c.dims[n], &c.t_signed(n)?, n + 1))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ds = Vec::new();
    for n in 1..=c.top() {
        let b = c.b(n);
        let f = |i: usize| b.col(i).clone();
        if !qs[n].descends(&qs[n - 1], f) {
            return Err(ComplexError::NotWellDefined(format!("b on C^λ in degree {n}")));
        }
        ds.push(qs[n].induce(&qs[n - 1], f));
    }
    ChainComplex::from_boundaries(qs.iter().map(|q| q.dim()).collect(), ds)
}
