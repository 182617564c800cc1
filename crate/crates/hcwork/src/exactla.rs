//! Exact rational linear algebra: sparse vectors and matrices, echelon
//! subspaces, quotients, rank and kernels.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always normalized: gcd(num, den) = 1, den > 0.
pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("subspace containment fails")]
    NotASubspace,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p", "-p" or "p/q".
pub fn parse_q(s: &str) -> Result<Q, LaError> {
    let t = s.trim();
    let bad = || LaError::Parse(s.to_string());
    match t.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

/// Formats as "p" for integers and "p/q" otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Q::one())] }
    }

    /// Builds from arbitrary pairs, summing duplicates and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in pairs {
            if c.is_zero() {
                continue;
            }
            *acc.entry(i).or_insert_with(Q::zero) += c;
        }
        Self::from_btree(acc)
    }

    pub fn from_btree(acc: BTreeMap<usize, Q>) -> Self {
        SparseVec { entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Takes already sorted, deduplicated, nonzero entries.
    pub fn from_sorted(entries: Vec<(usize, Q)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, c)| !c.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Q]) -> Self {
        SparseVec { entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect() }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// self + c * other.
    pub fn add_scaled(&self, other: &SparseVec, c: &Q) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while a < x.len() || b < y.len() {
            if b >= y.len() || (a < x.len() && x[a].0 < y[b].0) {
                out.push(x[a].clone());
                a += 1;
            } else if a >= x.len() || y[b].0 < x[a].0 {
                out.push((y[b].0, &y[b].1 * c));
                b += 1;
            } else {
                let s = &x[a].1 + &y[b].1 * c;
                if !s.is_zero() {
                    out.push((x[a].0, s));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-Q::one())
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut s = Q::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, j) = (self.entries[a].0, other.entries[b].0);
            if i == j {
                s += &self.entries[a].1 * &other.entries[b].1;
                a += 1;
                b += 1;
            } else if i < j {
                a += 1;
            } else {
                b += 1;
            }
        }
        s
    }

    /// Re-indexes entries through `f`, summing collisions.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    /// Shifts all indices by `off`.
    pub fn shifted(&self, off: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (i + off, c.clone())).collect() }
    }
}

/// Column-major sparse matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|m| m < rows)));
        SparseMatrix { rows, cols }
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, Q)>>(rows: usize, cols: usize, trips: I) -> Self {
        let mut acc: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); cols];
        for (r, c, x) in trips {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            if !x.is_zero() {
                *acc[c].entry(r).or_insert_with(Q::zero) += x;
            }
        }
        SparseMatrix { rows, cols: acc.into_iter().map(SparseVec::from_btree).collect() }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let trips =
            rows.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i, j, x.clone())));
        Self::from_triplets(r, c, trips)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in col.iter() {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.cols[j].get(i)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// All nonzero entries as (row, col, value), column-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in col.iter() {
                out.push((*i, j, x.clone()));
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in col.iter() {
                rows[*i].push((j, x.clone()));
            }
        }
        SparseMatrix { rows: self.ncols(), cols: rows.into_iter().map(SparseVec::from_sorted).collect() }
    }

    /// Rows as sparse vectors.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().cols
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, c) in v.iter() {
            for (i, x) in self.cols[*j].iter() {
                *acc.entry(*i).or_insert_with(Q::zero) += x * c;
            }
        }
        SparseVec::from_btree(acc)
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.rows, "matrix product shape mismatch");
        SparseMatrix { rows: self.rows, cols: other.cols.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &-Q::one())
    }

    pub fn add_scaled(&self, other: &SparseMatrix, c: &Q) -> SparseMatrix {
        assert_eq!((self.rows, self.ncols()), (other.rows, other.ncols()), "shape mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(b, c)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: self.cols.iter().map(|x| x.scale(c)).collect() }
    }

    /// Kronecker product; index (i, k) flattens to i * other.rows + k.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut e = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, x) in a.iter() {
                    for (k, y) in b.iter() {
                        e.push((i * other.rows + k, x * y));
                    }
                }
                cols.push(SparseVec::from_sorted(e));
            }
        }
        SparseMatrix { rows: self.rows * other.rows, cols }
    }

    /// Restricts to the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    /// Applies the matrix to every vector of a list and returns the images
    /// as columns.
    pub fn apply_all(&self, vs: &[SparseVec]) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: vs.iter().map(|v| self.mul_vec(v)).collect() }
    }

    /// Block matrix from a grid of optional blocks with given block sizes.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[(usize, usize, &SparseMatrix)]) -> SparseMatrix {
        let roff: Vec<usize> = offsets(row_sizes);
        let coff: Vec<usize> = offsets(col_sizes);
        let rows: usize = row_sizes.iter().sum();
        let ncols: usize = col_sizes.iter().sum();
        let mut cols: Vec<SparseVec> = vec![SparseVec::new(); ncols];
        for &(bi, bj, m) in blocks {
            assert_eq!((m.rows, m.ncols()), (row_sizes[bi], col_sizes[bj]), "block shape");
            for (j, col) in m.cols.iter().enumerate() {
                let target = &mut cols[coff[bj] + j];
                *target = target.add(&col.shifted(roff[bi]));
            }
        }
        SparseMatrix { rows, cols }
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut s = 0;
    for &x in sizes {
        out.push(s);
        s += x;
    }
    out
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(fmt_q).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

// ---------- fraction-free elimination ----------

type IntVec = Vec<(usize, BigInt)>;

fn primitive(mut v: IntVec) -> IntVec {
    let mut g = BigInt::zero();
    for (_, x) in &v {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x /= &g;
        }
    }
    if let Some((_, lead)) = v.first() {
        if lead.is_negative() {
            for (_, x) in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    v
}

fn to_int(v: &SparseVec) -> IntVec {
    let mut l = BigInt::one();
    for (_, x) in v.iter() {
        l = l.lcm(x.denom());
    }
    let out = v.iter().map(|(i, x)| (*i, x.numer() * (&l / x.denom()))).collect();
    primitive(out)
}

/// a * v - b * w, dropping zeros.
fn int_combine(a: &BigInt, v: &IntVec, b: &BigInt, w: &IntVec) -> IntVec {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j >= w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push((v[i].0, a * &v[i].1));
            i += 1;
        } else if i >= v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, -(b * &w[j].1)));
            j += 1;
        } else {
            let s = a * &v[i].1 - b * &w[j].1;
            if !s.is_zero() {
                out.push((v[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental fraction-free echelon basis keyed by pivot column.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<usize, IntVec>,
}

impl Echelon {
    /// Reduces `v` against the current pivots. Returns the residue.
    fn reduce(&self, mut v: IntVec) -> IntVec {
        let mut k = 0;
        while k < v.len() {
            let c = v[k].0;
            if let Some(p) = self.rows.get(&c) {
                let a = p[0].1.clone();
                let b = v[k].1.clone();
                let g = a.gcd(&b);
                let (a, b) = (&a / &g, &b / &g);
                // entries before position k are untouched: p starts at c
                v = int_combine(&a, &v, &b, p);
                v = primitive_keep_sign(v);
            } else {
                k += 1;
            }
        }
        v
    }

    fn insert(&mut self, v: IntVec) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let r = primitive(r);
        self.rows.insert(r[0].0, r);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fraction-free back substitution followed by normalization.
    fn into_rref(mut self) -> Vec<SparseVec> {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for &c in &pivots {
            let mut row = self.rows.remove(&c).unwrap();
            loop {
                let hit = row.iter().skip(1).find(|(i, _)| self.rows.contains_key(i)).map(|(i, x)| (*i, x.clone()));
                let Some((c2, x)) = hit else { break };
                let p = &self.rows[&c2];
                let a = p[0].1.clone();
                let g = a.gcd(&x);
                row = primitive(int_combine(&(&a / &g), &row, &(&x / &g), p));
            }
            self.rows.insert(c, row);
        }
        self.rows
            .into_values()
            .map(|r| {
                let lead = Q::from_integer(r[0].1.clone());
                SparseVec::from_sorted(r.into_iter().map(|(i, x)| (i, Q::from_integer(x) / &lead)).collect())
            })
            .collect()
    }
}

fn primitive_keep_sign(v: IntVec) -> IntVec {
    let mut g = BigInt::zero();
    for (_, x) in &v {
        g = g.gcd(x);
        if g.is_one() {
            return v;
        }
    }
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|(i, x)| (i, x / &g)).collect()
}

// ---------- subspaces ----------

/// Subspace of Q^ambient in reduced row echelon form. The representation is
/// unique, so derived equality is equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_pos: BTreeMap<usize, usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: vec![], pivots: vec![], pivot_pos: BTreeMap::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_rref(ambient, (0..ambient).map(SparseVec::unit).collect())
    }

    fn from_rref(ambient: usize, rows: Vec<SparseVec>) -> Self {
        let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap()).collect();
        let pivot_pos = pivots.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Subspace { ambient, rows, pivots, pivot_pos }
    }

    /// Span of arbitrary vectors.
    pub fn span<'a, I: IntoIterator<Item = &'a SparseVec>>(ambient: usize, vs: I) -> Self {
        let mut e = Echelon::default();
        for v in vs {
            debug_assert!(v.max_index().is_none_or(|m| m < ambient));
            if !v.is_zero() {
                e.insert(to_int(v));
                if e.rank() == ambient {
                    break;
                }
            }
        }
        Self::from_rref(ambient, e.into_rref())
    }

    pub fn span_owned(ambient: usize, vs: Vec<SparseVec>) -> Self {
        Self::span(ambient, vs.iter())
    }

    /// Column space of a matrix.
    pub fn image(m: &SparseMatrix) -> Self {
        Self::span(m.nrows(), m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivot_pos.contains_key(&i)
    }

    /// Canonical representative of v modulo the subspace: the unique
    /// congruent vector with zero entries at every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        let mut hit = false;
        for (i, c) in v.iter() {
            if let Some(&k) = self.pivot_pos.get(i) {
                hit = true;
                for (j, x) in self.rows[k].iter().skip(1) {
                    *acc.entry(*j).or_insert_with(Q::zero) -= x * c;
                }
            } else {
                *acc.entry(*i).or_insert_with(Q::zero) += c;
            }
        }
        if !hit {
            return v.clone();
        }
        SparseVec::from_btree(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_pairs(v.iter().filter_map(|(i, c)| self.pivot_pos.get(i).map(|&k| (k, c.clone())))))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(self.ambient, self.rows.iter().chain(other.rows.iter()))
    }

    /// Intersection via the kernel of [A | -B].
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let mut cols: Vec<SparseVec> = self.rows.clone();
        cols.extend(other.rows.iter().map(|r| r.scale(&-Q::one())));
        let m = SparseMatrix::from_columns(self.ambient, cols);
        let k = kernel_basis(&m);
        let a = self.dim();
        let vs: Vec<SparseVec> = k
            .basis()
            .iter()
            .map(|coef| {
                let mut acc = SparseVec::new();
                for (i, c) in coef.iter() {
                    if *i < a {
                        acc = acc.add_scaled(&self.rows[*i], c);
                    }
                }
                acc
            })
            .collect();
        Subspace::span(self.ambient, vs.iter())
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &SparseMatrix) -> Subspace {
        assert_eq!(m.ncols(), self.ambient);
        let imgs: Vec<SparseVec> = self.rows.iter().map(|r| m.mul_vec(r)).collect();
        Subspace::span(m.nrows(), imgs.iter())
    }

    /// { v in self : m v in target }.
    pub fn preimage_within(&self, m: &SparseMatrix, target: &Subspace) -> Subspace {
        assert_eq!(m.ncols(), self.ambient);
        assert_eq!(m.nrows(), target.ambient);
        let cols: Vec<SparseVec> = self.rows.iter().map(|r| target.reduce(&m.mul_vec(r))).collect();
        let k = kernel_basis(&SparseMatrix::from_columns(m.nrows(), cols));
        let vs: Vec<SparseVec> = k
            .basis()
            .iter()
            .map(|coef| {
                let mut acc = SparseVec::new();
                for (i, c) in coef.iter() {
                    acc = acc.add_scaled(&self.rows[*i], c);
                }
                acc
            })
            .collect();
        Subspace::span(self.ambient, vs.iter())
    }

    /// Basis vectors as the columns of an ambient x dim matrix.
    pub fn basis_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.ambient, self.rows.clone())
    }
}

/// Quotient Q^n / rel with the canonical complement spanned by the
/// standard vectors at non-pivot columns of `rel`.
#[derive(Clone, Debug)]
pub struct Quotient {
    rel: Subspace,
    basis: Vec<usize>,
    coord: Vec<Option<usize>>,
}

impl Quotient {
    pub fn new(rel: Subspace) -> Self {
        let n = rel.ambient();
        let basis: Vec<usize> = (0..n).filter(|i| !rel.is_pivot(*i)).collect();
        let mut coord = vec![None; n];
        for (k, &i) in basis.iter().enumerate() {
            coord[i] = Some(k);
        }
        Quotient { rel, basis, coord }
    }

    pub fn trivial(n: usize) -> Self {
        Self::new(Subspace::zero(n))
    }

    pub fn ambient(&self) -> usize {
        self.rel.ambient()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relations(&self) -> &Subspace {
        &self.rel
    }

    /// Ambient index of the standard lift of quotient basis vector k.
    pub fn lift(&self, k: usize) -> usize {
        self.basis[k]
    }

    pub fn lifts(&self) -> &[usize] {
        &self.basis
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let r = self.rel.reduce(v);
        SparseVec::from_sorted(
            r.iter().map(|(i, c)| (self.coord[*i].expect("reduced vector off complement"), c.clone())).collect(),
        )
    }

    pub fn lift_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_sorted(v.iter().map(|(k, c)| (self.basis[*k], c.clone())).collect())
    }

    pub fn projection_matrix(&self) -> SparseMatrix {
        let cols = (0..self.ambient()).map(|i| self.project(&SparseVec::unit(i))).collect();
        SparseMatrix::from_columns(self.dim(), cols)
    }
}

impl Quotient {
    /// Matrix of the map induced on quotients by a map of free spaces given
    /// on standard basis vectors.
    pub fn induce(&self, dst: &Quotient, f: impl Fn(usize) -> SparseVec) -> SparseMatrix {
        let cols = self.basis.iter().map(|&i| dst.project(&f(i))).collect();
        SparseMatrix::from_columns(dst.dim(), cols)
    }

    /// Whether a free-space map sends the relations of self into those of dst.
    pub fn descends(&self, dst: &Quotient, f: impl Fn(usize) -> SparseVec) -> bool {
        self.rel.basis().iter().all(|r| dst.rel.contains(&apply_fn(r, &f)))
    }
}

/// Extends a map given on basis vectors linearly.
pub fn apply_fn(v: &SparseVec, f: &impl Fn(usize) -> SparseVec) -> SparseVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, c) in v.iter() {
        for (j, x) in f(*i).iter() {
            *acc.entry(*j).or_insert_with(Q::zero) += x * c;
        }
    }
    SparseVec::from_btree(acc)
}

/// The subquotient Z/D of Q^n for D ⊆ Z, with canonical representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    q: Quotient,
    s: Subspace,
}

impl Subquotient {
    pub fn new(z: &Subspace, d: &Subspace) -> Result<Self, LaError> {
        if z.ambient() != d.ambient() {
            return Err(LaError::AmbientMismatch(z.ambient(), d.ambient()));
        }
        if !d.is_subspace_of(z) {
            return Err(LaError::NotASubspace);
        }
        let q = Quotient::new(d.clone());
        let imgs: Vec<SparseVec> = z.basis().iter().map(|v| q.project(v)).collect();
        let s = Subspace::span(q.dim(), imgs.iter());
        Ok(Subquotient { q, s })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn ambient(&self) -> usize {
        self.q.ambient()
    }

    /// Representative in Z of basis element k.
    pub fn rep(&self, k: usize) -> SparseVec {
        self.q.lift_vec(&self.s.basis()[k])
    }

    /// Coordinates of v ∈ Z; None if v lies outside Z.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.s.coords(&self.q.project(v))
    }

    /// Matrix of the map induced by `m` into another subquotient.
    pub fn induced(&self, dst: &Subquotient, m: &SparseMatrix) -> Result<SparseMatrix, LaError> {
        let mut cols = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let img = m.mul_vec(&self.rep(k));
            cols.push(dst.coords(&img).ok_or(LaError::NotASubspace)?);
        }
        Ok(SparseMatrix::from_columns(dst.dim(), cols))
    }
}

// ---------- operations ----------

/// Rank over Q.
pub fn rank(m: &SparseMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let vecs: Vec<SparseVec> = if m.nrows() <= m.ncols() { m.row_vectors() } else { m.columns().to_vec() };
    let bound = m.nrows().min(m.ncols());
    let mut e = Echelon::default();
    for v in &vecs {
        if !v.is_zero() {
            e.insert(to_int(v));
            if e.rank() == bound {
                break;
            }
        }
    }
    e.rank()
}

/// Null space { v : m v = 0 } as an echelon subspace of Q^cols.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    let n = m.ncols();
    let rows = Subspace::span_owned(n, m.row_vectors());
    let free: Vec<usize> = (0..n).filter(|i| !rows.is_pivot(*i)).collect();
    let vs: Vec<SparseVec> = free
        .iter()
        .map(|&f| {
            let mut pairs = vec![(f, Q::one())];
            for (k, r) in rows.basis().iter().enumerate() {
                let x = r.get(f);
                if !x.is_zero() {
                    pairs.push((rows.pivots()[k], -x));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect();
    Subspace::span(n, vs.iter())
}

/// dim(big) - dim(small), requiring small to lie inside big.
pub fn quotient_dim(big: &Subspace, small: &Subspace) -> Result<usize, LaError> {
    if big.ambient() != small.ambient() {
        return Err(LaError::AmbientMismatch(big.ambient(), small.ambient()));
    }
    if !small.is_subspace_of(big) {
        return Err(LaError::NotASubspace);
    }
    Ok(big.dim() - small.dim())
}

/// (max row support, max column support).
pub fn band_stats(m: &SparseMatrix) -> (usize, usize) {
    let col_max = m.columns().iter().map(|c| c.nnz()).max().unwrap_or(0);
    let mut row_counts = vec![0usize; m.nrows()];
    for c in m.columns() {
        for (i, _) in c.iter() {
            row_counts[*i] += 1;
        }
    }
    (row_counts.into_iter().max().unwrap_or(0), col_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_i64(rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(2)), 2);
        assert_eq!(rank(&SparseMatrix::zero(3, 3)), 0);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&SparseMatrix::identity(2)).dim(), 0);
        assert_eq!(kernel_basis(&SparseMatrix::zero(1, 3)).dim(), 3);
        let k = kernel_basis(&m(&[&[1, 1, 0]]));
        assert_eq!(k.dim(), 2);
        let a = m(&[&[1, 1, 0]]);
        for v in k.basis() {
            assert!(a.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn quotient_examples() {
        let full3 = Subspace::full(3);
        assert_eq!(quotient_dim(&full3, &full3).unwrap(), 0);
        let e1 = Subspace::span_owned(3, vec![SparseVec::unit(0)]);
        assert_eq!(quotient_dim(&full3, &e1).unwrap(), 2);
        let d = Subspace::span_owned(2, vec![SparseVec::from_pairs([(0, q(1)), (1, q(-1))])]);
        assert_eq!(quotient_dim(&Subspace::full(2), &d).unwrap(), 1);
        assert_eq!(quotient_dim(&e1, &full3), Err(LaError::NotASubspace));
    }

    #[test]
    fn band_examples() {
        assert_eq!(band_stats(&SparseMatrix::identity(4)), (1, 1));
        assert_eq!(band_stats(&SparseMatrix::zero(2, 2)), (0, 0));
        assert_eq!(band_stats(&m(&[&[1, 1], &[0, 1]])), (2, 2));
    }

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::span_owned(
            3,
            vec![SparseVec::from_pairs([(0, q(2)), (1, q(4))]), SparseVec::from_pairs([(1, q(3)), (2, q(-3))])],
        );
        let b = Subspace::span_owned(
            3,
            vec![
                SparseVec::from_pairs([(0, q(1)), (1, q(3)), (2, q(-1))]),
                SparseVec::from_pairs([(0, q(1)), (2, q(2))]),
            ],
        );
        assert_eq!(a, b);
        assert_eq!(a.basis()[0], SparseVec::from_pairs([(0, q(1)), (2, q(2))]));
    }

    #[test]
    fn quotient_projection() {
        let rel = Subspace::span_owned(3, vec![SparseVec::from_pairs([(0, q(1)), (1, q(-1))])]);
        let qt = Quotient::new(rel);
        assert_eq!(qt.dim(), 2);
        let p0 = qt.project(&SparseVec::unit(0));
        let p1 = qt.project(&SparseVec::unit(1));
        assert_eq!(p0, p1);
        assert!(qt.project(&SparseVec::from_pairs([(0, q(1)), (1, q(-1))])).is_zero());
    }

    #[test]
    fn intersect_and_preimage() {
        let a = Subspace::span_owned(3, vec![SparseVec::unit(0), SparseVec::unit(1)]);
        let b = Subspace::span_owned(3, vec![SparseVec::unit(1), SparseVec::unit(2)]);
        let c = a.intersect(&b);
        assert_eq!(c, Subspace::span_owned(3, vec![SparseVec::unit(1)]));
        let d = m(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let p = Subspace::full(3).preimage_within(&d, &Subspace::zero(3));
        assert_eq!(p, Subspace::span_owned(3, vec![SparseVec::unit(1)]));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), qr(1, 2));
        assert_eq!(parse_q("-4").unwrap(), q(-4));
        assert!(parse_q("1/0").is_err());
        assert_eq!(fmt_q(&qr(-2, 4)), "-1/2");
        assert_eq!(fmt_q(&q(7)), "7");
    }

    fn small_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
                let trips = xs.iter().enumerate().map(|(k, &x)| (k / c, k % c, q(x)));
                SparseMatrix::from_triplets(r, c, trips)
            })
        })
    }

    /// Dense Gaussian elimination over Q with partial pivoting by first nonzero.
    fn oracle_rank(a: &SparseMatrix) -> usize {
        let mut d = a.to_dense();
        let (r, c) = (a.nrows(), a.ncols());
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !d[i][col].is_zero()) else { continue };
            d.swap(rank, p);
            for i in 0..r {
                if i != rank && !d[i][col].is_zero() {
                    let f = &d[i][col] / &d[rank][col];
                    let pivot_row = d[rank].clone();
                    for (k, x) in pivot_row.iter().enumerate() {
                        d[i][k] = &d[i][k] - &f * x;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            prop_assert_eq!(rank(&a) + kernel_basis(&a).dim(), a.ncols());
        }

        #[test]
        fn rank_matches_dense_oracle(a in small_matrix()) {
            prop_assert_eq!(rank(&a), oracle_rank(&a));
        }

        #[test]
        fn rank_permutation_invariant(a in small_matrix(), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..a.nrows()).collect();
            let mut cp: Vec<usize> = (0..a.ncols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let trips = a.entries().into_iter().map(|(i, j, x)| (rp[i], cp[j], x));
            let b = SparseMatrix::from_triplets(a.nrows(), a.ncols(), trips);
            prop_assert_eq!(rank(&a), rank(&b));
        }

        #[test]
        fn kernel_vectors_are_annihilated(a in small_matrix()) {
            for v in kernel_basis(&a).basis() {
                prop_assert!(a.mul_vec(v).is_zero());
            }
        }

        #[test]
        fn reduce_is_congruent(a in small_matrix(), xs in proptest::collection::vec(-5i64..5, 6)) {
            let s = Subspace::image(&a);
            let v = SparseVec::from_dense(&xs[..a.nrows()].iter().map(|&x| q(x)).collect::<Vec<_>>());
            let r = s.reduce(&v);
            prop_assert!(s.contains(&v.sub(&r)));
            prop_assert!(r.iter().all(|(i, _)| !s.is_pivot(*i)));
        }
    }
}
