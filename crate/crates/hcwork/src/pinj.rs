//! The truncated inverse monoid of partial injections of {0..N-1}, subset
//! idempotents, partitions and the matrix realization U_f.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{q, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PinjError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("domain and range differ")]
    DomainRangeMismatch,
    #[error("graph is not injective or leaves {{0..{0}}}")]
    InvalidGraph(usize),
    #[error("blocks do not partition {{0..{0}}}")]
    InvalidPartition(usize),
}

/// A partially defined injective self-map of {0..n-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialInjection {
    n: usize,
    map: Vec<Option<usize>>,
}

impl PartialInjection {
    pub fn from_map(n: usize, map: Vec<Option<usize>>) -> Result<Self, PinjError> {
        if map.len() != n {
            return Err(PinjError::InvalidGraph(n));
        }
        let mut seen = vec![false; n];
        for y in map.iter().flatten() {
            if *y >= n || seen[*y] {
                return Err(PinjError::InvalidGraph(n));
            }
            seen[*y] = true;
        }
        Ok(PartialInjection { n, map })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PinjError> {
        let mut map = vec![None; n];
        for &(x, y) in pairs {
            if x >= n || map[x].is_some() {
                return Err(PinjError::InvalidGraph(n));
            }
            map[x] = Some(y);
        }
        Self::from_map(n, map)
    }

    pub fn identity(n: usize) -> Self {
        PartialInjection { n, map: (0..n).map(Some).collect() }
    }

    pub fn empty(n: usize) -> Self {
        PartialInjection { n, map: vec![None; n] }
    }

    /// The matrix unit {j -> i}, i.e. U = E_ij.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut map = vec![None; n];
        map[j] = Some(i);
        PartialInjection { n, map }
    }

    /// Total bijection from a permutation vector x -> perm[x].
    pub fn permutation(perm: &[usize]) -> Result<Self, PinjError> {
        Self::from_map(perm.len(), perm.iter().map(|&y| Some(y)).collect())
    }

    /// Identity restricted to a subset.
    pub fn idempotent(s: &SubsetIdempotent) -> Self {
        let mut map = vec![None; s.n];
        for &x in &s.members {
            map[x] = Some(x);
        }
        PartialInjection { n: s.n, map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn graph(&self) -> Vec<(usize, usize)> {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y))).collect()
    }

    pub fn domain(&self) -> SubsetIdempotent {
        SubsetIdempotent::from_iter(self.n, self.graph().into_iter().map(|(x, _)| x))
    }

    pub fn range(&self) -> SubsetIdempotent {
        SubsetIdempotent::from_iter(self.n, self.graph().into_iter().map(|(_, y)| y))
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(|y| y.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(|y| y.is_none())
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.iter().enumerate().all(|(x, y)| y.is_none_or(|y| y == x))
    }

    /// (self ∘ g)(x) = self(g(x)).
    pub fn compose(&self, g: &PartialInjection) -> Result<PartialInjection, PinjError> {
        if self.n != g.n {
            return Err(PinjError::SizeMismatch(self.n, g.n));
        }
        let map = g.map.iter().map(|y| y.and_then(|y| self.map[y])).collect();
        Ok(PartialInjection { n: self.n, map })
    }

    /// Composition for callers that already know the sizes agree.
    pub fn then_after(&self, g: &PartialInjection) -> PartialInjection {
        self.compose(g).expect("partial injections of different sizes")
    }

    pub fn dagger(&self) -> PartialInjection {
        let mut map = vec![None; self.n];
        for (x, y) in self.graph() {
            map[y] = Some(x);
        }
        PartialInjection { n: self.n, map }
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, s: &SubsetIdempotent) -> PartialInjection {
        let map = (0..self.n).map(|x| if s.contains(x) { self.map[x] } else { None }).collect();
        PartialInjection { n: self.n, map }
    }

    /// f_*(a): result_x = a_{f†(x)} for x in ran f, else zero.
    pub fn act<T: Clone>(&self, a: &[T], zero: &T) -> Result<Vec<T>, PinjError> {
        if a.len() != self.n {
            return Err(PinjError::SizeMismatch(self.n, a.len()));
        }
        let d = self.dagger();
        Ok((0..self.n).map(|x| d.apply(x).map_or_else(|| zero.clone(), |y| a[y].clone())).collect())
    }

    /// (ε_l, ε_r) = (ran f, dom f).
    pub fn epsilon(&self) -> (SubsetIdempotent, SubsetIdempotent) {
        (self.range(), self.domain())
    }

    /// N x N 0/1 matrix with (U_f)_{ij} = 1 iff f(j) = i.
    pub fn u_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.n, self.n, self.graph().into_iter().map(|(j, i)| (i, j, q(1))))
    }

    /// Fixed points of f.
    pub fn fixed_points(&self) -> SubsetIdempotent {
        SubsetIdempotent::from_iter(self.n, self.graph().into_iter().filter(|(x, y)| x == y).map(|(x, _)| x))
    }

    /// Image of a subset.
    pub fn image(&self, s: &SubsetIdempotent) -> SubsetIdempotent {
        SubsetIdempotent::from_iter(self.n, s.members.iter().filter_map(|&x| self.apply(x)))
    }

    /// Product x ↦ (f(x_0), g(x_1)) on pairs, flattened as x_0 * g.n + x_1.
    pub fn product(&self, g: &PartialInjection) -> PartialInjection {
        let (n, m) = (self.n, g.n);
        let mut map = vec![None; n * m];
        for (a, fa) in self.graph() {
            for (b, gb) in g.graph() {
                map[a * m + b] = Some(fa * m + gb);
            }
        }
        PartialInjection { n: n * m, map }
    }

    /// Extends to a permutation by matching dom-complement to ran-complement
    /// in ascending order. Requires |dom| = |ran|, which always holds.
    pub fn extend_to_permutation(&self) -> PartialInjection {
        let dc: Vec<usize> = (0..self.n).filter(|x| self.map[*x].is_none()).collect();
        let ran = self.range();
        let rc: Vec<usize> = (0..self.n).filter(|y| !ran.contains(*y)).collect();
        let mut map = self.map.clone();
        for (x, y) in dc.into_iter().zip(rc) {
            map[x] = Some(y);
        }
        PartialInjection { n: self.n, map }
    }

    /// All partial injections of {0..n-1} in a fixed order.
    pub fn all(n: usize) -> Vec<PartialInjection> {
        let mut out = Vec::new();
        let mut cur = vec![None; n];
        let mut used = vec![false; n];
        fn rec(
            x: usize,
            n: usize,
            cur: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            out: &mut Vec<PartialInjection>,
        ) {
            if x == n {
                out.push(PartialInjection { n, map: cur.clone() });
                return;
            }
            cur[x] = None;
            rec(x + 1, n, cur, used, out);
            for y in 0..n {
                if !used[y] {
                    used[y] = true;
                    cur[x] = Some(y);
                    rec(x + 1, n, cur, used, out);
                    used[y] = false;
                }
            }
            cur[x] = None;
        }
        rec(0, n, &mut cur, &mut used, &mut out);
        out
    }

    /// All total bijections of {0..n-1}.
    pub fn permutations(n: usize) -> Vec<PartialInjection> {
        Self::all(n).into_iter().filter(|f| f.is_total()).collect()
    }

    /// Graph as a JSON-friendly map.
    pub fn to_json(&self) -> PinjJson {
        PinjJson { n: self.n, graph: self.graph().into_iter().map(|(x, y)| (x.to_string(), y)).collect() }
    }

    pub fn from_json(j: &PinjJson) -> Result<Self, PinjError> {
        let mut pairs = Vec::new();
        for (k, v) in &j.graph {
            let x: usize = k.parse().map_err(|_| PinjError::InvalidGraph(j.n))?;
            pairs.push((x, *v));
        }
        Self::from_pairs(j.n, &pairs)
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.graph().iter().map(|(x, y)| format!("{x}->{y}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PinjJson {
    pub n: usize,
    pub graph: BTreeMap<String, usize>,
}

/// The idempotent p_A for A ⊆ {0..n-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIdempotent {
    n: usize,
    members: BTreeSet<usize>,
}

impl SubsetIdempotent {
    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let members: BTreeSet<usize> = it.into_iter().collect();
        assert!(members.iter().all(|&x| x < n), "subset element outside {{0..{n}}}");
        SubsetIdempotent { n, members }
    }

    pub fn empty(n: usize) -> Self {
        SubsetIdempotent { n, members: BTreeSet::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_iter(n, 0..n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn members(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, o: &SubsetIdempotent) -> SubsetIdempotent {
        SubsetIdempotent { n: self.n, members: self.members.union(&o.members).copied().collect() }
    }

    pub fn intersect(&self, o: &SubsetIdempotent) -> SubsetIdempotent {
        SubsetIdempotent { n: self.n, members: self.members.intersection(&o.members).copied().collect() }
    }

    pub fn minus(&self, o: &SubsetIdempotent) -> SubsetIdempotent {
        SubsetIdempotent { n: self.n, members: self.members.difference(&o.members).copied().collect() }
    }

    pub fn is_disjoint(&self, o: &SubsetIdempotent) -> bool {
        self.members.is_disjoint(&o.members)
    }

    /// Diagonal 0/1 matrix p_A.
    pub fn matrix(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.n, self.n, self.members.iter().map(|&x| (x, x, q(1))))
    }
}

/// U_f - p_{ran f} = Σ p_{A_i}(U_{g_i} - 1) with each g_i a permutation.
pub fn kernel_decompose(f: &PartialInjection) -> Vec<(SubsetIdempotent, PartialInjection)> {
    let ran = f.range();
    if ran.is_empty() {
        return Vec::new();
    }
    vec![(ran, f.extend_to_permutation())]
}

/// (A, B, C) with A the fixed points, B ⊆ dom f \ A greedily maximal with
/// f(B) ∩ B = ∅, and C the rest of the domain.
pub fn maximal_disjoint_set(
    f: &PartialInjection,
) -> Result<(SubsetIdempotent, SubsetIdempotent, SubsetIdempotent), PinjError> {
    let dom = f.domain();
    if dom != f.range() {
        return Err(PinjError::DomainRangeMismatch);
    }
    let a = f.fixed_points();
    let mut b = SubsetIdempotent::empty(f.n);
    for x in dom.minus(&a).members() {
        let mut cand = b.clone();
        cand.members.insert(x);
        if f.image(&cand).is_disjoint(&cand) {
            b = cand;
        }
    }
    let c = dom.minus(&a).minus(&b);
    Ok((a, b, c))
}

/// A set partition of {0..n-1}; blocks sorted internally and by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PinjError> {
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for mut b in blocks {
            if b.is_empty() {
                return Err(PinjError::InvalidPartition(n));
            }
            b.sort_unstable();
            for &x in &b {
                if x >= n || seen[x] {
                    return Err(PinjError::InvalidPartition(n));
                }
                seen[x] = true;
            }
            out.push(b);
        }
        if seen.iter().any(|s| !s) {
            return Err(PinjError::InvalidPartition(n));
        }
        out.sort();
        Ok(Partition { n, blocks: out })
    }

    pub fn discrete(n: usize) -> Self {
        Partition { n, blocks: (0..n).map(|x| vec![x]).collect() }
    }

    pub fn one_block(n: usize) -> Self {
        Partition { n, blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] } }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Coarsest common refinement.
    pub fn meet(&self, o: &Partition) -> Result<Partition, PinjError> {
        if self.n != o.n {
            return Err(PinjError::SizeMismatch(self.n, o.n));
        }
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &o.blocks {
                let c: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                if !c.is_empty() {
                    blocks.push(c);
                }
            }
        }
        Partition::new(self.n, blocks)
    }

    /// Every block of self lies inside a block of o.
    pub fn refines(&self, o: &Partition) -> bool {
        self.blocks.iter().all(|a| o.blocks.iter().any(|b| a.iter().all(|x| b.contains(x))))
    }

    /// All set partitions of {0..n-1}.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        fn rec(x: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Partition>) {
            if x == n {
                out.push(Partition::new(n, cur.clone()).unwrap());
                return;
            }
            for k in 0..cur.len() {
                cur[k].push(x);
                rec(x + 1, n, cur, out);
                cur[k].pop();
            }
            cur.push(vec![x]);
            rec(x + 1, n, cur, out);
            cur.pop();
        }
        rec(0, n, &mut Vec::new(), &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi(n: usize, pairs: &[(usize, usize)]) -> PartialInjection {
        PartialInjection::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = pi(3, &[(1, 2)]);
        assert_eq!(PartialInjection::identity(3).compose(&f).unwrap(), f);
        let g = pi(3, &[(2, 1)]);
        assert_eq!(f.compose(&g).unwrap(), pi(3, &[(2, 2)]));
        assert!(pi(3, &[(0, 1)]).compose(&pi(3, &[(0, 2)])).unwrap().is_empty());
        assert_eq!(f.compose(&PartialInjection::identity(2)), Err(PinjError::SizeMismatch(3, 2)));
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(PartialInjection::identity(3).dagger(), PartialInjection::identity(3));
        assert_eq!(pi(4, &[(0, 3)]).dagger(), pi(4, &[(3, 0)]));
    }

    #[test]
    fn act_examples() {
        let a = vec![5i64, 7];
        assert_eq!(PartialInjection::identity(2).act(&a, &0).unwrap(), a);
        assert_eq!(pi(2, &[(0, 1)]).act(&a, &0).unwrap(), vec![0, 5]);
        assert_eq!(PartialInjection::empty(2).act(&a, &0).unwrap(), vec![0, 0]);
        assert!(pi(2, &[(0, 1)]).act(&[1, 2, 3], &0).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let s = |n, v: &[usize]| SubsetIdempotent::from_iter(n, v.iter().copied());
        assert_eq!(PartialInjection::identity(2).epsilon(), (s(2, &[0, 1]), s(2, &[0, 1])));
        assert_eq!(pi(4, &[(0, 3)]).epsilon(), (s(4, &[3]), s(4, &[0])));
        assert_eq!(PartialInjection::empty(3).epsilon(), (s(3, &[]), s(3, &[])));
    }

    #[test]
    fn u_matrix_examples() {
        assert_eq!(PartialInjection::identity(3).u_matrix(), SparseMatrix::identity(3));
        assert_eq!(pi(2, &[(1, 0)]).u_matrix(), SparseMatrix::from_i64(&[&[0, 1], &[0, 0]]));
        let t = PartialInjection::permutation(&[1, 0]).unwrap();
        assert_eq!(t.u_matrix(), SparseMatrix::from_i64(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn meet_examples() {
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let r = Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        assert_eq!(p.meet(&p).unwrap(), p);
        assert_eq!(p.meet(&r).unwrap(), Partition::discrete(3));
        assert_eq!(p.meet(&Partition::one_block(3)).unwrap(), p);
    }

    #[test]
    fn kernel_decompose_examples() {
        let t = PartialInjection::permutation(&[1, 0]).unwrap();
        assert_eq!(kernel_decompose(&t), vec![(SubsetIdempotent::full(2), t.clone())]);
        let f = pi(2, &[(0, 1)]);
        assert_eq!(kernel_decompose(&f), vec![(SubsetIdempotent::from_iter(2, [1]), t)]);
        assert!(kernel_decompose(&PartialInjection::empty(2)).is_empty());
    }

    #[test]
    fn maximal_disjoint_examples() {
        let id = PartialInjection::identity(3);
        let (a, b, c) = maximal_disjoint_set(&id).unwrap();
        assert_eq!((a.len(), b.len(), c.len()), (3, 0, 0));
        let cyc = PartialInjection::permutation(&[1, 2, 0]).unwrap();
        let (a, b, c) = maximal_disjoint_set(&cyc).unwrap();
        assert!(a.is_empty());
        assert_eq!(b.members(), vec![0]);
        assert_eq!(c.members(), vec![1, 2]);
        let t = PartialInjection::permutation(&[1, 0]).unwrap();
        let (a, b, c) = maximal_disjoint_set(&t).unwrap();
        assert!(a.is_empty());
        assert_eq!((b.members(), c.members()), (vec![0], vec![1]));
        assert_eq!(maximal_disjoint_set(&pi(2, &[(0, 1)])), Err(PinjError::DomainRangeMismatch));
    }

    fn check_kernel_identity(f: &PartialInjection) -> bool {
        let lhs = f.u_matrix().sub(&f.range().matrix());
        let mut rhs = SparseMatrix::zero(f.n(), f.n());
        for (a, g) in kernel_decompose(f) {
            assert!(g.is_total());
            let t = g.u_matrix().sub(&SparseMatrix::identity(f.n()));
            rhs = rhs.add(&a.matrix().mul(&t));
        }
        lhs == rhs
    }

    #[test]
    fn exhaustive_monoid_laws() {
        for n in 0..=3 {
            let all = PartialInjection::all(n);
            for f in &all {
                assert_eq!(f.then_after(&f.dagger()).then_after(f), *f);
                assert_eq!(f.dagger().dagger(), *f);
                assert!(check_kernel_identity(f));
                for g in &all {
                    let fg = f.then_after(g);
                    assert_eq!(fg.u_matrix(), f.u_matrix().mul(&g.u_matrix()));
                    assert_eq!(fg.range(), f.image(&g.range()));
                }
            }
        }
        for f in PartialInjection::all(4) {
            assert!(check_kernel_identity(&f));
        }
    }

    #[test]
    fn exhaustive_action() {
        let a = vec![3i64, 11];
        let all = PartialInjection::all(2);
        for f in &all {
            for g in &all {
                let lhs = f.act(&g.act(&a, &0).unwrap(), &0).unwrap();
                assert_eq!(lhs, f.then_after(g).act(&a, &0).unwrap());
            }
        }
    }

    #[test]
    fn exhaustive_weak_maximality() {
        for n in 1..=4 {
            for f in PartialInjection::all(n) {
                let Ok((a, b, c)) = maximal_disjoint_set(&f) else { continue };
                assert!(a.is_disjoint(&b) && f.image(&b).is_disjoint(&b));
                for x in c.members() {
                    let fx = f.apply(x).unwrap();
                    assert!(b.contains(fx) || f.image(&b).contains(x));
                }
            }
        }
    }

    #[test]
    fn exhaustive_meet_laws() {
        let all = Partition::all(3);
        assert_eq!(all.len(), 5);
        for p in &all {
            assert_eq!(p.meet(p).unwrap(), *p);
            for r in &all {
                let m = p.meet(r).unwrap();
                assert_eq!(m, r.meet(p).unwrap());
                assert!(m.refines(p) && m.refines(r));
                for s in &all {
                    assert_eq!(m.meet(s).unwrap(), p.meet(&r.meet(s).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = pi(4, &[(0, 3), (2, 1)]);
        let s = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(s, r#"{"n":4,"graph":{"0":3,"2":1}}"#);
        let back: PinjJson = serde_json::from_str(&s).unwrap();
        assert_eq!(PartialInjection::from_json(&back).unwrap(), f);
    }

    fn arb_pinj(n: usize) -> impl Strategy<Value = PartialInjection> {
        let all = PartialInjection::all(n);
        (0..all.len()).prop_map(move |k| all[k].clone())
    }

    proptest! {
        #[test]
        fn epsilon_left_covariant(f in arb_pinj(4), g in arb_pinj(4)) {
            let fg = f.then_after(&g);
            prop_assert_eq!(fg.epsilon().0, f.image(&g.epsilon().0));
            prop_assert_eq!(f.epsilon().1, f.dagger().epsilon().0);
        }
    }
}
