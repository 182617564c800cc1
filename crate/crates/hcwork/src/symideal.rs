//! Symbolic calculus over the symmetric sequence ideals c₀, ℓ^p, ℓ^{p−},
//! ℓ^{p+}, ℓ^{∞−}, ℓ^∞ and finite-sequence witnesses for the principal
//! generator, the triple factorization and the bar contraction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::FinAlgebra;
use crate::complexes::hochschild::splice;
use crate::complexes::tensor::TensorSpace;
use crate::exactla::{fmt_q, kernel_basis, parse_q, q, LaError, SparseVec, Q};
use crate::pinj::PartialInjection;

#[derive(Debug, Error)]
pub enum SymIdealError {
    #[error("cannot parse ideal {0:?}")]
    Parse(String),
    #[error("parameter must be positive, got {0}")]
    NonPositive(String),
    #[error("unsupported kind {0}")]
    UnsupportedKind(String),
    #[error("entry {0} has no rational fourth root")]
    NonRepresentableRoot(String),
    #[error("annihilator condition fails at index {0}")]
    AnnihilatorMismatch(usize),
    #[error("factorization does not reproduce leading factor of term {0}")]
    FactorMismatch(usize),
    #[error("input is not a b'-cycle")]
    NotACycle,
    #[error("malformed input: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    C0,
    Lp,
    LpMinus,
    LpPlus,
    LinfMinus,
    Linf,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicIdeal {
    kind: Kind,
    p: Option<Q>,
}

impl SymbolicIdeal {
    pub fn new(kind: Kind, p: Option<Q>) -> Result<Self, SymIdealError> {
        let needs_p = matches!(kind, Kind::Lp | Kind::LpMinus | Kind::LpPlus);
        match (&p, needs_p) {
            (Some(x), true) if x.is_positive() => Ok(Self { kind, p }),
            (Some(x), true) => Err(SymIdealError::NonPositive(fmt_q(x))),
            (None, false) => Ok(Self { kind, p }),
            _ => Err(SymIdealError::Malformed(format!("{kind:?} with parameter {p:?}"))),
        }
    }

    pub fn c0() -> Self {
        Self { kind: Kind::C0, p: None }
    }

    pub fn linf_minus() -> Self {
        Self { kind: Kind::LinfMinus, p: None }
    }

    pub fn linf() -> Self {
        Self { kind: Kind::Linf, p: None }
    }

    pub fn lp(p: Q) -> Result<Self, SymIdealError> {
        Self::new(Kind::Lp, Some(p))
    }

    pub fn lp_minus(p: Q) -> Result<Self, SymIdealError> {
        Self::new(Kind::LpMinus, Some(p))
    }

    pub fn lp_plus(p: Q) -> Result<Self, SymIdealError> {
        Self::new(Kind::LpPlus, Some(p))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn p(&self) -> Option<&Q> {
        self.p.as_ref()
    }

    fn with_p(&self, p: Q) -> Self {
        Self { kind: self.kind, p: Some(p) }
    }
}

impl fmt::Display for SymbolicIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p.as_ref().map(fmt_q).unwrap_or_default();
        match self.kind {
            Kind::C0 => write!(f, "c0"),
            Kind::Lp => write!(f, "l({p})"),
            Kind::LpMinus => write!(f, "l({p})-"),
            Kind::LpPlus => write!(f, "l({p})+"),
            Kind::LinfMinus => write!(f, "linf-"),
            Kind::Linf => write!(f, "linf"),
        }
    }
}

impl Serialize for SymbolicIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SymbolicIdeal {
    type Err = SymIdealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "c0" => return Ok(Self::c0()),
            "linf-" => return Ok(Self::linf_minus()),
            "linf" => return Ok(Self::linf()),
            _ => {}
        }
        let bad = || SymIdealError::Parse(s.to_string());
        let body = t.strip_prefix("l(").ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let p = parse_q(&body[..close]).map_err(|_| bad())?;
        let kind = match &body[close + 1..] {
            "" => Kind::Lp,
            "-" => Kind::LpMinus,
            "+" => Kind::LpPlus,
            _ => return Err(bad()),
        };
        Self::new(kind, Some(p))
    }
}

/// S^n: the parameter of the ℓ^p kinds scales by 1/n, the others are idempotent.
pub fn ideal_power(s: &SymbolicIdeal, n: usize) -> Result<SymbolicIdeal, SymIdealError> {
    if n == 0 {
        return Err(SymIdealError::Malformed("power must be at least 1".into()));
    }
    Ok(match &s.p {
        Some(p) => s.with_p(p / q(n as i64)),
        None => s.clone(),
    })
}

/// Whether ω = (1, 1/2, 1/3, ...) lies in S.
pub fn contains_omega(s: &SymbolicIdeal) -> bool {
    let one = Q::one();
    match (&s.kind, &s.p) {
        (Kind::Lp | Kind::LpMinus, Some(p)) => *p > one,
        (Kind::LpPlus, Some(p)) => *p >= one,
        _ => true,
    }
}

/// S_ℰ = 0, equivalently ω ⊠ S ⊂ S(ℕ×ℕ).
pub fn s_e_vanishes(s: &SymbolicIdeal) -> bool {
    contains_omega(s)
}

pub fn sqrt_closed(s: &SymbolicIdeal) -> bool {
    s.p.is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hc0Value {
    Zero,
    C,
    CplusV,
}

impl Hc0Value {
    pub const V_NOTE: &'static str = "𝒱 of uncountable dimension";
}

impl fmt::Display for Hc0Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hc0Value::Zero => "0",
            Hc0Value::C => "ℂ",
            Hc0Value::CplusV => "ℂ⊕𝒱",
        })
    }
}

/// HC_0(Γ^∞ : I_S) = S_ℰ.
pub fn hc0_table(s: &SymbolicIdeal) -> Result<Hc0Value, SymIdealError> {
    let one = Q::one();
    Ok(match (&s.kind, &s.p) {
        (Kind::LpPlus, Some(p)) if *p < one => Hc0Value::C,
        (Kind::LpPlus, _) => Hc0Value::Zero,
        (Kind::LpMinus, Some(p)) if *p <= one => Hc0Value::C,
        (Kind::LpMinus, _) => Hc0Value::Zero,
        (Kind::Lp, Some(p)) if *p < one => Hc0Value::C,
        (Kind::Lp, Some(p)) if *p == one => Hc0Value::CplusV,
        (Kind::Lp, _) => Hc0Value::Zero,
        (Kind::C0 | Kind::LinfMinus, _) => Hc0Value::Zero,
        (Kind::Linf, _) => return Err(SymIdealError::UnsupportedKind(s.to_string())),
    })
}

/// [p] = max{n ∈ ℤ : n ≤ p}.
pub fn bracket(p: &Q) -> i64 {
    i64::try_from(p.floor().to_integer()).expect("parameter fits in i64")
}

/// ⌊p⌋ = p − 1 for integral p, [p] otherwise.
pub fn lfloor(p: &Q) -> i64 {
    if p.is_integer() {
        bracket(p) - 1
    } else {
        bracket(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstNonzero {
    pub degree: i64,
    pub weight: i64,
    pub via: SymbolicIdeal,
    pub value: Hc0Value,
}

/// The lowest degree with HC_m(Γ^∞ : I_S) ≠ 0, its Hodge weight and value.
pub fn first_nonzero(s: &SymbolicIdeal) -> Result<FirstNonzero, SymIdealError> {
    let (p, k) = match (&s.kind, &s.p) {
        (Kind::Lp | Kind::LpMinus, Some(p)) => (p, lfloor(p)),
        (Kind::LpPlus, Some(p)) => (p, bracket(p)),
        _ => return Err(SymIdealError::UnsupportedKind(s.to_string())),
    };
    let via = s.with_p(p / q(k + 1));
    let value = hc0_table(&via)?;
    Ok(FirstNonzero { degree: 2 * k, weight: k, via, value })
}

/// HC_n^{(q)}(Γ^∞ : I_S) in the range where it is described.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HcGroup {
    Zero,
    /// (num·Ω^forms / d(den·Ω^{forms−1}))_ℰ, left unevaluated.
    FormsQuotient {
        num: SymbolicIdeal,
        den: SymbolicIdeal,
        forms: i64,
    },
    Undescribed,
}

pub fn hc_group(s: &SymbolicIdeal, n: i64, weight: i64) -> Result<HcGroup, SymIdealError> {
    let (p, k) = match (&s.kind, &s.p) {
        (Kind::Lp | Kind::LpMinus, Some(p)) => (p, lfloor(p)),
        (Kind::LpPlus, Some(p)) => (p, bracket(p)),
        _ => return Err(SymIdealError::UnsupportedKind(s.to_string())),
    };
    Ok(if n < weight + k || (n == weight + k && weight < k) {
        HcGroup::Zero
    } else if n == weight + k {
        HcGroup::FormsQuotient { num: s.with_p(p / q(k + 1)), den: s.with_p(p / q(k + 2)), forms: weight - k }
    } else {
        HcGroup::Undescribed
    })
}

/// Pointwise polar decomposition a = ν·|a| of a rational sequence.
pub fn polar(a: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let nu = a.iter().map(|x| x.signum()).collect();
    let abs = a.iter().map(|x| x.abs()).collect();
    (nu, abs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalGenerator {
    pub mu: Vec<Q>,
    pub tau: Vec<Vec<Q>>,
    /// μ = Σ c_i·gens_i.
    pub combination: Vec<Vec<Q>>,
}

fn check_lengths(seqs: &[Vec<Q>]) -> Result<usize, SymIdealError> {
    let len = seqs.first().map_or(0, Vec::len);
    if let Some(i) = seqs.iter().position(|s| s.len() != len) {
        return Err(SymIdealError::Malformed(format!("sequence {i} has length {}, expected {len}", seqs[i].len())));
    }
    Ok(len)
}

/// μ with gens_i = τ_i·μ, folding in one generator at a time.
pub fn principal_generator(gens: &[Vec<Q>]) -> Result<PrincipalGenerator, SymIdealError> {
    let len = check_lengths(gens)?;
    if gens.is_empty() {
        return Err(SymIdealError::Malformed("no generators".into()));
    }
    let half = Q::new(1.into(), 2.into());
    let (nu0, abs0) = polar(&gens[0]);
    let mut mu = abs0;
    let mut combination = vec![nu0];
    for g in &gens[1..] {
        let (nu, abs) = polar(g);
        let mut c_new = vec![Q::zero(); len];
        for n in 0..len {
            let (g0, g1) = match mu[n].cmp(&abs[n]) {
                std::cmp::Ordering::Equal => (half.clone(), half.clone()),
                std::cmp::Ordering::Greater => (Q::one(), Q::zero()),
                std::cmp::Ordering::Less => (Q::zero(), Q::one()),
            };
            for c in combination.iter_mut() {
                c[n] = &c[n] * &g0;
            }
            c_new[n] = &g1 * &nu[n];
            mu[n] = &g0 * &mu[n] + &g1 * &abs[n];
        }
        combination.push(c_new);
    }
    let tau = gens
        .iter()
        .map(|g| g.iter().zip(&mu).map(|(a, m)| if m.is_zero() { Q::zero() } else { a / m }).collect())
        .collect();
    Ok(PrincipalGenerator { mu, tau, combination })
}

impl PrincipalGenerator {
    pub fn verify(&self, gens: &[Vec<Q>]) -> bool {
        let gen_ok =
            gens.iter().zip(&self.tau).all(|(g, t)| g.iter().zip(t).zip(&self.mu).all(|((a, t), m)| *a == t * m));
        let bound = self.tau.iter().flatten().all(|t| t.abs() <= Q::one());
        let in_ideal = (0..self.mu.len()).all(|n| {
            let s: Q = gens.iter().zip(&self.combination).map(|(g, c)| &g[n] * &c[n]).sum();
            s == self.mu[n]
        });
        let max = (0..self.mu.len()).all(|n| gens.iter().map(|g| g[n].abs()).max().unwrap_or_default() == self.mu[n]);
        gen_ok && bound && in_ideal && max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMode {
    Exact,
    /// γ^{1/4} replaced by a dyadic upper bound within 2⁻⁴⁰.
    Certified,
}

pub const CERTIFIED_BITS: u32 = 40;

fn exact_fourth_root(x: &Q) -> Option<Q> {
    let root = |n: &BigInt| {
        let r = n.nth_root(4);
        (r.pow(4u32) == *n).then_some(r)
    };
    Some(Q::new(root(x.numer())?, root(x.denom())?))
}

fn upper_fourth_root(x: &Q) -> Q {
    let s = BigInt::one() << CERTIFIED_BITS;
    let scaled = x.numer() * s.pow(4u32);
    let mut m = &scaled / x.denom();
    if &m * x.denom() != scaled {
        m += 1;
    }
    let mut u = m.nth_root(4);
    if u.pow(4u32) < m {
        u += 1;
    }
    Q::new(u, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TfpWitness {
    pub gamma: Vec<Q>,
    /// γ^{1/4}, exact or a certified upper bound.
    pub quarter: Vec<Q>,
    pub betas: Vec<Vec<Q>>,
    pub mode: RootMode,
}

/// α^i = γ^{1/4}·γ^{1/4}·β^i with γ = max_i |α^i|.
pub fn tfp_witness(seqs: &[Vec<Q>], mode: RootMode) -> Result<TfpWitness, SymIdealError> {
    let len = check_lengths(seqs)?;
    let gamma: Vec<Q> = (0..len).map(|n| seqs.iter().map(|s| s[n].abs()).max().unwrap_or_default()).collect();
    let quarter = gamma
        .iter()
        .map(|g| match mode {
            RootMode::Exact => exact_fourth_root(g).ok_or_else(|| SymIdealError::NonRepresentableRoot(fmt_q(g))),
            RootMode::Certified => Ok(exact_fourth_root(g).unwrap_or_else(|| upper_fourth_root(g))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let betas = seqs
        .iter()
        .map(|s| s.iter().zip(&quarter).map(|(a, r)| if r.is_zero() { Q::zero() } else { a / (r * r) }).collect())
        .collect();
    Ok(TfpWitness { gamma, quarter, betas, mode })
}

impl TfpWitness {
    pub fn identity_holds(&self, seqs: &[Vec<Q>]) -> bool {
        seqs.iter().zip(&self.betas).all(|(s, b)| s.iter().zip(b).zip(&self.quarter).all(|((a, b), r)| *a == r * r * b))
    }

    /// |β^i_n|² ≤ |α^i_n|.
    pub fn bound_holds(&self, seqs: &[Vec<Q>]) -> bool {
        seqs.iter().zip(&self.betas).all(|(s, b)| s.iter().zip(b).all(|(a, b)| b * b <= a.abs()))
    }

    /// Supports of γ^{1/4} and γ^{1/2} agree, the annihilator condition over ℚ.
    pub fn annihilators_agree(&self) -> bool {
        self.quarter.iter().all(|r| (r * r).is_zero() == r.is_zero())
    }

    pub fn root_error_bound(&self) -> Q {
        match self.mode {
            RootMode::Exact => Q::zero(),
            RootMode::Certified => Q::new(1.into(), BigInt::one() << CERTIFIED_BITS),
        }
    }

    pub fn factorization(&self) -> Factorization {
        let lift = |v: &Vec<Q>| v.iter().map(|x| SparseVec::from_pairs([(0, x.clone())])).collect::<Vec<_>>();
        Factorization {
            gamma: lift(&self.quarter),
            delta: lift(&self.quarter),
            betas: self.betas.iter().map(lift).collect(),
        }
    }
}

/// Elements of M_N(J) in the bar complex C^{bar}_n, one factor per slot.
#[derive(Clone, Debug)]
pub struct BarTerm {
    pub coef: Q,
    /// Leading factor diag(alpha)·U_f.
    pub alpha: Vec<SparseVec>,
    pub f: PartialInjection,
    pub rest: Vec<SparseVec>,
}

#[derive(Clone, Debug)]
pub struct BarChain {
    pub j: FinAlgebra,
    pub n: usize,
    pub degree: usize,
    pub terms: Vec<BarTerm>,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub gamma: Vec<SparseVec>,
    pub delta: Vec<SparseVec>,
    pub betas: Vec<Vec<SparseVec>>,
}

impl BarChain {
    pub fn algebra(&self) -> FinAlgebra {
        FinAlgebra::matrix_algebra(self.n, &self.j)
    }

    fn space(&self, degree: usize) -> TensorSpace {
        TensorSpace::new(vec![self.n * self.n * self.j.dim(); degree + 1])
    }

    /// diag(α)·U_f = Σ_j α_{f(j)} E_{f(j)j}.
    pub fn diag_u(&self, alpha: &[SparseVec], f: &PartialInjection) -> SparseVec {
        let dj = self.j.dim();
        let mut acc = SparseVec::new();
        for (j, i) in f.graph() {
            acc = acc.add(&alpha[i].map_indices(|k| (i * self.n + j) * dj + k));
        }
        acc
    }

    pub fn diag(&self, alpha: &[SparseVec]) -> SparseVec {
        self.diag_u(alpha, &PartialInjection::identity(self.n))
    }

    /// Splits a vector of C^{bar}_degree into basis tensors with matrix-unit leads.
    pub fn from_vector(j: &FinAlgebra, n: usize, degree: usize, v: &SparseVec) -> Self {
        let mut chain = BarChain { j: j.clone(), n, degree, terms: Vec::new() };
        let space = chain.space(degree);
        let dj = j.dim();
        for (idx, c) in v.iter() {
            let t = space.digits(*idx);
            let (ij, k) = (t[0] / dj, t[0] % dj);
            let (r, s) = (ij / n, ij % n);
            let mut alpha = vec![SparseVec::new(); n];
            alpha[r] = SparseVec::unit(k);
            let rest = t[1..].iter().map(|&x| SparseVec::unit(x)).collect();
            chain.terms.push(BarTerm { coef: c.clone(), alpha, f: PartialInjection::unit(n, r, s), rest });
        }
        chain
    }

    pub fn to_vector(&self) -> SparseVec {
        let space = self.space(self.degree);
        self.terms.iter().fold(SparseVec::new(), |acc, t| {
            let mut factors = vec![self.diag_u(&t.alpha, &t.f)];
            factors.extend(t.rest.iter().cloned());
            acc.add_scaled(&space.product_vec(&factors), &t.coef)
        })
    }

    /// Leading sequences α^{0,i} when J = ℚ.
    pub fn lead_sequences(&self) -> Vec<Vec<Q>> {
        self.terms.iter().map(|t| t.alpha.iter().map(|a| a.get(0)).collect()).collect()
    }

    /// The factorization of the leads from `tfp_witness`, J = ℚ.
    pub fn tfp_factorization(&self, mode: RootMode) -> Result<Factorization, SymIdealError> {
        if self.terms.is_empty() {
            let zero = vec![SparseVec::new(); self.n];
            return Ok(Factorization { gamma: zero.clone(), delta: zero, betas: Vec::new() });
        }
        Ok(tfp_witness(&self.lead_sequences(), mode)?.factorization())
    }
}

/// b' on C^{bar}_degree(a), a vector in a^{⊗(degree+1)}.
pub fn b_prime(a: &FinAlgebra, degree: usize, v: &SparseVec) -> SparseVec {
    if degree == 0 {
        return SparseVec::new();
    }
    let src = TensorSpace::new(vec![a.dim(); degree + 1]);
    let dst = TensorSpace::new(vec![a.dim(); degree]);
    let mut acc = SparseVec::new();
    for (idx, c) in v.iter() {
        let t = src.digits(*idx);
        for i in 0..degree {
            let w = splice(&dst, &t[..i], a.basis_product(t[i], t[i + 1]), &t[i + 2..]);
            acc = acc.add_scaled(&w, &if i % 2 == 0 { c.clone() } else { -c.clone() });
        }
    }
    acc
}

fn right_annihilator(j: &FinAlgebra, x: &SparseVec) -> Result<crate::exactla::Subspace, LaError> {
    Ok(kernel_basis(&j.left_matrix(x)))
}

/// w = diag(γ) ⊗ diag(δ)·y with b'(w) = z, y the chain with leads diag(β^i)U_f.
pub fn bar_contract(z: &BarChain, wit: &Factorization) -> Result<SparseVec, SymIdealError> {
    let (j, n) = (&z.j, z.n);
    let a = z.algebra();
    if wit.gamma.len() != n || wit.delta.len() != n || wit.betas.len() != z.terms.len() {
        return Err(SymIdealError::Malformed("factorization shape does not match the chain".into()));
    }
    let zv = z.to_vector();
    if !b_prime(&a, z.degree, &zv).is_zero() {
        return Err(SymIdealError::NotACycle);
    }
    let gd: Vec<SparseVec> = (0..n).map(|k| j.mul(&wit.gamma[k], &wit.delta[k])).collect();
    for (i, (t, b)) in z.terms.iter().zip(&wit.betas).enumerate() {
        if b.len() != n || (0..n).any(|k| j.mul(&gd[k], &b[k]) != t.alpha[k]) {
            return Err(SymIdealError::FactorMismatch(i));
        }
    }
    for k in 0..n {
        let lhs = right_annihilator(j, &gd[k]).map_err(|e| SymIdealError::Malformed(e.to_string()))?;
        let rhs = right_annihilator(j, &wit.delta[k]).map_err(|e| SymIdealError::Malformed(e.to_string()))?;
        if lhs.dim() != rhs.dim() || !rhs.is_subspace_of(&lhs) {
            return Err(SymIdealError::AnnihilatorMismatch(k));
        }
    }
    let space = z.space(z.degree + 1);
    let dg = z.diag(&wit.gamma);
    let dd = z.diag(&wit.delta);
    let mut w = SparseVec::new();
    for (t, b) in z.terms.iter().zip(&wit.betas) {
        let mut factors = vec![dg.clone(), a.mul(&dd, &z.diag_u(b, &t.f))];
        factors.extend(t.rest.iter().cloned());
        w = w.add_scaled(&space.product_vec(&factors), &t.coef);
    }
    if b_prime(&a, z.degree + 1, &w) != zv {
        return Err(SymIdealError::Malformed("contraction does not bound the cycle".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::qr;

    fn id(s: &str) -> SymbolicIdeal {
        s.parse().unwrap()
    }

    fn seq(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["c0", "l(3/2)", "l(2)-", "l(2)+", "linf-", "linf"] {
            assert_eq!(id(s).to_string(), s);
        }
        assert!("l(0)".parse::<SymbolicIdeal>().is_err());
        assert!("l(2)*".parse::<SymbolicIdeal>().is_err());
        assert!("ell2".parse::<SymbolicIdeal>().is_err());
    }

    #[test]
    fn power_rules() {
        assert_eq!(ideal_power(&id("l(2)"), 2).unwrap(), id("l(1)"));
        assert_eq!(ideal_power(&id("c0"), 3).unwrap(), id("c0"));
        assert_eq!(ideal_power(&id("l(3)+"), 3).unwrap(), id("l(1)+"));
        assert!(ideal_power(&id("l(1)"), 0).is_err());
    }

    #[test]
    fn omega_membership() {
        assert!(contains_omega(&id("l(2)")));
        assert!(!contains_omega(&id("l(1)")));
        assert!(contains_omega(&id("l(1)+")));
        assert!(!contains_omega(&id("l(1)-")));
        assert!(s_e_vanishes(&id("c0")));
        assert!(!s_e_vanishes(&id("l(1/2)")));
    }

    #[test]
    fn sqrt_closure() {
        assert!(sqrt_closed(&id("c0")));
        assert!(sqrt_closed(&id("linf-")));
        assert!(!sqrt_closed(&id("l(1)")));
    }

    #[test]
    fn hc0_branches() {
        use Hc0Value::*;
        let cases = [
            ("l(1/2)+", C),
            ("l(1)+", Zero),
            ("l(2)+", Zero),
            ("l(1/2)-", C),
            ("l(1)-", C),
            ("l(3/2)-", Zero),
            ("l(1/2)", C),
            ("l(1)", CplusV),
            ("l(2)", Zero),
        ];
        for (s, v) in cases {
            assert_eq!(hc0_table(&id(s)).unwrap(), v, "{s}");
        }
        assert!(matches!(hc0_table(&id("linf")), Err(SymIdealError::UnsupportedKind(_))));
    }

    #[test]
    fn floors() {
        assert_eq!((bracket(&q(2)), lfloor(&q(2))), (2, 1));
        assert_eq!((bracket(&qr(3, 2)), lfloor(&qr(3, 2))), (1, 1));
        assert_eq!((bracket(&qr(1, 3)), lfloor(&qr(1, 3))), (0, 0));
    }

    #[test]
    fn first_nonzero_examples() {
        for p in 1..6 {
            let r = first_nonzero(&SymbolicIdeal::lp(q(p)).unwrap()).unwrap();
            assert_eq!((r.degree, r.value), (2 * p - 2, Hc0Value::CplusV));
        }
        let r = first_nonzero(&id("l(3/2)")).unwrap();
        assert_eq!((r.degree, r.via.clone(), r.value), (2, id("l(3/4)"), Hc0Value::C));
        let r = first_nonzero(&id("l(2)+")).unwrap();
        assert_eq!((r.degree, r.value), (4, Hc0Value::C));
        assert!(first_nonzero(&id("c0")).is_err());
    }

    #[test]
    fn hc_group_descriptors() {
        let s = id("l(3/2)");
        assert_eq!(hc_group(&s, 1, 1).unwrap(), HcGroup::Zero);
        assert_eq!(
            hc_group(&s, 2, 1).unwrap(),
            HcGroup::FormsQuotient { num: id("l(3/4)"), den: id("l(1/2)"), forms: 0 }
        );
        assert_eq!(hc_group(&s, 5, 1).unwrap(), HcGroup::Undescribed);
    }

    #[test]
    fn polar_examples() {
        assert_eq!(polar(&seq(&[-2, 3])), (seq(&[-1, 1]), seq(&[2, 3])));
        assert_eq!(polar(&seq(&[0, 0])), (seq(&[0, 0]), seq(&[0, 0])));
    }

    #[test]
    fn principal_generator_examples() {
        let gens = vec![seq(&[1, 0, 3]), seq(&[0, 2, 1])];
        let r = principal_generator(&gens).unwrap();
        assert_eq!(r.mu, seq(&[1, 2, 3]));
        assert_eq!(r.tau, vec![seq(&[1, 0, 1]), vec![q(0), q(1), qr(1, 3)]]);
        assert!(r.verify(&gens));
        let z = principal_generator(&[seq(&[0, 0])]).unwrap();
        assert_eq!((z.mu, z.tau), (seq(&[0, 0]), vec![seq(&[0, 0])]));
        let tie = vec![seq(&[2, -1]), seq(&[-2, 1]), seq(&[1, 1])];
        assert!(principal_generator(&tie).unwrap().verify(&tie));
    }

    #[test]
    fn tfp_examples() {
        let w = tfp_witness(&[seq(&[16, 1])], RootMode::Exact).unwrap();
        assert_eq!(
            (w.gamma.clone(), w.quarter.clone(), w.betas[0].clone()),
            (seq(&[16, 1]), seq(&[2, 1]), seq(&[4, 1]))
        );
        let two = vec![seq(&[16, 0]), seq(&[0, 1])];
        let w = tfp_witness(&two, RootMode::Exact).unwrap();
        assert_eq!(w.betas, vec![seq(&[4, 0]), seq(&[0, 1])]);
        assert!(w.identity_holds(&two) && w.bound_holds(&two) && w.annihilators_agree());
        let zero = tfp_witness(&[seq(&[0, 0])], RootMode::Exact).unwrap();
        assert!(zero.quarter.iter().chain(&zero.betas[0]).all(Q::is_zero));
        assert!(matches!(tfp_witness(&[seq(&[2])], RootMode::Exact), Err(SymIdealError::NonRepresentableRoot(_))));
    }

    #[test]
    fn certified_roots_bound_from_above() {
        let seqs = vec![vec![q(2), qr(-1, 3), q(0)]];
        let w = tfp_witness(&seqs, RootMode::Certified).unwrap();
        assert!(w.identity_holds(&seqs) && w.bound_holds(&seqs));
        for (g, r) in w.gamma.iter().zip(&w.quarter) {
            let lower = r - w.root_error_bound();
            assert!(r.pow(4) >= *g);
            assert!(g.is_zero() || lower.pow(4) < *g);
        }
    }

    fn m2(j: &FinAlgebra, entries: &[(usize, usize, usize, i64)]) -> SparseVec {
        let dj = j.dim();
        SparseVec::from_pairs(entries.iter().map(|&(r, s, k, c)| ((r * 2 + s) * dj + k, q(c))))
    }

    #[test]
    fn contraction_of_zero_and_degree_one_cycle() {
        let j = FinAlgebra::rationals();
        let a = FinAlgebra::matrix_algebra(2, &j);
        let empty = BarChain { j: j.clone(), n: 2, degree: 1, terms: vec![] };
        let ones = vec![SparseVec::unit(0); 2];
        let wit = Factorization { gamma: ones.clone(), delta: ones.clone(), betas: vec![] };
        assert!(bar_contract(&empty, &wit).unwrap().is_zero());

        // z = x⊗y − xy⊗1
        let x = m2(&j, &[(0, 1, 0, 2), (1, 1, 0, 1)]);
        let y = m2(&j, &[(1, 0, 0, 3), (0, 0, 0, -1)]);
        let one = m2(&j, &[(0, 0, 0, 1), (1, 1, 0, 1)]);
        let sp = TensorSpace::new(vec![4, 4]);
        let zv = sp.product_vec(&[x.clone(), y.clone()]).sub(&sp.product_vec(&[a.mul(&x, &y), one]));
        let z = BarChain::from_vector(&j, 2, 1, &zv);
        assert_eq!(z.to_vector(), zv);
        let w = bar_contract(&z, &z.tfp_factorization(RootMode::Certified).unwrap()).unwrap();
        assert_eq!(b_prime(&a, 2, &w), zv);
    }

    #[test]
    fn annihilator_mismatch_is_reported() {
        let j = FinAlgebra::truncated_poly(2);
        let x = SparseVec::unit(1);
        let one = SparseVec::unit(0);
        let lead = m2(&j, &[(0, 0, 1, 1)]);
        let z = BarChain::from_vector(&j, 2, 0, &lead);
        let wit = Factorization {
            gamma: vec![x.clone(), one.clone()],
            delta: vec![one.clone(), one.clone()],
            betas: vec![vec![one.clone(), SparseVec::new()]],
        };
        assert!(matches!(bar_contract(&z, &wit), Err(SymIdealError::AnnihilatorMismatch(0))));
        let ok = Factorization {
            gamma: vec![one.clone(), one.clone()],
            delta: vec![one.clone(), one.clone()],
            betas: vec![vec![x, SparseVec::new()]],
        };
        let w = bar_contract(&z, &ok).unwrap();
        assert_eq!(b_prime(&FinAlgebra::matrix_algebra(2, &j), 1, &w), lead);
    }
}
