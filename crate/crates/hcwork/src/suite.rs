//! The "paper-identities" suite: every acceptance check in a fixed order,
//! each reporting its compared tables.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::FinAlgebra;
use crate::complexes::hochschild::bar_complex;
use crate::complexes::tensor::TensorSpace;
use crate::crossed::bicomplex::hc_crossed_check;
use crate::crossed::diagonal::phi_psi_check;
use crate::crossed::{check_realization, perp_cyclic_check, perp_h0, Bundle, CovariantBimodule, EmbModule};
use crate::exactla::{q, SparseVec, Q};
use crate::forms::{cgg_check, hodge_forms_check, quillen, CommPresentedAlgebra, Poly};
use crate::symideal::{
    b_prime, bar_contract, first_nonzero, hc0_table, principal_generator, tfp_witness, BarChain, Hc0Value, RootMode,
    SymbolicIdeal,
};

pub const PAPER_IDENTITIES: &str = "paper-identities";

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

/// Expected tables the suite compares against.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Golden {
    pub hc_crossed_q2: Vec<usize>,
    pub hc_rationals: Vec<usize>,
    pub hc0: Vec<(String, Hc0Value)>,
    pub first_nonzero: Vec<(String, i64, Hc0Value)>,
    pub square_zero_h0: usize,
}

impl Default for Golden {
    fn default() -> Self {
        use Hc0Value::*;
        let hc0 = [
            ("l(1/2)+", C),
            ("l(1)+", Zero),
            ("l(3)+", Zero),
            ("l(1/2)-", C),
            ("l(1)-", C),
            ("l(2)-", Zero),
            ("l(1/3)", C),
            ("l(1)", CplusV),
            ("l(5/2)", Zero),
        ];
        let first = [
            ("l(1)", 0, CplusV),
            ("l(2)", 2, CplusV),
            ("l(3)", 4, CplusV),
            ("l(3/2)", 2, C),
            ("l(5/2)", 4, C),
            ("l(2)-", 2, C),
            ("l(1/2)+", 0, C),
            ("l(2)+", 4, C),
            ("l(5/2)+", 4, C),
        ];
        Golden {
            hc_crossed_q2: vec![1, 0, 1, 0],
            hc_rationals: vec![1, 0, 1, 0],
            hc0: hc0.iter().map(|(s, v)| (s.to_string(), *v)).collect(),
            first_nonzero: first.iter().map(|(s, m, v)| (s.to_string(), *m, *v)).collect(),
            square_zero_h0: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

type Outcome = Result<(bool, Value), String>;
type CheckFn = fn(&Golden) -> Outcome;

pub struct Check {
    pub id: usize,
    pub name: &'static str,
    run: CheckFn,
}

impl Check {
    pub fn run(&self, golden: &Golden) -> CheckOutcome {
        let start = Instant::now();
        let (passed, detail) = match (self.run)(golden) {
            Ok(r) => r,
            Err(e) => (false, json!({ "error": e })),
        };
        CheckOutcome { id: self.id, name: self.name, passed, detail, elapsed: start.elapsed() }
    }
}

pub fn checks() -> Vec<Check> {
    let table: [(&'static str, CheckFn); 11] = [
        ("crossed-product realization", realization),
        ("phi/psi isomorphism", phi_psi),
        ("coinvariants", coinvariants),
        ("cyclic structure", cyclic_structure),
        ("crossed-product cyclic homology", crossed_hc),
        ("hodge decomposition", hodge),
        ("relative forms comparison", cgg),
        ("quillen spectral sequence", quillen_ss),
        ("ideal tables", ideal_tables),
        ("constructive factorizations", factorizations),
        ("h-unitality contrast", h_unitality),
    ];
    table.into_iter().enumerate().map(|(i, (name, run))| Check { id: i + 1, name, run }).collect()
}

pub fn suite(name: &str, golden: &Golden) -> Result<SuiteReport, SuiteError> {
    if name != PAPER_IDENTITIES {
        return Err(SuiteError::UnknownSuite(name.to_string()));
    }
    let checks = checks().par_iter().map(|c| c.run(golden)).collect();
    Ok(SuiteReport { suite: name.to_string(), checks })
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dual_numbers_ideal() -> Vec<SparseVec> {
    vec![SparseVec::unit(1)]
}

fn realization(_: &Golden) -> Outcome {
    let bases = [
        ("Q", FinAlgebra::rationals(), vec![SparseVec::unit(0)]),
        ("Q[x]/(x^2)", FinAlgebra::truncated_poly(2), dual_numbers_ideal()),
    ];
    let mut rows = Vec::new();
    let mut ok = true;
    for (label, a, ideal) in &bases {
        for n in 1..=3 {
            let r = check_realization(a, n, ideal).map_err(err)?;
            ok &= r.passed();
            rows.push(json!({ "base": label, "report": r }));
        }
    }
    Ok((ok, json!(rows)))
}

fn sequence_bundles(n: usize) -> Result<Vec<(&'static str, Bundle)>, String> {
    Ok(vec![
        ("Q", Bundle::sequence(&FinAlgebra::rationals(), n).map_err(err)?),
        ("Q[x]/(x^2)", Bundle::sequence(&FinAlgebra::truncated_poly(2), n).map_err(err)?),
    ])
}

fn phi_psi(_: &Golden) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (label, b) in sequence_bundles(2)? {
        let r = phi_psi_check(&b, &CovariantBimodule::regular(&b), 2).map_err(err)?;
        ok &= r.passed();
        rows.push(json!({ "base": label, "report": r }));
    }
    Ok((ok, json!(rows)))
}

fn test_modules(n: usize) -> Result<Vec<(&'static str, EmbModule)>, String> {
    let mut mods: Vec<_> = sequence_bundles(n)?.into_iter().map(|(l, b)| (l, b.action)).collect();
    mods.push(("Gamma left", EmbModule::gamma_left(n)));
    mods.push(("Gamma conjugation", EmbModule::gamma_conjugation(n)));
    Ok(mods)
}

fn coinvariants(_: &Golden) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 2..=3 {
        for (label, m) in test_modules(n)? {
            let (lhs, rhs) = (m.coinvariants().dim(), perp_h0(&m).map_err(err)?);
            ok &= lhs == rhs;
            rows.push(json!({ "n": n, "module": label, "coinvariants": lhs, "perp_h0": rhs }));
        }
    }
    Ok((ok, json!(rows)))
}

fn cyclic_structure(_: &Golden) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (label, m) in test_modules(2)? {
        let r = perp_cyclic_check(&m, 3).map_err(err)?;
        ok &= r.passed();
        rows.push(json!({ "module": label, "report": r }));
    }
    Ok((ok, json!(rows)))
}

fn crossed_hc(g: &Golden) -> Outcome {
    let b = Bundle::sequence(&FinAlgebra::rationals(), 2).map_err(err)?;
    let r = hc_crossed_check(&b, 3).map_err(err)?;
    let ok = r.passed() && r.lhs() == g.hc_crossed_q2;
    Ok((ok, json!({ "tables": r, "expected": g.hc_crossed_q2 })))
}

fn presented(m: usize) -> CommPresentedAlgebra {
    CommPresentedAlgebra::truncated_poly(m)
}

fn x_ideal() -> Vec<Poly> {
    vec![vec![(q(1), vec![1])]]
}

fn hodge(_: &Golden) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for m in [2, 3] {
        let r = hodge_forms_check(&presented(m), 2, 4).map_err(err)?;
        ok &= r.passed();
        rows.push(json!({ "relation": format!("x^{m}"), "report": r }));
    }
    Ok((ok, json!(rows)))
}

fn cgg(_: &Golden) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for m in [2, 3] {
        for p in 0..=2 {
            let r = cgg_check(&presented(m), &x_ideal(), p, 2).map_err(err)?;
            ok &= r.passed();
            rows.push(json!({ "relation": format!("x^{m}"), "report": r }));
        }
    }
    Ok((ok, json!(rows)))
}

fn quillen_ss(g: &Golden) -> Outcome {
    let r = quillen(&FinAlgebra::truncated_poly(2), &dual_numbers_ideal(), 3).map_err(err)?;
    let vanishes = r.e1_vanishes_from(2);
    let converges = r.converges() && r.e_inf_total == g.hc_rationals;
    Ok((vanishes && converges, json!({ "e1_vanishes_from_2": vanishes, "converges": converges, "report": r })))
}

fn ideal(s: &str) -> Result<SymbolicIdeal, String> {
    s.parse().map_err(err)
}

fn ideal_tables(g: &Golden) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (s, want) in &g.hc0 {
        let got = hc0_table(&ideal(s)?).map_err(err)?;
        ok &= got == *want;
        rows.push(json!({ "ideal": s, "hc0": got.to_string(), "expected": want.to_string() }));
    }
    for (s, m, want) in &g.first_nonzero {
        let r = first_nonzero(&ideal(s)?).map_err(err)?;
        ok &= r.degree == *m && r.value == *want;
        rows.push(
            json!({ "ideal": s, "degree": r.degree, "value": r.value.to_string(), "expected": [m, want.to_string()] }),
        );
    }
    Ok((ok, json!(rows)))
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into())
}

fn random_seqs(rng: &mut ChaCha8Rng, count: usize, len: usize, f: impl Fn(&mut ChaCha8Rng) -> Q) -> Vec<Vec<Q>> {
    (0..count).map(|_| (0..len).map(|_| f(rng)).collect()).collect()
}

/// b'(u) for random u, plus x⊗y − xy⊗1, all in C^{bar}(M_2(ℚ)).
pub fn suite_cycles(rng: &mut ChaCha8Rng) -> Vec<BarChain> {
    let j = FinAlgebra::rationals();
    let a = FinAlgebra::matrix_algebra(2, &j);
    let mut out = Vec::new();
    for degree in 0..=2 {
        let sp = TensorSpace::new(vec![4; degree + 2]);
        let mut entries = Vec::new();
        for i in 0..sp.size() {
            if rng.gen_bool(0.3) {
                entries.push((i, random_q(rng)));
            }
        }
        let u = SparseVec::from_pairs(entries);
        out.push(BarChain::from_vector(&j, 2, degree, &b_prime(&a, degree + 1, &u)));
    }
    let x = SparseVec::from_pairs([(1, q(2)), (3, q(1))]);
    let y = SparseVec::from_pairs([(2, q(3)), (0, q(-1))]);
    let one = SparseVec::from_pairs([(0, q(1)), (3, q(1))]);
    let sp = TensorSpace::new(vec![4, 4]);
    let z = sp.product_vec(&[x.clone(), y.clone()]).sub(&sp.product_vec(&[a.mul(&x, &y), one]));
    out.push(BarChain::from_vector(&j, 2, 1, &z));
    out
}

fn factorizations(_: &Golden) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut principal = true;
    for _ in 0..100 {
        let (count, len) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
        let gens = random_seqs(&mut rng, count, len, |r| if r.gen_bool(0.2) { q(0) } else { random_q(r) });
        principal &= principal_generator(&gens).map_err(err)?.verify(&gens);
    }
    let mut tfp = true;
    for _ in 0..100 {
        let (count, len) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
        let seqs = random_seqs(&mut rng, count, len, |r| {
            let (a, b): (i64, i64) = (r.gen_range(0..=5), r.gen_range(1..=4));
            Q::new(a.pow(4).into(), b.pow(4).into()) * if r.gen_bool(0.5) { q(-1) } else { q(1) }
        });
        let w = tfp_witness(&seqs, RootMode::Exact).map_err(err)?;
        tfp &= w.identity_holds(&seqs) && w.bound_holds(&seqs) && w.annihilators_agree();
    }
    let mut contracted = Vec::new();
    for z in suite_cycles(&mut rng) {
        let wit = z.tfp_factorization(RootMode::Certified).map_err(err)?;
        let w = bar_contract(&z, &wit).map_err(err)?;
        contracted.push(b_prime(&z.algebra(), z.degree + 1, &w) == z.to_vector());
    }
    let bar = contracted.iter().all(|&b| b);
    Ok((
        principal && tfp && bar,
        json!({ "principal_generator": principal, "tfp_witness": tfp, "bar_contract": contracted }),
    ))
}

fn h_unitality(g: &Golden) -> Outcome {
    let unital = [
        ("Q", FinAlgebra::rationals()),
        ("Q^2", FinAlgebra::diagonal(2)),
        ("Q[x]/(x^2)", FinAlgebra::truncated_poly(2)),
        ("M_2(Q)", FinAlgebra::matrix_units(2)),
    ];
    let mut rows = Vec::new();
    let mut ok = true;
    for (label, a) in &unital {
        let c = bar_complex(a, 4).map_err(err)?;
        let hs = (0..=3).map(|k| c.homology(k)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        ok &= hs.iter().all(|&h| h == 0);
        rows.push(json!({ "algebra": label, "bar_homology": hs }));
    }
    let c = bar_complex(&FinAlgebra::square_zero_line(), 1).map_err(err)?;
    let h0 = c.homology(0).map_err(err)?;
    ok &= h0 == g.square_zero_h0;
    rows.push(json!({ "algebra": "Q x, x^2 = 0", "bar_h0": h0 }));
    Ok((ok, json!(rows)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(suite("nope", &Golden::default()), Err(SuiteError::UnknownSuite(_))));
    }

    #[test]
    fn checks_are_declared_in_order() {
        let ids: Vec<_> = checks().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    }

    #[test]
    fn fast_checks_pass() {
        let g = Golden::default();
        for c in checks().iter().filter(|c| [9, 10, 11].contains(&c.id)) {
            let o = c.run(&g);
            assert!(o.passed, "{}: {}", c.name, o.detail);
        }
    }

    #[test]
    fn perturbed_table_fails_once() {
        let mut g = Golden::default();
        g.hc0[0].1 = Hc0Value::Zero;
        let fails: Vec<_> = checks().iter().filter(|c| [9, 10, 11].contains(&c.id)).map(|c| c.run(&g).passed).collect();
        assert_eq!(fails, vec![false, true, true]);
    }
}
