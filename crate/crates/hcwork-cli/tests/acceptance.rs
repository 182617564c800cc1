//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons.
//! Criteria listed in KNOWN_RED are expected to fail; the harness exits
//! nonzero on any other failure or if a known-red criterion starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use hcwork::algebra::FinAlgebra;
use hcwork::complexes::hochschild::{absolute_cyclic_module, bar_complex};
use hcwork::exactla::{q, SparseMatrix, SparseVec, Q};
use hcwork::forms::quillen;
use hcwork::suite::{checks, Golden};
use hcwork::symideal::{principal_generator, tfp_witness, RootMode};

/// E¹_{2,1} = 1 for Q[x]/(x²) ⊃ (x): (x) ⊗_R (x) ≅ Q while (x)² = 0.
const KNOWN_RED: &[usize] = &[8];

const BUDGETS: [u64; 11] = [10, 60, 10, 10, 120, 60, 300, 60, 1, 30, 10];

fn rows(detail: &Value) -> &[Value] {
    detail.as_array().map_or(&[], Vec::as_slice)
}

fn realization_dims(detail: &Value) -> bool {
    let dims: Vec<u64> = rows(detail).iter().filter_map(|r| r["report"]["dim"].as_u64()).collect();
    // dim(A^N # Γ_N) = N · dim A · N
    dims == [1, 4, 9, 2, 8, 18]
}

fn sequence_coinvariants(detail: &Value) -> bool {
    // one orbit of points, so (A^N)_ℰ = A
    rows(detail)
        .iter()
        .filter(|r| r["module"] == "Q" || r["module"] == "Q[x]/(x^2)")
        .all(|r| r["coinvariants"].as_u64() == Some(if r["module"] == "Q" { 1 } else { 2 }))
}

fn morita_hc(golden: &Golden) -> bool {
    // Q^2 # Γ_2 ≅ M_2(Q) is Morita equivalent to Q
    let m = absolute_cyclic_module(&FinAlgebra::rationals(), 4).and_then(|c| c.mixed()).and_then(|m| m.hc_table());
    m.map(|t| t == golden.hc_crossed_q2).unwrap_or(false)
}

fn quillen_target(golden: &Golden) -> bool {
    let hc_q = absolute_cyclic_module(&FinAlgebra::rationals(), 4).and_then(|c| c.mixed()).and_then(|m| m.hc_table());
    let rep = quillen(&FinAlgebra::truncated_poly(2), &[SparseVec::unit(1)], 3);
    matches!((hc_q, rep), (Ok(t), Ok(r)) if t == golden.hc_rationals && r.target == t)
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=12).into())
}

fn factorizations_recomputed() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..100).all(|_| {
        let (count, len) = (rng.gen_range(1..=5), rng.gen_range(1..=8));
        let gens: Vec<Vec<Q>> = (0..count).map(|_| (0..len).map(|_| random_q(&mut rng)).collect()).collect();
        let Ok(g) = principal_generator(&gens) else { return false };
        let one = q(1);
        gens.iter().zip(&g.tau).all(|(a, t)| {
            a.iter().zip(t).zip(&g.mu).all(|((x, t), m)| *x == t * m && t.clone() * t.clone() <= one.clone())
        })
    }) && {
        let fourth = |k: i64| Q::new((k * k * k * k).into(), 1.into());
        let seqs = vec![vec![fourth(2), fourth(0), fourth(3)], vec![fourth(1), fourth(1), -fourth(2)]];
        tfp_witness(&seqs, RootMode::Exact).is_ok_and(|w| {
            w.quarter == [q(2), q(1), q(3)]
                && seqs
                    .iter()
                    .zip(&w.betas)
                    .all(|(s, b)| s.iter().zip(b).zip(&w.quarter).all(|((a, b), r)| *a == r * r * b))
        })
    }
}

/// s(t) = 1 ⊗ t is a contracting homotopy: b's + sb' = 1 in degrees ≤ 3.
fn bar_homotopy() -> bool {
    [FinAlgebra::rationals(), FinAlgebra::diagonal(2), FinAlgebra::truncated_poly(2), FinAlgebra::matrix_units(2)]
        .iter()
        .all(|a| {
            let d = a.dim();
            let unit = a.unit().expect("unital").clone();
            let Ok(c) = bar_complex(a, 4) else { return false };
            let s = |n: u32| {
                let size = d.pow(n + 1);
                let cols = (0..size).map(|t| unit.map_indices(|k| k * size + t)).collect();
                SparseMatrix::from_columns(size * d, cols)
            };
            (0..=3).all(|n: u32| {
                let up = c.boundary(n as i32 + 1).mul(&s(n));
                let down = if n == 0 { SparseMatrix::zero(d, d) } else { s(n - 1).mul(&c.boundary(n as i32)) };
                up.add(&down) == SparseMatrix::identity(d.pow(n + 1))
            })
        })
}

fn main() -> ExitCode {
    let golden = Golden::default();
    let mut unexpected = 0;
    for check in checks() {
        let start = Instant::now();
        let outcome = check.run(&golden);
        let oracle = match check.id {
            1 => realization_dims(&outcome.detail),
            3 => sequence_coinvariants(&outcome.detail),
            5 => morita_hc(&golden),
            8 => quillen_target(&golden),
            10 => factorizations_recomputed(),
            11 => bar_homotopy(),
            _ => true,
        };
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(BUDGETS[check.id - 1]);
        let pass = outcome.passed && oracle && elapsed <= budget;
        let known = KNOWN_RED.contains(&check.id);
        println!(
            "criterion {:>2} {:<34} {}{} ({:.2?}, budget {}s)",
            check.id,
            check.name,
            if pass { "PASS" } else { "FAIL" },
            if known { " [known red]" } else { "" },
            elapsed,
            budget.as_secs()
        );
        if let (false, Some(m)) = (pass, outcome.detail.as_object()) {
            let flags: Vec<String> =
                m.iter().filter(|(_, v)| v.is_boolean()).map(|(k, v)| format!("{k} = {v}")).collect();
            if !flags.is_empty() {
                println!("    {}", flags.join(", "));
            }
        }
        if !pass && !oracle {
            println!("    independent oracle disagrees");
        }
        if pass == known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria deviate from the expected outcome");
        ExitCode::FAILURE
    }
}
