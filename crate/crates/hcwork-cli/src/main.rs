use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hcwork::algebra::{AlgebraJson, FinAlgebra};
use hcwork::complexes::hochschild::absolute_cyclic_module;
use hcwork::crossed::bicomplex::{hc_crossed_check, hh_crossed_check};
use hcwork::crossed::diagonal::phi_psi_check;
use hcwork::crossed::{check_realization, Bundle, CovariantBimodule};
use hcwork::exactla::{parse_q, SparseVec, Q};
use hcwork::forms::{cgg_check, hodge_forms_check, quillen, CommPresentedAlgebra, PresentedJson};
use hcwork::suite::{suite, Golden, PAPER_IDENTITIES};
use hcwork::symideal::{
    contains_omega, first_nonzero, hc0_table, hc_group, ideal_power, principal_generator, s_e_vanishes, sqrt_closed,
    tfp_witness, RootMode, SymbolicIdeal,
};

#[derive(Parser, Debug)]
#[command(name = "hcwork", version, about = "Exact cyclic-homology verification suites")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Coefficient algebra (JSON structure constants) or presentation.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Named coefficient algebra: q, dual, or q<N> / dual<N> pinned to --n.
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    maxdeg: Option<usize>,
    /// Truncation N.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Cmd {
    /// HH and HC tables of a unital algebra.
    Homology(Common),
    /// Hodge pieces against Kähler forms for a presented commutative algebra.
    Hodge(Common),
    /// Realization, φ/ψ and Hochschild comparison for R#Γ, R = A^N.
    CrossedCheck(Common),
    /// HC of the bicomplex against HC(R#Γ).
    HcCheck(Common),
    /// Relative HC^(p), HH^(p) against the form complexes D^(p), L^(p).
    CggCheck(Common),
    /// Spectral sequence of R ⊕ I[1] filtered by I-entries.
    Quillen(Common),
    /// Symbolic tables for one ideal, e.g. "l(3/2)" or "linf-".
    IdealTable { ideal: String },
    /// Principal generator or triple factorization of rational sequences.
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = WitnessKind::Principal)]
        kind: WitnessKind,
        /// Allow certified dyadic fourth roots.
        #[arg(long)]
        certified: bool,
    },
    /// Run a named suite; --input replaces the golden tables.
    Suite {
        #[arg(default_value = PAPER_IDENTITIES)]
        name: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum WitnessKind {
    Principal,
    Tfp,
}

#[derive(Serialize)]
struct CheckEntry {
    name: String,
    passed: bool,
    detail: Value,
}

#[derive(Serialize)]
struct Report {
    command: Value,
    passed: bool,
    checks: Vec<CheckEntry>,
}

fn entry(name: impl Into<String>, passed: bool, detail: impl Serialize) -> Result<CheckEntry> {
    Ok(CheckEntry { name: name.into(), passed, detail: serde_json::to_value(detail)? })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("input: cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("input: {} is not valid", path.display()))
}

/// The coefficient algebra A and N from --input/--base/--n.
fn coefficients(c: &Common, default_n: usize) -> Result<(String, FinAlgebra, usize)> {
    let n = c.n.unwrap_or(default_n);
    if let Some(path) = &c.input {
        let j: AlgebraJson = read_json(path)?;
        let a = FinAlgebra::from_json(&j).map_err(|e| anyhow!("input: {e}"))?;
        return Ok((path.display().to_string(), a, n));
    }
    let name = c.base.as_deref().unwrap_or("q");
    let split = name.find(|ch: char| ch.is_ascii_digit()).unwrap_or(name.len());
    let (stem, count) = name.split_at(split);
    if !count.is_empty() {
        let k: usize = count.parse().map_err(|_| anyhow!("base: bad power in {name:?}"))?;
        if c.n.is_some_and(|m| m != k) {
            bail!("base: {name:?} disagrees with --n {}", c.n.unwrap_or_default());
        }
        return Ok((name.to_string(), named(stem, name)?, k));
    }
    Ok((name.to_string(), named(stem, name)?, n))
}

fn named(stem: &str, full: &str) -> Result<FinAlgebra> {
    match stem {
        "q" => Ok(FinAlgebra::rationals()),
        "dual" => Ok(FinAlgebra::truncated_poly(2)),
        _ => bail!("base: unknown algebra {full:?} (expected q, dual, q<N>, dual<N>)"),
    }
}

fn presentation(c: &Common) -> Result<(CommPresentedAlgebra, Vec<hcwork::forms::Poly>)> {
    match &c.input {
        Some(path) => {
            let j: PresentedJson = read_json(path)?;
            CommPresentedAlgebra::from_json(&j).map_err(|e| anyhow!("input: {e}"))
        }
        None => {
            let m = match c.base.as_deref().unwrap_or("dual") {
                "dual" => 2,
                b => b
                    .strip_prefix("x")
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(|| anyhow!("base: expected dual or x<m> for Q[x]/(x^m), got {b:?}"))?,
            };
            Ok((CommPresentedAlgebra::truncated_poly(m), vec![vec![(Q::from_integer(1.into()), vec![1])]]))
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let command = serde_json::to_value(&cli.cmd)?;
    let checks = match &cli.cmd {
        Cmd::Homology(c) => {
            let (label, a, _) = coefficients(c, 1)?;
            if a.unit().is_none() {
                bail!("input: algebra must be unital");
            }
            let top = c.maxdeg.unwrap_or(3) + 1;
            let m = absolute_cyclic_module(&a, top)?.mixed()?;
            vec![entry("tables", true, json!({ "algebra": label, "hh": m.hh_table()?, "hc": m.hc_table()? }))?]
        }
        Cmd::Hodge(c) => {
            let (r, _) = presentation(c)?;
            let max = c.maxdeg.unwrap_or(2);
            let rep = hodge_forms_check(&r, max, max + 2)?;
            vec![entry("hodge", rep.passed(), rep)?]
        }
        Cmd::CrossedCheck(c) => {
            let (label, a, n) = coefficients(c, 2)?;
            let top = c.maxdeg.unwrap_or(2);
            let whole = vec![SparseVec::from_pairs(a.unit().into_iter().flat_map(|u| u.iter().cloned()))];
            let real = check_realization(&a, n, &whole)?;
            let b = Bundle::sequence(&a, n)?;
            let m = CovariantBimodule::regular(&b);
            let pp = phi_psi_check(&b, &m, top)?;
            let hh = hh_crossed_check(&b, &m, top)?;
            vec![
                entry(format!("realization {label}"), real.passed(), real)?,
                entry("phi/psi", pp.passed(), pp)?,
                entry("hochschild", hh.passed(), hh)?,
            ]
        }
        Cmd::HcCheck(c) => {
            let (label, a, n) = coefficients(c, 2)?;
            let b = Bundle::sequence(&a, n)?;
            let rep = hc_crossed_check(&b, c.maxdeg.unwrap_or(3))?;
            vec![entry(format!("hc {label} N={n}"), rep.passed(), rep)?]
        }
        Cmd::CggCheck(c) => {
            let (r, s) = presentation(c)?;
            let max = c.maxdeg.unwrap_or(2);
            (0..=max.min(3))
                .map(|p| {
                    let rep = cgg_check(&r, &s, p, max)?;
                    entry(format!("p={p}"), rep.passed(), rep)
                })
                .collect::<Result<_>>()?
        }
        Cmd::Quillen(c) => {
            let (r, s) = presentation(c)?;
            let ideal = r.ideal(&s);
            let rep = quillen(r.algebra(), ideal.basis(), c.maxdeg.unwrap_or(3))?;
            let vanishes = rep.e1_vanishes_from(2);
            let converges = rep.converges();
            vec![
                entry("e1 vanishes for p >= 2", vanishes, &rep.e1)?,
                entry("converges to HC(R/I)", converges, json!({ "e_inf": rep.e_inf_total, "target": rep.target }))?,
            ]
        }
        Cmd::IdealTable { ideal } => {
            let s: SymbolicIdeal = ideal.parse().map_err(|e| anyhow!("ideal: {e}"))?;
            let first = first_nonzero(&s)
                .ok()
                .map(|f| json!({ "degree": f.degree, "weight": f.weight, "via": f.via, "value": f.value.to_string() }));
            let groups: Vec<Value> = (0..=2)
                .flat_map(|w| (0..=4).map(move |n| (n, w)))
                .filter_map(|(n, w)| hc_group(&s, n, w).ok().map(|g| json!({ "n": n, "weight": w, "group": g })))
                .collect();
            let detail = json!({
                "ideal": s,
                "hc0": hc0_table(&s).ok().map(|v| v.to_string()),
                "first_nonzero": first,
                "contains_omega": contains_omega(&s),
                "s_e_vanishes": s_e_vanishes(&s),
                "sqrt_closed": sqrt_closed(&s),
                "square": ideal_power(&s, 2)?,
                "groups": groups,
            });
            vec![entry("table", true, detail)?]
        }
        Cmd::Witness { input, kind, certified } => {
            let raw: Vec<Vec<String>> = read_json(input)?;
            let seqs = raw
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    s.iter().map(|x| parse_q(x).map_err(|_| anyhow!("input: sequences[{i}] has entry {x:?}"))).collect()
                })
                .collect::<Result<Vec<Vec<Q>>>>()?;
            match kind {
                WitnessKind::Principal => {
                    let g = principal_generator(&seqs)?;
                    let ok = g.verify(&seqs);
                    vec![entry(
                        "principal generator",
                        ok,
                        json!({ "mu": fmt(&g.mu), "tau": g.tau.iter().map(|t| fmt(t)).collect::<Vec<_>>() }),
                    )?]
                }
                WitnessKind::Tfp => {
                    let mode = if *certified { RootMode::Certified } else { RootMode::Exact };
                    let w = tfp_witness(&seqs, mode)?;
                    let ok = w.identity_holds(&seqs) && w.bound_holds(&seqs) && w.annihilators_agree();
                    let detail = json!({
                        "mode": mode,
                        "gamma": fmt(&w.gamma),
                        "gamma_quarter": fmt(&w.quarter),
                        "betas": w.betas.iter().map(|b| fmt(b)).collect::<Vec<_>>(),
                        "root_error_bound": hcwork::exactla::fmt_q(&w.root_error_bound()),
                    });
                    vec![entry("triple factorization", ok, detail)?]
                }
            }
        }
        Cmd::Suite { name, input } => {
            let golden = match input {
                Some(p) => read_json(p)?,
                None => Golden::default(),
            };
            let rep = suite(name, &golden)?;
            let mut out = Vec::new();
            for c in rep.checks {
                eprintln!(
                    "[{:>2}] {:<34} {} ({:.2?})",
                    c.id,
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.elapsed
                );
                out.push(CheckEntry { name: format!("{}. {}", c.id, c.name), passed: c.passed, detail: c.detail });
            }
            out
        }
    };
    let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
    Ok(Report { command, passed, checks })
}

fn fmt(v: &[Q]) -> Vec<String> {
    v.iter().map(hcwork::exactla::fmt_q).collect()
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(prefix, k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(prefix, &i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn join(prefix: &str, k: &str) -> String {
    if prefix.is_empty() {
        k.to_string()
    } else {
        format!("{prefix}.{k}")
    }
}

fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &serde_json::to_value(report)?, &mut rows);
            let mut s = String::from("path,value\n");
            for (p, v) in rows {
                s.push_str(&format!("{},{}\n", csv_escape(&p), csv_escape(&v)));
            }
            s
        }
    })
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("WORKBENCH_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow!("WORKBENCH_THREADS: expected a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("WORKBENCH_THREADS: must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = configure_threads().and_then(|_| run(&cli)).and_then(|r| Ok((render(&r, cli.format)?, r.passed)));
    match result {
        Ok((text, passed)) => {
            let written = match &cli.output {
                Some(p) => fs::write(p, &text).with_context(|| format!("output: cannot write {}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            eprintln!("{} in {:.2?}", if passed { "pass" } else { "fail" }, start.elapsed());
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
