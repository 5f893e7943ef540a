//! Command-line driver: parses a polynomial system file, runs the requested
//! computation or verification suite, and prints a structured report
//! (optionally as JSON). Exit codes: 0 on success, 1 when a check fails or
//! a certificate is refused, 2 on usage or input errors.

use std::path::PathBuf;
use std::process::exit;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use koszul_core::bezout::{difference_jacobian, j_map, j_product, PolySystem};
use koszul_core::expr::{format_mv, parse_mv, parse_system, Names};
use koszul_core::solver::{
    default_truncation, find_unit_preimage, homology_rank, homotopy_inverse_check,
    quotient_dimension,
};
use koszul_core::verify::verify_system;

#[derive(Parser)]
#[command(name = "koszul", version, about = "Koszul complexes, difference Jacobians and exact homology certificates for polynomial systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Truncation degree (overrides the system file)
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Variable order as a 1-based comma list, e.g. 2,1 (overrides the file)
    #[arg(long, global = true)]
    order: Option<String>,
    /// Random seed for sampled checks (overrides the file)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit the report as a single JSON document
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the divided-difference matrix ∇f
    Nabla { file: PathBuf },
    /// Print the difference Jacobian J
    Bezout { file: PathBuf },
    /// Apply the J-map to a dual functional
    Jmap { file: PathBuf, functional: String },
    /// J-product of two dual functionals
    Jproduct { file: PathBuf, c1: String, c2: String },
    /// Run the full identity verification suite
    Verify { file: PathBuf },
    /// Truncated homology rank at an f̂-degree
    Homology {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        fdeg: i64,
    },
    /// Truncated dimension of the quotient ring R[x]/(f)
    QuotientDim { file: PathBuf },
    /// Find (e, t) with J(e) = 1 + ∂[t] and run the homotopy inverse check
    Inverse { file: PathBuf },
}

#[derive(Serialize)]
struct ResultEntry {
    name: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<String>,
}

#[derive(Serialize)]
struct SystemEcho {
    vars: Vec<String>,
    polynomials: Vec<String>,
}

#[derive(Serialize)]
struct OptionsEcho {
    degree: u32,
    order: Vec<usize>,
    seed: u64,
}

#[derive(Serialize)]
struct Report {
    command: String,
    system: SystemEcho,
    options: OptionsEcho,
    results: Vec<ResultEntry>,
    elapsed_ms: u128,
}

struct Loaded {
    sys: PolySystem,
    vars: Vec<String>,
    degree: u32,
    seed: u64,
}

fn value_entry(name: &str, value: String) -> ResultEntry {
    ResultEntry { name: name.into(), status: "value".into(), value: Some(value), certificate: None }
}

fn check_entry(name: &str, pass: bool, detail: Option<String>) -> ResultEntry {
    ResultEntry {
        name: name.into(),
        status: if pass { "pass" } else { "fail" }.into(),
        value: detail,
        certificate: None,
    }
}

fn load(cli: &Cli, file: &PathBuf) -> Result<Loaded, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let sf = parse_system(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    let n = sf.vars.len();
    let order = match &cli.order {
        Some(spec) => {
            let idx: Result<Vec<usize>, _> =
                spec.split(',').map(|p| p.trim().parse::<usize>()).collect();
            let idx = idx.map_err(|e| format!("bad --order: {e}"))?;
            let mut seen = vec![false; n];
            if idx.len() != n || idx.iter().any(|&i| i == 0 || i > n) {
                return Err(format!("--order must list each of 1..{n} exactly once"));
            }
            for &i in &idx {
                if seen[i - 1] {
                    return Err(format!("--order must list each of 1..{n} exactly once"));
                }
                seen[i - 1] = true;
            }
            Some(idx.iter().map(|&i| i - 1).collect())
        }
        None => sf.order.clone(),
    };
    let sys = PolySystem::new(n, sf.f.clone(), order).map_err(|e| e.to_string())?;
    let degree = cli.degree.or(sf.degree).unwrap_or_else(|| default_truncation(&sys));
    let seed = cli.seed.or(sf.seed).unwrap_or(0);
    Ok(Loaded { sys, vars: sf.vars, degree, seed })
}

fn run(cli: &Cli) -> Result<i32, String> {
    let start = Instant::now();
    let (name, file) = match &cli.cmd {
        Cmd::Nabla { file } => ("nabla", file),
        Cmd::Bezout { file } => ("bezout", file),
        Cmd::Jmap { file, .. } => ("jmap", file),
        Cmd::Jproduct { file, .. } => ("jproduct", file),
        Cmd::Verify { file } => ("verify", file),
        Cmd::Homology { file, .. } => ("homology", file),
        Cmd::QuotientDim { file } => ("quotient-dim", file),
        Cmd::Inverse { file } => ("inverse", file),
    };
    let ld = load(cli, file)?;
    let names_x = Names::cx(&ld.vars);
    let names_xy = Names::cxy(&ld.vars);
    let names_d = Names::dx(&ld.vars);
    let err = |e: koszul_core::AlgebraError| e.to_string();

    let mut results = Vec::new();
    let mut code = 0;
    match &cli.cmd {
        Cmd::Nabla { .. } => {
            let ctx2 = ld.sys.ctx_cxy();
            let rows = ld.sys.nabla_rows("x", "y", &ctx2).map_err(err)?;
            for (i, row) in rows.iter().enumerate() {
                for (k, p) in row.iter().enumerate() {
                    results.push(value_entry(
                        &format!("nabla[{}][{}]", i + 1, k + 1),
                        format_mv(p, &names_xy),
                    ));
                }
            }
        }
        Cmd::Bezout { .. } => {
            let jac = difference_jacobian(&ld.sys).map_err(err)?;
            results.push(value_entry("J", format_mv(&jac, &names_xy)));
        }
        Cmd::Jmap { functional, .. } => {
            let c = parse_mv(functional, &ld.sys.ctx_dx(), &names_d)
                .map_err(|e| format!("functional: {e}"))?;
            let out = j_map(&ld.sys, &c).map_err(err)?;
            results.push(value_entry("jmap", format_mv(&out, &names_x)));
        }
        Cmd::Jproduct { c1, c2, .. } => {
            let a = parse_mv(c1, &ld.sys.ctx_dx(), &names_d).map_err(|e| format!("c1: {e}"))?;
            let b = parse_mv(c2, &ld.sys.ctx_dx(), &names_d).map_err(|e| format!("c2: {e}"))?;
            let out = j_product(&ld.sys, &a, &b).map_err(err)?;
            results.push(value_entry("jproduct", format_mv(&out, &names_d)));
        }
        Cmd::Verify { .. } => {
            for c in verify_system(&ld.sys, ld.seed).map_err(err)? {
                if !c.pass {
                    code = 1;
                }
                results.push(check_entry(&c.name, c.pass, Some(c.detail)));
            }
        }
        Cmd::Homology { fdeg, .. } => {
            let (rank, stable) = homology_rank(&ld.sys, *fdeg, ld.degree).map_err(err)?;
            results.push(value_entry("rank", rank.to_string()));
            results.push(value_entry("stabilized", stable.to_string()));
        }
        Cmd::QuotientDim { .. } => {
            let (dim, stable) = quotient_dimension(&ld.sys, ld.degree);
            results.push(value_entry("dimension", dim.to_string()));
            results.push(value_entry("stabilized", stable.to_string()));
        }
        Cmd::Inverse { .. } => match find_unit_preimage(&ld.sys, ld.degree).map_err(err)? {
            None => {
                results.push(check_entry(
                    "unit-preimage",
                    false,
                    Some(format!("refusal: no solution at degree {}; raise --degree", ld.degree)),
                ));
                code = 1;
            }
            Some((e, t)) => {
                results.push(ResultEntry {
                    name: "e".into(),
                    status: "value".into(),
                    value: Some(format_mv(&e, &names_d)),
                    certificate: Some(format_mv(&t, &names_x)),
                });
                // the homotopy check needs (e, t) accurate a few degrees
                // past the report truncation
                let refined = find_unit_preimage(&ld.sys, ld.degree + 3).map_err(err)?;
                match refined {
                    None => {
                        results.push(check_entry(
                            "homotopy-inverse",
                            false,
                            Some(format!("refusal at refinement degree {}", ld.degree + 3)),
                        ));
                        code = 1;
                    }
                    Some((er, tr)) => {
                        let rep = homotopy_inverse_check(&ld.sys, &er, &tr, ld.degree, ld.seed, 3)
                            .map_err(err)?;
                        for item in 1..=4u8 {
                            let of_item: Vec<_> =
                                rep.results.iter().filter(|r| r.item == item).collect();
                            let pass = !of_item.is_empty() && of_item.iter().all(|r| r.ok);
                            if !pass {
                                code = 1;
                            }
                            results.push(check_entry(
                                &format!("homotopy-item-{item}"),
                                pass,
                                Some(format!("{} samples", of_item.len())),
                            ));
                        }
                    }
                }
            }
        },
    }

    let report = Report {
        command: name.into(),
        system: SystemEcho {
            vars: ld.vars.clone(),
            polynomials: ld.sys.f.iter().map(|p| format_mv(p, &names_x)).collect(),
        },
        options: OptionsEcho {
            degree: ld.degree,
            order: ld.sys.order.iter().map(|&i| i + 1).collect(),
            seed: ld.seed,
        },
        results,
        elapsed_ms: start.elapsed().as_millis(),
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    } else {
        println!("command: {}", report.command);
        println!(
            "system: vars {} | {}",
            report.system.vars.join(" "),
            report.system.polynomials.join(" ; ")
        );
        println!(
            "options: degree={} order={:?} seed={}",
            report.options.degree, report.options.order, report.options.seed
        );
        for r in &report.results {
            let mut line = format!("{}: {}", r.name, r.status);
            if let Some(v) = &r.value {
                line.push_str(&format!(" {v}"));
            }
            if let Some(c) = &r.certificate {
                line.push_str(&format!(" [certificate: {c}]"));
            }
            println!("{line}");
        }
        println!("elapsed_ms: {}", report.elapsed_ms);
    }
    Ok(code)
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(2);
        }
    }
}
