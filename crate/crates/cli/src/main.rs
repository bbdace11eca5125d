use std::fmt::Display;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use serde::Deserialize;
use serde_json::json;

use linext::hochschild;
use linext::io::{
    parse_constraint_json, parse_lexsum_json, parse_poset_json,
    parse_sp_expr, poset_to_json, PosetDoc,
};
use linext::lexsum::{
    self, factor_l, floor_theorem_l_minus, l_chain_substitution_with_limit, lex_sum,
    pascal_arrays, ChainSizesQuery,
};
use linext::linearization::{group_ring_l_with_limit, GroupRingElement, DEFAULT_LIMIT};
use linext::orderchrom::{order_chromatic_polynomial, verify_divisibility};
use linext::strengthen::{strengthen_felsner, strengthen_iterative, Method};
use linext::Poset;

const EXIT_INPUT: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "linext", about = "Exact poset linearization calculator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Abort enumerations past this many linearizations.
    #[arg(long, global = true)]
    limit: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Signed linearization count of a poset JSON file.
    Count { poset_file: String },
    /// Counting polynomial and divisibility report of a constraint JSON file.
    Chrom {
        constraint_file: String,
        /// Also check p-divisibility for this prime.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Closed-form counts of a series-parallel expression.
    Sp {
        expression: String,
        /// Re-derive the counts by enumeration and compare.
        #[arg(long)]
        check: bool,
    },
    /// The paired count/imbalance triangles for two-element antichain bases.
    Pascal {
        #[arg(default_value_t = 8)]
        rows: usize,
    },
    /// Sign-imbalance of a chain substitution via the floor rule.
    Floor {
        query_file: String,
        #[arg(long)]
        check: bool,
    },
    /// Strengthen a poset so the complement of a chain becomes a chain.
    Strengthen {
        poset_file: String,
        /// Chain elements, comma separated.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Iterative)]
        method: MethodArg,
    },
    /// Free-ring residual divisibility and coefficient cross-checks.
    Hochschild {
        #[arg(long)]
        prime: u64,
        /// Also bridge every stratum coefficient to a chromatic count.
        #[arg(long)]
        check: bool,
    },
    /// Factorized count of a lexicographic sum, against enumeration.
    Factor {
        spec_file: String,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Iterative,
    Felsner,
}

#[derive(Deserialize)]
struct FloorDoc {
    base: PosetDoc,
    sizes: Vec<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = cli.limit.unwrap_or(DEFAULT_LIMIT);
    if limit == 0 {
        eprintln!("--limit must be positive");
        return ExitCode::from(EXIT_INPUT);
    }
    let result = match &cli.command {
        Command::Count { poset_file } => cmd_count(poset_file, limit, cli.format),
        Command::Chrom {
            constraint_file,
            prime,
        } => cmd_chrom(constraint_file, *prime, cli.format),
        Command::Sp { expression, check } => cmd_sp(expression, *check, limit, cli.format),
        Command::Pascal { rows } => cmd_pascal(*rows, cli.format),
        Command::Floor { query_file, check } => cmd_floor(query_file, *check, limit, cli.format),
        Command::Strengthen {
            poset_file,
            chain,
            method,
        } => cmd_strengthen(poset_file, chain, *method, cli.format),
        Command::Hochschild { prime, check } => cmd_hochschild(*prime, *check, cli.format),
        Command::Factor { spec_file, check } => cmd_factor(spec_file, *check, limit, cli.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CmdError {
    code: u8,
    message: String,
}

fn input_err(e: impl Display) -> CmdError {
    CmdError {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

fn resource_err(e: impl Display) -> CmdError {
    CmdError {
        code: EXIT_RESOURCE,
        message: e.to_string(),
    }
}

fn mismatch_err(message: String) -> CmdError {
    CmdError {
        code: EXIT_MISMATCH,
        message,
    }
}

fn read_file(path: &str) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{path}: {e}")))
}

fn print_counts(l: &GroupRingElement, format: Format) {
    match format {
        Format::Text => println!(
            "L0={} L1={} L+={} L-={}",
            l.even,
            l.odd,
            l.l_plus(),
            l.l_minus()
        ),
        Format::Json => println!(
            "{}",
            json!({
                "l0": l.even.to_string(),
                "l1": l.odd.to_string(),
                "l_plus": l.l_plus().to_string(),
                "l_minus": l.l_minus().to_string(),
            })
        ),
    }
}

fn cmd_count(poset_file: &str, limit: u64, format: Format) -> Result<(), CmdError> {
    let poset = parse_poset_json(&read_file(poset_file)?).map_err(input_err)?;
    let l = group_ring_l_with_limit(&poset, limit).map_err(resource_err)?;
    print_counts(&l, format);
    Ok(())
}

fn polynomial_text(p: &linext::polynomials::UniPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut pieces = Vec::new();
    for (d, c) in p.coeffs().iter().enumerate().rev() {
        if num::Zero::is_zero(c) {
            continue;
        }
        let var = match d {
            0 => String::new(),
            1 => "n".to_string(),
            _ => format!("n^{d}"),
        };
        pieces.push(format!("{c}{}{var}", if var.is_empty() { "" } else { "·" }));
    }
    pieces.join(" + ")
}

fn cmd_chrom(constraint_file: &str, prime: Option<u64>, format: Format) -> Result<(), CmdError> {
    let system = parse_constraint_json(&read_file(constraint_file)?).map_err(input_err)?;
    let result = order_chromatic_polynomial(&system).map_err(resource_err)?;
    let report = prime
        .map(|p| {
            let ns: Vec<u64> = (0..4 * p).collect();
            verify_divisibility(&system, p, &ns).map_err(input_err)
        })
        .transpose()?;
    match format {
        Format::Text => {
            println!(
                "C(S,n) = {}  c={} bound={} primes={{{}}}",
                polynomial_text(&result.polynomial),
                result.component_count,
                result.bound,
                result
                    .denominator_prime_set
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            if let Some(r) = &report {
                for check in &r.checks {
                    println!(
                        "p={} n={} C={} divisible={}",
                        r.prime, check.n, check.count, check.divisible
                    );
                }
            }
        }
        Format::Json => {
            let mut doc = json!({
                "coefficients": result.polynomial.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "component_count": result.component_count,
                "bound": result.bound,
                "denominator_primes": result.denominator_prime_set,
            });
            if let Some(r) = &report {
                doc["divisibility"] = json!(r
                    .checks
                    .iter()
                    .map(|c| json!({
                        "n": c.n,
                        "count": c.count.to_string(),
                        "divisible": c.divisible
                    }))
                    .collect::<Vec<_>>());
            }
            println!("{doc}");
        }
    }
    if let Some(r) = &report {
        if !r.passed() {
            return Err(mismatch_err("divisibility check failed".into()));
        }
    }
    Ok(())
}

fn cmd_sp(expression: &str, check: bool, limit: u64, format: Format) -> Result<(), CmdError> {
    let expr = parse_sp_expr(expression).map_err(input_err)?;
    let closed = lexsum::sp_evaluate(&expr);
    print_counts(&closed, format);
    if check {
        let oracle = group_ring_l_with_limit(&expr.to_poset(), limit).map_err(resource_err)?;
        if oracle != closed {
            return Err(mismatch_err(format!(
                "closed form L+={} L-={} but enumeration found L+={} L-={}",
                closed.l_plus(),
                closed.l_minus(),
                oracle.l_plus(),
                oracle.l_minus()
            )));
        }
    }
    Ok(())
}

fn cmd_pascal(rows: usize, format: Format) -> Result<(), CmdError> {
    let (plus, minus) = pascal_arrays(rows);
    match format {
        Format::Text => {
            for (name, array) in [("L+", &plus), ("L-", &minus)] {
                println!("{name}:");
                for row in array {
                    let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    println!("  {}", line.join(" "));
                }
            }
        }
        Format::Json => {
            let render = |a: &Vec<Vec<BigInt>>| {
                a.iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            };
            println!(
                "{}",
                json!({"l_plus": render(&plus), "l_minus": render(&minus)})
            );
        }
    }
    Ok(())
}

fn cmd_floor(query_file: &str, check: bool, limit: u64, format: Format) -> Result<(), CmdError> {
    let doc: FloorDoc = serde_json::from_str(&read_file(query_file)?).map_err(input_err)?;
    let base = doc.base.to_poset().map_err(input_err)?;
    let query = ChainSizesQuery::new(base, doc.sizes).map_err(input_err)?;
    let floor = floor_theorem_l_minus(&query).map_err(input_err)?;
    let (value, source) = match &floor {
        Some(v) => (v.clone(), "floor-rule"),
        None => {
            let oracle = l_chain_substitution_with_limit(&query, limit).map_err(resource_err)?;
            (oracle.l_minus(), "enumeration")
        }
    };
    match format {
        Format::Text => println!("L-={value} ({source})"),
        Format::Json => println!(
            "{}",
            json!({"l_minus": value.to_string(), "source": source})
        ),
    }
    if check {
        let oracle = l_chain_substitution_with_limit(&query, limit).map_err(resource_err)?;
        if oracle.l_minus() != value {
            return Err(mismatch_err(format!(
                "floor rule gave {value} but enumeration found {}",
                oracle.l_minus()
            )));
        }
    }
    Ok(())
}

fn cmd_strengthen(
    poset_file: &str,
    chain: &[String],
    method: MethodArg,
    format: Format,
) -> Result<(), CmdError> {
    let poset = parse_poset_json(&read_file(poset_file)?).map_err(input_err)?;
    let indices = chain
        .iter()
        .filter(|l| !l.is_empty())
        .map(|l| poset.index_of(l))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_err)?;
    let result = match method {
        MethodArg::Iterative => strengthen_iterative(&poset, &indices),
        MethodArg::Felsner => strengthen_felsner(&poset, &indices),
    }
    .map_err(input_err)?;
    match format {
        Format::Text => {
            println!("{}", poset_to_json(&result.order));
            for (a, b) in &result.added {
                println!("added: {a} < {b}");
            }
        }
        Format::Json => {
            let doc: serde_json::Value =
                serde_json::from_str(&poset_to_json(&result.order)).expect("emitted JSON parses");
            println!(
                "{}",
                json!({
                    "method": match result.method {
                        Method::Iterative => "iterative",
                        Method::Felsner => "felsner",
                    },
                    "poset": doc,
                    "added": result.added,
                })
            );
        }
    }
    Ok(())
}

fn cmd_hochschild(prime: u64, check: bool, format: Format) -> Result<(), CmdError> {
    let report = hochschild::verify_lemma_gph(prime).map_err(resource_err)?;
    let mut cross = Vec::new();
    if check {
        let mut seen = std::collections::BTreeSet::new();
        for entry in &report.entries {
            let nonzero: Vec<u32> = entry
                .monomial
                .a_exponents
                .iter()
                .copied()
                .filter(|&m| m > 0)
                .collect();
            if seen.insert(nonzero.clone()) {
                cross.push(
                    hochschild::coefficient_cross_check(prime, &nonzero).map_err(input_err)?,
                );
            }
        }
    }
    match format {
        Format::Text => {
            if !report.p_is_prime {
                println!("warning: {prime} is not prime; divisibility may fail");
            }
            for e in &report.entries {
                println!("{} : {}", e.monomial, e.coefficient);
            }
            for c in &cross {
                println!(
                    "stratum {:?}: C(S,{})/{} = {} vs coefficient {}",
                    c.exponents, c.p, c.multiplicity_divisor, c.predicted, c.coefficient
                );
            }
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "p": report.p,
                    "p_is_prime": report.p_is_prime,
                    "entries": report.entries.iter().map(|e| json!({
                        "monomial": e.monomial.to_string(),
                        "coefficient": e.coefficient.to_string(),
                        "divisible": e.quotient.is_some(),
                    })).collect::<Vec<_>>(),
                    "cross_checks": cross.iter().map(|c| json!({
                        "exponents": c.exponents,
                        "predicted": c.predicted.to_string(),
                        "coefficient": c.coefficient.to_string(),
                        "matches": c.passed(),
                    })).collect::<Vec<_>>(),
                })
            );
        }
    }
    if report.p_is_prime && !report.passed() {
        return Err(mismatch_err(format!(
            "a residual coefficient is not divisible by {prime}"
        )));
    }
    if cross.iter().any(|c| !c.passed()) {
        return Err(mismatch_err("coefficient cross-check failed".into()));
    }
    Ok(())
}

fn cmd_factor(spec_file: &str, check: bool, limit: u64, format: Format) -> Result<(), CmdError> {
    let spec = parse_lexsum_json(&read_file(spec_file)?).map_err(input_err)?;
    let factored = factor_l(&spec).map_err(|e| match e {
        lexsum::LexSumError::Overflow(_) => resource_err(e),
        other => input_err(other),
    })?;
    print_counts(&factored, format);
    if check {
        let expanded: Poset = lex_sum(&spec).map_err(input_err)?;
        let oracle = group_ring_l_with_limit(&expanded, limit).map_err(resource_err)?;
        if oracle != factored {
            return Err(mismatch_err(format!(
                "factorization gave L+={} L-={} but enumeration found L+={} L-={}",
                factored.l_plus(),
                factored.l_minus(),
                oracle.l_plus(),
                oracle.l_minus()
            )));
        }
    }
    Ok(())
}
