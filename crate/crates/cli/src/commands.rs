//! The `formulate`, `bench`, `verify` and `circuit` subcommands.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use cwc_gas_core::bounds::{k_opt, DEFAULT_K_TOLERANCE};
use cwc_gas_core::circuit::{compile_state_prep, gate_counts, grover_iterate, GateCounts};
use cwc_gas_core::code::{bits_to_mask, decode_solution, validate_code, BitMatrix, CodeParams};
use cwc_gas_core::engine::{build_landscape, QueryDomain};
use cwc_gas_core::qubo::{BoundsReport, QuboProblem, Variant};
use serde::Serialize;

use crate::experiment::{bench, BenchSettings, BenchSummary, Instance, Strategy};
use crate::formats::{
    gate_list_record, read_assignment, read_matrix, read_qubo, write_cdf_csv, write_curve_csv,
    write_distribution_csv, write_json, write_matrix, write_qubo,
};
use crate::{CliError, Result};

pub const GOLDEN_QUBO: &str = include_str!("../../../golden/q_7_3_4_7.txt");
pub const GOLDEN_PPRIME: &str = include_str!("../../../golden/pprime_7_3_4_7.txt");
pub const GOLDEN_X_OPT: &str = include_str!("../../../golden/x_opt_7_3_4_7.txt");

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct KoptSummary {
    pub k_opt: f64,
    pub expected_cost: f64,
    pub interval: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulationBounds {
    pub params: CodeParams,
    pub degenerate: bool,
    /// `floor(n / w)` when `d = 2w`.
    pub max_codewords: Option<u32>,
    pub q1: Option<u32>,
    pub l: Option<u32>,
    pub e_prime: Option<BoundsReport>,
    pub e_double_prime: Option<BoundsReport>,
    pub t_lower: Option<u64>,
    pub k_opt_upper: Option<u64>,
    pub k_opt: Option<KoptSummary>,
}

/// Writes `pprime.txt`, `qubo_e_prime.txt`, `qubo_e_double_prime.txt` and
/// `bounds.json`. Degenerate parameters produce only `bounds.json`.
pub fn formulate(params: CodeParams, out: &Path) -> Result<FormulationBounds> {
    ensure_dir(out)?;
    let report = if params.is_degenerate() {
        FormulationBounds {
            params,
            degenerate: true,
            max_codewords: Some(params.degenerate_max_codewords()),
            q1: None,
            l: None,
            e_prime: None,
            e_double_prime: None,
            t_lower: None,
            k_opt_upper: None,
            k_opt: None,
        }
    } else {
        let inst = Instance::new(params)?;
        fs::write(out.join("pprime.txt"), write_matrix(&inst.pprime))?;
        fs::write(out.join("qubo_e_prime.txt"), write_qubo(&inst.e_prime))?;
        fs::write(out.join("qubo_e_double_prime.txt"), write_qubo(&inst.e_double_prime))?;
        let k = inst.t_lower.and_then(|t| k_opt(t, inst.q1(), DEFAULT_K_TOLERANCE).ok()).map(|r| KoptSummary {
            k_opt: r.k_opt,
            expected_cost: r.cost,
            interval: r.interval,
        });
        FormulationBounds {
            params,
            degenerate: false,
            max_codewords: None,
            q1: Some(inst.q1()),
            l: Some(inst.e_prime.l),
            e_prime: Some(inst.bounds_prime.clone()),
            e_double_prime: Some(inst.bounds_double_prime.clone()),
            t_lower: inst.t_lower,
            k_opt_upper: inst.k_opt_upper,
            k_opt: k,
        }
    };
    write_json(create(out, "bounds.json")?, &report)?;
    Ok(report)
}

/// Runs the benchmark and writes `summary.json`, `curve_<strategy>_<domain>.csv`,
/// `cdf_<strategy>_<domain>.csv` and, when `dump_traces > 0`, the first
/// traces of each GAS strategy as `traces_<strategy>.json`.
pub fn run_bench(params: CodeParams, settings: &BenchSettings, out: &Path, dump_traces: usize) -> Result<BenchSummary> {
    let inst = Instance::new(params)?;
    let report = bench(&inst, settings)?;
    ensure_dir(out)?;
    for run in &report.runs {
        let name = run.strategy().as_str();
        let domains: &[QueryDomain] = if run.strategy().has_quantum_domain() {
            &[QueryDomain::Classical, QueryDomain::Quantum]
        } else {
            &[QueryDomain::Classical]
        };
        for &domain in domains {
            let d = domain.as_str();
            write_curve_csv(create(out, &format!("curve_{name}_{d}.csv"))?, &run.curve(domain))?;
            write_cdf_csv(create(out, &format!("cdf_{name}_{d}.csv"))?, &run.cdf(domain))?;
        }
        if dump_traces > 0 && !run.traces.is_empty() {
            let n = dump_traces.min(run.traces.len());
            write_json(create(out, &format!("traces_{name}.json"))?, &run.traces[..n])?;
        }
    }
    write_json(create(out, "summary.json")?, &report.summary)?;
    Ok(report.summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// First difference between two QUBOs, scanning metadata then cells row by row.
pub fn qubo_mismatch(generated: &QuboProblem, golden: &QuboProblem) -> Option<String> {
    if generated.q1 != golden.q1 {
        return Some(format!("q1: expected {}, got {}", golden.q1, generated.q1));
    }
    for r in 0..golden.q1 {
        for c in 0..golden.q1 {
            let (want, got) = (golden.get(r, c), generated.get(r, c));
            if want != got {
                return Some(format!("Q[{r}][{c}]: expected {want}, got {got}"));
            }
        }
    }
    if generated.constant != golden.constant {
        return Some(format!("constant: expected {}, got {}", golden.constant, generated.constant));
    }
    if generated.q2 != golden.q2 {
        return Some(format!("q2: expected {}, got {}", golden.q2, generated.q2));
    }
    None
}

fn check(name: &'static str, result: std::result::Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

/// Checks the (7, 3, 4, 7) reference instance against the golden files.
pub fn verify(max_q1: u32) -> Result<VerifyReport> {
    let params = CodeParams::new(7, 3, 4, 7)?;
    let inst = Instance::new(params)?;
    verify_with(&inst.pprime, &inst.e_double_prime, max_q1)
}

/// [`verify`] on a caller-supplied matrix and objective.
pub fn verify_with(pprime: &BitMatrix, qubo: &QuboProblem, max_q1: u32) -> Result<VerifyReport> {
    let params = CodeParams::new(7, 3, 4, 7)?;
    let golden_q = read_qubo(GOLDEN_QUBO)?;
    let golden_p = read_matrix(GOLDEN_PPRIME)?;
    let x_opt = read_assignment(GOLDEN_X_OPT)?;
    let mut checks = Vec::new();

    checks.push(check(
        "reduced-matrix",
        if pprime == &golden_p {
            Ok(format!("{} rows match", golden_p.len()))
        } else {
            let row = (0..golden_p.len().max(pprime.len()))
                .find(|&i| golden_p.rows().get(i) != pprime.rows().get(i))
                .unwrap_or(0);
            Err(format!("row {row} differs"))
        },
    ));
    checks.push(check(
        "qubo-matrix",
        match qubo_mismatch(qubo, &golden_q) {
            None => Ok(format!("{0}x{0} matrix, constant {1}, q2 {2}", golden_q.q1, golden_q.constant, golden_q.q2)),
            Some(m) => Err(m),
        },
    ));

    let landscape = build_landscape(qubo, max_q1)?;
    checks.push(check(
        "landscape-minimum",
        match landscape.min_value() {
            15 => Ok("minimum over all assignments is 15".into()),
            v => Err(format!("minimum is {v}, expected 15")),
        },
    ));

    let x_opt_check = if x_opt.len() != qubo.q1 {
        Err(format!("x_opt has {} entries, expected {}", x_opt.len(), qubo.q1))
    } else {
        let value = qubo.evaluate_mask(bits_to_mask(&x_opt));
        let code = decode_solution(&x_opt, pprime, &params)?;
        let report = validate_code(&code, &params);
        match (value, report.first_violation) {
            (15, None) => Ok(format!("value 15, decodes to a code with minimum distance {:?}", report.min_distance)),
            (15, Some(v)) => Err(format!("decoded code is invalid: {v}")),
            (v, _) => Err(format!("x_opt evaluates to {v}, expected 15")),
        }
    };
    checks.push(check("x-opt", x_opt_check));

    let t = landscape.count_below(16);
    checks.push(check(
        "solution-count",
        if t >= 6 { Ok(format!("{t} assignments below 16 (lower bound 6)")) } else { Err(format!("only {t} assignments below 16")) },
    ));
    Ok(VerifyReport { checks })
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitReport {
    pub q1: u32,
    pub q2: u32,
    pub threshold: i64,
    pub formula: GateCounts,
    pub compiled: GateCounts,
    pub distribution_file: Option<PathBuf>,
}

/// Compiles `A_y` and writes `gates.json` and `gate_counts.json`; with
/// `rotations`, also simulates and writes `distribution.csv`.
pub fn circuit(qubo: &QuboProblem, threshold: i64, rotations: Option<u32>, out: &Path) -> Result<CircuitReport> {
    ensure_dir(out)?;
    let list = compile_state_prep(qubo, threshold)?;
    write_json(create(out, "gates.json")?, &gate_list_record(&list))?;
    let mut report = CircuitReport {
        q1: list.q1,
        q2: list.q2,
        threshold,
        formula: gate_counts(u64::from(list.q1), u64::from(list.q2)),
        compiled: list.tally(),
        distribution_file: None,
    };
    if let Some(l) = rotations {
        let dist = grover_iterate(qubo, threshold, l)?;
        let path = out.join("distribution.csv");
        write_distribution_csv(BufWriter::new(File::create(&path)?), qubo.q1, &dist)?;
        report.distribution_file = Some(path);
    }
    write_json(create(out, "gate_counts.json")?, &report)?;
    Ok(report)
}

/// QUBO for the circuit command: a file if given, otherwise the formulation.
pub fn circuit_qubo(params: Option<CodeParams>, variant: Variant, file: Option<&Path>) -> Result<(QuboProblem, i64)> {
    if let Some(path) = file {
        let qubo = read_qubo(&fs::read_to_string(path)?)?;
        return Ok((qubo, 0));
    }
    let params = params.ok_or_else(|| CliError::Params("either --qubo or --n/--w/--d/--m is required".into()))?;
    let inst = Instance::new(params)?;
    let y0 = inst.bounds_double_prime.y0;
    Ok((inst.qubo(variant).clone(), y0))
}

pub fn strategies_for(choice: Option<Strategy>) -> Vec<Strategy> {
    match choice {
        Some(s) => vec![s],
        None => vec![Strategy::GasConventional, Strategy::GasProposed, Strategy::ClassicalExhaustive],
    }
}
