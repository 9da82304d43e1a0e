use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use softcore_dirac::envelope::{optimize_bound, BoundRequest};
use softcore_dirac::model::{kappa, small_component_nodes, Power};
use softcore_dirac::potential::SoftcoreShape;
use softcore_dirac::radial::{solve_eigenvalue, RadialProblem, SolverConfig};
use softcore_dirac::workbench::output::{
    comparison_csv, comparison_json, round10, samples_csv, sig10, tangent_csv,
};
use softcore_dirac::workbench::{
    compare_rows, embedded_table, log_grid, monotonicity_scan, table_row, tangent_family_data,
    Axis, ComparisonReport, Suite,
};
use softcore_dirac::{Error, Result};

use crate::{exit, Format, LevelArgs};

fn plain(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.5}")
    } else {
        format!("{x}")
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

pub fn bound(level: &LevelArgs, format: Format) -> Result<u8> {
    let request = BoundRequest::new(level.state()?, level.params()?)?;
    let result = optimize_bound(&request)?;
    match format {
        Format::Plain => {
            println!("E^L      {}", plain(result.energy_lower));
            println!("t*       {}", plain(result.contact));
            println!("u*       {}", plain(result.tangent_coupling));
            println!(
                "boundary {}",
                if result.boundary_optimal { "yes" } else { "no" }
            );
        }
        Format::Csv => {
            println!("energy_lower,contact,tangent_coupling,boundary_optimal");
            println!(
                "{},{},{},{}",
                sig10(result.energy_lower),
                sig10(result.contact),
                sig10(result.tangent_coupling),
                result.boundary_optimal
            );
        }
        Format::Json => print_json(&json!({
            "energy_lower": round10(result.energy_lower),
            "contact": round10(result.contact),
            "tangent_coupling": round10(result.tangent_coupling),
            "boundary_optimal": result.boundary_optimal,
        })),
    }
    Ok(exit::OK)
}

pub fn solve(
    level: &LevelArgs,
    tol: Option<f64>,
    dump: Option<&Path>,
    format: Format,
) -> Result<u8> {
    let problem = RadialProblem::new(level.state()?, level.params()?)?;
    let mut config = SolverConfig::default();
    if let Some(tol) = tol {
        config.energy_tol = tol;
    }
    let solution = solve_eigenvalue(&problem, &config)?;
    if let Some(path) = dump {
        write_file(path, &samples_csv(&solution.samples)?)?;
    }
    let expected_small = small_component_nodes(&problem.state);
    match format {
        Format::Plain => {
            println!("E        {}", plain(solution.energy));
            println!("k_d      {}", kappa(&problem.state));
            println!("nu1      {}", solution.nodes_large);
            println!("nu2      {}", solution.nodes_small);
            println!("residual {:.5e}", solution.mismatch);
            println!("norm     {}", plain(solution.norm));
        }
        Format::Csv => {
            println!("energy,nodes_large,nodes_small,residual,norm");
            println!(
                "{},{},{},{},{}",
                sig10(solution.energy),
                solution.nodes_large,
                solution.nodes_small,
                sig10(solution.mismatch),
                sig10(solution.norm)
            );
        }
        Format::Json => print_json(&json!({
            "energy": round10(solution.energy),
            "nodes_large": solution.nodes_large,
            "nodes_small": solution.nodes_small,
            "residual": round10(solution.mismatch),
            "norm": round10(solution.norm),
        })),
    }
    let nodes_ok =
        solution.nodes_large == problem.state.nu() && solution.nodes_small == expected_small;
    Ok(if nodes_ok { exit::OK } else { exit::FAILED })
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn table_plain(indices: &[usize], reports: &[Result<ComparisonReport>]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>3}  {:>8} {:>8} {:>9}  {:>8} {:>8} {:>9}  {:<5} {:<5} {:<5} {:<5}",
        "row",
        "E",
        "E calc",
        "delta",
        "E^L",
        "E^L calc",
        "delta",
        "lower",
        "exact",
        "order",
        "nodes"
    )
    .unwrap();
    for (index, report) in indices.iter().zip(reports) {
        match report {
            Ok(r) => {
                let exact = match (r.pass_exact, r.within_target) {
                    (true, true) => "ok",
                    (true, false) => "gate",
                    (false, _) => "FAIL",
                };
                writeln!(
                    out,
                    "{:>3}  {:>8} {:>8} {:>+9.2e}  {:>8} {:>8} {:>+9.2e}  {:<5} {:<5} {:<5} {:<5}",
                    index,
                    plain(r.row.energy_exact),
                    plain(r.computed_exact),
                    r.delta_exact,
                    plain(r.row.energy_lower),
                    plain(r.computed_lower),
                    r.delta_lower,
                    flag(r.pass_lower),
                    exact,
                    flag(r.pass_order),
                    flag(r.pass_nodes),
                )
                .unwrap();
            }
            Err(e) => writeln!(out, "{index:>3}  error: {e}").unwrap(),
        }
    }
    out
}

pub fn table(rows: &[usize], format: Format, parallel: Option<usize>) -> Result<u8> {
    let all = embedded_table();
    let selected = if rows.is_empty() {
        all
    } else {
        rows.iter()
            .map(|&i| {
                table_row(i).ok_or_else(|| {
                    Error::InvalidParameter(format!("row {i} is outside 1..={}", all.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    let indices: Vec<usize> = selected.iter().map(|r| r.index).collect();
    let reports = compare_rows(&selected, &SolverConfig::default(), parallel)?;
    match format {
        Format::Plain => print!("{}", table_plain(&indices, &reports)),
        Format::Csv => print!("{}", comparison_csv(&indices, &reports)?),
        Format::Json => print_json(&comparison_json(&indices, &reports)),
    }
    if reports.iter().any(|r| r.is_err()) {
        return Ok(exit::INTEGRATION);
    }
    let all_pass = reports.iter().flatten().all(|r| r.passed());
    Ok(if all_pass { exit::OK } else { exit::FAILED })
}

#[allow(clippy::too_many_arguments)]
pub fn tangent(
    v: f64,
    b: f64,
    q: Power,
    contacts: &[f64],
    rmin: f64,
    rmax: f64,
    points: usize,
    out: Option<&Path>,
) -> Result<u8> {
    let shape = SoftcoreShape::new(b, q)?;
    let grid = log_grid(rmin, rmax, points)?;
    let data = tangent_family_data(&shape, v, contacts, &grid)?;
    let csv = tangent_csv(&data)?;
    match out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(exit::OK)
}

pub fn scan(level: &LevelArgs, axis: Axis, grid: &[f64], format: Format) -> Result<u8> {
    let request = BoundRequest::new(level.state()?, level.params()?)?;
    let report = monotonicity_scan(&request, axis, grid, &SolverConfig::default())?;
    let points = report.grid.iter().zip(&report.bounds).zip(&report.energies);
    match format {
        Format::Plain => {
            println!("{:>10}  {:>8}  {:>8}", axis.to_string(), "E^L", "E");
            for ((x, lower), e) in points {
                println!("{:>10}  {:>8}  {:>8}", plain(*x), plain(*lower), plain(*e));
            }
            println!(
                "monotone {} (smallest step {:.3e})",
                if report.passed() { "yes" } else { "NO" },
                report.worst_margin
            );
        }
        Format::Csv => {
            println!("{axis},energy_lower,energy");
            for ((x, lower), e) in points {
                println!("{},{},{}", sig10(*x), sig10(*lower), sig10(*e));
            }
        }
        Format::Json => print_json(&json!({
            "axis": axis.to_string(),
            "points": points
                .map(|((x, lower), e)| json!({
                    "value": round10(*x),
                    "energy_lower": round10(*lower),
                    "energy": round10(*e),
                }))
                .collect::<Vec<_>>(),
            "worst_margin": round10(report.worst_margin),
            "energy_monotone": report.energy_monotone,
            "bound_monotone": report.bound_monotone,
        })),
    }
    Ok(if report.passed() {
        exit::OK
    } else {
        exit::FAILED
    })
}

pub fn check(suite: &str) -> Result<u8> {
    let suites = if suite.trim() == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let mut all_pass = true;
    for suite in suites {
        let report = suite.run()?;
        all_pass &= report.passed;
        println!(
            "[{}] {}: worst {:.3e} (threshold {:.1e})",
            if report.passed { "PASS" } else { "FAIL" },
            report.suite,
            report.worst,
            report.threshold
        );
        for line in &report.details {
            println!("    {line}");
        }
    }
    Ok(if all_pass { exit::OK } else { exit::FAILED })
}
