//! Row-by-row comparison of computed bounds and eigenvalues against the
//! stored table.

use rayon::prelude::*;
use serde::Serialize;

use crate::envelope;
use crate::error::{Error, Result};
use crate::model::small_component_nodes;
use crate::radial::{self, MeshStudy, SolverConfig};

use super::table::TableRow;

/// Band on `|computed E^L - stored E^L|`.
pub const LOWER_TOL: f64 = 2e-5;
/// Hard gate on `|computed E - stored E|`.
pub const EXACT_GATE: f64 = 5e-4;
/// Target band on `|computed E - stored E|`; rows outside it carry a mesh
/// study.
pub const EXACT_TARGET: f64 = 5e-5;
/// Slack in `E^L <= E`.
pub const ORDER_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub row: TableRow,
    pub computed_lower: f64,
    pub computed_exact: f64,
    pub delta_lower: f64,
    pub delta_exact: f64,
    pub boundary_optimal: bool,
    pub nodes_large: u32,
    pub nodes_small: u32,
    pub pass_lower: bool,
    pub pass_exact: bool,
    pub within_target: bool,
    pub pass_order: bool,
    pub pass_nodes: bool,
    pub mesh_study: Option<MeshStudy>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.pass_lower && self.pass_exact && self.pass_order && self.pass_nodes
    }
}

fn with_row(index: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Row {
        index,
        source: Box::new(e),
    }
}

/// Lower bound for one row, without solving the radial problem.
pub fn row_bound(row: &TableRow) -> Result<envelope::BoundResult> {
    let attach = with_row(row.index);
    let request = row.bound_request().map_err(&attach)?;
    envelope::optimize_bound(&request).map_err(attach)
}

pub fn compare_row(row: &TableRow) -> Result<ComparisonReport> {
    compare_row_with(row, &SolverConfig::default())
}

pub fn compare_row_with(row: &TableRow, config: &SolverConfig) -> Result<ComparisonReport> {
    let attach = with_row(row.index);
    let bound = row_bound(row)?;
    let problem = row.problem().map_err(&attach)?;
    let solution = radial::solve_eigenvalue(&problem, config).map_err(&attach)?;

    let delta_lower = bound.energy_lower - row.energy_lower;
    let delta_exact = solution.energy - row.energy_exact;
    let within_target = delta_exact.abs() <= EXACT_TARGET;
    let mesh_study = if within_target {
        None
    } else {
        Some(radial::mesh_convergence(&problem, config).map_err(&attach)?)
    };
    Ok(ComparisonReport {
        row: *row,
        computed_lower: bound.energy_lower,
        computed_exact: solution.energy,
        delta_lower,
        delta_exact,
        boundary_optimal: bound.boundary_optimal,
        nodes_large: solution.nodes_large,
        nodes_small: solution.nodes_small,
        pass_lower: delta_lower.abs() <= LOWER_TOL,
        pass_exact: delta_exact.abs() <= EXACT_GATE,
        within_target,
        pass_order: bound.energy_lower <= solution.energy + ORDER_SLACK,
        pass_nodes: solution.nodes_large == row.nu
            && solution.nodes_small == small_component_nodes(&problem.state),
        mesh_study,
    })
}

/// Compares every row, in row order. `threads = Some(n)` fans the rows over
/// `n` workers; results keep their input order either way.
pub fn compare_rows(
    rows: &[TableRow],
    config: &SolverConfig,
    threads: Option<usize>,
) -> Result<Vec<Result<ComparisonReport>>> {
    match threads {
        None | Some(0) | Some(1) => Ok(rows.iter().map(|r| compare_row_with(r, config)).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(|| {
                rows.par_iter()
                    .map(|r| compare_row_with(r, config))
                    .collect()
            }))
        }
    }
}
