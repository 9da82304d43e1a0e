//! Property suites shared by the command-line `check` command and the
//! acceptance tests. Each suite reports its worst defect against a fixed
//! threshold.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coulomb::{self, CoulombLevel};
use crate::envelope::{self, BoundRequest};
use crate::error::{Error, Result};
use crate::model::{principal_n, AngularState, HalfInt, Power, Tau};
use crate::potential::{self, SoftcoreShape};
use crate::radial::SolverConfig;

use super::compare::LOWER_TOL;
use super::scans::{monotonicity_scan, scaling_check, Axis};
use super::table::{embedded_table, table_row, TableRow};

/// Rows sampled by the dilation suite.
pub const SCALING_ROWS: [usize; 5] = [1, 3, 9, 14, 20];
pub const SCALING_DELTAS: [f64; 2] = [0.5, 2.0];
pub const SCALING_TOL_EXACT: f64 = 1e-6;
pub const SCALING_TOL_LOWER: f64 = 1e-10;
/// Row pairs whose bounds coincide through the Coulomb degeneracy, with
/// the stored common bound.
pub const DEGENERATE_PAIRS: [(usize, usize, f64); 2] = [(20, 22, 0.98916), (8, 16, 0.99631)];
pub const DEGENERACY_TOL: f64 = 1e-12;
pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const ORACLE_POINTS: usize = 100_000;
pub const ORACLE_TOL: f64 = 1e-7;
/// `|E^L - sqrt(0.99)|` allowed on the boundary-optimal row.
pub const BOUNDARY_TOL: f64 = 5e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Scaling,
    Monotone,
    Degeneracy,
    Derivatives,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Scaling,
        Suite::Monotone,
        Suite::Degeneracy,
        Suite::Derivatives,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Scaling => "scaling",
            Suite::Monotone => "monotone",
            Suite::Degeneracy => "degeneracy",
            Suite::Derivatives => "derivatives",
            Suite::Oracle => "oracle",
        }
    }

    pub fn run(self) -> Result<SuiteReport> {
        match self {
            Suite::Scaling => scaling_suite(),
            Suite::Monotone => monotone_suite(),
            Suite::Degeneracy => degeneracy_suite(),
            Suite::Derivatives => derivative_suite(),
            Suite::Oracle => oracle_suite(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    /// Worst defect, in the units of `threshold`.
    pub worst: f64,
    pub threshold: f64,
    pub details: Vec<String>,
}

fn rows(indices: &[usize]) -> Vec<TableRow> {
    indices
        .iter()
        .map(|&i| table_row(i).expect("suite rows exist"))
        .collect()
}

pub fn scaling_suite() -> Result<SuiteReport> {
    let report = scaling_check(
        &rows(&SCALING_ROWS),
        &SCALING_DELTAS,
        &SolverConfig::default(),
    )?;
    let details = report
        .entries
        .iter()
        .map(|e| {
            format!(
                "row {:>2} delta {:<3}: eigenvalue defect {:.2e}, bound defect {:.2e}",
                e.row, e.delta, e.defect_exact, e.defect_lower
            )
        })
        .collect();
    Ok(SuiteReport {
        suite: Suite::Scaling,
        passed: report.max_defect_exact <= SCALING_TOL_EXACT
            && report.max_defect_lower <= SCALING_TOL_LOWER,
        worst: report.max_defect_exact,
        threshold: SCALING_TOL_EXACT,
        details,
    })
}

/// Grids on row-1 parameters: coarse sweeps and the single steps
/// `v + 0.05`, `q + 1`, `b + 0.2`.
pub fn monotone_grids() -> Vec<(Axis, Vec<f64>)> {
    vec![
        (Axis::V, vec![0.5, 0.7, 0.9]),
        (Axis::B, vec![1.0, 2.0, 4.0]),
        (Axis::Q, vec![1.0, 2.0, 4.0]),
        (Axis::V, vec![0.9, 0.95]),
        (Axis::Q, vec![2.0, 3.0]),
        (Axis::B, vec![2.0, 2.2]),
    ]
}

pub fn monotone_suite() -> Result<SuiteReport> {
    let base = table_row(1).expect("row 1").bound_request()?;
    let config = SolverConfig::default();
    let mut passed = true;
    let mut worst = f64::INFINITY;
    let mut details = Vec::new();
    for (axis, grid) in monotone_grids() {
        let report = monotonicity_scan(&base, axis, &grid, &config)?;
        passed &= report.passed();
        worst = worst.min(report.worst_margin);
        details.push(format!(
            "{axis} over {grid:?}: E = {:?}, smallest step {:.3e}{}",
            report.energies,
            report.worst_margin,
            if report.passed() { "" } else { " VIOLATION" }
        ));
    }
    Ok(SuiteReport {
        suite: Suite::Monotone,
        passed,
        worst,
        threshold: super::scans::MONOTONE_MARGIN,
        details,
    })
}

pub fn degeneracy_suite() -> Result<SuiteReport> {
    let mut passed = true;
    let mut worst = 0.0_f64;
    let mut details = Vec::new();
    for (i, j, stored) in DEGENERATE_PAIRS {
        let a = super::compare::row_bound(&table_row(i).expect("row"))?.energy_lower;
        let b = super::compare::row_bound(&table_row(j).expect("row"))?.energy_lower;
        let rel = (a - b).abs() / a.abs();
        worst = worst.max(rel);
        let near = (a - stored).abs() <= LOWER_TOL && (b - stored).abs() <= LOWER_TOL;
        passed &= rel <= DEGENERACY_TOL && near;
        details.push(format!(
            "rows {i}/{j}: bounds {a:.12} / {b:.12}, relative gap {rel:.2e}, stored {stored}"
        ));
    }
    Ok(SuiteReport {
        suite: Suite::Degeneracy,
        passed,
        worst,
        threshold: DEGENERACY_TOL,
        details,
    })
}

/// Worst relative gap between `D'` and a central difference of `D`.
pub fn coulomb_derivative_defect() -> Result<f64> {
    let mut worst = 0.0_f64;
    for dk in [-10, -5, -2, -1, 1, 3, 8] {
        for nu in 0..5 {
            let level = CoulombLevel::new(HalfInt::from_doubled(dk), nu, 1.0)?;
            let k = coulomb::coupling_sup(&level);
            for i in 1..10 {
                let u = k * i as f64 / 10.0;
                let fd = central_difference(|x| coulomb::energy(&level, x), u, 1e-3 * k)?;
                worst = worst.max(resolved_rel_err(coulomb::energy_derivative(&level, u)?, fd));
            }
        }
    }
    Ok(worst)
}

/// Five-point central difference of `f` at `x`, with the rounding floor
/// below which differences are not resolved: stencil weights summing to
/// 3/2, each value good to a few ulps.
fn central_difference(f: impl Fn(f64) -> Result<f64>, x: f64, step: f64) -> Result<(f64, f64)> {
    let d = (8.0 * (f(x + step)? - f(x - step)?) - (f(x + 2.0 * step)? - f(x - 2.0 * step)?))
        / (12.0 * step);
    let floor = 16.0 * f64::EPSILON * f(x)?.abs() / step;
    Ok((d, floor))
}

fn resolved_rel_err(exact: f64, (approx, floor): (f64, f64)) -> f64 {
    ((exact - approx).abs() - floor).max(0.0) / exact.abs()
}

/// Worst relative gap of `g'` and `g''` against central differences of `g`
/// and `g'`, net of rounding.
pub fn transform_derivative_defect() -> Result<f64> {
    let mut worst = 0.0_f64;
    for q in [1.0, 2.0, 3.5, 6.0, 10.0] {
        for b in [0.1, 1.0, 7.0] {
            let shape = SoftcoreShape::new(b, Power::finite(q)?)?;
            for i in 0..=20 {
                let t = b * 10f64.powf(-1.0 + i as f64 / 10.0);
                let h = -1.0 / t;
                let step = 1e-3 * h.abs();
                let fd1 = central_difference(|x| potential::g_eval(&shape, x), h, step)?;
                let fd2 = central_difference(|x| potential::g_prime(&shape, x), h, step)?;
                worst = worst.max(resolved_rel_err(potential::g_prime(&shape, h)?, fd1));
                worst = worst.max(resolved_rel_err(potential::g_second(&shape, h)?, fd2));
            }
        }
    }
    Ok(worst)
}

/// Whether `f_q(r)` decreases monotonically to the cutoff limit as `q` grows.
pub fn cutoff_limit_is_monotone() -> Result<bool> {
    let qs = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    for b in [0.5, 2.0] {
        let cutoff = SoftcoreShape::new(b, Power::Infinite)?;
        for i in 0..=40 {
            let r = b * 10f64.powf(-2.0 + i as f64 / 10.0);
            let mut prev = f64::INFINITY;
            for q in qs {
                let f = SoftcoreShape::new(b, Power::finite(q)?)?.value(r);
                if !(f <= prev && f >= cutoff.value(r)) {
                    return Ok(false);
                }
                prev = f;
            }
            // The gap closes: within 2% of the limit by q = 64.
            if (prev - cutoff.value(r)).abs() > 0.02 * cutoff.value(r).abs() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn coulomb_states() -> Result<Vec<AngularState>> {
    let mut states = Vec::new();
    for d in 2..=6u32 {
        for j2 in [1, 3, 5] {
            for tau in [Tau::Minus, Tau::Plus] {
                for nu in 0..4 {
                    states.push(AngularState::new(d, HalfInt::from_doubled(j2), tau, nu)?);
                }
            }
        }
    }
    Ok(states)
}

/// Rydberg-limit defects for `u <= 0.05`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RydbergDefect {
    /// Worst `|D(u) - m(1 - u^2/(2 n^2))| / (u^4 m)` over states with
    /// `n >= 1`; at most 1 when the Coulomb bracket is right.
    pub worst_ratio: f64,
    /// The same ratio for the `n = 1/2` state (`d = 2`, `k_d = -1/2`,
    /// `nu = 0`), whose exact `u^4` coefficient is 2.
    pub half_n_ratio: f64,
    /// Worst `|D - ryd - fs| / u^6` over all states, with the fine-structure
    /// term `fs = -u^4 (n/|k_d| - 3/4) / (2 n^4)`.
    pub fine_structure_ratio: f64,
}

impl RydbergDefect {
    pub fn passed(&self) -> bool {
        self.worst_ratio <= 1.0
            && (self.half_n_ratio - 2.0).abs() <= 0.02
            && self.fine_structure_ratio <= 5.0
    }
}

pub fn rydberg_defect() -> Result<RydbergDefect> {
    let mut out = RydbergDefect {
        worst_ratio: 0.0,
        half_n_ratio: 0.0,
        fine_structure_ratio: 0.0,
    };
    for state in coulomb_states()? {
        let level = CoulombLevel::from_state(&state, 1.0)?;
        let k = coulomb::coupling_sup(&level);
        let n = principal_n(&state).value();
        for u in [0.001, 0.01, 0.03, 0.05] {
            if u >= k {
                continue;
            }
            let e = coulomb::energy(&level, u)?;
            let ryd = 1.0 - u * u / (2.0 * n * n);
            let ratio = (e - ryd).abs() / u.powi(4);
            if n < 1.0 {
                out.half_n_ratio = out.half_n_ratio.max(ratio);
            } else {
                out.worst_ratio = out.worst_ratio.max(ratio);
            }
            // u^6 = 1e-18 sits below double precision at u = 0.001.
            if u >= 0.01 {
                let fs = -u.powi(4) * (n / k - 0.75) / (2.0 * n.powi(4));
                out.fine_structure_ratio = out
                    .fine_structure_ratio
                    .max((e - ryd - fs).abs() / u.powi(6));
            }
        }
    }
    Ok(out)
}

pub fn derivative_suite() -> Result<SuiteReport> {
    let d = coulomb_derivative_defect()?;
    let g = transform_derivative_defect()?;
    let monotone = cutoff_limit_is_monotone()?;
    let ryd = rydberg_defect()?;
    Ok(SuiteReport {
        suite: Suite::Derivatives,
        passed: d <= DERIVATIVE_TOL && g <= DERIVATIVE_TOL && monotone && ryd.passed(),
        worst: d.max(g),
        threshold: DERIVATIVE_TOL,
        details: vec![
            format!("D' vs central differences: worst relative gap {d:.2e}"),
            format!("g', g'' vs central differences: worst relative gap {g:.2e}"),
            format!("f_q -> cutoff monotone in q: {monotone}"),
            format!(
                "Rydberg limit: worst |D - ryd| / u^4 = {:.3} (n >= 1), {:.3} (n = 1/2, exact 2); \
                 fine-structure remainder / u^6 = {:.3}",
                ryd.worst_ratio, ryd.half_n_ratio, ryd.fine_structure_ratio
            ),
        ],
    })
}

/// Best value of the bound on a uniform grid of `points` contacts in
/// `s = t/(1+t)`, together with the pure Coulomb candidate.
pub fn grid_scan_bound(request: &BoundRequest, points: usize) -> f64 {
    let v = request.params.v;
    let level = request.level();
    let mut best = if v < request.coupling_limit() {
        coulomb::energy(&level, v).unwrap_or(f64::NEG_INFINITY)
    } else {
        f64::NEG_INFINITY
    };
    for i in 1..=points {
        let s = i as f64 / (points + 1) as f64;
        if let Ok(value) = envelope::bound_objective(request, s / (1.0 - s)) {
            best = best.max(value);
        }
    }
    best
}

pub fn oracle_suite() -> Result<SuiteReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut details = Vec::new();
    for row in embedded_table() {
        let request = row.bound_request()?;
        let optimum = envelope::optimize_bound(&request)?.energy_lower;
        let grid = grid_scan_bound(&request, ORACLE_POINTS);
        let loss = (grid - optimum) / request.params.m;
        worst = worst.max(loss);
        if loss > ORACLE_TOL {
            details.push(format!(
                "row {}: grid beats optimizer by {loss:.3e}",
                row.index
            ));
        }
    }
    details.push(format!(
        "largest grid advantage over optimizer: {worst:.3e}"
    ));
    let row4 = envelope::optimize_bound(&table_row(4).expect("row 4").bound_request()?)?;
    let gap = (row4.energy_lower - 0.99_f64.sqrt()).abs();
    details.push(format!(
        "row 4: boundary optimal {}, |E^L - sqrt(0.99)| = {gap:.2e}",
        row4.boundary_optimal
    ));
    Ok(SuiteReport {
        suite: Suite::Oracle,
        passed: worst <= ORACLE_TOL && row4.boundary_optimal && gap <= BOUNDARY_TOL,
        worst,
        threshold: ORACLE_TOL,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        for suite in [Suite::Degeneracy, Suite::Derivatives] {
            let report = suite.run().unwrap();
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn grid_scan_never_beats_optimizer_on_row1() {
        let request = table_row(1).unwrap().bound_request().unwrap();
        let best = envelope::optimize_bound(&request).unwrap().energy_lower;
        assert!(grid_scan_bound(&request, 2000) <= best + ORACLE_TOL);
    }
}
