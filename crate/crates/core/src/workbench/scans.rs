//! Batch scans: the dilation law and monotonicity in each potential
//! parameter.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::envelope::{self, BoundRequest};
use crate::error::{Error, Result};
use crate::model::{scale_parameters, AngularState, PotentialParams, Power};
use crate::radial::{self, RadialProblem, SolverConfig};

use super::table::TableRow;

/// Margin by which consecutive eigenvalues must differ on a monotone scan.
pub const MONOTONE_MARGIN: f64 = 1e-8;
/// Ties allowed between consecutive bounds, which saturate at `D(v)`.
pub const BOUND_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingEntry {
    pub row: usize,
    pub delta: f64,
    pub energy: f64,
    /// `(1/delta) E(v, b/delta, q, delta m)`.
    pub energy_scaled: f64,
    pub defect_exact: f64,
    pub bound: f64,
    pub bound_scaled: f64,
    pub defect_lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub entries: Vec<ScalingEntry>,
    pub max_defect_exact: f64,
    pub max_defect_lower: f64,
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs()
    }
}

/// `(E^L, E)` for one configuration.
fn solve(
    state: AngularState,
    params: PotentialParams,
    config: &SolverConfig,
) -> Result<(f64, f64)> {
    let bound = envelope::optimize_bound(&BoundRequest::new(state, params)?)?.energy_lower;
    let energy = radial::solve_eigenvalue(&RadialProblem::new(state, params)?, config)?.energy;
    Ok((bound, energy))
}

pub fn scaling_check(
    rows: &[TableRow],
    deltas: &[f64],
    config: &SolverConfig,
) -> Result<ScalingReport> {
    if rows.is_empty() || deltas.is_empty() {
        return Err(Error::InvalidParameter(
            "scaling check needs at least one row and one factor".into(),
        ));
    }
    let mut entries = Vec::with_capacity(rows.len() * deltas.len());
    for row in rows {
        let state = row.state()?;
        let params = row.params()?;
        let (bound, energy) = solve(state, params, config)?;
        for &delta in deltas {
            let (scaled, back) = scale_parameters(&params, delta)?;
            let (bound_s, energy_s) = solve(state, scaled, config)?;
            let energy_scaled = back * energy_s;
            let bound_scaled = back * bound_s;
            entries.push(ScalingEntry {
                row: row.index,
                delta,
                energy,
                energy_scaled,
                defect_exact: relative(energy, energy_scaled),
                bound,
                bound_scaled,
                defect_lower: relative(bound, bound_scaled),
            });
        }
    }
    let max = |f: fn(&ScalingEntry) -> f64| entries.iter().map(f).fold(0.0, f64::max);
    Ok(ScalingReport {
        max_defect_exact: max(|e| e.defect_exact),
        max_defect_lower: max(|e| e.defect_lower),
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    V,
    B,
    Q,
}

impl Axis {
    /// `-1` where the spectrum falls as the parameter grows, `+1` where it
    /// rises.
    pub fn expected_direction(self) -> f64 {
        match self {
            Axis::V | Axis::Q => -1.0,
            Axis::B => 1.0,
        }
    }

    fn apply(self, params: &PotentialParams, x: f64) -> Result<PotentialParams> {
        let mut p = *params;
        match self {
            Axis::V => p.v = x,
            Axis::B => p.b = x,
            Axis::Q => p.q = Power::finite(x)?,
        }
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::V => "v",
            Axis::B => "b",
            Axis::Q => "q",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "v" => Ok(Axis::V),
            "b" => Ok(Axis::B),
            "q" => Ok(Axis::Q),
            other => Err(Error::InvalidParameter(format!(
                "unknown axis '{other}', expected v, b or q"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub bounds: Vec<f64>,
    pub energies: Vec<f64>,
    /// Smallest step of `E` in the expected direction.
    pub worst_margin: f64,
    pub energy_monotone: bool,
    pub bound_monotone: bool,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.energy_monotone && self.bound_monotone
    }
}

pub fn monotonicity_scan(
    base: &BoundRequest,
    axis: Axis,
    grid: &[f64],
    config: &SolverConfig,
) -> Result<MonotonicityReport> {
    if grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "scan grid needs at least two values".into(),
        ));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "scan grid must be strictly ascending".into(),
        ));
    }
    let mut bounds = Vec::with_capacity(grid.len());
    let mut energies = Vec::with_capacity(grid.len());
    for &x in grid {
        let params = axis.apply(&base.params, x)?;
        let (bound, energy) = solve(base.state, params, config)?;
        bounds.push(bound);
        energies.push(energy);
    }
    let dir = axis.expected_direction();
    let steps = |xs: &[f64]| {
        xs.windows(2)
            .map(|w| dir * (w[1] - w[0]))
            .collect::<Vec<_>>()
    };
    let worst_margin = steps(&energies).into_iter().fold(f64::INFINITY, f64::min);
    let bound_monotone = steps(&bounds).into_iter().all(|s| s >= -BOUND_TIE);
    Ok(MonotonicityReport {
        axis,
        grid: grid.to_vec(),
        bounds,
        energies,
        worst_margin,
        energy_monotone: worst_margin > MONOTONE_MARGIN,
        bound_monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::table::table_row;

    #[test]
    fn identity_dilation_is_exact() {
        let row = table_row(1).unwrap();
        let report = scaling_check(&[row], &[1.0], &SolverConfig::default()).unwrap();
        assert_eq!(report.max_defect_exact, 0.0);
        assert_eq!(report.max_defect_lower, 0.0);
    }

    #[test]
    fn row1_dilation() {
        let row = table_row(1).unwrap();
        let report = scaling_check(&[row], &[2.0], &SolverConfig::default()).unwrap();
        assert!(report.max_defect_exact <= 1e-6, "{report:?}");
        assert!(report.max_defect_lower <= 1e-10, "{report:?}");
    }

    #[test]
    fn row1_monotone_in_each_axis() {
        let base = table_row(1).unwrap().bound_request().unwrap();
        let cfg = SolverConfig::default();
        for (axis, grid) in [
            (Axis::V, vec![0.5, 0.7, 0.9]),
            (Axis::B, vec![1.0, 2.0, 4.0]),
            (Axis::Q, vec![1.0, 2.0, 4.0]),
        ] {
            let report = monotonicity_scan(&base, axis, &grid, &cfg).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let base = table_row(1).unwrap().bound_request().unwrap();
        let cfg = SolverConfig::default();
        assert!(monotonicity_scan(&base, Axis::V, &[0.5], &cfg).is_err());
        assert!(monotonicity_scan(&base, Axis::V, &[0.7, 0.5], &cfg).is_err());
        assert!(monotonicity_scan(&base, Axis::Q, &[0.5, 1.0], &cfg).is_err());
        assert!(scaling_check(&[], &[2.0], &cfg).is_err());
        assert_eq!("q".parse::<Axis>().unwrap(), Axis::Q);
        assert!("m".parse::<Axis>().is_err());
    }
}
