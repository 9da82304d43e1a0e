//! Tangent-family datasets: the potential `v f_q(r)` together with the
//! shifted Coulomb potentials `v (a(t)(-1/r) + c(t))` touching it at chosen
//! contact radii.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{tangent_at, SoftcoreShape, TangentLine};

/// Slack allowed in the minorant check.
pub const MINORANT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentRow {
    pub r: f64,
    pub potential: f64,
    pub tangents: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentDataset {
    pub v: f64,
    pub lines: Vec<TangentLine>,
    pub rows: Vec<TangentRow>,
}

impl TangentDataset {
    /// Largest `tangent - potential` over the grid; non-positive for a
    /// minorant family.
    pub fn max_excess(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| row.tangents.iter().map(move |t| t - row.potential))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_minorant(&self) -> bool {
        self.rows.iter().all(|row| row.tangents.is_empty()) || self.max_excess() <= MINORANT_SLACK
    }

    pub fn header(&self) -> Vec<String> {
        let mut cols = vec!["r".to_string(), "potential".to_string()];
        cols.extend(self.lines.iter().map(|l| format!("tangent_t={}", l.t)));
        cols
    }
}

/// `n` points spaced evenly in `ln r` over `[r_min, r_max]`.
pub fn log_grid(r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max >= r_min && r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "grid needs 0 < r_min <= r_max, got [{r_min}, {r_max}]"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "grid needs at least one point".into(),
        ));
    }
    // A degenerate interval is a single point whatever `n` says.
    if n == 1 || r_min == r_max {
        return Ok(vec![r_min]);
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => r_min,
            i if i == n - 1 => r_max,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

pub fn tangent_family_data(
    shape: &SoftcoreShape,
    v: f64,
    contacts: &[f64],
    r_grid: &[f64],
) -> Result<TangentDataset> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "v must be positive, got {v}"
        )));
    }
    if r_grid.is_empty() {
        return Err(Error::InvalidParameter("radial grid is empty".into()));
    }
    if let Some(&r) = r_grid.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::out_of_domain("r", r, "(0, inf)"));
    }
    let lines = contacts
        .iter()
        .map(|&t| tangent_at(shape, t))
        .collect::<Result<Vec<_>>>()?;
    let rows = r_grid
        .iter()
        .map(|&r| TangentRow {
            r,
            potential: v * shape.value(r),
            tangents: lines.iter().map(|l| v * l.value(r)).collect(),
        })
        .collect();
    Ok(TangentDataset { v, lines, rows })
}
