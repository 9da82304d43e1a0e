//! The reference dataset: thirty configurations with stored eigenvalues and
//! lower bounds, transcribed verbatim at five decimals.

use serde::Serialize;

use crate::envelope::BoundRequest;
use crate::error::Result;
use crate::model::{kappa, AngularState, HalfInt, PotentialParams, Power, Tau};
use crate::radial::RadialProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    /// 1-based position in the table.
    pub index: usize,
    pub nu: u32,
    pub v: f64,
    pub b: f64,
    pub q: f64,
    pub d: u32,
    pub j: HalfInt,
    pub tau: Tau,
    pub kappa: HalfInt,
    pub energy_exact: f64,
    pub energy_lower: f64,
}

impl TableRow {
    pub fn state(&self) -> Result<AngularState> {
        AngularState::new(self.d, self.j, self.tau, self.nu)
    }

    pub fn params(&self) -> Result<PotentialParams> {
        PotentialParams::new(self.v, self.b, Power::finite(self.q)?, 1.0)
    }

    pub fn bound_request(&self) -> Result<BoundRequest> {
        BoundRequest::new(self.state()?, self.params()?)
    }

    pub fn problem(&self) -> Result<RadialProblem> {
        RadialProblem::new(self.state()?, self.params()?)
    }

    /// Stored `k_d` agrees with `tau (j + (d - 2)/2)`.
    pub fn kappa_consistent(&self) -> bool {
        self.state()
            .map(|s| kappa(&s) == self.kappa)
            .unwrap_or(false)
    }
}

// nu, v, b, q, d, 2j, tau, 2k_d, E, E^L
type Raw = (u32, f64, f64, f64, u32, i64, i64, i64, f64, f64);

const RAW: [Raw; 30] = [
    (0, 0.9, 2.0, 2.0, 2, 1, -1, -1, 0.76378, 0.69320),
    (0, 2.0, 5.0, 5.0, 2, 3, -1, -3, 0.72910, 0.68877),
    (0, 0.1, 0.1, 1.0, 3, 1, -1, -2, 0.99517, 0.99509),
    (0, 0.1, 0.1, 10.0, 3, 1, -1, -2, 0.99499, 0.99499),
    (0, 0.9, 0.5, 7.0, 5, 3, -1, -6, 0.95394, 0.95394),
    (0, 3.1, 3.0, 4.0, 10, 1, -1, -9, 0.75265, 0.74013),
    (1, 0.9, 2.0, 8.0, 2, 7, -1, -7, 0.97956, 0.97956),
    (1, 0.6, 7.0, 6.0, 3, 9, 1, 10, 0.99631, 0.99631),
    (1, 0.9, 0.2, 2.0, 3, 1, -1, -2, 0.88328, 0.85076),
    (1, 1.0, 0.5, 2.0, 6, 1, -1, -5, 0.97957, 0.95691),
    (1, 0.9, 0.9, 3.0, 8, 3, 1, 9, 0.99028, 0.99028),
    (1, 0.9, 0.1, 5.0, 9, 3, -1, -10, 0.98869, 0.98863),
    (2, 1.1, 0.5, 1.0, 2, 1, 1, 1, 0.95345, 0.75185),
    (2, 0.5, 8.0, 6.0, 2, 5, -1, -5, 0.99417, 0.99375),
    (2, 0.8, 1.5, 7.0, 2, 7, 1, 7, 0.99252, 0.99230),
    (2, 0.6, 7.0, 6.0, 3, 9, -1, -10, 0.99632, 0.99631),
    (2, 2.0, 9.0, 1.0, 4, 3, -1, -5, 0.96327, 0.95513),
    (2, 0.9, 0.1, 5.0, 6, 1, 1, 5, 0.98605, 0.98605),
    (2, 1.0, 8.0, 3.0, 9, 3, 1, 10, 0.99217, 0.99209),
    (3, 0.7, 5.0, 4.0, 3, 1, 1, 2, 0.99100, 0.98916),
    (3, 0.9, 3.0, 8.0, 6, 5, -1, -9, 0.99271, 0.99270),
    (4, 0.7, 5.0, 4.0, 3, 1, -1, -2, 0.99218, 0.98916),
    (4, 0.9, 0.4, 4.0, 2, 3, 1, 3, 0.98965, 0.98963),
    (4, 0.4, 6.0, 2.0, 5, 3, -1, -6, 0.99842, 0.99836),
    (5, 1.1, 10.0, 2.0, 4, 1, -1, -3, 0.99013, 0.98526),
    (6, 0.7, 0.3, 6.0, 3, 1, -1, -2, 0.99685, 0.99461),
    (7, 0.7, 4.0, 2.0, 7, 3, -1, -8, 0.99799, 0.99769),
    (8, 1.1, 9.0, 1.0, 2, 5, 1, 5, 0.99655, 0.99589),
    (9, 4.0, 3.0, 7.0, 3, 1, -1, -2, 0.99702, 0.99655),
    (10, 0.7, 0.5, 5.0, 3, 1, -1, -2, 0.99889, 0.99787),
];

pub fn embedded_table() -> Vec<TableRow> {
    RAW.iter()
        .enumerate()
        .map(|(i, &(nu, v, b, q, d, j2, tau, k2, e, el))| TableRow {
            index: i + 1,
            nu,
            v,
            b,
            q,
            d,
            j: HalfInt::from_doubled(j2),
            tau: Tau::from_sign(tau).expect("stored tau is +-1"),
            kappa: HalfInt::from_doubled(k2),
            energy_exact: e,
            energy_lower: el,
        })
        .collect()
}

/// Looks up a row by its 1-based index.
pub fn table_row(index: usize) -> Option<TableRow> {
    embedded_table().into_iter().nth(index.checked_sub(1)?)
}
