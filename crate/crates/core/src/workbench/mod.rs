//! Reproduction layer: the embedded reference table, comparison reports,
//! tangent-family datasets, batch scans and the property suites.

pub mod checks;
pub mod compare;
pub mod output;
pub mod scans;
pub mod table;
pub mod tangent;

pub use checks::{Suite, SuiteReport};
pub use compare::{
    compare_row, compare_row_with, compare_rows, row_bound, ComparisonReport, EXACT_GATE,
    EXACT_TARGET, LOWER_TOL, ORDER_SLACK,
};
pub use scans::{monotonicity_scan, scaling_check, Axis, MonotonicityReport, ScalingReport};
pub use table::{embedded_table, table_row, TableRow};
pub use tangent::{log_grid, tangent_family_data, TangentDataset};
