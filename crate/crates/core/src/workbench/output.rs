//! CSV and JSON renderings. Numbers carry 10 significant digits so that
//! output is byte-stable across runs.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::radial::Sample;

use super::compare::ComparisonReport;
use super::tangent::TangentDataset;

pub const SIGNIFICANT_DIGITS: usize = 10;

/// `x` with 10 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// `x` rounded to 10 significant digits, for JSON numbers.
pub fn round10(x: f64) -> Value {
    if x.is_finite() {
        json!(sig10(x).parse::<f64>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("csv output: {e}"))
}

fn write_csv(header: &[String], records: Vec<Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).map_err(csv_error)?;
    for record in records {
        writer.write_record(&record).map_err(csv_error)?;
    }
    let bytes = writer.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

pub const COMPARISON_COLUMNS: [&str; 22] = [
    "row",
    "nu",
    "v",
    "b",
    "q",
    "d",
    "j",
    "tau",
    "kappa",
    "stored_exact",
    "computed_exact",
    "delta_exact",
    "stored_lower",
    "computed_lower",
    "delta_lower",
    "boundary_optimal",
    "pass_lower",
    "pass_exact",
    "within_target",
    "pass_order",
    "pass_nodes",
    "error",
];

fn report_record(index: usize, report: &Result<ComparisonReport>) -> Vec<String> {
    match report {
        Ok(r) => {
            let row = &r.row;
            vec![
                row.index.to_string(),
                row.nu.to_string(),
                sig10(row.v),
                sig10(row.b),
                sig10(row.q),
                row.d.to_string(),
                row.j.to_string(),
                row.tau.sign().to_string(),
                row.kappa.to_string(),
                sig10(row.energy_exact),
                sig10(r.computed_exact),
                sig10(r.delta_exact),
                sig10(row.energy_lower),
                sig10(r.computed_lower),
                sig10(r.delta_lower),
                r.boundary_optimal.to_string(),
                r.pass_lower.to_string(),
                r.pass_exact.to_string(),
                r.within_target.to_string(),
                r.pass_order.to_string(),
                r.pass_nodes.to_string(),
                String::new(),
            ]
        }
        Err(e) => {
            let mut record = vec![String::new(); COMPARISON_COLUMNS.len()];
            record[0] = index.to_string();
            record[COMPARISON_COLUMNS.len() - 1] = e.to_string();
            record
        }
    }
}

/// One record per report. `indices` labels failed rows, whose error message
/// fills the last column.
pub fn comparison_csv(indices: &[usize], reports: &[Result<ComparisonReport>]) -> Result<String> {
    let header: Vec<String> = COMPARISON_COLUMNS.iter().map(|s| s.to_string()).collect();
    let records = indices
        .iter()
        .zip(reports)
        .map(|(&i, r)| report_record(i, r))
        .collect();
    write_csv(&header, records)
}

pub fn comparison_json(indices: &[usize], reports: &[Result<ComparisonReport>]) -> Value {
    let rows: Vec<Value> = indices
        .iter()
        .zip(reports)
        .map(|(&index, report)| match report {
            Ok(r) => {
                let row = &r.row;
                json!({
                    "row": row.index,
                    "inputs": {
                        "nu": row.nu,
                        "v": round10(row.v),
                        "b": round10(row.b),
                        "q": round10(row.q),
                        "d": row.d,
                        "j": row.j.to_string(),
                        "tau": row.tau.sign(),
                        "kappa": row.kappa.to_string(),
                    },
                    "stored": {
                        "exact": round10(row.energy_exact),
                        "lower": round10(row.energy_lower),
                    },
                    "computed": {
                        "exact": round10(r.computed_exact),
                        "lower": round10(r.computed_lower),
                        "nodes_large": r.nodes_large,
                        "nodes_small": r.nodes_small,
                        "boundary_optimal": r.boundary_optimal,
                    },
                    "delta": {
                        "exact": round10(r.delta_exact),
                        "lower": round10(r.delta_lower),
                    },
                    "flags": {
                        "pass_lower": r.pass_lower,
                        "pass_exact": r.pass_exact,
                        "within_target": r.within_target,
                        "pass_order": r.pass_order,
                        "pass_nodes": r.pass_nodes,
                    },
                    "mesh_study": r.mesh_study.map(|m| json!({
                        "energy": round10(m.energy),
                        "energy_refined": round10(m.energy_refined),
                        "change": round10(m.change),
                    })),
                })
            }
            Err(e) => json!({ "row": index, "error": e.to_string() }),
        })
        .collect();
    let passed = reports
        .iter()
        .all(|r| r.as_ref().map(|r| r.passed()).unwrap_or(false));
    json!({ "rows": rows, "all_passed": passed })
}

pub fn tangent_csv(data: &TangentDataset) -> Result<String> {
    let records = data
        .rows
        .iter()
        .map(|row| {
            let mut rec = vec![sig10(row.r), sig10(row.potential)];
            rec.extend(row.tangents.iter().map(|&t| sig10(t)));
            rec
        })
        .collect();
    write_csv(&data.header(), records)
}

pub fn samples_csv(samples: &[Sample]) -> Result<String> {
    let header = ["r", "psi1", "psi2"].map(String::from);
    let records = samples
        .iter()
        .map(|s| vec![sig10(s.r), sig10(s.psi1), sig10(s.psi2)])
        .collect();
    write_csv(&header, records)
}
