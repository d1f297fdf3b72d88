use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::campaign::ResultRecord;
use crate::error::{config_error, CliResult};

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    pub n: usize,
    pub replicas: usize,
    pub estimate: f64,
    /// `estimate - 2 stderr` and `estimate + 2 stderr`.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// `|estimate - previous estimate|`, empty on the first row.
    pub difference: Option<f64>,
}

/// Rows sorted by `n`; all records must come from one experiment.
pub fn convergence_report(records: &[ResultRecord]) -> CliResult<Vec<ReportRow>> {
    if let Some(first) = records.first() {
        if let Some(other) = records.iter().find(|r| r.experiment != first.experiment) {
            return Err(config_error(format!(
                "records mix experiments `{}` and `{}`",
                first.experiment, other.experiment
            )));
        }
    }
    let mut sorted: Vec<&ResultRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let mut rows: Vec<ReportRow> = Vec::with_capacity(sorted.len());
    for r in sorted {
        let difference = rows.last().map(|prev| (r.estimate - prev.estimate).abs());
        rows.push(ReportRow {
            experiment: r.experiment.clone(),
            n: r.n,
            replicas: r.replicas,
            estimate: r.estimate,
            lower: r.stderr.map(|s| r.estimate - 2.0 * s),
            upper: r.stderr.map(|s| r.estimate + 2.0 * s),
            difference,
        });
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize, W: Write>(items: &[T], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for item in items {
        w.serialize(item)?;
    }
    w.flush()?;
    Ok(())
}

/// Fields of a record that fit in one CSV row.
#[derive(Serialize)]
struct FlatRecord<'a> {
    experiment: &'a str,
    n: usize,
    replicas: usize,
    estimate: f64,
    stderr: Option<f64>,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    exact: bool,
    seed: u64,
    version: &'a str,
    wall_time_ms: Option<u64>,
}

impl<'a> From<&'a ResultRecord> for FlatRecord<'a> {
    fn from(r: &'a ResultRecord) -> Self {
        FlatRecord {
            experiment: &r.experiment,
            n: r.n,
            replicas: r.replicas,
            estimate: r.estimate,
            stderr: r.stderr,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            exact: r.exact,
            seed: r.seed,
            version: &r.version,
            wall_time_ms: r.wall_time_ms,
        }
    }
}

/// CSV writer that emits each record as soon as it arrives.
pub struct RecordCsv<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordCsv<W> {
    pub fn new(out: W) -> Self {
        RecordCsv {
            inner: csv::Writer::from_writer(out),
        }
    }

    pub fn push(&mut self, record: &ResultRecord) -> CliResult<()> {
        self.inner.serialize(FlatRecord::from(record))?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn records_csv(records: &[ResultRecord]) -> CliResult<String> {
    let mut buf = Vec::new();
    {
        let mut w = RecordCsv::new(&mut buf);
        for r in records {
            w.push(r)?;
        }
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.4}"))
}

/// Fixed-width text table.
pub fn format_report(rows: &[ReportRow]) -> String {
    let mut out = format!(
        "{:>8} {:>9} {:>9} {:>21} {:>9}\n",
        "n", "replicas", "estimate", "±2se", "diff"
    );
    for r in rows {
        let band = match (r.lower, r.upper) {
            (Some(lo), Some(hi)) => format!("[{lo:.4}, {hi:.4}]"),
            _ => String::new(),
        };
        writeln!(
            out,
            "{:>8} {:>9} {:>9.4} {:>21} {:>9}",
            r.n,
            r.replicas,
            r.estimate,
            band,
            cell(r.difference)
        )
        .unwrap();
    }
    out
}
