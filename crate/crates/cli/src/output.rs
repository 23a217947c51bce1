//! Result rows, checks, and their CSV and JSON renderings.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

/// One measured quantity at one sweep point. `config` is the full parameter
/// set of the run as compact JSON; `point` holds the sweep coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub seed: u64,
    pub config: String,
    pub point: Vec<(String, String)>,
    pub metric: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub wall_time: f64,
}

/// A pass/fail statement about the rows of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub checks: Vec<Check>,
    pub assumption_violated: bool,
}

impl RunOutput {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Rows with the given metric whose point contains every `(key, value)`.
    pub fn values(&self, metric: &str, filter: &[(&str, &str)]) -> Vec<&ResultRow> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric)
            .filter(|r| {
                filter
                    .iter()
                    .all(|(k, v)| r.point.iter().any(|(pk, pv)| pk == k && pv == v))
            })
            .collect()
    }
}

/// Builds rows for one experiment run and times each sweep point.
pub struct RowSink {
    experiment: String,
    seed: u64,
    config: String,
    started: Instant,
    pub out: RunOutput,
}

impl RowSink {
    pub fn new(experiment: &str, seed: u64, params: &impl Serialize) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            config: serde_json::to_string(params).expect("parameters serialize"),
            started: Instant::now(),
            out: RunOutput::default(),
        }
    }

    /// Restarts the wall-time clock for the next sweep point.
    pub fn start_point(&mut self) {
        self.started = Instant::now();
    }

    pub fn push(&mut self, point: &[(&str, String)], metric: &str, value: f64, std_error: Option<f64>) {
        self.out.rows.push(ResultRow {
            experiment: self.experiment.clone(),
            seed: self.seed,
            config: self.config.clone(),
            point: point.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            metric: metric.to_string(),
            value,
            std_error,
            wall_time: self.started.elapsed().as_secs_f64(),
        });
    }
}

/// Writes rows as CSV. Point columns are the union of all point keys in
/// first-seen order; wall time is always the last column.
pub fn write_csv<W: Write>(rows: &[ResultRow], writer: W) -> csv::Result<()> {
    let mut keys: Vec<String> = Vec::new();
    for r in rows {
        for (k, _) in &r.point {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["experiment".to_string(), "seed".to_string(), "config".to_string()];
    header.extend(keys.iter().cloned());
    header.extend(["metric", "value", "std_error", "wall_time_s"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.experiment.clone(), r.seed.to_string(), r.config.clone()];
        for k in &keys {
            rec.push(
                r.point
                    .iter()
                    .find(|(pk, _)| pk == k)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default(),
            );
        }
        rec.push(r.metric.clone());
        rec.push(format_f64(r.value));
        rec.push(r.std_error.map(format_f64).unwrap_or_default());
        rec.push(format!("{:.6}", r.wall_time));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    experiment: &'a str,
    seed: u64,
    rows: usize,
    assumption_violated: bool,
    all_checks_passed: bool,
    checks: &'a [Check],
}

pub fn summary_json(experiment: &str, seed: u64, out: &RunOutput) -> String {
    serde_json::to_string_pretty(&Summary {
        experiment,
        seed,
        rows: out.rows.len(),
        assumption_violated: out.assumption_violated,
        all_checks_passed: out.all_passed(),
        checks: &out.checks,
    })
    .expect("summary serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_union_columns_and_wall_time_last() {
        let mut sink = RowSink::new("demo", 3, &serde_json::json!({"a": 1}));
        sink.push(&[("n", "1".into())], "x", 0.5, None);
        sink.push(&[("n", "2".into()), ("m", "0".into())], "x", 0.25, Some(0.01));
        let mut buf = Vec::new();
        write_csv(&sink.out.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment,seed,config,n,m,metric,value,std_error,wall_time_s"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("demo,3,\"{\"\"a\"\":1}\",1,,x,5e-1,,"), "{first}");
    }

    #[test]
    fn value_lookup_filters_points() {
        let mut sink = RowSink::new("demo", 0, &serde_json::json!({}));
        sink.push(&[("n", "1".into())], "x", 1.0, None);
        sink.push(&[("n", "2".into())], "x", 2.0, None);
        sink.push(&[("n", "2".into())], "y", 3.0, None);
        let hits = sink.out.values("x", &[("n", "2")]);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].value, 2.0);
    }
}
