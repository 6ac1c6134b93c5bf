use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_csv, write_file};
use crate::error::{Error, Result};
use crate::harness::{SummaryRow, SweepResult, SweepRow};
use crate::types::{MetricName, MetricReport};

pub const SWEEP_CSV_HEADER: &str = "experiment_id,mode_count,alpha,repetition,seed,metric_name,value";
const SUMMARY_CSV_HEADER: &str = "mode_count,alpha,metric_name,count,mean,std,min,max";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug)]
pub enum Report<'a> {
    Metric(&'a MetricReport),
    Sweep(&'a SweepResult),
}

impl<'a> From<&'a MetricReport> for Report<'a> {
    fn from(r: &'a MetricReport) -> Self {
        Report::Metric(r)
    }
}

impl<'a> From<&'a SweepResult> for Report<'a> {
    fn from(r: &'a SweepResult) -> Self {
        Report::Sweep(r)
    }
}

/// Writes a report.
///
/// * metric, JSON: `{"metric_name", "value", "aux"}` with aux keys sorted.
/// * metric, CSV: a `key,value` table (`metric_name`, `value`, then `aux.<key>`).
/// * sweep, JSON: `{"rows": [...], "config": {...}}`.
/// * sweep, CSV: one row per cell under [`SWEEP_CSV_HEADER`]; optional fields
///   are left empty.
pub fn save_report<'a>(report: impl Into<Report<'a>>, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match (report.into(), format) {
        (Report::Metric(m), ReportFormat::Json) => {
            m.validate()?;
            to_json(m)?
        }
        (Report::Metric(m), ReportFormat::Csv) => {
            m.validate()?;
            let mut out = csv_writer();
            write_record(&mut out, ["key", "value"])?;
            write_record(&mut out, ["metric_name", m.metric_name.as_str()])?;
            write_record(&mut out, ["value", &m.value.to_string()])?;
            for (k, v) in &m.aux {
                let rendered = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                write_record(&mut out, [format!("aux.{k}").as_str(), &rendered])?;
            }
            finish(out)?
        }
        (Report::Sweep(s), ReportFormat::Json) => {
            s.validate()?;
            to_json(s)?
        }
        (Report::Sweep(s), ReportFormat::Csv) => {
            s.validate()?;
            sweep_csv(s.rows())?
        }
    };
    write_file(path, text.as_bytes())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn write_record<I, T>(w: &mut csv::Writer<Vec<u8>>, record: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(record).map_err(|e| Error::Numerical(e.to_string()))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut out = csv_writer();
    write_record(&mut out, SWEEP_CSV_HEADER.split(','))?;
    for r in rows {
        write_record(
            &mut out,
            [
                r.experiment_id.clone(),
                opt(r.mode_count),
                opt(r.alpha),
                r.repetition.to_string(),
                r.seed.to_string(),
                r.metric_name.to_string(),
                r.value.to_string(),
            ],
        )?;
    }
    finish(out)
}

pub fn save_summary(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let mut out = csv_writer();
    write_record(&mut out, SUMMARY_CSV_HEADER.split(','))?;
    for r in rows {
        write_record(
            &mut out,
            [
                opt(r.mode_count),
                opt(r.alpha),
                r.metric_name.to_string(),
                r.count.to_string(),
                r.mean.to_string(),
                r.std.to_string(),
                r.min.to_string(),
                r.max.to_string(),
            ],
        )?;
    }
    write_file(path, finish(out)?.as_bytes())
}

pub fn load_metric_report(path: &Path) -> Result<MetricReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: MetricReport = serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    report.validate().map_err(|e| Error::format(path, e.to_string()))?;
    Ok(report)
}

pub fn load_sweep_json(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let result: SweepResult = serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    result.validate().map_err(|e| Error::format(path, e.to_string()))?;
    Ok(result)
}

/// Reads the rows of a sweep CSV written by [`save_report`].
pub fn load_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let records = read_csv(path)?;
    let Some((header, rows)) = records.split_first() else {
        return Err(Error::format(path, "empty sweep table"));
    };
    if header.join(",") != SWEEP_CSV_HEADER {
        return Err(Error::format(path, format!("expected header {SWEEP_CSV_HEADER:?}")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, rec)| {
            let bad = |what: &str| Error::format(path, format!("row {i}: bad {what}"));
            if rec.len() != 7 {
                return Err(bad("field count"));
            }
            let opt_usize = |s: &str| -> Result<Option<usize>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad("mode_count"))
                }
            };
            let opt_f64 = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad("alpha"))
                }
            };
            Ok(SweepRow {
                experiment_id: rec[0].clone(),
                mode_count: opt_usize(&rec[1])?,
                alpha: opt_f64(&rec[2])?,
                repetition: rec[3].parse().map_err(|_| bad("repetition"))?,
                seed: rec[4].parse().map_err(|_| bad("seed"))?,
                metric_name: MetricName::parse(&rec[5]).ok_or_else(|| bad("metric_name"))?,
                value: rec[6].parse().map_err(|_| bad("value"))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_sweep() -> SweepResult {
        let mut rows = Vec::new();
        for k in 1..=7 {
            for rep in 0..10 {
                for (m, metric) in [MetricName::DdMean, MetricName::Fid].into_iter().enumerate() {
                    rows.push(SweepRow {
                        experiment_id: "noise-ring".into(),
                        mode_count: Some(k),
                        alpha: Some(0.1),
                        repetition: rep,
                        seed: (k * 100 + rep) as u64,
                        metric_name: metric,
                        value: (k as f64).sqrt() / (rep as f64 + 1.0) + m as f64 / 3.0,
                    });
                }
            }
        }
        SweepResult::new(rows, serde_json::json!({"master_seed": 1})).unwrap()
    }

    #[test]
    fn metric_json_contains_name() {
        let r = MetricReport::new(MetricName::DdMean, 0.125)
            .unwrap()
            .with_aux("n_used", 4);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        save_report(&r, &p, ReportFormat::Json).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains("\"metric_name\": \"dd_mean\""), "{text}");
        assert_eq!(load_metric_report(&p).unwrap(), r);

        save_report(&r, &p, ReportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "key,value\nmetric_name,dd_mean\nvalue,0.125\naux.n_used,4\n");
    }

    #[test]
    fn sweep_csv_row_count_and_round_trip() {
        let s = sample_sweep();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        save_report(&s, &p, ReportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 1 + 140);
        assert!(text.starts_with(SWEEP_CSV_HEADER));
        assert_eq!(load_sweep_csv(&p).unwrap(), s.rows());

        let pj = dir.path().join("s.json");
        save_report(&s, &pj, ReportFormat::Json).unwrap();
        assert_eq!(load_sweep_json(&pj).unwrap(), s);
    }

    #[test]
    fn optional_fields_are_blank() {
        let row = SweepRow {
            experiment_id: "checkpoints".into(),
            mode_count: None,
            alpha: None,
            repetition: 2,
            seed: 0,
            metric_name: MetricName::DdMax,
            value: 1.5,
        };
        let text = sweep_csv(std::slice::from_ref(&row)).unwrap();
        assert!(text.ends_with("checkpoints,,,2,0,dd_max,1.5\n"), "{text}");
    }
}
