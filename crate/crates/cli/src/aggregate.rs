//! Median and quartile summaries of best-so-far curves across replicates.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use cutclass::RunTrace;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub method: String,
    pub round: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AggregateReport {
    /// Sorted by method name, then round.
    pub rows: Vec<AggregateRow>,
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

impl AggregateReport {
    /// Summarizes the traces of each method. The result does not depend on
    /// replicate order.
    pub fn from_traces<'a>(by_method: impl IntoIterator<Item = (&'a str, &'a [RunTrace])>) -> Self {
        let mut curves: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
        for (method, traces) in by_method {
            for tr in traces {
                for r in &tr.rounds {
                    curves.entry((method.to_string(), r.t)).or_default().push(r.best_so_far);
                }
            }
        }
        let rows = curves
            .into_iter()
            .map(|((method, round), mut v)| {
                v.sort_by(f64::total_cmp);
                AggregateRow {
                    method,
                    round,
                    median: quantile(&v, 0.5),
                    q25: quantile(&v, 0.25),
                    q75: quantile(&v, 0.75),
                    replicates: v.len(),
                }
            })
            .collect();
        AggregateReport { rows }
    }

    /// Reads `traces/<method>/*.jsonl` under an experiment directory.
    pub fn from_dir(dir: &Path) -> Result<Self, CliError> {
        let traces_dir = dir.join("traces");
        let mut methods = Vec::new();
        let entries = std::fs::read_dir(&traces_dir)
            .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", traces_dir.display())))?;
        for entry in entries {
            let entry = entry?;
            if !entry.file_type()?.is_dir() {
                continue;
            }
            let name = entry.file_name().to_string_lossy().into_owned();
            let mut files: Vec<_> = std::fs::read_dir(entry.path())?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
                .collect();
            files.sort();
            let traces = files
                .iter()
                .map(|p| {
                    let f = std::fs::File::open(p)?;
                    RunTrace::read_jsonl(std::io::BufReader::new(f))
                        .map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            methods.push((name, traces));
        }
        if methods.is_empty() {
            return Err(CliError::Runtime(format!("no traces under {}", traces_dir.display())));
        }
        Ok(Self::from_traces(methods.iter().map(|(m, t)| (m.as_str(), t.as_slice()))))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a report written by [`AggregateReport::write_csv`]. The
    /// `replicates` column may be absent.
    pub fn read_csv<R: Read>(r: R) -> Result<Self, CliError> {
        #[derive(Deserialize)]
        struct Loose {
            method: String,
            round: usize,
            median: f64,
            q25: f64,
            q75: f64,
            #[serde(default)]
            replicates: usize,
        }
        let mut rows = Vec::new();
        for rec in csv::Reader::from_reader(r).deserialize() {
            let l: Loose = rec?;
            rows.push(AggregateRow {
                method: l.method,
                round: l.round,
                median: l.median,
                q25: l.q25,
                q75: l.q75,
                replicates: l.replicates,
            });
        }
        Ok(AggregateReport { rows })
    }

    /// The plotting columns only, one row per (method, round).
    pub fn write_plot_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        if self.rows.is_empty() {
            return Err(CliError::Runtime("report has no rows".into()));
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["method", "round", "median", "q25", "q75"])?;
        let mut rows: Vec<&AggregateRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.round.cmp(&b.round)));
        for r in rows {
            out.write_record([
                r.method.clone(),
                r.round.to_string(),
                r.median.to_string(),
                r.q25.to_string(),
                r.q75.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn get(&self, method: &str, round: usize) -> Option<&AggregateRow> {
        self.rows.iter().find(|r| r.method == method && r.round == round)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_examples() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 0.75), 3.25);
        assert_eq!(quantile(&[7.0], 0.25), 7.0);
    }

    #[test]
    fn csv_round_trip() {
        let report = AggregateReport {
            rows: vec![AggregateRow {
                method: "a".into(),
                round: 1,
                median: 0.1 + 0.2,
                q25: -1e-300,
                q75: 1.0 / 3.0,
                replicates: 3,
            }],
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        assert_eq!(AggregateReport::read_csv(&buf[..]).unwrap(), report);

        let mut plot = Vec::new();
        report.write_plot_csv(&mut plot).unwrap();
        let back = AggregateReport::read_csv(&plot[..]).unwrap();
        assert_eq!(back.rows[0].median, report.rows[0].median);
        assert_eq!(back.rows[0].q75, report.rows[0].q75);
    }
}
