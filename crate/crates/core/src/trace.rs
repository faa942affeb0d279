//! Per-round run records and their JSON-lines encoding.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::SeedPolicy;
use crate::space::SpaceSummary;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub method: String,
    pub seed: SeedPolicy,
    pub space: SpaceSummary,
    /// Snapshot of the configuration that produced the run.
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    /// Proposed points; left empty for finite spaces, which record `indices`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    pub values: Vec<f64>,
    /// Threshold of this round's classifier; absent for round 0, baselines
    /// and comparison feedback.
    pub alpha: Option<f64>,
    /// Proposal mass cut by this round's classifier (exact on finite spaces).
    pub coverage: Option<f64>,
    pub best_so_far: f64,
    /// Hex-packed cut decisions over the whole finite space (bit i = point i).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_mask: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Incumbent {
    pub value: f64,
    pub round: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// Best point of the final batch.
    pub final_argmin: Incumbent,
    /// Best point over the whole run.
    pub overall_best: Incumbent,
    pub total_evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub header: TraceHeader,
    pub rounds: Vec<RoundRecord>,
    pub result: Option<RunResult>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Header(TraceHeader),
    Round(RoundRecord),
    Result(RunResult),
}

impl RunTrace {
    pub fn new(header: TraceHeader) -> Self {
        RunTrace {
            header,
            rounds: Vec::new(),
            result: None,
        }
    }

    pub fn total_evaluations(&self) -> usize {
        self.rounds.iter().map(|r| r.values.len()).sum()
    }

    pub fn round(&self, t: usize) -> Option<&RoundRecord> {
        self.rounds.iter().find(|r| r.t == t)
    }

    /// One JSON object per line: header, rounds, then the result if present.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &Line::Header(self.header.clone()))?;
        w.write_all(b"\n")?;
        for r in &self.rounds {
            serde_json::to_writer(&mut w, &Line::Round(r.clone()))?;
            w.write_all(b"\n")?;
        }
        if let Some(res) = &self.result {
            serde_json::to_writer(&mut w, &Line::Result(res.clone()))?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut header = None;
        let mut rounds = Vec::new();
        let mut result = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: Line = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            match parsed {
                Line::Header(h) => header = Some(h),
                Line::Round(r) => rounds.push(r),
                Line::Result(r) => result = Some(r),
            }
        }
        let header = header.ok_or(Error::Parse {
            line: 1,
            message: "trace has no header line".into(),
        })?;
        Ok(RunTrace {
            header,
            rounds,
            result,
        })
    }
}

/// Running minimum of all observed values through each round.
pub fn best_so_far(trace: &RunTrace) -> Vec<f64> {
    let mut best = f64::INFINITY;
    trace
        .rounds
        .iter()
        .map(|r| {
            for &y in &r.values {
                best = best.min(y);
            }
            best
        })
        .collect()
}

/// Packs a boolean mask into lowercase hex, 4 points per digit, point 0 in the
/// most significant bit of the first digit.
pub fn encode_mask(mask: &[bool]) -> String {
    let bytes: Vec<u8> = mask
        .chunks(8)
        .map(|c| {
            c.iter()
                .enumerate()
                .fold(0u8, |acc, (k, &b)| acc | ((b as u8) << (7 - k)))
        })
        .collect();
    hex::encode(bytes)
}

pub fn decode_mask(s: &str, len: usize) -> Result<Vec<bool>> {
    let bytes = hex::decode(s).map_err(|e| Error::Parse {
        line: 0,
        message: format!("bad cut mask: {e}"),
    })?;
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Parse {
            line: 0,
            message: format!("cut mask covers {} bytes, expected {}", bytes.len(), len.div_ceil(8)),
        });
    }
    Ok((0..len).map(|i| bytes[i / 8] & (1 << (7 - i % 8)) != 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trace_with(batches: &[&[f64]]) -> RunTrace {
        let mut tr = RunTrace::new(TraceHeader {
            method: "test".into(),
            seed: SeedPolicy::new(0, 0),
            space: SpaceSummary {
                kind: "box".into(),
                dim: 1,
                size: None,
                optimum_index: None,
                optimum_value: None,
            },
            config: serde_json::Value::Null,
        });
        let mut best = f64::INFINITY;
        for (t, b) in batches.iter().enumerate() {
            best = b.iter().fold(best, |m, &y| m.min(y));
            tr.rounds.push(RoundRecord {
                t,
                points: vec![],
                indices: None,
                values: b.to_vec(),
                alpha: None,
                coverage: None,
                best_so_far: best,
                cut_mask: None,
                bandwidth: None,
                notes: vec![],
            });
        }
        tr
    }

    #[test]
    fn best_so_far_examples() {
        assert_eq!(best_so_far(&trace_with(&[&[3.0], &[1.0], &[2.0]])), vec![3.0, 1.0, 1.0]);
        assert_eq!(best_so_far(&trace_with(&[&[5.0, 4.0]])), vec![4.0]);
        assert_eq!(best_so_far(&trace_with(&[&[2.0, 2.0], &[2.0, 2.0]])), vec![2.0, 2.0]);
    }

    #[test]
    fn jsonl_round_trip() {
        let tr = trace_with(&[&[3.0, 0.5], &[1.0]]);
        let mut buf = Vec::new();
        tr.write_jsonl(&mut buf).unwrap();
        assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), 3);
        let back = RunTrace::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, tr);
    }

    proptest! {
        #[test]
        fn mask_round_trip(mask in prop::collection::vec(any::<bool>(), 0..300)) {
            let s = encode_mask(&mask);
            prop_assert_eq!(decode_mask(&s, mask.len()).unwrap(), mask);
        }
    }
}
