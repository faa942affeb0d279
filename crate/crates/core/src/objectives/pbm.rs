//! Protein-binding-microarray style problems: every 8-base DNA sequence with a
//! measured affinity. Sequences are one-hot encoded per position (32 binary
//! features) and the objective is the negative affinity.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use super::Objective;
use crate::error::{Error, Result};
use crate::space::DiscreteSpace;

pub const SEQ_LEN: usize = 8;
pub const BASES: [char; 4] = ['A', 'C', 'G', 'T'];
pub const FEATURES: usize = SEQ_LEN * 4;

#[derive(Debug, Clone)]
pub struct PbmProblem {
    sequences: Vec<String>,
    affinities: Vec<f64>,
    by_code: HashMap<u32, usize>,
    /// Position weight matrix of a synthetic landscape, `pwm[pos][base]`.
    pub pwm: Option<[[f64; 4]; SEQ_LEN]>,
}

fn base_index(c: char) -> Option<usize> {
    BASES.iter().position(|&b| b == c.to_ascii_uppercase())
}

fn sequence_code(seq: &str) -> Result<u32, String> {
    let chars: Vec<char> = seq.chars().collect();
    if chars.len() != SEQ_LEN {
        return Err(format!("sequence {seq:?} has length {}, expected {SEQ_LEN}", chars.len()));
    }
    chars.iter().try_fold(0u32, |code, &c| {
        base_index(c)
            .map(|b| code * 4 + b as u32)
            .ok_or_else(|| format!("invalid base {c:?} in {seq:?}"))
    })
}

fn code_sequence(code: u32) -> String {
    (0..SEQ_LEN)
        .map(|pos| BASES[((code >> (2 * (SEQ_LEN - 1 - pos))) & 3) as usize])
        .collect()
}

/// One-hot features: slot `4 * position + base` is 1.
pub fn encode_sequence(seq: &str) -> Result<Vec<f64>> {
    let code = sequence_code(seq).map_err(|message| Error::Parse { line: 0, message })?;
    let mut x = vec![0.0; FEATURES];
    for pos in 0..SEQ_LEN {
        let b = (code >> (2 * (SEQ_LEN - 1 - pos))) & 3;
        x[4 * pos + b as usize] = 1.0;
    }
    Ok(x)
}

fn features_code(x: &[f64]) -> Option<u32> {
    if x.len() != FEATURES {
        return None;
    }
    let mut code = 0u32;
    for pos in 0..SEQ_LEN {
        let slots = &x[4 * pos..4 * pos + 4];
        let mut hot = None;
        for (b, &v) in slots.iter().enumerate() {
            if v == 1.0 {
                if hot.is_some() {
                    return None;
                }
                hot = Some(b as u32);
            } else if v != 0.0 {
                return None;
            }
        }
        code = code * 4 + hot?;
    }
    Some(code)
}

pub fn decode_sequence(x: &[f64]) -> Option<String> {
    features_code(x).map(code_sequence)
}

impl PbmProblem {
    pub fn new(rows: Vec<(String, f64)>) -> Result<Self> {
        let mut sequences = Vec::with_capacity(rows.len());
        let mut affinities = Vec::with_capacity(rows.len());
        let mut by_code = HashMap::with_capacity(rows.len());
        for (i, (seq, a)) in rows.into_iter().enumerate() {
            let code = sequence_code(&seq).map_err(|message| Error::Parse { line: i + 1, message })?;
            let seq = code_sequence(code);
            if by_code.insert(code, sequences.len()).is_some() {
                return Err(Error::DuplicateAction(seq));
            }
            sequences.push(seq);
            affinities.push(a);
        }
        Ok(PbmProblem {
            sequences,
            affinities,
            by_code,
            pwm: None,
        })
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn sequences(&self) -> &[String] {
        &self.sequences
    }

    pub fn affinities(&self) -> &[f64] {
        &self.affinities
    }

    pub fn affinity_of(&self, seq: &str) -> Option<f64> {
        let code = sequence_code(seq).ok()?;
        self.by_code.get(&code).map(|&i| self.affinities[i])
    }

    /// Discrete action space over the listed sequences, in file order.
    pub fn to_space(&self) -> Result<DiscreteSpace> {
        DiscreteSpace::new(
            self.sequences
                .iter()
                .map(|s| Ok((s.clone(), encode_sequence(s)?)))
                .collect::<Result<_>>()?,
        )
    }
}

impl Objective for PbmProblem {
    fn dim(&self) -> usize {
        FEATURES
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let code = features_code(x)
            .ok_or_else(|| Error::Domain("features are not a one-hot 8-mer encoding".into()))?;
        self.by_code
            .get(&code)
            .map(|&i| -self.affinities[i])
            .ok_or_else(|| Error::Domain(format!("sequence {} is not in the table", code_sequence(code))))
    }
}

/// Parses `<SEQ8><tab><affinity>` rows. A first line whose second field is not
/// numeric is treated as a header.
pub fn parse_pbm<R: BufRead>(reader: R) -> Result<PbmProblem> {
    let mut rows = Vec::new();
    let mut seen: HashMap<u32, usize> = HashMap::new();
    let mut first = true;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let value = fields[1].parse::<f64>();
        if first {
            first = false;
            if value.is_err() {
                continue;
            }
        }
        let value = value.map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad affinity {:?}: {e}", fields[1]),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("non-finite affinity {value}"),
            });
        }
        let code = sequence_code(fields[0]).map_err(|message| Error::Parse { line: line_no, message })?;
        if let Some(prev) = seen.insert(code, line_no) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate action {} (first seen on line {prev})", code_sequence(code)),
            });
        }
        rows.push((code_sequence(code), value));
    }
    PbmProblem::new(rows)
}

pub fn load_pbm(path: impl AsRef<Path>) -> Result<PbmProblem> {
    let file = std::fs::File::open(path)?;
    parse_pbm(std::io::BufReader::new(file))
}

/// Additive landscape over all 4^8 sequences:
/// `affinity = sum_pos W[pos][base] + noise`, `W` standard normal and noise
/// with standard deviation `noise_frac * (max W - min W)`.
pub fn gen_synthetic_pbm<R: Rng + ?Sized>(noise_frac: f64, rng: &mut R) -> Result<PbmProblem> {
    if !(noise_frac >= 0.0) {
        return Err(Error::Config(format!("noise fraction must be nonnegative, got {noise_frac}")));
    }
    let mut pwm = [[0.0; 4]; SEQ_LEN];
    for row in pwm.iter_mut() {
        for w in row.iter_mut() {
            *w = rng.sample(StandardNormal);
        }
    }
    let flat = pwm.iter().flatten();
    let range = flat.clone().copied().fold(f64::NEG_INFINITY, f64::max)
        - flat.copied().fold(f64::INFINITY, f64::min);
    let sd = noise_frac * range;
    let total = 1u32 << (2 * SEQ_LEN);
    let rows = (0..total)
        .map(|code| {
            let signal: f64 = (0..SEQ_LEN)
                .map(|pos| pwm[pos][((code >> (2 * (SEQ_LEN - 1 - pos))) & 3) as usize])
                .sum();
            let noise: f64 = if sd > 0.0 { sd * rng.sample::<f64, _>(StandardNormal) } else { 0.0 };
            (code_sequence(code), signal + noise)
        })
        .collect();
    let mut problem = PbmProblem::new(rows)?;
    problem.pwm = Some(pwm);
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn encoding_of_all_a() {
        let x = encode_sequence("AAAAAAAA").unwrap();
        assert_eq!(x.iter().sum::<f64>(), 8.0);
        for pos in 0..8 {
            assert_eq!(x[4 * pos], 1.0);
        }
        assert_eq!(decode_sequence(&x).unwrap(), "AAAAAAAA");
        assert!(encode_sequence("AAAAAAAX").is_err());
        assert!(encode_sequence("AAAA").is_err());
    }

    #[test]
    fn encoding_is_injective_over_all_8mers() {
        let mut seen = std::collections::HashSet::new();
        for code in 0..(1u32 << 16) {
            let x = encode_sequence(&code_sequence(code)).unwrap();
            assert_eq!(x.iter().filter(|&&v| v == 1.0).count(), 8);
            assert!(seen.insert(features_code(&x).unwrap()));
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "sequence\taffinity\nAAAAAAAA\t1.0\nAAAAAAAX 1.2\n";
        match parse_pbm(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let dup = "AAAAAAAA\t1.0\nCCCCCCCC\t2.0\nAAAAAAAA\t3.0\n";
        match parse_pbm(dup.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate action"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_is_optional() {
        let with = parse_pbm("seq\tvalue\nACGTACGT\t0.5\n".as_bytes()).unwrap();
        let without = parse_pbm("ACGTACGT\t0.5\n".as_bytes()).unwrap();
        assert_eq!(with.len(), 1);
        assert_eq!(with.sequences(), without.sequences());
        let x = encode_sequence("ACGTACGT").unwrap();
        assert_eq!(with.evaluate(&x).unwrap(), -0.5);
    }

    #[test]
    fn noiseless_synthetic_optimum_is_per_position_argmax() {
        let p = gen_synthetic_pbm(0.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(p.len(), 65536);
        let pwm = p.pwm.unwrap();
        let best_seq: String = pwm
            .iter()
            .map(|row| BASES[(0..4).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap()])
            .collect();
        let (i, _) = p
            .affinities()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert_eq!(p.sequences()[i], best_seq);
    }
}
