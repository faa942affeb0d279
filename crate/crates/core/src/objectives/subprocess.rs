//! Objective backed by an external program.
//!
//! Protocol: the points of a batch are written to the child's stdin, one per
//! line with space-separated coordinates; the child prints one value per line
//! on stdout and exits with status 0. Failed, unparsable or missing values are
//! replaced by `error_value`.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use super::Objective;
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct SubprocessObjective {
    /// Program followed by its arguments.
    pub command: Vec<String>,
    pub dim: usize,
    pub error_value: f64,
    pub timeout: Duration,
    lock: Mutex<()>,
}

impl SubprocessObjective {
    pub fn new(command: Vec<String>, dim: usize, error_value: f64, timeout: Duration) -> Result<Self> {
        if command.is_empty() {
            return Err(Error::Config("subprocess command is empty".into()));
        }
        if !error_value.is_finite() {
            return Err(Error::Config("error_value must be finite".into()));
        }
        Ok(SubprocessObjective {
            command,
            dim,
            error_value,
            timeout,
            lock: Mutex::new(()),
        })
    }

    fn encode(points: &[Vec<f64>]) -> String {
        let mut s = String::new();
        for p in points {
            let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    fn decode(&self, stdout: &str, n: usize) -> Vec<f64> {
        let mut out: Vec<f64> = stdout
            .lines()
            .filter(|l| !l.trim().is_empty())
            .take(n)
            .map(|l| match l.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => {
                    log::warn!("subprocess objective: unparsable value {l:?}");
                    self.error_value
                }
            })
            .collect();
        if out.len() < n {
            log::warn!("subprocess objective: {} of {n} values missing", n - out.len());
            out.resize(n, self.error_value);
        }
        out
    }
}

impl Objective for SubprocessObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(self.evaluate_batch(&[x.to_vec()])?[0])
    }

    fn evaluate_batch(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        if let Some(p) = points.iter().find(|p| p.len() != self.dim) {
            return Err(Error::Domain(format!(
                "subprocess objective expects dimension {}, got {}",
                self.dim,
                p.len()
            )));
        }
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let n = points.len();
        let mut child = Command::new(&self.command[0])
            .args(&self.command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::Subprocess(format!("cannot start {:?}: {e}", self.command[0])))?;

        let input = Self::encode(points);
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = std::thread::spawn(move || {
            // a child that exits early closes the pipe; that is not our error
            let _ = stdin.write_all(input.as_bytes());
        });
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });

        let start = Instant::now();
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break Some(status);
            }
            if start.elapsed() >= self.timeout {
                log::warn!(
                    "subprocess objective timed out after {:?}; substituting {}",
                    self.timeout,
                    self.error_value
                );
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            std::thread::sleep(Duration::from_millis(2));
        };
        let _ = writer.join();
        let stdout = reader.join().unwrap_or_default();
        match status {
            Some(s) if s.success() => Ok(self.decode(&stdout, n)),
            Some(s) => {
                log::warn!("subprocess objective exited with {s}; substituting {}", self.error_value);
                Ok(vec![self.error_value; n])
            }
            None => Ok(vec![self.error_value; n]),
        }
    }
}

#[cfg(all(test, unix))]
mod tests {
    use super::*;

    fn sh(script: &str, timeout_ms: u64) -> SubprocessObjective {
        SubprocessObjective::new(
            vec!["sh".into(), "-c".into(), script.into()],
            2,
            -7.0,
            Duration::from_millis(timeout_ms),
        )
        .unwrap()
    }

    #[test]
    fn echo_zero_per_line() {
        let obj = sh("while read line; do echo 0.0; done", 5000);
        let v = obj.evaluate_batch(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(v, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn sums_coordinates() {
        let obj = sh("awk '{ print $1 + $2 }'", 5000);
        let v = obj.evaluate_batch(&[vec![1.0, 2.5], vec![-3.0, 1.0]]).unwrap();
        assert_eq!(v, vec![3.5, -2.0]);
    }

    #[test]
    fn failures_substitute_error_value() {
        let bad_exit = sh("cat > /dev/null; exit 3", 5000);
        assert_eq!(bad_exit.evaluate_batch(&[vec![0.0, 0.0]]).unwrap(), vec![-7.0]);
        let garbage = sh("cat > /dev/null; echo 1.5; echo nope", 5000);
        assert_eq!(
            garbage.evaluate_batch(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap(),
            vec![1.5, -7.0, -7.0]
        );
        let slow = sh("sleep 5", 100);
        assert_eq!(slow.evaluate_batch(&[vec![0.0, 0.0]]).unwrap(), vec![-7.0]);
    }

    #[test]
    fn wrong_dimension_is_domain_error() {
        let obj = sh("cat", 1000);
        assert!(matches!(obj.evaluate(&[1.0]), Err(Error::Domain(_))));
    }
}
