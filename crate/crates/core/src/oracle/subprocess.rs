//! Oracle backed by an external model-serving process.
//!
//! Wire protocol (UTF-8, line oriented): the parent writes one sample per
//! line as comma-separated decimal floats in shortest round-trip form; the
//! child answers with one non-negative integer label per input line, in
//! order. The parent flushes after each batch and closes the child's stdin
//! to request shutdown.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::Range;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::{Arc, Mutex};

use crate::domain::SampleTally;
use crate::error::{Error, OracleError, OracleErrorKind, Result};
use crate::oracle::Oracle;
use crate::robustness::Sampler;
use crate::seed::SeedSpec;

struct ChildPipe {
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
}

/// A trial succeeds when the child's label differs from `reference_label`.
pub struct SubprocessOracle {
    command: Vec<String>,
    sampler: Arc<dyn Sampler>,
    reference_label: u64,
    pipe: Mutex<ChildPipe>,
}

/// Spawns `command[0]` with arguments `command[1..]`.
pub fn subprocess_oracle(
    command: &[String],
    sampler: Arc<dyn Sampler>,
    reference_label: u64,
) -> Result<SubprocessOracle> {
    let (program, args) = command
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty oracle command".into()))?;
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(|e| {
            OracleError::new(OracleErrorKind::SpawnFailure(format!("{program}: {e}")))
        })?;
    let stdin = child.stdin.take();
    let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
    Ok(SubprocessOracle {
        command: command.to_vec(),
        sampler,
        reference_label,
        pipe: Mutex::new(ChildPipe {
            child,
            stdin,
            stdout,
        }),
    })
}

/// Encodes one sample as a protocol line (without the newline).
pub fn encode_sample(x: &[f64]) -> String {
    let mut line = String::with_capacity(x.len() * 8);
    for (i, v) in x.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(&v.to_string());
    }
    line
}

fn parse_label(line: &str) -> std::result::Result<u64, String> {
    let trimmed = line.trim();
    trimmed
        .parse::<u64>()
        .map_err(|_| format!("expected a non-negative integer label, got '{trimmed}'"))
}

impl SubprocessOracle {
    pub fn command(&self) -> &[String] {
        &self.command
    }

    fn exit_status(pipe: &mut ChildPipe) -> String {
        match pipe.child.try_wait() {
            Ok(Some(status)) => status.to_string(),
            Ok(None) => "closed its stdout".into(),
            Err(e) => e.to_string(),
        }
    }
}

impl Oracle for SubprocessOracle {
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError> {
        let mut guard = self.pipe.lock().unwrap_or_else(|p| p.into_inner());
        let pipe = &mut *guard;
        let expected = trials.end.saturating_sub(trials.start);
        let Some(stdin) = pipe.stdin.as_mut() else {
            return Err(OracleError::new(OracleErrorKind::ChildExit(
                "oracle process already shut down".into(),
            )));
        };

        let sampler = &self.sampler;
        let stdout = &mut pipe.stdout;
        let child = &mut pipe.child;
        let (write_result, read_result) = std::thread::scope(|scope| {
            // Writer runs beside the reader so a child that answers line by
            // line never stalls on a full pipe.
            let writer = scope.spawn(move || -> std::io::Result<()> {
                let mut out = BufWriter::new(stdin);
                for i in trials {
                    let x = sampler.sample(&mut seed.trial_rng(call_index, i));
                    out.write_all(encode_sample(&x).as_bytes())?;
                    out.write_all(b"\n")?;
                }
                out.flush()
            });

            let mut tally = SampleTally::empty();
            let mut line = String::new();
            let mut failure = None;
            while tally.trials() < expected {
                line.clear();
                match stdout.read_line(&mut line) {
                    Ok(0) => {
                        failure = Some(OracleErrorKind::ChildExit(format!(
                            "end of output after {} of {expected} labels",
                            tally.trials()
                        )));
                        break;
                    }
                    Ok(_) => match parse_label(&line) {
                        Ok(label) => tally.record(label != self.reference_label),
                        Err(msg) => {
                            failure = Some(OracleErrorKind::ProtocolViolation(msg));
                            break;
                        }
                    },
                    Err(e) => {
                        failure = Some(OracleErrorKind::Io(e.to_string()));
                        break;
                    }
                }
            }
            if failure.is_some() {
                // Unblocks the writer if the child stopped consuming input.
                let _ = child.kill();
            }
            let write_result = writer.join().expect("writer thread panicked");
            (write_result, failure.map(|k| (k, tally)).ok_or(tally))
        });

        match read_result {
            Err(tally) => {
                if let Err(e) = write_result {
                    return Err(OracleError::new(OracleErrorKind::Io(e.to_string()))
                        .with_partial(tally));
                }
                Ok(tally)
            }
            Ok((OracleErrorKind::ChildExit(msg), tally)) => {
                pipe.stdin = None;
                let status = Self::exit_status(pipe);
                Err(OracleError::new(OracleErrorKind::ChildExit(format!("{msg} ({status})")))
                    .with_partial(tally))
            }
            Ok((kind, tally)) => {
                pipe.stdin = None;
                Err(OracleError::new(kind).with_partial(tally))
            }
        }
    }

    fn supports_concurrent_draws(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!(
            "subprocess `{}` (reference label {}) over {}",
            self.command.join(" "),
            self.reference_label,
            self.sampler.description()
        )
    }
}

impl Drop for SubprocessOracle {
    fn drop(&mut self) {
        let pipe = self.pipe.get_mut().unwrap_or_else(|p| p.into_inner());
        // EOF on stdin asks the child to exit.
        pipe.stdin = None;
        for _ in 0..50 {
            if let Ok(Some(_)) = pipe.child.try_wait() {
                return;
            }
            std::thread::sleep(std::time::Duration::from_millis(10));
        }
        let _ = pipe.child.kill();
        let _ = pipe.child.wait();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_shortest_round_trip() {
        let x = [0.1, 1.0, 0.0, 1e-7, 0.30000000000000004];
        let line = encode_sample(&x);
        assert_eq!(line, "0.1,1,0,0.0000001,0.30000000000000004");
        let back: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(back, x);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(parse_label("3\n"), Ok(3));
        assert_eq!(parse_label(" 0 \r\n"), Ok(0));
        assert!(parse_label("-1").is_err());
        assert!(parse_label("cat").is_err());
        assert!(parse_label("").is_err());
    }
}
