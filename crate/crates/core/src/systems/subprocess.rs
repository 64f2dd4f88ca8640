//! Measurement through an external process.
//!
//! Protocol, one process per measurement: the child receives a single line
//! on stdin holding a JSON object that maps each option name to its value
//! (numbers for binary/integer options, strings for enumerated ones). It must
//! print a JSON array `[f1, f2]` as the first line of stdout and exit with
//! status 0.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use super::System;
use crate::error::{Error, MeasureError, Result};
use crate::problem::{Configuration, ConfigurationSpace, Objectives, PerfVector};

pub struct SubprocessSystem {
    space: ConfigurationSpace,
    objectives: Objectives,
    command: Vec<String>,
    timeout: Duration,
    // Invocations are serialized per instance.
    lock: Mutex<()>,
}

impl SubprocessSystem {
    pub fn new(
        space: ConfigurationSpace,
        objectives: Objectives,
        command: Vec<String>,
        timeout: Duration,
    ) -> Result<Self> {
        if command.is_empty() {
            return Err(Error::InvalidInput("empty measurement command".into()));
        }
        Ok(Self {
            space,
            objectives,
            command,
            timeout,
            lock: Mutex::new(()),
        })
    }

    /// The JSON line sent to the child for `config`.
    pub fn request_line(&self, config: &Configuration) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .space
            .options()
            .iter()
            .zip(config.values())
            .map(|(o, &v)| (o.name().to_string(), o.json_value(v)))
            .collect();
        serde_json::Value::Object(map).to_string()
    }
}

fn parse_output(stdout: &str) -> Result<PerfVector, MeasureError> {
    let line = stdout.lines().next().unwrap_or("").trim();
    let bad = |reason: &str| MeasureError::BadOutput {
        output: line.to_string(),
        reason: reason.to_string(),
    };
    let values: Vec<f64> = serde_json::from_str(line).map_err(|e| bad(&e.to_string()))?;
    match values.as_slice() {
        [a, b] if a.is_finite() && b.is_finite() => Ok(PerfVector { f: [*a, *b] }),
        [_, _] => Err(bad("non-finite value")),
        _ => Err(bad("expected an array of two numbers")),
    }
}

impl System for SubprocessSystem {
    fn space(&self) -> &ConfigurationSpace {
        &self.space
    }

    fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    fn measure(&self, config: &Configuration) -> Result<PerfVector, MeasureError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut child = Command::new(&self.command[0])
            .args(&self.command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()?;

        let mut stdin = child.stdin.take().expect("piped stdin");
        // A child that exits without reading closes the pipe; its exit status
        // decides the outcome.
        let _ = writeln!(stdin, "{}", self.request_line(config));
        drop(stdin);

        let mut stdout = child.stdout.take().expect("piped stdout");
        let mut stderr = child.stderr.take().expect("piped stderr");
        let out_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let err_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });

        let deadline = Instant::now() + self.timeout;
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if Instant::now() >= deadline {
                let _ = child.kill();
                let _ = child.wait();
                return Err(MeasureError::Timeout(self.timeout));
            }
            thread::sleep(Duration::from_millis(2));
        };
        let out = out_reader.join().unwrap_or_default();
        let err = err_reader.join().unwrap_or_default();
        if !status.success() {
            return Err(MeasureError::ExitStatus {
                status: status.to_string(),
                stderr: err.trim().to_string(),
            });
        }
        parse_output(&out)
    }
}
