//! Resumable sieve runs.
//!
//! After each segment the new checkpoint rows of every consumer are appended
//! to `<name>.rows.csv` and the full accumulator state is saved to
//! `run-state.json`. A later run with `--resume` restores that state and
//! restarts the sieve at the recorded segment boundary.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use chebias_core::summation::{AccumulatorState, SeriesConsumer};
use chebias_core::{drive, CheckpointSeries, PrimeConsumer, SieveConfig};
use serde::{Deserialize, Serialize};

use crate::emit::format_value;
use crate::error::{CliError, CliResult};

/// Finished series by consumer name, plus the last saved boundary.
pub type RunOutput = (Vec<(String, CheckpointSeries)>, Option<u64>);

pub const STATE_NAME: &str = "run-state.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunState {
    pub fingerprint: String,
    /// Every prime below this has been consumed.
    pub boundary: u64,
    pub consumers: Vec<AccumulatorState>,
}

/// Named consumers fed from one sieve pass.
pub struct ResumableRun {
    dir: PathBuf,
    fingerprint: String,
    consumers: Vec<(String, Box<dyn SeriesConsumer>)>,
    written: Vec<usize>,
    boundary: Option<u64>,
    error: Option<CliError>,
}

impl ResumableRun {
    pub fn new(dir: &Path, fingerprint: String, consumers: Vec<(String, Box<dyn SeriesConsumer>)>) -> Self {
        ResumableRun {
            dir: dir.to_path_buf(),
            fingerprint,
            written: vec![0; consumers.len()],
            consumers,
            boundary: None,
            error: None,
        }
    }

    fn rows_path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.rows.csv"))
    }

    fn state_path(&self) -> PathBuf {
        self.dir.join(STATE_NAME)
    }

    /// Loads saved state; returns the boundary to restart from.
    pub fn restore(&mut self) -> CliResult<u64> {
        let text = fs::read_to_string(self.state_path())
            .map_err(|e| CliError::Resume(format!("cannot read {}: {e}", self.state_path().display())))?;
        let state: RunState = serde_json::from_str(&text)?;
        if state.fingerprint != self.fingerprint {
            return Err(CliError::Resume(format!(
                "saved run was for `{}`, not `{}`",
                state.fingerprint, self.fingerprint
            )));
        }
        if state.consumers.len() != self.consumers.len() {
            return Err(CliError::Resume("saved run has a different number of series".into()));
        }
        for ((_, c), s) in self.consumers.iter_mut().zip(&state.consumers) {
            c.restore(s)?;
        }
        // rows files are rebuilt from the restored state
        for i in 0..self.consumers.len() {
            self.written[i] = 0;
            let path = self.rows_path(&self.consumers[i].0);
            if path.exists() {
                fs::remove_file(&path)?;
            }
        }
        self.flush_rows()?;
        self.boundary = Some(state.boundary);
        Ok(state.boundary)
    }

    fn flush_rows(&mut self) -> CliResult<()> {
        for i in 0..self.consumers.len() {
            let (name, c) = &self.consumers[i];
            let rows = c.recorded_rows();
            if rows.len() == self.written[i] {
                continue;
            }
            let path = self.rows_path(name);
            let fresh = !path.exists();
            let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
            if fresh {
                writeln!(f, "{}", c.column_names().join("\t"))?;
            }
            for row in &rows[self.written[i]..] {
                let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
                writeln!(f, "{}", cells.join("\t"))?;
            }
            self.written[i] = rows.len();
        }
        Ok(())
    }

    fn save(&mut self, boundary: u64) -> CliResult<()> {
        self.flush_rows()?;
        let state = RunState {
            fingerprint: self.fingerprint.clone(),
            boundary,
            consumers: self.consumers.iter().map(|(_, c)| c.snapshot()).collect(),
        };
        let tmp = self.dir.join(format!("{STATE_NAME}.tmp"));
        fs::write(&tmp, serde_json::to_vec(&state)?)?;
        fs::rename(&tmp, self.state_path())?;
        self.boundary = Some(boundary);
        Ok(())
    }

    /// Streams primes from `start` up to `config.limit`, saving state after
    /// every segment, without finishing the consumers.
    pub fn advance(&mut self, config: &SieveConfig, start: u64) -> CliResult<()> {
        fs::create_dir_all(&self.dir)?;
        drive(config, start, self);
        match self.error.take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Streams primes from `start` and finishes every consumer. Scratch files
    /// are removed on success.
    pub fn run(mut self, config: &SieveConfig, start: u64) -> CliResult<RunOutput> {
        self.advance(config, start)?;
        let mut out = Vec::new();
        for (name, c) in self.consumers.iter_mut() {
            out.push((name.clone(), c.finish()?));
        }
        for (name, _) in &self.consumers {
            let path = self.rows_path(name);
            if path.exists() {
                fs::remove_file(path)?;
            }
        }
        if self.state_path().exists() {
            fs::remove_file(self.state_path())?;
        }
        Ok((out, self.boundary))
    }
}

impl PrimeConsumer for ResumableRun {
    #[inline]
    fn prime(&mut self, p: u64) {
        for (_, c) in self.consumers.iter_mut() {
            c.prime(p);
        }
    }

    fn segment_done(&mut self, hi: u64) {
        for (_, c) in self.consumers.iter_mut() {
            c.segment_done(hi);
        }
        if self.error.is_none() {
            if let Err(e) = self.save(hi) {
                self.error = Some(e);
            }
        }
    }
}
