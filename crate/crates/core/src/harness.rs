//! Seeded sweeps over `(n, q)` that count unique, non-unique and
//! undetermined puzzles, written as CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use crate::certificates::certify;
use crate::exec::{map_indexed, Execution};
use crate::puzzle::generate_puzzle;
use crate::seed::mix;
use crate::solver::{decide_unique, UniquenessVerdict};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    /// Certificates only; no certificate means undetermined.
    Certificate,
    /// Certificate first, exact search within the budget otherwise.
    Auto,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Certificate => "certificate",
            Mode::Auto => "auto",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "certificate" => Ok(Mode::Certificate),
            "auto" => Ok(Mode::Auto),
            other => Err(Error::InvalidSweep(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Unique,
    NonUnique,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub n_values: Vec<usize>,
    pub q_values: Vec<u32>,
    pub trials: u64,
    pub mode: Mode,
    pub master_seed: u64,
    pub node_budget: u64,
    /// Fill `mean_ms` with wall-clock times. Off by default because timings
    /// differ between runs; the column then reads `NA`.
    pub record_timing: bool,
}

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

impl SweepSpec {
    pub fn new(
        n_values: Vec<usize>,
        q_values: Vec<u32>,
        trials: u64,
        mode: Mode,
        master_seed: u64,
    ) -> Self {
        SweepSpec {
            n_values,
            q_values,
            trials,
            mode,
            master_seed,
            node_budget: DEFAULT_NODE_BUDGET,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidSweep("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.q_values.is_empty() {
            return Err(Error::InvalidSweep("need at least one n and one q".into()));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidSweep("n must be at least 1".into()));
        }
        if self.q_values.contains(&0) {
            return Err(Error::InvalidSweep("q must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub q: u32,
    pub mode: &'static str,
    pub trials: u64,
    pub unique: u64,
    pub nonunique: u64,
    pub undetermined: u64,
    pub master_seed: u64,
    /// Mean milliseconds per trial, `None` when timing is off.
    pub mean_ms: Option<f64>,
}

pub const CSV_HEADER: &str = "n,q,mode,trials,unique,nonunique,undetermined,master_seed,mean_ms";

/// `mix(master, [n, q, trial])`; see [`crate::seed::mix`].
pub fn derive_trial_seed(master: u64, n: usize, q: u32, trial: u64) -> u64 {
    mix(master, &[n as u64, q as u64, trial])
}

/// Classifies one puzzle. A certificate's witness is checked inside
/// [`certify`], which panics on an unsound one.
pub fn classify_trial(n: usize, q: u32, seed: u64, mode: Mode, budget: u64) -> Result<Outcome> {
    let gc = generate_puzzle(n, q, seed)?;
    let exact = |gc| match decide_unique(gc, budget) {
        UniquenessVerdict::Unique => Outcome::Unique,
        UniquenessVerdict::NonUnique(_) => Outcome::NonUnique,
        UniquenessVerdict::Undetermined { .. } => Outcome::Undetermined,
    };
    Ok(match mode {
        Mode::Exact => exact(&gc),
        Mode::Certificate if n == 1 => Outcome::Unique,
        Mode::Certificate => match certify(&gc) {
            Some(_) => Outcome::NonUnique,
            None => Outcome::Undetermined,
        },
        Mode::Auto => match certify(&gc) {
            Some(_) => Outcome::NonUnique,
            None => exact(&gc),
        },
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_sweep_with(spec, Execution::default())
}

/// Runs every `(cell, trial)` pair as an independent job; rows come out
/// sorted by `(n, q)` whatever the execution order.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut cells: Vec<(usize, u32)> = spec
        .n_values
        .iter()
        .flat_map(|&n| spec.q_values.iter().map(move |&q| (n, q)))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    let trials = spec.trials as usize;
    let results = map_indexed(exec, cells.len() * trials, |job| {
        let (n, q) = cells[job / trials];
        let trial = (job % trials) as u64;
        let seed = derive_trial_seed(spec.master_seed, n, q, trial);
        let start = Instant::now();
        let outcome = classify_trial(n, q, seed, spec.mode, spec.node_budget);
        outcome.map(|o| (o, start.elapsed().as_secs_f64() * 1e3))
    });
    let mut rows = Vec::with_capacity(cells.len());
    for (k, &(n, q)) in cells.iter().enumerate() {
        let mut row = SweepRow {
            n,
            q,
            mode: spec.mode.name(),
            trials: spec.trials,
            unique: 0,
            nonunique: 0,
            undetermined: 0,
            master_seed: spec.master_seed,
            mean_ms: None,
        };
        let mut total_ms = 0.0;
        for r in &results[k * trials..(k + 1) * trials] {
            let (outcome, ms) = r.clone()?;
            total_ms += ms;
            match outcome {
                Outcome::Unique => row.unique += 1,
                Outcome::NonUnique => row.nonunique += 1,
                Outcome::Undetermined => row.undetermined += 1,
            }
        }
        if spec.record_timing {
            row.mean_ms = Some(total_ms / spec.trials as f64);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        let mean = r
            .mean_ms
            .map_or_else(|| "NA".to_string(), |ms| format!("{ms:.3}"));
        w.write_record([
            r.n.to_string(),
            r.q.to_string(),
            r.mode.to_string(),
            r.trials.to_string(),
            r.unique.to_string(),
            r.nonunique.to_string(),
            r.undetermined.to_string(),
            r.master_seed.to_string(),
            mean,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_differ() {
        assert_eq!(derive_trial_seed(7, 4, 8, 0), derive_trial_seed(7, 4, 8, 0));
        assert_ne!(derive_trial_seed(7, 4, 8, 0), derive_trial_seed(7, 4, 8, 1));
        assert_ne!(derive_trial_seed(7, 4, 8, 0), derive_trial_seed(7, 8, 4, 0));
    }

    #[test]
    fn spec_validation() {
        let ok = SweepSpec::new(vec![2], vec![1], 1, Mode::Exact, 0);
        assert!(ok.validate().is_ok());
        for bad in [
            SweepSpec {
                trials: 0,
                ..ok.clone()
            },
            SweepSpec {
                n_values: vec![0],
                ..ok.clone()
            },
            SweepSpec {
                q_values: vec![0],
                ..ok.clone()
            },
            SweepSpec {
                n_values: vec![],
                ..ok.clone()
            },
        ] {
            assert!(matches!(run_sweep(&bad), Err(Error::InvalidSweep(_))));
        }
        assert!("bogus".parse::<Mode>().is_err());
        assert_eq!("auto".parse::<Mode>().unwrap(), Mode::Auto);
    }

    #[test]
    fn single_colour_never_unique() {
        let rows = run_sweep(&SweepSpec::new(vec![2, 3], vec![1], 5, Mode::Exact, 1)).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.nonunique == 5));
    }

    #[test]
    fn certificate_mode_never_claims_unique() {
        let rows = run_sweep(&SweepSpec::new(vec![3], vec![50], 10, Mode::Certificate, 2)).unwrap();
        assert_eq!(rows[0].unique, 0);
        assert_eq!(rows[0].nonunique + rows[0].undetermined, 10);
    }

    #[test]
    fn csv_layout() {
        let rows = run_sweep(&SweepSpec::new(vec![3, 2], vec![2, 1], 3, Mode::Auto, 5)).unwrap();
        let text = csv_string(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("2,1,auto,3,"));
        assert!(lines[1].ends_with(",5,NA"));
        assert!(lines[4].starts_with("3,2,"));
    }

    #[test]
    fn timing_fills_mean_ms() {
        let mut spec = SweepSpec::new(vec![2], vec![2], 2, Mode::Exact, 0);
        spec.record_timing = true;
        let rows = run_sweep(&spec).unwrap();
        assert!(rows[0].mean_ms.unwrap() >= 0.0);
    }
}
