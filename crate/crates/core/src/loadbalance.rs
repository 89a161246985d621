//! Random assignment of tasks to machines.
//!
//! Task durations are unknown when tasks are placed, so placement looks only
//! at task indices: each task goes to an independent uniform machine.
//! Durations are fixed-point with nine decimal places so that per-machine
//! loads always sum to the total exactly.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::seed::SeedStream;

/// Fixed-point units per unit of duration.
pub const SCALE: u64 = 1_000_000_000;
const FRACTION_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("at least one machine is required")]
    NoMachines,
    #[error("line {line}: {text:?} is not a nonnegative decimal with at most 9 fractional digits")]
    BadDuration { line: usize, text: String },
    #[error("all loads are zero; the max/mean ratio is undefined")]
    UndefinedRatio,
}

/// Nonnegative duration in units of `1 / SCALE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TaskDuration(pub u64);

impl TaskDuration {
    pub const UNIT: TaskDuration = TaskDuration(SCALE);

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }
}

impl std::str::FromStr for TaskDuration {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if (int.is_empty() && frac.is_empty())
            || !digits(int)
            || !digits(frac)
            || frac.len() > FRACTION_DIGITS
        {
            return Err(());
        }
        let whole: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| ())? };
        let mut part = 0u64;
        for (k, b) in frac.bytes().enumerate() {
            part += (b - b'0') as u64 * 10u64.pow((FRACTION_DIGITS - 1 - k) as u32);
        }
        whole
            .checked_mul(SCALE)
            .and_then(|w| w.checked_add(part))
            .map(TaskDuration)
            .ok_or(())
    }
}

/// One nonnegative decimal per line; blank lines are skipped.
pub fn parse_durations(text: &str) -> Result<Vec<TaskDuration>, LoadError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            l.parse().map_err(|_| LoadError::BadDuration {
                line,
                text: l.to_owned(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    machine_of: Vec<usize>,
    loads: Vec<u128>,
}

impl Assignment {
    pub fn machines(&self) -> usize {
        self.loads.len()
    }

    /// Machine of each task, in task order.
    pub fn machine_of(&self) -> &[usize] {
        &self.machine_of
    }

    /// Loads in fixed-point units.
    pub fn raw_loads(&self) -> &[u128] {
        &self.loads
    }

    pub fn loads(&self) -> Vec<f64> {
        self.loads.iter().map(|&l| l as f64 / SCALE as f64).collect()
    }

    pub fn total(&self) -> u128 {
        self.loads.iter().sum()
    }
}

/// Places each task on a uniformly random machine, independently.
pub fn assign_random<R: Rng + ?Sized>(
    durations: &[TaskDuration],
    machines: usize,
    rng: &mut R,
) -> Result<Assignment, LoadError> {
    if machines == 0 {
        return Err(LoadError::NoMachines);
    }
    let machine_of: Vec<usize> = (0..durations.len())
        .map(|_| rng.gen_range(0..machines))
        .collect();
    let mut loads = vec![0u128; machines];
    for (d, &m) in durations.iter().zip(&machine_of) {
        loads[m] += d.0 as u128;
    }
    Ok(Assignment { machine_of, loads })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Imbalance {
    pub max_load: f64,
    pub mean_load: f64,
    /// `max / mean`.
    pub ratio: f64,
}

pub fn imbalance(a: &Assignment) -> Result<Imbalance, LoadError> {
    let total = a.total();
    if total == 0 {
        return Err(LoadError::UndefinedRatio);
    }
    let max = *a.loads.iter().max().expect("at least one machine");
    let n = a.machines() as u128;
    Ok(Imbalance {
        max_load: max as f64 / SCALE as f64,
        mean_load: total as f64 / (n * SCALE as u128) as f64,
        ratio: (max * n) as f64 / total as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceSummary {
    pub runs: u64,
    pub tasks: usize,
    pub machines: usize,
    pub median_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_max_load: f64,
    /// Runs where machine loads failed to sum to the task total.
    pub conservation_failures: u64,
}

/// `runs` independent assignments; run `i` draws from stream `("balance", i)`.
pub fn run_experiment(
    durations: &[TaskDuration],
    machines: usize,
    runs: u64,
    seeds: &SeedStream,
) -> Result<(BalanceSummary, Vec<Imbalance>), LoadError> {
    let expected: u128 = durations.iter().map(|d| d.0 as u128).sum();
    let per_run: Vec<(Imbalance, bool)> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let a = assign_random(durations, machines, &mut seeds.stream("balance", i))?;
            Ok((imbalance(&a)?, a.total() == expected))
        })
        .collect::<Result<_, LoadError>>()?;
    let mut ratios: Vec<f64> = per_run.iter().map(|r| r.0.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let median = if ratios.is_empty() {
        f64::NAN
    } else if ratios.len() % 2 == 1 {
        ratios[ratios.len() / 2]
    } else {
        (ratios[ratios.len() / 2 - 1] + ratios[ratios.len() / 2]) / 2.0
    };
    let summary = BalanceSummary {
        runs,
        tasks: durations.len(),
        machines,
        median_ratio: median,
        min_ratio: ratios.first().copied().unwrap_or(f64::NAN),
        max_ratio: ratios.last().copied().unwrap_or(f64::NAN),
        mean_max_load: per_run.iter().map(|r| r.0.max_load).sum::<f64>() / runs.max(1) as f64,
        conservation_failures: per_run.iter().filter(|r| !r.1).count() as u64,
    };
    Ok((summary, per_run.into_iter().map(|r| r.0).collect()))
}
