//! The configuration LP: per machine, a distribution over job sets that fit
//! within the target `T`, with every job covered exactly once overall.
//!
//! Feasibility is decided by column generation ([`config_lp_feasible`]) with
//! knapsack pricing ([`price_column`]). [`project_to_assignment`] maps a
//! solution to the assignment LP and [`verify_config_solution`] checks one
//! exactly.

mod master;
mod pricing;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use master::{config_lp_feasible, ConfigLpOutcome, Mode};
pub use pricing::{price_column, BudgetExceeded, PRICING_CAPACITY_LIMIT, PRICING_ENUMERATION_LIMIT};

use crate::assignment::FractionalAssignment;
use crate::error::AssignmentError;
use crate::instance::Instance;
use crate::io::content_lines;
use crate::rational::{format_rational, parse_rational, Rational};

pub const CERTIFICATE_HEADER: &str = "config-solution 1";

/// A set of jobs placed together on one machine, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    machine: usize,
    jobs: Vec<usize>,
}

impl Configuration {
    pub fn new(machine: usize, mut jobs: Vec<usize>) -> Self {
        jobs.sort_unstable();
        jobs.dedup();
        Configuration { machine, jobs }
    }

    pub fn empty(machine: usize) -> Self {
        Configuration {
            machine,
            jobs: Vec::new(),
        }
    }

    pub fn machine(&self) -> usize {
        self.machine
    }

    pub fn jobs(&self) -> &[usize] {
        &self.jobs
    }

    /// Total processing time on its machine, `None` if some job is ineligible.
    pub fn load(&self, instance: &Instance) -> Option<Rational> {
        self.jobs.iter().try_fold(Rational::zero(), |acc, &j| {
            instance.time(self.machine, j).map(|p| acc + p)
        })
    }
}

/// Weighted configurations `y_{i,C}` at a target `T`. Duplicate
/// configurations are merged and zero weights dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSolution {
    target: Rational,
    weights: Vec<(Configuration, Rational)>,
}

impl ConfigSolution {
    pub fn new(target: Rational, entries: impl IntoIterator<Item = (Configuration, Rational)>) -> Self {
        let mut merged: BTreeMap<Configuration, Rational> = BTreeMap::new();
        for (c, w) in entries {
            *merged.entry(c).or_insert_with(Rational::zero) += w;
        }
        ConfigSolution {
            target,
            weights: merged.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        }
    }

    pub fn target(&self) -> &Rational {
        &self.target
    }

    /// Entries sorted by machine, then job list.
    pub fn weights(&self) -> &[(Configuration, Rational)] {
        &self.weights
    }

    /// `true` when every machine uses one configuration with weight 1.
    pub fn is_integral(&self) -> bool {
        self.weights.iter().all(|(_, w)| w.is_one())
    }
}

/// A configuration solution in which some jobs only need coverage
/// `α_j ∈ [0, 1]`; unlisted jobs need 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialConfigSolution {
    pub solution: ConfigSolution,
    pub coverage: BTreeMap<usize, Rational>,
}

/// The first constraint a configuration solution violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("configuration on machine {machine} is out of range")]
    MachineOutOfRange { machine: usize },
    #[error("machine {machine}: job {job} is ineligible or out of range")]
    Ineligible { machine: usize, job: usize },
    #[error("machine {machine}, jobs {jobs:?}: negative weight {weight}")]
    NegativeWeight {
        machine: usize,
        jobs: Vec<usize>,
        weight: String,
    },
    #[error("machine {machine}, jobs {jobs:?}: load {load} exceeds target {target}")]
    Overload {
        machine: usize,
        jobs: Vec<usize>,
        load: String,
        target: String,
    },
    #[error("machine {machine}: weights sum to {sum}, expected 1")]
    MachineSum { machine: usize, sum: String },
    #[error("job {job}: covered {sum}, expected {expected}")]
    Coverage {
        job: usize,
        sum: String,
        expected: String,
    },
}

fn verify(
    instance: &Instance,
    y: &ConfigSolution,
    target: &Rational,
    coverage: &BTreeMap<usize, Rational>,
) -> Result<(), Violation> {
    let mut machine_sum = vec![Rational::zero(); instance.machines()];
    let mut job_sum = vec![Rational::zero(); instance.jobs()];
    for (c, w) in &y.weights {
        let machine = c.machine;
        if machine >= instance.machines() {
            return Err(Violation::MachineOutOfRange { machine });
        }
        if let Some(&job) = c.jobs.iter().find(|&&j| j >= instance.jobs() || instance.time(machine, j).is_none()) {
            return Err(Violation::Ineligible { machine, job });
        }
        if w.is_negative() {
            return Err(Violation::NegativeWeight {
                machine,
                jobs: c.jobs.clone(),
                weight: format_rational(w),
            });
        }
        let load = c.load(instance).expect("eligibility checked");
        if load > *target {
            return Err(Violation::Overload {
                machine,
                jobs: c.jobs.clone(),
                load: format_rational(&load),
                target: format_rational(target),
            });
        }
        machine_sum[machine] += w;
        for &j in &c.jobs {
            job_sum[j] += w;
        }
    }
    if let Some((machine, sum)) = machine_sum.iter().enumerate().find(|(_, s)| !s.is_one()) {
        return Err(Violation::MachineSum {
            machine,
            sum: format_rational(sum),
        });
    }
    let one = Rational::one();
    for (job, sum) in job_sum.iter().enumerate() {
        let expected = coverage.get(&job).unwrap_or(&one);
        if sum != expected {
            return Err(Violation::Coverage {
                job,
                sum: format_rational(sum),
                expected: format_rational(expected),
            });
        }
    }
    Ok(())
}

/// Checks nonnegativity, configuration loads against `target`, machine
/// sums and exact job coverage.
pub fn verify_config_solution(
    instance: &Instance,
    y: &ConfigSolution,
    target: &Rational,
) -> Result<(), Violation> {
    verify(instance, y, target, &BTreeMap::new())
}

/// As [`verify_config_solution`], with the relaxed per-job coverage.
pub fn verify_partial_solution(
    instance: &Instance,
    y: &PartialConfigSolution,
    target: &Rational,
) -> Result<(), Violation> {
    verify(instance, &y.solution, target, &y.coverage)
}

/// `x_{i,j} = Σ_{C ∋ j} y_{i,C}`.
pub fn project_to_assignment(
    instance: &Instance,
    y: &ConfigSolution,
) -> Result<FractionalAssignment, AssignmentError> {
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); instance.jobs()];
    for (c, w) in &y.weights {
        for &j in &c.jobs {
            let row = rows.get_mut(j).ok_or(AssignmentError::JobCount {
                expected: instance.jobs(),
                got: j + 1,
            })?;
            *row.entry(c.machine).or_insert_with(Rational::zero) += w;
        }
    }
    FractionalAssignment::new(instance, rows.into_iter().map(|r| r.into_iter().collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CertificateParseError {
    pub line: usize,
    pub message: String,
}

fn parse_error(line: usize, message: impl Into<String>) -> CertificateParseError {
    CertificateParseError {
        line,
        message: message.into(),
    }
}

pub fn write_config_solution(y: &ConfigSolution) -> String {
    let mut out = format!("{CERTIFICATE_HEADER}\ntarget {}\n", format_rational(&y.target));
    for (c, w) in &y.weights {
        let jobs = if c.jobs.is_empty() {
            "-".to_string()
        } else {
            c.jobs.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",")
        };
        writeln!(out, "y {} {} {}", c.machine, format_rational(w), jobs).expect("write to String");
    }
    out
}

pub fn parse_config_solution(text: &str) -> Result<ConfigSolution, CertificateParseError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, l)) if l == CERTIFICATE_HEADER => {}
        Some((no, _)) => return Err(parse_error(no, format!("expected `{CERTIFICATE_HEADER}`"))),
        None => return Err(parse_error(0, "empty file")),
    }
    let target = match lines.next() {
        Some((no, l)) => {
            let value = l
                .strip_prefix("target ")
                .ok_or_else(|| parse_error(no, "expected `target <T>`"))?;
            parse_rational(value.trim()).map_err(|e| parse_error(no, e.to_string()))?
        }
        None => return Err(parse_error(0, "missing `target` line")),
    };
    let mut entries = Vec::new();
    for (no, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [key, machine, weight, jobs] = parts[..] else {
            return Err(parse_error(no, "expected `y <machine> <weight> <jobs>`"));
        };
        if key != "y" {
            return Err(parse_error(no, "expected `y <machine> <weight> <jobs>`"));
        }
        let machine: usize = machine
            .parse()
            .map_err(|_| parse_error(no, format!("bad machine index `{machine}`")))?;
        let weight = parse_rational(weight).map_err(|e| parse_error(no, e.to_string()))?;
        let jobs = if jobs == "-" {
            Vec::new()
        } else {
            jobs.split(',')
                .map(|s| s.parse().map_err(|_| parse_error(no, format!("bad job index `{s}`"))))
                .collect::<Result<Vec<usize>, _>>()?
        };
        entries.push((Configuration::new(machine, jobs), weight));
    }
    Ok(ConfigSolution::new(target, entries))
}
