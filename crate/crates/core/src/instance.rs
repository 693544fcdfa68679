//! The scheduling instance: `m` unrelated machines, `n` jobs and a sparse
//! processing-time matrix whose missing cells are infinite.

use num_traits::{Signed, Zero};

use crate::error::InstanceError;
use crate::rational::{rational_gcd, Rational};

/// A processing time `p_{i,j}`: a positive rational or the infinity symbol.
///
/// Infinity never takes part in arithmetic; callers branch on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProcessingTime {
    Finite(Rational),
    Infinite,
}

impl ProcessingTime {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ProcessingTime::Finite(p) => Some(p),
            ProcessingTime::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ProcessingTime::Finite(_))
    }
}

/// Immutable instance. Each job keeps its finite entries sorted by machine,
/// and each machine keeps the jobs it can run sorted by job index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    machines: usize,
    by_job: Vec<Vec<(usize, Rational)>>,
    by_machine: Vec<Vec<(usize, Rational)>>,
}

impl Instance {
    /// Builds an instance from per-job lists of `(machine, p)` finite entries.
    pub fn new(
        machines: usize,
        jobs: Vec<Vec<(usize, Rational)>>,
    ) -> Result<Self, InstanceError> {
        if machines == 0 || jobs.is_empty() {
            return Err(InstanceError::Empty);
        }
        let mut by_job = jobs;
        let mut by_machine = vec![Vec::new(); machines];
        for (job, row) in by_job.iter_mut().enumerate() {
            validate_row(machines, job, row)?;
            for (machine, p) in row.iter() {
                by_machine[*machine].push((job, p.clone()));
            }
        }
        Ok(Instance {
            machines,
            by_job,
            by_machine,
        })
    }

    /// Builds from a dense `m x n` matrix (rows are machines).
    pub fn from_matrix(rows: Vec<Vec<ProcessingTime>>) -> Result<Self, InstanceError> {
        let machines = rows.len();
        let jobs = rows.first().map_or(0, Vec::len);
        let mut by_job = vec![Vec::new(); jobs];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate().take(jobs) {
                if let ProcessingTime::Finite(p) = p {
                    by_job[j].push((i, p));
                }
            }
        }
        Instance::new(machines, by_job)
    }

    /// Every job eligible on every machine with the given times (`times[i][j]`).
    pub fn from_finite(times: &[Vec<Rational>]) -> Result<Self, InstanceError> {
        Instance::from_matrix(
            times
                .iter()
                .map(|r| r.iter().cloned().map(ProcessingTime::Finite).collect())
                .collect(),
        )
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> usize {
        self.by_job.len()
    }

    /// Finite entries of job `j`, sorted by machine.
    pub fn eligible(&self, job: usize) -> &[(usize, Rational)] {
        &self.by_job[job]
    }

    /// Jobs with finite time on machine `i`, sorted by job index.
    pub fn machine_jobs(&self, machine: usize) -> &[(usize, Rational)] {
        &self.by_machine[machine]
    }

    pub fn time(&self, machine: usize, job: usize) -> Option<&Rational> {
        let row = &self.by_job[job];
        row.binary_search_by_key(&machine, |(i, _)| *i)
            .ok()
            .map(|k| &row[k].1)
    }

    pub fn processing_time(&self, machine: usize, job: usize) -> ProcessingTime {
        match self.time(machine, job) {
            Some(p) => ProcessingTime::Finite(p.clone()),
            None => ProcessingTime::Infinite,
        }
    }

    pub fn finite_times(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.by_job.iter().flat_map(|r| r.iter().map(|(_, p)| p))
    }

    /// gcd of all finite processing times.
    pub fn granularity(&self) -> Rational {
        rational_gcd(self.finite_times()).expect("instance has finite entries")
    }

    pub fn max_time(&self) -> Rational {
        self.finite_times().max().cloned().expect("nonempty")
    }

    pub fn min_time(&self, job: usize) -> &Rational {
        self.by_job[job].iter().map(|(_, p)| p).min().expect("eligible")
    }

    pub fn max_time_of(&self, job: usize) -> &Rational {
        self.by_job[job].iter().map(|(_, p)| p).max().expect("eligible")
    }

    /// Largest number of machines any single job is eligible on.
    pub fn max_eligibility(&self) -> usize {
        self.by_job.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Σ_j min_i p_{i,j}`, the makespan of putting everything on a single
    /// "fastest" machine per job.
    pub fn sum_of_min_times(&self) -> Rational {
        (0..self.jobs()).fold(Rational::zero(), |acc, j| acc + self.min_time(j))
    }
}

/// Sorts `row` by machine and checks it is a valid job row.
pub(crate) fn validate_row(
    machines: usize,
    job: usize,
    row: &mut [(usize, Rational)],
) -> Result<(), InstanceError> {
    if row.is_empty() {
        return Err(InstanceError::NoEligibleMachine(job));
    }
    row.sort_by_key(|(i, _)| *i);
    for w in row.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(InstanceError::DuplicateEntry {
                job,
                machine: w[0].0,
            });
        }
    }
    for (machine, p) in row.iter() {
        if *machine >= machines {
            return Err(InstanceError::MachineOutOfRange {
                job,
                machine: *machine,
            });
        }
        if !p.is_positive() {
            return Err(InstanceError::NonPositive {
                job,
                machine: *machine,
            });
        }
    }
    Ok(())
}
