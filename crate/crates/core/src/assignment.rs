//! Integral, fractional and half-integral assignments, and the load
//! functions evaluated on them.

use num_traits::{One, Zero};

use crate::error::AssignmentError;
use crate::instance::Instance;
use crate::rational::{format_rational, rat, Rational};

/// Anything that induces a load on every machine.
pub trait LoadProfile {
    /// `ℓ_i` for every machine `i`.
    fn loads(&self, instance: &Instance) -> Vec<Rational>;

    fn load(&self, instance: &Instance, machine: usize) -> Rational {
        self.loads(instance).swap_remove(machine)
    }
}

/// Largest machine load.
pub fn makespan<A: LoadProfile + ?Sized>(instance: &Instance, a: &A) -> Rational {
    a.loads(instance).into_iter().max().expect("at least one machine")
}

/// Smallest machine load, empty machines included.
pub fn min_load<A: LoadProfile + ?Sized>(instance: &Instance, a: &A) -> Rational {
    a.loads(instance).into_iter().min().expect("at least one machine")
}

/// Job → machine map with every job on a machine where it is eligible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralAssignment {
    machine_of: Vec<usize>,
}

impl IntegralAssignment {
    pub fn new(instance: &Instance, machine_of: Vec<usize>) -> Result<Self, AssignmentError> {
        if machine_of.len() != instance.jobs() {
            return Err(AssignmentError::JobCount {
                expected: instance.jobs(),
                got: machine_of.len(),
            });
        }
        for (job, &machine) in machine_of.iter().enumerate() {
            if machine >= instance.machines() || instance.time(machine, job).is_none() {
                return Err(AssignmentError::Ineligible { job, machine });
            }
        }
        Ok(IntegralAssignment { machine_of })
    }

    /// Each job on its lowest-index eligible machine.
    pub fn first_eligible(instance: &Instance) -> Self {
        IntegralAssignment {
            machine_of: (0..instance.jobs())
                .map(|j| instance.eligible(j)[0].0)
                .collect(),
        }
    }

    pub fn machine_of(&self, job: usize) -> usize {
        self.machine_of[job]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.machine_of
    }

    /// Jobs placed on `machine`, increasing.
    pub fn jobs_on(&self, machine: usize) -> Vec<usize> {
        (0..self.machine_of.len())
            .filter(|&j| self.machine_of[j] == machine)
            .collect()
    }

    pub fn to_fractional(&self) -> FractionalAssignment {
        FractionalAssignment {
            rows: self
                .machine_of
                .iter()
                .map(|&i| vec![(i, Rational::one())])
                .collect(),
        }
    }
}

impl LoadProfile for IntegralAssignment {
    fn loads(&self, instance: &Instance) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); instance.machines()];
        for (job, &i) in self.machine_of.iter().enumerate() {
            loads[i] += instance.time(i, job).expect("eligible by construction");
        }
        loads
    }
}

/// Sparse fractional assignment: per job, the machines carrying positive
/// weight `x_{i,j}`, sorted by machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalAssignment {
    rows: Vec<Vec<(usize, Rational)>>,
}

impl FractionalAssignment {
    /// Validates `Σ_i x_{i,j} = 1`, `0 ≤ x ≤ 1`, and `x = 0` on infinite cells.
    /// Zero weights are dropped.
    pub fn new(
        instance: &Instance,
        rows: Vec<Vec<(usize, Rational)>>,
    ) -> Result<Self, AssignmentError> {
        if rows.len() != instance.jobs() {
            return Err(AssignmentError::JobCount {
                expected: instance.jobs(),
                got: rows.len(),
            });
        }
        let mut clean = Vec::with_capacity(rows.len());
        for (job, row) in rows.into_iter().enumerate() {
            let mut row: Vec<(usize, Rational)> =
                row.into_iter().filter(|(_, w)| !w.is_zero()).collect();
            row.sort_by_key(|(i, _)| *i);
            let mut sum = Rational::zero();
            for (machine, w) in &row {
                if *w < Rational::zero() || *w > Rational::one() {
                    return Err(AssignmentError::WeightRange {
                        job,
                        machine: *machine,
                        weight: format_rational(w),
                    });
                }
                if *machine >= instance.machines() || instance.time(*machine, job).is_none() {
                    return Err(AssignmentError::Ineligible {
                        job,
                        machine: *machine,
                    });
                }
                sum += w;
            }
            if !sum.is_one() {
                return Err(AssignmentError::Coverage {
                    job,
                    sum: format_rational(&sum),
                });
            }
            clean.push(row);
        }
        Ok(FractionalAssignment { rows: clean })
    }

    /// Builds from a dense `x[i][j]` matrix.
    pub fn from_dense(instance: &Instance, x: &[Vec<Rational>]) -> Result<Self, AssignmentError> {
        let rows = (0..instance.jobs())
            .map(|j| {
                x.iter()
                    .enumerate()
                    .map(|(i, r)| (i, r[j].clone()))
                    .collect()
            })
            .collect();
        FractionalAssignment::new(instance, rows)
    }

    pub fn jobs(&self) -> usize {
        self.rows.len()
    }

    /// Positive entries of job `j`.
    pub fn support(&self, job: usize) -> &[(usize, Rational)] {
        &self.rows[job]
    }

    pub fn weight(&self, machine: usize, job: usize) -> Rational {
        let row = &self.rows[job];
        row.binary_search_by_key(&machine, |(i, _)| *i)
            .map(|k| row[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// `true` when every weight is 0 or 1.
    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(|r| r.len() == 1)
    }

    /// The integral assignment when [`is_integral`](Self::is_integral).
    pub fn as_integral(&self) -> Option<IntegralAssignment> {
        self.is_integral().then(|| IntegralAssignment {
            machine_of: self.rows.iter().map(|r| r[0].0).collect(),
        })
    }

    /// Dense `m x n` view, for printing small instances.
    pub fn to_dense(&self, machines: usize) -> Vec<Vec<Rational>> {
        let mut x = vec![vec![Rational::zero(); self.rows.len()]; machines];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, w) in row {
                x[*i][j] = w.clone();
            }
        }
        x
    }

    /// Per machine, the jobs in its support with their weights.
    pub fn by_machine(&self, machines: usize) -> Vec<Vec<(usize, Rational)>> {
        let mut out = vec![Vec::new(); machines];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, w) in row {
                out[*i].push((j, w.clone()));
            }
        }
        out
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn unchecked(rows: Vec<Vec<(usize, Rational)>>) -> Self {
        FractionalAssignment { rows }
    }
}

impl LoadProfile for FractionalAssignment {
    fn loads(&self, instance: &Instance) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); instance.machines()];
        for (job, row) in self.rows.iter().enumerate() {
            for (i, w) in row {
                let p = instance.time(*i, job).expect("support is eligible");
                loads[*i] += w * p;
            }
        }
        loads
    }
}

/// How one job is shared in a half-integral assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JobShare {
    Whole(usize),
    /// Half on each of two distinct machines (lower index first).
    Split(usize, usize),
}

/// Assignment with every `x_{i,j} ∈ {0, 1/2, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralAssignment {
    shares: Vec<JobShare>,
}

impl HalfIntegralAssignment {
    pub fn new(instance: &Instance, shares: Vec<JobShare>) -> Result<Self, AssignmentError> {
        if shares.len() != instance.jobs() {
            return Err(AssignmentError::JobCount {
                expected: instance.jobs(),
                got: shares.len(),
            });
        }
        let mut normalized = Vec::with_capacity(shares.len());
        for (job, share) in shares.into_iter().enumerate() {
            let machines: &[usize] = match &share {
                JobShare::Whole(i) => std::slice::from_ref(i),
                JobShare::Split(a, b) => &[*a, *b],
            };
            for &machine in machines {
                if machine >= instance.machines() || instance.time(machine, job).is_none() {
                    return Err(AssignmentError::Ineligible { job, machine });
                }
            }
            normalized.push(match share {
                JobShare::Split(a, b) if a == b => JobShare::Whole(a),
                JobShare::Split(a, b) if a > b => JobShare::Split(b, a),
                s => s,
            });
        }
        Ok(HalfIntegralAssignment { shares: normalized })
    }

    pub fn shares(&self) -> &[JobShare] {
        &self.shares
    }

    pub fn split_count(&self) -> usize {
        self.shares
            .iter()
            .filter(|s| matches!(s, JobShare::Split(..)))
            .count()
    }

    pub fn weight(&self, machine: usize, job: usize) -> Rational {
        match self.shares[job] {
            JobShare::Whole(i) if i == machine => Rational::one(),
            JobShare::Split(a, b) if a == machine || b == machine => rat(1, 2),
            _ => Rational::zero(),
        }
    }

    pub fn to_fractional(&self) -> FractionalAssignment {
        FractionalAssignment::unchecked(
            self.shares
                .iter()
                .map(|s| match *s {
                    JobShare::Whole(i) => vec![(i, Rational::one())],
                    JobShare::Split(a, b) => vec![(a, rat(1, 2)), (b, rat(1, 2))],
                })
                .collect(),
        )
    }
}

impl From<&IntegralAssignment> for HalfIntegralAssignment {
    fn from(a: &IntegralAssignment) -> Self {
        HalfIntegralAssignment {
            shares: a.machine_of.iter().map(|&i| JobShare::Whole(i)).collect(),
        }
    }
}

impl LoadProfile for HalfIntegralAssignment {
    fn loads(&self, instance: &Instance) -> Vec<Rational> {
        self.to_fractional().loads(instance)
    }
}
