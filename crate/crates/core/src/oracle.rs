//! Exhaustive branch-and-bound over integral assignments. Only meant for
//! tiny instances; it is the ground truth the approximation algorithms are
//! checked against.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::assignment::IntegralAssignment;
use crate::instance::Instance;
use crate::rational::{denominator_lcm, Rational};

/// Default cap on visited search nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Minimize the largest load.
    Makespan,
    /// Maximize the smallest load.
    MaxMin,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search exceeded the budget of {0} nodes")]
    BudgetExceeded(u64),
    #[error("scaled processing times do not fit in 64 bits")]
    TooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: Rational,
    /// Lexicographically smallest (by job index) assignment attaining `optimum`.
    pub witness: IntegralAssignment,
}

/// Integer-scaled copy of the instance.
struct Scaled {
    machines: usize,
    /// Per job: `(machine, p)` sorted by machine.
    rows: Vec<Vec<(usize, i128)>>,
    scale: BigInt,
}

impl Scaled {
    fn new(instance: &Instance) -> Result<Self, OracleError> {
        let scale = denominator_lcm(instance.finite_times());
        let rows = (0..instance.jobs())
            .map(|j| {
                instance
                    .eligible(j)
                    .iter()
                    .map(|(i, p)| {
                        let v = p.numer() * (&scale / p.denom());
                        v.to_i64().map(|v| (*i, v as i128)).ok_or(OracleError::TooLarge)
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(Scaled {
            machines: instance.machines(),
            rows,
            scale,
        })
    }

    fn unscale(&self, v: i128) -> Rational {
        Rational::new(BigInt::from(v), self.scale.clone())
    }
}

struct Search<'a> {
    s: &'a Scaled,
    order: Vec<usize>,
    /// Suffix sums over `order` of min (makespan) or max (maxmin) job time.
    rest: Vec<i128>,
    loads: Vec<i128>,
    /// Load plus remaining eligible work, per machine (maxmin bound).
    potential: Vec<i128>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(s: &'a Scaled, order: Vec<usize>, objective: Objective, budget: u64) -> Self {
        let mut rest = vec![0; order.len() + 1];
        for k in (0..order.len()).rev() {
            let row = &s.rows[order[k]];
            let v = match objective {
                Objective::Makespan => row.iter().map(|e| e.1).min().unwrap(),
                Objective::MaxMin => row.iter().map(|e| e.1).max().unwrap(),
            };
            rest[k] = rest[k + 1] + v;
        }
        let mut potential = vec![0; s.machines];
        for row in &s.rows {
            for &(i, p) in row {
                potential[i] += p;
            }
        }
        Search {
            s,
            order,
            rest,
            loads: vec![0; s.machines],
            potential,
            current: vec![usize::MAX; s.rows.len()],
            nodes: 0,
            budget,
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(OracleError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn place(&mut self, job: usize, machine: usize, p: i128) {
        self.loads[machine] += p;
        for &(i, q) in &self.s.rows[job] {
            if i != machine {
                self.potential[i] -= q;
            }
        }
        self.current[job] = machine;
    }

    fn unplace(&mut self, job: usize, machine: usize, p: i128) {
        self.loads[machine] -= p;
        for &(i, q) in &self.s.rows[job] {
            if i != machine {
                self.potential[i] += q;
            }
        }
        self.current[job] = usize::MAX;
    }

    fn total(&self) -> i128 {
        self.loads.iter().sum()
    }

    /// Lower bound on any completion's makespan.
    fn makespan_bound(&self, depth: usize) -> (i128, i128) {
        let max = *self.loads.iter().max().unwrap();
        (max, self.total() + self.rest[depth])
    }

    /// Upper bound on any completion's min load.
    fn maxmin_bound(&self, depth: usize) -> i128 {
        let local = *self.potential.iter().min().unwrap();
        let avg = (self.total() + self.rest[depth]).div_euclid(self.s.machines as i128);
        local.min(avg)
    }

    /// Finds the optimum; `best` starts at an achievable value.
    fn optimize(&mut self, depth: usize, objective: Objective, best: &mut i128) -> Result<(), OracleError> {
        self.tick()?;
        let m = self.s.machines as i128;
        match objective {
            Objective::Makespan => {
                let (max, work) = self.makespan_bound(depth);
                if max >= *best || work > m * (*best - 1) {
                    return Ok(());
                }
                if depth == self.order.len() {
                    *best = max;
                    return Ok(());
                }
            }
            Objective::MaxMin => {
                if self.maxmin_bound(depth) <= *best {
                    return Ok(());
                }
                if depth == self.order.len() {
                    *best = *self.loads.iter().min().unwrap();
                    return Ok(());
                }
            }
        }
        let job = self.order[depth];
        let mut choices = self.s.rows[job].clone();
        match objective {
            Objective::Makespan => choices.sort_by_key(|&(i, p)| (self.loads[i] + p, i)),
            Objective::MaxMin => choices.sort_by_key(|&(i, _)| (self.loads[i], i)),
        }
        for (i, p) in choices {
            self.place(job, i, p);
            let r = self.optimize(depth + 1, objective, best);
            self.unplace(job, i, p);
            r?;
        }
        Ok(())
    }

    /// Depth-first in job-index order; the first leaf reaching `target`
    /// is the lexicographically smallest optimal assignment.
    fn witness(&mut self, depth: usize, objective: Objective, target: i128) -> Result<bool, OracleError> {
        self.tick()?;
        let m = self.s.machines as i128;
        match objective {
            Objective::Makespan => {
                let (max, work) = self.makespan_bound(depth);
                if max > target || work > m * target {
                    return Ok(false);
                }
            }
            Objective::MaxMin => {
                if self.maxmin_bound(depth) < target {
                    return Ok(false);
                }
            }
        }
        if depth == self.order.len() {
            return Ok(true);
        }
        let job = self.order[depth];
        for (i, p) in self.s.rows[job].clone() {
            self.place(job, i, p);
            let found = self.witness(depth + 1, objective, target);
            if matches!(found, Ok(true)) {
                return found;
            }
            self.unplace(job, i, p);
            found?;
        }
        Ok(false)
    }
}

fn greedy(s: &Scaled, objective: Objective) -> i128 {
    let mut loads = vec![0i128; s.machines];
    for row in &s.rows {
        let &(i, p) = match objective {
            Objective::Makespan => row.iter().min_by_key(|&&(i, p)| (loads[i] + p, i)),
            Objective::MaxMin => row.iter().min_by_key(|&&(i, _)| (loads[i], i)),
        }
        .unwrap();
        loads[i] += p;
    }
    match objective {
        Objective::Makespan => *loads.iter().max().unwrap(),
        Objective::MaxMin => *loads.iter().min().unwrap(),
    }
}

/// Exact optimum of `objective` over all integral assignments.
pub fn brute_force(
    instance: &Instance,
    objective: Objective,
    budget: u64,
) -> Result<OracleResult, OracleError> {
    let s = Scaled::new(instance)?;
    let mut order: Vec<usize> = (0..instance.jobs()).collect();
    order.sort_by(|&a, &b| instance.min_time(b).cmp(instance.min_time(a)).then(a.cmp(&b)));

    let mut best = greedy(&s, objective);
    // Start one step past the greedy value so the greedy solution itself
    // is rediscovered when it is optimal.
    match objective {
        Objective::Makespan => best += 1,
        Objective::MaxMin => best -= 1,
    }
    let mut search = Search::new(&s, order, objective, budget);
    search.optimize(0, objective, &mut best)?;
    let used = search.nodes;

    let mut lex = Search::new(&s, (0..instance.jobs()).collect(), objective, budget.saturating_sub(used));
    let found = lex.witness(0, objective, best)?;
    assert!(found, "optimum {best} must be attainable");
    let witness = IntegralAssignment::new(instance, lex.current.clone())
        .expect("search only uses eligible machines");
    Ok(OracleResult {
        optimum: s.unscale(best),
        witness,
    })
}
