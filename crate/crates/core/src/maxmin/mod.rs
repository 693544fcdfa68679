//! MaxMin allocation: maximize the smallest machine load.
//!
//! * [`maxmin_balance`]: combinatorial 2-approximation when every job is
//!   eligible on at most two machines (preassignment, pairing graph,
//!   2-coloring, binary search on `T`).
//! * [`half_integral_maxmin`] and [`half_integral_sparse`]: half-integral
//!   solutions for general instances within factors 2 and 4, the latter
//!   with at most `⌊m/2⌋` split jobs.

mod graph;
mod half;

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use graph::{Component, PairingGraph};
pub use half::{half_integral_maxmin, half_integral_sparse, maxmin_lp, HalfResult};

use crate::assignment::IntegralAssignment;
use crate::instance::Instance;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaxMinError {
    #[error("job {0} is eligible on more than two machines")]
    NotBalancingInstance(usize),
}

/// Per machine `i`: `B_i`, the jobs pinned to `i`, and `A_i`, the jobs
/// still free to go to `i` or one other machine, ordered by non-increasing
/// `p_{i,j}` with ties to the lower job index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancingState {
    a: Vec<BTreeSet<(Reverse<Rational>, usize)>>,
    b: Vec<Vec<usize>>,
    sum_a: Vec<Rational>,
    sum_b: Vec<Rational>,
}

impl BalancingState {
    pub fn new(instance: &Instance) -> Result<Self, MaxMinError> {
        let m = instance.machines();
        let mut state = BalancingState {
            a: vec![BTreeSet::new(); m],
            b: vec![Vec::new(); m],
            sum_a: vec![Rational::zero(); m],
            sum_b: vec![Rational::zero(); m],
        };
        for j in 0..instance.jobs() {
            match instance.eligible(j) {
                [(i, p)] => {
                    state.b[*i].push(j);
                    state.sum_b[*i] += p;
                }
                [(i, p), (k, q)] => {
                    state.a[*i].insert((Reverse(p.clone()), j));
                    state.sum_a[*i] += p;
                    state.a[*k].insert((Reverse(q.clone()), j));
                    state.sum_a[*k] += q;
                }
                _ => return Err(MaxMinError::NotBalancingInstance(j)),
            }
        }
        Ok(state)
    }

    pub fn machines(&self) -> usize {
        self.a.len()
    }

    /// `A_i` in order.
    pub fn a_list(&self, machine: usize) -> Vec<usize> {
        self.a[machine].iter().map(|(_, j)| *j).collect()
    }

    pub fn b_list(&self, machine: usize) -> &[usize] {
        &self.b[machine]
    }

    pub fn sum_a(&self, machine: usize) -> &Rational {
        &self.sum_a[machine]
    }

    /// `p(A'_i)`: `A_i` without its first element.
    pub fn sum_a_prime(&self, machine: usize) -> Rational {
        match self.a[machine].first() {
            Some((Reverse(p), _)) => &self.sum_a[machine] - p,
            None => Rational::zero(),
        }
    }

    pub fn sum_b(&self, machine: usize) -> &Rational {
        &self.sum_b[machine]
    }

    /// Moves `a_{i,1}` into `B_i` and drops it from the other machine's
    /// `A`. Returns that other machine.
    fn force_top(&mut self, instance: &Instance, i: usize) -> usize {
        let (Reverse(p), j) = self.a[i].pop_first().expect("A_i nonempty");
        self.sum_a[i] -= &p;
        self.sum_b[i] += &p;
        self.b[i].push(j);
        let (other, q) = instance
            .eligible(j)
            .iter()
            .find(|(k, _)| *k != i)
            .expect("flexible job has a second machine");
        self.a[*other].remove(&(Reverse(q.clone()), j));
        self.sum_a[*other] -= q;
        *other
    }
}

/// A machine whose `p(A_i) + p(B_i)` fell below `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("machine {machine} cannot reach the target")]
pub struct InfeasibleAtT {
    pub machine: usize,
}

/// Forced moves until `p(A'_i) + p(B_i) ≥ T` on every machine, or some
/// machine has `p(A_i) + p(B_i) < T`. Machines are revisited first in,
/// first out whenever their `A` shrinks.
pub fn preassign(
    instance: &Instance,
    state: &mut BalancingState,
    target: &Rational,
) -> Result<(), InfeasibleAtT> {
    let m = state.machines();
    let mut queued = vec![true; m];
    let mut queue: VecDeque<usize> = (0..m).collect();
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        loop {
            if &state.sum_a[i] + &state.sum_b[i] < *target {
                return Err(InfeasibleAtT { machine: i });
            }
            if state.sum_a_prime(i) + &state.sum_b[i] >= *target {
                break;
            }
            let other = state.force_top(instance, i);
            if !queued[other] {
                queued[other] = true;
                queue.push_back(other);
            }
        }
    }
    Ok(())
}

/// A successful run of [`decide_t`] with the data its guarantee refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancingRun {
    pub assignment: IntegralAssignment,
    /// State after preassignment.
    pub state: BalancingState,
    pub graph: PairingGraph,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// Every machine load is at least `T/2`.
    Solution(BalancingRun),
    /// No assignment reaches minimum load `T`.
    NoSolutionAtT,
}

/// Either an assignment of value at least `T/2` or a proof that no
/// assignment reaches `T`.
pub fn decide_t(instance: &Instance, target: &Rational) -> Result<Decision, MaxMinError> {
    assert!(target.is_positive(), "target must be positive");
    let mut state = BalancingState::new(instance)?;
    if preassign(instance, &mut state, target).is_err() {
        return Ok(Decision::NoSolutionAtT);
    }
    let lists: Vec<Vec<usize>> = (0..state.machines()).map(|i| state.a_list(i)).collect();
    let graph = PairingGraph::new(&lists, 0);
    let colors = graph.two_coloring().expect("pairing graph is bipartite");
    let mut machine_of = vec![usize::MAX; instance.jobs()];
    for (i, jobs) in state.b.iter().enumerate() {
        for &j in jobs {
            machine_of[j] = i;
        }
    }
    for (v, &(i, j)) in graph.vertices().iter().enumerate() {
        if colors[v] {
            machine_of[j] = i;
        }
    }
    let assignment =
        IntegralAssignment::new(instance, machine_of).expect("each job lands on one eligible machine");
    Ok(Decision::Solution(BalancingRun {
        assignment,
        state,
        graph,
    }))
}

/// Result of [`maxmin_balance`]: `value(assignment) ≥ target/2` and no
/// assignment has value above `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceResult {
    pub assignment: IntegralAssignment,
    pub target: Rational,
}

/// Largest `k·step` with `k ∈ [0, hi_k)` for which `accept` succeeds,
/// keeping `lo` accepted (or zero) and `hi` rejected.
pub(crate) fn largest_accepted_multiple<R>(
    hi_k: BigInt,
    step: &Rational,
    mut accept: impl FnMut(&Rational) -> Option<R>,
) -> (Rational, Option<R>) {
    let mut lo = BigInt::zero();
    let mut hi = hi_k;
    let mut best = None;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        let t = Rational::from_integer(mid.clone()) * step;
        match accept(&t) {
            Some(r) => {
                lo = mid;
                best = Some(r);
            }
            None => hi = mid,
        }
    }
    (Rational::from_integer(lo) * step, best)
}

/// Upper end of the search: one step above `Σ_j max_i p_{i,j}`, in steps.
pub(crate) fn search_ceiling(instance: &Instance, step: &Rational) -> BigInt {
    let total: Rational = (0..instance.jobs()).map(|j| instance.max_time_of(j)).sum();
    (total / step).to_integer() + BigInt::one()
}

/// Binary search over multiples of the gcd `g` of all times. Loads are
/// multiples of `g`, so a rejection at `T + g` after a solution at `T`
/// bounds the optimum by `T`.
pub fn maxmin_balance(instance: &Instance) -> Result<BalanceResult, MaxMinError> {
    BalancingState::new(instance)?;
    let g = instance.granularity();
    let (target, run) = largest_accepted_multiple(search_ceiling(instance, &g), &g, |t| {
        match decide_t(instance, t).expect("balancing instance checked") {
            Decision::Solution(run) => Some(run),
            Decision::NoSolutionAtT => None,
        }
    });
    let assignment = match run {
        Some(run) => run.assignment,
        None => IntegralAssignment::first_eligible(instance),
    };
    Ok(BalanceResult { assignment, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{min_load, LoadProfile};
    use crate::instance::ProcessingTime;
    use crate::oracle::{brute_force, Objective, DEFAULT_BUDGET};
    use crate::random::{random_instance, RandomSpec};
    use crate::rational::int;

    fn sparse(m: usize, rows: &[&[(usize, i64)]]) -> Instance {
        Instance::new(
            m,
            rows.iter()
                .map(|r| r.iter().map(|&(i, p)| (i, int(p))).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn private_jobs_only() {
        let inst = sparse(2, &[&[(0, 5)], &[(1, 5)]]);
        match decide_t(&inst, &int(5)).unwrap() {
            Decision::Solution(run) => assert_eq!(min_load(&inst, &run.assignment), int(5)),
            Decision::NoSolutionAtT => panic!("solution exists"),
        }
        let r = maxmin_balance(&inst).unwrap();
        assert_eq!((min_load(&inst, &r.assignment), r.target), (int(5), int(5)));
    }

    #[test]
    fn short_machine_rejected() {
        let inst = sparse(1, &[&[(0, 1)], &[(0, 2)]]);
        assert_eq!(decide_t(&inst, &int(4)).unwrap(), Decision::NoSolutionAtT);
    }

    #[test]
    fn three_machines_rejected() {
        let inst = Instance::from_finite(&vec![vec![int(1)]; 3]).unwrap();
        assert_eq!(maxmin_balance(&inst), Err(MaxMinError::NotBalancingInstance(0)));
    }

    #[test]
    fn single_forced_move() {
        // machine 0: A = {job 0: 3}, B = {job 1: 1}
        let inst = sparse(2, &[&[(0, 3), (1, 9)], &[(0, 1)], &[(1, 9)]]);
        let mut s = BalancingState::new(&inst).unwrap();
        preassign(&inst, &mut s, &int(4)).unwrap();
        assert_eq!(s.b_list(0), &[1, 0]);
        assert!(s.a_list(1).is_empty());
        assert_eq!(s.sum_b(0), &int(4));
    }

    #[test]
    fn fixed_point_unchanged() {
        let inst = sparse(2, &[&[(0, 3), (1, 3)], &[(0, 4)], &[(1, 4)]]);
        let mut s = BalancingState::new(&inst).unwrap();
        let before = s.clone();
        preassign(&inst, &mut s, &int(4)).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn chain_of_forced_moves() {
        // machine 0 must keep job 0, which leaves machine 1 short
        let inst = sparse(3, &[&[(0, 4), (1, 4)], &[(1, 2), (2, 4)], &[(0, 1)], &[(2, 1)]]);
        let mut s = BalancingState::new(&inst).unwrap();
        assert_eq!(preassign(&inst, &mut s, &int(5)), Err(InfeasibleAtT { machine: 1 }));
        let opt = brute_force(&inst, Objective::MaxMin, DEFAULT_BUDGET).unwrap().optimum;
        assert!(opt < int(5));
    }

    #[test]
    fn shared_pair_forms_four_cycle() {
        let inst = sparse(2, &[&[(0, 3), (1, 2)], &[(0, 2), (1, 3)]]);
        let s = BalancingState::new(&inst).unwrap();
        let lists: Vec<Vec<usize>> = (0..2).map(|i| s.a_list(i)).collect();
        let g = PairingGraph::new(&lists, 0);
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].cycle && comps[0].vertices.len() == 4);
        assert!(g.two_coloring().is_some());
    }

    #[test]
    fn zero_optimum_instance() {
        let inst = Instance::from_matrix(vec![
            vec![ProcessingTime::Finite(int(2))],
            vec![ProcessingTime::Infinite],
        ])
        .unwrap();
        let r = maxmin_balance(&inst).unwrap();
        assert_eq!(r.target, int(0));
        assert_eq!(min_load(&inst, &r.assignment), int(0));
    }

    #[test]
    fn random_balancing_guarantees() {
        for seed in 0..60 {
            let inst = random_instance(&RandomSpec::new(4, 8, 1, 12).balancing(), seed);
            let opt = brute_force(&inst, Objective::MaxMin, DEFAULT_BUDGET).unwrap().optimum;
            let r = maxmin_balance(&inst).unwrap();
            assert!(opt <= r.target, "seed {seed}");
            assert!(min_load(&inst, &r.assignment) * int(2) >= opt, "seed {seed}");
            let mut t = int(1);
            while t <= &opt + int(3) {
                match decide_t(&inst, &t).unwrap() {
                    Decision::NoSolutionAtT => assert!(opt < t),
                    Decision::Solution(run) => {
                        assert!(run.graph.two_coloring().is_some());
                        for i in 0..inst.machines() {
                            let bound = run.state.sum_a_prime(i) / int(2) + run.state.sum_b(i);
                            assert!(run.assignment.load(&inst, i) >= bound);
                            assert!(run.assignment.load(&inst, i) * int(2) >= t);
                        }
                    }
                }
                t += int(1);
            }
        }
    }

    #[test]
    fn all_private_is_exact() {
        for seed in 0..10 {
            let spec = RandomSpec::new(4, 8, 1, 9).density(0.3);
            let mut inst = random_instance(&spec, seed);
            let rows: Vec<Vec<(usize, Rational)>> =
                (0..inst.jobs()).map(|j| vec![inst.eligible(j)[0].clone()]).collect();
            inst = Instance::new(inst.machines(), rows).unwrap();
            let opt = brute_force(&inst, Objective::MaxMin, DEFAULT_BUDGET).unwrap().optimum;
            assert_eq!(min_load(&inst, &maxmin_balance(&inst).unwrap().assignment), opt);
        }
    }
}
