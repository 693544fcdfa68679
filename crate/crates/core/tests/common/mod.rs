//! Reference computations shared by the integration tests. They use only
//! the public API and enumerate everything explicitly.

#![allow(dead_code)]

use schedlab::lp::{solve_feasibility, LinearProgram, Sense};
use schedlab::rational::{int, Rational};
use schedlab::Instance;

/// All subsets of `items` as index lists, in increasing bitmask order.
pub fn subsets(items: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << items).map(move |mask| (0..items).filter(|k| mask >> k & 1 == 1).collect())
}

/// Every configuration of `machine` at target `T`: eligible job sets with
/// load at most `T`, the empty set included.
pub fn configurations(instance: &Instance, machine: usize, target: &Rational) -> Vec<Vec<usize>> {
    let jobs = instance.machine_jobs(machine);
    subsets(jobs.len())
        .filter(|set| set.iter().map(|&k| &jobs[k].1).sum::<Rational>() <= *target)
        .map(|set| set.iter().map(|&k| jobs[k].0).collect())
        .collect()
}

/// Configuration-LP feasibility with every configuration written out.
pub fn config_lp_by_enumeration(instance: &Instance, target: &Rational) -> bool {
    let m = instance.machines();
    let columns: Vec<(usize, Vec<usize>)> = (0..m)
        .flat_map(|i| configurations(instance, i, target).into_iter().map(move |c| (i, c)))
        .collect();
    let mut lp = LinearProgram::new(columns.len());
    for i in 0..m {
        let terms = columns
            .iter()
            .enumerate()
            .filter(|(_, (mi, _))| *mi == i)
            .map(|(v, _)| (v, int(1)))
            .collect();
        lp.add(terms, Sense::Eq, int(1));
    }
    for j in 0..instance.jobs() {
        let terms: Vec<(usize, Rational)> = columns
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| c.contains(&j))
            .map(|(v, _)| (v, int(1)))
            .collect();
        if terms.is_empty() {
            return false;
        }
        lp.add(terms, Sense::Eq, int(1));
    }
    solve_feasibility(&lp).is_feasible()
}

/// Largest `Σ u_j` over configurations of `machine` at `T`.
pub fn best_configuration_value(instance: &Instance, machine: usize, u: &[Rational], target: &Rational) -> Rational {
    configurations(instance, machine, target)
        .iter()
        .map(|c| c.iter().map(|&j| &u[j]).sum::<Rational>())
        .max()
        .expect("the empty configuration always exists")
}

/// Loads of an integral assignment given as `machine_of`.
pub fn loads(instance: &Instance, machine_of: &[usize]) -> Vec<Rational> {
    let mut loads = vec![int(0); instance.machines()];
    for (j, &i) in machine_of.iter().enumerate() {
        loads[i] += instance.time(i, j).expect("eligible");
    }
    loads
}

/// Optimal makespan and MaxMin value by plain enumeration of all
/// assignments. Only for very small instances.
pub fn enumerate_optima(instance: &Instance) -> (Rational, Rational) {
    let n = instance.jobs();
    let choices: Vec<Vec<usize>> = (0..n)
        .map(|j| instance.eligible(j).iter().map(|(i, _)| *i).collect())
        .collect();
    let mut index = vec![0usize; n];
    let mut best_makespan: Option<Rational> = None;
    let mut best_maxmin: Option<Rational> = None;
    loop {
        let machine_of: Vec<usize> = (0..n).map(|j| choices[j][index[j]]).collect();
        let l = loads(instance, &machine_of);
        let hi = l.iter().max().unwrap().clone();
        let lo = l.iter().min().unwrap().clone();
        if best_makespan.as_ref().is_none_or(|b| hi < *b) {
            best_makespan = Some(hi);
        }
        if best_maxmin.as_ref().is_none_or(|b| lo > *b) {
            best_maxmin = Some(lo);
        }
        let mut k = 0;
        loop {
            if k == n {
                return (best_makespan.unwrap(), best_maxmin.unwrap());
            }
            index[k] += 1;
            if index[k] < choices[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

/// The instance with three unit jobs on two identical machines.
pub fn three_unit_jobs() -> Instance {
    Instance::from_finite(&[vec![int(1); 3], vec![int(1); 3]]).unwrap()
}
