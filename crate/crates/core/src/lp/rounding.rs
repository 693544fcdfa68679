//! Slot-based rounding of a fractional assignment (generalized-assignment
//! rounding): each machine's support is cut into unit slots in order of
//! non-increasing processing time, and an integral matching of jobs to
//! slots is read off the resulting fractional matching.

use num_traits::{One, Zero};

use crate::assignment::{FractionalAssignment, IntegralAssignment};
use crate::instance::Instance;
use crate::matching::max_matching;
use crate::rational::Rational;

/// One unit-capacity slot of a machine and the jobs overlapping it.
#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub machine: usize,
    /// `(job, mass of the job inside this slot)`.
    pub jobs: Vec<(usize, Rational)>,
}

/// Support of machine `i` sorted by non-increasing `key`, ties by job index.
pub(crate) fn sorted_support(
    support: &[(usize, Rational)],
    key: impl Fn(usize) -> Rational,
) -> Vec<(usize, Rational, Rational)> {
    let mut v: Vec<(usize, Rational, Rational)> = support
        .iter()
        .map(|(j, w)| (*j, w.clone(), key(*j)))
        .collect();
    v.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)));
    v
}

/// Cuts a machine's `(job, weight, key)` list into slots of `capacity`.
pub(crate) fn fill_slots(
    machine: usize,
    items: &[(usize, Rational, Rational)],
    capacity: &Rational,
) -> Vec<Slot> {
    let mut slots = Vec::new();
    let mut current = Slot {
        machine,
        jobs: Vec::new(),
    };
    let mut room = capacity.clone();
    for (job, weight, _) in items {
        let mut left = weight.clone();
        while !left.is_zero() {
            let take = if left < room { left.clone() } else { room.clone() };
            current.jobs.push((*job, take.clone()));
            left -= &take;
            room -= &take;
            if room.is_zero() {
                slots.push(std::mem::replace(
                    &mut current,
                    Slot {
                        machine,
                        jobs: Vec::new(),
                    },
                ));
                room = capacity.clone();
            }
        }
    }
    if !current.jobs.is_empty() {
        slots.push(current);
    }
    slots
}

/// Rounds `x` so that every machine gets at most one job per slot.
///
/// Every job lands on a machine in its support, and machine `i` ends with
/// load at most `Σ_j p_{i,j} x_{i,j} + max{p_{i,j} : x_{i,j} > 0}`.
pub fn shmoys_tardos_round(instance: &Instance, x: &FractionalAssignment) -> IntegralAssignment {
    if let Some(a) = x.as_integral() {
        return a;
    }
    let per_machine = x.by_machine(instance.machines());
    let mut slots: Vec<Slot> = Vec::new();
    for (i, support) in per_machine.iter().enumerate() {
        let items = sorted_support(support, |j| instance.time(i, j).expect("support").clone());
        slots.extend(fill_slots(i, &items, &Rational::one()));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); instance.jobs()];
    for (s, slot) in slots.iter().enumerate() {
        for (j, _) in &slot.jobs {
            if adj[*j].last() != Some(&s) {
                adj[*j].push(s);
            }
        }
    }
    let matched = max_matching(&adj, slots.len());
    let machine_of = matched
        .into_iter()
        .map(|s| slots[s.expect("fractional matching saturates every job")].machine)
        .collect();
    IntegralAssignment::new(instance, machine_of).expect("support machines are eligible")
}
