//! Knapsack pricing for configuration columns.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::Configuration;
use crate::instance::Instance;
use crate::rational::{denominator_lcm, Rational};

/// Largest scaled knapsack capacity solved by dynamic programming.
pub const PRICING_CAPACITY_LIMIT: u64 = 1_000_000;
/// Largest item count solved by subset enumeration.
pub const PRICING_ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("pricing problem too large to solve exactly")]
pub struct BudgetExceeded;

/// Jobs worth packing on `machine`: eligible, `p ≤ T`, and `u_j > 0`.
fn items<'a>(
    instance: &'a Instance,
    machine: usize,
    u: &'a [Rational],
    target: &'a Rational,
) -> Vec<(usize, &'a Rational, &'a Rational)> {
    instance
        .machine_jobs(machine)
        .iter()
        .filter(|(j, p)| p <= target && u[*j] > Rational::zero())
        .map(|(j, p)| (*j, p, &u[*j]))
        .collect()
}

/// 0/1 knapsack over integer weights. Among optimal sets returns the one
/// whose index list is lexicographically smallest.
fn knapsack(weights: &[u64], values: &[&Rational], capacity: u64) -> (Rational, Vec<usize>) {
    let n = weights.len();
    let width = capacity as usize + 1;
    let mut best = vec![Rational::zero(); width];
    let mut take = vec![false; n * width];
    // Suffix tables: after step `k`, best[c] uses items k.. only.
    for k in (0..n).rev() {
        let w = weights[k] as usize;
        for c in (w..width).rev() {
            let with = values[k] + &best[c - w];
            if with >= best[c] {
                best[c] = with;
                take[k * width + c] = true;
            }
        }
    }
    let mut chosen = Vec::new();
    let mut c = capacity as usize;
    for (k, &w) in weights.iter().enumerate() {
        if take[k * width + c] {
            chosen.push(k);
            c -= w as usize;
        }
    }
    (best[capacity as usize].clone(), chosen)
}

fn enumerate(weights: &[&Rational], values: &[&Rational], capacity: &Rational) -> (Rational, Vec<usize>) {
    let n = weights.len();
    let mut best = (Rational::zero(), Vec::new());
    for mask in 1u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let load: Rational = set.iter().map(|&k| weights[k]).sum();
        if load > *capacity {
            continue;
        }
        let value: Rational = set.iter().map(|&k| values[k]).sum();
        if value > best.0 || (value == best.0 && set < best.1) {
            best = (value, set);
        }
    }
    best
}

fn to_u64(v: &BigInt) -> Option<u64> {
    v.to_u64().filter(|&c| c <= PRICING_CAPACITY_LIMIT)
}

/// Best configuration in `C_i(T)` for job duals `u` and machine dual `v`:
/// maximizes `Σ_{j∈C} u_j` and is returned only when `Σ_{j∈C} u_j + v > 0`.
/// Ties go to the lexicographically smallest job list.
pub fn price_column(
    instance: &Instance,
    machine: usize,
    u: &[Rational],
    v: &Rational,
    target: &Rational,
) -> Result<Option<Configuration>, BudgetExceeded> {
    let items = items(instance, machine, u, target);
    let values: Vec<&Rational> = items.iter().map(|(_, _, u)| *u).collect();
    let scale = denominator_lcm(items.iter().map(|(_, p, _)| *p).chain([target]));
    let capacity = (target * Rational::from_integer(scale.clone())).to_integer();
    let (value, chosen) = match to_u64(&capacity) {
        Some(cap) => {
            let weights: Vec<u64> = items
                .iter()
                .map(|(_, p, _)| {
                    (*p * Rational::from_integer(scale.clone()))
                        .to_integer()
                        .to_u64()
                        .expect("p ≤ T fits")
                })
                .collect();
            knapsack(&weights, &values, cap)
        }
        None if items.len() <= PRICING_ENUMERATION_LIMIT => {
            let weights: Vec<&Rational> = items.iter().map(|(_, p, _)| *p).collect();
            enumerate(&weights, &values, target)
        }
        None => return Err(BudgetExceeded),
    };
    Ok(((value + v) > Rational::zero())
        .then(|| Configuration::new(machine, chosen.into_iter().map(|k| items[k].0).collect())))
}

/// Pricing over times rounded down to multiples of `δ = εT/|items|`. The
/// returned configuration has true load at most `(1 + ε)·T`, and every
/// configuration of `C_i(T)` is among the candidates.
pub(crate) fn price_column_relaxed(
    instance: &Instance,
    machine: usize,
    u: &[Rational],
    v: &Rational,
    target: &Rational,
    epsilon: &Rational,
) -> Result<Option<Configuration>, BudgetExceeded> {
    let items = items(instance, machine, u, target);
    if items.is_empty() {
        return Ok((*v > Rational::zero()).then(|| Configuration::empty(machine)));
    }
    let delta = epsilon * target / Rational::from_integer(items.len().into());
    let floor = |r: &Rational| to_u64(&(r / &delta).floor().to_integer());
    let cap = floor(target).ok_or(BudgetExceeded)?;
    let weights: Vec<u64> = items
        .iter()
        .map(|(_, p, _)| floor(p).expect("p ≤ T"))
        .collect();
    let values: Vec<&Rational> = items.iter().map(|(_, _, u)| *u).collect();
    let (value, chosen) = knapsack(&weights, &values, cap);
    Ok(((value + v) > Rational::zero())
        .then(|| Configuration::new(machine, chosen.into_iter().map(|k| items[k].0).collect())))
}
