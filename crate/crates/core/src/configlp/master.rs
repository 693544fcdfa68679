//! Column generation for the configuration LP.

use num_traits::{One, Signed, Zero};

use super::pricing::{price_column, price_column_relaxed, BudgetExceeded};
use super::{ConfigSolution, Configuration};
use crate::instance::Instance;
use crate::lp::simplex::{Column, Simplex};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// Configurations of load at most `T`, priced exactly.
    Exact,
    /// Configurations of load at most `(1 + ε)·T`; an infeasible verdict
    /// still certifies infeasibility at `T`.
    Relaxed(Rational),
}

impl Mode {
    pub fn relaxed() -> Self {
        Mode::Relaxed(rat(1, 100))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigLpOutcome {
    /// The solution's target is `T` in exact mode and `(1 + ε)·T` when relaxed.
    Feasible(ConfigSolution),
    Infeasible,
}

impl ConfigLpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ConfigLpOutcome::Feasible(_))
    }

    pub fn solution(&self) -> Option<&ConfigSolution> {
        match self {
            ConfigLpOutcome::Feasible(y) => Some(y),
            ConfigLpOutcome::Infeasible => None,
        }
    }
}

fn config_column(machines: usize, c: &Configuration) -> Column {
    let entries = std::iter::once((c.machine(), Rational::one()))
        .chain(c.jobs().iter().map(|&j| (machines + j, Rational::one())))
        .collect();
    Column::new(entries, Rational::zero())
}

/// Decides feasibility of the configuration LP at target `T`.
///
/// Master rows are one convexity row per machine and one coverage row per
/// job. The start basis uses the empty configuration on every machine and
/// a unit-cost slack on every job; the LP is feasible iff the total slack
/// can be driven to zero.
pub fn config_lp_feasible(
    instance: &Instance,
    target: &Rational,
    mode: &Mode,
) -> Result<ConfigLpOutcome, BudgetExceeded> {
    assert!(target.is_positive(), "target must be positive");
    if (0..instance.jobs()).any(|j| instance.min_time(j) > target) {
        return Ok(ConfigLpOutcome::Infeasible);
    }
    let m = instance.machines();
    let n = instance.jobs();
    let mut configs: Vec<Option<Configuration>> = Vec::with_capacity(m + n);
    let mut columns = Vec::with_capacity(m + n);
    for i in 0..m {
        configs.push(Some(Configuration::empty(i)));
        columns.push(Column::unit(i, Rational::zero()));
    }
    for j in 0..n {
        configs.push(None);
        columns.push(Column::unit(m + j, Rational::one()));
    }
    let mut master = Simplex::new(vec![Rational::one(); m + n], columns, (0..m + n).collect());
    loop {
        master.optimize().expect("slack objective is bounded below");
        if master.objective().is_zero() {
            break;
        }
        let duals = master.duals();
        let (v, u) = duals.split_at(m);
        let mut added = false;
        for i in 0..m {
            let priced = match mode {
                Mode::Exact => price_column(instance, i, u, &v[i], target)?,
                Mode::Relaxed(eps) => price_column_relaxed(instance, i, u, &v[i], target, eps)?,
            };
            if let Some(c) = priced {
                master.add_column(config_column(m, &c));
                configs.push(Some(c));
                added = true;
            }
        }
        if !added {
            return Ok(ConfigLpOutcome::Infeasible);
        }
    }
    let solution_target = match mode {
        Mode::Exact => target.clone(),
        Mode::Relaxed(eps) => target * (Rational::one() + eps),
    };
    let entries = configs
        .into_iter()
        .enumerate()
        .filter_map(|(col, c)| c.map(|c| (c, master.value(col))));
    Ok(ConfigLpOutcome::Feasible(ConfigSolution::new(solution_target, entries)))
}
