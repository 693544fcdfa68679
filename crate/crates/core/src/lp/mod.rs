//! The assignment LP for makespan minimization (job coverage, machine
//! capacity `T`, and `x_{i,j} = 0` whenever `p_{i,j} > T`), its rounding,
//! and the algorithms built on top of it:
//!
//! * [`find_c_lp`]: smallest LP-feasible target on a grid of step `g`.
//! * [`approximate_makespan`]: binary search plus rounding, factor 2.
//! * [`gcd_granularity_round`]: the same on the gcd grid, factor `2 − g/M`.
//! * [`three_cut_round`]: for times in `[γ, 3γ]`, the LP strengthened with
//!   three per-machine cardinality cuts, factor `11/6`.

mod rounding;
pub mod simplex;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use rounding::shmoys_tardos_round;
pub(crate) use rounding::{fill_slots, sorted_support};
pub use simplex::{solve_feasibility, Constraint, Feasibility, LinearProgram, Sense};

use crate::assignment::{FractionalAssignment, IntegralAssignment, LoadProfile};
use crate::instance::Instance;
use crate::rational::{format_rational, int, is_multiple_of, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Outcome of solving the assignment LP at a target `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LstLpResult {
    pub target: Rational,
    pub status: LstStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LstStatus {
    Feasible(FractionalAssignment),
    Infeasible,
}

impl LstLpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, LstStatus::Feasible(_))
    }

    pub fn solution(&self) -> Option<&FractionalAssignment> {
        match &self.status {
            LstStatus::Feasible(x) => Some(x),
            LstStatus::Infeasible => None,
        }
    }
}

/// A violated assignment-LP constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LstViolation {
    #[error("job {job} covered {sum} instead of 1")]
    Coverage { job: usize, sum: String },
    #[error("machine {machine} load {load} exceeds target {target}")]
    Capacity {
        machine: usize,
        load: String,
        target: String,
    },
    #[error("job {job} has weight on machine {machine} although p > T")]
    OversizedJob { machine: usize, job: usize },
}

/// Checks job coverage, machine capacity and the oversized-job rule exactly.
pub fn check_lst_solution(
    instance: &Instance,
    x: &FractionalAssignment,
    target: &Rational,
) -> Result<(), LstViolation> {
    for job in 0..instance.jobs() {
        let mut sum = Rational::zero();
        for (machine, w) in x.support(job) {
            if w.is_positive() && instance.time(*machine, job).is_none_or(|p| p > target) {
                return Err(LstViolation::OversizedJob {
                    machine: *machine,
                    job,
                });
            }
            sum += w;
        }
        if !sum.is_one() {
            return Err(LstViolation::Coverage {
                job,
                sum: format_rational(&sum),
            });
        }
    }
    for (machine, load) in x.loads(instance).iter().enumerate() {
        if load > target {
            return Err(LstViolation::Capacity {
                machine,
                load: format_rational(load),
                target: format_rational(target),
            });
        }
    }
    Ok(())
}

/// Assignment-LP rows at target `T`, plus the variable → `(machine, job)` map.
/// `None` when some job fits on no machine within `T`.
struct LstModel {
    lp: LinearProgram,
    vars: Vec<(usize, usize)>,
}

impl LstModel {
    fn build(instance: &Instance, target: &Rational) -> Option<Self> {
        let mut vars = Vec::new();
        let mut job_rows = Vec::with_capacity(instance.jobs());
        for j in 0..instance.jobs() {
            let row: Vec<usize> = instance
                .eligible(j)
                .iter()
                .filter(|(_, p)| p <= target)
                .map(|(i, _)| {
                    vars.push((*i, j));
                    vars.len() - 1
                })
                .collect();
            if row.is_empty() {
                return None;
            }
            job_rows.push(row);
        }
        let mut lp = LinearProgram::new(vars.len());
        for row in job_rows {
            lp.add(row.into_iter().map(|v| (v, Rational::one())).collect(), Sense::Eq, Rational::one());
        }
        let mut model = LstModel { lp, vars };
        for i in 0..instance.machines() {
            let terms = model.machine_terms(instance, i, |_| true, |p| p.clone());
            if !terms.is_empty() {
                model.lp.add(terms, Sense::Le, target.clone());
            }
        }
        Some(model)
    }

    /// Terms over machine `i`'s variables whose `p` passes `keep`.
    fn machine_terms(
        &self,
        instance: &Instance,
        machine: usize,
        keep: impl Fn(&Rational) -> bool,
        coef: impl Fn(&Rational) -> Rational,
    ) -> Vec<(usize, Rational)> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, (i, _))| *i == machine)
            .filter_map(|(v, (i, j))| {
                let p = instance.time(*i, *j).expect("variable on eligible cell");
                keep(p).then(|| (v, coef(p)))
            })
            .collect()
    }

    /// Adds `Σ_{p > T/2} x ≤ 1`, `Σ_{p > T/3} x ≤ 2` and, when `T < 4γ`,
    /// `Σ x ≤ 3` on every machine. Each is valid for integral schedules of
    /// makespan at most `T` with all times at least `γ`.
    fn add_three_cuts(&mut self, instance: &Instance, target: &Rational, gamma: &Rational) {
        let half = target / int(2);
        let third = target / int(3);
        for i in 0..instance.machines() {
            let cuts = [
                (self.machine_terms(instance, i, |p| *p > half, |_| Rational::one()), 1),
                (self.machine_terms(instance, i, |p| *p > third, |_| Rational::one()), 2),
            ];
            for (terms, cap) in cuts {
                if terms.len() > cap {
                    self.lp.add(terms, Sense::Le, int(cap as i64));
                }
            }
            if *target < gamma * int(4) {
                let terms = self.machine_terms(instance, i, |_| true, |_| Rational::one());
                if terms.len() > 3 {
                    self.lp.add(terms, Sense::Le, int(3));
                }
            }
        }
    }

    fn solve(self, instance: &Instance, target: &Rational) -> LstLpResult {
        let status = match solve_feasibility(&self.lp) {
            Feasibility::Infeasible => LstStatus::Infeasible,
            Feasibility::Feasible(values) => {
                let mut rows = vec![Vec::new(); instance.jobs()];
                for ((i, j), w) in self.vars.iter().zip(values) {
                    rows[*j].push((*i, w));
                }
                let x = FractionalAssignment::new(instance, rows)
                    .expect("simplex point satisfies the coverage rows");
                debug_assert!(check_lst_solution(instance, &x, target).is_ok());
                LstStatus::Feasible(x)
            }
        };
        LstLpResult {
            target: target.clone(),
            status,
        }
    }
}

/// Solves the assignment LP at target `T` exactly.
pub fn lst_lp(instance: &Instance, target: &Rational) -> LstLpResult {
    assert!(target.is_positive(), "target must be positive");
    match LstModel::build(instance, target) {
        Some(model) => model.solve(instance, target),
        None => LstLpResult {
            target: target.clone(),
            status: LstStatus::Infeasible,
        },
    }
}

fn lst_lp_three_cuts(instance: &Instance, target: &Rational, gamma: &Rational) -> LstLpResult {
    match LstModel::build(instance, target) {
        Some(mut model) => {
            model.add_three_cuts(instance, target, gamma);
            model.solve(instance, target)
        }
        None => LstLpResult {
            target: target.clone(),
            status: LstStatus::Infeasible,
        },
    }
}

/// Smallest `t·step` in `[lo, hi]` accepted by `feasible`, assuming `hi` is
/// accepted. Returns the value with the result that accepted it.
pub(crate) fn smallest_feasible_multiple<R>(
    lo: &Rational,
    hi: &Rational,
    step: &Rational,
    mut feasible: impl FnMut(&Rational) -> Option<R>,
) -> (Rational, R) {
    let mut lo_k = (lo / step).ceil().to_integer();
    let mut hi_k = (hi / step).floor().to_integer();
    let at = |k: &num_bigint::BigInt| Rational::from_integer(k.clone()) * step;
    if let Some(r) = feasible(&at(&lo_k)) {
        return (at(&lo_k), r);
    }
    let mut best = feasible(&at(&hi_k)).expect("upper end of the bracket must be feasible");
    // Invariant: lo_k infeasible, hi_k feasible.
    while &hi_k - &lo_k > num_bigint::BigInt::one() {
        let mid: num_bigint::BigInt = (&lo_k + &hi_k) / 2;
        match feasible(&at(&mid)) {
            Some(r) => {
                hi_k = mid;
                best = r;
            }
            None => lo_k = mid,
        }
    }
    (at(&hi_k), best)
}

fn check_granularity(instance: &Instance, g: &Rational) -> Result<(), LpError> {
    if !g.is_positive() {
        return Err(LpError::PreconditionViolated("granularity must be positive".into()));
    }
    if let Some(p) = instance.finite_times().find(|p| !is_multiple_of(p, g)) {
        return Err(LpError::PreconditionViolated(format!(
            "processing time {} is not a multiple of {}",
            format_rational(p),
            format_rational(g)
        )));
    }
    Ok(())
}

/// Lower and upper ends of the target search bracket.
fn bracket(instance: &Instance) -> (Rational, Rational) {
    let lo = (0..instance.jobs())
        .map(|j| instance.min_time(j).clone())
        .max()
        .expect("at least one job");
    (lo, instance.sum_of_min_times())
}

fn lst_search(instance: &Instance, g: &Rational) -> (Rational, FractionalAssignment) {
    let (lo, hi) = bracket(instance);
    smallest_feasible_multiple(&lo, &hi, g, |t| lst_lp(instance, t).solution().cloned())
}

/// Smallest multiple of `g` at which the assignment LP is feasible.
pub fn find_c_lp(instance: &Instance, g: &Rational) -> Result<Rational, LpError> {
    check_granularity(instance, g)?;
    Ok(lst_search(instance, g).0)
}

/// A rounded schedule with the LP target it was derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedSchedule {
    pub assignment: IntegralAssignment,
    pub target: Rational,
    /// The fractional point that was rounded; `None` on single-machine
    /// instances, where no LP is solved.
    pub fractional: Option<FractionalAssignment>,
}

fn single_machine(instance: &Instance) -> Option<RoundedSchedule> {
    (instance.machines() == 1).then(|| {
        let assignment = IntegralAssignment::first_eligible(instance);
        let target = assignment.load(instance, 0);
        RoundedSchedule {
            assignment,
            target,
            fractional: None,
        }
    })
}

/// Binary search on the gcd grid, then rounding: makespan at most `2·C*`.
pub fn approximate_makespan(instance: &Instance) -> RoundedSchedule {
    gcd_granularity_round(instance)
}

/// Rounds the LP solution at `T*`, the smallest feasible multiple of the
/// gcd `g` of all finite times. Every machine load is at most
/// `T* + M − g` for `M` the largest finite time, so the makespan is within
/// `2 − g/M` of optimal.
pub fn gcd_granularity_round(instance: &Instance) -> RoundedSchedule {
    if let Some(s) = single_machine(instance) {
        return s;
    }
    let g = instance.granularity();
    let (target, x) = lst_search(instance, &g);
    RoundedSchedule {
        assignment: shmoys_tardos_round(instance, &x),
        target,
        fractional: Some(x),
    }
}

/// For instances whose finite times all lie in `[γ, 3γ]`: searches the
/// smallest gcd-multiple `T` where the LP with the three cardinality cuts
/// is feasible, then rounds. Makespan at most `(1 + 5/6)·T`.
pub fn three_cut_round(instance: &Instance, gamma: &Rational) -> Result<RoundedSchedule, LpError> {
    if !gamma.is_positive() {
        return Err(LpError::PreconditionViolated("gamma must be positive".into()));
    }
    let upper = gamma * int(3);
    if let Some(p) = instance.finite_times().find(|p| *p < gamma || **p > upper) {
        return Err(LpError::PreconditionViolated(format!(
            "processing time {} outside [{}, {}]",
            format_rational(p),
            format_rational(gamma),
            format_rational(&upper)
        )));
    }
    if let Some(s) = single_machine(instance) {
        return Ok(s);
    }
    let g = instance.granularity();
    let (lo, hi) = bracket(instance);
    let (target, x) = smallest_feasible_multiple(&lo, &hi, &g, |t| {
        lst_lp_three_cuts(instance, t, gamma).solution().cloned()
    });
    Ok(RoundedSchedule {
        assignment: shmoys_tardos_round(instance, &x),
        target,
        fractional: Some(x),
    })
}

/// `11/6`, the three-cut approximation factor.
pub fn three_cut_factor() -> Rational {
    rat(11, 6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::makespan;
    use crate::instance::ProcessingTime;
    use crate::oracle::{brute_force, Objective, DEFAULT_BUDGET};
    use crate::random::{random_instance, RandomSpec};

    fn three_units() -> Instance {
        Instance::from_finite(&vec![vec![int(1); 3]; 2]).unwrap()
    }

    fn max_support_time(instance: &Instance, x: &FractionalAssignment, i: usize) -> Rational {
        (0..instance.jobs())
            .filter(|&j| x.weight(i, j).is_positive())
            .map(|j| instance.time(i, j).unwrap().clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    #[test]
    fn three_unit_jobs() {
        let inst = three_units();
        let r = lst_lp(&inst, &rat(3, 2));
        assert!(r.is_feasible());
        check_lst_solution(&inst, r.solution().unwrap(), &rat(3, 2)).unwrap();
        assert!(!lst_lp(&inst, &int(1)).is_feasible());
        assert_eq!(find_c_lp(&inst, &rat(1, 2)).unwrap(), rat(3, 2));
    }

    #[test]
    fn oversized_entries_excluded() {
        let inst = Instance::from_finite(&[vec![int(3)], vec![int(5)]]).unwrap();
        let r = lst_lp(&inst, &int(3));
        let x = r.solution().unwrap();
        assert_eq!(x.weight(0, 0), int(1));
        assert_eq!(x.weight(1, 0), int(0));
        assert_eq!(find_c_lp(&inst, &int(1)).unwrap(), int(3));
    }

    #[test]
    fn find_c_lp_rejects_bad_granularity() {
        let inst = Instance::from_finite(&[vec![int(3)], vec![int(5)]]).unwrap();
        assert!(find_c_lp(&inst, &int(2)).is_err());
        assert!(find_c_lp(&inst, &int(0)).is_err());
    }

    #[test]
    fn binary_search_matches_linear_scan() {
        for seed in 0..10 {
            let inst = random_instance(&RandomSpec::new(3, 6, 1, 9).density(0.8), seed);
            let c = find_c_lp(&inst, &int(1)).unwrap();
            let scan = (1..)
                .map(int)
                .find(|t| lst_lp(&inst, t).is_feasible())
                .unwrap();
            assert_eq!(c, scan, "seed {seed}");
        }
    }

    #[test]
    fn monotone_in_target() {
        for seed in 0..10 {
            let inst = random_instance(&RandomSpec::new(3, 5, 1, 9).density(0.8), 100 + seed);
            let c = find_c_lp(&inst, &int(1)).unwrap();
            for extra in [rat(1, 3), int(1), int(4)] {
                assert!(lst_lp(&inst, &(&c + &extra)).is_feasible());
            }
            if c > int(1) {
                assert!(!lst_lp(&inst, &(&c - int(1))).is_feasible());
            }
        }
    }

    #[test]
    fn rounding_bound_and_ratio() {
        for seed in 0..50 {
            let inst = random_instance(&RandomSpec::new(5, 12, 1, 20).density(0.5), seed);
            let c = find_c_lp(&inst, &int(1)).unwrap();
            let x = lst_lp(&inst, &c).solution().unwrap().clone();
            let a = shmoys_tardos_round(&inst, &x);
            for i in 0..inst.machines() {
                assert!(a.load(&inst, i) <= &c + max_support_time(&inst, &x, i));
            }
            for j in 0..inst.jobs() {
                assert!(x.weight(a.machine_of(j), j).is_positive());
            }
            assert!(makespan(&inst, &a) <= &c * int(2));
        }
    }

    #[test]
    fn single_machine_is_exact() {
        let inst = Instance::from_finite(&[vec![int(4), int(2), int(7)]]).unwrap();
        let s = approximate_makespan(&inst);
        assert_eq!(makespan(&inst, &s.assignment), int(13));
    }

    #[test]
    fn unit_or_infinite_is_exact() {
        for seed in 0..15 {
            let inst = random_instance(&RandomSpec::new(3, 7, 1, 1).density(0.5), seed);
            let s = gcd_granularity_round(&inst);
            let opt = brute_force(&inst, Objective::Makespan, DEFAULT_BUDGET).unwrap();
            assert_eq!(makespan(&inst, &s.assignment), opt.optimum, "seed {seed}");
        }
    }

    #[test]
    fn gcd_bound_with_two_and_four() {
        for seed in 0..15 {
            let inst = random_instance(&RandomSpec::new(3, 7, 1, 1).values(&[2, 4]).density(0.6), seed);
            let s = gcd_granularity_round(&inst);
            assert!(makespan(&inst, &s.assignment) <= &s.target + int(2));
        }
    }

    #[test]
    fn three_cut_precondition() {
        let inst = Instance::from_finite(&[vec![int(5), int(19)]]).unwrap();
        assert!(matches!(three_cut_round(&inst, &int(6)), Err(LpError::PreconditionViolated(_))));
    }

    #[test]
    fn three_cut_uniform_jobs() {
        let inst = Instance::from_finite(&vec![vec![int(6); 7]; 3]).unwrap();
        let s = three_cut_round(&inst, &int(6)).unwrap();
        // 7 jobs of 6 on 3 machines: optimum 18
        assert_eq!(s.target, int(18));
        assert!(makespan(&inst, &s.assignment) * int(6) <= &s.target * int(11));
    }

    #[test]
    fn three_cut_branch_structure() {
        for seed in 0..20 {
            let inst = random_instance(&RandomSpec::new(4, 8, 1, 1).gamma_band(6).density(0.7), seed);
            let s = three_cut_round(&inst, &int(6)).unwrap();
            assert!(makespan(&inst, &s.assignment) * int(6) <= &s.target * int(11));
            if s.target < int(4 * 6) {
                for i in 0..inst.machines() {
                    let jobs = s.assignment.jobs_on(i);
                    let over = |f: i64| {
                        jobs.iter()
                            .filter(|&&j| inst.time(i, j).unwrap() * int(f) > s.target)
                            .count()
                    };
                    assert!(jobs.len() <= 3 && over(3) <= 2 && over(2) <= 1, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn sparse_rows_and_infinity() {
        let inst = Instance::from_matrix(vec![
            vec![ProcessingTime::Finite(int(2)), ProcessingTime::Infinite],
            vec![ProcessingTime::Infinite, ProcessingTime::Finite(int(3))],
        ])
        .unwrap();
        let s = approximate_makespan(&inst);
        assert_eq!(s.assignment.as_slice(), &[0, 1]);
        assert_eq!(s.target, int(3));
    }
}
