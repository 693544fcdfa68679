//! The instance family `I_k` on which the configuration LP has integrality
//! gap tending to 2, even when every job is eligible on at most two
//! machines.
//!
//! Two `k`-ary trees of height `N − 1`; every leaf `v` gets a partner `v'`
//! joined by `k` parallel edges. Machines are vertices, jobs are edges. An
//! edge job takes time `1/k` on its upper endpoint and `1` on its lower
//! one; `j_big` takes `1` on both roots. Times are stored scaled by `k`,
//! so they are `1` and `k`, the fractional target is `k + 1` and every
//! integral schedule has makespan at least `2k − 1`.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::assignment::{makespan, IntegralAssignment, LoadProfile};
use crate::configlp::{ConfigSolution, Configuration, PartialConfigSolution};
use crate::instance::Instance;
use crate::rational::{format_rational, int, rat, Rational};

/// Largest machine count [`generate_gap_instance`] will materialize.
pub const MATERIALIZE_LIMIT: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("k must be at least 2")]
    KTooSmall,
    #[error("k < 4 needs the small-k flag")]
    SmallKNotAllowed,
    #[error("instance has {0} machines, above the materialization limit")]
    TooLarge(u128),
    #[error("subinstance height must lie in 1..={0}")]
    HeightOutOfRange(usize),
    #[error("certificate weight {weight} at height {height} is negative")]
    CertificateInvalid { height: usize, weight: String },
}

/// `α^{(h)}` for `h = 0..=N`: the coverage a height-`h` subtree gives the job
/// above it. `α^{(0)} = 1/k` (the `k` singletons of a doubled leaf),
/// `α^{(h)} = α^{(h−1)}·k/(k−1)`, so `α^{(1)} = 1/(k−1)`, and `N` is the
/// first height with `α^{(N)} ≥ 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSchedule {
    k: u64,
    values: Vec<Rational>,
}

impl AlphaSchedule {
    pub fn new(k: u64) -> Result<Self, GapError> {
        if k < 2 {
            return Err(GapError::KTooSmall);
        }
        let ki = int(k as i64);
        let step = &ki / int(k as i64 - 1);
        let mut values = vec![Rational::one() / &ki];
        loop {
            let next = values.last().expect("nonempty") * &step;
            values.push(next);
            if values.last().expect("nonempty") >= &rat(1, 2) {
                break;
            }
        }
        Ok(AlphaSchedule { k, values })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `N`, the height of each tree including the doubled leaves.
    pub fn height(&self) -> usize {
        self.values.len() - 1
    }

    pub fn alpha(&self, h: usize) -> &Rational {
        &self.values[h]
    }
}

/// Machine and job counts of `I_k` with tree height `N`.
pub fn gap_counts(k: u64, height: usize) -> (u128, u128) {
    let k = k as u128;
    let n = height as u32;
    let tree = (k.pow(n) - 1) / (k - 1);
    let machines = 2 * (tree + k.pow(n - 1));
    let jobs = 2 * (tree - 1 + k.pow(n)) + 1;
    (machines, jobs)
}

/// One machine of a gap instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMachine {
    /// 0 for a doubled leaf `v'`, `N` for a root.
    pub height: usize,
    /// Jobs to the parent (time `k` here); `k` parallel jobs on a doubled leaf.
    pub up_jobs: Vec<usize>,
    /// Jobs to the children (time `1` here).
    pub down_jobs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapInstance {
    pub k: u64,
    pub alpha: AlphaSchedule,
    pub instance: Instance,
    pub machines: Vec<GapMachine>,
    /// `j_big` for the full family; the job above the root for a subinstance.
    pub top_job: usize,
    pub roots: Vec<usize>,
}

impl GapInstance {
    /// Scaled fractional target `k + 1`.
    pub fn target(&self) -> Rational {
        int(self.k as i64 + 1)
    }

    /// Scaled integral lower bound `2k − 1`.
    pub fn lower_bound(&self) -> Rational {
        int(2 * self.k as i64 - 1)
    }
}

struct Builder {
    k: u64,
    machines: Vec<GapMachine>,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl Builder {
    fn job(&mut self, entries: Vec<(usize, Rational)>) -> usize {
        self.rows.push(entries);
        self.rows.len() - 1
    }

    fn machine(&mut self, height: usize) -> usize {
        self.machines.push(GapMachine {
            height,
            up_jobs: Vec::new(),
            down_jobs: Vec::new(),
        });
        self.machines.len() - 1
    }

    /// Grows a tree below `root` breadth first.
    fn grow(&mut self, root: usize) {
        let k = self.k as usize;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let height = self.machines[u].height;
            if height == 0 {
                continue;
            }
            let mut child = usize::MAX;
            for _ in 0..k {
                if height > 1 || child == usize::MAX {
                    child = self.machine(height - 1);
                    queue.push_back(child);
                }
                let j = self.job(vec![(u, int(1)), (child, int(self.k as i64))]);
                self.machines[u].down_jobs.push(j);
                self.machines[child].up_jobs.push(j);
            }
        }
    }

    fn finish(mut self, alpha: AlphaSchedule, top_job: usize, roots: Vec<usize>) -> GapInstance {
        for row in &mut self.rows {
            row.sort_by_key(|(i, _)| *i);
        }
        let instance = Instance::new(self.machines.len(), self.rows).expect("gap rows are valid");
        GapInstance {
            k: self.k,
            alpha,
            instance,
            machines: self.machines,
            top_job,
            roots,
        }
    }
}

/// Builds `I_k`. `k ∈ {2, 3}` gives `N = 1` and needs `allow_small_k`.
pub fn generate_gap_instance(k: u64, allow_small_k: bool) -> Result<GapInstance, GapError> {
    let alpha = AlphaSchedule::new(k)?;
    if k < 4 && !allow_small_k {
        return Err(GapError::SmallKNotAllowed);
    }
    let height = alpha.height();
    let (machines, jobs) = gap_counts(k, height);
    if machines > MATERIALIZE_LIMIT {
        return Err(GapError::TooLarge(machines));
    }
    let mut b = Builder {
        k,
        machines: Vec::with_capacity(machines as usize),
        rows: Vec::with_capacity(jobs as usize),
    };
    let big = b.job(Vec::new());
    let mut roots = Vec::new();
    for _ in 0..2 {
        let r = b.machine(height);
        b.machines[r].up_jobs.push(big);
        b.rows[big].push((r, int(k as i64)));
        b.grow(r);
        roots.push(r);
    }
    debug_assert_eq!((b.machines.len() as u128, b.rows.len() as u128), (machines, jobs));
    Ok(b.finish(alpha, big, roots))
}

/// The subtree below one height-`h` vertex together with the job above it,
/// which here is eligible only on the subtree root. Needs `1 ≤ h ≤ N`.
pub fn generate_subinstance(k: u64, h: usize) -> Result<GapInstance, GapError> {
    let alpha = AlphaSchedule::new(k)?;
    if h == 0 || h > alpha.height() {
        return Err(GapError::HeightOutOfRange(alpha.height()));
    }
    let mut b = Builder {
        k,
        machines: Vec::new(),
        rows: Vec::new(),
    };
    let r = b.machine(h);
    let top = b.job(vec![(r, int(k as i64))]);
    b.machines[r].up_jobs.push(top);
    b.grow(r);
    Ok(b.finish(alpha, top, vec![r]))
}

/// Configuration weights of one machine class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWeights {
    /// Each `{up, child ℓ}`.
    pub big: Rational,
    /// All children together.
    pub small: Rational,
    /// Each singleton: `{up job ℓ}` on a doubled leaf, `{child ℓ}` on a root.
    pub single: Rational,
}

/// Per-height weights. Below the top every height-`h` machine puts
/// `α^{(h−1)}/(k−1)` on each `{up, child ℓ}`, which completes every child
/// job and covers the up job `α^{(h)}`. With `clamp_root`, the roots put
/// `1/(2k)` on each `{j_big, child ℓ}` so `j_big` is covered exactly `1/2`
/// per side, and the children are completed by singletons.
pub fn certificate_weights(alpha: &AlphaSchedule, top: usize, clamp_root: bool) -> Vec<ClassWeights> {
    let k = int(alpha.k() as i64);
    let km1 = &k - int(1);
    (0..=top)
        .map(|h| {
            if h == 0 {
                return ClassWeights {
                    big: Rational::zero(),
                    small: Rational::zero(),
                    single: Rational::one() / &k,
                };
            }
            let below = alpha.alpha(h - 1);
            if h == top && clamp_root {
                let big = Rational::one() / (int(2) * &k);
                let single = (below + &big - rat(1, 2)) / &km1;
                let small = rat(1, 2) - &k * &single;
                ClassWeights { big, small, single }
            } else {
                let big = below / &km1;
                ClassWeights {
                    small: Rational::one() - &k * &big,
                    big,
                    single: Rational::zero(),
                }
            }
        })
        .collect()
}

fn check_nonnegative(weights: &[ClassWeights]) -> Result<(), GapError> {
    for (height, w) in weights.iter().enumerate() {
        for v in [&w.big, &w.small, &w.single] {
            if v.is_negative() {
                return Err(GapError::CertificateInvalid {
                    height,
                    weight: format_rational(v),
                });
            }
        }
    }
    Ok(())
}

fn machine_configurations(
    i: usize,
    m: &GapMachine,
    w: &ClassWeights,
) -> Vec<(Configuration, Rational)> {
    let mut out = Vec::new();
    if m.height == 0 {
        for &j in &m.up_jobs {
            out.push((Configuration::new(i, vec![j]), w.single.clone()));
        }
        return out;
    }
    let up = m.up_jobs[0];
    for &c in &m.down_jobs {
        out.push((Configuration::new(i, vec![up, c]), w.big.clone()));
        out.push((Configuration::new(i, vec![c]), w.single.clone()));
    }
    out.push((Configuration::new(i, m.down_jobs.clone()), w.small.clone()));
    out
}

fn expand(g: &GapInstance, weights: &[ClassWeights]) -> ConfigSolution {
    ConfigSolution::new(
        g.target(),
        g.machines
            .iter()
            .enumerate()
            .flat_map(|(i, m)| machine_configurations(i, m, &weights[m.height])),
    )
}

/// The fractional solution of `I_k` at scaled target `k + 1`.
pub fn build_certificate(g: &GapInstance) -> Result<ConfigSolution, GapError> {
    let weights = certificate_weights(&g.alpha, g.alpha.height(), true);
    check_nonnegative(&weights)?;
    Ok(expand(g, &weights))
}

/// For a subinstance rooted at height `h`: the solution that covers the
/// job above the root exactly `α^{(h)}` and every other job fully.
pub fn build_partial_certificate(g: &GapInstance) -> Result<PartialConfigSolution, GapError> {
    let h = g.machines[g.roots[0]].height;
    let weights = certificate_weights(&g.alpha, h, false);
    check_nonnegative(&weights)?;
    Ok(PartialConfigSolution {
        solution: expand(g, &weights),
        coverage: BTreeMap::from([(g.top_job, g.alpha.alpha(h).clone())]),
    })
}

/// Checks the certificate of `I_k` one height class at a time, without
/// materializing the instance. Every machine of a class carries the same
/// configurations, and every edge between heights `h` and `h − 1` is
/// covered by the same two classes, so these checks equal the per-machine
/// and per-job checks of the full solution.
pub fn verify_certificate_by_height(
    k: u64,
    weights: &[ClassWeights],
) -> Result<(), String> {
    let kk = int(k as i64);
    let target = &kk + int(1);
    let top = weights.len() - 1;
    for (h, w) in weights.iter().enumerate() {
        let (configs, sum): (Vec<(Rational, &Rational)>, Rational) = if h == 0 {
            (vec![(kk.clone(), &w.single)], &kk * &w.single)
        } else {
            (
                vec![(&kk + int(1), &w.big), (int(1), &w.single), (kk.clone(), &w.small)],
                &kk * &w.big + &kk * &w.single + &w.small,
            )
        };
        for (load, weight) in configs {
            if weight.is_negative() {
                return Err(format!("height {h}: negative weight {}", format_rational(weight)));
            }
            if !weight.is_zero() && load > target {
                return Err(format!("height {h}: load {} above {}", format_rational(&load), format_rational(&target)));
            }
        }
        if !sum.is_one() {
            return Err(format!("height {h}: machine weights sum to {}", format_rational(&sum)));
        }
        if h == 0 {
            continue;
        }
        // A job between height h and h − 1: one big and one singleton plus
        // the small configuration above, the child's share below.
        let child = &weights[h - 1];
        let below = if h == 1 { child.single.clone() } else { &kk * &child.big };
        let cover = below + &w.big + &w.single + &w.small;
        if !cover.is_one() {
            return Err(format!("edge below height {h}: covered {}", format_rational(&cover)));
        }
    }
    let big = int(2) * &kk * &weights[top].big;
    if !big.is_one() {
        return Err(format!("j_big covered {}", format_rational(&big)));
    }
    Ok(())
}

/// Checks an integral schedule of a gap instance against the `2k − 1` bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("makespan {makespan} below the bound {bound}")]
pub struct CounterexampleClaim {
    pub makespan: String,
    pub bound: String,
    pub loads: Vec<String>,
}

pub fn integral_lower_bound_check(
    g: &GapInstance,
    a: &IntegralAssignment,
) -> Result<(), CounterexampleClaim> {
    let cmax = makespan(&g.instance, a);
    if cmax >= g.lower_bound() {
        return Ok(());
    }
    Err(CounterexampleClaim {
        makespan: format_rational(&cmax),
        bound: format_rational(&g.lower_bound()),
        loads: a.loads(&g.instance).iter().map(format_rational).collect(),
    })
}

/// `j_big` on the first root and every edge job on its lower endpoint.
pub fn proof_chain_assignment(g: &GapInstance) -> IntegralAssignment {
    let mut machine_of = vec![g.roots[0]; g.instance.jobs()];
    for (i, m) in g.machines.iter().enumerate() {
        if m.height < g.alpha.height() {
            for &j in &m.up_jobs {
                machine_of[j] = i;
            }
        }
    }
    IntegralAssignment::new(&g.instance, machine_of).expect("lower endpoints are eligible")
}

/// Whether `I_k` (tree height `height`) has a schedule with makespan at most
/// `limit` (scaled). All subtrees of one height are isomorphic, so one
/// table per height decides it: `with_up[h]` when the job above a height-`h`
/// vertex sits on it, `without_up[h]` otherwise.
fn schedulable(k: u64, height: usize, limit: u64) -> bool {
    let mut with_up = vec![false; height + 1];
    let mut without_up = vec![false; height + 1];
    // A doubled leaf holds `r` of its parallel jobs at `k` each; the rest
    // go up at `1` each, so it is handled inside height 1.
    for h in 1..=height {
        let fits = |base: u64| {
            (0..=k).any(|d| {
                // `d` children jobs stay on this machine.
                if base + d > limit {
                    return false;
                }
                let rest = k - d;
                if h == 1 {
                    rest * k <= limit
                } else {
                    (d == 0 || without_up[h - 1]) && (rest == 0 || with_up[h - 1])
                }
            })
        };
        let (a, b) = (fits(k), fits(0));
        with_up[h] = a;
        without_up[h] = b;
    }
    with_up[height] && without_up[height]
}

/// Optimal integral makespan of `I_k`, scaled.
pub fn integral_optimum(k: u64) -> Result<u64, GapError> {
    let height = AlphaSchedule::new(k)?.height();
    Ok((1..).find(|&l| schedulable(k, height, l)).expect("k·k is always enough"))
}

/// One row of the gap table, scaled by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    pub k: u64,
    pub t_frac: Rational,
    pub lb_int: Rational,
    pub ratio: Rational,
}

/// For each `k`: checks the fractional certificate by height classes,
/// computes the integral optimum, and reports their ratio.
pub fn gap_report(k_values: &[u64]) -> Result<Vec<GapRow>, GapError> {
    k_values
        .iter()
        .map(|&k| {
            let alpha = AlphaSchedule::new(k)?;
            let weights = certificate_weights(&alpha, alpha.height(), true);
            check_nonnegative(&weights)?;
            verify_certificate_by_height(k, &weights).expect("certificate is valid by construction");
            let t_frac = int(k as i64 + 1);
            let lb_int = int(integral_optimum(k)? as i64);
            Ok(GapRow {
                k,
                ratio: &lb_int / &t_frac,
                t_frac,
                lb_int,
            })
        })
        .collect()
}

pub fn format_gap_report(rows: &[GapRow]) -> String {
    let mut out = String::from("k\tT_frac\tLB_int\tratio\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.k,
            format_rational(&r.t_frac),
            format_rational(&r.lb_int),
            format_rational(&r.ratio)
        ));
    }
    out
}
