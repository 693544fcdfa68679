//! Half-integral MaxMin solutions from the assignment LP with truncated
//! times `p' = min(p, T)`.

use num_traits::{One, Signed};

use super::graph::PairingGraph;
use super::{largest_accepted_multiple, search_ceiling};
use crate::assignment::{FractionalAssignment, HalfIntegralAssignment, IntegralAssignment, JobShare};
use crate::instance::Instance;
use crate::lp::{fill_slots, solve_feasibility, sorted_support, Feasibility, LinearProgram, Sense};
use crate::matching::{cover_required_right, max_matching};
use crate::rational::{rat, Rational};

/// A half-integral assignment together with the LP target it came from.
/// No assignment has minimum load above `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfResult {
    pub assignment: HalfIntegralAssignment,
    pub target: Rational,
}

fn truncated(p: &Rational, target: &Rational) -> Rational {
    if p < target {
        p.clone()
    } else {
        target.clone()
    }
}

/// Solves `Σ_i x_{i,j} = 1`, `Σ_j min(p_{i,j}, T)·x_{i,j} ≥ T` exactly.
/// Feasibility is monotone in `T` and holds at the integral optimum.
pub fn maxmin_lp(instance: &Instance, target: &Rational) -> Option<FractionalAssignment> {
    assert!(target.is_positive(), "target must be positive");
    let mut cells = Vec::new();
    let mut lp_rows = Vec::new();
    for j in 0..instance.jobs() {
        let row: Vec<(usize, Rational)> = instance
            .eligible(j)
            .iter()
            .map(|(i, _)| {
                cells.push((*i, j));
                (cells.len() - 1, Rational::one())
            })
            .collect();
        lp_rows.push(row);
    }
    let mut lp = LinearProgram::new(cells.len());
    for row in lp_rows {
        lp.add(row, Sense::Eq, Rational::one());
    }
    let mut machine_terms = vec![Vec::new(); instance.machines()];
    for (v, &(i, j)) in cells.iter().enumerate() {
        let p = instance.time(i, j).expect("eligible cell");
        machine_terms[i].push((v, truncated(p, target)));
    }
    for terms in machine_terms {
        if terms.is_empty() {
            return None;
        }
        lp.add(terms, Sense::Ge, target.clone());
    }
    match solve_feasibility(&lp) {
        Feasibility::Infeasible => None,
        Feasibility::Feasible(values) => {
            let mut rows = vec![Vec::new(); instance.jobs()];
            for ((i, j), w) in cells.into_iter().zip(values) {
                rows[j].push((i, w));
            }
            Some(FractionalAssignment::new(instance, rows).expect("LP rows cover every job"))
        }
    }
}

/// Largest multiple of the gcd at which [`maxmin_lp`] is feasible.
fn lp_search(instance: &Instance) -> (Rational, Option<FractionalAssignment>) {
    let g = instance.granularity();
    largest_accepted_multiple(search_ceiling(instance, &g), &g, |t| maxmin_lp(instance, t))
}

/// Rounds `x` to half-integral. Each job becomes two copies of mass `1/2`;
/// each machine's support, sorted by `p'` descending, is cut into slots of
/// mass `1/2`. A matching of copies to slots that fills every full slot
/// exists, and reading it off costs machine `i` at most half its largest
/// supported `p'`.
fn half_round(instance: &Instance, x: &FractionalAssignment, target: &Rational) -> HalfIntegralAssignment {
    if let Some(a) = x.as_integral() {
        return HalfIntegralAssignment::from(&a);
    }
    let half = rat(1, 2);
    let mut slots = Vec::new();
    for (i, support) in x.by_machine(instance.machines()).iter().enumerate() {
        let items = sorted_support(support, |j| truncated(instance.time(i, j).expect("support"), target));
        slots.extend(fill_slots(i, &items, &half));
    }
    let required: Vec<bool> = slots
        .iter()
        .map(|s| s.jobs.iter().map(|(_, w)| w).sum::<Rational>() == half)
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * instance.jobs()];
    for (s, slot) in slots.iter().enumerate() {
        for (j, _) in &slot.jobs {
            for copy in [2 * j, 2 * j + 1] {
                if adj[copy].last() != Some(&s) {
                    adj[copy].push(s);
                }
            }
        }
    }
    let mut matched = max_matching(&adj, slots.len());
    assert!(matched.iter().all(Option::is_some), "fractional matching saturates every copy");
    assert!(
        cover_required_right(&adj, &mut matched, &required),
        "full slots can be covered"
    );
    let machine = |copy: usize| slots[matched[copy].expect("matched")].machine;
    let shares = (0..instance.jobs())
        .map(|j| JobShare::Split(machine(2 * j), machine(2 * j + 1)))
        .collect();
    HalfIntegralAssignment::new(instance, shares).expect("slots lie in the support")
}

fn half_with_target(instance: &Instance) -> HalfResult {
    let (target, x) = lp_search(instance);
    let assignment = match x {
        Some(x) => half_round(instance, &x, &target),
        None => HalfIntegralAssignment::from(&IntegralAssignment::first_eligible(instance)),
    };
    HalfResult { assignment, target }
}

/// Half-integral solution whose minimum load is at least half the optimum.
pub fn half_integral_maxmin(instance: &Instance) -> HalfResult {
    half_with_target(instance)
}

/// Half-integral solution with at most `⌊m/2⌋` split jobs and minimum load
/// at least a quarter of the optimum.
///
/// Starting from [`half_integral_maxmin`], each machine lists its split
/// jobs by `p'` descending. The head stays unpaired and the rest form
/// pairs `(2, 3), (4, 5), …`. Together with the edges joining the two
/// halves of every split job this is a union of paths and even cycles. A
/// proper 2-coloring puts every split job on one machine and gives each
/// machine one job of each pair. Paths that end in two heads keep the job
/// at one end split; otherwise the heads are colored onto their machine.
/// Each machine then keeps at least a quarter of its split load.
pub fn half_integral_sparse(instance: &Instance) -> HalfResult {
    let HalfResult { assignment, target } = half_with_target(instance);
    let key = |i: usize, j: usize| truncated(instance.time(i, j).expect("eligible"), &target);
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); instance.machines()];
    for (j, share) in assignment.shares().iter().enumerate() {
        if let JobShare::Split(a, b) = *share {
            lists[a].push(j);
            lists[b].push(j);
        }
    }
    for (i, list) in lists.iter_mut().enumerate() {
        list.sort_by(|&x, &y| key(i, y).cmp(&key(i, x)).then(x.cmp(&y)));
    }
    let graph = PairingGraph::new(&lists, 1);
    let is_head = |v: usize| {
        let (i, j) = graph.vertices()[v];
        lists[i][0] == j
    };
    let mut black = vec![false; graph.vertices().len()];
    let mut keep_split = Vec::new();
    for comp in graph.components() {
        let path = &comp.vertices;
        let (first, last) = (path[0], path[path.len() - 1]);
        // Color along the walk, alternating, with the chosen end black.
        let mut paint = |order: &mut dyn Iterator<Item = &usize>| {
            for (k, &v) in order.enumerate() {
                black[v] = k % 2 == 0;
            }
        };
        if !comp.cycle && is_head(first) && is_head(last) {
            keep_split.push(graph.vertices()[first].1);
            paint(&mut path.iter().rev());
        } else if !comp.cycle && is_head(last) {
            paint(&mut path.iter().rev());
        } else {
            paint(&mut path.iter());
        }
    }
    let mut shares = assignment.shares().to_vec();
    for (v, &(i, j)) in graph.vertices().iter().enumerate() {
        if black[v] && !keep_split.contains(&j) {
            shares[j] = JobShare::Whole(i);
        }
    }
    let assignment = HalfIntegralAssignment::new(instance, shares).expect("machines come from the split pair");
    HalfResult { assignment, target }
}
