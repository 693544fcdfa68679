//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schedlab::configlp::{
    config_lp_feasible, price_column, project_to_assignment, verify_config_solution, ConfigSolution, Mode,
};
use schedlab::gaplab::{
    build_certificate, certificate_weights, gap_counts, gap_report, generate_gap_instance, integral_optimum,
    verify_certificate_by_height, AlphaSchedule, MATERIALIZE_LIMIT,
};
use schedlab::lp::{
    approximate_makespan, check_lst_solution, find_c_lp, gcd_granularity_round, lst_lp, shmoys_tardos_round,
    three_cut_factor, three_cut_round,
};
use schedlab::maxmin::{decide_t, half_integral_maxmin, half_integral_sparse, maxmin_balance, Decision};
use schedlab::oracle::{brute_force, Objective, DEFAULT_BUDGET};
use schedlab::random::{random_instance, RandomSpec};
use schedlab::rational::{format_rational, int, rat, Rational};
use schedlab::{makespan, min_load, Instance, LoadProfile};

type Certificates = Vec<(Instance, ConfigSolution)>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn makespan_opt(inst: &Instance) -> Rational {
    brute_force(inst, Objective::Makespan, DEFAULT_BUDGET).expect("oracle within budget").optimum
}

fn maxmin_opt(inst: &Instance) -> Rational {
    brute_force(inst, Objective::MaxMin, DEFAULT_BUDGET).expect("oracle within budget").optimum
}

fn sandwich(certs: &mut Certificates) -> Result<String, String> {
    let inst = common::three_unit_jobs();
    let lst = lst_lp(&inst, &rat(3, 2));
    let x = lst.solution().ok_or("assignment LP infeasible at 3/2")?;
    check_lst_solution(&inst, x, &rat(3, 2)).map_err(|e| e.to_string())?;
    for t in [rat(3, 2), rat(7, 4), rat(19, 10)] {
        let out = config_lp_feasible(&inst, &t, &Mode::Exact).map_err(|e| e.to_string())?;
        ensure(!out.is_feasible(), || format!("configuration LP feasible at {}", format_rational(&t)))?;
        ensure(!common::config_lp_by_enumeration(&inst, &t), || "enumeration disagrees".into())?;
    }
    let out = config_lp_feasible(&inst, &int(2), &Mode::Exact).map_err(|e| e.to_string())?;
    let y = out.solution().ok_or("configuration LP infeasible at 2")?;
    verify_config_solution(&inst, y, &int(2)).map_err(|e| e.to_string())?;
    certs.push((inst, y.clone()));
    Ok("LST feasible at 3/2; configuration LP infeasible at 3/2, 7/4, 19/10, feasible at 2".into())
}

fn gap(certs: &mut Certificates) -> Result<String, String> {
    let mut notes = Vec::new();
    for k in [3u64, 4, 6, 9] {
        let alpha = AlphaSchedule::new(k).map_err(|e| e.to_string())?;
        let (machines, _) = gap_counts(k, alpha.height());
        let target = int(k as i64 + 1);
        if machines <= MATERIALIZE_LIMIT {
            let g = generate_gap_instance(k, k < 4).map_err(|e| e.to_string())?;
            let y = build_certificate(&g).map_err(|e| e.to_string())?;
            verify_config_solution(&g.instance, &y, &target).map_err(|e| format!("k = {k}: {e}"))?;
            notes.push(format!("k={k}: {machines} machines verified"));
            if k == 3 {
                ensure(g.instance.machines() == 4 && g.instance.jobs() == 7, || "k = 3 size".into())?;
                let opt = makespan_opt(&g.instance);
                ensure(opt >= int(5), || format!("k = 3 optimum {}", format_rational(&opt)))?;
                let (plain, _) = common::enumerate_optima(&g.instance);
                ensure(plain == opt, || "oracle and enumeration disagree".into())?;
            }
            certs.push((g.instance, y));
        } else {
            let w = certificate_weights(&alpha, alpha.height(), true);
            verify_certificate_by_height(k, &w).map_err(|e| format!("k = {k}: {e}"))?;
            notes.push(format!("k={k}: {machines} machines verified by height class"));
        }
    }
    let rows = gap_report(&[3, 4, 6, 9]).map_err(|e| e.to_string())?;
    for r in &rows {
        let k = r.k as i64;
        ensure(r.ratio == rat(2 * k - 1, k + 1), || format!("k = {k}: ratio {}", format_rational(&r.ratio)))?;
        ensure(r.lb_int == int(integral_optimum(r.k).unwrap() as i64), || "LB mismatch".into())?;
    }
    let last = &rows[3].ratio;
    ensure(*last == rat(17, 10) && *last >= rat(17, 10), || "k = 9 ratio".into())?;
    Ok(notes.join("; "))
}

fn shmoys_tardos() -> Result<String, String> {
    for seed in 0..200u64 {
        let m = 2 + (seed % 4) as usize;
        let n = 6 + (seed % 7) as usize;
        let inst = random_instance(&RandomSpec::new(m, n, 1, 20).density(0.7), seed);
        let s = approximate_makespan(&inst);
        let x = s.fractional.as_ref().ok_or("no fractional point")?;
        check_lst_solution(&inst, x, &s.target).map_err(|e| format!("seed {seed}: {e}"))?;
        let a = shmoys_tardos_round(&inst, x);
        let loads = a.loads(&inst);
        for (i, load) in loads.iter().enumerate() {
            let top = (0..n)
                .filter(|&j| x.weight(i, j).is_positive())
                .map(|j| inst.time(i, j).unwrap().clone())
                .max()
                .unwrap_or_else(Rational::zero);
            ensure(*load <= &s.target + top, || format!("seed {seed}: machine {i} over T + p_max"))?;
        }
        let opt = makespan_opt(&inst);
        ensure(s.target <= opt, || format!("seed {seed}: LP target above optimum"))?;
        ensure(makespan(&inst, &s.assignment) <= &opt * int(2), || format!("seed {seed}: ratio above 2"))?;
    }
    Ok("200 instances, 0 violations".into())
}

fn gcd_bound() -> Result<String, String> {
    for seed in 0..100u64 {
        let m = 2 + (seed % 3) as usize;
        let n = 4 + (seed % 6) as usize;
        let inst = random_instance(&RandomSpec::new(m, n, 1, 1).values(&[3, 6, 9]).density(0.7), 1000 + seed);
        let s = gcd_granularity_round(&inst);
        let g = inst.granularity();
        let big = inst.max_time();
        let cap = &s.target + &big - &g;
        for (i, load) in s.assignment.loads(&inst).iter().enumerate() {
            ensure(*load <= cap, || format!("seed {seed}: machine {i} above T* + M - g"))?;
        }
        let opt = makespan_opt(&inst);
        let cmax = makespan(&inst, &s.assignment);
        ensure(cmax <= &opt * rat(5, 3), || format!("seed {seed}: above 5/3 OPT"))?;
        ensure(cmax <= &opt * (int(2) - &g / &big), || format!("seed {seed}: above (2 - g/M) OPT"))?;
    }
    Ok("100 instances, 0 violations".into())
}

fn three_cut() -> Result<String, String> {
    let gamma = int(6);
    let mut structural = 0;
    for seed in 0..100u64 {
        let m = 2 + (seed % 3) as usize;
        let n = (3 + (seed % 7) as usize).min(3 * m);
        let inst = random_instance(&RandomSpec::new(m, n, 1, 1).gamma_band(6).density(0.7), 2000 + seed);
        let s = three_cut_round(&inst, &gamma).map_err(|e| e.to_string())?;
        let opt = makespan_opt(&inst);
        ensure(s.target <= opt, || format!("seed {seed}: LP target above optimum"))?;
        let cmax = makespan(&inst, &s.assignment);
        ensure(cmax <= &opt * three_cut_factor(), || format!("seed {seed}: above 11/6 OPT"))?;
        if s.target < &gamma * int(4) {
            structural += 1;
            for i in 0..m {
                let jobs = s.assignment.jobs_on(i);
                let over = |f: i64| jobs.iter().filter(|&&j| inst.time(i, j).unwrap() * int(f) > s.target).count();
                ensure(jobs.len() <= 3 && over(3) <= 2 && over(2) <= 1, || {
                    format!("seed {seed}: machine {i} breaks the cardinality pattern")
                })?;
            }
        }
    }
    Ok(format!("100 instances, 0 violations; cardinality pattern checked on {structural} with T < 4γ"))
}

fn balancing() -> Result<String, String> {
    let mut decisions = 0;
    for seed in 0..300u64 {
        let m = 2 + (seed % 4) as usize;
        let n = 3 + (seed % 8) as usize;
        let inst = random_instance(&RandomSpec::new(m, n, 1, 20).density(0.8).balancing(), 3000 + seed);
        let opt = maxmin_opt(&inst);
        let r = maxmin_balance(&inst).map_err(|e| e.to_string())?;
        let value = min_load(&inst, &r.assignment);
        ensure(&value * int(2) >= opt, || format!("seed {seed}: value below OPT/2"))?;
        ensure(r.target >= opt, || format!("seed {seed}: search target below OPT"))?;
        let g = inst.granularity();
        let mut targets = vec![opt.clone(), &opt + &g, r.target.clone(), &r.target + &g, &opt * rat(3, 2)];
        targets.extend((1..=4).map(|k| &opt * rat(k, 4)));
        for t in targets.into_iter().filter(|t| t.is_positive()) {
            decisions += 1;
            match decide_t(&inst, &t).map_err(|e| e.to_string())? {
                Decision::NoSolutionAtT => {
                    ensure(opt < t, || format!("seed {seed}: rejected T = {} although OPT = {}", t, opt))?;
                }
                Decision::Solution(run) => {
                    ensure(run.graph.two_coloring().is_some(), || format!("seed {seed}: odd cycle"))?;
                    let loads = run.assignment.loads(&inst);
                    for (i, load) in loads.iter().enumerate() {
                        let floor = run.state.sum_a_prime(i) / int(2) + run.state.sum_b(i);
                        ensure(*load >= floor, || format!("seed {seed}: machine {i} below p(A')/2 + p(B)"))?;
                    }
                    let v = min_load(&inst, &run.assignment);
                    ensure(&v * int(2) >= t, || format!("seed {seed}: solution below T/2"))?;
                }
            }
        }
    }
    Ok(format!("300 instances, {decisions} decisions, 0 violations; {}", scaling_report()))
}

/// Wall time of `maxmin_balance` as the input doubles. Reported, not gated.
fn scaling_report() -> String {
    let mut times = Vec::new();
    for n in [250usize, 500, 1000, 2000] {
        let inst = random_instance(&RandomSpec::new(n / 5, n, 1, 50).density(0.5).balancing(), 7);
        let start = Instant::now();
        maxmin_balance(&inst).expect("balancing instance");
        times.push(start.elapsed().as_secs_f64());
    }
    let ratios: Vec<String> = times.windows(2).map(|w| format!("{:.2}", w[1] / w[0].max(1e-9))).collect();
    format!("scaling per doubling {}", ratios.join("/"))
}

fn half_integral() -> Result<String, String> {
    for seed in 0..150u64 {
        let m = 2 + (seed % 4) as usize;
        let n = 3 + (seed % 8) as usize;
        let inst = random_instance(&RandomSpec::new(m, n, 1, 20).density(0.7), 4000 + seed);
        let opt = maxmin_opt(&inst);
        let h = half_integral_maxmin(&inst);
        ensure(min_load(&inst, &h.assignment) * int(2) >= opt, || format!("seed {seed}: half below OPT/2"))?;
        let s = half_integral_sparse(&inst);
        ensure(min_load(&inst, &s.assignment) * int(4) >= opt, || format!("seed {seed}: sparse below OPT/4"))?;
        ensure(s.assignment.split_count() <= m / 2, || format!("seed {seed}: too many split jobs"))?;
    }
    Ok("150 instances, 0 violations".into())
}

fn column_generation(certs: &mut Certificates) -> Result<String, String> {
    let mut feasible = 0;
    for seed in 0..50u64 {
        let m = 2 + (seed % 3) as usize;
        let n = 4 + (seed % 7) as usize;
        let inst = random_instance(&RandomSpec::new(m, n, 1, 12).density(0.7), 5000 + seed);
        let opt = makespan_opt(&inst);
        let c_lp = find_c_lp(&inst, &inst.granularity()).map_err(|e| e.to_string())?;
        for t in [c_lp.clone(), (&c_lp + &opt) / int(2), opt.clone()] {
            let got = config_lp_feasible(&inst, &t, &Mode::Exact).map_err(|e| e.to_string())?;
            let want = common::config_lp_by_enumeration(&inst, &t);
            ensure(got.is_feasible() == want, || {
                format!("seed {seed}, T = {}: column generation says {}", format_rational(&t), got.is_feasible())
            })?;
            if let Some(y) = got.solution() {
                verify_config_solution(&inst, y, &t).map_err(|e| format!("seed {seed}: {e}"))?;
                certs.push((inst.clone(), y.clone()));
                feasible += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6000);
    for call in 0..1000u64 {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=12);
        let inst = random_instance(&RandomSpec::new(m, n, 1, 15).density(0.8), 7000 + call);
        let machine = rng.gen_range(0..m);
        let u: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-6..=15), rng.gen_range(1..=4))).collect();
        let v = rat(rng.gen_range(-40..=4), rng.gen_range(1..=3));
        let t = int(rng.gen_range(1..=40));
        let best = common::best_configuration_value(&inst, machine, &u, &t);
        let got = price_column(&inst, machine, &u, &v, &t).map_err(|e| e.to_string())?;
        match got {
            None => ensure(&best + &v <= Rational::zero(), || format!("call {call}: missed a column"))?,
            Some(c) => {
                let value: Rational = c.jobs().iter().map(|&j| &u[j]).sum();
                let load = c.load(&inst).ok_or_else(|| format!("call {call}: ineligible job"))?;
                ensure(c.machine() == machine && load <= t, || format!("call {call}: not a configuration"))?;
                ensure(value == best && &best + &v > Rational::zero(), || format!("call {call}: value differs"))?;
            }
        }
    }
    Ok(format!("150 verdicts agree ({feasible} feasible); 1000 pricing calls agree"))
}

fn projection(certs: &Certificates) -> Result<String, String> {
    for (k, (inst, y)) in certs.iter().enumerate() {
        let x = project_to_assignment(inst, y).map_err(|e| format!("certificate {k}: {e}"))?;
        check_lst_solution(inst, &x, y.target()).map_err(|e| format!("certificate {k}: {e}"))?;
    }
    Ok(format!("{} certificates project to LST-feasible points", certs.len()))
}

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(_) if elapsed > limit => "FAIL",
            Ok(_) => "PASS",
            Err(_) => "FAIL",
        };
        if verdict == "FAIL" {
            self.failed += 1;
        }
        let detail = match result {
            Ok(d) if elapsed > limit => format!("{d}; over the {}s limit", limit.as_secs()),
            Ok(d) | Err(d) => d,
        };
        println!("criterion {id} {verdict} [{:.2}s] {name}: {detail}", elapsed.as_secs_f64());
    }
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    let mut certs = Certificates::new();
    let secs = Duration::from_secs;
    report.run(1, "sandwich example", secs(1), || sandwich(&mut certs));
    report.run(2, "configuration LP gap family", secs(30), || gap(&mut certs));
    report.run(3, "LP rounding within T + p_max", secs(60), shmoys_tardos);
    report.run(4, "gcd granularity bound", secs(60), gcd_bound);
    report.run(5, "three-cut rounding", secs(60), three_cut);
    report.run(6, "MaxMin balancing", secs(120), balancing);
    report.run(7, "half-integral MaxMin", secs(90), half_integral);
    report.run(8, "column generation and pricing", secs(120), || column_generation(&mut certs));
    report.run(9, "certificate projection", secs(60), || projection(&certs));
    println!("acceptance: {} of 9 criteria passed", 9 - report.failed);
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
