//! The `schedlab` command line.
//!
//! Exit codes: 0 success, 1 a negative verdict (infeasible, no solution,
//! invalid certificate), 2 usage or input errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::assignment::{makespan, min_load, FractionalAssignment, HalfIntegralAssignment, IntegralAssignment, JobShare};
use crate::configlp::{
    config_lp_feasible, parse_config_solution, project_to_assignment, verify_config_solution, write_config_solution,
    ConfigLpOutcome, Mode,
};
use crate::gaplab::{build_certificate, format_gap_report, gap_report, generate_gap_instance};
use crate::instance::Instance;
use crate::io::{parse_instance, write_instance};
use crate::lp::{
    approximate_makespan, gcd_granularity_round, lst_lp, shmoys_tardos_round, three_cut_round, RoundedSchedule,
};
use crate::maxmin::{decide_t, half_integral_maxmin, half_integral_sparse, maxmin_balance, Decision};
use crate::oracle::{brute_force, Objective, DEFAULT_BUDGET};
use crate::random::{random_instance, RandomSpec};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Parser)]
#[command(name = "schedlab", version, about = "Scheduling on unrelated machines: LP relaxations, roundings and gap instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Relaxed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Makespan,
    Maxmin,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the assignment LP at a target and print the x matrix.
    Lstlp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        target: Rational,
    },
    /// Solve the assignment LP at a target and round it to an assignment.
    Round {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        target: Rational,
    },
    /// 2-approximation for the makespan.
    ApproxMakespan {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Rounding with the additive bound `M - g`.
    GcdRound {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Rounding of the strengthened LP for times in `[γ, 3γ]`.
    ThreeCut {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        gamma: Rational,
    },
    /// Decide the configuration LP at a target by column generation.
    Configlp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        target: Rational,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Slack for relaxed mode.
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        /// Also write the solution as a certificate file.
        #[arg(long)]
        certificate_out: Option<PathBuf>,
    },
    /// Project a configuration certificate onto the x variables.
    Project {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Check a configuration certificate exactly.
    VerifyConfig {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        /// Defaults to the certificate's own target.
        #[arg(long, value_parser = rational_arg)]
        target: Option<Rational>,
    },
    /// Write an integrality-gap instance and optionally its certificate.
    GenGap {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        allow_small_k: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Print the fractional and integral values of the gap family.
    GapReport {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
    },
    /// 2-approximation for MaxMin with at most two machines per job.
    MaxminBalance {
        #[arg(long)]
        instance: PathBuf,
        /// Run the decision procedure at this target only.
        #[arg(long, value_parser = rational_arg)]
        decide: Option<Rational>,
    },
    /// Half-integral MaxMin allocation.
    MaxminHalf {
        #[arg(long)]
        instance: PathBuf,
        /// At most ⌊m/2⌋ split jobs.
        #[arg(long)]
        sparse: bool,
    },
    /// Exact optimum by exhaustive search.
    Brute {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "makespan")]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Generate a random instance.
    Random {
        #[arg(long)]
        machines: usize,
        #[arg(long)]
        jobs: usize,
        #[arg(long, default_value_t = 1)]
        p_min: i64,
        #[arg(long, default_value_t = 10)]
        p_max: i64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        balancing: bool,
        #[arg(long)]
        gamma_band: Option<i64>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed run: exit code plus the message for stderr.
struct Failure(i32, String);

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read_file(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_matrix(out: &mut String, instance: &Instance, x: &FractionalAssignment) {
    for row in x.to_dense(instance.machines()) {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
}

fn write_integral(out: &mut String, a: &IntegralAssignment) {
    for (j, i) in a.as_slice().iter().enumerate() {
        writeln!(out, "assign {j} {i}").unwrap();
    }
}

fn write_half(out: &mut String, a: &HalfIntegralAssignment) {
    for (j, share) in a.shares().iter().enumerate() {
        match share {
            JobShare::Whole(i) => writeln!(out, "assign {j} {i}").unwrap(),
            JobShare::Split(a, b) => writeln!(out, "assign {j} {a} {b}").unwrap(),
        }
    }
}

fn write_schedule(out: &mut String, instance: &Instance, s: &RoundedSchedule) {
    writeln!(out, "target {}", format_rational(&s.target)).unwrap();
    write_integral(out, &s.assignment);
    writeln!(out, "value {}", format_rational(&makespan(instance, &s.assignment))).unwrap();
}

fn execute(command: Command, out: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Lstlp { instance, target } => {
            let inst = load_instance(&instance)?;
            match lst_lp(&inst, &target).solution() {
                Some(x) => {
                    writeln!(out, "feasible").unwrap();
                    write_matrix(out, &inst, x);
                    Ok(0)
                }
                None => {
                    writeln!(out, "infeasible").unwrap();
                    Ok(1)
                }
            }
        }
        Command::Round { instance, target } => {
            let inst = load_instance(&instance)?;
            match lst_lp(&inst, &target).solution() {
                Some(x) => {
                    let a = shmoys_tardos_round(&inst, x);
                    write_integral(out, &a);
                    writeln!(out, "value {}", format_rational(&makespan(&inst, &a))).unwrap();
                    Ok(0)
                }
                None => {
                    writeln!(out, "infeasible").unwrap();
                    Ok(1)
                }
            }
        }
        Command::ApproxMakespan { instance } => {
            let inst = load_instance(&instance)?;
            write_schedule(out, &inst, &approximate_makespan(&inst));
            Ok(0)
        }
        Command::GcdRound { instance } => {
            let inst = load_instance(&instance)?;
            write_schedule(out, &inst, &gcd_granularity_round(&inst));
            Ok(0)
        }
        Command::ThreeCut { instance, gamma } => {
            let inst = load_instance(&instance)?;
            let s = three_cut_round(&inst, &gamma).map_err(|e| input_error(e.to_string()))?;
            write_schedule(out, &inst, &s);
            Ok(0)
        }
        Command::Configlp {
            instance,
            target,
            mode,
            epsilon,
            certificate_out,
        } => {
            let inst = load_instance(&instance)?;
            let mode = match (mode, epsilon) {
                (ModeArg::Exact, None) => Mode::Exact,
                (ModeArg::Exact, Some(_)) => return Err(input_error("--epsilon needs --mode relaxed")),
                (ModeArg::Relaxed, None) => Mode::relaxed(),
                (ModeArg::Relaxed, Some(e)) if e > Rational::from_integer(0.into()) => Mode::Relaxed(e),
                (ModeArg::Relaxed, Some(_)) => return Err(input_error("--epsilon must be positive")),
            };
            let outcome = config_lp_feasible(&inst, &target, &mode).map_err(|e| input_error(e.to_string()))?;
            match outcome {
                ConfigLpOutcome::Feasible(y) => {
                    let text = write_config_solution(&y);
                    writeln!(out, "feasible").unwrap();
                    out.push_str(&text);
                    if let Some(path) = certificate_out {
                        write_file(&path, &text)?;
                    }
                    Ok(0)
                }
                ConfigLpOutcome::Infeasible => {
                    writeln!(out, "infeasible").unwrap();
                    Ok(1)
                }
            }
        }
        Command::Project { instance, certificate } => {
            let inst = load_instance(&instance)?;
            let y = parse_config_solution(&read_file(&certificate)?)
                .map_err(|e| input_error(format!("{}: {e}", certificate.display())))?;
            let x = project_to_assignment(&inst, &y).map_err(|e| input_error(e.to_string()))?;
            write_matrix(out, &inst, &x);
            Ok(0)
        }
        Command::VerifyConfig {
            instance,
            certificate,
            target,
        } => {
            let inst = load_instance(&instance)?;
            let y = parse_config_solution(&read_file(&certificate)?)
                .map_err(|e| input_error(format!("{}: {e}", certificate.display())))?;
            let target = target.unwrap_or_else(|| y.target().clone());
            match verify_config_solution(&inst, &y, &target) {
                Ok(()) => {
                    writeln!(out, "valid").unwrap();
                    Ok(0)
                }
                Err(v) => {
                    writeln!(out, "invalid: {v}").unwrap();
                    Ok(1)
                }
            }
        }
        Command::GenGap {
            k,
            allow_small_k,
            out: path,
            certificate,
        } => {
            let g = generate_gap_instance(k, allow_small_k).map_err(|e| input_error(e.to_string()))?;
            write_file(&path, &write_instance(&g.instance))?;
            if let Some(cert) = certificate {
                let y = build_certificate(&g).map_err(|e| input_error(e.to_string()))?;
                write_file(&cert, &write_config_solution(&y))?;
            }
            writeln!(out, "machines {}", g.instance.machines()).unwrap();
            writeln!(out, "jobs {}", g.instance.jobs()).unwrap();
            writeln!(out, "target {}", format_rational(&g.target())).unwrap();
            writeln!(out, "lower-bound {}", format_rational(&g.lower_bound())).unwrap();
            Ok(0)
        }
        Command::GapReport { k } => {
            let rows = gap_report(&k).map_err(|e| input_error(e.to_string()))?;
            out.push_str(&format_gap_report(&rows));
            Ok(0)
        }
        Command::MaxminBalance { instance, decide } => {
            let inst = load_instance(&instance)?;
            match decide {
                Some(t) => {
                    if t <= Rational::from_integer(0.into()) {
                        return Err(input_error("--decide needs a positive target"));
                    }
                    match decide_t(&inst, &t).map_err(|e| input_error(e.to_string()))? {
                        Decision::Solution(run) => {
                            write_integral(out, &run.assignment);
                            writeln!(out, "value {}", format_rational(&min_load(&inst, &run.assignment))).unwrap();
                            Ok(0)
                        }
                        Decision::NoSolutionAtT => {
                            writeln!(out, "no-solution").unwrap();
                            Ok(1)
                        }
                    }
                }
                None => {
                    let r = maxmin_balance(&inst).map_err(|e| input_error(e.to_string()))?;
                    write_integral(out, &r.assignment);
                    writeln!(out, "value {}", format_rational(&min_load(&inst, &r.assignment))).unwrap();
                    Ok(0)
                }
            }
        }
        Command::MaxminHalf { instance, sparse } => {
            let inst = load_instance(&instance)?;
            let r = if sparse {
                half_integral_sparse(&inst)
            } else {
                half_integral_maxmin(&inst)
            };
            write_half(out, &r.assignment);
            writeln!(out, "value {}", format_rational(&min_load(&inst, &r.assignment))).unwrap();
            Ok(0)
        }
        Command::Brute {
            instance,
            objective,
            budget,
        } => {
            let inst = load_instance(&instance)?;
            let objective = match objective {
                ObjectiveArg::Makespan => Objective::Makespan,
                ObjectiveArg::Maxmin => Objective::MaxMin,
            };
            let r = brute_force(&inst, objective, budget).map_err(|e| input_error(e.to_string()))?;
            write_integral(out, &r.witness);
            writeln!(out, "value {}", format_rational(&r.optimum)).unwrap();
            Ok(0)
        }
        Command::Random {
            machines,
            jobs,
            p_min,
            p_max,
            density,
            seed,
            balancing,
            gamma_band,
            out: path,
        } => {
            if machines == 0 || jobs == 0 {
                return Err(input_error("--machines and --jobs must be positive"));
            }
            if !(density > 0.0 && density <= 1.0) {
                return Err(input_error("--density must lie in (0, 1]"));
            }
            if gamma_band.is_none() && !(1 <= p_min && p_min <= p_max) {
                return Err(input_error("need 1 <= --p-min <= --p-max"));
            }
            if gamma_band.is_some_and(|g| g < 1) {
                return Err(input_error("--gamma-band must be positive"));
            }
            let mut spec = RandomSpec::new(machines, jobs, p_min, p_max).density(density);
            if balancing {
                spec = spec.balancing();
            }
            if let Some(g) = gamma_band {
                spec = spec.gamma_band(g);
            }
            let text = write_instance(&random_instance(&spec, seed));
            match path {
                Some(p) => write_file(&p, &text)?,
                None => out.push_str(&text),
            }
            Ok(0)
        }
    }
}

/// Runs one command line. Results go to `out`, diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut buffer = String::new();
    match execute(cli.command, &mut buffer) {
        Ok(code) => {
            let _ = out.write_all(buffer.as_bytes());
            code
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
