//! Command-line front end: evaluate information constraints, sweep
//! families, map regions and run the coding simulator, emitting
//! plot-ready CSV and JSON.

mod instance;
mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coordkit::closed_form::{gamma_star, BoundSide};
use coordkit::constraint::{
    decomposition_check, maximize_causal, maximize_strict, CausalOpts, Certificate,
    DecompositionMode, MaximizeOpts, StrictInstance,
};
use coordkit::prob::Axis;
use coordkit::region::{
    channel_capacity, distortion_cost_region, expected_utility, max_utility_generic, membership,
    FamilySpec, MaxUtilityOpts,
};
use coordkit::sim::{monte_carlo, CodeConfig, SimProblem};
use coordkit::{Error, Result};

use instance::InstanceFile;
use output::{emit_csv, emit_json, kernel_rows_json, report_json, sig};

#[derive(Parser)]
#[command(
    name = "coordkit",
    about = "Empirical-coordination regions, utilities and coding simulation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EvalFlags {
    /// Auxiliary alphabet size (defaults to the support ceiling).
    #[arg(long)]
    w_size: Option<usize>,
    /// Random restarts beyond the deterministic seeds.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Maximum ascent iterations per start.
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Ascent stopping tolerance on the objective.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// RNG seed (falls back to COORDKIT_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
}

impl EvalFlags {
    fn opts(&self) -> MaximizeOpts {
        MaximizeOpts {
            w_size: self.w_size,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: resolve_seed(self.seed),
            extra_seeds: Vec::new(),
        }
    }

    fn spec(&self) -> serde_json::Value {
        json!({
            "w_size": self.w_size,
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "tol": self.tol,
            "seed": resolve_seed(self.seed),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Strict,
    Causal,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimModeFlag {
    Strict,
    Causal,
    ZeroCapacity,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuxChoice {
    /// Use the certificate kernel from the constraint maximizer.
    Certificate,
    /// Use the deterministic W = X kernel.
    WEqualsX,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the strictly-causal information constraint.
    Eval {
        instance: PathBuf,
        #[command(flatten)]
        flags: EvalFlags,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Maximize the causal information constraint.
    CausalEval {
        instance: PathBuf,
        #[arg(long)]
        w1_size: Option<usize>,
        #[arg(long)]
        w2_size: Option<usize>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a joint table against the strict or causal factorization.
    Check {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: CheckMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Channel capacity by Blahut-Arimoto iteration.
    Capacity {
        instance: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Achievability verdict for the instance's target conditional.
    Membership {
        instance: PathBuf,
        #[command(flatten)]
        flags: EvalFlags,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep the symmetric binary coordination family: CSV of gamma
    /// against the analytic bounds and the certified value.
    SweepGamma {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma_min: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[command(flatten)]
        flags: EvalFlags,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Utility-optimal coordination parameter over a channel-noise range.
    GammaStar {
        #[arg(long, default_value_t = 0.0)]
        eps_min: f64,
        #[arg(long, default_value_t = 0.5)]
        eps_max: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact distortion-cost region grid of the binary example.
    DcRegion {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Best-effort expected-utility maximization over achievable targets.
    UtilityMax {
        instance: PathBuf,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 120)]
        max_outer: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo simulation of the coding schemes.
    Simulate {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: SimModeFlag,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 0.02)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        eps_typ: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        codeword_cap: Option<u64>,
        #[arg(long, value_enum, default_value_t = AuxChoice::Certificate)]
        aux: AuxChoice,
        #[arg(long)]
        w_size: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("COORDKIT_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InstanceFormat(format!("cannot read {}: {e}", path.display())))?;
    InstanceFile::parse(&text)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            Error::InstanceFormat(_) | Error::Domain(_) => 2,
            Error::Configuration(_) | Error::Infeasible(_) => 3,
            Error::Numeric(_) => 4,
        });
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Eval {
            instance,
            flags,
            output,
        } => {
            let inst = read_instance(&instance)?.strict_instance()?;
            let report = maximize_strict(&inst, &flags.opts())?;
            let spec = json!({
                "subcommand": "eval",
                "instance": instance.display().to_string(),
                "flags": flags.spec(),
            });
            emit_json(output.as_deref(), spec, report_json(&report))
        }
        Command::CausalEval {
            instance,
            w1_size,
            w2_size,
            restarts,
            max_iters,
            tol,
            seed,
            output,
        } => {
            let inst = read_instance(&instance)?.causal_instance()?;
            let opts = CausalOpts {
                w1_size,
                w2_size,
                restarts,
                max_iters,
                tol,
                seed: resolve_seed(seed),
            };
            let report = maximize_causal(&inst, &opts)?;
            let spec = json!({
                "subcommand": "causal-eval",
                "instance": instance.display().to_string(),
                "w1_size": w1_size, "w2_size": w2_size,
                "restarts": restarts, "max_iters": max_iters,
                "tol": tol, "seed": resolve_seed(seed),
            });
            emit_json(output.as_deref(), spec, report_json(&report))
        }
        Command::Check {
            instance,
            mode,
            output,
        } => {
            let file = read_instance(&instance)?;
            let joint = file.joint_dist()?;
            let source = file.source_dist()?;
            let channel = file.channel_kernel()?;
            let m = match mode {
                CheckMode::Strict => DecompositionMode::Strict,
                CheckMode::Causal => DecompositionMode::Causal,
            };
            let (pass, deviation) = decomposition_check(&joint, &source, &channel, m)?;
            let spec = json!({
                "subcommand": "check",
                "instance": instance.display().to_string(),
                "mode": match mode { CheckMode::Strict => "strict", CheckMode::Causal => "causal" },
            });
            emit_json(
                output.as_deref(),
                spec,
                json!({ "pass": pass, "max_deviation": deviation }),
            )
        }
        Command::Capacity {
            instance,
            tol,
            output,
        } => {
            let channel = read_instance(&instance)?.channel_kernel()?;
            let cap = channel_capacity(&channel, tol)?;
            let spec = json!({
                "subcommand": "capacity",
                "instance": instance.display().to_string(),
                "tol": tol,
            });
            emit_json(
                output.as_deref(),
                spec,
                json!({
                    "capacity": cap.capacity,
                    "argmax_input": cap.argmax_input.table(),
                    "iterations": cap.iterations,
                }),
            )
        }
        Command::Membership {
            instance,
            flags,
            output,
        } => {
            let inst = read_instance(&instance)?.strict_instance()?;
            let (verdict, report) = membership(&inst, &flags.opts())?;
            let spec = json!({
                "subcommand": "membership",
                "instance": instance.display().to_string(),
                "flags": flags.spec(),
            });
            emit_json(
                output.as_deref(),
                spec,
                json!({ "verdict": verdict.to_string(), "report": report_json(&report) }),
            )
        }
        Command::SweepGamma {
            eps,
            gamma_min,
            gamma_max,
            step,
            flags,
            output,
        } => {
            if step <= 0.0 {
                return Err(Error::Domain("step must be positive".into()));
            }
            let source = coordkit::prob::FiniteDist::uniform(vec![(Axis::U, 2)]);
            let channel = coordkit::prob::Kernel::bsc(eps)?;
            let mut rows = Vec::new();
            let mut gamma = gamma_min;
            let base_opts = flags.opts();
            while gamma <= gamma_max + 1e-12 {
                let g = gamma.min(gamma_max);
                let target = FamilySpec::CoordinationGamma.kernel(g)?;
                let inst = StrictInstance::new(source.clone(), channel.clone(), target)?;
                let bounds = coordkit::constraint::analytic_bounds(&inst)?;
                let mut opts = base_opts.clone();
                opts.seed = base_opts.seed ^ g.to_bits();
                let certified = maximize_strict(&inst, &opts)?.value;
                rows.push(vec![
                    sig(g),
                    sig(bounds.lower),
                    sig(bounds.upper),
                    sig(certified),
                ]);
                gamma += step;
            }
            let spec = json!({
                "subcommand": "sweep-gamma",
                "eps": eps, "gamma_min": gamma_min, "gamma_max": gamma_max,
                "step": step, "flags": flags.spec(),
            });
            emit_csv(
                output.as_deref(),
                spec,
                &["gamma", "lower", "upper", "certified"],
                rows,
            )
        }
        Command::GammaStar {
            eps_min,
            eps_max,
            step,
            output,
        } => {
            if step <= 0.0 {
                return Err(Error::Domain("step must be positive".into()));
            }
            let mut rows = Vec::new();
            let mut eps = eps_min;
            while eps <= eps_max + 1e-12 {
                let e = eps.min(eps_max);
                rows.push(vec![
                    sig(e),
                    sig(gamma_star(e, BoundSide::Lower)?),
                    sig(gamma_star(e, BoundSide::Upper)?),
                ]);
                eps += step;
            }
            let spec = json!({
                "subcommand": "gamma-star",
                "eps_min": eps_min, "eps_max": eps_max, "step": step,
            });
            emit_csv(
                output.as_deref(),
                spec,
                &["eps", "gamma_star_lower", "gamma_star_upper"],
                rows,
            )
        }
        Command::DcRegion {
            p,
            eps,
            grid_step,
            output,
        } => {
            let grid = distortion_cost_region(p, eps, grid_step)?;
            let mut rows = Vec::with_capacity(grid.cells.len());
            for cell in &grid.cells {
                rows.push(vec![
                    sig(cell.cost),
                    sig(cell.distortion),
                    sig(cell.constraint),
                    (cell.achievable as u8).to_string(),
                ]);
            }
            let spec = json!({
                "subcommand": "dc-region",
                "p": p, "eps": eps, "grid_step": grid_step,
            });
            emit_csv(
                output.as_deref(),
                spec,
                &["cost", "distortion", "constraint", "achievable"],
                rows,
            )
        }
        Command::UtilityMax {
            instance,
            restarts,
            max_outer,
            seed,
            output,
        } => {
            let file = read_instance(&instance)?;
            let source = file.source_dist()?;
            let channel = file.channel_kernel()?;
            let util = file.utility_spec()?;
            let opts = MaxUtilityOpts {
                restarts,
                max_outer,
                seed: resolve_seed(seed),
                ..MaxUtilityOpts::default()
            };
            let result = max_utility_generic(&source, &channel, &util, &opts)?;
            let check = expected_utility(&result.target_star, &source, &channel, &util)?;
            debug_assert!((check - result.utility).abs() < 1e-9);
            let spec = json!({
                "subcommand": "utility-max",
                "instance": instance.display().to_string(),
                "restarts": restarts, "max_outer": max_outer,
                "seed": resolve_seed(seed),
            });
            emit_json(
                output.as_deref(),
                spec,
                json!({
                    "utility": result.utility,
                    "fallback_used": result.fallback_used,
                    "target_star": kernel_rows_json(&result.target_star),
                    "report": report_json(&result.report),
                }),
            )
        }
        Command::Simulate {
            instance,
            mode,
            n,
            blocks,
            delta,
            eps_typ,
            trials,
            seed,
            codeword_cap,
            aux,
            w_size,
            output,
        } => {
            let file = read_instance(&instance)?;
            let seed = resolve_seed(seed);
            let mut config = CodeConfig::new(n, blocks, delta, eps_typ, seed)?;
            if let Some(cap) = codeword_cap {
                config = config.with_codeword_cap(cap);
            }
            let problem = match mode {
                SimModeFlag::ZeroCapacity => SimProblem::ZeroCapacity {
                    instance: file.strict_instance()?,
                },
                SimModeFlag::Strict => {
                    let inst = file.strict_instance()?;
                    let aux_kernel = match aux {
                        AuxChoice::WEqualsX => coordkit::constraint::AuxKernel::w_equals_x(
                            &inst.profile(),
                            w_size.unwrap_or(inst.profile().x_size),
                        )?,
                        AuxChoice::Certificate => {
                            let report = maximize_strict(
                                &inst,
                                &MaximizeOpts {
                                    w_size,
                                    seed,
                                    ..MaximizeOpts::default()
                                },
                            )?;
                            match report.certificate {
                                Certificate::Strict(a) => a,
                                _ => unreachable!(),
                            }
                        }
                    };
                    SimProblem::Strict {
                        instance: inst,
                        aux: aux_kernel,
                    }
                }
                SimModeFlag::Causal => {
                    let inst = file.causal_instance()?;
                    let report = maximize_causal(
                        &inst,
                        &CausalOpts {
                            seed,
                            ..CausalOpts::default()
                        },
                    )?;
                    let (front, back) = match report.certificate {
                        Certificate::Causal { front, back } => (front, back),
                        _ => unreachable!(),
                    };
                    let structure = coordkit::constraint::CausalStructure::new(
                        inst.source().clone(),
                        inst.channel().clone(),
                        front,
                        back,
                    )?;
                    SimProblem::Causal { structure }
                }
            };
            let summary = monte_carlo(&problem, &config, trials)?;
            let spec = json!({
                "subcommand": "simulate",
                "instance": instance.display().to_string(),
                "mode": match mode {
                    SimModeFlag::Strict => "strict",
                    SimModeFlag::Causal => "causal",
                    SimModeFlag::ZeroCapacity => "zero-capacity",
                },
                "n": n, "blocks": blocks, "delta": delta, "eps_typ": eps_typ,
                "trials": trials, "seed": seed,
                "codeword_cap": config.codeword_cap,
            });
            let row = vec![
                n.to_string(),
                blocks.to_string(),
                sig(delta),
                sig(eps_typ),
                trials.to_string(),
                sig(summary.pe_estimate),
                sig(summary.mean_tv_full),
                sig(summary.mean_tv_truncated),
                sig(summary.event_rates.covering_v),
                sig(summary.event_rates.covering_w),
                sig(summary.event_rates.packing),
                sig(summary.event_rates.init_decode),
                sig(summary.ci_halfwidth),
            ];
            emit_csv(
                output.as_deref(),
                spec,
                &[
                    "n",
                    "blocks",
                    "delta",
                    "eps_typ",
                    "trials",
                    "pe",
                    "mean_tv_full",
                    "mean_tv_trunc",
                    "rate_covering_v",
                    "rate_covering_w",
                    "rate_packing",
                    "rate_init_decode",
                    "ci_halfwidth",
                ],
                vec![row],
            )
        }
    }
}
