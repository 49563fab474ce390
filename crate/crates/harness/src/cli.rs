use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::run_experiment;
use crate::config::{default_config, resolve_config, Experiment, RunConfig};
use crate::error::{HarnessError, Result};
use crate::report::emit_reports;

/// Worker threads for parallel banks when `--threads` is absent.
pub const THREADS_ENV: &str = "BMHD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bmhd", version, about = "Numerical checks for critical-space MHD on the torus")]
struct Cli {
    /// Config file, or the name of a shipped preset (e.g. tg2d).
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; falls back to BMHD_THREADS, then the physical core count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition of unity and almost orthogonality.
    LpCheck {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bank: Option<usize>,
    },
    /// Bony reconstruction of dealiased products.
    BonyCheck {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bank: Option<usize>,
    },
    /// Besov, Chemin–Lerner and iterated norms of a heat flow.
    Norms {
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
    },
    /// IF-RK4 run with energy balance and final checkpoint.
    Solve {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Picard iteration for small data.
    Picard {
        #[arg(long)]
        norm: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Picard against IF-RK4 from the same small data.
    Smalldata {
        #[arg(long)]
        norm: Option<f64>,
    },
    /// Existence interval of the Picard map for large data.
    Local {
        #[arg(long)]
        norm: Option<f64>,
    },
    /// Calderón split, recombination and the (v, g) energy bound.
    Calderon {
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Weak-strong stability against a coarse surrogate.
    Weakstrong {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        perturbation: Option<f64>,
    },
    /// Trilinear bounds, calibrated on one bank and asserted on another.
    Trilinear {
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        bank: Option<usize>,
    },
    /// Solution size against data size through the split pipeline.
    Growth {
        #[arg(long)]
        n_scales: Option<usize>,
    },
    /// Lorentz-space Hölder, Young and convolution inequalities.
    LorentzCheck {
        #[arg(long)]
        trials: Option<usize>,
    },
}

impl Command {
    fn experiment(&self) -> Experiment {
        match self {
            Self::LpCheck { .. } => Experiment::LpCheck,
            Self::BonyCheck { .. } => Experiment::BonyCheck,
            Self::Norms { .. } => Experiment::Norms,
            Self::Solve { .. } => Experiment::Solve,
            Self::Picard { .. } => Experiment::Picard,
            Self::Smalldata { .. } => Experiment::Smalldata,
            Self::Local { .. } => Experiment::Local,
            Self::Calderon { .. } => Experiment::Calderon,
            Self::Weakstrong { .. } => Experiment::Weakstrong,
            Self::Trilinear { .. } => Experiment::Trilinear,
            Self::Growth { .. } => Experiment::Growth,
            Self::LorentzCheck { .. } => Experiment::LorentzCheck,
        }
    }

    fn apply(&self, cfg: &mut RunConfig) {
        let mut set = |key: &str, v: Option<f64>| {
            if let Some(v) = v {
                cfg.set_param(key, v);
            }
        };
        let count = |v: &Option<usize>| v.map(|x| x as f64);
        match self {
            Self::LpCheck { bank, .. } | Self::BonyCheck { bank, .. } => set("bank", count(bank)),
            Self::Norms { s, p, r, rho } => {
                set("s", *s);
                set("p", *p);
                set("r", *r);
                set("rho", *rho);
            }
            Self::Calderon { threshold } => set("threshold", *threshold),
            Self::Weakstrong { p, r, perturbation } => {
                set("p", *p);
                set("r", *r);
                set("perturbation", *perturbation);
            }
            Self::Trilinear { r, sigma, bank } => {
                set("r", *r);
                set("sigma", *sigma);
                set("bank", count(bank));
            }
            Self::Growth { n_scales } => set("n_scales", count(n_scales)),
            Self::LorentzCheck { trials } => set("trials", count(trials)),
            Self::Solve { .. } | Self::Picard { .. } | Self::Smalldata { .. } | Self::Local { .. } => {}
        }
        match self {
            Self::LpCheck { n, .. } | Self::BonyCheck { n, .. } => {
                if let Some(n) = n {
                    cfg.grid.n = *n;
                }
            }
            Self::Solve { n, dt, t_end } => {
                if let Some(n) = n {
                    cfg.grid.n = *n;
                }
                if let Some(dt) = dt {
                    cfg.solver.dt = *dt;
                }
                if let Some(t) = t_end {
                    cfg.solver.t_end = *t;
                }
            }
            Self::Picard { norm, q } => {
                cfg.data.norm = norm.or(cfg.data.norm);
                if let Some(q) = q {
                    cfg.solver.q = *q;
                }
            }
            Self::Smalldata { norm } | Self::Local { norm } => cfg.data.norm = norm.or(cfg.data.norm),
            _ => {}
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n.max(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|n| n.max(1))
            .map_err(|_| HarnessError::Config(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(_) => Ok(num_cpus::get_physical().max(1)),
    }
}

fn execute(cli: Cli) -> Result<bool> {
    // The global pool can only be built once per process; later calls keep it.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cli.threads)?)
        .build_global();
    let exp = cli.cmd.experiment();
    let mut cfg = match &cli.config {
        Some(c) => resolve_config(c)?,
        None => default_config(exp),
    };
    if cfg.experiment.name != exp {
        return Err(HarnessError::Config(format!(
            "config is for {}, not {exp}",
            cfg.experiment.name
        )));
    }
    cli.cmd.apply(&mut cfg);
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    cfg.validate()?;
    let results = run_experiment(&cfg)?;
    let paths = emit_reports(&results, &cfg, &cfg.out)?;
    for r in &results {
        println!("{exp} {}: {} {}", r.label, if r.passed { "PASS" } else { "FAIL" }, r.summary);
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    Ok(results.iter().all(|r| r.passed))
}

/// Exit code 0 iff every assertion passed, 1 if one failed, 2 on usage or config errors.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
