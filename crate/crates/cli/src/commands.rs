use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pbe_core::dynamics::{run_avi, run_deterministic_q, run_q_learning, SamplerConfig};
use pbe_core::epsilon_lab::scan_epsilon;
use pbe_core::pbe::{certificate_report, enumerate_pbe_solutions, PolicySet};

use crate::error::{CliError, Result};
use crate::output::{epsilon_scan_csv, solutions_csv, to_json, trajectory_csv, write_atomic};
use crate::scenario::{load_scenario, EpsGrid, Scenario, TargetChoice};

#[derive(Debug, Parser)]
#[command(name = "pbe", version, about = "Projected Bellman equation solutions, certificates and learning dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certificates over all deterministic policies -> certificates.json
    Analyze(Input),
    /// Enumerated PBE solutions -> solutions.csv
    Solutions(Input),
    /// Stochastic linear Q-learning -> trajectory.csv
    Qlearn(Input),
    /// Deterministic (mean-field) Q-learning -> trajectory.csv
    Detq(Input),
    /// Approximate value iteration -> trajectory.csv
    Avi(Input),
    /// Solution count over an ε grid -> epsilon_scan.csv
    ScanEpsilon(Input),
    /// Builtin scenario: scenario.json, certificates.json, solutions.csv
    Example {
        /// One of ex1, ex2, ex3, epsF1, epsF2
        name: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Scenario JSON file
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Builtin scenario name
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// start:stop:count
    #[arg(long)]
    pub eps_grid: Option<EpsGrid>,
    #[arg(long, value_enum)]
    pub target_mode: Option<TargetChoice>,
    /// Record every n-th iterate
    #[arg(long)]
    pub stride: Option<usize>,
}

impl Overrides {
    fn apply(&self, sc: &mut Scenario) -> Result<()> {
        let a = &mut sc.algorithms;
        if let Some(x) = self.seed {
            a.seed = x;
        }
        if let Some(x) = self.max_iter {
            a.max_iter = x;
        }
        if let Some(x) = self.tol {
            a.tol = x;
        }
        if let Some(x) = self.eps_grid {
            a.eps_grid = x;
        }
        if let Some(x) = self.target_mode {
            a.target_mode = x;
        }
        if let Some(x) = self.stride {
            a.stride = x;
        }
        if let Some(x) = self.eta {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(CliError::validation("InvalidArgument", format!("eta {x} must be finite and non-negative")));
            }
            sc.eta = x;
        }
        Ok(())
    }
}

fn resolve(input: &Input) -> Result<Scenario> {
    let mut sc = match (&input.source.scenario, &input.source.builtin) {
        (Some(path), _) => load_scenario(path)?,
        (None, Some(name)) => Scenario::builtin(name)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    input.overrides.apply(&mut sc)?;
    Ok(sc)
}

fn analyze(sc: &Scenario, out: &Path) -> Result<PathBuf> {
    let report = certificate_report(&sc.mdp, &sc.phi, &sc.nu_mode(), &PolicySet::AllDeterministic, sc.eta)?;
    write_atomic(out, "certificates.json", &to_json(&report))
}

fn solutions(sc: &Scenario, out: &Path) -> Result<PathBuf> {
    let set = enumerate_pbe_solutions(&sc.mdp, &sc.phi, &sc.nu_mode(), sc.eta)?;
    for s in &set.skipped {
        eprintln!("skipped policy {}: {}", s.policy_index, s.reason);
    }
    write_atomic(out, "solutions.csv", &solutions_csv(&set.solutions, sc.phi.dim()))
}

/// Executes a parsed command line, writing artifacts and returning their paths.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let (sc, out) = match &cli.command {
        Command::Example { name, overrides } => {
            let mut sc = Scenario::builtin(name)?;
            overrides.apply(&mut sc)?;
            let out = &overrides.out;
            return Ok(vec![
                write_atomic(out, "scenario.json", &sc.to_json())?,
                analyze(&sc, out)?,
                solutions(&sc, out)?,
            ]);
        }
        Command::Analyze(i)
        | Command::Solutions(i)
        | Command::Qlearn(i)
        | Command::Detq(i)
        | Command::Avi(i)
        | Command::ScanEpsilon(i) => (resolve(i)?, &i.overrides.out),
    };
    let dim = sc.phi.dim();
    let path = match &cli.command {
        Command::Analyze(_) => analyze(&sc, out)?,
        Command::Solutions(_) => solutions(&sc, out)?,
        Command::ScanEpsilon(_) => {
            let a = &sc.algorithms;
            let rows = scan_epsilon(&sc.mdp, &sc.phi, &a.eps_grid.points(), sc.eta, a.target_mode.into())?;
            for r in rows.iter().filter(|r| !r.skipped_policies.is_empty()) {
                eprintln!("epsilon {}: skipped singular policies {:?}", r.epsilon, r.skipped_policies);
            }
            write_atomic(out, "epsilon_scan.csv", &epsilon_scan_csv(&rows, dim))?
        }
        cmd => {
            let d = sc.sampling_distribution()?;
            let (theta0, cfg, a) = (sc.theta0(), sc.run_config(), &sc.algorithms);
            let traj = match cmd {
                Command::Qlearn(_) => {
                    let sampler = SamplerConfig { d, reward_noise_halfwidth: a.reward_noise, seed: a.seed };
                    run_q_learning(&sc.mdp, &sc.phi, &sampler, a.schedule, &theta0, cfg)?
                }
                Command::Detq(_) => run_deterministic_q(&sc.mdp, &sc.phi, &d, a.schedule, &theta0, cfg)?,
                _ => run_avi(&sc.mdp, &sc.phi, &d, &theta0, cfg)?,
            };
            eprintln!("{}: {} after {} iterations", sc.name, traj.verdict.label(), traj.iterations);
            write_atomic(out, "trajectory.csv", &trajectory_csv(&traj, dim))?
        }
    };
    Ok(vec![path])
}
