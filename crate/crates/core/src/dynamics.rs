//! Trajectory simulation, outcome classification and multi-run sweeps.
//!
//! # Random initialisation
//!
//! Every run owns an independent stream so sweeps are reproducible
//! regardless of scheduling:
//!
//! 1. `stream_seed = seed ^ run_index`.
//! 2. The xoshiro256** state is filled with four successive SplitMix64
//!    outputs starting from `stream_seed`.
//! 3. A uniform is `(next_u64 >> 11) · 2⁻⁵³`, i.e. 53 random bits in `[0, 1)`.
//! 4. `StdNormal` draws `u₁, u₂` and applies Box–Muller with `1 − u₁` in
//!    `(0, 1]`: `x = r cos(2πu₂)`, `y = r sin(2πu₂)`, `r = √(−2 ln(1 − u₁))`.
//! 5. `UniformBox(lo, hi)` draws `x` then `y`, each `lo + (hi − lo)u`.

use crate::algorithms::{step, AlgoId, AlgoState, HyperParams};
use crate::error::{Error, Result};
use crate::game::{GameId, Params};
use crate::matrix::norm;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    StdNormal,
    UniformBox(f64, f64),
    Fixed(Params),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub iters: usize,
    pub hp: HyperParams,
    pub init: Init,
    pub seed: u64,
    /// Any iterate with norm above this counts as divergence.
    pub bound_radius: f64,
    /// Largest tail step still considered stationary.
    pub step_tol: f64,
    /// `‖ξ‖` below this makes a limit point critical.
    pub crit_tol: f64,
    pub tail_window: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            iters: 3000,
            hp: HyperParams::default(),
            init: Init::StdNormal,
            seed: 0,
            bound_radius: 1e3,
            step_tol: 1e-9,
            crit_tol: 1e-6,
            tail_window: 200,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.hp.validate()?;
        if self.tail_window < 1 || self.iters < self.tail_window {
            return Err(Error::InvalidConfig(format!(
                "need iters >= tail_window >= 1, got iters={} tail_window={}",
                self.iters, self.tail_window
            )));
        }
        if !(self.bound_radius > 0.0) {
            return Err(Error::InvalidConfig("bound_radius must be > 0".into()));
        }
        if !(self.step_tol > 0.0 && self.crit_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be > 0".into()));
        }
        if let Init::UniformBox(lo, hi) = self.init {
            if !(lo < hi) {
                return Err(Error::InvalidConfig(format!("empty init box [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// Per-run stream seed.
pub fn run_seed(seed: u64, run_index: u64) -> u64 {
    seed ^ run_index
}

fn uniform53(rng: &mut Xoshiro256StarStar) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn sample_init(cfg: &RunConfig, run_index: u64) -> Params {
    let mut rng = Xoshiro256StarStar::seed_from_u64(run_seed(cfg.seed, run_index));
    match cfg.init {
        Init::Fixed(p) => p,
        Init::StdNormal => {
            let u1 = uniform53(&mut rng);
            let u2 = uniform53(&mut rng);
            let r = (-2.0 * (1.0 - u1).ln()).sqrt();
            let t = 2.0 * PI * u2;
            Params::new(r * t.cos(), r * t.sin())
        }
        Init::UniformBox(lo, hi) => {
            let x = lo + (hi - lo) * uniform53(&mut rng);
            let y = lo + (hi - lo) * uniform53(&mut rng);
            Params::new(x, y)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<Params>,
    pub losses: Vec<(f64, f64)>,
    pub xi_norms: Vec<f64>,
}

impl Trajectory {
    /// Number of updates actually performed.
    pub fn iters_used(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn last(&self) -> Params {
        *self
            .points
            .last()
            .expect("trajectory holds at least the initial point")
    }
}

/// Iterates from the configured initial point of run `run_index`.
pub fn run_indexed(
    game: &GameId,
    algo: AlgoId,
    cfg: &RunConfig,
    run_index: u64,
) -> Result<Trajectory> {
    run_from(game, algo, cfg, sample_init(cfg, run_index))
}

pub fn run(game: &GameId, algo: AlgoId, cfg: &RunConfig) -> Result<Trajectory> {
    run_indexed(game, algo, cfg, 0)
}

/// Iterates `cfg.iters` times, stopping early (after recording it) at the
/// first non-finite iterate.
pub fn run_from(game: &GameId, algo: AlgoId, cfg: &RunConfig, p0: Params) -> Result<Trajectory> {
    let cap = cfg.iters + 1;
    let mut traj = Trajectory {
        points: Vec::with_capacity(cap),
        losses: Vec::with_capacity(cap),
        xi_norms: Vec::with_capacity(cap),
    };
    let record = |traj: &mut Trajectory, p: Params| {
        traj.points.push(p);
        traj.losses.push(game.losses(p));
        traj.xi_norms.push(norm(game.grad(p)));
    };
    let mut p = p0;
    let mut state = AlgoState::default();
    record(&mut traj, p);
    for _ in 0..cfg.iters {
        if !p.is_finite() {
            break;
        }
        let (next, next_state) = step(game, algo, p, &state, &cfg.hp)?;
        p = next;
        state = next_state;
        record(&mut traj, p);
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OutcomeKind {
    Diverged,
    ConvergedCritical,
    ConvergedNonCritical,
    Cycle,
}

impl OutcomeKind {
    pub const ALL: [OutcomeKind; 4] = [
        OutcomeKind::Diverged,
        OutcomeKind::ConvergedCritical,
        OutcomeKind::ConvergedNonCritical,
        OutcomeKind::Cycle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OutcomeKind::Diverged => "diverged",
            OutcomeKind::ConvergedCritical => "converged_critical",
            OutcomeKind::ConvergedNonCritical => "converged_noncritical",
            OutcomeKind::Cycle => "cycle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    /// Largest iterate norm; `inf` once anything non-finite appeared.
    pub max_norm: f64,
    #[serde(rename = "final")]
    pub final_point: Params,
}

pub fn classify_outcome(traj: &Trajectory, game: &GameId, cfg: &RunConfig) -> Outcome {
    let max_norm = traj
        .points
        .iter()
        .map(|p| {
            if p.is_finite() {
                p.norm()
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0_f64, f64::max);
    let final_point = traj.last();
    let kind = if !(max_norm <= cfg.bound_radius) {
        OutcomeKind::Diverged
    } else {
        let n = traj.points.len();
        let window = cfg.tail_window.min(n.saturating_sub(1));
        let max_step = traj.points[n - 1 - window..]
            .windows(2)
            .map(|w| w[1].dist(w[0]))
            .fold(0.0_f64, f64::max);
        if window > 0 && max_step < cfg.step_tol {
            if norm(game.grad(final_point)) < cfg.crit_tol {
                OutcomeKind::ConvergedCritical
            } else {
                OutcomeKind::ConvergedNonCritical
            }
        } else {
            OutcomeKind::Cycle
        }
    };
    Outcome {
        kind,
        max_norm,
        final_point,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    pub iters_used: usize,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub algo: AlgoId,
    pub counts: BTreeMap<OutcomeKind, usize>,
    /// Sorted by `run_id`.
    pub per_run: Vec<RunRecord>,
}

impl SweepResult {
    pub fn count(&self, kind: OutcomeKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// How a sweep schedules its runs. Parallel is the default when the
/// `parallel` feature is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

pub fn simulate_run(
    game: &GameId,
    algo: AlgoId,
    cfg: &RunConfig,
    run_index: u64,
) -> Result<RunRecord> {
    let traj = run_indexed(game, algo, cfg, run_index)?;
    Ok(RunRecord {
        run_id: run_index,
        seed: run_seed(cfg.seed, run_index),
        iters_used: traj.iters_used(),
        outcome: classify_outcome(&traj, game, cfg),
    })
}

pub fn sweep(game: &GameId, algo: AlgoId, cfg: &RunConfig, n_runs: usize) -> Result<SweepResult> {
    sweep_with(Execution::default(), game, algo, cfg, n_runs)
}

/// Runs and classifies `n_runs` independent trajectories. The result is
/// identical for every execution strategy.
pub fn sweep_with(
    exec: Execution,
    game: &GameId,
    algo: AlgoId,
    cfg: &RunConfig,
    n_runs: usize,
) -> Result<SweepResult> {
    if n_runs < 1 {
        return Err(Error::InvalidConfig("n_runs must be >= 1".into()));
    }
    cfg.validate()?;
    let per_run: Vec<RunRecord> = match exec {
        Execution::Sequential => (0..n_runs as u64)
            .map(|i| simulate_run(game, algo, cfg, i))
            .collect::<Result<_>>()?,
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n_runs as u64)
                .into_par_iter()
                .map(|i| simulate_run(game, algo, cfg, i))
                .collect::<Result<_>>()?
        }
    };
    let mut counts: BTreeMap<OutcomeKind, usize> =
        OutcomeKind::ALL.iter().map(|k| (*k, 0)).collect();
    for r in &per_run {
        *counts.entry(r.outcome.kind).or_insert(0) += 1;
    }
    Ok(SweepResult {
        algo,
        counts,
        per_run,
    })
}
