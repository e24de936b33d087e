//! Output formats: trajectory CSV, sweep CSV and the sweep summary JSON.
//!
//! Floats are written with 17 significant digits, lines end in LF.

use crate::algorithms::AlgoId;
use crate::dynamics::{OutcomeKind, SweepResult, Trajectory};
use crate::game::GameId;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::{self, Write};

pub const TRAJECTORY_HEADER: &str = "step,x,y,l1,l2,xi_norm";
pub const SWEEP_HEADER: &str = "algo,run,seed,outcome,iters_used,max_norm,final_x,final_y";

/// 17 significant digits, round-trippable.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per iterate. With `algo` set, an extra leading `algo` column
/// is written (multi-algorithm files).
pub fn write_trajectory_csv<W: Write>(
    w: &mut W,
    traj: &Trajectory,
    algo: Option<AlgoId>,
    header: bool,
) -> io::Result<()> {
    if header {
        match algo {
            Some(_) => writeln!(w, "algo,{TRAJECTORY_HEADER}")?,
            None => writeln!(w, "{TRAJECTORY_HEADER}")?,
        }
    }
    for (k, ((p, (l1, l2)), xn)) in traj
        .points
        .iter()
        .zip(&traj.losses)
        .zip(&traj.xi_norms)
        .enumerate()
    {
        if let Some(a) = algo {
            write!(w, "{a},")?;
        }
        writeln!(
            w,
            "{k},{},{},{},{},{}",
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(*l1),
            fmt_f64(*l2),
            fmt_f64(*xn)
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(
    w: &mut W,
    results: &[SweepResult],
    header: bool,
) -> io::Result<()> {
    if header {
        writeln!(w, "{SWEEP_HEADER}")?;
    }
    for res in results {
        for r in &res.per_run {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                res.algo,
                r.run_id,
                r.seed,
                r.outcome.kind.name(),
                r.iters_used,
                fmt_f64(r.outcome.max_norm),
                fmt_f64(r.outcome.final_point.x),
                fmt_f64(r.outcome.final_point.y)
            )?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub game: String,
    pub sigma: Option<f64>,
    pub runs: usize,
    pub iters: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub seed: u64,
    /// Outcome histogram per algorithm, every outcome listed.
    pub histogram: BTreeMap<String, BTreeMap<String, usize>>,
}

impl SweepSummary {
    pub fn new(
        game: &GameId,
        runs: usize,
        cfg: &crate::dynamics::RunConfig,
        results: &[SweepResult],
    ) -> Self {
        let histogram = results
            .iter()
            .map(|r| {
                let counts = OutcomeKind::ALL
                    .iter()
                    .map(|k| (k.name().to_string(), r.count(*k)))
                    .collect();
                (r.algo.name().to_string(), counts)
            })
            .collect();
        SweepSummary {
            game: game.short_name().to_string(),
            sigma: game.sigma(),
            runs,
            iters: cfg.iters,
            alpha: cfg.hp.alpha,
            gamma: cfg.hp.gamma,
            seed: cfg.seed,
            histogram,
        }
    }
}
