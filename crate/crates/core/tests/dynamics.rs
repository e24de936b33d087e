use gdl_core::dynamics::{classify_outcome, run, run_indexed, sweep, sweep_with};
use gdl_core::*;
use proptest::prelude::*;

fn cfg(seed: u64, iters: usize) -> RunConfig {
    RunConfig {
        iters,
        tail_window: 50,
        seed,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn runs_are_reproducible(seed in any::<u64>(), idx in 0u64..1000, a in 0usize..10) {
        let algo = AlgoId::ALL[a];
        let c = cfg(seed, 120);
        let t1 = run_indexed(&GameId::ZeroSumN, algo, &c, idx).unwrap();
        let t2 = run_indexed(&GameId::ZeroSumN, algo, &c, idx).unwrap();
        prop_assert_eq!(format!("{t1:?}"), format!("{t2:?}"));
    }

    #[test]
    fn cycles_keep_moving(seed in any::<u64>(), a in 0usize..10) {
        let c = cfg(seed, 400);
        let traj = run(&GameId::ZeroSumN, AlgoId::ALL[a], &c).unwrap();
        let out = classify_outcome(&traj, &GameId::ZeroSumN, &c);
        if out.kind == OutcomeKind::Cycle {
            let tail = &traj.points[traj.points.len() - c.tail_window..];
            let spread = tail.iter().map(|p| p.dist(tail[0])).fold(0.0, f64::max);
            prop_assert!(spread > 10.0 * c.step_tol);
        }
    }

    #[test]
    fn trajectories_have_consistent_lengths(seed in any::<u64>(), a in 0usize..10) {
        let c = cfg(seed, 100);
        let traj = run(&GameId::MarketM, AlgoId::ALL[a], &c).unwrap();
        prop_assert_eq!(traj.points.len(), traj.losses.len());
        prop_assert_eq!(traj.points.len(), traj.xi_norms.len());
        prop_assert!(traj.iters_used() <= c.iters);
    }
}

#[test]
fn sweep_is_independent_of_execution_strategy() {
    let c = cfg(123, 300);
    for game in [GameId::ZeroSumN, GameId::MarketM] {
        for algo in AlgoId::ALL {
            let a = sweep_with(Execution::Sequential, &game, algo, &c, 16).unwrap();
            let b = sweep(&game, algo, &c, 16).unwrap();
            assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
    }
}

#[test]
fn large_learning_rate_diverges() {
    let c = RunConfig {
        iters: 100,
        tail_window: 10,
        hp: HyperParams::with_alpha(0.5),
        init: Init::Fixed(Params::new(3.0, 3.0)),
        ..Default::default()
    };
    let traj = run(&GameId::MarketM, AlgoId::GD, &c).unwrap();
    assert_eq!(
        classify_outcome(&traj, &GameId::MarketM, &c).kind,
        OutcomeKind::Diverged
    );
}

#[test]
fn zero_sum_runs_stay_bounded() {
    let c = RunConfig {
        seed: 77,
        ..Default::default()
    };
    for algo in AlgoId::ALL {
        let r = sweep(&GameId::ZeroSumN, algo, &c, 100).unwrap();
        let bounded = r
            .per_run
            .iter()
            .filter(|x| x.outcome.max_norm <= 10.0)
            .count();
        assert!(bounded >= 99, "{algo}: {bounded}");
        assert_eq!(r.count(OutcomeKind::ConvergedCritical), 0, "{algo}");
    }
}
