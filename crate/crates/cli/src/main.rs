//! `gdl`: single runs, sweeps, certificates, point classification and a
//! quick self-test over the core library.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdl_core::algorithms::{sga_lambda, shaping_term, update_jacobian_fd};
use gdl_core::certify::{self, CertReport};
use gdl_core::dynamics::{self, classify_outcome, run_from};
use gdl_core::game::classify_critical_point;
use gdl_core::io::{write_sweep_csv, write_trajectory_csv, SweepSummary};
use gdl_core::matrix::{classify_definiteness, decompose_blocks, dot, is_negative_definite};
use gdl_core::{AlgoId, GameId, HyperParams, Init, Matrix2, Params, RunConfig, SweepResult};
use serde_json::json;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "gdl",
    version,
    about = "Gradient dynamics in differentiable games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one trajectory per selected algorithm.
    Run(RunArgs),
    /// Run and classify many randomly initialised trajectories.
    Sweep(SweepArgs),
    /// Exact certificate that the game has a single critical point.
    Certify(CertifyArgs),
    /// Classify the point given by --init (critical type and definiteness).
    Classify(ClassifyArgs),
    /// Fast consistency checks; exits 2 if any fails.
    Selftest,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Game: m, msigma, n or convex.
    #[arg(long, default_value = "m", value_parser = ["m", "msigma", "n", "convex"])]
    game: String,
    /// Radius of the deformed region for msigma, in (0, 0.1).
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args, Debug)]
struct DynArgs {
    /// Algorithm name, or `all`.
    #[arg(long, default_value = "gd", value_parser = parse_algos)]
    algo: AlgoSel,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    gamma: f64,
    #[arg(long, default_value_t = 3000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `normal` or a fixed starting point `x,y`.
    #[arg(long, default_value = "normal", allow_hyphen_values = true, value_parser = parse_init)]
    init: Init,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    dyn_args: DynArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    dyn_args: DynArgs,
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Point to classify, `x,y`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_init)]
    init: Init,
    /// Gradient-norm threshold for calling the point critical.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
struct AlgoSel(Vec<AlgoId>);

fn parse_algos(s: &str) -> Result<AlgoSel, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(AlgoSel(AlgoId::ALL.to_vec()));
    }
    s.parse::<AlgoId>()
        .map(|a| AlgoSel(vec![a]))
        .map_err(|_| format!("expected one of {}, all", names()))
}

fn names() -> String {
    AlgoId::ALL
        .iter()
        .map(|a| a.name())
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_init(s: &str) -> Result<Init, String> {
    if s.eq_ignore_ascii_case("normal") {
        return Ok(Init::StdNormal);
    }
    let (x, y) = s.split_once(',').ok_or("expected `normal` or `x,y`")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y: {e}"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err("coordinates must be finite".into());
    }
    Ok(Init::Fixed(Params::new(x, y)))
}

/// Failure modes, mapped to exit codes 1 (usage) and 2 (computation).
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<gdl_core::Error> for Failure {
    fn from(e: gdl_core::Error) -> Self {
        match e {
            gdl_core::Error::InvalidConfig(_) | gdl_core::Error::InvalidSigma(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("i/o: {e}"))
    }
}

type CliResult<T> = Result<T, Failure>;

impl GameArgs {
    fn resolve(&self) -> CliResult<GameId> {
        match (self.game.as_str(), self.sigma) {
            ("msigma", Some(s)) => Ok(GameId::market_sigma(s)?),
            (_, Some(_)) => Err(Failure::Usage(
                "--sigma only applies to --game msigma".into(),
            )),
            (g, None) => Ok(g.parse()?),
        }
    }
}

impl DynArgs {
    fn config(&self) -> CliResult<RunConfig> {
        let hp = HyperParams {
            alpha: self.alpha,
            gamma: self.gamma,
            ..Default::default()
        };
        let defaults = RunConfig::default();
        // Short runs classify over the whole trajectory.
        let cfg = RunConfig {
            iters: self.iters,
            tail_window: defaults.tail_window.min(self.iters.max(1)),
            hp,
            init: self.init,
            seed: self.seed,
            ..defaults
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Buffered sink on `--out` or standard output.
fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<W: Write + ?Sized>(w: &mut W, v: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}

fn cmd_run(a: &RunArgs) -> CliResult<()> {
    let game = a.game.resolve()?;
    let cfg = a.dyn_args.config()?;
    let algos = &a.dyn_args.algo.0;
    // Every algorithm starts from the same point.
    let p0 = dynamics::sample_init(&cfg, 0);
    let mut out = open_out(a.out.out.as_deref())?;
    match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let multi = algos.len() > 1;
            for (i, &algo) in algos.iter().enumerate() {
                let traj = run_from(&game, algo, &cfg, p0)?;
                write_trajectory_csv(&mut out, &traj, multi.then_some(algo), i == 0)?;
            }
        }
        Format::Json => {
            let mut runs = Vec::new();
            for &algo in algos {
                let traj = run_from(&game, algo, &cfg, p0)?;
                let outcome = classify_outcome(&traj, &game, &cfg);
                let mut rec = json!({
                    "algo": algo.name(),
                    "outcome": outcome,
                    "points": traj.points.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
                    "xi_norms": traj.xi_norms,
                });
                if algo == AlgoId::SGA {
                    // The alignment sign switches along the path; keep it for inspection.
                    let lambda: Vec<f64> =
                        traj.points.iter().map(|&p| sga_lambda(&game, p)).collect();
                    rec["sga_lambda"] = json!(lambda);
                }
                runs.push(rec);
            }
            write_json(
                &mut out,
                &json!({ "game": game.short_name(), "sigma": game.sigma(), "init": [p0.x, p0.y], "runs": runs }),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_sweeps(
    game: &GameId,
    algos: &[AlgoId],
    cfg: &RunConfig,
    runs: usize,
) -> CliResult<Vec<SweepResult>> {
    let go = || -> CliResult<Vec<SweepResult>> {
        algos
            .iter()
            .map(|&a| dynamics::sweep(game, a, cfg, runs).map_err(Failure::from))
            .collect()
    };
    match thread_cap()? {
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Compute(format!("thread pool: {e}")))?;
            pool.install(go)
        }
        _ => go(),
    }
}

/// `GDL_THREADS`, if set, caps the sweep worker count.
fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var("GDL_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!(
                "GDL_THREADS must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn cmd_sweep(a: &SweepArgs) -> CliResult<()> {
    let game = a.game.resolve()?;
    let cfg = a.dyn_args.config()?;
    if a.runs == 0 {
        return Err(Failure::Usage("--runs must be at least 1".into()));
    }
    let results = run_sweeps(&game, &a.dyn_args.algo.0, &cfg, a.runs)?;
    let summary = serde_json::to_value(SweepSummary::new(&game, a.runs, &cfg, &results))
        .map_err(|e| Failure::Compute(e.to_string()))?;
    let mut out = open_out(a.out.out.as_deref())?;
    match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(&mut out, &summary)?,
        Format::Csv => {
            write_sweep_csv(&mut out, &results, true)?;
            match &a.out.out {
                Some(p) => {
                    let mut side = p.clone().into_os_string();
                    side.push(".summary.json");
                    let mut f = BufWriter::new(File::create(PathBuf::from(side))?);
                    write_json(&mut f, &summary)?;
                    f.flush()?;
                }
                None => write_json(&mut io::stderr().lock(), &summary)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_certify(a: &CertifyArgs) -> CliResult<()> {
    let game = a.game.resolve()?;
    let rep: CertReport = certify::certify_unique_critical(&game).map_err(|e| match e {
        gdl_core::Error::UnsupportedGame(g) => {
            Failure::Usage(format!("no certificate for game `{g}`; use m or n"))
        }
        other => other.into(),
    })?;
    let mut out = open_out(a.out.out.as_deref())?;
    match a.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let v = serde_json::to_value(&rep).map_err(|e| Failure::Compute(e.to_string()))?;
            write_json(&mut out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "game,resultant_degree,real_root_count,conclusion")?;
            writeln!(
                out,
                "{},{},{},{}",
                game.short_name(),
                rep.resultant_degree,
                rep.real_root_count,
                rep.conclusion
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs) -> CliResult<()> {
    let game = a.game.resolve()?;
    let p = match a.init {
        Init::Fixed(p) => p,
        _ => return Err(Failure::Usage("classify needs a point: --init x,y".into())),
    };
    let eval = game.eval(p);
    let class = classify_critical_point(&game, p, a.tol);
    let report = classify_definiteness(eval.hess);
    let class_name = serde_json::to_value(class).map_err(|e| Failure::Compute(e.to_string()))?;
    let mut out = open_out(a.out.out.as_deref())?;
    match a.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            &mut out,
            &json!({
                "game": game.short_name(),
                "point": [p.x, p.y],
                "class": class_name,
                "xi": eval.xi,
                "hessian": eval.hess.rows(),
                "definiteness": report,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "x,y,class,xi_norm")?;
            writeln!(
                out,
                "{},{},{},{}",
                gdl_core::io::fmt_f64(p.x),
                gdl_core::io::fmt_f64(p.y),
                class_name.as_str().unwrap_or_default(),
                gdl_core::io::fmt_f64(gdl_core::matrix::norm(eval.xi))
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_selftest() -> CliResult<()> {
    let mut failed = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    };

    for game in [GameId::MarketM, GameId::ZeroSumN] {
        let ok = certify::certify_unique_critical(&game)
            .is_ok_and(|r| r.real_root_count == 1 && r.conclusion);
        check(&format!("certificate {game}"), ok);
    }

    let n = GameId::ZeroSumN;
    let a = 0.1;
    let hp = HyperParams {
        alpha: a,
        gamma: a,
        ..Default::default()
    };
    let la = Matrix2::new(-1.0 + a, 1.0 + a, -1.0 - a, -1.0 + a);
    let jac_ok = [
        (
            AlgoId::EG,
            Matrix2::new(-1.0, 1.0 + 2.0 * a, -1.0 - 2.0 * a, -1.0),
        ),
        (
            AlgoId::CO,
            Matrix2::new(-1.0 + 2.0 * a, 1.0, -1.0, -1.0 + 2.0 * a),
        ),
        (AlgoId::LA, la),
        (AlgoId::CGD, la.scale(1.0 / (1.0 + a * a))),
    ]
    .iter()
    .all(|(algo, want)| {
        update_jacobian_fd(&n, *algo, Params::ORIGIN, &hp, 1e-6)
            .is_ok_and(|j| j.max_abs_diff(want) < 1e-6)
    });
    check("fixed-point Jacobians in n", jac_ok);
    let nd_ok = AlgoId::ALL.iter().all(|&algo| {
        update_jacobian_fd(&n, algo, Params::ORIGIN, &HyperParams::default(), 1e-6)
            .is_ok_and(|j| is_negative_definite(&j))
    });
    check("negative-definite update Jacobians", nd_ok);

    let grid: Vec<Params> = (0..40)
        .flat_map(|i| {
            (0..40).map(move |j| Params::new(-10.0 + 0.5 * i as f64, -10.0 + 0.5 * j as f64))
        })
        .collect();
    let outward = grid
        .iter()
        .filter(|p| {
            let r2 = p.x * p.x + p.y * p.y;
            r2 > 3.0 && r2 <= 100.0
        })
        .all(|p| dot(p.to_vec(), n.grad(*p)) > 1.0);
    check("outward field in n", outward);
    let lola = grid.iter().all(|&p| {
        let (_, ho) = decompose_blocks(n.hessian(p));
        let (l, r) = (shaping_term(&n, p), ho.mul_vec(n.grad(p)));
        (l[0] - r[0]).abs() <= 1e-12 * (1.0 + r[0].abs())
            && (l[1] - r[1]).abs() <= 1e-12 * (1.0 + r[1].abs())
    });
    check("LOLA shaping identity in n", lola);

    let implications = grid.windows(2).all(|w| {
        classify_definiteness(Matrix2::new(w[0].x, w[0].y, w[1].x, w[1].y))
            .violated_implications()
            .is_empty()
    });
    check("definiteness implications", implications);

    let cfg = RunConfig {
        iters: 1000,
        ..Default::default()
    };
    let cycles = dynamics::sweep(&n, AlgoId::GD, &cfg, 50)
        .is_ok_and(|r| r.count(gdl_core::OutcomeKind::Cycle) == 50);
    check("gd cycles in n", cycles);

    if failed > 0 {
        return Err(Failure::Compute(format!(
            "{failed} self-test check(s) failed"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Selftest => cmd_selftest(),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
