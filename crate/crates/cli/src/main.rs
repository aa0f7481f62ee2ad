use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use genparity::arena::{
    parse_with, write_generalized, write_parity, GameArena, GameKind, Player, PriorityProfile,
    Subgame,
};
use genparity::oracle::{brute_generalized, brute_parity, random_game, STRATEGY_BUDGET};
use genparity::psolve::{
    BuchiSolver, GenBuchiSolver, GenGoodEpSolver, GenLaySolver, GoodEpMode, GoodEpSolver,
    LaySolver,
};
use genparity::recursive::{
    escape_violation, solve_generalized, solve_parity, CancelToken, PartialSolver, SolveError,
    SolveResult, TrivialSolver,
};
use genparity::report::{parse_regions, RegionReport};

#[derive(Parser)]
#[command(name = "genparity", version, about = "Solve parity and generalized parity games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute both winning regions.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Zielonka)]
        algorithm: Algorithm,
        /// Override the kind named in the file header.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
    },
    /// Run a partial solver alone and report what it leaves unsolved.
    Partial {
        file: PathBuf,
        #[arg(long, value_enum)]
        solver: Partial,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
    },
    /// Check a region report (or Zielonka's answer) for consistency.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Against::Oracle)]
        against: Against,
        /// Report to check instead of solving the game.
        #[arg(long)]
        regions: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Write a random game.
    Generate {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        max_outdeg: usize,
        /// Maximum priority per dimension, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "4")]
        priorities: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the generalized format even for one dimension.
        #[arg(long)]
        generalized: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time algorithms on every game in a directory and print CSV.
    Bench {
        dir: PathBuf,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "zielonka,ziel-buchi,ziel-goodep,ziel-goodep-antichain,ziel-lay"
        )]
        algorithms: Vec<Algorithm>,
        /// Partial solvers to time as well.
        #[arg(long, value_enum, value_delimiter = ',')]
        partial: Vec<Partial>,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Zielonka,
    GenZielonka,
    ZielBuchi,
    ZielGoodep,
    ZielGoodepAntichain,
    ZielLay,
    Portfolio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Partial {
    Buchi,
    Goodep,
    GoodepAntichain,
    Lay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Parity,
    Generalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Against {
    Oracle,
    Cross,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

/// Failures that map to specific exit codes.
#[derive(Debug)]
enum Exit {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// Exit 3.
    TimedOut,
    /// Verification found a problem: exit 1.
    Failed,
    /// Anything else: exit 1.
    Other(String),
}

struct Game {
    arena: GameArena,
    profile: PriorityProfile,
    generalized: bool,
}

impl Game {
    fn load(path: &Path, kind: Option<Kind>) -> Result<Game, Exit> {
        let text = fs::read_to_string(path)
            .map_err(|e| Exit::Input(format!("{}: {e}", path.display())))?;
        let expected = kind.map(|k| match k {
            Kind::Parity => GameKind::Parity,
            Kind::Generalized => GameKind::Generalized,
        });
        let parsed = parse_with(&text, expected)
            .map_err(|e| Exit::Input(format!("{}: {e}", path.display())))?;
        Ok(Game {
            generalized: parsed.kind == GameKind::Generalized,
            arena: parsed.arena,
            profile: parsed.profile,
        })
    }

    fn full(&self) -> Subgame<'_> {
        Subgame::full(&self.arena)
    }
}

fn partial_solver(which: Partial, generalized: bool, cancel: &CancelToken) -> Box<dyn PartialSolver> {
    let cancel = Some(cancel.clone());
    match (which, generalized) {
        (Partial::Buchi, false) => Box::new(BuchiSolver { cancel }),
        (Partial::Buchi, true) => Box::new(GenBuchiSolver { cancel }),
        (Partial::Goodep | Partial::GoodepAntichain, false) => Box::new(GoodEpSolver {
            mode: goodep_mode(which),
            cancel,
        }),
        (Partial::Goodep | Partial::GoodepAntichain, true) => Box::new(GenGoodEpSolver {
            mode: goodep_mode(which),
            cancel,
            ..GenGoodEpSolver::default()
        }),
        (Partial::Lay, false) => Box::new(LaySolver { cancel }),
        (Partial::Lay, true) => Box::new(GenLaySolver { cancel }),
    }
}

fn goodep_mode(which: Partial) -> GoodEpMode {
    if which == Partial::GoodepAntichain {
        GoodEpMode::Antichain
    } else {
        GoodEpMode::Explicit
    }
}

/// The partial solver a combined algorithm runs at every level.
fn combined_with(algorithm: Algorithm) -> Option<Partial> {
    match algorithm {
        Algorithm::ZielBuchi => Some(Partial::Buchi),
        Algorithm::ZielGoodep => Some(Partial::Goodep),
        Algorithm::ZielGoodepAntichain => Some(Partial::GoodepAntichain),
        Algorithm::ZielLay => Some(Partial::Lay),
        _ => None,
    }
}

const PORTFOLIO: [Algorithm; 5] = [
    Algorithm::Zielonka,
    Algorithm::ZielBuchi,
    Algorithm::ZielGoodep,
    Algorithm::ZielGoodepAntichain,
    Algorithm::ZielLay,
];

fn solve_with(game: &Game, algorithm: Algorithm, cancel: &CancelToken) -> Result<SolveResult, SolveError> {
    let generalized = game.generalized || algorithm == Algorithm::GenZielonka;
    let ps: Box<dyn PartialSolver> = match combined_with(algorithm) {
        Some(which) => partial_solver(which, generalized, cancel),
        None => Box::new(TrivialSolver),
    };
    let g = game.full();
    if generalized {
        solve_generalized(&g, &game.profile, ps.as_ref(), cancel)
    } else {
        solve_parity(&g, &game.profile, ps.as_ref(), cancel)
    }
}

fn partial_with(game: &Game, which: Partial, cancel: &CancelToken) -> Result<SolveResult, SolveError> {
    let solver = partial_solver(which, game.generalized, cancel);
    let result = solver.solve(&game.full(), &game.profile);
    if cancel.is_cancelled() {
        Err(SolveError::Cancelled)
    } else {
        Ok(result)
    }
}

/// Runs `jobs` in parallel and returns the first to finish, cancelling the
/// rest. `None` on timeout.
fn race<T: Send>(
    jobs: Vec<(String, Box<dyn FnOnce(&CancelToken) -> Result<T, SolveError> + Send + '_>)>,
    timeout: Duration,
) -> Result<Option<(String, T, Duration)>, SolveError> {
    let cancel = CancelToken::new();
    let start = Instant::now();
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        let count = jobs.len();
        for (name, job) in jobs {
            let tx = tx.clone();
            let cancel = cancel.clone();
            scope.spawn(move || {
                let out = job(&cancel);
                let _ = tx.send((name, out, start.elapsed()));
            });
        }
        drop(tx);
        let mut last_error = None;
        for _ in 0..count {
            let left = timeout.saturating_sub(start.elapsed());
            match rx.recv_timeout(left) {
                Ok((name, Ok(value), took)) => {
                    cancel.cancel();
                    return Ok(Some((name, value, took)));
                }
                Ok((name, Err(e), _)) => {
                    log::warn!("{name}: {e}");
                    last_error = Some(e);
                }
                Err(_) => break,
            }
        }
        cancel.cancel();
        match last_error {
            Some(e) if !matches!(e, SolveError::Cancelled) && start.elapsed() < timeout => Err(e),
            _ => Ok(None),
        }
    })
}

fn single<'a, T: Send + 'a>(
    name: String,
    job: impl FnOnce(&CancelToken) -> Result<T, SolveError> + Send + 'a,
    timeout: Duration,
) -> Result<Option<(T, Duration)>, SolveError> {
    Ok(race(vec![(name, Box::new(job))], timeout)?.map(|(_, v, t)| (v, t)))
}

fn cmd_solve(file: &Path, algorithm: Algorithm, kind: Option<Kind>, timeout: Duration) -> Result<(), Exit> {
    let game = Game::load(file, kind)?;
    let game = &game;
    if algorithm == Algorithm::Portfolio {
        let jobs = PORTFOLIO
            .iter()
            .map(|&a| {
                let job: Box<dyn FnOnce(&CancelToken) -> _ + Send> =
                    Box::new(move |c: &CancelToken| solve_with(game, a, c));
                (value_name(a), job)
            })
            .collect();
        let (name, result, took) = race(jobs, timeout)
            .map_err(|e| Exit::Other(e.to_string()))?
            .ok_or(Exit::TimedOut)?;
        println!("# winner: {name} ({} ms)", took.as_millis());
        print!("{}", RegionReport::from_result(&result, false));
        return Ok(());
    }
    let (result, took) = single(value_name(algorithm), |c| solve_with(game, algorithm, c), timeout)
        .map_err(|e| Exit::Other(e.to_string()))?
        .ok_or(Exit::TimedOut)?;
    log::info!("{} solved in {} ms", value_name(algorithm), took.as_millis());
    print!("{}", RegionReport::from_result(&result, false));
    Ok(())
}

fn cmd_partial(file: &Path, which: Partial, kind: Option<Kind>, timeout: Duration) -> Result<(), Exit> {
    let game = Game::load(file, kind)?;
    let (result, _) = single(value_name(which), |c| partial_with(&game, which, c), timeout)
        .map_err(|e| Exit::Other(e.to_string()))?
        .ok_or(Exit::TimedOut)?;
    print!("{}", RegionReport::from_result(&result, true));
    Ok(())
}

struct Checks {
    failed: usize,
}

impl Checks {
    fn record(&mut self, name: &str, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
}

fn same_regions(a: &SolveResult, b: &SolveResult) -> Result<(), String> {
    if a.win0 == b.win0 && a.win1 == b.win1 {
        Ok(())
    } else {
        Err(format!(
            "expected REGION 0 {:?} / REGION 1 {:?}, got {:?} / {:?}",
            b.win0, b.win1, a.win0, a.win1
        ))
    }
}

fn cmd_verify(file: &Path, against: Against, regions: Option<&Path>, kind: Option<Kind>) -> Result<(), Exit> {
    let game = Game::load(file, kind)?;
    let g = game.full();
    let n = game.arena.vertex_count();
    let never = CancelToken::new();
    let candidate = match regions {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Exit::Input(format!("{}: {e}", path.display())))?;
            let report = parse_regions(&text)
                .map_err(|e| Exit::Input(format!("{}: {e}", path.display())))?;
            report
                .to_result(n)
                .ok_or_else(|| Exit::Input(format!("{}: vertex id out of range", path.display())))?
        }
        None => solve_with(&game, Algorithm::Zielonka, &never)
            .map_err(|e| Exit::Other(e.to_string()))?,
    };

    let mut checks = Checks { failed: 0 };
    checks.record(
        "partition",
        if !candidate.win0.is_disjoint(&candidate.win1) {
            Err("regions overlap".into())
        } else if candidate.win0.union(&candidate.win1) != *g.alive() || !candidate.unsolved.is_empty() {
            Err("regions do not cover every vertex".into())
        } else {
            Ok(())
        },
    );
    for player in Player::BOTH {
        let region = candidate.region(player);
        checks.record(
            &format!("trap {player}"),
            if g.is_trap(region, player.opponent()) {
                Ok(())
            } else {
                Err(format!("{} can leave region {}, or {player} cannot stay", player.opponent(), player.index()))
            },
        );
    }
    checks.record(
        "escape",
        match escape_violation(&g, &candidate) {
            None => Ok(()),
            Some((v, w)) => Err(format!("unsolved vertex {v} escapes to {w}")),
        },
    );
    match against {
        Against::Oracle => {
            let truth = if game.generalized {
                brute_generalized(&g, &game.profile, STRATEGY_BUDGET)
            } else {
                brute_parity(&g, &game.profile, STRATEGY_BUDGET)
            };
            checks.record(
                "oracle",
                truth
                    .map_err(|e| e.to_string())
                    .and_then(|t| same_regions(&candidate, &t)),
            );
        }
        Against::Cross => {
            for algorithm in PORTFOLIO {
                let result = solve_with(&game, algorithm, &never)
                    .map_err(|e| e.to_string())
                    .and_then(|r| same_regions(&candidate, &r));
                checks.record(&format!("cross {}", value_name(algorithm)), result);
            }
        }
    }
    if checks.failed > 0 {
        Err(Exit::Failed)
    } else {
        Ok(())
    }
}

fn cmd_generate(
    vertices: usize,
    max_outdeg: usize,
    priorities: &[u32],
    seed: u64,
    generalized: bool,
    out: Option<&Path>,
) -> Result<()> {
    if vertices == 0 || max_outdeg == 0 || priorities.is_empty() {
        bail!("need at least one vertex, one edge per vertex and one dimension");
    }
    let (arena, profile) = random_game(vertices, max_outdeg, priorities, seed);
    let text = if generalized || priorities.len() > 1 {
        write_generalized(&arena, &profile)
    } else {
        write_parity(&arena, &profile)
    };
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

const CSV_HEADER: &str = "file,algorithm,vertices,edges,k,time_ms,solved0,solved1,unsolved,timed_out";

fn cmd_bench(
    dir: &Path,
    algorithms: &[Algorithm],
    partial: &[Partial],
    timeout: Duration,
    csv: Option<&Path>,
) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let mut out: Box<dyn std::io::Write> = match csv {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(out, "{CSV_HEADER}")?;
    for file in files {
        let game = match Game::load(&file, None) {
            Ok(game) => game,
            Err(Exit::Input(message)) => {
                eprintln!("skipping {message}");
                continue;
            }
            Err(other) => bail!("{other:?}"),
        };
        let name = file.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let game = &game;
        let mut runs: Vec<(String, Box<dyn Fn(&CancelToken) -> Result<SolveResult, SolveError> + Sync + '_>)> =
            Vec::new();
        for &a in algorithms {
            if a == Algorithm::Portfolio {
                continue;
            }
            runs.push((value_name(a), Box::new(move |c| solve_with(game, a, c))));
        }
        for &p in partial {
            runs.push((value_name(p), Box::new(move |c| partial_with(game, p, c))));
        }
        for (label, run) in &runs {
            let outcome = single(label.clone(), |c| run(c), timeout);
            let (result, time, timed_out) = match outcome {
                Ok(Some((r, t))) => (Some(r), t, false),
                Ok(None) => (None, timeout, true),
                Err(e) => {
                    eprintln!("{name} {label}: {e}");
                    continue;
                }
            };
            let count = |f: fn(&SolveResult) -> usize| result.as_ref().map_or(0, f);
            writeln!(
                out,
                "{name},{label},{},{},{},{},{},{},{},{timed_out}",
                game.arena.vertex_count(),
                game.arena.edge_count(),
                game.profile.k(),
                time.as_millis(),
                count(|r| r.win0.len()),
                count(|r| r.win1.len()),
                result.as_ref().map_or(game.arena.vertex_count(), |r| r.unsolved.len()),
            )?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Exit> {
    let ms = Duration::from_millis;
    let other = |e: anyhow::Error| Exit::Other(format!("{e:#}"));
    match cli.command {
        Command::Solve {
            file,
            algorithm,
            kind,
            timeout_ms,
        } => cmd_solve(&file, algorithm, kind, ms(timeout_ms)),
        Command::Partial {
            file,
            solver,
            kind,
            timeout_ms,
        } => cmd_partial(&file, solver, kind, ms(timeout_ms)),
        Command::Verify {
            file,
            against,
            regions,
            kind,
        } => cmd_verify(&file, against, regions.as_deref(), kind),
        Command::Generate {
            vertices,
            max_outdeg,
            priorities,
            seed,
            generalized,
            out,
        } => cmd_generate(vertices, max_outdeg, &priorities, seed, generalized, out.as_deref())
            .map_err(other),
        Command::Bench {
            dir,
            algorithms,
            partial,
            timeout_ms,
            csv,
        } => cmd_bench(&dir, &algorithms, &partial, ms(timeout_ms), csv.as_deref()).map_err(other),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Exit::TimedOut) => {
            eprintln!("timed out");
            ExitCode::from(3)
        }
        Err(Exit::Failed) => ExitCode::from(1),
        Err(Exit::Other(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
