//! Command-line entry point.
//!
//! Headless mode (`--scenario`) runs a scenario to its end, writes the
//! transcript and exits. Serve mode (`--serve`) keeps a live world behind
//! the HTTP API until interrupted.

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration as Wall;

use chrono::{DateTime, NaiveDateTime, Timelike};
use clap::Parser;
use housekeeper::config::WorldConfig;
use housekeeper::fixtures;
use housekeeper::planner::{parse_map, GridMap};
use housekeeper::sim::scenario::Scenario;
use housekeeper::sim::transcript::Transcript;
use housekeeper::state::{load_state, save_state};
use housekeeper::World;
use thiserror::Error;

use crate::api::{self, AppState};

#[derive(Debug, Parser)]
#[command(name = "housekeeper", version, about = "Housekeeper robot simulator")]
pub struct Args {
    /// House map document; the stock house when omitted.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// World configuration (TOML); the stock configuration when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scenario to run (TOML).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// State document. Headless runs write the final state here; the
    /// service resumes from it when it exists and saves to it on shutdown.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Transcript output; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the scenario's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulated seconds per wall-clock second. Unbounded when omitted.
    #[arg(long)]
    pub speed: Option<u64>,
    /// Run the HTTP service instead of a headless scenario.
    #[arg(long)]
    pub serve: bool,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Simulated start time for a fresh service world (default: now, UTC).
    #[arg(long)]
    pub start: Option<NaiveDateTime>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    World(#[from] housekeeper::sim::WorldError),
    #[error("cannot bind {addr}: {source}")]
    BindFailure {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error("nothing to do: pass --scenario for a headless run or --serve for the service")]
    Usage,
}

impl CliError {
    /// Process exit status: 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage => 2,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn format_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Format {
        path: path.to_owned(),
        message: e.to_string(),
    }
}

fn load_map(args: &Args) -> Result<GridMap, CliError> {
    match &args.map {
        Some(p) => parse_map(&read(p)?).map_err(|e| format_err(p, e)),
        None => Ok(fixtures::house_map()),
    }
}

fn load_config(args: &Args) -> Result<WorldConfig, CliError> {
    match &args.config {
        Some(p) => WorldConfig::from_toml(&read(p)?).map_err(|e| format_err(p, e)),
        None => Ok(fixtures::house_config()),
    }
}

fn load_scenario(args: &Args) -> Result<Option<Scenario>, CliError> {
    let Some(p) = &args.scenario else {
        return Ok(None);
    };
    let mut s = Scenario::from_toml(&read(p)?).map_err(|e| format_err(p, e))?;
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    Ok(Some(s))
}

pub async fn run(args: Args) -> Result<(), CliError> {
    if args.serve {
        return serve(args).await;
    }
    let scenario = load_scenario(&args)?.ok_or(CliError::Usage)?;
    let map = load_map(&args)?;
    let config = load_config(&args)?;
    let mut world = World::from_scenario(&scenario, config, map)?;

    let mut transcript = Transcript::default();
    match args.speed {
        None => transcript.extend(world.advance_to(scenario.end)),
        Some(k) => {
            let mut ticker = tokio::time::interval(Wall::from_secs(1));
            while world.now() < scenario.end {
                ticker.tick().await;
                let step = (scenario.end - world.now()).num_seconds().min(k as i64);
                transcript.extend(world.advance(step as u64));
            }
        }
    }
    transcript.extend(world.summary());

    let doc = transcript.to_jsonl();
    match &args.out {
        Some(p) => write(p, &doc)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(doc.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    if let Some(p) = &args.state {
        write(p, &save_state(&world))?;
    }
    Ok(())
}

fn wall_now() -> NaiveDateTime {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(0);
    DateTime::from_timestamp(secs, 0)
        .expect("current time is representable")
        .naive_utc()
        .with_nanosecond(0)
        .expect("zero nanoseconds is valid")
}

/// Build the service world: resume from `--state` if it exists, otherwise
/// start fresh (from the scenario when one is given).
pub fn initial_world(args: &Args) -> Result<World, CliError> {
    if let Some(p) = &args.state {
        if p.exists() {
            return load_state(&read(p)?).map_err(|e| format_err(p, e));
        }
    }
    let map = load_map(args)?;
    let config = load_config(args)?;
    match load_scenario(args)? {
        Some(s) => Ok(World::from_scenario(&s, config, map)?),
        None => Ok(World::new(
            config,
            map,
            args.start.unwrap_or_else(wall_now),
            args.seed.unwrap_or(0),
        )?),
    }
}

async fn serve(args: Args) -> Result<(), CliError> {
    let state = AppState::new(initial_world(&args)?);
    let addr = SocketAddr::from(([0, 0, 0, 0], args.port));
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| CliError::BindFailure { addr, source })?;
    eprintln!("housekeeper: serving on http://{addr}");

    if let Some(k) = args.speed {
        let clock = state.clone();
        tokio::spawn(async move {
            let mut ticker = tokio::time::interval(Wall::from_secs(1));
            loop {
                ticker.tick().await;
                clock.advance(k);
            }
        });
    }

    axum::serve(listener, api::router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|source| CliError::BindFailure { addr, source })?;

    if let Some(p) = &args.state {
        write(p, &save_state(&state.world()))?;
    }
    Ok(())
}
