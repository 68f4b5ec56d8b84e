//! Command-line front end. Exit codes: 0 success, 2 configuration error, 3 simulation abort.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kick::{simulate_kick, WaveformDoc};
use crate::sim::{
    pendulum_push, push_ladder, run_push, run_scenario_with_messages, ScenarioConfig, ScenarioKind, TrajectoryLog,
};
use crate::skills::{parse_controller_line, ControllerMsg, GamePhase};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "humanoid-motion", version, about = "Walking, push recovery and kick simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario config and write trajectory.csv and summary.json.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Game-controller JSON lines, `-` for standard input.
        #[arg(long)]
        controller: Option<String>,
    },
    /// Pendulum push benchmark with and without balance feedback.
    PushTest {
        #[arg(long, default_value_t = 5.0)]
        mass: f64,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 0.9)]
        distance: f64,
        /// Base scenario; defaults to walking in place.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Simulate one kick and print its summary.
    KickSim {
        #[arg(long)]
        waveform: Option<PathBuf>,
        #[arg(long)]
        strength: Option<f64>,
        /// Include the foot trace.
        #[arg(long)]
        trace: bool,
    },
    /// Moving-ball interception; game-controller lines are read from standard input.
    Intercept {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Read game-controller lines from standard input instead of starting in play.
        #[arg(long)]
        stdin: bool,
    },
    /// Serve the waveform HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "waveform.json")]
        waveforms: PathBuf,
    },
    /// Schema-check scenario configs and waveform documents.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

/// Entry point used by the binary.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdin = std::io::stdin();
    execute(cli, &mut stdin.lock(), &mut std::io::stdout(), &mut std::io::stderr())
}

/// Runs a parsed command against the given streams and returns the exit code.
pub fn execute(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, input, out) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "{}", error_json(&e));
            code
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Aborted(_) => EXIT_ABORT,
        _ => EXIT_CONFIG,
    }
}

/// Machine-readable error body shared with the HTTP service.
pub fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Config { .. } | Error::Json(_) => "config",
        Error::Io(_) => "io",
        Error::Aborted(_) => "aborted",
        Error::InvalidSpec(_) => "invalid_spec",
        _ => "invalid_input",
    };
    let mut body = json!({ "v": 1, "error": kind, "message": e.to_string() });
    if let Error::Config { pointer, .. } = e {
        body["pointer"] = json!(pointer);
    }
    body
}

fn read_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config("", format!("{}: {e}", path.display())))?;
    ScenarioConfig::parse(&text)
}

/// Reads controller lines. An optional `"t"` field gives the time in seconds; lines
/// without one apply from the start.
pub fn read_controller_lines(input: &mut dyn BufRead) -> Result<Vec<(f64, ControllerMsg)>> {
    let mut msgs = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut t = 0.0;
        let mut text = line.clone();
        if let Ok(Value::Object(mut map)) = serde_json::from_str::<Value>(&line) {
            if let Some(tv) = map.remove("t").and_then(|v| v.as_f64()) {
                t = tv;
                text = Value::Object(map).to_string();
            }
        }
        msgs.push((t, parse_controller_line(&text)));
    }
    Ok(msgs)
}

fn start_in_play() -> Vec<(f64, ControllerMsg)> {
    vec![(0.0, ControllerMsg::Set { phase: GamePhase::Play, secondary: None })]
}

fn finish_run(log: &TrajectoryLog) -> Result<i32> {
    if log.summary.aborted {
        return Err(Error::Aborted(log.summary.reason.clone().unwrap_or_else(|| "diverged".into())));
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Run { config, out: dir, controller } => {
            let cfg = read_config(&config)?;
            let msgs = match controller.as_deref() {
                None => start_in_play(),
                Some("-") => read_controller_lines(input)?,
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    read_controller_lines(&mut text.as_bytes())?
                }
            };
            let log = run_scenario_with_messages(&cfg, &msgs)?;
            log.write_to(&dir)?;
            finish_run(&log)
        }
        Command::PushTest { mass, length, distance, config } => {
            let mut base = match config {
                Some(p) => read_config(&p)?,
                None => ScenarioConfig::new(ScenarioKind::Push),
            };
            base.scenario = ScenarioKind::Push;
            base.pendulum.mass = mass;
            base.pendulum.cord_length = length;
            base.pendulum.retraction = distance;
            base.validate()?;
            let dv = pendulum_push(&base.pendulum.spec(), &base.robot)?;
            let closed = run_push(&base)?;
            let mut open_cfg = base.clone();
            open_cfg.controller = base.controller.open_loop();
            let open = run_push(&open_cfg)?;
            let steps: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).filter(|d| *d <= length).collect();
            let ladder = push_ladder(&base, &[mass], &steps)?;
            let body = json!({
                "v": 1,
                "mass": mass,
                "length": length,
                "distance": distance,
                "delta_v": dv,
                "recovered": closed.summary.recovered,
                "recovered_open_loop": open.summary.recovered,
                "max_com_error": closed.summary.max_com_error,
                "ladder": ladder,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            finish_run(&closed)
        }
        Command::KickSim { waveform, strength, trace } => {
            let doc = match waveform {
                Some(p) => {
                    let text =
                        std::fs::read_to_string(&p).map_err(|e| Error::config("", format!("{}: {e}", p.display())))?;
                    WaveformDoc::parse(&text)?
                }
                None => WaveformDoc::default(),
            };
            let mut profile = doc.profile();
            if let Some(s) = strength {
                if !(0.0..=1.0).contains(&s) {
                    return Err(Error::config("/strength", "strength outside [0, 1]"));
                }
                profile.strength = s;
            }
            let base = ScenarioConfig::new(ScenarioKind::Kick);
            let r = simulate_kick(&profile, &base.gait, &base.robot, &base.ball.model());
            let mut body = serde_json::to_value(&r)?;
            body["v"] = json!(1);
            body["strength"] = json!(profile.strength);
            if !trace {
                body.as_object_mut().expect("object").remove("footTrace");
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            Ok(EXIT_OK)
        }
        Command::Intercept { config, out: dir, stdin } => {
            let mut cfg = match config {
                Some(p) => read_config(&p)?,
                None => ScenarioConfig::new(ScenarioKind::Intercept),
            };
            cfg.scenario = ScenarioKind::Intercept;
            let msgs = if stdin { read_controller_lines(input)? } else { start_in_play() };
            let log = run_scenario_with_messages(&cfg, &msgs)?;
            if let Some(d) = dir {
                log.write_to(&d)?;
            }
            writeln!(out, "{}", log.summary_json())?;
            finish_run(&log)
        }
        Command::Serve { port, waveforms } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::service::serve(port, waveforms))?;
            Ok(EXIT_OK)
        }
        Command::Validate { files } => {
            for f in files {
                let text =
                    std::fs::read_to_string(&f).map_err(|e| Error::config("", format!("{}: {e}", f.display())))?;
                let v: Value = serde_json::from_str(&text)?;
                if v.get("retract").is_some() {
                    WaveformDoc::parse(&text)?;
                } else {
                    ScenarioConfig::parse(&text)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
