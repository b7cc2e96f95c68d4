//! The `farey-laurent` command line.
//!
//! Exit codes: 0 success, 2 domain or precondition errors (including oracle
//! mismatches), 3 insufficient precision, 64 malformed input or flags. Every
//! failure prints one error record, as JSON under `--json`.

pub mod args;
mod commands;

use std::path::Path;

use clap::{ArgAction, CommandFactory, FromArgMatches};
use serde_json::json;

use crate::error::Error;
use args::{Cli, Command, ErgodicCommand, Output};

/// A failure as reported to the user.
#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub required_floor: Option<i64>,
}

impl CliError {
    pub fn new(kind: &str, message: String, required_floor: Option<i64>) -> CliError {
        CliError {
            kind: kind.into(),
            message,
            required_floor,
        }
    }

    pub fn parse(message: impl Into<String>) -> CliError {
        CliError::new("ParseError", message.into(), None)
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind.as_str() {
            "ParseError" | "UsageError" | "InvalidField" => 64,
            "InsufficientPrecision" => 3,
            _ => 2,
        }
    }

    fn record(&self, as_json: bool) -> String {
        if as_json {
            let mut v = json!({ "schema": 1, "error": { "kind": self.kind, "message": self.message } });
            if let Some(f) = self.required_floor {
                v["error"]["required_floor"] = json!(f);
            }
            return v.to_string() + "\n";
        }
        let mut s = format!("error[{}]: {}", self.kind, self.message);
        if let Some(f) = self.required_floor {
            s.push_str(&format!(" (hint: input must be known down to degree {f}; raise precision via --floor or a longer series)"));
        }
        s + "\n"
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let floor = match &e {
            Error::InsufficientPrecision { required_floor, .. } => *required_floor,
            _ => None,
        };
        CliError::new(e.kind(), e.to_string(), floor)
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn command_tree() -> clap::Command {
    fn override_self(cmd: clap::Command) -> clap::Command {
        cmd.args_override_self(true).mut_subcommands(override_self)
    }
    override_self(Cli::command())
}

/// Reads `key=value` lines; `#` starts a comment.
fn read_config(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::parse(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        out.push((k.trim().trim_start_matches("--").to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Splices config entries in right after the subcommand path, so flags
/// given on the command line (which come later) override them. Keys the
/// subcommand does not know are ignored, so one file can serve several
/// subcommands.
fn with_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let entries = read_config(Path::new(&path))?;
    let root = command_tree();
    let mut cmd = &root;
    let mut at = 1;
    while let Some(sub) = argv.get(at).and_then(|a| cmd.find_subcommand(a)) {
        cmd = sub;
        at += 1;
    }
    let mut extra = Vec::new();
    for (key, value) in entries {
        let Some(arg) = cmd.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            continue;
        };
        if key == "config" {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "1" | "yes" => extra.push(format!("--{key}")),
                "false" | "0" | "no" => {}
                _ => return Err(CliError::parse(format!("config key {key} expects true/false, got {value}"))),
            }
        } else {
            extra.push(format!("--{key}={value}"));
        }
    }
    let mut out = argv;
    out.splice(at..at, extra);
    Ok(out)
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::Cf(a) => &a.output,
        Command::Geo(a) => &a.output,
        Command::Alg(a) => &a.output,
        Command::Intermediates(a) => &a.output,
        Command::Classify(a) => &a.output,
        Command::Tree(a) => &a.output,
        Command::Ergodic(ErgodicCommand::Rate(a)) => &a.output,
        Command::Ergodic(ErgodicCommand::Invariance(a)) => &a.output,
        Command::Ergodic(ErgodicCommand::Degrees(a)) => &a.output,
    }
}

fn name_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::Cf(_) => "cf",
        Command::Geo(_) => "geo",
        Command::Alg(_) => "alg",
        Command::Intermediates(_) => "intermediates",
        Command::Classify(_) => "classify",
        Command::Tree(_) => "tree",
        Command::Ergodic(ErgodicCommand::Rate(_)) => "ergodic rate",
        Command::Ergodic(ErgodicCommand::Invariance(_)) => "ergodic invariance",
        Command::Ergodic(ErgodicCommand::Degrees(_)) => "ergodic degrees",
    }
}

fn dispatch(cmd: &Command) -> Result<commands::Report, CliError> {
    match cmd {
        Command::Cf(a) => commands::cf(a),
        Command::Geo(a) => commands::geo(a),
        Command::Alg(a) => commands::alg(a),
        Command::Intermediates(a) => commands::intermediates(a),
        Command::Classify(a) => commands::classify(a),
        Command::Tree(a) => commands::tree(a),
        Command::Ergodic(ErgodicCommand::Rate(a)) => commands::rate(a),
        Command::Ergodic(ErgodicCommand::Invariance(a)) => commands::invariance(a),
        Command::Ergodic(ErgodicCommand::Degrees(a)) => commands::degrees(a),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let wants_json = argv.iter().any(|a| a == "--json");
    let fail = |e: CliError| Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: e.record(wants_json),
    };
    let argv = match with_config(argv) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let cli = match command_tree()
        .try_get_matches_from(&argv)
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            return fail(CliError::new("UsageError", e.to_string().trim_end().to_string(), None));
        }
    };
    let out = output_of(&cli.command).clone();
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let mut body = if report.raw || !out.json {
        let mut s = report.text.clone();
        if let Some(o) = &report.oracle {
            s.push_str(&format!("oracle: {o}\n"));
        }
        s
    } else {
        let mut v = json!({ "schema": 1, "command": name_of(&cli.command), "result": report.json });
        if let Some(o) = &report.oracle {
            v["oracle"] = json!(o);
        }
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    };
    // Ergodic experiments write their per-sample tables to --out themselves.
    let file_out = out.out.filter(|_| !matches!(cli.command, Command::Ergodic(_)));
    if let Some(path) = file_out {
        if let Err(e) = std::fs::write(&path, &body) {
            return fail(CliError::new("IoError", format!("cannot write {}: {e}", path.display()), None));
        }
        body = String::new();
    }
    Outcome {
        code: 0,
        stdout: body,
        stderr: String::new(),
    }
}

/// Entry point of the binary.
pub fn main() -> std::process::ExitCode {
    let o = run(std::env::args());
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    std::process::ExitCode::from(o.code as u8)
}
