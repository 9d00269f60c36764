//! Experiment configuration: a strict JSON file, overridden by command-line flags.

use crate::params::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

pub const OUT_DIR_ENV: &str = "ZLAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "zlab-out";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("missing required parameter `{0}`")]
    Missing(&'static str),
    #[error("config file is for `{file}` but the command line asks for `{cli}`")]
    CommandMismatch { file: Command, cli: Command },
    #[error("bad flag `{0}`: {1}")]
    Flag(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PsiCheck,
    Norm,
    EstimateSweep,
    TrilinearSweep,
    Counterexample,
    DuhamelLb,
    LocalizeCheck,
    Solve,
    Nls,
    Subsonic,
    GroundState,
    BlowupTrace,
    Lifespan,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::PsiCheck,
        Command::Norm,
        Command::EstimateSweep,
        Command::TrilinearSweep,
        Command::Counterexample,
        Command::DuhamelLb,
        Command::LocalizeCheck,
        Command::Solve,
        Command::Nls,
        Command::Subsonic,
        Command::GroundState,
        Command::BlowupTrace,
        Command::Lifespan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::PsiCheck => "psi-check",
            Command::Norm => "norm",
            Command::EstimateSweep => "estimate-sweep",
            Command::TrilinearSweep => "trilinear-sweep",
            Command::Counterexample => "counterexample",
            Command::DuhamelLb => "duhamel-lb",
            Command::LocalizeCheck => "localize-check",
            Command::Solve => "solve",
            Command::Nls => "nls",
            Command::Subsonic => "subsonic",
            Command::GroundState => "ground-state",
            Command::BlowupTrace => "blowup-trace",
            Command::Lifespan => "lifespan",
        }
    }

    /// Parameter block with every default filled in.
    pub fn default_params(self) -> Params {
        match self {
            Command::PsiCheck => Params::PsiCheck(Default::default()),
            Command::Norm => Params::Norm(Default::default()),
            Command::EstimateSweep => Params::EstimateSweep(Default::default()),
            Command::TrilinearSweep => Params::TrilinearSweep(Default::default()),
            Command::Counterexample => Params::Counterexample(Default::default()),
            Command::DuhamelLb => Params::DuhamelLb(Default::default()),
            Command::LocalizeCheck => Params::LocalizeCheck(Default::default()),
            Command::Solve => Params::Solve(Default::default()),
            Command::Nls => Params::Nls(Default::default()),
            Command::Subsonic => Params::Subsonic(Default::default()),
            Command::GroundState => Params::GroundState(Default::default()),
            Command::BlowupTrace => Params::BlowupTrace(Default::default()),
            Command::Lifespan => Params::Lifespan(Default::default()),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::Parse(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(ConfigError::Parse(format!("unknown format `{other}`, expected csv or json"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    PsiCheck(PsiCheckParams),
    Norm(NormParams),
    EstimateSweep(EstimateParams),
    TrilinearSweep(TrilinearParams),
    Counterexample(CounterexampleParams),
    DuhamelLb(DuhamelParams),
    LocalizeCheck(LocalizeParams),
    Solve(SolveParams),
    Nls(NlsParams),
    Subsonic(SubsonicParams),
    GroundState(GroundStateParams),
    BlowupTrace(BlowupParams),
    Lifespan(LifespanParams),
}

fn typed<T: serde::de::DeserializeOwned>(map: Map<String, Value>) -> Result<T, ConfigError> {
    serde_json::from_value(Value::Object(map)).map_err(|e| ConfigError::Parse(format!("parameters: {e}")))
}

impl Params {
    pub fn resolve(command: Command, map: Map<String, Value>) -> Result<Params, ConfigError> {
        let p = match command {
            Command::PsiCheck => Params::PsiCheck(typed(map)?),
            Command::Norm => Params::Norm(typed(map)?),
            Command::EstimateSweep => {
                let p: EstimateParams = typed(map)?;
                if p.estimate.is_none() {
                    return Err(ConfigError::Missing("estimate"));
                }
                Params::EstimateSweep(p)
            }
            Command::TrilinearSweep => Params::TrilinearSweep(typed(map)?),
            Command::Counterexample => {
                let p: CounterexampleParams = typed(map)?;
                if p.lemma.is_none() {
                    return Err(ConfigError::Missing("lemma"));
                }
                Params::Counterexample(p)
            }
            Command::DuhamelLb => Params::DuhamelLb(typed(map)?),
            Command::LocalizeCheck => Params::LocalizeCheck(typed(map)?),
            Command::Solve => Params::Solve(typed(map)?),
            Command::Nls => Params::Nls(typed(map)?),
            Command::Subsonic => Params::Subsonic(typed(map)?),
            Command::GroundState => Params::GroundState(typed(map)?),
            Command::BlowupTrace => Params::BlowupTrace(typed(map)?),
            Command::Lifespan => Params::Lifespan(typed(map)?),
        };
        Ok(p)
    }
}

/// A validated run description. Serialises to the same JSON it parses from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub format: Format,
    pub plot: bool,
    pub parameters: Params,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawConfig {
    command: Option<Command>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    format: Option<Format>,
    plot: Option<bool>,
    #[serde(default)]
    parameters: Map<String, Value>,
}

/// Values given on the command line; each one beats the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot: Option<bool>,
    pub params: Map<String, Value>,
}

fn camel_case(flag: &str) -> String {
    let mut out = String::with_capacity(flag.len());
    let mut upper = false;
    for ch in flag.chars() {
        if ch == '-' || ch == '_' {
            upper = true;
        } else if upper {
            out.extend(ch.to_uppercase());
            upper = false;
        } else {
            out.push(ch);
        }
    }
    out
}

fn flag_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

fn looks_like_flag(tok: &str) -> bool {
    tok.starts_with("--") && tok.len() > 2
}

/// Splits `--key value`, `--key=value` and bare `--switch` tokens into overrides.
pub fn parse_flags(tokens: &[String]) -> Result<Overrides, ConfigError> {
    let mut o = Overrides::default();
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        if !looks_like_flag(tok) {
            return Err(ConfigError::Flag(tok.clone(), "expected --key value".into()));
        }
        let body = &tok[2..];
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => {
                let next = tokens.get(i + 1).filter(|t| !looks_like_flag(t));
                if next.is_some() {
                    i += 1;
                }
                (body.to_string(), next.cloned())
            }
        };
        i += 1;
        let need = |v: Option<String>| v.ok_or_else(|| ConfigError::Flag(key.clone(), "needs a value".into()));
        match key.as_str() {
            "config" => o.config = Some(PathBuf::from(need(value)?)),
            "seed" => {
                let v = need(value)?;
                o.seed = Some(v.parse().map_err(|_| ConfigError::Flag(key.clone(), format!("`{v}` is not a u64")))?);
            }
            "out" => o.out = Some(PathBuf::from(need(value)?)),
            "format" => o.format = Some(need(value)?.parse()?),
            "plot" => {
                o.plot = Some(match value.as_deref() {
                    None | Some("true") => true,
                    Some("false") => false,
                    Some(v) => return Err(ConfigError::Flag(key.clone(), format!("`{v}` is not a boolean"))),
                })
            }
            _ => {
                let v = value.map(|v| flag_value(&v)).unwrap_or(Value::Bool(true));
                o.params.insert(camel_case(&key), v);
            }
        }
    }
    Ok(o)
}

/// Reads a config file, or an empty config when `path` is `None`.
fn read_raw(path: Option<&Path>) -> Result<RawConfig, ConfigError> {
    match path {
        None => Ok(RawConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            raw_from_str(&text)
        }
    }
}

fn raw_from_str(text: &str) -> Result<RawConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

fn merge(command: Option<Command>, raw: RawConfig, o: Overrides, env_out: Option<PathBuf>) -> Result<ExperimentConfig, ConfigError> {
    let command = match (command, raw.command) {
        (Some(c), Some(f)) if c != f => return Err(ConfigError::CommandMismatch { file: f, cli: c }),
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(ConfigError::Missing("command")),
    };
    let mut map = raw.parameters;
    for (k, v) in o.params {
        map.insert(k, v);
    }
    let output_dir = o
        .out
        .or(env_out)
        .or(raw.output_dir)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    Ok(ExperimentConfig {
        command,
        seed: o.seed.or(raw.seed).unwrap_or(0),
        output_dir,
        format: o.format.or(raw.format).unwrap_or_default(),
        plot: o.plot.or(raw.plot).unwrap_or(false),
        parameters: Params::resolve(command, map)?,
    })
}

fn env_out_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Builds the config for `command` from the optional file named in `overrides`
/// plus the flag values; `ZLAB_OUT_DIR` sits between the file and `--out`.
pub fn parse_config(command: Command, overrides: Overrides) -> Result<ExperimentConfig, ConfigError> {
    let raw = read_raw(overrides.config.as_deref())?;
    merge(Some(command), raw, overrides, env_out_dir())
}

/// Parses a complete config document (the command comes from the file).
pub fn config_from_str(text: &str) -> Result<ExperimentConfig, ConfigError> {
    merge(None, raw_from_str(text)?, Overrides::default(), env_out_dir())
}

impl ExperimentConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}
