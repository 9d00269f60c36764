//! Experiment runner behind the `zlab` binary.
//!
//! A run takes an [`ExperimentConfig`], executes one command, and writes
//! `<command>.csv` (or `.json`), an optional `<command>.svg`, optional binary
//! artifacts, and always `<command>.manifest.json` into the output directory.

pub mod commands;
pub mod config;
pub mod output;
pub mod params;

pub use config::{config_from_str, parse_config, parse_flags, Command, ConfigError, ExperimentConfig, Format, Overrides, Params};
pub use output::{Cell, Check, OutputError, RunManifest, Series, Table};

use std::path::PathBuf;
use std::time::Instant;
use zlab_core::ZlabError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit status for a library error: bad inputs are usage errors.
pub fn exit_code_for(e: &ZlabError) -> i32 {
    match e {
        ZlabError::InvalidParameter { .. }
        | ZlabError::Hypothesis(_)
        | ZlabError::BandAboveNyquist { .. }
        | ZlabError::EmptyBand(_)
        | ZlabError::GridMismatch(_)
        | ZlabError::Empty(_) => EXIT_USAGE,
        ZlabError::BlowUp { .. } | ZlabError::NoConvergence { .. } => EXIT_FAIL,
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
    pub exit_code: i32,
}

impl ExperimentConfig {
    pub fn artifact(&self, suffix: &str, ext: &str) -> PathBuf {
        let stem = self.command.name();
        let name = if suffix.is_empty() {
            format!("{stem}.{ext}")
        } else {
            format!("{stem}.{suffix}.{ext}")
        };
        self.output_dir.join(name)
    }
}

fn write_outcome(cfg: &ExperimentConfig, out: &commands::Outcome) -> Result<Vec<String>, OutputError> {
    let mut written = Vec::new();
    let mut record = |p: PathBuf| written.push(p.file_name().unwrap().to_string_lossy().into_owned());
    for (suffix, table) in &out.tables {
        let (ext, bytes) = match cfg.format {
            Format::Csv => ("csv", table.to_csv()?),
            Format::Json => ("json", table.to_json()?),
        };
        let path = cfg.artifact(suffix, ext);
        output::write_atomic(&path, &bytes)?;
        record(path);
    }
    if cfg.plot {
        if let Some(series) = &out.plot {
            let path = cfg.artifact("", "svg");
            output::emit_svg(series, &path)?;
            record(path);
        }
    }
    for (ext, bytes) in &out.blobs {
        let path = cfg.artifact("", ext);
        output::write_atomic(&path, bytes)?;
        record(path);
    }
    Ok(written)
}

/// Executes the command and writes every artifact. The manifest is written
/// even when the command fails; the error text goes into it.
pub fn run(cfg: &ExperimentConfig) -> RunReport {
    let start = Instant::now();
    log::info!("running {} with seed {}", cfg.command, cfg.seed);
    let mut manifest = RunManifest {
        command: cfg.command.name().to_string(),
        config: serde_json::to_value(cfg).expect("config serialises"),
        version: VERSION.to_string(),
        seed: cfg.seed,
        seed_list: Vec::new(),
        checks: Vec::new(),
        constants: Default::default(),
        artifacts: Vec::new(),
        elapsed_s: 0.0,
        error: None,
    };
    let mut exit_code = match commands::execute(cfg) {
        Ok(out) => {
            let code = if out.checks.iter().all(|c| c.pass) { EXIT_PASS } else { EXIT_FAIL };
            match write_outcome(cfg, &out) {
                Ok(files) => manifest.artifacts = files,
                Err(e) => manifest.error = Some(e.to_string()),
            }
            manifest.checks = out.checks;
            manifest.constants = out.constants;
            manifest.seed_list = out.seed_list;
            if manifest.error.is_some() {
                EXIT_FAIL
            } else {
                code
            }
        }
        Err(e) => {
            manifest.error = Some(e.to_string());
            exit_code_for(&e)
        }
    };
    manifest.elapsed_s = start.elapsed().as_secs_f64();
    let manifest_path = cfg.artifact("manifest", "json");
    if let Err(e) = output::emit_manifest(&manifest, &manifest_path) {
        log::error!("{e}");
        if manifest.error.is_none() {
            manifest.error = Some(e.to_string());
        }
        exit_code = exit_code.max(EXIT_FAIL);
    }
    RunReport {
        manifest,
        manifest_path,
        exit_code,
    }
}
