//! Run manifests: the command, seed, outputs and a full configuration
//! snapshot, written as INI so that a run can be replayed from the file.

use std::fmt::Write as _;
use std::path::Path;

use super::config::{parse_ini, IniSection, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub created_unix: u64,
    pub wall_clock_secs: f64,
    /// Command-specific arguments, in order.
    pub args: Vec<(String, String)>,
    /// Output name and path, in order.
    pub outputs: Vec<(String, String)>,
    pub config: RunConfig,
}

const OWN_SECTIONS: [&str; 3] = ["run", "args", "outputs"];

fn pairs(section: Option<&IniSection>) -> Vec<(String, String)> {
    section
        .map(|s| {
            s.entries
                .iter()
                .map(|e| (e.key.clone(), e.value.clone()))
                .collect()
        })
        .unwrap_or_default()
}

impl RunManifest {
    pub fn new(command: impl Into<String>, seed: u64, config: RunConfig) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            created_unix,
            wall_clock_secs: 0.0,
            args: Vec::new(),
            outputs: Vec::new(),
            config,
        }
    }

    pub fn arg(&self, key: &str) -> Option<&str> {
        self.args
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn output(&self, key: &str) -> Option<&str> {
        self.outputs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_ini(&self) -> String {
        let mut out = String::from("[run]\n");
        let _ = writeln!(out, "command = {}", self.command);
        let _ = writeln!(out, "version = {}", self.version);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "created_unix = {}", self.created_unix);
        let _ = writeln!(out, "wall_clock_secs = {}", self.wall_clock_secs);
        for (name, list) in [("args", &self.args), ("outputs", &self.outputs)] {
            let _ = writeln!(out, "\n[{name}]");
            for (k, v) in list {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out.push('\n');
        out.push_str(&self.config.to_ini());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = parse_ini(text)?;
        let run = ini.section("run").ok_or_else(|| Error::Config {
            line: 0,
            key: "run".into(),
            reason: "manifest has no [run] section".into(),
        })?;
        let get = |key: &str| {
            run.entries
                .iter()
                .find(|e| e.key == key)
                .ok_or_else(|| Error::Config {
                    line: run.line,
                    key: key.into(),
                    reason: "missing from [run]".into(),
                })
        };
        let num = |key: &str| -> Result<f64> {
            let e = get(key)?;
            e.value.parse().map_err(|_| Error::Config {
                line: e.line,
                key: key.into(),
                reason: format!("cannot parse `{}`", e.value),
            })
        };
        let seed_entry = get("seed")?;
        let seed = seed_entry.value.parse().map_err(|_| Error::Config {
            line: seed_entry.line,
            key: "seed".into(),
            reason: format!("cannot parse `{}`", seed_entry.value),
        })?;
        Ok(Self {
            command: get("command")?.value.clone(),
            version: get("version")?.value.clone(),
            seed,
            created_unix: num("created_unix")? as u64,
            wall_clock_secs: num("wall_clock_secs")?,
            args: pairs(ini.section("args")),
            outputs: pairs(ini.section("outputs")),
            config: RunConfig::from_ini(&ini, &OWN_SECTIONS)?,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_ini())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}
