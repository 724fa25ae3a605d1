//! Run settings: per-command defaults, then the config file, then flags.
//!
//! The key tables below are the only schema. A config file holds
//! `key = value` lines; blank lines and lines starting with `#` are skipped.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Laws,
    Measure,
    SweepEpsilon,
    SweepQinit,
    Corridor,
}

const SWEEP_KEYS: &[(&str, &str)] = &[
    ("method", "exact"),
    ("grid-points", "21"),
    ("samples", "100000"),
    ("replicates", "1000"),
    ("level", "0.95"),
    ("ci", "basic"),
    ("seed", "0"),
    ("alpha", "0.1"),
    ("arms", "0.4,0.7"),
    ("horizon", "5"),
    ("a", "1"),
    ("b", "3"),
    ("c", "2"),
    ("d", "5"),
];

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Laws => "laws",
            Command::Measure => "measure",
            Command::SweepEpsilon => "sweep-epsilon",
            Command::SweepQinit => "sweep-qinit",
            Command::Corridor => "corridor",
        }
    }

    /// Every key the command accepts, in output order, with its default.
    /// `auto` values are filled in from other settings before the run.
    pub fn keys(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Laws => &[
                ("laws", "all"),
                ("seed", "0"),
                ("instances", "10"),
                ("horizons", "3"),
                ("interfaces", "2x2,2x3,3x2,3x3"),
            ],
            Command::Measure => &[
                ("agent", "uniform"),
                ("env", "uniform"),
                ("na", "auto"),
                ("no", "auto"),
                ("a", "1"),
                ("b", "2"),
                ("c", "1"),
                ("d", "2"),
                ("horizon", "auto"),
                ("arrow", "delayed"),
                ("method", "exact"),
                ("samples", "100000"),
                ("replicates", "1000"),
                ("level", "0.95"),
                ("ci", "basic"),
                ("seed", "0"),
                ("cap", "16777216"),
            ],
            Command::SweepEpsilon | Command::SweepQinit => SWEEP_KEYS,
            Command::Corridor => &[
                ("rooms", "5"),
                ("theta", "0.5"),
                ("horizon", "4"),
                ("p-on", "0.75"),
                ("p-off", "0.25"),
            ],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `key = value` lines; the value is everything after the first `=`.
pub fn parse_config_text(path: &str, text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::ConfigSyntax {
            path: path.to_string(),
            line: n + 1,
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Resolved settings of one run, in the command's key order.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub command: Command,
    values: Vec<(&'static str, String)>,
}

impl Settings {
    pub fn defaults(command: Command) -> Self {
        Self {
            command,
            values: command.keys().iter().map(|&(k, v)| (k, v.to_string())).collect(),
        }
    }

    /// Applies the config file (if any) and then the flags.
    pub fn resolve(
        command: Command,
        config: Option<&Path>,
        flags: &[(&'static str, String)],
    ) -> Result<Self, CliError> {
        let mut s = Self::defaults(command);
        if let Some(path) = config {
            let shown = path.display().to_string();
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: shown.clone(),
                source,
            })?;
            for (k, v) in parse_config_text(&shown, &text)? {
                s.set(&k, v)?;
            }
        }
        for (k, v) in flags {
            s.set(k, v.clone()).map_err(|_| CliError::UnknownKey {
                key: format!("--{k}"),
                command,
            })?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: String) -> Result<(), CliError> {
        match self.values.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => {
                slot.1 = value;
                Ok(())
            }
            None => Err(CliError::UnknownKey {
                key: key.to_string(),
                command: self.command,
            }),
        }
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
            .unwrap_or_else(|| panic!("`{key}` is not a {} key", self.command))
    }

    pub fn get<T>(&self, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        let raw = self.raw(key);
        raw.parse().map_err(|e: T::Err| CliError::InvalidValue {
            key: key.to_string(),
            value: raw.to_string(),
            reason: e.to_string(),
        })
    }

    /// Comma-separated list under `key`.
    pub fn list<T>(&self, key: &str) -> Result<Vec<T>, CliError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        let raw = self.raw(key);
        raw.split(',')
            .map(|item| {
                item.trim().parse().map_err(|e: T::Err| CliError::InvalidValue {
                    key: key.to_string(),
                    value: raw.to_string(),
                    reason: e.to_string(),
                })
            })
            .collect()
    }

    /// `# gdi <command> key=value ...` with every key expanded.
    pub fn comment_line(&self) -> String {
        let mut line = format!("# gdi {}", self.command);
        for (k, v) in &self.values {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}
