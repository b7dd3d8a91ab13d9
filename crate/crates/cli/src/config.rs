//! INI run configuration: `key = value` pairs under `[section]` headers.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::CliError;

/// Accepted keys per section. Lines starting with '#' or ';' are comments.
const SCHEMA: &[(&str, &[&str])] = &[
    ("run", &["command", "seed"]),
    ("kernel", &["operator", "dim", "gamma", "b", "b_value", "s", "exponent"]),
    (
        "quadrature",
        &[
            "outer_radius",
            "polar_radius",
            "radial_nodes",
            "angular_nodes",
            "hyperplane_nodes",
            "regularization_radius",
            "rel_tol",
        ],
    ),
    ("field", &["type", "rho", "u", "theta", "bumps", "points", "form"]),
    ("barrier", &["m", "alpha", "samples"]),
    ("search", &["m", "rel_tol"]),
    ("homog", &["n", "v_max", "t_end", "cfl", "weight", "max_steps", "input", "contact_c"]),
    ("hydro", &["catalog", "gammas"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    LandauEval,
    BoltzmannEval,
    BarrierCheck,
    DeltaSearch,
    M0Search,
    HomogRun,
    HydroVerdict,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LandauEval => "landau-eval",
            Command::BoltzmannEval => "boltzmann-eval",
            Command::BarrierCheck => "barrier-check",
            Command::DeltaSearch => "delta-search",
            Command::M0Search => "m0-search",
            Command::HomogRun => "homog-run",
            Command::HydroVerdict => "hydro-verdict",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "landau-eval" => Command::LandauEval,
            "boltzmann-eval" => Command::BoltzmannEval,
            "barrier-check" => Command::BarrierCheck,
            "delta-search" => Command::DeltaSearch,
            "m0-search" => Command::M0Search,
            "homog-run" => Command::HomogRun,
            "hydro-verdict" => Command::HydroVerdict,
            other => return Err(CliError::Invalid(format!("unknown command {other:?}"))),
        })
    }
}

/// Parsed configuration; sections and keys are kept sorted for the manifest echo.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<(&str, &[&str])> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| CliError::Parse { line, message };
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') || content.starts_with(';') {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| err(format!("unterminated section header {content:?}")))?.trim();
                let &(name, keys) = SCHEMA
                    .iter()
                    .find(|(s, _)| *s == name)
                    .ok_or_else(|| err(format!("unknown section [{name}]")))?;
                if sections.contains_key(name) {
                    return Err(err(format!("section [{name}] appears twice")));
                }
                sections.insert(name.to_string(), BTreeMap::new());
                current = Some((name, keys));
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let (section, allowed) = current.ok_or_else(|| err(format!("key {key:?} appears before any [section] header")))?;
            if key.is_empty() {
                return Err(err("missing key before '='".into()));
            }
            if !allowed.contains(&key) {
                return Err(err(format!("unknown key {key:?} in [{section}]")));
            }
            let entry = sections.get_mut(section).expect("section was inserted");
            if entry.insert(key.to_string(), value.to_string()).is_some() {
                return Err(err(format!("duplicate key {key:?} in [{section}]")));
            }
        }
        if sections.is_empty() {
            return Err(CliError::Parse { line: 1, message: "configuration is empty".into() });
        }
        let command = sections
            .get("run")
            .and_then(|s| s.get("command"))
            .ok_or_else(|| CliError::Invalid("missing [run] command".into()))?
            .parse()?;
        Ok(RunConfig { command, sections })
    }

    pub fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(text) => text
                .parse()
                .map(Some)
                .map_err(|_| CliError::Invalid(format!("[{section}] {key} = {text:?} is not a valid value"))),
        }
    }

    pub fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<T, CliError> {
        self.get(section, key)?.ok_or_else(|| CliError::Invalid(format!("missing [{section}] {key}")))
    }

    pub fn get_or<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(section, key)?.unwrap_or(default))
    }

    /// Whitespace-separated numbers.
    pub fn vector(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(section, key).map(|text| parse_numbers(section, key, text)).transpose()
    }

    /// Semicolon-separated rows of whitespace-separated numbers.
    pub fn rows(&self, section: &str, key: &str) -> Result<Option<Vec<Vec<f64>>>, CliError> {
        self.raw(section, key)
            .map(|text| {
                text.split(';')
                    .filter(|row| !row.trim().is_empty())
                    .map(|row| parse_numbers(section, key, row))
                    .collect()
            })
            .transpose()
    }

    pub fn echo(&self) -> Value {
        json!(self.sections)
    }
}

fn parse_numbers(section: &str, key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("[{section}] {key}: {t:?} is not a number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_lists() {
        let cfg = RunConfig::parse("[run]\ncommand = m0-search\n[field]\nu = 1 2 3\npoints = 0 0 0; 1 0 0\n").unwrap();
        assert_eq!(cfg.command, Command::M0Search);
        assert_eq!(cfg.vector("field", "u").unwrap(), Some(vec![1.0, 2.0, 3.0]));
        assert_eq!(cfg.rows("field", "points").unwrap().unwrap().len(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(matches!(
            RunConfig::parse("[run]\ncommand = m0-search\ncolour = red\n"),
            Err(CliError::Parse { line: 3, .. })
        ));
        assert!(matches!(RunConfig::parse("[nope]\nx = 1\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("# only a comment\n"), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn malformed_lines_report_their_number() {
        match RunConfig::parse("[run]\ncommand = m0-search\n[kernel\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(RunConfig::parse(""), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("[run]\ncommand\n"), Err(CliError::Parse { line: 2, .. })));
    }
}
