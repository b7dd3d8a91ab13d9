use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};
use crate::hydro::exponents::gamma_threshold;

/// Catalog of known self-similar implosions shipped with the crate.
pub const BUILTIN_CATALOG: &str = include_str!("../../data/implosions.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Spherical,
    Cylindrical,
}

/// Density exponent of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Kappa {
    Unspecified,
    Fixed(f64),
    Range(f64, f64),
    /// kappa = -3(lambda - 1).
    MassEnergyLine,
}

impl Kappa {
    fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Ok(Kappa::Unspecified);
        }
        if t.replace(' ', "") == "-3(lambda-1)" {
            return Ok(Kappa::MassEnergyLine);
        }
        let num = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| KineticError::Format(format!("invalid kappa value {s:?}")))
        };
        match t.split_once("..") {
            Some((a, b)) => Ok(Kappa::Range(num(a)?, num(b)?)),
            None => Ok(Kappa::Fixed(num(t)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplosionScenario {
    pub name: String,
    pub kappa: Kappa,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Whether lambda_max belongs to the range (a single exponent, say).
    pub lambda_closed: bool,
    pub symmetry: Symmetry,
    /// The exact profile needs a zero-temperature region.
    pub cold_gas: bool,
    pub notes: String,
}

#[derive(Debug, Deserialize)]
struct CatalogRow {
    name: String,
    kappa: String,
    lambda_min: f64,
    lambda_max: f64,
    lambda_closed: bool,
    symmetry: Symmetry,
    cold_gas: bool,
    notes: String,
}

impl ImplosionScenario {
    pub fn validate(&self) -> Result<()> {
        let ok = self.lambda_min >= 1.0
            && self.lambda_max > 1.0
            && self.lambda_max.is_finite()
            && (self.lambda_min < self.lambda_max || (self.lambda_closed && self.lambda_min == self.lambda_max));
        if !ok {
            return Err(KineticError::Configuration(format!(
                "scenario {}: lambda range ({}, {}) must be a nonempty subset of (1, inf)",
                self.name, self.lambda_min, self.lambda_max
            )));
        }
        Ok(())
    }
}

pub fn read_catalog<R: Read>(reader: R) -> Result<Vec<ImplosionScenario>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<CatalogRow>() {
        let row = row.map_err(|e| KineticError::Format(format!("catalog: {e}")))?;
        let sc = ImplosionScenario {
            kappa: Kappa::parse(&row.kappa)?,
            name: row.name,
            lambda_min: row.lambda_min,
            lambda_max: row.lambda_max,
            lambda_closed: row.lambda_closed,
            symmetry: row.symmetry,
            cold_gas: row.cold_gas,
            notes: row.notes,
        };
        sc.validate()?;
        out.push(sc);
    }
    Ok(out)
}

pub fn load_catalog(path: &Path) -> Result<Vec<ImplosionScenario>> {
    read_catalog(std::fs::File::open(path)?)
}

pub fn builtin_catalog() -> Vec<ImplosionScenario> {
    read_catalog(BUILTIN_CATALOG.as_bytes()).expect("shipped catalog parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// No exponent in the range lets the kinetic norm integral diverge.
    Excluded,
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioVerdict {
    pub scenario: String,
    pub gamma: f64,
    pub verdict: Verdict,
    /// Infimum of gamma with an open verdict, from the top of the lambda range.
    pub critical_gamma: f64,
    /// True when the range is open at the top, so gamma = critical_gamma is
    /// itself excluded.
    pub strict: bool,
}

pub fn scenario_verdict(sc: &ImplosionScenario, gamma: f64) -> Result<ScenarioVerdict> {
    sc.validate()?;
    if !(-3.0..=1.0).contains(&gamma) {
        return Err(KineticError::Argument(format!("gamma must lie in [-3, 1], got {gamma}")));
    }
    // the threshold decreases in lambda, so the top of the range decides
    let critical_gamma = gamma_threshold(sc.lambda_max)?;
    let strict = !sc.lambda_closed;
    let open = if strict { gamma > critical_gamma } else { gamma >= critical_gamma };
    Ok(ScenarioVerdict {
        scenario: sc.name.clone(),
        gamma,
        verdict: if open { Verdict::Open } else { Verdict::Excluded },
        critical_gamma,
        strict,
    })
}

/// Columns: scenario, gamma, verdict, critical_gamma.
pub fn write_verdict_csv<W: Write>(w: W, verdicts: &[ScenarioVerdict]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| KineticError::Io(e.to_string());
    wtr.write_record(["scenario", "gamma", "verdict", "critical_gamma"]).map_err(io)?;
    for v in verdicts {
        let verdict = match v.verdict {
            Verdict::Excluded => "excluded",
            Verdict::Open => "open",
        };
        wtr.write_record([v.scenario.clone(), format!("{}", v.gamma), verdict.to_string(), format!("{:.17}", v.critical_gamma)])
            .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}
