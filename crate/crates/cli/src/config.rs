//! Experiment configuration read from a TOML file.

use std::fmt;
use std::path::Path;

use levy_chaos::{CellBox, Lattice, MeasureField, SpectralMeasure};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Isometry,
    Orthogonality,
    Moments,
    Cf,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Isometry => "isometry",
            Check::Orthogonality => "orthogonality",
            Check::Moments => "moments",
            Check::Cf => "cf",
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// 1-d cells of these lengths laid end to end.
    pub volumes: Option<Vec<f64>>,
    pub dimension: Option<usize>,
    pub boxes: Option<Vec<BoxSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub zero_weight: Option<f64>,
    /// `[location, weight]` pairs.
    pub atoms: Option<Vec<[f64; 2]>>,
    pub moments: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_degree_cut")]
    pub degree_cut: usize,
    #[serde(default = "default_particle_cut")]
    pub particle_cut: usize,
    pub threads: Option<usize>,
    #[serde(default)]
    pub checks: Vec<Check>,
    pub phi: Option<Vec<f64>>,
    pub psi: Option<Vec<f64>>,
    pub out_dir: Option<String>,
    pub lattice: LatticeSpec,
    pub measure: Option<MeasureSpec>,
    pub cell_measures: Option<Vec<MeasureSpec>>,
}

fn default_samples() -> u64 {
    100_000
}

fn default_degree_cut() -> usize {
    3
}

fn default_particle_cut() -> usize {
    4
}

/// A configuration error, reported with the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.degree_cut < 1 {
            return err("degree_cut: must be at least 1");
        }
        if self.particle_cut < 1 {
            return err("particle_cut: must be at least 1");
        }
        if self.samples < 2 {
            return err("samples: must be at least 2");
        }
        if self.threads == Some(0) {
            return err("threads: must be at least 1");
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice, ConfigError> {
        let spec = &self.lattice;
        match (&spec.volumes, &spec.boxes) {
            (Some(v), None) => {
                if spec.dimension.is_some_and(|d| d != 1) {
                    return err("lattice.volumes: only valid for dimension 1");
                }
                Lattice::intervals(v).map_err(|e| ConfigError(format!("lattice.volumes: {e}")))
            }
            (None, Some(b)) => {
                let dim = spec.dimension.ok_or_else(|| ConfigError("lattice.dimension: required with boxes".into()))?;
                let cells = b.iter().map(|c| CellBox::new(c.lower.clone(), c.upper.clone())).collect();
                Lattice::from_boxes(dim, cells).map_err(|e| ConfigError(format!("lattice.boxes: {e}")))
            }
            _ => err("lattice: give exactly one of `volumes` or `boxes`"),
        }
    }

    pub fn field(&self) -> Result<MeasureField, ConfigError> {
        let lattice = self.lattice()?;
        let measures = match (&self.measure, &self.cell_measures) {
            (Some(m), None) => vec![build_measure(m, "measure")?; lattice.len()],
            (None, Some(ms)) => {
                if ms.len() != lattice.len() {
                    return err(format!("cell_measures: {} entries for {} cells", ms.len(), lattice.len()));
                }
                ms.iter()
                    .enumerate()
                    .map(|(i, m)| build_measure(m, &format!("cell_measures[{i}]")))
                    .collect::<Result<_, _>>()?
            }
            _ => return err("give exactly one of `measure` or `cell_measures`"),
        };
        MeasureField::new(lattice, measures).map_err(|e| ConfigError(e.to_string()))
    }

    fn test_function(&self, key: &str, value: &Option<Vec<f64>>, cells: usize) -> Result<Option<Vec<f64>>, ConfigError> {
        match value {
            Some(v) if v.len() != cells => err(format!("{key}: {} values for {cells} cells", v.len())),
            other => Ok(other.clone()),
        }
    }

    /// `phi`, defaulting to the constant 1.
    pub fn phi(&self, cells: usize) -> Result<Vec<f64>, ConfigError> {
        Ok(self.test_function("phi", &self.phi, cells)?.unwrap_or_else(|| vec![1.0; cells]))
    }

    pub fn psi(&self, cells: usize) -> Result<Option<Vec<f64>>, ConfigError> {
        self.test_function("psi", &self.psi, cells)
    }
}

fn build_measure(spec: &MeasureSpec, key: &str) -> Result<SpectralMeasure, ConfigError> {
    let wrap = |e: levy_chaos::Error| ConfigError(format!("{key}: {e}"));
    match (&spec.moments, spec.zero_weight, &spec.atoms) {
        (Some(m), None, None) => SpectralMeasure::from_moments(m.clone()).map_err(wrap),
        (None, zw, atoms) if zw.is_some() || atoms.is_some() => {
            let atoms = atoms.iter().flatten().map(|a| (a[0], a[1])).collect();
            SpectralMeasure::discrete(zw.unwrap_or(0.0), atoms).map_err(wrap)
        }
        _ => err(format!("{key}: give `moments`, or `zero_weight` and/or `atoms`")),
    }
}
