use std::fmt;
use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use zafa_core::cache::TableCache;
use zafa_core::hypergroup::HypergroupSpec;
use zafa_core::numeric::Tolerances;
use zafa_core::spec::GroupSpec;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Table,
    Am,
    Fusion,
    Su2Deriv,
    HypergroupCheck,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Task::Table => "table",
            Task::Am => "am",
            Task::Fusion => "fusion",
            Task::Su2Deriv => "su2-deriv",
            Task::HypergroupCheck => "hypergroup-check",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Catalog(String),
    /// A JSON file holding one spec or an array of specs.
    SpecFile(PathBuf),
}

/// Thresholds used by the hypergroup axiom checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomTolerances {
    pub normalization: f64,
    pub associativity: f64,
}

impl Default for AxiomTolerances {
    fn default() -> Self {
        Self {
            normalization: 1e-12,
            associativity: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Sweep {
    pub l_max: u32,
    /// Angles are spread evenly over `[0.1, π − 0.1]`.
    pub points: usize,
}

impl Default for Su2Sweep {
    fn default() -> Self {
        Self {
            l_max: 200,
            points: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergroupSampling {
    /// Indices checked for infinite hypergroups.
    pub support: usize,
    pub triples: usize,
    pub seed: u64,
}

impl Default for HypergroupSampling {
    fn default() -> Self {
        Self {
            support: 51,
            triples: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CacheMode {
    Disabled,
    /// `ZAFA_CACHE_DIR`, else `./.zafa-cache`.
    FromEnv,
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<Input>,
    pub task: Task,
    /// `None` writes to stdout.
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tolerances: Tolerances,
    pub axioms: AxiomTolerances,
    pub su2: Su2Sweep,
    pub hypergroups: HypergroupSampling,
    pub cache: CacheMode,
    /// Adds wall-clock times, which makes reports non-reproducible.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(task: Task, inputs: Vec<Input>) -> Self {
        Self {
            inputs,
            task,
            out: None,
            format: Format::Json,
            tolerances: Tolerances::default(),
            axioms: AxiomTolerances::default(),
            su2: Su2Sweep::default(),
            hypergroups: HypergroupSampling::default(),
            cache: CacheMode::FromEnv,
            timings: false,
        }
    }

    pub fn table_cache(&self) -> Option<TableCache> {
        match &self.cache {
            CacheMode::Disabled => None,
            CacheMode::FromEnv => Some(TableCache::from_env()),
            CacheMode::Dir(d) => Some(TableCache::new(d)),
        }
    }
}

/// A validated unit of work: where it came from and what to build.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Group { source: String, spec: GroupSpec },
    Hypergroup { source: String, spec: HypergroupSpec },
    Su2,
}

impl Job {
    pub fn source(&self) -> &str {
        match self {
            Job::Group { source, .. } | Job::Hypergroup { source, .. } => source,
            Job::Su2 => "su2",
        }
    }
}

fn read_specs<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<Vec<T>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Read(path.clone(), e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        other => vec![other],
    };
    items
        .into_iter()
        .map(|v| serde_json::from_value(v).map_err(|e| CliError::Spec(format!("{}: {e}", path.display()))))
        .collect()
}

/// Reads and validates every input before anything is computed.
pub fn plan(config: &RunConfig) -> Result<Vec<Job>, CliError> {
    if config.task == Task::Su2Deriv {
        if !config.inputs.is_empty() {
            return Err(CliError::Spec("su2-deriv takes no group inputs".into()));
        }
        if config.su2.points < 2 {
            return Err(CliError::Spec("su2-deriv needs at least 2 points".into()));
        }
        return Ok(vec![Job::Su2]);
    }
    if config.inputs.is_empty() {
        return Err(CliError::Spec("no inputs; pass --catalog or --spec".into()));
    }
    let mut jobs = Vec::new();
    for input in &config.inputs {
        match (input, config.task) {
            (Input::Catalog(name), Task::HypergroupCheck) => jobs.push(Job::Hypergroup {
                source: name.clone(),
                spec: HypergroupSpec::Dual {
                    group: GroupSpec::Catalog(name.clone()),
                },
            }),
            (Input::Catalog(name), _) => jobs.push(Job::Group {
                source: name.clone(),
                spec: GroupSpec::Catalog(name.clone()),
            }),
            (Input::SpecFile(path), Task::HypergroupCheck) => {
                for (i, spec) in read_specs::<HypergroupSpec>(path)?.into_iter().enumerate() {
                    jobs.push(Job::Hypergroup {
                        source: format!("{}[{i}]", path.display()),
                        spec,
                    });
                }
            }
            (Input::SpecFile(path), _) => {
                for (i, spec) in read_specs::<GroupSpec>(path)?.into_iter().enumerate() {
                    jobs.push(Job::Group {
                        source: format!("{}[{i}]", path.display()),
                        spec,
                    });
                }
            }
        }
    }
    for job in &jobs {
        let checked = match job {
            Job::Group { spec, .. } => spec.validate(),
            Job::Hypergroup { spec, .. } => spec.validate(),
            Job::Su2 => Ok(()),
        };
        checked.map_err(|e| CliError::Spec(format!("{}: {e}", job.source())))?;
    }
    Ok(jobs)
}
