use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use zafa_core::amenability::{amenability_report, AmenabilityReport};
use zafa_core::cache::TableDoc;
use zafa_core::char_table::{compute_character_table_with, TableOptions};
use zafa_core::hypergroup::{
    check_axioms, dual_of_group, orbit_hypergroup, polynomial_n0, AxiomReport, DiscreteHypergroup, HypergroupSpec,
};
use zafa_core::numeric::Tolerances;
use zafa_core::spec::GroupSpec;
use zafa_core::su2::{derivation_sweep, SweepRow};
use zafa_core::{conjugacy_classes, CharacterTable, Error};

use crate::config::{AxiomTolerances, HypergroupSampling, Job, RunConfig, Su2Sweep, Task};
use crate::error::CliError;

pub const SCHEMA: &str = "zafa-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSettings {
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomTolerances>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub su2: Option<Su2Sweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypergroups: Option<HypergroupSampling>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub task: Task,
    pub settings: ReportSettings,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_wall_ms: Option<f64>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, Outcome::Error { .. }))
            .count()
    }

    /// 0 when every row succeeded, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.failures() > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub input: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Ok { result: TaskResult },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TaskResult {
    Table(TableResult),
    Am(AmenabilityReport),
    Fusion(FusionResult),
    Su2(Vec<SweepRow>),
    Hypergroup(HypergroupResult),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableResult {
    #[serde(flatten)]
    pub table: TableDoc,
    pub k: usize,
    pub orthogonality_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionEntry {
    pub pi: usize,
    pub pi2: usize,
    pub sigma: usize,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusionResult {
    pub group: String,
    pub degrees: Vec<u64>,
    pub entries: Vec<FusionEntry>,
    pub dimension_defect: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypergroupResult {
    pub hypergroup: String,
    pub support: usize,
    #[serde(flatten)]
    pub axioms: AxiomReport,
    pub passed: bool,
}

fn table_for(spec: &GroupSpec, config: &RunConfig) -> zafa_core::Result<CharacterTable> {
    let group = spec.build()?;
    let opts = TableOptions {
        tolerances: config.tolerances,
        ..TableOptions::default()
    };
    match config.table_cache() {
        Some(cache) => cache.get_or_compute(&group, &opts).map(|(t, _)| t),
        None => compute_character_table_with(&group, &conjugacy_classes(&group), &opts),
    }
}

fn group_task(spec: &GroupSpec, config: &RunConfig) -> zafa_core::Result<TaskResult> {
    let table = Arc::new(table_for(spec, config)?);
    Ok(match config.task {
        Task::Table => TaskResult::Table(TableResult {
            k: table.k(),
            orthogonality_residual: table.residuals().max(),
            table: TableDoc::from(table.as_ref()),
        }),
        Task::Am => TaskResult::Am(amenability_report(&table)?),
        Task::Fusion => {
            let fusion = table.fusion()?;
            let k = table.k();
            let entries = (0..k)
                .flat_map(|p| (0..k).map(move |q| (p, q)))
                .flat_map(|(p, q)| {
                    fusion.get(p, q).iter().map(move |&(sigma, m)| FusionEntry {
                        pi: p,
                        pi2: q,
                        sigma,
                        multiplicity: m,
                    })
                })
                .collect();
            TaskResult::Fusion(FusionResult {
                group: table.label().to_string(),
                degrees: table.degrees().to_vec(),
                dimension_defect: fusion.dimension_defect(table.degrees()),
                entries,
            })
        }
        Task::Su2Deriv | Task::HypergroupCheck => unreachable!("planned as other jobs"),
    })
}

fn axioms<H: DiscreteHypergroup>(
    h: &H,
    label: String,
    support: Vec<H::Index>,
    config: &RunConfig,
) -> zafa_core::Result<HypergroupResult> {
    let s = config.hypergroups;
    let axioms = check_axioms(h, &support, s.triples, s.seed)?;
    Ok(HypergroupResult {
        hypergroup: label,
        support: support.len(),
        passed: axioms.passes(config.axioms.normalization, config.axioms.associativity),
        axioms,
    })
}

fn hypergroup_task(spec: &HypergroupSpec, config: &RunConfig) -> zafa_core::Result<TaskResult> {
    let n = config.hypergroups.support;
    let result = match spec {
        HypergroupSpec::Dual { group } => {
            let h = dual_of_group(Arc::new(table_for(group, config)?));
            let support = h.indices().collect();
            let label = format!("dual({})", h.table().label());
            axioms(&h, label, support, config)?
        }
        HypergroupSpec::PolyN0 => {
            let h = polynomial_n0();
            axioms(&h, spec.label(), h.indices().take(n).collect(), config)?
        }
        HypergroupSpec::Orbit { dim, matrices } => {
            let h = orbit_hypergroup(*dim, matrices)?;
            axioms(&h, spec.label(), h.indices().take(n).collect(), config)?
        }
    };
    Ok(TaskResult::Hypergroup(result))
}

fn su2_task(sweep: Su2Sweep) -> zafa_core::Result<TaskResult> {
    let n = sweep.points;
    let thetas: Vec<f64> = (0..n).map(|i| 0.1 + (PI - 0.2) * i as f64 / (n - 1) as f64).collect();
    Ok(TaskResult::Su2(derivation_sweep(sweep.l_max, &thetas)?))
}

fn execute(job: &Job, config: &RunConfig) -> zafa_core::Result<TaskResult> {
    match job {
        Job::Group { spec, .. } => group_task(spec, config),
        Job::Hypergroup { spec, .. } => hypergroup_task(spec, config),
        Job::Su2 => su2_task(config.su2),
    }
}

/// Validates every input, then runs the jobs in parallel. Rows come back in
/// input order. Per-input failures become error rows; I/O failures abort
/// the whole run.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let jobs = crate::config::plan(config)?;
    let start = Instant::now();
    let rows = jobs
        .par_iter()
        .map(|job| {
            let t = Instant::now();
            let outcome = match execute(job, config) {
                Ok(result) => Outcome::Ok { result },
                Err(Error::Io(e)) => {
                    return Err(CliError::Compute {
                        source_label: job.source().to_string(),
                        message: e.to_string(),
                    })
                }
                Err(e) => Outcome::Error { message: e.to_string() },
            };
            Ok(Row {
                input: job.source().to_string(),
                outcome,
                wall_ms: config.timings.then(|| t.elapsed().as_secs_f64() * 1e3),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let task = config.task;
    Ok(Report {
        schema: SCHEMA,
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        task,
        settings: ReportSettings {
            tolerances: config.tolerances,
            axioms: (task == Task::HypergroupCheck).then_some(config.axioms),
            su2: (task == Task::Su2Deriv).then_some(config.su2),
            hypergroups: (task == Task::HypergroupCheck).then_some(config.hypergroups),
        },
        rows,
        total_wall_ms: config.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}
