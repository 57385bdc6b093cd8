use std::io::Write;
use std::path::Path;

use crate::config::{Format, Task};
use crate::error::CliError;
use crate::run::{Outcome, Report, TaskResult};

fn header(task: Task) -> &'static [&'static str] {
    match task {
        Task::Table => &[
            "input",
            "status",
            "group",
            "hash",
            "pi",
            "degree",
            "class",
            "class_size",
            "re",
            "im",
            "error",
        ],
        Task::Am => &[
            "input",
            "status",
            "group",
            "order",
            "k",
            "am_za",
            "am_zl1",
            "is_abelian",
            "lower_bound_check",
            "zl1_bound_check",
            "diagonal_norm",
            "error",
        ],
        Task::Fusion => &[
            "input",
            "status",
            "group",
            "pi",
            "pi2",
            "sigma",
            "multiplicity",
            "error",
        ],
        Task::Su2Deriv => &[
            "input",
            "status",
            "l",
            "theta",
            "z_re",
            "z_im",
            "abs_derivation",
            "bound",
            "slack",
            "error",
        ],
        Task::HypergroupCheck => &[
            "input",
            "status",
            "hypergroup",
            "support",
            "pairs_checked",
            "triples_checked",
            "normalization",
            "min_coefficient",
            "identity",
            "associativity",
            "haar",
            "passed",
            "error",
        ],
    }
}

fn records(input: &str, result: &TaskResult) -> Vec<Vec<String>> {
    let ok = |fields: Vec<String>| {
        let mut r = vec![input.to_string(), "ok".to_string()];
        r.extend(fields);
        r.push(String::new());
        r
    };
    match result {
        TaskResult::Table(t) => {
            let doc = &t.table;
            let mut out = Vec::new();
            for (pi, row) in doc.values.iter().enumerate() {
                for (class, [re, im]) in row.iter().enumerate() {
                    out.push(ok(vec![
                        doc.label.clone(),
                        doc.hash.clone(),
                        pi.to_string(),
                        doc.degrees[pi].to_string(),
                        class.to_string(),
                        doc.class_sizes[class].to_string(),
                        re.to_string(),
                        im.to_string(),
                    ]));
                }
            }
            out
        }
        TaskResult::Am(a) => vec![ok(vec![
            a.group.clone(),
            a.order.to_string(),
            a.k.to_string(),
            a.am_za.to_string(),
            a.am_zl1.to_string(),
            a.is_abelian.to_string(),
            a.lower_bound_check.to_string(),
            a.zl1_bound_check.to_string(),
            a.diagonal_norm.to_string(),
        ])],
        TaskResult::Fusion(f) => f
            .entries
            .iter()
            .map(|e| {
                ok(vec![
                    f.group.clone(),
                    e.pi.to_string(),
                    e.pi2.to_string(),
                    e.sigma.to_string(),
                    e.multiplicity.to_string(),
                ])
            })
            .collect(),
        TaskResult::Su2(rows) => rows
            .iter()
            .map(|r| {
                ok(vec![
                    r.l.to_string(),
                    r.theta.to_string(),
                    r.theta.cos().to_string(),
                    r.theta.sin().to_string(),
                    r.abs_derivation.to_string(),
                    r.bound.to_string(),
                    r.slack.to_string(),
                ])
            })
            .collect(),
        TaskResult::Hypergroup(h) => {
            let a = &h.axioms;
            vec![ok(vec![
                h.hypergroup.clone(),
                h.support.to_string(),
                a.pairs_checked.to_string(),
                a.triples_checked.to_string(),
                a.normalization.to_string(),
                a.min_coefficient.to_string(),
                a.identity.to_string(),
                a.associativity.to_string(),
                a.haar.to_string(),
                h.passed.to_string(),
            ])]
        }
    }
}

/// JSON is the canonical form; CSV flattens each row into records.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| CliError::Encode(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let header = header(report.task);
            let mut w = csv::Writer::from_writer(Vec::new());
            let encode = |e: csv::Error| CliError::Encode(e.to_string());
            w.write_record(header).map_err(encode)?;
            for row in &report.rows {
                match &row.outcome {
                    Outcome::Ok { result } => {
                        for r in records(&row.input, result) {
                            w.write_record(&r).map_err(encode)?;
                        }
                    }
                    Outcome::Error { message } => {
                        let mut r = vec![row.input.clone(), "error".to_string()];
                        r.resize(header.len() - 1, String::new());
                        r.push(message.clone());
                        w.write_record(&r).map_err(encode)?;
                    }
                }
            }
            w.into_inner().map_err(|e| CliError::Encode(e.to_string()))
        }
    }
}

/// Writes through a temporary file in the target directory, so a failed
/// write never leaves a partial report behind.
pub fn write_report(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::Write(path.to_path_buf(), e);
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// Runs `config`, writes the report to `config.out` (stdout when unset) and
/// returns the report; see [`crate::Report::exit_code`].
pub fn execute(config: &crate::RunConfig) -> Result<crate::Report, CliError> {
    let report = crate::run(config)?;
    let bytes = render(&report, config.format)?;
    match &config.out {
        Some(path) => write_report(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Write(std::path::PathBuf::from("<stdout>"), e))?,
    }
    Ok(report)
}
