use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use zafa_core::amenability::am_za;
use zafa_core::catalog::{catalog_group, default_catalog};
use zafa_core::char_table::{compute_character_table_with, TableOptions};
use zafa_core::hypergroup::{
    check_axioms, dual_of_group, orbit_hypergroup, polynomial_n0, AxiomReport, DiscreteHypergroup,
};
use zafa_core::numeric::Tolerances;
use zafa_core::su2::{derivation_identity_check, CentralTrigPoly, CirclePoint};
use zafa_core::za::{diagonal_element, multiply, za_norm};
use zafa_core::{conjugacy_classes, CentralElement, CharacterTable, Complex64};

use crate::config::AxiomTolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Catalog names, in report order. Empty means nothing to check.
    pub catalog: Vec<String>,
    pub tolerances: Tolerances,
    pub axioms: AxiomTolerances,
    /// Perturbs one table entry of the named group before checking.
    #[doc(hidden)]
    pub corrupt: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            catalog: default_catalog().into_iter().map(String::from).collect(),
            tolerances: Tolerances::default(),
            axioms: AxiomTolerances::default(),
            corrupt: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub subject: String,
    /// `None` when the check could not be evaluated at all.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn measured(check: &'static str, subject: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            check,
            subject: subject.to_string(),
            residual: Some(residual),
            tolerance,
            passed: residual <= tolerance,
            note: None,
        }
    }

    fn failed(check: &'static str, subject: &str, tolerance: f64, note: String) -> Self {
        Self {
            check,
            subject: subject.to_string(),
            residual: None,
            tolerance,
            passed: false,
            note: Some(note),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub schema: &'static str,
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    pub max_residual: f64,
}

const DERIVATION_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-9;

fn corrupted(t: &CharacterTable) -> CharacterTable {
    let mut values = t.values().to_vec();
    let last = values.len() - 1;
    values[last] += Complex64::new(0.25, 0.0);
    CharacterTable::from_parts(
        t.label(),
        t.group_hash(),
        t.group_order(),
        t.class_sizes().to_vec(),
        t.degrees().to_vec(),
        values,
    )
    .expect("same shape")
}

fn axiom_residual(r: &AxiomReport) -> f64 {
    r.associativity.max(r.identity).max(r.haar)
}

fn axiom_checks(subject: &str, r: zafa_core::Result<AxiomReport>, tol: AxiomTolerances) -> Vec<CheckResult> {
    match r {
        Ok(r) => {
            let mut norm =
                CheckResult::measured("hypergroup-normalization", subject, r.normalization, tol.normalization);
            if r.min_coefficient < 0.0 {
                norm.passed = false;
                norm.note = Some(format!("negative coefficient {}", r.min_coefficient));
            }
            vec![
                norm,
                CheckResult::measured("hypergroup-axioms", subject, axiom_residual(&r), tol.associativity),
            ]
        }
        Err(e) => vec![CheckResult::failed(
            "hypergroup-axioms",
            subject,
            tol.associativity,
            e.to_string(),
        )],
    }
}

fn group_checks(name: &str, config: &VerifyConfig) -> Vec<CheckResult> {
    let tol = config.tolerances;
    let table = catalog_group(name).and_then(|g| {
        let opts = TableOptions {
            tolerances: tol,
            ..TableOptions::default()
        };
        compute_character_table_with(&g, &conjugacy_classes(&g), &opts)
    });
    let table = match table {
        Ok(t) if config.corrupt.as_deref() == Some(name) => Arc::new(corrupted(&t)),
        Ok(t) => Arc::new(t),
        Err(e) => return vec![CheckResult::failed("table", name, tol.table, e.to_string())],
    };

    let mut out = Vec::new();
    let r = table.residuals();
    let mut ortho = CheckResult::measured("orthogonality", name, r.max(), tol.table);
    if r.degree_sum_defect != 0 || !r.degrees_divide_order {
        ortho.passed = false;
        ortho.note = Some(format!("degree identity defect {}", r.degree_sum_defect));
    }
    out.push(ortho);

    match table.fusion() {
        Ok(f) => {
            let mut check = CheckResult::measured("fusion", name, f.dimension_defect(table.degrees()) as f64, 0.0);
            if !f.is_symmetric() {
                check.passed = false;
                check.note = Some("fusion tensor not symmetric".into());
            }
            out.push(check);

            // ‖χ_π‖ = d_π and ‖χ_π χ_π'‖ = d_π d_π'
            let k = table.k();
            let mut worst = 0.0f64;
            for p in 0..k {
                let a = CentralElement::character(table.clone(), p);
                let d = table.degree(p) as f64;
                worst = worst.max((za_norm(&a) - d).abs() / d);
                for q in 0..k {
                    let b = CentralElement::character(table.clone(), q);
                    let dd = d * table.degree(q) as f64;
                    match multiply(&a, &b) {
                        Ok(ab) => worst = worst.max((za_norm(&ab) - dd).abs() / dd),
                        Err(_) => worst = f64::INFINITY,
                    }
                }
            }
            out.push(CheckResult::measured("norm", name, worst, IDENTITY_TOL));
        }
        Err(e) => {
            out.push(CheckResult::failed("fusion", name, 0.0, e.to_string()));
            out.push(CheckResult::failed(
                "norm",
                name,
                IDENTITY_TOL,
                "needs the fusion tensor".into(),
            ));
        }
    }

    let am = am_za(&table);
    let product = Arc::new(CharacterTable::kronecker(&table, &table));
    match diagonal_element(&table).to_product_element(product.clone()) {
        Ok(d) => out.push(CheckResult::measured(
            "diagonal",
            name,
            (am - za_norm(&d)).abs(),
            IDENTITY_TOL,
        )),
        Err(e) => out.push(CheckResult::failed("diagonal", name, IDENTITY_TOL, e.to_string())),
    }
    out.push(CheckResult::measured(
        "product-law",
        &format!("{name}x{name}"),
        (am_za(&product) - am * am).abs() / (am * am),
        IDENTITY_TOL,
    ));

    let dual = dual_of_group(table.clone());
    let support: Vec<usize> = dual.indices().collect();
    out.extend(axiom_checks(
        &format!("dual({name})"),
        check_axioms(&dual, &support, 1000, 0),
        config.axioms,
    ));
    out
}

fn global_checks(config: &VerifyConfig) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let poly = |rng: &mut ChaCha8Rng| {
        let terms: Vec<(u32, Complex64)> = (0..rng.random_range(1..=20))
            .map(|_| {
                let l = rng.random_range(0..=60);
                (
                    l,
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                )
            })
            .collect();
        CentralTrigPoly::from_coeffs(terms, false).expect("levels below the support cap")
    };
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (u, v) = (poly(&mut rng), poly(&mut rng));
        let z = CirclePoint::from_angle(rng.random_range(0.1..PI - 0.1));
        worst = worst.max(derivation_identity_check(z, &u, &v).unwrap_or(f64::INFINITY));
    }
    let mut out = vec![CheckResult::measured(
        "derivation-identity",
        "su2",
        worst,
        DERIVATION_TOL,
    )];

    let n0 = polynomial_n0();
    let support: Vec<u64> = (0..=50).collect();
    out.extend(axiom_checks(
        "poly-n0",
        check_axioms(&n0, &support, 2000, 0),
        config.axioms,
    ));
    let orbit = orbit_hypergroup(1, &[vec![vec![1]], vec![vec![-1]]]).expect("Z/(±1) is valid");
    let support: Vec<Vec<i64>> = orbit.indices().take(51).collect();
    out.extend(axiom_checks(
        "Z/(±1)",
        check_axioms(&orbit, &support, 2000, 0),
        config.axioms,
    ));
    out
}

/// Runs the cross-module checks on each catalog group, plus the SU(2) and
/// infinite-hypergroup checks. Failures are recorded, never raised. An empty
/// catalog passes vacuously with no checks.
pub fn verify_suite(config: &VerifyConfig) -> VerifySummary {
    let mut checks: Vec<CheckResult> = config
        .catalog
        .par_iter()
        .map(|name| group_checks(name, config))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    if !config.catalog.is_empty() {
        checks.extend(global_checks(config));
    }
    VerifySummary {
        schema: "zafa-verify",
        schema_version: crate::run::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        passed: checks.iter().all(|c| c.passed),
        max_residual: checks.iter().filter_map(|c| c.residual).fold(0.0, f64::max),
        checks,
    }
}
