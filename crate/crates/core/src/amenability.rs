//! Amenability constants of `ZA(G)` and `ZL¹(G)` for finite groups.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::char_table::{compute_character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup};
use crate::numeric::{compensated_sum, compensated_sum_complex};
use crate::za::{diagonal_element, za_norm};

/// Lower bound `2/√3` for non-abelian finite groups.
pub fn standard_bound() -> f64 {
    2.0 / 3f64.sqrt()
}

/// Known general lower bound `1 + 1/300` for `AM(ZL¹(G))`, `G` non-abelian.
pub const ZL1_BOUND: f64 = 1.0 + 1.0 / 300.0;

/// Element-level product groups are only built for cross-checks up to this
/// order.
pub const ELEMENT_CHECK_LIMIT: usize = 2000;

/// `AM(ZA(G)) = (1/|G|²) Σ_{π,π'} d_π d_π' |Σ_C |C|² χ_π(C) conj χ_π'(C)|`.
///
/// Rows are evaluated in parallel; each row and the final combination are
/// summed in a fixed order, so the result does not depend on scheduling.
pub fn am_za(ct: &CharacterTable) -> f64 {
    let k = ct.k();
    let weighted: Vec<Vec<_>> = (0..k)
        .map(|p| {
            (0..k)
                .map(|c| ct.value(p, c) * (ct.class_sizes()[c].pow(2)) as f64)
                .collect()
        })
        .collect();
    let rows: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|p| {
            compensated_sum((0..k).map(|q| {
                let inner = compensated_sum_complex((0..k).map(|c| weighted[p][c] * ct.value(q, c).conj()));
                (ct.degree(p) * ct.degree(q)) as f64 * inner.norm()
            }))
        })
        .collect();
    compensated_sum(rows) / (ct.group_order() as f64).powi(2)
}

/// `AM(ZL¹(G)) = (1/|G|²) Σ_{C,C'} |C||C'| |Σ_π d_π² χ_π(C) conj χ_π(C')|`.
pub fn am_zl1(ct: &CharacterTable) -> f64 {
    let k = ct.k();
    let sizes = ct.class_sizes();
    let rows: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|c| {
            compensated_sum((0..k).map(|c2| {
                let inner = compensated_sum_complex(
                    (0..k).map(|p| ct.value(p, c) * ct.value(p, c2).conj() * (ct.degree(p).pow(2)) as f64),
                );
                (sizes[c] * sizes[c2]) as f64 * inner.norm()
            }))
        })
        .collect();
    compensated_sum(rows) / (ct.group_order() as f64).powi(2)
}

/// `AM(ZA(∏ G_i)) = ∏ AM(ZA(G_i))`; the empty product is 1.
pub fn am_za_product(values: &[f64]) -> f64 {
    values.iter().product()
}

/// Keeps only the diagonal terms `π = π'` of the double sum. Always lies
/// between 1 and [`am_za`]; exposed for diagnostics.
#[doc(hidden)]
pub fn diagonal_restriction_bound(ct: &CharacterTable) -> f64 {
    let k = ct.k();
    compensated_sum((0..k).map(|p| {
        let d = ct.degree(p) as f64;
        d * d * compensated_sum((0..k).map(|c| (ct.class_sizes()[c].pow(2)) as f64 * ct.value(p, c).norm_sqr()))
    })) / (ct.group_order() as f64).powi(2)
}

/// Powers `AM^j` of a non-abelian factor against `(2/√3)^j`, `j = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    pub am: f64,
    pub powers: Vec<f64>,
    pub comparison: Vec<f64>,
}

impl DivergenceCertificate {
    pub fn dominates(&self) -> bool {
        self.powers.iter().zip(&self.comparison).all(|(p, c)| *p >= *c)
    }

    pub fn is_monotone(&self) -> bool {
        self.powers.windows(2).all(|w| w[1] > w[0])
    }

    pub fn is_certified(&self) -> bool {
        self.dominates() && self.is_monotone()
    }
}

pub fn product_divergence_certificate(n: usize, factor: &CharacterTable) -> Result<DivergenceCertificate> {
    if factor.is_abelian() {
        return Err(Error::CertificateVacuous);
    }
    let am = am_za(factor);
    let bound = standard_bound();
    let powers = (1..=n as i32).map(|j| am.powi(j)).collect();
    let comparison = (1..=n as i32).map(|j| bound.powi(j)).collect();
    Ok(DivergenceCertificate { am, powers, comparison })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmenabilityReport {
    pub group: String,
    pub order: u64,
    pub k: usize,
    pub am_za: f64,
    pub am_zl1: f64,
    pub is_abelian: bool,
    /// `am_za ≥ 2/√3` for non-abelian groups; vacuously true otherwise.
    pub lower_bound_check: bool,
    /// `am_zl1 ≥ 1 + 1/300` for non-abelian groups; vacuously true otherwise.
    pub zl1_bound_check: bool,
    /// Norm of the diagonal in `ZA(G × G)`, computed on the Kronecker table.
    pub diagonal_norm: f64,
}

pub fn amenability_report(ct: &Arc<CharacterTable>) -> Result<AmenabilityReport> {
    let am = am_za(ct);
    let zl1 = am_zl1(ct);
    let product = Arc::new(CharacterTable::kronecker(ct, ct));
    let diagonal_norm = za_norm(&diagonal_element(ct).to_product_element(product)?);
    let abelian = ct.is_abelian();
    Ok(AmenabilityReport {
        group: ct.label().to_string(),
        order: ct.group_order(),
        k: ct.k(),
        am_za: am,
        am_zl1: zl1,
        is_abelian: abelian,
        lower_bound_check: abelian || am >= standard_bound() - 1e-9,
        zl1_bound_check: abelian || zl1 >= ZL1_BOUND - 1e-9,
        diagonal_norm,
    })
}

/// Both routes to `AM(ZA(G × H))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductLawCheck {
    /// `AM(ZA(G)) · AM(ZA(H))`.
    pub factor_product: f64,
    /// Evaluated on the Kronecker product of the two tables.
    pub kronecker: f64,
    /// Evaluated on the table of the literal product group, when
    /// `|G × H| ≤` [`ELEMENT_CHECK_LIMIT`].
    pub element_level: Option<f64>,
}

impl ProductLawCheck {
    pub fn max_deviation(&self) -> f64 {
        let mut d = (self.kronecker - self.factor_product).abs();
        if let Some(e) = self.element_level {
            d = d.max((e - self.factor_product).abs());
        }
        d
    }
}

pub fn product_law_check(g: &FiniteGroup, h: &FiniteGroup) -> Result<ProductLawCheck> {
    let tg = compute_character_table(g)?;
    let th = compute_character_table(h)?;
    let element_level = if g.order() * h.order() <= ELEMENT_CHECK_LIMIT {
        Some(am_za(&compute_character_table(&direct_product(g, h)?)?))
    } else {
        None
    };
    Ok(ProductLawCheck {
        factor_product: am_za_product(&[am_za(&tg), am_za(&th)]),
        kronecker: am_za(&CharacterTable::kronecker(&tg, &th)),
        element_level,
    })
}
