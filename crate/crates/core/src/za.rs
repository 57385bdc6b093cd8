//! The central Fourier algebra `ZA(G)` of a finite group as coefficient
//! vectors over the irreducible characters.
//!
//! An element `u = Σ α_π χ_π` is stored densely as `α`; its norm is
//! `Σ d_π |α_π|`. Products go through the fusion tensor, whose entries are
//! the multiplicities of `σ` in `π ⊗ π'`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::char_table::CharacterTable;
use crate::error::{Error, Result};
use crate::group::{ConjugacyData, FiniteGroup};
use crate::numeric::{compensated_sum, compensated_sum_complex};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct CentralElement {
    table: Arc<CharacterTable>,
    coeffs: Vec<Complex64>,
}

/// Serialized form: `{"group": hash, "coeffs": {"π": [re, im]}}`, listing
/// non-zero coefficients only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralElementDoc {
    pub group: String,
    pub coeffs: BTreeMap<String, [f64; 2]>,
}

impl CentralElement {
    pub fn zero(table: Arc<CharacterTable>) -> Self {
        let k = table.k();
        Self {
            table,
            coeffs: vec![ZERO; k],
        }
    }

    /// The character `χ_π` itself.
    pub fn character(table: Arc<CharacterTable>, pi: usize) -> Self {
        let mut u = Self::zero(table);
        u.coeffs[pi] = Complex64::new(1.0, 0.0);
        u
    }

    pub fn from_coeffs(table: Arc<CharacterTable>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != table.k() {
            return Err(Error::DimensionMismatch {
                expected: table.k(),
                got: coeffs.len(),
            });
        }
        Ok(Self { table, coeffs })
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn table_arc(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == ZERO)
    }

    /// `‖u‖ = Σ d_π |α_π|`.
    pub fn norm(&self) -> f64 {
        za_norm(self)
    }

    pub fn multiply(&self, other: &CentralElement) -> Result<CentralElement> {
        multiply(self, other)
    }

    pub fn scale(&self, c: Complex64) -> CentralElement {
        Self {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &CentralElement) -> Result<CentralElement> {
        same_table(self, other)?;
        Ok(Self {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn to_doc(&self) -> CentralElementDoc {
        CentralElementDoc {
            group: self.table.group_hash().to_string(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(p, z)| (p.to_string(), [z.re, z.im]))
                .collect(),
        }
    }

    pub fn from_doc(table: Arc<CharacterTable>, doc: &CentralElementDoc) -> Result<Self> {
        if doc.group != table.group_hash() {
            return Err(Error::MismatchedTables);
        }
        let mut u = Self::zero(table);
        for (key, [re, im]) in &doc.coeffs {
            let p: usize = key
                .parse()
                .map_err(|_| Error::MalformedSpec(format!("coefficient index `{key}`")))?;
            if p >= u.coeffs.len() {
                return Err(Error::MalformedSpec(format!("coefficient index {p} out of range")));
            }
            u.coeffs[p] = Complex64::new(*re, *im);
        }
        Ok(u)
    }
}

fn same_table(u: &CentralElement, v: &CentralElement) -> Result<()> {
    if Arc::ptr_eq(&u.table, &v.table) || (u.table.group_hash() == v.table.group_hash() && u.table.k() == v.table.k()) {
        Ok(())
    } else {
        Err(Error::MismatchedTables)
    }
}

pub fn za_norm(u: &CentralElement) -> f64 {
    compensated_sum(
        u.coeffs
            .iter()
            .enumerate()
            .map(|(p, a)| u.table.degree(p) as f64 * a.norm()),
    )
}

/// Multiplicities `m(π, π'; σ)` of the pointwise product `χ_π χ_π'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionTensor {
    k: usize,
    entries: Vec<Vec<(usize, u64)>>,
}

impl FusionTensor {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Non-zero constituents of `π ⊗ π'` as `(σ, multiplicity)`, by
    /// increasing `σ`.
    pub fn get(&self, pi: usize, pi2: usize) -> &[(usize, u64)] {
        &self.entries[pi * self.k + pi2]
    }

    pub fn multiplicity(&self, pi: usize, pi2: usize, sigma: usize) -> u64 {
        self.get(pi, pi2)
            .iter()
            .find(|(s, _)| *s == sigma)
            .map_or(0, |(_, m)| *m)
    }

    /// Largest `|Σ_σ m(π,π';σ) d_σ − d_π d_π'|` over all pairs.
    pub fn dimension_defect(&self, degrees: &[u64]) -> u64 {
        let mut worst = 0;
        for p in 0..self.k {
            for q in 0..self.k {
                let lhs: u64 = self.get(p, q).iter().map(|&(s, m)| m * degrees[s]).sum();
                worst = worst.max(lhs.abs_diff(degrees[p] * degrees[q]));
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.k).all(|p| (0..self.k).all(|q| self.get(p, q) == self.get(q, p)))
    }
}

/// `m(π,π';σ) = (1/|G|) Σ_j |C_j| χ_π(C_j) χ_π'(C_j) conj χ_σ(C_j)`, rounded;
/// fails if any value is further than `tol` from a non-negative integer.
pub fn fusion_tensor(ct: &CharacterTable, tol: f64) -> Result<FusionTensor> {
    let k = ct.k();
    let order = ct.group_order() as f64;
    let weighted: Vec<Vec<Complex64>> = (0..k)
        .map(|s| {
            (0..k)
                .map(|j| ct.value(s, j).conj() * ct.class_sizes()[j] as f64 / order)
                .collect()
        })
        .collect();
    let mut entries = vec![Vec::new(); k * k];
    for p in 0..k {
        for q in p..k {
            let product: Vec<Complex64> = (0..k).map(|j| ct.value(p, j) * ct.value(q, j)).collect();
            let mut constituents = Vec::new();
            for (s, w) in weighted.iter().enumerate() {
                let m = compensated_sum_complex((0..k).map(|j| product[j] * w[j]));
                let rounded = m.re.round();
                let residual = (m - rounded).norm();
                if residual >= tol || rounded < 0.0 {
                    return Err(Error::NonIntegralMultiplicity {
                        pi: p,
                        pi2: q,
                        sigma: s,
                        residual,
                    });
                }
                if rounded > 0.0 {
                    constituents.push((s, rounded as u64));
                }
            }
            entries[q * k + p] = constituents.clone();
            entries[p * k + q] = constituents;
        }
    }
    Ok(FusionTensor { k, entries })
}

/// Algebra product in `ZA(G)`, bilinear through the fusion tensor.
pub fn multiply(u: &CentralElement, v: &CentralElement) -> Result<CentralElement> {
    same_table(u, v)?;
    let fusion = u.table.fusion()?;
    let k = u.table.k();
    let mut out = vec![ZERO; k];
    for (p, a) in u.coeffs.iter().enumerate().filter(|(_, a)| **a != ZERO) {
        for (q, b) in v.coeffs.iter().enumerate().filter(|(_, b)| **b != ZERO) {
            let ab = a * b;
            for &(s, m) in fusion.get(p, q) {
                out[s] += ab * m as f64;
            }
        }
    }
    CentralElement::from_coeffs(u.table.clone(), out)
}

/// Convolution on the dual hypergroup: `δ_π ∗ δ_π'` puts mass
/// `m(π,π';σ) d_σ / (d_π d_π')` on `σ`, extended bilinearly.
pub fn hypergroup_convolve(ct: &CharacterTable, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    let k = ct.k();
    for w in [p, q] {
        if w.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: w.len(),
            });
        }
    }
    let fusion = ct.fusion()?;
    let d = |i: usize| ct.degree(i) as f64;
    let mut out = vec![0.0; k];
    for (a, &pa) in p.iter().enumerate().filter(|(_, x)| **x != 0.0) {
        for (b, &qb) in q.iter().enumerate().filter(|(_, x)| **x != 0.0) {
            let w = pa * qb / (d(a) * d(b));
            for &(s, m) in fusion.get(a, b) {
                out[s] += w * m as f64 * d(s);
            }
        }
    }
    Ok(out)
}

/// A function constant on conjugacy classes, one value per class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    /// Values on individual group elements.
    pub fn on_elements(&self, cd: &ConjugacyData) -> Vec<Complex64> {
        (0..cd.classes().iter().map(Vec::len).sum::<usize>())
            .map(|x| self.values[cd.class_of(x)])
            .collect()
    }

    pub fn pointwise(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }

    pub fn max_distance(&self, other: &ClassFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `f(C_j) = Σ_π α_π χ_π(C_j)`.
pub fn to_class_function(u: &CentralElement) -> ClassFunction {
    let ct = &u.table;
    ClassFunction::new(
        (0..ct.k())
            .map(|j| compensated_sum_complex((0..ct.k()).map(|p| u.coeffs[p] * ct.value(p, j))))
            .collect(),
    )
}

/// `α_π = (1/|G|) Σ_j |C_j| f(C_j) conj χ_π(C_j)`.
pub fn from_class_function(table: Arc<CharacterTable>, f: &ClassFunction) -> Result<CentralElement> {
    let k = table.k();
    if f.values.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: f.values.len(),
        });
    }
    let order = table.group_order() as f64;
    let coeffs = (0..k)
        .map(|p| {
            compensated_sum_complex(
                (0..k).map(|j| f.values[j] * table.value(p, j).conj() * table.class_sizes()[j] as f64),
            ) / order
        })
        .collect();
    CentralElement::from_coeffs(table, coeffs)
}

/// Averages an arbitrary function over conjugation:
/// `(Z_G F)(x) = (1/|G|) Σ_s F(s x s⁻¹)`, evaluated at each class
/// representative.
pub fn central_projection(g: &FiniteGroup, cd: &ConjugacyData, f: &[Complex64]) -> Result<ClassFunction> {
    if f.len() != g.order() {
        return Err(Error::DimensionMismatch {
            expected: g.order(),
            got: f.len(),
        });
    }
    let order = g.order() as f64;
    Ok(ClassFunction::new(
        (0..cd.len())
            .map(|j| {
                let x = cd.representative(j);
                compensated_sum_complex((0..g.order()).map(|s| f[g.conjugate(s, x)])) / order
            })
            .collect(),
    ))
}

/// The unique diagonal of `ZA(G)`, the indicator of `⋃_C C × C` in
/// `ZA(G × G)`. Coefficient `(π, π')` multiplies `χ_π̄ ⊗ χ_π'` and equals
/// `(1/|G|²) Σ_C |C|² χ_π(C) conj χ_π'(C)`.
#[derive(Debug, Clone)]
pub struct DiagonalElement {
    table: Arc<CharacterTable>,
    coeffs: Vec<Complex64>,
}

pub fn diagonal_element(table: &Arc<CharacterTable>) -> DiagonalElement {
    let k = table.k();
    let order_sq = (table.group_order() as f64).powi(2);
    let sq: Vec<f64> = table.class_sizes().iter().map(|&c| (c * c) as f64).collect();
    let mut coeffs = Vec::with_capacity(k * k);
    for p in 0..k {
        for q in 0..k {
            coeffs.push(
                compensated_sum_complex((0..k).map(|c| table.value(p, c) * table.value(q, c).conj() * sq[c]))
                    / order_sq,
            );
        }
    }
    DiagonalElement {
        table: table.clone(),
        coeffs,
    }
}

impl DiagonalElement {
    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn coeff(&self, pi: usize, pi2: usize) -> Complex64 {
        self.coeffs[pi * self.table.k() + pi2]
    }

    /// Norm in `ZA(G × G)`: `Σ d_π d_π' |c(π, π')|`.
    pub fn norm(&self) -> f64 {
        let k = self.table.k();
        compensated_sum((0..k * k).map(|i| {
            let (p, q) = (i / k, i % k);
            (self.table.degree(p) * self.table.degree(q)) as f64 * self.coeffs[i].norm()
        }))
    }

    /// Coefficients in the convention without the `π ↦ π̄` exchange:
    /// `(1/|G|²) Σ_C |C|² conj(χ_π(C) χ_π'(C))` on `χ_π ⊗ χ_π'`.
    pub fn unexchanged_coeffs(&self) -> Vec<Complex64> {
        let t = &self.table;
        let k = t.k();
        let order_sq = (t.group_order() as f64).powi(2);
        let mut out = Vec::with_capacity(k * k);
        for p in 0..k {
            for q in 0..k {
                out.push(
                    compensated_sum_complex(
                        (0..k).map(|c| (t.value(p, c) * t.value(q, c)).conj() * (t.class_sizes()[c].pow(2)) as f64),
                    ) / order_sq,
                );
            }
        }
        out
    }

    pub fn unexchanged_norm(&self) -> f64 {
        let k = self.table.k();
        let coeffs = self.unexchanged_coeffs();
        compensated_sum(
            (0..k * k).map(|i| (self.table.degree(i / k) * self.table.degree(i % k)) as f64 * coeffs[i].norm()),
        )
    }

    /// Value of the represented class function at `(x, y)` with `x ∈ C_i`,
    /// `y ∈ C_j`.
    pub fn evaluate(&self, i: usize, j: usize) -> Complex64 {
        let t = &self.table;
        let k = t.k();
        compensated_sum_complex((0..k * k).map(|idx| {
            let (p, q) = (idx / k, idx % k);
            self.coeffs[idx] * t.value(p, i).conj() * t.value(q, j)
        }))
    }

    /// Values on the class pairs `(i, j)` of `G × G`, index `i * k + j`.
    pub fn as_class_function(&self) -> ClassFunction {
        let k = self.table.k();
        ClassFunction::new((0..k * k).map(|idx| self.evaluate(idx / k, idx % k)).collect())
    }

    /// The same element on the Kronecker table of `G × G`.
    pub fn to_product_element(&self, product: Arc<CharacterTable>) -> Result<CentralElement> {
        let k = self.table.k();
        if product.k() != k * k {
            return Err(Error::MismatchedTables);
        }
        let mut coeffs = vec![ZERO; k * k];
        for p in 0..k {
            let pbar = self.table.conjugate_row(p);
            for q in 0..k {
                coeffs[pbar * k + q] += self.coeff(p, q);
            }
        }
        CentralElement::from_coeffs(product, coeffs)
    }
}
