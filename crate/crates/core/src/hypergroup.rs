//! Discrete hypergroups: duals of finite groups, the polynomial hypergroup
//! on `ℕ₀`, and orbit hypergroups `ℤⁿ/F` for finite `F ⊂ GL_n(ℤ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::char_table::CharacterTable;
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::spec::GroupSpec;
use crate::za::hypergroup_convolve;

/// A finitely supported measure.
pub type Measure<I> = BTreeMap<I, f64>;

pub trait DiscreteHypergroup {
    type Index: Clone + Ord + Debug;

    fn identity(&self) -> Self::Index;

    /// `δ_a ∗ δ_b`, a probability measure.
    fn convolve(&self, a: &Self::Index, b: &Self::Index) -> Result<Measure<Self::Index>>;

    fn haar_weight(&self, a: &Self::Index) -> f64;

    fn involution(&self, a: &Self::Index) -> Self::Index;

    /// Indices in a fixed order; infinite for `ℕ₀` and `ℤⁿ/F`.
    fn indices(&self) -> Box<dyn Iterator<Item = Self::Index> + '_>;
}

/// `ℓ¹(Ĝ, d²)`: irreducible characters with `δ_π ∗ δ_π'` weighted by
/// `m(π,π';σ) d_σ / (d_π d_π')`, Haar weight `d_π²`, involution `π ↦ π̄`.
#[derive(Debug, Clone)]
pub struct DualHypergroup {
    table: Arc<CharacterTable>,
}

pub fn dual_of_group(table: Arc<CharacterTable>) -> DualHypergroup {
    DualHypergroup { table }
}

impl DualHypergroup {
    pub fn table(&self) -> &CharacterTable {
        &self.table
    }
}

impl DiscreteHypergroup for DualHypergroup {
    type Index = usize;

    fn identity(&self) -> usize {
        0
    }

    fn convolve(&self, a: &usize, b: &usize) -> Result<Measure<usize>> {
        let k = self.table.k();
        let mut p = vec![0.0; k];
        let mut q = vec![0.0; k];
        p[*a] = 1.0;
        q[*b] = 1.0;
        Ok(hypergroup_convolve(&self.table, &p, &q)?
            .into_iter()
            .enumerate()
            .filter(|(_, w)| *w != 0.0)
            .collect())
    }

    fn haar_weight(&self, a: &usize) -> f64 {
        (self.table.degree(*a) as f64).powi(2)
    }

    fn involution(&self, a: &usize) -> usize {
        self.table.conjugate_row(*a)
    }

    fn indices(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        Box::new(0..self.table.k())
    }
}

/// `ℕ₀` with `δ_n ∗ δ_m = ½(δ_{|n−m|} + δ_{n+m})`, which collapses to
/// `δ_{n+m}` when one index is 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct PolynomialN0;

pub fn polynomial_n0() -> PolynomialN0 {
    PolynomialN0
}

impl PolynomialN0 {
    pub fn convolve_exact(&self, n: u64, m: u64) -> BTreeMap<u64, Ratio<i64>> {
        let mut out = BTreeMap::new();
        let half = Ratio::new(1, 2);
        *out.entry(n.abs_diff(m)).or_insert_with(Ratio::zero) += half;
        *out.entry(n + m).or_insert_with(Ratio::zero) += half;
        out
    }
}

impl DiscreteHypergroup for PolynomialN0 {
    type Index = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn convolve(&self, a: &u64, b: &u64) -> Result<Measure<u64>> {
        Ok(to_float(self.convolve_exact(*a, *b)))
    }

    fn haar_weight(&self, a: &u64) -> f64 {
        if *a == 0 {
            1.0
        } else {
            2.0
        }
    }

    fn involution(&self, a: &u64) -> u64 {
        *a
    }

    fn indices(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        Box::new(0..)
    }
}

fn to_float<I: Ord>(m: BTreeMap<I, Ratio<i64>>) -> Measure<I> {
    m.into_iter()
        .map(|(i, r)| (i, r.to_f64().expect("finite ratio")))
        .collect()
}

type IntMatrix = Vec<i64>;

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> IntMatrix {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            c[i * n + j] = (0..n).map(|t| a[i * n + t] * b[t * n + j]).sum();
        }
    }
    c
}

fn mat_vec(n: usize, a: &[i64], v: &[i64]) -> Vec<i64> {
    (0..n).map(|i| (0..n).map(|t| a[i * n + t] * v[t]).sum()).collect()
}

/// Fraction-free Gaussian elimination.
fn determinant(n: usize, a: &[i64]) -> i128 {
    let mut m: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k * n + k] == 0 {
            match (k + 1..n).find(|&r| m[r * n + k] != 0) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
            }
        }
        prev = m[k * n + k];
    }
    sign * m[n * n - 1]
}

/// Orbits of a finite unimodular group `F` acting on `ℤⁿ`. Each orbit is
/// named by its lexicographically smallest point.
#[derive(Debug, Clone)]
pub struct OrbitHypergroup {
    dim: usize,
    group: Vec<IntMatrix>,
}

/// Validates `F` (square, determinant ±1, closed, contains the identity);
/// repeated matrices are dropped.
pub fn orbit_hypergroup(dim: usize, matrices: &[Vec<Vec<i64>>]) -> Result<OrbitHypergroup> {
    let invalid = |why: String| Error::InvalidOrbitGroup(why);
    if dim == 0 {
        return Err(invalid("dimension must be positive".into()));
    }
    let mut set = BTreeSet::new();
    for m in matrices {
        if m.len() != dim || m.iter().any(|r| r.len() != dim) {
            return Err(invalid(format!("expected {dim}x{dim} matrices")));
        }
        let flat: IntMatrix = m.iter().flatten().copied().collect();
        let det = determinant(dim, &flat);
        if det.abs() != 1 {
            return Err(invalid(format!("determinant {det} is not ±1")));
        }
        set.insert(flat);
    }
    let identity: IntMatrix = (0..dim * dim).map(|i| i64::from(i / dim == i % dim)).collect();
    if !set.contains(&identity) {
        return Err(invalid("identity matrix missing".into()));
    }
    for a in &set {
        for b in &set {
            if !set.contains(&mat_mul(dim, a, b)) {
                return Err(invalid("not closed under multiplication".into()));
            }
        }
    }
    Ok(OrbitHypergroup {
        dim,
        group: set.into_iter().collect(),
    })
}

impl OrbitHypergroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group_order(&self) -> usize {
        self.group.len()
    }

    pub fn orbit(&self, v: &[i64]) -> BTreeSet<Vec<i64>> {
        self.group.iter().map(|a| mat_vec(self.dim, a, v)).collect()
    }

    pub fn canonical(&self, v: &[i64]) -> Vec<i64> {
        self.group
            .iter()
            .map(|a| mat_vec(self.dim, a, v))
            .min()
            .expect("group contains the identity")
    }

    /// `δ_{F(a)} ∗ δ_{F(b)}`: expand to `(1/|F|²) Σ_{α,β} δ_{αa + βb}` in
    /// `ℓ¹(ℤⁿ)` and collect the mass of each orbit.
    pub fn convolve_exact(&self, a: &[i64], b: &[i64]) -> BTreeMap<Vec<i64>, Ratio<i64>> {
        let n = self.group.len() as i64;
        let unit = Ratio::new(1, n * n);
        let left: Vec<Vec<i64>> = self.group.iter().map(|m| mat_vec(self.dim, m, a)).collect();
        let right: Vec<Vec<i64>> = self.group.iter().map(|m| mat_vec(self.dim, m, b)).collect();
        let mut out = BTreeMap::new();
        for x in &left {
            for y in &right {
                let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                *out.entry(self.canonical(&s)).or_insert_with(Ratio::zero) += unit;
            }
        }
        out
    }
}

impl DiscreteHypergroup for OrbitHypergroup {
    type Index = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn convolve(&self, a: &Vec<i64>, b: &Vec<i64>) -> Result<Measure<Vec<i64>>> {
        Ok(to_float(self.convolve_exact(a, b)))
    }

    fn haar_weight(&self, a: &Vec<i64>) -> f64 {
        self.orbit(a).len() as f64
    }

    fn involution(&self, a: &Vec<i64>) -> Vec<i64> {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        self.canonical(&neg)
    }

    /// Orbit names, visiting `ℤⁿ` shell by shell in the sup norm.
    fn indices(&self) -> Box<dyn Iterator<Item = Vec<i64>> + '_> {
        let dim = self.dim;
        Box::new(
            (0i64..)
                .flat_map(move |r| shell(dim, r))
                .filter(move |v| self.canonical(v) == *v),
        )
    }
}

/// Points of `ℤⁿ` with sup norm exactly `r`, in lexicographic order.
fn shell(dim: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * r + 1) as u64;
    (0..side.pow(dim as u32)).filter_map(move |mut code| {
        let mut v = vec![0i64; dim];
        for slot in v.iter_mut().rev() {
            *slot = (code % side) as i64 - r;
            code /= side;
        }
        (v.iter().map(|x| x.abs()).max() == Some(r)).then_some(v)
    })
}

/// Measure-level convolution `p ∗ q`.
pub fn convolve_measures<H: DiscreteHypergroup>(
    h: &H,
    p: &Measure<H::Index>,
    q: &Measure<H::Index>,
) -> Result<Measure<H::Index>> {
    let mut acc: BTreeMap<H::Index, Vec<f64>> = BTreeMap::new();
    for (a, wa) in p {
        for (b, wb) in q {
            for (c, w) in h.convolve(a, b)? {
                acc.entry(c).or_default().push(wa * wb * w);
            }
        }
    }
    Ok(acc.into_iter().map(|(c, ws)| (c, compensated_sum(ws))).collect())
}

/// Bilinear extension of the convolution to finitely supported complex
/// vectors, the product of `ℓ¹(H)`.
pub fn ell1_convolve<H: DiscreteHypergroup>(
    h: &H,
    f: &BTreeMap<H::Index, Complex64>,
    g: &BTreeMap<H::Index, Complex64>,
) -> Result<BTreeMap<H::Index, Complex64>> {
    let mut out: BTreeMap<H::Index, Complex64> = BTreeMap::new();
    for (a, fa) in f {
        for (b, gb) in g {
            for (c, w) in h.convolve(a, b)? {
                *out.entry(c).or_default() += fa * gb * w;
            }
        }
    }
    Ok(out)
}

pub fn ell1_norm<I>(f: &BTreeMap<I, Complex64>) -> f64 {
    compensated_sum(f.values().map(|z| z.norm()))
}

fn measure_distance<I: Ord + Clone>(p: &Measure<I>, q: &Measure<I>) -> f64 {
    let keys: BTreeSet<&I> = p.keys().chain(q.keys()).collect();
    keys.into_iter()
        .map(|k| (p.get(k).copied().unwrap_or(0.0) - q.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Worst deviations observed while checking the hypergroup axioms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    /// `max |Σ_c (δ_a ∗ δ_b)(c) − 1|`.
    pub normalization: f64,
    /// Smallest coefficient seen; negative values break the axioms.
    pub min_coefficient: f64,
    /// `max ‖δ_e ∗ δ_a − δ_a‖` and `‖δ_a ∗ δ_e − δ_a‖`.
    pub identity: f64,
    pub associativity: f64,
    /// `max |h(a) (δ_a∗δ_b)(c) − h(c) (δ_c∗δ_b̃)(a)|`.
    pub haar: f64,
}

impl AxiomReport {
    pub fn passes(&self, normalization_tol: f64, associativity_tol: f64) -> bool {
        self.min_coefficient >= 0.0
            && self.normalization <= normalization_tol
            && self.identity <= associativity_tol
            && self.associativity <= associativity_tol
            && self.haar <= associativity_tol
    }
}

/// Checks normalization, positivity, identity and Haar invariance on all
/// pairs of `support`, and associativity on `triples` seeded random triples
/// (all triples if there are fewer).
pub fn check_axioms<H: DiscreteHypergroup>(
    h: &H,
    support: &[H::Index],
    triples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        min_coefficient: f64::INFINITY,
        ..AxiomReport::default()
    };
    let e = h.identity();
    let point = |a: &H::Index| Measure::from([(a.clone(), 1.0)]);
    for a in support {
        report.identity = report
            .identity
            .max(measure_distance(&h.convolve(&e, a)?, &point(a)))
            .max(measure_distance(&h.convolve(a, &e)?, &point(a)));
        for b in support {
            let ab = h.convolve(a, b)?;
            report.pairs_checked += 1;
            report.normalization = report
                .normalization
                .max((compensated_sum(ab.values().copied()) - 1.0).abs());
            for (c, &w) in &ab {
                report.min_coefficient = report.min_coefficient.min(w);
                let back = h.convolve(c, &h.involution(b))?;
                let lhs = h.haar_weight(a) * w;
                let rhs = h.haar_weight(c) * back.get(a).copied().unwrap_or(0.0);
                report.haar = report.haar.max((lhs - rhs).abs());
            }
        }
    }

    let n = support.len();
    let all = n.pow(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<(usize, usize, usize)> = if all <= triples {
        (0..all).map(|i| (i / (n * n), (i / n) % n, i % n)).collect()
    } else {
        (0..triples)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
            .collect()
    };
    for (i, j, k) in picks {
        let (a, b, c) = (&support[i], &support[j], &support[k]);
        let left = convolve_measures(h, &h.convolve(a, b)?, &point(c))?;
        let right = convolve_measures(h, &point(a), &h.convolve(b, c)?)?;
        report.associativity = report.associativity.max(measure_distance(&left, &right));
        report.triples_checked += 1;
    }
    if report.min_coefficient == f64::INFINITY {
        report.min_coefficient = 0.0;
    }
    Ok(report)
}

/// `{"kind": "dual", "group": {...}}`, `{"kind": "poly-n0"}` or
/// `{"kind": "orbit", "dim": n, "matrices": [[[...]]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum HypergroupSpec {
    #[serde(rename = "dual")]
    Dual { group: GroupSpec },
    #[serde(rename = "poly-n0")]
    PolyN0,
    #[serde(rename = "orbit")]
    Orbit { dim: usize, matrices: Vec<Vec<Vec<i64>>> },
}

impl HypergroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))
    }

    /// Rejects specs that cannot be built, without enumerating any group.
    pub fn validate(&self) -> Result<()> {
        match self {
            HypergroupSpec::Dual { group } => group.validate(),
            HypergroupSpec::PolyN0 => Ok(()),
            HypergroupSpec::Orbit { dim, matrices } => orbit_hypergroup(*dim, matrices).map(|_| ()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            HypergroupSpec::Dual { group } => match group {
                GroupSpec::Catalog(name) => format!("dual({name})"),
                _ => "dual".to_string(),
            },
            HypergroupSpec::PolyN0 => "poly-n0".to_string(),
            HypergroupSpec::Orbit { dim, matrices } => format!("Z^{dim}/F(|F|={})", matrices.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn n0_rule() {
        let h = polynomial_n0();
        assert_eq!(h.convolve_exact(1, 1), BTreeMap::from([(0, r(1, 2)), (2, r(1, 2))]));
        assert_eq!(h.convolve_exact(0, 5), BTreeMap::from([(5, r(1, 1))]));
        assert_eq!(h.convolve_exact(3, 0), BTreeMap::from([(3, r(1, 1))]));
    }

    #[test]
    fn n0_associativity_example() {
        let h = polynomial_n0();
        let d = |n: u64| Measure::from([(n, 1.0)]);
        let left = convolve_measures(&h, &h.convolve(&1, &1).unwrap(), &d(2)).unwrap();
        let right = convolve_measures(&h, &d(1), &h.convolve(&1, &2).unwrap()).unwrap();
        assert_eq!(left, right);
        // ½δ₂ ∗ ... expands to ¼δ₀ + ½δ₂ + ¼δ₄
        assert_eq!(left, Measure::from([(0, 0.25), (2, 0.5), (4, 0.25)]));
    }

    #[test]
    fn z_mod_sign_matches_n0() {
        let h = orbit_hypergroup(1, &[vec![vec![1]], vec![vec![-1]]]).unwrap();
        let got = h.convolve_exact(&[1], &[1]);
        assert_eq!(got, BTreeMap::from([(vec![-2], r(1, 2)), (vec![0], r(1, 2))]));
        let names: Vec<Vec<i64>> = h.indices().take(4).collect();
        assert_eq!(names, vec![vec![0], vec![-1], vec![-2], vec![-3]]);
    }

    #[test]
    fn trivial_f_is_the_group() {
        let h = orbit_hypergroup(2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let m = h.convolve(&vec![1, -2], &vec![3, 5]).unwrap();
        assert_eq!(m, Measure::from([(vec![4, 3], 1.0)]));
        assert_eq!(h.haar_weight(&vec![7, 1]), 1.0);
    }

    #[test]
    fn rotation_group_gives_probabilities() {
        let rot = vec![vec![0, -1], vec![1, 0]];
        let mats = vec![
            vec![vec![1, 0], vec![0, 1]],
            rot.clone(),
            vec![vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![-1, 0]],
        ];
        let h = orbit_hypergroup(2, &mats).unwrap();
        assert_eq!(h.group_order(), 4);
        let support: Vec<Vec<i64>> = h.indices().take(12).collect();
        let rep = check_axioms(&h, &support, 500, 1).unwrap();
        assert!(rep.passes(1e-12, 1e-12), "{rep:?}");
    }

    #[test]
    fn invalid_orbit_groups() {
        let err = orbit_hypergroup(1, &[vec![vec![-1]]]).unwrap_err();
        assert!(err.to_string().contains("invalid orbit group"));
        assert!(orbit_hypergroup(1, &[vec![vec![1]], vec![vec![2]]]).is_err());
        let rot = vec![vec![0, -1], vec![1, 0]];
        assert!(orbit_hypergroup(2, &[vec![vec![1, 0], vec![0, 1]], rot]).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(2, &[0, -1, 1, 0]), 1);
        assert_eq!(determinant(3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]), -1);
        assert_eq!(determinant(3, &[2, 1, 0, 1, 1, 0, 0, 0, 1]), 1);
        assert_eq!(determinant(3, &[2, 0, 1, 1, 3, 2, 1, 1, 1]), 0);
        assert_eq!(determinant(2, &[1, 2, 2, 4]), 0);
    }

    #[test]
    fn spec_parsing() {
        let s = HypergroupSpec::parse(r#"{"kind": "dual", "group": {"catalog": "S3"}}"#).unwrap();
        assert_eq!(s.label(), "dual(S3)");
        assert_eq!(
            HypergroupSpec::parse(r#"{"kind": "poly-n0"}"#).unwrap(),
            HypergroupSpec::PolyN0
        );
        let s = HypergroupSpec::parse(r#"{"kind": "orbit", "dim": 1, "matrices": [[[1]], [[-1]]]}"#).unwrap();
        assert!(matches!(s, HypergroupSpec::Orbit { dim: 1, .. }));
        assert!(HypergroupSpec::parse(r#"{"kind": "weird"}"#).is_err());
    }
}
