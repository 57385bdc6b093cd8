//! Central trigonometric polynomials on `SU(2)` and `SO(3)`.
//!
//! The class of an element with eigenvalues `ζ, ζ⁻¹` is written `C_ζ`; the
//! level-`l` irreducible character is `χ_l(C_ζ) = Σ_{k=0}^{l} ζ^{l-2k}`, of
//! degree `l + 1`. `SO(3)` sees only the even levels.
//!
//! The point derivation `D_z u = z u'(z)` at `C_z` is defined for
//! `Im z > 0`. It is non-zero on every `χ_l`, `l > 0`, when `z` is
//! transcendental; for algebraic `z` some `D_z χ_l` may vanish, which no
//! floating-point input can distinguish.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, compensated_sum_complex};

/// Largest level admitted in a polynomial.
pub const SUPPORT_CAP: u32 = 10_000;

/// Below this distance from `±1` the closed form for `χ_l` is replaced by the
/// finite sum.
pub const SINGULAR_THRESHOLD: f64 = 1e-6;

const CIRCLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint(Complex64);

impl CirclePoint {
    pub fn new(z: Complex64) -> Result<Self> {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::NotOnCircle { modulus });
        }
        Ok(Self(z))
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(Complex64::from_polar(1.0, theta))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn angle(self) -> f64 {
        self.0.arg()
    }

    /// `ζ^n`, computed from the angle to avoid drift in repeated products.
    pub fn pow(self, n: i64) -> Complex64 {
        Complex64::from_polar(1.0, n as f64 * self.angle())
    }

    /// `|z − z⁻¹|² = 4 sin²θ`.
    pub fn gap_sq(self) -> f64 {
        (self.0 - self.0.inv()).norm_sqr()
    }
}

fn chi_finite_sum(l: u32, zeta: CirclePoint) -> Complex64 {
    compensated_sum_complex((0..=l as i64).map(|k| zeta.pow(l as i64 - 2 * k)))
}

fn chi_closed_form(l: u32, zeta: CirclePoint) -> Complex64 {
    let n = l as i64 + 1;
    (zeta.pow(n) - zeta.pow(-n)) / (zeta.z() - zeta.z().inv())
}

/// `χ_l(C_ζ)`: closed form `(ζ^{l+1} − ζ^{-l-1}) / (ζ − ζ⁻¹)`, or the
/// finite sum when `ζ` is within [`SINGULAR_THRESHOLD`] of `±1`.
pub fn chi_l(l: u32, zeta: CirclePoint) -> Complex64 {
    let z = zeta.z();
    if (z - 1.0).norm() < SINGULAR_THRESHOLD || (z + 1.0).norm() < SINGULAR_THRESHOLD {
        chi_finite_sum(l, zeta)
    } else {
        chi_closed_form(l, zeta)
    }
}

#[doc(hidden)]
pub fn chi_l_finite_sum(l: u32, zeta: CirclePoint) -> Complex64 {
    chi_finite_sum(l, zeta)
}

#[doc(hidden)]
pub fn chi_l_closed_form(l: u32, zeta: CirclePoint) -> Complex64 {
    chi_closed_form(l, zeta)
}

/// Levels in `π_l ⊗ π_m`: `|l − m|, |l − m| + 2, …, l + m`, each once.
pub fn clebsch_gordan(l: u32, m: u32) -> Vec<u32> {
    (l.abs_diff(m)..=l + m).step_by(2).collect()
}

/// Finitely supported `Σ α_l χ_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralTrigPoly {
    coeffs: BTreeMap<u32, Complex64>,
    so3: bool,
}

impl CentralTrigPoly {
    pub fn zero_su2() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            so3: false,
        }
    }

    /// Zero polynomial restricted to even levels.
    pub fn zero_so3() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            so3: true,
        }
    }

    pub fn character(l: u32) -> Result<Self> {
        Self::from_coeffs([(l, Complex64::new(1.0, 0.0))], false)
    }

    pub fn from_coeffs<I>(coeffs: I, so3: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Complex64)>,
    {
        let mut p = if so3 { Self::zero_so3() } else { Self::zero_su2() };
        for (l, a) in coeffs {
            p.add_term(l, a)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, l: u32, a: Complex64) -> Result<()> {
        if l > SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                level: l,
                cap: SUPPORT_CAP,
            });
        }
        if self.so3 && l % 2 == 1 {
            return Err(Error::OddLevel(l));
        }
        let entry = self.coeffs.entry(l).or_insert(Complex64::new(0.0, 0.0));
        *entry += a;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&l);
        }
        Ok(())
    }

    pub fn is_so3(&self) -> bool {
        self.so3
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, l: u32) -> Complex64 {
        self.coeffs.get(&l).copied().unwrap_or_default()
    }

    /// `Σ_l |α_l| (l + 1)`.
    pub fn norm(&self) -> f64 {
        compensated_sum(self.coeffs.iter().map(|(&l, a)| a.norm() * (l + 1) as f64))
    }

    pub fn evaluate(&self, zeta: CirclePoint) -> Complex64 {
        compensated_sum_complex(self.coeffs.iter().map(|(&l, &a)| a * chi_l(l, zeta)))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        multiply_polys(self, other)
    }
}

/// Product through the Clebsch–Gordan rule. The result is `SO(3)`-restricted
/// when both factors are.
pub fn multiply_polys(u: &CentralTrigPoly, v: &CentralTrigPoly) -> Result<CentralTrigPoly> {
    let mut acc: BTreeMap<u32, Vec<Complex64>> = BTreeMap::new();
    for (&l, &a) in &u.coeffs {
        for (&m, &b) in &v.coeffs {
            if l + m > SUPPORT_CAP {
                return Err(Error::SupportCapExceeded {
                    level: l + m,
                    cap: SUPPORT_CAP,
                });
            }
            for n in clebsch_gordan(l, m) {
                acc.entry(n).or_default().push(a * b);
            }
        }
    }
    let coeffs = acc
        .into_iter()
        .map(|(n, terms)| (n, compensated_sum_complex(terms)))
        .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
        .collect();
    Ok(CentralTrigPoly {
        coeffs,
        so3: u.so3 && v.so3,
    })
}

fn require_upper(z: CirclePoint) -> Result<()> {
    if z.z().im > 0.0 {
        Ok(())
    } else {
        Err(Error::DerivationUndefined { im: z.z().im })
    }
}

/// `D_z χ_l = (l (z^{l+2} − z^{-l-2}) − (l+2)(z^l − z^{-l})) / (z − z⁻¹)²`.
pub fn derivation_of_character(l: u32, z: CirclePoint) -> Result<Complex64> {
    require_upper(z)?;
    let l = l as i64;
    let lf = l as f64;
    let num = (z.pow(l + 2) - z.pow(-l - 2)) * lf - (z.pow(l) - z.pow(-l)) * (lf + 2.0);
    let gap = z.z() - z.z().inv();
    Ok(num / (gap * gap))
}

/// `(4l + 4) / |z − z⁻¹|²`.
pub fn derivation_bound(l: u32, z: CirclePoint) -> f64 {
    (4 * l as u64 + 4) as f64 / z.gap_sq()
}

pub fn point_derivation(z: CirclePoint, u: &CentralTrigPoly) -> Result<Complex64> {
    require_upper(z)?;
    let terms = u
        .coeffs
        .iter()
        .map(|(&l, &a)| derivation_of_character(l, z).map(|d| a * d))
        .collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum_complex(terms))
}

/// `|D_z(uv) − u(C_z) D_z v − D_z u · v(C_z)|`.
pub fn derivation_identity_check(z: CirclePoint, u: &CentralTrigPoly, v: &CentralTrigPoly) -> Result<f64> {
    let uv = multiply_polys(u, v)?;
    let lhs = point_derivation(z, &uv)?;
    let rhs = u.evaluate(z) * point_derivation(z, v)? + point_derivation(z, u)? * v.evaluate(z);
    Ok((lhs - rhs).norm())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l: u32,
    /// Angle of `z` in radians.
    pub theta: f64,
    pub abs_derivation: f64,
    pub bound: f64,
    pub slack: f64,
}

/// `|D_z χ_l|` against its bound for `l = 0..=l_max` at each angle. Rows
/// are ordered by angle, then level.
pub fn derivation_sweep(l_max: u32, thetas: &[f64]) -> Result<Vec<SweepRow>> {
    let per_angle = thetas
        .par_iter()
        .map(|&theta| {
            let z = CirclePoint::from_angle(theta);
            (0..=l_max)
                .map(|l| {
                    let abs_derivation = derivation_of_character(l, z)?.norm();
                    let bound = derivation_bound(l, z);
                    Ok(SweepRow {
                        l,
                        theta,
                        abs_derivation,
                        bound,
                        slack: bound - abs_derivation,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_angle.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn chi_examples() {
        let z = CirclePoint::from_angle(0.7);
        assert!((chi_l(0, z) - 1.0).norm() < 1e-15);
        for l in 0..20 {
            assert!((chi_l(l, CirclePoint::from_angle(0.0)) - c((l + 1) as f64)).norm() < 1e-12);
        }
        let i = CirclePoint::new(Complex64::new(0.0, 1.0)).unwrap();
        assert!(chi_l(1, i).norm() < 1e-15);
        // ζ = -1 gives (-1)^l (l + 1)
        let minus = CirclePoint::from_angle(PI);
        assert!((chi_l(3, minus) + 4.0).norm() < 1e-12);
    }

    #[test]
    fn circle_point_validation() {
        assert!(CirclePoint::new(Complex64::new(1.0, 1.0)).is_err());
        assert!(CirclePoint::new(Complex64::new(0.6, 0.8)).is_ok());
    }

    #[test]
    fn cg_examples() {
        assert_eq!(clebsch_gordan(1, 1), vec![0, 2]);
        assert_eq!(clebsch_gordan(0, 7), vec![7]);
        assert_eq!(clebsch_gordan(1, 2), vec![1, 3]);
        for l in 0..15 {
            for m in 0..15 {
                let dim: u32 = clebsch_gordan(l, m).iter().map(|k| k + 1).sum();
                assert_eq!(dim, (l + 1) * (m + 1));
            }
        }
    }

    #[test]
    fn chi1_squared() {
        let chi1 = CentralTrigPoly::character(1).unwrap();
        let sq = multiply_polys(&chi1, &chi1).unwrap();
        assert_eq!(sq.coeff(0), c(1.0));
        assert_eq!(sq.coeff(2), c(1.0));
        assert_eq!(sq.norm(), 4.0);
        assert_eq!(chi1.norm().powi(2), 4.0);
    }

    #[test]
    fn so3_closed_under_products() {
        let u = CentralTrigPoly::from_coeffs([(0, c(1.0)), (2, c(-0.5)), (4, c(2.0))], true).unwrap();
        let v = CentralTrigPoly::from_coeffs([(2, c(1.0)), (6, c(3.0))], true).unwrap();
        let w = multiply_polys(&u, &v).unwrap();
        assert!(w.is_so3());
        assert!(w.coeffs().keys().all(|l| l % 2 == 0));
        assert!(matches!(
            CentralTrigPoly::from_coeffs([(3, c(1.0))], true),
            Err(Error::OddLevel(3))
        ));
    }

    #[test]
    fn support_cap() {
        assert!(CentralTrigPoly::character(SUPPORT_CAP + 1).is_err());
        let big = CentralTrigPoly::character(SUPPORT_CAP).unwrap();
        assert!(multiply_polys(&big, &CentralTrigPoly::character(1).unwrap()).is_err());
    }

    #[test]
    fn derivation_examples() {
        let z = CirclePoint::from_angle(1.1);
        let d0 = point_derivation(z, &CentralTrigPoly::character(0).unwrap()).unwrap();
        assert_eq!(d0.norm(), 0.0);
        let d1 = point_derivation(z, &CentralTrigPoly::character(1).unwrap()).unwrap();
        assert!((d1 - (z.z() - z.z().inv())).norm() < 1e-14);

        let z = CirclePoint::from_angle(PI / 4.0);
        assert!((z.gap_sq() - 2.0).abs() < 1e-14);
        let d5 = derivation_of_character(5, z).unwrap();
        assert!(d5.norm() <= 12.0);
        assert_eq!(derivation_bound(5, z).round(), 12.0);
    }

    #[test]
    fn derivation_rejects_lower_half() {
        for theta in [0.0, -0.3, -2.0] {
            let err = point_derivation(CirclePoint::from_angle(theta), &CentralTrigPoly::character(1).unwrap());
            assert!(err.unwrap_err().to_string().contains("real-eigenvalue locus"));
        }
    }

    #[test]
    fn identity_on_characters() {
        let z = CirclePoint::from_angle(0.9);
        let chi0 = CentralTrigPoly::character(0).unwrap();
        assert_eq!(derivation_identity_check(z, &chi0, &chi0).unwrap(), 0.0);
        let chi1 = CentralTrigPoly::character(1).unwrap();
        assert!(derivation_identity_check(z, &chi1, &chi1).unwrap() < 1e-10);
    }

    #[test]
    fn sweep_rows() {
        let rows = derivation_sweep(10, &[0.5, 1.5]).unwrap();
        assert_eq!(rows.len(), 22);
        assert!(rows.iter().all(|r| r.slack >= -1e-12));
        assert_eq!((rows[11].l, rows[11].theta), (0, 1.5));
    }
}
