//! Built-in groups: `Zn`, `Dn`, `Sn`, `An`, `Q8` and products such as `S3xZ2`.

use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup};

pub const MAX_SYMMETRIC_DEGREE: usize = 6;

fn cycle(n: usize, points: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for (i, &p) in points.iter().enumerate() {
        perm[p] = points[(i + 1) % points.len()];
    }
    perm
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownCatalog("Z0".into()));
    }
    let gens = if n == 1 {
        vec![]
    } else {
        vec![cycle(n, &(0..n).collect::<Vec<_>>())]
    };
    Ok(FiniteGroup::from_permutation_generators(n, &gens)?.with_label(format!("Z{n}")))
}

/// Symmetries of the regular `n`-gon, order `2n`, for `n >= 3`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::UnknownCatalog(format!("D{n}")));
    }
    let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    Ok(FiniteGroup::from_permutation_generators(n, &[rotation, reflection])?.with_label(format!("D{n}")))
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::UnknownCatalog(format!("S{n}")));
    }
    let gens = match n {
        1 => vec![],
        2 => vec![cycle(2, &[0, 1])],
        _ => vec![cycle(n, &[0, 1]), cycle(n, &(0..n).collect::<Vec<_>>())],
    };
    Ok(FiniteGroup::from_permutation_generators(n, &gens)?.with_label(format!("S{n}")))
}

/// Generated by the 3-cycles `(0 1 i)`.
pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::UnknownCatalog(format!("A{n}")));
    }
    let gens: Vec<Vec<usize>> = (2..n).map(|i| cycle(n, &[0, 1, i])).collect();
    Ok(FiniteGroup::from_permutation_generators(n, &gens)?.with_label(format!("A{n}")))
}

/// Quaternion group in its right-regular permutation representation.
pub fn quaternion() -> Result<FiniteGroup> {
    // Element (s, u) with s in {0, 1} a sign bit and u in {1, i, j, k} = 0..4
    // is encoded as 4s + u.
    fn unit_mul(a: usize, b: usize) -> (usize, usize) {
        // (sign, unit) of the product of basis units
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        T[a][b]
    }
    let mul = |x: usize, y: usize| {
        let (s, u) = unit_mul(x % 4, y % 4);
        4 * ((x / 4 + y / 4 + s) % 2) + u
    };
    let right_regular = |g: usize| (0..8).map(|x| mul(x, g)).collect::<Vec<_>>();
    Ok(FiniteGroup::from_permutation_generators(8, &[right_regular(1), right_regular(2)])?.with_label("Q8"))
}

#[derive(Debug, Clone, Copy)]
enum Factor {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion,
}

fn parse_factor(name: &str) -> Result<Factor> {
    let unknown = || Error::UnknownCatalog(name.to_string());
    if name == "Q8" {
        return Ok(Factor::Quaternion);
    }
    let mut chars = name.chars();
    let family = chars.next().ok_or_else(unknown)?;
    let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
    let symmetric_range = 1..=MAX_SYMMETRIC_DEGREE;
    match family {
        'Z' | 'C' if n >= 1 => Ok(Factor::Cyclic(n)),
        'D' if n >= 3 => Ok(Factor::Dihedral(n)),
        'S' if symmetric_range.contains(&n) => Ok(Factor::Symmetric(n)),
        'A' if symmetric_range.contains(&n) => Ok(Factor::Alternating(n)),
        _ => Err(unknown()),
    }
}

fn build_factor(f: Factor) -> Result<FiniteGroup> {
    match f {
        Factor::Cyclic(n) => cyclic(n),
        Factor::Dihedral(n) => dihedral(n),
        Factor::Symmetric(n) => symmetric(n),
        Factor::Alternating(n) => alternating(n),
        Factor::Quaternion => quaternion(),
    }
}

fn parse_name(name: &str) -> Result<Vec<Factor>> {
    let factors = name
        .split(['x', '×'])
        .map(|f| parse_factor(f.trim()))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::UnknownCatalog(name.to_string()))?;
    Ok(factors)
}

/// Checks that `name` is a catalog name without building the group.
pub fn validate_name(name: &str) -> Result<()> {
    parse_name(name).map(|_| ())
}

/// Parses a catalog name. Factors are separated by `x` or `×`.
pub fn catalog_group(name: &str) -> Result<FiniteGroup> {
    let factors = parse_name(name)?;
    let mut group = build_factor(factors[0])?;
    for &f in &factors[1..] {
        group = direct_product(&group, &build_factor(f)?)?;
    }
    Ok(group)
}

/// The groups exercised by the verification suite, in report order.
pub fn default_catalog() -> Vec<&'static str> {
    vec![
        "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "S3", "D4", "Q8", "D5", "A4", "D6",
        "S4", "A5", "S3xZ2", "S3xZ3", "S3xS3", "Q8xZ2", "D4xS3",
    ]
}
