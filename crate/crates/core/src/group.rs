//! Finite groups on dense element indices, conjugacy classes and class-algebra
//! structure constants.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Default bound on the order of any group built by closure or product.
pub const DEFAULT_ORDER_CAP: usize = 20_000;

/// Groups up to this order carry a precomputed multiplication table.
pub const TABLE_THRESHOLD: usize = 4096;

/// Exhaustive associativity checks are run up to this order.
pub const EXHAUSTIVE_CHECK_ORDER: usize = 512;

#[derive(Debug, Clone)]
enum Multiplication {
    Table(Vec<u32>),
    Permutations {
        perms: Vec<Vec<u32>>,
        index: HashMap<Vec<u32>, u32>,
    },
    Product {
        left: Arc<FiniteGroup>,
        right: Arc<FiniteGroup>,
    },
}

/// A finite group with elements `0..order`.
///
/// Elements are plain indices; the identity is not necessarily index 0 for
/// groups supplied as raw multiplication tables, but it is for every group
/// built by closure or product.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    identity: usize,
    inverse: Vec<u32>,
    generators: Vec<usize>,
    mul: Multiplication,
    words: Option<Vec<String>>,
}

/// Composition of image arrays: apply `p`, then `q`.
fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    p.iter().map(|&i| q[i as usize]).collect()
}

fn validate_permutation(degree: usize, perm: &[usize]) -> Result<Vec<u32>> {
    if perm.len() != degree {
        return Err(Error::InvalidPermutation(format!(
            "expected {degree} images, got {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &image in perm {
        if image >= degree || seen[image] {
            return Err(Error::InvalidPermutation(format!(
                "{perm:?} is not a bijection of 0..{degree}"
            )));
        }
        seen[image] = true;
    }
    Ok(perm.iter().map(|&i| i as u32).collect())
}

impl FiniteGroup {
    /// Closure of the given permutations, with the default order cap.
    pub fn from_permutation_generators(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutation_generators_capped(degree, generators, DEFAULT_ORDER_CAP)
    }

    /// Breadth-first closure from the identity. Elements appear in discovery
    /// order, multiplying each discovered element on the right by the
    /// generators in the order given.
    pub fn from_permutation_generators_capped(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| validate_permutation(degree, g))
            .collect::<Result<Vec<_>>>()?;

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut perms = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0u32)]);
        let mut words = vec![String::from("e")];
        let mut parent = vec![(0u32, 0u32)];
        // right[x * ngens + g] = x * gens[g]
        let mut right: Vec<u32> = Vec::new();

        let mut head = 0;
        while head < perms.len() {
            for (gi, g) in gens.iter().enumerate() {
                let y = compose(&perms[head], g);
                let idx = match index.get(&y) {
                    Some(&idx) => idx,
                    None => {
                        if perms.len() >= cap {
                            return Err(Error::OrderCapExceeded { cap });
                        }
                        let idx = perms.len() as u32;
                        let word = if head == 0 {
                            format!("g{gi}")
                        } else {
                            format!("{} g{gi}", words[head])
                        };
                        index.insert(y.clone(), idx);
                        perms.push(y);
                        parent.push((head as u32, gi as u32));
                        words.push(word);
                        idx
                    }
                };
                right.push(idx);
            }
            head += 1;
        }

        let order = perms.len();
        let generator_idx: Vec<usize> = gens.iter().map(|g| index[g] as usize).collect();
        let inverse: Vec<u32> = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; degree];
                for (i, &img) in p.iter().enumerate() {
                    inv[img as usize] = i as u32;
                }
                index[&inv]
            })
            .collect();

        let mul = if order <= TABLE_THRESHOLD {
            Multiplication::Table(table_from_right_action(order, gens.len(), &right, &parent))
        } else {
            Multiplication::Permutations { perms, index }
        };

        Ok(Self {
            label: format!("perm{degree}"),
            order,
            identity: 0,
            inverse,
            generators: generator_idx,
            mul,
            words: Some(words),
        })
    }

    /// Builds a group from an explicit `order × order` table (row-major, entry
    /// `x * order + y` holds `xy`). Checks closure, identity, inverses and, up
    /// to [`EXHAUSTIVE_CHECK_ORDER`], associativity.
    pub fn from_multiplication_table(label: &str, order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table of length {} does not match order {order}",
                table.len()
            )));
        }
        if order > TABLE_THRESHOLD {
            return Err(Error::OrderCapExceeded { cap: TABLE_THRESHOLD });
        }
        if table.iter().any(|&z| z >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for x in 0..order {
            let inv = (0..order)
                .find(|&y| table[y * order + x] == identity && table[x * order + y] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
            inverse.push(inv as u32);
        }
        let group = Self {
            label: label.to_string(),
            order,
            identity,
            inverse,
            generators: (0..order).filter(|&x| x != identity).collect(),
            mul: Multiplication::Table(table.into_iter().map(|z| z as u32).collect()),
            words: None,
        };
        if order <= EXHAUSTIVE_CHECK_ORDER && !group.check_associativity() {
            return Err(Error::InvalidGroup("multiplication is not associative".into()));
        }
        Ok(group)
    }

    pub fn trivial() -> Self {
        Self::from_permutation_generators(1, &[])
            .expect("trivial group")
            .with_label("Z1")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Element indices of the generating set.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn has_table(&self) -> bool {
        matches!(self.mul, Multiplication::Table(_))
    }

    /// Generator word of an element, when the construction recorded one.
    pub fn element_word(&self, x: usize) -> Option<&str> {
        self.words.as_ref().map(|w| w[x].as_str())
    }

    #[inline]
    pub fn multiply(&self, x: usize, y: usize) -> usize {
        match &self.mul {
            Multiplication::Table(t) => t[x * self.order + y] as usize,
            Multiplication::Permutations { perms, index } => index[&compose(&perms[x], &perms[y])] as usize,
            Multiplication::Product { left, right } => {
                let n = right.order;
                let (a, b) = (x / n, x % n);
                let (c, d) = (y / n, y % n);
                left.multiply(a, c) * n + right.multiply(b, d)
            }
        }
    }

    #[inline]
    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    #[inline]
    pub fn conjugate(&self, s: usize, x: usize) -> usize {
        self.multiply(self.multiply(s, x), self.inverse(s))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.multiply(a, b) == self.multiply(b, a)))
    }

    /// Associativity over all triples up to [`EXHAUSTIVE_CHECK_ORDER`],
    /// otherwise over 20000 seeded random triples.
    pub fn check_associativity(&self) -> bool {
        let n = self.order;
        let assoc = |x, y, z| self.multiply(self.multiply(x, y), z) == self.multiply(x, self.multiply(y, z));
        if n <= EXHAUSTIVE_CHECK_ORDER {
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| assoc(x, y, z))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            (0..20_000).all(|_| assoc(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
        }
    }

    /// Stable fingerprint of the multiplication structure, used as a cache key.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        h.update((self.identity as u64).to_le_bytes());
        for &g in &self.generators {
            h.update((g as u64).to_le_bytes());
        }
        for x in 0..self.order {
            for &g in &self.generators {
                h.update((self.multiply(x, g) as u32).to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}

/// Fills `x * y` using `y = parent(y) * g`, so every entry is a lookup.
fn table_from_right_action(order: usize, ngens: usize, right: &[u32], parent: &[(u32, u32)]) -> Vec<u32> {
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let row = &mut table[x * order..(x + 1) * order];
        row[0] = x as u32;
        for y in 1..order {
            let (p, g) = parent[y];
            let xp = row[p as usize] as usize;
            row[y] = right[xp * ngens + g as usize];
        }
    }
    table
}

/// Direct product with the default order cap.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    direct_product_capped(g, h, DEFAULT_ORDER_CAP)
}

/// Componentwise product; the pair `(a, b)` has index `a * |H| + b`.
pub fn direct_product_capped(g: &FiniteGroup, h: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
    let order = g
        .order
        .checked_mul(h.order)
        .filter(|&n| n <= cap)
        .ok_or(Error::OrderCapExceeded { cap })?;
    let n = h.order;
    let pair = |a: usize, b: usize| a * n + b;

    let mut generators: Vec<usize> = g.generators.iter().map(|&a| pair(a, h.identity)).collect();
    generators.extend(h.generators.iter().map(|&b| pair(g.identity, b)));

    let inverse = (0..order)
        .map(|x| pair(g.inverse(x / n), h.inverse(x % n)) as u32)
        .collect();

    let words = match (&g.words, &h.words) {
        (Some(wg), Some(wh)) => Some((0..order).map(|x| format!("({}, {})", wg[x / n], wh[x % n])).collect()),
        _ => None,
    };

    let mul = if order <= TABLE_THRESHOLD {
        let mut table = vec![0u32; order * order];
        for x in 0..order {
            for y in 0..order {
                table[x * order + y] = pair(g.multiply(x / n, y / n), h.multiply(x % n, y % n)) as u32;
            }
        }
        Multiplication::Table(table)
    } else {
        Multiplication::Product {
            left: Arc::new(g.clone()),
            right: Arc::new(h.clone()),
        }
    };

    Ok(FiniteGroup {
        label: format!("{}x{}", g.label, h.label),
        order,
        identity: pair(g.identity, h.identity),
        inverse,
        generators,
        mul,
        words,
    })
}

/// Conjugacy classes `C_0 = {e}, C_1, ...` with per-element lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyData {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    inverse_class: Vec<usize>,
}

impl ConjugacyData {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, j: usize) -> &[usize] {
        &self.classes[j]
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn size(&self, j: usize) -> usize {
        self.classes[j].len()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.len() as u64).collect()
    }

    /// Smallest element index of each class.
    pub fn representative(&self, j: usize) -> usize {
        self.classes[j][0]
    }

    /// `j*` with `C_{j*} = { x^-1 : x in C_j }`.
    pub fn inverse_class(&self, j: usize) -> usize {
        self.inverse_class[j]
    }
}

/// Orbits of conjugation, closed under the generators. The identity class
/// comes first; the rest are ordered by `(size, smallest element)`.
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyData {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let gen_inv: Vec<(usize, usize)> = g.generators().iter().map(|&s| (s, g.inverse(s))).collect();

    for start in 0..n {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(s, s_inv) in &gen_inv {
                let y = g.multiply(g.multiply(s, x), s_inv);
                if !assigned[y] {
                    assigned[y] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }

    let e = g.identity();
    orbits.sort_by_key(|c| (c[0] != e, c.len(), c[0]));

    let mut class_of = vec![0usize; n];
    for (j, c) in orbits.iter().enumerate() {
        for &x in c {
            class_of[x] = j;
        }
    }
    let inverse_class = orbits.iter().map(|c| class_of[g.inverse(c[0])]).collect();

    ConjugacyData {
        classes: orbits,
        class_of,
        inverse_class,
    }
}

/// Class-algebra structure constants: `a(i, j, k)` counts pairs
/// `(x, y) in C_i x C_j` with `xy = z_k`, `z_k` the representative of `C_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassConstants {
    k: usize,
    counts: Vec<u64>,
}

impl ClassConstants {
    pub fn num_classes(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.counts[(i * self.k + j) * self.k + k]
    }

    /// Largest violation of `sum_k a(i,j,k) |C_k| = |C_i| |C_j|`; zero when
    /// the constants are consistent.
    pub fn size_identity_defect(&self, sizes: &[u64]) -> u64 {
        let k = self.k;
        let mut worst = 0;
        for i in 0..k {
            for j in 0..k {
                let lhs: u64 = (0..k).map(|c| self.get(i, j, c) * sizes[c]).sum();
                worst = worst.max(lhs.abs_diff(sizes[i] * sizes[j]));
            }
        }
        worst
    }
}

pub fn class_constants(g: &FiniteGroup, cd: &ConjugacyData) -> ClassConstants {
    let k = cd.len();
    let mut counts = vec![0u64; k * k * k];
    for c in 0..k {
        let z = cd.representative(c);
        for (i, class) in cd.classes().iter().enumerate() {
            for &x in class {
                let y = g.multiply(g.inverse(x), z);
                counts[(i * k + cd.class_of(y)) * k + c] += 1;
            }
        }
    }
    ClassConstants { k, counts }
}
