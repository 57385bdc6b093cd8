use std::sync::Arc;

use proptest::prelude::*;
use zafa_core::catalog::catalog_group;
use zafa_core::char_table::{characters_through_quotient, project_pn};
use zafa_core::za::{
    central_projection, diagonal_element, from_class_function, hypergroup_convolve, multiply, to_class_function,
    za_norm, CentralElement, ClassFunction,
};
use zafa_core::{compute_character_table, conjugacy_classes, CharacterTable, Complex64, ConjugacyData, FiniteGroup};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Fixture {
    group: FiniteGroup,
    classes: ConjugacyData,
    table: Arc<CharacterTable>,
}

fn fixture(name: &str) -> Fixture {
    let group = catalog_group(name).unwrap();
    let classes = conjugacy_classes(&group);
    let table = Arc::new(compute_character_table(&group).unwrap());
    Fixture { group, classes, table }
}

// S3 rows are (trivial, sign, standard).
const TRIV: usize = 0;
const SIGN: usize = 1;
const STD: usize = 2;

#[test]
fn norm_examples() {
    let f = fixture("S3");
    let t = f.table.clone();
    assert_eq!(za_norm(&CentralElement::character(t.clone(), STD)), 2.0);
    assert_eq!(za_norm(&CentralElement::zero(t.clone())), 0.0);
    let u = CentralElement::from_coeffs(t, vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
    assert_eq!(za_norm(&u), 5.0);
}

#[test]
fn s3_fusion() {
    let f = fixture("S3");
    let fusion = f.table.fusion().unwrap();
    assert_eq!(fusion.get(STD, STD), &[(TRIV, 1), (SIGN, 1), (STD, 1)]);
    for p in 0..3 {
        assert_eq!(fusion.get(TRIV, p), &[(p, 1)]);
    }
    assert_eq!(fusion.get(SIGN, STD), &[(STD, 1)]);
}

#[test]
fn q8_fusion_dimension() {
    let f = fixture("Q8");
    let fusion = f.table.fusion().unwrap();
    let two = 4;
    assert_eq!(f.table.degree(two), 2);
    assert_eq!(fusion.get(two, two), &[(0, 1), (1, 1), (2, 1), (3, 1)]);
}

#[test]
fn fusion_identities_on_catalog() {
    for name in ["Z6", "S3", "D4", "Q8", "D5", "A4", "S4", "A5", "S3xS3", "D4xS3"] {
        let f = fixture(name);
        let fusion = f.table.fusion().unwrap();
        assert_eq!(fusion.dimension_defect(f.table.degrees()), 0, "{name}");
        assert!(fusion.is_symmetric(), "{name}");
    }
}

#[test]
fn multiply_examples() {
    let f = fixture("S3");
    let t = f.table.clone();
    let std = CentralElement::character(t.clone(), STD);
    let sq = multiply(&std, &std).unwrap();
    assert_eq!(sq.coeffs(), &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    assert_eq!(za_norm(&sq), 4.0);
    assert!(za_norm(&sq) <= za_norm(&std) * za_norm(&std));

    let u = CentralElement::from_coeffs(t.clone(), vec![c(0.5, 1.0), c(-2.0, 0.0), c(0.0, 3.0)]).unwrap();
    let one = CentralElement::character(t, TRIV);
    assert_eq!(multiply(&one, &u).unwrap().coeffs(), u.coeffs());
}

#[test]
fn multiply_rejects_mismatched_tables() {
    let a = fixture("S3");
    let b = fixture("Z3");
    let u = CentralElement::character(a.table.clone(), 0);
    let v = CentralElement::character(b.table.clone(), 0);
    assert!(multiply(&u, &v).is_err());
}

#[test]
fn hypergroup_convolution_examples() {
    let f = fixture("S3");
    let delta = |p: usize| {
        let mut v = vec![0.0; 3];
        v[p] = 1.0;
        v
    };
    assert_eq!(
        hypergroup_convolve(&f.table, &delta(TRIV), &delta(STD)).unwrap(),
        delta(STD)
    );
    assert_eq!(
        hypergroup_convolve(&f.table, &delta(STD), &delta(STD)).unwrap(),
        vec![0.25, 0.25, 0.5]
    );
}

#[test]
fn hypergroup_convolutions_are_probabilities() {
    for name in ["S3", "D4", "Q8", "A4", "S4", "A5", "D5"] {
        let f = fixture(name);
        let k = f.table.k();
        for p in 0..k {
            for q in 0..k {
                let mut a = vec![0.0; k];
                let mut b = vec![0.0; k];
                a[p] = 1.0;
                b[q] = 1.0;
                let w = hypergroup_convolve(&f.table, &a, &b).unwrap();
                assert!(w.iter().all(|&x| x >= 0.0));
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{name}");
            }
        }
    }
}

#[test]
fn hypergroup_convolution_is_associative() {
    for name in ["S3", "Q8", "A4", "S4", "A5", "D6", "S3xZ3"] {
        let f = fixture(name);
        let k = f.table.k();
        assert!(k <= 12);
        let delta = |p: usize| {
            let mut v = vec![0.0; k];
            v[p] = 1.0;
            v
        };
        for a in 0..k {
            for b in 0..k {
                let ab = hypergroup_convolve(&f.table, &delta(a), &delta(b)).unwrap();
                for cc in 0..k {
                    let bc = hypergroup_convolve(&f.table, &delta(b), &delta(cc)).unwrap();
                    let left = hypergroup_convolve(&f.table, &ab, &delta(cc)).unwrap();
                    let right = hypergroup_convolve(&f.table, &delta(a), &bc).unwrap();
                    let dev = left.iter().zip(&right).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                    assert!(dev < 1e-10, "{name} ({a},{b},{cc}): {dev}");
                }
            }
        }
    }
}

#[test]
fn class_function_transforms() {
    let f = fixture("S3");
    let t = f.table.clone();
    for p in 0..3 {
        let cf = to_class_function(&CentralElement::character(t.clone(), p));
        assert_eq!(cf.values, t.row(p));
    }
    let ones = ClassFunction::new(vec![c(1.0, 0.0); 3]);
    let u = from_class_function(t, &ones).unwrap();
    assert!((u.coeffs()[0] - 1.0).norm() < 1e-15);
    assert!(u.coeffs()[1].norm() < 1e-15 && u.coeffs()[2].norm() < 1e-15);
}

#[test]
fn central_projection_of_point_mass() {
    let f = fixture("S3");
    let n = f.group.order();
    for x in 0..n {
        let mut indicator = vec![c(0.0, 0.0); n];
        indicator[x] = c(1.0, 0.0);
        let z = central_projection(&f.group, &f.classes, &indicator).unwrap();
        // orbit-stabilizer count, computed directly
        for j in 0..f.classes.len() {
            let y = f.classes.representative(j);
            let hits = (0..n).filter(|&s| f.group.conjugate(s, x) == y).count();
            assert!((z.values[j].re - hits as f64 / n as f64).abs() < 1e-15);
        }
        let cx = f.classes.class_of(x);
        assert!((z.values[cx].re - 1.0 / f.classes.size(cx) as f64).abs() < 1e-15);
    }
}

#[test]
fn central_projection_fixes_class_functions() {
    let f = fixture("A4");
    let cf = ClassFunction::new((0..f.classes.len()).map(|j| c(j as f64, 1.0 - j as f64)).collect());
    let z = central_projection(&f.group, &f.classes, &cf.on_elements(&f.classes)).unwrap();
    assert!(z.max_distance(&cf) < 1e-14);
}

#[test]
fn diagonal_z2() {
    let f = fixture("Z2");
    let d = diagonal_element(&f.table);
    assert!((d.coeff(0, 0) - 0.5).norm() < 1e-15);
    assert!((d.coeff(1, 1) - 0.5).norm() < 1e-15);
    assert!(d.coeff(0, 1).norm() < 1e-15 && d.coeff(1, 0).norm() < 1e-15);
    assert!((d.norm() - 1.0).abs() < 1e-15);
}

#[test]
fn diagonal_trivial_group() {
    let f = fixture("Z1");
    let d = diagonal_element(&f.table);
    assert_eq!(d.coeff(0, 0), c(1.0, 0.0));
}

#[test]
fn diagonal_is_indicator_and_idempotent() {
    for name in ["S3", "Z3", "Q8", "A4", "D5", "S4", "A5"] {
        let f = fixture(name);
        let d = diagonal_element(&f.table);
        let k = f.table.k();
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d.evaluate(i, j) - want).norm() < 1e-10, "{name} ({i},{j})");
            }
        }
        let cf = d.as_class_function();
        assert!(cf.pointwise(&cf).max_distance(&cf) < 1e-10);

        let product = Arc::new(CharacterTable::kronecker(&f.table, &f.table));
        let as_element = d.to_product_element(product.clone()).unwrap();
        let sq = multiply(&as_element, &as_element).unwrap();
        let dev = sq
            .coeffs()
            .iter()
            .zip(as_element.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10, "{name}: {dev}");
        // the product table indexes classes as (i, j) -> i * k + j
        assert!(to_class_function(&as_element).max_distance(&cf) < 1e-10);
        assert!((za_norm(&as_element) - d.norm()).abs() < 1e-12);
    }
}

#[test]
fn diagonal_s3_values() {
    let f = fixture("S3");
    let d = diagonal_element(&f.table);
    let transpositions = f.classes.class_of(f.group.generators()[0]);
    assert_eq!(f.classes.size(transpositions), 3);
    assert!(d.evaluate(0, transpositions).norm() < 1e-12);
    assert!((d.evaluate(transpositions, transpositions) - 1.0).norm() < 1e-12);
}

#[test]
fn diagonal_conventions_have_equal_norms() {
    for name in ["Z3", "Z5", "A4", "Q8", "S3xZ3"] {
        let f = fixture(name);
        let d = diagonal_element(&f.table);
        assert!((d.norm() - d.unexchanged_norm()).abs() < 1e-12, "{name}");
    }
}

#[test]
fn serialization_round_trip() {
    let f = fixture("S3");
    let u = CentralElement::from_coeffs(f.table.clone(), vec![c(1.5, -2.0), c(0.0, 0.0), c(0.25, 0.0)]).unwrap();
    let doc = u.to_doc();
    assert_eq!(doc.coeffs.len(), 2);
    let text = serde_json::to_string(&doc).unwrap();
    assert!(text.contains(f.table.group_hash()));
    let back = CentralElement::from_doc(f.table.clone(), &serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.coeffs(), u.coeffs());
    let other = fixture("Z3");
    assert!(CentralElement::from_doc(other.table, &doc).is_err());
}

#[test]
fn quotient_projection_examples() {
    let f = fixture("S3");
    let a3: Vec<usize> = (0..6).filter(|&x| f.classes.size(f.classes.class_of(x)) != 3).collect();
    assert_eq!(a3.len(), 3);
    assert_eq!(
        characters_through_quotient(&f.group, &f.classes, &f.table, &a3).unwrap(),
        vec![TRIV, SIGN]
    );

    let sign = CentralElement::character(f.table.clone(), SIGN);
    assert_eq!(
        project_pn(&sign, &f.group, &f.classes, &a3).unwrap().coeffs(),
        sign.coeffs()
    );
    let std = CentralElement::character(f.table.clone(), STD);
    assert!(project_pn(&std, &f.group, &f.classes, &a3).unwrap().is_zero());
    let u = CentralElement::from_coeffs(f.table.clone(), vec![c(1.0, 2.0), c(-1.0, 0.0), c(0.5, 0.5)]).unwrap();
    assert_eq!(project_pn(&u, &f.group, &f.classes, &[0]).unwrap().coeffs(), u.coeffs());
}

fn coeffs(k: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), k)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn group_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["Z4", "S3", "D4", "Q8", "D5", "A4", "S4", "A5", "S3xZ2"])
}

fn element(name: &str, c: Vec<Complex64>) -> CentralElement {
    let t = Arc::new(compute_character_table(&catalog_group(name).unwrap()).unwrap());
    let k = t.k();
    CentralElement::from_coeffs(t, c.into_iter().cycle().take(k).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_submultiplicative(name in group_name(), a in coeffs(12), b in coeffs(12)) {
        let u = element(name, a);
        let v = CentralElement::from_coeffs(u.table_arc().clone(), b.into_iter().cycle().take(u.table().k()).collect()).unwrap();
        let uv = multiply(&u, &v).unwrap();
        prop_assert!(za_norm(&uv) <= za_norm(&u) * za_norm(&v) * (1.0 + 1e-12));
    }

    #[test]
    fn multiply_matches_pointwise(name in group_name(), a in coeffs(12), b in coeffs(12)) {
        let u = element(name, a);
        let v = CentralElement::from_coeffs(u.table_arc().clone(), b.into_iter().cycle().take(u.table().k()).collect()).unwrap();
        let via_fusion = multiply(&u, &v).unwrap();
        let pointwise = to_class_function(&u).pointwise(&to_class_function(&v));
        let via_classes = from_class_function(u.table_arc().clone(), &pointwise).unwrap();
        let dev = via_fusion.coeffs().iter().zip(via_classes.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-9, "{}", dev);
    }

    #[test]
    fn transforms_round_trip(name in group_name(), values in coeffs(12)) {
        let u = element(name, values);
        let f = ClassFunction::new(u.coeffs().to_vec());
        let back = to_class_function(&from_class_function(u.table_arc().clone(), &f).unwrap());
        prop_assert!(back.max_distance(&f) < 1e-10);
    }

    #[test]
    fn expectation_property(values in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 6)) {
        let f = fixture("S3");
        let big_f: Vec<Complex64> = values.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let u = to_class_function(&CentralElement::character(f.table.clone(), STD));
        let u_elems = u.on_elements(&f.classes);
        let product: Vec<Complex64> = u_elems.iter().zip(&big_f).map(|(a, b)| a * b).collect();
        let lhs = central_projection(&f.group, &f.classes, &product).unwrap();
        let rhs = u.pointwise(&central_projection(&f.group, &f.classes, &big_f).unwrap());
        prop_assert!(lhs.max_distance(&rhs) < 1e-10);
    }

    #[test]
    fn quotient_projection_is_idempotent_and_contractive(name in prop::sample::select(vec!["S3", "S4", "A4", "D4", "Q8"]), a in coeffs(12)) {
        let f = fixture(name);
        let u = CentralElement::from_coeffs(f.table.clone(), a.into_iter().cycle().take(f.table.k()).collect()).unwrap();
        // derived subgroup, generated by commutators
        let g = &f.group;
        let mut n: Vec<usize> = vec![g.identity()];
        loop {
            let mut next = n.clone();
            for x in 0..g.order() {
                for y in 0..g.order() {
                    let comm = g.multiply(g.multiply(g.inverse(x), g.inverse(y)), g.multiply(x, y));
                    next.push(comm);
                }
            }
            for &a in &n { for &b in &n { next.push(g.multiply(a, b)); } }
            next.sort_unstable();
            next.dedup();
            if next.len() == n.len() { break; }
            n = next;
        }
        let p = project_pn(&u, g, &f.classes, &n).unwrap();
        let pp = project_pn(&p, g, &f.classes, &n).unwrap();
        prop_assert_eq!(p.coeffs(), pp.coeffs());
        prop_assert!(za_norm(&p) <= za_norm(&u) + 1e-12);
    }
}
