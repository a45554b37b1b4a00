use std::io::Write;
use std::path::PathBuf;

use knotstat::catalog::*;
use knotstat::semigroup::*;
use knotstat::Error;
use num_bigint::BigUint;
use proptest::prelude::*;

fn data_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/knots.csv")
}

fn catalog() -> Catalog {
    load_catalog(data_path(), Filter::All).unwrap()
}

#[test]
fn bundled_catalog_loads() {
    let c = catalog();
    assert!(c.len() >= 30);
    assert_eq!(c.count_exact(3, 1), 1);
    assert_eq!(c.count_exact(4, 1), 1);
    assert_eq!(c.count_weight(4), 1.0);
    for r in c.records() {
        r.validate().unwrap();
        if let Some(p) = &r.wirtinger {
            assert!(p.exists(), "{}", p.display());
        }
    }
    let alt = load_catalog(data_path(), Filter::Alternating).unwrap();
    assert!(alt.records().iter().all(|r| r.alternating));
    let tf = load_catalog(data_path(), Filter::TorusFree).unwrap();
    assert!(tf.get("3_1").is_none() && tf.get("4_1").is_some());
}

#[test]
fn count_weight_matches_record_scan() {
    let c = catalog();
    for n in 0..25u32 {
        let scan = c.records().iter().filter(|r| r.weight() == n).count() as f64;
        assert_eq!(count_weight(&c, n), scan, "n = {n}");
    }
}

#[test]
fn bad_files_are_rejected() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "name,crossings,genus,alternating,torus,alexander").unwrap();
    writeln!(f, "3_1,3,1,true,true,1 -1 1").unwrap();
    writeln!(f, "4_1,4,1,true,false,1 -2 1").unwrap();
    f.flush().unwrap();
    assert!(matches!(load_catalog(f.path(), Filter::All), Err(Error::InvalidRecord { .. })));
    assert!(matches!(load_catalog("/nonexistent/knots.csv", Filter::All), Err(Error::Io(_))));
}

#[test]
fn model_power_law() {
    let m = MultiplicityModel::asymptotic(400.0, 5, 10_000).unwrap();
    assert!((count_asymptotic(&m, 10, 1) - 55.5555555555).abs() < 1e-8);
    for g in 1..=3u32 {
        for n in [5u32, 17, 40] {
            let r = m.count(2 * n, g) / m.count(n, g);
            let want = 2f64.powi(6 * g as i32 - 4);
            assert!((r / want - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn nested_count_is_shifted_weight_count() {
    let m = MultiplicityModel::asymptotic(C_UPPER, 6, 10_000).unwrap();
    for n in 1..40u32 {
        let formula: f64 = (1..=n.min(6))
            .map(|g| {
                let fact: f64 = (1..=6 * g).map(|k| k as f64).product();
                C_UPPER.powi(g as i32) / fact * ((n - g + 1) as f64).powi(6 * g as i32 - 4)
            })
            .sum();
        assert!((m.nested_count(n) / formula - 1.0).abs() < 1e-12);
        assert!((count_weight(&m, n + 1) / formula - 1.0).abs() < 1e-12);
    }
}

const NAMES: &[&str] = &["3_1", "4_1", "5_1", "5_2", "6_1", "8_19"];

fn knot_strategy() -> impl Strategy<Value = Knot> {
    prop::collection::vec((0..NAMES.len(), 0u32..3), 0..4)
        .prop_map(|v| Knot::from_pairs(v.into_iter().map(|(i, m)| (NAMES[i], m))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn connected_sum_is_a_free_commutative_monoid(a in knot_strategy(), b in knot_strategy(), c in knot_strategy()) {
        prop_assert_eq!(a.connected_sum(&b), b.connected_sum(&a));
        prop_assert_eq!(a.connected_sum(&b).connected_sum(&c), a.connected_sum(&b.connected_sum(&c)));
        prop_assert_eq!(a.connected_sum(&Knot::unknot()), a.clone());
        prop_assert!(a.divides(&a.connected_sum(&b)));
        let cat = catalog();
        prop_assert_eq!(
            a.connected_sum(&b).weight(&cat).unwrap(),
            a.weight(&cat).unwrap() + b.weight(&cat).unwrap()
        );
        prop_assert_eq!(a.to_string().parse::<Knot>().unwrap(), a.clone());
    }

    #[test]
    fn grothendieck_group_laws(a in knot_strategy(), b in knot_strategy(), c in knot_strategy(), d in knot_strategy()) {
        let g = groth_reduce(&a, &b);
        let h = groth_reduce(&c, &d);
        prop_assert!(g.compose(&g.inverse()).is_identity());
        prop_assert!(g.compose(&groth_reduce(&b, &a)).is_identity());
        prop_assert_eq!(g.compose(&h), h.compose(&g));
        // a ⊖ b = (a#c) ⊖ (b#c)
        prop_assert_eq!(groth_reduce(&a.connected_sum(&c), &b.connected_sum(&c)), g.clone());
        prop_assert_eq!(g.to_string().parse::<GroupElement>().unwrap(), g.clone());
        prop_assert_eq!(act_on_weight(&h.inverse(), &act_on_weight(&h, &g)), g.clone());
        let w = WeightFunction::with_scale(2, 1).unwrap();
        let cat = catalog();
        prop_assert_eq!(f_weight(&act_on_weight(&h, &h), &w, &cat).unwrap(), BigUint::from(1u32));
    }
}

#[test]
fn weight_function_values() {
    let cat = catalog();
    let w = WeightFunction::new(2).unwrap();
    assert_eq!(w.exponent_scale, 10);
    assert_eq!(f_weight(&GroupElement::identity(), &w, &cat).unwrap(), BigUint::from(1u32));
    assert_eq!(f_weight(&"3_1".parse().unwrap(), &w, &cat).unwrap(), BigUint::from(2u32).pow(40));
    assert_eq!(f_weight(&"3_1 -- 4_1".parse().unwrap(), &w, &cat).unwrap(), BigUint::from(2u32).pow(90));
    let h: GroupElement = "3_1".parse().unwrap();
    let g: GroupElement = "4_1".parse().unwrap();
    assert_eq!(act_on_weight(&h, &g), "4_1 -- 3_1".parse().unwrap());
}

#[test]
fn enumeration_matches_brute_force() {
    let cat = catalog().subset(&["3_1", "4_1", "5_2"]).unwrap();
    let ws = [4i64, 5, 6];
    for max in [0u64, 6, 12, 15] {
        let mut brute = 0;
        let r = max as i64;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    if ws[0] * a.abs() + ws[1] * b.abs() + ws[2] * c.abs() <= r {
                        brute += 1;
                    }
                }
            }
        }
        let els = enumerate_group_elements(&cat, max);
        assert_eq!(els.len(), brute, "max = {max}");
        let set: std::collections::BTreeSet<_> = els.iter().collect();
        assert_eq!(set.len(), els.len());
        assert!(els.iter().all(|g| g.weight(&cat).unwrap() <= max));
        let knots = enumerate_knots(&cat, max);
        let kb = (0..=r).flat_map(|a| (0..=r).flat_map(move |b| (0..=r).map(move |c| (a, b, c))))
            .filter(|(a, b, c)| 4 * a + 5 * b + 6 * c <= r)
            .count();
        assert_eq!(knots.len(), kb);
    }
}

#[test]
fn lambda_is_product_of_leading_coefficients() {
    let cat = catalog();
    let k: Knot = "5_2 # 5_2 # 3_1".parse().unwrap();
    assert_eq!(lambda_multiplicative(&k, &cat).unwrap(), BigUint::from(4u32));
    assert_eq!(invariants_additive(&"3_1#3_1".parse().unwrap(), &cat, false).unwrap(), (6, 2));
}
