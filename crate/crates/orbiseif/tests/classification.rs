mod common;

use std::collections::BTreeMap;

use common::*;
use orbiseif::batch::{bad_bases, flat_bases, spherical_bases};
use orbiseif::classify::{
    aliases, are_diffeomorphic, canonical_class, distinguished_by_contradiction, has_infinitely_many_fibrations,
    invariant_profile, DISTINGUISHED_BY_CONTRADICTION,
};
use orbiseif::euclid::{invariant_directions, realize_flat_fibration, InvariantDirections};
use orbiseif::seifert::{enumerate_fibrations, Geometry};
use orbiseif::singular::singular_census;
use orbiseif::{Error, Orbifold2Symbol, SeifertSymbol};

fn canonical_classes(bases: &[Orbifold2Symbol]) -> BTreeMap<String, SeifertSymbol> {
    let mut out = BTreeMap::new();
    for b in bases {
        for s in enumerate_fibrations(b).unwrap() {
            let c = canonical_class(&s).unwrap().canonical;
            out.insert(c.to_string(), c);
        }
    }
    out
}

/// A flat orbifold whose point group fixes one direction has one fibration,
/// so two such classes with different symbols are different orbifolds.
fn has_unique_fibration(s: &SeifertSymbol) -> bool {
    let g = realize_flat_fibration(s).unwrap();
    matches!(invariant_directions(&g), InvariantDirections::Finite { directions } if directions.len() == 1)
}

#[test]
fn aliases_share_their_census() {
    for line in flat_lines() {
        let census = singular_census(&line[0]);
        for s in &line[1..] {
            assert_eq!(singular_census(s).vertex_count, census.vertex_count, "{s} vs {}", line[0]);
            assert_eq!(invariant_profile(s).unwrap(), invariant_profile(&line[0]).unwrap(), "{s}");
        }
    }
}

#[test]
fn distinct_classes_are_told_apart() {
    let mut bases = flat_bases();
    bases.extend(spherical_bases(8));
    bases.extend(bad_bases(5));
    let classes: Vec<SeifertSymbol> = canonical_classes(&bases).into_values().collect();
    let profiles: Vec<_> = classes.iter().map(|c| invariant_profile(c).unwrap()).collect();
    let mut by_contradiction = 0;
    let mut by_uniqueness = 0;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (a, b) = (&classes[i], &classes[j]);
            if profiles[i] != profiles[j] {
                continue;
            }
            if distinguished_by_contradiction(a, b) {
                by_contradiction += 1;
            } else if profiles[i].geometry == Geometry::E3 && has_unique_fibration(a) && has_unique_fibration(b) {
                by_uniqueness += 1;
            } else {
                panic!("{a} and {b} share every invariant");
            }
        }
    }
    assert_eq!(by_contradiction, DISTINGUISHED_BY_CONTRADICTION.len());
    assert!(by_uniqueness > 0);
}

#[test]
fn contradiction_pair_agrees_on_census() {
    let (a, b) = DISTINGUISHED_BY_CONTRADICTION[0];
    let (a, b) = (fib(a), fib(b));
    assert_eq!(singular_census(&a).vertex_count, singular_census(&b).vertex_count);
    assert!(!are_diffeomorphic(&a, &b).unwrap());
}

#[test]
fn lens_type_families_are_infinite() {
    assert!(has_infinitely_many_fibrations(&fib("(3_0 3_0)")));
    assert!(has_infinitely_many_fibrations(&fib("(*_1 5_2 5_3)")));
    assert!(!has_infinitely_many_fibrations(&fib("(2_0 2_0 3_0)")));
    let found = aliases(&fib("(3_0 3_0)"), 4).unwrap();
    assert!(found.contains(&fib("((12)_3 (12)_9)")), "{found:?}");
    assert!(found.iter().all(|s| are_diffeomorphic(s, &fib("(6_3 6_3)")).unwrap()));
    assert!(!are_diffeomorphic(&fib("(3_0 3_0)"), &fib("(3_1 3_2)")).unwrap());
}

#[test]
fn polyhedral_fibrations_are_alone() {
    for s in ["(5_0 3_0 2_0)", "(*_1 4_2 3_0 2_1)", "(3_1 3_2 2_0)", "(3_0 *_0 2_0)"] {
        let s = fib(s);
        assert_eq!(aliases(&s, 12).unwrap(), vec![orbiseif::seifert::normalize(&s)], "{s}");
    }
}

#[test]
fn index_three_circles_separate_the_tetrahedral_pair() {
    let count = |t: &str| singular_census(&fib(t)).circles_by_index().get(&3).copied().unwrap_or(0);
    assert_eq!(count("(3_0 3_0 2_0)"), 2);
    assert_eq!(count("(3_1 3_2 2_0)"), 0);
}

#[test]
fn out_of_scope_symbols() {
    let hyperbolic = canonical_class(&fib("(2_0 3_0 7_0)")).unwrap();
    assert_eq!(hyperbolic.geometry, Geometry::H2xR);
    assert!(!hyperbolic.is_infinite());
    assert!(matches!(canonical_class(&fib("(2_1 2_1);e=1")), Err(Error::Scope(_))));
    assert!(matches!(canonical_class(&fib("(2_1 2_0)")), Err(Error::InvalidSymbol(_))));
}

#[test]
fn report_lists_a_family() {
    let class = canonical_class(&fib("(4_1 4_3)")).unwrap();
    let json = serde_json::to_value(class.report(3)).unwrap();
    assert_eq!(json["canonical"], "(1)");
    assert_eq!(json["family"]["id"], "sphere-two-cones");
    assert!(json["family"]["members"].as_array().unwrap().len() > 1);
}
