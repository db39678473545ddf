mod common;

use common::*;
use orbiseif::batch::flat_bases;
use orbiseif::euclid::examples::{klein_screw_group, klein_square_group};
use orbiseif::euclid::{
    classify_wallpaper, flat_realization, horizontal_group, induced_fibration, invariant_directions, parse_generators,
    point_orbifold, realize_flat_fibration, CrystGroup, InvariantDirections,
};
use orbiseif::notation::parse_base;
use orbiseif::seifert::{enumerate_fibrations, normalize};
use orbiseif::Error;

#[test]
fn every_flat_base_is_realized() {
    for b in flat_bases() {
        let g = flat_realization(&b).unwrap().group().unwrap();
        assert_eq!(classify_wallpaper(&g).unwrap(), b);
    }
}

#[test]
fn realized_fibrations_induce_themselves() {
    for b in flat_bases() {
        for s in enumerate_fibrations(&b).unwrap() {
            let g = realize_flat_fibration(&s).unwrap();
            assert!(g.is_orientation_preserving(), "{s}");
            let found = invariant_directions(&g)
                .sample()
                .iter()
                .filter_map(|v| induced_fibration(&g, v).ok())
                .any(|t| normalize(&t) == s);
            assert!(found, "{s} is not induced by its own realization");
        }
    }
}

#[test]
fn generators_round_trip_through_text() {
    let g = klein_square_group();
    let text: String = g.generators().iter().map(|a| format!("{a}\n")).collect();
    let again = CrystGroup::from_isometries(&parse_generators(&text).unwrap()).unwrap();
    assert_eq!(induced_fibration(&again, &[0, 0, 1]).unwrap(), induced_fibration(&g, &[0, 0, 1]).unwrap());
}

#[test]
fn klein_groups_have_point_orbifold_222() {
    for g in [klein_screw_group(0, 0), klein_screw_group(0, 1), klein_screw_group(1, 1), klein_square_group()] {
        assert_eq!(point_orbifold(&g).unwrap(), parse_base("222").unwrap());
    }
}

#[test]
fn horizontal_groups_along_the_axes() {
    let g = klein_screw_group(0, 0);
    assert_eq!(classify_wallpaper(&horizontal_group(&g, &[0, 0, 1]).unwrap()).unwrap(), parse_base("22*").unwrap());
    assert_eq!(classify_wallpaper(&horizontal_group(&g, &[0, 1, 0]).unwrap()).unwrap(), parse_base("*2222").unwrap());
}

#[test]
fn oblique_directions_are_rejected() {
    let g = klein_screw_group(0, 1);
    assert!(matches!(invariant_directions(&g), InvariantDirections::Finite { .. }));
    assert!(matches!(induced_fibration(&g, &[1, 1, 0]), Err(Error::NotInvariant(_))));
}

#[test]
fn table_lines_come_from_one_group() {
    for line in flat_lines().iter().filter(|l| l.len() == 2) {
        let g = realize_flat_fibration(&line[0]).unwrap();
        let induced: Vec<_> =
            invariant_directions(&g).sample().iter().filter_map(|v| induced_fibration(&g, v).ok()).map(|t| normalize(&t)).collect();
        assert!(induced.contains(&line[1]), "{:?} from {}", induced, line[0]);
    }
}
