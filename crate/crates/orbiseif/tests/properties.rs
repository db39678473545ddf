mod common;

use common::*;
use orbiseif::batch::{spherical_bases, verify_psi};
use orbiseif::classify::{canonical_class, Family, FamilyId, Members};
use orbiseif::orbifold2::geometry_class;
use orbiseif::seifert::{check_invariant_relation, enumerate_fibrations, geometry_of_fibration, normalize};
use orbiseif::singular::{singular_census, singular_graph};
use orbiseif::{LocalInvariant, SeifertSymbol};
use proptest::prelude::*;
use proptest::sample::select;

fn spherical_fibration() -> impl Strategy<Value = SeifertSymbol> {
    let all: Vec<SeifertSymbol> = spherical_bases(9).iter().flat_map(|b| enumerate_fibrations(b).unwrap()).collect();
    select(all)
}

fn coprime_pair() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=9).prop_flat_map(|nu| (Just(nu), 1..nu)).prop_filter("coprime", |(nu, mu)| num_integer::gcd(*nu, *mu) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalize_keeps_base_and_validity(s in arb_seifert()) {
        let n = normalize(&s);
        prop_assert_eq!(n.base(), s.base());
        prop_assert_eq!(check_invariant_relation(&n).is_valid(), check_invariant_relation(&s).is_valid());
    }

    #[test]
    fn enumerated_fibrations_are_consistent(s in spherical_fibration()) {
        prop_assert!(check_invariant_relation(&s).is_valid());
        prop_assert_eq!(normalize(&s), s.clone());
        prop_assert!(geometry_of_fibration(&s).in_scope());
        prop_assert!(verify_psi(&s).unwrap().is_ok());
    }

    #[test]
    fn every_alias_has_the_same_canonical(s in spherical_fibration()) {
        let c = canonical_class(&s).unwrap();
        for a in c.aliases(9) {
            prop_assert_eq!(canonical_class(&a).unwrap().canonical, c.canonical.clone());
        }
        if let Members::Finite(xs) = &c.members {
            prop_assert!(xs.contains(&s));
        }
    }

    #[test]
    fn family_members_reduce_to_the_canonical(c in 1u32..=6, d in 1u32..=6, (nu, mu) in coprime_pair(), disc in any::<bool>()) {
        prop_assume!(c >= d);
        let id = if disc { FamilyId::DiscTwoCorners } else { FamilyId::SphereTwoCones };
        let f = Family { id, c, d };
        let class = canonical_class(&f.member(nu, mu)).unwrap();
        prop_assert_eq!(class.canonical.clone(), f.canonical());
        prop_assert!(class.is_infinite());
    }

    #[test]
    fn struts_carry_two_trivalent_vertices(
        corners in prop::collection::vec(prop_oneof![Just((2u32, 0u32)), Just((2, 1)), (2u32..=6).prop_map(|n| (n, 0))], 1..6),
        xi in 0u8..=1,
    ) {
        let s = disc(&[], xi, &corners);
        prop_assume!(check_invariant_relation(&s).is_valid());
        let census = singular_census(&s);
        let g = singular_graph(&s).unwrap();
        prop_assert_eq!(g.vertex_count(), census.vertex_count);
        for v in (0..g.is_vertex.len()).filter(|&v| g.is_vertex[v]) {
            prop_assert_eq!(g.degree(v), 3);
        }
        prop_assert_eq!(g.vertex_distribution().iter().sum::<usize>(), census.vertex_count);
    }

    #[test]
    fn reducing_an_invariant_splits_off_an_integer(m in 0u32..60, n in 1u32..30) {
        let c = LocalInvariant::new(m, n);
        let (r, k) = c.reduced();
        prop_assert_eq!(r.value() + orbiseif::Q::from(k as i64), c.value());
        prop_assert_eq!(r.n, c.n);
        prop_assert!(r.m < r.n);
    }
}

#[test]
fn spherical_bases_are_spherical() {
    for b in spherical_bases(12) {
        assert_eq!(geometry_class(&b), orbiseif::orbifold2::BaseGeometry::Spherical, "{b}");
    }
}
