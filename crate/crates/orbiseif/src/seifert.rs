//! Validation, normalization, geometry routing and enumeration of Seifert
//! symbols.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::notation::{BoundaryInvariants, PartialFibration};
use crate::orbifold2::{geometry_class, BaseGeometry};
use crate::{Error, LocalInvariant, Orbifold2Symbol, Result, SeifertSymbol, Q};

/// Reduces every invariant into `0 <= m < n`. The Euler number absorbs the
/// carries so that the rational relation total is unchanged.
pub fn normalize(s: &SeifertSymbol) -> SeifertSymbol {
    let mut euler = s.euler();
    let mut reduce = |c: &LocalInvariant, weight: Q| {
        let (r, carry) = c.reduced();
        euler += weight * Q::from(carry as i64);
        r
    };
    let cones: Vec<_> = s.cone_invariants().iter().map(|c| reduce(c, Q::from(1))).collect();
    let boundaries: Vec<_> = s
        .boundaries()
        .iter()
        .map(|b| BoundaryInvariants {
            xi: b.xi,
            corners: b.corners.iter().map(|c| reduce(c, Q::new(1, 2))).collect(),
        })
        .collect();
    SeifertSymbol::new(s.handles(), s.crosscaps(), cones, boundaries, euler)
        .expect("reducing invariants keeps a well-formed symbol")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RelationCheck {
    Valid,
    Violated {
        #[serde(with = "crate::serde_q")]
        residue: Q,
    },
}

impl RelationCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, RelationCheck::Valid)
    }
}

/// Fractional part of the relation total.
pub fn check_invariant_relation(s: &SeifertSymbol) -> RelationCheck {
    let total = s.relation_total();
    let residue = total - total.floor();
    if residue == Q::from(0) {
        RelationCheck::Valid
    } else {
        RelationCheck::Violated { residue }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Geometry {
    #[serde(rename = "H2xR")]
    H2xR,
    #[serde(rename = "E3")]
    E3,
    #[serde(rename = "S2xR")]
    S2xR,
    #[serde(rename = "bad")]
    Bad,
    #[serde(rename = "SL2")]
    Sl2,
    #[serde(rename = "Nil")]
    Nil,
    #[serde(rename = "S3")]
    S3,
}

impl Geometry {
    /// Only the `e = 0` column is classified here.
    pub fn in_scope(&self) -> bool {
        matches!(self, Geometry::H2xR | Geometry::E3 | Geometry::S2xR | Geometry::Bad)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::H2xR => "H2xR",
            Geometry::E3 => "E3",
            Geometry::S2xR => "S2xR",
            Geometry::Bad => "bad",
            Geometry::Sl2 => "SL2",
            Geometry::Nil => "Nil",
            Geometry::S3 => "S3",
        })
    }
}

pub fn geometry_of_fibration(s: &SeifertSymbol) -> Geometry {
    let zero = s.euler() == Q::from(0);
    match (geometry_class(&s.base()), zero) {
        (BaseGeometry::Bad, true) => Geometry::Bad,
        (BaseGeometry::Hyperbolic, true) => Geometry::H2xR,
        (BaseGeometry::Flat, true) => Geometry::E3,
        (BaseGeometry::Spherical, true) => Geometry::S2xR,
        (BaseGeometry::Hyperbolic, false) => Geometry::Sl2,
        (BaseGeometry::Flat, false) => Geometry::Nil,
        // bad bases with nonzero Euler number are lens-space type
        (BaseGeometry::Spherical | BaseGeometry::Bad, false) => Geometry::S3,
    }
}

/// Fills in the single missing boundary invariant.
pub fn complete_boundary_invariant(p: &PartialFibration) -> Result<SeifertSymbol> {
    let unknown = p.unknown_xi();
    if unknown.len() != 1 {
        return Err(Error::Semantic(format!(
            "expected exactly one unknown boundary invariant, found {}",
            unknown.len()
        )));
    }
    let mut found = Vec::new();
    for xi in [0u8, 1] {
        let s = p.with_xi(&[xi])?;
        if check_invariant_relation(&s).is_valid() {
            found.push(s);
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        _ => Err(Error::NoConsistentXi(
            "no boundary invariant in {0, 1} satisfies the invariant relation".into(),
        )),
    }
}

/// All valid normalized fibrations with `e = 0` over `base`, sorted by their
/// Conway spelling.
pub fn enumerate_fibrations(base: &Orbifold2Symbol) -> Result<Vec<SeifertSymbol>> {
    if geometry_class(base) == BaseGeometry::Hyperbolic {
        return Err(Error::Scope(format!("{base} is hyperbolic; enumeration is infinite")));
    }
    let cone_orders = base.cones();
    let boundaries = base.boundaries();
    // one digit per cone, corner and boundary, in mixed radix
    let mut radix: Vec<u32> = cone_orders.to_vec();
    for corners in boundaries {
        radix.extend(corners);
        radix.push(2);
    }
    let mut out: BTreeMap<String, SeifertSymbol> = BTreeMap::new();
    let mut digits = vec![0u32; radix.len()];
    loop {
        let mut it = digits.iter().copied();
        let cones = cone_orders.iter().map(|&n| LocalInvariant::new(it.next().unwrap(), n)).collect();
        let bs = boundaries
            .iter()
            .map(|corners| {
                let corners = corners.iter().map(|&n| LocalInvariant::new(it.next().unwrap(), n)).collect();
                BoundaryInvariants { corners, xi: it.next().unwrap() as u8 }
            })
            .collect();
        let s = SeifertSymbol::new(base.handles(), base.crosscaps(), cones, bs, Q::from(0))?;
        if check_invariant_relation(&s).is_valid() {
            out.insert(s.to_string(), s);
        }
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(out.into_values().collect());
            }
            digits[k] += 1;
            if digits[k] < radix[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_base, parse_fibration, parse_fibration_partial};

    fn fib(s: &str) -> SeifertSymbol {
        parse_fibration(s).unwrap()
    }

    fn names(v: &[SeifertSymbol]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn normalize_moves_carries_to_euler() {
        let s = SeifertSymbol::new(0, 0, vec![LocalInvariant::new(5, 3)], vec![], Q::from(0)).unwrap();
        let n = normalize(&s);
        assert_eq!(n.cone_invariants(), &[LocalInvariant::new(2, 3)]);
        assert_eq!(n.euler(), Q::from(1));
        assert_eq!(n.relation_total(), s.relation_total());

        let s = SeifertSymbol::new(
            0,
            0,
            vec![LocalInvariant::new(6, 4), LocalInvariant::new(2, 4)],
            vec![],
            Q::from(0),
        )
        .unwrap();
        let n = normalize(&s);
        assert_eq!(n.to_string(), "(4_2 4_2);e=1");
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn corner_carries_are_halved() {
        let s = SeifertSymbol::new(
            0,
            0,
            vec![],
            vec![BoundaryInvariants { xi: 0, corners: vec![LocalInvariant::new(3, 2); 2] }],
            Q::from(0),
        )
        .unwrap();
        let n = normalize(&s);
        assert_eq!(n.euler(), Q::from(1));
        assert_eq!(n.relation_total(), s.relation_total());
    }

    #[test]
    fn relation_examples() {
        assert!(check_invariant_relation(&fib("(*_1 4_2 3_0 2_1)")).is_valid());
        assert!(check_invariant_relation(&fib("(o)")).is_valid());
        assert_eq!(
            check_invariant_relation(&fib("(2_1 2_0 2_0 2_0)")),
            RelationCheck::Violated { residue: Q::new(1, 2) }
        );
    }

    #[test]
    fn geometry_examples() {
        assert_eq!(geometry_of_fibration(&fib("(2_0 2_0 2_0 2_0)")), Geometry::E3);
        assert_eq!(geometry_of_fibration(&fib("(5_0 3_0 2_0)")), Geometry::S2xR);
        assert_eq!(geometry_of_fibration(&fib("(3_1 6_4)")), Geometry::Bad);
        assert_eq!(geometry_of_fibration(&fib("(2_1 2_1 2_1 2_1 2_1 2_1)")), Geometry::H2xR);
        let nil = geometry_of_fibration(&fib("(o);e=1"));
        assert_eq!(nil, Geometry::Nil);
        assert!(!nil.in_scope());
    }

    #[test]
    fn missing_xi() {
        let p = parse_fibration_partial("(2_1 * 2_1 2_1)").unwrap();
        assert_eq!(complete_boundary_invariant(&p).unwrap().xi(), [0]);
        let p = parse_fibration_partial("(*)").unwrap();
        assert_eq!(complete_boundary_invariant(&p).unwrap().xi(), [0]);
        let p = parse_fibration_partial("(* 4_2 3_0 2_1)").unwrap();
        assert_eq!(complete_boundary_invariant(&p).unwrap().xi(), [1]);
        let p = parse_fibration_partial("(3_1 *)").unwrap();
        assert!(matches!(complete_boundary_invariant(&p), Err(Error::NoConsistentXi(_))));
    }

    #[test]
    fn enumeration_examples() {
        let b = parse_base("226").unwrap();
        assert_eq!(names(&enumerate_fibrations(&b).unwrap()), ["(6_0 2_0 2_0)", "(6_0 2_1 2_1)", "(6_3 2_0 2_1)"]);
        let b = parse_base("*432").unwrap();
        assert_eq!(names(&enumerate_fibrations(&b).unwrap()), ["(*_0 4_0 3_0 2_0)", "(*_1 4_2 3_0 2_1)"]);
        let b = parse_base("2222").unwrap();
        assert_eq!(
            names(&enumerate_fibrations(&b).unwrap()),
            ["(2_0 2_0 2_0 2_0)", "(2_0 2_0 2_1 2_1)", "(2_1 2_1 2_1 2_1)"]
        );
    }

    #[test]
    fn enumeration_rejects_hyperbolic_bases() {
        let b = parse_base("2223").unwrap();
        assert!(matches!(enumerate_fibrations(&b), Err(Error::Scope(_))));
    }

    /// Brute-force oracle: tuples over `nn` up to swapping the two cones.
    #[test]
    fn enumeration_over_nn_matches_brute_force() {
        for n in 2..=12u32 {
            let mut classes = std::collections::BTreeSet::new();
            for a in 0..n {
                for b in 0..n {
                    if (a + b) % n == 0 {
                        classes.insert((a.min(b), a.max(b)));
                    }
                }
            }
            let b = Orbifold2Symbol::new(0, 0, vec![n, n], vec![]).unwrap();
            assert_eq!(enumerate_fibrations(&b).unwrap().len(), classes.len(), "n={n}");
            assert_eq!(classes.len() as u32, 1 + n / 2);
        }
    }
}
