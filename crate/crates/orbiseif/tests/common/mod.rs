//! Shared fixtures for the integration tests: hand-transcribed tables and
//! proptest strategies.
#![allow(dead_code)]

use orbiseif::classify::UnderlyingSpace;
use orbiseif::holonomy::CircleIsometry;
use orbiseif::notation::{parse_fibration, BoundaryInvariants};
use orbiseif::seifert::normalize;
use orbiseif::{q, LocalInvariant, SeifertSymbol, Q};
use proptest::prelude::*;

pub fn fib(text: &str) -> SeifertSymbol {
    parse_fibration(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn inv(&(n, m): &(u32, u32)) -> LocalInvariant {
    LocalInvariant::new(m, n)
}

/// Fibration over a sphere with cone points `(n, m)`.
pub fn cones(cs: &[(u32, u32)]) -> SeifertSymbol {
    SeifertSymbol::new(0, 0, cs.iter().map(inv).collect(), vec![], Q::from(0)).unwrap()
}

/// Fibration over a disc with cone points, corners and boundary invariant.
pub fn disc(cs: &[(u32, u32)], xi: u8, corners: &[(u32, u32)]) -> SeifertSymbol {
    let b = BoundaryInvariants { xi, corners: corners.iter().map(inv).collect() };
    SeifertSymbol::new(0, 0, cs.iter().map(inv).collect(), vec![b], Q::from(0)).unwrap()
}

pub fn projective(cs: &[(u32, u32)]) -> SeifertSymbol {
    SeifertSymbol::new(0, 1, cs.iter().map(inv).collect(), vec![], Q::from(0)).unwrap()
}

/// One fibration of the `S^2 x R` table: row number, parameter `n` and the
/// underlying space listed next to it.
#[derive(Clone, Debug)]
pub struct SphericalEntry {
    pub row: u8,
    pub n: u32,
    pub symbol: SeifertSymbol,
    pub underlying: UnderlyingSpace,
}

/// The `S^2 x R` table for parameters up to `max_n`, transcribed row by row
/// with its parity constraints.
pub fn spherical_table(max_n: u32) -> Vec<SphericalEntry> {
    use UnderlyingSpace::*;
    let mut out = Vec::new();
    let mut add = |row: u8, n: u32, symbol: SeifertSymbol, underlying| {
        out.push(SphericalEntry { row, n, symbol, underlying });
    };
    add(1, 0, cones(&[(5, 0), (3, 0), (2, 0)]), S2xS1);
    add(2, 0, disc(&[], 0, &[(5, 0), (3, 0), (2, 0)]), S3);
    add(3, 0, cones(&[(4, 0), (3, 0), (2, 0)]), S2xS1);
    add(3, 0, cones(&[(4, 2), (3, 0), (2, 1)]), S2xS1);
    add(4, 0, disc(&[], 0, &[(4, 0), (3, 0), (2, 0)]), S3);
    add(4, 0, disc(&[], 1, &[(4, 2), (3, 0), (2, 1)]), S3);
    add(5, 0, cones(&[(3, 0), (3, 0), (2, 0)]), S2xS1);
    add(5, 0, cones(&[(3, 1), (3, 2), (2, 0)]), S2xS1);
    add(6, 0, disc(&[], 0, &[(3, 0), (3, 0), (2, 0)]), S3);
    add(6, 0, disc(&[], 1, &[(3, 1), (3, 2), (2, 0)]), S3);
    add(7, 0, disc(&[(3, 0)], 0, &[(2, 0)]), S3);
    for n in 1..=max_n {
        let even = n % 2 == 0;
        if n >= 2 {
            add(8, n, cones(&[(2, 0), (2, 0), (n, 0)]), S2xS1);
            add(8, n, cones(&[(2, 1), (2, 1), (n, 0)]), S2xS1);
            add(9, n, disc(&[], 0, &[(2, 0), (2, 0), (n, 0)]), S3);
            add(9, n, disc(&[], 1, &[(2, 1), (2, 1), (n, 0)]), S3);
            if even && n >= 4 {
                add(8, n, cones(&[(2, 0), (2, 1), (n, n / 2)]), S2xS1);
                add(9, n, disc(&[], 1, &[(2, 0), (2, 1), (n, n / 2)]), S3);
            }
            add(10, n, disc(&[(2, 0)], 0, &[(n, 0)]), S3);
            add(10, n, disc(&[(2, 1)], 1, &[(n, 0)]), RP3);
            add(13, n, disc(&[(n, 0)], 0, &[]), S3);
            if even {
                add(13, n, disc(&[(n, n / 2)], 1, &[]), RP3);
            }
        }
        add(11, n, cones(&[(n, 0), (n, 0)]), S2xS1);
        add(12, n, disc(&[], 0, &[(n, 0), (n, 0)]), S3);
        for m in 1..n {
            add(11, n, cones(&[(n, m), (n, n - m)]), S2xS1);
            add(12, n, disc(&[], 1, &[(n, m), (n, n - m)]), S3);
        }
        add(14, n, projective(&[(n, 0)]), RP3SumRP3);
    }
    out
}

/// Components and vertex points of the singular locus for the orbifolds of
/// the flat alias table.
pub const SINGULAR_LOCI: [(&str, usize, usize); 9] = [
    ("(2_0 2_0 *_0)", 4, 0),
    ("(2_0 2_1 *_1)", 2, 0),
    ("(2_1 2_1 *_0)", 2, 0),
    ("(2_0 *_0 2_0 2_0)", 2, 4),
    ("(*_0 2_0 2_0 2_0 2_0)", 1, 8),
    ("(*_1 2_0 2_1 2_0 2_1)", 2, 4),
    ("(2_1 *_1 2_0 2_0)", 1, 4),
    ("(2_0 *_1 2_1 2_1)", 3, 0),
    ("(2_1 2_1 x)", 0, 0),
];

/// The flat alias table as stated, one line per orbifold.
pub const FLAT_LINES: [&[&str]; 7] = [
    &["(2_0 2_0 2_0 2_0)", "(*_0 *_0)"],
    &["(2_0 2_0 2_1 2_1)", "(*_1 *_1)", "(*_0 x)"],
    &["(2_1 2_1 2_1 2_1)", "(x x)"],
    &["(2_0 2_0 *_0)", "(*_0 2_1 2_1 2_1 2_1)"],
    &["(2_0 2_1 *_1)", "(2_1 *_0 2_1 2_1)"],
    &["(2_1 2_1 *_0)", "(2_0 2_0 x)"],
    &["(2_0 *_0 2_0 2_0)", "(*_1 2_0 2_0 2_1 2_1)"],
];

pub fn flat_lines() -> Vec<Vec<SeifertSymbol>> {
    FLAT_LINES.iter().map(|l| l.iter().map(|t| normalize(&fib(t))).collect()).collect()
}

fn arb_invariant() -> impl Strategy<Value = LocalInvariant> {
    (2u32..=16).prop_flat_map(|n| (0..2 * n).prop_map(move |m| LocalInvariant::new(m, n)))
}

fn arb_boundary() -> impl Strategy<Value = BoundaryInvariants> {
    (0u8..=1, prop::collection::vec(arb_invariant(), 0..5))
        .prop_map(|(xi, corners)| BoundaryInvariants { xi, corners })
}

pub fn arb_rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, d)| q(p, d))
}

/// Any well-formed symbol: orientable or not, unreduced invariants allowed.
pub fn arb_seifert() -> impl Strategy<Value = SeifertSymbol> {
    (
        0u32..=2,
        0u32..=3,
        prop::collection::vec(arb_invariant(), 0..6),
        prop::collection::vec(arb_boundary(), 0..4),
        arb_rational(),
    )
        .prop_map(|(h, p, cones, bs, e)| SeifertSymbol::new(h, p, cones, bs, e).unwrap())
}

pub fn arb_circle() -> impl Strategy<Value = CircleIsometry> {
    (arb_rational(), any::<bool>()).prop_map(|(t, rot)| {
        if rot {
            CircleIsometry::rotation(t)
        } else {
            CircleIsometry::reflection(t)
        }
    })
}
