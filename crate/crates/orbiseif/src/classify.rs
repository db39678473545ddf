//! Orientation-preserving diffeomorphism classes of Seifert fibered orbifolds
//! with vanishing Euler number, and the invariants that tell classes apart.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::Serialize;

use crate::euclid::{point_orbifold, realize_flat_fibration};
use crate::notation::{parse_fibration, BoundaryInvariants};
use crate::orbifold2::{closure, geometry_class, spherical_realization, BaseGeometry, Perm};
use crate::seifert::{check_invariant_relation, geometry_of_fibration, normalize, Geometry};
use crate::singular::{singular_census, singular_graph};
use crate::{Error, LocalInvariant, Orbifold2Symbol, Result, SeifertSymbol, Q};

/// Flat orbifolds with more than one fibration. The first entry of each line is
/// the canonical representative.
pub const FLAT_ALIAS_TABLE: [&[&str]; 7] = [
    &["(2_0 2_0 2_0 2_0)", "(*_0 *_0)"],
    &["(2_0 2_0 2_1 2_1)", "(*_1 *_1)", "(*_0 x)"],
    &["(2_1 2_1 2_1 2_1)", "(x x)"],
    &["(2_0 2_0 *_0)", "(*_0 2_1 2_1 2_1 2_1)"],
    &["(2_0 2_1 *_1)", "(2_1 *_0 2_1 2_1)"],
    &["(2_1 2_1 *_0)", "(2_0 2_0 x)"],
    &["(2_0 *_0 2_0 2_0)", "(*_1 2_0 2_0 2_1 2_1)"],
];

/// Pairs with equal computed invariants that are known to be distinct only by
/// an argument about the number of fibrations of a common flat orbifold.
pub const DISTINGUISHED_BY_CONTRADICTION: [(&str, &str); 1] = [("(2_0 2_1 *_1)", "(2_1 2_1 *_0)")];

fn flat_table() -> &'static Vec<Vec<SeifertSymbol>> {
    static TABLE: OnceLock<Vec<Vec<SeifertSymbol>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        FLAT_ALIAS_TABLE
            .iter()
            .map(|line| line.iter().map(|t| normalize(&parse_fibration(t).expect("table entry"))).collect())
            .collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// `((c nu)_{c mu} (d nu)_{d(nu - mu)})` over a sphere with two cone points.
    SphereTwoCones,
    /// `(*_1 (c nu)_{c mu} (d nu)_{d(nu - mu)})` over a disc with two corners.
    DiscTwoCorners,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyId::SphereTwoCones => "sphere-two-cones",
            FamilyId::DiscTwoCorners => "disc-two-corners",
        })
    }
}

/// Infinite family of pairwise inequivalent fibrations of one orbifold,
/// parametrized by coprime `0 < mu < nu` (plus `nu = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Family {
    pub id: FamilyId,
    pub c: u32,
    pub d: u32,
}

impl Family {
    /// Member for `(nu, mu)`; `nu = 1` gives the canonical `(c_0 d_0)`.
    pub fn member(&self, nu: u32, mu: u32) -> SeifertSymbol {
        let (a, b) = if nu == 1 {
            (LocalInvariant::new(0, self.c), LocalInvariant::new(0, self.d))
        } else {
            (LocalInvariant::new(self.c * mu, self.c * nu), LocalInvariant::new(self.d * (nu - mu), self.d * nu))
        };
        let built = match self.id {
            FamilyId::SphereTwoCones => SeifertSymbol::new(0, 0, vec![a, b], vec![], Q::from(0)),
            FamilyId::DiscTwoCorners => SeifertSymbol::new(
                0,
                0,
                vec![],
                vec![BoundaryInvariants { xi: (nu != 1) as u8, corners: vec![a, b] }],
                Q::from(0),
            ),
        };
        built.expect("family members are well formed")
    }

    pub fn canonical(&self) -> SeifertSymbol {
        self.member(1, 0)
    }

    /// Distinct members with `nu <= bound`, canonical first.
    pub fn members(&self, bound: u32) -> Vec<SeifertSymbol> {
        let mut out: Vec<SeifertSymbol> = vec![self.canonical()];
        for nu in 2..=bound {
            for mu in (1..nu).filter(|mu| mu.gcd(&nu) == 1) {
                let s = self.member(nu, mu);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Members {
    Finite(Vec<SeifertSymbol>),
    Family(Family),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffeoClass {
    pub geometry: Geometry,
    pub canonical: SeifertSymbol,
    pub members: Members,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub id: FamilyId,
    pub params: Vec<u32>,
    pub bound: u32,
    pub members: Vec<String>,
}

/// Printable form of a class with family members cut off at `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub geometry: Geometry,
    pub canonical: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aliases: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
}

impl DiffeoClass {
    pub fn is_infinite(&self) -> bool {
        matches!(self.members, Members::Family(_))
    }

    pub fn aliases(&self, bound: u32) -> Vec<SeifertSymbol> {
        match &self.members {
            Members::Finite(xs) => xs.clone(),
            Members::Family(f) => f.members(bound),
        }
    }

    pub fn report(&self, bound: u32) -> ClassReport {
        let names = |xs: Vec<SeifertSymbol>| xs.iter().map(|s| s.to_string()).collect();
        match &self.members {
            Members::Finite(xs) => ClassReport {
                geometry: self.geometry,
                canonical: self.canonical.to_string(),
                aliases: Some(names(xs.clone())),
                family: None,
            },
            Members::Family(f) => ClassReport {
                geometry: self.geometry,
                canonical: self.canonical.to_string(),
                aliases: None,
                family: Some(FamilyReport {
                    id: f.id,
                    params: if f.c == f.d { vec![f.d] } else { vec![f.c, f.d] },
                    bound,
                    members: names(f.members(bound)),
                }),
            },
        }
    }
}

/// Normalizes and checks that `s` is a valid fibration with `e = 0`.
fn prepare(s: &SeifertSymbol) -> Result<SeifertSymbol> {
    if !check_invariant_relation(s).is_valid() {
        return Err(Error::InvalidSymbol(format!("{s} violates the invariant relation")));
    }
    let s = normalize(s);
    if s.euler() != Q::from(0) {
        return Err(Error::Scope(format!(
            "{s} has nonzero Euler number (geometry {}); only e = 0 is classified",
            geometry_of_fibration(&s)
        )));
    }
    Ok(s)
}

fn invariant_index(c: &LocalInvariant) -> u32 {
    if c.m == 0 {
        c.n
    } else {
        c.gcd()
    }
}

/// Family containing `s`, when the base is a sphere with at most two cone
/// points or a disc with at most two corners and nothing else.
fn family_of(s: &SeifertSymbol) -> Option<Family> {
    if s.handles() > 0 || s.crosscaps() > 0 {
        return None;
    }
    let (id, points) = match (s.cone_invariants(), s.boundaries()) {
        (cones, []) if cones.len() <= 2 => (FamilyId::SphereTwoCones, cones),
        ([], [b]) if b.corners.len() <= 2 => (FamilyId::DiscTwoCorners, b.corners.as_slice()),
        _ => return None,
    };
    let mut idx: Vec<u32> = points.iter().map(invariant_index).collect();
    idx.resize(2, 1);
    idx.sort_unstable_by(|a, b| b.cmp(a));
    Some(Family { id, c: idx[0], d: idx[1] })
}

pub fn has_infinitely_many_fibrations(s: &SeifertSymbol) -> bool {
    family_of(s).is_some()
}

pub fn canonical_class(s: &SeifertSymbol) -> Result<DiffeoClass> {
    let s = prepare(s)?;
    let geometry = geometry_of_fibration(&s);
    if let Some(f) = family_of(&s) {
        return Ok(DiffeoClass { geometry, canonical: f.canonical(), members: Members::Family(f) });
    }
    if geometry == Geometry::E3 {
        if let Some(line) = flat_table().iter().find(|line| line.contains(&s)) {
            return Ok(DiffeoClass {
                geometry,
                canonical: line[0].clone(),
                members: Members::Finite(line.clone()),
            });
        }
    }
    Ok(DiffeoClass { geometry, canonical: s.clone(), members: Members::Finite(vec![s]) })
}

pub fn are_diffeomorphic(a: &SeifertSymbol, b: &SeifertSymbol) -> Result<bool> {
    Ok(canonical_class(a)?.canonical == canonical_class(b)?.canonical)
}

/// Fibrations of the same orbifold; families are cut off at `nu <= bound`.
pub fn aliases(s: &SeifertSymbol, bound: u32) -> Result<Vec<SeifertSymbol>> {
    Ok(canonical_class(s)?.aliases(bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum NormalIndex {
    Unique(usize),
    Multiple,
}

impl fmt::Display for NormalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalIndex::Unique(k) => write!(f, "{k}"),
            NormalIndex::Multiple => f.write_str("multiple"),
        }
    }
}

fn conjugacy_classes(group: &[Perm]) -> Vec<Vec<Perm>> {
    let mut seen: BTreeSet<&Perm> = BTreeSet::new();
    let mut out = Vec::new();
    for x in group {
        if seen.contains(x) {
            continue;
        }
        let class: BTreeSet<Perm> = group.iter().map(|g| g.mul(x).mul(&g.inverse())).collect();
        for y in &class {
            seen.insert(group.iter().find(|g| *g == y).expect("closed under conjugation"));
        }
        out.push(class.into_iter().collect());
    }
    out
}

/// Normal subgroups, grown by adjoining whole conjugacy classes.
fn normal_subgroups(group: &[Perm]) -> Vec<BTreeSet<Perm>> {
    let degree = group[0].degree();
    let classes = conjugacy_classes(group);
    let mut found: Vec<BTreeSet<Perm>> = vec![[Perm::identity(degree)].into_iter().collect()];
    let mut next = 0;
    while next < found.len() {
        let n = found[next].clone();
        next += 1;
        for c in classes.iter().filter(|c| !n.contains(&c[0])) {
            let gens: Vec<Perm> = n.iter().chain(c).cloned().collect();
            let grown: BTreeSet<Perm> = closure(degree, &gens).into_iter().collect();
            if !found.contains(&grown) {
                found.push(grown);
            }
        }
    }
    found
}

fn is_abelian(elements: &BTreeSet<Perm>) -> bool {
    elements.iter().all(|a| elements.iter().all(|b| a.mul(b) == b.mul(a)))
}

/// Index in `pi_1(B)` of the maximal abelian normal subgroup of the
/// orientation-preserving subgroup, or `Multiple` when it is not unique.
pub fn max_abelian_normal_index(base: &Orbifold2Symbol) -> Result<NormalIndex> {
    let real = spherical_realization(base)?;
    let order = real.elements().len();
    let plus = real.positive_elements()?;
    let abelian: Vec<BTreeSet<Perm>> = normal_subgroups(&plus).into_iter().filter(is_abelian).collect();
    let maximal: Vec<&BTreeSet<Perm>> = abelian
        .iter()
        .filter(|m| !abelian.iter().any(|o| o.len() > m.len() && m.is_subset(o)))
        .collect();
    match maximal.as_slice() {
        [m] => Ok(NormalIndex::Unique(order / m.len())),
        _ => Ok(NormalIndex::Multiple),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum UnderlyingSpace {
    S3,
    S2xS1,
    RP3,
    #[serde(rename = "RP3#RP3")]
    RP3SumRP3,
}

impl fmt::Display for UnderlyingSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnderlyingSpace::S3 => "S3",
            UnderlyingSpace::S2xS1 => "S2xS1",
            UnderlyingSpace::RP3 => "RP3",
            UnderlyingSpace::RP3SumRP3 => "RP3#RP3",
        })
    }
}

/// Topological space underlying the orbifold, for spherical and bad bases.
/// Invariants `0/p` are dropped and the others reduced to lowest terms, which
/// leaves one of a handful of base cases.
pub fn underlying_space(s: &SeifertSymbol) -> Result<UnderlyingSpace> {
    let s = prepare(s)?;
    match geometry_class(&s.base()) {
        BaseGeometry::Spherical | BaseGeometry::Bad => {}
        g => return Err(Error::Scope(format!("underlying space is not computed over a {g} base"))),
    }
    let reduce = |cs: &[LocalInvariant]| -> Vec<LocalInvariant> {
        cs.iter()
            .filter(|c| c.m % c.n != 0)
            .map(|c| {
                let g = c.m.gcd(&c.n);
                LocalInvariant::new(c.m / g, c.n / g)
            })
            .collect()
    };
    let cones = reduce(s.cone_invariants());
    let unsupported = || Error::Unsupported(format!("no reduction rule for the underlying space of {s}"));
    match (s.boundaries(), s.crosscaps()) {
        ([], 0) if cones.len() <= 2 => Ok(UnderlyingSpace::S2xS1),
        ([_], 0) if cones.is_empty() => Ok(UnderlyingSpace::S3),
        ([b], 0) if b.xi == 1 && cones == [LocalInvariant::new(1, 2)] && reduce(&b.corners).is_empty() => {
            Ok(UnderlyingSpace::RP3)
        }
        ([], 1) if cones.is_empty() => Ok(UnderlyingSpace::RP3SumRP3),
        _ => Err(unsupported()),
    }
}

/// Every implemented invariant of the orbifold behind a fibration. Fields are
/// `None` where the invariant is not computed for this kind of symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    pub geometry: Geometry,
    /// Circle components per index: over cone points, and over mirrors when
    /// the strand pattern is known.
    pub circles_by_index: BTreeMap<u32, usize>,
    pub struts_by_index: BTreeMap<u32, usize>,
    pub vertex_count: usize,
    pub components: Option<usize>,
    /// Vertices per component of the singular locus, sorted.
    pub vertex_distribution: Option<Vec<usize>>,
    pub separable_by_point: Option<bool>,
    pub underlying: Option<UnderlyingSpace>,
    pub max_abelian_index: Option<NormalIndex>,
    /// `S^2` modulo the point group of a flat realization.
    pub point_orbifold: Option<Orbifold2Symbol>,
}

pub fn invariant_profile(s: &SeifertSymbol) -> Result<InvariantProfile> {
    let s = prepare(s)?;
    let geometry = geometry_of_fibration(&s);
    let census = singular_census(&s);
    let graph = singular_graph(&s).ok();
    Ok(InvariantProfile {
        geometry,
        circles_by_index: graph.as_ref().map_or_else(|| census.circles_by_index(), |g| g.circles_by_index()),
        struts_by_index: census.struts_by_index(),
        vertex_count: census.vertex_count,
        components: graph.as_ref().map(|g| g.component_count()),
        vertex_distribution: graph.as_ref().map(|g| g.vertex_distribution()),
        separable_by_point: graph.as_ref().map(|g| !g.bridges().is_empty()),
        underlying: underlying_space(&s).ok(),
        max_abelian_index: match geometry {
            Geometry::S2xR => Some(max_abelian_normal_index(&s.base())?),
            _ => None,
        },
        point_orbifold: match geometry {
            Geometry::E3 => realize_flat_fibration(&s).and_then(|g| point_orbifold(&g)).ok(),
            _ => None,
        },
    })
}

/// Whether a pair is on the explicit list of classes told apart by argument
/// rather than by a computed invariant.
pub fn distinguished_by_contradiction(a: &SeifertSymbol, b: &SeifertSymbol) -> bool {
    let (a, b) = (normalize(a), normalize(b));
    DISTINGUISHED_BY_CONTRADICTION.iter().any(|(x, y)| {
        let x = normalize(&parse_fibration(x).expect("list entry"));
        let y = normalize(&parse_fibration(y).expect("list entry"));
        (a == x && b == y) || (a == y && b == x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_base;

    fn fib(s: &str) -> SeifertSymbol {
        parse_fibration(s).unwrap()
    }

    #[test]
    fn flat_line_with_three_entries() {
        let c = canonical_class(&fib("(*_0 x)")).unwrap();
        assert_eq!(c.canonical, normalize(&fib("(2_0 2_0 2_1 2_1)")));
        assert_eq!(c.aliases(12).len(), 3);
        assert_eq!(c.geometry, Geometry::E3);
    }

    #[test]
    fn lens_type_reductions() {
        let c = canonical_class(&fib("(4_2 4_2)")).unwrap();
        assert_eq!(c.canonical.to_string(), "(2_0 2_0)");
        let c = canonical_class(&fib("(3_1 6_4)")).unwrap();
        assert_eq!(c.members, Members::Family(Family { id: FamilyId::SphereTwoCones, c: 2, d: 1 }));
        assert_eq!(c.geometry, Geometry::Bad);
        assert!(are_diffeomorphic(&fib("(*_1 6_2 6_4)"), &fib("(*_0 2_0 2_0)")).unwrap());
        assert!(!are_diffeomorphic(&fib("(6_2 6_4)"), &fib("(*_0 2_0 2_0)")).unwrap());
    }

    #[test]
    fn family_cut_off_by_nu() {
        let got: Vec<String> = aliases(&fib("(2_0 2_0)"), 3).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(got, ["(2_0 2_0)", "(4_2 4_2)", "(6_2 6_4)"]);
    }

    #[test]
    fn nonzero_euler_is_out_of_scope() {
        assert!(canonical_class(&fib("(2_1 2_1)")).is_ok());
        assert!(canonical_class(&fib("(3_1 3_1 3_1)")).is_ok());
        assert!(matches!(canonical_class(&fib("(2_1 2_1);e=1")), Err(Error::Scope(_))));
        assert!(matches!(canonical_class(&fib("(3_1 3_1)")), Err(Error::InvalidSymbol(_))));
    }

    #[test]
    fn abelian_normal_index_of_polyhedral_groups() {
        let idx = |b: &str| max_abelian_normal_index(&parse_base(b).unwrap()).unwrap();
        assert_eq!(idx("532"), NormalIndex::Unique(60));
        assert_eq!(idx("*432"), NormalIndex::Unique(12));
        assert_eq!(idx("224"), NormalIndex::Multiple);
        assert_eq!(idx("222"), NormalIndex::Unique(1));
        assert_eq!(idx("55"), NormalIndex::Unique(1));
    }

    #[test]
    fn reduction_rules_for_the_underlying_space() {
        let u = |s: &str| underlying_space(&fib(s)).unwrap();
        assert_eq!(u("(*_1 4_2 3_0 2_1)"), UnderlyingSpace::S3);
        assert_eq!(u("(6_3 *_1)"), UnderlyingSpace::RP3);
        assert_eq!(u("(3_0 x)"), UnderlyingSpace::RP3SumRP3);
        assert_eq!(u("(4_1 4_3)"), UnderlyingSpace::S2xS1);
        assert!(matches!(underlying_space(&fib("(2_0 2_0 *_0)")), Err(Error::Scope(_))));
    }
}
