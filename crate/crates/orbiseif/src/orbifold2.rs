//! Intrinsic data of closed 2-orbifolds: Euler characteristic, geometry,
//! fundamental group presentation and finite permutation realizations of the
//! spherical groups.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::notation::Orbifold2Symbol;
use crate::{Error, Result, Q};

/// Euler characteristic `chi(|B|) - sum(1 - 1/n) - 1/2 sum(1 - 1/n)`.
pub fn euler_characteristic(b: &Orbifold2Symbol) -> Q {
    let one = Q::from(1);
    let mut chi = Q::from(b.surface_euler());
    for &n in b.cones() {
        chi -= one - Q::new(1, n as i64);
    }
    for &n in b.boundaries().iter().flatten() {
        chi -= (one - Q::new(1, n as i64)) / 2;
    }
    chi
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseGeometry {
    Spherical,
    Flat,
    Hyperbolic,
    Bad,
}

impl fmt::Display for BaseGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseGeometry::Spherical => "spherical",
            BaseGeometry::Flat => "flat",
            BaseGeometry::Hyperbolic => "hyperbolic",
            BaseGeometry::Bad => "bad",
        })
    }
}

/// Teardrops and spindles: a sphere with one cone point or two of different
/// orders, or their mirrored versions on the disc.
pub fn is_bad(b: &Orbifold2Symbol) -> bool {
    let uneven = |s: &[u32]| match s {
        [_] => true,
        [a, c] => a != c,
        _ => false,
    };
    if b.handles() > 0 || b.crosscaps() > 0 {
        return false;
    }
    match b.boundaries() {
        [] => uneven(b.cones()),
        [corners] => b.cones().is_empty() && uneven(corners),
        _ => false,
    }
}

pub fn geometry_class(b: &Orbifold2Symbol) -> BaseGeometry {
    if is_bad(b) {
        return BaseGeometry::Bad;
    }
    let chi = euler_characteristic(b);
    if chi > Q::from(0) {
        BaseGeometry::Spherical
    } else if chi == Q::from(0) {
        BaseGeometry::Flat
    } else {
        BaseGeometry::Hyperbolic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    HandleX,
    HandleY,
    CrosscapZ,
    ConeGamma,
    BoundaryDelta,
    BoundaryRho,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
    pub orientation: i8,
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

pub type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub label: String,
    pub word: Word,
}

/// Singular feature of the base together with the generators it contributes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Handle(usize),
    Crosscap(usize),
    Cone(usize),
    Boundary(usize),
    Corner(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub feature_map: Vec<(Feature, Vec<usize>)>,
}

impl Presentation {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Parses `"d1 r1.0 d1^-1 r1.0"`; the empty string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                let generator =
                    self.index_of(name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
                Ok(Letter { generator, inverse })
            })
            .collect()
    }

    pub fn word_text(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter()
            .map(|l| {
                let name = &self.generators[l.generator].name;
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn character(&self, word: &[Letter]) -> i8 {
        word.iter().map(|l| self.generators[l.generator].orientation).product()
    }

    pub fn global_relation(&self) -> &Relation {
        self.relations.last().expect("presentation always has a global relation")
    }

    /// Removes the last boundary generator `d_b` using the global relation,
    /// as done for the annulus `**`. Fails when the global relation does not
    /// end in `d_b` or `d_b` appears in it more than once.
    pub fn eliminate_last_delta(&self) -> Result<Presentation> {
        let global = self.global_relation();
        let Some(last) = global.word.last().copied() else {
            return Err(Error::Semantic("global relation is empty".into()));
        };
        let target = last.generator;
        if self.generators[target].kind != GeneratorKind::BoundaryDelta
            || global.word.iter().filter(|l| l.generator == target).count() != 1
        {
            return Err(Error::Semantic("no boundary generator to eliminate".into()));
        }
        // d_b = (prefix)^-1
        let prefix = &global.word[..global.word.len() - 1];
        let replacement: Word =
            prefix.iter().rev().map(|l| Letter { inverse: !l.inverse, ..*l }).collect();
        let substitute = |w: &Word| -> Word {
            let mut out = Vec::new();
            for l in w {
                if l.generator == target {
                    if l.inverse {
                        out.extend(prefix.iter().copied());
                    } else {
                        out.extend(replacement.iter().copied());
                    }
                } else {
                    out.push(*l);
                }
            }
            out
        };
        let reindex = |g: usize| if g > target { g - 1 } else { g };
        let fix = |w: Word| -> Word {
            w.into_iter().map(|l| Letter { generator: reindex(l.generator), ..l }).collect()
        };
        let mut generators = self.generators.clone();
        generators.remove(target);
        let relations = self.relations[..self.relations.len() - 1]
            .iter()
            .map(|r| Relation { label: r.label.clone(), word: fix(substitute(&r.word)) })
            .collect();
        let feature_map = self
            .feature_map
            .iter()
            .map(|(f, gens)| {
                (f.clone(), gens.iter().filter(|&&g| g != target).map(|&g| reindex(g)).collect())
            })
            .collect();
        Ok(Presentation { generators, relations, feature_map })
    }
}

/// Generator names: `x1 y1` per handle, `z1` per crosscap, `g1` per cone,
/// `r1.0 .. r1.h` and `d1` per boundary.
pub fn fundamental_group_presentation(b: &Orbifold2Symbol) -> Presentation {
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    let mut feature_map = Vec::new();
    let mut add = |name: String, kind: GeneratorKind| {
        let orientation =
            if matches!(kind, GeneratorKind::CrosscapZ | GeneratorKind::BoundaryRho) { -1 } else { 1 };
        generators.push(Generator { name, kind, orientation });
        generators.len() - 1
    };
    let letter = |g: usize| Letter { generator: g, inverse: false };
    let inv = |g: usize| Letter { generator: g, inverse: true };
    let power = |g: usize, n: u32| -> Word { (0..n).map(|_| letter(g)).collect() };
    let mut global: Word = Vec::new();

    for s in 0..b.handles() as usize {
        let x = add(format!("x{}", s + 1), GeneratorKind::HandleX);
        let y = add(format!("y{}", s + 1), GeneratorKind::HandleY);
        feature_map.push((Feature::Handle(s), vec![x, y]));
        global.extend([letter(x), letter(y), inv(x), inv(y)]);
    }
    for r in 0..b.crosscaps() as usize {
        let z = add(format!("z{}", r + 1), GeneratorKind::CrosscapZ);
        feature_map.push((Feature::Crosscap(r), vec![z]));
        global.extend([letter(z), letter(z)]);
    }
    for (k, &n) in b.cones().iter().enumerate() {
        let g = add(format!("g{}", k + 1), GeneratorKind::ConeGamma);
        feature_map.push((Feature::Cone(k), vec![g]));
        relations.push(Relation { label: format!("g{}^{n}", k + 1), word: power(g, n) });
        global.push(letter(g));
    }
    for (i, corners) in b.boundaries().iter().enumerate() {
        let bi = i + 1;
        let rhos: Vec<usize> = (0..=corners.len())
            .map(|j| add(format!("r{bi}.{j}"), GeneratorKind::BoundaryRho))
            .collect();
        let d = add(format!("d{bi}"), GeneratorKind::BoundaryDelta);
        let mut all = rhos.clone();
        all.push(d);
        feature_map.push((Feature::Boundary(i), all));
        for (j, &r) in rhos.iter().enumerate() {
            relations.push(Relation { label: format!("r{bi}.{j}^2"), word: power(r, 2) });
        }
        for (j, &n) in corners.iter().enumerate() {
            let (a, c) = (rhos[j], rhos[j + 1]);
            feature_map.push((Feature::Corner(i, j), vec![a, c]));
            let word = (0..n).flat_map(|_| [letter(a), letter(c)]).collect();
            relations.push(Relation { label: format!("(r{bi}.{j} r{bi}.{})^{n}", j + 1), word });
        }
        let h = corners.len();
        relations.push(Relation {
            label: format!("d{bi} r{bi}.{h} d{bi}^-1 r{bi}.0"),
            word: vec![letter(d), letter(rhos[h]), inv(d), letter(rhos[0])],
        });
        global.push(letter(d));
    }
    relations.push(Relation { label: "global".into(), word: global });
    Presentation { generators, relations, feature_map }
}

/// Permutation of `0..degree`, acting on the left: `(p * q)(i) = p(q(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u16).collect())
    }

    pub fn from_cycles(degree: usize, cycles: &[&[u16]]) -> Self {
        let mut p = Perm::identity(degree);
        for c in cycles {
            for k in 0..c.len() {
                p.0[c[k] as usize] = c[(k + 1) % c.len()];
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u16;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u16 == j)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.mul(self);
            k += 1;
        }
        k
    }

    pub fn pow(&self, k: usize) -> Perm {
        (0..k).fold(Perm::identity(self.degree()), |acc, _| acc.mul(self))
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    /// Juxtaposes two permutations on disjoint supports.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let shift = self.0.len() as u16;
        Perm(self.0.iter().copied().chain(other.0.iter().map(|&i| i + shift)).collect())
    }
}

/// All elements of the group generated by `gens`.
pub fn closure(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.mul(&p);
            if seen.insert(q.clone()) {
                out.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    out
}

/// Group elements tagged with their orientation sign. `None` when the signs
/// of the generators do not define a homomorphism.
pub fn signed_closure(degree: usize, gens: &[Perm], signs: &[i8]) -> Option<HashMap<Perm, i8>> {
    let id = Perm::identity(degree);
    let mut seen: HashMap<Perm, i8> = HashMap::from([(id.clone(), 1)]);
    let mut queue = VecDeque::from([(id, 1i8)]);
    while let Some((p, s)) = queue.pop_front() {
        for (g, &gs) in gens.iter().zip(signs) {
            let q = g.mul(&p);
            let qs = s * gs;
            match seen.get(&q) {
                Some(&old) if old != qs => return None,
                Some(_) => {}
                None => {
                    seen.insert(q.clone(), qs);
                    queue.push_back((q, qs));
                }
            }
        }
    }
    Some(seen)
}

/// Isomorphism-invariant summary of a finite group. A fingerprint, not a proof
/// of isomorphism; it separates every group met in the spherical tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub order_histogram: BTreeMap<usize, usize>,
    pub abelian: bool,
    pub center_order: usize,
}

pub fn fingerprint(elements: &[Perm]) -> Fingerprint {
    let mut order_histogram = BTreeMap::new();
    for g in elements {
        *order_histogram.entry(g.order()).or_insert(0) += 1;
    }
    let commutes = |a: &Perm, b: &Perm| a.mul(b) == b.mul(a);
    let center_order =
        elements.iter().filter(|z| elements.iter().all(|g| commutes(z, g))).count();
    Fingerprint {
        order: elements.len(),
        order_histogram,
        abelian: center_order == elements.len(),
        center_order,
    }
}

/// Permutation group realizing `pi_1` of a spherical 2-orbifold, with one
/// permutation per presentation generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteRealization {
    pub degree: usize,
    pub names: Vec<String>,
    pub generators: Vec<Perm>,
    pub signs: Vec<i8>,
    pub order: usize,
}

impl FiniteRealization {
    pub fn elements(&self) -> Vec<Perm> {
        closure(self.degree, &self.generators)
    }

    /// Elements of the orientation-preserving subgroup.
    pub fn positive_elements(&self) -> Result<Vec<Perm>> {
        let signed = signed_closure(self.degree, &self.generators, &self.signs).ok_or_else(|| {
            Error::Geometry("orientation signs do not define a homomorphism".into())
        })?;
        let mut out: Vec<Perm> =
            signed.into_iter().filter(|(_, s)| *s == 1).map(|(p, _)| p).collect();
        out.sort();
        Ok(out)
    }

    pub fn evaluate(&self, word: &[Letter]) -> Perm {
        word.iter().fold(Perm::identity(self.degree), |acc, l| {
            let g = &self.generators[l.generator];
            acc.mul(&if l.inverse { g.inverse() } else { g.clone() })
        })
    }

    /// Label of the first relation that does not evaluate to the identity.
    pub fn first_failing_relation(&self, pres: &Presentation) -> Option<String> {
        pres.relations
            .iter()
            .find(|r| !self.evaluate(&r.word).is_identity())
            .map(|r| r.label.clone())
    }
}

fn cycle(n: usize) -> Perm {
    Perm((0..n).map(|i| ((i + 1) % n) as u16).collect())
}

/// Dihedral group of order `2n` acting faithfully on the `2n` directed edges of
/// an `n`-gon: returns the rotation and a reflection.
pub fn dihedral(n: usize) -> (Perm, Perm) {
    let idx = |i: usize, e: usize| (2 * (i % n) + e) as u16;
    let r = Perm((0..2 * n).map(|p| idx(p / 2 + 1, p % 2)).collect());
    let s = Perm((0..2 * n).map(|p| idx(n - p / 2 % n, 1 - p % 2)).collect());
    (r, s)
}

fn alternating5() -> Vec<Perm> {
    closure(5, &[cycle(5), Perm::from_cycles(5, &[&[0, 1, 2]])])
}

fn symmetric4() -> Vec<Perm> {
    closure(4, &[cycle(4), Perm::from_cycles(4, &[&[0, 1]])])
}

fn alternating4() -> Vec<Perm> {
    closure(4, &[Perm::from_cycles(4, &[&[0, 1, 2]]), Perm::from_cycles(4, &[&[0, 1], &[2, 3]])])
}

/// Reference groups used to name `pi_1^+` in the spherical tables.
pub fn reference_group(name: &str, n: usize) -> Vec<Perm> {
    match name {
        "A5" => alternating5(),
        "S4" => symmetric4(),
        "A4" => alternating4(),
        "D" => {
            let (r, s) = dihedral(n);
            closure(2 * n, &[r, s])
        }
        "Z" => closure(n.max(1), &[cycle(n.max(1))]),
        _ => panic!("unknown reference group {name}"),
    }
}

/// Finds `g1, g2` of orders `a, b` in `group` with `(g1 g2)^-1` of order `c`
/// generating a group of the requested size.
fn rotation_triple(group: &[Perm], a: usize, b: usize, c: usize, size: usize) -> Option<[Perm; 3]> {
    let degree = group[0].degree();
    let of_order = |k: usize| group.iter().filter(move |g| g.order() == k);
    for g1 in of_order(a) {
        for g2 in of_order(b) {
            let g3 = g1.mul(g2).inverse();
            if g3.order() == c && closure(degree, &[g1.clone(), g2.clone()]).len() == size {
                return Some([g1.clone(), g2.clone(), g3]);
            }
        }
    }
    None
}

/// Finds involutions `r0, r1, r2` with `r0 r1`, `r1 r2`, `r2 r0` of orders
/// `a, b, c` generating a group of the requested size.
fn reflection_triple(
    group: &[Perm],
    a: usize,
    b: usize,
    c: usize,
    size: usize,
) -> Option<[Perm; 3]> {
    let degree = group[0].degree();
    let inv: Vec<&Perm> = group.iter().filter(|g| g.order() == 2).collect();
    for r0 in &inv {
        for r1 in &inv {
            if r0.mul(r1).order() != a {
                continue;
            }
            for r2 in &inv {
                if r1.mul(r2).order() == b
                    && r2.mul(r0).order() == c
                    && closure(degree, &[(*r0).clone(), (*r1).clone(), (*r2).clone()]).len() == size
                {
                    return Some([(*r0).clone(), (*r1).clone(), (*r2).clone()]);
                }
            }
        }
    }
    None
}

fn with_swap(group: &[Perm]) -> Vec<Perm> {
    let swap = Perm(vec![1, 0]);
    group.iter().map(|g| g.direct_sum(&swap)).collect()
}

/// Table-driven permutation realization of `pi_1(B)` for spherical `B`.
pub fn spherical_realization(b: &Orbifold2Symbol) -> Result<FiniteRealization> {
    if geometry_class(b) != BaseGeometry::Spherical {
        return Err(Error::Geometry(format!("{b} is not a spherical 2-orbifold")));
    }
    let pres = fundamental_group_presentation(b);
    let order = (Q::from(2) / euler_characteristic(b)).to_integer() as usize;
    let mut assign: HashMap<&str, Perm> = HashMap::new();
    let cones = b.cones();
    let corners: &[u32] = b.boundaries().first().map(Vec::as_slice).unwrap_or(&[]);
    let nb = b.boundaries().len();
    let degree;
    let not_found = || Error::Geometry(format!("no realization found for {b}"));
    match (cones, nb, corners, b.crosscaps()) {
        ([], 0, _, 0) => {
            degree = 1;
        }
        ([n, _], 0, _, 0) => {
            let n = *n as usize;
            degree = n;
            assign.insert("g1", cycle(n));
            assign.insert("g2", cycle(n).inverse());
        }
        ([a, bb, c], 0, _, 0) => {
            let group = match (*a, *bb, *c) {
                (5, 3, 2) => alternating5(),
                (4, 3, 2) => symmetric4(),
                (3, 3, 2) => alternating4(),
                (n, 2, 2) => reference_group("D", n as usize),
                _ => return Err(not_found()),
            };
            degree = group[0].degree();
            let [g1, g2, g3] =
                rotation_triple(&group, *a as usize, *bb as usize, *c as usize, order)
                    .ok_or_else(not_found)?;
            assign.insert("g1", g1);
            assign.insert("g2", g2);
            assign.insert("g3", g3);
        }
        ([], 1, [], 0) => {
            degree = 2;
            assign.insert("r1.0", Perm(vec![1, 0]));
            assign.insert("d1", Perm::identity(2));
        }
        ([], 1, [n, _], 0) => {
            let n = *n as usize;
            let (r, s) = dihedral(n);
            degree = 2 * n;
            assign.insert("r1.0", s.clone());
            assign.insert("r1.1", s.mul(&r));
            assign.insert("r1.2", s);
            assign.insert("d1", Perm::identity(degree));
        }
        ([], 1, [a, bb, c], 0) => {
            let group = match (*a, *bb, *c) {
                (5, 3, 2) => with_swap(&alternating5()),
                (4, 3, 2) => with_swap(&symmetric4()),
                (3, 3, 2) => symmetric4(),
                (n, 2, 2) => with_swap(&reference_group("D", n as usize)),
                _ => return Err(not_found()),
            };
            degree = group[0].degree();
            // in the product groups the mirror involutions must flip the extra pair
            let flips = |g: &Perm| {
                if (a, bb, c) == (&3, &3, &2) {
                    !g.is_even()
                } else {
                    g.0[degree - 2] == degree as u16 - 1
                }
            };
            let odd: Vec<Perm> = group.iter().filter(|g| flips(g)).cloned().collect();
            let mut candidates = odd;
            candidates.push(Perm::identity(degree));
            let [r0, r1, r2] =
                reflection_triple_signed(&candidates, *a as usize, *bb as usize, *c as usize, order)
                    .ok_or_else(not_found)?;
            assign.insert("r1.0", r0.clone());
            assign.insert("r1.1", r1);
            assign.insert("r1.2", r2);
            assign.insert("r1.3", r0);
            assign.insert("d1", Perm::identity(degree));
        }
        ([n], 1, [], 0) => {
            let n = *n as usize;
            let c = cycle(n);
            let swap = Perm(vec![1, 0]);
            degree = n + 2;
            assign.insert("g1", c.direct_sum(&Perm::identity(2)));
            assign.insert("r1.0", Perm::identity(n).direct_sum(&swap));
            assign.insert("d1", c.inverse().direct_sum(&Perm::identity(2)));
        }
        ([2], 1, [n], 0) => {
            let n = *n as usize;
            let (r, s) = dihedral(2 * n);
            let t = s.mul(&r);
            degree = 4 * n;
            assign.insert("g1", t.clone());
            assign.insert("r1.0", s.clone());
            assign.insert("r1.1", t.mul(&s).mul(&t));
            assign.insert("d1", t);
        }
        ([3], 1, [2], 0) => {
            let group = with_swap(&alternating4());
            degree = 6;
            let c = Perm::from_cycles(4, &[&[0, 1, 2]]).direct_sum(&Perm::identity(2));
            let flipped: Vec<&Perm> = group.iter().filter(|g| g.0[4] == 5).collect();
            let ci = c.inverse();
            let r0 = flipped
                .into_iter()
                .find(|v| {
                    let r1 = c.mul(v).mul(&ci);
                    v.order() == 2
                        && v.mul(&r1).order() == 2
                        && closure(6, &[c.clone(), (*v).clone()]).len() == order
                })
                .ok_or_else(not_found)?
                .clone();
            assign.insert("r1.1", c.mul(&r0).mul(&ci));
            assign.insert("r1.0", r0);
            assign.insert("g1", c.clone());
            assign.insert("d1", ci);
        }
        ([], 0, _, 1) => {
            degree = 2;
            assign.insert("z1", Perm(vec![1, 0]));
        }
        ([n], 0, _, 1) => {
            let n = *n as usize;
            let z = cycle(2 * n);
            degree = 2 * n;
            assign.insert("g1", z.pow(2).inverse());
            assign.insert("z1", z);
        }
        _ => return Err(not_found()),
    }
    let mut generators = Vec::new();
    for g in &pres.generators {
        let p = assign
            .remove(g.name.as_str())
            .ok_or_else(|| Error::Geometry(format!("realization of {b} misses {}", g.name)))?;
        generators.push(p);
    }
    let real = FiniteRealization {
        degree,
        names: pres.generators.iter().map(|g| g.name.clone()).collect(),
        signs: pres.generators.iter().map(|g| g.orientation).collect(),
        order: closure(degree, &generators).len(),
        generators,
    };
    if let Some(label) = real.first_failing_relation(&pres) {
        return Err(Error::Geometry(format!("realization of {b} violates {label}")));
    }
    Ok(real)
}

fn reflection_triple_signed(
    candidates: &[Perm],
    a: usize,
    b: usize,
    c: usize,
    size: usize,
) -> Option<[Perm; 3]> {
    let inv: Vec<Perm> = candidates
        .iter()
        .filter(|g| g.mul(g).is_identity() && !g.is_identity())
        .cloned()
        .collect();
    reflection_triple(&inv, a, b, c, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_base;

    fn base(s: &str) -> Orbifold2Symbol {
        parse_base(s).unwrap()
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(euler_characteristic(&base("632")), Q::from(0));
        assert_eq!(euler_characteristic(&base("S2")), Q::from(2));
        for n in 2..=12u32 {
            let b = Orbifold2Symbol::new(0, 0, vec![], vec![vec![2, 2, n]]).unwrap();
            let direct = Q::from(1) - Q::new(1, 4) - Q::new(1, 4) - (Q::from(1) - Q::new(1, n as i64)) / 2;
            assert_eq!(euler_characteristic(&b), direct);
            assert_eq!(euler_characteristic(&b), Q::new(2, 4 * n as i64));
        }
        assert_eq!(euler_characteristic(&base("*225")), Q::new(1, 10));
    }

    #[test]
    fn geometry_classes() {
        let flat = [
            "632", "442", "333", "2222", "*632", "*442", "*333", "*2222", "4*2", "3*3", "22*",
            "2*22", "22x", "o", "xx", "**", "*x",
        ];
        for b in flat {
            assert_eq!(geometry_class(&base(b)), BaseGeometry::Flat, "{b}");
        }
        let spherical = [
            "", "77", "227", "332", "432", "532", "*", "7*", "*77", "2*7", "*227", "3*2", "*332",
            "*432", "*532", "x", "7x",
        ];
        for b in spherical {
            assert_eq!(geometry_class(&base(b)), BaseGeometry::Spherical, "{b}");
        }
        for b in ["36", "5", "*5", "*23"] {
            assert_eq!(geometry_class(&base(b)), BaseGeometry::Bad, "{b}");
        }
        for b in ["2223", "oo", "*2*", "732"] {
            assert_eq!(geometry_class(&base(b)), BaseGeometry::Hyperbolic, "{b}");
        }
    }

    #[test]
    fn presentation_of_632() {
        let p = fundamental_group_presentation(&base("632"));
        let names: Vec<_> = p.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["g1", "g2", "g3"]);
        let words: Vec<_> = p.relations.iter().map(|r| p.word_text(&r.word)).collect();
        assert_eq!(
            words,
            ["g1 g1 g1 g1 g1 g1", "g2 g2 g2", "g3 g3", "g1 g2 g3"]
        );
    }

    #[test]
    fn presentation_of_annulus_after_elimination() {
        let p = fundamental_group_presentation(&base("**"));
        assert_eq!(p.global_relation().word.len(), 2);
        let q = p.eliminate_last_delta().unwrap();
        let names: Vec<_> = q.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["r1.0", "d1", "r2.0"]);
        let words: Vec<_> = q.relations.iter().map(|r| q.word_text(&r.word)).collect();
        assert_eq!(
            words,
            ["r1.0 r1.0", "d1 r1.0 d1^-1 r1.0", "r2.0 r2.0", "d1^-1 r2.0 d1 r2.0"]
        );
    }

    #[test]
    fn sphere_presentation_is_trivial() {
        let p = fundamental_group_presentation(&Orbifold2Symbol::sphere());
        assert!(p.generators.is_empty());
        assert_eq!(p.relations.len(), 1);
        assert!(p.global_relation().word.is_empty());
    }

    #[test]
    fn characters() {
        let p = fundamental_group_presentation(&base("2*22x"));
        for g in &p.generators {
            let neg = matches!(g.kind, GeneratorKind::CrosscapZ | GeneratorKind::BoundaryRho);
            assert_eq!(g.orientation == -1, neg);
        }
        assert_eq!(p.character(&p.global_relation().word), 1);
    }

    #[test]
    fn dihedral_is_faithful() {
        for n in 1..=8 {
            let (r, s) = dihedral(n);
            assert_eq!(closure(2 * n, &[r.clone(), s.clone()]).len(), 2 * n);
            assert_eq!(r.order(), n);
            assert_eq!(s.order(), 2);
            assert_eq!(s.mul(&r).mul(&s), r.inverse());
        }
    }

    #[test]
    fn table_four_realizations() {
        let cases = [
            ("532", 60, "A5", 0),
            ("*532", 120, "A5", 0),
            ("432", 24, "S4", 0),
            ("*432", 48, "S4", 0),
            ("332", 12, "A4", 0),
            ("*332", 24, "A4", 0),
            ("3*2", 24, "A4", 0),
        ];
        for (b, order, plus, _) in cases {
            let real = spherical_realization(&base(b)).unwrap();
            assert_eq!(real.order, order, "{b}");
            let pos = real.positive_elements().unwrap();
            assert_eq!(fingerprint(&pos), fingerprint(&reference_group(plus, 0)), "{b}");
        }
    }

    #[test]
    fn realization_examples() {
        assert_eq!(spherical_realization(&base("532")).unwrap().order, 60);
        let six = spherical_realization(&base("66")).unwrap();
        assert_eq!(fingerprint(&six.elements()), fingerprint(&reference_group("Z", 6)));
        let r = spherical_realization(&base("2*3")).unwrap();
        assert_eq!(r.order, 12);
        assert_eq!(fingerprint(&r.elements()), fingerprint(&reference_group("D", 6)));
        assert_eq!(
            fingerprint(&r.positive_elements().unwrap()),
            fingerprint(&reference_group("D", 3))
        );
        assert!(spherical_realization(&base("2222")).is_err());
    }
}
