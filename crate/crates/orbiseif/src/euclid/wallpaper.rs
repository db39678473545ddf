use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::group::CrystGroup;
use super::linalg::{self, det, frac, identity, inverse, mat_add, mat_mul, mat_sub, mat_vec, Matrix, Vector};
use super::Affine;
use crate::orbifold2::{fundamental_group_presentation, geometry_class, BaseGeometry};
use crate::{Error, Orbifold2Symbol, Result, Q};

type Affine2 = Affine<2>;

/// A rotation center with its order and the smallest positive rotation about it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    #[serde(serialize_with = "ser_point")]
    pub point: Vector<2>,
    pub order: u32,
    pub rotation: Affine2,
}

fn ser_point<S: serde::Serializer>(p: &Vector<2>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    for x in p {
        seq.serialize_element(&crate::fmt_q(x))?;
    }
    seq.end()
}

/// One boundary component of the quotient: its corners in cyclic order and
/// the group element realizing the loop around it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryLoop {
    pub corners: Vec<SingularPoint>,
    pub delta: Affine2,
}

/// Quotient data of a wallpaper group, in coordinates of a positively
/// oriented lattice basis, so that the lattice is `Z^2`.
#[derive(Clone, Debug, Serialize)]
pub struct WallpaperAnalysis {
    #[serde(skip)]
    pub lattice: Matrix<2>,
    pub cosets: Vec<Affine2>,
    pub handles: u32,
    pub crosscaps: u32,
    pub cones: Vec<SingularPoint>,
    pub boundaries: Vec<BoundaryLoop>,
}

impl WallpaperAnalysis {
    pub fn base(&self) -> Result<Orbifold2Symbol> {
        Orbifold2Symbol::new(
            self.handles,
            self.crosscaps,
            self.cones.iter().map(|c| c.order).collect(),
            self.boundaries.iter().map(|b| b.corners.iter().map(|c| c.order).collect()).collect(),
        )
    }
}

fn stabilizer(cosets: &[Affine2], p: &Vector<2>) -> Vec<Affine2> {
    cosets
        .iter()
        .filter_map(|c| {
            let d = linalg::sub(&c.apply(p), p);
            linalg::is_integral(&d).then(|| Affine::new(c.a, linalg::sub(&c.t, &d)))
        })
        .collect()
}

fn rotation_trace(n: u32) -> Option<Q> {
    Some(Q::from(match n {
        1 => 2,
        2 => -2,
        3 => -1,
        4 => 0,
        6 => 1,
        _ => return None,
    }))
}

fn trace(a: &Matrix<2>) -> Q {
    a[0][0] + a[1][1]
}

/// Order of the rotation subgroup of `stab` and its smallest positive rotation.
fn minimal_rotation(stab: &[Affine2]) -> Result<(u32, Affine2)> {
    let rotations: Vec<&Affine2> = stab.iter().filter(|g| g.det() == Q::one()).collect();
    let n = rotations.len() as u32;
    let target = rotation_trace(n)
        .ok_or_else(|| Error::Geometry(format!("rotation of order {n} is not crystallographic")))?;
    rotations
        .into_iter()
        .find(|g| trace(&g.a) == target && (n <= 2 || g.a[1][0] > Q::zero()))
        .map(|g| (n, *g))
        .ok_or_else(|| Error::Geometry("no positive generator of a rotation stabilizer".into()))
}

fn orbit(cosets: &[Affine2], p: &Vector<2>) -> BTreeSet<Vector<2>> {
    cosets.iter().map(|c| frac(&c.apply(p))).collect()
}

fn rotation_centers(cosets: &[Affine2]) -> Vec<Vector<2>> {
    let mut points = BTreeSet::new();
    for c in cosets {
        if c.det() != Q::one() || c.a == identity() {
            continue;
        }
        let m = mat_sub(&identity(), &c.a);
        let d = det(&m).to_integer();
        let mi = inverse(&m).expect("I - A is invertible for a nontrivial rotation");
        for l0 in 0..d {
            for l1 in 0..d {
                let t = linalg::add(&c.t, &[Q::from(l0), Q::from(l1)]);
                points.insert(frac(&mat_vec(&mi, &t)));
            }
        }
    }
    let mut reps = Vec::new();
    while let Some(p) = points.iter().next().copied() {
        for q in orbit(cosets, &p) {
            points.remove(&q);
        }
        reps.push(p);
    }
    reps
}

/// A mirror line `nu . x = c`, up to lattice translation: `nu` primitive with
/// first nonzero entry positive, `0 <= c < 1`.
type LineClass = ([i64; 2], Q);

fn normalize_line(nu: [Q; 2], c: Q) -> LineClass {
    let p = linalg::primitive_integer(&nu).expect("mirror normal is nonzero");
    // nu = lambda * p
    let lambda = if nu[0].is_zero() { nu[1] / Q::from(p[1]) } else { nu[0] / Q::from(p[0]) };
    let c = c / lambda;
    (p, c - c.floor())
}

fn mirror_classes(cosets: &[Affine2]) -> BTreeSet<LineClass> {
    let mut out = BTreeSet::new();
    for c in cosets {
        if c.det() != -Q::one() {
            continue;
        }
        let ia = mat_sub(&identity(), &c.a);
        let row = if ia[0].iter().all(Zero::is_zero) { ia[1] } else { ia[0] };
        for l0 in -2..=2 {
            for l1 in -2..=2 {
                let t = linalg::add(&c.t, &[Q::from(l0), Q::from(l1)]);
                if mat_vec(&mat_add(&identity(), &c.a), &t).iter().all(Zero::is_zero) {
                    let x0 = linalg::scale(Q::new(1, 2), &t);
                    out.insert(normalize_line(row, linalg::dot(&row, &x0)));
                }
            }
        }
    }
    out
}

fn image_line(g: &Affine2, (nu, c): &LineClass) -> LineClass {
    let bi = inverse(&g.a).expect("invertible");
    let nuq = linalg::to_q(nu);
    let nu2: [Q; 2] = std::array::from_fn(|j| (0..2).map(|i| nuq[i] * bi[i][j]).sum());
    normalize_line(nu2, *c + linalg::dot(&nu2, &g.t))
}

fn cross(a: &Vector<2>, b: &Vector<2>) -> Q {
    a[0] * b[1] - a[1] * b[0]
}

/// Keeps the part of a convex polygon with `a . x <= b`.
fn clip(poly: &[Vector<2>], a: &Vector<2>, b: Q) -> Vec<Vector<2>> {
    let mut out = Vec::new();
    let inside = |p: &Vector<2>| linalg::dot(a, p) <= b;
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        if inside(&p) {
            out.push(p);
        }
        if inside(&p) != inside(&q) {
            let d = linalg::sub(&q, &p);
            let s = (b - linalg::dot(a, &p)) / linalg::dot(a, &d);
            out.push(linalg::add(&p, &linalg::scale(s, &d)));
        }
    }
    out
}

fn simplify(poly: Vec<Vector<2>>) -> Vec<Vector<2>> {
    let mut pts: Vec<Vector<2>> = Vec::new();
    for p in poly {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    let n = pts.len();
    (0..n)
        .filter(|&i| {
            let prev = pts[(i + n - 1) % n];
            let next = pts[(i + 1) % n];
            !cross(&linalg::sub(&pts[i], &prev), &linalg::sub(&next, &pts[i])).is_zero()
        })
        .map(|i| pts[i])
        .collect()
}

/// Chamber of the mirror arrangement containing a generic point, as a
/// counterclockwise vertex list.
fn chamber(classes: &BTreeSet<LineClass>) -> Result<Vec<Vector<2>>> {
    let mut p0 = [Q::new(3141, 10007), Q::new(2718, 10009)];
    for _ in 0..8 {
        let on_line = classes.iter().any(|(nu, c)| (linalg::dot(&linalg::to_q(nu), &p0) - c).is_integer());
        if !on_line {
            break;
        }
        p0 = [p0[0] + Q::new(1, 1013), p0[1] + Q::new(1, 1019)];
    }
    let r = Q::from(64);
    let mut poly = vec![
        [p0[0] - r, p0[1] - r],
        [p0[0] + r, p0[1] - r],
        [p0[0] + r, p0[1] + r],
        [p0[0] - r, p0[1] + r],
    ];
    for (nu, c) in classes {
        let nq = linalg::to_q(nu);
        let s = linalg::dot(&nq, &p0);
        let lo = *c + (s - c).floor();
        poly = clip(&poly, &nq, lo + 1);
        poly = clip(&poly, &linalg::scale(-Q::one(), &nq), -lo);
    }
    let poly = simplify(poly);
    let touches_box = poly.iter().any(|p| (p[0] - p0[0]).abs() == r || (p[1] - p0[1]).abs() == r);
    if touches_box || poly.len() < 3 {
        return Err(Error::Geometry("mirror chamber is not a bounded polygon".into()));
    }
    Ok(poly)
}

fn positively_oriented(lattice: &Matrix<2>) -> Matrix<2> {
    let mut l = *lattice;
    if det(&l) < Q::zero() {
        l[0][1] = -l[0][1];
        l[1][1] = -l[1][1];
    }
    l
}

/// Rotation centers, mirrors, chamber and boundary loops of a wallpaper group.
pub fn analyze_wallpaper(g: &CrystGroup<2>) -> Result<WallpaperAnalysis> {
    let lattice = positively_oriented(g.lattice());
    let cosets: Vec<Affine2> = g
        .cosets()
        .iter()
        .map(|c| {
            let mut c = c.in_basis(&lattice);
            c.t = frac(&c.t);
            c
        })
        .collect();

    let mut cones = Vec::new();
    for p in rotation_centers(&cosets) {
        let stab = stabilizer(&cosets, &p);
        if stab.iter().any(|s| s.det() < Q::zero()) {
            continue;
        }
        let (order, rotation) = minimal_rotation(&stab)?;
        cones.push(SingularPoint { point: p, order, rotation });
    }

    let classes = mirror_classes(&cosets);
    let normals: BTreeSet<[i64; 2]> = classes.iter().map(|(nu, _)| *nu).collect();
    let mut boundaries = Vec::new();
    if normals.len() == 1 {
        let mut rest = classes.clone();
        while let Some(line) = rest.iter().next().cloned() {
            for c in &cosets {
                rest.remove(&image_line(c, &line));
            }
            let nu = line.0;
            let d = [Q::from(-nu[1]), Q::from(nu[0])];
            boundaries.push(BoundaryLoop { corners: vec![], delta: Affine::translation(d) });
        }
    } else if normals.len() > 1 {
        boundaries.push(polygon_boundary(&cosets, &classes)?);
    }

    let one = Q::one();
    let mut chi = Q::zero();
    for c in &cones {
        chi += one - Q::new(1, c.order as i64);
    }
    for c in boundaries.iter().flat_map(|b| &b.corners) {
        chi += (one - Q::new(1, c.order as i64)) / 2;
    }
    if !chi.is_integer() {
        return Err(Error::Geometry(format!("underlying surface has non-integral Euler characteristic {chi}")));
    }
    let chi = chi.to_integer();
    let b = boundaries.len() as i64;
    let orientable = cosets.iter().all(|c| c.det() == one);
    let (handles, crosscaps) = match (b, 2 - chi - b) {
        (0, genus) if orientable && genus % 2 == 0 => (genus / 2, 0),
        (0, p) if !orientable => (0, p),
        (_, 0) if b > 0 => (0, 0),
        (_, 1) if b > 0 => (0, 1),
        _ => return Err(Error::Geometry("inconsistent underlying surface".into())),
    };
    if handles < 0 || crosscaps < 0 {
        return Err(Error::Geometry("inconsistent underlying surface".into()));
    }
    Ok(WallpaperAnalysis {
        lattice,
        cosets,
        handles: handles as u32,
        crosscaps: crosscaps as u32,
        cones,
        boundaries,
    })
}

fn polygon_boundary(cosets: &[Affine2], classes: &BTreeSet<LineClass>) -> Result<BoundaryLoop> {
    let verts = chamber(classes)?;
    let k = verts.len();
    let n = Q::from(k as i64);
    let centroid = [verts.iter().map(|v| v[0]).sum::<Q>() / n, verts.iter().map(|v| v[1]).sum::<Q>() / n];
    let stab = stabilizer(cosets, &centroid);
    if stab.iter().any(|s| s.det() < Q::zero()) {
        return Err(Error::Geometry("a reflection fixes the chamber".into()));
    }
    let s = stab.len();
    if k % s != 0 {
        return Err(Error::Geometry("chamber symmetry does not divide its vertices".into()));
    }
    let h = k / s;
    let r = if s > 1 { minimal_rotation(&stab)?.1 } else { Affine::identity() };
    if r.apply(&verts[0]) != verts[h % k] {
        return Err(Error::Geometry("chamber rotation does not advance by one boundary period".into()));
    }
    let corners = (1..=h)
        .map(|j| {
            let p = verts[j % k];
            let (order, rotation) = minimal_rotation(&stabilizer(cosets, &p))?;
            Ok(SingularPoint { point: p, order, rotation })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryLoop { corners, delta: r.inverse() })
}

/// Quotient orbifold of a wallpaper group.
pub fn classify_wallpaper(g: &CrystGroup<2>) -> Result<Orbifold2Symbol> {
    analyze_wallpaper(g)?.base()
}

/// Wallpaper group elements matched with the generators of the orbifold
/// presentation of a flat base.
#[derive(Clone, Debug, Serialize)]
pub struct WallpaperRealization {
    pub names: Vec<String>,
    pub elements: Vec<Affine2>,
}

impl WallpaperRealization {
    pub fn group(&self) -> Result<CrystGroup<2>> {
        CrystGroup::from_affine(&self.elements)
    }
}

fn m2(a: i64, b: i64, c: i64, d: i64) -> Matrix<2> {
    [[Q::from(a), Q::from(b)], [Q::from(c), Q::from(d)]]
}

fn pt(a: (i64, i64), b: (i64, i64)) -> Vector<2> {
    [Q::new(a.0, a.1), Q::new(b.0, b.1)]
}

/// Isometry with linear part `a` fixing `p`.
fn about(a: Matrix<2>, p: Vector<2>) -> Affine2 {
    Affine::new(a, linalg::sub(&p, &mat_vec(&a, &p)))
}

fn power(a: &Matrix<2>, k: usize) -> Matrix<2> {
    (0..k).fold(identity(), |acc, _| mat_mul(&acc, a))
}

/// Explicit wallpaper group for each of the 17 flat bases. Rotations attached
/// to cone generators are positive; chamber edges run counterclockwise so that
/// `r_{j-1} r_j` is the positive rotation at corner `j`. Hexagonal groups use
/// coordinates in a basis `a1, a2` with a 120 degree angle.
pub fn flat_realization(base: &Orbifold2Symbol) -> Result<WallpaperRealization> {
    if geometry_class(base) != BaseGeometry::Flat {
        return Err(Error::Geometry(format!("{base} is not flat")));
    }
    let zero = pt((0, 1), (0, 1));
    let tr = |x: (i64, i64), y: (i64, i64)| Affine::translation(pt(x, y));
    let i2 = identity::<2>();
    let neg = m2(-1, 0, 0, -1);
    let mx = m2(1, 0, 0, -1);
    let my = m2(-1, 0, 0, 1);
    let md = m2(0, 1, 1, 0);
    let r4 = m2(0, -1, 1, 0);
    let r6 = m2(1, -1, 1, 0);
    let r3 = power(&r6, 2);
    let m1 = m2(1, -1, 0, -1);
    let hexm = |k: usize| mat_mul(&power(&r6, k), &m1);
    let inv = |g: &Affine2| g.inverse();
    let closing = |gs: &[Affine2]| gs.iter().fold(Affine::identity(), |acc, g| acc.compose(g)).inverse();

    let elements: Vec<Affine2> = match (base.handles(), base.crosscaps(), base.cones(), base.boundaries()) {
        (1, 0, [], []) => vec![tr((1, 1), (0, 1)), tr((0, 1), (1, 1))],
        (0, 2, [], []) => vec![Affine::new(mx, pt((1, 2), (0, 1))), Affine::new(mx, pt((-1, 2), (1, 2)))],
        (0, 1, [], [c]) if c.is_empty() => {
            let z = Affine::new(mx, pt((1, 2), (1, 2)));
            let d = inv(&z.compose(&z));
            vec![z, Affine::new(mx, zero), d]
        }
        (0, 0, [], [a, b]) if a.is_empty() && b.is_empty() => vec![
            Affine::new(mx, zero),
            tr((1, 1), (0, 1)),
            Affine::new(mx, pt((0, 1), (1, 1))),
            tr((-1, 1), (0, 1)),
        ],
        (0, 0, [2, 2], [c]) if c.is_empty() => {
            let g1 = Affine::new(neg, pt((0, 1), (1, 2)));
            let g2 = Affine::new(neg, pt((1, 1), (1, 2)));
            let d = closing(&[g1, g2]);
            vec![g1, g2, Affine::new(mx, zero), d]
        }
        (0, 1, [2, 2], []) => {
            let z = Affine::new(my, pt((1, 2), (1, 2)));
            vec![z, Affine::new(neg, zero), Affine::new(neg, pt((0, 1), (1, 1)))]
        }
        (0, 0, [2, 2, 2, 2], []) => [(0, 0), (1, 0), (1, 1), (0, 1)]
            .iter()
            .map(|&(x, y)| about(neg, pt((x, 2), (y, 2))))
            .collect(),
        (0, 0, [3, 3, 3], []) => {
            let g1 = Affine::new(r3, zero);
            let g2 = Affine::new(r3, pt((1, 1), (0, 1)));
            vec![g1, g2, closing(&[g1, g2])]
        }
        (0, 0, [4, 4, 2], []) => {
            let g1 = Affine::new(r4, zero);
            let g2 = Affine::new(r4, pt((1, 1), (0, 1)));
            vec![g1, g2, closing(&[g1, g2])]
        }
        (0, 0, [6, 3, 2], []) => {
            let g1 = Affine::new(r6, zero);
            let g2 = Affine::new(r3, pt((1, 1), (0, 1)));
            vec![g1, g2, closing(&[g1, g2])]
        }
        (0, 0, [], [c]) if c.as_slice() == [2, 2, 2, 2] => {
            let r0 = about(mx, zero);
            vec![
                r0,
                about(my, pt((1, 2), (0, 1))),
                about(mx, pt((0, 1), (1, 2))),
                about(my, zero),
                r0,
                Affine::identity(),
            ]
        }
        (0, 0, [], [c]) if c.as_slice() == [4, 4, 2] => {
            let r0 = about(my, pt((1, 2), (0, 1)));
            vec![r0, about(md, zero), about(mx, zero), r0, Affine::identity()]
        }
        (0, 0, [], [c]) if c.as_slice() == [3, 3, 3] => {
            let r0 = about(hexm(0), zero);
            vec![r0, about(hexm(4), pt((1, 1), (0, 1))), about(hexm(2), zero), r0, Affine::identity()]
        }
        (0, 0, [], [c]) if c.as_slice() == [6, 3, 2] => {
            let r0 = about(hexm(1), zero);
            vec![r0, about(hexm(0), zero), about(hexm(4), pt((1, 1), (0, 1))), r0, Affine::identity()]
        }
        (0, 0, [2], [c]) if c.as_slice() == [2, 2] => {
            let g = about(neg, pt((1, 2), (1, 4)));
            vec![g, about(mx, zero), about(my, pt((1, 1), (0, 1))), about(mx, pt((0, 1), (1, 2))), inv(&g)]
        }
        (0, 0, [3], [c]) if c.as_slice() == [3] => {
            let g = about(r3, pt((2, 3), (1, 3)));
            vec![g, about(hexm(0), zero), about(hexm(4), pt((1, 1), (0, 1))), inv(&g)]
        }
        (0, 0, [4], [c]) if c.as_slice() == [2] => {
            let g = about(r4, pt((1, 4), (1, 4)));
            vec![g, about(mx, zero), about(my, pt((1, 2), (0, 1))), inv(&g)]
        }
        _ => return Err(Error::Geometry(format!("no wallpaper realization for {base}"))),
    };
    let _ = i2;
    let pres = fundamental_group_presentation(base);
    let names: Vec<String> = pres.generators.iter().map(|g| g.name.clone()).collect();
    debug_assert_eq!(names.len(), elements.len());
    Ok(WallpaperRealization { names, elements })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::euclid::examples::{square_of_mirrors, two_half_turns_and_a_mirror};
    use crate::notation::parse_base;
    use crate::q;

    pub(crate) const FLAT: [&str; 17] = [
        "o", "xx", "*x", "**", "22*", "22x", "2222", "333", "442", "632", "*2222", "*442", "*333",
        "*632", "2*22", "3*3", "4*2",
    ];

    #[test]
    fn realizations_satisfy_presentations() {
        for b in FLAT {
            let base = parse_base(b).unwrap();
            let real = flat_realization(&base).unwrap();
            let pres = fundamental_group_presentation(&base);
            assert_eq!(real.elements.len(), pres.generators.len(), "{b}");
            for (g, e) in pres.generators.iter().zip(&real.elements) {
                let sign = if g.orientation == 1 { q(1, 1) } else { q(-1, 1) };
                assert_eq!(e.det(), sign, "{b} {}", g.name);
            }
            for r in &pres.relations {
                let w = r.word.iter().fold(Affine::identity(), |acc: Affine2, l| {
                    let e = real.elements[l.generator];
                    acc.compose(&if l.inverse { e.inverse() } else { e })
                });
                assert_eq!(w, Affine::identity(), "{b}: {}", r.label);
            }
        }
    }

    #[test]
    fn realizations_have_the_right_quotient() {
        for b in FLAT {
            let base = parse_base(b).unwrap();
            let g = flat_realization(&base).unwrap().group().unwrap();
            assert_eq!(classify_wallpaper(&g).unwrap(), base, "{b}");
        }
    }

    fn g2(gens: &[(Matrix<2>, Vector<2>)]) -> CrystGroup<2> {
        let gens: Vec<Affine2> = gens.iter().map(|(a, t)| Affine::new(*a, *t)).collect();
        CrystGroup::from_isometries(&gens).unwrap()
    }

    #[test]
    fn figure_groups() {
        assert_eq!(classify_wallpaper(&square_of_mirrors()).unwrap().to_string(), "*2222");
        assert_eq!(classify_wallpaper(&two_half_turns_and_a_mirror()).unwrap().to_string(), "22*");
    }

    #[test]
    fn horizontal_groups_of_half_turn_lattices() {
        // a = 0, b = 1, direction e2
        let g = g2(&[
            (m2(-1, 0, 0, 1), pt((0, 1), (0, 1))),
            (m2(-1, 0, 0, 1), pt((1, 1), (1, 2))),
            (m2(1, 0, 0, -1), pt((0, 1), (0, 1))),
            (m2(1, 0, 0, 1), pt((0, 1), (1, 1))),
        ]);
        assert_eq!(classify_wallpaper(&g).unwrap().to_string(), "2*22");
        // a = b = 1, direction e1
        let g = g2(&[
            (m2(-1, 0, 0, 1), pt((1, 2), (1, 2))),
            (m2(-1, 0, 0, 1), pt((1, 2), (1, 2))),
            (m2(-1, 0, 0, -1), pt((0, 1), (0, 1))),
            (m2(1, 0, 0, 1), pt((0, 1), (1, 1))),
        ]);
        assert_eq!(classify_wallpaper(&g).unwrap().to_string(), "22x");
    }

    #[test]
    fn chamber_vertices_run_counterclockwise() {
        let base = parse_base("*632").unwrap();
        let g = flat_realization(&base).unwrap().group().unwrap();
        let a = analyze_wallpaper(&g).unwrap();
        let corners = &a.boundaries[0].corners;
        let p: Vec<_> = corners.iter().map(|c| c.point).collect();
        let area = cross(&linalg::sub(&p[1], &p[0]), &linalg::sub(&p[2], &p[0]));
        assert!(area > q(0, 1));
    }
}
