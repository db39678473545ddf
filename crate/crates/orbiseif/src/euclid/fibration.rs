use num_traits::{One, Zero};
use serde::Serialize;

use super::group::{is_invariant_direction, CrystGroup};
use super::linalg::{self, column, det, from_columns, inverse, lattice_basis, mat_mul, to_q, Matrix, Vector};
use super::wallpaper::{analyze_wallpaper, flat_realization, WallpaperAnalysis};
use super::{Affine, Affine2, Affine3, ProductIsometry};
use crate::holonomy::{build_psi, CircleIsometry, LineIsometry};
use crate::notation::BoundaryInvariants;
use crate::seifert::check_invariant_relation;
use crate::{Error, LocalInvariant, Result, SeifertSymbol, Q};

/// Adapted coordinates `x = P y` for a preserved direction: the first two
/// columns of `P` span a complement, the third is the primitive lattice vector
/// along the direction, with `det P > 0`.
fn vertical_frame(g: &CrystGroup<3>, v: &[i64; 3]) -> Result<Matrix<3>> {
    let vq = to_q(v);
    if v.iter().all(|x| *x == 0) {
        return Err(Error::Semantic("direction must be nonzero".into()));
    }
    if !is_invariant_direction(g, &vq) {
        return Err(Error::NotInvariant(format!("{v:?} is moved by the point group")));
    }
    let nonzero: Vec<usize> = (0..3).filter(|&i| v[i] != 0).collect();
    let (w1, w2): (Vector<3>, Vector<3>) = if nonzero.len() == 1 {
        let others: Vec<usize> = (0..3).filter(|&i| i != nonzero[0]).collect();
        let e = |i: usize| std::array::from_fn(|k| Q::from((k == i) as i64));
        (e(others[0]), e(others[1]))
    } else {
        let ns = linalg::nullspace(&[vq.to_vec()], 3);
        ([ns[0][0], ns[0][1], ns[0][2]], [ns[1][0], ns[1][1], ns[1][2]])
    };
    let p = from_columns(&[w1, w2, vq]);
    let pi = inverse(&p).expect("frame is a basis");
    for a in g.point_group() {
        let b = mat_mul(&pi, &mat_mul(&a, &p));
        if !(b[2][0].is_zero() && b[2][1].is_zero()) {
            return Err(Error::NotInvariant(format!("the complement of {v:?} is not preserved")));
        }
    }
    let mut u = g
        .primitive_translation_along(&vq)
        .ok_or_else(|| Error::NoVerticalTranslation(format!("{v:?}")))?;
    if det(&from_columns(&[w1, w2, u])) < Q::zero() {
        u = linalg::scale(-Q::one(), &u);
    }
    Ok(from_columns(&[w1, w2, u]))
}

fn generators_with_lattice(g: &CrystGroup<3>) -> Vec<Affine3> {
    let mut gens = g.generators().to_vec();
    gens.extend((0..3).map(|j| Affine::translation(column(g.lattice(), j))));
    gens
}

fn horizontal(g: &Affine3) -> Affine2 {
    Affine::new([[g.a[0][0], g.a[0][1]], [g.a[1][0], g.a[1][1]]], [g.t[0], g.t[1]])
}

/// Projection of a space group to the isometries of the plane transverse to
/// `v`, written in the adapted coordinates of [`vertical_frame`].
pub fn horizontal_group(g: &CrystGroup<3>, v: &[i64; 3]) -> Result<CrystGroup<2>> {
    let p = vertical_frame(g, v)?;
    let gens: Vec<Affine2> = generators_with_lattice(g).iter().map(|x| horizontal(&x.in_basis(&p))).collect();
    CrystGroup::from_affine(&gens)
}

/// Holonomy data of the fibration by lines parallel to a preserved direction.
#[derive(Clone, Debug, Serialize)]
pub struct FibrationData {
    pub symbol: SeifertSymbol,
    pub horizontal: WallpaperAnalysis,
    /// Circle isometry of each cone rotation, then of each corner rotation and
    /// boundary loop.
    pub cone_holonomy: Vec<CircleIsometry>,
    pub boundary_holonomy: Vec<CircleIsometry>,
}

struct Lifter {
    group: CrystGroup<3>,
    /// Hermite rows of the translation lattice.
    rows: Vec<Vector<3>>,
}

impl Lifter {
    /// Image in `Isom(S^1)` of the elements with horizontal part `h`.
    fn lift(&self, h: &Affine2) -> Result<CircleIsometry> {
        let (r0, r1) = (self.rows[0], self.rows[1]);
        let mut found: Option<CircleIsometry> = None;
        for c in self.group.cosets() {
            if horizontal(c).a != h.a {
                continue;
            }
            let n = linalg::sub(&h.t, &[c.t[0], c.t[1]]);
            let a = n[0] / r0[0];
            if !a.is_integer() {
                continue;
            }
            let b = (n[1] - a * r0[1]) / r1[1];
            if !b.is_integer() {
                continue;
            }
            let z = c.t[2] + a * r0[2] + b * r1[2];
            let circle = LineIsometry { t: z, preserving: c.a[2][2] == Q::one() }.to_circle();
            match found {
                Some(prev) if prev != circle => {
                    return Err(Error::Geometry(
                        "the fibers are not the orbits of the vertical translations".into(),
                    ))
                }
                _ => found = Some(circle),
            }
        }
        found.ok_or_else(|| Error::LiftNotFound(format!("{h}")))
    }
}

fn local_invariant(psi: &CircleIsometry, n: u32) -> Result<LocalInvariant> {
    if !psi.preserving {
        return Err(Error::Scope("rotation lifts to a fiber-reversing map".into()));
    }
    let m = -psi.t * Q::from(n as i64);
    if !m.is_integer() {
        return Err(Error::Geometry(format!("holonomy {psi} has order not dividing {n}")));
    }
    Ok(LocalInvariant::new(m.to_integer().rem_euclid(n as i64) as u32, n))
}

/// Full fibration data for the direction `v`.
pub fn fibration_data(g: &CrystGroup<3>, v: &[i64; 3]) -> Result<FibrationData> {
    if !g.is_orientation_preserving() {
        return Err(Error::Scope("orientation-reversing space groups are out of scope".into()));
    }
    let p = vertical_frame(g, v)?;
    let gens = generators_with_lattice(g);
    let gh: Vec<Affine2> = gens.iter().map(|x| horizontal(&x.in_basis(&p))).collect();
    let analysis = analyze_wallpaper(&CrystGroup::from_affine(&gh)?)?;
    let m = analysis.lattice;
    let z = Q::zero();
    let full = mat_mul(&p, &[[m[0][0], m[0][1], z], [m[1][0], m[1][1], z], [z, z, Q::one()]]);
    let group = CrystGroup::from_affine(&gens.iter().map(|x| x.in_basis(&full)).collect::<Vec<_>>())?;
    let cols: Vec<Vector<3>> = (0..3).map(|j| column(group.lattice(), j)).collect();
    let rows = lattice_basis(&cols);
    if rows.len() != 3 || rows[2] != [z, z, Q::one()] {
        return Err(Error::NoVerticalTranslation("fiber translation is not primitive".into()));
    }
    let lifter = Lifter { group, rows };

    let mut cone_holonomy = Vec::new();
    let mut cones = Vec::new();
    for c in &analysis.cones {
        let psi = lifter.lift(&c.rotation)?;
        cones.push(local_invariant(&psi, c.order)?);
        cone_holonomy.push(psi);
    }
    let mut boundary_holonomy = Vec::new();
    let mut boundaries = Vec::new();
    for b in &analysis.boundaries {
        let mut corners = Vec::new();
        let mut sigma = Q::zero();
        for c in &b.corners {
            let psi = lifter.lift(&c.rotation)?;
            let inv = local_invariant(&psi, c.order)?;
            sigma += inv.value();
            corners.push(inv);
            boundary_holonomy.push(psi);
        }
        let delta = lifter.lift(&b.delta)?;
        boundary_holonomy.push(delta);
        if !delta.preserving {
            return Err(Error::Geometry("boundary loop reverses the fiber".into()));
        }
        let xi = -Q::from(2) * delta.t - sigma;
        if !xi.is_integer() {
            return Err(Error::Geometry(format!("boundary holonomy {delta} is inconsistent with its corners")));
        }
        boundaries.push(BoundaryInvariants { xi: xi.to_integer().rem_euclid(2) as u8, corners });
    }
    let symbol = SeifertSymbol::new(analysis.handles, analysis.crosscaps, cones, boundaries, Q::zero())?;
    if !check_invariant_relation(&symbol).is_valid() {
        return Err(Error::Geometry(format!("induced symbol {symbol} violates the invariant relation")));
    }
    Ok(FibrationData { symbol, horizontal: analysis, cone_holonomy, boundary_holonomy })
}

/// Seifert fibration induced on `R^3 / G` by the lines parallel to `v`.
pub fn induced_fibration(g: &CrystGroup<3>, v: &[i64; 3]) -> Result<SeifertSymbol> {
    Ok(fibration_data(g, v)?.symbol)
}

/// Space group `pi_1 x Z` acting on `R^2 x R` whose vertical fibration is `s`:
/// the wallpaper realization of the base paired with the standard holonomy
/// lifted to the line.
pub fn realize_flat_fibration(s: &SeifertSymbol) -> Result<CrystGroup<3>> {
    let (pres, psi) = build_psi(s)?;
    let real = flat_realization(&s.base())?;
    if real.names != psi.names {
        return Err(Error::Geometry("realization does not match the presentation".into()));
    }
    debug_assert_eq!(pres.generators.len(), real.elements.len());
    let mut gens: Vec<Affine3> = real
        .elements
        .iter()
        .zip(&psi.values)
        .map(|(h, c)| ProductIsometry { horizontal: *h, vertical: LineIsometry::lift(c) }.to_affine())
        .collect();
    gens.push(Affine::translation([Q::zero(), Q::zero(), Q::one()]));
    CrystGroup::from_affine(&gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::examples::{klein_screw_group, klein_square_group};
    use crate::notation::parse_fibration;
    use crate::notation::parse_base;
    use crate::seifert::{enumerate_fibrations, normalize};

    fn expect(g: &CrystGroup<3>, v: [i64; 3], text: &str) {
        let got = induced_fibration(g, &v).unwrap();
        assert_eq!(normalize(&got), normalize(&parse_fibration(text).unwrap()), "{v:?}: got {got}");
    }

    #[test]
    fn three_fibrations_of_one_space_group() {
        expect(&klein_screw_group(0, 0), [0, 0, 1], "(2_0 2_0 *)");
        expect(&klein_screw_group(0, 0), [0, 1, 0], "(*_0 2_1 2_1 2_1 2_1)");
        expect(&klein_screw_group(0, 1), [0, 1, 0], "(2_1 *_0 2_1 2_1)");
        expect(&klein_screw_group(1, 1), [1, 0, 0], "(2_0 2_0 x)");
    }

    #[test]
    fn lifted_square_of_mirrors() {
        let g = klein_square_group();
        expect(&g, [0, 0, 1], "(*_1 2_0 2_0 2_1 2_1)");
        expect(&g, [0, 1, 0], "(2_0 *_0 2_0 2_0)");
    }

    #[test]
    fn moved_directions_are_rejected() {
        assert!(matches!(induced_fibration(&klein_screw_group(0, 0), &[1, 1, 0]), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn flat_fibrations_survive_a_round_trip() {
        for b in super::super::wallpaper::tests::FLAT {
            for s in enumerate_fibrations(&parse_base(b).unwrap()).unwrap() {
                let g = realize_flat_fibration(&s).unwrap();
                let back = induced_fibration(&g, &[0, 0, 1]).unwrap();
                assert_eq!(normalize(&back), normalize(&s), "{b}: {s}");
            }
        }
    }
}
