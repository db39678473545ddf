//! Crystallographic groups with rational coordinates: space and wallpaper
//! groups, point groups, invariant directions, horizontal parts and the
//! Seifert fibration induced by a preserved direction.

pub mod examples;
mod fibration;
mod group;
pub mod linalg;
mod wallpaper;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::holonomy::LineIsometry;
use crate::{fmt_q, parse_q, Error, Result, Q};
use linalg::{det, identity, inverse, mat_mul, mat_vec, zero_vec, Matrix, Vector};

pub use fibration::{fibration_data, horizontal_group, induced_fibration, realize_flat_fibration, FibrationData};
pub use group::{invariant_directions, point_orbifold, CrystGroup, InvariantDirections};
pub use wallpaper::{
    analyze_wallpaper, classify_wallpaper, flat_realization, BoundaryLoop, SingularPoint,
    WallpaperAnalysis, WallpaperRealization,
};

/// `x -> A x + t` with rational entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Affine<const N: usize> {
    pub a: Matrix<N>,
    pub t: Vector<N>,
}

pub type Affine2 = Affine<2>;
pub type Affine3 = Affine<3>;

impl<const N: usize> Affine<N> {
    pub fn new(a: Matrix<N>, t: Vector<N>) -> Self {
        Affine { a, t }
    }

    pub fn identity() -> Self {
        Affine { a: identity(), t: zero_vec() }
    }

    pub fn translation(t: Vector<N>) -> Self {
        Affine { a: identity(), t }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Affine { a: mat_mul(&self.a, &other.a), t: linalg::add(&mat_vec(&self.a, &other.t), &self.t) }
    }

    pub fn inverse(&self) -> Self {
        let ai = inverse(&self.a).expect("affine maps in a group are invertible");
        let t = mat_vec(&ai, &self.t);
        Affine { a: ai, t: std::array::from_fn(|i| -t[i]) }
    }

    pub fn apply(&self, x: &Vector<N>) -> Vector<N> {
        linalg::add(&mat_vec(&self.a, x), &self.t)
    }

    pub fn det(&self) -> Q {
        det(&self.a)
    }

    pub fn is_translation(&self) -> bool {
        self.a == identity()
    }

    /// Conjugate into the coordinates `x = P y`.
    pub fn in_basis(&self, p: &Matrix<N>) -> Self {
        let pi = inverse(p).expect("change of basis must be invertible");
        Affine { a: mat_mul(&pi, &mat_mul(&self.a, p)), t: mat_vec(&pi, &self.t) }
    }
}

fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

impl<const N: usize> Serialize for Affine<N> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Affine", 2)?;
        let a: Vec<Vec<String>> = self.a.iter().map(|r| fmt_vec(r)).collect();
        st.serialize_field("a", &a)?;
        st.serialize_field("t", &fmt_vec(&self.t))?;
        st.end()
    }
}

impl<const N: usize> fmt::Display for Affine<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.a.iter().map(|r| fmt_vec(r).join(" ")).collect();
        write!(f, "{} ; {}", rows.join(" | "), fmt_vec(&self.t).join(" "))
    }
}

/// Isometry of `R^2 x R` acting on both factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductIsometry {
    pub horizontal: Affine2,
    pub vertical: LineIsometry,
}

impl ProductIsometry {
    pub fn is_orientation_preserving(&self) -> bool {
        let h = self.horizontal.det() > Q::from(0);
        h == self.vertical.preserving
    }

    pub fn to_affine(&self) -> Affine3 {
        let h = &self.horizontal;
        let s = Q::from(if self.vertical.preserving { 1 } else { -1 });
        let z = Q::from(0);
        Affine {
            a: [[h.a[0][0], h.a[0][1], z], [h.a[1][0], h.a[1][1], z], [z, z, s]],
            t: [h.t[0], h.t[1], self.vertical.t],
        }
    }
}

/// Parses one generator per line, `"A11 A12 A13 | A21 A22 A23 | A31 A32 A33 ; t1 t2 t3"`.
/// Blank lines and `#` comments are skipped.
pub fn parse_generators(text: &str) -> Result<Vec<Affine3>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::syntax(start, format!("{msg} in {content:?}"));
        let (mat, vec) = content.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let rows: Vec<&str> = mat.split('|').collect();
        if rows.len() != 3 {
            return Err(bad("expected three matrix rows"));
        }
        let parse_row = |r: &str| -> Result<[Q; 3]> {
            let xs: Vec<Q> = r
                .split_whitespace()
                .map(|x| parse_q(x).ok_or_else(|| bad("bad rational")))
                .collect::<Result<_>>()?;
            xs.try_into().map_err(|_| bad("expected three entries"))
        };
        let a = [parse_row(rows[0])?, parse_row(rows[1])?, parse_row(rows[2])?];
        let t = parse_row(vec)?;
        out.push(Affine { a, t });
    }
    if out.is_empty() {
        return Err(Error::Semantic("no generators given".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn composition_order() {
        let rot = Affine { a: [[q(0, 1), q(-1, 1)], [q(1, 1), q(0, 1)]], t: [q(0, 1), q(0, 1)] };
        let tr = Affine2::translation([q(1, 1), q(0, 1)]);
        let x = [q(1, 1), q(0, 1)];
        assert_eq!(rot.compose(&tr).apply(&x), rot.apply(&tr.apply(&x)));
        assert_eq!(rot.compose(&rot.inverse()), Affine2::identity());
    }

    #[test]
    fn parse_fixture_lines() {
        let text = "# header\n-1 0 0 | 0 -1 0 | 0 0 1 ; 0 1/2 0\n\n1 0 0|0 1 0|0 0 1; 0 0 1 # vertical\n";
        let g = parse_generators(text).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].t, [q(0, 1), q(1, 2), q(0, 1)]);
        assert!(g[1].is_translation());
        assert!(matches!(parse_generators("1 0 0 | 0 1 0 ; 0 0 0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn product_orientation() {
        let h = Affine2::new([[q(1, 1), q(0, 1)], [q(0, 1), q(-1, 1)]], [q(0, 1); 2]);
        let p = ProductIsometry { horizontal: h, vertical: LineIsometry::reflection(q(0, 1)) };
        assert!(p.is_orientation_preserving());
        assert_eq!(p.to_affine().det(), q(1, 1));
    }
}
