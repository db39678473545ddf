//! Explicit space and wallpaper groups with point group of type `222`, whose
//! fibrations are known by hand. Used as fixtures by the tests and the CLI.

use super::group::CrystGroup;
use super::linalg::{Matrix, Vector};
use super::{Affine, Affine2, Affine3};
use crate::q;

fn diag(a: i64, b: i64, c: i64) -> Matrix<3> {
    let z = q(0, 1);
    [[q(a, 1), z, z], [z, q(b, 1), z], [z, z, q(c, 1)]]
}

fn v3(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> Vector<3> {
    [q(x.0, x.1), q(y.0, y.1), q(z.0, z.1)]
}

fn m2(a: i64, b: i64, c: i64, d: i64) -> Matrix<2> {
    [[q(a, 1), q(b, 1)], [q(c, 1), q(d, 1)]]
}

fn v2(x: (i64, i64), y: (i64, i64)) -> Vector<2> {
    [q(x.0, x.1), q(y.0, y.1)]
}

fn build3(gens: &[Affine3]) -> CrystGroup<3> {
    CrystGroup::from_isometries(gens).expect("fixture groups are discrete")
}

fn build2(gens: &[(Matrix<2>, Vector<2>)]) -> CrystGroup<2> {
    let gens: Vec<Affine2> = gens.iter().map(|(a, t)| Affine::new(*a, *t)).collect();
    CrystGroup::from_isometries(&gens).expect("fixture groups are discrete")
}

/// Half-turns about vertical axes through `(0, 1/2)` and `(1, 1/2)` with
/// vertical shifts `a/2` and `b/2`, the half-turn about the `x` axis, and the
/// unit vertical translation. For `a, b` in `{0, 1}`.
pub fn klein_screw_group(a: i64, b: i64) -> CrystGroup<3> {
    let am = diag(-1, -1, 1);
    let bm = diag(1, -1, -1);
    build3(&[
        Affine::new(am, v3((0, 1), (1, 2), (a, 2))),
        Affine::new(am, v3((1, 1), (1, 2), (b, 2))),
        Affine::new(bm, v3((0, 1), (0, 1), (0, 1))),
        Affine::translation(v3((0, 1), (0, 1), (1, 1))),
    ])
}

/// Half-turns about horizontal axes, lifting the square of mirrors with a
/// half-shift on one side, plus the unit vertical translation.
pub fn klein_square_group() -> CrystGroup<3> {
    let am = diag(1, -1, -1);
    let bm = diag(-1, 1, -1);
    build3(&[
        Affine::new(am, v3((0, 1), (0, 1), (0, 1))),
        Affine::new(bm, v3((1, 1), (0, 1), (1, 2))),
        Affine::new(am, v3((0, 1), (1, 1), (0, 1))),
        Affine::new(bm, v3((0, 1), (0, 1), (0, 1))),
        Affine::translation(v3((0, 1), (0, 1), (1, 1))),
    ])
}

/// Two half-turns at `(0, 1/2)` and `(1, 1/2)` and the mirror in the `x` axis.
pub fn two_half_turns_and_a_mirror() -> CrystGroup<2> {
    build2(&[
        (m2(-1, 0, 0, -1), v2((0, 1), (1, 2))),
        (m2(-1, 0, 0, -1), v2((1, 1), (1, 2))),
        (m2(1, 0, 0, -1), v2((0, 1), (0, 1))),
    ])
}

/// Reflections in the sides of the square with vertices at `0` or `1/2`.
pub fn square_of_mirrors() -> CrystGroup<2> {
    build2(&[
        (m2(-1, 0, 0, 1), v2((0, 1), (0, 1))),
        (m2(-1, 0, 0, 1), v2((1, 1), (0, 1))),
        (m2(1, 0, 0, -1), v2((0, 1), (0, 1))),
        (m2(1, 0, 0, -1), v2((0, 1), (1, 1))),
    ])
}
