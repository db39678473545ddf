use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::linalg::{
    self, column, frac, from_columns, identity, inverse, is_orthogonal, lattice_basis, mat_mul,
    mat_sub, mat_vec, nullspace, primitive_integer, to_q, Matrix, Vector,
};
use super::Affine;
use crate::{Error, Orbifold2Symbol, Result, Q};

/// Largest point group allowed before closure is declared divergent.
const POINT_GROUP_BOUND: usize = 48;

/// Crystallographic group: generators, a basis of the translation lattice and
/// one representative per point-group element (the first is the identity).
#[derive(Clone, Debug, Serialize)]
pub struct CrystGroup<const N: usize> {
    generators: Vec<Affine<N>>,
    #[serde(serialize_with = "ser_matrix")]
    lattice: Matrix<N>,
    cosets: Vec<Affine<N>>,
}

fn ser_matrix<const N: usize, S: serde::Serializer>(
    m: &Matrix<N>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(N))?;
    for j in 0..N {
        let col: Vec<String> = column(m, j).iter().map(crate::fmt_q).collect();
        seq.serialize_element(&col)?;
    }
    seq.end()
}

impl<const N: usize> CrystGroup<N> {
    /// Closure of a set of Euclidean isometries; linear parts must be orthogonal.
    pub fn from_isometries(gens: &[Affine<N>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !is_orthogonal(&g.a)) {
            return Err(Error::Semantic(format!("linear part of {g} is not orthogonal")));
        }
        Self::from_affine(gens)
    }

    /// Closure of affine maps whose linear parts generate a finite group, as
    /// arise from isometries written in lattice coordinates.
    pub fn from_affine(gens: &[Affine<N>]) -> Result<Self> {
        let mut cosets: Vec<Affine<N>> = vec![Affine::identity()];
        let mut index: HashMap<Matrix<N>, usize> = HashMap::from([(identity(), 0)]);
        let mut translations: Vec<Vector<N>> = Vec::new();
        let mut i = 0;
        while i < cosets.len() {
            for g in gens {
                let prod = g.compose(&cosets[i]);
                match index.get(&prod.a) {
                    Some(&j) => {
                        // Schreier generator: a pure translation
                        let tr = prod.compose(&cosets[j].inverse());
                        if !tr.t.iter().all(Zero::is_zero) {
                            translations.push(tr.t);
                        }
                    }
                    None => {
                        if finite_order(&prod.a, MAX_ELEMENT_ORDER).is_none() {
                            return Err(Error::Closure(format!(
                                "linear part of {prod} has infinite order"
                            )));
                        }
                        if cosets.len() == POINT_GROUP_BOUND {
                            return Err(Error::Closure(format!(
                                "closure did not stabilize within {POINT_GROUP_BOUND} point-group elements"
                            )));
                        }
                        index.insert(prod.a, cosets.len());
                        cosets.push(prod);
                    }
                }
            }
            i += 1;
        }
        let basis = lattice_basis(&translations);
        if basis.len() < N {
            return Err(Error::Closure(format!("lattice rank {} < {N}", basis.len())));
        }
        let cols: [Vector<N>; N] = std::array::from_fn(|k| basis[k]);
        let lattice = from_columns(&cols);
        let mut group = CrystGroup { generators: gens.to_vec(), lattice, cosets };
        for k in 0..group.cosets.len() {
            let t = group.reduce(&group.cosets[k].t);
            group.cosets[k].t = t;
        }
        Ok(group)
    }

    pub fn generators(&self) -> &[Affine<N>] {
        &self.generators
    }

    /// Columns are a basis of the translation lattice.
    pub fn lattice(&self) -> &Matrix<N> {
        &self.lattice
    }

    pub fn cosets(&self) -> &[Affine<N>] {
        &self.cosets
    }

    pub fn point_group(&self) -> Vec<Matrix<N>> {
        self.cosets.iter().map(|c| c.a).collect()
    }

    pub fn lattice_coordinates(&self, v: &Vector<N>) -> Vector<N> {
        mat_vec(&inverse(&self.lattice).expect("lattice has full rank"), v)
    }

    pub fn is_lattice_vector(&self, v: &Vector<N>) -> bool {
        linalg::is_integral(&self.lattice_coordinates(v))
    }

    /// Representative of `v` modulo the lattice, in the fundamental cell.
    pub fn reduce(&self, v: &Vector<N>) -> Vector<N> {
        mat_vec(&self.lattice, &frac(&self.lattice_coordinates(v)))
    }

    pub fn coset_with_linear_part(&self, a: &Matrix<N>) -> Option<&Affine<N>> {
        self.cosets.iter().find(|c| c.a == *a)
    }

    pub fn contains(&self, g: &Affine<N>) -> bool {
        self.coset_with_linear_part(&g.a)
            .is_some_and(|c| self.is_lattice_vector(&linalg::sub(&g.t, &c.t)))
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.cosets.iter().all(|c| c.det() > Q::zero())
    }

    /// Primitive lattice vector along `v`, if `v` is nonzero.
    pub fn primitive_translation_along(&self, v: &Vector<N>) -> Option<Vector<N>> {
        let c = primitive_integer(&self.lattice_coordinates(v))?;
        let u = mat_vec(&self.lattice, &to_q(&c));
        // u is a multiple of v; keep the orientation of v
        Some(if linalg::dot(&u, v) > Q::zero() { u } else { linalg::scale(Q::from(-1), &u) })
    }
}

/// Crystallographic elements in dimension at most 3 have order at most 6.
const MAX_ELEMENT_ORDER: usize = 12;

fn finite_order<const N: usize>(a: &Matrix<N>, bound: usize) -> Option<usize> {
    let mut p = *a;
    for k in 1..=bound {
        if p == identity() {
            return Some(k);
        }
        p = mat_mul(&p, a);
    }
    None
}

fn element_order<const N: usize>(a: &Matrix<N>) -> usize {
    finite_order(a, MAX_ELEMENT_ORDER).expect("point-group elements have finite order")
}

/// Quotient `S^2 / rho(G)` for an orientation-preserving space group.
pub fn point_orbifold(g: &CrystGroup<3>) -> Result<Orbifold2Symbol> {
    if !g.is_orientation_preserving() {
        return Err(Error::Scope("orientation-reversing space groups are out of scope".into()));
    }
    let order = g.cosets.len();
    let max = g.cosets.iter().map(|c| element_order(&c.a)).max().unwrap_or(1);
    let cones = match (order, max) {
        (1, _) => vec![],
        (k, m) if m == k => vec![k as u32, k as u32],
        (12, 3) => vec![3, 3, 2],
        (24, 4) => vec![4, 3, 2],
        (k, m) if m == k / 2 => vec![m as u32, 2, 2],
        _ => return Err(Error::Geometry(format!("unrecognized point group of order {order}"))),
    };
    Orbifold2Symbol::new(0, 0, cones, vec![])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantDirections {
    /// Trivial point group: every direction.
    All,
    /// A single half-turn: its axis, and every direction in its `-1` eigenplane.
    AxisPlusPlane { axis: [i64; 3], plane: [[i64; 3]; 2] },
    Finite { directions: Vec<[i64; 3]> },
}

impl InvariantDirections {
    /// Rational directions worth trying: the finite list, or the axis and the
    /// two spanning vectors of the plane.
    pub fn sample(&self) -> Vec<[i64; 3]> {
        match self {
            InvariantDirections::All => vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            InvariantDirections::AxisPlusPlane { axis, plane } => vec![*axis, plane[0], plane[1]],
            InvariantDirections::Finite { directions } => directions.clone(),
        }
    }
}

fn eigenspace(a: &Matrix<3>, lambda: i64) -> Vec<Vec<Q>> {
    let m = mat_sub(a, &linalg::scale_matrix(Q::from(lambda), &identity()));
    nullspace(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 3)
}

fn intersect(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    // x = sum s_i a_i = sum t_j b_j; solve for (s, t)
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let ncols = a.len() + b.len();
    let rows: Vec<Vec<Q>> = (0..3)
        .map(|r| a.iter().map(|v| v[r]).chain(b.iter().map(|v| -v[r])).collect())
        .collect();
    let sols = nullspace(&rows, ncols);
    let spanning: Vec<Vec<Q>> = sols
        .iter()
        .map(|s| (0..3).map(|r| (0..a.len()).map(|i| s[i] * a[i][r]).sum()).collect())
        .collect();
    if spanning.is_empty() {
        return vec![];
    }
    // a basis of the span: complement of the complement
    nullspace(&nullspace(&spanning, 3), 3)
}

/// Lines through the origin preserved by every point-group element.
pub fn invariant_directions(g: &CrystGroup<3>) -> InvariantDirections {
    let mats = g.point_group();
    let nontrivial: Vec<&Matrix<3>> = mats.iter().filter(|a| **a != identity()).collect();
    if nontrivial.is_empty() {
        return InvariantDirections::All;
    }
    let prim = |v: &[Q]| primitive_integer(&[v[0], v[1], v[2]]).expect("nonzero eigenvector");
    if nontrivial.len() == 1 && element_order(nontrivial[0]) == 2 {
        let a = nontrivial[0];
        let axis = eigenspace(a, 1);
        let plane = eigenspace(a, -1);
        if axis.len() == 1 && plane.len() == 2 {
            return InvariantDirections::AxisPlusPlane {
                axis: prim(&axis[0]),
                plane: [prim(&plane[0]), prim(&plane[1])],
            };
        }
    }
    // every subspace that is an eigenspace intersection for all elements
    let mut spaces: Vec<Vec<Vec<Q>>> = vec![nullspace(&[], 3)];
    for a in &nontrivial {
        let mut next = Vec::new();
        for s in &spaces {
            for lambda in [1, -1] {
                let i = intersect(s, &eigenspace(a, lambda));
                if !i.is_empty() {
                    next.push(i);
                }
            }
        }
        spaces = next;
    }
    let mut directions: Vec<[i64; 3]> =
        spaces.iter().filter(|s| s.len() == 1).map(|s| prim(&s[0])).collect();
    directions.sort();
    directions.dedup();
    InvariantDirections::Finite { directions }
}

pub(crate) fn is_invariant_direction(g: &CrystGroup<3>, v: &Vector<3>) -> bool {
    g.point_group().iter().all(|a| {
        let w = mat_vec(a, v);
        // w parallel to v
        (0..3).all(|i| (0..3).all(|j| w[i] * v[j] == w[j] * v[i]))
    })
}
