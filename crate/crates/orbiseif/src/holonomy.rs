//! Holonomy representations `pi_1(B) -> Isom(S^1)` of Seifert fibrations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::orbifold2::{
    fundamental_group_presentation, geometry_class, BaseGeometry, Letter, Presentation,
};
use crate::seifert::check_invariant_relation;
use crate::{fmt_q, Error, Result, SeifertSymbol, Q};

/// `t+` is the rotation `theta -> theta + t`, `t-` the reflection
/// `theta -> t - theta`, with `t` taken mod 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircleIsometry {
    #[serde(with = "crate::serde_q")]
    pub t: Q,
    pub preserving: bool,
}

fn frac(x: Q) -> Q {
    x - x.floor()
}

impl CircleIsometry {
    pub fn rotation(t: Q) -> Self {
        CircleIsometry { t: frac(t), preserving: true }
    }

    pub fn reflection(t: Q) -> Self {
        CircleIsometry { t: frac(t), preserving: false }
    }

    pub fn identity() -> Self {
        Self::rotation(Q::from(0))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        if self.preserving {
            CircleIsometry { t: frac(self.t + other.t), preserving: other.preserving }
        } else {
            CircleIsometry { t: frac(self.t - other.t), preserving: !other.preserving }
        }
    }

    pub fn inverse(&self) -> Self {
        if self.preserving {
            Self::rotation(-self.t)
        } else {
            *self
        }
    }

    pub fn apply(&self, theta: Q) -> Q {
        if self.preserving {
            frac(theta + self.t)
        } else {
            frac(self.t - theta)
        }
    }

    pub fn order(&self) -> u64 {
        if self.preserving {
            *self.t.denom() as u64
        } else {
            2
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl fmt::Display for CircleIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", fmt_q(&self.t), if self.preserving { '+' } else { '-' })
    }
}

/// Isometry of the fiber line: `z -> z + t` or `z -> t - z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineIsometry {
    #[serde(with = "crate::serde_q")]
    pub t: Q,
    pub preserving: bool,
}

impl LineIsometry {
    pub fn translation(t: Q) -> Self {
        LineIsometry { t, preserving: true }
    }

    pub fn reflection(t: Q) -> Self {
        LineIsometry { t, preserving: false }
    }

    pub fn compose(&self, other: &Self) -> Self {
        if self.preserving {
            LineIsometry { t: self.t + other.t, preserving: other.preserving }
        } else {
            LineIsometry { t: self.t - other.t, preserving: !other.preserving }
        }
    }

    /// Image in `Isom(S^1)` for the circle `R / Z`.
    pub fn to_circle(&self) -> CircleIsometry {
        CircleIsometry { t: frac(self.t), preserving: self.preserving }
    }

    /// Lift with `0 <= t < 1`.
    pub fn lift(c: &CircleIsometry) -> Self {
        LineIsometry { t: c.t, preserving: c.preserving }
    }
}

/// Holonomy assignment, one isometry per presentation generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Psi {
    pub names: Vec<String>,
    pub values: Vec<CircleIsometry>,
}

impl Psi {
    pub fn get(&self, name: &str) -> Option<CircleIsometry> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    pub fn evaluate(&self, word: &[Letter]) -> CircleIsometry {
        word.iter().fold(CircleIsometry::identity(), |acc, l| {
            let v = self.values[l.generator];
            acc.compose(&if l.inverse { v.inverse() } else { v })
        })
    }

    /// Evaluates a word written with generator names, e.g. `"d1 r1.0 d1^-1"`.
    pub fn evaluate_text(&self, pres: &Presentation, text: &str) -> Result<CircleIsometry> {
        Ok(self.evaluate(&pres.parse_word(text)?))
    }
}

/// Standard holonomy of a valid fibration with `e = 0` over a good base.
pub fn build_psi(s: &SeifertSymbol) -> Result<(Presentation, Psi)> {
    if s.euler() != Q::from(0) {
        return Err(Error::Scope("holonomy is built only for e = 0".into()));
    }
    if !check_invariant_relation(s).is_valid() {
        return Err(Error::InvalidSymbol(format!("{s} violates the invariant relation")));
    }
    let base = s.base();
    if geometry_class(&base) == BaseGeometry::Bad {
        return Err(Error::Geometry(format!("{base} is a bad orbifold")));
    }
    let pres = fundamental_group_presentation(&base);
    let mut values = Vec::with_capacity(pres.generators.len());
    let zero = Q::from(0);
    for _ in 0..s.handles() {
        values.push(CircleIsometry::rotation(zero));
        values.push(CircleIsometry::rotation(zero));
    }
    for _ in 0..s.crosscaps() {
        values.push(CircleIsometry::reflection(zero));
    }
    for c in s.cone_invariants() {
        values.push(CircleIsometry::rotation(-c.value()));
    }
    for b in s.boundaries() {
        let mut t = zero;
        values.push(CircleIsometry::reflection(t));
        for c in &b.corners {
            t += c.value();
            values.push(CircleIsometry::reflection(t));
        }
        values.push(CircleIsometry::rotation(-(t + Q::from(b.xi as i64)) / 2));
    }
    let names = pres.generators.iter().map(|g| g.name.clone()).collect();
    Ok((pres, Psi { names, values }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RelationReport {
    Ok,
    Failed { relation: String, value: CircleIsometry },
}

/// Checks every relation, and that `psi` respects the orientation character.
pub fn verify_relations(pres: &Presentation, psi: &Psi) -> RelationReport {
    for (g, v) in pres.generators.iter().zip(&psi.values) {
        if v.preserving != (g.orientation == 1) {
            return RelationReport::Failed { relation: format!("character of {}", g.name), value: *v };
        }
    }
    for r in &pres.relations {
        let value = psi.evaluate(&r.word);
        if !value.is_identity() {
            return RelationReport::Failed { relation: r.label.clone(), value };
        }
    }
    RelationReport::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_fibration;

    #[test]
    fn composition_laws() {
        let a = CircleIsometry::rotation(Q::new(1, 3));
        let b = CircleIsometry::reflection(Q::new(1, 4));
        assert_eq!(a.compose(&b), CircleIsometry::reflection(Q::new(7, 12)));
        assert_eq!(b.compose(&a), CircleIsometry::reflection(Q::new(-1, 12)));
        assert_eq!(b.compose(&b), CircleIsometry::identity());
        assert_eq!(a.order(), 3);
        assert_eq!(a.to_string(), "1/3+");
        assert_eq!(b.to_string(), "1/4-");
    }

    #[test]
    fn compose_matches_action_on_points() {
        let xs = [CircleIsometry::rotation(Q::new(2, 5)), CircleIsometry::reflection(Q::new(1, 7))];
        for a in xs {
            for b in xs {
                for theta in [Q::from(0), Q::new(1, 3), Q::new(5, 6)] {
                    assert_eq!(a.compose(&b).apply(theta), a.apply(b.apply(theta)));
                }
            }
        }
    }

    #[test]
    fn holonomy_of_a_boundary() {
        let s = parse_fibration("(*_1 4_2 3_0 2_1)").unwrap();
        let (pres, psi) = build_psi(&s).unwrap();
        assert_eq!(psi.get("r1.0").unwrap().to_string(), "0-");
        assert_eq!(psi.get("r1.1").unwrap().to_string(), "1/2-");
        assert_eq!(psi.get("r1.2").unwrap().to_string(), "1/2-");
        let corner = psi.evaluate_text(&pres, "r1.0 r1.1").unwrap();
        assert_eq!(corner, CircleIsometry::rotation(Q::new(-1, 2)));
        assert_eq!(verify_relations(&pres, &psi), RelationReport::Ok);
    }

    #[test]
    fn cone_generators_rotate_backwards() {
        let s = parse_fibration("(3_1 3_2)").unwrap();
        let (pres, psi) = build_psi(&s).unwrap();
        assert_eq!(psi.get("g1").unwrap(), CircleIsometry::rotation(Q::new(-1, 3)));
        assert_eq!(verify_relations(&pres, &psi), RelationReport::Ok);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(build_psi(&parse_fibration("(3_1 6_4)").unwrap()), Err(Error::Geometry(_))));
        assert!(matches!(build_psi(&parse_fibration("(o);e=1").unwrap()), Err(Error::Scope(_))));
        let s = parse_fibration("(2_1 2_0 2_0 2_0)").unwrap();
        assert!(matches!(build_psi(&s), Err(Error::InvalidSymbol(_))));
        let (pres, psi) = build_psi(&parse_fibration("(o)").unwrap()).unwrap();
        assert!(matches!(psi.evaluate_text(&pres, "x1 q7"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn wrong_holonomy_is_detected() {
        let s = parse_fibration("(2_1 2_1 2_1 2_1)").unwrap();
        let (pres, mut psi) = build_psi(&s).unwrap();
        psi.values[0] = CircleIsometry::identity();
        assert!(matches!(verify_relations(&pres, &psi), RelationReport::Failed { .. }));
    }
}
