//! Bulk enumeration, classification and holonomy checks over many bases.
//!
//! With the `parallel` feature (on by default) work is spread over a rayon
//! pool; [`Execution::Sequential`] and builds without the feature run the same
//! code on one thread. Results are returned in input order either way.

use serde::Serialize;

use crate::classify::{canonical_class, DiffeoClass};
use crate::holonomy::{build_psi, verify_relations, CircleIsometry, RelationReport};
use crate::notation::parse_base;
use crate::orbifold2::{geometry_class, BaseGeometry};
use crate::seifert::enumerate_fibrations;
use crate::{Orbifold2Symbol, Result, SeifertSymbol};

/// The 17 closed flat 2-orbifolds.
pub const FLAT_BASES: [&str; 17] = [
    "o", "xx", "*x", "**", "22*", "22x", "2222", "333", "442", "632", "*2222", "*442", "*333", "*632",
    "2*22", "3*3", "4*2",
];

/// Spherical bases with finitely many members.
pub const POLYHEDRAL_BASES: [&str; 7] = ["532", "*532", "432", "*432", "332", "*332", "3*2"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// `f` applied to every item, in order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

fn base(text: &str) -> Orbifold2Symbol {
    parse_base(text).expect("built-in base list")
}

pub fn flat_bases() -> Vec<Orbifold2Symbol> {
    FLAT_BASES.iter().map(|b| base(b)).collect()
}

/// Spherical bases of the form in the `S^2 x R` table with `n <= max_n`,
/// without repetitions (small `n` make several families coincide).
pub fn spherical_bases(max_n: u32) -> Vec<Orbifold2Symbol> {
    let mut out: Vec<Orbifold2Symbol> = POLYHEDRAL_BASES.iter().map(|b| base(b)).collect();
    let mut push = |b: Orbifold2Symbol| {
        if geometry_class(&b) == BaseGeometry::Spherical && !out.contains(&b) {
            out.push(b);
        }
    };
    for n in 1..=max_n {
        let mk = |cones: Vec<u32>, boundaries: Vec<Vec<u32>>, crosscaps: u32| {
            Orbifold2Symbol::new(0, crosscaps, cones, boundaries).expect("orders are positive")
        };
        if n >= 2 {
            push(mk(vec![2, 2, n], vec![], 0));
            push(mk(vec![], vec![vec![2, 2, n]], 0));
            push(mk(vec![2], vec![vec![n]], 0));
        }
        push(mk(vec![n, n], vec![], 0));
        push(mk(vec![], vec![vec![n, n]], 0));
        push(mk(vec![n], vec![vec![]], 0));
        push(mk(vec![n], vec![], 1));
    }
    out
}

/// Bad bases with cone or corner orders up to `max_n`.
pub fn bad_bases(max_n: u32) -> Vec<Orbifold2Symbol> {
    let mut out = Vec::new();
    for a in 2..=max_n {
        for b in 1..a {
            out.push(Orbifold2Symbol::new(0, 0, vec![a, b], vec![]).expect("orders are positive"));
            out.push(Orbifold2Symbol::new(0, 0, vec![], vec![vec![a, b]]).expect("orders are positive"));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseFibrations {
    pub base: Orbifold2Symbol,
    pub fibrations: Vec<SeifertSymbol>,
}

pub fn enumerate_all(bases: &[Orbifold2Symbol], exec: Execution) -> Result<Vec<BaseFibrations>> {
    exec.map(bases, |b| Ok(BaseFibrations { base: b.clone(), fibrations: enumerate_fibrations(b)? }))
        .into_iter()
        .collect()
}

pub fn classify_all(symbols: &[SeifertSymbol], exec: Execution) -> Vec<Result<DiffeoClass>> {
    exec.map(symbols, canonical_class)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiCheck {
    pub relations: RelationReport,
    /// Value of the relation that involves every generator.
    pub global: CircleIsometry,
}

impl PsiCheck {
    pub fn is_ok(&self) -> bool {
        self.relations == RelationReport::Ok && self.global == CircleIsometry::identity()
    }
}

pub fn verify_psi(s: &SeifertSymbol) -> Result<PsiCheck> {
    let (pres, psi) = build_psi(s)?;
    Ok(PsiCheck { relations: verify_relations(&pres, &psi), global: psi.evaluate(&pres.global_relation().word) })
}

pub fn verify_psi_all(symbols: &[SeifertSymbol], exec: Execution) -> Vec<Result<PsiCheck>> {
    exec.map(symbols, verify_psi)
}

/// Fibrations over a list of bases and the classes with several of them.
#[derive(Clone, Debug, Serialize)]
pub struct Atlas {
    pub bases: Vec<BaseFibrations>,
    pub multi_alias_classes: Vec<Vec<SeifertSymbol>>,
}

pub fn atlas(bases: &[Orbifold2Symbol], exec: Execution) -> Result<Atlas> {
    let per_base = enumerate_all(bases, exec)?;
    let all: Vec<SeifertSymbol> = per_base.iter().flat_map(|b| b.fibrations.clone()).collect();
    let classes = classify_all(&all, exec);
    let mut grouped: Vec<(SeifertSymbol, Vec<SeifertSymbol>)> = Vec::new();
    for (s, c) in all.iter().zip(classes) {
        let c = c?;
        match grouped.iter_mut().find(|(k, _)| *k == c.canonical) {
            Some((_, members)) => members.push(s.clone()),
            None => grouped.push((c.canonical, vec![s.clone()])),
        }
    }
    let multi_alias_classes = grouped.into_iter().filter(|(_, m)| m.len() > 1).map(|(_, m)| m).collect();
    Ok(Atlas { bases: per_base, multi_alias_classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let bases = spherical_bases(6);
        let a = enumerate_all(&bases, Execution::Parallel).unwrap();
        let b = enumerate_all(&bases, Execution::Sequential).unwrap();
        let names = |xs: &[BaseFibrations]| -> Vec<String> {
            xs.iter().flat_map(|x| x.fibrations.iter().map(|s| s.to_string())).collect()
        };
        assert_eq!(names(&a), names(&b));
    }

    #[test]
    fn small_n_coincidences_are_removed() {
        let bases = spherical_bases(2);
        let names: Vec<String> = bases.iter().map(|b| b.to_string()).collect();
        for b in ["*", "x", "222", "*222", "2*2", "22", "*22", "2*", "2x"] {
            assert_eq!(names.iter().filter(|n| *n == b).count(), 1, "{b} in {names:?}");
        }
    }

    #[test]
    fn every_flat_fibration_has_a_consistent_holonomy() {
        let atlas = atlas(&flat_bases(), Execution::default()).unwrap();
        let all: Vec<SeifertSymbol> = atlas.bases.iter().flat_map(|b| b.fibrations.clone()).collect();
        assert!(verify_psi_all(&all, Execution::default()).iter().all(|r| r.as_ref().unwrap().is_ok()));
        assert_eq!(atlas.multi_alias_classes.len(), 7);
    }
}
