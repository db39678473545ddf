//! Exact symbolic toolkit for Seifert fibered 3-orbifolds.
//!
//! The crate represents closed 2-orbifolds and Seifert fibrations over them in
//! Conway and standard notation, enumerates the fibrations with vanishing Euler
//! number over flat, spherical and bad bases, and sorts them into
//! orientation-preserving diffeomorphism classes. Every answer is backed by an
//! independent computation: holonomy representations into `Isom(S^1)`,
//! crystallographic groups over the rationals, singular-locus graphs and finite
//! group invariants.
//!
//! All arithmetic is exact; rationals are [`Q`] = `Ratio<i64>`.

pub mod batch;
pub mod classify;
pub mod error;
pub mod euclid;
pub mod holonomy;
pub mod notation;
pub mod orbifold2;
pub mod seifert;
pub mod singular;

pub use error::{Error, Result};
pub use notation::{LocalInvariant, Orbifold2Symbol, SeifertSymbol, Style};

/// Exact rational number used throughout the crate.
pub type Q = num_rational::Ratio<i64>;

/// Shorthand for `Q::new(n, d)`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: i64 = num.parse().ok()?;
    let den: i64 = den.parse().ok()?;
    if den == 0 {
        return None;
    }
    Some(Q::new(num, den))
}

pub(crate) mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}
