//! Conway and standard notation for closed 2-orbifolds and Seifert fibrations.
//!
//! Conway spelling, ASCII form: `o` handle, a digit or `(12)` cone/corner order,
//! `*` boundary, `x` crosscap. Fibrations put the local invariant in a subscript
//! (`2_1`, `(12)_(11)`), the boundary invariant after the star (`*_1`) and an
//! optional Euler number after the closing parenthesis (`(3_1 3_2);e=1/3`).
//!
//! Standard spelling follows `(B; m/n,...; corners...; xi...; e)` with bases such
//! as `S2(4,4,2)`, `D2(2;2,2)` or `S1xI`.

use std::cmp::Reverse;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{fmt_q, parse_q, Error, Result, Q};

/// Output spelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Conway,
    Standard,
}

/// Local invariant `m/n` of a cone or corner point of order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalInvariant {
    pub m: u32,
    pub n: u32,
}

impl LocalInvariant {
    pub fn new(m: u32, n: u32) -> Self {
        assert!(n >= 1, "local invariant with order 0");
        LocalInvariant { m, n }
    }

    pub fn value(&self) -> Q {
        Q::new(self.m as i64, self.n as i64)
    }

    pub fn gcd(&self) -> u32 {
        self.m.gcd(&self.n)
    }

    /// Index of the singular fiber, `None` when the fiber is regular.
    pub fn singular_index(&self) -> Option<u32> {
        let g = self.gcd();
        (g > 1).then_some(g)
    }

    /// `m mod n` together with the number of whole units removed.
    pub fn reduced(&self) -> (LocalInvariant, u32) {
        (LocalInvariant::new(self.m % self.n, self.n), self.m / self.n)
    }

    pub fn is_normalized(&self) -> bool {
        self.m < self.n
    }
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

/// All rotations and reflections of a cyclic sequence.
pub(crate) fn dihedral_images<T: Clone>(seq: &[T]) -> Vec<Vec<T>> {
    let k = seq.len();
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::with_capacity(2 * k);
    for r in 0..k {
        let rot: Vec<T> = seq[r..].iter().chain(&seq[..r]).cloned().collect();
        let mut rev = rot.clone();
        rev.reverse();
        out.push(rot);
        out.push(rev);
    }
    out
}

fn order_key(seq: &[u32]) -> Vec<Reverse<u32>> {
    seq.iter().map(|&n| Reverse(n)).collect()
}

fn canonical_orders(seq: &[u32]) -> Vec<u32> {
    dihedral_images(seq).into_iter().min_by_key(|s| order_key(s)).unwrap()
}

type InvKey = (Vec<Reverse<u32>>, Vec<u32>);

fn inv_key(seq: &[LocalInvariant]) -> InvKey {
    (seq.iter().map(|c| Reverse(c.n)).collect(), seq.iter().map(|c| c.m).collect())
}

fn canonical_invariant_cycle(seq: &[LocalInvariant]) -> Vec<LocalInvariant> {
    dihedral_images(seq).into_iter().min_by_key(|s| inv_key(s)).unwrap()
}

/// Closed 2-orbifold. Stored in canonical form, so derived equality is equality
/// up to permuting cones, permuting boundaries and rotating or reflecting each
/// corner cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Orbifold2Repr")]
pub struct Orbifold2Symbol {
    handles: u32,
    crosscaps: u32,
    cones: Vec<u32>,
    boundaries: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct Orbifold2Repr {
    handles: u32,
    crosscaps: u32,
    cones: Vec<u32>,
    boundaries: Vec<Vec<u32>>,
}

impl TryFrom<Orbifold2Repr> for Orbifold2Symbol {
    type Error = Error;
    fn try_from(r: Orbifold2Repr) -> Result<Self> {
        Orbifold2Symbol::new(r.handles, r.crosscaps, r.cones, r.boundaries)
    }
}

impl Orbifold2Symbol {
    /// Builds a symbol, erasing order-1 points and bringing it to canonical form.
    /// A handle next to a crosscap is traded for two crosscaps.
    pub fn new(
        handles: u32,
        crosscaps: u32,
        cones: Vec<u32>,
        boundaries: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if cones.iter().chain(boundaries.iter().flatten()).any(|&n| n == 0) {
            return Err(Error::Semantic("cone and corner orders must be positive".into()));
        }
        let (handles, crosscaps) =
            if crosscaps > 0 { (0, crosscaps + 2 * handles) } else { (handles, 0) };
        let mut cones: Vec<u32> = cones.into_iter().filter(|&n| n > 1).collect();
        cones.sort_by_key(|&n| Reverse(n));
        let mut boundaries: Vec<Vec<u32>> = boundaries
            .into_iter()
            .map(|b| {
                let b: Vec<u32> = b.into_iter().filter(|&n| n > 1).collect();
                canonical_orders(&b)
            })
            .collect();
        boundaries.sort_by_key(|b| order_key(b));
        Ok(Orbifold2Symbol { handles, crosscaps, cones, boundaries })
    }

    /// The 2-sphere without singular points.
    pub fn sphere() -> Self {
        Orbifold2Symbol { handles: 0, crosscaps: 0, cones: vec![], boundaries: vec![] }
    }

    pub fn handles(&self) -> u32 {
        self.handles
    }

    pub fn crosscaps(&self) -> u32 {
        self.crosscaps
    }

    pub fn cones(&self) -> &[u32] {
        &self.cones
    }

    pub fn boundaries(&self) -> &[Vec<u32>] {
        &self.boundaries
    }

    pub fn boundary_count(&self) -> usize {
        self.boundaries.len()
    }

    pub fn corner_count(&self) -> usize {
        self.boundaries.iter().map(Vec::len).sum()
    }

    /// Orientable as an orbifold: no crosscaps and no mirror boundary.
    pub fn is_orientable(&self) -> bool {
        self.crosscaps == 0 && self.boundaries.is_empty()
    }

    /// Euler characteristic of the underlying surface.
    pub fn surface_euler(&self) -> i64 {
        2 - 2 * self.handles as i64 - self.crosscaps as i64 - self.boundaries.len() as i64
    }

    pub fn print(&self, style: Style) -> String {
        match style {
            Style::Conway => self.conway(),
            Style::Standard => self.standard(),
        }
    }

    fn conway(&self) -> String {
        let mut out = String::new();
        out.push_str(&"o".repeat(self.handles as usize));
        for &n in &self.cones {
            out.push_str(&index_text(n));
        }
        for b in &self.boundaries {
            out.push('*');
            for &n in b {
                out.push_str(&index_text(n));
            }
        }
        out.push_str(&"x".repeat(self.crosscaps as usize));
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    fn standard(&self) -> String {
        let mut out =
            surface_name(self.handles, self.crosscaps, self.boundaries.len() as u32);
        if !self.cones.is_empty() || self.corner_count() > 0 {
            out.push('(');
            out.push_str(&join(self.cones.iter()));
            for b in &self.boundaries {
                out.push(';');
                out.push_str(&join(b.iter()));
            }
            out.push(')');
        }
        out
    }
}

impl fmt::Display for Orbifold2Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.conway())
    }
}

/// Invariants attached to one boundary component: its `xi` and its corners.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryInvariants {
    pub xi: u8,
    pub corners: Vec<LocalInvariant>,
}

/// Seifert fibration over a closed 2-orbifold. Like [`Orbifold2Symbol`] it is
/// kept in canonical order; invariants are not reduced (see
/// [`crate::seifert::normalize`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SeifertRepr", try_from = "SeifertRepr")]
pub struct SeifertSymbol {
    handles: u32,
    crosscaps: u32,
    cones: Vec<LocalInvariant>,
    boundaries: Vec<BoundaryInvariants>,
    euler: Q,
}

#[derive(Serialize, Deserialize)]
struct SeifertRepr {
    base: Orbifold2Symbol,
    cone_invariants: Vec<LocalInvariant>,
    corner_invariants: Vec<Vec<LocalInvariant>>,
    xi: Vec<u8>,
    #[serde(with = "crate::serde_q")]
    euler: Q,
}

impl From<SeifertSymbol> for SeifertRepr {
    fn from(s: SeifertSymbol) -> Self {
        SeifertRepr {
            base: s.base(),
            cone_invariants: s.cones.clone(),
            corner_invariants: s.boundaries.iter().map(|b| b.corners.clone()).collect(),
            xi: s.xi(),
            euler: s.euler,
        }
    }
}

impl TryFrom<SeifertRepr> for SeifertSymbol {
    type Error = Error;
    fn try_from(r: SeifertRepr) -> Result<Self> {
        if r.cone_invariants.len() != r.base.cones().len()
            || r.corner_invariants.len() != r.base.boundary_count()
            || r.xi.len() != r.base.boundary_count()
        {
            return Err(Error::Semantic("invariants do not match the base".into()));
        }
        let boundaries = r
            .xi
            .into_iter()
            .zip(r.corner_invariants)
            .map(|(xi, corners)| BoundaryInvariants { xi, corners })
            .collect();
        SeifertSymbol::new(r.base.handles, r.base.crosscaps, r.cone_invariants, boundaries, r.euler)
    }
}

impl SeifertSymbol {
    /// Builds a symbol in canonical order. Order-1 points are deleted and their
    /// invariant `m/1` (halved for corners) is moved into the Euler number, which
    /// keeps the rational total of the invariant relation unchanged.
    pub fn new(
        handles: u32,
        crosscaps: u32,
        cones: Vec<LocalInvariant>,
        boundaries: Vec<BoundaryInvariants>,
        euler: Q,
    ) -> Result<Self> {
        let mut euler = euler;
        if boundaries.iter().any(|b| b.xi > 1) {
            return Err(Error::Semantic("boundary invariant must be 0 or 1".into()));
        }
        let mut kept = Vec::with_capacity(cones.len());
        for c in cones {
            if c.n == 0 {
                return Err(Error::Semantic("cone order must be positive".into()));
            }
            if c.n == 1 {
                euler += Q::from(c.m as i64);
            } else {
                kept.push(c);
            }
        }
        let mut cones = kept;
        cones.sort_by_key(|c| (Reverse(c.n), c.m));
        let mut bs = Vec::with_capacity(boundaries.len());
        for b in boundaries {
            let mut corners = Vec::with_capacity(b.corners.len());
            for c in b.corners {
                if c.n == 0 {
                    return Err(Error::Semantic("corner order must be positive".into()));
                }
                if c.n == 1 {
                    euler += Q::new(c.m as i64, 2);
                } else {
                    corners.push(c);
                }
            }
            bs.push(BoundaryInvariants { xi: b.xi, corners: canonical_invariant_cycle(&corners) });
        }
        bs.sort_by_key(|b| (inv_key(&b.corners), b.xi));
        let (handles, crosscaps) =
            if crosscaps > 0 { (0, crosscaps + 2 * handles) } else { (handles, 0) };
        Ok(SeifertSymbol { handles, crosscaps, cones, boundaries: bs, euler })
    }

    pub fn base(&self) -> Orbifold2Symbol {
        Orbifold2Symbol {
            handles: self.handles,
            crosscaps: self.crosscaps,
            cones: self.cones.iter().map(|c| c.n).collect(),
            boundaries: self
                .boundaries
                .iter()
                .map(|b| b.corners.iter().map(|c| c.n).collect())
                .collect(),
        }
    }

    pub fn handles(&self) -> u32 {
        self.handles
    }

    pub fn crosscaps(&self) -> u32 {
        self.crosscaps
    }

    pub fn cone_invariants(&self) -> &[LocalInvariant] {
        &self.cones
    }

    pub fn boundaries(&self) -> &[BoundaryInvariants] {
        &self.boundaries
    }

    pub fn corner_invariants(&self) -> Vec<&[LocalInvariant]> {
        self.boundaries.iter().map(|b| b.corners.as_slice()).collect()
    }

    pub fn xi(&self) -> Vec<u8> {
        self.boundaries.iter().map(|b| b.xi).collect()
    }

    pub fn euler(&self) -> Q {
        self.euler
    }

    pub fn with_euler(&self, euler: Q) -> Self {
        SeifertSymbol { euler, ..self.clone() }
    }

    /// `e + sum m/n + sum m/(2n) + sum xi/2` as an exact rational.
    pub fn relation_total(&self) -> Q {
        let mut total = self.euler;
        for c in &self.cones {
            total += c.value();
        }
        for b in &self.boundaries {
            total += Q::new(b.xi as i64, 2);
            for c in &b.corners {
                total += c.value() / 2;
            }
        }
        total
    }

    pub fn print(&self, style: Style) -> String {
        match style {
            Style::Conway => self.conway(),
            Style::Standard => self.standard(),
        }
    }

    fn conway(&self) -> String {
        let mut tokens: Vec<String> = Vec::new();
        tokens.extend((0..self.handles).map(|_| "o".to_string()));
        tokens.extend(self.cones.iter().map(invariant_token));
        for b in &self.boundaries {
            tokens.push(format!("*_{}", b.xi));
            tokens.extend(b.corners.iter().map(invariant_token));
        }
        tokens.extend((0..self.crosscaps).map(|_| "x".to_string()));
        if tokens.is_empty() {
            tokens.push("1".into());
        }
        let mut out = format!("({})", tokens.join(" "));
        if self.euler != Q::from(0) {
            out.push_str(";e=");
            out.push_str(&fmt_q(&self.euler));
        }
        out
    }

    fn standard(&self) -> String {
        let mut fields = vec![self.base().standard(), join(self.cones.iter())];
        for b in &self.boundaries {
            fields.push(join(b.corners.iter()));
        }
        fields.push(fmt_q(&self.euler));
        for b in &self.boundaries {
            fields.push(b.xi.to_string());
        }
        format!("({})", fields.join(";"))
    }
}

impl fmt::Display for SeifertSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.conway())
    }
}

/// Fibration as written, before a missing boundary invariant is filled in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFibration {
    pub handles: u32,
    pub crosscaps: u32,
    pub cones: Vec<LocalInvariant>,
    pub boundaries: Vec<(Option<u8>, Vec<LocalInvariant>)>,
    pub euler: Q,
}

impl PartialFibration {
    pub fn unknown_xi(&self) -> Vec<usize> {
        (0..self.boundaries.len()).filter(|&i| self.boundaries[i].0.is_none()).collect()
    }

    /// Completes with the given values for the unknown `xi` (in boundary order).
    pub fn with_xi(&self, fill: &[u8]) -> Result<SeifertSymbol> {
        let mut fill = fill.iter();
        let boundaries = self
            .boundaries
            .iter()
            .map(|(xi, corners)| {
                let xi = xi.or_else(|| fill.next().copied()).unwrap_or(0);
                BoundaryInvariants { xi, corners: corners.clone() }
            })
            .collect();
        SeifertSymbol::new(self.handles, self.crosscaps, self.cones.clone(), boundaries, self.euler)
    }
}

fn index_text(n: u32) -> String {
    if n < 10 {
        n.to_string()
    } else {
        format!("({n})")
    }
}

fn invariant_token(c: &LocalInvariant) -> String {
    format!("{}_{}", index_text(c.n), index_text(c.m))
}

fn join<T: fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn surface_name(handles: u32, crosscaps: u32, boundaries: u32) -> String {
    match (handles, crosscaps, boundaries) {
        (0, 0, 0) => "S2".into(),
        (1, 0, 0) => "T2".into(),
        (0, 1, 0) => "RP2".into(),
        (0, 2, 0) => "Kb".into(),
        (0, 0, 1) => "D2".into(),
        (0, 0, 2) => "S1xI".into(),
        (0, 1, 1) => "Mb".into(),
        (t, 0, 0) => format!("Sg{t}"),
        (t, 0, b) => format!("Sg{t}b{b}"),
        (_, p, 0) => format!("N{p}"),
        (_, p, b) => format!("N{p}b{b}"),
    }
}

fn parse_surface_name(name: &str, offset: usize) -> Result<(u32, u32, u32)> {
    let cleaned: String = name
        .chars()
        .filter(|c| !matches!(c, '^' | '{' | '}' | ' '))
        .map(|c| match c {
            '×' => 'x',
            'ℝ' => 'R',
            c => c,
        })
        .collect();
    let known = match cleaned.as_str() {
        "S2" => Some((0, 0, 0)),
        "T2" => Some((1, 0, 0)),
        "RP2" => Some((0, 1, 0)),
        "Kb" | "Kb2" | "K2" => Some((0, 2, 0)),
        "D2" => Some((0, 0, 1)),
        "S1xI" => Some((0, 0, 2)),
        "Mb" | "Mb2" => Some((0, 1, 1)),
        _ => None,
    };
    if let Some(k) = known {
        return Ok(k);
    }
    let numbers = |rest: &str| -> Option<(u32, u32)> {
        match rest.split_once('b') {
            Some((a, b)) => Some((a.parse().ok()?, b.parse().ok()?)),
            None => Some((rest.parse().ok()?, 0)),
        }
    };
    if let Some(rest) = cleaned.strip_prefix("Sg") {
        if let Some((t, b)) = numbers(rest) {
            return Ok((t, 0, b));
        }
    }
    if let Some(rest) = cleaned.strip_prefix('N') {
        if let Some((p, b)) = numbers(rest) {
            if p > 0 {
                return Ok((0, p, b));
            }
        }
    }
    Err(Error::syntax(offset, format!("unknown surface name {name:?}")))
}

/// Base exactly as written, before canonical reordering.
#[derive(Clone, Debug, Default)]
struct RawBase {
    handles: u32,
    crosscaps: u32,
    cones: Vec<u32>,
    boundaries: Vec<Vec<u32>>,
}

impl RawBase {
    fn symbol(self) -> Result<Orbifold2Symbol> {
        Orbifold2Symbol::new(self.handles, self.crosscaps, self.cones, self.boundaries)
    }
}

#[derive(Clone, Copy, Debug)]
struct Feature {
    kind: FeatureKind,
    sub: Option<u32>,
    offset: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FeatureKind {
    Handle,
    Index(u32),
    Star,
    Cross,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, base: usize) -> Self {
        Cursor { text, pos: 0, base }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn number_in(&mut self, close: char) -> Result<u32> {
        let start = self.offset();
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.bump() != Some(close) || digits.is_empty() {
            return Err(Error::syntax(start, format!("expected digits followed by '{close}'")));
        }
        digits.parse().map_err(|_| Error::syntax(start, "number too large"))
    }

    /// A single digit, `(digits)` or `{digits}`.
    fn small_number(&mut self) -> Result<u32> {
        let at = self.offset();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                self.bump();
                Ok(c.to_digit(10).unwrap())
            }
            Some('(') => {
                self.bump();
                self.number_in(')')
            }
            Some('{') => {
                self.bump();
                self.number_in('}')
            }
            _ => Err(Error::syntax(at, "expected a digit or a parenthesized number")),
        }
    }

    fn subscript(&mut self) -> Result<Option<u32>> {
        self.skip_ws();
        if self.peek() == Some('_') {
            self.bump();
            self.skip_ws();
            Ok(Some(self.small_number()?))
        } else {
            Ok(None)
        }
    }

    fn skip_macron(&mut self) {
        if self.peek() == Some('\u{0304}') {
            self.bump();
        }
    }
}

fn conway_features(text: &str, base: usize) -> Result<Vec<Feature>> {
    let mut cur = Cursor::new(text, base);
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        let offset = cur.offset();
        let Some(c) = cur.peek() else { break };
        let kind = match c {
            'o' | '◦' | '∘' | '○' => {
                cur.bump();
                FeatureKind::Handle
            }
            '*' | '∗' => {
                cur.bump();
                FeatureKind::Star
            }
            'x' | '×' => {
                cur.bump();
                cur.skip_macron();
                FeatureKind::Cross
            }
            '(' | '{' => FeatureKind::Index(cur.small_number()?),
            c if c.is_ascii_digit() => FeatureKind::Index(cur.small_number()?),
            c => return Err(Error::syntax(offset, format!("unexpected character {c:?}"))),
        };
        let sub = match kind {
            FeatureKind::Index(_) | FeatureKind::Star => cur.subscript()?,
            _ => None,
        };
        if matches!(kind, FeatureKind::Handle | FeatureKind::Cross) {
            cur.skip_ws();
            if cur.peek() == Some('_') {
                return Err(Error::syntax(cur.offset(), "subscript after 'o' or 'x'"));
            }
        }
        out.push(Feature { kind, sub, offset });
    }
    Ok(out)
}

/// Per-feature data collected from a Conway string, in written order.
struct ConwayLayout {
    raw: RawBase,
    cone_subs: Vec<(Option<u32>, usize)>,
    boundary_subs: Vec<(Option<u32>, usize)>,
    corner_subs: Vec<Vec<(Option<u32>, usize)>>,
}

fn conway_layout(features: &[Feature]) -> Result<ConwayLayout> {
    let mut raw = RawBase::default();
    let mut cone_subs = Vec::new();
    let mut boundary_subs = Vec::new();
    let mut corner_subs: Vec<Vec<(Option<u32>, usize)>> = Vec::new();
    // 0 handles, 1 cones, 2 boundaries, 3 crosscaps
    let mut section = 0;
    for f in features {
        match f.kind {
            FeatureKind::Handle => {
                if section > 0 {
                    return Err(Error::syntax(f.offset, "'o' must precede all other features"));
                }
                raw.handles += 1;
            }
            FeatureKind::Index(n) => {
                if n == 0 {
                    return Err(Error::Semantic(format!(
                        "index 0 at byte {} (orders must be at least 2)",
                        f.offset
                    )));
                }
                match section {
                    0 | 1 => {
                        section = 1;
                        raw.cones.push(n);
                        cone_subs.push((f.sub, f.offset));
                    }
                    2 => {
                        raw.boundaries.last_mut().unwrap().push(n);
                        corner_subs.last_mut().unwrap().push((f.sub, f.offset));
                    }
                    _ => {
                        return Err(Error::syntax(f.offset, "cone or corner after 'x'"));
                    }
                }
            }
            FeatureKind::Star => {
                if section == 3 {
                    return Err(Error::syntax(f.offset, "'*' after 'x'"));
                }
                section = 2;
                raw.boundaries.push(Vec::new());
                corner_subs.push(Vec::new());
                boundary_subs.push((f.sub, f.offset));
            }
            FeatureKind::Cross => {
                section = 3;
                raw.crosscaps += 1;
            }
        }
    }
    Ok(ConwayLayout { raw, cone_subs, boundary_subs, corner_subs })
}

fn looks_standard(text: &str) -> bool {
    text.trim_start_matches(|c: char| c == '(' || c.is_whitespace())
        .chars()
        .next()
        .is_some_and(|c| c.is_uppercase() || c == 'ℝ')
}

/// Parses a base orbifold in either notation.
pub fn parse_base(text: &str) -> Result<Orbifold2Symbol> {
    raw_base(text)?.symbol()
}

fn raw_base(text: &str) -> Result<RawBase> {
    if looks_standard(text) {
        return standard_base(text, 0);
    }
    let features = conway_features(text, 0)?;
    if let Some(f) = features.iter().find(|f| f.sub.is_some()) {
        return Err(Error::syntax(f.offset, "subscripts are not allowed in a base orbifold"));
    }
    Ok(conway_layout(&features)?.raw)
}

/// Splits `text` at top-level occurrences of `sep` (outside brackets).
fn split_top(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn standard_base(text: &str, base: usize) -> Result<RawBase> {
    let trimmed = text.trim_end();
    let lead = trimmed.len() - trimmed.trim_start().len();
    let trimmed = trimmed.trim_start();
    let (name, groups) = match trimmed.find('(') {
        Some(i) => {
            if !trimmed.ends_with(')') {
                return Err(Error::syntax(base + lead + trimmed.len(), "expected ')'"));
            }
            (&trimmed[..i], Some((i + 1, &trimmed[i + 1..trimmed.len() - 1])))
        }
        None => (trimmed, None),
    };
    let (handles, crosscaps, b) = parse_surface_name(name, base + lead)?;
    let mut raw = RawBase { handles, crosscaps, cones: vec![], boundaries: vec![vec![]; b as usize] };
    if let Some((gstart, inner)) = groups {
        let parts = split_top(inner, ';');
        if parts.len() > 1 + b as usize {
            return Err(Error::syntax(
                base + lead + gstart,
                format!("{} has {b} boundary components but {} corner groups", name, parts.len() - 1),
            ));
        }
        for (k, (off, part)) in parts.iter().enumerate() {
            let orders = parse_order_list(part, base + lead + gstart + off)?;
            if k == 0 {
                raw.cones = orders;
            } else {
                raw.boundaries[k - 1] = orders;
            }
        }
    }
    Ok(raw)
}

fn parse_order_list(text: &str, base: usize) -> Result<Vec<u32>> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    split_top(text, ',')
        .into_iter()
        .map(|(off, item)| {
            let n: u32 = item
                .trim()
                .parse()
                .map_err(|_| Error::syntax(base + off, format!("expected an order, got {item:?}")))?;
            if n == 0 {
                return Err(Error::Semantic(format!("order 0 at byte {}", base + off)));
            }
            Ok(n)
        })
        .collect()
}

fn parse_invariant_list(text: &str, orders: &[u32], base: usize) -> Result<Vec<LocalInvariant>> {
    let items: Vec<(usize, &str)> =
        if text.trim().is_empty() { vec![] } else { split_top(text, ',') };
    if items.len() != orders.len() {
        return Err(Error::Semantic(format!(
            "expected {} local invariants at byte {base}, found {}",
            orders.len(),
            items.len()
        )));
    }
    items
        .into_iter()
        .zip(orders)
        .map(|((off, item), &n)| {
            let bad = || Error::syntax(base + off, format!("expected m/n, got {item:?}"));
            let (m, d) = item.trim().split_once('/').ok_or_else(bad)?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            let d: u32 = d.trim().parse().map_err(|_| bad())?;
            if d != n {
                return Err(Error::Semantic(format!(
                    "invariant {m}/{d} at byte {} does not match order {n}",
                    base + off
                )));
            }
            Ok(LocalInvariant::new(m, n))
        })
        .collect()
}

/// Parses a fibration, keeping a missing boundary invariant as `None`.
pub fn parse_fibration_partial(text: &str) -> Result<PartialFibration> {
    if looks_standard(text) {
        standard_fibration(text)
    } else {
        conway_fibration(text)
    }
}

/// Parses a fibration in either notation; a missing `xi` on the only boundary is
/// completed from the invariant relation.
pub fn parse_fibration(text: &str) -> Result<SeifertSymbol> {
    let partial = parse_fibration_partial(text)?;
    if partial.unknown_xi().is_empty() {
        partial.with_xi(&[])
    } else {
        crate::seifert::complete_boundary_invariant(&partial)
    }
}

/// Offset of the parenthesis matching the one at `open`.
fn matching_paren(text: &str, open: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in text[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_euler(text: &str) -> Result<(&str, Q)> {
    let Some(i) = text.rfind(';') else { return Ok((text, Q::from(0))) };
    let tail = text[i + 1..].trim();
    let Some(value) = tail.strip_prefix("e") else { return Ok((text, Q::from(0))) };
    let value = value.trim_start().strip_prefix('=').unwrap_or(value).trim();
    let e = parse_q(value)
        .ok_or_else(|| Error::syntax(i + 1, format!("bad Euler number {value:?}")))?;
    Ok((&text[..i], e))
}

fn conway_fibration(text: &str) -> Result<PartialFibration> {
    let (body, euler) = split_euler(text)?;
    let lead = body.len() - body.trim_start().len();
    let trimmed = body.trim();
    let (inner, base) = if trimmed.starts_with('(')
        && matching_paren(trimmed, 0) == Some(trimmed.len() - 1)
    {
        (&trimmed[1..trimmed.len() - 1], lead + 1)
    } else {
        (trimmed, lead)
    };
    let features = conway_features(inner, base)?;
    let layout = conway_layout(&features)?;
    let need = |(sub, offset): (Option<u32>, usize), n: u32| -> Result<LocalInvariant> {
        match sub {
            Some(m) => Ok(LocalInvariant::new(m, n)),
            None if n == 1 => Ok(LocalInvariant::new(0, 1)),
            None => Err(Error::Semantic(format!("missing local invariant at byte {offset}"))),
        }
    };
    let cones = layout
        .cone_subs
        .iter()
        .zip(&layout.raw.cones)
        .map(|(&s, &n)| need(s, n))
        .collect::<Result<Vec<_>>>()?;
    let mut boundaries = Vec::new();
    for ((&(sub, offset), orders), subs) in
        layout.boundary_subs.iter().zip(&layout.raw.boundaries).zip(&layout.corner_subs)
    {
        let xi = match sub {
            Some(x @ (0 | 1)) => Some(x as u8),
            Some(x) => {
                return Err(Error::Semantic(format!(
                    "boundary invariant {x} at byte {offset} must be 0 or 1"
                )))
            }
            None => None,
        };
        let corners =
            subs.iter().zip(orders).map(|(&s, &n)| need(s, n)).collect::<Result<Vec<_>>>()?;
        boundaries.push((xi, corners));
    }
    let partial = PartialFibration {
        handles: layout.raw.handles,
        crosscaps: layout.raw.crosscaps,
        cones,
        boundaries,
        euler,
    };
    check_unknown_xi(&partial)?;
    Ok(partial)
}

fn check_unknown_xi(p: &PartialFibration) -> Result<()> {
    if !p.unknown_xi().is_empty() && p.boundaries.len() != 1 {
        return Err(Error::Semantic(
            "a boundary invariant may be omitted only when there is a single boundary".into(),
        ));
    }
    Ok(())
}

fn standard_fibration(text: &str) -> Result<PartialFibration> {
    let lead = text.len() - text.trim_start().len();
    let trimmed = text.trim();
    let (inner, base) = if trimmed.starts_with('(') && trimmed.ends_with(')') {
        (&trimmed[1..trimmed.len() - 1], lead + 1)
    } else {
        (trimmed, lead)
    };
    let fields = split_top(inner, ';');
    let raw = standard_base(fields[0].1, base)?;
    let b = raw.boundaries.len();
    let with_e = match fields.len() - 1 {
        n if n == 1 + 2 * b => false,
        n if n == 2 + 2 * b => true,
        n => {
            return Err(Error::Semantic(format!(
                "expected {} or {} fields after the base, found {n}",
                1 + 2 * b,
                2 + 2 * b
            )))
        }
    };
    let at = |k: usize| (base + fields[k].0, fields[k].1);
    let (off, t) = at(1);
    let cones = parse_invariant_list(t, &raw.cones, off)?;
    let mut boundaries = Vec::new();
    for i in 0..b {
        let (off, t) = at(2 + i);
        let corners = parse_invariant_list(t, &raw.boundaries[i], off)?;
        let (xoff, xt) = at(2 + b + with_e as usize + i);
        let xi = match xt.trim() {
            "" => None,
            "0" => Some(0),
            "1" => Some(1),
            other => {
                return Err(Error::Semantic(format!(
                    "boundary invariant {other:?} at byte {xoff} must be 0 or 1"
                )))
            }
        };
        boundaries.push((xi, corners));
    }
    let euler = if with_e {
        let (off, t) = at(2 + b);
        parse_q(t).ok_or_else(|| Error::syntax(off, format!("bad Euler number {t:?}")))?
    } else {
        Q::from(0)
    };
    let partial =
        PartialFibration { handles: raw.handles, crosscaps: raw.crosscaps, cones, boundaries, euler };
    check_unknown_xi(&partial)?;
    Ok(partial)
}

/// Printing entry point mirroring [`parse_base`].
pub fn print_base(sym: &Orbifold2Symbol, style: Style) -> String {
    sym.print(style)
}

/// Printing entry point mirroring [`parse_fibration`].
pub fn print_fibration(sym: &SeifertSymbol, style: Style) -> String {
    sym.print(style)
}
