//! Singular locus of a fibered orbifold as an abstract labelled graph.
//!
//! A cone with `gcd(m, n) = p > 1` gives a circle of index `p`; a corner with
//! `p > 1` gives a strut of index `p` with two trivalent endpoints. Mirrors
//! give pairs of index-2 strands running between consecutive corners.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::{Error, LocalInvariant, Result, SeifertSymbol};

/// Fiber-level census: no strand structure needed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularCensus {
    /// Index of each singular circle over a cone point.
    pub circles: Vec<u32>,
    /// Index of each strut over a corner point.
    pub struts: Vec<u32>,
    pub vertex_count: usize,
}

impl SingularCensus {
    pub fn circles_by_index(&self) -> BTreeMap<u32, usize> {
        count_by(&self.circles)
    }

    pub fn struts_by_index(&self) -> BTreeMap<u32, usize> {
        count_by(&self.struts)
    }
}

fn count_by(xs: &[u32]) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for x in xs {
        *out.entry(*x).or_insert(0) += 1;
    }
    out
}

fn singular_index(c: &LocalInvariant) -> Option<u32> {
    let g = if c.m == 0 { c.n } else { c.gcd() };
    (g > 1).then_some(g)
}

pub fn singular_census(s: &SeifertSymbol) -> SingularCensus {
    let circles: Vec<u32> = s.cone_invariants().iter().filter_map(singular_index).collect();
    let struts: Vec<u32> = s
        .boundaries()
        .iter()
        .flat_map(|b| b.corners.iter().filter_map(singular_index))
        .collect();
    let vertex_count = 2 * struts.len();
    SingularCensus { circles, struts, vertex_count }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Singular circle over a cone point, a loop on its own node.
    Circle,
    Strut,
    Strand,
    /// Strand closing on itself over a corner-free boundary.
    StrandCircle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub index: u32,
    pub kind: EdgeKind,
}

/// Nodes are strut endpoints (the vertices) and degree-2 joints that only
/// keep the graph simple to build; `is_vertex` tells them apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularGraph {
    pub is_vertex: Vec<bool>,
    pub edges: Vec<Edge>,
}

struct Builder {
    graph: SingularGraph,
}

impl Builder {
    fn node(&mut self, vertex: bool) -> usize {
        self.graph.is_vertex.push(vertex);
        self.graph.is_vertex.len() - 1
    }

    fn edge(&mut self, from: usize, to: usize, index: u32, kind: EdgeKind) {
        self.graph.edges.push(Edge { from, to, index, kind });
    }
}

/// Where the strands of one mirror segment end at a corner: `(top, bottom)`.
enum CornerEnds {
    Strut(usize, usize),
    UTurn,
}

fn is_half(c: &LocalInvariant) -> bool {
    2 * c.m == c.n
}

/// Graph with the `xi = 1` swap of boundary `i` placed on segment `twist[i]`
/// (segment `j` runs from corner `j` to corner `j + 1`, cyclically).
pub fn singular_graph_with_twist(s: &SeifertSymbol, twist: &[usize]) -> Result<SingularGraph> {
    let mut b = Builder { graph: SingularGraph { is_vertex: vec![], edges: vec![] } };
    for c in s.cone_invariants() {
        if let Some(p) = singular_index(c) {
            let v = b.node(false);
            b.edge(v, v, p, EdgeKind::Circle);
        }
    }
    for (i, bd) in s.boundaries().iter().enumerate() {
        let h = bd.corners.len();
        if h == 0 {
            let loops = if bd.xi == 0 { 2 } else { 1 };
            for _ in 0..loops {
                let v = b.node(false);
                b.edge(v, v, 2, EdgeKind::StrandCircle);
            }
            continue;
        }
        let mut ends = Vec::with_capacity(h);
        for c in &bd.corners {
            match singular_index(c) {
                Some(p) => {
                    let (top, bottom) = (b.node(true), b.node(true));
                    b.edge(top, bottom, p, EdgeKind::Strut);
                    ends.push(CornerEnds::Strut(top, bottom));
                }
                None if is_half(c) => ends.push(CornerEnds::UTurn),
                None => {
                    return Err(Error::Unsupported(format!(
                        "corner invariant {}/{} in {s}: strand pattern is only known for 1/2",
                        c.m, c.n
                    )))
                }
            }
        }
        let twisted = if bd.xi == 1 { Some(twist.get(i).copied().unwrap_or(h - 1) % h) } else { None };
        for j in 0..h {
            // a U-turn is a joint node shared by the two strands it connects
            let port = |b: &mut Builder, e: &CornerEnds| match e {
                CornerEnds::Strut(t, bt) => (*t, *bt),
                CornerEnds::UTurn => {
                    let u = b.node(false);
                    (u, u)
                }
            };
            let (s_top, s_bottom) = port(&mut b, &ends[j]);
            let (mut e_top, mut e_bottom) = port(&mut b, &ends[(j + 1) % h]);
            if twisted == Some(j) {
                std::mem::swap(&mut e_top, &mut e_bottom);
            }
            b.edge(s_top, e_top, 2, EdgeKind::Strand);
            b.edge(s_bottom, e_bottom, 2, EdgeKind::Strand);
        }
    }
    Ok(b.graph)
}

/// Graph with each swap on the segment after the last corner.
pub fn singular_graph(s: &SeifertSymbol) -> Result<SingularGraph> {
    singular_graph_with_twist(s, &[])
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

impl SingularGraph {
    fn labels(&self, keep: impl Fn(&Edge) -> bool) -> (Vec<usize>, Vec<bool>) {
        let n = self.is_vertex.len();
        let mut uf = UnionFind((0..n).collect());
        let mut touched = vec![false; n];
        for e in self.edges.iter().filter(|e| keep(e)) {
            uf.union(e.from, e.to);
            touched[e.from] = true;
            touched[e.to] = true;
        }
        ((0..n).map(|v| uf.find(v)).collect(), touched)
    }

    fn components_where(&self, keep: impl Fn(&Edge) -> bool) -> usize {
        let (roots, touched) = self.labels(keep);
        let mut rs: Vec<usize> = (0..roots.len()).filter(|&v| touched[v]).map(|v| roots[v]).collect();
        rs.sort_unstable();
        rs.dedup();
        rs.len()
    }

    pub fn component_count(&self) -> usize {
        self.components_where(|_| true)
    }

    pub fn vertex_count(&self) -> usize {
        self.is_vertex.iter().filter(|v| **v).count()
    }

    /// Components of the subgraph of edges with singularity index `k`.
    pub fn components_of_index(&self, k: u32) -> usize {
        self.components_where(|e| e.index == k)
    }

    /// Number of vertices in each component, sorted.
    pub fn vertex_distribution(&self) -> Vec<usize> {
        let (roots, touched) = self.labels(|_| true);
        let mut per: BTreeMap<usize, usize> = BTreeMap::new();
        for v in (0..roots.len()).filter(|&v| touched[v]) {
            *per.entry(roots[v]).or_insert(0) += self.is_vertex[v] as usize;
        }
        let mut out: Vec<usize> = per.into_values().collect();
        out.sort_unstable();
        out
    }

    /// Components without vertices, which are circles.
    pub fn circle_count(&self) -> usize {
        self.vertex_distribution().iter().filter(|c| **c == 0).count()
    }

    /// Vertex-free components keyed by singularity index.
    pub fn circles_by_index(&self) -> BTreeMap<u32, usize> {
        let (roots, _) = self.labels(|_| true);
        let mut index_of: BTreeMap<usize, u32> = BTreeMap::new();
        for e in &self.edges {
            index_of.insert(roots[e.from], e.index);
        }
        for (v, r) in roots.iter().enumerate() {
            if self.is_vertex[v] {
                index_of.remove(r);
            }
        }
        count_by(&index_of.into_values().collect::<Vec<_>>())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    /// Edges whose removal disconnects their component.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.is_vertex.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![vec![]; n];
        for (id, e) in self.edges.iter().enumerate() {
            if e.from != e.to {
                adj[e.from].push((e.to, id));
                adj[e.to].push((e.from, id));
            }
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut out = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (node, edge used to enter, next neighbour position)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (v, via, ref mut pos)) = stack.last_mut() {
                if *pos < adj[v].len() {
                    let (w, id) = adj[v][*pos];
                    *pos += 1;
                    if id == via {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, id, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > disc[parent] {
                            out.push(via);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn boundary_components(s: &SeifertSymbol) -> Result<usize> {
    Ok(singular_graph(s)?.component_count())
}

/// Whether removing one point of the singular locus splits a component.
pub fn separable_by_point(s: &SeifertSymbol) -> Result<bool> {
    Ok(!singular_graph(s)?.bridges().is_empty())
}
