//! Graphs with typed edges and loops, and the link graphs built from a pair
//! of sets in a group.
//!
//! For a sum-free `S` and a vertex set `B`, the link graph joins `x != y` in
//! `B` when `{x, y, s}` is a Schur triple for some `s` in `S`. An edge is of
//! type 1 when `x - y` or `y - x` lies in `S` and of type 2 when `x + y` does;
//! both tags can hold at once. A loop at `x` is of type 2 when `2x` is in `S`
//! and bad when `x` lies in `S + S` or `S - S`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use bitflags::bitflags;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::set::ElementSet;
use crate::sumfree::{is_distinct_sumfree, is_sumfree};

bitflags! {
    /// Edge type mask.
    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct EdgeKind: u8 {
        const TYPE1 = 0b01;
        const TYPE2 = 0b10;
    }
}

bitflags! {
    /// Loop tags. A loop can be bad and of type 2 at the same time.
    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct LoopKind: u8 {
        const BAD = 0b01;
        const TYPE2 = 0b10;
    }
}

fn loop_tag(k: LoopKind) -> &'static str {
    match (k.contains(LoopKind::BAD), k.contains(LoopKind::TYPE2)) {
        (true, true) => "bad+type2",
        (true, false) => "bad",
        (false, true) => "type2",
        (false, false) => "-",
    }
}

fn parse_loop_tag(s: &str) -> Option<LoopKind> {
    match s {
        "-" | "" => Some(LoopKind::empty()),
        "bad" => Some(LoopKind::BAD),
        "type2" => Some(LoopKind::TYPE2),
        "bad+type2" | "type2+bad" => Some(LoopKind::BAD | LoopKind::TYPE2),
        _ => None,
    }
}

/// A graph on vertices `0..n` with at most one loop per vertex.
///
/// Edges are keyed by `(u, v)` with `u < v`; loops are stored apart from the
/// edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopGraph {
    labels: Vec<String>,
    elements: Option<Vec<usize>>,
    edges: BTreeMap<(usize, usize), EdgeKind>,
    loops: BTreeMap<usize, LoopKind>,
}

impl LoopGraph {
    /// Graph on `n` vertices labelled `0..n`.
    pub fn new(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        LoopGraph {
            labels,
            elements: None,
            edges: BTreeMap::new(),
            loops: BTreeMap::new(),
        }
    }

    /// Graph whose vertices are the given group elements, labelled by index.
    pub fn on_elements(elements: Vec<usize>) -> Self {
        let mut g = Self::with_labels(elements.iter().map(|e| e.to_string()).collect());
        g.elements = Some(elements);
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Group element behind each vertex, for graphs built from a group.
    pub fn elements(&self) -> Option<&[usize]> {
        self.elements.as_deref()
    }

    pub fn vertex_of_element(&self, e: usize) -> Option<usize> {
        self.elements.as_ref()?.binary_search(&e).ok()
    }

    /// Adds `kind` to the edge `{u, v}`. Panics on `u == v` or an empty mask.
    pub fn add_edge(&mut self, u: usize, v: usize, kind: EdgeKind) {
        assert!(u != v, "use add_loop for loops");
        assert!(!kind.is_empty(), "edge without a type");
        assert!(u < self.vertex_count() && v < self.vertex_count());
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(EdgeKind::empty()) |= kind;
    }

    pub fn add_loop(&mut self, v: usize, kind: LoopKind) {
        assert!(!kind.is_empty(), "loop without a tag");
        assert!(v < self.vertex_count());
        *self.loops.entry(v).or_insert(LoopKind::empty()) |= kind;
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeKind)> + '_ {
        self.edges.iter().map(|(&(u, v), &k)| (u, v, k))
    }

    pub fn loops(&self) -> impl Iterator<Item = (usize, LoopKind)> + '_ {
        self.loops.iter().map(|(&v, &k)| (v, k))
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<EdgeKind> {
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn loop_at(&self, v: usize) -> Option<LoopKind> {
        self.loops.get(&v).copied()
    }

    pub fn is_looped(&self, v: usize) -> bool {
        self.loops.contains_key(&v)
    }

    /// Sorted neighbour lists, loops excluded.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in self.edges.keys() {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Degree with a loop counting two.
    pub fn degree(&self, v: usize) -> usize {
        let e = self.edges.keys().filter(|&&(a, b)| a == v || b == v).count();
        e + if self.is_looped(v) { 2 } else { 0 }
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> LoopGraph {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = LoopGraph::with_labels(vertices.iter().map(|&v| self.labels[v].clone()).collect());
        g.elements = self.elements.as_ref().map(|e| vertices.iter().map(|&v| e[v]).collect());
        for (&(u, v), &k) in &self.edges {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                g.add_edge(pos[u], pos[v], k);
            }
        }
        for (&v, &k) in &self.loops {
            if pos[v] != usize::MAX {
                g.loops.insert(pos[v], k);
            }
        }
        g
    }

    /// Graph from an edge list (type 1) and a list of bad-looped vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], loops: &[usize]) -> Self {
        let mut g = LoopGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, EdgeKind::TYPE1);
        }
        for &v in loops {
            g.add_loop(v, LoopKind::BAD);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &e, &[])
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &e, &[])
    }

    pub fn complete(n: usize) -> Self {
        let e: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &e, &[])
    }

    /// Cartesian product; vertex `(x, y)` gets id `x * |b| + y`. Loops are
    /// dropped.
    pub fn box_product(a: &LoopGraph, b: &LoopGraph) -> Self {
        let nb = b.vertex_count();
        let mut e = Vec::new();
        for x in 0..a.vertex_count() {
            for (y, y2, _) in b.edges() {
                e.push((x * nb + y, x * nb + y2));
            }
        }
        for (x, x2, _) in a.edges() {
            for y in 0..nb {
                e.push((x * nb + y, x2 * nb + y));
            }
        }
        Self::from_edges(a.vertex_count() * nb, &e, &[])
    }

    /// Disjoint union, vertices numbered consecutively.
    pub fn disjoint_union(parts: &[LoopGraph]) -> Self {
        let mut labels = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            labels.extend(p.labels.iter().map(|l| format!("{i}.{l}")));
        }
        let mut g = LoopGraph::with_labels(labels);
        let mut off = 0;
        for p in parts {
            for (u, v, k) in p.edges() {
                g.add_edge(off + u, off + v, k);
            }
            for (v, k) in p.loops() {
                g.add_loop(off + v, k);
            }
            off += p.vertex_count();
        }
        g
    }

    /// Adds a bad loop at each listed vertex.
    pub fn with_loops(mut self, loops: &[usize]) -> Self {
        for &v in loops {
            self.add_loop(v, LoopKind::BAD);
        }
        self
    }

    /// Same vertices and edges, with each loop tag mapped through `f`.
    fn map_loops(&self, f: impl Fn(LoopKind) -> LoopKind) -> LoopGraph {
        let mut g = self.clone();
        g.loops = self
            .loops
            .iter()
            .map(|(&v, &k)| (v, f(k)))
            .filter(|(_, k)| !k.is_empty())
            .collect();
        g
    }

    fn filter_edges(&self, keep: EdgeKind) -> LoopGraph {
        let mut g = self.clone();
        g.edges = self
            .edges
            .iter()
            .filter(|(_, k)| k.intersects(keep))
            .map(|(&e, &k)| (e, k))
            .collect();
        g
    }

    /// Adjacency-list text: `label: nbrs | loop-tag | masks`.
    pub fn to_adjacency_text(&self) -> String {
        let adj = self.adjacency();
        let mut out = String::new();
        for (v, nbrs) in adj.iter().enumerate() {
            let names: Vec<&str> = nbrs.iter().map(|&u| self.labels[u].as_str()).collect();
            let masks: Vec<String> = nbrs
                .iter()
                .map(|&u| self.edge(v, u).unwrap().bits().to_string())
                .collect();
            let tag = self.loop_at(v).map(loop_tag).unwrap_or("-");
            let _ = writeln!(
                out,
                "{}: {} | {} | {}",
                self.labels[v],
                names.join(","),
                tag,
                masks.join(",")
            );
        }
        out
    }

    /// Parses the adjacency-list text format.
    ///
    /// The loop and mask fields may be omitted, in which case the vertex is
    /// unlooped and its edges are of type 1. Lines starting with `#` are
    /// ignored.
    pub fn parse_adjacency_text(text: &str) -> Result<LoopGraph> {
        struct Line<'a> {
            offset: usize,
            nbrs: Vec<&'a str>,
            tag: LoopKind,
            masks: Option<Vec<u8>>,
        }
        let mut labels = Vec::new();
        let mut lines = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line_off = offset;
            offset += raw.len();
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| Error::Parse {
                offset: line_off,
                message: m.to_string(),
            };
            let (label, rest) = line.split_once(':').ok_or_else(|| err("expected `label:`"))?;
            let label = label.trim();
            if label.is_empty() {
                return Err(err("empty vertex label"));
            }
            let mut parts = rest.split('|').map(str::trim);
            let nbrs: Vec<&str> = parts
                .next()
                .unwrap_or("")
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            let tag = match parts.next() {
                Some(t) => parse_loop_tag(t).ok_or_else(|| err("unknown loop tag"))?,
                None => LoopKind::empty(),
            };
            let masks = match parts.next() {
                Some(m) if !m.is_empty() => {
                    let ms = m
                        .split(',')
                        .map(|x| x.trim().parse::<u8>().ok().filter(|&b| (1..=3).contains(&b)))
                        .collect::<Option<Vec<u8>>>()
                        .ok_or_else(|| err("edge masks must be 1, 2 or 3"))?;
                    if ms.len() != nbrs.len() {
                        return Err(err("one mask per neighbour expected"));
                    }
                    Some(ms)
                }
                _ => None,
            };
            if parts.next().is_some() {
                return Err(err("too many `|` fields"));
            }
            labels.push(label.to_string());
            lines.push(Line {
                offset: line_off,
                nbrs,
                tag,
                masks,
            });
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Parse {
                    offset: lines[i].offset,
                    message: format!("duplicate vertex `{l}`"),
                });
            }
        }
        let mut g = LoopGraph::with_labels(labels);
        for (v, line) in lines.iter().enumerate() {
            if !line.tag.is_empty() {
                g.add_loop(v, line.tag);
            }
            for (j, name) in line.nbrs.iter().enumerate() {
                let u = *index.get(*name).ok_or_else(|| Error::Parse {
                    offset: line.offset,
                    message: format!("unknown neighbour `{name}`"),
                })?;
                if u == v {
                    return Err(Error::Parse {
                        offset: line.offset,
                        message: "self-adjacency; use the loop field".into(),
                    });
                }
                let kind = line
                    .masks
                    .as_ref()
                    .map(|m| EdgeKind::from_bits_truncate(m[j]))
                    .unwrap_or(EdgeKind::TYPE1);
                g.add_edge(v, u, kind);
            }
        }
        Ok(g)
    }

    /// Graphviz rendering: type-1 edges blue, type-2 red, dual-type purple;
    /// bad loops dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph link {\n  node [shape=circle];\n");
        for l in &self.labels {
            let _ = writeln!(out, "  \"{l}\";");
        }
        for (u, v, k) in self.edges() {
            let color = match (k.contains(EdgeKind::TYPE1), k.contains(EdgeKind::TYPE2)) {
                (true, true) => "purple",
                (true, false) => "blue",
                _ => "red",
            };
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [color={color}];",
                self.labels[u], self.labels[v]
            );
        }
        for (v, k) in self.loops() {
            let (color, style) = match (k.contains(LoopKind::BAD), k.contains(LoopKind::TYPE2)) {
                (true, true) => ("red", "dashed"),
                (true, false) => ("black", "dashed"),
                _ => ("red", "solid"),
            };
            let _ = writeln!(
                out,
                "  \"{0}\" -- \"{0}\" [color={color}, style={style}];",
                self.labels[v]
            );
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for LoopGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct E<'a> {
            u: &'a str,
            v: &'a str,
            types: u8,
        }
        #[derive(Serialize)]
        struct L<'a> {
            v: &'a str,
            kind: &'static str,
        }
        let edges: Vec<E> = self
            .edges()
            .map(|(u, v, k)| E {
                u: &self.labels[u],
                v: &self.labels[v],
                types: k.bits(),
            })
            .collect();
        let loops: Vec<L> = self
            .loops()
            .map(|(v, k)| L {
                v: &self.labels[v],
                kind: loop_tag(k),
            })
            .collect();
        let mut st = s.serialize_struct("LoopGraph", 3)?;
        st.serialize_field("vertices", &self.labels)?;
        st.serialize_field("edges", &edges)?;
        st.serialize_field("loops", &loops)?;
        st.end()
    }
}

fn check_pair(g: &GroupSpec, s: &ElementSet, b: &ElementSet) -> Result<()> {
    g.check_set(s)?;
    g.check_set(b)?;
    if !s.is_disjoint(b) {
        log::warn!("link graph built with S and B overlapping in {:?}", s.intersection(b));
    }
    Ok(())
}

/// The link graph `L_S[B]`.
pub fn link_graph(g: &GroupSpec, s: &ElementSet, b: &ElementSet) -> Result<LoopGraph> {
    check_pair(g, s, b)?;
    if !is_sumfree(g, s) {
        return Err(Error::NotSumFree(format!("{s}")));
    }
    let verts = b.to_vec();
    let mut lg = LoopGraph::on_elements(verts.clone());
    let sv = s.to_vec();
    for (i, &x) in verts.iter().enumerate() {
        let mut lk = LoopKind::empty();
        if s.contains(g.add_idx(x, x)) {
            lk |= LoopKind::TYPE2;
        }
        if sv
            .iter()
            .any(|&a| s.contains(g.sub_idx(x, a)) || s.contains(g.add_idx(x, a)))
        {
            lk |= LoopKind::BAD;
        }
        if !lk.is_empty() {
            lg.add_loop(i, lk);
        }
        for (j, &y) in verts.iter().enumerate().skip(i + 1) {
            let mut k = EdgeKind::empty();
            if s.contains(g.sub_idx(x, y)) || s.contains(g.sub_idx(y, x)) {
                k |= EdgeKind::TYPE1;
            }
            if s.contains(g.add_idx(x, y)) {
                k |= EdgeKind::TYPE2;
            }
            if !k.is_empty() {
                lg.add_edge(i, j, k);
            }
        }
    }
    Ok(lg)
}

/// The distinct link graph `L*_S[B]`: only Schur triples with three distinct
/// elements count, so there are no type-2 loops.
pub fn distinct_link_graph(g: &GroupSpec, s: &ElementSet, b: &ElementSet) -> Result<LoopGraph> {
    check_pair(g, s, b)?;
    if !is_distinct_sumfree(g, s) {
        return Err(Error::NotSumFree(format!("{s} is not distinct sum-free")));
    }
    let verts = b.to_vec();
    let sv = s.to_vec();
    let mut lg = LoopGraph::on_elements(verts.clone());
    for (i, &x) in verts.iter().enumerate() {
        // {x, a, c} distinct with a + c = x, or x + a = c
        let bad = sv.iter().any(|&a| {
            a != x
                && sv
                    .iter()
                    .any(|&c| c != x && c != a && (g.add_idx(a, c) == x || g.add_idx(x, a) == c))
        });
        if bad {
            lg.add_loop(i, LoopKind::BAD);
        }
        for (j, &y) in verts.iter().enumerate().skip(i + 1) {
            let mut k = EdgeKind::empty();
            let d1 = g.sub_idx(x, y);
            let d2 = g.sub_idx(y, x);
            if (s.contains(d1) && d1 != x && d1 != y) || (s.contains(d2) && d2 != x && d2 != y) {
                k |= EdgeKind::TYPE1;
            }
            let sum = g.add_idx(x, y);
            if s.contains(sum) && sum != x && sum != y {
                k |= EdgeKind::TYPE2;
            }
            if !k.is_empty() {
                lg.add_edge(i, j, k);
            }
        }
    }
    Ok(lg)
}

/// Edges carrying the type-1 tag (dual-type edges keep both tags); no loops.
pub fn gamma1(gr: &LoopGraph) -> LoopGraph {
    gr.filter_edges(EdgeKind::TYPE1).map_loops(|_| LoopKind::empty())
}

/// Type-2 edges and type-2 loops.
pub fn gamma2(gr: &LoopGraph) -> LoopGraph {
    gr.filter_edges(EdgeKind::TYPE2).map_loops(|k| k & LoopKind::TYPE2)
}

/// The graph with bad loops removed.
pub fn gamma_prime(gr: &LoopGraph) -> LoopGraph {
    gr.map_loops(|k| k - LoopKind::BAD)
}

/// `Γ₁ ⋊ Γ₂` on `V x {0, 1}`: two copies of `Γ₁`, and for every type-2 edge
/// `{x, y}` the cross edges `(x,0)(y,1)` and `(y,0)(x,1)`. A type-2 loop at
/// `x` becomes the cross edge `(x,0)(x,1)`.
///
/// Vertex `(x, i)` gets id `i * |V| + x`. Edges inside a copy are tagged type
/// 1 and cross edges type 2.
pub fn rtimes(g1: &LoopGraph, g2: &LoopGraph) -> Result<LoopGraph> {
    if g1.labels != g2.labels {
        return Err(Error::InvalidInput(
            "rtimes needs two graphs on the same vertex set".into(),
        ));
    }
    let n = g1.vertex_count();
    let mut labels = Vec::with_capacity(2 * n);
    for i in 0..2 {
        labels.extend(g1.labels.iter().map(|l| format!("({l},{i})")));
    }
    let mut out = LoopGraph::with_labels(labels);
    for (u, v, _) in g1.edges() {
        out.add_edge(u, v, EdgeKind::TYPE1);
        out.add_edge(n + u, n + v, EdgeKind::TYPE1);
    }
    for (u, v, _) in g2.edges() {
        out.add_edge(u, n + v, EdgeKind::TYPE2);
        out.add_edge(v, n + u, EdgeKind::TYPE2);
    }
    for (v, k) in g2.loops() {
        if k.contains(LoopKind::TYPE2) {
            out.add_edge(v, n + v, EdgeKind::TYPE2);
        }
    }
    Ok(out)
}

/// Role of a fibre `B x {k}` (or `B x {k, -k}`) in a lifted graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    /// `k = 0`: a copy of `Γ`.
    Base,
    /// `2k = 0`, `k != 0`: a copy of `Γ′`.
    Prime,
    /// `{k, -k}` with `2k != 0`: a copy of `Γ₁ ⋊ Γ₂`.
    Rtimes,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftBlock {
    pub kind: BlockKind,
    /// Element indices of `K` covered by the block.
    pub k: Vec<usize>,
}

/// The link graph of `S x {0}` on `B x K` together with its verified
/// decomposition into copies of `Γ`, `Γ′` and `Γ₁ ⋊ Γ₂`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub group: GroupSpec,
    pub graph: LoopGraph,
    pub gamma: LoopGraph,
    pub gamma_prime: LoopGraph,
    pub rtimes: LoopGraph,
    /// Number of `k` in `K` with `2k = 0`.
    pub involutions: usize,
    pub prime_copies: usize,
    pub rtimes_copies: usize,
    pub blocks: Vec<LiftBlock>,
    pub summary: ComponentSummary,
}

/// Lifts `(B, S)` from `H` to `G = H x K` and checks the decomposition block
/// by block against `Γ`, `Γ′` and `Γ₁ ⋊ Γ₂`.
pub fn lift_tilde(h: &GroupSpec, k: &GroupSpec, b: &ElementSet, s: &ElementSet) -> Result<Lift> {
    h.check_set(b)?;
    h.check_set(s)?;
    if !b.is_disjoint(s) {
        return Err(Error::InvalidInput("B and S must be disjoint to lift".into()));
    }
    let gamma = link_graph(h, s, b)?;
    let gp = gamma_prime(&gamma);
    let rt = rtimes(&gamma1(&gamma), &gamma2(&gamma))?;
    let g = h.product(k)?;
    let (nh, nk) = (h.order(), k.order());
    let lift = |set: &ElementSet, ks: &[usize]| -> Result<ElementSet> {
        ElementSet::from_indices(
            g.order(),
            ks.iter().flat_map(|&kk| set.iter().map(move |x| x + nh * kk)),
        )
    };
    let all_k: Vec<usize> = (0..nk).collect();
    let bt = lift(b, &all_k)?;
    let st = lift(s, &[0])?;
    let graph = link_graph(&g, &st, &bt)?;

    // vertex (x, k) of B x K sits at position k * |B| + pos(x)
    let nb = b.len();
    let mut expected = LoopGraph::on_elements(bt.to_vec());
    let mut place = |src: &LoopGraph, ids: &dyn Fn(usize) -> usize| {
        for (u, v, kind) in src.edges() {
            expected.add_edge(ids(u), ids(v), kind);
        }
        for (v, kind) in src.loops() {
            expected.add_loop(ids(v), kind);
        }
    };
    let mut blocks = Vec::new();
    let mut involutions = 0;
    for kk in 0..nk {
        let neg = k.neg_idx(kk);
        if neg == kk {
            involutions += 1;
            let (src, kind) = if kk == 0 {
                (&gamma, BlockKind::Base)
            } else {
                (&gp, BlockKind::Prime)
            };
            place(src, &|x| kk * nb + x);
            blocks.push(LiftBlock { kind, k: vec![kk] });
        } else if kk < neg {
            place(&rt, &|x| {
                if x < nb {
                    kk * nb + x
                } else {
                    neg * nb + (x - nb)
                }
            });
            blocks.push(LiftBlock {
                kind: BlockKind::Rtimes,
                k: vec![kk, neg],
            });
        }
    }
    if expected.edges != graph.edges || expected.loops != graph.loops {
        return Err(Error::Internal(format!(
            "lifted link graph over {g} does not decompose into Γ, Γ′ and Γ₁⋊Γ₂"
        )));
    }
    let summary = summarize(&graph);
    Ok(Lift {
        group: g,
        graph,
        gamma,
        gamma_prime: gp,
        rtimes: rt,
        involutions,
        prime_copies: involutions - 1,
        rtimes_copies: (nk - involutions) / 2,
        blocks,
        summary,
    })
}

/// Connected components (loops ignored for connectivity), ordered by their
/// smallest vertex; each keeps its vertices in increasing order.
pub fn components(gr: &LoopGraph) -> Vec<LoopGraph> {
    component_vertex_sets(gr).iter().map(|c| gr.induced(c)).collect()
}

pub(crate) fn component_vertex_sets(gr: &LoopGraph) -> Vec<Vec<usize>> {
    let adj = gr.adjacency();
    let n = gr.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    queue.push_back(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexDegree {
    pub vertex: usize,
    pub degree: usize,
    pub d1: usize,
    pub d2: usize,
}

/// Minimum and maximum degree plus per-type degrees; a loop counts two, and a
/// type-2 loop counts two towards `d2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub min: usize,
    pub max: usize,
    pub vertices: Vec<VertexDegree>,
}

pub fn degree_profile(gr: &LoopGraph) -> DegreeProfile {
    let n = gr.vertex_count();
    let mut vs: Vec<VertexDegree> = (0..n)
        .map(|v| VertexDegree {
            vertex: v,
            degree: 0,
            d1: 0,
            d2: 0,
        })
        .collect();
    for (u, v, k) in gr.edges() {
        for w in [u, v] {
            vs[w].degree += 1;
            if k.contains(EdgeKind::TYPE1) {
                vs[w].d1 += 1;
            }
            if k.contains(EdgeKind::TYPE2) {
                vs[w].d2 += 1;
            }
        }
    }
    for (v, k) in gr.loops() {
        vs[v].degree += 2;
        if k.contains(LoopKind::TYPE2) {
            vs[v].d2 += 2;
        }
    }
    DegreeProfile {
        min: vs.iter().map(|d| d.degree).min().unwrap_or(0),
        max: vs.iter().map(|d| d.degree).max().unwrap_or(0),
        vertices: vs,
    }
}

/// Loop-aware simple graph used for catalog matching.
#[derive(Clone, Debug)]
struct Shape {
    adj: Vec<u64>,
    looped: Vec<bool>,
}

impl Shape {
    fn from_graph(gr: &LoopGraph) -> Option<Shape> {
        let n = gr.vertex_count();
        if n > 64 {
            return None;
        }
        let mut adj = vec![0u64; n];
        for (u, v, _) in gr.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Some(Shape {
            adj,
            looped: (0..n).map(|v| gr.is_looped(v)).collect(),
        })
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn edges(&self) -> u32 {
        self.adj.iter().map(|a| a.count_ones()).sum::<u32>() / 2
    }

    fn isomorphic(&self, other: &Shape) -> bool {
        let n = self.n();
        if n != other.n() || self.edges() != other.edges() {
            return false;
        }
        let key = |s: &Shape, v: usize| (s.adj[v].count_ones(), s.looped[v]);
        let mut ka: Vec<_> = (0..n).map(|v| key(self, v)).collect();
        let mut kb: Vec<_> = (0..n).map(|v| key(other, v)).collect();
        ka.sort_unstable();
        kb.sort_unstable();
        if ka != kb {
            return false;
        }
        // BFS order keeps each new vertex adjacent to mapped ones
        let mut order = Vec::with_capacity(n);
        let mut seen = 0u64;
        for s in 0..n {
            if seen >> s & 1 == 1 {
                continue;
            }
            seen |= 1 << s;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                order.push(v);
                let mut nb = self.adj[v] & !seen;
                while nb != 0 {
                    let u = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    seen |= 1 << u;
                    q.push_back(u);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut used = 0u64;
        self.extend_iso(other, &order, 0, &mut map, &mut used)
    }

    fn extend_iso(&self, other: &Shape, order: &[usize], depth: usize, map: &mut [usize], used: &mut u64) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for t in 0..other.n() {
            if *used >> t & 1 == 1
                || other.looped[t] != self.looped[v]
                || other.adj[t].count_ones() != self.adj[v].count_ones()
            {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&w| (self.adj[v] >> w & 1) == (other.adj[t] >> map[w] & 1));
            if !consistent {
                continue;
            }
            map[v] = t;
            *used |= 1 << t;
            if self.extend_iso(other, order, depth + 1, map, used) {
                return true;
            }
            *used &= !(1 << t);
            map[v] = usize::MAX;
        }
        false
    }
}

/// Largest component size matched against the catalog.
pub const CATALOG_MAX_VERTICES: usize = 9;

/// Names of the catalog graphs, in matching order.
pub const CATALOG: [&str; 13] = [
    "isolated",
    "looped-vertex",
    "matching-edge",
    "triangle",
    "looped-triangle",
    "triangle+2-loops",
    "3-path+3-loops",
    "C4",
    "C6",
    "K2□K3",
    "K2□K3+1-loop",
    "cube",
    "Z3²-network",
];

/// The catalog graph with the given name.
pub fn catalog_graph(name: &str) -> Option<LoopGraph> {
    let k2 = LoopGraph::complete(2);
    let k3 = LoopGraph::complete(3);
    let k2k3 = || LoopGraph::box_product(&k2, &k3);
    Some(match name {
        "isolated" => LoopGraph::new(1),
        "looped-vertex" => LoopGraph::new(1).with_loops(&[0]),
        "matching-edge" => k2.clone(),
        "triangle" => k3.clone(),
        "looped-triangle" => k3.clone().with_loops(&[0]),
        "triangle+2-loops" => k3.clone().with_loops(&[0, 1]),
        "3-path+3-loops" => LoopGraph::path(3).with_loops(&[0, 1, 2]),
        "C4" => LoopGraph::cycle(4),
        "C6" => LoopGraph::cycle(6),
        "K2□K3" => k2k3(),
        "K2□K3+1-loop" => k2k3().with_loops(&[0]),
        "cube" => LoopGraph::box_product(&LoopGraph::box_product(&k2, &k2), &k2),
        "Z3²-network" => LoopGraph::box_product(&k3, &k3),
        _ => return None,
    })
}

fn catalog() -> &'static [(&'static str, Shape)] {
    static CELL: std::sync::OnceLock<Vec<(&'static str, Shape)>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        CATALOG
            .iter()
            .map(|&n| (n, Shape::from_graph(&catalog_graph(n).unwrap()).unwrap()))
            .collect()
    })
}

/// Catalog name of a connected graph, or `other:<fingerprint>`.
pub fn catalog_label(comp: &LoopGraph) -> String {
    if comp.vertex_count() <= CATALOG_MAX_VERTICES {
        let shape = Shape::from_graph(comp).expect("small component");
        for (name, pattern) in catalog() {
            if shape.isomorphic(pattern) {
                return name.to_string();
            }
        }
    }
    format!("other:{}", fingerprint(comp))
}

/// Isomorphism-invariant fingerprint: sizes plus a hash of colour refinement
/// seeded by loop presence.
pub fn fingerprint(gr: &LoopGraph) -> String {
    let n = gr.vertex_count();
    let adj = gr.adjacency();
    let mut colour: Vec<u64> = (0..n).map(|v| gr.is_looped(v) as u64 + 1).collect();
    for _ in 0..n.min(8) {
        colour = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = adj[v].iter().map(|&u| colour[u]).collect();
                nb.sort_unstable();
                let mut h = Fnv::new();
                h.word(colour[v]);
                for c in nb {
                    h.word(c);
                }
                h.0
            })
            .collect();
    }
    colour.sort_unstable();
    let mut h = Fnv::new();
    for c in colour {
        h.word(c);
    }
    format!("v{}e{}l{}-{:016x}", n, gr.edge_count(), gr.loop_count(), h.0)
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn word(&mut self, w: u64) {
        for b in w.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

/// Multiset of component labels with multiplicities, sorted by label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentSummary {
    pub entries: Vec<(String, usize)>,
}

impl ComponentSummary {
    pub fn count(&self, label: &str) -> usize {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, c)| c)
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn from_labels<I: IntoIterator<Item = String>>(labels: I) -> Self {
        let mut m: BTreeMap<String, usize> = BTreeMap::new();
        for l in labels {
            *m.entry(l).or_default() += 1;
        }
        ComponentSummary {
            entries: m.into_iter().collect(),
        }
    }
}

impl Serialize for ComponentSummary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            label: &'a str,
            count: usize,
        }
        s.collect_seq(self.entries.iter().map(|(l, c)| Entry { label: l, count: *c }))
    }
}

impl fmt::Display for ComponentSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("(empty)");
        }
        let parts: Vec<String> = self.entries.iter().map(|(l, c)| format!("{c}x{l}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn summarize(gr: &LoopGraph) -> ComponentSummary {
    ComponentSummary::from_labels(components(gr).iter().map(catalog_label))
}
