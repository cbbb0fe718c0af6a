//! Colored graphs, connected components, vi(k)-sets and canonical component types.
//!
//! A component type is the isomorphism class of `G[S ∪ A]` for a component `A` of
//! `G - S`, where the isomorphism must fix every vertex of `S`. Types are encoded
//! as [`TypeCode`]s; two components get equal codes exactly when such an
//! isomorphism exists.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex set is not a component of G - S")]
    NotAComponent,
    #[error("component has {0} vertices; canonical forms support at most 64")]
    ComponentTooLarge(usize),
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// A simple undirected graph with `p` vertex subsets ("colors").
///
/// A vertex may carry any number of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    colors: Vec<Vec<bool>>,
}

impl ColoredGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        colors: Vec<Vec<Vertex>>,
    ) -> Result<Self, GraphError> {
        let mut g = ColoredGraph {
            n,
            adj: vec![Vec::new(); n],
            colors: Vec::new(),
        };
        let mut seen = HashSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        for members in colors {
            g.push_color(&members)?;
        }
        Ok(g)
    }

    /// An edgeless, uncolored graph.
    pub fn empty(n: usize) -> Self {
        ColoredGraph {
            n,
            adj: vec![Vec::new(); n],
            colors: Vec::new(),
        }
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i)), vec![]).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)), vec![]).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges, vec![]).expect("clique is simple")
    }

    /// `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v)), vec![]).expect("star is simple")
    }

    /// Appends a new color and returns its 0-based index.
    pub fn push_color(&mut self, members: &[Vertex]) -> Result<usize, GraphError> {
        let mut mask = vec![false; self.n];
        for &v in members {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            mask[v] = true;
        }
        self.colors.push(mask);
        Ok(self.colors.len() - 1)
    }

    pub fn push_color_mask(&mut self, mask: Vec<bool>) -> usize {
        assert_eq!(mask.len(), self.n);
        self.colors.push(mask);
        self.colors.len() - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn has_color(&self, v: Vertex, color: usize) -> bool {
        self.colors[color][v]
    }

    pub fn color_mask(&self, color: usize) -> &[bool] {
        &self.colors[color]
    }

    pub fn color_members(&self, color: usize) -> Vec<Vertex> {
        (0..self.n).filter(|&v| self.colors[color][v]).collect()
    }

    /// `cor(v)`: the colors carried by `v`.
    pub fn cor(&self, v: Vertex) -> Vec<usize> {
        (0..self.colors.len()).filter(|&c| self.colors[c][v]).collect()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `keep` (renumbered in the given order), colors restricted.
    pub fn induced(&self, keep: &[Vertex]) -> ColoredGraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![Vec::new(); keep.len()];
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != usize::MAX {
                    adj[i].push(index[w]);
                }
            }
            adj[i].sort_unstable();
        }
        let colors = self
            .colors
            .iter()
            .map(|mask| keep.iter().map(|&v| mask[v]).collect())
            .collect();
        ColoredGraph {
            n: keep.len(),
            adj,
            colors,
        }
    }

    /// Applies the vertex permutation `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[Vertex]) -> ColoredGraph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![Vec::new(); self.n];
        for v in 0..self.n {
            adj[perm[v]] = self.adj[v].iter().map(|&w| perm[w]).collect();
            adj[perm[v]].sort_unstable();
        }
        let colors = self
            .colors
            .iter()
            .map(|mask| {
                let mut out = vec![false; self.n];
                for v in 0..self.n {
                    out[perm[v]] = mask[v];
                }
                out
            })
            .collect();
        ColoredGraph {
            n: self.n,
            adj,
            colors,
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            colors: (0..self.colors.len()).map(|c| self.color_members(c)).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        Self::new(
            json.n,
            json.edges.iter().map(|e| (e[0], e[1])),
            json.colors.clone(),
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let json: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph JSON serializes")
    }
}

/// On-disk graph format: 0-based vertices, positional colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default)]
    pub colors: Vec<Vec<Vertex>>,
}

/// A tuple of vertex subsets `(X_1, ..., X_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: usize,
    members: Vec<Vec<bool>>,
}

impl Assignment {
    pub fn empty(n: usize, arity: usize) -> Self {
        Assignment {
            n,
            members: vec![vec![false; n]; arity],
        }
    }

    pub fn from_sets(n: usize, sets: &[Vec<Vertex>]) -> Self {
        let mut a = Self::empty(n, sets.len());
        for (i, set) in sets.iter().enumerate() {
            for &v in set {
                a.members[i][v] = true;
            }
        }
        a
    }

    pub fn from_masks(n: usize, members: Vec<Vec<bool>>) -> Self {
        debug_assert!(members.iter().all(|m| m.len() == n));
        Assignment { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize, v: Vertex) -> bool {
        self.members[i][v]
    }

    pub fn insert(&mut self, i: usize, v: Vertex) {
        self.members[i][v] = true;
    }

    pub fn mask(&self, i: usize) -> &[bool] {
        &self.members[i]
    }

    pub fn set(&self, i: usize) -> Vec<Vertex> {
        (0..self.n).filter(|&v| self.members[i][v]).collect()
    }

    pub fn sets(&self) -> Vec<Vec<Vertex>> {
        (0..self.arity()).map(|i| self.set(i)).collect()
    }

    pub fn size(&self, i: usize) -> usize {
        self.members[i].iter().filter(|&&b| b).count()
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.arity()).map(|i| self.size(i)).collect()
    }

    /// Bitmask over the variables: bit `i` set iff `v ∈ X_i`.
    pub fn membership(&self, v: Vertex) -> u32 {
        let mut bits = 0;
        for i in 0..self.arity() {
            if self.members[i][v] {
                bits |= 1 << i;
            }
        }
        bits
    }

    /// Restriction to `keep`, renumbered in order.
    pub fn restrict(&self, keep: &[Vertex]) -> Assignment {
        Assignment {
            n: keep.len(),
            members: self
                .members
                .iter()
                .map(|m| keep.iter().map(|&v| m[v]).collect())
                .collect(),
        }
    }
}

/// Connected components of `g - removed`, each sorted, in ascending order of
/// their minimum vertex.
pub fn components(g: &ColoredGraph, removed: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut blocked = vec![false; g.n()];
    for &v in removed {
        blocked[v] = true;
    }
    components_masked(g, &blocked)
}

pub(crate) fn components_masked(g: &ColoredGraph, blocked: &[bool]) -> Vec<Vec<Vertex>> {
    let mut seen = blocked.to_vec();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A set `S` such that every component of `G - S` has at most `k - |S|` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViSet {
    /// Sorted ascending; this is also the fixed `S` ordering used by type codes.
    pub set: Vec<Vertex>,
    pub k: usize,
}

impl ViSet {
    /// Checks the vi(k)-set condition for an arbitrary `set`.
    pub fn new(g: &ColoredGraph, set: &[Vertex], k: usize) -> Option<ViSet> {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.len() > k {
            return None;
        }
        let budget = k - set.len();
        components(g, &set)
            .iter()
            .all(|c| c.len() <= budget)
            .then_some(ViSet { set, k })
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.set.binary_search(&v).is_ok()
    }

    /// Largest component of `G - S`.
    pub fn max_component(&self, g: &ColoredGraph) -> usize {
        components(g, &self.set).iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Finds some vi(k)-set by bounded branching.
///
/// While some component `C` of `G - S` is larger than `k - |S|`, any valid
/// superset of `S` must hit every connected `(k - |S| + 1)`-vertex subgraph of
/// `C`, so we branch over the vertices of one such subgraph.
pub fn find_vi_set(g: &ColoredGraph, k: usize) -> Option<ViSet> {
    let mut in_s = vec![false; g.n()];
    let mut visited = HashSet::new();
    if vi_branch(g, k, &mut in_s, 0, &mut visited) {
        let set = (0..g.n()).filter(|&v| in_s[v]).collect();
        Some(ViSet { set, k })
    } else {
        None
    }
}

fn vi_branch(
    g: &ColoredGraph,
    k: usize,
    in_s: &mut Vec<bool>,
    size: usize,
    visited: &mut HashSet<Vec<bool>>,
) -> bool {
    if size > k {
        return false;
    }
    let budget = k - size;
    let comps = components_masked(g, in_s);
    let Some(big) = comps.iter().find(|c| c.len() > budget) else {
        return true;
    };
    if size == k {
        return false;
    }
    for v in connected_prefix(g, in_s, big[0], budget + 1) {
        in_s[v] = true;
        if visited.insert(in_s.clone()) && vi_branch(g, k, in_s, size + 1, visited) {
            return true;
        }
        in_s[v] = false;
    }
    false
}

/// First `count` vertices reached by BFS from `start` avoiding `blocked`.
fn connected_prefix(g: &ColoredGraph, blocked: &[bool], start: Vertex, count: usize) -> Vec<Vertex> {
    let mut seen = blocked.to_vec();
    let mut out = Vec::with_capacity(count);
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        out.push(v);
        if out.len() == count {
            break;
        }
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    out
}

/// `vi(G)`; the empty graph has vertex integrity 0.
pub fn vertex_integrity(g: &ColoredGraph) -> usize {
    minimum_vi_set(g).k
}

/// A vi(k)-set for `k = vi(G)`.
pub fn minimum_vi_set(g: &ColoredGraph) -> ViSet {
    if g.n() == 0 {
        return ViSet { set: vec![], k: 0 };
    }
    (1..=g.n())
        .find_map(|k| find_vi_set(g, k))
        .expect("S = ∅ is a vi(n)-set")
}

/// Canonical encoding of a component type.
///
/// Layout: `[|A|, |S|, label words per canonical position..., adjacency rows...]`.
/// A vertex label is its color bitset, its adjacency to `S` (in `S` order) and
/// its degree inside `A`; labels are isomorphism invariants, so the minimum over
/// all orderings has its labels sorted and search only permutes equal labels.
/// Row `i` of the adjacency block holds the bits `adj(pos i, pos j)` for `j < i`,
/// most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeCode(pub Vec<u64>);

impl TypeCode {
    pub fn size(&self) -> usize {
        self.0[0] as usize
    }
}

/// Canonical form of one component plus the witness ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentType {
    pub code: TypeCode,
    /// `order[pos]` is the vertex placed at canonical position `pos`.
    pub order: Vec<Vertex>,
}

impl ComponentType {
    /// Position of each vertex, as `(vertex, position)` pairs.
    pub fn positions(&self) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        self.order.iter().enumerate().map(|(p, &v)| (v, p))
    }
}

/// Raw structure of a component in local indices; colors are supplied
/// separately so extended colorings can reuse the same structure.
#[derive(Clone, Debug)]
pub(crate) struct LocalStructure {
    pub vertices: Vec<Vertex>,
    /// Adjacency inside the component as bitmasks over local indices.
    pub inner: Vec<u64>,
    /// Adjacency to `S` as word vectors over `S` positions.
    pub to_s: Vec<Vec<u64>>,
    pub s_len: usize,
}

impl LocalStructure {
    pub fn new(g: &ColoredGraph, s_order: &[Vertex], comp: &[Vertex]) -> Result<Self, GraphError> {
        if comp.len() > 64 {
            return Err(GraphError::ComponentTooLarge(comp.len()));
        }
        let s_words = s_order.len().div_ceil(64).max(1);
        let mut inner = vec![0u64; comp.len()];
        let mut to_s = vec![vec![0u64; s_words]; comp.len()];
        for (i, &v) in comp.iter().enumerate() {
            for (j, &w) in comp.iter().enumerate() {
                if g.is_adjacent(v, w) {
                    inner[i] |= 1 << j;
                }
            }
            for (j, &s) in s_order.iter().enumerate() {
                if g.is_adjacent(v, s) {
                    to_s[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        Ok(LocalStructure {
            vertices: comp.to_vec(),
            inner,
            to_s,
            s_len: s_order.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Canonical code and local-index order for the given per-vertex color words.
    pub fn canonicalize(&self, color_words: &[Vec<u64>]) -> (TypeCode, Vec<usize>) {
        let m = self.len();
        let labels: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut l = color_words[i].clone();
                l.extend_from_slice(&self.to_s[i]);
                l.push(self.inner[i].count_ones() as u64);
                l
            })
            .collect();
        let mut sorted: Vec<usize> = (0..m).collect();
        sorted.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        // cell_end[pos]: one past the last position sharing pos's label.
        let mut cell_start = vec![0; m];
        for p in 1..m {
            cell_start[p] = if labels[sorted[p]] == labels[sorted[p - 1]] {
                cell_start[p - 1]
            } else {
                p
            };
        }
        let mut cell_end = vec![m; m];
        for p in (0..m.saturating_sub(1)).rev() {
            cell_end[p] = if cell_start[p + 1] == cell_start[p] {
                cell_end[p + 1]
            } else {
                p + 1
            };
        }

        let mut search = CanonSearch {
            inner: &self.inner,
            sorted: &sorted,
            cell_start: &cell_start,
            cell_end: &cell_end,
            order: Vec::with_capacity(m),
            rows: Vec::with_capacity(m),
            used: 0,
            best_rows: None,
            best_order: Vec::new(),
        };
        search.run();
        let best_order = search.best_order;
        let best_rows = search.best_rows.unwrap_or_default();

        let mut code = Vec::with_capacity(2 + m * (labels.first().map_or(0, Vec::len)) + m);
        code.push(m as u64);
        code.push(self.s_len as u64);
        for &i in &best_order {
            code.extend_from_slice(&labels[i]);
        }
        code.extend_from_slice(&best_rows[1.min(best_rows.len())..]);
        (TypeCode(code), best_order)
    }
}

struct CanonSearch<'a> {
    inner: &'a [u64],
    sorted: &'a [usize],
    cell_start: &'a [usize],
    cell_end: &'a [usize],
    order: Vec<usize>,
    rows: Vec<u64>,
    used: u64,
    best_rows: Option<Vec<u64>>,
    best_order: Vec<usize>,
}

impl CanonSearch<'_> {
    fn run(&mut self) {
        let pos = self.order.len();
        let m = self.sorted.len();
        if pos == m {
            self.best_rows = Some(self.rows.clone());
            self.best_order = self.order.clone();
            return;
        }
        for cand_pos in self.cell_start[pos]..self.cell_end[pos] {
            let v = self.sorted[cand_pos];
            if self.used & (1 << v) != 0 {
                continue;
            }
            let mut row = 0u64;
            for (j, &w) in self.order.iter().enumerate() {
                if self.inner[v] & (1 << w) != 0 {
                    row |= 1 << (pos - 1 - j);
                }
            }
            // Prefixes never exceed the best one, so only a tied prefix can lose here.
            if let Some(best) = &self.best_rows {
                if self.rows[..] == best[..pos] && row > best[pos] {
                    continue;
                }
            }
            self.order.push(v);
            self.rows.push(row);
            self.used |= 1 << v;
            self.run();
            self.used &= !(1 << v);
            self.rows.pop();
            self.order.pop();
        }
    }
}

pub(crate) fn color_words(g: &ColoredGraph, v: Vertex, extra: u32, extra_bits: usize) -> Vec<u64> {
    let total = g.num_colors() + extra_bits;
    let mut words = vec![0u64; total.div_ceil(64).max(1)];
    for c in 0..g.num_colors() {
        if g.has_color(v, c) {
            words[c / 64] |= 1 << (c % 64);
        }
    }
    for i in 0..extra_bits {
        if extra & (1 << i) != 0 {
            let c = g.num_colors() + i;
            words[c / 64] |= 1 << (c % 64);
        }
    }
    words
}

/// Canonical `(G, S)`-type of the component `a` of `G - S`.
pub fn canonical_type(
    g: &ColoredGraph,
    s_order: &[Vertex],
    a: &[Vertex],
) -> Result<ComponentType, GraphError> {
    let mut comp = a.to_vec();
    comp.sort_unstable();
    comp.dedup();
    let mut in_s = vec![false; g.n()];
    for &s in s_order {
        in_s[s] = true;
    }
    let is_component = !comp.is_empty()
        && comp.iter().all(|&v| v < g.n() && !in_s[v])
        && components_masked(g, &in_s).contains(&comp);
    if !is_component {
        return Err(GraphError::NotAComponent);
    }
    Ok(canonical_type_unchecked(g, s_order, &comp))
}

pub(crate) fn canonical_type_unchecked(
    g: &ColoredGraph,
    s_order: &[Vertex],
    comp: &[Vertex],
) -> ComponentType {
    let local = LocalStructure::new(g, s_order, comp).expect("component fits in a word");
    let words: Vec<Vec<u64>> = comp.iter().map(|&v| color_words(g, v, 0, 0)).collect();
    let (code, order) = local.canonicalize(&words);
    ComponentType {
        code,
        order: order.into_iter().map(|i| comp[i]).collect(),
    }
}

/// One `(G, S)`-type and the components of `G - S` having it.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub code: TypeCode,
    /// Components in ascending order of minimum vertex, with their witnesses.
    pub components: Vec<ComponentType>,
}

impl CensusEntry {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// Per-type component counts `n_t`, ordered by type code.
#[derive(Clone, Debug)]
pub struct TypeCensus {
    pub entries: Vec<CensusEntry>,
}

impl TypeCensus {
    pub fn counts(&self) -> BTreeMap<TypeCode, usize> {
        self.entries
            .iter()
            .map(|e| (e.code.clone(), e.count()))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(CensusEntry::count).sum()
    }
}

/// Counts the components of `G - S` by canonical type.
pub fn type_census(g: &ColoredGraph, s_order: &[Vertex]) -> TypeCensus {
    let mut by_code: BTreeMap<TypeCode, Vec<ComponentType>> = BTreeMap::new();
    for comp in components(g, s_order) {
        let ty = canonical_type_unchecked(g, s_order, &comp);
        by_code.entry(ty.code.clone()).or_default().push(ty);
    }
    TypeCensus {
        entries: by_code
            .into_iter()
            .map(|(code, components)| CensusEntry { code, components })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_vi(g: &ColoredGraph) -> usize {
        if g.n() == 0 {
            return 0;
        }
        (0u32..1 << g.n())
            .map(|mask| {
                let s: Vec<_> = (0..g.n()).filter(|&v| mask & (1 << v) != 0).collect();
                let big = components(g, &s).iter().map(Vec::len).max().unwrap_or(0);
                s.len() + big
            })
            .min()
            .unwrap()
    }

    #[test]
    fn components_examples() {
        assert_eq!(components(&ColoredGraph::path(3), &[1]), vec![vec![0], vec![2]]);
        assert_eq!(components(&ColoredGraph::complete(3), &[]), vec![vec![0, 1, 2]]);
        assert_eq!(
            components(&ColoredGraph::empty(4), &[0]),
            vec![vec![1], vec![2], vec![3]]
        );
    }

    #[test]
    fn vi_set_examples() {
        let star = ColoredGraph::star(3);
        assert_eq!(find_vi_set(&star, 2).unwrap().set, vec![0]);
        assert_eq!(find_vi_set(&ColoredGraph::empty(5), 1).unwrap().set, Vec::<usize>::new());
        assert!(find_vi_set(&ColoredGraph::complete(4), 3).is_none());
    }

    #[test]
    fn vertex_integrity_examples() {
        assert_eq!(vertex_integrity(&ColoredGraph::empty(5)), 1);
        for n in 1..6 {
            assert_eq!(vertex_integrity(&ColoredGraph::complete(n)), n);
        }
        let c6 = ColoredGraph::cycle(6);
        assert_eq!(brute_vi(&c6), 4);
        assert_eq!(vertex_integrity(&c6), 4);
        assert_eq!(vertex_integrity(&ColoredGraph::empty(0)), 0);
        assert_eq!(find_vi_set(&ColoredGraph::empty(0), 0).unwrap().set, Vec::<usize>::new());
    }

    #[test]
    fn vi_matches_brute_force_on_small_graphs() {
        // every graph on 5 vertices
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e);
            let g = ColoredGraph::new(5, edges, vec![]).unwrap();
            let vi = brute_vi(&g);
            assert_eq!(vertex_integrity(&g), vi);
            assert!(find_vi_set(&g, vi - 1).is_none() || vi == 1);
            let s = find_vi_set(&g, vi).unwrap();
            assert!(ViSet::new(&g, &s.set, vi).is_some());
        }
    }

    #[test]
    fn canonical_type_examples() {
        let g = ColoredGraph::empty(2);
        let a = canonical_type(&g, &[], &[0]).unwrap();
        let b = canonical_type(&g, &[], &[1]).unwrap();
        assert_eq!(a.code, b.code);

        let colored = ColoredGraph::new(2, [], vec![vec![0]]).unwrap();
        let a = canonical_type(&colored, &[], &[0]).unwrap();
        let b = canonical_type(&colored, &[], &[1]).unwrap();
        assert_ne!(a.code, b.code);

        assert_eq!(
            canonical_type(&ColoredGraph::path(3), &[], &[0, 1]),
            Err(GraphError::NotAComponent)
        );
    }

    #[test]
    fn relabeling_component_keeps_code() {
        // S = {0}; component is a path 1-2-3 with 1 attached to S
        let g = ColoredGraph::new(4, [(0, 1), (1, 2), (2, 3)], vec![vec![3]]).unwrap();
        let code = canonical_type(&g, &[0], &[1, 2, 3]).unwrap().code;
        let perm = [0, 3, 1, 2];
        let h = g.relabel(&perm);
        let code2 = canonical_type(&h, &[0], &[3, 1, 2]).unwrap().code;
        assert_eq!(code, code2);
    }

    #[test]
    fn witnesses_give_type_isomorphism() {
        // two triangles hanging off S = {0} through different corners
        let g = ColoredGraph::new(
            7,
            [(1, 2), (2, 3), (1, 3), (0, 1), (4, 5), (5, 6), (4, 6), (0, 6)],
            vec![],
        )
        .unwrap();
        let a = canonical_type(&g, &[0], &[1, 2, 3]).unwrap();
        let b = canonical_type(&g, &[0], &[4, 5, 6]).unwrap();
        assert_eq!(a.code, b.code);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    g.is_adjacent(a.order[i], a.order[j]),
                    g.is_adjacent(b.order[i], b.order[j])
                );
            }
            assert_eq!(g.is_adjacent(a.order[i], 0), g.is_adjacent(b.order[i], 0));
        }
    }

    #[test]
    fn census_examples() {
        let census = type_census(&ColoredGraph::empty(3), &[]);
        assert_eq!(census.entries.len(), 1);
        assert_eq!(census.entries[0].count(), 3);

        let census = type_census(&ColoredGraph::star(3), &[0]);
        assert_eq!(census.entries.len(), 1);
        assert_eq!(census.entries[0].count(), 3);

        let census = type_census(&ColoredGraph::path(3), &[1]);
        assert_eq!(census.entries.len(), 1);
        assert_eq!(census.entries[0].count(), 2);
    }

    #[test]
    fn json_rejects_bad_graphs() {
        assert!(ColoredGraph::from_json_str(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        assert!(ColoredGraph::from_json_str(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
        assert!(ColoredGraph::from_json_str(r#"{"n":2,"edges":[[0,1],[1,0]]}"#).is_err());
        assert!(ColoredGraph::from_json_str(r#"{"n":2,"colors":[[5]]}"#).is_err());
        let g = ColoredGraph::from_json_str(r#"{"n":3,"edges":[[0,1]],"colors":[[2]]}"#).unwrap();
        assert_eq!(ColoredGraph::from_json_str(&g.to_json_string()).unwrap(), g);
    }
}
