//! Direct checkers for the named problems, written from their definitions.

use super::{guard, holds, OracleError};
use crate::formulas::MsoFormula;
use crate::graphs::ColoredGraph;
use crate::problems::{AllianceVariant, PartProperty};

const MAX_PROBLEM_VERTICES: usize = 20;
const MAX_PARTITION_VERTICES: usize = 24;

fn adj_masks(g: &ColoredGraph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// A vertex cover `C` with `|C| ≤ size_bound` where no vertex has more than
/// `fairness` neighbors in `C`.
pub fn fair_vertex_cover(g: &ColoredGraph, size_bound: usize, fairness: usize) -> Result<bool, OracleError> {
    guard("fair vertex cover", g.n(), MAX_PROBLEM_VERTICES)?;
    let adj = adj_masks(g);
    let edges = g.edges();
    Ok((0u64..1 << g.n()).any(|c| {
        c.count_ones() as usize <= size_bound
            && edges.iter().all(|&(u, v)| c >> u & 1 == 1 || c >> v & 1 == 1)
            && adj.iter().all(|&a| (a & c).count_ones() as usize <= fairness)
    }))
}

/// A partition into `k` classes each inducing maximum degree at most `d`.
pub fn defective_coloring(g: &ColoredGraph, k: usize, d: usize) -> Result<bool, OracleError> {
    guard("defective coloring", g.n(), MAX_PROBLEM_VERTICES)?;
    if g.n() == 0 {
        return Ok(true);
    }
    let adj = adj_masks(g);
    let mut classes = vec![0u64; k];
    Ok(color_from(0, g.n(), &adj, d, &mut classes))
}

fn color_from(v: usize, n: usize, adj: &[u64], d: usize, classes: &mut [u64]) -> bool {
    if v == n {
        return true;
    }
    let first_empty = classes.iter().position(|&c| c == 0).unwrap_or(classes.len());
    for i in 0..classes.len().min(first_empty + 1) {
        let class = classes[i] | 1 << v;
        let ok = (0..=v)
            .filter(|&u| class >> u & 1 == 1)
            .all(|u| (adj[u] & class).count_ones() as usize <= d);
        if ok {
            classes[i] = class;
            if color_from(v + 1, n, adj, d, classes) {
                return true;
            }
            classes[i] &= !(1 << v);
        }
    }
    false
}

/// A nonempty r-alliance `S` of the given kind with `|S| ≤ size_bound`,
/// dominating when `global` is set.
pub fn alliance(
    g: &ColoredGraph,
    variant: AllianceVariant,
    r: i64,
    global: bool,
    size_bound: usize,
) -> Result<bool, OracleError> {
    guard("alliance", g.n(), MAX_PROBLEM_VERTICES)?;
    let n = g.n();
    let adj = adj_masks(g);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // |N[v] ∩ S| ≥ |N[v] \ S| + r
    let strong = |v: usize, s: u64| {
        let closed = adj[v] | 1 << v;
        (closed & s).count_ones() as i64 >= (closed & !s).count_ones() as i64 + r
    };
    Ok((1u64..=all).any(|s| {
        if s.count_ones() as usize > size_bound {
            return false;
        }
        let boundary = (0..n)
            .filter(|&v| s >> v & 1 == 0 && adj[v] & s != 0)
            .fold(0u64, |m, v| m | 1 << v);
        let defensive = (0..n).filter(|&v| s >> v & 1 == 1).all(|v| strong(v, s));
        let offensive = (0..n).filter(|&v| boundary >> v & 1 == 1).all(|v| strong(v, s));
        let kind = match variant {
            AllianceVariant::Defensive => defensive,
            AllianceVariant::Offensive => offensive,
            AllianceVariant::Powerful => defensive && offensive,
        };
        let dominating = (0..n).all(|v| s >> v & 1 == 1 || adj[v] & s != 0);
        kind && (!global || dominating)
    }))
}

/// A partition into `r` parts of sizes `⌊n/r⌋` or `⌈n/r⌉`, each independent or
/// each inducing a connected graph. Empty parts count as connected.
pub fn equitable_partition(g: &ColoredGraph, r: usize, property: PartProperty) -> Result<bool, OracleError> {
    let n = g.n();
    if r == 0 {
        return Ok(n == 0);
    }
    let (lo, hi) = (n / r, n.div_ceil(r));
    let mut weight = vec![1usize; n];
    let mut adj = adj_masks_wide(g);
    let mut alive: Vec<usize> = (0..n).collect();
    if property == PartProperty::Connected && lo >= 2 {
        // A connected part of two or more vertices holding a pendant also
        // holds the pendant's neighbor, so the pendant can be merged into it.
        let mut merged = vec![false; n];
        for v in 0..n {
            if g.degree(v) == 1 && !merged[v] {
                let u = g.neighbors(v)[0];
                if merged[u] || (g.degree(u) == 1 && u > v) {
                    continue;
                }
                merged[v] = true;
                weight[u] += weight[v];
                weight[v] = 0;
            }
        }
        alive.retain(|&v| !merged[v]);
        for v in 0..n {
            adj[v] = adj[v].iter().copied().filter(|&w| !merged[w]).collect();
        }
    }
    guard("equitable partition", alive.len(), MAX_PARTITION_VERTICES)?;
    let index: std::collections::HashMap<usize, usize> =
        alive.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local_adj: Vec<u64> = alive
        .iter()
        .map(|&v| adj[v].iter().filter_map(|w| index.get(w)).fold(0u64, |m, &i| m | 1 << i))
        .collect();
    let local_weight: Vec<usize> = alive.iter().map(|&v| weight[v]).collect();
    let mut parts = vec![0u64; r];
    let mut sizes = vec![0usize; r];
    let search = PartitionSearch {
        adj: &local_adj,
        weight: &local_weight,
        lo,
        hi,
        property,
    };
    Ok(search.assign(0, &mut parts, &mut sizes))
}

fn adj_masks_wide(g: &ColoredGraph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

struct PartitionSearch<'a> {
    adj: &'a [u64],
    weight: &'a [usize],
    lo: usize,
    hi: usize,
    property: PartProperty,
}

impl PartitionSearch<'_> {
    fn assign(&self, v: usize, parts: &mut [u64], sizes: &mut [usize]) -> bool {
        if v == self.adj.len() {
            return sizes.iter().all(|&s| self.lo <= s && s <= self.hi)
                && (self.property == PartProperty::Independent
                    || parts.iter().all(|&p| self.connected(p)));
        }
        let first_empty = parts.iter().position(|&p| p == 0).unwrap_or(parts.len());
        for i in 0..parts.len().min(first_empty + 1) {
            if sizes[i] + self.weight[v] > self.hi {
                continue;
            }
            if self.property == PartProperty::Independent && self.adj[v] & parts[i] != 0 {
                continue;
            }
            parts[i] |= 1 << v;
            sizes[i] += self.weight[v];
            if self.assign(v + 1, parts, sizes) {
                return true;
            }
            parts[i] &= !(1 << v);
            sizes[i] -= self.weight[v];
        }
        false
    }

    fn connected(&self, part: u64) -> bool {
        if part == 0 {
            return true;
        }
        let mut seen = part & part.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & part & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == part
    }
}

/// A set `C` with `|C| ≤ k` and a map from edges to endpoints in `C` loading
/// each `v` at most `caps[v]` times.
pub fn capacitated_vertex_cover(g: &ColoredGraph, caps: &[usize], k: usize) -> Result<bool, OracleError> {
    guard("capacitated vertex cover", g.n(), MAX_PROBLEM_VERTICES)?;
    let edges = g.edges();
    Ok((0u64..1 << g.n()).any(|c| {
        c.count_ones() as usize <= k && {
            let mut load = vec![0usize; g.n()];
            cover_edges(&edges, 0, c, caps, &mut load)
        }
    }))
}

fn cover_edges(edges: &[(usize, usize)], e: usize, c: u64, caps: &[usize], load: &mut [usize]) -> bool {
    let Some(&(u, v)) = edges.get(e) else {
        return true;
    };
    for x in [u, v] {
        if c >> x & 1 == 1 && load[x] < caps[x] {
            load[x] += 1;
            let ok = cover_edges(edges, e + 1, c, caps, load);
            load[x] -= 1;
            if ok {
                return true;
            }
        }
    }
    false
}

/// A set `D` with `|D| ≤ k` and a map sending each vertex outside `D` to a
/// neighbor in `D`, loading each `u` at most `caps[u]` times.
pub fn capacitated_dominating_set(g: &ColoredGraph, caps: &[usize], k: usize) -> Result<bool, OracleError> {
    guard("capacitated dominating set", g.n(), MAX_PROBLEM_VERTICES)?;
    Ok((0u64..1 << g.n()).any(|d| {
        if d.count_ones() as usize > k {
            return false;
        }
        let outside: Vec<usize> = (0..g.n()).filter(|&v| d >> v & 1 == 0).collect();
        let mut load = vec![0usize; g.n()];
        dominate(g, &outside, 0, d, caps, &mut load)
    }))
}

fn dominate(g: &ColoredGraph, outside: &[usize], i: usize, d: u64, caps: &[usize], load: &mut [usize]) -> bool {
    let Some(&v) = outside.get(i) else {
        return true;
    };
    for &u in g.neighbors(v) {
        if d >> u & 1 == 1 && load[u] < caps[u] {
            load[u] += 1;
            let ok = dominate(g, outside, i + 1, d, caps, load);
            load[u] -= 1;
            if ok {
                return true;
            }
        }
    }
    false
}

/// At most `k` deletions leave maximum degree at most `d`.
pub fn bounded_degree_deletion(g: &ColoredGraph, k: usize, d: usize) -> Result<bool, OracleError> {
    guard("bounded-degree deletion", g.n(), MAX_PROBLEM_VERTICES)?;
    let adj = adj_masks(g);
    Ok((0u64..1 << g.n()).any(|del| {
        del.count_ones() as usize <= k
            && (0..g.n())
                .filter(|&v| del >> v & 1 == 0)
                .all(|v| (adj[v] & !del).count_ones() as usize <= d)
    }))
}

/// `X ⊆ V` with `|X| ≤ k` and `Y ⊆ E` such that every edge of `Y` has an
/// endpoint in `X`, each `x ∈ X` is an endpoint of at most `caps[x]` edges of
/// `Y`, and `φ(X, Y)` holds.
pub fn capacitated_mso2(
    g: &ColoredGraph,
    formula: &MsoFormula,
    caps: &[usize],
    k: usize,
) -> Result<bool, OracleError> {
    let edges = g.edges();
    guard("capacitated MSO₂ assignment", g.n() + edges.len(), super::MAX_ASSIGNMENT_BITS)?;
    for x in 0u64..1 << g.n() {
        if x.count_ones() as usize > k {
            continue;
        }
        for y in 0u64..1 << edges.len() {
            let ys: Vec<usize> = (0..edges.len()).filter(|&e| y >> e & 1 == 1).collect();
            if !ys.iter().all(|&e| x >> edges[e].0 & 1 == 1 || x >> edges[e].1 & 1 == 1) {
                continue;
            }
            let loads_ok = (0..g.n()).filter(|&v| x >> v & 1 == 1).all(|v| {
                ys.iter().filter(|&&e| edges[e].0 == v || edges[e].1 == v).count() <= caps[v]
            });
            if !loads_ok {
                continue;
            }
            let xs: Vec<usize> = (0..g.n()).filter(|&v| x >> v & 1 == 1).collect();
            if holds(g, formula, &[xs, ys])? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fair_vc_star() {
        let star = ColoredGraph::star(3);
        assert!(fair_vertex_cover(&star, 1, 1).unwrap());
        assert!(!fair_vertex_cover(&star, 0, 3).unwrap());
        let tri = ColoredGraph::complete(3);
        assert!(!fair_vertex_cover(&tri, 3, 1).unwrap());
        assert!(fair_vertex_cover(&tri, 2, 2).unwrap());
    }

    #[test]
    fn defective_examples() {
        let k4 = ColoredGraph::complete(4);
        assert!(!defective_coloring(&k4, 3, 0).unwrap());
        assert!(defective_coloring(&k4, 4, 0).unwrap());
        assert!(defective_coloring(&k4, 2, 1).unwrap());
        assert!(!defective_coloring(&ColoredGraph::cycle(5), 2, 0).unwrap());
    }

    #[test]
    fn alliance_examples() {
        let single = ColoredGraph::empty(1);
        assert!(alliance(&single, AllianceVariant::Defensive, 0, false, 1).unwrap());
        assert!(!alliance(&single, AllianceVariant::Defensive, 2, false, 1).unwrap());
        let p3 = ColoredGraph::path(3);
        assert!(alliance(&p3, AllianceVariant::Defensive, 0, false, 1).unwrap());
        // With r = 1 a leaf has 1 < 1 + 1, while {0,1} gives 2 ≥ 1 and 2 ≥ 2.
        assert!(!alliance(&p3, AllianceVariant::Defensive, 1, false, 1).unwrap());
        assert!(alliance(&p3, AllianceVariant::Defensive, 1, false, 2).unwrap());
        // The center dominates, and each leaf has |N[v] ∩ S| = 1 ≥ |N[v] \ S| = 1.
        assert!(alliance(&p3, AllianceVariant::Offensive, 0, true, 1).unwrap());
        assert!(!alliance(&p3, AllianceVariant::Powerful, 0, true, 1).unwrap());
    }

    #[test]
    fn equitable_examples() {
        let c4 = ColoredGraph::cycle(4);
        assert!(equitable_partition(&c4, 2, PartProperty::Connected).unwrap());
        assert!(equitable_partition(&c4, 2, PartProperty::Independent).unwrap());
        let star = ColoredGraph::star(3);
        assert!(!equitable_partition(&star, 2, PartProperty::Connected).unwrap());
        assert!(!equitable_partition(&star, 2, PartProperty::Independent).unwrap());
        assert!(equitable_partition(&ColoredGraph::empty(3), 5, PartProperty::Connected).unwrap());
        assert!(!equitable_partition(&ColoredGraph::empty(4), 2, PartProperty::Connected).unwrap());
    }

    #[test]
    fn pendant_merging_matches_plain_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(4..9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            let g = ColoredGraph::new(n, edges.iter().copied(), vec![]).unwrap();
            let r = rng.gen_range(1..4);
            let fast = equitable_partition(&g, r, PartProperty::Connected).unwrap();
            let adj = adj_masks(&g);
            let search = PartitionSearch {
                adj: &adj,
                weight: &vec![1; n],
                lo: n / r,
                hi: n.div_ceil(r),
                property: PartProperty::Connected,
            };
            let plain = search.assign(0, &mut vec![0; r], &mut vec![0; r]);
            assert_eq!(fast, plain, "{edges:?} r={r}");
        }
    }

    #[test]
    fn capacitated_examples() {
        let star = ColoredGraph::star(3);
        assert!(capacitated_vertex_cover(&star, &[3, 1, 1, 1], 1).unwrap());
        assert!(!capacitated_vertex_cover(&star, &[2, 1, 1, 1], 1).unwrap());
        assert!(capacitated_vertex_cover(&star, &[2, 1, 1, 1], 2).unwrap());
        assert!(capacitated_dominating_set(&star, &[3, 1, 1, 1], 1).unwrap());
        assert!(!capacitated_dominating_set(&star, &[2, 1, 1, 1], 1).unwrap());
        assert!(capacitated_dominating_set(&star, &[2, 1, 1, 1], 2).unwrap());
    }

    #[test]
    fn bdd_examples() {
        let star = ColoredGraph::star(4);
        assert!(bounded_degree_deletion(&star, 1, 0).unwrap());
        assert!(!bounded_degree_deletion(&ColoredGraph::cycle(4), 1, 0).unwrap());
        assert!(bounded_degree_deletion(&ColoredGraph::cycle(4), 0, 2).unwrap());
    }

    #[test]
    fn capacitated_mso2_examples() {
        use crate::formulas::{parse, Var};
        let free = [Var::vertex_set("A"), Var::edge_set("B")];
        // Every edge is in B: a capacitated edge cover by X.
        let f = parse("forall e:y. y in B", &free).unwrap();
        let star = ColoredGraph::star(2);
        assert!(capacitated_mso2(&star, &f, &[2, 1, 1], 1).unwrap());
        assert!(!capacitated_mso2(&star, &f, &[1, 1, 1], 1).unwrap());
    }
}
