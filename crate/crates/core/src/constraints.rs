//! Global and local linear cardinality constraints.
//!
//! A global constraint is one inequality `a·(|X_1|, ..., |X_s|) ≤ b`. A local
//! constraint bounds `|X_i ∩ N(v)|` by an interval per variable and vertex.

use serde::{Deserialize, Serialize};

use crate::formulas::PreEvaluation;
use crate::graphs::{Assignment, ColoredGraph, Vertex};
use crate::ilp::{LinearRow, LinearSystem};

/// The integer interval `[lo, hi]`; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: 1, hi: 0 };

    pub fn new(lo: usize, hi: usize) -> Self {
        if lo > hi {
            Self::EMPTY
        } else {
            Interval { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: usize) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlobalConstraint {
    pub coeffs: Vec<i64>,
    pub bound: i64,
}

impl GlobalConstraint {
    pub fn new(coeffs: Vec<i64>, bound: i64) -> Self {
        GlobalConstraint { coeffs, bound }
    }

    /// `|X_i| ≤ bound`, as a constraint over `arity` variables.
    pub fn at_most(arity: usize, i: usize, bound: i64) -> Self {
        let mut coeffs = vec![0; arity];
        coeffs[i] = 1;
        Self::new(coeffs, bound)
    }

    /// `|X_i| ≥ bound`.
    pub fn at_least(arity: usize, i: usize, bound: i64) -> Self {
        let mut coeffs = vec![0; arity];
        coeffs[i] = -1;
        Self::new(coeffs, -bound)
    }

    pub fn holds(&self, sizes: &[usize]) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .zip(sizes)
            .map(|(&a, &y)| a as i128 * y as i128)
            .sum();
        lhs <= self.bound as i128
    }
}

/// Truth values of the global constraints on the given set sizes.
pub fn evaluate_globals(globals: &[GlobalConstraint], sizes: &[usize]) -> PreEvaluation {
    PreEvaluation(globals.iter().map(|r| r.holds(sizes)).collect())
}

/// `α_i(v)` for every variable `i` and vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalConstraintTable {
    n: usize,
    table: Vec<Vec<Interval>>,
}

impl LocalConstraintTable {
    /// Every interval is `[0, n]`.
    pub fn unconstrained(arity: usize, n: usize) -> Self {
        LocalConstraintTable {
            n,
            table: vec![vec![Interval::new(0, n); n]; arity],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.table.len()
    }

    pub fn get(&self, i: usize, v: Vertex) -> Interval {
        self.table[i][v]
    }

    pub fn set(&mut self, i: usize, v: Vertex, interval: Interval) {
        self.table[i][v] = interval;
    }

    /// True if no interval excludes any count in `[0, deg(v)]`.
    pub fn is_trivial_on(&self, g: &ColoredGraph) -> bool {
        self.table
            .iter()
            .all(|row| (0..self.n).all(|v| row[v].lo == 0 && row[v].hi >= g.degree(v)))
    }

    /// The same table on `n_new ≥ n` vertices; the new vertices get `[0, n_new]`.
    pub fn extend_to(&self, n_new: usize) -> LocalConstraintTable {
        let mut out = LocalConstraintTable::unconstrained(self.arity(), n_new);
        for i in 0..self.arity() {
            for v in 0..self.n.min(n_new) {
                out.table[i][v] = self.table[i][v];
            }
        }
        out
    }
}

/// `|X_i ∩ N(v)| ∈ α_i(v)` for every `v` in `where_` and every `i`.
pub fn obeys_at(
    g: &ColoredGraph,
    assignment: &Assignment,
    table: &LocalConstraintTable,
    where_: &[Vertex],
) -> bool {
    where_.iter().all(|&v| {
        (0..table.arity()).all(|i| {
            let count = g
                .neighbors(v)
                .iter()
                .filter(|&&w| assignment.contains(i, w))
                .count();
            table.get(i, v).contains(count)
        })
    })
}

/// Intersects the interval of every `v ∉ S` with `[0, k-1]`.
///
/// Such a vertex has at most `k - 1` neighbors, so the result admits exactly the
/// same assignments.
pub fn restrict_to_small_degrees(
    table: &LocalConstraintTable,
    s_set: &[Vertex],
    k: usize,
) -> LocalConstraintTable {
    let mut out = table.clone();
    let cap = Interval::new(0, k.saturating_sub(1));
    let mut in_s = vec![false; table.n];
    for &v in s_set {
        in_s[v] = true;
    }
    for row in &mut out.table {
        for v in 0..table.n {
            if !in_s[v] {
                row[v] = if k == 0 { Interval::EMPTY } else { row[v].intersect(cap) };
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct UniformizationResult {
    pub graph: ColoredGraph,
    /// `registry[c]` is the `(variable, interval)` meaning of color `p + c`.
    pub registry: Vec<(usize, Interval)>,
    pub base_colors: usize,
}

/// Adds one color `C^i_B` per variable `i` and interval `B` occurring off `S`.
pub fn uniformize(
    g: &ColoredGraph,
    s_order: &[Vertex],
    table: &LocalConstraintTable,
) -> UniformizationResult {
    let mut in_s = vec![false; g.n()];
    for &v in s_order {
        in_s[v] = true;
    }
    let mut registry: Vec<(usize, Interval)> = Vec::new();
    for i in 0..table.arity() {
        for v in (0..g.n()).filter(|&v| !in_s[v]) {
            registry.push((i, table.get(i, v)));
        }
    }
    registry.sort();
    registry.dedup();
    let mut graph = g.clone();
    for &(i, interval) in &registry {
        let mask = (0..g.n())
            .map(|v| !in_s[v] && table.get(i, v) == interval)
            .collect();
        graph.push_color_mask(mask);
    }
    UniformizationResult {
        graph,
        registry,
        base_colors: g.num_colors(),
    }
}

/// The rows of `R_γ` over the size variables `y_1..y_s`.
///
/// A false atom `a·y ≤ b` becomes its integer complement `-a·y ≤ -(b+1)`.
pub fn gamma_rows(globals: &[GlobalConstraint], gamma: &PreEvaluation) -> Vec<LinearRow> {
    globals
        .iter()
        .zip(&gamma.0)
        .map(|(r, &truth)| {
            if truth {
                LinearRow::new(r.coeffs.clone(), r.bound)
            } else {
                LinearRow::new(r.coeffs.iter().map(|&a| -a).collect(), -(r.bound + 1))
            }
        })
        .collect()
}

/// `R_γ` as a system over `s` unbounded size variables.
pub fn gamma_inequalities(globals: &[GlobalConstraint], gamma: &PreEvaluation) -> LinearSystem {
    let dim = globals.first().map_or(0, |r| r.coeffs.len());
    let mut sys = LinearSystem::new(dim);
    sys.rows = gamma_rows(globals, gamma);
    sys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::enumerate_pre_evaluations;

    #[test]
    fn obeys_examples() {
        let k2 = ColoredGraph::complete(2);
        let x = Assignment::from_sets(2, &[vec![0]]);
        let free = LocalConstraintTable::unconstrained(1, 2);
        assert!(obeys_at(&k2, &x, &free, &[0, 1]));
        let mut t = free.clone();
        t.set(0, 1, Interval::new(1, 1));
        assert!(obeys_at(&k2, &x, &t, &[1]));
        t.set(0, 1, Interval::new(0, 0));
        assert!(!obeys_at(&k2, &x, &t, &[1]));

        let star = ColoredGraph::star(3);
        let x = Assignment::from_sets(4, &[vec![0]]);
        let mut t = LocalConstraintTable::unconstrained(1, 4);
        t.set(0, 0, Interval::new(0, 0));
        for leaf in 1..4 {
            t.set(0, leaf, Interval::new(1, 1));
        }
        assert!(obeys_at(&star, &x, &t, &[0, 1, 2, 3]));
    }

    #[test]
    fn restriction_examples() {
        let mut t = LocalConstraintTable::unconstrained(1, 4);
        t.set(0, 0, Interval::new(0, 1));
        let r = restrict_to_small_degrees(&t, &[0], 3);
        assert_eq!(r.get(0, 1), Interval::new(0, 2));
        assert_eq!(r.get(0, 0), Interval::new(0, 1));
        t.set(0, 2, Interval::new(3, 4));
        let r = restrict_to_small_degrees(&t, &[0], 3);
        assert!(r.get(0, 2).is_empty());
    }

    #[test]
    fn uniformize_examples() {
        let g = ColoredGraph::empty(2);
        let mut t = LocalConstraintTable::unconstrained(1, 2);
        t.set(0, 0, Interval::new(0, 0));
        t.set(0, 1, Interval::new(0, 1));
        let u = uniformize(&g, &[], &t);
        assert_eq!(u.registry.len(), 2);
        let a = crate::graphs::canonical_type(&u.graph, &[], &[0]).unwrap();
        let b = crate::graphs::canonical_type(&u.graph, &[], &[1]).unwrap();
        assert_ne!(a.code, b.code);

        let same = LocalConstraintTable::unconstrained(2, 2);
        let u = uniformize(&g, &[], &same);
        assert_eq!(u.registry.len(), 2);
        assert_eq!(u.graph.num_colors(), 2);
        assert_eq!(crate::graphs::type_census(&u.graph, &[]).entries.len(), 1);
    }

    #[test]
    fn gamma_examples() {
        let r = vec![GlobalConstraint::new(vec![1, -1], 0)];
        let rows = gamma_rows(&r, &PreEvaluation(vec![true]));
        assert_eq!(rows, vec![LinearRow::new(vec![1, -1], 0)]);
        let rows = gamma_rows(&r, &PreEvaluation(vec![false]));
        assert_eq!(rows, vec![LinearRow::new(vec![-1, 1], -1)]);
        assert!(gamma_inequalities(&[], &PreEvaluation(vec![])).rows.is_empty());
    }

    #[test]
    fn gamma_rows_match_truth_values() {
        let globals = vec![
            GlobalConstraint::new(vec![1, -1], 0),
            GlobalConstraint::new(vec![2, 1], 4),
        ];
        for gamma in enumerate_pre_evaluations(2) {
            let rows = gamma_rows(&globals, &gamma);
            for y0 in 0..5 {
                for y1 in 0..5 {
                    let y = [y0 as i64, y1 as i64];
                    let sat = rows.iter().all(|r| r.satisfied(&y));
                    assert_eq!(sat, evaluate_globals(&globals, &[y0, y1]) == gamma);
                }
            }
        }
    }
}
