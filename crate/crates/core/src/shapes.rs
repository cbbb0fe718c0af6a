//! S-shapes of assignments.
//!
//! Adding the `s` free sets as new colors refines each `(G, S)`-type into
//! extended types. A shape records which sets every `S`-vertex joins and, per
//! extended type, how many components have it, with counts above the
//! threshold `2^{kq}` collapsed to ⊤.

use std::fmt;
use std::ops::Range;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::evaluator::kernel_threshold;
use crate::graphs::{
    color_words, type_census, Assignment, ColoredGraph, LocalStructure, TypeCensus, TypeCode,
    Vertex, ViSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Exact(usize),
    /// More than the threshold.
    Top,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(c) => write!(f, "{c}"),
            Count::Top => f.write_str("⊤"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Exact(c) => s.serialize_u64(*c as u64),
            Count::Top => s.serialize_str("top"),
        }
    }
}

/// `(σ_S, σ)`: `sigma_s[j]` is the bitmask of sets containing the `j`-th
/// vertex of `S`; `sigma[t]` is the capped count of extended type `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Shape {
    pub sigma_s: Vec<u32>,
    pub sigma: Vec<Count>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("shape counts cannot be realized by the component census")]
    Invalid,
    #[error("assignment colors a component outside the extended-type universe")]
    OutsideUniverse,
    #[error("too many free variables ({0}); at most 16 are supported")]
    TooManyVariables(usize),
}

/// One extended type: a base type plus a coloring of its representative.
#[derive(Clone, Debug)]
pub struct ExtType {
    /// Index into the census entries.
    pub base: usize,
    pub code: TypeCode,
    /// Membership bitmask per canonical position of the base type.
    pub coloring: Vec<u32>,
    /// `#_i(t')`: vertices of one component in `X_i`.
    pub sizes: Vec<usize>,
    /// `d_{i,t'}(v)` for the `j`-th vertex `v` of `S`, as `s_degrees[j][i]`.
    pub s_degrees: Vec<Vec<usize>>,
}

/// All extended types of every base type, grouped by base and sorted by code.
#[derive(Clone, Debug)]
pub struct ExtendedTypeUniverse {
    pub s: usize,
    pub s_order: Vec<Vertex>,
    pub census: TypeCensus,
    pub types: Vec<ExtType>,
    pub by_base: Vec<Range<usize>>,
    structures: Vec<LocalStructure>,
    /// Color words of each representative position with room for `s` extra bits.
    base_words: Vec<Vec<Vec<u64>>>,
    p: usize,
}

impl ExtendedTypeUniverse {
    /// Enumerates all `(2^s)^{|A|}` colorings of each base representative.
    pub fn new(g: &ColoredGraph, s_order: &[Vertex], s: usize) -> Result<Self, ShapeError> {
        Self::with_allowed(g, s_order, s, |_| (0..1u32 << s).collect())
    }

    /// Like [`ExtendedTypeUniverse::new`], but a vertex `v` of a representative
    /// only takes the memberships in `allowed(v)`.
    ///
    /// `allowed` must depend only on the colors of `v`, so that all components
    /// of a base type see the same choices.
    pub fn with_allowed(
        g: &ColoredGraph,
        s_order: &[Vertex],
        s: usize,
        allowed: impl Fn(Vertex) -> Vec<u32>,
    ) -> Result<Self, ShapeError> {
        if s > 16 {
            return Err(ShapeError::TooManyVariables(s));
        }
        let census = type_census(g, s_order);
        let p = g.num_colors();
        let mut universe = ExtendedTypeUniverse {
            s,
            s_order: s_order.to_vec(),
            census: TypeCensus { entries: Vec::new() },
            types: Vec::new(),
            by_base: Vec::new(),
            structures: Vec::new(),
            base_words: Vec::new(),
            p,
        };
        for (b, entry) in census.entries.iter().enumerate() {
            let rep = &entry.components[0];
            let local = LocalStructure::new(g, s_order, &rep.order).expect("component fits");
            universe.base_words.push(rep.order.iter().map(|&v| color_words(g, v, 0, s)).collect());
            universe.structures.push(local);
            let choices: Vec<Vec<u32>> = rep.order.iter().map(|&v| allowed(v)).collect();
            let mut found: Vec<ExtType> = Vec::new();
            if choices.iter().all(|c| !c.is_empty()) {
                let mut digit = vec![0usize; rep.order.len()];
                loop {
                    let coloring: Vec<u32> =
                        digit.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
                    found.push(universe.make_type(b, coloring));
                    if !advance(&mut digit, &choices) {
                        break;
                    }
                }
            }
            found.sort_by(|a, b| a.code.cmp(&b.code));
            found.dedup_by(|a, b| a.code == b.code);
            let start = universe.types.len();
            universe.types.extend(found);
            universe.by_base.push(start..universe.types.len());
        }
        universe.census = census;
        Ok(universe)
    }

    fn make_type(&self, b: usize, coloring: Vec<u32>) -> ExtType {
        let local = &self.structures[b];
        let s = self.s;
        ExtType {
            base: b,
            code: self.code_for(b, &coloring),
            sizes: (0..s)
                .map(|i| coloring.iter().filter(|&&m| m >> i & 1 == 1).count())
                .collect(),
            s_degrees: (0..self.s_order.len())
                .map(|j| {
                    (0..s)
                        .map(|i| {
                            (0..local.len())
                                .filter(|&p| {
                                    local.to_s[p][j / 64] >> (j % 64) & 1 == 1
                                        && coloring[p] >> i & 1 == 1
                                })
                                .count()
                        })
                        .collect()
                })
                .collect(),
            coloring,
        }
    }

    fn code_for(&self, b: usize, coloring: &[u32]) -> TypeCode {
        let words: Vec<Vec<u64>> = self.base_words[b]
            .iter()
            .zip(coloring)
            .map(|(w, &m)| {
                let mut w = w.clone();
                for i in 0..self.s {
                    if m >> i & 1 == 1 {
                        let c = self.p + i;
                        w[c / 64] |= 1 << (c % 64);
                    }
                }
                w
            })
            .collect();
        self.structures[b].canonicalize(&words).0
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn num_bases(&self) -> usize {
        self.census.entries.len()
    }

    /// `n_t` for base type `b`.
    pub fn base_count(&self, b: usize) -> usize {
        self.census.entries[b].count()
    }

    /// Number of vertices of a component of base type `b`.
    pub fn base_size(&self, b: usize) -> usize {
        self.structures[b].len()
    }

    /// Extended type of the `c`-th component of base `b` under `assignment`.
    pub fn ext_type_of(&self, b: usize, c: usize, assignment: &Assignment) -> Option<usize> {
        let comp = &self.census.entries[b].components[c];
        let coloring: Vec<u32> = comp.order.iter().map(|&v| assignment.membership(v)).collect();
        let code = self.code_for(b, &coloring);
        let range = self.by_base[b].clone();
        self.types[range.clone()]
            .binary_search_by(|t| t.code.cmp(&code))
            .ok()
            .map(|i| range.start + i)
    }

    /// Adjacency inside the representative of base `b`, by canonical position.
    pub fn inner_adjacency(&self, b: usize) -> &[u64] {
        &self.structures[b].inner
    }

    /// Whether canonical position `pos` of base `b` is adjacent to the `j`-th vertex of `S`.
    pub fn adjacent_to_s(&self, b: usize, pos: usize, j: usize) -> bool {
        self.structures[b].to_s[pos][j / 64] >> (j % 64) & 1 == 1
    }

    /// Vertex of the representative of base `b` at canonical position `pos`.
    pub fn representative_vertex(&self, b: usize, pos: usize) -> Vertex {
        self.structures[b].vertices[pos]
    }

    /// Sizes `|X_i ∩ S|` under `sigma_s`.
    pub fn s_sizes(&self, sigma_s: &[u32]) -> Vec<usize> {
        (0..self.s)
            .map(|i| sigma_s.iter().filter(|&&m| m >> i & 1 == 1).count())
            .collect()
    }

    /// The assignment that gives the first `counts[t]` unused components of each
    /// base the coloring of `t`, in ascending order of component.
    pub fn realize(&self, n: usize, sigma_s: &[u32], counts: &[usize]) -> Result<Assignment, ShapeError> {
        let mut a = Assignment::empty(n, self.s);
        for (j, &v) in self.s_order.iter().enumerate() {
            for i in 0..self.s {
                if sigma_s[j] >> i & 1 == 1 {
                    a.insert(i, v);
                }
            }
        }
        for (b, entry) in self.census.entries.iter().enumerate() {
            let range = self.by_base[b].clone();
            if range.clone().map(|t| counts[t]).sum::<usize>() != entry.count() {
                return Err(ShapeError::Invalid);
            }
            let mut comps = entry.components.iter();
            for t in range {
                for comp in comps.by_ref().take(counts[t]) {
                    for (pos, &v) in comp.order.iter().enumerate() {
                        for i in 0..self.s {
                            if self.types[t].coloring[pos] >> i & 1 == 1 {
                                a.insert(i, v);
                            }
                        }
                    }
                }
            }
        }
        Ok(a)
    }
}

fn advance(digit: &mut [usize], choices: &[Vec<u32>]) -> bool {
    for (d, c) in digit.iter_mut().zip(choices) {
        *d += 1;
        if *d < c.len() {
            return true;
        }
        *d = 0;
    }
    false
}

/// The shapes of one graph for a fixed vi-set and threshold.
#[derive(Clone, Debug)]
pub struct ShapeSpace {
    pub universe: ExtendedTypeUniverse,
    pub n: usize,
    pub threshold: usize,
}

impl ShapeSpace {
    /// Shapes over all colorings with threshold `2^{kq}`.
    pub fn new(g: &ColoredGraph, vi: &ViSet, s: usize, q: usize) -> Result<Self, ShapeError> {
        let threshold = usize::try_from(kernel_threshold(vi.k, q)).unwrap_or(usize::MAX);
        Ok(ShapeSpace {
            universe: ExtendedTypeUniverse::new(g, &vi.set, s)?,
            n: g.n(),
            threshold,
        })
    }

    pub fn from_universe(universe: ExtendedTypeUniverse, n: usize, threshold: usize) -> Self {
        ShapeSpace {
            universe,
            n,
            threshold,
        }
    }

    pub fn cap(&self, c: usize) -> Count {
        if c > self.threshold {
            Count::Top
        } else {
            Count::Exact(c)
        }
    }

    /// `shape(X)`.
    pub fn shape_of(&self, assignment: &Assignment) -> Result<Shape, ShapeError> {
        let u = &self.universe;
        let sigma_s = u.s_order.iter().map(|&v| assignment.membership(v)).collect();
        let mut counts = vec![0usize; u.len()];
        for (b, entry) in u.census.entries.iter().enumerate() {
            for c in 0..entry.count() {
                let t = u.ext_type_of(b, c, assignment).ok_or(ShapeError::OutsideUniverse)?;
                counts[t] += 1;
            }
        }
        Ok(Shape {
            sigma_s,
            sigma: counts.into_iter().map(|c| self.cap(c)).collect(),
        })
    }

    /// Whether some assignment has this shape.
    pub fn is_valid(&self, shape: &Shape) -> bool {
        let u = &self.universe;
        shape.sigma.len() == u.len()
            && shape.sigma_s.len() == u.s_order.len()
            && shape.sigma_s.iter().all(|&m| u.s >= 32 || m >> u.s == 0)
            && (0..u.num_bases()).all(|b| {
                let mut fixed = 0usize;
                let mut tops = 0usize;
                for t in u.by_base[b].clone() {
                    match shape.sigma[t] {
                        Count::Exact(c) if c <= self.threshold => fixed += c,
                        Count::Exact(_) => return false,
                        Count::Top => tops += 1,
                    }
                }
                distribution_fits(u.base_count(b), fixed, tops, self.threshold)
            })
    }

    /// Counts for a valid shape: every ⊤ gets `threshold + 1`, and the surplus
    /// of each base goes to its first ⊤ type.
    pub fn representative_counts(&self, shape: &Shape) -> Result<Vec<usize>, ShapeError> {
        if !self.is_valid(shape) {
            return Err(ShapeError::Invalid);
        }
        let u = &self.universe;
        let mut counts = vec![0usize; u.len()];
        for b in 0..u.num_bases() {
            let mut used = 0;
            let mut first_top = None;
            for t in u.by_base[b].clone() {
                counts[t] = match shape.sigma[t] {
                    Count::Exact(c) => c,
                    Count::Top => {
                        first_top.get_or_insert(t);
                        self.threshold + 1
                    }
                };
                used += counts[t];
            }
            if let Some(t) = first_top {
                counts[t] += u.base_count(b) - used;
            }
        }
        Ok(counts)
    }

    /// `representative(shape)`.
    pub fn representative(&self, shape: &Shape) -> Result<Assignment, ShapeError> {
        let counts = self.representative_counts(shape)?;
        self.universe.realize(self.n, &shape.sigma_s, &counts)
    }

    /// Every valid shape, in a fixed order.
    pub fn valid_shapes(&self) -> impl Iterator<Item = Shape> + '_ {
        let u = &self.universe;
        let all: Vec<u32> = (0..1u32 << u.s).collect();
        let choices = vec![all; u.s_order.len()];
        let admissible = vec![true; u.len()];
        let distributions = self.distributions(&admissible);
        SigmaSIter::new(choices).flat_map(move |sigma_s| {
            ShapeProduct::new(self.universe.len(), &self.universe.by_base, distributions.clone())
                .map(move |sigma| Shape {
                    sigma_s: sigma_s.clone(),
                    sigma,
                })
        })
    }

    /// Per base, every valid count vector over its admissible extended types.
    pub fn distributions(&self, admissible: &[bool]) -> Vec<Vec<Vec<Count>>> {
        let u = &self.universe;
        (0..u.num_bases())
            .map(|b| {
                let range = u.by_base[b].clone();
                let ok: Vec<bool> = range.clone().map(|t| admissible[t]).collect();
                base_distributions(u.base_count(b), &ok, self.threshold)
            })
            .collect()
    }
}

fn distribution_fits(n_b: usize, fixed: usize, tops: usize, threshold: usize) -> bool {
    if tops == 0 {
        fixed == n_b
    } else {
        (threshold as u128 + 1) * tops as u128 + fixed as u128 <= n_b as u128
    }
}

/// All count vectors over the types of one base whose counts can sum to `n_b`.
pub(crate) fn base_distributions(n_b: usize, admissible: &[bool], threshold: usize) -> Vec<Vec<Count>> {
    fn go(
        j: usize,
        n_b: usize,
        admissible: &[bool],
        threshold: usize,
        fixed: usize,
        tops: usize,
        cur: &mut Vec<Count>,
        out: &mut Vec<Vec<Count>>,
    ) {
        let top_cost = (threshold as u128 + 1) * tops as u128 + fixed as u128;
        if top_cost > n_b as u128 {
            return;
        }
        if j == admissible.len() {
            if distribution_fits(n_b, fixed, tops, threshold) {
                out.push(cur.clone());
            }
            return;
        }
        if !admissible[j] {
            cur.push(Count::Exact(0));
            go(j + 1, n_b, admissible, threshold, fixed, tops, cur, out);
            cur.pop();
            return;
        }
        let room = n_b - fixed;
        for c in 0..=room.min(threshold) {
            cur.push(Count::Exact(c));
            go(j + 1, n_b, admissible, threshold, fixed + c, tops, cur, out);
            cur.pop();
        }
        if threshold < n_b {
            cur.push(Count::Top);
            go(j + 1, n_b, admissible, threshold, fixed, tops + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n_b, admissible, threshold, 0, 0, &mut Vec::new(), &mut out);
    out
}

/// Mixed-radix walk over the memberships of the `S`-vertices.
pub(crate) struct SigmaSIter {
    choices: Vec<Vec<u32>>,
    digit: Vec<usize>,
    done: bool,
}

impl SigmaSIter {
    pub fn new(choices: Vec<Vec<u32>>) -> Self {
        let done = choices.iter().any(Vec::is_empty);
        SigmaSIter {
            digit: vec![0; choices.len()],
            choices,
            done,
        }
    }
}

impl Iterator for SigmaSIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.digit.iter().zip(&self.choices).map(|(&d, c)| c[d]).collect();
        self.done = !advance(&mut self.digit, &self.choices);
        Some(out)
    }
}

/// Cartesian product of per-base distributions, as full `σ` vectors.
pub(crate) struct ShapeProduct {
    len: usize,
    ranges: Vec<Range<usize>>,
    lists: Vec<Vec<Vec<Count>>>,
    digit: Vec<usize>,
    done: bool,
}

impl ShapeProduct {
    pub fn new(len: usize, ranges: &[Range<usize>], lists: Vec<Vec<Vec<Count>>>) -> Self {
        let done = lists.iter().any(Vec::is_empty);
        ShapeProduct {
            len,
            ranges: ranges.to_vec(),
            digit: vec![0; lists.len()],
            lists,
            done,
        }
    }
}

impl Iterator for ShapeProduct {
    type Item = Vec<Count>;

    fn next(&mut self) -> Option<Vec<Count>> {
        if self.done {
            return None;
        }
        let mut sigma = vec![Count::Exact(0); self.len];
        for (b, range) in self.ranges.iter().enumerate() {
            sigma[range.clone()].copy_from_slice(&self.lists[b][self.digit[b]]);
        }
        self.done = true;
        for b in 0..self.digit.len() {
            self.digit[b] += 1;
            if self.digit[b] < self.lists[b].len() {
                self.done = false;
                break;
            }
            self.digit[b] = 0;
        }
        Some(sigma)
    }
}
