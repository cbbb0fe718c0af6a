//! Exhaustive reference implementations.
//!
//! Nothing here reuses the engine or the compiled evaluator: formulas are
//! interpreted straight from the AST with a name-based environment, edge
//! variables range over the real edge set, and constraint arithmetic is redone
//! locally. Every entry point has a hard size guard.

pub mod problems;

use std::collections::HashMap;

use thiserror::Error;

use crate::formulas::{Formula, MsoFormula, Sort};
use crate::graphs::{ColoredGraph, Vertex};
use crate::instance::{MsoglInstance, SetValue, Witness};

/// Upper bound on the number of assignment bits enumerated by the brute-force checkers.
pub const MAX_ASSIGNMENT_BITS: usize = 24;
/// Upper bound on the universe of a quantified set.
pub const MAX_SET_UNIVERSE: usize = 20;
pub const MAX_VI_VERTICES: usize = 20;
pub const MAX_TREEDEPTH_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} needs {size} bits, above the oracle limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("variable `{0}` used with the wrong sort")]
    Sort(String),
    #[error("color C{0} does not exist")]
    MissingColor(usize),
    #[error("global atom R{0} has no constraint")]
    MissingGlobal(usize),
    #[error("edge-sorted formula given to the MSO₁ oracle")]
    EdgeSorts,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub satisfiable: bool,
    pub witness: Option<Witness>,
    /// Number of satisfying assignments.
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    V(Vertex),
    E(usize),
    Vs(u64),
    Es(u64),
}

struct World<'a> {
    g: &'a ColoredGraph,
    edges: Vec<(Vertex, Vertex)>,
    globals: &'a [bool],
}

impl World<'_> {
    fn get<'e>(&self, env: &'e [(String, Val)], name: &str) -> Result<&'e Val, OracleError> {
        env.iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| OracleError::Unbound(name.to_string()))
    }

    fn vertex(&self, env: &[(String, Val)], name: &str) -> Result<Vertex, OracleError> {
        match self.get(env, name)? {
            Val::V(v) => Ok(*v),
            _ => Err(OracleError::Sort(name.to_string())),
        }
    }

    fn sat(&self, f: &Formula, env: &mut Vec<(String, Val)>) -> Result<bool, OracleError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Adj(x, y) => {
                let (a, b) = (self.vertex(env, x)?, self.vertex(env, y)?);
                self.edges.contains(&(a.min(b), a.max(b)))
            }
            Formula::Incident(x, y) => {
                let (v, e) = match (self.get(env, x)?, self.get(env, y)?) {
                    (Val::V(v), Val::E(e)) | (Val::E(e), Val::V(v)) => (*v, *e),
                    _ => return Err(OracleError::Sort(x.clone())),
                };
                self.edges[e].0 == v || self.edges[e].1 == v
            }
            Formula::Equal(x, y) => match (self.get(env, x)?, self.get(env, y)?) {
                (Val::V(a), Val::V(b)) | (Val::E(a), Val::E(b)) => a == b,
                _ => return Err(OracleError::Sort(x.clone())),
            },
            Formula::InSet(x, s) => match (self.get(env, x)?, self.get(env, s)?) {
                (Val::V(a), Val::Vs(m)) | (Val::E(a), Val::Es(m)) => m >> a & 1 == 1,
                _ => return Err(OracleError::Sort(x.clone())),
            },
            Formula::InColor(x, c) => {
                if *c >= self.g.num_colors() {
                    return Err(OracleError::MissingColor(c + 1));
                }
                self.g.has_color(self.vertex(env, x)?, *c)
            }
            Formula::Global(i) => *self
                .globals
                .get(*i)
                .ok_or(OracleError::MissingGlobal(i + 1))?,
            Formula::Not(a) => !self.sat(a, env)?,
            Formula::And(a, b) => self.sat(a, env)? && self.sat(b, env)?,
            Formula::Or(a, b) => self.sat(a, env)? || self.sat(b, env)?,
            Formula::Exists(var, body) | Formula::Forall(var, body) => {
                let exists = matches!(f, Formula::Exists(..));
                let values: Box<dyn Iterator<Item = Val>> = match var.sort {
                    Sort::Vertex => Box::new((0..self.g.n()).map(Val::V)),
                    Sort::Edge => Box::new((0..self.edges.len()).map(Val::E)),
                    Sort::VertexSet => {
                        guard("quantified vertex set", self.g.n(), MAX_SET_UNIVERSE)?;
                        Box::new((0..1u64 << self.g.n()).map(Val::Vs))
                    }
                    Sort::EdgeSet => {
                        guard("quantified edge set", self.edges.len(), MAX_SET_UNIVERSE)?;
                        Box::new((0..1u64 << self.edges.len()).map(Val::Es))
                    }
                };
                let mut result = !exists;
                for value in values {
                    env.push((var.name.clone(), value));
                    let r = self.sat(body, env);
                    env.pop();
                    if r? == exists {
                        result = exists;
                        break;
                    }
                }
                result
            }
        })
    }
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        return Err(OracleError::TooLarge { what, size, limit });
    }
    Ok(())
}

/// Truth of a closed formula (MSO₁ or MSO₂) by direct recursion.
pub fn evaluate(g: &ColoredGraph, f: &Formula) -> Result<bool, OracleError> {
    let world = World {
        g,
        edges: g.edges(),
        globals: &[],
    };
    world.sat(f, &mut Vec::new())
}

/// Truth of `f` with its free variables bound to `sets`: vertex ids for vertex
/// sets, indices into `g.edges()` for edge sets.
pub fn holds(g: &ColoredGraph, f: &MsoFormula, sets: &[Vec<usize>]) -> Result<bool, OracleError> {
    holds_with_globals(g, f, sets, &[])
}

fn holds_with_globals(
    g: &ColoredGraph,
    f: &MsoFormula,
    sets: &[Vec<usize>],
    globals: &[bool],
) -> Result<bool, OracleError> {
    let world = World {
        g,
        edges: g.edges(),
        globals,
    };
    let mut env = Vec::new();
    for (var, members) in f.free.iter().zip(sets) {
        let mask = members.iter().fold(0u64, |m, &x| m | 1 << x);
        let value = match var.sort {
            Sort::EdgeSet => Val::Es(mask),
            _ => Val::Vs(mask),
        };
        env.push((var.name.clone(), value));
    }
    world.sat(&f.body, &mut env)
}

/// Exhaustive MSO-GL-Lin model checking.
pub fn brute_force_msogl(g: &ColoredGraph, inst: &MsoglInstance) -> Result<OracleVerdict, OracleError> {
    if inst.formula.is_mso2() {
        return Err(OracleError::EdgeSorts);
    }
    brute_force_gsogl(g, inst)
}

/// Exhaustive GSO-GL-Lin model checking with native edge semantics.
pub fn brute_force_gsogl(g: &ColoredGraph, inst: &MsoglInstance) -> Result<OracleVerdict, OracleError> {
    let edges = g.edges();
    let widths: Vec<usize> = inst
        .formula
        .free
        .iter()
        .map(|v| if v.sort == Sort::EdgeSet { edges.len() } else { g.n() })
        .collect();
    let total: usize = widths.iter().sum();
    guard("assignment enumeration", total, MAX_ASSIGNMENT_BITS)?;
    let is_edge: Vec<bool> = inst.formula.free.iter().map(|v| v.sort == Sort::EdgeSet).collect();
    let mentioned = mentioned_globals(inst);

    let mut count = 0u64;
    let mut witness = None;
    for bits in 0u64..1 << total {
        let mut sets: Vec<Vec<usize>> = Vec::with_capacity(widths.len());
        let mut offset = 0;
        for &w in &widths {
            sets.push((0..w).filter(|&j| bits >> (offset + j) & 1 == 1).collect());
            offset += w;
        }
        if !satisfies(g, inst, &edges, &mentioned, &sets)? {
            continue;
        }
        count += 1;
        if witness.is_none() {
            let values = sets
                .iter()
                .zip(&is_edge)
                .map(|(set, &edge)| {
                    if edge {
                        SetValue::Edges(set.iter().map(|&e| edges[e]).collect())
                    } else {
                        SetValue::Vertices(set.clone())
                    }
                })
                .collect();
            witness = Some(Witness {
                names: inst.formula.free.iter().map(|v| v.name.clone()).collect(),
                values,
            });
        }
    }
    Ok(OracleVerdict {
        satisfiable: count > 0,
        witness,
        count,
    })
}

fn mentioned_globals(inst: &MsoglInstance) -> Vec<bool> {
    let mut mentioned = vec![false; inst.globals.len()];
    mark_globals(&inst.formula.body, &mut mentioned);
    mentioned
}

/// Locals, globals (those the formula never mentions must hold) and the
/// formula itself, for index sets (edge sets by position in `edges`).
fn satisfies(
    g: &ColoredGraph,
    inst: &MsoglInstance,
    edges: &[(Vertex, Vertex)],
    mentioned: &[bool],
    sets: &[Vec<usize>],
) -> Result<bool, OracleError> {
    let is_edge: Vec<bool> = inst.formula.free.iter().map(|v| v.sort == Sort::EdgeSet).collect();
    let sizes: Vec<i64> = sets.iter().map(|s| s.len() as i64).collect();
    let truth: Vec<bool> = inst
        .globals
        .iter()
        .map(|r| r.coeffs.iter().zip(&sizes).map(|(&a, &y)| a * y).sum::<i64>() <= r.bound)
        .collect();
    let obeys = (0..g.n()).all(|v| {
        sets.iter().enumerate().all(|(i, set)| {
            let seen = if is_edge[i] {
                set.iter()
                    .filter(|&&e| edges[e].0 == v || edges[e].1 == v)
                    .count()
            } else {
                set.iter().filter(|&&u| g.is_adjacent(u, v)).count()
            };
            let iv = inst.locals.get(i, v);
            iv.lo <= seen && seen <= iv.hi
        })
    });
    let required = truth.iter().zip(mentioned).all(|(&t, &m)| t || m);
    Ok(required && obeys && holds_with_globals(g, &inst.formula, sets, &truth)?)
}

/// Checks one assignment against the whole instance. Edge sets are given as
/// positions in `g.edges()`.
pub fn check_assignment(g: &ColoredGraph, inst: &MsoglInstance, sets: &[Vec<usize>]) -> Result<bool, OracleError> {
    let edges = g.edges();
    let widths = inst.formula.free.iter().map(|v| if v.sort == Sort::EdgeSet { edges.len() } else { g.n() });
    if sets.len() != inst.arity() || sets.iter().zip(widths).any(|(s, w)| s.iter().any(|&x| x >= w)) {
        return Ok(false);
    }
    satisfies(g, inst, &edges, &mentioned_globals(inst), sets)
}

fn mark_globals(f: &Formula, seen: &mut [bool]) {
    match f {
        Formula::Global(i) => {
            if let Some(s) = seen.get_mut(*i) {
                *s = true;
            }
        }
        Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => mark_globals(a, seen),
        Formula::And(a, b) | Formula::Or(a, b) => {
            mark_globals(a, seen);
            mark_globals(b, seen);
        }
        _ => {}
    }
}

fn component_sizes(g: &ColoredGraph, removed: u64) -> Vec<usize> {
    let mut seen = removed;
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen >> start & 1 == 1 {
            continue;
        }
        seen |= 1 << start;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        out.push(size);
    }
    out
}

/// `min_S |S| + max component of G - S`, over all subsets.
pub fn brute_force_vi(g: &ColoredGraph) -> Result<usize, OracleError> {
    guard("vertex integrity", g.n(), MAX_VI_VERTICES)?;
    Ok((0u64..1 << g.n())
        .map(|s| s.count_ones() as usize + component_sizes(g, s).into_iter().max().unwrap_or(0))
        .min()
        .unwrap_or(0))
}

/// Treedepth by the recurrence `td(G) = 1 + min_v td(G - v)` on connected
/// graphs and the maximum over components otherwise.
///
/// Leaves of components with three or more vertices are never deleted first:
/// deleting their neighbor instead leaves a subgraph plus an isolated vertex.
pub fn brute_force_treedepth(g: &ColoredGraph) -> Result<usize, OracleError> {
    guard("treedepth", g.n(), MAX_TREEDEPTH_VERTICES)?;
    let adj: Vec<u128> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u128, |m, &w| m | 1 << w))
        .collect();
    let all = if g.n() == 128 { u128::MAX } else { (1u128 << g.n()) - 1 };
    let mut memo = HashMap::new();
    Ok(td_set(&adj, all, &mut memo))
}

fn split_components(adj: &[u128], set: u128) -> Vec<u128> {
    let mut rest = set;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest.trailing_zeros() as usize;
        let mut comp = 1u128 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & set & !comp;
            comp |= new;
            frontier |= new;
        }
        rest &= !comp;
        out.push(comp);
    }
    out
}

fn td_set(adj: &[u128], set: u128, memo: &mut HashMap<u128, usize>) -> usize {
    split_components(adj, set)
        .into_iter()
        .map(|c| td_connected(adj, c, memo))
        .max()
        .unwrap_or(0)
}

fn td_connected(adj: &[u128], comp: u128, memo: &mut HashMap<u128, usize>) -> usize {
    match comp.count_ones() {
        0 => return 0,
        1 => return 1,
        2 => return 2,
        _ => {}
    }
    if let Some(&d) = memo.get(&comp) {
        return d;
    }
    let mut best = usize::MAX;
    let mut rest = comp;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (adj[v] & comp).count_ones() == 1 {
            continue;
        }
        best = best.min(1 + td_set(adj, comp & !(1 << v), memo));
    }
    memo.insert(comp, best);
    best
}
