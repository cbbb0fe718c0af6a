//! MSO₁ evaluation on colored graphs and component-count kernelization.
//!
//! Formulas are compiled to slot-indexed nodes over bitmask graphs (at most 128
//! vertices). Quantifiers only range over the vertices or subsets that can
//! satisfy membership literals sitting directly under them: `exists x. x in C1
//! & ...` iterates over `C1`, and `exists Y. (forall y. ~(y in Y) | y in C2) &
//! ...` over the subsets of `C2`. Every visited node costs one unit of budget.

use thiserror::Error;

use crate::formulas::{Formula, FormulaError, MsoFormula, Sort};
use crate::graphs::{type_census, Assignment, ColoredGraph, Vertex, ViSet};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Graphs evaluated directly must fit in a `u128` vertex mask.
pub const MAX_EVAL_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation budget of {0} node visits exceeded")]
    BudgetExceeded(u64),
    #[error("graph has {0} vertices; direct evaluation supports at most 128")]
    TooLarge(usize),
    #[error("edge-sorted variables and incidence need the MSO₂ reduction")]
    EdgeSorts,
    #[error("formula refers to color C{color} but the graph has {available} colors")]
    MissingColor { color: usize, available: usize },
    #[error("global atom R{0} needs a pre-evaluation")]
    GlobalAtom(usize),
    #[error("assignment has {got} sets, formula has {expected} free variables")]
    Arity { got: usize, expected: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Clone, Debug)]
struct BitGraph {
    n: usize,
    adj: Vec<u128>,
    colors: Vec<u128>,
}

impl BitGraph {
    fn new(g: &ColoredGraph) -> Result<Self, EvalError> {
        if g.n() > MAX_EVAL_VERTICES {
            return Err(EvalError::TooLarge(g.n()));
        }
        let adj = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(0u128, |m, &w| m | 1 << w))
            .collect();
        let colors = (0..g.num_colors())
            .map(|c| {
                g.color_mask(c)
                    .iter()
                    .enumerate()
                    .fold(0u128, |m, (v, &b)| if b { m | 1 << v } else { m })
            })
            .collect();
        Ok(BitGraph {
            n: g.n(),
            adj,
            colors,
        })
    }

    fn all(&self) -> u128 {
        if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        }
    }
}

/// Where a quantified variable may range, given the enclosing set values.
#[derive(Clone, Debug, Default)]
struct Domain {
    colors_in: Vec<usize>,
    colors_out: Vec<usize>,
    sets_in: Vec<usize>,
    sets_out: Vec<usize>,
}

impl Domain {
    fn is_unrestricted(&self) -> bool {
        self.colors_in.is_empty()
            && self.colors_out.is_empty()
            && self.sets_in.is_empty()
            && self.sets_out.is_empty()
    }
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Adj(usize, usize),
    Eq(usize, usize),
    InSet(usize, usize),
    InColor(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Elem {
        exists: bool,
        slot: usize,
        domain: Domain,
        body: Box<Node>,
    },
    Set {
        exists: bool,
        slot: usize,
        /// Union of literal masks that bound the quantified set from above.
        within: Vec<Domain>,
        body: Box<Node>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Elem,
    Set,
}

struct Compiler {
    scope: Vec<(String, Kind, usize)>,
    elems: usize,
    sets: usize,
    max_elems: usize,
    max_sets: usize,
    colors: usize,
}

impl Compiler {
    fn lookup(&self, name: &str) -> Result<(Kind, usize), EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _, _)| n == name)
            .map(|&(_, k, s)| (k, s))
            .ok_or_else(|| {
                EvalError::Formula(FormulaError::Unbound {
                    name: name.to_string(),
                    pos: None,
                })
            })
    }

    fn elem(&self, name: &str) -> Result<usize, EvalError> {
        match self.lookup(name)? {
            (Kind::Elem, s) => Ok(s),
            _ => Err(sort_error(name)),
        }
    }

    fn set(&self, name: &str) -> Result<usize, EvalError> {
        match self.lookup(name)? {
            (Kind::Set, s) => Ok(s),
            _ => Err(sort_error(name)),
        }
    }

    fn color(&self, c: usize) -> Result<usize, EvalError> {
        if c >= self.colors {
            return Err(EvalError::MissingColor {
                color: c + 1,
                available: self.colors,
            });
        }
        Ok(c)
    }

    fn compile(&mut self, f: &Formula) -> Result<Node, EvalError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Adj(x, y) => Node::Adj(self.elem(x)?, self.elem(y)?),
            Formula::Equal(x, y) => Node::Eq(self.elem(x)?, self.elem(y)?),
            Formula::InSet(x, s) => Node::InSet(self.elem(x)?, self.set(s)?),
            Formula::InColor(x, c) => Node::InColor(self.elem(x)?, self.color(*c)?),
            Formula::Incident(..) => return Err(EvalError::EdgeSorts),
            Formula::Global(i) => return Err(EvalError::GlobalAtom(i + 1)),
            Formula::Not(a) => match self.compile(a)? {
                Node::Const(b) => Node::Const(!b),
                inner => Node::Not(Box::new(inner)),
            },
            Formula::And(..) => {
                let mut parts = Vec::new();
                for part in flatten(f, true) {
                    match self.compile(part)? {
                        Node::Const(true) => {}
                        Node::Const(false) => return Ok(Node::Const(false)),
                        Node::And(inner) => parts.extend(inner),
                        node => parts.push(node),
                    }
                }
                match parts.len() {
                    0 => Node::Const(true),
                    1 => parts.pop().unwrap(),
                    _ => Node::And(parts),
                }
            }
            Formula::Or(..) => {
                let mut parts = Vec::new();
                for part in flatten(f, false) {
                    match self.compile(part)? {
                        Node::Const(false) => {}
                        Node::Const(true) => return Ok(Node::Const(true)),
                        Node::Or(inner) => parts.extend(inner),
                        node => parts.push(node),
                    }
                }
                match parts.len() {
                    0 => Node::Const(false),
                    1 => parts.pop().unwrap(),
                    _ => Node::Or(parts),
                }
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let exists = matches!(f, Formula::Exists(..));
                match v.sort {
                    Sort::Edge | Sort::EdgeSet => return Err(EvalError::EdgeSorts),
                    Sort::Vertex => {
                        let slot = self.elems;
                        self.elems += 1;
                        self.max_elems = self.max_elems.max(self.elems);
                        self.scope.push((v.name.clone(), Kind::Elem, slot));
                        let body = self.compile(body);
                        self.scope.pop();
                        self.elems -= 1;
                        let body = body?;
                        let domain = self.elem_domain(slot, &body, exists);
                        Node::Elem {
                            exists,
                            slot,
                            domain,
                            body: Box::new(body),
                        }
                    }
                    Sort::VertexSet => {
                        let slot = self.sets;
                        self.sets += 1;
                        self.max_sets = self.max_sets.max(self.sets);
                        self.scope.push((v.name.clone(), Kind::Set, slot));
                        let body = self.compile(body);
                        self.scope.pop();
                        self.sets -= 1;
                        let body = body?;
                        let within = set_guards(slot, &body, exists);
                        Node::Set {
                            exists,
                            slot,
                            within,
                            body: Box::new(body),
                        }
                    }
                }
            }
        })
    }

    /// Literals on `slot` that every relevant value must satisfy: conjuncts
    /// under `exists`, negated disjuncts under `forall`.
    fn elem_domain(&self, slot: usize, body: &Node, exists: bool) -> Domain {
        let mut d = Domain::default();
        let parts: &[Node] = match (body, exists) {
            (Node::And(p), true) | (Node::Or(p), false) => p,
            _ => std::slice::from_ref(body),
        };
        for part in parts {
            // Under forall, a disjunct L lets us skip values where L holds.
            let (lit, positive) = match part {
                Node::Not(inner) => (&**inner, !exists),
                other => (other, exists),
            };
            match *lit {
                Node::InColor(x, c) if x == slot => {
                    if positive {
                        d.colors_in.push(c)
                    } else {
                        d.colors_out.push(c)
                    }
                }
                Node::InSet(x, s) if x == slot => {
                    if positive {
                        d.sets_in.push(s)
                    } else {
                        d.sets_out.push(s)
                    }
                }
                _ => {}
            }
        }
        d
    }
}

fn sort_error(name: &str) -> EvalError {
    EvalError::Formula(FormulaError::SortMismatch {
        atom: name.to_string(),
        detail: "variable used with the wrong sort".into(),
        pos: None,
    })
}

fn flatten(f: &Formula, and: bool) -> Vec<&Formula> {
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match (g, and) {
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                stack.push(b);
                stack.push(a);
            }
            _ => out.push(g),
        }
    }
    out
}

/// Upper bounds on a quantified set from guards `forall y. ~(y in Y) | L(y)`
/// (a conjunct under `exists`, a negated disjunct under `forall`).
fn set_guards(slot: usize, body: &Node, exists: bool) -> Vec<Domain> {
    let parts: &[Node] = match (body, exists) {
        (Node::And(p), true) | (Node::Or(p), false) => p,
        _ => std::slice::from_ref(body),
    };
    let mut out = Vec::new();
    for part in parts {
        let guard = match (part, exists) {
            (Node::Not(inner), false) => &**inner,
            (other, true) => other,
            _ => continue,
        };
        if let Some(d) = guard_domain(slot, guard) {
            out.push(d);
        }
    }
    out
}

fn guard_domain(slot: usize, guard: &Node) -> Option<Domain> {
    let Node::Elem {
        exists: false,
        slot: y,
        body,
        ..
    } = guard
    else {
        return None;
    };
    let parts: &[Node] = match &**body {
        Node::Or(p) => p,
        _ => return None,
    };
    let mut found_member = false;
    let mut d = Domain::default();
    let mut literals = 0;
    for part in parts {
        match part {
            Node::InColor(x, c) if x == y => {
                d.colors_in.push(*c);
                literals += 1;
            }
            Node::Not(inner) => match **inner {
                Node::InSet(x, s) if x == *y && s == slot => found_member = true,
                Node::InColor(x, c) if x == *y => {
                    d.colors_out.push(c);
                    literals += 1;
                }
                _ => return None,
            },
            _ => return None,
        }
    }
    // Only a single literal gives a plain mask; unions are not tracked.
    (found_member && literals == 1).then_some(d)
}

struct Machine<'a> {
    g: &'a BitGraph,
    elems: Vec<usize>,
    sets: Vec<u128>,
    visits: u64,
    budget: u64,
}

impl Machine<'_> {
    fn tick(&mut self) -> Result<(), EvalError> {
        self.visits += 1;
        if self.visits > self.budget {
            return Err(EvalError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn mask(&self, d: &Domain) -> u128 {
        let mut m = self.g.all();
        for &c in &d.colors_in {
            m &= self.g.colors[c];
        }
        for &c in &d.colors_out {
            m &= !self.g.colors[c];
        }
        for &s in &d.sets_in {
            m &= self.sets[s];
        }
        for &s in &d.sets_out {
            m &= !self.sets[s];
        }
        m
    }

    fn eval(&mut self, node: &Node) -> Result<bool, EvalError> {
        self.tick()?;
        Ok(match node {
            Node::Const(b) => *b,
            Node::Adj(x, y) => self.g.adj[self.elems[*x]] & (1 << self.elems[*y]) != 0,
            Node::Eq(x, y) => self.elems[*x] == self.elems[*y],
            Node::InSet(x, s) => self.sets[*s] & (1 << self.elems[*x]) != 0,
            Node::InColor(x, c) => self.g.colors[*c] & (1 << self.elems[*x]) != 0,
            Node::Not(a) => !self.eval(a)?,
            Node::And(parts) => {
                for p in parts {
                    if !self.eval(p)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(parts) => {
                for p in parts {
                    if self.eval(p)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Elem {
                exists,
                slot,
                domain,
                body,
            } => {
                let mut rest = if domain.is_unrestricted() {
                    self.g.all()
                } else {
                    self.mask(domain)
                };
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    self.elems[*slot] = v;
                    if self.eval(body)? == *exists {
                        return Ok(*exists);
                    }
                }
                !*exists
            }
            Node::Set {
                exists,
                slot,
                within,
                body,
            } => {
                let mut room = self.g.all();
                for d in within {
                    room &= self.mask(d);
                }
                let saved = self.sets[*slot];
                let mut sub: u128 = 0;
                let result = loop {
                    self.sets[*slot] = sub;
                    if self.eval(body)? == *exists {
                        break *exists;
                    }
                    sub = sub.wrapping_sub(room) & room;
                    if sub == 0 {
                        break !*exists;
                    }
                };
                self.sets[*slot] = saved;
                result
            }
        })
    }
}

fn run(
    g: &ColoredGraph,
    body: &Formula,
    free: &[(String, u128)],
    budget: u64,
) -> Result<bool, EvalError> {
    let bits = BitGraph::new(g)?;
    let mut compiler = Compiler {
        scope: free
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), Kind::Set, i))
            .collect(),
        elems: 0,
        sets: free.len(),
        max_elems: 0,
        max_sets: free.len(),
        colors: g.num_colors(),
    };
    let node = compiler.compile(body)?;
    let mut sets = vec![0u128; compiler.max_sets];
    for (i, (_, mask)) in free.iter().enumerate() {
        sets[i] = *mask;
    }
    let mut machine = Machine {
        g: &bits,
        elems: vec![0; compiler.max_elems],
        sets,
        visits: 0,
        budget,
    };
    machine.eval(&node)
}

/// Truth of a closed MSO₁ formula on `g`.
pub fn evaluate(g: &ColoredGraph, f: &Formula) -> Result<bool, EvalError> {
    evaluate_with_budget(g, f, DEFAULT_BUDGET)
}

pub fn evaluate_with_budget(g: &ColoredGraph, f: &Formula, budget: u64) -> Result<bool, EvalError> {
    run(g, f, &[], budget)
}

/// Truth of `f` with its free set variables read as the sets of `assignment`.
pub fn holds(g: &ColoredGraph, f: &MsoFormula, assignment: &Assignment) -> Result<bool, EvalError> {
    holds_with_budget(g, f, assignment, DEFAULT_BUDGET)
}

pub fn holds_with_budget(
    g: &ColoredGraph,
    f: &MsoFormula,
    assignment: &Assignment,
    budget: u64,
) -> Result<bool, EvalError> {
    if assignment.arity() != f.arity() {
        return Err(EvalError::Arity {
            got: assignment.arity(),
            expected: f.arity(),
        });
    }
    if f.is_mso2() {
        return Err(EvalError::EdgeSorts);
    }
    if g.n() > MAX_EVAL_VERTICES {
        return Err(EvalError::TooLarge(g.n()));
    }
    let free: Vec<(String, u128)> = f
        .free
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mask = assignment
                .mask(i)
                .iter()
                .enumerate()
                .fold(0u128, |m, (u, &b)| if b { m | 1 << u } else { m });
            (v.name.clone(), mask)
        })
        .collect();
    run(g, &f.body, &free, budget)
}

/// `2^{kq}`, saturating.
pub fn kernel_threshold(k: usize, q: usize) -> u64 {
    let e = k.saturating_mul(q);
    if e >= 62 {
        1 << 62
    } else {
        1 << e
    }
}

/// The vertices kept by [`kernelize`], ascending.
pub fn kernel_vertices(g: &ColoredGraph, s: &ViSet, q: usize) -> Vec<Vertex> {
    let threshold = kernel_threshold(s.k, q);
    let mut keep = s.set.clone();
    for entry in type_census(g, &s.set).entries {
        for comp in entry.components.iter().take(threshold.min(usize::MAX as u64) as usize) {
            keep.extend_from_slice(&comp.order);
        }
    }
    keep.sort_unstable();
    keep
}

/// Keeps `S` and, per `(G, S)`-type, the `min(c, 2^{kq})` components with the
/// smallest minimum vertex; closed formulas with `q` quantifiers keep their truth.
pub fn kernelize(g: &ColoredGraph, s: &ViSet, q: usize) -> ColoredGraph {
    g.induced(&kernel_vertices(g, s, q))
}
