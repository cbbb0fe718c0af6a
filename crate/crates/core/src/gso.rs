//! MSO₂ with constraints reduced to MSO₁ with constraints.
//!
//! Every edge `e = {u, w}` becomes a vertex `v_e` of a new color `C_E`
//! adjacent to `u` and `w`; the original edges stay. Edge variables range over
//! `C_E`, vertex variables over the rest, and incidence becomes adjacency.

use crate::constraints::LocalConstraintTable;
use crate::engine::{model_check_with, EngineError, Solution, SolveOptions};
use crate::formulas::{Formula, FreshNames, MsoFormula, Sort, Var};
use crate::graphs::{Assignment, ColoredGraph, Vertex};
use crate::instance::{MsoglInstance, SetValue, Witness};

#[derive(Clone, Debug)]
pub struct SubdivisionMap {
    /// `G'`.
    pub graph: ColoredGraph,
    /// Vertices of the original graph; `v_e` is `n + e`.
    pub n: usize,
    /// Edges of the original graph in `edges()` order.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Index of `C_E` in `G'`.
    pub ce: usize,
}

impl SubdivisionMap {
    pub fn edge_vertex(&self, e: usize) -> Vertex {
        self.n + e
    }

    /// The original edge behind `v`, if `v ∈ C_E`.
    pub fn edge_of(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        v.checked_sub(self.n).and_then(|e| self.edges.get(e).copied())
    }
}

/// `G'`: the original graph plus one `C_E`-colored vertex per edge, joined to
/// both endpoints.
pub fn subdivide(g: &ColoredGraph) -> SubdivisionMap {
    let n = g.n();
    let edges = g.edges();
    let mut all = edges.clone();
    for (e, &(u, w)) in edges.iter().enumerate() {
        all.push((u, n + e));
        all.push((w, n + e));
    }
    let colors: Vec<Vec<Vertex>> = (0..g.num_colors())
        .map(|c| g.color_members(c))
        .chain(std::iter::once((n..n + edges.len()).collect()))
        .collect();
    let graph = ColoredGraph::new(n + edges.len(), all, colors).expect("subdivision is simple");
    SubdivisionMap {
        graph,
        n,
        ce: g.num_colors(),
        edges,
    }
}

struct Rewriter {
    ce: usize,
    names: FreshNames,
}

impl Rewriter {
    fn in_ce(&self, x: &str) -> Formula {
        Formula::in_color(x, self.ce)
    }

    /// `∀y.(¬(y ∈ X) ∨ L(y))`, with `L` "in `C_E`" for edge sets and "not in
    /// `C_E`" for vertex sets.
    fn set_guard(&mut self, set: &Var) -> Formula {
        let y = self.names.fresh("ce");
        let literal = if set.sort == Sort::EdgeSet {
            self.in_ce(&y)
        } else {
            Formula::not(self.in_ce(&y))
        };
        Formula::forall(
            Var::vertex(y.clone()),
            Formula::or(Formula::not(Formula::in_set(&y, &set.name)), literal),
        )
    }

    fn element_guard(&self, var: &Var) -> Formula {
        if var.sort == Sort::Edge {
            self.in_ce(&var.name)
        } else {
            Formula::not(self.in_ce(&var.name))
        }
    }

    fn rewrite(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Incident(x, y) => Formula::Adj(x.clone(), y.clone()),
            Formula::Not(a) => Formula::not(self.rewrite(a)),
            Formula::And(a, b) => Formula::and(self.rewrite(a), self.rewrite(b)),
            Formula::Or(a, b) => Formula::or(self.rewrite(a), self.rewrite(b)),
            Formula::Exists(var, body) | Formula::Forall(var, body) => {
                let exists = matches!(f, Formula::Exists(..));
                let guard = if var.sort.is_set() {
                    self.set_guard(var)
                } else {
                    self.element_guard(var)
                };
                let body = self.rewrite(body);
                let lowered = lower(var);
                if exists {
                    Formula::exists(lowered, Formula::and(guard, body))
                } else {
                    Formula::forall(lowered, Formula::or(Formula::not(guard), body))
                }
            }
            other => other.clone(),
        }
    }
}

fn lower(var: &Var) -> Var {
    match var.sort {
        Sort::Edge => Var::vertex(var.name.clone()),
        Sort::EdgeSet => Var::vertex_set(var.name.clone()),
        _ => var.clone(),
    }
}

/// The MSO₁ formula on `G'` equivalent to `f` on `G`, where `ce` is the index
/// of `C_E`. Free variables keep their order, and their guards are conjoined
/// at the top level.
pub fn rewrite_formula(f: &MsoFormula, ce: usize) -> MsoFormula {
    let mut r = Rewriter {
        ce,
        names: FreshNames::new(&f.body, &f.free),
    };
    let body = r.rewrite(&f.body);
    let guards: Vec<Formula> = f.free.iter().map(|v| r.set_guard(v)).collect();
    MsoFormula {
        free: f.free.iter().map(lower).collect(),
        body: Formula::conjunction(std::iter::once(body).chain(guards)),
    }
}

/// The MSO₁ instance on `G'`: same globals, same locals on original
/// vertices, and unconstrained locals on the `v_e`.
pub fn lift_constraints(inst: &MsoglInstance, map: &SubdivisionMap) -> MsoglInstance {
    let n_new = map.graph.n();
    let locals: LocalConstraintTable = inst.locals.extend_to(n_new);
    MsoglInstance {
        formula: rewrite_formula(&inst.formula, map.ce),
        globals: inst.globals.clone(),
        locals,
    }
}

/// Reads an assignment on `G'` back as vertex and edge sets.
pub fn translate_witness(map: &SubdivisionMap, formula: &MsoFormula, a: &Assignment) -> Witness {
    let values = formula
        .free
        .iter()
        .enumerate()
        .map(|(i, var)| {
            if var.sort == Sort::EdgeSet {
                SetValue::Edges(a.set(i).into_iter().filter_map(|v| map.edge_of(v)).collect())
            } else {
                SetValue::Vertices(a.set(i).into_iter().filter(|&v| v < map.n).collect())
            }
        })
        .collect();
    Witness {
        names: formula.free.iter().map(|v| v.name.clone()).collect(),
        values,
    }
}

/// The assignment on `G'` encoding a witness on `G`.
pub fn lift_witness(map: &SubdivisionMap, w: &Witness) -> Assignment {
    let mut a = Assignment::empty(map.graph.n(), w.values.len());
    for (i, value) in w.values.iter().enumerate() {
        match value {
            SetValue::Vertices(vs) => {
                for &v in vs {
                    a.insert(i, v);
                }
            }
            SetValue::Edges(es) => {
                for &(u, v) in es {
                    let key = (u.min(v), u.max(v));
                    if let Some(e) = map.edges.iter().position(|&x| x == key) {
                        a.insert(i, map.edge_vertex(e));
                    }
                }
            }
        }
    }
    a
}

#[derive(Debug)]
pub struct GsoSolution {
    pub witness: Option<Witness>,
    pub map: SubdivisionMap,
    pub solution: Solution,
}

/// Decides a GSO-GL-Lin instance through `G'`.
pub fn gso_model_check(g: &ColoredGraph, inst: &MsoglInstance) -> Result<Option<Witness>, EngineError> {
    Ok(gso_model_check_with(g, inst, &SolveOptions::default())?.witness)
}

pub fn gso_model_check_with(
    g: &ColoredGraph,
    inst: &MsoglInstance,
    opts: &SolveOptions,
) -> Result<GsoSolution, EngineError> {
    inst.check_graph(g)?;
    let map = subdivide(g);
    let lifted = lift_constraints(inst, &map);
    let solution = model_check_with(&map.graph, &lifted, opts)?;
    let witness = solution
        .assignment
        .as_ref()
        .map(|a| translate_witness(&map, &inst.formula, a));
    Ok(GsoSolution {
        witness,
        map,
        solution,
    })
}
