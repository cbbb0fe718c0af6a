//! Model-checking instances, the constraint sidecar format and witness JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::constraints::{GlobalConstraint, Interval, LocalConstraintTable};
use crate::formulas::{parse, Formula, FormulaError, MsoFormula, Sort, Var};
use crate::graphs::{Assignment, ColoredGraph, GraphError, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("global constraint {index} has {got} coefficients, expected {expected}")]
    GlobalArity {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("local table covers {got} variables, expected {expected}")]
    LocalArity { got: usize, expected: usize },
    #[error("local table is over {got} vertices, graph has {expected}")]
    LocalSize { got: usize, expected: usize },
    #[error("local constraint names unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("bad interval bound {0}; use -1 for n")]
    BadBound(i64),
    #[error("bad vertex key `{0}` in overrides")]
    BadVertex(String),
    #[error("invalid constraints JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A formula with global constraints `R_1..R_g` and a local table `α`.
///
/// For edge-set variables the local table bounds the number of incident edges.
/// Globals that the formula mentions act as atoms; the others are required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsoglInstance {
    pub formula: MsoFormula,
    pub globals: Vec<GlobalConstraint>,
    pub locals: LocalConstraintTable,
}

/// Instances with edge-sorted variables share the representation.
pub type GsoglInstance = MsoglInstance;

impl MsoglInstance {
    pub fn new(
        formula: MsoFormula,
        globals: Vec<GlobalConstraint>,
        locals: LocalConstraintTable,
    ) -> Result<Self, InstanceError> {
        let s = formula.arity();
        for (index, r) in globals.iter().enumerate() {
            if r.coeffs.len() != s {
                return Err(InstanceError::GlobalArity {
                    index: index + 1,
                    got: r.coeffs.len(),
                    expected: s,
                });
            }
        }
        if locals.arity() != s {
            return Err(InstanceError::LocalArity {
                got: locals.arity(),
                expected: s,
            });
        }
        Ok(MsoglInstance {
            formula,
            globals,
            locals,
        })
    }

    /// No global constraints and trivial locals on `n` vertices.
    pub fn unconstrained(formula: MsoFormula, n: usize) -> Self {
        let s = formula.arity();
        MsoglInstance {
            formula,
            globals: vec![],
            locals: LocalConstraintTable::unconstrained(s, n),
        }
    }

    pub fn arity(&self) -> usize {
        self.formula.arity()
    }

    /// Indices of global constraints that the formula never mentions; these
    /// must hold outright.
    pub fn required_globals(&self) -> Vec<usize> {
        let mut seen = vec![false; self.globals.len()];
        mark_globals(&self.formula.body, &mut seen);
        (0..seen.len()).filter(|&i| !seen[i]).collect()
    }

    /// The formula with every required global conjoined as an atom.
    pub fn effective_formula(&self) -> MsoFormula {
        let required = self.required_globals();
        if required.is_empty() {
            return self.formula.clone();
        }
        let body = Formula::conjunction(
            std::iter::once(self.formula.body.clone()).chain(required.into_iter().map(Formula::Global)),
        );
        MsoFormula {
            free: self.formula.free.clone(),
            body,
        }
    }

    pub fn check_graph(&self, g: &ColoredGraph) -> Result<(), InstanceError> {
        if self.locals.n() != g.n() {
            return Err(InstanceError::LocalSize {
                got: self.locals.n(),
                expected: g.n(),
            });
        }
        Ok(())
    }
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

/// Sidecar JSON declaring free variables, global and local constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFile {
    #[serde(default)]
    pub free: Vec<Var>,
    #[serde(default)]
    pub globals: Vec<GlobalConstraint>,
    #[serde(default)]
    pub locals: Vec<LocalSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSpec {
    pub var: String,
    /// `[lo, hi]`; `-1` stands for `n`.
    #[serde(default = "LocalSpec::full")]
    pub default: [i64; 2],
    #[serde(default)]
    pub overrides: BTreeMap<String, [i64; 2]>,
}

impl LocalSpec {
    fn full() -> [i64; 2] {
        [0, -1]
    }
}

fn bound(x: i64, n: usize) -> Result<usize, InstanceError> {
    match x {
        -1 => Ok(n),
        x if x >= 0 => Ok(x as usize),
        x => Err(InstanceError::BadBound(x)),
    }
}

fn interval(pair: [i64; 2], n: usize) -> Result<Interval, InstanceError> {
    Ok(Interval::new(bound(pair[0], n)?, bound(pair[1], n)?))
}

impl ConstraintFile {
    pub fn from_json_str(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("constraints serialize")
    }

    /// Parses `formula_text` against the declared free variables and builds
    /// the instance for a graph on `n` vertices.
    pub fn instance(&self, formula_text: &str, n: usize) -> Result<MsoglInstance, InstanceError> {
        let formula = parse(formula_text, &self.free)?;
        let mut locals = LocalConstraintTable::unconstrained(self.free.len(), n);
        for spec in &self.locals {
            let i = formula
                .free_index(&spec.var)
                .ok_or_else(|| InstanceError::UnknownVariable(spec.var.clone()))?;
            let default = interval(spec.default, n)?;
            for v in 0..n {
                locals.set(i, v, default);
            }
            for (key, pair) in &spec.overrides {
                let v: Vertex = key
                    .parse()
                    .map_err(|_| InstanceError::BadVertex(key.clone()))?;
                if v >= n {
                    return Err(InstanceError::BadVertex(key.clone()));
                }
                locals.set(i, v, interval(*pair, n)?);
            }
        }
        MsoglInstance::new(formula, self.globals.clone(), locals)
    }

    /// The sidecar describing `inst`; constant columns become defaults.
    pub fn from_instance(inst: &MsoglInstance) -> Self {
        let n = inst.locals.n();
        let encode = |iv: Interval| -> [i64; 2] {
            if iv.is_empty() {
                [1, 0]
            } else {
                let hi = if iv.hi == n { -1 } else { iv.hi as i64 };
                [iv.lo as i64, hi]
            }
        };
        let mut locals = Vec::new();
        for (i, var) in inst.formula.free.iter().enumerate() {
            let column: Vec<Interval> = (0..n).map(|v| inst.locals.get(i, v)).collect();
            let mut counts: BTreeMap<Interval, usize> = BTreeMap::new();
            for &iv in &column {
                *counts.entry(iv).or_default() += 1;
            }
            let default = counts
                .iter()
                .max_by_key(|(_, &c)| c)
                .map(|(&iv, _)| iv)
                .unwrap_or(Interval::new(0, n));
            let overrides: BTreeMap<String, [i64; 2]> = column
                .iter()
                .enumerate()
                .filter(|(_, &iv)| iv != default)
                .map(|(v, &iv)| (v.to_string(), encode(iv)))
                .collect();
            if default == Interval::new(0, n) && overrides.is_empty() {
                continue;
            }
            locals.push(LocalSpec {
                var: var.name.clone(),
                default: encode(default),
                overrides,
            });
        }
        ConstraintFile {
            free: inst.formula.free.clone(),
            globals: inst.globals.clone(),
            locals,
        }
    }
}

/// Reads a graph, a formula and an optional sidecar.
pub fn load_instance(
    graph_json: &str,
    formula_text: &str,
    constraints_json: Option<&str>,
) -> Result<(ColoredGraph, MsoglInstance), InstanceError> {
    let g = ColoredGraph::from_json_str(graph_json)?;
    let file = match constraints_json {
        Some(text) => ConstraintFile::from_json_str(text)?,
        None => ConstraintFile::default(),
    };
    let inst = file.instance(formula_text, g.n())?;
    Ok((g, inst))
}

/// The value of one free set variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetValue {
    Vertices(Vec<Vertex>),
    /// Edges as `(u, v)` with `u < v`.
    Edges(Vec<(Vertex, Vertex)>),
}

impl SetValue {
    pub fn len(&self) -> usize {
        match self {
            SetValue::Vertices(v) => v.len(),
            SetValue::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Witness values keyed by variable, in free-variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub names: Vec<String>,
    pub values: Vec<SetValue>,
}

impl Witness {
    /// A vertex-set witness for the free variables of `formula`.
    pub fn from_assignment(formula: &MsoFormula, a: &Assignment) -> Self {
        Witness {
            names: formula.free.iter().map(|v| v.name.clone()).collect(),
            values: a.sets().into_iter().map(SetValue::Vertices).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&SetValue> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    /// Edge-set variables are keyed `<name>_edges`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (name, value) in self.names.iter().zip(&self.values) {
            match value {
                SetValue::Vertices(vs) => {
                    map.insert(name.clone(), json!(vs));
                }
                SetValue::Edges(es) => {
                    let pairs: Vec<[Vertex; 2]> = es.iter().map(|&(u, v)| [u, v]).collect();
                    map.insert(format!("{name}_edges"), json!(pairs));
                }
            }
        }
        json!({ "satisfiable": true, "assignment": Value::Object(map) })
    }
}

pub fn unsat_json() -> Value {
    json!({ "satisfiable": false })
}

/// Converts a witness to per-variable index sets: vertex ids for vertex sets,
/// positions in `g.edges()` for edge sets.
pub fn witness_indices(g: &ColoredGraph, formula: &MsoFormula, w: &Witness) -> Vec<Vec<usize>> {
    let edges = g.edges();
    formula
        .free
        .iter()
        .zip(&w.values)
        .map(|(var, value)| match (var.sort, value) {
            (Sort::EdgeSet, SetValue::Edges(es)) => es
                .iter()
                .map(|e| edges.binary_search(e).expect("witness edge exists"))
                .collect(),
            (_, SetValue::Vertices(vs)) => vs.clone(),
            _ => panic!("witness value does not match the sort of `{}`", var.name),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_round_trip() {
        let text = r#"{
            "free": [{"name": "X1", "sort": "vertex-set"}, {"name": "Y", "sort": "edge-set"}],
            "globals": [{"coeffs": [1, 0], "bound": 2}],
            "locals": [{"var": "X1", "default": [0, -1], "overrides": {"1": [1, 2]}}]
        }"#;
        let file = ConstraintFile::from_json_str(text).unwrap();
        let inst = file.instance("exists x. x in X1", 3).unwrap();
        assert_eq!(inst.arity(), 2);
        assert_eq!(inst.locals.get(0, 1), Interval::new(1, 2));
        assert_eq!(inst.locals.get(0, 0), Interval::new(0, 3));
        let again = ConstraintFile::from_instance(&inst).instance("exists x. x in X1", 3).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn sidecar_errors() {
        let file = ConstraintFile {
            free: vec![Var::vertex_set("X1")],
            globals: vec![GlobalConstraint::new(vec![1, 1], 0)],
            locals: vec![],
        };
        assert!(matches!(
            file.instance("true", 2),
            Err(InstanceError::GlobalArity { .. })
        ));
        let file = ConstraintFile {
            free: vec![Var::vertex_set("X1")],
            globals: vec![],
            locals: vec![LocalSpec {
                var: "Z".into(),
                default: [0, 1],
                overrides: BTreeMap::new(),
            }],
        };
        assert!(matches!(file.instance("true", 2), Err(InstanceError::UnknownVariable(_))));
    }

    #[test]
    fn witness_json_shape() {
        let w = Witness {
            names: vec!["X1".into(), "Y1".into()],
            values: vec![SetValue::Vertices(vec![0, 2]), SetValue::Edges(vec![(0, 1)])],
        };
        assert_eq!(
            w.to_json(),
            json!({"satisfiable": true, "assignment": {"X1": [0, 2], "Y1_edges": [[0, 1]]}})
        );
    }
}
