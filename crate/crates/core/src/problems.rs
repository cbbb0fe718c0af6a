//! Encoders for named graph problems, and the Unary Bin Packing reduction to
//! Equitable Connected Partition.
//!
//! Alliances and the capacitated problems live on the 1-subdivision `H` of the
//! input: vertices of `G` keep their indices, the vertex for the `e`-th edge is
//! `n + e` and carries the color `C_W`. Edge sets of `H` stand for half-edges,
//! so a local bound at `v` counts only the half-edges at `v`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{GlobalConstraint, Interval, LocalConstraintTable};
use crate::engine::{model_check_with, EngineError, SolveOptions};
use crate::formulas::{parse, Formula, FormulaError, FreshNames, MsoFormula, Sort, Var};
use crate::graphs::{ColoredGraph, Vertex};
use crate::gso::gso_model_check_with;
use crate::instance::{MsoglInstance, Witness};
use crate::oracle::{brute_force_gsogl, OracleError, OracleVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllianceVariant {
    Defensive,
    Offensive,
    Powerful,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartProperty {
    Independent,
    Connected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacitatedVariant {
    VertexCover,
    DominatingSet,
}

/// A named problem with its parameters. Graph-indexed data (capacities) must
/// match the graph handed to [`encode`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum ProblemSpec {
    FairVertexCover {
        size_bound: usize,
        fairness: usize,
    },
    DefectiveColoring {
        colors: usize,
        defect: usize,
    },
    Alliance {
        variant: AllianceVariant,
        #[serde(default)]
        r: i64,
        #[serde(default)]
        global: bool,
        size_bound: usize,
    },
    EquitablePartition {
        parts: usize,
        property: PartProperty,
    },
    Capacitated {
        variant: CapacitatedVariant,
        capacities: Vec<usize>,
        size_bound: usize,
    },
    BoundedDegreeDeletion {
        budget: usize,
        degree: usize,
    },
    /// `formula` is MSO₂ text over a free vertex set `A` and edge set `B`.
    CapacitatedMso2 {
        formula: String,
        capacities: Vec<usize>,
        size_bound: usize,
    },
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("malformed problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// An encoded problem: the graph the instance lives on and whether its
/// formula needs edge sorts.
#[derive(Clone, Debug)]
pub struct Encoded {
    pub graph: ColoredGraph,
    pub instance: MsoglInstance,
    pub mso2: bool,
}

impl Encoded {
    fn new(graph: ColoredGraph, instance: MsoglInstance) -> Self {
        let mso2 = instance.formula.is_mso2();
        Encoded {
            graph,
            instance,
            mso2,
        }
    }

    /// Runs the engine, through `G'` when edge sorts are present.
    pub fn solve(&self, opts: &SolveOptions) -> Result<Option<Witness>, EngineError> {
        if self.mso2 {
            Ok(gso_model_check_with(&self.graph, &self.instance, opts)?.witness)
        } else {
            let sol = model_check_with(&self.graph, &self.instance, opts)?;
            Ok(sol
                .assignment
                .map(|a| Witness::from_assignment(&self.instance.formula, &a)))
        }
    }

    pub fn oracle(&self) -> Result<OracleVerdict, OracleError> {
        brute_force_gsogl(&self.graph, &self.instance)
    }
}

fn invalid(msg: impl Into<String>) -> ProblemError {
    ProblemError::Invalid(msg.into())
}

fn color(c: usize) -> String {
    format!("C{}", c + 1)
}

fn set_names(stem: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{stem}{i}")).collect()
}

fn and_all(parts: impl IntoIterator<Item = String>) -> String {
    let parts: Vec<String> = parts.into_iter().map(|p| format!("({p})")).collect();
    if parts.is_empty() {
        "true".into()
    } else {
        parts.join(" & ")
    }
}

fn or_any(parts: impl IntoIterator<Item = String>) -> String {
    let parts: Vec<String> = parts.into_iter().map(|p| format!("({p})")).collect();
    if parts.is_empty() {
        "false".into()
    } else {
        parts.join(" | ")
    }
}

/// Every vertex lies in exactly one of `sets`.
fn partition(sets: &[String]) -> String {
    let exactly = (0..sets.len()).map(|i| {
        and_all(
            sets.iter()
                .enumerate()
                .map(|(j, s)| if i == j { format!("x in {s}") } else { format!("~x in {s}") }),
        )
    });
    format!("(forall x. ({}))", or_any(exactly))
}

/// `x` and `y` share a set.
fn same_class(sets: &[String]) -> String {
    or_any(sets.iter().map(|s| format!("x in {s} & y in {s}")))
}

fn uniform_locals(arity: usize, n: usize, i: usize, interval: Interval) -> LocalConstraintTable {
    let mut t = LocalConstraintTable::unconstrained(arity, n);
    for v in 0..n {
        t.set(i, v, interval);
    }
    t
}

/// `H` with `extra` empty marker colors after `C_W`; returns the index of `C_W`.
fn subdivision_h(g: &ColoredGraph, extra: usize) -> (ColoredGraph, usize) {
    let n = g.n();
    let edges = g.edges();
    let half: Vec<(Vertex, Vertex)> = edges
        .iter()
        .enumerate()
        .flat_map(|(e, &(u, w))| [(u, n + e), (w, n + e)])
        .collect();
    let cw = g.num_colors();
    let colors: Vec<Vec<Vertex>> = (0..cw)
        .map(|c| g.color_members(c))
        .chain(std::iter::once((n..n + edges.len()).collect()))
        .chain((0..extra).map(|_| Vec::new()))
        .collect();
    (
        ColoredGraph::new(n + edges.len(), half, colors).expect("subdivision is simple"),
        cw,
    )
}

fn check_capacities(g: &ColoredGraph, caps: &[usize]) -> Result<(), ProblemError> {
    if caps.len() != g.n() {
        return Err(invalid(format!("{} capacities for {} vertices", caps.len(), g.n())));
    }
    match (0..g.n()).find(|&v| caps[v] > g.degree(v)) {
        Some(v) => Err(invalid(format!(
            "capacity {} of vertex {v} exceeds its degree {}",
            caps[v],
            g.degree(v)
        ))),
        None => Ok(()),
    }
}

/// Compiles `spec` on `g` into an instance that is satisfiable exactly when
/// the problem has a yes answer. Formula text depends on the problem's shape
/// parameters only.
pub fn encode(spec: &ProblemSpec, g: &ColoredGraph) -> Result<Encoded, ProblemError> {
    let n = g.n();
    match spec {
        ProblemSpec::FairVertexCover { size_bound, fairness } => {
            let free = [Var::vertex_set("C")];
            let formula = parse("forall x. forall y. (E(x,y) -> x in C | y in C)", &free)?;
            let inst = MsoglInstance::new(
                formula,
                vec![GlobalConstraint::at_most(1, 0, *size_bound as i64)],
                uniform_locals(1, n, 0, Interval::new(0, *fairness)),
            )
            .expect("arity 1");
            Ok(Encoded::new(g.clone(), inst))
        }
        ProblemSpec::DefectiveColoring { colors, defect } => defective_coloring(g, *colors, *defect),
        ProblemSpec::Alliance {
            variant,
            r,
            global,
            size_bound,
        } => Ok(alliance(g, *variant, *r, *global, *size_bound)),
        ProblemSpec::EquitablePartition { parts, property } => equitable_partition(g, *parts, *property),
        ProblemSpec::Capacitated {
            variant,
            capacities,
            size_bound,
        } => {
            check_capacities(g, capacities)?;
            Ok(capacitated(g, *variant, capacities, *size_bound))
        }
        ProblemSpec::BoundedDegreeDeletion { budget, degree } => {
            let free = [Var::vertex_set("X"), Var::edge_set("Y")];
            let formula = parse("forall e:f. ((forall x. (I(x,f) -> x in X)) -> f in Y)", &free)?;
            let inst = MsoglInstance::new(
                formula,
                vec![GlobalConstraint::new(vec![-1, 0], *budget as i64 - n as i64)],
                uniform_locals(2, n, 1, Interval::new(0, *degree)),
            )
            .expect("arity 2");
            Ok(Encoded::new(g.clone(), inst))
        }
        ProblemSpec::CapacitatedMso2 {
            formula,
            capacities,
            size_bound,
        } => {
            check_capacities(g, capacities)?;
            let phi = parse(formula, &[Var::vertex_set("A"), Var::edge_set("B")])?;
            capacitated_mso2(g, &phi, capacities, *size_bound)
        }
    }
}

/// `d = 0` is proper coloring and stays MSO₁. Otherwise a free edge set `F`
/// must hold every monochromatic edge and has degree at most `d` everywhere.
fn defective_coloring(g: &ColoredGraph, k: usize, d: usize) -> Result<Encoded, ProblemError> {
    let names = set_names("X", k);
    let mut free: Vec<Var> = names.iter().map(Var::vertex_set).collect();
    let same = same_class(&names);
    let body = if d == 0 {
        format!("forall x. forall y. (E(x,y) -> ~({same}))")
    } else {
        free.push(Var::edge_set("F"));
        format!("forall x. forall y. ((E(x,y) & ({same})) -> exists e:f. (f in F & I(x,f) & I(y,f)))")
    };
    let formula = parse(&format!("{} & {body}", partition(&names)), &free)?;
    let locals = if d == 0 {
        LocalConstraintTable::unconstrained(k, g.n())
    } else {
        uniform_locals(k + 1, g.n(), k, Interval::new(0, d))
    };
    let inst = MsoglInstance::new(formula, Vec::new(), locals).expect("arities agree");
    Ok(Encoded::new(g.clone(), inst))
}

/// Caps on outside neighbors: `⌊(deg + 1 - r)/2⌋` for members of `S` and
/// `⌊(deg - 1 - r)/2⌋` for vertices of `N(S) \ S`.
pub fn alliance_caps(g: &ColoredGraph, r: i64) -> (Vec<i64>, Vec<i64>) {
    (0..g.n())
        .map(|v| {
            let deg = g.degree(v) as i64;
            ((deg + 1 - r).div_euclid(2), (deg - 1 - r).div_euclid(2))
        })
        .unzip()
}

/// Free `X ⊆ V`, plus `Y` (half-edges from `X` to the outside) for the
/// defensive condition and `Z` (half-edges from `N(X) \ X` to the outside) for
/// the offensive one. Negative caps become marker colors that forbid the
/// vertex from the corresponding role.
fn alliance(g: &ColoredGraph, variant: AllianceVariant, r: i64, global: bool, size_bound: usize) -> Encoded {
    let n = g.n();
    let (mut h, cw) = subdivision_h(g, 0);
    let (def_caps, off_caps) = alliance_caps(g, r);
    let bad_def = h.push_color_mask((0..h.n()).map(|v| v < n && def_caps[v] < 0).collect());
    let bad_off = h.push_color_mask((0..h.n()).map(|v| v < n && off_caps[v] < 0).collect());
    let (cw, bd, bo) = (color(cw), color(bad_def), color(bad_off));

    let defensive = variant != AllianceVariant::Offensive;
    let offensive = variant != AllianceVariant::Defensive;
    let mut free = vec![Var::vertex_set("X")];
    let mut parts = vec![
        format!("forall x. (x in X -> ~x in {cw})"),
        "exists x. x in X".to_string(),
    ];
    let boundary = format!("(~x in X & ~x in {cw} & exists w. (E(x,w) & exists u. (E(w,u) & u in X)))");
    let mut caps = Vec::new();
    if defensive {
        free.push(Var::edge_set("Y"));
        caps.push(def_caps);
        parts.push(format!("forall x. (x in {bd} -> ~x in X)"));
        parts.push(
            "forall x. (x in X -> forall w. ((E(x,w) & exists u. (E(w,u) & ~u in X)) \
             -> exists e:f. (f in Y & I(x,f) & I(w,f))))"
                .to_string(),
        );
    }
    if offensive {
        free.push(Var::edge_set("Z"));
        caps.push(off_caps);
        parts.push(format!("forall x. ((x in {bo}) -> ~{boundary})"));
        parts.push(format!(
            "forall x. ({boundary} -> forall w. ((E(x,w) & exists u. (E(w,u) & ~u = x & ~u in X)) \
             -> exists e:f. (f in Z & I(x,f) & I(w,f))))"
        ));
    }
    if global {
        parts.push(format!(
            "forall x. (x in {cw} | x in X | exists w. (E(x,w) & exists u. (E(w,u) & u in X)))"
        ));
    }
    let formula = parse(&and_all(parts), &free).expect("alliance formula is well formed");
    let arity = free.len();
    let mut locals = LocalConstraintTable::unconstrained(arity, h.n());
    for (i, cap) in caps.iter().enumerate() {
        for v in 0..n {
            locals.set(i + 1, v, Interval::new(0, cap[v].max(0) as usize));
        }
    }
    let globals = vec![GlobalConstraint::at_most(arity, 0, size_bound as i64)];
    Encoded::new(h, MsoglInstance::new(formula, globals, locals).expect("arities agree"))
}

/// Parts `X1..Xr` of sizes `⌊n/r⌋` or `⌈n/r⌉`. Connectivity says that no
/// nonempty proper subset `Z` of a part is cut off from the rest of it, so
/// empty parts count as connected.
fn equitable_partition(g: &ColoredGraph, r: usize, property: PartProperty) -> Result<Encoded, ProblemError> {
    if r == 0 {
        return Err(invalid("an equitable partition needs at least one part"));
    }
    let n = g.n();
    let names = set_names("X", r);
    let free: Vec<Var> = names.iter().map(Var::vertex_set).collect();
    let property = match property {
        PartProperty::Independent => format!("forall x. forall y. (E(x,y) -> ~({}))", same_class(&names)),
        PartProperty::Connected => {
            let per_part = names.iter().map(|p| {
                format!(
                    "((forall x. (x in Z -> x in {p})) & exists x. (x in {p} & ~x in Z)) \
                     -> exists x. exists y. (x in Z & y in {p} & ~y in Z & E(x,y))"
                )
            });
            format!("forall Z. ((exists x. x in Z) -> {})", and_all(per_part))
        }
    };
    let formula = parse(&format!("{} & {property}", partition(&names)), &free)?;
    let (lo, hi) = (n / r, n.div_ceil(r));
    let globals = (0..r)
        .flat_map(|i| {
            [
                GlobalConstraint::at_most(r, i, hi as i64),
                GlobalConstraint::at_least(r, i, lo as i64),
            ]
        })
        .collect();
    let inst = MsoglInstance::new(formula, globals, LocalConstraintTable::unconstrained(r, n))
        .map_err(|e| invalid(e.to_string()))?;
    Ok(Encoded::new(g.clone(), inst))
}

/// The capacity part shared by the capacitated encodings: `X ⊆ V`, and the
/// half-edge set `Y` only touches `V` inside `X`.
fn capacity_parts(cw: &str, y: &str) -> Vec<String> {
    vec![
        format!("forall x. (x in X -> ~x in {cw})"),
        format!("forall e:f. (f in {y} -> forall x. ((I(x,f) & ~x in {cw}) -> x in X))"),
    ]
}

fn capacity_locals(h: &ColoredGraph, caps: &[usize]) -> LocalConstraintTable {
    let mut locals = LocalConstraintTable::unconstrained(2, h.n());
    for (v, &c) in caps.iter().enumerate() {
        locals.set(1, v, Interval::new(0, c));
    }
    locals
}

fn capacitated(g: &ColoredGraph, variant: CapacitatedVariant, caps: &[usize], k: usize) -> Encoded {
    let (h, cw) = subdivision_h(g, 0);
    let cw = color(cw);
    let mut parts = capacity_parts(&cw, "Y");
    parts.push(match variant {
        CapacitatedVariant::VertexCover => format!("forall w. (w in {cw} -> exists e:f. (f in Y & I(w,f)))"),
        CapacitatedVariant::DominatingSet => format!(
            "forall x. ((~x in {cw} & ~x in X) -> exists w. (E(x,w) & exists e:f. (f in Y & I(w,f))))"
        ),
    });
    let free = [Var::vertex_set("X"), Var::edge_set("Y")];
    let formula = parse(&and_all(parts), &free).expect("capacitated formula is well formed");
    let locals = capacity_locals(&h, caps);
    let globals = vec![GlobalConstraint::at_most(2, 0, k as i64)];
    Encoded::new(h, MsoglInstance::new(formula, globals, locals).expect("arities agree"))
}

/// `φ(A, B)` moved onto `H`: edges of `G` become `C_W` vertices, `A` becomes
/// `X`, and an edge is in `B` when its `C_W` vertex has a half-edge in `Z`.
/// A `C_W` vertex with any half-edge in `Z` carries all of its half-edges at
/// `X`, so every chosen edge loads each of its endpoints in `X`.
fn capacitated_mso2(g: &ColoredGraph, phi: &MsoFormula, caps: &[usize], k: usize) -> Result<Encoded, ProblemError> {
    if phi.body.has_globals() {
        return Err(invalid("the capacitated MSO₂ formula may not mention global constraints"));
    }
    let (h, cw) = subdivision_h(g, 0);
    let mut names = FreshNames::new(&phi.body, &phi.free);
    let translated = onto_subdivision(&phi.body, cw, &mut names, &mut Vec::new());
    let cws = color(cw);
    let mut parts = capacity_parts(&cws, "Z");
    parts.push(format!(
        "forall w. ((w in {cws} & exists e:f. (f in Z & I(w,f))) -> \
         forall e:f. ((I(w,f) & exists x. (I(x,f) & x in X)) -> f in Z))"
    ));
    let free = vec![Var::vertex_set("X"), Var::edge_set("Z")];
    let frame = parse(&and_all(parts), &free).expect("capacity frame is well formed");
    let formula = MsoFormula::new(free, Formula::and(frame.body, translated))?;
    let locals = capacity_locals(&h, caps);
    let globals = vec![GlobalConstraint::at_most(2, 0, k as i64)];
    let inst = MsoglInstance::new(formula, globals, locals).expect("arities agree");
    Ok(Encoded::new(h, inst))
}

/// Rewrites an MSO₂ formula on `G` with free `A`, `B` into an MSO₁-plus-`Z`
/// formula on `H`. `scope` maps bound names to their original sorts; bound
/// sets need no guard since they are only queried at correctly sorted
/// elements.
fn onto_subdivision(f: &Formula, cw: usize, names: &mut FreshNames, scope: &mut Vec<Var>) -> Formula {
    let sort_of = |scope: &[Var], x: &str| scope.iter().rev().find(|v| v.name == x).map(|v| v.sort);
    match f {
        Formula::True | Formula::False | Formula::Global(_) | Formula::InColor(..) | Formula::Equal(..) => f.clone(),
        Formula::Adj(x, y) => {
            let w = names.fresh("w");
            Formula::exists(
                Var::vertex(&w),
                Formula::and(Formula::adj(x, &w), Formula::adj(&w, y)),
            )
        }
        Formula::Incident(x, e) => Formula::adj(x, e),
        Formula::InSet(x, s) => match (sort_of(scope, s), s.as_str()) {
            (None, "A") => Formula::in_set(x, "X"),
            (None, _) => {
                let f = names.fresh("f");
                Formula::exists(
                    Var::edge(&f),
                    Formula::and(Formula::in_set(&f, "Z"), Formula::Incident(x.clone(), f.clone())),
                )
            }
            _ => f.clone(),
        },
        Formula::Not(a) => Formula::not(onto_subdivision(a, cw, names, scope)),
        Formula::And(a, b) => Formula::and(
            onto_subdivision(a, cw, names, scope),
            onto_subdivision(b, cw, names, scope),
        ),
        Formula::Or(a, b) => Formula::or(
            onto_subdivision(a, cw, names, scope),
            onto_subdivision(b, cw, names, scope),
        ),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let exists = matches!(f, Formula::Exists(..));
            scope.push(v.clone());
            let inner = onto_subdivision(body, cw, names, scope);
            scope.pop();
            let var = Var::new(
                v.name.clone(),
                if v.sort.is_set() { Sort::VertexSet } else { Sort::Vertex },
            );
            if v.sort.is_set() {
                return if exists {
                    Formula::exists(var, inner)
                } else {
                    Formula::forall(var, inner)
                };
            }
            let in_w = Formula::in_color(&v.name, cw);
            let sorted = if v.sort == Sort::Edge { in_w } else { Formula::not(in_w) };
            if exists {
                Formula::exists(var, Formula::and(sorted, inner))
            } else {
                Formula::forall(var, Formula::or(Formula::not(sorted), inner))
            }
        }
    }
}

/// The reduction output: Equitable Connected Partition with `parts` parts on
/// `graph`.
#[derive(Clone, Debug)]
pub struct EcpInstance {
    pub graph: ColoredGraph,
    pub parts: usize,
    /// `Σa_i / t`, or `None` when the sum is not divisible by `t`; the graph
    /// is then a fixed no-instance.
    pub bin_size: Option<usize>,
}

impl EcpInstance {
    pub fn trivially_no(&self) -> bool {
        self.bin_size.is_none()
    }

    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec::EquitablePartition {
            parts: self.parts,
            property: PartProperty::Connected,
        }
    }
}

/// `K_{n,t}` between items `u_i` and bins `w_j`, with `a_i - 1` pendants on
/// `u_i` and `2B - 1` on each `w_j`: `3tB` vertices in all. Vertices are
/// numbered items, bins, item pendants, bin pendants.
pub fn gen_ecp_hardness(t: usize, items: &[usize]) -> Result<EcpInstance, ProblemError> {
    if t == 0 {
        return Err(invalid("at least one bin is required"));
    }
    if items.contains(&0) {
        return Err(invalid("items must be positive"));
    }
    let sum: usize = items.iter().sum();
    if !sum.is_multiple_of(t) || sum == 0 {
        // 2t isolated vertices cannot form t connected parts of size 2.
        return Ok(EcpInstance {
            graph: ColoredGraph::empty(2 * t),
            parts: t,
            bin_size: None,
        });
    }
    let b = sum / t;
    let n = items.len();
    let mut edges: Vec<(Vertex, Vertex)> = (0..n).flat_map(|i| (0..t).map(move |j| (i, n + j))).collect();
    let mut next = n + t;
    let hubs = items.iter().enumerate().map(|(i, &a)| (i, a - 1));
    for (hub, count) in hubs.chain((0..t).map(|j| (n + j, 2 * b - 1))) {
        for _ in 0..count {
            edges.push((hub, next));
            next += 1;
        }
    }
    debug_assert_eq!(next, 3 * t * b);
    Ok(EcpInstance {
        graph: ColoredGraph::new(next, edges, Vec::new()).expect("reduction graph is simple"),
        parts: t,
        bin_size: Some(b),
    })
}

/// Whether `items` split into `t` groups of equal sum.
pub fn unary_bin_packing(t: usize, items: &[usize]) -> bool {
    let sum: usize = items.iter().sum();
    if t == 0 {
        return items.is_empty();
    }
    if !sum.is_multiple_of(t) {
        return false;
    }
    let mut sorted = items.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut bins = vec![0usize; t];
    pack(&sorted, &mut bins, sum / t)
}

fn pack(items: &[usize], bins: &mut [usize], cap: usize) -> bool {
    let Some((&a, rest)) = items.split_first() else {
        return bins.iter().all(|&b| b == cap);
    };
    for j in 0..bins.len() {
        // Bins with equal load are interchangeable.
        if bins[..j].contains(&bins[j]) || bins[j] + a > cap {
            continue;
        }
        bins[j] += a;
        let ok = pack(rest, bins, cap);
        bins[j] -= a;
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::vertex_integrity;

    fn sat(spec: &ProblemSpec, g: &ColoredGraph) -> bool {
        encode(spec, g).unwrap().solve(&SolveOptions::default()).unwrap().is_some()
    }

    #[test]
    fn defective_with_vi_colors() {
        for g in [ColoredGraph::complete(4), ColoredGraph::cycle(5), ColoredGraph::star(4)] {
            let spec = ProblemSpec::DefectiveColoring {
                colors: vertex_integrity(&g),
                defect: 0,
            };
            assert!(sat(&spec, &g));
        }
        let spec = ProblemSpec::DefectiveColoring { colors: 2, defect: 0 };
        assert!(!sat(&spec, &ColoredGraph::cycle(3)));
        let spec = ProblemSpec::DefectiveColoring { colors: 2, defect: 1 };
        assert!(sat(&spec, &ColoredGraph::cycle(3)));
    }

    #[test]
    fn alliance_on_isolated_vertex() {
        let spec = ProblemSpec::Alliance {
            variant: AllianceVariant::Defensive,
            r: 0,
            global: false,
            size_bound: 1,
        };
        let enc = encode(&spec, &ColoredGraph::empty(1)).unwrap();
        let w = enc.solve(&SolveOptions::default()).unwrap().unwrap();
        assert_eq!(w.get("X").unwrap().len(), 1);
    }

    #[test]
    fn equitable_connected_c4() {
        let spec = ProblemSpec::EquitablePartition {
            parts: 2,
            property: PartProperty::Connected,
        };
        let enc = encode(&spec, &ColoredGraph::cycle(4)).unwrap();
        assert!(enc.oracle().unwrap().satisfiable);
        assert!(enc.solve(&SolveOptions::default()).unwrap().is_some());
    }

    #[test]
    fn capacities_are_validated() {
        let spec = ProblemSpec::Capacitated {
            variant: CapacitatedVariant::VertexCover,
            capacities: vec![2, 1],
            size_bound: 2,
        };
        assert!(encode(&spec, &ColoredGraph::complete(2)).is_err());
    }

    #[test]
    fn ecp_examples() {
        let inst = gen_ecp_hardness(2, &[1, 1, 2]).unwrap();
        assert_eq!(inst.graph.n(), 12);
        assert_eq!(inst.bin_size, Some(2));
        let inst = gen_ecp_hardness(1, &[1]).unwrap();
        assert_eq!(inst.graph.n(), 3);
        assert_eq!(inst.graph.m(), 2);
        assert!(gen_ecp_hardness(2, &[1, 1, 1]).unwrap().trivially_no());
    }

    #[test]
    fn bin_packing_examples() {
        assert!(unary_bin_packing(2, &[1, 1, 2]));
        assert!(!unary_bin_packing(2, &[1, 1, 1]));
        assert!(unary_bin_packing(1, &[3, 4]));
        assert!(!unary_bin_packing(2, &[3, 1]));
        assert!(unary_bin_packing(3, &[2, 1, 1, 1, 1]));
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = ProblemSpec::Alliance {
            variant: AllianceVariant::Powerful,
            r: -1,
            global: true,
            size_bound: 3,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<ProblemSpec>(&text).unwrap(), spec);
    }
}
