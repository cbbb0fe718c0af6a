//! The shape-guessing model checker.
//!
//! For every valid shape and pre-evaluation γ the engine checks
//! local constraints off `S` (per extended type), then the size and `S`-local
//! rows as an integer program over the ⊤ counts, and finally the formula on a
//! kernel built from representatives.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde_json::json;
use thiserror::Error;

use crate::constraints::{
    evaluate_globals, gamma_rows, obeys_at, restrict_to_small_degrees, uniformize, GlobalConstraint,
    LocalConstraintTable,
};
use crate::evaluator::{holds_with_budget, kernel_threshold, EvalError, DEFAULT_BUDGET, MAX_EVAL_VERTICES};
use crate::formulas::{enumerate_pre_evaluations, Formula, MsoFormula, PreEvaluation};
use crate::graphs::{find_vi_set, minimum_vi_set, Assignment, ColoredGraph, Vertex, ViSet};
use crate::ilp::{feasible, IlpError, LinearSystem};
use crate::instance::{InstanceError, MsoglInstance};
use crate::shapes::{
    Count, ExtendedTypeUniverse, Shape, ShapeError, ShapeProduct, ShapeSpace, SigmaSIter,
};

const BATCH: usize = 256;
const MAX_GLOBALS: usize = 16;
/// Kernel verdicts kept before the memo is flushed.
const MEMO_CAP: usize = 1 << 16;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("no vi({0})-set exists")]
    NoViSet(usize),
    #[error("{0} global constraints; at most {MAX_GLOBALS} are supported")]
    TooManyGlobals(usize),
    #[error("edge-sorted formula; use the MSO₂ route")]
    EdgeSorts,
    #[error("witness failed re-verification: {0}")]
    Verification(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Ilp(#[from] IlpError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    #[default]
    Sequential,
    /// Uses rayon when the `parallel` feature is on, sequential otherwise.
    Parallel,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Node budget for each kernel evaluation.
    pub budget: u64,
    pub k_override: Option<usize>,
    pub parallelism: Parallelism,
    pub explain: bool,
    /// Re-check every witness against the original instance.
    pub verify: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
            k_override: None,
            parallelism: Parallelism::Sequential,
            explain: false,
            verify: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Default)]
pub struct SolveStats {
    pub shapes: AtomicU64,
    pub ilp_calls: AtomicU64,
    pub kernel_evals: AtomicU64,
    pub memo_hits: AtomicU64,
}

impl SolveStats {
    pub fn snapshot(&self) -> [u64; 4] {
        [
            self.shapes.load(Ordering::Relaxed),
            self.ilp_calls.load(Ordering::Relaxed),
            self.kernel_evals.load(Ordering::Relaxed),
            self.memo_hits.load(Ordering::Relaxed),
        ]
    }
}

#[derive(Debug)]
pub struct Solution {
    pub assignment: Option<Assignment>,
    pub shape: Option<Shape>,
    pub gamma: Option<PreEvaluation>,
    pub stats: SolveStats,
    /// Human-readable trace, filled when `explain` is set.
    pub explain: Vec<String>,
}

impl Solution {
    pub fn is_sat(&self) -> bool {
        self.assignment.is_some()
    }
}

type MemoKey = (Vec<u32>, Vec<usize>, Vec<bool>);

/// Everything fixed before the guessing loop.
pub struct SolveContext {
    pub original: ColoredGraph,
    /// The uniformized graph.
    pub graph: ColoredGraph,
    pub vi: ViSet,
    pub q: usize,
    pub formula: MsoFormula,
    pub globals: Vec<GlobalConstraint>,
    pub locals: LocalConstraintTable,
    pub restricted: LocalConstraintTable,
    pub space: ShapeSpace,
    /// Allowed memberships of each `S`-vertex.
    pub s_choices: Vec<Vec<u32>>,
    gammas: Vec<(PreEvaluation, Formula)>,
    memo: Mutex<HashMap<MemoKey, bool>>,
    budget: u64,
}

impl SolveContext {
    pub fn new(g: &ColoredGraph, inst: &MsoglInstance, opts: &SolveOptions) -> Result<Self, EngineError> {
        inst.check_graph(g)?;
        if inst.formula.is_mso2() {
            return Err(EngineError::EdgeSorts);
        }
        if inst.globals.len() > MAX_GLOBALS {
            return Err(EngineError::TooManyGlobals(inst.globals.len()));
        }
        let formula = inst.effective_formula();
        let vi = match opts.k_override {
            Some(k) => find_vi_set(g, k).ok_or(EngineError::NoViSet(k))?,
            None => minimum_vi_set(g),
        };
        let q = formula.quantifier_count();
        let s = formula.arity();
        let restricted = restrict_to_small_degrees(&inst.locals, &vi.set, vi.k);
        let uniform = uniformize(g, &vi.set, &restricted);
        let unary = unary_conjuncts(&formula);
        let allowed = |v: Vertex| -> Vec<u32> {
            (0..1u32 << s)
                .filter(|&m| unary.iter().all(|f| unary_holds(g, f, v, m, &formula)))
                .collect()
        };
        let s_choices: Vec<Vec<u32>> = vi.set.iter().map(|&v| allowed(v)).collect();
        let universe = ExtendedTypeUniverse::with_allowed(&uniform.graph, &vi.set, s, allowed)?;
        let threshold = usize::try_from(kernel_threshold(vi.k, q)).unwrap_or(usize::MAX);
        let space = ShapeSpace::from_universe(universe, g.n(), threshold);
        let gammas = enumerate_pre_evaluations(inst.globals.len())
            .into_iter()
            .map(|gamma| {
                let f = formula.body.pre_evaluate(&gamma)?.simplify();
                Ok((gamma, f))
            })
            .filter(|r| !matches!(r, Ok((_, Formula::False))))
            .collect::<Result<Vec<_>, crate::formulas::FormulaError>>()
            .map_err(InstanceError::from)?;
        Ok(SolveContext {
            original: g.clone(),
            graph: uniform.graph,
            vi,
            q,
            formula,
            globals: inst.globals.clone(),
            locals: inst.locals.clone(),
            restricted,
            space,
            s_choices,
            gammas,
            memo: Mutex::new(HashMap::new()),
            budget: opts.budget,
        })
    }

    pub fn universe(&self) -> &ExtendedTypeUniverse {
        &self.space.universe
    }

    pub fn s(&self) -> usize {
        self.formula.arity()
    }

    /// Whether every component of type `t` obeys its local constraints when
    /// the `S`-vertices carry `sigma_s`.
    pub fn admissible(&self, t: usize, sigma_s: &[u32]) -> bool {
        let u = self.universe();
        let ty = &u.types[t];
        let inner = u.inner_adjacency(ty.base);
        (0..ty.coloring.len()).all(|pos| {
            let v = u.representative_vertex(ty.base, pos);
            (0..self.s()).all(|i| {
                let mut count = (0..ty.coloring.len())
                    .filter(|&p| inner[pos] >> p & 1 == 1 && ty.coloring[p] >> i & 1 == 1)
                    .count();
                count += (0..sigma_s.len())
                    .filter(|&j| u.adjacent_to_s(ty.base, pos, j) && sigma_s[j] >> i & 1 == 1)
                    .count();
                self.restricted.get(i, v).contains(count)
            })
        })
    }

    /// The Step 3 system over all extended-type counts `x_{t'}`.
    pub fn build_ilp(&self, shape: &Shape, gamma: &PreEvaluation) -> LinearSystem {
        let u = self.universe();
        let dim = u.len();
        let mut sys = LinearSystem::new(dim);
        for b in 0..u.num_bases() {
            let nb = u.base_count(b) as i64;
            let mut row = vec![0; dim];
            for t in u.by_base[b].clone() {
                sys.set_bounds(t, 0, nb);
                row[t] = 1;
            }
            sys.add_eq(row, nb);
        }
        for (t, c) in shape.sigma.iter().enumerate() {
            let mut row = vec![0; dim];
            row[t] = 1;
            match c {
                Count::Exact(c) => sys.add_eq(row, *c as i64),
                Count::Top => sys.add_ge(row, self.space.threshold as i64 + 1),
            }
        }
        for (coeffs, bound) in self.linear_rows(shape, gamma, Some) {
            sys.add_le(coeffs, bound);
        }
        sys
    }

    /// Rows `coeffs·x ≤ bound` for `R_γ` and the `S`-local constraints, with
    /// the sizes expanded over the variables chosen by `var`; types without a
    /// variable contribute their fixed count to the bound.
    fn linear_rows(
        &self,
        shape: &Shape,
        gamma: &PreEvaluation,
        var: impl Fn(usize) -> Option<usize>,
    ) -> Vec<(Vec<i64>, i64)> {
        let u = self.universe();
        let s = self.s();
        let dim = (0..u.len()).filter_map(&var).map(|j| j + 1).max().unwrap_or(0);
        let fixed = |t: usize| match shape.sigma[t] {
            Count::Exact(c) if var(t).is_none() => c as i64,
            _ => 0,
        };
        let mut rows = Vec::new();
        let s_sizes = u.s_sizes(&shape.sigma_s);
        for row in gamma_rows(&self.globals, gamma) {
            let mut coeffs = vec![0i64; dim];
            let mut bound = row.bound as i128;
            for i in 0..s {
                bound -= row.coeffs[i] as i128 * s_sizes[i] as i128;
            }
            for t in 0..u.len() {
                let per: i64 = (0..s).map(|i| row.coeffs[i] * u.types[t].sizes[i] as i64).sum();
                match var(t) {
                    Some(j) => coeffs[j] += per,
                    None => bound -= per as i128 * fixed(t) as i128,
                }
            }
            rows.push((coeffs, clamp(bound)));
        }
        for (j, &v) in u.s_order.iter().enumerate() {
            for i in 0..s {
                let base: i128 = u
                    .s_order
                    .iter()
                    .enumerate()
                    .filter(|&(jj, &w)| self.graph.is_adjacent(v, w) && shape.sigma_s[jj] >> i & 1 == 1)
                    .count() as i128;
                let mut coeffs = vec![0i64; dim];
                let mut constant = base;
                for t in 0..u.len() {
                    let d = u.types[t].s_degrees[j][i] as i64;
                    match var(t) {
                        Some(k) => coeffs[k] += d,
                        None => constant += d as i128 * fixed(t) as i128,
                    }
                }
                let iv = self.locals.get(i, v);
                rows.push((coeffs.clone(), clamp(iv.hi as i128 - constant)));
                rows.push((coeffs.iter().map(|&c| -c).collect(), clamp(constant - iv.lo as i128)));
            }
        }
        rows
    }

    /// Step 3 with variables only for the ⊤ types; returns all counts.
    fn solve_counts(&self, shape: &Shape, gamma: &PreEvaluation) -> Result<Option<Vec<usize>>, EngineError> {
        let u = self.universe();
        let tops: Vec<usize> = (0..u.len()).filter(|&t| shape.sigma[t] == Count::Top).collect();
        let mut index = vec![None; u.len()];
        for (j, &t) in tops.iter().enumerate() {
            index[t] = Some(j);
        }
        let rows = self.linear_rows(shape, gamma, |t| index[t]);
        let mut counts: Vec<usize> = shape
            .sigma
            .iter()
            .map(|c| match c {
                Count::Exact(c) => *c,
                Count::Top => 0,
            })
            .collect();
        if tops.is_empty() {
            let ok = rows.iter().all(|(_, bound)| *bound >= 0);
            return Ok(ok.then_some(counts));
        }
        let mut sys = LinearSystem::new(tops.len());
        for (j, &t) in tops.iter().enumerate() {
            let nb = u.base_count(u.types[t].base) as i64;
            sys.set_bounds(j, self.space.threshold as i64 + 1, nb);
        }
        for b in 0..u.num_bases() {
            let range = u.by_base[b].clone();
            if !range.clone().any(|t| index[t].is_some()) {
                continue;
            }
            let fixed: usize = range.clone().filter(|&t| index[t].is_none()).map(|t| counts[t]).sum();
            let mut row = vec![0; tops.len()];
            for t in range {
                if let Some(j) = index[t] {
                    row[j] = 1;
                }
            }
            sys.add_eq(row, (u.base_count(b) - fixed) as i64);
        }
        for (coeffs, bound) in rows {
            if coeffs.iter().all(|&c| c == 0) {
                if bound < 0 {
                    return Ok(None);
                }
                continue;
            }
            sys.add_le(coeffs, bound);
        }
        let Some(x) = feasible(&sys)? else {
            return Ok(None);
        };
        for (j, &t) in tops.iter().enumerate() {
            counts[t] = x[j] as usize;
        }
        Ok(Some(counts))
    }

    /// Step 1: the formula on the kernel of a representative.
    fn kernel_holds(&self, shape: &Shape, gamma_index: usize, stats: &SolveStats) -> Result<bool, EngineError> {
        let copies: Vec<usize> = shape
            .sigma
            .iter()
            .map(|c| match c {
                Count::Exact(c) => (*c).min(self.space.threshold),
                Count::Top => self.space.threshold,
            })
            .collect();
        let key = (shape.sigma_s.clone(), copies.clone(), self.gammas[gamma_index].0 .0.clone());
        if let Some(&hit) = self.memo.lock().unwrap().get(&key) {
            stats.memo_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(hit);
        }
        stats.kernel_evals.fetch_add(1, Ordering::Relaxed);
        let (kernel, assignment) = self.build_kernel(&shape.sigma_s, &copies);
        let closed = MsoFormula {
            free: self.formula.free.clone(),
            body: self.gammas[gamma_index].1.clone(),
        };
        let truth = holds_with_budget(&kernel, &closed, &assignment, self.budget)?;
        let mut memo = self.memo.lock().unwrap();
        if memo.len() >= MEMO_CAP {
            memo.clear();
        }
        memo.insert(key, truth);
        Ok(truth)
    }

    /// `S` followed by `copies[t]` realizations of each extended type.
    fn build_kernel(&self, sigma_s: &[u32], copies: &[usize]) -> (ColoredGraph, Assignment) {
        let u = self.universe();
        let s = self.s();
        let mut vertices: Vec<(Vertex, u32)> =
            u.s_order.iter().zip(sigma_s).map(|(&v, &m)| (v, m)).collect();
        let mut edges = Vec::new();
        for (a, &v) in u.s_order.iter().enumerate() {
            for (b, &w) in u.s_order.iter().enumerate().skip(a + 1) {
                if self.graph.is_adjacent(v, w) {
                    edges.push((a, b));
                }
            }
        }
        for (t, &c) in copies.iter().enumerate() {
            let ty = &u.types[t];
            let inner = u.inner_adjacency(ty.base);
            for _ in 0..c {
                let start = vertices.len();
                for (pos, &m) in ty.coloring.iter().enumerate() {
                    vertices.push((u.representative_vertex(ty.base, pos), m));
                    for (j, _) in u.s_order.iter().enumerate() {
                        if u.adjacent_to_s(ty.base, pos, j) {
                            edges.push((j, start + pos));
                        }
                    }
                    for p in 0..pos {
                        if inner[pos] >> p & 1 == 1 {
                            edges.push((start + p, start + pos));
                        }
                    }
                }
            }
        }
        let colors = (0..self.original.num_colors())
            .map(|c| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, (v, _))| self.original.has_color(*v, c))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let kernel = ColoredGraph::new(vertices.len(), edges, colors).expect("kernel is simple");
        let mut a = Assignment::empty(vertices.len(), s);
        for (i, &(_, m)) in vertices.iter().enumerate() {
            for bit in 0..s {
                if m >> bit & 1 == 1 {
                    a.insert(bit, i);
                }
            }
        }
        (kernel, a)
    }

    /// Steps 1 and 3 for one guess (Step 2 is enforced by the enumeration).
    pub fn check_shape(&self, shape: &Shape, gamma_index: usize, stats: &SolveStats) -> Result<Option<Assignment>, EngineError> {
        stats.ilp_calls.fetch_add(1, Ordering::Relaxed);
        let Some(counts) = self.solve_counts(shape, &self.gammas[gamma_index].0)? else {
            return Ok(None);
        };
        if !self.kernel_holds(shape, gamma_index, stats)? {
            return Ok(None);
        }
        Ok(Some(self.witness_from_counts(shape, &counts)?))
    }

    pub fn witness_from_counts(&self, shape: &Shape, counts: &[usize]) -> Result<Assignment, ShapeError> {
        self.universe().realize(self.original.n(), &shape.sigma_s, counts)
    }

    pub fn gammas(&self) -> impl Iterator<Item = &PreEvaluation> {
        self.gammas.iter().map(|(g, _)| g)
    }

    /// Valid shapes whose extended types all obey the locals off `S`.
    pub fn shapes(&self) -> impl Iterator<Item = Shape> + '_ {
        SigmaSIter::new(self.s_choices.clone()).flat_map(move |sigma_s| {
            let admissible: Vec<bool> = (0..self.universe().len())
                .map(|t| self.admissible(t, &sigma_s))
                .collect();
            let lists = self.space.distributions(&admissible);
            ShapeProduct::new(self.universe().len(), &self.universe().by_base, lists).map(move |sigma| Shape {
                sigma_s: sigma_s.clone(),
                sigma,
            })
        })
    }

    /// Re-checks a witness on the original graph: globals, locals, formula.
    pub fn verify(&self, a: &Assignment) -> Result<(), EngineError> {
        let sizes = a.sizes();
        let truth = evaluate_globals(&self.globals, &sizes);
        let all: Vec<Vertex> = (0..self.original.n()).collect();
        if !obeys_at(&self.original, a, &self.locals, &all) {
            return Err(EngineError::Verification("local constraints"));
        }
        if self.original.n() > MAX_EVAL_VERTICES {
            return Ok(());
        }
        let body = self.formula.body.pre_evaluate(&truth).map_err(InstanceError::from)?;
        let f = MsoFormula {
            free: self.formula.free.clone(),
            body,
        };
        match holds_with_budget(&self.original, &f, a, self.budget) {
            Ok(true) => Ok(()),
            Ok(false) => Err(EngineError::Verification("formula")),
            Err(EvalError::BudgetExceeded(_)) => Ok(()),
            Err(e) => Err(e.into()),
        }
    }
}

fn clamp(x: i128) -> i64 {
    x.clamp(i64::MIN as i128 / 4, i64::MAX as i128 / 4) as i64
}

/// Top-level conjuncts `∀x.ψ` with `ψ` quantifier-free and about `x` alone.
fn unary_conjuncts(f: &MsoFormula) -> Vec<(String, Formula)> {
    fn flatten<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
        if let Formula::And(a, b) = f {
            flatten(a, out);
            flatten(b, out);
        } else {
            out.push(f);
        }
    }
    fn about(f: &Formula, x: &str) -> bool {
        match f {
            Formula::True | Formula::False => true,
            Formula::InColor(y, _) | Formula::InSet(y, _) => y == x,
            Formula::Equal(a, b) | Formula::Adj(a, b) => a == x && b == x,
            Formula::Not(a) => about(a, x),
            Formula::And(a, b) | Formula::Or(a, b) => about(a, x) && about(b, x),
            _ => false,
        }
    }
    let mut parts = Vec::new();
    flatten(&f.body, &mut parts);
    parts
        .into_iter()
        .filter_map(|p| match p {
            Formula::Forall(var, body) if !var.sort.is_set() && !var.sort.is_edge_sorted() && about(body, &var.name) => {
                Some((var.name.clone(), (**body).clone()))
            }
            _ => None,
        })
        .collect()
}

fn unary_holds(g: &ColoredGraph, (x, f): &(String, Formula), v: Vertex, m: u32, formula: &MsoFormula) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::InColor(_, c) => *c >= g.num_colors() || g.has_color(v, *c),
        Formula::InSet(_, set) => formula.free_index(set).is_none_or(|i| m >> i & 1 == 1),
        Formula::Equal(..) => true,
        Formula::Adj(..) => false,
        Formula::Not(a) => !unary_holds(g, &(x.clone(), (**a).clone()), v, m, formula),
        Formula::And(a, b) => {
            unary_holds(g, &(x.clone(), (**a).clone()), v, m, formula)
                && unary_holds(g, &(x.clone(), (**b).clone()), v, m, formula)
        }
        Formula::Or(a, b) => {
            unary_holds(g, &(x.clone(), (**a).clone()), v, m, formula)
                || unary_holds(g, &(x.clone(), (**b).clone()), v, m, formula)
        }
        _ => true,
    }
}

/// Decides the instance; `Some(X)` is a satisfying assignment.
pub fn model_check(g: &ColoredGraph, inst: &MsoglInstance) -> Result<Option<Assignment>, EngineError> {
    Ok(model_check_with(g, inst, &SolveOptions::default())?.assignment)
}

pub fn model_check_with(g: &ColoredGraph, inst: &MsoglInstance, opts: &SolveOptions) -> Result<Solution, EngineError> {
    let ctx = SolveContext::new(g, inst, opts)?;
    let stats = SolveStats::default();
    let mut explain = Vec::new();
    if opts.explain {
        explain.push(format!("vi-set: k={} S={:?}", ctx.vi.k, ctx.vi.set));
        explain.push(format!(
            "q={} s={} g={} threshold={}",
            ctx.q,
            ctx.s(),
            ctx.globals.len(),
            ctx.space.threshold
        ));
        explain.push(format!(
            "base types: {}, extended types: {}",
            ctx.universe().num_bases(),
            ctx.universe().len()
        ));
    }
    let mut found = None;
    if !trivially_unsat(&ctx) {
        let gammas = ctx.gammas.len();
        let mut shapes = ctx.shapes();
        loop {
            let batch: Vec<Shape> = shapes.by_ref().take(BATCH).collect();
            if batch.is_empty() {
                break;
            }
            stats.shapes.fetch_add(batch.len() as u64, Ordering::Relaxed);
            let check = |guess: usize| -> Option<Result<(usize, Assignment), EngineError>> {
                let (si, gi) = (guess / gammas, guess % gammas);
                match ctx.check_shape(&batch[si], gi, &stats) {
                    Ok(Some(a)) => Some(Ok((guess, a))),
                    Ok(None) => None,
                    Err(e) => Some(Err(e)),
                }
            };
            let hit = run_guesses(batch.len() * gammas, opts.parallelism, check);
            if let Some(r) = hit {
                let (guess, a) = r?;
                found = Some((batch[guess / gammas].clone(), guess % gammas, a));
                break;
            }
        }
    }
    let solution = match found {
        Some((shape, gi, a)) => {
            if opts.verify {
                ctx.verify(&a)?;
            }
            let gamma = ctx.gammas[gi].0.clone();
            if opts.explain {
                explain.push(format!("shape: {}", json!(shape)));
                explain.push(format!("gamma: {:?}", gamma.0));
                explain.push(format!("ilp:\n{}", ctx.build_ilp(&shape, &gamma)));
            }
            Solution {
                assignment: Some(a),
                shape: Some(shape),
                gamma: Some(gamma),
                stats,
                explain,
            }
        }
        None => Solution {
            assignment: None,
            shape: None,
            gamma: None,
            stats,
            explain,
        },
    };
    let mut solution = solution;
    if opts.explain {
        let [shapes, ilps, evals, hits] = solution.stats.snapshot();
        solution.explain.push(format!(
            "shapes tried: {shapes}, ilp calls: {ilps}, kernel checks: {evals}, memo hits: {hits}"
        ));
        if !solution.is_sat() {
            solution.explain.push("no shape and pre-evaluation succeeded".into());
        }
    }
    Ok(solution)
}

fn trivially_unsat(ctx: &SolveContext) -> bool {
    (0..ctx.locals.arity()).any(|i| (0..ctx.original.n()).any(|v| ctx.restricted.get(i, v).is_empty()))
}

/// Lowest guess index whose check returns something.
fn run_guesses<T: Send>(
    count: usize,
    parallelism: Parallelism,
    check: impl Fn(usize) -> Option<T> + Sync + Send,
) -> Option<T> {
    #[cfg(feature = "parallel")]
    if parallelism == Parallelism::Parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().find_map_first(check);
    }
    let _ = parallelism;
    (0..count).find_map(check)
}
