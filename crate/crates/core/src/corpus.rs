//! Seeded random graphs, formulas and instances for cross-checking.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::constraints::{GlobalConstraint, Interval, LocalConstraintTable};
use crate::formulas::{Formula, MsoFormula, Sort, Var};
use crate::graphs::ColoredGraph;
use crate::instance::MsoglInstance;

/// `G(n, p)` with `colors` random color classes, each vertex joining a class
/// with probability 1/2.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, colors: usize) -> ColoredGraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    let classes = (0..colors)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    ColoredGraph::new(n, edges, classes).expect("generated graph is simple")
}

#[derive(Clone, Debug)]
pub struct FormulaParams {
    /// Free variables, in order.
    pub free: Vec<Var>,
    pub max_quantifiers: usize,
    pub colors: usize,
    pub globals: usize,
    pub max_depth: usize,
    /// Allow edge sorts and incidence.
    pub mso2: bool,
}

impl FormulaParams {
    pub fn closed(max_quantifiers: usize, colors: usize) -> Self {
        FormulaParams {
            free: Vec::new(),
            max_quantifiers,
            colors,
            globals: 0,
            max_depth: 5,
            mso2: false,
        }
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    params: &'a FormulaParams,
    next: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, stem: &str) -> String {
        self.next += 1;
        format!("{stem}{}", self.next)
    }

    fn atom(&mut self, scope: &[Var]) -> Formula {
        let elements: Vec<&Var> = scope.iter().filter(|v| !v.sort.is_set()).collect();
        let vertices: Vec<&Var> = elements.iter().copied().filter(|v| v.sort == Sort::Vertex).collect();
        let mut options: Vec<u8> = vec![0];
        if self.params.globals > 0 {
            options.push(1);
        }
        if !vertices.is_empty() {
            options.extend([2, 2, 3, 4]);
            if self.params.colors > 0 {
                options.push(5);
            }
        }
        if !elements.is_empty() {
            options.extend([6, 6]);
        }
        if elements.iter().any(|v| v.sort == Sort::Edge) && !vertices.is_empty() {
            options.extend([7, 7]);
        }
        match *options.choose(self.rng).unwrap() {
            0 => {
                if self.rng.gen_bool(0.5) {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            1 => Formula::Global(self.rng.gen_range(0..self.params.globals)),
            2 => {
                let x = vertices.choose(self.rng).unwrap().name.clone();
                let y = vertices.choose(self.rng).unwrap().name.clone();
                Formula::Adj(x, y)
            }
            3 => {
                let x = vertices.choose(self.rng).unwrap().name.clone();
                let y = vertices.choose(self.rng).unwrap().name.clone();
                Formula::Equal(x, y)
            }
            4 | 5 => {
                let x = vertices.choose(self.rng).unwrap().name.clone();
                let c = self.rng.gen_range(0..self.params.colors.max(1));
                if self.params.colors == 0 {
                    Formula::Equal(x.clone(), x)
                } else {
                    Formula::InColor(x, c)
                }
            }
            6 => {
                let x = *elements.choose(self.rng).unwrap();
                let sets: Vec<&Var> = scope
                    .iter()
                    .filter(|v| v.sort.is_set() && v.sort.element() == x.sort)
                    .collect();
                match sets.choose(self.rng) {
                    Some(set) => Formula::InSet(x.name.clone(), set.name.clone()),
                    None => Formula::Equal(x.name.clone(), x.name.clone()),
                }
            }
            _ => {
                let x = vertices.choose(self.rng).unwrap().name.clone();
                let edges: Vec<&&Var> = elements.iter().filter(|v| v.sort == Sort::Edge).collect();
                let e = edges.choose(self.rng).unwrap().name.clone();
                Formula::Incident(x, e)
            }
        }
    }

    fn formula(&mut self, depth: usize, scope: &mut Vec<Var>, quantifiers: &mut usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.atom(scope);
        }
        let roll = self.rng.gen_range(0..10);
        if *quantifiers > 0 && roll < 4 {
            *quantifiers -= 1;
            let sort = if self.params.mso2 {
                *[Sort::Vertex, Sort::Vertex, Sort::VertexSet, Sort::Edge, Sort::EdgeSet]
                    .choose(self.rng)
                    .unwrap()
            } else {
                *[Sort::Vertex, Sort::Vertex, Sort::VertexSet].choose(self.rng).unwrap()
            };
            let stem = match sort {
                Sort::Vertex => "x",
                Sort::VertexSet => "Z",
                Sort::Edge => "e",
                Sort::EdgeSet => "F",
            };
            let var = Var::new(self.fresh(stem), sort);
            scope.push(var.clone());
            let body = self.formula(depth - 1, scope, quantifiers);
            scope.pop();
            return if self.rng.gen_bool(0.5) {
                Formula::exists(var, body)
            } else {
                Formula::forall(var, body)
            };
        }
        match roll % 3 {
            0 => Formula::not(self.formula(depth - 1, scope, quantifiers)),
            1 => {
                let a = self.formula(depth - 1, scope, quantifiers);
                Formula::and(a, self.formula(depth - 1, scope, quantifiers))
            }
            _ => {
                let a = self.formula(depth - 1, scope, quantifiers);
                Formula::or(a, self.formula(depth - 1, scope, quantifiers))
            }
        }
    }
}

/// A random well-sorted formula over `params.free` with at most
/// `params.max_quantifiers` quantifiers.
pub fn random_formula<R: Rng>(rng: &mut R, params: &FormulaParams) -> MsoFormula {
    let mut scope = params.free.clone();
    let mut quantifiers = params.max_quantifiers;
    let mut gen = Gen {
        rng,
        params,
        next: 0,
    };
    let body = gen.formula(params.max_depth, &mut scope, &mut quantifiers);
    MsoFormula::new(params.free.clone(), body).expect("generated formula is well sorted")
}

/// Random globals with coefficients in `[-2, 2]` and bounds in `[-1, n]`.
pub fn random_globals<R: Rng>(rng: &mut R, count: usize, arity: usize, n: usize) -> Vec<GlobalConstraint> {
    (0..count)
        .map(|_| {
            let coeffs = (0..arity).map(|_| rng.gen_range(-2..=2)).collect();
            GlobalConstraint::new(coeffs, rng.gen_range(-1..=n as i64))
        })
        .collect()
}

/// Each interval is unconstrained with probability `1 - density`, otherwise a
/// random `[lo, hi]` with `lo ≤ 2` and `hi ≤ lo + 2`.
pub fn random_locals<R: Rng>(rng: &mut R, arity: usize, n: usize, density: f64) -> LocalConstraintTable {
    let mut t = LocalConstraintTable::unconstrained(arity, n);
    for i in 0..arity {
        for v in 0..n {
            if rng.gen_bool(density) {
                let lo = rng.gen_range(0..=2);
                t.set(i, v, Interval::new(lo, lo + rng.gen_range(0..=2)));
            }
        }
    }
    t
}

#[derive(Clone, Debug)]
pub struct InstanceParams {
    pub max_n: usize,
    pub max_colors: usize,
    pub max_free: usize,
    pub max_quantifiers: usize,
    pub max_globals: usize,
    pub local_density: f64,
    pub mso2: bool,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_n: 6,
            max_colors: 2,
            max_free: 2,
            max_quantifiers: 2,
            max_globals: 1,
            local_density: 0.3,
            mso2: false,
        }
    }
}

/// A random graph and instance within the given limits.
pub fn random_instance<R: Rng>(rng: &mut R, params: &InstanceParams) -> (ColoredGraph, MsoglInstance) {
    let n = rng.gen_range(1..=params.max_n);
    let colors = rng.gen_range(0..=params.max_colors);
    let density = rng.gen_range(0.2..0.7);
    let g = random_graph(rng, n, density, colors);
    let s = rng.gen_range(0..=params.max_free);
    let free: Vec<Var> = (0..s)
        .map(|i| {
            if params.mso2 && rng.gen_bool(0.5) {
                Var::edge_set(format!("Y{}", i + 1))
            } else {
                Var::vertex_set(format!("X{}", i + 1))
            }
        })
        .collect();
    let globals = rng.gen_range(0..=params.max_globals);
    let formula = random_formula(
        rng,
        &FormulaParams {
            free,
            max_quantifiers: params.max_quantifiers,
            colors,
            globals,
            max_depth: 5,
            mso2: params.mso2,
        },
    );
    let inst = MsoglInstance::new(
        formula,
        random_globals(rng, globals, s, n),
        random_locals(rng, s, n, params.local_density),
    )
    .expect("arities agree");
    (g, inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_within_limits() {
        let params = InstanceParams::default();
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..50).map(|_| random_instance(&mut rng, &params)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (g, inst) in &a {
            let (h, other) = random_instance(&mut rng, &params);
            assert_eq!(g, &h);
            assert_eq!(inst, &other);
            assert!(g.n() <= 6 && inst.arity() <= 2 && inst.globals.len() <= 1);
            assert!(inst.formula.quantifier_count() <= 2);
            assert!(!inst.formula.is_mso2());
        }
    }
}
