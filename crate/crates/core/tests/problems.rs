use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vicheck_core::corpus::random_graph;
use vicheck_core::engine::SolveOptions;
use vicheck_core::graphs::ColoredGraph;
use vicheck_core::oracle::problems as direct;
use vicheck_core::problems::*;

fn engine_verdict(spec: &ProblemSpec, g: &ColoredGraph) -> bool {
    encode(spec, g).unwrap().solve(&SolveOptions::default()).unwrap().is_some()
}

fn direct_verdict(spec: &ProblemSpec, g: &ColoredGraph) -> bool {
    match spec {
        ProblemSpec::FairVertexCover { size_bound, fairness } => direct::fair_vertex_cover(g, *size_bound, *fairness),
        ProblemSpec::DefectiveColoring { colors, defect } => direct::defective_coloring(g, *colors, *defect),
        ProblemSpec::Alliance { variant, r, global, size_bound } => direct::alliance(g, *variant, *r, *global, *size_bound),
        ProblemSpec::EquitablePartition { parts, property } => direct::equitable_partition(g, *parts, *property),
        ProblemSpec::Capacitated { variant: CapacitatedVariant::VertexCover, capacities, size_bound } => {
            direct::capacitated_vertex_cover(g, capacities, *size_bound)
        }
        ProblemSpec::Capacitated { variant: CapacitatedVariant::DominatingSet, capacities, size_bound } => {
            direct::capacitated_dominating_set(g, capacities, *size_bound)
        }
        ProblemSpec::BoundedDegreeDeletion { budget, degree } => direct::bounded_degree_deletion(g, *budget, *degree),
        ProblemSpec::CapacitatedMso2 { formula, capacities, size_bound } => {
            let phi = vicheck_core::formulas::parse(
                formula,
                &[vicheck_core::formulas::Var::vertex_set("A"), vicheck_core::formulas::Var::edge_set("B")],
            )
            .unwrap();
            direct::capacitated_mso2(g, &phi, capacities, *size_bound)
        }
    }
    .unwrap()
}

fn random_caps(rng: &mut ChaCha8Rng, g: &ColoredGraph) -> Vec<usize> {
    (0..g.n()).map(|v| rng.gen_range(0..=g.degree(v))).collect()
}

fn random_spec(rng: &mut ChaCha8Rng, g: &ColoredGraph, kind: usize) -> ProblemSpec {
    let n = g.n();
    match kind {
        0 => ProblemSpec::FairVertexCover { size_bound: rng.gen_range(0..=n), fairness: rng.gen_range(0..=2) },
        1 => ProblemSpec::DefectiveColoring { colors: rng.gen_range(1..=3), defect: rng.gen_range(0..=1) },
        2 => ProblemSpec::Alliance {
            variant: [AllianceVariant::Defensive, AllianceVariant::Offensive, AllianceVariant::Powerful][rng.gen_range(0..3)],
            r: rng.gen_range(-1..=1),
            global: rng.gen_bool(0.3),
            size_bound: rng.gen_range(1..=n),
        },
        3 => ProblemSpec::EquitablePartition {
            parts: rng.gen_range(1..=3),
            property: if rng.gen_bool(0.5) { PartProperty::Independent } else { PartProperty::Connected },
        },
        4 => ProblemSpec::Capacitated {
            variant: if rng.gen_bool(0.5) { CapacitatedVariant::VertexCover } else { CapacitatedVariant::DominatingSet },
            capacities: random_caps(rng, g),
            size_bound: rng.gen_range(0..=n),
        },
        5 => ProblemSpec::BoundedDegreeDeletion { budget: rng.gen_range(0..=n), degree: rng.gen_range(0..=2) },
        _ => ProblemSpec::CapacitatedMso2 {
            formula: ["forall e:y. (y in B | exists x. (I(x,y) & x in A))", "exists e:y. y in B", "forall x. (x in A -> exists e:y. (I(x,y) & y in B))"][rng.gen_range(0..3)].into(),
            capacities: random_caps(rng, g),
            size_bound: rng.gen_range(0..=n),
        },
    }
}

/// Random graphs with at most `max_m` edges.
fn sparse_graph(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> ColoredGraph {
    loop {
        let n = rng.gen_range(1..=max_n);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(rng, n, p, 0);
        if g.m() <= max_m {
            return g;
        }
    }
}

fn check_kind(kind: usize, seed: u64, cases: usize, max_n: usize, max_m: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let g = sparse_graph(&mut rng, max_n, max_m);
        let spec = random_spec(&mut rng, &g, kind);
        assert_eq!(engine_verdict(&spec, &g), direct_verdict(&spec, &g), "{spec:?} on {g:?}");
    }
}

#[test]
fn fair_vertex_cover_matches_checker() {
    check_kind(0, 1, 40, 5, 10);
}

#[test]
fn defective_coloring_matches_checker() {
    check_kind(1, 2, 40, 5, 10);
}

#[test]
fn alliances_match_checker() {
    check_kind(2, 3, 40, 5, 4);
}

#[test]
fn equitable_partition_matches_checker() {
    check_kind(3, 4, 40, 5, 10);
}

#[test]
fn capacitated_problems_match_checker() {
    check_kind(4, 5, 40, 5, 5);
}

#[test]
fn bounded_degree_deletion_matches_checker() {
    check_kind(5, 6, 40, 5, 10);
}

#[test]
fn capacitated_mso2_matches_checker() {
    check_kind(6, 7, 30, 3, 3);
}

#[test]
fn formula_size_ignores_the_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let graphs: Vec<ColoredGraph> = (0..6).map(|_| sparse_graph(&mut rng, 6, 15)).collect();
    for kind in 0..7 {
        let spec = random_spec(&mut rng, &graphs[0], kind);
        let size = |g: &ColoredGraph| {
            let spec = match &spec {
                ProblemSpec::Capacitated { variant, size_bound, .. } => ProblemSpec::Capacitated {
                    variant: *variant,
                    capacities: vec![0; g.n()],
                    size_bound: *size_bound,
                },
                ProblemSpec::CapacitatedMso2 { formula, size_bound, .. } => ProblemSpec::CapacitatedMso2 {
                    formula: formula.clone(),
                    capacities: vec![0; g.n()],
                    size_bound: *size_bound,
                },
                other => other.clone(),
            };
            encode(&spec, g).unwrap().instance.formula.body.size()
        };
        let first = size(&graphs[0]);
        assert!(graphs.iter().all(|g| size(g) == first), "{spec:?}");
    }
}

#[test]
fn ecp_reduction_small_cases() {
    for (t, items) in [(2, vec![1, 1, 2]), (2, vec![1, 3]), (3, vec![1, 1, 1]), (2, vec![2, 1])] {
        let inst = gen_ecp_hardness(t, &items).unwrap();
        if let Some(b) = inst.bin_size {
            assert_eq!(inst.graph.n(), 3 * t * b);
        }
        let verdict = direct::equitable_partition(&inst.graph, t, PartProperty::Connected).unwrap();
        assert_eq!(verdict, unary_bin_packing(t, &items), "t={t} items={items:?}");
    }
}
