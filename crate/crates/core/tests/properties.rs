use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;
use vicheck_core::constraints::LocalConstraintTable;
use vicheck_core::corpus::{random_formula, random_graph, random_instance, FormulaParams, InstanceParams};
use vicheck_core::engine::model_check;
use vicheck_core::formulas::{parse, print, Var};
use vicheck_core::graphs::{canonical_type, components, minimum_vi_set, vertex_integrity, ColoredGraph};
use vicheck_core::ilp::{feasible, LinearSystem};
use vicheck_core::instance::MsoglInstance;
use vicheck_core::oracle::{self, brute_force_msogl, brute_force_treedepth, brute_force_vi};

fn graph(seed: u64, max_n: usize) -> ColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..0.8);
    let colors = rng.gen_range(0..=2);
    random_graph(&mut rng, n, p, colors)
}

fn permutation(seed: u64, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>(), mso2 in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let free = vec![Var::vertex_set("X1"), Var::edge_set("Y1")];
        let params = FormulaParams {
            free: free.clone(),
            max_quantifiers: 3,
            colors: 2,
            globals: 2,
            max_depth: 6,
            mso2,
        };
        let f = random_formula(&mut rng, &params);
        let text = print(&f.body);
        let back = parse(&text, &free).unwrap();
        prop_assert_eq!(back.body, f.body, "{}", text);
    }

    #[test]
    fn canonical_types_ignore_vertex_names(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let g = graph(seed, 9);
        let perm = permutation(perm_seed, g.n());
        let h = g.relabel(&perm);
        let vi = minimum_vi_set(&g);
        let s_h: Vec<usize> = vi.set.iter().map(|&v| perm[v]).collect();
        for comp in components(&g, &vi.set) {
            let image: Vec<usize> = comp.iter().map(|&v| perm[v]).collect();
            let a = canonical_type(&g, &vi.set, &comp).unwrap();
            let b = canonical_type(&h, &s_h, &image).unwrap();
            prop_assert_eq!(a.code, b.code);
        }
    }

    #[test]
    fn closed_formulas_ignore_vertex_names(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let g = graph(seed, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let f = random_formula(&mut rng, &FormulaParams::closed(3, g.num_colors()));
        let h = g.relabel(&permutation(perm_seed, g.n()));
        prop_assert_eq!(oracle::evaluate(&g, &f.body).unwrap(), oracle::evaluate(&h, &f.body).unwrap());
    }

    #[test]
    fn simplification_preserves_truth(seed in any::<u64>()) {
        let g = graph(seed, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf01d);
        let f = random_formula(&mut rng, &FormulaParams::closed(3, g.num_colors()));
        prop_assert_eq!(oracle::evaluate(&g, &f.body).unwrap(), oracle::evaluate(&g, &f.body.simplify()).unwrap());
    }

    #[test]
    fn engine_verdict_ignores_vertex_names(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, inst) = random_instance(&mut rng, &InstanceParams { max_n: 5, ..InstanceParams::default() });
        let plain = MsoglInstance::new(
            inst.formula.clone(),
            inst.globals.clone(),
            LocalConstraintTable::unconstrained(inst.formula.arity(), g.n()),
        )
        .unwrap();
        let h = g.relabel(&permutation(perm_seed, g.n()));
        let here = model_check(&g, &plain).unwrap().is_some();
        prop_assert_eq!(here, model_check(&h, &plain).unwrap().is_some());
        prop_assert_eq!(here, brute_force_msogl(&g, &plain).unwrap().satisfiable);
    }

    #[test]
    fn treedepth_at_most_vertex_integrity(seed in any::<u64>()) {
        let g = graph(seed, 8);
        let vi = brute_force_vi(&g).unwrap();
        prop_assert_eq!(vertex_integrity(&g), vi);
        prop_assert!(brute_force_treedepth(&g).unwrap() <= vi);
        let found = minimum_vi_set(&g);
        prop_assert_eq!(found.k, vi);
        let largest = components(&g, &found.set).iter().map(Vec::len).max().unwrap_or(0);
        prop_assert!(found.set.len() + largest <= vi);
    }

    #[test]
    fn ilp_solutions_satisfy_the_system(
        bounds in prop::collection::vec((-6i64..6, 0i64..8), 1..5),
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 4), -10i64..15, 0u8..3), 0..5),
    ) {
        let dim = bounds.len();
        let mut sys = LinearSystem::new(dim);
        for (j, &(lo, width)) in bounds.iter().enumerate() {
            sys.set_bounds(j, lo, lo + width);
        }
        for (coeffs, bound, kind) in rows {
            let coeffs = coeffs[..dim].to_vec();
            match kind {
                0 => sys.add_eq(coeffs, bound),
                1 => sys.add_ge(coeffs, bound),
                _ => sys.add_le(coeffs, bound),
            }
        }
        let mut any = false;
        let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        'outer: loop {
            if sys.satisfied(&x) {
                any = true;
                break;
            }
            for j in 0..dim {
                if x[j] < bounds[j].0 + bounds[j].1 {
                    x[j] += 1;
                    continue 'outer;
                }
                x[j] = bounds[j].0;
            }
            break;
        }
        match feasible(&sys).unwrap() {
            Some(x) => prop_assert!(any && sys.satisfied(&x)),
            None => prop_assert!(!any),
        }
    }
}
