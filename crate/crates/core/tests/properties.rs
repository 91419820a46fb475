use crownful::format::{emit_graph, parse_graph};
use crownful::generators::{random_bipartite_outregular, random_dag, random_digraph, random_tournament};
use crownful::minors::{dag_minor_check, is_valid_model, shallow_minor_check};
use crownful::oracle::{directed_minor_oracle, min_outtree_oracle};
use crownful::par;
use crownful::quasiwide::{compute_scattered, greedy_scattered, is_scattered};
use crownful::solvers::{brute_force_solve, directed_steiner_outtree, DominationInstance, Solver};
use crownful::VertexSet;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips(n in 1usize..20, p in 0.0f64..0.6, seed in any::<u64>()) {
        let g = random_digraph(n, p, seed);
        let text = emit_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(emit_graph(&back), text);
        prop_assert_eq!(back.edge_count(), g.edge_count());
    }

    #[test]
    fn generators_are_seed_deterministic(n in 2usize..12, seed in any::<u64>()) {
        prop_assert_eq!(emit_graph(&random_tournament(n, seed)), emit_graph(&random_tournament(n, seed)));
        prop_assert_eq!(random_tournament(n, seed).edge_count(), n * (n - 1) / 2);
        let d = 1 + seed as usize % (n - 1);
        let b = random_bipartite_outregular(n, d, seed).unwrap();
        prop_assert!((0..n).all(|a| b.out_degree(a) == d));
        prop_assert_eq!(emit_graph(&b), emit_graph(&random_bipartite_outregular(n, d, seed).unwrap()));
    }

    #[test]
    fn dag_minor_check_matches_enumeration(n in 3usize..8, h in 1usize..4, seed in any::<u64>()) {
        let host = random_dag(n, 0.4, seed);
        let pattern = random_dag(h, 0.5, seed.rotate_left(7));
        let got = dag_minor_check(&pattern, &host).unwrap();
        prop_assert_eq!(got.is_some(), directed_minor_oracle(&pattern, &host, None).unwrap());
        if let Some(m) = got {
            prop_assert!(is_valid_model(&pattern, &host, &m));
        }
    }

    #[test]
    fn shallow_models_respect_depth(n in 3usize..8, r in 0usize..3, seed in any::<u64>()) {
        let host = random_digraph(n, 0.3, seed);
        let pattern = random_digraph(3, 0.3, seed ^ 0xff);
        let got = shallow_minor_check(&pattern, &host, r);
        prop_assert_eq!(got.is_some(), directed_minor_oracle(&pattern, &host, Some(r)).unwrap());
        if let Some(m) = got {
            prop_assert!(m.depth.is_some_and(|d| d <= r) && is_valid_model(&pattern, &host, &m));
        }
    }

    #[test]
    fn scattered_witnesses_verify(n in 2usize..14, d in 0usize..3, m in 1usize..4, seed in any::<u64>()) {
        let g = random_digraph(n, 0.2, seed);
        let all = VertexSet::range(n);
        if let Ok(Some(w)) = compute_scattered(&g, &all, d, m.min(n), 2) {
            prop_assert!(w.verify(&g));
            prop_assert!(w.deleted.len() <= 2 && w.set.len() == m.min(n));
        }
        prop_assert!(is_scattered(&g, &greedy_scattered(&g, &VertexSet::new(), d), d));
    }

    #[test]
    fn solvers_agree_with_brute_force(n in 4usize..11, k in 0usize..4, seed in any::<u64>()) {
        let g = random_digraph(n, 0.25, seed);
        let inst = DominationInstance::new(g, k);
        for solver in Solver::ALL {
            let got = solver.run(&inst, 3).unwrap();
            let want = brute_force_solve(&inst, solver.variant()).unwrap();
            prop_assert_eq!(got.feasible, want.feasible, "{}", solver.name());
            prop_assert!(got.certifies(&inst, solver.variant()));
        }
    }

    #[test]
    fn steiner_matches_oracle(n in 2usize..9, t in 1usize..4, seed in any::<u64>()) {
        let g = random_digraph(n, 0.3, seed);
        let terminals: VertexSet = (0..t.min(n)).map(|i| (i * 3 + seed as usize) % n).collect();
        let tree = directed_steiner_outtree(&g, &terminals, None, &VertexSet::new());
        prop_assert_eq!(tree.as_ref().map(|x| x.size()), min_outtree_oracle(&g, &terminals, &VertexSet::new()));
        if let Some(tree) = tree {
            prop_assert!(tree.verify(&g, &terminals));
        }
    }

    #[test]
    fn sequential_mode_gives_same_results(n in 4usize..10, seed in any::<u64>()) {
        let g = random_digraph(n, 0.3, seed);
        let inst = DominationInstance::new(g, 2);
        let par_out = Solver::Ds.run(&inst, 3).unwrap();
        let seq_out = par::sequential(|| Solver::Ds.run(&inst, 3).unwrap());
        prop_assert_eq!(par_out, seq_out);
        prop_assert_eq!(par::map_range(50, |i| i * i), par::sequential(|| par::map_range(50, |i| i * i)));
    }
}
