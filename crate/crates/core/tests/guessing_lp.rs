use copylemma::catalog::{catalog_file, catalog_graph};
use copylemma::certificate::{parse_certificate, verify, verify_weak_duality, TokenMap};
use copylemma::copy::CopyPlan;
use copylemma::entropy::{
    elemental_inequalities, mutual_info_expr, Constraint, LinearExpression, Relation, Tag, VarSet,
};
use copylemma::guessing::{
    brute_force_guessing_number, clique_cover_number, combinatorial_bounds, fractional_clique_cover_number,
    graph_universe, guessing_upper_bound, GuessProblem, SightGraph, DEFAULT_GUARD,
};
use copylemma::lp::{assemble, check_duals, dual_to_certificate, export_lp, solve, Sense};
use copylemma::perm::{closure, Permutation};
use copylemma::rational::{int, rat};
use copylemma::Rational;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn shannon(graph: &SightGraph) -> Rational {
    guessing_upper_bound(&GuessProblem::plain("g", graph.clone()).unwrap()).unwrap()
}

fn random_graph(rng: &mut StdRng, n: usize, directed: bool) -> SightGraph {
    let mut und = Vec::new();
    let mut dir = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match rng.gen_range(0..if directed { 4 } else { 2 }) {
                0 => {}
                1 => und.push((u, v)),
                2 => dir.push((u, v)),
                _ => dir.push((v, u)),
            }
        }
    }
    SightGraph::new(n, und, dir).unwrap()
}

#[test]
fn r_shannon_bound_with_symmetry() {
    let r = catalog_graph("R").unwrap();
    assert_eq!(r.group.order(), 12);
    let value = guessing_upper_bound(&r).unwrap();
    assert_eq!(value, rat(27, 4));
    let bounds = combinatorial_bounds(&r.graph).unwrap();
    assert!(bounds.lower <= value);
    assert!(value <= int(bounds.upper_alpha as i64));
}

#[test]
fn catalog_graphs_sit_between_combinatorial_bounds() {
    for name in ["K2", "K3", "C5"] {
        let p = catalog_graph(name).unwrap();
        let value = guessing_upper_bound(&p).unwrap();
        let b = combinatorial_bounds(&p.graph).unwrap();
        assert_eq!(value, b.lower, "{name}");
        assert!(value <= int(b.upper_alpha as i64), "{name}");
    }
}

#[test]
fn small_undirected_graphs_meet_the_clique_cover_bound() {
    let mut rng = StdRng::seed_from_u64(11);
    for trial in 0..60 {
        let n = rng.gen_range(2..=6);
        let g = random_graph(&mut rng, n, false);
        let cpf = fractional_clique_cover_number(&g).unwrap();
        assert_eq!(shannon(&g), int(n as i64) - cpf, "trial {trial}: {g:?}");
    }
}

#[test]
fn relabeling_leaves_the_bound_unchanged() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..12 {
        let n = rng.gen_range(3..=5);
        let g = random_graph(&mut rng, n, true);
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        let p = Permutation::from_images(images).unwrap();
        assert_eq!(shannon(&g), shannon(&g.relabeled(&p).unwrap()), "{g:?}");
    }
}

#[test]
fn symmetry_reduction_is_exact_on_c5() {
    let c5 = catalog_graph("C5").unwrap();
    assert_eq!(c5.group.order(), 10);
    let with = guessing_upper_bound(&c5).unwrap();
    assert_eq!(with, guessing_upper_bound(&c5.without_symmetry()).unwrap());
    assert_eq!(with, rat(5, 2));
}

#[test]
fn brute_force_never_beats_the_lp() {
    let expected = [("K2", 2), ("K3", 4)];
    for (name, wins) in expected {
        let p = catalog_graph(name).unwrap();
        let lp = guessing_upper_bound(&p).unwrap();
        let bf = brute_force_guessing_number(&p.graph, 2, DEFAULT_GUARD).unwrap();
        assert_eq!(bf.max_winning, wins, "{name}");
        assert!(bf.gn_equals(&lp), "{name}");
    }
    let c5 = SightGraph::cycle(5).unwrap();
    let bf = brute_force_guessing_number(&c5, 2, DEFAULT_GUARD).unwrap();
    assert!(bf.gn_at_most(&rat(5, 2)));
    let acyclic = SightGraph::new(3, [], [(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(acyclic.is_acyclic());
    let bf = brute_force_guessing_number(&acyclic, 2, DEFAULT_GUARD).unwrap();
    assert_eq!(bf.max_winning, 1);
    assert!(bf.gn_at_most(&shannon(&acyclic)));
}

#[test]
fn blow_up_of_c5() {
    let c5 = SightGraph::cycle(5).unwrap();
    let doubled = c5.blow_up(2).unwrap();
    assert_eq!(doubled.vertex_count(), 10);
    assert_eq!(clique_cover_number(&c5).unwrap(), 3);
    assert_eq!(clique_cover_number(&doubled).unwrap(), 5);
    assert_eq!(fractional_clique_cover_number(&doubled).unwrap(), int(5));
}

#[test]
fn dual_certificates_round_trip() {
    for name in ["K3", "C5"] {
        let problem = catalog_graph(name).unwrap();
        let model = problem.model().unwrap();
        let solution = solve(&model).unwrap();
        assert_eq!(check_duals(&model, &solution.duals).unwrap(), solution.value, "{name}");
        let cert = dual_to_certificate(&model, &solution).unwrap();
        assert_eq!(
            verify_weak_duality(&cert, model.objective(), model.sense()).unwrap(),
            solution.value
        );
        let tokens = TokenMap::for_universe(problem.universe()).unwrap();
        let text = cert.to_text(&tokens).unwrap();
        let rows = parse_certificate(&text, &tokens).unwrap();
        assert_eq!(verify(&rows, &problem).unwrap(), solution.value, "{name}");
    }
}

#[test]
fn rminus_structure() {
    let p = catalog_graph("Rminus").unwrap();
    assert_eq!(p.graph.edge_count(), 26);
    let sizes: Vec<usize> = p.scopes().iter().map(|s| s.len()).collect();
    assert_eq!(sizes, [11, 13, 13]);
    assert_eq!(p.plan.step_count(), 5);
    let rl = catalog_graph("RL").unwrap();
    let sizes: Vec<usize> = rl.scopes().iter().map(|s| s.len()).collect();
    assert_eq!(sizes, [14, 13]);
    assert_eq!(catalog_graph("R").unwrap().graph.edge_count(), 27);
    assert_eq!(catalog_graph("RS").unwrap().graph.edge_count(), 30);
}

#[test]
fn export_is_byte_deterministic() {
    for name in ["C5", "Rminus"] {
        let a = export_lp(&catalog_graph(name).unwrap().model().unwrap());
        let b = export_lp(&catalog_graph(name).unwrap().model().unwrap());
        assert_eq!(a, b, "{name}");
        assert!(a.starts_with("\\ entropy LP:"));
    }
    // Catalog text order does not leak into the model.
    let pf = catalog_file("C5").unwrap();
    let mut shuffled = pf.clone();
    shuffled.undirected.reverse();
    shuffled.symmetry.reverse();
    assert_eq!(
        export_lp(&pf.build().unwrap().model().unwrap()),
        export_lp(&shuffled.build().unwrap().model().unwrap())
    );
}

/// maximize `I(A;B) - 2I(A;B|C) - I(A;C|B) - I(B;C|A) - I(A;B|D) - I(C;D)`
/// with `H(ABCD) <= 1`, with and without one copy step.
fn four_variable_gap(recipes: &[Vec<String>]) -> Rational {
    let base = graph_universe(4).unwrap();
    let s = VarSet::singleton;
    let (a, b, c, d, e) = (s(0), s(1), s(2), s(3), VarSet::EMPTY);
    let mi = |i, j, k| mutual_info_expr(i, j, k).unwrap();
    let mut objective = mi(a, b, e);
    for (term, weight) in [(mi(a, b, c), 2), (mi(a, c, b), 1), (mi(b, c, a), 1), (mi(a, b, d), 1), (mi(c, d, e), 1)] {
        objective.add_scaled(&term, &int(-weight));
    }
    let plan = CopyPlan::build(&base, recipes).unwrap();
    let cap = Constraint::new(LinearExpression::entropy(base.base_set()), Relation::Le, int(1), Tag::Bound);
    let mut sets = vec![vec![cap], plan.constraints.clone()];
    for scope in plan.scopes() {
        sets.push(elemental_inequalities(scope).unwrap());
    }
    let model = assemble(&plan.universe, &sets, objective, Sense::Maximize).unwrap();
    solve(&model).unwrap().optimum().unwrap()
}

#[test]
fn one_copy_step_proves_a_non_shannon_inequality() {
    assert_eq!(four_variable_gap(&[]), rat(1, 4));
    let recipe = vec![vec!["Y3 be a copy of X3 over X1 X2".to_string()]];
    assert_eq!(four_variable_gap(&recipe), int(0));
}

#[test]
fn copy_blocks_never_loosen_a_guessing_bound() {
    // 4-cycle with a chord seen one way.
    let g = SightGraph::from_labels(4, &[(1, 2), (2, 3), (3, 4), (1, 4)], &[(1, 3)]).unwrap();
    let group = closure(4, &[]).unwrap();
    let plain = guessing_upper_bound(&GuessProblem::new("toy", g.clone(), group.clone(), &[]).unwrap()).unwrap();
    for recipes in [
        vec![vec!["Y1 be a copy of X1".to_string()]],
        vec![vec!["Y1 Y2 be a copy of X1 X2 over X3".to_string()]],
        vec![
            vec!["Y1 be a copy of X1 over X2 X4".to_string()],
            vec!["Y3 be a copy of X3".to_string(), "Z3 be a X3-copy of Y3".to_string()],
        ],
    ] {
        let p = GuessProblem::new("toy", g.clone(), group.clone(), &recipes).unwrap();
        let copied = guessing_upper_bound(&p).unwrap();
        assert!(copied <= plain, "{recipes:?}: {copied} > {plain}");
    }
}
