use copylemma::catalog::catalog_graph;
use copylemma::certificate::{parse_certificate, verify, Classifier, RowKind, TokenMap};
use copylemma::entropy::Relation;
use copylemma::rational::rat;
use copylemma::Rational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const CERT: &str = include_str!("data/rminus.cert");

#[test]
fn rminus_certificate_proves_the_bound() {
    let problem = catalog_graph("Rminus").unwrap();
    let tokens = TokenMap::for_universe(problem.universe()).unwrap();
    let rows = parse_certificate(CERT, &tokens).unwrap();
    assert_eq!(rows.len(), 1920);
    let classifier = Classifier::new(&problem);
    let mut counts = std::collections::BTreeMap::new();
    for (k, row) in rows.iter().enumerate() {
        let kind = classifier.classify(row).unwrap_or_else(|e| panic!("row {}: {e}", k + 1));
        let family = match kind {
            RowKind::Elemental { .. } => "elemental",
            RowKind::Dependence { .. } => "dependence",
            RowKind::CopyMatch { .. } => "copy-match",
            RowKind::CopyIndep { .. } => "copy-indep",
            RowKind::Symmetry => "symmetry",
            RowKind::VertexBound { .. } => "bound",
        };
        *counts.entry(family).or_insert(0usize) += 1;
    }
    assert_eq!(counts["bound"], 3);
    assert_eq!(verify(&rows, &problem).unwrap(), rat(1847, 276));
    let le_sum: Rational = rows
        .iter()
        .filter(|r| r.relation == Relation::Le)
        .map(|r| r.multiplier.clone())
        .sum();
    assert_eq!(le_sum, rat(191, 138) + rat(743, 276) + rat(361, 138));
    assert_eq!(le_sum, rat(1847, 276));
}

#[test]
fn row_order_does_not_matter() {
    let problem = catalog_graph("Rminus").unwrap();
    let tokens = TokenMap::for_universe(problem.universe()).unwrap();
    let mut rows = parse_certificate(CERT, &tokens).unwrap();
    rows.reverse();
    let mut rng = StdRng::seed_from_u64(7);
    for i in 0..rows.len() {
        let j = rng.gen_range(0..rows.len());
        rows.swap(i, j);
    }
    assert_eq!(verify(&rows, &problem).unwrap(), rat(1847, 276));
}

#[test]
fn single_row_mutations_are_rejected() {
    let problem = catalog_graph("Rminus").unwrap();
    let tokens = TokenMap::for_universe(problem.universe()).unwrap();
    let rows = parse_certificate(CERT, &tokens).unwrap();
    let mut rng = StdRng::seed_from_u64(2024);
    for trial in 0..120 {
        let mut mutated = rows.clone();
        let k = rng.gen_range(0..mutated.len());
        let row = &mut mutated[k];
        if trial % 2 == 0 {
            let delta = rat(rng.gen_range(1..50), rng.gen_range(1..50));
            row.multiplier += if rng.gen_bool(0.5) { delta } else { -delta };
        } else {
            let terms = row.expr.terms().to_vec();
            let t = rng.gen_range(0..terms.len());
            let (col, coeff) = &terms[t];
            row.expr.add_term(*col, &(-coeff.clone() * Rational::from_integer(2.into())));
            assert!(!row.expr.coefficient(*col).is_zero());
        }
        assert!(verify(&mutated, &problem).is_err(), "mutation {trial} on row {} accepted", k + 1);
    }
}
