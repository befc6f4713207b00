use copylemma::catalog::{catalog_file, catalog_structure};
use copylemma::lp::{solve, Status};
use copylemma::perm::{closure, Permutation};
use copylemma::rational::{int, rat};
use copylemma::secret_sharing::{make_access_structure, ratio_lower_bound, RatioProblem};
use copylemma::Error;

fn plain(n: usize, minsets: &[Vec<usize>]) -> RatioProblem {
    let s = make_access_structure(n, minsets).unwrap();
    RatioProblem::new("toy", s, closure(n + 1, &[]).unwrap(), &[]).unwrap()
}

fn group(n: usize, cycles: &[&str]) -> copylemma::perm::PermutationGroup {
    let gens: Vec<Permutation> = cycles.iter().map(|c| Permutation::parse_cycles(c, n + 1, 0).unwrap()).collect();
    closure(n + 1, &gens).unwrap()
}

#[test]
fn threshold_and_path() {
    let threshold = plain(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]);
    assert_eq!(ratio_lower_bound(&threshold).unwrap(), int(1));
    let path = plain(4, &[vec![1, 2], vec![2, 3], vec![3, 4]]);
    assert_eq!(ratio_lower_bound(&path).unwrap(), rat(3, 2));
}

#[test]
fn symmetry_does_not_change_the_path_bound() {
    let s = make_access_structure(4, &[vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
    let with = RatioProblem::new("path", s, group(4, &["(14)(23)"]), &[]).unwrap();
    assert_eq!(with.group.order(), 2);
    assert_eq!(ratio_lower_bound(&with).unwrap(), rat(3, 2));
}

#[test]
fn a_wrong_generator_is_diagnosed() {
    let s = make_access_structure(4, &[vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
    assert!(matches!(
        RatioProblem::new("path", s.clone(), group(4, &["(12)"]), &[]),
        Err(Error::NotInvariant { .. })
    ));
    let forced = RatioProblem::new_unchecked("path", s, group(4, &["(12)"]), &[]).unwrap();
    let solution = solve(&forced.model().unwrap()).unwrap();
    match &solution.status {
        Status::Infeasible(families) => assert!(families.contains(&"symmetry"), "{families:?}"),
        other => panic!("expected infeasible, got {other:?}"),
    }
    let err = solution.optimum().unwrap_err();
    assert!(err.to_string().contains("symmetry"), "{err}");
}

#[test]
fn shannon_bounds_of_catalog_structures() {
    for name in ["V", "A", "F", "Q"] {
        let p = catalog_structure(name).unwrap().without_copies();
        let with = ratio_lower_bound(&p).unwrap();
        assert_eq!(with, int(1), "{name}");
        let pf = catalog_file(name).unwrap();
        if let Some(prior) = pf.reference("prior") {
            assert!(with < *prior, "{name}");
        }
    }
}

#[test]
fn copy_blocks_never_loosen_a_ratio_bound() {
    // Three participants plus the secret.
    let minsets = [vec![1, 2], vec![2, 3]];
    let base = ratio_lower_bound(&plain(3, &minsets)).unwrap();
    for recipes in [
        vec![vec!["S1' be a copy of S1".to_string()]],
        vec![vec!["S0' S3' be a copy of S0 S3 over S2".to_string()]],
        vec![vec!["S2' be a copy of S2".to_string()], vec!["S0' be a S1-copy of S0".to_string()]],
    ] {
        let s = make_access_structure(3, &minsets).unwrap();
        let p = RatioProblem::new("toy", s, closure(4, &[]).unwrap(), &recipes).unwrap();
        let copied = ratio_lower_bound(&p).unwrap();
        assert!(copied >= base, "{recipes:?}: {copied} < {base}");
    }
}
