//! Access structures and the information-ratio lower bound.
//!
//! Variable 0 is the secret `S0`, variables `1..=n` are the shares. Sets of
//! participants are bitmasks over the same indices, so bit 0 is never set in
//! a coalition.

use num_traits::Zero;

use crate::copy::CopyPlan;
use crate::entropy::{
    elemental_inequalities, Column, Constraint, LinearExpression, Relation, Tag, VarSet,
    VariableUniverse,
};
use crate::error::{Error, Result};
use crate::lp::{assemble, solve_with, LPModel, Sense, SolveOptions};
use crate::perm::{symmetry_equalities, validate_group, Permutation, PermutationGroup, Symmetric};
use crate::rational::{int, Rational};

/// A monotone family of coalitions given by its minimal members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AccessStructure {
    n: usize,
    /// Sorted by bitmask; an antichain.
    minimal_sets: Vec<VarSet>,
}

impl AccessStructure {
    /// Validates and stores `minimal_sets` over participants `1..=n`. An empty
    /// family is rejected unless `allow_trivial` is set.
    pub fn new(n: usize, minimal_sets: &[Vec<usize>], allow_trivial: bool) -> Result<Self> {
        if n == 0 || n >= crate::entropy::MAX_VARIABLES {
            return Err(Error::InvalidStructure(format!("participant count {n} out of range")));
        }
        if minimal_sets.is_empty() && !allow_trivial {
            return Err(Error::InvalidStructure("no authorized coalitions".into()));
        }
        let mut sets = Vec::with_capacity(minimal_sets.len());
        for members in minimal_sets {
            if members.is_empty() {
                return Err(Error::InvalidStructure("empty minimal set".into()));
            }
            let mut set = VarSet::EMPTY;
            for &p in members {
                if p == 0 || p > n {
                    return Err(Error::InvalidStructure(format!(
                        "participant {p} outside 1..{n}"
                    )));
                }
                set = set.with(p);
            }
            sets.push(set);
        }
        sets.sort();
        sets.dedup();
        for &a in &sets {
            for &b in &sets {
                if a != b && a.is_subset(b) {
                    return Err(Error::InvalidStructure(format!(
                        "minimal set {} contains {}",
                        Self::label(b),
                        Self::label(a)
                    )));
                }
            }
        }
        Ok(AccessStructure { n, minimal_sets: sets })
    }

    pub fn participants(&self) -> usize {
        self.n
    }

    pub fn minimal_sets(&self) -> &[VarSet] {
        &self.minimal_sets
    }

    /// Minimal sets as participant lists.
    pub fn minimal_lists(&self) -> Vec<Vec<usize>> {
        self.minimal_sets.iter().map(|s| s.iter().collect()).collect()
    }

    pub fn is_authorized(&self, coalition: VarSet) -> bool {
        self.minimal_sets.iter().any(|m| m.is_subset(coalition))
    }

    /// Every coalition: bits `1..=n`.
    pub fn participant_set(&self) -> VarSet {
        VarSet::prefix(self.n + 1).without(0)
    }

    /// Compact label such as `1247`, or space separated past 9.
    pub fn label(set: VarSet) -> String {
        let parts: Vec<String> = set.iter().map(|i| i.to_string()).collect();
        if set.iter().all(|i| i < 10) {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Universe `S0..Sn`.
    pub fn universe(&self) -> VariableUniverse {
        VariableUniverse::new((0..=self.n).map(|i| format!("S{i}")))
            .expect("participant count already bounded")
    }
}

pub fn make_access_structure(n: usize, minimal_sets: &[Vec<usize>]) -> Result<AccessStructure> {
    AccessStructure::new(n, minimal_sets, false)
}

impl Symmetric for AccessStructure {
    fn describe(&self) -> String {
        let sets: Vec<String> = self.minimal_sets.iter().map(|s| Self::label(*s)).collect();
        format!("access structure {{{}}}", sets.join(", "))
    }

    fn label_offset(&self) -> usize {
        0
    }

    fn is_invariant_under(&self, p: &Permutation) -> Result<bool> {
        if p.degree() > self.n + 1 || (p.degree() > 0 && p.image(0) != 0) {
            return Err(Error::InvalidPermutation(format!(
                "{} must act on participants 1..{} and fix the secret",
                p.to_cycle_string(0),
                self.n
            )));
        }
        let mut image: Vec<VarSet> = self.minimal_sets.iter().map(|s| p.apply_set(*s)).collect();
        image.sort();
        Ok(image == self.minimal_sets)
    }
}

/// Per coalition `J`: `h_{J+0} - h_J = 0` when authorized, otherwise
/// `h_{J+0} - h_J - h_0 = 0`; then `h_0 = 1`.
pub fn ss_constraints(structure: &AccessStructure) -> Vec<Constraint> {
    let secret = VarSet::singleton(0);
    let minus = int(-1);
    let mut out = Vec::with_capacity(1 << structure.n);
    for bits in 1u32..(1 << structure.n) {
        let coalition = VarSet(bits << 1);
        let mut expr = LinearExpression::entropy(coalition.with(0));
        expr.add_entropy(coalition, &minus);
        if !structure.is_authorized(coalition) {
            expr.add_entropy(secret, &minus);
        }
        out.push(Constraint::new(expr, Relation::Eq, Rational::zero(), Tag::Problem));
    }
    out.push(Constraint::new(
        LinearExpression::entropy(secret),
        Relation::Eq,
        int(1),
        Tag::Problem,
    ));
    out
}

/// The epigraph variable bounding every share entropy.
pub const RATIO_COLUMN: Column = Column::Aux(0);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioProblem {
    pub name: String,
    pub structure: AccessStructure,
    pub group: PermutationGroup,
    pub plan: CopyPlan,
}

impl RatioProblem {
    /// Checks the group against the structure and applies the recipes.
    pub fn new(
        name: impl Into<String>,
        structure: AccessStructure,
        group: PermutationGroup,
        recipes: &[Vec<String>],
    ) -> Result<Self> {
        validate_group(&structure, &group)?;
        Self::new_unchecked(name, structure, group, recipes)
    }

    /// As `new` but without the invariance check, so a wrong group reaches
    /// the LP.
    pub fn new_unchecked(
        name: impl Into<String>,
        structure: AccessStructure,
        group: PermutationGroup,
        recipes: &[Vec<String>],
    ) -> Result<Self> {
        let base = structure.universe();
        if group.degree() > base.len() {
            return Err(Error::InvalidPermutation(format!(
                "group of degree {} exceeds {} variables",
                group.degree(),
                base.len()
            )));
        }
        let plan = CopyPlan::build(&base, recipes)?;
        Ok(RatioProblem { name: name.into(), structure, group, plan })
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.plan.universe
    }

    pub fn without_symmetry(&self) -> RatioProblem {
        RatioProblem { group: PermutationGroup::trivial(self.group.degree()), ..self.clone() }
    }

    pub fn without_copies(&self) -> RatioProblem {
        let base = self.structure.universe();
        RatioProblem { plan: CopyPlan::empty(&base), ..self.clone() }
    }

    /// minimize x s.t. x >= h_i, the coalition equalities, symmetry, copy
    /// equalities and the elementals of every scope.
    pub fn model(&self) -> Result<LPModel> {
        let universe = &self.plan.universe;
        let x = LinearExpression::from_terms([(RATIO_COLUMN, int(1))]);
        let epigraph: Vec<Constraint> = (1..=self.structure.n)
            .map(|i| {
                let expr = x.clone() - &LinearExpression::entropy(VarSet::singleton(i));
                Constraint::new(expr, Relation::Ge, Rational::zero(), Tag::Bound)
            })
            .collect();
        let mut sets = vec![epigraph, ss_constraints(&self.structure)];
        if self.group.order() > 1 {
            sets.push(symmetry_equalities(&self.group, universe)?);
        }
        sets.push(self.plan.constraints.clone());
        for scope in self.plan.scopes() {
            sets.push(elemental_inequalities(scope)?);
        }
        assemble(universe, &sets, x, Sense::Minimize)
    }
}

/// Exact optimum of the ratio LP; an empty LP is an error naming the
/// constraint families that clash.
pub fn ratio_lower_bound(problem: &RatioProblem) -> Result<Rational> {
    ratio_lower_bound_with(problem, SolveOptions::default())
}

pub fn ratio_lower_bound_with(problem: &RatioProblem, options: SolveOptions) -> Result<Rational> {
    let model = problem.model()?;
    solve_with(&model, options)?.optimum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::closure;
    use crate::rational::rat;

    fn threshold_2_of_3() -> AccessStructure {
        make_access_structure(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
    }

    fn path4() -> AccessStructure {
        make_access_structure(4, &[vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap()
    }

    #[test]
    fn rejects_non_antichains_and_bad_members() {
        assert!(make_access_structure(3, &[vec![1, 2], vec![2, 3]]).is_ok());
        assert!(make_access_structure(3, &[vec![1, 2], vec![1, 2, 3]]).is_err());
        assert!(make_access_structure(3, &[vec![4]]).is_err());
        assert!(make_access_structure(3, &[vec![0, 1]]).is_err());
        assert!(make_access_structure(3, &[]).is_err());
        assert!(AccessStructure::new(3, &[], true).is_ok());
    }

    #[test]
    fn authorization_is_monotone() {
        let s = make_access_structure(
            7,
            &[
                vec![1, 2, 3],
                vec![1, 4, 5],
                vec![1, 6, 7],
                vec![2, 4, 6],
                vec![2, 5, 7],
                vec![3, 4, 7],
                vec![3, 5, 6],
                vec![1, 2, 4, 7],
            ],
        )
        .unwrap();
        let all = s.participant_set();
        for j in all.subsets() {
            if s.is_authorized(j) {
                for k in all.subsets().filter(|k| j.is_subset(*k)) {
                    assert!(s.is_authorized(k));
                }
            }
        }
    }

    #[test]
    fn coalition_rows() {
        let s = make_access_structure(3, &[vec![1, 2], vec![2, 3]]).unwrap();
        let rows = ss_constraints(&s);
        assert_eq!(rows.len(), 8);
        let h = |b: u32| LinearExpression::entropy(VarSet(b));
        // J = {1,2}: authorized.
        assert!(rows.contains(&Constraint::new(
            h(0b0111) - &h(0b0110),
            Relation::Eq,
            int(0),
            Tag::Problem
        )));
        // J = {1,3}: forbidden.
        assert!(rows.contains(&Constraint::new(
            h(0b1011) - &h(0b1010) - &h(0b0001),
            Relation::Eq,
            int(0),
            Tag::Problem
        )));
        assert_eq!(rows.last().unwrap().rhs, int(1));
    }

    #[test]
    fn shannon_values_of_small_structures() {
        let p = RatioProblem::new("t23", threshold_2_of_3(), PermutationGroup::trivial(4), &[])
            .unwrap();
        assert_eq!(ratio_lower_bound(&p).unwrap(), int(1));
        let p = RatioProblem::new("path", path4(), PermutationGroup::trivial(5), &[]).unwrap();
        assert_eq!(ratio_lower_bound(&p).unwrap(), rat(3, 2));
    }

    #[test]
    fn valid_symmetry_keeps_the_optimum() {
        let g = closure(5, &[Permutation::parse_cycles("(14)(23)", 5, 0).unwrap()]).unwrap();
        let p = RatioProblem::new("path", path4(), g, &[]).unwrap();
        assert_eq!(ratio_lower_bound(&p).unwrap(), rat(3, 2));
    }

    #[test]
    fn wrong_symmetry_is_rejected_or_infeasible() {
        let g = closure(5, &[Permutation::parse_cycles("(12)", 5, 0).unwrap()]).unwrap();
        assert!(matches!(
            RatioProblem::new("path", path4(), g.clone(), &[]),
            Err(Error::NotInvariant { .. })
        ));
        let p = RatioProblem::new_unchecked("path", path4(), g, &[]).unwrap();
        match ratio_lower_bound(&p) {
            Err(Error::Infeasible { families }) => assert!(families.contains("symmetry")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
