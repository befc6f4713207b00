//! Guessing games on sight graphs and their entropy upper bounds.

mod brute;
mod cliques;
mod graph;

pub use brute::{brute_force_guessing_number, strategy_count, BruteForce, DEFAULT_GUARD};
pub use cliques::{
    all_cliques, alpha, clique_cover_number, combinatorial_bounds, fractional_clique_cover_number,
    CombinatorialBounds, MAX_SUBSET_VERTICES,
};
pub use graph::SightGraph;

use num_traits::Zero;

use crate::copy::CopyPlan;
use crate::entropy::{
    elemental_inequalities, Constraint, LinearExpression, Relation, Tag, VarSet, VariableUniverse,
};
use crate::error::{Error, Result};
use crate::lp::{assemble, solve_with, LPModel, Sense, SolveOptions};
use crate::perm::{symmetry_equalities, validate_group, PermutationGroup};
use crate::rational::{int, Rational};

/// Per vertex: `h_v <= 1`, then per vertex `h_{N(v)+v} - h_{N(v)} = 0`.
pub fn guessing_constraints(graph: &SightGraph) -> Vec<Constraint> {
    let n = graph.vertex_count();
    let mut out = Vec::with_capacity(2 * n);
    for v in 0..n {
        out.push(Constraint::new(
            LinearExpression::entropy(VarSet::singleton(v)),
            Relation::Le,
            int(1),
            Tag::Bound,
        ));
    }
    for v in 0..n {
        let seen = graph.in_neighbors(v);
        let mut expr = LinearExpression::entropy(seen.with(v));
        expr.add_entropy(seen, &int(-1));
        out.push(Constraint::new(expr, Relation::Eq, Rational::zero(), Tag::Problem));
    }
    out
}

/// Universe `X1..Xn` for a graph on `n` vertices.
pub fn graph_universe(n: usize) -> Result<VariableUniverse> {
    VariableUniverse::new((1..=n).map(|i| format!("X{i}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessProblem {
    pub name: String,
    pub graph: SightGraph,
    pub group: PermutationGroup,
    pub plan: CopyPlan,
}

impl GuessProblem {
    /// Checks the group and applies the copy recipes over `X1..Xn`.
    pub fn new(
        name: impl Into<String>,
        graph: SightGraph,
        group: PermutationGroup,
        recipes: &[Vec<String>],
    ) -> Result<Self> {
        validate_group(&graph, &group)?;
        let base = graph_universe(graph.vertex_count())?;
        if group.degree() > base.len() {
            return Err(Error::InvalidPermutation(format!(
                "group of degree {} on {} vertices",
                group.degree(),
                base.len()
            )));
        }
        let plan = CopyPlan::build(&base, recipes)?;
        Ok(GuessProblem { name: name.into(), graph, group, plan })
    }

    /// Shannon-only problem with no symmetry.
    pub fn plain(name: impl Into<String>, graph: SightGraph) -> Result<Self> {
        let degree = graph.vertex_count();
        GuessProblem::new(name, graph, PermutationGroup::trivial(degree), &[])
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.plan.universe
    }

    pub fn scopes(&self) -> Vec<VarSet> {
        self.plan.scopes()
    }

    pub fn without_symmetry(&self) -> GuessProblem {
        GuessProblem { group: PermutationGroup::trivial(self.group.degree()), ..self.clone() }
    }

    pub fn without_copies(&self) -> GuessProblem {
        let base = graph_universe(self.graph.vertex_count()).expect("vertex count already checked");
        GuessProblem { plan: CopyPlan::empty(&base), ..self.clone() }
    }

    /// maximize `h_{all base}` over the problem rows, symmetry, copy
    /// equalities and the elementals of each scope.
    pub fn model(&self) -> Result<LPModel> {
        let universe = &self.plan.universe;
        let mut sets = vec![guessing_constraints(&self.graph)];
        if self.group.order() > 1 {
            sets.push(symmetry_equalities(&self.group, universe)?);
        }
        sets.push(self.plan.constraints.clone());
        for scope in self.plan.scopes() {
            sets.push(elemental_inequalities(scope)?);
        }
        let objective = LinearExpression::entropy(universe.base_set());
        assemble(universe, &sets, objective, Sense::Maximize)
    }
}

pub fn guessing_upper_bound(problem: &GuessProblem) -> Result<Rational> {
    guessing_upper_bound_with(problem, SolveOptions::default())
}

pub fn guessing_upper_bound_with(problem: &GuessProblem, options: SolveOptions) -> Result<Rational> {
    solve_with(&problem.model()?, options)?.optimum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{closure, Permutation};

    #[test]
    fn k2_rows() {
        let rows = guessing_constraints(&SightGraph::complete(2).unwrap());
        let h = |b: u32| LinearExpression::entropy(VarSet(b));
        assert_eq!(rows[0], Constraint::new(h(1), Relation::Le, int(1), Tag::Bound));
        assert_eq!(rows[1], Constraint::new(h(2), Relation::Le, int(1), Tag::Bound));
        assert_eq!(rows[2].expr, h(3) - &h(2));
        assert_eq!(rows[3].expr, h(3) - &h(1));
    }

    #[test]
    fn isolated_vertex_has_zero_entropy() {
        let rows = guessing_constraints(&SightGraph::new(1, [], []).unwrap());
        assert_eq!(rows[1].expr, LinearExpression::entropy(VarSet(1)));
        assert_eq!(rows[1].relation, Relation::Eq);
    }

    #[test]
    fn c5_bound_with_and_without_symmetry() {
        let c5 = SightGraph::cycle(5).unwrap();
        let plain = GuessProblem::plain("C5", c5.clone()).unwrap();
        let m = plain.model().unwrap();
        assert_eq!(m.columns().len(), 31);
        assert_eq!(m.rows().len(), 95);
        assert_eq!(guessing_upper_bound(&plain).unwrap(), crate::rational::rat(5, 2));
        let g = closure(
            5,
            &[
                Permutation::parse_cycles("(12345)", 5, 1).unwrap(),
                Permutation::parse_cycles("(25)(34)", 5, 1).unwrap(),
            ],
        )
        .unwrap();
        let sym = GuessProblem::new("C5", c5, g, &[]).unwrap();
        assert_eq!(guessing_upper_bound(&sym).unwrap(), crate::rational::rat(5, 2));
    }

    #[test]
    fn non_automorphism_is_rejected() {
        let g = closure(5, &[Permutation::parse_cycles("(12)", 5, 1).unwrap()]).unwrap();
        assert!(GuessProblem::new("C5", SightGraph::cycle(5).unwrap(), g, &[]).is_err());
    }
}
