//! Clique covers and independence on the undirected part of a graph.

use num_traits::Zero;

use super::SightGraph;
use crate::entropy::{Column, Constraint, LinearExpression, Relation, Tag, VarSet, VariableUniverse};
use crate::error::{Error, Result};
use crate::lp::{assemble, solve, Sense};
use crate::rational::{int, Rational};

/// Exhaustive subset tables are limited to this many vertices.
pub const MAX_SUBSET_VERTICES: usize = 20;

fn require_undirected(graph: &SightGraph) -> Result<()> {
    if !graph.is_undirected() {
        return Err(Error::InvalidGraph("clique covers need an undirected graph".into()));
    }
    if graph.vertex_count() > MAX_SUBSET_VERTICES {
        return Err(Error::InvalidGraph(format!(
            "{} vertices exceed the limit of {MAX_SUBSET_VERTICES}",
            graph.vertex_count()
        )));
    }
    Ok(())
}

/// Every nonempty clique, in increasing bitmask order.
pub fn all_cliques(graph: &SightGraph) -> Vec<VarSet> {
    let adj = graph.undirected_adjacency();
    let mut out = Vec::new();
    fn extend(adj: &[VarSet], current: VarSet, candidates: VarSet, out: &mut Vec<VarSet>) {
        for v in candidates.iter() {
            let next = current.with(v);
            out.push(next);
            let above = VarSet(candidates.bits() & !((2u32 << v) - 1));
            extend(adj, next, above.intersection(adj[v]), out);
        }
    }
    extend(&adj, VarSet::EMPTY, VarSet::prefix(graph.vertex_count()), &mut out);
    out.sort();
    out
}

/// Minimum total weight of cliques covering each vertex exactly once.
pub fn fractional_clique_cover_number(graph: &SightGraph) -> Result<Rational> {
    require_undirected(graph)?;
    let cliques = all_cliques(graph);
    let n = graph.vertex_count();
    let universe = VariableUniverse::new((1..=n).map(|i| format!("X{i}")))?;
    let w = |k: usize| Column::Aux(k as u32);
    let mut rows = Vec::new();
    for v in 0..n {
        let expr = LinearExpression::from_terms(
            cliques
                .iter()
                .enumerate()
                .filter(|(_, c)| c.contains(v))
                .map(|(k, _)| (w(k), int(1))),
        );
        rows.push(Constraint::new(expr, Relation::Eq, int(1), Tag::Problem));
    }
    for k in 0..cliques.len() {
        let expr = LinearExpression::from_terms([(w(k), int(1))]);
        rows.push(Constraint::new(expr, Relation::Ge, Rational::zero(), Tag::Bound));
    }
    let objective = LinearExpression::from_terms((0..cliques.len()).map(|k| (w(k), int(1))));
    let model = assemble(&universe, &[rows], objective, Sense::Minimize)?;
    solve(&model)?.optimum()
}

/// Minimum number of disjoint cliques partitioning the vertices.
pub fn clique_cover_number(graph: &SightGraph) -> Result<usize> {
    require_undirected(graph)?;
    let n = graph.vertex_count();
    let cliques = all_cliques(graph);
    let mut by_low: Vec<Vec<u32>> = vec![Vec::new(); n];
    for c in &cliques {
        by_low[c.bits().trailing_zeros() as usize].push(c.bits());
    }
    let total = 1usize << n;
    let mut best = vec![usize::MAX; total];
    best[0] = 0;
    for s in 1..total {
        let low = (s as u32).trailing_zeros() as usize;
        let mut b = usize::MAX;
        for &c in &by_low[low] {
            let c = c as usize;
            if c & s == c {
                b = b.min(best[s ^ c] + 1);
            }
        }
        best[s] = b;
    }
    Ok(best[total - 1])
}

/// Largest set with no edge of any kind between its members.
pub fn alpha(graph: &SightGraph) -> Result<usize> {
    let n = graph.vertex_count();
    if n > MAX_SUBSET_VERTICES {
        return Err(Error::InvalidGraph(format!(
            "{n} vertices exceed the limit of {MAX_SUBSET_VERTICES}"
        )));
    }
    let adj = graph.any_adjacency();
    let total = 1usize << n;
    let mut independent = vec![false; total];
    independent[0] = true;
    let mut best = 0;
    for s in 1..total {
        let low = (s as u32).trailing_zeros() as usize;
        let rest = s & (s - 1);
        independent[s] = independent[rest] && (adj[low].bits() as usize & rest) == 0;
        if independent[s] {
            best = best.max(s.count_ones() as usize);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialBounds {
    /// `n - cp_f` of the undirected part.
    pub lower: Rational,
    /// `n - α`.
    pub upper_alpha: usize,
    pub acyclic_zero: bool,
}

pub fn combinatorial_bounds(graph: &SightGraph) -> Result<CombinatorialBounds> {
    let n = graph.vertex_count();
    let cpf = fractional_clique_cover_number(&graph.undirected_part())?;
    Ok(CombinatorialBounds {
        lower: int(n as i64) - cpf,
        upper_alpha: n - alpha(graph)?,
        acyclic_zero: graph.is_acyclic(),
    })
}
