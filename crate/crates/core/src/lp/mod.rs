//! Linear programs over entropy coordinates, solved exactly.
//!
//! `solve` eliminates the equality rows, then runs the simplex on the dual
//! of what remains. The dual's simplex multipliers are a primal optimum and
//! its basic solution gives the inequality duals; the equality duals follow
//! from the elimination record.

mod export;
mod presolve;
mod simplex;
mod sparse;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

pub use export::export_lp;
use presolve::{normalize, Added, Elimination};
use simplex::{solve_standard, Outcome, StandardForm};
use sparse::SparseVec;

use crate::certificate::{CertRow, Certificate};
use crate::entropy::{Column, Constraint, LinearExpression, Relation, Tag, VariableUniverse};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    pub fn keyword(self) -> &'static str {
        match self {
            Sense::Maximize => "Maximize",
            Sense::Minimize => "Minimize",
        }
    }
}

/// An immutable LP: columns in canonical order, rows in assembly order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPModel {
    universe: VariableUniverse,
    columns: Vec<Column>,
    rows: Vec<Constraint>,
    objective: LinearExpression,
    sense: Sense,
}

/// Concatenates constraint sets and drops exact duplicate rows.
pub fn assemble(
    universe: &VariableUniverse,
    constraint_sets: &[Vec<Constraint>],
    objective: LinearExpression,
    sense: Sense,
) -> Result<LPModel> {
    let full = universe.full_set();
    let check = |c: Column| -> Result<()> {
        match c {
            Column::Entropy(e) if !e.set().is_subset(full) => {
                Err(Error::CoordinateOutOfRange(e.bits()))
            }
            _ => Ok(()),
        }
    };
    for c in objective.columns() {
        check(c)?;
    }
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::new();
    let mut columns: BTreeSet<Column> = objective.columns().collect();
    for set in constraint_sets {
        for row in set {
            for c in row.expr.columns() {
                check(c)?;
            }
            let key = (row.expr.clone(), row.relation, row.rhs.clone());
            if seen.insert(key) {
                columns.extend(row.expr.columns());
                rows.push(row.clone());
            }
        }
    }
    Ok(LPModel {
        universe: universe.clone(),
        columns: columns.into_iter().collect(),
        rows,
        objective,
        sense,
    })
}

impl LPModel {
    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn objective(&self) -> &LinearExpression {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Copy with the rows and objective kept but a different sense.
    pub fn with_sense(&self, sense: Sense) -> LPModel {
        LPModel { sense, ..self.clone() }
    }

    fn index(&self) -> HashMap<Column, usize> {
        self.columns.iter().enumerate().map(|(i, c)| (*c, i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    /// Carries the constraint families involved in the contradiction.
    Infeasible(Vec<&'static str>),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPSolution {
    pub status: Status,
    pub value: Rational,
    pub primal: BTreeMap<Column, Rational>,
    /// One multiplier per model row: `Σ duals·expr = objective` and
    /// `Σ duals·rhs = value`. Under maximize, `<=` rows carry nonnegative and
    /// `>=` rows nonpositive duals; minimize mirrors this.
    pub duals: Vec<Rational>,
}

impl LPSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// The optimum, or the status as an error.
    pub fn optimum(&self) -> Result<Rational> {
        match &self.status {
            Status::Optimal => Ok(self.value.clone()),
            Status::Unbounded => Err(Error::Unbounded),
            Status::Infeasible(f) => Err(Error::Infeasible { families: f.join(", ") }),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub pivot_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { pivot_budget: 2_000_000 }
    }
}

pub fn solve(model: &LPModel) -> Result<LPSolution> {
    solve_with(model, SolveOptions::default())
}

fn families(tags: impl IntoIterator<Item = Tag>) -> Vec<&'static str> {
    let set: BTreeSet<&'static str> = tags.into_iter().map(Tag::family).collect();
    set.into_iter().collect()
}

/// Inequality row after substitution, in `<=` form and normalized.
struct Reduced {
    coeffs: SparseVec,
    rhs: Rational,
    origin: usize,
    /// `dual(origin) = sign * λ / scale`.
    sign: i8,
    scale: Rational,
}

pub fn solve_with(model: &LPModel, options: SolveOptions) -> Result<LPSolution> {
    let index = model.index();
    let ncols = model.columns.len();
    let to_sparse = |e: &LinearExpression| -> SparseVec {
        let mut v: SparseVec = e.terms().iter().map(|(c, a)| (index[c], a.clone())).collect();
        v.sort_by_key(|(i, _)| *i);
        v
    };
    let maximize = model.sense == Sense::Maximize;
    let mut cost = to_sparse(&model.objective);
    if !maximize {
        for (_, a) in cost.iter_mut() {
            *a = -a.clone();
        }
    }

    // Equalities: symmetry first, then copy matches, then the rest.
    let rank = |t: &Tag| match t {
        Tag::Symmetry => 0,
        Tag::CopyMatch { .. } => 1,
        _ => 2,
    };
    let mut eq_rows: Vec<usize> = (0..model.rows.len())
        .filter(|&r| model.rows[r].relation == Relation::Eq)
        .collect();
    eq_rows.sort_by_key(|&r| (rank(&model.rows[r].tag), r));
    let mut elim = Elimination::default();
    for (k, &r) in eq_rows.iter().enumerate() {
        let row = &model.rows[r];
        if let Added::Inconsistent(combo) = elim.add(to_sparse(&row.expr), row.rhs.clone(), k) {
            let tags = combo.iter().map(|(f, _)| model.rows[eq_rows[*f]].tag);
            return Ok(infeasible(model, families(tags)));
        }
    }

    let mut reduced: Vec<Reduced> = Vec::new();
    let mut dedup: HashMap<SparseVec, usize> = HashMap::new();
    for (r, row) in model.rows.iter().enumerate() {
        let sign: i8 = match row.relation {
            Relation::Eq => continue,
            Relation::Le => 1,
            Relation::Ge => -1,
        };
        let mut coeffs = to_sparse(&row.expr);
        let (shift, hits) = elim.reduce(&mut coeffs);
        let mut rhs = &row.rhs - shift;
        if sign < 0 {
            for (_, a) in coeffs.iter_mut() {
                *a = -a.clone();
            }
            rhs = -rhs;
        }
        if coeffs.is_empty() {
            if rhs.is_negative() {
                let mut tags = vec![row.tag];
                for (p, _) in &hits {
                    for (f, _) in &elim.defs[p].combo {
                        tags.push(model.rows[eq_rows[*f]].tag);
                    }
                }
                return Ok(infeasible(model, families(tags)));
            }
            continue;
        }
        let s = normalize(&mut coeffs);
        let rhs = rhs / &s;
        match dedup.get(&coeffs) {
            Some(&k) => {
                if rhs < reduced[k].rhs {
                    reduced[k].rhs = rhs;
                    reduced[k].origin = r;
                    reduced[k].sign = sign;
                    reduced[k].scale = s;
                }
            }
            None => {
                dedup.insert(coeffs.clone(), reduced.len());
                reduced.push(Reduced { coeffs, rhs, origin: r, sign, scale: s });
            }
        }
    }

    // Objective restricted to the free columns.
    let (cost_shift, _) = elim.reduce(&mut cost);
    let free: Vec<usize> = (0..ncols).filter(|c| !elim.is_pivot(*c)).collect();
    let position: HashMap<usize, usize> = free.iter().enumerate().map(|(i, c)| (*c, i)).collect();

    // Dual: min b̃·λ  s.t.  Ãᵀλ = c̃, λ >= 0. Rows = free columns.
    let cols: Vec<SparseVec> = reduced
        .iter()
        .map(|red| red.coeffs.iter().map(|(c, a)| (position[c], a.clone())).collect())
        .collect();
    let mut rhs = vec![Rational::zero(); free.len()];
    for (c, a) in &cost {
        rhs[position[c]] = a.clone();
    }
    let dual_form = StandardForm {
        rows: free.len(),
        cols,
        cost: reduced.iter().map(|r| r.rhs.clone()).collect(),
        rhs,
    };
    let outcome = solve_standard(&dual_form, options.pivot_budget)?;
    match outcome {
        Outcome::Optimal { x: lambda, y: z, value } => {
            let mut values = vec![Rational::zero(); ncols];
            for (i, c) in free.iter().enumerate() {
                values[*c] = z[i].clone();
            }
            elim.back_substitute(&mut values);
            let mut duals = vec![Rational::zero(); model.rows.len()];
            for (red, l) in reduced.iter().zip(&lambda) {
                if !l.is_zero() {
                    let d = l / &red.scale;
                    duals[red.origin] = if red.sign > 0 { d } else { -d };
                }
            }
            // Residual c' - Σ dual·a lies in the span of the definitions.
            let mut residual = vec![Rational::zero(); ncols];
            for (c, a) in to_sparse(&model.objective) {
                residual[c] = if maximize { a } else { -a };
            }
            for (r, d) in duals.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                for (c, a) in model.rows[r].expr.terms() {
                    residual[index[c]] -= d * a;
                }
            }
            let mu = elim.equality_multipliers(&residual, eq_rows.len());
            for (k, &r) in eq_rows.iter().enumerate() {
                duals[r] = mu[k].clone();
            }
            let mut value = value + cost_shift;
            if !maximize {
                value = -value;
                for d in duals.iter_mut() {
                    *d = -d.clone();
                }
            }
            let primal = model.columns.iter().copied().zip(values).collect();
            Ok(LPSolution { status: Status::Optimal, value, primal, duals })
        }
        Outcome::Unbounded { ray } => {
            // A Farkas ray: Ãᵀd = 0 with b̃·d < 0 proves the primal empty.
            let mut tags: Vec<Tag> = ray.iter().map(|(j, _)| model.rows[reduced[*j].origin].tag).collect();
            tags.extend(farkas_equalities(model, &elim, &eq_rows, &reduced, &ray, &index));
            Ok(infeasible(model, families(tags)))
        }
        Outcome::Infeasible => {
            // Either the primal is empty or it is unbounded.
            let zero_form = StandardForm {
                rhs: vec![Rational::zero(); dual_form.rows],
                ..dual_form
            };
            match solve_standard(&zero_form, options.pivot_budget)? {
                Outcome::Unbounded { ray } => {
                    let mut tags: Vec<Tag> =
                        ray.iter().map(|(j, _)| model.rows[reduced[*j].origin].tag).collect();
                    tags.extend(farkas_equalities(model, &elim, &eq_rows, &reduced, &ray, &index));
                    Ok(infeasible(model, families(tags)))
                }
                _ => Ok(LPSolution {
                    status: Status::Unbounded,
                    value: Rational::zero(),
                    primal: BTreeMap::new(),
                    duals: Vec::new(),
                }),
            }
        }
    }
}

/// Tags of the equalities needed to cancel the inequality part of a ray.
fn farkas_equalities(
    model: &LPModel,
    elim: &Elimination,
    eq_rows: &[usize],
    reduced: &[Reduced],
    ray: &SparseVec,
    index: &HashMap<Column, usize>,
) -> Vec<Tag> {
    let mut residual = vec![Rational::zero(); model.columns.len()];
    for (j, w) in ray {
        let red = &reduced[*j];
        let factor = if red.sign > 0 { w / &red.scale } else { -(w / &red.scale) };
        for (c, a) in model.rows[red.origin].expr.terms() {
            residual[index[c]] -= &factor * a;
        }
    }
    let mu = elim.equality_multipliers(&residual, eq_rows.len());
    mu.iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(k, _)| model.rows[eq_rows[k]].tag)
        .collect()
}

fn infeasible(model: &LPModel, families: Vec<&'static str>) -> LPSolution {
    LPSolution {
        status: Status::Infeasible(families),
        value: Rational::zero(),
        primal: BTreeMap::new(),
        duals: vec![Rational::zero(); model.rows.len()],
    }
}

/// One certificate row per nonzero dual of an optimal solution.
pub fn dual_to_certificate(model: &LPModel, solution: &LPSolution) -> Result<Certificate> {
    if !solution.is_optimal() || solution.duals.len() != model.rows.len() {
        return Err(Error::Certificate("solution carries no duals".into()));
    }
    let rows = model
        .rows
        .iter()
        .zip(&solution.duals)
        .filter(|(_, d)| !d.is_zero())
        .map(|(row, d)| CertRow {
            expr: row.expr.clone(),
            relation: row.relation,
            rhs: row.rhs.clone(),
            multiplier: d.clone(),
        })
        .collect();
    Ok(Certificate { rows, universe: model.universe.clone() })
}

/// Checks `Σ duals·expr = objective`, the sign rules and returns `Σ duals·rhs`.
pub fn check_duals(model: &LPModel, duals: &[Rational]) -> Result<Rational> {
    let mut aggregate = LinearExpression::zero();
    let mut bound = Rational::zero();
    for (row, d) in model.rows.iter().zip(duals) {
        if d.is_zero() {
            continue;
        }
        let admissible = match (model.sense, row.relation) {
            (_, Relation::Eq) => true,
            (Sense::Maximize, Relation::Le) | (Sense::Minimize, Relation::Ge) => d.is_positive(),
            _ => d.is_negative(),
        };
        if !admissible {
            return Err(Error::Certificate(format!(
                "dual {d} has the wrong sign for a {} row",
                row.relation.symbol()
            )));
        }
        aggregate.add_scaled(&row.expr, d);
        bound += d * &row.rhs;
    }
    if aggregate != model.objective {
        let diff = aggregate - &model.objective;
        return Err(Error::Certificate(format!(
            "aggregate differs from the objective by {}",
            diff.display(&model.universe)
        )));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{elemental_inequalities, mutual_info_expr, VarSet};
    use crate::rational::{int, rat};

    fn xs(n: usize) -> VariableUniverse {
        VariableUniverse::new((1..=n).map(|i| format!("X{i}"))).unwrap()
    }

    fn h(bits: u32) -> LinearExpression {
        LinearExpression::entropy(VarSet(bits))
    }

    #[test]
    fn empty_model_is_unbounded() {
        let u = xs(1);
        let m = assemble(&u, &[], h(1), Sense::Maximize).unwrap();
        assert_eq!(m.columns().len(), 1);
        assert!(m.rows().is_empty());
        assert_eq!(solve(&m).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn single_bound() {
        let u = xs(1);
        let row = Constraint::new(h(1), Relation::Le, int(1), Tag::Bound);
        let m = assemble(&u, &[vec![row]], h(1), Sense::Maximize).unwrap();
        let s = solve(&m).unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.duals, vec![int(1)]);
        let cert = dual_to_certificate(&m, &s).unwrap();
        assert_eq!(cert.rows.len(), 1);
        assert_eq!(check_duals(&m, &s.duals).unwrap(), int(1));
    }

    #[test]
    fn objective_outside_universe_is_rejected() {
        let u = xs(2);
        assert!(assemble(&u, &[], h(4), Sense::Maximize).is_err());
    }

    #[test]
    fn duplicates_are_dropped() {
        let u = xs(2);
        let rows = elemental_inequalities(VarSet(3)).unwrap();
        let m = assemble(&u, &[rows.clone(), rows], h(3), Sense::Minimize).unwrap();
        assert_eq!(m.rows().len(), 3);
    }

    #[test]
    fn shannon_implies_mutual_information_nonnegative() {
        let u = xs(3);
        let rows = elemental_inequalities(VarSet(7)).unwrap();
        let obj = mutual_info_expr(VarSet(1), VarSet(6), VarSet(0)).unwrap();
        let m = assemble(&u, &[rows], obj, Sense::Minimize).unwrap();
        let s = solve(&m).unwrap();
        assert_eq!(s.value, int(0));
        assert_eq!(check_duals(&m, &s.duals).unwrap(), int(0));
    }

    #[test]
    fn equalities_and_mixed_rows() {
        // max h1 + h2 with h1 = h2, h12 <= 3/2, Shannon on two variables.
        let u = xs(2);
        let mut rows = elemental_inequalities(VarSet(3)).unwrap();
        rows.push(Constraint::new(h(1) - &h(2), Relation::Eq, int(0), Tag::Symmetry));
        rows.push(Constraint::new(h(3), Relation::Le, rat(3, 2), Tag::Bound));
        rows.push(Constraint::new(h(1), Relation::Le, int(1), Tag::Bound));
        let obj = h(1) + &h(2);
        let m = assemble(&u, &[rows], obj, Sense::Maximize).unwrap();
        let s = solve(&m).unwrap();
        assert_eq!(s.value, int(2));
        assert_eq!(check_duals(&m, &s.duals).unwrap(), int(2));
        for row in m.rows() {
            assert!(row.is_satisfied_by(|c| s.primal[&c].clone()));
        }
    }

    #[test]
    fn contradictory_equalities_are_infeasible() {
        let u = xs(2);
        let rows = vec![
            Constraint::new(h(1), Relation::Eq, int(1), Tag::Problem),
            Constraint::new(h(1) - &h(2), Relation::Eq, int(0), Tag::Symmetry),
            Constraint::new(h(2), Relation::Le, int(0), Tag::Bound),
        ];
        let m = assemble(&u, &[rows], h(3), Sense::Minimize).unwrap();
        match solve(&m).unwrap().status {
            Status::Infeasible(f) => assert!(f.contains(&"symmetry")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
