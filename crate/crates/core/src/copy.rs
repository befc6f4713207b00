//! Copy-lemma extensions of a universe.
//!
//! A step copies the variables `Z` over the shared set `X`: the new `Z'`
//! has the same joint entropies with `X` as `Z` does, and is conditionally
//! independent of everything else in its block given `X`.

use num_traits::Zero;

use crate::entropy::{Constraint, LinearExpression, Relation, Tag, VarSet, VariableUniverse};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyStep {
    /// Copied variables in recipe order; `new_names[k]` copies `z_order[k]`.
    pub z_order: Vec<usize>,
    pub z_vars: VarSet,
    pub x_vars: VarSet,
    pub new_names: Vec<String>,
    /// Global step label, counted across all blocks.
    pub step: usize,
    pub block_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyBlock {
    pub steps: Vec<CopyStep>,
    /// Copy variables created in this block.
    pub copies: VarSet,
    /// Variables whose elemental inequalities are emitted for this block.
    pub scope: VarSet,
}

/// Maps the prime characters used in recipes to ASCII apostrophes.
pub fn normalize_primes(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '′' | '’' => out.push('\''),
            '″' => out.push_str("''"),
            '‴' => out.push_str("'''"),
            '⁗' => out.push_str("''''"),
            c => out.push(c),
        }
    }
    out
}

fn split_list(text: &str) -> Vec<String> {
    text.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split([',', ' ', '\t'])
        .map(|s| s.trim().trim_start_matches('(').trim_end_matches(')'))
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn resolve(
    names: &[String],
    universe: &VariableUniverse,
    visible: VarSet,
    role: &str,
) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            let i = universe
                .index_of(n)
                .ok_or_else(|| Error::InvalidCopy(format!("{role} mentions unknown variable `{n}`")))?;
            if !visible.contains(i) {
                return Err(Error::InvalidCopy(format!(
                    "{role} mentions `{n}`, which belongs to another copy block"
                )));
            }
            Ok(i)
        })
        .collect()
}

/// Parses `NEW be a [W-]copy of Z [over V]` (also `as a`).
///
/// With `over`, the shared set is `V`; otherwise it is every visible
/// variable outside `W` and `Z`.
pub fn parse_copy_recipe(
    text: &str,
    universe: &VariableUniverse,
    visible: VarSet,
    step: usize,
    block_id: usize,
) -> Result<CopyStep> {
    let text = normalize_primes(text.trim());
    let bad = |m: &str| Error::InvalidCopy(format!("{m} in recipe `{text}`"));
    let (left, right) = text
        .split_once("copy of")
        .ok_or_else(|| bad("missing `copy of`"))?;
    let (new_part, middle) = left
        .split_once(" be a ")
        .or_else(|| left.split_once(" as a "))
        .ok_or_else(|| bad("missing `be a`/`as a`"))?;
    let middle = middle.trim();
    let w_names = match middle.strip_suffix('-') {
        Some(w) => split_list(w),
        None if middle.is_empty() => Vec::new(),
        None => return Err(bad("expected `W-copy`")),
    };
    let (z_part, v_part) = match right.split_once(" over ") {
        Some((z, v)) => (z, Some(v)),
        None => (right, None),
    };
    let new_names = split_list(new_part);
    let z_names = split_list(z_part);
    if z_names.is_empty() {
        return Err(bad("empty copied list"));
    }
    if new_names.len() != z_names.len() {
        return Err(bad("new-variable count differs from copied count"));
    }
    for n in &new_names {
        if universe.index_of(n).is_some() {
            return Err(Error::InvalidCopy(format!("name collision: `{n}` already exists")));
        }
    }
    for (k, n) in new_names.iter().enumerate() {
        if new_names[..k].contains(n) {
            return Err(Error::InvalidCopy(format!("name collision: `{n}` listed twice")));
        }
    }
    let z_order = resolve(&z_names, universe, visible, "copied list")?;
    let z_vars = VarSet::from_indices(z_order.iter().copied());
    if z_vars.len() != z_order.len() {
        return Err(bad("repeated copied variable"));
    }
    let w_vars = VarSet::from_indices(resolve(&w_names, universe, visible, "W list")?);
    let x_vars = match v_part {
        Some(v) => {
            let v = VarSet::from_indices(resolve(&split_list(v), universe, visible, "over list")?);
            if !v.intersection(z_vars).is_empty() {
                return Err(bad("`over` list intersects the copied list"));
            }
            v
        }
        None => visible.difference(w_vars).difference(z_vars),
    };
    Ok(CopyStep { z_order, z_vars, x_vars, new_names, step, block_id })
}

/// A copy step applied inside a block whose current variables are
/// `block_universe`: returns the extended universe and the copy equalities.
pub fn apply_copy(
    universe: &VariableUniverse,
    block_universe: VarSet,
    step: &CopyStep,
) -> Result<(VariableUniverse, Vec<Constraint>)> {
    if !step.x_vars.intersection(step.z_vars).is_empty() {
        return Err(Error::InvalidCopy("shared set overlaps the copied set".into()));
    }
    if !step.x_vars.union(step.z_vars).is_subset(block_universe) {
        return Err(Error::InvalidCopy("step refers to variables outside its block".into()));
    }
    if step.new_names.len() != step.z_order.len() {
        return Err(Error::InvalidCopy("new-variable count differs from copied count".into()));
    }
    let mut extended = universe.clone();
    let mut image = vec![usize::MAX; universe.len()];
    let mut new_set = VarSet::EMPTY;
    for (name, &z) in step.new_names.iter().zip(&step.z_order) {
        let idx = extended.add_copy(name.clone(), z, step.step)?;
        image[z] = idx;
        new_set = new_set.with(idx);
    }
    let one = int(1);
    let minus = int(-1);
    let xz = step.x_vars.union(step.z_vars);
    let mut out = Vec::new();
    for s in xz.subsets() {
        let hit = s.intersection(step.z_vars);
        if hit.is_empty() {
            continue;
        }
        let moved = hit.iter().fold(s.difference(hit), |acc, z| acc.with(image[z]));
        let mut expr = LinearExpression::entropy(moved);
        expr.add_entropy(s, &minus);
        out.push(Constraint::new(
            expr,
            Relation::Eq,
            Rational::zero(),
            Tag::CopyMatch { step: step.step },
        ));
    }
    let whole = block_universe.union(new_set);
    let mut indep = LinearExpression::zero();
    indep.add_entropy(step.x_vars.union(new_set), &one);
    indep.add_entropy(block_universe, &one);
    indep.add_entropy(whole, &minus);
    indep.add_entropy(step.x_vars, &minus);
    out.push(Constraint::new(
        indep,
        Relation::Eq,
        Rational::zero(),
        Tag::CopyIndep { step: step.step },
    ));
    Ok((extended, out))
}

/// Per-block elemental scopes: the base plus that block's copies.
pub fn block_scopes(blocks: &[CopyBlock], base: VarSet) -> Vec<VarSet> {
    if blocks.is_empty() {
        return vec![base];
    }
    blocks.iter().map(|b| base.union(b.copies)).collect()
}

/// All copy blocks of a problem, applied over one shared universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyPlan {
    pub universe: VariableUniverse,
    pub blocks: Vec<CopyBlock>,
    pub constraints: Vec<Constraint>,
    /// Recipe text per block, as given.
    pub recipes: Vec<Vec<String>>,
}

impl CopyPlan {
    /// Parses and applies recipe lines block by block. Each block starts from
    /// the base variables; step labels run across blocks.
    pub fn build(base: &VariableUniverse, recipes: &[Vec<String>]) -> Result<CopyPlan> {
        let mut universe = base.clone();
        let base_set = base.base_set();
        let mut blocks = Vec::new();
        let mut constraints = Vec::new();
        let mut step_label = 0;
        for (block_id, lines) in recipes.iter().enumerate() {
            let mut visible = base_set;
            let mut steps = Vec::new();
            let mut copies = VarSet::EMPTY;
            for line in lines {
                let step = parse_copy_recipe(line, &universe, visible, step_label, block_id)?;
                let before = universe.len();
                let (next, rows) = apply_copy(&universe, visible, &step)?;
                universe = next;
                let created = VarSet::prefix(universe.len()).difference(VarSet::prefix(before));
                visible = visible.union(created);
                copies = copies.union(created);
                constraints.extend(rows);
                steps.push(step);
                step_label += 1;
            }
            blocks.push(CopyBlock { steps, copies, scope: base_set.union(copies) });
        }
        Ok(CopyPlan { universe, blocks, constraints, recipes: recipes.to_vec() })
    }

    pub fn empty(base: &VariableUniverse) -> CopyPlan {
        CopyPlan {
            universe: base.clone(),
            blocks: Vec::new(),
            constraints: Vec::new(),
            recipes: Vec::new(),
        }
    }

    pub fn scopes(&self) -> Vec<VarSet> {
        if self.blocks.is_empty() {
            return vec![self.universe.base_set()];
        }
        self.blocks.iter().map(|b| b.scope).collect()
    }

    /// Replaces the default scopes; one scope per block (or one when there
    /// are no blocks), each within the base plus that block's copies.
    pub fn override_scopes(&mut self, scopes: Vec<VarSet>) -> Result<()> {
        let base = self.universe.base_set();
        let allowed: Vec<VarSet> = block_scopes(&self.blocks, base);
        if scopes.len() != allowed.len() {
            return Err(Error::InvalidCopy(format!(
                "{} scopes given for {} blocks",
                scopes.len(),
                allowed.len()
            )));
        }
        for (k, (s, a)) in scopes.iter().zip(&allowed).enumerate() {
            if s.is_empty() || !s.is_subset(*a) {
                return Err(Error::InvalidCopy(format!(
                    "scope {k} mixes variables from other blocks"
                )));
            }
        }
        if self.blocks.is_empty() {
            // Only the base scope exists; keep it in the universe order.
            return if scopes[0] == base {
                Ok(())
            } else {
                Err(Error::InvalidCopy("without copies the scope must be the base".into()))
            };
        }
        for (b, s) in self.blocks.iter_mut().zip(scopes) {
            b.scope = s;
        }
        Ok(())
    }

    pub fn step_count(&self) -> usize {
        self.blocks.iter().map(|b| b.steps.len()).sum()
    }

    pub fn steps(&self) -> impl Iterator<Item = &CopyStep> {
        self.blocks.iter().flat_map(|b| b.steps.iter())
    }
}
