//! Permutation groups acting on base variables.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::entropy::{Constraint, LinearExpression, Relation, Tag, VarSet, VariableUniverse};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// A bijection on the points `0..degree`.
///
/// Cycle notation uses labels `point + offset`; graphs label vertices from 1
/// (offset 1) while access structures use the participant number directly
/// (offset 0, point 0 being the secret).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from cycles of points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 0..{degree}"
                    )));
                }
                if moved[p] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears twice"
                    )));
                }
                moved[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(18)(2 10 5 9)(3746)`.
    ///
    /// Inside a cycle, labels are whitespace separated when the cycle contains
    /// whitespace, and single digits otherwise. `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize, offset: usize) -> Result<Self> {
        let bad = |msg: String| Error::InvalidPermutation(msg);
        let text = text.trim();
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| bad(format!("expected `(` in `{text}`")))?;
            let close = open
                .find(')')
                .ok_or_else(|| bad(format!("unclosed cycle in `{text}`")))?;
            let body = open[..close].trim();
            rest = open[close + 1..].trim_start();
            if body.is_empty() {
                continue;
            }
            let labels: Vec<usize> = if body.contains(char::is_whitespace) {
                body.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| bad(format!("bad label `{t}`"))))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| bad(format!("bad label `{c}`")))
                    })
                    .collect::<Result<_>>()?
            };
            let points = labels
                .into_iter()
                .map(|l| {
                    l.checked_sub(offset)
                        .filter(|p| *p < degree)
                        .ok_or_else(|| bad(format!("label {l} out of range")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(points);
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images.get(point).copied().unwrap_or(point)
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        Permutation {
            images: (0..n).map(|p| self.image(other.image(p))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Image of a point set.
    pub fn apply_set(&self, set: VarSet) -> VarSet {
        VarSet::from_indices(set.iter().map(|p| self.image(p)))
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation with labels `point + offset`; round-trips through
    /// [`Permutation::parse_cycles`].
    pub fn to_cycle_string(&self, offset: usize) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for cycle in cycles {
            let labels: Vec<String> = cycle.iter().map(|p| (p + offset).to_string()).collect();
            let sep = if labels.iter().any(|l| l.len() > 1) { " " } else { "" };
            s.push('(');
            s.push_str(&labels.join(sep));
            s.push(')');
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string(0))
    }
}

/// A finite permutation group with its full element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements sorted by their image lists.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Whether some element maps `a` onto `b`.
    pub fn maps_set_to(&self, a: VarSet, b: VarSet) -> bool {
        a.len() == b.len() && self.elements.iter().any(|g| g.apply_set(a) == b)
    }
}

/// Breadth-first closure of a generator list.
pub fn closure(degree: usize, generators: &[Permutation]) -> Result<PermutationGroup> {
    let mut gens = Vec::with_capacity(generators.len());
    for g in generators {
        if g.degree() > degree {
            return Err(Error::InvalidPermutation(format!(
                "generator {g} acts on more than {degree} points"
            )));
        }
        // Pad to the common degree; from_images re-validates bijectivity.
        let mut images = g.images().to_vec();
        images.extend(g.degree()..degree);
        gens.push(Permutation::from_images(images)?);
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Ok(PermutationGroup { degree, generators: gens, elements })
}

/// One orbit of nonempty subsets; `members` sorted, `representative` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: VarSet,
    pub members: Vec<VarSet>,
}

/// Partition of the nonempty subsets of `0..base_count` into orbits, ordered
/// by representative.
pub fn subset_orbits(group: &PermutationGroup, base_count: usize) -> Vec<Orbit> {
    let total = 1usize << base_count;
    let mut assigned = vec![false; total];
    let mut orbits = Vec::new();
    for bits in 1..total {
        if assigned[bits] {
            continue;
        }
        let start = VarSet(bits as u32);
        let mut members: Vec<VarSet> = group
            .elements()
            .iter()
            .map(|g| g.apply_set(start))
            .collect();
        members.sort();
        members.dedup();
        for m in &members {
            assigned[m.0 as usize] = true;
        }
        orbits.push(Orbit { representative: members[0], members });
    }
    orbits
}

/// `h_I - h_rep = 0` for every non-representative subset of base variables.
pub fn symmetry_equalities(
    group: &PermutationGroup,
    universe: &VariableUniverse,
) -> Result<Vec<Constraint>> {
    let base = universe.base_count();
    if group.degree() > base
        && group
            .elements()
            .iter()
            .any(|g| (base..group.degree()).any(|p| g.image(p) != p))
    {
        return Err(Error::InvalidPermutation(format!(
            "group moves points beyond the {base} base variables"
        )));
    }
    let mut out = Vec::new();
    for orbit in subset_orbits(group, base) {
        for &member in &orbit.members[1..] {
            let mut expr = LinearExpression::entropy(member);
            expr.add_entropy(orbit.representative, &int(-1));
            out.push(Constraint::new(expr, Relation::Eq, Rational::zero(), Tag::Symmetry));
        }
    }
    Ok(out)
}

/// Objects whose symmetries can be checked.
pub trait Symmetric {
    fn describe(&self) -> String;
    /// Label offset used when printing generators for this object.
    fn label_offset(&self) -> usize;
    fn is_invariant_under(&self, p: &Permutation) -> Result<bool>;
}

pub fn check_invariance<T: Symmetric + ?Sized>(object: &T, p: &Permutation) -> Result<bool> {
    object.is_invariant_under(p)
}

/// Errors unless every generator of `group` is a symmetry of `object`.
pub fn validate_group<T: Symmetric + ?Sized>(object: &T, group: &PermutationGroup) -> Result<()> {
    for g in group.generators() {
        if !object.is_invariant_under(g)? {
            return Err(Error::NotInvariant {
                generator: g.to_cycle_string(object.label_offset()),
                object: object.describe(),
            });
        }
    }
    Ok(())
}
