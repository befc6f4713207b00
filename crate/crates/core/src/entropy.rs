//! Variable universes, entropy coordinates and linear entropy expressions.
//!
//! A universe of `n` random variables gives a `2^n - 1` dimensional space
//! with one coordinate `h_I` per nonempty subset `I`. Subsets are bitmasks
//! over the universe order, so the coordinate order is the bitmask order.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Hard cap on the number of variables in a universe.
pub const MAX_VARIABLES: usize = 30;

/// A set of variable indices, stored as a bitmask over universe order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSet(pub u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn singleton(index: usize) -> Self {
        VarSet(1 << index)
    }

    /// The first `n` indices.
    pub fn prefix(n: usize) -> Self {
        if n >= 32 {
            VarSet(u32::MAX)
        } else {
            VarSet((1u32 << n) - 1)
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        VarSet(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, index: usize) -> VarSet {
        VarSet(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> VarSet {
        VarSet(self.0 & !(1 << index))
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self` (including the empty set) in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(VarSet(cur))
        })
    }
}

/// Where a variable comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Base,
    /// A copy of the variable at index `of`, created by copy step `step`.
    Copy { of: usize, step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub origin: Origin,
}

/// Named base variables followed by copy variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableUniverse {
    vars: Vec<Variable>,
    base_count: usize,
}

impl VariableUniverse {
    pub fn new<S: Into<String>>(base_names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut universe = VariableUniverse { vars: Vec::new(), base_count: 0 };
        for name in base_names {
            universe.push(name.into(), Origin::Base)?;
            universe.base_count += 1;
        }
        Ok(universe)
    }

    fn push(&mut self, name: String, origin: Origin) -> Result<usize> {
        if self.index_of(&name).is_some() {
            return Err(Error::DuplicateName(name));
        }
        if self.vars.len() >= MAX_VARIABLES {
            return Err(Error::UniverseTooLarge(self.vars.len() + 1));
        }
        self.vars.push(Variable { name, origin });
        Ok(self.vars.len() - 1)
    }

    /// Appends a copy of variable `of`, returning its index.
    pub fn add_copy(&mut self, name: impl Into<String>, of: usize, step: usize) -> Result<usize> {
        if of >= self.vars.len() {
            return Err(Error::InvalidCopy(format!("no variable with index {of}")));
        }
        self.push(name.into(), Origin::Copy { of, step })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn base_count(&self) -> usize {
        self.base_count
    }

    pub fn base_set(&self) -> VarSet {
        VarSet::prefix(self.base_count)
    }

    pub fn full_set(&self) -> VarSet {
        VarSet::prefix(self.vars.len())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.vars[index]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.vars[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// The base variable a (possibly iterated) copy descends from.
    pub fn root_of(&self, mut index: usize) -> usize {
        while let Origin::Copy { of, .. } = self.vars[index].origin {
            index = of;
        }
        index
    }

    /// The copy of base-or-copy variable `of` made at `step`, if any.
    pub fn copy_of(&self, of: usize, step: usize) -> Option<usize> {
        self.vars
            .iter()
            .position(|v| v.origin == Origin::Copy { of, step })
    }

    pub fn varset<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<VarSet> {
        let mut set = VarSet::EMPTY;
        for name in names {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            set = set.with(i);
        }
        Ok(set)
    }

    /// Canonical coordinate of a nonempty set of names.
    pub fn coordinate_of<S: AsRef<str>>(
        &self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<EntropyCoordinate> {
        EntropyCoordinate::new(self.varset(names)?)
    }

    pub fn names_of(&self, set: VarSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }

    /// Token used in LP column names: the digits of a base name (or the
    /// sanitized name), and `<base token>p<step>` for copies.
    pub fn lp_token(&self, index: usize) -> String {
        let var = &self.vars[index];
        match var.origin {
            Origin::Base => {
                let digits: String = var
                    .name
                    .chars()
                    .skip_while(|c| !c.is_ascii_digit())
                    .collect();
                if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                    digits
                } else {
                    var.name
                        .chars()
                        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                        .collect()
                }
            }
            Origin::Copy { of, step } => format!("{}p{}", self.lp_token(of), step),
        }
    }

    pub fn set_display(&self, set: VarSet) -> String {
        format!("{{{}}}", self.names_of(set).join(","))
    }
}

/// One coordinate `h_I` of the entropy space; `I` is nonempty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntropyCoordinate(VarSet);

impl EntropyCoordinate {
    pub fn new(set: VarSet) -> Result<Self> {
        if set.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(EntropyCoordinate(set))
        }
    }

    pub fn set(self) -> VarSet {
        self.0
    }

    pub fn bits(self) -> u32 {
        self.0 .0
    }
}

/// An LP column: an entropy coordinate or an auxiliary scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    Entropy(EntropyCoordinate),
    Aux(u32),
}

impl Column {
    /// Entropy column for a set; `None` for the empty set.
    pub fn entropy(set: VarSet) -> Option<Column> {
        EntropyCoordinate::new(set).ok().map(Column::Entropy)
    }

    pub fn as_entropy(self) -> Option<VarSet> {
        match self {
            Column::Entropy(c) => Some(c.set()),
            Column::Aux(_) => None,
        }
    }
}

/// A sparse linear functional, kept sorted by column with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearExpression {
    terms: Vec<(Column, Rational)>,
}

impl LinearExpression {
    pub fn zero() -> Self {
        LinearExpression::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Column, Rational)>) -> Self {
        let mut e = LinearExpression::zero();
        for (c, v) in terms {
            e.add_term(c, &v);
        }
        e
    }

    /// `+1 * h_set`, or zero for the empty set.
    pub fn entropy(set: VarSet) -> Self {
        let mut e = LinearExpression::zero();
        e.add_entropy(set, &int(1));
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Column, Rational)] {
        &self.terms
    }

    pub fn coefficient(&self, column: Column) -> Rational {
        match self.terms.binary_search_by(|(c, _)| c.cmp(&column)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn add_term(&mut self, column: Column, value: &Rational) {
        if value.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(c, _)| c.cmp(&column)) {
            Ok(i) => {
                self.terms[i].1 += value;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (column, value.clone())),
        }
    }

    /// Adds `value * h_set`; entropy of the empty set is zero and is dropped.
    pub fn add_entropy(&mut self, set: VarSet, value: &Rational) {
        if let Some(c) = Column::entropy(set) {
            self.add_term(c, value);
        }
    }

    /// `self += factor * other`, merging sorted term lists.
    pub fn add_scaled(&mut self, other: &LinearExpression, factor: &Rational) {
        if factor.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = std::mem::take(&mut self.terms).into_iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ca, _)), Some((cb, _))) => {
                    if ca < cb {
                        out.push(a.next().unwrap());
                    } else if cb < ca {
                        let (c, v) = b.next().unwrap();
                        out.push((*c, v * factor));
                    } else {
                        let (c, mut v) = a.next().unwrap();
                        let (_, w) = b.next().unwrap();
                        v += w * factor;
                        if !v.is_zero() {
                            out.push((c, v));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (c, v) = b.next().unwrap();
                    out.push((*c, v * factor));
                }
                (None, None) => break,
            }
        }
        self.terms = out;
    }

    pub fn scaled(&self, factor: &Rational) -> LinearExpression {
        if factor.is_zero() {
            return LinearExpression::zero();
        }
        LinearExpression {
            terms: self.terms.iter().map(|(c, v)| (*c, v * factor)).collect(),
        }
    }

    pub fn negated(&self) -> LinearExpression {
        LinearExpression {
            terms: self.terms.iter().map(|(c, v)| (*c, -v)).collect(),
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = Column> + '_ {
        self.terms.iter().map(|(c, _)| *c)
    }

    /// Evaluates the expression at a point given per column.
    pub fn evaluate(&self, value_of: impl Fn(Column) -> Rational) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (c, v)| acc + v * value_of(*c))
    }

    /// Union of the variable sets of all entropy terms.
    pub fn support(&self) -> VarSet {
        self.terms
            .iter()
            .filter_map(|(c, _)| c.as_entropy())
            .fold(VarSet::EMPTY, VarSet::union)
    }

    pub fn display<'a>(&'a self, universe: &'a VariableUniverse) -> ExpressionDisplay<'a> {
        ExpressionDisplay { expr: self, universe }
    }
}

impl std::ops::Add<&LinearExpression> for LinearExpression {
    type Output = LinearExpression;
    fn add(mut self, rhs: &LinearExpression) -> LinearExpression {
        self.add_scaled(rhs, &Rational::one());
        self
    }
}

impl std::ops::Sub<&LinearExpression> for LinearExpression {
    type Output = LinearExpression;
    fn sub(mut self, rhs: &LinearExpression) -> LinearExpression {
        self.add_scaled(rhs, &-Rational::one());
        self
    }
}

pub struct ExpressionDisplay<'a> {
    expr: &'a LinearExpression,
    universe: &'a VariableUniverse,
}

impl fmt::Display for ExpressionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_zero() {
            return write!(f, "0");
        }
        for (k, (c, v)) in self.expr.terms.iter().enumerate() {
            let sign = if *v < Rational::zero() { "-" } else { "+" };
            if k > 0 {
                write!(f, " ")?;
            }
            let mag = if *v < Rational::zero() { -v.clone() } else { v.clone() };
            write!(f, "{sign}")?;
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            match c {
                Column::Entropy(e) => write!(f, "H{}", self.universe.set_display(e.set()))?,
                Column::Aux(i) => write!(f, "aux{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }

    pub fn flipped(self) -> Relation {
        match self {
            Relation::Ge => Relation::Le,
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
        }
    }
}

/// Which constraint family a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Elemental { scope: VarSet },
    CopyMatch { step: usize },
    CopyIndep { step: usize },
    Symmetry,
    Problem,
    Bound,
}

impl Tag {
    pub fn family(self) -> &'static str {
        match self {
            Tag::Elemental { .. } => "elemental",
            Tag::CopyMatch { .. } => "copy-match",
            Tag::CopyIndep { .. } => "copy-indep",
            Tag::Symmetry => "symmetry",
            Tag::Problem => "problem",
            Tag::Bound => "bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub expr: LinearExpression,
    pub relation: Relation,
    pub rhs: Rational,
    pub tag: Tag,
}

impl Constraint {
    pub fn new(expr: LinearExpression, relation: Relation, rhs: Rational, tag: Tag) -> Self {
        Constraint { expr, relation, rhs, tag }
    }

    pub fn is_satisfied_by(&self, value_of: impl Fn(Column) -> Rational) -> bool {
        let lhs = self.expr.evaluate(value_of);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `H(A | B) = h_{A∪B} - h_B`.
pub fn cond_entropy_expr(a: VarSet, b: VarSet) -> Result<LinearExpression> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut e = LinearExpression::entropy(a.union(b));
    e.add_entropy(b, &int(-1));
    Ok(e)
}

/// `I(I : J | K) = h_{I∪K} + h_{J∪K} - h_{I∪J∪K} - h_K`.
pub fn mutual_info_expr(i: VarSet, j: VarSet, k: VarSet) -> Result<LinearExpression> {
    if i.is_empty() || j.is_empty() {
        return Err(Error::EmptySet);
    }
    let one = int(1);
    let minus = int(-1);
    let mut e = LinearExpression::zero();
    e.add_entropy(i.union(k), &one);
    e.add_entropy(j.union(k), &one);
    e.add_entropy(i.union(j).union(k), &minus);
    e.add_entropy(k, &minus);
    Ok(e)
}

/// Number of elemental inequalities over `m` variables.
pub fn elemental_count(m: usize) -> usize {
    if m < 2 {
        return m;
    }
    m * (m - 1) / 2 * (1usize << (m - 2)) + m
}

/// Elemental Shannon inequalities over `scope`: `I(i:j|K) >= 0` for every
/// pair and every `K` in the rest of the scope, then `H(i | scope - i) >= 0`.
pub fn elemental_inequalities(scope: VarSet) -> Result<Vec<Constraint>> {
    if scope.is_empty() {
        return Err(Error::EmptySet);
    }
    let members: Vec<usize> = scope.iter().collect();
    let mut out = Vec::with_capacity(elemental_count(members.len()));
    let tag = Tag::Elemental { scope };
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            let rest = scope.without(i).without(j);
            for k in rest.subsets() {
                let expr = mutual_info_expr(VarSet::singleton(i), VarSet::singleton(j), k)?;
                out.push(Constraint::new(expr, Relation::Ge, Rational::zero(), tag));
            }
        }
    }
    for &i in &members {
        let expr = cond_entropy_expr(VarSet::singleton(i), scope.without(i))?;
        out.push(Constraint::new(expr, Relation::Ge, Rational::zero(), tag));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(bits: u32) -> Column {
        Column::entropy(VarSet(bits)).unwrap()
    }

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("X{i}")).collect()
    }

    #[test]
    fn coordinate_singleton_and_order_independence() {
        let u = VariableUniverse::new(names(3)).unwrap();
        assert_eq!(u.coordinate_of(["X1"]).unwrap().bits(), 0b001);
        assert_eq!(
            u.coordinate_of(["X3", "X1"]).unwrap(),
            u.coordinate_of(["X1", "X3"]).unwrap()
        );
        assert_eq!(u.coordinate_of(["X9"]), Err(Error::UnknownVariable("X9".into())));
        assert_eq!(u.coordinate_of(Vec::<&str>::new()), Err(Error::EmptySet));
    }

    #[test]
    fn coordinate_mixing_copy_variable() {
        let mut u = VariableUniverse::new(names(10)).unwrap();
        u.add_copy("b'0", 1, 0).unwrap();
        let c = u.coordinate_of(["X2", "b'0"]).unwrap();
        assert_eq!(c.bits(), (1 << 1) | (1 << 10));
        assert_eq!(u.names_of(c.set()), vec!["X2", "b'0"]);
        assert_eq!(u.lp_token(10), "2p0");
    }

    #[test]
    fn universe_rejects_duplicates_and_overflow() {
        assert!(matches!(
            VariableUniverse::new(["A", "A"]),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            VariableUniverse::new(names(31)),
            Err(Error::UniverseTooLarge(31))
        ));
        assert!(VariableUniverse::new(names(30)).is_ok());
    }

    #[test]
    fn cond_entropy_cases() {
        let e = cond_entropy_expr(VarSet(0b010), VarSet::EMPTY).unwrap();
        assert_eq!(e.terms(), &[(h(0b010), int(1))]);
        let e = cond_entropy_expr(VarSet(0b001), VarSet(0b110)).unwrap();
        assert_eq!(e.terms(), &[(h(0b110), int(-1)), (h(0b111), int(1))]);
        let e = cond_entropy_expr(VarSet(0b010), VarSet(0b110)).unwrap();
        assert!(e.is_zero());
        assert_eq!(cond_entropy_expr(VarSet::EMPTY, VarSet(1)), Err(Error::EmptySet));
    }

    #[test]
    fn mutual_info_cases() {
        // I(1:2|3)
        let e = mutual_info_expr(VarSet(0b001), VarSet(0b010), VarSet(0b100)).unwrap();
        assert_eq!(
            e.terms(),
            &[
                (h(0b100), int(-1)),
                (h(0b101), int(1)),
                (h(0b110), int(1)),
                (h(0b111), int(-1))
            ]
        );
        // I(X:X) = H(X)
        let e = mutual_info_expr(VarSet(1), VarSet(1), VarSet::EMPTY).unwrap();
        assert_eq!(e.terms(), &[(h(1), int(1))]);
        // I(12 : 23) = h12 + h23 - h123, no empty-set term
        let e = mutual_info_expr(VarSet(0b011), VarSet(0b110), VarSet::EMPTY).unwrap();
        assert_eq!(
            e.terms(),
            &[(h(0b011), int(1)), (h(0b110), int(1)), (h(0b111), int(-1))]
        );
        assert!(mutual_info_expr(VarSet::EMPTY, VarSet(1), VarSet(2)).is_err());
    }

    #[test]
    fn elemental_small_cases() {
        let one = elemental_inequalities(VarSet(0b1)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].expr.terms(), &[(h(1), int(1))]);
        let two = elemental_inequalities(VarSet(0b11)).unwrap();
        assert_eq!(two.len(), 3);
        let exprs: Vec<_> = two.iter().map(|c| c.expr.clone()).collect();
        assert!(exprs.contains(&mutual_info_expr(VarSet(1), VarSet(2), VarSet::EMPTY).unwrap()));
        assert!(exprs.contains(&cond_entropy_expr(VarSet(1), VarSet(2)).unwrap()));
        assert!(exprs.contains(&cond_entropy_expr(VarSet(2), VarSet(1)).unwrap()));
        assert_eq!(elemental_inequalities(VarSet(0b111)).unwrap().len(), 9);
        assert!(elemental_inequalities(VarSet::EMPTY).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let subs: Vec<u32> = VarSet(0b1010).subsets().map(|s| s.0).collect();
        assert_eq!(subs, vec![0, 0b0010, 0b1000, 0b1010]);
        assert_eq!(VarSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn add_scaled_merges_and_cancels() {
        let mut a = LinearExpression::from_terms([(h(1), int(1)), (h(3), int(2))]);
        let b = LinearExpression::from_terms([(h(2), int(1)), (h(3), int(1))]);
        a.add_scaled(&b, &int(-2));
        assert_eq!(a.terms(), &[(h(1), int(1)), (h(2), int(-2))]);
    }
}
