//! Dual certificates: parsing, row classification and exact checking.
//!
//! A certificate is a list of rows `expr REL rhs`, each with a multiplier.
//! For a maximize problem it proves `objective <= Σ multiplier·rhs` when
//! every row is a valid constraint, the signs are admissible and the
//! multipliers aggregate the rows to the objective exactly.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::copy::CopyStep;
use crate::entropy::{Column, LinearExpression, Origin, Relation, VarSet, VariableUniverse};
use crate::error::{Error, Result};
use crate::guessing::GuessProblem;
use crate::lp::Sense;
use crate::rational::{format_fraction, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertRow {
    pub expr: LinearExpression,
    pub relation: Relation,
    pub rhs: Rational,
    pub multiplier: Rational,
}

/// Rows together with the universe their coordinates live in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub rows: Vec<CertRow>,
    pub universe: VariableUniverse,
}

/// Letters `a, b, ...` name base variables by position; `b'0` names the
/// copy of base variable `b` made at step 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenMap {
    to_var: HashMap<String, usize>,
    to_token: Vec<String>,
}

impl TokenMap {
    pub fn for_universe(universe: &VariableUniverse) -> Result<TokenMap> {
        if universe.base_count() > 26 {
            return Err(Error::Certificate("letter tokens cover at most 26 base variables".into()));
        }
        let letter = |i: usize| char::from(b'a' + i as u8).to_string();
        let mut to_var = HashMap::new();
        let mut to_token = Vec::with_capacity(universe.len());
        for (i, var) in universe.variables().iter().enumerate() {
            let token = match var.origin {
                Origin::Base => letter(i),
                Origin::Copy { step, .. } => format!("{}'{}", letter(universe.root_of(i)), step),
            };
            if to_var.insert(token.clone(), i).is_some() {
                return Err(Error::Certificate(format!("token `{token}` is ambiguous")));
            }
            to_token.push(token);
        }
        Ok(TokenMap { to_var, to_token })
    }

    pub fn variable(&self, token: &str) -> Option<usize> {
        self.to_var.get(token).copied()
    }

    pub fn token(&self, index: usize) -> &str {
        &self.to_token[index]
    }

    /// `H{...}` with tokens in lexicographic order.
    pub fn render_set(&self, set: VarSet) -> String {
        let mut tokens: Vec<&str> = set.iter().map(|i| self.token(i)).collect();
        tokens.sort_unstable();
        format!("H{{{}}}", tokens.join("."))
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn rest(&mut self) -> &'a str {
        self.skip_ws();
        &self.text[self.pos..]
    }

    /// A run of characters that can form a number.
    fn number(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        for c in self.text[start..].chars() {
            if c.is_ascii_digit() || c == '/' || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }
}

fn parse_row_text(text: &str, tokens: &TokenMap, line: usize) -> Result<(LinearExpression, Relation, Rational)> {
    let err = |m: String| Error::parse(line, m);
    let mut cur = Cursor { text, pos: 0 };
    let mut expr = LinearExpression::zero();
    let mut first = true;
    loop {
        let sign = if cur.eat("+") {
            Rational::one()
        } else if cur.eat("-") {
            -Rational::one()
        } else if first {
            Rational::one()
        } else {
            break;
        };
        first = false;
        let coeff = match cur.number() {
            Some(n) => parse_rational(n).map_err(|_| err(format!("malformed coefficient `{n}`")))?,
            None => Rational::one(),
        };
        if !cur.eat("H{") {
            return Err(err(format!("expected `H{{` at `{}`", cur.rest())));
        }
        let body_end = cur.text[cur.pos..]
            .find('}')
            .ok_or_else(|| err("unclosed `H{`".into()))?;
        let body = &cur.text[cur.pos..cur.pos + body_end];
        cur.pos += body_end + 1;
        let mut set = VarSet::EMPTY;
        for tok in body.split('.') {
            let tok = tok.trim();
            let v = tokens
                .variable(tok)
                .ok_or_else(|| err(format!("unknown token `{tok}`")))?;
            set = set.with(v);
        }
        let column = Column::entropy(set).ok_or_else(|| err("empty entropy term".into()))?;
        expr.add_term(column, &(sign * coeff));
        if matches!(cur.peek(), Some('<' | '>' | '=') | None) {
            break;
        }
    }
    let relation = if cur.eat(">=") {
        Relation::Ge
    } else if cur.eat("<=") {
        Relation::Le
    } else if cur.eat("=") {
        Relation::Eq
    } else {
        return Err(err(format!("expected a relation at `{}`", cur.rest())));
    };
    let rhs_text = cur.rest().trim();
    let rhs = parse_rational(rhs_text).map_err(|_| err(format!("malformed rational `{rhs_text}`")))?;
    Ok((expr, relation, rhs))
}

/// Parses rows of the form `TERM (± TERM)* REL RHS` each followed by a
/// `with coefficient <rational>` line.
pub fn parse_certificate(text: &str, tokens: &TokenMap) -> Result<Vec<CertRow>> {
    let mut rows = Vec::new();
    let mut pending: Option<(usize, LinearExpression, Relation, Rational)> = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("with coefficient") {
            let (_, expr, relation, rhs) = pending
                .take()
                .ok_or_else(|| Error::parse(line_no, "coefficient without a row"))?;
            let multiplier = parse_rational(rest)
                .map_err(|_| Error::parse(line_no, format!("malformed rational `{}`", rest.trim())))?;
            rows.push(CertRow { expr, relation, rhs, multiplier });
            continue;
        }
        if let Some((at, ..)) = pending {
            return Err(Error::parse(at, "missing coefficient line"));
        }
        let (expr, relation, rhs) = parse_row_text(line, tokens, line_no)?;
        pending = Some((line_no, expr, relation, rhs));
    }
    if let Some((at, ..)) = pending {
        return Err(Error::parse(at, "missing coefficient line"));
    }
    Ok(rows)
}

impl Certificate {
    /// Text in the parser's grammar.
    pub fn to_text(&self, tokens: &TokenMap) -> Result<String> {
        let mut out = String::new();
        for row in &self.rows {
            let mut line = String::new();
            for (k, (c, a)) in row.expr.terms().iter().enumerate() {
                let set = c
                    .as_entropy()
                    .ok_or_else(|| Error::Certificate("auxiliary columns have no token".into()))?;
                let sign = if a.is_negative() { "-" } else { "+" };
                let mag = a.abs();
                if k > 0 || a.is_negative() {
                    line.push_str(sign);
                    line.push(' ');
                }
                if !mag.is_one() {
                    let _ = write!(line, "{} ", format_fraction(&mag));
                }
                line.push_str(&tokens.render_set(set));
                line.push(' ');
            }
            let _ = writeln!(out, "{}{} {}", line, row.relation.symbol(), format_fraction(&row.rhs));
            let _ = writeln!(out, "with coefficient {}", format_fraction(&row.multiplier));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Which constraint family justifies a certificate row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Elemental { scope: VarSet },
    Dependence { vertex: usize },
    CopyMatch { step: usize },
    CopyIndep { step: usize },
    Symmetry,
    VertexBound { vertex: usize },
}

enum Match {
    Yes(RowKind),
    Near(String),
    No,
}

/// Precomputed data for classifying rows against one problem.
pub struct Classifier<'a> {
    problem: &'a GuessProblem,
    scopes: Vec<VarSet>,
    indep: Vec<(LinearExpression, usize)>,
    steps: Vec<StepMaps>,
}

struct StepMaps {
    step: usize,
    xz: VarSet,
    z: VarSet,
    image: Vec<(usize, usize)>,
}

impl StepMaps {
    fn new(s: &CopyStep, universe: &VariableUniverse) -> Self {
        let image = s
            .z_order
            .iter()
            .map(|&z| (z, universe.copy_of(z, s.step).expect("copy exists")))
            .collect();
        StepMaps { step: s.step, xz: s.x_vars.union(s.z_vars), z: s.z_vars, image }
    }

    fn moved(&self, set: VarSet) -> VarSet {
        self.image
            .iter()
            .fold(set, |acc, &(z, c)| if acc.contains(z) { acc.without(z).with(c) } else { acc })
    }

    fn matches(&self, original: VarSet, copy: VarSet) -> bool {
        original.is_subset(self.xz)
            && !original.intersection(self.z).is_empty()
            && self.moved(original) == copy
    }
}

/// Sets with coefficient +1 and -1; `None` if any other coefficient occurs.
fn unit_split(expr: &LinearExpression) -> Option<(Vec<VarSet>, Vec<VarSet>)> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let one = Rational::one();
    for (c, a) in expr.terms() {
        let set = c.as_entropy()?;
        if *a == one {
            pos.push(set);
        } else if *a == -one.clone() {
            neg.push(set);
        } else {
            return None;
        }
    }
    Some((pos, neg))
}

impl<'a> Classifier<'a> {
    pub fn new(problem: &'a GuessProblem) -> Self {
        let universe = problem.universe();
        let steps: Vec<StepMaps> = problem.plan.steps().map(|s| StepMaps::new(s, universe)).collect();
        let indep = problem
            .plan
            .constraints
            .iter()
            .filter_map(|c| match c.tag {
                crate::entropy::Tag::CopyIndep { step } => Some((c.expr.clone(), step)),
                _ => None,
            })
            .collect();
        Classifier { problem, scopes: problem.scopes(), indep, steps }
    }

    fn within_scope(&self, set: VarSet) -> Option<VarSet> {
        self.scopes.iter().copied().find(|s| set.is_subset(*s))
    }

    fn vertex_bound(&self, row: &CertRow) -> Match {
        if row.relation != Relation::Le {
            return Match::No;
        }
        match unit_split(&row.expr) {
            Some((pos, neg)) if pos.len() == 1 && neg.is_empty() && pos[0].len() == 1 => {
                let v = pos[0].iter().next().expect("singleton");
                if v < self.problem.graph.vertex_count() && row.rhs.is_one() {
                    Match::Yes(RowKind::VertexBound { vertex: v })
                } else {
                    Match::Near("bound row must be h_v <= 1 for a base vertex".into())
                }
            }
            _ => Match::No,
        }
    }

    fn elemental(&self, row: &CertRow) -> Match {
        if row.relation != Relation::Ge || !row.rhs.is_zero() {
            return Match::No;
        }
        let Some((pos, neg)) = unit_split(&row.expr) else { return Match::No };
        // I(i:j|K): +h_{iK} +h_{jK} -h_{ijK} [-h_K]
        if pos.len() == 2 && (neg.len() == 1 || neg.len() == 2) {
            let k = pos[0].intersection(pos[1]);
            let a = pos[0].difference(k);
            let b = pos[1].difference(k);
            let whole = pos[0].union(pos[1]);
            let expected_neg: Vec<VarSet> = if k.is_empty() { vec![whole] } else {
                let mut v = vec![k, whole];
                v.sort();
                v
            };
            let mut got = neg.clone();
            got.sort();
            if a.len() != 1 || b.len() != 1 || got != expected_neg {
                return Match::Near("four-term row is not a conditional mutual information".into());
            }
            return match self.within_scope(whole) {
                Some(scope) => Match::Yes(RowKind::Elemental { scope }),
                None => Match::Near(format!(
                    "mutual information over {} lies in no scope",
                    self.problem.universe().set_display(whole)
                )),
            };
        }
        // H(i | scope - i): +h_scope -h_{scope - i}
        if pos.len() == 1 && neg.len() <= 1 {
            let big = pos[0];
            let small = neg.first().copied().unwrap_or(VarSet::EMPTY);
            if small.is_subset(big) && big.difference(small).len() == 1 {
                return if self.scopes.contains(&big) {
                    Match::Yes(RowKind::Elemental { scope: big })
                } else {
                    Match::Near(format!(
                        "conditional entropy over {} is not a whole scope",
                        self.problem.universe().set_display(big)
                    ))
                };
            }
        }
        Match::No
    }

    fn dependence(&self, row: &CertRow) -> Match {
        if !row.rhs.is_zero() || row.relation == Relation::Le {
            return Match::No;
        }
        let Some((pos, neg)) = unit_split(&row.expr) else { return Match::No };
        // h_S - h_{S+v} >= 0, or an equality of either orientation.
        let eq = row.relation == Relation::Eq;
        let (small, big) = match (pos.as_slice(), neg.as_slice()) {
            ([s], [b]) if s.is_subset(*b) => (*s, *b),
            ([b], [s]) if eq && s.is_subset(*b) => (*s, *b),
            ([], [b]) => (VarSet::EMPTY, *b),
            ([b], []) if eq => (VarSet::EMPTY, *b),
            _ => return Match::No,
        };
        if !small.is_subset(big) || big.difference(small).len() != 1 {
            return Match::No;
        }
        let v = big.difference(small).iter().next().expect("one vertex");
        if v >= self.problem.graph.vertex_count() {
            return Match::Near("dependence row adds a copy variable".into());
        }
        let seen = self.problem.graph.in_neighbors(v);
        if !seen.is_subset(small) {
            return Match::Near(format!(
                "vertex {} needs its in-neighbours {} in the condition",
                v + 1,
                self.problem.universe().set_display(seen)
            ));
        }
        if self.within_scope(big).is_none() {
            return Match::Near("dependence row lies in no scope".into());
        }
        Match::Yes(RowKind::Dependence { vertex: v })
    }

    fn two_set_equality(&self, row: &CertRow) -> Option<(VarSet, VarSet)> {
        if row.relation != Relation::Eq || !row.rhs.is_zero() {
            return None;
        }
        match unit_split(&row.expr)? {
            (pos, neg) if pos.len() == 1 && neg.len() == 1 => Some((pos[0], neg[0])),
            _ => None,
        }
    }

    fn copy_match(&self, row: &CertRow) -> Match {
        let Some((a, b)) = self.two_set_equality(row) else { return Match::No };
        let base = self.problem.universe().base_set();
        if a.is_subset(base) && b.is_subset(base) {
            return Match::No;
        }
        for s in &self.steps {
            if s.matches(a, b) || s.matches(b, a) {
                return Match::Yes(RowKind::CopyMatch { step: s.step });
            }
        }
        Match::Near("two-set equality with copies matches no copy step".into())
    }

    fn copy_indep(&self, row: &CertRow) -> Match {
        if row.relation != Relation::Eq || !row.rhs.is_zero() {
            return Match::No;
        }
        let negated = row.expr.negated();
        for (e, step) in &self.indep {
            if *e == row.expr || *e == negated {
                return Match::Yes(RowKind::CopyIndep { step: *step });
            }
        }
        Match::No
    }

    fn symmetry(&self, row: &CertRow) -> Match {
        let Some((a, b)) = self.two_set_equality(row) else { return Match::No };
        let base = self.problem.universe().base_set();
        if !a.is_subset(base) || !b.is_subset(base) {
            return Match::No;
        }
        if self.problem.group.maps_set_to(a, b) {
            Match::Yes(RowKind::Symmetry)
        } else {
            Match::Near(format!(
                "no group element maps {} to {}",
                self.problem.universe().set_display(a),
                self.problem.universe().set_display(b)
            ))
        }
    }

    pub fn classify(&self, row: &CertRow) -> Result<RowKind> {
        let checks: [fn(&Self, &CertRow) -> Match; 6] = [
            Self::vertex_bound,
            Self::elemental,
            Self::dependence,
            Self::copy_match,
            Self::copy_indep,
            Self::symmetry,
        ];
        let mut nearest = None;
        for check in checks {
            match check(self, row) {
                Match::Yes(kind) => return Ok(kind),
                Match::Near(reason) => {
                    nearest.get_or_insert(reason);
                }
                Match::No => {}
            }
        }
        Err(Error::Certificate(format!(
            "row `{} {} {}` is unclassifiable: {}",
            row.expr.display(self.problem.universe()),
            row.relation.symbol(),
            format_fraction(&row.rhs),
            nearest.unwrap_or_else(|| "matches no constraint family".into())
        )))
    }
}

pub fn classify_row(row: &CertRow, problem: &GuessProblem) -> Result<RowKind> {
    Classifier::new(problem).classify(row)
}

fn sign_ok(sense: Sense, relation: Relation, multiplier: &Rational) -> bool {
    match (sense, relation) {
        (_, Relation::Eq) => true,
        (Sense::Maximize, Relation::Ge) | (Sense::Minimize, Relation::Le) => !multiplier.is_positive(),
        _ => !multiplier.is_negative(),
    }
}

/// Aggregates `rows` and compares against `objective`; returns `Σ λ·rhs`.
fn aggregate(
    rows: &[CertRow],
    objective: &LinearExpression,
    sense: Sense,
    universe: &VariableUniverse,
) -> Result<Rational> {
    let mut total = LinearExpression::zero();
    let mut bound = Rational::zero();
    for (k, row) in rows.iter().enumerate() {
        if !sign_ok(sense, row.relation, &row.multiplier) {
            return Err(Error::Certificate(format!(
                "row {} has multiplier {} of inadmissible sign for `{}`",
                k + 1,
                format_fraction(&row.multiplier),
                row.relation.symbol()
            )));
        }
        total.add_scaled(&row.expr, &row.multiplier);
        bound += &row.multiplier * &row.rhs;
    }
    if total != *objective {
        let residual = total - objective;
        let shown: Vec<String> = residual
            .terms()
            .iter()
            .take(8)
            .map(|(c, a)| {
                let name = match c.as_entropy() {
                    Some(s) => universe.set_display(s),
                    None => format!("{c:?}"),
                };
                format!("{} at {name}", format_fraction(a))
            })
            .collect();
        return Err(Error::Certificate(format!(
            "aggregate differs from the objective in {} coordinates: {}",
            residual.len(),
            shown.join(", ")
        )));
    }
    Ok(bound)
}

/// Classifies every row, checks signs and the aggregate, and returns the
/// proven upper bound on `h_{all base}`.
pub fn verify(rows: &[CertRow], problem: &GuessProblem) -> Result<Rational> {
    let classifier = Classifier::new(problem);
    for (k, row) in rows.iter().enumerate() {
        classifier
            .classify(row)
            .map_err(|e| Error::Certificate(format!("row {}: {e}", k + 1)))?;
    }
    let universe = problem.universe();
    let objective = LinearExpression::entropy(universe.base_set());
    aggregate(rows, &objective, Sense::Maximize, universe)
}

/// Weak duality alone, for rows taken from a model: signs per `sense` and
/// the aggregate equal to `objective`. Returns the proven bound.
pub fn verify_weak_duality(
    certificate: &Certificate,
    objective: &LinearExpression,
    sense: Sense,
) -> Result<Rational> {
    aggregate(&certificate.rows, objective, sense, &certificate.universe)
}
