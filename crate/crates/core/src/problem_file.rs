//! Line-oriented problem descriptions.
//!
//! ```text
//! kind: guessing
//! name: C5
//! vars: X1 X2 X3 X4 X5
//! edges:
//!   1 -- 2
//!   2 -> 3
//! symmetry:
//!   (12345)
//! copies:
//!   block
//!     X2' be a X3-copy of X2
//! scopes:
//!   X1 X2 X2' X3 X4 X5
//! reference:
//!   shannon 5/2
//! ```
//!
//! Secret-sharing files use `minsets:` instead of `edges:`, one minimal
//! authorized set per line, as juxtaposed digits (`1247`) or as
//! space-separated labels. Lines starting with `#` before `kind:` are kept
//! as a header; other comment and blank lines are ignored.

use std::fmt::Write as _;

use crate::copy::normalize_primes;
use crate::entropy::VarSet;
use crate::error::{Error, Result};
use crate::guessing::{graph_universe, GuessProblem, SightGraph};
use crate::perm::{closure, Permutation, PermutationGroup};
use crate::rational::{format_fraction, parse_rational, Rational};
use crate::secret_sharing::{AccessStructure, RatioProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Guessing,
    SecretSharing,
}

impl ProblemKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ProblemKind::Guessing => "guessing",
            ProblemKind::SecretSharing => "secret-sharing",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub header: Vec<String>,
    pub kind: ProblemKind,
    pub name: String,
    pub vars: Vec<String>,
    /// Participant labels `1..n` per minimal set.
    pub minsets: Vec<Vec<usize>>,
    /// 1-based vertex labels.
    pub undirected: Vec<(usize, usize)>,
    /// `(u, v)` means `v` sees `u`.
    pub directed: Vec<(usize, usize)>,
    pub symmetry: Vec<String>,
    pub copies: Vec<Vec<String>>,
    pub scopes: Option<Vec<Vec<String>>>,
    pub references: Vec<(String, Rational)>,
}

/// A built problem of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Ratio(RatioProblem),
    Guess(GuessProblem),
}

impl Problem {
    pub fn name(&self) -> &str {
        match self {
            Problem::Ratio(p) => &p.name,
            Problem::Guess(p) => &p.name,
        }
    }

    pub fn without_symmetry(&self) -> Problem {
        match self {
            Problem::Ratio(p) => Problem::Ratio(p.without_symmetry()),
            Problem::Guess(p) => Problem::Guess(p.without_symmetry()),
        }
    }

    pub fn without_copies(&self) -> Problem {
        match self {
            Problem::Ratio(p) => Problem::Ratio(p.without_copies()),
            Problem::Guess(p) => Problem::Guess(p.without_copies()),
        }
    }

    pub fn model(&self) -> Result<crate::lp::LPModel> {
        match self {
            Problem::Ratio(p) => p.model(),
            Problem::Guess(p) => p.model(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    MinSets,
    Edges,
    Symmetry,
    Copies,
    Scopes,
    Reference,
}

fn parse_label(text: &str, line: usize) -> Result<usize> {
    text.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("bad label `{text}`")))
}

fn parse_minset(text: &str, line: usize) -> Result<Vec<usize>> {
    if text.contains(char::is_whitespace) {
        text.split_whitespace().map(|t| parse_label(t, line)).collect()
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::parse(line, format!("bad label `{c}`")))
            })
            .collect()
    }
}

fn parse_edge(text: &str, line: usize) -> Result<(bool, usize, usize)> {
    let (directed, parts) = if let Some((a, b)) = text.split_once("->") {
        (true, (a, b))
    } else if let Some((a, b)) = text.split_once("--") {
        (false, (a, b))
    } else {
        return Err(Error::parse(line, format!("expected `u -- v` or `u -> v`, got `{text}`")));
    };
    Ok((directed, parse_label(parts.0.trim(), line)?, parse_label(parts.1.trim(), line)?))
}

/// Parses the text of a problem file.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile> {
    let mut header = Vec::new();
    let mut kind = None;
    let mut name = None;
    let mut vars = None;
    let mut pf = ProblemFile {
        header: Vec::new(),
        kind: ProblemKind::Guessing,
        name: String::new(),
        vars: Vec::new(),
        minsets: Vec::new(),
        undirected: Vec::new(),
        directed: Vec::new(),
        symmetry: Vec::new(),
        copies: Vec::new(),
        scopes: None,
        references: Vec::new(),
    };
    let mut section = Section::None;
    let mut seen_sections: Vec<&str> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            if kind.is_none() {
                header.push(raw.trim_end().to_string());
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let indented = raw.starts_with([' ', '\t']);
        if !indented {
            let (key, value) = trimmed
                .split_once(':')
                .ok_or_else(|| Error::parse(line, format!("expected `key:`, got `{trimmed}`")))?;
            let value = value.trim();
            let key = key.trim();
            if seen_sections.contains(&key) {
                return Err(Error::parse(line, format!("section `{key}` repeated")));
            }
            seen_sections.push(match key {
                "kind" => "kind",
                "name" => "name",
                "vars" => "vars",
                "minsets" => "minsets",
                "edges" => "edges",
                "symmetry" => "symmetry",
                "copies" => "copies",
                "scopes" => "scopes",
                "reference" => "reference",
                other => return Err(Error::parse(line, format!("unknown section `{other}`"))),
            });
            section = Section::None;
            match key {
                "kind" => {
                    kind = Some(match value {
                        "guessing" => ProblemKind::Guessing,
                        "secret-sharing" => ProblemKind::SecretSharing,
                        other => return Err(Error::parse(line, format!("unknown kind `{other}`"))),
                    })
                }
                "name" => name = Some(value.to_string()),
                "vars" => vars = Some(value.split_whitespace().map(str::to_string).collect::<Vec<_>>()),
                _ => {
                    if !value.is_empty() {
                        return Err(Error::parse(line, format!("`{key}:` takes indented lines")));
                    }
                    section = match key {
                        "minsets" => Section::MinSets,
                        "edges" => Section::Edges,
                        "symmetry" => Section::Symmetry,
                        "copies" => Section::Copies,
                        "scopes" => {
                            pf.scopes = Some(Vec::new());
                            Section::Scopes
                        }
                        _ => Section::Reference,
                    };
                }
            }
            continue;
        }
        match section {
            Section::None => {
                return Err(Error::parse(line, "indented line outside a list section"));
            }
            Section::MinSets => pf.minsets.push(parse_minset(trimmed, line)?),
            Section::Edges => {
                let (directed, u, v) = parse_edge(trimmed, line)?;
                if directed {
                    pf.directed.push((u, v));
                } else {
                    pf.undirected.push((u, v));
                }
            }
            Section::Symmetry => pf.symmetry.push(trimmed.to_string()),
            Section::Copies => {
                if trimmed == "block" {
                    pf.copies.push(Vec::new());
                } else {
                    let block = pf
                        .copies
                        .last_mut()
                        .ok_or_else(|| Error::parse(line, "recipe before the first `block`"))?;
                    block.push(normalize_primes(trimmed));
                }
            }
            Section::Scopes => {
                let names = normalize_primes(trimmed).split_whitespace().map(str::to_string).collect();
                pf.scopes.get_or_insert_with(Vec::new).push(names);
            }
            Section::Reference => {
                let (key, value) = trimmed
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(line, "expected `key value`"))?;
                let value = parse_rational(value.trim()).map_err(|e| Error::parse(line, e.to_string()))?;
                pf.references.push((key.to_string(), value));
            }
        }
    }
    pf.header = header;
    pf.kind = kind.ok_or_else(|| Error::parse(0, "missing `kind:`"))?;
    pf.name = name.ok_or_else(|| Error::parse(0, "missing `name:`"))?;
    pf.vars = vars.ok_or_else(|| Error::parse(0, "missing `vars:`"))?;
    match pf.kind {
        ProblemKind::SecretSharing if !pf.undirected.is_empty() || !pf.directed.is_empty() => {
            return Err(Error::parse(0, "`edges:` in a secret-sharing file"));
        }
        ProblemKind::Guessing if !pf.minsets.is_empty() => {
            return Err(Error::parse(0, "`minsets:` in a guessing file"));
        }
        _ => {}
    }
    Ok(pf)
}

impl ProblemFile {
    /// Canonical text; `parse_problem_file(&f.to_text())` returns `f`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        let _ = writeln!(out, "kind: {}", self.kind.keyword());
        let _ = writeln!(out, "name: {}", self.name);
        let _ = writeln!(out, "vars: {}", self.vars.join(" "));
        match self.kind {
            ProblemKind::SecretSharing => {
                out.push_str("minsets:\n");
                let wide = self.minsets.iter().flatten().any(|&l| l > 9);
                for set in &self.minsets {
                    let labels: Vec<String> = set.iter().map(|l| l.to_string()).collect();
                    let sep = if wide { " " } else { "" };
                    let _ = writeln!(out, "  {}", labels.join(sep));
                }
            }
            ProblemKind::Guessing => {
                out.push_str("edges:\n");
                for (u, v) in &self.undirected {
                    let _ = writeln!(out, "  {u} -- {v}");
                }
                for (u, v) in &self.directed {
                    let _ = writeln!(out, "  {u} -> {v}");
                }
            }
        }
        if !self.symmetry.is_empty() {
            out.push_str("symmetry:\n");
            for g in &self.symmetry {
                let _ = writeln!(out, "  {g}");
            }
        }
        if !self.copies.is_empty() {
            out.push_str("copies:\n");
            for block in &self.copies {
                out.push_str("  block\n");
                for r in block {
                    let _ = writeln!(out, "    {r}");
                }
            }
        }
        if let Some(scopes) = &self.scopes {
            out.push_str("scopes:\n");
            for s in scopes {
                let _ = writeln!(out, "  {}", s.join(" "));
            }
        }
        if !self.references.is_empty() {
            out.push_str("reference:\n");
            for (k, v) in &self.references {
                let _ = writeln!(out, "  {k} {}", format_fraction(v));
            }
        }
        out
    }

    pub fn reference(&self, key: &str) -> Option<&Rational> {
        self.references.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn group(&self, degree: usize, offset: usize) -> Result<PermutationGroup> {
        let gens = self
            .symmetry
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree, offset))
            .collect::<Result<Vec<_>>>()?;
        closure(degree, &gens)
    }

    fn check_vars(&self, expected: &[String]) -> Result<()> {
        if self.vars != expected {
            return Err(Error::parse(
                0,
                format!("`vars:` must be `{}` for this kind", expected.join(" ")),
            ));
        }
        Ok(())
    }

    /// Builds the problem, validating the group and applying copies and
    /// explicit scopes.
    pub fn build(&self) -> Result<Problem> {
        self.build_inner(true)
    }

    /// As `build` but keeps a secret-sharing group even when it is not a
    /// symmetry, so that the LP itself exposes the clash.
    pub fn build_unchecked(&self) -> Result<Problem> {
        self.build_inner(false)
    }

    fn build_inner(&self, checked: bool) -> Result<Problem> {
        match self.kind {
            ProblemKind::SecretSharing => {
                if self.vars.len() < 2 {
                    return Err(Error::parse(0, "need the secret and at least one participant"));
                }
                let n = self.vars.len() - 1;
                let expected: Vec<String> = (0..=n).map(|i| format!("S{i}")).collect();
                self.check_vars(&expected)?;
                let structure = AccessStructure::new(n, &self.minsets, false)?;
                let group = self.group(n + 1, 0)?;
                let mut p = if checked {
                    RatioProblem::new(&self.name, structure, group, &self.copies)?
                } else {
                    RatioProblem::new_unchecked(&self.name, structure, group, &self.copies)?
                };
                if let Some(scopes) = &self.scopes {
                    let sets = self.resolve_scopes(scopes, |names| p.plan.universe.varset(names))?;
                    p.plan.override_scopes(sets)?;
                }
                Ok(Problem::Ratio(p))
            }
            ProblemKind::Guessing => {
                let n = self.vars.len();
                let base = graph_universe(n)?;
                self.check_vars(&base.names_of(base.base_set()).iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
                let graph = SightGraph::from_labels(n, &self.undirected, &self.directed)?;
                let group = self.group(n, 1)?;
                let mut p = GuessProblem::new(&self.name, graph, group, &self.copies)?;
                if let Some(scopes) = &self.scopes {
                    let sets = self.resolve_scopes(scopes, |names| p.plan.universe.varset(names))?;
                    p.plan.override_scopes(sets)?;
                }
                Ok(Problem::Guess(p))
            }
        }
    }

    fn resolve_scopes(
        &self,
        scopes: &[Vec<String>],
        resolve: impl Fn(&[String]) -> Result<VarSet>,
    ) -> Result<Vec<VarSet>> {
        scopes.iter().map(|s| resolve(s)).collect()
    }

    /// Describes a built problem; scopes are written only when they differ
    /// from the per-block defaults.
    pub fn from_problem(problem: &Problem) -> ProblemFile {
        let (kind, name, universe, plan, group, offset) = match problem {
            Problem::Ratio(p) => (ProblemKind::SecretSharing, &p.name, &p.plan.universe, &p.plan, &p.group, 0),
            Problem::Guess(p) => (ProblemKind::Guessing, &p.name, &p.plan.universe, &p.plan, &p.group, 1),
        };
        let base = universe.base_set();
        let vars = universe.names_of(base).iter().map(|s| s.to_string()).collect();
        let mut pf = ProblemFile {
            header: Vec::new(),
            kind,
            name: name.clone(),
            vars,
            minsets: Vec::new(),
            undirected: Vec::new(),
            directed: Vec::new(),
            symmetry: group.generators().iter().map(|g| g.to_cycle_string(offset)).collect(),
            copies: plan.recipes.clone(),
            scopes: None,
            references: Vec::new(),
        };
        match problem {
            Problem::Ratio(p) => pf.minsets = p.structure.minimal_lists(),
            Problem::Guess(p) => {
                pf.undirected = p.graph.undirected_edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
                pf.directed = p.graph.directed_edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
            }
        }
        let defaults = crate::copy::block_scopes(&plan.blocks, base);
        let actual = plan.scopes();
        if !plan.blocks.is_empty() && actual != defaults {
            pf.scopes = Some(
                actual
                    .iter()
                    .map(|s| universe.names_of(*s).iter().map(|n| n.to_string()).collect())
                    .collect(),
            );
        }
        pf
    }
}

pub fn load_problem(text: &str) -> Result<Problem> {
    parse_problem_file(text)?.build()
}
