//! Bundled access structures and sight graphs.

use crate::error::{Error, Result};
use crate::guessing::GuessProblem;
use crate::problem_file::{parse_problem_file, Problem, ProblemFile};
use crate::secret_sharing::RatioProblem;

macro_rules! entry {
    ($name:literal, $file:literal) => {
        ($name, include_str!(concat!("../catalog/", $file)))
    };
}

/// Name and file text of every entry, structures first.
pub const ENTRIES: &[(&str, &str)] = &[
    entry!("V", "V.problem"),
    entry!("A", "A.problem"),
    entry!("A*", "Astar.problem"),
    entry!("F", "F.problem"),
    entry!("F*", "Fstar.problem"),
    entry!("Fhat", "Fhat.problem"),
    entry!("Q", "Q.problem"),
    entry!("Q*", "Qstar.problem"),
    entry!("C5", "C5.problem"),
    entry!("K2", "K2.problem"),
    entry!("K3", "K3.problem"),
    entry!("R", "R.problem"),
    entry!("Rminus", "Rminus.problem"),
    entry!("RS", "RS.problem"),
    entry!("RL", "RL.problem"),
];

/// `Astar` and `Qstar` are accepted as spellings of `A*` and `Q*`.
fn canonical(name: &str) -> &str {
    match name {
        "Astar" => "A*",
        "Fstar" => "F*",
        "Qstar" => "Q*",
        "R-" | "R^-" => "Rminus",
        other => other,
    }
}

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

pub fn catalog_text(name: &str) -> Result<&'static str> {
    let name = canonical(name);
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownCatalog(name.to_string()))
}

pub fn catalog_file(name: &str) -> Result<ProblemFile> {
    parse_problem_file(catalog_text(name)?)
}

pub fn catalog_problem(name: &str) -> Result<Problem> {
    catalog_file(name)?.build()
}

pub fn catalog_structure(name: &str) -> Result<RatioProblem> {
    match catalog_problem(name)? {
        Problem::Ratio(p) => Ok(p),
        Problem::Guess(_) => Err(Error::UnknownCatalog(format!("{name} is a graph"))),
    }
}

pub fn catalog_graph(name: &str) -> Result<GuessProblem> {
    match catalog_problem(name)? {
        Problem::Guess(p) => Ok(p),
        Problem::Ratio(_) => Err(Error::UnknownCatalog(format!("{name} is an access structure"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads_and_round_trips() {
        for (name, text) in ENTRIES {
            let pf = parse_problem_file(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(pf.name, *name);
            assert_eq!(pf.to_text(), *text, "{name} is not in canonical form");
            let p = pf.build().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(ProblemFile::from_problem(&p).build().unwrap(), p, "{name}");
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(catalog_problem("nope"), Err(Error::UnknownCatalog(_))));
        assert!(catalog_graph("A").is_err());
        assert_eq!(catalog_structure("Qstar").unwrap().name, "Q*");
    }
}
