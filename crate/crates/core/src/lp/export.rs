//! LP interchange text: `obj:` line, `c<k>:` rows, free bounds.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;

use super::LPModel;
use crate::entropy::{Column, LinearExpression, VariableUniverse};
use crate::rational::{denominator_lcm, exact_decimal, format_fraction, Rational};

pub fn column_name(universe: &VariableUniverse, column: Column) -> String {
    match column {
        Column::Entropy(e) => {
            let tokens: Vec<String> = e.set().iter().map(|i| universe.lp_token(i)).collect();
            format!("h_{}", tokens.join("_"))
        }
        Column::Aux(0) => "x".to_string(),
        Column::Aux(k) => format!("x{k}"),
    }
}

type Names = HashMap<Column, String>;

fn name_of<'a>(names: &'a Names, universe: &VariableUniverse, column: Column) -> Cow<'a, str> {
    match names.get(&column) {
        Some(n) => Cow::Borrowed(n),
        None => Cow::Owned(column_name(universe, column)),
    }
}

fn magnitude(a: &Rational) -> String {
    if a.is_integer() {
        a.numer().abs().to_string()
    } else {
        exact_decimal(&a.abs()).expect("scaled coefficients are exact")
    }
}

fn render_terms(out: &mut String, names: &Names, universe: &VariableUniverse, terms: &[(Column, Rational)]) {
    for (k, (c, a)) in terms.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let sign = if a.is_negative() { '-' } else { '+' };
        let _ = write!(out, "{sign} {} {}", magnitude(a), name_of(names, universe, *c));
    }
}

/// Scales `terms` and `rhs` to exact decimals when needed; returns the factor.
fn exact_scaling(terms: &[(Column, Rational)], rhs: Option<&Rational>) -> Option<BigInt> {
    let exact = |a: &Rational| a.is_integer() || exact_decimal(a).is_some();
    let all_exact = terms.iter().all(|(_, a)| exact(a)) && rhs.is_none_or(exact);
    if all_exact {
        return None;
    }
    Some(denominator_lcm(terms.iter().map(|(_, a)| a).chain(rhs)))
}

fn fraction_text(universe: &VariableUniverse, expr: &LinearExpression) -> String {
    expr.terms()
        .iter()
        .map(|(c, a)| format!("{} {}", format_fraction(a), column_name(universe, *c)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Deterministic export of `model`.
pub fn export_lp(model: &LPModel) -> String {
    let u = model.universe();
    let names: Names = model.columns().iter().map(|c| (*c, column_name(u, *c))).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ entropy LP: {} columns, {} rows",
        model.columns().len(),
        model.rows().len()
    );
    let objective = model.objective();
    let mut obj_terms = objective.terms().to_vec();
    if let Some(l) = exact_scaling(&obj_terms, None) {
        let _ = writeln!(
            out,
            "\\ obj scaled by {l} from: {}",
            fraction_text(u, objective)
        );
        let f = Rational::from_integer(l);
        for (_, a) in obj_terms.iter_mut() {
            *a = &*a * &f;
        }
    }
    let _ = writeln!(out, "{}", model.sense().keyword());
    out.push_str(" obj: ");
    render_terms(&mut out, &names, u, &obj_terms);
    out.push('\n');
    let _ = writeln!(out, "Subject To");
    for (k, row) in model.rows().iter().enumerate() {
        let name = format!("c{}", k + 1);
        let mut terms = row.expr.terms().to_vec();
        let mut rhs = row.rhs.clone();
        if let Some(l) = exact_scaling(&terms, Some(&rhs)) {
            let _ = writeln!(
                out,
                "\\ {name} scaled by {l} from: {} {} {}",
                fraction_text(u, &row.expr),
                row.relation.symbol(),
                format_fraction(&row.rhs)
            );
            let f = Rational::from_integer(l);
            for (_, a) in terms.iter_mut() {
                *a = &*a * &f;
            }
            rhs *= f;
        }
        let sign = if rhs.is_negative() { "-" } else { "" };
        let _ = write!(out, " {name}: ");
        render_terms(&mut out, &names, u, &terms);
        let _ = writeln!(out, " {} {sign}{}", row.relation.symbol(), magnitude(&rhs));
    }
    let _ = writeln!(out, "Bounds");
    for c in model.columns() {
        let _ = writeln!(out, " {} free", names[c]);
    }
    let _ = writeln!(out, "End");
    out
}
