//! Exhaustive search over deterministic guessing strategies.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::SightGraph;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_GUARD: u64 = 100_000_000;

/// Best strategy found: `max_winning` colourings are all guessed right.
/// The guessing number is `log_s(max_winning)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub max_winning: u64,
    pub colors: u64,
}

impl BruteForce {
    pub fn gn_f64(&self) -> f64 {
        (self.max_winning as f64).ln() / (self.colors as f64).ln()
    }

    /// `log_s(max_winning) <= bound`, decided exactly.
    pub fn gn_at_most(&self, bound: &Rational) -> bool {
        log_at_most(self.max_winning, self.colors, bound)
    }

    /// `log_s(max_winning) == bound`, decided exactly.
    pub fn gn_equals(&self, bound: &Rational) -> bool {
        log_at_most(self.max_winning, self.colors, bound) && !log_below(self.max_winning, self.colors, bound)
    }
}

/// `count^q <= s^p` for `bound = p/q`.
fn log_at_most(count: u64, s: u64, bound: &Rational) -> bool {
    compare(count, s, bound) != std::cmp::Ordering::Greater
}

fn log_below(count: u64, s: u64, bound: &Rational) -> bool {
    compare(count, s, bound) == std::cmp::Ordering::Less
}

fn compare(count: u64, s: u64, bound: &Rational) -> std::cmp::Ordering {
    if bound.is_negative() {
        return std::cmp::Ordering::Greater;
    }
    let p = bound.numer().to_usize().expect("bound numerator fits");
    let q = bound.denom().to_usize().expect("bound denominator fits");
    let lhs = num_traits::pow(BigInt::from(count), q);
    let rhs = num_traits::pow(BigInt::from(s), p);
    lhs.cmp(&rhs)
}

/// Number of strategy tuples: the product over vertices of `s^(s^indeg)`,
/// or `None` past `limit`.
pub fn strategy_count(graph: &SightGraph, s: u64, limit: u64) -> Option<u64> {
    let mut total: u64 = 1;
    for v in 0..graph.vertex_count() {
        let views = s.checked_pow(graph.in_neighbors(v).len() as u32)?;
        let funcs = s.checked_pow(u32::try_from(views).ok()?)?;
        total = total.checked_mul(funcs)?;
        if total > limit {
            return None;
        }
    }
    Some(total)
}

/// Tries every strategy tuple against every colouring.
pub fn brute_force_guessing_number(graph: &SightGraph, s: u64, guard: u64) -> Result<BruteForce> {
    if s < 2 {
        return Err(Error::InvalidGraph("at least two colours are needed".into()));
    }
    let n = graph.vertex_count();
    if strategy_count(graph, s, guard).is_none() {
        return Err(Error::GuardExceeded(format!(
            "{n} vertices with {s} colours (limit {guard})"
        )));
    }
    let configs = s.pow(n as u32) as usize;
    let sees: Vec<Vec<usize>> = (0..n).map(|v| graph.in_neighbors(v).iter().collect()).collect();
    let colors = s as usize;
    // Colour of vertex v in configuration c, and the view index of v.
    let digit = |c: usize, v: usize| (c / colors.pow(v as u32)) % colors;
    let views: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            (0..configs)
                .map(|c| sees[v].iter().rev().fold(0, |acc, &u| acc * colors + digit(c, u)))
                .collect()
        })
        .collect();
    let truth: Vec<Vec<u8>> = (0..n)
        .map(|v| (0..configs).map(|c| digit(c, v) as u8).collect())
        .collect();
    let mut tables: Vec<Vec<u8>> = sees.iter().map(|s| vec![0u8; colors.pow(s.len() as u32)]).collect();
    let mut best = 0u64;
    loop {
        let wins = (0..configs)
            .filter(|&c| (0..n).all(|v| tables[v][views[v][c]] == truth[v][c]))
            .count() as u64;
        best = best.max(wins);
        // Odometer over all table entries.
        let mut advanced = false;
        'outer: for table in tables.iter_mut() {
            for entry in table.iter_mut() {
                if (*entry as usize) + 1 < colors {
                    *entry += 1;
                    advanced = true;
                    break 'outer;
                }
                *entry = 0;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(BruteForce { max_winning: best, colors: s })
}
