//! Sorted sparse vectors over `usize` indices.

use num_traits::Zero;

use crate::rational::Rational;

pub type SparseVec = Vec<(usize, Rational)>;

/// `target += factor * other`.
pub fn axpy(target: &mut SparseVec, other: &[(usize, Rational)], factor: &Rational) {
    if factor.is_zero() || other.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(target.len() + other.len());
    let mut a = std::mem::take(target).into_iter().peekable();
    let mut b = other.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some((ia, _)), Some((ib, _))) => {
                if ia < ib {
                    out.push(a.next().unwrap());
                } else if ib < ia {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, v * factor));
                } else {
                    let (i, mut v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    v += w * factor;
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                }
            }
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => {
                let (i, v) = b.next().unwrap();
                out.push((*i, v * factor));
            }
            (None, None) => break,
        }
    }
    *target = out;
}

pub fn get(v: &[(usize, Rational)], index: usize) -> Option<&Rational> {
    v.binary_search_by(|(i, _)| i.cmp(&index))
        .ok()
        .map(|k| &v[k].1)
}

pub fn scale(v: &mut SparseVec, factor: &Rational) {
    for (_, x) in v.iter_mut() {
        *x *= factor;
    }
}
