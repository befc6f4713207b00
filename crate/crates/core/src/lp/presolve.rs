//! Elimination of equality rows before the simplex.
//!
//! Each equality picks its largest column as pivot and is kept fully reduced
//! against the others, so `x_p + Σ d_pj x_j = b_p` holds with no pivot on the
//! right. `combo` records which original equalities were combined into each
//! definition, which is enough to recover their dual multipliers later.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use super::sparse::{axpy, get, scale, SparseVec};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Definition {
    /// Full reduced row including the pivot entry (coefficient 1).
    pub row: SparseVec,
    pub rhs: Rational,
    /// Coefficients over original equality indices.
    pub combo: SparseVec,
}

#[derive(Debug, Default)]
pub struct Elimination {
    pub defs: BTreeMap<usize, Definition>,
    /// Column -> pivots of definitions whose row mentions it off-pivot.
    occurs: HashMap<usize, BTreeSet<usize>>,
}

/// Result of adding one equality.
pub enum Added {
    Pivot,
    Redundant,
    /// The row reduced to `0 = rhs` with `rhs != 0`; carries its combo.
    Inconsistent(SparseVec),
}

impl Elimination {
    pub fn is_pivot(&self, col: usize) -> bool {
        self.defs.contains_key(&col)
    }

    /// Substitutes every pivot in `row` by its definition; returns the
    /// adjusted rhs change and the combination of definitions used.
    pub fn reduce(&self, row: &mut SparseVec) -> (Rational, Vec<(usize, Rational)>) {
        let hits: Vec<(usize, Rational)> = row
            .iter()
            .filter(|(c, _)| self.defs.contains_key(c))
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        let mut shift = Rational::zero();
        for (p, coeff) in &hits {
            let def = &self.defs[p];
            axpy(row, &def.row, &-coeff);
            shift += coeff * &def.rhs;
        }
        (shift, hits)
    }

    pub fn add(&mut self, mut row: SparseVec, rhs: Rational, index: usize) -> Added {
        let mut combo: SparseVec = vec![(index, Rational::one())];
        let (shift, hits) = self.reduce(&mut row);
        let mut rhs = rhs - shift;
        for (p, coeff) in &hits {
            axpy(&mut combo, &self.defs[p].combo, &-coeff);
        }
        let Some((pivot, lead)) = row.last().cloned() else {
            return if rhs.is_zero() { Added::Redundant } else { Added::Inconsistent(combo) };
        };
        if !lead.is_one() {
            let inv = lead.recip();
            scale(&mut row, &inv);
            scale(&mut combo, &inv);
            rhs *= &inv;
        }
        // Eliminate the new pivot from existing definitions.
        if let Some(users) = self.occurs.remove(&pivot) {
            for q in users {
                let def = self.defs.get_mut(&q).expect("occurrence index is consistent");
                let coeff = get(&def.row, pivot).cloned().unwrap_or_default();
                if coeff.is_zero() {
                    continue;
                }
                let before: Vec<usize> = def.row.iter().map(|(c, _)| *c).collect();
                axpy(&mut def.row, &row, &-&coeff);
                def.rhs -= &coeff * &rhs;
                axpy(&mut def.combo, &combo, &-&coeff);
                let after: BTreeSet<usize> = def.row.iter().map(|(c, _)| *c).collect();
                for c in before {
                    if c != q && c != pivot && !after.contains(&c) {
                        if let Some(s) = self.occurs.get_mut(&c) {
                            s.remove(&q);
                        }
                    }
                }
                for &c in &after {
                    if c != q {
                        self.occurs.entry(c).or_default().insert(q);
                    }
                }
            }
        }
        for (c, _) in &row {
            if *c != pivot {
                self.occurs.entry(*c).or_default().insert(pivot);
            }
        }
        self.defs.insert(pivot, Definition { row, rhs, combo });
        Added::Pivot
    }

    /// Value of every pivot column given the free-column values.
    pub fn back_substitute(&self, values: &mut [Rational]) {
        for (p, def) in &self.defs {
            let mut v = def.rhs.clone();
            for (c, a) in &def.row {
                if c != p {
                    v -= a * &values[*c];
                }
            }
            values[*p] = v;
        }
    }

    /// Expresses `residual`, a combination of the definitions, as multipliers
    /// on the original equalities.
    pub fn equality_multipliers(&self, residual: &[Rational], count: usize) -> Vec<Rational> {
        let mut mu = vec![Rational::zero(); count];
        for (p, def) in &self.defs {
            let r = &residual[*p];
            if r.is_zero() {
                continue;
            }
            for (f, w) in &def.combo {
                mu[*f] += r * w;
            }
        }
        mu
    }
}

/// Scales `row` so its first coefficient has absolute value 1; returns the
/// positive divisor used.
pub fn normalize(row: &mut SparseVec) -> Rational {
    let s = row.first().map(|(_, v)| v.abs()).unwrap_or_else(Rational::one);
    if !s.is_one() {
        scale(row, &s.recip());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn definitions_stay_reduced() {
        let mut el = Elimination::default();
        // x0 - x1 = 0, then x1 - x2 = 0: the first definition must drop x1.
        assert!(matches!(el.add(vec![(0, int(1)), (1, int(-1))], int(0), 0), Added::Pivot));
        assert!(matches!(el.add(vec![(1, int(1)), (2, int(-1))], int(0), 1), Added::Pivot));
        let d1 = &el.defs[&1];
        assert_eq!(d1.row, vec![(0, int(-1)), (1, int(1))]);
        let mut vals = vec![int(3), int(0), int(0)];
        el.back_substitute(&mut vals);
        assert_eq!(vals, vec![int(3), int(3), int(3)]);
        // x2 - x0 = 1 contradicts the chain and names both rows.
        match el.add(vec![(0, int(-1)), (2, int(1))], int(1), 2) {
            Added::Inconsistent(combo) => assert_eq!(combo.len(), 3),
            _ => panic!("expected inconsistency"),
        }
        assert!(matches!(el.add(vec![(0, int(2)), (2, int(-2))], int(0), 3), Added::Redundant));
    }
}
