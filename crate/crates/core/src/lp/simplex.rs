//! Exact revised simplex for `min c·x  s.t.  A x = b, x >= 0`.
//!
//! Rows are scaled to integers and the engine keeps `det(B)·B⁻¹` as an
//! integer matrix, updated fraction-free: every division in a pivot is
//! exact, so entries stay bounded by the basis determinant. Entering
//! columns follow Dantzig's rule. Ratio-test ties are broken by the ratio
//! the same rows would have under a fixed generic right-hand-side
//! perturbation; a very long degenerate run switches to Bland's rule until
//! the objective strictly improves again.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseVec;
use crate::error::{Error, Result};
use crate::rational::{denominator_lcm, Rational};

const DEGENERATE_RUN: usize = 5000;

/// Scale of the right-hand side relative to the tie-break perturbation.
const PERTURB_SHIFT: u32 = 50;

pub struct StandardForm {
    pub rows: usize,
    /// Sparse columns of `A`, entries indexed by row.
    pub cols: Vec<SparseVec>,
    pub cost: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

#[derive(Debug)]
pub enum Outcome {
    Optimal {
        x: Vec<Rational>,
        /// Row multipliers `y` with `c - Aᵀy >= 0`.
        y: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    /// A direction `d >= 0` with `A d = 0` and `c·d < 0`.
    Unbounded { ray: SparseVec },
}

type IntCol = Vec<(usize, BigInt)>;

struct Engine {
    m: usize,
    n: usize,
    /// Integer columns; `n..n+m` are the artificial unit columns.
    cols: Vec<IntCol>,
    /// Row `r` of the integer system is row `r` of `A` times `scale[r]`.
    scale: Vec<BigInt>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// `det·B⁻¹`, dense, with `det > 0`.
    inv: Vec<Vec<BigInt>>,
    det: BigInt,
    /// `det·B⁻¹ b`.
    xb: Vec<BigInt>,
    /// `det·B⁻¹ (2^PERTURB_SHIFT·b + e)` for a fixed generic `e > 0`.
    xp: Vec<BigInt>,
    pivots: u64,
    budget: u64,
}

enum Step {
    Optimal,
    Unbounded(usize, Vec<BigInt>),
}

/// Distinct values in `[2²⁰, 2²¹)` spread by the golden-ratio sequence.
fn perturbation(i: usize) -> BigInt {
    const SCALE: u64 = 1 << 20;
    let spread = ((i as u64 + 1).wrapping_mul(648_056)) % SCALE;
    BigInt::from(SCALE + spread)
}

fn to_int(value: &Rational, scale: &BigInt) -> BigInt {
    let scaled = value * Rational::from_integer(scale.clone());
    debug_assert!(scaled.is_integer());
    scaled.to_integer()
}

impl Engine {
    fn new(sf: &StandardForm, budget: u64) -> Self {
        let m = sf.rows;
        let n = sf.cols.len();
        let mut by_row: Vec<Vec<&Rational>> = vec![Vec::new(); m];
        for col in &sf.cols {
            for (r, v) in col {
                by_row[*r].push(v);
            }
        }
        let scale: Vec<BigInt> = by_row
            .iter()
            .zip(&sf.rhs)
            .map(|(entries, b)| {
                let l = denominator_lcm(entries.iter().copied().chain(std::iter::once(b)));
                if b.is_negative() {
                    -l
                } else {
                    l
                }
            })
            .collect();
        let mut cols: Vec<IntCol> = sf
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, to_int(v, &scale[*r]))).collect())
            .collect();
        cols.extend((0..m).map(|i| vec![(i, BigInt::one())]));
        let xb: Vec<BigInt> = sf.rhs.iter().zip(&scale).map(|(b, s)| to_int(b, s)).collect();
        let xp: Vec<BigInt> = xb
            .iter()
            .enumerate()
            .map(|(i, b)| (b << PERTURB_SHIFT) + perturbation(i))
            .collect();
        let inv = (0..m)
            .map(|i| {
                let mut row = vec![BigInt::zero(); m];
                row[i] = BigInt::one();
                row
            })
            .collect();
        let mut in_basis = vec![false; n + m];
        for flag in &mut in_basis[n..] {
            *flag = true;
        }
        Engine {
            m,
            n,
            cols,
            scale,
            basis: (n..n + m).collect(),
            in_basis,
            inv,
            det: BigInt::one(),
            xb,
            xp,
            pivots: 0,
            budget,
        }
    }

    /// `π·det` for integer basic costs.
    fn multipliers(&self, cost: &[BigInt]) -> Vec<BigInt> {
        let mut pi = vec![BigInt::zero(); self.m];
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, entry) in self.inv[i].iter().enumerate() {
                if !entry.is_zero() {
                    pi[r] += cb * entry;
                }
            }
        }
        pi
    }

    /// `det·B⁻¹ a_j`.
    fn ftran(&self, j: usize) -> Vec<BigInt> {
        let col = &self.cols[j];
        self.inv
            .iter()
            .map(|row| {
                col.iter().fold(BigInt::zero(), |acc, (r, v)| {
                    let b = &row[*r];
                    if b.is_zero() {
                        acc
                    } else {
                        acc + b * v
                    }
                })
            })
            .collect()
    }

    /// `xp_i / u_i < xp_l / u_l`, falling back to basis order; both `u`
    /// entries are positive.
    fn perturbed_less(&self, i: usize, l: usize, u: &[BigInt]) -> bool {
        let lhs = &self.xp[i] * &u[l];
        let rhs = &self.xp[l] * &u[i];
        if lhs == rhs {
            self.basis[i] < self.basis[l]
        } else {
            lhs < rhs
        }
    }

    fn pivot(&mut self, row: usize, entering: usize, u: &[BigInt]) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.budget {
            return Err(Error::PivotBudget(self.budget));
        }
        let p = u[row].clone();
        let same_det = p == self.det;
        let pivot_row = self.inv[row].clone();
        let (xr, pr) = (self.xb[row].clone(), self.xp[row].clone());
        for (i, ui) in u.iter().enumerate() {
            if i == row || (same_det && ui.is_zero()) {
                continue;
            }
            let target = &mut self.inv[i];
            if ui.is_zero() {
                for v in target.iter_mut().filter(|v| !v.is_zero()) {
                    *v = exact_div(&p * &*v, &self.det);
                }
            } else {
                for k in 0..self.m {
                    let pk = &pivot_row[k];
                    let v = &target[k];
                    if v.is_zero() && pk.is_zero() {
                        continue;
                    }
                    let mut t = &p * v;
                    if !pk.is_zero() {
                        t -= ui * pk;
                    }
                    target[k] = exact_div(t, &self.det);
                }
            }
            self.xb[i] = exact_div(&p * &self.xb[i] - ui * &xr, &self.det);
            self.xp[i] = exact_div(&p * &self.xp[i] - ui * &pr, &self.det);
        }
        self.det = p;
        if self.det.is_negative() {
            self.det = -std::mem::take(&mut self.det);
            for v in self.inv.iter_mut().flatten().chain(self.xb.iter_mut()).chain(self.xp.iter_mut()) {
                if !v.is_zero() {
                    *v = -std::mem::take(v);
                }
            }
        }
        let leaving = self.basis[row];
        self.in_basis[leaving] = false;
        self.in_basis[entering] = true;
        self.basis[row] = entering;
        Ok(())
    }

    fn run(&mut self, cost: &[BigInt], allowed: usize) -> Result<Step> {
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let pi = self.multipliers(cost);
            let mut entering: Option<(usize, BigInt)> = None;
            for (j, cj) in cost.iter().enumerate().take(allowed) {
                if self.in_basis[j] {
                    continue;
                }
                let d = self.cols[j].iter().fold(cj * &self.det, |acc, (r, v)| {
                    if pi[*r].is_zero() {
                        acc
                    } else {
                        acc - &pi[*r] * v
                    }
                });
                if d.is_negative() {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.as_ref().is_none_or(|(_, best)| d < *best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(Step::Optimal);
            };
            let u = self.ftran(q);
            let mut leave: Option<usize> = None;
            for (i, ui) in u.iter().enumerate() {
                if !ui.is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let lhs = &self.xb[i] * &u[l];
                        let rhs = &self.xb[l] * ui;
                        lhs < rhs
                            || (lhs == rhs
                                && if bland {
                                    self.basis[i] < self.basis[l]
                                } else {
                                    self.perturbed_less(i, l, &u)
                                })
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            let Some(row) = leave else {
                return Ok(Step::Unbounded(q, u));
            };
            if self.xb[row].is_zero() {
                degenerate += 1;
                if degenerate > DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
            self.pivot(row, q, &u)?;
        }
    }

    fn artificial_level(&self) -> BigInt {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(b, _)| **b >= self.n)
            .fold(BigInt::zero(), |acc, (_, x)| acc + x)
    }

    fn value(&self, v: &BigInt) -> Rational {
        Rational::new(v.clone(), self.det.clone())
    }

    fn solve(&mut self, sf: &StandardForm) -> Result<Outcome> {
        let (m, n) = (self.m, self.n);
        if self.artificial_level().is_positive() {
            let phase1: Vec<BigInt> =
                (0..n + m).map(|j| if j >= n { BigInt::one() } else { BigInt::zero() }).collect();
            match self.run(&phase1, n + m)? {
                Step::Optimal => {}
                Step::Unbounded(..) => unreachable!("phase 1 objective is bounded below"),
            }
            if self.artificial_level().is_positive() {
                return Ok(Outcome::Infeasible);
            }
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if self.basis[i] < n {
                continue;
            }
            let row = &self.inv[i];
            let candidate = (0..n).filter(|&j| !self.in_basis[j]).find(|&j| {
                !self.cols[j]
                    .iter()
                    .fold(BigInt::zero(), |acc, (r, v)| acc + &row[*r] * v)
                    .is_zero()
            });
            if let Some(j) = candidate {
                let u = self.ftran(j);
                self.pivot(i, j, &u)?;
            }
        }

        // Phase 2 over the real columns only, with costs scaled to integers.
        let gamma = denominator_lcm(&sf.cost);
        let mut phase2: Vec<BigInt> = sf.cost.iter().map(|c| to_int(c, &gamma)).collect();
        phase2.resize(n + m, BigInt::zero());
        match self.run(&phase2, n)? {
            Step::Optimal => {
                let mut x = vec![Rational::zero(); n];
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < n {
                        x[b] = self.value(&self.xb[i]);
                    }
                }
                let denom = &self.det * &gamma;
                let y: Vec<Rational> = self
                    .multipliers(&phase2)
                    .into_iter()
                    .zip(&self.scale)
                    .map(|(v, s)| Rational::new(v * s, denom.clone()))
                    .collect();
                let value = x
                    .iter()
                    .zip(&sf.cost)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, c)| acc + a * c);
                Ok(Outcome::Optimal { x, y, value })
            }
            Step::Unbounded(q, u) => {
                let mut ray: SparseVec = vec![(q, Rational::one())];
                for (i, ui) in u.iter().enumerate() {
                    let b = self.basis[i];
                    if b < n && !ui.is_zero() {
                        ray.push((b, -self.value(ui)));
                    }
                }
                ray.sort_by_key(|(j, _)| *j);
                Ok(Outcome::Unbounded { ray })
            }
        }
    }
}

fn exact_div(numerator: BigInt, det: &BigInt) -> BigInt {
    let (q, r) = numerator.div_rem(det);
    debug_assert!(r.is_zero(), "fraction-free update must divide exactly");
    q
}

/// Solves `sf` exactly, aborting after `budget` pivots.
pub fn solve_standard(sf: &StandardForm, budget: u64) -> Result<Outcome> {
    Engine::new(sf, budget).solve(sf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn small_standard_form() {
        // min -x1 - x2  s.t. x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6
        let sf = StandardForm {
            rows: 2,
            cols: vec![
                vec![(0, int(1)), (1, int(3))],
                vec![(0, int(2)), (1, int(1))],
                vec![(0, int(1))],
                vec![(1, int(1))],
            ],
            cost: vec![int(-1), int(-1), int(0), int(0)],
            rhs: vec![int(4), int(6)],
        };
        match solve_standard(&sf, 1000).unwrap() {
            Outcome::Optimal { x, y, value } => {
                assert_eq!(value, rat(-14, 5));
                assert_eq!(x[0], rat(8, 5));
                assert_eq!(x[1], rat(6, 5));
                // strong duality: b·y = value
                assert_eq!(int(4) * &y[0] + int(6) * &y[1], value);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        // x1 = -1 with x1 >= 0
        let sf = StandardForm {
            rows: 1,
            cols: vec![vec![(0, int(1))]],
            cost: vec![int(0)],
            rhs: vec![int(-1)],
        };
        assert!(matches!(solve_standard(&sf, 100).unwrap(), Outcome::Infeasible));
        // min -x1 s.t. x1 - x2 = 0
        let sf = StandardForm {
            rows: 1,
            cols: vec![vec![(0, int(1))], vec![(0, int(-1))]],
            cost: vec![int(-1), int(0)],
            rhs: vec![int(0)],
        };
        assert!(matches!(solve_standard(&sf, 100).unwrap(), Outcome::Unbounded { .. }));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // two copies of x1 + x2 = 1, min x1
        let sf = StandardForm {
            rows: 2,
            cols: vec![vec![(0, int(1)), (1, int(1))], vec![(0, int(1)), (1, int(1))]],
            cost: vec![int(1), int(0)],
            rhs: vec![int(1), int(1)],
        };
        match solve_standard(&sf, 100).unwrap() {
            Outcome::Optimal { value, .. } => assert_eq!(value, int(0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn budget_aborts() {
        let sf = StandardForm {
            rows: 1,
            cols: vec![vec![(0, int(1))]],
            cost: vec![int(1)],
            rhs: vec![int(1)],
        };
        assert_eq!(solve_standard(&sf, 0).unwrap_err(), Error::PivotBudget(0));
    }
}
