//! Dense two-phase primal simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Relation;

/// One constraint row over all variables.
#[derive(Clone, Debug)]
pub(crate) struct DenseRow {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

#[derive(Debug)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
    PivotLimit,
}

struct Tableau {
    /// `rows[i]` has `cols + 1` entries; the last one is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    cols: usize,
    pivots: u64,
    max_pivots: u64,
}

enum Phase {
    Optimal,
    Unbounded,
    PivotLimit,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimizes `cost` (length `cols`) over the current basis. Columns with
    /// `allowed[j] == false` never enter.
    fn optimize(&mut self, cost: &[BigRational], allowed: &[bool]) -> Phase {
        loop {
            // Reduced cost d_j = c_j - sum_i c_{B_i} a_ij; Bland: first negative.
            let entering = (0..self.cols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        d -= cb * &row[j];
                    }
                }
                d.is_negative()
            });
            let Some(c) = entering else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Phase::Unbounded;
            };
            if self.pivots >= self.max_pivots {
                return Phase::PivotLimit;
            }
            self.pivot(r, c);
        }
    }

    fn objective(&self, cost: &[BigRational]) -> BigRational {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| &cost[self.basis[i]] * &row[self.cols])
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Minimizes `objective · x` subject to `rows` and `x >= 0`.
pub(crate) fn minimize(
    num_vars: usize,
    rows: &[DenseRow],
    objective: &[BigRational],
    max_pivots: u64,
) -> (LpOutcome, u64) {
    // Column layout: originals, one slack per inequality, one artificial per
    // row that lacks a natural basic column.
    let mut normalized: Vec<(Vec<BigRational>, Relation, BigRational)> = rows
        .iter()
        .map(|r| {
            if r.rhs.is_negative() {
                let flipped = match r.relation {
                    Relation::Eq => Relation::Eq,
                    Relation::Ge => Relation::Le,
                    Relation::Le => Relation::Ge,
                };
                (r.coeffs.iter().map(|c| -c).collect(), flipped, -&r.rhs)
            } else {
                (r.coeffs.clone(), r.relation, r.rhs.clone())
            }
        })
        .collect();
    // Trivial rows: all-zero coefficients.
    let mut kept = Vec::with_capacity(normalized.len());
    for (coeffs, rel, rhs) in normalized.drain(..) {
        if coeffs.iter().all(Zero::is_zero) {
            let ok = match rel {
                Relation::Eq => rhs.is_zero(),
                Relation::Ge => !rhs.is_positive(),
                Relation::Le => true,
            };
            if !ok {
                return (LpOutcome::Infeasible, 0);
            }
        } else {
            kept.push((coeffs, rel, rhs));
        }
    }
    let m = kept.len();
    let slack_count = kept.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificial_count = kept.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let cols = num_vars + slack_count + artificial_count;
    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cols,
        pivots: 0,
        max_pivots,
    };
    let mut is_artificial = vec![false; cols];
    let mut next_slack = num_vars;
    let mut next_artificial = num_vars + slack_count;
    for (coeffs, rel, rhs) in kept {
        let mut row = vec![BigRational::zero(); cols + 1];
        row[..num_vars].clone_from_slice(&coeffs);
        row[cols] = rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = BigRational::one();
                tableau.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -BigRational::one();
                next_slack += 1;
                row[next_artificial] = BigRational::one();
                is_artificial[next_artificial] = true;
                tableau.basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                row[next_artificial] = BigRational::one();
                is_artificial[next_artificial] = true;
                tableau.basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        tableau.rows.push(row);
    }

    if artificial_count > 0 {
        let phase1_cost: Vec<BigRational> = is_artificial
            .iter()
            .map(|&a| if a { BigRational::one() } else { BigRational::zero() })
            .collect();
        let allowed = vec![true; cols];
        match tableau.optimize(&phase1_cost, &allowed) {
            Phase::PivotLimit => return (LpOutcome::PivotLimit, tableau.pivots),
            Phase::Unbounded => unreachable!("phase one objective is bounded below by zero"),
            Phase::Optimal => {}
        }
        if tableau.objective(&phase1_cost).is_positive() {
            return (LpOutcome::Infeasible, tableau.pivots);
        }
        // Drive zero-level artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < tableau.rows.len() {
            if is_artificial[tableau.basis[i]] {
                let replacement =
                    (0..cols).find(|&j| !is_artificial[j] && !tableau.rows[i][j].is_zero());
                match replacement {
                    Some(j) => {
                        tableau.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tableau.rows.remove(i);
                        tableau.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![BigRational::zero(); cols];
    cost[..num_vars].clone_from_slice(objective);
    let allowed: Vec<bool> = is_artificial.iter().map(|&a| !a).collect();
    match tableau.optimize(&cost, &allowed) {
        Phase::PivotLimit => return (LpOutcome::PivotLimit, tableau.pivots),
        Phase::Unbounded => return (LpOutcome::Unbounded, tableau.pivots),
        Phase::Optimal => {}
    }
    let mut x = vec![BigRational::zero(); num_vars];
    for (i, &b) in tableau.basis.iter().enumerate() {
        if b < num_vars {
            x[b] = tableau.rows[i][cols].clone();
        }
    }
    let value = x
        .iter()
        .zip(objective)
        .map(|(a, c)| a * c)
        .fold(BigRational::zero(), |a, b| a + b);
    (LpOutcome::Optimal { x, value }, tableau.pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn row(coeffs: &[i64], relation: Relation, rhs: i64) -> DenseRow {
        DenseRow {
            coeffs: coeffs.iter().map(|&c| q(c)).collect(),
            relation,
            rhs: q(rhs),
        }
    }

    #[test]
    fn fractional_optimum() {
        // min x + y  s.t.  2x + 2y = 3
        let (out, _) = minimize(2, &[row(&[2, 2], Relation::Eq, 3)], &[q(1), q(1)], 100);
        match out {
            LpOutcome::Optimal { value, .. } => {
                assert_eq!(value, BigRational::new(BigInt::from(3), BigInt::from(2)))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x + y <= 1, x + y >= 2
        let rows = [row(&[1, 1], Relation::Le, 1), row(&[1, 1], Relation::Ge, 2)];
        let (out, _) = minimize(2, &rows, &[q(1), q(1)], 100);
        assert!(matches!(out, LpOutcome::Infeasible));
        let (out, _) = minimize(1, &[row(&[0], Relation::Eq, 1)], &[q(1)], 100);
        assert!(matches!(out, LpOutcome::Infeasible));
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x + y = -1 (i.e. x = y + 1), duplicated; min x + y -> x = 1, y = 0
        let rows = [row(&[-1, 1], Relation::Eq, -1), row(&[-2, 2], Relation::Eq, -2)];
        let (out, _) = minimize(2, &rows, &[q(1), q(1)], 100);
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, q(1));
                assert_eq!(x, vec![q(1), q(0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_unboundedness_and_pivot_limit() {
        let (out, _) = minimize(1, &[row(&[1], Relation::Ge, 1)], &[q(-1)], 100);
        assert!(matches!(out, LpOutcome::Unbounded));
        let (out, _) = minimize(2, &[row(&[1, 1], Relation::Ge, 1)], &[q(1), q(1)], 0);
        assert!(matches!(out, LpOutcome::PivotLimit));
    }
}
