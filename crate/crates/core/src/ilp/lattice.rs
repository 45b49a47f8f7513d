use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{LinearSystem, Relation};

/// Result of the divisibility test on the equality rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeCheck {
    /// No integer vector satisfies the equality rows.
    Refuted,
    /// The test found no obstruction; the system may or may not be feasible.
    Unknown,
}

/// Decides whether the equality rows have an integer solution, ignoring
/// nonnegativity. Unimodular column operations bring the coefficient matrix
/// to lower-triangular form `A·U = [H 0]`; then `H·y = b` is solved by forward
/// substitution and every step must divide exactly.
pub fn gcd_feasibility_check(system: &LinearSystem) -> LatticeCheck {
    let n = system.num_vars();
    let (mut a, b): (Vec<Vec<BigInt>>, Vec<BigInt>) = system
        .rows()
        .iter()
        .filter(|r| r.relation == Relation::Eq)
        .map(|r| {
            let mut dense = vec![BigInt::zero(); n];
            for (j, c) in &r.coeffs {
                dense[*j] += c;
            }
            (dense, r.rhs.clone())
        })
        .unzip();

    let mut y: Vec<BigInt> = Vec::new();
    for r in 0..a.len() {
        let k = y.len();
        // Smallest nonzero magnitude among the free columns of row r.
        while let Some(best) = (k..n)
            .filter(|&c| !a[r][c].is_zero())
            .min_by(|&p, &q| a[r][p].abs().cmp(&a[r][q].abs()))
        {
            for row in a.iter_mut() {
                row.swap(k, best);
            }
            let mut done = true;
            for c in k + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = &a[r][c] / &a[r][k];
                for row in a.iter_mut() {
                    let delta = &q * &row[k];
                    row[c] -= delta;
                }
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        let known: BigInt = (0..k).map(|c| &a[r][c] * &y[c]).sum();
        let rest = &b[r] - known;
        if k < n && !a[r][k].is_zero() {
            let (q, m) = rest.div_rem(&a[r][k]);
            if !m.is_zero() {
                return LatticeCheck::Refuted;
            }
            y.push(q);
        } else if !rest.is_zero() {
            return LatticeCheck::Refuted;
        }
    }
    LatticeCheck::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::build_state_equation;
    use crate::net::fixtures::NET_A;
    use crate::net::{parse_net, Mode, ReachabilityProblem};

    fn system(rows: &[(&[i64], i64)]) -> LinearSystem {
        let mut s = LinearSystem::new(vec!["x".into(), "y".into()]);
        for (coeffs, rhs) in rows {
            s.add_row(
                coeffs.iter().enumerate().map(|(j, &c)| (j, BigInt::from(c))).collect(),
                Relation::Eq,
                BigInt::from(*rhs),
                "r",
            );
        }
        s
    }

    #[test]
    fn parity_refutes() {
        assert_eq!(gcd_feasibility_check(&system(&[(&[2, -2], 1)])), LatticeCheck::Refuted);
        assert_eq!(gcd_feasibility_check(&system(&[(&[2, -2], 4)])), LatticeCheck::Unknown);
    }

    #[test]
    fn refutation_after_elimination() {
        // 2x + 2y = 2 and 2x + 4y = 3  =>  2y = 1
        let s = system(&[(&[2, 2], 2), (&[2, 4], 3)]);
        assert_eq!(gcd_feasibility_check(&s), LatticeCheck::Refuted);
        // 0 = 1 after elimination
        let s = system(&[(&[1, 1], 1), (&[1, 1], 2)]);
        assert_eq!(gcd_feasibility_check(&s), LatticeCheck::Refuted);
    }

    #[test]
    fn refutation_needs_both_rows() {
        // Each row alone is solvable; together they force 2x = 1.
        assert_eq!(gcd_feasibility_check(&system(&[(&[1, 1], 1), (&[1, -1], 0)])), LatticeCheck::Refuted);
        let mut s = LinearSystem::new(vec!["x".into(), "y".into(), "z".into()]);
        for (coeffs, rhs) in [([-2i64, 1, 1], -1i64), ([2, 0, -2], 1)] {
            s.add_row(
                coeffs.iter().enumerate().map(|(j, &c)| (j, BigInt::from(c))).collect(),
                Relation::Eq,
                BigInt::from(rhs),
                "r",
            );
        }
        assert_eq!(gcd_feasibility_check(&s), LatticeCheck::Refuted);
        assert_eq!(gcd_feasibility_check(&system(&[(&[3, 5], 1), (&[1, 2], 1)])), LatticeCheck::Unknown);
    }

    #[test]
    fn borrowing_net_is_not_refuted() {
        let net = parse_net(NET_A).unwrap();
        let problem =
            ReachabilityProblem::from_parts(net, None, &[("s3", 1)], Mode::Reach, &[("t", 1)])
                .unwrap();
        let s = build_state_equation(&problem);
        assert_eq!(gcd_feasibility_check(&s), LatticeCheck::Unknown);
    }
}
