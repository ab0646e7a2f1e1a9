//! Exact rational simplex for `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`.
//!
//! The origin is feasible, so a single phase suffices. Pivoting follows
//! Bland's rule (lowest-index entering column, lowest-index leaving basic
//! variable among ratio ties), which rules out cycling.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

/// Optimal primal point, dual prices for each row, and the common optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub value: Rational,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn solve(&self) -> Result<LpSolution> {
        let m = self.rows.len();
        let n = self.objective.len();
        if self.rhs.len() != m || self.rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidQuery("constraint matrix has inconsistent shape".into()));
        }
        if self.rhs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidQuery("right-hand side must be non-negative".into()));
        }
        let width = n + m;
        // tableau[i] = [row coefficients | slack identity | rhs]
        let mut tableau: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .enumerate()
            .map(|(i, (row, b))| {
                let mut r = row.clone();
                r.extend((0..m).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
                r.push(b.clone());
                r
            })
            .collect();
        // reduced[j] = c_j - z_j; optimal when none is positive
        let mut reduced: Vec<Rational> = self.objective.clone();
        reduced.extend(std::iter::repeat_n(Rational::zero(), m));
        let mut value = Rational::zero();
        let mut basis: Vec<usize> = (n..width).collect();
        let mut pivots = 0;

        while let Some(col) = (0..width).find(|&j| reduced[j].is_positive()) {
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in tableau.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[width] / &row[col];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((pr, _)) = leave else {
                return Err(Error::Unbounded);
            };
            let pivot = tableau[pr][col].clone();
            for x in tableau[pr].iter_mut() {
                *x /= &pivot;
            }
            let pivot_row = tableau[pr].clone();
            for (i, row) in tableau.iter_mut().enumerate() {
                if i == pr || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &factor * p;
                    }
                }
            }
            let factor = reduced[col].clone();
            for (x, p) in reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            value += &factor * &pivot_row[width];
            basis[pr] = col;
            pivots += 1;
        }

        let mut primal = vec![Rational::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                primal[b] = tableau[i][width].clone();
            }
        }
        let dual = (0..m).map(|i| -reduced[n + i].clone()).collect();
        Ok(LpSolution {
            primal,
            dual,
            value,
            pivots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: i64) -> Rational {
        ratio(v, 1)
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), value 36
        let lp = LinearProgram {
            objective: vec![q(3), q(5)],
            rows: vec![vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]],
            rhs: vec![q(4), q(12), q(18)],
        };
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(36));
        assert_eq!(s.primal, vec![q(2), q(6)]);
        // Strong duality: b . y equals the optimum.
        let by: Rational = s.dual.iter().zip(&lp.rhs).map(|(y, b)| y * b).sum();
        assert_eq!(by, s.value);
        assert!(s.dual.iter().all(|y| !y.is_negative()));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example under the largest-coefficient rule.
        let lp = LinearProgram {
            objective: vec![ratio(3, 4), q(-150), ratio(1, 50), q(-6)],
            rows: vec![
                vec![ratio(1, 4), q(-60), ratio(-1, 25), q(9)],
                vec![ratio(1, 2), q(-90), ratio(-1, 50), q(3)],
                vec![q(0), q(0), q(1), q(0)],
            ],
            rhs: vec![q(0), q(0), q(1)],
        };
        let s = lp.solve().unwrap();
        assert_eq!(s.value, ratio(1, 20));
    }

    #[test]
    fn unbounded_and_malformed() {
        let lp = LinearProgram {
            objective: vec![q(1)],
            rows: vec![vec![q(-1)]],
            rhs: vec![q(1)],
        };
        assert_eq!(lp.solve(), Err(Error::Unbounded));
        let bad = LinearProgram {
            objective: vec![q(1)],
            rows: vec![vec![q(1)]],
            rhs: vec![q(-1)],
        };
        assert!(bad.solve().is_err());
    }
}
