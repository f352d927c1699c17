//! Exact two-phase simplex over rationals with Bland's anti-cycling rule.
//! Sized for the small feasibility problems of the Nash search.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs · x (relation) rhs`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in &mut self.rows[r] {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        for k in 0..self.rows.len() {
            if k == r || self.rows[k][c].is_zero() {
                continue;
            }
            let factor = self.rows[k][c].clone();
            for j in 0..self.rows[k].len() {
                if !self.rows[r][j].is_zero() {
                    let delta = &factor * &self.rows[r][j];
                    self.rows[k][j] -= delta;
                }
            }
            let delta = &factor * &self.rhs[r];
            self.rhs[k] -= delta;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns marked `allowed`. Returns false if
    /// unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        let width = cost.len();
        loop {
            // reduced cost d_c = z_c - cost_c; entering column: lowest index with d_c < 0
            let entering = (0..width).filter(|&c| allowed[c]).find(|&c| {
                let z: Rational = (0..self.rows.len())
                    .map(|r| &cost[self.basis[r]] * &self.rows[r][c])
                    .sum();
                z < cost[c]
            });
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][c].is_positive() {
                    let ratio = &self.rhs[r] / &self.rows[r][c];
                    let better = match &leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Maximizes `objective · x` subject to `constraints` and `x >= 0`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    let slacks = constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let mut normalized: Vec<(Vec<Rational>, Relation, Rational)> = constraints
        .iter()
        .map(|c| {
            assert_eq!(
                c.coeffs.len(),
                n,
                "constraint width must match the objective"
            );
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), rel, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();
    let artificials = normalized
        .iter()
        .filter(|(_, r, _)| *r != Relation::Le)
        .count();
    let width = n + slacks + artificials;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (n, n + slacks);
    for (coeffs, rel, b) in normalized.drain(..) {
        let mut row = coeffs;
        row.resize(width, Rational::zero());
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let mut t = Tableau { rows, rhs, basis };
    let is_artificial = |c: usize| c >= n + slacks;

    if artificials > 0 {
        let cost: Vec<Rational> = (0..width)
            .map(|c| {
                if is_artificial(c) {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let all = vec![true; width];
        // phase one is bounded above by zero
        t.optimize(&cost, &all);
        let infeasibility: Rational = (0..t.rows.len())
            .filter(|&r| is_artificial(t.basis[r]))
            .map(|r| t.rhs[r].clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < t.rows.len() {
            if is_artificial(t.basis[r]) {
                match (0..width).find(|&c| !is_artificial(c) && !t.rows[r][c].is_zero()) {
                    Some(c) => {
                        t.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = objective.to_vec();
    cost.resize(width, Rational::zero());
    let allowed: Vec<bool> = (0..width).map(|c| !is_artificial(c)).collect();
    if !t.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[r].clone();
        }
    }
    let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { value, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn row(v: &[i64], rel: Relation, b: i64) -> Constraint {
        Constraint::new(v.iter().map(|&x| int(x)).collect(), rel, int(b))
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let out = maximize(
            &ints(&[3, 5]),
            &[
                row(&[1, 0], Relation::Le, 4),
                row(&[0, 2], Relation::Le, 12),
                row(&[3, 2], Relation::Le, 18),
            ],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: int(36),
                x: ints(&[2, 6])
            }
        );
    }

    #[test]
    fn equality_and_lower_bounds() {
        // max t, x + y = 1, x - t >= 0, y - t >= 0, x - 2y >= 0 -> t = 1/3
        let out = maximize(
            &ints(&[0, 0, 1]),
            &[
                row(&[1, 1, 0], Relation::Eq, 1),
                row(&[1, 0, -1], Relation::Ge, 0),
                row(&[0, 1, -1], Relation::Ge, 0),
                row(&[1, -2, 0], Relation::Ge, 0),
            ],
        );
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, ratio(1, 3));
                assert_eq!(x, vec![ratio(2, 3), ratio(1, 3), ratio(1, 3)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        assert_eq!(
            maximize(
                &ints(&[1]),
                &[row(&[1], Relation::Ge, 2), row(&[1], Relation::Le, 1)]
            ),
            LpOutcome::Infeasible
        );
        assert_eq!(
            maximize(&ints(&[1, 1]), &[row(&[1, -1], Relation::Le, 1)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x <= -2 means x >= 2; min x via max -x -> -2
        let out = maximize(&ints(&[-1]), &[row(&[-1], Relation::Le, -2)]);
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: int(-2),
                x: ints(&[2])
            }
        );
    }

    #[test]
    fn redundant_equalities() {
        let out = maximize(
            &ints(&[1, 0]),
            &[row(&[1, 1], Relation::Eq, 1), row(&[2, 2], Relation::Eq, 2)],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: int(1),
                x: ints(&[1, 0])
            }
        );
    }

    #[test]
    fn constant_rows() {
        assert_eq!(
            maximize(&ints(&[1]), &[row(&[0], Relation::Ge, 1)]),
            LpOutcome::Infeasible
        );
        assert_eq!(
            maximize(
                &ints(&[1]),
                &[row(&[0], Relation::Le, 1), row(&[1], Relation::Le, 3)]
            ),
            LpOutcome::Optimal {
                value: int(3),
                x: ints(&[3])
            }
        );
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule
        let c = vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)];
        let cons = vec![
            Constraint::new(
                vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)],
                Relation::Le,
                int(0),
            ),
            Constraint::new(
                vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)],
                Relation::Le,
                int(0),
            ),
            Constraint::new(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1)),
        ];
        match maximize(&c, &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
