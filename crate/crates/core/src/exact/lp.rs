use super::RationalVector;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Result of an exact linear program.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: RationalVector,
        value: BigRational,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= pv * &f;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule simplex on the current basis; `Err(())` if unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> Result<(), ()> {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(());
            };
            self.pivot(r, j);
        }
    }
}

/// Maximizes `c . x` subject to `A x = b`, `x >= 0`, by two-phase simplex with Bland's rule.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "constraint width mismatch");
        let flip = bi.is_negative();
        let mut r: Vec<BigRational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { BigRational::from_integer(1.into()) } else { BigRational::zero() }));
        r.push(if flip { -bi } else { bi.clone() });
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };
    let mut phase1 = vec![BigRational::zero(); width];
    for v in phase1.iter_mut().skip(n) {
        *v = BigRational::from_integer((-1).into());
    }
    t.optimize(&phase1, width)
        .expect("phase one is bounded by construction");
    let infeasibility: BigRational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(i, _)| t.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut cost = c.to_vec();
    cost.extend((0..m).map(|_| BigRational::zero()));
    if t.optimize(&cost, n).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rhs(i).clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

/// A point with `A x = b`, `x >= 0`, if one exists.
pub fn lp_feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<RationalVector> {
    let n = a.first().map_or(0, Vec::len);
    match maximize(a, b, &vec![BigRational::zero(); n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Answer to "is there `x` with `A x > b` componentwise?".
#[derive(Clone, Debug, PartialEq)]
pub struct StrictFeasibility {
    pub feasible: bool,
    /// A point with `A x > b` when feasible.
    pub witness: Option<RationalVector>,
}

/// Decides strict feasibility of `A x > b` with `x` free.
///
/// Solves `max t` subject to `A x - t >= b`, `0 <= t <= 1`; the system is strictly
/// feasible iff the optimum is positive.
pub fn lp_strict_feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> StrictFeasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // columns: x+ (n), x- (n), t, slack (m), w
    let cols = 2 * n + 1 + m + 1;
    let one = BigRational::from_integer(1.into());
    let mut rows = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![BigRational::zero(); cols];
        for j in 0..n {
            r[j] = row[j].clone();
            r[n + j] = -&row[j];
        }
        r[2 * n] = -one.clone();
        r[2 * n + 1 + i] = -one.clone();
        rows.push(r);
    }
    let mut cap = vec![BigRational::zero(); cols];
    cap[2 * n] = one.clone();
    cap[cols - 1] = one.clone();
    rows.push(cap);
    let mut rhs = b.to_vec();
    rhs.push(one.clone());
    let mut cost = vec![BigRational::zero(); cols];
    cost[2 * n] = one;
    match maximize(&rows, &rhs, &cost) {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let w = (0..n).map(|j| &x[j] - &x[n + j]).collect();
            StrictFeasibility {
                feasible: true,
                witness: Some(w),
            }
        }
        _ => StrictFeasibility {
            feasible: false,
            witness: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn maximize_textbook_problem() {
        // max 3x + 2y st x + y + s1 = 4, x + 3y + s2 = 6
        let a = rows(&[&[1, 1, 1, 0], &[1, 3, 0, 1]]);
        let out = maximize(&a, &[rat(4), rat(6)], &[rat(3), rat(2), rat(0), rat(0)]);
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, rat(12));
                assert_eq!(x[0], rat(4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let a = rows(&[&[1, 1]]);
        assert_eq!(maximize(&a, &[rat(-1)], &[rat(0), rat(0)]), LpOutcome::Infeasible);
        let a = rows(&[&[1, -1]]);
        assert_eq!(maximize(&a, &[rat(0)], &[rat(1), rat(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = rows(&[&[1, 1], &[2, 2]]);
        let out = maximize(&a, &[rat(1), rat(2)], &[rat(1), rat(0)]);
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == rat(1)));
    }

    #[test]
    fn strict_feasibility_of_open_interval() {
        // x > 0 and -x > -1
        let a = rows(&[&[1], &[-1]]);
        let s = lp_strict_feasible(&a, &[rat(0), rat(-1)]);
        assert!(s.feasible);
        let x = &s.witness.unwrap()[0];
        assert!(*x > rat(0) && *x < rat(1));
        // x > 0 and -x > 0 has no solution, though x >= 0, -x >= 0 does
        let s = lp_strict_feasible(&a, &[rat(0), rat(0)]);
        assert!(!s.feasible);
        let s = lp_strict_feasible(&a, &[ratio(1, 2), ratio(-1, 2)]);
        assert!(!s.feasible);
    }
}
