//! Exact two-phase simplex over the rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn point(&self) -> Option<&[Q]> {
        match self {
            LpResult::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[r][j].is_zero() {
                    let t = &f * &self.rows[r][j];
                    self.rows[i][j] -= t;
                }
            }
            let t = &f * &self.rhs[r];
            self.rhs[i] -= t;
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Q], j: usize) -> Q {
        let mut r = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                r -= &cost[b] * &self.rows[i][j];
            }
        }
        r
    }

    /// Minimizes `cost · x` over columns `0..ncols`; `false` when unbounded.
    fn run(&mut self, cost: &[Q], ncols: usize) -> bool {
        loop {
            let Some(enter) = (0..ncols).find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative())
            else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Minimizes `c · x` subject to `A x = b`, `x ≥ 0`.
pub fn minimize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpResult {
    let n = c.len();
    let m = a.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Q> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi } else { bi.clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };

    let phase1: Vec<Q> = (0..n + m).map(|j| if j < n { Q::zero() } else { Q::one() }).collect();
    t.run(&phase1, n + m);
    let infeasibility: Q = t.basis.iter().zip(&t.rhs).filter(|(&bj, _)| bj >= n).map(|(_, v)| v.clone()).sum();
    if infeasibility.is_positive() {
        return LpResult::Infeasible;
    }
    // drive artificials out of the basis; rows where that fails are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    for r in t.rows.iter_mut() {
        r.truncate(n);
    }
    if !t.run(c, n) {
        return LpResult::Unbounded;
    }
    let x = t.solution(n);
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpResult::Optimal { x, value }
}

/// Some `x ≥ 0` with `A x = b`.
pub fn feasible(a: &[Vec<Q>], b: &[Q], n: usize) -> Option<Vec<Q>> {
    match minimize(a, b, &vec![Q::zero(); n]) {
        LpResult::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Nonnegative `λ` with `Σ λ_i g_i = x`, if any.
pub fn cone_combination(gens: &[Vec<Q>], x: &[Q]) -> Option<Vec<Q>> {
    let rows: Vec<Vec<Q>> = (0..x.len()).map(|k| gens.iter().map(|g| g[k].clone()).collect()).collect();
    if gens.is_empty() {
        return x.iter().all(Zero::is_zero).then(Vec::new);
    }
    feasible(&rows, x, gens.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn small_programs() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![qi(1), qi(2), qi(1), qi(0)], vec![qi(3), qi(1), qi(0), qi(1)]];
        let r = minimize(&a, &[qi(4), qi(6)], &[qi(-1), qi(-1), qi(0), qi(0)]);
        let LpResult::Optimal { x, value } = r else { panic!("{r:?}") };
        assert_eq!(value, q(-14, 5));
        assert_eq!(&x[..2], &[q(8, 5), q(6, 5)]);

        // x - y = 1 with min x unbounded? no: min -x unbounded
        let a = vec![vec![qi(1), qi(-1)]];
        assert_eq!(minimize(&a, &[qi(1)], &[qi(-1), qi(0)]), LpResult::Unbounded);
        // x + y = -1 infeasible
        let a = vec![vec![qi(1), qi(1)]];
        assert_eq!(minimize(&a, &[qi(-1)], &[qi(0), qi(0)]), LpResult::Infeasible);
        // redundant rows
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        assert!(feasible(&a, &[qi(1), qi(2)], 2).is_some());
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook largest-coefficient rule
        let a = vec![
            vec![q(1, 4), qi(-60), q(-1, 25), qi(9), qi(1), qi(0), qi(0)],
            vec![q(1, 2), qi(-90), q(-1, 50), qi(3), qi(0), qi(1), qi(0)],
            vec![qi(0), qi(0), qi(1), qi(0), qi(0), qi(0), qi(1)],
        ];
        let c = [q(-3, 4), qi(150), q(-1, 50), qi(6), qi(0), qi(0), qi(0)];
        let LpResult::Optimal { value, .. } = minimize(&a, &[qi(0), qi(0), qi(1)], &c) else { panic!() };
        assert_eq!(value, q(-1, 20));
    }

    #[test]
    fn cone_membership() {
        let gens = vec![vec![qi(1), qi(0)], vec![qi(1), qi(1)]];
        assert!(cone_combination(&gens, &[qi(3), qi(1)]).is_some());
        assert!(cone_combination(&gens, &[qi(0), qi(1)]).is_none());
        assert!(cone_combination(&[], &[qi(0), qi(0)]).is_some());
    }
}
