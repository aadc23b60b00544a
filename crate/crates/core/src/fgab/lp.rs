//! Exact rational simplex, used only to certify bounds for integer search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: BigRational, x: Vec<BigRational> },
}

/// Dense tableau for `max c.x  s.t.  A x <= b, x >= 0`.
struct Tableau {
    // rows 0..m are constraints, row m is the objective (reduced costs)
    t: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    nvars: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.t[0].len();
        let p = self.t[r][c].clone();
        for j in 0..width {
            let v = &self.t[r][j] / &p;
            self.t[r][j] = v;
        }
        for i in 0..self.t.len() {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for j in 0..width {
                if self.t[r][j].is_zero() {
                    continue;
                }
                let v = &self.t[i][j] - &f * &self.t[r][j];
                self.t[i][j] = v;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on the objective row `obj`; columns in `blocked` never enter.
    /// Returns false if unbounded.
    fn optimize(&mut self, obj: usize, blocked: &[bool]) -> bool {
        let m = self.basis.len();
        let rhs = self.t[0].len() - 1;
        loop {
            // entering: lowest index with negative reduced cost
            let Some(c) = (0..rhs).find(|&j| !blocked[j] && self.t[obj][j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..m {
                let a = &self.t[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][rhs] / a;
                match &best {
                    Some((bi, br)) if *br < ratio || (*br == ratio && self.basis[*bi] < self.basis[i]) => {}
                    _ => best = Some((i, ratio)),
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximizes `c.x` over `{ x >= 0 : A x <= b }` exactly.
pub(crate) fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // columns: x (n), slack (m), artificial (m), rhs
    let width = n + 2 * m + 1;
    let rhs = width - 1;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut t = vec![vec![zero.clone(); width]; m + 2];
    let mut basis = vec![0; m];
    let mut needs_phase1 = false;
    for i in 0..m {
        let flip = b[i].is_negative();
        let sgn = if flip { -one.clone() } else { one.clone() };
        for j in 0..n {
            t[i][j] = &a[i][j] * &sgn;
        }
        t[i][n + i] = sgn.clone();
        t[i][rhs] = &b[i] * &sgn;
        if flip {
            t[i][n + m + i] = one.clone();
            basis[i] = n + m + i;
            needs_phase1 = true;
        } else {
            basis[i] = n + i;
        }
    }
    // objective row m: maximize c.x  ->  reduced costs -c
    for j in 0..n {
        t[m][j] = -c[j].clone();
    }
    let mut tab = Tableau { t, basis, nvars: n };
    let mut blocked = vec![false; rhs];
    if needs_phase1 {
        // phase-1 row m+1: minimize sum of artificials, i.e. maximize -sum
        let p1 = m + 1;
        for i in 0..m {
            if tab.basis[i] >= n + m {
                for j in 0..width {
                    let v = &tab.t[p1][j] - &tab.t[i][j];
                    tab.t[p1][j] = v;
                }
                tab.t[p1][tab.basis[i]] = zero.clone();
            }
        }
        tab.optimize(p1, &blocked);
        if tab.t[p1][rhs].is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(c) = (0..n + m).find(|&j| !tab.t[i][j].is_zero()) {
                    tab.pivot(i, c);
                }
            }
        }
    }
    for j in n + m..rhs {
        blocked[j] = true;
    }
    // artificial rows left in the basis are redundant (all-zero) constraints
    if !tab.optimize(m, &blocked) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![zero; tab.nvars];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.t[i][rhs].clone();
        }
    }
    LpOutcome::Optimal {
        value: tab.t[m][rhs].clone(),
        x,
    }
}

pub(crate) fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn simple_optimum() {
        // max x + y  s.t. x + 2y <= 4, 3x + y <= 6
        let a = vec![vec![r(1), r(2)], vec![r(3), r(1)]];
        let out = maximize(&a, &[r(4), r(6)], &[r(1), r(1)]);
        match out {
            LpOutcome::Optimal { value, .. } => {
                assert_eq!(value, BigRational::new(BigInt::from(14), BigInt::from(5)))
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x <= -1 with x >= 0
        let out = maximize(&[vec![r(1)]], &[r(-1)], &[r(1)]);
        assert_eq!(out, LpOutcome::Infeasible);
        // -x <= 0, maximize x
        let out = maximize(&[vec![r(-1)]], &[r(0)], &[r(1)]);
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn phase_one_needed() {
        // x >= 2 (i.e. -x <= -2), x <= 5, max -x  -> -2
        let out = maximize(&[vec![r(-1)], vec![r(1)]], &[r(-2), r(5)], &[r(-1)]);
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, r(-2));
                assert_eq!(x, vec![r(2)]);
            }
            o => panic!("{o:?}"),
        }
    }
}
