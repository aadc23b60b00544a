use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u * a * v = d` with `d` diagonal, nonnegative, and `d[k] | d[k+1]`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|k| self.d[(k, k)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

fn min_abs_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Quotient rounded to the nearest integer, keeping remainders small.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if (&r * BigInt::from(2)).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Smith normal form with unimodular transforms. Pivots are chosen by minimal
/// absolute value; row and column scans run in index order, so the result is
/// deterministic for a given input.
pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_nonzero(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -round_div(&d[(i, t)], &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -round_div(&d[(t, j)], &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // bring the smallest leftover of row/column t into the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = &d[(i, t)];
                    if !x.is_zero() && x.abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = &d[(t, j)];
                    if !x.is_zero() && x.abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    d.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = d[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u, d, v }
}

/// Inverse of a unimodular matrix, computed exactly by integer Gauss-Jordan.
pub fn unimodular_inverse(a: &IntMatrix) -> IntMatrix {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    // Row-reduce [a | I] using only unimodular row operations.
    let mut m = a.clone();
    let mut inv = IntMatrix::identity(n);
    for c in 0..n {
        loop {
            let piv = (c..n)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by(|&x, &y| m[(x, c)].abs().cmp(&m[(y, c)].abs()))
                .expect("matrix is not unimodular");
            m.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let mut done = true;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let q = -m[(i, c)].div_floor(&m[(c, c)]);
                m.add_row_multiple(i, c, &q);
                inv.add_row_multiple(i, c, &q);
                if !m[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        assert!(m[(c, c)].abs().is_one(), "matrix is not unimodular");
        if m[(c, c)].is_negative() {
            m.negate_row(c);
            inv.negate_row(c);
        }
    }
    for c in (0..n).rev() {
        for i in 0..c {
            if m[(i, c)].is_zero() {
                continue;
            }
            let q = -m[(i, c)].clone();
            m.add_row_multiple(i, c, &q);
            inv.add_row_multiple(i, c, &q);
        }
    }
    inv
}

/// A basis of the lattice spanned by the columns of `a`, in column echelon
/// form (each basis column has a strictly later leading row than the previous).
pub fn column_basis(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let rows = m.rows();
    let mut cols = m.cols();
    let mut next = 0;
    for r in 0..rows {
        if next >= cols {
            break;
        }
        loop {
            let piv = (next..cols)
                .filter(|&j| !m[(r, j)].is_zero())
                .min_by(|&x, &y| m[(r, x)].abs().cmp(&m[(r, y)].abs()));
            let Some(piv) = piv else { break };
            m.swap_cols(next, piv);
            let mut done = true;
            for j in next + 1..cols {
                if m[(r, j)].is_zero() {
                    continue;
                }
                let q = -round_div(&m[(r, j)], &m[(r, next)]);
                m.add_col_multiple(j, next, &q);
                if !m[(r, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                if m[(r, next)].is_negative() {
                    m.negate_col(next);
                }
                // size-reduce earlier columns against this pivot
                for j in 0..next {
                    let q = -m[(r, j)].div_floor(&m[(r, next)]);
                    m.add_col_multiple(j, next, &q);
                }
                next += 1;
                break;
            }
        }
        // drop columns that became zero
        let mut j = next;
        while j < cols {
            if (0..rows).all(|i| m[(i, j)].is_zero()) {
                m.swap_cols(j, cols - 1);
                cols -= 1;
            } else {
                j += 1;
            }
        }
    }
    let keep: Vec<usize> = (0..next).collect();
    m.select_columns(&keep)
}
