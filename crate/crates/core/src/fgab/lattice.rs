use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::{column_basis, smith};

/// The integer solutions of a linear system, `{ base + basis * t : t in Z^r }`.
#[derive(Clone, Debug)]
pub struct AffineLattice {
    pub base: Vec<BigInt>,
    /// `dim x r`, columns linearly independent.
    pub basis: IntMatrix,
}

impl AffineLattice {
    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn point(&self, t: &[BigInt]) -> Vec<BigInt> {
        let off = self.basis.mul_vec(t);
        self.base.iter().zip(off).map(|(a, b)| a + b).collect()
    }

    /// Intersects with the hyperplane `x[coord] = value`.
    pub fn restrict(&self, coord: usize, value: &BigInt) -> Option<AffineLattice> {
        let row = self.basis.select_rows(&[coord]);
        let rhs = value - &self.base[coord];
        if row.is_zero() {
            return rhs.is_zero().then(|| self.clone());
        }
        let s = smith(&row);
        let g = &s.d[(0, 0)];
        let y = &s.u[(0, 0)] * &rhs;
        if !y.is_multiple_of(g) {
            return None;
        }
        let r = self.basis.cols();
        let mut t0 = vec![BigInt::zero(); r];
        let s0 = y / g;
        for (k, t) in t0.iter_mut().enumerate() {
            *t = &s.v[(k, 0)] * &s0;
        }
        let base = self.point(&t0);
        let kernel = s.v.select_columns(&(1..r).collect::<Vec<_>>());
        let basis = column_basis(&(&self.basis * &kernel));
        debug_assert_eq!(base[coord], *value);
        Some(AffineLattice { base, basis })
    }

    /// Projects onto the first `n` coordinates.
    pub fn truncate(&self, n: usize) -> AffineLattice {
        let rows: Vec<usize> = (0..n).collect();
        AffineLattice {
            base: self.base[..n].to_vec(),
            basis: column_basis(&self.basis.select_rows(&rows)),
        }
    }
}

fn check_moduli(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    assert_eq!(a.rows(), moduli.len(), "moduli length mismatch");
    assert!(moduli.iter().all(|m| !m.is_negative()), "negative modulus");
}

/// All integer `x` with `a x = b` rowwise, where a row with modulus `m > 0` is
/// read as a congruence mod `m`. `None` iff the system has no solution.
pub fn solution_lattice(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) -> Option<AffineLattice> {
    check_moduli(a, b, moduli);
    let n = a.cols();
    let mod_rows: Vec<usize> = (0..a.rows()).filter(|&i| !moduli[i].is_zero()).collect();
    let mut slack = IntMatrix::zeros(a.rows(), mod_rows.len());
    for (k, &i) in mod_rows.iter().enumerate() {
        slack[(i, k)] = -moduli[i].clone();
    }
    let full = a.hconcat(&slack);
    let s = smith(&full);
    let y = s.u.mul_vec(b);
    let rank = s.rank();
    let mut sol = vec![BigInt::zero(); full.cols()];
    for k in 0..y.len() {
        if k < rank {
            let d = &s.d[(k, k)];
            if !y[k].is_multiple_of(d) {
                return None;
            }
            sol[k] = &y[k] / d;
        } else if !y[k].is_zero() {
            return None;
        }
    }
    let base = s.v.mul_vec(&sol);
    let kernel = s.v.select_columns(&(rank..full.cols()).collect::<Vec<_>>());
    let lat = AffineLattice {
        base,
        basis: kernel,
    };
    Some(lat.truncate(n))
}

/// Returns some `x` with `a x = b` (rowwise modulo `moduli`, 0 = exact), or
/// `None` iff no integer solution exists.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) -> Option<Vec<BigInt>> {
    let lat = solution_lattice(a, b, moduli)?;
    Some(lat.base)
}

/// Checks `a x = b` rowwise under the given moduli.
pub fn satisfies(a: &IntMatrix, x: &[BigInt], b: &[BigInt], moduli: &[BigInt]) -> bool {
    let ax = a.mul_vec(x);
    ax.iter().zip(b).zip(moduli).all(|((l, r), m)| {
        if m.is_zero() {
            l == r
        } else {
            (l - r).is_multiple_of(m)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::ints;

    #[test]
    fn parity_obstruction() {
        let a = IntMatrix::from_i64(&[&[2]]);
        assert!(solve_linear(&a, &ints(&[3]), &ints(&[0])).is_none());
        assert_eq!(solve_linear(&a, &ints(&[4]), &ints(&[0])), Some(ints(&[2])));
    }

    #[test]
    fn congruence_row() {
        let a = IntMatrix::from_i64(&[&[3]]);
        let x = solve_linear(&a, &ints(&[1]), &ints(&[5])).unwrap();
        // the witness is any solution; canonical residue is 2
        assert_eq!(x[0].mod_floor(&BigInt::from(5)), BigInt::from(2));
    }

    #[test]
    fn restriction_narrows_lattice() {
        // x + y = 3 over Z: restrict x = 1 gives y = 2
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        let lat = solution_lattice(&a, &ints(&[3]), &ints(&[0])).unwrap();
        assert_eq!(lat.basis.cols(), 1);
        let r = lat.restrict(0, &BigInt::from(1)).unwrap();
        assert_eq!(r.base, ints(&[1, 2]));
        assert_eq!(r.basis.cols(), 0);
        // 2x = 4 with x + y = 3 and x = 5 impossible
        let a = IntMatrix::from_i64(&[&[2, 0]]);
        let lat = solution_lattice(&a, &ints(&[4]), &ints(&[0])).unwrap();
        assert!(lat.restrict(0, &BigInt::from(5)).is_none());
    }
}
