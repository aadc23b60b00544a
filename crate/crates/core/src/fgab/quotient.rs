use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::{reduce_in_place, FgGroup, GroupElem};
use super::matrix::IntMatrix;
use super::smith::{smith, unimodular_inverse};

/// `Z^n / L` for a lattice `L` given by generating columns, in Smith coordinates.
///
/// `project` sends `x` to canonical coordinates of its class in `group`; two vectors are
/// congruent mod `L` iff their projections agree.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FgGroup,
    /// `group.len() x n`
    pub proj: IntMatrix,
    /// `n x group.len()`: a section, `proj * lift = id` on the group.
    pub lift: IntMatrix,
}

impl Quotient {
    pub fn new(n: usize, relations: &IntMatrix) -> Self {
        assert_eq!(relations.rows(), n, "relation vectors have the wrong length");
        let s = smith(relations);
        let inv = s.invariants();
        let uinv = unimodular_inverse(&s.u);
        // free rows first, then nontrivial torsion rows in divisibility order
        let mut rows: Vec<usize> = (inv.len()..n).collect();
        let mut torsion = Vec::new();
        for (k, d) in inv.iter().enumerate() {
            if !d.is_one() {
                rows.push(k);
                torsion.push(d.clone());
            }
        }
        let group = FgGroup::new(n - inv.len(), torsion).expect("Smith invariants form a chain");
        let proj = s.u.select_rows(&rows);
        let lift = uinv.select_columns(&rows);
        Self { group, proj, lift }
    }

    pub fn dim(&self) -> usize {
        self.proj.cols()
    }

    pub fn project(&self, x: &[BigInt]) -> GroupElem {
        let mut coords = self.proj.mul_vec(x);
        reduce_in_place(&mut coords[self.group.rank()..], self.group.torsion());
        GroupElem { coords }
    }

    pub fn lift_elem(&self, g: &GroupElem) -> Vec<BigInt> {
        self.lift.mul_vec(&g.coords)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.project(x).is_zero()
    }

    /// Rows and moduli expressing "`x` is congruent to 0": `proj x = 0` rowwise modulo torsion.
    pub fn equations(&self) -> (IntMatrix, Vec<BigInt>) {
        (self.proj.clone(), self.group.moduli())
    }

    pub fn zero_vector(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::ints;

    #[test]
    fn z2_mod_diagonal() {
        // Z^2 / <(1,1), (0,2)> = Z/2? no: det 2 so order 2
        let r = IntMatrix::from_i64(&[&[1, 0], &[1, 2]]);
        let q = Quotient::new(2, &r);
        assert_eq!(q.group, FgGroup::cyclic(2));
        assert!(q.is_zero(&ints(&[1, 1])));
        assert!(q.is_zero(&ints(&[2, 0])));
        assert!(!q.is_zero(&ints(&[1, 0])));
        let g = q.project(&ints(&[1, 0]));
        assert_eq!(q.project(&q.lift_elem(&g)), g);
    }

    #[test]
    fn free_quotient() {
        let r = IntMatrix::from_i64(&[&[1], &[-1], &[0]]);
        let q = Quotient::new(3, &r);
        assert_eq!(q.group, FgGroup::free(2));
        assert_eq!(q.project(&ints(&[1, 0, 0])), q.project(&ints(&[0, 1, 0])));
    }
}
