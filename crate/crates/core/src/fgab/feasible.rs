use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lattice::{satisfies, solution_lattice, AffineLattice};
use super::lp::{maximize, rat, LpOutcome};
use super::matrix::IntMatrix;
use super::FgabError;

/// Per-coordinate side condition on a solution vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordConstraint {
    Free,
    Zero,
    Ge1,
    /// Either the coordinate is 0 and every coordinate of `block` is 0, or it is at least 1.
    ZeroOrGe1 { block: Range<usize> },
}

/// Work limit for the exact search. Exhaustion is reported as an error, never as infeasibility.
#[derive(Clone, Debug)]
pub struct Budget {
    remaining: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 2_000_000;

    pub fn new(nodes: u64) -> Self {
        Self { remaining: nodes }
    }

    fn tick(&mut self) -> Result<(), FgabError> {
        if self.remaining == 0 {
            return Err(FgabError::ResourceLimit);
        }
        self.remaining -= 1;
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_NODES)
    }
}

/// Decides whether `a x = b` (rowwise modulo `moduli`) has an integer solution
/// obeying `constraints`, returning a witness if so.
///
/// `ZeroOrGe1` coordinates are split into their two cases (zero first). The
/// remaining `Ge1` conditions ask whether an affine lattice meets a shifted
/// orthant; coordinates that can grow along a lattice direction staying in the
/// orthant are handled by translation, the others have a finite LP bound and are
/// enumerated smallest value first.
pub fn feasible_constrained(
    a: &IntMatrix,
    b: &[BigInt],
    moduli: &[BigInt],
    constraints: &[CoordConstraint],
    budget: &mut Budget,
) -> Result<Option<Vec<BigInt>>, FgabError> {
    if constraints.len() != a.cols() {
        return Err(FgabError::Dimension(format!(
            "{} constraints for {} unknowns",
            constraints.len(),
            a.cols()
        )));
    }
    let Some(mut lat) = solution_lattice(a, b, moduli) else {
        return Ok(None);
    };
    let zero = BigInt::zero();
    for (j, c) in constraints.iter().enumerate() {
        if *c == CoordConstraint::Zero {
            match lat.restrict(j, &zero) {
                Some(l) => lat = l,
                None => return Ok(None),
            }
        }
    }
    let ge1: Vec<usize> = (0..constraints.len())
        .filter(|&j| constraints[j] == CoordConstraint::Ge1)
        .collect();
    let split: Vec<(usize, Range<usize>)> = constraints
        .iter()
        .enumerate()
        .filter_map(|(j, c)| match c {
            CoordConstraint::ZeroOrGe1 { block } => Some((j, block.clone())),
            _ => None,
        })
        .collect();
    let found = split_search(&lat, &split, ge1, budget)?;
    if let Some(x) = &found {
        assert!(satisfies(a, x, b, moduli), "feasibility witness fails the linear system");
        assert!(respects(x, constraints), "feasibility witness violates a coordinate constraint");
    }
    Ok(found)
}

/// Re-checks coordinate constraints on a candidate solution.
pub fn respects(x: &[BigInt], constraints: &[CoordConstraint]) -> bool {
    constraints.iter().enumerate().all(|(j, c)| match c {
        CoordConstraint::Free => true,
        CoordConstraint::Zero => x[j].is_zero(),
        CoordConstraint::Ge1 => x[j] >= BigInt::one(),
        CoordConstraint::ZeroOrGe1 { block } => {
            x[j] >= BigInt::one() || (x[j].is_zero() && x[block.clone()].iter().all(Zero::is_zero))
        }
    })
}

fn split_search(
    lat: &AffineLattice,
    split: &[(usize, Range<usize>)],
    ge1: Vec<usize>,
    budget: &mut Budget,
) -> Result<Option<Vec<BigInt>>, FgabError> {
    let Some(((j, block), rest)) = split.split_first() else {
        return orthant_search(lat, &ge1, budget);
    };
    budget.tick()?;
    // zero case
    let zero = BigInt::zero();
    let mut z = lat.restrict(*j, &zero);
    for k in block.clone() {
        z = z.and_then(|l| l.restrict(k, &zero));
    }
    if let Some(zl) = z {
        if let Some(x) = split_search(&zl, rest, ge1.clone(), budget)? {
            return Ok(Some(x));
        }
    }
    let mut g = ge1;
    g.push(*j);
    g.sort_unstable();
    split_search(lat, rest, g, budget)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// Smallest lattice point search for `x[j] >= 1, j in coords`.
fn orthant_search(
    lat: &AffineLattice,
    coords: &[usize],
    budget: &mut Budget,
) -> Result<Option<Vec<BigInt>>, FgabError> {
    budget.tick()?;
    let one = BigInt::one();
    if coords.iter().all(|&j| lat.base[j] >= one) {
        return Ok(Some(lat.base.clone()));
    }
    let r = lat.basis.cols();
    // Directions d = basis * t with d >= 0 on coords; collect a sum covering
    // every coordinate that can be made positive.
    let mut dir_t = vec![BigRational::zero(); r];
    let mut unbounded = vec![false; coords.len()];
    let mark = |t: &[BigRational], dir_t: &mut Vec<BigRational>, unbounded: &mut Vec<bool>| {
        for (k, v) in t.iter().enumerate() {
            dir_t[k] += v;
        }
        for (ci, &j) in coords.iter().enumerate() {
            let val: BigRational = (0..r).map(|k| rat(&lat.basis[(j, k)]) * &t[k]).sum();
            if val.is_positive() {
                unbounded[ci] = true;
            }
        }
    };
    // cheap pass: single basis columns with a constant sign on coords
    for k in 0..r {
        for sign in [1i64, -1] {
            let s = BigInt::from(sign);
            let ok = coords.iter().all(|&j| !(&lat.basis[(j, k)] * &s).is_negative());
            let pos = coords.iter().any(|&j| (&lat.basis[(j, k)] * &s).is_positive());
            if ok && pos {
                let mut t = vec![BigRational::zero(); r];
                t[k] = rat(&s);
                mark(&t, &mut dir_t, &mut unbounded);
            }
        }
    }
    // exact pass: LP for the rest
    for ci in 0..coords.len() {
        if unbounded[ci] {
            continue;
        }
        budget.tick()?;
        if let Some(t) = positive_direction(lat, coords, coords[ci]) {
            mark(&t, &mut dir_t, &mut unbounded);
        }
    }
    if unbounded.iter().all(|&u| u) {
        // integral direction from the rational combination
        let den = dir_t
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let t_int: Vec<BigInt> = dir_t.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let d = lat.basis.mul_vec(&t_int);
        let mut steps = BigInt::zero();
        for &j in coords {
            debug_assert!(d[j].is_positive());
            let need = ceil_div(&(&one - &lat.base[j]), &d[j]);
            if need > steps {
                steps = need;
            }
        }
        let x: Vec<BigInt> = lat.base.iter().zip(&d).map(|(b, dj)| b + dj * &steps).collect();
        return Ok(Some(x));
    }
    // first bounded coordinate: enumerate its values within the LP bound
    let ci = unbounded.iter().position(|&u| !u).expect("a bounded coordinate");
    let j = coords[ci];
    let Some(upper) = lp_upper_bound(lat, coords, j) else {
        return Ok(None);
    };
    let rest: Vec<usize> = coords.iter().copied().filter(|&c| c != j).collect();
    let mut v = one.clone();
    while v <= upper {
        if let Some(sub) = lat.restrict(j, &v) {
            if let Some(x) = orthant_search(&sub, &rest, budget)? {
                return Ok(Some(x));
            }
        } else {
            budget.tick()?;
        }
        v += 1;
    }
    Ok(None)
}

/// Splits free parameters into nonnegative pairs: variables `[t+ | t-]`.
fn split_rows(lat: &AffineLattice, rows: &[usize]) -> Vec<Vec<BigRational>> {
    let r = lat.basis.cols();
    rows.iter()
        .map(|&j| {
            let mut row = Vec::with_capacity(2 * r);
            for k in 0..r {
                row.push(rat(&lat.basis[(j, k)]));
            }
            for k in 0..r {
                row.push(-rat(&lat.basis[(j, k)]));
            }
            row
        })
        .collect()
}

/// Some `t` with `(basis t)[c] >= 0` for all `c in coords` and `(basis t)[target] > 0`.
fn positive_direction(lat: &AffineLattice, coords: &[usize], target: usize) -> Option<Vec<BigRational>> {
    let r = lat.basis.cols();
    if r == 0 {
        return None;
    }
    // -basis_c t <= 0 for c in coords, basis_target t <= 1; maximize basis_target t
    let mut a: Vec<Vec<BigRational>> = split_rows(lat, coords)
        .into_iter()
        .map(|row| row.into_iter().map(|v| -v).collect())
        .collect();
    let mut b = vec![BigRational::zero(); coords.len()];
    let obj = split_rows(lat, &[target]).remove(0);
    a.push(obj.clone());
    b.push(BigRational::one());
    match maximize(&a, &b, &obj) {
        LpOutcome::Optimal { value, x } if value.is_positive() => {
            Some((0..r).map(|k| &x[k] - &x[r + k]).collect())
        }
        LpOutcome::Optimal { .. } => None,
        LpOutcome::Infeasible | LpOutcome::Unbounded => {
            unreachable!("direction LP is feasible at 0 and bounded by 1")
        }
    }
}

/// floor(max x[target]) over the real relaxation of `x in lat, x[c] >= 1 (c in coords)`;
/// `None` if the relaxation is empty or the bound is below 1.
fn lp_upper_bound(lat: &AffineLattice, coords: &[usize], target: usize) -> Option<BigInt> {
    // -(base_c + basis_c t) <= -1   ->   -basis_c t <= base_c - 1
    let a: Vec<Vec<BigRational>> = split_rows(lat, coords)
        .into_iter()
        .map(|row| row.into_iter().map(|v| -v).collect())
        .collect();
    let b: Vec<BigRational> = coords.iter().map(|&c| rat(&(&lat.base[c] - 1))).collect();
    let obj = split_rows(lat, &[target]).remove(0);
    let bound = match maximize(&a, &b, &obj) {
        LpOutcome::Infeasible => return None,
        LpOutcome::Optimal { value, .. } => (rat(&lat.base[target]) + value).floor().to_integer(),
        LpOutcome::Unbounded => unreachable!("coordinate without a positive direction is bounded"),
    };
    (bound >= BigInt::one()).then_some(bound)
}

/// Number of candidate values an LP bound would enumerate; used in diagnostics.
#[allow(dead_code)]
pub(crate) fn span(upper: &BigInt) -> u64 {
    upper.to_u64().unwrap_or(u64::MAX)
}
