use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::fgab::{feasible_constrained, IntMatrix};
use crate::poset::{bit, LowerSet};

use super::{MonElem, Monoid, MonoidError, RefinementSquare};

type Tuple = [LowerSet; 4];

impl Monoid {
    /// A refinement of `x1 + x2 = y1 + y2`, found by searching support tuples in
    /// order of total size, then lexicographically.
    pub fn refine(&self, x1: &MonElem, x2: &MonElem, y1: &MonElem, y2: &MonElem) -> Result<RefinementSquare, MonoidError> {
        if !self.eq(&self.add(x1, x2), &self.add(y1, y2)) {
            return Err(MonoidError::PreconditionViolated("x1 + x2 and y1 + y2 differ".into()));
        }
        let mut budget = self.budget();
        for t in self.support_tuples(x1, x2, y1, y2) {
            if !self.n_values_refine(&t, x1, x2, y1, y2) {
                continue;
            }
            if let Some(sq) = self.solve_tuple(&t, [x1, x2, y1, y2], &mut budget)? {
                if !self.square_is_valid(&sq, x1, x2, y1, y2) {
                    return Err(MonoidError::InternalInvariantViolation("refinement square fails validation".into()));
                }
                return Ok(sq);
            }
        }
        Err(MonoidError::InternalInvariantViolation("no support tuple admits a refinement".into()))
    }

    fn support_tuples(&self, x1: &MonElem, x2: &MonElem, y1: &MonElem, y2: &MonElem) -> Vec<Tuple> {
        let p = self.system().poset();
        let (a1, a2, b1, b2) = (x1.support, x2.support, y1.support, y2.support);
        let within = |m: LowerSet| p.lower_sets_within(m);
        let l11 = within(a1.intersection(b1));
        let l12 = within(a1.intersection(b2));
        let l21 = within(a2.intersection(b1));
        let l22 = within(a2.intersection(b2));
        let mut out = Vec::new();
        for &c11 in &l11 {
            for &c12 in l12.iter().filter(|c| c11.union(**c) == a1) {
                for &c21 in l21.iter().filter(|c| c11.union(**c) == b1) {
                    for &c22 in &l22 {
                        if c21.union(c22) == a2 && c12.union(c22) == b2 {
                            out.push([c11, c12, c21, c22]);
                        }
                    }
                }
            }
        }
        out.sort_by_key(|u| (u.iter().map(|c| c.len()).sum::<usize>(), u.map(|c| c.0)));
        out
    }

    /// The `n` values at each free element must refine as nonnegative integers: a cell
    /// containing `j` as a maximal element carries `n >= 1`, row and column sums are
    /// fixed where `j` is maximal in the corresponding support.
    fn n_values_refine(&self, t: &Tuple, x1: &MonElem, x2: &MonElem, y1: &MonElem, y2: &MonElem) -> bool {
        let sys = self.system();
        let p = sys.poset();
        let all = x1.support.union(x2.support);
        let rows = [x1, x2];
        let cols = [y1, y2];
        for j in all.iter().filter(|&j| sys.kind(j).is_free()) {
            let n_of = |x: &MonElem| -> Option<i64> {
                (p.max_mask(x.support) & bit(j) != 0).then(|| self.n_at(x, j).to_i64().unwrap_or(i64::MAX))
            };
            let row_n = rows.map(n_of);
            let col_n = cols.map(n_of);
            let cell = |r: usize, s: usize| t[2 * r + s];
            let mut cap = 1i64;
            for v in row_n.iter().chain(&col_n).flatten() {
                cap = cap.max(*v);
            }
            if cap > 8 {
                continue;
            }
            let ranges: Vec<std::ops::RangeInclusive<i64>> = (0..4)
                .map(|k| {
                    let c = cell(k / 2, k % 2);
                    if p.max_mask(c) & bit(j) != 0 {
                        1..=cap
                    } else if c.contains(j) {
                        0..=cap
                    } else {
                        0..=0
                    }
                })
                .collect();
            let mut ok = false;
            'search: for a in ranges[0].clone() {
                for b in ranges[1].clone() {
                    for c in ranges[2].clone() {
                        for d in ranges[3].clone() {
                            let sums = [a + b, c + d, a + c, b + d];
                            let fixed = [row_n[0], row_n[1], col_n[0], col_n[1]];
                            if sums.iter().zip(fixed).all(|(s, f)| f.is_none_or(|f| *s == f)) {
                                ok = true;
                                break 'search;
                            }
                        }
                    }
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn solve_tuple(
        &self,
        t: &Tuple,
        [x1, x2, y1, y2]: [&MonElem; 4],
        budget: &mut crate::fgab::Budget,
    ) -> Result<Option<RefinementSquare>, MonoidError> {
        let widths: Vec<usize> = t.iter().map(|&c| self.coords_len(c)).collect();
        let starts: Vec<usize> = widths.iter().scan(0, |acc, w| {
            let s = *acc;
            *acc += w;
            Some(s)
        }).collect();
        let total: usize = widths.iter().sum();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs = Vec::new();
        let mut moduli = Vec::new();
        // (target element, cells summing to it)
        let eqs: [(&MonElem, [usize; 2]); 4] = [(x1, [0, 1]), (x2, [2, 3]), (y1, [0, 2]), (y2, [1, 3])];
        for (target, cells) in eqs {
            let d = self.support_data(target.support);
            let goal = d.project(&target.vec);
            let mut block = vec![vec![BigInt::zero(); total]; d.q.group.len()];
            for &k in &cells {
                let m = self.projection_columns(&d, t[k]);
                for (r, row) in block.iter_mut().enumerate() {
                    for c in 0..m.cols() {
                        row[starts[k] + c] = m[(r, c)].clone();
                    }
                }
            }
            rows.extend(block);
            rhs.extend(goal.coords);
            moduli.extend(d.q.group.moduli());
        }
        let a = IntMatrix::from_rows(&rows, total);
        let cons: Vec<_> = t
            .iter()
            .zip(&starts)
            .flat_map(|(&c, &s)| {
                self.h_constraints(c).into_iter().map(move |k| match k {
                    crate::fgab::CoordConstraint::ZeroOrGe1 { block } => {
                        crate::fgab::CoordConstraint::ZeroOrGe1 { block: block.start + s..block.end + s }
                    }
                    other => other,
                })
            })
            .collect();
        let Some(sol) = feasible_constrained(&a, &rhs, &moduli, &cons, budget)? else {
            return Ok(None);
        };
        let z: Vec<MonElem> = (0..4)
            .map(|k| MonElem { support: t[k], vec: self.scatter(t[k], &sol[starts[k]..starts[k] + widths[k]]) })
            .collect();
        let [z11, z12, z21, z22]: [MonElem; 4] = z.try_into().expect("four cells");
        Ok(Some(RefinementSquare { z11, z12, z21, z22 }))
    }
}
