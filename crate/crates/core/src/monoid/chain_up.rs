use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::fgab::GroupElem;
use crate::isystem::{Kind, LocalElem};
use crate::poset::LowerSet;

use super::{MonElem, Monoid, MonoidError, RefinementSquare};

impl Monoid {
    /// A refinement built directly from the case analysis for posets whose up-sets
    /// are chains. No search beyond decomposing group elements from below.
    pub fn refine_chain_up(
        &self,
        x1: &MonElem,
        x2: &MonElem,
        y1: &MonElem,
        y2: &MonElem,
    ) -> Result<RefinementSquare, MonoidError> {
        let p = self.system().poset();
        if !p.chain_up_property() {
            return Err(MonoidError::NotChainUp);
        }
        let total = self.add(x1, x2);
        if !self.eq(&total, &self.add(y1, y2)) {
            return Err(MonoidError::PreconditionViolated("x1 + x2 and y1 + y2 differ".into()));
        }
        // the components down(k), k maximal, are disjoint and do not interact
        let mut sq = RefinementSquare { z11: self.zero(), z12: self.zero(), z21: self.zero(), z22: self.zero() };
        for k in p.max_of(total.support) {
            let d = p.down(k);
            let part = self.component(
                k,
                &self.restrict_to(x1, d),
                &self.restrict_to(x2, d),
                &self.restrict_to(y1, d),
                &self.restrict_to(y2, d),
            )?;
            sq = RefinementSquare {
                z11: self.add(&sq.z11, &part.z11),
                z12: self.add(&sq.z12, &part.z12),
                z21: self.add(&sq.z21, &part.z21),
                z22: self.add(&sq.z22, &part.z22),
            };
        }
        if !self.square_is_valid(&sq, x1, x2, y1, y2) {
            return Err(MonoidError::InternalInvariantViolation("chain-up square fails validation".into()));
        }
        Ok(sq)
    }

    /// The part of `x` living over `l`.
    pub(crate) fn restrict_to(&self, x: &MonElem, l: LowerSet) -> MonElem {
        let support = x.support.intersection(l);
        let mut vec = x.vec.clone();
        for i in x.support.iter().filter(|&i| !l.contains(i)) {
            for c in self.range(i) {
                vec[c] = BigInt::zero();
            }
        }
        MonElem { support, vec }
    }

    /// Refinement inside `down(k)`, where all four supports lie.
    fn component(&self, k: usize, x1: &MonElem, x2: &MonElem, y1: &MonElem, y2: &MonElem) -> Result<RefinementSquare, MonoidError> {
        let (mut x1, mut x2) = (self.concentrate(x1), self.concentrate(x2));
        let (mut y1, mut y2) = (self.concentrate(y1), self.concentrate(y2));
        let rows_swapped = !x1.support.contains(k);
        if rows_swapped {
            std::mem::swap(&mut x1, &mut x2);
        }
        let cols_swapped = !y1.support.contains(k);
        if cols_swapped {
            std::mem::swap(&mut y1, &mut y2);
        }
        let z = self.zero();
        let sq = if x2.is_zero() {
            RefinementSquare { z11: y1, z12: y2, z21: z.clone(), z22: z }
        } else if y2.is_zero() {
            RefinementSquare { z11: x1, z12: z.clone(), z21: x2, z22: z }
        } else {
            match (x2.support.contains(k), y2.support.contains(k)) {
                (true, true) => self.top_in_all(k, &x1, &x2, &y1, &y2)?,
                (true, false) => self.top_in_x2(k, &x1, &x2, &y2)?,
                (false, true) => self.top_in_x2(k, &y1, &y2, &x2)?.transpose(),
                (false, false) => {
                    let z11 = self.chi(k, &self.minus_below(k, &self.local(&x1, k), &y2))?;
                    RefinementSquare { z11, z12: y2, z21: x2, z22: self.zero() }
                }
            }
        };
        let sq = if rows_swapped { sq.swap_rows() } else { sq };
        Ok(if cols_swapped { sq.swap_cols() } else { sq })
    }

    /// `v - sum_{d in Max(supp y)} phi^_kd(y_d)` for `y` concentrated below `k`.
    fn minus_below(&self, k: usize, v: &LocalElem, y: &MonElem) -> LocalElem {
        let sys = self.system();
        let g = sys.group(k);
        let mut acc = v.g.clone();
        for d in sys.poset().max_of(y.support) {
            let img = sys.apply_hat(d, k, &self.local(y, d));
            acc = g.sub(&acc, &img);
        }
        LocalElem { n: v.n.clone(), g: acc }
    }

    /// `k` in `supp x1`, `supp x2`, `supp y1` but not `supp y2`.
    fn top_in_x2(&self, k: usize, x1: &MonElem, x2: &MonElem, y2: &MonElem) -> Result<RefinementSquare, MonoidError> {
        let z21 = self.chi(k, &self.minus_below(k, &self.local(x2, k), y2))?;
        Ok(RefinementSquare { z11: x1.clone(), z12: self.zero(), z21, z22: y2.clone() })
    }

    /// All four supports equal `down(k)`; coordinates concentrated at `k`.
    fn top_in_all(&self, k: usize, x1: &MonElem, x2: &MonElem, y1: &MonElem, y2: &MonElem) -> Result<RefinementSquare, MonoidError> {
        let sys = self.system();
        let g = sys.group(k);
        let [a1, a2, b1, b2] = [x1, x2, y1, y2].map(|x| self.local(x, k));
        let lhs: Vec<BigInt> = a1.coords().iter().zip(a2.coords()).map(|(u, v)| u + v).collect();
        let rhs: Vec<BigInt> = b1.coords().iter().zip(b2.coords()).map(|(u, v)| u + v).collect();
        if sys.hat_group(k).reduce(GroupElem { coords: lhs }) != sys.hat_group(k).reduce(GroupElem { coords: rhs }) {
            return Err(MonoidError::InternalInvariantViolation("concentrated sums differ at the top".into()));
        }
        match sys.kind(k) {
            Kind::Reg => {
                let c = |v: GroupElem| self.chi(k, &LocalElem::reg(v));
                Ok(RefinementSquare {
                    z11: c(a1.g.clone())?,
                    z12: c(g.zero())?,
                    z21: c(g.sub(&b1.g, &a1.g))?,
                    z22: c(b2.g)?,
                })
            }
            Kind::Free => {
                let n = |x: &LocalElem| x.n.clone().expect("free coordinate");
                let (n1, n2, m1) = (n(&a1), n(&a2), n(&b1));
                let t = BigInt::one().max(&m1 - &n2 + 1);
                let alpha = [t.clone(), &n1 - &t, &m1 - &t, &n2 - &m1 + &t];
                let beta = [a1.g.clone(), g.zero(), g.sub(&b1.g, &a1.g), b2.g.clone()];
                let mut cells = Vec::with_capacity(4);
                for (al, be) in alpha.into_iter().zip(beta) {
                    cells.push(if al.is_zero() {
                        let parts = self.decompose_via_c2(k, &be)?;
                        let elems = parts.iter().map(|(d, v)| self.chi(*d, v)).collect::<Result<Vec<_>, _>>()?;
                        self.sum(&elems)
                    } else {
                        self.chi(k, &LocalElem::free(al, be))?
                    });
                }
                let [z11, z12, z21, z22]: [MonElem; 4] = cells.try_into().expect("four cells");
                Ok(RefinementSquare { z11, z12, z21, z22 })
            }
        }
    }
}
