use std::cmp::Ordering;

use super::{ExponentVector, Ring, RingError, Variable};

/// Lexicographic order given by an explicit variable priority list
/// (highest priority first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    priority: Vec<usize>,
    rank: Vec<usize>,
}

impl MonomialOrder {
    /// Lex order from a priority list over ring variable indices. The list
    /// must be a permutation of `0..nvars`.
    pub fn from_indices(priority: Vec<usize>) -> Result<Self, RingError> {
        let n = priority.len();
        let mut rank = vec![usize::MAX; n];
        for (r, &v) in priority.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(RingError::InvalidOrder(format!(
                    "priority list is not a permutation (index {v})"
                )));
            }
            rank[v] = r;
        }
        Ok(MonomialOrder { priority, rank })
    }

    /// Lex order listing every ring variable exactly once.
    pub fn lex(ring: &Ring, priority: &[Variable]) -> Result<Self, RingError> {
        if priority.len() != ring.nvars() {
            return Err(RingError::InvalidOrder(format!(
                "{} variables listed, ring has {}",
                priority.len(),
                ring.nvars()
            )));
        }
        let idx = priority
            .iter()
            .map(|&v| {
                ring.index_of(v)
                    .ok_or_else(|| RingError::UnknownVariable(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(idx)
    }

    /// Lex order with `head` on top; the remaining variables follow in ring
    /// order (X row-major, then y_1 > ... > y_n, then auxiliaries).
    pub fn lex_completed(ring: &Ring, head: &[Variable]) -> Result<Self, RingError> {
        let mut prio = Vec::with_capacity(ring.nvars());
        for &v in head {
            let i = ring
                .index_of(v)
                .ok_or_else(|| RingError::UnknownVariable(v.to_string()))?;
            if prio.contains(&i) {
                return Err(RingError::InvalidOrder(format!("{v} listed twice")));
            }
            prio.push(i);
        }
        for i in 0..ring.nvars() {
            if !prio.contains(&i) {
                prio.push(i);
            }
        }
        Self::from_indices(prio)
    }

    /// Block order on a ring extended by `aux`: the auxiliaries (in the given
    /// sequence) sit strictly above every variable of `self`.
    pub fn eliminating(&self, aux: &[usize]) -> Self {
        let mut prio = aux.to_vec();
        prio.extend(self.priority.iter().copied());
        Self::from_indices(prio).expect("auxiliary indices extend the base ring")
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn rank(&self, var: usize) -> usize {
        self.rank[var]
    }

    pub(crate) fn rank_map(&self) -> &[usize] {
        &self.rank
    }

    /// Lex comparison; panics on variables outside the order.
    pub fn cmp(&self, u: &ExponentVector, v: &ExponentVector) -> Ordering {
        u.relabel(&self.rank).cmp(&v.relabel(&self.rank))
    }

    pub fn compare(&self, u: &ExponentVector, v: &ExponentVector) -> Result<Ordering, RingError> {
        for m in [u, v] {
            if let Some(i) = m.max_var() {
                if i >= self.nvars() {
                    return Err(RingError::VariableNotInOrder(i));
                }
            }
        }
        Ok(self.cmp(u, v))
    }

    /// Textual form, e.g. `order lex: y[1] > y[2] > x[1][1] > ...`.
    pub fn describe(&self, ring: &Ring) -> String {
        let names: Vec<String> = self
            .priority
            .iter()
            .map(|&i| ring.variable(i).to_string())
            .collect();
        format!("order lex: {}", names.join(" > "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffField;
    use proptest::prelude::*;

    fn ring22() -> Ring {
        let mut v = vec![];
        for i in 1..=2 {
            for j in 1..=2 {
                v.push(Variable::X(i, j));
            }
            v.push(Variable::Y(i));
        }
        Ring::new(CoeffField::Rationals, v)
    }

    fn m(r: &Ring, vars: &[(Variable, u32)]) -> ExponentVector {
        ExponentVector::from_pairs(vars.iter().map(|&(v, e)| (r.index_of(v).unwrap(), e))).unwrap()
    }

    #[test]
    fn diagonal_chain_dominates() {
        let r = ring22();
        let o = MonomialOrder::lex_completed(&r, &[Variable::X(1, 1), Variable::X(2, 2)]).unwrap();
        let a = m(&r, &[(Variable::X(1, 1), 1), (Variable::Y(1), 1)]);
        let b = m(&r, &[(Variable::X(1, 2), 1), (Variable::Y(2), 1)]);
        assert_eq!(o.compare(&a, &b), Ok(Ordering::Greater));
        assert_eq!(o.compare(&a, &a), Ok(Ordering::Equal));
    }

    #[test]
    fn y_first_order() {
        let r = ring22();
        let o = MonomialOrder::lex_completed(&r, &[Variable::Y(1), Variable::Y(2)]).unwrap();
        let a = m(&r, &[(Variable::Y(2), 1), (Variable::X(1, 1), 1)]);
        let b = m(&r, &[(Variable::X(1, 1), 2)]);
        assert_eq!(o.compare(&a, &b), Ok(Ordering::Greater));
        assert_eq!(
            o.describe(&r),
            "order lex: y[1] > y[2] > x[1][1] > x[1][2] > x[2][1] > x[2][2]"
        );
    }

    #[test]
    fn invalid_orders() {
        let r = ring22();
        assert!(MonomialOrder::lex(&r, &[Variable::Y(1)]).is_err());
        assert!(MonomialOrder::lex_completed(&r, &[Variable::Y(1), Variable::Y(1)]).is_err());
        assert!(matches!(
            MonomialOrder::lex_completed(&r, &[Variable::Y(3)]),
            Err(RingError::UnknownVariable(_))
        ));
        let o = MonomialOrder::lex_completed(&r, &[]).unwrap();
        assert_eq!(
            o.compare(&ExponentVector::var(9), &ExponentVector::one()),
            Err(RingError::VariableNotInOrder(9))
        );
    }

    fn arb_mono() -> impl Strategy<Value = ExponentVector> {
        proptest::collection::vec((0usize..6, 0u32..4), 0..5)
            .prop_map(|v| ExponentVector::from_pairs(v).unwrap())
    }

    proptest! {
        #[test]
        fn order_axioms(
            perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
            u in arb_mono(), v in arb_mono(), w in arb_mono()
        ) {
            let o = MonomialOrder::from_indices(perm).unwrap();
            prop_assert_eq!(o.cmp(&ExponentVector::one(), &u) == Ordering::Greater, false);
            prop_assert_eq!(o.cmp(&u, &v), o.cmp(&v, &u).reverse());
            prop_assert_eq!(o.cmp(&u, &v), o.cmp(&u.mul(&w), &v.mul(&w)));
            prop_assert_eq!(o.cmp(&u, &v) == Ordering::Equal, u == v);
        }
    }
}
