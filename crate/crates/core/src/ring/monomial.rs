use std::cmp::Ordering;

use smallvec::SmallVec;

/// Sparse exponent vector: `(variable index, exponent)` pairs sorted by index,
/// with no zero exponents stored.
///
/// The derived-looking [`Ord`] is the lexicographic order in which a smaller
/// variable index has higher priority. Monomial orders relabel variables by
/// rank so that every lex order reduces to this comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector(SmallVec<[(u16, u16); 6]>);

impl ExponentVector {
    pub fn one() -> Self {
        ExponentVector(SmallVec::new())
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u16) -> Self {
        let mut v = SmallVec::new();
        if exp > 0 {
            v.push((index as u16, exp));
        }
        ExponentVector(v)
    }

    /// Builds from arbitrary `(index, exponent)` pairs, merging repeats.
    ///
    /// Returns `None` when a merged exponent exceeds `u16::MAX`.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Option<Self> {
        let mut v: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut out: SmallVec<[(u16, u16); 6]> = SmallVec::new();
        for (i, e) in v {
            match out.last_mut() {
                Some(last) if last.0 as usize == i => {
                    last.1 = u16::try_from(last.1 as u32 + e).ok()?;
                }
                _ => out.push((i as u16, u16::try_from(e).ok()?)),
            }
        }
        Some(ExponentVector(out))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e))
    }

    pub fn exponent(&self, index: usize) -> u16 {
        self.0
            .iter()
            .find(|&&(i, _)| i as usize == index)
            .map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(i, _)| i as usize)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1.checked_add(b[j].1).expect("exponent overflow");
                    out.push((a[i].0, e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ExponentVector(out)
    }

    pub fn divides(&self, o: &Self) -> bool {
        let mut j = 0;
        let b = &o.0;
        for &(v, e) in &self.0 {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `o / self`, if `self` divides `o`.
    pub fn quotient_of(&self, o: &Self) -> Option<Self> {
        if !self.divides(o) {
            return None;
        }
        let mut out = SmallVec::new();
        for &(v, e) in &o.0 {
            let d = e - self.exponent(v as usize);
            if d > 0 {
                out.push((v, d));
            }
        }
        Some(ExponentVector(out))
    }

    pub fn lcm(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ExponentVector(out)
    }

    /// No variable occurs in both monomials.
    pub fn is_coprime(&self, o: &Self) -> bool {
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Renames variable `i` to `map[i]`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let mut v: SmallVec<[(u16, u16); 6]> =
            self.0.iter().map(|&(i, e)| (map[i as usize] as u16, e)).collect();
        v.sort_unstable_by_key(|p| p.0);
        ExponentVector(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        for k in 0..a.len().min(b.len()) {
            let ((va, ea), (vb, eb)) = (a[k], b[k]);
            if va != vb {
                // the side holding the higher-priority variable is larger
                return vb.cmp(&va);
            }
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(pairs: &[(usize, u32)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn basic_ops() {
        let a = mono(&[(0, 1), (3, 2)]);
        let b = mono(&[(3, 1), (5, 1)]);
        assert_eq!(a.mul(&b), mono(&[(0, 1), (3, 3), (5, 1)]));
        assert_eq!(a.lcm(&b), mono(&[(0, 1), (3, 2), (5, 1)]));
        assert!(!a.is_coprime(&b));
        assert!(mono(&[(1, 1)]).is_coprime(&b));
        assert!(b.divides(&a.mul(&b)));
        assert_eq!(b.quotient_of(&a.mul(&b)), Some(a.clone()));
        assert_eq!(a.quotient_of(&b), None);
        assert_eq!(a.degree(), 3);
        assert!(!a.is_squarefree());
    }

    #[test]
    fn natural_lex() {
        // x0 > x1^5
        assert!(mono(&[(0, 1)]) > mono(&[(1, 5)]));
        assert!(mono(&[(0, 2)]) > mono(&[(0, 1), (1, 9)]));
        assert!(mono(&[(0, 1), (1, 1)]) > mono(&[(0, 1)]));
        assert!(ExponentVector::one() < mono(&[(7, 1)]));
    }

    #[test]
    fn exponent_overflow_is_detected() {
        assert!(ExponentVector::from_pairs([(0, 70_000)]).is_none());
        assert!(ExponentVector::from_pairs([(0, 40_000), (0, 40_000)]).is_none());
    }

    fn arb_mono() -> impl Strategy<Value = ExponentVector> {
        proptest::collection::vec((0usize..6, 0u32..4), 0..5)
            .prop_map(|v| ExponentVector::from_pairs(v).unwrap())
    }

    proptest! {
        #[test]
        fn lex_is_a_monomial_order(u in arb_mono(), v in arb_mono(), w in arb_mono()) {
            prop_assert!(ExponentVector::one() <= u);
            prop_assert_eq!(u.cmp(&v), v.cmp(&u).reverse());
            prop_assert_eq!(u.cmp(&v), u.mul(&w).cmp(&v.mul(&w)));
            prop_assert_eq!(u.cmp(&v) == Ordering::Equal, u == v);
        }

        #[test]
        fn lcm_is_divisible(u in arb_mono(), v in arb_mono()) {
            let l = u.lcm(&v);
            prop_assert!(u.divides(&l) && v.divides(&l));
            prop_assert_eq!(u.is_coprime(&v), l == u.mul(&v));
        }
    }
}
