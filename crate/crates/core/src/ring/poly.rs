use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{Coeff, CoeffError, CoeffField};

use super::{ExponentVector, MonomialOrder, RingError};

pub type Term = (ExponentVector, Coeff);

/// Sparse polynomial over an exact field.
///
/// Terms are kept strictly descending under the natural index order of
/// [`ExponentVector`], with no zero coefficients; the zero polynomial has no
/// terms. Equality is therefore structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(c, ExponentVector::one())
    }

    pub fn monomial(c: Coeff, m: ExponentVector) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Collects terms in any order, combining equal monomials.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: HashMap<ExponentVector, Coeff> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = &*e + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { terms }
    }

    /// Trusts that `terms` is already canonical.
    pub(crate) fn from_sorted(terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn field(&self) -> Option<CoeffField> {
        self.terms.first().map(|t| t.1.field())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.iter().all(|t| t.0.degree() == d)
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0.exponent(var) > 0)
    }

    /// Natural-order leading term (lowest variable index has priority).
    pub(crate) fn head(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Result<(Coeff, ExponentVector), RingError> {
        let mut best: Option<&Term> = None;
        for t in &self.terms {
            order.compare(&t.0, &t.0)?;
            best = match best {
                Some(b) if order.cmp(&b.0, &t.0) != Ordering::Less => Some(b),
                _ => Some(t),
            };
        }
        best.map(|(m, c)| (c.clone(), m.clone()))
            .ok_or(RingError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<ExponentVector> {
        self.leading_term(order).ok().map(|t| t.1)
    }

    fn check_field(&self, o: &Self) -> Result<(), CoeffError> {
        match (self.field(), o.field()) {
            (Some(a), Some(b)) if a != b => Err(CoeffError::FieldMismatch(a, b)),
            _ => Ok(()),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, CoeffError> {
        self.check_field(o)?;
        Ok(self.merge(o, false))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, CoeffError> {
        self.check_field(o)?;
        Ok(self.merge(o, true))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, CoeffError> {
        self.check_field(o)?;
        Ok(self.product(o))
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let other = |c: &Coeff| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), other(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), other(c))));
        Polynomial { terms: out }
    }

    fn product(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].1, &o.terms[0].0);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].1, &self.terms[0].0);
        }
        Self::from_terms(self.terms.iter().flat_map(|(ma, ca)| {
            o.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))
        }))
    }

    /// `c * m * self`; multiplying by a monomial preserves term order.
    pub fn mul_term(&self, c: &Coeff, m: &ExponentVector) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(mt, ct)| (mt.mul(m), ct * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.mul_term(c, &ExponentVector::one())
    }

    /// `self - c * m * g`, fused.
    pub(crate) fn sub_mul_term(&self, c: &Coeff, m: &ExponentVector, g: &Self) -> Self {
        Polynomial {
            terms: sub_scaled(&self.terms, c, m, &g.terms),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let field = self.field().unwrap_or_default();
        let mut acc = Self::constant(field.one());
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    /// Scales so that the natural-order head coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero head")),
            _ => self.clone(),
        }
    }

    /// Exact division by a polynomial that is known to divide `self`.
    ///
    /// Returns `None` when the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.head()?;
        let inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let qm = dm.quotient_of(&m)?;
            let qc = &c * &inv;
            rem = rem.sub_mul_term(&qc, &qm, d);
            q.push((qm, qc));
        }
        Some(Polynomial::from_sorted(q))
    }

    /// Renames variable `i` to `map[i]`, re-sorting terms.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(m, c)| (m.relabel(map), c.clone()))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { terms }
    }

    /// Substitutes `value` for variable `var`.
    pub fn substitute(&self, var: usize, value: &Self) -> Self {
        let mut acc = Self::zero();
        let mut powers: Vec<Self> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            let rest = ExponentVector::from_pairs(
                m.iter().filter(|&(i, _)| i != var).map(|(i, e)| (i, e as u32)),
            )
            .expect("exponents unchanged");
            while powers.len() <= e {
                let next = match powers.last() {
                    None => Self::constant(c.field().one()),
                    Some(p) => p.product(value),
                };
                powers.push(next);
            }
            acc = acc.merge(&powers[e].mul_term(c, &rest), false);
        }
        acc
    }
}

/// `a - c * m * g` on canonical term slices.
pub(crate) fn sub_scaled(a: &[Term], c: &Coeff, m: &ExponentVector, g: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let next_g = |j: usize| (g[j].0.mul(m), &g[j].1 * c);
    let mut pending = if g.is_empty() { None } else { Some(next_g(0)) };
    while i < a.len() {
        let Some((gm, gc)) = pending.take() else { break };
        match a[i].0.cmp(&gm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
                pending = Some((gm, gc));
            }
            Ordering::Less => {
                out.push((gm, -gc));
                j += 1;
                pending = (j < g.len()).then(|| next_g(j));
            }
            Ordering::Equal => {
                let d = &a[i].1 - &gc;
                if !d.is_zero() {
                    out.push((gm, d));
                }
                i += 1;
                j += 1;
                pending = (j < g.len()).then(|| next_g(j));
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    if let Some((gm, gc)) = pending {
        out.push((gm, -gc));
        j += 1;
        while j < g.len() {
            let (gm, gc) = next_g(j);
            out.push((gm, -gc));
            j += 1;
        }
    }
    out
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, o: &Polynomial) -> Polynomial {
                self.$checked(o).expect("polynomial field mismatch")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, o: Polynomial) -> Polynomial {
                (&self).$method(&o)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
