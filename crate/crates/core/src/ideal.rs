//! Ideal-level operations built on elimination: membership, equality,
//! intersection, colon ideals, saturation and bracket ideals.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, Budget, GbStats, GroebnerBasis};
use crate::ring::{MonomialOrder, Polynomial, Ring, Variable};

/// The ideal generated by a list of polynomials of one ring.
///
/// Gröbner bases are computed lazily and cached per monomial order. The
/// cache is the only mutable state; concurrent readers share it.
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    budget: Budget,
    carried: GbStats,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            budget: self.budget.clone(),
            carried: self.carried,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| self.ring.fmt_poly(g, None)).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

/// The y-first lex order y_1 > ... > y_n > x (row-major) > auxiliaries, used
/// as the canonical order for ideal equality.
pub fn canonical_order(ring: &Ring) -> MonomialOrder {
    let ys: Vec<Variable> = ring
        .vars()
        .iter()
        .copied()
        .filter(|v| matches!(v, Variable::Y(_)))
        .collect();
    MonomialOrder::lex_completed(ring, &ys).expect("ring variables")
}

impl Ideal {
    pub fn new(ring: Arc<Ring>, gens: Vec<Polynomial>) -> Self {
        Ideal {
            ring,
            gens,
            budget: Budget::default(),
            carried: GbStats::default(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    fn derived(&self, gens: Vec<Polynomial>) -> Ideal {
        Ideal::new(self.ring.clone(), gens).with_budget(self.budget.clone())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn canonical_order(&self) -> MonomialOrder {
        canonical_order(&self.ring)
    }

    /// Reduced Gröbner basis under `order`, cached.
    pub fn groebner(&self, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(order) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(buchberger(&self.gens, order, &self.budget)?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(cache.entry(order.clone()).or_insert(gb).clone())
    }

    pub fn canonical_basis(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner(&self.canonical_order())
    }

    fn seed(&self, gb: GroebnerBasis) {
        self.cache
            .write()
            .expect("cache lock")
            .entry(gb.order().clone())
            .or_insert_with(|| Arc::new(gb));
    }

    /// Statistics of the computations that produced this ideal plus those
    /// of every cached basis.
    pub fn stats(&self) -> GbStats {
        let mut s = self.carried;
        for gb in self.cache.read().expect("cache lock").values() {
            s.absorb(gb.stats());
        }
        s
    }

    pub fn member(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.canonical_basis()?.contains(p))
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        let gb = self.canonical_basis()?;
        Ok(other.gens.iter().all(|g| gb.contains(g)))
    }

    /// Equality by comparing reduced bases under the canonical order.
    pub fn equal(&self, other: &Ideal) -> Result<bool> {
        Ok(self.canonical_basis()?.basis() == other.canonical_basis()?.basis())
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        self.derived(self.gens.iter().chain(&other.gens).cloned().collect())
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        self.derived(gens)
    }

    /// `I^k`, generated by all k-fold products of generators.
    pub fn power(&self, k: u32) -> Ideal {
        let one = self.ring.constant(1);
        let mut layer: Vec<(usize, Polynomial)> = vec![(0, one)];
        for _ in 0..k {
            let mut next = Vec::new();
            for (start, p) in &layer {
                for (j, g) in self.gens.iter().enumerate().skip(*start) {
                    next.push((j, p * g));
                }
            }
            layer = next;
        }
        self.derived(layer.into_iter().map(|(_, p)| p).collect())
    }

    /// Eliminates the auxiliary variables from a basis computed in an
    /// extended ring; the result lives in `self`'s ring.
    fn eliminate(&self, ring: &Ring, aux: &[usize], gens: Vec<Polynomial>) -> Result<Ideal> {
        let base = self.canonical_order();
        let order = base.eliminating(aux);
        debug_assert_eq!(order.nvars(), ring.nvars());
        let gb = buchberger(&gens, &order, &self.budget)?;
        let kept: Vec<Polynomial> = gb
            .basis()
            .iter()
            .filter(|g| !aux.iter().any(|&a| g.mentions(a)))
            .cloned()
            .collect();
        let out = self.derived(kept.clone());
        // t-free part of a block-order reduced basis is the reduced basis of the elimination ideal
        let mut restricted = GroebnerBasis::from_parts(base, kept, true);
        restricted.set_stats(*gb.stats());
        out.seed(restricted);
        Ok(out)
    }

    /// `I ∩ J` via elimination of t from t·I + (1 − t)·J.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        let (ring, aux) = self.ring.with_aux(1);
        let t = Polynomial::monomial(ring.field().one(), crate::ring::ExponentVector::var(aux[0]));
        let one_minus_t = &ring.constant(1) - &t;
        let gens = self
            .gens
            .iter()
            .map(|f| &t * f)
            .chain(other.gens.iter().map(|g| &one_minus_t * g))
            .collect();
        self.eliminate(&ring, &aux, gens)
    }

    /// Colon ideal `I : f`.
    pub fn quotient(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::InvalidArgument("quotient by the zero polynomial".into()));
        }
        let meet = self.intersect(&self.derived(vec![f.clone()]))?;
        let gens = meet
            .gens
            .iter()
            .map(|g| {
                g.exact_div(f)
                    .expect("generators of I ∩ <f> are multiples of f")
            })
            .collect();
        let mut out = self.derived(gens);
        out.carried = meet.stats();
        Ok(out)
    }

    /// Saturation `I : f^∞` via elimination of z from I + ⟨z·f − 1⟩.
    pub fn saturate(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::InvalidArgument("saturation by the zero polynomial".into()));
        }
        let (ring, aux) = self.ring.with_aux(1);
        let z = Polynomial::monomial(ring.field().one(), crate::ring::ExponentVector::var(aux[0]));
        let mut gens = self.gens.clone();
        gens.push(&(&z * f) - &ring.constant(1));
        self.eliminate(&ring, &aux, gens)
    }

    /// Saturation by repeated colon ideals until the chain stabilizes.
    pub fn saturate_iterated(&self, f: &Polynomial) -> Result<(Ideal, u32)> {
        let mut cur = self.clone();
        let mut steps = 0;
        loop {
            let mut next = cur.quotient(f)?;
            steps += 1;
            next.carried.absorb(&cur.stats());
            if next.equal(&cur)? {
                return Ok((cur, steps - 1));
            }
            cur = next;
        }
    }

    /// Bracket ideal of a tower: elements multiplied into ⟨gens⟩ by powers of
    /// the leading coefficients. Computed as the saturation by the product of
    /// the distinct leading coefficients.
    pub fn bracket(ring: Arc<Ring>, gens: &[Polynomial], lead_coeffs: &[Polynomial], budget: &Budget) -> Result<Ideal> {
        if gens.len() != lead_coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} generators but {} leading coefficients",
                gens.len(),
                lead_coeffs.len()
            )));
        }
        if lead_coeffs.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidArgument("zero leading coefficient".into()));
        }
        let mut distinct: Vec<&Polynomial> = Vec::new();
        for a in lead_coeffs {
            if !distinct.contains(&a) {
                distinct.push(a);
            }
        }
        let product = distinct
            .into_iter()
            .fold(ring.constant(1), |acc, a| &acc * a);
        let base = Ideal::new(ring, gens.to_vec()).with_budget(budget.clone());
        if product.total_degree() == 0 {
            return Ok(base);
        }
        base.saturate(&product)
    }

    /// True when every leading monomial of the reduced basis under `order`
    /// is squarefree. Then the ideal is radical: if fᵏ ∈ I, the leading term
    /// of the remainder of f would be divisible by some leading term.
    pub fn squarefree_lt_radical_witness(&self, order: &MonomialOrder) -> Result<bool> {
        let gb = self.groebner(order)?;
        Ok(gb.leading_monomials().iter().all(|m| m.is_squarefree()))
    }
}

/// Coefficient of the highest power of `var` in `p`, with that degree.
pub fn leading_coefficient_in(p: &Polynomial, var: usize) -> (u16, Polynomial) {
    let deg = p.terms().iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0);
    let terms = p
        .terms()
        .iter()
        .filter(|(m, _)| m.exponent(var) == deg)
        .map(|(m, c)| {
            let rest = crate::ring::ExponentVector::from_pairs(
                m.iter().filter(|&(i, _)| i != var).map(|(i, e)| (i, e as u32)),
            )
            .expect("same exponents");
            (rest, c.clone())
        });
    (deg, Polynomial::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffField;

    fn ring2() -> Arc<Ring> {
        let mut v = vec![];
        for i in 1..=2 {
            for j in 1..=2 {
                v.push(Variable::X(i, j));
            }
            v.push(Variable::Y(i));
        }
        Arc::new(Ring::new(CoeffField::Rationals, v))
    }

    fn ideal(r: &Arc<Ring>, text: &str) -> Ideal {
        Ideal::new(r.clone(), r.parse_poly_list(text, &Default::default()).unwrap())
    }

    const G: &str = "x[1][1]*y[1] + x[1][2]*y[2], x[2][1]*y[1] + x[2][2]*y[2]";
    const DET: &str = "x[1][1]*x[2][2] - x[1][2]*x[2][1]";

    #[test]
    fn membership() {
        let r = ring2();
        let i2 = ideal(&r, G);
        let det = r.parse_poly(DET).unwrap();
        assert!(i2.member(&(&det * &r.y(2))).unwrap());
        assert!(!i2.member(&r.y(2)).unwrap());
        assert!(!i2.member(&det).unwrap());
        let g1 = ideal(&r, "x[1][1]*y[1] + x[1][2]*y[2]");
        assert!(g1.member(&g1.generators()[0]).unwrap());
    }

    #[test]
    fn principal_intersection() {
        let r = ring2();
        let a = ideal(&r, "y[1]");
        let b = ideal(&r, "x[1][1]");
        let c = a.intersect(&b).unwrap();
        assert!(c.equal(&ideal(&r, "x[1][1]*y[1]")).unwrap());
        let i2 = ideal(&r, G);
        assert!(i2.intersect(&i2).unwrap().equal(&i2).unwrap());
    }

    #[test]
    fn two_by_two_decomposition() {
        let r = ring2();
        let i2 = ideal(&r, G);
        let ys = ideal(&r, "y[1], y[2]");
        let p = ideal(&r, &format!("{G}, {DET}"));
        let c = ys.intersect(&p).unwrap();
        assert!(c.equal(&i2).unwrap());
        assert!(!i2.equal(&p).unwrap());
        assert!(i2.equal(&i2.sum(&ideal(&r, "0"))).unwrap());
    }

    #[test]
    fn quotients() {
        let r = ring2();
        let p = ideal(&r, &format!("{G}, {DET}"));
        assert!(p.quotient(&r.y(2)).unwrap().equal(&p).unwrap());
        let m = ideal(&r, "x[1][1]*y[1]");
        assert!(m.quotient(&r.y(1)).unwrap().equal(&ideal(&r, "x[1][1]")).unwrap());
        let i2 = ideal(&r, G);
        let det = r.parse_poly(DET).unwrap();
        assert!(i2.quotient(&det).unwrap().equal(&ideal(&r, "y[1], y[2]")).unwrap());
        assert!(m.quotient(&Polynomial::zero()).is_err());
    }

    #[test]
    fn saturations() {
        let r = ring2();
        let i2 = ideal(&r, G);
        let p = ideal(&r, &format!("{G}, {DET}"));
        let s = i2.saturate(&r.y(2)).unwrap();
        assert!(s.equal(&p).unwrap());
        assert!(s.saturate(&r.y(2)).unwrap().equal(&s).unwrap());
        let (it, steps) = i2.saturate_iterated(&r.y(2)).unwrap();
        assert!(it.equal(&s).unwrap());
        assert_eq!(steps, 1);
        let m = ideal(&r, "x[1][1]*y[1]");
        assert!(m.saturate(&r.y(1)).unwrap().equal(&ideal(&r, "x[1][1]")).unwrap());
    }

    #[test]
    fn brackets() {
        let r = ring2();
        let g1 = r.parse_poly("x[1][1]*y[1] + x[1][2]*y[2]").unwrap();
        let b = Ideal::bracket(r.clone(), std::slice::from_ref(&g1), &[r.y(2)], &Budget::default()).unwrap();
        assert!(b.equal(&ideal(&r, "x[1][1]*y[1] + x[1][2]*y[2]")).unwrap());
        let unit = Ideal::bracket(r.clone(), std::slice::from_ref(&g1), &[r.constant(1)], &Budget::default()).unwrap();
        assert!(unit.equal(&b).unwrap());
        assert!(Ideal::bracket(r.clone(), &[g1], &[Polynomial::zero()], &Budget::default()).is_err());
    }

    #[test]
    fn radical_witness() {
        let r = ring2();
        let o = canonical_order(&r);
        assert!(ideal(&r, G).squarefree_lt_radical_witness(&o).unwrap());
        assert!(!ideal(&r, "x[1][1]^2").squarefree_lt_radical_witness(&o).unwrap());
    }

    #[test]
    fn powers() {
        let r = ring2();
        let i2 = ideal(&r, G);
        assert_eq!(i2.power(2).generators().len(), 3);
        assert_eq!(i2.power(3).generators().len(), 4);
        let g1 = &i2.generators()[0];
        assert!(i2.power(2).member(&(g1 * g1)).unwrap());
        assert!(i2.contains_ideal(&i2.power(2)).unwrap());
    }

    #[test]
    fn leading_coefficient_in_a_variable() {
        let r = ring2();
        let g1 = r.parse_poly("x[1][1]*y[1] + x[1][2]*y[2]").unwrap();
        let v = r.index_of(Variable::X(1, 2)).unwrap();
        assert_eq!(leading_coefficient_in(&g1, v), (1, r.y(2)));
    }
}
