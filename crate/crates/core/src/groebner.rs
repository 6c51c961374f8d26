//! Multivariate division, S-polynomials and Buchberger's algorithm.
//!
//! All work happens on polynomials relabelled by variable rank, so that every
//! lex order becomes the natural order of [`ExponentVector`] and leading terms
//! sit at the front of the term list.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::coeff::Coeff;
use crate::ring::{ExponentVector, MonomialOrder, Polynomial, RingError};

/// Default cap on S-pair reductions per run.
pub const DEFAULT_MAX_PAIRS: u64 = 1_000_000;
/// Default cap on the number of terms in any intermediate polynomial.
pub const DEFAULT_MAX_POLY_LEN: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: u64,
    pub max_poly_len: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: DEFAULT_MAX_PAIRS,
            max_poly_len: DEFAULT_MAX_POLY_LEN,
            deadline: None,
        }
    }
}

impl Budget {
    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }
}

/// Counters attached to every computed basis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GbStats {
    pub pairs_created: u64,
    pub pairs_reduced: u64,
    pub coprime_skipped: u64,
    pub chain_skipped: u64,
    pub zero_reductions: u64,
    pub reduction_steps: u64,
    pub max_poly_len: usize,
    pub basis_len: usize,
}

impl GbStats {
    pub fn absorb(&mut self, o: &GbStats) {
        self.pairs_created += o.pairs_created;
        self.pairs_reduced += o.pairs_reduced;
        self.coprime_skipped += o.coprime_skipped;
        self.chain_skipped += o.chain_skipped;
        self.zero_reductions += o.zero_reductions;
        self.reduction_steps += o.reduction_steps;
        self.max_poly_len = self.max_poly_len.max(o.max_poly_len);
        self.basis_len = self.basis_len.max(o.basis_len);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("budget exceeded ({reason}) after {} pair reductions", stats.pairs_reduced)]
    Budget { reason: String, stats: GbStats },
    #[error("zero polynomial among the generators")]
    ZeroGenerator,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Result of dividing `p` by a list of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// A Gröbner basis together with the order that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    ranked: Vec<Polynomial>,
    reduced: bool,
    stats: GbStats,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Generators sorted by descending leading monomial.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn stats(&self) -> &GbStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.ranked.iter().any(|g| g.head().is_some_and(|t| t.0.is_one()))
    }

    pub fn leading_monomials(&self) -> Vec<ExponentVector> {
        let back = self.order.priority();
        self.ranked
            .iter()
            .map(|g| g.head().expect("nonzero basis element").0.relabel(back))
            .collect()
    }

    /// Normal form of `p` modulo the basis.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        check_vars(p, &self.order).expect("polynomial outside the order's ring");
        let r = normal_form(&p.relabel(self.order.rank_map()), &self.ranked, &mut GbStats::default());
        r.relabel(self.order.priority())
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

fn check_vars(p: &Polynomial, order: &MonomialOrder) -> Result<(), RingError> {
    for (m, _) in p.terms() {
        if let Some(v) = m.max_var() {
            if v >= order.nvars() {
                return Err(RingError::VariableNotInOrder(v));
            }
        }
    }
    Ok(())
}

fn index_of_reducer(ranked: &[Polynomial], m: &ExponentVector) -> Option<usize> {
    // shortest reducer first; ties by position
    let mut best: Option<usize> = None;
    for (k, g) in ranked.iter().enumerate() {
        let lt = &g.head().expect("nonzero reducer").0;
        if lt.divides(m) && best.is_none_or(|b| ranked[b].len() > g.len()) {
            best = Some(k);
        }
    }
    best
}

/// Full reduction on ranked polynomials; reducers need not be monic.
fn normal_form(p: &Polynomial, ranked: &[Polynomial], stats: &mut GbStats) -> Polynomial {
    let mut rest: Vec<_> = p.terms().to_vec();
    let mut rem = Vec::new();
    let mut start = 0;
    while start < rest.len() {
        let (m, c) = &rest[start];
        match index_of_reducer(ranked, m) {
            Some(k) => {
                let (gm, gc) = ranked[k].head().unwrap();
                let qm = gm.quotient_of(m).unwrap();
                let qc = c.checked_div(gc).expect("nonzero leading coefficient");
                rest = crate::ring::sub_scaled(&rest[start..], &qc, &qm, ranked[k].terms());
                start = 0;
                stats.reduction_steps += 1;
                stats.max_poly_len = stats.max_poly_len.max(rest.len());
            }
            None => {
                rem.push(rest[start].clone());
                start += 1;
            }
        }
    }
    Polynomial::from_sorted(rem)
}

/// Division algorithm: `p = Σ qᵢ·gᵢ + r` with no term of `r` divisible by
/// any `LT(gᵢ)`. The first divisor (in list order) is used at each step.
pub fn reduce(p: &Polynomial, divisors: &[Polynomial], order: &MonomialOrder) -> Division {
    let rank = order.rank_map();
    let back = order.priority();
    let gs: Vec<Polynomial> = divisors.iter().map(|g| g.relabel(rank)).collect();
    let mut quotients: Vec<Vec<(ExponentVector, Coeff)>> = vec![Vec::new(); gs.len()];
    let mut rest = p.relabel(rank).into_terms();
    let mut rem = Vec::new();
    let mut start = 0;
    while start < rest.len() {
        let (m, c) = &rest[start];
        let hit = gs
            .iter()
            .position(|g| g.head().is_some_and(|(gm, _)| gm.divides(m)));
        match hit {
            Some(k) => {
                let (gm, gc) = gs[k].head().unwrap();
                let qm = gm.quotient_of(m).unwrap();
                let qc = c.checked_div(gc).expect("nonzero leading coefficient");
                rest = crate::ring::sub_scaled(&rest[start..], &qc, &qm, gs[k].terms());
                start = 0;
                quotients[k].push((qm, qc));
            }
            None => {
                rem.push(rest[start].clone());
                start += 1;
            }
        }
    }
    Division {
        quotients: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(q).relabel(back))
            .collect(),
        remainder: Polynomial::from_sorted(rem).relabel(back),
    }
}

fn s_poly_ranked(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.head().expect("nonzero");
    let (gm, gc) = g.head().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_term(&fc.inv().expect("nonzero"), &fm.quotient_of(&l).unwrap());
    let b = g.mul_term(&gc.inv().expect("nonzero"), &gm.quotient_of(&l).unwrap());
    &a - &b
}

/// S(f,g) = (L/LT(f))·f − (L/LT(g))·g with L = lcm of the leading monomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let rank = order.rank_map();
    s_poly_ranked(&f.relabel(rank), &g.relabel(rank)).relabel(order.priority())
}

/// The first pair whose leading monomials share a variable, if any.
///
/// `None` means the leading terms are pairwise coprime, in which case the
/// polynomials form a Gröbner basis and a regular sequence.
pub fn first_non_coprime_pair(
    gens: &[Polynomial],
    order: &MonomialOrder,
) -> Result<Option<(usize, usize)>, RingError> {
    let lts = gens
        .iter()
        .map(|g| g.leading_term(order).map(|t| t.1))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..lts.len() {
        for j in i + 1..lts.len() {
            if !lts[i].is_coprime(&lts[j]) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn leading_terms_coprime(gens: &[Polynomial], order: &MonomialOrder) -> Result<bool, RingError> {
    first_non_coprime_pair(gens, order).map(|p| p.is_none())
}

/// Outcome of the Buchberger criterion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionCheck {
    pub failing_pair: Option<(usize, usize)>,
    pub remainder: Polynomial,
}

impl CriterionCheck {
    pub fn holds(&self) -> bool {
        self.failing_pair.is_none()
    }
}

/// Checks every S-polynomial of `gens` reduces to zero modulo `gens`.
/// No pair is skipped, so the check is independent of the engine's criteria.
pub fn is_groebner(gens: &[Polynomial], order: &MonomialOrder) -> CriterionCheck {
    let rank = order.rank_map();
    let gs: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.relabel(rank)).collect();
    let mut stats = GbStats::default();
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            let r = normal_form(&s_poly_ranked(&gs[i], &gs[j]), &gs, &mut stats);
            if !r.is_zero() {
                return CriterionCheck {
                    failing_pair: Some((i, j)),
                    remainder: r.relabel(order.priority()),
                };
            }
        }
    }
    CriterionCheck {
        failing_pair: None,
        remainder: Polynomial::zero(),
    }
}

struct Engine<'b> {
    basis: Vec<Polynomial>,
    pending: BTreeSet<(ExponentVector, usize, usize)>,
    pending_ids: HashSet<(usize, usize)>,
    budget: &'b Budget,
    stats: GbStats,
}

impl Engine<'_> {
    fn lt(&self, i: usize) -> &ExponentVector {
        &self.basis[i].head().unwrap().0
    }

    fn over_budget(&self, reason: &str) -> GroebnerError {
        let mut stats = self.stats;
        stats.basis_len = self.basis.len();
        GroebnerError::Budget {
            reason: reason.to_string(),
            stats,
        }
    }

    fn check_budget(&self) -> Result<(), GroebnerError> {
        if self.stats.pairs_reduced > self.budget.max_pairs {
            return Err(self.over_budget("pair reductions"));
        }
        if self.stats.max_poly_len > self.budget.max_poly_len {
            return Err(self.over_budget("polynomial length"));
        }
        if let Some(d) = self.budget.deadline {
            if Instant::now() >= d {
                return Err(self.over_budget("wall clock"));
            }
        }
        Ok(())
    }

    fn add(&mut self, h: Polynomial) {
        let k = self.basis.len();
        self.basis.push(h.monic());
        for i in 0..k {
            self.stats.pairs_created += 1;
            if self.lt(i).is_coprime(self.lt(k)) {
                self.stats.coprime_skipped += 1;
                continue;
            }
            let l = self.lt(i).lcm(self.lt(k));
            self.pending.insert((l, i, k));
            self.pending_ids.insert((i, k));
        }
    }

    fn is_pending(&self, a: usize, b: usize) -> bool {
        self.pending_ids.contains(&(a.min(b), a.max(b)))
    }

    /// Buchberger's chain criterion: skip (i,j) when some LT(k) divides the
    /// lcm and both (i,k), (j,k) are already treated.
    fn chain_redundant(&self, l: &ExponentVector, i: usize, j: usize) -> bool {
        (0..self.basis.len()).any(|k| {
            k != i
                && k != j
                && self.lt(k).divides(l)
                && !self.is_pending(i, k)
                && !self.is_pending(j, k)
        })
    }

    fn run(&mut self) -> Result<(), GroebnerError> {
        while let Some((l, i, j)) = self.pending.pop_first() {
            self.pending_ids.remove(&(i, j));
            if self.chain_redundant(&l, i, j) {
                self.stats.chain_skipped += 1;
                continue;
            }
            self.stats.pairs_reduced += 1;
            let s = s_poly_ranked(&self.basis[i], &self.basis[j]);
            let r = normal_form(&s, &self.basis, &mut self.stats);
            self.check_budget()?;
            if r.is_zero() {
                self.stats.zero_reductions += 1;
            } else {
                self.add(r);
            }
        }
        Ok(())
    }
}

/// Minimal, fully interreduced, monic basis sorted by descending leading monomial.
fn interreduce(mut gs: Vec<Polynomial>, stats: &mut GbStats) -> Vec<Polynomial> {
    gs.sort_by(|a, b| a.head().unwrap().0.cmp(&b.head().unwrap().0));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in gs {
        // ascending LT: a divisor of g's LT is already present if one exists
        let lt = &g.head().unwrap().0;
        if !minimal.iter().any(|h| h.head().unwrap().0.divides(lt)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let (lm, lc) = minimal[k].head().unwrap().clone();
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != k)
            .map(|(_, h)| h.clone())
            .collect();
        let tail = Polynomial::from_sorted(minimal[k].terms()[1..].to_vec());
        let tail = normal_form(&tail, &others, stats);
        let head = Polynomial::monomial(lc, lm);
        out.push((&head + &tail).monic());
    }
    out.reverse();
    out
}

/// Reduced Gröbner basis of ⟨gens⟩ under `order`.
pub fn buchberger(
    gens: &[Polynomial],
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis, GroebnerError> {
    for g in gens {
        check_vars(g, order)?;
    }
    let rank = order.rank_map();
    let mut engine = Engine {
        basis: Vec::new(),
        pending: BTreeSet::new(),
        pending_ids: HashSet::new(),
        budget,
        stats: GbStats::default(),
    };
    // inputs are interreduced first so that the pair set starts small
    let inputs: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.relabel(rank))
        .collect();
    if inputs.is_empty() {
        return Ok(GroebnerBasis {
            order: order.clone(),
            basis: Vec::new(),
            ranked: Vec::new(),
            reduced: true,
            stats: engine.stats,
        });
    }
    for g in interreduce_inputs(inputs, &mut engine.stats) {
        engine.add(g);
    }
    engine.run()?;
    let mut stats = engine.stats;
    let ranked = interreduce(engine.basis, &mut stats);
    stats.basis_len = ranked.len();
    let basis = ranked.iter().map(|g| g.relabel(order.priority())).collect();
    Ok(GroebnerBasis {
        order: order.clone(),
        basis,
        ranked,
        reduced: true,
        stats,
    })
}

/// Autoreduces the input list against itself; zero results are dropped.
fn interreduce_inputs(mut gs: Vec<Polynomial>, stats: &mut GbStats) -> Vec<Polynomial> {
    loop {
        let mut changed = false;
        let mut k = 0;
        while k < gs.len() {
            let others: Vec<Polynomial> = gs
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != k)
                .map(|(_, h)| h.clone())
                .collect();
            let r = normal_form(&gs[k], &others, stats);
            if r != gs[k] {
                changed = true;
                if r.is_zero() {
                    gs.remove(k);
                    continue;
                }
                gs[k] = r;
            }
            k += 1;
        }
        if !changed {
            return gs;
        }
    }
}

impl GroebnerBasis {
    /// Wraps an already-known basis without recomputation.
    pub fn from_parts(order: MonomialOrder, basis: Vec<Polynomial>, reduced: bool) -> Self {
        let ranked = basis.iter().map(|g| g.relabel(order.rank_map())).collect();
        GroebnerBasis {
            order,
            basis,
            ranked,
            reduced,
            stats: GbStats::default(),
        }
    }

    pub(crate) fn set_stats(&mut self, stats: GbStats) {
        self.stats = stats;
    }
}
