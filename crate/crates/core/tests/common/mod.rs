//! Oracles that share no code with the Gröbner engine.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use detideal::coeff::{Coeff, CoeffField};
use detideal::detlab::SymbolicMatrix;
use detideal::ring::{ExponentVector, Polynomial, Ring, Variable};
use rand::Rng;

/// Leibniz formula: sum over all permutations of signed products.
pub fn leibniz_det(x: &SymbolicMatrix) -> Polynomial {
    let n = x.cols();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Polynomial::zero();
    loop {
        let inv = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| perm[a] > perm[b])
            .count();
        let prod = (0..n).fold(x.ring().constant(1), |p, r| &p * &x.entry(r + 1, perm[r] + 1));
        acc = if inv % 2 == 0 { &acc + &prod } else { &acc - &prod };
        let Some(a) = (0..n.saturating_sub(1)).rev().find(|&a| perm[a] < perm[a + 1]) else {
            return acc;
        };
        let b = (a + 1..n).rev().find(|&b| perm[b] > perm[a]).unwrap();
        perm.swap(a, b);
        perm[a + 1..].reverse();
    }
}

/// All monomials of total degree `d` in variables `0..nvars`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<ExponentVector> {
    fn go(var: usize, nvars: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<ExponentVector>) {
        if var + 1 == nvars {
            let mut pairs = cur.clone();
            if left > 0 {
                pairs.push((var, left));
            }
            out.push(ExponentVector::from_pairs(pairs).unwrap());
            return;
        }
        for e in 0..=left {
            if e > 0 {
                cur.push((var, e));
            }
            go(var + 1, nvars, left - e, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, nvars, d, &mut Vec::new(), &mut out);
    out
}

/// Is `target` in the row space of `rows`? Dense exact Gaussian elimination.
fn in_row_space(rows: Vec<Vec<Coeff>>, mut target: Vec<Coeff>) -> bool {
    let mut basis: Vec<(usize, Vec<Coeff>)> = Vec::new();
    for mut r in rows {
        for (p, b) in &basis {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for (x, y) in r.iter_mut().zip(b) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        if let Some(p) = r.iter().position(|c| !c.is_zero()) {
            let inv = r[p].inv().unwrap();
            for x in r.iter_mut() {
                *x = &*x * &inv;
            }
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    for (x, y) in b.iter_mut().zip(&r) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            basis.push((p, r));
        }
    }
    for (p, b) in &basis {
        if !target[*p].is_zero() {
            let f = target[*p].clone();
            for (x, y) in target.iter_mut().zip(b) {
                *x = &*x - &(&f * y);
            }
        }
    }
    target.iter().all(|c| c.is_zero())
}

/// Membership of `f` in the ideal of homogeneous `gens`, decided degree by
/// degree with Macaulay matrices: the degree-d part of the ideal is spanned
/// by the products m·g with deg m = d − deg g.
pub fn macaulay_member(nvars: usize, field: CoeffField, gens: &[Polynomial], f: &Polynomial) -> bool {
    assert!(gens.iter().all(|g| g.is_homogeneous() && !g.is_zero()));
    let mut parts: HashMap<u32, Vec<(ExponentVector, Coeff)>> = HashMap::new();
    for (m, c) in f.terms() {
        parts.entry(m.degree()).or_default().push((m.clone(), c.clone()));
    }
    parts.into_iter().all(|(d, terms)| {
        let cols = monomials_of_degree(nvars, d);
        let index: HashMap<&ExponentVector, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for g in gens {
            let dg = g.total_degree();
            if dg > d {
                continue;
            }
            for m in monomials_of_degree(nvars, d - dg) {
                let mut row = vec![field.zero(); cols.len()];
                for (gm, gc) in g.terms() {
                    row[index[&gm.mul(&m)]] = gc.clone();
                }
                rows.push(row);
            }
        }
        let mut target = vec![field.zero(); cols.len()];
        for (m, c) in terms {
            target[index[&m]] = c;
        }
        in_row_space(rows, target)
    })
}

pub fn flat_ring(nvars: usize, field: CoeffField) -> Arc<Ring> {
    Arc::new(Ring::new(field, (1..=nvars).map(|j| Variable::X(1, j as u16))))
}

fn random_coeff<R: Rng>(rng: &mut R, field: CoeffField) -> Coeff {
    loop {
        let c = field.from_i64(rng.gen_range(-5..=5));
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_homogeneous<R: Rng>(rng: &mut R, nvars: usize, field: CoeffField, d: u32, terms: usize) -> Polynomial {
    let pool = monomials_of_degree(nvars, d);
    loop {
        let p = Polynomial::from_terms(
            (0..terms).map(|_| (pool[rng.gen_range(0..pool.len())].clone(), random_coeff(rng, field))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random (ideal, polynomial) pair: homogeneous generators of degree
/// 1..=2 in at most 8 variables, and a polynomial of degree at most 4 that
/// is a combination of the generators half of the time.
pub struct Case {
    pub ring: Arc<Ring>,
    pub gens: Vec<Polynomial>,
    pub poly: Polynomial,
    pub constructed_member: bool,
}

pub fn random_case<R: Rng>(rng: &mut R, field: CoeffField) -> Case {
    let nvars = rng.gen_range(2..=8);
    let ring = flat_ring(nvars, field);
    let ngens = rng.gen_range(1..=3);
    let gens: Vec<Polynomial> = (0..ngens)
        .map(|_| {
            let d = rng.gen_range(1..=2);
            let t = rng.gen_range(1..=3);
            random_homogeneous(rng, nvars, field, d, t)
        })
        .collect();
    let constructed_member = rng.gen_bool(0.5);
    let poly = if constructed_member {
        let mut acc = Polynomial::zero();
        for g in &gens {
            let room = 4 - g.total_degree();
            let d = rng.gen_range(0..=room);
            let t = rng.gen_range(1..=2);
            acc = &acc + &(&random_homogeneous(rng, nvars, field, d, t) * g);
        }
        acc
    } else {
        let d = rng.gen_range(1..=4);
        let t = rng.gen_range(1..=3);
        random_homogeneous(rng, nvars, field, d, t)
    };
    Case { ring, gens, poly, constructed_member }
}
