mod common;

use std::sync::Arc;

use detideal::coeff::CoeffField;
use detideal::detlab::{MatrixKind, SymbolicMatrix};
use detideal::groebner::{buchberger, is_groebner, Budget};
use detideal::ideal::Ideal;
use detideal::ring::{MonomialOrder, Polynomial, Ring};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_ideal(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, count: usize) -> Ideal {
    let field = ring.field();
    let gens = (0..count)
        .map(|_| {
            let d = rand::Rng::gen_range(rng, 1..=2);
            let t = rand::Rng::gen_range(rng, 1..=2);
            common::random_homogeneous(rng, ring.nvars(), field, d, t)
        })
        .collect();
    Ideal::new(ring.clone(), gens)
}

fn setup(seed: u64) -> (ChaCha8Rng, Arc<Ring>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = rand::Rng::gen_range(&mut rng, 2..=4);
    (rng, common::flat_ring(nvars, CoeffField::Rationals))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn intersection_bounds(seed in any::<u64>()) {
        let (mut rng, ring) = setup(seed);
        let a = random_ideal(&mut rng, &ring, 2);
        let b = random_ideal(&mut rng, &ring, 2);
        let meet = a.intersect(&b).unwrap();
        prop_assert!(a.contains_ideal(&meet).unwrap());
        prop_assert!(b.contains_ideal(&meet).unwrap());
        prop_assert!(meet.contains_ideal(&a.product(&b)).unwrap());
        prop_assert!(meet.equal(&b.intersect(&a).unwrap()).unwrap());
    }

    #[test]
    fn colon_and_saturation(seed in any::<u64>()) {
        let (mut rng, ring) = setup(seed);
        let a = random_ideal(&mut rng, &ring, 2);
        let f = random_ideal(&mut rng, &ring, 1).generators()[0].clone();
        let q = a.quotient(&f).unwrap();
        prop_assert!(q.contains_ideal(&a).unwrap());
        let s = a.saturate(&f).unwrap();
        prop_assert!(s.contains_ideal(&q).unwrap());
        prop_assert!(s.saturate(&f).unwrap().equal(&s).unwrap());
        let (it, _) = a.saturate_iterated(&f).unwrap();
        prop_assert!(it.equal(&s).unwrap());
    }

    #[test]
    fn reduced_basis_is_canonical(seed in any::<u64>()) {
        let (mut rng, ring) = setup(seed);
        let a = random_ideal(&mut rng, &ring, 3);
        let mut perm: Vec<usize> = (0..ring.nvars()).collect();
        perm.shuffle(&mut rng);
        let order = MonomialOrder::from_indices(perm).unwrap();
        let gb = buchberger(a.generators(), &order, &Budget::default()).unwrap();
        prop_assert!(is_groebner(gb.basis(), &order).holds());
        let mut shuffled = a.generators().to_vec();
        shuffled.shuffle(&mut rng);
        shuffled.push(&shuffled[0] + &shuffled[shuffled.len() - 1]);
        let again = buchberger(&shuffled, &order, &Budget::default()).unwrap();
        prop_assert_eq!(gb.basis(), again.basis());
        let twice = buchberger(gb.basis(), &order, &Budget::default()).unwrap();
        prop_assert_eq!(gb.basis(), twice.basis());
    }

    #[test]
    fn bases_under_different_orders_agree(seed in any::<u64>()) {
        let (mut rng, ring) = setup(seed);
        let a = random_ideal(&mut rng, &ring, 2);
        let mut perm: Vec<usize> = (0..ring.nvars()).collect();
        perm.reverse();
        let other = MonomialOrder::from_indices(perm).unwrap();
        let g1 = a.canonical_basis().unwrap();
        let g2 = a.groebner(&other).unwrap();
        prop_assert!(g2.basis().iter().all(|p| g1.contains(p)));
        prop_assert!(g1.basis().iter().all(|p| g2.contains(p)));
    }
}

#[test]
fn prime_field_agrees_on_decompositions() {
    let field = CoeffField::prime(32003).unwrap();
    for kind in [MatrixKind::Generic, MatrixKind::Symmetric] {
        for n in 1..=3 {
            let x = SymbolicMatrix::square(kind, n, field).unwrap();
            let r = x.ring().clone();
            let i = Ideal::new(r.clone(), x.xy_entries());
            let p = Ideal::new(r.clone(), x.ideal_generators(true).unwrap());
            let ys = Ideal::new(r.clone(), (1..=n).map(|j| x.y(j)).collect());
            assert!(ys.intersect(&p).unwrap().equal(&i).unwrap(), "{kind} {n}");
            assert!(i.saturate(&x.y(n)).unwrap().equal(&p).unwrap());
        }
    }
}

#[test]
fn determinant_matches_leibniz() {
    for kind in MatrixKind::ALL {
        for n in 1..=4 {
            let x = SymbolicMatrix::square(kind, n, CoeffField::Rationals).unwrap();
            assert_eq!(x.determinant().unwrap(), common::leibniz_det(&x));
        }
    }
}

#[test]
fn s_polynomial_of_g1_and_det() {
    use detideal::detlab::OrderPreset;
    use detideal::groebner::s_polynomial;
    let x = SymbolicMatrix::square(MatrixKind::Generic, 2, CoeffField::Rationals).unwrap();
    let o = x.order(OrderPreset::Grob);
    let s = s_polynomial(&x.g(1), &x.determinant().unwrap(), &o);
    // LT(g1) = y1*x11, LT(det) = x11*x22: S = x22*g1 - y1*det
    let r = x.ring();
    let hand = r.parse_poly("x[1][2]*x[2][2]*y[2] + x[1][2]*x[2][1]*y[1]").unwrap();
    assert_eq!(s, hand);
    assert_eq!(s_polynomial(&x.g(1), &x.g(1), &o), Polynomial::zero());
}
